//! Finite normal-form games, mixed and correlated distributions, and the regret
//! quantities that decide Nash, approximate Nash and correlated equilibria.
//!
//! Joint pure strategies are flattened row-major over players, with player 0 the
//! slowest-varying index. The quantum modules share this ordering for their
//! tensor-product bases.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerance;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Game {
    strategy_counts: Vec<usize>,
    utilities: Vec<Vec<f64>>,
    positively_normalized: bool,
}

impl Game {
    /// `utilities[i]` is player `i`'s payoff tensor flattened row-major.
    pub fn new(strategy_counts: Vec<usize>, utilities: Vec<Vec<f64>>) -> Result<Self> {
        if strategy_counts.is_empty() {
            return Err(Error::InvalidGame(
                "a game needs at least one player".into(),
            ));
        }
        if let Some(i) = strategy_counts.iter().position(|&m| m == 0) {
            return Err(Error::InvalidGame(format!("player {i} has no strategies")));
        }
        if utilities.len() != strategy_counts.len() {
            return Err(Error::InvalidGame(format!(
                "{} utility tensors for {} players",
                utilities.len(),
                strategy_counts.len()
            )));
        }
        let size: usize = strategy_counts.iter().product();
        for (i, u) in utilities.iter().enumerate() {
            if u.len() != size {
                return Err(Error::InvalidGame(format!(
                    "utility tensor of player {i} has {} entries, expected {size}",
                    u.len()
                )));
            }
            if u.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidGame(format!(
                    "player {i} has a non-finite utility"
                )));
            }
        }
        Ok(Self {
            strategy_counts,
            utilities,
            positively_normalized: false,
        })
    }

    /// Two-player game from row-player matrix `a` and column-player matrix `b`.
    pub fn bimatrix(a: &[Vec<f64>], b: &[Vec<f64>]) -> Result<Self> {
        let rows = a.len();
        let cols = a.first().map_or(0, Vec::len);
        if b.len() != rows || a.iter().chain(b).any(|r| r.len() != cols) {
            return Err(Error::InvalidGame("bimatrix payoff shapes differ".into()));
        }
        let flat = |m: &[Vec<f64>]| m.iter().flatten().copied().collect::<Vec<_>>();
        Self::new(vec![rows, cols], vec![flat(a), flat(b)])
    }

    /// Two-player game where both players receive `u(s1, s2)`.
    pub fn common_payoff(u: &[Vec<f64>]) -> Result<Self> {
        Self::bimatrix(u, u)
    }

    /// Mark the game as positively normalized; fails unless every entry is in `[0, 1]`.
    pub fn with_positive_normalization(mut self) -> Result<Self> {
        if !self.entries_in_unit_interval() {
            return Err(Error::InvalidGame(
                "flagged positively normalized but has entries outside [0, 1]".into(),
            ));
        }
        self.positively_normalized = true;
        Ok(self)
    }

    pub fn num_players(&self) -> usize {
        self.strategy_counts.len()
    }

    pub fn strategy_counts(&self) -> &[usize] {
        &self.strategy_counts
    }

    pub fn num_strategies(&self, player: usize) -> usize {
        self.strategy_counts[player]
    }

    /// `|S|`, the number of joint pure strategies.
    pub fn num_profiles(&self) -> usize {
        self.strategy_counts.iter().product()
    }

    pub fn utilities(&self, player: usize) -> &[f64] {
        &self.utilities[player]
    }

    pub fn utility(&self, player: usize, joint: usize) -> f64 {
        self.utilities[player][joint]
    }

    pub fn positively_normalized(&self) -> bool {
        self.positively_normalized
    }

    pub fn entries_in_unit_interval(&self) -> bool {
        self.utilities
            .iter()
            .flatten()
            .all(|&x| (0.0..=1.0).contains(&x))
    }

    pub fn check_player(&self, player: usize) -> Result<()> {
        if player >= self.num_players() {
            return Err(Error::InvalidPlayer {
                index: player,
                players: self.num_players(),
            });
        }
        Ok(())
    }

    pub fn stride(&self, player: usize) -> usize {
        stride(&self.strategy_counts, player)
    }

    pub fn joint_index(&self, strategies: &[usize]) -> usize {
        joint_index(&self.strategy_counts, strategies)
    }

    pub fn decode(&self, joint: usize) -> Vec<usize> {
        decode(&self.strategy_counts, joint)
    }

    /// Affine map of each player's utilities onto `[0, 1]` (constant tensors map to 0).
    /// Returns the rescaled game and, per player, the `(scale, offset)` with
    /// `new = scale * old + offset`; regrets of player `i` scale by `scale`.
    pub fn rescaled_to_unit(&self) -> (Game, Vec<(f64, f64)>) {
        let mut maps = Vec::with_capacity(self.num_players());
        let utilities = self
            .utilities
            .iter()
            .map(|u| {
                let lo = u.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = u.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let scale = if hi > lo { 1.0 / (hi - lo) } else { 0.0 };
                let offset = -lo * scale;
                maps.push((scale, offset));
                u.iter()
                    .map(|&x| (scale * x + offset).clamp(0.0, 1.0))
                    .collect()
            })
            .collect();
        let game = Game {
            strategy_counts: self.strategy_counts.clone(),
            utilities,
            positively_normalized: true,
        };
        (game, maps)
    }

    /// Copy of the game with player `player`'s utilities mapped through `f`.
    pub fn map_utilities(&self, player: usize, f: impl Fn(f64) -> f64) -> Result<Game> {
        self.check_player(player)?;
        let mut utilities = self.utilities.clone();
        utilities[player].iter_mut().for_each(|x| *x = f(*x));
        Game::new(self.strategy_counts.clone(), utilities)
    }
}

pub fn stride(counts: &[usize], player: usize) -> usize {
    counts[player + 1..].iter().product()
}

pub fn joint_index(counts: &[usize], strategies: &[usize]) -> usize {
    strategies
        .iter()
        .zip(counts)
        .fold(0, |acc, (&s, &m)| acc * m + s)
}

pub fn decode(counts: &[usize], mut joint: usize) -> Vec<usize> {
    let mut out = vec![0; counts.len()];
    for (slot, &m) in out.iter_mut().zip(counts).rev() {
        *slot = joint % m;
        joint /= m;
    }
    out
}

/// Strategy of `player` inside joint index `joint`.
#[inline]
pub fn coordinate(counts: &[usize], joint: usize, player: usize) -> usize {
    (joint / stride(counts, player)) % counts[player]
}

fn validate_probabilities(p: &mut [f64], what: &str) -> Result<()> {
    if p.is_empty() {
        return Err(Error::InvalidDistribution(format!("{what} is empty")));
    }
    let mut total = 0.0;
    for x in p.iter_mut() {
        if !x.is_finite() || *x < -1e-12 {
            return Err(Error::InvalidDistribution(format!(
                "{what} has negative or non-finite mass {x}"
            )));
        }
        *x = x.max(0.0);
        total += *x;
    }
    if (total - 1.0).abs() > tolerance::PROBABILITY_SUM {
        return Err(Error::InvalidDistribution(format!(
            "{what} sums to {total}"
        )));
    }
    Ok(())
}

/// Product distribution `p_1 x ... x p_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixedProfile {
    strategies: Vec<Vec<f64>>,
}

impl MixedProfile {
    pub fn new(mut strategies: Vec<Vec<f64>>) -> Result<Self> {
        if strategies.is_empty() {
            return Err(Error::InvalidDistribution("profile has no players".into()));
        }
        for (i, p) in strategies.iter_mut().enumerate() {
            validate_probabilities(p, &format!("strategy of player {i}"))?;
        }
        Ok(Self { strategies })
    }

    /// Point mass on the given pure strategies.
    pub fn pure(counts: &[usize], strategies: &[usize]) -> Result<Self> {
        if counts.len() != strategies.len() || strategies.iter().zip(counts).any(|(&s, &m)| s >= m)
        {
            return Err(Error::DimensionMismatch(
                "pure strategy out of range".into(),
            ));
        }
        Self::new(
            counts
                .iter()
                .zip(strategies)
                .map(|(&m, &s)| (0..m).map(|t| if t == s { 1.0 } else { 0.0 }).collect())
                .collect(),
        )
    }

    pub fn uniform(counts: &[usize]) -> Self {
        Self {
            strategies: counts.iter().map(|&m| vec![1.0 / m as f64; m]).collect(),
        }
    }

    pub fn num_players(&self) -> usize {
        self.strategies.len()
    }

    pub fn player(&self, i: usize) -> &[f64] {
        &self.strategies[i]
    }

    pub fn strategies(&self) -> &[Vec<f64>] {
        &self.strategies
    }

    pub fn counts(&self) -> Vec<usize> {
        self.strategies.iter().map(Vec::len).collect()
    }

    /// Probability of a joint pure strategy.
    pub fn prob(&self, joint: &[usize]) -> f64 {
        self.strategies
            .iter()
            .zip(joint)
            .map(|(p, &s)| p[s])
            .product()
    }

    pub fn to_joint(&self) -> JointDistribution {
        let counts = self.counts();
        let size: usize = counts.iter().product();
        let probs = (0..size).map(|j| self.prob(&decode(&counts, j))).collect();
        JointDistribution { probs }
    }

    /// True when every player puts more than `tol` on every strategy.
    pub fn has_full_support(&self, tol: f64) -> bool {
        self.strategies.iter().flatten().all(|&x| x > tol)
    }

    fn check_against(&self, game: &Game) -> Result<()> {
        if self.counts() != game.strategy_counts() {
            return Err(Error::DimensionMismatch(format!(
                "profile shape {:?} vs game {:?}",
                self.counts(),
                game.strategy_counts()
            )));
        }
        Ok(())
    }
}

/// General (possibly correlated) distribution over joint pure strategies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointDistribution {
    probs: Vec<f64>,
}

impl JointDistribution {
    pub fn new(mut probs: Vec<f64>) -> Result<Self> {
        validate_probabilities(&mut probs, "joint distribution")?;
        Ok(Self { probs })
    }

    pub fn point_mass(size: usize, at: usize) -> Result<Self> {
        if at >= size {
            return Err(Error::DimensionMismatch(format!(
                "outcome {at} outside {size}"
            )));
        }
        let mut probs = vec![0.0; size];
        probs[at] = 1.0;
        Ok(Self { probs })
    }

    pub fn uniform(size: usize) -> Self {
        Self {
            probs: vec![1.0 / size as f64; size],
        }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Marginal of `player` under the given factorisation.
    pub fn marginal(&self, counts: &[usize], player: usize) -> Vec<f64> {
        let mut out = vec![0.0; counts[player]];
        for (j, &p) in self.probs.iter().enumerate() {
            out[coordinate(counts, j, player)] += p;
        }
        out
    }

    /// `alpha * self + (1 - alpha) * other`.
    pub fn mix(&self, other: &JointDistribution, alpha: f64) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch(
                "mixing distributions of different size".into(),
            ));
        }
        Self::new(
            self.probs
                .iter()
                .zip(&other.probs)
                .map(|(a, b)| alpha * a + (1.0 - alpha) * b)
                .collect(),
        )
    }

    fn check_against(&self, game: &Game) -> Result<()> {
        if self.len() != game.num_profiles() {
            return Err(Error::DimensionMismatch(format!(
                "distribution over {} outcomes, game has {}",
                self.len(),
                game.num_profiles()
            )));
        }
        Ok(())
    }
}

/// `sum_s p(s) u_i(s)`.
pub fn expected_utility(game: &Game, p: &JointDistribution, player: usize) -> Result<f64> {
    game.check_player(player)?;
    p.check_against(game)?;
    Ok(p.probs
        .iter()
        .zip(game.utilities(player))
        .map(|(p, u)| p * u)
        .sum())
}

/// Payoff of each pure strategy of `player` against the others' mixed strategies.
pub fn deviation_payoffs(game: &Game, p: &MixedProfile, player: usize) -> Result<Vec<f64>> {
    game.check_player(player)?;
    p.check_against(game)?;
    let counts = game.strategy_counts();
    let mut values = vec![0.0; counts[player]];
    for (j, &u) in game.utilities(player).iter().enumerate() {
        let s = decode(counts, j);
        let weight: f64 = s
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != player)
            .map(|(k, &sk)| p.player(k)[sk])
            .product();
        values[s[player]] += weight * u;
    }
    Ok(values)
}

/// Largest gain from switching a supported strategy to any other, unclamped.
pub fn nash_regret_signed(
    game: &Game,
    p: &MixedProfile,
    player: usize,
    support_tol: f64,
) -> Result<f64> {
    let values = deviation_payoffs(game, p, player)?;
    let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    p.player(player)
        .iter()
        .zip(&values)
        .filter(|(&mass, _)| mass > support_tol)
        .map(|(_, &v)| best - v)
        .reduce(f64::max)
        .ok_or(Error::EmptySupport { player })
}

/// Regret of `player` under `p`: zero exactly at a best response on the support.
pub fn nash_regret(game: &Game, p: &MixedProfile, player: usize, support_tol: f64) -> Result<f64> {
    Ok(nash_regret_signed(game, p, player, support_tol)?.max(0.0))
}

/// `max_i nash_regret`; `p` is an epsilon-approximate equilibrium iff this is at most epsilon.
pub fn max_nash_regret(game: &Game, p: &MixedProfile) -> Result<f64> {
    (0..game.num_players())
        .map(|i| nash_regret(game, p, i, tolerance::SUPPORT))
        .try_fold(0.0f64, |acc, r| Ok(acc.max(r?)))
}

/// Matrix `g[s][t] = sum_{s_-i} p(s, s_-i) [u_i(t, s_-i) - u_i(s, s_-i)]` of gains from
/// following recommendation `s` with `t` instead.
pub fn correlated_gains(
    game: &Game,
    p: &JointDistribution,
    player: usize,
) -> Result<Vec<Vec<f64>>> {
    game.check_player(player)?;
    p.check_against(game)?;
    let counts = game.strategy_counts();
    let m = counts[player];
    let st = game.stride(player);
    let u = game.utilities(player);
    let mut gains = vec![vec![0.0; m]; m];
    for (j, &mass) in p.probs.iter().enumerate() {
        if mass == 0.0 {
            continue;
        }
        let s = coordinate(counts, j, player);
        let base = j - s * st;
        for (t, g) in gains[s].iter_mut().enumerate() {
            *g += mass * (u[base + t * st] - u[j]);
        }
    }
    Ok(gains)
}

/// Largest gain from any recommendation swap, clamped at zero.
pub fn correlated_regret(game: &Game, p: &JointDistribution, player: usize) -> Result<f64> {
    let gains = correlated_gains(game, p, player)?;
    Ok(gains.iter().flatten().copied().fold(0.0, f64::max))
}

pub fn max_correlated_regret(game: &Game, p: &JointDistribution) -> Result<f64> {
    (0..game.num_players())
        .map(|i| correlated_regret(game, p, i))
        .try_fold(0.0f64, |acc, r| Ok(acc.max(r?)))
}
