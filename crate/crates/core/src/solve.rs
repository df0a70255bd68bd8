//! Classical equilibrium computation: exact Nash equilibria of small bimatrix games
//! by support enumeration, correlated equilibria by linear programming, and sampling
//! of pure strategies from mixed profiles.

use microlp::{ComparisonOp, OptimizationDirection, Problem, Variable};
use nalgebra::{DMatrix, DVector};
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{self, Game, JointDistribution, MixedProfile};

use crate::rng::{self, Rng};
use crate::tolerance;

/// Largest per-player strategy count accepted by support enumeration.
pub const MAX_ENUMERATION_STRATEGIES: usize = 6;
/// Largest number of joint strategies accepted by the correlated-equilibrium LP.
pub const MAX_LP_PROFILES: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Equilibrium {
    pub profile: MixedProfile,
    /// Largest Nash regret over players.
    pub regret: f64,
    /// Support bitmasks of the two players.
    pub supports: (u32, u32),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumSet {
    pub equilibria: Vec<Equilibrium>,
}

impl EquilibriumSet {
    pub fn len(&self) -> usize {
        self.equilibria.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equilibria.is_empty()
    }

    /// First equilibrium in enumeration order (smallest support size, then bitmask).
    pub fn first(&self) -> Option<&Equilibrium> {
        self.equilibria.first()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Equilibrium> {
        self.equilibria.iter()
    }
}

fn subsets_of_size(m: usize, k: usize) -> Vec<u32> {
    (0u32..1 << m)
        .filter(|s| s.count_ones() as usize == k)
        .collect()
}

fn members(mask: u32) -> Vec<usize> {
    (0..32).filter(|b| mask & (1 << b) != 0).collect()
}

/// Mixed strategy of the opponent over `cols` that makes the owner of `payoff`
/// indifferent between `rows`. `payoff(r, c)` is the owner's utility.
fn indifference(
    payoff: impl Fn(usize, usize) -> f64,
    rows: &[usize],
    cols: &[usize],
    width: usize,
) -> Option<Vec<f64>> {
    let k = rows.len();
    let mut a = DMatrix::<f64>::zeros(k + 1, k + 1);
    let mut b = DVector::<f64>::zeros(k + 1);
    for (r, &row) in rows.iter().enumerate() {
        for (c, &col) in cols.iter().enumerate() {
            a[(r, c)] = payoff(row, col);
        }
        a[(r, k)] = -1.0;
    }
    for c in 0..k {
        a[(k, c)] = 1.0;
    }
    b[k] = 1.0;
    let sv = a.clone().svd(false, false).singular_values;
    let (hi, lo) = sv
        .iter()
        .fold((0.0f64, f64::INFINITY), |(h, l), &s| (h.max(s), l.min(s)));
    if hi == 0.0 || lo / hi < 1e-12 {
        return None;
    }
    let x = a.lu().solve(&b)?;
    let mut mix = vec![0.0; width];
    for (c, &col) in cols.iter().enumerate() {
        if x[c] < -1e-12 {
            return None;
        }
        mix[col] = x[c].max(0.0);
    }
    Some(mix)
}

/// All Nash equilibria of a nondegenerate bimatrix game (and those with equal-size
/// supports of a degenerate one), in order of support size then support bitmasks.
pub fn support_enumeration(game: &Game) -> Result<EquilibriumSet> {
    if game.num_players() != 2 {
        return Err(Error::Unsupported(format!(
            "support enumeration needs 2 players, got {}",
            game.num_players()
        )));
    }
    let (m1, m2) = (game.num_strategies(0), game.num_strategies(1));
    if m1.max(m2) > MAX_ENUMERATION_STRATEGIES {
        return Err(Error::Unsupported(format!(
            "support enumeration capped at {MAX_ENUMERATION_STRATEGIES} strategies per player"
        )));
    }
    let u1 = |r: usize, c: usize| game.utility(0, r * m2 + c);
    let u2 = |r: usize, c: usize| game.utility(1, r * m2 + c);

    let candidates: Vec<(u32, u32)> = (1..=m1.min(m2))
        .flat_map(|k| {
            let rows = subsets_of_size(m1, k);
            let cols = subsets_of_size(m2, k);
            rows.into_iter()
                .flat_map(move |i| cols.clone().into_iter().map(move |j| (i, j)))
        })
        .collect();

    let found: Vec<Option<Equilibrium>> = candidates
        .par_iter()
        .map(|&(rmask, cmask)| {
            let rows = members(rmask);
            let cols = members(cmask);
            let Some(y) = indifference(u1, &rows, &cols, m2) else {
                log::debug!("support ({rmask:b}, {cmask:b}): column system singular or infeasible");
                return None;
            };
            let Some(x) = indifference(|c, r| u2(r, c), &cols, &rows, m1) else {
                log::debug!("support ({rmask:b}, {cmask:b}): row system singular or infeasible");
                return None;
            };
            let profile = MixedProfile::new(vec![x, y]).ok()?;
            let regret = game::max_nash_regret(game, &profile).ok()?;
            (regret <= tolerance::EQUILIBRIUM).then_some(Equilibrium {
                profile,
                regret,
                supports: (rmask, cmask),
            })
        })
        .collect();

    let mut equilibria: Vec<Equilibrium> = Vec::new();
    for eq in found.into_iter().flatten() {
        let duplicate = equilibria.iter().any(|e| {
            e.profile
                .strategies()
                .iter()
                .flatten()
                .zip(eq.profile.strategies().iter().flatten())
                .all(|(a, b)| (a - b).abs() < 1e-9)
        });
        if !duplicate {
            equilibria.push(eq);
        }
    }
    Ok(EquilibriumSet { equilibria })
}

/// Correlated equilibrium maximising `sum_s objective(s) p(s)`.
pub fn correlated_eq_lp(game: &Game, objective: &[f64]) -> Result<JointDistribution> {
    let size = game.num_profiles();
    if size > MAX_LP_PROFILES {
        return Err(Error::Unsupported(format!(
            "correlated LP capped at {MAX_LP_PROFILES} joint strategies"
        )));
    }
    if objective.len() != size {
        return Err(Error::DimensionMismatch(format!(
            "objective has {} entries, game {size}",
            objective.len()
        )));
    }
    let counts = game.strategy_counts();
    let mut lp = Problem::new(OptimizationDirection::Maximize);
    let vars: Vec<Variable> = objective
        .iter()
        .map(|&c| lp.add_var(c, (0.0, f64::INFINITY)))
        .collect();
    // One row per (player, recommendation, deviation): expected gain <= 0.
    for i in 0..game.num_players() {
        let st = game.stride(i);
        let u = game.utilities(i);
        for s in 0..counts[i] {
            for t in (0..counts[i]).filter(|&t| t != s) {
                let row: Vec<(Variable, f64)> = (0..size)
                    .filter(|&j| game::coordinate(counts, j, i) == s)
                    .map(|j| (vars[j], u[j - s * st + t * st] - u[j]))
                    .filter(|&(_, g)| g != 0.0)
                    .collect();
                if !row.is_empty() {
                    lp.add_constraint(row.as_slice(), ComparisonOp::Le, 0.0);
                }
            }
        }
    }
    let norm: Vec<(Variable, f64)> = vars.iter().map(|&v| (v, 1.0)).collect();
    lp.add_constraint(norm.as_slice(), ComparisonOp::Eq, 1.0);

    let outcome = lp
        .solve()
        .map_err(|e| Error::Unsupported(format!("correlated LP failed: {e}")))?;
    let Some(sol) = outcome.solution() else {
        return Err(Error::NoConvergence {
            iterations: 0,
            detail: "correlated LP interrupted".into(),
        });
    };
    let mut p: Vec<f64> = vars.iter().map(|&v| sol.var_value(v).max(0.0)).collect();
    let total: f64 = p.iter().sum();
    p.iter_mut().for_each(|v| *v /= total);
    let dist = JointDistribution::new(p)?;
    let regret = game::max_correlated_regret(game, &dist)?;
    if regret > tolerance::EQUILIBRIUM {
        return Err(Error::NoConvergence {
            iterations: 0,
            detail: format!("LP solution has correlated regret {regret:e}"),
        });
    }
    Ok(dist)
}

/// Social welfare `sum_i u_i(s)` as an LP objective.
pub fn welfare(game: &Game) -> Vec<f64> {
    (0..game.num_profiles())
        .map(|j| (0..game.num_players()).map(|i| game.utility(i, j)).sum())
        .collect()
}

/// Draws joint pure strategies from a fixed mixed profile.
pub struct PureSampler {
    players: Vec<WeightedIndex<f64>>,
    rng: Rng,
}

impl PureSampler {
    pub fn new(profile: &MixedProfile, rng: Rng) -> Result<Self> {
        let players = profile
            .strategies()
            .iter()
            .map(|p| WeightedIndex::new(p).map_err(|e| Error::InvalidDistribution(e.to_string())))
            .collect::<Result<_>>()?;
        Ok(Self { players, rng })
    }

    pub fn sample(&mut self) -> Vec<usize> {
        self.players
            .iter()
            .map(|w| w.sample(&mut self.rng))
            .collect()
    }

    /// Sample into a caller buffer to avoid allocation in hot loops.
    pub fn sample_into(&mut self, out: &mut [usize]) {
        for (slot, w) in out.iter_mut().zip(&self.players) {
            *slot = w.sample(&mut self.rng);
        }
    }
}

/// One joint pure strategy drawn from `profile` with each player independent.
pub fn sample_pure(profile: &MixedProfile, seed: u64) -> Result<Vec<usize>> {
    Ok(PureSampler::new(profile, rng::seeded(seed))?.sample())
}
