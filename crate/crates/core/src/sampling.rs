//! Approximate Nash equilibria from samples of an exact one.
//!
//! An oracle hands out joint pure strategies drawn from a hidden equilibrium `p` of a
//! bimatrix game with entries in `[0, 1]`. Counting `k = ceil(4000 m^2 / eps^2)` draws
//! gives per-player empirical profiles within `l1` distance `eps` of `p` with
//! probability at least 0.99, and such a profile is claimed to be a
//! `2 eps`-approximate equilibrium.
//!
//! For the support-based regret of [`game::nash_regret`] that last step holds when
//! `supp(q_i)` lies inside `supp(p_i)`, which empirical profiles always satisfy. A
//! perturbation that moves mass onto a strategy outside the support inherits that
//! strategy's full regret; [`verify_perturbation_bound`] counts those cases separately.

use rand::Rng as _;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{self, Game, MixedProfile};
use crate::rng;
use crate::solve::{self, PureSampler};
use crate::tolerance;

/// Constant in the default sample count `ceil(C m^2 / eps^2)`.
pub const SAMPLE_CONSTANT: f64 = 4000.0;
/// Success probability the sample count is built to reach.
pub const TARGET_SUCCESS_RATE: f64 = 0.99;
/// Refuse sample counts that would not finish in reasonable time.
pub const MAX_SAMPLES: u64 = 2_000_000_000;

/// Hidden-equilibrium sampler for a two-player game with entries in `[0, 1]`.
pub struct SampleNashOracle {
    game: Game,
    hidden: MixedProfile,
    seed: u64,
    sampler: PureSampler,
    calls: u64,
}

impl SampleNashOracle {
    pub fn new(game: Game, hidden: MixedProfile, seed: u64) -> Result<Self> {
        check_reduction_game(&game)?;
        let regret = game::max_nash_regret(&game, &hidden)?;
        if regret > tolerance::EQUILIBRIUM {
            return Err(Error::Precondition(format!(
                "hidden profile has Nash regret {regret:e}"
            )));
        }
        let sampler = PureSampler::new(&hidden, rng::seeded(seed))?;
        Ok(Self {
            game,
            hidden,
            seed,
            sampler,
            calls: 0,
        })
    }

    /// Oracle hiding the first equilibrium found by support enumeration.
    pub fn with_first_equilibrium(game: Game, seed: u64) -> Result<Self> {
        check_reduction_game(&game)?;
        let set = solve::support_enumeration(&game)?;
        let first = set.first().ok_or_else(|| Error::NoConvergence {
            iterations: 0,
            detail: "support enumeration found no equilibrium (degenerate game)".into(),
        })?;
        let hidden = first.profile.clone();
        Self::new(game, hidden, seed)
    }

    /// One joint pure strategy `(s1, s2)`.
    pub fn sample(&mut self) -> (usize, usize) {
        let mut out = [0usize; 2];
        self.sampler.sample_into(&mut out);
        self.calls += 1;
        (out[0], out[1])
    }

    pub fn game(&self) -> &Game {
        &self.game
    }

    pub fn hidden_profile(&self) -> &MixedProfile {
        &self.hidden
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn calls(&self) -> u64 {
        self.calls
    }
}

fn check_reduction_game(game: &Game) -> Result<()> {
    if game.num_players() != 2 {
        return Err(Error::Unsupported(format!(
            "sampling reduction needs 2 players, got {}",
            game.num_players()
        )));
    }
    if !game.positively_normalized() || !game.entries_in_unit_interval() {
        return Err(Error::Precondition(
            "game must be positively normalized (entries in [0, 1])".into(),
        ));
    }
    Ok(())
}

/// Per-player strategy frequencies over `k` oracle calls.
pub fn empirical_profile(oracle: &mut SampleNashOracle, k: u64) -> Result<MixedProfile> {
    if k == 0 {
        return Err(Error::Precondition("need at least one sample".into()));
    }
    let counts = oracle.game.strategy_counts().to_vec();
    let mut tallies = [vec![0u64; counts[0]], vec![0u64; counts[1]]];
    for _ in 0..k {
        let (a, b) = oracle.sample();
        tallies[0][a] += 1;
        tallies[1][b] += 1;
    }
    MixedProfile::new(
        tallies
            .iter()
            .map(|t| t.iter().map(|&c| c as f64 / k as f64).collect())
            .collect(),
    )
}

/// `ceil(constant * m^2 / eps^2)`, ignoring a floating-point excess below 1e-9 relative.
pub fn sample_count(m: usize, eps: f64, constant: f64) -> Result<u64> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::Precondition(format!(
            "eps must lie in (0, 1], got {eps}"
        )));
    }
    let x = constant * (m * m) as f64 / (eps * eps);
    let nearest = x.round();
    let k = if (x - nearest).abs() <= 1e-9 * x {
        nearest
    } else {
        x.ceil()
    };
    if k > MAX_SAMPLES as f64 {
        return Err(Error::Unsupported(format!(
            "{k} samples exceeds the cap of {MAX_SAMPLES}"
        )));
    }
    Ok((k as u64).max(1))
}

pub fn default_sample_count(m: usize, eps: f64) -> Result<u64> {
    sample_count(m, eps, SAMPLE_CONSTANT)
}

/// Smallest `k` for which Hoeffding plus a union bound over all `2m` coordinates
/// keeps both `l1` errors within `eps` with probability at least `1 - delta`.
pub fn hoeffding_sample_count(m: usize, eps: f64, delta: f64) -> Result<u64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Precondition(format!(
            "delta must lie in (0, 1), got {delta}"
        )));
    }
    let per = eps / m as f64;
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::Precondition(format!(
            "eps must lie in (0, 1], got {eps}"
        )));
    }
    sample_count(1, 1.0, (4.0 * m as f64 / delta).ln() / (2.0 * per * per))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SampleBudget {
    /// `ceil(constant * m^2 / eps^2)`.
    Constant {
        constant: f64,
    },
    Hoeffding {
        delta: f64,
    },
    Fixed(u64),
}

impl Default for SampleBudget {
    fn default() -> Self {
        SampleBudget::Constant {
            constant: SAMPLE_CONSTANT,
        }
    }
}

impl SampleBudget {
    pub fn samples(&self, m: usize, eps: f64) -> Result<u64> {
        match *self {
            SampleBudget::Constant { constant } => sample_count(m, eps, constant),
            SampleBudget::Hoeffding { delta } => hoeffding_sample_count(m, eps, delta),
            SampleBudget::Fixed(0) => Err(Error::Precondition("need at least one sample".into())),
            SampleBudget::Fixed(k) => Ok(k),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct ReductionOptions {
    pub budget: SampleBudget,
    /// Min-max rescale each player's utilities into `[0, 1]` first. Regrets are then
    /// reported in the rescaled units.
    pub rescale: bool,
}

/// `(scale, offset)` per player, `new = scale * old + offset`.
pub type Rescaling = Vec<(f64, f64)>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionReport {
    pub m: usize,
    pub epsilon: f64,
    pub k: u64,
    pub seed: u64,
    pub hidden: MixedProfile,
    pub q: MixedProfile,
    pub l1_distances: [f64; 2],
    pub regret: f64,
    pub regret_bound: f64,
    /// Both `l1` distances are at most `epsilon`.
    pub success: bool,
    /// `(scale, offset)` per player when the game was rescaled.
    pub rescaling: Option<Rescaling>,
}

pub fn l1_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

fn prepare(game: &Game, options: &ReductionOptions) -> Result<(Game, Option<Rescaling>)> {
    if options.rescale {
        let (g, maps) = game.rescaled_to_unit();
        Ok((g, Some(maps)))
    } else {
        Ok((game.clone(), None))
    }
}

fn largest_m(game: &Game) -> usize {
    game.strategy_counts().iter().copied().max().unwrap_or(1)
}

/// Sample-and-count reduction with the default constant and no rescaling.
pub fn reduce_to_approx_nash(game: &Game, eps: f64, seed: u64) -> Result<ReductionReport> {
    reduce_with(game, eps, seed, &ReductionOptions::default())
}

pub fn reduce_with(
    game: &Game,
    eps: f64,
    seed: u64,
    options: &ReductionOptions,
) -> Result<ReductionReport> {
    let (game, rescaling) = prepare(game, options)?;
    let mut oracle = SampleNashOracle::with_first_equilibrium(game, seed)?;
    reduce_from_oracle(&mut oracle, eps, options.budget, rescaling)
}

fn reduce_from_oracle(
    oracle: &mut SampleNashOracle,
    eps: f64,
    budget: SampleBudget,
    rescaling: Option<Rescaling>,
) -> Result<ReductionReport> {
    let m = largest_m(oracle.game());
    let k = budget.samples(m, eps)?;
    let q = empirical_profile(oracle, k)?;
    let hidden = oracle.hidden_profile().clone();
    let l1_distances = [
        l1_distance(q.player(0), hidden.player(0)),
        l1_distance(q.player(1), hidden.player(1)),
    ];
    let regret = game::max_nash_regret(oracle.game(), &q)?;
    log::debug!("reduction m={m} eps={eps} k={k} l1={l1_distances:?} regret={regret}");
    Ok(ReductionReport {
        m,
        epsilon: eps,
        k,
        seed: oracle.seed(),
        hidden,
        q,
        l1_distances,
        regret,
        regret_bound: 2.0 * eps,
        success: l1_distances.iter().all(|&d| d <= eps),
        rescaling,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingTrials {
    pub epsilon: f64,
    pub k: u64,
    pub trials: usize,
    pub successes: usize,
    pub target_rate: f64,
    /// `target_rate` minus three binomial standard deviations, times `trials`.
    pub required: usize,
    pub l1_distances: Vec<[f64; 2]>,
    pub max_regret: f64,
}

impl SamplingTrials {
    pub fn rate(&self) -> f64 {
        self.successes as f64 / self.trials as f64
    }

    pub fn passed(&self) -> bool {
        self.successes >= self.required
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("trial,l1_player1,l1_player2,success\n");
        for (t, d) in self.l1_distances.iter().enumerate() {
            let ok = d.iter().all(|&x| x <= self.epsilon);
            out.push_str(&format!("{t},{},{},{ok}\n", d[0], d[1]));
        }
        out
    }
}

/// Minimum successes out of `trials` for rate `target` with 3-sigma slack, rounded down.
pub fn required_successes(trials: usize, target: f64) -> usize {
    let n = trials as f64;
    let slack = 3.0 * (target * (1.0 - target) / n).sqrt();
    ((target - slack) * n + 1e-9).floor().max(0.0) as usize
}

/// Independent repetitions of the sampling step, each on its own substream, run in
/// parallel with results identical to a serial run.
pub fn sampling_trials(
    game: &Game,
    hidden: &MixedProfile,
    eps: f64,
    budget: SampleBudget,
    trials: usize,
    seed: u64,
) -> Result<SamplingTrials> {
    if trials == 0 {
        return Err(Error::Precondition("need at least one trial".into()));
    }
    // validates the hidden profile once
    SampleNashOracle::new(game.clone(), hidden.clone(), seed)?;
    let m = largest_m(game);
    let k = budget.samples(m, eps)?;
    let reports = (0..trials)
        .into_par_iter()
        .map(|t| {
            let sampler = PureSampler::new(hidden, rng::substream(seed, t as u64))?;
            let mut oracle = SampleNashOracle {
                game: game.clone(),
                hidden: hidden.clone(),
                seed,
                sampler,
                calls: 0,
            };
            reduce_from_oracle(&mut oracle, eps, SampleBudget::Fixed(k), None)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SamplingTrials {
        epsilon: eps,
        k,
        trials,
        successes: reports.iter().filter(|r| r.success).count(),
        target_rate: TARGET_SUCCESS_RATE,
        required: required_successes(trials, TARGET_SUCCESS_RATE),
        l1_distances: reports.iter().map(|r| r.l1_distances).collect(),
        max_regret: reports.iter().map(|r| r.regret).fold(0.0, f64::max),
    })
}

/// `max_{s'} v(s') - sum_s q_i(s) v(s)`: the gain from deviating measured against the
/// player's average payoff rather than the worst strategy in the support.
pub fn expected_nash_regret(game: &Game, q: &MixedProfile, player: usize) -> Result<f64> {
    let values = game::deviation_payoffs(game, q, player)?;
    let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mean: f64 = values
        .iter()
        .zip(q.player(player))
        .map(|(v, p)| v * p)
        .sum();
    Ok((best - mean).max(0.0))
}

/// Random point of the probability simplex from the flat Dirichlet law.
pub fn dirichlet_flat(rng: &mut impl rand::Rng, m: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..m).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

/// `p + t (d - p)` scaled so the `l1` distance to `p` is `radius` (or `d` itself when
/// `d` is closer than that). Stays in the simplex because it is a convex combination.
pub fn perturb_towards(p: &[f64], d: &[f64], radius: f64) -> Vec<f64> {
    let dist = l1_distance(p, d);
    let t = if dist > 0.0 {
        (radius / dist).min(1.0)
    } else {
        0.0
    };
    p.iter().zip(d).map(|(a, b)| a + t * (b - a)).collect()
}

/// Move `eps / 2` of mass onto strategy `to`, taken proportionally from the others,
/// which puts `q` at `l1` distance `eps` from `p` when `p[to] <= 1 - eps / 2`.
pub fn shift_mass(p: &[f64], to: usize, eps: f64) -> Vec<f64> {
    let mut target = vec![0.0; p.len()];
    target[to] = 1.0;
    perturb_towards(p, &target, eps)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbationStats {
    pub epsilon: f64,
    pub trials: usize,
    /// Trials with support-based regret above `2 eps + 1e-9`.
    pub violations: usize,
    /// Trials where some `q_i` charges a strategy outside `supp(p_i)`.
    pub support_leaving: usize,
    /// Violations among trials with `supp(q_i)` inside `supp(p_i)` for both players.
    pub violations_within_support: usize,
    /// Trials with average-payoff regret above `2 eps + 1e-9`.
    pub expected_violations: usize,
    pub max_regret: f64,
    pub max_regret_within_support: f64,
    pub max_expected_regret: f64,
    pub l1_distances: Vec<[f64; 2]>,
}

impl PerturbationStats {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

const BOUND_SLACK: f64 = 1e-9;

/// Draw `trials` product profiles within `l1` distance `eps` of the equilibrium `p`
/// and check the `2 eps` regret bound on each. Half the draws sit exactly on the
/// boundary of the `l1` ball.
pub fn verify_perturbation_bound(
    game: &Game,
    p: &MixedProfile,
    eps: f64,
    trials: usize,
    seed: u64,
) -> Result<PerturbationStats> {
    check_reduction_game(game)?;
    if eps < 0.0 {
        return Err(Error::Precondition(format!(
            "eps must be non-negative, got {eps}"
        )));
    }
    let regret = game::max_nash_regret(game, p)?;
    if regret > tolerance::EQUILIBRIUM {
        return Err(Error::Precondition(format!(
            "profile has Nash regret {regret:e}"
        )));
    }
    struct Trial {
        l1: [f64; 2],
        regret: f64,
        expected: f64,
        leaves: bool,
    }
    let rows = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = rng::substream(seed, t as u64);
            let mut strategies = Vec::with_capacity(2);
            for i in 0..2 {
                let pi = p.player(i);
                let d = dirichlet_flat(&mut rng, pi.len());
                let radius = if rng.random_bool(0.5) {
                    eps
                } else {
                    eps * rng.random::<f64>()
                };
                strategies.push(perturb_towards(pi, &d, radius));
            }
            let q = MixedProfile::new(strategies)?;
            let l1 = [
                l1_distance(q.player(0), p.player(0)),
                l1_distance(q.player(1), p.player(1)),
            ];
            let leaves = (0..2).any(|i| {
                q.player(i)
                    .iter()
                    .zip(p.player(i))
                    .any(|(&a, &b)| a > tolerance::SUPPORT && b <= tolerance::SUPPORT)
            });
            let regret = game::max_nash_regret(game, &q)?;
            let expected =
                expected_nash_regret(game, &q, 0)?.max(expected_nash_regret(game, &q, 1)?);
            Ok(Trial {
                l1,
                regret,
                expected,
                leaves,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let bound = 2.0 * eps + BOUND_SLACK;
    let inside = || rows.iter().filter(|r| !r.leaves);
    Ok(PerturbationStats {
        epsilon: eps,
        trials,
        violations: rows.iter().filter(|r| r.regret > bound).count(),
        support_leaving: rows.iter().filter(|r| r.leaves).count(),
        violations_within_support: inside().filter(|r| r.regret > bound).count(),
        expected_violations: rows.iter().filter(|r| r.expected > bound).count(),
        max_regret: rows.iter().map(|r| r.regret).fold(0.0, f64::max),
        max_regret_within_support: inside().map(|r| r.regret).fold(0.0, f64::max),
        max_expected_regret: rows.iter().map(|r| r.expected).fold(0.0, f64::max),
        l1_distances: rows.iter().map(|r| r.l1).collect(),
    })
}
