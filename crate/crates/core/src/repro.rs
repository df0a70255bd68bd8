//! Recomputes the worked-example values (utilities before and after the explicit
//! deviations, certified best deviations, the sampling constants) and checks each
//! against its expected value.

use serde::{Deserialize, Serialize};

use crate::equilibrium::{best_quantum_deviation, quantum_regret, quantum_utility};
use crate::error::Result;
use crate::examples;
use crate::game::{self, Game, MixedProfile};
use crate::sampling::{self, SampleBudget};
use crate::state::{self, DensityMatrix};
use crate::tolerance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    Equal,
    AtLeast,
    AtMost,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReproRecord {
    pub claim_id: String,
    pub group: String,
    pub expected: f64,
    pub computed: f64,
    pub comparison: Comparison,
    pub abs_error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl ReproRecord {
    pub fn new(
        claim_id: impl Into<String>,
        group: &str,
        expected: f64,
        computed: f64,
        comparison: Comparison,
        tol: f64,
    ) -> Self {
        let abs_error = match comparison {
            Comparison::Equal => (computed - expected).abs(),
            Comparison::AtLeast => (expected - computed).max(0.0),
            Comparison::AtMost => (computed - expected).max(0.0),
        };
        ReproRecord {
            claim_id: claim_id.into(),
            group: group.to_string(),
            expected,
            computed,
            comparison,
            abs_error,
            tolerance: tol,
            pass: abs_error <= tol && computed.is_finite(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReproReport {
    pub records: Vec<ReproRecord>,
    pub passed: bool,
}

impl ReproReport {
    pub fn failures(&self) -> impl Iterator<Item = &ReproRecord> {
        self.records.iter().filter(|r| !r.pass)
    }

    pub fn find(&self, claim_id: &str) -> Option<&ReproRecord> {
        self.records.iter().find(|r| r.claim_id == claim_id)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReproOptions {
    pub seed: u64,
    /// Repetitions of the default-constant sampling step.
    pub sampling_trials: usize,
    /// Random lifts checked against the utility ceiling.
    pub ceiling_states: usize,
    /// Added to the first utility entry of the 270/126 game, to exercise failure reporting.
    pub tamper: Option<f64>,
}

impl Default for ReproOptions {
    fn default() -> Self {
        ReproOptions {
            seed: 0,
            sampling_trials: 100,
            ceiling_states: 10,
            tamper: None,
        }
    }
}

pub const COS2_SAMPLES: [f64; 3] = [0.5, 0.7, 0.9];

const ALG: f64 = tolerance::ALGEBRAIC;

fn skewed_records(game: &Game, out: &mut Vec<ReproRecord>) -> Result<()> {
    let group = "skewed-coordination";
    let p = examples::skewed_distribution();
    let rho = examples::skewed_state();
    let ce = game::max_correlated_regret(game, &p)?;
    out.push(ReproRecord::new(
        "skewed.classical_ce_regret",
        group,
        0.0,
        ce,
        Comparison::AtMost,
        ALG,
    ));
    out.push(ReproRecord::new(
        "skewed.mu1",
        group,
        201.0,
        quantum_utility(game, &rho, 0)?,
        Comparison::Equal,
        ALG,
    ));
    let rotated = examples::rotate_first(&rho, examples::skewed_rotation())?;
    out.push(ReproRecord::new(
        "skewed.mu1_after_rotation",
        group,
        206.0,
        quantum_utility(game, &rotated, 0)?,
        Comparison::Equal,
        ALG,
    ));
    let cert = best_quantum_deviation(game, &rho, 0)?;
    out.push(ReproRecord::new(
        "skewed.best_deviation",
        group,
        206.0,
        cert.primal_value,
        Comparison::AtLeast,
        tolerance::SDP_GAP,
    ));
    out.push(ReproRecord::new(
        "skewed.duality_gap",
        group,
        0.0,
        cert.gap(),
        Comparison::AtMost,
        tolerance::SDP_GAP,
    ));
    Ok(())
}

fn coordination_records(out: &mut Vec<ReproRecord>) -> Result<()> {
    let game = examples::coordination();
    for cos2 in COS2_SAMPLES {
        let group = "mixed-product";
        let rho = examples::mixed_product_state(cos2)?;
        let id = |what: &str| format!("mixed_product.cos2={cos2}.{what}");
        out.push(ReproRecord::new(
            id("mu1"),
            group,
            1.0 + cos2,
            quantum_utility(&game, &rho, 0)?,
            Comparison::Equal,
            ALG,
        ));
        let rotated = examples::rotate_first(&rho, examples::reflection(cos2))?;
        out.push(ReproRecord::new(
            id("mu1_after_rotation"),
            group,
            2.0,
            quantum_utility(&game, &rotated, 0)?,
            Comparison::Equal,
            ALG,
        ));
        let induced = state::induced_distribution(&rho)?;
        out.push(ReproRecord::new(
            id("classical_ce_regret"),
            group,
            0.0,
            game::max_correlated_regret(&game, &induced)?,
            Comparison::AtMost,
            ALG,
        ));
        out.push(ReproRecord::new(
            id("quantum_regret"),
            group,
            1.0 - cos2,
            quantum_regret(&game, &rho, 0)?,
            Comparison::AtLeast,
            tolerance::QUANTUM_EQ,
        ));

        let group = "entangled";
        let rho = examples::entangled_state(cos2)?;
        let id = |what: &str| format!("entangled.cos2={cos2}.{what}");
        out.push(ReproRecord::new(
            id("mu1"),
            group,
            1.0 + cos2,
            quantum_utility(&game, &rho, 0)?,
            Comparison::Equal,
            ALG,
        ));
        let rotated = examples::rotate_first(&rho, examples::reflection(cos2))?;
        out.push(ReproRecord::new(
            id("mu1_after_rotation"),
            group,
            2.0,
            quantum_utility(&game, &rotated, 0)?,
            Comparison::Equal,
            ALG,
        ));
    }
    let group = "signed-uniform";
    let rho = examples::signed_uniform_state()?;
    out.push(ReproRecord::new(
        "signed_uniform.mu1",
        group,
        1.5,
        quantum_utility(&game, &rho, 0)?,
        Comparison::Equal,
        ALG,
    ));
    let rotated = examples::rotate_first(&rho, examples::hadamard())?;
    out.push(ReproRecord::new(
        "signed_uniform.mu1_after_hadamard",
        group,
        2.0,
        quantum_utility(&game, &rotated, 0)?,
        Comparison::Equal,
        ALG,
    ));
    Ok(())
}

fn ceiling_records(options: &ReproOptions, out: &mut Vec<ReproRecord>) -> Result<()> {
    let group = "diagonal-ceiling";
    let game = examples::coordination();
    let p = examples::diagonal_half();
    for t in 0..options.ceiling_states {
        let rho: DensityMatrix =
            state::random_lift(&p, &[2, 2], options.seed.wrapping_add(t as u64))?;
        for player in 0..2 {
            let cert = best_quantum_deviation(&game, &rho, player)?;
            out.push(ReproRecord::new(
                format!("ceiling.lift{t}.player{}.best_deviation", player + 1),
                group,
                2.0,
                cert.dual_value,
                Comparison::Equal,
                tolerance::QUANTUM_EQ,
            ));
        }
    }
    Ok(())
}

fn sampling_records(options: &ReproOptions, out: &mut Vec<ReproRecord>) -> Result<()> {
    let group = "sampling";
    let k = sampling::default_sample_count(2, 0.1)?;
    out.push(ReproRecord::new(
        "sampling.k_m2_eps0.1",
        group,
        1_600_000.0,
        k as f64,
        Comparison::Equal,
        0.0,
    ));
    if options.sampling_trials == 0 {
        return Ok(());
    }
    let game =
        Game::common_payoff(&[vec![1.0, 0.0], vec![0.0, 1.0]])?.with_positive_normalization()?;
    let hidden = MixedProfile::uniform(&[2, 2]);
    let trials = sampling::sampling_trials(
        &game,
        &hidden,
        0.1,
        SampleBudget::default(),
        options.sampling_trials,
        options.seed,
    )?;
    let required = trials.required as f64 / trials.trials as f64;
    out.push(ReproRecord::new(
        "sampling.success_rate",
        group,
        required,
        trials.rate(),
        Comparison::AtLeast,
        0.0,
    ));
    out.push(ReproRecord::new(
        "sampling.max_regret",
        group,
        0.2,
        trials.max_regret,
        Comparison::AtMost,
        ALG,
    ));
    Ok(())
}

/// Every check, in a fixed order.
pub fn run(options: &ReproOptions) -> Result<ReproReport> {
    let mut game = examples::skewed_coordination();
    if let Some(delta) = options.tamper {
        let mut u: Vec<Vec<f64>> = (0..2).map(|i| game.utilities(i).to_vec()).collect();
        u[0][0] += delta;
        game = Game::new(vec![2, 2], u)?;
    }
    let mut records = Vec::new();
    skewed_records(&game, &mut records)?;
    coordination_records(&mut records)?;
    ceiling_records(options, &mut records)?;
    sampling_records(options, &mut records)?;
    let passed = records.iter().all(|r| r.pass);
    Ok(ReproReport { records, passed })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> ReproOptions {
        ReproOptions {
            sampling_trials: 0,
            ceiling_states: 2,
            ..ReproOptions::default()
        }
    }

    #[test]
    fn algebraic_claims_pass() {
        let r = run(&quick()).unwrap();
        let failed: Vec<_> = r.failures().map(|f| f.claim_id.clone()).collect();
        assert!(r.passed, "{failed:?}");
        assert!(r.find("skewed.mu1").is_some());
        let ids: std::collections::BTreeSet<_> = r.records.iter().map(|x| &x.claim_id).collect();
        assert_eq!(ids.len(), r.records.len(), "claim ids are unique");
    }

    #[test]
    fn tampering_is_reported() {
        let r = run(&ReproOptions {
            tamper: Some(1e-3),
            ..quick()
        })
        .unwrap();
        assert!(!r.passed);
        assert!(!r.find("skewed.mu1").unwrap().pass);
        assert!(r.find("mixed_product.cos2=0.7.mu1").unwrap().pass);
    }

    #[test]
    fn comparison_semantics() {
        assert!(ReproRecord::new("a", "g", 1.0, 2.0, Comparison::AtLeast, 0.0).pass);
        assert!(!ReproRecord::new("a", "g", 1.0, 2.0, Comparison::AtMost, 0.5).pass);
        assert!(!ReproRecord::new("a", "g", 1.0, f64::NAN, Comparison::Equal, 1.0).pass);
    }
}
