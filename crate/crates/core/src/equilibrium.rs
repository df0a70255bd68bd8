//! Quantum utilities and the verification of quantum Nash and quantum correlated
//! equilibria.
//!
//! Player `i`'s best deviation is a maximum over every channel on `H_i`. Measuring
//! `Phi_i(rho)` in the computational basis depends on the channel only through the
//! POVM `E_t = Phi_i^dagger(|t><t|)`, and every POVM is realised by a
//! measure-and-prepare channel. So the maximum equals
//! `max_E sum_t Tr[E_t A_t]` with `A_t = sum_r u_i(t, r) R_r`, where `R_r` is the
//! block of `rho` with the other players fixed to `r`. That problem is solved with
//! a duality certificate in [`crate::sdp`]; [`random_channel_search`] applies actual
//! channels to `rho` and gives an independent lower bound.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{self, Game};
use crate::linalg::{self, CMat};
use crate::rng;
use crate::sdp::{self, Povm};
use crate::state::{self, DensityMatrix, KrausChannel};
use crate::tolerance;

/// Local dimension cap for the certified optimiser.
pub const MAX_LOCAL_DIM: usize = 6;

fn check_shapes(game: &Game, rho: &DensityMatrix, player: usize) -> Result<()> {
    game.check_player(player)?;
    if rho.dims() != game.strategy_counts() {
        return Err(Error::DimensionMismatch(format!(
            "state dims {:?} vs game {:?}",
            rho.dims(),
            game.strategy_counts()
        )));
    }
    Ok(())
}

/// `mu_i(rho) = sum_s <s|rho|s> u_i(s)`.
pub fn quantum_utility(game: &Game, rho: &DensityMatrix, player: usize) -> Result<f64> {
    check_shapes(game, rho, player)?;
    Ok(rho
        .diagonal()
        .iter()
        .zip(game.utilities(player))
        .map(|(p, u)| p * u)
        .sum())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviationEnsemble {
    pub player: usize,
    /// `A_t` for each local strategy `t`.
    pub operators: Vec<CMat>,
}

impl DeviationEnsemble {
    /// Utility when the player measures honestly (computational-basis POVM).
    pub fn identity_value(&self) -> f64 {
        self.operators
            .iter()
            .enumerate()
            .map(|(t, a)| a[(t, t)].re)
            .sum()
    }

    pub fn value(&self, povm: &Povm) -> f64 {
        povm.value(&self.operators)
    }

    /// Ensemble with player `i`'s strategies relabelled: new strategy `t` is old `perm[t]`.
    pub fn relabeled(&self, perm: &[usize]) -> DeviationEnsemble {
        let m = perm.len();
        let p = CMat::from_fn(m, m, |r, c| {
            if perm[r] == c {
                linalg::ONE
            } else {
                linalg::ZERO
            }
        });
        let operators = perm
            .iter()
            .map(|&old| &p * &self.operators[old] * p.adjoint())
            .collect();
        DeviationEnsemble {
            player: self.player,
            operators,
        }
    }
}

pub fn deviation_ensemble(
    game: &Game,
    rho: &DensityMatrix,
    player: usize,
) -> Result<DeviationEnsemble> {
    check_shapes(game, rho, player)?;
    let counts = game.strategy_counts();
    let m = counts[player];
    let st = game.stride(player);
    let blocks = state::local_blocks(rho, player);
    let bases: Vec<usize> = (0..game.num_profiles())
        .filter(|&j| game::coordinate(counts, j, player) == 0)
        .collect();
    let mass: f64 = blocks.iter().map(|b| linalg::trace(b).re).sum();
    if (mass - 1.0).abs() > tolerance::ALGEBRAIC {
        return Err(Error::InvalidState(format!(
            "local blocks carry total mass {mass}"
        )));
    }
    let u = game.utilities(player);
    let operators = (0..m)
        .map(|t| {
            blocks
                .iter()
                .zip(&bases)
                .fold(CMat::zeros(m, m), |acc, (r, &base)| {
                    acc + r.scale(u[base + t * st])
                })
        })
        .map(|a| linalg::hermitian_part(&a))
        .collect();
    Ok(DeviationEnsemble { player, operators })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviationCertificate {
    pub player: usize,
    /// Utility achieved by `povm`; a lower bound on the best deviation.
    pub primal_value: f64,
    /// `Tr Y` for a `Y` dominating every `A_t`; an upper bound on the best deviation.
    pub dual_value: f64,
    pub povm: Povm,
    pub dual_matrix: CMat,
    pub iterations: usize,
}

impl DeviationCertificate {
    pub fn gap(&self) -> f64 {
        self.dual_value - self.primal_value
    }
}

/// Certified solution of the ensemble's POVM problem.
pub fn certify_ensemble(ensemble: &DeviationEnsemble) -> Result<DeviationCertificate> {
    let m = ensemble.operators.len();
    if m > MAX_LOCAL_DIM {
        return Err(Error::Unsupported(format!(
            "best deviation capped at {MAX_LOCAL_DIM} local strategies"
        )));
    }
    let sol = sdp::optimize_povm(&ensemble.operators)?;
    let slack = sdp::dual_slack(&sol.dual_matrix, &ensemble.operators);
    if slack < -1e-7 {
        return Err(Error::NoConvergence {
            iterations: sol.iterations,
            detail: format!("dual certificate infeasible by {slack:e}"),
        });
    }
    let cert = DeviationCertificate {
        player: ensemble.player,
        primal_value: sol.primal,
        dual_value: sol.dual,
        povm: sol.povm,
        dual_matrix: sol.dual_matrix,
        iterations: sol.iterations,
    };
    if cert.gap() > tolerance::SDP_GAP * (1.0 + cert.dual_value.abs()) {
        return Err(Error::NoConvergence {
            iterations: cert.iterations,
            detail: format!("duality gap {:e} above target", cert.gap()),
        });
    }
    Ok(cert)
}

/// Best utility player `player` can reach by any local channel, with certificate.
pub fn best_quantum_deviation(
    game: &Game,
    rho: &DensityMatrix,
    player: usize,
) -> Result<DeviationCertificate> {
    certify_ensemble(&deviation_ensemble(game, rho, player)?)
}

/// Certified upper bound on the gain from the best deviation, unclamped.
pub fn quantum_regret_signed(game: &Game, rho: &DensityMatrix, player: usize) -> Result<f64> {
    let cert = best_quantum_deviation(game, rho, player)?;
    Ok(cert.dual_value - quantum_utility(game, rho, player)?)
}

/// Gain from the best local channel, measured against the certified upper bound so
/// an equilibrium is never reported on the strength of an under-solved optimum.
pub fn quantum_regret(game: &Game, rho: &DensityMatrix, player: usize) -> Result<f64> {
    Ok(quantum_regret_signed(game, rho, player)?.max(0.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlayerReport {
    pub player: usize,
    pub mu: f64,
    pub best_deviation: f64,
    pub gap: f64,
    pub regret: f64,
    pub verdict: bool,
}

pub fn player_report(
    game: &Game,
    rho: &DensityMatrix,
    player: usize,
    eps: f64,
) -> Result<PlayerReport> {
    let mu = quantum_utility(game, rho, player)?;
    let cert = best_quantum_deviation(game, rho, player)?;
    let regret = (cert.dual_value - mu).max(0.0);
    Ok(PlayerReport {
        player,
        mu,
        best_deviation: cert.primal_value,
        gap: cert.gap(),
        regret,
        verdict: regret <= eps,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantumVerdict {
    pub players: Vec<PlayerReport>,
    pub product_distance: f64,
    pub correlated_equilibrium: bool,
    pub nash_equilibrium: bool,
}

/// Both quantum checks with every number behind them. The product test uses
/// [`tolerance::PRODUCT`] and is kept separate from the regret threshold `eps`.
pub fn quantum_verdict(game: &Game, rho: &DensityMatrix, eps: f64) -> Result<QuantumVerdict> {
    let players = (0..game.num_players())
        .map(|i| player_report(game, rho, i, eps))
        .collect::<Result<Vec<_>>>()?;
    let correlated_equilibrium = players.iter().all(|r| r.verdict);
    let product_distance = state::product_distance(rho);
    let nash_equilibrium = correlated_equilibrium && product_distance <= tolerance::PRODUCT;
    Ok(QuantumVerdict {
        players,
        product_distance,
        correlated_equilibrium,
        nash_equilibrium,
    })
}

pub fn is_quantum_correlated_eq(game: &Game, rho: &DensityMatrix, eps: f64) -> Result<bool> {
    for i in 0..game.num_players() {
        if quantum_regret(game, rho, i)? > eps {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn is_quantum_nash(game: &Game, rho: &DensityMatrix, eps: f64) -> Result<bool> {
    Ok(state::product_distance(rho) <= tolerance::PRODUCT
        && is_quantum_correlated_eq(game, rho, eps)?)
}

/// `mu_i(Phi(rho))` computed by applying the channel to the full state.
pub fn utility_after(game: &Game, rho: &DensityMatrix, channel: &KrausChannel) -> Result<f64> {
    quantum_utility(game, &state::apply_channel(rho, channel)?, channel.player())
}

/// Best utility found over the identity, every swap channel, and `trials` seeded
/// random unitaries and random Kraus channels (ranks up to `m^2`).
pub fn random_channel_search(
    game: &Game,
    rho: &DensityMatrix,
    player: usize,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    check_shapes(game, rho, player)?;
    let m = game.num_strategies(player);
    let dims = game.strategy_counts();
    let mut best = utility_after(game, rho, &KrausChannel::identity(player, m))?;
    for from in 0..m {
        for to in (0..m).filter(|&t| t != from) {
            best = best.max(utility_after(
                game,
                rho,
                &state::swap_channel(dims, player, from, to)?,
            )?);
        }
    }
    let mut rng = rng::seeded(seed);
    for _ in 0..trials {
        let u = KrausChannel::unitary(player, linalg::random_unitary(&mut rng, m))?;
        best = best.max(utility_after(game, rho, &u)?);
        let rank = rng.random_range(1..=m * m);
        let ch = KrausChannel::random(player, m, rank, &mut rng);
        best = best.max(utility_after(game, rho, &ch)?);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::JointDistribution;
    use crate::linalg::from_real_rows;
    use crate::state::{lift_diagonal, lift_pure, pure_from_real};

    fn coordination() -> Game {
        Game::common_payoff(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap()
    }

    fn counterexample() -> (Game, DensityMatrix) {
        let g = Game::common_payoff(&[vec![270.0, 126.0], vec![0.0, 270.0]]).unwrap();
        let p = JointDistribution::new(vec![1.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 3.0]).unwrap();
        (g, lift_pure(&p, &[2, 2]).unwrap().density())
    }

    #[test]
    fn utilities_of_pure_counterexample() {
        let (g, rho) = counterexample();
        assert!((quantum_utility(&g, &rho, 0).unwrap() - 201.0).abs() < 1e-9);
        let (a, b) = ((2.0f64 / 3.0).sqrt(), (1.0f64 / 3.0).sqrt());
        let ch = KrausChannel::unitary(0, from_real_rows(&[&[a, b], &[b, -a]])).unwrap();
        assert!((utility_after(&g, &rho, &ch).unwrap() - 206.0).abs() < 1e-9);
        let cert = best_quantum_deviation(&g, &rho, 0).unwrap();
        assert!(cert.primal_value >= 206.0 - 1e-6);
        assert!(quantum_regret(&g, &rho, 0).unwrap() >= 5.0 - 1e-6);
    }

    #[test]
    fn ensemble_of_diagonal_state_is_classical() {
        let g = Game::bimatrix(
            &[vec![1.0, 4.0, 2.0], vec![0.0, 3.0, 5.0]],
            &[vec![2.0, 2.0, 1.0], vec![1.0, 0.0, 3.0]],
        )
        .unwrap();
        let p = JointDistribution::new(vec![0.1, 0.2, 0.05, 0.3, 0.15, 0.2]).unwrap();
        let rho = lift_diagonal(&p, &[2, 3]).unwrap();
        let ens = deviation_ensemble(&g, &rho, 0).unwrap();
        for (s, a) in ens.operators.iter().enumerate() {
            for t in 0..2 {
                let want: f64 = (0..3)
                    .map(|r| g.utility(0, s * 3 + r) * p.probs()[t * 3 + r])
                    .sum();
                assert!((a[(t, t)].re - want).abs() < 1e-12);
                assert!(a[(t, 1 - t)].norm() < 1e-15);
            }
        }
        assert!((ens.identity_value() - quantum_utility(&g, &rho, 0).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn nash_hadamard_example_is_not_quantum_equilibrium() {
        let g = coordination();
        let rho = pure_from_real(vec![2, 2], &[0.5, 0.5, 0.5, -0.5])
            .unwrap()
            .density();
        assert!((quantum_utility(&g, &rho, 0).unwrap() - 1.5).abs() < 1e-12);
        let cert = best_quantum_deviation(&g, &rho, 0).unwrap();
        assert!(cert.primal_value >= 2.0 - 1e-9);
        assert!(!is_quantum_correlated_eq(&g, &rho, tolerance::QUANTUM_EQ).unwrap());
    }

    #[test]
    fn diagonal_lift_of_correlated_equilibrium_holds() {
        let g = coordination();
        let p = JointDistribution::new(vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        let rho = lift_diagonal(&p, &[2, 2]).unwrap();
        let v = quantum_verdict(&g, &rho, tolerance::QUANTUM_EQ).unwrap();
        assert!(v.correlated_equilibrium);
        assert!(!v.nash_equilibrium, "correlated state is not a product");
        let uniform = DensityMatrix::maximally_mixed(vec![2, 2]);
        assert!(is_quantum_nash(&g, &uniform, tolerance::QUANTUM_EQ).unwrap());
    }

    #[test]
    fn search_includes_identity_and_swaps() {
        let (g, rho) = counterexample();
        let mu = quantum_utility(&g, &rho, 0).unwrap();
        let v = random_channel_search(&g, &rho, 0, 5, 1).unwrap();
        let cert = best_quantum_deviation(&g, &rho, 0).unwrap();
        assert!(v >= mu - 1e-12 && v <= cert.dual_value + 1e-6);
    }

    #[test]
    fn relabeling_preserves_value() {
        let mut r = rng::seeded(3);
        let g = Game::new(
            vec![3, 2],
            vec![(0..6).map(|_| r.random()).collect(), vec![0.0; 6]],
        )
        .unwrap();
        let rho = DensityMatrix::new(vec![3, 2], linalg::random_density(&mut r, 6, 3)).unwrap();
        let ens = deviation_ensemble(&g, &rho, 0).unwrap();
        let a = certify_ensemble(&ens).unwrap();
        let b = certify_ensemble(&ens.relabeled(&[2, 0, 1])).unwrap();
        assert!((a.dual_value - b.dual_value).abs() < 1e-9);
    }

    #[test]
    fn shape_errors() {
        let g = coordination();
        let rho = DensityMatrix::maximally_mixed(vec![2, 3]);
        assert!(quantum_utility(&g, &rho, 0).is_err());
        let rho = DensityMatrix::maximally_mixed(vec![2, 2]);
        assert!(quantum_utility(&g, &rho, 2).is_err());
    }
}
