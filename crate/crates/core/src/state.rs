//! Density matrices over joint strategy bases, the classical-to-quantum lifts, the
//! diagonal (measurement) map back, Kraus channels acting on one player's factor,
//! and partial traces.
//!
//! The basis of `H = H_1 (x) ... (x) H_n` is ordered exactly like [`crate::game`]'s
//! joint indices: player 0 is the slowest-varying tensor factor.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{self, JointDistribution};
use crate::linalg::{self, CMat, CVec, ONE, ZERO};
use crate::rng;
use crate::tolerance;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    matrix: CMat,
}

fn check_dims(dims: &[usize], size: usize) -> Result<()> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::DimensionMismatch(format!(
            "invalid local dimensions {dims:?}"
        )));
    }
    let total: usize = dims.iter().product();
    if total != size {
        return Err(Error::DimensionMismatch(format!(
            "dims {dims:?} give {total}, data has {size}"
        )));
    }
    Ok(())
}

impl DensityMatrix {
    /// Validates Hermiticity, positivity and unit trace.
    pub fn new(dims: Vec<usize>, matrix: CMat) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidState("matrix is not square".into()));
        }
        check_dims(&dims, matrix.nrows())?;
        let herm = linalg::hermiticity_error(&matrix);
        if herm > tolerance::HERMITIAN {
            return Err(Error::InvalidState(format!(
                "not Hermitian (error {herm:e})"
            )));
        }
        let tr = linalg::trace(&matrix).re;
        if (tr - 1.0).abs() > tolerance::TRACE {
            return Err(Error::InvalidState(format!("trace {tr} is not 1")));
        }
        let min = linalg::min_eigenvalue(&matrix);
        if min < tolerance::PSD {
            return Err(Error::InvalidState(format!(
                "minimum eigenvalue {min:e} is negative"
            )));
        }
        Ok(Self {
            dims,
            matrix: linalg::hermitian_part(&matrix),
        })
    }

    /// Like [`DensityMatrix::new`], then clips eigenvalues in `[PSD, 0)` to zero and
    /// rescales to unit trace.
    pub fn renormalized(dims: Vec<usize>, matrix: CMat) -> Result<Self> {
        let rho = Self::new(dims, matrix)?;
        let clipped = linalg::spectral_map(&rho.matrix, |v| v.max(0.0));
        let tr = linalg::trace(&clipped).re;
        Ok(Self {
            dims: rho.dims,
            matrix: clipped.unscale(tr),
        })
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Self {
        let d: usize = dims.iter().product();
        Self {
            dims,
            matrix: linalg::identity(d).unscale(d as f64),
        }
    }

    /// `rho_1 (x) ... (x) rho_n`.
    pub fn product(locals: &[CMat]) -> Result<Self> {
        let dims = locals.iter().map(|m| m.nrows()).collect();
        let matrix = locals
            .iter()
            .skip(1)
            .fold(locals[0].clone(), |acc, m| linalg::kron(&acc, m));
        Self::new(dims, matrix)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn diagonal(&self) -> Vec<f64> {
        self.matrix.diagonal().iter().map(|z| z.re).collect()
    }

    pub fn check_player(&self, player: usize) -> Result<()> {
        if player >= self.dims.len() {
            return Err(Error::InvalidPlayer {
                index: player,
                players: self.dims.len(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PureState {
    dims: Vec<usize>,
    amplitudes: CVec,
}

impl PureState {
    pub fn new(dims: Vec<usize>, amplitudes: CVec) -> Result<Self> {
        check_dims(&dims, amplitudes.len())?;
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > tolerance::NORM {
            return Err(Error::InvalidState(format!("pure state has norm {norm}")));
        }
        Ok(Self { dims, amplitudes })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amplitudes(&self) -> &CVec {
        &self.amplitudes
    }

    /// `|psi><psi|`.
    pub fn density(&self) -> DensityMatrix {
        let m = &self.amplitudes * self.amplitudes.adjoint();
        DensityMatrix {
            dims: self.dims.clone(),
            matrix: linalg::hermitian_part(&m),
        }
    }
}

/// A channel acting on one player's local space through Kraus operators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KrausChannel {
    player: usize,
    operators: Vec<CMat>,
}

impl KrausChannel {
    /// Validates `sum_j A_j^dagger A_j = I` entrywise.
    pub fn new(player: usize, operators: Vec<CMat>) -> Result<Self> {
        let Some(first) = operators.first() else {
            return Err(Error::InvalidChannel("no Kraus operators".into()));
        };
        let m = first.nrows();
        if operators.iter().any(|a| a.nrows() != m || a.ncols() != m) {
            return Err(Error::InvalidChannel(
                "Kraus operators must be square and equal size".into(),
            ));
        }
        let sum = operators
            .iter()
            .fold(CMat::zeros(m, m), |acc, a| acc + a.adjoint() * a);
        let err = linalg::max_abs_diff(&sum, &linalg::identity(m));
        if err > tolerance::KRAUS {
            return Err(Error::InvalidChannel(format!(
                "Kraus completeness violated by {err:e}"
            )));
        }
        Ok(Self { player, operators })
    }

    pub fn identity(player: usize, m: usize) -> Self {
        Self {
            player,
            operators: vec![linalg::identity(m)],
        }
    }

    pub fn unitary(player: usize, u: CMat) -> Result<Self> {
        Self::new(player, vec![u])
    }

    /// Random channel with `rank` Kraus operators cut from a Haar isometry.
    pub fn random(player: usize, m: usize, rank: usize, rng: &mut impl rand::Rng) -> Self {
        let v = linalg::random_isometry(rng, m * rank, m);
        let operators = (0..rank).map(|j| v.rows(j * m, m).into_owned()).collect();
        Self { player, operators }
    }

    /// Convex combination `w * self + (1 - w) * other` as a Kraus list.
    pub fn mix(&self, other: &KrausChannel, w: f64) -> Result<Self> {
        if self.player != other.player || self.dim() != other.dim() {
            return Err(Error::InvalidChannel(
                "mixing channels on different spaces".into(),
            ));
        }
        let a = self.operators.iter().map(|k| k.scale(w.sqrt()));
        let b = other.operators.iter().map(|k| k.scale((1.0 - w).sqrt()));
        Self::new(self.player, a.chain(b).collect())
    }

    pub fn player(&self) -> usize {
        self.player
    }

    pub fn operators(&self) -> &[CMat] {
        &self.operators
    }

    pub fn dim(&self) -> usize {
        self.operators[0].nrows()
    }
}

/// `(A (x) I_{-i}) M` where `A` acts on factor `player`.
pub fn left_local(m: &CMat, a: &CMat, dims: &[usize], player: usize) -> CMat {
    let local = dims[player];
    let st = game::stride(dims, player);
    let block = local * st;
    let d = m.nrows();
    let mut out = CMat::zeros(d, m.ncols());
    for col in 0..m.ncols() {
        for hi in (0..d).step_by(block) {
            for lo in 0..st {
                for r in 0..local {
                    let mut acc = ZERO;
                    for t in 0..local {
                        let coef = a[(r, t)];
                        if coef != ZERO {
                            acc += coef * m[(hi + t * st + lo, col)];
                        }
                    }
                    out[(hi + r * st + lo, col)] = acc;
                }
            }
        }
    }
    out
}

/// `(A (x) I) M (A (x) I)^dagger`.
pub fn conjugate_local(m: &CMat, a: &CMat, dims: &[usize], player: usize) -> CMat {
    let left = left_local(m, a, dims, player);
    left_local(&left.adjoint(), a, dims, player).adjoint()
}

/// `rho(p) = sum_s p(s) |s><s|`.
pub fn lift_diagonal(p: &JointDistribution, dims: &[usize]) -> Result<DensityMatrix> {
    check_dims(dims, p.len())?;
    let diag = DVector::from_iterator(p.len(), p.probs().iter().map(|&x| linalg::re(x)));
    Ok(DensityMatrix {
        dims: dims.to_vec(),
        matrix: CMat::from_diagonal(&diag),
    })
}

/// `|psi(p)> = sum_s sqrt(p(s)) |s>`.
pub fn lift_pure(p: &JointDistribution, dims: &[usize]) -> Result<PureState> {
    check_dims(dims, p.len())?;
    let amps = DVector::from_iterator(p.len(), p.probs().iter().map(|&x| linalg::re(x.sqrt())));
    PureState::new(dims.to_vec(), amps)
}

/// `D^{1/2} C D^{1/2}` with `D = diag(p)` and `C` a unit-diagonal PSD correlation matrix.
pub fn lift_with_correlation(
    p: &JointDistribution,
    dims: &[usize],
    correlation: &CMat,
) -> Result<DensityMatrix> {
    check_dims(dims, p.len())?;
    let d = p.len();
    if correlation.nrows() != d || correlation.ncols() != d {
        return Err(Error::DimensionMismatch("correlation matrix size".into()));
    }
    if (0..d).any(|s| (correlation[(s, s)] - ONE).norm() > 1e-12) {
        return Err(Error::InvalidState(
            "correlation matrix must have unit diagonal".into(),
        ));
    }
    let sq: Vec<f64> = p.probs().iter().map(|x| x.sqrt()).collect();
    let mut m = CMat::from_fn(d, d, |s, t| correlation[(s, t)] * (sq[s] * sq[t]));
    for (s, &ps) in p.probs().iter().enumerate() {
        m[(s, s)] = linalg::re(ps);
    }
    DensityMatrix::new(dims.to_vec(), m)
}

/// A random state whose diagonal is exactly `p`: the correlation matrix is the Gram
/// matrix of random unit vectors in `C^r`, `r` uniform in `1..=|S|`.
pub fn random_lift(p: &JointDistribution, dims: &[usize], seed: u64) -> Result<DensityMatrix> {
    let mut rng = rng::seeded(seed);
    let d = p.len();
    let rank = rng.random_range(1..=d.max(1));
    let mut v = linalg::gaussian_matrix(&mut rng, rank, d);
    for mut col in v.column_iter_mut() {
        let n = col.norm();
        col.unscale_mut(n);
    }
    let correlation = v.adjoint() * &v;
    let mut c = linalg::hermitian_part(&correlation);
    for s in 0..d {
        c[(s, s)] = ONE;
    }
    lift_with_correlation(p, dims, &c)
}

/// `p(s) = rho_ss`.
pub fn induced_distribution(rho: &DensityMatrix) -> Result<JointDistribution> {
    let diag = rho.diagonal();
    let total: f64 = diag.iter().sum();
    if (total - 1.0).abs() > tolerance::TRACE {
        return Err(Error::InvalidState(format!("trace {total} is not 1")));
    }
    JointDistribution::new(diag.iter().map(|x| x.max(0.0) / total).collect())
}

pub fn apply_channel(rho: &DensityMatrix, channel: &KrausChannel) -> Result<DensityMatrix> {
    rho.check_player(channel.player)?;
    if channel.dim() != rho.dims[channel.player] {
        return Err(Error::DimensionMismatch(format!(
            "channel acts on dimension {}, player {} has {}",
            channel.dim(),
            channel.player,
            rho.dims[channel.player]
        )));
    }
    let d = rho.dim();
    let out = channel.operators.iter().fold(CMat::zeros(d, d), |acc, a| {
        acc + conjugate_local(&rho.matrix, a, &rho.dims, channel.player)
    });
    DensityMatrix::new(rho.dims.clone(), out)
}

/// Channel that moves player `player`'s strategy `from` onto `to` and leaves every
/// other strategy in place: Kraus operators `|t><t|` for `t != from` and `|to><from|`.
pub fn swap_channel(dims: &[usize], player: usize, from: usize, to: usize) -> Result<KrausChannel> {
    if player >= dims.len() {
        return Err(Error::InvalidPlayer {
            index: player,
            players: dims.len(),
        });
    }
    let m = dims[player];
    if from >= m || to >= m {
        return Err(Error::InvalidChannel(format!(
            "strategies {from}, {to} outside 0..{m}"
        )));
    }
    if from == to {
        return Err(Error::InvalidChannel(
            "swap needs two distinct strategies".into(),
        ));
    }
    let mut operators: Vec<CMat> = (0..m)
        .filter(|&t| t != from)
        .map(|t| {
            let mut p = CMat::zeros(m, m);
            p[(t, t)] = ONE;
            p
        })
        .collect();
    let mut moved = CMat::zeros(m, m);
    moved[(to, from)] = ONE;
    operators.push(moved);
    KrausChannel::new(player, operators)
}

/// Local blocks `R_r = (I_i (x) <r|) rho (I_i (x) |r>)` for every assignment `r` of
/// the other players, listed in joint order of `r`.
pub fn local_blocks(rho: &DensityMatrix, player: usize) -> Vec<CMat> {
    let dims = &rho.dims;
    let m = dims[player];
    let st = game::stride(dims, player);
    let d = rho.dim();
    let mut blocks = Vec::with_capacity(d / m);
    for base in (0..d).filter(|&j| game::coordinate(dims, j, player) == 0) {
        blocks.push(CMat::from_fn(m, m, |x, y| {
            rho.matrix[(base + x * st, base + y * st)]
        }));
    }
    blocks
}

/// Partial trace over every player except `player`.
pub fn marginal(rho: &DensityMatrix, player: usize) -> Result<CMat> {
    rho.check_player(player)?;
    let m = rho.dims[player];
    Ok(local_blocks(rho, player)
        .into_iter()
        .fold(CMat::zeros(m, m), |acc, b| acc + b))
}

/// Frobenius distance between `rho` and the product of its marginals.
pub fn product_distance(rho: &DensityMatrix) -> f64 {
    let locals: Vec<CMat> = (0..rho.dims.len())
        .map(|i| marginal(rho, i).expect("player in range"))
        .collect();
    let prod = locals
        .iter()
        .skip(1)
        .fold(locals[0].clone(), |acc, m| linalg::kron(&acc, m));
    linalg::frobenius(&(&rho.matrix - prod))
}

/// Convenience for building states from real amplitudes.
pub fn pure_from_real(dims: Vec<usize>, amps: &[f64]) -> Result<PureState> {
    PureState::new(
        dims,
        DVector::from_iterator(amps.len(), amps.iter().map(|&a| Complex64::new(a, 0.0))),
    )
}
