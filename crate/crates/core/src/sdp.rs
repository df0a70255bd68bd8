//! Certified optimisation of `sum_k Tr[E_k A_k]` over POVMs `{E_k}`.
//!
//! The primal is `max sum_k Tr[E_k A_k]` subject to `E_k >= 0`, `sum_k E_k = I`; the
//! dual is `min Tr Y` subject to `Y >= A_k` for every `k`. Two outcomes are solved in
//! closed form (the Helstrom measurement). Larger problems run a log-barrier
//! path-following method on the dual: at the centre of `Tr Y - mu sum_k log det(Y - A_k)`
//! the matrices `mu (Y - A_k)^{-1}` form a POVM and the duality gap is `mu K d`.
//! The returned POVM is always exactly feasible and `Y` strictly dual feasible, so
//! `primal <= optimum <= dual` holds regardless of how far the iteration got.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMat};
use crate::tolerance;

/// Newton-step cap across all barrier stages.
pub const MAX_ITERATIONS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Povm {
    elements: Vec<CMat>,
}

impl Povm {
    pub fn new(elements: Vec<CMat>) -> Result<Self> {
        let Some(first) = elements.first() else {
            return Err(Error::InvalidState("POVM without elements".into()));
        };
        let d = first.nrows();
        for e in &elements {
            if e.nrows() != d || e.ncols() != d {
                return Err(Error::DimensionMismatch(
                    "POVM elements differ in size".into(),
                ));
            }
            if linalg::hermiticity_error(e) > tolerance::HERMITIAN * 100.0 {
                return Err(Error::InvalidState("POVM element not Hermitian".into()));
            }
            let min = linalg::min_eigenvalue(e);
            if min < tolerance::PSD {
                return Err(Error::InvalidState(format!(
                    "POVM element has eigenvalue {min:e}"
                )));
            }
        }
        let sum = elements.iter().fold(CMat::zeros(d, d), |acc, e| acc + e);
        let err = linalg::max_abs_diff(&sum, &linalg::identity(d));
        if err > tolerance::POVM {
            return Err(Error::InvalidState(format!(
                "POVM sums to identity only within {err:e}"
            )));
        }
        Ok(Self { elements })
    }

    /// Projective measurement in the computational basis.
    pub fn computational(d: usize) -> Self {
        let elements = (0..d)
            .map(|k| {
                let mut e = CMat::zeros(d, d);
                e[(k, k)] = linalg::ONE;
                e
            })
            .collect();
        Self { elements }
    }

    pub fn elements(&self) -> &[CMat] {
        &self.elements
    }

    /// `sum_k Tr[E_k A_k]`.
    pub fn value(&self, ops: &[CMat]) -> f64 {
        self.elements
            .iter()
            .zip(ops)
            .map(|(e, a)| linalg::trace_product_re(e, a))
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PovmSolution {
    pub primal: f64,
    pub dual: f64,
    pub povm: Povm,
    pub dual_matrix: CMat,
    pub iterations: usize,
}

impl PovmSolution {
    pub fn gap(&self) -> f64 {
        self.dual - self.primal
    }
}

fn check_ops(ops: &[CMat]) -> Result<usize> {
    let Some(first) = ops.first() else {
        return Err(Error::Precondition("no operators to discriminate".into()));
    };
    let d = first.nrows();
    for a in ops {
        if a.nrows() != d || a.ncols() != d {
            return Err(Error::DimensionMismatch("operators differ in size".into()));
        }
        if linalg::hermiticity_error(a) > 1e-8 * (1.0 + linalg::frobenius(a)) {
            return Err(Error::Precondition("operator is not Hermitian".into()));
        }
    }
    Ok(d)
}

/// Two-outcome optimum `Tr A_1 + sum(positive eigenvalues of A_0 - A_1)`.
pub fn helstrom(a0: &CMat, a1: &CMat) -> Result<PovmSolution> {
    let d = check_ops(&[a0.clone(), a1.clone()])?;
    let diff = linalg::hermitian_part(&(a0 - a1));
    let e0 = linalg::positive_projector(&diff);
    let e1 = linalg::identity(d) - &e0;
    let dual_matrix = linalg::hermitian_part(a1) + linalg::positive_part(&diff);
    let povm = Povm {
        elements: vec![e0, e1],
    };
    let primal = povm.value(&[a0.clone(), a1.clone()]);
    let dual = linalg::trace(&dual_matrix).re;
    Ok(PovmSolution {
        primal,
        dual,
        povm,
        dual_matrix,
        iterations: 0,
    })
}

/// Orthonormal basis of `d x d` Hermitian matrices under `<X, Y> = Re Tr(X Y)`.
struct HermitianBasis {
    d: usize,
}

impl HermitianBasis {
    fn len(&self) -> usize {
        self.d * self.d
    }

    fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.d).flat_map(move |j| (j + 1..self.d).map(move |k| (j, k)))
    }

    fn coords(&self, m: &CMat) -> DVector<f64> {
        let mut y = Vec::with_capacity(self.len());
        y.extend((0..self.d).map(|j| m[(j, j)].re));
        for (j, k) in self.pairs() {
            y.push(std::f64::consts::SQRT_2 * 0.5 * (m[(j, k)].re + m[(k, j)].re));
        }
        for (j, k) in self.pairs() {
            y.push(std::f64::consts::SQRT_2 * 0.5 * (m[(j, k)].im - m[(k, j)].im));
        }
        DVector::from_vec(y)
    }

    fn matrix(&self, y: &DVector<f64>) -> CMat {
        let d = self.d;
        let mut m = CMat::zeros(d, d);
        for j in 0..d {
            m[(j, j)] = linalg::re(y[j]);
        }
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let npairs = d * (d - 1) / 2;
        for (p, (j, k)) in self.pairs().enumerate() {
            let r = y[d + p] * h;
            let i = y[d + npairs + p] * h;
            m[(j, k)] = num_complex::Complex64::new(r, i);
            m[(k, j)] = num_complex::Complex64::new(r, -i);
        }
        m
    }

    fn element(&self, a: usize) -> CMat {
        let mut y = DVector::zeros(self.len());
        y[a] = 1.0;
        self.matrix(&y)
    }
}

/// `log det` of a Hermitian positive definite matrix, `None` when not definite.
fn log_det(m: &CMat) -> Option<f64> {
    let chol = linalg::hermitian_part(m).cholesky()?;
    let l = chol.l();
    Some(2.0 * (0..m.nrows()).map(|i| l[(i, i)].re.ln()).sum::<f64>())
}

fn inverse_pd(m: &CMat) -> Option<CMat> {
    Some(linalg::hermitian_part(
        &linalg::hermitian_part(m).cholesky()?.inverse(),
    ))
}

struct Barrier<'a> {
    ops: &'a [CMat],
    basis: HermitianBasis,
}

impl Barrier<'_> {
    fn slacks(&self, y: &CMat) -> Vec<CMat> {
        self.ops.iter().map(|a| y - a).collect()
    }

    fn value(&self, y: &CMat, mu: f64) -> Option<f64> {
        let mut v = linalg::trace(y).re;
        for z in self.slacks(y) {
            v -= mu * log_det(&z)?;
        }
        Some(v)
    }

    /// Minimise the barrier objective for fixed `mu` by damped Newton from `y`.
    fn centre(&self, y: &mut CMat, mu: f64, iterations: &mut usize) -> Result<()> {
        let d = self.basis.d;
        let n = self.basis.len();
        let elements: Vec<CMat> = (0..n).map(|a| self.basis.element(a)).collect();
        loop {
            if *iterations >= MAX_ITERATIONS {
                return Err(Error::NoConvergence {
                    iterations: *iterations,
                    detail: "barrier centring".into(),
                });
            }
            *iterations += 1;
            let inverses: Vec<CMat> = self
                .slacks(y)
                .iter()
                .map(inverse_pd)
                .collect::<Option<_>>()
                .ok_or(Error::NumericalBreakdown)?;
            let grad_m = inverses
                .iter()
                .fold(linalg::identity(d), |acc, w| acc - w.scale(mu));
            let grad = self.basis.coords(&grad_m);
            let mut hess = DMatrix::<f64>::zeros(n, n);
            for w in &inverses {
                for (a, b) in elements.iter().enumerate() {
                    let col = self.basis.coords(&(w * b * w));
                    for r in 0..n {
                        hess[(r, a)] += mu * col[r];
                    }
                }
            }
            let hess = (&hess + hess.transpose()) * 0.5;
            let step = match hess.clone().cholesky() {
                Some(ch) => ch.solve(&(-&grad)),
                None => hess
                    .lu()
                    .solve(&(-&grad))
                    .ok_or(Error::NumericalBreakdown)?,
            };
            let decrement = -grad.dot(&step);
            if decrement.is_nan() {
                return Err(Error::NumericalBreakdown);
            }
            if decrement / 2.0 <= 1e-13 {
                return Ok(());
            }
            let delta = self.basis.matrix(&step);
            let f0 = self.value(y, mu).ok_or(Error::NumericalBreakdown)?;
            let mut t = 1.0;
            loop {
                let trial = &*y + delta.scale(t);
                if let Some(f) = self.value(&trial, mu) {
                    if f <= f0 - 0.25 * t * decrement {
                        *y = trial;
                        break;
                    }
                }
                t *= 0.5;
                if t < 1e-14 {
                    // No further progress is representable at this mu.
                    return Ok(());
                }
            }
        }
    }
}

/// POVM built from the near-null spaces of the dual slacks when those spaces form an
/// orthonormal basis (the complementary-slackness structure of a projective optimum).
fn slackness_povm(slacks: &[CMat], mu: f64) -> Option<Povm> {
    let d = slacks[0].nrows();
    let mut vectors: Vec<(usize, DVector<num_complex::Complex64>)> = Vec::new();
    for (k, z) in slacks.iter().enumerate() {
        let (vals, vecs) = linalg::hermitian_eigen(z);
        for (c, &v) in vals.iter().enumerate() {
            if v < 4.0 * mu {
                vectors.push((k, vecs.column(c).into_owned()));
            }
        }
    }
    if vectors.len() != d {
        return None;
    }
    let v = CMat::from_fn(d, d, |r, c| vectors[c].1[r]);
    let gram = v.adjoint() * &v;
    if linalg::max_abs_diff(&gram, &linalg::identity(d)) > 1e-3 {
        return None;
    }
    let orth = &v * linalg::spectral_map(&gram, |x| 1.0 / x.sqrt());
    let mut elements = vec![CMat::zeros(d, d); slacks.len()];
    for (c, (k, _)) in vectors.iter().enumerate() {
        let col = orth.column(c);
        elements[*k] += col * col.adjoint();
    }
    Povm::new(elements).ok()
}

/// General solver; `target_gap` is absolute in the units of `ops`.
pub fn solve_barrier(ops: &[CMat], target_gap: f64) -> Result<PovmSolution> {
    let d = check_ops(ops)?;
    let k = ops.len();
    let scale = ops
        .iter()
        .flat_map(|a| {
            let e = linalg::eigenvalues(a);
            [e[0].abs(), e[d - 1].abs()]
        })
        .fold(0.0f64, f64::max);
    if scale == 0.0 {
        let povm = Povm::computational(d);
        let mut elements = vec![CMat::zeros(d, d); k];
        for (i, e) in povm.elements.into_iter().enumerate() {
            elements[i % k] += e;
        }
        return Ok(PovmSolution {
            primal: 0.0,
            dual: 0.0,
            povm: Povm { elements },
            dual_matrix: CMat::zeros(d, d),
            iterations: 0,
        });
    }
    let scaled: Vec<CMat> = ops
        .iter()
        .map(|a| linalg::hermitian_part(a).unscale(scale))
        .collect();
    let barrier = Barrier {
        ops: &scaled,
        basis: HermitianBasis { d },
    };

    let top = scaled
        .iter()
        .map(linalg::max_eigenvalue)
        .fold(f64::NEG_INFINITY, f64::max);
    let mut y = linalg::identity(d).scale(top + 1.0);
    let mut mu = 1.0;
    let mut iterations = 0;
    let scaled_target = (target_gap / scale).max(1e-13);
    let best = loop {
        barrier.centre(&mut y, mu, &mut iterations)?;
        let slacks = barrier.slacks(&y);
        let inverses: Vec<CMat> = slacks
            .iter()
            .map(inverse_pd)
            .collect::<Option<_>>()
            .ok_or(Error::NumericalBreakdown)?;
        let raw: Vec<CMat> = inverses.iter().map(|w| w.scale(mu)).collect();
        let total = raw.iter().fold(CMat::zeros(d, d), |acc, e| acc + e);
        let root = linalg::spectral_map(&total, |x| 1.0 / x.sqrt());
        let elements: Vec<CMat> = raw
            .iter()
            .map(|e| linalg::hermitian_part(&(&root * e * &root)))
            .collect();
        let mut candidate = Povm { elements };
        let mut primal = candidate.value(&scaled);
        if let Some(rounded) = slackness_povm(&slacks, mu) {
            let v = rounded.value(&scaled);
            if v > primal {
                primal = v;
                candidate = rounded;
            }
        }
        let dual = linalg::trace(&y).re;
        if dual - primal <= scaled_target || mu * (k * d) as f64 <= 1e-3 * scaled_target {
            break (candidate, primal, dual);
        }
        mu *= 0.2;
    };
    let (povm, _, _) = best;
    let primal = povm.value(ops);
    let dual_matrix = y.scale(scale);
    let dual = linalg::trace(&dual_matrix).re;
    Ok(PovmSolution {
        primal,
        dual,
        povm,
        dual_matrix,
        iterations,
    })
}

/// Dispatches to [`helstrom`] for two outcomes and [`solve_barrier`] otherwise.
pub fn optimize_povm(ops: &[CMat]) -> Result<PovmSolution> {
    match ops {
        [a0, a1] => helstrom(a0, a1),
        _ => solve_barrier(ops, tolerance::SDP_GAP * 1e-3),
    }
}

/// Smallest eigenvalue of `Y - A_k` over `k`.
pub fn dual_slack(y: &CMat, ops: &[CMat]) -> f64 {
    ops.iter()
        .map(|a| linalg::min_eigenvalue(&(y - a)))
        .fold(f64::INFINITY, f64::min)
}
