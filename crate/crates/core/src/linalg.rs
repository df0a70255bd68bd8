//! Dense complex linear algebra used throughout the crate.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[inline]
pub fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn from_real_rows(rows: &[&[f64]]) -> CMat {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    CMat::from_fn(n, m, |i, j| re(rows[i][j]))
}

/// Eigen-decomposition of a Hermitian matrix; eigenvalues ascending, eigenvectors as
/// columns in matching order. Only the Hermitian part of `m` is used.
pub fn hermitian_eigen(m: &CMat) -> (Vec<f64>, CMat) {
    let h = hermitian_part(m);
    let eig = h.symmetric_eigen();
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMat::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

pub fn eigenvalues(m: &CMat) -> Vec<f64> {
    hermitian_eigen(m).0
}

pub fn min_eigenvalue(m: &CMat) -> f64 {
    eigenvalues(m).first().copied().unwrap_or(0.0)
}

pub fn max_eigenvalue(m: &CMat) -> f64 {
    eigenvalues(m).last().copied().unwrap_or(0.0)
}

pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()).scale(0.5)
}

/// Largest entrywise deviation from Hermiticity.
pub fn hermiticity_error(m: &CMat) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn frobenius(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn trace(m: &CMat) -> Complex64 {
    m.diagonal().iter().sum()
}

/// Real part of `Tr(a b)` without forming the product.
pub fn trace_product_re(a: &CMat, b: &CMat) -> f64 {
    let n = a.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for k in 0..n {
            acc += (a[(i, k)] * b[(k, i)]).re;
        }
    }
    acc
}

/// Apply `f` to the spectrum of a Hermitian matrix.
pub fn spectral_map(m: &CMat, f: impl Fn(f64) -> f64) -> CMat {
    let (values, vectors) = hermitian_eigen(m);
    let n = values.len();
    let mut out = CMat::zeros(n, n);
    for (k, &v) in values.iter().enumerate() {
        let fv = f(v);
        if fv == 0.0 {
            continue;
        }
        let col = vectors.column(k);
        out += (col * col.adjoint()).scale(fv);
    }
    out
}

/// Positive part `M_+` of a Hermitian matrix.
pub fn positive_part(m: &CMat) -> CMat {
    spectral_map(m, |v| v.max(0.0))
}

/// Orthogonal projector onto the eigenspace of strictly positive eigenvalues.
pub fn positive_projector(m: &CMat) -> CMat {
    spectral_map(m, |v| if v > 0.0 { 1.0 } else { 0.0 })
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn is_positive_definite(m: &CMat) -> bool {
    hermitian_part(m).cholesky().is_some()
}

pub fn gaussian(rng: &mut impl Rng) -> Complex64 {
    let a: f64 = rng.sample(StandardNormal);
    let b: f64 = rng.sample(StandardNormal);
    Complex64::new(a, b) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Matrix with orthonormal columns drawn from the Haar measure on the Stiefel manifold.
pub fn random_isometry(rng: &mut impl Rng, rows: usize, cols: usize) -> CMat {
    assert!(cols <= rows, "isometry needs cols <= rows");
    let g = gaussian_matrix(rng, rows, cols);
    let qr = g.qr();
    let q = qr.q();
    let r = qr.r();
    // Fix the phase ambiguity of QR so the distribution is Haar.
    let mut out = q.columns(0, cols).into_owned();
    for j in 0..cols {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { ONE };
        for i in 0..rows {
            out[(i, j)] *= phase;
        }
    }
    out
}

pub fn random_unitary(rng: &mut impl Rng, n: usize) -> CMat {
    random_isometry(rng, n, n)
}

/// Random density matrix `G G^dagger / Tr(G G^dagger)` with `G` a `n x rank` Ginibre matrix.
pub fn random_density(rng: &mut impl Rng, n: usize, rank: usize) -> CMat {
    let g = gaussian_matrix(rng, n, rank.max(1));
    let m = &g * g.adjoint();
    let t = trace(&m).re;
    hermitian_part(&m.unscale(t))
}

pub fn unitarity_error(u: &CMat) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    max_abs_diff(&(u.adjoint() * u), &identity(u.nrows()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn eigen_sorted_and_reconstructs() {
        let mut rng = seeded(3);
        let a = gaussian_matrix(&mut rng, 5, 5);
        let h = hermitian_part(&a);
        let (vals, vecs) = hermitian_eigen(&h);
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        let d = CMat::from_diagonal(&CVec::from_iterator(5, vals.iter().map(|&v| re(v))));
        let back = &vecs * d * vecs.adjoint();
        assert!(max_abs_diff(&back, &h) < 1e-12);
    }

    #[test]
    fn isometry_columns_orthonormal() {
        let mut rng = seeded(9);
        let v = random_isometry(&mut rng, 6, 3);
        assert!(max_abs_diff(&(v.adjoint() * &v), &identity(3)) < 1e-12);
        assert!(unitarity_error(&random_unitary(&mut rng, 4)) < 1e-12);
    }

    #[test]
    fn positive_part_splits_spectrum() {
        let m = from_real_rows(&[&[1.0, 2.0], &[2.0, -1.0]]);
        let p = positive_part(&m);
        let n = positive_part(&(-&m));
        assert!(max_abs_diff(&(&p - &n), &m) < 1e-12);
        assert!((trace(&p).re - 5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn random_density_is_state() {
        let mut rng = seeded(1);
        let rho = random_density(&mut rng, 4, 2);
        assert!((trace(&rho).re - 1.0).abs() < 1e-12);
        assert!(min_eigenvalue(&rho) > -1e-12);
        assert!(hermiticity_error(&rho) < 1e-15);
    }
}
