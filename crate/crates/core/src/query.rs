//! State-vector simulation of query algorithms against a boolean oracle, with the
//! bookkeeping behind hybrid-argument lower bounds.
//!
//! The register is an index `x in [0, N)` and one answer qubit `b`, stored at position
//! `2 x + b`. A query maps `|x, b>` to `|x, b xor f(x)>`. An algorithm is a list of
//! blocks `U_0, ..., U_k` with a query between consecutive blocks, run from `|0, 0>`.

use std::collections::BTreeSet;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, CVec, ONE, ZERO};
use crate::rng;
use crate::tolerance;

pub const MAX_DOMAIN: usize = 256;
pub const MAX_QUERIES: usize = 32;

/// `f: [N] -> {0, 1}` given by its marked set; the empty set is the all-zero oracle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Oracle {
    n: usize,
    marked: BTreeSet<usize>,
}

impl Oracle {
    pub fn new(n: usize, marked: impl IntoIterator<Item = usize>) -> Result<Self> {
        if n < 2 {
            return Err(Error::Precondition(format!(
                "domain size must be at least 2, got {n}"
            )));
        }
        let marked: BTreeSet<usize> = marked.into_iter().collect();
        if let Some(&z) = marked.iter().find(|&&z| z >= n) {
            return Err(Error::Precondition(format!(
                "marked index {z} outside [0, {n})"
            )));
        }
        Ok(Self { n, marked })
    }

    /// The oracle `h` with no marked inputs.
    pub fn empty(n: usize) -> Result<Self> {
        Self::new(n, [])
    }

    pub fn single(n: usize, z: usize) -> Result<Self> {
        Self::new(n, [z])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn marked(&self) -> &BTreeSet<usize> {
        &self.marked
    }

    pub fn eval(&self, x: usize) -> bool {
        self.marked.contains(&x)
    }

    fn apply(&self, psi: &mut CVec) {
        for &x in &self.marked {
            psi.swap_rows(2 * x, 2 * x + 1);
        }
    }
}

/// One gate of a block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Op {
    /// Unitary on the whole `2N`-dimensional space.
    Dense(CMat),
    /// 2x2 unitary on basis states `i` and `j` of the full space.
    TwoLevel { i: usize, j: usize, u: CMat },
    /// `sign * (I - 2 |w><w|)` on the index register, identity on the answer.
    IndexReflection { w: CVec, negate: bool },
    /// 2x2 unitary on the answer qubit.
    Answer(CMat),
}

impl Op {
    fn check(&self, dim: usize) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidChannel(format!("{what} is not unitary")));
        match self {
            Op::Dense(u) => {
                if u.nrows() != dim || u.ncols() != dim {
                    return Err(Error::DimensionMismatch(format!(
                        "dense block {}x{} on dim {dim}",
                        u.nrows(),
                        u.ncols()
                    )));
                }
                if linalg::unitarity_error(u) > tolerance::UNITARY {
                    return bad("dense block");
                }
            }
            Op::TwoLevel { i, j, u } => {
                if i == j || *i >= dim || *j >= dim || u.shape() != (2, 2) {
                    return Err(Error::DimensionMismatch(format!(
                        "two-level gate on ({i}, {j}) in dim {dim}"
                    )));
                }
                if linalg::unitarity_error(u) > tolerance::UNITARY {
                    return bad("two-level gate");
                }
            }
            Op::IndexReflection { w, .. } => {
                if w.len() * 2 != dim {
                    return Err(Error::DimensionMismatch(format!(
                        "reflection vector of length {}",
                        w.len()
                    )));
                }
                if (w.norm() - 1.0).abs() > tolerance::UNITARY {
                    return bad("reflection about a non-unit vector");
                }
            }
            Op::Answer(u) => {
                if u.shape() != (2, 2) {
                    return Err(Error::DimensionMismatch("answer gate must be 2x2".into()));
                }
                if linalg::unitarity_error(u) > tolerance::UNITARY {
                    return bad("answer gate");
                }
            }
        }
        Ok(())
    }

    fn apply(&self, psi: &mut CVec) {
        match self {
            Op::Dense(u) => *psi = u * &*psi,
            Op::TwoLevel { i, j, u } => {
                let (a, b) = (psi[*i], psi[*j]);
                psi[*i] = u[(0, 0)] * a + u[(0, 1)] * b;
                psi[*j] = u[(1, 0)] * a + u[(1, 1)] * b;
            }
            Op::IndexReflection { w, negate } => {
                let n = w.len();
                for b in 0..2 {
                    let overlap: num_complex::Complex64 =
                        (0..n).map(|x| w[x].conj() * psi[2 * x + b]).sum();
                    for x in 0..n {
                        let v = psi[2 * x + b] - w[x] * overlap * 2.0;
                        psi[2 * x + b] = if *negate { -v } else { v };
                    }
                }
            }
            Op::Answer(u) => {
                for x in 0..psi.len() / 2 {
                    let (a, b) = (psi[2 * x], psi[2 * x + 1]);
                    psi[2 * x] = u[(0, 0)] * a + u[(0, 1)] * b;
                    psi[2 * x + 1] = u[(1, 0)] * a + u[(1, 1)] * b;
                }
            }
        }
    }
}

pub type Block = Vec<Op>;

fn apply_block(block: &Block, psi: &mut CVec) {
    for op in block {
        op.apply(psi);
    }
}

/// Dense matrix of a block.
pub fn block_matrix(block: &Block, n: usize) -> CMat {
    let dim = 2 * n;
    let mut out = CMat::zeros(dim, dim);
    for c in 0..dim {
        let mut e = CVec::zeros(dim);
        e[c] = ONE;
        apply_block(block, &mut e);
        out.set_column(c, &e);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryAlgorithm {
    n: usize,
    blocks: Vec<Block>,
}

impl QueryAlgorithm {
    pub fn new(n: usize, blocks: Vec<Block>) -> Result<Self> {
        if !(2..=MAX_DOMAIN).contains(&n) {
            return Err(Error::Unsupported(format!(
                "domain size {n} outside [2, {MAX_DOMAIN}]"
            )));
        }
        if blocks.is_empty() {
            return Err(Error::Precondition(
                "an algorithm needs at least the block U_0".into(),
            ));
        }
        if blocks.len() - 1 > MAX_QUERIES {
            return Err(Error::Unsupported(format!(
                "{} queries exceeds the cap of {MAX_QUERIES}",
                blocks.len() - 1
            )));
        }
        for op in blocks.iter().flatten() {
            op.check(2 * n)?;
        }
        Ok(Self { n, blocks })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn queries(&self) -> usize {
        self.blocks.len() - 1
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn dense_blocks(&self) -> Vec<CMat> {
        self.blocks
            .iter()
            .map(|b| block_matrix(b, self.n))
            .collect()
    }
}

pub fn initial_state(n: usize) -> CVec {
    let mut psi = CVec::zeros(2 * n);
    psi[0] = ONE;
    psi
}

fn check_oracle(alg: &QueryAlgorithm, oracle: &Oracle) -> Result<()> {
    if alg.n != oracle.n {
        return Err(Error::DimensionMismatch(format!(
            "algorithm on N={} with oracle on N={}",
            alg.n, oracle.n
        )));
    }
    Ok(())
}

/// Final state; `before_query(t, psi)` sees the state just before query `t` (0-based).
pub fn simulate_traced(
    alg: &QueryAlgorithm,
    oracle: &Oracle,
    mut before_query: impl FnMut(usize, &CVec),
) -> Result<CVec> {
    check_oracle(alg, oracle)?;
    let mut psi = initial_state(alg.n);
    for (t, block) in alg.blocks.iter().enumerate() {
        if t > 0 {
            before_query(t - 1, &psi);
            oracle.apply(&mut psi);
        }
        apply_block(block, &mut psi);
    }
    Ok(psi)
}

pub fn simulate(alg: &QueryAlgorithm, oracle: &Oracle) -> Result<CVec> {
    simulate_traced(alg, oracle, |_, _| {})
}

/// States just before each query under `oracle`.
pub fn query_states(alg: &QueryAlgorithm, oracle: &Oracle) -> Result<Vec<CVec>> {
    let mut out = Vec::with_capacity(alg.queries());
    simulate_traced(alg, oracle, |_, psi| out.push(psi.clone()))?;
    Ok(out)
}

/// Probability of measuring an index in `targets`.
pub fn index_probability(psi: &CVec, targets: &BTreeSet<usize>) -> f64 {
    targets
        .iter()
        .map(|&x| psi[2 * x].norm_sqr() + psi[2 * x + 1].norm_sqr())
        .sum()
}

pub fn success_probability(alg: &QueryAlgorithm, oracle: &Oracle) -> Result<f64> {
    Ok(index_probability(&simulate(alg, oracle)?, oracle.marked()))
}

/// Per-index squared amplitude summed over query times, under the all-zero oracle.
pub fn query_magnitudes(alg: &QueryAlgorithm) -> Result<Vec<f64>> {
    let mut mags = vec![0.0; alg.n];
    simulate_traced(alg, &Oracle::empty(alg.n)?, |_, psi| {
        for (x, m) in mags.iter_mut().enumerate() {
            *m += psi[2 * x].norm_sqr() + psi[2 * x + 1].norm_sqr();
        }
    })?;
    Ok(mags)
}

/// Two distinct indices of magnitude at most `(k + 1) / N`; such a pair exists
/// whenever the magnitudes sum to `k <= N - 2`.
pub fn find_low_magnitude_pair(magnitudes: &[f64], k: usize) -> Result<(usize, usize)> {
    let n = magnitudes.len();
    if n < 2 || k + 2 > n {
        return Err(Error::Precondition(format!(
            "need k <= N - 2, got k={k}, N={n}"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| magnitudes[a].total_cmp(&magnitudes[b]).then(a.cmp(&b)));
    let limit = (k + 1) as f64 / n as f64;
    let (z1, z2) = (order[0], order[1]);
    if magnitudes[z2] > limit + tolerance::ALGEBRAIC {
        let total: f64 = magnitudes.iter().sum();
        return Err(Error::Precondition(format!(
            "no low-magnitude pair; magnitudes sum to {total}, not {k}"
        )));
    }
    Ok((z1.min(z2), z1.max(z2)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HybridRecord {
    pub z: usize,
    pub k: usize,
    pub n: usize,
    /// `|alpha_{z,t}|` before each query under the all-zero oracle.
    pub amplitudes: Vec<f64>,
    pub magnitude: f64,
    /// `magnitude <= (k + 1) / N`.
    pub precondition: bool,
    /// `||phi_h - phi_g||` for the final states.
    pub lhs: f64,
    /// `sqrt(2) sum_t |alpha_{z,t}|`.
    pub rhs_sqrt2: f64,
    /// `(k + 1) sqrt(2 / N)`.
    pub rhs_single: f64,
    /// `sum_t ||(O_g - I) phi_{h,t}||`, the exact per-query error norms.
    pub rhs_triangle: f64,
    /// `2 sum_t |alpha_{z,t}|`, valid for every answer-qubit state.
    pub rhs_general: f64,
}

impl HybridRecord {
    pub fn sqrt2_holds(&self) -> bool {
        self.lhs <= self.rhs_sqrt2 + tolerance::ALGEBRAIC
    }

    pub fn triangle_holds(&self) -> bool {
        self.lhs <= self.rhs_triangle + tolerance::ALGEBRAIC
    }

    pub fn general_holds(&self) -> bool {
        self.lhs <= self.rhs_general + tolerance::ALGEBRAIC
    }

    /// `rhs_sqrt2 <= rhs_single`, expected whenever the precondition holds.
    pub fn single_bound_holds(&self) -> bool {
        self.rhs_sqrt2 <= self.rhs_single + tolerance::ALGEBRAIC
    }
}

/// Compare the all-zero oracle with the oracle marking only `z`.
pub fn hybrid_check(alg: &QueryAlgorithm, z: usize) -> Result<HybridRecord> {
    let n = alg.n;
    let k = alg.queries();
    let h = Oracle::empty(n)?;
    let g = Oracle::single(n, z)?;
    let states = query_states(alg, &h)?;
    let amplitudes: Vec<f64> = states
        .iter()
        .map(|psi| (psi[2 * z].norm_sqr() + psi[2 * z + 1].norm_sqr()).sqrt())
        .collect();
    let magnitude: f64 = amplitudes.iter().map(|a| a * a).sum();
    let rhs_triangle = states
        .iter()
        .map(|psi| std::f64::consts::SQRT_2 * (psi[2 * z] - psi[2 * z + 1]).norm())
        .sum();
    let sum_alpha: f64 = amplitudes.iter().sum();
    let lhs = (simulate(alg, &h)? - simulate(alg, &g)?).norm();
    Ok(HybridRecord {
        z,
        k,
        n,
        amplitudes,
        magnitude,
        precondition: magnitude <= (k + 1) as f64 / n as f64 + tolerance::ALGEBRAIC,
        lhs,
        rhs_sqrt2: std::f64::consts::SQRT_2 * sum_alpha,
        rhs_single: (k + 1) as f64 * (2.0 / n as f64).sqrt(),
        rhs_triangle,
        rhs_general: 2.0 * sum_alpha,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseRecord {
    pub z1: usize,
    pub z2: usize,
    pub k: usize,
    pub n: usize,
    pub precondition: bool,
    /// `||phi_{g1} - phi_{g2}||`.
    pub distance: f64,
    /// `2 (k + 1) sqrt(2 / N)`.
    pub bound: f64,
    /// Sum of both per-query triangle bounds.
    pub triangle_bound: f64,
    /// Optimal probability of telling the two final states apart.
    pub helstrom_success: f64,
    /// `1/2 + distance / 2`.
    pub distinguisher_bound: f64,
}

impl PairwiseRecord {
    pub fn holds(&self) -> bool {
        self.distance <= self.bound + tolerance::ALGEBRAIC
    }
}

/// Distance between the single-marked oracles at a low-magnitude pair.
pub fn pairwise_check(alg: &QueryAlgorithm) -> Result<PairwiseRecord> {
    let n = alg.n;
    let k = alg.queries();
    let mags = query_magnitudes(alg)?;
    let (z1, z2) = find_low_magnitude_pair(&mags, k)?;
    let a = simulate(alg, &Oracle::single(n, z1)?)?;
    let b = simulate(alg, &Oracle::single(n, z2)?)?;
    let distance = (&a - &b).norm();
    let overlap = a.dotc(&b).norm_sqr().min(1.0);
    let r1 = hybrid_check(alg, z1)?;
    let r2 = hybrid_check(alg, z2)?;
    Ok(PairwiseRecord {
        z1,
        z2,
        k,
        n,
        precondition: r1.precondition && r2.precondition,
        distance,
        bound: 2.0 * (k + 1) as f64 * (2.0 / n as f64).sqrt(),
        triangle_bound: r1.rhs_triangle + r2.rhs_triangle,
        helstrom_success: 0.5 + 0.5 * (1.0 - overlap).sqrt(),
        distinguisher_bound: 0.5 + distance / 2.0,
    })
}

fn uniform_index(n: usize) -> CVec {
    CVec::from_element(n, linalg::re(1.0 / (n as f64).sqrt()))
}

/// Householder reflection sending `|0>` to `|v>` for a real unit vector `v` (`v != e_0`).
fn prepare_from_zero(v: &CVec) -> Op {
    let mut w = -v.clone();
    w[0] += ONE;
    let norm = w.norm();
    Op::IndexReflection {
        w: w / linalg::re(norm),
        negate: false,
    }
}

fn hadamard() -> CMat {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    linalg::from_real_rows(&[&[s, s], &[s, -s]])
}

fn pauli_x() -> CMat {
    linalg::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
}

/// Grover search with `k` queries: uniform superposition, answer qubit in `|->` so each
/// query flips the sign of marked indices, and the diffusion `2|s><s| - I` after
/// every query. The last block returns the answer qubit to `|0>`.
pub fn grover(n: usize, k: usize, marked: &BTreeSet<usize>) -> Result<QueryAlgorithm> {
    if marked.is_empty() {
        return Err(Error::Precondition(
            "Grover search needs at least one marked index".into(),
        ));
    }
    Oracle::new(n, marked.iter().copied())?;
    let s = uniform_index(n);
    let diffusion = Op::IndexReflection {
        w: s.clone(),
        negate: true,
    };
    let mut blocks = vec![vec![
        prepare_from_zero(&s),
        Op::Answer(pauli_x()),
        Op::Answer(hadamard()),
    ]];
    for t in 1..=k {
        let mut block = vec![diffusion.clone()];
        if t == k {
            block.extend([Op::Answer(hadamard()), Op::Answer(pauli_x())]);
        }
        blocks.push(block);
    }
    if k == 0 {
        blocks[0].extend([Op::Answer(hadamard()), Op::Answer(pauli_x())]);
    }
    QueryAlgorithm::new(n, blocks)
}

/// `sin^2((2k + 1) asin(sqrt(M / N)))`.
pub fn grover_success_closed_form(n: usize, k: usize, marked: usize) -> f64 {
    let theta = (marked as f64 / n as f64).sqrt().asin();
    ((2 * k + 1) as f64 * theta).sin().powi(2)
}

/// Random unitary on a two-dimensional subspace.
fn random_two_level(rng: &mut impl rand::Rng) -> CMat {
    linalg::random_unitary(rng, 2)
}

/// Seeded circuit whose blocks are products of `gates_per_block` random two-level
/// unitaries on random pairs of basis states.
pub fn random_circuit(
    n: usize,
    k: usize,
    gates_per_block: usize,
    seed: u64,
) -> Result<QueryAlgorithm> {
    let dim = 2 * n;
    let mut rng = rng::seeded(seed);
    let blocks = (0..=k)
        .map(|_| {
            (0..gates_per_block)
                .map(|_| {
                    let i = rng.random_range(0..dim);
                    let mut j = rng.random_range(0..dim - 1);
                    if j >= i {
                        j += 1;
                    }
                    Op::TwoLevel {
                        i,
                        j,
                        u: random_two_level(&mut rng),
                    }
                })
                .collect()
        })
        .collect();
    QueryAlgorithm::new(n, blocks)
}

/// Circuit from dense blocks (as read from a circuit file).
pub fn from_dense(n: usize, blocks: Vec<CMat>) -> Result<QueryAlgorithm> {
    QueryAlgorithm::new(n, blocks.into_iter().map(|u| vec![Op::Dense(u)]).collect())
}

/// Unit vector on the index register tensored with answer `|0>`.
pub fn index_state(amplitudes: &[f64]) -> CVec {
    let mut psi = CVec::from_element(2 * amplitudes.len(), ZERO);
    for (x, a) in amplitudes.iter().enumerate() {
        psi[2 * x] = linalg::re(*a);
    }
    psi
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[usize]) -> BTreeSet<usize> {
        xs.iter().copied().collect()
    }

    #[test]
    fn zero_queries_are_oracle_independent() {
        let alg = random_circuit(8, 0, 20, 1).unwrap();
        let a = simulate(&alg, &Oracle::empty(8).unwrap()).unwrap();
        let b = simulate(&alg, &Oracle::new(8, [1, 5]).unwrap()).unwrap();
        assert_eq!(a, b);
        assert!(query_magnitudes(&alg).unwrap().iter().all(|&m| m == 0.0));
    }

    #[test]
    fn empty_oracle_matches_query_free_circuit() {
        let alg = random_circuit(8, 3, 20, 2).unwrap();
        let mut psi = initial_state(8);
        for u in alg.dense_blocks() {
            psi = u * psi;
        }
        let out = simulate(&alg, &Oracle::empty(8).unwrap()).unwrap();
        assert!((out - psi).norm() < 1e-12);
    }

    #[test]
    fn grover_closed_form_examples() {
        let p = success_probability(
            &grover(16, 3, &set(&[3])).unwrap(),
            &Oracle::single(16, 3).unwrap(),
        )
        .unwrap();
        assert!((p - grover_success_closed_form(16, 3, 1)).abs() < 1e-9);
        assert!((p - 0.9613).abs() < 1e-4);
        let p = success_probability(
            &grover(4, 1, &set(&[2])).unwrap(),
            &Oracle::single(4, 2).unwrap(),
        )
        .unwrap();
        assert!((p - 1.0).abs() < 1e-9);
        let alg = grover(16, 0, &set(&[3])).unwrap();
        let p = success_probability(&alg, &Oracle::single(16, 3).unwrap()).unwrap();
        assert!((p - 1.0 / 16.0).abs() < 1e-12);
        let marked = set(&[1, 20, 33, 60]);
        let oracle = Oracle::new(64, marked.clone()).unwrap();
        // sqrt(N / M) = 4 queries overshoots; 3 is the optimum
        let p4 = success_probability(&grover(64, 4, &marked).unwrap(), &oracle).unwrap();
        assert!((p4 - grover_success_closed_form(64, 4, 4)).abs() < 1e-9);
        let p3 = success_probability(&grover(64, 3, &marked).unwrap(), &oracle).unwrap();
        assert!(p3 > 0.9);
    }

    #[test]
    fn grover_answer_qubit_is_restored() {
        let alg = grover(16, 3, &set(&[3])).unwrap();
        let psi = simulate(&alg, &Oracle::single(16, 3).unwrap()).unwrap();
        let answer_one: f64 = (0..16).map(|x| psi[2 * x + 1].norm_sqr()).sum();
        assert!(answer_one < 1e-20);
        assert!(grover(16, 3, &BTreeSet::new()).is_err());
    }

    #[test]
    fn magnitudes_sum_to_query_count() {
        let alg = grover(16, 2, &set(&[3])).unwrap();
        let mags = query_magnitudes(&alg).unwrap();
        assert!((mags.iter().sum::<f64>() - 2.0).abs() < 1e-9);
        for m in &mags {
            assert!((m - 2.0 / 16.0).abs() < 1e-12);
        }
    }

    #[test]
    fn concentrated_querier_still_leaves_a_pair() {
        // every query on index 5
        let swap = Op::TwoLevel {
            i: 0,
            j: 10,
            u: pauli_x(),
        };
        let alg = QueryAlgorithm::new(8, vec![vec![swap.clone()], vec![], vec![], vec![]]).unwrap();
        let mags = query_magnitudes(&alg).unwrap();
        assert!((mags[5] - 3.0).abs() < 1e-12);
        let (a, b) = find_low_magnitude_pair(&mags, 3).unwrap();
        assert!(a != b && a != 5 && b != 5);
        assert!(find_low_magnitude_pair(&mags, 7).is_err());
    }

    #[test]
    fn never_querying_z_gives_zero_difference() {
        let swap = Op::TwoLevel {
            i: 0,
            j: 10,
            u: pauli_x(),
        };
        let alg = QueryAlgorithm::new(8, vec![vec![swap], vec![], vec![]]).unwrap();
        let r = hybrid_check(&alg, 2).unwrap();
        assert_eq!(r.lhs, 0.0);
        assert_eq!(r.rhs_sqrt2, 0.0);
    }

    #[test]
    fn answer_in_zero_meets_sqrt2_bound_with_equality() {
        // one query on |z, 0>: the difference is |z,0> - |z,1>
        let alg = QueryAlgorithm::new(
            4,
            vec![
                vec![Op::TwoLevel {
                    i: 0,
                    j: 2,
                    u: pauli_x(),
                }],
                vec![],
            ],
        )
        .unwrap();
        let r = hybrid_check(&alg, 1).unwrap();
        assert!((r.lhs - 2f64.sqrt()).abs() < 1e-12);
        assert!((r.rhs_sqrt2 - r.lhs).abs() < 1e-12);
    }

    #[test]
    fn phase_oracle_exceeds_sqrt2_but_not_the_general_bound() {
        let alg = grover(64, 4, &set(&[0])).unwrap();
        let r = hybrid_check(&alg, 7).unwrap();
        assert!(r.precondition);
        assert!(r.lhs > r.rhs_sqrt2);
        assert!(r.triangle_holds() && r.general_holds());
        assert!((r.rhs_triangle - r.rhs_general).abs() < 1e-12);
    }

    #[test]
    fn pairwise_record_on_grover() {
        let r = pairwise_check(&grover(64, 4, &set(&[0])).unwrap()).unwrap();
        assert!(r.precondition && r.holds());
        assert!(r.helstrom_success <= r.distinguisher_bound + 1e-12);
    }

    #[test]
    fn simulation_preserves_norm() {
        for seed in 0..20 {
            let alg = random_circuit(16, 4, 32, seed).unwrap();
            let psi = simulate(&alg, &Oracle::new(16, [3, 4]).unwrap()).unwrap();
            assert!((psi.norm() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn dense_round_trip() {
        let alg = grover(8, 2, &set(&[1])).unwrap();
        let dense = from_dense(8, alg.dense_blocks()).unwrap();
        let o = Oracle::single(8, 1).unwrap();
        assert!((simulate(&alg, &o).unwrap() - simulate(&dense, &o).unwrap()).norm() < 1e-12);
    }

    #[test]
    fn caps_and_validation() {
        assert!(QueryAlgorithm::new(512, vec![vec![]]).is_err());
        assert!(QueryAlgorithm::new(8, vec![vec![]; 34]).is_err());
        assert!(
            QueryAlgorithm::new(8, vec![vec![Op::Answer(CMat::from_element(2, 2, ONE))]]).is_err()
        );
        assert!(Oracle::new(4, [4]).is_err());
        assert!(Oracle::empty(1).is_err());
    }
}
