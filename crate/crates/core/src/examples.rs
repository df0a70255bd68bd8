//! Fixed games, states and local unitaries used by the reproduction report, the CLI
//! and the tests.

use crate::error::Result;
use crate::game::{Game, JointDistribution};
use crate::linalg::{from_real_rows, CMat};
use crate::state::{self, DensityMatrix, KrausChannel};

/// Common-payoff game `[[270, 126], [0, 270]]`.
pub fn skewed_coordination() -> Game {
    Game::common_payoff(&[vec![270.0, 126.0], vec![0.0, 270.0]]).expect("static game")
}

/// `[[1/3, 1/6], [1/6, 1/3]]`, a correlated equilibrium of [`skewed_coordination`].
pub fn skewed_distribution() -> JointDistribution {
    JointDistribution::new(vec![1.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 3.0])
        .expect("static distribution")
}

/// Pure lift of [`skewed_distribution`].
pub fn skewed_state() -> DensityMatrix {
    state::lift_pure(&skewed_distribution(), &[2, 2])
        .expect("static state")
        .density()
}

/// `[[sqrt(2/3), sqrt(1/3)], [sqrt(1/3), -sqrt(2/3)]]`.
pub fn skewed_rotation() -> CMat {
    let (a, b) = ((2.0f64 / 3.0).sqrt(), (1.0f64 / 3.0).sqrt());
    from_real_rows(&[&[a, b], &[b, -a]])
}

/// Common-payoff game `[[2, 1], [1, 2]]`.
pub fn coordination() -> Game {
    Game::common_payoff(&[vec![2.0, 1.0], vec![1.0, 2.0]]).expect("static game")
}

fn cos_sin(cos2: f64) -> (f64, f64) {
    (cos2.sqrt(), (1.0 - cos2).sqrt())
}

/// Reflection `[[c, s], [s, -c]]` with `c^2 = cos2`.
pub fn reflection(cos2: f64) -> CMat {
    let (c, s) = cos_sin(cos2);
    from_real_rows(&[&[c, s], &[s, -c]])
}

pub fn hadamard() -> CMat {
    reflection(0.5)
}

/// `1/2 |a><a| (x) |0><0| + 1/2 |b><b| (x) |1><1|` with `a = (c, s)`, `b = (s, -c)`.
pub fn mixed_product_state(cos2: f64) -> Result<DensityMatrix> {
    let (c, s) = cos_sin(cos2);
    let cs = c * s / 2.0;
    DensityMatrix::new(
        vec![2, 2],
        from_real_rows(&[
            &[c * c / 2.0, 0.0, cs, 0.0],
            &[0.0, s * s / 2.0, 0.0, -cs],
            &[cs, 0.0, s * s / 2.0, 0.0],
            &[0.0, -cs, 0.0, c * c / 2.0],
        ]),
    )
}

/// `(c|00> + s|01> + s|10> - c|11>) / sqrt(2)`.
pub fn entangled_state(cos2: f64) -> Result<DensityMatrix> {
    let (c, s) = cos_sin(cos2);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    Ok(state::pure_from_real(vec![2, 2], &[c * r, s * r, s * r, -c * r])?.density())
}

/// `(|00> + |01> + |10> - |11>) / 2`, whose induced distribution is uniform.
pub fn signed_uniform_state() -> Result<DensityMatrix> {
    Ok(state::pure_from_real(vec![2, 2], &[0.5, 0.5, 0.5, -0.5])?.density())
}

/// `[[1/2, 0], [0, 1/2]]`.
pub fn diagonal_half() -> JointDistribution {
    JointDistribution::new(vec![0.5, 0.0, 0.0, 0.5]).expect("static distribution")
}

/// Apply a unitary on player 0.
pub fn rotate_first(rho: &DensityMatrix, u: CMat) -> Result<DensityMatrix> {
    state::apply_channel(rho, &KrausChannel::unitary(0, u)?)
}
