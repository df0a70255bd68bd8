//! Python bindings: games, density matrices, equilibrium checks, the sampling
//! reduction and the query simulator.

use std::collections::BTreeSet;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use qge::equilibrium;
use qge::game::{self, JointDistribution, MixedProfile};
use qge::io::{self, DensityFile, GameFile};
use qge::query;
use qge::repro::{self, ReproOptions};
use qge::sampling::{self, ReductionOptions, SampleBudget};
use qge::solve;
use qge::state;

fn to_py(e: qge::Error) -> PyErr {
    match e {
        qge::Error::NoConvergence { .. } | qge::Error::NumericalBreakdown => {
            PyRuntimeError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

trait IntoPy<T> {
    fn py_err(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for qge::Result<T> {
    fn py_err(self) -> PyResult<T> {
        self.map_err(to_py)
    }
}

#[pyclass(name = "Game", module = "qge_py", frozen)]
struct PyGame {
    inner: game::Game,
}

#[pymethods]
impl PyGame {
    /// `utilities[i]` is player i's flat row-major payoff table (player 0 slowest).
    #[new]
    #[pyo3(signature = (strategy_counts, utilities, positively_normalized = false))]
    fn new(
        strategy_counts: Vec<usize>,
        utilities: Vec<Vec<f64>>,
        positively_normalized: bool,
    ) -> PyResult<Self> {
        let g = game::Game::new(strategy_counts, utilities).py_err()?;
        let inner = if positively_normalized {
            g.with_positive_normalization().py_err()?
        } else {
            g
        };
        Ok(Self { inner })
    }

    #[staticmethod]
    fn bimatrix(a: Vec<Vec<f64>>, b: Vec<Vec<f64>>) -> PyResult<Self> {
        Ok(Self {
            inner: game::Game::bimatrix(&a, &b).py_err()?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: io::parse_game(text).py_err()?,
        })
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        Ok(Self {
            inner: io::load_game(path).py_err()?,
        })
    }

    fn to_json(&self) -> String {
        io::to_json(&GameFile::from_game(&self.inner))
    }

    #[getter]
    fn num_players(&self) -> usize {
        self.inner.num_players()
    }

    #[getter]
    fn strategy_counts(&self) -> Vec<usize> {
        self.inner.strategy_counts().to_vec()
    }

    fn utility(&self, player: usize, strategies: Vec<usize>) -> PyResult<f64> {
        self.inner.check_player(player).py_err()?;
        if strategies.len() != self.inner.num_players()
            || strategies
                .iter()
                .zip(self.inner.strategy_counts())
                .any(|(s, m)| s >= m)
        {
            return Err(PyValueError::new_err("strategy tuple out of range"));
        }
        Ok(self
            .inner
            .utility(player, self.inner.joint_index(&strategies)))
    }

    /// Nash equilibria of a two-player game as `(p1, p2)` pairs, pure ones first.
    fn nash_equilibria(&self) -> PyResult<Vec<(Vec<f64>, Vec<f64>)>> {
        let set = solve::support_enumeration(&self.inner).py_err()?;
        Ok(set
            .iter()
            .map(|e| (e.profile.player(0).to_vec(), e.profile.player(1).to_vec()))
            .collect())
    }

    /// Welfare-maximising correlated equilibrium as a flat joint distribution.
    fn correlated_equilibrium(&self) -> PyResult<Vec<f64>> {
        let p = solve::correlated_eq_lp(&self.inner, &solve::welfare(&self.inner)).py_err()?;
        Ok(p.probs().to_vec())
    }

    fn nash_regret(&self, profile: Vec<Vec<f64>>) -> PyResult<f64> {
        let p = MixedProfile::new(profile).py_err()?;
        game::max_nash_regret(&self.inner, &p).py_err()
    }

    fn correlated_regret(&self, distribution: Vec<f64>) -> PyResult<f64> {
        let p = JointDistribution::new(distribution).py_err()?;
        game::max_correlated_regret(&self.inner, &p).py_err()
    }

    fn __repr__(&self) -> String {
        format!("Game(strategy_counts={:?})", self.inner.strategy_counts())
    }
}

#[pyclass(name = "DensityMatrix", module = "qge_py", frozen)]
struct PyDensity {
    inner: state::DensityMatrix,
}

#[pymethods]
impl PyDensity {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: io::parse_state(text).py_err()?,
        })
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        Ok(Self {
            inner: io::load_state(path).py_err()?,
        })
    }

    /// Lift a joint distribution: `kind` is `diagonal`, `pure` or `random`.
    #[staticmethod]
    #[pyo3(signature = (distribution, dims, kind = "pure", seed = 0))]
    fn lift(distribution: Vec<f64>, dims: Vec<usize>, kind: &str, seed: u64) -> PyResult<Self> {
        let p = JointDistribution::new(distribution).py_err()?;
        let inner = match kind {
            "diagonal" => state::lift_diagonal(&p, &dims).py_err()?,
            "pure" => state::lift_pure(&p, &dims).py_err()?.density(),
            "random" => state::random_lift(&p, &dims, seed).py_err()?,
            other => return Err(PyValueError::new_err(format!("unknown lift `{other}`"))),
        };
        Ok(Self { inner })
    }

    fn to_json(&self) -> String {
        io::to_json(&DensityFile::from_state(&self.inner))
    }

    #[getter]
    fn dims(&self) -> Vec<usize> {
        self.inner.dims().to_vec()
    }

    /// Induced distribution over joint pure strategies.
    fn diagonal(&self) -> Vec<f64> {
        self.inner.diagonal()
    }

    fn product_distance(&self) -> f64 {
        state::product_distance(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("DensityMatrix(dims={:?})", self.inner.dims())
    }
}

#[pyfunction]
fn quantum_utility(game: &PyGame, state: &PyDensity, player: usize) -> PyResult<f64> {
    equilibrium::quantum_utility(&game.inner, &state.inner, player).py_err()
}

/// Certified best deviation: `{"primal", "dual", "gap", "mu", "regret"}`.
#[pyfunction]
fn best_quantum_deviation<'py>(
    py: Python<'py>,
    game: &PyGame,
    state: &PyDensity,
    player: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let cert = equilibrium::best_quantum_deviation(&game.inner, &state.inner, player).py_err()?;
    let mu = equilibrium::quantum_utility(&game.inner, &state.inner, player).py_err()?;
    let d = PyDict::new(py);
    d.set_item("primal", cert.primal_value)?;
    d.set_item("dual", cert.dual_value)?;
    d.set_item("gap", cert.gap())?;
    d.set_item("mu", mu)?;
    d.set_item("regret", (cert.dual_value - mu).max(0.0))?;
    Ok(d)
}

#[pyfunction]
fn quantum_regret(game: &PyGame, state: &PyDensity, player: usize) -> PyResult<f64> {
    equilibrium::quantum_regret(&game.inner, &state.inner, player).py_err()
}

/// `(is_quantum_correlated_eq, is_quantum_nash)` at tolerance `eps`.
#[pyfunction]
#[pyo3(signature = (game, state, eps = 1e-6))]
fn quantum_verdict(game: &PyGame, state: &PyDensity, eps: f64) -> PyResult<(bool, bool)> {
    let v = equilibrium::quantum_verdict(&game.inner, &state.inner, eps).py_err()?;
    Ok((v.correlated_equilibrium, v.nash_equilibrium))
}

/// One run of the sampling reduction. `samples=None` uses the default constant.
#[pyfunction]
#[pyo3(signature = (game, eps, seed = 0, samples = None, rescale = false))]
fn reduce<'py>(
    py: Python<'py>,
    game: &PyGame,
    eps: f64,
    seed: u64,
    samples: Option<u64>,
    rescale: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let budget = samples.map_or_else(SampleBudget::default, SampleBudget::Fixed);
    let rep = sampling::reduce_with(
        &game.inner,
        eps,
        seed,
        &ReductionOptions { budget, rescale },
    )
    .py_err()?;
    let d = PyDict::new(py);
    d.set_item("k", rep.k)?;
    d.set_item("q", rep.q.strategies().to_vec())?;
    d.set_item("hidden", rep.hidden.strategies().to_vec())?;
    d.set_item("l1_distances", rep.l1_distances.to_vec())?;
    d.set_item("regret", rep.regret)?;
    d.set_item("success", rep.success)?;
    Ok(d)
}

#[pyfunction]
fn grover_success(n: usize, k: usize, marked: Vec<usize>) -> PyResult<(f64, f64)> {
    let set: BTreeSet<usize> = marked.into_iter().collect();
    let alg = query::grover(n, k, &set).py_err()?;
    let oracle = query::Oracle::new(n, set.iter().copied()).py_err()?;
    let sim = query::success_probability(&alg, &oracle).py_err()?;
    Ok((sim, query::grover_success_closed_form(n, k, set.len())))
}

/// Pairwise distinguishability of a seeded random circuit:
/// `{"z1", "z2", "distance", "bound", "precondition"}`.
#[pyfunction]
#[pyo3(signature = (n, k, seed = 0))]
fn random_circuit_check<'py>(
    py: Python<'py>,
    n: usize,
    k: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let alg = query::random_circuit(n, k, 2 * n, seed).py_err()?;
    let rec = query::pairwise_check(&alg).py_err()?;
    let d = PyDict::new(py);
    d.set_item("z1", rec.z1)?;
    d.set_item("z2", rec.z2)?;
    d.set_item("distance", rec.distance)?;
    d.set_item("bound", rec.bound)?;
    d.set_item("precondition", rec.precondition)?;
    Ok(d)
}

/// Reference-value report as `(passed, json)`.
#[pyfunction]
#[pyo3(signature = (sampling_trials = 0, ceiling_states = 1, tamper = None, seed = 0))]
fn run_repro(
    sampling_trials: usize,
    ceiling_states: usize,
    tamper: Option<f64>,
    seed: u64,
) -> PyResult<(bool, String)> {
    let report = repro::run(&ReproOptions {
        seed,
        sampling_trials,
        ceiling_states,
        tamper,
    })
    .py_err()?;
    Ok((report.passed, io::to_json(&report)))
}

#[pymodule]
fn qge_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGame>()?;
    m.add_class::<PyDensity>()?;
    m.add_function(wrap_pyfunction!(quantum_utility, m)?)?;
    m.add_function(wrap_pyfunction!(best_quantum_deviation, m)?)?;
    m.add_function(wrap_pyfunction!(quantum_regret, m)?)?;
    m.add_function(wrap_pyfunction!(quantum_verdict, m)?)?;
    m.add_function(wrap_pyfunction!(reduce, m)?)?;
    m.add_function(wrap_pyfunction!(grover_success, m)?)?;
    m.add_function(wrap_pyfunction!(random_circuit_check, m)?)?;
    m.add_function(wrap_pyfunction!(run_repro, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bindings_round_trip_through_the_interpreter() {
        Python::initialize();
        Python::attach(|py| {
            let g =
                PyGame::new(vec![2, 2], vec![vec![270.0, 126.0, 0.0, 270.0]; 2], false).unwrap();
            let s = PyDensity::lift(
                vec![1.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 3.0],
                vec![2, 2],
                "pure",
                0,
            )
            .unwrap();
            assert!((quantum_utility(&g, &s, 0).unwrap() - 201.0).abs() < 1e-9);
            let d = best_quantum_deviation(py, &g, &s, 0).unwrap();
            let dual: f64 = d.get_item("dual").unwrap().unwrap().extract().unwrap();
            assert!(dual >= 206.0 - 1e-6);
            assert_eq!(quantum_verdict(&g, &s, 1e-6).unwrap(), (false, false));
        });
    }

    #[test]
    fn library_errors_become_python_exceptions() {
        Python::initialize();
        Python::attach(|py| {
            let err = PyGame::new(vec![2, 2], vec![vec![0.0; 3]], false)
                .err()
                .unwrap();
            assert!(err.is_instance_of::<PyValueError>(py));
            let err = to_py(qge::Error::NumericalBreakdown);
            assert!(err.is_instance_of::<PyRuntimeError>(py));
            assert!(PyDensity::lift(vec![1.0], vec![1], "sideways", 0).is_err());
        });
    }

    #[test]
    fn grover_binding_matches_closed_form() {
        let (sim, closed) = grover_success(64, 3, vec![0, 9, 17, 40]).unwrap();
        assert!((sim - closed).abs() < 1e-9 && sim > 0.9);
    }
}
