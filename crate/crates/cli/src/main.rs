//! `qge` command-line driver. Exit codes: 0 pass, 1 semantic failure, 2 input error.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qge::equilibrium::{self, PlayerReport};
use qge::game;
use qge::io::{self, DensityFile, Profile};
use qge::query::{self, HybridRecord, Oracle, PairwiseRecord, QueryAlgorithm};
use qge::repro::{self, ReproOptions, ReproReport};
use qge::sampling::{self, ReductionOptions, SampleBudget};
use qge::solve;
use qge::state;
use qge::tolerance;
use qge::Error;
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "qge",
    version,
    about = "Classical and quantum equilibria of finite games"
)]
struct Cli {
    /// Print machine-readable JSON instead of the human report.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a profile, distribution or state for equilibrium at tolerance eps.
    Verify {
        game: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Profile or joint distribution file (classical modes).
        #[arg(long)]
        profile: Option<PathBuf>,
        /// Density-matrix file (quantum modes).
        #[arg(long)]
        state: Option<PathBuf>,
        #[arg(long, default_value_t = tolerance::QUANTUM_EQ)]
        eps: f64,
    },
    /// Nash equilibria by support enumeration, or an optimal correlated equilibrium.
    Solve {
        game: PathBuf,
        #[arg(long, value_enum, default_value = "nash")]
        method: Method,
        /// Objective for the correlated-equilibrium LP.
        #[arg(long, value_enum, default_value = "welfare")]
        objective: Objective,
    },
    /// Lift a classical profile to a density matrix (written as a state file).
    Lift {
        profile: PathBuf,
        #[arg(long, value_enum, default_value = "pure")]
        kind: LiftKind,
        /// Local dimensions, required for joint distributions (e.g. `2,2`).
        #[arg(long, value_delimiter = ',')]
        dims: Option<Vec<usize>>,
        #[arg(long, env = "QGE_SEED", default_value_t = 0)]
        seed: u64,
        /// Write the state here instead of stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Certified best local deviation and quantum regret for each player.
    Qregret {
        game: PathBuf,
        state: PathBuf,
        /// Only this player (0-based).
        #[arg(long)]
        player: Option<usize>,
        /// Also report the best of this many random channels.
        #[arg(long, default_value_t = 0)]
        search: usize,
        #[arg(long, env = "QGE_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Approximate Nash equilibrium from samples of a hidden equilibrium.
    Reduce {
        game: PathBuf,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        /// `constant`, `constant:<C>`, `hoeffding:<delta>` or `fixed:<k>`.
        #[arg(long, default_value = "constant", value_parser = parse_budget)]
        budget: SampleBudget,
        /// Repeat the sampling step this many times and report the success rate.
        #[arg(long)]
        trials: Option<usize>,
        /// Min-max rescale utilities into [0, 1] first.
        #[arg(long)]
        rescale: bool,
        /// Per-trial l1 distances as CSV (`-` for stdout).
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, env = "QGE_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Simulate a query algorithm and check the hybrid-argument inequalities.
    Querysim {
        /// Domain size N.
        #[arg(long, short)]
        n: Option<usize>,
        /// Number of queries.
        #[arg(long, short)]
        k: Option<usize>,
        #[arg(long, value_enum, default_value = "grover")]
        algorithm: Algorithm,
        /// Circuit file (algorithm `file`).
        #[arg(long)]
        circuit: Option<PathBuf>,
        /// Two-level gates per block for random circuits (default 2N).
        #[arg(long)]
        gates: Option<usize>,
        /// Marked indices for the Grover success check.
        #[arg(long, value_delimiter = ',', default_value = "0")]
        marked: Vec<usize>,
        /// One row per inequality as CSV (`-` for stdout).
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, env = "QGE_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Recompute every reference value and compare it with its expected value.
    Repro {
        /// Repetitions of the default-constant sampling step.
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Random lifts checked against the utility ceiling.
        #[arg(long, default_value_t = 10)]
        ceiling_states: usize,
        /// Add this to one utility of the 270/126 game (failure smoke test).
        #[arg(long)]
        tamper: Option<f64>,
        #[arg(long, env = "QGE_SEED", default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Mode {
    ClassicalNash,
    ClassicalCe,
    QuantumCe,
    QuantumNash,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Nash,
    Ce,
}

#[derive(Clone, Copy, ValueEnum)]
enum Objective {
    Welfare,
    Feasible,
}

#[derive(Clone, Copy, ValueEnum)]
enum LiftKind {
    Diagonal,
    Pure,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algorithm {
    Grover,
    Random,
    File,
}

enum Failure {
    Input(String),
    Semantic(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NoConvergence { .. } | Error::NumericalBreakdown => {
                Failure::Semantic(e.to_string())
            }
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = Result<bool, Failure>;

fn parse_budget(s: &str) -> Result<SampleBudget, String> {
    let (kind, arg) = match s.split_once(':') {
        Some((k, a)) => (k, Some(a)),
        None => (s, None),
    };
    let num = |a: Option<&str>| -> Result<f64, String> {
        let a = a.ok_or_else(|| format!("budget `{kind}` needs a value"))?;
        qge::io::parse_real(a).map_err(|e| e.to_string())
    };
    match kind {
        "constant" => Ok(SampleBudget::Constant {
            constant: match arg {
                Some(_) => num(arg)?,
                None => sampling::SAMPLE_CONSTANT,
            },
        }),
        "hoeffding" => Ok(SampleBudget::Hoeffding { delta: num(arg)? }),
        "fixed" => arg
            .ok_or("budget `fixed` needs a value")?
            .parse()
            .map(SampleBudget::Fixed)
            .map_err(|e| format!("{e}")),
        other => Err(format!("unknown budget `{other}`")),
    }
}

fn emit_json<T: Serialize>(value: &T) {
    println!("{}", io::to_json(value));
}

fn write_output(path: &Path, text: &str) -> Result<(), Failure> {
    if path == Path::new("-") {
        print!("{text}");
        std::io::stdout().flush().ok();
        Ok(())
    } else {
        std::fs::write(path, text)
            .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))
    }
}

fn verdict_word(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

#[derive(Serialize)]
struct ClassicalPlayer {
    player: usize,
    regret: f64,
}

#[derive(Serialize)]
struct VerifyReport {
    mode: Mode,
    epsilon: f64,
    classical: Option<Vec<ClassicalPlayer>>,
    quantum: Option<Vec<PlayerReport>>,
    product_distance: Option<f64>,
    verdict: bool,
}

fn verify(
    json: bool,
    game_path: &Path,
    mode: Mode,
    profile: Option<&Path>,
    state_path: Option<&Path>,
    eps: f64,
) -> Outcome {
    let game = io::load_game(game_path)?;
    let report = match mode {
        Mode::ClassicalNash | Mode::ClassicalCe => {
            let path =
                profile.ok_or_else(|| Failure::Input("classical modes need --profile".into()))?;
            let profile = io::load_profile(path)?;
            let regrets = match (mode, &profile) {
                (Mode::ClassicalNash, Profile::Mixed(p)) => (0..game.num_players())
                    .map(|i| game::nash_regret(&game, p, i, tolerance::SUPPORT))
                    .collect::<qge::Result<Vec<_>>>()?,
                (Mode::ClassicalNash, Profile::Joint(_)) => {
                    return Err(Failure::Input(
                        "classical-nash needs a product profile, not a joint distribution".into(),
                    ))
                }
                _ => {
                    let joint = profile.joint();
                    (0..game.num_players())
                        .map(|i| game::correlated_regret(&game, &joint, i))
                        .collect::<qge::Result<Vec<_>>>()?
                }
            };
            let verdict = regrets.iter().all(|&r| r <= eps);
            VerifyReport {
                mode,
                epsilon: eps,
                classical: Some(
                    regrets
                        .into_iter()
                        .enumerate()
                        .map(|(player, regret)| ClassicalPlayer { player, regret })
                        .collect(),
                ),
                quantum: None,
                product_distance: None,
                verdict,
            }
        }
        Mode::QuantumCe | Mode::QuantumNash => {
            let path =
                state_path.ok_or_else(|| Failure::Input("quantum modes need --state".into()))?;
            let rho = io::load_state(path)?;
            let v = equilibrium::quantum_verdict(&game, &rho, eps)?;
            let verdict = match mode {
                Mode::QuantumNash => v.nash_equilibrium,
                _ => v.correlated_equilibrium,
            };
            VerifyReport {
                mode,
                epsilon: eps,
                classical: None,
                product_distance: matches!(mode, Mode::QuantumNash).then_some(v.product_distance),
                quantum: Some(v.players),
                verdict,
            }
        }
    };
    if json {
        emit_json(&report);
    } else {
        println!(
            "mode: {}, eps = {:e}",
            report
                .mode
                .to_possible_value()
                .expect("no skipped variants")
                .get_name(),
            report.epsilon
        );
        for p in report.classical.iter().flatten() {
            println!("  player {}: regret {:.12}", p.player, p.regret);
        }
        for p in report.quantum.iter().flatten() {
            println!(
                "  player {}: mu = {:.12}, best deviation <= {:.12} (gap {:.1e}), regret {:.12}",
                p.player, p.mu, p.best_deviation, p.gap, p.regret
            );
        }
        if let Some(d) = report.product_distance {
            println!("  distance to product of marginals: {d:.3e}");
        }
        println!("verdict: {}", verdict_word(report.verdict));
    }
    Ok(report.verdict)
}

fn solve_cmd(json: bool, game_path: &Path, method: Method, objective: Objective) -> Outcome {
    let game = io::load_game(game_path)?;
    match method {
        Method::Nash => {
            let set = solve::support_enumeration(&game)?;
            if json {
                emit_json(&set);
            } else {
                println!("{} equilibria", set.len());
                for (n, e) in set.iter().enumerate() {
                    let fmt = |p: &[f64]| {
                        p.iter()
                            .map(|x| format!("{x:.6}"))
                            .collect::<Vec<_>>()
                            .join(", ")
                    };
                    println!(
                        "  #{n}: p1 = [{}], p2 = [{}], regret {:.1e}",
                        fmt(e.profile.player(0)),
                        fmt(e.profile.player(1)),
                        e.regret
                    );
                }
            }
            Ok(!set.is_empty())
        }
        Method::Ce => {
            let c = match objective {
                Objective::Welfare => solve::welfare(&game),
                Objective::Feasible => vec![0.0; game.num_profiles()],
            };
            let p = solve::correlated_eq_lp(&game, &c)?;
            let value: f64 = p.probs().iter().zip(&c).map(|(a, b)| a * b).sum();
            let regret = game::max_correlated_regret(&game, &p)?;
            #[derive(Serialize)]
            struct CeReport<'a> {
                distribution: &'a [f64],
                objective: f64,
                regret: f64,
            }
            if json {
                emit_json(&CeReport {
                    distribution: p.probs(),
                    objective: value,
                    regret,
                });
            } else {
                for (j, x) in p.probs().iter().enumerate() {
                    println!("  {:?}: {x:.9}", game.decode(j));
                }
                println!("objective {value:.9}, correlated regret {regret:.1e}");
            }
            Ok(true)
        }
    }
}

fn lift(
    profile_path: &Path,
    kind: LiftKind,
    dims: Option<Vec<usize>>,
    seed: u64,
    output: Option<&Path>,
) -> Outcome {
    let profile = io::load_profile(profile_path)?;
    let dims = match (&profile, dims) {
        (_, Some(d)) => d,
        (Profile::Mixed(p), None) => p.counts(),
        (Profile::Joint(_), None) => {
            return Err(Failure::Input("joint distributions need --dims".into()))
        }
    };
    let joint = profile.joint();
    let rho = match kind {
        LiftKind::Diagonal => state::lift_diagonal(&joint, &dims)?,
        LiftKind::Pure => state::lift_pure(&joint, &dims)?.density(),
        LiftKind::Random => state::random_lift(&joint, &dims, seed)?,
    };
    let text = io::to_json(&DensityFile::from_state(&rho)) + "\n";
    match output {
        Some(path) => write_output(path, &text)?,
        None => print!("{text}"),
    }
    Ok(true)
}

#[derive(Serialize)]
struct QregretRow {
    #[serde(flatten)]
    report: PlayerReport,
    channel_search: Option<f64>,
}

fn qregret(
    json: bool,
    game_path: &Path,
    state_path: &Path,
    player: Option<usize>,
    search: usize,
    seed: u64,
) -> Outcome {
    let game = io::load_game(game_path)?;
    let rho = io::load_state(state_path)?;
    let players: Vec<usize> = match player {
        Some(p) => {
            game.check_player(p)?;
            vec![p]
        }
        None => (0..game.num_players()).collect(),
    };
    let mut rows = Vec::new();
    for i in players {
        let report = equilibrium::player_report(&game, &rho, i, tolerance::QUANTUM_EQ)?;
        let channel_search = if search > 0 {
            Some(equilibrium::random_channel_search(
                &game, &rho, i, search, seed,
            )?)
        } else {
            None
        };
        rows.push(QregretRow {
            report,
            channel_search,
        });
    }
    if json {
        emit_json(&rows);
    } else {
        for r in &rows {
            let p = &r.report;
            println!(
                "player {}: mu = {:.12}, best deviation in [{:.12}, {:.12}], regret {:.12}",
                p.player,
                p.mu,
                p.best_deviation - p.gap,
                p.best_deviation,
                p.regret
            );
            if let Some(s) = r.channel_search {
                println!("  best of {search} random channels: {s:.12}");
            }
        }
    }
    Ok(true)
}

#[allow(clippy::too_many_arguments)]
fn reduce(
    json: bool,
    game_path: &Path,
    eps: f64,
    budget: SampleBudget,
    trials: Option<usize>,
    rescale: bool,
    csv: Option<&Path>,
    seed: u64,
) -> Outcome {
    let game = io::load_game(game_path)?;
    match trials {
        None => {
            let report =
                sampling::reduce_with(&game, eps, seed, &ReductionOptions { budget, rescale })?;
            if let Some(path) = csv {
                let d = report.l1_distances;
                write_output(
                    path,
                    &format!(
                        "trial,l1_player1,l1_player2,success\n0,{},{},{}\n",
                        d[0], d[1], report.success
                    ),
                )?;
            }
            if json {
                emit_json(&report);
            } else {
                println!(
                    "m = {}, eps = {}, k = {} samples, seed {}",
                    report.m, report.epsilon, report.k, report.seed
                );
                println!(
                    "l1 distances: {:.6}, {:.6}; Nash regret {:.6} (bound {:.6})",
                    report.l1_distances[0],
                    report.l1_distances[1],
                    report.regret,
                    report.regret_bound
                );
                println!("verdict: {}", verdict_word(report.success));
            }
            Ok(report.success)
        }
        Some(t) => {
            let game = if rescale {
                game.rescaled_to_unit().0
            } else {
                game
            };
            let set = solve::support_enumeration(&game)?;
            let hidden = set
                .first()
                .ok_or_else(|| Failure::Semantic("no equilibrium found".into()))?
                .profile
                .clone();
            let stats = sampling::sampling_trials(&game, &hidden, eps, budget, t, seed)?;
            if let Some(path) = csv {
                write_output(path, &stats.to_csv())?;
            }
            if json {
                emit_json(&stats);
            } else {
                println!(
                    "k = {} samples, {}/{} trials within eps = {} (need {}), max regret {:.6}",
                    stats.k,
                    stats.successes,
                    stats.trials,
                    stats.epsilon,
                    stats.required,
                    stats.max_regret
                );
                println!("verdict: {}", verdict_word(stats.passed()));
            }
            Ok(stats.passed())
        }
    }
}

#[derive(Serialize)]
struct Inequality {
    name: String,
    lhs: f64,
    rhs: f64,
    holds: bool,
}

impl Inequality {
    fn at_most(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Inequality {
            name: name.into(),
            lhs,
            rhs,
            holds: lhs <= rhs + tolerance::ALGEBRAIC,
        }
    }

    fn equal(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Inequality {
            name: name.into(),
            lhs,
            rhs,
            holds: (lhs - rhs).abs() <= tolerance::ALGEBRAIC,
        }
    }
}

#[derive(Serialize)]
struct QuerysimReport {
    n: usize,
    k: usize,
    algorithm: &'static str,
    seed: u64,
    magnitudes: Vec<f64>,
    hybrid: Vec<HybridRecord>,
    pairwise: Option<PairwiseRecord>,
    inequalities: Vec<Inequality>,
    pass: bool,
}

fn hybrid_rows(rec: &HybridRecord, out: &mut Vec<Inequality>) {
    let z = rec.z;
    out.push(Inequality::at_most(
        format!("hybrid_sqrt2[z={z}]"),
        rec.lhs,
        rec.rhs_sqrt2,
    ));
    out.push(Inequality::at_most(
        format!("hybrid_triangle[z={z}]"),
        rec.lhs,
        rec.rhs_triangle,
    ));
    out.push(Inequality::at_most(
        format!("hybrid_general[z={z}]"),
        rec.lhs,
        rec.rhs_general,
    ));
    if rec.precondition {
        out.push(Inequality::at_most(
            format!("hybrid_single[z={z}]"),
            rec.lhs,
            rec.rhs_single,
        ));
    }
}

#[allow(clippy::too_many_arguments)]
fn querysim(
    json: bool,
    n: Option<usize>,
    k: Option<usize>,
    algorithm: Algorithm,
    circuit: Option<&Path>,
    gates: Option<usize>,
    marked: &[usize],
    csv: Option<&Path>,
    seed: u64,
) -> Outcome {
    let need = |v: Option<usize>, flag: &str| {
        v.ok_or_else(|| Failure::Input(format!("--{flag} is required for this algorithm")))
    };
    let (alg, name): (QueryAlgorithm, &'static str) = match algorithm {
        Algorithm::File => {
            let path =
                circuit.ok_or_else(|| Failure::Input("algorithm `file` needs --circuit".into()))?;
            (io::load_circuit(path)?, "file")
        }
        Algorithm::Grover | Algorithm::Random => {
            let (n, k) = (need(n, "n")?, need(k, "k")?);
            if n > query::MAX_DOMAIN || k > query::MAX_QUERIES {
                return Err(Failure::Input(format!(
                    "caps exceeded: need N <= {} and k <= {}",
                    query::MAX_DOMAIN,
                    query::MAX_QUERIES
                )));
            }
            if n < 2 {
                return Err(Failure::Input("need N >= 2".into()));
            }
            match algorithm {
                Algorithm::Grover => {
                    let set = marked.iter().copied().collect();
                    (query::grover(n, k, &set)?, "grover")
                }
                _ => (
                    query::random_circuit(n, k, gates.unwrap_or(2 * n), seed)?,
                    "random",
                ),
            }
        }
    };
    let (n, k) = (alg.n(), alg.queries());
    if k + 2 > n {
        return Err(Failure::Input(format!(
            "need k <= N - 2 for a low-magnitude pair, got N={n}, k={k}"
        )));
    }
    let magnitudes = query::query_magnitudes(&alg)?;
    let mut rows = vec![Inequality::equal(
        "magnitude_sum",
        magnitudes.iter().sum(),
        k as f64,
    )];
    let mut hybrid = Vec::new();
    let pairwise = match query::find_low_magnitude_pair(&magnitudes, k) {
        Ok(_) => {
            let rec = query::pairwise_check(&alg)?;
            let limit = (k + 1) as f64 / n as f64;
            rows.push(Inequality::at_most(
                "low_magnitude_pair",
                magnitudes[rec.z1].max(magnitudes[rec.z2]),
                limit,
            ));
            for z in [rec.z1, rec.z2] {
                let h = query::hybrid_check(&alg, z)?;
                hybrid_rows(&h, &mut rows);
                hybrid.push(h);
            }
            if rec.precondition {
                rows.push(Inequality::at_most("pairwise", rec.distance, rec.bound));
            }
            rows.push(Inequality::at_most(
                "pairwise_triangle",
                rec.distance,
                rec.triangle_bound,
            ));
            rows.push(Inequality::at_most(
                "distinguisher",
                rec.helstrom_success,
                rec.distinguisher_bound,
            ));
            Some(rec)
        }
        Err(_) => {
            rows.push(Inequality {
                name: "low_magnitude_pair".into(),
                lhs: f64::NAN,
                rhs: (k + 1) as f64 / n as f64,
                holds: false,
            });
            None
        }
    };
    if matches!(algorithm, Algorithm::Grover) {
        let oracle = Oracle::new(n, marked.iter().copied())?;
        let sim = query::success_probability(&alg, &oracle)?;
        let closed = query::grover_success_closed_form(n, k, oracle.marked().len());
        rows.push(Inequality::equal("grover_closed_form", sim, closed));
    }
    let pass = rows.iter().all(|r| r.holds);
    if let Some(path) = csv {
        let mut text = String::from("inequality,lhs,rhs,holds\n");
        for r in &rows {
            text.push_str(&format!("{},{},{},{}\n", r.name, r.lhs, r.rhs, r.holds));
        }
        write_output(path, &text)?;
    }
    let report = QuerysimReport {
        n,
        k,
        algorithm: name,
        seed,
        magnitudes,
        hybrid,
        pairwise,
        inequalities: rows,
        pass,
    };
    if json {
        emit_json(&report);
    } else {
        println!("{} on N = {n} with k = {k} queries", report.algorithm);
        for r in &report.inequalities {
            println!(
                "  {:<28} {:>14.9} <= {:<14.9} {}",
                r.name,
                r.lhs,
                r.rhs,
                verdict_word(r.holds)
            );
        }
        println!("verdict: {}", verdict_word(pass));
    }
    Ok(pass)
}

fn print_repro(report: &ReproReport) {
    for r in &report.records {
        println!(
            "{} {:<44} expected {:>14.9} computed {:>14.9} |err| {:.1e}",
            verdict_word(r.pass),
            r.claim_id,
            r.expected,
            r.computed,
            r.abs_error
        );
    }
    let failed: Vec<_> = report.failures().map(|r| r.claim_id.as_str()).collect();
    if failed.is_empty() {
        println!("all {} claims pass", report.records.len());
    } else {
        println!(
            "{} of {} claims FAIL: {}",
            failed.len(),
            report.records.len(),
            failed.join(", ")
        );
    }
}

fn repro_cmd(json: bool, options: ReproOptions) -> Outcome {
    let report = repro::run(&options)?;
    if json {
        emit_json(&report);
    } else {
        print_repro(&report);
    }
    Ok(report.passed)
}

fn run(cli: Cli) -> Outcome {
    let json = cli.json;
    match cli.command {
        Command::Verify {
            game,
            mode,
            profile,
            state,
            eps,
        } => verify(json, &game, mode, profile.as_deref(), state.as_deref(), eps),
        Command::Solve {
            game,
            method,
            objective,
        } => solve_cmd(json, &game, method, objective),
        Command::Lift {
            profile,
            kind,
            dims,
            seed,
            output,
        } => lift(&profile, kind, dims, seed, output.as_deref()),
        Command::Qregret {
            game,
            state,
            player,
            search,
            seed,
        } => qregret(json, &game, &state, player, search, seed),
        Command::Reduce {
            game,
            eps,
            budget,
            trials,
            rescale,
            csv,
            seed,
        } => reduce(
            json,
            &game,
            eps,
            budget,
            trials,
            rescale,
            csv.as_deref(),
            seed,
        ),
        Command::Querysim {
            n,
            k,
            algorithm,
            circuit,
            gates,
            marked,
            csv,
            seed,
        } => querysim(
            json,
            n,
            k,
            algorithm,
            circuit.as_deref(),
            gates,
            &marked,
            csv.as_deref(),
            seed,
        ),
        Command::Repro {
            trials,
            ceiling_states,
            tamper,
            seed,
        } => repro_cmd(
            json,
            ReproOptions {
                seed,
                sampling_trials: trials,
                ceiling_states,
                tamper,
            },
        ),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Semantic(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
