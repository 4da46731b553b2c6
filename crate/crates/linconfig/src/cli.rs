//! Command-line surface.
//!
//! Exit codes are part of the contract: 0 success, 2 parse/usage error,
//! 3 precondition failure, 4 degenerate (fully plain) input, 5 verification
//! failure. Reports print as deterministic JSON on stdout; a short human
//! summary goes to stderr.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::error::{HypergraphError, PipelineError};
use crate::group::{FiniteAbelianGroup, GroupElement};
use crate::hom::{kernel_parametrization, kernel_projection_subgroup, matrix_action_hom};
use crate::hypergraph::{
    build_cayley, copy_count, solution_count, symmetrize_removal, CopyCountMode, Rat,
};
use crate::io::{
    GroupJson, MatrixJson, RemovalJson, RepresentationJson, SetsJson, TrailJson,
};
use crate::matrix::IntMatrix;
use crate::report::RationalJson;
use crate::representation::{
    default_battery, represent, verify_representation, Representation,
};
use crate::system::analyze;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_DEGENERATE: i32 = 4;
pub const EXIT_VERIFY: i32 = 5;

const DEFAULT_BRUTE_BUDGET: u64 = 10_000_000;
const DEFAULT_COPY_BUDGET: u64 = 100_000_000;

#[derive(Parser)]
#[command(
    name = "linconfig",
    about = "Exact linear-configuration machinery over finite abelian groups",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Report rank, determinantal divisor, invariance, plainness and form tags
    Analyze {
        matrix: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build a hypergraph representation and verify it on a group battery
    Represent {
        matrix: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Battery spec such as "5;2x4;2x3x3" (default: the built-in battery)
        #[arg(long)]
        battery: Option<String>,
    },
    /// Verify a representation file against a matrix on one group
    Verify {
        rep: PathBuf,
        matrix: PathBuf,
        group: PathBuf,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
    },
    /// Count kernel solutions with coordinates confined to generator sets
    Count {
        matrix: PathBuf,
        group: PathBuf,
        sets: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Homomorphism density of the template in the Cayley hypergraph
    Hd {
        rep: PathBuf,
        matrix: PathBuf,
        group: PathBuf,
        sets: PathBuf,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Symmetrize removal sets into kernel-invariant ones
    Symmetrize {
        rep: PathBuf,
        matrix: PathBuf,
        group: PathBuf,
        sets: PathBuf,
        removal: PathBuf,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Randomized experiment suites (deterministic under --seed)
    #[command(subcommand)]
    Experiment(ExperimentCmd),
}

#[derive(Subcommand)]
pub enum ExperimentCmd {
    /// Exact AP densities of random sets of prescribed density
    Ap {
        /// Group spec such as "64" or "2x4"
        #[arg(long)]
        group: String,
        /// Set density as a fraction, e.g. "1/2"
        #[arg(long, default_value = "1/2")]
        density: String,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Minimum observed AP3 solution density over cyclic groups Z_2..Z_n
    SzemerediScan {
        #[arg(long, default_value_t = 32)]
        max_n: u64,
        #[arg(long, default_value = "1/2")]
        alpha: String,
        #[arg(long, default_value_t = 5)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Kernel-integral bound on random bounded functions
    Basic2 {
        #[arg(long)]
        group: String,
        /// Matrix file (default: the Schur system)
        #[arg(long)]
        matrix: Option<PathBuf>,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

struct Failure {
    code: i32,
    message: String,
    body: Option<serde_json::Value>,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Failure {
        Failure {
            code,
            message: message.into(),
            body: None,
        }
    }
    fn with_body(code: i32, message: impl Into<String>, body: serde_json::Value) -> Failure {
        Failure {
            code,
            message: message.into(),
            body: Some(body),
        }
    }
}

type CmdResult = Result<serde_json::Value, Failure>;

pub fn run(cli: Cli) -> i32 {
    let result = match cli.command {
        Command::Analyze { matrix, output } => cmd_analyze(&matrix, output.as_deref()),
        Command::Represent {
            matrix,
            output,
            battery,
        } => cmd_represent(&matrix, output.as_deref(), battery.as_deref()),
        Command::Verify {
            rep,
            matrix,
            group,
            seed,
        } => cmd_verify(&rep, &matrix, &group, seed),
        Command::Count {
            matrix,
            group,
            sets,
            output,
        } => cmd_count(&matrix, &group, &sets, output.as_deref()),
        Command::Hd {
            rep,
            matrix,
            group,
            sets,
            budget,
        } => cmd_hd(&rep, &matrix, &group, &sets, budget),
        Command::Symmetrize {
            rep,
            matrix,
            group,
            sets,
            removal,
            budget,
            output,
        } => cmd_symmetrize(
            &rep,
            &matrix,
            &group,
            &sets,
            &removal,
            budget,
            output.as_deref(),
        ),
        Command::Experiment(e) => cmd_experiment(e),
    };
    match result {
        Ok(body) => {
            println!("{}", serde_json::to_string_pretty(&body).unwrap());
            EXIT_OK
        }
        Err(f) => {
            eprintln!("linconfig: {}", f.message);
            if let Some(body) = f.body {
                println!("{}", serde_json::to_string_pretty(&body).unwrap());
            }
            f.code
        }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| {
        Failure::new(EXIT_PARSE, format!("cannot read {}: {e}", path.display()))
    })
}

fn parse_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = read_file(path)?;
    serde_json::from_str(&text).map_err(|e| {
        Failure::new(
            EXIT_PARSE,
            format!(
                "{}: parse error at line {}, column {}: {e}",
                path.display(),
                e.line(),
                e.column()
            ),
        )
    })
}

fn load_matrix(path: &Path) -> Result<IntMatrix, Failure> {
    let j: MatrixJson = parse_json(path)?;
    IntMatrix::try_from(&j)
        .map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn load_group(path: &Path) -> Result<FiniteAbelianGroup, Failure> {
    let j: GroupJson = parse_json(path)?;
    FiniteAbelianGroup::try_from(&j)
        .map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn load_rep(path: &Path) -> Result<Representation, Failure> {
    let j: RepresentationJson = parse_json(path)?;
    Representation::try_from(&j)
        .map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn load_sets(
    path: &Path,
    g: &FiniteAbelianGroup,
    expected: usize,
) -> Result<Vec<Vec<GroupElement>>, Failure> {
    let j: SetsJson = parse_json(path)?;
    if j.sets.len() != expected {
        return Err(Failure::new(
            EXIT_PARSE,
            format!(
                "{}: expected {expected} generator sets, found {}",
                path.display(),
                j.sets.len()
            ),
        ));
    }
    for set in &j.sets {
        for x in set {
            if !g.is_valid(x) {
                return Err(Failure::new(
                    EXIT_PARSE,
                    format!("{}: element {:?} not valid in {}", path.display(), x, g.name()),
                ));
            }
        }
    }
    Ok(j.sets)
}

fn write_output(path: &Path, value: &impl Serialize) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).unwrap();
    std::fs::write(path, text + "\n").map_err(|e| {
        Failure::new(EXIT_PARSE, format!("cannot write {}: {e}", path.display()))
    })
}

/// Battery spec grammar: groups separated by `;` (or `,`), factors by `x`,
/// e.g. `5;2x4;2x3x3`.
pub fn parse_battery(spec: &str) -> Result<Vec<FiniteAbelianGroup>, String> {
    let mut out = Vec::new();
    for token in spec.split([';', ',']) {
        let token = token.trim();
        if token.is_empty() {
            continue;
        }
        out.push(parse_group_spec(token)?);
    }
    if out.is_empty() {
        return Err("battery spec is empty".into());
    }
    Ok(out)
}

pub fn parse_group_spec(token: &str) -> Result<FiniteAbelianGroup, String> {
    let moduli: Result<Vec<u64>, _> = token
        .split('x')
        .map(|p| p.trim().parse::<u64>())
        .collect();
    match moduli {
        Ok(m) if !m.is_empty() && m.iter().all(|&n| n >= 1) => Ok(FiniteAbelianGroup::new(m)),
        _ => Err(format!("bad group spec: {token}")),
    }
}

fn parse_fraction(text: &str) -> Result<Rat, String> {
    let parts: Vec<&str> = text.split('/').collect();
    let bad = || format!("bad fraction: {text}");
    match parts.as_slice() {
        [n] => n
            .trim()
            .parse::<i64>()
            .map(|v| Rat::from(BigInt::from(v)))
            .map_err(|_| bad()),
        [n, d] => {
            let n = n.trim().parse::<i64>().map_err(|_| bad())?;
            let d = d.trim().parse::<i64>().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Rat::new(BigInt::from(n), BigInt::from(d)))
        }
        _ => Err(bad()),
    }
}

fn cmd_analyze(matrix_path: &Path, output: Option<&Path>) -> CmdResult {
    let m = load_matrix(matrix_path)?;
    if m.is_zero_matrix() {
        return Err(Failure::new(EXIT_PRECONDITION, "matrix is zero"));
    }
    let a = analyze(&m);
    let body = json!({
        "rows": m.rows(),
        "cols": m.cols(),
        "rank": a.rank,
        "determinantal": a.determinantal.to_string(),
        "invariant": a.invariant,
        "plain_indices": a.plain_indices.iter().map(|&i| i + 1).collect::<Vec<_>>(),
        "identity_form": a.identity_form,
        "simple": a.simple,
        "circular": a.circular,
    });
    eprintln!(
        "{}x{} rank {} d_r {} {}{}{}",
        m.rows(),
        m.cols(),
        a.rank,
        a.determinantal,
        if a.invariant { "invariant " } else { "" },
        if a.simple { "simple " } else { "" },
        if a.circular { "circular" } else { "" }
    );
    if let Some(path) = output {
        write_output(path, &body)?;
    }
    Ok(body)
}

fn cmd_represent(
    matrix_path: &Path,
    output: Option<&Path>,
    battery_spec: Option<&str>,
) -> CmdResult {
    let m = load_matrix(matrix_path)?;
    let outcome = represent(&m).map_err(|e| match e {
        PipelineError::DeterminantalNotOne => {
            Failure::new(EXIT_PRECONDITION, "determinantal divisor is not 1")
        }
        PipelineError::Degenerate(report) => Failure::with_body(
            EXIT_DEGENERATE,
            "matrix is fully plain: only the zero solution exists",
            json!({
                "degenerate": true,
                "plain_eliminated": report
                    .eliminated()
                    .iter()
                    .map(|&c| c + 1)
                    .collect::<Vec<_>>(),
            }),
        ),
        other => Failure::new(EXIT_PRECONDITION, other.to_string()),
    })?;

    let battery = match battery_spec {
        Some(spec) => {
            parse_battery(spec).map_err(|e| Failure::new(EXIT_PARSE, e))?
        }
        None => default_battery(),
    };
    for g in &battery {
        let report = verify_representation(&outcome.representation, &outcome.reduced_matrix, g)
            .map_err(|e| Failure::new(EXIT_PRECONDITION, e.to_string()))?;
        if !report.all_pass() {
            return Err(Failure::new(
                EXIT_VERIFY,
                format!("emitted representation failed verification on {}", g.name()),
            ));
        }
    }

    let rep_json = RepresentationJson::from(&outcome.representation);
    let trail_json = TrailJson::from_parts(&outcome.trail, &outcome.plain_report);
    if let Some(path) = output {
        write_output(path, &rep_json)?;
        let trail_path = path.with_extension("trail.json");
        write_output(&trail_path, &trail_json)?;
    }
    let variant = match &outcome.representation {
        Representation::Integer(_) => "integer",
        Representation::Structured(_) => "structured",
    };
    eprintln!(
        "t = {}, k = {} ({variant}); verified on {} groups",
        outcome.representation.t(),
        outcome.representation.k(),
        battery.len()
    );
    let mut body = json!({
        "t": outcome.representation.t(),
        "k": outcome.representation.k(),
        "variant": variant,
        "system_coordinates": outcome.representation.rows(),
        "battery": battery.iter().map(|g| g.name()).collect::<Vec<_>>(),
        "verified": true,
        "trail": trail_json,
    });
    if output.is_none() {
        body["representation"] = serde_json::to_value(&rep_json).unwrap();
    }
    Ok(body)
}

/// Reduces away plain coordinates before verification, mirroring how the
/// pipeline reports representations for the reduced system.
fn reduced_for_verify(m: &IntMatrix) -> Result<(IntMatrix, Vec<usize>), Failure> {
    let a = analyze(m);
    if a.plain_indices.is_empty() {
        return Ok((m.clone(), vec![]));
    }
    if !a.determinantal.is_one() {
        return Err(Failure::new(
            EXIT_PRECONDITION,
            "plain matrix with determinantal != 1",
        ));
    }
    let (reduced, report) = crate::system::plain_reduce(&a)
        .map_err(|e| Failure::new(EXIT_PRECONDITION, e.to_string()))?;
    match reduced {
        Some(r) => Ok((r.matrix, report.eliminated())),
        None => Err(Failure::with_body(
            EXIT_DEGENERATE,
            "matrix is fully plain",
            json!({"degenerate": true}),
        )),
    }
}

fn cmd_verify(rep_path: &Path, matrix_path: &Path, group_path: &Path, seed: u64) -> CmdResult {
    let rep = load_rep(rep_path)?;
    let m = load_matrix(matrix_path)?;
    let g = load_group(group_path)?;
    let (target, plain_eliminated) = reduced_for_verify(&m)?;
    if rep.rows() != target.cols() {
        return Err(Failure::new(
            EXIT_PARSE,
            format!(
                "representation has {} rows but the (reduced) matrix has {} columns",
                rep.rows(),
                target.cols()
            ),
        ));
    }
    let report = crate::representation::verify_with_samples(&rep, &target, &g, 6, seed)
        .map_err(|e| Failure::new(EXIT_PRECONDITION, e.to_string()))?;
    let body = json!({
        "group": g.name(),
        "plain_eliminated": plain_eliminated.iter().map(|&c| c + 1).collect::<Vec<_>>(),
        "cond_i": {"pass": report.cond_i.pass, "witness": report.cond_i.witness},
        "cond_ii": {"pass": report.cond_ii.pass, "witness": report.cond_ii.witness},
        "cond_iii": {"pass": report.cond_iii.pass, "witness": report.cond_iii.witness},
        "cond_iii_prime": {
            "samples": report.cond_iii_prime_samples,
            "failures": report.cond_iii_prime_failures,
            "witness": report.cond_iii_prime_witness,
        },
        "all_pass": report.all_pass(),
    });
    eprintln!(
        "i: {}  ii: {}  iii: {}  iii' samples: {} failures: {}",
        report.cond_i.pass,
        report.cond_ii.pass,
        report.cond_iii.pass,
        report.cond_iii_prime_samples,
        report.cond_iii_prime_failures
    );
    if report.all_pass() {
        Ok(body)
    } else {
        Err(Failure::with_body(
            EXIT_VERIFY,
            "verification failed",
            body,
        ))
    }
}

fn cmd_count(
    matrix_path: &Path,
    group_path: &Path,
    sets_path: &Path,
    output: Option<&Path>,
) -> CmdResult {
    let m = load_matrix(matrix_path)?;
    let g = load_group(group_path)?;
    let sets = load_sets(sets_path, &g, m.cols())?;
    let (count, density) = solution_count(&m, &g, &sets)
        .map_err(|e| Failure::new(EXIT_PRECONDITION, e.to_string()))?;
    let body = json!({
        "group": g.name(),
        "count": count.to_string(),
        "density": RationalJson::from(&density),
    });
    eprintln!("count {} density {}", count, RationalJson::from(&density).decimal);
    if let Some(path) = output {
        write_output(path, &body)?;
    }
    Ok(body)
}

fn map_hypergraph_err(e: HypergraphError) -> Failure {
    match e {
        HypergraphError::UnverifiedRepresentation => {
            Failure::new(EXIT_VERIFY, "representation failed verification")
        }
        HypergraphError::BudgetExceeded { size, budget } => Failure::new(
            EXIT_PRECONDITION,
            format!("enumeration size {size} exceeds budget {budget}"),
        ),
        other => Failure::new(EXIT_PRECONDITION, other.to_string()),
    }
}

fn cmd_hd(
    rep_path: &Path,
    matrix_path: &Path,
    group_path: &Path,
    sets_path: &Path,
    budget: Option<u64>,
) -> CmdResult {
    let rep = load_rep(rep_path)?;
    let m = load_matrix(matrix_path)?;
    let g = load_group(group_path)?;
    let sets = load_sets(sets_path, &g, m.cols())?;
    let h = build_cayley(&rep, &m, &g, &sets).map_err(map_hypergraph_err)?;
    let copy_budget = budget.unwrap_or(DEFAULT_COPY_BUDGET);
    let (copies, hd) =
        copy_count(&h, CopyCountMode::ViaKernel, copy_budget).map_err(map_hypergraph_err)?;
    let brute = match copy_count(&h, CopyCountMode::ExactBruteForce, copy_budget) {
        Ok((c, r)) => Some((c, r)),
        Err(HypergraphError::BudgetExceeded { .. }) => None,
        Err(e) => return Err(map_hypergraph_err(e)),
    };
    let (_, density) = solution_count(&m, &g, &sets)
        .map_err(|e| Failure::new(EXIT_PRECONDITION, e.to_string()))?;
    let identity_holds =
        hd == density && brute.as_ref().map(|(_, r)| r == &hd).unwrap_or(true);
    let body = json!({
        "group": g.name(),
        "copies_via_kernel": copies.to_string(),
        "copies_brute_force": brute.as_ref().map(|(c, _)| c.to_string()),
        "hd": RationalJson::from(&hd),
        "solution_density": RationalJson::from(&density),
        "identity_holds": identity_holds,
    });
    eprintln!(
        "hd {} solution density {} identity {}",
        RationalJson::from(&hd).decimal,
        RationalJson::from(&density).decimal,
        identity_holds
    );
    if identity_holds {
        Ok(body)
    } else {
        Err(Failure::with_body(
            EXIT_VERIFY,
            "density identity failed",
            body,
        ))
    }
}

fn cmd_symmetrize(
    rep_path: &Path,
    matrix_path: &Path,
    group_path: &Path,
    sets_path: &Path,
    removal_path: &Path,
    budget: Option<u64>,
    output: Option<&Path>,
) -> CmdResult {
    let rep = load_rep(rep_path)?;
    let m = load_matrix(matrix_path)?;
    let g = load_group(group_path)?;
    let sets = load_sets(sets_path, &g, m.cols())?;
    let removal_json: RemovalJson = parse_json(removal_path)?;
    if removal_json.removals.len() != m.cols() {
        return Err(Failure::new(
            EXIT_PARSE,
            "one removal set per color class required",
        ));
    }
    let removal = removal_json.to_edge_sets();
    let h = build_cayley(&rep, &m, &g, &sets).map_err(map_hypergraph_err)?;
    let brute_budget = budget.unwrap_or(DEFAULT_BRUTE_BUDGET);
    let sym = symmetrize_removal(&h, &removal, brute_budget).map_err(map_hypergraph_err)?;

    let stride = h.inst.stride;
    let k = rep.k();
    let s_sets_json: Vec<Vec<Vec<GroupElement>>> = sym
        .s_sets
        .iter()
        .map(|s| {
            s.iter()
                .map(|flat| {
                    (0..k)
                        .map(|i| flat[i * stride..(i + 1) * stride].to_vec())
                        .collect()
                })
                .collect()
        })
        .collect();
    let per_color: Vec<serde_json::Value> = (0..m.cols())
        .map(|j| {
            json!({
                "color": j + 1,
                "removal_edges": removal[j].len(),
                "s_edges": sym.s_sets[j].len(),
                "r_measure": RationalJson::from(&sym.r_measures[j]),
                "s_measure": RationalJson::from(&sym.s_measures[j]),
            })
        })
        .collect();
    let body = json!({
        "group": g.name(),
        "colors": per_color,
        "markov_bound_factor": 2 * m.cols(),
    });
    if let Some(path) = output {
        write_output(path, &RemovalJson { removals: s_sets_json })?;
    }
    eprintln!(
        "symmetrized {} colors; measures {:?}",
        m.cols(),
        sym.s_measures
            .iter()
            .map(|r| RationalJson::from(r).decimal)
            .collect::<Vec<_>>()
    );
    Ok(body)
}

fn random_subset_of_density(
    g: &FiniteAbelianGroup,
    density: &Rat,
    rng: &mut ChaCha8Rng,
) -> Vec<GroupElement> {
    let order = g.order().to_u64().expect("experiment group too large");
    // ceil(density * order)
    let target = (density * Rat::from(BigInt::from(order)))
        .ceil()
        .to_integer()
        .to_u64()
        .unwrap_or(0)
        .min(order)
        .max(1);
    let mut all: Vec<GroupElement> = g.elements().collect();
    all.shuffle(rng);
    all.truncate(target as usize);
    all.sort();
    all
}

fn cmd_experiment(cmd: ExperimentCmd) -> CmdResult {
    match cmd {
        ExperimentCmd::Ap {
            group,
            density,
            k,
            trials,
            seed,
            output,
        } => {
            if k < 2 {
                return Err(Failure::new(EXIT_PARSE, "k must be at least 2"));
            }
            let g = parse_group_spec(&group).map_err(|e| Failure::new(EXIT_PARSE, e))?;
            let alpha = parse_fraction(&density).map_err(|e| Failure::new(EXIT_PARSE, e))?;
            if alpha <= Rat::zero() || alpha > Rat::one() {
                return Err(Failure::new(EXIT_PARSE, "density must be in (0, 1]"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut rows = Vec::with_capacity(trials);
            let mut min_density: Option<Rat> = None;
            for trial in 0..trials {
                let a = random_subset_of_density(&g, &alpha, &mut rng);
                let a_set: BTreeSet<GroupElement> = a.iter().cloned().collect();
                let d = crate::hypergraph::ap_density(&g, &a_set, k);
                if min_density.as_ref().map(|m| &d < m).unwrap_or(true) {
                    min_density = Some(d.clone());
                }
                rows.push(json!({
                    "trial": trial,
                    "set_size": a.len(),
                    "density": RationalJson::from(&d),
                }));
            }
            let min_density = min_density.unwrap_or_else(Rat::zero);
            let body = json!({
                "experiment": "ap",
                "group": g.name(),
                "k": k,
                "alpha": density,
                "seed": seed,
                "trials": rows,
                "min_density": RationalJson::from(&min_density),
                "all_positive": min_density > Rat::zero(),
            });
            if let Some(path) = output {
                write_output(&path, &body)?;
            }
            Ok(body)
        }
        ExperimentCmd::SzemerediScan {
            max_n,
            alpha,
            trials,
            seed,
            output,
        } => {
            let alpha_frac =
                parse_fraction(&alpha).map_err(|e| Failure::new(EXIT_PARSE, e))?;
            if alpha_frac <= Rat::zero() || alpha_frac > Rat::one() {
                return Err(Failure::new(EXIT_PARSE, "alpha must be in (0, 1]"));
            }
            let ap3 = IntMatrix::from_i64(&[&[1, -2, 1]]);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut rows = Vec::new();
            let mut global_min: Option<Rat> = None;
            for n in 2..=max_n {
                let g = FiniteAbelianGroup::cyclic(n);
                let mut local_min: Option<Rat> = None;
                for _ in 0..trials {
                    let a = random_subset_of_density(&g, &alpha_frac, &mut rng);
                    let sets = vec![a.clone(); 3];
                    let (_, d) = solution_count(&ap3, &g, &sets)
                        .map_err(|e| Failure::new(EXIT_PRECONDITION, e.to_string()))?;
                    if local_min.as_ref().map(|m| &d < m).unwrap_or(true) {
                        local_min = Some(d);
                    }
                }
                let local_min = local_min.unwrap();
                if global_min.as_ref().map(|m| &local_min < m).unwrap_or(true) {
                    global_min = Some(local_min.clone());
                }
                rows.push(json!({
                    "n": n,
                    "min_density": RationalJson::from(&local_min),
                }));
            }
            let global_min = global_min.unwrap_or_else(Rat::zero);
            let body = json!({
                "experiment": "szemeredi-scan",
                "alpha": alpha,
                "seed": seed,
                "per_group": rows,
                "min_density": RationalJson::from(&global_min),
                "all_positive": global_min > Rat::zero(),
            });
            if let Some(path) = output {
                write_output(&path, &body)?;
            }
            Ok(body)
        }
        ExperimentCmd::Basic2 {
            group,
            matrix,
            trials,
            seed,
            output,
        } => {
            let g = parse_group_spec(&group).map_err(|e| Failure::new(EXIT_PARSE, e))?;
            let m = match matrix {
                Some(path) => load_matrix(&path)?,
                None => IntMatrix::from_i64(&[&[1, 1, -1]]),
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut pass = 0usize;
            let mut rows = Vec::with_capacity(trials);
            for trial in 0..trials {
                let (lhs, bound) = basic2_instance(&m, &g, &mut rng)
                    .map_err(|e| Failure::new(EXIT_PRECONDITION, e))?;
                let ok = lhs <= bound;
                if ok {
                    pass += 1;
                }
                rows.push(json!({
                    "trial": trial,
                    "lhs": RationalJson::from(&lhs),
                    "bound": RationalJson::from(&bound),
                    "pass": ok,
                }));
            }
            let body = json!({
                "experiment": "basic2",
                "group": g.name(),
                "matrix_rows": m.rows(),
                "matrix_cols": m.cols(),
                "seed": seed,
                "trials": rows,
                "passes": pass,
                "all_pass": pass == trials,
            });
            if let Some(path) = output {
                write_output(&path, &body)?;
            }
            if pass == trials {
                Ok(body)
            } else {
                Err(Failure::with_body(
                    EXIT_VERIFY,
                    "a bound check failed",
                    body,
                ))
            }
        }
    }
}

/// One instance of the kernel-integral bound: random `[-1, 1]`-valued
/// rational functions `f_j`, exact comparison of
/// `|avg_{ker M} prod f_j(x_j)|` against `min_j kappa_j avg_G |f_j 1_{G_j}|`.
pub fn basic2_instance(
    m: &IntMatrix,
    g: &FiniteAbelianGroup,
    rng: &mut ChaCha8Rng,
) -> Result<(Rat, Rat), String> {
    let w = kernel_parametrization(m, g).map_err(|e| e.to_string())?;
    let cols = m.cols();
    let order = g.order().to_u64().ok_or("group too large")?;
    // random rational values with denominator 8, numerator in [-8, 8]
    let elements: Vec<GroupElement> = g.elements().collect();
    let fs: Vec<std::collections::BTreeMap<GroupElement, Rat>> = (0..cols)
        .map(|_| {
            elements
                .iter()
                .map(|x| {
                    let num = rng.gen_range(-8i64..=8);
                    (x.clone(), Rat::new(BigInt::from(num), BigInt::from(8)))
                })
                .collect()
        })
        .collect();

    let param = matrix_action_hom(&w, g);
    let s = g.num_factors();
    let mut total = Rat::zero();
    let mut kernel_size = BigUint::zero();
    if w.cols() == 0 {
        total = Rat::one();
        for f in &fs {
            total *= &f[&g.zero()];
        }
        kernel_size = BigUint::one();
    } else {
        for y in param.domain().elements() {
            let x = param.apply(&y);
            let mut prod = Rat::one();
            for (j, f) in fs.iter().enumerate() {
                prod *= &f[&x[j * s..(j + 1) * s].to_vec()];
            }
            total += prod;
            kernel_size += 1u32;
        }
    }
    let lhs = (total / Rat::from(BigInt::from(kernel_size))).abs();

    let mut best: Option<Rat> = None;
    for j in 0..cols {
        let gj = kernel_projection_subgroup(&w, g, j);
        let kappa = Rat::from(BigInt::from(gj.index()));
        let mut sum = Rat::zero();
        for x in gj.iter() {
            sum += fs[j][&x].abs();
        }
        let rhs = kappa * sum / Rat::from(BigInt::from(order));
        if best.as_ref().map(|b| &rhs < b).unwrap_or(true) {
            best = Some(rhs);
        }
    }
    Ok((lhs, best.expect("at least one coordinate")))
}
