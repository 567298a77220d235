//! `numerosity` — exact calculator for asymptotic sizes of definable point
//! sets over tuples of naturals.
//!
//! Every command runs under a session: a horizon (largest index computed
//! exactly), a work budget (elementary-step cap), an optional oracle file
//! carrying the model's commitments, and an output mode. Machine mode
//! prints exactly one deterministic line; human mode prints the same line
//! followed by the supporting evidence.
//!
//! Exit codes: 0 success, 2 domain error (bad input, failed precondition,
//! inconsistent commitment), 3 resource exhaustion (work budget or horizon
//! too small for the requested construction).

mod parse;

use std::fmt::{self, Write as _};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use numerosity_core::numerosity::compare_sequences;
use numerosity_core::{
    axiom_check, build_subset_representative, build_u_congruence, class_enumeration, gen, in_rho,
    interval_growth, is_large_at_horizon, monotone_restriction, nu, num_add, num_mul, rapid_set,
    Axiom, AxiomSample, Budget, Coloring, EventuallyPeriodic, Family, FilterModel, FuncSpec,
    GrowthError, IndexSet, Interval, Membership, Numerosity, NumerosityError, OracleError, Point,
    PointSetError, PointSetExpr, RamseyError, Scope, SearchStrategy, SeriesError, SeriesExpr,
    Verdict, DEFAULT_BUDGET,
};

#[derive(Parser)]
#[command(
    name = "numerosity",
    version,
    about = "Exact calculator for asymptotic sizes of definable point sets over tuples of naturals"
)]
struct Cli {
    /// Largest index computed exactly.
    #[arg(long, global = true, default_value_t = 64)]
    horizon: u64,

    /// Elementary-step budget; exhausting it aborts with exit code 3.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,

    /// Oracle session file holding the model's commitments (created by
    /// `oracle commit` if missing).
    #[arg(long, global = true)]
    oracle: Option<PathBuf>,

    /// Print exactly one machine-readable line.
    #[arg(long, global = true)]
    machine: bool,

    /// Seed for commands that draw random samples.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum Strategy {
    /// Enumerate every coloring.
    Naive,
    /// Prune by monochromatic-so-far witnesses.
    #[default]
    Pruned,
}

impl From<Strategy> for SearchStrategy {
    fn from(s: Strategy) -> SearchStrategy {
        match s {
            Strategy::Naive => SearchStrategy::Naive,
            Strategy::Pruned => SearchStrategy::Pruned,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Number of points of a set with all coordinates at most N.
    Count { expr: String, n: u64 },
    /// The counting sequence up to the horizon, with its tail formula.
    Seq { expr: String },
    /// Compare the sizes of two sets under the session model.
    Cmp { x: String, y: String },
    /// Decide whether two sets have the same size under the session model.
    Equinum { x: String, y: String },
    /// Sum of two sizes: a disjointly tagged union representative.
    Add { x: String, y: String },
    /// Product of two sizes: the cartesian product representative.
    Mul { x: String, y: String },
    /// A subset of Y whose census matches X's at the certified checkpoints.
    SubsetRep { x: String, y: String },
    /// The block bijection between two sets the model judges equal in size.
    Congruence { x: String, y: String },
    /// The coloring norm of a finite set of naturals.
    Nu {
        set: String,
        #[arg(long, value_enum, default_value_t)]
        strategy: Strategy,
    },
    /// Membership of a finite set in an iterated coloring family.
    Rho {
        set: String,
        /// How many times the coloring operator is applied on top of the
        /// base family before testing (the test itself adds one more).
        #[arg(long, default_value_t = 0)]
        depth: u64,
        #[arg(long, value_enum, default_value_t)]
        strategy: Strategy,
    },
    /// Norm growth of a one-dimensional set across a partition into intervals.
    Gamma {
        expr: String,
        /// Partition file: one `interval <lo> <hi>` per line.
        #[arg(long)]
        partition: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        strategy: Strategy,
    },
    /// Horizon-bounded largeness probe: does norm growth exceed sqrt(n)+k?
    Large {
        expr: String,
        /// Partition file: one `interval <lo> <hi>` per line.
        #[arg(long)]
        partition: PathBuf,
        /// Slack added to sqrt(n).
        #[arg(long, default_value_t = 0)]
        k: u64,
        #[arg(long, value_enum, default_value_t)]
        strategy: Strategy,
    },
    /// Indices where a function is nondecreasing, inside the model's
    /// strongest accepted set.
    Reorder { func: String },
    /// The monotone rearrangement-by-rank value of a function at N.
    Tilde { func: String, n: u64 },
    /// The two-argument fast-growing ladder value A(M, N).
    Ackermann { m: u64, n: u64 },
    /// A subsequence growing faster than the given function, inside the
    /// model's strongest accepted set.
    Rapid { func: String },
    /// Class maxima and range enumeration of an interval-to-one function.
    Gplus { func: String },
    /// Evaluate a formal sum of sets at one index.
    Phi {
        /// May begin with a minus sign, e.g. `-S[ap(0,1)]`.
        #[arg(allow_hyphen_values = true)]
        series: String,
        n: u64,
    },
    /// Split a bounded coefficient map into signed characteristic layers.
    Decompose {
        /// Entries like `(1)=2, (3,4)=-1`.
        map: String,
        /// Declared bound on coefficient magnitudes.
        #[arg(long)]
        bound: u64,
    },
    /// Re-encode a positive combination as a single characteristic set.
    Pos2char {
        #[arg(allow_hyphen_values = true)]
        series: String,
        /// Declared bound on coefficient magnitudes.
        #[arg(long)]
        bound: u64,
        /// Largest dimension occurring in the input terms.
        #[arg(long, default_value_t = 8)]
        max_dim: usize,
    },
    /// Inspect or extend the session model.
    Oracle {
        #[command(subcommand)]
        action: OracleCmd,
    },
    /// Sample-based consistency check of the size axioms E0-E4.
    AxiomCheck {
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Add a commitment (an eventually periodic set) to the session file.
    Commit { descriptor: String },
    /// Ask the model about an eventually periodic set.
    Query { descriptor: String },
    /// Show the commitments and their intersection.
    List,
    /// Write the session model to a file.
    Save { path: PathBuf },
    /// Validate a model file and copy it into the session file.
    Load { path: PathBuf },
}

/// A command failure, classified for the exit-code taxonomy.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    /// Bad input or a failed precondition: exit 2.
    fn domain(message: impl Into<String>) -> Failure {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    /// Work budget or horizon exhausted: exit 3.
    fn resource(message: impl Into<String>) -> Failure {
        Failure {
            code: 3,
            message: message.into(),
        }
    }
}

fn from_pointset(e: PointSetError) -> Failure {
    match e {
        PointSetError::WorkBudgetExceeded(_) => Failure::resource(e.to_string()),
        _ => Failure::domain(e.to_string()),
    }
}

fn from_numerosity(e: NumerosityError) -> Failure {
    let message = e.to_string();
    match e {
        NumerosityError::PointSet(pe) => from_pointset(pe),
        NumerosityError::HorizonTooSmall { .. } => Failure::resource(message),
        _ => Failure::domain(message),
    }
}

fn from_ramsey(e: RamseyError) -> Failure {
    let message = e.to_string();
    match e {
        RamseyError::PointSet(pe) => from_pointset(pe),
        RamseyError::WorkBudgetExceeded(_) | RamseyError::SegmentExhausted { .. } => {
            Failure::resource(message)
        }
        _ => Failure::domain(message),
    }
}

fn from_growth(e: GrowthError) -> Failure {
    match e {
        GrowthError::WorkBudgetExceeded(_)
        | GrowthError::HorizonTooSmall { .. }
        | GrowthError::NoWitnessWithinHorizon => Failure::resource(e.to_string()),
        _ => Failure::domain(e.to_string()),
    }
}

fn from_series(e: SeriesError) -> Failure {
    let message = e.to_string();
    match e {
        SeriesError::PointSet(pe) => from_pointset(pe),
        SeriesError::HorizonTooSmall { .. } => Failure::resource(message),
        _ => Failure::domain(message),
    }
}

fn from_oracle(e: OracleError) -> Failure {
    Failure::domain(e.to_string())
}

fn expr_arg(text: &str) -> Result<PointSetExpr, Failure> {
    parse::parse_expr(text).map_err(|e| Failure::domain(format!("in `{text}`: {e}")))
}

fn func_arg(text: &str) -> Result<FuncSpec, Failure> {
    parse::parse_func(text).map_err(|e| Failure::domain(format!("in `{text}`: {e}")))
}

fn series_arg(text: &str) -> Result<SeriesExpr, Failure> {
    parse::parse_series(text).map_err(|e| Failure::domain(format!("in `{text}`: {e}")))
}

fn periodic_arg(text: &str) -> Result<EventuallyPeriodic, Failure> {
    parse::parse_periodic(text).map_err(|e| Failure::domain(format!("in `{text}`: {e}")))
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::domain(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text)
        .map_err(|e| Failure::domain(format!("cannot write {}: {e}", path.display())))
}

/// The session model: loaded from the oracle file when one is named and
/// exists, empty otherwise.
fn load_model(oracle: Option<&Path>) -> Result<FilterModel, Failure> {
    match oracle {
        Some(path) if path.exists() => {
            FilterModel::load_from_str(&read_file(path)?).map_err(from_oracle)
        }
        _ => Ok(FilterModel::new()),
    }
}

fn partition_arg(path: &Path) -> Result<Vec<Interval>, Failure> {
    Interval::parse_lines(&read_file(path)?).map_err(from_ramsey)
}

/// `[a,b,c]`, elided past `cap` entries.
fn list_capped<T: fmt::Display>(items: &[T], cap: usize) -> String {
    let mut s = String::from("[");
    for (i, item) in items.iter().take(cap).enumerate() {
        if i > 0 {
            s.push(',');
        }
        let _ = write!(s, "{item}");
    }
    if items.len() > cap {
        let _ = write!(s, ",... +{} more", items.len() - cap);
    }
    s.push(']');
    s
}

fn scope_word(scope: Scope) -> &'static str {
    match scope {
        Scope::AllModels => "all-models",
        Scope::ThisModel => "this-model",
    }
}

fn membership_or(q: Option<&Membership>, absent: &str) -> String {
    q.map_or_else(|| absent.to_string(), |m| m.to_string())
}

/// The human-mode evidence for a comparison: scope plus the sign partition
/// of the index axis with the model's answer on each cell.
fn comparison_detail(
    verdict: &Verdict,
    x: &PointSetExpr,
    y: &PointSetExpr,
    model: &FilterModel,
    horizon: u64,
    budget: &Budget,
) -> Result<Vec<String>, Failure> {
    let sx = x
        .counting_sequence(horizon, budget)
        .map_err(from_pointset)?;
    let sy = y
        .counting_sequence(horizon, budget)
        .map_err(from_pointset)?;
    let pattern = sy.sub(&sx).sign_pattern();
    let row = |name: &str, cell: &IndexSet| {
        let q = model.query(cell);
        let reach = if q.frechet_only { " (every model)" } else { "" };
        format!("  {name} {cell} -> {}{reach}", q.membership)
    };
    let mut detail = vec![
        format!("scope={}", scope_word(verdict.scope)),
        "evidence partition by sign of |Y_n| - |X_n|:".to_string(),
        row("negative (|X_n| > |Y_n|)", &pattern.negative),
        row("zero     (|X_n| = |Y_n|)", &pattern.zero),
        row("positive (|X_n| < |Y_n|)", &pattern.positive),
    ];
    if verdict.equal_excluded {
        detail.push("equality is excluded; the direction awaits further commitments".to_string());
    }
    Ok(detail)
}

fn coloring_line(c: &Coloring) -> String {
    let mut s = format!(
        "counterexample: vertices={} edges=",
        list_capped(&c.vertices, 64)
    );
    for i in 0..c.vertices.len() {
        for j in (i + 1)..c.vertices.len() {
            let _ = write!(
                s,
                "({},{})={} ",
                c.vertices[i],
                c.vertices[j],
                u8::from(c.edge_color(i, j))
            );
        }
    }
    s.trim_end().to_string()
}

fn is_empty_literal(e: &PointSetExpr) -> bool {
    matches!(e, PointSetExpr::Finite { points, .. } if points.is_empty())
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let Cli {
        horizon,
        budget,
        oracle,
        machine,
        seed,
        command,
    } = cli;
    if budget == 0 {
        return Err(Failure::domain("budget must be at least 1"));
    }
    let b = Budget::new(budget);
    let model = load_model(oracle.as_deref())?;
    let h = horizon;

    let emit = |line: String, detail: Vec<String>| {
        println!("{line}");
        if !machine {
            for d in detail {
                println!("{d}");
            }
        }
        Ok(())
    };

    match command {
        Command::Count { expr, n } => {
            let e = expr_arg(&expr)?;
            let v = e.count(n, &b).map_err(from_pointset)?;
            emit(v.to_string(), vec![])
        }
        Command::Seq { expr } => {
            let e = expr_arg(&expr)?;
            let s = e.counting_sequence(h, &b).map_err(from_pointset)?;
            let dim = e.dimension().map_err(from_pointset)?;
            emit(s.to_string(), vec![format!("dim={dim}"), format!("H={h}")])
        }
        Command::Cmp { x, y } | Command::Equinum { x, y } => {
            let ex = expr_arg(&x)?;
            let ey = expr_arg(&y)?;
            let sx = ex.counting_sequence(h, &b).map_err(from_pointset)?;
            let sy = ey.counting_sequence(h, &b).map_err(from_pointset)?;
            let verdict = compare_sequences(&sx, &sy, &model);
            let detail = if machine {
                vec![]
            } else {
                comparison_detail(&verdict, &ex, &ey, &model, h, &b)?
            };
            emit(verdict.machine_line(), detail)
        }
        Command::Add { x, y } => {
            let na = Numerosity::of(expr_arg(&x)?, h, &b).map_err(from_numerosity)?;
            let nb = Numerosity::of(expr_arg(&y)?, h, &b).map_err(from_numerosity)?;
            let r = num_add(&na, &nb, &b).map_err(from_numerosity)?;
            emit(
                format!("repr={}", r.provenance()),
                vec![
                    format!("seq={}", r.representative()),
                    format!("H={}", r.horizon()),
                ],
            )
        }
        Command::Mul { x, y } => {
            let na = Numerosity::of(expr_arg(&x)?, h, &b).map_err(from_numerosity)?;
            let nb = Numerosity::of(expr_arg(&y)?, h, &b).map_err(from_numerosity)?;
            let r = num_mul(&na, &nb, &b).map_err(from_numerosity)?;
            emit(
                format!("repr={}", r.provenance()),
                vec![
                    format!("seq={}", r.representative()),
                    format!("H={}", r.horizon()),
                ],
            )
        }
        Command::SubsetRep { x, y } => {
            let w = build_subset_representative(&expr_arg(&x)?, &expr_arg(&y)?, &model, h, &b)
                .map_err(from_numerosity)?;
            emit(
                format!(
                    "points={} checkpoints={} cert={} H={}",
                    w.points.len(),
                    w.checkpoints.len(),
                    w.certificate,
                    w.horizon
                ),
                vec![
                    format!("checkpoints={}", list_capped(&w.checkpoints, 64)),
                    format!("members={}", list_capped(&w.points, 40)),
                ],
            )
        }
        Command::Congruence { x, y } => {
            let c = build_u_congruence(&expr_arg(&x)?, &expr_arg(&y)?, &model, h, &b)
                .map_err(from_numerosity)?;
            let rendered: Vec<String> = c.pairs.iter().map(|(p, q)| format!("{p}->{q}")).collect();
            emit(
                format!(
                    "pairs={} checkpoints={} cert={} H={}",
                    c.pairs.len(),
                    c.checkpoints.len(),
                    c.certificate,
                    c.horizon
                ),
                vec![
                    format!("checkpoints={}", list_capped(&c.checkpoints, 64)),
                    format!("map={}", list_capped(&rendered, 40)),
                ],
            )
        }
        Command::Nu { set, strategy } => {
            let a = parse::parse_nat_set(&set)
                .map_err(|e| Failure::domain(format!("in `{set}`: {e}")))?;
            let v = nu(&a, &b, strategy.into()).map_err(from_ramsey)?;
            emit(format!("nu={v}"), vec![])
        }
        Command::Rho {
            set,
            depth,
            strategy,
        } => {
            let a = parse::parse_nat_set(&set)
                .map_err(|e| Failure::domain(format!("in `{set}`: {e}")))?;
            let mut family = Family::base();
            for _ in 0..depth {
                family = family.rho();
            }
            let answer = in_rho(&family, &a, &b, strategy.into()).map_err(from_ramsey)?;
            let detail = match (&answer.counterexample, machine) {
                (Some(c), false) => vec![coloring_line(c)],
                _ => vec![],
            };
            emit(
                format!(
                    "member={} tested_depth={} counterexample={}",
                    answer.member,
                    depth + 1,
                    if answer.counterexample.is_some() {
                        "yes"
                    } else {
                        "no"
                    }
                ),
                detail,
            )
        }
        Command::Gamma {
            expr,
            partition,
            strategy,
        } => {
            let e = expr_arg(&expr)?;
            let intervals = partition_arg(&partition)?;
            let growth =
                interval_growth(&e, &intervals, &b, strategy.into()).map_err(from_ramsey)?;
            let rendered: Vec<String> = growth
                .iter()
                .map(|g| g.map_or_else(|| "?".to_string(), |v| v.to_string()))
                .collect();
            let detail = intervals
                .iter()
                .zip(&rendered)
                .enumerate()
                .map(|(n, (iv, g))| format!("n={n} I={iv} nu={g}"))
                .collect();
            emit(format!("growth={}", list_capped(&rendered, 128)), detail)
        }
        Command::Large {
            expr,
            partition,
            k,
            strategy,
        } => {
            let e = expr_arg(&expr)?;
            let intervals = partition_arg(&partition)?;
            let report = is_large_at_horizon(&e, &intervals, &model, k, h, &b, strategy.into())
                .map_err(from_ramsey)?;
            let if_cofinite = membership_or(
                report.query_if_cofinite.as_ref().map(|q| &q.membership),
                "-",
            );
            let mut detail: Vec<String> = report
                .entries
                .iter()
                .map(|entry| {
                    let growth = entry
                        .growth
                        .map_or_else(|| "?".to_string(), |v| v.to_string());
                    let passes = match entry.passes {
                        Some(true) => "yes",
                        Some(false) => "no",
                        None => "?",
                    };
                    format!("n={} growth={growth} passes={passes}", entry.n)
                })
                .collect();
            detail.push(format!("passing={}", report.passing));
            emit(
                format!(
                    "k={} answer={} if_cofinite={if_cofinite} passing={}",
                    report.k, report.query.membership, report.passing
                ),
                detail,
            )
        }
        Command::Reorder { func } => {
            let f = func_arg(&func)?;
            let w = monotone_restriction(&f, &model, h, &b).map_err(from_growth)?;
            emit(
                format!("size={} space={} H={h}", w.indices.len(), w.search_space),
                vec![
                    format!("indices={}", list_capped(&w.indices, 64)),
                    format!("values={}", list_capped(&w.values, 64)),
                ],
            )
        }
        Command::Tilde { func, n } => {
            let f = FuncSpec::tilde(func_arg(&func)?);
            let v = f.eval(n, &b).map_err(from_growth)?;
            emit(v.to_string(), vec![])
        }
        Command::Ackermann { m, n } => {
            let v = FuncSpec::Ackermann(m).eval(n, &b).map_err(from_growth)?;
            emit(v.to_string(), vec![])
        }
        Command::Rapid { func } => {
            let f = func_arg(&func)?;
            let w = rapid_set(&f, &model, h, &b).map_err(from_growth)?;
            emit(
                format!("size={} space={} H={h}", w.elements.len(), w.search_space),
                vec![format!("elements={}", list_capped(&w.elements, 64))],
            )
        }
        Command::Gplus { func } => {
            let g = func_arg(&func)?;
            let ce = class_enumeration(&g, h, &b).map_err(from_growth)?;
            emit(
                format!(
                    "classes={} incomplete_from={}",
                    ce.right_endpoints.len(),
                    ce.incomplete_from
                ),
                vec![
                    format!("gplus={}", list_capped(&ce.gplus, 64)),
                    format!("range={}", list_capped(&ce.right_endpoints, 64)),
                ],
            )
        }
        Command::Phi { series, n } => {
            let s = series_arg(&series)?;
            let v = s.phi(n, &b).map_err(from_series)?;
            emit(v.to_string(), vec![])
        }
        Command::Decompose { map, bound } => {
            let values = parse::parse_coeff_map(&map)
                .map_err(|e| Failure::domain(format!("in `{map}`: {e}")))?;
            let d = numerosity_core::decompose_bounded(&values, bound).map_err(from_series)?;
            let mut detail = Vec::new();
            for (dim_index, dim_layers) in d.layers.iter().enumerate() {
                for (level_index, (plus, minus)) in dim_layers.iter().enumerate() {
                    if is_empty_literal(plus) && is_empty_literal(minus) {
                        continue;
                    }
                    detail.push(format!(
                        "dim={} level={} plus={plus} minus={minus}",
                        dim_index + 1,
                        level_index + 1
                    ));
                }
            }
            detail.push(format!("series={}", d.to_series()));
            let total: usize = d.layers.iter().map(Vec::len).sum();
            emit(
                format!("bound={} dims={} layers={total}", d.bound, d.layers.len()),
                detail,
            )
        }
        Command::Pos2char {
            series,
            bound,
            max_dim,
        } => {
            let p = series_arg(&series)?;
            let w = numerosity_core::positive_to_characteristic(&p, bound, max_dim, h, &b)
                .map_err(from_series)?;
            emit(
                format!("dim={} agrees_from={}", w.uniform_dim, w.agrees_from),
                vec![format!("set={}", w.set)],
            )
        }
        Command::Oracle { action } => run_oracle(action, oracle.as_deref(), &model, emit),
        Command::AxiomCheck { samples } => {
            let mut rng = gen::rng(seed);
            let mut pairs = Vec::with_capacity(samples);
            let mut tag_points = Vec::with_capacity(samples);
            for i in 0..samples {
                let dim = 1 + i % 2;
                pairs.push((gen::expr(&mut rng, dim, 2), gen::expr(&mut rng, dim, 2)));
                tag_points.push(gen::point(&mut rng, 1 + (i / 2) % 2, 3));
            }
            let zero_tag = Point::new(vec![0]);
            let e0: Vec<AxiomSample> = pairs
                .iter()
                .map(|(x, y)| {
                    AxiomSample::Pair(x.clone(), PointSetExpr::union(x.clone(), y.clone()))
                })
                .collect();
            let e1: Vec<AxiomSample> = pairs
                .iter()
                .map(|(x, y)| AxiomSample::Pair(x.clone(), y.clone()))
                .collect();
            let e3: Vec<AxiomSample> = pairs
                .iter()
                .zip(&tag_points)
                .map(|((x, _), p)| AxiomSample::Tagged(p.clone(), x.clone()))
                .collect();
            let e4: Vec<AxiomSample> = pairs
                .iter()
                .map(|(x, y)| {
                    AxiomSample::Quad(
                        x.clone(),
                        PointSetExpr::lift(zero_tag.clone(), x.clone()),
                        y.clone(),
                        PointSetExpr::lift(zero_tag.clone(), y.clone()),
                    )
                })
                .collect();

            let suites = [
                (Axiom::E0, &e0),
                (Axiom::E1, &e1),
                (Axiom::E2, &e1),
                (Axiom::E3, &e3),
                (Axiom::E4, &e4),
            ];
            let mut line = String::new();
            let mut detail = Vec::new();
            let mut ok = true;
            for (axiom, suite) in suites {
                let report = axiom_check(axiom, suite, &model, h, &b).map_err(from_numerosity)?;
                let (consistent, inconsistent, skipped) = report.tallies();
                ok &= report.all_consistent();
                let _ = write!(line, "{axiom}={consistent}/{inconsistent}/{skipped} ");
                detail.push(format!(
                    "{axiom}: consistent={consistent} inconsistent={inconsistent} skipped={skipped}"
                ));
                if let Some(entry) = report
                    .entries
                    .iter()
                    .find(|e| e.outcome == numerosity_core::CheckOutcome::Inconsistent)
                {
                    detail.push(format!(
                        "  first inconsistency: {} — {}",
                        entry.sample, entry.detail
                    ));
                }
            }
            let _ = write!(line, "ok={ok}");
            emit(line, detail)?;
            if ok {
                Ok(())
            } else {
                Err(Failure::domain("axiom check found an inconsistency"))
            }
        }
    }
}

fn run_oracle(
    action: OracleCmd,
    session: Option<&Path>,
    model: &FilterModel,
    emit: impl Fn(String, Vec<String>) -> Result<(), Failure>,
) -> Result<(), Failure> {
    match action {
        OracleCmd::Commit { descriptor } => {
            let path = session.ok_or_else(|| {
                Failure::domain("oracle commit needs --oracle FILE to persist the model")
            })?;
            let p = periodic_arg(&descriptor)?;
            let next = model.commit(&p).map_err(from_oracle)?;
            write_file(path, &next.save_to_string())?;
            emit(
                format!(
                    "committed={p} commitments={} core={}",
                    next.commitments().len(),
                    next.intersection()
                ),
                vec![format!("session={}", path.display())],
            )
        }
        OracleCmd::Query { descriptor } => {
            let p = periodic_arg(&descriptor)?;
            let q = model.query_periodic(&p);
            let cert = q
                .certificate
                .as_ref()
                .map_or_else(|| "none".to_string(), |c| c.to_string());
            emit(
                format!(
                    "answer={} cert={cert} frechet_only={}",
                    q.membership, q.frechet_only
                ),
                vec![format!("core={}", model.intersection())],
            )
        }
        OracleCmd::List => {
            let detail = model
                .commitments()
                .iter()
                .enumerate()
                .map(|(i, c)| format!("commitment[{i}]={c}"))
                .collect();
            emit(
                format!(
                    "commitments={} core={}",
                    model.commitments().len(),
                    model.intersection()
                ),
                detail,
            )
        }
        OracleCmd::Save { path } => {
            write_file(&path, &model.save_to_string())?;
            emit(
                format!(
                    "saved={} commitments={}",
                    path.display(),
                    model.commitments().len()
                ),
                vec![],
            )
        }
        OracleCmd::Load { path } => {
            let loaded = FilterModel::load_from_str(&read_file(&path)?).map_err(from_oracle)?;
            let mut detail = vec![];
            if let Some(target) = session {
                write_file(target, &loaded.save_to_string())?;
                detail.push(format!("session={}", target.display()));
            }
            emit(
                format!(
                    "loaded={} commitments={} core={}",
                    path.display(),
                    loaded.commitments().len(),
                    loaded.intersection()
                ),
                detail,
            )
        }
    }
}
