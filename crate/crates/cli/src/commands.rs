use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::time::Instant;

use capset_core::functional::int;
use capset_core::gf::prime_power;
use capset_core::{
    ap_lambda_value, bound_recurrence, density_increment, find_progression, lambda_alt_check,
    meshulam_iterate, parseval_check, verify_hyperplane_identity, Error, LinearEquation, Rational,
    RationalFn, SearchConfig, SearchMode, Space,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::report::*;
use crate::{Cli, Command, EquationArg, SearchArg};

pub const EXIT_OK: u8 = 0;
pub const EXIT_IDENTITY: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_NOT_FREE: u8 = 3;

/// Largest `--r-max` accepted by `bound`.
pub const MAX_BOUND_RANK: usize = 1000;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::NotProgressionFree { .. } => EXIT_NOT_FREE,
            Error::Invariant(_) => EXIT_IDENTITY,
            _ => EXIT_USAGE,
        };
        CliError {
            code,
            message: err.to_string(),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(err: io::Error) -> Self {
        CliError::usage(err.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(err: csv::Error) -> Self {
        CliError::usage(err.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(err: serde_json::Error) -> Self {
        CliError::usage(err.to_string())
    }
}

type CliResult = Result<u8, CliError>;

pub fn run(cli: &Cli) -> CliResult {
    let start = Instant::now();
    let ctx = Ctx {
        jobs: cli.jobs.max(1),
        start: cli.timing.then_some(start),
    };
    match &cli.command {
        Command::Verify {
            q,
            r,
            equation,
            trials,
            seed,
            out,
        } => verify(&ctx, *q, *r, *equation, *trials, *seed, out.as_deref()),
        Command::Analyze {
            q,
            r,
            set,
            rule,
            out,
        } => analyze(&ctx, *q, *r, set, (*rule).into(), out.as_deref()),
        Command::Iterate {
            q,
            r,
            set,
            search,
            seed,
            limit,
            rule,
            out,
            csv,
        } => {
            let source = match (set, search) {
                (Some(path), _) => Source::File(path),
                (None, Some(mode)) => Source::Search(search_config(*mode, *seed, *limit)),
                (None, None) => {
                    return Err(CliError::usage("either --set or --search is required"))
                }
            };
            iterate(
                &ctx,
                *q,
                *r,
                source,
                (*rule).into(),
                out.as_deref(),
                csv.as_deref(),
            )
        }
        Command::Bound { q, r_max, out } => bound(*q, *r_max, out.as_deref()),
        Command::Search {
            q,
            r,
            mode,
            seed,
            limit,
            out,
        } => search(*q, *r, search_config(*mode, *seed, *limit), out.as_deref()),
    }
}

struct Ctx {
    jobs: usize,
    start: Option<Instant>,
}

impl Ctx {
    fn wall_time(&self) -> Option<u128> {
        self.start.map(|s| s.elapsed().as_millis())
    }
}

enum Source<'a> {
    File(&'a Path),
    Search(SearchConfig),
}

fn search_config(mode: SearchArg, seed: u64, limit: Option<u64>) -> SearchConfig {
    let mode = match mode {
        SearchArg::Random => SearchMode::RandomMaximal,
        SearchArg::Greedy => SearchMode::Greedy,
        SearchArg::Exhaustive => SearchMode::Exhaustive,
    };
    SearchConfig { mode, seed, limit }
}

fn equation(arg: EquationArg) -> (LinearEquation, &'static str) {
    match arg {
        EquationArg::Ap => (LinearEquation::ap(), "ap"),
        EquationArg::Sum3 => (LinearEquation::sum3(), "sum3"),
        EquationArg::Eq2 => (LinearEquation::eq2(), "eq2"),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn emit_json<T: Serialize>(out: Option<&Path>, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    emit(out, &text)
}

fn emit_csv<T: Serialize>(out: Option<&Path>, rows: &[T]) -> Result<(), CliError> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.serialize(row)?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| CliError::usage(e.to_string()))?;
    emit(out, &String::from_utf8_lossy(&bytes))
}

fn record(check: &'static str, trial: usize, lhs: &Rational, rhs: &Rational) -> CheckRecord {
    CheckRecord {
        check,
        trial,
        lhs: rat(lhs),
        rhs: rat(rhs),
        pass: lhs == rhs,
    }
}

fn verify_trial(
    space: &Space,
    eq: &LinearEquation,
    seed: u64,
    trial: usize,
) -> Result<Vec<CheckRecord>, Error> {
    // One ChaCha stream per trial keeps results independent of scheduling.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    let f = RationalFn::random(space, &mut rng);
    let lemma = verify_hyperplane_identity(eq, &f)?;
    let parseval = parseval_check(&f)?;
    let alt = lambda_alt_check(eq, &f)?;
    Ok(vec![
        record("hyperplane_identity", trial, &lemma.lhs, &lemma.rhs),
        record("parseval", trial, &parseval.lhs, &parseval.rhs),
        record(
            "mean_subtraction",
            trial,
            &alt.balanced,
            &(&alt.plain - &alt.mean_power),
        ),
    ])
}

fn verify(
    ctx: &Ctx,
    q: u64,
    r: usize,
    eq_arg: EquationArg,
    trials: usize,
    seed: u64,
    out: Option<&Path>,
) -> CliResult {
    let space = Space::of_order(q, r)?;
    if r == 0 {
        return Err(Error::RankZero.into());
    }
    let (eq, eq_name) = equation(eq_arg);
    eq.field_coeffs(space.field())?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(ctx.jobs)
        .build()
        .map_err(|e| CliError::usage(e.to_string()))?;
    let per_trial: Vec<Result<Vec<CheckRecord>, Error>> = pool.install(|| {
        (0..trials)
            .into_par_iter()
            .map(|t| verify_trial(&space, &eq, seed, t))
            .collect()
    });
    let mut checks = Vec::with_capacity(3 * trials);
    for result in per_trial {
        checks.extend(result?);
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    let pass = failed == 0;
    let report = Report {
        schema: SCHEMA,
        command: format!(
            "verify --q {q} --r {r} --equation {eq_name} --trials {trials} --seed {seed}"
        ),
        field: FieldParams::of(&space),
        seed: Some(seed),
        body: VerifyBody {
            equation: eq.coeffs().to_vec(),
            trials,
            checks_run: checks.len(),
            checks_failed: failed,
            checks,
        },
        pass,
        wall_time_ms: ctx.wall_time(),
    };
    emit_json(out, &report)?;
    Ok(if pass { EXIT_OK } else { EXIT_IDENTITY })
}

fn read_set(space: &Space, path: &Path) -> Result<Vec<capset_core::Point>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    space
        .parse_set(&text)
        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

fn analyze(
    ctx: &Ctx,
    q: u64,
    r: usize,
    set_path: &Path,
    rule: capset_core::SliceRule,
    out: Option<&Path>,
) -> CliResult {
    let space = Space::of_order(q, r)?;
    let set = read_set(&space, set_path)?;
    let command = format!("analyze --q {q} --r {r} --set {}", set_path.display());

    if let Some((a, b, c)) = find_progression(&set, &space)? {
        let report = Report {
            schema: SCHEMA,
            command,
            field: FieldParams::of(&space),
            seed: None,
            body: AnalyzeBody {
                set_size: set.len(),
                progression_free: false,
                violating_triple: Some([coords(&space, a), coords(&space, b), coords(&space, c)]),
                alpha: None,
                lambda_ap: None,
                bound: None,
                certificate: None,
            },
            pass: false,
            wall_time_ms: ctx.wall_time(),
        };
        emit_json(out, &report)?;
        eprintln!(
            "capset: set is not progression-free: {:?}, {:?}, {:?}",
            coords(&space, a),
            coords(&space, b),
            coords(&space, c)
        );
        return Ok(EXIT_NOT_FREE);
    }

    let lambda_ap = ap_lambda_value(&set, &space)?;
    let cert = density_increment(&set, &space, rule)?;
    let pass = cert.holds();
    let report = Report {
        schema: SCHEMA,
        command,
        field: FieldParams::of(&space),
        seed: None,
        body: AnalyzeBody {
            set_size: set.len(),
            progression_free: true,
            violating_triple: None,
            alpha: Some(rat(&cert.alpha)),
            lambda_ap: Some(rat(&lambda_ap)),
            bound: Some(rat(&cert.bound)),
            certificate: Some(CertificateRecord::new(&space, &cert)),
        },
        pass,
        wall_time_ms: ctx.wall_time(),
    };
    emit_json(out, &report)?;
    Ok(if pass { EXIT_OK } else { EXIT_IDENTITY })
}

fn iterate(
    ctx: &Ctx,
    q: u64,
    r: usize,
    source: Source<'_>,
    rule: capset_core::SliceRule,
    out: Option<&Path>,
    csv_out: Option<&Path>,
) -> CliResult {
    let space = Space::of_order(q, r)?;
    let (set, label, seed) = match source {
        Source::File(path) => (
            read_set(&space, path)?,
            format!("file:{}", path.display()),
            None,
        ),
        Source::Search(cfg) => (
            cfg.run(&space)?,
            format!("search:{:?}", cfg.mode).to_lowercase(),
            Some(cfg.seed),
        ),
    };
    if let Some((a, b, c)) = find_progression(&set, &space)? {
        eprintln!(
            "capset: set is not progression-free: {:?}, {:?}, {:?}",
            coords(&space, a),
            coords(&space, b),
            coords(&space, c)
        );
        return Ok(EXIT_NOT_FREE);
    }
    let trace = meshulam_iterate(&set, &space, rule)?;
    let body = IterateBody::new(&space, label.clone(), set.len(), &trace);
    let pass = body.sound;
    let command = match seed {
        Some(s) => format!("iterate --q {q} --r {r} --source {label} --seed {s}"),
        None => format!("iterate --q {q} --r {r} --source {label}"),
    };
    let report = Report {
        schema: SCHEMA,
        command,
        field: FieldParams::of(&space),
        seed,
        body,
        pass,
        wall_time_ms: ctx.wall_time(),
    };
    if let Some(path) = csv_out {
        emit_csv(Some(path), &trace_rows(&space, &trace))?;
    }
    emit_json(out, &report)?;
    Ok(if pass { EXIT_OK } else { EXIT_IDENTITY })
}

fn bound(q: u64, r_max: usize, out: Option<&Path>) -> CliResult {
    let (p, _) = prime_power(q)?;
    if p == 2 {
        return Err(Error::EvenOrder(q as u32).into());
    }
    let q = u32::try_from(q).map_err(|_| CliError::usage(format!("q = {q} is too large")))?;
    if r_max > MAX_BOUND_RANK {
        return Err(CliError::usage(format!(
            "--r-max {r_max} exceeds the limit {MAX_BOUND_RANK}"
        )));
    }
    let table = bound_recurrence(q, r_max);
    let rows: Vec<BoundRow> = table
        .iter()
        .enumerate()
        .map(|(r, t)| BoundRow { r, t: rat(t) })
        .collect();
    emit_csv(out, &rows)?;
    // Compare r·T(r) unreduced; big-integer gcds on the late rows are slow.
    let (arg, _) = table
        .iter()
        .enumerate()
        .map(|(r, t)| (r, Rational::new_raw(t.numer() * r, t.denom().clone())))
        .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
        .expect("table has T(0)");
    let best = int(arg as i64) * &table[arg];
    eprintln!("max r*T(r) = {} at r = {arg}", rat(&best));
    Ok(EXIT_OK)
}

fn search(q: u64, r: usize, cfg: SearchConfig, out: Option<&Path>) -> CliResult {
    let space = Space::of_order(q, r)?;
    let set = cfg.run(&space)?;
    let mut text = format!(
        "# q={q} r={r} mode={} seed={} size={}\n",
        format!("{:?}", cfg.mode).to_lowercase(),
        cfg.seed,
        set.len()
    );
    text.push_str(&space.format_set(&set));
    emit(out, &text)?;
    Ok(EXIT_OK)
}
