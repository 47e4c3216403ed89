use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use weaklg::catalog::{catalog_ids, find_entry, load_catalog, load_model_file, CatalogEntry, CatalogError};
use weaklg::critical::{check_expected_values, cluster_values, find_critical_points, CriticalOptions};
use weaklg::periods::{constant_terms_series, series_equal};
use weaklg::pfops::{is_d3_shape, recover_minimal_operator, recover_operator};
use weaklg::polytope::polytope_report;
use weaklg::verify::{verify_catalog, verify_entry, Status, VerificationReport, VerifyOptions};

#[derive(Parser)]
#[command(name = "weaklg", version, about = "Periods, Picard-Fuchs operators and Newton polytopes of Laurent polynomial Landau-Ginzburg models")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ModelArg {
    /// Catalog id (see `weaklg models`).
    #[arg(required_unless_present = "file")]
    model: Option<String>,
    /// Model file instead of a catalog id.
    #[arg(long, conflicts_with = "model")]
    file: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// List the built-in models.
    Models,
    /// Constant-term series coefficients.
    Series {
        #[command(flatten)]
        model: ModelArg,
        #[arg(short = 'n', long = "order", default_value_t = 60)]
        order: usize,
    },
    /// Recover the Picard-Fuchs operator from the series.
    Pf {
        #[command(flatten)]
        model: ModelArg,
        #[arg(short = 'n', long = "order", default_value_t = 60)]
        order: usize,
        #[arg(long = "ord", default_value_t = 3)]
        ord_d: usize,
        /// Largest degree in t tried.
        #[arg(long = "deg", default_value_t = 4)]
        deg_t: usize,
        /// Only try exactly `--deg`.
        #[arg(long)]
        exact_degree: bool,
    },
    /// Newton polytope, dual, lattice counts and Picard rank.
    Polytope {
        #[command(flatten)]
        model: ModelArg,
        #[arg(short = 'm', long = "mmax", default_value_t = 3)]
        m_max: u32,
    },
    /// Critical values on the torus.
    Critical {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long, default_value_t = 512)]
        starts: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Compare the series of two models.
    Compare {
        first: String,
        second: String,
        #[arg(short = 'n', long = "order", default_value_t = 60)]
        order: usize,
    },
    /// Run every applicable check.
    Verify {
        #[arg(required_unless_present_any = ["all", "file"], conflicts_with = "all")]
        model: Option<String>,
        #[arg(long)]
        all: bool,
        #[arg(long, conflicts_with = "model")]
        file: Option<PathBuf>,
        #[arg(short = 'n', long = "order", default_value_t = 60)]
        order: usize,
        #[arg(short = 'm', long = "mmax", default_value_t = 3)]
        m_max: u32,
        #[arg(long, default_value_t = 512)]
        starts: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
}

enum Failure {
    Usage(String),
    Computation(String),
}

impl From<CatalogError> for Failure {
    fn from(e: CatalogError) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<ExitCode, Failure>;

fn resolve(reference: &str) -> Result<CatalogEntry, Failure> {
    match find_entry(reference) {
        Ok(e) => Ok(e),
        Err(CatalogError::UnknownModel(_)) if Path::new(reference).is_file() => Ok(load_model_file(Path::new(reference))?),
        Err(e) => Err(e.into()),
    }
}

fn resolve_arg(m: &ModelArg) -> Result<CatalogEntry, Failure> {
    match (&m.model, &m.file) {
        (_, Some(path)) => Ok(load_model_file(path)?),
        (Some(id), None) => resolve(id),
        (None, None) => Err(Failure::Usage("a model id or --file is required".into())),
    }
}

fn emit(json: bool, doc: Value, text: impl FnOnce() -> String) {
    if json {
        println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
    } else {
        println!("{}", text());
    }
}

fn computation(e: impl ToString) -> Failure {
    Failure::Computation(e.to_string())
}

fn critical_options(starts: usize, seed: u64, tol: f64) -> Result<CriticalOptions<f64>, Failure> {
    if starts == 0 || !(tol > 0.0) {
        return Err(Failure::Usage("--starts must be positive and --tol > 0".into()));
    }
    Ok(CriticalOptions { starts, seed, tol, ..Default::default() })
}

fn run(cli: Cli) -> Outcome {
    let json = cli.json;
    match cli.command {
        Command::Models => {
            let cat = load_catalog();
            let doc = Value::Array(cat.iter().map(CatalogEntry::to_json).collect());
            emit(json, doc, || {
                cat.iter()
                    .map(|e| format!("{:14} row {:2}  {:40} {}", e.id, e.table1_row, e.fano_name, e.polynomial))
                    .collect::<Vec<_>>()
                    .join("\n")
            });
            Ok(ExitCode::SUCCESS)
        }
        Command::Series { model, order } => {
            let entry = resolve_arg(&model)?;
            if order == 0 {
                return Err(Failure::Usage("--order must be at least 1".into()));
            }
            let s = constant_terms_series(&entry.polynomial, order).map_err(computation)?;
            emit(json, serde_json::to_value(s.to_document()).expect("serializable"), || s.to_text());
            Ok(ExitCode::SUCCESS)
        }
        Command::Pf { model, order, ord_d, deg_t, exact_degree } => {
            let entry = resolve_arg(&model)?;
            let s = constant_terms_series(&entry.polynomial, order.max(1)).map_err(computation)?;
            let found = if exact_degree {
                recover_operator(&s, ord_d, deg_t)
            } else {
                recover_minimal_operator(&s, ord_d, deg_t)
            }
            .map_err(computation)?
            .ok_or_else(|| computation(format!("no operator with ord_D = {ord_d}, deg_t <= {deg_t} annihilates the series")))?;
            let shape = is_d3_shape(&found.operator);
            let doc = json!({
                "model": entry.id,
                "operator": found.operator.to_document(),
                "fitted": found.fitted,
                "held_out": found.held_out,
                "d3_shape": shape,
            });
            emit(json, doc, || {
                format!(
                    "{}\nfitted on {} coefficients, {} held-out coefficients annihilated\nD3 shape: {}",
                    found.operator,
                    found.fitted,
                    found.held_out,
                    shape.violation.as_ref().map_or_else(|| "yes".to_string(), |v| format!("no ({v})"))
                )
            });
            Ok(ExitCode::SUCCESS)
        }
        Command::Polytope { model, m_max } => {
            let entry = resolve_arg(&model)?;
            let rep = polytope_report(&entry.polynomial, entry.degree, m_max).map_err(computation)?;
            emit(json, serde_json::to_value(&rep).expect("serializable"), || {
                let mut out = vec![
                    format!("vertices: {:?}", rep.vertices),
                    format!("interior points: {:?}", rep.interior_points),
                    format!("volume: {} = {}/3!", rep.volume, rep.volume_units),
                    format!("canonical: {}", rep.canonical),
                ];
                if let Some(t) = &rep.toric {
                    out.push(format!("dual volume: {} = {}/3!", rep.dual_volume, rep.dual_volume_units));
                    for r in &t.rows {
                        out.push(format!("E({}) = {} (formula {})", r.m, r.count, r.expected));
                    }
                    out.push(format!("toric({}): {}", t.degree, t.holds));
                } else {
                    out.push("origin is not interior: no dual polytope".into());
                }
                if let Some(p) = rep.picard_rank {
                    out.push(format!("picard rank: {p}"));
                }
                out.join("\n")
            });
            Ok(ExitCode::SUCCESS)
        }
        Command::Critical { model, starts, seed, tol } => {
            let entry = resolve_arg(&model)?;
            let opts = critical_options(starts, seed, tol)?;
            let points = find_critical_points(&entry.polynomial, &opts);
            if points.is_empty() {
                eprintln!("warning: no critical points converged");
            }
            let set = cluster_values(&points, opts.cluster_radius);
            let check = entry.expected_critical_values.as_ref().map(|e| check_expected_values(&set, e, 1e-8));
            let doc = json!({
                "model": entry.id,
                "values": set.to_document(),
                "expected": check,
            });
            emit(json, doc, || {
                let mut out: Vec<String> = set
                    .clusters
                    .iter()
                    .map(|c| format!("{:+.10} {:+.10}i  count {}  residual {:.1e}", c.value.re, c.value.im, c.count, c.residual_max))
                    .collect();
                if let Some(c) = &check {
                    out.push(format!("match: {}", c.ok));
                    for m in &c.missing {
                        out.push(format!("missing: {} {}i", m[0], m[1]));
                    }
                }
                out.join("\n")
            });
            Ok(if check.is_some_and(|c| !c.ok) { ExitCode::from(1) } else { ExitCode::SUCCESS })
        }
        Command::Compare { first, second, order } => {
            let (a, b) = (resolve(&first)?, resolve(&second)?);
            if order == 0 {
                return Err(Failure::Usage("--order must be at least 1".into()));
            }
            let sa = constant_terms_series(&a.polynomial, order).map_err(computation)?;
            let sb = constant_terms_series(&b.polynomial, order).map_err(computation)?;
            let cmp = series_equal(&sa, &sb);
            let doc = json!({
                "first": a.id,
                "second": b.id,
                "equal": cmp.equal,
                "compared": cmp.compared,
                "first_mismatch": cmp.first_mismatch,
            });
            emit(json, doc, || match cmp.first_mismatch {
                None => format!("equal over {} coefficients", cmp.compared),
                Some(i) => format!("mismatch at index {i}"),
            });
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { model, all, file, order, m_max, starts, seed, tol } => {
            let opts = VerifyOptions { order, m_max, critical: critical_options(starts, seed, tol)?, ..Default::default() };
            let reports = if all {
                verify_catalog(&opts)
            } else {
                let entry = match (&model, &file) {
                    (_, Some(path)) => load_model_file(path)?,
                    (Some(id), None) => find_entry(id)?,
                    (None, None) => return Err(Failure::Usage("a model id, --file or --all is required".into())),
                };
                vec![verify_entry(&entry, &load_catalog(), &opts)]
            };
            emit(json, serde_json::to_value(&reports).expect("serializable"), || {
                reports.iter().map(render_report).collect::<Vec<_>>().join("\n")
            });
            Ok(if reports.iter().all(VerificationReport::passed) { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn render_report(r: &VerificationReport) -> String {
    let mut out = vec![format!("{} {} ({:.2}s)", r.id, label(r.status), r.elapsed.as_secs_f64())];
    for c in &r.checks {
        out.push(format!("  {:8} {:20} {}", label(c.status), c.name, c.detail));
    }
    out.join("\n")
}

fn label(s: Status) -> &'static str {
    match s {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::Skipped => "SKIPPED",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            if msg.starts_with("unknown model") {
                eprintln!("known models: {}", catalog_ids().join(", "));
            }
            ExitCode::from(2)
        }
        Err(Failure::Computation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
