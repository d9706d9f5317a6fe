use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cwsusy::export::{self, CHECK_TSV_HEADER, RECORD_TSV_HEADER};
use cwsusy::moduli::{classify, random_points, sweep, verify_point, Axis, ClassificationRecord, Grid, ModuliPoint};
use cwsusy::superalgebra::GLOBAL_SIGN;
use cwsusy::Rational;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "cwsusy", version, about = "Exact checks on the Cahen-Wallach superalgebra family")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the exact and float checks at one point.
    Verify(PointArgs),
    /// Classify one point.
    Classify(PointArgs),
    /// Classify every point of a grid, plus optional random points.
    Sweep(SweepArgs),
    /// Dump the full structure constants at one point.
    Dump(PointArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Args)]
struct Common {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct PointArgs {
    #[arg(long, allow_hyphen_values = true)]
    alpha_minus: Rational,
    #[arg(long, allow_hyphen_values = true)]
    alpha_plus_prime: Rational,
    #[arg(long, allow_hyphen_values = true)]
    alpha_plus: Rational,
    #[arg(long, allow_hyphen_values = true)]
    alpha_minus_prime: Rational,
    #[command(flatten)]
    common: Common,
}

impl PointArgs {
    fn point(&self) -> ModuliPoint {
        ModuliPoint::new(
            self.alpha_minus.clone(),
            self.alpha_plus_prime.clone(),
            self.alpha_plus.clone(),
            self.alpha_minus_prime.clone(),
        )
    }
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, allow_hyphen_values = true)]
    alpha_minus: Option<Rational>,
    #[arg(long, allow_hyphen_values = true)]
    alpha_plus_prime: Option<Rational>,
    #[arg(long, allow_hyphen_values = true)]
    alpha_plus: Option<Rational>,
    #[arg(long, allow_hyphen_values = true)]
    alpha_minus_prime: Option<Rational>,
    /// min:max:denominator, once per axis not fixed by an --alpha flag, in
    /// the order α₋, α₊′, α₊, α₋′.
    #[arg(long, allow_hyphen_values = true)]
    grid: Vec<Axis>,
    /// Number of extra random points (α₋ fixed, other coordinates k/denominator
    /// of the last grid axis in [−1, 1]).
    #[arg(long, default_value_t = 0)]
    random: usize,
    #[command(flatten)]
    common: Common,
}

enum Failure {
    Usage(String),
    Verification(String),
}

impl From<cwsusy::Error> for Failure {
    fn from(e: cwsusy::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn emit(common: &Common, text: &str) -> Result<(), Failure> {
    match &common.out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| Failure::Usage(e.to_string())),
    }
}

fn tsv(header: &str, lines: impl Iterator<Item = String>) -> String {
    let mut s = String::from(header);
    s.push('\n');
    for l in lines {
        s.push_str(&l);
        s.push('\n');
    }
    s
}

fn point_input(p: &ModuliPoint, c: &Common) -> Value {
    json!({ "point": export::point(p), "tol": c.tol, "seed": c.seed })
}

fn records_output(recs: &[ClassificationRecord], c: &Common) -> String {
    match c.format {
        Format::Json => export::record_lines(recs),
        Format::Tsv => tsv(RECORD_TSV_HEADER, recs.iter().map(export::record_tsv)),
    }
}

fn run_verify(a: &PointArgs) -> Result<(), Failure> {
    let c = &a.common;
    let p = a.point();
    let rows = verify_point(&p, c.tol, c.seed)?;
    let text = match c.format {
        Format::Json => {
            export::to_json_string(&export::document("verify", point_input(&p, c), rows.iter().map(export::check).collect()))
        }
        Format::Tsv => tsv(CHECK_TSV_HEADER, rows.iter().map(export::check_tsv)),
    };
    emit(c, &text)?;
    let failed: Vec<&str> = rows.iter().filter(|r| !r.pass).map(|r| r.name).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(format!("failed checks: {}", failed.join(", "))))
    }
}

fn run_classify(a: &PointArgs) -> Result<(), Failure> {
    let p = a.point();
    let rec = classify(&p)?;
    emit(&a.common, &records_output(&[rec], &a.common))
}

fn build_grid(a: &SweepArgs) -> Result<Grid, Failure> {
    let mut axes = a.grid.iter();
    let mut pick = |fixed: &Option<Rational>| -> Result<Axis, Failure> {
        match fixed {
            Some(v) => Ok(Axis::fixed(v.clone())),
            None => axes
                .next()
                .cloned()
                .ok_or_else(|| Failure::Usage("each axis needs an --alpha flag or a --grid".into())),
        }
    };
    let grid = Grid {
        alpha_minus: pick(&a.alpha_minus)?,
        alpha_plus_prime: pick(&a.alpha_plus_prime)?,
        alpha_plus: pick(&a.alpha_plus)?,
        alpha_minus_prime: pick(&a.alpha_minus_prime)?,
    };
    if axes.next().is_some() {
        return Err(Failure::Usage("more --grid axes than unfixed coordinates".into()));
    }
    Ok(grid)
}

/// Susy must hold exactly on the locus α₊ = −3α₊′ at indecomposable points
/// and never off it.
fn inconsistent(r: &ClassificationRecord) -> bool {
    let locus = r.point.params().on_susy_locus();
    (r.susy && !locus) || (r.indecomposable && locus && !r.susy)
}

fn run_sweep(a: &SweepArgs) -> Result<(), Failure> {
    let c = &a.common;
    let grid = build_grid(a)?;
    let mut points = grid.points();
    if a.random > 0 {
        let am = a
            .alpha_minus
            .clone()
            .ok_or_else(|| Failure::Usage("--random needs a fixed --alpha-minus".into()))?;
        let den = a.grid.last().map_or(10, |ax| ax.denominator);
        points.extend(random_points(c.seed, a.random, &am, den));
    }
    let recs = sweep(&points)?;
    emit(c, &records_output(&recs, c))?;
    let bad: Vec<String> = recs.iter().filter(|r| inconsistent(r)).map(|r| r.point.to_string()).collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(format!("classification contradicted at {}", bad.join(" "))))
    }
}

fn run_dump(a: &PointArgs) -> Result<(), Failure> {
    let c = &a.common;
    let p = a.point();
    if p.is_origin() {
        return Err(Failure::Usage("the origin is not a point of the moduli space".into()));
    }
    let doc = export::dump(&p.params(), *GLOBAL_SIGN)?;
    let text = match c.format {
        Format::Json => export::to_json_string(&doc),
        Format::Tsv => {
            let rows = doc["even_brackets"].as_array().cloned().unwrap_or_default();
            tsv(
                "x\ty\tz\tre\tim",
                rows.iter().map(|r| {
                    let s = |v: &Value| v.as_str().unwrap_or_default().to_string();
                    format!("{}\t{}\t{}\t{}\t{}", s(&r["x"]), s(&r["y"]), s(&r["z"]), s(&r["value"]["re"]), s(&r["value"]["im"]))
                }),
            )
        }
    };
    emit(c, &text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify(a) => run_verify(a),
        Command::Classify(a) => run_classify(a),
        Command::Sweep(a) => run_sweep(a),
        Command::Dump(a) => run_dump(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(m)) => {
            eprintln!("verification failed: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
