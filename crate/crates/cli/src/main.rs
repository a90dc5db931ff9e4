//! `mmgeom`: build, verify and take residues of Mazzocca-Melone sets.
//!
//! Exit codes: 0 all checks pass, 1 a check failed, 2 usage or input error,
//! 3 unsupported configuration.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use mmgeom::constructors::{e6_variety, grassmann_lines, half_spin, segre, veronese};
use mmgeom::io;
use mmgeom::mmverify::{self, residue, Collinearity, Invariants, VerificationReport, VerifyOptions};
use mmgeom::report::Sampling;
use mmgeom::{Error, Field, MMSet};

#[derive(Parser)]
#[command(name = "mmgeom", version, about = "Exact Mazzocca-Melone sets over finite fields")]
struct Cli {
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a variety and write it to a file.
    Build(BuildArgs),
    /// Run the verification suite on a stored set.
    Verify(VerifyArgs),
    /// Compute the residue at a point and write it as a new set.
    Residue(ResidueArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Veronese,
    Segre,
    Grassmann,
    Halfspin,
    E6,
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// Veronese: dimension of the projective space.
    #[arg(long)]
    n: Option<usize>,
    /// Segre: dimensions of the two factors.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    l: Option<usize>,
    /// Grassmann: dimension of the projective space whose lines are taken.
    #[arg(long)]
    m: Option<usize>,
    /// Field characteristic.
    #[arg(long)]
    p: u32,
    /// Field degree over the prime field.
    #[arg(long, default_value_t = 1)]
    degree: u32,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SamplingArgs {
    #[arg(long, default_value_t = Sampling::default().seed)]
    seed: u64,
    /// Random probes per sampled check.
    #[arg(long, default_value_t = Sampling::default().samples)]
    samples: u64,
    /// Points probed by per-point scans on large sets.
    #[arg(long, default_value_t = Sampling::default().point_samples)]
    point_samples: u64,
    /// Checks are exhaustive on sets with at most this many points.
    #[arg(long, default_value_t = Sampling::default().exhaustive_limit)]
    exhaustive_limit: usize,
}

impl SamplingArgs {
    fn sampling(&self) -> Sampling {
        Sampling {
            seed: self.seed,
            samples: self.samples,
            point_samples: self.point_samples,
            exhaustive_limit: self.exhaustive_limit,
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    /// Set file written by `build` or `residue`.
    input: PathBuf,
    /// Comma-separated checks; `all` runs every check.
    #[arg(long, value_delimiter = ',')]
    checks: Option<Vec<String>>,
    #[arg(long)]
    exhaustive_mm2: bool,
    #[command(flatten)]
    sampling: SamplingArgs,
    /// Also write the JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ResidueArgs {
    input: PathBuf,
    /// Index of the base point.
    #[arg(long, default_value_t = 0)]
    point: usize,
    #[arg(long)]
    out: PathBuf,
    /// Compare counts with this set instead of the built-in expectation.
    #[arg(long)]
    compare: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Unsupported(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Unsupported(_) => Failure::Unsupported(e.to_string()),
            e => Failure::Usage(e.to_string()),
        }
    }
}

fn need(v: Option<usize>, flag: &str) -> Result<usize, Failure> {
    v.ok_or_else(|| Failure::Usage(format!("--{flag} is required for this family")))
}

fn build(a: &BuildArgs) -> Result<MMSet, Failure> {
    let field = Field::new(a.p, a.degree)?;
    let set = match a.family {
        Family::Veronese => veronese(need(a.n, "n")?, &field)?,
        Family::Segre => segre(need(a.k, "k")?, need(a.l, "l")?, &field)?,
        Family::Grassmann => grassmann_lines(need(a.m, "m")?, &field)?,
        Family::Halfspin => half_spin(&field).map_err(|e| match e {
            Error::Precondition(m) => Error::Unsupported(m),
            e => e,
        })?,
        Family::E6 => e6_variety(&field)?,
    };
    Ok(set)
}

fn summary(set: &MMSet) -> serde_json::Value {
    json!({
        "family": set.family(),
        "q": set.field().q(),
        "d": set.d(),
        "N": set.ambient_dim(),
        "points": set.len(),
        "symps": set.symps().len(),
    })
}

fn print_summary(format: Format, v: &serde_json::Value) {
    match format {
        Format::Json => println!("{v}"),
        Format::Text => {
            let line: Vec<String> = v.as_object().unwrap().iter().map(|(k, x)| format!("{k}={x}")).collect();
            println!("{}", line.join(" "));
        }
    }
}

fn render_text(r: &VerificationReport) -> String {
    let mut out = format!(
        "{} over GF({}): d={} N={} |X|={} |Xi|={}",
        r.family, r.field.q, r.summary.d, r.summary.n, r.summary.points, r.summary.symps
    );
    if let Some(l) = r.summary.lines {
        out += &format!(" lines={l}");
    }
    out.push('\n');
    if !r.summary.tangent_dims.is_empty() {
        let h: Vec<String> = r.summary.tangent_dims.iter().map(|(d, c)| format!("{d}:{c}")).collect();
        out += &format!("dim T_x histogram {}\n", h.join(" "));
    }
    for c in &r.checks {
        let status = serde_json::to_value(c.status).unwrap();
        let mode = if c.exhaustive { "exhaustive".to_string() } else { format!("seed={} samples={}", c.seed.unwrap_or(0), c.samples.unwrap_or(0)) };
        out += &format!("{:<15} {:<13} checked={} violations={} {mode}\n", c.name, status.as_str().unwrap(), c.checked, c.violations);
        for w in &c.witnesses {
            out += &format!("    witness {}\n", serde_json::to_string(w).unwrap());
        }
        for n in &c.notes {
            out += &format!("    note {n}\n");
        }
    }
    out
}

fn verify(a: &VerifyArgs, format: Format) -> Result<bool, Failure> {
    let set = io::load(&a.input)?;
    let mut opts = VerifyOptions { sampling: a.sampling.sampling(), exhaustive_mm2: a.exhaustive_mm2, ..VerifyOptions::default() };
    if let Some(names) = &a.checks {
        opts.checks = if names.iter().any(|n| n == "all") {
            opts.clone().all_for_type(set.d()).checks
        } else {
            names.iter().map(|n| n.parse()).collect::<Result<_, _>>()?
        };
    }
    let report = mmverify::verify(&set, &opts)?;
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    if let Some(out) = &a.out {
        std::fs::write(out, &json).map_err(Error::from)?;
    }
    match format {
        Format::Json => println!("{json}"),
        Format::Text => print!("{}", render_text(&report)),
    }
    Ok(report.passed())
}

/// The variety a residue should match, when the input is a known family.
fn expected_residue(set: &MMSet) -> Option<mmgeom::Result<MMSet>> {
    let f = set.field();
    Some(match set.family() {
        "e6 E6,1" => half_spin(f),
        "half-spin D5,5" => grassmann_lines(4, f),
        "grassmann G5,1" => segre(1, 3, f),
        "grassmann G4,1" => segre(1, 2, f),
        _ => return None,
    })
}

fn take_residue(a: &ResidueArgs, format: Format) -> Result<bool, Failure> {
    let set = io::load(&a.input)?;
    if a.point >= set.len() {
        return Err(Failure::Usage(format!("--point {} out of range for {} points", a.point, set.len())));
    }
    let graph = Collinearity::new(&set, 0);
    let res = match residue(&graph, a.point) {
        Ok(r) => r,
        Err(Error::Degenerate(m)) => {
            print_summary(format, &json!({ "status": "degenerate", "reason": m }));
            return Ok(false);
        }
        Err(e) => return Err(e.into()),
    };
    drop(graph);
    io::save(&res.set, &a.out)?;
    let expected = match &a.compare {
        Some(p) => Some(io::load(p)?),
        None => expected_residue(&set).transpose()?,
    };
    let limit = Sampling::default().exhaustive_limit;
    let got = Invariants::of(&Collinearity::new(&res.set, limit));
    let mut out = summary(&res.set);
    out["hyperplane_column"] = json!(res.hyperplane_column);
    let mut ok = true;
    if let Some(e) = expected {
        let want = Invariants::of(&Collinearity::new(&e, limit));
        ok = got == want;
        out["expected_family"] = json!(e.family());
        out["matches_expected"] = json!(ok);
    }
    out["lines"] = json!(got.lines);
    out["lines_per_point"] = json!(got.lines_per_point);
    print_summary(format, &out);
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(w) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let outcome = match &cli.command {
        Command::Build(a) => build(a).and_then(|set| {
            io::save(&set, &a.out)?;
            print_summary(cli.format, &summary(&set));
            Ok(true)
        }),
        Command::Verify(a) => verify(a, cli.format),
        Command::Residue(a) => take_residue(a, cli.format),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Unsupported(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}
