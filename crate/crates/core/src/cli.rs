//! The `circletons` command line.
//!
//! Exit codes: 0 success, 1 failed check or I/O error, 2 invalid input,
//! 3 generated curve failed to close.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{ProjectiveLine, Su2Vector};
use crate::circleton::{
    binomial, circleton_curvature_checked, enumerate_multicircletons, make_circleton, CircletonFrame,
    CircletonSpec,
};
use crate::dressing::{residue_estimate, SimpleFactorSpec};
use crate::error::Error;
use crate::export::{self, Format};
use crate::frames::{CircleFrame, ExtendedFrame};
use crate::loopgroup::{
    birkhoff_factorize, dressing_oracle_compare, random_big_cell_loop, spectral_det, symes_map,
    FiniteTypePotential,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NOT_CLOSED: i32 = 3;

/// Default closure tolerance for `gen`.
pub const GEN_CLOSURE_TOL: f64 = 1e-7;
pub const RESIDUE_TOL: f64 = 1e-8;
pub const ORACLE_TOL: f64 = 1e-6;

#[derive(Parser, Debug)]
#[command(name = "circletons", version, about = "Closed curves from dressed multiply wrapped circles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Synthesize a circleton and write its samples.
    Gen(GenArgs),
    /// Run the invariant checks for a circleton.
    Verify(VerifyArgs),
    /// List all multi-circletons of an ω-wrapped circle.
    Enumerate(EnumerateArgs),
    /// Write the closed-form curvature of a single circleton.
    Curvature(CurvatureArgs),
    /// Birkhoff-factorization self-test, or the Symes map of a potential file.
    Oracle(OracleArgs),
}

#[derive(Args, Debug)]
struct SpecArgs {
    /// Wrapping number of the circle.
    #[arg(long)]
    omega: u32,
    /// A single resonance index.
    #[arg(long, conflicts_with = "ks")]
    k: Option<u32>,
    /// Comma-separated resonance indices, strictly increasing.
    #[arg(long, value_delimiter = ',')]
    ks: Vec<u32>,
}

impl SpecArgs {
    fn spec(&self) -> crate::error::Result<CircletonSpec> {
        let ks = match self.k {
            Some(k) => vec![k],
            None => self.ks.clone(),
        };
        CircletonSpec::new(self.omega, ks)
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FormatArg {
    Csv,
    Json,
    Obj,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
            FormatArg::Obj => Format::Obj,
        }
    }
}

#[derive(Args, Debug)]
struct GenArgs {
    #[command(flatten)]
    spec: SpecArgs,
    /// Samples over one period [0, 2πω).
    #[arg(long, default_value_t = 4096)]
    samples: usize,
    /// Output format.
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Exit with status 3 when the closure error reaches this value.
    #[arg(long, default_value_t = GEN_CLOSURE_TOL)]
    closure_tol: f64,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    spec: SpecArgs,
    /// Tolerance for closure and relative bending-energy error.
    #[arg(long, default_value_t = 1e-7)]
    tol: f64,
    /// Samples over one period; defaults to 4096 per 2π.
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    /// Wrapping number of the circle.
    #[arg(long)]
    omega: u32,
    /// Only this number of simple factors.
    #[arg(long)]
    size: Option<u32>,
}

#[derive(Args, Debug)]
struct CurvatureArgs {
    /// Wrapping number of the circle.
    #[arg(long)]
    omega: u32,
    /// Resonance index.
    #[arg(long)]
    k: u32,
    /// Samples over one period [0, 2πω).
    #[arg(long, default_value_t = 4096)]
    samples: usize,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct OracleArgs {
    /// Factorization round trips on seeded random loops plus the dressing comparison.
    #[arg(long, conflicts_with = "potential")]
    selftest: bool,
    /// Potential file for the Symes map.
    #[arg(long, required_unless_present = "selftest")]
    potential: Option<PathBuf>,
    /// Final time for the Symes map.
    #[arg(long, requires = "potential")]
    tmax: Option<f64>,
    /// Samples on [0, tmax).
    #[arg(long, default_value_t = 512)]
    samples: usize,
    /// Radius of the circle C_r; defaults to 2, raised to twice the largest
    /// branch-point modulus when that is larger.
    #[arg(long)]
    radius: Option<f64>,
    /// Truncation order N of the Laurent loops.
    #[arg(long, default_value_t = 64)]
    modes: usize,
    /// Seed for the self-test loops.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file for the potential curve; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Exit code for a library error.
fn code_for(e: &Error) -> i32 {
    match e {
        Error::InvalidSpec(_)
        | Error::InvalidArgument(_)
        | Error::InvalidPotential { .. }
        | Error::NonFinite(_) => EXIT_INVALID,
        _ => EXIT_FAILED,
    }
}

fn fail(e: &Error) -> i32 {
    eprintln!("error: {e}");
    code_for(e)
}

fn emit(out: &Option<PathBuf>, text: &str) -> i32 {
    let res = match out {
        Some(p) => std::fs::write(p, text.as_bytes()).map_err(|e| format!("{}: {e}", p.display())),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| e.to_string()),
    };
    match res {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: cannot write output: {e}");
            EXIT_FAILED
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match cli.command {
        Command::Gen(a) => cmd_gen(&a),
        Command::Verify(a) => cmd_verify(&a),
        Command::Enumerate(a) => cmd_enumerate(&a),
        Command::Curvature(a) => cmd_curvature(&a),
        Command::Oracle(a) => cmd_oracle(&a),
    }
}

fn cmd_gen(a: &GenArgs) -> i32 {
    let spec = match a.spec.spec() {
        Ok(s) => s,
        Err(e) => return fail(&e),
    };
    let curve = match make_circleton(&spec, a.samples) {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    let code = emit(&a.out, &export::render(&curve, a.format.into()));
    if code != EXIT_OK {
        return code;
    }
    let closure = curve.meta.closure_error.unwrap_or(f64::NAN);
    let summary = format!(
        "ks={:?} omega={} closure_error={:.3e} bending_energy={:.10} peaks={}",
        spec.ks(),
        spec.omega(),
        closure,
        curve.meta.bending_energy.unwrap_or(f64::NAN),
        curve.meta.peak_count.unwrap_or(0)
    );
    if a.out.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    if !(closure < a.closure_tol) {
        eprintln!("error: closure error {closure:.3e} exceeds {:.0e}", a.closure_tol);
        return EXIT_NOT_CLOSED;
    }
    EXIT_OK
}

/// One line of a verification report.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    /// Human-readable acceptance condition.
    pub condition: String,
    pub passed: bool,
}

impl Check {
    fn below(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self {
            name: name.into(),
            value,
            condition: format!("< {limit:.0e}"),
            passed: value < limit,
        }
    }
}

/// Radius of a residue contour around `center` that stays clear of 0 and of
/// the other singularities ±α.
fn contour_radius(center: Complex64, alphas: &[Complex64]) -> f64 {
    let mut d = center.norm();
    for &a in alphas {
        for s in [a, -a] {
            let dist = (s - center).norm();
            if dist > 1e-12 {
                d = d.min(dist);
            }
        }
    }
    (0.25 * d).min(0.05)
}

/// Invariant checks for a circleton: closure, bending energy, residues at the
/// singularities and the Birkhoff oracle, plus curvature bounds and peak count
/// for single circletons.
pub fn verify_circleton(spec: &CircletonSpec, samples: usize, tol: f64) -> crate::error::Result<Vec<Check>> {
    let curve = make_circleton(spec, samples)?;
    let omega = spec.omega();
    let mut checks = vec![Check::below("closure", curve.meta.closure_error.unwrap_or(f64::NAN), tol)];
    let target = 2.0 * std::f64::consts::PI * omega as f64;
    let energy = curve.meta.bending_energy.unwrap_or(f64::NAN);
    checks.push(Check::below("energy", ((energy - target) / target).abs(), tol));

    if let [k] = spec.ks() {
        let lo = curve.kappa.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = curve.kappa.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        checks.push(Check {
            name: "bounds".into(),
            value: lo,
            condition: format!("min {lo:.6} > -1, max {hi:.6} < 3"),
            passed: lo > -1.0 && hi < 3.0,
        });
        let peaks = curve.meta.peak_count.unwrap_or(0);
        checks.push(Check {
            name: "peaks".into(),
            value: peaks as f64,
            condition: format!("= {k}"),
            passed: peaks == *k as usize,
        });
    }

    if !spec.ks().is_empty() {
        let alphas = spec.alphas();
        let frame = CircletonFrame::new(spec);
        let mut worst = 0.0f64;
        for &t in &[0.5, 1.0, 2.0] {
            for &a in &alphas {
                for center in [a, -a] {
                    let r = contour_radius(center, &alphas);
                    let res = residue_estimate(|l| frame.frame(l, t), center, r, 64)?;
                    worst = worst.max(res.norm());
                }
            }
        }
        checks.push(Check::below("residue", worst, RESIDUE_TOL));

        let (last, rest) = spec.ks().split_last().expect("non-empty");
        let base = CircletonSpec::new(omega, rest.to_vec())?;
        let factor = SimpleFactorSpec::new(ProjectiveLine::e1(), *alphas.last().expect("non-empty"))?;
        debug_assert_eq!(spec.ks().last(), Some(last));
        let base_frame = CircletonFrame::new(&base);
        let mut worst = 0.0f64;
        for &t in &[0.5, 1.0, 2.0] {
            worst = worst.max(dressing_oracle_compare(&base_frame, &factor, t, 2.0, 64)?);
        }
        checks.push(Check::below("oracle", worst, ORACLE_TOL));
    }
    Ok(checks)
}

fn cmd_verify(a: &VerifyArgs) -> i32 {
    let spec = match a.spec.spec() {
        Ok(s) => s,
        Err(e) => return fail(&e),
    };
    if !(a.tol > 0.0) {
        return fail(&Error::InvalidArgument(format!("tolerance must be positive, got {}", a.tol)));
    }
    let samples = a.samples.unwrap_or(4096 * spec.omega() as usize);
    let checks = match verify_circleton(&spec, samples, a.tol) {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    println!("verify {spec} ({samples} samples, tol {:.0e})", a.tol);
    let mut all = true;
    for c in &checks {
        all &= c.passed;
        println!(
            "  {:<8} {:>12.4e}  {:<44} {}",
            c.name,
            c.value,
            c.condition,
            if c.passed { "PASS" } else { "FAIL" }
        );
    }
    if all {
        println!("all checks passed");
        EXIT_OK
    } else {
        println!("some checks failed");
        EXIT_FAILED
    }
}

fn cmd_enumerate(a: &EnumerateArgs) -> i32 {
    if a.omega < 1 {
        return fail(&Error::InvalidArgument("wrapping number ω must be at least 1".into()));
    }
    let sizes: Vec<u32> = match a.size {
        Some(s) => vec![s],
        None => (0..a.omega).collect(),
    };
    let mut out = String::new();
    for size in sizes {
        let specs = match enumerate_multicircletons(a.omega, size) {
            Ok(s) => s,
            Err(e) => return fail(&e),
        };
        for s in &specs {
            let _ = writeln!(out, "{s}");
        }
        eprintln!(
            "size {size}: {} (C({}, {size}) = {})",
            specs.len(),
            a.omega - 1,
            binomial(a.omega as u64 - 1, size as u64)
        );
    }
    emit(&None, &out)
}

fn cmd_curvature(a: &CurvatureArgs) -> i32 {
    if a.samples < 2 {
        return fail(&Error::InvalidArgument("need at least 2 samples".into()));
    }
    let period = 2.0 * std::f64::consts::PI * a.omega as f64;
    let mut out = String::from("t,kappa\n");
    for i in 0..a.samples {
        let t = period * i as f64 / a.samples as f64;
        match circleton_curvature_checked(a.k, a.omega, t) {
            Ok(k) => {
                let _ = writeln!(out, "{t:.16e},{k:.16e}");
            }
            Err(e) => return fail(&e),
        }
    }
    emit(&a.out, &out)
}

/// Largest deviation of `points` from the circle through three well-spread
/// samples, or `None` when the samples are collinear.
pub fn circle_fit_residual(points: &[Su2Vector]) -> Option<f64> {
    let a = *points.first()?;
    let b = *points.iter().max_by(|p, q| p.dist(&a).total_cmp(&q.dist(&a)))?;
    let u = b - a;
    let c = *points
        .iter()
        .max_by(|p, q| u.cross(&(**p - a)).norm().total_cmp(&u.cross(&(**q - a)).norm()))?;
    let v = c - a;
    let w = u.cross(&v);
    let w2 = w.dot(&w);
    if w2 < 1e-24 * (1.0 + u.dot(&u) * v.dot(&v)) {
        return None;
    }
    let center = a + (v.cross(&w).scale(u.dot(&u)) + w.cross(&u).scale(v.dot(&v))).scale(0.5 / w2);
    let radius = center.dist(&a);
    let normal = w.scale(1.0 / w2.sqrt());
    Some(
        points
            .iter()
            .map(|p| (p.dist(&center) - radius).abs().max((*p - center).dot(&normal).abs()))
            .fold(0.0, f64::max),
    )
}

fn cmd_oracle(a: &OracleArgs) -> i32 {
    if a.modes < 4 {
        return fail(&Error::InvalidArgument("need at least 4 modes".into()));
    }
    if let Some(r) = a.radius {
        if !(r > 0.0 && r.is_finite()) {
            return fail(&Error::InvalidArgument(format!("radius must be positive, got {r}")));
        }
    }
    if a.selftest {
        oracle_selftest(a)
    } else {
        oracle_potential(a)
    }
}

fn oracle_selftest(a: &OracleArgs) -> i32 {
    let radius = a.radius.unwrap_or(2.0);
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut residual = 0.0f64;
    let mut known = 0.0f64;
    let mut cond = 0.0f64;
    const LOOPS: usize = 20;
    for _ in 0..LOOPS {
        let run = random_big_cell_loop(&mut rng, radius, a.modes).and_then(|(g, p, m)| {
            let f = birkhoff_factorize(&g)?;
            Ok((f.residual, f.plus.max_deviation(&p)?.max(f.minus.max_deviation(&m)?), f.condition))
        });
        match run {
            Ok((r, k, c)) => {
                residual = residual.max(r);
                known = known.max(k);
                cond = cond.max(c);
            }
            Err(e) => return fail(&e),
        }
    }
    let s = SimpleFactorSpec::new(ProjectiveLine::e1(), Complex64::new(0.0, 3f64.sqrt() / 2.0))
        .expect("valid factor");
    let dressing = match dressing_oracle_compare(&CircleFrame { kappa: 1.0 }, &s, 1.0, radius.max(2.0), a.modes) {
        Ok(d) => d,
        Err(e) => return fail(&e),
    };
    let ok = residual < 1e-8 && known < 1e-8 && dressing < ORACLE_TOL;
    println!("oracle selftest (seed {}, r = {radius}, N = {})", a.seed, a.modes);
    println!("  random big-cell loops        {LOOPS}");
    println!("  max recomposition residual   {residual:.3e}");
    println!("  max factor deviation         {known:.3e}");
    println!("  max condition estimate       {cond:.3e}");
    println!("  (1,2) dressing vs Birkhoff   {dressing:.3e}");
    println!("{}", if ok { "selftest passed" } else { "selftest FAILED" });
    if ok {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}

fn oracle_potential(a: &OracleArgs) -> i32 {
    let path = a.potential.as_ref().expect("clap enforces --potential");
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", path.display());
            return EXIT_FAILED;
        }
    };
    let xi = match FiniteTypePotential::from_json(&text) {
        Ok(x) => x,
        Err(e) => return fail(&e),
    };
    let Some(tmax) = a.tmax.filter(|t| t.is_finite() && *t > 0.0) else {
        return fail(&Error::InvalidArgument("potential mode needs a positive --tmax".into()));
    };
    if a.samples < 3 {
        return fail(&Error::InvalidArgument("need at least 3 samples".into()));
    }
    let branch = spectral_det(&xi)
        .map(|s| s.branch_points.iter().map(|b| b.norm()).fold(0.0, f64::max))
        .unwrap_or(0.0);
    let radius = a.radius.unwrap_or_else(|| 2.0f64.max(2.0 * branch));
    let mut out = String::from("t,x,y,z\n");
    let mut points = Vec::with_capacity(a.samples);
    for i in 0..a.samples {
        let t = tmax * i as f64 / a.samples as f64;
        let p = match symes_map(&xi, t, radius, a.modes) {
            Ok(p) => p.point,
            Err(e @ Error::Truncation { .. }) => {
                eprintln!("hint: at t = {t:.4} on r = {radius}; a smaller --radius or more --modes may help");
                return fail(&e);
            }
            Err(e) => return fail(&e),
        };
        let _ = writeln!(out, "{t:.16e},{:.16e},{:.16e},{:.16e}", p.x, p.y, p.z);
        points.push(p);
    }
    let code = emit(&a.out, &out);
    if code != EXIT_OK {
        return code;
    }
    let report = match circle_fit_residual(&points) {
        Some(r) => format!("circle fit residual {r:.3e}"),
        None => "samples are collinear (a line)".to_string(),
    };
    let msg = format!("symes map: genus {}, r = {radius}, {} samples, {report}", xi.genus(), a.samples);
    if a.out.is_some() {
        println!("{msg}");
    } else {
        eprintln!("{msg}");
    }
    EXIT_OK
}
