//! Command-line front end: `spectrum`, `resonance`, `scatter`, `verify`.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 solver failure.
//! On a solver failure every row is still written; the failures are listed
//! on stderr.

pub mod config;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use crate::bs3d::{find_eigenvalues_3d_with, find_resonance_3d_with};
use crate::error::Error;
use crate::exec;
use crate::resonance2d::{
    find_resonance_coupling_break_with, find_resonance_distance_break_with, find_resonance_with, Pole,
};
use crate::scattering2d::{amplitudes_with, lineshape_peak};
use crate::specfun::point_only_eigenvalue;
use crate::spectrum2d::{find_eigenvalues_with, mirror_pair, symmetric_pair_spectrum_with, SpectralResult};
use crate::system::{Dimension, SystemSpec};
use crate::verify::{criteria_for, run_suite, VerifyOptions};

use config::{Format, Parameter, RunConfig};
use output::{Cell, Results};

#[derive(Debug, Parser)]
#[command(name = "leakywire", version, about = "Spectra, resonances and scattering for a leaky wire with point interactions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Discrete (and embedded) eigenvalues per sweep point.
    Spectrum(Common),
    /// Second-sheet resonance poles per sweep point.
    Resonance {
        #[command(flatten)]
        common: Common,
        /// Real part of the Newton seed.
        #[arg(long, requires = "seed_im", allow_negative_numbers = true)]
        seed_re: Option<f64>,
        /// Imaginary part of the Newton seed.
        #[arg(long, requires = "seed_re", allow_negative_numbers = true)]
        seed_im: Option<f64>,
    },
    /// Reflection and transmission amplitudes on the open channel (d = 2).
    Scatter(Common),
    /// Acceptance checks for the configured dimension.
    Verify(Common),
}

#[derive(Debug, Args)]
struct Common {
    /// Run configuration (TOML, or JSON with a `.json` extension).
    #[arg(long)]
    config: PathBuf,
    /// Output file; stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Worker threads for sweep points.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    jobs: Option<u32>,
    /// Root and pole tolerance (overrides the config).
    #[arg(long)]
    tol: Option<f64>,
}

/// A usage or configuration problem (exit 1).
#[derive(Debug)]
struct Usage(String);

impl From<Error> for Usage {
    fn from(e: Error) -> Self {
        Usage(e.to_string())
    }
}

struct Outcome {
    results: Results,
    failures: Vec<String>,
    /// Extra human-readable lines for stderr.
    notes: Vec<String>,
}

impl Outcome {
    fn new(results: Results) -> Self {
        Self { results, failures: Vec::new(), notes: Vec::new() }
    }
}

/// Entry point for the binary.
pub fn run() -> std::process::ExitCode {
    let code = execute(std::env::args_os(), &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::ExitCode::from(code)
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn execute<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = stderr.write_all(text.as_bytes());
                    1
                }
            };
        }
    };
    match dispatch(cli, stdout, stderr) {
        Ok(code) => code,
        Err(Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            1
        }
    }
}

fn dispatch(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<u8, Usage> {
    let (common, seed) = match &cli.command {
        Command::Spectrum(c) | Command::Scatter(c) | Command::Verify(c) => (c, None),
        Command::Resonance { common, seed_re, seed_im } => {
            (common, seed_re.zip(*seed_im).map(|(re, im)| Complex64::new(re, im)))
        }
    };
    let mut cfg = RunConfig::from_path(&common.config)?;
    if let Some(tol) = common.tol {
        if !(tol > 0.0) || !tol.is_finite() {
            return Err(Usage(format!("--tol must be positive, got {tol}")));
        }
        cfg.solver.root_tol = tol;
        cfg.solver.pole_tol = tol;
    }
    let path = common.output.clone().or_else(|| cfg.output.path.clone());
    let format = common.format.or(cfg.output.format).unwrap_or_else(|| match &path {
        Some(p) if p.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) => Format::Json,
        _ => Format::Csv,
    });

    let outcome = in_pool(common.jobs, || match &cli.command {
        Command::Spectrum(_) => cmd_spectrum(&cfg),
        Command::Resonance { .. } => cmd_resonance(&cfg, seed),
        Command::Scatter(_) => cmd_scatter(&cfg, format),
        Command::Verify(_) => cmd_verify(&cfg),
    })??;

    let text = outcome.results.render(format)?;
    match &path {
        Some(p) => std::fs::write(p, text).map_err(|e| Usage(format!("cannot write {}: {e}", p.display())))?,
        None => stdout.write_all(text.as_bytes()).map_err(|e| Usage(format!("cannot write to stdout: {e}")))?,
    }
    for n in &outcome.notes {
        let _ = writeln!(stderr, "{n}");
    }
    if outcome.failures.is_empty() {
        Ok(0)
    } else {
        let _ = writeln!(stderr, "{} failure(s):", outcome.failures.len());
        for f in &outcome.failures {
            let _ = writeln!(stderr, "  {f}");
        }
        Ok(2)
    }
}

#[cfg(feature = "parallel")]
fn in_pool<R: Send>(jobs: Option<u32>, f: impl FnOnce() -> R + Send) -> Result<R, Usage> {
    match jobs {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n as usize)
                .build()
                .map_err(|e| Usage(format!("cannot start {n} worker threads: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

#[cfg(not(feature = "parallel"))]
fn in_pool<R: Send>(_jobs: Option<u32>, f: impl FnOnce() -> R + Send) -> Result<R, Usage> {
    Ok(f())
}

fn sweep_column(cfg: &RunConfig) -> Vec<String> {
    cfg.sweep.iter().map(|s| s.parameter.column().to_string()).collect()
}

fn with_sweep(value: Option<f64>, mut rest: Vec<Cell>) -> Vec<Cell> {
    if let Some(v) = value {
        rest.insert(0, Cell::Float(v));
    }
    rest
}

fn reject_pair_parameters(cfg: &RunConfig, command: &str) -> Result<(), Usage> {
    match cfg.sweep.map(|s| s.parameter) {
        Some(p @ (Parameter::Q | Parameter::Delta)) => Err(Usage(format!(
            "sweep parameter {p:?} applies to `resonance` on a mirror pair, not to `{command}`"
        ))),
        _ => Ok(()),
    }
}

fn label(value: Option<f64>) -> String {
    value.map_or_else(|| "single point".to_string(), |v| format!("sweep value {v}"))
}

fn cmd_spectrum(cfg: &RunConfig) -> Result<Outcome, Usage> {
    reject_pair_parameters(cfg, "spectrum")?;
    let points = cfg.points()?;
    let opts = cfg.solver.spectrum();
    let solve = |spec: &SystemSpec| -> crate::Result<SpectralResult> {
        match spec.dimension {
            Dimension::Two => find_eigenvalues_with(spec, &opts),
            Dimension::Three => find_eigenvalues_3d_with(spec, &opts),
        }
    };
    let solved = exec::map(&points, |(_, spec)| solve(spec));

    let mut columns = sweep_column(cfg);
    columns.extend(
        [
            "kind",
            "index",
            "kappa [1/length]",
            "threshold_offset [1/length]",
            "energy [1/length^2]",
            "multiplicity",
            "residual [1]",
            "resolved",
            "error",
        ]
        .map(String::from),
    );
    let mut out = Outcome::new(Results::new("spectrum", columns));
    for ((value, spec), res) in points.iter().zip(solved) {
        match res {
            Ok(r) => {
                for (i, root) in r.roots.iter().enumerate() {
                    out.results.push(with_sweep(
                        *value,
                        vec![
                            "isolated".into(),
                            i.into(),
                            root.kappa.into(),
                            root.threshold_offset.into(),
                            root.energy.into(),
                            root.multiplicity.into(),
                            root.residual.into(),
                            root.resolved.into(),
                            Cell::Null,
                        ],
                    ));
                    if !root.resolved {
                        out.notes.push(format!(
                            "{}: root {i} lies closer to the threshold than the finest sampled offset; \
                             reported at κ = α/2",
                            label(*value)
                        ));
                    }
                }
                for (i, e) in r.embedded.iter().flatten().enumerate() {
                    out.results.push(with_sweep(
                        *value,
                        vec![
                            "embedded".into(),
                            i.into(),
                            e.kappa.into(),
                            (e.kappa - 0.5 * spec.alpha).into(),
                            e.energy.into(),
                            1usize.into(),
                            Cell::Null,
                            true.into(),
                            Cell::Null,
                        ],
                    ));
                }
            }
            Err(e) => {
                out.failures.push(format!("{}: {e}", label(*value)));
                let mut row = vec![Cell::from("failed")];
                row.extend(std::iter::repeat_n(Cell::Null, 7));
                row.push(Cell::Text(e.to_string()));
                out.results.push(with_sweep(*value, row));
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy)]
enum ResonanceMode {
    Single2D,
    Single3D,
    CouplingBreak,
    DistanceBreak,
}

fn resonance_mode(cfg: &RunConfig, base: &SystemSpec, seed: Option<Complex64>) -> Result<ResonanceMode, Usage> {
    let parameter = cfg.sweep.map(|s| s.parameter);
    let pair_parameter = matches!(parameter, Some(Parameter::Q | Parameter::Delta));
    match (base.dimension, base.n()) {
        (Dimension::Two, 2) if pair_parameter => {
            let Some((alpha, beta, a)) = mirror_pair(base) else {
                return Err(Usage("q and delta sweeps need a mirror pair (l, a), (l, −a) with equal couplings".into()));
            };
            if seed.is_some() {
                return Err(Usage("q and delta sweeps are seeded at the embedded level; drop --seed-re/--seed-im".into()));
            }
            let pair = symmetric_pair_spectrum_with(alpha, beta, a, &cfg.solver.spectrum())?;
            if pair.embedded.is_none() {
                return Err(Usage(format!(
                    "the mirror pair (α = {alpha}, β = {beta}, a = {a}) has no embedded level to perturb"
                )));
            }
            Ok(if parameter == Some(Parameter::Q) { ResonanceMode::CouplingBreak } else { ResonanceMode::DistanceBreak })
        }
        (_, 1) if pair_parameter => Err(Usage("q and delta sweeps need a mirror pair of sites".into())),
        (d, 1) => {
            if seed.is_none() {
                for (value, spec) in cfg.points()? {
                    let eps = point_only_eigenvalue(spec.sites[0].beta, d);
                    let threshold = spec.threshold();
                    if !eps.is_some_and(|e| e > threshold && e < 0.0) {
                        return Err(Usage(format!(
                            "{}: the point-only level {eps:?} is not inside (−α²/4, 0) = ({threshold}, 0); \
                             supply --seed-re and --seed-im",
                            label(value)
                        )));
                    }
                }
            }
            Ok(if d == Dimension::Two { ResonanceMode::Single2D } else { ResonanceMode::Single3D })
        }
        _ => Err(Usage(
            "resonance supports one site (d = 2 or 3) or a 2D mirror pair swept over q or delta".into(),
        )),
    }
}

fn pole_cells(p: &Pole) -> Vec<Cell> {
    vec![p.z.re.into(), p.z.im.into(), p.residual.into(), p.iterations.into(), p.width_resolved.into()]
}

fn cmd_resonance(cfg: &RunConfig, seed: Option<Complex64>) -> Result<Outcome, Usage> {
    let base = cfg.system()?;
    let mode = resonance_mode(cfg, &base, seed)?;
    let opts = cfg.solver.resonance();

    let mut columns = sweep_column(cfg);
    columns.extend(
        ["re_z [1/length^2]", "im_z [1/length^2]", "residual [1]", "iterations", "width_resolved"].map(String::from),
    );
    let extra: &[&str] = match mode {
        ResonanceMode::Single2D | ResonanceMode::Single3D => &[],
        ResonanceMode::CouplingBreak => &[
            "mu2 [1/length^2]",
            "measured_linear [1/length^2]",
            "predicted_linear [1/length^2]",
            "measured_quadratic [1/length^2]",
            "predicted_quadratic [1/length^2]",
        ],
        ResonanceMode::DistanceBreak => &[
            "mu2 [1/length^2]",
            "measured_derivative [1/length^3]",
            "predicted_derivative [1/length^3]",
            "iota [1/length^2]",
            "iota_direct [1/length^2]",
        ],
    };
    columns.extend(extra.iter().map(|s| s.to_string()));
    columns.push("error".into());
    let width = columns.len() - usize::from(cfg.sweep.is_some());

    let points = cfg.points()?;
    let pair = mirror_pair(&base);
    let rows = exec::map(&points, |(value, spec)| -> crate::Result<Vec<Cell>> {
        let site = &spec.sites[0];
        let mut row = match mode {
            ResonanceMode::Single2D => {
                pole_cells(&find_resonance_with(spec.alpha, site.beta, site.transverse().abs(), seed, &opts)?)
            }
            ResonanceMode::Single3D => {
                pole_cells(&find_resonance_3d_with(spec.alpha, site.beta, site.transverse().abs(), seed, &opts)?)
            }
            ResonanceMode::CouplingBreak => {
                let (alpha, beta, a) = pair.expect("mode checked");
                let q = value.expect("q sweep");
                let b = find_resonance_coupling_break_with(alpha, beta, q, a, &opts)?;
                let mut r = pole_cells(&b.pole);
                r.extend([b.mu2, b.measured_linear, b.predicted_linear, b.measured_quadratic, b.predicted_quadratic].map(Cell::from));
                r
            }
            ResonanceMode::DistanceBreak => {
                let (alpha, beta, a) = pair.expect("mode checked");
                let delta = value.expect("delta sweep");
                let b = find_resonance_distance_break_with(alpha, beta, a, delta, &opts)?;
                let mut r = pole_cells(&b.pole);
                r.extend([b.mu2.into(), b.measured_derivative.into(), b.predicted_derivative.into(), b.iota.into(), b.iota_direct.into()]);
                r
            }
        };
        row.push(Cell::Null);
        Ok(row)
    });

    let mut out = Outcome::new(Results::new("resonance", columns));
    for ((value, _), row) in points.iter().zip(rows) {
        let row = row.unwrap_or_else(|e| {
            out.failures.push(format!("{}: {e}", label(*value)));
            let mut r = vec![Cell::Null; width - 1];
            r.push(Cell::Text(e.to_string()));
            r
        });
        out.results.push(with_sweep(*value, row));
    }
    Ok(out)
}

/// `count` energies evenly inside the open channel, endpoints excluded.
fn default_channel_grid(alpha: f64, count: usize) -> Vec<f64> {
    let t = 0.25 * alpha * alpha;
    (1..=count).map(|i| -t + t * i as f64 / (count + 1) as f64).collect()
}

fn cmd_scatter(cfg: &RunConfig, format: Format) -> Result<Outcome, Usage> {
    let base = cfg.system()?;
    if base.dimension != Dimension::Two {
        return Err(Usage("scattering implemented for d=2 only".into()));
    }
    if base.n() != 1 {
        return Err(Usage(format!("scattering is implemented for a single site, got {} sites", base.n())));
    }
    reject_pair_parameters(cfg, "scatter")?;
    let scatter = cfg.scatter.clone().unwrap_or(config::ScatterConfig { grid: None, locate_peak: false });
    if scatter.locate_peak && cfg.sweep.is_some() {
        return Err(Usage("scatter.locate_peak needs a single point (no sweep)".into()));
    }

    let points = cfg.points()?;
    let mut tasks = Vec::new();
    for (value, spec) in &points {
        let lambdas = match scatter.grid {
            Some(g) => g.values()?,
            None => default_channel_grid(spec.alpha, 200),
        };
        let threshold = spec.threshold();
        if let Some(bad) = lambdas.iter().find(|l| !(**l > threshold && **l < 0.0)) {
            return Err(Usage(format!(
                "{}: λ = {bad} is not strictly inside (−α²/4, 0) = ({threshold}, 0)",
                label(*value)
            )));
        }
        tasks.extend(lambdas.into_iter().map(|l| (*value, spec, l)));
    }

    let quad = cfg.solver.quad();
    let rows = exec::map(&tasks, |(_, spec, l)| {
        let site = &spec.sites[0];
        amplitudes_with(spec.alpha, site.beta, site.transverse(), *l, &quad)
    });

    let mut columns = sweep_column(cfg);
    columns.extend(
        ["lambda [1/length^2]", "re_r", "im_r", "abs_r2", "abs_t2", "unitarity_defect", "error"].map(String::from),
    );
    let mut out = Outcome::new(Results::new("scatter", columns));
    for ((value, _, l), amp) in tasks.iter().zip(rows) {
        let row = match amp {
            Ok(s) => vec![
                Cell::Float(*l),
                s.reflection.re.into(),
                s.reflection.im.into(),
                s.reflection.norm_sqr().into(),
                s.transmission.norm_sqr().into(),
                s.unitarity_defect().into(),
                Cell::Null,
            ],
            Err(e) => {
                out.failures.push(format!("{}, λ = {l}: {e}", label(*value)));
                let mut r = vec![Cell::Float(*l)];
                r.extend(std::iter::repeat_n(Cell::Null, 5));
                r.push(Cell::Text(e.to_string()));
                r
            }
        };
        out.results.push(with_sweep(*value, row));
    }

    if scatter.locate_peak {
        let site = &base.sites[0];
        let (alpha, beta, a) = (base.alpha, site.beta, site.transverse().abs());
        let located = find_resonance_with(alpha, beta, a, None, &cfg.solver.resonance()).and_then(|p| {
            let w = p.z.im.abs().max(1e-12);
            let lo = (p.z.re - 10.0 * w).max(base.threshold() * (1.0 - 1e-12));
            let hi = (p.z.re + 10.0 * w).min(-1e-300);
            Ok((p, lineshape_peak(alpha, beta, a, lo, hi)?))
        });
        match located {
            Ok((p, peak)) => {
                out.results.summary.insert("peak_lambda".into(), peak);
                out.results.summary.insert("pole_re".into(), p.z.re);
                out.results.summary.insert("pole_im".into(), p.z.im);
                if format == Format::Csv {
                    out.notes.push(format!("peak of |R|² at λ = {peak:?}; pole z = {:?} {:+?}i", p.z.re, p.z.im));
                }
            }
            Err(e) => out.failures.push(format!("peak locator: {e}")),
        }
    }
    Ok(out)
}

fn cmd_verify(cfg: &RunConfig) -> Result<Outcome, Usage> {
    let spec = cfg.system()?;
    let opts = VerifyOptions { spectrum: cfg.solver.spectrum(), resonance: cfg.solver.resonance() };
    let manifest = run_suite(&criteria_for(spec.dimension), &opts);

    let columns = ["id", "title", "passed", "failed_checks"].map(String::from).to_vec();
    let mut out = Outcome::new(Results::new("verify", columns));
    for c in &manifest.criteria {
        let failed: Vec<String> =
            c.checks.iter().filter(|k| !k.passed).map(|k| format!("{} ({})", k.label, k.detail)).collect();
        out.results.push(vec![
            Cell::Int(c.id.into()),
            c.title.as_str().into(),
            c.passed.into(),
            Cell::Text(failed.join("; ")),
        ]);
        out.notes.push(c.summary_line());
        if !c.passed {
            out.failures.push(format!("criterion {} ({}): {}", c.id, c.title, failed.join("; ")));
        }
    }
    Ok(out)
}
