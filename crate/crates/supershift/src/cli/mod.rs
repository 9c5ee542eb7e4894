//! The `supershift` command line: `evolve`, `supershift`, `green-table`, `selfcheck` and
//! `defaults`.
//!
//! Exit codes: 0 success, 1 self-check failure, 2 bad configuration or flags,
//! 3 unsupported configuration, 4 some quadrature did not converge (output is still written).

pub mod checks;
pub mod config;

use crate::evolution::EvolutionError;
use crate::superosc::PlaneWaves;
use crate::C64;
use checks::Level;
use clap::{Args, Parser, Subcommand};
use config::{Axis, ConfigError, InitialKind, RunConfig, Variant};
use rayon::prelude::*;
use std::ffi::OsString;
use std::io::Write;

#[derive(Debug, Parser)]
#[command(name = "supershift", version, about = "Rotated-contour Schrödinger evolution on the punctured line")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ψ(t, x) on the configured grid as CSV.
    Evolve(RunArgs),
    /// Supershift errors sup|Ψ(F_n) − Ψ(e^{iκ·})| over a compact, per n.
    Supershift(RunArgs),
    /// G, G̃ and the Schrödinger residual of G over (t, x, z).
    GreenTable(RunArgs),
    /// Run the verification suite.
    Selfcheck {
        /// fast or full.
        #[arg(long, default_value = "fast")]
        level: String,
        /// Also write the JSON-lines report here.
        #[arg(long)]
        json: Option<String>,
        /// Comma-separated check ids; runs these regardless of level.
        #[arg(long, value_delimiter = ',')]
        only: Option<Vec<u32>>,
    },
    /// Print the default configuration.
    Defaults,
}

/// Flags override the matching keys of `--config`.
#[derive(Debug, Default, Args)]
pub struct RunArgs {
    #[arg(long, short)]
    pub config: Option<String>,
    #[arg(long, value_enum)]
    pub variant: Option<Variant>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha_re: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha_im: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta_re: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta_im: Option<f64>,
    #[arg(long, value_enum)]
    pub kind: Option<InitialKind>,
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub rel_tol: Option<f64>,
    /// Comma-separated times; `supershift` uses the first.
    #[arg(long, value_delimiter = ',')]
    pub t: Option<Vec<f64>>,
    /// Comma-separated positions.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub x: Option<Vec<f64>>,
    /// Comma-separated orders for `supershift`.
    #[arg(long, value_delimiter = ',')]
    pub n_seq: Option<Vec<usize>>,
    #[arg(long, allow_hyphen_values = true)]
    pub kappa: Option<f64>,
    #[arg(long, short)]
    pub output: Option<String>,
}

impl RunArgs {
    pub fn resolve(&self) -> Result<RunConfig, ConfigError> {
        let mut c = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        let p = &mut c.potential;
        set(&mut p.variant, self.variant);
        set(&mut p.lambda, self.lambda);
        set(&mut p.phi, self.phi);
        set(&mut p.alpha_re, self.alpha_re);
        set(&mut p.alpha_im, self.alpha_im);
        set(&mut p.beta_re, self.beta_re);
        set(&mut p.beta_im, self.beta_im);
        set(&mut c.initial.kind, self.kind);
        set(&mut c.initial.k, self.k);
        set(&mut c.initial.n, self.n);
        set(&mut c.contour.theta, self.theta);
        set(&mut c.quadrature.rel_tol, self.rel_tol);
        set(&mut c.supershift.kappa, self.kappa);
        if let Some(t) = &self.t {
            c.grid.t = Axis::List(t.clone());
            c.supershift.t = t.first().copied().unwrap_or(f64::NAN);
        }
        if let Some(x) = &self.x {
            c.grid.x = Axis::List(x.clone());
        }
        if let Some(n) = &self.n_seq {
            c.supershift.n_seq = n.clone();
        }
        if let Some(o) = &self.output {
            c.output.path = Some(o.clone());
        }
        Ok(c)
    }
}

fn set<T: Copy>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

/// 17 significant digits, so values survive a text round trip.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn row(cells: &[String]) -> String {
    let mut s = cells.join(",");
    s.push('\n');
    s
}

fn emit(path: &Option<String>, text: &str) -> Result<(), ConfigError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| ConfigError::Io { path: p.clone(), source }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(|source| ConfigError::Io { path: "<stdout>".into(), source })
        }
    }
}

fn fail(e: &ConfigError) -> i32 {
    eprintln!("error: {e}");
    e.exit_code()
}

fn runtime_code(e: &EvolutionError) -> i32 {
    match e {
        EvolutionError::Quadrature { .. } => 4,
        e if config::is_capability(e) => 3,
        _ => 2,
    }
}

/// CSV of Ψ; rows t-major.
pub fn cmd_evolve(c: &RunConfig) -> i32 {
    let (problem, (ts, xs)) = match c.problem().and_then(|p| Ok((p, c.evolve_grid()?))) {
        Ok(v) => v,
        Err(e) => return fail(&e),
    };
    let field = match problem.evolve_grid(&ts, &xs) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return runtime_code(&e);
        }
    };
    let mut text = String::from("t,x,psi_re,psi_im,psi_abs,psi_arg,converged\n");
    for (it, &t) in ts.iter().enumerate() {
        for (ix, &x) in xs.iter().enumerate() {
            let v = field.get(it, ix);
            let z = v.value;
            text += &row(&[fmt_f64(t), fmt_f64(x), fmt_f64(z.re), fmt_f64(z.im), fmt_f64(z.norm()), fmt_f64(z.arg()), v.converged.to_string()]);
        }
    }
    if let Err(e) = emit(&c.output.path, &text) {
        return fail(&e);
    }
    if field.meta.unconverged > 0 {
        eprintln!("{} of {} cells did not converge", field.meta.unconverged, field.values.len());
        return 4;
    }
    0
}

pub fn cmd_supershift(c: &RunConfig) -> i32 {
    let compact = match c.compact() {
        Ok(v) => v,
        Err(e) => return fail(&e),
    };
    let problem = match c.problem() {
        Ok(p) => p,
        Err(e) => return fail(&e),
    };
    let s = &c.supershift;
    let rows = match problem.propagator().supershift_scan(&PlaneWaves, s.k0, s.kappa, &s.n_seq, s.t, &compact) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return runtime_code(&e);
        }
    };
    let mut text = String::from("n,sup_error,linearity_residual\n");
    for r in &rows {
        text += &row(&[r.n.to_string(), fmt_f64(r.sup_error), fmt_f64(r.linearity_residual)]);
    }
    if let Err(e) = emit(&c.output.path, &text) {
        return fail(&e);
    }
    if rows.iter().any(|r| !r.converged) {
        eprintln!("some quadratures did not converge");
        return 4;
    }
    0
}

/// Residual of G by central differences with steps h and h/2, Richardson-combined. The
/// steps resolve the phase (|x| + |z|)²/4t of the direct and reflected terms.
fn green_residual(g: &crate::greens::Green, t: f64, x: f64, z: C64) -> Result<f64, crate::greens::GreensError> {
    let d = x.abs() + z.norm();
    let h_x = x.abs().min(2.0 * t / d) / 100.0;
    let h_t = t.min(4.0 * t * t / (d * d)) / 100.0;
    let r1 = g.schrodinger_residual(t, x, z, h_t, h_x)?;
    let r2 = g.schrodinger_residual(t, x, z, h_t / 2.0, h_x / 2.0)?;
    Ok(((4.0 * r2 - r1) / 3.0).norm())
}

pub fn cmd_green_table(c: &RunConfig) -> i32 {
    let prepared = c.green().and_then(|g| Ok((g, c.evolve_grid()?, c.green_points()?)));
    let (green, (ts, xs), zs) = match prepared {
        Ok(v) => v,
        Err(e) => return fail(&e),
    };
    let zs = &zs;
    let cells: Vec<(f64, f64, C64)> = ts.iter().flat_map(|&t| xs.iter().flat_map(move |&x| zs.iter().map(move |&z| (t, x, z)))).collect();
    let rows: Result<Vec<String>, _> = cells
        .par_iter()
        .map(|&(t, x, z)| {
            let e = green.eval(t, x, z)?;
            let r = green_residual(&green, t, x, z)?;
            Ok::<_, crate::greens::GreensError>(row(&[
                fmt_f64(t),
                fmt_f64(x),
                fmt_f64(z.re),
                fmt_f64(z.im),
                fmt_f64(e.value.re),
                fmt_f64(e.value.im),
                fmt_f64(e.gtilde.re),
                fmt_f64(e.gtilde.im),
                fmt_f64(r),
            ]))
        })
        .collect();
    let rows = match rows {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return runtime_code(&EvolutionError::from(e));
        }
    };
    let text = std::iter::once("t,x,z_re,z_im,g_re,g_im,gtilde_re,gtilde_im,residual_abs\n".to_string()).chain(rows).collect::<String>();
    match emit(&c.output.path, &text) {
        Ok(()) => 0,
        Err(e) => fail(&e),
    }
}

/// Human-readable lines on stderr, JSON lines on stdout (and in `json` if given).
pub fn cmd_selfcheck(level: &str, json: Option<&str>, only: Option<&[u32]>) -> i32 {
    let level: Level = match level.parse() {
        Ok(l) => l,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let mut lines = String::new();
    let reports = checks::run(level, only, |r| {
        eprintln!("{}", r.line());
        let j = serde_json::to_string(r).expect("report serializes");
        println!("{j}");
        lines += &j;
        lines.push('\n');
    });
    if let Some(p) = json {
        if let Err(e) = std::fs::write(p, &lines) {
            eprintln!("error: cannot write {p}: {e}");
            return 2;
        }
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    eprintln!("{} checks, {failed} failed", reports.len());
    if failed > 0 {
        1
    } else {
        0
    }
}

pub fn cmd_defaults() -> i32 {
    print!("{}", RunConfig::default().to_toml());
    0
}

/// Parses `args` (program name first) and runs the subcommand; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let with_config = |a: &RunArgs, f: fn(&RunConfig) -> i32| match a.resolve() {
        Ok(c) => f(&c),
        Err(e) => fail(&e),
    };
    match &cli.command {
        Command::Evolve(a) => with_config(a, cmd_evolve),
        Command::Supershift(a) => with_config(a, cmd_supershift),
        Command::GreenTable(a) => with_config(a, cmd_green_table),
        Command::Selfcheck { level, json, only } => cmd_selfcheck(level, json.as_deref(), only.as_deref()),
        Command::Defaults => cmd_defaults(),
    }
}
