//! Command-line front end.
//!
//! Every subcommand accepts `--config <file>`. Values resolve as
//! command-line flag, then config file, then built-in default. Exit codes:
//! 0 success, 1 domain error or failed verification, 2 usage error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::json;

use crate::bessel::{BesselZeroTable, ZeroKind};
use crate::error::CavityError;
use crate::modefield::{tensor_grid, u_mode};
use crate::quadrature::QuadratureRule;
use crate::spectrum::{enumerate_modes, mode_data, CavityGeometry, ModeData, ModeIndex, Polarization};
use crate::statefile::{ConstantsSection, StateFile};
use crate::synthesis::project;
use crate::verify::{self, GramReport};

const DEFAULT_RADIUS: f64 = 1.0;
const DEFAULT_HEIGHT: f64 = 1.0;

#[derive(Debug, Parser)]
#[command(name = "cylcavity", version, about = "Mode structure of a perfectly conducting cylindrical cavity")]
pub struct Cli {
    #[command(flatten)]
    common: CommonArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// TOML config file; command-line flags take precedence over its values
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write output here instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Cavity radius a (m)
    #[arg(long, global = true, allow_hyphen_values = true)]
    radius: Option<f64>,
    /// Cavity height L (m)
    #[arg(long, global = true, allow_hyphen_values = true)]
    height: Option<f64>,
    /// Speed of light (m/s)
    #[arg(long, global = true, allow_hyphen_values = true)]
    speed_of_light: Option<f64>,
    /// Vacuum permittivity (F/m)
    #[arg(long, global = true, allow_hyphen_values = true)]
    vacuum_permittivity: Option<f64>,
    /// Reduced Planck constant (J s)
    #[arg(long, global = true, allow_hyphen_values = true)]
    reduced_planck: Option<f64>,
    /// Radial Gauss-Legendre nodes
    #[arg(long, global = true)]
    nr: Option<usize>,
    /// Azimuthal trapezoid nodes (default 4 max|m| + 8)
    #[arg(long, global = true)]
    nphi: Option<usize>,
    /// Axial Gauss-Legendre nodes
    #[arg(long, global = true)]
    nz: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Positive zeros of J_m or J'_m
    BesselZeros {
        #[arg(long)]
        m: Option<u32>,
        /// j or jprime
        #[arg(long)]
        kind: Option<String>,
        #[arg(long)]
        count: Option<usize>,
    },
    /// All modes with omega <= omega-max
    Spectrum {
        #[arg(long, allow_hyphen_values = true)]
        omega_max: Option<f64>,
    },
    /// Vector mode function on a tensor grid
    Eval {
        /// m,mu,n,sigma
        #[arg(long, allow_hyphen_values = true)]
        mode: Option<String>,
        /// nr,nphi,nz
        #[arg(long)]
        grid: Option<String>,
    },
    /// Numerical certification of the mode set; exit 0 iff all pass
    Verify {
        #[arg(long, allow_hyphen_values = true)]
        omega_max: Option<f64>,
        /// gram, boundary, curl, bessel (repeatable or comma separated)
        #[arg(long, value_delimiter = ',')]
        suite: Vec<String>,
    },
    /// E and B of a state file on a tensor grid
    Synth {
        #[arg(long)]
        state: Option<PathBuf>,
        /// Evaluation time (s); defaults to the state's own time
        #[arg(long, allow_hyphen_values = true)]
        time: Option<f64>,
        #[arg(long)]
        grid: Option<String>,
    },
    /// Project the field of a state file onto a mode list
    Project {
        #[arg(long)]
        state: Option<PathBuf>,
        /// 'state' or 'm,mu,n,sigma;m,mu,n,sigma;...'
        #[arg(long, allow_hyphen_values = true)]
        modes: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        time: Option<f64>,
    },
}

/// Config file layout. Shared keys at the top level, one table per
/// subcommand.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub radius: Option<f64>,
    pub height: Option<f64>,
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub constants: ConstantsSection,
    #[serde(default)]
    pub quadrature: QuadratureSection,
    #[serde(default)]
    pub tolerance: ToleranceSection,
    #[serde(default, rename = "bessel-zeros")]
    pub bessel_zeros: BesselZerosSection,
    #[serde(default)]
    pub spectrum: SpectrumSection,
    #[serde(default)]
    pub eval: EvalSection,
    #[serde(default)]
    pub verify: VerifySection,
    #[serde(default)]
    pub synth: SynthSection,
    #[serde(default)]
    pub project: ProjectSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureSection {
    pub nr: Option<usize>,
    pub nphi: Option<usize>,
    pub nz: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceSection {
    pub quadrature: Option<f64>,
    pub boundary: Option<f64>,
    pub curl_off_diagonal: Option<f64>,
    pub bessel_zero: Option<f64>,
    pub bessel_orthogonality: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BesselZerosSection {
    pub m: Option<u32>,
    pub kind: Option<String>,
    pub count: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumSection {
    pub omega_max: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvalSection {
    pub mode: Option<String>,
    pub grid: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySection {
    pub omega_max: Option<f64>,
    pub suite: Option<Vec<String>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthSection {
    pub state: Option<PathBuf>,
    pub time: Option<f64>,
    pub grid: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectSection {
    pub state: Option<PathBuf>,
    pub modes: Option<String>,
    pub time: Option<f64>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let mut cfg: RunConfig = toml::from_str(&text)
            .map_err(|e| Failure::Usage(format!("config {}: {e}", path.display())))?;
        // relative paths inside the config are relative to the config file
        let base = path.parent().unwrap_or_else(|| Path::new(""));
        for p in [&mut cfg.synth.state, &mut cfg.project.state, &mut cfg.output]
            .into_iter()
            .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }
}

/// Why a run stopped.
#[derive(Debug)]
pub enum Failure {
    /// malformed or missing arguments (exit 2)
    Usage(String),
    /// a violated domain invariant (exit 1)
    Domain(String),
    /// verification ran but some residual exceeded its tolerance (exit 1)
    Verification,
}

impl From<CavityError> for Failure {
    fn from(e: CavityError) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Domain(format!("I/O: {e}"))
    }
}

fn missing(flag: &str) -> Failure {
    Failure::Usage(format!("missing required value --{flag} (flag or config file)"))
}

/// 17 significant digits.
fn num(x: f64) -> String {
    // +0.0 folds -0 into 0
    format!("{:.16e}", x + 0.0)
}

fn parse_triple(s: &str, what: &str) -> Result<(usize, usize, usize), Failure> {
    let parts: Vec<_> = s.split(',').map(str::trim).collect();
    let bad = || Failure::Usage(format!("--{what} must be 'nr,nphi,nz' of positive integers, got '{s}'"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let v: Vec<usize> = parts
        .iter()
        .map(|p| p.parse::<usize>().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    if v.contains(&0) {
        return Err(bad());
    }
    Ok((v[0], v[1], v[2]))
}

struct Context {
    cfg: RunConfig,
    common: CommonArgs,
}

impl Context {
    fn geometry(&self) -> Result<CavityGeometry, Failure> {
        let radius = self.common.radius.or(self.cfg.radius).unwrap_or(DEFAULT_RADIUS);
        let height = self.common.height.or(self.cfg.height).unwrap_or(DEFAULT_HEIGHT);
        let mut k = self.cfg.constants.clone();
        k.speed_of_light = self.common.speed_of_light.or(k.speed_of_light);
        k.vacuum_permittivity = self.common.vacuum_permittivity.or(k.vacuum_permittivity);
        k.reduced_planck = self.common.reduced_planck.or(k.reduced_planck);
        Ok(CavityGeometry::with_constants(radius, height, k.resolve())?)
    }

    fn rule(&self, geom: &CavityGeometry, modes: &[ModeData]) -> Result<QuadratureRule, Failure> {
        let default = QuadratureRule::for_modes(geom, modes)?;
        let (dr, dphi, dz) = default.orders();
        let nr = self.common.nr.or(self.cfg.quadrature.nr).unwrap_or(dr);
        let nphi = self.common.nphi.or(self.cfg.quadrature.nphi).unwrap_or(dphi);
        let nz = self.common.nz.or(self.cfg.quadrature.nz).unwrap_or(dz);
        Ok(QuadratureRule::new(geom, nr, nphi, nz)?)
    }

    fn output_path(&self) -> Option<PathBuf> {
        self.common.output.clone().or_else(|| self.cfg.output.clone())
    }
}

/// Parses `argv` (including the program name) and runs the subcommand.
/// Returns the process exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{e}");
                return 2;
            }
            let _ = write!(stdout, "{e}");
            return 0;
        }
    };
    match execute(cli, stdout) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
        Err(Failure::Domain(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            1
        }
        Err(Failure::Verification) => {
            let _ = writeln!(stderr, "verification failed: residuals above tolerance");
            1
        }
    }
}

fn execute(cli: Cli, stdout: &mut dyn Write) -> Result<(), Failure> {
    let cfg = match &cli.common.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let ctx = Context {
        cfg,
        common: cli.common,
    };
    let mut text = String::new();
    let outcome = match cli.command {
        Command::BesselZeros { m, kind, count } => bessel_zeros(&ctx, m, kind, count, &mut text),
        Command::Spectrum { omega_max } => spectrum(&ctx, omega_max, &mut text),
        Command::Eval { mode, grid } => eval(&ctx, mode, grid, &mut text),
        Command::Verify { omega_max, suite } => verify_cmd(&ctx, omega_max, suite, &mut text),
        Command::Synth { state, time, grid } => synth(&ctx, state, time, grid, &mut text),
        Command::Project { state, modes, time } => project_cmd(&ctx, state, modes, time, &mut text),
    };
    // a failed verification still emits its report
    if outcome.is_ok() || matches!(outcome, Err(Failure::Verification)) {
        match ctx.output_path() {
            Some(p) => fs::write(p, &text)?,
            None => stdout.write_all(text.as_bytes())?,
        }
    }
    outcome
}

fn bessel_zeros(
    ctx: &Context,
    m: Option<u32>,
    kind: Option<String>,
    count: Option<usize>,
    out: &mut String,
) -> Result<(), Failure> {
    let sec = &ctx.cfg.bessel_zeros;
    let m = m.or(sec.m).ok_or_else(|| missing("m"))?;
    let kind = kind.or_else(|| sec.kind.clone()).ok_or_else(|| missing("kind"))?;
    let kind: ZeroKind = kind.parse().map_err(|e: CavityError| Failure::Usage(e.to_string()))?;
    let count = count.or(sec.count).ok_or_else(|| missing("count"))?;
    let table = BesselZeroTable::new(m, kind, count);
    out.push_str("m,mu,kind,zero\n");
    for (i, z) in table.zeros.iter().enumerate() {
        out.push_str(&format!("{m},{},{},{}\n", i + 1, kind.label(), num(*z)));
    }
    Ok(())
}

const SPECTRUM_HEADER: &str = "m,mu,n,sigma,chi,g,h,k,omega,alpha,c_norm\n";

fn spectrum_row(d: &ModeData) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{}\n",
        d.index.m,
        d.index.mu,
        d.index.n,
        d.index.sigma.number(),
        num(d.chi),
        num(d.g),
        num(d.h),
        num(d.k),
        num(d.omega),
        num(d.alpha),
        num(d.c_norm)
    )
}

fn spectrum(ctx: &Context, omega_max: Option<f64>, out: &mut String) -> Result<(), Failure> {
    let geom = ctx.geometry()?;
    let omega_max = omega_max
        .or(ctx.cfg.spectrum.omega_max)
        .ok_or_else(|| missing("omega-max"))?;
    let modes = enumerate_modes(&geom, omega_max)?;
    out.push_str(SPECTRUM_HEADER);
    for d in &modes {
        out.push_str(&spectrum_row(d));
    }
    Ok(())
}

fn eval(ctx: &Context, mode: Option<String>, grid: Option<String>, out: &mut String) -> Result<(), Failure> {
    let geom = ctx.geometry()?;
    let mode = mode.or_else(|| ctx.cfg.eval.mode.clone()).ok_or_else(|| missing("mode"))?;
    let idx = ModeIndex::parse(&mode).map_err(|e| match e {
        CavityError::InvalidArgument(m) => Failure::Usage(m),
        other => other.into(),
    })?;
    let grid = grid.or_else(|| ctx.cfg.eval.grid.clone()).ok_or_else(|| missing("grid"))?;
    let (nr, nphi, nz) = parse_triple(&grid, "grid")?;
    let md = mode_data(&geom, idx)?;
    let pts = tensor_grid(&geom, nr, nphi, nz)?;
    let rows: Vec<String> = pts
        .par_iter()
        .map(|p| {
            let u = u_mode(&md, p);
            format!(
                "{},{},{},{},{},{},{},{},{}\n",
                num(p.r),
                num(p.phi),
                num(p.z),
                num(u.r.re),
                num(u.r.im),
                num(u.phi.re),
                num(u.phi.im),
                num(u.z.re),
                num(u.z.im)
            )
        })
        .collect();
    out.push_str("r,phi,z,Re(u_r),Im(u_r),Re(u_phi),Im(u_phi),Re(u_z),Im(u_z)\n");
    rows.iter().for_each(|r| out.push_str(r));
    Ok(())
}

const SUITES: [&str; 4] = ["gram", "boundary", "curl", "bessel"];

fn gram_json(rep: &GramReport) -> serde_json::Value {
    json!({
        "modes": rep.modes.len(),
        "max_off_diagonal": rep.max_off_diagonal,
        "max_diagonal_deviation": rep.max_diagonal_deviation,
        "hermiticity": rep.hermiticity,
    })
}

fn verify_cmd(
    ctx: &Context,
    omega_max: Option<f64>,
    suite: Vec<String>,
    out: &mut String,
) -> Result<(), Failure> {
    let geom = ctx.geometry()?;
    let omega_max = omega_max
        .or(ctx.cfg.verify.omega_max)
        .ok_or_else(|| missing("omega-max"))?;
    let suites: Vec<String> = if suite.is_empty() {
        ctx.cfg
            .verify
            .suite
            .clone()
            .unwrap_or_else(|| SUITES.iter().map(|s| s.to_string()).collect())
    } else {
        suite
    };
    if let Some(bad) = suites.iter().find(|s| !SUITES.contains(&s.as_str())) {
        return Err(Failure::Usage(format!(
            "unknown suite '{bad}', expected one of {}",
            SUITES.join(", ")
        )));
    }
    let tol = &ctx.cfg.tolerance;
    let quad_tol = tol.quadrature.unwrap_or(verify::QUADRATURE_TOL);
    let boundary_tol = tol.boundary.unwrap_or(verify::BOUNDARY_TOL);
    let curl_off_tol = tol.curl_off_diagonal.unwrap_or(verify::CURL_ABS_TOL);
    let zero_tol = tol.bessel_zero.unwrap_or(verify::BESSEL_ZERO_TOL);
    let ortho_tol = tol.bessel_orthogonality.unwrap_or(verify::BESSEL_ORTHO_TOL);

    let modes = enumerate_modes(&geom, omega_max)?;
    let mut report = serde_json::Map::new();
    let mut all_pass = true;
    if !modes.is_empty() {
        let rule = ctx.rule(&geom, &modes)?;
        let (nr, nphi, nz) = rule.orders();
        report.insert("quadrature".into(), json!({ "nr": nr, "nphi": nphi, "nz": nz }));
        let mut suites_out = serde_json::Map::new();
        for s in &suites {
            let (value, pass) = match s.as_str() {
                "gram" => {
                    let vector = verify::check_vector_orthonormality(&modes, &rule);
                    let mut worst = vector.max_deviation();
                    let mut scalar = serde_json::Map::new();
                    for sigma in [Polarization::TM, Polarization::TE] {
                        let subset: Vec<ModeData> =
                            modes.iter().filter(|d| d.index.sigma == sigma).copied().collect();
                        if subset.is_empty() {
                            continue;
                        }
                        let rep = verify::check_scalar_orthonormality(&geom, &subset, &rule)?;
                        worst = worst.max(rep.max_deviation());
                        let key = if sigma == Polarization::TM { "scalar_tm" } else { "scalar_te" };
                        scalar.insert(key.into(), gram_json(&rep));
                    }
                    let pass = worst <= quad_tol;
                    let mut v = json!({
                        "vector": gram_json(&vector),
                        "max_residual": worst,
                        "tolerance": quad_tol,
                        "pass": pass,
                    });
                    v.as_object_mut().unwrap().extend(scalar);
                    (v, pass)
                }
                "boundary" => {
                    let samples = verify::wall_samples(&geom, 9, 12, 9)?;
                    let mut worst = 0.0f64;
                    let mut worst_mode = None;
                    for d in &modes {
                        let rep = verify::check_boundary(d, &geom, &samples)?;
                        let v = rep.max_relative_violation();
                        if v > worst || worst_mode.is_none() {
                            worst = worst.max(v);
                            worst_mode = Some(d.index.to_string());
                        }
                    }
                    let pass = worst <= boundary_tol;
                    (
                        json!({
                            "modes": modes.len(),
                            "max_relative_violation": worst,
                            "worst_mode": worst_mode,
                            "tolerance": boundary_tol,
                            "pass": pass,
                        }),
                        pass,
                    )
                }
                "curl" => {
                    let rep = verify::check_curl_identity(&modes, &rule);
                    // off-diagonals in units of k_i k_j
                    let mut off = 0.0f64;
                    for i in 0..modes.len() {
                        for j in 0..modes.len() {
                            if i != j {
                                let s = modes[i].k * modes[j].k;
                                off = off
                                    .max(rep.lhs[i][j].norm() / s)
                                    .max(rep.rhs[i][j].norm() / s);
                            }
                        }
                    }
                    let pass = rep.max_relative_diagonal <= quad_tol && off <= curl_off_tol;
                    (
                        json!({
                            "modes": modes.len(),
                            "max_relative_diagonal": rep.max_relative_diagonal,
                            "max_normalized_off_diagonal": off,
                            "tolerance_relative": quad_tol,
                            "tolerance_off_diagonal": curl_off_tol,
                            "pass": pass,
                        }),
                        pass,
                    )
                }
                "bessel" => {
                    let max_m = modes.iter().map(|d| d.index.m.unsigned_abs()).max().unwrap_or(0);
                    let max_mu = modes.iter().map(|d| d.index.mu).max().unwrap_or(1) as usize;
                    let rep = verify::check_bessel(max_m, max_mu.max(3), max_mu.clamp(3, 6));
                    let pass = rep.max_zero_residual <= zero_tol
                        && rep.max_orthogonality_residual <= ortho_tol
                        && rep.max_closed_form_residual <= ortho_tol;
                    (
                        json!({
                            "max_order": rep.max_order,
                            "count": rep.count,
                            "max_zero_residual": rep.max_zero_residual,
                            "max_orthogonality_residual": rep.max_orthogonality_residual,
                            "max_closed_form_residual": rep.max_closed_form_residual,
                            "tolerance_zero": zero_tol,
                            "tolerance_orthogonality": ortho_tol,
                            "pass": pass,
                        }),
                        pass,
                    )
                }
                _ => unreachable!(),
            };
            all_pass &= pass;
            suites_out.insert(s.clone(), value);
        }
        report.insert("suites".into(), serde_json::Value::Object(suites_out));
    } else {
        report.insert("suites".into(), json!({}));
    }
    report.insert("radius".into(), json!(geom.radius()));
    report.insert("height".into(), json!(geom.height()));
    report.insert("omega_max".into(), json!(omega_max));
    report.insert("mode_count".into(), json!(modes.len()));
    report.insert("pass".into(), json!(all_pass));
    out.push_str(&serde_json::to_string_pretty(&serde_json::Value::Object(report)).expect("json"));
    out.push('\n');
    if all_pass {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn load_state(path: &Path) -> Result<crate::synthesis::FieldState, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read state {}: {e}", path.display())))?;
    Ok(StateFile::parse(&text)?.to_state()?)
}

fn synth(
    ctx: &Context,
    state: Option<PathBuf>,
    time: Option<f64>,
    grid: Option<String>,
    out: &mut String,
) -> Result<(), Failure> {
    let sec = &ctx.cfg.synth;
    let path = state.or_else(|| sec.state.clone()).ok_or_else(|| missing("state"))?;
    let grid = grid.or_else(|| sec.grid.clone()).ok_or_else(|| missing("grid"))?;
    let (nr, nphi, nz) = parse_triple(&grid, "grid")?;
    let st = load_state(&path)?;
    let t = time.or(sec.time).unwrap_or(st.time());
    let st = st.evolve(t - st.time());
    let pts = tensor_grid(st.geometry(), nr, nphi, nz)?;
    let rows: Vec<String> = pts
        .par_iter()
        .map(|p| {
            let e = st.electric_field(p);
            let b = st.magnetic_field(p);
            format!(
                "{},{},{},{},{},{},{},{},{}\n",
                num(p.r),
                num(p.phi),
                num(p.z),
                num(e.r),
                num(e.phi),
                num(e.z),
                num(b.r),
                num(b.phi),
                num(b.z)
            )
        })
        .collect();
    out.push_str("r,phi,z,E_r,E_phi,E_z,B_r,B_phi,B_z\n");
    rows.iter().for_each(|r| out.push_str(r));
    Ok(())
}

fn parse_mode_list(list: &str) -> Result<Vec<ModeIndex>, Failure> {
    list.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            ModeIndex::parse(s).map_err(|e| match e {
                CavityError::InvalidArgument(m) => Failure::Usage(m),
                other => other.into(),
            })
        })
        .collect()
}

fn project_cmd(
    ctx: &Context,
    state: Option<PathBuf>,
    modes: Option<String>,
    time: Option<f64>,
    out: &mut String,
) -> Result<(), Failure> {
    let sec = &ctx.cfg.project;
    let path = state.or_else(|| sec.state.clone()).ok_or_else(|| missing("state"))?;
    let list = modes.or_else(|| sec.modes.clone()).unwrap_or_else(|| "state".into());
    let st = load_state(&path)?;
    let t = time.or(sec.time).unwrap_or(st.time());
    let st = st.evolve(t - st.time());
    let geom = *st.geometry();
    let targets: Vec<ModeData> = if list.trim() == "state" {
        st.entries().iter().map(|e| e.mode).collect()
    } else {
        parse_mode_list(&list)?
            .into_iter()
            .map(|idx| mode_data(&geom, idx))
            .collect::<Result<_, _>>()?
    };
    let mut all: Vec<ModeData> = targets.clone();
    all.extend(st.entries().iter().map(|e| e.mode));
    let rule = ctx.rule(&geom, &all)?;
    let amps: Vec<Complex64> = project(&st, &geom, &targets, &rule)?;
    out.push_str("m,mu,n,sigma,Re(a),Im(a)\n");
    for (d, a) in targets.iter().zip(&amps) {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            d.index.m,
            d.index.mu,
            d.index.n,
            d.index.sigma.number(),
            num(a.re),
            num(a.im)
        ));
    }
    Ok(())
}
