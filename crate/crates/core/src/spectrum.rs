//! Cavity geometry, mode labels and the per-mode derived quantities.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bessel::{self, ZeroIter, ZeroKind};
use crate::error::{CavityError, Result};

/// Physical constants. Tests commonly use `PhysicalConstants::unit()`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    /// m/s
    pub speed_of_light: f64,
    /// F/m
    pub vacuum_permittivity: f64,
    /// J·s
    pub reduced_planck: f64,
}

impl PhysicalConstants {
    /// CODATA 2018 SI values.
    pub const SI: PhysicalConstants = PhysicalConstants {
        speed_of_light: 299_792_458.0,
        vacuum_permittivity: 8.854_187_812_8e-12,
        reduced_planck: 1.054_571_817e-34,
    };

    pub fn unit() -> Self {
        PhysicalConstants {
            speed_of_light: 1.0,
            vacuum_permittivity: 1.0,
            reduced_planck: 1.0,
        }
    }

    /// μ0 = 1 / (ε0 c²)
    pub fn vacuum_permeability(&self) -> f64 {
        1.0 / (self.vacuum_permittivity * self.speed_of_light * self.speed_of_light)
    }

    fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("speed_of_light", self.speed_of_light),
            ("vacuum_permittivity", self.vacuum_permittivity),
            ("reduced_planck", self.reduced_planck),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(CavityError::InvalidArgument(format!(
                    "{name} must be finite and > 0, got {v}"
                )));
            }
        }
        Ok(())
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::SI
    }
}

/// Radius `a` and height `L` of the cavity, plus the constants in use.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CavityGeometry {
    radius: f64,
    height: f64,
    constants: PhysicalConstants,
}

impl CavityGeometry {
    pub fn new(radius: f64, height: f64) -> Result<Self> {
        Self::with_constants(radius, height, PhysicalConstants::SI)
    }

    pub fn with_constants(radius: f64, height: f64, constants: PhysicalConstants) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(CavityError::InvalidArgument(format!(
                "radius must be finite and > 0, got {radius}"
            )));
        }
        if !(height.is_finite() && height > 0.0) {
            return Err(CavityError::InvalidArgument(format!(
                "height must be finite and > 0, got {height}"
            )));
        }
        constants.validate()?;
        Ok(CavityGeometry {
            radius,
            height,
            constants,
        })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    pub fn constants(&self) -> &PhysicalConstants {
        &self.constants
    }

    /// V = π a² L
    pub fn volume(&self) -> f64 {
        PI * self.radius * self.radius * self.height
    }

    /// Returns a copy with every length multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::with_constants(self.radius * factor, self.height * factor, self.constants)
    }
}

/// Polarization label σ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Polarization {
    /// σ = 1, built on zeros of `J_m`
    TM = 1,
    /// σ = 2, built on zeros of `J'_m`
    TE = 2,
}

impl Polarization {
    pub fn number(self) -> u8 {
        self as u8
    }

    pub fn from_number(v: u8) -> Result<Self> {
        match v {
            1 => Ok(Polarization::TM),
            2 => Ok(Polarization::TE),
            _ => Err(CavityError::InvalidMode(format!(
                "sigma must be 1 (TM) or 2 (TE), got {v}"
            ))),
        }
    }

    pub fn zero_kind(self) -> ZeroKind {
        match self {
            Polarization::TM => ZeroKind::J,
            Polarization::TE => ZeroKind::JPrime,
        }
    }

    /// Smallest admissible axial index.
    pub fn min_axial(self) -> u32 {
        match self {
            Polarization::TM => 0,
            Polarization::TE => 1,
        }
    }
}

/// Mode label `(m, μ, n, σ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModeIndex {
    pub m: i32,
    pub mu: u32,
    pub n: u32,
    pub sigma: Polarization,
}

impl ModeIndex {
    pub fn new(m: i32, mu: u32, n: u32, sigma: Polarization) -> Result<Self> {
        let idx = ModeIndex { m, mu, n, sigma };
        idx.validate()?;
        Ok(idx)
    }

    pub fn validate(&self) -> Result<()> {
        if self.mu == 0 {
            return Err(CavityError::InvalidMode(format!(
                "{self}: radial index mu must be >= 1"
            )));
        }
        if self.sigma == Polarization::TE && self.n == 0 {
            return Err(CavityError::InvalidMode(format!(
                "{self}: TE modes need n >= 1 (sin(n pi z / L) vanishes for n = 0)"
            )));
        }
        if self.m == i32::MIN {
            return Err(CavityError::InvalidMode("azimuthal index out of range".into()));
        }
        Ok(())
    }

    /// The same mode with `m → -m`.
    pub fn mirrored(&self) -> ModeIndex {
        ModeIndex { m: -self.m, ..*self }
    }

    /// Parses `m,mu,n,sigma`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(CavityError::InvalidArgument(format!(
                "mode must be 'm,mu,n,sigma', got '{s}'"
            )));
        }
        let bad = |what: &str| {
            CavityError::InvalidArgument(format!("mode '{s}': cannot parse {what}"))
        };
        let m = parts[0].parse().map_err(|_| bad("m"))?;
        let mu = parts[1].parse().map_err(|_| bad("mu"))?;
        let n = parts[2].parse().map_err(|_| bad("n"))?;
        let sigma: u8 = parts[3].parse().map_err(|_| bad("sigma"))?;
        ModeIndex::new(m, mu, n, Polarization::from_number(sigma)?)
    }
}

impl fmt::Display for ModeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {}, {})",
            self.m,
            self.mu,
            self.n,
            self.sigma.number()
        )
    }
}

/// Derived quantities of one mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeData {
    pub index: ModeIndex,
    /// Bessel zero χ (dimensionless)
    pub chi: f64,
    /// transverse wavenumber χ/a
    pub g: f64,
    /// axial wavenumber nπ/L
    pub h: f64,
    /// √(g² + h²)
    pub k: f64,
    /// c k
    pub omega: f64,
    pub alpha: f64,
    /// scalar prefactor of ψ giving ∫|u|² dV = 1
    pub c_norm: f64,
}

impl ModeData {
    pub fn m(&self) -> i32 {
        self.index.m
    }

    pub fn sigma(&self) -> Polarization {
        self.index.sigma
    }

    /// Deterministic enumeration order `(ω, σ, |m|, sign m, μ, n)`.
    pub fn order_cmp(&self, other: &ModeData) -> Ordering {
        let key = |d: &ModeData| {
            (
                d.index.sigma,
                d.index.m.unsigned_abs(),
                d.index.m.signum(),
                d.index.mu,
                d.index.n,
            )
        };
        self.omega
            .total_cmp(&other.omega)
            .then_with(|| key(self).cmp(&key(other)))
    }
}

/// α from the Bessel zero, always through `|m|`.
fn alpha_for(order: u32, chi: f64, sigma: Polarization) -> f64 {
    let (jm, jm1) = bessel::jn_pair(order, chi);
    match sigma {
        Polarization::TM => jm1 * jm1,
        Polarization::TE => jm * jm - jm1 * jm1,
    }
}

fn build(geom: &CavityGeometry, idx: ModeIndex, chi: f64) -> ModeData {
    let a = geom.radius;
    let c = geom.constants.speed_of_light;
    let g = chi / a;
    let h = idx.n as f64 * PI / geom.height;
    let k2 = g * g + h * h;
    let k = k2.sqrt();
    let omega = c * k;
    let alpha = alpha_for(idx.m.unsigned_abs(), chi, idx.sigma);
    let v = geom.volume();
    let denom = v * alpha * chi * chi * omega * omega;
    let c_norm = match idx.sigma {
        Polarization::TM => (2.0 * c * c * a * a / denom).sqrt(),
        Polarization::TE => (2.0 * a * a / denom).sqrt(),
    };
    ModeData {
        index: idx,
        chi,
        g,
        h,
        k,
        omega,
        alpha,
        c_norm,
    }
}

/// Per-mode data for `idx` in `geom`.
pub fn mode_data(geom: &CavityGeometry, idx: ModeIndex) -> Result<ModeData> {
    idx.validate()?;
    let order = idx.m.unsigned_abs();
    let chi = match idx.sigma {
        Polarization::TM => bessel::bessel_zero(order, idx.mu)?,
        Polarization::TE => bessel::bessel_prime_zero(order, idx.mu)?,
    };
    Ok(build(geom, idx, chi))
}

/// Every mode with `ω ≤ omega_max`, in enumeration order.
///
/// χ grows with both |m| ≥ 1 and μ, so the scan over each polarization
/// stops at the first |m| ≥ 1 whose lowest mode is already above the cutoff.
pub fn enumerate_modes(geom: &CavityGeometry, omega_max: f64) -> Result<Vec<ModeData>> {
    if !(omega_max.is_finite() && omega_max > 0.0) {
        return Err(CavityError::InvalidArgument(format!(
            "omega_max must be finite and > 0, got {omega_max}"
        )));
    }
    let c = geom.constants.speed_of_light;
    let a = geom.radius;
    let axial = PI / geom.height;
    let omega_of = |chi: f64, n: u32| {
        let g = chi / a;
        let h = n as f64 * axial;
        c * (g * g + h * h).sqrt()
    };

    let mut modes = Vec::new();
    for sigma in [Polarization::TM, Polarization::TE] {
        let n_min = sigma.min_axial();
        for order in 0u32.. {
            let mut zeros = ZeroIter::new(order, sigma.zero_kind()).enumerate().peekable();
            let first = zeros.peek().map(|&(_, chi)| chi).expect("unbounded");
            if omega_of(first, n_min) > omega_max {
                // J'_0 zeros are those of J_1, above the J'_1 ones, so the
                // order-0 TE branch says nothing about higher orders
                if order == 0 {
                    continue;
                }
                break;
            }
            for (i, chi) in zeros {
                if omega_of(chi, n_min) > omega_max {
                    break;
                }
                let mu = i as u32 + 1;
                for n in n_min.. {
                    if omega_of(chi, n) > omega_max {
                        break;
                    }
                    let signs: &[i32] = if order == 0 { &[1] } else { &[-1, 1] };
                    for &s in signs {
                        let idx = ModeIndex {
                            m: s * order as i32,
                            mu,
                            n,
                            sigma,
                        };
                        modes.push(build(geom, idx, chi));
                    }
                }
            }
        }
    }
    modes.sort_by(ModeData::order_cmp);
    Ok(modes)
}

/// The `count` lowest modes (in enumeration order).
pub fn lowest_modes(geom: &CavityGeometry, count: usize) -> Result<Vec<ModeData>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    // grow the cutoff until enough modes are below it
    let c = geom.constants.speed_of_light;
    let mut omega_max = c * 2.0 / geom.radius;
    loop {
        let modes = enumerate_modes(geom, omega_max)?;
        if modes.len() >= count {
            // ±m partners share ω; take the whole prefix deterministically
            return Ok(modes.into_iter().take(count).collect());
        }
        omega_max *= 1.5;
    }
}
