//! Scalar and vector mode functions and their curls.
//!
//! With `ψ = c J_m(g r) e^{imφ} Z(z)`, `Z = cos(hz)` for TM (`1/√2` when
//! n = 0) and `Z = sin(hz)` for TE:
//!
//! * TM: `u = k² e_z ψ + ∇(∂_z ψ)`, `∇×u = k² ∇×(e_z ψ)`
//! * TE: `u = iω ∇×(e_z ψ)`, `∇×u = iω (k² e_z ψ + ∇(∂_z ψ))`
//!
//! Components are written out in closed form below; the test suite checks
//! them against finite differences of ψ.

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bessel;
use crate::error::{CavityError, Result};
use crate::spectrum::{CavityGeometry, ModeData, Polarization};

/// Below `g r < AXIS_LIMIT · χ` (i.e. `r < 1e-8 a`) the removable
/// singularity `(m/r) J_m(g r)` is replaced by its limit.
const AXIS_LIMIT: f64 = 1e-8;

/// Relative slack allowed when validating points against the walls.
const WALL_SLACK: f64 = 1e-12;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Point inside the closed cavity, `φ ∈ [0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CylPoint {
    pub r: f64,
    pub phi: f64,
    pub z: f64,
}

impl CylPoint {
    /// Validates against the closed domain `0 ≤ r ≤ a`, `0 ≤ z ≤ L`. Values a
    /// hair outside (relative 1e-12) are clamped onto the wall.
    pub fn new(geom: &CavityGeometry, r: f64, phi: f64, z: f64) -> Result<Self> {
        let a = geom.radius();
        let l = geom.height();
        if !(r.is_finite() && phi.is_finite() && z.is_finite()) {
            return Err(CavityError::OutsideDomain(format!(
                "non-finite coordinates (r={r}, phi={phi}, z={z})"
            )));
        }
        if r < -WALL_SLACK * a || r > a * (1.0 + WALL_SLACK) {
            return Err(CavityError::OutsideDomain(format!(
                "r={r} not in [0, {a}]"
            )));
        }
        if z < -WALL_SLACK * l || z > l * (1.0 + WALL_SLACK) {
            return Err(CavityError::OutsideDomain(format!(
                "z={z} not in [0, {l}]"
            )));
        }
        Ok(CylPoint {
            r: r.clamp(0.0, a),
            phi: normalize_angle(phi),
            z: z.clamp(0.0, l),
        })
    }

    pub fn from_cartesian(geom: &CavityGeometry, x: f64, y: f64, z: f64) -> Result<Self> {
        Self::new(geom, x.hypot(y), y.atan2(x), z)
    }

    pub fn to_cartesian(&self) -> [f64; 3] {
        let (s, c) = self.phi.sin_cos();
        [self.r * c, self.r * s, self.z]
    }
}

fn normalize_angle(phi: f64) -> f64 {
    let p = phi.rem_euclid(TAU);
    // rem_euclid can round up to exactly 2π
    if p >= TAU {
        0.0
    } else {
        p
    }
}

/// Complex vector in the local `(e_r, e_φ, e_z)` basis.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CylVector {
    pub r: Complex64,
    pub phi: Complex64,
    pub z: Complex64,
}

impl CylVector {
    pub const ZERO: CylVector = CylVector {
        r: Complex64 { re: 0.0, im: 0.0 },
        phi: Complex64 { re: 0.0, im: 0.0 },
        z: Complex64 { re: 0.0, im: 0.0 },
    };

    pub fn new(r: Complex64, phi: Complex64, z: Complex64) -> Self {
        CylVector { r, phi, z }
    }

    /// `self* · other`
    pub fn dot_conj(&self, other: &CylVector) -> Complex64 {
        self.r.conj() * other.r + self.phi.conj() * other.phi + self.z.conj() * other.z
    }

    /// Bilinear `self · other` (no conjugation).
    pub fn dot(&self, other: &CylVector) -> Complex64 {
        self.r * other.r + self.phi * other.phi + self.z * other.z
    }

    pub fn norm_sqr(&self) -> f64 {
        self.r.norm_sqr() + self.phi.norm_sqr() + self.z.norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn conj(&self) -> CylVector {
        CylVector::new(self.r.conj(), self.phi.conj(), self.z.conj())
    }

    pub fn scale(&self, s: Complex64) -> CylVector {
        CylVector::new(self.r * s, self.phi * s, self.z * s)
    }

    pub fn is_finite(&self) -> bool {
        [self.r, self.phi, self.z].iter().all(|c| c.is_finite())
    }
}

impl std::ops::Add for CylVector {
    type Output = CylVector;
    fn add(self, o: CylVector) -> CylVector {
        CylVector::new(self.r + o.r, self.phi + o.phi, self.z + o.z)
    }
}

impl std::ops::Sub for CylVector {
    type Output = CylVector;
    fn sub(self, o: CylVector) -> CylVector {
        CylVector::new(self.r - o.r, self.phi - o.phi, self.z - o.z)
    }
}

impl std::ops::AddAssign for CylVector {
    fn add_assign(&mut self, o: CylVector) {
        *self = *self + o;
    }
}

/// Rotates cylindrical components at `p` into Cartesian `(x, y, z)`.
pub fn to_cartesian(p: &CylPoint, v: &CylVector) -> [Complex64; 3] {
    let (s, c) = p.phi.sin_cos();
    [v.r * c - v.phi * s, v.r * s + v.phi * c, v.z]
}

/// Radial and axial factors of one mode at one point.
struct Factors {
    /// c J_m(g r) e^{imφ}
    radial: Complex64,
    /// c g J'_m(g r) e^{imφ}
    radial_dr: Complex64,
    /// c (m/r) J_m(g r) e^{imφ}
    radial_m_over_r: Complex64,
    /// Z(z) of ψ
    zf: f64,
    /// cos(hz) for TE, -sin(hz) for TM: the axial factor after ∂_z / h
    zf_dz: f64,
}

fn factors(mode: &ModeData, p: &CylPoint) -> Factors {
    let m = mode.index.m;
    let x = mode.g * p.r;
    let (j, jp) = bessel::j_and_prime(m, x);
    let m_over_r = if x < AXIS_LIMIT * mode.chi {
        // (m/r) J_m(g r) → g/2 for |m| = 1, 0 otherwise
        if m.unsigned_abs() == 1 {
            0.5 * mode.g
        } else {
            0.0
        }
    } else {
        m as f64 * j / p.r
    };
    let phase = Complex64::from_polar(mode.c_norm, m as f64 * p.phi);
    let hz = mode.h * p.z;
    let (s, c) = hz.sin_cos();
    let (zf, zf_dz) = match mode.index.sigma {
        Polarization::TM if mode.index.n == 0 => (FRAC_1_SQRT_2, 0.0),
        Polarization::TM => (c, -s),
        Polarization::TE => (s, c),
    };
    Factors {
        radial: phase * j,
        radial_dr: phase * (mode.g * jp),
        radial_m_over_r: phase * m_over_r,
        zf,
        zf_dz,
    }
}

/// Scalar mode function ψ at `p`.
pub fn psi(mode: &ModeData, p: &CylPoint) -> Complex64 {
    let f = factors(mode, p);
    f.radial * f.zf
}

/// Vector mode function u at `p`.
pub fn u_mode(mode: &ModeData, p: &CylPoint) -> CylVector {
    let f = factors(mode, p);
    match mode.index.sigma {
        Polarization::TM => {
            // ∂_z ψ = h · radial · zf_dz
            let h = mode.h;
            CylVector::new(
                f.radial_dr * (h * f.zf_dz),
                I * f.radial_m_over_r * (h * f.zf_dz),
                f.radial * (mode.g * mode.g * f.zf),
            )
        }
        Polarization::TE => {
            let w = mode.omega;
            CylVector::new(
                -f.radial_m_over_r * (w * f.zf),
                -I * f.radial_dr * (w * f.zf),
                Complex64::new(0.0, 0.0),
            )
        }
    }
}

/// `∇×u` at `p`.
pub fn curl_u(mode: &ModeData, p: &CylPoint) -> CylVector {
    let f = factors(mode, p);
    match mode.index.sigma {
        Polarization::TM => {
            let k2 = mode.k * mode.k;
            CylVector::new(
                I * f.radial_m_over_r * (k2 * f.zf),
                -f.radial_dr * (k2 * f.zf),
                Complex64::new(0.0, 0.0),
            )
        }
        Polarization::TE => {
            let w = mode.omega;
            let h = mode.h;
            CylVector::new(
                I * f.radial_dr * (w * h * f.zf_dz),
                -f.radial_m_over_r * (w * h * f.zf_dz),
                I * f.radial * (w * mode.g * mode.g * f.zf),
            )
        }
    }
}

/// `(u, ∇×u)` sharing one Bessel evaluation.
pub fn u_and_curl(mode: &ModeData, p: &CylPoint) -> (CylVector, CylVector) {
    (u_mode(mode, p), curl_u(mode, p))
}

/// Tensor grid including both walls in r and z, `nphi` uniform azimuths.
/// Order: r outermost, then φ, then z.
pub fn tensor_grid(geom: &CavityGeometry, nr: usize, nphi: usize, nz: usize) -> Result<Vec<CylPoint>> {
    if nr == 0 || nphi == 0 || nz == 0 {
        return Err(CavityError::InvalidArgument(format!(
            "grid sizes must be >= 1, got {nr},{nphi},{nz}"
        )));
    }
    let lin = |i: usize, n: usize, len: f64| {
        if n == 1 {
            0.0
        } else {
            len * i as f64 / (n - 1) as f64
        }
    };
    let mut pts = Vec::with_capacity(nr * nphi * nz);
    for i in 0..nr {
        let r = lin(i, nr, geom.radius());
        for j in 0..nphi {
            let phi = 2.0 * PI * j as f64 / nphi as f64;
            for k in 0..nz {
                let z = lin(k, nz, geom.height());
                pts.push(CylPoint::new(geom, r, phi, z)?);
            }
        }
    }
    Ok(pts)
}
