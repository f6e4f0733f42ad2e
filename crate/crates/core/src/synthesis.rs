//! Classical fields built from complex mode amplitudes.
//!
//! ```text
//! E = i Σ √(ħω/2ε0) [a u − a* u*]
//! B =   Σ √(ħ/2ε0ω) [a ∇×u + a* ∇×u*]
//! ```
//!
//! with `a(t) = a(0) e^{−iωt}`. Amplitudes are plain complex numbers.

use std::collections::HashSet;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{CavityError, Result};
use crate::modefield::{curl_u, u_mode, CylPoint, CylVector};
use crate::quadrature::QuadratureRule;
use crate::spectrum::{CavityGeometry, ModeData};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Real vector in the local cylindrical basis.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct RealCylVector {
    pub r: f64,
    pub phi: f64,
    pub z: f64,
}

impl RealCylVector {
    pub fn norm(&self) -> f64 {
        (self.r * self.r + self.phi * self.phi + self.z * self.z).sqrt()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.r * self.r + self.phi * self.phi + self.z * self.z
    }

    pub fn to_cartesian(&self, p: &CylPoint) -> [f64; 3] {
        let (s, c) = p.phi.sin_cos();
        [self.r * c - self.phi * s, self.r * s + self.phi * c, self.z]
    }

    fn from_complex(v: &CylVector) -> Self {
        RealCylVector {
            r: v.r.re,
            phi: v.phi.re,
            z: v.z.re,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeAmplitude {
    pub mode: ModeData,
    pub amplitude: Complex64,
}

/// Mode amplitudes at time `time`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    geom: CavityGeometry,
    entries: Vec<ModeAmplitude>,
    time: f64,
}

impl FieldState {
    pub fn new(geom: CavityGeometry, entries: Vec<ModeAmplitude>, time: f64) -> Result<Self> {
        if !time.is_finite() {
            return Err(CavityError::InvalidArgument(format!("time must be finite, got {time}")));
        }
        let mut seen = HashSet::new();
        for e in &entries {
            e.mode.index.validate()?;
            if !seen.insert(e.mode.index) {
                return Err(CavityError::InvalidArgument(format!(
                    "duplicate mode {} in field state",
                    e.mode.index
                )));
            }
            if !e.amplitude.is_finite() {
                return Err(CavityError::InvalidArgument(format!(
                    "non-finite amplitude for mode {}",
                    e.mode.index
                )));
            }
        }
        Ok(FieldState { geom, entries, time })
    }

    pub fn empty(geom: CavityGeometry) -> Self {
        FieldState {
            geom,
            entries: Vec::new(),
            time: 0.0,
        }
    }

    pub fn geometry(&self) -> &CavityGeometry {
        &self.geom
    }

    pub fn entries(&self) -> &[ModeAmplitude] {
        &self.entries
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    /// Each amplitude picks up `e^{−iω dt}`; the clock advances by `dt`.
    pub fn evolve(&self, dt: f64) -> FieldState {
        let entries = self
            .entries
            .iter()
            .map(|e| ModeAmplitude {
                mode: e.mode,
                amplitude: e.amplitude * Complex64::from_polar(1.0, -e.mode.omega * dt),
            })
            .collect();
        FieldState {
            geom: self.geom,
            entries,
            time: self.time + dt,
        }
    }

    /// Union of two states on the same geometry. Fails on shared modes.
    pub fn merged(&self, other: &FieldState) -> Result<FieldState> {
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        FieldState::new(self.geom, entries, self.time)
    }

    /// State whose fields are `∂_t` of this state's fields (`a → −iω a`).
    pub fn time_derivative(&self) -> FieldState {
        let entries = self
            .entries
            .iter()
            .map(|e| ModeAmplitude {
                mode: e.mode,
                amplitude: e.amplitude * Complex64::new(0.0, -e.mode.omega),
            })
            .collect();
        FieldState {
            geom: self.geom,
            entries,
            time: self.time,
        }
    }

    fn e_prefactor(&self, mode: &ModeData) -> f64 {
        let k = self.geom.constants();
        (k.reduced_planck * mode.omega / (2.0 * k.vacuum_permittivity)).sqrt()
    }

    fn b_prefactor(&self, mode: &ModeData) -> f64 {
        let k = self.geom.constants();
        (k.reduced_planck / (2.0 * k.vacuum_permittivity * mode.omega)).sqrt()
    }

    /// E before discarding the (vanishing) imaginary part.
    pub fn electric_field_complex(&self, p: &CylPoint) -> CylVector {
        let mut acc = CylVector::ZERO;
        for e in &self.entries {
            let u = u_mode(&e.mode, p);
            let a = e.amplitude;
            let term = u.scale(a) - u.conj().scale(a.conj());
            acc += term.scale(I * self.e_prefactor(&e.mode));
        }
        acc
    }

    /// B before discarding the (vanishing) imaginary part.
    pub fn magnetic_field_complex(&self, p: &CylPoint) -> CylVector {
        let mut acc = CylVector::ZERO;
        for e in &self.entries {
            let c = curl_u(&e.mode, p);
            let a = e.amplitude;
            let term = c.scale(a) + c.conj().scale(a.conj());
            acc += term.scale(Complex64::new(self.b_prefactor(&e.mode), 0.0));
        }
        acc
    }

    /// Electric field in V/m.
    pub fn electric_field(&self, p: &CylPoint) -> RealCylVector {
        let v = self.electric_field_complex(p);
        debug_assert!(imag_residue(&v) <= 1e-12 * v.norm().max(f64::MIN_POSITIVE));
        RealCylVector::from_complex(&v)
    }

    /// Magnetic flux density in T.
    pub fn magnetic_field(&self, p: &CylPoint) -> RealCylVector {
        let v = self.magnetic_field_complex(p);
        debug_assert!(imag_residue(&v) <= 1e-12 * v.norm().max(f64::MIN_POSITIVE));
        RealCylVector::from_complex(&v)
    }

    /// `(E, B)` in Cartesian components at a Cartesian point.
    pub fn fields_cartesian(&self, x: [f64; 3]) -> Result<([f64; 3], [f64; 3])> {
        let p = CylPoint::from_cartesian(&self.geom, x[0], x[1], x[2])?;
        Ok((
            self.electric_field(&p).to_cartesian(&p),
            self.magnetic_field(&p).to_cartesian(&p),
        ))
    }

    /// `Σ ħω |a|²`
    pub fn mode_energy_sum(&self) -> f64 {
        let hbar = self.geom.constants().reduced_planck;
        self.entries
            .iter()
            .map(|e| hbar * e.mode.omega * e.amplitude.norm_sqr())
            .sum()
    }

    /// `Σ ħω/2` over the modes present. Grows without bound as the mode set
    /// is enlarged; reported for bookkeeping only.
    pub fn zero_point_energy(&self) -> f64 {
        let hbar = self.geom.constants().reduced_planck;
        self.entries.iter().map(|e| 0.5 * hbar * e.mode.omega).sum()
    }
}

fn imag_residue(v: &CylVector) -> f64 {
    (v.r.im * v.r.im + v.phi.im * v.phi.im + v.z.im * v.z.im).sqrt()
}

/// Source of `(E, B)` at a point, e.g. a [`FieldState`] or measured data.
pub trait FieldSampler: Sync {
    fn fields(&self, p: &CylPoint) -> (RealCylVector, RealCylVector);
}

impl FieldSampler for FieldState {
    fn fields(&self, p: &CylPoint) -> (RealCylVector, RealCylVector) {
        (self.electric_field(p), self.magnetic_field(p))
    }
}

/// Adapter turning a closure into a [`FieldSampler`].
pub struct FnSampler<F>(pub F);

impl<F> FieldSampler for FnSampler<F>
where
    F: Fn(&CylPoint) -> (RealCylVector, RealCylVector) + Sync,
{
    fn fields(&self, p: &CylPoint) -> (RealCylVector, RealCylVector) {
        (self.0)(p)
    }
}

/// `∫ ε0/2 |E|² + |B|²/(2μ0)` over the cavity, in joules.
pub fn total_energy(state: &FieldState, rule: &QuadratureRule) -> f64 {
    let k = state.geometry().constants();
    let eps0 = k.vacuum_permittivity;
    let inv_mu0 = 1.0 / k.vacuum_permeability();
    let density = rule.sample(|p| {
        let e = state.electric_field(p);
        let b = state.magnetic_field(p);
        Complex64::new(0.5 * eps0 * e.norm_sqr() + 0.5 * inv_mu0 * b.norm_sqr(), 0.0)
    });
    rule.weighted_sum(&density).re
}

fn complex_of(v: &RealCylVector) -> CylVector {
    CylVector::new(
        Complex64::new(v.r, 0.0),
        Complex64::new(v.phi, 0.0),
        Complex64::new(v.z, 0.0),
    )
}

/// Amplitudes of `modes` in the sampled field:
///
/// ```text
/// a = ½ [ −i √(2ε0/ħω) ⟨u, E⟩ + √(2ε0ω/ħ)/k² ⟨∇×u, B⟩ ]
/// ```
///
/// Using both E and B separates `a_s` from the conjugate of its `−m`
/// partner, which E alone cannot do.
pub fn project<S: FieldSampler + ?Sized>(
    sampler: &S,
    geom: &CavityGeometry,
    modes: &[ModeData],
    rule: &QuadratureRule,
) -> Result<Vec<Complex64>> {
    let k = geom.constants();
    let samples = rule.sample(|p| sampler.fields(p));
    if let Some(i) = samples
        .iter()
        .position(|(e, b)| !(e.norm_sqr().is_finite() && b.norm_sqr().is_finite()))
    {
        let (p, _) = rule.node(i);
        return Err(CavityError::NonFiniteSample {
            index: i,
            r: p.r,
            phi: p.phi,
            z: p.z,
        });
    }
    let fields: Vec<(CylVector, CylVector)> =
        samples.iter().map(|(e, b)| (complex_of(e), complex_of(b))).collect();
    let amplitudes = modes
        .iter()
        .map(|mode| {
            let proj = rule.sample(|p| {
                let u = u_mode(mode, p);
                let c = curl_u(mode, p);
                (u, c)
            });
            let mut ue = Complex64::new(0.0, 0.0);
            let mut cb = Complex64::new(0.0, 0.0);
            for (i, ((u, c), (e, b))) in proj.iter().zip(&fields).enumerate() {
                let w = rule.node(i).1;
                ue += u.dot_conj(e) * w;
                cb += c.dot_conj(b) * w;
            }
            let hbar = k.reduced_planck;
            let eps0 = k.vacuum_permittivity;
            let w = mode.omega;
            let e_part = -I * (2.0 * eps0 / (hbar * w)).sqrt() * ue;
            let b_part = (2.0 * eps0 * w / hbar).sqrt() / (mode.k * mode.k) * cb;
            0.5 * (e_part + b_part)
        })
        .collect();
    Ok(amplitudes)
}

/// Max-norm residuals of the four source-free Maxwell equations.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct MaxwellResidual {
    pub div_e: f64,
    pub div_b: f64,
    /// ∇×E + ∂_t B
    pub faraday: f64,
    /// ∇×B − ∂_t E / c²
    pub ampere: f64,
}

impl MaxwellResidual {
    pub fn as_array(&self) -> [f64; 4] {
        [self.div_e, self.div_b, self.faraday, self.ampere]
    }
}

/// Central-difference divergence and curl in Cartesian coordinates; time
/// derivatives are exact (`∂_t a = −iω a`). Points must be at least `step`
/// away from every wall.
pub fn maxwell_residual(state: &FieldState, points: &[CylPoint], step: f64) -> Result<MaxwellResidual> {
    if !(step.is_finite() && step > 0.0) {
        return Err(CavityError::InvalidArgument(format!("fd step must be > 0, got {step}")));
    }
    let geom = state.geometry();
    let c2 = geom.constants().speed_of_light.powi(2);
    for p in points {
        if p.r + step > geom.radius() || p.z < step || p.z + step > geom.height() {
            return Err(CavityError::InvalidArgument(format!(
                "point (r={}, z={}) closer than the fd step {step} to a wall",
                p.r, p.z
            )));
        }
    }
    let dstate = state.time_derivative();
    let per_point: Vec<Result<[f64; 4]>> = {
        use rayon::prelude::*;
        points
            .par_iter()
            .map(|p| {
                let x0 = p.to_cartesian();
                // jac[d][i] = ∂_d F_i for E and B
                let mut je = [[0.0; 3]; 3];
                let mut jb = [[0.0; 3]; 3];
                for d in 0..3 {
                    let mut xp = x0;
                    let mut xm = x0;
                    xp[d] += step;
                    xm[d] -= step;
                    let (ep, bp) = state.fields_cartesian(xp)?;
                    let (em, bm) = state.fields_cartesian(xm)?;
                    for i in 0..3 {
                        je[d][i] = (ep[i] - em[i]) / (2.0 * step);
                        jb[d][i] = (bp[i] - bm[i]) / (2.0 * step);
                    }
                }
                let div = |j: &[[f64; 3]; 3]| j[0][0] + j[1][1] + j[2][2];
                let curl = |j: &[[f64; 3]; 3]| {
                    [j[1][2] - j[2][1], j[2][0] - j[0][2], j[0][1] - j[1][0]]
                };
                let (de, db) = dstate.fields_cartesian(x0)?;
                let ce = curl(&je);
                let cb = curl(&jb);
                let far = (0..3).map(|i| (ce[i] + db[i]).powi(2)).sum::<f64>().sqrt();
                let amp = (0..3).map(|i| (cb[i] - de[i] / c2).powi(2)).sum::<f64>().sqrt();
                Ok([div(&je).abs(), div(&jb).abs(), far, amp])
            })
            .collect()
    };
    let mut out = MaxwellResidual::default();
    for r in per_point {
        let [a, b, c, d] = r?;
        out.div_e = out.div_e.max(a);
        out.div_b = out.div_b.max(b);
        out.faraday = out.faraday.max(c);
        out.ampere = out.ampere.max(d);
    }
    Ok(out)
}
