//! Tensor-product quadrature over the cavity volume.
//!
//! Gauss–Legendre in r (with the Jacobian `r` folded into the weights) and
//! in z, uniform trapezoid in φ.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{CavityError, Result};
use crate::modefield::CylPoint;
use crate::spectrum::{CavityGeometry, ModeData};

pub const DEFAULT_RADIAL_NODES: usize = 64;
pub const DEFAULT_AXIAL_NODES: usize = 64;

/// Gauss–Legendre nodes and weights on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n
        let mut t = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, t);
            dp = d;
            let dt = p / d;
            t -= dt;
            if dt.abs() <= 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, t);
        if d != 0.0 {
            dp = d;
        }
        let wi = 2.0 / ((1.0 - t * t) * dp * dp);
        x[i] = -t;
        x[n - 1 - i] = t;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, t: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = t;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * t * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let (pn, pn1) = if n == 0 { (1.0, 0.0) } else { (p1, p0) };
    let d = n as f64 * (t * pn - pn1) / (t * t - 1.0);
    (pn, d)
}

/// Product rule for `∫ r dr dφ dz` over the cavity.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    nr: usize,
    nphi: usize,
    nz: usize,
    /// (r, weight·r)
    radial: Vec<(f64, f64)>,
    azimuthal: Vec<(f64, f64)>,
    axial: Vec<(f64, f64)>,
}

impl QuadratureRule {
    pub fn new(geom: &CavityGeometry, nr: usize, nphi: usize, nz: usize) -> Result<Self> {
        if nr == 0 || nphi == 0 || nz == 0 {
            return Err(CavityError::InvalidArgument(format!(
                "quadrature orders must be >= 1, got nr={nr} nphi={nphi} nz={nz}"
            )));
        }
        let a = geom.radius();
        let l = geom.height();
        let (xr, wr) = gauss_legendre(nr);
        let radial = xr
            .iter()
            .zip(&wr)
            .map(|(&x, &w)| {
                let r = 0.5 * a * (x + 1.0);
                (r, 0.5 * a * w * r)
            })
            .collect();
        let dphi = 2.0 * PI / nphi as f64;
        let azimuthal = (0..nphi).map(|j| (j as f64 * dphi, dphi)).collect();
        let (xz, wz) = gauss_legendre(nz);
        let axial = xz
            .iter()
            .zip(&wz)
            .map(|(&x, &w)| (0.5 * l * (x + 1.0), 0.5 * l * w))
            .collect();
        Ok(QuadratureRule {
            nr,
            nphi,
            nz,
            radial,
            azimuthal,
            axial,
        })
    }

    /// `nr = nz = 64`, `nphi = 4 max|m| + 8` over `modes`.
    pub fn for_modes(geom: &CavityGeometry, modes: &[ModeData]) -> Result<Self> {
        let max_m = modes.iter().map(|d| d.index.m.unsigned_abs()).max().unwrap_or(0);
        Self::new(
            geom,
            DEFAULT_RADIAL_NODES,
            4 * max_m as usize + 8,
            DEFAULT_AXIAL_NODES,
        )
    }

    pub fn orders(&self) -> (usize, usize, usize) {
        (self.nr, self.nphi, self.nz)
    }

    pub fn len(&self) -> usize {
        self.nr * self.nphi * self.nz
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Node `i` in the fixed order r, φ, z (z fastest).
    pub fn node(&self, i: usize) -> (CylPoint, f64) {
        let iz = i % self.nz;
        let iphi = (i / self.nz) % self.nphi;
        let ir = i / (self.nz * self.nphi);
        let (r, wr) = self.radial[ir];
        let (phi, wphi) = self.azimuthal[iphi];
        let (z, wz) = self.axial[iz];
        (CylPoint { r, phi, z }, wr * wphi * wz)
    }

    pub fn weights_sum(&self) -> f64 {
        (0..self.len()).map(|i| self.node(i).1).sum()
    }

    /// Evaluates `f` at every node in parallel; output in node order.
    pub fn sample<T, F>(&self, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(&CylPoint) -> T + Sync,
    {
        (0..self.len())
            .into_par_iter()
            .map(|i| f(&self.node(i).0))
            .collect()
    }

    /// `Σ w_i v_i` in node order.
    pub fn weighted_sum(&self, values: &[Complex64]) -> Complex64 {
        debug_assert_eq!(values.len(), self.len());
        values
            .iter()
            .enumerate()
            .fold(Complex64::new(0.0, 0.0), |acc, (i, v)| acc + v * self.node(i).1)
    }
}

/// `∫_cavity f r dr dφ dz` with a fixed summation order.
pub fn integrate_cavity<F>(f: F, rule: &QuadratureRule) -> Result<Complex64>
where
    F: Fn(&CylPoint) -> Complex64 + Sync,
{
    let values = rule.sample(f);
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        let (p, _) = rule.node(i);
        return Err(CavityError::NonFiniteSample {
            index: i,
            r: p.r,
            phi: p.phi,
            z: p.z,
        });
    }
    Ok(rule.weighted_sum(&values))
}
