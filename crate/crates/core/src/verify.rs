//! Numerical certification of the orthogonality, curl and boundary
//! properties of the mode set.
//!
//! Tolerances come in two classes: analytic zeros (exact azimuthal
//! orthogonality, trigonometric zeros at the end caps) and quadrature
//! residuals (radial Bessel integrals at the default order).

use num_complex::Complex64;
use serde::Serialize;

use crate::bessel::{self, BesselZeroTable, ZeroKind};
use crate::error::{CavityError, Result};
use crate::modefield::{curl_u, psi, tensor_grid, u_mode, CylPoint, CylVector};
use crate::quadrature::{gauss_legendre, QuadratureRule};
use crate::spectrum::{CavityGeometry, ModeData, ModeIndex};

pub const ANALYTIC_TOL: f64 = 1e-13;
pub const QUADRATURE_TOL: f64 = 1e-8;
/// Wall residual relative to the interior maximum.
pub const BOUNDARY_TOL: f64 = 1e-10;
/// Off-diagonal curl-identity entries where both sides vanish.
pub const CURL_ABS_TOL: f64 = 1e-12;
pub const BESSEL_ZERO_TOL: f64 = 1e-12;
pub const BESSEL_ORTHO_TOL: f64 = 1e-10;

/// Matrix of inner products with its deviation from the expected diagonal.
#[derive(Debug, Clone, Serialize)]
pub struct GramReport {
    pub modes: Vec<ModeIndex>,
    /// `matrix[i][j] = ⟨f_i, f_j⟩`
    pub matrix: Vec<Vec<Complex64>>,
    /// Expected `⟨f_i, f_i⟩`.
    pub expected_diagonal: Vec<f64>,
    /// `max_{i≠j} |G_ij| / √(e_i e_j)`
    pub max_off_diagonal: f64,
    /// `max_i |G_ii / e_i - 1|`
    pub max_diagonal_deviation: f64,
    /// `max |G - G†|`, same normalization as the off-diagonals
    pub hermiticity: f64,
}

impl GramReport {
    fn build(modes: &[ModeData], matrix: Vec<Vec<Complex64>>, expected: Vec<f64>) -> Self {
        let n = modes.len();
        let mut off = 0.0f64;
        let mut diag = 0.0f64;
        let mut herm = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let s = (expected[i] * expected[j]).sqrt();
                if i == j {
                    diag = diag.max((matrix[i][i] / expected[i] - 1.0).norm());
                } else {
                    off = off.max(matrix[i][j].norm() / s);
                }
                herm = herm.max((matrix[i][j] - matrix[j][i].conj()).norm() / s);
            }
        }
        GramReport {
            modes: modes.iter().map(|d| d.index).collect(),
            matrix,
            expected_diagonal: expected,
            max_off_diagonal: off,
            max_diagonal_deviation: diag,
            hermiticity: herm,
        }
    }

    /// Largest deviation of the normalized matrix from the identity.
    pub fn max_deviation(&self) -> f64 {
        self.max_off_diagonal.max(self.max_diagonal_deviation)
    }
}

/// Gram matrix of sampled functions: `G_ij = Σ_w conj(f_i) · f_j`.
fn gram<T, F>(samples: &[Vec<T>], rule: &QuadratureRule, dot: F) -> Vec<Vec<Complex64>>
where
    F: Fn(&T, &T) -> Complex64,
{
    let n = samples.len();
    let weights: Vec<f64> = (0..rule.len()).map(|i| rule.node(i).1).collect();
    let mut g = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, w) in weights.iter().enumerate() {
                acc += dot(&samples[i][k], &samples[j][k]) * w;
            }
            g[i][j] = acc;
        }
    }
    g
}

fn sample_modes<T: Send>(
    modes: &[ModeData],
    rule: &QuadratureRule,
    f: impl Fn(&ModeData, &CylPoint) -> T + Sync,
) -> Vec<Vec<T>> {
    modes.iter().map(|m| rule.sample(|p| f(m, p))).collect()
}

/// `∫ ψ_i* ψ_j` against `½ |c|² V α δ_ij`. All modes must share σ.
pub fn check_scalar_orthonormality(
    geom: &CavityGeometry,
    modes: &[ModeData],
    rule: &QuadratureRule,
) -> Result<GramReport> {
    if let Some(first) = modes.first() {
        if modes.iter().any(|d| d.index.sigma != first.index.sigma) {
            return Err(CavityError::InvalidArgument(
                "scalar orthonormality is defined per polarization; got mixed sigma".into(),
            ));
        }
    }
    let samples = sample_modes(modes, rule, psi);
    let matrix = gram(&samples, rule, |a, b| a.conj() * b);
    let expected = modes
        .iter()
        .map(|d| 0.5 * d.c_norm * d.c_norm * geom.volume() * d.alpha)
        .collect();
    Ok(GramReport::build(modes, matrix, expected))
}

/// `∫ u_i* · u_j` against `δ_ij`, any mixture of σ.
pub fn check_vector_orthonormality(modes: &[ModeData], rule: &QuadratureRule) -> GramReport {
    let samples = sample_modes(modes, rule, u_mode);
    let matrix = gram(&samples, rule, CylVector::dot_conj);
    GramReport::build(modes, matrix, vec![1.0; modes.len()])
}

#[derive(Debug, Clone, Serialize)]
pub struct CurlIdentityReport {
    pub modes: Vec<ModeIndex>,
    /// `∫ (∇×u_i)* · (∇×u_j)`
    pub lhs: Vec<Vec<Complex64>>,
    /// `k_j² ∫ u_i* · u_j`
    pub rhs: Vec<Vec<Complex64>>,
    /// `max_i |lhs_ii - rhs_ii| / |rhs_ii|`
    pub max_relative_diagonal: f64,
    /// `max_{i≠j} max(|lhs_ij|, |rhs_ij|)`
    pub max_abs_off_diagonal: f64,
}

/// `∫ (∇×u_i)* · (∇×u_j) = k_j² ∫ u_i* · u_j` for all pairs.
pub fn check_curl_identity(modes: &[ModeData], rule: &QuadratureRule) -> CurlIdentityReport {
    let us = sample_modes(modes, rule, u_mode);
    let curls = sample_modes(modes, rule, curl_u);
    let lhs = gram(&curls, rule, CylVector::dot_conj);
    let uu = gram(&us, rule, CylVector::dot_conj);
    let n = modes.len();
    let mut rhs = uu;
    let mut rel = 0.0f64;
    let mut off = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let k2 = modes[j].k * modes[j].k;
            rhs[i][j] *= k2;
            if i == j {
                rel = rel.max((lhs[i][i] - rhs[i][i]).norm() / rhs[i][i].norm());
            } else {
                off = off.max(lhs[i][j].norm()).max(rhs[i][j].norm());
            }
        }
    }
    CurlIdentityReport {
        modes: modes.iter().map(|d| d.index).collect(),
        lhs,
        rhs,
        max_relative_diagonal: rel,
        max_abs_off_diagonal: off,
    }
}

/// Wall residuals of one mode.
#[derive(Debug, Clone, Serialize)]
pub struct BoundaryReport {
    pub mode: ModeIndex,
    /// max |u_tan| over the cylinder wall r = a
    pub side_tangential_u: f64,
    /// max |(∇×u)_r| over r = a
    pub side_normal_curl: f64,
    /// max |u_tan| over the end caps z = 0, L
    pub cap_tangential_u: f64,
    /// max |(∇×u)_z| over the end caps
    pub cap_normal_curl: f64,
    pub interior_max_u: f64,
    pub interior_max_curl: f64,
}

impl BoundaryReport {
    /// Largest wall residual relative to the matching interior maximum.
    pub fn max_relative_violation(&self) -> f64 {
        let u = self.side_tangential_u.max(self.cap_tangential_u) / self.interior_max_u;
        let c = self.side_normal_curl.max(self.cap_normal_curl) / self.interior_max_curl;
        u.max(c)
    }
}

/// Sample points on the three walls: `nphi` azimuths, `nr` radii on each
/// cap, `nz` heights on the side wall.
pub fn wall_samples(geom: &CavityGeometry, nr: usize, nphi: usize, nz: usize) -> Result<Vec<CylPoint>> {
    let a = geom.radius();
    let l = geom.height();
    let mut pts = Vec::new();
    for j in 0..nphi {
        let phi = 2.0 * std::f64::consts::PI * (j as f64 + 0.37) / nphi as f64;
        for k in 0..nz {
            let z = l * k as f64 / (nz.max(2) - 1) as f64;
            pts.push(CylPoint::new(geom, a, phi, z)?);
        }
        for i in 0..nr {
            let r = a * i as f64 / (nr.max(2) - 1) as f64;
            pts.push(CylPoint::new(geom, r, phi, 0.0)?);
            pts.push(CylPoint::new(geom, r, phi, l)?);
        }
    }
    Ok(pts)
}

/// Interior maxima of |u| and |∇×u| over a tensor grid.
pub fn interior_maxima(mode: &ModeData, geom: &CavityGeometry, n: usize) -> Result<(f64, f64)> {
    let pts = tensor_grid(geom, n, n, n)?;
    Ok(pts.iter().fold((0.0f64, 0.0f64), |(mu, mc), p| {
        (mu.max(u_mode(mode, p).norm()), mc.max(curl_u(mode, p).norm()))
    }))
}

/// Tangential u and normal ∇×u on the walls. Every sample must lie on a wall.
pub fn check_boundary(
    mode: &ModeData,
    geom: &CavityGeometry,
    samples: &[CylPoint],
) -> Result<BoundaryReport> {
    let a = geom.radius();
    let l = geom.height();
    let on = |v: f64, target: f64, scale: f64| (v - target).abs() <= 1e-12 * scale;
    let mut rep = BoundaryReport {
        mode: mode.index,
        side_tangential_u: 0.0,
        side_normal_curl: 0.0,
        cap_tangential_u: 0.0,
        cap_normal_curl: 0.0,
        interior_max_u: 0.0,
        interior_max_curl: 0.0,
    };
    for p in samples {
        let side = on(p.r, a, a);
        let cap = on(p.z, 0.0, l) || on(p.z, l, l);
        if !side && !cap {
            return Err(CavityError::InvalidArgument(format!(
                "sample (r={}, phi={}, z={}) is not on a wall",
                p.r, p.phi, p.z
            )));
        }
        let u = u_mode(mode, p);
        let c = curl_u(mode, p);
        if side {
            rep.side_tangential_u = rep.side_tangential_u.max(u.phi.norm().hypot(u.z.norm()));
            rep.side_normal_curl = rep.side_normal_curl.max(c.r.norm());
        }
        if cap {
            rep.cap_tangential_u = rep.cap_tangential_u.max(u.r.norm().hypot(u.phi.norm()));
            rep.cap_normal_curl = rep.cap_normal_curl.max(c.z.norm());
        }
    }
    let (iu, ic) = interior_maxima(mode, geom, 17)?;
    rep.interior_max_u = iu;
    rep.interior_max_curl = ic;
    Ok(rep)
}

#[derive(Debug, Clone, Serialize)]
pub struct BesselReport {
    pub max_order: u32,
    pub count: usize,
    /// max |J_m(χ)| or |J'_m(χ)| over the tables
    pub max_zero_residual: f64,
    /// max |∫₀¹ x J_m(χ_i x) J_m(χ_j x) dx − ½ α δ_ij|
    pub max_orthogonality_residual: f64,
    /// max deviation of the quadrature from the closed forms of the
    /// two-zero and one-zero integrals
    pub max_closed_form_residual: f64,
}

/// Closed form of `∫₀¹ x J_m(p x) J_m(q x) dx` for `p ≠ q`, and of
/// `∫₀¹ x J_m(p x)² dx` for `p = q`.
pub fn bessel_product_integral(m: u32, p: f64, q: f64) -> f64 {
    let (jp, jp1) = bessel::jn_pair(m, p);
    if p == q {
        let jm1 = if m == 0 { -jp1 } else { bessel::jn_pair(m - 1, p).0 };
        return 0.5 * (jp * jp - jm1 * jp1);
    }
    let (jq, jq1) = bessel::jn_pair(m, q);
    (p * jp1 * jq - q * jq1 * jp) / (p * p - q * q)
}

/// Zero residuals for `m ≤ max_order`, `μ ≤ count`, and the radial
/// orthogonality of the first `ortho_count` zeros of each kind.
pub fn check_bessel(max_order: u32, count: usize, ortho_count: usize) -> BesselReport {
    let (xs, ws) = gauss_legendre(64);
    let nodes: Vec<(f64, f64)> = xs
        .iter()
        .zip(&ws)
        .map(|(&x, &w)| (0.5 * (x + 1.0), 0.5 * w))
        .collect();
    let mut zero_res = 0.0f64;
    let mut ortho = 0.0f64;
    let mut closed = 0.0f64;
    for m in 0..=max_order {
        for kind in [ZeroKind::J, ZeroKind::JPrime] {
            let table = BesselZeroTable::new(m, kind, count.max(ortho_count));
            for &z in table.zeros.iter().take(count) {
                let (j, jp) = bessel::j_and_prime(m as i32, z);
                let r = match kind {
                    ZeroKind::J => j,
                    ZeroKind::JPrime => jp,
                };
                zero_res = zero_res.max(r.abs());
            }
            let zs = &table.zeros[..ortho_count.min(table.zeros.len())];
            for (i, &p) in zs.iter().enumerate() {
                let (_, jp1) = bessel::jn_pair(m, p);
                let alpha = match kind {
                    ZeroKind::J => jp1 * jp1,
                    ZeroKind::JPrime => {
                        let jm = bessel::jn_pair(m, p).0;
                        jm * jm - jp1 * jp1
                    }
                };
                for (j, &q) in zs.iter().enumerate() {
                    let quad: f64 = nodes
                        .iter()
                        .map(|&(x, w)| {
                            w * x * bessel::jn_pair(m, p * x).0 * bessel::jn_pair(m, q * x).0
                        })
                        .sum();
                    let want = if i == j { 0.5 * alpha } else { 0.0 };
                    ortho = ortho.max((quad - want).abs());
                    closed = closed.max((quad - bessel_product_integral(m, p, q)).abs());
                }
            }
        }
    }
    BesselReport {
        max_order,
        count,
        max_zero_residual: zero_res,
        max_orthogonality_residual: ortho,
        max_closed_form_residual: closed,
    }
}
