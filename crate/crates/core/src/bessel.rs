//! Bessel functions of the first kind, their derivatives and positive zeros.
//!
//! Evaluation picks one of three routes depending on `(n, x)`:
//!
//! * ascending power series while `x² < 4(n + 1)`, where the terms decrease
//!   monotonically from the first one and no cancellation occurs;
//! * Hankel asymptotic expansion for `J_0`, `J_1` followed by forward
//!   recurrence when `x ≥ ASYMPTOTIC_MIN_X` and the requested order stays
//!   below `x` (forward recurrence is stable there);
//! * Miller backward recurrence normalized by the Neumann sum
//!   `1 = J_0 + 2 Σ J_2k` everywhere else.
//!
//! Zeros are bracketed by a sign-change scan whose step is smaller than the
//! minimum spacing of consecutive zeros, then polished by a Newton iteration
//! that falls back to bisection whenever a step leaves the bracket.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{CavityError, Result};

/// Below this argument the asymptotic route is never taken.
const ASYMPTOTIC_MIN_X: f64 = 25.0;

/// Scan step used to bracket zeros. Consecutive zeros of `J_m` and of `J'_m`
/// are more than 3 apart for every order.
const ZERO_SCAN_STEP: f64 = 1.0;

const RESCALE_LIMIT: f64 = 1e250;

/// Which function a zero belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ZeroKind {
    /// zero of `J_m` (TM family)
    J,
    /// zero of `J'_m` (TE family), origin excluded
    JPrime,
}

impl ZeroKind {
    pub fn label(self) -> &'static str {
        match self {
            ZeroKind::J => "j",
            ZeroKind::JPrime => "jprime",
        }
    }
}

impl std::str::FromStr for ZeroKind {
    type Err = CavityError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "j" => Ok(ZeroKind::J),
            "jprime" => Ok(ZeroKind::JPrime),
            other => Err(CavityError::InvalidArgument(format!(
                "unknown zero kind '{other}', expected 'j' or 'jprime'"
            ))),
        }
    }
}

fn check_arg(x: f64) -> Result<()> {
    if !x.is_finite() {
        return Err(CavityError::InvalidArgument(format!(
            "Bessel argument must be finite, got {x}"
        )));
    }
    if x < 0.0 {
        return Err(CavityError::InvalidArgument(format!(
            "Bessel argument must be non-negative, got {x}"
        )));
    }
    Ok(())
}

/// `J_{-n} = (-1)^n J_n`
#[inline]
fn reflection_sign(m: i32) -> f64 {
    if m < 0 && m % 2 != 0 {
        -1.0
    } else {
        1.0
    }
}

/// `J_m(x)` for any integer order and `x ≥ 0`.
pub fn bessel_j(m: i32, x: f64) -> Result<f64> {
    check_arg(x)?;
    Ok(reflection_sign(m) * jn_pair(m.unsigned_abs(), x).0)
}

/// `J'_m(x) = (J_{m-1}(x) - J_{m+1}(x)) / 2`.
pub fn bessel_j_prime(m: i32, x: f64) -> Result<f64> {
    check_arg(x)?;
    Ok(j_and_prime(m, x).1)
}

/// `(J_m(x), J'_m(x))` without argument validation; `x` must be finite and
/// non-negative. This is the hot path used by mode-function evaluation.
#[inline]
pub(crate) fn j_and_prime(m: i32, x: f64) -> (f64, f64) {
    let n = m.unsigned_abs();
    let sign = reflection_sign(m);
    if x == 0.0 {
        let j = if n == 0 { 1.0 } else { 0.0 };
        let jp = if n == 1 { 0.5 } else { 0.0 };
        return (sign * j, sign * jp);
    }
    if n == 0 {
        // same route as bessel_j(1, x), so J'_0 = -J_1 holds bit for bit
        return (jn_pair(0, x).0, -jn_pair(1, x).0);
    }
    let (jn, jn1) = jn_pair(n, x);
    // J'_n = (n/x) J_n - J_{n+1}
    let jp = (n as f64 / x) * jn - jn1;
    (sign * jn, sign * jp)
}

/// `(J_n(x), J_{n+1}(x))` for `n ≥ 0`, `x ≥ 0` finite.
pub(crate) fn jn_pair(n: u32, x: f64) -> (f64, f64) {
    if x == 0.0 {
        return (if n == 0 { 1.0 } else { 0.0 }, 0.0);
    }
    let nf = n as f64;
    if x * x < 4.0 * (nf + 1.0) {
        (series(n, x), series(n + 1, x))
    } else if x >= ASYMPTOTIC_MIN_X && nf + 1.0 < x {
        forward_from_asymptotic(n, x)
    } else {
        miller(n, x)
    }
}

/// Ascending series `Σ (-1)^k (x/2)^{2k+n} / (k! (n+k)!)`.
fn series(n: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut lead = 1.0;
    for k in 1..=n {
        lead *= half / k as f64;
        if lead == 0.0 {
            return 0.0;
        }
    }
    let q = -half * half;
    let mut term = lead;
    let mut sum = lead;
    let mut k = 1.0;
    loop {
        term *= q / (k * (k + n as f64));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
        k += 1.0;
    }
    sum
}

/// Hankel expansions of `J_0`, `J_1`, then `J_{k+1} = (2k/x) J_k - J_{k-1}`.
fn forward_from_asymptotic(n: u32, x: f64) -> (f64, f64) {
    let (s, c) = x.sin_cos();
    let amp = (2.0 / (PI * x)).sqrt();

    let (p0, q0) = hankel_pq(0.0, x);
    // x - π/4
    let (c0, s0) = ((c + s) * FRAC_1_SQRT_2, (s - c) * FRAC_1_SQRT_2);
    let j0 = amp * (p0 * c0 - q0 * s0);

    let (p1, q1) = hankel_pq(4.0, x);
    // x - 3π/4
    let (c1, s1) = ((s - c) * FRAC_1_SQRT_2, -(s + c) * FRAC_1_SQRT_2);
    let j1 = amp * (p1 * c1 - q1 * s1);

    let mut prev = j0;
    let mut cur = j1;
    for k in 1..=n {
        let next = (2.0 * k as f64 / x) * cur - prev;
        prev = cur;
        cur = next;
    }
    (prev, cur)
}

/// Asymptotic `P(ν, x)`, `Q(ν, x)` with `mu4 = 4ν²`, summed until the terms
/// stop decreasing or fall below double precision.
fn hankel_pq(mu4: f64, x: f64) -> (f64, f64) {
    let eightx = 8.0 * x;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut t = 1.0_f64;
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        t *= (mu4 - odd * odd) / (k as f64 * eightx);
        if t.abs() >= last {
            break;
        }
        last = t.abs();
        // k odd -> Q, k even -> P; sign alternates every two terms
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 1 {
            q += sign * t;
        } else {
            p += sign * t;
        }
        if last < 1e-18 {
            break;
        }
    }
    (p, q)
}

/// Miller backward recurrence from an order well above `max(n, x)`,
/// normalized with `J_0 + 2 Σ_{k≥1} J_{2k} = 1`.
fn miller(n: u32, x: f64) -> (f64, f64) {
    let top = (n as f64 + 1.0).max(x);
    let mut start = (top + 30.0 + (50.0 * top).sqrt()).ceil() as u32;
    if start % 2 == 1 {
        start += 1;
    }
    let two_over_x = 2.0 / x;
    let mut next = 0.0; // J_{k+1}
    let mut cur = 1e-300; // J_k
    let mut norm = 0.0;
    let mut want_n = 0.0;
    let mut want_n1 = 0.0;
    let mut k = start;
    loop {
        if k == n {
            want_n = cur;
        } else if k == n + 1 {
            want_n1 = cur;
        }
        if k == 0 {
            norm += cur;
            break;
        }
        if k.is_multiple_of(2) {
            norm += 2.0 * cur;
        }
        let prev = k as f64 * two_over_x * cur - next;
        next = cur;
        cur = prev;
        k -= 1;
        if cur.abs() > RESCALE_LIMIT {
            let s = 1.0 / RESCALE_LIMIT;
            cur *= s;
            next *= s;
            norm *= s;
            want_n *= s;
            want_n1 *= s;
        }
    }
    (want_n / norm, want_n1 / norm)
}

fn kind_value(m: u32, x: f64, kind: ZeroKind) -> (f64, f64) {
    let (j, jp) = j_and_prime(m as i32, x);
    match kind {
        ZeroKind::J => (j, jp),
        ZeroKind::JPrime => {
            // Bessel's equation: J'' = -J'/x - (1 - m²/x²) J
            let mf = m as f64;
            let jpp = -jp / x - (1.0 - mf * mf / (x * x)) * j;
            (jp, jpp)
        }
    }
}

/// Safeguarded Newton inside `[lo, hi]` where `f(lo)`, `f(hi)` differ in sign.
fn polish(m: u32, kind: ZeroKind, mut lo: f64, mut hi: f64, mut f_lo: f64) -> f64 {
    let (f_hi, _) = kind_value(m, hi, kind);
    if f_hi == 0.0 {
        return hi;
    }
    // start from the secant point of the bracket
    let mut x = lo - f_lo * (hi - lo) / (f_hi - f_lo);
    if !(x > lo && x < hi) {
        x = 0.5 * (lo + hi);
    }
    for _ in 0..200 {
        let (f, df) = kind_value(m, x, kind);
        if f == 0.0 {
            return x;
        }
        if (f < 0.0) == (f_lo < 0.0) {
            lo = x;
            f_lo = f;
        } else {
            hi = x;
        }
        let newton = x - f / df;
        let step_ok = df != 0.0 && newton > lo && newton < hi;
        let next = if step_ok { newton } else { 0.5 * (lo + hi) };
        if (next - x).abs() <= 1e-15 * x || hi - lo <= 4.0 * f64::EPSILON * x {
            return next;
        }
        x = next;
    }
    x
}

/// Iterator over successive positive zeros of `J_m` or `J'_m`.
#[derive(Debug, Clone)]
pub struct ZeroIter {
    order: u32,
    kind: ZeroKind,
    x: f64,
    f: f64,
}

impl ZeroIter {
    pub fn new(order: u32, kind: ZeroKind) -> Self {
        // No zero of J_m or J'_m (origin excluded) lies below max(m, 1/2).
        let x = (order as f64).max(0.5);
        let (f, _) = kind_value(order, x, kind);
        ZeroIter { order, kind, x, f }
    }
}

impl Iterator for ZeroIter {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        loop {
            let x1 = self.x + ZERO_SCAN_STEP;
            let (f1, _) = kind_value(self.order, x1, self.kind);
            let (x0, f0) = (self.x, self.f);
            self.x = x1;
            self.f = f1;
            if f1 == 0.0 {
                // advance past the exact hit so it is not reported twice
                let x2 = x1 + 0.5 * ZERO_SCAN_STEP;
                self.x = x2;
                self.f = kind_value(self.order, x2, self.kind).0;
                return Some(x1);
            }
            if (f0 < 0.0) != (f1 < 0.0) {
                return Some(polish(self.order, self.kind, x0, x1, f0));
            }
        }
    }
}

/// Ordered table of the first `count` positive zeros of one kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BesselZeroTable {
    pub order: u32,
    pub kind: ZeroKind,
    pub zeros: Vec<f64>,
}

impl BesselZeroTable {
    pub fn new(order: u32, kind: ZeroKind, count: usize) -> Self {
        BesselZeroTable {
            order,
            kind,
            zeros: ZeroIter::new(order, kind).take(count).collect(),
        }
    }

    /// `mu` is 1-based.
    pub fn get(&self, mu: u32) -> Option<f64> {
        (mu as usize).checked_sub(1).and_then(|i| self.zeros.get(i).copied())
    }
}

fn nth_zero(m: u32, mu: u32, kind: ZeroKind) -> Result<f64> {
    if mu == 0 {
        return Err(CavityError::InvalidArgument(
            "radial index mu must be >= 1".into(),
        ));
    }
    Ok(ZeroIter::new(m, kind)
        .nth(mu as usize - 1)
        .expect("zero iterator is unbounded"))
}

/// μ-th positive zero of `J_m`.
pub fn bessel_zero(m: u32, mu: u32) -> Result<f64> {
    nth_zero(m, mu, ZeroKind::J)
}

/// μ-th strictly positive zero of `J'_m`. For `m = 0` the stationary point at
/// the origin is not counted.
pub fn bessel_prime_zero(m: u32, mu: u32) -> Result<f64> {
    nth_zero(m, mu, ZeroKind::JPrime)
}
