//! Test-only oracles, independent of the library's evaluation paths.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Fixed-point binary precision of the series oracle.
const FRAC_BITS: u64 = 1600;

/// `J_n(x)` by the ascending power series summed in exact fixed-point integer
/// arithmetic with `FRAC_BITS` fractional bits. Valid (to the last bit of
/// f64) for `x ≤ 200`, `n ≤ 100`.
pub fn series_oracle_j(n: u32, x: f64) -> f64 {
    assert!(x >= 0.0 && x.is_finite());
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    // x = mant * 2^exp exactly
    let (mant, exp) = decompose(x);
    let one: BigInt = BigInt::one() << FRAC_BITS;
    // half = x/2 in fixed point, exact as long as exp - 1 + FRAC_BITS >= 0
    let shift = exp - 1 + FRAC_BITS as i64;
    assert!(shift >= 0);
    let half: BigInt = BigInt::from(mant) << (shift as u64);

    // lead = (x/2)^n / n!
    let mut lead = one.clone();
    for k in 1..=n {
        lead = (&lead * &half) >> FRAC_BITS;
        lead /= BigInt::from(k);
    }
    let half_sq: BigInt = (&half * &half) >> FRAC_BITS;
    let mut term = lead.clone();
    let mut sum = lead;
    let mut k: u64 = 1;
    loop {
        term = (&term * &half_sq) >> FRAC_BITS;
        term /= BigInt::from(k * (k + n as u64));
        term = -term;
        if term.is_zero() {
            break;
        }
        sum += &term;
        k += 1;
    }
    fixed_to_f64(&sum, FRAC_BITS)
}

pub fn series_oracle_j_prime(m: u32, x: f64) -> f64 {
    if m == 0 {
        -series_oracle_j(1, x)
    } else {
        0.5 * (series_oracle_j(m - 1, x) - series_oracle_j(m + 1, x))
    }
}

fn decompose(x: f64) -> (u64, i64) {
    let bits = x.to_bits();
    let exp_bits = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    if exp_bits == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp_bits - 1075)
    }
}

fn fixed_to_f64(v: &BigInt, frac_bits: u64) -> f64 {
    if v.is_zero() {
        return 0.0;
    }
    let neg = v.is_negative();
    let mag = v.abs();
    let bits = mag.bits();
    // keep 64 leading bits, then scale
    let drop = bits.saturating_sub(64);
    let top = (&mag >> drop).to_u64().unwrap() as f64;
    let scale = drop as i64 - frac_bits as i64;
    let r = top * 2f64.powi(scale.clamp(-1000, 1000) as i32)
        * 2f64.powi((scale - scale.clamp(-1000, 1000)) as i32);
    if neg {
        -r
    } else {
        r
    }
}

/// Pure bisection on a sign change of `f` inside `[lo, hi]`.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    assert!(flo * f(hi) <= 0.0, "no sign change in [{lo}, {hi}]");
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return mid;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
}

/// First `count` zeros of `f` on `(start, ∞)` found by a fine scan
/// (step 0.05) followed by bisection.
pub fn scan_bisect_zeros(f: impl Fn(f64) -> f64, start: f64, count: usize) -> Vec<f64> {
    let step = 0.05;
    let mut out = Vec::with_capacity(count);
    let mut x0 = start;
    let mut f0 = f(x0);
    while out.len() < count {
        let x1 = x0 + step;
        let f1 = f(x1);
        if f0 != 0.0 && (f0 < 0.0) != (f1 < 0.0) {
            out.push(bisect(&f, x0, x1));
        }
        x0 = x1;
        f0 = f1;
    }
    out
}
