//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Run with `cargo test --test acceptance`.

mod common;

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{bisect, scan_bisect_zeros, series_oracle_j, series_oracle_j_prime};
use cylcavity::bessel::{bessel_j, bessel_j_prime, BesselZeroTable, ZeroKind};
use cylcavity::modefield::CylPoint;
use cylcavity::quadrature::QuadratureRule;
use cylcavity::spectrum::{
    enumerate_modes, lowest_modes, mode_data, CavityGeometry, ModeData, ModeIndex, Polarization,
};
use cylcavity::synthesis::{maxwell_residual, project, total_energy, FieldState, ModeAmplitude};
use cylcavity::verify::{check_curl_identity, check_scalar_orthonormality, check_vector_orthonormality};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x5eed_cafe;

type Scalar = Box<dyn Fn(f64) -> f64>;
type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn geom() -> CavityGeometry {
    CavityGeometry::new(1.0, 1.5).unwrap()
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

fn random_state(rng: &mut ChaCha8Rng, pool: &[ModeData], count: usize) -> FieldState {
    let mut picked: Vec<ModeData> = Vec::new();
    while picked.len() < count {
        let d = pool[rng.gen_range(0..pool.len())];
        if !picked.iter().any(|p| p.index == d.index) {
            picked.push(d);
        }
    }
    let entries = picked
        .into_iter()
        .map(|mode| ModeAmplitude {
            mode,
            amplitude: Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
        })
        .collect();
    FieldState::new(geom(), entries, 0.0).unwrap()
}

fn modes_of(state: &FieldState) -> Vec<ModeData> {
    state.entries().iter().map(|e| e.mode).collect()
}

fn bessel_zeros() -> Outcome {
    let start = Instant::now();
    let mut tables = Vec::new();
    for m in 0..=20u32 {
        for kind in [ZeroKind::J, ZeroKind::JPrime] {
            tables.push(BesselZeroTable::new(m, kind, 20));
        }
    }
    let elapsed = start.elapsed();

    let mut residual = 0.0f64;
    let mut oracle_diff = 0.0f64;
    for t in &tables {
        let m = t.order;
        let (lib, exact): (Scalar, Scalar) = match t.kind {
            ZeroKind::J => (
                Box::new(move |x| bessel_j(m as i32, x).unwrap()),
                Box::new(move |x| series_oracle_j(m, x)),
            ),
            ZeroKind::JPrime => (
                Box::new(move |x| bessel_j_prime(m as i32, x).unwrap()),
                Box::new(move |x| series_oracle_j_prime(m, x)),
            ),
        };
        // bracket by fine scan, then pure bisection on the exact series
        let brackets = scan_bisect_zeros(&lib, 0.01, 20);
        for (z, b) in t.zeros.iter().zip(&brackets) {
            residual = residual.max(lib(*z).abs());
            let oracle = bisect(&exact, b - 1e-7, b + 1e-7);
            oracle_diff = oracle_diff.max((z - oracle).abs() / oracle);
        }
    }
    let pass = residual < 1e-12 && oracle_diff < 1e-12 && elapsed < Duration::from_secs(5);
    outcome(
        pass,
        format!(
            "bessel zeros m,mu<=20 both kinds: max residual {residual:.2e} (<1e-12), \
             max rel diff to bisection oracle {oracle_diff:.2e} (<1e-12), {:.3} s (<5 s)",
            secs(elapsed)
        ),
    )
}

fn lowest_of_each(geom: &CavityGeometry, count: usize) -> [Vec<ModeData>; 2] {
    let mut pool = 4 * count;
    loop {
        let all = lowest_modes(geom, pool).unwrap();
        let split = [Polarization::TM, Polarization::TE]
            .map(|s| all.iter().filter(|d| d.index.sigma == s).take(count).copied().collect::<Vec<_>>());
        if split.iter().all(|v| v.len() == count) {
            return split;
        }
        pool *= 2;
    }
}

fn scalar_gram() -> Outcome {
    let g = geom();
    let start = Instant::now();
    let mut worst = 0.0f64;
    for set in lowest_of_each(&g, 15) {
        let rule = QuadratureRule::for_modes(&g, &set).unwrap();
        let rep = check_scalar_orthonormality(&g, &set, &rule).unwrap();
        worst = worst.max(rep.max_deviation());
    }
    let elapsed = start.elapsed();
    outcome(
        worst < 1e-8 && elapsed < Duration::from_secs(30),
        format!(
            "scalar inner products, 15 lowest modes per polarization: max relative deviation \
             {worst:.2e} (<1e-8), {:.2} s (<30 s)",
            secs(elapsed)
        ),
    )
}

fn vector_gram() -> Outcome {
    let g = geom();
    let start = Instant::now();
    let modes = lowest_modes(&g, 20).unwrap();
    let rule = QuadratureRule::for_modes(&g, &modes).unwrap();
    let rep = check_vector_orthonormality(&modes, &rule);
    let elapsed = start.elapsed();
    let pairs = modes.iter().filter(|d| d.index.m < 0).count();
    let dev = rep.max_deviation();
    outcome(
        dev < 1e-8 && elapsed < Duration::from_secs(120),
        format!(
            "vector Gram, 20 lowest modes ({pairs} negative-m partners, both polarizations): \
             max |G - I| {dev:.2e} (<1e-8), {:.2} s (<120 s)",
            secs(elapsed)
        ),
    )
}

fn boundary() -> Outcome {
    let g = geom();
    let c = g.constants().speed_of_light;
    let modes = enumerate_modes(&g, 10.0 * c).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 4);
    let (a, l) = (g.radius(), g.height());
    let pt = |r: f64, phi: f64, z: f64| CylPoint::new(&g, r, phi, z).unwrap();
    let mut worst = 0.0f64;
    for d in &modes {
        let amp = Complex64::from_polar(1.0, rng.gen_range(0.0..2.0 * PI));
        let t = rng.gen_range(0.0..2.0 * PI / d.omega);
        let s = FieldState::new(g, vec![ModeAmplitude { mode: *d, amplitude: amp }], 0.0)
            .unwrap()
            .evolve(t);
        // interior maxima on a grid; the walls are where the bound applies
        let (mut emax, mut bmax) = (0.0f64, 0.0f64);
        for i in 0..=16 {
            for j in 0..(4 * d.index.m.unsigned_abs() as usize + 8) {
                for k in 0..=16 {
                    let phi = 2.0 * PI * j as f64 / (4 * d.index.m.unsigned_abs() as usize + 8) as f64;
                    let p = pt(a * i as f64 / 16.0, phi, l * k as f64 / 16.0);
                    emax = emax.max(s.electric_field(&p).norm());
                    bmax = bmax.max(s.magnetic_field(&p).norm());
                }
            }
        }
        let mut viol = 0.0f64;
        for j in 0..24 {
            let phi = 2.0 * PI * j as f64 / 24.0 + 0.01;
            for k in 0..=12 {
                let side = pt(a, phi, l * k as f64 / 12.0);
                let e = s.electric_field(&side);
                let b = s.magnetic_field(&side);
                viol = viol.max(e.phi.abs().max(e.z.abs()) / emax).max(b.r.abs() / bmax);
                for z in [0.0, l] {
                    let cap = pt(a * k as f64 / 12.0, phi, z);
                    let e = s.electric_field(&cap);
                    let b = s.magnetic_field(&cap);
                    viol = viol.max(e.r.abs().max(e.phi.abs()) / emax).max(b.z.abs() / bmax);
                }
            }
        }
        worst = worst.max(viol);
    }
    outcome(
        worst < 1e-10,
        format!(
            "wall conditions for all {} modes with omega <= 10 c/a: max tangential E / normal B \
             relative to interior maxima {worst:.2e} (<1e-10)",
            modes.len()
        ),
    )
}

fn maxwell() -> Outcome {
    let g = geom();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 5);
    let pool = lowest_modes(&g, 40).unwrap();
    let s = random_state(&mut rng, &pool, 10).evolve(rng.gen_range(0.0..1e-8));
    let steps = [4e-3, 2e-3, 1e-3];
    let margin = 2.0 * steps[0];
    let pts: Vec<CylPoint> = (0..20)
        .map(|_| {
            CylPoint::new(
                &g,
                rng.gen_range(0.0..g.radius() - margin),
                rng.gen_range(0.0..2.0 * PI),
                rng.gen_range(margin..g.height() - margin),
            )
            .unwrap()
        })
        .collect();
    let res: Vec<[f64; 4]> = steps
        .iter()
        .map(|&h| maxwell_residual(&s, &pts, h).unwrap().as_array())
        .collect();
    let mut min_order = f64::INFINITY;
    for q in 0..4 {
        for w in res.windows(2) {
            min_order = min_order.min((w[0][q] / w[1][q]).log2());
        }
    }
    let names = ["div E", "div B", "faraday", "ampere"];
    let orders: Vec<String> = (0..4)
        .map(|q| format!("{} {:.3}", names[q], (res[1][q] / res[2][q]).log2()))
        .collect();
    outcome(
        min_order >= 1.9,
        format!(
            "Maxwell residuals, random 10-mode state, steps 4e-3/2e-3/1e-3 m: min order \
             {min_order:.3} (>=1.9); last halving: {}",
            orders.join(", ")
        ),
    )
}

fn energy() -> Outcome {
    let g = geom();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    let pool = lowest_modes(&g, 40).unwrap();
    let mut worst = 0.0f64;
    let mut drift = 0.0f64;
    for count in 1..=10 {
        let s = random_state(&mut rng, &pool, count);
        let rule = QuadratureRule::for_modes(&g, &modes_of(&s)).unwrap();
        let want = s.mode_energy_sum();
        let e0 = total_energy(&s, &rule);
        worst = worst.max((e0 / want - 1.0).abs());
        for _ in 0..10 {
            let e = total_energy(&s.evolve(rng.gen_range(0.0..1e-7)), &rule);
            worst = worst.max((e / want - 1.0).abs());
            drift = drift.max((e / e0 - 1.0).abs());
        }
    }
    outcome(
        worst < 1e-8 && drift < 1e-8,
        format!(
            "energy vs sum of hbar omega |a|^2, random states of 1..10 modes: max rel error \
             {worst:.2e} (<1e-8), max drift over 10 random times {drift:.2e} (<1e-8)"
        ),
    )
}

fn curl_identity() -> Outcome {
    let g = geom();
    let modes = lowest_modes(&g, 12).unwrap();
    let rule = QuadratureRule::for_modes(&g, &modes).unwrap();
    let rep = check_curl_identity(&modes, &rule);
    outcome(
        rep.max_relative_diagonal < 1e-8 && rep.max_abs_off_diagonal < 1e-12,
        format!(
            "curl identity, 12 lowest modes: diagonal rel {:.2e} (<1e-8), off-diagonal abs {:.2e} (<1e-12)",
            rep.max_relative_diagonal, rep.max_abs_off_diagonal
        ),
    )
}

fn polarization_split() -> Outcome {
    let g = geom();
    let mut min_split = f64::INFINITY;
    let mut checked = 0;
    for m in -5i32..=5 {
        for mu in 1..=5 {
            for n in 0..=5 {
                let (Ok(tm), Ok(te)) = (
                    ModeIndex::new(m, mu, n, Polarization::TM),
                    ModeIndex::new(m, mu, n, Polarization::TE),
                ) else {
                    continue;
                };
                let w1 = mode_data(&g, tm).unwrap().omega;
                let w2 = mode_data(&g, te).unwrap().omega;
                min_split = min_split.min((w1 - w2).abs() / w1);
                checked += 1;
            }
        }
    }
    outcome(
        min_split > 1e-6,
        format!("TM/TE frequency split over {checked} (m,mu,n) with |m|,mu,n<=5: min relative {min_split:.3e} (>1e-6)"),
    )
}

fn projection() -> Outcome {
    let g = geom();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 9);
    let pool = lowest_modes(&g, 40).unwrap();
    let s = random_state(&mut rng, &pool, 8);
    let modes = modes_of(&s);
    let rule = QuadratureRule::for_modes(&g, &modes).unwrap();
    let t = rng.gen_range(0.0..1e-7);
    let mut worst = 0.0f64;
    for st in [s.clone(), s.evolve(t)] {
        let got = project(&st, &g, &modes, &rule).unwrap();
        for (a, e) in got.iter().zip(st.entries()) {
            worst = worst.max((a - e.amplitude).norm());
        }
    }
    outcome(
        worst < 1e-8,
        format!("projection round trip, random 8-mode state at t=0 and t={t:.3e} s: max |a - a_true| {worst:.2e} (<1e-8)"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("1", bessel_zeros),
        ("2", scalar_gram),
        ("3", vector_gram),
        ("4", boundary),
        ("5", maxwell),
        ("6", energy),
        ("7", curl_identity),
        ("8", polarization_split),
        ("9", projection),
    ];
    let mut failed = 0;
    for (id, f) in criteria {
        let o = f();
        if !o.pass {
            failed += 1;
        }
        println!("[{}] criterion {id}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
