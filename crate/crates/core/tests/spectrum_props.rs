mod common;

use std::collections::BTreeSet;

use common::{bisect, series_oracle_j, series_oracle_j_prime};
use cylcavity::spectrum::{
    enumerate_modes, mode_data, CavityGeometry, ModeIndex, PhysicalConstants, Polarization,
};
use proptest::prelude::*;

fn key(i: &ModeIndex) -> (i32, u32, u32, u8) {
    (i.m, i.mu, i.n, i.sigma.number())
}

/// Every valid index in a box large enough to contain all modes below
/// `omega_max`, filtered by frequency.
fn brute_force(geom: &CavityGeometry, omega_max: f64) -> BTreeSet<(i32, u32, u32, u8)> {
    let c = geom.constants().speed_of_light;
    let kmax = omega_max / c;
    // χ_{mμ} > m and χ > μ, so these bounds are loose but safe
    let mmax = (kmax * geom.radius()) as i32 + 1;
    let mumax = (kmax * geom.radius()) as u32 + 1;
    let nmax = (kmax * geom.height() / std::f64::consts::PI) as u32 + 1;
    let mut out = BTreeSet::new();
    for m in -mmax..=mmax {
        for mu in 1..=mumax {
            for n in 0..=nmax {
                for s in [Polarization::TM, Polarization::TE] {
                    if let Ok(idx) = ModeIndex::new(m, mu, n, s) {
                        let d = mode_data(geom, idx).unwrap();
                        if d.omega <= omega_max {
                            out.insert(key(&idx));
                        }
                    }
                }
            }
        }
    }
    out
}

#[test]
fn enumeration_matches_brute_force_scan() {
    // includes cutoffs below the first J'_0 zero, where TE modes exist only
    // for |m| ≥ 1
    let cases = [
        (1.0, 1.0, 12.0),
        (0.3, 2.0, 25.0),
        (2.0, 0.2, 9.0),
        (1.0, 1.7, 18.0),
        (1.0, 20.0, 2.5),
        (1.0, 20.0, 3.5),
        (1.0, 3.0, 3.0),
    ];
    for (a, l, wmax) in cases {
        let g = CavityGeometry::with_constants(a, l, PhysicalConstants::unit()).unwrap();
        let list = enumerate_modes(&g, wmax).unwrap();
        let got: BTreeSet<_> = list.iter().map(|d| key(&d.index)).collect();
        assert_eq!(got.len(), list.len(), "duplicates for a={a} L={l}");
        assert_eq!(got, brute_force(&g, wmax), "a={a} L={l} omega_max={wmax}");
    }
}

#[test]
fn enumeration_is_sorted_and_prefix_closed() {
    let g = CavityGeometry::with_constants(1.0, 1.4, PhysicalConstants::unit()).unwrap();
    let big = enumerate_modes(&g, 14.0).unwrap();
    assert!(big.windows(2).all(|w| w[0].order_cmp(&w[1]).is_lt()));
    for wmax in [3.0, 5.5, 8.0, 11.0] {
        let small = enumerate_modes(&g, wmax).unwrap();
        assert_eq!(small.as_slice(), &big[..small.len()]);
        assert!(big[small.len()..].iter().all(|d| d.omega > wmax));
    }
}

#[test]
fn frequencies_scale_inversely_with_size() {
    let g = CavityGeometry::new(0.05, 0.08).unwrap();
    for lambda in [0.5, 3.0, 17.0] {
        let big = g.scaled(lambda).unwrap();
        for idx in [
            ModeIndex::new(0, 1, 0, Polarization::TM).unwrap(),
            ModeIndex::new(-3, 2, 4, Polarization::TE).unwrap(),
            ModeIndex::new(5, 3, 1, Polarization::TM).unwrap(),
        ] {
            let w = mode_data(&g, idx).unwrap().omega;
            let wl = mode_data(&big, idx).unwrap().omega;
            assert!((wl * lambda / w - 1.0).abs() < 1e-14);
        }
    }
}

#[test]
fn no_mode_has_zero_transverse_wavenumber() {
    let g = CavityGeometry::with_constants(1.0, 3.0, PhysicalConstants::unit()).unwrap();
    let list = enumerate_modes(&g, 15.0).unwrap();
    assert!(!list.is_empty());
    for d in &list {
        assert!(d.g > 0.0 && d.alpha > 0.0 && d.c_norm > 0.0, "{}", d.index);
        assert_eq!(d.k, (d.g * d.g + d.h * d.h).sqrt());
        assert_eq!(d.omega, g.constants().speed_of_light * d.k);
    }
}

#[test]
fn lowest_mode_depends_on_aspect_ratio() {
    // TM010 has χ = 2.405, TE111 has χ' = 1.841 plus the axial term, so
    // TM010 is lowest only for L < ~2.03 a.
    let chi01 = bisect(|x| series_oracle_j(0, x), 2.0, 3.0);
    let chi11p = bisect(|x| series_oracle_j_prime(1, x), 1.5, 2.5);
    let crossover = std::f64::consts::PI / (chi01 * chi01 - chi11p * chi11p).sqrt();
    assert!((crossover - 2.0301).abs() < 1e-3);

    let short = CavityGeometry::with_constants(1.0, 0.5, PhysicalConstants::unit()).unwrap();
    let list = enumerate_modes(&short, chi01 * (1.0 + 1e-9)).unwrap();
    assert_eq!(key(&list[0].index), (0, 1, 0, 1));
    assert_eq!(list.len(), 1);

    let long = CavityGeometry::with_constants(1.0, 20.0, PhysicalConstants::unit()).unwrap();
    let list = enumerate_modes(&long, chi01 * (1.0 + 1e-9)).unwrap();
    assert_eq!((list[0].index.m.abs(), list[0].index.mu, list[0].index.n), (1, 1, 1));
    assert_eq!(list[0].index.sigma, Polarization::TE);
    assert!(list.iter().any(|d| key(&d.index) == (0, 1, 0, 1)));
}

#[test]
fn tm010_example() {
    let g = CavityGeometry::new(1.0, 1.0).unwrap();
    let d = mode_data(&g, ModeIndex::new(0, 1, 0, Polarization::TM).unwrap()).unwrap();
    let chi = bisect(|x| series_oracle_j(0, x), 2.0, 3.0);
    let c = g.constants().speed_of_light;
    assert!((d.omega / (c * chi) - 1.0).abs() < 1e-15);
    assert!((d.omega / (c * 2.404825557695773) - 1.0).abs() < 1e-15);
    assert_eq!(d.h, 0.0);
    assert_eq!(d.k, d.g);
    let j1 = series_oracle_j(1, chi);
    assert!((d.alpha - j1 * j1).abs() < 1e-15);
    assert!(enumerate_modes(&g, 0.99 * d.omega).unwrap().is_empty());
}

#[test]
fn polarizations_never_share_a_frequency() {
    let g = CavityGeometry::new(1.0, 1.0).unwrap();
    for m in 0..=5 {
        for mu in 1..=5 {
            for n in 1..=5 {
                let tm = mode_data(&g, ModeIndex::new(m, mu, n, Polarization::TM).unwrap()).unwrap();
                let te = mode_data(&g, ModeIndex::new(m, mu, n, Polarization::TE).unwrap()).unwrap();
                assert!(((tm.omega - te.omega) / tm.omega).abs() > 1e-6, "({m},{mu},{n})");
            }
        }
    }
}

proptest! {
    #[test]
    fn sign_of_m_does_not_change_the_spectrum(m in 1i32..12, mu in 1u32..6, n in 1u32..6, te in any::<bool>()) {
        let g = CavityGeometry::new(0.7, 1.1).unwrap();
        let s = if te { Polarization::TE } else { Polarization::TM };
        let a = mode_data(&g, ModeIndex::new(m, mu, n, s).unwrap()).unwrap();
        let b = mode_data(&g, ModeIndex::new(-m, mu, n, s).unwrap()).unwrap();
        prop_assert_eq!(a.chi, b.chi);
        prop_assert_eq!(a.omega, b.omega);
        prop_assert_eq!(a.c_norm, b.c_norm);
    }
}
