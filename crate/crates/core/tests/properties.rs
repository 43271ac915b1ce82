use num_complex::Complex64;
use proptest::prelude::*;

use leakywire::bs2d::{build_d_matrix, d_single, KappaPoint};
use leakywire::bs3d::{build_d_matrix_3d, d_single_3d, find_eigenvalues_3d};
use leakywire::cli::config::{GridKind, GridSpec};
use leakywire::cli::output::{Cell, Results};
use leakywire::exec;
use leakywire::quadrature::{integrate_real, QuadratureConfig};
use leakywire::resonance2d::phi_physical;
use leakywire::scattering2d::amplitudes;
use leakywire::specfun::{macdonald_k0, s_beta, sqrt_cut_positive};
use leakywire::spectrum2d::find_eigenvalues;
use leakywire::{Dimension, Site, SystemSpec};

fn cfg() -> ProptestConfig {
    ProptestConfig { cases: 32, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(cfg())]

    #[test]
    fn sqrt_on_negative_axis(kappa in 1e-6f64..1e6) {
        let w = sqrt_cut_positive(Complex64::new(-kappa * kappa, 0.0));
        prop_assert_eq!(w.re, 0.0);
        prop_assert!((w.im - kappa).abs() <= 4.0 * f64::EPSILON * kappa);
        let s = s_beta(0.3, Complex64::new(-kappa * kappa, 0.0)).unwrap();
        prop_assert!(s.im.abs() < 1e-15);
    }

    #[test]
    fn k0_real_on_positive_axis(x in 1e-3f64..50.0) {
        prop_assert_eq!(macdonald_k0(Complex64::new(x, 0.0)).unwrap().im, 0.0);
    }

    #[test]
    fn k0_cauchy_riemann(r in 0.1f64..10.0, theta in 0.05f64..3.0, sign in prop::bool::ANY) {
        let theta = if sign { theta } else { -theta };
        let z = Complex64::from_polar(r, theta);
        let h = 1e-5 * r;
        let f = |w: Complex64| macdonald_k0(w).unwrap();
        let dx = (f(z + h) - f(z - h)) / (2.0 * h);
        let dy = (f(z + Complex64::new(0.0, h)) - f(z - Complex64::new(0.0, h))) / (2.0 * h);
        // CR: ∂f/∂y = i ∂f/∂x
        let scale = dx.norm().max(1e-300);
        prop_assert!((dy - Complex64::i() * dx).norm() / scale.max(1.0) < 1e-6);
    }

    #[test]
    fn quadrature_is_linear(p in 0.2f64..5.0, q in 0.1f64..3.0, ca in -3.0f64..3.0, cb in -3.0f64..3.0) {
        let c = QuadratureConfig::default();
        let f = |t: f64| (-p * t).exp();
        let g = |t: f64| 1.0 / (1.0 + q * t * t);
        let i_f = integrate_real(f, 0.0, 10.0, &c).unwrap();
        let i_g = integrate_real(g, 0.0, 10.0, &c).unwrap();
        let i_h = integrate_real(|t| ca * f(t) + cb * g(t), 0.0, 10.0, &c).unwrap();
        let lin = ca * i_f.value.re + cb * i_g.value.re;
        let bound = ca.abs() * i_f.error_estimate + cb.abs() * i_g.error_estimate + i_h.error_estimate + 1e-13 * (1.0 + lin.abs());
        prop_assert!((i_h.value.re - lin).abs() <= bound, "{} vs {}", i_h.value.re, lin);
    }

    #[test]
    fn quadrature_is_deterministic(p in 0.2f64..5.0) {
        let c = QuadratureConfig::default();
        let a = integrate_real(|t| (-p * t).exp() * t.cos(), 0.0, 7.0, &c).unwrap();
        let b = integrate_real(|t| (-p * t).exp() * t.cos(), 0.0, 7.0, &c).unwrap();
        prop_assert_eq!(a.value.re.to_bits(), b.value.re.to_bits());
    }

    #[test]
    fn single_site_d_increasing(alpha in 0.5f64..4.0, beta in -1.0f64..1.0, a in 0.1f64..5.0) {
        let c = QuadratureConfig::default();
        let values: Vec<f64> = (0..100)
            .map(|i| {
                let kappa = 0.5 * alpha * (1.0 + 1e-3 * 1.08f64.powi(i));
                d_single(alpha, beta, a, KappaPoint::new(alpha, kappa).unwrap(), &c).unwrap()
            })
            .collect();
        prop_assert!(values.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn single_site_d3_increasing(alpha in 0.5f64..4.0, beta in -0.5f64..0.5, a in 0.1f64..5.0) {
        let values: Vec<f64> = (0..60)
            .map(|i| {
                let kappa = 0.5 * alpha * (1.0 + 1e-3 * 1.15f64.powi(i));
                d_single_3d(alpha, beta, a, KappaPoint::new(alpha, kappa).unwrap()).unwrap()
            })
            .collect();
        prop_assert!(values.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn diagonal_monotone_in_beta(b0 in -0.5f64..0.5, db in 0.01f64..1.0, l in -2.0f64..2.0, kf in 1.01f64..5.0) {
        let alpha = 2.0;
        let mk = |b: f64| SystemSpec::new(Dimension::Two, alpha, vec![Site::planar(0.0, 1.0, b), Site::planar(l, -0.7, 0.2)]).unwrap();
        let lo = build_d_matrix(&mk(b0), kf).unwrap().entries;
        let hi = build_d_matrix(&mk(b0 + db), kf).unwrap().entries;
        prop_assert!(hi[(0, 0)] > lo[(0, 0)]);
        prop_assert_eq!(hi[(1, 1)], lo[(1, 1)]);
        prop_assert_eq!(hi[(0, 1)], lo[(0, 1)]);
    }

    #[test]
    fn diagonal_dominance_at_large_kappa(l in -2.0f64..2.0, a in 0.3f64..2.0) {
        let spec = SystemSpec::new(Dimension::Two, 2.0, vec![Site::planar(0.0, a, 0.0), Site::planar(l, -a, 0.0)]).unwrap();
        let off = |kappa: f64| build_d_matrix(&spec, kappa).unwrap().entries[(0, 1)].abs();
        prop_assert!(off(50.0) < off(5.0));
        prop_assert!(off(50.0) < 1e-10);
    }

    #[test]
    fn amplitudes_structure(beta in -0.3f64..0.5, a in 0.3f64..5.0, frac in 0.01f64..0.99) {
        let alpha = 3.0;
        let lambda = -0.25 * alpha * alpha * frac;
        let s = amplitudes(alpha, beta, a, lambda).unwrap();
        prop_assert_eq!(s.transmission - s.reflection, Complex64::new(1.0, 0.0));
        prop_assert!(s.unitarity_defect() < 1e-10);
        prop_assert_eq!(s, amplitudes(alpha, beta, -a, lambda).unwrap());
    }

    #[test]
    fn physical_sheet_schwarz(re in -6.0f64..2.0, im in 0.05f64..2.0, a in 0.3f64..3.0) {
        let c = QuadratureConfig::default();
        let z = Complex64::new(re, im);
        let up = phi_physical(z, 3.0, a, &c).unwrap();
        let down = phi_physical(z.conj(), 3.0, a, &c).unwrap();
        prop_assert!((up.conj() - down).norm() < 1e-10 * (1.0 + up.norm()));
    }

    #[test]
    fn grid_endpoints_and_monotone(from in 0.01f64..10.0, span in 0.01f64..100.0, count in 2usize..50, geo in prop::bool::ANY) {
        let kind = if geo { GridKind::Geometric } else { GridKind::Linear };
        let g = GridSpec { kind, from, to: from + span, count };
        let v = g.values().unwrap();
        prop_assert_eq!(v.len(), count);
        prop_assert_eq!(v[0], from);
        prop_assert_eq!(v[count - 1], from + span);
        prop_assert!(v.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn results_json_round_trip(xs in prop::collection::vec(prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL | prop::num::f64::ZERO, 1..20)) {
        let mut r = Results::new("spectrum", vec!["x".into(), "flag".into()]);
        for x in &xs {
            r.push(vec![Cell::Float(*x), Cell::Bool(*x > 0.0)]);
        }
        let back = Results::from_json(&r.to_json()).unwrap();
        prop_assert!(r.identical(&back));
    }

    #[test]
    fn parallel_map_matches_sequential(xs in prop::collection::vec(-1e3f64..1e3, 0..200)) {
        let f = |x: &f64| x.sin() * x.exp2();
        let par = exec::map(&xs, f);
        let seq = exec::map_sequential(&xs, f);
        prop_assert_eq!(par.iter().map(|x| x.to_bits()).collect::<Vec<_>>(), seq.iter().map(|x| x.to_bits()).collect::<Vec<_>>());
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 8, ..ProptestConfig::default() })]

    #[test]
    fn root_count_bounds(
        alpha in 1.0f64..3.0,
        sites in prop::collection::vec((-3.0f64..3.0, 0.3f64..3.0, prop::bool::ANY, -0.3f64..0.5), 1..=4),
    ) {
        let sites: Vec<Site> = sites
            .iter()
            .enumerate()
            .map(|(i, &(l, a, up, b))| Site::planar(l + 7.0 * i as f64, if up { a } else { -a }, b))
            .collect();
        let n = sites.len();
        let spec = SystemSpec::new(Dimension::Two, alpha, sites).unwrap();
        let r = find_eigenvalues(&spec, 1e-10).unwrap();
        prop_assert!((1..=n).contains(&r.count()));
        prop_assert!(r.energies.iter().all(|e| *e <= spec.threshold()));
        // κ − α/2 is kept separately: −κ² can round onto −α²/4 when the offset is tiny
        prop_assert!(r.roots.iter().filter(|x| x.resolved).all(|x| x.threshold_offset > 0.0 && x.energy <= spec.threshold()));
    }

    #[test]
    fn three_dimensional_roots_below_threshold(alpha in 1.0f64..4.0, beta in -0.3f64..0.3, a in 0.2f64..3.0, x in 0.5f64..3.0) {
        let spec = SystemSpec::new(
            Dimension::Three,
            alpha,
            vec![Site::spatial(0.0, 0.0, a, beta), Site::spatial(x, 0.0, -a, beta)],
        )
        .unwrap();
        let r = find_eigenvalues_3d(&spec, 1e-10).unwrap();
        prop_assert!((1..=2).contains(&r.count()));
        // κ − α/2 is kept separately: −κ² can round onto −α²/4 when the offset is tiny
        prop_assert!(r.roots.iter().filter(|x| x.resolved).all(|x| x.threshold_offset > 0.0 && x.energy <= spec.threshold()));
        let m = build_d_matrix_3d(&spec, 2.0 * alpha).unwrap();
        prop_assert_eq!(m.entries[(0, 1)], m.entries[(1, 0)]);
    }
}
