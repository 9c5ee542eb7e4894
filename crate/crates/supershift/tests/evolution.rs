use num_complex::Complex64 as C64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use std::f64::consts::PI;
use supershift::evolution::*;
use supershift::greens::GreensFunctionSpec;
use supershift::quadrature::QuadratureConfig;
use supershift::superosc::{aq_distance, build_supershift_plane_waves, GrowthBound, PlaneWaves};

const I: C64 = C64 { re: 0.0, im: 1.0 };

fn prop(spec: GreensFunctionSpec) -> Propagator {
    Propagator::new(spec, DEFAULT_THETA, QuadratureConfig::default()).unwrap()
}

fn problem(spec: GreensFunctionSpec, initial: InitialData) -> EvolutionProblem {
    EvolutionProblem::new(spec, initial, DEFAULT_THETA, QuadratureConfig::default()).unwrap()
}

fn point(phi: f64, a: C64, b: C64) -> GreensFunctionSpec {
    GreensFunctionSpec::PointInteraction { phi, a_j: a, b_j: b }
}

fn dirichlet() -> GreensFunctionSpec {
    point(0.0, C64::new(-1.0, 0.0), C64::new(0.0, 0.0))
}

fn all_variants() -> Vec<GreensFunctionSpec> {
    vec![
        GreensFunctionSpec::Free,
        GreensFunctionSpec::CentrifugalAttractive { lambda: -3.0 / 16.0 },
        GreensFunctionSpec::CentrifugalAttractive { lambda: -0.5 },
        GreensFunctionSpec::CentrifugalRepulsive { lambda: 1.0 },
        point(0.0, C64::new(0.0, 0.0), C64::new(1.0, 0.0)),
        point(0.9, C64::new(0.36, 0.48), C64::new(0.48, -0.64)),
        point(PI / 2.0, C64::new(0.0, 0.0), C64::new(1.0, 0.0)),
        dirichlet(),
    ]
}

fn sine() -> InitialData {
    InitialData::custom(|z: C64| z.sin(), GrowthBound { a: 1.0, b: 1.0, p: 1.0 })
}

fn random_unitary(rng: &mut impl Rng) -> GreensFunctionSpec {
    let v: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    point(rng.gen_range(0.0..PI), C64::new(v[0], v[1]) / n, C64::new(v[2], v[3]) / n)
}

#[test]
fn free_examples() {
    let p = problem(GreensFunctionSpec::Free, InitialData::plane_wave(2.0));
    assert!((p.evolve(0.5, 1.0).unwrap().value - 1.0).norm() < 1e-11);
    let one = problem(GreensFunctionSpec::Free, InitialData::plane_wave(0.0));
    for (t, x) in [(0.1, -3.0), (1.0, 0.2), (2.5, 4.0)] {
        assert!((one.evolve(t, x).unwrap().value - 1.0).norm() < 1e-11);
    }
}

#[test]
fn dirichlet_sine_vanishes_at_origin() {
    let p = problem(dirichlet(), sine());
    let (plus, minus) = p.boundary_values(0.3).unwrap();
    assert!(plus.norm() < 1e-10 && minus.norm() < 1e-10, "{plus} {minus}");
}

#[test]
fn grid_reduces_to_points() {
    let p = problem(GreensFunctionSpec::Free, InitialData::plane_wave(2.0));
    for (t, x) in [(0.5, 1.0), (0.2, -0.7), (1.0, 3.0)] {
        let w = p.evolve_grid(&[t], &[x]).unwrap();
        assert_eq!(w.get(0, 0).value, p.evolve(t, x).unwrap().value);
    }
    let w = p.evolve_grid(&[0.3], &[-1.0, 0.5, 2.0]).unwrap();
    assert_eq!(w.values.len(), 3);
    assert_eq!(w.meta.unconverged, 0);
    assert!(p.evolve_grid(&[0.3], &[-1.0, 0.0, 1.0]).is_err());
    assert!(p.evolve_grid(&[0.3], &[1.0, -1.0]).is_err());
    assert!(p.evolve_grid(&[0.3], &[]).is_err());
    assert!(p.evolve_grid(&[0.0], &[1.0]).is_err());
}

#[test]
fn grid_flags_cells_instead_of_failing() {
    let mut cfg = QuadratureConfig::default();
    cfg.max_nodes = 64;
    let p = EvolutionProblem::new(GreensFunctionSpec::Free, InitialData::plane_wave(3.0), DEFAULT_THETA, cfg).unwrap();
    let w = p.evolve_grid(&[0.05, 0.5], &[1.0, 2.0]).unwrap();
    assert_eq!(w.values.len(), 4);
    assert!(w.meta.unconverged > 0);
    assert_eq!(w.meta.unconverged, w.values.iter().filter(|v| !v.converged).count());
}

#[test]
fn free_traces() {
    let (k, t) = (1.7, 0.4);
    let b = problem(GreensFunctionSpec::Free, InitialData::plane_wave(k)).boundary_trace(t).unwrap();
    let v = (-I * k * k * t).exp();
    for (got, want) in [(b.psi_plus, v), (b.psi_minus, v), (b.dpsi_plus, I * k * v), (b.dpsi_minus, I * k * v)] {
        assert!((got - want).norm() < 1e-9, "{got} {want}");
    }
}

#[test]
fn centrifugal_traces() {
    for spec in [
        GreensFunctionSpec::CentrifugalAttractive { lambda: -3.0 / 16.0 },
        GreensFunctionSpec::CentrifugalAttractive { lambda: -0.5 },
        GreensFunctionSpec::CentrifugalAttractive { lambda: -2.0 },
        GreensFunctionSpec::CentrifugalRepulsive { lambda: 1.0 },
    ] {
        let p = problem(spec, InitialData::plane_wave(2.0));
        let (plus, minus) = p.boundary_values(0.3).unwrap();
        assert!(plus.norm() < 1e-9 && minus.norm() < 1e-9, "{spec:?} {plus} {minus}");
        assert!(matches!(p.boundary_trace(0.3), Err(EvolutionError::Capability(_))));
        assert!(p.transmission_residual(0.3).unwrap() < 1e-9);
    }
}

#[test]
fn transmission_random_interfaces() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(7);
    for _ in 0..5 {
        let spec = random_unitary(&mut rng);
        let p = problem(spec, InitialData::plane_wave(1.5));
        for t in [0.1, 0.5] {
            let r = p.transmission_residual(t).unwrap();
            assert!(r < 1e-7, "{spec:?} t={t} residual {r}");
        }
    }
}

#[test]
fn dirichlet_trace_decreases() {
    for spec in [
        GreensFunctionSpec::CentrifugalAttractive { lambda: -3.0 / 16.0 },
        GreensFunctionSpec::CentrifugalAttractive { lambda: -0.5 },
        GreensFunctionSpec::CentrifugalRepulsive { lambda: 1.0 },
    ] {
        let p = problem(spec, InitialData::plane_wave(2.0));
        for side in [1.0, -1.0] {
            let m: Vec<f64> = (1..=5).map(|k| p.evolve(0.3, side * 10f64.powi(-k)).unwrap().value.norm()).collect();
            assert!(m.windows(2).all(|w| w[1] < w[0]), "{spec:?} {m:?}");
        }
    }
}

#[test]
fn initial_recovery() {
    let k = 1.5;
    let p = problem(GreensFunctionSpec::Free, InitialData::plane_wave(k));
    let ts = [0.1, 0.01, 0.001];
    for r in p.initial_recovery_scan(0.8, &ts).unwrap() {
        assert!((r.error - 2.0 * (k * k * r.t / 2.0).sin().abs()).abs() < 1e-10);
    }
    let one = problem(GreensFunctionSpec::Free, InitialData::plane_wave(0.0));
    assert!(one.initial_recovery_scan(-0.4, &ts).unwrap().iter().all(|r| r.error < 1e-10));
    let att = problem(GreensFunctionSpec::CentrifugalAttractive { lambda: -3.0 / 16.0 }, InitialData::plane_wave(2.0));
    let rows = att.initial_recovery_scan(1.0, &[1e-1, 1e-2, 1e-3, 1e-4]).unwrap();
    assert!(rows.windows(2).all(|w| w[1].error < w[0].error), "{rows:?}");
}

#[test]
fn schrodinger_residual_per_variant() {
    for spec in all_variants() {
        let p = problem(spec, InitialData::plane_wave(1.3));
        let (t, x) = (0.4, 0.9);
        let r1 = p.psi_schrodinger_residual(t, x, 0.02, 0.02).unwrap();
        let r2 = p.psi_schrodinger_residual(t, x, 0.01, 0.01).unwrap();
        let extrapolated = (4.0 * r2 - r1) / 3.0;
        let order = (r1.norm() / r2.norm()).log2();
        assert!(extrapolated.norm() < 1e-5, "{spec:?} {extrapolated}");
        assert!((1.8..=2.2).contains(&order), "{spec:?} order {order}");
    }
    let p = problem(GreensFunctionSpec::Free, InitialData::plane_wave(1.0));
    assert!(p.psi_schrodinger_residual(0.4, 0.01, 0.01, 0.02).is_err());
    assert!(p.psi_schrodinger_residual(0.01, 0.5, 0.02, 0.01).is_err());
}

#[test]
fn rotated_matches_regularized() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(11);
    for spec in all_variants() {
        let p = prop(spec);
        for _ in 0..5 {
            let t = rng.gen_range(0.15..1.0);
            let x = rng.gen_range(0.3..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            let f = InitialData::plane_wave(rng.gen_range(-2.0..2.0));
            let a = p.psi(&f, t, x).unwrap().value;
            let b = p.psi_regularized_limit(&f, t, x, &PSI_EPS_LADDER).unwrap();
            assert!((a - b).norm() < 1e-6, "{spec:?} t={t} x={x} {a} {b}");
        }
    }
}

#[test]
fn regularized_respects_ceiling() {
    let p = prop(GreensFunctionSpec::Free);
    let f = InitialData::plane_wave(1.0);
    assert!(p.psi_regularized(&f, 0.5, 1.0, 1.5, 0.0).is_err());
    assert!(p.psi_regularized(&f, 0.5, 1.0, 0.0, 0.0).is_err());
    assert!(p.psi_regularized(&f, 0.5, 1.0, 0.01, 0.0).is_ok());
}

#[test]
fn continuous_dependence_constant() {
    let (t, kappa) = (0.2, 3.0);
    let p = prop(GreensFunctionSpec::Free);
    let target = InitialData::plane_wave(kappa);
    let measure = |samples: usize| -> Vec<f64> {
        let xs = Compact::new(0.5, 2.0, samples).unwrap().points();
        [5, 10, 20, 40]
            .iter()
            .map(|&n| {
                let fnn = InitialData::superosc(1.0, kappa, n).unwrap();
                let shift = build_supershift_plane_waves(1.0, kappa, n).unwrap();
                let d = aq_distance(|z| shift.member(z), |z| shift.target(z), 3.5, 1.0, 10.0, 40);
                let sup = xs
                    .iter()
                    .map(|&x| (p.psi(&fnn, t, x).unwrap().value - p.psi(&target, t, x).unwrap().value).norm())
                    .fold(0.0, f64::max);
                sup / d
            })
            .collect()
    };
    let coarse = measure(31);
    let fine = measure(61);
    let (c1, c2) = (coarse.iter().cloned().fold(0.0, f64::max), fine.iter().cloned().fold(0.0, f64::max));
    assert!(c1.is_finite() && c1 > 0.0);
    assert!((c1 - c2).abs() < 0.05 * c2, "{coarse:?} {fine:?}");
}

#[test]
fn supershift_free_matches_closed_form() {
    let (k0, kappa, t) = (1.0, 3.0, 0.2);
    let c = Compact::new(0.5, 2.0, 101).unwrap();
    let rows = prop(GreensFunctionSpec::Free).supershift_scan(&PlaneWaves, k0, kappa, &[4, 8, 16], t, &c).unwrap();
    for r in &rows {
        let s = build_supershift_plane_waves(k0, kappa, r.n).unwrap();
        let exact = c
            .points()
            .iter()
            .map(|&x| {
                let psi: C64 = s.coefficients.iter().zip(&s.nodes).map(|(&cl, &k)| cl * (I * (k * x - k * k * t)).exp()).sum();
                (psi - (I * (kappa * x - kappa * kappa * t)).exp()).norm()
            })
            .fold(0.0, f64::max);
        assert!((r.sup_error - exact).abs() < 1e-8, "{r:?} {exact}");
        assert!(r.linearity_residual < 1e-8 && r.converged);
        assert_eq!(r.step, 0.015);
    }
    assert!(rows.windows(2).all(|w| w[1].sup_error < w[0].sup_error), "{rows:?}");
}

#[test]
fn supershift_dirichlet_nonincreasing() {
    let c = Compact::new(0.5, 2.0, 51).unwrap();
    let rows = prop(dirichlet()).supershift_scan(&PlaneWaves, 1.0, 3.0, &[4, 8, 16], 0.2, &c).unwrap();
    assert!(rows[1..].windows(2).all(|w| w[1].sup_error <= w[0].sup_error), "{rows:?}");
    assert!(rows.iter().all(|r| r.linearity_residual < 1e-8));
}

#[test]
fn supershift_rejects_bad_input() {
    let p = prop(GreensFunctionSpec::Free);
    let c = Compact::new(0.5, 2.0, 11).unwrap();
    assert!(p.supershift_scan(&PlaneWaves, 1.0, 0.5, &[4], 0.2, &c).is_err());
    assert!(p.supershift_scan(&PlaneWaves, 1.0, 3.0, &[4], 0.0, &c).is_err());
    assert!(p.supershift_scan(&PlaneWaves, 1.0, 3.0, &[], 0.2, &c).unwrap().is_empty());
}

#[test]
fn kappa_holomorphy() {
    let tri = [C64::new(1.0, 0.0), C64::new(2.0, 0.0), C64::new(1.5, 0.5)];
    let free = prop(GreensFunctionSpec::Free).kappa_holomorphy_check(&PlaneWaves, 0.3, 1.0, tri, 16).unwrap();
    assert!(free.integral.norm() < 1e-7, "{free:?}");
    let degenerate = [tri[0], tri[0], tri[0]];
    let d = prop(GreensFunctionSpec::Free).kappa_holomorphy_check(&PlaneWaves, 0.3, 1.0, degenerate, 16).unwrap();
    assert_eq!(d.integral, C64::new(0.0, 0.0));

    let p = prop(point(0.0, C64::new(0.0, 0.0), C64::new(1.0, 0.0)));
    let r = p.kappa_holomorphy_check(&PlaneWaves, 0.3, 1.0, tri, 16).unwrap();
    let perimeter: f64 = (0..3).map(|i| (tri[(i + 1) % 3] - tri[i]).norm()).sum();
    let scale = tri.iter().map(|&k| p.psi(&InitialData::PlaneWave { k }, 0.3, 1.0).unwrap().value.norm()).fold(0.0, f64::max);
    let tol = p.cfg().rel_tol * perimeter * scale;
    assert!(r.integral.norm() < 10.0 * tol, "{r:?} tol {tol}");
}

#[test]
fn dirichlet_odd_data_gives_odd_solution() {
    let p = problem(dirichlet(), sine());
    for (t, x) in [(0.2, 0.3), (0.7, 1.5)] {
        let (a, b) = (p.evolve(t, x).unwrap().value, p.evolve(t, -x).unwrap().value);
        assert!((a + b).norm() < 1e-10 * a.norm().max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn free_modulus_is_one(t in 0.05f64..2.0, x in 0.05f64..5.0, k in -4.0f64..4.0, s in proptest::bool::ANY) {
        let x = if s { x } else { -x };
        let v = prop(GreensFunctionSpec::Free).psi(&InitialData::plane_wave(k), t, x).unwrap().value;
        prop_assert!((v.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn linear_in_data(t in 0.1f64..1.0, x in 0.2f64..2.0, k1 in -2.0f64..2.0, k2 in -2.0f64..2.0) {
        let p = prop(point(0.9, C64::new(0.36, 0.48), C64::new(0.48, -0.64)));
        let sum = InitialData::custom(move |z: C64| (I * k1 * z).exp() + (I * k2 * z).exp(), GrowthBound { a: 2.0, b: k1.abs().max(k2.abs()), p: 1.0 });
        let a = p.psi(&sum, t, x).unwrap().value;
        let b = p.psi(&InitialData::plane_wave(k1), t, x).unwrap().value + p.psi(&InitialData::plane_wave(k2), t, x).unwrap().value;
        prop_assert!((a - b).norm() < 1e-9 * b.norm().max(1.0));
    }

    #[test]
    fn centrifugal_reflection(t in 0.1f64..1.0, x in 0.2f64..2.0, k in -2.0f64..2.0, lambda in -1.0f64..2.0) {
        prop_assume!((lambda + 0.25).abs() > 0.05 && lambda.abs() > 0.05);
        let spec = if lambda < 0.0 {
            GreensFunctionSpec::CentrifugalAttractive { lambda }
        } else {
            GreensFunctionSpec::CentrifugalRepulsive { lambda }
        };
        let p = prop(spec);
        let a = p.psi(&InitialData::plane_wave(k), t, x).unwrap().value;
        let b = p.psi(&InitialData::plane_wave(-k), t, -x).unwrap().value;
        prop_assert!((a - b).norm() < 1e-10 * a.norm().max(1.0));
    }

    #[test]
    fn poly_exp_is_polynomial_times_wave(t in 0.1f64..1.0, x in 0.2f64..2.0) {
        // Ψ(t,x; z e^{ikz}) = (x − 2kt) e^{ikx−ik²t} in the free case
        let k = 0.7;
        let p = prop(GreensFunctionSpec::Free);
        let f = InitialData::PolyExp { coeffs: vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)], k };
        let v = p.psi(&f, t, x).unwrap().value;
        let exact = (x - 2.0 * k * t) * (I * (k * x - k * k * t)).exp();
        prop_assert!((v - exact).norm() < 1e-10 * exact.norm().max(1.0));
    }
}
