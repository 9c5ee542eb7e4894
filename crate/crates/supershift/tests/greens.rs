use num_complex::Complex64 as C64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use serde_json::Value;
use std::f64::consts::PI;
use supershift::greens::*;
use supershift::specfun::lambda_fn;

fn cx(v: &Value) -> C64 {
    C64::new(v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

fn centrifugal(lambda: f64) -> GreensFunctionSpec {
    if lambda < 0.0 {
        GreensFunctionSpec::CentrifugalAttractive { lambda }
    } else {
        GreensFunctionSpec::CentrifugalRepulsive { lambda }
    }
}

fn random_unitary(rng: &mut impl Rng) -> GreensFunctionSpec {
    let r: f64 = rng.gen_range(0.0..1.0);
    let a = C64::from_polar(r, rng.gen_range(0.0..2.0 * PI));
    let b = C64::from_polar((1.0 - r * r).sqrt(), rng.gen_range(0.0..2.0 * PI));
    GreensFunctionSpec::PointInteraction { phi: rng.gen_range(0.0..PI), a_j: a, b_j: b }
}

#[test]
fn matches_reference_values() {
    let data: Value = serde_json::from_str(include_str!("data/greens_reference.json")).unwrap();
    let mut worst: f64 = 0.0;
    for e in data.as_array().unwrap() {
        let spec = if e["variant"] == "centrifugal" {
            centrifugal(e["lambda"].as_f64().unwrap())
        } else {
            GreensFunctionSpec::PointInteraction { phi: e["phi"].as_f64().unwrap(), a_j: cx(&e["a"]), b_j: cx(&e["b"]) }
        };
        let (t, x, z) = (e["t"].as_f64().unwrap(), e["x"].as_f64().unwrap(), cx(&e["z"]));
        let got = eval_green(&spec, t, x, z).unwrap().value;
        let want = cx(&e["g"]);
        let err = (got - want).norm() / want.norm().max(1e-300);
        worst = worst.max(if want.norm() == 0.0 { got.norm() } else { err });
        if want.norm() == 0.0 {
            assert_eq!(got, C64::new(0.0, 0.0));
        } else {
            assert!(err < 1e-11, "{spec:?} t={t} x={x} z={z} got={got} want={want}");
        }
    }
    println!("worst relative error {worst:e}");
}

#[test]
fn attractive_quarter_order_example() {
    let e = eval_green(&GreensFunctionSpec::CentrifugalAttractive { lambda: -3.0 / 16.0 }, 0.5, 1.0, C64::new(2.0, 0.0)).unwrap();
    // √2/(4 i^{5/4}·0.5)·e^{−5/(2i)}·H_{1/4}^{(2)}(2), evaluated with mpmath
    let want = C64::new(0.38371934301920246, -0.09491055006729071);
    assert!((e.value - want).norm() < 1e-12);
}

#[test]
fn kernel_equals_value() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(3);
    let specs = [
        GreensFunctionSpec::Free,
        centrifugal(-0.1),
        centrifugal(-1.3),
        centrifugal(0.7),
        random_unitary(&mut rng),
        random_unitary(&mut rng),
    ];
    for spec in specs {
        let g = Green::new(spec).unwrap();
        for _ in 0..50 {
            let t = rng.gen_range(0.05..1.0);
            let x: f64 = rng.gen_range(0.1..3.0) * if rng.gen() { 1.0 } else { -1.0 };
            let z = C64::new(x.signum() * rng.gen_range(0.05..3.0), x.signum() * rng.gen_range(0.0..1.0));
            let (k, _) = g.kernel(t, x, z).unwrap();
            let v = g.eval(t, x, z).unwrap().value;
            assert!((k - v).norm() <= 1e-12 * v.norm().max(1e-300), "{spec:?} {t} {x} {z}");
        }
    }
}

#[test]
fn decomposition_exactness() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(11);
    let specs = [GreensFunctionSpec::Free, centrifugal(-0.3), centrifugal(2.0), random_unitary(&mut rng)];
    let mut worst: f64 = 0.0;
    for spec in specs {
        let g = Green::new(spec).unwrap();
        for _ in 0..250 {
            let t = rng.gen_range(0.05..2.0);
            let x: f64 = rng.gen_range(-3.0..3.0);
            if x.abs() < 1e-3 {
                continue;
            }
            let z = C64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-1.0..1.0));
            let e = g.eval(t, x, z).unwrap();
            let d = z - x;
            let rebuilt = (C64::new(0.0, e.a_t) * d * d).exp() * e.gtilde;
            let r = (rebuilt - e.value).norm() / e.value.norm().max(1e-300);
            if e.value.norm() > 0.0 {
                worst = worst.max(r);
            }
        }
    }
    assert!(worst < 1e-13, "{worst:e}");
}

#[test]
fn theta_support() {
    for lambda in [-3.0 / 16.0, -0.5, 1.0] {
        let g = Green::new(centrifugal(lambda)).unwrap();
        for (x, z) in [(1.0, C64::new(-0.5, 0.3)), (-0.4, C64::new(0.2, -1.0))] {
            let e = g.eval(0.3, x, z).unwrap();
            assert_eq!(e.value, C64::new(0.0, 0.0));
            assert_eq!(e.gtilde_dx, C64::new(0.0, 0.0));
        }
    }
}

#[test]
fn dirichlet_limit_at_origin() {
    for lambda in [-3.0 / 16.0, -0.5, -2.0, 0.4, 1.0] {
        let g = Green::new(centrifugal(lambda)).unwrap();
        let y = C64::new(0.8, 0.0);
        let mut prev = f64::INFINITY;
        for k in 1..=6 {
            let v = g.eval(0.4, 10f64.powi(-k), y).unwrap().value.norm();
            assert!(v < prev, "λ={lambda} k={k}");
            prev = v;
        }
    }
}

#[test]
fn transmission_identity() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let spec = random_unitary(&mut rng);
        let g = Green::new(spec).unwrap();
        let tc = transmission_matrices(&spec);
        for _ in 0..20 {
            let t = rng.gen_range(0.05..1.0);
            let y = C64::new(rng.gen_range(0.1..2.0) * if rng.gen() { 1.0 } else { -1.0 }, 0.0);
            let trace = |d: f64| {
                let (gp, gxp) = g.kernel(t, d, y).unwrap();
                let (gm, gxm) = g.kernel(t, -d, y).unwrap();
                (gp, gm, gxp, gxm)
            };
            let (a, b) = (trace(1e-7), trace(2e-7));
            let rich = |u: C64, v: C64| 2.0 * u - v;
            let r = tc.residual(rich(a.0, b.0), rich(a.1, b.1), rich(a.2, b.2), rich(a.3, b.3));
            let (c, d) = (trace(1e-8), trace(2e-8));
            let r8 = tc.residual(rich(c.0, d.0), rich(c.1, d.1), rich(c.2, d.2), rich(c.3, d.3));
            worst = worst.max(r).max(r8);
            assert!(r < 1e-8 && r8 < 1e-8, "{spec:?} t={t} y={y} r={r:e} r8={r8:e}");
        }
    }
    println!("worst transmission residual {worst:e}");
}

fn diagonal_deviation(g: &Green, t: f64, x: f64) -> f64 {
    let v = g.eval(t, x, C64::new(x, 0.0)).unwrap().value * 2.0 * t.sqrt();
    (v - 1.0 / C64::new(0.0, PI).sqrt()).norm()
}

#[test]
fn delta_limit() {
    for spec in [GreensFunctionSpec::Free, centrifugal(-3.0 / 16.0), centrifugal(-0.5), centrifugal(-2.0)] {
        let g = Green::new(spec).unwrap();
        let mut prev = f64::INFINITY;
        for k in 1..=6 {
            let d = diagonal_deviation(&g, 10f64.powi(-k), 1.0);
            if spec == GreensFunctionSpec::Free {
                assert!(d < 1e-15);
            } else {
                assert!(d < prev, "{spec:?} k={k}");
                prev = d;
            }
        }
        if spec != GreensFunctionSpec::Free {
            assert!(prev < 1e-4, "{spec:?} {prev:e}");
        }
    }
}

#[test]
fn repulsive_diagonal_keeps_reflected_term() {
    // J_ν = (H¹ + H²)/2 carries an image term of modulus 1/√π at y = x,
    // so the pointwise diagonal limit misses 1/√(iπ) by that amount.
    for lambda in [0.3, 1.0, 3.75] {
        let g = Green::new(centrifugal(lambda)).unwrap();
        for k in 3..=6 {
            let d = diagonal_deviation(&g, 10f64.powi(-k), 1.0);
            assert!((d - 1.0 / PI.sqrt()).abs() < 1e-2, "λ={lambda} k={k} {d}");
        }
    }
}

#[test]
fn analytic_derivative_matches_differences() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(17);
    let specs = [GreensFunctionSpec::Free, centrifugal(-0.2), centrifugal(-1.5), centrifugal(0.6), random_unitary(&mut rng)];
    for spec in specs {
        let g = Green::new(spec).unwrap();
        for _ in 0..20 {
            let t = rng.gen_range(0.1..1.0);
            let x: f64 = rng.gen_range(0.3..2.0) * if rng.gen() { 1.0 } else { -1.0 };
            let z = C64::new(x.signum() * rng.gen_range(0.2..2.0), rng.gen_range(-0.3..0.3));
            let e = g.eval(t, x, z).unwrap();
            let errs: Vec<f64> = [1e-3, 5e-4]
                .iter()
                .map(|&h| {
                    let fd = (g.eval(t, x + h, z).unwrap().gtilde - g.eval(t, x - h, z).unwrap().gtilde) / (2.0 * h);
                    (fd - e.gtilde_dx).norm()
                })
                .collect();
            let scale = e.gtilde_dx.norm().max(e.gtilde.norm()) * (1.0 + (z.norm() / t).powi(3));
            assert!(errs[0] < 1e-5 * scale, "{spec:?} {errs:?}");
            if errs[0] > 1e-12 * scale {
                let ratio = errs[0] / errs[1];
                assert!(ratio > 3.0 && ratio < 5.0, "{spec:?} ratio {ratio}");
            }
        }
    }
}

#[test]
fn point_interaction_bounds() {
    let t: f64 = 0.3;
    let n = 1.0 / (2.0 * (PI * t).sqrt());
    let rt = C64::from_polar(t.sqrt(), PI / 4.0);
    for omega in [0.0, 0.5, 2.0, 7.0] {
        let bound = lambda_fn(C64::new(omega * (t / 2.0).sqrt(), 0.0)).unwrap().re;
        for x in [0.2, 1.0, 3.0] {
            for k in 0..30 {
                let z = C64::from_polar(0.1 + 0.2 * k as f64, PI / 4.0 * (k % 7) as f64 / 6.0);
                let s = x + z;
                let d = z - x;
                let c = C64::new(0.0, 1.0) * (s * s - d * d) / (4.0 * t);
                let g1 = lambda_fn(s / (2.0 * rt) + omega * rt).unwrap() * c.exp();
                assert!(g1.norm() <= bound * (1.0 + 1e-12), "ω={omega} z={z}");
                let g0 = c.exp() * n;
                assert!(g0.norm() <= n * (1.0 + 1e-12));
            }
        }
    }
    let g = Green::new(GreensFunctionSpec::Free).unwrap();
    let e = g.eval(t, 0.7, C64::new(1.3, 0.4)).unwrap();
    assert!((e.gtilde.norm() - n).abs() < 1e-15);
}

#[test]
fn growth_bounds_hold_on_contour() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(23);
    let specs = [GreensFunctionSpec::Free, centrifugal(-0.1), centrifugal(-2.0), centrifugal(1.5), random_unitary(&mut rng), random_unitary(&mut rng)];
    let theta = PI / 4.0;
    for spec in specs {
        let g = Green::new(spec).unwrap();
        for &t in &[0.05, 0.3, 1.0] {
            for &x in &[0.3, -1.0, 2.5] {
                let gc = g.growth_coefficients(t, x);
                assert_eq!(gc.b0, 0.0);
                for k in 0..60 {
                    let y = 0.05 * k as f64 * (1.0 + k as f64 / 10.0);
                    let z = x + y * x.signum() * C64::from_polar(1.0, theta);
                    let e = g.eval(t, x, z).unwrap();
                    assert!(e.gtilde.norm() <= gc.a0, "{spec:?} t={t} x={x} z={z}");
                    assert!(e.gtilde_dx.norm() <= gc.a1 * (gc.b1 * z.norm()).exp() + 1e-300, "{spec:?} t={t} x={x} z={z}");
                }
            }
        }
    }
}

#[test]
fn small_time_coefficient() {
    let g = Green::new(GreensFunctionSpec::Free).unwrap();
    for t in [1e-1, 1e-3, 1e-6] {
        let gc = g.growth_coefficients(t, 1.0);
        assert!((gc.a0 * 2.0 * t.sqrt() - 1.0 / PI.sqrt()).abs() < 1e-15);
    }
}

fn richardson_residual(g: &Green, t: f64, x: f64, z: C64, h: f64) -> (C64, f64) {
    let r1 = g.schrodinger_residual(t, x, z, h, h).unwrap();
    let r2 = g.schrodinger_residual(t, x, z, h / 2.0, h / 2.0).unwrap();
    let r4 = g.schrodinger_residual(t, x, z, h / 4.0, h / 4.0).unwrap();
    let order = ((r1 - r2).norm() / (r2 - r4).norm()).log2();
    ((4.0 * r2 - r1) / 3.0, order)
}

#[test]
fn schrodinger_residuals() {
    let free = Green::new(GreensFunctionSpec::Free).unwrap();
    let (r, order) = richardson_residual(&free, 0.5, 0.7, C64::new(1.1, 0.2), 1e-2);
    assert!(r.norm() < 1e-7 && (order - 2.0).abs() < 0.2, "{r} {order}");

    let att = Green::new(centrifugal(-0.5)).unwrap();
    let r = att.schrodinger_residual(0.4, 1.3, C64::new(0.7, 0.0), 1e-4, 1e-4).unwrap();
    assert!(r.norm() < 1e-6, "{r}");

    let case1 = Green::new(GreensFunctionSpec::PointInteraction { phi: 0.0, a_j: C64::new(0.0, 0.0), b_j: C64::new(1.0, 0.0) }).unwrap();
    let (r, order) = richardson_residual(&case1, 0.3, -0.8, C64::new(-1.1, 0.0), 2e-3);
    assert!(r.norm() < 1e-6 && (order - 2.0).abs() < 0.2, "{r} {order}");
}

#[test]
fn stencil_guard() {
    let g = Green::new(GreensFunctionSpec::Free).unwrap();
    assert!(g.schrodinger_residual(0.3, 0.05, C64::new(1.0, 0.0), 1e-3, 0.01).is_err());
}

#[test]
fn classification_tolerance() {
    // Re a within τ of −cos φ lands in the degenerate branch
    let phi: f64 = 1.0;
    let ar = -phi.cos() + 0.5e-12;
    let b = (1.0 - ar * ar).sqrt();
    let c = classify_point_interaction(phi, C64::new(ar, 0.0), C64::new(b, 0.0)).unwrap();
    assert_eq!(c.case_id, PointCase::II);
    assert!(c.omega_minus == 0.0);
    for (sx, sy) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
        assert_eq!(c.mu_minus(sx, sy), C64::new(0.0, 0.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn eta_vanishes_on_unit_real_part(phi in 0.0f64..3.1) {
        for a in [C64::new(1.0, 0.0), C64::new(-1.0, 0.0)] {
            let c = classify_point_interaction(phi, a, C64::new(0.0, 0.0)).unwrap();
            for (sx, sy) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                prop_assert_eq!(c.eta(sx, sy), C64::new(0.0, 0.0));
            }
        }
    }

    #[test]
    fn case_three_structure(phi in 0.0f64..3.1, re in -1.0f64..1.0, arg in 0.0f64..2.0 * PI) {
        let a = C64::new(re, 0.0);
        let b = C64::from_polar((1.0 - re * re).sqrt(), arg);
        let c = classify_point_interaction(phi, a, b).unwrap();
        match c.case_id {
            PointCase::III => {
                prop_assert_eq!(c.omega_plus, 0.0);
                prop_assert_eq!(c.mu_zero(1.0, -1.0), C64::new(-1.0, 0.0));
            }
            PointCase::II => prop_assert_eq!(c.omega_minus, 0.0),
            PointCase::I => prop_assert!(c.omega_plus.is_finite() && c.omega_minus.is_finite()),
        }
    }
}
