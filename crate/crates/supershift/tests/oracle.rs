use num_complex::Complex64 as C64;
use supershift::evolution::{Compact, EvolutionProblem, InitialData, DEFAULT_THETA};
use supershift::greens::{transmission_matrices, GreensFunctionSpec, TransmissionCondition};
use supershift::oracle::*;
use supershift::quadrature::QuadratureConfig;
use supershift::superosc::GrowthBound;

const I: C64 = C64 { re: 0.0, im: 1.0 };

fn dirichlet() -> GreensFunctionSpec {
    GreensFunctionSpec::PointInteraction { phi: 0.0, a_j: C64::new(-1.0, 0.0), b_j: C64::new(0.0, 0.0) }
}

fn case_one() -> GreensFunctionSpec {
    GreensFunctionSpec::PointInteraction { phi: 0.9, a_j: C64::new(0.36, 0.48), b_j: C64::new(0.48, -0.64) }
}

fn problem(spec: GreensFunctionSpec, f: InitialData) -> EvolutionProblem {
    EvolutionProblem::new(spec, f, DEFAULT_THETA, QuadratureConfig::default()).unwrap()
}

fn quartic_wave() -> InitialData {
    let mut coeffs = vec![C64::new(0.0, 0.0); 5];
    coeffs[4] = C64::new(1.0, 0.0);
    InitialData::PolyExp { coeffs, k: 1.0 }
}

fn wave(k: f64) -> impl Fn(f64) -> C64 + Sync {
    move |x: f64| (I * k * x).exp()
}

fn packet(x: f64) -> C64 {
    (-(x - 1.0) * (x - 1.0) + I * x).exp()
}

/// max over nodes with |x| ≤ L/4 of |u − e^{ikx−ik²t}|.
fn plane_wave_error(sol: &CnSolution, l: f64, k: f64) -> f64 {
    let mut e: f64 = 0.0;
    for b in &sol.branches {
        for i in 0..b.len {
            let x = b.x0 + i as f64 * b.h;
            if x.abs() <= 0.25 * l {
                e = e.max((sol.values[b.start + i] - (I * (k * x - k * k * sol.t)).exp()).norm());
            }
        }
    }
    e
}

#[test]
fn free_plane_wave_with_pad() {
    let s = FdScheme::default();
    assert_eq!(s.n_x, 1 << 12);
    let sol = cn_evolve(&s, &GreensFunctionSpec::Free, &wave(1.0), 0.2).unwrap();
    let e = plane_wave_error(&sol, s.l, 1.0);
    assert!(e < 1e-3, "{e}");
}

#[test]
fn hard_wall_conserves_norm() {
    let s = FdScheme { l: 10.0, n_x: 1024, n_t: 200, boundary: Boundary::HardWall, startup: 0, ..FdScheme::default() };
    let shifted = |x: f64| packet(x - 2.0);
    let odd = |x: f64| packet(x) - packet(-x);
    for (spec, f) in [
        (GreensFunctionSpec::Free, &packet as &dyn Fn(f64) -> C64),
        (dirichlet(), &odd),
        (GreensFunctionSpec::CentrifugalRepulsive { lambda: 1.0 }, &shifted),
    ] {
        let sol = cn_evolve(&s, &spec, f, 0.5).unwrap();
        assert!(sol.max_norm_drift < 1e-10, "{spec:?} {}", sol.max_norm_drift);
    }
}

#[test]
fn refinement_quarters_the_error() {
    let s = FdScheme { n_x: 255, n_t: 16, ..FdScheme::default() };
    let e1 = plane_wave_error(&cn_evolve(&s, &GreensFunctionSpec::Free, &wave(1.0), 0.2).unwrap(), s.l, 1.0);
    let e2 = plane_wave_error(&cn_evolve(&s.refined(), &GreensFunctionSpec::Free, &wave(1.0), 0.2).unwrap(), s.l, 1.0);
    let order = (e1 / e2).log2();
    assert!((1.8..=2.2).contains(&order), "{e1} {e2} order {order}");
}

#[test]
fn self_refinement_order() {
    let s = FdScheme { n_x: 255, n_t: 16, ..FdScheme::default() };
    let c = Compact::new(0.5, 2.0, 31).unwrap();
    let f = wave(1.0);
    let order = observed_order(&s, &GreensFunctionSpec::Free, &f, 0.2, &c).unwrap();
    assert!((1.8..=2.2).contains(&order), "{order}");
}

#[test]
fn interface_rows_hold_every_step() {
    for spec in [case_one(), dirichlet(), GreensFunctionSpec::PointInteraction { phi: 0.0, a_j: C64::new(0.0, 0.0), b_j: C64::new(1.0, 0.0) }] {
        let s = FdScheme { n_x: 1024, n_t: 100, ..FdScheme::default() };
        let sol = cn_evolve(&s, &spec, &wave(1.5), 0.2).unwrap();
        assert!(sol.max_interface_residual < 1e-10, "{spec:?} {}", sol.max_interface_residual);
    }
}

#[test]
fn degenerate_interface_is_singular() {
    let zero = [[C64::new(0.0, 0.0); 2]; 2];
    let tc = TransmissionCondition { m: zero, n: zero };
    let s = FdScheme { l: 10.0, n_x: 64, n_t: 16, ..FdScheme::default() };
    let r = cn_evolve_interface(&s, &|_| 0.0, &tc, &packet, 0.1);
    assert!(matches!(r, Err(OracleError::Singular)));
}

#[test]
fn interface_entry_matches_spec_entry() {
    let s = FdScheme { l: 10.0, n_x: 256, n_t: 32, ..FdScheme::default() };
    let a = cn_evolve(&s, &case_one(), &packet, 0.1).unwrap();
    let b = cn_evolve_interface(&s, &|_| 0.0, &transmission_matrices(&case_one()), &packet, 0.1).unwrap();
    assert_eq!(a.values, b.values);
}

#[test]
fn cross_validate_free_and_dirichlet() {
    let c = Compact::new(0.5, 2.0, 31).unwrap();
    let s = FdScheme::default();
    let free = cross_validate(&problem(GreensFunctionSpec::Free, InitialData::plane_wave(1.0)), &s, 0.2, &c).unwrap();
    assert!(free.sup < 1e-3 && free.passed, "{free:?}");
    let sine = InitialData::custom(|z: C64| z.sin(), GrowthBound { a: 1.0, b: 1.0, p: 1.0 });
    let d = cross_validate(&problem(dirichlet(), sine), &s, 0.2, &c).unwrap();
    assert!(d.sup < 5e-3 && d.passed, "{d:?}");
    assert!(d.max_interface_residual < 1e-10);
}

#[test]
fn cross_validate_every_variant() {
    let s = FdScheme::default();
    let near = Compact::new(0.5, 2.0, 31).unwrap();
    let far = Compact::new(1.0, 2.5, 31).unwrap();
    let cases = [
        (case_one(), InitialData::plane_wave(1.5), 0.2, near),
        (GreensFunctionSpec::CentrifugalRepulsive { lambda: 1.0 }, quartic_wave(), 0.1, near),
        // the attractive kernel has no reflected wave at 0, so the data vanishes there to 4th order
        (GreensFunctionSpec::CentrifugalAttractive { lambda: -3.0 / 16.0 }, quartic_wave(), 0.05, far),
    ];
    for (spec, f, t, c) in cases {
        let r = cross_validate(&problem(spec, f), &s, t, &c).unwrap();
        assert!(r.passed, "{spec:?} {r:?}");
    }
}

#[test]
fn setup_checks() {
    let s = FdScheme::default();
    let p = problem(GreensFunctionSpec::CentrifugalRepulsive { lambda: 1.0 }, InitialData::plane_wave(1.0));
    assert!(cross_validate(&p, &s, 0.1, &Compact::new(0.05, 1.0, 5).unwrap()).is_err());
    assert!(cross_validate(&p, &s, 0.1, &Compact::new(1.0, 15.0, 5).unwrap()).is_err());
    assert!(cn_evolve(&s, &GreensFunctionSpec::Free, &wave(1.0), -1.0).is_err());
    let bad = FdScheme { x_min: 0.0, ..s };
    assert!(bad.validate().is_err());
    let bad = FdScheme { startup: 500, ..s };
    assert!(bad.validate().is_err());
}
