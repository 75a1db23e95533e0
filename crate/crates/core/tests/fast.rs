use efimov_core::fast::fast_solution;
use efimov_core::{
    effective_potential, fast_eigenfunction, fast_eigenvalue, lambert_w0, CutoffProfile, Error, ModelParams,
    RadialPotential,
};
use proptest::prelude::*;

fn params(ratio: f64, profile: CutoffProfile<f64>) -> ModelParams<f64> {
    ModelParams::from_mass_ratio(ratio, profile).unwrap()
}

fn profiles(r0: f64) -> [CutoffProfile<f64>; 2] {
    [CutoffProfile::bump(r0).unwrap(), CutoffProfile::quintic(r0).unwrap()]
}

#[test]
fn reduced_masses() {
    let p = ModelParams::<f64>::from_masses(50.0, 1.0, CutoffProfile::bump(1.0).unwrap()).unwrap();
    assert_eq!(p.mu(), 50.0);
    assert!((p.nu() - 200.0 / 101.0).abs() < 1e-15);
    assert!((p.mu_over_nu() - 25.25).abs() < 1e-13);
    let q = ModelParams::from_mu_nu(p.mu(), p.nu(), p.profile.clone()).unwrap();
    assert!((q.equivalent_mass_ratio() - 50.0).abs() < 1e-12);
    assert!(ModelParams::from_masses(-1.0, 1.0, CutoffProfile::bump(1.0).unwrap()).is_err());
    assert!(ModelParams::from_mu_nu(1.0, 0.0, CutoffProfile::bump(1.0).unwrap()).is_err());
    assert!(CutoffProfile::bump(0.0_f64).is_err());
}

#[test]
fn exterior_is_pure_inverse_square() {
    for profile in profiles(1.0) {
        let p = params(50.0, profile);
        let pot = effective_potential(&p);
        let w1 = lambert_w0(1.0_f64).unwrap();
        let expected = -p.mu_over_nu() * w1 * w1;
        for i in 0..1000 {
            let r = 1.0 + 99.0 * i as f64 / 999.0;
            let direct = pot.eval_direct(r).unwrap() * r * r;
            assert!((direct - expected).abs() <= 1e-13 * expected.abs(), "r = {r}: {direct}");
            let closed = pot.eval(r) * r * r;
            assert!((closed - expected).abs() <= 1e-13 * expected.abs());
        }
    }
}

#[test]
fn profile_swap_leaves_exterior_unchanged() {
    let [bump, quintic] = profiles(1.0);
    let a = params(10.0, bump);
    let b = a.with_profile(quintic);
    for i in 0..200 {
        let r = 1.0 + i as f64 * 0.05;
        assert_eq!(fast_eigenvalue(&a, r).unwrap(), fast_eigenvalue(&b, r).unwrap());
    }
}

#[test]
fn potential_is_negative_and_bounded_inside() {
    for profile in profiles(1.0) {
        let pot = effective_potential(&params(50.0, profile));
        let mut worst = 0.0_f64;
        for i in 0..=2400 {
            // log grid from 1e-12·r0 up to r0
            let r = 10f64.powf(-12.0 + 12.0 * i as f64 / 2400.0);
            let v = pot.eval(r);
            assert!(v < 0.0 && v.is_finite(), "r = {r:e}: v = {v}");
            worst = worst.max(v.abs());
        }
        assert!(worst < 1e3, "sup |v| = {worst}");
        assert_eq!(pot.eval(0.0), 0.0);
    }
}

#[test]
fn guard_matches_direct_form_near_the_switch() {
    // the quintic's next term is O(ρ) relative to its leading ρ³, the bump's O(ρ²)
    for (profile, rel) in profiles(1.0).into_iter().zip([1e-8, 2e-5]) {
        let pot = effective_potential(&params(50.0, profile));
        let eps = pot.epsilon_guard;
        for f in [0.5, 0.9, 1.0, 1.1, 2.0, 10.0] {
            let r = eps * f;
            let guarded = pot.eval_guarded(r);
            let direct = pot.eval_direct(r).unwrap();
            assert!((guarded - direct).abs() <= rel * direct.abs(), "r = {r:e}: {guarded:e} vs {direct:e}");
        }
        // across the switch the jump is small against the potential's scale
        let scale = pot.min_value().abs();
        let below = pot.eval(eps * (1.0 - 1e-12));
        let above = pot.eval(eps);
        assert!((below - above).abs() <= 1e-8 * scale);
    }
}

#[test]
fn potential_scales_with_cutoff_radius() {
    let base = params(20.0, CutoffProfile::bump(1.0).unwrap());
    for sigma in [0.1, 3.0] {
        let scaled = base.with_profile(base.profile.rescaled(sigma).unwrap());
        let (p, q) = (effective_potential(&base), effective_potential(&scaled));
        for i in 1..100 {
            let r = 1.5 * i as f64 / 100.0;
            let expected = p.eval(r) / (sigma * sigma);
            assert!((q.eval(sigma * r) - expected).abs() <= 1e-13 * expected.abs());
        }
    }
}

#[test]
fn eigenfunction_has_unit_coulomb_singularity() {
    let p = params(50.0, CutoffProfile::bump(1.0).unwrap());
    let y = 0.6;
    for d in [1e-4, 1e-6, 1e-8] {
        let phi = fast_eigenfunction(&p, y, [0.0, 0.0, y / 2.0 + d]).unwrap();
        assert!((phi * d - 1.0).abs() < 2.0 * d.sqrt().max(1e-4) * 10.0, "d = {d}: {}", phi * d);
    }
    assert!(matches!(fast_eigenfunction(&p, y, [0.0, 0.0, -y / 2.0]), Err(Error::Singularity)));
    // symmetric under exchange of the two centres
    let a = fast_eigenfunction(&p, y, [0.1, 0.2, 0.3]).unwrap();
    let b = fast_eigenfunction(&p, y, [0.1, 0.2, -0.3]).unwrap();
    assert!((a - b).abs() <= 1e-15 * a);
}

#[test]
fn table_profile_tracks_its_source() {
    let n = 401;
    let values: Vec<f64> = (0..n)
        .map(|i| {
            let rho: f64 = i as f64 / (n - 1) as f64;
            if i == 0 {
                1.0
            } else if i == n - 1 {
                0.0
            } else {
                (-(rho * rho) / (1.0 - rho * rho)).exp()
            }
        })
        .collect();
    let table = params(50.0, CutoffProfile::table(1.0, values).unwrap());
    let bump = params(50.0, CutoffProfile::bump(1.0).unwrap());
    let (pt, pb) = (effective_potential(&table), effective_potential(&bump));
    for i in 1..50 {
        let r = 0.9 * i as f64 / 50.0;
        let (a, b) = (pt.eval(r), pb.eval(r));
        assert!((a - b).abs() <= 1e-3 * b.abs(), "r = {r}: {a} vs {b}");
    }
}

#[test]
fn single_precision_potential() {
    let p = ModelParams::from_mass_ratio(50.0_f32, CutoffProfile::bump(1.0_f32).unwrap()).unwrap();
    let pot = effective_potential(&p);
    let w1 = 0.567_143_3_f32;
    assert!((pot.eval(2.0) * 4.0 + p.mu_over_nu() * w1 * w1).abs() < 1e-4);
    assert!(pot.eval(0.3) < 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn lambert_back_substitution(nu in 1e-3_f64..1e3, y in 1e-9_f64..1.5, quintic in any::<bool>()) {
        let profile = if quintic { CutoffProfile::quintic(1.0) } else { CutoffProfile::bump(1.0) }.unwrap();
        let p = ModelParams::from_mu_nu(1.0, nu, profile).unwrap();
        let s = fast_solution(&p, y).unwrap();
        let lhs = s.s * s.s.exp();
        prop_assert!((lhs - s.theta.exp()).abs() <= 1e-12 * s.theta.exp());
        prop_assert!(s.gap >= 0.0);
        let e = fast_eigenvalue(&p, y).unwrap();
        prop_assert!((e + s.gap * s.gap / (nu * y * y)).abs() <= 1e-13 * e.abs().max(1e-300));
    }

    #[test]
    fn potential_decreases_in_magnitude_outside(r in 1.0_f64..50.0, dr in 0.01_f64..5.0) {
        let pot = effective_potential(&params(50.0, CutoffProfile::bump(1.0).unwrap()));
        prop_assert!(pot.eval(r + dr) > pot.eval(r));
    }
}
