use cpld_core::ball_spectrum::lowest_eigenvalue;
use cpld_core::constants::{c_constant, sweep};
use cpld_core::fd_oracle::{fd_extrapolated, FdProblem, RadialDensity};
use cpld_core::jab::{jab_profile, minimize_jab, MinimizeOptions, TIE_REL};
use cpld_core::measure::half_mass_radius;
use cpld_core::Execution;

#[test]
fn small_ball_approaches_flat_disk() {
    let r = 0.05;
    let scaled = lowest_eigenvalue(2, 0, r).unwrap().eigenvalue * r.powi(4);
    let flat = FdProblem::new(2, 0, 1.0, 1000, RadialDensity::flat()).unwrap();
    let disk = fd_extrapolated(&flat).unwrap();
    assert!((scaled - disk).abs() / disk < 1e-2, "{scaled} vs {disk}");
}

#[test]
fn flat_oracle_scales_like_r_minus_four() {
    let at = |r: f64| {
        let p = FdProblem::new(3, 1, r, 1000, RadialDensity::flat()).unwrap();
        fd_extrapolated(&p).unwrap()
    };
    let ratio = at(0.7) / at(1.4);
    assert!((ratio - 16.0).abs() / 16.0 < 1e-3, "{ratio}");
}

#[test]
fn oracle_matches_series_after_extrapolation() {
    for (n, l, r) in [(2, 0, 1.0), (3, 1, 0.5), (5, 0, 2.0), (4, 2, 1.5)] {
        let exact = lowest_eigenvalue(n, l, r).unwrap().eigenvalue;
        let p = FdProblem::new(n, l, r, 1000, RadialDensity::anti_gaussian()).unwrap();
        let fd = fd_extrapolated(&p).unwrap();
        assert!((fd - exact).abs() / exact < 1e-7, "({n},{l},{r}): {fd} vs {exact}");
    }
}

#[test]
fn minimizer_postconditions() {
    for (n, r) in [(2, 1.0), (2, 1.3), (3, 0.7), (5, 2.0)] {
        let rec = minimize_jab(n, r, &MinimizeOptions::default()).unwrap();
        assert!(rec.a_min >= 0.0 && rec.a_min <= rec.a_star + 1e-9);
        // ties resolve towards the smaller A, so J_min may sit inside the tie band
        assert!(rec.profile.iter().all(|p| rec.j_min <= p.sqrt_j * p.sqrt_j * (1.0 + TIE_REL)));
        let ball = lowest_eigenvalue(n, 0, r).unwrap().eigenvalue;
        assert!(rec.j_min <= ball * (1.0 + 1e-9));
        // no branch hopping: neighbouring samples stay close
        let da = rec.a_star / (rec.profile.len() - 1) as f64;
        let top = rec.profile.iter().map(|p| p.sqrt_j).fold(0.0, f64::max);
        for w in rec.profile.windows(2) {
            assert!((w[1].sqrt_j - w[0].sqrt_j).abs() <= 50.0 * top * da / rec.a_star);
        }
    }
}

#[test]
fn continuation_and_parallel_agree_with_plain_scan() {
    let n = 3;
    let r = 1.1;
    let plain = minimize_jab(n, r, &MinimizeOptions::default()).unwrap();
    let cont = minimize_jab(
        n,
        r,
        &MinimizeOptions {
            continuation: true,
            ..Default::default()
        },
    )
    .unwrap();
    let par = minimize_jab(
        n,
        r,
        &MinimizeOptions {
            exec: Execution::Parallel,
            ..Default::default()
        },
    )
    .unwrap();
    assert_eq!(plain, par);
    assert!((plain.j_min - cont.j_min).abs() <= 1e-9 * plain.j_min);
    assert!((plain.a_min - cont.a_min).abs() <= 1e-6);
}

#[test]
fn profile_has_one_sample_per_grid_point() {
    let opts = MinimizeOptions {
        grid_points: 40,
        ..Default::default()
    };
    let prof = jab_profile(2, 1.0, &opts).unwrap();
    assert_eq!(prof.len(), 40);
    assert_eq!(prof[0].a, 0.0);
    assert_eq!(prof[0].b, 1.0);
    let a_star = half_mass_radius(2, 1.0).unwrap();
    assert_eq!(prof[39].a, a_star);
    assert_eq!(prof[39].b, a_star);
    assert!(prof.iter().all(|s| s.lambda.is_ok()));
}

#[test]
fn sweep_is_ordered_and_thread_independent() {
    let opts = MinimizeOptions {
        grid_points: 24,
        ..Default::default()
    };
    let seq = sweep(&[3, 2], 0.4, 1.6, 4, &opts).unwrap();
    let par = sweep(
        &[3, 2],
        0.4,
        1.6,
        4,
        &MinimizeOptions {
            exec: Execution::Parallel,
            ..opts
        },
    )
    .unwrap();
    assert_eq!(seq, par);
    let keys: Vec<(u32, f64)> = seq.iter().map(|r| (r.n, r.radius)).collect();
    assert_eq!(keys.len(), 8);
    assert!(keys[..4].iter().all(|k| k.0 == 3) && keys[4..].iter().all(|k| k.0 == 2));
    assert!((keys[0].1 - 0.7).abs() < 1e-12);
    assert_eq!(keys[7].1, 1.6);
}

// Values from the first verified full run, frozen as regression data.
#[test]
fn frozen_constants() {
    let table = [
        (2, 1.5, 0.933_763_645_843_905_8),
        (2, 2.0, 0.866_589_853_748_005_1),
        (2, 3.0, 0.920_651_992_983_904_9),
        (3, 1.5, 0.897_687_308_977_585_6),
        (3, 2.0, 0.877_521_330_451_961_2),
        (3, 3.0, 0.930_003_188_352_747_0),
        (4, 1.5, 0.891_062_332_556_360_1),
        (4, 2.0, 0.886_948_773_631_580_1),
        (4, 3.0, 0.934_746_877_720_449_5),
        (5, 1.5, 0.891_560_770_647_847_3),
        (5, 2.0, 0.894_399_517_862_617_2),
        (5, 3.0, 0.937_763_169_570_688_2),
    ];
    for (n, r, want) in table {
        let got = c_constant(n, r, &MinimizeOptions::default()).unwrap().c;
        assert!((got - want).abs() < 1e-8, "C({r},{n}) = {got}, frozen {want}");
    }
}

#[test]
fn tail_is_increasing() {
    let opts = MinimizeOptions::default();
    for n in 2..=5 {
        let tail: Vec<f64> = [2.950_833_333_333_333, 2.975_416_666_666_667, 3.0]
            .iter()
            .map(|&r| c_constant(n, r, &opts).unwrap().c)
            .collect();
        assert!(tail.windows(2).all(|w| w[1] >= w[0]), "n={n}: {tail:?}");
    }
}
