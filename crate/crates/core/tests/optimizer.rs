use std::f64::consts::{FRAC_PI_2, PI};

use ringwalk::{
    default_tau_scan, detection_probability_at_budget, linspace, min_phase_matching_tau, optimize, optimize_with,
    pdet_vs_size_and_budget, pf_spectrum, relevant_modulus, sweep, tas_vs_tau, tau_star, Config, OptimizeOptions,
    SweepSpec,
};

fn small_spec(n: usize) -> SweepSpec<f64> {
    let b = PI / n as f64;
    SweepSpec {
        phi_values: linspace(-b, b, 9),
        tau_values: linspace(0.1, 2.9, 15),
        budget_t: 60.0,
    }
}

#[test]
fn sweep_cells_equal_standalone_calls() {
    let template = Config::new(11, 5, 0.0, 1.0, 60.0).unwrap();
    let spec = small_spec(11);
    let g = sweep(&template, &spec).unwrap();
    for (i, &phi) in spec.phi_values.iter().enumerate() {
        for (j, &tau) in spec.tau_values.iter().enumerate() {
            let cfg = Config::new(11, 5, phi, tau, 60.0).unwrap();
            assert_eq!(g.results[i][j].to_bits(), detection_probability_at_budget(&cfg).unwrap().to_bits());
            assert_eq!(g.pf_moduli[i][j].to_bits(), pf_spectrum(&cfg).unwrap().leading_modulus.to_bits());
            assert_eq!(g.n_attempts[i][j], (60.0 / tau).floor() as usize);
            assert!((0.0..=1.0 + 1e-12).contains(&g.results[i][j]));
            assert!(g.pf_moduli[i][j] <= 1.0 + 1e-9);
        }
    }
}

#[test]
fn sweep_is_independent_of_thread_count() {
    let template = Config::new(13, 6, 0.0, 1.0, 60.0).unwrap();
    let spec = small_spec(13);
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| sweep(&template, &spec).unwrap())
    };
    let (a, b) = (run(1), run(4));
    assert_eq!(a, b);
}

#[test]
fn even_ring_landscape_is_symmetric_in_phase() {
    let template = Config::new(20, 10, 0.0, 1.0, 100.0).unwrap();
    let spec = SweepSpec::default_for(20, 100.0);
    let spec = SweepSpec {
        phi_values: spec.phi_values.into_iter().step_by(10).collect(),
        tau_values: linspace(0.2, 3.0, 15),
        ..spec
    };
    let g = sweep(&template, &spec).unwrap();
    let m = g.phi_values.len();
    for i in 0..m {
        assert!((g.phi_values[i] + g.phi_values[m - 1 - i]).abs() < 1e-15);
        for j in 0..g.tau_values.len() {
            assert!((g.results[i][j] - g.results[m - 1 - i][j]).abs() < 1e-10);
        }
    }
}

#[test]
fn optimum_beats_every_robust_grid_cell() {
    let (n, delta, budget) = (15, 7, 120.0);
    let b = PI / n as f64;
    let opts = OptimizeOptions {
        phi_values: linspace(-b, b, 11),
        tau_values: linspace(0.1, 3.0, 30),
        tau_scan: default_tau_scan(),
    };
    let opt = optimize_with(n, delta, budget, &opts).unwrap();
    for &phi in &opts.phi_values {
        let th = min_phase_matching_tau(n, phi).unwrap();
        for &tau in opts.tau_values.iter().filter(|&&t| t < th) {
            let p = detection_probability_at_budget(&Config::new(n, delta, phi, tau, budget).unwrap()).unwrap();
            assert!(opt.pdet_at_opt >= p - 1e-12, "phi={phi} tau={tau}: {p} > {}", opt.pdet_at_opt);
        }
    }
    assert!(opt.tau_opt < opt.tau_star);
    assert_eq!(opt.mirror, Some((-opt.phi_opt, n - delta)));
}

#[test]
fn default_optimum_stays_below_threshold() {
    let opt = optimize::<f64>(21, 10, 200.0).unwrap();
    println!("{opt:?}");
    assert!(opt.tau_opt < opt.tau_star && opt.tau_pf < opt.tau_star);
    assert!((opt.phi_opt.abs() - PI / 42.0).abs() < 1e-12);
    assert!(opt.pdet_at_opt > 0.95);
    let again = optimize(21, 10, 200.0).unwrap();
    assert_eq!(opt, again);
}

#[test]
fn long_budget_optimum_approaches_fastest_decay() {
    let (n, delta) = (31, 15);
    let phi = PI / 62.0;
    let opts = OptimizeOptions {
        phi_values: vec![phi],
        tau_values: linspace(1.2, 1.6, 41),
        tau_scan: default_tau_scan(),
    };
    let opt = optimize_with(n, delta, 2000.0, &opts).unwrap();
    println!("tau_opt={} tau_pf={} pdet={}", opt.tau_opt, opt.tau_pf, opt.pdet_at_opt);
    assert!((opt.tau_opt - opt.tau_pf).abs() <= 0.02);
}

#[test]
fn threshold_period_for_large_ring() {
    let ts = tau_star(101, 0.01, 50).unwrap();
    assert!((ts.analytic - FRAC_PI_2).abs() < 0.05);
    assert!(!ts.disagreement);
    assert!(relevant_modulus(&Config::new(101, 50, 0.0, 1.0, 10.0).unwrap(), 0.01, 1.0).unwrap() < 1.0);
}

#[test]
fn asymptotic_time_minimum_approaches_quarter_period() {
    let taus = linspace(0.8, 1.56, 381);
    let mut last = f64::INFINITY;
    for n in [11usize, 15, 21] {
        let pts = tas_vs_tau(n, PI / (2 * n) as f64, (n - 1) / 2, &taus).unwrap();
        let best = pts.iter().min_by(|a, b| a.t_as.total_cmp(&b.t_as)).unwrap();
        let dist = FRAC_PI_2 - best.tau;
        println!("N={n}: argmin t_as at tau={:.4}", best.tau);
        assert!(dist > 0.0 && dist < last);
        last = dist;
    }
    assert!(last < 0.06);
}

#[test]
fn size_budget_rows_and_saturation() {
    let ts = [50.0, 100.0, 200.0, 400.0];
    let sb = pdet_vs_size_and_budget(&[5, 9, 13, 17], &ts).unwrap();
    for chunk in sb.rows.chunks(ts.len()) {
        assert!(chunk.windows(2).all(|w| w[1].pdet >= w[0].pdet - 1e-12), "{chunk:?}");
    }
    for s in &sb.saturation {
        let at_200 = sb.rows.iter().find(|r| r.n == s.n && r.total_time == 200.0).unwrap();
        assert!(at_200.pdet >= 0.98 * s.pdet_infinity, "N={}: {} vs {}", s.n, at_200.pdet, s.pdet_infinity);
    }

    let big = pdet_vs_size_and_budget(&[31], &[200.0, 2000.0]).unwrap();
    assert!(big.rows[1].pdet > big.rows[0].pdet);
}
