//! Acceptance suite: one test per release criterion, each printing a
//! PASS/FAIL line (run with `cargo test --test acceptance -- --nocapture`
//! to see them).
//!
//! Criterion 9 is asserted exactly as written, on the two-site Heisenberg
//! chain. The three terms of that chain commute pairwise, so every
//! splitting is exact there and the measured log-log slopes are roundoff
//! noise; the criterion is expected to fail and is kept red on purpose.
//! The companion test `c09_companion_suzuki_orders_noncommuting` shows the
//! intended order scaling on the smallest noncommuting chain (n = 3).

use std::sync::OnceLock;
use std::time::Instant;

use randprod::experiments::{
    ghz_counterexample, least_squares_slope, random_product_state, run, saturation_many_body,
    saturation_single_site, tail_dominance_study, ExperimentConfig, TailStudy,
};
use randprod::formulas::{
    apply_plan, expected_step, first_order_plan, permuted_suzuki_plan, qdrift_sample,
    realize_unitary, step_unitary, suzuki2p_plan, suzuki_q, PlanMeta, PlanStep, ProductFormulaPlan,
    SeededRng,
};
use randprod::hamiltonian::{Hamiltonian, HamiltonianTerm, PauliString};
use randprod::linalg::{
    expm_hermitian, operator_norm, pure_trace_distance, unitary_diamond_distance, ComplexMatrix,
};
use randprod::metrics::{bias_bound, step_bias_bound, step_radius_bound};

const WORKERS: usize = 2;

fn report(criterion: &str, label: &str, pass: bool, detail: &str, started: Instant) {
    println!(
        "criterion {criterion} [{label}]: {} ({detail}; {:.1}s)",
        if pass { "PASS" } else { "FAIL" },
        started.elapsed().as_secs_f64()
    );
}

#[test]
fn c01_bias_bound_dominates_on_grid() {
    let started = Instant::now();
    let mut worst_margin = f64::INFINITY;
    for n in [2usize, 3, 4] {
        let hamiltonian = Hamiltonian::heisenberg_1d(n).unwrap();
        let lambda = hamiltonian.lambda();
        let dense = hamiltonian.dense().unwrap();
        for t in [0.5, 2.0] {
            let target = expm_hermitian(&dense, t).unwrap();
            for gates in [10u64, 40, 160, 640] {
                let mean = expected_step(&hamiltonian, t, gates).unwrap().power(gates);
                let bias = operator_norm(&target.sub(&mean)).unwrap();
                let bound = bias_bound(t, lambda, gates) + 1e-9;
                assert!(
                    bias <= bound,
                    "bias {bias} exceeds bound {bound} at n={n}, t={t}, N={gates}"
                );
                worst_margin = worst_margin.min(bound - bias);
            }
        }
    }
    report(
        "01",
        "compounded bias bound",
        true,
        &format!("24 grid cells, min margin {worst_margin:.2e}"),
        started,
    );
}

#[test]
fn c02_step_bounds_on_grid() {
    let started = Instant::now();
    for n in [2usize, 3, 4] {
        let hamiltonian = Hamiltonian::heisenberg_1d(n).unwrap();
        let lambda = hamiltonian.lambda();
        let dense = hamiltonian.dense().unwrap();
        for t in [0.5, 2.0] {
            for gates in [10u64, 40, 160, 640] {
                let mean = expected_step(&hamiltonian, t, gates).unwrap();
                let slice = expm_hermitian(&dense, t / gates as f64).unwrap();
                let step_bias = operator_norm(&mean.sub(&slice)).unwrap();
                let bias_limit = step_bias_bound(t, lambda, gates) + 1e-12;
                assert!(
                    step_bias <= bias_limit,
                    "step bias {step_bias} exceeds {bias_limit} at n={n}, t={t}, N={gates}"
                );
                let radius_limit = step_radius_bound(t, lambda, gates) + 1e-12;
                for term in 0..hamiltonian.len() {
                    let step = step_unitary(&hamiltonian, t, gates, term).unwrap();
                    let deviation = operator_norm(&step.sub(&mean)).unwrap();
                    assert!(
                        deviation <= radius_limit,
                        "step {term} deviation {deviation} exceeds {radius_limit} \
                         at n={n}, t={t}, N={gates}"
                    );
                }
            }
        }
    }
    report(
        "02",
        "per-step bias and radius bounds",
        true,
        "24 grid cells, all terms",
        started,
    );
}

fn systemsize_output() -> &'static randprod::experiments::RunOutput {
    static OUTPUT: OnceLock<randprod::experiments::RunOutput> = OnceLock::new();
    OUTPUT.get_or_init(|| {
        let mut config = ExperimentConfig::named("fig3-systemsize");
        config.n_grid = Some((4..=8).collect());
        config.t = Some(2.0);
        config.gates = Some(160);
        config.reps = Some(50);
        config.seed = 1;
        config.workers = WORKERS;
        run(&config).unwrap()
    })
}

#[test]
fn c03_system_size_scaling() {
    let started = Instant::now();
    let output = systemsize_output();
    let ratio = |metric: &str, n: u32| -> f64 {
        output
            .table
            .rows
            .iter()
            .find(|r| r.metric == metric && r.n == n)
            .unwrap_or_else(|| panic!("missing {metric} for n={n}"))
            .value
    };
    let mut details = Vec::new();
    for n in 4..=8u32 {
        let reference = (f64::from(n) / 4.0).sqrt();
        let worst = ratio("worst_case_ratio", n);
        assert!(
            worst >= 0.7 * reference && worst <= 1.3 * reference,
            "worst-case ratio {worst} at n={n} outside [0.7, 1.3] x sqrt(n/4) = \
             [{}, {}]",
            0.7 * reference,
            1.3 * reference
        );
        let fixed = ratio("fixed_input_l2_ratio", n);
        assert!(
            (0.75..=1.25).contains(&fixed),
            "fixed-input ratio {fixed} at n={n} outside [0.75, 1.25]"
        );
        details.push(format!(
            "n={n}: worst {worst:.3}/{reference:.3}, fixed {fixed:.3}"
        ));
    }
    report(
        "03",
        "system-size scaling",
        true,
        &details.join("; "),
        started,
    );
}

#[test]
fn c04_gate_count_scaling_slope() {
    let started = Instant::now();
    let mut config = ExperimentConfig::named("fig3-gatecount");
    config.n = Some(4);
    config.t = Some(2.0);
    config.gate_grid = Some(vec![40, 80, 160, 320, 640]);
    config.reps = Some(50);
    config.seed = 1;
    config.workers = WORKERS;
    let output = run(&config).unwrap();
    let slope = output.extras["worst_case_loglog_slope_top3"]
        .as_f64()
        .expect("slope present");
    assert!(
        (-0.65..=-0.35).contains(&slope),
        "worst-case log-log slope {slope} outside [-0.65, -0.35]"
    );
    report(
        "04",
        "gate-count scaling",
        true,
        &format!("top-3 slope {slope:.3}"),
        started,
    );
}

fn shared_tail_study() -> &'static TailStudy {
    static STUDY: OnceLock<TailStudy> = OnceLock::new();
    STUDY.get_or_init(|| {
        let mut config = ExperimentConfig::named("tails");
        config.n = Some(4);
        config.t = Some(2.0);
        config.gates = Some(160);
        config.reps = Some(1000);
        config.seed = 3;
        config.workers = WORKERS;
        tail_dominance_study(&config).unwrap()
    })
}

#[test]
fn c05_operator_norm_tail_dominance() {
    let started = Instant::now();
    let study = shared_tail_study();
    let checked: Vec<_> = study.operator_curve.iter().filter(|p| p.checked).collect();
    assert!(
        !checked.is_empty(),
        "operator tail grid must reach the bound < 1 region"
    );
    for point in &checked {
        assert!(
            !point.violated,
            "empirical survival {} exceeds bound {} at eps={}",
            point.empirical, point.bound, point.epsilon
        );
    }
    let max_dev = study
        .output
        .table
        .values_of("op_fluctuation")
        .into_iter()
        .fold(0.0f64, f64::max);
    report(
        "05",
        "operator-norm tail dominance",
        true,
        &format!(
            "{} grid points with bound < 1 checked, max deviation {max_dev:.3}",
            checked.len()
        ),
        started,
    );
}

#[test]
fn c06_fixed_input_tail_dominance() {
    let started = Instant::now();
    let study = shared_tail_study();
    for point in &study.trace_curve {
        assert!(
            !point.violated,
            "empirical survival {} exceeds bound {} at eps={}",
            point.empirical, point.bound, point.epsilon
        );
    }
    let checked = study.trace_curve.iter().filter(|p| p.checked).count();
    let valid_from = study.output.extras["trace_tail_valid_from"]
        .as_f64()
        .unwrap();
    // At N = 160, t lambda = 6 the moment argument behind the vector tail
    // only applies from eps = t*lambda*sqrt(32e/N) = 4.42 upward, beyond
    // the trace-distance range, so the assertion set is empty by
    // construction; the empirical and analytic curves are still recorded.
    report(
        "06",
        "fixed-input tail dominance",
        true,
        &format!(
            "{checked} grid points inside the proven regime (valid from eps={valid_from:.2}); \
             curves recorded for all grid points"
        ),
        started,
    );
}

#[test]
fn c07_ghz_counterexample() {
    let started = Instant::now();
    let n = 8usize;
    let t = std::f64::consts::PI;
    let hamiltonian = Hamiltonian::single_site_z(n, 1.0 / n as f64).unwrap();

    // Any plan with fewer than n/2 = 4 distinct single-site gates: a
    // hand-built plan on sites {0,1,2}, one with repeats, and a sampled one.
    let manual = |sites: &[usize]| ProductFormulaPlan {
        steps: sites
            .iter()
            .map(|&site| PlanStep {
                term: site,
                duration: t / sites.len() as f64,
                rescaled: true,
            })
            .collect(),
        meta: PlanMeta {
            method: "manual".into(),
            t,
            seed: 0,
            hamiltonian_fingerprint: hamiltonian.fingerprint(),
        },
    };
    let mut rng = SeededRng::new(5);
    let sampled = qdrift_sample(&hamiltonian, t, 3, &mut rng).unwrap();
    for plan in [manual(&[0, 1, 2]), manual(&[5, 5, 7, 5]), sampled] {
        assert!(plan.touched_terms().len() < n / 2);
        let witness = ghz_counterexample(&hamiltonian, &plan, t).unwrap();
        assert!(
            (witness.trace_distance - 1.0).abs() <= 1e-9,
            "trace distance {} != 1",
            witness.trace_distance
        );
    }

    // Dense cross-check for the site {0,1,2} plan.
    let plan = manual(&[0, 1, 2]);
    let witness = ghz_counterexample(&hamiltonian, &plan, t).unwrap();
    let psi = witness.state_vector(n);
    let target = expm_hermitian(&hamiltonian.dense().unwrap(), t).unwrap();
    let evolved = apply_plan(&plan, &hamiltonian, &psi).unwrap();
    let dense_distance = pure_trace_distance(&target.apply(&psi), &evolved).unwrap();
    assert!((dense_distance - 1.0).abs() <= 1e-9);
    report(
        "07",
        "GHZ impossibility witness",
        true,
        "3 plans, dense cross-check",
        started,
    );
}

#[test]
fn c08_commuting_and_single_term_exactness() {
    let started = Instant::now();
    // First-order on the full signed Z-string family is exact for any
    // cycle count.
    for n in [3usize, 6] {
        let mut rng = SeededRng::new(7);
        let signs: Vec<i8> = (0..(1usize << n))
            .map(|_| if rng.uniform() < 0.5 { -1 } else { 1 })
            .collect();
        let hamiltonian = Hamiltonian::all_z_strings(n, &signs, 1.0).unwrap();
        let target = expm_hermitian(&hamiltonian.dense().unwrap(), 1.0).unwrap();
        for cycles in [1u64, 2, 5] {
            let plan =
                first_order_plan(&hamiltonian, 1.0, cycles * hamiltonian.len() as u64).unwrap();
            let realized = realize_unitary(&plan, &hamiltonian).unwrap();
            let error = operator_norm(&realized.sub(&target)).unwrap();
            assert!(
                error <= 1e-9,
                "first-order error {error} at n={n}, cycles={cycles}"
            );
        }
    }

    // Single-term Hamiltonians are exact under every method.
    let pauli = Hamiltonian::new(
        2,
        vec![HamiltonianTerm::pauli(
            -0.8,
            PauliString::parse("XY").unwrap(),
        )],
    )
    .unwrap();
    let sqrt2 = std::f64::consts::SQRT_2;
    let x = PauliString::parse("X").unwrap().dense();
    let z = PauliString::parse("Z").unwrap().dense();
    let block = x
        .add(&z)
        .scale(num_complex::Complex64::new(1.0 / sqrt2, 0.0));
    let dense_term = Hamiltonian::new(1, vec![HamiltonianTerm::dense(0.5, block)]).unwrap();
    for hamiltonian in [&pauli, &dense_term] {
        let t = 1.3;
        let target = expm_hermitian(&hamiltonian.dense().unwrap(), t).unwrap();
        let mut rng = SeededRng::new(11);
        let plans = vec![
            qdrift_sample(hamiltonian, t, 7, &mut rng).unwrap(),
            first_order_plan(hamiltonian, t, 5).unwrap(),
            suzuki2p_plan(hamiltonian, t, 1).unwrap(),
            suzuki2p_plan(hamiltonian, t, 2).unwrap(),
            permuted_suzuki_plan(hamiltonian, t, 3, 1, &mut rng).unwrap(),
        ];
        for plan in plans {
            let realized = realize_unitary(&plan, hamiltonian).unwrap();
            let error = operator_norm(&realized.sub(&target)).unwrap();
            assert!(
                error <= 1e-10,
                "method {} error {error} on single-term Hamiltonian",
                plan.meta.method
            );
        }
    }
    report(
        "08",
        "commuting and single-term exactness",
        true,
        "all-z n in {3,6} x 3 cycle counts; 5 methods x 2 single-term models",
        started,
    );
}

fn suzuki_slopes(n: usize) -> (f64, f64) {
    let hamiltonian = Hamiltonian::heisenberg_1d(n).unwrap();
    let dense = hamiltonian.dense().unwrap();
    let taus = [0.1, 0.05, 0.025, 0.0125];
    let slope_for = |p: u32| {
        let points: Vec<(f64, f64)> = taus
            .iter()
            .map(|&tau| {
                let plan = suzuki2p_plan(&hamiltonian, tau, p).unwrap();
                let realized = realize_unitary(&plan, &hamiltonian).unwrap();
                let target = expm_hermitian(&dense, tau).unwrap();
                let error = operator_norm(&realized.sub(&target)).unwrap();
                (tau.ln(), error.ln())
            })
            .collect();
        least_squares_slope(&points)
    };
    (slope_for(1), slope_for(2))
}

#[test]
fn c09_suzuki_orders_as_stated() {
    let started = Instant::now();
    let q2 = suzuki_q(2);
    assert!(
        (q2 - 0.4144907717).abs() <= 1e-9,
        "q2 = {q2} differs from 0.4144907717"
    );
    let (s2_slope, s4_slope) = suzuki_slopes(2);
    let pass = s2_slope >= 2.7 && s4_slope >= 4.6;
    report(
        "09",
        "Suzuki order scaling at n=2 (as stated)",
        pass,
        &format!(
            "q2 ok; slopes S2 {s2_slope:.3} (need >= 2.7), S4 {s4_slope:.3} (need >= 4.6); \
             the two-site chain's terms commute, so splitting errors are roundoff \
             and the stated slopes are unattainable there -- see the n=3 companion"
        ),
        started,
    );
    assert!(
        s2_slope >= 2.7,
        "S2 slope {s2_slope} < 2.7 at n=2: the two-site Heisenberg terms commute \
         (XX*YY = YY*XX = -ZZ), every splitting is exact, and the measured error \
         is machine noise; the order scaling is demonstrated at n=3 in \
         c09_companion_suzuki_orders_noncommuting"
    );
    assert!(s4_slope >= 4.6, "S4 slope {s4_slope} < 4.6 at n=2");
}

#[test]
fn c09_companion_suzuki_orders_noncommuting() {
    let started = Instant::now();
    let (s2_slope, s4_slope) = suzuki_slopes(3);
    assert!(s2_slope >= 2.7, "S2 slope {s2_slope} < 2.7 at n=3");
    assert!(s4_slope >= 4.6, "S4 slope {s4_slope} < 4.6 at n=3");
    report(
        "09-companion",
        "Suzuki order scaling at n=3",
        true,
        &format!("slopes S2 {s2_slope:.3}, S4 {s4_slope:.3}"),
        started,
    );
}

#[test]
fn c10_saturation_lower_bounds() {
    let started = Instant::now();
    let mut config = ExperimentConfig::named("saturation-single");
    config.n = Some(8);
    config.t = Some(1.0);
    config.gates = Some(10_000);
    config.reps = Some(500);
    config.seed = 2;
    config.workers = WORKERS;
    let single = saturation_single_site(&config).unwrap();
    assert!(
        single.lower_bound > 0.0,
        "single-site bound must be positive"
    );
    assert!(
        single.empirical_mean >= single.lower_bound - 2.0 * single.standard_error,
        "single-site mean {} below bound {} - 2SE {}",
        single.empirical_mean,
        single.lower_bound,
        single.standard_error
    );

    let mut config = ExperimentConfig::named("saturation-many");
    config.n = Some(6);
    config.step_ratio = Some(0.1);
    config.gates = Some(10_000);
    config.reps = Some(500);
    config.seed = 2;
    config.workers = WORKERS;
    let many = saturation_many_body(&config).unwrap();
    assert!(
        many.empirical_mean >= many.lower_bound - 2.0 * many.standard_error,
        "many-body mean {} below bound {} - 2SE {}",
        many.empirical_mean,
        many.lower_bound,
        many.standard_error
    );
    report(
        "10",
        "saturation lower bounds",
        true,
        &format!(
            "single-site: mean {:.4} >= bound {:.4}; many-body: mean {:.4} >= bound {:.4} \
             (bound nonpositive at the pinned step ratio 0.1, so the many-body check \
             is a consistency check at these parameters)",
            single.empirical_mean, single.lower_bound, many.empirical_mean, many.lower_bound
        ),
        started,
    );
}

#[test]
fn c11_metric_sandwich() {
    let started = Instant::now();
    let mut rng = SeededRng::new(13);
    let mut random_unitary = |dim: usize| {
        let mut h = ComplexMatrix::zeros(dim);
        for i in 0..dim {
            for j in i..dim {
                let v = if i == j {
                    num_complex::Complex64::new(rng.uniform() - 0.5, 0.0)
                } else {
                    num_complex::Complex64::new(rng.uniform() - 0.5, rng.uniform() - 0.5)
                };
                h.set(i, j, v);
                h.set(j, i, v.conj());
            }
        }
        expm_hermitian(&h, 1.0).unwrap()
    };
    let mut checked = 0usize;
    for qubits in [1u32, 2, 3, 4] {
        let dim = 1usize << qubits;
        for _ in 0..50 {
            let u = random_unitary(dim);
            let v = random_unitary(dim);
            let mut state_rng = SeededRng::derive(13, &[u64::from(qubits), checked as u64]);
            let psi = random_product_state(qubits, &mut state_rng);
            let trace = pure_trace_distance(&u.apply(&psi), &v.apply(&psi)).unwrap();
            let diamond = unitary_diamond_distance(&u, &v).unwrap();
            let worst = operator_norm(&u.sub(&v)).unwrap();
            assert!(
                trace <= diamond + 1e-8,
                "trace {trace} > diamond {diamond} at d={dim}"
            );
            assert!(
                diamond <= worst + 1e-8,
                "diamond {diamond} > operator norm {worst} at d={dim}"
            );
            checked += 1;
        }
    }
    report(
        "11",
        "trace <= diamond <= operator-norm sandwich",
        true,
        &format!("{checked} random (U, V, psi) triples, d <= 16"),
        started,
    );
}

#[test]
fn c12_deterministic_csv() {
    let started = Instant::now();
    let configs: Vec<ExperimentConfig> = vec![
        {
            let mut c = ExperimentConfig::named("fig3-gatecount");
            c.n = Some(3);
            c.gate_grid = Some(vec![12, 24]);
            c.reps = Some(4);
            c.seed = 5;
            c
        },
        {
            let mut c = ExperimentConfig::named("fig3-systemsize");
            c.n_grid = Some(vec![2, 3]);
            c.gates = Some(24);
            c.reps = Some(4);
            c.seed = 5;
            c
        },
        {
            let mut c = ExperimentConfig::named("ghz");
            c.n = Some(8);
            c
        },
        {
            let mut c = ExperimentConfig::named("diagonal-union");
            c.n = Some(4);
            c.reps = Some(6);
            c.signs = "random".into();
            c
        },
        {
            let mut c = ExperimentConfig::named("tails");
            c.n = Some(2);
            c.gates = Some(20);
            c.reps = Some(12);
            c
        },
        {
            let mut c = ExperimentConfig::named("saturation-single");
            c.n = Some(4);
            c.gates = Some(500);
            c.reps = Some(10);
            c
        },
        {
            let mut c = ExperimentConfig::named("saturation-many");
            c.n = Some(3);
            c.gates = Some(500);
            c.reps = Some(10);
            c
        },
        {
            let mut c = ExperimentConfig::named("suzuki");
            c.n = Some(2);
            c.blocks = 2;
            c.reps = Some(4);
            c
        },
    ];
    for config in configs {
        let first = run(&config).unwrap().table.to_csv();
        let second = run(&config).unwrap().table.to_csv();
        assert_eq!(
            first, second,
            "CSV differs on rerun of {}",
            config.experiment
        );
        let mut parallel = config.clone();
        parallel.workers = 2;
        let third = run(&parallel).unwrap().table.to_csv();
        assert_eq!(
            first, third,
            "CSV depends on worker count for {}",
            config.experiment
        );
        assert!(first.starts_with("experiment,model,n,N,rep,seed,metric,value\n"));
    }
    report(
        "12",
        "byte-identical reruns",
        true,
        "8 experiments x (rerun + 2-worker rerun)",
        started,
    );
}

#[test]
fn experiments_error_ordering_per_realization() {
    // Fixed-input l2 <= 2 x diamond <= 2 x worst case, and trace <= l2,
    // per realization on the standard grid point.
    let started = Instant::now();
    let hamiltonian = Hamiltonian::heisenberg_1d(3).unwrap();
    let t = 2.0;
    let target = expm_hermitian(&hamiltonian.dense().unwrap(), t).unwrap();
    for seed in 0..10u64 {
        let mut rng = SeededRng::new(seed);
        let psi = random_product_state(3, &mut rng);
        let plan = qdrift_sample(&hamiltonian, t, 160, &mut rng).unwrap();
        let realized = realize_unitary(&plan, &hamiltonian).unwrap();
        let ideal = target.apply(&psi);
        let evolved = apply_plan(&plan, &hamiltonian, &psi).unwrap();
        let l2 = evolved.sub(&ideal).norm();
        let trace = pure_trace_distance(&ideal, &evolved).unwrap();
        let diamond = unitary_diamond_distance(&target, &realized).unwrap();
        let worst = operator_norm(&realized.sub(&target)).unwrap();
        assert!(trace <= l2 + 1e-10);
        assert!(l2 <= 2.0 * diamond + 1e-8);
        assert!(diamond <= worst + 1e-8);
    }
    report(
        "ordering",
        "per-realization metric ordering",
        true,
        "10 seeds at n=3, N=160",
        started,
    );
}

#[test]
fn experiments_fixed_input_std_shrinks_with_gates() {
    let started = Instant::now();
    let mut config = ExperimentConfig::named("fig3-gatecount");
    config.n = Some(4);
    config.t = Some(2.0);
    config.gate_grid = Some(vec![80, 160, 320, 640]);
    config.reps = Some(50);
    config.seed = 4;
    config.workers = WORKERS;
    config.metrics = vec!["fixed_input_l2".into()];
    let output = run(&config).unwrap();
    let std_at = |gates: u64| {
        let values: Vec<f64> = output
            .table
            .rows
            .iter()
            .filter(|r| r.gates == gates && r.metric == "fixed_input_l2")
            .map(|r| r.value)
            .collect();
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (values.len() - 1) as f64).sqrt()
    };
    let mut ratios: Vec<f64> = [(80u64, 160u64), (160, 320), (320, 640)]
        .iter()
        .map(|(a, b)| std_at(*a) / std_at(*b))
        .collect();
    ratios.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = ratios[1];
    assert!(
        median > 1.0,
        "median std ratio {median} across doublings should exceed 1"
    );
    report(
        "concentration",
        "fixed-input std shrinks with N",
        true,
        &format!("median doubling ratio {median:.2}"),
        started,
    );
}
