use susy_fpe::oracles::{
    crank_nicolson_evolve, euler_maruyama, fd_cross_check, fd_truncation, histogram, quadrature,
    DensitySampler, EnsembleState, FdSettings, ParticleSimulation,
};
use susy_fpe::spectral::evolve;
use susy_fpe::{Grid, InterpolationRule, Interval, ParameterSet, SpectralCoefficients};

fn fig1() -> SpectralCoefficients {
    SpectralCoefficients::new(ParameterSet::radial(1.0, 1.0).unwrap(), vec![5.0, 1.0, 1.0]).unwrap()
}

#[test]
fn crank_nicolson_is_second_order() {
    let coeffs = fig1();
    let errors: Vec<f64> = [(101, 4e-3), (201, 2e-3), (401, 1e-3)]
        .into_iter()
        .map(|(points, dt)| {
            let settings = FdSettings { dt, points };
            fd_cross_check(&coeffs, 0.0, InterpolationRule::Linear, settings, &[0.5]).unwrap()[0]
        })
        .collect();
    for pair in errors.windows(2) {
        assert!(pair[0] / pair[1] >= 3.5, "errors {errors:?}");
    }
}

#[test]
fn crank_nicolson_conserves_discrete_mass() {
    let coeffs = fig1();
    let iv = fd_truncation(coeffs.params());
    let grid = Grid::uniform(iv.lo, iv.hi, 500).unwrap();
    let initial = evolve(&coeffs, &grid, 0.0).unwrap();
    let later = crank_nicolson_evolve(coeffs.params(), &initial, 1e-3, 2.0).unwrap();
    assert!((later.mass() - initial.mass()).abs() <= 1e-10);
}

#[test]
fn free_diffusion_variance_is_two_t() {
    let n = 100_000;
    let simulation = ParticleSimulation::new(|_| 0.0, Interval::new(f64::NEG_INFINITY, f64::INFINITY));
    let mut state = simulation.start(&|_: f64| 0.0, n, 99);
    simulation.advance(&mut state, 0.01, 1.0).unwrap();
    let mean = state.positions.iter().sum::<f64>() / n as f64;
    let var = state.positions.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    // standard error of the sample variance of a normal with variance 2
    let se = 2.0 * (2.0 / (n - 1) as f64).sqrt();
    assert!((var - 2.0).abs() <= 3.0 * se, "variance {var}, se {se}");
    assert!(mean.abs() <= 3.0 * (2.0 / n as f64).sqrt(), "mean {mean}");
}

#[test]
fn reflected_free_diffusion_stays_uniform() {
    let n = 100_000;
    let simulation = ParticleSimulation::new(|_| 0.0, Interval::new(0.0, 1.0));
    let mut state = simulation.start(&|u: f64| u, n, 5);
    simulation.advance(&mut state, 1e-3, 0.5).unwrap();
    assert_eq!(state.len(), n);
    let hist = histogram(&state, 20, 0.0, 1.0).unwrap();
    let l1 = hist.l1_against(|_| 1.0).unwrap();
    assert!(l1 < 0.03, "L1 {l1}");
}

#[test]
fn sampling_is_deterministic_and_thread_independent() {
    let params = ParameterSet::morse(5.0, 1.0).unwrap();
    let iv = fd_truncation(&params);
    let ground = |x: f64| params.eigenfunction(0, x).unwrap().powi(2);
    let sampler = DensitySampler::from_fn(ground, iv.lo, iv.hi, 2048).unwrap();
    let run = |threads: usize| -> EnsembleState {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| euler_maruyama(&params, 5_000, &sampler, 1e-2, 0.3, 17).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(1));
    assert_eq!(one.positions, run(4).positions);
    assert_ne!(one.positions, euler_maruyama(&params, 5_000, &sampler, 1e-2, 0.3, 18).unwrap().positions);
    assert!(one.positions.iter().all(|x| iv.contains(*x)));
}

#[test]
fn quadrature_richardson_on_known_integrals() {
    // (integrand, lo, hi, exact)
    type Case = (fn(f64) -> f64, f64, f64, f64);
    let cases: [Case; 3] = [
        (|x| (-x * x).exp(), -8.0, 8.0, std::f64::consts::PI.sqrt()),
        (|x| x.sin(), 0.0, std::f64::consts::PI, 2.0),
        (|x| 1.0 / (1.0 + x * x), 0.0, 1.0, std::f64::consts::FRAC_PI_4),
    ];
    for (f, lo, hi, exact) in cases {
        let coarse = quadrature(f, lo, hi, 64).unwrap();
        let fine = quadrature(f, lo, hi, 128).unwrap();
        assert!((fine - coarse).abs() <= 1e-9);
        assert!((fine - exact).abs() <= 1e-12, "{fine} vs {exact}");
    }
}
