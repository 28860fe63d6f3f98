mod common;

use bsa_core::competitors::{
    abc_minimize, abc_neighbor, de_minimize, ff_minimize, pso_minimize, AbcParams, DeParams,
    FfParams, PsoParams,
};
use bsa_core::objective::FnObjective;
use bsa_core::population::initialize_population;
use bsa_core::{
    bsa_minimize, Algorithm, BsaConfig, FunctionId, Objective, RandomSource, RunSettings,
    SearchSpace, Target,
};
use common::Counting;

fn sphere2() -> (bsa_core::ObjectiveFunction, SearchSpace) {
    let f = FunctionId::Sphere.at_dims(2).unwrap();
    let s = f.default_space.clone();
    (f, s)
}

fn settings(iterations: usize) -> RunSettings {
    RunSettings {
        pop_size: 30,
        max_iterations: iterations,
        target: Some(Target::new(0.0, 1e-6)),
        record_trace: true,
        ..RunSettings::default()
    }
}

/// Initial best for a given stream, recomputed from the initialiser.
fn initial_best(f: &impl Objective, space: &SearchSpace, n: usize, seed: u64) -> f64 {
    let pop = initialize_population(n, space, &mut RandomSource::new(seed, 0)).unwrap();
    pop.members()
        .iter()
        .map(|m| f.evaluate(&m.coords))
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn de_without_differential_never_worsens() {
    let (f, space) = sphere2();
    let params = DeParams {
        f_weight: 0.0,
        crossover_rate: 1.0,
    };
    let out = de_minimize(
        &f,
        &space,
        &settings(50),
        params,
        &mut RandomSource::new(3, 0),
    )
    .unwrap();
    for w in out.trace.windows(2) {
        assert!(w[1].best_fitness <= w[0].best_fitness);
    }
    // Trials are copies of existing members, so nothing better than the
    // initial best can appear.
    assert_eq!(out.best_value, initial_best(&f, &space, 30, 3));
}

#[test]
fn frozen_pso_does_not_move() {
    let (f, space) = sphere2();
    let params = PsoParams {
        inertia: 0.0,
        cognitive: 0.0,
        social: 0.0,
        velocity_clamp_fraction: 0.5,
    };
    let out = pso_minimize(
        &f,
        &space,
        &settings(20),
        params,
        &mut RandomSource::new(8, 0),
    )
    .unwrap();
    assert_eq!(out.best_value, initial_best(&f, &space, 30, 8));
    assert!(out.trace.iter().all(|r| r.best_fitness == out.best_value));
}

#[test]
fn abc_without_scouts() {
    // A flat objective never accepts a move, so every source exhausts its
    // trials; with an infinite limit no scout evaluation happens.
    let flat = FnObjective::new(2, |_: &[f64]| 1.0);
    let space = SearchSpace::uniform(2, -1.0, 1.0).unwrap();
    let run = RunSettings {
        pop_size: 10,
        max_iterations: 100,
        ..RunSettings::default()
    };
    let out = abc_minimize(
        &flat,
        &space,
        &run,
        AbcParams {
            trial_limit: Some(f64::INFINITY),
        },
        &mut RandomSource::new(1, 0),
    )
    .unwrap();
    assert_eq!(out.evaluations, 10 + 100 * 20);
    let limited = abc_minimize(
        &flat,
        &space,
        &run,
        AbcParams {
            trial_limit: Some(5.0),
        },
        &mut RandomSource::new(1, 0),
    )
    .unwrap();
    assert!(limited.evaluations > out.evaluations);
}

#[test]
fn abc_neighbor_changes_one_dimension() {
    let mut rng = RandomSource::new(4, 0);
    for _ in 0..1000 {
        let x: Vec<f64> = (0..6).map(|_| rng.uniform(-1.0, 1.0)).collect();
        let partner: Vec<f64> = (0..6).map(|_| rng.uniform(-1.0, 1.0)).collect();
        let (v, j) = abc_neighbor(&x, &partner, &mut rng);
        for k in 0..6 {
            if k != j {
                assert_eq!(v[k], x[k]);
            }
        }
    }
}

#[test]
fn firefly_without_forces_is_still() {
    let (f, space) = sphere2();
    let counted = Counting::new(f);
    let params = FfParams {
        beta0: 0.0,
        gamma: 1.0,
        alpha: 0.0,
        alpha_decay: 0.97,
    };
    let out = ff_minimize(
        &counted,
        &space,
        &settings(20),
        params,
        &mut RandomSource::new(2, 0),
    )
    .unwrap();
    // Nobody moves, so nothing is re-evaluated after initialisation.
    assert_eq!(out.evaluations, 30);
    assert_eq!(counted.calls.get(), 30);
    assert_eq!(out.best_value, initial_best(&counted.inner, &space, 30, 2));
}

#[test]
fn firefly_infinite_gamma_is_pure_noise() {
    let space = SearchSpace::uniform(2, -10.0, 10.0).unwrap();
    let f = FnObjective::new(2, |x: &[f64]| x[0] * x[0] + x[1] * x[1]);
    let alpha = 1e-3;
    let params = FfParams {
        beta0: 1.0,
        gamma: f64::INFINITY,
        alpha,
        alpha_decay: 1.0,
    };
    let run = RunSettings {
        pop_size: 5,
        max_iterations: 1,
        record_trace: false,
        ..RunSettings::default()
    };
    // With no attraction each coordinate moves by at most
    // (number of brighter flies) * alpha * width / 2 in one sweep.
    let out = ff_minimize(&f, &space, &run, params, &mut RandomSource::new(6, 0)).unwrap();
    let init = initialize_population(5, &space, &mut RandomSource::new(6, 0)).unwrap();
    let max_step = 4.0 * alpha * 20.0 / 2.0;
    let near_initial = init.members().iter().any(|m| {
        m.coords
            .iter()
            .zip(&out.best_coords)
            .all(|(a, b)| (a - b).abs() <= max_step)
    });
    assert!(near_initial);
}

fn successes(alg: Algorithm) -> usize {
    let (f, space) = sphere2();
    (0..30)
        .filter(|&seed| {
            let out = alg
                .minimize(&f, &space, &settings(2000), &mut RandomSource::new(seed, 0))
                .unwrap();
            out.best_value <= 1e-6
        })
        .count()
}

#[test]
fn sphere_is_solved_by_every_algorithm() {
    // Realised counts with these streams: 30/30 for each algorithm.
    for alg in Algorithm::ALL {
        let s = successes(alg);
        assert!(s >= 29, "{alg}: {s}/30");
    }
}

#[test]
fn bsa_runs_are_reproducible() {
    let (f, space) = sphere2();
    let cfg = BsaConfig {
        run: settings(200),
        ..BsaConfig::default()
    };
    let a = bsa_minimize(&f, &space, &cfg, &mut RandomSource::new(10, 10)).unwrap();
    let b = bsa_minimize(&f, &space, &cfg, &mut RandomSource::new(10, 10)).unwrap();
    assert_eq!(a, b);
}
