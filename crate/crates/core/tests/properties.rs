mod common;

use std::cell::{Cell, RefCell};

use bsa_core::bsa::Bsa;
use bsa_core::objective::FnObjective;
use bsa_core::population::boundary_control;
use bsa_core::stats::{wilcoxon_signed_rank, Method};
use bsa_core::{
    Algorithm, BoundaryPolicy, BsaConfig, FunctionId, Objective, Population, RandomSource,
    RunSettings, SearchSpace,
};
use common::Counting;
use proptest::prelude::*;

/// Records whether every evaluated point was inside the box.
struct Fenced<'a, O> {
    inner: O,
    space: &'a SearchSpace,
    escaped: Cell<bool>,
}

impl<O: Objective> Objective for Fenced<'_, O> {
    fn dims(&self) -> usize {
        self.inner.dims()
    }
    fn evaluate(&self, x: &[f64]) -> f64 {
        if !self.space.contains(x) {
            self.escaped.set(true);
        }
        self.inner.evaluate(x)
    }
}

fn multiset(pop: &Population) -> Vec<Vec<u64>> {
    let mut rows: Vec<Vec<u64>> = pop
        .members()
        .iter()
        .map(|m| m.coords.iter().map(|v| v.to_bits()).collect())
        .collect();
    rows.sort();
    rows
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn boundary_control_closes_the_box(
        rows in prop::collection::vec(prop::collection::vec(-20.0f64..20.0, 3), 1..20),
        seed in any::<u64>(),
        clip in any::<bool>(),
    ) {
        let space = SearchSpace::uniform(3, -5.0, 5.0).unwrap();
        let mut pop = Population::from_rows(rows.clone()).unwrap();
        let policy = if clip { BoundaryPolicy::Clip } else { BoundaryPolicy::Regenerate };
        boundary_control(&mut pop, &space, policy, &mut RandomSource::new(seed, 0)).unwrap();
        for (m, before) in pop.members().iter().zip(&rows) {
            prop_assert!(space.contains(&m.coords));
            for (v, b) in m.coords.iter().zip(before) {
                if (-5.0..=5.0).contains(b) {
                    prop_assert_eq!(v, b);
                }
            }
        }
    }

    #[test]
    fn bsa_generation_invariants(seed in any::<u64>(), n in 1usize..12, d in 1usize..6) {
        let space = SearchSpace::uniform(d, -3.0, 3.0).unwrap();
        let f = Fenced {
            inner: Counting::new(FnObjective::new(d, |x: &[f64]| {
                x.iter().map(|v| v * v - (3.0 * v).cos()).sum()
            })),
            space: &space,
            escaped: Cell::new(false),
        };
        let cfg = BsaConfig {
            run: RunSettings { pop_size: n, max_iterations: 40, ..RunSettings::default() },
            ..BsaConfig::default()
        };
        let mut rng = RandomSource::new(seed, 7);
        let mut run = Bsa::new(&f, &space, &cfg, &mut rng).unwrap();
        let snapshots = RefCell::new(vec![multiset(&run.state().current)]);
        let mut best = run.evaluator().best_value();
        for _ in 0..40 {
            let before: Vec<f64> = run.state().current.fitness().into_iter().map(Option::unwrap).collect();
            let before_hist = multiset(&run.state().historical);
            run.step(&mut rng).unwrap();
            let state = run.state();
            // Historical population is a permutation of the previous
            // historical population or of an earlier current population.
            let hist = multiset(&state.historical);
            prop_assert!(hist == before_hist || snapshots.borrow().contains(&hist));
            // Per-slot monotone.
            for (i, m) in state.current.members().iter().enumerate() {
                prop_assert!(m.fitness.unwrap() <= before[i]);
            }
            // Running best is monotone and no worse than the population.
            let now = run.evaluator().best_value();
            prop_assert!(now <= best);
            best = now;
            let pop_min = state.current.fitness().into_iter().map(Option::unwrap).fold(f64::INFINITY, f64::min);
            prop_assert!(best <= pop_min);
            prop_assert_eq!(state.current.len(), state.historical.len());
            snapshots.borrow_mut().push(multiset(&state.current));
        }
        prop_assert!(!f.escaped.get());
        prop_assert_eq!(run.evaluator().evaluations(), (n + 40 * n) as u64);
        prop_assert_eq!(f.inner.calls.get(), run.evaluator().evaluations());
    }

    #[test]
    fn all_optimizers_respect_contracts(seed in any::<u64>(), alg_index in 0usize..5) {
        let algorithm = Algorithm::ALL[alg_index];
        let obj = FunctionId::Rastrigin.at_dims(3).unwrap();
        let space = obj.default_space.clone();
        let f = Fenced { inner: Counting::new(obj), space: &space, escaped: Cell::new(false) };
        let settings = RunSettings {
            pop_size: 8,
            max_iterations: 30,
            record_trace: true,
            ..RunSettings::default()
        };
        let out = algorithm.minimize(&f, &space, &settings, &mut RandomSource::new(seed, 1)).unwrap();
        prop_assert!(!f.escaped.get());
        prop_assert_eq!(out.evaluations, f.inner.calls.get());
        prop_assert!(out.evaluations <= algorithm.max_evaluations(&settings));
        prop_assert_eq!(out.trace.len(), 31);
        for w in out.trace.windows(2) {
            prop_assert!(w[1].best_fitness <= w[0].best_fitness);
        }
        prop_assert!(space.contains(&out.best_coords));
        prop_assert_eq!(out.best_value, f.inner.inner.evaluate(&out.best_coords));
        let again = algorithm.minimize(&f, &space, &settings, &mut RandomSource::new(seed, 1)).unwrap();
        prop_assert_eq!(out, again);
    }

    #[test]
    fn rank_sums_are_conserved(
        pairs in prop::collection::vec((-6i32..6, -6i32..6), 1..40),
    ) {
        let a: Vec<f64> = pairs.iter().map(|p| p.0 as f64).collect();
        let b: Vec<f64> = pairs.iter().map(|p| p.1 as f64).collect();
        let r = wilcoxon_signed_rank(&a, &b, 0.05).unwrap();
        let n = r.n_effective as f64;
        prop_assert_eq!(r.r_plus + r.r_minus, n * (n + 1.0) / 2.0);
        prop_assert!((0.0..=1.0).contains(&r.p_value));

        let swapped = wilcoxon_signed_rank(&b, &a, 0.05).unwrap();
        prop_assert_eq!(swapped.r_plus, r.r_minus);
        prop_assert_eq!(swapped.r_minus, r.r_plus);
        prop_assert_eq!(swapped.p_value, r.p_value);
    }

    #[test]
    fn verdict_is_scale_invariant(
        pairs in prop::collection::vec((-50.0f64..50.0, -50.0f64..50.0), 1..40),
        scale in prop::sample::select(vec![0.5, 2.0, 4.0, 1024.0]),
    ) {
        let a: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let b: Vec<f64> = pairs.iter().map(|p| p.1).collect();
        let sa: Vec<f64> = a.iter().map(|v| v * scale).collect();
        let sb: Vec<f64> = b.iter().map(|v| v * scale).collect();
        let r = wilcoxon_signed_rank(&a, &b, 0.05).unwrap();
        let s = wilcoxon_signed_rank(&sa, &sb, 0.05).unwrap();
        prop_assert_eq!(r, s);
    }

    #[test]
    fn exact_p_matches_enumeration(signs in prop::collection::vec(any::<bool>(), 1..=12)) {
        let n = signs.len();
        let d: Vec<f64> = signs
            .iter()
            .enumerate()
            .map(|(i, &pos)| if pos { (i + 1) as f64 } else { -((i + 1) as f64) })
            .collect();
        let r = wilcoxon_signed_rank(&d, &vec![0.0; n], 0.05).unwrap();
        prop_assert_eq!(r.method, Method::Exact);
        prop_assert_eq!(r.p_value, common::brute_force_p(n, r.r_plus as usize));
    }
}
