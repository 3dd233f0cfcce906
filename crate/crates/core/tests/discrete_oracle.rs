use proptest::prelude::*;
use restarts::discrete::{
    augment_observed, bit_scaling, geometric_scaling, make_cube_powers, make_random_01_polytope,
    scale_objective, AugmentInstance, BinaryVector, ImprovingOracle, IntegerObjective,
    LinearFunctional, Policy,
};

// Values computed from the bit vectors, independently of the library's dot.
fn value(c: &[i64], x: &BinaryVector) -> i64 {
    x.bits().iter().zip(c).map(|(&b, &ci)| b as i64 * ci).sum()
}

// Exhaustive optimum with lexicographic tie-break, written from scratch.
fn reference_opt(points: &[BinaryVector], c: &[i64]) -> (BinaryVector, i64) {
    let mut sorted: Vec<_> = points.to_vec();
    sorted.sort_by_key(|p| p.bits());
    let mut best = sorted[0];
    for p in &sorted {
        if value(c, p) > value(c, &best) {
            best = *p;
        }
    }
    (best, value(c, &best))
}

fn ceil_log2(v: i64) -> usize {
    let mut k = 0;
    while (1i64 << k) < v {
        k += 1;
    }
    k
}

fn battery() -> Vec<AugmentInstance> {
    let mut out: Vec<_> = (0..100)
        .map(|s| make_random_01_polytope(8, 60, s).unwrap())
        .collect();
    out.extend((1..=12).map(|n| make_cube_powers(n).unwrap()));
    out
}

#[test]
fn bit_scaling_is_exact_and_within_step_ceiling() {
    for inst in battery() {
        let c = inst.objective().entries().to_vec();
        let n = inst.dim();
        let (_, opt) = reference_opt(inst.points(), &c);
        let x0 = inst.first_point();
        for policy in Policy::ALL {
            let run = bit_scaling(&inst, &x0, policy).unwrap();
            assert_eq!(value(&c, &run.point), opt);
            let k = ceil_log2(inst.objective().big_c());
            assert!(run.phases.len() <= k);
            assert!(run.total_steps <= n * k);
            assert!(run.phases.iter().all(|p| p.steps <= n));
        }
    }
}

#[test]
fn bit_scaling_phases_start_within_n_of_optimal() {
    for inst in battery() {
        let c = inst.objective();
        let n = inst.dim() as i64;
        let run = bit_scaling(&inst, &inst.first_point(), Policy::MinImprovement).unwrap();
        for phase in &run.phases {
            let cmu: Vec<i64> = scale_objective(c, phase.scale as u64).entries().to_vec();
            let (_, opt_mu) = reference_opt(inst.points(), &cmu);
            assert!(opt_mu - value(&cmu, &phase.start) <= n);
        }
    }
}

#[test]
fn geometric_scaling_is_exact_and_recovers_a_fixed_fraction() {
    for inst in battery() {
        let c = inst.objective().entries().to_vec();
        let n = inst.dim();
        let (_, opt) = reference_opt(inst.points(), &c);
        for policy in Policy::ALL {
            let run = geometric_scaling(&inst, &inst.first_point(), policy).unwrap();
            assert_eq!(value(&c, &run.point), opt);
            assert!(run.max_phase_steps() <= 2 * n);
            for step in &run.steps {
                let gained = value(&c, &step.to) - value(&c, &step.from);
                let start = run.phases[step.phase - 1].start;
                // 2n * gain >= gap at the phase start >= gap at the current iterate
                assert!(2 * n as i64 * gained >= opt - value(&c, &start));
                assert!(2 * n as i64 * gained >= opt - value(&c, &step.from));
            }
            let big_c = inst.objective().big_c() as f64;
            let n2c = (n * n) as f64 * big_c;
            assert!(run.phases.len() <= n2c.log2().floor() as usize + 2);
        }
    }
}

#[test]
fn naive_augmentation_walks_the_whole_cube() {
    let cube = make_cube_powers(10).unwrap();
    let f = LinearFunctional::from_objective(cube.objective());
    let oracle = ImprovingOracle::new(&cube, Policy::MinImprovement);
    let mut values = vec![];
    let (x, steps) = augment_observed(&oracle, &BinaryVector::zeros(10), &f, |_, to| {
        values.push(value(cube.objective().entries(), to))
    })
    .unwrap();
    assert_eq!(steps, 1023);
    assert_eq!(values, (1..=1023).collect::<Vec<_>>());
    assert_eq!(x.count_ones(), 10);
    let scaled = bit_scaling(&cube, &BinaryVector::zeros(10), Policy::MinImprovement).unwrap();
    assert!(scaled.total_steps <= 100);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn augmentation_strictly_improves_and_is_optimal(
        n in 1usize..7,
        seed in any::<u64>(),
        frac in 0.05f64..1.0,
        policy in prop::sample::select(Policy::ALL.to_vec()),
    ) {
        let m = ((1usize << n) as f64 * frac).ceil() as usize;
        let inst = make_random_01_polytope(n, m, seed).unwrap();
        let c = inst.objective().entries().to_vec();
        let f = LinearFunctional::from_objective(inst.objective());
        let oracle = ImprovingOracle::new(&inst, policy);
        let mut ok = true;
        let (x, steps) = augment_observed(&oracle, &inst.first_point(), &f, |from, to| {
            ok &= value(&c, to) > value(&c, from) && inst.contains(to);
        }).unwrap();
        prop_assert!(ok);
        prop_assert!(steps < m);
        prop_assert_eq!(value(&c, &x), reference_opt(inst.points(), &c).1);
    }

    #[test]
    fn signed_objectives_round_trip(
        n in 1usize..6,
        seed in any::<u64>(),
        c in prop::collection::vec(-50i64..50, 6),
    ) {
        let base = make_random_01_polytope(n, (1 << n) / 2 + 1, seed).unwrap();
        let c = c[..n].to_vec();
        let (inst, orient) = AugmentInstance::with_signed_objective(n, base.points().to_vec(), c.clone()).unwrap();
        let run = geometric_scaling(&inst, &inst.first_point(), Policy::MaxImprovement).unwrap();
        let original = orient.apply(&run.point);
        prop_assert!(base.contains(&original));
        prop_assert_eq!(value(&c, &original), reference_opt(base.points(), &c).1);
        prop_assert_eq!(orient.original_value(inst.objective().dot(&run.point)), value(&c, &original));
    }
}

#[test]
fn zero_objective_keeps_the_start() {
    let base = make_random_01_polytope(5, 10, 2).unwrap();
    let inst = base
        .with_objective(IntegerObjective::new(vec![0; 5]).unwrap())
        .unwrap();
    let x0 = inst.points()[3];
    assert_eq!(
        bit_scaling(&inst, &x0, Policy::MaxImprovement)
            .unwrap()
            .point,
        x0
    );
    assert_eq!(
        geometric_scaling(&inst, &x0, Policy::MaxImprovement)
            .unwrap()
            .point,
        x0
    );
    assert_eq!(inst.brute_force_opt(), inst.first_point());
}
