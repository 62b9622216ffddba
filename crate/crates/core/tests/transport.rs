mod common;

use amreval::transport::{solve_exact, wasserstein_distance, TransportError, TransportProblem};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_masses(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..1.0)).collect();
    let s: f64 = raw.iter().sum();
    let mut m: Vec<f64> = raw.iter().map(|x| x / s).collect();
    let fix = 1.0 - m.iter().sum::<f64>();
    m[0] += fix;
    m
}

#[test]
fn matches_vertex_enumeration_on_small_problems() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..300 {
        let n = rng.random_range(1..=4);
        let m = rng.random_range(1..=4);
        let cost: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..m).map(|_| rng.random_range(0.0..5.0)).collect())
            .collect();
        let a = random_masses(&mut rng, n);
        let b = random_masses(&mut rng, m);
        let p = TransportProblem::new(cost.clone(), a.clone(), b.clone()).unwrap();
        let got = solve_exact(&p).unwrap().objective;
        let want = common::transport_lp_oracle(&cost, &a, &b);
        assert!((got - want).abs() < 1e-9, "{got} vs {want} for {cost:?} {a:?} {b:?}");
    }
}

#[test]
fn degenerate_integer_costs_agree_with_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..200 {
        let n = rng.random_range(2..=4);
        let m = rng.random_range(2..=4);
        let cost: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..m).map(|_| rng.random_range(0..3) as f64).collect())
            .collect();
        let p = TransportProblem::uniform(cost.clone()).unwrap();
        let got = solve_exact(&p).unwrap().objective;
        let want = common::transport_lp_oracle(&cost, p.source_mass(), p.target_mass());
        assert!((got - want).abs() < 1e-9, "{got} vs {want} for {cost:?}");
    }
}

#[test]
fn rejects_invalid_problems() {
    assert!(matches!(
        TransportProblem::new(vec![vec![1.0]], vec![0.5], vec![1.0]),
        Err(TransportError::MassMismatch { .. })
    ));
    assert!(matches!(
        TransportProblem::uniform(vec![vec![-1.0]]),
        Err(TransportError::NegativeCost(_))
    ));
    assert!(wasserstein_distance(&[vec![0.0]], &[vec![0.0, 1.0]]).is_err());
}

fn point_set(max: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-3.0f64..3.0, 2), 1..=max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn metric_axioms(a in point_set(5), b in point_set(5), c in point_set(5)) {
        let ab = wasserstein_distance(&a, &b).unwrap();
        let ba = wasserstein_distance(&b, &a).unwrap();
        let ac = wasserstein_distance(&a, &c).unwrap();
        let cb = wasserstein_distance(&c, &b).unwrap();
        prop_assert!((ab - ba).abs() < 1e-9);
        prop_assert!(ab <= ac + cb + 1e-9);
        prop_assert!(wasserstein_distance(&a, &a).unwrap().abs() < 1e-9);
        let mut shuffled = a.clone();
        shuffled.reverse();
        prop_assert!(wasserstein_distance(&a, &shuffled).unwrap().abs() < 1e-9);
    }

    #[test]
    fn plan_marginals_and_objective(
        cost in prop::collection::vec(prop::collection::vec(0.0f64..10.0, 3), 1..=6)
    ) {
        let p = TransportProblem::uniform(cost.clone()).unwrap();
        let plan = solve_exact(&p).unwrap();
        for (i, row) in plan.flow.iter().enumerate() {
            prop_assert!((row.iter().sum::<f64>() - p.source_mass()[i]).abs() < 1e-9);
            prop_assert!(row.iter().all(|&f| f >= 0.0));
        }
        for j in 0..3 {
            let col: f64 = plan.flow.iter().map(|r| r[j]).sum();
            prop_assert!((col - p.target_mass()[j]).abs() < 1e-9);
        }
        let obj: f64 = plan.flow.iter().zip(&cost)
            .flat_map(|(f, c)| f.iter().zip(c).map(|(x, y)| x * y)).sum();
        prop_assert!((obj - plan.objective).abs() < 1e-9);
    }
}
