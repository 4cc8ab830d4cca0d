use parity_fix::bench::{run_iteration_stats, run_op_bench, run_probability, to_csv, BenchSpec};
use parity_fix::Algorithm;

fn small_spec() -> BenchSpec {
    BenchSpec {
        degrees: 2..=12,
        trials: 3000,
        seed: 42,
        ..BenchSpec::default()
    }
}

#[test]
fn output_does_not_depend_on_worker_count() {
    let spec = small_spec();
    let one = to_csv(&run_op_bench(&spec, 1).unwrap());
    for workers in [2, 3, 7] {
        assert_eq!(to_csv(&run_op_bench(&spec, workers).unwrap()), one);
    }
    assert_eq!(to_csv(&run_probability(&spec, 1).unwrap()), to_csv(&run_probability(&spec, 5).unwrap()));
    assert_eq!(
        to_csv(&run_iteration_stats(&spec, 1).unwrap()),
        to_csv(&run_iteration_stats(&spec, 4).unwrap())
    );
}

#[test]
fn every_algorithm_sees_the_same_inputs() {
    let spec = small_spec();
    let ops = run_op_bench(&spec, 2).unwrap();
    let prob = run_probability(&spec, 2).unwrap();
    for p in &prob {
        for r in ops.iter().filter(|r| r.d == p.d) {
            assert_eq!(r.hard_case_fraction, p.hard_case_fraction, "d={} {:?}", r.d, r.algorithm);
        }
    }
}

#[test]
fn seed_changes_inputs() {
    let a = run_probability(&small_spec(), 1).unwrap();
    let b = run_probability(&BenchSpec { seed: 43, ..small_spec() }, 1).unwrap();
    assert_ne!(a, b);
}

#[test]
fn two_dimensional_probability_is_stable_across_seeds() {
    let spec = BenchSpec {
        degrees: 2..=2,
        trials: 100_000,
        ..BenchSpec::default()
    };
    let short = run_probability(&spec, 1).unwrap()[0].hard_case_fraction.unwrap();
    let long = run_probability(&BenchSpec { trials: 1_000_000, seed: 7, ..spec }, 1).unwrap()[0]
        .hard_case_fraction
        .unwrap();
    assert!((short - long).abs() < 0.01, "{short} vs {long}");
}

#[test]
fn hard_cases_need_at_least_one_pass() {
    let rows = run_iteration_stats(&small_spec(), 1).unwrap();
    for r in rows {
        assert!(r.mean_iterations.unwrap() >= 1.0);
        assert!(r.mean_iterations.unwrap() <= (r.d - 1) as f64);
    }
}

#[test]
fn component_fixing_never_multiplies_and_baselines_divide_at_most_once() {
    let rows = run_op_bench(&small_spec(), 1).unwrap();
    for r in rows {
        let divs = r.mean_divs.unwrap();
        match r.algorithm {
            Algorithm::Fix => assert_eq!(r.mean_mults, Some(0.0)),
            _ => assert!((divs - r.hard_case_fraction.unwrap()).abs() < 1e-12, "{r:?}"),
        }
    }
}
