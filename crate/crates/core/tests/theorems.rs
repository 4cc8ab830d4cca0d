//! Structural properties of the fixing loop, each checked on every pass of
//! at least 100 000 projections whose clamped input lies outside the polytope.

mod common;

use std::sync::OnceLock;

use common::{check_fixing_properties, rng, uniform_vec, Violations};
use parity_fix::ParityKind;
use rand::Rng;

const HARD_CALLS: u64 = 100_000;
const RANGES: [f64; 4] = [1.0, 3.0, 5.0, 10.0];

fn tallies() -> &'static Violations {
    static CELL: OnceLock<Violations> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut r = rng(0x7e0);
        let mut total = Violations::default();
        while total.hard_calls < HARD_CALLS {
            let d = r.random_range(2..=50);
            let a = RANGES[r.random_range(0..RANGES.len())];
            let kind = if r.random::<bool>() { ParityKind::Even } else { ParityKind::Odd };
            let x = uniform_vec(&mut r, d, a);
            if let Some(v) = check_fixing_properties(&x, kind) {
                total.merge(&v);
            }
        }
        total
    })
}

#[test]
fn pinned_components_match_the_exact_projection() {
    assert_eq!(tallies().fixing_soundness, 0, "{:?}", tallies());
}

#[test]
fn a_pass_pins_something_whenever_it_leaves_the_box() {
    assert_eq!(tallies().existence, 0, "{:?}", tallies());
}

#[test]
fn carried_cut_equals_fresh_cut_search() {
    assert_eq!(tallies().fast_update, 0, "{:?}", tallies());
}

#[test]
fn live_window_never_satisfies_its_cut_after_clamping() {
    assert_eq!(tallies().recursive_check, 0, "{:?}", tallies());
}

#[test]
fn retained_components_move_along_their_coefficient() {
    assert_eq!(tallies().drift, 0, "{:?}", tallies());
}

#[test]
fn window_never_empties() {
    assert_eq!(tallies().empty_window, 0, "{:?}", tallies());
}

#[test]
fn iterations_stay_within_dimension() {
    assert_eq!(tallies().iteration_bound, 0, "{:?}", tallies());
    assert!(tallies().hard_calls >= HARD_CALLS);
}
