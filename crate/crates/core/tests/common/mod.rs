//! Helpers shared by the integration test targets.

#![allow(dead_code)]

use parity_fix::fix::{self, FixObserver, Window};
use parity_fix::geometry::clamp_unit_box;
use parity_fix::{cut_search, oracle, ParityKind, ParityCheckMatrix, Sign};
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

pub fn rng(seed: u64) -> Xoshiro256PlusPlus {
    Xoshiro256PlusPlus::seed_from_u64(seed)
}

pub fn uniform_vec(rng: &mut impl Rng, d: usize, a: f64) -> Vec<f64> {
    (0..d).map(|_| rng.random_range(-a..a)).collect()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max)
}

/// Tallies of each checked property over many projection calls.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct Violations {
    pub hard_calls: u64,
    /// A pinned coordinate differs from the exact projection.
    pub fixing_soundness: u64,
    /// A pass pinned nothing although `v` left the box.
    pub existence: u64,
    /// The carried cut differs from a fresh cut search on the live window.
    pub fast_update: u64,
    /// The box projection of a live window satisfied its cut.
    pub recursive_check: u64,
    /// A retained coordinate moved against its coefficient.
    pub drift: u64,
    /// A pass ran on an empty window.
    pub empty_window: u64,
    pub iteration_bound: u64,
}

impl Violations {
    pub fn total(&self) -> u64 {
        self.fixing_soundness
            + self.existence
            + self.fast_update
            + self.recursive_check
            + self.drift
            + self.empty_window
            + self.iteration_bound
    }

    pub fn merge(&mut self, o: &Violations) {
        self.hard_calls += o.hard_calls;
        self.fixing_soundness += o.fixing_soundness;
        self.existence += o.existence;
        self.fast_update += o.fast_update;
        self.recursive_check += o.recursive_check;
        self.drift += o.drift;
        self.empty_window += o.empty_window;
        self.iteration_bound += o.iteration_bound;
    }
}

/// Observer checking the structural properties of the fixing loop against
/// an exact projection computed independently.
struct Checker {
    exact: Vec<f64>,
    kind: ParityKind,
    prev: Vec<(usize, Sign, f64)>,
    last_v_in_box: bool,
    v: Violations,
}

impl Checker {
    fn check_cut(&mut self, window: &Window<'_>) {
        let fresh = cut_search(window.x, self.kind);
        if fresh.theta() != window.theta || fresh.rhs() != window.rhs {
            self.v.fast_update += 1;
        }
    }
}

impl FixObserver for Checker {
    fn hyperplane(&mut self, iteration: usize, window: Window<'_>, v: &[f64]) {
        if window.x.is_empty() {
            self.v.empty_window += 1;
            return;
        }
        if iteration > 1 {
            self.check_cut(&window);
            let u = clamp_unit_box(window.x);
            let lhs: f64 = u.iter().zip(window.theta).map(|(ui, th)| th.value() * ui).sum();
            if lhs <= window.rhs as f64 {
                self.v.recursive_check += 1;
            }
            for (k, &i) in window.indices.iter().enumerate() {
                if let Some(&(_, th, old)) = self.prev.iter().find(|p| p.0 == i) {
                    let moved = match th {
                        Sign::Plus => v[k] - old,
                        Sign::Minus => old - v[k],
                    };
                    if moved <= -1e-12 {
                        self.v.drift += 1;
                    }
                }
            }
        }
        self.prev = window
            .indices
            .iter()
            .zip(window.theta)
            .zip(v)
            .map(|((&i, &th), &vi)| (i, th, vi))
            .collect();
        self.last_v_in_box = v.iter().all(|&vi| (0.0..=1.0).contains(&vi));
    }

    fn fixed(&mut self, index: usize, value: f64) {
        if (self.exact[index] - value).abs() > 1e-9 {
            self.v.fixing_soundness += 1;
        }
        if value == 1.0 {
            self.kind = self.kind.flipped();
        }
    }

    fn pass_end(&mut self, fixed: usize) {
        if fixed == 0 && !self.last_v_in_box {
            self.v.existence += 1;
        }
    }

    fn dimension_one(&mut self, window: Window<'_>) {
        if window.x.is_empty() {
            self.v.empty_window += 1;
            return;
        }
        self.check_cut(&window);
    }
}

/// Runs one projection under the checker. Returns `None` for easy inputs.
pub fn check_fixing_properties(x: &[f64], kind: ParityKind) -> Option<Violations> {
    let u = clamp_unit_box(x);
    if cut_search(x, kind).excess(&u) <= 0.0 {
        return None;
    }
    let mut checker = Checker {
        exact: oracle::project(x, kind),
        kind,
        prev: Vec::new(),
        last_v_in_box: false,
        v: Violations {
            hard_calls: 1,
            ..Default::default()
        },
    };
    let out = fix::project_observed(x, kind, &mut checker);
    if out.trace.iterations > x.len() {
        checker.v.iteration_bound += 1;
    }
    Some(checker.v)
}

/// The (8,4) code used throughout the decoder tests: four weight-4 checks.
pub fn code84() -> ParityCheckMatrix {
    ParityCheckMatrix::from_rows(8, vec![vec![0, 1, 2, 3], vec![2, 3, 4, 5], vec![4, 5, 6, 7], vec![1, 3, 5, 7]])
        .expect("valid matrix")
}

/// Its alist text, written out by hand.
pub const CODE84_ALIST: &str = "\
8 4
3 4
1 2 2 3 2 3 1 2
4 4 4 4
1 0 0
1 4 0
1 2 0
1 2 4
2 3 0
2 3 4
3 0 0
3 4 0
1 2 3 4
3 4 5 6
5 6 7 8
2 4 6 8
";

/// Maximum-likelihood codeword by enumeration: minimises `sum llr_i c_i`.
pub fn ml_codeword(h: &ParityCheckMatrix, llr: &[f64]) -> Vec<u8> {
    h.codewords_brute_force()
        .into_iter()
        .map(|c| {
            let cost: f64 = c.iter().zip(llr).map(|(&b, &l)| f64::from(b) * l).sum();
            (cost, c)
        })
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .expect("code has codewords")
        .1
}
