//! Reference projection used to validate the fast algorithms.
//!
//! The face `{w in [0,1]^d : theta^T w = p}` is mapped onto the capped
//! simplex `{w' in [0,1]^d : sum w' = s}` by reflecting every coordinate
//! with `theta_i = -1` (`w'_i = 1 - w_i`). The capped-simplex projection is
//! `w'_i = clamp(y_i - mu, 0, 1)` for the `mu` solving the monotone
//! piecewise-linear equation `sum_i clamp(y_i - mu, 0, 1) = s`, found here by
//! an exact search over the sorted breakpoints `{y_i - 1, y_i}`.
//!
//! Nothing in this module shares code with the component-fixing loop apart
//! from the cut search itself.

use crate::fix::project_hyperplane;
use crate::geometry::{clamp_unit_box, cut_search, ForbiddenSetInequality, ParityKind, Sign};

/// A capped-simplex projection problem.
#[derive(Debug, Clone, PartialEq)]
pub struct CappedSimplexInstance {
    pub y: Vec<f64>,
    pub s: usize,
}

impl CappedSimplexInstance {
    pub fn solve(&self) -> Vec<f64> {
        project_capped_simplex(&self.y, self.s)
    }
}

fn capped_sum(y: &[f64], mu: f64) -> f64 {
    y.iter().map(|&yi| (yi - mu).clamp(0.0, 1.0)).sum()
}

/// Projection of `y` onto `{w in [0,1]^d : sum w = s}`.
///
/// # Panics
///
/// If `s > y.len()`.
pub fn project_capped_simplex(y: &[f64], s: usize) -> Vec<f64> {
    let d = y.len();
    assert!(s <= d, "capped simplex needs 0 <= s <= d");
    if s == d {
        return vec![1.0; d];
    }
    if s == 0 {
        return vec![0.0; d];
    }
    let target = s as f64;
    let mut breaks: Vec<f64> = y.iter().flat_map(|&yi| [yi - 1.0, yi]).collect();
    breaks.sort_by(f64::total_cmp);
    // capped_sum is nonincreasing: d at breaks[0], 0 at the last breakpoint.
    // Find the last breakpoint whose sum is still >= target.
    let (mut lo, mut hi) = (0usize, breaks.len() - 1);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if capped_sum(y, breaks[mid]) >= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (left, right) = (breaks[lo], breaks[hi]);
    let probe = 0.5 * (left + right);
    let mut active_sum = 0.0;
    let mut active = 0usize;
    let mut saturated = 0usize;
    for &yi in y {
        let r = yi - probe;
        if r >= 1.0 {
            saturated += 1;
        } else if r > 0.0 {
            active += 1;
            active_sum += yi;
        }
    }
    let mu = if active == 0 {
        // flat segment: every point of it solves the equation
        probe
    } else {
        ((active_sum + saturated as f64 - target) / active as f64).clamp(left, right)
    };
    y.iter().map(|&yi| (yi - mu).clamp(0.0, 1.0)).collect()
}

/// Projection of `x` onto the face of the box cut out by `ineq`.
///
/// The face must be nonempty, which holds for every cut the cut search
/// returns.
pub fn project_face(x: &[f64], ineq: &ForbiddenSetInequality) -> Vec<f64> {
    assert_eq!(x.len(), ineq.dim(), "dimension mismatch");
    let d = x.len() as i64;
    let minus = ineq.theta().iter().filter(|s| !s.is_plus()).count() as i64;
    let s = ineq.rhs() + minus;
    debug_assert!((0..=d).contains(&s), "empty face");
    let y: Vec<f64> = x
        .iter()
        .zip(ineq.theta())
        .map(|(&xi, th)| match th {
            Sign::Plus => xi,
            Sign::Minus => 1.0 - xi,
        })
        .collect();
    let w = project_capped_simplex(&y, s.clamp(0, d) as usize);
    w.iter()
        .zip(ineq.theta())
        .map(|(&wi, th)| match th {
            Sign::Plus => wi,
            Sign::Minus => 1.0 - wi,
        })
        .collect()
}

/// Exact projection onto the parity polytope: the box projection when it
/// satisfies the cut, otherwise the projection onto the cut's face.
pub fn project(x: &[f64], kind: ParityKind) -> Vec<f64> {
    assert!(!x.is_empty(), "projection input must be nonempty");
    let u = clamp_unit_box(x);
    let cut = cut_search(x, kind);
    if cut.excess(&u) <= 0.0 {
        u
    } else {
        project_face(x, &cut)
    }
}

/// Number of hyperplane projections the component-fixing recursion needs,
/// replayed naively: a fresh cut search at every level and explicit
/// sub-vectors instead of in-place swaps.
pub fn replay_iterations(x: &[f64], kind: ParityKind) -> usize {
    let u = clamp_unit_box(x);
    if cut_search(x, kind).excess(&u) <= 0.0 {
        return 0;
    }
    let mut rest = x.to_vec();
    let mut kind = kind;
    let mut passes = 0;
    while rest.len() > 1 {
        let cut = cut_search(&rest, kind);
        let v = project_hyperplane(&rest, &cut);
        passes += 1;
        let mut kept = Vec::with_capacity(rest.len());
        let mut ones = 0;
        for ((&xi, &vi), th) in rest.iter().zip(&v).zip(cut.theta()) {
            match th {
                Sign::Plus if vi > 1.0 => ones += 1,
                Sign::Minus if vi < 0.0 => {}
                _ => kept.push(xi),
            }
        }
        if kept.len() == rest.len() {
            break;
        }
        if ones % 2 == 1 {
            kind = kind.flipped();
        }
        rest = kept;
    }
    passes
}
