//! Sort-based exact projections used as complexity baselines.
//!
//! Both share the cut search and box test with the component-fixing
//! algorithm and differ only in how they project onto the cut's face.
//! After reflecting the coordinates with `theta_i = -1`, the face projection
//! becomes a projection onto `{w' in [0,1]^d : sum w' = d - 1}`, and with
//! `r = 1 - w'` a projection onto the probability simplex (`sum r = 1` and
//! `r >= 0` already imply `r <= 1`).
//!
//! * [`project_zhang_siegel`] walks the sorted clipping breakpoints of
//!   `beta -> theta^T clamp(x - beta theta) - p` from `beta = 0` and stops at
//!   the segment holding the root. The test `delta / zeta > t_k` is evaluated
//!   as `delta > zeta * t_k` so the only division is the final root.
//! * [`project_wasson_draper`] sorts the simplex target and finds the
//!   threshold index `rho` with `j * mu_j > S_j - 1`, keeping `j * mu_j`
//!   instead of dividing, then divides once for the threshold.
//!
//! Sorting is quicksort with the last element as pivot; its comparisons are
//! counted as low-complexity operations.

use crate::geometry::{box_excess_in, cut_search_in, ParityKind, Sign};
use crate::opcount::{Arith, Plain};

/// Where a coordinate's box projection landed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Region {
    Lower,
    Inside,
    Upper,
}

// Reads back the classification made while clamping; no new comparison.
#[inline]
fn region(u: f64) -> Region {
    if u == 1.0 {
        Region::Upper
    } else if u == 0.0 {
        Region::Lower
    } else {
        Region::Inside
    }
}

/// Ascending in-place quicksort, last element as pivot (Lomuto partition).
pub(crate) fn quicksort_in<A: Arith>(ctx: &mut A, a: &mut [f64]) {
    if a.len() <= 1 {
        return;
    }
    let last = a.len() - 1;
    let pivot = a[last];
    let mut store = 0;
    for j in 0..last {
        if ctx.lt(a[j], pivot) {
            a.swap(store, j);
            store += 1;
        }
    }
    a.swap(store, last);
    let (left, right) = a.split_at_mut(store);
    quicksort_in(ctx, left);
    quicksort_in(ctx, &mut right[1..]);
}

struct FrontEnd {
    theta: Vec<Sign>,
    u: Vec<f64>,
    excess: f64,
}

fn front_end<A: Arith>(ctx: &mut A, x: &[f64], kind: ParityKind) -> FrontEnd {
    assert!(!x.is_empty(), "projection input must be nonempty");
    let d = x.len();
    let mut theta = vec![Sign::Minus; d];
    let mut scratch = vec![0.0; d];
    let rhs = cut_search_in(ctx, x, kind, &mut theta, &mut scratch);
    let mut u = scratch;
    let excess = box_excess_in(ctx, x, &theta, rhs, &mut u);
    FrontEnd { theta, u, excess }
}

pub(crate) fn zhang_siegel_in<A: Arith>(ctx: &mut A, x: &[f64], kind: ParityKind) -> Vec<f64> {
    let FrontEnd { theta, u, excess } = front_end(ctx, x, kind);
    if excess <= 0.0 {
        return u;
    }

    // Coordinates clipped at the bound that beta moves them away from enter
    // the linear regime at beta = t; interior coordinates are linear from 0.
    let mut breakpoints = Vec::new();
    let mut zeta = 0usize;
    for ((&xi, &ui), &th) in x.iter().zip(&u).zip(&theta) {
        match (th, region(ui)) {
            (Sign::Plus, Region::Upper) => breakpoints.push(ctx.sub(xi, 1.0)),
            (Sign::Minus, Region::Lower) => breakpoints.push(ctx.neg(xi)),
            (_, Region::Inside) => zeta += 1,
            _ => {}
        }
    }
    quicksort_in(ctx, &mut breakpoints);

    let mut delta = excess;
    for &t in &breakpoints {
        if zeta > 0 {
            let scaled = ctx.mul(zeta as f64, t);
            if !ctx.gt(delta, scaled) {
                break;
            }
        }
        delta = ctx.add(delta, t);
        zeta += 1;
    }
    debug_assert!(zeta > 0);
    let beta = ctx.div(delta, zeta as f64);

    x.iter()
        .zip(&u)
        .zip(&theta)
        .map(|((&xi, &ui), &th)| match (th, region(ui)) {
            (Sign::Plus, Region::Lower) => 0.0,
            (Sign::Minus, Region::Upper) => 1.0,
            (Sign::Plus, Region::Upper) => {
                let w = ctx.sub(xi, beta);
                if ctx.gt(w, 1.0) {
                    1.0
                } else {
                    w.max(0.0)
                }
            }
            (Sign::Plus, Region::Inside) => ctx.sub(xi, beta).max(0.0),
            (Sign::Minus, _) => ctx.add(xi, beta).max(0.0),
        })
        .collect()
}

pub(crate) fn wasson_draper_in<A: Arith>(ctx: &mut A, x: &[f64], kind: ParityKind) -> Vec<f64> {
    let FrontEnd { theta, u, excess } = front_end(ctx, x, kind);
    if excess <= 0.0 {
        return u;
    }
    let d = x.len();

    // simplex target q = 1 - y with y the reflected input
    let q: Vec<f64> = x
        .iter()
        .zip(&theta)
        .map(|(&xi, &th)| match th {
            Sign::Plus => ctx.sub(1.0, xi),
            Sign::Minus => xi,
        })
        .collect();
    let mut mu = q.clone();
    quicksort_in(ctx, &mut mu);

    // rho = max { j : j mu_j > S_j - 1 } over the descending order; the
    // condition holds on a prefix, so the scan stops at the first failure
    let mut partial = 0.0;
    let mut rho = 0usize;
    let mut numerator = 0.0;
    for (j, &mj) in mu.iter().rev().enumerate() {
        let j = j + 1;
        partial = if j == 1 { mj } else { ctx.add(partial, mj) };
        let shifted = ctx.sub(partial, 1.0);
        let scaled = ctx.mul(j as f64, mj);
        if ctx.gt(scaled, shifted) {
            rho = j;
            numerator = shifted;
        } else {
            break;
        }
    }
    debug_assert!(rho >= 1 && rho <= d);
    let tau = ctx.div(numerator, rho as f64);

    q.iter()
        .zip(&theta)
        .map(|(&qi, &th)| {
            let r = ctx.sub(qi, tau).max(0.0);
            match th {
                Sign::Plus => ctx.sub(1.0, r),
                Sign::Minus => r,
            }
        })
        .collect()
}

/// Breakpoint-search projection onto the parity polytope.
pub fn project_zhang_siegel(x: &[f64], kind: ParityKind) -> Vec<f64> {
    zhang_siegel_in(&mut Plain, x, kind)
}

/// Simplex-reduction projection onto the parity polytope.
pub fn project_wasson_draper(x: &[f64], kind: ParityKind) -> Vec<f64> {
    wasson_draper_in(&mut Plain, x, kind)
}
