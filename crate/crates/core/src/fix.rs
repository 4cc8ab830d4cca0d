//! Sorting-free projection onto the even and odd parity polytopes.
//!
//! When the box projection of `x` violates the cut returned by the cut
//! search, the projection lies on the face `{w in [0,1]^d : theta^T w = p}`.
//! The algorithm projects the live coordinates onto the hyperplane
//! `theta^T w = p` and pins every coordinate with `v_i > 1, theta_i = +1`
//! to 1 and every coordinate with `v_i < 0, theta_i = -1` to 0. What remains
//! is a projection onto a parity polytope of smaller dimension whose cut is
//! the old `theta` with the pinned entries removed and `p` lowered by the
//! number of ones pinned, so no further cut search is needed. The loop stops
//! when a hyperplane projection pins nothing (it then lies in the box) or
//! when a single coordinate is left.
//!
//! Pinned coordinates are swapped to the front of the working buffers and
//! the live window is the suffix `f..d`; a permutation records the swaps and
//! undoes them on output.

use crate::geometry::{box_excess_in, cut_search_in, ForbiddenSetInequality, ParityKind, Sign};
use crate::opcount::{Arith, OpCounters, Plain};

/// How a projection call finished.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// The box projection already satisfied the cut.
    BoxFeasible,
    /// A hyperplane projection fell inside the box.
    InteriorOfFace,
    /// A single live coordinate was left and set from its coefficient.
    DimensionOne,
}

/// Per-call statistics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionTrace {
    /// Hyperplane projections performed.
    pub iterations: usize,
    /// Number of coordinates pinned by each pass that pinned any.
    pub fixes_per_iteration: Vec<usize>,
    /// `permutation[k]` is the original index stored at working slot `k`.
    pub permutation: Vec<usize>,
    pub terminated_by: Termination,
}

impl ProjectionTrace {
    fn reset(&mut self, d: usize) {
        self.iterations = 0;
        self.fixes_per_iteration.clear();
        self.permutation.clear();
        self.permutation.extend(0..d);
        self.terminated_by = Termination::BoxFeasible;
    }

    /// Coordinates pinned by the hyperplane passes.
    pub fn total_fixed(&self) -> usize {
        self.fixes_per_iteration.iter().sum()
    }
}

impl Default for ProjectionTrace {
    fn default() -> Self {
        ProjectionTrace {
            iterations: 0,
            fixes_per_iteration: Vec::new(),
            permutation: Vec::new(),
            terminated_by: Termination::BoxFeasible,
        }
    }
}

/// A projection together with its trace.
#[derive(Debug, Clone, PartialEq)]
pub struct FixProjection {
    pub z: Vec<f64>,
    pub trace: ProjectionTrace,
}

/// The live part of the working buffers.
#[derive(Debug, Clone, Copy)]
pub struct Window<'a> {
    /// Original coordinate of every live slot.
    pub indices: &'a [usize],
    pub x: &'a [f64],
    pub theta: &'a [Sign],
    pub rhs: i64,
}

/// Hooks into the projection loop. All methods default to no-ops.
pub trait FixObserver {
    /// After the initial cut search and box test.
    fn start(&mut self, _x: &[f64], _kind: ParityKind, _theta: &[Sign], _rhs: i64, _box_feasible: bool) {}

    /// After a hyperplane projection; `v` is aligned with the window.
    fn hyperplane(&mut self, _iteration: usize, _window: Window<'_>, _v: &[f64]) {}

    /// A coordinate (original index) was pinned.
    fn fixed(&mut self, _index: usize, _value: f64) {}

    /// End of a hyperplane pass that pinned `fixed` coordinates.
    fn pass_end(&mut self, _fixed: usize) {}

    /// A single live coordinate remains.
    fn dimension_one(&mut self, _window: Window<'_>) {}
}

impl FixObserver for () {}

/// One hyperplane pass as seen by [`RecordingObserver`].
#[derive(Debug, Clone, PartialEq)]
pub struct PassRecord {
    pub indices: Vec<usize>,
    pub v: Vec<f64>,
    pub fixed: Vec<(usize, f64)>,
}

/// Keeps every intermediate hyperplane point and fix.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RecordingObserver {
    pub passes: Vec<PassRecord>,
    /// Set when the loop ended on a single coordinate: `(index, value)`.
    pub last_coordinate: Option<(usize, f64)>,
    in_dimension_one: bool,
}

impl FixObserver for RecordingObserver {
    fn hyperplane(&mut self, _iteration: usize, window: Window<'_>, v: &[f64]) {
        self.passes.push(PassRecord {
            indices: window.indices.to_vec(),
            v: v.to_vec(),
            fixed: Vec::new(),
        });
    }

    fn fixed(&mut self, index: usize, value: f64) {
        if self.in_dimension_one {
            self.last_coordinate = Some((index, value));
        } else if let Some(pass) = self.passes.last_mut() {
            pass.fixed.push((index, value));
        }
    }

    fn dimension_one(&mut self, _window: Window<'_>) {
        self.in_dimension_one = true;
    }
}

/// Reusable buffers for allocation-free projections.
///
/// A workspace must not be shared between simultaneous calls; give every
/// thread its own.
#[derive(Debug, Clone, Default)]
pub struct FixWorkspace {
    x: Vec<f64>,
    theta: Vec<Sign>,
    v: Vec<f64>,
    z: Vec<f64>,
    trace: ProjectionTrace,
}

impl FixWorkspace {
    pub fn new() -> Self {
        Self::default()
    }

    /// Projects `x` into `out` and returns the trace of the call.
    ///
    /// # Panics
    ///
    /// If `x` is empty or `out` has a different length.
    pub fn project_into(&mut self, x: &[f64], kind: ParityKind, out: &mut [f64]) -> &ProjectionTrace {
        self.run(&mut Plain, &mut (), x, kind, out);
        &self.trace
    }

    /// [`FixWorkspace::project_into`] under a counting context.
    pub fn project_counted_into(
        &mut self,
        x: &[f64],
        kind: ParityKind,
        out: &mut [f64],
        counters: &mut OpCounters,
    ) -> &ProjectionTrace {
        self.run(counters, &mut (), x, kind, out);
        &self.trace
    }

    /// [`FixWorkspace::project_into`] reporting to `observer`.
    pub fn project_observed_into<O: FixObserver>(
        &mut self,
        x: &[f64],
        kind: ParityKind,
        out: &mut [f64],
        observer: &mut O,
    ) -> &ProjectionTrace {
        self.run(&mut Plain, observer, x, kind, out);
        &self.trace
    }

    pub fn trace(&self) -> &ProjectionTrace {
        &self.trace
    }

    fn run<A: Arith, O: FixObserver>(&mut self, ctx: &mut A, obs: &mut O, x: &[f64], kind: ParityKind, out: &mut [f64]) {
        let d = x.len();
        assert!(d >= 1, "projection input must be nonempty");
        assert_eq!(out.len(), d, "output length must match input length");
        self.theta.resize(d, Sign::Minus);
        self.v.resize(d, 0.0);
        self.z.resize(d, 0.0);
        self.trace.reset(d);

        let theta = &mut self.theta[..];
        let v = &mut self.v[..];
        let mut rhs = cut_search_in(ctx, x, kind, theta, v);
        let excess = box_excess_in(ctx, x, theta, rhs, out);
        obs.start(x, kind, theta, rhs, excess <= 0.0);
        if excess <= 0.0 {
            return;
        }

        self.x.clear();
        self.x.extend_from_slice(x);
        let xs = &mut self.x[..];
        let z = &mut self.z[..];
        let trace = &mut self.trace;
        let q = &mut trace.permutation[..];
        let mut f = 0;
        loop {
            let live = d - f;
            debug_assert!(live >= 1, "live dimension reached zero");
            if live == 1 {
                obs.dimension_one(Window {
                    indices: &q[f..],
                    x: &xs[f..],
                    theta: &theta[f..],
                    rhs,
                });
                // P_1,even = {0} has the cut w <= 0, P_1,odd = {1} has -w <= -1
                let value = if theta[f].is_plus() { 0.0 } else { 1.0 };
                z[f] = value;
                obs.fixed(q[f], value);
                trace.terminated_by = Termination::DimensionOne;
                break;
            }

            // v = x - ((theta^T x - p) / l) theta on the live window
            // -p is integer bookkeeping, so seeding the sum with it is free
            let mut acc = -(rhs as f64);
            for (&xi, &th) in xs[f..].iter().zip(&theta[f..]) {
                acc = ctx.signed_add(acc, th, xi);
            }
            let step = ctx.div(acc, live as f64);
            for ((vi, &xi), &th) in v[f..].iter_mut().zip(&xs[f..]).zip(&theta[f..]) {
                *vi = ctx.signed_add(xi, th.flip(), step);
            }
            trace.iterations += 1;
            obs.hyperplane(
                trace.iterations,
                Window {
                    indices: &q[f..],
                    x: &xs[f..],
                    theta: &theta[f..],
                    rhs,
                },
                &v[f..],
            );

            let first = f;
            for i in first..d {
                // only v_i > 1 can pin a +1 coordinate and only v_i < 0 a -1
                // coordinate, so the sign picks the single test to run
                let pinned = match theta[i] {
                    Sign::Plus => ctx.gt(v[i], 1.0).then_some(1.0),
                    Sign::Minus => (v[i] < 0.0).then_some(0.0),
                };
                if let Some(value) = pinned {
                    // slot f was already visited, so moving it to i is safe;
                    // the pinned coordinate's x and theta are no longer needed
                    q.swap(f, i);
                    xs[i] = xs[f];
                    theta[i] = theta[f];
                    z[f] = value;
                    if value == 1.0 {
                        rhs -= 1;
                    }
                    obs.fixed(q[f], value);
                    f += 1;
                }
            }
            obs.pass_end(f - first);
            if f == first {
                z[first..].copy_from_slice(&v[first..]);
                trace.terminated_by = Termination::InteriorOfFace;
                break;
            }
            trace.fixes_per_iteration.push(f - first);
        }

        for (&orig, &value) in q.iter().zip(z.iter()) {
            out[orig] = value;
        }
    }
}

/// Euclidean projection of `x` onto the parity polytope of the given kind.
///
/// # Panics
///
/// If `x` is empty.
pub fn project(x: &[f64], kind: ParityKind) -> FixProjection {
    project_observed(x, kind, &mut ())
}

/// [`project`] reporting every pass to `observer`.
pub fn project_observed<O: FixObserver>(x: &[f64], kind: ParityKind, observer: &mut O) -> FixProjection {
    let mut ws = FixWorkspace::new();
    let mut z = vec![0.0; x.len()];
    ws.run(&mut Plain, observer, x, kind, &mut z);
    FixProjection { z, trace: ws.trace }
}

/// [`project`] under a counting context.
pub fn project_counted(x: &[f64], kind: ParityKind, counters: &mut OpCounters) -> FixProjection {
    let mut ws = FixWorkspace::new();
    let mut z = vec![0.0; x.len()];
    ws.run(counters, &mut (), x, kind, &mut z);
    FixProjection { z, trace: ws.trace }
}

/// Orthogonal projection of `x` onto the hyperplane `theta^T w = rhs`.
pub fn project_hyperplane(x: &[f64], ineq: &ForbiddenSetInequality) -> Vec<f64> {
    assert_eq!(x.len(), ineq.dim(), "dimension mismatch");
    let step = ineq.excess(x) / x.len() as f64;
    x.iter()
        .zip(ineq.theta())
        .map(|(&xi, th)| match th {
            Sign::Plus => xi - step,
            Sign::Minus => xi + step,
        })
        .collect()
}
