//! Parity polytopes, forbidden-set inequalities and the cut search.
//!
//! The even parity polytope is the convex hull of the binary vectors of
//! length `d` with an even number of ones; the odd parity polytope uses the
//! odd-weight vectors instead. Both are described by the unit box together
//! with the forbidden-set inequalities
//!
//! ```text
//! sum_{i in V} w_i - sum_{i not in V} w_i <= |V| - 1
//! ```
//!
//! for every `V` of odd size (even polytope) or even size (odd polytope). A
//! point of the box violates at most one of them, and the cut search finds
//! that candidate in linear time.

use std::ops::Deref;

use thiserror::Error;

use crate::opcount::{Arith, Plain};

/// Largest dimension accepted by [`MembershipMode::ExhaustiveSmallD`].
pub const EXHAUSTIVE_MAX_DIM: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("vector must have at least one component")]
    Empty,
    #[error("component {index} is not finite")]
    NonFinite { index: usize },
    #[error("dimension {d} exceeds the exhaustive membership limit of {max}")]
    DimensionTooLarge { d: usize, max: usize },
}

/// A nonempty vector of finite reals.
#[derive(Debug, Clone, PartialEq)]
pub struct RealVec(Vec<f64>);

impl RealVec {
    pub fn new(values: Vec<f64>) -> Result<Self, GeometryError> {
        if values.is_empty() {
            return Err(GeometryError::Empty);
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(GeometryError::NonFinite { index });
        }
        Ok(RealVec(values))
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl TryFrom<Vec<f64>> for RealVec {
    type Error = GeometryError;

    fn try_from(values: Vec<f64>) -> Result<Self, Self::Error> {
        RealVec::new(values)
    }
}

impl Deref for RealVec {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// Which parity polytope a projection targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParityKind {
    Even,
    Odd,
}

impl ParityKind {
    /// The polytope of the remaining coordinates after one coordinate has
    /// been pinned to 1.
    pub fn flipped(self) -> Self {
        match self {
            ParityKind::Even => ParityKind::Odd,
            ParityKind::Odd => ParityKind::Even,
        }
    }

    /// Whether a vertex of Hamming weight `weight` belongs to this polytope.
    pub fn admits_weight(self, weight: usize) -> bool {
        match self {
            ParityKind::Even => weight.is_multiple_of(2),
            ParityKind::Odd => weight % 2 == 1,
        }
    }

    /// Whether a forbidden set of size `size` belongs to this polytope's
    /// description (odd sets for the even polytope, even sets for the odd one).
    pub fn admits_forbidden_set(self, size: usize) -> bool {
        !self.admits_weight(size)
    }
}

/// A coefficient of a forbidden-set inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    #[inline]
    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    #[inline]
    pub fn is_plus(self) -> bool {
        self == Sign::Plus
    }
}

/// `theta^T w <= rhs` with `theta` in `{+1, -1}^d` and
/// `rhs = |{i : theta_i = +1}| - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ForbiddenSetInequality {
    theta: Vec<Sign>,
    rhs: i64,
}

impl ForbiddenSetInequality {
    /// Builds the inequality for the forbidden set `{i : theta_i = +1}`.
    pub fn from_theta(theta: Vec<Sign>) -> Self {
        let rhs = theta.iter().filter(|s| s.is_plus()).count() as i64 - 1;
        ForbiddenSetInequality { theta, rhs }
    }

    pub fn theta(&self) -> &[Sign] {
        &self.theta
    }

    pub fn rhs(&self) -> i64 {
        self.rhs
    }

    pub fn dim(&self) -> usize {
        self.theta.len()
    }

    /// Size of the forbidden set.
    pub fn set_size(&self) -> usize {
        (self.rhs + 1) as usize
    }

    /// The parity polytope whose description contains this inequality.
    pub fn kind(&self) -> ParityKind {
        if self.set_size() % 2 == 1 {
            ParityKind::Even
        } else {
            ParityKind::Odd
        }
    }

    /// `theta^T w`.
    pub fn lhs(&self, w: &[f64]) -> f64 {
        assert_eq!(w.len(), self.theta.len(), "dimension mismatch");
        self.theta
            .iter()
            .zip(w)
            .fold(0.0, |acc, (s, &wi)| match s {
                Sign::Plus => acc + wi,
                Sign::Minus => acc - wi,
            })
    }

    /// `theta^T w - rhs`; positive when `w` violates the inequality.
    pub fn excess(&self, w: &[f64]) -> f64 {
        self.lhs(w) - self.rhs as f64
    }
}

/// Componentwise projection onto `[0, 1]^d`.
pub fn clamp_unit_box(x: &[f64]) -> Vec<f64> {
    x.iter().map(|&v| v.clamp(0.0, 1.0)).collect()
}

/// Returns the only forbidden-set inequality of the `kind` polytope that
/// the box projection of `x` can violate.
///
/// `x` need not lie in the box: thresholding at 1/2 gives the same signs for
/// `x` and for its clamp. Components equal to 1/2 get a negative sign, and
/// ties in the distance to 1/2 go to the lowest index.
pub fn cut_search(x: &[f64], kind: ParityKind) -> ForbiddenSetInequality {
    let d = x.len();
    let mut theta = vec![Sign::Minus; d];
    let mut offset = vec![0.0; d];
    let rhs = cut_search_in(&mut Plain, x, kind, &mut theta, &mut offset);
    ForbiddenSetInequality { theta, rhs }
}

/// Cut search writing `theta` in place; `offset` receives `x_i - 1/2`.
///
/// One counted subtraction per component for the threshold test, and one
/// counted operation per candidate when the parity has to be repaired.
pub(crate) fn cut_search_in<A: Arith>(
    ctx: &mut A,
    x: &[f64],
    kind: ParityKind,
    theta: &mut [Sign],
    offset: &mut [f64],
) -> i64 {
    debug_assert!(!x.is_empty());
    debug_assert_eq!(theta.len(), x.len());
    let mut positives = 0usize;
    for ((&xi, th), off) in x.iter().zip(theta.iter_mut()).zip(offset.iter_mut()) {
        let t = ctx.sub(xi, 0.5);
        *off = t;
        *th = if t > 0.0 {
            positives += 1;
            Sign::Plus
        } else {
            Sign::Minus
        };
    }
    if !kind.admits_forbidden_set(positives) {
        // argmin_i |x_i - 1/2|; |t_i| = theta_i * t_i
        let mut best = 0;
        let mut best_dist = ctx.apply_sign(theta[0], offset[0]);
        for i in 1..x.len() {
            if ctx.signed_add(best_dist, theta[i].flip(), offset[i]) > 0.0 {
                best = i;
                best_dist = ctx.apply_sign(theta[i], offset[i]);
            }
        }
        theta[best] = theta[best].flip();
        if theta[best].is_plus() {
            positives += 1;
        } else {
            positives -= 1;
        }
    }
    positives as i64 - 1
}

/// Clamps `x` into `u` and returns `theta^T u - rhs`.
///
/// This is the common easy-case test of every projection: the box
/// projection is the answer iff the returned excess is not positive.
pub(crate) fn box_excess_in<A: Arith>(ctx: &mut A, x: &[f64], theta: &[Sign], rhs: i64, u: &mut [f64]) -> f64 {
    // -p is an integer; loading it is an assignment, not arithmetic
    let mut acc = -(rhs as f64);
    for ((&xi, &th), ui) in x.iter().zip(theta).zip(u.iter_mut()) {
        if ctx.gt(xi, 1.0) {
            *ui = 1.0;
            acc = ctx.signed_add(acc, th, 1.0);
        } else if xi < 0.0 {
            *ui = 0.0;
        } else {
            *ui = xi;
            acc = ctx.signed_add(acc, th, xi);
        }
    }
    acc
}

/// How [`is_member`] decides membership.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MembershipMode {
    /// Check only the inequality returned by [`cut_search`].
    FastSingleCut,
    /// Check all `2^(d-1)` forbidden-set inequalities.
    ExhaustiveSmallD,
}

/// Whether `x` lies in the parity polytope of the given kind.
///
/// `x` is expected to lie in the unit box; points outside it are reported
/// as non-members.
pub fn is_member(x: &[f64], kind: ParityKind, mode: MembershipMode) -> Result<bool, GeometryError> {
    is_member_with_tolerance(x, kind, mode, 0.0)
}

/// [`is_member`] with every inequality relaxed by `tol`.
pub fn is_member_with_tolerance(
    x: &[f64],
    kind: ParityKind,
    mode: MembershipMode,
    tol: f64,
) -> Result<bool, GeometryError> {
    if x.is_empty() {
        return Err(GeometryError::Empty);
    }
    if mode == MembershipMode::ExhaustiveSmallD && x.len() > EXHAUSTIVE_MAX_DIM {
        return Err(GeometryError::DimensionTooLarge {
            d: x.len(),
            max: EXHAUSTIVE_MAX_DIM,
        });
    }
    if x.iter().any(|&v| !(-tol..=1.0 + tol).contains(&v)) {
        return Ok(false);
    }
    Ok(match mode {
        MembershipMode::FastSingleCut => cut_search(x, kind).excess(x) <= tol,
        MembershipMode::ExhaustiveSmallD => exhaustive_max_excess(x, kind) <= tol,
    })
}

/// Largest `theta^T x - rhs` over every forbidden set of the polytope,
/// walking the subsets in Gray-code order.
fn exhaustive_max_excess(x: &[f64], kind: ParityKind) -> f64 {
    let d = x.len();
    // V = {} : -sum(x) - (0 - 1)
    let mut value = 1.0 - x.iter().sum::<f64>();
    let mut size = 0usize;
    let mut members = 0u32;
    let mut best = if kind.admits_forbidden_set(0) {
        value
    } else {
        f64::NEG_INFINITY
    };
    for step in 1u32..(1u32 << d) {
        let bit = step.trailing_zeros() as usize;
        let delta = 2.0 * x[bit] - 1.0;
        if members & (1 << bit) == 0 {
            members |= 1 << bit;
            size += 1;
            value += delta;
        } else {
            members &= !(1 << bit);
            size -= 1;
            value -= delta;
        }
        if kind.admits_forbidden_set(size) && value > best {
            best = value;
        }
    }
    best
}
