//! Dynamic operation counting.
//!
//! Every projection in this crate is written once, generic over an [`Arith`]
//! context. The [`Plain`] context compiles down to ordinary floating-point
//! code; [`OpCounters`] performs the identical arithmetic and tallies it, so
//! counted and uncounted runs produce bit-identical results.
//!
//! Counting policy:
//!
//! * divisions and multiplications are tallied separately;
//! * additions, subtractions, negations and comparisons between two general
//!   reals each count as one low-complexity operation;
//! * `a ± b` selected by a coefficient sign (`a + θ_i·b`) counts as one
//!   low-complexity operation;
//! * comparisons against zero, `max(x, 0)`, assignments and sign tests on a
//!   coefficient are free and are written as plain Rust, never routed through
//!   the context;
//! * comparisons against any other constant (`v > 1`, `x > 0.5`) are counted;
//! * integer bookkeeping (loop indices, set sizes, right-hand sides kept as
//!   integers, permutation swaps) is free.

use std::ops::{Add, AddAssign};

use crate::geometry::{ParityKind, Sign};
use crate::{baselines, fix};

/// One tallied operation class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    LowComplexity,
    Multiplication,
    Division,
}

/// Arithmetic context through which counted algorithms run.
pub trait Arith {
    fn tally(&mut self, op: Op);

    #[inline]
    fn add(&mut self, a: f64, b: f64) -> f64 {
        self.tally(Op::LowComplexity);
        a + b
    }

    #[inline]
    fn sub(&mut self, a: f64, b: f64) -> f64 {
        self.tally(Op::LowComplexity);
        a - b
    }

    #[inline]
    fn neg(&mut self, a: f64) -> f64 {
        self.tally(Op::LowComplexity);
        -a
    }

    /// `a + s·b` for a sign `s`, realised as a branch plus one add/subtract.
    #[inline]
    fn signed_add(&mut self, a: f64, s: Sign, b: f64) -> f64 {
        self.tally(Op::LowComplexity);
        match s {
            Sign::Plus => a + b,
            Sign::Minus => a - b,
        }
    }

    /// `s·b`; free for `s = +1`, a negation otherwise.
    #[inline]
    fn apply_sign(&mut self, s: Sign, b: f64) -> f64 {
        match s {
            Sign::Plus => b,
            Sign::Minus => self.neg(b),
        }
    }

    #[inline]
    fn mul(&mut self, a: f64, b: f64) -> f64 {
        self.tally(Op::Multiplication);
        a * b
    }

    #[inline]
    fn div(&mut self, a: f64, b: f64) -> f64 {
        self.tally(Op::Division);
        a / b
    }

    #[inline]
    fn gt(&mut self, a: f64, b: f64) -> bool {
        self.tally(Op::LowComplexity);
        a > b
    }

    #[inline]
    fn lt(&mut self, a: f64, b: f64) -> bool {
        self.tally(Op::LowComplexity);
        a < b
    }
}

/// Uncounted context.
#[derive(Debug, Default, Clone, Copy)]
pub struct Plain;

impl Arith for Plain {
    #[inline(always)]
    fn tally(&mut self, _op: Op) {}
}

/// Operation tallies for one counting session.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OpCounters {
    pub divisions: u64,
    pub multiplications: u64,
    pub low_complexity: u64,
}

impl OpCounters {
    pub fn new() -> Self {
        Self::default()
    }

    /// Low-complexity operations plus multiplications plus divisions.
    pub fn total(&self) -> u64 {
        self.divisions + self.multiplications + self.low_complexity
    }
}

impl Arith for OpCounters {
    #[inline]
    fn tally(&mut self, op: Op) {
        match op {
            Op::LowComplexity => self.low_complexity += 1,
            Op::Multiplication => self.multiplications += 1,
            Op::Division => self.divisions += 1,
        }
    }
}

impl Add for OpCounters {
    type Output = OpCounters;

    fn add(self, rhs: OpCounters) -> OpCounters {
        OpCounters {
            divisions: self.divisions + rhs.divisions,
            multiplications: self.multiplications + rhs.multiplications,
            low_complexity: self.low_complexity + rhs.low_complexity,
        }
    }
}

impl AddAssign for OpCounters {
    fn add_assign(&mut self, rhs: OpCounters) {
        *self = *self + rhs;
    }
}

impl std::iter::Sum for OpCounters {
    fn sum<I: Iterator<Item = OpCounters>>(iter: I) -> Self {
        iter.fold(OpCounters::default(), |acc, c| acc + c)
    }
}

/// The projections that can be run under the counting context.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Fix,
    ZhangSiegel,
    WassonDraper,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Fix, Algorithm::ZhangSiegel, Algorithm::WassonDraper];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Fix => "Fix",
            Algorithm::ZhangSiegel => "ZhangSiegel",
            Algorithm::WassonDraper => "WassonDraper",
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Unknown algorithm name.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown algorithm `{0}` (expected fix, zhang-siegel or wasson-draper)")]
pub struct UnknownAlgorithm(pub String);

impl std::str::FromStr for Algorithm {
    type Err = UnknownAlgorithm;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .map(|c| c.to_ascii_lowercase())
            .collect();
        match key.as_str() {
            "fix" => Ok(Algorithm::Fix),
            "zs" | "zhangsiegel" => Ok(Algorithm::ZhangSiegel),
            "wd" | "wassondraper" => Ok(Algorithm::WassonDraper),
            _ => Err(UnknownAlgorithm(s.to_string())),
        }
    }
}

/// Runs `algo` under a fresh counting session.
///
/// The returned projection is bit-identical to the uncounted entry point of
/// the same algorithm.
pub fn counted_projection(algo: Algorithm, x: &[f64], kind: ParityKind) -> (Vec<f64>, OpCounters) {
    let mut counters = OpCounters::new();
    let z = match algo {
        Algorithm::Fix => fix::project_counted(x, kind, &mut counters).z,
        Algorithm::ZhangSiegel => baselines::zhang_siegel_in(&mut counters, x, kind),
        Algorithm::WassonDraper => baselines::wasson_draper_in(&mut counters, x, kind),
    };
    (z, counters)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counters_tally_by_class() {
        let mut c = OpCounters::new();
        let a = Arith::add(&mut c, 1.0, 2.0);
        let b = c.signed_add(a, Sign::Minus, 0.5);
        let m = c.mul(b, 2.0);
        let q = c.div(m, 5.0);
        assert!(c.gt(q, 0.5));
        assert_eq!(c.apply_sign(Sign::Plus, 3.0), 3.0);
        assert_eq!(c.apply_sign(Sign::Minus, 3.0), -3.0);
        assert_eq!(
            c,
            OpCounters {
                divisions: 1,
                multiplications: 1,
                low_complexity: 4
            }
        );
        assert_eq!(c.total(), 6);
    }

    #[test]
    fn counters_merge_by_summation() {
        let a = OpCounters {
            divisions: 1,
            multiplications: 2,
            low_complexity: 3,
        };
        let total: OpCounters = [a, a, a].into_iter().sum();
        assert_eq!(total.low_complexity, 9);
        assert_eq!(total.multiplications, 6);
        assert_eq!(total.divisions, 3);
    }

    #[test]
    fn algorithm_names_parse() {
        assert_eq!("fix".parse::<Algorithm>().unwrap(), Algorithm::Fix);
        assert_eq!("Zhang-Siegel".parse::<Algorithm>().unwrap(), Algorithm::ZhangSiegel);
        assert_eq!("wd".parse::<Algorithm>().unwrap(), Algorithm::WassonDraper);
        assert!("heusdens".parse::<Algorithm>().is_err());
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
    }
}
