//! Monte-Carlo benchmarks of the projections.
//!
//! Inputs are drawn i.i.d. uniform on `[-a, a)` per component. Trial `t` at
//! dimension `d` gets its own `Xoshiro256PlusPlus` generator, seeded with
//! `SplitMix64` applied to `seed ^ (d << 40) ^ t`, so a trial's input does not
//! depend on which worker runs it. Workers return integer tallies that are
//! summed, which keeps every output byte-identical across worker counts.

use std::fmt::Write as _;
use std::ops::RangeInclusive;

use rand::{Rng, RngCore, SeedableRng};
use rand_xoshiro::{SplitMix64, Xoshiro256PlusPlus};
use thiserror::Error;

use crate::baselines::{wasson_draper_in, zhang_siegel_in};
use crate::fix::{FixWorkspace, Termination};
use crate::geometry::ParityKind;
use crate::opcount::{Algorithm, OpCounters};

/// Smallest and largest dimension a benchmark accepts.
pub const DEGREE_LIMITS: RangeInclusive<usize> = 2..=64;

/// Default number of trials per dimension.
pub const DEFAULT_TRIALS: u64 = 100_000;

/// CSV header shared by all benchmark tables.
pub const CSV_HEADER: &str = "d,algorithm,mean_low_ops,mean_mults,mean_divs,hard_case_fraction,mean_iterations";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BenchError {
    #[error("degrees {lo}..={hi} must lie within 2..=64 and be nonempty")]
    BadDegrees { lo: usize, hi: usize },
    #[error("input half-range must be positive and finite, got {0}")]
    BadRange(f64),
    #[error("trials must be at least 1")]
    NoTrials,
    #[error("no algorithm selected")]
    NoAlgorithms,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchSpec {
    pub algorithms: Vec<Algorithm>,
    pub degrees: RangeInclusive<usize>,
    /// `a` in `U[-a, a)`.
    pub half_range: f64,
    pub trials: u64,
    pub seed: u64,
}

impl Default for BenchSpec {
    fn default() -> Self {
        BenchSpec {
            algorithms: Algorithm::ALL.to_vec(),
            degrees: 2..=50,
            half_range: 10.0,
            trials: DEFAULT_TRIALS,
            seed: 0,
        }
    }
}

impl BenchSpec {
    pub fn validate(&self) -> Result<(), BenchError> {
        let (lo, hi) = (*self.degrees.start(), *self.degrees.end());
        if lo > hi || !DEGREE_LIMITS.contains(&lo) || !DEGREE_LIMITS.contains(&hi) {
            return Err(BenchError::BadDegrees { lo, hi });
        }
        if !(self.half_range > 0.0 && self.half_range.is_finite()) {
            return Err(BenchError::BadRange(self.half_range));
        }
        if self.trials == 0 {
            return Err(BenchError::NoTrials);
        }
        if self.algorithms.is_empty() {
            return Err(BenchError::NoAlgorithms);
        }
        Ok(())
    }
}

/// Generator for trial `trial` at dimension `d`.
pub fn trial_rng(seed: u64, d: usize, trial: u64) -> Xoshiro256PlusPlus {
    // hash the seed first so that nearby seeds do not just permute trials
    let base = SplitMix64::seed_from_u64(seed).next_u64();
    let mixed = SplitMix64::seed_from_u64(base ^ ((d as u64) << 40) ^ trial).next_u64();
    Xoshiro256PlusPlus::seed_from_u64(mixed)
}

/// The input vector of trial `trial` at dimension `d`.
pub fn trial_input(seed: u64, d: usize, trial: u64, half_range: f64) -> Vec<f64> {
    let mut rng = trial_rng(seed, d, trial);
    (0..d).map(|_| rng.random_range(-half_range..half_range)).collect()
}

/// Integer tallies for one (dimension, algorithm) cell.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CellTally {
    pub trials: u64,
    pub hard_cases: u64,
    pub ops: OpCounters,
    /// Hyperplane projections of the component-fixing loop, hard cases only.
    pub hard_iterations: u64,
}

impl CellTally {
    fn merge(&mut self, other: &CellTally) {
        self.trials += other.trials;
        self.hard_cases += other.hard_cases;
        self.ops += other.ops;
        self.hard_iterations += other.hard_iterations;
    }
}

/// One output row; `None` cells print empty.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub d: usize,
    pub algorithm: Algorithm,
    pub mean_low_ops: Option<f64>,
    pub mean_mults: Option<f64>,
    pub mean_divs: Option<f64>,
    pub hard_case_fraction: Option<f64>,
    pub mean_iterations: Option<f64>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Ops,
    FixOnly,
}

// Tallies indexed [degree][algorithm] for trials in `chunk`.
fn run_chunk(spec: &BenchSpec, algos: &[Algorithm], mode: Mode, chunk: std::ops::Range<u64>) -> Vec<Vec<CellTally>> {
    let kind = ParityKind::Even;
    let mut ws = FixWorkspace::new();
    let mut out = Vec::new();
    let mut tallies = Vec::new();
    for d in spec.degrees.clone() {
        let mut row = vec![CellTally::default(); algos.len()];
        out.clear();
        out.resize(d, 0.0);
        for t in chunk.clone() {
            let x = trial_input(spec.seed, d, t, spec.half_range);
            // the hard/easy split is decided by the shared front end
            let trace = ws.project_into(&x, kind, &mut out);
            let hard = trace.terminated_by != Termination::BoxFeasible;
            let iterations = trace.iterations as u64;
            for (cell, &algo) in row.iter_mut().zip(algos) {
                cell.trials += 1;
                if hard {
                    cell.hard_cases += 1;
                    cell.hard_iterations += iterations;
                }
                if mode == Mode::Ops {
                    let mut c = OpCounters::new();
                    match algo {
                        Algorithm::Fix => {
                            ws.project_counted_into(&x, kind, &mut out, &mut c);
                        }
                        Algorithm::ZhangSiegel => {
                            zhang_siegel_in(&mut c, &x, kind);
                        }
                        Algorithm::WassonDraper => {
                            wasson_draper_in(&mut c, &x, kind);
                        }
                    }
                    cell.ops += c;
                }
            }
        }
        tallies.push(row);
    }
    tallies
}

fn run_tallies(spec: &BenchSpec, algos: &[Algorithm], mode: Mode, workers: usize) -> Vec<Vec<CellTally>> {
    let workers = workers.clamp(1, spec.trials.min(1024) as usize);
    let per = spec.trials.div_ceil(workers as u64);
    let chunks: Vec<std::ops::Range<u64>> = (0..workers as u64)
        .map(|w| (w * per).min(spec.trials)..((w + 1) * per).min(spec.trials))
        .collect();
    let parts: Vec<Vec<Vec<CellTally>>> = if workers == 1 {
        vec![run_chunk(spec, algos, mode, 0..spec.trials)]
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = chunks
                .into_iter()
                .map(|c| s.spawn(move || run_chunk(spec, algos, mode, c)))
                .collect();
            handles.into_iter().map(|h| h.join().expect("bench worker panicked")).collect()
        })
    };
    let mut total = parts[0].clone();
    for part in &parts[1..] {
        for (trow, prow) in total.iter_mut().zip(part) {
            for (t, p) in trow.iter_mut().zip(prow) {
                t.merge(p);
            }
        }
    }
    total
}

fn ratio(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

/// Mean operation counts per (d, algorithm), plus the hard-case fraction and,
/// for the component-fixing rows, the mean hard-case iteration count.
pub fn run_op_bench(spec: &BenchSpec, workers: usize) -> Result<Vec<BenchRow>, BenchError> {
    spec.validate()?;
    let tallies = run_tallies(spec, &spec.algorithms, Mode::Ops, workers);
    Ok(spec
        .degrees
        .clone()
        .zip(tallies)
        .flat_map(|(d, row)| {
            spec.algorithms.iter().zip(row).map(move |(&algorithm, c)| BenchRow {
                d,
                algorithm,
                mean_low_ops: ratio(c.ops.low_complexity, c.trials),
                mean_mults: ratio(c.ops.multiplications, c.trials),
                mean_divs: ratio(c.ops.divisions, c.trials),
                hard_case_fraction: ratio(c.hard_cases, c.trials),
                mean_iterations: if algorithm == Algorithm::Fix {
                    ratio(c.hard_iterations, c.hard_cases)
                } else {
                    None
                },
            })
        })
        .collect())
}

fn fix_rows(spec: &BenchSpec, workers: usize, with_iterations: bool) -> Result<Vec<BenchRow>, BenchError> {
    let spec = BenchSpec {
        algorithms: vec![Algorithm::Fix],
        ..spec.clone()
    };
    spec.validate()?;
    let tallies = run_tallies(&spec, &spec.algorithms, Mode::FixOnly, workers);
    Ok(spec
        .degrees
        .clone()
        .zip(tallies)
        .map(|(d, row)| {
            let c = row[0];
            BenchRow {
                d,
                algorithm: Algorithm::Fix,
                mean_low_ops: None,
                mean_mults: None,
                mean_divs: None,
                hard_case_fraction: ratio(c.hard_cases, c.trials),
                mean_iterations: if with_iterations {
                    ratio(c.hard_iterations, c.hard_cases)
                } else {
                    None
                },
            }
        })
        .collect())
}

/// Empirical probability that the box projection leaves the even polytope.
/// The algorithm selection of `spec` is ignored.
pub fn run_probability(spec: &BenchSpec, workers: usize) -> Result<Vec<BenchRow>, BenchError> {
    fix_rows(spec, workers, false)
}

/// Mean number of hyperplane projections of the component-fixing loop,
/// conditioned on the hard case. The algorithm selection of `spec` is ignored.
pub fn run_iteration_stats(spec: &BenchSpec, workers: usize) -> Result<Vec<BenchRow>, BenchError> {
    fix_rows(spec, workers, true)
}

/// `%g`-style rendering with 6 significant digits.
pub fn format_sig6(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{:.5e}", v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent");
    let strip = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if (-4..6).contains(&exp) {
        strip(&format!("{:.*}", (5 - exp) as usize, v))
    } else {
        format!("{}e{}{:02}", strip(mantissa), if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

/// Renders rows as CSV with [`CSV_HEADER`].
pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut s = String::with_capacity(64 * (rows.len() + 1));
    s.push_str(CSV_HEADER);
    s.push('\n');
    let cell = |v: Option<f64>| v.map(format_sig6).unwrap_or_default();
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            r.d,
            r.algorithm,
            cell(r.mean_low_ops),
            cell(r.mean_mults),
            cell(r.mean_divs),
            cell(r.hard_case_fraction),
            cell(r.mean_iterations)
        );
    }
    s
}

/// Mean of all counted operations of a row.
pub fn mean_total_ops(row: &BenchRow) -> Option<f64> {
    Some(row.mean_low_ops? + row.mean_mults? + row.mean_divs?)
}

/// Per dimension, `1 - fix / best_baseline` for mean total operations, where
/// `best_baseline` is the cheaper of the other algorithms present.
pub fn savings_vs_best_baseline(rows: &[BenchRow]) -> Vec<(usize, f64)> {
    let mut out = Vec::new();
    let mut ds: Vec<usize> = rows.iter().map(|r| r.d).collect();
    ds.dedup();
    for d in ds {
        let at_d = rows.iter().filter(|r| r.d == d);
        let fix = at_d.clone().find(|r| r.algorithm == Algorithm::Fix).and_then(mean_total_ops);
        let best = at_d
            .filter(|r| r.algorithm != Algorithm::Fix)
            .filter_map(mean_total_ops)
            .min_by(f64::total_cmp);
        if let (Some(fix), Some(best)) = (fix, best) {
            out.push((d, 1.0 - fix / best));
        }
    }
    out
}

/// Which column an SVG plot shows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotColumn {
    LowOps,
    HardCaseFraction,
    Iterations,
}

/// A minimal SVG line chart of one column against `d`, one polyline per
/// algorithm.
pub fn to_svg(rows: &[BenchRow], column: PlotColumn, title: &str) -> String {
    let value = |r: &BenchRow| match column {
        PlotColumn::LowOps => r.mean_low_ops,
        PlotColumn::HardCaseFraction => r.hard_case_fraction,
        PlotColumn::Iterations => r.mean_iterations,
    };
    let points: Vec<(Algorithm, f64, f64)> = rows
        .iter()
        .filter_map(|r| value(r).map(|v| (r.algorithm, r.d as f64, v)))
        .collect();
    let (w, h, m) = (640.0, 400.0, 50.0);
    let (xmin, xmax) = points.iter().fold((f64::MAX, f64::MIN), |(a, b), p| (a.min(p.1), b.max(p.1)));
    let ymax = points.iter().fold(0.0f64, |a, p| a.max(p.2));
    let sx = |x: f64| m + (x - xmin) / (xmax - xmin).max(1.0) * (w - 2.0 * m);
    let sy = |y: f64| h - m - y / if ymax > 0.0 { ymax } else { 1.0 } * (h - 2.0 * m);
    let colors = ["#1f77b4", "#d62728", "#2ca02c"];

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#);
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="24" font-size="16" text-anchor="middle">{}</text>"#, w / 2.0, escape(title));
    let _ = writeln!(
        s,
        r#"<path d="M{m} {m} V{} H{}" fill="none" stroke="black"/>"#,
        h - m,
        w - m
    );
    let _ = writeln!(s, r#"<text x="{m}" y="{}" font-size="12">{}</text>"#, h - m + 18.0, xmin);
    let _ = writeln!(s, r#"<text x="{}" y="{}" font-size="12" text-anchor="end">{}</text>"#, w - m, h - m + 18.0, xmax);
    let _ = writeln!(s, r#"<text x="{}" y="{}" font-size="12" text-anchor="end">{}</text>"#, m - 4.0, m + 4.0, format_sig6(ymax));
    for (k, algo) in Algorithm::ALL.iter().enumerate() {
        let pts: Vec<String> = points
            .iter()
            .filter(|p| p.0 == *algo)
            .map(|p| format!("{:.2},{:.2}", sx(p.1), sy(p.2)))
            .collect();
        if pts.is_empty() {
            continue;
        }
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{}" stroke-width="2" points="{}"/>"#,
            colors[k],
            pts.join(" ")
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-size="12" fill="{}">{}</text>"#,
            w - m - 110.0,
            m + 16.0 * (k as f64 + 1.0),
            colors[k],
            algo
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig6_formatting() {
        assert_eq!(format_sig6(0.0), "0");
        assert_eq!(format_sig6(1.0), "1");
        assert_eq!(format_sig6(0.25), "0.25");
        assert_eq!(format_sig6(123.456789), "123.457");
        assert_eq!(format_sig6(1234567.0), "1.23457e+06");
        assert_eq!(format_sig6(0.000012345678), "1.23457e-05");
        assert_eq!(format_sig6(0.00012345678), "0.000123457");
        assert_eq!(format_sig6(-2.5), "-2.5");
        assert_eq!(format_sig6(99999.95), "99999.9");
        assert_eq!(format_sig6(999999.5), "1e+06");
    }

    #[test]
    fn spec_validation() {
        let ok = BenchSpec::default();
        assert!(ok.validate().is_ok());
        let bad = BenchSpec { degrees: 1..=5, ..ok.clone() };
        assert_eq!(bad.validate(), Err(BenchError::BadDegrees { lo: 1, hi: 5 }));
        let bad = BenchSpec { degrees: 2..=65, ..ok.clone() };
        assert!(bad.validate().is_err());
        let bad = BenchSpec { trials: 0, ..ok.clone() };
        assert_eq!(bad.validate(), Err(BenchError::NoTrials));
        let bad = BenchSpec { half_range: 0.0, ..ok };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn inputs_are_reproducible_and_in_range() {
        let a = trial_input(7, 10, 3, 5.0);
        assert_eq!(a, trial_input(7, 10, 3, 5.0));
        assert_ne!(a, trial_input(7, 10, 4, 5.0));
        assert_ne!(a[..9], trial_input(7, 9, 3, 5.0)[..]);
        assert!(a.iter().all(|v| (-5.0..5.0).contains(v)));
    }

    #[test]
    fn csv_shape() {
        let spec = BenchSpec {
            degrees: 2..=3,
            trials: 50,
            ..Default::default()
        };
        let csv = to_csv(&run_op_bench(&spec, 1).unwrap());
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 1 + 2 * 3);
        assert!(lines[1].starts_with("2,Fix,"));
        assert!(lines[2].starts_with("2,ZhangSiegel,") && lines[2].ends_with(','));
        assert!(lines.iter().skip(1).all(|l| l.split(',').count() == 7));
    }

    #[test]
    fn svg_is_well_formed() {
        let spec = BenchSpec {
            degrees: 2..=4,
            trials: 20,
            ..Default::default()
        };
        let svg = to_svg(&run_op_bench(&spec, 1).unwrap(), PlotColumn::LowOps, "ops <a>");
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<polyline").count(), 3);
        assert!(svg.contains("ops &lt;a&gt;"));
    }
}
