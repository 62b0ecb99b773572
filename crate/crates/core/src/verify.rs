//! Numerical verification: axiom grids, left-continuity probes, quotient
//! recovery by sampling, closed-form reference operations, and pointwise
//! comparison of two operations.
//!
//! Grids are `k/(n-1)` points augmented with every class boundary of the
//! checked construction plus `±2⁻³⁰` probes around each boundary; piecewise
//! definitions concentrate their defects there.

use std::fmt;
use std::str::FromStr;

use crate::finite::{check_axioms, FiniteTomonoid, TomonoidError};
use crate::partition::IntervalPartition;

/// A binary operation on `[0, 1]` that can report its own break points.
pub trait Tnorm {
    fn apply(&self, a: f64, b: f64) -> f64;

    /// Internal boundaries worth probing; empty when there are none.
    fn boundaries(&self) -> Vec<f64> {
        Vec::new()
    }
}

impl<F: Fn(f64, f64) -> f64> Tnorm for F {
    fn apply(&self, a: f64, b: f64) -> f64 {
        self(a, b)
    }
}

/// Maximum deviation seen for one checked property, with a witness that
/// reproduces it.
#[derive(Debug, Clone, PartialEq)]
pub struct GridReport {
    pub check: String,
    pub max_deviation: f64,
    pub witness: Vec<f64>,
    pub samples: usize,
}

impl GridReport {
    pub fn new(check: &str) -> Self {
        GridReport {
            check: check.to_string(),
            max_deviation: 0.0,
            witness: Vec::new(),
            samples: 0,
        }
    }

    pub fn record(&mut self, deviation: f64, witness: &[f64]) {
        self.samples += 1;
        if deviation > self.max_deviation {
            self.max_deviation = deviation;
            self.witness = witness.to_vec();
        }
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_deviation <= tol
    }
}

impl fmt::Display for GridReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: max deviation {:e} over {} samples",
            self.check, self.max_deviation, self.samples
        )?;
        if !self.witness.is_empty() {
            write!(f, " (witness {:?})", self.witness)?;
        }
        Ok(())
    }
}

const BOUNDARY_PROBE: f64 = 1.0 / (1u64 << 30) as f64;

fn grid_points(n: usize, boundaries: &[f64], with_probes: bool) -> Vec<f64> {
    assert!(n >= 2);
    let mut g: Vec<f64> = (0..n).map(|k| k as f64 / (n - 1) as f64).collect();
    for &b in boundaries {
        g.push(b);
        if with_probes {
            for x in [b - BOUNDARY_PROBE, b + BOUNDARY_PROBE] {
                if (0.0..=1.0).contains(&x) {
                    g.push(x);
                }
            }
        }
    }
    g.retain(|x| (0.0..=1.0).contains(x));
    g.sort_by(|a, b| a.partial_cmp(b).unwrap());
    g.dedup();
    g
}

/// The sample grid: `n` equispaced points, all boundaries, and near-boundary
/// probes, sorted and deduplicated.
pub fn sample_grid(n: usize, boundaries: &[f64]) -> Vec<f64> {
    grid_points(n, boundaries, true)
}

/// Grid checks for the four operation axioms.
///
/// Identity, commutativity and monotonicity run on the probe-augmented
/// grid. Associativity re-feeds computed values, and a `±2⁻³⁰` probe input
/// can land an intermediate within one rounding step of a jump border, so
/// its triples use the plain grid (equispaced points plus the borders).
pub fn check_axioms_grid(f: &dyn Tnorm, n: usize, _tol: f64) -> Vec<GridReport> {
    let grid = grid_points(n, &f.boundaries(), true);
    let assoc_grid = grid_points(n, &f.boundaries(), false);
    let mut assoc = GridReport::new("associativity");
    let mut comm = GridReport::new("commutativity");
    let mut ident = GridReport::new("identity");
    let mut mono = GridReport::new("monotonicity");

    for &a in &grid {
        ident.record((f.apply(a, 1.0) - a).abs(), &[a]);
    }
    for &a in &grid {
        for &b in &grid {
            comm.record((f.apply(a, b) - f.apply(b, a)).abs(), &[a, b]);
        }
    }
    for w in grid.windows(2) {
        let (a1, a2) = (w[0], w[1]);
        for &b in &grid {
            let drop = f.apply(a1, b) - f.apply(a2, b);
            mono.record(drop.max(0.0), &[a1, a2, b]);
        }
    }
    for &a in &assoc_grid {
        for &b in &assoc_grid {
            let ab = f.apply(a, b);
            for &c in &assoc_grid {
                let left = f.apply(ab, c);
                let right = f.apply(a, f.apply(b, c));
                assoc.record((left - right).abs(), &[a, b, c]);
            }
        }
    }
    vec![assoc, comm, ident, mono]
}

/// Left-continuity probe: at each boundary `a`, compare `f(a, b)` with the
/// value along `x_k = a - 2^-k`, `k = 10..40`.
///
/// The second argument runs over the plain grid: a filter element sitting
/// `2⁻³⁰` above the filter border acts with a boundary layer steeper than
/// the deepest probe step, which would misread a left-continuous slope as
/// a jump.
pub fn check_left_continuity(f: &dyn Tnorm, boundaries: &[f64], _tol: f64) -> GridReport {
    let mut report = GridReport::new("left-continuity");
    let b_grid = grid_points(101, &f.boundaries(), false);
    for &a in boundaries {
        if a <= 0.0 {
            continue;
        }
        for &b in &b_grid {
            let at = f.apply(a, b);
            let mut limit = at;
            for k in 10..=40 {
                let x = a - (2.0_f64).powi(-k);
                if x < 0.0 {
                    continue;
                }
                limit = f.apply(x, b);
            }
            report.record((at - limit).abs(), &[a, b]);
        }
    }
    report
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RecoverError {
    #[error("partition is invalid: {0:?}")]
    BadPartition(Vec<String>),
    #[error(
        "samples straddle classes: f({r}, {t}) = {value} lands in class {got} but class {expected} was seen for pair ({i}, {j})"
    )]
    Straddle {
        i: usize,
        j: usize,
        r: f64,
        t: f64,
        value: f64,
        got: usize,
        expected: usize,
    },
    #[error("recovered table is not a tomonoid: {0}")]
    NotTomonoid(TomonoidError),
}

fn class_samples(p: &IntervalPartition, idx: usize) -> Vec<f64> {
    let c = &p.classes[idx];
    if c.is_singleton() {
        return vec![c.lo];
    }
    let mut locals = vec![0.004, 0.13, 0.26, 0.39, 0.5, 0.63, 0.76, 0.88, 0.996];
    if c.left_closed {
        locals.push(0.0);
    }
    if c.right_closed {
        locals.push(1.0);
    }
    locals.iter().map(|l| c.lo + l * c.width()).collect()
}

/// Recover the quotient table of `f` along a partition by sampling each
/// class pair; errors out when a pair's products straddle two classes.
pub fn recover_quotient(
    f: &dyn Tnorm,
    p: &IntervalPartition,
) -> Result<FiniteTomonoid, RecoverError> {
    let v = p.validate();
    if !v.is_clean() {
        return Err(RecoverError::BadPartition(v.problems));
    }
    let n = p.len();
    let samples: Vec<Vec<f64>> = (0..n).map(|i| class_samples(p, i)).collect();
    let mut table = vec![vec![0usize; n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut class: Option<(usize, f64, f64, f64)> = None;
            for &r in &samples[i] {
                for &t in &samples[j] {
                    let value = f.apply(r, t);
                    let (got, _) = p.locate(value.clamp(0.0, 1.0));
                    match class {
                        None => class = Some((got, r, t, value)),
                        Some((expected, ..)) if expected != got => {
                            return Err(RecoverError::Straddle {
                                i,
                                j,
                                r,
                                t,
                                value,
                                got,
                                expected,
                            });
                        }
                        _ => {}
                    }
                }
            }
            table[i][j] = class.expect("classes are non-empty").0;
        }
    }
    let report = check_axioms(&table).map_err(|e| RecoverError::NotTomonoid(e.into()))?;
    if !report.is_clean() {
        return Err(RecoverError::NotTomonoid(TomonoidError::Axioms(report)));
    }
    Ok(FiniteTomonoid::new(table).expect("just checked"))
}

/// Max pointwise difference of two operations over a joint grid.
pub fn compare(f: &dyn Tnorm, g: &dyn Tnorm, n: usize) -> GridReport {
    let mut bs = f.boundaries();
    bs.extend(g.boundaries());
    let grid = sample_grid(n, &bs);
    let mut report = GridReport::new("compare");
    for &a in &grid {
        for &b in &grid {
            report.record((f.apply(a, b) - g.apply(a, b)).abs(), &[a, b]);
        }
    }
    report
}

/// The four closed-form reference t-norms.
///
/// Arguments are normalized so the case ladders see `hi = max`, `lo = min`;
/// the forms are anchored at `hi - 1` so the identity column is exact in
/// floating point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleTnorm {
    Odot1,
    Odot2,
    Odot3,
    Odot4,
}

impl OracleTnorm {
    pub const ALL: [OracleTnorm; 4] = [
        OracleTnorm::Odot1,
        OracleTnorm::Odot2,
        OracleTnorm::Odot3,
        OracleTnorm::Odot4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OracleTnorm::Odot1 => "odot1",
            OracleTnorm::Odot2 => "odot2",
            OracleTnorm::Odot3 => "odot3",
            OracleTnorm::Odot4 => "odot4",
        }
    }

    pub fn class_borders(self) -> Vec<f64> {
        match self {
            OracleTnorm::Odot1 => vec![0.5],
            OracleTnorm::Odot2 => vec![0.2, 0.4, 0.6, 0.8],
            OracleTnorm::Odot3 | OracleTnorm::Odot4 => vec![0.25, 0.5, 0.75],
        }
    }

    pub fn eval(self, a: f64, b: f64) -> f64 {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        match self {
            OracleTnorm::Odot1 => odot1(lo, hi),
            OracleTnorm::Odot2 => odot2(lo, hi),
            OracleTnorm::Odot3 => odot3(lo, hi),
            OracleTnorm::Odot4 => odot4(lo, hi),
        }
    }
}

impl FromStr for OracleTnorm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        OracleTnorm::ALL
            .into_iter()
            .find(|o| o.name() == s)
            .ok_or_else(|| format!("unknown oracle `{s}`; expected odot1..odot4"))
    }
}

impl Tnorm for OracleTnorm {
    fn apply(&self, a: f64, b: f64) -> f64 {
        self.eval(a, b)
    }

    fn boundaries(&self) -> Vec<f64> {
        self.class_borders()
    }
}

/// Convenience entry point matching the CLI's `--oracle` names.
pub fn oracle(name: OracleTnorm, a: f64, b: f64) -> f64 {
    name.eval(a, b)
}

/// Nilpotent minimum. `b >= 0.5` whenever the sum can reach 1, so the
/// comparison `a > 1 - b` is exact.
fn odot1(a: f64, b: f64) -> f64 {
    if a > 1.0 - b {
        a
    } else {
        0.0
    }
}

fn odot2(a: f64, b: f64) -> f64 {
    if b >= 0.8 {
        if a >= 0.8 {
            (a + (b - 1.0)).max(0.8)
        } else if a > 0.6 {
            a
        } else if a >= 0.4 {
            (a + 3.0 * (b - 1.0)).max(0.4)
        } else if a > 0.2 {
            a
        } else {
            (a + 2.0 * (b - 1.0)).max(0.0)
        }
    } else if b > 0.6 {
        if a > 0.6 {
            a
        } else if a >= 0.4 {
            0.4
        } else if a > 0.2 {
            if a > 1.0 - b {
                a
            } else {
                0.0
            }
        } else {
            0.0
        }
    } else if a >= 0.4 {
        (2.0 / 3.0 * (a + (b - 1.0))).max(0.0)
    } else {
        0.0
    }
}

fn odot3(a: f64, b: f64) -> f64 {
    if b > 0.75 {
        let s = 4.0 * b - 3.0;
        if a > 0.75 {
            a * s - 3.0 * (b - 1.0)
        } else if a > 0.5 {
            a * s - 2.0 * (b - 1.0)
        } else if a > 0.25 {
            a * s - (b - 1.0)
        } else {
            ((a + (b - 1.0)) / s).max(0.0)
        }
    } else if b > 0.5 {
        if a > 0.5 {
            2.0 / 3.0 * (2.0 * (a - 0.5) * (b - 0.5) + 0.375)
        } else if a > 0.25 {
            (0.25 * (1.0 - 1.0 / (4.0 * (4.0 * a - 1.0) * (2.0 * b - 1.0)))).max(0.0)
        } else {
            0.0
        }
    } else {
        0.0
    }
}

fn odot4(a: f64, b: f64) -> f64 {
    if b > 0.75 {
        if a > 0.75 {
            a
        } else if a > 0.5 {
            a.min(b - 0.25)
        } else if a >= 0.25 {
            a.min(b - 0.5)
        } else if a > 1.0 - b {
            a
        } else {
            0.0
        }
    } else if b > 0.5 {
        if a > 0.5 {
            (a - 0.25).min(b - 0.25).min(0.4375)
        } else if b > 0.625 && a > 0.375 {
            0.125
        } else {
            0.0
        }
    } else {
        0.0
    }
}
