//! Semilattice real coextensions.
//!
//! The extending filter is a chain under the minimum. Each filter element
//! acts as an idempotent translation, described by its fixpoint set; under
//! the orientation condition the per-class actions are Gödel or reversed
//! Gödel, and cross-pairs fall into three step-map families.

use std::collections::BTreeMap;
use std::str::FromStr;

use crate::arch::{ValidationReport, Zmap};
use crate::finite::FiniteTomonoid;
use crate::partition::{
    semilattice_kind, ClassShape, CompositionKind, IntervalPartition, Orientation,
};
use crate::verify::Tnorm;

/// A finite union of intervals and isolated points of a host chain, encoding
/// the fixpoints of an idempotent, shrinking, sup-preserving translation.
#[derive(Debug, Clone, PartialEq)]
pub struct FixpointSet {
    pub components: Vec<ClassShape>,
}

impl FixpointSet {
    pub fn new(components: Vec<ClassShape>) -> Self {
        FixpointSet { components }
    }

    /// `max { e ∈ E : e ≤ a }`, or `None` when no member lies below `a`.
    pub fn apply(&self, a: f64) -> Option<f64> {
        for c in self.components.iter().rev() {
            if c.contains(a) {
                return Some(a);
            }
            if c.hi <= a && c.right_closed {
                return Some(c.hi);
            }
            if c.hi < a && !c.right_closed {
                // Supremum of a right-open component; well-defined only for
                // sets that are closed under suprema.
                return Some(c.hi);
            }
        }
        None
    }

    pub fn contains(&self, x: f64) -> bool {
        self.components.iter().any(|c| c.contains(x))
    }
}

/// `max { e ∈ E : e ≤ a }` for sets satisfying the fixpoint-set conditions.
pub fn idempotent_apply(e: &FixpointSet, a: f64) -> Option<f64> {
    e.apply(a)
}

/// Validate a fixpoint set against the three conditions: closure under
/// suprema, approximation from below at left-limit members, and a member
/// below every host element.
pub fn validate_e(e: &FixpointSet, host: &ClassShape) -> ValidationReport {
    let mut report = ValidationReport::default();
    let mut push = |msg: String| report.problems.push(msg);

    if e.components.is_empty() {
        push("fixpoint set is empty".into());
        return report;
    }
    for (i, c) in e.components.iter().enumerate() {
        if c.lo > c.hi {
            push(format!("component {i} has lo > hi"));
            return report;
        }
        if c.lo < host.lo || c.hi > host.hi {
            push(format!("component {i} leaves the host chain {host}"));
        }
    }
    for w in e.components.windows(2) {
        let gap_ok =
            w[0].hi < w[1].lo || (w[0].hi == w[1].lo && !(w[0].right_closed && w[1].left_closed));
        if !gap_ok {
            push("components overlap or are out of order".into());
            return report;
        }
    }
    // Merge components touching at a shared point before the border checks.
    let mut comps: Vec<ClassShape> = Vec::new();
    for c in &e.components {
        if let Some(last) = comps.last_mut() {
            if last.hi == c.lo && (last.right_closed || c.left_closed) {
                last.hi = c.hi;
                last.right_closed = c.right_closed;
                continue;
            }
        }
        comps.push(*c);
    }

    for (i, c) in comps.iter().enumerate() {
        // (E1) a right-open component's supremum is missing from the set,
        // unless that supremum is the host's own unattained top, in which
        // case no supremum exists in the chain at all.
        let sup_outside_host = c.hi == host.hi && !host.right_closed;
        if !c.is_singleton() && !c.right_closed && !sup_outside_host {
            push(format!(
                "closure under suprema fails: component {} has supremum {} outside the set",
                i, c.hi
            ));
        }
        // (E2) a left-closed start above the host bottom is a left-limit
        // point of the chain not approximated within the set.
        let at_host_bottom = c.lo == host.lo && host.left_closed;
        if (c.left_closed || c.is_singleton()) && !at_host_bottom {
            push(format!(
                "member {} is a left-limit point not approximated from below within the set",
                c.lo
            ));
        }
    }
    // (E3) members must reach down to the bottom of the host chain.
    let first = &comps[0];
    let bottom_ok = if host.left_closed {
        first.lo == host.lo && (first.left_closed || first.is_singleton())
    } else {
        first.lo == host.lo
    };
    if !bottom_ok {
        push(format!(
            "no member below host elements near {}: set starts at {}",
            host.lo, first.lo
        ));
    }
    report
}

/// Gödel / reversed Gödel action in local coordinates. The bijection onto
/// the class is the identity (preserving) or the reflection `1 - f`
/// (reversing); a reversing action sends everything at or below the
/// reflected point to the class bottom.
pub fn goedel_apply(orientation: Orientation, f: f64, r: f64) -> f64 {
    match orientation {
        Orientation::Preserving => r.min(f),
        Orientation::Reversing => {
            if r <= 1.0 - f {
                0.0
            } else {
                r
            }
        }
    }
}

/// The three semilattice cross-pair families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SemiFamily {
    GoedelGoedel,
    GoedelRgoedel,
    RgoedelRgoedel,
}

impl SemiFamily {
    pub const ALL: [SemiFamily; 3] = [
        SemiFamily::GoedelGoedel,
        SemiFamily::GoedelRgoedel,
        SemiFamily::RgoedelRgoedel,
    ];

    pub fn id(self) -> &'static str {
        match self {
            SemiFamily::GoedelGoedel => "goedel-goedel",
            SemiFamily::GoedelRgoedel => "goedel-rgoedel",
            SemiFamily::RgoedelRgoedel => "rgoedel-rgoedel",
        }
    }
}

impl FromStr for SemiFamily {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SemiFamily::ALL
            .into_iter()
            .find(|f| f.id() == s)
            .ok_or_else(|| format!("unknown family id `{s}`"))
    }
}

/// Classification of a semilattice class pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SemiPairCase {
    Trivial,
    Family(SemiFamily),
}

pub use crate::arch::PairContext;

/// Classify a pair of semilattice action kinds. Total: the reversed-Gödel
///-into-Gödel combination collapses to the constant-to-bottom map.
pub fn pair_case_semilattice(
    r_kind: CompositionKind,
    s_kind: CompositionKind,
    context: PairContext,
) -> SemiPairCase {
    use CompositionKind::*;
    if r_kind == TrivialSingleton || s_kind == TrivialSingleton {
        return SemiPairCase::Trivial;
    }
    if context != PairContext::Maximal {
        return SemiPairCase::Trivial;
    }
    match (r_kind, s_kind) {
        (Goedel, Goedel) => SemiPairCase::Family(SemiFamily::GoedelGoedel),
        (Goedel, ReversedGoedel) => SemiPairCase::Family(SemiFamily::GoedelRgoedel),
        (ReversedGoedel, ReversedGoedel) => SemiPairCase::Family(SemiFamily::RgoedelRgoedel),
        (ReversedGoedel, Goedel) => SemiPairCase::Trivial,
        (rk, sk) => panic!("not semilattice kinds: {rk}, {sk}"),
    }
}

/// `λ_z(r)` for the semilattice families, local coordinates.
pub fn lambda_rs_semilattice(family: SemiFamily, z: f64, r: f64) -> f64 {
    match family {
        SemiFamily::GoedelGoedel => r.min(z),
        SemiFamily::GoedelRgoedel => {
            if r <= 1.0 - z {
                0.0
            } else {
                z
            }
        }
        SemiFamily::RgoedelRgoedel => {
            if r <= z {
                0.0
            } else {
                r
            }
        }
    }
}

/// Orientation assignment for one class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NuAssignment {
    pub class_index: usize,
    pub orientation: Orientation,
}

/// Parameter subset for the Gödel-to-reversed-Gödel family: a finite union
/// of closed components of `[0, 1]` that contains 0. The parametrization
/// snaps a raw value to the largest member strictly below it, keeping the
/// selection left-continuous in `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamSubset {
    pub components: Vec<(f64, f64)>,
}

impl ParamSubset {
    pub fn contains_zero(&self) -> bool {
        self.components.first().is_some_and(|&(lo, _)| lo == 0.0)
    }

    /// `sup { s ∈ S' : s < raw }`, falling back to the bottom member 0.
    /// The subset's components are closed, so the supremum is a member.
    pub fn snap_below(&self, raw: f64) -> f64 {
        let mut best = 0.0;
        for &(lo, hi) in &self.components {
            if lo < raw {
                best = raw.min(hi);
            } else {
                break;
            }
        }
        best
    }
}

/// Declared case for one semilattice pair entry.
#[derive(Debug, Clone, PartialEq)]
pub enum SemiDeclaredCase {
    Trivial,
    Family(SemiFamily),
}

/// One pair entry: domain class `r`, translation class `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct SemiPairSpec {
    pub r: usize,
    pub t: usize,
    pub case: SemiDeclaredCase,
    pub m: Option<f64>,
    pub sprime: Option<ParamSubset>,
    pub zmap: Option<Zmap>,
}

/// A full semilattice coextension spec, prior to validation.
#[derive(Debug, Clone, PartialEq)]
pub struct SemiCoextensionSpec {
    pub quotient: FiniteTomonoid,
    pub partition: IntervalPartition,
    pub nu: Vec<NuAssignment>,
    pub pairs: Vec<SemiPairSpec>,
}

#[derive(Debug, Clone, PartialEq)]
enum SemiPairAction {
    Trivial,
    Capped {
        family: SemiFamily,
        m: f64,
        zmap: Zmap,
    },
    Snapped {
        sprime: ParamSubset,
        zmap: Zmap,
    },
}

/// A validated, evaluable semilattice coextension.
#[derive(Debug, Clone)]
pub struct SemiEvaluator {
    quotient: FiniteTomonoid,
    partition: IntervalPartition,
    orientation: Vec<Option<Orientation>>,
    actions: BTreeMap<(usize, usize), SemiPairAction>,
}

impl SemiCoextensionSpec {
    pub fn validate(&self) -> ValidationReport {
        self.check().err().unwrap_or_default()
    }

    pub fn build(&self) -> Result<SemiEvaluator, ValidationReport> {
        self.check()
    }

    fn check(&self) -> Result<SemiEvaluator, ValidationReport> {
        let mut report = ValidationReport::default();
        for p in self.partition.validate().problems {
            report.problems.push(format!("partition: {p}"));
        }
        let n = self.quotient.size();
        if self.partition.len() != n {
            report.problems.push(format!(
                "partition has {} classes but the quotient has {n} elements",
                self.partition.len()
            ));
        }
        if !report.is_clean() {
            return Err(report);
        }

        let fi = self.partition.filter_index();
        let filter = &self.partition.classes[fi];
        if filter.is_singleton() {
            report.problems.push(
                "filter class is a singleton; the extending filter must be non-trivial".into(),
            );
        }
        let filter_has_bottom = filter.left_closed;

        let mut orientation: Vec<Option<Orientation>> = vec![None; n];
        for a in &self.nu {
            if a.class_index >= n {
                report
                    .problems
                    .push(format!("numap for out-of-range class {}", a.class_index));
                continue;
            }
            if a.class_index == fi {
                report.problems.push("numap on the filter class".into());
                continue;
            }
            let shape = &self.partition.classes[a.class_index];
            if shape.is_singleton() {
                report
                    .problems
                    .push(format!("numap on singleton class {}", a.class_index));
                continue;
            }
            if orientation[a.class_index].is_some() {
                report
                    .problems
                    .push(format!("duplicate numap for class {}", a.class_index));
            }
            orientation[a.class_index] = Some(a.orientation);
            // A bijection from the filter fixes the class borders: the image
            // of the top of the filter must be attained, and the remaining
            // border is attained exactly when the filter owns its bottom.
            let ok = match a.orientation {
                Orientation::Preserving => {
                    shape.right_closed && shape.left_closed == filter_has_bottom
                }
                Orientation::Reversing => {
                    shape.left_closed && shape.right_closed == filter_has_bottom
                }
            };
            if !ok {
                report.problems.push(format!(
                    "class {} ({shape}) is not order-isomorphic to the filter under a {} bijection",
                    a.class_index, a.orientation
                ));
            }
        }
        let mut kinds = vec![CompositionKind::TrivialSingleton; n];
        for (i, c) in self.partition.classes.iter().enumerate() {
            if i == fi {
                kinds[i] = CompositionKind::Goedel;
                continue;
            }
            if c.is_singleton() {
                continue;
            }
            match orientation[i] {
                None => report
                    .problems
                    .push(format!("class {i} ({c}) needs a numap orientation")),
                Some(o) => match semilattice_kind(c, o) {
                    Ok(k) => kinds[i] = k,
                    Err(e) => report.problems.push(format!("class {i} ({c}): {e}")),
                },
            }
        }

        let mut declared: BTreeMap<(usize, usize), &SemiPairSpec> = BTreeMap::new();
        for p in &self.pairs {
            if p.r >= fi || p.t >= fi || p.t > p.r {
                report.problems.push(format!(
                    "pair ({}, {}) must satisfy t <= r < filter class {fi}",
                    p.r, p.t
                ));
                continue;
            }
            if declared.insert((p.r, p.t), p).is_some() {
                report
                    .problems
                    .push(format!("duplicate pair ({}, {})", p.r, p.t));
            }
        }

        let mut actions = BTreeMap::new();
        for r in 0..fi {
            for t in 0..=r {
                let s = self.quotient.op(r, t);
                let context = if self.partition.classes[r].is_singleton() {
                    PairContext::SingletonR
                } else if self.partition.classes[s].is_singleton() {
                    PairContext::SingletonS
                } else if self.quotient.is_maximal_pair(r, t) {
                    PairContext::Maximal
                } else {
                    PairContext::NonMaximal
                };
                let derived = pair_case_semilattice(kinds[r], kinds[s], context);
                let entry = declared.get(&(r, t));
                let chosen = match (derived, entry) {
                    (SemiPairCase::Trivial, None) => SemiPairAction::Trivial,
                    (SemiPairCase::Trivial, Some(p)) => match &p.case {
                        SemiDeclaredCase::Trivial => SemiPairAction::Trivial,
                        SemiDeclaredCase::Family(f) => {
                            report.problems.push(format!(
                                "pair ({r}, {t}) is forced trivial but declares family {}",
                                f.id()
                            ));
                            continue;
                        }
                    },
                    (SemiPairCase::Family(fam), None) => {
                        report.problems.push(format!(
                            "pair ({r}, {t}) is ⊙-maximal with non-singleton classes; an explicit entry (family {}) is required",
                            fam.id()
                        ));
                        continue;
                    }
                    (SemiPairCase::Family(fam), Some(p)) => match &p.case {
                        SemiDeclaredCase::Trivial => SemiPairAction::Trivial,
                        SemiDeclaredCase::Family(f) if *f == fam => {
                            match self.family_action(&mut report, r, t, fam, p) {
                                Some(a) => a,
                                None => continue,
                            }
                        }
                        SemiDeclaredCase::Family(f) => {
                            report.problems.push(format!(
                                "pair ({r}, {t}) declares family {} but the kinds select {}",
                                f.id(),
                                fam.id()
                            ));
                            continue;
                        }
                    },
                };
                if matches!(chosen, SemiPairAction::Trivial)
                    && self.partition.classes[s].min_element().is_none()
                {
                    report.problems.push(format!(
                        "pair ({r}, {t}) maps to class {s} ({}) which has no smallest element",
                        self.partition.classes[s]
                    ));
                    continue;
                }
                actions.insert((r, t), chosen);
            }
        }

        if !report.is_clean() {
            return Err(report);
        }
        Ok(SemiEvaluator {
            quotient: self.quotient.clone(),
            partition: self.partition.clone(),
            orientation,
            actions,
        })
    }

    fn family_action(
        &self,
        report: &mut ValidationReport,
        r: usize,
        t: usize,
        family: SemiFamily,
        p: &SemiPairSpec,
    ) -> Option<SemiPairAction> {
        let zmap = match p.zmap {
            Some(z) => z,
            None => {
                report
                    .problems
                    .push(format!("pair ({r}, {t}): family entries need zmap="));
                return None;
            }
        };
        if zmap.c1 < 0.0 {
            report
                .problems
                .push(format!("pair ({r}, {t}): zmap must be monotone (c1 >= 0)"));
        }
        match family {
            SemiFamily::GoedelGoedel | SemiFamily::RgoedelRgoedel => match p.m {
                Some(m) if (0.0..=1.0).contains(&m) => {
                    Some(SemiPairAction::Capped { family, m, zmap })
                }
                Some(m) => {
                    report.problems.push(format!(
                        "pair ({r}, {t}): cap m = {m} outside the class coordinates"
                    ));
                    None
                }
                None => {
                    report
                        .problems
                        .push(format!("pair ({r}, {t}): family entry needs m="));
                    None
                }
            },
            SemiFamily::GoedelRgoedel => match &p.sprime {
                Some(sp) => {
                    let mut ok = sp.contains_zero();
                    if !ok {
                        report
                            .problems
                            .push(format!("pair ({r}, {t}): parameter subset must contain 0"));
                    }
                    let mut prev = -1.0;
                    for &(lo, hi) in &sp.components {
                        if lo > hi || lo < 0.0 || hi > 1.0 || lo <= prev {
                            report
                                .problems
                                .push(format!("pair ({r}, {t}): malformed parameter subset"));
                            ok = false;
                            break;
                        }
                        prev = hi;
                    }
                    ok.then(|| SemiPairAction::Snapped {
                        sprime: sp.clone(),
                        zmap,
                    })
                }
                None => {
                    report
                        .problems
                        .push(format!("pair ({r}, {t}): family entry needs sprime="));
                    None
                }
            },
        }
    }
}

const CLAMP_SLACK: f64 = 1e-12;

fn clamp_local(x: f64) -> f64 {
    debug_assert!(
        x > -CLAMP_SLACK && x < 1.0 + CLAMP_SLACK,
        "local coordinate {x} strays past the clamp budget"
    );
    x.clamp(0.0, 1.0)
}

impl SemiEvaluator {
    pub fn partition(&self) -> &IntervalPartition {
        &self.partition
    }

    pub fn quotient(&self) -> &FiniteTomonoid {
        &self.quotient
    }

    pub fn case_table(&self) -> Vec<(usize, usize, String)> {
        self.actions
            .iter()
            .map(|(&(r, t), action)| {
                let label = match action {
                    SemiPairAction::Trivial => "trivial".to_string(),
                    SemiPairAction::Capped { family, m, zmap } => {
                        format!(
                            "{} m={} zmap=affine:{},{}",
                            family.id(),
                            m,
                            zmap.c0,
                            zmap.c1
                        )
                    }
                    SemiPairAction::Snapped { sprime, zmap } => {
                        let comps: Vec<String> = sprime
                            .components
                            .iter()
                            .map(|&(lo, hi)| {
                                if lo == hi {
                                    format!("{lo}")
                                } else {
                                    format!("{lo}..{hi}")
                                }
                            })
                            .collect();
                        format!(
                            "goedel-rgoedel sprime={} zmap=affine:{},{}",
                            comps.join(","),
                            zmap.c0,
                            zmap.c1
                        )
                    }
                };
                (r, t, label)
            })
            .collect()
    }

    /// Fixpoint set of the translation by filter element `f` restricted to a
    /// class, in that class's local coordinates.
    pub fn class_fixpoints(&self, class: usize, f_local: f64) -> FixpointSet {
        match self.orientation[class] {
            Some(Orientation::Preserving) => FixpointSet::new(vec![ClassShape {
                lo: 0.0,
                hi: f_local,
                left_closed: self.partition.classes[class].left_closed,
                right_closed: true,
            }]),
            Some(Orientation::Reversing) => {
                let cut = 1.0 - f_local;
                let mut comps = vec![ClassShape::point(0.0)];
                if cut < 1.0 {
                    comps.push(ClassShape {
                        lo: cut,
                        hi: 1.0,
                        left_closed: false,
                        right_closed: self.partition.classes[class].right_closed,
                    });
                }
                FixpointSet::new(comps)
            }
            None => FixpointSet::new(vec![ClassShape::point(0.0)]),
        }
    }

    fn act_filter(&self, class: usize, r_local: f64, f_local: f64) -> f64 {
        if self.partition.classes[class].is_singleton() {
            return self.partition.to_global(class, 0.0);
        }
        let o = self.orientation[class].expect("validated classes carry an orientation");
        let v = goedel_apply(o, f_local, r_local);
        self.partition.to_global(class, clamp_local(v))
    }

    pub fn evaluate(&self, a: f64, b: f64) -> f64 {
        assert!((0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&b));
        let fi = self.partition.filter_index();
        let (ca, la) = self.partition.locate(a);
        let (cb, lb) = self.partition.locate(b);
        if ca == fi && cb == fi {
            return self.partition.to_global(fi, la.min(lb));
        }
        if cb == fi {
            return self.act_filter(ca, la, lb);
        }
        if ca == fi {
            return self.act_filter(cb, lb, la);
        }
        let (r_cls, mut r_loc, t_cls, mut t_loc) = if ca >= cb {
            (ca, la, cb, lb)
        } else {
            (cb, lb, ca, la)
        };
        if r_cls == t_cls && r_loc < t_loc {
            std::mem::swap(&mut r_loc, &mut t_loc);
        }
        let s_cls = self.quotient.op(r_cls, t_cls);
        match &self.actions[&(r_cls, t_cls)] {
            SemiPairAction::Trivial => {
                let s = &self.partition.classes[s_cls];
                s.min_element()
                    .expect("validated trivial pairs map to bottomed classes")
            }
            SemiPairAction::Capped { family, m, zmap } => {
                let z = zmap.raw(t_loc).min(*m);
                let v = lambda_rs_semilattice(*family, z, r_loc);
                self.partition.to_global(s_cls, clamp_local(v))
            }
            SemiPairAction::Snapped { sprime, zmap } => {
                let z = sprime.snap_below(zmap.raw(t_loc));
                let v = lambda_rs_semilattice(SemiFamily::GoedelRgoedel, z, r_loc);
                self.partition.to_global(s_cls, clamp_local(v))
            }
        }
    }
}

impl Tnorm for SemiEvaluator {
    fn apply(&self, a: f64, b: f64) -> f64 {
        self.evaluate(a, b)
    }

    fn boundaries(&self) -> Vec<f64> {
        self.partition.boundaries()
    }
}
