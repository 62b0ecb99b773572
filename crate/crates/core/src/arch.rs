//! Archimedean real coextensions.
//!
//! A spec pins a finite quotient, a partition of `[0,1]` with one class per
//! quotient element, the filter tomonoid acting on top, one homomorphism
//! coefficient per non-singleton class, and one parametrized mapping family
//! per ⊙-maximal class pair. Evaluation dispatches a point pair through
//! those constituents. Nothing here certifies global associativity; the
//! grid checks in [`crate::verify`] do that numerically.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::finite::FiniteTomonoid;
use crate::partition::{archimedean_kind, CompositionKind, IntervalPartition};
use crate::verify::{GridReport, Tnorm};

/// The two extending filters: with a smallest element (Łukasiewicz) or
/// without (product).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterKind {
    Lukasiewicz,
    Product,
}

impl fmt::Display for FilterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FilterKind::Lukasiewicz => "lukasiewicz",
            FilterKind::Product => "product",
        })
    }
}

/// Filter operation in local coordinates.
pub fn filter_op(kind: FilterKind, f: f64, g: f64) -> f64 {
    match kind {
        FilterKind::Lukasiewicz => (f + g - 1.0).max(0.0),
        FilterKind::Product => f * g,
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CoextensionError {
    #[error("no surjective homomorphism from a {filter} filter onto a {class} class action")]
    IllegalAction {
        filter: FilterKind,
        class: CompositionKind,
    },
    #[error("coefficient alpha must be positive, got {0}")]
    NonPositiveAlpha(f64),
    #[error("a Łukasiewicz filter action needs alpha >= 1, got {0}")]
    AlphaBelowOne(f64),
}

/// Apply the filter element `f` to the class coordinate `r`, both local.
///
/// The five surjective-homomorphism families; `alpha` scales the filter.
pub fn rho_apply(
    class_kind: CompositionKind,
    filter_kind: FilterKind,
    alpha: f64,
    f: f64,
    r: f64,
) -> Result<f64, CoextensionError> {
    if alpha.is_nan() || alpha <= 0.0 {
        return Err(CoextensionError::NonPositiveAlpha(alpha));
    }
    match (filter_kind, class_kind) {
        (FilterKind::Lukasiewicz, CompositionKind::Lukasiewicz) => {
            if alpha < 1.0 {
                return Err(CoextensionError::AlphaBelowOne(alpha));
            }
            Ok((r + alpha * (f - 1.0)).max(0.0))
        }
        (FilterKind::Product, CompositionKind::Lukasiewicz) => Ok((r + alpha * f.ln()).max(0.0)),
        (FilterKind::Product, CompositionKind::Product) => Ok(f.powf(alpha) * r),
        (FilterKind::Product, CompositionKind::ReversedProduct) => {
            Ok((1.0 - (1.0 - r) / f.powf(alpha)).max(0.0))
        }
        (FilterKind::Product, CompositionKind::Power) => Ok(r.powf(1.0 / f.powf(alpha))),
        (filter, class) => Err(CoextensionError::IllegalAction { filter, class }),
    }
}

/// The nine cross-pair mapping families, indexed by the action kinds of the
/// domain class R and the product class S.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArchFamily {
    LukLuk,
    LukRprod,
    ProdLuk,
    ProdProd,
    ProdRprod,
    ProdPower,
    RprodRprod,
    PowerRprod,
    PowerPower,
}

impl ArchFamily {
    pub const ALL: [ArchFamily; 9] = [
        ArchFamily::LukLuk,
        ArchFamily::LukRprod,
        ArchFamily::ProdLuk,
        ArchFamily::ProdProd,
        ArchFamily::ProdRprod,
        ArchFamily::ProdPower,
        ArchFamily::RprodRprod,
        ArchFamily::PowerRprod,
        ArchFamily::PowerPower,
    ];

    pub fn id(self) -> &'static str {
        match self {
            ArchFamily::LukLuk => "luk-luk",
            ArchFamily::LukRprod => "luk-rprod",
            ArchFamily::ProdLuk => "prod-luk",
            ArchFamily::ProdProd => "prod-prod",
            ArchFamily::ProdRprod => "prod-rprod",
            ArchFamily::ProdPower => "prod-power",
            ArchFamily::RprodRprod => "rprod-rprod",
            ArchFamily::PowerRprod => "power-rprod",
            ArchFamily::PowerPower => "power-power",
        }
    }

    /// The kinds (R, S) this family connects.
    pub fn kinds(self) -> (CompositionKind, CompositionKind) {
        use CompositionKind::*;
        match self {
            ArchFamily::LukLuk => (Lukasiewicz, Lukasiewicz),
            ArchFamily::LukRprod => (Lukasiewicz, ReversedProduct),
            ArchFamily::ProdLuk => (Product, Lukasiewicz),
            ArchFamily::ProdProd => (Product, Product),
            ArchFamily::ProdRprod => (Product, ReversedProduct),
            ArchFamily::ProdPower => (Product, Power),
            ArchFamily::RprodRprod => (ReversedProduct, ReversedProduct),
            ArchFamily::PowerRprod => (Power, ReversedProduct),
            ArchFamily::PowerPower => (Power, Power),
        }
    }

    /// Inclusive-or-open lower bound of the parameter `z`; `(bound, strict)`.
    pub fn z_lower(self, q: f64) -> (f64, bool) {
        match self {
            ArchFamily::LukLuk => (-q, false),
            ArchFamily::LukRprod => (-1.0, false),
            ArchFamily::ProdLuk => (0.0, false),
            // z in (0, 1] already reaches the constant bottom map for the
            // reversed-product targets; the formulas clamp it themselves.
            ArchFamily::ProdProd
            | ArchFamily::ProdRprod
            | ArchFamily::ProdPower
            | ArchFamily::RprodRprod
            | ArchFamily::PowerRprod
            | ArchFamily::PowerPower => (0.0, true),
        }
    }

    /// Legal range for the cap `m`: `(min, max, max_strict)`.
    pub fn m_range(self, q: f64) -> (f64, f64, bool) {
        match self {
            ArchFamily::LukLuk => (-q, (1.0 - q).min(0.0), false),
            ArchFamily::LukRprod => (-1.0, 0.0, false),
            ArchFamily::ProdLuk => (0.0, 1.0, false),
            ArchFamily::ProdProd => (0.0, 1.0, false),
            ArchFamily::ProdRprod => (1.0, f64::INFINITY, false),
            ArchFamily::ProdPower => (0.0, 1.0, true),
            ArchFamily::RprodRprod => (0.0, 1.0, false),
            ArchFamily::PowerRprod => (0.0, f64::INFINITY, false),
            ArchFamily::PowerPower => (0.0, 1.0, true),
        }
    }
}

impl FromStr for ArchFamily {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ArchFamily::ALL
            .into_iter()
            .find(|f| f.id() == s)
            .ok_or_else(|| format!("unknown family id `{s}`"))
    }
}

/// `λ_z(r)` for a family, in local coordinates. `q = alpha_s / alpha_r`.
pub fn lambda_rs_apply(family: ArchFamily, alpha_r: f64, alpha_s: f64, z: f64, r: f64) -> f64 {
    let q = alpha_s / alpha_r;
    match family {
        ArchFamily::LukLuk => (q * r + z).max(0.0),
        ArchFamily::LukRprod => (1.0 - (-q * (r + z)).exp()).max(0.0),
        ArchFamily::ProdLuk => (q * r.ln() + z).max(0.0),
        ArchFamily::ProdProd => z * r.powf(q),
        ArchFamily::ProdRprod => (1.0 - 1.0 / (z * r.powf(q))).max(0.0),
        ArchFamily::ProdPower => z.powf(r.powf(-q)),
        ArchFamily::RprodRprod => (1.0 - (1.0 - r).powf(q) / z).max(0.0),
        ArchFamily::PowerRprod => (1.0 - (-r.ln()).powf(q) / z).max(0.0),
        ArchFamily::PowerPower => z.powf((-r.ln()).powf(q)),
    }
}

/// Context of a class pair in the quotient.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairContext {
    Maximal,
    NonMaximal,
    SingletonR,
    SingletonS,
}

/// Classification of a class pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairCase {
    Impossible,
    Trivial,
    Family(ArchFamily),
}

impl fmt::Display for PairCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PairCase::Impossible => f.write_str("impossible"),
            PairCase::Trivial => f.write_str("trivial"),
            PairCase::Family(fam) => f.write_str(fam.id()),
        }
    }
}

/// Classify the pair `(R, S)` of action kinds under a filter kind.
///
/// Non-maximal pairs and singleton classes force the constant-to-bottom
/// mapping; a Łukasiewicz filter admits only Łukasiewicz class actions;
/// five kind combinations cannot occur at all; the rest select a family.
pub fn pair_case(
    r_kind: CompositionKind,
    s_kind: CompositionKind,
    filter_kind: FilterKind,
    context: PairContext,
) -> PairCase {
    use CompositionKind::*;
    if r_kind == TrivialSingleton || s_kind == TrivialSingleton {
        return PairCase::Trivial;
    }
    if context != PairContext::Maximal {
        return PairCase::Trivial;
    }
    match filter_kind {
        FilterKind::Lukasiewicz => match (r_kind, s_kind) {
            (Lukasiewicz, Lukasiewicz) => PairCase::Family(ArchFamily::LukLuk),
            _ => PairCase::Impossible,
        },
        FilterKind::Product => match (r_kind, s_kind) {
            (Lukasiewicz, Product)
            | (Lukasiewicz, Power)
            | (ReversedProduct, Product)
            | (ReversedProduct, Power)
            | (Power, Product) => PairCase::Impossible,
            (ReversedProduct, Lukasiewicz) | (Power, Lukasiewicz) => PairCase::Trivial,
            (Lukasiewicz, Lukasiewicz) => PairCase::Family(ArchFamily::LukLuk),
            (Lukasiewicz, ReversedProduct) => PairCase::Family(ArchFamily::LukRprod),
            (Product, Lukasiewicz) => PairCase::Family(ArchFamily::ProdLuk),
            (Product, Product) => PairCase::Family(ArchFamily::ProdProd),
            (Product, ReversedProduct) => PairCase::Family(ArchFamily::ProdRprod),
            (Product, Power) => PairCase::Family(ArchFamily::ProdPower),
            (ReversedProduct, ReversedProduct) => PairCase::Family(ArchFamily::RprodRprod),
            (Power, ReversedProduct) => PairCase::Family(ArchFamily::PowerRprod),
            (Power, Power) => PairCase::Family(ArchFamily::PowerPower),
            _ => PairCase::Impossible,
        },
    }
}

/// Affine parametrization `t ↦ c0 + c1·t` of a pair family, capped at the
/// family bound during evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Zmap {
    pub c0: f64,
    pub c1: f64,
}

impl Zmap {
    pub fn raw(&self, t: f64) -> f64 {
        self.c0 + self.c1 * t
    }
}

/// One homomorphism coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhoAssignment {
    pub class_index: usize,
    pub alpha: f64,
}

/// Declared case for one pair, as found in a spec file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeclaredCase {
    Trivial,
    Family(ArchFamily),
}

/// One pair entry of a spec: domain class `r`, translation class `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArchPairSpec {
    pub r: usize,
    pub t: usize,
    pub case: DeclaredCase,
    pub m: Option<f64>,
    pub zmap: Option<Zmap>,
}

/// A full Archimedean coextension spec, prior to validation.
#[derive(Debug, Clone, PartialEq)]
pub struct ArchCoextensionSpec {
    pub quotient: FiniteTomonoid,
    pub partition: IntervalPartition,
    pub filter_kind: FilterKind,
    pub rho: Vec<RhoAssignment>,
    pub pairs: Vec<ArchPairSpec>,
}

/// Validation outcome; empty means the spec builds.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub problems: Vec<String>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.problems.is_empty()
    }

    fn push(&mut self, msg: String) {
        self.problems.push(msg);
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.problems {
            writeln!(f, "{p}")?;
        }
        Ok(())
    }
}

/// Resolved action of one class pair.
#[derive(Debug, Clone, Copy, PartialEq)]
enum PairAction {
    Trivial,
    Family {
        family: ArchFamily,
        alpha_r: f64,
        alpha_s: f64,
        m: f64,
        zmap: Zmap,
    },
}

/// A validated, evaluable Archimedean coextension.
#[derive(Debug, Clone)]
pub struct ArchEvaluator {
    quotient: FiniteTomonoid,
    partition: IntervalPartition,
    filter_kind: FilterKind,
    kinds: Vec<CompositionKind>,
    alpha: Vec<f64>,
    actions: BTreeMap<(usize, usize), PairAction>,
}

impl ArchCoextensionSpec {
    pub fn validate(&self) -> ValidationReport {
        self.check().err().unwrap_or_default()
    }

    pub fn build(&self) -> Result<ArchEvaluator, ValidationReport> {
        self.check()
    }

    fn check(&self) -> Result<ArchEvaluator, ValidationReport> {
        let mut report = ValidationReport::default();
        let part_report = self.partition.validate();
        for p in part_report.problems {
            report.push(format!("partition: {p}"));
        }
        let n = self.quotient.size();
        if self.partition.len() != n {
            report.push(format!(
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
            report.push(
                "filter class is a singleton; the extending filter must be non-trivial".into(),
            );
        }
        if filter.left_closed != (self.filter_kind == FilterKind::Lukasiewicz) {
            report.push(format!(
                "filter class {filter} does not match a {} filter (left border ownership)",
                self.filter_kind
            ));
        }

        let kinds: Vec<CompositionKind> = self
            .partition
            .classes
            .iter()
            .map(archimedean_kind)
            .collect();

        let mut alpha = vec![1.0_f64; n];
        let mut have_alpha = vec![false; n];
        for a in &self.rho {
            if a.class_index >= n {
                report.push(format!(
                    "rho assignment for out-of-range class {}",
                    a.class_index
                ));
                continue;
            }
            if a.class_index == fi {
                report.push("rho assignment on the filter class".into());
                continue;
            }
            if self.partition.classes[a.class_index].is_singleton() {
                report.push(format!(
                    "rho assignment on singleton class {}",
                    a.class_index
                ));
                continue;
            }
            if have_alpha[a.class_index] {
                report.push(format!(
                    "duplicate rho assignment for class {}",
                    a.class_index
                ));
            }
            have_alpha[a.class_index] = true;
            alpha[a.class_index] = a.alpha;
            if a.alpha.is_nan() || a.alpha <= 0.0 {
                report.push(format!("class {}: alpha must be positive", a.class_index));
            } else if self.filter_kind == FilterKind::Lukasiewicz && a.alpha < 1.0 {
                report.push(format!(
                    "class {}: alpha >= 1 required under a Łukasiewicz filter, got {}",
                    a.class_index, a.alpha
                ));
            }
        }
        for (i, c) in self.partition.classes.iter().enumerate() {
            if i == fi || c.is_singleton() {
                continue;
            }
            if !have_alpha[i] {
                report.push(format!("class {i} ({c}) needs a rho coefficient"));
            }
            if self.filter_kind == FilterKind::Lukasiewicz
                && kinds[i] != CompositionKind::Lukasiewicz
            {
                report.push(format!(
                    "class {i} ({c}) has kind {}, impossible under a Łukasiewicz filter",
                    kinds[i]
                ));
            }
        }

        let mut declared: BTreeMap<(usize, usize), &ArchPairSpec> = BTreeMap::new();
        for p in &self.pairs {
            if p.r >= fi || p.t >= fi || p.t > p.r {
                report.push(format!(
                    "pair ({}, {}) must satisfy t <= r < filter class {fi}",
                    p.r, p.t
                ));
                continue;
            }
            if declared.insert((p.r, p.t), p).is_some() {
                report.push(format!("duplicate pair ({}, {})", p.r, p.t));
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
                let derived = pair_case(kinds[r], kinds[s], self.filter_kind, context);
                let entry = declared.get(&(r, t));
                let chosen = match (derived, entry) {
                    (PairCase::Impossible, _) => {
                        report.push(format!(
                            "pair ({r}, {t}): impossible combination {} -> {} under a {} filter",
                            kinds[r], kinds[s], self.filter_kind
                        ));
                        continue;
                    }
                    (PairCase::Trivial, None) => PairAction::Trivial,
                    (PairCase::Trivial, Some(p)) => match p.case {
                        DeclaredCase::Trivial => PairAction::Trivial,
                        DeclaredCase::Family(f) => {
                            report.push(format!(
                                "pair ({r}, {t}) is forced trivial but declares family {}",
                                f.id()
                            ));
                            continue;
                        }
                    },
                    (PairCase::Family(fam), None) => {
                        report.push(format!(
                            "pair ({r}, {t}) is ⊙-maximal with non-singleton classes; an explicit entry (family {}) is required",
                            fam.id()
                        ));
                        continue;
                    }
                    (PairCase::Family(fam), Some(p)) => match p.case {
                        // A constant-to-bottom choice is always admissible
                        // when S owns its infimum.
                        DeclaredCase::Trivial => PairAction::Trivial,
                        DeclaredCase::Family(f) if f == fam => {
                            match self.family_action(
                                &mut report,
                                (r, t),
                                (alpha[r], alpha[s]),
                                fam,
                                p,
                            ) {
                                Some(a) => a,
                                None => continue,
                            }
                        }
                        DeclaredCase::Family(f) => {
                            report.push(format!(
                                "pair ({r}, {t}) declares family {} but the kinds select {}",
                                f.id(),
                                fam.id()
                            ));
                            continue;
                        }
                    },
                };
                if matches!(chosen, PairAction::Trivial)
                    && self.partition.classes[s].min_element().is_none()
                {
                    report.push(format!(
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
        Ok(ArchEvaluator {
            quotient: self.quotient.clone(),
            partition: self.partition.clone(),
            filter_kind: self.filter_kind,
            kinds,
            alpha,
            actions,
        })
    }

    fn family_action(
        &self,
        report: &mut ValidationReport,
        (r, t): (usize, usize),
        (alpha_r, alpha_s): (f64, f64),
        family: ArchFamily,
        p: &ArchPairSpec,
    ) -> Option<PairAction> {
        let q = alpha_s / alpha_r;
        let (m, zmap) = match (p.m, p.zmap) {
            (Some(m), Some(z)) => (m, z),
            _ => {
                report.push(format!("pair ({r}, {t}): family entries need m= and zmap="));
                return None;
            }
        };
        let (m_lo, m_hi, m_hi_strict) = family.m_range(q);
        let hi_ok = if m_hi_strict { m < m_hi } else { m <= m_hi };
        // Families with a strictly positive parameter need m above the open
        // lower end, or the parameter set is empty.
        let m_lo_strict = family.z_lower(q).1 && m_lo == 0.0;
        let lo_ok_m = if m_lo_strict { m > m_lo } else { m >= m_lo };
        if !(lo_ok_m && hi_ok) {
            report.push(format!(
                "pair ({r}, {t}): cap m = {m} outside the legal range for {}",
                family.id()
            ));
        }
        if zmap.c1 < 0.0 {
            report.push(format!("pair ({r}, {t}): zmap must be monotone (c1 >= 0)"));
        }
        // Raw parameter floor over the canonical local interval of class T;
        // values above m are capped during evaluation.
        let t_shape = &self.partition.classes[t];
        let t_lo_attained = t_shape.is_singleton() || t_shape.left_closed;
        let raw_lo = zmap.raw(0.0);
        let (z_lo, strict) = family.z_lower(q);
        let lo_ok = if t_lo_attained && strict {
            raw_lo > z_lo
        } else {
            raw_lo >= z_lo
        };
        if !lo_ok {
            report.push(format!(
                "pair ({r}, {t}): zmap reaches {raw_lo}, below the legal parameters of {}",
                family.id()
            ));
        }
        Some(PairAction::Family {
            family,
            alpha_r,
            alpha_s,
            m,
            zmap,
        })
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

impl ArchEvaluator {
    pub fn partition(&self) -> &IntervalPartition {
        &self.partition
    }

    pub fn quotient(&self) -> &FiniteTomonoid {
        &self.quotient
    }

    pub fn filter_kind(&self) -> FilterKind {
        self.filter_kind
    }

    /// Case assignment table: `(r, t) -> case`, for reporting.
    pub fn case_table(&self) -> Vec<(usize, usize, String)> {
        self.actions
            .iter()
            .map(|(&(r, t), action)| {
                let label = match action {
                    PairAction::Trivial => "trivial".to_string(),
                    PairAction::Family {
                        family, m, zmap, ..
                    } => {
                        format!(
                            "{} m={} zmap=affine:{},{}",
                            family.id(),
                            m,
                            zmap.c0,
                            zmap.c1
                        )
                    }
                };
                (r, t, label)
            })
            .collect()
    }

    fn act_filter(&self, class: usize, r_local: f64, f_local: f64) -> f64 {
        if self.partition.classes[class].is_singleton() {
            return self.partition.to_global(class, 0.0);
        }
        let v = rho_apply(
            self.kinds[class],
            self.filter_kind,
            self.alpha[class],
            f_local,
            r_local,
        )
        .expect("validated spec only holds legal actions");
        self.partition.to_global(class, clamp_local(v))
    }

    pub fn evaluate(&self, a: f64, b: f64) -> f64 {
        assert!((0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&b));
        let fi = self.partition.filter_index();
        let (ca, la) = self.partition.locate(a);
        let (cb, lb) = self.partition.locate(b);
        if ca == fi && cb == fi {
            let v = filter_op(self.filter_kind, la, lb);
            return self.partition.to_global(fi, clamp_local(v));
        }
        if cb == fi {
            return self.act_filter(ca, la, lb);
        }
        if ca == fi {
            return self.act_filter(cb, lb, la);
        }
        // Both arguments below the filter: the larger class is the domain.
        let (r_cls, mut r_loc, t_cls, mut t_loc) = if ca >= cb {
            (ca, la, cb, lb)
        } else {
            (cb, lb, ca, la)
        };
        if r_cls == t_cls && r_loc < t_loc {
            std::mem::swap(&mut r_loc, &mut t_loc);
        }
        let s_cls = self.quotient.op(r_cls, t_cls);
        match self.actions[&(r_cls, t_cls)] {
            PairAction::Trivial => {
                let s = &self.partition.classes[s_cls];
                s.min_element()
                    .expect("validated trivial pairs map to bottomed classes")
            }
            PairAction::Family {
                family,
                alpha_r,
                alpha_s,
                m,
                zmap,
            } => {
                let z = zmap.raw(t_loc).min(m);
                let v = lambda_rs_apply(family, alpha_r, alpha_s, z, r_loc);
                self.partition.to_global(s_cls, clamp_local(v))
            }
        }
    }
}

impl Tnorm for ArchEvaluator {
    fn apply(&self, a: f64, b: f64) -> f64 {
        self.evaluate(a, b)
    }

    fn boundaries(&self) -> Vec<f64> {
        self.partition.boundaries()
    }
}

/// Check the commuting-action identity `(a ⊙ b) ⊙ f = (a ⊙ f) ⊙ b` for
/// sampled `a`, `b` and filter elements `f`; both sides route one argument
/// through the filter action first.
pub fn verify_commuting(eval: &ArchEvaluator, samples: usize) -> GridReport {
    commuting_report(eval, eval.partition(), samples)
}

pub(crate) fn commuting_report(
    f: &dyn Tnorm,
    partition: &IntervalPartition,
    samples: usize,
) -> GridReport {
    let fi = partition.filter_index();
    let fc = &partition.classes[fi];
    let mut report = GridReport::new("commuting-action");
    for i in 0..samples {
        let a = i as f64 / (samples - 1) as f64;
        for j in 0..samples {
            let b = j as f64 / (samples - 1) as f64;
            for k in 1..=samples {
                let fv = fc.lo + (k as f64 / samples as f64) * fc.width();
                let left = f.apply(f.apply(a, b), fv);
                let right = f.apply(f.apply(a, fv), b);
                report.record((left - right).abs(), &[a, b, fv]);
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn filter_ops() {
        assert!((filter_op(FilterKind::Lukasiewicz, 0.7, 0.6) - 0.3).abs() < 1e-15);
        assert!((filter_op(FilterKind::Product, 0.5, 0.5) - 0.25).abs() < 1e-15);
        for f in [0.1, 0.4, 0.9] {
            assert!((filter_op(FilterKind::Lukasiewicz, f, 1.0) - f).abs() < 1e-15);
            assert_eq!(filter_op(FilterKind::Product, f, 1.0), f);
        }
    }

    #[test]
    fn rho_examples() {
        let v = rho_apply(
            CompositionKind::Lukasiewicz,
            FilterKind::Lukasiewicz,
            3.0,
            0.9,
            0.5,
        )
        .unwrap();
        assert!((v - 0.2).abs() < 1e-12);

        let v = rho_apply(
            CompositionKind::Power,
            FilterKind::Product,
            1.0,
            (-1.0_f64).exp(),
            0.5,
        )
        .unwrap();
        assert!((v - 0.5_f64.powf(std::f64::consts::E)).abs() < 1e-12);

        for kind in [
            CompositionKind::Lukasiewicz,
            CompositionKind::Product,
            CompositionKind::ReversedProduct,
            CompositionKind::Power,
        ] {
            let alpha: f64 = if kind == CompositionKind::Lukasiewicz {
                1.5
            } else {
                0.7
            };
            for filter in [FilterKind::Lukasiewicz, FilterKind::Product] {
                if let Ok(v) = rho_apply(kind, filter, alpha.max(1.0), 1.0, 0.37) {
                    assert!((v - 0.37).abs() < 1e-12, "identity must act as identity");
                }
            }
        }
    }

    #[test]
    fn rho_rejects_illegal_inputs() {
        assert!(matches!(
            rho_apply(
                CompositionKind::Product,
                FilterKind::Lukasiewicz,
                2.0,
                0.5,
                0.5
            ),
            Err(CoextensionError::IllegalAction { .. })
        ));
        assert!(matches!(
            rho_apply(
                CompositionKind::Lukasiewicz,
                FilterKind::Lukasiewicz,
                0.5,
                0.5,
                0.5
            ),
            Err(CoextensionError::AlphaBelowOne(_))
        ));
        assert!(matches!(
            rho_apply(CompositionKind::Product, FilterKind::Product, 0.0, 0.5, 0.5),
            Err(CoextensionError::NonPositiveAlpha(_))
        ));
    }

    #[test]
    fn rho_is_a_homomorphism() {
        let cases = [
            (CompositionKind::Lukasiewicz, FilterKind::Lukasiewicz, 2.0),
            (CompositionKind::Lukasiewicz, FilterKind::Product, 0.7),
            (CompositionKind::Product, FilterKind::Product, 1.3),
            (CompositionKind::ReversedProduct, FilterKind::Product, 0.5),
            (CompositionKind::Power, FilterKind::Product, 2.0),
        ];
        for (kind, filter, alpha) in cases {
            for i in 1..8 {
                for j in 1..8 {
                    for k in 1..8 {
                        let f = i as f64 / 8.0;
                        let g = j as f64 / 8.0;
                        let r = k as f64 / 8.0;
                        let lhs = rho_apply(
                            kind,
                            filter,
                            alpha,
                            f,
                            rho_apply(kind, filter, alpha, g, r).unwrap(),
                        )
                        .unwrap();
                        let rhs =
                            rho_apply(kind, filter, alpha, filter_op(filter, f, g), r).unwrap();
                        assert!(
                            (lhs - rhs).abs() < 1e-12,
                            "{kind} under {filter}: {lhs} vs {rhs} at f={f} g={g} r={r}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn pair_case_examples() {
        use CompositionKind::*;
        assert_eq!(
            pair_case(
                Lukasiewicz,
                Lukasiewicz,
                FilterKind::Product,
                PairContext::Maximal
            ),
            PairCase::Family(ArchFamily::LukLuk)
        );
        assert_eq!(
            pair_case(
                Power,
                Lukasiewicz,
                FilterKind::Product,
                PairContext::Maximal
            ),
            PairCase::Trivial
        );
        assert_eq!(
            pair_case(
                Lukasiewicz,
                Power,
                FilterKind::Product,
                PairContext::Maximal
            ),
            PairCase::Impossible
        );
    }

    #[test]
    fn lambda_examples() {
        let v = lambda_rs_apply(ArchFamily::ProdProd, 1.0, 1.0, 0.5, 0.5);
        assert!((v - 0.25).abs() < 1e-15);
        let v = lambda_rs_apply(ArchFamily::PowerPower, 1.0, 1.0, 0.5, (-1.0_f64).exp());
        assert!((v - 0.5).abs() < 1e-15);
        // With matching coefficients and z = 0, the Łukasiewicz family is
        // the identity; z = 0 is legal exactly when alpha_s <= alpha_r.
        let v = lambda_rs_apply(ArchFamily::LukLuk, 1.0, 1.0, 0.0, 0.37);
        assert!((v - 0.37).abs() < 1e-15);
        assert_eq!(ArchFamily::LukLuk.m_range(1.0), (-1.0, 0.0, false));
    }

    #[test]
    fn lambda_cap_is_the_pointwise_maximum() {
        for family in ArchFamily::ALL {
            let q = 1.0;
            let m = match family {
                ArchFamily::LukLuk => 0.0,
                ArchFamily::LukRprod => 0.0,
                ArchFamily::ProdLuk => 1.0,
                ArchFamily::ProdRprod => 2.0,
                ArchFamily::PowerRprod => 2.0,
                ArchFamily::ProdProd | ArchFamily::RprodRprod => 1.0,
                ArchFamily::ProdPower | ArchFamily::PowerPower => 0.9,
            };
            let (z_lo, strict) = family.z_lower(q);
            let lo = if strict { z_lo + 1e-3 } else { z_lo.max(-1e6) };
            for i in 0..20 {
                let z = lo + (m - lo) * i as f64 / 19.0;
                for j in 1..20 {
                    let r = j as f64 / 20.0;
                    let at_cap = lambda_rs_apply(family, 1.0, q, m, r);
                    let below = lambda_rs_apply(family, 1.0, q, z, r);
                    assert!(
                        below <= at_cap + 1e-12,
                        "{} not downward closed at z={z} r={r}",
                        family.id()
                    );
                }
            }
        }
    }
}
