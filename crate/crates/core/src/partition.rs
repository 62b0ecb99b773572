//! Ordered partitions of `[0, 1]` into singletons and bordered intervals,
//! with affine coordinate maps onto each class's canonical unit interval.
//!
//! The canonical local interval mirrors the border flags: `[0,1]` for a
//! closed class, `(0,1]` left-open, `[0,1)` right-open, `(0,1)` open.

use std::fmt;

/// One class of a partition: a singleton (`lo == hi`) or an interval with
/// border-ownership flags.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassShape {
    pub lo: f64,
    pub hi: f64,
    pub left_closed: bool,
    pub right_closed: bool,
}

impl ClassShape {
    pub fn point(x: f64) -> Self {
        ClassShape {
            lo: x,
            hi: x,
            left_closed: true,
            right_closed: true,
        }
    }

    pub fn interval(lo: f64, hi: f64, left_closed: bool, right_closed: bool) -> Self {
        ClassShape {
            lo,
            hi,
            left_closed,
            right_closed,
        }
    }

    pub fn is_singleton(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        if self.is_singleton() {
            return x == self.lo;
        }
        let left_ok = x > self.lo || (self.left_closed && x == self.lo);
        let right_ok = x < self.hi || (self.right_closed && x == self.hi);
        left_ok && right_ok
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// Smallest element, when the class has one.
    pub fn min_element(&self) -> Option<f64> {
        if self.is_singleton() || self.left_closed {
            Some(self.lo)
        } else {
            None
        }
    }
}

impl fmt::Display for ClassShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_singleton() {
            return write!(f, "{{{}}}", self.lo);
        }
        write!(
            f,
            "{}{}, {}{}",
            if self.left_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.right_closed { ']' } else { ')' },
        )
    }
}

/// The c-isomorphism classes of per-class filter actions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CompositionKind {
    Lukasiewicz,
    Product,
    ReversedProduct,
    Power,
    Goedel,
    ReversedGoedel,
    TrivialSingleton,
}

impl fmt::Display for CompositionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            CompositionKind::Lukasiewicz => "lukasiewicz",
            CompositionKind::Product => "product",
            CompositionKind::ReversedProduct => "reversed-product",
            CompositionKind::Power => "power",
            CompositionKind::Goedel => "goedel",
            CompositionKind::ReversedGoedel => "reversed-goedel",
            CompositionKind::TrivialSingleton => "singleton",
        };
        f.write_str(name)
    }
}

/// Orientation of the bijection carrying the filter onto a class in the
/// semilattice case.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Preserving,
    Reversing,
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orientation::Preserving => "preserving",
            Orientation::Reversing => "reversing",
        })
    }
}

/// Archimedean action kind of a class, a function of its border flags alone:
/// both borders → Łukasiewicz, top only → product, bottom only → reversed
/// product, neither → power.
pub fn archimedean_kind(s: &ClassShape) -> CompositionKind {
    if s.is_singleton() {
        return CompositionKind::TrivialSingleton;
    }
    match (s.left_closed, s.right_closed) {
        (true, true) => CompositionKind::Lukasiewicz,
        (false, true) => CompositionKind::Product,
        (true, false) => CompositionKind::ReversedProduct,
        (false, false) => CompositionKind::Power,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KindError {
    #[error("a reversing action needs a smallest class element; class is left-open")]
    ReversingWithoutBottom,
}

/// Semilattice action kind of a class. A reversing orientation needs the
/// class to own its lower border.
pub fn semilattice_kind(
    s: &ClassShape,
    orientation: Orientation,
) -> Result<CompositionKind, KindError> {
    if s.is_singleton() {
        return Ok(CompositionKind::TrivialSingleton);
    }
    match orientation {
        Orientation::Preserving => Ok(CompositionKind::Goedel),
        Orientation::Reversing if s.left_closed => Ok(CompositionKind::ReversedGoedel),
        Orientation::Reversing => Err(KindError::ReversingWithoutBottom),
    }
}

/// Problems found while validating a partition.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PartitionReport {
    pub problems: Vec<String>,
}

impl PartitionReport {
    pub fn is_clean(&self) -> bool {
        self.problems.is_empty()
    }
}

impl fmt::Display for PartitionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.problems {
            writeln!(f, "{p}")?;
        }
        Ok(())
    }
}

/// An ordered cover of `[0, 1]` by classes; the last class is the filter
/// class of a coextension.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalPartition {
    pub classes: Vec<ClassShape>,
}

impl IntervalPartition {
    pub fn new(classes: Vec<ClassShape>) -> Self {
        IntervalPartition { classes }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Check the cover/adjacency invariants.
    pub fn validate(&self) -> PartitionReport {
        let mut report = PartitionReport::default();
        let mut push = |msg: String| report.problems.push(msg);

        if self.classes.is_empty() {
            push("partition has no classes".into());
            return report;
        }
        for (i, c) in self.classes.iter().enumerate() {
            if !c.lo.is_finite() || !c.hi.is_finite() {
                push(format!("class {i} has a non-finite bound"));
                return report;
            }
            if c.lo > c.hi {
                push(format!("class {i} has lo {} > hi {}", c.lo, c.hi));
            }
            if c.is_singleton() && !(c.left_closed && c.right_closed) {
                push(format!("singleton class {i} must own its point"));
            }
        }
        let first = &self.classes[0];
        if !(first.lo == 0.0 && (first.left_closed || first.is_singleton())) {
            push(format!("first class {first} does not contain 0"));
        }
        let last = self.classes.last().unwrap();
        if !(last.hi == 1.0 && last.right_closed) {
            push(format!("last class {last} does not contain 1"));
        }
        for (i, w) in self.classes.windows(2).enumerate() {
            let (a, b) = (&w[0], &w[1]);
            if a.hi != b.lo {
                push(format!(
                    "classes {i} and {} do not meet: boundary {} vs {}",
                    i + 1,
                    a.hi,
                    b.lo
                ));
                continue;
            }
            if a.right_closed == b.left_closed {
                push(format!(
                    "boundary {} between classes {i} and {} must be owned by exactly one side",
                    a.hi,
                    i + 1
                ));
            }
        }
        report
    }

    /// Locate `x ∈ [0,1]`: owning class index and canonical local coordinate.
    pub fn locate(&self, x: f64) -> (usize, f64) {
        assert!(
            (0.0..=1.0).contains(&x),
            "locate called with {x} outside [0,1]"
        );
        for (i, c) in self.classes.iter().enumerate() {
            if c.contains(x) {
                let local = if c.is_singleton() {
                    0.0
                } else {
                    (x - c.lo) / c.width()
                };
                return (i, local);
            }
        }
        panic!("valid partitions cover [0,1]; {x} not located");
    }

    /// Inverse of `locate` on its image.
    pub fn to_global(&self, class_index: usize, local: f64) -> f64 {
        let c = &self.classes[class_index];
        if c.is_singleton() {
            c.lo
        } else {
            c.lo + local * c.width()
        }
    }

    /// Internal class boundaries, ascending.
    pub fn boundaries(&self) -> Vec<f64> {
        let mut b: Vec<f64> = self
            .classes
            .iter()
            .take(self.classes.len() - 1)
            .map(|c| c.hi)
            .collect();
        b.dedup();
        b
    }

    /// Index of the filter class (the top class).
    pub fn filter_index(&self) -> usize {
        self.classes.len() - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quarters() -> IntervalPartition {
        IntervalPartition::new(vec![
            ClassShape::interval(0.0, 0.25, true, true),
            ClassShape::interval(0.25, 0.5, false, true),
            ClassShape::interval(0.5, 0.75, false, true),
            ClassShape::interval(0.75, 1.0, false, true),
        ])
    }

    fn odot2_fifths() -> IntervalPartition {
        IntervalPartition::new(vec![
            ClassShape::interval(0.0, 0.2, true, true),
            ClassShape::interval(0.2, 0.4, false, false),
            ClassShape::interval(0.4, 0.6, true, true),
            ClassShape::interval(0.6, 0.8, false, false),
            ClassShape::interval(0.8, 1.0, true, true),
        ])
    }

    #[test]
    fn two_class_cover_is_valid() {
        let p = IntervalPartition::new(vec![
            ClassShape::point(0.0),
            ClassShape::interval(0.0, 1.0, false, true),
        ]);
        assert!(p.validate().is_clean());
    }

    #[test]
    fn closed_bottom_quarters_are_valid() {
        assert!(quarters().validate().is_clean());
    }

    #[test]
    fn overlap_is_flagged() {
        let p = IntervalPartition::new(vec![
            ClassShape::interval(0.0, 0.5, true, false),
            ClassShape::interval(0.25, 1.0, true, true),
        ]);
        let r = p.validate();
        assert!(!r.is_clean());
        assert!(r.problems.iter().any(|m| m.contains("do not meet")));
    }

    #[test]
    fn double_ownership_is_flagged() {
        let p = IntervalPartition::new(vec![
            ClassShape::interval(0.0, 0.5, true, true),
            ClassShape::interval(0.5, 1.0, true, true),
        ]);
        assert!(!p.validate().is_clean());
    }

    #[test]
    fn archimedean_kind_is_a_function_of_the_flags() {
        let k = |lc, rc| archimedean_kind(&ClassShape::interval(0.25, 0.5, lc, rc));
        assert_eq!(k(true, true), CompositionKind::Lukasiewicz);
        assert_eq!(k(false, true), CompositionKind::Product);
        assert_eq!(k(true, false), CompositionKind::ReversedProduct);
        assert_eq!(k(false, false), CompositionKind::Power);
        assert_eq!(
            archimedean_kind(&ClassShape::point(0.5)),
            CompositionKind::TrivialSingleton
        );
    }

    #[test]
    fn semilattice_kind_rules() {
        let gz = ClassShape::interval(0.0, 1.0, false, true);
        assert_eq!(
            semilattice_kind(&gz, Orientation::Preserving).unwrap(),
            CompositionKind::Goedel
        );
        let rg = ClassShape::interval(0.0, 1.0, true, false);
        assert_eq!(
            semilattice_kind(&rg, Orientation::Reversing).unwrap(),
            CompositionKind::ReversedGoedel
        );
        let open = ClassShape::interval(0.0, 1.0, false, false);
        assert_eq!(
            semilattice_kind(&open, Orientation::Reversing),
            Err(KindError::ReversingWithoutBottom)
        );
    }

    #[test]
    fn locate_examples() {
        let p = odot2_fifths();
        let (cls, local) = p.locate(0.5);
        assert_eq!(cls, 2);
        assert!((local - 0.5).abs() < 1e-15);

        assert_eq!(p.locate(1.0), (4, 1.0));
        // Shared boundary owned by the right class.
        let q = quarters();
        assert_eq!(q.locate(0.25), (0, 1.0));
        let p2 = IntervalPartition::new(vec![
            ClassShape::interval(0.0, 0.5, true, false),
            ClassShape::interval(0.5, 1.0, true, true),
        ]);
        assert_eq!(p2.locate(0.5), (1, 0.0));
    }

    #[test]
    fn boundaries_are_the_internal_cuts() {
        assert_eq!(quarters().boundaries(), vec![0.25, 0.5, 0.75]);
    }

    #[test]
    fn measures_cover_the_unit_interval() {
        for p in [quarters(), odot2_fifths()] {
            let total: f64 = p.classes.iter().map(|c| c.width()).sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
    }
}
