//! Finite quantic, negative, commutative tomonoids given by Cayley tables.
//!
//! Elements are the chain indices `0..n-1` in increasing order; index `n-1`
//! is the monoidal identity and top element. On a finite chain quanticity is
//! automatic (suprema are maxima), so a table is valid exactly when it is
//! associative, commutative, monotone and has the top element as identity.

use std::fmt;

use thiserror::Error;

/// The axioms a Cayley table can violate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axiom {
    Associativity,
    Commutativity,
    Identity,
    Negativity,
    Monotonicity,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Axiom::Associativity => "associativity",
            Axiom::Commutativity => "commutativity",
            Axiom::Identity => "identity",
            Axiom::Negativity => "negativity",
            Axiom::Monotonicity => "monotonicity",
        };
        f.write_str(name)
    }
}

/// A single axiom violation, with the witnessing elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomViolation {
    pub axiom: Axiom,
    pub witness: Vec<usize>,
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} violated at {:?}", self.axiom, self.witness)
    }
}

/// Outcome of checking a table against the tomonoid axioms.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AxiomReport {
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Structural defects of the raw input, distinct from axiom violations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("table is empty")]
    Empty,
    #[error("row {row} has {got} entries, expected {expected}")]
    NotSquare {
        row: usize,
        got: usize,
        expected: usize,
    },
    #[error("entry at ({row},{col}) is {value}, outside 0..{n}")]
    OutOfRange {
        row: usize,
        col: usize,
        value: usize,
        n: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TomonoidError {
    #[error(transparent)]
    Structure(#[from] TableError),
    #[error("table violates tomonoid axioms: {0:?}")]
    Axioms(AxiomReport),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerationError {
    #[error("chain size {0} exceeds the exhaustive-search bound {MAX_ENUMERATION}")]
    TooLarge(usize),
    #[error("chain size must be at least 1")]
    Zero,
}

/// Exhaustive enumeration is kept to sizes where the search is instant.
pub const MAX_ENUMERATION: usize = 6;

/// Check a raw table against the tomonoid axioms.
///
/// Returns a structural error when the table is malformed; otherwise a
/// report that is empty exactly when the table is a valid tomonoid.
#[allow(clippy::needless_range_loop)]
pub fn check_axioms(table: &[Vec<usize>]) -> Result<AxiomReport, TableError> {
    let n = table.len();
    if n == 0 {
        return Err(TableError::Empty);
    }
    for (i, row) in table.iter().enumerate() {
        if row.len() != n {
            return Err(TableError::NotSquare {
                row: i,
                got: row.len(),
                expected: n,
            });
        }
        for (j, &v) in row.iter().enumerate() {
            if v >= n {
                return Err(TableError::OutOfRange {
                    row: i,
                    col: j,
                    value: v,
                    n,
                });
            }
        }
    }

    let mut report = AxiomReport::default();
    let top = n - 1;
    for a in 0..n {
        if table[a][top] != a {
            report.violations.push(AxiomViolation {
                axiom: Axiom::Identity,
                witness: vec![a],
            });
        }
        for b in 0..n {
            if table[a][b] != table[b][a] {
                report.violations.push(AxiomViolation {
                    axiom: Axiom::Commutativity,
                    witness: vec![a, b],
                });
            }
            if table[a][b] > a.min(b) {
                report.violations.push(AxiomViolation {
                    axiom: Axiom::Negativity,
                    witness: vec![a, b],
                });
            }
            if a + 1 < n && table[a][b] > table[a + 1][b] {
                report.violations.push(AxiomViolation {
                    axiom: Axiom::Monotonicity,
                    witness: vec![a, a + 1, b],
                });
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if table[table[a][b]][c] != table[a][table[b][c]] {
                    report.violations.push(AxiomViolation {
                        axiom: Axiom::Associativity,
                        witness: vec![a, b, c],
                    });
                }
            }
        }
    }
    Ok(report)
}

/// A validated finite q.n.c. tomonoid.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteTomonoid {
    n: usize,
    table: Vec<usize>,
}

/// A filter, always of the form `[low, n-1]`.
///
/// Finite chains admit no `(d, n-1]` filters: every element has an immediate
/// successor, while a half-open filter bound must be the infimum of the
/// elements above it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Filter {
    pub low: usize,
}

/// A congruence given by its ordered interval classes (inclusive bounds).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Congruence {
    pub classes: Vec<(usize, usize)>,
}

impl Congruence {
    pub fn class_of(&self, a: usize) -> usize {
        self.classes
            .iter()
            .position(|&(lo, hi)| lo <= a && a <= hi)
            .expect("element outside every class")
    }
}

impl FiniteTomonoid {
    /// Validate a raw table and wrap it.
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self, TomonoidError> {
        let report = check_axioms(&table)?;
        if !report.is_clean() {
            return Err(TomonoidError::Axioms(report));
        }
        let n = table.len();
        Ok(FiniteTomonoid {
            n,
            table: table.into_iter().flatten().collect(),
        })
    }

    /// The n-element Łukasiewicz chain: `a ⊙ b = (a + b - (n-1)) ∨ 0`.
    pub fn lukasiewicz(n: usize) -> Self {
        assert!(n >= 1);
        let table = (0..n)
            .map(|a| (0..n).map(|b| (a + b).saturating_sub(n - 1)).collect())
            .collect();
        Self::new(table).expect("Łukasiewicz chain is a tomonoid")
    }

    /// The n-element chain with the minimum operation.
    pub fn min_chain(n: usize) -> Self {
        assert!(n >= 1);
        let table = (0..n).map(|a| (0..n).map(|b| a.min(b)).collect()).collect();
        Self::new(table).expect("min chain is a tomonoid")
    }

    pub fn trivial() -> Self {
        Self::min_chain(1)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn top(&self) -> usize {
        self.n - 1
    }

    #[inline]
    pub fn op(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b]
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.n)
            .map(|a| (0..self.n).map(|b| self.op(a, b)).collect())
            .collect()
    }

    /// All idempotent elements, ascending. Always contains the identity.
    pub fn idempotents(&self) -> Vec<usize> {
        (0..self.n).filter(|&a| self.op(a, a) == a).collect()
    }

    /// All filters, one `[d, n-1]` per idempotent `d`, smallest filter first.
    pub fn filters(&self) -> Vec<Filter> {
        let mut ds = self.idempotents();
        ds.reverse();
        ds.into_iter().map(|low| Filter { low }).collect()
    }

    /// Is `f` a filter of this tomonoid?
    pub fn is_filter(&self, f: &Filter) -> bool {
        f.low < self.n && self.op(f.low, f.low) == f.low
    }

    /// The congruence induced by a filter: `a ~ b` iff some filter element
    /// multiplies the larger of the two below the smaller.
    pub fn congruence_by_filter(&self, f: &Filter) -> Congruence {
        assert!(self.is_filter(f), "not a filter: low = {}", f.low);
        // With a least filter element d, the existential collapses to b⊙d ≤ a.
        let d = f.low;
        let related = |a: usize, b: usize| -> bool {
            let (lo, hi) = (a.min(b), a.max(b));
            lo == hi || self.op(hi, d) <= lo
        };
        let mut classes = Vec::new();
        let mut start = 0;
        while start < self.n {
            let mut end = start;
            while end + 1 < self.n && related(start, end + 1) {
                end += 1;
            }
            classes.push((start, end));
            start = end + 1;
        }
        // Classes of a filter congruence are intervals; make sure no element
        // relates across the cut we just made.
        debug_assert!(classes.windows(2).all(|w| !related(w[0].1, w[1].0)));
        Congruence { classes }
    }

    /// The quotient tomonoid by a filter.
    pub fn quotient(&self, f: &Filter) -> FiniteTomonoid {
        let cong = self.congruence_by_filter(f);
        let k = cong.classes.len();
        let mut table = vec![vec![0usize; k]; k];
        for (i, &(ilo, ihi)) in cong.classes.iter().enumerate() {
            for (j, &(jlo, jhi)) in cong.classes.iter().enumerate() {
                let cls = cong.class_of(self.op(ilo, jlo));
                // Well-definedness of the induced operation.
                for a in ilo..=ihi {
                    for b in jlo..=jhi {
                        assert_eq!(
                            cong.class_of(self.op(a, b)),
                            cls,
                            "filter congruence is not compatible"
                        );
                    }
                }
                table[i][j] = cls;
            }
        }
        FiniteTomonoid::new(table).expect("quotient of a tomonoid is a tomonoid")
    }

    /// Residuum: the largest `c` with `a ⊙ c ≤ b`.
    pub fn residuum(&self, a: usize, b: usize) -> usize {
        (0..self.n)
            .rev()
            .find(|&c| self.op(a, c) <= b)
            .expect("a ⊙ 0 = 0 ≤ b always holds")
    }

    /// The ⊙-maximal pair dominating `(r, t)` with the same product.
    pub fn maximal_pair(&self, r: usize, t: usize) -> (usize, usize) {
        let s = self.op(r, t);
        let r_bar = self.residuum(t, s);
        let t_bar = self.residuum(r_bar, s);
        (r_bar, t_bar)
    }

    /// Is `(r, t)` already ⊙-maximal?
    pub fn is_maximal_pair(&self, r: usize, t: usize) -> bool {
        self.maximal_pair(r, t) == (r, t)
    }

    /// The Cayley representation: row `a` is the translation `x ↦ a ⊙ x`.
    pub fn cayley(&self) -> Vec<Vec<usize>> {
        self.rows()
    }

    /// Archimedean: every `b` strictly between bottom and identity powers
    /// down to the bottom. On an n-chain, powers stabilize within n steps.
    pub fn is_archimedean(&self) -> bool {
        (1..self.top()).all(|b| {
            let mut p = b;
            for _ in 0..self.n {
                p = self.op(p, b);
            }
            p == 0
        })
    }

    /// Semilattice: the operation is the minimum.
    pub fn is_semilattice(&self) -> bool {
        (0..self.n).all(|a| (0..self.n).all(|b| self.op(a, b) == a.min(b)))
    }
}

impl fmt::Display for FiniteTomonoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in 0..self.n {
            for b in 0..self.n {
                if b > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", self.op(a, b))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Enumerate every tomonoid on the n-chain, in lexicographic table order.
///
/// Backtracks over the sub-identity entries `(i, j)` with `i ≤ j < n-1`,
/// keeping commutativity, negativity and monotonicity by construction and
/// filtering by associativity.
#[allow(clippy::needless_range_loop)]
pub fn enumerate_tomonoids(n: usize) -> Result<Vec<FiniteTomonoid>, EnumerationError> {
    if n == 0 {
        return Err(EnumerationError::Zero);
    }
    if n > MAX_ENUMERATION {
        return Err(EnumerationError::TooLarge(n));
    }
    if n == 1 {
        return Ok(vec![FiniteTomonoid::trivial()]);
    }

    let mut slots = Vec::new();
    for i in 0..n - 1 {
        for j in i..n - 1 {
            slots.push((i, j));
        }
    }

    let mut table = vec![vec![0usize; n]; n];
    for a in 0..n {
        table[a][n - 1] = a;
        table[n - 1][a] = a;
    }

    let mut found = Vec::new();
    fill(&mut table, &slots, 0, n, &mut found);
    Ok(found)
}

fn fill(
    table: &mut Vec<Vec<usize>>,
    slots: &[(usize, usize)],
    k: usize,
    n: usize,
    found: &mut Vec<FiniteTomonoid>,
) {
    if k == slots.len() {
        if is_associative(table, n) {
            found.push(
                FiniteTomonoid::new(table.clone()).expect("search respects the other axioms"),
            );
        }
        return;
    }
    let (i, j) = slots[k];
    let mut lo = 0;
    if i > 0 {
        lo = lo.max(table[i - 1][j]);
    }
    if j > i {
        lo = lo.max(table[i][j - 1]);
    }
    for v in lo..=i.min(j) {
        table[i][j] = v;
        table[j][i] = v;
        fill(table, slots, k + 1, n, found);
    }
    table[i][j] = 0;
    table[j][i] = 0;
}

fn is_associative(table: &[Vec<usize>], n: usize) -> bool {
    for a in 0..n {
        for b in a..n {
            for c in b..n {
                // Commutativity reduces the triples to check.
                if table[table[a][b]][c] != table[a][table[b][c]] {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l5() -> FiniteTomonoid {
        FiniteTomonoid::lukasiewicz(5)
    }

    #[test]
    fn lukasiewicz_5_is_clean() {
        let rows = l5().rows();
        assert!(check_axioms(&rows).unwrap().is_clean());
    }

    #[test]
    fn trivial_table_is_clean() {
        assert!(check_axioms(&[vec![0]]).unwrap().is_clean());
    }

    #[test]
    fn perturbed_l5_is_flagged() {
        let mut rows = l5().rows();
        rows[1][2] = 1;
        let report = check_axioms(&rows).unwrap();
        assert!(!report.is_clean());
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v.axiom, Axiom::Commutativity | Axiom::Monotonicity)));
    }

    #[test]
    fn malformed_tables_are_structural_errors() {
        assert_eq!(check_axioms(&[]), Err(TableError::Empty));
        assert!(matches!(
            check_axioms(&[vec![0, 0], vec![0]]),
            Err(TableError::NotSquare { .. })
        ));
        assert!(matches!(
            check_axioms(&[vec![0, 0], vec![0, 7]]),
            Err(TableError::OutOfRange { .. })
        ));
    }

    #[test]
    fn idempotents_of_known_chains() {
        assert_eq!(l5().idempotents(), vec![0, 4]);
        assert_eq!(FiniteTomonoid::min_chain(4).idempotents(), vec![0, 1, 2, 3]);
        assert_eq!(FiniteTomonoid::trivial().idempotents(), vec![0]);
    }

    #[test]
    fn filters_of_known_chains() {
        let fs = l5().filters();
        assert_eq!(fs.len(), 2);
        assert_eq!(fs[0].low, 4);
        assert_eq!(fs[1].low, 0);
        assert_eq!(FiniteTomonoid::min_chain(4).filters().len(), 4);
        assert_eq!(FiniteTomonoid::trivial().filters().len(), 1);
    }

    #[test]
    fn congruence_examples() {
        let t = l5();
        let all = t.congruence_by_filter(&Filter { low: 0 });
        assert_eq!(all.classes, vec![(0, 4)]);
        let id = t.congruence_by_filter(&Filter { low: 4 });
        assert_eq!(id.classes.len(), 5);

        let m4 = FiniteTomonoid::min_chain(4);
        let c = m4.congruence_by_filter(&Filter { low: 2 });
        assert_eq!(c.classes, vec![(0, 0), (1, 1), (2, 3)]);
    }

    #[test]
    fn quotient_examples() {
        let t = l5();
        assert_eq!(t.quotient(&Filter { low: 0 }).size(), 1);
        assert_eq!(t.quotient(&Filter { low: 4 }), t);

        let m4 = FiniteTomonoid::min_chain(4);
        assert_eq!(
            m4.quotient(&Filter { low: 2 }),
            FiniteTomonoid::min_chain(3)
        );
    }

    #[test]
    fn residuum_examples() {
        let t = l5();
        assert_eq!(t.residuum(3, 1), 2);
        for a in 0..5 {
            assert_eq!(t.residuum(a, 4), 4);
        }
        assert_eq!(t.residuum(4, 2), 2);
    }

    #[test]
    fn maximal_pair_examples() {
        let t = l5();
        assert_eq!(t.maximal_pair(1, 1), (3, 1));
        assert_eq!(t.maximal_pair(4, 4), (4, 4));
        let m4 = FiniteTomonoid::min_chain(4);
        assert_eq!(m4.maximal_pair(1, 2), (1, 3));
    }

    #[test]
    fn cayley_rows() {
        let t = l5();
        assert_eq!(t.cayley()[2], vec![0, 0, 0, 1, 2]);
        assert_eq!(t.cayley()[4], vec![0, 1, 2, 3, 4]);
        assert_eq!(FiniteTomonoid::trivial().cayley(), vec![vec![0]]);
    }

    #[test]
    fn archimedean_and_semilattice_predicates() {
        assert!(l5().is_archimedean());
        assert!(!l5().is_semilattice());
        let m4 = FiniteTomonoid::min_chain(4);
        assert!(!m4.is_archimedean());
        assert!(m4.is_semilattice());
        let two = FiniteTomonoid::min_chain(2);
        assert!(two.is_archimedean());
        assert!(two.is_semilattice());
    }

    #[test]
    fn enumeration_small_counts() {
        assert_eq!(enumerate_tomonoids(1).unwrap().len(), 1);
        assert_eq!(enumerate_tomonoids(2).unwrap().len(), 1);
        let threes = enumerate_tomonoids(3).unwrap();
        assert_eq!(threes.len(), 2);
        assert!(threes.contains(&FiniteTomonoid::min_chain(3)));
        assert!(threes.contains(&FiniteTomonoid::lukasiewicz(3)));
        // Six tables on the 4-chain: free entries (t11, t12, t22) admit
        // (0,0,0) (0,0,1) (0,0,2) (0,1,2) (1,1,1) (1,1,2).
        assert_eq!(enumerate_tomonoids(4).unwrap().len(), 6);
        assert!(matches!(
            enumerate_tomonoids(9),
            Err(EnumerationError::TooLarge(9))
        ));
    }

    #[test]
    fn enumeration_is_deterministic() {
        let a = enumerate_tomonoids(4).unwrap();
        let b = enumerate_tomonoids(4).unwrap();
        assert_eq!(a, b);
    }
}
