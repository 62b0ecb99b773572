//! Construction and verification of left-continuous t-norms as real
//! coextensions of finite totally ordered monoids.
//!
//! A coextension starts from a finite quotient ([`finite`]), replaces each
//! element by an interval of `[0,1]` ([`partition`]), and fills in the
//! operation from a filter tomonoid acting on the classes, either an
//! Archimedean filter ([`arch`]) or a semilattice filter ([`semi`]). The
//! [`verify`] module checks any resulting operation against the t-norm
//! axioms on dense grids and recovers quotients by sampling.
//!
//! Every value is immutable after construction and every operation is pure,
//! so all types can be shared freely across threads.
//!
//! The nilpotent minimum, assembled from the three-element Łukasiewicz
//! chain by widening its bottom element to `[0, 1/2)`:
//!
//! ```
//! use coext::partition::Orientation;
//! use coext::semi::{NuAssignment, SemiCoextensionSpec};
//! use coext::{ClassShape, FiniteTomonoid, IntervalPartition};
//!
//! let spec = SemiCoextensionSpec {
//!     quotient: FiniteTomonoid::lukasiewicz(3),
//!     partition: IntervalPartition::new(vec![
//!         ClassShape::interval(0.0, 0.5, true, false),
//!         ClassShape::point(0.5),
//!         ClassShape::interval(0.5, 1.0, false, true),
//!     ]),
//!     nu: vec![NuAssignment { class_index: 0, orientation: Orientation::Reversing }],
//!     pairs: vec![],
//! };
//! let t = spec.build().expect("the spec validates");
//! assert_eq!(t.evaluate(0.3, 0.8), 0.3); // above the a + b = 1 diagonal
//! assert_eq!(t.evaluate(0.3, 0.6), 0.0); // below it
//! ```

pub mod arch;
pub mod finite;
pub mod partition;
pub mod semi;
pub mod verify;

pub use arch::{ArchCoextensionSpec, ArchEvaluator, FilterKind};
pub use finite::FiniteTomonoid;
pub use partition::{ClassShape, CompositionKind, IntervalPartition, Orientation};
pub use semi::{SemiCoextensionSpec, SemiEvaluator};
pub use verify::{GridReport, OracleTnorm, Tnorm};
