//! Exact real root isolation for square-free polynomials.
//!
//! Two drivers share one set of predicates: plain bisection
//! ([`isolator::isolate_plain`]) and a Newton-accelerated variant
//! ([`isolator::isolate_newton`]) that detects root clusters from Newton
//! diagrams and jumps to them with quadratically convergent iteration.

pub mod diagram;
pub mod dyadic;
pub mod error;
pub mod interval;
pub mod intpoly;
pub mod isolator;
pub mod newton;
pub mod number;
pub mod oracle;
pub mod poly;
pub mod predicates;
pub mod radical;

pub use diagram::{build_diagram, NewtonDiagram, C0_THRESHOLD};
pub use dyadic::Dyadic;
pub use error::{Error, Result};
pub use interval::Interval;
pub use isolator::{isolate, isolate_newton, isolate_plain, IsolateOptions, Isolation, Method};
pub use number::Rational;
pub use poly::Polynomial;
pub use predicates::{PredicateKind, PredicateOutcome};
