//! Ribbon Feynman graphs and the Hopf algebra driving the renormalization of
//! non-commutative field theories.
//!
//! The crate is organised bottom-up:
//!
//! * [`ribbon_graph`]: rotation systems, face tracing, genus, power counting
//!   and canonical forms.
//! * [`subgraphs`]: subgraph enumeration, extraction, contraction and
//!   insertion with explicit gluing data.
//! * [`hopf`]: the free commutative algebra on 1PI graphs with its
//!   coproduct, counit and antipode, plus law checkers.
//! * [`renorm`]: Laurent series, Feynman-rule characters, minimal
//!   subtraction and the twisted-antipode recursion.
//! * [`io`]: the graph document format, DOT export, rule configurations and
//!   corpus generation.
//! * [`checks`]: the property suites behind `ribbon check`.

pub mod checks;
pub mod hopf;
pub mod io;
pub mod renorm;
pub mod ribbon_graph;
pub mod subgraphs;
