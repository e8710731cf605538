//! Exact computations for framed Drinfeld–Kohno Lie algebras of surfaces, the
//! Goldman–Turaev structures on their envelopes, and Kashiwara–Vergne type checks.

pub mod catalog;
pub mod exact;
pub mod framing;
pub mod gt;
pub mod kv;
pub mod linalg;
pub mod presented;
pub mod semidirect;
