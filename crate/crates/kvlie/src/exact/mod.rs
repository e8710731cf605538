//! Exact arithmetic core: scalars, alphabets, words, tensor and Lie algebras, series, trace space.

pub mod alphabet;
pub mod cyclic;
pub mod expr;
pub mod lie;
pub mod scalar;
pub mod series;
pub mod tensor;
pub mod word;

pub use alphabet::{Alphabet, Letter, Role, Symbol};
pub use cyclic::{CyclicElement, CyclicPair};
pub use expr::{parse, Expr};
pub use lie::{bch, LieElement};
pub use scalar::{q, qf, Poly, Scalar, Q};
pub use series::Series;
pub use tensor::{TensorElement, TensorPair};
pub use word::{Word, word};
