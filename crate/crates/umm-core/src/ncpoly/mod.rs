//! Noncommutative Laurent polynomials over a free product `B * C<u_i^{±1}>`.

mod alphabet;
mod monomial;
mod polynomial;
mod tensor;
pub mod text;
pub mod trace_data;

pub use alphabet::{valid_generator_name, Alphabet, ConstantAlgebraSpec, GenLetter, Generator};
pub use monomial::{ConstWord, Letter, Monomial};
pub use polynomial::{DegreeStats, Polynomial};
pub use tensor::TensorPoly;
pub use text::{format_monomial, format_polynomial, format_tensor, parse_monomial, parse_polynomial, ParseError};
pub use trace_data::{check_trace_data, DiagonalSpectra, IndependentMoments, MatrixTrace, TraceData, TraceDataError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AlgebraError {
    #[error("unknown constant generator {0:?}")]
    UnknownGenerator(String),
    #[error("unitary index {index} out of range 1..={unitaries}")]
    UnitaryIndex { index: usize, unitaries: usize },
    #[error("invalid generator name {0:?}")]
    BadGeneratorName(String),
    #[error("duplicate generator name {0:?}")]
    DuplicateGenerator(String),
    #[error("too many generators")]
    TooManyGenerators,
    #[error("xi-norm needs xi >= 1, got {0}")]
    XiBelowOne(f64),
}
