use serde::{Deserialize, Serialize};

use super::AlgebraError;

/// One generator of the constant algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    #[serde(default = "default_true")]
    pub selfadjoint: bool,
}

fn default_true() -> bool {
    true
}

/// The free *-algebra on named generators.
///
/// Basis words are sequences of [`GenLetter`]; the product is concatenation and
/// the involution reverses a word while taking the adjoint of each letter.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstantAlgebraSpec {
    pub generators: Vec<Generator>,
}

impl ConstantAlgebraSpec {
    pub fn selfadjoint(names: &[&str]) -> Result<Self, AlgebraError> {
        let spec = Self {
            generators: names.iter().map(|n| Generator { name: (*n).to_string(), selfadjoint: true }).collect(),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), AlgebraError> {
        for (k, g) in self.generators.iter().enumerate() {
            if !valid_generator_name(&g.name) {
                return Err(AlgebraError::BadGeneratorName(g.name.clone()));
            }
            if self.generators[..k].iter().any(|h| h.name == g.name) {
                return Err(AlgebraError::DuplicateGenerator(g.name.clone()));
            }
        }
        if self.generators.len() > u16::MAX as usize {
            return Err(AlgebraError::TooManyGenerators);
        }
        Ok(())
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn letter(&self, name: &str, adjoint: bool) -> Result<GenLetter, AlgebraError> {
        let gen = self.index_of(name).ok_or_else(|| AlgebraError::UnknownGenerator(name.into()))?;
        Ok(GenLetter::new(gen as u16, adjoint, self.generators[gen].selfadjoint))
    }

    pub fn name(&self, letter: GenLetter) -> &str {
        &self.generators[letter.gen as usize].name
    }
}

/// Names must be identifiers and must not collide with unitary variables
/// (`u1`, `u2`, ...) or the imaginary unit.
pub fn valid_generator_name(name: &str) -> bool {
    let mut chars = name.chars();
    let head_ok = chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_');
    let tail_ok = name.chars().skip(1).all(|c| c.is_ascii_alphanumeric() || c == '_');
    let unitary_like = name.len() > 1 && name.starts_with('u') && name[1..].bytes().all(|b| b.is_ascii_digit());
    head_ok && tail_ok && !unitary_like && name != "i" && name != "b"
}

/// A letter of a constant-algebra word. The selfadjoint flag is carried so the
/// involution can be applied without consulting the alphabet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GenLetter {
    pub gen: u16,
    pub adjoint: bool,
    pub selfadjoint: bool,
}

impl GenLetter {
    pub fn new(gen: u16, adjoint: bool, selfadjoint: bool) -> Self {
        Self { gen, adjoint: adjoint && !selfadjoint, selfadjoint }
    }

    pub fn star(self) -> Self {
        if self.selfadjoint {
            self
        } else {
            Self { adjoint: !self.adjoint, ..self }
        }
    }
}

/// Letters of `L = B * C<u_1^{±1},...,u_m^{±1}>` together with `m`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alphabet {
    pub unitaries: usize,
    pub constants: ConstantAlgebraSpec,
}

impl Alphabet {
    pub fn new(unitaries: usize, constants: ConstantAlgebraSpec) -> Result<Self, AlgebraError> {
        constants.validate()?;
        if unitaries > u16::MAX as usize {
            return Err(AlgebraError::TooManyGenerators);
        }
        Ok(Self { unitaries, constants })
    }

    /// `m` unitaries and selfadjoint constants with the given names.
    pub fn with_constants(unitaries: usize, names: &[&str]) -> Result<Self, AlgebraError> {
        Self::new(unitaries, ConstantAlgebraSpec::selfadjoint(names)?)
    }
}
