use std::sync::Arc;

use super::{AlgebraError, Alphabet, GenLetter};

/// A nonempty word in the constant algebra, shared cheaply between monomials.
pub type ConstWord = Arc<[GenLetter]>;

/// One letter of a reduced word. Unitaries order before constants.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    /// `u_{var+1}` or its inverse; `var` is zero-based.
    Unitary {
        var: u16,
        inverse: bool,
    },
    Constant(ConstWord),
}

impl Letter {
    pub fn u(var: usize) -> Self {
        Letter::Unitary { var: var as u16, inverse: false }
    }

    pub fn u_inv(var: usize) -> Self {
        Letter::Unitary { var: var as u16, inverse: true }
    }

    pub fn constant(word: &[GenLetter]) -> Self {
        Letter::Constant(word.into())
    }

    pub fn is_unitary(&self) -> bool {
        matches!(self, Letter::Unitary { .. })
    }

    pub fn as_unitary(&self) -> Option<(usize, bool)> {
        match *self {
            Letter::Unitary { var, inverse } => Some((var as usize, inverse)),
            Letter::Constant(_) => None,
        }
    }

    pub fn star(&self) -> Self {
        match self {
            Letter::Unitary { var, inverse } => Letter::Unitary { var: *var, inverse: !inverse },
            Letter::Constant(w) => Letter::Constant(w.iter().rev().map(|l| l.star()).collect()),
        }
    }

    fn cancels(&self, other: &Letter) -> bool {
        matches!((self, other),
            (Letter::Unitary { var: a, inverse: x }, Letter::Unitary { var: b, inverse: y })
                if a == b && x != y)
    }
}

/// A reduced word of `L`. The empty word is the unit.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<Letter>);

/// Appends `letter` to a reduced stack, cancelling or merging at the junction.
fn push_reduced(stack: &mut Vec<Letter>, letter: Letter) {
    if let Letter::Constant(w) = &letter {
        if w.is_empty() {
            return;
        }
    }
    match (stack.last_mut(), letter) {
        (Some(top), l) if top.cancels(&l) => {
            stack.pop();
        }
        (Some(Letter::Constant(top)), Letter::Constant(w)) => {
            let merged: ConstWord = top.iter().chain(w.iter()).copied().collect();
            *top = merged;
        }
        (_, l) => stack.push(l),
    }
}

/// Lexicographically least cyclic rotation of `items`.
fn least_rotation<T: Ord + Clone>(items: &[T]) -> Vec<T> {
    let n = items.len();
    let mut best = 0;
    for start in 1..n {
        let cmp = (0..n).map(|k| items[(start + k) % n].cmp(&items[(best + k) % n])).find(|c| c.is_ne());
        if cmp == Some(std::cmp::Ordering::Less) {
            best = start;
        }
    }
    (0..n).map(|k| items[(best + k) % n].clone()).collect()
}

impl Monomial {
    pub fn one() -> Self {
        Self(Vec::new())
    }

    /// Reduces an arbitrary letter sequence. Idempotent.
    pub fn reduce<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut stack = Vec::new();
        for l in letters {
            push_reduced(&mut stack, l);
        }
        Self(stack)
    }

    /// As [`Monomial::reduce`], rejecting letters outside `alphabet`.
    pub fn reduce_checked<I: IntoIterator<Item = Letter>>(
        letters: I,
        alphabet: &Alphabet,
    ) -> Result<Self, AlgebraError> {
        let mut stack = Vec::new();
        for l in letters {
            check_letter(&l, alphabet)?;
            push_reduced(&mut stack, l);
        }
        Ok(Self(stack))
    }

    pub fn u(var: usize) -> Self {
        Self(vec![Letter::u(var)])
    }

    pub fn u_inv(var: usize) -> Self {
        Self(vec![Letter::u_inv(var)])
    }

    /// `u_var^power`; negative powers use the inverse letter.
    pub fn u_pow(var: usize, power: i32) -> Self {
        let letter = if power < 0 { Letter::u_inv(var) } else { Letter::u(var) };
        Self(vec![letter; power.unsigned_abs() as usize])
    }

    pub fn constant(word: &[GenLetter]) -> Self {
        Self::reduce([Letter::constant(word)])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of unitary letters.
    pub fn degree(&self) -> usize {
        self.0.iter().filter(|l| l.is_unitary()).count()
    }

    pub fn is_constant(&self) -> bool {
        self.degree() == 0
    }

    /// The constant-algebra word of a degree-zero monomial (empty for the unit).
    pub fn constant_word(&self) -> Option<&[GenLetter]> {
        match self.0.as_slice() {
            [] => Some(&[]),
            [Letter::Constant(w)] => Some(w),
            _ => None,
        }
    }

    /// Occurrences of `u_var` and `u_var^{-1}`.
    pub fn var_degrees(&self, var: usize) -> (usize, usize) {
        let mut plus = 0;
        let mut minus = 0;
        for l in &self.0 {
            if let Some((v, inv)) = l.as_unitary() {
                if v == var {
                    if inv {
                        minus += 1
                    } else {
                        plus += 1
                    }
                }
            }
        }
        (plus, minus)
    }

    pub fn is_balanced(&self) -> bool {
        let inverses = self.0.iter().filter(|l| matches!(l, Letter::Unitary { inverse: true, .. })).count();
        2 * inverses == self.degree()
    }

    pub fn mul(&self, rhs: &Monomial) -> Monomial {
        let mut stack = Vec::with_capacity(self.0.len() + rhs.0.len());
        stack.extend(self.0.iter().cloned());
        for l in &rhs.0 {
            push_reduced(&mut stack, l.clone());
        }
        Monomial(stack)
    }

    /// Product of several factors.
    pub fn product<'a, I: IntoIterator<Item = &'a Monomial>>(factors: I) -> Monomial {
        let mut stack = Vec::new();
        for f in factors {
            for l in &f.0 {
                push_reduced(&mut stack, l.clone());
            }
        }
        Monomial(stack)
    }

    pub fn star(&self) -> Monomial {
        Monomial(self.0.iter().rev().map(Letter::star).collect())
    }

    /// A monomial with the same value under every unital trace and no
    /// cancellation or constant merge across the word boundary.
    pub fn cyclic_reduce(&self) -> Monomial {
        let mut w: std::collections::VecDeque<Letter> = self.0.iter().cloned().collect();
        loop {
            if w.len() < 2 {
                break;
            }
            let first = w.front().unwrap();
            let last = w.back().unwrap();
            if first.cancels(last) {
                w.pop_front();
                w.pop_back();
                // the new ends may now be two constants that must merge
                continue;
            }
            if let (Letter::Constant(a), Letter::Constant(b)) = (first, last) {
                let merged: ConstWord = b.iter().chain(a.iter()).copied().collect();
                w.pop_front();
                *w.back_mut().unwrap() = Letter::Constant(merged);
                continue;
            }
            break;
        }
        Monomial(w.into_iter().collect())
    }

    /// Lexicographically least rotation of the cyclic reduction. Two monomials
    /// related by cyclic rotation get the same key.
    pub fn cyclic_canonical(&self) -> Monomial {
        let reduced = self.cyclic_reduce();
        match reduced.0.as_slice() {
            // a word in B alone rotates generator by generator
            [Letter::Constant(w)] => Monomial(vec![Letter::Constant(least_rotation(w).into())]),
            letters if letters.len() < 2 => reduced,
            letters => Monomial(least_rotation(letters)),
        }
    }

    /// Cyclic rotation of a cyclically reduced word so that letter `pos` comes first.
    pub fn rotate_to_front(&self, pos: usize) -> Monomial {
        let n = self.0.len();
        Monomial((0..n).map(|k| self.0[(pos + k) % n].clone()).collect())
    }

    /// Splits at letter `pos`: `(letters[..pos], letters[pos+1..])`.
    pub fn split_at_letter(&self, pos: usize) -> (Monomial, Monomial) {
        (Monomial(self.0[..pos].to_vec()), Monomial(self.0[pos + 1..].to_vec()))
    }

    /// Builds a monomial from letters already known to be reduced.
    pub(crate) fn from_reduced_unchecked(letters: Vec<Letter>) -> Monomial {
        Monomial(letters)
    }

    /// Visits every reduced monomial of degree at most `max_degree` in
    /// `unitaries` variables whose constant slots are empty or one of `slots`.
    pub fn enumerate<F: FnMut(&Monomial)>(unitaries: usize, slots: &[ConstWord], max_degree: usize, mut visit: F) {
        let mut letters = Vec::new();
        enumerate_from(unitaries, slots, max_degree, &mut letters, &mut visit);
    }

    pub fn check(&self, alphabet: &Alphabet) -> Result<(), AlgebraError> {
        self.0.iter().try_for_each(|l| check_letter(l, alphabet))
    }
}

/// Extends `letters` (empty or ending in a unitary letter) by a constant slot,
/// then by each admissible unitary letter.
fn enumerate_from<F: FnMut(&Monomial)>(
    unitaries: usize,
    slots: &[ConstWord],
    budget: usize,
    letters: &mut Vec<Letter>,
    visit: &mut F,
) {
    let slot_choices = std::iter::once(None).chain(slots.iter().map(Some));
    for slot in slot_choices {
        if let Some(w) = slot {
            letters.push(Letter::Constant(w.clone()));
        }
        visit(&Monomial::from_reduced_unchecked(letters.clone()));
        if budget > 0 {
            for var in 0..unitaries {
                for inverse in [false, true] {
                    let l = Letter::Unitary { var: var as u16, inverse };
                    if letters.last().is_some_and(|last| last.cancels(&l)) {
                        continue;
                    }
                    letters.push(l);
                    enumerate_from(unitaries, slots, budget - 1, letters, visit);
                    letters.pop();
                }
            }
        }
        if slot.is_some() {
            letters.pop();
        }
    }
}

fn check_letter(l: &Letter, alphabet: &Alphabet) -> Result<(), AlgebraError> {
    match l {
        Letter::Unitary { var, .. } if (*var as usize) >= alphabet.unitaries => {
            Err(AlgebraError::UnitaryIndex { index: *var as usize + 1, unitaries: alphabet.unitaries })
        }
        Letter::Constant(w) => {
            for g in w.iter() {
                if (g.gen as usize) >= alphabet.constants.generators.len() {
                    return Err(AlgebraError::UnknownGenerator(format!("#{}", g.gen)));
                }
            }
            Ok(())
        }
        _ => Ok(()),
    }
}
