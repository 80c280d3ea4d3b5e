//! Canonical text form of monomials and polynomials.
//!
//! ```text
//! poly    := "0" | ["-"] term (("+" | "-") term)*
//! term    := coeff ["*" mono] | mono
//! coeff   := rational | rational "i" | "i" | "(" rational ("+"|"-") rational "i" ")"
//! mono    := factor (" " factor)*
//! factor  := "1" | "u" INDEX ["^" ["-"] INT] | "b[" name ("*")? (" " name ("*")?)* "]"
//!          | name ["^" INT]
//! ```
//!
//! Output is canonical: terms in monomial order, every coefficient explicit,
//! repeated unitary letters folded into powers and constants written `b[..]`.
//! Example: `1*u1 b[x y] u2^-1 - 3/2*u1^2 + (1/2+1i)`.

use std::fmt::Write as _;

use num_traits::Signed;

use super::{Alphabet, GenLetter, Letter, Monomial, Polynomial, TensorPoly};
use crate::scalar::{parse_scalar, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at byte {position}: {message} (near {token:?})")]
pub struct ParseError {
    pub position: usize,
    pub token: String,
    pub message: String,
}

pub fn format_monomial(m: &Monomial, alphabet: &Alphabet) -> String {
    if m.is_one() {
        return "1".into();
    }
    let letters = m.letters();
    let mut parts: Vec<String> = Vec::new();
    let mut k = 0;
    while k < letters.len() {
        match &letters[k] {
            Letter::Unitary { var, inverse } => {
                let mut run = 1;
                while k + run < letters.len() && letters[k + run] == letters[k] {
                    run += 1;
                }
                let power = if *inverse { -(run as i64) } else { run as i64 };
                parts.push(if power == 1 { format!("u{}", var + 1) } else { format!("u{}^{}", var + 1, power) });
                k += run;
            }
            Letter::Constant(w) => {
                let names: Vec<String> = w
                    .iter()
                    .map(|l| {
                        let name = alphabet.constants.name(*l);
                        if l.adjoint {
                            format!("{name}*")
                        } else {
                            name.to_string()
                        }
                    })
                    .collect();
                parts.push(format!("b[{}]", names.join(" ")));
                k += 1;
            }
        }
    }
    parts.join(" ")
}

pub fn format_polynomial(p: &Polynomial, alphabet: &Alphabet) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (idx, (m, c)) in p.terms().enumerate() {
        let negative_real = c.is_real() && c.re().is_negative();
        let shown = if negative_real && idx > 0 { -c } else { c.clone() };
        if idx > 0 {
            out.push_str(if negative_real { " - " } else { " + " });
        }
        if m.is_one() {
            let _ = write!(out, "{shown}");
        } else {
            let _ = write!(out, "{shown}*{}", format_monomial(m, alphabet));
        }
    }
    out
}

pub fn format_tensor(t: &TensorPoly, alphabet: &Alphabet) -> String {
    if t.is_zero() {
        return "0".into();
    }
    t.terms()
        .map(|(key, c)| {
            let slots: Vec<String> = key.iter().map(|m| format_monomial(m, alphabet)).collect();
            format!("{c}*[{}]", slots.join(" (x) "))
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

pub fn parse_polynomial(text: &str, alphabet: &Alphabet) -> Result<Polynomial, ParseError> {
    let mut p = Parser { src: text, pos: 0, alphabet };
    let poly = p.polynomial()?;
    p.skip_ws();
    if p.pos < text.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(poly)
}

pub fn parse_monomial(text: &str, alphabet: &Alphabet) -> Result<Monomial, ParseError> {
    let mut p = Parser { src: text, pos: 0, alphabet };
    p.skip_ws();
    let m = p.monomial()?;
    p.skip_ws();
    if p.pos < text.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(m)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    alphabet: &'a Alphabet,
}

impl Parser<'_> {
    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn token_here(&self) -> String {
        self.rest().split_whitespace().next().unwrap_or("<end>").to_string()
    }

    fn error(&self, message: &str) -> ParseError {
        ParseError { position: self.pos, token: self.token_here(), message: message.into() }
    }

    fn take_while<F: Fn(char) -> bool>(&mut self, f: F) -> &str {
        let start = self.pos;
        let len = self.rest().find(|c| !f(c)).unwrap_or(self.rest().len());
        self.pos += len;
        &self.src[start..start + len]
    }

    fn polynomial(&mut self) -> Result<Polynomial, ParseError> {
        self.skip_ws();
        if self.rest().trim() == "0" {
            self.pos = self.src.len();
            return Ok(Polynomial::zero());
        }
        let mut out = Polynomial::zero();
        let mut sign = Scalar::one();
        if let Some(c @ ('-' | '+')) = self.peek() {
            if c == '-' {
                sign = Scalar::int(-1);
            }
            self.pos += 1;
        }
        loop {
            self.skip_ws();
            let (m, c) = self.term()?;
            out.add_term(m, &sign * &c);
            self.skip_ws();
            match self.peek() {
                None => return Ok(out),
                Some('+') => sign = Scalar::one(),
                Some('-') => sign = Scalar::int(-1),
                Some(_) => return Err(self.error("expected '+' or '-' between terms")),
            }
            self.pos += 1;
        }
    }

    fn starts_coefficient(&self) -> bool {
        let rest = self.rest();
        match rest.chars().next() {
            Some(c) if c.is_ascii_digit() || c == '(' => true,
            Some('i') => !rest[1..].starts_with(|c: char| c.is_ascii_alphanumeric() || c == '_'),
            _ => false,
        }
    }

    fn term(&mut self) -> Result<(Monomial, Scalar), ParseError> {
        if !self.starts_coefficient() {
            return Ok((self.monomial()?, Scalar::one()));
        }
        let coeff = self.coefficient()?;
        self.skip_ws();
        if self.peek() == Some('*') {
            self.pos += 1;
            self.skip_ws();
            Ok((self.monomial()?, coeff))
        } else {
            Ok((Monomial::one(), coeff))
        }
    }

    fn coefficient(&mut self) -> Result<Scalar, ParseError> {
        let start = self.pos;
        let text = if self.peek() == Some('(') {
            match self.rest().find(')') {
                Some(end) => {
                    self.pos += end + 1;
                    &self.src[start..self.pos]
                }
                None => return Err(self.error("unclosed '('")),
            }
        } else {
            self.take_while(|c| c.is_ascii_digit() || c == '/');
            if self.peek() == Some('i') {
                self.pos += 1;
            }
            &self.src[start..self.pos]
        };
        parse_scalar(text).ok_or_else(|| ParseError {
            position: start,
            token: text.to_string(),
            message: "malformed coefficient".into(),
        })
    }

    fn monomial(&mut self) -> Result<Monomial, ParseError> {
        let mut letters = Vec::new();
        let mut factors = 0;
        loop {
            let before = self.pos;
            self.skip_ws();
            match self.peek() {
                None | Some('+') | Some('-') => {
                    self.pos = before;
                    break;
                }
                _ => {}
            }
            if self.pos == before && factors > 0 {
                return Err(self.error("factors must be separated by spaces"));
            }
            self.factor(&mut letters)?;
            factors += 1;
        }
        if factors == 0 {
            return Err(self.error("expected a term"));
        }
        Monomial::reduce_checked(letters, self.alphabet).map_err(|e| self.error(&e.to_string()))
    }

    fn power(&mut self, allow_negative: bool) -> Result<i64, ParseError> {
        if self.peek() != Some('^') {
            return Ok(1);
        }
        self.pos += 1;
        let start = self.pos;
        if allow_negative && self.peek() == Some('-') {
            self.pos += 1;
        }
        self.take_while(|c| c.is_ascii_digit());
        let text = &self.src[start..self.pos];
        match text.parse::<i64>() {
            Ok(0) | Err(_) => {
                Err(ParseError { position: start, token: text.to_string(), message: "bad exponent".into() })
            }
            Ok(n) => Ok(n),
        }
    }

    fn factor(&mut self, letters: &mut Vec<Letter>) -> Result<(), ParseError> {
        let start = self.pos;
        if self.rest().starts_with("b[") {
            self.pos += 2;
            let mut word = Vec::new();
            loop {
                self.skip_ws();
                if self.peek() == Some(']') {
                    self.pos += 1;
                    break;
                }
                if self.peek().is_none() {
                    return Err(self.error("unclosed 'b['"));
                }
                word.push(self.gen_letter()?);
            }
            if word.is_empty() {
                return Err(ParseError { position: start, token: "b[]".into(), message: "empty constant word".into() });
            }
            letters.push(Letter::constant(&word));
            return Ok(());
        }
        if self.peek() == Some('1') && !self.rest()[1..].starts_with(|c: char| c.is_ascii_alphanumeric()) {
            self.pos += 1;
            return Ok(());
        }
        let ident = self.take_while(|c| c.is_ascii_alphanumeric() || c == '_').to_string();
        if ident.is_empty() {
            return Err(self.error("expected a factor"));
        }
        if ident.len() > 1 && ident.starts_with('u') && ident[1..].bytes().all(|b| b.is_ascii_digit()) {
            let index: usize = ident[1..].parse().map_err(|_| ParseError {
                position: start,
                token: ident.clone(),
                message: "bad unitary index".into(),
            })?;
            if index == 0 || index > self.alphabet.unitaries {
                return Err(ParseError {
                    position: start,
                    token: ident,
                    message: format!("unitary index out of range 1..={}", self.alphabet.unitaries),
                });
            }
            let power = self.power(true)?;
            let letter = if power < 0 { Letter::u_inv(index - 1) } else { Letter::u(index - 1) };
            letters.extend(std::iter::repeat_n(letter, power.unsigned_abs() as usize));
            return Ok(());
        }
        self.pos = start;
        let l = self.gen_letter()?;
        let power = self.power(false)?;
        if power < 0 {
            return Err(self.error("constants cannot have negative powers"));
        }
        letters.push(Letter::constant(&vec![l; power as usize]));
        Ok(())
    }

    fn gen_letter(&mut self) -> Result<GenLetter, ParseError> {
        let start = self.pos;
        let name = self.take_while(|c| c.is_ascii_alphanumeric() || c == '_').to_string();
        // after a generator name '*' always means the adjoint
        let adjoint = self.peek() == Some('*');
        if adjoint {
            self.pos += 1;
        }
        self.alphabet.constants.letter(&name, adjoint).map_err(|_| ParseError {
            position: start,
            token: if name.is_empty() { self.token_here() } else { name },
            message: "unknown generator".into(),
        })
    }
}
