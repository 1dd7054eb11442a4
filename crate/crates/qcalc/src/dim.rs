//! Finitely generated free Abelian groups of dimensions.
//!
//! A [`DimBasis`] is an ordered list of named, independent generators; a
//! [`Dimension`] is an integer exponent vector over such a basis. Bases are
//! compared by value (their name lists), so structurally equal systems
//! interoperate regardless of where they were built.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{AlgebraError, ParseError};

/// Ordered basis of a free Abelian group of dimensions.
///
/// Rank 0 (the trivial group) is permitted; its only element is the identity
/// dimension.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DimBasis {
    generators: Vec<String>,
}

impl DimBasis {
    /// Builds a basis from generator names, which must be non-empty and
    /// pairwise distinct.
    pub fn new<I, S>(names: I) -> Result<Arc<DimBasis>, AlgebraError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let generators: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, name) in generators.iter().enumerate() {
            if name.is_empty() {
                return Err(AlgebraError::EmptyGeneratorName);
            }
            if generators[..i].contains(name) {
                return Err(AlgebraError::DuplicateGenerator(name.clone()));
            }
        }
        Ok(Arc::new(DimBasis { generators }))
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    /// Short display form used in error messages.
    pub(crate) fn describe(&self) -> String {
        self.generators.join(" ")
    }
}

/// Checks that two bases are identical by value, the precondition for any
/// binary operation on dimensions or quantities.
pub(crate) fn require_same_basis(a: &Arc<DimBasis>, b: &Arc<DimBasis>) -> Result<(), AlgebraError> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(AlgebraError::BasisMismatch {
            left: a.describe(),
            right: b.describe(),
        })
    }
}

/// An element of the dimension group: one integer exponent per generator.
#[derive(Debug, Clone)]
pub struct Dimension {
    basis: Arc<DimBasis>,
    exponents: Vec<BigInt>,
}

impl PartialEq for Dimension {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.basis, &other.basis) || self.basis == other.basis)
            && self.exponents == other.exponents
    }
}

impl Eq for Dimension {}

impl Dimension {
    pub fn new(basis: &Arc<DimBasis>, exponents: Vec<BigInt>) -> Result<Dimension, AlgebraError> {
        if exponents.len() != basis.rank() {
            return Err(AlgebraError::ExponentCount {
                expected: basis.rank(),
                got: exponents.len(),
            });
        }
        Ok(Dimension {
            basis: Arc::clone(basis),
            exponents,
        })
    }

    /// Convenience constructor from machine integers.
    pub fn from_exponents(
        basis: &Arc<DimBasis>,
        exponents: &[i64],
    ) -> Result<Dimension, AlgebraError> {
        Dimension::new(basis, exponents.iter().map(|&e| BigInt::from(e)).collect())
    }

    /// The identity element (all exponents zero).
    pub fn identity(basis: &Arc<DimBasis>) -> Dimension {
        Dimension {
            basis: Arc::clone(basis),
            exponents: vec![BigInt::zero(); basis.rank()],
        }
    }

    /// The `idx`-th generator as a dimension.
    pub fn generator(basis: &Arc<DimBasis>, idx: usize) -> Dimension {
        assert!(idx < basis.rank(), "generator index out of range");
        let mut exponents = vec![BigInt::zero(); basis.rank()];
        exponents[idx] = BigInt::from(1);
        Dimension {
            basis: Arc::clone(basis),
            exponents,
        }
    }

    pub fn basis(&self) -> &Arc<DimBasis> {
        &self.basis
    }

    pub fn exponents(&self) -> &[BigInt] {
        &self.exponents
    }

    pub fn is_identity(&self) -> bool {
        self.exponents.iter().all(Zero::is_zero)
    }

    /// Group product: componentwise exponent sum.
    pub fn mul(&self, other: &Dimension) -> Result<Dimension, AlgebraError> {
        require_same_basis(&self.basis, &other.basis)?;
        let exponents = self
            .exponents
            .iter()
            .zip(&other.exponents)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Dimension {
            basis: Arc::clone(&self.basis),
            exponents,
        })
    }

    /// Group inverse: componentwise negation.
    pub fn inv(&self) -> Dimension {
        Dimension {
            basis: Arc::clone(&self.basis),
            exponents: self.exponents.iter().map(|e| -e).collect(),
        }
    }

    /// Integer power: componentwise scaling; the zeroth power is the
    /// identity.
    pub fn pow(&self, n: &BigInt) -> Dimension {
        Dimension {
            basis: Arc::clone(&self.basis),
            exponents: self.exponents.iter().map(|e| e * n).collect(),
        }
    }

    pub fn powi(&self, n: i64) -> Dimension {
        self.pow(&BigInt::from(n))
    }

    /// Parses the dimension grammar
    /// `dim := "1" | term (SP term)*; term := NAME ("^" SIGNED_INT)?`
    /// over the given basis. Repeated generators multiply.
    pub fn parse(text: &str, basis: &Arc<DimBasis>) -> Result<Dimension, ParseError> {
        parse_dimension(text, basis, 1)
    }

    pub(crate) fn parse_at(
        text: &str,
        basis: &Arc<DimBasis>,
        line: usize,
    ) -> Result<Dimension, ParseError> {
        parse_dimension(text, basis, line)
    }
}

/// Formats with generators in declaration order, omitting zero exponents and
/// the `^1`; the identity prints as `1`.
impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "1");
        }
        let mut first = true;
        for (name, exp) in self.basis.generators().iter().zip(&self.exponents) {
            if exp.is_zero() {
                continue;
            }
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if exp == &BigInt::from(1) {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{exp}")?;
            }
        }
        Ok(())
    }
}

pub(crate) fn is_valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn parse_dimension(
    text: &str,
    basis: &Arc<DimBasis>,
    line: usize,
) -> Result<Dimension, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut pos = 0usize;
    let skip_ws = |pos: &mut usize| {
        while *pos < chars.len() && chars[*pos].is_whitespace() {
            *pos += 1;
        }
    };

    skip_ws(&mut pos);
    if pos >= chars.len() {
        return Err(ParseError::syntax(line, pos + 1, "empty dimension expression"));
    }

    let mut exponents = vec![BigInt::zero(); basis.rank()];

    if chars[pos] == '1' {
        pos += 1;
        skip_ws(&mut pos);
        if pos < chars.len() {
            return Err(ParseError::syntax(
                line,
                pos + 1,
                "unexpected input after identity dimension `1`",
            ));
        }
        return Ok(Dimension {
            basis: Arc::clone(basis),
            exponents,
        });
    }

    loop {
        let start = pos;
        if pos >= chars.len() || !chars[pos].is_ascii_alphabetic() {
            return Err(ParseError::syntax(line, pos + 1, "expected generator name"));
        }
        while pos < chars.len() && (chars[pos].is_ascii_alphanumeric() || chars[pos] == '_') {
            pos += 1;
        }
        let name: String = chars[start..pos].iter().collect();
        let idx = basis.index_of(&name).ok_or(ParseError::UnknownGenerator {
            line,
            col: start + 1,
            name: name.clone(),
        })?;

        let mut exp = BigInt::from(1);
        if pos < chars.len() && chars[pos] == '^' {
            pos += 1;
            let exp_start = pos;
            if pos < chars.len() && (chars[pos] == '-' || chars[pos] == '+') {
                pos += 1;
            }
            let digits_start = pos;
            while pos < chars.len() && chars[pos].is_ascii_digit() {
                pos += 1;
            }
            if pos == digits_start {
                return Err(ParseError::syntax(
                    line,
                    pos + 1,
                    "expected integer exponent after `^`",
                ));
            }
            let text: String = chars[exp_start..pos].iter().collect();
            exp = text.parse().expect("digits form a valid integer");
        }
        exponents[idx] += exp;

        if pos >= chars.len() {
            break;
        }
        if !chars[pos].is_whitespace() {
            return Err(ParseError::syntax(
                line,
                pos + 1,
                "expected whitespace between dimension terms",
            ));
        }
        skip_ws(&mut pos);
        if pos >= chars.len() {
            break;
        }
    }

    Ok(Dimension {
        basis: Arc::clone(basis),
        exponents,
    })
}
