//! System definition files and quantity expressions.
//!
//! A system file is line-oriented plain text with `#` comments:
//!
//! ```text
//! system NAME
//! dimension NAME                  # order defines the basis
//! unit NAME : DIM_EXPR            # base unit; one per generator
//! unit NAME : DIM_EXPR = QEXPR    # derived unit
//! constant NAME = QEXPR
//! ```
//!
//! Base units define the system's coherent section (value 1 on their
//! generator). Quantity expressions multiply by juxtaposition, support
//! integer powers, reciprocal factors (`/ factor`), parenthesized groups and
//! exact numeric literals (`INT`, `INT.DIGITS`, `INT/POSINT`); top-level `+`
//! and `-` combine terms of one fiber, and mixing fibers is the
//! dimensional-homogeneity error this tool exists to report.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::dim::{is_valid_name, DimBasis, Dimension};
use crate::error::{AlgebraError, ParseError};
use crate::scalar::Scalar;
use crate::section::{Character, Section};
use crate::space::{Quantity, QuantitySpace};

/// A unit declaration: base units carry the value 1 on their generator,
/// derived units an arbitrary nonzero quantity.
#[derive(Debug, Clone)]
pub struct UnitDef {
    pub name: String,
    pub quantity: Quantity,
    pub is_base: bool,
}

/// A named constant: any quantity, zero included.
#[derive(Debug, Clone)]
pub struct ConstantDef {
    pub name: String,
    pub quantity: Quantity,
}

/// A parsed system of units: a dimension basis, the coherent section defined
/// by the base units, and the declared units and constants with their values
/// in coherent (base-unit) terms.
#[derive(Debug, Clone)]
pub struct SystemDef {
    name: String,
    space: QuantitySpace,
    units: Vec<UnitDef>,
    constants: Vec<ConstantDef>,
    by_name: HashMap<String, NameKind>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum NameKind {
    Unit(usize),
    Constant(usize),
}

impl SystemDef {
    pub fn parse(text: &str) -> Result<SystemDef, ParseError> {
        parse_system(text)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn space(&self) -> &QuantitySpace {
        &self.space
    }

    pub fn basis(&self) -> &Arc<DimBasis> {
        self.space.basis()
    }

    pub fn rank(&self) -> usize {
        self.space.rank()
    }

    /// The coherent section defined by the base units: every base unit is
    /// the unit quantity of its generator, so the character is trivial.
    pub fn section(&self) -> Section {
        Section::coherent(Character::trivial(self.basis()))
    }

    pub fn units(&self) -> &[UnitDef] {
        &self.units
    }

    pub fn constants(&self) -> &[ConstantDef] {
        &self.constants
    }

    pub fn lookup(&self, name: &str) -> Option<&Quantity> {
        match self.by_name.get(name)? {
            NameKind::Unit(i) => Some(&self.units[*i].quantity),
            NameKind::Constant(i) => Some(&self.constants[*i].quantity),
        }
    }

    pub fn constant(&self, name: &str) -> Option<&ConstantDef> {
        match self.by_name.get(name)? {
            NameKind::Constant(i) => Some(&self.constants[*i]),
            NameKind::Unit(_) => None,
        }
    }

    /// The base unit name for each generator, in basis order.
    pub fn base_unit_names(&self) -> Vec<&str> {
        let mut names = vec![""; self.rank()];
        for unit in &self.units {
            if unit.is_base {
                let idx = unit
                    .quantity
                    .dim()
                    .exponents()
                    .iter()
                    .position(|e| e == &BigInt::from(1))
                    .expect("base units sit on a single generator");
                names[idx] = &unit.name;
            }
        }
        names
    }

    /// Parses and evaluates a quantity expression against this system.
    pub fn eval_expr(&self, text: &str) -> Result<Quantity, EvalError> {
        let expr = QuantityExpr::parse(text)?;
        expr.eval(self)
    }
}

// ---------------------------------------------------------------------------
// system files
// ---------------------------------------------------------------------------

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn parse_system(text: &str) -> Result<SystemDef, ParseError> {
    let mut system_name: Option<String> = None;
    let mut generator_names: Vec<(String, usize)> = Vec::new();

    // first pass: system header and dimension declarations define the basis
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let (keyword, rest) = split_keyword(line);
        match keyword {
            "system" => {
                let name = expect_name(rest, line_no)?;
                if system_name.is_some() {
                    return Err(ParseError::syntax(
                        line_no,
                        1,
                        "duplicate `system` declaration",
                    ));
                }
                system_name = Some(name);
            }
            "dimension" => {
                let name = expect_name(rest, line_no)?;
                if generator_names.iter().any(|(n, _)| n == &name) {
                    return Err(ParseError::DuplicateName {
                        line: line_no,
                        col: 1,
                        name,
                    });
                }
                generator_names.push((name, line_no));
            }
            "unit" | "constant" => {}
            _ => {
                return Err(ParseError::syntax(
                    line_no,
                    1,
                    format!("unknown declaration `{keyword}`"),
                ));
            }
        }
    }

    let Some(name) = system_name else {
        return Err(ParseError::syntax(1, 1, "missing `system NAME` declaration"));
    };
    let basis = DimBasis::new(generator_names.iter().map(|(n, _)| n.clone()))
        .expect("generator names were validated");
    let space = QuantitySpace::new(&basis);

    let mut sys = SystemDef {
        name,
        space,
        units: Vec::new(),
        constants: Vec::new(),
        by_name: HashMap::new(),
    };
    let mut base_unit_for: Vec<Option<String>> = vec![None; basis.rank()];

    // second pass: units and constants, resolved in declaration order
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let (keyword, rest) = split_keyword(line);
        match keyword {
            "unit" => parse_unit_line(&mut sys, &mut base_unit_for, rest, line_no)?,
            "constant" => parse_constant_line(&mut sys, rest, line_no)?,
            _ => {}
        }
    }

    for (idx, base) in base_unit_for.iter().enumerate() {
        if base.is_none() {
            return Err(ParseError::MissingBaseUnit(
                basis.generators()[idx].clone(),
            ));
        }
    }
    Ok(sys)
}

fn split_keyword(line: &str) -> (&str, &str) {
    match line.find(char::is_whitespace) {
        Some(i) => (&line[..i], line[i..].trim_start()),
        None => (line, ""),
    }
}

fn expect_name(rest: &str, line: usize) -> Result<String, ParseError> {
    let name = rest.trim();
    if !is_valid_name(name) {
        return Err(ParseError::syntax(
            line,
            1,
            format!("expected a name, got `{name}`"),
        ));
    }
    Ok(name.to_string())
}

fn declare(
    sys: &mut SystemDef,
    name: &str,
    kind: NameKind,
    line: usize,
) -> Result<(), ParseError> {
    if sys.by_name.contains_key(name) {
        return Err(ParseError::DuplicateName {
            line,
            col: 1,
            name: name.to_string(),
        });
    }
    sys.by_name.insert(name.to_string(), kind);
    Ok(())
}

fn parse_unit_line(
    sys: &mut SystemDef,
    base_unit_for: &mut [Option<String>],
    rest: &str,
    line: usize,
) -> Result<(), ParseError> {
    let Some((name_part, tail)) = rest.split_once(':') else {
        return Err(ParseError::syntax(
            line,
            1,
            "unit declaration needs `NAME : DIM_EXPR`",
        ));
    };
    let name = expect_name(name_part, line)?;
    if sys.by_name.contains_key(&name) {
        return Err(ParseError::DuplicateName {
            line,
            col: 1,
            name,
        });
    }
    let (dim_text, value_text) = match tail.split_once('=') {
        Some((d, v)) => (d.trim(), Some(v.trim())),
        None => (tail.trim(), None),
    };
    let declared_dim =
        Dimension::parse_at(dim_text, sys.basis(), line)?;

    let quantity = match value_text {
        None => {
            // base unit: a single generator to the first power
            let idx = declared_dim
                .exponents()
                .iter()
                .position(|e| e == &BigInt::from(1));
            let is_simple_generator = match idx {
                Some(i) => declared_dim
                    .exponents()
                    .iter()
                    .enumerate()
                    .all(|(j, e)| j == i || e == &BigInt::from(0)),
                None => false,
            };
            let Some(idx) = idx.filter(|_| is_simple_generator) else {
                return Err(ParseError::syntax(
                    line,
                    1,
                    format!("base unit `{name}` must sit on a single generator"),
                ));
            };
            if let Some(existing) = &base_unit_for[idx] {
                return Err(ParseError::syntax(
                    line,
                    1,
                    format!(
                        "generator `{}` already has base unit `{existing}`",
                        sys.basis().generators()[idx]
                    ),
                ));
            }
            base_unit_for[idx] = Some(name.clone());
            Quantity::new(Scalar::one(), declared_dim)
        }
        Some(value_text) => {
            let expr = QuantityExpr::parse(value_text).map_err(|e| e.at_line(line))?;
            let value = expr.eval(sys).map_err(|e| e.into_parse_at(line))?;
            if *value.dim() != declared_dim {
                return Err(ParseError::DeclaredDimensionMismatch {
                    line,
                    name: name.clone(),
                    declared: declared_dim.to_string(),
                    actual: value.dim().to_string(),
                });
            }
            if value.is_zero() {
                return Err(ParseError::ZeroUnitValue { line, name });
            }
            value
        }
    };

    declare(sys, &name, NameKind::Unit(sys.units.len()), line)?;
    sys.units.push(UnitDef {
        name,
        quantity,
        is_base: value_text.is_none(),
    });
    Ok(())
}

fn parse_constant_line(sys: &mut SystemDef, rest: &str, line: usize) -> Result<(), ParseError> {
    let Some((name_part, value_text)) = rest.split_once('=') else {
        return Err(ParseError::syntax(
            line,
            1,
            "constant declaration needs `NAME = QEXPR`",
        ));
    };
    let name = expect_name(name_part, line)?;
    let expr = QuantityExpr::parse(value_text.trim()).map_err(|e| e.at_line(line))?;
    let quantity = expr.eval(sys).map_err(|e| e.into_parse_at(line))?;
    declare(sys, &name, NameKind::Constant(sys.constants.len()), line)?;
    sys.constants.push(ConstantDef { name, quantity });
    Ok(())
}

// ---------------------------------------------------------------------------
// quantity expressions
// ---------------------------------------------------------------------------

/// Abstract syntax of a quantity expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuantityExpr {
    Number(Scalar),
    /// named unit or constant, with its source column for diagnostics
    Name(String, usize),
    Pow(Box<QuantityExpr>, BigInt),
    Recip(Box<QuantityExpr>),
    Product(Vec<QuantityExpr>),
    /// signed sum of product terms; `true` means subtraction
    Sum(Vec<(bool, QuantityExpr)>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Name(String),
    /// numeric literal; fractions and decimals are exact, and
    /// `integral == false` makes the literal illegal as an exponent
    Number { value: Scalar, integral: bool },
    LParen,
    RParen,
    Caret,
    Slash,
    Plus,
    Minus,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut pos = 0usize;
    while pos < chars.len() {
        let c = chars[pos];
        let col = pos + 1;
        if c.is_whitespace() {
            pos += 1;
            continue;
        }
        match c {
            '(' => {
                out.push(Token { tok: Tok::LParen, col });
                pos += 1;
            }
            ')' => {
                out.push(Token { tok: Tok::RParen, col });
                pos += 1;
            }
            '^' => {
                out.push(Token { tok: Tok::Caret, col });
                pos += 1;
            }
            '/' => {
                out.push(Token { tok: Tok::Slash, col });
                pos += 1;
            }
            '+' => {
                out.push(Token { tok: Tok::Plus, col });
                pos += 1;
            }
            '-' => {
                out.push(Token { tok: Tok::Minus, col });
                pos += 1;
            }
            _ if c.is_ascii_digit() => {
                let start = pos;
                while pos < chars.len() && chars[pos].is_ascii_digit() {
                    pos += 1;
                }
                let mut integral = true;
                // glue `.DIGITS` or `/DIGITS` when immediately adjacent
                if pos < chars.len()
                    && (chars[pos] == '.' || chars[pos] == '/')
                    && pos + 1 < chars.len()
                    && chars[pos + 1].is_ascii_digit()
                {
                    integral = false;
                    pos += 1;
                    while pos < chars.len() && chars[pos].is_ascii_digit() {
                        pos += 1;
                    }
                }
                let text: String = chars[start..pos].iter().collect();
                let value: Scalar = text.parse().map_err(|_| {
                    ParseError::syntax(1, col, format!("invalid number `{text}`"))
                })?;
                out.push(Token {
                    tok: Tok::Number { value, integral },
                    col,
                });
            }
            _ if c.is_ascii_alphabetic() => {
                let start = pos;
                while pos < chars.len()
                    && (chars[pos].is_ascii_alphanumeric() || chars[pos] == '_')
                {
                    pos += 1;
                }
                let name: String = chars[start..pos].iter().collect();
                out.push(Token {
                    tok: Tok::Name(name),
                    col,
                });
            }
            _ => {
                return Err(ParseError::syntax(
                    1,
                    col,
                    format!("unexpected character `{c}`"),
                ));
            }
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn col(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|t| t.col)
            .unwrap_or_else(|| self.tokens.last().map(|t| t.col + 1).unwrap_or(1))
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    // sum := product (("+" | "-") product)*
    fn parse_sum(&mut self) -> Result<QuantityExpr, ParseError> {
        let first = self.parse_product()?;
        let mut terms = vec![(false, first)];
        while let Some(op) = self.peek() {
            let negate = match op {
                Tok::Plus => false,
                Tok::Minus => true,
                _ => break,
            };
            self.bump();
            let term = self.parse_product()?;
            terms.push((negate, term));
        }
        if terms.len() == 1 {
            Ok(terms.pop().expect("one term").1)
        } else {
            Ok(QuantityExpr::Sum(terms))
        }
    }

    // product := NUMBER factor* | factor+
    fn parse_product(&mut self) -> Result<QuantityExpr, ParseError> {
        let mut factors = Vec::new();
        if let Some(Tok::Number { value, integral: _ }) = self.peek() {
            let value = value.clone();
            self.bump();
            factors.push(QuantityExpr::Number(value));
        }
        while let Some(tok) = self.peek() {
            match tok {
                Tok::Name(_) | Tok::LParen | Tok::Slash => {
                    let f = self.parse_factor()?;
                    factors.push(f);
                }
                _ => break,
            }
        }
        if factors.is_empty() {
            return Err(ParseError::syntax(
                1,
                self.col(),
                "expected a number, name or parenthesized expression",
            ));
        }
        if factors.len() == 1 {
            Ok(factors.pop().expect("one factor"))
        } else {
            Ok(QuantityExpr::Product(factors))
        }
    }

    // factor := NAME ("^" SIGNED_INT)? | "(" sum ")" ("^" SIGNED_INT)? | "/" factor
    fn parse_factor(&mut self) -> Result<QuantityExpr, ParseError> {
        let col = self.col();
        match self.bump().map(|t| t.tok) {
            Some(Tok::Name(name)) => {
                let base = QuantityExpr::Name(name, col);
                self.maybe_power(base)
            }
            Some(Tok::LParen) => {
                let inner = self.parse_sum()?;
                match self.bump().map(|t| t.tok) {
                    Some(Tok::RParen) => {}
                    _ => {
                        return Err(ParseError::syntax(1, self.col(), "expected `)`"));
                    }
                }
                self.maybe_power(inner)
            }
            Some(Tok::Slash) => {
                let inner = self.parse_factor()?;
                Ok(QuantityExpr::Recip(Box::new(inner)))
            }
            _ => Err(ParseError::syntax(
                1,
                col,
                "expected a name, `(` or `/`",
            )),
        }
    }

    fn maybe_power(&mut self, base: QuantityExpr) -> Result<QuantityExpr, ParseError> {
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.bump();
        let exp = self.parse_exponent()?;
        Ok(QuantityExpr::Pow(Box::new(base), exp))
    }

    // SIGNED_INT, with a dedicated diagnostic for fractional exponents like
    // `^(1/2)` or `^1/2`
    fn parse_exponent(&mut self) -> Result<BigInt, ParseError> {
        let col = self.col();
        let parenthesized = self.peek() == Some(&Tok::LParen);
        if parenthesized {
            self.bump();
        }
        let mut negate = false;
        match self.peek() {
            Some(Tok::Minus) => {
                negate = true;
                self.bump();
            }
            Some(Tok::Plus) => {
                self.bump();
            }
            _ => {}
        }
        let exp = match self.bump().map(|t| t.tok) {
            Some(Tok::Number { value, integral }) => {
                if !integral || !value.is_integer() {
                    return Err(ParseError::NonIntegerExponent { line: 1, col });
                }
                value.numer().clone()
            }
            _ => {
                return Err(ParseError::syntax(
                    1,
                    col,
                    "expected integer exponent after `^`",
                ));
            }
        };
        if parenthesized {
            // the grammar takes a bare signed integer here; a parenthesized
            // fraction is the classic fractional-exponent mistake
            match self.bump().map(|t| t.tok) {
                Some(Tok::RParen) => {
                    return Err(ParseError::syntax(
                        1,
                        col,
                        "exponent must be a bare signed integer, without parentheses",
                    ));
                }
                Some(Tok::Slash) => {
                    return Err(ParseError::NonIntegerExponent { line: 1, col });
                }
                _ => {
                    return Err(ParseError::syntax(1, col, "malformed exponent"));
                }
            }
        }
        Ok(if negate { -exp } else { exp })
    }
}

impl QuantityExpr {
    /// Parses an expression; positions in errors are 1-based columns on
    /// line 1.
    pub fn parse(text: &str) -> Result<QuantityExpr, ParseError> {
        let tokens = lex(text)?;
        if tokens.is_empty() {
            return Err(ParseError::syntax(1, 1, "empty expression"));
        }
        let mut parser = Parser { tokens, pos: 0 };
        let expr = parser.parse_sum()?;
        if parser.pos != parser.tokens.len() {
            return Err(ParseError::syntax(
                1,
                parser.col(),
                "unexpected trailing input",
            ));
        }
        Ok(expr)
    }

    /// Evaluates against a system; names resolve to units and constants.
    pub fn eval(&self, sys: &SystemDef) -> Result<Quantity, EvalError> {
        match self {
            QuantityExpr::Number(value) => {
                Ok(Quantity::new(value.clone(), Dimension::identity(sys.basis())))
            }
            QuantityExpr::Name(name, col) => {
                sys.lookup(name).cloned().ok_or_else(|| {
                    ParseError::UnknownName {
                        line: 1,
                        col: *col,
                        name: name.clone(),
                    }
                    .into()
                })
            }
            QuantityExpr::Pow(base, exp) => {
                let base = base.eval(sys)?;
                let exp_i64 = i64::try_from(exp).map_err(|_| {
                    EvalError::from(ParseError::syntax(1, 1, "exponent too large to evaluate"))
                })?;
                Ok(base.powi(exp_i64)?)
            }
            QuantityExpr::Recip(inner) => Ok(inner.eval(sys)?.inv()?),
            QuantityExpr::Product(factors) => {
                let mut acc = Quantity::new(Scalar::one(), Dimension::identity(sys.basis()));
                for f in factors {
                    acc = acc.mul(&f.eval(sys)?)?;
                }
                Ok(acc)
            }
            QuantityExpr::Sum(terms) => {
                let mut acc: Option<Quantity> = None;
                for (negate, term) in terms {
                    let mut value = term.eval(sys)?;
                    if *negate {
                        value = value.scale(&-Scalar::one());
                    }
                    acc = Some(match acc {
                        None => value,
                        Some(a) => a.add(&value)?,
                    });
                }
                Ok(acc.expect("sums have at least one term"))
            }
        }
    }
}

/// Expression evaluation can fail syntactically or algebraically (a fiber
/// mismatch in a sum, inverting a zero). The two kinds stay separate so the
/// CLI can map them to different exit codes.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

impl EvalError {
    /// Inside a system file every failure is a file problem; algebra errors
    /// are reported as syntax errors at the offending line.
    fn into_parse_at(self, line: usize) -> ParseError {
        match self {
            EvalError::Parse(p) => p.at_line(line),
            EvalError::Algebra(a) => ParseError::syntax(line, 1, a.to_string()),
        }
    }
}
