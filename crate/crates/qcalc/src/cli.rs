//! Command implementations behind the `qc` binary.
//!
//! Reports are plain deterministic text; exact rationals are always printed
//! and a 15-significant-digit decimal approximation is appended in
//! parentheses when the value is not an integer. Exit codes: 0 success,
//! 1 dimension/fiber error, 2 parse error, 3 algebraic rejection
//! (torsion or conflicting section values).

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::construct::{section_through, QuotientSpace, Subsection};
use crate::dim::{DimBasis, Dimension};
use crate::error::{AlgebraError, ParseError};
use crate::hom::{classify, ClassificationResult};
use crate::lattice::Subgroup;
use crate::scalar::Scalar;
use crate::section::convert;
use crate::space::Quantity;
use crate::system::{EvalError, SystemDef};

const DECIMAL_DIGITS: usize = 15;

/// Failure modes of the command layer, partitioned by exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// exit 2
    Parse(ParseError),
    /// exit 1
    Dimension(AlgebraError),
    /// exit 3
    Rejected(AlgebraError),
    /// exit 2
    Usage(String),
    /// exit 2
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Dimension(_) => 1,
            CliError::Parse(_) | CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Rejected(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(e) => write!(f, "{e}"),
            CliError::Dimension(e) | CliError::Rejected(e) => write!(f, "{e}"),
            CliError::Usage(msg) | CliError::Io(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> CliError {
        CliError::Parse(e)
    }
}

impl From<AlgebraError> for CliError {
    fn from(e: AlgebraError) -> CliError {
        match e {
            AlgebraError::FiberMismatch { .. } | AlgebraError::BasisMismatch { .. } => {
                CliError::Dimension(e)
            }
            _ => CliError::Rejected(e),
        }
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> CliError {
        match e {
            EvalError::Parse(p) => CliError::Parse(p),
            EvalError::Algebra(a) => a.into(),
        }
    }
}

/// Exact value, with a decimal approximation appended when it is not an
/// integer.
pub fn fmt_value(value: &Scalar) -> String {
    if value.is_integer() {
        value.to_string()
    } else {
        format!("{value} (~{})", value.decimal_string(DECIMAL_DIGITS))
    }
}

/// `VALUE DIM` with the approximation, if any, at the end of the line.
fn fmt_quantity(q: &Quantity) -> String {
    if q.value().is_integer() {
        format!("{} {}", q.value(), q.dim())
    } else {
        format!(
            "{} {} (~{})",
            q.value(),
            q.dim(),
            q.value().decimal_string(DECIMAL_DIGITS)
        )
    }
}

/// `qc info`: name, rank, generators, units and constants with dimensions
/// and coherent values.
pub fn info_report(sys: &SystemDef) -> String {
    let mut out = String::new();
    out.push_str(&format!("system {}\n", sys.name()));
    out.push_str(&format!("rank {}\n", sys.rank()));
    if sys.rank() == 0 {
        out.push_str("generators: (none)\n");
    } else {
        out.push_str(&format!(
            "generators: {}\n",
            sys.basis().generators().join(" ")
        ));
    }
    for unit in sys.units() {
        out.push_str(&format!(
            "unit {} : {} = {}\n",
            unit.name,
            unit.quantity.dim(),
            fmt_value(unit.quantity.value())
        ));
    }
    for constant in sys.constants() {
        out.push_str(&format!(
            "constant {} : {} = {}\n",
            constant.name,
            constant.quantity.dim(),
            fmt_value(constant.quantity.value())
        ));
    }
    out
}

/// `qc check`: the dimension of the expression.
pub fn check_report(sys: &SystemDef, expr: &str) -> Result<String, CliError> {
    let q = sys.eval_expr(expr)?;
    Ok(format!("{}\n", q.dim()))
}

/// `qc eval`: exact value and dimension in coherent units.
pub fn eval_report(sys: &SystemDef, expr: &str) -> Result<String, CliError> {
    let q = sys.eval_expr(expr)?;
    Ok(format!("{}\n", fmt_quantity(&q)))
}

/// `qc convert`: the exact factor expressing the quantity in the target
/// unit.
pub fn convert_report(sys: &SystemDef, expr: &str, target: &str) -> Result<String, CliError> {
    let q = sys.eval_expr(expr)?;
    let unit = sys.eval_expr(target)?;
    let factor = convert(&q, &unit)?;
    Ok(format!("{}\n", fmt_value(&factor)))
}

/// `qc iso`: rank-based classification with the witness's generator
/// correspondence.
pub fn iso_report(left: &SystemDef, right: &SystemDef) -> String {
    match classify(left.space(), right.space()) {
        ClassificationResult::Isomorphic { iso, .. } => {
            let mut out = format!("Isomorphic (rank {})\n", left.rank());
            for (i, name) in left.basis().generators().iter().enumerate() {
                let image = Dimension::new(
                    right.basis(),
                    iso.induced().row_vec(i),
                )
                .expect("witness rows live in the right basis");
                out.push_str(&format!("  {name} -> {image}\n"));
            }
            out
        }
        ClassificationResult::NotIsomorphic {
            rank_left,
            rank_right,
        } => format!("NotIsomorphic (rank {rank_left} vs rank {rank_right})\n"),
    }
}

/// Result of a natural-unit reduction: the human-readable mapping report and
/// the quotient system as a parseable system file.
#[derive(Debug, Clone)]
pub struct ReduceOutput {
    pub report: String,
    pub system_text: String,
}

/// `qc reduce`: quotient the system by the subsection generated by the named
/// constants (with their coherent values), emitting the reduced system and
/// the dimension-class mapping.
pub fn reduce_system(sys: &SystemDef, kill: &[String]) -> Result<ReduceOutput, CliError> {
    // gather the constants to kill
    let mut gens: Vec<Dimension> = Vec::new();
    let mut values: Vec<Scalar> = Vec::new();
    for name in kill {
        let Some(def) = sys.constant(name) else {
            return Err(if sys.lookup(name).is_some() {
                CliError::Usage(format!("`{name}` is a unit, not a constant"))
            } else {
                CliError::Usage(format!("unknown constant `{name}`"))
            });
        };
        if def.quantity.is_zero() {
            return Err(CliError::Rejected(AlgebraError::ZeroSectionValue));
        }
        gens.push(def.quantity.dim().clone());
        values.push(def.quantity.value().clone());
    }

    let subgroup = Subgroup::new(sys.basis(), &gens)?;
    let section = section_through(&subgroup, &values).map_err(cli_reject)?;
    let subsection = Subsection::new(section, subgroup)?;
    let quotient = QuotientSpace::new(sys.space(), subsection).map_err(cli_reject)?;

    // emitted generator names: unit-vector classes keep their original
    // generator name, anything else gets a fresh synthetic name
    let complement = quotient.structure().complement_rows();
    let mut taken: HashSet<String> = sys.basis().generators().iter().cloned().collect();
    let mut gen_names: Vec<String> = Vec::new();
    let mut base_names: Vec<String> = Vec::new();
    let original_base = sys.base_unit_names();
    let mut name_pool: HashSet<String> = sys
        .units()
        .iter()
        .map(|u| u.name.clone())
        .chain(sys.constants().iter().map(|c| c.name.clone()))
        .collect();
    for (i, row) in complement.iter().enumerate() {
        let unit_vector = row
            .iter()
            .position(|e| e.is_one())
            .filter(|&j| row.iter().enumerate().all(|(k, e)| k == j || e.is_zero()));
        let (gen, base) = match unit_vector {
            Some(j) => (
                sys.basis().generators()[j].clone(),
                original_base[j].to_string(),
            ),
            None => {
                let gen = fresh_name("q", i + 1, &taken);
                let base = fresh_name("u", i + 1, &name_pool);
                (gen, base)
            }
        };
        taken.insert(gen.clone());
        name_pool.insert(base.clone());
        gen_names.push(gen);
        base_names.push(base);
    }
    let report_basis = DimBasis::new(gen_names.clone()).expect("fresh names are distinct");

    // mapping report
    let mut report = String::new();
    report.push_str(&format!(
        "reduced rank {} (from rank {})\n",
        quotient.quotient_space().rank(),
        sys.rank()
    ));
    if kill.is_empty() {
        report.push_str("killed: (none)\n");
    } else {
        report.push_str(&format!("killed: {}\n", kill.join(", ")));
    }
    if sys.rank() > 0 {
        report.push_str("generator classes:\n");
        for (j, name) in sys.basis().generators().iter().enumerate() {
            let class = quotient
                .project_dim(&Dimension::generator(sys.basis(), j))
                .expect("generators project");
            let renamed = Dimension::new(&report_basis, class.exponents().to_vec())
                .expect("quotient coordinates fit the report basis");
            report.push_str(&format!("  {name} -> {renamed}\n"));
        }
    }
    if !sys.constants().is_empty() {
        report.push_str("constant classes:\n");
        for c in sys.constants() {
            let reduced = quotient.reduce(&c.quantity).expect("same basis");
            let renamed = Dimension::new(&report_basis, reduced.dim().exponents().to_vec())
                .expect("quotient coordinates fit the report basis");
            let rendered = if renamed.is_identity() {
                fmt_value(reduced.value())
            } else {
                fmt_quantity(&Quantity::new(reduced.value().clone(), renamed))
            };
            report.push_str(&format!("  {} -> {}\n", c.name, rendered));
        }
    }

    // emitted system file
    let mut text = String::new();
    text.push_str(&format!(
        "# reduced from {} (killed: {})\n",
        sys.name(),
        if kill.is_empty() {
            "nothing".to_string()
        } else {
            kill.join(", ")
        }
    ));
    text.push_str(&format!("system {}_reduced\n", sys.name()));
    for gen in &gen_names {
        text.push_str(&format!("dimension {gen}\n"));
    }
    for (gen, base) in gen_names.iter().zip(&base_names) {
        text.push_str(&format!("unit {base} : {gen}\n"));
    }
    for unit in sys.units() {
        if base_names.contains(&unit.name) {
            continue; // already serves as a base unit of the quotient
        }
        let reduced = quotient.reduce(&unit.quantity).expect("same basis");
        let dim = Dimension::new(&report_basis, reduced.dim().exponents().to_vec())
            .expect("quotient coordinates fit the report basis");
        text.push_str(&format!(
            "unit {} : {} = {}\n",
            unit.name,
            dim,
            emit_qexpr(reduced.value(), dim.exponents(), &base_names)
        ));
    }
    for c in sys.constants() {
        let reduced = quotient.reduce(&c.quantity).expect("same basis");
        text.push_str(&format!(
            "constant {} = {}\n",
            c.name,
            emit_qexpr(reduced.value(), reduced.dim().exponents(), &base_names)
        ));
    }

    Ok(ReduceOutput {
        report,
        system_text: text,
    })
}

fn cli_reject(e: AlgebraError) -> CliError {
    CliError::Rejected(e)
}

fn fresh_name(prefix: &str, idx: usize, taken: &HashSet<String>) -> String {
    let mut candidate = format!("{prefix}{idx}");
    while taken.contains(&candidate) {
        candidate.push('_');
    }
    candidate
}

/// Renders a quantity as a parseable expression over the given base units.
/// Negative values use a zero-first subtraction because numeric literals are
/// unsigned in the grammar.
fn emit_qexpr(value: &Scalar, exps: &[BigInt], base_names: &[String]) -> String {
    let mut unit_product = String::new();
    for (name, e) in base_names.iter().zip(exps) {
        if e.is_zero() {
            continue;
        }
        if !unit_product.is_empty() {
            unit_product.push(' ');
        }
        if e.is_one() {
            unit_product.push_str(name);
        } else {
            unit_product.push_str(&format!("{name}^{e}"));
        }
    }
    let magnitude = value.abs().to_string();
    let positive = if unit_product.is_empty() {
        magnitude
    } else {
        format!("{magnitude} {unit_product}")
    };
    if value.is_negative() {
        if unit_product.is_empty() {
            format!("0 - {positive}")
        } else {
            format!("0 {unit_product} - {positive}")
        }
    } else {
        positive
    }
}
