//! Exported forms of a computed class: JSON records, CSV tables and LaTeX,
//! plus the parsers that read them back.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::basis::{
    canonicalize, identified_pairs, Ambient, BasisElement, BasisError, DivisorExpression, View,
};
use crate::exactlin::{JsonInt, Rational};
use crate::families::Target;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Description of the term order used in every record.
pub const BASIS_ORDERING: &str =
    "psi*, eta_irr, delta_i_m by (i, m), eta_j_m by (j, m), delta_0_2; m in 0 < 1 < 1a < 1b < 2";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OutputError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("line {line}: {message}")]
    Csv { line: usize, message: String },
    #[error("invalid record: {0}")]
    Invalid(String),
    #[error(transparent)]
    Basis(#[from] BasisError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermRecord {
    pub class: String,
    pub num: JsonInt,
    pub den: JsonInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    pub tool_version: String,
    pub basis_ordering: String,
    /// Pairs `representative=other` of labels naming the same divisor.
    pub identified: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputRecord {
    pub genus: u32,
    pub divisor: Target,
    pub view: View,
    pub terms: Vec<TermRecord>,
    pub metadata: Metadata,
}

pub fn identified_names(amb: Ambient) -> Vec<String> {
    identified_pairs(amb)
        .into_iter()
        .map(|(rep, other)| format!("{}={}", rep.name(amb.marks()), other.name(amb.marks())))
        .collect()
}

impl OutputRecord {
    pub fn from_expression(target: Target, expr: &DivisorExpression) -> Self {
        let amb = expr.ambient();
        OutputRecord {
            genus: amb.genus(),
            divisor: target,
            view: expr.view(),
            terms: expr
                .terms()
                .map(|(e, v)| TermRecord {
                    class: e.name(amb.marks()),
                    num: JsonInt(v.numer().clone()),
                    den: JsonInt(v.denom().clone()),
                })
                .collect(),
            metadata: Metadata {
                tool_version: TOOL_VERSION.to_string(),
                basis_ordering: BASIS_ORDERING.to_string(),
                identified: identified_names(amb),
            },
        }
    }

    /// Rebuilds the expression, checking every invariant a rendered record
    /// satisfies: known labels in range, strictly increasing basis order,
    /// reduced fractions with positive denominators, no zero terms, and only
    /// representatives in the canonical view.
    pub fn to_expression(&self) -> Result<DivisorExpression, OutputError> {
        let amb = self.divisor.ambient(self.genus)?;
        let mut expr = DivisorExpression::new(amb, self.view);
        let mut previous: Option<BasisElement> = None;
        for t in &self.terms {
            let e = BasisElement::parse(&t.class, amb.marks())?;
            e.check(amb, false)?;
            if self.view == View::Canonical && canonicalize(e, amb)? != e {
                return Err(OutputError::Invalid(format!(
                    "{} is not a representative in the canonical view",
                    t.class
                )));
            }
            if previous.is_some_and(|p| p >= e) {
                return Err(OutputError::Invalid(format!(
                    "{} is out of basis order",
                    t.class
                )));
            }
            previous = Some(e);
            let v = Rational::from_reduced(t.num.0.clone(), t.den.0.clone())
                .map_err(OutputError::Invalid)?;
            if v.is_zero() {
                return Err(OutputError::Invalid(format!(
                    "{} has a zero coefficient",
                    t.class
                )));
            }
            expr.add_term(e, &v)?;
        }
        Ok(expr)
    }
}

pub fn render_json(record: &OutputRecord) -> String {
    serde_json::to_string_pretty(record).expect("records serialize")
}

/// Parses and validates one record.
pub fn parse_json(text: &str) -> Result<OutputRecord, OutputError> {
    let record: OutputRecord =
        serde_json::from_str(text).map_err(|e| OutputError::Json(e.to_string()))?;
    record.to_expression()?;
    Ok(record)
}

pub const CSV_HEADER: &str = "class,numerator,denominator";

pub fn render_csv(expr: &DivisorExpression) -> String {
    let marks = expr.ambient().marks();
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for (e, v) in expr.terms() {
        let _ = writeln!(out, "{},{},{}", e.name(marks), v.numer(), v.denom());
    }
    out
}

/// Reads a table written by [`render_csv`] into `(class, value)` rows.
/// Class names are checked for shape against `marks`.
pub fn parse_csv(text: &str, marks: u8) -> Result<Vec<(String, Rational)>, OutputError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim_end_matches('\r') == CSV_HEADER => {}
        _ => {
            return Err(OutputError::Csv {
                line: 1,
                message: format!("expected header {CSV_HEADER:?}"),
            })
        }
    }
    let mut rows = Vec::new();
    for (k, raw) in lines {
        let line = k + 1;
        let raw = raw.trim_end_matches('\r');
        if raw.is_empty() {
            continue;
        }
        let err = |message: String| OutputError::Csv { line, message };
        let fields: Vec<&str> = raw.split(',').collect();
        let [class, num, den] = fields[..] else {
            return Err(err(format!("expected 3 fields, got {}", fields.len())));
        };
        BasisElement::parse(class, marks).map_err(|e| err(e.to_string()))?;
        let parse_int = |s: &str| -> Result<num_bigint::BigInt, OutputError> {
            let digits = s.strip_prefix('-').unwrap_or(s);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(err(format!("not an integer: {s:?}")));
            }
            s.parse().map_err(|_| err(format!("not an integer: {s:?}")))
        };
        let v = Rational::from_reduced(parse_int(num)?, parse_int(den)?).map_err(err)?;
        rows.push((class.to_string(), v));
    }
    Ok(rows)
}

fn latex_label(e: BasisElement) -> String {
    use crate::basis::Marking::*;
    let m = |m| match m {
        Zero => "0",
        One => "1",
        OneA => "1a",
        OneB => "1b",
        Two => "2",
    };
    match e {
        BasisElement::Psi(k) => format!("\\psi_{k}"),
        BasisElement::EtaIrr => "\\eta_{irr}".to_string(),
        BasisElement::DeltaZeroTwo => "\\delta_{0,2}".to_string(),
        BasisElement::Delta(i, mk) => format!("\\delta_{{{i},{}}}", m(mk)),
        BasisElement::Eta(i, mk) => format!("\\eta_{{{i},{}}}", m(mk)),
    }
}

fn latex_coefficient(v: &Rational, first: bool) -> String {
    let sign = match (v.is_negative(), first) {
        (true, true) => "-",
        (true, false) => " - ",
        (false, true) => "",
        (false, false) => " + ",
    };
    let a = v.abs();
    let body = if a.is_integer() {
        if a == Rational::one() {
            String::new()
        } else {
            a.to_string()
        }
    } else {
        format!("\\frac{{{}}}{{{}}}", a.numer(), a.denom())
    };
    format!("{sign}{body}")
}

/// One displayed equation. Equal coefficients on ψ₁, ψ₂ and on the `1a`/`1b`
/// halves are printed once against the invariant sum.
pub fn render_latex(target: Target, expr: &DivisorExpression) -> String {
    use crate::basis::Marking::*;
    let amb = expr.ambient();
    let mut groups: Vec<(Rational, String)> = Vec::new();
    let mut skip = std::collections::BTreeSet::new();
    // The displayed formulas put δ_{0,2} right after η_irr.
    let mut terms: Vec<(&BasisElement, &Rational)> = expr.terms().collect();
    terms.sort_by_key(|(e, _)| {
        (
            !matches!(
                e,
                BasisElement::Psi(_) | BasisElement::EtaIrr | BasisElement::DeltaZeroTwo
            ),
            **e == BasisElement::DeltaZeroTwo,
        )
    });
    for (e, v) in terms {
        if skip.contains(e) {
            continue;
        }
        let partner = match *e {
            BasisElement::Psi(1) if amb.marks() == 2 => {
                Some((BasisElement::Psi(2), "(\\psi_1 + \\psi_2)".to_string()))
            }
            BasisElement::Delta(i, OneA) => Some((
                BasisElement::Delta(i, OneB),
                latex_label(BasisElement::Delta(i, One)),
            )),
            BasisElement::Eta(i, OneA) => Some((
                BasisElement::Eta(i, OneB),
                latex_label(BasisElement::Eta(i, One)),
            )),
            _ => None,
        };
        match partner {
            Some((p, joint)) if expr.coefficient(&p) == *v => {
                skip.insert(p);
                groups.push((v.clone(), joint));
            }
            _ => {
                let label = match e {
                    BasisElement::Psi(1) if amb.marks() == 1 => "\\psi".to_string(),
                    other => latex_label(*other),
                };
                groups.push((v.clone(), label));
            }
        }
    }
    let lhs = match target {
        Target::Weierstrass => format!("[\\overline{{\\mathcal{{H}}}}_{{{},w}}]", amb.genus()),
        Target::G12 => format!("[\\overline{{\\mathcal{{H}}}}_{{{},g^1_2}}]", amb.genus()),
    };
    let mut rhs = String::new();
    for (k, (v, label)) in groups.iter().enumerate() {
        rhs.push_str(&latex_coefficient(v, k == 0));
        rhs.push_str(label);
    }
    if rhs.is_empty() {
        rhs.push('0');
    }
    let identified = identified_names(amb);
    let note = if expr.view() == View::Formal && !identified.is_empty() {
        format!("% formal view; identified labels: {}\n", identified.join(", "))
    } else {
        String::new()
    };
    format!("{note}\\[\n{lhs} = {rhs}\n\\]\n")
}

/// An inclusive genus range written `A..B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenusRange {
    pub start: u32,
    pub end: u32,
}

impl FromStr for GenusRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, b) = s
            .split_once("..")
            .ok_or_else(|| format!("expected A..B, got {s:?}"))?;
        let parse = |t: &str| -> Result<u32, String> {
            if t.is_empty() || !t.bytes().all(|c| c.is_ascii_digit()) {
                return Err(format!("not a genus: {t:?}"));
            }
            t.parse().map_err(|_| format!("genus out of range: {t:?}"))
        };
        let (start, end) = (parse(a)?, parse(b)?);
        if start < 2 {
            return Err(format!("genus must be at least 2, got {start}"));
        }
        if start > end {
            return Err(format!("empty range {start}..{end}"));
        }
        Ok(GenusRange { start, end })
    }
}
