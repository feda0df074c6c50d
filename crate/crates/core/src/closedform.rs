//! The closed formulas for both classes, and their term-by-term comparison
//! with the solver.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basis::{Ambient, BasisElement, DivisorExpression, Marking, View};
use crate::exactlin::Rational;
use crate::families::Target;
use crate::solver::solve_coefficients;

fn q(n: i64, d: i64) -> Rational {
    Rational::frac(n, d)
}

fn put(expr: &mut DivisorExpression, e: BasisElement, v: Rational) {
    expr.add_term(e, &v).expect("closed-form label in range");
}

/// Class of the Weierstrass divisor on the one-pointed stack, formal view.
pub fn hgw_closed_form(genus: u32) -> DivisorExpression {
    let amb = Ambient::new(genus, 1).expect("genus at least 2");
    let g = i64::from(genus);
    let den = (g - 1) * (2 * g + 1);
    let mut expr = DivisorExpression::new(amb, View::Formal);
    put(&mut expr, BasisElement::Psi(1), q(g + 1, g - 1));
    put(&mut expr, BasisElement::EtaIrr, q(-1, 2 * den));
    for i in 1..=amb.max_delta() {
        let (s, k) = (i64::from(i), g - i64::from(i));
        put(
            &mut expr,
            BasisElement::Delta(i, Marking::Zero),
            q(-2 * s * (2 * s + 1), den),
        );
        put(
            &mut expr,
            BasisElement::Delta(i, Marking::One),
            q(-2 * k * (2 * k + 1), den),
        );
    }
    for i in 1..=amb.max_eta() {
        let (s, k) = (i64::from(i), g - i64::from(i));
        put(
            &mut expr,
            BasisElement::Eta(i, Marking::Zero),
            q(-(s + 1) * (2 * s + 1), den),
        );
        put(
            &mut expr,
            BasisElement::Eta(i, Marking::One),
            q(-k * (2 * k - 1), den),
        );
    }
    expr
}

/// Class of the g¹₂ divisor on the two-pointed stack, formal view with the
/// invariant `1` labels expanded.
pub fn hg12_closed_form(genus: u32) -> DivisorExpression {
    let amb = Ambient::new(genus, 2).expect("genus at least 2");
    let g = i64::from(genus);
    let den = (g - 1) * (2 * g + 1);
    let mut expr = DivisorExpression::new(amb, View::Formal);
    put(&mut expr, BasisElement::Psi(1), q(1, g - 1));
    put(&mut expr, BasisElement::Psi(2), q(1, g - 1));
    put(&mut expr, BasisElement::EtaIrr, q(-1, 2 * den));
    put(&mut expr, BasisElement::DeltaZeroTwo, q(-(g + 1), g - 1));
    for i in 1..=amb.max_delta() {
        let (s, k) = (i64::from(i), g - i64::from(i));
        put(
            &mut expr,
            BasisElement::Delta(i, Marking::Zero),
            q(-2 * s * (2 * s + 1), den),
        );
        put(
            &mut expr,
            BasisElement::Delta(i, Marking::One),
            q((2 * s - 1) * (2 * k - 1) - 2, den),
        );
        put(
            &mut expr,
            BasisElement::Delta(i, Marking::Two),
            q(-2 * k * (2 * k + 1), den),
        );
    }
    for i in 1..=amb.max_eta() {
        let (s, k) = (i64::from(i), g - i64::from(i));
        put(
            &mut expr,
            BasisElement::Eta(i, Marking::Zero),
            q(-(s + 1) * (2 * s + 1), den),
        );
        put(
            &mut expr,
            BasisElement::Eta(i, Marking::One),
            q(2 * s * (k - 1) - 1, den),
        );
        put(
            &mut expr,
            BasisElement::Eta(i, Marking::Two),
            q(-k * (2 * k - 1), den),
        );
    }
    expr
}

pub fn closed_form(target: Target, genus: u32) -> DivisorExpression {
    match target {
        Target::Weierstrass => hgw_closed_form(genus),
        Target::G12 => hg12_closed_form(genus),
    }
}

/// A deliberate corruption of the closed form, for exercising failure paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Adds 1 to every ψ coefficient.
    PsiOffset,
}

fn apply_fault(expr: &mut DivisorExpression, fault: Fault) {
    match fault {
        Fault::PsiOffset => {
            for k in 1..=expr.ambient().marks() {
                expr.add_term(BasisElement::Psi(k), &Rational::one())
                    .expect("psi is always in range");
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Mismatch {
    pub class: String,
    pub solver: Rational,
    pub closed_form: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuxiliaryValue {
    pub class: String,
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenusVerification {
    pub genus: u32,
    pub pass: bool,
    pub rank: usize,
    pub relations: usize,
    pub unknowns: usize,
    pub redundant: Vec<String>,
    pub auxiliaries: Vec<AuxiliaryValue>,
    pub mismatches: Vec<Mismatch>,
    /// Set when the solver itself failed.
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerificationReport {
    pub target: Target,
    pub g_min: u32,
    pub g_max: u32,
    pub pass: bool,
    pub genera: Vec<GenusVerification>,
}

/// Term-by-term differences, as `(class, left, right)`, over the union of
/// supports in basis order.
pub fn diff(
    left: &DivisorExpression,
    right: &DivisorExpression,
) -> Vec<(BasisElement, Rational, Rational)> {
    let mut labels: Vec<BasisElement> = left.terms().map(|(e, _)| *e).collect();
    labels.extend(right.terms().map(|(e, _)| *e));
    labels.sort();
    labels.dedup();
    labels
        .into_iter()
        .filter_map(|e| {
            let (a, b) = (left.coefficient(&e), right.coefficient(&e));
            (a != b).then_some((e, a, b))
        })
        .collect()
}

fn verify_genus(genus: u32, target: Target, fault: Option<Fault>) -> GenusVerification {
    let marks = target.marks();
    let mut expected = closed_form(target, genus);
    if let Some(f) = fault {
        apply_fault(&mut expected, f);
    }
    match solve_coefficients(genus, target) {
        Ok(report) => {
            let mismatches: Vec<Mismatch> = diff(&report.solution, &expected)
                .into_iter()
                .map(|(e, solver, closed_form)| Mismatch {
                    class: e.name(marks),
                    solver,
                    closed_form,
                })
                .collect();
            GenusVerification {
                genus,
                pass: mismatches.is_empty(),
                rank: report.rank,
                relations: report.relation_count,
                unknowns: report.unknown_count,
                redundant: report.redundant.iter().map(ToString::to_string).collect(),
                auxiliaries: report
                    .auxiliaries
                    .iter()
                    .map(|(e, v)| AuxiliaryValue {
                        class: e.name(marks),
                        value: v.clone(),
                    })
                    .collect(),
                mismatches,
                error: None,
            }
        }
        Err(err) => GenusVerification {
            genus,
            pass: false,
            rank: 0,
            relations: 0,
            unknowns: 0,
            redundant: Vec::new(),
            auxiliaries: Vec::new(),
            mismatches: Vec::new(),
            error: Some(err.to_string()),
        },
    }
}

/// Solves every genus in `g_min..=g_max` and compares with the closed form.
/// Genera run in parallel; the report is ordered by genus.
///
/// # Panics
/// If `g_min < 2` or `g_min > g_max`.
pub fn verify_range(g_min: u32, g_max: u32, target: Target) -> VerificationReport {
    verify_range_with(g_min, g_max, target, None)
}

pub fn verify_range_with(
    g_min: u32,
    g_max: u32,
    target: Target,
    fault: Option<Fault>,
) -> VerificationReport {
    assert!(2 <= g_min && g_min <= g_max, "need 2 <= g_min <= g_max");
    let genera: Vec<GenusVerification> = (g_min..=g_max)
        .into_par_iter()
        .map(|g| verify_genus(g, target, fault))
        .collect();
    VerificationReport {
        target,
        g_min,
        g_max,
        pass: genera.iter().all(|v| v.pass),
        genera,
    }
}
