//! Assembly of the test-curve relations and their exact solution.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::basis::{identified_pairs, Ambient, BasisElement, BasisError, DivisorExpression, View};
use crate::exactlin::{Certificate, LinearError, LinearSystem, Rational, SolveResult};
use crate::families::{catalog, pairing_degree, Ansatz, FamilyError, Provenance, Target, Unknown};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error(transparent)]
    Basis(#[from] BasisError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Linear(#[from] LinearError),
    #[error("relation from {0} has no unknowns")]
    EmptyRelation(RelationSource),
    #[error("relations are inconsistent (combination of {} rows leaves 0 = {})", .certificate.multipliers.iter().filter(|m| !m.is_zero()).count(), .certificate.residual)]
    Inconsistent {
        certificate: Certificate,
        sources: Vec<RelationSource>,
    },
    #[error("relations leave {} undetermined", .unknowns.join(", "))]
    Underdetermined { unknowns: Vec<String> },
}

/// Where a relation came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RelationSource {
    Family(Provenance),
    /// Two formal labels naming the same divisor get the same coefficient.
    Identification(BasisElement, BasisElement, u8),
}

impl fmt::Display for RelationSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelationSource::Family(p) => p.fmt(f),
            RelationSource::Identification(a, b, marks) => {
                write!(f, "identify({} = {})", a.name(*marks), b.name(*marks))
            }
        }
    }
}

/// `Σ coefficient · unknown = rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub form: BTreeMap<Unknown, Rational>,
    pub rhs: Rational,
    pub source: RelationSource,
}

impl Relation {
    pub fn evaluate(&self, values: &BTreeMap<Unknown, Rational>) -> Option<Rational> {
        let mut total = Rational::zero();
        for (u, c) in &self.form {
            total += &(c * values.get(u)?);
        }
        Some(total)
    }

    pub fn is_satisfied_by(&self, values: &BTreeMap<Unknown, Rational>) -> bool {
        self.evaluate(values).as_ref() == Some(&self.rhs)
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.source)?;
        for (k, (u, c)) in self.form.iter().enumerate() {
            match (k, c.is_negative()) {
                (0, _) => write!(f, "{c}·{u}")?,
                (_, true) => write!(f, " - {}·{u}", c.abs())?,
                (_, false) => write!(f, " + {c}·{u}")?,
            }
        }
        write!(f, " = {}", self.rhs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AssemblyOptions {
    /// Include the `i = 0` member of the F_{2i+1} construction for the g¹₂
    /// target. Without it the g = 2 system leaves `a_{1,1}` free.
    pub extended: bool,
}

impl Default for AssemblyOptions {
    fn default() -> Self {
        AssemblyOptions { extended: true }
    }
}

/// The assembled system and the roles of its unknowns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assembly {
    pub ambient: Ambient,
    pub target: Target,
    pub relations: Vec<Relation>,
    /// Coefficients of in-range generators.
    pub unknowns: BTreeSet<Unknown>,
    /// Coefficients of out-of-range labels, by label.
    pub auxiliaries: BTreeMap<Unknown, BasisElement>,
}

impl Assembly {
    pub fn all_unknowns(&self) -> Vec<Unknown> {
        let mut all: BTreeSet<Unknown> = self.unknowns.clone();
        all.extend(self.auxiliaries.keys().copied());
        all.into_iter().collect()
    }

    pub fn linear_system(&self) -> LinearSystem {
        let vars = self.all_unknowns();
        let mut sys = LinearSystem::new(vars.iter().map(ToString::to_string).collect());
        for r in &self.relations {
            let row = vars
                .iter()
                .map(|u| r.form.get(u).cloned().unwrap_or_default())
                .collect();
            sys.push_row(row, r.rhs.clone())
                .expect("row length matches");
        }
        sys
    }
}

pub fn assemble_system(genus: u32, target: Target) -> Result<Vec<Relation>, SolverError> {
    Ok(assemble_with(genus, target, AssemblyOptions::default())?.relations)
}

pub fn assemble_with(
    genus: u32,
    target: Target,
    options: AssemblyOptions,
) -> Result<Assembly, SolverError> {
    let amb = target.ambient(genus)?;
    let families = catalog(genus, target, options.extended)?;
    let mut ansatz = Ansatz::general(target, genus)?;
    let unknowns: BTreeSet<Unknown> = ansatz.unknowns().collect();
    let mut auxiliaries = BTreeMap::new();
    for dv in &families {
        for label in dv.auxiliaries() {
            ansatz.register_auxiliary(label);
            auxiliaries.insert(Unknown::for_label(label), label);
        }
    }

    let mut relations = Vec::new();
    for dv in &families {
        let form = pairing_degree(&ansatz, dv)?;
        let source = RelationSource::Family(dv.provenance);
        if form.coefficients.is_empty() {
            return Err(SolverError::EmptyRelation(source));
        }
        relations.push(Relation {
            form: form.coefficients,
            rhs: &dv.target_degree - &form.constant,
            source,
        });
    }
    for (rep, other) in identified_pairs(amb) {
        let (u, v) = (Unknown::for_label(rep), Unknown::for_label(other));
        if u == v {
            continue;
        }
        relations.push(Relation {
            form: BTreeMap::from([(u, Rational::one()), (v, -Rational::one())]),
            rhs: Rational::zero(),
            source: RelationSource::Identification(rep, other, amb.marks()),
        });
    }

    Ok(Assembly {
        ambient: amb,
        target,
        relations,
        unknowns,
        auxiliaries,
    })
}

/// A solved system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientReport {
    pub genus: u32,
    pub target: Target,
    /// The class, over the formal basis.
    pub solution: DivisorExpression,
    /// Every in-range unknown with its value, zero values included.
    pub values: BTreeMap<Unknown, Rational>,
    /// Solved values of the out-of-range labels.
    pub auxiliaries: BTreeMap<BasisElement, Rational>,
    pub rank: usize,
    pub relation_count: usize,
    pub unknown_count: usize,
    /// Relations implied by the ones before them.
    pub redundant: Vec<RelationSource>,
}

impl CoefficientReport {
    pub fn value(&self, u: Unknown) -> Option<&Rational> {
        self.values.get(&u)
    }

    /// Value of an in-range or auxiliary unknown.
    pub fn any_value(&self, u: Unknown) -> Option<Rational> {
        self.values.get(&u).cloned().or_else(|| {
            self.auxiliaries
                .iter()
                .find(|(label, _)| Unknown::for_label(**label) == u)
                .map(|(_, v)| v.clone())
        })
    }
}

pub fn solve_coefficients(genus: u32, target: Target) -> Result<CoefficientReport, SolverError> {
    solve_with(genus, target, AssemblyOptions::default())
}

pub fn solve_with(
    genus: u32,
    target: Target,
    options: AssemblyOptions,
) -> Result<CoefficientReport, SolverError> {
    let assembly = assemble_with(genus, target, options)?;
    solve_assembly(&assembly)
}

pub fn solve_assembly(assembly: &Assembly) -> Result<CoefficientReport, SolverError> {
    let vars = assembly.all_unknowns();
    let sys = assembly.linear_system();
    let analysis = sys.analyze()?;
    let values = match analysis.result {
        SolveResult::Unique(values) => values,
        SolveResult::Inconsistent(certificate) => {
            return Err(SolverError::Inconsistent {
                certificate,
                sources: assembly.relations.iter().map(|r| r.source).collect(),
            })
        }
        SolveResult::Underdetermined {
            particular,
            determined,
            ..
        } => {
            let missing: Vec<String> = vars
                .iter()
                .zip(&determined)
                .filter(|(u, ok)| !**ok && assembly.unknowns.contains(u))
                .map(|(u, _)| u.to_string())
                .collect();
            if !missing.is_empty() {
                return Err(SolverError::Underdetermined { unknowns: missing });
            }
            // Only auxiliaries are free; they are reported at the particular
            // solution.
            particular
        }
    };

    let amb = assembly.ambient;
    let mut solution = DivisorExpression::new(amb, View::Formal);
    let mut in_range = BTreeMap::new();
    let mut auxiliaries = BTreeMap::new();
    for (u, v) in vars.iter().zip(values) {
        if let Some(label) = assembly.auxiliaries.get(u) {
            auxiliaries.insert(*label, v);
        } else {
            for label in u.label(amb.marks()) {
                solution.add_term(label, &v)?;
            }
            in_range.insert(*u, v);
        }
    }

    Ok(CoefficientReport {
        genus: amb.genus(),
        target: assembly.target,
        solution,
        values: in_range,
        auxiliaries,
        rank: analysis.rank,
        relation_count: assembly.relations.len(),
        unknown_count: vars.len(),
        redundant: analysis
            .redundant_rows
            .iter()
            .map(|&k| assembly.relations[k].source)
            .collect(),
    })
}

/// The two values of `a_{i,1}` (g¹₂ target) read off the Low and High ruling
/// relations from the solved `d`, `c`, `b_{i-1,1}` and `b_{i,1}`.
pub fn ruling_determinations(report: &CoefficientReport, i: u32) -> Option<(Rational, Rational)> {
    if report.target != Target::G12 || i == 0 || i > report.genus / 2 {
        return None;
    }
    let d = report.any_value(Unknown::D)?;
    let c = report.any_value(Unknown::C)?;
    let low_b = report.any_value(Unknown::B(i - 1, 1))?;
    let high_b = report.any_value(Unknown::B(i, 1))?;
    let q = |n: i64| Rational::integer(n);
    let g = i64::from(report.genus);
    let k = i64::from(i);
    // -2a + 4b + 16·h·c + 2d = 0, h the genus of the moving piece.
    let solve = |b: Rational, h: i64| (q(4) * b + q(16 * h) * &c + q(2) * &d) / q(2);
    Some((solve(low_b, k), solve(high_b, g - k)))
}
