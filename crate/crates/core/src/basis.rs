//! Generators of the rational class groups of the one- and two-pointed
//! hyperelliptic stacks, and sparse rational combinations over them.
//!
//! Boundary divisors are labelled by an index `i` and a [`Marking`] saying
//! where the marked points sit: for one marked point, `Zero` puts it on the
//! component of genus `g - i` (resp. `g - 1 - i`) and `One` on the component
//! of genus `i`. With two marked points, `Zero`/`Two` put both on the large
//! resp. genus-`i` component and `OneA`/`OneB` put only the first resp.
//! second point on the genus-`i` component. `One` is then the invariant sum
//! `OneA + OneB`; it is a label for expansion only, never a generator.
//!
//! At the middle index the two sides of a node have equal genus and pairs of
//! labels name the same divisor; [`canonicalize`] picks the representative.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactlin::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BasisError {
    #[error("genus must be at least 2, got {0}")]
    Genus(u32),
    #[error("number of marked points must be 1 or 2, got {0}")]
    Marks(u8),
    #[error("{label} is out of range for genus {genus} with {marks} marked point(s)")]
    OutOfRange {
        label: String,
        genus: u32,
        marks: u8,
    },
    #[error("expressions live over different spaces: {0} vs {1}")]
    AmbientMismatch(Ambient, Ambient),
    #[error("cannot combine a {0} expression with a {1} expression")]
    ViewMismatch(View, View),
    #[error("unknown class name {0:?}")]
    UnknownName(String),
}

/// The space `(g, n)` a class lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Ambient {
    genus: u32,
    marks: u8,
}

impl Ambient {
    pub fn new(genus: u32, marks: u8) -> Result<Self, BasisError> {
        if genus < 2 {
            return Err(BasisError::Genus(genus));
        }
        if !(1..=2).contains(&marks) {
            return Err(BasisError::Marks(marks));
        }
        Ok(Ambient { genus, marks })
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn marks(&self) -> u8 {
        self.marks
    }

    /// Largest `i` for `δ_i`: `⌊g/2⌋`.
    pub fn max_delta(&self) -> u32 {
        self.genus / 2
    }

    /// Largest `i` for `η_i`: `⌊(g-1)/2⌋`.
    pub fn max_eta(&self) -> u32 {
        (self.genus - 1) / 2
    }

    /// Markings that label generators (not expansion macros).
    pub fn markings(&self) -> &'static [Marking] {
        match self.marks {
            1 => &[Marking::Zero, Marking::One],
            _ => &[Marking::Zero, Marking::OneA, Marking::OneB, Marking::Two],
        }
    }
}

impl fmt::Display for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(g={}, n={})", self.genus, self.marks)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Marking {
    Zero,
    One,
    OneA,
    OneB,
    Two,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisElement {
    /// ψ-class of the `k`-th marked point (1-based).
    Psi(u8),
    EtaIrr,
    Delta(u32, Marking),
    Eta(u32, Marking),
    DeltaZeroTwo,
}

impl BasisElement {
    /// Checks index ranges and marking kinds. `One` is accepted for two
    /// marked points only when `allow_invariant` is set.
    pub fn check(&self, amb: Ambient, allow_invariant: bool) -> Result<(), BasisError> {
        let ok = match *self {
            BasisElement::Psi(k) => (1..=amb.marks).contains(&k),
            BasisElement::EtaIrr => true,
            BasisElement::DeltaZeroTwo => amb.marks == 2,
            BasisElement::Delta(i, m) => {
                (1..=amb.max_delta()).contains(&i) && marking_ok(amb, m, allow_invariant)
            }
            BasisElement::Eta(i, m) => {
                (1..=amb.max_eta()).contains(&i) && marking_ok(amb, m, allow_invariant)
            }
        };
        if ok {
            Ok(())
        } else {
            Err(BasisError::OutOfRange {
                label: self.name(amb.marks),
                genus: amb.genus,
                marks: amb.marks,
            })
        }
    }

    /// True when the label has the right shape for `amb` but an index outside
    /// the legal range, i.e. it can only be an auxiliary label.
    pub fn is_out_of_range_shape(&self, amb: Ambient) -> bool {
        match *self {
            BasisElement::Delta(i, m) => {
                marking_ok(amb, m, true) && !(1..=amb.max_delta()).contains(&i)
            }
            BasisElement::Eta(i, m) => {
                marking_ok(amb, m, true) && !(1..=amb.max_eta()).contains(&i)
            }
            _ => false,
        }
    }

    /// Serialization name, e.g. `psi`, `psi1`, `eta_irr`, `delta_2_1b`.
    pub fn name(&self, marks: u8) -> String {
        match *self {
            BasisElement::Psi(k) if marks == 1 && k == 1 => "psi".to_string(),
            BasisElement::Psi(k) => format!("psi{k}"),
            BasisElement::EtaIrr => "eta_irr".to_string(),
            BasisElement::DeltaZeroTwo => "delta_0_2".to_string(),
            BasisElement::Delta(i, m) => format!("delta_{i}_{}", marking_name(m)),
            BasisElement::Eta(i, m) => format!("eta_{i}_{}", marking_name(m)),
        }
    }

    /// Inverse of [`BasisElement::name`]. Only the shape is checked, not the
    /// index range.
    pub fn parse(name: &str, marks: u8) -> Result<Self, BasisError> {
        let unknown = || BasisError::UnknownName(name.to_string());
        match name {
            "psi" if marks == 1 => return Ok(BasisElement::Psi(1)),
            "psi1" if marks == 2 => return Ok(BasisElement::Psi(1)),
            "psi2" if marks == 2 => return Ok(BasisElement::Psi(2)),
            "eta_irr" => return Ok(BasisElement::EtaIrr),
            "delta_0_2" if marks == 2 => return Ok(BasisElement::DeltaZeroTwo),
            _ => {}
        }
        let (kind, rest) = if let Some(rest) = name.strip_prefix("delta_") {
            (true, rest)
        } else if let Some(rest) = name.strip_prefix("eta_") {
            (false, rest)
        } else {
            return Err(unknown());
        };
        let (index, mark) = rest.split_once('_').ok_or_else(unknown)?;
        if index.is_empty() || !index.bytes().all(|b| b.is_ascii_digit()) {
            return Err(unknown());
        }
        if index.len() > 1 && index.starts_with('0') {
            return Err(unknown());
        }
        let i: u32 = index.parse().map_err(|_| unknown())?;
        let m = match (mark, marks) {
            ("0", _) => Marking::Zero,
            ("1", _) => Marking::One,
            ("1a", 2) => Marking::OneA,
            ("1b", 2) => Marking::OneB,
            ("2", 2) => Marking::Two,
            _ => return Err(unknown()),
        };
        if kind && i == 0 {
            // `delta_0_2` is the only genus-0 delta label.
            return Err(unknown());
        }
        Ok(if kind {
            BasisElement::Delta(i, m)
        } else {
            BasisElement::Eta(i, m)
        })
    }
}

fn marking_ok(amb: Ambient, m: Marking, allow_invariant: bool) -> bool {
    match amb.marks {
        1 => matches!(m, Marking::Zero | Marking::One),
        _ => match m {
            Marking::One => allow_invariant,
            _ => true,
        },
    }
}

fn marking_name(m: Marking) -> &'static str {
    match m {
        Marking::Zero => "0",
        Marking::One => "1",
        Marking::OneA => "1a",
        Marking::OneB => "1b",
        Marking::Two => "2",
    }
}

/// Returns the representative of `e` under the middle-index identifications.
pub fn canonicalize(e: BasisElement, amb: Ambient) -> Result<BasisElement, BasisError> {
    e.check(amb, false)?;
    let g = amb.genus;
    let even = g.is_multiple_of(2);
    Ok(match (amb.marks, e) {
        (1, BasisElement::Delta(i, Marking::One)) if even && i == g / 2 => {
            BasisElement::Delta(i, Marking::Zero)
        }
        (1, BasisElement::Eta(i, Marking::One)) if !even && i == (g - 1) / 2 => {
            BasisElement::Eta(i, Marking::Zero)
        }
        (2, BasisElement::Delta(i, m)) if even && i == g / 2 => BasisElement::Delta(i, fold_two(m)),
        (2, BasisElement::Eta(i, m)) if !even && i == (g - 1) / 2 => {
            BasisElement::Eta(i, fold_two(m))
        }
        _ => e,
    })
}

fn fold_two(m: Marking) -> Marking {
    match m {
        Marking::Two => Marking::Zero,
        Marking::OneB => Marking::OneA,
        other => other,
    }
}

/// Every label of the generating set before identifications, in basis order.
pub fn enumerate_formal(amb: Ambient) -> Vec<BasisElement> {
    let mut out: Vec<BasisElement> = (1..=amb.marks).map(BasisElement::Psi).collect();
    out.push(BasisElement::EtaIrr);
    for i in 1..=amb.max_delta() {
        out.extend(amb.markings().iter().map(|&m| BasisElement::Delta(i, m)));
    }
    for i in 1..=amb.max_eta() {
        out.extend(amb.markings().iter().map(|&m| BasisElement::Eta(i, m)));
    }
    if amb.marks == 2 {
        out.push(BasisElement::DeltaZeroTwo);
    }
    out
}

/// The generators of `Cl ⊗ Q`, one per irreducible divisor, in basis order.
pub fn enumerate_basis(genus: u32, marks: u8) -> Result<Vec<BasisElement>, BasisError> {
    let amb = Ambient::new(genus, marks)?;
    Ok(enumerate_formal(amb)
        .into_iter()
        .filter(|&e| canonicalize(e, amb) == Ok(e))
        .collect())
}

pub fn basis_dimension(genus: u32, marks: u8) -> Result<usize, BasisError> {
    Ok(enumerate_basis(genus, marks)?.len())
}

/// Pairs of formal labels naming the same divisor, as `(representative, other)`.
pub fn identified_pairs(amb: Ambient) -> Vec<(BasisElement, BasisElement)> {
    enumerate_formal(amb)
        .into_iter()
        .filter_map(|e| {
            let c = canonicalize(e, amb).ok()?;
            (c != e).then_some((c, e))
        })
        .collect()
}

/// Which reading of the labels an expression uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum View {
    /// Every formal label kept separately, as the closed forms are printed.
    Formal,
    /// Identified labels merged onto their representative by summing.
    Canonical,
}

impl fmt::Display for View {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            View::Formal => "formal",
            View::Canonical => "canonical",
        })
    }
}

/// A sparse exact linear combination of generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorExpression {
    ambient: Ambient,
    view: View,
    terms: BTreeMap<BasisElement, Rational>,
}

impl DivisorExpression {
    pub fn new(ambient: Ambient, view: View) -> Self {
        DivisorExpression {
            ambient,
            view,
            terms: BTreeMap::new(),
        }
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn view(&self) -> View {
        self.view
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisElement, &Rational)> {
        self.terms.iter()
    }

    /// Coefficient of `e` as stored (zero if absent).
    pub fn coefficient(&self, e: &BasisElement) -> Rational {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    /// Adds `q·e`. With two marked points the invariant `One` label expands
    /// to `OneA + OneB`; in the canonical view labels are canonicalized first.
    pub fn add_term(&mut self, e: BasisElement, q: &Rational) -> Result<(), BasisError> {
        e.check(self.ambient, true)?;
        let expanded: Vec<BasisElement> = match e {
            BasisElement::Delta(i, Marking::One) if self.ambient.marks == 2 => {
                vec![
                    BasisElement::Delta(i, Marking::OneA),
                    BasisElement::Delta(i, Marking::OneB),
                ]
            }
            BasisElement::Eta(i, Marking::One) if self.ambient.marks == 2 => {
                vec![
                    BasisElement::Eta(i, Marking::OneA),
                    BasisElement::Eta(i, Marking::OneB),
                ]
            }
            other => vec![other],
        };
        for label in expanded {
            let label = match self.view {
                View::Formal => label,
                View::Canonical => canonicalize(label, self.ambient)?,
            };
            let entry = self.terms.entry(label).or_default();
            *entry += q;
            if entry.is_zero() {
                self.terms.remove(&label);
            }
        }
        Ok(())
    }

    pub fn with_term(mut self, e: BasisElement, q: Rational) -> Result<Self, BasisError> {
        self.add_term(e, &q)?;
        Ok(self)
    }

    /// `self + s·other`.
    pub fn combine(&self, s: &Rational, other: &DivisorExpression) -> Result<Self, BasisError> {
        if self.ambient != other.ambient {
            return Err(BasisError::AmbientMismatch(self.ambient, other.ambient));
        }
        if self.view != other.view {
            return Err(BasisError::ViewMismatch(self.view, other.view));
        }
        let mut out = self.clone();
        if s.is_zero() {
            return Ok(out);
        }
        for (e, q) in &other.terms {
            out.add_term(*e, &(s * q))?;
        }
        Ok(out)
    }

    /// Merges identified labels by summing their coefficients.
    pub fn to_canonical(&self) -> DivisorExpression {
        let mut out = DivisorExpression::new(self.ambient, View::Canonical);
        for (e, q) in &self.terms {
            out.add_term(*e, q).expect("stored labels are valid");
        }
        out
    }
}

/// `a + s·b`.
pub fn expr_combine(
    a: &DivisorExpression,
    s: &Rational,
    b: &DivisorExpression,
) -> Result<DivisorExpression, BasisError> {
    a.combine(s, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use BasisElement::*;
    use Marking::*;

    fn amb(g: u32, n: u8) -> Ambient {
        Ambient::new(g, n).unwrap()
    }

    #[test]
    fn genus_two_one_point() {
        assert_eq!(
            enumerate_basis(2, 1).unwrap(),
            vec![Psi(1), EtaIrr, Delta(1, Zero)]
        );
    }

    #[test]
    fn genus_three_one_point() {
        assert_eq!(
            enumerate_basis(3, 1).unwrap(),
            vec![Psi(1), EtaIrr, Delta(1, Zero), Delta(1, One), Eta(1, Zero)]
        );
    }

    #[test]
    fn genus_four_one_point() {
        assert_eq!(
            enumerate_basis(4, 1).unwrap(),
            vec![
                Psi(1),
                EtaIrr,
                Delta(1, Zero),
                Delta(1, One),
                Delta(2, Zero),
                Eta(1, Zero),
                Eta(1, One)
            ]
        );
    }

    #[test]
    fn dimensions() {
        assert_eq!(basis_dimension(2, 1).unwrap(), 3);
        assert_eq!(basis_dimension(3, 1).unwrap(), 5);
        assert_eq!(basis_dimension(4, 1).unwrap(), 7);
        assert_eq!(basis_dimension(2, 2).unwrap(), 6);
        assert_eq!(enumerate_basis(1, 1), Err(BasisError::Genus(1)));
    }

    #[test]
    fn canonical_representatives() {
        assert_eq!(
            canonicalize(Delta(1, One), amb(2, 1)).unwrap(),
            Delta(1, Zero)
        );
        assert_eq!(canonicalize(Eta(1, One), amb(3, 1)).unwrap(), Eta(1, Zero));
        assert_eq!(
            canonicalize(Delta(1, Zero), amb(4, 1)).unwrap(),
            Delta(1, Zero)
        );
        assert_eq!(
            canonicalize(Delta(2, Two), amb(4, 2)).unwrap(),
            Delta(2, Zero)
        );
        assert_eq!(
            canonicalize(Delta(2, OneB), amb(4, 2)).unwrap(),
            Delta(2, OneA)
        );
        assert_eq!(canonicalize(Eta(1, Two), amb(3, 2)).unwrap(), Eta(1, Zero));
        assert_eq!(canonicalize(Eta(1, OneB), amb(3, 2)).unwrap(), Eta(1, OneA));
        assert!(canonicalize(Delta(3, Zero), amb(4, 1)).is_err());
        assert!(canonicalize(Eta(1, Zero), amb(2, 1)).is_err());
        assert!(canonicalize(DeltaZeroTwo, amb(3, 1)).is_err());
        // The invariant sum is not a generator.
        assert!(canonicalize(Delta(1, One), amb(3, 2)).is_err());
    }

    #[test]
    fn combine_identities() {
        let a = DivisorExpression::new(amb(3, 1), View::Formal)
            .with_term(Psi(1), Rational::integer(3))
            .unwrap();
        assert_eq!(a.combine(&Rational::zero(), &a).unwrap(), a);
        assert!(a.combine(&Rational::integer(-1), &a).unwrap().is_empty());
    }

    #[test]
    fn invariant_label_expands() {
        let q = Rational::frac(2, 7);
        let e = DivisorExpression::new(amb(3, 2), View::Formal)
            .with_term(Delta(1, One), q.clone())
            .unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!(e.coefficient(&Delta(1, OneA)), q);
        assert_eq!(e.coefficient(&Delta(1, OneB)), q);
    }

    #[test]
    fn mixed_ambients_rejected() {
        let a = DivisorExpression::new(amb(3, 1), View::Formal);
        let b = DivisorExpression::new(amb(4, 1), View::Formal);
        assert!(matches!(
            a.combine(&Rational::one(), &b),
            Err(BasisError::AmbientMismatch(..))
        ));
    }

    #[test]
    fn canonical_view_sums_identified_labels() {
        let e = DivisorExpression::new(amb(2, 1), View::Formal)
            .with_term(Delta(1, Zero), Rational::frac(-6, 5))
            .unwrap()
            .with_term(Delta(1, One), Rational::frac(-6, 5))
            .unwrap();
        let c = e.to_canonical();
        assert_eq!(c.len(), 1);
        assert_eq!(c.coefficient(&Delta(1, Zero)), Rational::frac(-12, 5));
    }

    #[test]
    fn names_round_trip() {
        for n in 1..=2 {
            for g in 2..=7 {
                for e in enumerate_formal(amb(g, n)) {
                    assert_eq!(BasisElement::parse(&e.name(n), n).unwrap(), e);
                }
            }
        }
        assert_eq!(Delta(1, OneA).name(2), "delta_1_1a");
        assert_eq!(Psi(2).name(2), "psi2");
        assert!(BasisElement::parse("psi", 2).is_err());
        assert!(BasisElement::parse("delta_1_1a", 1).is_err());
        assert!(BasisElement::parse("delta_01_0", 1).is_err());
        assert!(BasisElement::parse("delta_0_0", 1).is_err());
        assert_eq!(BasisElement::parse("eta_0_0", 1).unwrap(), Eta(0, Zero));
    }
}
