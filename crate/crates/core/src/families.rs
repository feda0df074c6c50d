//! Test families reduced to degree vectors, and the pairing of a
//! coefficient ansatz with a degree vector.
//!
//! Each family is a complete one-parameter family of pointed stable
//! hyperelliptic curves. Its [`DegreeVector`] records the degree of every
//! generator it meets and its degree against the target divisor. Pairing the
//! ansatz `Σ coefficient · class` against it gives one linear relation.
//!
//! Degrees are closed-form functions of `(g, i)`. The self-intersection
//! entries (ψ-degrees and the degrees of the gluing boundary divisor) are
//! recomputed through [`crate::surfcalc`] so a modelling error there shows up
//! in the catalog.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::basis::{Ambient, BasisElement, BasisError, Marking};
use crate::exactlin::Rational;
use crate::surfcalc::{
    blown_up_self_intersection, diagonal_section_square, diagonal_self_intersection,
    horizontal_section_square, intersect, SurfaceLattice,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error(transparent)]
    Basis(#[from] BasisError),
    #[error("{family} needs index in {min}..={max}, got {index}")]
    IndexOutOfRange {
        family: &'static str,
        index: u32,
        min: u32,
        max: u32,
    },
    #[error("ansatz lives on {0}, degree vector on {1}")]
    AmbientMismatch(Ambient, Ambient),
    #[error("auxiliary label {0} has no registered unknown")]
    UnregisteredAuxiliary(String),
    #[error(
        "degree recorded against psi1 + psi2 but the ansatz gives them different coefficients"
    )]
    AsymmetricPsi,
}

/// Which divisor a computation is about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    /// Closure of the locus of Weierstrass points, on one-pointed curves.
    Weierstrass,
    /// Closure of the locus where the two marked points sum to the g¹₂.
    G12,
}

impl Target {
    pub fn marks(self) -> u8 {
        match self {
            Target::Weierstrass => 1,
            Target::G12 => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Target::Weierstrass => "weierstrass",
            Target::G12 => "g12",
        }
    }

    pub fn ambient(self, genus: u32) -> Result<Ambient, BasisError> {
        Ambient::new(genus, self.marks())
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which branch component provides the Weierstrass section of the moving
/// piece: a horizontal ruling or a `(1,1)` diagonal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Section {
    Horizontal,
    Diagonal,
}

/// `Low`: the moving piece has genus `i`. `High`: it has genus `g - i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Low,
    High,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TwoPointKind {
    /// `C × C` blown up at one `(p, p)` with `p` not a Weierstrass point.
    SingleNonWeierstrass,
    /// `C × C` blown up at the `2g + 2` Weierstrass diagonal points, second
    /// section the graph of the involution.
    WeierstrassInvolution,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyKind {
    Diagonal,
    QuadricPencil,
    Glued(Section, Side),
    TwoPoint(TwoPointKind),
    Ruling(Side),
    F2ip1,
}

/// Where a degree vector came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Provenance {
    pub kind: FamilyKind,
    pub index: Option<u32>,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            FamilyKind::Diagonal => "diagonal",
            FamilyKind::QuadricPencil => "quadric_pencil",
            FamilyKind::Glued(Section::Horizontal, Side::Low) => "glued_horizontal_low",
            FamilyKind::Glued(Section::Horizontal, Side::High) => "glued_horizontal_high",
            FamilyKind::Glued(Section::Diagonal, Side::Low) => "glued_diagonal_low",
            FamilyKind::Glued(Section::Diagonal, Side::High) => "glued_diagonal_high",
            FamilyKind::TwoPoint(TwoPointKind::SingleNonWeierstrass) => "two_point_single",
            FamilyKind::TwoPoint(TwoPointKind::WeierstrassInvolution) => "two_point_involution",
            FamilyKind::Ruling(Side::Low) => "ruling_low",
            FamilyKind::Ruling(Side::High) => "ruling_high",
            FamilyKind::F2ip1 => "f2ip1",
        };
        match self.index {
            Some(i) => write!(f, "{name}(i={i})"),
            None => f.write_str(name),
        }
    }
}

/// What a degree is measured against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DegreeKey {
    /// A generator, or with two marked points an invariant `One` sum.
    Class(BasisElement),
    /// `deg ψ₁ + deg ψ₂` where only the sum is known.
    PsiSum,
    /// A boundary label whose index is outside the legal range.
    Auxiliary(BasisElement),
}

impl DegreeKey {
    pub fn name(&self, marks: u8) -> String {
        match self {
            DegreeKey::Class(e) | DegreeKey::Auxiliary(e) => e.name(marks),
            DegreeKey::PsiSum => "psi_sum".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeVector {
    pub ambient: Ambient,
    pub target: Target,
    pub target_degree: Rational,
    pub degrees: BTreeMap<DegreeKey, Rational>,
    pub provenance: Provenance,
}

impl DegreeVector {
    fn new(ambient: Ambient, target: Target, target_degree: i64, provenance: Provenance) -> Self {
        DegreeVector {
            ambient,
            target,
            target_degree: Rational::integer(target_degree),
            degrees: BTreeMap::new(),
            provenance,
        }
    }

    /// Records `deg(e) = v`, filing out-of-range labels as auxiliary.
    fn put(&mut self, e: BasisElement, v: impl Into<Rational>) {
        let key = if e.check(self.ambient, true).is_ok() {
            DegreeKey::Class(e)
        } else {
            assert!(
                e.is_out_of_range_shape(self.ambient),
                "catalog label {} is malformed for {}",
                e.name(self.ambient.marks()),
                self.ambient
            );
            DegreeKey::Auxiliary(e)
        };
        let v = v.into();
        if !v.is_zero() {
            self.degrees.insert(key, v);
        }
    }

    pub fn degree(&self, key: &DegreeKey) -> Rational {
        self.degrees.get(key).cloned().unwrap_or_default()
    }

    pub fn auxiliaries(&self) -> impl Iterator<Item = BasisElement> + '_ {
        self.degrees.keys().filter_map(|k| match k {
            DegreeKey::Auxiliary(e) => Some(*e),
            _ => None,
        })
    }
}

fn check_index(family: &'static str, index: u32, min: u32, max: u32) -> Result<(), FamilyError> {
    if index < min || index > max {
        return Err(FamilyError::IndexOutOfRange {
            family,
            index,
            min,
            max,
        });
    }
    Ok(())
}

/// `C × C → C` with the diagonal as section; one marked point.
pub fn diagonal_family(genus: u32) -> Result<DegreeVector, FamilyError> {
    let amb = Ambient::new(genus, 1)?;
    let g = i64::from(genus);
    let prov = Provenance {
        kind: FamilyKind::Diagonal,
        index: None,
    };
    let mut dv = DegreeVector::new(amb, Target::Weierstrass, 2 * g + 2, prov);
    dv.put(BasisElement::Psi(1), -diagonal_self_intersection(genus));
    Ok(dv)
}

/// General pencil of bidegree `(2, g+1)` curves on P¹ × P¹, marked by one or
/// two of its base points.
pub fn quadric_pencil_family(genus: u32, marks: u8) -> Result<DegreeVector, FamilyError> {
    let amb = Ambient::new(genus, marks)?;
    let g = i64::from(genus);
    let base_points = 4 * (genus as usize + 1);
    let lattice = SurfaceLattice::new(base_points);
    let prov = Provenance {
        kind: FamilyKind::QuadricPencil,
        index: None,
    };
    let (target, target_degree) = match marks {
        1 => (Target::Weierstrass, 1),
        // Two general base points never lie on one ruling.
        _ => (Target::G12, 0),
    };
    let mut dv = DegreeVector::new(amb, target, target_degree, prov);
    for k in 1..=marks {
        let e = lattice
            .exceptional(usize::from(k) - 1)
            .expect("enough base points");
        dv.put(
            BasisElement::Psi(k),
            -intersect(&e, &e).expect("same lattice"),
        );
    }
    dv.put(BasisElement::EtaIrr, 4 * (2 * g + 1));
    Ok(dv)
}

/// A moving Weierstrass-pointed pencil glued to a fixed curve at a
/// Weierstrass point; the marked point(s) sit on the fixed curve.
pub fn glued_weierstrass_family(
    genus: u32,
    i: u32,
    section: Section,
    side: Side,
    marks: u8,
) -> Result<DegreeVector, FamilyError> {
    let amb = Ambient::new(genus, marks)?;
    check_index("glued_weierstrass_family", i, 1, amb.max_delta())?;
    Ok(glued_unchecked(amb, i, section, side))
}

pub(crate) fn glued_unchecked(amb: Ambient, i: u32, section: Section, side: Side) -> DegreeVector {
    let g = amb.genus();
    let target = if amb.marks() == 1 {
        Target::Weierstrass
    } else {
        Target::G12
    };
    let prov = Provenance {
        kind: FamilyKind::Glued(section, side),
        index: Some(i),
    };
    let mut dv = DegreeVector::new(amb, target, 0, prov);
    // Genus of the moving piece.
    let h = match side {
        Side::Low => i,
        Side::High => g - i,
    };
    let h64 = i64::from(h);
    let (self_int, eta_irr, eta_deg) = match section {
        Section::Horizontal => (horizontal_section_square(2), 8 * h64, 2),
        Section::Diagonal => (
            diagonal_section_square(2 * h as usize + 2),
            4 * h64,
            2 * h64 + 2,
        ),
    };
    debug_assert!(self_int.integral);
    let far = match amb.marks() {
        1 => Marking::One,
        _ => Marking::Two,
    };
    let (delta, eta) = match side {
        Side::Low => (
            BasisElement::Delta(i, Marking::Zero),
            BasisElement::Eta(i - 1, Marking::Zero),
        ),
        Side::High => (BasisElement::Delta(i, far), BasisElement::Eta(i, far)),
    };
    dv.put(delta, self_int.value);
    dv.put(BasisElement::EtaIrr, eta_irr);
    dv.put(eta, eta_deg);
    dv
}

/// Two-pointed families on a blowup of `C × C` with no moving moduli.
pub fn two_point_blowup_family(
    genus: u32,
    kind: TwoPointKind,
) -> Result<DegreeVector, FamilyError> {
    let amb = Ambient::new(genus, 2)?;
    let g = i64::from(genus);
    let prov = Provenance {
        kind: FamilyKind::TwoPoint(kind),
        index: None,
    };
    let dv = match kind {
        TwoPointKind::SingleNonWeierstrass => {
            let mut dv = DegreeVector::new(amb, Target::G12, 1, prov);
            // C × {p} is a fibre class of square 0.
            dv.put(BasisElement::Psi(1), -blown_up_self_intersection(0, &[1]));
            dv.put(
                BasisElement::Psi(2),
                -blown_up_self_intersection(diagonal_self_intersection(genus), &[1]),
            );
            dv.put(BasisElement::DeltaZeroTwo, 1);
            dv
        }
        TwoPointKind::WeierstrassInvolution => {
            let mut dv = DegreeVector::new(amb, Target::G12, 2 - 2 * g, prov);
            let ms = vec![1; 2 * genus as usize + 2];
            let psi = -blown_up_self_intersection(diagonal_self_intersection(genus), &ms);
            dv.put(BasisElement::Psi(1), psi);
            dv.put(BasisElement::Psi(2), psi);
            dv.put(BasisElement::DeltaZeroTwo, 2 * g + 2);
            dv
        }
    };
    Ok(dv)
}

/// Degree-2 base change of a horizontal-ruling bisection on the glued
/// family; one marked point on each side of the separating node.
pub fn g12_ruling_family(genus: u32, i: u32, side: Side) -> Result<DegreeVector, FamilyError> {
    let amb = Ambient::new(genus, 2)?;
    check_index("g12_ruling_family", i, 1, amb.max_delta())?;
    let g = i64::from(genus);
    let i64_ = i64::from(i);
    let prov = Provenance {
        kind: FamilyKind::Ruling(side),
        index: Some(i),
    };
    let mut dv = DegreeVector::new(amb, Target::G12, 0, prov);
    let section = horizontal_section_square(2);
    debug_assert!(section.integral);
    // The base change doubles every degree of the glued family.
    dv.put(
        BasisElement::Delta(i, Marking::One),
        Rational::integer(2) * section.value,
    );
    let (eta, moving) = match side {
        Side::Low => (BasisElement::Eta(i - 1, Marking::One), i64_),
        Side::High => (BasisElement::Eta(i, Marking::One), g - i64_),
    };
    dv.put(eta, 4);
    dv.put(BasisElement::EtaIrr, 16 * moving);
    dv.degrees.insert(DegreeKey::PsiSum, Rational::integer(2));
    Ok(dv)
}

/// The two-pointed family built on F_{2i+1}, for `1 ≤ i ≤ ⌊(g-1)/2⌋`.
pub fn f2ip1_family(genus: u32, i: u32) -> Result<DegreeVector, FamilyError> {
    let amb = Ambient::new(genus, 2)?;
    check_index("f2ip1_family", i, 1, amb.max_eta())?;
    Ok(f2ip1_unchecked(amb, i))
}

/// The same construction at `i = 0`: two `(1,1)` branch curves through the
/// common point. Its η-fibres carry the auxiliary label `η_{0,1}`.
pub fn f1_family(genus: u32) -> Result<DegreeVector, FamilyError> {
    let amb = Ambient::new(genus, 2)?;
    Ok(f2ip1_unchecked(amb, 0))
}

fn f2ip1_unchecked(amb: Ambient, i: u32) -> DegreeVector {
    let g = i64::from(amb.genus());
    let k = i64::from(i);
    let prov = Provenance {
        kind: FamilyKind::F2ip1,
        index: Some(i),
    };
    let mut dv = DegreeVector::new(amb, Target::G12, 0, prov);
    dv.put(BasisElement::Psi(1), 2 * (k + 1));
    dv.put(BasisElement::Psi(2), 2);
    dv.put(BasisElement::Eta(i, Marking::One), 2);
    dv.put(BasisElement::EtaIrr, 4 * (k + 1) * (4 * g - 2 * k + 1));
    dv
}

/// Every family used for `target` at this genus, in assembly order.
///
/// With `extended` the G12 catalog also contains [`f1_family`].
pub fn catalog(
    genus: u32,
    target: Target,
    extended: bool,
) -> Result<Vec<DegreeVector>, FamilyError> {
    let amb = target.ambient(genus)?;
    let mut out = Vec::new();
    match target {
        Target::Weierstrass => {
            out.push(diagonal_family(genus)?);
            out.push(quadric_pencil_family(genus, 1)?);
            for i in 1..=amb.max_delta() {
                for side in [Side::Low, Side::High] {
                    for section in [Section::Horizontal, Section::Diagonal] {
                        out.push(glued_weierstrass_family(genus, i, section, side, 1)?);
                    }
                }
            }
        }
        Target::G12 => {
            out.push(two_point_blowup_family(
                genus,
                TwoPointKind::SingleNonWeierstrass,
            )?);
            out.push(two_point_blowup_family(
                genus,
                TwoPointKind::WeierstrassInvolution,
            )?);
            out.push(quadric_pencil_family(genus, 2)?);
            for i in 1..=amb.max_delta() {
                for side in [Side::Low, Side::High] {
                    for section in [Section::Horizontal, Section::Diagonal] {
                        out.push(glued_weierstrass_family(genus, i, section, side, 2)?);
                    }
                }
                out.push(g12_ruling_family(genus, i, Side::Low)?);
                out.push(g12_ruling_family(genus, i, Side::High)?);
            }
            if extended {
                out.push(f1_family(genus)?);
            }
            for i in 1..=amb.max_eta() {
                out.push(f2ip1_family(genus, i)?);
            }
        }
    }
    Ok(out)
}

/// An unknown coefficient of the class ansatz.
///
/// The derived order is the solver's variable order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Unknown {
    /// Coefficient of δ_{0,2}.
    A02,
    /// Coefficient of ψ (resp. ψ₁ + ψ₂).
    D,
    /// Coefficient of η_irr.
    C,
    /// Coefficient of δ_{i,m}; for two points `m = 1` is the invariant sum.
    A(u32, u8),
    /// Coefficient of η_{j,m}.
    B(u32, u8),
}

impl fmt::Display for Unknown {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Unknown::A02 => f.write_str("a_{0,2}"),
            Unknown::D => f.write_str("d"),
            Unknown::C => f.write_str("c"),
            Unknown::A(i, m) => write!(f, "a_{{{i},{m}}}"),
            Unknown::B(j, m) => write!(f, "b_{{{j},{m}}}"),
        }
    }
}

fn marking_code(m: Marking) -> u8 {
    match m {
        Marking::Zero => 0,
        Marking::One | Marking::OneA | Marking::OneB => 1,
        Marking::Two => 2,
    }
}

impl Unknown {
    /// The unknown multiplying `label` in the ansatz.
    pub fn for_label(label: BasisElement) -> Unknown {
        match label {
            BasisElement::Psi(_) => Unknown::D,
            BasisElement::EtaIrr => Unknown::C,
            BasisElement::DeltaZeroTwo => Unknown::A02,
            BasisElement::Delta(i, m) => Unknown::A(i, marking_code(m)),
            BasisElement::Eta(i, m) => Unknown::B(i, marking_code(m)),
        }
    }

    /// The label this unknown multiplies; for two points the invariant
    /// `One` label stands for both halves.
    pub fn label(self, marks: u8) -> Vec<BasisElement> {
        let mk = |m: u8| match (m, marks) {
            (0, _) => Marking::Zero,
            (1, _) => Marking::One,
            _ => Marking::Two,
        };
        match self {
            Unknown::A02 => vec![BasisElement::DeltaZeroTwo],
            Unknown::D => (1..=marks).map(BasisElement::Psi).collect(),
            Unknown::C => vec![BasisElement::EtaIrr],
            Unknown::A(i, m) => vec![BasisElement::Delta(i, mk(m))],
            Unknown::B(j, m) => vec![BasisElement::Eta(j, mk(m))],
        }
    }
}

/// One coefficient of an ansatz: a symbol or a known value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Coefficient {
    Unknown(Unknown),
    Value(Rational),
}

/// A class written as `Σ coefficient · label` with symbolic coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ansatz {
    ambient: Ambient,
    terms: BTreeMap<BasisElement, Coefficient>,
}

impl Ansatz {
    pub fn new(ambient: Ambient) -> Self {
        Ansatz {
            ambient,
            terms: BTreeMap::new(),
        }
    }

    /// The general invariant combination of the generators, one unknown per
    /// formal label (invariant sums counted once).
    pub fn general(target: Target, genus: u32) -> Result<Self, BasisError> {
        let amb = target.ambient(genus)?;
        let mut ansatz = Ansatz::new(amb);
        for k in 1..=amb.marks() {
            ansatz.set(BasisElement::Psi(k), Coefficient::Unknown(Unknown::D));
        }
        ansatz.set(BasisElement::EtaIrr, Coefficient::Unknown(Unknown::C));
        if amb.marks() == 2 {
            ansatz.set(
                BasisElement::DeltaZeroTwo,
                Coefficient::Unknown(Unknown::A02),
            );
        }
        let markings: &[Marking] = match amb.marks() {
            1 => &[Marking::Zero, Marking::One],
            _ => &[Marking::Zero, Marking::One, Marking::Two],
        };
        for i in 1..=amb.max_delta() {
            for &m in markings {
                let e = BasisElement::Delta(i, m);
                ansatz.set(e, Coefficient::Unknown(Unknown::for_label(e)));
            }
        }
        for j in 1..=amb.max_eta() {
            for &m in markings {
                let e = BasisElement::Eta(j, m);
                ansatz.set(e, Coefficient::Unknown(Unknown::for_label(e)));
            }
        }
        Ok(ansatz)
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn set(&mut self, label: BasisElement, c: Coefficient) {
        self.terms.insert(label, c);
    }

    /// Gives an out-of-range label its own unknown.
    pub fn register_auxiliary(&mut self, label: BasisElement) {
        self.terms
            .entry(label)
            .or_insert(Coefficient::Unknown(Unknown::for_label(label)));
    }

    pub fn unknowns(&self) -> impl Iterator<Item = Unknown> + '_ {
        self.terms.values().filter_map(|c| match c {
            Coefficient::Unknown(u) => Some(*u),
            Coefficient::Value(_) => None,
        })
    }

    fn lookup(&self, label: &BasisElement) -> Option<&Coefficient> {
        self.terms.get(label).or_else(|| match *label {
            BasisElement::Delta(i, Marking::OneA | Marking::OneB) if self.ambient.marks() == 2 => {
                self.terms.get(&BasisElement::Delta(i, Marking::One))
            }
            BasisElement::Eta(i, Marking::OneA | Marking::OneB) if self.ambient.marks() == 2 => {
                self.terms.get(&BasisElement::Eta(i, Marking::One))
            }
            _ => None,
        })
    }
}

/// `Σ coefficient · unknown + constant`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LinearForm {
    pub coefficients: BTreeMap<Unknown, Rational>,
    pub constant: Rational,
}

impl LinearForm {
    fn add(&mut self, c: &Coefficient, degree: &Rational) {
        match c {
            Coefficient::Unknown(u) => {
                let entry = self.coefficients.entry(*u).or_default();
                *entry += degree;
                if entry.is_zero() {
                    self.coefficients.remove(u);
                }
            }
            Coefficient::Value(v) => self.constant += &(v * degree),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty() && self.constant.is_zero()
    }
}

/// Degree of the ansatz class on the family, as a linear form in the unknowns.
pub fn pairing_degree(ansatz: &Ansatz, dv: &DegreeVector) -> Result<LinearForm, FamilyError> {
    if ansatz.ambient != dv.ambient {
        return Err(FamilyError::AmbientMismatch(ansatz.ambient, dv.ambient));
    }
    let mut form = LinearForm::default();
    for (key, degree) in &dv.degrees {
        match key {
            DegreeKey::Class(label) => {
                if let Some(c) = ansatz.lookup(label) {
                    form.add(c, degree);
                }
            }
            DegreeKey::Auxiliary(label) => match ansatz.lookup(label) {
                Some(c) => form.add(c, degree),
                None => {
                    return Err(FamilyError::UnregisteredAuxiliary(
                        label.name(dv.ambient.marks()),
                    ))
                }
            },
            DegreeKey::PsiSum => {
                let p1 = ansatz.lookup(&BasisElement::Psi(1));
                let p2 = ansatz.lookup(&BasisElement::Psi(2));
                match (p1, p2) {
                    (None, None) => {}
                    (Some(a), Some(b)) if a == b => form.add(a, degree),
                    _ => return Err(FamilyError::AsymmetricPsi),
                }
            }
        }
    }
    Ok(form)
}
