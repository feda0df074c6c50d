//! Intersection numbers on iterated blowups of P¹ × P¹ and the halving rule
//! for curves in the branch locus of a double cover.
//!
//! A lattice element is the coefficient vector over `(H₁, H₂, E₁, …, E_k)`
//! with `H₁·H₂ = 1`, `H₁² = H₂² = 0`, `E_j² = -1` and all other pairings
//! zero. Blown-up points are tracked only through which exceptional class
//! they produce and the multiplicity of each curve there.

use thiserror::Error;

use crate::exactlin::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("lattice elements have lengths {0} and {1}")]
    DimensionMismatch(usize, usize),
    #[error("exceptional index {index} out of range (lattice has {count})")]
    IndexOutOfRange { index: usize, count: usize },
    #[error("exceptional class E{0} already appears in the curve class")]
    AlreadyBlownUp(usize),
}

/// Picard lattice of P¹ × P¹ blown up at `exceptional_count` points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SurfaceLattice {
    exceptional_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticeElement {
    coefficients: Vec<i64>,
}

impl SurfaceLattice {
    pub fn new(exceptional_count: usize) -> Self {
        SurfaceLattice { exceptional_count }
    }

    pub fn exceptional_count(&self) -> usize {
        self.exceptional_count
    }

    pub fn rank(&self) -> usize {
        2 + self.exceptional_count
    }

    /// Total transform of the class of bidegree `(a, b)`.
    pub fn base_class(&self, a: i64, b: i64) -> LatticeElement {
        let mut coefficients = vec![0; self.rank()];
        coefficients[0] = a;
        coefficients[1] = b;
        LatticeElement { coefficients }
    }

    /// Exceptional class `E_j` (0-based).
    pub fn exceptional(&self, j: usize) -> Result<LatticeElement, SurfaceError> {
        if j >= self.exceptional_count {
            return Err(SurfaceError::IndexOutOfRange {
                index: j,
                count: self.exceptional_count,
            });
        }
        let mut coefficients = vec![0; self.rank()];
        coefficients[2 + j] = 1;
        Ok(LatticeElement { coefficients })
    }

    pub fn element(&self, coefficients: Vec<i64>) -> Result<LatticeElement, SurfaceError> {
        if coefficients.len() != self.rank() {
            return Err(SurfaceError::DimensionMismatch(
                coefficients.len(),
                self.rank(),
            ));
        }
        Ok(LatticeElement { coefficients })
    }
}

impl LatticeElement {
    pub fn coefficients(&self) -> &[i64] {
        &self.coefficients
    }

    pub fn exceptional_count(&self) -> usize {
        self.coefficients.len() - 2
    }

    pub fn self_intersection(&self) -> i64 {
        intersect(self, self).expect("same lattice")
    }
}

pub fn intersect(a: &LatticeElement, b: &LatticeElement) -> Result<i64, SurfaceError> {
    let (x, y) = (&a.coefficients, &b.coefficients);
    if x.len() != y.len() {
        return Err(SurfaceError::DimensionMismatch(x.len(), y.len()));
    }
    let hyperbolic = x[0] * y[1] + x[1] * y[0];
    let exceptional: i64 = x[2..].iter().zip(&y[2..]).map(|(p, q)| p * q).sum();
    Ok(hyperbolic - exceptional)
}

/// Strict transform of `c` after blowing up points where `c` has the given
/// multiplicities: subtracts `m·E_j` for each `(j, m)`.
pub fn strict_transform(
    c: &LatticeElement,
    multiplicities: &[(usize, u32)],
) -> Result<LatticeElement, SurfaceError> {
    let count = c.exceptional_count();
    let mut out = c.clone();
    let mut seen = vec![false; count];
    for &(j, m) in multiplicities {
        if j >= count {
            return Err(SurfaceError::IndexOutOfRange { index: j, count });
        }
        if seen[j] || c.coefficients[2 + j] != 0 {
            return Err(SurfaceError::AlreadyBlownUp(j));
        }
        seen[j] = true;
        out.coefficients[2 + j] -= i64::from(m);
    }
    Ok(out)
}

/// Self-intersection of the reduced preimage of a branch curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalvedSelfIntersection {
    pub value: Rational,
    /// False when the input was odd; this never happens for a genuine
    /// branch curve and points at a modelling mistake.
    pub integral: bool,
}

/// If `π*C = 2D` for a double cover π then `D² = C²/2`.
pub fn branch_halve(self_int: i64) -> HalvedSelfIntersection {
    HalvedSelfIntersection {
        value: Rational::frac(self_int, 2),
        integral: self_int % 2 == 0,
    }
}

/// Self-intersection `2 - 2g` of the diagonal in `C × C`.
pub fn diagonal_self_intersection(genus: u32) -> i64 {
    2 - 2 * i64::from(genus)
}

/// Self-intersection after blowing up points of multiplicities `ms` on a
/// curve with self-intersection `self_int`, for surfaces (like `C × C`) that
/// are not modelled as lattices here.
pub fn blown_up_self_intersection(self_int: i64, ms: &[u32]) -> i64 {
    self_int - ms.iter().map(|&m| i64::from(m) * i64::from(m)).sum::<i64>()
}

/// `(1,0)` class through `points` simple blowups, halved: the section
/// obtained from a horizontal branch component.
pub fn horizontal_section_square(points: usize) -> HalvedSelfIntersection {
    section_square(1, 0, points)
}

/// `(1,1)` class through `points` simple blowups, halved: the section
/// obtained from a diagonal branch component.
pub fn diagonal_section_square(points: usize) -> HalvedSelfIntersection {
    section_square(1, 1, points)
}

fn section_square(a: i64, b: i64, points: usize) -> HalvedSelfIntersection {
    let lattice = SurfaceLattice::new(points);
    let ms: Vec<(usize, u32)> = (0..points).map(|j| (j, 1)).collect();
    let curve = strict_transform(&lattice.base_class(a, b), &ms).expect("indices in range");
    branch_halve(curve.self_intersection())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_pairings() {
        let l = SurfaceLattice::new(3);
        let delta = l.base_class(1, 1);
        let sigma = l.base_class(1, 0);
        assert_eq!(intersect(&delta, &delta).unwrap(), 2);
        assert_eq!(intersect(&sigma, &sigma).unwrap(), 0);
        let e = l.exceptional(0).unwrap();
        assert_eq!(intersect(&e, &e).unwrap(), -1);
        assert_eq!(intersect(&sigma, &l.base_class(0, 1)).unwrap(), 1);
    }

    #[test]
    fn strict_transforms() {
        let l = SurfaceLattice::new(2);
        let s = strict_transform(&l.base_class(1, 0), &[(0, 1), (1, 1)]).unwrap();
        assert_eq!(s.self_intersection(), -2);

        let h = 3;
        let n = 2 * h + 2;
        let l = SurfaceLattice::new(n);
        let ms: Vec<_> = (0..n).map(|j| (j, 1)).collect();
        let d = strict_transform(&l.base_class(1, 1), &ms).unwrap();
        assert_eq!(d.self_intersection(), -2 * h as i64);

        assert_eq!(
            blown_up_self_intersection(diagonal_self_intersection(5), &[1]),
            1 - 2 * 5
        );
    }

    #[test]
    fn strict_transform_errors() {
        let l = SurfaceLattice::new(2);
        let c = l.base_class(1, 0);
        assert_eq!(
            strict_transform(&c, &[(2, 1)]),
            Err(SurfaceError::IndexOutOfRange { index: 2, count: 2 })
        );
        assert_eq!(
            strict_transform(&c, &[(0, 1), (0, 1)]),
            Err(SurfaceError::AlreadyBlownUp(0))
        );
        let once = strict_transform(&c, &[(0, 1)]).unwrap();
        assert_eq!(
            strict_transform(&once, &[(0, 1)]),
            Err(SurfaceError::AlreadyBlownUp(0))
        );
        // multiplicity zero is the identity
        assert_eq!(strict_transform(&c, &[(1, 0)]).unwrap(), c);
    }

    #[test]
    fn halving() {
        assert_eq!(branch_halve(-2).value, Rational::integer(-1));
        assert_eq!(branch_halve(-6).value, Rational::integer(-3));
        assert_eq!(branch_halve(0).value, Rational::zero());
        let odd = branch_halve(-3);
        assert!(!odd.integral);
        assert_eq!(odd.value, Rational::frac(-3, 2));
    }

    #[test]
    fn diagonal() {
        assert_eq!(diagonal_self_intersection(2), -2);
        assert_eq!(diagonal_self_intersection(0), 2);
        assert_eq!(diagonal_self_intersection(11), -20);
    }

    #[test]
    fn dimension_mismatch() {
        let a = SurfaceLattice::new(1).base_class(1, 0);
        let b = SurfaceLattice::new(2).base_class(1, 0);
        assert_eq!(
            intersect(&a, &b),
            Err(SurfaceError::DimensionMismatch(3, 4))
        );
    }
}
