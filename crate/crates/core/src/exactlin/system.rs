use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{LinearError, Rational};

/// One equation `coefficients · x = rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub coefficients: Vec<Rational>,
    pub rhs: Rational,
}

impl Row {
    pub fn new(coefficients: Vec<Rational>, rhs: Rational) -> Self {
        Row { coefficients, rhs }
    }
}

/// A linear system over Q with named variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinearSystem {
    pub variables: Vec<String>,
    pub rows: Vec<Row>,
}

/// A linear combination of the original rows whose left-hand side vanishes
/// while the right-hand side does not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    /// One multiplier per original row.
    pub multipliers: Vec<Rational>,
    /// `Σ multipliers[k] · rhs[k]`, nonzero.
    pub residual: Rational,
}

impl Certificate {
    /// Recomputes the combination against `sys`; true iff every coefficient
    /// cancels and the right-hand side does not.
    pub fn check(&self, sys: &LinearSystem) -> bool {
        if self.multipliers.len() != sys.rows.len() {
            return false;
        }
        let n = sys.variables.len();
        let mut lhs = vec![Rational::zero(); n];
        let mut rhs = Rational::zero();
        for (y, row) in self.multipliers.iter().zip(&sys.rows) {
            for (acc, a) in lhs.iter_mut().zip(&row.coefficients) {
                *acc += &(y * a);
            }
            rhs += &(y * &row.rhs);
        }
        lhs.iter().all(Rational::is_zero) && !rhs.is_zero() && rhs == self.residual
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveResult {
    /// Values in variable order.
    Unique(Vec<Rational>),
    Underdetermined {
        /// Solution with every free variable set to zero.
        particular: Vec<Rational>,
        /// Indices of the free (non-pivot) variables.
        free: Vec<usize>,
        /// `determined[j]` holds when variable `j` takes the same value in
        /// every solution.
        determined: Vec<bool>,
    },
    Inconsistent(Certificate),
}

impl SolveResult {
    pub fn is_unique(&self) -> bool {
        matches!(self, SolveResult::Unique(_))
    }
}

/// Full outcome of eliminating a system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Analysis {
    pub result: SolveResult,
    /// Rank of the coefficient matrix.
    pub rank: usize,
    /// Rank of the augmented matrix `[A | b]`.
    pub augmented_rank: usize,
    /// Rows (by original index) that reduced to `0 = 0` against the rows
    /// before them.
    pub redundant_rows: Vec<usize>,
    /// Rows that reduced to `0 = nonzero`.
    pub inconsistent_rows: Vec<usize>,
}

impl LinearSystem {
    pub fn new(variables: Vec<String>) -> Self {
        LinearSystem {
            variables,
            rows: Vec::new(),
        }
    }

    pub fn push_row(
        &mut self,
        coefficients: Vec<Rational>,
        rhs: Rational,
    ) -> Result<(), LinearError> {
        if coefficients.len() != self.variables.len() {
            return Err(LinearError::RowLength {
                row: self.rows.len(),
                expected: self.variables.len(),
                found: coefficients.len(),
            });
        }
        self.rows.push(Row::new(coefficients, rhs));
        Ok(())
    }

    pub fn validate(&self) -> Result<(), LinearError> {
        for (k, row) in self.rows.iter().enumerate() {
            if row.coefficients.len() != self.variables.len() {
                return Err(LinearError::RowLength {
                    row: k,
                    expected: self.variables.len(),
                    found: row.coefficients.len(),
                });
            }
        }
        Ok(())
    }

    pub fn solve(&self) -> Result<SolveResult, LinearError> {
        Ok(self.analyze()?.result)
    }

    pub fn rank(&self) -> Result<usize, LinearError> {
        Ok(self.analyze()?.rank)
    }

    /// True iff substituting `values` satisfies every row exactly.
    pub fn is_satisfied_by(&self, values: &[Rational]) -> bool {
        values.len() == self.variables.len()
            && self.rows.iter().all(|row| {
                let lhs: Rational = row
                    .coefficients
                    .iter()
                    .zip(values)
                    .map(|(a, x)| a * x)
                    .sum();
                lhs == row.rhs
            })
    }

    /// Fraction-free Gauss-Jordan elimination, processing rows in order.
    ///
    /// Every working row is an integer vector `[coefficients | rhs | tracker]`
    /// where `tracker` records the integer combination of the (scaled)
    /// original rows it equals. Rows are reduced by cross-multiplication and
    /// then divided by their content, so no fractions appear until the final
    /// back-substitution.
    pub fn analyze(&self) -> Result<Analysis, LinearError> {
        self.validate()?;
        let n = self.variables.len();
        let m = self.rows.len();

        // Scale each original row to integers.
        let mut scales = Vec::with_capacity(m);
        let mut pending = Vec::with_capacity(m);
        for (k, row) in self.rows.iter().enumerate() {
            let lcm = row
                .coefficients
                .iter()
                .chain(std::iter::once(&row.rhs))
                .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            let mut v: Vec<BigInt> = row
                .coefficients
                .iter()
                .chain(std::iter::once(&row.rhs))
                .map(|q| q.numer() * (&lcm / q.denom()))
                .collect();
            v.extend((0..m).map(|j| {
                if j == k {
                    BigInt::one()
                } else {
                    BigInt::zero()
                }
            }));
            scales.push(lcm);
            pending.push(v);
        }

        // (pivot column, row) pairs in insertion order.
        let mut pivots: Vec<(usize, Vec<BigInt>)> = Vec::new();
        let mut redundant_rows = Vec::new();
        let mut inconsistent_rows = Vec::new();
        let mut certificate = None;

        for (k, mut row) in pending.into_iter().enumerate() {
            for (col, prow) in &pivots {
                if !row[*col].is_zero() {
                    eliminate(&mut row, prow, *col);
                }
            }
            match (0..n).find(|&j| !row[j].is_zero()) {
                Some(col) => {
                    normalize_sign(&mut row, col);
                    for (_, prow) in pivots.iter_mut() {
                        if !prow[col].is_zero() {
                            eliminate(prow, &row, col);
                        }
                    }
                    pivots.push((col, row));
                }
                None if row[n].is_zero() => redundant_rows.push(k),
                None => {
                    inconsistent_rows.push(k);
                    if certificate.is_none() {
                        let multipliers: Vec<Rational> = (0..m)
                            .map(|j| Rational::integer(&row[n + 1 + j] * &scales[j]))
                            .collect();
                        let residual = Rational::integer(row[n].clone());
                        certificate = Some(Certificate {
                            multipliers,
                            residual,
                        });
                    }
                }
            }
        }

        let rank = pivots.len();
        let augmented_rank = rank + usize::from(certificate.is_some());

        let result = match certificate {
            Some(cert) => SolveResult::Inconsistent(cert),
            None => {
                let mut is_pivot = vec![false; n];
                for (col, _) in &pivots {
                    is_pivot[*col] = true;
                }
                let free: Vec<usize> = (0..n).filter(|&j| !is_pivot[j]).collect();
                let mut values = vec![Rational::zero(); n];
                let mut determined = vec![false; n];
                for (col, prow) in &pivots {
                    let lead = Rational::integer(prow[*col].clone());
                    values[*col] = Rational::integer(prow[n].clone()) / &lead;
                    determined[*col] = free.iter().all(|&f| prow[f].is_zero());
                }
                if free.is_empty() {
                    SolveResult::Unique(values)
                } else {
                    SolveResult::Underdetermined {
                        particular: values,
                        free,
                        determined,
                    }
                }
            }
        };

        Ok(Analysis {
            result,
            rank,
            augmented_rank,
            redundant_rows,
            inconsistent_rows,
        })
    }
}

/// `target ← (pivot[col]·target − target[col]·pivot) / content`.
fn eliminate(target: &mut [BigInt], pivot: &[BigInt], col: usize) {
    let p = pivot[col].clone();
    let t = target[col].clone();
    let g = p.gcd(&t);
    let (p, t) = (&p / &g, &t / &g);
    for (x, y) in target.iter_mut().zip(pivot) {
        if y.is_zero() {
            if !x.is_zero() {
                *x *= &p;
            }
        } else {
            *x = &*x * &p - &t * y;
        }
    }
    debug_assert!(target[col].is_zero());
    remove_content(target);
}

fn remove_content(v: &mut [BigInt]) {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
}

fn normalize_sign(v: &mut [BigInt], col: usize) {
    if v[col].is_negative() {
        for x in v.iter_mut() {
            *x = -&*x;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::integer(n)
    }

    fn sys(vars: &[&str], rows: &[(&[Rational], Rational)]) -> LinearSystem {
        let mut s = LinearSystem::new(vars.iter().map(|v| v.to_string()).collect());
        for (coeffs, rhs) in rows {
            s.push_row(coeffs.to_vec(), rhs.clone()).unwrap();
        }
        s
    }

    #[test]
    fn symmetric_two_by_two() {
        let s = sys(
            &["x", "y"],
            &[(&[q(1), q(1)], q(2)), (&[q(1), q(-1)], q(0))],
        );
        assert_eq!(s.solve().unwrap(), SolveResult::Unique(vec![q(1), q(1)]));
    }

    #[test]
    fn genus_two_weierstrass_subsystem() {
        // Twice the horizontal relation minus the diagonal one: a = 12c.
        let s = sys(
            &["a", "c"],
            &[
                (&[q(1), q(-12)], q(0)),
                (&[q(0), q(1)], Rational::frac(-1, 10)),
            ],
        );
        assert_eq!(
            s.solve().unwrap(),
            SolveResult::Unique(vec![Rational::frac(-6, 5), Rational::frac(-1, 10)])
        );
        // Written as 2a = 12c the same data gives a = 6c.
        let s = sys(
            &["a", "c"],
            &[
                (&[q(2), q(-12)], q(0)),
                (&[q(0), q(1)], Rational::frac(-1, 10)),
            ],
        );
        assert_eq!(
            s.solve().unwrap(),
            SolveResult::Unique(vec![Rational::frac(-3, 5), Rational::frac(-1, 10)])
        );
    }

    #[test]
    fn inconsistent_has_checkable_certificate() {
        let s = sys(&["x"], &[(&[q(1)], q(1)), (&[q(1)], q(2))]);
        match s.solve().unwrap() {
            SolveResult::Inconsistent(cert) => assert!(cert.check(&s)),
            other => panic!("expected inconsistency, got {other:?}"),
        }
    }

    #[test]
    fn ranks() {
        let z = sys(
            &["a", "b", "c"],
            &[
                (&[q(0), q(0), q(0)], q(0)),
                (&[q(0), q(0), q(0)], q(0)),
                (&[q(0), q(0), q(0)], q(0)),
            ],
        );
        assert_eq!(z.rank().unwrap(), 0);

        let mut id = LinearSystem::new((0..4).map(|i| format!("x{i}")).collect());
        for i in 0..4 {
            id.push_row((0..4).map(|j| q(i64::from(i == j))).collect(), q(0))
                .unwrap();
        }
        assert_eq!(id.rank().unwrap(), 4);

        let p = sys(&["x", "y"], &[(&[q(1), q(2)], q(0)), (&[q(2), q(4)], q(0))]);
        assert_eq!(p.rank().unwrap(), 1);
        assert_eq!(p.analyze().unwrap().redundant_rows, vec![1]);
    }

    #[test]
    fn malformed_row_is_structural_error() {
        let mut s = LinearSystem::new(vec!["x".into(), "y".into()]);
        assert!(matches!(
            s.push_row(vec![q(1)], q(0)),
            Err(LinearError::RowLength {
                expected: 2,
                found: 1,
                ..
            })
        ));
        s.rows.push(Row::new(vec![q(1)], q(0)));
        assert!(matches!(
            s.solve(),
            Err(LinearError::RowLength { row: 0, .. })
        ));
    }

    #[test]
    fn underdetermined_marks_determined_variables() {
        // x = 3, y + z = 1
        let s = sys(
            &["x", "y", "z"],
            &[(&[q(1), q(0), q(0)], q(3)), (&[q(0), q(1), q(1)], q(1))],
        );
        match s.solve().unwrap() {
            SolveResult::Underdetermined {
                particular,
                free,
                determined,
            } => {
                assert_eq!(free, vec![2]);
                assert_eq!(determined, vec![true, false, false]);
                assert!(s.is_satisfied_by(&particular));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rational_entries() {
        // x/2 + y/3 = 1, x - y = 1/6
        let s = sys(
            &["x", "y"],
            &[
                (&[Rational::frac(1, 2), Rational::frac(1, 3)], q(1)),
                (&[q(1), q(-1)], Rational::frac(1, 6)),
            ],
        );
        let SolveResult::Unique(v) = s.solve().unwrap() else {
            panic!()
        };
        assert!(s.is_satisfied_by(&v));
        assert_eq!(v, vec![Rational::frac(19, 15), Rational::frac(11, 10)]);
    }
}
