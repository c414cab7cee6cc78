use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::rational::{check_alpha, to_f64, Rational};
use crate::digraph::Digraph;
use crate::error::Result;

/// Dense square matrix over exact rationals, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    order: usize,
    entries: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(order: usize) -> Self {
        RationalMatrix {
            order,
            entries: vec![Rational::zero(); order * order],
        }
    }

    pub fn identity(order: usize) -> Self {
        let mut m = Self::zeros(order);
        for i in 0..order {
            m[(i, i)] = Rational::one();
        }
        m
    }

    /// # Panics
    /// If the rows do not form a square matrix.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let order = rows.len();
        assert!(
            rows.iter().all(|r| r.len() == order),
            "matrix must be square"
        );
        RationalMatrix {
            order,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.order..(i + 1) * self.order]
    }

    pub fn trace(&self) -> Rational {
        (0..self.order).map(|i| self[(i, i)].clone()).sum()
    }

    pub fn mul(&self, other: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.order, other.order);
        let n = self.order;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    /// Principal submatrix on `indices`, in the given order.
    pub fn principal(&self, indices: &[usize]) -> RationalMatrix {
        let rows = indices
            .iter()
            .map(|&i| indices.iter().map(|&j| self[(i, j)].clone()).collect())
            .collect();
        Self::from_rows(rows)
    }

    pub fn to_float(&self) -> FloatMatrix {
        FloatMatrix {
            order: self.order,
            entries: self.entries.iter().map(to_f64).collect(),
        }
    }

    /// Least common multiple of all entry denominators.
    pub fn common_denominator(&self) -> BigInt {
        self.entries
            .iter()
            .fold(BigInt::one(), |acc, e| acc.lcm(e.denom()))
    }

    /// `scale · M` as integers; `scale` must clear every denominator.
    pub fn scaled_integers(&self, scale: &BigInt) -> Vec<BigInt> {
        self.entries
            .iter()
            .map(|e| {
                let v = e * Rational::from_integer(scale.clone());
                debug_assert!(v.is_integer());
                v.to_integer()
            })
            .collect()
    }

    /// Determinant by fraction-free Bareiss elimination on the integer matrix
    /// `L·M` (L = common denominator), divided by Lⁿ at the end.
    pub fn determinant(&self) -> Rational {
        let n = self.order;
        if n == 0 {
            return Rational::one();
        }
        let scale = self.common_denominator();
        let a = self.scaled_integers(&scale);
        let det = bareiss_determinant(n, a);
        Rational::new(det, scale.pow(n as u32))
    }
}

impl Index<(usize, usize)> for RationalMatrix {
    type Output = Rational;

    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.entries[i * self.order + j]
    }
}

impl IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.entries[i * self.order + j]
    }
}

/// Bareiss elimination over the integers; `a` is row-major n×n.
pub fn bareiss_determinant(n: usize, mut a: Vec<BigInt>) -> BigInt {
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k * n + k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[r * n + k].is_zero()) else {
                return BigInt::zero();
            };
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            sign = -sign;
        }
        let pivot = a[k * n + k].clone();
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &pivot * &a[i * n + j] - &a[i * n + k] * &a[k * n + j];
                a[i * n + j] = v / &prev;
            }
            a[i * n + k] = BigInt::zero();
        }
        prev = pivot;
    }
    sign * &a[n * n - 1]
}

/// Dense square binary64 matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct FloatMatrix {
    order: usize,
    entries: Vec<f64>,
}

impl FloatMatrix {
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let order = rows.len();
        assert!(
            rows.iter().all(|r| r.len() == order),
            "matrix must be square"
        );
        FloatMatrix {
            order,
            entries: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.order..(i + 1) * self.order]
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.iter().all(|&x| x >= 0.0)
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.order).map(|i| self.row(i).iter().sum()).collect()
    }
}

impl Index<(usize, usize)> for FloatMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.entries[i * self.order + j]
    }
}

/// A_α(G) = α·D⁺(G) + (1 − α)·A(G).
pub fn build_a_alpha(g: &Digraph, alpha: &Rational) -> Result<RationalMatrix> {
    check_alpha(alpha)?;
    let n = g.n();
    let off = Rational::one() - alpha;
    let mut m = RationalMatrix::zeros(n);
    for v in 0..n {
        m[(v, v)] = alpha * Rational::from_integer(BigInt::from(g.out_degree(v)));
    }
    for (t, h) in g.arcs() {
        m[(t, h)] = off.clone();
    }
    Ok(m)
}

/// Diagonal block of A_α(G) on `vertices`. The diagonal keeps the outdegrees
/// of the whole digraph.
pub fn a_alpha_block(g: &Digraph, alpha: &Rational, vertices: &[usize]) -> Result<RationalMatrix> {
    Ok(build_a_alpha(g, alpha)?.principal(vertices))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::{generate, FamilySpec};
    use crate::linalg::rational::{int, rat};
    use proptest::prelude::*;

    fn laplace_det(m: &RationalMatrix) -> Rational {
        let n = m.order();
        if n == 0 {
            return Rational::one();
        }
        (0..n)
            .map(|j| {
                let rest: Vec<usize> = (1..n).collect();
                let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
                let minor = RationalMatrix::from_rows(
                    rest.iter()
                        .map(|&i| cols.iter().map(|&c| m[(i, c)].clone()).collect())
                        .collect(),
                );
                let term = &m[(0, j)] * laplace_det(&minor);
                if j % 2 == 0 {
                    term
                } else {
                    -term
                }
            })
            .sum()
    }

    #[test]
    fn a_alpha_examples() {
        let c2 = generate(&FamilySpec::Cycle(2)).unwrap();
        let half = rat(1, 2);
        assert_eq!(
            build_a_alpha(&c2, &half).unwrap(),
            RationalMatrix::from_rows(vec![
                vec![half.clone(), half.clone()],
                vec![half.clone(), half.clone()]
            ])
        );
        let star = generate(&FamilySpec::OutStar(3)).unwrap();
        let a0 = build_a_alpha(&star, &int(0)).unwrap();
        assert_eq!(a0.row(0), &[int(0), int(1), int(1)]);
        assert!(a0.row(1).iter().chain(a0.row(2)).all(Zero::is_zero));
        let p2 = generate(&FamilySpec::Path(2)).unwrap();
        assert_eq!(
            build_a_alpha(&p2, &rat(1, 3)).unwrap(),
            RationalMatrix::from_rows(vec![vec![rat(1, 3), rat(2, 3)], vec![int(0), int(0)]])
        );
        assert!(build_a_alpha(&p2, &int(1)).is_err());
    }

    #[test]
    fn bareiss_needs_pivoting() {
        let m = RationalMatrix::from_rows(vec![
            vec![int(0), int(1), int(2)],
            vec![int(1), int(0), int(3)],
            vec![int(4), int(-3), int(8)],
        ]);
        assert_eq!(m.determinant(), laplace_det(&m));
        assert_eq!(m.determinant(), int(-2));
    }

    proptest! {
        #[test]
        fn bareiss_matches_cofactor_expansion(
            n in 1usize..6,
            vals in proptest::collection::vec((-9i64..10, 1i64..5), 25),
        ) {
            let m = RationalMatrix::from_rows(
                (0..n).map(|i| (0..n).map(|j| { let (a, b) = vals[i * 5 + j]; rat(a, b) }).collect()).collect(),
            );
            prop_assert_eq!(m.determinant(), laplace_det(&m));
        }
    }
}
