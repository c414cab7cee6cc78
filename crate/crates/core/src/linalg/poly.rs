//! Univariate polynomials over the rationals.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::matrix::RationalMatrix;
use super::rational::{format_rational, Rational};
use crate::error::{Error, Result};

/// Coefficients stored low degree first, without trailing zeros; the zero
/// polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolynomialR {
    coeffs: Vec<Rational>,
}

impl PolynomialR {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        PolynomialR { coeffs }
    }

    pub fn zero() -> Self {
        PolynomialR { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        PolynomialR::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        PolynomialR::new(vec![c])
    }

    /// x − r
    pub fn linear_root(r: Rational) -> Self {
        PolynomialR::new(vec![-r, Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn mul(&self, other: &PolynomialR) -> PolynomialR {
        if self.is_zero() || other.is_zero() {
            return PolynomialR::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        PolynomialR::new(out)
    }

    pub fn sub(&self, other: &PolynomialR) -> PolynomialR {
        let len = self.coeffs.len().max(other.coeffs.len());
        let get =
            |p: &PolynomialR, i: usize| p.coeffs.get(i).cloned().unwrap_or_else(Rational::zero);
        PolynomialR::new((0..len).map(|i| get(self, i) - get(other, i)).collect())
    }

    pub fn derivative(&self) -> PolynomialR {
        PolynomialR::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// Scaled to leading coefficient 1; zero stays zero.
    pub fn monic(&self) -> PolynomialR {
        match self.leading() {
            None => PolynomialR::zero(),
            Some(lead) => {
                let lead = lead.clone();
                PolynomialR::new(self.coeffs.iter().map(|c| c / &lead).collect())
            }
        }
    }

    /// Long division: `self = divisor·q + r` with deg r < deg divisor.
    pub fn div_rem(&self, divisor: &PolynomialR) -> Result<(PolynomialR, PolynomialR)> {
        let dd = divisor.degree().ok_or(Error::ZeroDivisor)?;
        let lead = divisor.leading().expect("nonzero divisor").clone();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree().filter(|&nd| nd >= dd) else {
            return Ok((PolynomialR::zero(), self.clone()));
        };
        let mut quot = vec![Rational::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = &rem[k + dd] / &lead;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &c * d;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((PolynomialR::new(quot), PolynomialR::new(rem)))
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, other: &PolynomialR) -> PolynomialR {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("b is nonzero");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Yun's square-free decomposition: monic pairwise-coprime square-free
    /// factors `(f_i, i)` with `self = lead · Π f_i^i`. Constant factors are
    /// omitted.
    pub fn square_free_factors(&self) -> Vec<(PolynomialR, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.div_rem(&a0).expect("gcd is nonzero").0;
        let c = df.div_rem(&a0).expect("gcd is nonzero").0;
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&d);
            let next_b = b.div_rem(&a).expect("gcd is nonzero").0;
            let next_c = d.div_rem(&a).expect("gcd is nonzero").0;
            if a.degree().unwrap_or(0) > 0 {
                out.push((a, i));
            }
            d = next_c.sub(&next_b.derivative());
            b = next_b;
            i += 1;
        }
        out
    }

    pub fn product(factors: impl IntoIterator<Item = PolynomialR>) -> PolynomialR {
        factors
            .into_iter()
            .fold(PolynomialR::one(), |acc, f| acc.mul(&f))
    }
}

impl fmt::Display for PolynomialR {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            let coeff = if mag.is_integer() {
                mag.numer().to_string()
            } else {
                format_rational(&mag)
            };
            match i {
                0 => write!(f, "{coeff}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{coeff}*")?;
                    }
                    if i == 1 {
                        f.write_str("x")?;
                    } else {
                        write!(f, "x^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// det(xI − M) by Faddeev–LeVerrier on the integer matrix B = L·M, where L
/// clears all denominators; the result is rescaled by powers of L.
pub fn char_poly(m: &RationalMatrix) -> PolynomialR {
    let n = m.order();
    let scale = m.common_denominator();
    let b = m.scaled_integers(&scale);
    let c = faddeev_leverrier(n, &b);
    let mut coeffs = Vec::with_capacity(n + 1);
    for (j, cj) in c.into_iter().enumerate() {
        let den = scale.pow((n - j) as u32);
        coeffs.push(Rational::new(cj, den));
    }
    PolynomialR::new(coeffs)
}

/// Integer coefficients (low first) of det(xI − B) for an integer matrix B.
fn faddeev_leverrier(n: usize, b: &[BigInt]) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); n + 1];
    c[n] = BigInt::one();
    let mut mk = vec![BigInt::zero(); n * n];
    for k in 1..=n {
        // M_k = B·M_{k-1} + c_{n-k+1}·I
        let mut next = matmul(n, b, &mk);
        for i in 0..n {
            next[i * n + i] += &c[n - k + 1];
        }
        // c_{n-k} = −tr(B·M_k)/k; only the diagonal of B·M_k is needed.
        let mut tr = BigInt::zero();
        for i in 0..n {
            for j in 0..n {
                let bij = &b[i * n + j];
                if !bij.is_zero() {
                    tr += bij * &next[j * n + i];
                }
            }
        }
        let k_big = BigInt::from(k);
        debug_assert!((&tr % &k_big).is_zero());
        c[n - k] = -(tr / k_big);
        mk = next;
    }
    c
}

fn matmul(n: usize, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = &a[i * n + k];
            if aik.is_zero() {
                continue;
            }
            for j in 0..n {
                let bkj = &b[k * n + j];
                if !bkj.is_zero() {
                    out[i * n + j] += aik * bkj;
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::{generate, FamilySpec};
    use crate::linalg::matrix::build_a_alpha;
    use crate::linalg::rational::{int, rat};
    use proptest::prelude::*;

    fn p(cs: &[i64]) -> PolynomialR {
        PolynomialR::new(cs.iter().map(|&c| int(c)).collect())
    }

    /// Oracle: det(xI − M) at integer points via Bareiss, independent of the
    /// Faddeev–LeVerrier path.
    fn char_poly_at(m: &RationalMatrix, x: i64) -> Rational {
        let n = m.order();
        let mut shifted = m.clone();
        for i in 0..n {
            for j in 0..n {
                shifted[(i, j)] = -m[(i, j)].clone();
            }
            shifted[(i, i)] += int(x);
        }
        shifted.determinant()
    }

    #[test]
    fn identity_char_poly() {
        assert_eq!(char_poly(&RationalMatrix::identity(2)), p(&[1, -2, 1]));
    }

    #[test]
    fn c3_adjacency_char_poly() {
        let c3 = generate(&FamilySpec::Cycle(3)).unwrap();
        assert_eq!(
            char_poly(&build_a_alpha(&c3, &int(0)).unwrap()),
            p(&[-1, 0, 0, 1])
        );
    }

    #[test]
    fn c2_half_char_poly() {
        let c2 = generate(&FamilySpec::Cycle(2)).unwrap();
        assert_eq!(
            char_poly(&build_a_alpha(&c2, &rat(1, 2)).unwrap()),
            p(&[0, -1, 1])
        );
    }

    #[test]
    fn division_examples() {
        let (q, r) = p(&[-1, 0, 1]).div_rem(&p(&[-1, 1])).unwrap();
        assert_eq!((q, r), (p(&[1, 1]), PolynomialR::zero()));
        let (q, r) = p(&[1, 0, 1]).div_rem(&p(&[0, 1])).unwrap();
        assert_eq!((q, r), (p(&[0, 1]), p(&[1])));
        assert_eq!(
            p(&[1]).div_rem(&PolynomialR::zero()),
            Err(Error::ZeroDivisor)
        );
        let (q, r) = p(&[1, 1]).div_rem(&p(&[0, 0, 1])).unwrap();
        assert_eq!((q, r), (PolynomialR::zero(), p(&[1, 1])));
    }

    #[test]
    fn square_free_of_repeated_roots() {
        // (x-1)^3 (x+2) x^2
        let f = PolynomialR::product([
            p(&[-1, 1]),
            p(&[-1, 1]),
            p(&[-1, 1]),
            p(&[2, 1]),
            p(&[0, 1]),
            p(&[0, 1]),
        ]);
        let factors = f.square_free_factors();
        assert_eq!(
            factors,
            vec![(p(&[2, 1]), 1), (p(&[0, 1]), 2), (p(&[-1, 1]), 3)]
        );
    }

    #[test]
    fn display() {
        assert_eq!(p(&[-1, 0, 0, 1]).to_string(), "x^3 - 1");
        assert_eq!(
            PolynomialR::new(vec![rat(1, 2), int(-3), int(1)]).to_string(),
            "x^2 - 3*x + 1/2"
        );
    }

    fn small_matrix(n: usize, vals: &[(i64, i64)]) -> RationalMatrix {
        RationalMatrix::from_rows(
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            let (a, b) = vals[i * 6 + j];
                            rat(a, b)
                        })
                        .collect()
                })
                .collect(),
        )
    }

    proptest! {
        #[test]
        fn char_poly_constant_term_is_signed_determinant(
            n in 1usize..7,
            vals in proptest::collection::vec((-6i64..7, 1i64..4), 36),
        ) {
            let m = small_matrix(n, &vals);
            let cp = char_poly(&m);
            prop_assert_eq!(cp.degree(), Some(n));
            prop_assert!(cp.leading().unwrap().is_one());
            let det = m.determinant();
            let expected = if n % 2 == 0 { det } else { -det };
            prop_assert_eq!(cp.eval(&int(0)), expected);
            for x in [-2i64, 1, 3] {
                prop_assert_eq!(cp.eval(&int(x)), char_poly_at(&m, x));
            }
        }

        #[test]
        fn division_identity(
            a in proptest::collection::vec(-5i64..6, 1..7),
            b in proptest::collection::vec(-5i64..6, 1..4),
        ) {
            let (num, den) = (p(&a), p(&b));
            prop_assume!(!den.is_zero());
            let (q, r) = num.div_rem(&den).unwrap();
            prop_assert_eq!(den.mul(&q).sub(&num.sub(&r)), PolynomialR::zero());
            prop_assert!(r.is_zero() || r.degree() < den.degree());
        }

        #[test]
        fn square_free_factors_multiply_back(roots in proptest::collection::vec(-3i64..4, 1..7)) {
            let f = PolynomialR::product(roots.iter().map(|&r| p(&[-r, 1])));
            let back = PolynomialR::product(
                f.square_free_factors().into_iter().flat_map(|(g, k)| std::iter::repeat_n(g, k)),
            );
            prop_assert_eq!(back, f);
        }
    }
}
