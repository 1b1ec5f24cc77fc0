//! Integer Laurent polynomials and Alexander polynomials of torus knots.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::expr::TorusKnot;

/// Dense integer Laurent polynomial `sum c_k t^(low + k)`, kept trimmed so
/// the first and last coefficients are nonzero (the zero polynomial has no
/// coefficients).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LaurentPolynomial {
    low: i64,
    coeffs: Vec<i64>,
}

impl LaurentPolynomial {
    pub fn zero() -> Self {
        LaurentPolynomial { low: 0, coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    pub fn monomial(c: i64, exp: i64) -> Self {
        Self::from_coeffs(exp, vec![c])
    }

    /// `coeffs[k]` is the coefficient of `t^(low + k)`.
    pub fn from_coeffs(low: i64, coeffs: Vec<i64>) -> Self {
        let mut p = LaurentPolynomial { low, coeffs };
        p.trim();
        p
    }

    /// `t^n - 1`.
    pub fn t_pow_minus_one(n: u64) -> Self {
        let mut c = vec![0; n as usize + 1];
        c[0] = -1;
        c[n as usize] += 1;
        Self::from_coeffs(0, c)
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|&&c| c == 0).count();
        if lead == self.coeffs.len() {
            self.coeffs.clear();
            self.low = 0;
        } else if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i64;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_exp(&self) -> i64 {
        self.low
    }

    pub fn max_exp(&self) -> i64 {
        self.low + self.coeffs.len() as i64 - 1
    }

    pub fn coefficient(&self, exp: i64) -> i64 {
        let k = exp - self.low;
        if k < 0 {
            return 0;
        }
        self.coeffs.get(k as usize).copied().unwrap_or(0)
    }

    /// Nonzero `(exponent, coefficient)` pairs in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(move |(k, &c)| (self.low + k as i64, c))
    }

    pub fn shift(&self, by: i64) -> Self {
        LaurentPolynomial { low: self.low + by, coeffs: self.coeffs.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut c = vec![0i64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::from_coeffs(self.low + other.low, c)
    }

    /// Exact division; `None` when `divisor` does not divide `self` over the
    /// integers.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let n = self.coeffs.len();
        let m = divisor.coeffs.len();
        if n < m {
            return None;
        }
        let lead = *divisor.coeffs.last().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0i64; n - m + 1];
        for k in (0..=n - m).rev() {
            let top = rem[k + m - 1];
            if top % lead != 0 {
                return None;
            }
            let qk = top / lead;
            quot[k] = qk;
            if qk != 0 {
                for (j, &d) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= qk * d;
                }
            }
        }
        if rem.iter().any(|&r| r != 0) {
            return None;
        }
        Some(Self::from_coeffs(self.low - divisor.low, quot))
    }

    pub fn eval_big(&self, t: i64) -> BigInt {
        // Horner over the dense part, then the t^low factor.
        let tb = BigInt::from(t);
        let mut acc = BigInt::zero();
        for &c in self.coeffs.iter().rev() {
            acc = acc * &tb + c;
        }
        if self.low >= 0 {
            acc * tb.pow(self.low as u32)
        } else {
            // Only units t = +-1 are evaluated at negative powers here.
            assert!(t == 1 || t == -1, "negative powers only at t = +-1");
            if t == -1 && (-self.low) % 2 == 1 {
                -acc
            } else {
                acc
            }
        }
    }

    /// Multiplies by `+-t^k` so the exponents are centered at zero and the
    /// value at `t = 1` is positive.
    pub fn symmetrized(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let span = self.max_exp() - self.low;
        debug_assert!(span % 2 == 0, "odd span cannot be centered");
        let mut p = self.shift(-self.low - span / 2);
        if p.eval_big(1) < BigInt::zero() {
            p.coeffs.iter_mut().for_each(|c| *c = -*c);
        }
        p
    }

    pub fn is_symmetric(&self) -> bool {
        self.terms().all(|(k, c)| self.coefficient(-k) == c)
    }
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.terms() {
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            if !first {
                f.write_str(" ")?;
            }
            let mag = c.unsigned_abs();
            let sep = if first || sign.is_empty() { "" } else { " " };
            let body = match (k, mag) {
                (0, m) => m.to_string(),
                (1, 1) => "t".to_string(),
                (1, m) => format!("{m}t"),
                (k, 1) => format!("t^{k}"),
                (k, m) => format!("{m}t^{k}"),
            };
            write!(f, "{sign}{sep}{body}")?;
            first = false;
        }
        Ok(())
    }
}

/// Largest `(p-1)(q-1)` accepted by [`alexander_torus`].
pub const MAX_ALEXANDER_DEGREE: u64 = 2_000_000;

/// Symmetrized `(t^pq - 1)(t - 1) / ((t^p - 1)(t^q - 1))`, computed by exact
/// polynomial division.
pub fn alexander_torus(p: u64, q: u64) -> Result<LaurentPolynomial> {
    let knot = TorusKnot::new(p, q)?;
    let (p, q) = (knot.p(), knot.q());
    if (p - 1) * (q - 1) > MAX_ALEXANDER_DEGREE {
        return Err(Error::Overflow("Alexander polynomial degree"));
    }
    let num = LaurentPolynomial::t_pow_minus_one(p * q).mul(&LaurentPolynomial::t_pow_minus_one(1));
    // Divide by the two factors separately; each step is exact.
    let partial = num
        .div_exact(&LaurentPolynomial::t_pow_minus_one(p))
        .ok_or_else(|| Error::Inconsistent(format!("t^{p}-1 does not divide the numerator")))?;
    let delta = partial
        .div_exact(&LaurentPolynomial::t_pow_minus_one(q))
        .ok_or_else(|| Error::Inconsistent(format!("t^{q}-1 does not divide the numerator")))?;
    Ok(delta.symmetrized())
}

/// Signed value of the symmetrized `Delta_{T(p,q)}(-1)` in closed form.
///
/// `(t^pq - 1)/(t^p - 1)` at `t = -1` is `q` when `p` is even and `1` when
/// both are odd; `(t - 1)/(t^q - 1)` is `1` for odd `q`. The centering
/// factor `t^{-(p-1)(q-1)/2}` contributes the sign.
pub fn alexander_torus_at_minus_one(knot: TorusKnot) -> i64 {
    let k = knot.normalized();
    let (p, q) = (k.p(), k.q());
    if p == 1 {
        return 1;
    }
    let magnitude = if p % 2 == 0 {
        q as i64
    } else if q % 2 == 0 {
        p as i64
    } else {
        1
    };
    let half_degree = (p - 1) * (q - 1) / 2;
    if half_degree % 2 == 1 {
        -magnitude
    } else {
        magnitude
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Long division oracle: repeatedly subtract shifted copies of the
    /// divisor, working from a plain coefficient vector.
    fn oracle_div(mut num: Vec<i64>, den: &[i64]) -> Vec<i64> {
        let m = den.len();
        let mut q = vec![0; num.len() - m + 1];
        while num.len() >= m {
            let k = num.len() - m;
            let c = *num.last().unwrap() / den[m - 1];
            q[k] = c;
            for j in 0..m {
                num[k + j] -= c * den[j];
            }
            assert_eq!(num.pop(), Some(0));
        }
        assert!(num.iter().all(|&r| r == 0));
        q
    }

    fn t_n_minus_1(n: usize) -> Vec<i64> {
        let mut v = vec![0; n + 1];
        v[0] = -1;
        v[n] = 1;
        v
    }

    fn conv(a: &[i64], b: &[i64]) -> Vec<i64> {
        let mut c = vec![0; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                c[i + j] += x * y;
            }
        }
        c
    }

    #[test]
    fn t25_is_alternating() {
        let d = alexander_torus(2, 5).unwrap();
        assert_eq!(d, LaurentPolynomial::from_coeffs(-2, vec![1, -1, 1, -1, 1]));
    }

    #[test]
    fn unknot_is_one() {
        assert_eq!(alexander_torus(1, 9).unwrap(), LaurentPolynomial::one());
    }

    #[test]
    fn t34_matches_long_division() {
        let num = conv(&t_n_minus_1(12), &t_n_minus_1(1));
        let den = conv(&t_n_minus_1(3), &t_n_minus_1(4));
        let q = oracle_div(num, &den);
        // Frozen from the oracle: t^6 - t^5 + t^3 - t + 1.
        assert_eq!(q, vec![1, -1, 0, 1, 0, -1, 1]);
        let expect = LaurentPolynomial::from_coeffs(-3, q);
        assert_eq!(alexander_torus(3, 4).unwrap(), expect);
    }

    #[test]
    fn small_torus_polys_match_oracle_and_are_symmetric() {
        for p in 2..8u64 {
            for q in (p + 1)..20u64 {
                if num_integer::gcd(p, q) != 1 {
                    continue;
                }
                let num = conv(&t_n_minus_1((p * q) as usize), &t_n_minus_1(1));
                let den = conv(&t_n_minus_1(p as usize), &t_n_minus_1(q as usize));
                let raw = LaurentPolynomial::from_coeffs(0, oracle_div(num, &den));
                let d = alexander_torus(p, q).unwrap();
                assert_eq!(d, raw.symmetrized());
                assert!(d.is_symmetric());
                assert_eq!(d.eval_big(1), BigInt::from(1));
                assert_eq!(d.max_exp(), ((p - 1) * (q - 1) / 2) as i64);
            }
        }
    }

    #[test]
    fn closed_form_at_minus_one_matches_polynomial() {
        for p in 1..12u64 {
            for q in 1..40u64 {
                if num_integer::gcd(p, q) != 1 {
                    continue;
                }
                let d = alexander_torus(p, q).unwrap();
                let k = TorusKnot::new(p, q).unwrap();
                assert_eq!(d.eval_big(-1), BigInt::from(alexander_torus_at_minus_one(k)), "T({p},{q})");
            }
        }
    }

    #[test]
    fn t59_at_minus_one() {
        assert_eq!(alexander_torus(5, 9).unwrap().eval_big(-1).magnitude().to_string(), "1");
    }

    #[test]
    fn non_coprime_rejected() {
        assert!(alexander_torus(4, 6).is_err());
    }

    #[test]
    fn display() {
        assert_eq!(alexander_torus(2, 3).unwrap().to_string(), "t^-1 - 1 + t");
    }
}
