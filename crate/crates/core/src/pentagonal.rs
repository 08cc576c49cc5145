//! Generalized pentagonal exponents and the closed form of `prod (1 - x^k)`.
//!
//! Index `n >= 1` contributes `(-1)^n` at both `(3n^2 - n)/2` and
//! `(3n^2 + n)/2`; the constant term `+1` carries no index.

use std::fmt;
use std::ops::{Mul, Neg};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::TruncatedSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    /// `(-1)^n`.
    pub fn parity(n: u64) -> Sign {
        if n.is_multiple_of(2) {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn to_bigint(self) -> BigInt {
        BigInt::from(self.as_i8())
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_i8())
    }
}

impl Serialize for Sign {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i8(self.as_i8())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match i8::deserialize(d)? {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(serde::de::Error::custom(format!(
                "sign must be 1 or -1, got {other}"
            ))),
        }
    }
}

/// A signed monomial `sign * x^exp` with unit coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Term {
    pub exp: usize,
    pub sign: Sign,
}

impl Term {
    pub fn new(exp: usize, sign: Sign) -> Self {
        Term { exp, sign }
    }
}

/// The two exponents contributed by index `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PentagonalPair {
    pub n: u64,
    pub g_minus: usize,
    pub g_plus: usize,
    pub sign: Sign,
}

fn exponent(n: u64, plus: bool) -> Result<usize> {
    let three_n_sq = n
        .checked_mul(n)
        .and_then(|sq| sq.checked_mul(3))
        .ok_or(Error::Overflow(n))?;
    let numer = if plus {
        three_n_sq.checked_add(n).ok_or(Error::Overflow(n))?
    } else {
        three_n_sq - n
    };
    usize::try_from(numer / 2).map_err(|_| Error::Overflow(n))
}

/// `(3n^2 - n) / 2`.
pub fn g_minus(n: u64) -> Result<usize> {
    exponent(n, false)
}

/// `(3n^2 + n) / 2`.
pub fn g_plus(n: u64) -> Result<usize> {
    exponent(n, true)
}

pub fn pentagonal_pair(n: u64) -> Result<PentagonalPair> {
    if n == 0 {
        return Err(Error::ZeroIndex);
    }
    Ok(PentagonalPair {
        n,
        g_minus: g_minus(n)?,
        g_plus: g_plus(n)?,
        sign: Sign::parity(n),
    })
}

/// Every pair whose smaller exponent is at most `order`.
pub fn pairs_upto(order: usize) -> impl Iterator<Item = PentagonalPair> {
    (1u64..)
        .map_while(|n| pentagonal_pair(n).ok())
        .take_while(move |p| p.g_minus <= order)
}

/// The nonzero terms of the closed form up to `order`, strictly ascending.
///
/// The `g_minus` and `g_plus` streams are merged by a two-pointer walk; the
/// interleaving `g_minus(n) < g_plus(n) < g_minus(n+1)` means the walk never
/// has to reorder, and that is checked as the merge proceeds.
pub fn pentagonal_terms_upto(order: usize) -> Vec<Term> {
    let pairs: Vec<PentagonalPair> = pairs_upto(order).collect();
    let mut out = Vec::with_capacity(2 * pairs.len() + 1);
    out.push(Term::new(0, Sign::Plus));

    let (mut lo, mut hi) = (0usize, 0usize);
    while lo < pairs.len() || hi < pairs.len() {
        let take_minus =
            hi >= pairs.len() || (lo < pairs.len() && pairs[lo].g_minus < pairs[hi].g_plus);
        let term = if take_minus {
            lo += 1;
            Term::new(pairs[lo - 1].g_minus, pairs[lo - 1].sign)
        } else {
            hi += 1;
            Term::new(pairs[hi - 1].g_plus, pairs[hi - 1].sign)
        };
        if term.exp > order {
            // Only a trailing g_plus can overshoot; every later g_minus is larger still.
            continue;
        }
        assert!(
            out.last().is_none_or(|prev| prev.exp < term.exp),
            "pentagonal exponents out of order at {}",
            term.exp
        );
        out.push(term);
    }
    out
}

/// The series whose only nonzero coefficients are the pentagonal terms.
pub fn closed_form_series(order: usize) -> TruncatedSeries {
    let mut coeffs = vec![BigInt::default(); order + 1];
    for t in pentagonal_terms_upto(order) {
        coeffs[t.exp] = t.sign.to_bigint();
    }
    TruncatedSeries::new(coeffs, order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::partial_product;
    use num_traits::Zero;

    fn pairs(terms: &[Term]) -> Vec<(usize, i8)> {
        terms.iter().map(|t| (t.exp, t.sign.as_i8())).collect()
    }

    #[test]
    fn pair_examples() {
        let p = pentagonal_pair(1).unwrap();
        assert_eq!((p.g_minus, p.g_plus, p.sign), (1, 2, Sign::Minus));
        let p = pentagonal_pair(3).unwrap();
        assert_eq!((p.g_minus, p.g_plus, p.sign), (12, 15, Sign::Minus));
        let p = pentagonal_pair(5).unwrap();
        assert_eq!((p.g_minus, p.g_plus, p.sign), (35, 40, Sign::Minus));
        assert_eq!(pentagonal_pair(4).unwrap().sign, Sign::Plus);
        assert_eq!(pentagonal_pair(0), Err(Error::ZeroIndex));
        assert!(matches!(pentagonal_pair(u64::MAX), Err(Error::Overflow(_))));
    }

    #[test]
    fn pair_invariants() {
        for n in 1..2_000u64 {
            let p = pentagonal_pair(n).unwrap();
            let next = pentagonal_pair(n + 1).unwrap();
            assert_eq!(p.g_plus - p.g_minus, n as usize);
            assert_eq!(next.g_minus - p.g_plus, 2 * n as usize + 1);
        }
    }

    #[test]
    fn terms_examples() {
        assert_eq!(pairs(&pentagonal_terms_upto(0)), vec![(0, 1)]);
        assert_eq!(
            pairs(&pentagonal_terms_upto(7)),
            vec![(0, 1), (1, -1), (2, -1), (5, 1), (7, 1)]
        );
        let t = pairs(&pentagonal_terms_upto(26));
        assert_eq!(&t[t.len() - 2..], &[(22, 1), (26, 1)]);
        // g_minus(3) = 12 is in range but g_plus(3) = 15 is not.
        assert_eq!(pairs(&pentagonal_terms_upto(13)).last(), Some(&(12, -1)));
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(closed_form_series(4).to_string(), "1 - x - x^2");
        assert_eq!(
            closed_form_series(12).to_string(),
            "1 - x - x^2 + x^5 + x^7 - x^12"
        );
        assert_eq!(closed_form_series(51).coeff(51), BigInt::from(1));
        assert!(closed_form_series(51).coeff(39).is_zero());
        assert!(closed_form_series(51).coeff(20).is_zero());
    }

    #[test]
    fn sign_structure() {
        let terms = pentagonal_terms_upto(5_000);
        // After the constant, signs arrive in equal adjacent pairs: --, ++, --, ...
        for (i, chunk) in terms[1..].chunks(2).enumerate() {
            let expected = Sign::parity(i as u64 + 1);
            assert!(chunk.iter().all(|t| t.sign == expected));
        }
        // Gaps alternate n (within a pair) and 2n+1 (between pairs).
        for (i, w) in terms[1..].windows(2).enumerate() {
            let n = i / 2 + 1;
            let gap = w[1].exp - w[0].exp;
            assert_eq!(gap, if i % 2 == 0 { n } else { 2 * n + 1 });
        }
    }

    #[test]
    fn coefficients_are_units_or_zero() {
        let s = closed_form_series(3_000);
        let support: Vec<usize> = pentagonal_terms_upto(3_000).iter().map(|t| t.exp).collect();
        for (e, c) in s.coeffs().iter().enumerate() {
            let v: i64 = c.try_into().unwrap();
            assert!((-1..=1).contains(&v));
            assert_eq!(v != 0, support.binary_search(&e).is_ok());
        }
    }

    #[test]
    fn matches_product_small_orders() {
        for n in 0..=120 {
            assert_eq!(closed_form_series(n), partial_product(n, n), "order {n}");
        }
    }
}
