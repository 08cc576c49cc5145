//! Truncated formal power series with exact integer coefficients.
//!
//! A series of order `N` holds the coefficients of `x^0 ..= x^N` and all
//! arithmetic is carried out modulo `x^(N+1)`. Binary operations on series
//! of different orders truncate to the smaller order.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element of `Z[x] / (x^(N+1))`.
///
/// Coefficients are stored densely; index `i` holds the coefficient of `x^i`.
/// The vector is never empty, so the order is always `coeffs.len() - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    coeffs: Vec<BigInt>,
}

impl TruncatedSeries {
    /// Builds a series of the given order, zero-filling missing high
    /// coefficients. Coefficients beyond `order` are dropped.
    pub fn new<I, T>(coeffs: I, order: usize) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        let mut coeffs: Vec<BigInt> = coeffs.into_iter().take(order + 1).map(Into::into).collect();
        coeffs.resize(order + 1, BigInt::zero());
        TruncatedSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        TruncatedSeries {
            coeffs: vec![BigInt::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(0, BigInt::one(), order)
    }

    /// `coeff * x^exp`, which is zero when `exp > order`.
    pub fn monomial(exp: usize, coeff: impl Into<BigInt>, order: usize) -> Self {
        let mut s = Self::zero(order);
        if exp <= order {
            s.coeffs[exp] = coeff.into();
        }
        s
    }

    /// `1 + c * x^k`.
    pub fn binomial(k: usize, c: impl Into<BigInt>, order: usize) -> Self {
        let mut s = Self::one(order);
        if k <= order {
            s.coeffs[k] += c.into();
        }
        s
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Coefficient of `x^exp`; zero above the order.
    pub fn coeff(&self, exp: usize) -> BigInt {
        self.coeffs.get(exp).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// Nonzero terms as `(exponent, coefficient)` in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &BigInt)> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    /// Exponent of the lowest nonzero term, `None` for the zero series.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&mut self, order: usize) {
        if order < self.order() {
            self.coeffs.truncate(order + 1);
        }
    }

    pub fn truncated(&self, order: usize) -> Self {
        let order = order.min(self.order());
        TruncatedSeries {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    /// Adds `x^shift * other` into `self`, discarding anything past the order.
    pub fn add_shifted(&mut self, other: &TruncatedSeries, shift: usize) {
        if shift > self.order() {
            return;
        }
        for (dst, src) in self.coeffs[shift..].iter_mut().zip(&other.coeffs) {
            *dst += src;
        }
    }

    /// Adds `coeff * x^exp`; a no-op when `exp` exceeds the order.
    pub fn add_monomial(&mut self, exp: usize, coeff: impl Into<BigInt>) {
        if let Some(c) = self.coeffs.get_mut(exp) {
            *c += coeff.into();
        }
    }

    /// In-place multiplication by `1 + c * x^k` in a single descending pass.
    pub fn mul_binomial_assign(&mut self, k: usize, c: &BigInt) {
        assert!(k >= 1, "binomial degree must be positive");
        let n = self.order();
        if k > n || c.is_zero() {
            return;
        }
        let minus_one = c == &-BigInt::one();
        for i in (k..=n).rev() {
            let (lo, hi) = self.coeffs.split_at_mut(i);
            if minus_one {
                hi[0] -= &lo[i - k];
            } else {
                hi[0] += c * &lo[i - k];
            }
        }
    }

    /// `self * (1 + c * x^k)`.
    pub fn mul_binomial(&self, k: usize, c: impl Into<BigInt>) -> Self {
        let mut out = self.clone();
        out.mul_binomial_assign(k, &c.into());
        out
    }

    /// In-place division by the unit `1 - x^k`, via `q_i = a_i + q_(i-k)`.
    pub fn div_binomial_assign(&mut self, k: usize) {
        assert!(k >= 1, "binomial degree must be positive");
        for i in k..self.coeffs.len() {
            let (lo, hi) = self.coeffs.split_at_mut(i);
            hi[0] += &lo[i - k];
        }
    }

    /// `self / (1 - x^k)`.
    pub fn div_binomial(&self, k: usize) -> Self {
        let mut out = self.clone();
        out.div_binomial_assign(k);
        out
    }

    /// Multiplicative inverse by power-series long division.
    ///
    /// Only series whose constant term is `±1` are units over the integers;
    /// anything else yields `None`.
    pub fn reciprocal(&self) -> Option<Self> {
        let lead = &self.coeffs[0];
        let negate = if lead.is_one() {
            false
        } else if *lead == -BigInt::one() {
            true
        } else {
            return None;
        };
        // Sparse view of the divisor keeps the sweep O(N * nnz).
        let support: Vec<(usize, &BigInt)> = self.terms().filter(|&(e, _)| e > 0).collect();
        let mut inv: Vec<BigInt> = Vec::with_capacity(self.coeffs.len());
        inv.push(lead.clone());
        for n in 1..self.coeffs.len() {
            let mut acc = BigInt::zero();
            for &(e, c) in support.iter().take_while(|&&(e, _)| e <= n) {
                acc += c * &inv[n - e];
            }
            // r_n = -(1/a_0) * sum_{e>=1} a_e r_(n-e)
            inv.push(if negate { acc } else { -acc });
        }
        Some(TruncatedSeries { coeffs: inv })
    }

    /// First exponent where the two series differ, compared up to the
    /// smaller order.
    pub fn first_difference(&self, other: &TruncatedSeries) -> Option<usize> {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .position(|(a, b)| a != b)
    }

    pub fn to_dense(&self) -> DenseSeries {
        DenseSeries {
            order: self.order(),
            coeffs: self.coeffs.iter().map(BigInt::to_string).collect(),
        }
    }

    pub fn to_sparse(&self) -> SparseSeries {
        SparseSeries {
            order: self.order(),
            terms: self
                .terms()
                .map(|(exp, c)| SparseTerm {
                    exp,
                    coeff: c.to_string(),
                })
                .collect(),
        }
    }
}

/// `prod_{k=1..m} (1 - x^k)` modulo `x^(order+1)`.
///
/// Factors with `k > order` are the identity at this order and are skipped.
pub fn partial_product(m: usize, order: usize) -> TruncatedSeries {
    let mut s = TruncatedSeries::one(order);
    let minus_one = -BigInt::one();
    for k in 1..=m.min(order) {
        s.mul_binomial_assign(k, &minus_one);
    }
    s
}

/// `prod_{k in factors} (1 - x^k)` for an arbitrary factor range.
pub fn product_of_binomials<I>(factors: I, order: usize) -> TruncatedSeries
where
    I: IntoIterator<Item = usize>,
{
    let mut s = TruncatedSeries::one(order);
    let minus_one = -BigInt::one();
    for k in factors {
        s.mul_binomial_assign(k, &minus_one);
    }
    s
}

fn binary_op(
    a: &TruncatedSeries,
    b: &TruncatedSeries,
    f: impl Fn(&BigInt, &BigInt) -> BigInt,
) -> TruncatedSeries {
    TruncatedSeries {
        coeffs: a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| f(x, y))
            .collect(),
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        binary_op(self, rhs, |x, y| x + y)
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        binary_op(self, rhs, |x, y| x - y)
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;

    /// Schoolbook convolution truncated at the smaller order.
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order().min(rhs.order());
        let mut out = TruncatedSeries::zero(order);
        for (i, a) in self.coeffs[..=order].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs[..=order - i].iter().enumerate() {
                if !b.is_zero() {
                    out.coeffs[i + j] += a * b;
                }
            }
        }
        out
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for TruncatedSeries {
            type Output = TruncatedSeries;
            fn $method(self, rhs: TruncatedSeries) -> TruncatedSeries {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for TruncatedSeries {
    /// Renders nonzero terms in ascending order, e.g. `1 - x - x^2 + x^5`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (exp, c) in self.terms() {
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            match exp {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if exp == 1 {
                        f.write_str("x")?;
                    } else {
                        write!(f, "x^{exp}")?;
                    }
                }
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Dense JSON form: `{"order": N, "coeffs": ["1", "-1", ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DenseSeries {
    pub order: usize,
    pub coeffs: Vec<String>,
}

/// Sparse JSON form: `{"order": N, "terms": [{"exp": e, "coeff": "c"}]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseSeries {
    pub order: usize,
    pub terms: Vec<SparseTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseTerm {
    pub exp: usize,
    pub coeff: String,
}

fn parse_coeff(s: &str) -> Result<BigInt> {
    s.parse()
        .map_err(|_| Error::Decode(format!("invalid integer coefficient {s:?}")))
}

impl TryFrom<&DenseSeries> for TruncatedSeries {
    type Error = Error;

    fn try_from(d: &DenseSeries) -> Result<Self> {
        if d.coeffs.len() > d.order + 1 {
            return Err(Error::Decode(format!(
                "{} coefficients exceed order {}",
                d.coeffs.len(),
                d.order
            )));
        }
        let coeffs = d
            .coeffs
            .iter()
            .map(|c| parse_coeff(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(TruncatedSeries::new(coeffs, d.order))
    }
}

impl TryFrom<&SparseSeries> for TruncatedSeries {
    type Error = Error;

    fn try_from(sp: &SparseSeries) -> Result<Self> {
        let mut s = TruncatedSeries::zero(sp.order);
        for t in &sp.terms {
            if t.exp > sp.order {
                return Err(Error::Decode(format!(
                    "term exponent {} exceeds order {}",
                    t.exp, sp.order
                )));
            }
            s.coeffs[t.exp] += parse_coeff(&t.coeff)?;
        }
        Ok(s)
    }
}
