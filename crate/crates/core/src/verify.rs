//! End-to-end checks on the expansion: the product equals its closed form,
//! dividing out every factor leaves exactly `1`, and the roots of the partial
//! products are the roots of unity with the expected multiplicities.

use std::f64::consts::TAU;

use num_complex::Complex64;
use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::pentagonal::closed_form_series;
use crate::series::{partial_product, product_of_binomials, TruncatedSeries};

/// A coefficient where two series disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub exp: usize,
    pub expected: String,
    pub actual: String,
}

pub fn first_mismatch(expected: &TruncatedSeries, actual: &TruncatedSeries) -> Option<Mismatch> {
    if expected.order() != actual.order() {
        let exp = expected.order().min(actual.order()) + 1;
        return Some(Mismatch {
            exp,
            expected: format!("order {}", expected.order()),
            actual: format!("order {}", actual.order()),
        });
    }
    expected.first_difference(actual).map(|exp| Mismatch {
        exp,
        expected: expected.coeff(exp).to_string(),
        actual: actual.coeff(exp).to_string(),
    })
}

/// `closed_form_series(order)` against the brute-force product.
pub fn central_theorem(order: usize) -> Option<Mismatch> {
    first_mismatch(&closed_form_series(order), &partial_product(order, order))
}

/// SHA-256 over the comma-joined decimal coefficients, hex encoded.
pub fn fingerprint(s: &TruncatedSeries) -> String {
    let mut hasher = Sha256::new();
    for (i, c) in s.coeffs().iter().enumerate() {
        if i > 0 {
            hasher.update(b",");
        }
        hasher.update(c.to_string().as_bytes());
    }
    hex::encode(hasher.finalize())
}

/// Successive quotients of the closed form by `1 - x`, `1 - x^2`, ...
///
/// Yields `(k, quotient)` after dividing by `1 - x^k`.
#[derive(Clone, Debug)]
pub struct DivisionCascade {
    quotient: TruncatedSeries,
    next_k: usize,
}

impl DivisionCascade {
    pub fn new(order: usize) -> Self {
        DivisionCascade {
            quotient: closed_form_series(order),
            next_k: 1,
        }
    }

    pub fn quotient(&self) -> &TruncatedSeries {
        &self.quotient
    }
}

impl Iterator for DivisionCascade {
    type Item = (usize, TruncatedSeries);

    fn next(&mut self) -> Option<Self::Item> {
        let k = self.next_k;
        if k > self.quotient.order() {
            return None;
        }
        self.quotient.div_binomial_assign(k);
        self.next_k += 1;
        Some((k, self.quotient.clone()))
    }
}

/// Quotient after dividing the closed form by `1 - x^k` for `k = 1..=steps`.
pub fn quotient_after(order: usize, steps: usize) -> TruncatedSeries {
    DivisionCascade::new(order)
        .take(steps)
        .last()
        .map_or_else(|| closed_form_series(order), |(_, q)| q)
}

/// `prod_{k=steps+1..=order} (1 - x^k)`, built directly.
pub fn tail_product(order: usize, steps: usize) -> TruncatedSeries {
    product_of_binomials(steps + 1..=order, order)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CascadeStep {
    pub k: usize,
    pub fingerprint: String,
    /// Multiplying back by `1 - x^k` restores the previous quotient.
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CascadeReport {
    pub order: usize,
    pub steps: Vec<CascadeStep>,
    pub final_is_unity: bool,
}

impl CascadeReport {
    pub fn passed(&self) -> bool {
        self.final_is_unity && self.steps.iter().all(|s| s.exact)
    }
}

pub fn division_cascade(order: usize) -> CascadeReport {
    let mut previous = closed_form_series(order);
    let mut steps = Vec::with_capacity(order);
    for (k, quotient) in DivisionCascade::new(order) {
        steps.push(CascadeStep {
            k,
            fingerprint: fingerprint(&quotient),
            exact: quotient.mul_binomial(k, -1) == previous,
        });
        previous = quotient;
    }
    CascadeReport {
        order,
        steps,
        final_is_unity: previous.is_one(),
    }
}

/// Multiplicity of each primitive `d`-th root of unity as a root of
/// `prod_{k=1..m} (1 - x^k)`: one per factor index divisible by `d`.
pub fn root_multiplicity(d: u64, m: u64) -> u64 {
    m / d.max(1)
}

pub fn euler_phi(n: u64) -> u64 {
    (1..=n).filter(|j| j.gcd(&n) == 1).count() as u64
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootEvaluation {
    pub magnitude: f64,
    pub is_zero: bool,
}

/// `|prod_{k=1..m} (1 - zeta^k)|` for `zeta = exp(2 pi i j / d)`.
///
/// Powers are reduced mod `d` before evaluating, so a factor with `d | k`
/// is exactly zero. `is_zero` uses a tolerance of `1e-9 * m`.
pub fn eval_partial_product_at_root(d: u64, j: i64, m: u64) -> Result<RootEvaluation> {
    if d == 0 {
        return Err(Error::ZeroRootOrder);
    }
    if j.unsigned_abs().gcd(&d) != 1 {
        return Err(Error::NotPrimitive { d, j });
    }
    let j = j.rem_euclid(d as i64) as u64;
    let product: Complex64 = (1..=m)
        .map(|k| {
            let r = (j as u128 * k as u128 % d as u128) as f64;
            Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, TAU * r / d as f64)
        })
        .product();
    let magnitude = product.norm();
    Ok(RootEvaluation {
        magnitude,
        is_zero: magnitude <= 1e-9 * m.max(1) as f64,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootCheck {
    pub d: u64,
    pub j: u64,
    pub m: u64,
    pub magnitude: f64,
    pub is_zero: bool,
    pub expected_zero: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootReport {
    pub max_d: u64,
    pub max_m: u64,
    pub checks: Vec<RootCheck>,
    /// `m` values where `sum_d phi(d) * floor(m/d) != m(m+1)/2`.
    pub count_failures: Vec<u64>,
}

impl RootReport {
    pub fn failures(&self) -> impl Iterator<Item = &RootCheck> {
        self.checks.iter().filter(|c| c.is_zero != c.expected_zero)
    }

    pub fn passed(&self) -> bool {
        self.failures().next().is_none() && self.count_failures.is_empty()
    }
}

/// Sum over all root orders of `phi(d) * multiplicity`; equals the degree
/// `m(m+1)/2` when every root is accounted for.
pub fn counted_roots(m: u64) -> u64 {
    (1..=m)
        .map(|d| euler_phi(d) * root_multiplicity(d, m))
        .sum()
}

/// Every primitive root of order `d <= max_d` against every `m <= max_m`,
/// plus root-count completeness for `m <= max_m`.
pub fn root_suite(max_d: u64, max_m: u64) -> RootReport {
    let cases: Vec<(u64, u64, u64)> = (1..=max_d)
        .flat_map(|d| (0..d).filter(move |j| j.gcd(&d) == 1).map(move |j| (d, j)))
        .flat_map(|(d, j)| (1..=max_m).map(move |m| (d, j, m)))
        .collect();
    let checks = cases
        .into_par_iter()
        .map(|(d, j, m)| {
            let eval = eval_partial_product_at_root(d, j as i64, m)
                .expect("index drawn from the primitive residues");
            RootCheck {
                d,
                j,
                m,
                magnitude: eval.magnitude,
                is_zero: eval.is_zero,
                expected_zero: root_multiplicity(d, m) > 0,
            }
        })
        .collect();
    let count_failures = (1..=max_m)
        .filter(|&m| counted_roots(m) != m * (m + 1) / 2)
        .collect();
    RootReport {
        max_d,
        max_m,
        checks,
        count_failures,
    }
}
