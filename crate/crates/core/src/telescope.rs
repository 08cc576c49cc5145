//! Replayable telescoping reductions of `prod (1 - x^k)`.
//!
//! Both derivations rewrite the product as a short prefix plus a tail
//!
//! ```text
//! T = sum_j x^(b + j*d) * prod_{i=p..p+j-1} (1 - x^i)
//! ```
//!
//! and then repeatedly split the first binomial factor of every term and
//! merge terms carrying the same power of `x`. Each round peels two
//! monomials off the tail and leaves a tail of the same shape with
//! `(b, d, p) -> (b + 2d + p + 1, d + 1, p + 1)`.
//!
//! * [`Variant::First`] starts from `s = 1 - x - A` with `j >= 1`; a round is
//!   `T_m = x^(b+d) - x^(b+2d+p+1) - T_(m+1)`.
//! * [`Variant::Second`] starts from `s = 1 - x - x^2 + A` with `j >= 0`, so
//!   each tail begins with a bare `x^b`; a round is
//!   `T_m = x^b + x^(b+d) - T_(m+1)`.
//!
//! In both cases the stage-`m` tail enters `s` with sign `(-1)^m`.
//! Every step can be checked exactly by expanding both tails in the
//! truncated ring.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pentagonal::{closed_form_series, g_minus, Sign, Term};
use crate::series::{partial_product, TruncatedSeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Tails without a bare head term; emits `g+(m), g-(m+1)` per stage.
    First,
    /// Tails led by a bare monomial; emits `g-(m), g+(m)` per stage.
    Second,
}

impl Variant {
    pub fn id(self) -> u8 {
        match self {
            Variant::First => 1,
            Variant::Second => 2,
        }
    }

    /// Stage index of the initial tail.
    pub fn first_stage(self) -> u64 {
        match self {
            Variant::First => 1,
            Variant::Second => 2,
        }
    }

    /// Terms of `s` already expanded before the first tail.
    pub fn prefix(self) -> Vec<Term> {
        let mut terms = vec![Term::new(0, Sign::Plus), Term::new(1, Sign::Minus)];
        if self == Variant::Second {
            terms.push(Term::new(2, Sign::Minus));
        }
        terms
    }
}

impl TryFrom<u8> for Variant {
    type Error = Error;

    fn try_from(id: u8) -> Result<Self> {
        match id {
            1 => Ok(Variant::First),
            2 => Ok(Variant::Second),
            other => Err(Error::InvalidVariant(other)),
        }
    }
}

impl Serialize for Variant {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u8(self.id())
    }
}

impl<'de> Deserialize<'de> for Variant {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Variant::try_from(u8::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// One residual tail, described by its parameters rather than its terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TailFamily {
    pub variant: Variant,
    pub stage: u64,
    /// Exponent offset `b`.
    pub base: usize,
    /// Exponent increment `d` between consecutive terms.
    pub step: usize,
    /// Index `p` of the first binomial factor.
    pub product_start: usize,
    /// Whether the sum starts at `j = 0` (a bare `x^b` head).
    pub bare_head: bool,
}

impl TailFamily {
    /// The well-formed tail of `variant` at `stage`: `b = (3m^2 - m)/2`, `d = p = m`.
    pub fn at_stage(variant: Variant, stage: u64) -> Result<Self> {
        if stage < variant.first_stage() {
            return Err(Error::InvalidStage {
                variant: variant.id(),
                stage,
            });
        }
        let m = usize::try_from(stage).map_err(|_| Error::Overflow(stage))?;
        Ok(TailFamily {
            variant,
            stage,
            base: g_minus(stage)?,
            step: m,
            product_start: m,
            bare_head: variant == Variant::Second,
        })
    }

    pub fn initial(variant: Variant) -> Self {
        Self::at_stage(variant, variant.first_stage()).expect("first stage is always valid")
    }

    pub fn is_well_formed(&self) -> bool {
        Self::at_stage(self.variant, self.stage).is_ok_and(|t| t == *self)
    }

    /// Sign with which this tail enters `s`.
    pub fn sign_in_series(&self) -> Sign {
        Sign::parity(self.stage)
    }

    fn first_index(&self) -> usize {
        usize::from(!self.bare_head)
    }

    /// Exponent of the lowest term; every coefficient below it is zero.
    pub fn leading_exponent(&self) -> usize {
        self.base + self.first_index() * self.step
    }
}

impl fmt::Display for TailFamily {
    /// The first three terms in factored notation, e.g.
    /// `x^7(1 - x^2) + x^9(1 - x^2)(1 - x^3) + ...`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let start = self.first_index();
        for (n, j) in (start..start + 3).enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            write_power(f, self.base + j * self.step)?;
            for i in self.product_start..self.product_start + j {
                f.write_str("(1 - ")?;
                write_power(f, i)?;
                f.write_str(")")?;
            }
        }
        f.write_str(" + ...")
    }
}

fn write_power(f: &mut fmt::Formatter<'_>, exp: usize) -> fmt::Result {
    match exp {
        0 => f.write_str("1"),
        1 => f.write_str("x"),
        e => write!(f, "x^{e}"),
    }
}

/// The two monomials split off a tail in one reduction round.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EmissionRecord {
    pub stage: u64,
    pub exps: [usize; 2],
    /// Signs inside the tail identity `T_m = ±x^e1 ± x^e2 - T_(m+1)`.
    pub local_signs: [Sign; 2],
    /// `(-1)^m`, the sign of `T_m` in `s`.
    pub tail_sign: Sign,
}

impl EmissionRecord {
    /// Signs the two monomials carry in `s` itself.
    pub fn series_signs(&self) -> [Sign; 2] {
        [
            self.local_signs[0] * self.tail_sign,
            self.local_signs[1] * self.tail_sign,
        ]
    }

    pub fn series_terms(&self) -> [Term; 2] {
        let signs = self.series_signs();
        [
            Term::new(self.exps[0], signs[0]),
            Term::new(self.exps[1], signs[1]),
        ]
    }
}

/// Initial tail for a variant given by its numeric id.
pub fn initial_tail(variant: u8) -> Result<TailFamily> {
    Ok(TailFamily::initial(Variant::try_from(variant)?))
}

/// One split-and-merge round: the emitted monomials and the next tail.
pub fn reduce_step(tail: &TailFamily) -> (EmissionRecord, TailFamily) {
    let TailFamily {
        base: b,
        step: d,
        product_start: p,
        ..
    } = *tail;
    let next_base = b + 2 * d + p + 1;
    let (exps, local_signs) = if tail.bare_head {
        ([b, b + d], [Sign::Plus, Sign::Plus])
    } else {
        ([b + d, next_base], [Sign::Plus, Sign::Minus])
    };
    let emission = EmissionRecord {
        stage: tail.stage,
        exps,
        local_signs,
        tail_sign: tail.sign_in_series(),
    };
    let next = TailFamily {
        stage: tail.stage + 1,
        base: next_base,
        step: d + 1,
        product_start: p + 1,
        ..*tail
    };
    (emission, next)
}

/// The tail expanded into a truncated series.
///
/// The running product gains one factor per term, and terms whose leading
/// power already exceeds `order` are skipped since their factors can only
/// raise exponents.
pub fn expand_tail(tail: &TailFamily, order: usize) -> TruncatedSeries {
    let mut acc = TruncatedSeries::zero(order);
    if tail.base > order {
        return acc;
    }
    let minus_one = -BigInt::one();
    let mut product = TruncatedSeries::one(order - tail.base);
    for j in tail.first_index().. {
        let lead = match j
            .checked_mul(tail.step)
            .and_then(|s| s.checked_add(tail.base))
        {
            Some(lead) if lead <= order => lead,
            _ => break,
        };
        product.truncate(order - lead);
        if j >= 1 {
            product.mul_binomial_assign(tail.product_start + j - 1, &minus_one);
        }
        acc.add_shifted(&product, lead);
    }
    acc
}

/// Checks `tail = ±x^e1 ± x^e2 - next` exactly at `order`.
pub fn check_reduction(
    tail: &TailFamily,
    emission: &EmissionRecord,
    next: &TailFamily,
    order: usize,
) -> bool {
    let lhs = expand_tail(tail, order);
    let mut rhs = -&expand_tail(next, order);
    for (exp, sign) in emission.exps.iter().zip(emission.local_signs) {
        rhs.add_monomial(*exp, sign.to_bigint());
    }
    lhs == rhs
}

pub fn verify_step(tail: &TailFamily, order: usize) -> bool {
    let (emission, next) = reduce_step(tail);
    check_reduction(tail, &emission, &next, order)
}

/// `g-(m+2) + 5`: deep enough to see at least one full term of the next tail.
pub fn default_verification_order(tail: &TailFamily) -> usize {
    g_minus(tail.stage + 2).map_or(usize::MAX, |g| g.saturating_add(5))
}

/// Checks that the initial tail reproduces the product: `s = prefix ± A`.
pub fn verify_initial(variant: Variant, order: usize) -> bool {
    let tail = TailFamily::initial(variant);
    let mut rebuilt = tail_signed(&expand_tail(&tail, order), tail.sign_in_series());
    for t in variant.prefix() {
        rebuilt.add_monomial(t.exp, t.sign.to_bigint());
    }
    rebuilt == partial_product(order, order)
}

fn tail_signed(s: &TruncatedSeries, sign: Sign) -> TruncatedSeries {
    match sign {
        Sign::Plus => s.clone(),
        Sign::Minus => -s,
    }
}

/// A full derivation: prefix, one emission per reduced tail, and the
/// residual tail that was left unexpanded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationTrace {
    pub variant: Variant,
    pub prefix: Vec<Term>,
    pub emissions: Vec<EmissionRecord>,
    /// The tail reduced at each stage, parallel to `emissions`.
    pub reduced: Vec<TailFamily>,
    pub residual: TailFamily,
    pub order: usize,
}

/// Runs the reduction until the next emission would start beyond `order`.
pub fn run_telescope(variant: Variant, order: usize) -> DerivationTrace {
    run(variant, order, |_, emission| emission.exps[0] <= order)
}

/// Runs exactly `stages` reductions regardless of `order`.
pub fn run_telescope_stages(variant: Variant, order: usize, stages: usize) -> DerivationTrace {
    run(variant, order, |done, _| done < stages)
}

fn run(
    variant: Variant,
    order: usize,
    mut keep_going: impl FnMut(usize, &EmissionRecord) -> bool,
) -> DerivationTrace {
    let mut tail = TailFamily::initial(variant);
    let mut emissions = Vec::new();
    let mut reduced = Vec::new();
    loop {
        let (emission, next) = reduce_step(&tail);
        if !keep_going(emissions.len(), &emission) {
            break;
        }
        emissions.push(emission);
        reduced.push(tail);
        tail = next;
    }
    DerivationTrace {
        variant,
        prefix: variant.prefix(),
        emissions,
        reduced,
        residual: tail,
        order,
    }
}

/// Outcome of checking a trace against the series-core oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceCheck {
    pub initial: bool,
    /// `(stage, passed)` for every reduction.
    pub steps: Vec<(u64, bool)>,
    pub reconstruction: bool,
}

impl TraceCheck {
    pub fn passed(&self) -> bool {
        self.initial && self.reconstruction && self.steps.iter().all(|&(_, ok)| ok)
    }
}

impl DerivationTrace {
    /// Prefix terms followed by the signed emissions, in emission order.
    pub fn terms(&self) -> Vec<Term> {
        let mut terms = self.prefix.clone();
        terms.extend(self.emissions.iter().flat_map(EmissionRecord::series_terms));
        terms
    }

    /// Prefix plus signed emissions, truncated at the trace order.
    pub fn reconstruct(&self) -> TruncatedSeries {
        let mut s = TruncatedSeries::zero(self.order);
        for t in self.terms() {
            s.add_monomial(t.exp, t.sign.to_bigint());
        }
        s
    }

    /// Highest exponent at which the reconstruction is complete: everything
    /// the residual tail could still contribute lies strictly above it.
    pub fn exact_through(&self) -> usize {
        self.order
            .min(self.residual.leading_exponent().saturating_sub(1))
    }

    /// Verifies the initial identity, every step at the trace order, and
    /// the reconstruction against the closed form.
    pub fn check(&self) -> TraceCheck {
        let steps = self
            .reduced
            .par_iter()
            .zip(&self.emissions)
            .map(|(tail, emission)| {
                let (_, next) = reduce_step(tail);
                (
                    tail.stage,
                    check_reduction(tail, emission, &next, self.order),
                )
            })
            .collect();
        let floor = self.exact_through();
        let reconstruction = self.reconstruct().truncated(floor) == closed_form_series(floor);
        TraceCheck {
            initial: verify_initial(self.variant, self.order),
            steps,
            reconstruction,
        }
    }

    pub fn to_report(&self, verified: bool) -> TraceReport {
        TraceReport {
            variant: self.variant,
            order: self.order,
            prefix: self.prefix.clone(),
            emissions: self
                .emissions
                .iter()
                .map(|e| EmissionReport {
                    stage: e.stage,
                    exps: e.exps,
                    signs: e.series_signs(),
                })
                .collect(),
            verified,
        }
    }
}

/// Name of the `index`-th tail in a trace: `A`, `B`, ..., `Z`, then `T27`, ...
pub fn tail_name(index: usize) -> String {
    if index < 26 {
        char::from(b'A' + index as u8).to_string()
    } else {
        format!("T{}", index + 1)
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, sign: Sign, exp: usize, leading: bool) -> fmt::Result {
    match (leading, sign) {
        (true, Sign::Plus) => {}
        (true, Sign::Minus) => f.write_str("-")?,
        (false, s) => write!(f, " {} ", s.symbol())?,
    }
    write_power(f, exp)
}

impl fmt::Display for DerivationTrace {
    /// Human-readable trace in the shape of the stage equations, e.g.
    ///
    /// ```text
    /// s = 1 - x - A
    /// A = x^2(1 - x) + x^3(1 - x)(1 - x^2) + x^4(1 - x)(1 - x^2)(1 - x^3) + ...
    ///   = x^2 - x^5 - B
    /// ```
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("s = ")?;
        for (i, t) in self.prefix.iter().enumerate() {
            write_term(f, t.sign, t.exp, i == 0)?;
        }
        let first_sign = TailFamily::initial(self.variant).sign_in_series();
        writeln!(f, " {} {}", first_sign.symbol(), tail_name(0))?;
        for (i, (tail, e)) in self.reduced.iter().zip(&self.emissions).enumerate() {
            let name = tail_name(i);
            writeln!(f, "{name} = {tail}")?;
            f.write_str("  = ")?;
            write_term(f, e.local_signs[0], e.exps[0], true)?;
            write_term(f, e.local_signs[1], e.exps[1], false)?;
            writeln!(f, " - {}", tail_name(i + 1))?;
        }
        writeln!(f, "{} = {}", tail_name(self.reduced.len()), self.residual)?;
        write!(
            f,
            "s = {} + O(x^{})",
            self.reconstruct().truncated(self.exact_through()),
            self.exact_through() + 1
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmissionReport {
    pub stage: u64,
    pub exps: [usize; 2],
    pub signs: [Sign; 2],
}

/// JSON shape of a derivation trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceReport {
    pub variant: Variant,
    pub order: usize,
    pub prefix: Vec<Term>,
    pub emissions: Vec<EmissionReport>,
    pub verified: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pentagonal::g_plus;
    use num_traits::Zero;

    fn tail(variant: Variant, stage: u64) -> TailFamily {
        TailFamily::at_stage(variant, stage).unwrap()
    }

    #[test]
    fn initial_tails() {
        let a = initial_tail(1).unwrap();
        assert_eq!(
            (a.stage, a.base, a.step, a.product_start, a.bare_head),
            (1, 1, 1, 1, false)
        );
        let a = initial_tail(2).unwrap();
        assert_eq!(
            (a.stage, a.base, a.step, a.product_start, a.bare_head),
            (2, 5, 2, 2, true)
        );
        assert_eq!(initial_tail(3), Err(Error::InvalidVariant(3)));
        assert_eq!(initial_tail(0), Err(Error::InvalidVariant(0)));
        assert!(TailFamily::at_stage(Variant::Second, 1).is_err());
    }

    #[test]
    fn tail_rendering_matches_hand_form() {
        assert_eq!(
            initial_tail(1).unwrap().to_string(),
            "x^2(1 - x) + x^3(1 - x)(1 - x^2) + x^4(1 - x)(1 - x^2)(1 - x^3) + ..."
        );
        assert_eq!(
            initial_tail(2).unwrap().to_string(),
            "x^5 + x^7(1 - x^2) + x^9(1 - x^2)(1 - x^3) + ..."
        );
    }

    #[test]
    fn reduce_step_examples() {
        let (e, next) = reduce_step(&tail(Variant::First, 1));
        assert_eq!(e.exps, [2, 5]);
        assert_eq!(e.local_signs, [Sign::Plus, Sign::Minus]);
        assert_eq!(next, tail(Variant::First, 2));
        assert_eq!((next.base, next.step, next.product_start), (5, 2, 2));

        let (e, _) = reduce_step(&tail(Variant::First, 2));
        assert_eq!(e.exps, [7, 12]);

        let (e, next) = reduce_step(&tail(Variant::Second, 4));
        assert_eq!(e.exps, [22, 26]);
        assert_eq!(e.local_signs, [Sign::Plus, Sign::Plus]);
        assert_eq!(next, tail(Variant::Second, 5));
    }

    #[test]
    fn reduce_step_preserves_well_formedness() {
        for variant in [Variant::First, Variant::Second] {
            let mut t = TailFamily::initial(variant);
            for _ in 0..60 {
                assert!(t.is_well_formed());
                t = reduce_step(&t).1;
            }
        }
    }

    #[test]
    fn exponent_recurrences() {
        for m in 1..200u64 {
            let (e1, _) = reduce_step(&tail(Variant::First, m));
            assert_eq!(e1.exps, [g_plus(m).unwrap(), g_minus(m + 1).unwrap()]);
            assert_eq!(e1.exps[0] - g_minus(m).unwrap(), m as usize);
            assert_eq!(e1.exps[1] - e1.exps[0], 2 * m as usize + 1);
            if m >= 2 {
                let (e2, _) = reduce_step(&tail(Variant::Second, m));
                assert_eq!(e2.exps, [g_minus(m).unwrap(), g_plus(m).unwrap()]);
            }
        }
    }

    #[test]
    fn emitted_signs_follow_pentagonal_rule() {
        for m in 1..100u64 {
            let (e, _) = reduce_step(&tail(Variant::First, m));
            assert_eq!(e.series_signs(), [Sign::parity(m), Sign::parity(m + 1)]);
            if m >= 2 {
                let (e, _) = reduce_step(&tail(Variant::Second, m));
                assert_eq!(e.series_signs(), [Sign::parity(m); 2]);
            }
        }
    }

    #[test]
    fn expand_tail_examples() {
        let a = expand_tail(&tail(Variant::First, 1), 6);
        assert_eq!(a.to_string(), "x^2 - x^5");
        let oracle = &TruncatedSeries::new([1, -1], 6) - &partial_product(6, 6);
        assert_eq!(a, oracle);

        let b = expand_tail(&tail(Variant::First, 2), 11);
        assert_eq!(b.valuation(), Some(7));
        assert_eq!(b.coeff(7), BigInt::from(1));

        let a2 = expand_tail(&tail(Variant::Second, 2), 6);
        assert_eq!(a2.to_string(), "x^5");
    }

    #[test]
    fn expand_tail_matches_term_by_term_oracle() {
        // Direct sum of the defining terms, each a full product built by `mul`.
        fn oracle(t: &TailFamily, order: usize) -> TruncatedSeries {
            let mut acc = TruncatedSeries::zero(order);
            let start = usize::from(!t.bare_head);
            for j in start..=order {
                let mut term = TruncatedSeries::monomial(t.base + j * t.step, 1, order);
                for i in t.product_start..t.product_start + j {
                    term = &term * &TruncatedSeries::binomial(i, -1, order);
                }
                acc = &acc + &term;
            }
            acc
        }
        for variant in [Variant::First, Variant::Second] {
            let mut t = TailFamily::initial(variant);
            for _ in 0..5 {
                assert_eq!(expand_tail(&t, 70), oracle(&t, 70), "{t:?}");
                t = reduce_step(&t).1;
            }
        }
    }

    #[test]
    fn tails_vanish_below_leading_exponent() {
        for variant in [Variant::First, Variant::Second] {
            let mut t = TailFamily::initial(variant);
            for _ in 0..12 {
                let s = expand_tail(&t, 400);
                let lead = t.leading_exponent();
                assert!(s.coeffs()[..lead.min(401)].iter().all(Zero::is_zero));
                if lead <= 400 {
                    assert_eq!(s.coeff(lead), BigInt::from(1));
                }
                t = reduce_step(&t).1;
            }
        }
        assert_eq!(tail(Variant::First, 3).leading_exponent(), 15);
        assert_eq!(tail(Variant::Second, 3).leading_exponent(), 12);
    }

    #[test]
    fn verify_step_examples() {
        assert!(verify_step(&tail(Variant::First, 1), 50));
        assert!(verify_step(&tail(Variant::Second, 3), 80));
        for m in 1..10 {
            let t = tail(Variant::First, m);
            assert!(verify_step(&t, default_verification_order(&t)));
        }
    }

    #[test]
    fn corrupted_next_tail_fails() {
        for variant in [Variant::First, Variant::Second] {
            for m in variant.first_stage()..8 {
                let t = tail(variant, m);
                let (emission, next) = reduce_step(&t);
                let order = default_verification_order(&t);
                assert!(check_reduction(&t, &emission, &next, order));
                let corrupted = TailFamily {
                    base: next.base + 1,
                    ..next
                };
                assert!(!check_reduction(&t, &emission, &corrupted, order));
                let mut bad_emission = emission;
                bad_emission.local_signs[1] = -bad_emission.local_signs[1];
                assert!(!check_reduction(&t, &bad_emission, &next, order));
            }
        }
    }

    #[test]
    fn initial_identities() {
        for order in [0, 1, 2, 6, 40, 200] {
            assert!(verify_initial(Variant::First, order));
            assert!(verify_initial(Variant::Second, order));
        }
    }

    #[test]
    fn run_telescope_examples() {
        let trace = run_telescope(Variant::First, 12);
        let exps: Vec<_> = trace.emissions.iter().map(|e| e.exps).collect();
        assert_eq!(exps, vec![[2, 5], [7, 12]]);
        assert_eq!(
            trace.reconstruct().to_string(),
            "1 - x - x^2 + x^5 + x^7 - x^12"
        );
        assert!(trace.check().passed());

        let trace = run_telescope(Variant::Second, 26);
        let exps: Vec<_> = trace.emissions.iter().map(|e| e.exps).collect();
        assert_eq!(exps, vec![[5, 7], [12, 15], [22, 26]]);
        assert_eq!(
            trace.reconstruct().to_string(),
            "1 - x - x^2 + x^5 + x^7 - x^12 - x^15 + x^22 + x^26"
        );
        assert!(trace.check().passed());

        let trace = run_telescope(Variant::First, 2);
        assert_eq!(trace.emissions.len(), 1);
        assert_eq!(trace.emissions[0].exps[0], 2);
        assert_eq!(trace.reconstruct().to_string(), "1 - x - x^2");
        assert!(trace.check().passed());
    }

    #[test]
    fn stage_override_keeps_partial_agreement() {
        let trace = run_telescope_stages(Variant::First, 100, 2);
        assert_eq!(trace.emissions.len(), 2);
        assert_eq!(trace.exact_through(), 14);
        assert!(trace.check().passed());
    }

    #[test]
    fn trace_text_mirrors_stage_equations() {
        let text = run_telescope(Variant::First, 12).to_string();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "s = 1 - x - A");
        assert_eq!(lines[2], "  = x^2 - x^5 - B");
        assert_eq!(lines[4], "  = x^7 - x^12 - C");
        assert_eq!(
            lines.last().unwrap(),
            &"s = 1 - x - x^2 + x^5 + x^7 - x^12 + O(x^13)"
        );

        let text = run_telescope(Variant::Second, 26).to_string();
        assert!(text.starts_with("s = 1 - x - x^2 + A\n"));
        assert!(text.contains("  = x^5 + x^7 - B\n"));
        assert!(text.contains("  = x^22 + x^26 - D\n"));
        assert_eq!(tail_name(26), "T27");
    }

    #[test]
    fn report_json_shape() {
        let trace = run_telescope(Variant::First, 7);
        let json = serde_json::to_string(&trace.to_report(true)).unwrap();
        assert_eq!(
            json,
            r#"{"variant":1,"order":7,"prefix":[{"exp":0,"sign":1},{"exp":1,"sign":-1}],"emissions":[{"stage":1,"exps":[2,5],"signs":[-1,1]},{"stage":2,"exps":[7,12],"signs":[1,-1]}],"verified":true}"#
        );
        let back: TraceReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, trace.to_report(true));
    }
}
