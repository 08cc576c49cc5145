//! The partition function as the reciprocal of the pentagonal series.
//!
//! Three routes that share no code: the signed pentagonal recurrence, the
//! parts-accumulation (unbounded knapsack) DP, and explicit enumeration.
//! For large `n` the DP also runs modulo a set of word-sized primes and is
//! lifted back to an exact count by Chinese remaindering.

use std::io::{self, Write};

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::pentagonal::{closed_form_series, pairs_upto};
use crate::series::TruncatedSeries;

/// Explicit enumeration stops here; p(45) = 89134.
pub const ENUMERATION_LIMIT: usize = 45;

/// `p(0..=max_n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionTable {
    values: Vec<BigUint>,
}

impl PartitionTable {
    pub fn max_n(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, n: usize) -> Option<&BigUint> {
        self.values.get(n)
    }

    pub fn values(&self) -> &[BigUint] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &BigUint)> + '_ {
        self.values.iter().enumerate()
    }

    /// Heap bytes held by the table's integers.
    pub fn heap_bytes(&self) -> usize {
        self.values
            .iter()
            .map(|v| (v.bits() as usize).div_ceil(64) * 8)
            .sum()
    }

    /// Streams `n,p(n)` rows, header first.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "n,p(n)")?;
        for (n, p) in self.iter() {
            writeln!(out, "{n},{p}")?;
        }
        Ok(())
    }
}

/// Inverse of the closed-form series by long division.
pub fn reciprocal_series(order: usize) -> TruncatedSeries {
    closed_form_series(order)
        .reciprocal()
        .expect("constant term of the pentagonal series is 1")
}

/// `p(n) = sum_k (-1)^(k-1) [p(n - g-(k)) + p(n - g+(k))]`.
///
/// Positive and negative contributions are summed separately so the table
/// can stay unsigned.
pub fn partitions_recurrence(n_max: usize) -> PartitionTable {
    let pairs: Vec<(usize, usize, bool)> = pairs_upto(n_max)
        .map(|p| (p.g_minus, p.g_plus, p.n % 2 == 1))
        .collect();
    let mut values: Vec<BigUint> = Vec::with_capacity(n_max + 1);
    values.push(BigUint::one());
    for n in 1..=n_max {
        let mut plus = BigUint::zero();
        let mut minus = BigUint::zero();
        for &(gm, gp, odd) in pairs.iter().take_while(|&&(gm, _, _)| gm <= n) {
            let acc = if odd { &mut plus } else { &mut minus };
            *acc += &values[n - gm];
            if gp <= n {
                *acc += &values[n - gp];
            }
        }
        values.push(plus - minus);
    }
    PartitionTable { values }
}

/// Number of table lookups the recurrence makes for `p(n)`.
pub fn recurrence_term_count(n: usize) -> usize {
    pairs_upto(n).map(|p| 1 + usize::from(p.g_plus <= n)).sum()
}

/// Parts-accumulation DP: admit parts `1, 2, ..., n_max` one at a time.
pub fn partitions_oracle_dp(n_max: usize) -> PartitionTable {
    let mut values = vec![BigUint::zero(); n_max + 1];
    values[0] = BigUint::one();
    for part in 1..=n_max {
        for i in part..=n_max {
            let (lo, hi) = values.split_at_mut(i);
            hi[0] += &lo[i - part];
        }
    }
    PartitionTable { values }
}

/// Counts partitions of `n` by generating each one as a non-increasing
/// sequence of parts.
pub fn partitions_enumerate(n: usize) -> Result<u64> {
    if n > ENUMERATION_LIMIT {
        return Err(Error::EnumerationLimit {
            n,
            limit: ENUMERATION_LIMIT,
        });
    }
    let mut count = 0;
    let mut parts = Vec::with_capacity(n);
    visit_partitions(n, n, &mut parts, &mut |_| count += 1);
    Ok(count)
}

/// Calls `visit` with every partition of `n` into parts at most `max_part`.
pub fn visit_partitions(
    n: usize,
    max_part: usize,
    parts: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]),
) {
    if n == 0 {
        visit(parts);
        return;
    }
    for part in (1..=max_part.min(n)).rev() {
        parts.push(part);
        visit_partitions(n - part, part, parts, visit);
        parts.pop();
    }
}

/// The same DP as [`partitions_oracle_dp`] carried out modulo several
/// 31-bit primes at once, one lane per prime.
#[derive(Clone, Debug)]
pub struct ModularPartitionTable {
    primes: Vec<u32>,
    /// One table per block of `LANE_WIDTH` primes, indexed by `n`.
    tables: Vec<Vec<LaneBlock>>,
}

const LANE_WIDTH: usize = 8;
type LaneBlock = [u32; LANE_WIDTH];

impl ModularPartitionTable {
    /// Runs the DP with enough primes that their product exceeds `p(n_max)`.
    pub fn new(n_max: usize) -> Self {
        // p(n) < exp(pi * sqrt(2n/3)); each prime contributes just over 30 bits.
        let bits =
            std::f64::consts::PI * (2.0 * n_max as f64 / 3.0).sqrt() / std::f64::consts::LN_2;
        let needed = (bits / 30.0).ceil() as usize + 1;
        let blocks = needed.div_ceil(LANE_WIDTH);
        let primes = primes_below(1 << 31, blocks * LANE_WIDTH);
        let moduli: Vec<LaneBlock> = primes
            .chunks_exact(LANE_WIDTH)
            .map(|c| c.try_into().expect("exact chunk"))
            .collect();

        // Prime blocks run separately so each sweep touches a table small
        // enough to stay in cache.
        let tables = moduli
            .iter()
            .map(|m| {
                let mut table = vec![[0u32; LANE_WIDTH]; n_max + 1];
                table[0] = [1; LANE_WIDTH];
                accumulate_parts(&mut table, m);
                table
            })
            .collect();
        ModularPartitionTable { primes, tables }
    }

    pub fn max_n(&self) -> usize {
        self.tables[0].len() - 1
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    pub fn residues(&self, n: usize) -> impl Iterator<Item = u32> + '_ {
        self.tables.iter().flat_map(move |t| t[n])
    }

    /// Exact `p(n)` by incremental Chinese remaindering of the residues.
    pub fn exact(&self, n: usize) -> BigUint {
        let mut value = BigUint::zero();
        let mut modulus = BigUint::one();
        for (&p, r) in self.primes.iter().zip(self.residues(n)) {
            let p64 = u64::from(p);
            let current = (&value % p64).to_u64_digits().first().copied().unwrap_or(0);
            let m_mod = (&modulus % p64)
                .to_u64_digits()
                .first()
                .copied()
                .unwrap_or(0);
            let diff = (u64::from(r) + p64 - current) % p64;
            let t = diff * pow_mod(m_mod, p64 - 2, p64) % p64;
            value += &modulus * t;
            modulus *= p64;
        }
        value
    }
}

fn accumulate_parts(table: &mut [LaneBlock], moduli: &LaneBlock) {
    #[cfg(target_arch = "x86_64")]
    {
        if std::is_x86_feature_detected!("avx2") {
            // SAFETY: the CPU supports AVX2, checked just above.
            unsafe { accumulate_parts_avx2(table, moduli) };
            return;
        }
    }
    accumulate_parts_generic(table, moduli);
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "avx2")]
unsafe fn accumulate_parts_avx2(table: &mut [LaneBlock], moduli: &LaneBlock) {
    accumulate_parts_generic(table, moduli)
}

#[inline(always)]
fn accumulate_parts_generic(table: &mut [LaneBlock], moduli: &LaneBlock) {
    let len = table.len();
    for part in 1..len {
        // Rows [start, start + part) read only rows below `start`, so each
        // chunk is free of intra-chunk dependencies.
        for start in (part..len).step_by(part) {
            let (lo, hi) = table.split_at_mut(start);
            let width = part.min(len - start);
            for (d, s) in hi[..width]
                .iter_mut()
                .zip(&lo[start - part..start - part + width])
            {
                add_mod_block(d, s, moduli);
            }
        }
    }
}

#[inline(always)]
fn add_mod_block(dst: &mut LaneBlock, src: &LaneBlock, moduli: &LaneBlock) {
    for l in 0..LANE_WIDTH {
        // Both operands are below p < 2^31, so the sum cannot wrap and `min`
        // picks the reduced value.
        let sum = dst[l].wrapping_add(src[l]);
        dst[l] = sum.min(sum.wrapping_sub(moduli[l]));
    }
}

fn pow_mod(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut acc = 1 % modulus;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % modulus;
        }
        base = base * base % modulus;
        exp >>= 1;
    }
    acc
}

/// The `count` largest primes below `bound`, by trial division.
fn primes_below(bound: u32, count: usize) -> Vec<u32> {
    let is_prime = |n: u32| {
        n >= 2
            && (2u32..)
                .take_while(|d| d * d <= n)
                .all(|d| !n.is_multiple_of(d))
    };
    (2..bound)
        .rev()
        .filter(|&n| is_prime(n))
        .take(count)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(table: &PartitionTable) -> Vec<u64> {
        table
            .values()
            .iter()
            .map(|v| v.try_into().unwrap())
            .collect()
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(partitions_enumerate(0), Ok(1));
        assert_eq!(partitions_enumerate(4), Ok(5));
        assert_eq!(partitions_enumerate(5), Ok(7));
        assert_eq!(
            partitions_enumerate(46),
            Err(Error::EnumerationLimit { n: 46, limit: 45 })
        );
    }

    #[test]
    fn enumeration_lists_partitions_of_four() {
        let mut seen = Vec::new();
        visit_partitions(4, 4, &mut Vec::new(), &mut |p| seen.push(p.to_vec()));
        assert_eq!(
            seen,
            vec![
                vec![4],
                vec![3, 1],
                vec![2, 2],
                vec![2, 1, 1],
                vec![1, 1, 1, 1]
            ]
        );
    }

    #[test]
    fn recurrence_examples() {
        assert_eq!(small(&partitions_recurrence(0)), vec![1]);
        assert_eq!(small(&partitions_recurrence(5)), vec![1, 1, 2, 3, 5, 7]);
        assert_eq!(
            partitions_recurrence(50).get(50),
            Some(&BigUint::from(204_226u32))
        );
    }

    #[test]
    fn dp_examples() {
        let dp = partitions_oracle_dp(10);
        assert_eq!(dp.get(1), Some(&BigUint::one()));
        assert_eq!(dp.get(5), Some(&BigUint::from(7u32)));
        assert_eq!(dp.get(10), Some(&BigUint::from(42u32)));
        assert_eq!(
            partitions_oracle_dp(50).get(50),
            Some(&BigUint::from(204_226u32))
        );
    }

    #[test]
    fn reciprocal_examples() {
        assert_eq!(reciprocal_series(0).to_string(), "1");
        assert_eq!(
            reciprocal_series(5).to_string(),
            "1 + x + 2*x^2 + 3*x^3 + 5*x^4 + 7*x^5"
        );
        assert_eq!(reciprocal_series(10).coeff(10), 42.into());
    }

    #[test]
    fn reciprocal_inverts_closed_form() {
        for order in [0, 1, 7, 60, 150] {
            let product = &closed_form_series(order) * &reciprocal_series(order);
            assert!(product.is_one(), "order {order}");
        }
    }

    #[test]
    fn table_invariants() {
        let t = partitions_recurrence(400);
        assert_eq!(t.get(0), Some(&BigUint::one()));
        assert!(t.values().windows(2).all(|w| w[0] <= w[1]));
        assert!(t.values().iter().all(|v| !v.is_zero()));
    }

    #[test]
    fn term_count_grows_like_sqrt() {
        assert_eq!(recurrence_term_count(1), 1);
        assert_eq!(recurrence_term_count(2), 2);
        assert_eq!(recurrence_term_count(5), 3);
        for n in [10usize, 100, 1_000, 10_000, 100_000] {
            let c = recurrence_term_count(n) as f64;
            // Pairs up to index ~ sqrt(2n/3), two lookups each.
            assert!(
                c <= 2.0 * (2.0 * n as f64 / 3.0).sqrt() + 2.0,
                "n={n} count={c}"
            );
            assert!(c >= (2.0 * n as f64 / 3.0).sqrt() - 1.0, "n={n} count={c}");
        }
    }

    #[test]
    fn csv_rows() {
        let mut buf = Vec::new();
        partitions_recurrence(5).write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "n,p(n)\n0,1\n1,1\n2,2\n3,3\n4,5\n5,7\n"
        );
    }

    #[test]
    fn modular_dp_lifts_to_exact_counts() {
        let exact = partitions_oracle_dp(600);
        let modular = ModularPartitionTable::new(600);
        assert_eq!(modular.max_n(), 600);
        assert_eq!(modular.primes()[0], 2_147_483_647);
        for n in [0, 1, 2, 5, 50, 333, 599, 600] {
            assert_eq!(&modular.exact(n), exact.get(n).unwrap(), "n={n}");
        }
    }

    #[test]
    fn primes_are_prime_and_distinct() {
        let ps = primes_below(1 << 31, 16);
        assert_eq!(ps.len(), 16);
        assert!(ps.windows(2).all(|w| w[0] > w[1]));
        assert_eq!(&ps[..3], &[2_147_483_647, 2_147_483_629, 2_147_483_587]);
    }
}
