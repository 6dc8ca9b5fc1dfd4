//! Classical oracle PRGs with transcript recording.
//!
//! A [`ClassicalPrg`] is a deterministic algorithm that stretches a `k`-bit
//! seed into an `l > k`-bit string using exactly `Q_G` classical queries to
//! an oracle `{0,1}^n -> {0,1}^m`. Implementations receive their oracle
//! through a [`TrackedOracle`], so the harness rather than the generator owns the
//! query transcript and the exact-query-count check.
//!
//! Three built-in generators cover the test surface: one that outputs the
//! oracle values at the seed and its complement, one expanding generator
//! that tags the pair with the seed parity, and a degenerate constant
//! generator whose range is a single string.

use std::collections::BTreeSet;

use crate::bits::complement;
use crate::oracle::{Oracle, PartialFunction};
use crate::{Error, Result};

/// An ordered list of distinct `(query, answer)` pairs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Transcript {
    pairs: Vec<(u32, u32)>,
}

impl Transcript {
    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }

    /// Number of distinct points queried.
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains_point(&self, x: u32) -> bool {
        self.pairs.iter().any(|&(p, _)| p == x)
    }

    /// View the transcript as a partial function. Always single-valued
    /// because repeated queries are recorded once.
    pub fn as_partial(&self, n: u32, m: u32) -> PartialFunction {
        let mut f = PartialFunction::empty(n, m);
        for &(x, y) in &self.pairs {
            f.insert(x, y).expect("transcript is single-valued");
        }
        f
    }
}

/// Classical oracle access that records every call.
///
/// `calls` counts raw queries; the transcript keeps each distinct point once,
/// in first-query order, with the oracle's answer.
#[derive(Debug)]
pub struct TrackedOracle<'a> {
    oracle: &'a Oracle,
    calls: u64,
    pairs: Vec<(u32, u32)>,
    seen: BTreeSet<u32>,
}

impl<'a> TrackedOracle<'a> {
    pub fn new(oracle: &'a Oracle) -> Self {
        TrackedOracle {
            oracle,
            calls: 0,
            pairs: Vec::new(),
            seen: BTreeSet::new(),
        }
    }

    pub fn n(&self) -> u32 {
        self.oracle.n()
    }

    pub fn m(&self) -> u32 {
        self.oracle.m()
    }

    pub fn query(&mut self, x: u32) -> u32 {
        let y = self.oracle.get(x);
        self.calls += 1;
        if self.seen.insert(x) {
            self.pairs.push((x, y));
        }
        y
    }

    /// Raw query count, repeats included.
    pub fn calls(&self) -> u64 {
        self.calls
    }

    /// Distinct points queried so far.
    pub fn distinct(&self) -> usize {
        self.pairs.len()
    }

    pub fn queried(&self, x: u32) -> bool {
        self.seen.contains(&x)
    }

    pub fn transcript(&self) -> Transcript {
        Transcript {
            pairs: self.pairs.clone(),
        }
    }

    pub fn as_partial(&self) -> PartialFunction {
        self.transcript()
            .as_partial(self.oracle.n(), self.oracle.m())
    }
}

/// A deterministic classical oracle PRG.
///
/// `eval` must make exactly `query_count()` oracle calls for every seed and
/// oracle; [`run_prg`] enforces this.
pub trait ClassicalPrg {
    fn name(&self) -> &str;
    /// Seed length `k` in bits.
    fn seed_bits(&self) -> u32;
    /// Output length `l` in bits, with `l > k`.
    fn output_bits(&self) -> u32;
    /// Oracle input width `n`.
    fn oracle_n(&self) -> u32;
    /// Oracle output width `m`.
    fn oracle_m(&self) -> u32;
    /// Exact number of oracle calls per evaluation.
    fn query_count(&self) -> u64;
    /// Compute the output string for `seed`, querying through `oracle`.
    fn eval(&self, seed: u32, oracle: &mut TrackedOracle<'_>) -> u32;
}

/// Run `G^H(s)`, returning the output and the query transcript. Errors if
/// the oracle signature does not match or if the generator breaks its
/// exact-query-count contract.
pub fn run_prg(prg: &dyn ClassicalPrg, oracle: &Oracle, seed: u32) -> Result<(u32, Transcript)> {
    if oracle.n() != prg.oracle_n() || oracle.m() != prg.oracle_m() {
        return Err(Error::SignatureMismatch {
            expected_n: prg.oracle_n(),
            expected_m: prg.oracle_m(),
            got_n: oracle.n(),
            got_m: oracle.m(),
        });
    }
    debug_assert!(seed < 1 << prg.seed_bits());
    let mut tracked = TrackedOracle::new(oracle);
    let g = prg.eval(seed, &mut tracked);
    if tracked.calls() != prg.query_count() {
        return Err(Error::QueryCountViolation {
            made: tracked.calls(),
            declared: prg.query_count(),
        });
    }
    Ok((g, tracked.transcript()))
}

/// `g = H(s) || H(!s)` on n = m = 1: two queries, two output bits from a
/// one-bit seed.
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplementPairPrg;

impl ClassicalPrg for ComplementPairPrg {
    fn name(&self) -> &str {
        "g_id"
    }
    fn seed_bits(&self) -> u32 {
        1
    }
    fn output_bits(&self) -> u32 {
        2
    }
    fn oracle_n(&self) -> u32 {
        1
    }
    fn oracle_m(&self) -> u32 {
        1
    }
    fn query_count(&self) -> u64 {
        2
    }
    fn eval(&self, seed: u32, oracle: &mut TrackedOracle<'_>) -> u32 {
        let first = oracle.query(seed);
        let second = oracle.query(complement(seed, 1));
        (first << 1) | second
    }
}

/// Expanding generator on n = 2, m = 1: `g = H(s) || H(!s) || parity(s)`,
/// two queries, three output bits from a two-bit seed.
#[derive(Debug, Clone, Copy, Default)]
pub struct ParityTagPrg;

impl ClassicalPrg for ParityTagPrg {
    fn name(&self) -> &str {
        "g_xp2"
    }
    fn seed_bits(&self) -> u32 {
        2
    }
    fn output_bits(&self) -> u32 {
        3
    }
    fn oracle_n(&self) -> u32 {
        2
    }
    fn oracle_m(&self) -> u32 {
        1
    }
    fn query_count(&self) -> u64 {
        2
    }
    fn eval(&self, seed: u32, oracle: &mut TrackedOracle<'_>) -> u32 {
        let first = oracle.query(seed);
        let second = oracle.query(complement(seed, 2));
        let parity = (seed ^ (seed >> 1)) & 1;
        (first << 2) | (second << 1) | parity
    }
}

/// Degenerate generator that ignores its queries and always outputs `00`.
/// The two queries go to fixed distinct points so the exact-query-count
/// contract holds without repeats.
#[derive(Debug, Clone, Copy, Default)]
pub struct ConstantPrg;

impl ClassicalPrg for ConstantPrg {
    fn name(&self) -> &str {
        "g_const"
    }
    fn seed_bits(&self) -> u32 {
        1
    }
    fn output_bits(&self) -> u32 {
        2
    }
    fn oracle_n(&self) -> u32 {
        1
    }
    fn oracle_m(&self) -> u32 {
        1
    }
    fn query_count(&self) -> u64 {
        2
    }
    fn eval(&self, _seed: u32, oracle: &mut TrackedOracle<'_>) -> u32 {
        oracle.query(0);
        oracle.query(1);
        0b00
    }
}

pub const BUILTIN_PRGS: &[&str] = &["g_id", "g_xp2", "g_const"];

/// Look up a built-in generator by its registry name.
pub fn by_name(name: &str) -> Result<Box<dyn ClassicalPrg>> {
    match name {
        "g_id" => Ok(Box::new(ComplementPairPrg)),
        "g_xp2" => Ok(Box::new(ParityTagPrg)),
        "g_const" => Ok(Box::new(ConstantPrg)),
        other => Err(Error::UnknownName(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complement_pair_on_zero_oracle() {
        let h = Oracle::constant(1, 1, 0);
        let (g, tau) = run_prg(&ComplementPairPrg, &h, 0).unwrap();
        assert_eq!(g, 0b00);
        assert_eq!(tau.pairs(), &[(0, 0), (1, 0)]);
    }

    #[test]
    fn complement_pair_follows_the_seed() {
        let h = Oracle::from_table(1, 1, vec![1, 0]);
        let (g, tau) = run_prg(&ComplementPairPrg, &h, 1).unwrap();
        assert_eq!(g, 0b01);
        assert_eq!(tau.pairs(), &[(1, 0), (0, 1)]);
    }

    #[test]
    fn evaluation_is_deterministic() {
        let h = Oracle::from_table(2, 1, vec![1, 0, 0, 1]);
        let a = run_prg(&ParityTagPrg, &h, 0b10).unwrap();
        let b = run_prg(&ParityTagPrg, &h, 0b10).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn parity_tag_layout() {
        let h = Oracle::from_table(2, 1, vec![1, 0, 0, 1]);
        // seed 01: H(01)=0, H(10)=0, parity 1.
        let (g, tau) = run_prg(&ParityTagPrg, &h, 0b01).unwrap();
        assert_eq!(g, 0b001);
        assert_eq!(tau.pairs(), &[(0b01, 0), (0b10, 0)]);
    }

    #[test]
    fn constant_prg_has_singleton_range() {
        for table in [[0, 0], [0, 1], [1, 0], [1, 1]] {
            let h = Oracle::from_table(1, 1, table.to_vec());
            for s in 0..2 {
                let (g, tau) = run_prg(&ConstantPrg, &h, s).unwrap();
                assert_eq!(g, 0b00);
                assert_eq!(tau.len(), 2);
            }
        }
    }

    #[test]
    fn query_count_contract_is_enforced() {
        struct Lazy;
        impl ClassicalPrg for Lazy {
            fn name(&self) -> &str {
                "lazy"
            }
            fn seed_bits(&self) -> u32 {
                1
            }
            fn output_bits(&self) -> u32 {
                2
            }
            fn oracle_n(&self) -> u32 {
                1
            }
            fn oracle_m(&self) -> u32 {
                1
            }
            fn query_count(&self) -> u64 {
                2
            }
            fn eval(&self, seed: u32, oracle: &mut TrackedOracle<'_>) -> u32 {
                oracle.query(seed)
            }
        }
        let h = Oracle::constant(1, 1, 0);
        assert!(matches!(
            run_prg(&Lazy, &h, 0),
            Err(Error::QueryCountViolation {
                made: 1,
                declared: 2
            })
        ));
    }

    #[test]
    fn transcript_dedupes_repeated_queries() {
        let h = Oracle::constant(1, 1, 1);
        let mut t = TrackedOracle::new(&h);
        t.query(0);
        t.query(0);
        t.query(1);
        assert_eq!(t.calls(), 3);
        assert_eq!(t.transcript().pairs(), &[(0, 1), (1, 1)]);
        let f = t.as_partial();
        assert_eq!(f.len(), 2);
    }

    #[test]
    fn registry_knows_the_builtins() {
        for name in BUILTIN_PRGS {
            assert_eq!(by_name(name).unwrap().name(), *name);
        }
        assert!(matches!(by_name("nope"), Err(Error::UnknownName(_))));
    }
}
