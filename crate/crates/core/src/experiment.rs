//! The distinguishing experiments and the conditional distributions they
//! are built from.
//!
//! The sample space is always the finite set of (oracle, seed) pairs. From
//! it we derive, by exact enumeration: the generator's output distribution,
//! the transcript distribution conditioned on a fixed output `g` and a
//! partial oracle view `h`, the matching conditional oracle distribution,
//! and the acceptance probabilities of a quantum distinguisher in the
//! `Prg`/`Rand` games, their fixed-`g` variants, and the three hybrid games
//! that interpolate between giving the distinguisher the real oracle and a
//! freshly resampled one.
//!
//! Conditional distributions can be *undefined* when the conditioning event
//! is empty (no oracle consistent with `h` produces `g`); that is a value
//! here (`Ok(None)`), not an error, because the transcript-discovery loop
//! branches on it.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dist::{BitDistribution, Distribution, Provenance};
use crate::engine::{output_distribution, QueryCircuit};
use crate::oracle::{
    consistent_count, enumerate_consistent, iter_consistent, sample_consistent, Oracle,
    PartialFunction,
};
use crate::prg::{run_prg, ClassicalPrg, Transcript};
use crate::{lift, Error, Mode, Result};

/// A quantum distinguisher: a query circuit with one output wire plus the
/// wires that receive the challenge string as a bit-flip preamble.
#[derive(Debug, Clone)]
pub struct Distinguisher {
    name: String,
    input_wires: Vec<usize>,
    circuit: QueryCircuit,
}

impl Distinguisher {
    pub fn new(
        name: impl Into<String>,
        circuit: QueryCircuit,
        input_wires: Vec<usize>,
    ) -> Result<Self> {
        if circuit.output_bits() != 1 {
            return Err(Error::DimensionMismatch(circuit.output_bits() as usize, 1));
        }
        let total = circuit.total_wires() as usize;
        for &wire in &input_wires {
            if wire >= total {
                return Err(Error::WireOutOfRange { wire, total });
            }
        }
        let mut dedup = input_wires.clone();
        dedup.sort_unstable();
        dedup.dedup();
        if dedup.len() != input_wires.len() {
            return Err(Error::DuplicateWires(input_wires));
        }
        Ok(Distinguisher {
            name: name.into(),
            input_wires,
            circuit,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn circuit(&self) -> &QueryCircuit {
        &self.circuit
    }

    pub fn input_wires(&self) -> &[usize] {
        &self.input_wires
    }

    /// Challenge length `l` in bits.
    pub fn input_bits(&self) -> u32 {
        self.input_wires.len() as u32
    }

    pub fn query_count(&self) -> u32 {
        self.circuit.query_count()
    }

    /// Probability that the circuit outputs 1 on challenge `g` with quantum
    /// access to `oracle`.
    pub fn accept_probability(&self, oracle: &Oracle, g: u32) -> Result<f64> {
        let prepared = self
            .circuit
            .with_input(&self.input_wires, g, self.input_bits())?;
        Ok(output_distribution(&prepared, oracle)?.prob_of(&1))
    }
}

/// One draw of the generator's sample space: oracle, seed, output,
/// transcript.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrgSample {
    pub oracle: Oracle,
    pub seed: u32,
    pub output: u32,
    pub transcript: Transcript,
}

/// Every total oracle of a given signature, in enumeration order.
pub fn all_oracles(n: u32, m: u32, budget: u64) -> Result<Vec<Oracle>> {
    enumerate_consistent(&PartialFunction::empty(n, m), budget)
}

fn ensemble_size(prg: &dyn ClassicalPrg, h: &PartialFunction) -> u128 {
    consistent_count(h) * (1u128 << prg.seed_bits())
}

fn check_budget(needed: u128, budget: u64) -> Result<()> {
    if needed > budget as u128 {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    Ok(())
}

/// The full `(oracle, seed)` sample space of a generator, in lexicographic
/// (oracle, seed) order.
pub fn prg_ensemble(prg: &dyn ClassicalPrg, budget: u64) -> Result<Vec<PrgSample>> {
    let empty = PartialFunction::empty(prg.oracle_n(), prg.oracle_m());
    check_budget(ensemble_size(prg, &empty), budget)?;
    let mut out = Vec::new();
    for oracle in iter_consistent(&empty) {
        for seed in 0..1u32 << prg.seed_bits() {
            let (output, transcript) = run_prg(prg, &oracle, seed)?;
            out.push(PrgSample {
                oracle: oracle.clone(),
                seed,
                output,
                transcript,
            });
        }
    }
    Ok(out)
}

/// The set of outputs attainable by the generator over all (oracle, seed)
/// pairs.
pub fn prg_range(prg: &dyn ClassicalPrg, budget: u64) -> Result<BTreeSet<u32>> {
    Ok(prg_ensemble(prg, budget)?
        .into_iter()
        .map(|s| s.output)
        .collect())
}

/// Exact distribution of the generator's output over a uniform oracle and
/// seed.
pub fn prg_output_distribution(prg: &dyn ClassicalPrg, budget: u64) -> Result<Distribution<u32>> {
    let samples = prg_ensemble(prg, budget)?;
    Ok(Distribution::from_weights(
        samples.into_iter().map(|s| (s.output, 1.0)),
        Provenance::ExactEnumeration,
    ))
}

/// All `(oracle, seed, transcript)` triples with the oracle consistent with
/// `h` and the generator producing `g`. Empty means the conditioning event
/// is empty, i.e. the conditional distributions are undefined.
pub fn qualifying_runs(
    prg: &dyn ClassicalPrg,
    g: u32,
    h: &PartialFunction,
    budget: u64,
) -> Result<Vec<PrgSample>> {
    check_budget(ensemble_size(prg, h), budget)?;
    let mut out = Vec::new();
    for oracle in iter_consistent(h) {
        for seed in 0..1u32 << prg.seed_bits() {
            let (output, transcript) = run_prg(prg, &oracle, seed)?;
            if output == g {
                out.push(PrgSample {
                    oracle: oracle.clone(),
                    seed,
                    output,
                    transcript,
                });
            }
        }
    }
    Ok(out)
}

/// The transcript distribution conditioned on output `g` and oracle
/// consistency with `h`. `Ok(None)` when the conditioning event is empty.
pub fn transcript_distribution(
    prg: &dyn ClassicalPrg,
    g: u32,
    h: &PartialFunction,
    mode: Mode,
) -> Result<Option<Distribution<Transcript>>> {
    match mode {
        Mode::Exact { budget } => {
            let runs = qualifying_runs(prg, g, h, budget)?;
            if runs.is_empty() {
                return Ok(None);
            }
            Ok(Some(Distribution::from_weights(
                runs.into_iter().map(|s| (s.transcript, 1.0)),
                Provenance::ExactEnumeration,
            )))
        }
        Mode::Sampled { seed, trials } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut hits = Vec::new();
            for _ in 0..trials {
                let oracle = sample_consistent(h, &mut rng);
                let s = rng.gen_range(0..1u32 << prg.seed_bits());
                let (output, transcript) = run_prg(prg, &oracle, s)?;
                if output == g {
                    hits.push((transcript, 1.0));
                }
            }
            if hits.is_empty() {
                return Err(Error::InsufficientSamples(trials));
            }
            Ok(Some(Distribution::from_weights(
                hits,
                Provenance::Sampled { seed, trials },
            )))
        }
    }
}

/// The oracle distribution conditioned on output `g` and consistency with
/// `h`; the unconditioned-on-`g` case is just `Func(h)` uniform. Oracles are
/// weighted by how many seeds produce `g` under them.
pub fn conditional_oracle_distribution(
    prg: &dyn ClassicalPrg,
    g: u32,
    h: &PartialFunction,
    mode: Mode,
) -> Result<Option<Distribution<Oracle>>> {
    match mode {
        Mode::Exact { budget } => {
            let runs = qualifying_runs(prg, g, h, budget)?;
            if runs.is_empty() {
                return Ok(None);
            }
            Ok(Some(Distribution::from_weights(
                runs.into_iter().map(|s| (s.oracle, 1.0)),
                Provenance::ExactEnumeration,
            )))
        }
        Mode::Sampled { seed, trials } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut hits = Vec::new();
            for _ in 0..trials {
                let oracle = sample_consistent(h, &mut rng);
                let s = rng.gen_range(0..1u32 << prg.seed_bits());
                let (output, _) = run_prg(prg, &oracle, s)?;
                if output == g {
                    hits.push((oracle, 1.0));
                }
            }
            if hits.is_empty() {
                return Err(Error::InsufficientSamples(trials));
            }
            Ok(Some(Distribution::from_weights(
                hits,
                Provenance::Sampled { seed, trials },
            )))
        }
    }
}

/// The uniform distribution over all oracles of a signature.
pub fn uniform_oracles(n: u32, m: u32, budget: u64) -> Result<Distribution<Oracle>> {
    Ok(Distribution::from_weights(
        all_oracles(n, m, budget)?.into_iter().map(|o| (o, 1.0)),
        Provenance::ExactEnumeration,
    ))
}

/// For every point `x`, the probability that a transcript drawn from the
/// conditional distribution contains `x`. `Ok(None)` when the conditional is
/// undefined.
pub fn transcript_point_weights(
    prg: &dyn ClassicalPrg,
    g: u32,
    h: &PartialFunction,
    budget: u64,
) -> Result<Option<Vec<f64>>> {
    let Some(dist) = transcript_distribution(prg, g, h, Mode::Exact { budget })? else {
        return Ok(None);
    };
    let points = 1usize << prg.oracle_n();
    let mut weights = vec![0.0f64; points];
    for (tau, p) in dist.support() {
        for &(x, _) in tau.pairs() {
            weights[x as usize] += p;
        }
    }
    Ok(Some(weights))
}

/// The heaviest transcript point outside the already-known domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeavyPoint {
    /// Lexicographically smallest maximizer over points outside `D_h`;
    /// `None` when `h` is already total.
    pub point: Option<u32>,
    /// Maximum inclusion probability over points outside `D_h` (0 when the
    /// domain is exhausted). This is the transcript-discovery loop guard.
    pub eps_outside: f64,
    /// Maximum inclusion probability over all points, for reporting.
    pub eps_all: f64,
}

/// Compute the heavy point of the conditional transcript distribution.
/// Errors with [`Error::UndefinedConditional`] when no (oracle, seed) pair
/// attains `g` under `h`.
pub fn heavy_point(
    prg: &dyn ClassicalPrg,
    g: u32,
    h: &PartialFunction,
    budget: u64,
) -> Result<HeavyPoint> {
    let weights =
        transcript_point_weights(prg, g, h, budget)?.ok_or(Error::UndefinedConditional)?;
    let mut best: Option<(u32, f64)> = None;
    let mut eps_all = 0.0f64;
    for (x, &w) in weights.iter().enumerate() {
        eps_all = eps_all.max(w);
        if h.contains(x as u32) {
            continue;
        }
        // Strict comparison keeps the lexicographically smallest maximizer.
        if best.is_none_or(|(_, bw)| w > bw) {
            best = Some((x as u32, w));
        }
    }
    Ok(HeavyPoint {
        point: best.map(|(x, _)| x),
        eps_outside: best.map_or(0.0, |(_, w)| w),
        eps_all,
    })
}

/// The seven experiment variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Game {
    /// Uniform oracle and seed; the distinguisher sees the generator output.
    Prg,
    /// Uniform oracle; the distinguisher sees a uniform string.
    Rand,
    /// Oracle drawn conditioned on a fixed output `g`.
    PrgFixed,
    /// Uniform oracle, fixed string `g`.
    RandFixed,
    /// Like `PrgFixed`, but the oracle is resampled consistent with the
    /// transcript-discovery view before the distinguisher runs.
    Hyb1,
    /// Like `Hyb1`, with the resampling split into a fresh extension of the
    /// view reprogrammed by a conditionally drawn transcript.
    Hyb2,
    /// Like `Hyb2`, without the final reprogramming step.
    Hyb3,
}

impl Game {
    pub fn parse(name: &str) -> Result<Game> {
        match name {
            "PRG" => Ok(Game::Prg),
            "Rand" => Ok(Game::Rand),
            "PRGg" => Ok(Game::PrgFixed),
            "Randg" => Ok(Game::RandFixed),
            "Hyb1" => Ok(Game::Hyb1),
            "Hyb2" => Ok(Game::Hyb2),
            "Hyb3" => Ok(Game::Hyb3),
            other => Err(Error::UnknownName(other.to_string())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Game::Prg => "PRG",
            Game::Rand => "Rand",
            Game::PrgFixed => "PRGg",
            Game::RandFixed => "Randg",
            Game::Hyb1 => "Hyb1",
            Game::Hyb2 => "Hyb2",
            Game::Hyb3 => "Hyb3",
        }
    }

    pub fn needs_g(&self) -> bool {
        !matches!(self, Game::Prg | Game::Rand)
    }

    pub fn needs_delta(&self) -> bool {
        matches!(self, Game::Hyb1 | Game::Hyb2 | Game::Hyb3)
    }
}

fn check_compatible(dist: &Distinguisher, prg: &dyn ClassicalPrg) -> Result<()> {
    if dist.circuit.n() != prg.oracle_n() || dist.circuit.m() != prg.oracle_m() {
        return Err(Error::SignatureMismatch {
            expected_n: prg.oracle_n(),
            expected_m: prg.oracle_m(),
            got_n: dist.circuit.n(),
            got_m: dist.circuit.m(),
        });
    }
    if dist.input_bits() != prg.output_bits() {
        return Err(Error::DimensionMismatch(
            dist.input_bits() as usize,
            prg.output_bits() as usize,
        ));
    }
    Ok(())
}

/// `Pr[Prg experiment outputs 1]`.
pub fn pr_prg_one(dist: &Distinguisher, prg: &dyn ClassicalPrg, mode: Mode) -> Result<f64> {
    check_compatible(dist, prg)?;
    match mode {
        Mode::Exact { budget } => {
            let samples = prg_ensemble(prg, budget)?;
            let total = samples.len() as f64;
            let mut acc = 0.0;
            for s in &samples {
                acc += dist.accept_probability(&s.oracle, s.output)?;
            }
            Ok(acc / total)
        }
        Mode::Sampled { seed, trials } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let empty = PartialFunction::empty(prg.oracle_n(), prg.oracle_m());
            let mut acc = 0.0;
            for _ in 0..trials {
                let oracle = sample_consistent(&empty, &mut rng);
                let s = rng.gen_range(0..1u32 << prg.seed_bits());
                let (g, _) = run_prg(prg, &oracle, s)?;
                acc += dist.accept_probability(&oracle, g)?;
            }
            Ok(acc / trials as f64)
        }
    }
}

/// Acceptance probability against a uniform oracle and uniform `l`-bit
/// challenge. Only the distinguisher's signature matters.
pub fn rand_accept_probability(
    dist: &Distinguisher,
    n: u32,
    m: u32,
    l: u32,
    mode: Mode,
) -> Result<f64> {
    match mode {
        Mode::Exact { budget } => {
            let oracles = all_oracles(n, m, budget)?;
            let total = (oracles.len() * (1usize << l)) as f64;
            let mut acc = 0.0;
            for oracle in &oracles {
                for g in 0..1u32 << l {
                    acc += dist.accept_probability(oracle, g)?;
                }
            }
            Ok(acc / total)
        }
        Mode::Sampled { seed, trials } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let empty = PartialFunction::empty(n, m);
            let mut acc = 0.0;
            for _ in 0..trials {
                let oracle = sample_consistent(&empty, &mut rng);
                let g = rng.gen_range(0..1u32 << l);
                acc += dist.accept_probability(&oracle, g)?;
            }
            Ok(acc / trials as f64)
        }
    }
}

/// `Pr[Rand experiment outputs 1]`.
pub fn pr_rand_one(dist: &Distinguisher, prg: &dyn ClassicalPrg, mode: Mode) -> Result<f64> {
    check_compatible(dist, prg)?;
    rand_accept_probability(
        dist,
        prg.oracle_n(),
        prg.oracle_m(),
        prg.output_bits(),
        mode,
    )
}

/// Distinguishing advantage `|Pr[Prg = 1] - Pr[Rand = 1]|`.
pub fn prg_advantage(dist: &Distinguisher, prg: &dyn ClassicalPrg, mode: Mode) -> Result<f64> {
    Ok((pr_prg_one(dist, prg, mode)? - pr_rand_one(dist, prg, mode)?).abs())
}

/// Run one experiment and return its exact (or estimated) output
/// distribution over `{0,1}`.
pub fn run_experiment(
    game: Game,
    dist: &Distinguisher,
    prg: &dyn ClassicalPrg,
    g: Option<u32>,
    delta: Option<f64>,
    mode: Mode,
) -> Result<BitDistribution> {
    check_compatible(dist, prg)?;
    let provenance = match mode {
        Mode::Exact { .. } => Provenance::ExactEnumeration,
        Mode::Sampled { seed, trials } => Provenance::Sampled { seed, trials },
    };
    let g_value = || g.ok_or(Error::MissingParameter("g"));
    let delta_value = || delta.ok_or(Error::MissingParameter("delta"));
    let p1 = match game {
        Game::Prg => pr_prg_one(dist, prg, mode)?,
        Game::Rand => pr_rand_one(dist, prg, mode)?,
        Game::PrgFixed => pr_prg_fixed_one(dist, prg, g_value()?, mode)?,
        Game::RandFixed => pr_rand_fixed_one(dist, prg, g_value()?, mode)?,
        Game::Hyb1 | Game::Hyb2 | Game::Hyb3 => {
            hybrid_one(game, dist, prg, g_value()?, delta_value()?, mode)?
        }
    };
    Ok(BitDistribution::from_prob_one(p1, provenance))
}

fn pr_prg_fixed_one(
    dist: &Distinguisher,
    prg: &dyn ClassicalPrg,
    g: u32,
    mode: Mode,
) -> Result<f64> {
    let empty = PartialFunction::empty(prg.oracle_n(), prg.oracle_m());
    match mode {
        Mode::Exact { budget } => {
            let runs = qualifying_runs(prg, g, &empty, budget)?;
            if runs.is_empty() {
                return Err(Error::UndefinedConditional);
            }
            let total = runs.len() as f64;
            let mut acc = 0.0;
            for r in &runs {
                acc += dist.accept_probability(&r.oracle, g)?;
            }
            Ok(acc / total)
        }
        Mode::Sampled { seed, trials } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut hits = 0u64;
            let mut acc = 0.0;
            for _ in 0..trials {
                let oracle = sample_consistent(&empty, &mut rng);
                let s = rng.gen_range(0..1u32 << prg.seed_bits());
                let (output, _) = run_prg(prg, &oracle, s)?;
                if output == g {
                    hits += 1;
                    acc += dist.accept_probability(&oracle, g)?;
                }
            }
            if hits == 0 {
                return Err(Error::InsufficientSamples(trials));
            }
            Ok(acc / hits as f64)
        }
    }
}

fn pr_rand_fixed_one(
    dist: &Distinguisher,
    prg: &dyn ClassicalPrg,
    g: u32,
    mode: Mode,
) -> Result<f64> {
    match mode {
        Mode::Exact { budget } => {
            let oracles = all_oracles(prg.oracle_n(), prg.oracle_m(), budget)?;
            let mut acc = 0.0;
            for oracle in &oracles {
                acc += dist.accept_probability(oracle, g)?;
            }
            Ok(acc / oracles.len() as f64)
        }
        Mode::Sampled { seed, trials } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let empty = PartialFunction::empty(prg.oracle_n(), prg.oracle_m());
            let mut acc = 0.0;
            for _ in 0..trials {
                let oracle = sample_consistent(&empty, &mut rng);
                acc += dist.accept_probability(&oracle, g)?;
            }
            Ok(acc / trials as f64)
        }
    }
}

fn hybrid_one(
    game: Game,
    dist: &Distinguisher,
    prg: &dyn ClassicalPrg,
    g: u32,
    delta: f64,
    mode: Mode,
) -> Result<f64> {
    let limit = lift::limit_for(delta, prg.query_count());
    match mode {
        Mode::Exact { budget } => {
            let empty = PartialFunction::empty(prg.oracle_n(), prg.oracle_m());
            let runs = qualifying_runs(prg, g, &empty, budget)?;
            if runs.is_empty() {
                return Err(Error::UndefinedConditional);
            }
            let total = runs.len() as f64;
            // The discovery pass is deterministic per oracle; group seeds.
            let mut by_oracle: BTreeMap<Oracle, u64> = BTreeMap::new();
            for r in &runs {
                *by_oracle.entry(r.oracle.clone()).or_insert(0) += 1;
            }
            let mut acc = 0.0;
            for (oracle, seeds) in by_oracle {
                let weight = seeds as f64 / total;
                let search = lift::find_transcript(&oracle, prg, g, delta, limit, budget)?;
                // The discovered view is used whether or not the search
                // terminated cleanly; every entry is a genuine oracle value,
                // which is all the resampling arguments need.
                let h = search.gathered;
                acc += weight * hybrid_inner(game, dist, prg, g, &h, budget)?;
            }
            Ok(acc)
        }
        Mode::Sampled { seed, trials } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let empty = PartialFunction::empty(prg.oracle_n(), prg.oracle_m());
            let budget = crate::DEFAULT_BUDGET;
            let mut hits = 0u64;
            let mut acc = 0.0;
            for _ in 0..trials {
                let oracle = sample_consistent(&empty, &mut rng);
                let s = rng.gen_range(0..1u32 << prg.seed_bits());
                let (output, _) = run_prg(prg, &oracle, s)?;
                if output != g {
                    continue;
                }
                hits += 1;
                let search = lift::find_transcript(&oracle, prg, g, delta, limit, budget)?;
                acc += hybrid_inner(game, dist, prg, g, &search.gathered, budget)?;
            }
            if hits == 0 {
                return Err(Error::InsufficientSamples(trials));
            }
            Ok(acc / hits as f64)
        }
    }
}

fn hybrid_inner(
    game: Game,
    dist: &Distinguisher,
    prg: &dyn ClassicalPrg,
    g: u32,
    h: &PartialFunction,
    budget: u64,
) -> Result<f64> {
    match game {
        Game::Hyb1 => {
            let od = conditional_oracle_distribution(prg, g, h, Mode::Exact { budget })?
                .expect("the true oracle qualifies, so the conditional is defined");
            let mut acc = 0.0;
            for (resampled, p) in od.support() {
                acc += p * dist.accept_probability(resampled, g)?;
            }
            Ok(acc)
        }
        Game::Hyb2 => {
            let td = transcript_distribution(prg, g, h, Mode::Exact { budget })?
                .expect("the true oracle qualifies, so the conditional is defined");
            let family = enumerate_consistent(h, budget)?;
            let mut acc = 0.0;
            for fresh in &family {
                for (tau, p) in td.support() {
                    let patch = tau.as_partial(prg.oracle_n(), prg.oracle_m()).without(h)?;
                    let reprogrammed = fresh.patch(&patch)?;
                    acc += p / family.len() as f64 * dist.accept_probability(&reprogrammed, g)?;
                }
            }
            Ok(acc)
        }
        Game::Hyb3 => {
            let family = enumerate_consistent(h, budget)?;
            let mut acc = 0.0;
            for fresh in &family {
                acc += dist.accept_probability(fresh, g)? / family.len() as f64;
            }
            Ok(acc)
        }
        _ => unreachable!("hybrid_inner only handles hybrid games"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::prg::{ComplementPairPrg, ConstantPrg};
    use approx::assert_abs_diff_eq;

    fn exact() -> Mode {
        Mode::exact()
    }

    #[test]
    fn transcript_distribution_of_complement_pair() {
        // Only the all-zero oracle can output 00, under either seed order.
        let prg = ComplementPairPrg;
        let empty = PartialFunction::empty(1, 1);
        let dist = transcript_distribution(&prg, 0b00, &empty, exact())
            .unwrap()
            .unwrap();
        assert_eq!(dist.support().len(), 2);
        for (_, p) in dist.support() {
            assert_abs_diff_eq!(*p, 0.5, epsilon = 1e-12);
        }
        // Cross-check against a by-hand enumeration of all 8 (oracle, seed)
        // pairs.
        let mut expected = Vec::new();
        for oracle in all_oracles(1, 1, 1 << 20).unwrap() {
            for s in 0..2 {
                let (g, tau) = run_prg(&prg, &oracle, s).unwrap();
                if g == 0b00 {
                    expected.push(tau);
                }
            }
        }
        assert_eq!(expected.len(), 2);
        for tau in expected {
            assert!(dist.prob_of(&tau) > 0.0);
        }
    }

    #[test]
    fn conditioning_can_be_undefined() {
        let prg = ComplementPairPrg;
        let h = PartialFunction::from_entries(1, 1, &[(0, 1)]).unwrap();
        assert!(transcript_distribution(&prg, 0b00, &h, exact())
            .unwrap()
            .is_none());
        // A total h whose unique oracle misses g.
        let h = Oracle::from_table(1, 1, vec![1, 0]).graph();
        assert!(transcript_distribution(&prg, 0b00, &h, exact())
            .unwrap()
            .is_none());
    }

    #[test]
    fn conditional_oracle_point_mass() {
        let prg = ComplementPairPrg;
        let empty = PartialFunction::empty(1, 1);
        let od = conditional_oracle_distribution(&prg, 0b00, &empty, exact())
            .unwrap()
            .unwrap();
        assert_eq!(od.support().len(), 1);
        assert_eq!(od.support()[0].0, Oracle::constant(1, 1, 0));
        // g outside the range.
        assert!(
            conditional_oracle_distribution(&ConstantPrg, 0b11, &empty, exact())
                .unwrap()
                .is_none()
        );
        let uniform = uniform_oracles(1, 1, 1 << 20).unwrap();
        assert_eq!(uniform.support().len(), 4);
    }

    #[test]
    fn transcript_and_oracle_conditionals_agree() {
        // Marginalizing the conditional oracle distribution through the
        // generator reproduces the transcript distribution.
        let prg = ComplementPairPrg;
        for g in 0..4u32 {
            for h in [
                PartialFunction::empty(1, 1),
                PartialFunction::from_entries(1, 1, &[(0, 0)]).unwrap(),
            ] {
                let runs = qualifying_runs(&prg, g, &h, 1 << 20).unwrap();
                if runs.is_empty() {
                    continue;
                }
                let td = transcript_distribution(&prg, g, &h, exact())
                    .unwrap()
                    .unwrap();
                let rebuilt = Distribution::from_weights(
                    runs.iter().map(|r| (r.transcript.clone(), 1.0)),
                    Provenance::ExactEnumeration,
                );
                assert!(td.tv_distance(&rebuilt) <= 1e-12);
            }
        }
    }

    #[test]
    fn heavy_point_prefers_small_points_on_ties() {
        let prg = ComplementPairPrg;
        let empty = PartialFunction::empty(1, 1);
        let hp = heavy_point(&prg, 0b00, &empty, 1 << 20).unwrap();
        assert_eq!(hp.point, Some(0));
        assert_abs_diff_eq!(hp.eps_outside, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(hp.eps_all, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn heavy_point_on_exhausted_domain() {
        let prg = ComplementPairPrg;
        let full = Oracle::constant(1, 1, 0).graph();
        let hp = heavy_point(&prg, 0b00, &full, 1 << 20).unwrap();
        assert_eq!(hp.point, None);
        assert_eq!(hp.eps_outside, 0.0);
        // Every conditional transcript still touches both points.
        assert_abs_diff_eq!(hp.eps_all, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn heavy_point_errors_when_undefined() {
        let prg = ComplementPairPrg;
        let h = PartialFunction::from_entries(1, 1, &[(0, 1)]).unwrap();
        assert!(matches!(
            heavy_point(&prg, 0b00, &h, 1 << 20),
            Err(Error::UndefinedConditional)
        ));
    }

    #[test]
    fn single_run_conditioning_gives_zero_one_weights() {
        // Conditioning the constant generator pins every weight to 0 or 1
        // once the oracle is fully known.
        let prg = ConstantPrg;
        let h = Oracle::from_table(1, 1, vec![1, 0]).graph();
        let weights = transcript_point_weights(&prg, 0b00, &h, 1 << 20)
            .unwrap()
            .unwrap();
        for w in weights {
            assert!(w == 0.0 || w == 1.0);
        }
    }

    #[test]
    fn ignoring_distinguisher_has_zero_advantage() {
        let prg = ComplementPairPrg;
        let dist = fixtures::distinguisher_for("a_zero", 1, 1, 2).unwrap();
        assert_abs_diff_eq!(
            prg_advantage(&dist, &prg, exact()).unwrap(),
            0.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn prg_probability_decomposes_over_outputs() {
        // Total probability: Pr[Prg = 1] equals the g-weighted mixture of
        // the fixed-output games.
        let prg = ComplementPairPrg;
        let dist = fixtures::distinguisher_for("a_par", 1, 1, 2).unwrap();
        let direct = pr_prg_one(&dist, &prg, exact()).unwrap();
        let marginal = prg_output_distribution(&prg, 1 << 20).unwrap();
        let mut mixed = 0.0;
        for (g, w) in marginal.support() {
            mixed += w * pr_prg_fixed_one(&dist, &prg, *g, exact()).unwrap();
        }
        assert_abs_diff_eq!(direct, mixed, epsilon = 1e-12);
    }

    #[test]
    fn missing_parameters_are_rejected() {
        let prg = ComplementPairPrg;
        let dist = fixtures::distinguisher_for("a_par", 1, 1, 2).unwrap();
        assert!(matches!(
            run_experiment(Game::PrgFixed, &dist, &prg, None, None, exact()),
            Err(Error::MissingParameter("g"))
        ));
        assert!(matches!(
            run_experiment(Game::Hyb1, &dist, &prg, Some(0), None, exact()),
            Err(Error::MissingParameter("delta"))
        ));
    }

    #[test]
    fn conditioning_outside_the_range_is_rejected() {
        // g_const only ever outputs 00, so fixing any other challenge leaves
        // an empty conditioning event.
        let prg = ConstantPrg;
        let dist = fixtures::distinguisher_for("a_zero", 1, 1, 2).unwrap();
        assert!(matches!(
            run_experiment(Game::PrgFixed, &dist, &prg, Some(0b11), None, exact()),
            Err(Error::UndefinedConditional)
        ));
        assert!(matches!(
            run_experiment(Game::Hyb2, &dist, &prg, Some(0b11), Some(0.04), exact()),
            Err(Error::UndefinedConditional)
        ));
    }

    #[test]
    fn game_names_round_trip() {
        for name in ["PRG", "Rand", "PRGg", "Randg", "Hyb1", "Hyb2", "Hyb3"] {
            assert_eq!(Game::parse(name).unwrap().name(), name);
        }
        assert!(Game::parse("nope").is_err());
    }
}
