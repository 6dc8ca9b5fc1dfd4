//! Classical simulation of near-deterministic quantum oracle algorithms.
//!
//! An algorithm is `delta`-deterministic on an oracle when one canonical
//! output carries probability at least `1 - delta`. For such algorithms the
//! canonical output can only depend on a small *critical set* of oracle
//! points, and [`critical_set_bruteforce`] constructs one by the direct
//! search: repeatedly find a smallest oracle patch that changes the
//! canonical output and keep the patched point the algorithm queries
//! hardest.
//!
//! The simulation stack ([`update`], [`get_point`], [`sim_oracle`]) learns
//! enough of a real oracle, by classical queries only, to reproduce the
//! canonical output: run the algorithm against the identity-extended view,
//! query every point whose magnitude crosses a threshold, and watch for the
//! canonical output to move. [`derandomize_prg`] wraps the stack into a
//! classical PRG that reproduces a quantum generator's canonical outputs.
//!
//! All thresholds and caps come from [`SimBudget`] and degrade as `delta`
//! approaches 1/2; `delta >= 1/2` is rejected outright.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::dist::Distribution;
use crate::engine::{output_distribution, run_circuit, QueryCircuit};
use crate::experiment::{rand_accept_probability, Distinguisher};
use crate::oracle::{identity_extend, Oracle, PartialFunction};
use crate::prg::{ClassicalPrg, TrackedOracle};
use crate::{Error, Mode, Result};

/// Tolerance for determinism checks on exactly-computed probabilities.
pub const DET_TOL: f64 = 1e-9;

/// The most likely output of an algorithm on one oracle, ties broken toward
/// the lexicographically smallest value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CanonicalOutput {
    pub value: u32,
    pub probability: f64,
}

pub fn canonical_output(alg: &QueryCircuit, oracle: &Oracle) -> Result<CanonicalOutput> {
    Ok(canonical_of(&output_distribution(alg, oracle)?))
}

fn canonical_of(dist: &Distribution<u32>) -> CanonicalOutput {
    let mut best = CanonicalOutput {
        value: 0,
        probability: -1.0,
    };
    // Support is sorted ascending, so a strict comparison keeps the
    // smallest maximizer.
    for (value, p) in dist.support() {
        if *p > best.probability {
            best = CanonicalOutput {
                value: *value,
                probability: *p,
            };
        }
    }
    best
}

/// Result of checking `delta`-determinism over an oracle family.
#[derive(Debug, Clone)]
pub enum DeterminismCheck {
    Pass,
    Counterexample {
        oracle: Oracle,
        distribution: Distribution<u32>,
    },
}

impl DeterminismCheck {
    pub fn passed(&self) -> bool {
        matches!(self, DeterminismCheck::Pass)
    }
}

/// Check that the canonical output carries probability at least
/// `1 - delta` on every oracle in the family.
pub fn is_delta_deterministic(
    alg: &QueryCircuit,
    delta: f64,
    family: &[Oracle],
) -> Result<DeterminismCheck> {
    for oracle in family {
        let dist = output_distribution(alg, oracle)?;
        if canonical_of(&dist).probability < 1.0 - delta - DET_TOL {
            return Ok(DeterminismCheck::Counterexample {
                oracle: oracle.clone(),
                distribution: dist,
            });
        }
    }
    Ok(DeterminismCheck::Pass)
}

/// Canonical-output equivalence of two oracle executions. Errors if either
/// execution is not `delta`-deterministic, since the notion is only
/// meaningful for near-deterministic runs.
pub fn qeq(alg: &QueryCircuit, left: &Oracle, right: &Oracle, delta: f64) -> Result<bool> {
    let a = canonical_output(alg, left)?;
    let b = canonical_output(alg, right)?;
    for c in [a, b] {
        if c.probability < 1.0 - delta - DET_TOL {
            return Err(Error::DeterminismViolation(delta, c.probability));
        }
    }
    Ok(a.value == b.value)
}

/// Thresholds and caps for the simulation stack, all functions of the query
/// count and `delta`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SimBudget {
    /// `ceil(Q^4 / (1-2 delta)^4)`: iteration cap for [`get_point`] and
    /// stage cap for [`sim_oracle`].
    pub iteration_cap: u64,
    /// `(1-2 delta)^4 / Q^3`: minimum query magnitude that triggers a real
    /// oracle query in [`update`].
    pub magnitude_threshold: f64,
    /// `2 Q^12 / (1-2 delta)^12`: bound on total classical queries.
    pub query_cap: f64,
}

impl SimBudget {
    pub fn for_algorithm(queries: u32, delta: f64) -> Result<SimBudget> {
        if !(0.0..0.5).contains(&delta) {
            return Err(Error::DeltaOutOfRange(delta));
        }
        let q = f64::from(queries);
        let shrink = (1.0 - 2.0 * delta).powi(4);
        Ok(SimBudget {
            iteration_cap: (q.powi(4) / shrink).ceil() as u64,
            magnitude_threshold: shrink / q.powi(3),
            query_cap: 2.0 * q.powi(12) / (1.0 - 2.0 * delta).powi(12),
        })
    }
}

/// A set of oracle points that pins down the algorithm's canonical output,
/// with the query magnitude the algorithm places on each.
#[derive(Debug, Clone, Default, Serialize)]
pub struct CriticalSet {
    pub magnitudes: BTreeMap<u32, f64>,
}

impl CriticalSet {
    pub fn points(&self) -> impl Iterator<Item = u32> + '_ {
        self.magnitudes.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.magnitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.magnitudes.is_empty()
    }

    pub fn contains(&self, x: u32) -> bool {
        self.magnitudes.contains_key(&x)
    }

    /// The oracle restricted to the critical points.
    pub fn restriction_of(&self, oracle: &Oracle) -> PartialFunction {
        let mut f = PartialFunction::empty(oracle.n(), oracle.m());
        for x in self.points() {
            f.insert(x, oracle.get(x)).expect("fresh map");
        }
        f
    }
}

/// Construct a critical set by exhaustive search.
///
/// Maintains a pool of still-patchable points. Each round scans, in order of
/// ascending domain size, every patch supported on the pool; the first patch
/// that flips the canonical output donates its highest-magnitude point to
/// the critical set and that point leaves the pool. The set is done when no
/// patch on the pool flips the output, which is precisely the statement
/// that the output depends only on the points collected.
pub fn critical_set_bruteforce(
    alg: &QueryCircuit,
    oracle: &Oracle,
    delta: f64,
    budget: u64,
) -> Result<CriticalSet> {
    if !(0.0..0.5).contains(&delta) {
        return Err(Error::DeltaOutOfRange(delta));
    }
    let n = oracle.n();
    let m = oracle.m();
    let points = 1u32 << n;
    // Patch search space: every subset of the pool with every value vector.
    let patch_count = (1u128 + (1u128 << m)).pow(points);
    if patch_count > budget as u128 {
        return Err(Error::BudgetExceeded {
            needed: patch_count,
            budget,
        });
    }
    let base = canonical_output(alg, oracle)?;
    if base.probability < 1.0 - delta - DET_TOL {
        return Err(Error::DeterminismViolation(delta, base.probability));
    }
    let (_, ledger) = run_circuit(alg, oracle)?;
    let mut pool: Vec<u32> = (0..points).collect();
    let mut set = CriticalSet::default();
    while let Some(patch) = smallest_flipping_patch(alg, oracle, delta, base.value, &pool, n, m)? {
        let mut heaviest = None::<(u32, f64)>;
        for x in patch.domain() {
            let q = ledger.q(x);
            if heaviest.is_none_or(|(_, best)| q > best) {
                heaviest = Some((x, q));
            }
        }
        let (x, q) = heaviest.expect("flipping patch is nonempty");
        set.magnitudes.insert(x, q);
        pool.retain(|&p| p != x);
    }
    Ok(set)
}

fn smallest_flipping_patch(
    alg: &QueryCircuit,
    oracle: &Oracle,
    delta: f64,
    base_value: u32,
    pool: &[u32],
    n: u32,
    m: u32,
) -> Result<Option<PartialFunction>> {
    let mut masks: Vec<u32> = (1..1u32 << pool.len()).collect();
    masks.sort_by_key(|mask| (mask.count_ones(), *mask));
    for mask in masks {
        let domain: Vec<u32> = pool
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &x)| x)
            .collect();
        let width = m as u64 * domain.len() as u64;
        for assignment in 0..(1u64 << width) {
            let mut patch = PartialFunction::empty(n, m);
            for (j, &x) in domain.iter().enumerate() {
                let shift = m as u64 * (domain.len() - 1 - j) as u64;
                let y = ((assignment >> shift) as u32) & ((1 << m) - 1);
                patch.insert(x, y)?;
            }
            let patched = oracle.patch(&patch)?;
            let out = canonical_output(alg, &patched)?;
            if out.probability < 1.0 - delta - DET_TOL {
                return Err(Error::DeterminismViolation(delta, out.probability));
            }
            if out.value != base_value {
                return Ok(Some(patch));
            }
        }
    }
    Ok(None)
}

/// Checks of the three critical-set properties for one fixture.
#[derive(Debug, Clone, Serialize)]
pub struct CriticalSetCheck {
    pub size: usize,
    pub size_bound: f64,
    pub size_ok: bool,
    /// Canonical output unchanged for every oracle agreeing on the set,
    /// verified by enumeration.
    pub stability_ok: bool,
    pub min_magnitude: f64,
    pub magnitude_bound: f64,
    pub magnitude_ok: bool,
}

impl CriticalSetCheck {
    pub fn all_ok(&self) -> bool {
        self.size_ok && self.stability_ok && self.magnitude_ok
    }
}

/// Verify a critical set against its three contract properties, enumerating
/// every oracle that agrees with `oracle` on the set.
pub fn verify_critical_set(
    alg: &QueryCircuit,
    oracle: &Oracle,
    delta: f64,
    set: &CriticalSet,
    budget: u64,
) -> Result<CriticalSetCheck> {
    let q = f64::from(alg.query_count());
    let shrink = (1.0 - 2.0 * delta).powi(4);
    let size_bound = if q == 0.0 { 0.0 } else { q.powi(4) / shrink };
    let magnitude_bound = shrink / q.powi(3);

    let restriction = set.restriction_of(oracle);
    let family = crate::oracle::enumerate_consistent(&restriction, budget)?;
    let mut stability_ok = true;
    for candidate in &family {
        if !qeq(alg, oracle, candidate, delta)? {
            stability_ok = false;
            break;
        }
    }
    let min_magnitude = set
        .magnitudes
        .values()
        .copied()
        .fold(f64::INFINITY, f64::min);
    Ok(CriticalSetCheck {
        size: set.len(),
        size_bound,
        size_ok: set.len() as f64 <= size_bound + 1e-9,
        stability_ok,
        min_magnitude,
        magnitude_bound,
        magnitude_ok: set
            .magnitudes
            .values()
            .all(|&qz| qz >= magnitude_bound - 1e-9),
    })
}

/// One threshold pass: simulate the algorithm against the identity-extended
/// view and query the real oracle at every point whose magnitude reaches the
/// threshold.
pub fn update(
    alg: &QueryCircuit,
    view: &PartialFunction,
    oracle: &mut TrackedOracle<'_>,
    delta: f64,
) -> Result<PartialFunction> {
    let budget = SimBudget::for_algorithm(alg.query_count(), delta)?;
    let extended = identity_extend(view)?;
    let (_, ledger) = run_circuit(alg, &extended)?;
    let mut out = view.clone();
    for x in 0..1u32 << view.n() {
        if ledger.q(x) >= budget.magnitude_threshold && !out.contains(x) {
            let y = oracle.query(x);
            out.insert(x, y)?;
        }
    }
    Ok(out)
}

/// Repeated threshold passes until the canonical output on the
/// identity-extended view moves, or the iteration cap passes. Returns the
/// final view and the loop counter (which reaches `cap + 1` when the output
/// never moves).
pub fn get_point(
    alg: &QueryCircuit,
    start: &PartialFunction,
    oracle: &mut TrackedOracle<'_>,
    delta: f64,
) -> Result<(PartialFunction, u64)> {
    let budget = SimBudget::for_algorithm(alg.query_count(), delta)?;
    let cap = budget.iteration_cap;
    let reference = canonical_output(alg, &identity_extend(start)?)?.value;
    let mut view = start.clone();
    let mut counter = 0u64;
    while counter <= cap && canonical_output(alg, &identity_extend(&view)?)?.value == reference {
        counter += 1;
        view = update(alg, &view, oracle, delta)?;
    }
    Ok((view, counter))
}

/// One step of a simulation trace.
#[derive(Debug, Clone, Serialize)]
pub struct SimTraceStep {
    pub stage: u64,
    /// First or second probe within the stage.
    pub probe: u8,
    pub counter: u64,
    /// Domain of the view after the probe, as bit strings.
    pub view: Vec<String>,
}

/// Outcome of a full oracle simulation.
#[derive(Debug, Clone)]
pub struct SimOutcome {
    /// Identity-extension of the learned view; canonically equivalent to the
    /// real oracle for the simulated algorithm.
    pub oracle: Oracle,
    /// Classical queries spent.
    pub queries: u64,
    pub trace: Vec<SimTraceStep>,
}

/// Learn enough of `oracle` to reproduce the algorithm's canonical output,
/// using classical queries only.
///
/// Runs up to `cap` stages of two [`get_point`] probes each. A probe whose
/// counter reaches the cap means the canonical output survived a full round
/// of threshold passes, at which point the current view is good enough and
/// its identity extension is returned early.
pub fn sim_oracle(alg: &QueryCircuit, oracle: &Oracle, delta: f64) -> Result<SimOutcome> {
    let mut tracked = TrackedOracle::new(oracle);
    let (simulated, trace) = sim_oracle_tracked(alg, &mut tracked, delta)?;
    Ok(SimOutcome {
        oracle: simulated,
        queries: tracked.calls(),
        trace,
    })
}

/// As [`sim_oracle`], querying through an existing tracker.
pub fn sim_oracle_tracked(
    alg: &QueryCircuit,
    oracle: &mut TrackedOracle<'_>,
    delta: f64,
) -> Result<(Oracle, Vec<SimTraceStep>)> {
    let budget = SimBudget::for_algorithm(alg.query_count(), delta)?;
    let cap = budget.iteration_cap;
    let mut view = PartialFunction::empty(oracle.n(), oracle.m());
    let mut trace = Vec::new();
    let describe = |f: &PartialFunction| {
        f.domain()
            .map(|x| crate::bits::format_bits(x, f.n()))
            .collect::<Vec<_>>()
    };
    for stage in 1..=cap {
        let (first, c1) = get_point(alg, &view, oracle, delta)?;
        trace.push(SimTraceStep {
            stage,
            probe: 1,
            counter: c1,
            view: describe(&first),
        });
        if c1 >= cap {
            if c1 > cap {
                log::debug!("probe counter {c1} exceeded cap {cap}; treating as converged");
            }
            return Ok((identity_extend(&first)?, trace));
        }
        let (second, c2) = get_point(alg, &first, oracle, delta)?;
        trace.push(SimTraceStep {
            stage,
            probe: 2,
            counter: c2,
            view: describe(&second),
        });
        if c2 >= cap {
            if c2 > cap {
                log::debug!("probe counter {c2} exceeded cap {cap}; treating as converged");
            }
            return Ok((identity_extend(&second)?, trace));
        }
        view = second;
    }
    Ok((identity_extend(&view)?, trace))
}

/// A quantum PRG: a query circuit family indexed by the seed, which enters
/// through bit-flip preamble layers on designated wires.
#[derive(Debug, Clone)]
pub struct QuantumPrg {
    name: String,
    seed_bits: u32,
    seed_wires: Vec<usize>,
    base: QueryCircuit,
}

impl QuantumPrg {
    pub fn new(
        name: impl Into<String>,
        base: QueryCircuit,
        seed_wires: Vec<usize>,
    ) -> Result<Self> {
        let seed_bits = seed_wires.len() as u32;
        if base.output_bits() <= seed_bits {
            return Err(Error::DimensionMismatch(
                base.output_bits() as usize,
                seed_bits as usize + 1,
            ));
        }
        // Validate the wires by building the all-ones seed circuit once.
        base.with_input(&seed_wires, (1 << seed_bits) - 1, seed_bits)?;
        Ok(QuantumPrg {
            name: name.into(),
            seed_bits,
            seed_wires,
            base,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn seed_bits(&self) -> u32 {
        self.seed_bits
    }

    pub fn output_bits(&self) -> u32 {
        self.base.output_bits()
    }

    pub fn oracle_n(&self) -> u32 {
        self.base.n()
    }

    pub fn oracle_m(&self) -> u32 {
        self.base.m()
    }

    pub fn query_count(&self) -> u32 {
        self.base.query_count()
    }

    pub fn circuit_for_seed(&self, seed: u32) -> QueryCircuit {
        self.base
            .with_input(&self.seed_wires, seed, self.seed_bits)
            .expect("wires validated at construction")
    }
}

/// Check `delta`-determinism of every seeded circuit over every oracle.
pub fn quantum_prg_deterministic(
    prg: &QuantumPrg,
    delta: f64,
    budget: u64,
) -> Result<DeterminismCheck> {
    let family = crate::experiment::all_oracles(prg.oracle_n(), prg.oracle_m(), budget)?;
    for seed in 0..1u32 << prg.seed_bits() {
        let check = is_delta_deterministic(&prg.circuit_for_seed(seed), delta, &family)?;
        if !check.passed() {
            return Ok(check);
        }
    }
    Ok(DeterminismCheck::Pass)
}

/// Distinguishing advantage of a quantum distinguisher against a quantum
/// PRG: the challenge is drawn from the generator's measured output
/// distribution.
pub fn quantum_prg_advantage(dist: &Distinguisher, prg: &QuantumPrg, mode: Mode) -> Result<f64> {
    let budget = mode.budget();
    let oracles = crate::experiment::all_oracles(prg.oracle_n(), prg.oracle_m(), budget)?;
    let seeds = 1u32 << prg.seed_bits();
    let mut pr_prg = 0.0;
    for oracle in &oracles {
        for seed in 0..seeds {
            let outputs = output_distribution(&prg.circuit_for_seed(seed), oracle)?;
            for (g, p) in outputs.support() {
                pr_prg += p * dist.accept_probability(oracle, *g)?;
            }
        }
    }
    pr_prg /= (oracles.len() * seeds as usize) as f64;
    let pr_rand = rand_accept_probability(
        dist,
        prg.oracle_n(),
        prg.oracle_m(),
        prg.output_bits(),
        mode,
    )?;
    Ok((pr_prg - pr_rand).abs())
}

/// The classical PRG obtained by simulating a quantum PRG's oracle access
/// and emitting its canonical output.
#[derive(Debug, Clone)]
pub struct DerandomizedPrg {
    name: String,
    inner: QuantumPrg,
    delta: f64,
    query_count: u64,
}

/// Wrap a quantum PRG into a classical one: each evaluation learns the
/// oracle through [`sim_oracle_tracked`] and outputs the canonical output of
/// the seeded circuit on the learned oracle. Evaluations are padded to a
/// fixed query count (the simulation query cap) by querying fresh points in
/// ascending order, falling back to re-queries once the domain is
/// exhausted.
pub fn derandomize_prg(prg: &QuantumPrg, delta: f64) -> Result<DerandomizedPrg> {
    if prg.oracle_n() != prg.oracle_m() {
        return Err(Error::WidthMismatch {
            n: prg.oracle_n(),
            m: prg.oracle_m(),
        });
    }
    let budget = SimBudget::for_algorithm(prg.query_count(), delta)?;
    Ok(DerandomizedPrg {
        name: format!("derand({})", prg.name()),
        inner: prg.clone(),
        delta,
        query_count: budget.query_cap.ceil() as u64,
    })
}

impl ClassicalPrg for DerandomizedPrg {
    fn name(&self) -> &str {
        &self.name
    }
    fn seed_bits(&self) -> u32 {
        self.inner.seed_bits()
    }
    fn output_bits(&self) -> u32 {
        self.inner.output_bits()
    }
    fn oracle_n(&self) -> u32 {
        self.inner.oracle_n()
    }
    fn oracle_m(&self) -> u32 {
        self.inner.oracle_m()
    }
    fn query_count(&self) -> u64 {
        self.query_count
    }
    fn eval(&self, seed: u32, oracle: &mut TrackedOracle<'_>) -> u32 {
        let circuit = self.inner.circuit_for_seed(seed);
        let (simulated, _) = sim_oracle_tracked(&circuit, oracle, self.delta)
            .expect("simulation of a validated circuit cannot fail");
        let g = canonical_output(&circuit, &simulated)
            .expect("canonical output of a validated circuit cannot fail")
            .value;
        // Pad to the declared query count with fresh points, then repeats.
        let points = 1u32 << self.inner.oracle_n();
        while oracle.calls() < self.query_count {
            let fresh = (0..points).find(|&x| !oracle.queried(x));
            oracle.query(fresh.unwrap_or(0));
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Layer;
    use crate::fixtures;
    use crate::gates;
    use crate::prg::run_prg;
    use approx::assert_abs_diff_eq;

    fn read0() -> QueryCircuit {
        fixtures::algorithm_by_name("alg_read0").unwrap()
    }

    fn ignore() -> QueryCircuit {
        fixtures::algorithm_by_name("alg_ignore").unwrap()
    }

    #[test]
    fn canonical_output_basics() {
        let zero = Oracle::constant(1, 1, 0);
        let c = canonical_output(&ignore(), &zero).unwrap();
        assert_eq!(c.value, 0);
        assert_abs_diff_eq!(c.probability, 1.0, epsilon = 1e-12);

        let one = Oracle::constant(1, 1, 1);
        let c = canonical_output(&read0(), &one).unwrap();
        assert_eq!(c.value, 1);
        assert_abs_diff_eq!(c.probability, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn canonical_tie_breaks_low() {
        // Hadamard on the answer wire: uniform over {0,1}; canonical is 0.
        let circ = QueryCircuit::new(1, 1, 0, vec![gates::hadamard_layer(1)], vec![1]).unwrap();
        let c = canonical_output(&circ, &Oracle::constant(1, 1, 0)).unwrap();
        assert_eq!(c.value, 0);
        assert_abs_diff_eq!(c.probability, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn determinism_check_finds_counterexamples() {
        let family = crate::experiment::all_oracles(1, 1, 1 << 20).unwrap();
        assert!(is_delta_deterministic(&ignore(), 0.0, &family)
            .unwrap()
            .passed());
        assert!(is_delta_deterministic(&read0(), 0.0, &family)
            .unwrap()
            .passed());
        let coin = QueryCircuit::new(1, 1, 0, vec![gates::hadamard_layer(1)], vec![1]).unwrap();
        match is_delta_deterministic(&coin, 0.4, &family).unwrap() {
            DeterminismCheck::Counterexample { distribution, .. } => {
                assert_abs_diff_eq!(distribution.prob_of(&0), 0.5, epsilon = 1e-12);
            }
            DeterminismCheck::Pass => panic!("coin flip is not 0.4-deterministic"),
        }
    }

    #[test]
    fn qeq_compares_canonical_outputs() {
        let f = Oracle::constant(1, 1, 0);
        let h = Oracle::from_table(1, 1, vec![1, 0]);
        assert!(qeq(&read0(), &f, &f, 0.0).unwrap());
        assert!(!qeq(&read0(), &f, &h, 0.0).unwrap());
        assert!(qeq(&ignore(), &f, &h, 0.0).unwrap());
        let coin = QueryCircuit::new(1, 1, 0, vec![gates::hadamard_layer(1)], vec![1]).unwrap();
        assert!(matches!(
            qeq(&coin, &f, &h, 0.0),
            Err(Error::DeterminismViolation(_, _))
        ));
    }

    #[test]
    fn sim_budget_arithmetic() {
        let b = SimBudget::for_algorithm(2, 0.25).unwrap();
        assert_abs_diff_eq!(b.magnitude_threshold, 0.0078125, epsilon = 1e-15);
        assert_eq!(b.iteration_cap, 256);
        let b = SimBudget::for_algorithm(1, 0.0).unwrap();
        assert_abs_diff_eq!(b.query_cap, 2.0, epsilon = 1e-15);
        assert!(SimBudget::for_algorithm(1, 0.5).is_err());
    }

    #[test]
    fn critical_set_of_oracle_reader() {
        let f = Oracle::from_table(1, 1, vec![1, 0]);
        let set = critical_set_bruteforce(&read0(), &f, 0.0, 1 << 20).unwrap();
        assert_eq!(set.points().collect::<Vec<_>>(), vec![0]);
        assert_abs_diff_eq!(set.magnitudes[&0], 1.0, epsilon = 1e-12);
        let check = verify_critical_set(&read0(), &f, 0.0, &set, 1 << 20).unwrap();
        assert!(check.all_ok());
    }

    #[test]
    fn critical_set_of_ignoring_algorithm_is_empty() {
        let f = Oracle::from_table(1, 1, vec![1, 0]);
        let set = critical_set_bruteforce(&ignore(), &f, 0.0, 1 << 20).unwrap();
        assert!(set.is_empty());
        let check = verify_critical_set(&ignore(), &f, 0.0, &set, 1 << 20).unwrap();
        assert!(check.all_ok());
    }

    #[test]
    fn update_threshold_behaviour() {
        // The reader forces exactly its queried point into the view.
        let f = Oracle::from_table(1, 1, vec![1, 0]);
        let mut tracked = TrackedOracle::new(&f);
        let view = PartialFunction::empty(1, 1);
        let updated = update(&read0(), &view, &mut tracked, 0.0).unwrap();
        assert_eq!(updated.get(0), Some(1));
        assert_eq!(updated.len(), 1);
        assert_eq!(tracked.calls(), 1);

        // The ignoring algorithm adds nothing.
        let mut tracked = TrackedOracle::new(&f);
        let same = update(&ignore(), &view, &mut tracked, 0.0).unwrap();
        assert!(same.is_empty());
        assert_eq!(tracked.calls(), 0);
    }

    #[test]
    fn get_point_detects_the_flip() {
        // Identity-extended empty view guesses H(0) = 0; the real oracle has
        // H(0) = 1, so one update flips the canonical output.
        let f = Oracle::from_table(1, 1, vec![1, 0]);
        let mut tracked = TrackedOracle::new(&f);
        let (view, counter) =
            get_point(&read0(), &PartialFunction::empty(1, 1), &mut tracked, 0.0).unwrap();
        assert_eq!(counter, 1);
        assert_eq!(view.get(0), Some(1));
    }

    #[test]
    fn get_point_counter_overshoots_for_ignoring_algorithm() {
        // Cap is 0 when the algorithm makes no queries; the loop runs once
        // and exits with counter = cap + 1, leaving the view untouched.
        let f = Oracle::constant(1, 1, 0);
        let mut tracked = TrackedOracle::new(&f);
        let (view, counter) =
            get_point(&ignore(), &PartialFunction::empty(1, 1), &mut tracked, 0.0).unwrap();
        assert_eq!(counter, 1);
        assert!(view.is_empty());
        assert_eq!(tracked.calls(), 0);
    }

    #[test]
    fn sim_oracle_reproduces_canonical_outputs() {
        let f = Oracle::from_table(1, 1, vec![1, 0]);
        let outcome = sim_oracle(&read0(), &f, 0.0).unwrap();
        assert_eq!(outcome.oracle.get(0), 1);
        assert!(qeq(&read0(), &f, &outcome.oracle, 0.0).unwrap());
        let cap = SimBudget::for_algorithm(1, 0.0).unwrap().query_cap;
        assert!((outcome.queries as f64) <= cap);
    }

    #[test]
    fn sim_oracle_on_ignoring_algorithm_is_free() {
        let f = Oracle::from_table(1, 1, vec![1, 0]);
        let outcome = sim_oracle(&ignore(), &f, 0.0).unwrap();
        assert_eq!(outcome.oracle, Oracle::identity(1));
        assert_eq!(outcome.queries, 0);
        assert!(outcome.trace.is_empty());
    }

    #[test]
    fn derandomized_prg_matches_canonical_outputs() {
        let gq = fixtures::quantum_prg_by_name("gq_eval").unwrap();
        let classical = derandomize_prg(&gq, 0.0).unwrap();
        assert_eq!(classical.query_count(), 2);
        for table in [[0u32, 0], [0, 1], [1, 0], [1, 1]] {
            let oracle = Oracle::from_table(1, 1, table.to_vec());
            for seed in 0..2 {
                let (g, tau) = run_prg(&classical, &oracle, seed).unwrap();
                let expected = canonical_output(&gq.circuit_for_seed(seed), &oracle)
                    .unwrap()
                    .value;
                assert_eq!(g, expected);
                assert_eq!(tau.len(), 2);
                // Transcript answers are genuine.
                for (x, y) in tau.pairs() {
                    assert_eq!(*y, oracle.get(*x));
                }
            }
        }
    }

    #[test]
    fn quantum_prg_is_zero_deterministic() {
        let gq = fixtures::quantum_prg_by_name("gq_eval").unwrap();
        assert!(quantum_prg_deterministic(&gq, 0.0, 1 << 20)
            .unwrap()
            .passed());
    }

    #[test]
    fn delta_range_is_enforced() {
        let f = Oracle::constant(1, 1, 0);
        assert!(matches!(
            critical_set_bruteforce(&read0(), &f, 0.5, 1 << 20),
            Err(Error::DeltaOutOfRange(_))
        ));
        let mut tracked = TrackedOracle::new(&f);
        assert!(update(&read0(), &PartialFunction::empty(1, 1), &mut tracked, 0.7).is_err());
    }

    #[test]
    fn identity_extension_width_mismatch_propagates() {
        let circ = QueryCircuit::new(2, 1, 0, vec![Layer::OracleCall], vec![2]).unwrap();
        let f = Oracle::constant(2, 1, 0);
        let mut tracked = TrackedOracle::new(&f);
        assert!(matches!(
            update(&circ, &PartialFunction::empty(2, 1), &mut tracked, 0.0),
            Err(Error::WidthMismatch { n: 2, m: 1 })
        ));
    }
}
