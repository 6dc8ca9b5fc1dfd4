//! Exact statevector simulation of quantum oracle algorithms.
//!
//! A [`QueryCircuit`] is a finite list of layers over three registers: an
//! `n`-wire query register, an `m`-wire answer register, and a `w`-wire
//! workspace. A layer is either a dense unitary on an explicit wire list or
//! an oracle call, which applies `|x>|y>|z> -> |x>|y ^ H(x)>|z>` for the
//! oracle `H` supplied at run time. Running a circuit from `|0...0>` yields
//! the final state together with a [`QueryMagnitudeLedger`] recording, for
//! every oracle input `x`, how much squared amplitude the circuit placed on
//! `x` across its oracle calls.
//!
//! Wire order convention: wire 0 is the most significant bit of a basis
//! index, wires `0..n` form the query register, wires `n..n+m` the answer
//! register, and the rest the workspace. A unitary's matrix acts on the
//! subspace spanned by its wire list, with the first listed wire most
//! significant. States are never renormalized; a norm drift beyond
//! [`NORM_TOL`] is an error, because silently repairing it would mask a
//! broken circuit definition.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dist::{Distribution, Provenance};
use crate::oracle::Oracle;
use crate::{Error, Result};

/// Tolerance for `max |U^dag U - I|` on every unitary layer.
pub const UNITARY_TOL: f64 = 1e-9;
/// Tolerance for the state norm after every layer.
pub const NORM_TOL: f64 = 1e-9;

/// A normalized complex amplitude vector over query, answer and workspace
/// registers.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_query: u32,
    m_answer: u32,
    w_work: u32,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// The all-zeros basis state `|0...0>`.
    pub fn zero(n_query: u32, m_answer: u32, w_work: u32) -> Self {
        let total = n_query + m_answer + w_work;
        assert!(total <= 24, "register sizes beyond desk scale");
        let mut amplitudes = vec![Complex64::ZERO; 1usize << total];
        amplitudes[0] = Complex64::ONE;
        StateVector {
            n_query,
            m_answer,
            w_work,
            amplitudes,
        }
    }

    /// Wrap an amplitude vector, requiring unit norm.
    pub fn from_amplitudes(
        n_query: u32,
        m_answer: u32,
        w_work: u32,
        amplitudes: Vec<Complex64>,
    ) -> Result<Self> {
        let expected = 1usize << (n_query + m_answer + w_work);
        if amplitudes.len() != expected {
            return Err(Error::DimensionMismatch(amplitudes.len(), expected));
        }
        let state = StateVector {
            n_query,
            m_answer,
            w_work,
            amplitudes,
        };
        let norm = state.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NormViolation { layer: 0, norm });
        }
        Ok(state)
    }

    pub fn registers(&self) -> (u32, u32, u32) {
        (self.n_query, self.m_answer, self.w_work)
    }

    pub fn total_wires(&self) -> u32 {
        self.n_query + self.m_answer + self.w_work
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        self.check_same_shape(other)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    fn check_same_shape(&self, other: &StateVector) -> Result<()> {
        if self.registers() != other.registers() {
            return Err(Error::DimensionMismatch(
                self.amplitudes.len(),
                other.amplitudes.len(),
            ));
        }
        Ok(())
    }

    /// Squared amplitude mass on query value `x`, summed over answer and
    /// workspace assignments.
    pub fn query_magnitude(&self, x: u32) -> f64 {
        let low = self.m_answer + self.w_work;
        let lo = (x as usize) << low;
        let hi = ((x as usize) + 1) << low;
        self.amplitudes[lo..hi].iter().map(|a| a.norm_sqr()).sum()
    }
}

/// Raw Euclidean (l2) distance between two states. Phase-sensitive: a state
/// and its negation are at distance 2.
pub fn euclidean_distance(a: &StateVector, b: &StateVector) -> Result<f64> {
    a.check_same_shape(b)?;
    Ok(a.amplitudes
        .iter()
        .zip(&b.amplitudes)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt())
}

/// Trace distance of the pure-state density matrices,
/// `sqrt(1 - |<a|b>|^2)`. Phase-invariant, in `[0, 1]`.
pub fn trace_distance_pure(a: &StateVector, b: &StateVector) -> Result<f64> {
    let overlap = a.inner(b)?;
    Ok((1.0 - overlap.norm_sqr()).max(0.0).sqrt())
}

/// One layer of a query circuit.
#[derive(Debug, Clone, PartialEq)]
pub enum Layer {
    /// Dense unitary over the listed wires; `matrix` is row-major of
    /// dimension `2^wires.len()`, with `wires[0]` the most significant bit
    /// of the local basis index.
    Unitary {
        wires: Vec<usize>,
        matrix: Vec<Complex64>,
    },
    /// One oracle call `|x>|y> -> |x>|y ^ H(x)>`.
    OracleCall,
}

impl Layer {
    pub fn unitary(wires: Vec<usize>, matrix: Vec<Complex64>) -> Self {
        Layer::Unitary { wires, matrix }
    }
}

/// A quantum oracle algorithm: unitaries interleaved with oracle calls, plus
/// the wires whose measurement defines the output string.
#[derive(Debug, Clone, PartialEq)]
pub struct QueryCircuit {
    n: u32,
    m: u32,
    w: u32,
    layers: Vec<Layer>,
    output_wires: Vec<usize>,
}

impl QueryCircuit {
    /// Validate and build a circuit. Checks register sizes, wire ranges and
    /// distinctness, matrix shapes, and unitarity of every layer.
    pub fn new(
        n: u32,
        m: u32,
        w: u32,
        layers: Vec<Layer>,
        output_wires: Vec<usize>,
    ) -> Result<Self> {
        assert!(n >= 1 && m >= 1, "query and answer registers are required");
        let total = (n + m + w) as usize;
        if total > 24 {
            return Err(Error::DimensionMismatch(total, 24));
        }
        for (idx, layer) in layers.iter().enumerate() {
            if let Layer::Unitary { wires, matrix } = layer {
                check_wires(wires, total)?;
                let dim = 1usize << wires.len();
                if matrix.len() != dim * dim {
                    return Err(Error::BadMatrixShape {
                        rows: matrix.len() / dim.max(1),
                        cols: dim,
                        expected: dim,
                    });
                }
                let deviation = unitarity_deviation(matrix, dim);
                if deviation > UNITARY_TOL {
                    return Err(Error::NotUnitary {
                        layer: idx,
                        deviation,
                    });
                }
            }
        }
        check_wires(&output_wires, total)?;
        Ok(QueryCircuit {
            n,
            m,
            w,
            layers,
            output_wires,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn w(&self) -> u32 {
        self.w
    }

    pub fn total_wires(&self) -> u32 {
        self.n + self.m + self.w
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn output_wires(&self) -> &[usize] {
        &self.output_wires
    }

    pub fn output_bits(&self) -> u32 {
        self.output_wires.len() as u32
    }

    /// Number of oracle-call layers.
    pub fn query_count(&self) -> u32 {
        self.layers
            .iter()
            .filter(|l| matches!(l, Layer::OracleCall))
            .count() as u32
    }

    /// The same circuit with bit-flip layers prepended so that the listed
    /// wires start in the basis state spelled by `value` (`width` bits, most
    /// significant first). This is how the harness feeds classical inputs to
    /// an algorithm.
    pub fn with_input(&self, wires: &[usize], value: u32, width: u32) -> Result<QueryCircuit> {
        assert_eq!(wires.len() as u32, width, "one wire per input bit");
        let mut layers = Vec::new();
        for (k, &wire) in wires.iter().enumerate() {
            if (value >> (width - 1 - k as u32)) & 1 == 1 {
                layers.push(crate::gates::x_layer(wire));
            }
        }
        layers.extend(self.layers.iter().cloned());
        QueryCircuit::new(self.n, self.m, self.w, layers, self.output_wires.clone())
    }

    /// Parse the JSON circuit format.
    pub fn from_json_str(text: &str) -> Result<QueryCircuit> {
        let spec: CircuitJson = serde_json::from_str(text)?;
        spec.try_into()
    }

    /// Render the JSON circuit format.
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&CircuitJson::from(self)).expect("serializable")
    }
}

fn check_wires(wires: &[usize], total: usize) -> Result<()> {
    for &wire in wires {
        if wire >= total {
            return Err(Error::WireOutOfRange { wire, total });
        }
    }
    let mut seen = wires.to_vec();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != wires.len() {
        return Err(Error::DuplicateWires(wires.to_vec()));
    }
    Ok(())
}

fn unitarity_deviation(matrix: &[Complex64], dim: usize) -> f64 {
    // max |U^dag U - I|
    let mut worst = 0.0f64;
    for i in 0..dim {
        for j in 0..dim {
            let mut entry = Complex64::ZERO;
            for k in 0..dim {
                entry += matrix[k * dim + i].conj() * matrix[k * dim + j];
            }
            if i == j {
                entry -= Complex64::ONE;
            }
            worst = worst.max(entry.norm());
        }
    }
    worst
}

/// Per-point query magnitudes accumulated over a circuit run.
#[derive(Debug, Clone, PartialEq)]
pub struct QueryMagnitudeLedger {
    per_point: Vec<f64>,
    total: f64,
}

impl QueryMagnitudeLedger {
    fn new(n: u32) -> Self {
        QueryMagnitudeLedger {
            per_point: vec![0.0; 1 << n],
            total: 0.0,
        }
    }

    /// Total query magnitude at `x`, summed over all oracle calls.
    pub fn q(&self, x: u32) -> f64 {
        self.per_point[x as usize]
    }

    pub fn per_point(&self) -> &[f64] {
        &self.per_point
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    /// Sum of magnitudes over a set of points.
    pub fn mass_on(&self, points: impl IntoIterator<Item = u32>) -> f64 {
        points.into_iter().map(|x| self.q(x)).sum()
    }
}

/// Apply one oracle call to a state.
pub fn apply_oracle(state: &StateVector, oracle: &Oracle) -> Result<StateVector> {
    if oracle.n() != state.n_query || oracle.m() != state.m_answer {
        return Err(Error::SignatureMismatch {
            expected_n: state.n_query,
            expected_m: state.m_answer,
            got_n: oracle.n(),
            got_m: oracle.m(),
        });
    }
    let w = state.w_work;
    let mw = state.m_answer + w;
    let mut out = vec![Complex64::ZERO; state.amplitudes.len()];
    for (i, amp) in state.amplitudes.iter().enumerate() {
        if amp.norm_sqr() == 0.0 && *amp == Complex64::ZERO {
            continue;
        }
        let x = (i >> mw) as u32;
        // |x>|y>|z> -> |x>|y ^ H(x)>|z>: XOR the answer bits in place.
        let j = i ^ ((oracle.get(x) as usize) << w);
        out[j] = *amp;
    }
    Ok(StateVector {
        n_query: state.n_query,
        m_answer: state.m_answer,
        w_work: state.w_work,
        amplitudes: out,
    })
}

fn apply_unitary(state: &mut StateVector, wires: &[usize], matrix: &[Complex64]) {
    let total = state.total_wires() as usize;
    let t = wires.len();
    let dim = 1usize << t;
    // Global bit position of each wire; wires[0] is the local MSB.
    let positions: Vec<usize> = wires.iter().map(|&wr| total - 1 - wr).collect();
    let wire_mask: usize = positions.iter().map(|&p| 1usize << p).sum();
    // scatter[p] = global index bits for local basis index p.
    let mut scatter = vec![0usize; dim];
    for (p, s) in scatter.iter_mut().enumerate() {
        for (j, &pos) in positions.iter().enumerate() {
            if (p >> (t - 1 - j)) & 1 == 1 {
                *s |= 1 << pos;
            }
        }
    }
    let len = state.amplitudes.len();
    let mut gathered = vec![Complex64::ZERO; dim];
    for base in 0..len {
        if base & wire_mask != 0 {
            continue;
        }
        for (p, g) in gathered.iter_mut().enumerate() {
            *g = state.amplitudes[base | scatter[p]];
        }
        for (r, &s) in scatter.iter().enumerate() {
            let mut acc = Complex64::ZERO;
            for (c, g) in gathered.iter().enumerate() {
                acc += matrix[r * dim + c] * g;
            }
            state.amplitudes[base | s] = acc;
        }
    }
}

/// Run a circuit on oracle `H` from `|0...0>`, returning the final state and
/// the query-magnitude ledger. The ledger records, immediately before each
/// oracle call, the squared amplitude the state places on every query value.
pub fn run_circuit(
    circ: &QueryCircuit,
    oracle: &Oracle,
) -> Result<(StateVector, QueryMagnitudeLedger)> {
    if oracle.n() != circ.n || oracle.m() != circ.m {
        return Err(Error::SignatureMismatch {
            expected_n: circ.n,
            expected_m: circ.m,
            got_n: oracle.n(),
            got_m: oracle.m(),
        });
    }
    let mut state = StateVector::zero(circ.n, circ.m, circ.w);
    let mut ledger = QueryMagnitudeLedger::new(circ.n);
    for (idx, layer) in circ.layers.iter().enumerate() {
        match layer {
            Layer::Unitary { wires, matrix } => apply_unitary(&mut state, wires, matrix),
            Layer::OracleCall => {
                for x in 0..1u32 << circ.n {
                    let q = state.query_magnitude(x);
                    ledger.per_point[x as usize] += q;
                    ledger.total += q;
                }
                state = apply_oracle(&state, oracle)?;
            }
        }
        let norm = state.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NormViolation { layer: idx, norm });
        }
    }
    Ok((state, ledger))
}

/// Exact measurement distribution of the output wires after running the
/// circuit on `H`. Output bit `k` (most significant first) reads
/// `output_wires[k]`.
pub fn output_distribution(circ: &QueryCircuit, oracle: &Oracle) -> Result<Distribution<u32>> {
    let (state, _) = run_circuit(circ, oracle)?;
    Ok(measure_output(circ, &state))
}

/// Measurement distribution of an already-computed final state.
pub fn measure_output(circ: &QueryCircuit, state: &StateVector) -> Distribution<u32> {
    let total = circ.total_wires() as usize;
    let positions: Vec<usize> = circ.output_wires.iter().map(|&wr| total - 1 - wr).collect();
    let out_bits = positions.len();
    let mut weights = vec![0.0f64; 1 << out_bits];
    for (i, amp) in state.amplitudes().iter().enumerate() {
        let p = amp.norm_sqr();
        if p == 0.0 {
            continue;
        }
        let mut y = 0u32;
        for (k, &pos) in positions.iter().enumerate() {
            y |= (((i >> pos) & 1) as u32) << (out_bits - 1 - k);
        }
        weights[y as usize] += p;
    }
    Distribution::from_weights(
        weights.into_iter().enumerate().map(|(y, p)| (y as u32, p)),
        Provenance::ExactEnumeration,
    )
}

/// Both sides of the swapping bound for a circuit and an oracle pair.
#[derive(Debug, Clone, Copy)]
pub struct SwappingCheck {
    /// Euclidean distance between the two final states.
    pub lhs: f64,
    /// `2 * sqrt(Q * disagreement_magnitude)`.
    pub rhs: f64,
    /// Query magnitude the `f`-run places on the disagreement set.
    pub disagreement_magnitude: f64,
}

/// Run `circ` against both oracles and evaluate the swapping bound: the
/// final states' Euclidean distance is at most `2 sqrt(Q * sum of the
/// f-run's query magnitude over points where f and g disagree)`.
///
/// The factor 2 is necessary: one oracle call can move `|y>` to an
/// orthogonal `|y ^ 1>`, displacing amplitude by twice its magnitude. A
/// single-query circuit with the answer wire in `|->` attains the bound with
/// equality (see the tests).
pub fn swapping_check(circ: &QueryCircuit, f: &Oracle, g: &Oracle) -> Result<SwappingCheck> {
    if f.n() != g.n() || f.m() != g.m() {
        return Err(Error::SignatureMismatch {
            expected_n: f.n(),
            expected_m: f.m(),
            got_n: g.n(),
            got_m: g.m(),
        });
    }
    let (final_f, ledger_f) = run_circuit(circ, f)?;
    let (final_g, _) = run_circuit(circ, g)?;
    let lhs = euclidean_distance(&final_f, &final_g)?;
    let disagreement = (0..1u32 << f.n()).filter(|&x| f.get(x) != g.get(x));
    let mass = ledger_f.mass_on(disagreement);
    let rhs = 2.0 * (f64::from(circ.query_count()) * mass).sqrt();
    Ok(SwappingCheck {
        lhs,
        rhs,
        disagreement_magnitude: mass,
    })
}

// --- JSON circuit format ------------------------------------------------
//
// {"n":1,"m":1,"w":0,
//  "layers":[{"unitary":{"wires":[0],"matrix":[[[0.0,0.0],[1.0,0.0]],
//                                              [[1.0,0.0],[0.0,0.0]]]}},
//            {"oracle":true}],
//  "output_wires":[0]}
//
// Matrices are row-major; each entry is an [re, im] pair.

#[derive(Serialize, Deserialize)]
struct CircuitJson {
    n: u32,
    m: u32,
    w: u32,
    layers: Vec<LayerJson>,
    output_wires: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
enum LayerJson {
    #[serde(rename = "unitary")]
    Unitary(UnitaryJson),
    #[serde(rename = "oracle")]
    Oracle(bool),
}

#[derive(Serialize, Deserialize)]
struct UnitaryJson {
    wires: Vec<usize>,
    matrix: Vec<Vec<(f64, f64)>>,
}

impl From<&QueryCircuit> for CircuitJson {
    fn from(circ: &QueryCircuit) -> Self {
        let layers = circ
            .layers
            .iter()
            .map(|layer| match layer {
                Layer::OracleCall => LayerJson::Oracle(true),
                Layer::Unitary { wires, matrix } => {
                    let dim = 1usize << wires.len();
                    let rows = (0..dim)
                        .map(|r| {
                            (0..dim)
                                .map(|c| {
                                    let z = matrix[r * dim + c];
                                    (z.re, z.im)
                                })
                                .collect()
                        })
                        .collect();
                    LayerJson::Unitary(UnitaryJson {
                        wires: wires.clone(),
                        matrix: rows,
                    })
                }
            })
            .collect();
        CircuitJson {
            n: circ.n,
            m: circ.m,
            w: circ.w,
            layers,
            output_wires: circ.output_wires.clone(),
        }
    }
}

impl TryFrom<CircuitJson> for QueryCircuit {
    type Error = Error;

    fn try_from(spec: CircuitJson) -> Result<QueryCircuit> {
        let mut layers = Vec::with_capacity(spec.layers.len());
        for layer in spec.layers {
            match layer {
                LayerJson::Oracle(true) => layers.push(Layer::OracleCall),
                LayerJson::Oracle(false) => {
                    return Err(Error::Parse {
                        line: 0,
                        msg: "layer {\"oracle\": false} is not meaningful".into(),
                    })
                }
                LayerJson::Unitary(u) => {
                    let dim = 1usize << u.wires.len();
                    if u.matrix.len() != dim || u.matrix.iter().any(|row| row.len() != dim) {
                        return Err(Error::BadMatrixShape {
                            rows: u.matrix.len(),
                            cols: u.matrix.first().map_or(0, Vec::len),
                            expected: dim,
                        });
                    }
                    let flat = u
                        .matrix
                        .iter()
                        .flatten()
                        .map(|&(re, im)| Complex64::new(re, im))
                        .collect();
                    layers.push(Layer::Unitary {
                        wires: u.wires,
                        matrix: flat,
                    });
                }
            }
        }
        QueryCircuit::new(spec.n, spec.m, spec.w, layers, spec.output_wires)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates;
    use approx::assert_abs_diff_eq;

    fn plus_state_oracle_input() -> StateVector {
        // (|0> + |1>)/sqrt(2) on the query wire, |0> on the answer wire.
        let h = std::f64::consts::FRAC_1_SQRT_2;
        StateVector::from_amplitudes(
            1,
            1,
            0,
            vec![
                Complex64::new(h, 0.0),
                Complex64::ZERO,
                Complex64::new(h, 0.0),
                Complex64::ZERO,
            ],
        )
        .unwrap()
    }

    #[test]
    fn oracle_moves_answer_bits() {
        // H(0)=1, H(1)=0 on (|0>+|1>)|0> gives (|0>|1> + |1>|0>)/sqrt(2).
        let h = Oracle::from_table(1, 1, vec![1, 0]);
        let state = plus_state_oracle_input();
        let out = apply_oracle(&state, &h).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(out.amplitudes()[0b01].re, r, epsilon = 1e-12);
        assert_abs_diff_eq!(out.amplitudes()[0b10].re, r, epsilon = 1e-12);
        assert_abs_diff_eq!(out.norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn zero_oracle_is_identity() {
        let zero = Oracle::constant(1, 1, 0);
        let state = plus_state_oracle_input();
        assert_eq!(apply_oracle(&state, &zero).unwrap(), state);
    }

    #[test]
    fn oracle_application_is_an_involution() {
        let h = Oracle::from_table(1, 1, vec![1, 0]);
        let state = plus_state_oracle_input();
        let twice = apply_oracle(&apply_oracle(&state, &h).unwrap(), &h).unwrap();
        assert_eq!(twice, state);
    }

    #[test]
    fn oracle_signature_checked() {
        let h = Oracle::constant(2, 1, 0);
        let state = plus_state_oracle_input();
        assert!(matches!(
            apply_oracle(&state, &h),
            Err(Error::SignatureMismatch { .. })
        ));
    }

    #[test]
    fn identity_circuit_runs_to_zero_state() {
        let circ = QueryCircuit::new(1, 1, 0, vec![gates::identity_layer(0)], vec![0]).unwrap();
        let (state, ledger) = run_circuit(&circ, &Oracle::constant(1, 1, 0)).unwrap();
        assert_abs_diff_eq!(state.amplitudes()[0].re, 1.0, epsilon = 1e-12);
        assert_eq!(ledger.total(), 0.0);
        let dist = output_distribution(&circ, &Oracle::constant(1, 1, 0)).unwrap();
        assert_eq!(dist.prob_of(&0), 1.0);
    }

    #[test]
    fn classical_query_ledger() {
        // Query register stays |0>; one oracle call puts all magnitude on 0.
        let circ = QueryCircuit::new(1, 1, 0, vec![Layer::OracleCall], vec![1]).unwrap();
        let h = Oracle::from_table(1, 1, vec![1, 0]);
        let (_, ledger) = run_circuit(&circ, &h).unwrap();
        assert_abs_diff_eq!(ledger.q(0), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ledger.q(1), 0.0, epsilon = 1e-12);
        // The answer wire now reads H(0)=1.
        let dist = output_distribution(&circ, &h).unwrap();
        assert_abs_diff_eq!(dist.prob_of(&1), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn uniform_superposition_ledger() {
        let circ = QueryCircuit::new(
            2,
            1,
            0,
            vec![
                gates::hadamard_layer(0),
                gates::hadamard_layer(1),
                Layer::OracleCall,
            ],
            vec![0, 1],
        )
        .unwrap();
        let (_, ledger) = run_circuit(&circ, &Oracle::constant(2, 1, 0)).unwrap();
        for x in 0..4 {
            assert_abs_diff_eq!(ledger.q(x), 0.25, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(ledger.total(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn distances() {
        let a = StateVector::zero(1, 1, 0);
        let mut amp_b = vec![Complex64::ZERO; 4];
        amp_b[1] = Complex64::ONE;
        let b = StateVector::from_amplitudes(1, 1, 0, amp_b).unwrap();
        assert_eq!(euclidean_distance(&a, &a).unwrap(), 0.0);
        assert_abs_diff_eq!(
            euclidean_distance(&a, &b).unwrap(),
            std::f64::consts::SQRT_2,
            epsilon = 1e-12
        );
        let mut amp_neg = vec![Complex64::ZERO; 4];
        amp_neg[0] = -Complex64::ONE;
        let neg = StateVector::from_amplitudes(1, 1, 0, amp_neg).unwrap();
        // Global phase is not quotiented out of the Euclidean distance.
        assert_abs_diff_eq!(euclidean_distance(&a, &neg).unwrap(), 2.0, epsilon = 1e-12);

        assert_eq!(trace_distance_pure(&a, &a).unwrap(), 0.0);
        assert_abs_diff_eq!(trace_distance_pure(&a, &b).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(trace_distance_pure(&a, &neg).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn trace_distance_obeys_euclidean_bound() {
        // Two states at Euclidean distance eps with real overlap satisfy
        // TD = eps * sqrt(1 - eps^2/4) exactly.
        let eps = 0.2f64;
        let c = 1.0 - eps * eps / 2.0;
        let s = (1.0 - c * c).sqrt();
        let a = StateVector::zero(1, 1, 0);
        let mut amp_b = vec![Complex64::ZERO; 4];
        amp_b[0] = Complex64::new(c, 0.0);
        amp_b[1] = Complex64::new(s, 0.0);
        let b = StateVector::from_amplitudes(1, 1, 0, amp_b).unwrap();
        let measured_eps = euclidean_distance(&a, &b).unwrap();
        assert_abs_diff_eq!(measured_eps, eps, epsilon = 1e-12);
        let td = trace_distance_pure(&a, &b).unwrap();
        assert!(td <= eps * (1.0 - eps * eps / 4.0).sqrt() + 1e-9);
    }

    #[test]
    fn deutsch_circuit_labels_all_four_oracles() {
        // One query distinguishes constant from balanced on n=1: answer wire
        // prepared in |->, Hadamards around the call, measure the query wire.
        let circ = gates::deutsch_circuit();
        for table in [[0u32, 0], [1, 1], [0, 1], [1, 0]] {
            let h = Oracle::from_table(1, 1, table.to_vec());
            let dist = output_distribution(&circ, &h).unwrap();
            let balanced = table[0] != table[1];
            let expected = u32::from(balanced);
            assert_abs_diff_eq!(dist.prob_of(&expected), 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn swapping_equal_oracles() {
        let circ = gates::deutsch_circuit();
        let f = Oracle::constant(1, 1, 0);
        let check = swapping_check(&circ, &f, &f).unwrap();
        assert_eq!(check.lhs, 0.0);
        assert_eq!(check.rhs, 0.0);
    }

    #[test]
    fn swapping_zero_magnitude_on_disagreement() {
        // Classical query at x=0 only; oracles differing only at x=1.
        let circ = QueryCircuit::new(1, 1, 0, vec![Layer::OracleCall], vec![1]).unwrap();
        let f = Oracle::from_table(1, 1, vec![0, 0]);
        let g = Oracle::from_table(1, 1, vec![0, 1]);
        let check = swapping_check(&circ, &f, &g).unwrap();
        assert_abs_diff_eq!(check.lhs, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(check.rhs, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn swapping_bound_is_tight_for_phase_kickback() {
        // The factor 2 in the bound is attained: the Deutsch circuit on
        // oracles disagreeing at one point has lhs = sqrt(2) while the
        // disagreement magnitude is 1/2 with a single query.
        let circ = gates::deutsch_circuit();
        let f = Oracle::from_table(1, 1, vec![0, 0]);
        let g = Oracle::from_table(1, 1, vec![0, 1]);
        let check = swapping_check(&circ, &f, &g).unwrap();
        assert_abs_diff_eq!(check.lhs, std::f64::consts::SQRT_2, epsilon = 1e-9);
        assert_abs_diff_eq!(check.disagreement_magnitude, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(check.rhs, check.lhs, epsilon = 1e-9);
    }

    #[test]
    fn non_unitary_layer_rejected() {
        let bad = vec![
            Complex64::ONE,
            Complex64::ONE,
            Complex64::ZERO,
            Complex64::ONE,
        ];
        let err = QueryCircuit::new(1, 1, 0, vec![Layer::unitary(vec![0], bad)], vec![0]);
        assert!(matches!(err, Err(Error::NotUnitary { layer: 0, .. })));
    }

    #[test]
    fn wire_validation() {
        assert!(matches!(
            QueryCircuit::new(1, 1, 0, vec![], vec![7]),
            Err(Error::WireOutOfRange { wire: 7, .. })
        ));
        assert!(matches!(
            QueryCircuit::new(1, 1, 0, vec![], vec![0, 0]),
            Err(Error::DuplicateWires(_))
        ));
    }

    #[test]
    fn json_round_trip_matches_shape() {
        let circ = gates::deutsch_circuit();
        let text = circ.to_json_string();
        let back = QueryCircuit::from_json_str(&text).unwrap();
        assert_eq!(back, circ);
        // The wire format is pinned: oracle layers are {"oracle": true} and
        // matrix entries are [re, im] pairs.
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["n"], 1);
        let layers = value["layers"].as_array().unwrap();
        assert!(layers.iter().any(|l| l["oracle"] == true));
        let first_unitary = layers.iter().find(|l| l.get("unitary").is_some()).unwrap();
        let entry = &first_unitary["unitary"]["matrix"][0][0];
        assert!(entry.as_array().unwrap().len() == 2);
    }

    #[test]
    fn malformed_json_is_an_error() {
        assert!(QueryCircuit::from_json_str("{\"n\": 1}").is_err());
        let wrong_dim = r#"{"n":1,"m":1,"w":0,
            "layers":[{"unitary":{"wires":[0],"matrix":[[[1.0,0.0]]]}}],
            "output_wires":[0]}"#;
        assert!(QueryCircuit::from_json_str(wrong_dim).is_err());
    }
}
