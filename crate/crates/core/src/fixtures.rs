//! Built-in circuits, distinguishers, reprogramming fixtures and the
//! quantum PRG, addressable by registry name from the CLI and the suites.

use num_complex::Complex64;

use crate::engine::{Layer, QueryCircuit};
use crate::experiment::Distinguisher;
use crate::gates::{cnot_layer, hadamard_layer, x_layer, xor_gate};
use crate::lift::{ReprogramDistinguisher, ReprogramSampler};
use crate::oracle::{Oracle, PartialFunction};
use crate::pseudodet::QuantumPrg;
use crate::{Error, Result};

pub const BUILTIN_DISTINGUISHERS: &[&str] = &["a_par", "a_xp", "a_eval", "a_zero"];
pub const BUILTIN_ALGORITHMS: &[&str] = &[
    "alg_ignore",
    "alg_ignore_uniform",
    "alg_read0",
    "alg_read1",
    "alg_flip0",
    "alg_parity",
    "alg_read00_w2",
    "alg_xor2_w2",
    "alg_deutsch",
];
pub const BUILTIN_REPROGRAM_FIXTURES: &[&str] = &[
    "repro_static",
    "repro_point",
    "repro_grover",
    "repro_classical_uniform",
];
pub const BUILTIN_QUANTUM_PRGS: &[&str] = &["gq_eval"];

/// Look up a built-in distinguisher, checked against the generator signature
/// `(n, m, l)` it will face. `a_zero` adapts to any signature; the others
/// are tied to one generator shape.
pub fn distinguisher_for(name: &str, n: u32, m: u32, l: u32) -> Result<Distinguisher> {
    let require = |need_n: u32, need_m: u32, need_l: u32| -> Result<()> {
        if (n, m, l) != (need_n, need_m, need_l) {
            return Err(Error::SignatureMismatch {
                expected_n: need_n,
                expected_m: need_m,
                got_n: n,
                got_m: m,
            });
        }
        Ok(())
    };
    match name {
        "a_par" => {
            require(1, 1, 2)?;
            Ok(pair_checker())
        }
        "a_xp" => {
            require(2, 1, 3)?;
            Ok(parity_pair_checker())
        }
        "a_eval" => {
            require(1, 1, 2)?;
            Ok(point_evaluation_checker())
        }
        "a_zero" => zero_distinguisher(n, m, l),
        other => Err(Error::UnknownName(other.to_string())),
    }
}

/// Accepts a 2-bit challenge exactly when it equals the oracle's value pair
/// `(H(0), H(1))` in either order. Two classical queries.
///
/// Wires: 0 query, 1 answer, 2-3 challenge, 4 saved `H(0)`, 5 verdict.
fn pair_checker() -> Distinguisher {
    let layers = vec![
        Layer::OracleCall, // answer = H(0)
        cnot_layer(1, 4),  // save H(0)
        x_layer(0),        // query = 1
        Layer::OracleCall, // answer = H(0) ^ H(1)
        xor_gate(&[2, 3, 4, 1], 5, |c| {
            let g1 = c >> 3 & 1;
            let g2 = c >> 2 & 1;
            let h0 = c >> 1 & 1;
            let h1 = h0 ^ (c & 1);
            (g1, g2) == (h0, h1) || (g1, g2) == (h1, h0)
        }),
    ];
    let circuit = QueryCircuit::new(1, 1, 4, layers, vec![5]).expect("fixed circuit");
    Distinguisher::new("a_par", circuit, vec![2, 3]).expect("fixed circuit")
}

/// Accepts a 3-bit challenge `g1 g2 p` when `(g1, g2)` equals the oracle
/// values at the complement pair of points with seed parity `p`, in either
/// order. Two classical queries on n = 2.
///
/// Wires: 0-1 query, 2 answer, 3-5 challenge, 6 saved first answer,
/// 7 verdict.
fn parity_pair_checker() -> Distinguisher {
    let layers = vec![
        cnot_layer(5, 1),  // query = (0, p)
        Layer::OracleCall, // answer = H(0p)
        cnot_layer(2, 6),  // save it
        x_layer(0),
        x_layer(1),        // query = (1, !p), the complement point
        Layer::OracleCall, // answer = H(0p) ^ H(complement)
        xor_gate(&[3, 4, 6, 2], 7, |c| {
            let g1 = c >> 3 & 1;
            let g2 = c >> 2 & 1;
            let ha = c >> 1 & 1;
            let hb = ha ^ (c & 1);
            (g1, g2) == (ha, hb) || (g1, g2) == (hb, ha)
        }),
    ];
    let circuit = QueryCircuit::new(2, 1, 5, layers, vec![7]).expect("fixed circuit");
    Distinguisher::new("a_xp", circuit, vec![3, 4, 5]).expect("fixed circuit")
}

/// Accepts a 2-bit challenge `g1 g2` when `g1 = H(g2)`. One classical query.
///
/// Wires: 0 query, 1 answer, 2-3 challenge, 4 verdict.
fn point_evaluation_checker() -> Distinguisher {
    let layers = vec![
        cnot_layer(3, 0), // query = g2
        Layer::OracleCall,
        xor_gate(&[2, 1], 4, |c| (c >> 1) == (c & 1)),
    ];
    let circuit = QueryCircuit::new(1, 1, 3, layers, vec![4]).expect("fixed circuit");
    Distinguisher::new("a_eval", circuit, vec![2, 3]).expect("fixed circuit")
}

/// Ignores challenge and oracle, always outputs 0. Adapts to any generator
/// signature.
fn zero_distinguisher(n: u32, m: u32, l: u32) -> Result<Distinguisher> {
    let w = l + 1;
    let total = (n + m + w) as usize;
    let input_wires: Vec<usize> = ((n + m) as usize..total - 1).collect();
    let circuit = QueryCircuit::new(n, m, w, vec![], vec![total - 1])?;
    Distinguisher::new("a_zero", circuit, input_wires)
}

/// Look up a built-in quantum oracle algorithm (all with n = m, so the
/// simulation stack's identity extension applies).
pub fn algorithm_by_name(name: &str) -> Result<QueryCircuit> {
    match name {
        // No oracle calls; outputs the untouched answer wire.
        "alg_ignore" => QueryCircuit::new(1, 1, 0, vec![], vec![1]),
        // Queries in uniform superposition but outputs a workspace wire the
        // oracle never touches.
        "alg_ignore_uniform" => {
            QueryCircuit::new(1, 1, 1, vec![hadamard_layer(0), Layer::OracleCall], vec![2])
        }
        // One classical query at 0; outputs H(0).
        "alg_read0" => QueryCircuit::new(1, 1, 0, vec![Layer::OracleCall], vec![1]),
        // One classical query at 1; outputs H(1).
        "alg_read1" => QueryCircuit::new(1, 1, 0, vec![x_layer(0), Layer::OracleCall], vec![1]),
        // One classical query at 0; outputs the complement of H(0).
        "alg_flip0" => QueryCircuit::new(1, 1, 0, vec![Layer::OracleCall, x_layer(1)], vec![1]),
        // Two classical queries; outputs H(0) ^ H(1).
        "alg_parity" => QueryCircuit::new(
            1,
            1,
            0,
            vec![Layer::OracleCall, x_layer(0), Layer::OracleCall],
            vec![1],
        ),
        // n = m = 2: one classical query at 00; outputs both answer bits.
        "alg_read00_w2" => QueryCircuit::new(2, 2, 0, vec![Layer::OracleCall], vec![2, 3]),
        // n = m = 2: outputs H(00) ^ H(01).
        "alg_xor2_w2" => QueryCircuit::new(
            2,
            2,
            0,
            vec![Layer::OracleCall, x_layer(1), Layer::OracleCall],
            vec![2, 3],
        ),
        // Constant-vs-balanced in one phase query. Not covered by the
        // critical-set size bounds, which assume basis-state queries; kept
        // for demos and the engine checks.
        "alg_deutsch" => Ok(crate::gates::deutsch_circuit()),
        other => Err(Error::UnknownName(other.to_string())),
    }
}

/// Look up a built-in reprogramming fixture: distinguisher, base oracle and
/// patch sampler.
pub fn reprogram_fixture(name: &str) -> Result<(ReprogramDistinguisher, Oracle, ReprogramSampler)> {
    match name {
        // The sampler never patches anything; advantage and bound are 0.
        "repro_static" => {
            let (dist, base, _) = reprogram_fixture("repro_point")?;
            let sampler = ReprogramSampler {
                name: "static_empty".into(),
                outcomes: vec![(PartialFunction::empty(1, 1), 1.0)],
            };
            Ok((dist, base, sampler))
        }
        // One certain patch at the queried point; advantage 1, bound 2Q.
        "repro_point" => {
            let circuit = QueryCircuit::new(1, 1, 0, vec![Layer::OracleCall], vec![1])?;
            let dist = ReprogramDistinguisher {
                name: "classical_probe".into(),
                circuit,
                guess: Box::new(|outcome, _| outcome == 1),
            };
            let sampler = ReprogramSampler {
                name: "certain_point".into(),
                outcomes: vec![(PartialFunction::from_entries(1, 1, &[(0, 1)])?, 1.0)],
            };
            Ok((dist, Oracle::constant(1, 1, 0), sampler))
        }
        // Uniform single-point patch on n = 2 against a one-query phase
        // circuit; advantage 3/4, bound 1.
        "repro_grover" => {
            let circuit = QueryCircuit::new(
                2,
                1,
                0,
                vec![
                    x_layer(2),
                    hadamard_layer(2),
                    hadamard_layer(0),
                    hadamard_layer(1),
                    Layer::OracleCall,
                    hadamard_layer(0),
                    hadamard_layer(1),
                ],
                vec![0, 1],
            )?;
            let dist = ReprogramDistinguisher {
                name: "phase_probe".into(),
                circuit,
                guess: Box::new(|outcome, _| outcome != 0),
            };
            let sampler = uniform_single_point_sampler(2, 1);
            Ok((dist, Oracle::constant(2, 1, 0), sampler))
        }
        // Uniform single-point patch against a classical probe at 00.
        "repro_classical_uniform" => {
            let circuit = QueryCircuit::new(2, 1, 0, vec![Layer::OracleCall], vec![2])?;
            let dist = ReprogramDistinguisher {
                name: "classical_probe00".into(),
                circuit,
                guess: Box::new(|outcome, _| outcome == 1),
            };
            let sampler = uniform_single_point_sampler(2, 1);
            Ok((dist, Oracle::constant(2, 1, 0), sampler))
        }
        other => Err(Error::UnknownName(other.to_string())),
    }
}

fn uniform_single_point_sampler(n: u32, value: u32) -> ReprogramSampler {
    let points = 1u32 << n;
    let w = 1.0 / f64::from(points);
    ReprogramSampler {
        name: format!("uniform_point_{n}"),
        outcomes: (0..points)
            .map(|x| {
                (
                    PartialFunction::from_entries(n, 1, &[(x, value)])
                        .expect("one entry cannot conflict"),
                    w,
                )
            })
            .collect(),
    }
}

/// Look up a built-in quantum PRG.
pub fn quantum_prg_by_name(name: &str) -> Result<QuantumPrg> {
    match name {
        // One query; outputs H(s) || s. Deterministic, so delta = 0.
        "gq_eval" => {
            let base = QueryCircuit::new(1, 1, 0, vec![Layer::OracleCall], vec![1, 0])?;
            QuantumPrg::new("gq_eval", base, vec![0])
        }
        other => Err(Error::UnknownName(other.to_string())),
    }
}

/// A layer applying a fixed permutation to the query register, plus its
/// inverse. Wrapping every oracle call between the two relabels the oracle
/// the circuit effectively sees.
pub fn query_relabeling_layers(n: u32, perm: &dyn Fn(u32) -> u32) -> (Layer, Layer) {
    let wires: Vec<usize> = (0..n as usize).collect();
    let dim = 1usize << n;
    let mut forward = vec![Complex64::ZERO; dim * dim];
    let mut inverse = vec![Complex64::ZERO; dim * dim];
    for x in 0..dim {
        let y = perm(x as u32) as usize;
        assert!(y < dim, "permutation out of range");
        forward[y * dim + x] = Complex64::ONE;
        inverse[x * dim + y] = Complex64::ONE;
    }
    (
        Layer::unitary(wires.clone(), forward),
        Layer::unitary(wires, inverse),
    )
}

/// Rebuild a distinguisher so that it runs against the relabeled oracle
/// `x -> H(perm(x))`.
pub fn relabel_distinguisher(
    dist: &Distinguisher,
    perm: &dyn Fn(u32) -> u32,
) -> Result<Distinguisher> {
    let circ = dist.circuit();
    let (forward, inverse) = query_relabeling_layers(circ.n(), perm);
    let mut layers = Vec::new();
    for layer in circ.layers() {
        match layer {
            Layer::OracleCall => {
                // |x> -> |perm(x)>, query, undo: the call behaves as
                // H(perm(x)).
                layers.push(forward.clone());
                layers.push(Layer::OracleCall);
                layers.push(inverse.clone());
            }
            other => layers.push(other.clone()),
        }
    }
    let circuit = QueryCircuit::new(
        circ.n(),
        circ.m(),
        circ.w(),
        layers,
        circ.output_wires().to_vec(),
    )?;
    Distinguisher::new(
        format!("{}@relabel", dist.name()),
        circuit,
        dist.input_wires().to_vec(),
    )
}
