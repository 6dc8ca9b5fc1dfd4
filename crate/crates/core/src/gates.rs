//! Builders for unitary layers and small circuits.
//!
//! Classical reversible logic is expressed with [`xor_gate`], which XORs an
//! arbitrary boolean function of some control wires into a target wire; its
//! matrix is a permutation, so unitarity is automatic. [`random_unitary`],
//! [`random_state`] and [`random_circuit`] feed the randomized bound checks.

use num_complex::Complex64;
use rand::Rng;

use crate::engine::{Layer, QueryCircuit, StateVector};

/// Identity on one wire. Useful for circuits that must have at least one
/// layer.
pub fn identity_layer(wire: usize) -> Layer {
    Layer::unitary(
        vec![wire],
        vec![
            Complex64::ONE,
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::ONE,
        ],
    )
}

/// Bit flip (Pauli X) on one wire.
pub fn x_layer(wire: usize) -> Layer {
    Layer::unitary(
        vec![wire],
        vec![
            Complex64::ZERO,
            Complex64::ONE,
            Complex64::ONE,
            Complex64::ZERO,
        ],
    )
}

/// Hadamard on one wire.
pub fn hadamard_layer(wire: usize) -> Layer {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    Layer::unitary(vec![wire], vec![h, h, h, -h])
}

/// XOR a boolean function of the control wires into the target:
/// `|c>|b> -> |c>|b ^ f(c)>`, with `c` read most significant control first.
/// The result is a permutation matrix over `controls + [target]`.
pub fn xor_gate(controls: &[usize], target: usize, f: impl Fn(u32) -> bool) -> Layer {
    let k = controls.len();
    let dim = 1usize << (k + 1);
    let mut matrix = vec![Complex64::ZERO; dim * dim];
    for input in 0..dim {
        let c = (input >> 1) as u32;
        let b = input & 1;
        let out = (input & !1) | (b ^ usize::from(f(c)));
        matrix[out * dim + input] = Complex64::ONE;
    }
    let mut wires = controls.to_vec();
    wires.push(target);
    Layer::unitary(wires, matrix)
}

/// CNOT with one control.
pub fn cnot_layer(control: usize, target: usize) -> Layer {
    xor_gate(&[control], target, |c| c == 1)
}

/// Permute the computational basis of the listed wires: `|v> -> |perm(v)>`.
/// `perm` must be a bijection on `0..2^wires.len()`.
pub fn permutation_gate(wires: &[usize], perm: impl Fn(u32) -> u32) -> Layer {
    let dim = 1usize << wires.len();
    let mut matrix = vec![Complex64::ZERO; dim * dim];
    let mut hit = vec![false; dim];
    for input in 0..dim {
        let out = perm(input as u32) as usize;
        assert!(out < dim && !hit[out], "perm is not a bijection");
        hit[out] = true;
        matrix[out * dim + input] = Complex64::ONE;
    }
    Layer::unitary(wires.to_vec(), matrix)
}

/// The one-query constant-vs-balanced circuit on n = m = 1: answer wire
/// prepared in `|->`, Hadamards around the oracle call, query wire measured.
/// Outputs 0 exactly when the oracle is constant.
pub fn deutsch_circuit() -> QueryCircuit {
    QueryCircuit::new(
        1,
        1,
        0,
        vec![
            x_layer(1),
            hadamard_layer(1),
            hadamard_layer(0),
            Layer::OracleCall,
            hadamard_layer(0),
        ],
        vec![0],
    )
    .expect("fixed circuit is well formed")
}

/// Haar-ish random unitary of the given dimension: Gram-Schmidt applied to a
/// complex Gaussian matrix. Plenty for randomized checks.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<Complex64> {
    loop {
        let mut cols: Vec<Vec<Complex64>> = (0..dim)
            .map(|_| {
                (0..dim)
                    .map(|_| Complex64::new(gaussian(rng), gaussian(rng)))
                    .collect()
            })
            .collect();
        if let Some(matrix) = gram_schmidt(&mut cols) {
            return matrix;
        }
        // Degenerate draw; retry.
    }
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    // Box-Muller.
    let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let v: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    (-2.0 * u.ln()).sqrt() * v.cos()
}

fn gram_schmidt(cols: &mut [Vec<Complex64>]) -> Option<Vec<Complex64>> {
    let dim = cols.len();
    for i in 0..dim {
        for j in 0..i {
            let (done, rest) = cols.split_at_mut(i);
            let previous = &done[j];
            let current = &mut rest[0];
            let proj: Complex64 = previous
                .iter()
                .zip(current.iter())
                .map(|(a, b)| a.conj() * b)
                .sum();
            for (c, p) in current.iter_mut().zip(previous) {
                *c -= proj * p;
            }
        }
        let norm: f64 = cols[i].iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            return None;
        }
        for entry in cols[i].iter_mut() {
            *entry /= norm;
        }
    }
    // Row-major with the orthonormal vectors as columns.
    let mut matrix = vec![Complex64::ZERO; dim * dim];
    for (c, col) in cols.iter().enumerate() {
        for (r, &entry) in col.iter().enumerate() {
            matrix[r * dim + c] = entry;
        }
    }
    Some(matrix)
}

/// A uniformly random pure state on the given registers.
pub fn random_state<R: Rng + ?Sized>(
    n_query: u32,
    m_answer: u32,
    w_work: u32,
    rng: &mut R,
) -> StateVector {
    let len = 1usize << (n_query + m_answer + w_work);
    loop {
        let amps: Vec<Complex64> = (0..len)
            .map(|_| Complex64::new(gaussian(rng), gaussian(rng)))
            .collect();
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue;
        }
        let amps = amps.into_iter().map(|a| a / norm).collect();
        return StateVector::from_amplitudes(n_query, m_answer, w_work, amps)
            .expect("normalized by construction");
    }
}

/// A random circuit with exactly `queries` oracle calls, interleaved with
/// random one- and two-wire unitaries. Output wires are the answer register.
pub fn random_circuit<R: Rng + ?Sized>(
    n: u32,
    m: u32,
    w: u32,
    queries: u32,
    rng: &mut R,
) -> QueryCircuit {
    let total = (n + m + w) as usize;
    let mut layers = Vec::new();
    let push_random_unitaries = |layers: &mut Vec<Layer>, rng: &mut R| {
        for _ in 0..rng.gen_range(1..=2) {
            let span = if total >= 2 && rng.gen_bool(0.7) {
                2
            } else {
                1
            };
            let mut wires = Vec::with_capacity(span);
            while wires.len() < span {
                let wire = rng.gen_range(0..total);
                if !wires.contains(&wire) {
                    wires.push(wire);
                }
            }
            layers.push(Layer::unitary(wires, random_unitary(1 << span, rng)));
        }
    };
    push_random_unitaries(&mut layers, rng);
    for _ in 0..queries {
        layers.push(Layer::OracleCall);
        push_random_unitaries(&mut layers, rng);
    }
    let output_wires = (n as usize..(n + m) as usize).collect();
    QueryCircuit::new(n, m, w, layers, output_wires).expect("random unitaries are unitary")
}
