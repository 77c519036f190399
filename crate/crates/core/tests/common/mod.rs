//! Dense reference implementations used as oracles. Nothing here calls the
//! Pauli, inflation or witness code under test.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

use netsym_core::pauli::PauliString;
use netsym_core::witness::{Witness, WitnessTerm};

pub type CMat = DMatrix<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn single(letter: char) -> CMat {
    match letter {
        '1' | 'I' => CMat::from_row_slice(2, 2, &[ONE, ZERO, ZERO, ONE]),
        'X' => CMat::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
        'Y' => CMat::from_row_slice(2, 2, &[ZERO, -I, I, ZERO]),
        'Z' => CMat::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
        _ => panic!("not a Pauli letter: {letter}"),
    }
}

/// Kronecker product of the letters of the printed string, leftmost letter
/// first, times the printed phase.
pub fn pauli_dense(p: &PauliString) -> CMat {
    let text = p.to_string();
    let (phase, body) = if let Some(r) = text.strip_prefix("-i") {
        (-I, r)
    } else if let Some(r) = text.strip_prefix('i') {
        (I, r)
    } else if let Some(r) = text.strip_prefix('-') {
        (-ONE, r)
    } else {
        (ONE, text.as_str())
    };
    let mut m = CMat::from_element(1, 1, phase);
    for c in body.chars() {
        m = m.kronecker(&single(c));
    }
    m
}

pub fn expectation(rho: &CMat, p: &PauliString) -> f64 {
    (rho * pauli_dense(p)).trace().re
}

pub fn projector(v: &DVector<Complex64>) -> CMat {
    v * v.adjoint()
}

/// Reduced state of `rho` on qubits `keep`, in the listed order.
pub fn partial_trace(rho: &CMat, n: usize, keep: &[usize]) -> CMat {
    let k = keep.len();
    let rest: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
    let compose = |kept: usize, traced: usize| -> usize {
        let mut idx = 0;
        for (i, &q) in keep.iter().enumerate() {
            idx |= ((kept >> (k - 1 - i)) & 1) << (n - 1 - q);
        }
        for (i, &q) in rest.iter().enumerate() {
            idx |= ((traced >> (rest.len() - 1 - i)) & 1) << (n - 1 - q);
        }
        idx
    };
    let mut out = CMat::zeros(1 << k, 1 << k);
    for a in 0..1usize << k {
        for b in 0..1usize << k {
            let mut acc = ZERO;
            for t in 0..1usize << rest.len() {
                acc += rho[(compose(a, t), compose(b, t))];
            }
            out[(a, b)] = acc;
        }
    }
    out
}

/// Reorder tensor factors: output qubit `i` is input qubit `order[i]`.
pub fn permute_qubits(rho: &CMat, order: &[usize]) -> CMat {
    let n = order.len();
    let map = |idx: usize| -> usize {
        let mut out = 0;
        for (i, &q) in order.iter().enumerate() {
            out |= ((idx >> (n - 1 - q)) & 1) << (n - 1 - i);
        }
        out
    };
    let d = 1usize << n;
    let mut out = CMat::zeros(d, d);
    for a in 0..d {
        for b in 0..d {
            out[(map(a), map(b))] = rho[(a, b)];
        }
    }
    out
}

/// Tensor product of `factors`, each a density matrix on the listed output
/// qubits; every qubit `0..n` must be listed exactly once.
pub fn assemble(n: usize, factors: &[(CMat, Vec<usize>)]) -> CMat {
    let mut rho = CMat::from_element(1, 1, ONE);
    let mut order = Vec::with_capacity(n);
    for (m, qs) in factors {
        rho = rho.kronecker(m);
        order.extend_from_slice(qs);
    }
    assert_eq!(order.len(), n, "qubits listed {order:?}");
    // position of output qubit i in the kron order
    let inverse: Vec<usize> = (0..n).map(|i| order.iter().position(|&q| q == i).expect("qubit listed")).collect();
    permute_qubits(&rho, &inverse)
}

pub fn gaussian<R: Rng>(rng: &mut R) -> f64 {
    // Box-Muller
    let u: f64 = rng.random_range(f64::EPSILON..1.0);
    let v: f64 = rng.random_range(0.0..1.0);
    (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos()
}

pub fn random_density<R: Rng>(qubits: usize, rank: usize, rng: &mut R) -> CMat {
    let d = 1usize << qubits;
    let g = CMat::from_fn(d, rank, |_, _| Complex64::new(gaussian(rng), gaussian(rng)));
    let rho = &g * g.adjoint();
    let tr = rho.trace().re;
    rho.unscale(tr)
}

pub fn random_unitary<R: Rng>(d: usize, rng: &mut R) -> CMat {
    let g = CMat::from_fn(d, d, |_, _| Complex64::new(gaussian(rng), gaussian(rng)));
    g.qr().q()
}

/// Network state with one output qubit per node: source `k` prepares
/// `states[k]` on its parties (qubit `r` of the source goes to
/// `parties[k][r]`), and node `v` keeps the subsystem it received from
/// source `keep[v]`, discarding the rest.
pub fn keep_one_network_state(n: usize, parties: &[Vec<usize>], states: &[CMat], keep: &[usize]) -> CMat {
    let mut factors = Vec::new();
    for (k, (roles, rho)) in parties.iter().zip(states).enumerate() {
        let kept_roles: Vec<usize> = (0..roles.len()).filter(|&r| keep[roles[r]] == k).collect();
        if kept_roles.is_empty() {
            continue;
        }
        let m = partial_trace(rho, roles.len(), &kept_roles);
        factors.push((m, kept_roles.iter().map(|&r| roles[r]).collect()));
    }
    assemble(n, &factors)
}

/// Node `v` applies `unitaries[v]` to everything it received (in source
/// order) and keeps the first qubit.
pub fn local_channel_network_state(n: usize, parties: &[Vec<usize>], states: &[CMat], unitaries: &[CMat]) -> CMat {
    // slot list: (node, source) in kron order
    let mut slots = Vec::new();
    let mut rho = CMat::from_element(1, 1, ONE);
    for (k, (roles, s)) in parties.iter().zip(states).enumerate() {
        rho = rho.kronecker(s);
        for &v in roles {
            slots.push((v, k));
        }
    }
    let total = slots.len();
    let mut order: Vec<usize> = (0..total).collect();
    order.sort_by_key(|&i| slots[i]);
    let grouped = permute_qubits(&rho, &order);
    let mut u = CMat::from_element(1, 1, ONE);
    let mut firsts = Vec::with_capacity(n);
    let mut pos = 0;
    for (v, uv) in unitaries.iter().enumerate().take(n) {
        let width = slots.iter().filter(|s| s.0 == v).count();
        assert_eq!(uv.nrows(), 1 << width);
        u = u.kronecker(uv);
        firsts.push(pos);
        pos += width;
    }
    let evolved = &u * grouped * u.adjoint();
    partial_trace(&evolved, total, &firsts)
}

/// `sum_term (term value)^2` with direct terms `<P>` and chained terms
/// `max(0, sum <L_i> - (k - 1))`, from the given expectation function.
pub fn witness_lhs(w: &Witness, exp: &dyn Fn(&PauliString) -> f64) -> f64 {
    w.terms
        .iter()
        .map(|t| match t {
            WitnessTerm::Direct(p) => exp(p).powi(2),
            WitnessTerm::Chained(links) => {
                let v: f64 = links.iter().map(exp).sum::<f64>() - (links.len() as f64 - 1.0);
                v.max(0.0).powi(2)
            }
        })
        .sum()
}

/// Least `p` in `[0, 1]` with `lhs(p) > 1 + slack`, by bisection, when
/// every non-identity expectation scales as `p <P>` under white noise.
pub fn noise_threshold(w: &Witness, pure_exp: &dyn Fn(&PauliString) -> f64, slack: f64) -> Option<f64> {
    let lhs = |p: f64| {
        witness_lhs(w, &|q: &PauliString| if q.weight() == 0 { pure_exp(q) } else { p * pure_exp(q) })
    };
    if lhs(1.0) <= 1.0 + slack {
        return None;
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if lhs(mid) > 1.0 + slack {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

/// Graph state vector from the stabilizer definition: amplitude
/// `(-1)^{#edges inside x} / sqrt(2^n)`, qubit 0 the most significant bit.
pub fn graph_state_vector(n: usize, edges: &[(usize, usize)]) -> DVector<Complex64> {
    let d = 1usize << n;
    let amp = 1.0 / (d as f64).sqrt();
    DVector::from_fn(d, |x, _| {
        let on = |q: usize| (x >> (n - 1 - q)) & 1 == 1;
        let inside = edges.iter().filter(|&&(u, v)| on(u) && on(v)).count();
        Complex64::new(if inside % 2 == 0 { amp } else { -amp }, 0.0)
    })
}

pub fn white_noise(rho: &CMat, p: f64) -> CMat {
    let d = rho.nrows();
    rho.scale(p) + CMat::identity(d, d).scale((1.0 - p) / d as f64)
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Marginal on `subset` (node copies, in order) of the state where copy `k`
/// of source `s` prepares `states[s]` on `wiring[s][k]` (one node copy per
/// role). Within a node copy, received qubits are ordered by source, then
/// role.
pub fn wired_marginal(wiring: &[Vec<Vec<(usize, usize)>>], states: &[CMat], subset: &[(usize, usize)]) -> CMat {
    let mut factors = Vec::new();
    let mut keys = Vec::new();
    for (s, per_copy) in wiring.iter().enumerate() {
        for ends in per_copy {
            let kept: Vec<usize> = (0..ends.len()).filter(|&r| subset.contains(&ends[r])).collect();
            if kept.is_empty() {
                continue;
            }
            let m = partial_trace(&states[s], ends.len(), &kept);
            let slot_keys: Vec<(usize, usize, usize)> =
                kept.iter().map(|&r| (subset.iter().position(|x| *x == ends[r]).unwrap(), s, r)).collect();
            factors.push((m, slot_keys.len()));
            keys.extend(slot_keys);
        }
    }
    let mut sorted = keys.clone();
    sorted.sort();
    let n = keys.len();
    let mut placed = Vec::new();
    let mut at = 0;
    for (m, width) in factors {
        let qs = keys[at..at + width].iter().map(|k| sorted.iter().position(|x| x == k).unwrap()).collect();
        placed.push((m, qs));
        at += width;
    }
    assemble(n, &placed)
}

/// Parity of the positions where both strings act with different letters.
pub fn anticommute(p: &str, q: &str) -> bool {
    p.chars().zip(q.chars()).filter(|&(a, b)| a != '1' && b != '1' && a != b).count() % 2 == 1
}
