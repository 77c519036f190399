//! Dense state vectors and density matrices over small multiqudit systems.
//!
//! Party 0 is the most significant digit of the basis index, so for qubits
//! the letter at position `q` of a Pauli string acts on bit `n - 1 - q`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graphs::{bits, Graph};
use crate::pauli::PauliString;

/// Largest total dimension of a state vector (12 qubits).
pub const MAX_PURE_DIM: usize = 4096;
/// Largest total dimension of a density matrix (10 qubits).
pub const MAX_MIXED_DIM: usize = 1024;
pub const MAX_LOCAL_DIM: usize = 4;

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const NORM_TOL: f64 = 1e-12;
/// Slack applied to every comparison against a bound.
pub const SLACK: f64 = 1e-9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub enum Amplitudes {
    Pure(DVector<Complex64>),
    Mixed(DMatrix<Complex64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseState {
    dims: Vec<usize>,
    data: Amplitudes,
}

fn total_dim(dims: &[usize]) -> Result<usize> {
    if dims.is_empty() {
        return Err(Error::Dimension("no parties".into()));
    }
    let mut d: usize = 1;
    for &k in dims {
        if !(2..=MAX_LOCAL_DIM).contains(&k) {
            return Err(Error::Dimension(format!("local dimension {k} outside 2..={MAX_LOCAL_DIM}")));
        }
        d = d.saturating_mul(k);
        if d > MAX_PURE_DIM {
            return Err(Error::DimensionCap { dim: d, cap: MAX_PURE_DIM });
        }
    }
    Ok(d)
}

/// Basis-index offsets contributed by the digits of `parties`, enumerated in
/// mixed radix with the first listed party most significant.
fn offsets(dims: &[usize], parties: &[usize]) -> Vec<usize> {
    let mut strides = vec![1usize; dims.len()];
    for p in (0..dims.len().saturating_sub(1)).rev() {
        strides[p] = strides[p + 1] * dims[p + 1];
    }
    let mut out = vec![0usize];
    for &p in parties {
        let mut next = Vec::with_capacity(out.len() * dims[p]);
        for &o in &out {
            for digit in 0..dims[p] {
                next.push(o + digit * strides[p]);
            }
        }
        out = next;
    }
    out
}

fn check_subset(n: usize, parties: &[usize], allow_empty: bool) -> Result<()> {
    if parties.is_empty() && !allow_empty {
        return Err(Error::BadSubset("empty".into()));
    }
    let mut seen = 0u64;
    for &p in parties {
        if p >= n {
            return Err(Error::BadSubset(format!("party {p} out of range for {n} parties")));
        }
        if seen >> p & 1 == 1 {
            return Err(Error::BadSubset(format!("party {p} repeated")));
        }
        seen |= 1 << p;
    }
    Ok(())
}

fn complement(n: usize, parties: &[usize]) -> Vec<usize> {
    (0..n).filter(|p| !parties.contains(p)).collect()
}

/// Minimum eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(m: &DMatrix<Complex64>) -> f64 {
    m.clone().symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
}

/// Index of `(q, ...)` in a qubit register: qubit `q` sits at bit `n - 1 - q`.
fn index_mask(n: usize, mask: u64) -> usize {
    bits(mask).fold(0usize, |acc, q| acc | 1 << (n - 1 - q))
}

/// `(coefficient, x, z)` such that `P|b> = c (-1)^{popcount(z & b)} |b ^ x>`.
fn pauli_action(p: &PauliString) -> (Complex64, usize, usize) {
    let n = p.num_qubits();
    let k = (p.phase().exponent() as u32 + p.y_count()) % 4;
    let c = match k {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    };
    (c, index_mask(n, p.x_mask()), index_mask(n, p.z_mask()))
}

fn parity_sign(v: usize) -> f64 {
    if v.count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Explicit `2^n x 2^n` matrix of a Pauli string (n ≤ 10).
pub fn pauli_matrix(p: &PauliString) -> Result<DMatrix<Complex64>> {
    let n = p.num_qubits();
    let dim = 1usize << n.min(63);
    if n > 10 {
        return Err(Error::DimensionCap { dim, cap: MAX_MIXED_DIM });
    }
    let (c, x, z) = pauli_action(p);
    let mut m = DMatrix::from_element(dim, dim, ZERO);
    for b in 0..dim {
        m[(b ^ x, b)] = c * parity_sign(z & b);
    }
    Ok(m)
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    // Box-Muller
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random::<f64>();
    libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(core::f64::consts::TAU * u2)
}

impl DenseState {
    /// Validating constructor for a state vector.
    pub fn from_vector(dims: Vec<usize>, v: DVector<Complex64>) -> Result<Self> {
        let d = total_dim(&dims)?;
        if v.len() != d {
            return Err(Error::Dimension(format!("vector has length {}, dims give {d}", v.len())));
        }
        let norm = v.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("norm {norm} is not 1")));
        }
        Ok(Self { dims, data: Amplitudes::Pure(v) })
    }

    /// Normalizes `v` before validating.
    pub fn from_unnormalized(dims: Vec<usize>, v: DVector<Complex64>) -> Result<Self> {
        let norm = v.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidState("zero vector".into()));
        }
        Self::from_vector(dims, v.unscale(norm))
    }

    /// Validating constructor for a density matrix.
    pub fn from_density(dims: Vec<usize>, rho: DMatrix<Complex64>) -> Result<Self> {
        let d = total_dim(&dims)?;
        if d > MAX_MIXED_DIM {
            return Err(Error::DimensionCap { dim: d, cap: MAX_MIXED_DIM });
        }
        if rho.nrows() != d || rho.ncols() != d {
            return Err(Error::Dimension(format!("matrix is {}x{}, dims give {d}", rho.nrows(), rho.ncols())));
        }
        let asym = (&rho - rho.adjoint()).norm();
        if asym > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("not hermitian (deviation {asym:e})")));
        }
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > HERMITIAN_TOL || tr.im.abs() > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("trace {tr} is not 1")));
        }
        let rho = (&rho + rho.adjoint()).scale(0.5);
        let low = min_eigenvalue(&rho);
        if low < -HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {low:e}")));
        }
        Ok(Self { dims, data: Amplitudes::Mixed(rho) })
    }

    pub fn basis(dims: Vec<usize>, digits: &[usize]) -> Result<Self> {
        let d = total_dim(&dims)?;
        if digits.len() != dims.len() || digits.iter().zip(&dims).any(|(a, b)| a >= b) {
            return Err(Error::Dimension("basis digits do not match dims".into()));
        }
        let idx = digits.iter().zip(&dims).fold(0, |acc, (a, b)| acc * b + a);
        let mut v = DVector::from_element(d, ZERO);
        v[idx] = Complex64::new(1.0, 0.0);
        Self::from_vector(dims, v)
    }

    /// `|0...0>` on `n` qubits.
    pub fn zeros(n: usize) -> Result<Self> {
        Self::basis(vec![2; n], &vec![0; n])
    }

    pub fn ghz(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Dimension("GHZ needs at least 2 qubits".into()));
        }
        let d = total_dim(&vec![2; n])?;
        let mut v = DVector::from_element(d, ZERO);
        let a = Complex64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0);
        v[0] = a;
        v[d - 1] = a;
        Self::from_vector(vec![2; n], v)
    }

    /// Common +1 eigenstate of `X_i Z_{N(i)}`: amplitude `(-1)^{e(b)} / 2^{n/2}`
    /// where `e(b)` counts edges inside the support of `b`.
    pub fn graph_state(g: &Graph) -> Result<Self> {
        let n = g.n();
        let d = total_dim(&vec![2; n])?;
        let amp = 1.0 / libm::sqrt(d as f64);
        let edges: Vec<(usize, usize)> = g.edges().into_iter().map(|(u, v)| (1 << (n - 1 - u), 1 << (n - 1 - v))).collect();
        let v = DVector::from_fn(d, |b, _| {
            let inside = edges.iter().filter(|&&(u, w)| b & u != 0 && b & w != 0).count();
            Complex64::new(if inside % 2 == 0 { amp } else { -amp }, 0.0)
        });
        Self::from_vector(vec![2; n], v)
    }

    pub fn dicke(n: usize, k: usize) -> Result<Self> {
        if k > n {
            return Err(Error::OutOfRange { value: k as f64, lo: 0.0, hi: n as f64 });
        }
        let d = total_dim(&vec![2; n])?;
        let v = DVector::from_fn(d, |b, _| Complex64::new(if b.count_ones() as usize == k { 1.0 } else { 0.0 }, 0.0));
        Self::from_unnormalized(vec![2; n], v)
    }

    /// `(|01> - |10>) / sqrt 2`
    pub fn singlet() -> Self {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let v = DVector::from_vec(vec![ZERO, Complex64::new(h, 0.0), Complex64::new(-h, 0.0), ZERO]);
        Self { dims: vec![2, 2], data: Amplitudes::Pure(v) }
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Result<Self> {
        let d = total_dim(&dims)?;
        if d > MAX_MIXED_DIM {
            return Err(Error::DimensionCap { dim: d, cap: MAX_MIXED_DIM });
        }
        let rho = DMatrix::identity(d, d).map(|x: f64| Complex64::new(x / d as f64, 0.0));
        Ok(Self { dims, data: Amplitudes::Mixed(rho) })
    }

    /// Haar-random pure state.
    pub fn random_pure<R: Rng + ?Sized>(dims: Vec<usize>, rng: &mut R) -> Result<Self> {
        let d = total_dim(&dims)?;
        let v = DVector::from_fn(d, |_, _| Complex64::new(gaussian(rng), gaussian(rng)));
        Self::from_unnormalized(dims, v)
    }

    /// Random density matrix `G G† / Tr` with a `d x rank` Ginibre `G`.
    pub fn random_mixed<R: Rng + ?Sized>(dims: Vec<usize>, rank: usize, rng: &mut R) -> Result<Self> {
        let d = total_dim(&dims)?;
        if d > MAX_MIXED_DIM {
            return Err(Error::DimensionCap { dim: d, cap: MAX_MIXED_DIM });
        }
        let g = DMatrix::from_fn(d, rank.max(1), |_, _| Complex64::new(gaussian(rng), gaussian(rng)));
        let rho = &g * g.adjoint();
        let tr = rho.trace().re;
        Self::from_density(dims, rho.unscale(tr))
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_parties(&self) -> usize {
        self.dims.len()
    }

    pub fn dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_pure(&self) -> bool {
        matches!(self.data, Amplitudes::Pure(_))
    }

    pub fn is_qubits(&self) -> bool {
        self.dims.iter().all(|&d| d == 2)
    }

    pub fn amplitudes(&self) -> &Amplitudes {
        &self.data
    }

    pub fn vector(&self) -> Option<&DVector<Complex64>> {
        match &self.data {
            Amplitudes::Pure(v) => Some(v),
            Amplitudes::Mixed(_) => None,
        }
    }

    /// Density matrix, materialized from the vector if needed.
    pub fn density_matrix(&self) -> Result<DMatrix<Complex64>> {
        match &self.data {
            Amplitudes::Mixed(m) => Ok(m.clone()),
            Amplitudes::Pure(v) => {
                if v.len() > MAX_MIXED_DIM {
                    return Err(Error::DimensionCap { dim: v.len(), cap: MAX_MIXED_DIM });
                }
                Ok(v * v.adjoint())
            }
        }
    }

    pub fn to_mixed(&self) -> Result<Self> {
        Ok(Self { dims: self.dims.clone(), data: Amplitudes::Mixed(self.density_matrix()?) })
    }

    /// `p rho + (1 - p) 1/D`
    pub fn white_noise(&self, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::OutOfRange { value: p, lo: 0.0, hi: 1.0 });
        }
        let d = self.dim();
        let mut rho = self.density_matrix()?.scale(p);
        for i in 0..d {
            rho[(i, i)] += Complex64::new((1.0 - p) / d as f64, 0.0);
        }
        Ok(Self { dims: self.dims.clone(), data: Amplitudes::Mixed(rho) })
    }

    /// Convex mixture `sum w_i rho_i` of states with equal dims.
    pub fn mixture(parts: &[(f64, &DenseState)]) -> Result<Self> {
        let first = parts.first().ok_or(Error::EmptyInput)?.1;
        let d = first.dim();
        let mut rho = DMatrix::from_element(d, d, ZERO);
        for (w, s) in parts {
            if s.dims != first.dims {
                return Err(Error::Dimension("mixture components have different dims".into()));
            }
            rho += s.density_matrix()?.scale(*w);
        }
        Self::from_density(first.dims.clone(), rho)
    }

    /// Tensor product, `self` first.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let dims: Vec<usize> = self.dims.iter().chain(&other.dims).copied().collect();
        total_dim(&dims)?;
        match (&self.data, &other.data) {
            (Amplitudes::Pure(a), Amplitudes::Pure(b)) => Ok(Self { dims, data: Amplitudes::Pure(a.kronecker(b)) }),
            _ => {
                let m = self.density_matrix()?.kronecker(&other.density_matrix()?);
                if m.nrows() > MAX_MIXED_DIM {
                    return Err(Error::DimensionCap { dim: m.nrows(), cap: MAX_MIXED_DIM });
                }
                Ok(Self { dims, data: Amplitudes::Mixed(m) })
            }
        }
    }

    /// Reorder parties: party `k` of the result is party `order[k]` of `self`.
    pub fn permute_parties(&self, order: &[usize]) -> Result<Self> {
        let n = self.num_parties();
        if order.len() != n {
            return Err(Error::BadSubset(format!("permutation of length {} for {n} parties", order.len())));
        }
        check_subset(n, order, false)?;
        let dims: Vec<usize> = order.iter().map(|&p| self.dims[p]).collect();
        // old index of each new index
        let map = offsets(&self.dims, order);
        Ok(match &self.data {
            Amplitudes::Pure(v) => Self { dims, data: Amplitudes::Pure(DVector::from_fn(v.len(), |i, _| v[map[i]])) },
            Amplitudes::Mixed(m) => {
                let d = m.nrows();
                Self { dims, data: Amplitudes::Mixed(DMatrix::from_fn(d, d, |i, j| m[(map[i], map[j])])) }
            }
        })
    }

    /// Reduced state on `keep`, parties in the listed order.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        let n = self.num_parties();
        check_subset(n, keep, false)?;
        let traced = complement(n, keep);
        let ok = offsets(&self.dims, keep);
        let ot = offsets(&self.dims, &traced);
        let dk = ok.len();
        let dims: Vec<usize> = keep.iter().map(|&p| self.dims[p]).collect();
        if traced.is_empty() {
            return self.permute_parties(keep);
        }
        if dk > MAX_MIXED_DIM {
            return Err(Error::DimensionCap { dim: dk, cap: MAX_MIXED_DIM });
        }
        let mut rho = DMatrix::from_element(dk, dk, ZERO);
        match &self.data {
            Amplitudes::Pure(v) => {
                for &t in &ot {
                    for i in 0..dk {
                        let a = v[ok[i] + t];
                        if a == ZERO {
                            continue;
                        }
                        for j in 0..dk {
                            rho[(i, j)] += a * v[ok[j] + t].conj();
                        }
                    }
                }
            }
            Amplitudes::Mixed(m) => {
                for &t in &ot {
                    for i in 0..dk {
                        for j in 0..dk {
                            rho[(i, j)] += m[(ok[i] + t, ok[j] + t)];
                        }
                    }
                }
            }
        }
        Ok(Self { dims, data: Amplitudes::Mixed(rho) })
    }

    /// Partial transpose over `subset`.
    pub fn partial_transpose(&self, subset: &[usize]) -> Result<DMatrix<Complex64>> {
        let n = self.num_parties();
        check_subset(n, subset, true)?;
        let rest = complement(n, subset);
        let os = offsets(&self.dims, subset);
        let or = offsets(&self.dims, &rest);
        let m = self.density_matrix()?;
        let mut out = DMatrix::from_element(m.nrows(), m.ncols(), ZERO);
        for &s1 in &os {
            for &s2 in &os {
                for &r1 in &or {
                    for &r2 in &or {
                        out[(s1 + r1, s2 + r2)] = m[(s2 + r1, s1 + r2)];
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn partial_transpose_min_eig(&self, subset: &[usize]) -> Result<f64> {
        if subset.is_empty() || subset.len() >= self.num_parties() {
            return Err(Error::BadSubset("partial transpose needs a proper nonempty subset".into()));
        }
        Ok(min_eigenvalue(&self.partial_transpose(subset)?))
    }

    /// `Tr(rho P)` through the bit action of `P`, without building its matrix.
    pub fn expectation(&self, p: &PauliString) -> Result<f64> {
        Ok(self.expectation_complex(p)?.re)
    }

    pub fn expectation_complex(&self, p: &PauliString) -> Result<Complex64> {
        if !self.is_qubits() {
            return Err(Error::NotQubits);
        }
        if p.num_qubits() != self.num_parties() {
            return Err(Error::QubitCountMismatch { left: p.num_qubits(), right: self.num_parties() });
        }
        let (c, x, z) = pauli_action(p);
        let mut acc = ZERO;
        match &self.data {
            Amplitudes::Pure(v) => {
                for b in 0..v.len() {
                    acc += v[b ^ x].conj() * v[b] * parity_sign(z & b);
                }
            }
            Amplitudes::Mixed(m) => {
                for b in 0..m.nrows() {
                    acc += m[(b, b ^ x)] * parity_sign(z & b);
                }
            }
        }
        Ok(acc * c)
    }

    /// `Tr(rho O)` for an explicit operator.
    pub fn expectation_operator(&self, o: &DMatrix<Complex64>) -> Result<Complex64> {
        let d = self.dim();
        if o.nrows() != d || o.ncols() != d {
            return Err(Error::Dimension(format!("operator is {}x{}, state has dimension {d}", o.nrows(), o.ncols())));
        }
        Ok(match &self.data {
            Amplitudes::Pure(v) => (v.adjoint() * o * v)[(0, 0)],
            Amplitudes::Mixed(m) => (m * o).trace(),
        })
    }

    /// `<t| rho |t>` for a pure target.
    pub fn fidelity(&self, target: &DenseState) -> Result<f64> {
        if target.dims != self.dims {
            return Err(Error::Dimension("fidelity between states with different dims".into()));
        }
        let t = target.vector().ok_or(Error::NotPure)?;
        Ok(match &self.data {
            Amplitudes::Pure(v) => t.dotc(v).norm_sqr(),
            Amplitudes::Mixed(m) => (t.adjoint() * m * t)[(0, 0)].re,
        })
    }

    pub fn purity(&self) -> f64 {
        match &self.data {
            Amplitudes::Pure(_) => 1.0,
            Amplitudes::Mixed(m) => m.iter().map(|c| c.norm_sqr()).sum(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{Letter, PauliString};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    fn c4() -> DenseState {
        DenseState::graph_state(&Graph::cycle(4).unwrap()).unwrap()
    }

    /// Single-qubit matrices tensored left to right; independent of the bit
    /// action used by the library.
    fn kron_oracle(s: &PauliString) -> DMatrix<Complex64> {
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        let mut m = DMatrix::from_element(1, 1, one);
        for q in 0..s.num_qubits() {
            let l = match s.letter(q) {
                Letter::I => DMatrix::from_row_slice(2, 2, &[one, ZERO, ZERO, one]),
                Letter::X => DMatrix::from_row_slice(2, 2, &[ZERO, one, one, ZERO]),
                Letter::Y => DMatrix::from_row_slice(2, 2, &[ZERO, -i, i, ZERO]),
                Letter::Z => DMatrix::from_row_slice(2, 2, &[one, ZERO, ZERO, -one]),
            };
            m = m.kronecker(&l);
        }
        let (re, im) = s.phase().to_complex_parts();
        m.map(|x| x * Complex64::new(re, im))
    }

    #[test]
    fn ghz_expectations() {
        let g = DenseState::ghz(3).unwrap();
        assert!((g.expectation(&p("XXX")).unwrap() - 1.0).abs() < 1e-12);
        assert!(g.expectation(&p("Z11")).unwrap().abs() < 1e-12);
        assert!((g.expectation(&p("ZZ1")).unwrap() - 1.0).abs() < 1e-12);
        let v = g.vector().unwrap();
        assert!((v[0].re - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15 && (v[7].re - v[0].re).abs() < 1e-15);
    }

    #[test]
    fn cluster_table() {
        let s = c4();
        for t in ["1111", "XZ1Z", "ZXZ1", "1ZXZ", "Z1ZX", "YYZZ", "X1X1", "1X1X", "-YXY1"] {
            assert!((s.expectation(&p(t)).unwrap() - 1.0).abs() < 1e-12, "{t}");
        }
        // full stabilizer group: 16 products of the four generators
        let gens = [p("XZ1Z"), p("ZXZ1"), p("1ZXZ"), p("Z1ZX")];
        for mask in 0..16u32 {
            let mut acc = PauliString::identity(4).unwrap();
            for (k, g) in gens.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    acc = acc.multiply(g).unwrap();
                }
            }
            assert!((s.expectation(&acc).unwrap() - 1.0).abs() < 1e-12, "{acc}");
        }
    }

    #[test]
    fn single_vertex_is_plus() {
        let s = DenseState::graph_state(&Graph::empty(1).unwrap()).unwrap();
        assert!((s.expectation(&p("X")).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dicke_states() {
        let d = DenseState::dicke(3, 1).unwrap();
        let v = d.vector().unwrap();
        let a = 1.0 / libm::sqrt(3.0);
        for (i, x) in v.iter().enumerate() {
            let want = if [1, 2, 4].contains(&i) { a } else { 0.0 };
            assert!((x.re - want).abs() < 1e-12);
        }
        assert_eq!(DenseState::dicke(3, 0).unwrap(), DenseState::zeros(3).unwrap());
        for n in 1..=10 {
            for k in 0..=n {
                assert!((DenseState::dicke(n, k).unwrap().vector().unwrap().norm() - 1.0).abs() < 1e-12);
            }
        }
        assert!(DenseState::dicke(3, 4).is_err());
    }

    #[test]
    fn white_noise_cases() {
        let g = DenseState::ghz(3).unwrap();
        let same = g.white_noise(1.0).unwrap();
        assert!((same.density_matrix().unwrap() - g.density_matrix().unwrap()).norm() < 1e-14);
        let mixed = g.white_noise(0.0).unwrap();
        for t in ["XXX", "Z11", "ZZ1", "YXY"] {
            assert!(mixed.expectation(&p(t)).unwrap().abs() < 1e-14);
        }
        for pv in [0.1, 0.5, 0.93] {
            let s = g.white_noise(pv).unwrap();
            assert!((s.expectation(&p("XXX")).unwrap() - pv).abs() < 1e-12);
            let f = s.fidelity(&g).unwrap();
            assert!((f - (pv + (1.0 - pv) / 8.0)).abs() < 1e-12);
        }
        assert!(g.white_noise(1.5).is_err());
    }

    #[test]
    fn fidelities() {
        let g = DenseState::ghz(3).unwrap();
        assert!((g.fidelity(&g).unwrap() - 1.0).abs() < 1e-12);
        assert!((c4().fidelity(&DenseState::zeros(4).unwrap()).unwrap() - 1.0 / 16.0).abs() < 1e-12);
        assert_eq!(g.fidelity(&g.to_mixed().unwrap()), Err(Error::NotPure));
    }

    #[test]
    fn cluster_overlap_with_zero_string() {
        // the amplitude of every basis string is ±1/4, so |<0000|C4>|^2 = 1/16
        let amp = c4().vector().unwrap()[0];
        assert!((amp.re - 0.25).abs() < 1e-15);
    }

    #[test]
    fn partial_transposes() {
        assert!(DenseState::zeros(3).unwrap().partial_transpose_min_eig(&[0]).unwrap() >= -1e-12);
        assert!(DenseState::dicke(3, 1).unwrap().partial_transpose_min_eig(&[0]).unwrap() < -1e-3);
        let s = DenseState::singlet().partial_transpose_min_eig(&[0]).unwrap();
        assert!((s + 0.5).abs() < 1e-12);
        assert!(DenseState::singlet().partial_transpose_min_eig(&[0, 1]).is_err());
    }

    #[test]
    fn partial_traces() {
        let g = DenseState::ghz(3).unwrap();
        let r = g.partial_trace(&[0, 1]).unwrap().density_matrix().unwrap();
        let mut want = DMatrix::from_element(4, 4, ZERO);
        want[(0, 0)] = Complex64::new(0.5, 0.0);
        want[(3, 3)] = Complex64::new(0.5, 0.0);
        assert!((r - want).norm() < 1e-14);
        assert_eq!(g.partial_trace(&[0, 1, 2]).unwrap(), g);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = DenseState::random_mixed(vec![2], 2, &mut rng).unwrap();
        let b = DenseState::random_pure(vec![3], &mut rng).unwrap();
        let ab = a.tensor(&b).unwrap();
        let ra = ab.partial_trace(&[0]).unwrap().density_matrix().unwrap();
        let rb = ab.partial_trace(&[1]).unwrap().density_matrix().unwrap();
        assert!((ra - a.density_matrix().unwrap()).norm() < 1e-12);
        assert!((rb - b.density_matrix().unwrap()).norm() < 1e-12);
        assert!(g.partial_trace(&[0, 0]).is_err());
        assert!(g.partial_trace(&[]).is_err());
    }

    #[test]
    fn permute_reverses_order() {
        let s = DenseState::basis(vec![2, 3], &[1, 2]).unwrap();
        assert_eq!(s.permute_parties(&[1, 0]).unwrap(), DenseState::basis(vec![3, 2], &[2, 1]).unwrap());
    }

    #[test]
    fn density_validation() {
        let mut m = DMatrix::from_element(2, 2, ZERO);
        m[(0, 0)] = Complex64::new(1.5, 0.0);
        m[(1, 1)] = Complex64::new(-0.5, 0.0);
        assert!(DenseState::from_density(vec![2], m).is_err());
        assert!(DenseState::from_vector(vec![2], DVector::from_element(2, Complex64::new(1.0, 0.0))).is_err());
        assert!(DenseState::ghz(13).is_err());
        assert!(DenseState::maximally_mixed(vec![2; 11]).is_err());
    }

    fn pauli_strategy(n: usize) -> impl Strategy<Value = PauliString> {
        (0u64..(1 << n), 0u64..(1 << n), any::<bool>()).prop_map(move |(x, z, neg)| {
            let s = PauliString::from_masks(n, x, z, crate::pauli::Phase::ONE).unwrap();
            if neg {
                s.negated()
            } else {
                s
            }
        })
    }

    proptest! {
        #[test]
        fn bit_action_matches_dense_matrix(n in 1usize..=4, seed in any::<u64>(), idx in any::<prop::sample::Index>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let rho = DenseState::random_mixed(vec![2; n], 3, &mut rng).unwrap();
            let psi = DenseState::random_pure(vec![2; n], &mut rng).unwrap();
            let x = idx.index(1 << n) as u64;
            let z = (seed >> 8) & ((1 << n) - 1);
            let s = PauliString::from_masks(n, x, z, crate::pauli::Phase::ONE).unwrap();
            let m = kron_oracle(&s);
            prop_assert!((pauli_matrix(&s).unwrap() - &m).norm() < 1e-12);
            for st in [&rho, &psi] {
                let want = st.expectation_operator(&m).unwrap();
                let got = st.expectation_complex(&s).unwrap();
                prop_assert!((want - got).norm() < 1e-10);
                prop_assert!(got.im.abs() < 1e-10);
            }
        }

        #[test]
        fn graph_generators_stabilize(n in 1usize..=10, edges in any::<u64>()) {
            let mut g = Graph::empty(n).unwrap();
            let mut k = 0;
            for j in 1..n {
                for i in 0..j {
                    if edges >> (k % 64) & 1 == 1 {
                        g.add_edge(i, j).unwrap();
                    }
                    k += 1;
                }
            }
            let s = DenseState::graph_state(&g).unwrap();
            for v in 0..n {
                let gen = PauliString::from_masks(n, 1 << v, g.neighbors(v), crate::pauli::Phase::ONE).unwrap();
                prop_assert!((s.expectation(&gen).unwrap() - 1.0).abs() < 1e-10);
            }
            prop_assert!((s.fidelity(&s).unwrap() - 1.0).abs() < 1e-10);
        }

        #[test]
        fn partial_trace_matches_padded_operator(seed in any::<u64>(), q in pauli_strategy(2)) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let s = DenseState::random_mixed(vec![2; 4], 2, &mut rng).unwrap();
            let keep = [3usize, 1];
            let reduced = s.partial_trace(&keep).unwrap();
            let padded = q.embed(4, &keep).unwrap();
            prop_assert!((reduced.expectation(&q).unwrap() - s.expectation(&padded).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn full_stabilizer_projector_sums_to_one() {
        // (1/2^N) sum over the stabilizer group of <S> equals the fidelity
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2)]).unwrap();
        let s = DenseState::graph_state(&g).unwrap();
        let gens: Vec<PauliString> =
            (0..5).map(|v| PauliString::from_masks(5, 1 << v, g.neighbors(v), crate::pauli::Phase::ONE).unwrap()).collect();
        let mut total = 0.0;
        for mask in 0..32u32 {
            let mut acc = PauliString::identity(5).unwrap();
            for (k, gen) in gens.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    acc = acc.multiply(gen).unwrap();
                }
            }
            total += s.expectation(&acc).unwrap();
        }
        assert!((total / 32.0 - 1.0).abs() < 1e-12);
    }
}
