//! Permutational symmetry and antisymmetry: flip operators, projectors,
//! symmetry tests and network verdicts for (anti)symmetric states.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::states::{min_eigenvalue, Amplitudes, DenseState, SLACK};

/// Largest number of parties for which the full symmetrizer is averaged.
pub const MAX_SYMMETRIZER_PARTIES: usize = 6;
/// Dimension cap for explicit projector matrices.
pub const MAX_PROJECTOR_DIM: usize = 4096;
/// Frobenius tolerance for symmetry tests.
pub const SYMMETRY_TOL: f64 = 1e-9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Symmetric,
    Antisymmetric,
}

impl Sign {
    fn value(self) -> f64 {
        match self {
            Sign::Symmetric => 1.0,
            Sign::Antisymmetric => -1.0,
        }
    }
}

fn equal_dims(dims: &[usize]) -> Result<()> {
    match dims.iter().position(|&d| d != dims[0]) {
        Some(j) => Err(Error::UnequalLocalDims(0, j)),
        None => Ok(()),
    }
}

/// For every basis index, the index whose digits are those of the input with
/// party `k` taking the digit of party `perm[k]`.
fn permutation_map(dims: &[usize], perm: &[usize]) -> Vec<usize> {
    let n = dims.len();
    let total: usize = dims.iter().product();
    let mut strides = vec![1usize; n];
    for k in (0..n.saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * dims[k + 1];
    }
    let mut digits = vec![0usize; n];
    (0..total)
        .map(|mut idx| {
            for k in (0..n).rev() {
                digits[k] = idx % dims[k];
                idx /= dims[k];
            }
            (0..n).map(|k| digits[perm[k]] * strides[k]).sum()
        })
        .collect()
}

fn transposition(n: usize, i: usize, j: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.swap(i, j);
    p
}

fn permutation_matrix(map: &[usize]) -> DMatrix<Complex64> {
    let d = map.len();
    let mut m = DMatrix::from_element(d, d, ZERO);
    for (i, &j) in map.iter().enumerate() {
        m[(j, i)] = ONE;
    }
    m
}

fn check_parties(dims: &[usize], parties: &[usize]) -> Result<()> {
    for &p in parties {
        if p >= dims.len() {
            return Err(Error::BadSubset(alloc::format!("party {p} out of range for {} parties", dims.len())));
        }
    }
    Ok(())
}

/// `F_ij = sum |..a..b..><..b..a..|` exchanging parties `i` and `j`.
pub fn flip_operator(dims: &[usize], i: usize, j: usize) -> Result<DMatrix<Complex64>> {
    check_parties(dims, &[i, j])?;
    if dims[i] != dims[j] {
        return Err(Error::UnequalLocalDims(i, j));
    }
    let total: usize = dims.iter().product();
    if total > MAX_PROJECTOR_DIM {
        return Err(Error::DimensionCap { dim: total, cap: MAX_PROJECTOR_DIM });
    }
    Ok(permutation_matrix(&permutation_map(dims, &transposition(dims.len(), i, j))))
}

fn permutations(n: usize) -> Vec<(Vec<usize>, f64)> {
    // Heap's algorithm, tracking the sign
    let mut out = Vec::new();
    let mut a: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    let mut sign = 1.0;
    out.push((a.clone(), sign));
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            sign = -sign;
            out.push((a.clone(), sign));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// Projector onto the totally symmetric or antisymmetric subspace, averaged
/// over all `N!` permutation operators.
pub fn symmetric_projector(dims: &[usize], sign: Sign) -> Result<DMatrix<Complex64>> {
    if dims.is_empty() {
        return Err(Error::Dimension("no parties".into()));
    }
    equal_dims(dims)?;
    let n = dims.len();
    if n > MAX_SYMMETRIZER_PARTIES {
        return Err(Error::SearchCap(alloc::format!("symmetrizer limited to {MAX_SYMMETRIZER_PARTIES} parties")));
    }
    let total: usize = dims.iter().product();
    if total > MAX_PROJECTOR_DIM {
        return Err(Error::DimensionCap { dim: total, cap: MAX_PROJECTOR_DIM });
    }
    let perms = permutations(n);
    let weight = 1.0 / perms.len() as f64;
    let mut m = DMatrix::from_element(total, total, ZERO);
    for (p, s) in &perms {
        let w = match sign {
            Sign::Symmetric => weight,
            Sign::Antisymmetric => weight * s,
        };
        for (i, &j) in permutation_map(dims, p).iter().enumerate() {
            m[(j, i)] += Complex64::new(w, 0.0);
        }
    }
    Ok(m)
}

/// Frobenius norm of `F_ij s - sign s` (vector or density matrix).
fn flip_residual(s: &DenseState, i: usize, j: usize, sign: Sign) -> f64 {
    let map = permutation_map(s.dims(), &transposition(s.num_parties(), i, j));
    let sv = sign.value();
    match s.amplitudes() {
        Amplitudes::Pure(v) => libm::sqrt(map.iter().enumerate().map(|(k, &f)| (v[f] - v[k] * sv).norm_sqr()).sum::<f64>()),
        Amplitudes::Mixed(m) => {
            let d = m.nrows();
            let mut acc = 0.0;
            for (r, &f) in map.iter().enumerate() {
                for c in 0..d {
                    acc += (m[(f, c)] - m[(r, c)] * sv).norm_sqr();
                }
            }
            libm::sqrt(acc)
        }
    }
}

/// Largest residual over the adjacent transpositions, which generate the
/// full permutation group; zero exactly when `Pi rho Pi = rho`.
pub fn symmetry_residual(s: &DenseState, sign: Sign) -> Result<f64> {
    equal_dims(s.dims())?;
    let n = s.num_parties();
    Ok((0..n.saturating_sub(1)).map(|k| flip_residual(s, k, k + 1, sign)).fold(0.0, f64::max))
}

pub fn is_perm_symmetric(s: &DenseState) -> Result<bool> {
    Ok(symmetry_residual(s, Sign::Symmetric)? <= SYMMETRY_TOL)
}

pub fn is_antisymmetric(s: &DenseState) -> Result<bool> {
    Ok(s.num_parties() >= 2 && symmetry_residual(s, Sign::Antisymmetric)? <= SYMMETRY_TOL)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairLift {
    pub pair: (usize, usize),
    /// Sign of the two-party marginal under the flip, if it has one.
    pub marginal: Option<Sign>,
    /// Whether the global state has the same sign under the flip.
    pub global: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LiftReport {
    pub pairs: Vec<PairLift>,
    /// Every (anti)symmetric marginal lifted to the global state.
    pub lifts: bool,
    /// The transpositions generate the full permutation group.
    pub generates_full_group: bool,
}

/// Check each listed two-party marginal for (anti)symmetry, confirm the
/// global state inherits it, and whether the pairs generate `S_N` (the pair
/// graph is connected).
pub fn marginal_symmetry_lift(s: &DenseState, pairs: &[(usize, usize)]) -> Result<LiftReport> {
    let n = s.num_parties();
    let mut out = Vec::with_capacity(pairs.len());
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &(i, j) in pairs {
        check_parties(s.dims(), &[i, j])?;
        if i == j {
            return Err(Error::BadSubset(alloc::format!("pair ({i}, {i}) repeats a party")));
        }
        if s.dims()[i] != s.dims()[j] {
            return Err(Error::UnequalLocalDims(i, j));
        }
        let m = s.partial_trace(&[i, j])?;
        let marginal = [Sign::Symmetric, Sign::Antisymmetric].into_iter().find(|&sg| flip_residual(&m, 0, 1, sg) <= SYMMETRY_TOL);
        let global = marginal.is_some_and(|sg| flip_residual(s, i, j, sg) <= SYMMETRY_TOL);
        out.push(PairLift { pair: (i, j), marginal, global });
        let (ri, rj) = (root(&mut parent, i), root(&mut parent, j));
        parent[ri] = rj;
    }
    let r0 = root(&mut parent, 0);
    let generates_full_group = (0..n).all(|v| root(&mut parent, v) == r0);
    let lifts = out.iter().all(|p| p.marginal.is_none() || p.global);
    Ok(LiftReport { pairs: out, lifts, generates_full_group })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductEvidence {
    /// Pure state with every single-party marginal pure.
    PureProduct,
    /// Diagonal in the product basis.
    Diagonal,
    /// Every eigenvector with nonzero weight is a product vector.
    ProductEigenbasis,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Evidence {
    Antisymmetric,
    NptCut { subset: Vec<usize>, min_eigenvalue: f64 },
    AllPpt,
    ProductFound(ProductEvidence),
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    NetworkInfeasible,
    FeasibleFullySeparable,
    Inconclusive,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryVerdict {
    pub symmetric: bool,
    pub antisymmetric: bool,
    pub evidence: Evidence,
    pub verdict: Verdict,
}

fn is_product_vector(dims: &[usize], v: &DVector<Complex64>) -> Result<bool> {
    let psi = DenseState::from_unnormalized(dims.to_vec(), v.clone())?;
    for k in 0..dims.len() {
        if (psi.partial_trace(&[k])?.purity() - 1.0).abs() > 1e-9 {
            return Ok(false);
        }
    }
    Ok(true)
}

fn product_evidence(s: &DenseState) -> Result<Option<ProductEvidence>> {
    if let Some(v) = s.vector() {
        return Ok(is_product_vector(s.dims(), v)?.then_some(ProductEvidence::PureProduct));
    }
    let rho = s.density_matrix()?;
    let d = rho.nrows();
    let off: f64 = (0..d).flat_map(|i| (0..d).filter(move |&j| j != i).map(move |j| (i, j))).map(|ij| rho[ij].norm_sqr()).sum();
    if libm::sqrt(off) <= SYMMETRY_TOL {
        return Ok(Some(ProductEvidence::Diagonal));
    }
    let eig = rho.symmetric_eigen();
    for (k, &w) in eig.eigenvalues.iter().enumerate() {
        if w.abs() <= 1e-10 {
            continue;
        }
        let v: DVector<Complex64> = eig.eigenvectors.column(k).into_owned();
        if !is_product_vector(s.dims(), &v)? {
            return Ok(None);
        }
    }
    Ok(Some(ProductEvidence::ProductEigenbasis))
}

/// Verdict for networks of `N` parties whose sources reach at most
/// `arity_cap <= N - 1` of them. PPT is the entanglement certificate; the
/// first `k` parties suffice as cuts for a symmetric state.
pub fn observation2_verdict(s: &DenseState, arity_cap: usize) -> Result<SymmetryVerdict> {
    let n = s.num_parties();
    if n < 2 {
        return Err(Error::BadSubset("at least two parties required".into()));
    }
    if arity_cap == 0 || arity_cap > n - 1 {
        return Err(Error::ArityCap { cap: arity_cap, max: n - 1 });
    }
    equal_dims(s.dims())?;
    let symmetric = is_perm_symmetric(s)?;
    let antisymmetric = is_antisymmetric(s)?;
    let (evidence, verdict) = if antisymmetric {
        (Evidence::Antisymmetric, Verdict::NetworkInfeasible)
    } else if !symmetric {
        (Evidence::None, Verdict::NotApplicable)
    } else {
        let mut npt = None;
        for k in 1..=n / 2 {
            let subset: Vec<usize> = (0..k).collect();
            let e = min_eigenvalue(&s.partial_transpose(&subset)?);
            if e < -SLACK {
                npt = Some((subset, e));
                break;
            }
        }
        match npt {
            Some((subset, e)) => (Evidence::NptCut { subset, min_eigenvalue: e }, Verdict::NetworkInfeasible),
            None => match product_evidence(s)? {
                Some(p) => (Evidence::ProductFound(p), Verdict::FeasibleFullySeparable),
                None => (Evidence::AllPpt, Verdict::Inconclusive),
            },
        }
    };
    Ok(SymmetryVerdict { symmetric, antisymmetric, evidence, verdict })
}

/// Three `|Phi+>` pairs on the triangle, each node holding two qubits merged
/// into one ququart as `|ij> -> |2i + j>`: invariant under cyclic shifts of
/// the nodes only.
pub fn cyclic_triangle_state() -> DenseState {
    // node X = (X1, X2); pairs A2-B1, B2-C1, C2-A1
    let mut v = DVector::from_element(64, ZERO);
    let amp = Complex64::new(1.0 / libm::sqrt(8.0), 0.0);
    for x in 0..2usize {
        for y in 0..2usize {
            for z in 0..2usize {
                // A2 = B1 = x, B2 = C1 = y, C2 = A1 = z
                let a = 2 * z + x;
                let b = 2 * x + y;
                let c = 2 * y + z;
                v[16 * a + 4 * b + c] = amp;
            }
        }
    }
    DenseState::from_vector(vec![4, 4, 4], v).expect("normalized")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fro(m: &DMatrix<Complex64>) -> f64 {
        m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    fn rank(m: &DMatrix<Complex64>) -> usize {
        m.clone().symmetric_eigenvalues().iter().filter(|e| e.abs() > 1e-9).count()
    }

    #[test]
    fn flip_identities() {
        let d = [2, 2, 2];
        let (fab, fbc, fac) = (flip_operator(&d, 0, 1).unwrap(), flip_operator(&d, 1, 2).unwrap(), flip_operator(&d, 0, 2).unwrap());
        assert!(fro(&(&fab * &fbc * &fab - &fac)) < 1e-12);
        assert!(fro(&(&fab * &fab - DMatrix::identity(8, 8))) < 1e-12);
        assert!(fro(&(fab.adjoint() - &fab)) < 1e-12);
        let f = flip_operator(&[2, 2], 0, 1).unwrap();
        let e = DenseState::singlet().expectation_operator(&f).unwrap();
        assert!((e.re + 1.0).abs() < 1e-12);
        assert_eq!(flip_operator(&[2, 3], 0, 1), Err(Error::UnequalLocalDims(0, 1)));
    }

    #[test]
    fn flip_matches_swapped_basis() {
        // F |0 1 2> = |2 1 0> on three qutrits
        let d = [3, 3, 3];
        let f = flip_operator(&d, 0, 2).unwrap();
        let src = 3 + 2;
        let dst = 2 * 9 + 3;
        assert_eq!(f[(dst, src)], ONE);
        assert_eq!(f.column(src).iter().filter(|z| **z != ZERO).count(), 1);
    }

    #[test]
    fn projector_ranks() {
        let p = symmetric_projector(&[2, 2, 2], Sign::Symmetric).unwrap();
        assert!(fro(&(&p * &p - &p)) < 1e-12);
        assert_eq!(rank(&p), 4);
        assert_eq!(rank(&symmetric_projector(&[2, 2, 2], Sign::Antisymmetric).unwrap()), 0);
        assert_eq!(rank(&symmetric_projector(&[3, 3], Sign::Antisymmetric).unwrap()), 3);
        assert_eq!(rank(&symmetric_projector(&[3, 3, 3], Sign::Symmetric).unwrap()), 10);
        let plus = symmetric_projector(&[3, 3], Sign::Symmetric).unwrap();
        let minus = symmetric_projector(&[3, 3], Sign::Antisymmetric).unwrap();
        assert!(fro(&(plus + minus - DMatrix::identity(9, 9))) < 1e-12);
        assert!(symmetric_projector(&[2, 3], Sign::Symmetric).is_err());
    }

    #[test]
    fn symmetry_detection() {
        assert!(is_perm_symmetric(&DenseState::dicke(3, 1).unwrap()).unwrap());
        assert!(is_perm_symmetric(&DenseState::ghz(3).unwrap()).unwrap());
        assert!(is_antisymmetric(&DenseState::singlet()).unwrap());
        assert!(!is_perm_symmetric(&DenseState::singlet()).unwrap());
        assert!(!is_perm_symmetric(&cyclic_triangle_state()).unwrap());
    }

    #[test]
    fn residual_agrees_with_projector() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let pi = symmetric_projector(&[2, 2, 2], Sign::Symmetric).unwrap();
        for rank_k in 1..=3 {
            let s = DenseState::random_mixed(vec![2; 3], rank_k, &mut rng).unwrap();
            let rho = s.density_matrix().unwrap();
            let sym = &pi * &rho * &pi;
            let tr = sym.trace();
            let proj = DenseState::from_density(vec![2; 3], sym.unscale(tr.re)).unwrap();
            assert!(is_perm_symmetric(&proj).unwrap());
            assert!(!is_perm_symmetric(&s).unwrap());
            // every eigenvector in the support is symmetric
            let eig = proj.density_matrix().unwrap().symmetric_eigen();
            for (k, &w) in eig.eigenvalues.iter().enumerate() {
                if w > 1e-9 {
                    let v = eig.eigenvectors.column(k).into_owned();
                    assert!(fro(&DMatrix::from_column_slice(8, 1, (&pi * &v - &v).as_slice())) < 1e-9);
                }
            }
            let lift = marginal_symmetry_lift(&proj, &[(0, 1), (1, 2)]).unwrap();
            assert!(lift.lifts && lift.generates_full_group);
        }
    }

    #[test]
    fn lifts() {
        let r = marginal_symmetry_lift(&DenseState::ghz(3).unwrap(), &[(0, 1), (1, 2)]).unwrap();
        assert!(r.lifts && r.generates_full_group);
        assert!(r.pairs.iter().all(|p| p.marginal == Some(Sign::Symmetric) && p.global));
        let r = marginal_symmetry_lift(&DenseState::ghz(4).unwrap(), &[(0, 1)]).unwrap();
        assert!(r.lifts && !r.generates_full_group);
        let singlet_pair = DenseState::singlet().tensor(&DenseState::zeros(1).unwrap()).unwrap();
        let r = marginal_symmetry_lift(&singlet_pair, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(r.pairs[0].marginal, Some(Sign::Antisymmetric));
        assert!(r.pairs[0].global);
        assert_eq!(r.pairs[1].marginal, None);
    }

    #[test]
    fn verdicts() {
        let v = observation2_verdict(&DenseState::dicke(3, 1).unwrap(), 2).unwrap();
        assert_eq!(v.verdict, Verdict::NetworkInfeasible);
        assert!(matches!(v.evidence, Evidence::NptCut { .. }));
        let v = observation2_verdict(&DenseState::zeros(3).unwrap(), 2).unwrap();
        assert_eq!((v.verdict, v.evidence), (Verdict::FeasibleFullySeparable, Evidence::ProductFound(ProductEvidence::PureProduct)));
        // the identity has full support, so it is not symmetric in the PiρPi = ρ sense
        let v = observation2_verdict(&DenseState::maximally_mixed(vec![2; 3]).unwrap(), 2).unwrap();
        assert_eq!(v.verdict, Verdict::NotApplicable);
        let (zero, one) = (DenseState::basis(vec![2; 3], &[0, 0, 0]).unwrap(), DenseState::basis(vec![2; 3], &[1, 1, 1]).unwrap());
        let classical = DenseState::mixture(&[(0.5, &zero), (0.5, &one)]).unwrap();
        let v = observation2_verdict(&classical, 2).unwrap();
        assert_eq!((v.verdict, v.evidence), (Verdict::FeasibleFullySeparable, Evidence::ProductFound(ProductEvidence::Diagonal)));
        let v = observation2_verdict(&DenseState::singlet(), 1).unwrap();
        assert_eq!(v.verdict, Verdict::NetworkInfeasible);
        let v = observation2_verdict(&cyclic_triangle_state(), 2).unwrap();
        assert_eq!(v.verdict, Verdict::NotApplicable);
        assert_eq!(observation2_verdict(&DenseState::zeros(3).unwrap(), 3), Err(Error::ArityCap { cap: 3, max: 2 }));
    }

    #[test]
    fn cyclic_state_amplitudes() {
        let s = cyclic_triangle_state();
        let v = s.vector().unwrap();
        let listed = [[0, 0, 0], [0, 1, 2], [1, 2, 0], [2, 0, 1], [1, 3, 2], [3, 2, 1], [2, 1, 3], [3, 3, 3]];
        for [a, b, c] in listed {
            assert!((v[16 * a + 4 * b + c].re - 1.0 / 8f64.sqrt()).abs() < 1e-12);
        }
        let shifted = s.permute_parties(&[1, 2, 0]).unwrap();
        assert!((shifted.fidelity(&s).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn heap_permutations() {
        let ps = permutations(4);
        assert_eq!(ps.len(), 24);
        assert_eq!(ps.iter().filter(|p| p.1 > 0.0).count(), 12);
        for (p, s) in ps {
            // sign from inversion count
            let inv = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
            assert_eq!(s, if inv % 2 == 0 { 1.0 } else { -1.0 });
        }
    }
}
