//! Fidelity bounds for triangle-network states against GHZ and for square
//! network states against the ring cluster state.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, Matrix3};

use crate::error::{Error, Result};
use crate::optimize::{maximize, pattern_search, Settings};
use crate::pauli::PauliString;
use crate::states::{DenseState, SLACK};

pub const CM_ONLY_ANALYTIC: f64 = 0.763_932_022_500_210_3; // 3 - sqrt 5
pub const CM_EXTRA_ANALYTIC: f64 = 0.75;
pub const GISIN_EXTRA_ANALYTIC: f64 = core::f64::consts::FRAC_1_SQRT_2;
pub const CLUSTER_PAPER_BOUND: f64 = 0.737684;

/// Z moments of the residual state in `F |GHZ><GHZ| + (1 - F) rho~`:
/// `a, b, c` single-party, `d, e, f` for `AB, AC, BC`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationVariables {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
}

impl CorrelationVariables {
    pub const ZERO: Self = Self { a: 0.0, b: 0.0, c: 0.0, d: 0.0, e: 0.0, f: 0.0 };

    pub fn symmetric(single: f64, pair: f64) -> Self {
        Self { a: single, b: single, c: single, d: pair, e: pair, f: pair }
    }

    fn from_slice(v: &[f64]) -> Self {
        Self { a: v[0], b: v[1], c: v[2], d: v[3], e: v[4], f: v[5] }
    }

    pub fn in_box(&self) -> bool {
        [self.a, self.b, self.c, self.d, self.e, self.f].iter().all(|x| (-1.0..=1.0).contains(x))
    }

    /// `[E_A, E_B, E_C, E_AB, E_AC, E_BC]` of the mixture with GHZ weight `F`.
    pub fn moments(&self, fidelity: f64) -> [f64; 6] {
        let r = 1.0 - fidelity;
        [self.a * r, self.b * r, self.c * r, fidelity + self.d * r, fidelity + self.e * r, fidelity + self.f * r]
    }
}

/// `Gamma_ij = <Z_i Z_j> - <Z_i><Z_j>` from the six Z moments.
pub fn covariance_from_moments(m: &[f64; 6]) -> Matrix3<f64> {
    let (ea, eb, ec) = (m[0], m[1], m[2]);
    Matrix3::new(
        1.0 - ea * ea,
        m[3] - ea * eb,
        m[4] - ea * ec,
        m[3] - ea * eb,
        1.0 - eb * eb,
        m[5] - eb * ec,
        m[4] - ea * ec,
        m[5] - eb * ec,
        1.0 - ec * ec,
    )
}

pub fn z_moments(s: &DenseState) -> Result<[f64; 6]> {
    if s.num_parties() != 3 || !s.is_qubits() {
        return Err(Error::Dimension("three qubits required".into()));
    }
    let mut out = [0.0; 6];
    for (slot, text) in out.iter_mut().zip(["Z11", "1Z1", "11Z", "ZZ1", "Z1Z", "1ZZ"]) {
        let p: PauliString = text.parse()?;
        *slot = s.expectation(&p)?;
    }
    Ok(out)
}

/// Covariance matrix of the Z outcomes of a three-qubit state.
pub fn covariance_matrix_z(s: &DenseState) -> Result<Matrix3<f64>> {
    Ok(covariance_from_moments(&z_moments(s)?))
}

/// Diagonal kept, off-diagonal entries replaced by `-|Gamma_ij|`.
pub fn comparison_matrix(gamma: &DMatrix<f64>) -> DMatrix<f64> {
    DMatrix::from_fn(gamma.nrows(), gamma.ncols(), |i, j| if i == j { gamma[(i, j)] } else { -libm::fabs(gamma[(i, j)]) })
}

pub fn min_sym_eigenvalue(m: &DMatrix<f64>) -> f64 {
    m.clone().symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
}

/// Positive semidefinite comparison matrix; `false` excludes the state from
/// the triangle network without shared randomness.
pub fn itn_cm_check(gamma: &DMatrix<f64>) -> bool {
    min_sym_eigenvalue(&comparison_matrix(gamma)) >= -SLACK
}

fn cm_margin(m: &[f64; 6]) -> f64 {
    let g = covariance_from_moments(m);
    let cm = Matrix3::from_fn(|i, j| if i == j { g[(i, j)] } else { -libm::fabs(g[(i, j)]) });
    cm.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GisinReport {
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
}

/// `sum (1 + |E_X| + |E_Y| + E_XY)^2 <= 6 (1 + |E_A|)(1 + |E_B|)(1 + |E_C|)`
/// over the pairs `AB, AC, BC`; inputs ordered `E_A, E_B, E_C, E_AB, E_AC, E_BC`.
pub fn gisin_check(m: &[f64; 6]) -> Result<GisinReport> {
    if let Some(&v) = m.iter().find(|v| !(-1.0..=1.0).contains(*v)) {
        return Err(Error::OutOfRange { value: v, lo: -1.0, hi: 1.0 });
    }
    let (ea, eb, ec) = (libm::fabs(m[0]), libm::fabs(m[1]), libm::fabs(m[2]));
    let sq = |x: f64| x * x;
    let lhs = sq(1.0 + ea + eb + m[3]) + sq(1.0 + ea + ec + m[4]) + sq(1.0 + eb + ec + m[5]);
    let rhs = 6.0 * (1.0 + ea) * (1.0 + eb) * (1.0 + ec);
    Ok(GisinReport { lhs, rhs, satisfied: lhs <= rhs + SLACK })
}

fn extra_margin(v: &CorrelationVariables) -> f64 {
    let m1 = v.d - (libm::fabs(v.a + v.b) - 1.0);
    let m2 = v.e - (libm::fabs(v.a + v.c) - 1.0);
    let m3 = v.f - (libm::fabs(v.b + v.c) - 1.0);
    m1.min(m2).min(m3)
}

/// `d >= |a + b| - 1`, `e >= |a + c| - 1`, `f >= |b + c| - 1`.
pub fn extra_constraints_check(v: &CorrelationVariables) -> bool {
    extra_margin(v) >= -SLACK
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GhzMethod {
    CmOnly,
    CmExtra,
    GisinExtra,
}

impl GhzMethod {
    pub const ALL: [GhzMethod; 3] = [GhzMethod::CmOnly, GhzMethod::CmExtra, GhzMethod::GisinExtra];

    pub fn analytic(self) -> f64 {
        match self {
            GhzMethod::CmOnly => CM_ONLY_ANALYTIC,
            GhzMethod::CmExtra => CM_EXTRA_ANALYTIC,
            GhzMethod::GisinExtra => GISIN_EXTRA_ANALYTIC,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GhzMethod::CmOnly => "cm_only",
            GhzMethod::CmExtra => "cm_extra",
            GhzMethod::GisinExtra => "gisin_extra",
        }
    }
}

/// Smallest constraint margin of the method at fidelity `F`; nonnegative
/// exactly when the point is admissible.
pub fn ghz_margin(method: GhzMethod, fidelity: f64, v: &CorrelationVariables) -> f64 {
    let m = v.moments(fidelity);
    match method {
        GhzMethod::CmOnly => cm_margin(&m),
        GhzMethod::CmExtra => cm_margin(&m).min(extra_margin(v)),
        GhzMethod::GisinExtra => {
            let (ea, eb, ec) = (libm::fabs(m[0]), libm::fabs(m[1]), libm::fabs(m[2]));
            let sq = |x: f64| x * x;
            let lhs = sq(1.0 + ea + eb + m[3]) + sq(1.0 + ea + ec + m[4]) + sq(1.0 + eb + ec + m[5]);
            let rhs = 6.0 * (1.0 + ea) * (1.0 + eb) * (1.0 + ec);
            (rhs - lhs).min(extra_margin(v))
        }
    }
}

/// Which residual moments the feasibility search may vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GhzSearch {
    /// `a = b = c`, `d = e = f`; the optimum may be taken permutation
    /// symmetric because the target is.
    Symmetric,
    /// `a = b = c = 0`, `d = e = f`.
    SinglesZero,
    /// All six moments, from the symmetric grid optimum plus seeded random
    /// starts.
    Full { starts: usize, seed: u64 },
}

const GRID_STEP: f64 = 0.05;
const REFINE_STEP: f64 = 1e-10;

fn grid(step: f64) -> Vec<f64> {
    let k = libm::round(2.0 / step) as usize;
    (0..=k).map(|i| -1.0 + 2.0 * i as f64 / k as f64).collect()
}

fn best_symmetric(method: GhzMethod, fidelity: f64, singles_zero: bool) -> (CorrelationVariables, f64) {
    let singles = if singles_zero { vec![0.0] } else { grid(GRID_STEP) };
    let mut best = (CorrelationVariables::ZERO, f64::NEG_INFINITY);
    for &a in &singles {
        for &d in &grid(GRID_STEP) {
            let v = CorrelationVariables::symmetric(a, d);
            let s = ghz_margin(method, fidelity, &v);
            if s > best.1 {
                best = (v, s);
            }
        }
    }
    let start = [best.0.a, best.0.d];
    let score = |x: &[f64]| ghz_margin(method, fidelity, &CorrelationVariables::symmetric(if singles_zero { 0.0 } else { x[0] }, x[1]));
    let (x, s) = pattern_search(&score, &start, -1.0, 1.0, GRID_STEP / 2.0, REFINE_STEP);
    (CorrelationVariables::symmetric(if singles_zero { 0.0 } else { x[0] }, x[1]), s)
}

/// Most admissible residual moments at fidelity `F` and their margin.
pub fn ghz_feasibility(method: GhzMethod, fidelity: f64, search: GhzSearch) -> (CorrelationVariables, f64) {
    match search {
        GhzSearch::Symmetric => best_symmetric(method, fidelity, false),
        GhzSearch::SinglesZero => best_symmetric(method, fidelity, true),
        GhzSearch::Full { starts, seed } => {
            use rand::{Rng, SeedableRng};
            let (sym, s0) = best_symmetric(method, fidelity, false);
            let score = |x: &[f64]| ghz_margin(method, fidelity, &CorrelationVariables::from_slice(x));
            let mut best = (sym, s0);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut seeds: Vec<[f64; 6]> = vec![[sym.a, sym.b, sym.c, sym.d, sym.e, sym.f]];
            for _ in 0..starts {
                seeds.push(core::array::from_fn(|_| rng.random_range(-1.0..=1.0)));
            }
            for x0 in seeds {
                let (x, s) = pattern_search(&score, &x0, -1.0, 1.0, 0.25, 1e-6);
                if s > best.1 {
                    best = (CorrelationVariables::from_slice(&x), s);
                }
            }
            best
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GhzBound {
    pub method: GhzMethod,
    pub bound: f64,
    pub analytic: f64,
    /// Admissible residual moments at the bound.
    pub point: CorrelationVariables,
}

/// Supremum of the fidelities `F` for which admissible residual moments
/// exist, by bisection to 1e-9.
pub fn ghz_fidelity_bound_with(method: GhzMethod, search: GhzSearch) -> GhzBound {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut point = ghz_feasibility(method, 0.0, search).0;
    while hi - lo > 1e-9 {
        let mid = 0.5 * (lo + hi);
        let (v, s) = ghz_feasibility(method, mid, search);
        if s >= -1e-12 {
            lo = mid;
            point = v;
        } else {
            hi = mid;
        }
    }
    GhzBound { method, bound: lo, analytic: method.analytic(), point }
}

pub fn ghz_fidelity_bound(method: GhzMethod) -> GhzBound {
    ghz_fidelity_bound_with(method, GhzSearch::Symmetric)
}

/// Expectations of the five classes of ring-cluster stabilizers; the fourth
/// class has expectation `-Sigma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterVariables {
    pub theta: f64,
    pub lambda: f64,
    pub xi: f64,
    pub sigma: f64,
    pub omega: f64,
}

impl ClusterVariables {
    fn from_slice(v: &[f64]) -> Self {
        Self { theta: v[0], lambda: v[1], xi: v[2], sigma: v[3], omega: v[4] }
    }

    pub fn fidelity(&self) -> f64 {
        (1.0 + 4.0 * self.theta + 4.0 * self.lambda + 2.0 * self.xi - 4.0 * self.sigma + self.omega) / 16.0
    }

    /// Margins of `Xi^2 + Lambda^2 <= 1`, `Xi^2 + Theta^2 + Sigma^2 <= 1` and
    /// `2 T - 1 <= sqrt(1 - U^2)` for `T` in `Theta, Sigma`, `U` in `Lambda,
    /// Omega`.
    pub fn margins(&self) -> [f64; 6] {
        let root = |u: f64| libm::sqrt((1.0 - u * u).max(0.0));
        [
            1.0 - self.xi * self.xi - self.lambda * self.lambda,
            1.0 - self.xi * self.xi - self.theta * self.theta - self.sigma * self.sigma,
            root(self.lambda) - (2.0 * self.theta - 1.0),
            root(self.lambda) - (2.0 * self.sigma - 1.0),
            root(self.omega) - (2.0 * self.theta - 1.0),
            root(self.omega) - (2.0 * self.sigma - 1.0),
        ]
    }

    /// Averages over each stabilizer class of the ring cluster state.
    pub fn from_state(s: &DenseState) -> Result<Self> {
        if s.num_parties() != 4 || !s.is_qubits() {
            return Err(Error::Dimension("four qubits required".into()));
        }
        let avg = |list: &[&str]| -> Result<f64> {
            let mut acc = 0.0;
            for t in list {
                acc += s.expectation(&t.parse::<PauliString>()?)?;
            }
            Ok(acc / list.len() as f64)
        };
        Ok(Self {
            theta: avg(&["XZ1Z", "ZXZ1", "1ZXZ", "Z1ZX"])?,
            lambda: avg(&["YYZZ", "YZZY", "ZYYZ", "ZZYY"])?,
            xi: avg(&["X1X1", "1X1X"])?,
            sigma: avg(&["YXY1", "1YXY", "Y1YX", "XY1Y"])?,
            omega: avg(&["XXXX"])?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClusterConstraints {
    All,
    XiLambdaOnly,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterBound {
    pub bound: f64,
    pub point: ClusterVariables,
    pub starts: usize,
    pub converged: usize,
}

pub fn cluster_fidelity_bound_with(constraints: ClusterConstraints, settings: &Settings) -> Result<ClusterBound> {
    let objective = |v: &[f64]| ClusterVariables::from_slice(v).fidelity();
    let cons = |v: &[f64]| -> Vec<f64> {
        let m = ClusterVariables::from_slice(v).margins();
        match constraints {
            ClusterConstraints::All => m.to_vec(),
            ClusterConstraints::XiLambdaOnly => vec![m[0]],
            ClusterConstraints::None => Vec::new(),
        }
    };
    let o = maximize(5, -1.0, 1.0, &objective, &cons, settings).ok_or_else(|| Error::SearchCap("no feasible start".into()))?;
    Ok(ClusterBound { bound: o.value, point: ClusterVariables::from_slice(&o.x), starts: o.starts, converged: o.converged })
}

/// Largest fidelity with the ring cluster state compatible with the six
/// inflation constraints, from 64 seeded starts.
pub fn cluster_fidelity_bound() -> Result<ClusterBound> {
    cluster_fidelity_bound_with(ClusterConstraints::All, &Settings::default())
}
