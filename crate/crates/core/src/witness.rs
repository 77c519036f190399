//! Quadratic witnesses `sum_i <M_i>^2 <= 1` built from observables that
//! pairwise anticommute once lifted into an inflation.
//!
//! A term is either a single observable or a chain `L_1, ..., L_k` of
//! commuting dichotomic observables standing for their product, bounded
//! below by `sum <L_i> - (k - 1)` and clamped at zero.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graphs::{bits, Graph, TriangleCase, TriangleDecomposition};
use crate::network::{
    agrees_with_base, gamma_inflation, link_xi, pair_gamma, pivot_eta, square_xi, subsets_agree, tripartite_square_nu,
    Inflation, Network, NodeCopy,
};
use crate::pauli::{pairwise_anticommuting, Letter, PauliString, Phase};
use crate::states::{DenseState, SLACK};

pub const BOUND: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessTerm {
    Direct(PauliString),
    Chained(Vec<PauliString>),
}

impl WitnessTerm {
    pub fn observables(&self) -> &[PauliString] {
        match self {
            WitnessTerm::Direct(p) => core::slice::from_ref(p),
            WitnessTerm::Chained(links) => links,
        }
    }
}

/// Copy of every base node used when lifting one observable.
pub type CopyMap = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TermPlacement {
    /// The observable sits on copy `copies[q]` of node `q`.
    Direct { copies: CopyMap },
    /// Links are lifted into `chain`; their product lives on node copies of
    /// `chain` and is carried to the anticommuting inflation through the
    /// `target` pairs.
    Chained { chain: Inflation, links: Vec<CopyMap>, target: Vec<(NodeCopy, NodeCopy)> },
}

/// Inflation data establishing the bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessProof {
    /// Where the lifted observables pairwise anticommute.
    pub inflation: Inflation,
    pub placements: Vec<TermPlacement>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub name: String,
    pub n: usize,
    pub terms: Vec<WitnessTerm>,
    pub proof: Option<WitnessProof>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TermReport {
    pub observables: Vec<String>,
    pub expectations: Vec<f64>,
    /// `<P>` for direct terms, `sum <L_i> - (k - 1)` for chains.
    pub value: f64,
    /// Chains clamp at zero; direct terms are unchanged.
    pub clamped: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessReport {
    pub name: String,
    pub terms: Vec<TermReport>,
    pub lhs: f64,
    pub bound: f64,
    pub violated: bool,
    /// `bound - lhs`; negative when violated.
    pub slack: f64,
}

fn werr(msg: impl Into<String>) -> Error {
    Error::Witness(msg.into())
}

fn lift(p: &PauliString, infl: &Inflation, copies: &[usize]) -> Result<(PauliString, Vec<NodeCopy>)> {
    let n = p.num_qubits();
    if copies.len() != n {
        return Err(werr(format!("copy map has {} entries for {n} qubits", copies.len())));
    }
    if let Some(&k) = copies.iter().find(|&&k| k >= infl.copies()) {
        return Err(werr(format!("copy {k} out of range")));
    }
    let map: Vec<usize> = (0..n).map(|q| infl.qubit(NodeCopy::new(q, copies[q]))).collect();
    let lifted = p.embed(infl.num_qubits(), &map)?;
    let set = p.support_vec().into_iter().map(|q| NodeCopy::new(q, copies[q])).collect();
    Ok((lifted, set))
}

fn check_observable(p: &PauliString, n: usize) -> Result<()> {
    if p.num_qubits() != n {
        return Err(Error::QubitCountMismatch { left: p.num_qubits(), right: n });
    }
    if !p.is_hermitian() {
        return Err(werr(format!("{p} is not hermitian")));
    }
    Ok(())
}

impl Witness {
    pub fn new(name: impl Into<String>, n: usize, terms: Vec<WitnessTerm>, proof: Option<WitnessProof>) -> Result<Self> {
        if terms.is_empty() {
            return Err(werr("no terms"));
        }
        for t in &terms {
            if let WitnessTerm::Chained(links) = t {
                if links.len() < 2 {
                    return Err(werr("a chained term needs at least two links"));
                }
            }
            for p in t.observables() {
                check_observable(p, n)?;
            }
        }
        Ok(Self { name: name.into(), n, terms, proof })
    }

    /// Re-derive the bound: every lifted observable acts on a set whose
    /// marginal equals a base marginal (directly, or through the chain
    /// inflation for chained terms), chain links commute and multiply to the
    /// target, and the lifted observables pairwise anticommute. Returns them.
    pub fn validate(&self) -> Result<Vec<PauliString>> {
        let proof = self.proof.as_ref().ok_or_else(|| werr(format!("{} carries no inflation proof", self.name)))?;
        let anti = &proof.inflation;
        if anti.base().num_nodes() != self.n {
            return Err(werr(format!("network has {} nodes, witness acts on {} qubits", anti.base().num_nodes(), self.n)));
        }
        if proof.placements.len() != self.terms.len() {
            return Err(werr("one placement per term required"));
        }
        let mut lifted = Vec::with_capacity(self.terms.len());
        for (idx, (term, place)) in self.terms.iter().zip(&proof.placements).enumerate() {
            match (term, place) {
                (WitnessTerm::Direct(p), TermPlacement::Direct { copies }) => {
                    let (l, set) = lift(p, anti, copies)?;
                    if !agrees_with_base(anti, &set)? {
                        return Err(werr(format!("term {idx} ({p}) acts on a set whose marginal is not a base marginal")));
                    }
                    lifted.push(l);
                }
                (WitnessTerm::Chained(links), TermPlacement::Chained { chain, links: maps, target }) => {
                    if chain.base() != anti.base() {
                        return Err(werr("chain inflation and anticommuting inflation use different networks"));
                    }
                    if maps.len() != links.len() {
                        return Err(werr(format!("term {idx}: one copy map per link required")));
                    }
                    let mut lifted_links = Vec::with_capacity(links.len());
                    for (p, m) in links.iter().zip(maps) {
                        let (l, set) = lift(p, chain, m)?;
                        if !agrees_with_base(chain, &set)? {
                            return Err(werr(format!("term {idx}: link {p} does not act on a base marginal")));
                        }
                        lifted_links.push(l);
                    }
                    for (i, a) in lifted_links.iter().enumerate() {
                        if lifted_links[i + 1..].iter().any(|b| !a.commutes_unchecked(b)) {
                            return Err(werr(format!("term {idx}: chain links do not commute")));
                        }
                    }
                    let product = crate::pauli::product(&lifted_links)?;
                    let mut support: Vec<NodeCopy> = product.support_vec().into_iter().map(|q| chain.node_copy(q)).collect();
                    let mut from: Vec<NodeCopy> = target.iter().map(|t| t.0).collect();
                    support.sort();
                    from.sort();
                    if support != from {
                        return Err(werr(format!("term {idx}: target pairs do not cover the support of the chain product")));
                    }
                    let to: Vec<NodeCopy> = target.iter().map(|t| t.1).collect();
                    let from: Vec<NodeCopy> = target.iter().map(|t| t.0).collect();
                    if !subsets_agree(chain, &from, anti, &to)? {
                        return Err(werr(format!("term {idx}: chain target and its image have different marginals")));
                    }
                    let mut map = vec![0usize; chain.num_qubits()];
                    let mut spare = (0..anti.num_qubits()).filter(|q| !to.iter().any(|t| anti.qubit(*t) == *q));
                    for (q, slot) in map.iter_mut().enumerate() {
                        let nc = chain.node_copy(q);
                        *slot = match target.iter().find(|t| t.0 == nc) {
                            Some(t) => anti.qubit(t.1),
                            None => spare.next().unwrap_or(0),
                        };
                    }
                    let image = product.embed(anti.num_qubits(), &map)?;
                    if !image.is_hermitian() {
                        return Err(werr(format!("term {idx}: chain product is not hermitian")));
                    }
                    lifted.push(image);
                }
                _ => return Err(werr(format!("term {idx}: placement kind does not match the term"))),
            }
        }
        if !pairwise_anticommuting(&lifted)? {
            return Err(werr(format!("lifted observables of {} do not pairwise anticommute", self.name)));
        }
        Ok(lifted)
    }

    pub fn evaluate(&self, s: &DenseState) -> Result<WitnessReport> {
        if s.num_parties() != self.n {
            return Err(Error::Dimension(format!("witness acts on {} qubits, state has {} parties", self.n, s.num_parties())));
        }
        let mut expectations = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            expectations.push(t.observables().iter().map(|p| s.expectation(p)).collect::<Result<Vec<_>>>()?);
        }
        Ok(self.report_from(expectations))
    }

    fn report_from(&self, expectations: Vec<Vec<f64>>) -> WitnessReport {
        let mut terms = Vec::with_capacity(self.terms.len());
        let mut lhs = 0.0;
        for (t, ex) in self.terms.iter().zip(expectations) {
            let (value, clamped) = match t {
                WitnessTerm::Direct(_) => (ex[0], ex[0]),
                WitnessTerm::Chained(links) => {
                    let v = ex.iter().sum::<f64>() - (links.len() - 1) as f64;
                    (v, v.max(0.0))
                }
            };
            lhs += clamped * clamped;
            terms.push(TermReport { observables: t.observables().iter().map(|p| p.to_string()).collect(), expectations: ex, value, clamped });
        }
        WitnessReport { name: self.name.clone(), terms, lhs, bound: BOUND, violated: lhs > BOUND + SLACK, slack: BOUND - lhs }
    }
}

fn ps(s: &str) -> PauliString {
    s.parse().expect("static Pauli string")
}

/// `<D>^2 + (<Z_p Z_x> + <Z_p Z_y> - 1)^2 <= 1` on the triangle, where `p`
/// is the pivot and `x`, `y` the other two nodes. The chain lives in the
/// inflation rewiring the `xy` source, its product `Z_x Z_y` is moved to
/// `Z_x' Z_y` (or `Z_x Z_y'`) in the doubled triangle, where it must
/// anticommute with `D`.
pub fn ghz_triangle_witness_with(direct: PauliString, pivot: usize) -> Result<Witness> {
    if pivot > 2 {
        return Err(Error::QubitOutOfRange { qubit: pivot, n: 3 });
    }
    let others: Vec<usize> = (0..3).filter(|&v| v != pivot).collect();
    let (x, y) = (others[0], others[1]);
    let link = |a: usize, b: usize| PauliString::from_sparse(3, &[(a, Letter::Z), (b, Letter::Z)]);
    let links = vec![link(x, pivot)?, link(pivot, y)?];
    let base = Network::triangle();
    let chain = pair_gamma(&base, x, y)?;
    let tau = Inflation::identity(base, 2)?;
    let mut last = None;
    for moved in [x, y] {
        let target: Vec<(NodeCopy, NodeCopy)> =
            [x, y].iter().map(|&v| (NodeCopy::new(v, 0), NodeCopy::new(v, usize::from(v == moved)))).collect();
        let proof = WitnessProof {
            inflation: tau.clone(),
            placements: vec![
                TermPlacement::Direct { copies: vec![0; 3] },
                TermPlacement::Chained { chain: chain.clone(), links: vec![vec![0; 3]; 2], target },
            ],
        };
        let w = Witness::new(
            format!("ghz-triangle[{direct}]"),
            3,
            vec![WitnessTerm::Direct(direct), WitnessTerm::Chained(links.clone())],
            Some(proof),
        )?;
        match w.validate() {
            Ok(_) => return Ok(w),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("two attempts"))
}

/// `<XXX>^2 + (<ZZ1> + <1ZZ> - 1)^2 <= 1`.
pub fn ghz_triangle_witness() -> Witness {
    let mut w = ghz_triangle_witness_with(ps("XXX"), 1).expect("valid");
    w.name = "ghz-triangle".into();
    w
}

/// `<X_B X_D>^2 + <Z_B X_C Z_D>^2 + <X_A Y_B Y_D>^2 <= 1`, lifted to
/// `X_B'' X_D`, `Z_B' X_C Z_D` and `X_A Y_B Y_D` in the third-order
/// inflation of the square.
pub fn cluster_square_witness() -> Witness {
    let proof = WitnessProof {
        inflation: square_xi(),
        placements: vec![
            TermPlacement::Direct { copies: vec![0, 2, 0, 0] },
            TermPlacement::Direct { copies: vec![0, 1, 0, 0] },
            TermPlacement::Direct { copies: vec![0, 0, 0, 0] },
        ],
    };
    Witness::new(
        "cluster-square",
        4,
        vec![WitnessTerm::Direct(ps("1X1X")), WitnessTerm::Direct(ps("1ZXZ")), WitnessTerm::Direct(ps("XY1Y"))],
        Some(proof),
    )
    .expect("valid")
}

/// `<X_A X_C>^2 + <Y_A Y_B Z_C Z_D>^2 <= 1` from the doubled square, with
/// `X_A' X_C`.
pub fn cluster_square_tau_witness() -> Witness {
    let proof = WitnessProof {
        inflation: Inflation::identity(Network::square(), 2).expect("valid"),
        placements: vec![TermPlacement::Direct { copies: vec![1, 0, 0, 0] }, TermPlacement::Direct { copies: vec![0; 4] }],
    };
    Witness::new("cluster-square-tau", 4, vec![WitnessTerm::Direct(ps("X1X1")), WitnessTerm::Direct(ps("YYZZ"))], Some(proof))
        .expect("valid")
}

/// Graph-state generator `X_v Z_{N(v)}`.
pub fn generator(g: &Graph, v: usize) -> Result<PauliString> {
    if v >= g.n() {
        return Err(Error::VertexOutOfRange { vertex: v, n: g.n() });
    }
    PauliString::from_masks(g.n(), 1 << v, g.neighbors(v), Phase::ONE)
}

/// Chain `g_A g_B`, `g_B g_C` plus the partner fixed by `case`, for a graph
/// state on the complete network of bipartite sources.
pub fn theorem3_witness(g: &Graph, td: &TriangleDecomposition, case: TriangleCase) -> Result<Witness> {
    let (a, b, c) = td.triangle();
    let fresh = crate::graphs::triangle_decomposition(g, a, b, c)?;
    if fresh != *td {
        return Err(werr("triangle decomposition does not belong to this graph"));
    }
    if !td.satisfies(case) {
        return Err(Error::ConditionNotSatisfied { case: case.number(), a, b, c });
    }
    let n = g.n();
    let (ga, gb, gc) = (generator(g, a)?, generator(g, b)?, generator(g, c)?);
    let links = vec![ga.multiply(&gb)?, gb.multiply(&gc)?];
    let partner = match case {
        TriangleCase::One => gb,
        TriangleCase::Two => ga.multiply(&gb)?.multiply(&gc)?,
        TriangleCase::Three => ga,
    };
    let base = Network::complete_bipartite(n)?;
    let chain = pair_gamma(&base, a, c)?;
    let eta = pivot_eta(&base, a, td.r_ac())?;
    let product = links[0].multiply(&links[1])?;
    let target: Vec<(NodeCopy, NodeCopy)> =
        product.support_vec().into_iter().map(|v| (NodeCopy::new(v, 0), NodeCopy::new(v, usize::from(v == a)))).collect();
    let proof = WitnessProof {
        inflation: eta,
        placements: vec![
            TermPlacement::Chained { chain, links: vec![vec![0; n]; 2], target },
            TermPlacement::Direct { copies: vec![0; n] },
        ],
    };
    Witness::new(
        format!("theorem3[{a},{b},{c};case {}]", case.number()),
        n,
        vec![WitnessTerm::Chained(links), WitnessTerm::Direct(partner)],
        Some(proof),
    )
}

/// Four tripartite sources:
/// `(<Y_AY_B> + <Y_BY_C> + <Y_CY_D> + <Y_DY_A> - 3)^2 + <X_A Z_B Z_C Z_D>^2 <= 1`. The chain runs through `A, B, C, D, A'` in
/// a rewired two-copy inflation and ends on `Y_A Y_A'` of the doubled
/// network.
pub fn tripartite_square_witness() -> Witness {
    let nu = tripartite_square_nu();
    let tau = Inflation::identity(nu.base().clone(), 2).expect("valid");
    let links = vec![ps("YY11"), ps("1YY1"), ps("11YY"), ps("Y11Y")];
    let maps = vec![vec![0; 4], vec![0; 4], vec![0; 4], vec![1, 0, 0, 0]];
    let target = vec![(NodeCopy::new(0, 0), NodeCopy::new(0, 0)), (NodeCopy::new(0, 1), NodeCopy::new(0, 1))];
    let proof = WitnessProof {
        inflation: tau,
        placements: vec![TermPlacement::Chained { chain: nu, links: maps, target }, TermPlacement::Direct { copies: vec![0; 4] }],
    };
    Witness::new("tripartite-square", 4, vec![WitnessTerm::Chained(links), WitnessTerm::Direct(ps("XZZZ"))], Some(proof))
        .expect("valid")
}

/// Six nodes `A..F` with tripartite sources: `<X_AX_D>^2 + <Z_AX_BZ_D>^2 +
/// <Y_A Z_B Z_C Z_D Y_E Z_F>^2 <= 1`, all three in the stabilizer of the
/// graph with edges `A-B, A-C, A-E, A-F, D-B, D-C, D-E, D-F`. The third
/// observable replaces the printed `Y_A Y_E X_D`, which does not commute with
/// the other two in any such stabilizer. The hexagon inflation is only
/// available as a figure, so no proof data is attached.
pub fn tripartite_hexagon_witness() -> Witness {
    Witness::new(
        "tripartite-hexagon",
        6,
        vec![WitnessTerm::Direct(ps("X11X11")), WitnessTerm::Direct(ps("ZX1Z11")), WitnessTerm::Direct(ps("YZZZYZ"))],
        None,
    )
    .expect("valid")
}

/// The graph whose state violates [`tripartite_hexagon_witness`].
pub fn tripartite_hexagon_graph() -> Graph {
    Graph::from_edges(6, &[(0, 1), (0, 2), (0, 4), (0, 5), (3, 1), (3, 2), (3, 4), (3, 5)]).expect("valid")
}

pub fn tripartite_demo_witnesses() -> Vec<Witness> {
    vec![tripartite_square_witness(), tripartite_hexagon_witness()]
}

fn check_link_args(n: usize, a: usize, c: usize, p: &[PauliString; 3]) -> Result<()> {
    if a >= n || c >= n || a == c {
        return Err(Error::OverlappingSubsets(format!("endpoints {a} and {c} must be distinct qubits below {n}")));
    }
    let ends = (1u64 << a) | (1 << c);
    let mut seen = 0u64;
    for (i, q) in p.iter().enumerate() {
        check_observable(q, n)?;
        let s = q.support();
        if s & ends != 0 {
            return Err(Error::OverlappingSubsets(format!("P_R{} acts on an endpoint", i + 1)));
        }
        if s & seen != 0 {
            return Err(Error::OverlappingSubsets(format!("P_R{} overlaps an earlier subset", i + 1)));
        }
        seen |= s;
    }
    Ok(())
}

fn link_terms(n: usize, a: usize, c: usize, p: &[PauliString; 3]) -> Result<Vec<WitnessTerm>> {
    let mut out = Vec::with_capacity(3);
    for (letter, q) in [Letter::X, Letter::Y, Letter::Z].into_iter().zip(p) {
        let ends = PauliString::from_sparse(n, &[(a, letter), (c, letter)])?;
        out.push(WitnessTerm::Direct(ends.multiply(q)?));
    }
    Ok(out)
}

/// `<X_aX_c P_1>^2 + <Y_aY_c P_2>^2 + <Z_aZ_c P_3>^2 <= 1` for networks of
/// bipartite sources without the link `a-c`. Proof data uses every other
/// link and moves the sources from `c` into `supp P_2`, `supp P_3` to the
/// second and third copy of `c`.
pub fn link_certification_witness(n: usize, a: usize, c: usize, p: [PauliString; 3]) -> Result<Witness> {
    check_link_args(n, a, c, &p)?;
    let base = Network::complete_bipartite(n)?.without_link(a, c)?;
    let xi = link_xi(&base, a, c, p[1].support(), p[2].support())?;
    let copy_map = |k: usize| (0..n).map(|v| if v == c { k } else { 0 }).collect::<Vec<_>>();
    let proof = WitnessProof {
        inflation: xi,
        placements: (0..3).map(|k| TermPlacement::Direct { copies: copy_map(k) }).collect(),
    };
    Witness::new(format!("link[{a},{c}]"), n, link_terms(n, a, c, &p)?, Some(proof))
}

pub fn link_certification(s: &DenseState, a: usize, c: usize, p: [PauliString; 3]) -> Result<WitnessReport> {
    let n = s.num_parties();
    check_link_args(n, a, c, &p)?;
    let w = Witness::new(format!("link[{a},{c}]"), n, link_terms(n, a, c, &p)?, None)?;
    w.evaluate(s)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinkSearchResult {
    pub report: WitnessReport,
    pub observables: [PauliString; 3],
}

/// Largest number of non-endpoint qubits the exhaustive link search handles.
pub const LINK_SEARCH_MAX: usize = 8;

/// Maximize the link inequality over Pauli strings `P_1, P_2, P_3`. With
/// `groups = Some([R1, R2, R3])` each `P_i` is restricted to `R_i`;
/// otherwise every assignment of the remaining qubits to the three groups
/// (or to none) is tried.
pub fn link_certification_search(s: &DenseState, a: usize, c: usize, groups: Option<[u64; 3]>) -> Result<LinkSearchResult> {
    let n = s.num_parties();
    if a >= n || c >= n || a == c {
        return Err(Error::OverlappingSubsets(format!("endpoints {a} and {c} must be distinct qubits below {n}")));
    }
    let rest: Vec<usize> = (0..n).filter(|&v| v != a && v != c).collect();
    let k = rest.len();
    if k > LINK_SEARCH_MAX {
        return Err(Error::SearchCap(format!("{k} remaining qubits, at most {LINK_SEARCH_MAX} supported")));
    }
    if let Some(gr) = groups {
        let ends = (1u64 << a) | (1 << c);
        if gr[0] & gr[1] != 0 || gr[0] & gr[2] != 0 || gr[1] & gr[2] != 0 || (gr[0] | gr[1] | gr[2]) & ends != 0 {
            return Err(Error::OverlappingSubsets("groups overlap or contain an endpoint".into()));
        }
    }
    // best[l][S]: largest <L_a L_c P>^2 over strings P with support exactly S
    // (S indexes subsets of `rest`)
    let subsets = 1usize << k;
    let mut best = vec![vec![(f64::NEG_INFINITY, PauliString::identity(n)?); subsets]; 3];
    let letters = [Letter::X, Letter::Y, Letter::Z];
    for code in 0..(1usize << (2 * k)) {
        let mut sparse = Vec::with_capacity(k);
        let mut mask = 0usize;
        for (i, &v) in rest.iter().enumerate() {
            let digit = code >> (2 * i) & 3;
            if digit > 0 {
                sparse.push((v, letters[digit - 1]));
                mask |= 1 << i;
            }
        }
        let p = PauliString::from_sparse(n, &sparse)?;
        for (li, &l) in letters.iter().enumerate() {
            let full = PauliString::from_sparse(n, &[(a, l), (c, l)])?.multiply(&p)?;
            let v = s.expectation(&full)?;
            if v * v > best[li][mask].0 {
                best[li][mask] = (v * v, p);
            }
        }
    }
    let local = |g: u64| rest.iter().enumerate().fold(0usize, |m, (i, &v)| if g >> v & 1 == 1 { m | 1 << i } else { m });
    let mut top = (f64::NEG_INFINITY, [0usize; 3]);
    match groups {
        Some(gr) => {
            let allowed = [local(gr[0]), local(gr[1]), local(gr[2])];
            let mut pick = [0usize; 3];
            let mut total = 0.0;
            for l in 0..3 {
                let mut sub = allowed[l];
                let mut choice = (best[l][0].0, 0usize);
                loop {
                    if best[l][sub].0 > choice.0 {
                        choice = (best[l][sub].0, sub);
                    }
                    if sub == 0 {
                        break;
                    }
                    sub = (sub - 1) & allowed[l];
                }
                pick[l] = choice.1;
                total += choice.0;
            }
            top = (total, pick);
        }
        None => {
            for code in 0..(1usize << (2 * k)) {
                let mut pick = [0usize; 3];
                for i in 0..k {
                    let digit = code >> (2 * i) & 3;
                    if digit > 0 {
                        pick[digit - 1] |= 1 << i;
                    }
                }
                let total: f64 = (0..3).map(|l| best[l][pick[l]].0).sum();
                if total > top.0 + 1e-12 {
                    top = (total, pick);
                }
            }
        }
    }
    let observables = [best[0][top.1[0]].1, best[1][top.1[1]].1, best[2][top.1[2]].1];
    let report = link_certification(s, a, c, observables)?;
    Ok(LinkSearchResult { report, observables })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdReport {
    /// Least `p` at which `p |psi><psi| + (1 - p) 1/D` violates the witness,
    /// or 1 when even the pure state does not.
    pub threshold: f64,
    /// Exact root of the piecewise quadratic `lhs(p) = 1`.
    pub closed_form: Option<f64>,
    pub never_violated: bool,
}

/// Bisection on `evaluate(w, white_noise(pure, p))` down to width 1e-10,
/// together with the closed form obtained from `<P>_p = p <P>` for every
/// non-identity string.
pub fn white_noise_threshold(w: &Witness, pure: &DenseState) -> Result<ThresholdReport> {
    if !pure.is_pure() {
        return Err(Error::NotPure);
    }
    let violated_at = |p: f64| -> Result<bool> { Ok(w.evaluate(&pure.white_noise(p)?)?.violated) };
    let closed_form = closed_form_threshold(w, pure)?;
    if !violated_at(1.0)? {
        return Ok(ThresholdReport { threshold: 1.0, closed_form, never_violated: true });
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    if violated_at(0.0)? {
        return Ok(ThresholdReport { threshold: 0.0, closed_form, never_violated: false });
    }
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if violated_at(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(ThresholdReport { threshold: hi, closed_form, never_violated: false })
}

/// `lhs(p) = sum_d (p e_d)^2 + sum_c max(0, p s_c - (k_c - 1) + i_c)^2`,
/// where identity links contribute their sign `i_c` regardless of `p`.
fn closed_form_threshold(w: &Witness, pure: &DenseState) -> Result<Option<f64>> {
    // each term is (max(0, alpha p + beta))^2, or (alpha p)^2 unclamped
    let mut parts: Vec<(f64, f64, bool)> = Vec::new();
    for t in &w.terms {
        let mut alpha = 0.0;
        let mut beta = 0.0;
        for p in t.observables() {
            if p.is_identity_letters() {
                beta += p.phase().sign().unwrap_or(0.0);
            } else {
                alpha += pure.expectation(p)?;
            }
        }
        match t {
            WitnessTerm::Direct(_) => parts.push((alpha, beta, false)),
            WitnessTerm::Chained(links) => parts.push((alpha, beta - (links.len() - 1) as f64, true)),
        }
    }
    let lhs = |p: f64| -> f64 {
        parts
            .iter()
            .map(|&(al, be, clamp)| {
                let v = al * p + be;
                let v = if clamp { v.max(0.0) } else { v };
                v * v
            })
            .sum()
    };
    if lhs(1.0) <= BOUND + SLACK {
        return Ok(None);
    }
    let level = BOUND;
    // breakpoints where a clamped term becomes active
    let mut cuts: Vec<f64> = vec![0.0, 1.0];
    for &(al, be, clamp) in &parts {
        if clamp && al != 0.0 {
            let x = -be / al;
            if x > 0.0 && x < 1.0 {
                cuts.push(x);
            }
        }
    }
    cuts.sort_by(f64::total_cmp);
    for win in cuts.windows(2) {
        let (l, r) = (win[0], win[1]);
        if lhs(r) <= level {
            continue;
        }
        if lhs(l) > level {
            return Ok(Some(l));
        }
        // quadratic A p^2 + B p + C over the active terms in (l, r)
        let mid = 0.5 * (l + r);
        let (mut qa, mut qb, mut qc) = (0.0, 0.0, -level);
        for &(al, be, clamp) in &parts {
            if clamp && al * mid + be <= 0.0 {
                continue;
            }
            qa += al * al;
            qb += 2.0 * al * be;
            qc += be * be;
        }
        let root = if qa.abs() < 1e-15 {
            -qc / qb
        } else {
            let disc = (qb * qb - 4.0 * qa * qc).max(0.0);
            (-qb + libm::sqrt(disc)) / (2.0 * qa)
        };
        return Ok(Some(root.clamp(l, r)));
    }
    Ok(None)
}

/// Lifted observables as text, letters ordered by node and then copy.
pub fn describe_lift(w: &Witness) -> Result<Vec<String>> {
    let proof = w.proof.as_ref().ok_or_else(|| werr("no proof data"))?;
    let lifted = w.validate()?;
    let infl = &proof.inflation;
    Ok(lifted
        .iter()
        .map(|p| {
            let mut qs: Vec<usize> = bits(p.support()).collect();
            qs.sort_by_key(|&q| {
                let nc = infl.node_copy(q);
                (nc.node, nc.copy)
            });
            qs.iter()
                .map(|&q| format!("{}_{}", p.letter(q).symbol(), infl.label(infl.node_copy(q))))
                .collect::<Vec<_>>()
                .join(" ")
        })
        .map(|s| if s.is_empty() { "1".to_string() } else { s })
        .collect())
}

/// `gamma` on the triangle with the `AC` source rewired; used by reports.
pub fn triangle_gamma() -> Inflation {
    let base = Network::triangle();
    let b = base.source_index("b").expect("triangle has b");
    gamma_inflation(&base, b).expect("valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{triangle_decomposition, Graph};
    use crate::pauli::PauliString;
    use nalgebra::{DMatrix, DVector};
    use num_complex::Complex64;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn near(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn ghz_witness_values() {
        let w = ghz_triangle_witness();
        w.validate().unwrap();
        let r = w.evaluate(&DenseState::ghz(3).unwrap()).unwrap();
        assert!(near(r.lhs, 2.0, 1e-12) && r.violated);
        let r = w.evaluate(&DenseState::zeros(3).unwrap()).unwrap();
        assert!(near(r.lhs, 1.0, 1e-12) && !r.violated);
        for p in [0.3, 0.6, 0.79, 0.81, 0.95] {
            let r = w.evaluate(&DenseState::ghz(3).unwrap().white_noise(p).unwrap()).unwrap();
            let want = p * p + (2.0 * p - 1.0f64).max(0.0).powi(2);
            assert!(near(r.lhs, want, 1e-12));
            assert_eq!(r.violated, p > 0.8);
        }
        let lift = describe_lift(&w).unwrap();
        assert_eq!(lift, ["X_A X_B X_C", "Z_A' Z_C"]);
    }

    #[test]
    fn ghz_variants_validate() {
        let yyx = ghz_triangle_witness_with(ps("YYX"), 0).unwrap();
        assert_eq!(yyx.terms[1], WitnessTerm::Chained(vec![ps("ZZ1"), ps("Z1Z")]));
        assert!(yyx.evaluate(&DenseState::ghz(3).unwrap()).unwrap().violated);
        ghz_triangle_witness_with(ps("XYY"), 2).unwrap();
        ghz_triangle_witness_with(ps("YXY"), 1).unwrap();
        // Z on either copy-0 end of the target commutes with it
        assert!(ghz_triangle_witness_with(ps("ZZZ"), 1).is_err());
    }

    #[test]
    fn anticommuting_lift_of_ghz() {
        // on ABCA'B'C': X_A X_B X_C and Z_A' Z_C overlap only on C
        let lifted = ghz_triangle_witness().validate().unwrap();
        assert_eq!(lifted[0], ps("XXX111"));
        assert_eq!(lifted[1], ps("11ZZ11"));
    }

    #[test]
    fn cluster_witnesses() {
        let c4 = DenseState::graph_state(&Graph::cycle(4).unwrap()).unwrap();
        let w = cluster_square_witness();
        assert_eq!(describe_lift(&w).unwrap(), ["X_B'' X_D", "Z_B' X_C Z_D", "X_A Y_B Y_D"]);
        let r = w.evaluate(&c4).unwrap();
        assert!(near(r.lhs, 3.0, 1e-12));
        assert!(near(r.terms[2].value, -1.0, 1e-12));
        let t = cluster_square_tau_witness();
        t.validate().unwrap();
        assert!(near(t.evaluate(&c4).unwrap().lhs, 2.0, 1e-12));
        let th = white_noise_threshold(&w, &c4).unwrap();
        assert!(near(th.threshold, 1.0 / libm::sqrt(3.0), 1e-9));
        assert!(near(th.closed_form.unwrap(), 1.0 / libm::sqrt(3.0), 1e-12));
    }

    #[test]
    fn ghz_threshold() {
        let th = white_noise_threshold(&ghz_triangle_witness(), &DenseState::ghz(3).unwrap()).unwrap();
        assert!(near(th.threshold, 0.8, 1e-8));
        assert!(near(th.closed_form.unwrap(), 0.8, 1e-8));
        let flat = white_noise_threshold(&ghz_triangle_witness(), &DenseState::zeros(3).unwrap()).unwrap();
        assert!(flat.never_violated && flat.threshold == 1.0 && flat.closed_form.is_none());
    }

    #[test]
    fn theorem3_on_k3_matches_ghz_shape() {
        let k3 = Graph::complete(3).unwrap();
        let td = triangle_decomposition(&k3, 0, 1, 2).unwrap();
        let w = theorem3_witness(&k3, &td, TriangleCase::One).unwrap();
        w.validate().unwrap();
        assert_eq!(w.terms[0], WitnessTerm::Chained(vec![ps("YY1"), ps("1YY")]));
        assert_eq!(w.terms[1], WitnessTerm::Direct(ps("ZXZ")));
        let s = DenseState::graph_state(&k3).unwrap();
        assert!(near(w.evaluate(&s).unwrap().lhs, 2.0, 1e-12));
        let th = white_noise_threshold(&w, &s).unwrap();
        assert!(near(th.threshold, 0.8, 1e-8));
    }

    #[test]
    fn theorem3_condition_checked() {
        // pendant on A: E_A nonempty, so cases 2 and 3 fail
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (0, 2), (0, 3)]).unwrap();
        let td = triangle_decomposition(&g, 0, 1, 2).unwrap();
        assert!(matches!(theorem3_witness(&g, &td, TriangleCase::Two), Err(Error::ConditionNotSatisfied { case: 2, .. })));
        let w = theorem3_witness(&g, &td, TriangleCase::One).unwrap();
        w.validate().unwrap();
        assert!(near(w.evaluate(&DenseState::graph_state(&g).unwrap()).unwrap().lhs, 2.0, 1e-12));
    }

    #[test]
    fn tripartite_witnesses() {
        let sq = tripartite_square_witness();
        assert_eq!(describe_lift(&sq).unwrap(), ["Y_A Y_A'", "X_A Z_B Z_C Z_D"]);
        let k4 = DenseState::graph_state(&Graph::complete(4).unwrap()).unwrap();
        let r = sq.evaluate(&k4).unwrap();
        assert!(r.violated && near(r.lhs, 2.0, 1e-12));
        let hex = tripartite_hexagon_witness();
        let r = hex.evaluate(&DenseState::graph_state(&tripartite_hexagon_graph()).unwrap()).unwrap();
        assert!(near(r.lhs, 3.0, 1e-12));
        for w in tripartite_demo_witnesses() {
            let mixed = DenseState::maximally_mixed(vec![2; w.n]).unwrap();
            assert!(near(w.evaluate(&mixed).unwrap().lhs, 0.0, 1e-12));
        }
    }

    fn link_example() -> DenseState {
        // qubits A B C D; s1 = |0000> + |1010>, s2 = |0101> - |1111>
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let mut s1 = DVector::from_element(16, Complex64::new(0.0, 0.0));
        s1[0b0000] = Complex64::new(h, 0.0);
        s1[0b1010] = Complex64::new(h, 0.0);
        let mut s2 = DVector::from_element(16, Complex64::new(0.0, 0.0));
        s2[0b0101] = Complex64::new(h, 0.0);
        s2[0b1111] = Complex64::new(-h, 0.0);
        let rho: DMatrix<Complex64> = (&s1 * s1.adjoint() + &s2 * s2.adjoint()).scale(0.5);
        DenseState::from_density(vec![2; 4], rho).unwrap()
    }

    #[test]
    fn link_certification_example() {
        let s = link_example();
        let one = PauliString::identity(4).unwrap();
        let r = link_certification(&s, 0, 2, [one, ps("111Z"), one]).unwrap();
        let values: Vec<f64> = r.terms.iter().map(|t| t.value).collect();
        assert!(near(values[0], 0.0, 1e-12) && near(values[1], -1.0, 1e-12) && near(values[2], 1.0, 1e-12));
        assert!(near(r.lhs, 2.0, 1e-12) && r.violated);
        let marginal = link_certification(&s, 0, 2, [one, one, one]).unwrap();
        assert!(marginal.lhs <= 1.0 + 1e-12);
        assert!(link_certification(&s, 0, 2, [ps("Z111"), one, one]).is_err());
        assert!(link_certification(&s, 0, 2, [ps("1Z11"), ps("1Z11"), one]).is_err());
        let w = link_certification_witness(4, 0, 2, [one, ps("111Z"), one]).unwrap();
        w.validate().unwrap();
    }

    #[test]
    fn link_search() {
        let s = link_example();
        let found = link_certification_search(&s, 0, 2, None).unwrap();
        assert!(found.report.lhs >= 2.0 - 1e-12);
        let ghz = DenseState::ghz(4).unwrap();
        assert!(link_certification_search(&ghz, 0, 3, None).unwrap().report.lhs > 1.0);
        let mixed = DenseState::maximally_mixed(vec![2; 4]).unwrap();
        assert!(near(link_certification_search(&mixed, 0, 3, None).unwrap().report.lhs, 0.0, 1e-12));
        let restricted = link_certification_search(&s, 0, 2, Some([0, 1 << 3, 0])).unwrap();
        assert!(near(restricted.report.lhs, 2.0, 1e-12));
        assert!(link_certification_search(&s, 0, 2, Some([1 << 3, 1 << 3, 0])).is_err());
    }

    #[test]
    fn link_product_across_cut() {
        // a state that is a product across a | rest can never violate
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let a = DenseState::random_pure(vec![2], &mut rng).unwrap();
            let rest = DenseState::random_mixed(vec![2; 3], 2, &mut rng).unwrap();
            let s = a.tensor(&rest).unwrap();
            let r = link_certification_search(&s, 0, 2, None).unwrap();
            assert!(r.report.lhs <= 1.0 + 1e-9, "{}", r.report.lhs);
        }
    }

    #[test]
    fn broken_proofs_rejected() {
        let mut w = cluster_square_witness();
        if let Some(p) = w.proof.as_mut() {
            p.placements[0] = TermPlacement::Direct { copies: vec![0; 4] };
        }
        assert!(w.validate().is_err());
        let mut w = cluster_square_witness();
        if let Some(p) = w.proof.as_mut() {
            // B' and C on the same copy no longer share the bc source
            p.placements[1] = TermPlacement::Direct { copies: vec![0, 2, 0, 0] };
        }
        assert!(w.validate().is_err());
        assert!(tripartite_hexagon_witness().validate().is_err());
    }

    fn anticommuting_set(n: usize, seed: u64) -> Vec<PauliString> {
        // Jordan-Wigner style: X_j Z_{<j} and Y_j Z_{<j} pairwise anticommute
        let mut out = Vec::new();
        for j in 0..n {
            let z = (1u64 << j) - 1;
            out.push(PauliString::from_masks(n, 1 << j, z, Phase::ONE).unwrap());
            out.push(PauliString::from_masks(n, 1 << j, z | 1 << j, Phase::ONE).unwrap());
        }
        let len = out.len();
        let keep = (seed as usize % len) + 1;
        out.rotate_left((seed >> 8) as usize % len);
        out.truncate(keep);
        out
    }

    proptest! {
        #[test]
        fn anticommuting_sum_bounded(n in 1usize..=5, seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let set = anticommuting_set(n, seed);
            prop_assert!(pairwise_anticommuting(&set).unwrap());
            let s = DenseState::random_mixed(vec![2; n], 1 + (seed % 3) as usize, &mut rng).unwrap();
            let total: f64 = set.iter().map(|p| s.expectation(p).unwrap().powi(2)).sum();
            prop_assert!(total <= 1.0 + 1e-9);
        }

        #[test]
        fn chained_term_sound(seed in any::<u64>(), z in 0u64..8) {
            // M1 M2 >= M1 M3 + M2 M3 - 1 for commuting dichotomic M_i
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let s = DenseState::random_mixed(vec![2; 3], 2, &mut rng).unwrap();
            let m1 = PauliString::from_masks(3, 0, 0b011, Phase::ONE).unwrap();
            let m2 = PauliString::from_masks(3, 0, 0b110, Phase::ONE).unwrap();
            let m3 = PauliString::from_masks(3, 0, z, Phase::ONE).unwrap();
            let e = |p: &PauliString| s.expectation(p).unwrap();
            let m13 = m1.multiply(&m3).unwrap();
            let m23 = m2.multiply(&m3).unwrap();
            prop_assert!(e(&m1.multiply(&m2).unwrap()) >= e(&m13) + e(&m23) - 1.0 - 1e-9);
        }
    }
}
