//! Networks of multipartite sources and their copy-and-rewire inflations.
//!
//! An inflation uses `copies` copies of every node and of every source. Copy
//! `k` of source `s` feeds, for each role `r`, one copy of the node
//! `parties[r]`. Two node-copy sets have equal marginals when a bijection
//! preserving base nodes maps the pattern "which source copy feeds which
//! slot" of one set onto the other; channels and shared randomness act per
//! base node, so they do not distinguish the two.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Source {
    pub id: String,
    /// Node indices in role order.
    pub parties: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Network {
    nodes: Vec<String>,
    sources: Vec<Source>,
}

fn letter_label(i: usize, n: usize) -> String {
    if n <= 26 {
        char::from(b'A' + i as u8).to_string()
    } else {
        format!("v{i}")
    }
}

impl Network {
    pub fn new(nodes: Vec<String>, sources: Vec<Source>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::Network("no nodes".into()));
        }
        if nodes.len() > 64 {
            return Err(Error::Network(format!("{} nodes exceed the cap of 64", nodes.len())));
        }
        for (i, a) in nodes.iter().enumerate() {
            if nodes[..i].contains(a) {
                return Err(Error::Network(format!("duplicate node label {a:?}")));
            }
        }
        for (i, s) in sources.iter().enumerate() {
            if sources[..i].iter().any(|t| t.id == s.id) {
                return Err(Error::Network(format!("duplicate source id {:?}", s.id)));
            }
            if s.parties.len() < 2 {
                return Err(Error::Network(format!("source {:?} connects fewer than 2 nodes", s.id)));
            }
            for (k, &p) in s.parties.iter().enumerate() {
                if p >= nodes.len() {
                    return Err(Error::Network(format!("source {:?} names node {p} out of range", s.id)));
                }
                if s.parties[..k].contains(&p) {
                    return Err(Error::Network(format!("source {:?} lists node {p} twice", s.id)));
                }
            }
        }
        Ok(Self { nodes, sources })
    }

    /// Build from labels, e.g. `from_labels(&["A", "B"], &[("ab", &["A", "B"])])`.
    pub fn from_labels(nodes: &[&str], sources: &[(&str, &[&str])]) -> Result<Self> {
        let labels: Vec<String> = nodes.iter().map(|s| s.to_string()).collect();
        let mut out = Vec::with_capacity(sources.len());
        for (id, parties) in sources {
            let idx = parties
                .iter()
                .map(|p| labels.iter().position(|l| l == p).ok_or_else(|| Error::Network(format!("unknown node {p:?}"))))
                .collect::<Result<Vec<_>>>()?;
            out.push(Source { id: id.to_string(), parties: idx });
        }
        Self::new(labels, out)
    }

    /// Sources `c = (A, B)`, `a = (B, C)`, `b = (A, C)`, each named after the
    /// node it misses.
    pub fn triangle() -> Self {
        Self::from_labels(&["A", "B", "C"], &[("c", &["A", "B"]), ("a", &["B", "C"]), ("b", &["A", "C"])]).expect("valid")
    }

    /// Ring `A-B-C-D-A` of bipartite sources.
    pub fn square() -> Self {
        Self::from_labels(
            &["A", "B", "C", "D"],
            &[("ab", &["A", "B"]), ("bc", &["B", "C"]), ("cd", &["C", "D"]), ("da", &["D", "A"])],
        )
        .expect("valid")
    }

    /// One bipartite source per pair of nodes, ordered `(i, j)` with `i < j`.
    pub fn complete_bipartite(n: usize) -> Result<Self> {
        let nodes: Vec<String> = (0..n).map(|i| letter_label(i, n)).collect();
        let mut sources = Vec::new();
        for j in 0..n {
            for i in 0..j {
                sources.push(Source { id: format!("{}{}", nodes[i].to_lowercase(), nodes[j].to_lowercase()), parties: vec![i, j] });
            }
        }
        if n > 26 {
            for s in &mut sources {
                s.id = format!("s{}_{}", s.parties[0], s.parties[1]);
            }
        }
        Self::new(nodes, sources)
    }

    /// `N` sources of arity `N - 1`; source `k` misses node `k`.
    pub fn all_but_one(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Network("all-but-one network needs at least 3 nodes".into()));
        }
        let nodes: Vec<String> = (0..n).map(|i| letter_label(i, n)).collect();
        let sources = (0..n)
            .map(|k| Source { id: format!("s{}", nodes[k]), parties: (0..n).filter(|&j| j != k).collect() })
            .collect();
        Self::new(nodes, sources)
    }

    /// Four nodes with the tripartite sources `s_A = (B, C, D)`,
    /// `s_B = (A, C, D)`, `s_C = (A, B, D)`, `s_D = (A, B, C)`.
    pub fn tripartite_square() -> Self {
        Self::all_but_one(4).expect("valid")
    }

    /// The same network without any source shared by both `a` and `c`.
    pub fn without_link(&self, a: usize, c: usize) -> Result<Self> {
        let sources = self.sources.iter().filter(|s| !(s.parties.contains(&a) && s.parties.contains(&c))).cloned().collect();
        Self::new(self.nodes.clone(), sources)
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn sources(&self) -> &[Source] {
        &self.sources
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn node_index(&self, label: &str) -> Option<usize> {
        self.nodes.iter().position(|l| l == label)
    }

    pub fn source_index(&self, id: &str) -> Option<usize> {
        self.sources.iter().position(|s| s.id == id)
    }

    /// First source that contains both nodes, if any.
    pub fn source_between(&self, a: usize, b: usize) -> Option<usize> {
        self.sources.iter().position(|s| s.parties.contains(&a) && s.parties.contains(&b))
    }

    pub fn max_arity(&self) -> usize {
        self.sources.iter().map(|s| s.parties.len()).max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeCopy {
    pub node: usize,
    pub copy: usize,
}

impl NodeCopy {
    pub const fn new(node: usize, copy: usize) -> Self {
        Self { node, copy }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inflation {
    base: Network,
    copies: usize,
    /// `wiring[s][k][r]`: the node copy receiving role `r` of copy `k` of
    /// source `s`.
    wiring: Vec<Vec<Vec<NodeCopy>>>,
    /// `feed[s][r][c]`: which copy of source `s` feeds role `r` at copy `c`
    /// of its node.
    feed: Vec<Vec<Vec<usize>>>,
}

/// Copy permutation applied to one role of one source: copy `k` of the
/// source feeds copy `perm[k]` of the node holding `role`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rewire {
    pub source: usize,
    pub role: usize,
    pub perm: Vec<usize>,
}

impl Inflation {
    /// Validating constructor.
    pub fn new(base: Network, copies: usize, wiring: Vec<Vec<Vec<NodeCopy>>>) -> Result<Self> {
        if copies == 0 {
            return Err(Error::Inflation("zero copies".into()));
        }
        if wiring.len() != base.sources.len() {
            return Err(Error::Inflation(format!("wiring lists {} sources, base has {}", wiring.len(), base.sources.len())));
        }
        let mut feed = Vec::with_capacity(wiring.len());
        for (src, per_copy) in base.sources.iter().zip(&wiring) {
            if per_copy.len() != copies {
                return Err(Error::Inflation(format!("source {:?} has {} copies, expected {copies}", src.id, per_copy.len())));
            }
            let mut f = vec![vec![usize::MAX; copies]; src.parties.len()];
            for (k, ends) in per_copy.iter().enumerate() {
                if ends.len() != src.parties.len() {
                    return Err(Error::Inflation(format!(
                        "copy {k} of source {:?} has {} endpoints, arity is {}",
                        src.id,
                        ends.len(),
                        src.parties.len()
                    )));
                }
                for (r, e) in ends.iter().enumerate() {
                    if e.node != src.parties[r] {
                        return Err(Error::Inflation(format!(
                            "copy {k} of source {:?} sends role {r} to node {}, expected {}",
                            src.id, e.node, src.parties[r]
                        )));
                    }
                    if e.copy >= copies {
                        return Err(Error::Inflation(format!("node copy {} out of range", e.copy)));
                    }
                    if f[r][e.copy] != usize::MAX {
                        return Err(Error::Inflation(format!(
                            "role {r} of source {:?} reaches copy {} of node {} twice",
                            src.id, e.copy, e.node
                        )));
                    }
                    f[r][e.copy] = k;
                }
            }
            feed.push(f);
        }
        Ok(Self { base, copies, wiring, feed })
    }

    /// `copies` disjoint copies of the base network.
    pub fn identity(base: Network, copies: usize) -> Result<Self> {
        Self::rewired(base, copies, &[])
    }

    /// Identity wiring with the listed role permutations applied.
    pub fn rewired(base: Network, copies: usize, rewires: &[Rewire]) -> Result<Self> {
        let mut wiring: Vec<Vec<Vec<NodeCopy>>> = base
            .sources
            .iter()
            .map(|s| (0..copies).map(|k| s.parties.iter().map(|&p| NodeCopy::new(p, k)).collect()).collect())
            .collect();
        for rw in rewires {
            let src = base.sources.get(rw.source).ok_or_else(|| Error::Inflation(format!("no source {}", rw.source)))?;
            if rw.role >= src.parties.len() || rw.perm.len() != copies {
                return Err(Error::Inflation(format!("bad rewiring of source {:?}", src.id)));
            }
            for (ends, &c) in wiring[rw.source].iter_mut().zip(&rw.perm) {
                ends[rw.role].copy = c;
            }
        }
        Self::new(base, copies, wiring)
    }

    pub fn base(&self) -> &Network {
        &self.base
    }

    pub fn copies(&self) -> usize {
        self.copies
    }

    pub fn wiring(&self) -> &[Vec<Vec<NodeCopy>>] {
        &self.wiring
    }

    /// Qubit register of the inflated state: node copies in copy-major order
    /// (`A B C A' B' C'`).
    pub fn num_qubits(&self) -> usize {
        self.base.num_nodes() * self.copies
    }

    pub fn qubit(&self, nc: NodeCopy) -> usize {
        nc.copy * self.base.num_nodes() + nc.node
    }

    pub fn node_copy(&self, qubit: usize) -> NodeCopy {
        let n = self.base.num_nodes();
        NodeCopy::new(qubit % n, qubit / n)
    }

    /// Which copy of source `s` feeds `role` at copy `copy` of its node.
    pub fn feeder(&self, s: usize, role: usize, copy: usize) -> usize {
        self.feed[s][role][copy]
    }

    /// `A`, `A'`, `A''`, then `A#3` for higher copies.
    pub fn label(&self, nc: NodeCopy) -> String {
        let base = &self.base.nodes[nc.node];
        match nc.copy {
            0 => base.clone(),
            1 => format!("{base}'"),
            2 => format!("{base}''"),
            k => format!("{base}#{k}"),
        }
    }

    fn check_set(&self, set: &[NodeCopy]) -> Result<()> {
        for (i, x) in set.iter().enumerate() {
            if x.node >= self.base.num_nodes() || x.copy >= self.copies {
                return Err(Error::Inflation(format!("node copy ({}, {}) out of range", x.node, x.copy)));
            }
            if set[..i].contains(x) {
                return Err(Error::Inflation(format!("node copy {} listed twice", self.label(*x))));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InflationKind {
    /// Disjoint copies.
    Tau,
    /// One source with its last role moved to the next copy.
    Gamma,
}

/// Two-copy inflations: `Tau` doubles the network, `Gamma` rewires the
/// first source shared by the first and last node (the `AC` source of the
/// triangle).
pub fn standard_inflation(base: &Network, kind: InflationKind) -> Result<Inflation> {
    match kind {
        InflationKind::Tau => Inflation::identity(base.clone(), 2),
        InflationKind::Gamma => {
            let last = base.num_nodes() - 1;
            let s = base
                .source_between(0, last)
                .or_else(|| (!base.sources.is_empty()).then_some(0))
                .ok_or_else(|| Error::Inflation("network has no source to rewire".into()))?;
            gamma_inflation(base, s)
        }
    }
}

/// Two copies; copy `k` of `source` feeds its last role at copy `1 - k`.
pub fn gamma_inflation(base: &Network, source: usize) -> Result<Inflation> {
    let src = base.sources.get(source).ok_or_else(|| Error::Inflation(format!("no source {source}")))?;
    let role = src.parties.len() - 1;
    Inflation::rewired(base.clone(), 2, &[Rewire { source, role, perm: vec![1, 0] }])
}

pub fn custom_inflation(base: Network, copies: usize, wiring: Vec<Vec<Vec<NodeCopy>>>) -> Result<Inflation> {
    Inflation::new(base, copies, wiring)
}

/// Third-order inflation of the square: copy `k` of source `bc` feeds
/// `(B_{k+1}, C_k)`.
pub fn square_xi() -> Inflation {
    let base = Network::square();
    let bc = base.source_index("bc").expect("square has bc");
    Inflation::rewired(base, 3, &[Rewire { source: bc, role: 0, perm: vec![1, 2, 0] }]).expect("valid")
}

/// Two-copy inflation of the tripartite square: `s_C` feeds `(A, B, D')`
/// and `(A', B', D)`, `s_B` feeds `(A', C, D)` and `(A, C', D')`.
pub fn tripartite_square_nu() -> Inflation {
    let base = Network::tripartite_square();
    let sb = base.source_index("sB").expect("sB");
    let sc = base.source_index("sC").expect("sC");
    Inflation::rewired(base, 2, &[Rewire { source: sc, role: 2, perm: vec![1, 0] }, Rewire { source: sb, role: 0, perm: vec![1, 0] }])
        .expect("valid")
}

fn role_of(base: &Network, s: usize, node: usize) -> usize {
    base.sources[s].parties.iter().position(|&p| p == node).expect("node in source")
}

/// Two copies of `base` where only the source between `a` and `c` crosses.
pub fn pair_gamma(base: &Network, a: usize, c: usize) -> Result<Inflation> {
    let s = base.source_between(a, c).ok_or_else(|| Error::Inflation(format!("no source between nodes {a} and {c}")))?;
    let role = role_of(base, s, c);
    Inflation::rewired(base.clone(), 2, &[Rewire { source: s, role, perm: vec![1, 0] }])
}

/// Two copies where every source joining `a` to a node of `moved` feeds
/// `a'` instead of `a`, and symmetrically in the second copy.
pub fn pivot_eta(base: &Network, a: usize, moved: u64) -> Result<Inflation> {
    let mut rewires = Vec::new();
    for (s, src) in base.sources.iter().enumerate() {
        if src.parties.contains(&a) && src.parties.iter().any(|&p| p != a && moved >> p & 1 == 1) {
            rewires.push(Rewire { source: s, role: role_of(base, s, a), perm: vec![1, 0] });
        }
    }
    Inflation::rewired(base.clone(), 2, &rewires)
}

/// Third-order inflation for testing the missing link `a`-`c`: sources from
/// `c` to nodes in `r2` are moved to `c'`, those to nodes in `r3` to `c''`.
pub fn link_xi(base: &Network, a: usize, c: usize, r2: u64, r3: u64) -> Result<Inflation> {
    if base.source_between(a, c).is_some() {
        return Err(Error::Inflation("the network already contains the tested link".into()));
    }
    let mut rewires = Vec::new();
    for (s, src) in base.sources.iter().enumerate() {
        if !src.parties.contains(&c) {
            continue;
        }
        let hits2 = src.parties.iter().any(|&p| r2 >> p & 1 == 1);
        let hits3 = src.parties.iter().any(|&p| r3 >> p & 1 == 1);
        let perm = match (hits2, hits3) {
            (true, true) => return Err(Error::Inflation(format!("source {:?} touches both moved groups", src.id))),
            (true, false) => vec![1, 0, 2],
            (false, true) => vec![2, 1, 0],
            (false, false) => continue,
        };
        rewires.push(Rewire { source: s, role: role_of(base, s, c), perm });
    }
    Inflation::rewired(base.clone(), 3, &rewires)
}

/// The chain inflation for permutation-symmetric states: source `k` of the
/// all-but-one network feeds `A_1..A_{k-1}` and `A'_{k+1}..A'_N`.
pub fn symmetric_eta(n: usize) -> Result<Inflation> {
    let base = Network::all_but_one(n)?;
    let mut rewires = Vec::new();
    for k in 0..n {
        for (role, &j) in base.sources[k].parties.iter().enumerate() {
            if j > k {
                rewires.push(Rewire { source: k, role, perm: vec![1, 0] });
            }
        }
    }
    Inflation::rewired(base, 2, &rewires)
}

/// Do `s1[i]` and `s2[i]` (paired by position) carry the same marginal?
pub fn subsets_agree(i1: &Inflation, s1: &[NodeCopy], i2: &Inflation, s2: &[NodeCopy]) -> Result<bool> {
    if i1.base != i2.base {
        return Err(Error::Inflation("inflations of different networks".into()));
    }
    if s1.len() != s2.len() {
        return Err(Error::Inflation("subsets of different size".into()));
    }
    i1.check_set(s1)?;
    i2.check_set(s2)?;
    if s1.iter().zip(s2).any(|(x, y)| x.node != y.node) {
        return Ok(false);
    }
    for (s, src) in i1.base.sources.iter().enumerate() {
        let mut fwd: BTreeMap<usize, usize> = BTreeMap::new();
        let mut back: BTreeMap<usize, usize> = BTreeMap::new();
        for (x, y) in s1.iter().zip(s2) {
            let Some(role) = src.parties.iter().position(|&p| p == x.node) else {
                continue;
            };
            let k1 = i1.feeder(s, role, x.copy);
            let k2 = i2.feeder(s, role, y.copy);
            if *fwd.entry(k1).or_insert(k2) != k2 || *back.entry(k2).or_insert(k1) != k1 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Search for a base-node preserving pairing under which the two sets agree;
/// returns `s2` reordered to match `s1`.
pub fn find_agreement(i1: &Inflation, s1: &[NodeCopy], i2: &Inflation, s2: &[NodeCopy]) -> Result<Option<Vec<NodeCopy>>> {
    if s1.len() != s2.len() {
        return Ok(None);
    }
    fn rec(
        i1: &Inflation,
        s1: &[NodeCopy],
        i2: &Inflation,
        s2: &[NodeCopy],
        used: &mut Vec<bool>,
        cur: &mut Vec<NodeCopy>,
    ) -> Result<Option<Vec<NodeCopy>>> {
        let k = cur.len();
        if k == s1.len() {
            return Ok(subsets_agree(i1, s1, i2, cur)?.then(|| cur.clone()));
        }
        for j in 0..s2.len() {
            if used[j] || s2[j].node != s1[k].node {
                continue;
            }
            used[j] = true;
            cur.push(s2[j]);
            if let Some(found) = rec(i1, s1, i2, s2, used, cur)? {
                return Ok(Some(found));
            }
            cur.pop();
            used[j] = false;
        }
        Ok(None)
    }
    rec(i1, s1, i2, s2, &mut vec![false; s2.len()], &mut Vec::new())
}

/// The marginal of the inflation on `set` equals the base marginal on the
/// corresponding nodes. Requires distinct base nodes.
pub fn agrees_with_base(infl: &Inflation, set: &[NodeCopy]) -> Result<bool> {
    let mut seen = 0u64;
    for x in set {
        if seen >> x.node & 1 == 1 {
            return Ok(false);
        }
        seen |= 1 << x.node;
    }
    let base = Inflation::identity(infl.base.clone(), 1)?;
    let image: Vec<NodeCopy> = set.iter().map(|x| NodeCopy::new(x.node, 0)).collect();
    subsets_agree(infl, set, &base, &image)
}

/// An inflation subset whose marginal equals the base marginal on
/// `base_subset` (node `inflation_subset[i].node == base_subset[i]`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarginalCorrespondence {
    pub inflation_subset: Vec<NodeCopy>,
    pub base_subset: Vec<usize>,
}

const MARGINAL_SEARCH_CAP: usize = 2_000_000;

/// All maximal node-copy sets with marginals equal to a base marginal, in
/// lexicographic order of their copy assignments. Subsets of reported sets
/// agree as well.
pub fn equal_marginals(infl: &Inflation) -> Result<Vec<MarginalCorrespondence>> {
    let n = infl.base.num_nodes();
    let choices = infl.copies + 1;
    let total = (0..n).try_fold(1usize, |acc, _| acc.checked_mul(choices).filter(|&t| t <= MARGINAL_SEARCH_CAP));
    let total = total.ok_or_else(|| Error::SearchCap(format!("{choices}^{n} candidate subsets")))?;
    let decode = |mut code: usize| -> Vec<NodeCopy> {
        let mut digits = vec![0usize; n];
        for d in digits.iter_mut().rev() {
            *d = code % choices;
            code /= choices;
        }
        // digit 0 means "absent", digit c + 1 means copy c
        digits.iter().enumerate().filter(|(_, &d)| d > 0).map(|(v, &d)| NodeCopy::new(v, d - 1)).collect()
    };
    let mut valid = vec![false; total];
    for (code, ok) in valid.iter_mut().enumerate() {
        let set = decode(code);
        *ok = !set.is_empty() && agrees_with_base(infl, &set)?;
    }
    let mut out = Vec::new();
    let mut place = vec![1usize; n];
    for v in (0..n.saturating_sub(1)).rev() {
        place[v] = place[v + 1] * choices;
    }
    for code in 0..total {
        if !valid[code] {
            continue;
        }
        let maximal = (0..n).all(|v| {
            let digit = code / place[v] % choices;
            digit != 0 || (1..choices).all(|d| !valid[code + d * place[v]])
        });
        if maximal {
            let set = decode(code);
            out.push(MarginalCorrespondence { base_subset: set.iter().map(|x| x.node).collect(), inflation_subset: set });
        }
    }
    Ok(out)
}

/// A bipartition of node copies crossed by no source copy: the connected
/// component of the first node copy against the rest.
pub fn separable_cut(infl: &Inflation) -> Option<(Vec<NodeCopy>, Vec<NodeCopy>)> {
    let q = infl.num_qubits();
    let mut parent: Vec<usize> = (0..q).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for per_copy in &infl.wiring {
        for ends in per_copy {
            let first = infl.qubit(ends[0]);
            for e in &ends[1..] {
                let (a, b) = (find(&mut parent, first), find(&mut parent, infl.qubit(*e)));
                parent[a] = b;
            }
        }
    }
    let root = find(&mut parent, 0);
    let (mut left, mut right) = (Vec::new(), Vec::new());
    for x in 0..q {
        let nc = infl.node_copy(x);
        if find(&mut parent, x) == root {
            left.push(nc);
        } else {
            right.push(nc);
        }
    }
    if right.is_empty() {
        None
    } else {
        left.sort_by_key(|x| (x.copy, x.node));
        right.sort_by_key(|x| (x.copy, x.node));
        Some((left, right))
    }
}
