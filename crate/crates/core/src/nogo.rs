//! Graph-theoretic exclusions: triangle conditions, low-degree rules and a
//! scan over local-complementation orbits producing replayable certificates.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::graphs::{bits, is_path4, triangle_decomposition, walk_lc_orbit, Graph, LcWalk, TriangleCase};
use crate::witness::{theorem3_witness, Witness};

pub const DEFAULT_SCAN_CAP: usize = 100_000;

/// A labelled triangle `(A, B, C)` meeting one of the three conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TriangleMatch {
    pub triangle: (usize, usize, usize),
    pub case: TriangleCase,
}

/// Low-degree vertex together with the local complementations that expose a
/// qualifying triangle through it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleMatch {
    pub vertex: usize,
    pub degree: usize,
    pub lc: Vec<usize>,
    pub found: TriangleMatch,
}

const LABELINGS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

fn scan_triangles(g: &Graph, within: u64, through: Option<usize>) -> Option<TriangleMatch> {
    for (x, y, z) in g.triangles() {
        if within >> x & 1 == 0 {
            continue;
        }
        if let Some(v) = through {
            if v != x && v != y && v != z {
                continue;
            }
        }
        let tri = [x, y, z];
        for lab in LABELINGS {
            let (a, b, c) = (tri[lab[0]], tri[lab[1]], tri[lab[2]]);
            let td = triangle_decomposition(g, a, b, c).expect("listed triangle");
            if let Some(case) = TriangleCase::ALL.into_iter().find(|&k| td.satisfies(k)) {
                return Some(TriangleMatch { triangle: (a, b, c), case });
            }
        }
    }
    None
}

/// First triangle, labeling and case (lexicographic triangles, then the six
/// labelings, then cases 1..3) satisfying a triangle condition.
pub fn theorem3_check(g: &Graph) -> Option<TriangleMatch> {
    scan_triangles(g, g.all_vertices(), None)
}

fn rule_in(g: &Graph, vertices: u64) -> Option<RuleMatch> {
    // degree at most three first, then degree four
    let order = bits(vertices).filter(|&v| g.degree(v) <= 3).chain(bits(vertices).filter(|&v| g.degree(v) == 4));
    for v in order {
        let degree = g.degree(v);
        let options: Vec<Vec<usize>> = match degree {
            0 => continue,
            1 => {
                let w = bits(g.neighbors(v)).next().expect("degree one");
                vec![vec![], vec![w]]
            }
            2 | 3 => vec![vec![], vec![v]],
            4 => {
                let nb: Vec<usize> = bits(g.neighbors(v)).collect();
                if is_path4(g, &nb).expect("four neighbours") {
                    continue;
                }
                vec![vec![], vec![v]]
            }
            _ => continue,
        };
        for lc in options {
            let h = g.apply_lc_sequence(&lc).expect("vertices in range");
            if let Some(found) = scan_triangles(&h, vertices, Some(v)) {
                return Some(RuleMatch { vertex: v, degree, lc, found });
            }
        }
    }
    None
}

/// A vertex of degree at most three, or of degree four whose neighbourhood
/// does not induce a path, with at most one local complementation making a
/// triangle through it qualify.
pub fn degree_rules_check(g: &Graph) -> Result<Option<RuleMatch>> {
    if g.n() < 3 {
        return Ok(None);
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(rule_in(g, g.all_vertices()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeRule {
    pub vertex: usize,
    pub degree: usize,
    /// Local complementations contributed by the rule itself, at the end of
    /// the certificate's sequence.
    pub lc: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoGoCertificate {
    /// Local complementations turning the input graph into the one carrying
    /// the triangle.
    pub lc_sequence: Vec<usize>,
    pub triangle: (usize, usize, usize),
    pub case: TriangleCase,
    pub rule: Option<DegreeRule>,
    pub witness: Witness,
}

impl NoGoCertificate {
    fn build(g: &Graph, path: &[usize], rule: Option<DegreeRule>, found: TriangleMatch) -> Result<Self> {
        let mut lc_sequence = path.to_vec();
        if let Some(r) = &rule {
            lc_sequence.extend_from_slice(&r.lc);
        }
        let h = g.apply_lc_sequence(&lc_sequence)?;
        let (a, b, c) = found.triangle;
        let td = triangle_decomposition(&h, a, b, c)?;
        let witness = theorem3_witness(&h, &td, found.case)?;
        Ok(Self { lc_sequence, triangle: found.triangle, case: found.case, rule, witness })
    }

    /// The graph the triangle condition refers to.
    pub fn transformed(&self, g: &Graph) -> Result<Graph> {
        g.apply_lc_sequence(&self.lc_sequence)
    }

    /// Replay the sequence on `g`, re-check the degree rule (if any) and the
    /// triangle condition, rebuild the witness and validate its proof data.
    pub fn verify(&self, g: &Graph) -> Result<()> {
        let h = self.transformed(g)?;
        if let Some(r) = &self.rule {
            if r.lc.len() > self.lc_sequence.len() || !self.lc_sequence.ends_with(&r.lc) {
                return Err(Error::Witness("rule steps are not a suffix of the sequence".into()));
            }
            let before = g.apply_lc_sequence(&self.lc_sequence[..self.lc_sequence.len() - r.lc.len()])?;
            if r.vertex >= before.n() || before.degree(r.vertex) != r.degree || r.degree == 0 || r.degree > 4 {
                return Err(Error::Witness("degree rule does not apply".into()));
            }
            if r.degree == 4 {
                let nb: Vec<usize> = bits(before.neighbors(r.vertex)).collect();
                if is_path4(&before, &nb)? {
                    return Err(Error::Witness("neighbourhood of the degree-4 vertex is a path".into()));
                }
            }
            let (a, b, c) = self.triangle;
            if ![a, b, c].contains(&r.vertex) {
                return Err(Error::Witness("rule triangle misses the rule vertex".into()));
            }
        }
        let (a, b, c) = self.triangle;
        let td = triangle_decomposition(&h, a, b, c)?;
        if !td.satisfies(self.case) {
            return Err(Error::ConditionNotSatisfied { case: self.case.number(), a, b, c });
        }
        let rebuilt = theorem3_witness(&h, &td, self.case)?;
        if rebuilt != self.witness {
            return Err(Error::Witness("stored witness differs from the rebuilt one".into()));
        }
        self.witness.validate()?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScanOutcome {
    Certificate(Box<NoGoCertificate>),
    /// Every orbit member of every nontrivial component was checked.
    NoMatch { visited: usize },
    CapExhausted { visited: usize },
    /// All components have at most two vertices.
    TriviallyPreparable,
}

impl ScanOutcome {
    pub fn certificate(&self) -> Option<&NoGoCertificate> {
        match self {
            ScanOutcome::Certificate(c) => Some(c),
            _ => None,
        }
    }
}

/// Breadth-first walk of the local-complementation orbit of every component
/// with at least three vertices, trying the degree rules and then the
/// triangle conditions on each member.
pub fn observation1_scan(g: &Graph, orbit_cap: usize) -> Result<ScanOutcome> {
    let mut visited_total = 0;
    let mut capped = false;
    let mut any = false;
    for comp in g.components() {
        if comp.count_ones() < 3 {
            continue;
        }
        any = true;
        let walk = walk_lc_orbit(g, comp, orbit_cap, |m| {
            if let Some(r) = rule_in(&m.graph, comp) {
                let rule = DegreeRule { vertex: r.vertex, degree: r.degree, lc: r.lc };
                return ControlFlow::Break((m.path.clone(), Some(rule), r.found));
            }
            let hit = scan_triangles(&m.graph, comp, None);
            match hit {
                Some(found) => ControlFlow::Break((m.path.clone(), None, found)),
                None => ControlFlow::Continue(()),
            }
        });
        match walk {
            LcWalk::Found { value: (path, rule, found), .. } => {
                return Ok(ScanOutcome::Certificate(Box::new(NoGoCertificate::build(g, &path, rule, found)?)));
            }
            LcWalk::Exhausted { visited } => visited_total += visited,
            LcWalk::CapReached { visited } => {
                visited_total += visited;
                capped = true;
            }
        }
    }
    Ok(match (any, capped) {
        (false, _) => ScanOutcome::TriviallyPreparable,
        (true, true) => ScanOutcome::CapExhausted { visited: visited_total },
        (true, false) => ScanOutcome::NoMatch { visited: visited_total },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::connected_graphs;

    #[test]
    fn triangle_scan_examples() {
        let k3 = Graph::complete(3).unwrap();
        let m = theorem3_check(&k3).unwrap();
        assert_eq!((m.triangle, m.case), ((0, 1, 2), TriangleCase::One));
        let m = theorem3_check(&Graph::complete(4).unwrap()).unwrap();
        assert_eq!(m.case, TriangleCase::One);
        assert!(theorem3_check(&Graph::cycle(4).unwrap()).is_none());
    }

    #[test]
    fn degree_rules_examples() {
        let c4 = Graph::cycle(4).unwrap();
        let r = degree_rules_check(&c4).unwrap().unwrap();
        assert_eq!((r.vertex, r.degree, r.lc.clone()), (0, 2, vec![0]));
        // wheel with four rim vertices
        let wheel = Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (2, 3), (3, 4), (4, 1)]).unwrap();
        assert!(degree_rules_check(&wheel).unwrap().unwrap().degree <= 3);
        let two = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(degree_rules_check(&two), Err(Error::Disconnected));
        assert_eq!(degree_rules_check(&Graph::path(2).unwrap()), Ok(None));
    }

    #[test]
    fn rule_fails_only_when_every_low_vertex_is_a_p4_hub() {
        // the octahedron complement of a perfect matching on six vertices
        // has every vertex of degree 4 with neighbourhood C4, which is not P4
        let oct = Graph::complete(6).unwrap();
        let mut oct = oct;
        for (u, v) in [(0, 1), (2, 3), (4, 5)] {
            oct.remove_edge(u, v).unwrap();
        }
        assert!(degree_rules_check(&oct).unwrap().is_some());
        // search small graphs for one where every degree is >= 4 and every
        // degree-4 neighbourhood induces P4
        let mut found = false;
        for n in 5..=8 {
            for g in connected_graphs(n).unwrap() {
                let all_p4 = (0..n).all(|v| {
                    let d = g.degree(v);
                    d > 4 || (d == 4 && is_path4(&g, &bits(g.neighbors(v)).collect::<Vec<_>>()).unwrap())
                });
                if all_p4 {
                    assert!(degree_rules_check(&g).unwrap().is_none());
                    found = true;
                }
            }
            if found {
                break;
            }
        }
        assert!(found);
    }

    #[test]
    fn scan_small_cases() {
        let c4 = Graph::cycle(4).unwrap();
        let cert = observation1_scan(&c4, DEFAULT_SCAN_CAP).unwrap();
        let cert = cert.certificate().unwrap();
        assert!(cert.rule.is_some());
        assert_eq!(cert.lc_sequence.len() - cert.rule.as_ref().unwrap().lc.len(), 0);
        cert.verify(&c4).unwrap();
        let grid = Graph::grid(3, 3).unwrap();
        let out = observation1_scan(&grid, DEFAULT_SCAN_CAP).unwrap();
        let cert = out.certificate().unwrap();
        assert!(cert.rule.as_ref().unwrap().degree <= 3);
        cert.verify(&grid).unwrap();
        let pair = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(observation1_scan(&pair, 10).unwrap(), ScanOutcome::TriviallyPreparable);
        // a triangle plus an isolated edge: only the triangle is scanned
        let mixed = Graph::from_edges(5, &[(0, 1), (1, 2), (0, 2), (3, 4)]).unwrap();
        let out = observation1_scan(&mixed, 10).unwrap();
        out.certificate().unwrap().verify(&mixed).unwrap();
    }

    #[test]
    fn tampered_certificate_rejected() {
        let g = Graph::cycle(5).unwrap();
        let out = observation1_scan(&g, DEFAULT_SCAN_CAP).unwrap();
        let mut cert = out.certificate().unwrap().clone();
        cert.verify(&g).unwrap();
        cert.lc_sequence.clear();
        cert.rule = None;
        assert!(cert.verify(&g).is_err());
    }
}
