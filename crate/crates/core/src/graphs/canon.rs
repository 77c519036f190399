//! Canonical labelling by colour refinement plus individualisation.
//!
//! Every leaf of the search tree gives a relabelled graph; the canonical form
//! is the lexicographically smallest one. Twins inside a cell (vertices `u`,
//! `v` with `N(u) \ {v} == N(v) \ {u}`) are exchanged by an automorphism that
//! fixes the current partition, so only one of them is branched on.

use alloc::vec;
use alloc::vec::Vec;

use super::Graph;

/// Canonical representative together with the labelling that produced it:
/// vertex `v` of the input becomes `labeling[v]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalForm {
    pub graph: Graph,
    pub labeling: Vec<usize>,
}

pub fn canonical_form(g: &Graph) -> CanonicalForm {
    let n = g.n();
    if n == 0 {
        return CanonicalForm { graph: g.clone(), labeling: Vec::new() };
    }
    let mut best: Option<CanonicalForm> = None;
    let root = refine(g, vec![(0..n).collect()]);
    search(g, root, &mut best);
    best.expect("search visits at least one leaf")
}

type Partition = Vec<Vec<usize>>;

fn cell_mask(cell: &[usize]) -> u64 {
    cell.iter().fold(0, |m, &v| m | 1 << v)
}

/// Split cells by the number of neighbours in every cell until stable. The
/// order of the new cells depends only on isomorphism-invariant data.
fn refine(g: &Graph, mut part: Partition) -> Partition {
    loop {
        let masks: Vec<u64> = part.iter().map(|c| cell_mask(c)).collect();
        let mut next: Partition = Vec::with_capacity(part.len());
        for cell in &part {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let mut keyed: Vec<(Vec<u32>, usize)> = cell
                .iter()
                .map(|&v| (masks.iter().map(|m| (g.neighbors(v) & m).count_ones()).collect(), v))
                .collect();
            keyed.sort();
            let mut start = 0;
            for i in 1..=keyed.len() {
                if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                    next.push(keyed[start..i].iter().map(|(_, v)| *v).collect());
                    start = i;
                }
            }
        }
        if next.len() == part.len() {
            return next;
        }
        part = next;
    }
}

fn are_twins(g: &Graph, u: usize, v: usize) -> bool {
    g.neighbors(u) & !(1 << v) == g.neighbors(v) & !(1 << u)
}

fn search(g: &Graph, part: Partition, best: &mut Option<CanonicalForm>) {
    let Some(idx) = part.iter().position(|c| c.len() > 1) else {
        let mut labeling = vec![0usize; g.n()];
        for (label, cell) in part.iter().enumerate() {
            labeling[cell[0]] = label;
        }
        let graph = g.permuted(&labeling);
        if best.as_ref().is_none_or(|b| graph < b.graph) {
            *best = Some(CanonicalForm { graph, labeling });
        }
        return;
    };
    let cell = &part[idx];
    let mut tried: Vec<usize> = Vec::new();
    for &v in cell {
        if tried.iter().any(|&u| are_twins(g, u, v)) {
            continue;
        }
        tried.push(v);
        let mut child: Partition = Vec::with_capacity(part.len() + 1);
        child.extend_from_slice(&part[..idx]);
        child.push(vec![v]);
        child.push(cell.iter().copied().filter(|&u| u != v).collect());
        child.extend_from_slice(&part[idx + 1..]);
        search(g, refine(g, child), best);
    }
}
