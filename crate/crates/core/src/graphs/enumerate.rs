//! Isomorphism classes of small graphs, generated by vertex augmentation:
//! every graph on `n` vertices is a graph on `n - 1` vertices plus one vertex
//! joined to some subset.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::{canonical_form, Graph};
use crate::error::{Error, Result};

/// One canonical representative per isomorphism class on `n` vertices.
pub fn nonisomorphic_graphs(n: usize) -> Result<Vec<Graph>> {
    if n > 10 {
        return Err(Error::SearchCap(alloc::format!("graph enumeration limited to 10 vertices, asked {n}")));
    }
    let mut level: BTreeSet<Graph> = BTreeSet::new();
    level.insert(Graph::empty(0)?);
    for k in 1..=n {
        let mut next = BTreeSet::new();
        for g in &level {
            for subset in 0u64..(1 << (k - 1)) {
                let mut adj: Vec<u64> = g.adjacency().to_vec();
                for (v, row) in adj.iter_mut().enumerate() {
                    if subset >> v & 1 == 1 {
                        *row |= 1 << (k - 1);
                    }
                }
                adj.push(subset);
                let h = Graph::from_adjacency(adj)?;
                next.insert(canonical_form(&h).graph);
            }
        }
        level = next;
    }
    Ok(level.into_iter().collect())
}

pub fn connected_graphs(n: usize) -> Result<Vec<Graph>> {
    Ok(nonisomorphic_graphs(n)?.into_iter().filter(Graph::is_connected).collect())
}
