//! Breadth-first exploration of local-complementation orbits, deduplicated up
//! to isomorphism.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec::Vec;
use core::ops::ControlFlow;

use super::{bits, canonical_form, Graph};

pub const DEFAULT_ORBIT_CAP: usize = 1_000_000;

/// One orbit representative, reached from the start graph by applying the
/// local complementations in `path`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitMember {
    pub graph: Graph,
    pub path: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LcOrbit {
    /// Canonical forms of the visited classes.
    pub classes: BTreeSet<Graph>,
    pub truncated: bool,
}

/// How a walk ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LcWalk<T> {
    Found { value: T, visited: usize },
    Exhausted { visited: usize },
    CapReached { visited: usize },
}

/// Visit the orbit breadth first, allowing local complementation only at
/// vertices in `allowed`. Representatives are visited in BFS order with
/// vertex order ascending at each step, so the walk is deterministic.
pub fn walk_lc_orbit<T>(
    start: &Graph,
    allowed: u64,
    cap: usize,
    mut visit: impl FnMut(&OrbitMember) -> ControlFlow<T>,
) -> LcWalk<T> {
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(canonical_form(start).graph);
    queue.push_back(OrbitMember { graph: start.clone(), path: Vec::new() });
    let mut visited = 0;
    while let Some(member) = queue.pop_front() {
        visited += 1;
        if let ControlFlow::Break(value) = visit(&member) {
            return LcWalk::Found { value, visited };
        }
        for v in bits(allowed & member.graph.all_vertices()) {
            let mut next = member.graph.clone();
            next.local_complement_in_place(v);
            let key = canonical_form(&next).graph;
            if seen.contains(&key) {
                continue;
            }
            if seen.len() >= cap {
                return LcWalk::CapReached { visited };
            }
            seen.insert(key);
            let mut path = member.path.clone();
            path.push(v);
            queue.push_back(OrbitMember { graph: next, path });
        }
    }
    LcWalk::Exhausted { visited }
}

/// Canonical forms of every graph reachable by local complementations, up to
/// `max_size` classes.
pub fn lc_orbit(g: &Graph, max_size: usize) -> LcOrbit {
    let mut classes = BTreeSet::new();
    let walk = walk_lc_orbit::<()>(g, g.all_vertices(), max_size, |m| {
        classes.insert(canonical_form(&m.graph).graph);
        ControlFlow::Continue(())
    });
    LcOrbit { classes, truncated: matches!(walk, LcWalk::CapReached { .. }) }
}
