//! Neighbourhood decomposition around a triangle `(A, B, C)`.

use super::Graph;
use crate::error::{Error, Result};

/// The seven disjoint neighbourhood classes of a labelled triangle. Masks
/// never contain `A`, `B` or `C` themselves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TriangleDecomposition {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    /// Common neighbours of all three.
    pub t_abc: u64,
    pub j_ab: u64,
    pub j_ac: u64,
    pub j_bc: u64,
    /// Neighbours of exactly one vertex.
    pub e_a: u64,
    pub e_b: u64,
    pub e_c: u64,
}

/// Emptiness conditions that make a labelled triangle usable for the
/// two-inflation anticommutation argument. Each case fixes which stabilizer
/// element pairs with the chained `g_A g_B`, `g_B g_C` term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TriangleCase {
    /// `J_AB = J_BC = ∅`; partner `g_B`.
    One,
    /// `E_A = E_C = ∅`; partner `g_A g_B g_C`.
    Two,
    /// `E_A = J_AB = ∅`; partner `g_A`.
    Three,
}

impl TriangleCase {
    pub const ALL: [TriangleCase; 3] = [TriangleCase::One, TriangleCase::Two, TriangleCase::Three];

    pub fn number(self) -> u8 {
        match self {
            TriangleCase::One => 1,
            TriangleCase::Two => 2,
            TriangleCase::Three => 3,
        }
    }

    pub fn from_number(k: u8) -> Option<Self> {
        match k {
            1 => Some(TriangleCase::One),
            2 => Some(TriangleCase::Two),
            3 => Some(TriangleCase::Three),
            _ => None,
        }
    }
}

impl TriangleDecomposition {
    pub fn triangle(&self) -> (usize, usize, usize) {
        (self.a, self.b, self.c)
    }

    /// `E_A ∪ E_B ∪ J_AC ∪ J_BC`
    pub fn r_ab(&self) -> u64 {
        self.e_a | self.e_b | self.j_ac | self.j_bc
    }

    /// `E_A ∪ E_C ∪ J_AB ∪ J_BC`, the set rewired towards `A'`.
    pub fn r_ac(&self) -> u64 {
        self.e_a | self.e_c | self.j_ab | self.j_bc
    }

    /// `E_B ∪ E_C ∪ J_AB ∪ J_AC`
    pub fn r_bc(&self) -> u64 {
        self.e_b | self.e_c | self.j_ab | self.j_ac
    }

    /// Neighbourhood of `B` apart from `A` and `C`:
    /// `E_B ∪ J_AB ∪ J_BC ∪ T_ABC`.
    pub fn b_rest(&self) -> u64 {
        self.e_b | self.j_ab | self.j_bc | self.t_abc
    }

    pub fn union(&self) -> u64 {
        self.t_abc | self.j_ab | self.j_ac | self.j_bc | self.e_a | self.e_b | self.e_c
    }

    pub fn satisfies(&self, case: TriangleCase) -> bool {
        match case {
            TriangleCase::One => self.j_ab == 0 && self.j_bc == 0,
            TriangleCase::Two => self.e_a == 0 && self.e_c == 0,
            TriangleCase::Three => self.e_a == 0 && self.j_ab == 0,
        }
    }
}

pub fn triangle_decomposition(g: &Graph, a: usize, b: usize, c: usize) -> Result<TriangleDecomposition> {
    for v in [a, b, c] {
        if v >= g.n() {
            return Err(Error::VertexOutOfRange { vertex: v, n: g.n() });
        }
    }
    if a == b || b == c || a == c || !g.has_edge(a, b) || !g.has_edge(b, c) || !g.has_edge(a, c) {
        return Err(Error::NotATriangle(a, b, c));
    }
    let own = (1u64 << a) | (1 << b) | (1 << c);
    let na = g.neighbors(a) & !own;
    let nb = g.neighbors(b) & !own;
    let nc = g.neighbors(c) & !own;
    let t_abc = na & nb & nc;
    Ok(TriangleDecomposition {
        a,
        b,
        c,
        t_abc,
        j_ab: (na & nb) & !t_abc,
        j_ac: (na & nc) & !t_abc,
        j_bc: (nb & nc) & !t_abc,
        e_a: na & !(nb | nc),
        e_b: nb & !(na | nc),
        e_c: nc & !(na | nb),
    })
}
