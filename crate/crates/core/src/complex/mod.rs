//! Finite windows onto the complexes of vertex lattices: neighbour
//! enumeration, simplices, and breadth-first balls exported as DOT or JSON.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fq::{enumerate_subspaces, FqField};
use crate::hermitian::{induced_symplectic_space, HermitianLattice, LatticeRecord, Variant};

/// Default cap on candidate subspaces examined per enumeration.
pub const DEFAULT_BUDGET: u64 = 100_000;

/// All vertex lattices `Λ′ ⊆ Λ`, as preimages of `W^⊥` for the rational
/// isotropic `W ⊆ Λ/Λ^♯`. A `W` of dimension `m − i` gives type `2i`.
pub fn sub_vertex_lattices(lattice: &HermitianLattice, budget: u64) -> Result<Vec<(HermitianLattice, usize)>> {
    let quotient = induced_symplectic_space(lattice)?;
    let v = quotient.space();
    let m = v.m();
    let mut out = Vec::new();
    for dim_w in 0..=m {
        for w in v.rational_isotropic(dim_w, budget)? {
            let lattice = quotient.preimage(&v.perp(&w))?;
            out.push((lattice, 2 * (m - dim_w)));
        }
    }
    out.sort();
    Ok(out)
}

/// All vertex lattices `M ⊋ Λ`. Such an `M` has `πM ⊆ M^♯ ⊆ Λ^♯`, so it is
/// found among the lifts of the `F_p`-subspaces of `π^{-1}Λ^♯/Λ`.
pub fn super_vertex_lattices(lattice: &HermitianLattice, budget: u64) -> Result<Vec<(HermitianLattice, usize)>> {
    let dual = lattice.dual()?;
    lattice.vertex_type_with_dual(&dual)?;
    let big = dual.pi_multiple(-1);
    let p = lattice.space().params().p();

    // Basis of big/Λ from the Hermite basis of big: π kills the quotient,
    // so each vector not yet covered raises the index by exactly one.
    let mut chosen = Vec::new();
    let mut acc = lattice.clone();
    for j in 0..big.dim() {
        let mut coeffs = vec![0u64; big.dim()];
        coeffs[j] = 1;
        let v = big.combination(&coeffs);
        let next = acc.extend(std::slice::from_ref(&v), big.scale())?;
        if next != acc {
            chosen.push(j);
            acc = next;
        }
    }
    debug_assert_eq!(acc, big);

    let field = Arc::new(FqField::new(p, 1)?);
    let d = chosen.len();
    let mut out = Vec::new();
    let mut spent = 0u64;
    for dim in 1..=d {
        let remaining = budget.checked_sub(spent).filter(|&r| r > 0).ok_or(Error::SearchTooLarge { budget })?;
        let subs = enumerate_subspaces(&field, d, dim, remaining).map_err(|e| match e {
            Error::SearchTooLarge { .. } => Error::SearchTooLarge { budget },
            other => other,
        })?;
        spent += subs.len() as u64;
        if spent > budget {
            return Err(Error::SearchTooLarge { budget });
        }
        for s in subs {
            let lifts: Vec<_> = s
                .basis()
                .iter()
                .map(|row| {
                    let mut coeffs = vec![0u64; big.dim()];
                    for (&j, &x) in chosen.iter().zip(row) {
                        coeffs[j] = x as u64;
                    }
                    big.combination(&coeffs)
                })
                .collect();
            let m = lattice.extend(&lifts, big.scale())?;
            match m.vertex_type() {
                Ok(t) => out.push((m, t)),
                Err(Error::NotVertex(_)) => {}
                Err(e) => return Err(e),
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Whether the lattices form a chain under inclusion (pairwise comparable and
/// distinct).
pub fn is_simplex(lattices: &[HermitianLattice]) -> Result<bool> {
    for (i, a) in lattices.iter().enumerate() {
        for b in &lattices[..i] {
            if a == b || !(a.contains(b)? || b.contains(a)?) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ComplexKind {
    T,
    L,
}

impl FromStr for ComplexKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "T" | "t" => Ok(ComplexKind::T),
            "L" | "l" => Ok(ComplexKind::L),
            other => Err(Error::Parse(format!("unknown complex {other:?}, expected T or L"))),
        }
    }
}

impl fmt::Display for ComplexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ComplexKind::T => "T",
            ComplexKind::L => "L",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EdgeKind {
    Inclusion,
    TypeNIntersection,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphNode {
    pub lattice: HermitianLattice,
    pub vertex_type: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct GraphEdge {
    pub a: usize,
    pub b: usize,
    pub kind: EdgeKind,
}

/// A ball in one of the complexes. Node `0` is the centre; nodes are listed by
/// distance, then in lattice order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexComplexGraph {
    pub kind: ComplexKind,
    pub radius: usize,
    pub nodes: Vec<GraphNode>,
    pub edges: Vec<GraphEdge>,
}

fn uses_l_rules(kind: ComplexKind, lattice: &HermitianLattice) -> bool {
    kind == ComplexKind::L && lattice.space().variant() == Some(Variant::SplitEven)
}

/// Neighbours of a vertex in the chosen complex.
pub fn neighbors(
    lattice: &HermitianLattice,
    kind: ComplexKind,
    budget: u64,
) -> Result<Vec<(HermitianLattice, usize, EdgeKind)>> {
    let n = lattice.dim();
    let t = lattice.vertex_type()?;
    let subs = sub_vertex_lattices(lattice, budget)?;
    let supers = super_vertex_lattices(lattice, budget)?;
    let mut out: Vec<(HermitianLattice, usize, EdgeKind)> = subs
        .iter()
        .chain(&supers)
        .filter(|(m, _)| m != lattice)
        .map(|(m, s)| (m.clone(), *s, EdgeKind::Inclusion))
        .collect();
    if uses_l_rules(kind, lattice) {
        if t == n - 2 {
            return Err(Error::InvalidParams(format!("type {t} lattices are not vertices of L")));
        }
        out.retain(|(_, s, _)| *s != n - 2);
        if t == n {
            for (mid, s) in &subs {
                if *s != n - 2 {
                    continue;
                }
                for (other, s2) in super_vertex_lattices(mid, budget)? {
                    if s2 == n && other != *lattice && lattice.intersection(&other)?.vertex_type()? == n - 2 {
                        out.push((other, n, EdgeKind::TypeNIntersection));
                    }
                }
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Breadth-first ball of the given radius around `center`.
pub fn build_ball(center: &HermitianLattice, radius: usize, kind: ComplexKind, budget: u64) -> Result<VertexComplexGraph> {
    let center_type = center.vertex_type()?;
    let mut ids: BTreeMap<HermitianLattice, usize> = BTreeMap::new();
    let mut nodes = vec![GraphNode { lattice: center.clone(), vertex_type: center_type }];
    ids.insert(center.clone(), 0);
    let mut adjacency: Vec<Vec<(HermitianLattice, usize, EdgeKind)>> = Vec::new();
    let mut frontier = vec![0usize];
    let mut depth = 0;
    let mut expanded = 0;
    // Every node, including the outermost shell, is expanded once so that
    // edges between boundary nodes are recorded.
    loop {
        let mut next: Vec<(HermitianLattice, usize)> = Vec::new();
        for &id in &frontier {
            debug_assert_eq!(id, expanded);
            let nb = neighbors(&nodes[id].lattice, kind, budget)?;
            if depth < radius {
                for (m, t, _) in &nb {
                    if !ids.contains_key(m) {
                        next.push((m.clone(), *t));
                    }
                }
            }
            adjacency.push(nb);
            expanded += 1;
        }
        if depth == radius {
            break;
        }
        next.sort();
        next.dedup();
        if nodes.len() + next.len() > budget as usize {
            return Err(Error::SearchTooLarge { budget });
        }
        frontier = Vec::with_capacity(next.len());
        for (m, t) in next {
            let id = nodes.len();
            ids.insert(m.clone(), id);
            nodes.push(GraphNode { lattice: m, vertex_type: t });
            frontier.push(id);
        }
        depth += 1;
        if frontier.is_empty() {
            break;
        }
    }

    let mut edges = Vec::new();
    for (a, nb) in adjacency.iter().enumerate() {
        for (m, _, k) in nb {
            if let Some(&b) = ids.get(m) {
                if a < b {
                    edges.push(GraphEdge { a, b, kind: *k });
                }
            }
        }
    }
    edges.sort();
    edges.dedup();
    Ok(VertexComplexGraph { kind, radius, nodes, edges })
}

impl VertexComplexGraph {
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph G {\n");
        for (i, n) in self.nodes.iter().enumerate() {
            s.push_str(&format!("  n{i} [label=\"type={}\"];\n", n.vertex_type));
        }
        for e in &self.edges {
            s.push_str(&format!("  n{} -- n{};\n", e.a, e.b));
        }
        s.push_str("}\n");
        s
    }

    pub fn to_record(&self) -> GraphRecord {
        GraphRecord {
            nodes: self
                .nodes
                .iter()
                .enumerate()
                .map(|(id, n)| NodeRecord { id, vertex_type: n.vertex_type, lattice: n.lattice.to_record() })
                .collect(),
            edges: self.edges.iter().map(|e| EdgeRecord { a: e.a, b: e.b, kind: e.kind }).collect(),
            center: 0,
            radius: self.radius,
        }
    }

    pub fn is_connected(&self) -> bool {
        if self.nodes.is_empty() {
            return true;
        }
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for e in &self.edges {
            adj[e.a].push(e.b);
            adj[e.b].push(e.a);
        }
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|x| x)
    }

    /// Connected with one edge fewer than nodes.
    pub fn is_tree(&self) -> bool {
        self.is_connected() && self.edges.len() + 1 == self.nodes.len()
    }

    pub fn degree(&self, id: usize) -> usize {
        self.edges.iter().filter(|e| e.a == id || e.b == id).count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeRecord {
    pub id: usize,
    #[serde(rename = "type")]
    pub vertex_type: usize,
    pub lattice: LatticeRecord,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub a: usize,
    pub b: usize,
    pub kind: EdgeKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphRecord {
    pub nodes: Vec<NodeRecord>,
    pub edges: Vec<EdgeRecord>,
    pub center: usize,
    pub radius: usize,
}
