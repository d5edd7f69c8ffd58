//! Finite simple graphs and graph maps.
//!
//! Graph maps follow the A-theory convention: an edge must go to an edge or
//! collapse onto a single vertex. Vertices are dense ids `0..n`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub type Vertex = usize;

/// A finite simple graph on vertices `0..num_vertices`.
///
/// Cloning is cheap; the adjacency data is shared.
#[derive(Clone)]
pub struct Graph(Arc<GraphData>);

struct GraphData {
    num_vertices: usize,
    // each edge once, as (u, v) with u < v, sorted
    edges: Vec<(Vertex, Vertex)>,
    // sorted open neighbourhoods
    neighbors: Vec<Vec<Vertex>>,
    // sorted closed neighbourhoods (vertex itself included)
    closed: Vec<Vec<Vertex>>,
    // closed-neighbourhood bit matrix, rows of `words` u64s; small graphs only
    dense: Option<(usize, Vec<u64>)>,
}

const DENSE_LIMIT: usize = 4096;

impl Graph {
    /// Builds a graph, deduplicating edges given in either orientation.
    pub fn new(num_vertices: usize, edges: &[(Vertex, Vertex)]) -> Result<Graph> {
        let mut canon = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u >= num_vertices || v >= num_vertices {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) has an endpoint outside 0..{num_vertices}"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("loop at vertex {u}")));
            }
            canon.push((u.min(v), u.max(v)));
        }
        canon.sort_unstable();
        canon.dedup();
        Ok(Self::from_canonical_edges(num_vertices, canon))
    }

    fn from_canonical_edges(num_vertices: usize, edges: Vec<(Vertex, Vertex)>) -> Graph {
        let mut neighbors = vec![Vec::new(); num_vertices];
        for &(u, v) in &edges {
            neighbors[u].push(v);
            neighbors[v].push(u);
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }
        let closed = neighbors
            .iter()
            .enumerate()
            .map(|(v, list)| {
                let mut c = list.clone();
                let at = c.partition_point(|&w| w < v);
                c.insert(at, v);
                c
            })
            .collect();
        let dense = (num_vertices <= DENSE_LIMIT).then(|| {
            let words = num_vertices.div_ceil(64);
            let mut bits = vec![0u64; words * num_vertices];
            for v in 0..num_vertices {
                bits[v * words + v / 64] |= 1 << (v % 64);
            }
            for &(u, v) in &edges {
                bits[u * words + v / 64] |= 1 << (v % 64);
                bits[v * words + u / 64] |= 1 << (u % 64);
            }
            (words, bits)
        });
        Graph(Arc::new(GraphData {
            num_vertices,
            edges,
            neighbors,
            closed,
            dense,
        }))
    }

    /// The graph with no vertices.
    pub fn empty() -> Graph {
        Self::from_canonical_edges(0, Vec::new())
    }

    /// `S · I_0`: `size` isolated vertices.
    pub fn discrete(size: usize) -> Graph {
        Self::from_canonical_edges(size, Vec::new())
    }

    /// The path graph `I_n` on vertices `0..=n`.
    pub fn path(length: usize) -> Graph {
        let edges = (0..length).map(|i| (i, i + 1)).collect();
        Self::from_canonical_edges(length + 1, edges)
    }

    /// The cycle graph `C_n`, edges `{i, i+1 mod n}`. Needs `n >= 3`.
    pub fn cycle(length: usize) -> Result<Graph> {
        if length < 3 {
            return Err(Error::InvalidGraph(format!(
                "cycle graph C_{length} is not simple (need n >= 3)"
            )));
        }
        let edges: Vec<_> = (0..length).map(|i| (i, (i + 1) % length)).collect();
        Graph::new(length, &edges)
    }

    /// `I_1^{⊗n}`, the graph of the combinatorial `n`-cube. `Q_0 = I_0`.
    pub fn cube(dim: usize) -> Graph {
        let edge = Graph::path(1);
        (0..dim).fold(Graph::path(0), |acc, _| acc.box_product(&edge))
    }

    pub fn num_vertices(&self) -> usize {
        self.0.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.0.edges.len()
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.0.num_vertices
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.0.edges
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.0.neighbors[v]
    }

    /// Neighbours of `v` together with `v` itself, sorted.
    pub fn closed_neighborhood(&self, v: Vertex) -> &[Vertex] {
        &self.0.closed[v]
    }

    #[inline]
    pub fn adjacent(&self, u: Vertex, v: Vertex) -> bool {
        u != v && self.near(u, v)
    }

    /// Equal or adjacent: the step relation of stabilized paths and homotopies.
    #[inline]
    pub fn near(&self, u: Vertex, v: Vertex) -> bool {
        match &self.0.dense {
            Some((words, bits)) => bits[u * words + v / 64] >> (v % 64) & 1 == 1,
            None => u == v || self.0.neighbors[u].binary_search(&v).is_ok(),
        }
    }

    /// The closed neighbourhood of `v` as a bit set, for graphs small enough
    /// to keep one.
    pub(crate) fn closed_bits(&self, v: Vertex) -> Option<&[u64]> {
        self.0
            .dense
            .as_ref()
            .map(|(words, bits)| &bits[v * words..(v + 1) * words])
    }

    /// If this graph is exactly the labelled cycle `C_n`, returns `n`.
    pub fn cycle_length(&self) -> Option<usize> {
        let n = self.num_vertices();
        if n < 3 || self.num_edges() != n {
            return None;
        }
        (0..n)
            .all(|i| self.adjacent(i, (i + 1) % n))
            .then_some(n)
    }

    /// `G ⊔ H` with the two injections. `H`'s ids are shifted by `|V(G)|`.
    pub fn disjoint_union(&self, other: &Graph) -> (Graph, GraphMap, GraphMap) {
        let offset = self.num_vertices();
        let mut edges = self.edges().to_vec();
        edges.extend(other.edges().iter().map(|&(u, v)| (u + offset, v + offset)));
        let union = Self::from_canonical_edges(offset + other.num_vertices(), edges);
        let left = GraphMap::new_unchecked(self.clone(), union.clone(), self.vertices().collect());
        let right = GraphMap::new_unchecked(
            other.clone(),
            union.clone(),
            other.vertices().map(|v| v + offset).collect(),
        );
        (union, left, right)
    }

    /// Box product `G ⊗ H`; vertex `(g, h)` has id `g * |V(H)| + h`.
    pub fn box_product(&self, other: &Graph) -> Graph {
        let width = other.num_vertices();
        let id = |g: Vertex, h: Vertex| g * width + h;
        let mut edges = Vec::with_capacity(
            self.num_vertices() * other.num_edges() + self.num_edges() * width,
        );
        for g in self.vertices() {
            for &(h, k) in other.edges() {
                edges.push((id(g, h), id(g, k)));
            }
        }
        for &(g, k) in self.edges() {
            for h in other.vertices() {
                edges.push((id(g, h), id(k, h)));
            }
        }
        edges.sort_unstable();
        Self::from_canonical_edges(self.num_vertices() * width, edges)
    }
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.num_vertices == other.0.num_vertices && self.0.edges == other.0.edges)
    }
}

impl Eq for Graph {}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("num_vertices", &self.num_vertices())
            .field("edges", &self.edges())
            .finish()
    }
}

/// Checks the hom condition for a raw assignment.
///
/// Errors if the assignment has the wrong length or leaves the target.
pub fn is_graph_map(source: &Graph, target: &Graph, assignment: &[Vertex]) -> Result<bool> {
    check_assignment_shape(source, target, assignment)?;
    Ok(satisfies_hom_condition(source, target, assignment))
}

fn check_assignment_shape(source: &Graph, target: &Graph, assignment: &[Vertex]) -> Result<()> {
    if assignment.len() != source.num_vertices() {
        return Err(Error::InvalidMap(format!(
            "assignment has {} entries for {} source vertices",
            assignment.len(),
            source.num_vertices()
        )));
    }
    if let Some((v, &w)) = assignment
        .iter()
        .enumerate()
        .find(|&(_, &w)| w >= target.num_vertices())
    {
        return Err(Error::InvalidMap(format!(
            "vertex {v} is sent to {w}, outside 0..{}",
            target.num_vertices()
        )));
    }
    Ok(())
}

pub(crate) fn satisfies_hom_condition(source: &Graph, target: &Graph, assignment: &[Vertex]) -> bool {
    source
        .edges()
        .iter()
        .all(|&(u, v)| target.near(assignment[u], assignment[v]))
}

/// A vertex map satisfying the hom condition (edge collapsing allowed).
#[derive(Clone, PartialEq, Eq)]
pub struct GraphMap {
    source: Graph,
    target: Graph,
    assignment: Vec<Vertex>,
}

impl GraphMap {
    pub fn new(source: Graph, target: Graph, assignment: Vec<Vertex>) -> Result<GraphMap> {
        check_assignment_shape(&source, &target, &assignment)?;
        if let Some(&(u, v)) = source
            .edges()
            .iter()
            .find(|&&(u, v)| !target.near(assignment[u], assignment[v]))
        {
            return Err(Error::InvalidMap(format!(
                "edge ({u}, {v}) goes to non-adjacent ({}, {})",
                assignment[u], assignment[v]
            )));
        }
        Ok(GraphMap {
            source,
            target,
            assignment,
        })
    }

    pub(crate) fn new_unchecked(source: Graph, target: Graph, assignment: Vec<Vertex>) -> GraphMap {
        debug_assert!(satisfies_hom_condition(&source, &target, &assignment));
        GraphMap {
            source,
            target,
            assignment,
        }
    }

    pub fn identity(graph: &Graph) -> GraphMap {
        GraphMap::new_unchecked(graph.clone(), graph.clone(), graph.vertices().collect())
    }

    pub fn constant(source: &Graph, target: &Graph, value: Vertex) -> Result<GraphMap> {
        if value >= target.num_vertices() {
            return Err(Error::InvalidMap(format!("constant value {value} not in target")));
        }
        Ok(GraphMap::new_unchecked(
            source.clone(),
            target.clone(),
            vec![value; source.num_vertices()],
        ))
    }

    pub fn source(&self) -> &Graph {
        &self.source
    }

    pub fn target(&self) -> &Graph {
        &self.target
    }

    pub fn assignment(&self) -> &[Vertex] {
        &self.assignment
    }

    pub fn apply(&self, v: Vertex) -> Vertex {
        self.assignment[v]
    }

    /// `self ∘ inner`: first `inner`, then `self`.
    pub fn compose(&self, inner: &GraphMap) -> Result<GraphMap> {
        if inner.target != self.source {
            return Err(Error::Composition(
                "target of the inner map differs from the source of the outer map".into(),
            ));
        }
        let assignment = inner.assignment.iter().map(|&v| self.assignment[v]).collect();
        Ok(GraphMap::new_unchecked(
            inner.source.clone(),
            self.target.clone(),
            assignment,
        ))
    }

    /// One-step homotopy relation: pointwise equal or adjacent.
    pub fn is_near(&self, other: &GraphMap) -> bool {
        self.source == other.source
            && self.target == other.target
            && self
                .assignment
                .iter()
                .zip(&other.assignment)
                .all(|(&a, &b)| self.target.near(a, b))
    }
}

impl fmt::Debug for GraphMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GraphMap({} -> {}: {:?})",
            self.source.num_vertices(),
            self.target.num_vertices(),
            self.assignment
        )
    }
}
