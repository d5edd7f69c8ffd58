//! Homomorphism sets: enumeration, counting and the exponential graph `H^G`.

use std::ops::ControlFlow;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphMap, Vertex};
use crate::limits::Limits;

/// Backtracking search over assignments `source -> target`.
///
/// Vertices are assigned in id order and candidates are tried in increasing
/// order, so solutions come out in lexicographic order. A partial assignment
/// is cut as soon as a vertex disagrees with an already assigned neighbour.
pub(crate) struct HomSearch<'a> {
    source: &'a Graph,
    target: &'a Graph,
    // optional per-vertex allowed values, each sorted
    domains: Option<Vec<&'a [Vertex]>>,
    // neighbours with smaller id, per vertex
    earlier: Vec<Vec<Vertex>>,
}

impl<'a> HomSearch<'a> {
    pub(crate) fn new(source: &'a Graph, target: &'a Graph) -> Self {
        let earlier = source
            .vertices()
            .map(|v| source.neighbors(v).iter().copied().filter(|&u| u < v).collect())
            .collect();
        HomSearch {
            source,
            target,
            domains: None,
            earlier,
        }
    }

    /// Restricts every vertex to a sorted candidate list.
    pub(crate) fn with_domains(mut self, domains: Vec<&'a [Vertex]>) -> Self {
        debug_assert_eq!(domains.len(), self.source.num_vertices());
        self.domains = Some(domains);
        self
    }

    fn fill_candidates(&self, v: Vertex, assignment: &[Vertex], out: &mut Vec<Vertex>) {
        out.clear();
        let all: Vec<Vertex>;
        // smallest seed set: the domain, or the closed neighbourhood of an assigned neighbour
        let mut seed: &[Vertex] = match &self.domains {
            Some(d) => d[v],
            None => {
                all = self.target.vertices().collect();
                &all
            }
        };
        for &u in &self.earlier[v] {
            let nb = self.target.closed_neighborhood(assignment[u]);
            if nb.len() < seed.len() {
                seed = nb;
            }
        }
        out.extend(seed.iter().copied().filter(|&x| {
            self.earlier[v]
                .iter()
                .all(|&u| self.target.near(assignment[u], x))
                && self
                    .domains
                    .as_ref()
                    .is_none_or(|d| d[v].binary_search(&x).is_ok())
        }));
    }

    /// Calls `visit` on every solution in lexicographic order until it breaks.
    pub(crate) fn for_each(&self, mut visit: impl FnMut(&[Vertex]) -> ControlFlow<()>) {
        let n = self.source.num_vertices();
        if n == 0 {
            let _ = visit(&[]);
            return;
        }
        let mut assignment = vec![0; n];
        let mut candidates: Vec<Vec<Vertex>> = vec![Vec::new(); n];
        let mut cursor = vec![0usize; n];
        let mut depth = 0;
        self.fill_candidates(0, &assignment, &mut candidates[0]);
        loop {
            if cursor[depth] == candidates[depth].len() {
                if depth == 0 {
                    return;
                }
                depth -= 1;
                continue;
            }
            assignment[depth] = candidates[depth][cursor[depth]];
            cursor[depth] += 1;
            if depth + 1 == n {
                if visit(&assignment).is_break() {
                    return;
                }
            } else {
                depth += 1;
                self.fill_candidates(depth, &assignment, &mut candidates[depth]);
                cursor[depth] = 0;
            }
        }
    }

    /// All solutions, failing once more than `cap` are found.
    pub(crate) fn collect(&self, cap: usize) -> Result<Vec<Vec<Vertex>>> {
        let mut out = Vec::new();
        let mut overflow = false;
        self.for_each(|a| {
            if out.len() == cap {
                overflow = true;
                return ControlFlow::Break(());
            }
            out.push(a.to_vec());
            ControlFlow::Continue(())
        });
        if overflow {
            return Err(Error::ResourceLimit(format!(
                "more than {cap} graph maps {} -> {} vertices",
                self.source.num_vertices(),
                self.target.num_vertices()
            )));
        }
        Ok(out)
    }
}

/// All graph maps `source -> target` in lexicographic order of assignment.
pub fn enumerate_homomorphisms(source: &Graph, target: &Graph, limits: &Limits) -> Result<Vec<GraphMap>> {
    Ok(HomSearch::new(source, target)
        .collect(limits.max_maps)?
        .into_iter()
        .map(|a| GraphMap::new_unchecked(source.clone(), target.clone(), a))
        .collect())
}

/// Calls `visit` for every map pointwise equal-or-adjacent to `assignment`,
/// including `assignment` itself, in lexicographic order.
pub(crate) fn for_each_near_map(
    source: &Graph,
    target: &Graph,
    assignment: &[Vertex],
    visit: impl FnMut(&[Vertex]) -> ControlFlow<()>,
) {
    let domains = assignment
        .iter()
        .map(|&w| target.closed_neighborhood(w))
        .collect();
    HomSearch::new(source, target)
        .with_domains(domains)
        .for_each(visit);
}

/// `|Hom(source, target)|` without listing the maps.
///
/// Dynamic programming over a vertex elimination order: the state is the
/// assignment of the processed vertices that still have unprocessed
/// neighbours. Small state spaces live in a dense array, larger ones in a
/// hash map keyed by the packed assignment. Fails if the frontier does not
/// fit the packed key or the state table outgrows `limits.max_states`.
pub fn count_homomorphisms(source: &Graph, target: &Graph, limits: &Limits) -> Result<u128> {
    let n = source.num_vertices();
    let m = target.num_vertices();
    if n == 0 {
        return Ok(1);
    }
    if m == 0 {
        return Ok(0);
    }
    let order = elimination_order(source);
    // With i -> i+1 mod m an automorphism of the target, maps sending the
    // first vertex to each value are equinumerous: pin it to 0.
    let pinned = is_shift_symmetric(target);

    let mut processed = vec![false; n];
    let mut pending = source.vertices().map(|v| source.neighbors(v).len()).collect::<Vec<_>>();
    let mut frontier: Vec<Vertex> = Vec::new();
    let mut states = StateTable::new(m, 0, 1, limits)?;
    states.add(0, 1)?;

    for &v in &order {
        // slots of v's processed neighbours in the current frontier
        let anchors: Vec<usize> = source
            .neighbors(v)
            .iter()
            .filter(|&&u| processed[u])
            .map(|u| frontier.iter().position(|w| w == u).expect("processed neighbour in frontier"))
            .collect();
        processed[v] = true;
        for &u in source.neighbors(v) {
            pending[u] -= 1;
        }
        let mut next_frontier: Vec<Vertex> = Vec::with_capacity(frontier.len() + 1);
        let mut kept_slots = Vec::with_capacity(frontier.len());
        for (slot, &u) in frontier.iter().enumerate() {
            if pending[u] > 0 {
                kept_slots.push(slot);
                next_frontier.push(u);
            }
        }
        let keep_new = pending[v] > 0;
        if keep_new {
            next_frontier.push(v);
        }
        let step = Step {
            target,
            anchors,
            kept_slots,
            keep_new,
            pin: pinned && v == order[0],
        };
        let mut next = StateTable::new(m, next_frontier.len(), states.len(), limits)?;
        step.apply(&states, &mut next, limits)?;
        states = next;
        frontier = next_frontier;
    }
    debug_assert!(frontier.is_empty());
    let total = states.total();
    if pinned {
        total.checked_mul(m as u128).ok_or_else(overflow)
    } else {
        Ok(total)
    }
}

fn is_shift_symmetric(graph: &Graph) -> bool {
    let m = graph.num_vertices();
    m > 1
        && graph
            .edges()
            .iter()
            .all(|&(u, v)| graph.adjacent((u + 1) % m, (v + 1) % m))
}

/// One vertex of the elimination order: extend every state by the vertex's
/// image, then drop the frontier slots that are no longer needed.
struct Step<'a> {
    target: &'a Graph,
    anchors: Vec<usize>,
    kept_slots: Vec<usize>,
    keep_new: bool,
    // the new vertex only takes the value 0
    pin: bool,
}

impl Step<'_> {
    fn apply(&self, states: &StateTable, next: &mut StateTable, limits: &Limits) -> Result<()> {
        if let (StateTable::Dense { counts: old, .. }, StateTable::Dense { counts: new, .. }) = (states, &mut *next)
        {
            if self.keep_new && self.kept_slots.first() == Some(&0) && !self.anchors.contains(&0) {
                return self.apply_runs(states, old, new);
            }
        }
        let mut values = Vec::new();
        let mut cands = Vec::new();
        let new_stride = next.stride(self.kept_slots.len());
        states.for_each(|key, count| {
            states.decode(key, &mut values);
            let base = self.base(next, &values);
            if self.keep_new {
                self.candidates(&values, &mut cands);
                for &x in &cands {
                    next.add(base + x as u128 * new_stride, count)?;
                }
            } else {
                let choices = self.count_candidates(&values);
                if choices > 0 {
                    next.add(base, count.checked_mul(choices as u128).ok_or_else(overflow)?)?;
                }
            }
            if next.len() > limits.max_states {
                return Err(Error::ResourceLimit(format!(
                    "more than {} counting states",
                    limits.max_states
                )));
            }
            Ok(())
        })
    }

    // Dense tables whose lowest slot is carried along untouched: every
    // assignment of the other slots moves a contiguous run of `m` counts.
    fn apply_runs(&self, states: &StateTable, old: &[u128], new: &mut [u128]) -> Result<()> {
        let m = self.target.num_vertices();
        let new_stride = (m as u128).pow(self.kept_slots.len() as u32) as usize;
        let mut values = Vec::new();
        let mut cands = Vec::new();
        let mut overflowed = false;
        for (outer, run) in old.chunks_exact(m).enumerate() {
            if run.iter().all(|&c| c == 0) {
                continue;
            }
            states.decode((outer * m) as u128, &mut values);
            let base = self.base_dense(m, &values);
            self.candidates(&values, &mut cands);
            for &x in &cands {
                let start = base + x * new_stride;
                for (dst, &src) in new[start..start + m].iter_mut().zip(run) {
                    let (sum, o) = dst.overflowing_add(src);
                    *dst = sum;
                    overflowed |= o;
                }
            }
        }
        if overflowed {
            return Err(overflow());
        }
        Ok(())
    }

    fn base(&self, next: &StateTable, values: &[Vertex]) -> u128 {
        self.kept_slots
            .iter()
            .enumerate()
            .fold(0u128, |acc, (i, &slot)| acc + values[slot] as u128 * next.stride(i))
    }

    fn base_dense(&self, m: usize, values: &[Vertex]) -> usize {
        let mut stride = 1;
        let mut acc = 0;
        for &slot in &self.kept_slots {
            acc += values[slot] * stride;
            stride *= m;
        }
        acc
    }

    // Images of the new vertex compatible with every anchor.
    fn candidates(&self, values: &[Vertex], out: &mut Vec<Vertex>) {
        out.clear();
        if self.pin {
            out.push(0);
            return;
        }
        match self.anchors.split_first() {
            None => out.extend(self.target.vertices()),
            Some((&first, rest)) => out.extend(
                self.target
                    .closed_neighborhood(values[first])
                    .iter()
                    .copied()
                    .filter(|&x| rest.iter().all(|&s| self.target.near(values[s], x))),
            ),
        }
    }

    fn count_candidates(&self, values: &[Vertex]) -> usize {
        if self.pin {
            return 1;
        }
        match self.anchors.as_slice() {
            [] => self.target.num_vertices(),
            [a] => self.target.closed_neighborhood(values[*a]).len(),
            [a, rest @ ..] => match self.target.closed_bits(values[*a]) {
                Some(first) => first
                    .iter()
                    .enumerate()
                    .map(|(w, &bits)| {
                        let both = rest.iter().fold(bits, |acc, &s| {
                            acc & self.target.closed_bits(values[s]).expect("same graph")[w]
                        });
                        both.count_ones() as usize
                    })
                    .sum(),
                None => {
                    let mut cands = Vec::new();
                    self.candidates(values, &mut cands);
                    cands.len()
                }
            },
        }
    }
}

// Largest state space kept as a dense array.
const DENSE_STATES: u128 = 1 << 21;

/// Counts per assignment of the frontier, keyed by the assignment written in
/// base `m` (dense) or packed into fixed-width bit fields (sparse).
enum StateTable {
    Dense { m: usize, width: usize, counts: Vec<u128> },
    Sparse { bits: usize, width: usize, map: FxHashMap<u128, u128> },
}

impl StateTable {
    fn new(m: usize, width: usize, expected: usize, limits: &Limits) -> Result<StateTable> {
        let size = (m as u128).checked_pow(width as u32);
        let dense_limit = DENSE_STATES.min(limits.max_states as u128);
        if let Some(size) = size.filter(|&s| s <= dense_limit) {
            return Ok(StateTable::Dense { m, width, counts: vec![0; size as usize] });
        }
        let bits = (usize::BITS - (m - 1).leading_zeros()).max(1) as usize;
        if width * bits > 128 {
            return Err(Error::ResourceLimit(format!(
                "counting frontier of {width} vertices does not fit the state key"
            )));
        }
        let mut map = FxHashMap::default();
        map.reserve(expected.min(1 << 20));
        Ok(StateTable::Sparse { bits, width, map })
    }

    #[inline]
    fn stride(&self, position: usize) -> u128 {
        match self {
            StateTable::Dense { m, .. } => (*m as u128).pow(position as u32),
            StateTable::Sparse { bits, .. } => 1 << (position * bits),
        }
    }

    #[inline]
    fn add(&mut self, key: u128, count: u128) -> Result<()> {
        let slot = match self {
            StateTable::Dense { counts, .. } => &mut counts[key as usize],
            StateTable::Sparse { map, .. } => map.entry(key).or_insert(0),
        };
        *slot = slot.checked_add(count).ok_or_else(overflow)?;
        Ok(())
    }

    /// Number of stored states; a dense table counts every slot.
    fn len(&self) -> usize {
        match self {
            StateTable::Dense { counts, .. } => counts.len(),
            StateTable::Sparse { map, .. } => map.len(),
        }
    }

    fn for_each(&self, mut visit: impl FnMut(u128, u128) -> Result<()>) -> Result<()> {
        match self {
            StateTable::Dense { counts, .. } => {
                for (key, &count) in counts.iter().enumerate() {
                    if count != 0 {
                        visit(key as u128, count)?;
                    }
                }
            }
            StateTable::Sparse { map, .. } => {
                for (&key, &count) in map {
                    visit(key, count)?;
                }
            }
        }
        Ok(())
    }

    fn decode(&self, mut key: u128, values: &mut Vec<Vertex>) {
        values.clear();
        match self {
            StateTable::Dense { m, width, .. } => {
                let mut key = key as usize;
                for _ in 0..*width {
                    values.push(key % m);
                    key /= m;
                }
            }
            StateTable::Sparse { bits, width, .. } => {
                let mask = (1u128 << bits) - 1;
                for _ in 0..*width {
                    values.push((key & mask) as Vertex);
                    key >>= bits;
                }
            }
        }
    }

    fn total(&self) -> u128 {
        match self {
            StateTable::Dense { counts, .. } => counts.iter().sum(),
            StateTable::Sparse { map, .. } => map.values().sum(),
        }
    }
}

fn overflow() -> Error {
    Error::ResourceLimit("homomorphism count overflows u128".into())
}

// Greedy: next is the vertex with most processed neighbours, then fewest
// unprocessed ones, then smallest id.
fn elimination_order(graph: &Graph) -> Vec<Vertex> {
    let n = graph.num_vertices();
    let mut done = vec![false; n];
    let mut seen = vec![0usize; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = graph
            .vertices()
            .filter(|&v| !done[v])
            .min_by_key(|&v| {
                let open = graph.neighbors(v).len() - seen[v];
                (std::cmp::Reverse(seen[v]), open, v)
            })
            .expect("unprocessed vertex remains");
        done[v] = true;
        for &u in graph.neighbors(v) {
            seen[u] += 1;
        }
        order.push(v);
    }
    order
}

/// The exponential graph `H^G`, materialized.
///
/// Vertex `i` is the `i`-th graph map `G -> H` in lexicographic order; two
/// distinct maps are adjacent when they are pointwise equal or adjacent.
#[derive(Debug, Clone)]
pub struct ExponentialGraph {
    source: Graph,
    target: Graph,
    maps: Vec<Vec<Vertex>>,
    graph: Graph,
}

impl ExponentialGraph {
    pub fn new(source: &Graph, target: &Graph, limits: &Limits) -> Result<ExponentialGraph> {
        let maps = HomSearch::new(source, target).collect(limits.max_maps)?;
        let mut edges = Vec::new();
        for (i, h) in maps.iter().enumerate() {
            for_each_near_map(source, target, h, |g| {
                if let Ok(j) = maps.binary_search_by(|probe| probe.as_slice().cmp(g)) {
                    if j > i {
                        edges.push((i, j));
                    }
                }
                ControlFlow::Continue(())
            });
        }
        let graph = Graph::new(maps.len(), &edges)?;
        Ok(ExponentialGraph {
            source: source.clone(),
            target: target.clone(),
            maps,
            graph,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn map(&self, index: usize) -> GraphMap {
        GraphMap::new_unchecked(self.source.clone(), self.target.clone(), self.maps[index].clone())
    }

    pub fn index_of(&self, assignment: &[Vertex]) -> Option<usize> {
        self.maps
            .binary_search_by(|probe| probe.as_slice().cmp(assignment))
            .ok()
    }
}

/// Materialized `H^G` as a plain graph.
pub fn exponential_graph(source: &Graph, target: &Graph, limits: &Limits) -> Result<Graph> {
    Ok(ExponentialGraph::new(source, target, limits)?.graph)
}
