//! Deciding A-homotopy of maps and of stabilized paths.
//!
//! Maps are homotopic when they are connected in the exponential graph; the
//! search walks that graph with neighbours generated on demand. Paths are
//! compared through homotopy grids, searched one row at a time over rows of a
//! fixed width.

use std::collections::VecDeque;
use std::ops::ControlFlow;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphMap, Vertex};
use crate::grid::{HomotopyGrid, HomotopyTrace};
use crate::hom::for_each_near_map;
use crate::limits::Limits;
use crate::path::{winding_number, StablePath, Winding};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MapHomotopy {
    Yes(HomotopyTrace),
    No,
}

/// Breadth-first search from `f` in the exponential graph.
///
/// The whole component of `f` is explored before answering `No`, so the
/// answer is complete; the only failure is hitting `limits.max_maps`.
pub fn are_homotopic(f: &GraphMap, g: &GraphMap, limits: &Limits) -> Result<MapHomotopy> {
    if f.source() != g.source() || f.target() != g.target() {
        return Err(Error::InvalidInput(
            "maps must share source and target".into(),
        ));
    }
    let (source, target) = (f.source(), f.target());
    let mut states: Vec<Vec<Vertex>> = vec![f.assignment().to_vec()];
    let mut parent: Vec<usize> = vec![0];
    let mut index: FxHashMap<Vec<Vertex>, usize> = FxHashMap::default();
    index.insert(f.assignment().to_vec(), 0);
    let mut found = (f == g).then_some(0);
    let mut head = 0;
    while found.is_none() && head < states.len() {
        let current = states[head].clone();
        let mut overflow = false;
        for_each_near_map(source, target, &current, |h| {
            if index.contains_key(h) {
                return ControlFlow::Continue(());
            }
            if states.len() == limits.max_maps {
                overflow = true;
                return ControlFlow::Break(());
            }
            let id = states.len();
            index.insert(h.to_vec(), id);
            states.push(h.to_vec());
            parent.push(head);
            if h == g.assignment() {
                found = Some(id);
                return ControlFlow::Break(());
            }
            ControlFlow::Continue(())
        });
        if overflow {
            return Err(Error::ResourceLimit(format!(
                "homotopy search visited more than {} maps",
                limits.max_maps
            )));
        }
        head += 1;
    }
    let Some(mut at) = found else {
        return Ok(MapHomotopy::No);
    };
    let mut chain = vec![at];
    while at != 0 {
        at = parent[at];
        chain.push(at);
    }
    chain.reverse();
    let maps = chain
        .into_iter()
        .map(|i| GraphMap::new(source.clone(), target.clone(), states[i].clone()))
        .collect::<Result<Vec<_>>>()?;
    Ok(MapHomotopy::Yes(HomotopyTrace::from_valid(maps)))
}

/// Boundary condition on the rows of a grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum RowEnds {
    /// First and last cells pinned: constant side columns.
    Fixed(Vertex, Vertex),
    /// First cell equal to last cell: equal side columns.
    Closed,
}

/// Rows of a fixed width in `target` under a boundary condition.
pub(crate) struct RowSpace<'a> {
    pub(crate) target: &'a Graph,
    pub(crate) width: usize,
    pub(crate) ends: RowEnds,
}

impl RowSpace<'_> {
    pub(crate) fn admits(&self, row: &[Vertex]) -> bool {
        row.len() == self.width
            && row.windows(2).all(|s| self.target.near(s[0], s[1]))
            && match self.ends {
                RowEnds::Fixed(a, b) => row[0] == a && row[self.width - 1] == b,
                RowEnds::Closed => row[0] == row[self.width - 1],
            }
    }

    /// Every admissible row pointwise equal-or-adjacent to `row`, itself included.
    fn for_each_near(&self, row: &[Vertex], visit: &mut impl FnMut(&[Vertex])) {
        let mut buf = Vec::with_capacity(self.width);
        self.extend(row, &mut buf, visit);
    }

    fn extend(&self, row: &[Vertex], buf: &mut Vec<Vertex>, visit: &mut impl FnMut(&[Vertex])) {
        let i = buf.len();
        if i == self.width {
            visit(buf);
            return;
        }
        let last = i + 1 == self.width;
        for &x in self.target.closed_neighborhood(row[i]) {
            if i > 0 && !self.target.near(buf[i - 1], x) {
                continue;
            }
            let ok = match self.ends {
                RowEnds::Fixed(a, b) => (i != 0 || x == a) && (!last || x == b),
                RowEnds::Closed => !last || i == 0 || x == buf[0],
            };
            if ok {
                buf.push(x);
                self.extend(row, buf, visit);
                buf.pop();
            }
        }
    }
}

/// Row -> id table. Rows are packed into a `u128` when they fit, which
/// avoids hashing and comparing through a heap pointer.
enum RowIndex {
    Packed { bits: usize, map: FxHashMap<u128, usize> },
    Wide(FxHashMap<Vec<Vertex>, usize>),
}

impl RowIndex {
    fn new(target: &Graph, width: usize) -> RowIndex {
        let n = target.num_vertices().max(2);
        let bits = (usize::BITS - (n - 1).leading_zeros()) as usize;
        if bits * width <= 128 {
            RowIndex::Packed { bits, map: FxHashMap::default() }
        } else {
            RowIndex::Wide(FxHashMap::default())
        }
    }

    #[inline]
    fn pack(bits: usize, row: &[Vertex]) -> u128 {
        row.iter().fold(0u128, |acc, &v| (acc << bits) | v as u128)
    }

    #[inline]
    fn get(&self, row: &[Vertex]) -> Option<usize> {
        match self {
            RowIndex::Packed { bits, map } => map.get(&Self::pack(*bits, row)).copied(),
            RowIndex::Wide(map) => map.get(row).copied(),
        }
    }

    fn insert(&mut self, row: &[Vertex], id: usize) {
        match self {
            RowIndex::Packed { bits, map } => {
                map.insert(Self::pack(*bits, row), id);
            }
            RowIndex::Wide(map) => {
                map.insert(row.to_vec(), id);
            }
        }
    }
}

/// Breadth-first exploration of a row space from one row.
pub(crate) struct RowSearch {
    rows: Vec<Vec<Vertex>>,
    parent: Vec<usize>,
    depth: Vec<usize>,
    index: RowIndex,
}

impl RowSearch {
    /// Explores from `start` until `goal` holds, the depth bound is reached
    /// or the component is exhausted. Returns the id of the goal row if found.
    pub(crate) fn run(
        space: &RowSpace<'_>,
        start: Vec<Vertex>,
        max_depth: Option<usize>,
        max_states: usize,
        goal: impl Fn(&[Vertex]) -> bool,
    ) -> Result<(RowSearch, Option<usize>)> {
        debug_assert!(space.admits(&start));
        let mut search = RowSearch {
            rows: vec![start.clone()],
            parent: vec![0],
            depth: vec![0],
            index: RowIndex::new(space.target, space.width),
        };
        search.index.insert(&start, 0);
        if goal(&search.rows[0]) {
            return Ok((search, Some(0)));
        }
        let mut queue = VecDeque::from([0usize]);
        while let Some(at) = queue.pop_front() {
            if max_depth.is_some_and(|d| search.depth[at] >= d) {
                continue;
            }
            let current = search.rows[at].clone();
            let mut found = None;
            let mut fresh = Vec::new();
            space.for_each_near(&current, &mut |row| {
                if found.is_none() && search.index.get(row).is_none() {
                    let id = search.rows.len() + fresh.len();
                    if goal(row) {
                        found = Some(id);
                    }
                    fresh.push(row.to_vec());
                    search.index.insert(row, id);
                }
            });
            for row in fresh {
                let id = search.rows.len();
                search.rows.push(row);
                search.parent.push(at);
                search.depth.push(search.depth[at] + 1);
                queue.push_back(id);
            }
            if search.rows.len() > max_states {
                return Err(Error::ResourceLimit(format!(
                    "row search held more than {max_states} rows of width {}",
                    space.width
                )));
            }
            if found.is_some() {
                return Ok((search, found));
            }
        }
        Ok((search, None))
    }

    /// Rows from the start row to row `id`.
    pub(crate) fn chain_to(&self, mut id: usize) -> Vec<Vec<Vertex>> {
        let mut out = vec![self.rows[id].clone()];
        while id != 0 {
            id = self.parent[id];
            out.push(self.rows[id].clone());
        }
        out.reverse();
        out
    }
}

/// Rows within a bounded number of steps of several start rows at once.
///
/// Each row carries a bitmask of the starts that reach it within the bound.
/// A row is re-expanded only in levels where it gains new starts.
pub(crate) struct RowReach {
    width: usize,
    cells: Vec<Vertex>,
    reached: Vec<u64>,
    index: RowIndex,
}

impl RowReach {
    pub(crate) const MAX_STARTS: usize = 64;

    pub(crate) fn run(
        space: &RowSpace<'_>,
        starts: &[Vec<Vertex>],
        max_depth: usize,
        max_states: usize,
    ) -> Result<RowReach> {
        assert!(starts.len() <= Self::MAX_STARTS, "too many start rows");
        let mut reach = RowReach {
            width: space.width,
            cells: Vec::new(),
            reached: Vec::new(),
            index: RowIndex::new(space.target, space.width),
        };
        let mut active: Vec<(usize, u64)> = Vec::new();
        for (i, start) in starts.iter().enumerate() {
            debug_assert!(space.admits(start));
            let id = reach.id_or_insert(start);
            reach.reached[id] |= 1 << i;
            active.push((id, 1 << i));
        }
        let mut current = vec![0; space.width];
        for _ in 0..max_depth {
            let mut gained: FxHashMap<usize, u64> = FxHashMap::default();
            for &(at, bits) in &active {
                current.copy_from_slice(reach.row(at));
                space.for_each_near(&current, &mut |row| {
                    let id = reach.id_or_insert(row);
                    let fresh = bits & !reach.reached[id];
                    if fresh != 0 {
                        reach.reached[id] |= fresh;
                        *gained.entry(id).or_insert(0) |= fresh;
                    }
                });
                if reach.reached.len() > max_states {
                    return Err(Error::ResourceLimit(format!(
                        "row search held more than {max_states} rows of width {}",
                        space.width
                    )));
                }
            }
            if gained.is_empty() {
                break;
            }
            active = gained.into_iter().collect();
            active.sort_unstable();
        }
        Ok(reach)
    }

    fn id_or_insert(&mut self, row: &[Vertex]) -> usize {
        if let Some(id) = self.index.get(row) {
            return id;
        }
        let id = self.reached.len();
        self.cells.extend_from_slice(row);
        self.reached.push(0);
        self.index.insert(row, id);
        id
    }

    fn row(&self, id: usize) -> &[Vertex] {
        &self.cells[id * self.width..(id + 1) * self.width]
    }

    /// Bitmask of the starts that reach `row` within the bound.
    pub(crate) fn starts_reaching(&self, row: &[Vertex]) -> u64 {
        self.index.get(row).map_or(0, |id| self.reached[id])
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PathHomotopy {
    /// A grid from the first path (top row) to the second (bottom row) with
    /// constant side columns.
    Yes(HomotopyGrid),
    /// The search at the widest allowed window found nothing.
    No,
    /// Nothing found at this window, but a wider one might succeed.
    Undecided,
}

/// Searches for a homotopy rel endpoints from `p` to `q` through rows of
/// `window` cells.
pub fn path_homotopic_rel_endpoints(
    p: &StablePath,
    q: &StablePath,
    window: usize,
    limits: &Limits,
) -> Result<PathHomotopy> {
    if p.target() != q.target() {
        return Err(Error::InvalidInput("paths live in different graphs".into()));
    }
    if p.endpoints() != q.endpoints() {
        return Err(Error::InvalidInput(format!(
            "endpoints differ: {:?} vs {:?}",
            p.endpoints(),
            q.endpoints()
        )));
    }
    let needed = p.word().len().max(q.word().len());
    if window < needed {
        return Err(Error::InvalidInput(format!(
            "window {window} is narrower than the paths (need {needed})"
        )));
    }
    let (a, b) = p.endpoints();
    let space = RowSpace {
        target: p.target(),
        width: window,
        ends: RowEnds::Fixed(a, b),
    };
    let bottom = q.padded(window);
    let (search, found) = RowSearch::run(&space, p.padded(window), None, limits.max_states, |row| {
        row == bottom.as_slice()
    })?;
    Ok(match found {
        Some(id) => PathHomotopy::Yes(HomotopyGrid::from_valid_rows(p.target(), search.chain_to(id))),
        None if window >= limits.max_window => PathHomotopy::No,
        None => PathHomotopy::Undecided,
    })
}

/// Whether a nullhomotopy must keep the basepoint fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basing {
    /// Constant side columns; ends at the constant path at the basepoint.
    Based,
    /// Equal side columns; ends at any constant path.
    Free,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Nullhomotopy {
    Yes(HomotopyGrid),
    /// Nonzero winding in `C_n` with `n >= 5`.
    No(Winding),
}

/// Decides whether a cycle in `C_n` is nullhomotopic.
///
/// For `n >= 5` a nonzero winding number answers `No`. Otherwise the grid
/// search runs with windows `active + 2, active + 4, ..` up to
/// `active + 2n`; running out of windows is an [`Error::InternalLimit`],
/// never a `No`.
pub fn nullhomotopic_in_cycle(path: &StablePath, basing: Basing, limits: &Limits) -> Result<Nullhomotopy> {
    let winding = winding_number(path)?;
    let n = winding.cycle_length;
    if n >= 5 && winding.net != 0 {
        return Ok(Nullhomotopy::No(winding));
    }
    let base = path.start();
    let target = path.target();
    let first = path.active_length() + 2;
    let last = path.active_length() + 2 * n;
    for width in (first..=last).step_by(2) {
        let top = path.padded(width);
        let (space, goal): (RowSpace, Box<dyn Fn(&[Vertex]) -> bool>) = match basing {
            Basing::Based => (
                RowSpace { target, width, ends: RowEnds::Fixed(base, base) },
                Box::new(move |row: &[Vertex]| row.iter().all(|&v| v == base)),
            ),
            Basing::Free => (
                RowSpace { target, width, ends: RowEnds::Closed },
                Box::new(|row: &[Vertex]| row.iter().all(|&v| v == row[0])),
            ),
        };
        let (search, found) = RowSearch::run(&space, top, None, limits.max_states, goal)?;
        if let Some(id) = found {
            return Ok(Nullhomotopy::Yes(HomotopyGrid::from_valid_rows(target, search.chain_to(id))));
        }
    }
    Err(Error::InternalLimit(format!(
        "no nullhomotopy found for a winding-0 cycle in C_{n} with rows up to {last} cells"
    )))
}
