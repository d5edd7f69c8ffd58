//! Cones under the span `I_0 <- I_0 ⊔ I_0 -> I_0` and maps between them.
//!
//! A cone with apex `G` is a stabilized cycle in `G` with four marked
//! positions `v_1 .. v_4`. Cutting the cycle at the marks gives the paths
//! `p_1: v_1 -> v_2`, `p_2: v_3 -> v_2`, `q_2: v_3 -> v_4`, `q_1: v_1 -> v_4`
//! with `p_1 · p_2⁻¹ · q_2 · q_1⁻¹` the cycle again.
//!
//! A cone map from `(G, c_1, v)` to `(H, c_2, w)` is a graph map `f: G -> H`
//! and a homotopy grid whose top row is `f ∘ c_1`, whose bottom row is `c_2`,
//! whose two side columns agree, and which has a column from `f(v_i)` to
//! `w_i` for each mark, at the positions of the marks.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphMap, Vertex};
use crate::grid::{GridDefect, HomotopyGrid};
use crate::hom::enumerate_homomorphisms;
use crate::homotopy::{RowEnds, RowReach, RowSearch, RowSpace};
use crate::limits::Limits;
use crate::path::{canonicalize, strip, winding_number, StablePath};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cone {
    apex: Graph,
    cycle: StablePath,
    marks: [usize; 4],
}

/// The four paths obtained by cutting a cone's cycle at its marks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeDecomposition {
    pub p1: StablePath,
    pub p2: StablePath,
    pub q1: StablePath,
    pub q2: StablePath,
}

impl Cone {
    /// `marks` are positions in the canonical word of `cycle`, nondecreasing.
    pub fn new(apex: &Graph, cycle: StablePath, marks: [usize; 4]) -> Result<Cone> {
        if cycle.target() != apex {
            return Err(Error::InvalidCone("cycle does not live in the apex".into()));
        }
        if !cycle.is_cycle() {
            return Err(Error::InvalidCone(format!(
                "path from {} to {} is not a cycle",
                cycle.start(),
                cycle.end()
            )));
        }
        let k = cycle.active_length();
        if let Some(&i) = marks.iter().find(|&&i| i > k) {
            return Err(Error::InvalidCone(format!(
                "mark position {i} is past the end of a word with {k} steps"
            )));
        }
        if marks.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidCone(format!("mark positions {marks:?} are not ordered")));
        }
        Ok(Cone {
            apex: apex.clone(),
            cycle,
            marks,
        })
    }

    /// Builds a cone from a possibly padded word, carrying the marks through
    /// canonicalization.
    pub fn from_word(apex: &Graph, word: &[Vertex], marks: [usize; 4]) -> Result<Cone> {
        if let Some(&i) = marks.iter().find(|&&i| i >= word.len()) {
            return Err(Error::InvalidCone(format!(
                "mark position {i} is outside a word of {} entries",
                word.len()
            )));
        }
        let canonical = canonicalize(apex, word).map_err(|e| Error::InvalidCone(e.to_string()))?;
        let marks = marks.map(|i| canonical.transport(i));
        Cone::new(apex, StablePath::new(apex, &canonical.word)?, marks)
    }

    /// Glues `p_1 · p_2⁻¹ · q_2 · q_1⁻¹` based at `v_1`, marking the junctions.
    pub fn from_quadruple(
        p1: &StablePath,
        p2: &StablePath,
        q1: &StablePath,
        q2: &StablePath,
        v: [Vertex; 4],
    ) -> Result<Cone> {
        let [v1, v2, v3, v4] = v;
        let table = [
            ("p1", p1, (v1, v2)),
            ("p2", p2, (v3, v2)),
            ("q1", q1, (v1, v4)),
            ("q2", q2, (v3, v4)),
        ];
        for (name, path, expected) in table {
            if path.target() != p1.target() {
                return Err(Error::InvalidCone(format!("{name} lives in a different graph")));
            }
            if path.endpoints() != expected {
                return Err(Error::InvalidCone(format!(
                    "{name} runs {:?}, expected {:?}",
                    path.endpoints(),
                    expected
                )));
            }
        }
        let cycle = p1
            .concat(&p2.reverse())?
            .concat(q2)?
            .concat(&q1.reverse())?;
        let a = p1.active_length();
        let b = a + p2.active_length();
        let c = b + q2.active_length();
        Cone::new(p1.target(), cycle, [0, a, b, c])
    }

    /// The cone on `C_n` whose cycle goes once around, `[0, 1, .., n-1, 0]`.
    pub fn identity_cycle(n: usize, marks: [usize; 4]) -> Result<Cone> {
        let apex = Graph::cycle(n)?;
        let word: Vec<Vertex> = (0..n).chain([0]).collect();
        let cycle = StablePath::new(&apex, &word)?;
        Cone::new(&apex, cycle, marks)
    }

    pub fn apex(&self) -> &Graph {
        &self.apex
    }

    pub fn cycle(&self) -> &StablePath {
        &self.cycle
    }

    pub fn marks(&self) -> [usize; 4] {
        self.marks
    }

    /// `v_1 .. v_4`.
    pub fn marked_vertices(&self) -> [Vertex; 4] {
        self.marks.map(|i| self.cycle.word()[i])
    }

    pub fn decompose(&self) -> ConeDecomposition {
        let w = self.cycle.word();
        let [i1, i2, i3, i4] = self.marks;
        let piece = |s: &[Vertex]| StablePath::from_canonical(&self.apex, strip(s).word);
        let mut wrap = w[i4..].to_vec();
        wrap.extend_from_slice(&w[1..=i1]);
        ConeDecomposition {
            p1: piece(&w[i1..=i2]),
            p2: piece(&w[i2..=i3]).reverse(),
            q2: piece(&w[i3..=i4]),
            q1: piece(&wrap).reverse(),
        }
    }

    /// `f_* λ`: the image cone along `f`.
    pub fn pushforward(&self, f: &GraphMap) -> Result<Cone> {
        if f.source() != &self.apex {
            return Err(Error::InvalidInput("map does not start at the cone's apex".into()));
        }
        let (cycle, canonical) = self.cycle.map_with_transport(f)?;
        let marks = self.marks.map(|i| canonical.transport(i));
        Cone::new(f.target(), cycle, marks)
    }
}

/// The cone that no cone map out of `source` can reach: the identity cycle
/// on `C_N`, `N = max(m + 1, 5)` with `m` the active length of the source
/// cycle, all marks at position 0.
pub fn obstruction_cone(source: &Cone) -> Cone {
    let n = (source.cycle.active_length() + 1).max(5);
    Cone::identity_cycle(n, [0; 4]).expect("n >= 5")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeMap {
    map: GraphMap,
    target: Cone,
    homotopy: HomotopyGrid,
}

impl ConeMap {
    /// Assembles a candidate; check it with [`verify_cone_map`].
    pub fn new(map: GraphMap, target: Cone, homotopy: HomotopyGrid) -> ConeMap {
        ConeMap {
            map,
            target,
            homotopy,
        }
    }

    pub fn map(&self) -> &GraphMap {
        &self.map
    }

    pub fn target(&self) -> &Cone {
        &self.target
    }

    pub fn homotopy(&self) -> &HomotopyGrid {
        &self.homotopy
    }
}

/// First cone-map condition that fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConeMapDefect {
    SourceMismatch,
    TargetMismatch,
    GridTarget,
    Grid(GridDefect),
    TopRow,
    BottomRow,
    SideColumns,
    MarkColumn(usize),
}

impl fmt::Display for ConeMapDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConeMapDefect::SourceMismatch => f.write_str("map does not start at the source apex"),
            ConeMapDefect::TargetMismatch => f.write_str("map does not land in the target apex"),
            ConeMapDefect::GridTarget => f.write_str("homotopy does not live in the target apex"),
            ConeMapDefect::Grid(d) => write!(f, "homotopy grid broken: {d}"),
            ConeMapDefect::TopRow => f.write_str("top row is not the image of the source cycle"),
            ConeMapDefect::BottomRow => f.write_str("bottom row is not the target cycle"),
            ConeMapDefect::SideColumns => f.write_str("left and right columns differ"),
            ConeMapDefect::MarkColumn(i) => {
                write!(f, "no column joins f(v_{0}) to w_{0} at the mark positions", i + 1)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    Invalid(ConeMapDefect),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }
}

// Columns of `row` that carry word position `j`, as an inclusive range, for
// each `j`; `None` if `row` is not a constant padding of `word`.
fn alignment(row: &[Vertex], word: &[Vertex]) -> Option<impl Fn(usize) -> (usize, usize)> {
    let k = word.len() - 1;
    let last = row.len() - 1;
    let lead = row.iter().take_while(|&&v| v == word[0]).count();
    let offset = if k == 0 {
        if lead != row.len() {
            return None;
        }
        0
    } else {
        let offset = lead.checked_sub(1)?;
        if offset + k > last
            || row[offset..=offset + k] != *word
            || row[offset + k..].iter().any(|&v| v != word[k])
        {
            return None;
        }
        offset
    };
    Some(move |j: usize| {
        if k == 0 {
            (0, last)
        } else if j == 0 {
            (0, offset)
        } else if j == k {
            (offset + k, last)
        } else {
            (offset + j, offset + j)
        }
    })
}

// Leftmost nondecreasing choice of one column per mark, or the first mark
// that has none.
fn choose_columns(
    top: &impl Fn(usize) -> (usize, usize),
    top_marks: [usize; 4],
    bottom: &impl Fn(usize) -> (usize, usize),
    bottom_marks: [usize; 4],
) -> Result<[usize; 4], usize> {
    let mut columns = [0; 4];
    let mut at = 0;
    for i in 0..4 {
        let (a, b) = top(top_marks[i]);
        let (c, d) = bottom(bottom_marks[i]);
        let lo = a.max(c).max(at);
        if lo > b.min(d) {
            return Err(i);
        }
        columns[i] = lo;
        at = lo;
    }
    Ok(columns)
}

/// Re-checks every cone-map condition of `candidate` against `source`.
pub fn verify_cone_map(source: &Cone, candidate: &ConeMap) -> Verdict {
    match check_cone_map(source, candidate) {
        Ok(_) => Verdict::Valid,
        Err(d) => Verdict::Invalid(d),
    }
}

/// The columns realizing the four marks, if `candidate` is a valid cone map.
pub fn mark_columns(source: &Cone, candidate: &ConeMap) -> Option<[usize; 4]> {
    check_cone_map(source, candidate).ok()
}

fn check_cone_map(source: &Cone, cm: &ConeMap) -> Result<[usize; 4], ConeMapDefect> {
    if cm.map.source() != &source.apex {
        return Err(ConeMapDefect::SourceMismatch);
    }
    if cm.map.target() != &cm.target.apex {
        return Err(ConeMapDefect::TargetMismatch);
    }
    let grid = &cm.homotopy;
    if grid.target() != &cm.target.apex {
        return Err(ConeMapDefect::GridTarget);
    }
    grid.validate().map_err(ConeMapDefect::Grid)?;
    let image = source
        .pushforward(&cm.map)
        .map_err(|_| ConeMapDefect::SourceMismatch)?;
    let top = alignment(grid.row(0), image.cycle.word()).ok_or(ConeMapDefect::TopRow)?;
    let bottom = alignment(grid.row(grid.height() - 1), cm.target.cycle.word())
        .ok_or(ConeMapDefect::BottomRow)?;
    if grid.column(0) != grid.column(grid.width() - 1) {
        return Err(ConeMapDefect::SideColumns);
    }
    choose_columns(&top, image.marks, &bottom, cm.target.marks).map_err(ConeMapDefect::MarkColumn)
}

/// One line of an obstruction report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReportEntry {
    /// Position of `f` in the canonical order of `Hom(apex, C_N)`.
    pub index: usize,
    /// Winding number of `f ∘ c_1`.
    pub winding: i64,
}

/// Windings of `f ∘ c_1` for every `f: G -> C_N`, against the winding of the
/// obstruction cone's cycle.
///
/// A valid cone map forces the two windings to agree (every unit square of a
/// grid in `C_N`, `N >= 5`, has zero net winding around its boundary and the
/// side columns cancel), so a report with no matching entry rules out every
/// cone map into the obstruction cone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObstructionReport {
    pub cycle_length: usize,
    pub target_winding: i64,
    pub entries: Vec<ReportEntry>,
}

impl ObstructionReport {
    /// True when no map can carry a cone map.
    pub fn is_certified(&self) -> bool {
        self.entries.iter().all(|e| e.winding != self.target_winding)
    }

    /// Recomputes the report for `source` and compares.
    pub fn verify(&self, source: &Cone, limits: &Limits) -> Result<()> {
        let fresh = certify_no_cone_map(source, limits)?;
        if &fresh != self {
            return Err(Error::InvalidInput(
                "report does not match a recomputation for this cone".into(),
            ));
        }
        Ok(())
    }
}

/// Computes the obstruction report for `source` against
/// [`obstruction_cone`]`(source)`.
pub fn certify_no_cone_map(source: &Cone, limits: &Limits) -> Result<ObstructionReport> {
    let target = obstruction_cone(source);
    let target_winding = winding_number(target.cycle())?.turns();
    let entries = enumerate_homomorphisms(&source.apex, &target.apex, limits)?
        .iter()
        .enumerate()
        .map(|(index, f)| {
            let image = source.cycle.map(f)?;
            Ok(ReportEntry {
                index,
                winding: winding_number(&image)?.turns(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ObstructionReport {
        cycle_length: target.apex.num_vertices(),
        target_winding,
        entries,
    })
}

// Every way to pad `word` with constants to `width` entries.
fn paddings(word: &[Vertex], width: usize) -> Vec<Vec<Vertex>> {
    if width < word.len() {
        return Vec::new();
    }
    if word.len() == 1 {
        return vec![vec![word[0]; width]];
    }
    (0..=width - word.len())
        .map(|lead| {
            let mut row = vec![word[0]; lead];
            row.extend_from_slice(word);
            row.resize(width, word[word.len() - 1]);
            row
        })
        .collect()
}

/// Exhaustive bounded search for cone maps `source -> target`.
///
/// For each `f` in `Hom(apex_src, apex_tgt)` (canonical order), looks for a
/// grid with at most `max_rows` rows and `max_cols` columns satisfying every
/// cone-map condition, trying narrower grids first. Rows of each width are
/// explored from all paddings of the target cycle at once; a padding of
/// `f ∘ c_1` reached within the row bound with compatible mark columns
/// yields a cone map. Returns at most one cone map per `f`.
pub fn search_cone_maps(
    source: &Cone,
    target: &Cone,
    max_rows: usize,
    max_cols: usize,
    limits: &Limits,
) -> Result<Vec<ConeMap>> {
    if max_rows == 0 {
        return Ok(Vec::new());
    }
    let homs = enumerate_homomorphisms(&source.apex, &target.apex, limits)?;
    let images = homs
        .iter()
        .map(|f| source.pushforward(f))
        .collect::<Result<Vec<_>>>()?;
    let bottom_word = target.cycle.word();
    let mut found: Vec<Option<ConeMap>> = homs.iter().map(|_| None).collect();
    for width in bottom_word.len()..=max_cols {
        if found.iter().all(Option::is_some) {
            break;
        }
        let space = RowSpace {
            target: &target.apex,
            width,
            ends: RowEnds::Closed,
        };
        for bottoms in paddings(bottom_word, width).chunks(RowReach::MAX_STARTS) {
            let reach = RowReach::run(&space, bottoms, max_rows - 1, limits.max_states)?;
            let bottom_aligns: Vec<_> = bottoms
                .iter()
                .map(|b| alignment(b, bottom_word).expect("padding aligns"))
                .collect();
            for (i, (f, image)) in homs.iter().zip(&images).enumerate() {
                if found[i].is_some() {
                    continue;
                }
                'tops: for top in paddings(image.cycle.word(), width) {
                    let mut mask = reach.starts_reaching(&top);
                    if mask == 0 {
                        continue;
                    }
                    let top_align = alignment(&top, image.cycle.word()).expect("padding aligns");
                    while mask != 0 {
                        let b = mask.trailing_zeros() as usize;
                        mask &= mask - 1;
                        if choose_columns(&top_align, image.marks, &bottom_aligns[b], target.marks).is_err() {
                            continue;
                        }
                        let (search, hit) = RowSearch::run(
                            &space,
                            top.clone(),
                            Some(max_rows - 1),
                            limits.max_states,
                            |row| row == bottoms[b].as_slice(),
                        )?;
                        let id = hit.expect("reachable within the row bound");
                        let grid = HomotopyGrid::new(&target.apex, search.chain_to(id))?;
                        let candidate = ConeMap::new(f.clone(), target.clone(), grid);
                        debug_assert!(verify_cone_map(source, &candidate).is_valid());
                        found[i] = Some(candidate);
                        break 'tops;
                    }
                }
            }
        }
    }
    Ok(found.into_iter().flatten().collect())
}
