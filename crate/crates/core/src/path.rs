//! Stabilized paths: maps out of the infinite path `I_∞` that are eventually
//! constant in both directions, stored as their canonical finite word.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphMap, Vertex};

/// A stabilized path in `target`.
///
/// The word `w_0 .. w_k` has equal-or-adjacent consecutive entries and is
/// canonical: either `k = 0`, or `w_0 != w_1` and `w_{k-1} != w_k`.
#[derive(Clone, PartialEq, Eq)]
pub struct StablePath {
    target: Graph,
    word: Vec<Vertex>,
}

/// Result of canonicalizing a word: the canonical word and how many entries
/// were stripped from the front.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Canonical {
    pub word: Vec<Vertex>,
    pub leading_removed: usize,
}

impl Canonical {
    /// Where position `i` of the original word lands in the canonical one.
    ///
    /// Stripped entries repeat the first or last canonical value, so they map
    /// to the corresponding end.
    pub fn transport(&self, i: usize) -> usize {
        i.saturating_sub(self.leading_removed).min(self.word.len() - 1)
    }
}

/// Checks the step condition and strips constant padding at both ends.
pub fn canonicalize(target: &Graph, word: &[Vertex]) -> Result<Canonical> {
    check_word(target, word)?;
    Ok(strip(word))
}

fn check_word(target: &Graph, word: &[Vertex]) -> Result<()> {
    if word.is_empty() {
        return Err(Error::NotAPath("empty word".into()));
    }
    if let Some(&v) = word.iter().find(|&&v| v >= target.num_vertices()) {
        return Err(Error::NotAPath(format!("vertex {v} not in the target graph")));
    }
    if let Some(i) = word.windows(2).position(|s| !target.near(s[0], s[1])) {
        return Err(Error::NotAPath(format!(
            "step {i}: {} -> {} is neither a stall nor an edge",
            word[i],
            word[i + 1]
        )));
    }
    Ok(())
}

pub(crate) fn strip(word: &[Vertex]) -> Canonical {
    let first = word[0];
    let lead = word.iter().take_while(|&&v| v == first).count() - 1;
    let rest = &word[lead..];
    let last = *rest.last().expect("nonempty");
    let trail = rest.iter().rev().take_while(|&&v| v == last).count() - 1;
    Canonical {
        word: rest[..rest.len() - trail].to_vec(),
        leading_removed: lead,
    }
}

impl StablePath {
    /// Validates and canonicalizes `word`.
    pub fn new(target: &Graph, word: &[Vertex]) -> Result<StablePath> {
        let Canonical { word, .. } = canonicalize(target, word)?;
        Ok(StablePath {
            target: target.clone(),
            word,
        })
    }

    pub(crate) fn from_canonical(target: &Graph, word: Vec<Vertex>) -> StablePath {
        debug_assert!(check_word(target, &word).is_ok());
        debug_assert_eq!(strip(&word).word, word);
        StablePath {
            target: target.clone(),
            word,
        }
    }

    pub fn constant(target: &Graph, v: Vertex) -> Result<StablePath> {
        StablePath::new(target, &[v])
    }

    pub fn target(&self) -> &Graph {
        &self.target
    }

    pub fn word(&self) -> &[Vertex] {
        &self.word
    }

    /// Size of the active area: the number of steps of the canonical word.
    pub fn active_length(&self) -> usize {
        self.word.len() - 1
    }

    pub fn start(&self) -> Vertex {
        self.word[0]
    }

    pub fn end(&self) -> Vertex {
        self.word[self.word.len() - 1]
    }

    pub fn endpoints(&self) -> (Vertex, Vertex) {
        (self.start(), self.end())
    }

    pub fn is_cycle(&self) -> bool {
        self.start() == self.end()
    }

    pub fn is_constant(&self) -> bool {
        self.word.len() == 1
    }

    pub fn reverse(&self) -> StablePath {
        let mut word = self.word.clone();
        word.reverse();
        StablePath::from_canonical(&self.target, word)
    }

    /// `self · other`, joined at the shared endpoint.
    pub fn concat(&self, other: &StablePath) -> Result<StablePath> {
        if self.target != other.target {
            return Err(Error::Concat("paths live in different graphs".into()));
        }
        if self.end() != other.start() {
            return Err(Error::Concat(format!(
                "first path ends at {}, second starts at {}",
                self.end(),
                other.start()
            )));
        }
        let mut word = self.word.clone();
        word.extend_from_slice(&other.word[1..]);
        Ok(StablePath {
            target: self.target.clone(),
            word: strip(&word).word,
        })
    }

    /// Image under `f`, re-canonicalized.
    pub fn map(&self, f: &GraphMap) -> Result<StablePath> {
        Ok(self.map_with_transport(f)?.0)
    }

    /// Image under `f` together with the position bookkeeping of the
    /// canonicalization step.
    pub fn map_with_transport(&self, f: &GraphMap) -> Result<(StablePath, Canonical)> {
        if f.source() != &self.target {
            return Err(Error::InvalidInput(
                "path does not live in the source of the map".into(),
            ));
        }
        let image: Vec<Vertex> = self.word.iter().map(|&v| f.apply(v)).collect();
        let canonical = strip(&image);
        let path = StablePath::from_canonical(f.target(), canonical.word.clone());
        Ok((path, canonical))
    }

    /// The word padded with copies of its last vertex up to `width` entries.
    pub fn padded(&self, width: usize) -> Vec<Vertex> {
        let mut row = self.word.clone();
        row.resize(width.max(self.word.len()), self.end());
        row
    }
}

impl fmt::Debug for StablePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StablePath{:?}", self.word)
    }
}

/// `f ∘ p`, re-canonicalized.
pub fn map_path(f: &GraphMap, path: &StablePath) -> Result<StablePath> {
    path.map(f)
}

/// Signed step of `a -> b` in `C_n`: +1 forward, -1 backward, 0 for a stall.
#[inline]
pub(crate) fn step_sign(n: usize, a: Vertex, b: Vertex) -> i64 {
    if a == b {
        0
    } else if b == (a + 1) % n {
        1
    } else {
        debug_assert_eq!(a, (b + 1) % n);
        -1
    }
}

/// Signed step sum of a walk in `C_n`.
pub fn net_winding(n: usize, word: &[Vertex]) -> i64 {
    word.windows(2).map(|s| step_sign(n, s[0], s[1])).sum()
}

/// Winding data of a cycle in `C_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Winding {
    pub cycle_length: usize,
    pub net: i64,
}

impl Winding {
    /// Number of full turns, `net / n`.
    pub fn turns(&self) -> i64 {
        self.net / self.cycle_length as i64
    }
}

/// Winding number of a cycle in a cycle graph.
pub fn winding_number(path: &StablePath) -> Result<Winding> {
    let n = path.target().cycle_length().ok_or_else(|| {
        Error::InvalidTarget("winding numbers are only defined in a cycle graph C_n".into())
    })?;
    if !path.is_cycle() {
        return Err(Error::InvalidInput(format!(
            "path from {} to {} is not a cycle",
            path.start(),
            path.end()
        )));
    }
    let net = net_winding(n, path.word());
    debug_assert_eq!(net % n as i64, 0);
    Ok(Winding {
        cycle_length: n,
        net,
    })
}
