//! Line-oriented text formats for graphs, maps, paths, grids, cones, traces
//! and obstruction reports.
//!
//! Every format is UTF-8 text; `#` starts a comment and blank lines are
//! ignored. Each data line starts with a tag:
//!
//! ```text
//! n <num_vertices>            graph header
//! e <u> <v>                   graph edge
//! m <n_src> <n_tgt>           map header, followed by one `a` line per source vertex
//! a <src_vertex> <tgt_vertex>
//! p <k+1> v0 .. vk            stabilized path
//! g <R+1> <K+1>               grid header, followed by R+1 rows of K+1 ids
//! c <k+1> v0 .. vk            cone cycle (after a graph block)
//! marks i1 i2 i3 i4           cone marks
//! obstruction N=<N> target_winding=<w>
//! f <index> winding=<w>
//! ```
//!
//! A trace is a sequence of map blocks. Writers emit exactly what the parsers
//! accept.

use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::cone::{Cone, ObstructionReport, ReportEntry};
use crate::graph::{Graph, GraphMap, Vertex};
use crate::grid::{HomotopyGrid, HomotopyTrace};
use crate::path::StablePath;

/// Syntax error with a 1-based position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone)]
struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

impl Token<'_> {
    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }

    fn number(&self) -> Result<usize, ParseError> {
        self.text
            .parse()
            .map_err(|_| self.error(format!("expected a nonnegative integer, found `{}`", self.text)))
    }

    fn signed(&self) -> Result<i64, ParseError> {
        self.text
            .parse()
            .map_err(|_| self.error(format!("expected an integer, found `{}`", self.text)))
    }

    /// Value of a `key=value` token.
    fn keyed(&self, key: &str) -> Result<Token<'_>, ParseError> {
        let value = self
            .text
            .strip_prefix(key)
            .and_then(|rest| rest.strip_prefix('='))
            .ok_or_else(|| self.error(format!("expected `{key}=<value>`")))?;
        Ok(Token {
            text: value,
            line: self.line,
            column: self.column + key.len() + 1,
        })
    }
}

/// Data lines of a text, tokenized.
struct Lines<'a> {
    lines: Vec<Vec<Token<'a>>>,
    at: usize,
    last_line: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let mut lines = Vec::new();
        let mut last_line = 0;
        for (i, raw) in text.lines().enumerate() {
            last_line = i + 1;
            let data = raw.split('#').next().unwrap_or("");
            let mut tokens = Vec::new();
            let mut rest = data;
            let mut offset = 0;
            while let Some(start) = rest.find(|c: char| !c.is_whitespace()) {
                let tail = &rest[start..];
                let len = tail.find(char::is_whitespace).unwrap_or(tail.len());
                tokens.push(Token {
                    text: &tail[..len],
                    line: i + 1,
                    column: offset + start + 1,
                });
                offset += start + len;
                rest = &tail[len..];
            }
            if !tokens.is_empty() {
                lines.push(tokens);
            }
        }
        Lines {
            lines,
            at: 0,
            last_line,
        }
    }

    fn peek_tag(&self) -> Option<&str> {
        self.lines.get(self.at).map(|l| l[0].text)
    }

    fn end_error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.last_line + 1,
            column: 1,
            message: message.into(),
        }
    }

    /// Next line, which must start with `tag` and have `arity` more fields
    /// (`None` for any number).
    fn expect(&mut self, tag: &str, arity: Option<usize>) -> Result<Vec<Token<'a>>, ParseError> {
        let line = self
            .lines
            .get(self.at)
            .ok_or_else(|| self.end_error(format!("expected a `{tag}` line, found end of input")))?
            .clone();
        if line[0].text != tag {
            return Err(line[0].error(format!("expected `{tag}`, found `{}`", line[0].text)));
        }
        if let Some(n) = arity {
            if line.len() != n + 1 {
                let at = line.get(n + 1).unwrap_or(&line[line.len() - 1]);
                return Err(at.error(format!("`{tag}` takes {n} fields, found {}", line.len() - 1)));
            }
        }
        self.at += 1;
        Ok(line)
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.lines.get(self.at) {
            Some(line) => Err(line[0].error(format!("unexpected `{}` line", line[0].text))),
            None => Ok(()),
        }
    }
}

fn vertex(token: &Token<'_>, bound: usize) -> Result<Vertex, ParseError> {
    let v = token.number()?;
    if v >= bound {
        return Err(token.error(format!("vertex {v} out of range 0..{bound}")));
    }
    Ok(v)
}

fn graph_block(lines: &mut Lines<'_>) -> Result<Graph, ParseError> {
    let header = lines.expect("n", Some(1))?;
    let n = header[1].number()?;
    let mut edges = Vec::new();
    while lines.peek_tag() == Some("e") {
        let e = lines.expect("e", Some(2))?;
        let u = vertex(&e[1], n)?;
        let v = vertex(&e[2], n)?;
        if u == v {
            return Err(e[2].error(format!("loop edge ({u}, {v})")));
        }
        edges.push((u, v));
    }
    Ok(Graph::new(n, &edges).expect("edges checked above"))
}

pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    let mut lines = Lines::new(text);
    let g = graph_block(&mut lines)?;
    lines.finish()?;
    Ok(g)
}

pub fn write_graph(graph: &Graph) -> String {
    let mut out = format!("n {}\n", graph.num_vertices());
    for &(u, v) in graph.edges() {
        let _ = writeln!(out, "e {u} {v}");
    }
    out
}

/// A parsed map block: declared sizes and a total assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapFile {
    pub source_size: usize,
    pub target_size: usize,
    pub assignment: Vec<Vertex>,
}

impl MapFile {
    /// Checks the declared sizes against the graphs and builds the map.
    pub fn to_map(&self, source: &Graph, target: &Graph) -> crate::Result<GraphMap> {
        if self.source_size != source.num_vertices() || self.target_size != target.num_vertices() {
            return Err(crate::Error::InvalidMap(format!(
                "map file is {} -> {} but the graphs have {} and {} vertices",
                self.source_size,
                self.target_size,
                source.num_vertices(),
                target.num_vertices()
            )));
        }
        GraphMap::new(source.clone(), target.clone(), self.assignment.clone())
    }
}

fn map_block(lines: &mut Lines<'_>) -> Result<MapFile, ParseError> {
    let header = lines.expect("m", Some(2))?;
    let source_size = header[1].number()?;
    let target_size = header[2].number()?;
    let mut assignment = vec![None; source_size];
    for _ in 0..source_size {
        let a = lines.expect("a", Some(2))?;
        let s = vertex(&a[1], source_size)?;
        let t = vertex(&a[2], target_size)?;
        if assignment[s].replace(t).is_some() {
            return Err(a[1].error(format!("vertex {s} assigned twice")));
        }
    }
    Ok(MapFile {
        source_size,
        target_size,
        assignment: assignment.into_iter().map(|v| v.expect("all assigned")).collect(),
    })
}

pub fn parse_map(text: &str) -> Result<MapFile, ParseError> {
    let mut lines = Lines::new(text);
    let m = map_block(&mut lines)?;
    lines.finish()?;
    Ok(m)
}

pub fn write_map(map: &GraphMap) -> String {
    let mut out = format!(
        "m {} {}\n",
        map.source().num_vertices(),
        map.target().num_vertices()
    );
    for (s, t) in map.assignment().iter().enumerate() {
        let _ = writeln!(out, "a {s} {t}");
    }
    out
}

/// Maps of a trace, in order.
pub fn parse_trace(text: &str) -> Result<Vec<MapFile>, ParseError> {
    let mut lines = Lines::new(text);
    let mut maps = Vec::new();
    while lines.peek_tag().is_some() {
        maps.push(map_block(&mut lines)?);
    }
    if maps.is_empty() {
        return Err(lines.end_error("a trace needs at least one map"));
    }
    Ok(maps)
}

pub fn write_trace(trace: &HomotopyTrace) -> String {
    trace.maps().iter().map(write_map).collect()
}

fn word_line(lines: &mut Lines<'_>, tag: &str) -> Result<Vec<Vertex>, ParseError> {
    let line = lines.expect(tag, None)?;
    let count_token = line
        .get(1)
        .ok_or_else(|| line[0].error(format!("`{tag}` needs a length")))?;
    let count = count_token.number()?;
    if count == 0 {
        return Err(count_token.error("a word needs at least one vertex"));
    }
    if line.len() != count + 2 {
        return Err(count_token.error(format!(
            "declared {count} vertices, found {}",
            line.len() - 2
        )));
    }
    line[2..].iter().map(Token::number).collect()
}

/// The raw word of a `p` line; validate it with [`StablePath::new`].
pub fn parse_path(text: &str) -> Result<Vec<Vertex>, ParseError> {
    let mut lines = Lines::new(text);
    let w = word_line(&mut lines, "p")?;
    lines.finish()?;
    Ok(w)
}

fn word_text(tag: &str, word: &[Vertex]) -> String {
    let mut out = format!("{tag} {}", word.len());
    for v in word {
        let _ = write!(out, " {v}");
    }
    out.push('\n');
    out
}

pub fn write_path(path: &StablePath) -> String {
    word_text("p", path.word())
}

/// Raw grid cells; validate with [`HomotopyGrid::new`].
pub fn parse_grid(text: &str) -> Result<Vec<Vec<Vertex>>, ParseError> {
    let mut lines = Lines::new(text);
    let header = lines.expect("g", Some(2))?;
    let height = header[1].number()?;
    let width = header[2].number()?;
    if height == 0 || width == 0 {
        return Err(header[1].error("grid dimensions must be positive"));
    }
    let mut rows = Vec::with_capacity(height);
    for _ in 0..height {
        let line = lines
            .lines
            .get(lines.at)
            .ok_or_else(|| lines.end_error(format!("expected {height} grid rows")))?
            .clone();
        if line.len() != width {
            return Err(line[0].error(format!("grid row has {} cells, expected {width}", line.len())));
        }
        rows.push(line.iter().map(Token::number).collect::<Result<Vec<_>, _>>()?);
        lines.at += 1;
    }
    lines.finish()?;
    Ok(rows)
}

pub fn write_grid(grid: &HomotopyGrid) -> String {
    let mut out = format!("g {} {}\n", grid.height(), grid.width());
    for row in grid.rows() {
        let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

/// A parsed cone file before validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeFile {
    pub apex: Graph,
    pub word: Vec<Vertex>,
    pub marks: [usize; 4],
}

impl ConeFile {
    pub fn to_cone(&self) -> crate::Result<Cone> {
        Cone::from_word(&self.apex, &self.word, self.marks)
    }
}

pub fn parse_cone(text: &str) -> Result<ConeFile, ParseError> {
    let mut lines = Lines::new(text);
    let apex = graph_block(&mut lines)?;
    let word = word_line(&mut lines, "c")?;
    let m = lines.expect("marks", Some(4))?;
    let marks = [m[1].number()?, m[2].number()?, m[3].number()?, m[4].number()?];
    lines.finish()?;
    Ok(ConeFile { apex, word, marks })
}

pub fn write_cone(cone: &Cone) -> String {
    let [a, b, c, d] = cone.marks();
    format!(
        "{}{}marks {a} {b} {c} {d}\n",
        write_graph(cone.apex()),
        word_text("c", cone.cycle().word())
    )
}

pub fn parse_report(text: &str) -> Result<ObstructionReport, ParseError> {
    let mut lines = Lines::new(text);
    let header = lines.expect("obstruction", Some(2))?;
    let cycle_length = header[1].keyed("N")?.number()?;
    let target_winding = header[2].keyed("target_winding")?.signed()?;
    let mut entries = Vec::new();
    while lines.peek_tag().is_some() {
        let f = lines.expect("f", Some(2))?;
        let index = f[1].number()?;
        if index != entries.len() {
            return Err(f[1].error(format!("expected map index {}", entries.len())));
        }
        let winding = f[2].keyed("winding")?.signed()?;
        entries.push(ReportEntry { index, winding });
    }
    Ok(ObstructionReport {
        cycle_length,
        target_winding,
        entries,
    })
}

impl fmt::Display for ObstructionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "obstruction N={} target_winding={}",
            self.cycle_length, self.target_winding
        )?;
        for e in &self.entries {
            writeln!(f, "f {} winding={}", e.index, e.winding)?;
        }
        Ok(())
    }
}

pub fn write_report(report: &ObstructionReport) -> String {
    report.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_files() {
        let g = parse_graph("# a triangle\nn 3\ne 0 1\ne 1 2 # last\n\ne 2 0\n").unwrap();
        assert_eq!(g, Graph::cycle(3).unwrap());
        assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g);

        let err = parse_graph("n 3\ne 1 1\n").unwrap_err();
        assert_eq!((err.line, err.column), (2, 5));
        let err = parse_graph("n 3\ne 0 7\n").unwrap_err();
        assert_eq!((err.line, err.column), (2, 5));
        let err = parse_graph("n 3\ne 0\n").unwrap_err();
        assert_eq!(err.line, 2);
        let err = parse_graph("e 0 1\n").unwrap_err();
        assert_eq!((err.line, err.column), (1, 1));
        let err = parse_graph("n x\n").unwrap_err();
        assert_eq!((err.line, err.column), (1, 3));
        assert!(parse_graph("").is_err());
    }

    #[test]
    fn map_files() {
        let m = parse_map("m 2 3\na 1 2\na 0 1\n").unwrap();
        assert_eq!(m.assignment, vec![1, 2]);
        assert!(parse_map("m 2 3\na 0 1\na 0 2\n").is_err());
        assert!(parse_map("m 2 3\na 0 1\n").is_err());
        assert!(parse_map("m 2 3\na 0 3\na 1 1\n").is_err());

        let i1 = Graph::path(1);
        let i2 = Graph::path(2);
        let f = m.to_map(&i1, &i2).unwrap();
        assert_eq!(parse_map(&write_map(&f)).unwrap(), m);
        assert!(m.to_map(&i2, &i2).is_err());
    }

    #[test]
    fn words_and_grids() {
        assert_eq!(parse_path("p 3 0 1 2\n").unwrap(), vec![0, 1, 2]);
        assert!(parse_path("p 3 0 1\n").is_err());
        assert!(parse_path("p 0\n").is_err());
        let rows = parse_grid("g 2 3\n0 1 2\n0 0 1\n").unwrap();
        assert_eq!(rows, vec![vec![0, 1, 2], vec![0, 0, 1]]);
        assert!(parse_grid("g 2 3\n0 1 2\n").is_err());
        assert!(parse_grid("g 1 3\n0 1\n").is_err());
    }

    #[test]
    fn cone_files() {
        let text = "n 5\ne 0 1\ne 0 4\ne 1 2\ne 2 3\ne 3 4\nc 6 0 1 2 3 4 0\nmarks 0 1 2 3\n";
        let cf = parse_cone(text).unwrap();
        let cone = cf.to_cone().unwrap();
        assert_eq!(cone, Cone::identity_cycle(5, [0, 1, 2, 3]).unwrap());
        assert_eq!(write_cone(&cone), text);
        assert!(parse_cone("n 5\nc 1 0\nmarks 0 0 0\n").is_err());
    }

    #[test]
    fn report_files() {
        let text = "obstruction N=6 target_winding=1\nf 0 winding=0\nf 1 winding=-1\n";
        let r = parse_report(text).unwrap();
        assert_eq!(r.cycle_length, 6);
        assert_eq!(r.entries[1], ReportEntry { index: 1, winding: -1 });
        assert_eq!(write_report(&r), text);
        let err = parse_report("obstruction M=6 target_winding=1\n").unwrap_err();
        assert_eq!((err.line, err.column), (1, 13));
        assert!(parse_report("obstruction N=6 target_winding=1\nf 1 winding=0\n").is_err());
    }
}
