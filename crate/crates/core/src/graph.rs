//! Directed adjacency representation with in-place arc reversal.
//!
//! An undirected input edge is stored as one arc in each direction. Arcs keep
//! a stable id for their whole lifetime; reversing an arc swaps its endpoints
//! and moves it from the out-arcs of the old tail to those of the new tail.
//! A [`Journal`] records the positions touched so the reversal can be undone
//! exactly.

use std::collections::{HashMap, HashSet, VecDeque};

use thiserror::Error;

pub type Vertex = u32;
pub type ArcId = u32;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

/// One entry of a vertex block: an incident arc and its other endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Cell {
    pub(crate) arc: ArcId,
    pub(crate) other: Vertex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct ArcRecord {
    tail: Vertex,
    head: Vertex,
    // Cell of the arc in its tail's and head's block.
    tail_cell: u32,
    head_cell: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Block {
    start: u32,
    out_degree: u32,
}

/// Arcs are stored in one flat array grouped by vertex. The block of `v`
/// holds every arc incident to `v`: its current out-arcs first, then its
/// in-arcs, so reversal swaps each endpoint's cell across the boundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    blocks: Vec<Block>,
    cells: Vec<Cell>,
    arcs: Vec<ArcRecord>,
}

impl Default for Graph {
    fn default() -> Self {
        Self::with_vertices(0)
    }
}

impl Graph {
    pub fn with_vertices(n: usize) -> Self {
        Self::from_arcs(n, &[])
    }

    /// Builds a graph with arc `i` equal to `arcs[i]`; out-arcs of a vertex
    /// are listed in arc order.
    ///
    /// # Panics
    /// On self-loops or endpoints out of range.
    pub fn from_arcs(n: usize, arcs: &[(Vertex, Vertex)]) -> Self {
        let mut blocks = vec![Block { start: 0, out_degree: 0 }; n];
        let mut size = vec![0u32; n];
        for &(u, v) in arcs {
            assert!((u as usize) < n && (v as usize) < n, "arc endpoint out of range");
            assert!(u != v, "self-loops are not supported");
            blocks[u as usize].out_degree += 1;
            size[u as usize] += 1;
            size[v as usize] += 1;
        }
        let mut total = 0;
        for v in 0..n {
            blocks[v].start = total;
            total += size[v];
        }
        let mut out_fill: Vec<u32> = blocks.iter().map(|b| b.start).collect();
        let mut in_fill: Vec<u32> = blocks.iter().map(|b| b.start + b.out_degree).collect();
        let mut cells = vec![Cell { arc: 0, other: 0 }; total as usize];
        let mut records = Vec::with_capacity(arcs.len());
        for (a, &(u, v)) in arcs.iter().enumerate() {
            let (p, q) = (out_fill[u as usize], in_fill[v as usize]);
            out_fill[u as usize] += 1;
            in_fill[v as usize] += 1;
            cells[p as usize] = Cell { arc: a as ArcId, other: v };
            cells[q as usize] = Cell { arc: a as ArcId, other: u };
            records.push(ArcRecord { tail: u, head: v, tail_cell: p, head_cell: q });
        }
        Self { blocks, cells, arcs: records }
    }

    /// Builds the directed doubling of an undirected edge list. Arc `2i` is
    /// `edges[i].0 -> edges[i].1` and arc `2i + 1` is its twin.
    pub fn from_undirected_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Self {
        let arcs: Vec<_> = edges.iter().flat_map(|&(u, v)| [(u, v), (v, u)]).collect();
        Self::from_arcs(n, &arcs)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.blocks.len()
    }

    /// Number of arcs.
    #[inline]
    pub fn m(&self) -> usize {
        self.arcs.len()
    }

    #[inline]
    pub fn out_degree(&self, v: Vertex) -> usize {
        self.blocks[v as usize].out_degree as usize
    }

    /// Out-arcs of `v` with their heads.
    #[inline]
    pub(crate) fn out_cells(&self, v: Vertex) -> &[Cell] {
        let b = self.blocks[v as usize];
        &self.cells[b.start as usize..(b.start + b.out_degree) as usize]
    }

    pub fn out_arcs(&self, v: Vertex) -> impl Iterator<Item = ArcId> + '_ {
        self.out_cells(v).iter().map(|c| c.arc)
    }

    #[inline]
    pub fn head(&self, arc: ArcId) -> Vertex {
        self.arcs[arc as usize].head
    }

    #[inline]
    pub fn tail(&self, arc: ArcId) -> Vertex {
        self.arcs[arc as usize].tail
    }

    pub fn out_neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.out_cells(v).iter().map(|c| c.other)
    }

    pub fn min_out_degree(&self) -> Option<(Vertex, usize)> {
        (0..self.n() as Vertex)
            .map(|v| (v, self.out_degree(v)))
            .min_by_key(|&(v, d)| (d, v))
    }

    /// Sum of out-degrees over `set` against the current orientation.
    pub fn volume_out<I: IntoIterator<Item = Vertex>>(&self, set: I) -> usize {
        set.into_iter().map(|v| self.out_degree(v)).sum()
    }

    /// `|E(S, V \ S)|` where `in_set[v]` marks membership of `S`.
    pub fn boundary(&self, in_set: &[bool]) -> usize {
        let mut count = 0;
        for u in 0..self.n() as Vertex {
            if in_set[u as usize] {
                count += self.out_neighbors(u).filter(|&v| !in_set[v as usize]).count();
            }
        }
        count
    }

    pub fn boundary_of(&self, set: &[Vertex]) -> usize {
        self.boundary(&membership(self.n(), set))
    }

    /// Undirected edges `(u, v)` with `u < v`, one per symmetric arc pair, in
    /// arc order. Only meaningful while the graph is symmetric.
    pub fn undirected_edges(&self) -> Vec<(Vertex, Vertex)> {
        self.arcs.iter().filter(|r| r.tail < r.head).map(|r| (r.tail, r.head)).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        let mut count: HashMap<(Vertex, Vertex), i64> = HashMap::new();
        for a in 0..self.m() {
            let (u, v) = (self.arcs[a].tail, self.arcs[a].head);
            if u < v {
                *count.entry((u, v)).or_default() += 1;
            } else {
                *count.entry((v, u)).or_default() -= 1;
            }
        }
        count.values().all(|&c| c == 0)
    }

    pub fn is_adjacent(&self, u: Vertex, v: Vertex) -> bool {
        let (a, b) = if self.out_degree(u) <= self.out_degree(v) { (u, v) } else { (v, u) };
        self.out_neighbors(a).any(|w| w == b)
    }

    /// Reverses a single arc in place and records the touched positions.
    pub fn reverse_arc(&mut self, arc: ArcId, journal: &mut Journal) {
        let rec = self.arcs[arc as usize];
        let (u, v) = (rec.tail, rec.head);
        // Move the cell in u's block to the last out position, then shrink.
        let bu = &mut self.blocks[u as usize];
        bu.out_degree -= 1;
        let b = bu.start + bu.out_degree;
        let moved = self.cells[b as usize].arc;
        self.cells.swap(rec.tail_cell as usize, b as usize);
        self.arcs[moved as usize].tail_cell = rec.tail_cell;
        // Move the cell in v's block to the first in position, then grow.
        let bv = &mut self.blocks[v as usize];
        let c = bv.start + bv.out_degree;
        bv.out_degree += 1;
        let moved = self.cells[c as usize].arc;
        self.cells.swap(rec.head_cell as usize, c as usize);
        self.arcs[moved as usize].head_cell = rec.head_cell;

        self.arcs[arc as usize] = ArcRecord { tail: v, head: u, tail_cell: c, head_cell: b };
        journal.entries.push(JournalEntry { arc, tail_cell: rec.tail_cell, head_cell: rec.head_cell });
    }

    /// Reverses every arc of a directed path given as consecutive arc ids.
    ///
    /// Panics if the arcs do not form a path in the current orientation.
    pub fn reverse_path(&mut self, path: &[ArcId], journal: &mut Journal) {
        for pair in path.windows(2) {
            assert_eq!(self.head(pair[0]), self.tail(pair[1]), "arcs do not form a path");
        }
        for &arc in path {
            self.reverse_arc(arc, journal);
        }
    }

    /// Vertices reachable from `from` in `self - removed`.
    pub fn reachable_avoiding(&self, from: Vertex, removed: &[bool]) -> Vec<bool> {
        let mut seen = vec![false; self.n()];
        if removed[from as usize] {
            return seen;
        }
        let mut queue = VecDeque::from([from]);
        seen[from as usize] = true;
        while let Some(u) = queue.pop_front() {
            for w in self.out_neighbors(u) {
                if !seen[w as usize] && !removed[w as usize] {
                    seen[w as usize] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    pub fn is_connected(&self) -> bool {
        if self.n() == 0 {
            return true;
        }
        self.reachable_avoiding(0, &vec![false; self.n()]).iter().all(|&s| s)
    }

    /// True when every pair of distinct vertices is joined by an arc.
    pub fn is_complete(&self) -> bool {
        let n = self.n();
        (0..n as Vertex).all(|v| {
            let distinct: HashSet<Vertex> = self.out_neighbors(v).filter(|&w| w != v).collect();
            distinct.len() == n - 1
        })
    }
}

pub fn membership(n: usize, set: &[Vertex]) -> Vec<bool> {
    let mut m = vec![false; n];
    for &v in set {
        m[v as usize] = true;
    }
    m
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct JournalEntry {
    arc: ArcId,
    tail_cell: u32,
    head_cell: u32,
}

/// Log of reversals performed on a [`Graph`], undone newest first.
#[derive(Clone, Debug, Default)]
pub struct Journal {
    entries: Vec<JournalEntry>,
}

impl Journal {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Undoes reversals until only `mark` entries remain.
    pub fn undo_to(&mut self, g: &mut Graph, mark: usize) {
        while self.entries.len() > mark {
            let JournalEntry { arc, tail_cell: p, head_cell: q } = self.entries.pop().unwrap();
            let rec = g.arcs[arc as usize];
            let (v, u, c, b) = (rec.tail, rec.head, rec.tail_cell, rec.head_cell);
            let (bv, bu) = (g.blocks[v as usize], g.blocks[u as usize]);
            assert!(c + 1 == bv.start + bv.out_degree && b == bu.start + bu.out_degree, "journal undone out of order");
            g.blocks[v as usize].out_degree -= 1;
            let moved = g.cells[q as usize].arc;
            g.cells.swap(c as usize, q as usize);
            g.arcs[moved as usize].head_cell = c;
            g.blocks[u as usize].out_degree += 1;
            let moved = g.cells[p as usize].arc;
            g.cells.swap(b as usize, p as usize);
            g.arcs[moved as usize].tail_cell = b;
            g.arcs[arc as usize] = ArcRecord { tail: u, head: v, tail_cell: p, head_cell: q };
        }
    }

    pub fn undo_all(&mut self, g: &mut Graph) {
        self.undo_to(g, 0);
    }
}

/// Query counters: total arc accesses, distinct arcs, distinct vertices.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct AccessCounters {
    pub t_edge_accesses: u64,
    pub u_edges: u64,
    pub u_vertices: u64,
}

impl std::ops::AddAssign for AccessCounters {
    fn add_assign(&mut self, rhs: Self) {
        self.t_edge_accesses += rhs.t_edge_accesses;
        self.u_edges += rhs.u_edges;
        self.u_vertices += rhs.u_vertices;
    }
}

impl AccessCounters {
    pub fn reset(&mut self) {
        *self = Self::default();
    }
}

/// Epoch-stamped membership marks. Starting a new epoch clears every mark in
/// O(1); the backing array is only rewritten when the epoch counter wraps.
#[derive(Clone, Debug)]
pub(crate) struct Stamps {
    stamp: Vec<u32>,
    epoch: u32,
}

impl Stamps {
    pub(crate) fn new(len: usize) -> Self {
        Self { stamp: vec![0; len], epoch: 1 }
    }

    pub(crate) fn clear(&mut self) {
        if self.epoch == u32::MAX {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        } else {
            self.epoch += 1;
        }
    }

    #[inline]
    pub(crate) fn contains(&self, i: u32) -> bool {
        self.stamp[i as usize] == self.epoch
    }

    /// Marks `i`; returns true if it was not marked in this epoch.
    #[inline]
    pub(crate) fn insert(&mut self, i: u32) -> bool {
        let s = &mut self.stamp[i as usize];
        if *s == self.epoch {
            false
        } else {
            *s = self.epoch;
            true
        }
    }
}

/// A partition `(L, S, R)` of the vertices with no arc between `L` and `R`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct SeparationTriple {
    pub left: Vec<Vertex>,
    pub separator: Vec<Vertex>,
    pub right: Vec<Vertex>,
}

impl SeparationTriple {
    /// Splits `g - separator` into the component of its smallest remaining
    /// vertex and everything else. `None` if `separator` is not a vertex cut.
    pub fn from_separator(g: &Graph, separator: &[Vertex]) -> Option<Self> {
        let removed = membership(g.n(), separator);
        let start = (0..g.n() as Vertex).find(|&v| !removed[v as usize])?;
        let reach = g.reachable_avoiding(start, &removed);
        let mut left = Vec::new();
        let mut right = Vec::new();
        for v in 0..g.n() as Vertex {
            if removed[v as usize] {
                continue;
            }
            if reach[v as usize] {
                left.push(v);
            } else {
                right.push(v);
            }
        }
        if right.is_empty() {
            return None;
        }
        let mut separator = separator.to_vec();
        separator.sort_unstable();
        separator.dedup();
        Some(Self { left, separator, right })
    }

    pub fn is_valid(&self, g: &Graph) -> bool {
        let n = g.n();
        let mut side = vec![0u8; n];
        for (tag, part) in [(1u8, &self.left), (2, &self.separator), (3, &self.right)] {
            for &v in part.iter() {
                if (v as usize) >= n || side[v as usize] != 0 {
                    return false;
                }
                side[v as usize] = tag;
            }
        }
        if side.contains(&0) || self.left.is_empty() || self.right.is_empty() {
            return false;
        }
        self.left
            .iter()
            .all(|&u| g.out_neighbors(u).all(|w| side[w as usize] != 3))
    }
}

/// True when removing `cut` leaves a disconnected graph.
pub fn is_vertex_cut(g: &Graph, cut: &[Vertex]) -> bool {
    SeparationTriple::from_separator(g, cut).is_some()
}

/// Split-graph vertex ids: `v_in = 2v`, `v_out = 2v + 1`.
#[inline]
pub fn in_vertex(v: Vertex) -> Vertex {
    2 * v
}

#[inline]
pub fn out_vertex(v: Vertex) -> Vertex {
    2 * v + 1
}

/// In-vertex/out-vertex reduction: every vertex `v` becomes `v_in -> v_out`,
/// and every arc `u -> v` becomes `u_out -> v_in`.
#[derive(Clone, Debug)]
pub struct SplitGraph {
    pub graph: Graph,
    original_n: usize,
}

impl SplitGraph {
    pub fn build(g: &Graph) -> Self {
        let n = g.n();
        let mut arcs = Vec::with_capacity(n + g.m());
        arcs.extend((0..n as Vertex).map(|v| (in_vertex(v), out_vertex(v))));
        arcs.extend((0..g.m() as ArcId).map(|a| (out_vertex(g.tail(a)), in_vertex(g.head(a)))));
        let graph = Graph::from_arcs(2 * n, &arcs);
        Self { graph, original_n: n }
    }

    pub fn original_n(&self) -> usize {
        self.original_n
    }

    #[inline]
    pub fn original(sv: Vertex) -> Vertex {
        sv / 2
    }

    #[inline]
    pub fn is_out(sv: Vertex) -> bool {
        sv % 2 == 1
    }

    /// Arc id of the internal arc `v_in -> v_out`.
    #[inline]
    pub fn internal_arc(v: Vertex) -> ArcId {
        v
    }
}

/// Parses a whitespace-separated `u v` edge list. Vertex ids are remapped to
/// `0..n` in order of first appearance; self-loops and repeated edges are
/// dropped.
pub fn load_edge_list(text: &str) -> Result<EdgeList, ParseError> {
    let mut ids: HashMap<u64, Vertex> = HashMap::new();
    let mut original_ids = Vec::new();
    let mut seen = HashSet::new();
    let mut edges = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| ParseError { line: lineno + 1, message };
        let mut fields = line.split_whitespace();
        let mut next_id = || -> Result<u64, ParseError> {
            let tok = fields.next().ok_or_else(|| err("expected two vertex ids".into()))?;
            tok.parse::<u64>().map_err(|_| err(format!("invalid vertex id {tok:?}")))
        };
        let (a, b) = (next_id()?, next_id()?);
        if fields.next().is_some() {
            return Err(err("expected exactly two vertex ids".into()));
        }
        let mut intern = |raw: u64| {
            *ids.entry(raw).or_insert_with(|| {
                original_ids.push(raw);
                (original_ids.len() - 1) as Vertex
            })
        };
        let (u, v) = (intern(a), intern(b));
        if u == v {
            continue;
        }
        if seen.insert((u.min(v), u.max(v))) {
            edges.push((u, v));
        }
    }
    Ok(EdgeList {
        graph: Graph::from_undirected_edges(original_ids.len(), &edges),
        original_ids,
    })
}

#[derive(Clone, Debug)]
pub struct EdgeList {
    pub graph: Graph,
    /// `original_ids[v]` is the id used for vertex `v` in the input text.
    pub original_ids: Vec<u64>,
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    for (u, v) in g.undirected_edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn complete(n: u32) -> Graph {
        let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Graph::from_undirected_edges(n as usize, &edges)
    }

    #[test]
    fn load_path() {
        let g = load_edge_list("0 1\n1 2").unwrap().graph;
        assert_eq!((g.n(), g.m()), (3, 4));
        assert!(g.is_symmetric());
    }

    #[test]
    fn load_drops_self_loops() {
        let g = load_edge_list("0 0\n0 1").unwrap().graph;
        assert_eq!((g.n(), g.m()), (2, 2));
    }

    #[test]
    fn load_dedups_and_remaps() {
        let el = load_edge_list("5 9\n9 5\n5 9").unwrap();
        assert_eq!((el.graph.n(), el.graph.m()), (2, 2));
        assert_eq!(el.original_ids, vec![5, 9]);
    }

    #[test]
    fn load_skips_comments_and_reports_line() {
        let el = load_edge_list("# header\n\n1 2\n").unwrap();
        assert_eq!(el.graph.m(), 2);
        let err = load_edge_list("1 2\n# c\n3 x\n").unwrap_err();
        assert_eq!(err.line, 3);
        assert_eq!(load_edge_list("1 2 3").unwrap_err().line, 1);
        assert_eq!(load_edge_list("4").unwrap_err().line, 1);
    }

    #[test]
    fn split_graph_single_edge() {
        let sg = SplitGraph::build(&Graph::from_undirected_edges(2, &[(0, 1)]));
        assert_eq!((sg.graph.n(), sg.graph.m()), (4, 4));
        assert_eq!(sg.graph.head(SplitGraph::internal_arc(1)), out_vertex(1));
    }

    #[test]
    fn split_graph_triangle() {
        let g = complete(3);
        let sg = SplitGraph::build(&g);
        assert_eq!(sg.graph.n(), 6);
        let internal = (0..sg.graph.m() as ArcId)
            .filter(|&a| sg.graph.tail(a) / 2 == sg.graph.head(a) / 2)
            .count();
        assert_eq!(internal, 3);
        assert_eq!(sg.graph.m() - internal, 6);
        for a in 0..sg.graph.m() as ArcId {
            let (t, h) = (sg.graph.tail(a), sg.graph.head(a));
            if t / 2 == h / 2 {
                assert!(!SplitGraph::is_out(t) && SplitGraph::is_out(h));
            } else {
                assert!(SplitGraph::is_out(t) && !SplitGraph::is_out(h));
            }
        }
    }

    #[test]
    fn volume_out_of_k4() {
        let g = complete(4);
        assert_eq!(g.volume_out([]), 0);
        assert_eq!(g.volume_out(0..4), 12);
        assert_eq!(g.volume_out([2]), 3);
    }

    #[test]
    fn reverse_then_undo_path() {
        let g0 = Graph::from_undirected_edges(3, &[(0, 1), (1, 2)]);
        let mut g = g0.clone();
        let mut j = Journal::new();
        // arcs 0: 0->1, 2: 1->2
        g.reverse_path(&[0, 2], &mut j);
        assert_eq!((g.tail(0), g.head(0)), (1, 0));
        assert_eq!(g.out_degree(0), 0);
        assert_eq!(g.out_degree(2), 2);
        j.undo_all(&mut g);
        assert_eq!(g, g0);
    }

    #[test]
    #[should_panic(expected = "do not form a path")]
    fn reverse_rejects_non_path() {
        let mut g = Graph::from_undirected_edges(4, &[(0, 1), (2, 3)]);
        g.reverse_path(&[0, 2], &mut Journal::new());
    }

    // Six vertices, S = {0, 1, 2}; path 0 -> 1 -> 3 -> 4 leaves S once.
    fn six_vertex_instance() -> (Graph, Vec<bool>) {
        let g = Graph::from_undirected_edges(
            6,
            &[(0, 1), (1, 2), (0, 2), (1, 3), (2, 4), (3, 4), (4, 5), (3, 5)],
        );
        (g, membership(6, &[0, 1, 2]))
    }

    fn arc_between(g: &Graph, u: Vertex, v: Vertex) -> ArcId {
        g.out_arcs(u).find(|&a| g.head(a) == v).unwrap()
    }

    #[test]
    fn reversing_path_leaving_set_drops_boundary_by_one() {
        let (mut g, s) = six_vertex_instance();
        assert_eq!(g.boundary(&s), 2);
        let path = [arc_between(&g, 0, 1), arc_between(&g, 1, 3), arc_between(&g, 3, 4)];
        g.reverse_path(&path, &mut Journal::new());
        assert_eq!(g.boundary(&s), 1);
    }

    #[test]
    fn reversing_path_ending_inside_set_keeps_boundary() {
        let (mut g, s) = six_vertex_instance();
        // 0 -> 1 -> 3 -> 4 -> 2 leaves S and comes back.
        let path = [
            arc_between(&g, 0, 1),
            arc_between(&g, 1, 3),
            arc_between(&g, 3, 4),
            arc_between(&g, 4, 2),
        ];
        g.reverse_path(&path, &mut Journal::new());
        assert_eq!(g.boundary(&s), 2);
    }

    #[test]
    fn separation_triple_of_path() {
        let g = Graph::from_undirected_edges(3, &[(0, 1), (1, 2)]);
        let t = SeparationTriple::from_separator(&g, &[1]).unwrap();
        assert_eq!((t.left.clone(), t.right.clone()), (vec![0], vec![2]));
        assert!(t.is_valid(&g));
        assert!(!is_vertex_cut(&g, &[0]));
        let bad = SeparationTriple { left: vec![0], separator: vec![], right: vec![1, 2] };
        assert!(!bad.is_valid(&g));
    }

    fn random_graph() -> impl Strategy<Value = Graph> {
        (2u32..12).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n), 1..40).prop_map(move |pairs| {
                let edges: Vec<_> = pairs
                    .into_iter()
                    .filter(|(u, v)| u != v)
                    .collect();
                Graph::from_undirected_edges(n as usize, &edges)
            })
        })
    }

    proptest! {
        // Any sequence of single-arc reversals is undone exactly.
        #[test]
        fn journal_round_trip(g0 in random_graph(), picks in proptest::collection::vec(any::<u32>(), 0..60)) {
            let mut g = g0.clone();
            let mut j = Journal::new();
            let mut marks = Vec::new();
            for (i, p) in picks.iter().enumerate() {
                if g.m() == 0 { break; }
                if i % 7 == 3 { marks.push(j.len()); }
                g.reverse_arc(p % g.m() as u32, &mut j);
                let total: usize = (0..g.n() as Vertex).map(|v| g.out_degree(v)).sum();
                prop_assert_eq!(total, g.m());
            }
            while let Some(mark) = marks.pop() {
                j.undo_to(&mut g, mark);
            }
            j.undo_all(&mut g);
            prop_assert_eq!(g, g0);
        }
    }
}
