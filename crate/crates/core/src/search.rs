//! Per-run search state shared by the local cut searches and the augmenting
//! path max flow: the graph being searched, its reversal journal, epoch marks
//! and query counters.

use crate::graph::{AccessCounters, ArcId, Cell, Graph, Journal, Stamps, Vertex};

/// What a stopping rule asks the DFS to do after an event.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Hook {
    /// The vertex of the event becomes the path endpoint `y`.
    pub designate: bool,
    pub stop: bool,
}

pub(crate) trait StopRule {
    /// Whether `on_arc` relies on `is_new`; otherwise arcs are only tracked
    /// for counting.
    const NEEDS_NEW_ARCS: bool = false;

    /// Called for every arc access; `is_new` is true the first time this arc
    /// is accessed during the current call.
    fn on_arc(&mut self, _tail: Vertex, _is_new: bool) -> Hook {
        Hook::default()
    }

    /// Called when `v` joins the DFS tree.
    fn on_vertex(&mut self, _v: Vertex, _out_degree: usize, _capacity: &mut CapacityTable) -> Hook {
        Hook::default()
    }
}

pub(crate) enum Grow {
    /// The DFS explored everything reachable from the start.
    Exhausted,
    /// Stopped early; `y` is the designated endpoint, if one was chosen.
    Stopped { y: Option<Vertex> },
}

/// Remaining per-vertex capacity for the degree-counting variant. Entries are
/// lazily initialised to the vertex out-degree the first time they are read
/// in a call.
#[derive(Clone, Debug)]
pub struct CapacityTable {
    cap: Vec<u64>,
    init: Vec<u64>,
    stamp: Stamps,
    touched: Vec<Vertex>,
}

impl CapacityTable {
    fn new(n: usize) -> Self {
        Self {
            cap: vec![0; n],
            init: vec![0; n],
            stamp: Stamps::new(n),
            touched: Vec::new(),
        }
    }

    pub(crate) fn reset(&mut self) {
        self.stamp.clear();
        self.touched.clear();
    }

    #[inline]
    pub(crate) fn get(&mut self, v: Vertex, out_degree: usize) -> u64 {
        if self.stamp.insert(v) {
            self.cap[v as usize] = out_degree as u64;
            self.init[v as usize] = out_degree as u64;
            self.touched.push(v);
        }
        self.cap[v as usize]
    }

    #[inline]
    pub(crate) fn set(&mut self, v: Vertex, value: u64) {
        debug_assert!(self.stamp.contains(v) && value <= self.init[v as usize]);
        self.cap[v as usize] = value;
    }

    /// `(v, initial, remaining)` for every vertex touched in the last call.
    pub fn entries(&self) -> impl Iterator<Item = (Vertex, u64, u64)> + '_ {
        self.touched
            .iter()
            .map(|&v| (v, self.init[v as usize], self.cap[v as usize]))
    }

    /// Total capacity consumed in the last call.
    pub fn consumed(&self) -> u64 {
        self.entries().map(|(_, init, left)| init - left).sum()
    }
}

/// Exclusive run context over one graph. Every public operation leaves the
/// graph in its original arc configuration when it returns.
#[derive(Clone, Debug)]
pub struct SearchContext {
    pub(crate) graph: Graph,
    pub(crate) journal: Journal,
    in_tree: Stamps,
    seen_vertex: Stamps,
    seen_arc: Stamps,
    parent_arc: Vec<ArcId>,
    stack: Vec<(Vertex, u32)>,
    pub(crate) visited: Vec<Vertex>,
    pub(crate) capacity: CapacityTable,
    pub(crate) counters: AccessCounters,
    track_unique: bool,
}

impl SearchContext {
    pub fn new(graph: Graph) -> Self {
        let (n, m) = (graph.n(), graph.m());
        Self {
            graph,
            journal: Journal::new(),
            in_tree: Stamps::new(n),
            seen_vertex: Stamps::new(n),
            seen_arc: Stamps::new(m),
            parent_arc: vec![0; n],
            stack: Vec::new(),
            visited: Vec::new(),
            capacity: CapacityTable::new(n),
            counters: AccessCounters::default(),
            track_unique: true,
        }
    }

    /// Turns counting of distinct arcs and vertices on or off. When off,
    /// `u_edges` and `u_vertices` stay zero except where a search needs
    /// them.
    pub fn set_track_unique(&mut self, on: bool) {
        self.track_unique = on;
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn into_graph(self) -> Graph {
        self.graph
    }

    /// Counters accumulated since the last [`Self::begin_call`].
    pub fn counters(&self) -> AccessCounters {
        self.counters
    }

    /// Capacity table left by the most recent degree-counting call.
    pub fn capacity(&self) -> &CapacityTable {
        &self.capacity
    }

    pub(crate) fn begin_call(&mut self) {
        debug_assert!(self.journal.is_empty());
        self.seen_vertex.clear();
        self.seen_arc.clear();
        self.capacity.reset();
        self.counters.reset();
    }

    pub(crate) fn restore(&mut self) {
        self.journal.undo_all(&mut self.graph);
    }

    #[inline]
    pub(crate) fn in_tree(&self, v: Vertex) -> bool {
        self.in_tree.contains(v)
    }

    #[inline]
    fn enter(&mut self, v: Vertex, via: Option<ArcId>) {
        self.in_tree.insert(v);
        if let Some(a) = via {
            self.parent_arc[v as usize] = a;
        }
        self.visited.push(v);
        if self.track_unique && self.seen_vertex.insert(v) {
            self.counters.u_vertices += 1;
        }
        self.stack.push((v, 0));
    }

    /// Grows a DFS tree from `start`, exploring adjacency lists in storage
    /// order and consulting `rule` on every arc access and tree vertex.
    /// `self.visited` holds the tree vertices in visiting order afterwards.
    pub(crate) fn grow<R: StopRule>(&mut self, start: Vertex, rule: &mut R) -> Grow {
        self.in_tree.clear();
        self.visited.clear();
        self.stack.clear();
        let track_arcs = R::NEEDS_NEW_ARCS || self.track_unique;
        let mut y = None;

        self.enter(start, None);
        let hook = rule.on_vertex(start, self.graph.out_degree(start), &mut self.capacity);
        if hook.designate {
            y = Some(start);
        }
        if hook.stop {
            return Grow::Stopped { y };
        }

        while let Some(&(u, first)) = self.stack.last() {
            let cells = self.graph.out_cells(u);
            let mut i = first as usize;
            let next = loop {
                let Some(&Cell { arc: a, other: v }) = cells.get(i) else { break None };
                i += 1;
                self.counters.t_edge_accesses += 1;
                let is_new = track_arcs && self.seen_arc.insert(a);
                if is_new {
                    self.counters.u_edges += 1;
                }
                let hook = rule.on_arc(u, is_new);
                if hook.designate {
                    y = Some(u);
                }
                if hook.stop {
                    return Grow::Stopped { y };
                }
                if !self.in_tree.contains(v) {
                    break Some((v, a));
                }
            };
            let Some((v, a)) = next else {
                self.stack.pop();
                continue;
            };
            self.stack.last_mut().unwrap().1 = i as u32;
            self.enter(v, Some(a));
            let hook = rule.on_vertex(v, self.graph.out_degree(v), &mut self.capacity);
            if hook.designate {
                y = Some(v);
            }
            if hook.stop {
                return Grow::Stopped { y };
            }
        }
        Grow::Exhausted
    }

    /// Reverses the tree path from the last DFS root to `y`.
    pub(crate) fn reverse_tree_path(&mut self, root: Vertex, y: Vertex) {
        let mut v = y;
        while v != root {
            let a = self.parent_arc[v as usize];
            let u = self.graph.tail(a);
            self.graph.reverse_arc(a, &mut self.journal);
            v = u;
        }
    }

    /// Plain DFS from `source` that stops as soon as `target` joins the tree.
    /// Returns whether `target` was reached.
    pub(crate) fn search_to(&mut self, source: Vertex, target: Vertex) -> bool {
        struct Until {
            target: Vertex,
        }
        impl StopRule for Until {
            fn on_vertex(&mut self, v: Vertex, _: usize, _: &mut CapacityTable) -> Hook {
                let hit = v == self.target;
                Hook { designate: hit, stop: hit }
            }
        }
        matches!(self.grow(source, &mut Until { target }), Grow::Stopped { y: Some(_) })
    }
}
