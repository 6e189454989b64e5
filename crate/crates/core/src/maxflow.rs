//! Unit-capacity augmenting-path max flow between two original vertices,
//! run on the split graph so that the flow value counts internally
//! vertex-disjoint paths.

use crate::graph::{in_vertex, out_vertex, SplitGraph, Vertex};
use crate::search::SearchContext;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowResult {
    /// `min(κ(x, y), cap)`.
    pub value: u32,
    /// An `x`-`y` separator of size `value`, present when `value < cap`.
    pub cut: Option<Vec<Vertex>>,
}

/// Max flow from `x_out` to `y_in` on a context built over a split graph,
/// stopping after `cap` augmentations. Each augmenting path is found by DFS
/// and applied by reversing its arcs; all reversals are undone on return.
///
/// # Panics
/// If `x == y`, or `cap == 0`.
pub fn max_flow_vc(ctx: &mut SearchContext, x: Vertex, y: Vertex, cap: u32) -> FlowResult {
    assert!(x != y && cap >= 1);
    let (source, sink) = (out_vertex(x), in_vertex(y));
    ctx.begin_call();

    let mut value = 0;
    while value < cap {
        if !ctx.search_to(source, sink) {
            break;
        }
        ctx.reverse_tree_path(source, sink);
        value += 1;
    }
    ctx.restore();
    if value == cap {
        return FlowResult { value, cut: None };
    }

    // `ctx.visited` is the residual-reachable set from the failed search.
    // Every saturated arc leaving it is either an internal arc `v_in -> v_out`
    // or an external arc `u_out -> w_in` whose flow leaves through `w`
    // (or ends at `y`, in which case `u` itself is charged).
    let mut cut = Vec::with_capacity(value as usize);
    for &sv in &ctx.visited {
        let v = SplitGraph::original(sv);
        if SplitGraph::is_out(sv) {
            for a in ctx.graph.out_arcs(sv) {
                let head = ctx.graph.head(a);
                if ctx.in_tree(head) {
                    continue;
                }
                let w = SplitGraph::original(head);
                cut.push(if w == y { v } else { w });
            }
        } else if !ctx.in_tree(out_vertex(v)) {
            cut.push(v);
        }
    }
    cut.sort_unstable();
    cut.dedup();
    debug_assert_eq!(cut.len(), value as usize);
    FlowResult { value, cut: Some(cut) }
}
