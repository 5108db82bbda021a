use std::collections::BTreeMap;

use super::{Quiver, QuiverSetting};
use crate::error::{Error, Result};

/// Vertices reachable from `start` along arrows (directed), restricted to the
/// arrows for which `allowed` returns true.
pub fn reachable(q: &Quiver, start: usize, allowed: impl Fn(usize) -> bool) -> Vec<bool> {
    let mut seen = vec![false; q.vertex_count()];
    let mut stack = vec![start];
    seen[start] = true;
    while let Some(v) = stack.pop() {
        for (i, a) in q.arrows().iter().enumerate() {
            if a.tail == v && !seen[a.head] && allowed(i) {
                seen[a.head] = true;
                stack.push(a.head);
            }
        }
    }
    seen
}

fn reversed(q: &Quiver) -> Quiver {
    let arrows = q.arrows().iter().map(|a| super::Arrow::new(a.head, a.tail)).collect();
    Quiver::new(q.names().to_vec(), arrows).expect("reversal keeps endpoints valid")
}

/// True iff every ordered pair of vertices lies on an oriented cycle.
/// A single vertex counts as strongly connected.
pub fn is_strongly_connected(q: &Quiver) -> Result<bool> {
    if q.vertex_count() == 0 {
        return Err(Error::EmptyQuiver);
    }
    let fwd = reachable(q, 0, |_| true);
    if fwd.iter().any(|r| !r) {
        return Ok(false);
    }
    let back = reachable(&reversed(q), 0, |_| true);
    Ok(back.iter().all(|&r| r))
}

/// Connectedness of the underlying undirected graph.
pub fn is_connected(q: &Quiver) -> bool {
    if q.vertex_count() == 0 {
        return false;
    }
    undirected_components(q, None).iter().all(|&c| c == 0)
}

/// Vertex sets of the components of the underlying undirected graph, in order
/// of their smallest vertex.
pub fn weak_components(q: &Quiver) -> Vec<Vec<usize>> {
    let labels = undirected_components(q, None);
    let count = labels.iter().copied().max().map_or(0, |m| m + 1);
    let mut out = vec![Vec::new(); count];
    for (v, &l) in labels.iter().enumerate() {
        out[l].push(v);
    }
    out
}

/// Component label per vertex of the underlying graph with vertex `removed`
/// (and every arrow touching it) deleted. The removed vertex gets `usize::MAX`.
fn undirected_components(q: &Quiver, removed: Option<usize>) -> Vec<usize> {
    let n = q.vertex_count();
    let mut adj = vec![Vec::new(); n];
    for a in q.arrows() {
        if Some(a.tail) == removed || Some(a.head) == removed {
            continue;
        }
        adj[a.tail].push(a.head);
        adj[a.head].push(a.tail);
    }
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    for s in 0..n {
        if Some(s) == removed || label[s] != usize::MAX {
            continue;
        }
        label[s] = next;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if label[w] == usize::MAX {
                    label[w] = next;
                    stack.push(w);
                }
            }
        }
        next += 1;
    }
    label
}

/// A maximal prime piece of a setting, with its position in the ambient quiver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeComponent {
    /// Ambient vertex indices, ascending.
    pub vertices: Vec<usize>,
    /// Ambient arrow indices, ascending.
    pub arrows: Vec<usize>,
    pub setting: QuiverSetting,
}

/// Splits a connected setting into its prime components.
///
/// Two arrows end up in different components exactly when some vertex of
/// dimension 1 separates them in the underlying graph. A loop at a dimension-1
/// vertex is separated from everything else by that vertex.
pub fn prime_components(s: &QuiverSetting) -> Result<Vec<PrimeComponent>> {
    let q = &s.quiver;
    if q.vertex_count() == 0 {
        return Err(Error::EmptyQuiver);
    }
    if !is_connected(q) {
        return Err(Error::DisconnectedQuiver);
    }
    if q.arrow_count() == 0 {
        return Ok(vec![PrimeComponent { vertices: vec![0], arrows: vec![], setting: s.clone() }]);
    }
    let separators: Vec<usize> = q.vertices().filter(|&v| s.dim[v] == 1).collect();
    let labelings: Vec<Vec<usize>> = separators.iter().map(|&x| undirected_components(q, Some(x))).collect();

    // signature of an arrow: which side of each separator it lies on
    let mut classes: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (i, a) in q.arrows().iter().enumerate() {
        let sig: Vec<usize> = separators
            .iter()
            .zip(&labelings)
            .map(|(&x, labels)| {
                if a.tail == x && a.head == x {
                    usize::MAX - i
                } else if a.tail == x {
                    labels[a.head]
                } else {
                    labels[a.tail]
                }
            })
            .collect();
        classes.entry(sig).or_default().push(i);
    }
    let mut groups: Vec<Vec<usize>> = classes.into_values().collect();
    groups.sort_by_key(|g| g[0]);
    Ok(groups
        .into_iter()
        .map(|arrows| {
            let mut vertices: Vec<usize> =
                arrows.iter().flat_map(|&i| [q.arrow(i).tail, q.arrow(i).head]).collect();
            vertices.sort_unstable();
            vertices.dedup();
            let setting = s.sub(&vertices, &arrows);
            PrimeComponent { vertices, arrows, setting }
        })
        .collect())
}
