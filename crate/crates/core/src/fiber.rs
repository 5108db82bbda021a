//! Irreducible components of Brauer-Severi fibers over flat points whose local
//! quiver is a connected sum of cycles with dimension vector `1`.
//!
//! Every component of the nullcone zeroes one arrow per cycle and leaves a
//! tree `T`. The fiber component attached to `T` is a fibered product of the
//! graphs `Γ(v)` of coordinate projections between the projective spaces
//! `ℙ^{N_w}`, one graph per root `v` of `T`, glued along the graphs of the
//! common rooted subtrees.

use std::collections::VecDeque;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::quiver::{is_connected, prime_components, Arrow, Quiver, QuiverSetting};
use crate::rep_theory::LocalQuiverData;
use crate::shapes::single_cycle;

/// The cycles of a loop-stripped local quiver, as ambient arrow indices
/// grouped per cycle, in canonical order. Errors unless every prime
/// component is a cycle with `α = 1`.
pub fn cycle_decomposition(s: &QuiverSetting) -> Result<(Quiver, Vec<usize>, Vec<Vec<usize>>)> {
    if !is_connected(&s.quiver) {
        return Err(Error::UnsupportedFamily("local quiver is not connected".into()));
    }
    if s.dim.iter().any(|&d| d != 1) {
        return Err(Error::UnsupportedFamily(format!("dimension vector {} is not 1", s.dim)));
    }
    let (stripped, kept) = s.quiver.without_loops();
    if stripped.arrow_count() == 0 {
        if stripped.vertex_count() != 1 {
            return Err(Error::UnsupportedFamily("local quiver is not connected".into()));
        }
        return Ok((stripped, kept, Vec::new()));
    }
    let stripped_setting = QuiverSetting::new(stripped.clone(), s.dim.clone())?;
    let mut cycles = Vec::new();
    for component in prime_components(&stripped_setting)? {
        if single_cycle(&component.setting.quiver).is_none() {
            return Err(Error::UnsupportedFamily(format!(
                "prime component on {} vertices is not an oriented cycle",
                component.vertices.len()
            )));
        }
        cycles.push(component.arrows.iter().map(|&i| kept[i]).collect());
    }
    Ok((stripped, kept, cycles))
}

/// One irreducible component of the nullcone of a cycle sum with `α = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeComponent {
    /// All local vertices with the surviving arrows.
    pub tree: Quiver,
    /// Local arrow index of every arrow of `tree`.
    pub tree_arrows: Vec<usize>,
    /// Local arrow indices set to zero, one per cycle.
    pub zeroed_arrows: Vec<usize>,
    /// Sinks of `tree`, ascending.
    pub roots: Vec<usize>,
    /// `N_w` per vertex.
    pub n_w: Vec<u64>,
}

/// Nullcone components, lexicographic in the zeroed arrow of each cycle.
pub fn nullcone_components(local: &LocalQuiverData) -> Result<Vec<TreeComponent>> {
    let q = &local.setting.quiver;
    let (_, _, cycles) = cycle_decomposition(&local.setting)?;
    let mut choice = vec![0usize; cycles.len()];
    let mut out = Vec::new();
    loop {
        let zeroed: Vec<usize> = cycles.iter().zip(&choice).map(|(c, &j)| c[j]).collect();
        let mut tree_arrows = Vec::new();
        let mut arrows = Vec::new();
        for (i, a) in q.arrows().iter().enumerate() {
            if !a.is_loop() && !zeroed.contains(&i) {
                tree_arrows.push(i);
                arrows.push(*a);
            }
        }
        let tree = Quiver::new(q.names().to_vec(), arrows)?;
        let roots = tree.vertices().filter(|&v| tree.out_degree(v) == 0).collect();
        let n_w = compute_nw(&tree, &local.gamma)?;
        out.push(TreeComponent { tree, tree_arrows, zeroed_arrows: zeroed, roots, n_w });

        // odometer, last cycle fastest
        let mut i = cycles.len();
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < cycles[i].len() {
                break;
            }
            choice[i] = 0;
        }
    }
}

/// Vertices of an acyclic quiver in topological order.
fn topological_order(q: &Quiver) -> Result<Vec<usize>> {
    let mut indeg: Vec<usize> = q.vertices().map(|v| q.in_degree(v)).collect();
    let mut ready: VecDeque<usize> = q.vertices().filter(|&v| indeg[v] == 0).collect();
    let mut order = Vec::with_capacity(q.vertex_count());
    while let Some(v) = ready.pop_front() {
        order.push(v);
        for i in q.out_arrows(v) {
            let h = q.arrow(i).head;
            indeg[h] -= 1;
            if indeg[h] == 0 {
                ready.push_back(h);
            }
        }
    }
    if order.len() != q.vertex_count() {
        return Err(Error::UnsupportedFamily("tree has an oriented cycle".into()));
    }
    Ok(order)
}

/// `N_w + 1 = γ(w) + Σ_{h(a) = w} (N_{t(a)} + 1)` over an acyclic quiver.
pub fn compute_nw(tree: &Quiver, gamma: &[u64]) -> Result<Vec<u64>> {
    if gamma.len() != tree.vertex_count() {
        return Err(Error::InvalidGamma(format!("{} entries for {} vertices", gamma.len(), tree.vertex_count())));
    }
    if let Some(v) = gamma.iter().position(|&g| g == 0) {
        return Err(Error::NonPositiveGamma(v));
    }
    let mut size = vec![0u64; tree.vertex_count()];
    for w in topological_order(tree)? {
        let incoming = tree.in_arrows(w).try_fold(0u64, |acc, i| acc.checked_add(size[tree.arrow(i).tail]));
        size[w] = incoming.and_then(|x| x.checked_add(gamma[w])).ok_or(Error::Overflow("N_w"))?;
    }
    Ok(size.into_iter().map(|s| s - 1).collect())
}

/// Vertices with a path to `v` (including `v`), ascending.
pub fn rooted_subtree(tree: &Quiver, v: usize) -> Vec<usize> {
    let reversed: Vec<Arrow> = tree.arrows().iter().map(|a| Arrow::new(a.head, a.tail)).collect();
    let rev = Quiver::new(tree.names().to_vec(), reversed).expect("same endpoints");
    crate::quiver::reachable(&rev, v, |_| true)
        .into_iter()
        .enumerate()
        .filter_map(|(w, r)| r.then_some(w))
        .collect()
}

/// Homogeneous coordinates of `ℙ^{N_w}`: the `γ(w)` free coordinates, then
/// one block per incoming arrow. Ranges are 1-based and inclusive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordinateBlocks {
    pub vertex: usize,
    pub free: (u64, u64),
    /// `(tree arrow, tail, first, last)` per incoming arrow, in arrow order.
    pub projections: Vec<(usize, usize, u64, u64)>,
}

/// The graph `Γ(v)` of the projections inside the rooted subtree `T(v)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaGraph {
    pub root: usize,
    /// Vertices of `T(v)`, ascending.
    pub vertices: Vec<usize>,
    /// `N_w` for each vertex of `T(v)`, aligned with `vertices`.
    pub spaces: Vec<u64>,
    /// Root distance for each vertex of `T(v)`, aligned with `vertices`.
    pub distance: Vec<usize>,
    pub height: usize,
    /// Vertices grouped by root distance; `π_i` maps layer `i − 1` to layer `i`.
    pub layers: Vec<Vec<usize>>,
    /// Coordinate blocks of every vertex of `T(v)`, aligned with `vertices`.
    pub blocks: Vec<CoordinateBlocks>,
}

pub fn gamma_graph(component: &TreeComponent, root: usize, gamma: &[u64]) -> Result<GammaGraph> {
    if !component.roots.contains(&root) {
        return Err(Error::NotARoot(root));
    }
    let tree = &component.tree;
    let vertices = rooted_subtree(tree, root);
    let mut dist = vec![usize::MAX; tree.vertex_count()];
    dist[root] = 0;
    let mut queue = VecDeque::from([root]);
    let mut layers: Vec<Vec<usize>> = Vec::new();
    while let Some(w) = queue.pop_front() {
        if layers.len() <= dist[w] {
            layers.push(Vec::new());
        }
        layers[dist[w]].push(w);
        for i in tree.in_arrows(w) {
            let t = tree.arrow(i).tail;
            if dist[t] == usize::MAX {
                dist[t] = dist[w] + 1;
                queue.push_back(t);
            }
        }
    }
    let blocks = vertices
        .iter()
        .map(|&w| {
            let mut next = gamma[w] + 1;
            let projections = tree
                .in_arrows(w)
                .map(|i| {
                    let t = tree.arrow(i).tail;
                    let first = next;
                    next += component.n_w[t] + 1;
                    (i, t, first, next - 1)
                })
                .collect();
            debug_assert_eq!(next - 1, component.n_w[w] + 1);
            CoordinateBlocks { vertex: w, free: (1, gamma[w]), projections }
        })
        .collect();
    Ok(GammaGraph {
        root,
        spaces: vertices.iter().map(|&w| component.n_w[w]).collect(),
        distance: vertices.iter().map(|&w| dist[w]).collect(),
        height: layers.len() - 1,
        layers,
        blocks,
        vertices,
    })
}

/// Common rooted subtree `T(v) ∩ T(w)` of two roots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Overlap {
    pub roots: (usize, usize),
    pub vertices: Vec<usize>,
    /// The unique sink `v ∩ w`.
    pub root: usize,
}

/// One gluing `… ×_{Γ(v∩w)} Γ(w)` of the iterated fibered product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssemblyStep {
    /// Index of the `F_level` the gluing contributes to.
    pub level: usize,
    pub parent: usize,
    pub child: usize,
    pub overlap_root: usize,
}

/// Fiber component attached to one nullcone component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentFiber {
    pub tree: TreeComponent,
    pub gamma_graphs: Vec<GammaGraph>,
    /// All non-empty pairwise overlaps of rooted subtrees.
    pub overlaps: Vec<Overlap>,
    pub assembly: Vec<AssemblyStep>,
    pub dimension: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberDescription {
    pub n: u64,
    pub components: Vec<ComponentFiber>,
}

impl FiberDescription {
    /// Common dimension of the components, if they agree.
    pub fn dimension(&self) -> Option<i64> {
        let first = self.components.first()?.dimension;
        self.components.iter().all(|c| c.dimension == first).then_some(first)
    }

    pub fn to_json(&self, local: &Quiver) -> Value {
        let name = |v: usize| local.name(v).to_string();
        let components: Vec<Value> = self
            .components
            .iter()
            .map(|c| {
                let t = &c.tree;
                json!({
                    "zeroed_arrows": t.zeroed_arrows.iter().map(|&i| {
                        let a = local.arrow(i);
                        [name(a.tail), name(a.head)]
                    }).collect::<Vec<_>>(),
                    "tree": t.tree.arrows().iter().map(|a| [name(a.tail), name(a.head)]).collect::<Vec<_>>(),
                    "roots": t.roots.iter().map(|&v| name(v)).collect::<Vec<_>>(),
                    "n_w": t.tree.vertices().map(|v| (name(v), json!(t.n_w[v]))).collect::<serde_json::Map<_, _>>(),
                    "gamma_graphs": c.gamma_graphs.iter().map(|g| json!({
                        "root": name(g.root),
                        "height": g.height,
                        "layers": g.layers.iter().map(|l| l.iter().map(|&v| name(v)).collect::<Vec<_>>()).collect::<Vec<_>>(),
                        "blocks": g.blocks.iter().map(|b| json!({
                            "vertex": name(b.vertex),
                            "space": t.n_w[b.vertex],
                            "free": [b.free.0, b.free.1],
                            "projections": b.projections.iter().map(|&(_, tail, first, last)| json!({
                                "tail": name(tail), "first": first, "last": last
                            })).collect::<Vec<_>>(),
                        })).collect::<Vec<_>>(),
                    })).collect::<Vec<_>>(),
                    "overlaps": c.overlaps.iter().map(|o| json!({
                        "roots": [name(o.roots.0), name(o.roots.1)],
                        "vertices": o.vertices.iter().map(|&v| name(v)).collect::<Vec<_>>(),
                        "root": name(o.root),
                    })).collect::<Vec<_>>(),
                    "assembly": c.assembly.iter().map(|s| json!({
                        "level": s.level,
                        "parent": name(s.parent),
                        "child": name(s.child),
                        "over": name(s.overlap_root),
                    })).collect::<Vec<_>>(),
                    "dimension": c.dimension,
                })
            })
            .collect();
        json!({ "n": self.n, "dimension": self.dimension(), "components": components })
    }
}

/// Describes every fiber component over a flat point with cycle-sum local quiver.
pub fn fiber_description(local: &LocalQuiverData) -> Result<FiberDescription> {
    let components = nullcone_components(local)?
        .into_iter()
        .map(|tree| describe_component(tree, &local.gamma))
        .collect::<Result<_>>()?;
    Ok(FiberDescription { n: local.n, components })
}

fn describe_component(tree: TreeComponent, gamma: &[u64]) -> Result<ComponentFiber> {
    let gamma_graphs =
        tree.roots.iter().map(|&r| gamma_graph(&tree, r, gamma)).collect::<Result<Vec<_>>>()?;
    let mut overlaps = Vec::new();
    for (i, g) in gamma_graphs.iter().enumerate() {
        for h in &gamma_graphs[i + 1..] {
            let common: Vec<usize> = g.vertices.iter().copied().filter(|v| h.vertices.contains(v)).collect();
            if common.is_empty() {
                continue;
            }
            let sinks: Vec<usize> = common
                .iter()
                .copied()
                .filter(|&v| tree.tree.out_arrows(v).all(|a| !common.contains(&tree.tree.arrow(a).head)))
                .collect();
            if sinks.len() != 1 {
                return Err(Error::UnsupportedFamily("common subtree without a unique root".into()));
            }
            overlaps.push(Overlap { roots: (g.root, h.root), vertices: common, root: sinks[0] });
        }
    }
    let assembly = assemble(&tree.roots, &overlaps)?;
    let position = |v: usize| tree.roots.iter().position(|&r| r == v).expect("root");
    let total: i64 = gamma_graphs.iter().map(|g| tree.n_w[g.root] as i64).sum();
    let glued: i64 = assembly.iter().map(|s| tree.n_w[s.overlap_root] as i64).sum();
    debug_assert!(assembly.iter().all(|s| position(s.parent) != position(s.child)));
    Ok(ComponentFiber { dimension: total - glued, tree, gamma_graphs, overlaps, assembly })
}

/// Spanning tree of the overlap graph of maximal total overlap size, ties
/// broken by canonical root order, laid out breadth-first from the first root.
///
/// Rooted subtrees of a tree have a spanning tree of overlaps in which the
/// roots containing any given vertex stay connected; a maximum-weight
/// spanning tree is one.
fn assemble(roots: &[usize], overlaps: &[Overlap]) -> Result<Vec<AssemblyStep>> {
    let k = roots.len();
    let pos = |v: usize| roots.iter().position(|&r| r == v).expect("root");
    let mut edges: Vec<(usize, usize, usize, usize)> =
        overlaps.iter().map(|o| (o.vertices.len(), pos(o.roots.0), pos(o.roots.1), o.root)).collect();
    edges.sort_by(|a, b| b.0.cmp(&a.0).then((a.1, a.2).cmp(&(b.1, b.2))));
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); k];
    for &(_, i, j, over) in &edges {
        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
        if a != b {
            parent[a] = b;
            adj[i].push((j, over));
            adj[j].push((i, over));
        }
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    let mut steps = Vec::new();
    if k == 0 {
        return Ok(steps);
    }
    let mut depth = vec![usize::MAX; k];
    depth[0] = 0;
    let mut queue = VecDeque::from([0]);
    while let Some(i) = queue.pop_front() {
        for &(j, over) in &adj[i] {
            if depth[j] == usize::MAX {
                depth[j] = depth[i] + 1;
                steps.push(AssemblyStep { level: depth[i], parent: roots[i], child: roots[j], overlap_root: over });
                queue.push_back(j);
            }
        }
    }
    if depth.contains(&usize::MAX) {
        return Err(Error::UnsupportedFamily("rooted subtrees do not overlap in a connected pattern".into()));
    }
    Ok(steps)
}
