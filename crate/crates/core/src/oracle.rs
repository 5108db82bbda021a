//! Brute-force reference computations and the harness that compares them
//! with the fast paths.

use std::collections::{BTreeSet, VecDeque};
use std::sync::Mutex;

use serde::Serialize;

use crate::catalog::{cycle_sums_up_to_iso, for_each_setting, permutations};
use crate::cofree::is_cofree;
use crate::error::{Error, Result};
use crate::fiber::nullcone_components;
use crate::flat::is_flat_local_setting;
use crate::limits::Limits;
use crate::quiver::{count_quasiprimitive_paths, is_connected, is_strongly_connected, quasiprimitive_cycles_through};
use crate::quiver::{Quiver, QuiverSetting};
use crate::rep_theory::{has_simple_reps, LocalQuiverData};
use crate::toric::{
    connecting_subquivers, connecting_subquivers_brute_force, extend_component, minimal_connecting_subquivers,
    minimal_masks, toric_model,
};

/// Strong connectivity from the transitive closure (Warshall).
pub fn strongly_connected_by_closure(q: &Quiver) -> bool {
    let n = q.vertex_count();
    let mut reach = vec![vec![false; n]; n];
    for (v, row) in reach.iter_mut().enumerate() {
        row[v] = true;
    }
    for a in q.arrows() {
        reach[a.tail][a.head] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    reach.iter().all(|row| row.iter().all(|&r| r))
}

/// Walks from `from` grown one arrow at a time, breadth first, never passing
/// through a vertex `w` more than `α(w)` times (the start counts once).
/// `on_step(walk, head, fits)` sees every one-arrow extension of a valid
/// walk; `fits` tells whether entering `head` stays within its budget.
fn bfs_walks(
    s: &QuiverSetting,
    from: usize,
    limits: &Limits,
    what: &'static str,
    mut on_step: impl FnMut(&[usize], usize, bool),
) -> Result<()> {
    let mut counter = limits.counter(what);
    let mut queue: VecDeque<(Vec<usize>, Vec<u64>, usize)> = VecDeque::new();
    let mut visits = vec![0u64; s.vertex_count()];
    visits[from] = 1;
    queue.push_back((Vec::new(), visits, from));
    while let Some((walk, visits, at)) = queue.pop_front() {
        counter.tick()?;
        for i in s.quiver.out_arrows(at) {
            let head = s.quiver.arrow(i).head;
            let mut next = walk.clone();
            next.push(i);
            let fits = visits[head] < s.dim[head];
            on_step(&next, head, fits);
            if fits {
                let mut v = visits.clone();
                v[head] += 1;
                queue.push_back((next, v, head));
            }
        }
    }
    Ok(())
}

/// Quasiprimitive cycles through `v` by breadth-first enumeration of closed
/// walks; cycles are identified up to rotation via the set of all rotations.
/// Closing a cycle at `v` does not count as another visit.
pub fn cycles_through_by_bfs(s: &QuiverSetting, v: usize, limits: &Limits) -> Result<u64> {
    if s.dim[v] == 0 {
        return Ok(0);
    }
    let mut classes: BTreeSet<BTreeSet<Vec<usize>>> = BTreeSet::new();
    bfs_walks(s, v, limits, "cycle enumeration oracle", |walk, head, _| {
        if head == v {
            let k = walk.len();
            classes.insert((0..k).map(|r| walk[r..].iter().chain(&walk[..r]).copied().collect()).collect());
        }
    })?;
    Ok(classes.len() as u64)
}

/// Quasiprimitive paths `from ⇝ to` counted by breadth-first enumeration.
pub fn paths_by_bfs(s: &QuiverSetting, from: usize, to: usize, limits: &Limits) -> Result<u64> {
    if s.dim[from] == 0 {
        return Ok(0);
    }
    let mut total = 0;
    bfs_walks(s, from, limits, "path enumeration oracle", |_, head, fits| {
        if head == to && fits {
            total += 1;
        }
    })?;
    Ok(total)
}

/// A vertex bijection `π` carrying `a` onto `b`, dimensions included, found by trying
/// every permutation.
pub fn isomorphism(a: &QuiverSetting, b: &QuiverSetting) -> Option<Vec<usize>> {
    let n = a.vertex_count();
    if n != b.vertex_count() || a.quiver.arrow_count() != b.quiver.arrow_count() {
        return None;
    }
    let (ca, cb) = (a.quiver.count_matrix(), b.quiver.count_matrix());
    permutations(n).into_iter().find(|p| {
        (0..n).all(|v| a.dim[v] == b.dim[p[v]]) && (0..n).all(|t| (0..n).all(|h| ca[t][h] == cb[p[t]][p[h]]))
    })
}

pub fn are_isomorphic(a: &QuiverSetting, b: &QuiverSetting) -> bool {
    isomorphism(a, b).is_some()
}

/// Outcome of one family of comparisons.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct OracleCheck {
    pub name: String,
    pub instances: u64,
    pub mismatches: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub checks: Vec<OracleCheck>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.mismatches.is_empty())
    }

    fn check(&mut self, name: &str) -> &mut OracleCheck {
        if let Some(i) = self.checks.iter().position(|c| c.name == name) {
            return &mut self.checks[i];
        }
        self.checks.push(OracleCheck { name: name.into(), ..Default::default() });
        self.checks.last_mut().expect("just pushed")
    }

    fn record(&mut self, name: &str, ok: bool, detail: impl FnOnce() -> String) {
        let c = self.check(name);
        c.instances += 1;
        if !ok && c.mismatches.len() < 20 {
            c.mismatches.push(detail());
        }
    }

    fn merge(&mut self, other: OracleReport) {
        for c in other.checks {
            let mine = self.check(&c.name);
            mine.instances += c.instances;
            mine.mismatches.extend(c.mismatches);
        }
    }
}

pub const REACHABILITY: &str = "strong connectivity: closure vs search";
pub const CYCLES: &str = "quasiprimitive cycles: breadth-first vs depth-first";
pub const PATHS: &str = "quasiprimitive paths: breadth-first vs depth-first";
pub const SUBQUIVERS: &str = "connecting subquivers: all subsets vs per-vertex product";
pub const MINIMAL: &str = "minimal connecting subquivers: inclusion-minimal vs one arrow per vertex";
pub const POSET: &str = "cone poset vs connecting subquivers";
pub const BETTI: &str = "Betti sum vs in-degree product";
pub const FLAT_COFREE: &str = "flat local setting vs cofree with simples";

/// Oracles that need only the setting: strong connectivity, and cycle and
/// path counts for every vertex (pair).
pub fn graph_oracles(s: &QuiverSetting, limits: &Limits, report: &mut OracleReport) -> Result<()> {
    let q = &s.quiver;
    let fast = is_strongly_connected(q)?;
    let slow = strongly_connected_by_closure(q);
    report.record(REACHABILITY, fast == slow, || format!("{s}: search {fast}, closure {slow}"));
    for v in q.vertices() {
        let fast = quasiprimitive_cycles_through(s, v, limits)?.len() as u64;
        let slow = cycles_through_by_bfs(s, v, limits)?;
        report.record(CYCLES, fast == slow, || format!("{s} at {}: {fast} vs {slow}", q.name(v)));
        for w in q.vertices().filter(|&w| w != v) {
            let fast = count_quasiprimitive_paths(s, v, w, limits)?;
            let slow = paths_by_bfs(s, v, w, limits)?;
            report.record(PATHS, fast == slow, || format!("{s} {}⇝{}: {fast} vs {slow}", q.name(v), q.name(w)));
        }
    }
    Ok(())
}

/// Toric oracles for every nullcone component of a cycle-sum local setting.
pub fn toric_oracles(local: &LocalQuiverData, limits: &Limits, report: &mut OracleReport) -> Result<()> {
    for component in nullcone_components(local)? {
        let ext = extend_component(&component, &local.gamma)?;
        let label = || format!("{} with zeroed arrows {:?}", local.setting, component.zeroed_arrows);
        let fast = connecting_subquivers(&ext, limits)?;
        if ext.arrow_count() <= limits.max_subset_arrows {
            let slow = connecting_subquivers_brute_force(&ext, limits)?;
            report.record(SUBQUIVERS, fast == slow, || format!("{}: {} vs {}", label(), fast.len(), slow.len()));
        }
        let minimal = minimal_connecting_subquivers(&ext, limits)?;
        let from_all = minimal_masks(&fast);
        report.record(MINIMAL, minimal == from_all, label);

        let model = toric_model(&component, &local.gamma, limits)?;
        let cones = model.fan.cones(limits)?;
        let from_subquivers: Result<BTreeSet<Vec<usize>>> = fast
            .iter()
            .map(|&mask| {
                let mut cone: Vec<usize> = (0..ext.arrow_count())
                    .filter(|a| mask >> a & 1 == 0)
                    .map(|a| model.fan.ray_of_arrow(a).ok_or(Error::VerificationFailure(format!("arrow {a} has no ray"))))
                    .collect::<Result<_>>()?;
                cone.sort_unstable();
                Ok(cone)
            })
            .collect();
        let from_subquivers = from_subquivers?;
        let anti = from_subquivers == cones && from_subquivers.len() == fast.len();
        report.record(POSET, anti, || format!("{}: {} cones, {} subquivers", label(), cones.len(), fast.len()));

        let product: u64 = (1..ext.vertex_count()).map(|w| ext.quiver.in_degree(w) as u64).product();
        let sum: u64 = model.betti.iter().sum();
        report.record(BETTI, sum == product && minimal.len() as u64 == product, || {
            format!("{}: Σb = {sum}, Π indegree = {product}, minimal = {}", label(), minimal.len())
        });
    }
    Ok(())
}

/// Flatness against cofreeness for a connected setting with simple
/// representations; other settings are skipped.
pub fn flat_cofree_oracle(s: &QuiverSetting, limits: &Limits, report: &mut OracleReport) -> Result<()> {
    if !is_connected(&s.quiver) || !has_simple_reps(s)? {
        return Ok(());
    }
    let flat = is_flat_local_setting(s)?.flat;
    let cofree = is_cofree(s, limits)?.cofree;
    report.record(FLAT_COFREE, flat == cofree, || format!("{s}: flat {flat}, cofree {cofree}"));
    Ok(())
}

/// Every oracle that applies to one input: the graph oracles, flatness against
/// cofreeness, and the toric oracles when the setting is a cycle sum with
/// `α = 1`.
pub fn instance_oracles(s: &QuiverSetting, gamma: Option<&[u64]>, limits: &Limits) -> Result<OracleReport> {
    let mut report = OracleReport::default();
    graph_oracles(s, limits, &mut report)?;
    flat_cofree_oracle(s, limits, &mut report)?;
    let gamma = gamma.map(<[u64]>::to_vec).unwrap_or_else(|| vec![1; s.vertex_count()]);
    if let Ok(local) = LocalQuiverData::new(s.clone(), gamma) {
        match toric_oracles(&local, limits, &mut report) {
            Ok(()) | Err(Error::UnsupportedFamily(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(report)
}

/// Sizes of the catalog sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CatalogBounds {
    pub max_vertices: usize,
    pub max_arrows: usize,
    pub max_dim: u64,
    /// Cycle sums for the toric oracles: vertex bound and `γ` entries up to this.
    pub cycle_sum_vertices: usize,
    pub max_gamma: u64,
}

impl Default for CatalogBounds {
    fn default() -> Self {
        CatalogBounds { max_vertices: 4, max_arrows: 6, max_dim: 2, cycle_sum_vertices: 4, max_gamma: 2 }
    }
}

/// Runs the oracles over every setting of the catalog and over all cycle sums
/// with all small `γ`.
pub fn catalog_oracles(bounds: &CatalogBounds, limits: &Limits) -> Result<OracleReport> {
    let shared = Mutex::new(OracleReport::default());
    for_each_setting(bounds.max_vertices, bounds.max_arrows, bounds.max_dim, |s| {
        let mut local = OracleReport::default();
        graph_oracles(s, limits, &mut local)?;
        flat_cofree_oracle(s, limits, &mut local)?;
        shared.lock().expect("oracle report lock").merge(local);
        Ok(())
    })?;
    let mut report = shared.into_inner().expect("oracle report lock");
    for sum in cycle_sums_up_to_iso(bounds.cycle_sum_vertices, bounds.cycle_sum_vertices) {
        let n = sum.setting.vertex_count();
        for gamma in crate::catalog::dimension_vectors(n, 1, bounds.max_gamma) {
            let local = LocalQuiverData::new(sum.setting.clone(), gamma)?;
            toric_oracles(&local, limits, &mut report)?;
        }
    }
    Ok(report)
}
