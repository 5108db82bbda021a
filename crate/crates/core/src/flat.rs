//! Flatness of the Brauer-Severi fibration at a point, read off from the local
//! quiver data, and the shape of reduced settings whose flat locus is larger
//! than their Azumaya locus.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::quiver::{
    is_strongly_connected, prime_components, weak_components, Arrow, DimensionVector, Quiver, QuiverSetting,
};
use crate::rep_theory::{
    enumerate_simple_subdimvectors, has_simple_reps, is_reduced, local_quiver, DecompositionType,
    LocalQuiverData, LocalQuiverJson, Summand,
};
use crate::shapes::{single_cycle, two_cycles, TwoCycles};

/// Prime settings occurring in local quivers over the flat locus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FlatFamily {
    /// One vertex of dimension 1 without arrows.
    Point,
    /// Oriented cycle (a loop included) with `α = 1`.
    Cycle,
    /// Two paths of `d`'s and `d−1`'s closed up through a vertex of dimension 1.
    DoublePath,
    /// `1 ⇄ d` with a cycle of `d`'s through the `d` vertex.
    ConstantCycle,
    /// `1 ⇄ d` with a cycle of `d−1`'s through the `d` vertex.
    LoweredCycle,
    /// Two cycles sharing one vertex, `α = 2·1`.
    DoubledCycleSum,
}

impl fmt::Display for FlatFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let json = serde_json::to_value(self).map_err(|_| fmt::Error)?;
        f.write_str(json.as_str().unwrap_or_default())
    }
}

/// Flatness verdict: the matched family of every prime component, grouped by
/// connected component in vertex order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlatVerdict {
    pub flat: bool,
    pub families: Vec<Option<FlatFamily>>,
}

/// Matches every prime component of `s` against the flat families.
pub fn is_flat_local_setting(s: &QuiverSetting) -> Result<FlatVerdict> {
    if s.vertex_count() == 0 {
        return Err(Error::EmptyQuiver);
    }
    let mut families = Vec::new();
    for vertices in weak_components(&s.quiver) {
        let (component, _) = s.induced(&vertices);
        for prime in prime_components(&component)? {
            families.push(match_flat_family(&prime.setting));
        }
    }
    let flat = families.iter().all(Option::is_some);
    Ok(FlatVerdict { flat, families })
}

/// Flat family of a prime setting, if any.
pub fn match_flat_family(p: &QuiverSetting) -> Option<FlatFamily> {
    let q = &p.quiver;
    let dim = |v: usize| p.dim[v];
    if q.vertex_count() == 1 && q.arrow_count() == 0 && dim(0) == 1 {
        return Some(FlatFamily::Point);
    }
    if single_cycle(q).is_some() && p.dim.iter().all(|&d| d == 1) {
        return Some(FlatFamily::Cycle);
    }
    let shape = two_cycles(q)?;
    if shape.is_figure_eight() {
        if p.dim.iter().all(|&d| d == 2) {
            return Some(FlatFamily::DoubledCycleSum);
        }
        return one_to_d_family(p, &shape);
    }
    let d = dim(shape.shared[0]);
    if d < 2 || !shape.shared.iter().all(|&w| dim(w) == d) {
        return None;
    }
    let is_centre = |b: &Vec<usize>| b.len() == 1 && dim(b[0]) == 1;
    let lowered = |b: &Vec<usize>| !b.is_empty() && b.iter().all(|&w| dim(w) == d - 1);
    let [a, b] = &shape.branches;
    ((is_centre(a) && lowered(b)) || (is_centre(b) && lowered(a))).then_some(FlatFamily::DoublePath)
}

fn one_to_d_family(p: &QuiverSetting, shape: &TwoCycles) -> Option<FlatFamily> {
    let d = p.dim[shape.shared[0]];
    if d < 2 {
        return None;
    }
    for (i, centre) in shape.branches.iter().enumerate() {
        if centre.len() != 1 || p.dim[centre[0]] != 1 {
            continue;
        }
        let cycle = &shape.branches[1 - i];
        if cycle.iter().all(|&w| p.dim[w] == d) {
            return Some(FlatFamily::ConstantCycle);
        }
        if !cycle.is_empty() && cycle.iter().all(|&w| p.dim[w] == d - 1) {
            return Some(FlatFamily::LoweredCycle);
        }
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PointKind {
    Azumaya,
    FlatNonAzumaya,
    NonFlat,
}

impl fmt::Display for PointKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PointKind::Azumaya => "Azumaya",
            PointKind::FlatNonAzumaya => "FlatNonAzumaya",
            PointKind::NonFlat => "NonFlat",
        })
    }
}

/// Classification of a point of the quotient by its local quiver data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointClass {
    pub kind: PointKind,
    pub local: LocalQuiverData,
    /// Dimension of the Brauer-Severi fiber when it is known.
    pub fiber_dim: Option<u64>,
    /// Flat families of the prime components of the local quiver.
    pub families: Vec<FlatFamily>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointClassJson {
    pub kind: PointKind,
    pub local: LocalQuiverJson,
    pub fiber_dim: Option<u64>,
    pub family: Option<String>,
}

impl PointClass {
    pub fn to_json(&self) -> PointClassJson {
        let family = (!self.families.is_empty())
            .then(|| self.families.iter().map(ToString::to_string).collect::<Vec<_>>().join(","));
        PointClassJson { kind: self.kind, local: self.local.to_json(), fiber_dim: self.fiber_dim, family }
    }
}

/// Builds the local quiver of the point of type `d` and classifies it.
pub fn classify_point(s: &QuiverSetting, gamma: Option<&[u64]>, d: &DecompositionType) -> Result<PointClass> {
    let local = local_quiver(s, d, gamma)?;
    classify_local(local)
}

/// Classification of explicit local quiver data.
pub fn classify_local(local: LocalQuiverData) -> Result<PointClass> {
    let top = local.n - 1;
    if local.setting.vertex_count() == 1 && local.setting.dim[0] == 1 {
        return Ok(PointClass { kind: PointKind::Azumaya, local, fiber_dim: Some(top), families: vec![] });
    }
    // a flat point has a local setting with simple representations, which
    // rules out disconnected local quivers
    let verdict = is_flat_local_setting(&local.setting)?;
    if verdict.flat && has_simple_reps(&local.setting)? {
        let families = verdict.families.into_iter().flatten().collect();
        Ok(PointClass { kind: PointKind::FlatNonAzumaya, local, fiber_dim: Some(top), families })
    } else {
        Ok(PointClass { kind: PointKind::NonFlat, local, fiber_dim: None, families: vec![] })
    }
}

/// Blob decomposition exhibiting a reduced setting as a connected sum of
/// cycles whose vertices are blown up to simple settings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularShape {
    /// Vertex sets of the blobs, ordered by smallest vertex.
    pub blobs: Vec<Vec<usize>>,
    /// Arrows joining different blobs.
    pub connecting: Vec<usize>,
    /// Cycle pattern on the blobs: one vertex per blob, one arrow per
    /// connecting arrow, all dimensions 1.
    pub pattern: QuiverSetting,
    /// Loops of the local quiver at each blob, `1 − χ(β, β)`.
    pub loops: Vec<i64>,
}

impl SingularShape {
    /// `{(β_u, 1)}` over the blobs.
    pub fn decomposition(&self, s: &QuiverSetting) -> DecompositionType {
        let n = s.vertex_count();
        DecompositionType::new(
            self.blobs
                .iter()
                .map(|blob| {
                    let mut beta = vec![0; n];
                    for &v in blob {
                        beta[v] = s.dim[v];
                    }
                    Summand { beta: DimensionVector(beta), mult: 1 }
                })
                .collect(),
        )
    }

    pub fn to_json(&self, s: &QuiverSetting) -> SingularShapeJson {
        let q = &s.quiver;
        SingularShapeJson {
            blobs: self.blobs.iter().map(|b| b.iter().map(|&v| q.name(v).to_string()).collect()).collect(),
            connecting: self
                .connecting
                .iter()
                .map(|&i| [q.name(q.arrow(i).tail).to_string(), q.name(q.arrow(i).head).to_string()])
                .collect(),
            loops: self.loops.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularShapeJson {
    pub blobs: Vec<Vec<String>>,
    pub connecting: Vec<[String; 2]>,
    pub loops: Vec<i64>,
}

/// Searches for a blob decomposition of a reduced setting.
///
/// Connecting arrows are drawn from the non-loop arrows between dimension-1
/// vertices. Every subset is tried; the witness is the finest decomposition,
/// with the most blobs and, among those, the fewest connecting arrows.
pub fn singular_shape_check(s: &QuiverSetting, limits: &Limits) -> Result<Option<SingularShape>> {
    if !is_reduced(s)? {
        return Err(Error::NotReduced);
    }
    find_singular_shape(s, limits)
}

/// The blob search without the reducedness precondition.
pub fn find_singular_shape(s: &QuiverSetting, limits: &Limits) -> Result<Option<SingularShape>> {
    let q = &s.quiver;
    let n = q.vertex_count();
    if n > 64 {
        return Err(Error::BudgetExceeded { what: "blob search (vertex count)", limit: 64 });
    }
    let candidates: Vec<usize> = (0..q.arrow_count())
        .filter(|&i| {
            let a = q.arrow(i);
            !a.is_loop() && s.dim[a.tail] == 1 && s.dim[a.head] == 1
        })
        .collect();
    if candidates.len() > limits.max_subset_arrows {
        return Err(Error::BudgetExceeded { what: "blob search (candidate arrows)", limit: limits.max_subset_arrows as u64 });
    }
    let mut counter = limits.counter("blob search");
    let mut simple_cache: HashMap<u64, bool> = HashMap::new();
    let k = candidates.len();
    let mut masks: Vec<u64> = (1..(1u64 << k)).collect();
    masks.sort_by_key(|m| (m.count_ones(), m.reverse_bits()));
    let mut best: Option<SingularShape> = None;
    for mask in masks {
        counter.tick()?;
        let mut removed = vec![false; q.arrow_count()];
        for (j, &i) in candidates.iter().enumerate() {
            if mask >> j & 1 == 1 {
                removed[i] = true;
            }
        }
        if let Some(shape) = check_blob_split(s, &removed, &mut simple_cache)? {
            if best.as_ref().is_none_or(|b| shape.blobs.len() > b.blobs.len()) {
                best = Some(shape);
            }
        }
    }
    Ok(best)
}

fn check_blob_split(
    s: &QuiverSetting,
    removed: &[bool],
    simple_cache: &mut HashMap<u64, bool>,
) -> Result<Option<SingularShape>> {
    let q = &s.quiver;
    let n = q.vertex_count();
    // union-find over the kept arrows
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (i, a) in q.arrows().iter().enumerate() {
        if !removed[i] {
            let (x, y) = (find(&mut parent, a.tail), find(&mut parent, a.head));
            parent[x] = y;
        }
    }
    let mut blob_of = vec![usize::MAX; n];
    let mut blobs: Vec<Vec<usize>> = Vec::new();
    let mut root_label = vec![usize::MAX; n];
    for v in 0..n {
        let r = find(&mut parent, v);
        if root_label[r] == usize::MAX {
            root_label[r] = blobs.len();
            blobs.push(Vec::new());
        }
        blob_of[v] = root_label[r];
        blobs[root_label[r]].push(v);
    }
    let k = blobs.len();
    if k < 2 {
        return Ok(None);
    }
    let connecting: Vec<usize> = (0..q.arrow_count()).filter(|&i| removed[i]).collect();
    let mut indeg = vec![0usize; k];
    let mut outdeg = vec![0usize; k];
    let mut pattern_arrows = Vec::with_capacity(connecting.len());
    for &i in &connecting {
        let a = q.arrow(i);
        let (u, v) = (blob_of[a.tail], blob_of[a.head]);
        if u == v {
            return Ok(None);
        }
        outdeg[u] += 1;
        indeg[v] += 1;
        pattern_arrows.push(Arrow::new(u, v));
    }
    if indeg != outdeg {
        return Ok(None);
    }
    let pattern_quiver = Quiver::new((1..=k).map(|i| format!("b{i}")).collect(), pattern_arrows)?;
    if !is_strongly_connected(&pattern_quiver)? {
        return Ok(None);
    }
    let pattern = QuiverSetting::new(pattern_quiver, DimensionVector::ones(k))?;
    if !prime_components(&pattern)?.iter().all(|c| single_cycle(&c.setting.quiver).is_some()) {
        return Ok(None);
    }
    for blob in &blobs {
        let key = blob.iter().fold(0u64, |m, &v| m | 1 << v);
        let simple = match simple_cache.get(&key) {
            Some(&b) => b,
            None => {
                let b = has_simple_reps(&s.induced(blob).0)?;
                simple_cache.insert(key, b);
                b
            }
        };
        if !simple {
            return Ok(None);
        }
    }
    let mut shape = SingularShape { blobs, connecting, pattern, loops: Vec::new() };
    let decomposition = shape.decomposition(s);
    shape.loops = decomposition
        .summands
        .iter()
        .map(|x| Ok(1 - s.chi(&x.beta, &x.beta)?))
        .collect::<Result<_>>()?;
    Ok(Some(shape))
}

/// Flat local-quiver families never have two arrows between distinct local
/// vertices, and a vertex with `α_p ≥ 2` carries at most two loops, two only
/// when `α_p = 2`. Used to prune the decomposition search.
fn loops_allowed(loops: i64, mult: u64) -> bool {
    mult == 1 || loops <= 1 || (loops == 2 && mult == 2)
}

/// Some decomposition of `s` whose point is flat but not Azumaya, searched
/// with the pruning of [`loops_allowed`] and single arrows between summands.
pub fn flat_non_azumaya_decomposition(s: &QuiverSetting, limits: &Limits) -> Result<Option<DecompositionType>> {
    search_flat_decomposition(s, limits, true)
}

/// The same search without pruning; every decomposition is classified.
pub fn flat_non_azumaya_decomposition_unpruned(
    s: &QuiverSetting,
    limits: &Limits,
) -> Result<Option<DecompositionType>> {
    search_flat_decomposition(s, limits, false)
}

fn search_flat_decomposition(s: &QuiverSetting, limits: &Limits, prune: bool) -> Result<Option<DecompositionType>> {
    let simples = enumerate_simple_subdimvectors(s, limits)?;
    let m = simples.len();
    let mut self_loops = Vec::with_capacity(m);
    for b in &simples {
        self_loops.push(1 - s.chi(b, b)?);
    }
    let mut arrows_between = vec![vec![0i64; m]; m];
    for i in 0..m {
        for j in 0..m {
            if i != j {
                arrows_between[i][j] = -s.chi(&simples[i], &simples[j])?;
            }
        }
    }
    struct Search<'a> {
        s: &'a QuiverSetting,
        simples: &'a [DimensionVector],
        self_loops: Vec<i64>,
        arrows_between: Vec<Vec<i64>>,
        prune: bool,
        counter: crate::limits::Counter,
        chosen: Vec<(usize, u64)>,
        remaining: Vec<u64>,
    }
    impl Search<'_> {
        /// Every vertex still to be filled lies in the support of a later
        /// simple that fits into the remainder.
        fn completable(&self, i: usize) -> bool {
            let fits: Vec<&DimensionVector> = self.simples[i..]
                .iter()
                .filter(|b| b.iter().zip(&self.remaining).all(|(b, r)| b <= r))
                .collect();
            self.remaining.iter().enumerate().all(|(w, &r)| r == 0 || fits.iter().any(|b| b[w] > 0))
        }

        fn run(&mut self, i: usize) -> Result<Option<DecompositionType>> {
            self.counter.tick()?;
            if self.remaining.iter().all(|&r| r == 0) {
                let d = DecompositionType::new(
                    self.chosen.iter().map(|&(j, mult)| Summand { beta: self.simples[j].clone(), mult }).collect(),
                );
                let class = classify_point(self.s, None, &d)?;
                return Ok((class.kind == PointKind::FlatNonAzumaya).then_some(d));
            }
            if i == self.simples.len() || !self.completable(i) {
                return Ok(None);
            }
            let beta = &self.simples[i];
            let fits = |r: &[u64]| {
                beta.iter().zip(r).filter(|(b, _)| **b > 0).map(|(b, r)| r / b).min().unwrap_or(0)
            };
            let max_mult = fits(&self.remaining);
            let compatible = !self.prune
                || self
                    .chosen
                    .iter()
                    .all(|&(j, _)| self.arrows_between[i][j] <= 1 && self.arrows_between[j][i] <= 1);
            if compatible {
                for mult in (1..=max_mult).rev() {
                    if self.prune && !loops_allowed(self.self_loops[i], mult) {
                        continue;
                    }
                    for (r, b) in self.remaining.iter_mut().zip(beta.iter()) {
                        *r -= mult * b;
                    }
                    self.chosen.push((i, mult));
                    let found = self.run(i + 1)?;
                    self.chosen.pop();
                    for (r, b) in self.remaining.iter_mut().zip(beta.iter()) {
                        *r += mult * b;
                    }
                    if found.is_some() {
                        return Ok(found);
                    }
                }
            }
            self.run(i + 1)
        }
    }
    let mut search = Search {
        s,
        simples: &simples,
        self_loops,
        arrows_between,
        prune,
        counter: limits.counter("flat decomposition search"),
        chosen: Vec::new(),
        remaining: s.dim.0.clone(),
    };
    search.run(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setting(dims: &[u64], arrows: &[(usize, usize)]) -> QuiverSetting {
        QuiverSetting::from_parts(dims, arrows).unwrap()
    }

    fn flat(dims: &[u64], arrows: &[(usize, usize)]) -> FlatVerdict {
        is_flat_local_setting(&setting(dims, arrows)).unwrap()
    }

    #[test]
    fn cycles_with_unit_dimension_are_flat() {
        let v = flat(&[1; 5], &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        assert!(v.flat);
        assert_eq!(v.families, vec![Some(FlatFamily::Cycle)]);
        assert!(!flat(&[1, 2], &[(0, 1), (1, 0)]).flat);
    }

    #[test]
    fn connected_sum_of_cycles_is_flat() {
        let v = flat(&[1, 1, 1, 1], &[(0, 1), (1, 0), (0, 2), (2, 3), (3, 0)]);
        assert!(v.flat);
        assert_eq!(v.families, vec![Some(FlatFamily::Cycle); 2]);
    }

    #[test]
    fn loops_at_dimension_one_vertices_are_flat_pieces() {
        let v = flat(&[1, 1], &[(0, 1), (1, 0), (0, 0), (0, 0), (0, 0)]);
        assert!(v.flat);
        assert_eq!(v.families.len(), 4);
    }

    #[test]
    fn doubled_families() {
        assert_eq!(flat(&[2], &[(0, 0), (0, 0)]).families, vec![Some(FlatFamily::DoubledCycleSum)]);
        assert!(!flat(&[2], &[(0, 0), (0, 0), (0, 0)]).flat);
        assert!(!flat(&[3], &[(0, 0), (0, 0)]).flat);
        let v = flat(&[2, 2, 2], &[(0, 1), (1, 0), (0, 2), (2, 0)]);
        assert_eq!(v.families, vec![Some(FlatFamily::DoubledCycleSum)]);
    }

    #[test]
    fn one_to_d_families() {
        // 0 = centre of dimension 1, 1 = d, cycle 1 -> 2 -> 3 -> 1
        let arrows = [(0, 1), (1, 0), (1, 2), (2, 3), (3, 1)];
        assert_eq!(flat(&[1, 3, 3, 3], &arrows).families, vec![Some(FlatFamily::ConstantCycle)]);
        assert_eq!(flat(&[1, 3, 2, 2], &arrows).families, vec![Some(FlatFamily::LoweredCycle)]);
        assert!(!flat(&[1, 3, 2, 3], &arrows).flat);
        // the cycle may be a loop
        assert_eq!(flat(&[1, 2], &[(0, 1), (1, 0), (1, 1)]).families, vec![Some(FlatFamily::ConstantCycle)]);
    }

    #[test]
    fn double_path_family() {
        // u1 -> u2 -> l1, l1 -> c -> u1, l1 -> l2 -> u1
        let arrows = [(0, 1), (1, 2), (2, 3), (3, 0), (2, 4), (4, 0)];
        assert_eq!(flat(&[3, 3, 3, 1, 2], &arrows).families, vec![Some(FlatFamily::DoublePath)]);
        assert!(!flat(&[3, 3, 3, 1, 3], &arrows).flat);
        assert!(!flat(&[3, 2, 3, 1, 2], &arrows).flat);
    }

    #[test]
    fn flat_families_admit_simple_representations() {
        let cases: Vec<(Vec<u64>, Vec<(usize, usize)>)> = vec![
            (vec![3, 3, 3, 1, 2], vec![(0, 1), (1, 2), (2, 3), (3, 0), (2, 4), (4, 0)]),
            (vec![1, 3, 3, 3], vec![(0, 1), (1, 0), (1, 2), (2, 3), (3, 1)]),
            (vec![1, 3, 2, 2], vec![(0, 1), (1, 0), (1, 2), (2, 3), (3, 1)]),
            (vec![2, 2, 2], vec![(0, 1), (1, 0), (0, 2), (2, 0)]),
        ];
        for (dims, arrows) in cases {
            assert!(has_simple_reps(&setting(&dims, &arrows)).unwrap(), "{dims:?}");
        }
    }

    #[test]
    fn classify_points() {
        let a1 = setting(&[1, 1], &[(0, 1), (1, 0)]);
        let azumaya = classify_point(&a1, None, &DecompositionType::trivial(&a1)).unwrap();
        assert_eq!(azumaya.kind, PointKind::Azumaya);
        assert_eq!(azumaya.fiber_dim, Some(1));
        let finest = classify_point(&a1, Some(&[1, 1]), &DecompositionType::finest(&a1)).unwrap();
        assert_eq!(finest.kind, PointKind::FlatNonAzumaya);
        assert_eq!(finest.fiber_dim, Some(1));
        assert_eq!(finest.local.n, 2);
        let json = serde_json::to_value(finest.to_json()).unwrap();
        assert_eq!(json["kind"], "FlatNonAzumaya");
        assert_eq!(json["family"], "cycle");
        assert_eq!(json["fiber_dim"], 1);
    }

    #[test]
    fn non_flat_point() {
        // single vertex with three loops, α = 2: the point 2·ε is non-flat
        let s = setting(&[2], &[(0, 0), (0, 0), (0, 0)]);
        let d = DecompositionType::new(vec![Summand { beta: DimensionVector(vec![1]), mult: 2 }]);
        let class = classify_point(&s, None, &d).unwrap();
        assert_eq!(class.kind, PointKind::NonFlat);
        assert_eq!(class.fiber_dim, None);
        assert_eq!(serde_json::to_value(class.to_json()).unwrap()["family"], serde_json::Value::Null);
    }

    #[test]
    fn singular_shape_requires_reduced() {
        let a2 = setting(&[1, 1, 1], &[(0, 1), (1, 2), (2, 0)]);
        assert_eq!(singular_shape_check(&a2, &Limits::default()), Err(Error::NotReduced));
    }

    #[test]
    fn double_arrows_are_a_single_blob() {
        let s = setting(&[2, 2], &[(0, 1), (0, 1), (1, 0), (1, 0)]);
        assert_eq!(singular_shape_check(&s, &Limits::default()).unwrap(), None);
        assert_eq!(flat_non_azumaya_decomposition(&s, &Limits::default()).unwrap(), None);
    }

    #[test]
    fn two_blobs_joined_by_a_cycle() {
        // blobs {0,1} and {2,3}, each a ⇉/⇇ pair of dimension-1 vertices, joined by 0 -> 2 and 3 -> 1
        let arrows = [(0, 1), (0, 1), (1, 0), (1, 0), (2, 3), (2, 3), (3, 2), (3, 2), (0, 2), (3, 1)];
        let s = setting(&[1, 1, 1, 1], &arrows);
        assert!(is_reduced(&s).unwrap());
        let shape = singular_shape_check(&s, &Limits::default()).unwrap().unwrap();
        assert_eq!(shape.blobs, vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(shape.connecting, vec![8, 9]);
        assert_eq!(shape.loops, vec![3, 3]);
        let local = local_quiver(&s, &shape.decomposition(&s), None).unwrap();
        assert!(is_flat_local_setting(&local.setting).unwrap().flat);
        assert!(flat_non_azumaya_decomposition(&s, &Limits::default()).unwrap().is_some());
    }
}
