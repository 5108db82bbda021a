//! The fan of the toric fiber component and its verification.

use std::collections::{BTreeMap, BTreeSet};

use rustc_hash::{FxHashMap, FxHashSet};

use serde::{Deserialize, Serialize};

use super::linalg::determinant_and_inverse;
use super::{minimal_connecting_subquivers, ExtendedSetting};
use crate::error::{Error, Result};
use crate::limits::Limits;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ray {
    /// Arrow of the extended quiver whose divisor this ray spans; `None` for
    /// hand-built fans.
    pub arrow: Option<usize>,
    pub vector: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fan {
    pub rank: usize,
    /// Arrows outside the spanning choice; coordinate `i` of every ray is the
    /// coefficient of `free_arrows[i]`.
    pub free_arrows: Vec<usize>,
    /// `(w, a_w)` for every vertex other than the source.
    pub spanning: Vec<(usize, usize)>,
    pub rays: Vec<Ray>,
    /// Ray indices of each maximal cone, ascending.
    pub max_cones: Vec<Vec<usize>>,
    /// `d[i]` = number of cones of dimension `i`.
    pub d: Vec<u64>,
    verified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanJson {
    pub rank: usize,
    pub rays: Vec<Ray>,
    pub max_cones: Vec<Vec<usize>>,
    pub d: Vec<u64>,
}

impl Fan {
    /// A fan given by its rays and maximal cones; the cone counts come from
    /// enumerating faces.
    pub fn from_parts(rank: usize, rays: Vec<Vec<i64>>, max_cones: Vec<Vec<usize>>) -> Result<Fan> {
        if let Some(r) = rays.iter().find(|r| r.len() != rank) {
            return Err(Error::VerificationFailure(format!("ray of length {} in rank {rank}", r.len())));
        }
        let mut cones = Vec::with_capacity(max_cones.len());
        for mut c in max_cones {
            c.sort_unstable();
            c.dedup();
            if c.iter().any(|&i| i >= rays.len()) {
                return Err(Error::VerificationFailure(format!("cone {c:?} names a missing ray")));
            }
            cones.push(c);
        }
        let d = face_counts(rank, &cones, &Limits::default())?;
        Ok(Fan {
            rank,
            free_arrows: Vec::new(),
            spanning: Vec::new(),
            rays: rays.into_iter().map(|vector| Ray { arrow: None, vector }).collect(),
            max_cones: cones,
            d,
            verified: false,
        })
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    /// Index of the ray of an arrow, if it has one.
    pub fn ray_of_arrow(&self, arrow: usize) -> Option<usize> {
        self.rays.iter().position(|r| r.arrow == Some(arrow))
    }

    /// Every cone of the fan (all faces of maximal cones) as sorted ray sets.
    pub fn cones(&self, limits: &Limits) -> Result<BTreeSet<Vec<usize>>> {
        all_faces(&self.max_cones, limits)
    }

    pub fn to_json(&self) -> FanJson {
        FanJson { rank: self.rank, rays: self.rays.clone(), max_cones: self.max_cones.clone(), d: self.d.clone() }
    }
}

/// Distinct faces as ray bitmasks, walked down one dimension at a time from
/// the maximal cones so that shared faces are visited once.
fn face_masks(max_cones: &[Vec<usize>], limits: &Limits) -> Result<Vec<u128>> {
    let mut counter = limits.counter("fan faces");
    let mut level: FxHashSet<u128> = FxHashSet::default();
    for cone in max_cones {
        if level.insert(cone_mask(cone)?) {
            counter.tick()?;
        }
    }
    let mut all = Vec::new();
    while !level.is_empty() {
        let mut next = FxHashSet::default();
        for &face in &level {
            let mut rest = face;
            while rest != 0 {
                let bit = rest & rest.wrapping_neg();
                rest ^= bit;
                if next.insert(face ^ bit) {
                    counter.tick()?;
                }
            }
        }
        all.extend(level.drain());
        level = next;
    }
    Ok(all)
}

fn cone_mask(cone: &[usize]) -> Result<u128> {
    if cone.iter().any(|&r| r >= 128) {
        return Err(Error::BudgetExceeded { what: "fan faces (ray count)", limit: 128 });
    }
    Ok(cone.iter().fold(0u128, |m, &r| m | 1 << r))
}

fn mask_rays(mask: u128) -> Vec<usize> {
    (0..128).filter(|&r| mask >> r & 1 == 1).collect()
}

fn all_faces(max_cones: &[Vec<usize>], limits: &Limits) -> Result<BTreeSet<Vec<usize>>> {
    Ok(face_masks(max_cones, limits)?
        .into_iter()
        .map(mask_rays)
        .collect())
}

fn face_counts(rank: usize, max_cones: &[Vec<usize>], limits: &Limits) -> Result<Vec<u64>> {
    if let Some(c) = max_cones.iter().find(|c| c.len() > rank) {
        return Err(Error::VerificationFailure(format!("cone {c:?} has more than {rank} rays")));
    }
    let mut d = vec![0u64; rank + 1];
    for face in face_masks(max_cones, limits)? {
        d[face.count_ones() as usize] += 1;
    }
    Ok(d)
}

/// Cone counts `d_i` predicted from in-degrees: the coefficients of
/// `Π_w ((1 + x)^{k_w} − x^{k_w})`.
pub fn predicted_face_counts(ext: &ExtendedSetting) -> Vec<u64> {
    let mut poly = vec![1u64];
    for w in 1..ext.vertex_count() {
        let k = ext.quiver.in_degree(w);
        // coefficient of x^j for j < k is C(k, j)
        let mut factor = vec![1u64; k];
        for j in 1..k {
            factor[j] = factor[j - 1] * (k - j + 1) as u64 / j as u64;
        }
        let mut next = vec![0u64; poly.len() + factor.len() - 1];
        for (i, &p) in poly.iter().enumerate() {
            for (j, &f) in factor.iter().enumerate() {
                next[i + j] += p * f;
            }
        }
        poly = next;
    }
    poly
}

/// The fan whose cones are indexed by connecting subquivers: the cone of `Q′`
/// is spanned by the rays of the arrows missing from `Q′`.
pub fn build_fan(ext: &ExtendedSetting, limits: &Limits) -> Result<Fan> {
    let q = &ext.quiver;
    let mut spanning = Vec::new();
    let mut parent = vec![usize::MAX; q.vertex_count()];
    for w in 1..q.vertex_count() {
        let a = q
            .in_arrows(w)
            .find(|&a| q.arrow(a).tail == ExtendedSetting::SOURCE)
            .or_else(|| q.in_arrows(w).next())
            .ok_or_else(|| Error::InvalidExtension(format!("vertex {} has no incoming arrow", q.name(w))))?;
        spanning.push((w, a));
        parent[w] = q.arrow(a).tail;
    }
    let span_set: BTreeSet<usize> = spanning.iter().map(|&(_, a)| a).collect();
    let free_arrows: Vec<usize> = (0..q.arrow_count()).filter(|a| !span_set.contains(a)).collect();
    let rank = free_arrows.len();
    if rank != ext.lattice_rank() {
        return Err(Error::InvalidExtension("spanning choice does not have one arrow per vertex".into()));
    }

    // ζ_w = vertices whose spanning path from the source passes through w
    let in_subtree = |u: usize, w: usize| {
        let mut at = u;
        for _ in 0..q.vertex_count() {
            if at == w {
                return true;
            }
            if at == ExtendedSetting::SOURCE || at == usize::MAX {
                return false;
            }
            at = parent[at];
        }
        false
    };

    let mut rays = Vec::new();
    for a in 0..q.arrow_count() {
        let head = q.arrow(a).head;
        if q.in_degree(head) == 1 {
            continue;
        }
        let vector = if span_set.contains(&a) {
            free_arrows
                .iter()
                .map(|&b| {
                    let arrow = q.arrow(b);
                    i64::from(in_subtree(arrow.tail, head)) - i64::from(in_subtree(arrow.head, head))
                })
                .collect()
        } else {
            free_arrows.iter().map(|&b| i64::from(b == a)).collect()
        };
        rays.push(Ray { arrow: Some(a), vector });
    }

    let ray_index: BTreeMap<usize, usize> =
        rays.iter().enumerate().map(|(i, r)| (r.arrow.expect("built rays carry arrows"), i)).collect();
    let mut max_cones = Vec::new();
    for mask in minimal_connecting_subquivers(ext, limits)? {
        let cone: Vec<usize> = (0..q.arrow_count())
            .filter(|a| mask >> a & 1 == 0)
            .map(|a| {
                ray_index.get(&a).copied().ok_or_else(|| {
                    Error::InvalidExtension(format!("arrow {a} is missing from a connecting subquiver but has no ray"))
                })
            })
            .collect::<Result<_>>()?;
        max_cones.push(cone);
    }
    max_cones.sort();
    let d = face_counts(rank, &max_cones, limits)?;
    Ok(Fan { rank, free_arrows, spanning, rays, max_cones, d, verified: false })
}

fn fail(msg: String) -> Error {
    Error::VerificationFailure(msg)
}

fn cone_matrix(fan: &Fan, cone: &[usize]) -> Vec<Vec<i64>> {
    // rows are rays; the determinant is unchanged by transposition
    cone.iter().map(|&i| fan.rays[i].vector.clone()).collect()
}

/// Points used for the covering test, deterministic and far from any
/// low-height hyperplane.
fn probe_points(rank: usize) -> Vec<Vec<i64>> {
    let mut state: u64 = 0x9e37_79b9_7f4a_7c15;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state % 2_000_001) as i64 - 1_000_000
    };
    (0..3).map(|_| (0..rank).map(|_| next()).collect()).collect()
}

/// Coordinates of `y` in the basis of a cone's rays, given the inverse of
/// the matrix whose rows are those rays.
fn coordinates(inverse: &[Vec<i64>], y: &[i64]) -> Result<Vec<i128>> {
    (0..inverse.len())
        .map(|j| {
            y.iter().zip(inverse).try_fold(0i128, |acc, (&yk, row)| {
                (yk as i128).checked_mul(row[j] as i128).and_then(|t| acc.checked_add(t)).ok_or(Error::Overflow("cone coordinates"))
            })
        })
        .collect()
}

/// Whether `y` lies in the closed cone.
fn inside_closed(inverse: &[Vec<i64>], y: &[i64]) -> Result<bool> {
    Ok(coordinates(inverse, y)?.iter().all(|&c| c >= 0))
}

/// `Some(true)` if `y` is strictly inside the cone, `Some(false)` if outside
/// and `None` if on the boundary.
fn strictly_inside(inverse: &[Vec<i64>], y: &[i64]) -> Result<Option<bool>> {
    let c = coordinates(inverse, y)?;
    Ok(if c.iter().any(|&x| x < 0) {
        Some(false)
    } else if c.contains(&0) {
        None
    } else {
        Some(true)
    })
}

/// Looks for a maximal cone whose barycentre lies in another maximal cone.
fn find_overlap(fan: &Fan, inverses: &[Vec<Vec<i64>>]) -> Result<Option<String>> {
    let r = fan.rank;
    for (a, cone) in fan.max_cones.iter().enumerate() {
        let centre: Vec<i64> = (0..r).map(|k| cone.iter().map(|&i| fan.rays[i].vector[k]).sum()).collect();
        for (b, other) in fan.max_cones.iter().enumerate() {
            if a != b && inside_closed(&inverses[b], &centre)? {
                return Ok(Some(format!("maximal cones {a} {cone:?} and {b} {other:?} overlap in their interiors")));
            }
        }
    }
    Ok(None)
}

/// Checks that the fan is smooth and complete and that its maximal cones meet
/// along common faces. Returns the fan marked as verified.
///
/// Checks, in order: every maximal cone is spanned by a lattice basis; every
/// facet lies in exactly two maximal cones, on opposite sides; the facet
/// graph is connected; a generic point lies in exactly one maximal cone; the
/// cone counts satisfy `Σ (−1)^i d_i = (−1)^r`.
///
/// With facets paired on opposite sides the number of maximal cones around a
/// generic point does not change across any wall, so one generic point of
/// degree 1 shows that the cones cover space once. A failed facet check is
/// reported as an overlap when some barycentre lies in another cone.
pub fn verify_fan(mut fan: Fan) -> Result<Fan> {
    let r = fan.rank;
    if fan.max_cones.is_empty() {
        return Err(fail("fan has no maximal cones".into()));
    }
    let mut dets = Vec::with_capacity(fan.max_cones.len());
    let mut inverses = Vec::with_capacity(fan.max_cones.len());
    for (i, cone) in fan.max_cones.iter().enumerate() {
        if cone.len() != r {
            return Err(fail(format!("maximal cone {i} has {} rays, expected {r}", cone.len())));
        }
        let (det, inverse) = determinant_and_inverse(&cone_matrix(&fan, cone))?;
        let Some(inverse) = inverse else {
            return Err(fail(format!("maximal cone {i} {cone:?} has determinant {det}")));
        };
        dets.push(det);
        inverses.push(inverse);
    }

    // Moving the dropped ray to the last row takes r − 1 − j swaps, which
    // gives the side of the facet without another determinant.
    let mut facets: FxHashMap<u128, Vec<(usize, bool)>> = FxHashMap::default();
    for (i, cone) in fan.max_cones.iter().enumerate() {
        let mask = cone_mask(cone)?;
        for (drop, &ray) in cone.iter().enumerate() {
            let side = (dets[i] > 0) == (r - 1 - drop).is_multiple_of(2);
            facets.entry(mask ^ 1 << ray).or_default().push((i, side));
        }
    }
    let mut adjacency = vec![Vec::new(); fan.max_cones.len()];
    let mut bad: Vec<u128> = Vec::new();
    for (&facet, owners) in &facets {
        match owners.as_slice() {
            [(a, sa), (b, sb)] if sa != sb => {
                adjacency[*a].push(*b);
                adjacency[*b].push(*a);
            }
            _ => bad.push(facet),
        }
    }
    if let Some(&facet) = bad.iter().min() {
        let owners = &facets[&facet];
        let facet = mask_rays(facet);
        let problem = match owners.as_slice() {
            [(a, _), (b, _)] => format!(
                "maximal cones {a} {:?} and {b} {:?} lie on the same side of facet {facet:?}",
                fan.max_cones[*a], fan.max_cones[*b]
            ),
            [(a, _)] => format!("facet {facet:?} of maximal cone {a} is not shared"),
            more => {
                let who: Vec<usize> = more.iter().map(|&(c, _)| c).collect();
                format!("facet {facet:?} is shared by maximal cones {who:?}")
            }
        };
        return Err(fail(find_overlap(&fan, &inverses)?.unwrap_or(problem)));
    }
    let mut seen = vec![false; fan.max_cones.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(c) = stack.pop() {
        for &o in &adjacency[c] {
            if !seen[o] {
                seen[o] = true;
                stack.push(o);
            }
        }
    }
    if let Some(c) = seen.iter().position(|s| !s) {
        return Err(fail(format!("maximal cone {c} is not connected to cone 0 through facets")));
    }

    let mut probed = 0;
    for y in probe_points(r) {
        let mut containing = Vec::new();
        let mut ambiguous = false;
        for (i, inverse) in inverses.iter().enumerate() {
            match strictly_inside(inverse, &y)? {
                Some(true) => containing.push(i),
                Some(false) => {}
                None => ambiguous = true,
            }
        }
        if ambiguous {
            continue;
        }
        match containing.as_slice() {
            [_] => probed += 1,
            [] => return Err(fail(format!("point {y:?} is not covered by any maximal cone"))),
            [a, b, ..] => {
                return Err(fail(format!(
                    "maximal cones {a} {:?} and {b} {:?} overlap in their interiors",
                    fan.max_cones[*a], fan.max_cones[*b]
                )))
            }
        }
    }
    if probed == 0 && r > 0 {
        return Err(fail("every probe point lies on a wall".into()));
    }

    let euler: i128 = fan.d.iter().enumerate().map(|(i, &d)| if i % 2 == 0 { d as i128 } else { -(d as i128) }).sum();
    let expected = if r.is_multiple_of(2) { 1 } else { -1 };
    if euler != expected {
        return Err(fail(format!("alternating cone count {euler}, expected {expected}")));
    }
    fan.verified = true;
    Ok(fan)
}

fn binomial(n: usize, k: usize) -> i128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1i128, |acc, i| acc * (n - i) as i128 / (i + 1) as i128)
}

/// Even Betti numbers `b_0, b_2, …, b_{2r}` of the smooth complete toric
/// variety of a verified fan. Odd Betti numbers vanish.
pub fn betti_numbers(fan: &Fan) -> Result<Vec<u64>> {
    if !fan.verified {
        return Err(Error::UnverifiedFan);
    }
    let r = fan.rank;
    let mut betti = Vec::with_capacity(r + 1);
    for k in 0..=r {
        let mut b = 0i128;
        for i in k..=r {
            let term = binomial(i, k) * fan.d[r - i] as i128;
            b += if (i - k) % 2 == 0 { term } else { -term };
        }
        if b < 0 {
            return Err(fail(format!("negative Betti number b_{} = {b}", 2 * k)));
        }
        betti.push(b as u64);
    }
    let total: u64 = betti.iter().sum();
    if betti[0] != 1 || betti.iter().ne(betti.iter().rev()) || total != fan.max_cones.len() as u64 {
        return Err(fail(format!("Betti numbers {betti:?} fail Poincaré duality or the cone count")));
    }
    Ok(betti)
}

/// All Betti numbers `b_0, b_1, …, b_{2r}` with the odd ones as zeros.
pub fn betti_full(even: &[u64]) -> Vec<u64> {
    let mut out = Vec::with_capacity(even.len() * 2);
    for (i, &b) in even.iter().enumerate() {
        if i > 0 {
            out.push(0);
        }
        out.push(b);
    }
    out
}
