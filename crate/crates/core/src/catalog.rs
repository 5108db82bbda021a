//! Exhaustive generators for small quiver settings.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quiver::{Arrow, DimensionVector, Quiver, QuiverSetting};
use crate::rep_theory::is_reduced;

/// Arrow-count matrix `m[t][h]` of a quiver.
pub type CountMatrix = Vec<Vec<usize>>;

/// Builds a setting from an arrow-count matrix; arrows are listed row by row.
pub fn from_counts(dims: &[u64], counts: &CountMatrix) -> QuiverSetting {
    let n = dims.len();
    let mut arrows = Vec::new();
    for (t, row) in counts.iter().enumerate() {
        for (h, &c) in row.iter().enumerate() {
            arrows.extend(std::iter::repeat_n(Arrow::new(t, h), c));
        }
    }
    let names = (0..n).map(|i| format!("v{i}")).collect();
    let quiver = Quiver::new(names, arrows).expect("count matrix indices are in range");
    QuiverSetting::new(quiver, DimensionVector(dims.to_vec())).expect("dimension vector matches")
}

/// All `n × n` count matrices with at most `max_arrows` arrows in total.
pub fn count_matrices(n: usize, max_arrows: usize) -> Vec<CountMatrix> {
    let slots = n * n;
    let mut out = Vec::new();
    let mut flat = vec![0usize; slots];
    fn rec(i: usize, left: usize, flat: &mut Vec<usize>, n: usize, out: &mut Vec<CountMatrix>) {
        if i == flat.len() {
            out.push(flat.chunks(n.max(1)).map(<[usize]>::to_vec).collect());
            return;
        }
        for c in 0..=left {
            flat[i] = c;
            rec(i + 1, left - c, flat, n, out);
        }
        flat[i] = 0;
    }
    rec(0, max_arrows, &mut flat, n, &mut out);
    out
}

/// Every dimension vector of length `n` with entries in `lo..=hi`, first entry
/// varying fastest.
pub fn dimension_vectors(n: usize, lo: u64, hi: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut d = vec![lo; n];
    loop {
        out.push(d.clone());
        let mut i = 0;
        while i < n && d[i] == hi {
            d[i] = lo;
            i += 1;
        }
        if i == n {
            return out;
        }
        d[i] += 1;
    }
}

/// Every labelled setting with `1..=max_vertices` vertices, at most
/// `max_arrows` arrows and dimensions in `1..=max_dim`, passed to `visit` in
/// parallel. Errors from `visit` stop the sweep.
pub fn for_each_setting<F>(max_vertices: usize, max_arrows: usize, max_dim: u64, visit: F) -> Result<u64>
where
    F: Fn(&QuiverSetting) -> Result<()> + Sync,
{
    let mut total = 0;
    for n in 1..=max_vertices {
        let dims = dimension_vectors(n, 1, max_dim);
        let matrices = count_matrices(n, max_arrows);
        matrices.par_iter().try_for_each(|m| dims.iter().try_for_each(|d| visit(&from_counts(d, m))))?;
        total += (matrices.len() * dims.len()) as u64;
    }
    Ok(total)
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else { return out };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).expect("successor exists");
        p.swap(i - 1, j);
        p[i..].reverse();
    }
}

/// Canonical form of a setting under vertex relabelling: the smallest
/// `(dims, counts)` over all relabellings. Exhaustive, so only for small
/// vertex counts.
pub fn canonical_form(s: &QuiverSetting) -> (Vec<u64>, CountMatrix) {
    let n = s.vertex_count();
    let counts = s.quiver.count_matrix();
    permutations(n)
        .into_iter()
        .map(|p| {
            // new vertex i is old vertex p[i]
            let dims = p.iter().map(|&v| s.dim[v]).collect();
            let m = p.iter().map(|&t| p.iter().map(|&h| counts[t][h]).collect()).collect();
            (dims, m)
        })
        .min()
        .unwrap_or_default()
}

/// Representatives of the isomorphism classes of reduced settings with
/// `2..=max_vertices` vertices, dimensions in `1..=max_dim` and at most
/// `max_arrows` arrows, in ascending canonical form.
pub fn reduced_settings(max_vertices: usize, max_dim: u64, max_arrows: usize) -> Result<Vec<QuiverSetting>> {
    let mut found = BTreeSet::new();
    for n in 2..=max_vertices {
        // dimension vectors up to relabelling: non-increasing
        let dims: Vec<Vec<u64>> =
            dimension_vectors(n, 1, max_dim).into_iter().filter(|d| d.windows(2).all(|w| w[0] >= w[1])).collect();
        let parts: Vec<BTreeSet<(Vec<u64>, CountMatrix)>> = dims
            .par_iter()
            .map(|d| {
                let mut local = BTreeSet::new();
                let mut counts = vec![vec![0usize; n]; n];
                reduced_columns(d, 0, max_arrows, &mut counts, &mut local)?;
                Ok(local)
            })
            .collect::<Result<_>>()?;
        for p in parts {
            found.extend(p);
        }
    }
    Ok(found.into_iter().map(|(d, m)| from_counts(&d, &m)).collect())
}

/// Chooses the incoming arrows of vertex `v` and recurses. A column is kept
/// only if it meets the incoming half of the reducedness bounds.
fn reduced_columns(
    dims: &[u64],
    v: usize,
    left: usize,
    counts: &mut CountMatrix,
    out: &mut BTreeSet<(Vec<u64>, CountMatrix)>,
) -> Result<()> {
    let n = dims.len();
    if v == n {
        let s = from_counts(dims, counts);
        match is_reduced(&s) {
            Ok(true) => {
                out.insert(canonical_form(&s));
            }
            Ok(false) | Err(Error::NotStronglyConnected) => {}
            Err(e) => return Err(e),
        }
        return Ok(());
    }
    // every remaining vertex needs an arrow from another vertex
    let reserve = n - v - 1;
    if left < reserve + 1 {
        return Ok(());
    }
    let mut column = vec![0usize; n];
    column_rec(dims, v, 0, left - reserve, &mut column, &mut |col, used| {
        if !incoming_ok(dims, v, col) {
            return Ok(());
        }
        for (u, &c) in col.iter().enumerate() {
            counts[u][v] = c;
        }
        let r = reduced_columns(dims, v + 1, left - used, counts, out);
        for row in counts.iter_mut() {
            row[v] = 0;
        }
        r
    })
}

fn column_rec(
    dims: &[u64],
    v: usize,
    u: usize,
    left: usize,
    column: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize], usize) -> Result<()>,
) -> Result<()> {
    if u == column.len() {
        let used = column.iter().sum();
        return visit(column, used);
    }
    // loops at dimension-1 vertices are never reduced
    let max = if u == v && dims[v] == 1 { 0 } else { left };
    for c in 0..=max {
        column[u] = c;
        column_rec(dims, v, u + 1, left - c, column, visit)?;
    }
    column[u] = 0;
    Ok(())
}

fn incoming_ok(dims: &[u64], v: usize, column: &[usize]) -> bool {
    let loops = column[v];
    let other: u64 = column.iter().enumerate().filter(|&(u, _)| u != v).map(|(u, &c)| c as u64 * dims[u]).sum();
    if other == 0 {
        return false;
    }
    match loops {
        0 => other > dims[v],
        1 => other >= 2,
        _ => true,
    }
}

/// A connected sum of oriented cycles: the setting (all dimensions 1) and the
/// number of vertices of each cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleSum {
    pub setting: QuiverSetting,
    pub cycle_lengths: Vec<usize>,
}

/// Every connected sum of `1..=max_cycles` oriented cycles with lengths in
/// `1..=max_length` (length 1 is a loop), each new cycle glued at one
/// existing vertex. Labelled, so isomorphic sums may repeat.
pub fn cycle_sums(max_cycles: usize, max_length: usize) -> Vec<CycleSum> {
    bounded_cycle_sums(max_cycles, max_length, usize::MAX)
}

fn bounded_cycle_sums(max_cycles: usize, max_length: usize, max_vertices: usize) -> Vec<CycleSum> {
    let mut out = Vec::new();
    let mut stack: Vec<(usize, Vec<(usize, usize)>, Vec<usize>)> = Vec::new();
    for len in 1..=max_length.min(max_vertices) {
        let arrows = (0..len).map(|i| (i, (i + 1) % len)).collect();
        stack.push((len, arrows, vec![len]));
    }
    while let Some((n, arrows, lengths)) = stack.pop() {
        let setting = QuiverSetting::from_parts(&vec![1; n], &arrows).expect("valid cycle sum");
        out.push(CycleSum { setting, cycle_lengths: lengths.clone() });
        if lengths.len() == max_cycles {
            continue;
        }
        for at in 0..n {
            for len in 1..=max_length.min(max_vertices.saturating_sub(n - 1)) {
                let mut more = arrows.clone();
                let path: Vec<usize> = std::iter::once(at).chain(n..n + len - 1).chain(std::iter::once(at)).collect();
                more.extend(path.windows(2).map(|w| (w[0], w[1])));
                let mut l = lengths.clone();
                l.push(len);
                stack.push((n + len - 1, more, l));
            }
        }
    }
    out.sort_by_key(|c| (c.setting.vertex_count(), c.cycle_lengths.clone()));
    out
}

/// Cycle sums of at most `max_cycles` cycles on at most `max_vertices`
/// vertices, one per isomorphism class.
pub fn cycle_sums_up_to_iso(max_cycles: usize, max_vertices: usize) -> Vec<CycleSum> {
    let mut seen = BTreeSet::new();
    bounded_cycle_sums(max_cycles, max_vertices, max_vertices)
        .into_iter()
        .filter(|c| seen.insert(canonical_form(&c.setting)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_small_catalogs() {
        // multisets of at most 2 arrows over 4 slots
        assert_eq!(count_matrices(2, 2).len(), 15);
        assert_eq!(dimension_vectors(3, 1, 2).len(), 8);
        assert_eq!(permutations(4).len(), 24);
    }

    #[test]
    fn canonical_form_identifies_relabellings() {
        let a = QuiverSetting::from_parts(&[1, 2], &[(0, 1), (1, 0), (1, 0)]).unwrap();
        let b = QuiverSetting::from_parts(&[2, 1], &[(1, 0), (0, 1), (0, 1)]).unwrap();
        assert_eq!(canonical_form(&a), canonical_form(&b));
    }

    #[test]
    fn reduced_catalog_contains_the_basic_example() {
        let all = reduced_settings(2, 2, 4).unwrap();
        let two_by_two = QuiverSetting::from_parts(&[2, 2], &[(0, 1), (0, 1), (1, 0), (1, 0)]).unwrap();
        assert!(all.iter().any(|s| canonical_form(s) == canonical_form(&two_by_two)));
        assert!(all.iter().all(|s| is_reduced(s).unwrap()));
    }

    #[test]
    fn cycle_sum_shapes() {
        let sums = cycle_sums_up_to_iso(2, 2);
        // loop, 2-cycle, two loops, 2-cycle with a loop
        assert_eq!(sums.len(), 4);
        let sums = cycle_sums_up_to_iso(3, 3);
        assert!(sums.iter().any(|c| c.cycle_lengths == vec![3]));
        assert!(sums.iter().all(|c| c.setting.vertex_count() <= 3));
        let labelled = cycle_sums(2, 2);
        assert!(labelled.iter().any(|c| c.cycle_lengths == vec![2, 2] && c.setting.vertex_count() == 3));
    }
}
