//! Quasiprimitive paths and cycles: walks that pass through each vertex `w`
//! at most `α(w)` times.

use std::collections::BTreeSet;

use super::QuiverSetting;
use crate::error::Result;
use crate::limits::{Counter, Limits};

/// Distinct quasiprimitive cycles through `v`, each given as the lexicographically
/// smallest rotation of its arrow sequence.
///
/// The vertex occurrences of a cycle `a_1 … a_k` are `t(a_1), …, t(a_k)`, so the
/// base vertex is counted once.
pub fn quasiprimitive_cycles_through(s: &QuiverSetting, v: usize, limits: &Limits) -> Result<Vec<Vec<usize>>> {
    let mut found = BTreeSet::new();
    if s.dim[v] == 0 {
        return Ok(Vec::new());
    }
    let mut visits = vec![0u64; s.vertex_count()];
    visits[v] = 1;
    let mut path = Vec::new();
    let mut counter = limits.counter("quasiprimitive cycle search");
    cycle_dfs(s, v, v, &mut visits, &mut path, &mut found, &mut counter)?;
    Ok(found.into_iter().collect())
}

fn cycle_dfs(
    s: &QuiverSetting,
    base: usize,
    at: usize,
    visits: &mut [u64],
    path: &mut Vec<usize>,
    found: &mut BTreeSet<Vec<usize>>,
    counter: &mut Counter,
) -> Result<()> {
    counter.tick()?;
    for (i, a) in s.quiver.arrows().iter().enumerate() {
        if a.tail != at {
            continue;
        }
        path.push(i);
        if a.head == base {
            found.insert(min_rotation(path));
        }
        if visits[a.head] < s.dim[a.head] {
            visits[a.head] += 1;
            cycle_dfs(s, base, a.head, visits, path, found, counter)?;
            visits[a.head] -= 1;
        }
        path.pop();
    }
    Ok(())
}

pub(crate) fn min_rotation(seq: &[usize]) -> Vec<usize> {
    (0..seq.len())
        .map(|r| seq[r..].iter().chain(&seq[..r]).copied().collect::<Vec<_>>())
        .min()
        .unwrap_or_default()
}

/// Number of quasiprimitive cycles through `v`, using the default node limit.
pub fn count_quasiprimitive_cycles_through(s: &QuiverSetting, v: usize) -> Result<u64> {
    count_quasiprimitive_cycles_through_with(s, v, &Limits::default())
}

pub fn count_quasiprimitive_cycles_through_with(s: &QuiverSetting, v: usize, limits: &Limits) -> Result<u64> {
    Ok(quasiprimitive_cycles_through(s, v, limits)?.len() as u64)
}

/// Number of quasiprimitive paths from `from` to `to` (`from != to`), counted
/// as arrow sequences. Every vertex occurrence, endpoints included, counts
/// against the budget `α`.
pub fn count_quasiprimitive_paths(s: &QuiverSetting, from: usize, to: usize, limits: &Limits) -> Result<u64> {
    assert_ne!(from, to, "paths between distinct vertices only");
    if s.dim[from] == 0 {
        return Ok(0);
    }
    let mut visits = vec![0u64; s.vertex_count()];
    visits[from] = 1;
    let mut counter = limits.counter("quasiprimitive path search");
    let mut total = 0;
    path_dfs(s, from, to, &mut visits, &mut total, &mut counter)?;
    Ok(total)
}

fn path_dfs(
    s: &QuiverSetting,
    at: usize,
    to: usize,
    visits: &mut [u64],
    total: &mut u64,
    counter: &mut Counter,
) -> Result<()> {
    counter.tick()?;
    for a in s.quiver.arrows() {
        if a.tail != at || visits[a.head] >= s.dim[a.head] {
            continue;
        }
        visits[a.head] += 1;
        if a.head == to {
            *total += 1;
        }
        path_dfs(s, a.head, to, visits, total, counter)?;
        visits[a.head] -= 1;
    }
    Ok(())
}
