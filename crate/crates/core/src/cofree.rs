//! The reduction step `R^c_I` and recognition of cofree settings.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::quiver::{
    count_quasiprimitive_cycles_through_with, count_quasiprimitive_paths, is_connected, is_strongly_connected,
    prime_components, reachable, Arrow, Quiver, QuiverSetting,
};
use crate::shapes::{single_cycle, two_cycles, TwoCycles};

/// Why `R^c_I` does not apply at a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NotApplicable {
    NoOutgoingArrow,
    MultipleOutgoingArrows,
    OutgoingLoop,
    TargetDimension(u64),
    TooManyCycles { dim: u64, cycles: u64 },
}

impl fmt::Display for NotApplicable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NotApplicable::NoOutgoingArrow => f.write_str("no outgoing arrow"),
            NotApplicable::MultipleOutgoingArrows => f.write_str("multiple outgoing arrows"),
            NotApplicable::OutgoingLoop => f.write_str("the outgoing arrow is a loop"),
            NotApplicable::TargetDimension(d) => write!(f, "target has dimension {d}, not 1"),
            NotApplicable::TooManyCycles { dim, cycles } => {
                write!(f, "dimension {dim} is below the {cycles} quasiprimitive cycles through the vertex")
            }
        }
    }
}

/// One application of `R^c_I`, recorded by vertex names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionStep {
    pub removed: String,
    pub target: String,
    /// Tails of the rerouted arrows, in arrow order.
    pub rerouted_from: Vec<String>,
}

/// Outcome of `R^c_I` at `v`: the reduced setting and the step, or the reason
/// it does not apply.
pub fn apply_rci(
    s: &QuiverSetting,
    v: usize,
    limits: &Limits,
) -> Result<std::result::Result<(QuiverSetting, ReductionStep), NotApplicable>> {
    let q = &s.quiver;
    let mut outs = q.out_arrows(v);
    let Some(a) = outs.next() else { return Ok(Err(NotApplicable::NoOutgoingArrow)) };
    if outs.next().is_some() {
        return Ok(Err(NotApplicable::MultipleOutgoingArrows));
    }
    let target = q.arrow(a).head;
    if target == v {
        return Ok(Err(NotApplicable::OutgoingLoop));
    }
    if s.dim[target] != 1 {
        return Ok(Err(NotApplicable::TargetDimension(s.dim[target])));
    }
    let cycles = count_quasiprimitive_cycles_through_with(s, v, limits)?;
    if s.dim[v] < cycles {
        return Ok(Err(NotApplicable::TooManyCycles { dim: s.dim[v], cycles }));
    }

    let shift = |w: usize| if w > v { w - 1 } else { w };
    let mut arrows = Vec::with_capacity(q.arrow_count() - 1);
    let mut rerouted_from = Vec::new();
    for (i, b) in q.arrows().iter().enumerate() {
        if i == a {
            continue;
        }
        if b.head == v {
            rerouted_from.push(q.name(b.tail).to_string());
            arrows.push(Arrow::new(shift(b.tail), shift(target)));
        } else {
            arrows.push(Arrow::new(shift(b.tail), shift(b.head)));
        }
    }
    let names = q.names().iter().enumerate().filter(|&(w, _)| w != v).map(|(_, n)| n.clone()).collect();
    let dim = s.dim.iter().enumerate().filter(|&(w, _)| w != v).map(|(_, &d)| d).collect();
    let reduced = QuiverSetting::new(Quiver::new(names, arrows)?, crate::quiver::DimensionVector(dim))?;
    let step = ReductionStep { removed: q.name(v).to_string(), target: q.name(target).to_string(), rerouted_from };
    Ok(Ok((reduced, step)))
}

/// Applies `R^c_I` at the first applicable vertex until none applies.
pub fn reduce_fully(s: &QuiverSetting, limits: &Limits) -> Result<(QuiverSetting, Vec<ReductionStep>)> {
    let mut current = s.clone();
    let mut trace = Vec::new();
    'outer: loop {
        for v in current.quiver.vertices() {
            if let Ok((next, step)) = apply_rci(&current, v, limits)? {
                current = next;
                trace.push(step);
                continue 'outer;
            }
        }
        return Ok((current, trace));
    }
}

/// Families of prime cofree settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CofreeFamily {
    #[serde(rename = "(i)")]
    I,
    #[serde(rename = "(ii)")]
    II,
    #[serde(rename = "(ii-special)")]
    IISpecial,
    #[serde(rename = "(iii)")]
    III,
    #[serde(rename = "(iv)")]
    IV,
    #[serde(rename = "none")]
    None,
}

impl fmt::Display for CofreeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CofreeFamily::I => "(i)",
            CofreeFamily::II => "(ii)",
            CofreeFamily::IISpecial => "(ii-special)",
            CofreeFamily::III => "(iii)",
            CofreeFamily::IV => "(iv)",
            CofreeFamily::None => "none",
        })
    }
}

/// Matches a prime setting against the cofree families, checked in the order
/// (iii), (i), (ii-special), (ii), (iv).
pub fn match_cofree_family(p: &QuiverSetting, limits: &Limits) -> Result<CofreeFamily> {
    if prime_components(p)?.len() != 1 {
        return Err(Error::NotPrime);
    }
    let q = &p.quiver;
    if single_cycle(q).is_some() {
        return Ok(CofreeFamily::III);
    }
    if matches_family_i(p, limits)? {
        return Ok(CofreeFamily::I);
    }
    if let Some(shape) = two_cycles(q) {
        if matches_ii_special(p, &shape) {
            return Ok(CofreeFamily::IISpecial);
        }
        if matches_ii(p, &shape) {
            return Ok(CofreeFamily::II);
        }
        if matches_iv(p, &shape) {
            return Ok(CofreeFamily::IV);
        }
    }
    Ok(CofreeFamily::None)
}

fn matches_family_i(p: &QuiverSetting, limits: &Limits) -> Result<bool> {
    let q = &p.quiver;
    if !is_strongly_connected(q)? {
        return Ok(false);
    }
    for v in q.vertices().filter(|&v| p.dim[v] == 1) {
        if !all_cycles_through(q, v) {
            continue;
        }
        let mut ok = true;
        for w in q.vertices().filter(|&w| w != v) {
            let there = count_quasiprimitive_paths(p, v, w, limits)?;
            let back = count_quasiprimitive_paths(p, w, v, limits)?;
            if (p.dim[w] as i128) < there as i128 + back as i128 - 1 {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(true);
        }
    }
    Ok(false)
}

/// True iff `Q − v` has no oriented cycle (loops included).
fn all_cycles_through(q: &Quiver, v: usize) -> bool {
    let avoids_v = |i: usize| {
        let a = q.arrow(i);
        a.tail != v && a.head != v
    };
    q.vertices().filter(|&w| w != v).all(|w| {
        // w lies on a cycle avoiding v iff some arrow out of w returns to w
        q.out_arrows(w).filter(|&i| avoids_v(i)).all(|i| !reachable(q, q.arrow(i).head, avoids_v)[w])
    })
}

fn matches_ii_special(p: &QuiverSetting, shape: &TwoCycles) -> bool {
    shape.is_figure_eight()
        && shape.branches.iter().any(|b| b.len() == 1 && p.dim[b[0]] == 1)
}

fn matches_ii(p: &QuiverSetting, shape: &TwoCycles) -> bool {
    if shape.shared.len() < 2 {
        return false;
    }
    (0..2).any(|centre_branch| {
        let centre = &shape.branches[centre_branch];
        if centre.len() != 1 || p.dim[centre[0]] != 1 {
            return false;
        }
        let other = &shape.branches[1 - centre_branch];
        let min = shape.shared.iter().chain(other).map(|&w| p.dim[w]).min().unwrap_or(0);
        shape.shared.iter().filter(|&&w| p.dim[w] == min).count() <= 1
    })
}

fn matches_iv(p: &QuiverSetting, shape: &TwoCycles) -> bool {
    let branches_ok = shape.branches.iter().flatten().all(|&w| p.dim[w] >= 2);
    let twos = shape.shared.iter().filter(|&&c| p.dim[c] == 2).count();
    let rest_ok = shape.shared.iter().all(|&c| p.dim[c] == 2 || p.dim[c] >= 4);
    branches_ok && twos == 1 && rest_ok
}

/// Cofreeness verdict with the reduction trace and the family of every prime
/// component of the reduced setting.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CofreeVerdict {
    pub cofree: bool,
    pub trace: Vec<ReductionStep>,
    pub families: BTreeMap<usize, CofreeFamily>,
}

pub fn is_cofree(s: &QuiverSetting, limits: &Limits) -> Result<CofreeVerdict> {
    if !is_connected(&s.quiver) {
        return Err(Error::DisconnectedQuiver);
    }
    let (reduced, trace) = reduce_fully(s, limits)?;
    let mut families = BTreeMap::new();
    for (i, component) in prime_components(&reduced)?.into_iter().enumerate() {
        families.insert(i, match_cofree_family(&component.setting, limits)?);
    }
    let cofree = families.values().all(|&f| f != CofreeFamily::None);
    Ok(CofreeVerdict { cofree, trace, families })
}
