//! Simple representations, reduced settings, semisimple decomposition types and
//! local quivers.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::quiver::{is_strongly_connected, Arrow, DimensionVector, Quiver, QuiverSetting, RawQuiver};

/// Which clause of the simplicity criterion a setting satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SimpleCase {
    /// Oriented cycle on at least two vertices with `α = 1`.
    Cycle,
    /// One vertex carrying one loop, `α = 1`.
    OneLoop,
    /// Strongly connected, not a cycle, and `χ(α,ε_v) ≤ 0`, `χ(ε_v,α) ≤ 0` everywhere.
    EulerBounds,
    /// One vertex, no arrows, `α = 1`.
    IsolatedPoint,
}

/// Why a setting has no simple representations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "condition")]
pub enum NotSimpleReason {
    NotStronglyConnected,
    /// The support is an oriented cycle (or a single loop) but `α ≠ 1`.
    CycleWithNonUnitDimension,
    /// `χ(α, ε_v) > 0` at `vertex` (too little coming in).
    IncomingBound { vertex: usize, chi: i64 },
    /// `χ(ε_v, α) > 0` at `vertex` (too little going out).
    OutgoingBound { vertex: usize, chi: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "verdict")]
pub enum SimpleVerdict {
    Simple { case: SimpleCase },
    NotSimple { reason: NotSimpleReason },
}

impl SimpleVerdict {
    pub fn is_simple(&self) -> bool {
        matches!(self, SimpleVerdict::Simple { .. })
    }
}

impl fmt::Display for SimpleCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SimpleCase::Cycle => "cyclic, α=1",
            SimpleCase::OneLoop => "one vertex with one loop, α=1",
            SimpleCase::EulerBounds => "Euler-form bounds",
            SimpleCase::IsolatedPoint => "isolated vertex, α=1",
        })
    }
}

impl fmt::Display for NotSimpleReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NotSimpleReason::NotStronglyConnected => f.write_str("support not strongly connected"),
            NotSimpleReason::CycleWithNonUnitDimension => f.write_str("cyclic support with α ≠ 1"),
            NotSimpleReason::IncomingBound { vertex, chi } => write!(f, "χ(α,ε_{vertex}) = {chi} > 0"),
            NotSimpleReason::OutgoingBound { vertex, chi } => write!(f, "χ(ε_{vertex},α) = {chi} > 0"),
        }
    }
}

/// True iff the quiver is a single oriented cycle (a single loop included).
pub fn is_oriented_cycle(q: &Quiver) -> bool {
    q.vertex_count() >= 1
        && q.arrow_count() == q.vertex_count()
        && q.vertices().all(|v| q.in_degree(v) == 1 && q.out_degree(v) == 1)
        && is_strongly_connected(q).unwrap_or(false)
}

/// Decides existence of simple representations and reports the deciding clause.
///
/// Vertices of dimension 0 are removed first. Vertex numbers in the reason
/// refer to the original setting.
pub fn simplicity(s: &QuiverSetting) -> Result<SimpleVerdict> {
    let (support, index) = s.support();
    if support.vertex_count() == 0 {
        return Err(Error::EmptySupport);
    }
    let q = &support.quiver;
    let not = |reason| Ok(SimpleVerdict::NotSimple { reason });
    if q.vertex_count() == 1 && q.arrow_count() == 0 && support.dim[0] == 1 {
        return Ok(SimpleVerdict::Simple { case: SimpleCase::IsolatedPoint });
    }
    if !is_strongly_connected(q)? {
        return not(NotSimpleReason::NotStronglyConnected);
    }
    if is_oriented_cycle(q) {
        if support.dim.iter().all(|&d| d == 1) {
            let case = if q.vertex_count() == 1 { SimpleCase::OneLoop } else { SimpleCase::Cycle };
            return Ok(SimpleVerdict::Simple { case });
        }
        return not(NotSimpleReason::CycleWithNonUnitDimension);
    }
    for v in q.vertices() {
        let chi = support.chi_into(v)?;
        if chi > 0 {
            return not(NotSimpleReason::IncomingBound { vertex: index[v], chi });
        }
        let chi = support.chi_out_of(v)?;
        if chi > 0 {
            return not(NotSimpleReason::OutgoingBound { vertex: index[v], chi });
        }
    }
    Ok(SimpleVerdict::Simple { case: SimpleCase::EulerBounds })
}

pub fn has_simple_reps(s: &QuiverSetting) -> Result<bool> {
    Ok(simplicity(s)?.is_simple())
}

/// First condition of reducedness that fails, if any.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "condition")]
pub enum ReducedViolation {
    /// A loopless vertex with `χ(α,ε_t) > -1` or `χ(ε_t,α) > -1`.
    LooplessBound { vertex: usize, chi_in: i64, chi_out: i64 },
    /// A one-loop vertex with `χ(α,ε_t) > -2` or `χ(ε_t,α) > -2`.
    OneLoopBound { vertex: usize, chi_in: i64, chi_out: i64 },
    /// A vertex of dimension 1 carrying a loop.
    LoopAtDimensionOne { vertex: usize },
}

pub fn reduced_violation(s: &QuiverSetting) -> Result<Option<ReducedViolation>> {
    let q = &s.quiver;
    if q.vertex_count() < 2 {
        return Err(Error::TooFewVertices);
    }
    if !is_strongly_connected(q)? {
        return Err(Error::NotStronglyConnected);
    }
    for t in q.vertices() {
        let loops = q.loop_count(t);
        let (chi_in, chi_out) = (s.chi_into(t)?, s.chi_out_of(t)?);
        if loops == 0 && (chi_in > -1 || chi_out > -1) {
            return Ok(Some(ReducedViolation::LooplessBound { vertex: t, chi_in, chi_out }));
        }
        if loops == 1 && (chi_in > -2 || chi_out > -2) {
            return Ok(Some(ReducedViolation::OneLoopBound { vertex: t, chi_in, chi_out }));
        }
        if loops > 0 && s.dim[t] == 1 {
            return Ok(Some(ReducedViolation::LoopAtDimensionOne { vertex: t }));
        }
    }
    Ok(None)
}

/// Reducedness of a strongly connected setting with at least two vertices.
pub fn is_reduced(s: &QuiverSetting) -> Result<bool> {
    Ok(reduced_violation(s)?.is_none())
}

fn check_enumeration_caps(s: &QuiverSetting, limits: &Limits) -> Result<()> {
    if s.vertex_count() > limits.max_decomposition_vertices {
        return Err(Error::BudgetExceeded {
            what: "decomposition enumeration (vertex count)",
            limit: limits.max_decomposition_vertices as u64,
        });
    }
    if s.dim.iter().any(|&d| d > limits.max_decomposition_entry) {
        return Err(Error::BudgetExceeded {
            what: "decomposition enumeration (dimension entry)",
            limit: limits.max_decomposition_entry,
        });
    }
    Ok(())
}

/// Every non-zero `β ≤ α` admitting simple representations, in odometer order
/// (first vertex varies fastest).
pub fn enumerate_simple_subdimvectors(s: &QuiverSetting, limits: &Limits) -> Result<Vec<DimensionVector>> {
    check_enumeration_caps(s, limits)?;
    let n = s.vertex_count();
    let mut counter = limits.counter("simple dimension vector enumeration");
    let mut out = Vec::new();
    let mut beta = vec![0u64; n];
    loop {
        // advance the odometer
        let mut i = 0;
        while i < n && beta[i] == s.dim[i] {
            beta[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
        beta[i] += 1;
        counter.tick()?;
        let candidate = QuiverSetting { quiver: s.quiver.clone(), dim: DimensionVector(beta.clone()) };
        if has_simple_reps(&candidate)? {
            out.push(candidate.dim);
        }
    }
    Ok(out)
}

/// One simple dimension vector with its multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Summand {
    pub beta: DimensionVector,
    pub mult: u64,
}

/// A semisimple type `⊕ S_i^{m_i}`: distinct simple dimension vectors `β_i`
/// with multiplicities `m_i` and `Σ m_i β_i = α`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DecompositionType {
    pub summands: Vec<Summand>,
}

impl DecompositionType {
    pub fn new(summands: Vec<Summand>) -> Self {
        DecompositionType { summands }
    }

    /// `{(α, 1)}`.
    pub fn trivial(s: &QuiverSetting) -> Self {
        DecompositionType { summands: vec![Summand { beta: s.dim.clone(), mult: 1 }] }
    }

    /// `{(ε_v, α(v))}` over the support of `α`.
    pub fn finest(s: &QuiverSetting) -> Self {
        let n = s.vertex_count();
        DecompositionType {
            summands: s
                .dim
                .support()
                .into_iter()
                .map(|v| Summand { beta: DimensionVector::unit(n, v), mult: s.dim[v] })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.summands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    /// Checks `Σ m_i β_i = α` and simplicity of every `β_i`.
    pub fn validate(&self, s: &QuiverSetting) -> Result<()> {
        let n = s.vertex_count();
        let mut total = DimensionVector::zeros(n);
        for (i, summand) in self.summands.iter().enumerate() {
            if summand.beta.len() != n {
                return Err(Error::DimensionVectorMismatch { expected: n, found: summand.beta.len() });
            }
            if summand.mult == 0 {
                return Err(Error::InvalidDecomposition(format!("summand {i} has multiplicity 0")));
            }
            if summand.beta.is_zero() {
                return Err(Error::InvalidDecomposition(format!("summand {i} is zero")));
            }
            let part = summand.beta.scaled(summand.mult);
            total = total.checked_add(&part).ok_or(Error::Overflow("decomposition sum"))?;
            let sub = QuiverSetting { quiver: s.quiver.clone(), dim: summand.beta.clone() };
            if !has_simple_reps(&sub)? {
                return Err(Error::InvalidDecomposition(format!(
                    "summand {i} ({}) admits no simple representations",
                    summand.beta
                )));
            }
        }
        if total != s.dim {
            return Err(Error::InvalidDecomposition(format!("summands add up to {total}, expected {}", s.dim)));
        }
        Ok(())
    }

    pub fn to_json(&self, q: &Quiver) -> DecompositionJson {
        DecompositionJson {
            summands: self
                .summands
                .iter()
                .map(|s| SummandJson {
                    beta: q.vertices().filter(|&v| s.beta[v] > 0).map(|v| (q.name(v).to_string(), s.beta[v])).collect(),
                    mult: s.mult,
                })
                .collect(),
        }
    }

    pub fn from_json(json: &DecompositionJson, q: &Quiver) -> Result<Self> {
        let mut summands = Vec::new();
        for s in &json.summands {
            let mut beta = vec![0; q.vertex_count()];
            for (name, &value) in &s.beta {
                let v = q.index_of(name).ok_or_else(|| Error::DanglingArrow { arrow: usize::MAX, vertex: name.clone() })?;
                beta[v] = value;
            }
            summands.push(Summand { beta: DimensionVector(beta), mult: s.mult });
        }
        Ok(DecompositionType { summands })
    }
}

impl fmt::Display for DecompositionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, s) in self.summands.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}^{}", s.beta, s.mult)?;
        }
        write!(f, "}}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummandJson {
    pub beta: BTreeMap<String, u64>,
    pub mult: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionJson {
    pub summands: Vec<SummandJson>,
}

/// All semisimple decomposition types of `α`.
///
/// Output is sorted by number of summands, then by the positions of the
/// summands in [`enumerate_simple_subdimvectors`] order.
pub fn enumerate_decompositions(s: &QuiverSetting, limits: &Limits) -> Result<Vec<DecompositionType>> {
    let simples = enumerate_simple_subdimvectors(s, limits)?;
    let mut counter = limits.counter("decomposition enumeration");
    let mut found: Vec<Vec<(usize, u64)>> = Vec::new();
    let mut chosen = Vec::new();
    let mut remaining = s.dim.0.clone();
    fn rec(
        simples: &[DimensionVector],
        i: usize,
        remaining: &mut Vec<u64>,
        chosen: &mut Vec<(usize, u64)>,
        found: &mut Vec<Vec<(usize, u64)>>,
        counter: &mut crate::limits::Counter,
    ) -> Result<()> {
        counter.tick()?;
        if remaining.iter().all(|&r| r == 0) {
            found.push(chosen.clone());
            return Ok(());
        }
        if i == simples.len() {
            return Ok(());
        }
        let beta = &simples[i];
        let max_mult =
            beta.iter().zip(remaining.iter()).filter(|(b, _)| **b > 0).map(|(b, r)| r / b).min().unwrap_or(0);
        for m in (1..=max_mult).rev() {
            for (r, b) in remaining.iter_mut().zip(beta.iter()) {
                *r -= m * b;
            }
            chosen.push((i, m));
            rec(simples, i + 1, remaining, chosen, found, counter)?;
            chosen.pop();
            for (r, b) in remaining.iter_mut().zip(beta.iter()) {
                *r += m * b;
            }
        }
        rec(simples, i + 1, remaining, chosen, found, counter)
    }
    rec(&simples, 0, &mut remaining, &mut chosen, &mut found, &mut counter)?;
    found.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| b.iter().rev().cmp(a.iter().rev())));
    Ok(found
        .into_iter()
        .map(|parts| DecompositionType {
            summands: parts.into_iter().map(|(i, mult)| Summand { beta: simples[i].clone(), mult }).collect(),
        })
        .collect())
}

/// Local quiver setting `(Q_p, α_p)` with multiplicities `γ_p` and `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalQuiverData {
    pub setting: QuiverSetting,
    pub gamma: Vec<u64>,
    pub n: u64,
}

impl LocalQuiverData {
    /// Wraps explicit local data; `n` is `Σ γ(v)·α(v)` and must be positive.
    pub fn new(setting: QuiverSetting, gamma: Vec<u64>) -> Result<Self> {
        if gamma.len() != setting.vertex_count() {
            return Err(Error::InvalidGamma(format!(
                "{} gamma entries for {} vertices",
                gamma.len(),
                setting.vertex_count()
            )));
        }
        let n = weighted_total(&gamma, &setting.dim)?;
        if n == 0 {
            return Err(Error::InvalidGamma("Σ γ(v)α(v) must be positive".into()));
        }
        Ok(LocalQuiverData { setting, gamma, n })
    }

    pub fn to_json(&self) -> LocalQuiverJson {
        LocalQuiverJson { quiver: RawQuiver::from_setting(&self.setting, Some(&self.gamma)), n: self.n }
    }
}

fn weighted_total(gamma: &[u64], dim: &DimensionVector) -> Result<u64> {
    gamma.iter().zip(dim.iter()).try_fold(0u64, |acc, (g, a)| {
        g.checked_mul(*a).and_then(|x| acc.checked_add(x)).ok_or(Error::Overflow("Σ γ·α"))
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalQuiverJson {
    #[serde(flatten)]
    pub quiver: RawQuiver,
    pub n: u64,
}

/// Builds the local quiver of the point of type `d`.
///
/// Local vertex `u` stands for summand `u`; there are `δ_uv − χ(β_u, β_v)`
/// arrows `u → v` and `α_p(u) = m_u`. Without `gamma`, every vertex of `s`
/// gets multiplicity 1. The local multiplicities are `γ_p(u) = Σ_t γ(t)·β_u(t)`.
pub fn local_quiver(s: &QuiverSetting, d: &DecompositionType, gamma: Option<&[u64]>) -> Result<LocalQuiverData> {
    d.validate(s)?;
    let ones;
    let gamma = match gamma {
        Some(g) => {
            if g.len() != s.vertex_count() {
                return Err(Error::InvalidGamma(format!("{} gamma entries for {} vertices", g.len(), s.vertex_count())));
            }
            g
        }
        None => {
            ones = vec![1; s.vertex_count()];
            &ones
        }
    };
    let k = d.len();
    let mut arrows = Vec::new();
    for u in 0..k {
        for v in 0..k {
            let delta = i64::from(u == v);
            let count = delta - s.chi(&d.summands[u].beta, &d.summands[v].beta)?;
            if count < 0 {
                return Err(Error::NegativeArrowCount { from: u, to: v, count });
            }
            arrows.extend(std::iter::repeat_n(Arrow::new(u, v), count as usize));
        }
    }
    let quiver = Quiver::new((1..=k).map(|i| format!("s{i}")).collect(), arrows)?;
    let dim = DimensionVector(d.summands.iter().map(|x| x.mult).collect());
    let gamma_p = d
        .summands
        .iter()
        .map(|x| weighted_total(gamma, &x.beta))
        .collect::<Result<Vec<_>>>()?;
    let local = LocalQuiverData::new(QuiverSetting::new(quiver, dim)?, gamma_p)?;
    debug_assert_eq!(local.n, weighted_total(gamma, &s.dim)?);
    Ok(local)
}
