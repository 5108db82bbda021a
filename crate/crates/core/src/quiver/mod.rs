//! Quivers, dimension vectors and the Euler form.
//!
//! Vertices and arrows are stored in input order, which is the canonical order
//! used for every matrix, coordinate block and report in the crate.

mod graph;
mod paths;

pub use graph::{is_connected, is_strongly_connected, prime_components, reachable, weak_components, PrimeComponent};
pub use paths::{
    count_quasiprimitive_cycles_through, count_quasiprimitive_cycles_through_with,
    count_quasiprimitive_paths, quasiprimitive_cycles_through,
};

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arrow {
    pub tail: usize,
    pub head: usize,
}

impl Arrow {
    pub fn new(tail: usize, head: usize) -> Self {
        Arrow { tail, head }
    }

    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }
}

/// A finite directed multigraph. Loops and parallel arrows are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Quiver {
    names: Vec<String>,
    arrows: Vec<Arrow>,
}

impl Quiver {
    pub fn new(names: Vec<String>, arrows: Vec<Arrow>) -> Result<Self> {
        let mut seen = HashMap::new();
        for name in &names {
            if seen.insert(name.as_str(), ()).is_some() {
                return Err(Error::DuplicateVertexId(name.clone()));
            }
        }
        for (i, a) in arrows.iter().enumerate() {
            for end in [a.tail, a.head] {
                if end >= names.len() {
                    return Err(Error::DanglingArrow { arrow: i, vertex: end.to_string() });
                }
            }
        }
        Ok(Quiver { names, arrows })
    }

    /// Quiver on `n` vertices named `v0 .. v{n-1}`.
    pub fn anonymous(n: usize, arrows: &[(usize, usize)]) -> Result<Self> {
        Quiver::new(
            (0..n).map(|i| format!("v{i}")).collect(),
            arrows.iter().map(|&(t, h)| Arrow::new(t, h)).collect(),
        )
    }

    pub fn named(names: &[&str], arrows: &[(usize, usize)]) -> Result<Self> {
        Quiver::new(
            names.iter().map(|s| s.to_string()).collect(),
            arrows.iter().map(|&(t, h)| Arrow::new(t, h)).collect(),
        )
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, i: usize) -> Arrow {
        self.arrows[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.names.len()
    }

    /// Indices of arrows leaving `v` (loops included).
    pub fn out_arrows(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.arrows.iter().enumerate().filter(move |(_, a)| a.tail == v).map(|(i, _)| i)
    }

    /// Indices of arrows entering `v` (loops included).
    pub fn in_arrows(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.arrows.iter().enumerate().filter(move |(_, a)| a.head == v).map(|(i, _)| i)
    }

    pub fn loop_count(&self, v: usize) -> usize {
        self.arrows.iter().filter(|a| a.tail == v && a.head == v).count()
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out_arrows(v).count()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.in_arrows(v).count()
    }

    /// `count[t][h]` = number of arrows from `t` to `h`.
    pub fn count_matrix(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut m = vec![vec![0; n]; n];
        for a in &self.arrows {
            m[a.tail][a.head] += 1;
        }
        m
    }

    /// The same quiver with every loop removed; returns the kept arrow indices.
    pub fn without_loops(&self) -> (Quiver, Vec<usize>) {
        let kept: Vec<usize> = (0..self.arrow_count()).filter(|&i| !self.arrows[i].is_loop()).collect();
        let q = Quiver { names: self.names.clone(), arrows: kept.iter().map(|&i| self.arrows[i]).collect() };
        (q, kept)
    }

    pub fn euler_matrix(&self) -> EulerMatrix {
        let n = self.vertex_count();
        let mut m = vec![vec![0i64; n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1;
        }
        for a in &self.arrows {
            m[a.tail][a.head] -= 1;
        }
        EulerMatrix(m)
    }

    /// The Euler form `αᵀ·χ·β`.
    pub fn chi(&self, alpha: &DimensionVector, beta: &DimensionVector) -> Result<i64> {
        let n = self.vertex_count();
        for d in [alpha, beta] {
            if d.len() != n {
                return Err(Error::DimensionVectorMismatch { expected: n, found: d.len() });
            }
        }
        let ov = || Error::Overflow("Euler form");
        let mut total: i64 = 0;
        for v in 0..n {
            let term = to_i64(alpha[v])?.checked_mul(to_i64(beta[v])?).ok_or_else(ov)?;
            total = total.checked_add(term).ok_or_else(ov)?;
        }
        for a in &self.arrows {
            let term = to_i64(alpha[a.tail])?.checked_mul(to_i64(beta[a.head])?).ok_or_else(ov)?;
            total = total.checked_sub(term).ok_or_else(ov)?;
        }
        Ok(total)
    }
}

fn to_i64(x: u64) -> Result<i64> {
    i64::try_from(x).map_err(|_| Error::Overflow("dimension entry"))
}

/// Square integer matrix with entry `(i, j) = δ_ij − #{arrows i → j}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerMatrix(pub Vec<Vec<i64>>);

impl EulerMatrix {
    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.0[i][j]
    }

    pub fn size(&self) -> usize {
        self.0.len()
    }
}

/// Non-negative integer per vertex, in canonical vertex order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DimensionVector(pub Vec<u64>);

impl DimensionVector {
    pub fn zeros(n: usize) -> Self {
        DimensionVector(vec![0; n])
    }

    pub fn ones(n: usize) -> Self {
        DimensionVector(vec![1; n])
    }

    /// Indicator vector of vertex `v`.
    pub fn unit(n: usize, v: usize) -> Self {
        let mut d = vec![0; n];
        d[v] = 1;
        DimensionVector(d)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.0[i] > 0).collect()
    }

    pub fn scaled(&self, k: u64) -> Self {
        DimensionVector(self.0.iter().map(|x| x * k).collect())
    }

    pub fn checked_add(&self, other: &Self) -> Option<Self> {
        if self.len() != other.len() {
            return None;
        }
        self.0.iter().zip(&other.0).map(|(a, b)| a.checked_add(*b)).collect::<Option<Vec<_>>>().map(DimensionVector)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, u64> {
        self.0.iter()
    }
}

impl std::ops::Index<usize> for DimensionVector {
    type Output = u64;
    fn index(&self, i: usize) -> &u64 {
        &self.0[i]
    }
}

impl fmt::Display for DimensionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// A quiver together with a dimension vector on its vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuiverSetting {
    pub quiver: Quiver,
    pub dim: DimensionVector,
}

impl QuiverSetting {
    pub fn new(quiver: Quiver, dim: DimensionVector) -> Result<Self> {
        if dim.len() != quiver.vertex_count() {
            return Err(Error::DimensionVectorMismatch { expected: quiver.vertex_count(), found: dim.len() });
        }
        Ok(QuiverSetting { quiver, dim })
    }

    /// Anonymous setting from dimensions and `(tail, head)` pairs.
    pub fn from_parts(dims: &[u64], arrows: &[(usize, usize)]) -> Result<Self> {
        QuiverSetting::new(Quiver::anonymous(dims.len(), arrows)?, DimensionVector(dims.to_vec()))
    }

    pub fn vertex_count(&self) -> usize {
        self.quiver.vertex_count()
    }

    pub fn chi(&self, alpha: &DimensionVector, beta: &DimensionVector) -> Result<i64> {
        self.quiver.chi(alpha, beta)
    }

    /// `χ(α, ε_v)` for the setting's own dimension vector.
    pub fn chi_into(&self, v: usize) -> Result<i64> {
        self.chi(&self.dim, &DimensionVector::unit(self.vertex_count(), v))
    }

    /// `χ(ε_v, α)` for the setting's own dimension vector.
    pub fn chi_out_of(&self, v: usize) -> Result<i64> {
        self.chi(&DimensionVector::unit(self.vertex_count(), v), &self.dim)
    }

    /// Full subquiver on `vertices` (kept in the given order) with every arrow
    /// between them. Returns the setting and the original arrow indices.
    pub fn induced(&self, vertices: &[usize]) -> (QuiverSetting, Vec<usize>) {
        let mut pos = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in vertices.iter().enumerate() {
            pos[v] = i;
        }
        let mut arrows = Vec::new();
        let mut kept = Vec::new();
        for (i, a) in self.quiver.arrows().iter().enumerate() {
            if pos[a.tail] != usize::MAX && pos[a.head] != usize::MAX {
                arrows.push(Arrow::new(pos[a.tail], pos[a.head]));
                kept.push(i);
            }
        }
        let names = vertices.iter().map(|&v| self.quiver.names[v].clone()).collect();
        let setting = QuiverSetting {
            quiver: Quiver { names, arrows },
            dim: DimensionVector(vertices.iter().map(|&v| self.dim[v]).collect()),
        };
        (setting, kept)
    }

    /// Subquiver on the given vertices and the given arrows (whose endpoints
    /// must lie among the vertices).
    pub fn sub(&self, vertices: &[usize], arrows: &[usize]) -> QuiverSetting {
        let mut pos = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in vertices.iter().enumerate() {
            pos[v] = i;
        }
        let arrows = arrows
            .iter()
            .map(|&i| {
                let a = self.quiver.arrows[i];
                Arrow::new(pos[a.tail], pos[a.head])
            })
            .collect();
        QuiverSetting {
            quiver: Quiver { names: vertices.iter().map(|&v| self.quiver.names[v].clone()).collect(), arrows },
            dim: DimensionVector(vertices.iter().map(|&v| self.dim[v]).collect()),
        }
    }

    /// Setting restricted to the vertices of non-zero dimension.
    pub fn support(&self) -> (QuiverSetting, Vec<usize>) {
        let support = self.dim.support();
        let (s, _) = self.induced(&support);
        (s, support)
    }

    /// The same setting with vertices permuted: new vertex `i` is old vertex `order[i]`.
    pub fn permuted(&self, order: &[usize]) -> QuiverSetting {
        let mut pos = vec![0; order.len()];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let arrows = self.quiver.arrows.iter().map(|a| Arrow::new(pos[a.tail], pos[a.head])).collect();
        QuiverSetting {
            quiver: Quiver { names: order.iter().map(|&v| self.quiver.names[v].clone()).collect(), arrows },
            dim: DimensionVector(order.iter().map(|&v| self.dim[v]).collect()),
        }
    }
}

impl fmt::Display for QuiverSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "vertices [")?;
        for v in self.quiver.vertices() {
            if v > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}:{}", self.quiver.name(v), self.dim[v])?;
        }
        write!(f, "] arrows [")?;
        for (i, a) in self.quiver.arrows().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}->{}", self.quiver.name(a.tail), self.quiver.name(a.head))?;
        }
        write!(f, "]")
    }
}

/// Vertex entry of the JSON quiver format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawVertex {
    pub id: String,
    pub dim: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<i64>,
}

/// The JSON quiver format: `{"vertices":[{"id","dim","gamma"?}],"arrows":[[tail,head],...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawQuiver {
    pub vertices: Vec<RawVertex>,
    pub arrows: Vec<[String; 2]>,
}

/// A validated setting plus the optional per-vertex multiplicities γ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SettingInput {
    pub setting: QuiverSetting,
    pub gamma: Option<Vec<u64>>,
}

/// Checks a raw description and turns it into a canonical setting.
pub fn validate(raw: &RawQuiver) -> Result<QuiverSetting> {
    parse_input(raw).map(|input| input.setting)
}

pub fn parse_input(raw: &RawQuiver) -> Result<SettingInput> {
    let mut index = HashMap::new();
    let mut dims = Vec::with_capacity(raw.vertices.len());
    for (i, v) in raw.vertices.iter().enumerate() {
        if index.insert(v.id.as_str(), i).is_some() {
            return Err(Error::DuplicateVertexId(v.id.clone()));
        }
        if v.dim < 0 {
            return Err(Error::NegativeDimension { vertex: v.id.clone(), value: v.dim });
        }
        dims.push(v.dim as u64);
    }
    let mut arrows = Vec::with_capacity(raw.arrows.len());
    for (i, [t, h]) in raw.arrows.iter().enumerate() {
        let lookup = |name: &String| {
            index.get(name.as_str()).copied().ok_or_else(|| Error::DanglingArrow { arrow: i, vertex: name.clone() })
        };
        arrows.push(Arrow::new(lookup(t)?, lookup(h)?));
    }
    let with_gamma = raw.vertices.iter().filter(|v| v.gamma.is_some()).count();
    let gamma = if with_gamma == 0 {
        None
    } else if with_gamma < raw.vertices.len() {
        return Err(Error::InvalidGamma("gamma must be given on every vertex or on none".into()));
    } else {
        let mut g = Vec::with_capacity(raw.vertices.len());
        for v in &raw.vertices {
            let value = v.gamma.unwrap_or(0);
            if value < 0 {
                return Err(Error::NegativeGamma { vertex: v.id.clone(), value });
            }
            g.push(value as u64);
        }
        Some(g)
    };
    let quiver = Quiver::new(raw.vertices.iter().map(|v| v.id.clone()).collect(), arrows)?;
    Ok(SettingInput { setting: QuiverSetting::new(quiver, DimensionVector(dims))?, gamma })
}

impl RawQuiver {
    pub fn from_setting(setting: &QuiverSetting, gamma: Option<&[u64]>) -> RawQuiver {
        let q = &setting.quiver;
        RawQuiver {
            vertices: q
                .vertices()
                .map(|v| RawVertex {
                    id: q.name(v).to_string(),
                    dim: setting.dim[v] as i64,
                    gamma: gamma.map(|g| g[v] as i64),
                })
                .collect(),
            arrows: q.arrows().iter().map(|a| [q.name(a.tail).to_string(), q.name(a.head).to_string()]).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(vertices: &[(&str, i64)], arrows: &[(&str, &str)]) -> RawQuiver {
        RawQuiver {
            vertices: vertices.iter().map(|&(id, dim)| RawVertex { id: id.into(), dim, gamma: None }).collect(),
            arrows: arrows.iter().map(|&(t, h)| [t.to_string(), h.to_string()]).collect(),
        }
    }

    #[test]
    fn validate_accepts_single_vertex() {
        let s = validate(&raw(&[("a", 1)], &[])).unwrap();
        assert_eq!(s.vertex_count(), 1);
        assert_eq!(s.quiver.arrow_count(), 0);
    }

    #[test]
    fn validate_rejects_dangling_arrow() {
        let err = validate(&raw(&[("a", 1)], &[("a", "b")])).unwrap_err();
        assert_eq!(err, Error::DanglingArrow { arrow: 0, vertex: "b".into() });
    }

    #[test]
    fn validate_rejects_duplicates_and_negative_dims() {
        assert_eq!(validate(&raw(&[("a", 1), ("a", 2)], &[])).unwrap_err(), Error::DuplicateVertexId("a".into()));
        assert!(matches!(validate(&raw(&[("a", -1)], &[])), Err(Error::NegativeDimension { .. })));
    }

    #[test]
    fn validate_two_cycle() {
        let s = validate(&raw(&[("a", 1), ("b", 1)], &[("a", "b"), ("b", "a")])).unwrap();
        assert_eq!(s.quiver.arrows(), &[Arrow::new(0, 1), Arrow::new(1, 0)]);
    }

    #[test]
    fn gamma_must_be_all_or_nothing() {
        let mut r = raw(&[("a", 1), ("b", 1)], &[]);
        r.vertices[0].gamma = Some(1);
        assert!(matches!(parse_input(&r), Err(Error::InvalidGamma(_))));
        r.vertices[1].gamma = Some(2);
        assert_eq!(parse_input(&r).unwrap().gamma, Some(vec![1, 2]));
    }

    #[test]
    fn euler_matrix_examples() {
        let one_loop = Quiver::anonymous(1, &[(0, 0)]).unwrap();
        assert_eq!(one_loop.euler_matrix().0, vec![vec![0]]);

        let cycle = Quiver::anonymous(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(cycle.euler_matrix().0, vec![vec![1, -1, 0], vec![0, 1, -1], vec![-1, 0, 1]]);

        let kronecker = Quiver::anonymous(2, &[(0, 1), (0, 1)]).unwrap();
        assert_eq!(kronecker.euler_matrix().0, vec![vec![1, -2], vec![0, 1]]);
    }

    #[test]
    fn chi_examples() {
        let cycle = Quiver::anonymous(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let one = DimensionVector::ones(3);
        assert_eq!(cycle.chi(&one, &one).unwrap(), 0);

        let point = Quiver::anonymous(1, &[]).unwrap();
        let d = DimensionVector(vec![5]);
        assert_eq!(point.chi(&d, &d).unwrap(), 25);

        assert_eq!(
            cycle.chi(&one, &DimensionVector::ones(2)).unwrap_err(),
            Error::DimensionVectorMismatch { expected: 3, found: 2 }
        );
    }

    #[test]
    fn chi_overflow_is_reported() {
        let q = Quiver::anonymous(1, &[]).unwrap();
        let d = DimensionVector(vec![u64::MAX / 2]);
        assert!(matches!(q.chi(&d, &d), Err(Error::Overflow(_))));
    }

    #[test]
    fn chi_against_unit_vectors_counts_arrows() {
        let s = QuiverSetting::from_parts(&[2, 1, 3], &[(0, 1), (1, 2), (2, 0), (2, 0), (0, 0)]).unwrap();
        for v in 0..3 {
            let incoming: u64 = s.quiver.in_arrows(v).map(|i| s.dim[s.quiver.arrow(i).tail]).sum();
            let outgoing: u64 = s.quiver.out_arrows(v).map(|i| s.dim[s.quiver.arrow(i).head]).sum();
            assert_eq!(s.chi_into(v).unwrap(), s.dim[v] as i64 - incoming as i64);
            assert_eq!(s.chi_out_of(v).unwrap(), s.dim[v] as i64 - outgoing as i64);
        }
    }

    #[test]
    fn raw_round_trip() {
        let r = raw(&[("a", 1), ("b", 2)], &[("a", "b"), ("b", "a")]);
        let s = validate(&r).unwrap();
        assert_eq!(RawQuiver::from_setting(&s, None), r);
    }
}
