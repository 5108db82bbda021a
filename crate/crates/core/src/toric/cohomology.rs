//! Presentation of the cohomology ring of a toric fiber component.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::fan::betti_full;
use super::ExtendedSetting;
use crate::error::{Error, Result};
use crate::limits::Limits;

/// `D_plus − D_minus`, or `D_plus` when the subtracted divisor is zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Factor {
    pub plus: usize,
    pub minus: Option<usize>,
}

/// `Π factors = 0`, attached to the vertex whose incoming arrows give the
/// factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub vertex: usize,
    pub factors: Vec<Factor>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyPresentation {
    /// Vertices of the extended quiver with at least two incoming arrows.
    pub generators: Vec<usize>,
    pub relations: Vec<Relation>,
    /// `b_0, b_2, …` read off from the triangular shape of the relations.
    pub betti: Vec<u64>,
    pub rank: u64,
    names: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyJson {
    pub generators: Vec<String>,
    pub relations: Vec<Vec<String>>,
    pub betti: Vec<u64>,
    pub betti_full: Vec<u64>,
    pub rank: u64,
}

impl CohomologyPresentation {
    pub fn factor_string(&self, f: &Factor) -> String {
        match f.minus {
            Some(m) => format!("D_{} - D_{}", self.names[f.plus], self.names[m]),
            None => format!("D_{}", self.names[f.plus]),
        }
    }

    pub fn to_json(&self) -> CohomologyJson {
        CohomologyJson {
            generators: self.generators.iter().map(|&g| self.names[g].clone()).collect(),
            relations: self
                .relations
                .iter()
                .map(|r| r.factors.iter().map(|f| self.factor_string(f)).collect())
                .collect(),
            betti: self.betti.clone(),
            betti_full: betti_full(&self.betti),
            rank: self.rank,
        }
    }
}

/// Generators `D_w`, one relation `Π_{h(a)=w} (D_w − D_{t(a)})` per vertex
/// with at least two incoming arrows. `D_{v₀} = 0`, and a vertex with a
/// single incoming arrow `a` is eliminated through `D_w = D_{t(a)}`.
pub fn cohomology_presentation(ext: &ExtendedSetting) -> Result<CohomologyPresentation> {
    let q = &ext.quiver;
    let resolve = |mut v: usize| -> Option<usize> {
        for _ in 0..q.vertex_count() {
            if v == ExtendedSetting::SOURCE {
                return None;
            }
            let mut incoming = q.in_arrows(v);
            match (incoming.next(), incoming.next()) {
                (Some(a), None) => v = q.arrow(a).tail,
                _ => return Some(v),
            }
        }
        None
    };
    let mut generators = Vec::new();
    let mut relations = Vec::new();
    let mut rank = 1u64;
    let mut betti = vec![1u64];
    for w in 1..q.vertex_count() {
        let k = q.in_degree(w);
        if k == 0 {
            return Err(Error::InvalidExtension(format!("vertex {} has no incoming arrow", q.name(w))));
        }
        rank = rank.checked_mul(k as u64).ok_or(Error::Overflow("cohomology rank"))?;
        if k == 1 {
            continue;
        }
        generators.push(w);
        let factors = q.in_arrows(w).map(|a| Factor { plus: w, minus: resolve(q.arrow(a).tail) }).collect();
        relations.push(Relation { vertex: w, factors });
        let mut next = vec![0u64; betti.len() + k - 1];
        for (i, &b) in betti.iter().enumerate() {
            for slot in &mut next[i..i + k] {
                *slot += b;
            }
        }
        betti = next;
    }
    Ok(CohomologyPresentation { generators, relations, betti, rank, names: q.names().to_vec() })
}

type Poly = BTreeMap<Vec<u32>, BigInt>;

fn relation_poly(p: &CohomologyPresentation, rel: &Relation) -> Poly {
    let pos: BTreeMap<usize, usize> = p.generators.iter().enumerate().map(|(i, &g)| (g, i)).collect();
    let g = p.generators.len();
    let mut poly: Poly = BTreeMap::from([(vec![0; g], BigInt::one())]);
    for f in &rel.factors {
        let mut next = Poly::new();
        for (mono, c) in &poly {
            let mut terms = vec![(pos[&f.plus], BigInt::one())];
            if let Some(m) = f.minus {
                terms.push((pos[&m], -BigInt::one()));
            }
            for (var, sign) in terms {
                let mut m = mono.clone();
                m[var] += 1;
                *next.entry(m).or_insert_with(BigInt::zero) += c * &sign;
            }
        }
        next.retain(|_, c| !c.is_zero());
        poly = next;
    }
    poly
}

fn monomials(vars: usize, degree: u32) -> Vec<Vec<u32>> {
    if vars == 0 {
        return if degree == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in (0..=degree).rev() {
        for mut rest in monomials(vars - 1, degree - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn rank_of(rows: Vec<Vec<BigRational>>, counter: &mut crate::limits::Counter) -> Result<usize> {
    let mut rows = rows;
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else { continue };
        rows.swap(rank, pivot);
        let lead = rows[rank][col].clone();
        for r in rank + 1..rows.len() {
            if rows[r][col].is_zero() {
                continue;
            }
            counter.tick()?;
            let factor = &rows[r][col] / &lead;
            for c in col..cols {
                let delta = &factor * &rows[rank][c];
                rows[r][c] -= delta;
            }
        }
        rank += 1;
    }
    Ok(rank)
}

/// Dimensions over ℚ of the graded pieces of `ℚ[D]/(relations)` in degrees
/// `0..=top`, computed by linear algebra on the degree-`k` part of the ideal.
/// Errors if the piece just above `top` does not vanish.
pub fn graded_ranks(p: &CohomologyPresentation, limits: &Limits) -> Result<Vec<u64>> {
    let g = p.generators.len();
    let rels: Vec<(u32, Poly)> =
        p.relations.iter().map(|r| (r.factors.len() as u32, relation_poly(p, r))).collect();
    let top: u32 = rels.iter().map(|(d, _)| d - 1).sum();
    let mut counter = limits.counter("graded ranks");
    let mut out = Vec::new();
    for k in 0..=top + 1 {
        let basis = monomials(g, k);
        let index: BTreeMap<&Vec<u32>, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut rows = Vec::new();
        for (d, poly) in &rels {
            if *d > k {
                continue;
            }
            for shift in monomials(g, k - d) {
                counter.tick()?;
                let mut row = vec![BigRational::zero(); basis.len()];
                for (mono, c) in poly {
                    let m: Vec<u32> = mono.iter().zip(&shift).map(|(a, b)| a + b).collect();
                    row[index[&m]] = BigRational::from_integer(c.clone());
                }
                rows.push(row);
            }
        }
        let r = rank_of(rows, &mut counter)?;
        out.push((basis.len() - r) as u64);
    }
    if out.pop() != Some(0) {
        return Err(Error::VerificationFailure(format!("quotient ring does not vanish in degree {}", top + 1)));
    }
    Ok(out)
}
