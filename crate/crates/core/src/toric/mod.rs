//! Toric model of a fiber component: the tree `T` extended by a source `v₀`
//! with `γ(w)` arrows into every vertex, its connecting subquivers, the fan
//! they index and the cohomology ring of the resulting toric variety.

mod cohomology;
mod fan;
mod linalg;

pub use cohomology::{cohomology_presentation, graded_ranks, CohomologyJson, CohomologyPresentation, Factor, Relation};
pub use fan::{betti_full, betti_numbers, build_fan, predicted_face_counts, verify_fan, Fan, FanJson, Ray};
pub use linalg::determinant;

use crate::error::{Error, Result};
use crate::fiber::TreeComponent;
use crate::limits::Limits;
use crate::quiver::{reachable, Arrow, Quiver};

/// `Q̃`: a source vertex `v₀` (index 0) added to an acyclic base quiver, with
/// `γ(w)` arrows `v₀ → w`. Base vertex `w` becomes vertex `w + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedSetting {
    pub quiver: Quiver,
    /// Number of leading arrows that come from the base quiver.
    pub base_arrows: usize,
    /// `θ(v₀) = −n`, `θ(w) = γ(w)`.
    pub theta: Vec<i64>,
    pub n: u64,
}

impl ExtendedSetting {
    pub const SOURCE: usize = 0;

    pub fn vertex_count(&self) -> usize {
        self.quiver.vertex_count()
    }

    pub fn arrow_count(&self) -> usize {
        self.quiver.arrow_count()
    }

    /// `#Q̃₁ − #Q̃₀ + 1`.
    pub fn lattice_rank(&self) -> usize {
        self.arrow_count() + 1 - self.vertex_count()
    }
}

/// Adds the source. Arrows: the base arrows in order, then the arrows out of
/// `v₀` grouped by target in vertex order.
pub fn extend(tree: &Quiver, gamma: &[u64]) -> Result<ExtendedSetting> {
    if gamma.len() != tree.vertex_count() {
        return Err(Error::InvalidGamma(format!("{} entries for {} vertices", gamma.len(), tree.vertex_count())));
    }
    if let Some(v) = gamma.iter().position(|&g| g == 0) {
        return Err(Error::NonPositiveGamma(v));
    }
    if tree.arrows().iter().any(|a| a.is_loop()) {
        return Err(Error::InvalidExtension("base quiver has a loop".into()));
    }
    let mut source = String::from("v₀");
    while tree.index_of(&source).is_some() {
        source.push('\'');
    }
    let mut names = vec![source];
    names.extend(tree.names().iter().cloned());
    let mut arrows: Vec<Arrow> = tree.arrows().iter().map(|a| Arrow::new(a.tail + 1, a.head + 1)).collect();
    for (w, &g) in gamma.iter().enumerate() {
        arrows.extend(std::iter::repeat_n(Arrow::new(0, w + 1), g as usize));
    }
    let n: u64 = gamma.iter().sum();
    let mut theta = vec![-(n as i64)];
    theta.extend(gamma.iter().map(|&g| g as i64));
    let ext = ExtendedSetting { quiver: Quiver::new(names, arrows)?, base_arrows: tree.arrow_count(), theta, n };
    if !reachable(&ext.quiver, 0, |_| true).iter().all(|&r| r) {
        return Err(Error::InvalidExtension("source does not reach every vertex".into()));
    }
    Ok(ext)
}

pub fn extend_component(component: &TreeComponent, gamma: &[u64]) -> Result<ExtendedSetting> {
    extend(&component.tree, gamma)
}

/// The complete toric description of one fiber component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToricModel {
    pub extended: ExtendedSetting,
    /// Verified fan.
    pub fan: Fan,
    pub betti: Vec<u64>,
    pub cohomology: CohomologyPresentation,
}

impl ToricModel {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "lattice_rank": self.extended.lattice_rank(),
            "fan": self.fan.to_json(),
            "betti": self.betti,
            "betti_full": betti_full(&self.betti),
            "cohomology": self.cohomology.to_json(),
        })
    }
}

/// Extends the component, builds and verifies its fan and computes the Betti
/// numbers and the ring presentation, checking that the two agree.
pub fn toric_model(component: &TreeComponent, gamma: &[u64], limits: &Limits) -> Result<ToricModel> {
    let extended = extend_component(component, gamma)?;
    let fan = verify_fan(build_fan(&extended, limits)?)?;
    let betti = betti_numbers(&fan)?;
    let cohomology = cohomology_presentation(&extended)?;
    if cohomology.betti != betti || cohomology.rank != fan.max_cones.len() as u64 {
        return Err(Error::VerificationFailure(format!(
            "ring presentation predicts Betti numbers {:?}, the fan gives {betti:?}",
            cohomology.betti
        )));
    }
    Ok(ToricModel { extended, fan, betti, cohomology })
}

fn check_width(ext: &ExtendedSetting) -> Result<()> {
    if ext.arrow_count() > 64 {
        return Err(Error::BudgetExceeded { what: "connecting subquivers (arrow count)", limit: 64 });
    }
    Ok(())
}

/// Arrow masks of all connecting subquivers, ascending.
///
/// The extended quiver is acyclic with `v₀` as only source, so a subquiver
/// connects exactly when it keeps at least one arrow into every other vertex.
pub fn connecting_subquivers(ext: &ExtendedSetting, limits: &Limits) -> Result<Vec<u64>> {
    check_width(ext)?;
    let q = &ext.quiver;
    let choices: Vec<Vec<u64>> = (1..q.vertex_count())
        .map(|w| {
            let incoming: Vec<usize> = q.in_arrows(w).collect();
            (1u64..(1 << incoming.len()))
                .map(|sub| {
                    incoming.iter().enumerate().filter(|(j, _)| sub >> j & 1 == 1).fold(0u64, |m, (_, &i)| m | 1 << i)
                })
                .collect()
        })
        .collect();
    let mut out = product_masks(&choices, limits, "connecting subquivers")?;
    out.sort_unstable();
    Ok(out)
}

/// Arrow masks of the minimal connecting subquivers (one incoming arrow per
/// vertex other than `v₀`), ascending.
pub fn minimal_connecting_subquivers(ext: &ExtendedSetting, limits: &Limits) -> Result<Vec<u64>> {
    check_width(ext)?;
    let q = &ext.quiver;
    let choices: Vec<Vec<u64>> =
        (1..q.vertex_count()).map(|w| q.in_arrows(w).map(|i| 1u64 << i).collect()).collect();
    let mut out = product_masks(&choices, limits, "minimal connecting subquivers")?;
    out.sort_unstable();
    Ok(out)
}

fn product_masks(choices: &[Vec<u64>], limits: &Limits, what: &'static str) -> Result<Vec<u64>> {
    let mut counter = limits.counter(what);
    let mut out = vec![0u64];
    for options in choices {
        let mut next = Vec::with_capacity(out.len() * options.len());
        for &m in &out {
            for &o in options {
                counter.tick()?;
                next.push(m | o);
            }
        }
        out = next;
    }
    Ok(out)
}

/// Exhaustive reference: every arrow subset, tested by reachability from `v₀`.
pub fn connecting_subquivers_brute_force(ext: &ExtendedSetting, limits: &Limits) -> Result<Vec<u64>> {
    let k = ext.arrow_count();
    if k > limits.max_subset_arrows {
        return Err(Error::BudgetExceeded {
            what: "exhaustive subquiver enumeration",
            limit: limits.max_subset_arrows as u64,
        });
    }
    let mut counter = limits.counter("exhaustive subquiver enumeration");
    let mut out = Vec::new();
    for mask in 0u64..(1 << k) {
        counter.tick()?;
        if reachable(&ext.quiver, 0, |i| mask >> i & 1 == 1).iter().all(|&r| r) {
            out.push(mask);
        }
    }
    Ok(out)
}

/// Minimal elements (under inclusion) of a family of arrow masks.
pub fn minimal_masks(masks: &[u64]) -> Vec<u64> {
    let set: std::collections::HashSet<u64> = masks.iter().copied().collect();
    masks
        .iter()
        .copied()
        .filter(|&m| (0..64).filter(|i| m >> i & 1 == 1).all(|i| !set.contains(&(m & !(1 << i)))))
        .collect()
}

/// Moves an integer weight vector on the arrows of an acyclic quiver into its
/// class modulo characters with only non-negative entries:
/// `λ' = λ − Σ_{λ(a) < 0} λ(a)·ξ_a`, where `ξ_a` comes from the indicator of
/// the vertices reachable from `h(a)`.
pub fn nonneg_representative(q: &Quiver, lambda: &[i64]) -> Result<Vec<i64>> {
    if lambda.len() != q.arrow_count() {
        return Err(Error::InvalidExtension(format!(
            "weight vector has {} entries for {} arrows",
            lambda.len(),
            q.arrow_count()
        )));
    }
    let mut out = lambda.to_vec();
    for (a, &l) in lambda.iter().enumerate() {
        if l >= 0 {
            continue;
        }
        let zeta = reachable(q, q.arrow(a).head, |_| true);
        if zeta[q.arrow(a).tail] {
            return Err(Error::InvalidExtension("quiver has an oriented cycle".into()));
        }
        for (b, arrow) in q.arrows().iter().enumerate() {
            let xi = i64::from(zeta[arrow.head]) - i64::from(zeta[arrow.tail]);
            out[b] = xi.checked_mul(l).and_then(|x| out[b].checked_sub(x)).ok_or(Error::Overflow("weight vector"))?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn extension_examples() {
        let ab = Quiver::anonymous(2, &[(0, 1)]).unwrap();
        let e = extend(&ab, &[1, 1]).unwrap();
        assert_eq!(e.arrow_count(), 3);
        assert_eq!(e.quiver.arrows(), &[Arrow::new(1, 2), Arrow::new(0, 1), Arrow::new(0, 2)]);
        assert_eq!(e.theta, vec![-2, 1, 1]);
        assert_eq!(e.lattice_rank(), 1);

        let point = Quiver::anonymous(1, &[]).unwrap();
        let e = extend(&point, &[4]).unwrap();
        assert_eq!(e.arrow_count(), 4);
        assert!(e.quiver.arrows().iter().all(|a| *a == Arrow::new(0, 1)));

        let chain = Quiver::anonymous(3, &[(0, 1), (1, 2)]).unwrap();
        let e = extend(&chain, &[1, 1, 1]).unwrap();
        assert_eq!(e.arrow_count(), 5);
        assert_eq!(e.theta, vec![-3, 1, 1, 1]);
        assert_eq!(e.theta.iter().sum::<i64>(), 0);

        assert_eq!(extend(&ab, &[1, 0]), Err(Error::NonPositiveGamma(1)));
    }

    #[test]
    fn artin_connecting_subquivers() {
        let e = extend(&Quiver::anonymous(2, &[(0, 1)]).unwrap(), &[1, 1]).unwrap();
        // arrows: 0 = a->b, 1 = v0->a, 2 = v0->b
        let all = connecting_subquivers(&e, &lim()).unwrap();
        assert_eq!(all, vec![0b011, 0b110, 0b111]);
        assert_eq!(all, connecting_subquivers_brute_force(&e, &lim()).unwrap());
        assert_eq!(minimal_connecting_subquivers(&e, &lim()).unwrap(), vec![0b011, 0b110]);
        assert_eq!(minimal_masks(&all), vec![0b011, 0b110]);
    }

    #[test]
    fn parallel_arrows_connect_through_any_nonempty_subset() {
        let e = extend(&Quiver::anonymous(1, &[]).unwrap(), &[4]).unwrap();
        assert_eq!(connecting_subquivers(&e, &lim()).unwrap().len(), 15);
        assert_eq!(minimal_connecting_subquivers(&e, &lim()).unwrap().len(), 4);
    }

    #[test]
    fn budget_is_respected() {
        let e = extend(&Quiver::anonymous(1, &[]).unwrap(), &[4]).unwrap();
        assert!(matches!(
            connecting_subquivers_brute_force(&e, &Limits::with_node_limit(3)),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn nonneg_representative_example() {
        let e = extend(&Quiver::anonymous(2, &[(0, 1)]).unwrap(), &[1, 1]).unwrap();
        let out = nonneg_representative(&e.quiver, &[-2, 1, 0]).unwrap();
        // ξ for a->b: ζ = [b]; values on (a->b, v0->a, v0->b) = (1, 0, 1)
        assert_eq!(out, vec![0, 1, 2]);
    }
}
