//! Recognisers for the small graph shapes that the classification theorems are
//! phrased in: single oriented cycles and two cycles sharing a path.

use crate::quiver::{is_strongly_connected, Quiver};

/// Vertices of a single oriented cycle in traversal order, starting at vertex 0.
/// A single loop gives `[v]`.
pub fn single_cycle(q: &Quiver) -> Option<Vec<usize>> {
    let n = q.vertex_count();
    if n == 0 || q.arrow_count() != n || !q.vertices().all(|v| q.in_degree(v) == 1 && q.out_degree(v) == 1) {
        return None;
    }
    let mut order = vec![0];
    let mut at = q.arrow(q.out_arrows(0).next()?).head;
    while at != 0 {
        order.push(at);
        at = q.arrow(q.out_arrows(at).next()?).head;
    }
    (order.len() == n).then_some(order)
}

/// Two oriented cycles that share the path `c_1 → … → c_s` and otherwise are
/// disjoint. Both branches leave `c_s` and return to `c_1`; their interior
/// vertices are listed in traversal order. When `s = 1` the shape is a
/// figure eight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoCycles {
    pub shared: Vec<usize>,
    pub branches: [Vec<usize>; 2],
}

impl TwoCycles {
    pub fn is_figure_eight(&self) -> bool {
        self.shared.len() == 1
    }
}

/// Parses a strongly connected quiver with `|A| = |V| + 1` as two cycles
/// glued along a path. Branches are ordered by the index of their first arrow.
pub fn two_cycles(q: &Quiver) -> Option<TwoCycles> {
    let n = q.vertex_count();
    if n == 0 || q.arrow_count() != n + 1 || !is_strongly_connected(q).ok()? {
        return None;
    }
    let merge = q.vertices().find(|&v| q.in_degree(v) == 2)?;
    let split = q.vertices().find(|&v| q.out_degree(v) == 2)?;
    let mut shared = vec![merge];
    let mut at = merge;
    while at != split {
        let mut outs = q.out_arrows(at);
        let a = outs.next()?;
        if outs.next().is_some() {
            return None;
        }
        at = q.arrow(a).head;
        if at == merge {
            return None;
        }
        shared.push(at);
    }
    let mut branches: [Vec<usize>; 2] = Default::default();
    for (slot, a) in q.out_arrows(split).enumerate().take(2) {
        let mut at = q.arrow(a).head;
        while at != merge {
            if branches[slot].len() > n {
                return None;
            }
            branches[slot].push(at);
            let mut outs = q.out_arrows(at);
            at = q.arrow(outs.next()?).head;
        }
    }
    let covered = shared.len() + branches[0].len() + branches[1].len();
    (covered == n).then_some(TwoCycles { shared, branches })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recognises_cycles() {
        let q = Quiver::anonymous(3, &[(0, 2), (2, 1), (1, 0)]).unwrap();
        assert_eq!(single_cycle(&q), Some(vec![0, 2, 1]));
        assert_eq!(single_cycle(&Quiver::anonymous(1, &[(0, 0)]).unwrap()), Some(vec![0]));
        let two = Quiver::anonymous(2, &[(0, 0), (1, 1)]).unwrap();
        assert_eq!(single_cycle(&two), None);
    }

    #[test]
    fn recognises_theta() {
        // shared 0 -> 1, branches 1 -> 2 -> 0 and 1 -> 0
        let q = Quiver::anonymous(3, &[(0, 1), (1, 2), (2, 0), (1, 0)]).unwrap();
        let t = two_cycles(&q).unwrap();
        assert_eq!(t.shared, vec![0, 1]);
        assert_eq!(t.branches, [vec![2], vec![]]);
    }

    #[test]
    fn recognises_figure_eight() {
        let q = Quiver::anonymous(3, &[(0, 1), (1, 0), (0, 2), (2, 0)]).unwrap();
        let t = two_cycles(&q).unwrap();
        assert!(t.is_figure_eight());
        assert_eq!(t.branches, [vec![1], vec![2]]);
        let loops = two_cycles(&Quiver::anonymous(1, &[(0, 0), (0, 0)]).unwrap()).unwrap();
        assert!(loops.branches.iter().all(|b| b.is_empty()));
    }

    #[test]
    fn rejects_other_shapes() {
        let q = Quiver::anonymous(2, &[(0, 1), (0, 1), (1, 0), (1, 0)]).unwrap();
        assert_eq!(two_cycles(&q), None);
        let path = Quiver::anonymous(3, &[(0, 1), (1, 2), (0, 2), (2, 2)]).unwrap();
        assert!(two_cycles(&path).is_none());
    }
}
