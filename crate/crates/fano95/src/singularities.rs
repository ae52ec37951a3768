//! Singularity baskets of general members: cyclic quotient points at
//! coordinate vertices and along edges, normalization to the terminal form
//! `1/r(1,a,r−a)`, and the terminality decision.

use crate::rational::Rational;
use crate::weights::{monomials, WeightSystem};
use num::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A terminal cyclic quotient singularity `1/r(1,a,r−a)` with
/// `gcd(a,r) = 1` and the canonical representative `a ≤ r−a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct QuotientType {
    r: u32,
    a: u32,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QuotientError {
    #[error("group order must be at least 2, got {0}")]
    OrderTooSmall(u32),
    #[error("1/{r}({a}) is not in canonical form 1 <= a <= r-a with gcd(a,r)=1")]
    NotCanonical { r: u32, a: u32 },
}

impl QuotientType {
    pub fn new(r: u32, a: u32) -> Result<Self, QuotientError> {
        if r < 2 {
            return Err(QuotientError::OrderTooSmall(r));
        }
        if a == 0 || 2 * a > r || gcd(a, r) != 1 {
            return Err(QuotientError::NotCanonical { r, a });
        }
        Ok(Self { r, a })
    }

    /// Group order `r`.
    pub fn r(&self) -> u32 {
        self.r
    }

    /// The canonical weight `a`, with `a ≤ r−a`.
    pub fn a(&self) -> u32 {
        self.a
    }

    /// `r − a`.
    pub fn b(&self) -> u32 {
        self.r - self.a
    }

    /// The blow-up correction term `1/(r·a·(r−a))`.
    pub fn correction(&self) -> Rational {
        Rational::new(
            BigInt::from(1),
            BigInt::from(self.r as u64 * self.a as u64 * (self.r - self.a) as u64),
        )
    }
}

impl std::fmt::Display for QuotientType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "1/{}(1,{},{})", self.r, self.a, self.r - self.a)
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn mod_inverse(x: u32, m: u32) -> Option<u32> {
    // extended euclid over i64
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (m as i64, (x % m) as i64);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    if r != 1 {
        return None;
    }
    Some(t.rem_euclid(m as i64) as u32)
}

/// Outcome of normalizing a cyclic quotient `1/r(w₁,w₂,w₃)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormalizeOutcome {
    Terminal(QuotientType),
    /// Some transverse weight shares a factor with `r`: the fixed locus is
    /// positive-dimensional.
    NotIsolated,
    /// Isolated but not of the form `1/r(1,a,r−a)` under any choice of
    /// group generator.
    NotTerminal,
}

/// Normalizes `1/r(w₁,w₂,w₃)` (weights taken mod `r`). Scales by the unit
/// inverse of each coordinate in turn and accepts the first scaling whose
/// residues are `{1, a, r−a}`, returning the canonical `(r, min(a, r−a))`.
pub fn normalize_quotient(r: u32, transverse: [u32; 3]) -> NormalizeOutcome {
    assert!(r >= 2, "quotient order must be at least 2");
    let w: Vec<u32> = transverse.iter().map(|&x| x % r).collect();
    if w.iter().any(|&x| gcd(x, r) != 1) {
        // gcd(0, r) = r, so zero residues are caught here as well
        return NormalizeOutcome::NotIsolated;
    }
    for i in 0..3 {
        let u = mod_inverse(w[i], r).expect("coprime residue has an inverse");
        let scaled: Vec<u32> = w
            .iter()
            .map(|&x| (x as u64 * u as u64 % r as u64) as u32)
            .collect();
        let others: Vec<u32> = (0..3).filter(|&k| k != i).map(|k| scaled[k]).collect();
        if (others[0] + others[1]).is_multiple_of(r) {
            let a = others[0].min(r - others[0]);
            return NormalizeOutcome::Terminal(
                QuotientType::new(r, a).expect("normalized type is canonical"),
            );
        }
    }
    NormalizeOutcome::NotTerminal
}

/// Where a basket entry sits: a coordinate vertex of one of the four
/// nontrivial weights, or the interior of an edge between two of them.
/// Indices are 1-based over `(a₁,…,a₄)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Locus {
    Vertex(u8),
    Edge(u8, u8),
}

impl std::fmt::Display for Locus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Locus::Vertex(j) => write!(f, "vertex:{j}"),
            Locus::Edge(i, j) => write!(f, "edge:{i},{j}"),
        }
    }
}

/// One group of identical quotient points of the general member.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BasketEntry {
    pub qtype: QuotientType,
    pub count: u32,
    pub locus: Locus,
}

/// The multiset of quotient singularities of the general member, entries
/// sorted by `(r, a, locus)` with pairwise distinct loci.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Basket {
    pub entries: Vec<BasketEntry>,
}

impl Basket {
    /// Number of singular points counted with multiplicity.
    pub fn point_count(&self) -> u32 {
        self.entries.iter().map(|e| e.count).sum()
    }
}

/// Why a candidate weight system fails to have terminal singularities.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TerminalityObstruction {
    #[error("weights at positions {0},{1},{2} share the factor {3}")]
    TripleGcd(u8, u8, u8, u32),
    #[error("vertex {0} carries a non-isolated quotient")]
    VertexNotIsolated(u8),
    #[error("vertex {0} carries a non-terminal quotient")]
    VertexNotTerminal(u8),
    #[error("the edge {0},{1} lies on the general member")]
    EdgeContained(u8, u8),
    #[error("edge {0},{1} points are non-isolated quotients")]
    EdgeNotIsolated(u8, u8),
    #[error("edge {0},{1} points are non-terminal quotients")]
    EdgeNotTerminal(u8, u8),
}

/// Analysis of the coordinate vertex of the `j`-th nontrivial weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VertexOutcome {
    /// A pure power `x_j^m` of degree `d` exists, so the vertex misses `X`.
    NotOnX,
    Point(BasketEntry),
    NotIsolated,
    NotTerminal,
}

/// The vertex `P_j` (1-based `j`) of the general member. When on `X`, the
/// tangent monomial `x_j^m·x_k` with the smallest such `k` determines the
/// eliminated coordinate; the quotient acts on the remaining three.
pub fn vertex_point(ws: &WeightSystem, j: usize) -> VertexOutcome {
    let amb = ws.ambient();
    let d = ws.degree();
    let r = ws.weight(j);
    if d.is_multiple_of(r) {
        return VertexOutcome::NotOnX;
    }
    let mut tangent = None;
    for (k, &wk) in amb.iter().enumerate() {
        if k != j && d > wk && (d - wk).is_multiple_of(r) {
            tangent = Some(k);
            break;
        }
    }
    let Some(k) = tangent else {
        // cannot happen for quasismooth input; treat as a degenerate vertex
        return VertexOutcome::NotTerminal;
    };
    let transverse: Vec<u32> = (0..5)
        .filter(|&t| t != j && t != k)
        .map(|t| amb[t])
        .collect();
    match normalize_quotient(r, [transverse[0], transverse[1], transverse[2]]) {
        NormalizeOutcome::Terminal(qt) => VertexOutcome::Point(BasketEntry {
            qtype: qt,
            count: 1,
            locus: Locus::Vertex(j as u8),
        }),
        NormalizeOutcome::NotIsolated => VertexOutcome::NotIsolated,
        NormalizeOutcome::NotTerminal => VertexOutcome::NotTerminal,
    }
}

/// Analysis of the edge between the `i`-th and `j`-th nontrivial weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EdgeOutcome {
    /// `gcd(aᵢ,a_j) = 1`: interior edge points are smooth points of the
    /// ambient space.
    TrivialStabilizer,
    /// No degree-d monomial in `xᵢ,x_j`: the edge lies on the general
    /// member, which is then singular along it.
    Contained,
    /// `None` when the restriction has no interior zeros (a single monomial).
    Points(Option<BasketEntry>),
    NotIsolated,
    NotTerminal,
}

/// Interior quotient points on the edge `i < j` (1-based indices over the
/// nontrivial weights). The count is one less than the number of degree-d
/// monomials in the two edge variables: their exponents form an arithmetic
/// progression and the general restriction has exactly that many simple
/// interior zeros.
pub fn edge_points(ws: &WeightSystem, i: usize, j: usize) -> EdgeOutcome {
    assert!(i < j && (1..=4).contains(&i) && (1..=4).contains(&j));
    let (ai, aj) = (ws.weight(i), ws.weight(j));
    let h = gcd(ai, aj);
    if h == 1 {
        return EdgeOutcome::TrivialStabilizer;
    }
    let n = monomials(&[ai, aj], ws.degree()).len() as u32;
    if n == 0 {
        return EdgeOutcome::Contained;
    }
    if n == 1 {
        return EdgeOutcome::Points(None);
    }
    let amb = ws.ambient();
    let transverse: Vec<u32> = (0..5)
        .filter(|&t| t != i && t != j)
        .map(|t| amb[t])
        .collect();
    match normalize_quotient(h, [transverse[0], transverse[1], transverse[2]]) {
        NormalizeOutcome::Terminal(qt) => EdgeOutcome::Points(Some(BasketEntry {
            qtype: qt,
            count: n - 1,
            locus: Locus::Edge(i as u8, j as u8),
        })),
        NormalizeOutcome::NotIsolated => EdgeOutcome::NotIsolated,
        NormalizeOutcome::NotTerminal => EdgeOutcome::NotTerminal,
    }
}

/// The full basket of the general member, or the first obstruction to
/// terminality. Any three weights sharing a factor force a singular stratum
/// of positive dimension and are rejected outright.
pub fn basket(ws: &WeightSystem) -> Result<Basket, TerminalityObstruction> {
    let a = ws.weights();
    for i in 0..4 {
        for j in i + 1..4 {
            for k in j + 1..4 {
                let g = gcd(gcd(a[i], a[j]), a[k]);
                if g > 1 {
                    return Err(TerminalityObstruction::TripleGcd(
                        i as u8 + 1,
                        j as u8 + 1,
                        k as u8 + 1,
                        g,
                    ));
                }
            }
        }
    }
    let mut entries = Vec::new();
    for j in 1..=4 {
        match vertex_point(ws, j) {
            VertexOutcome::NotOnX => {}
            VertexOutcome::Point(e) => entries.push(e),
            VertexOutcome::NotIsolated => {
                return Err(TerminalityObstruction::VertexNotIsolated(j as u8))
            }
            VertexOutcome::NotTerminal => {
                return Err(TerminalityObstruction::VertexNotTerminal(j as u8))
            }
        }
    }
    for i in 1..=4 {
        for j in i + 1..=4 {
            match edge_points(ws, i, j) {
                EdgeOutcome::TrivialStabilizer | EdgeOutcome::Points(None) => {}
                EdgeOutcome::Points(Some(e)) => entries.push(e),
                EdgeOutcome::Contained => {
                    return Err(TerminalityObstruction::EdgeContained(i as u8, j as u8))
                }
                EdgeOutcome::NotIsolated => {
                    return Err(TerminalityObstruction::EdgeNotIsolated(i as u8, j as u8))
                }
                EdgeOutcome::NotTerminal => {
                    return Err(TerminalityObstruction::EdgeNotTerminal(i as u8, j as u8))
                }
            }
        }
    }
    entries.sort_by_key(|e| (e.qtype.r(), e.qtype.a(), e.locus));
    Ok(Basket { entries })
}

/// True iff the general member has only terminal (isolated cyclic quotient)
/// singularities.
pub fn is_terminal_general(ws: &WeightSystem) -> bool {
    basket(ws).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::ws;

    fn qt(r: u32, a: u32) -> QuotientType {
        QuotientType::new(r, a).unwrap()
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(
            normalize_quotient(5, [1, 7, 8]),
            NormalizeOutcome::Terminal(qt(5, 2))
        );
        assert_eq!(
            normalize_quotient(10, [1, 3, 7]),
            NormalizeOutcome::Terminal(qt(10, 3))
        );
        // a weight sharing a factor with r fixes a curve
        assert_eq!(
            normalize_quotient(4, [2, 1, 3]),
            NormalizeOutcome::NotIsolated
        );
        // isolated but not of the terminal form
        assert_eq!(
            normalize_quotient(7, [2, 3, 3]),
            NormalizeOutcome::NotTerminal
        );
    }

    #[test]
    fn normalize_idempotent_exhaustive() {
        for r in 2..=50u32 {
            for a in 1..=r / 2 {
                if gcd(a, r) != 1 || 2 * a == r {
                    continue;
                }
                assert_eq!(
                    normalize_quotient(r, [1, a, r - a]),
                    NormalizeOutcome::Terminal(qt(r, a)),
                    "1/{r}(1,{a},{})",
                    r - a
                );
            }
        }
    }

    #[test]
    fn vertex_examples() {
        // weight-5 vertex of X_36 in P(1,1,5,12,18): tangent monomial z^7 y
        let w = ws([1, 5, 12, 18]);
        match vertex_point(&w, 2) {
            VertexOutcome::Point(e) => assert_eq!(e.qtype, qt(5, 2)),
            other => panic!("unexpected {other:?}"),
        }
        // weight-10 vertex of X_24 in P(1,3,4,7,10): tangent monomial w^2 z
        let w = ws([3, 4, 7, 10]);
        match vertex_point(&w, 4) {
            VertexOutcome::Point(e) => assert_eq!(e.qtype, qt(10, 3)),
            other => panic!("unexpected {other:?}"),
        }
        // weight-9 vertex of X_18 in P(1,1,2,6,9) is off X: w^2 has degree 18
        assert_eq!(vertex_point(&ws([1, 2, 6, 9]), 4), VertexOutcome::NotOnX);
    }

    #[test]
    fn edge_examples() {
        // the (2,2)-edge of X_12 in P(1,2,2,3,5): six half points
        match edge_points(&ws([2, 2, 3, 5]), 1, 2) {
            EdgeOutcome::Points(Some(e)) => {
                assert_eq!((e.qtype, e.count), (qt(2, 1), 6));
            }
            other => panic!("unexpected {other:?}"),
        }
        // the (12,18)-edge of X_36 in P(1,1,5,12,18): one 1/6(1,1,5) point
        match edge_points(&ws([1, 5, 12, 18]), 3, 4) {
            EdgeOutcome::Points(Some(e)) => {
                assert_eq!((e.qtype, e.count), (qt(6, 1), 1));
            }
            other => panic!("unexpected {other:?}"),
        }
        // the (6,9)-edge of X_18 in P(1,1,2,6,9): monomials t^3, w^2 only
        match edge_points(&ws([1, 2, 6, 9]), 3, 4) {
            EdgeOutcome::Points(Some(e)) => {
                assert_eq!((e.qtype, e.count), (qt(3, 1), 1));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(
            edge_points(&ws([2, 3, 4, 5]), 2, 4),
            EdgeOutcome::TrivialStabilizer
        );
    }

    #[test]
    fn basket_examples() {
        let b = basket(&ws([1, 2, 2, 3])).unwrap();
        let got: Vec<_> = b.entries.iter().map(|e| (e.qtype, e.count)).collect();
        assert_eq!(got, vec![(qt(2, 1), 4), (qt(3, 1), 1)]);

        let b = basket(&ws([1, 5, 12, 18])).unwrap();
        let got: Vec<_> = b.entries.iter().map(|e| (e.qtype, e.count)).collect();
        assert_eq!(got, vec![(qt(5, 2), 1), (qt(6, 1), 1)]);

        // derived by direct monomial counts: vertex 10 off X via w^2, the
        // (4,10)-edge carries one half point, the (5,10)-edge two 1/5(1,1,4)
        let b = basket(&ws([1, 4, 5, 10])).unwrap();
        let got: Vec<_> = b.entries.iter().map(|e| (e.qtype, e.count)).collect();
        assert_eq!(got, vec![(qt(2, 1), 1), (qt(5, 1), 2)]);
    }

    #[test]
    fn basket_is_pure_and_reproducible() {
        let w = ws([2, 3, 4, 5]);
        assert_eq!(basket(&w), basket(&w));
    }

    #[test]
    fn terminality_examples() {
        assert!(is_terminal_general(&ws([1, 2, 2, 3])));
        // three even weights share the factor 2
        assert!(!is_terminal_general(&ws([2, 2, 4, 5])));
        assert_eq!(
            basket(&ws([2, 2, 4, 5])).unwrap_err(),
            TerminalityObstruction::TripleGcd(1, 2, 3, 2)
        );
        // smooth quartic: empty basket
        let b = basket(&ws([1, 1, 1, 1])).unwrap();
        assert!(b.entries.is_empty());
        assert!(is_terminal_general(&ws([1, 1, 1, 1])));
    }

    #[test]
    fn contained_edge_is_rejected() {
        // P(1,2,3,5,9), d=19: no monomial in the (3,9)-variables, so the
        // edge lies on the general member; the weight-3 vertex on that edge
        // already fails isolation during the vertex pass
        assert_eq!(edge_points(&ws([2, 3, 5, 9]), 2, 4), EdgeOutcome::Contained);
        assert_eq!(
            basket(&ws([2, 3, 5, 9])).unwrap_err(),
            TerminalityObstruction::VertexNotIsolated(2)
        );
        assert!(!is_terminal_general(&ws([2, 3, 5, 9])));
    }

    #[test]
    fn edge_count_formula() {
        // count = #monomials - 1 >= 0 on every gcd>1 edge of a few systems
        for a in [[2u32, 2, 3, 5], [1, 4, 5, 10], [2, 3, 4, 5], [3, 4, 7, 10]] {
            let w = ws(a);
            for i in 1..=4 {
                for j in i + 1..=4 {
                    if let EdgeOutcome::Points(Some(e)) = edge_points(&w, i, j) {
                        let n = monomials(&[w.weight(i), w.weight(j)], w.degree()).len() as u32;
                        assert_eq!(e.count, n - 1);
                    }
                }
            }
        }
    }
}
