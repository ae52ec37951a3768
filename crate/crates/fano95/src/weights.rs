//! Weight systems of anticanonically embedded hypersurfaces in
//! `P(1,a₁,a₂,a₃,a₄)`, degree-d monomial enumeration, well-formedness, and
//! the quasismoothness test for general members.

use crate::rational::{rat_int, Rational};
use num::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The four nontrivial weights `(a₁,…,a₄)` of `P(1,a₁,…,a₄)` together with
/// the anticanonical degree `d = a₁+a₂+a₃+a₄`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct WeightSystem {
    weights: [u32; 4],
    degree: u32,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WeightError {
    #[error("weights must be positive, got {0:?}")]
    ZeroWeight([u32; 4]),
    #[error("weights must be ascending, got {0:?}")]
    NotSorted([u32; 4]),
}

impl WeightSystem {
    pub fn new(weights: [u32; 4]) -> Result<Self, WeightError> {
        if weights.contains(&0) {
            return Err(WeightError::ZeroWeight(weights));
        }
        if weights.windows(2).any(|w| w[0] > w[1]) {
            return Err(WeightError::NotSorted(weights));
        }
        Ok(Self {
            weights,
            degree: weights.iter().sum(),
        })
    }

    pub fn weights(&self) -> [u32; 4] {
        self.weights
    }

    /// Nontrivial weight by 1-based index `j ∈ 1..=4`.
    pub fn weight(&self, j: usize) -> u32 {
        self.weights[j - 1]
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// All five coordinate weights of the ambient space, `[1, a₁, a₂, a₃, a₄]`.
    pub fn ambient(&self) -> [u32; 5] {
        let a = self.weights;
        [1, a[0], a[1], a[2], a[3]]
    }

    /// Product `a₁a₂a₃a₄`.
    pub fn weight_product(&self) -> u64 {
        self.weights.iter().map(|&w| w as u64).product()
    }
}

/// Degree and anticanonical degree `−K³ = d/(a₁a₂a₃a₄)` of the general member.
pub fn degree_and_kx3(ws: &WeightSystem) -> (u32, Rational) {
    let kx3 = Rational::new(BigInt::from(ws.degree()), BigInt::from(ws.weight_product()));
    (ws.degree(), kx3)
}

/// Is `d` a nonnegative integer combination of `weights`?
pub(crate) fn representable(weights: &[u32], d: u32) -> bool {
    if d == 0 {
        return true;
    }
    match weights.len() {
        0 => false,
        1 => d.is_multiple_of(weights[0]),
        _ => {
            let w = weights[0];
            let rest = &weights[1..];
            let mut rem = d % w;
            // try d - k*w for k = d/w down to 0, i.e. remainders rem, rem+w, ...
            while rem <= d {
                if representable(rest, rem) {
                    return true;
                }
                rem += w;
            }
            false
        }
    }
}

/// All exponent vectors `e` with `Σ eₖ·weightsₖ = d`, in ascending
/// lexicographic order.
pub fn monomials(weights: &[u32], d: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; weights.len()];
    fn rec(weights: &[u32], d: u32, k: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k == weights.len() {
            if d == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if k + 1 == weights.len() {
            if d.is_multiple_of(weights[k]) {
                cur[k] = d / weights[k];
                out.push(cur.clone());
                cur[k] = 0;
            }
            return;
        }
        for e in 0..=d / weights[k] {
            cur[k] = e;
            rec(weights, d - e * weights[k], k + 1, cur, out);
        }
        cur[k] = 0;
    }
    if !weights.is_empty() {
        rec(weights, d, 0, &mut cur, &mut out);
    }
    out
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `P(1,a₁..a₄)` is well formed iff no four of the five weights share a
/// common factor; with the implicit weight 1 this reduces to
/// `gcd(a₁,a₂,a₃,a₄) = 1`.
pub fn is_well_formed(ws: &WeightSystem) -> bool {
    let a = ws.weights();
    gcd(gcd(a[0], a[1]), gcd(a[2], a[3])) == 1
}

/// Quasismoothness of the general hypersurface of degree `d` in
/// `P(1,a₁..a₄)`, by the combinatorial subset criterion: for every nonempty
/// coordinate subset `I`, either a degree-d monomial purely in the variables
/// of `I` exists, or there are `|I|` monomials of the form
/// `(monomial in I)·x_e` with pairwise distinct `e ∉ I`.
///
/// The linear-cone degeneration `d = wₖ` cannot occur here since
/// `d = Σaᵢ > a₄ ≥ 1`.
pub fn is_quasismooth_general(ws: &WeightSystem) -> bool {
    let w = ws.ambient();
    let d = ws.degree();
    for mask in 1u32..32 {
        let mut sub = Vec::with_capacity(5);
        for (k, &wk) in w.iter().enumerate() {
            if mask & (1 << k) != 0 {
                sub.push(wk);
            }
        }
        if representable(&sub, d) {
            continue;
        }
        let need = sub.len();
        let mut distinct = 0;
        for (e, &we) in w.iter().enumerate() {
            if mask & (1 << e) == 0 && d > we && representable(&sub, d - we) {
                distinct += 1;
                if distinct >= need {
                    break;
                }
            }
        }
        if distinct < need {
            return false;
        }
    }
    true
}

/// Cheap necessary condition used to prune the enumeration scan: the
/// single-variable subset test for every nontrivial coordinate.
pub(crate) fn vertex_prescreen(a: [u32; 4], d: u32) -> bool {
    let w = [1, a[0], a[1], a[2], a[3]];
    #[allow(clippy::needless_range_loop)]
    for j in 0..4 {
        let r = a[j];
        if d.is_multiple_of(r) {
            continue;
        }
        let hit = (0..5).any(|k| k != j + 1 && d > w[k] && (d - w[k]).is_multiple_of(r));
        if !hit {
            return false;
        }
    }
    true
}

/// Convenience used throughout the tests.
pub fn ws(a: [u32; 4]) -> WeightSystem {
    WeightSystem::new(a).expect("valid weight system")
}

#[allow(dead_code)]
fn kx3_times_product(ws: &WeightSystem) -> Rational {
    let (_, kx3) = degree_and_kx3(ws);
    kx3 * rat_int(ws.weight_product() as i64)
}
