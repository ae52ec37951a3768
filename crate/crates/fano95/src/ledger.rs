//! Family-index claims: each claim pairs a computable predicate over the
//! catalog with an asserted set of ordinals from the source analysis, and
//! evaluation reports the exact set difference. Known anomalies are
//! deviations that are reproducible from the arithmetic and individually
//! justified; they downgrade a mismatch to an anomaly match.

use crate::blowup::{kw3, InvolutionKind, Sign};
use crate::catalog::{Catalog, FamilyRecord};
use crate::fm::{check_certificate, fm_feasibility, satisfies, FeasibilityResult};
use crate::golden::{golden_entries, ExpectedVerdict};
use crate::rational::rat;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimStatus {
    Match,
    AnomalyMatch,
    Mismatch,
}

/// Outcome of one claim evaluation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimResult {
    pub id: String,
    pub status: ClaimStatus,
    pub computed: BTreeSet<u32>,
    pub missing: BTreeSet<u32>,
    pub extra: BTreeSet<u32>,
    pub anchor: String,
    /// Soft claims are reported but never fail verification.
    pub soft: bool,
    pub note: String,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown claim id `{0}`")]
pub struct UnknownClaim(pub String);

pub const CLAIM_IDS: [&str; 13] = [
    "C-95", "C-G6", "C-NEG", "C-ZERO", "C-SR", "C-ELL", "C-Q1", "C-Q2", "C-SM19", "C-SPLIT",
    "C-ANCHOR", "C-45", "C-421",
];

const NEG_SET: [u32; 4] = [75, 84, 87, 93];
/// The asserted zero-degree exclusion list, kept verbatim; see the C-ZERO
/// anomaly notes for the 80/82 discrepancy.
const ZERO_LIST: [u32; 28] = [
    11, 14, 19, 22, 28, 34, 37, 39, 49, 52, 53, 57, 59, 64, 66, 70, 72, 73, 78, 80, 81, 86, 88, 89,
    90, 92, 94, 95,
];
const SR_LIST: [u32; 16] = [
    11, 21, 29, 35, 50, 51, 55, 62, 63, 67, 71, 77, 82, 83, 85, 91,
];
const ELL_LIST: [u32; 8] = [7, 20, 23, 36, 40, 44, 61, 76];
const Q1_LIST: [u32; 18] = [
    6, 7, 8, 9, 12, 13, 16, 15, 17, 20, 25, 26, 30, 36, 31, 41, 47, 54,
];
const Q2_LIST: [u32; 24] = [
    13, 18, 23, 24, 27, 32, 38, 40, 42, 43, 44, 45, 46, 48, 56, 58, 60, 61, 65, 68, 69, 74, 76, 79,
];
const SM19_LIST: [u32; 19] = [
    6, 7, 8, 9, 10, 12, 13, 14, 16, 18, 19, 20, 22, 23, 24, 25, 32, 33, 38,
];
const SPLIT_LIST: [u32; 5] = [23, 40, 44, 61, 76];
const L421_LIST: [u32; 21] = [
    8, 12, 13, 16, 20, 24, 25, 26, 31, 33, 36, 38, 46, 47, 48, 54, 56, 58, 65, 74, 79,
];
/// Ordinal-to-weights anchors that pin the catalog ordering.
pub const ANCHOR_PAIRS: [(u32, [u32; 4]); 11] = [
    (6, [1, 1, 2, 4]),
    (7, [1, 2, 2, 3]),
    (14, [1, 1, 4, 6]),
    (18, [2, 2, 3, 5]),
    (23, [2, 3, 4, 5]),
    (36, [1, 4, 6, 7]),
    (38, [2, 3, 5, 8]),
    (43, [2, 4, 5, 9]),
    (47, [1, 5, 7, 8]),
    (58, [3, 4, 7, 10]),
    (82, [1, 5, 12, 18]),
];

fn set(xs: &[u32]) -> BTreeSet<u32> {
    xs.iter().copied().collect()
}

fn has_pos_point(r: &FamilyRecord, pred: impl Fn(&crate::catalog::PointAnalysis) -> bool) -> bool {
    r.points.iter().any(|p| p.sign == Sign::Pos && pred(p))
}

fn has_tagged_pos_point(r: &FamilyRecord) -> bool {
    has_pos_point(r, |p| !p.involutions.is_empty())
}

/// Every ordinal at least 6 whose family has every point with the given
/// sign condition.
fn zero_like(catalog: &Catalog, allow_zero: bool) -> BTreeSet<u32> {
    catalog
        .records()
        .iter()
        .filter(|r| r.gimel >= 6)
        .filter(|r| {
            r.points.iter().all(|p| match p.sign {
                Sign::Neg => true,
                Sign::Zero => allow_zero,
                Sign::Pos => false,
            })
        })
        .map(|r| r.gimel)
        .collect()
}

fn survivors(catalog: &Catalog) -> BTreeSet<u32> {
    let zero = zero_like(catalog, true);
    catalog
        .records()
        .iter()
        .filter(|r| r.gimel >= 6 && !zero.contains(&r.gimel))
        .map(|r| r.gimel)
        .collect()
}

fn superrigid_computed(catalog: &Catalog) -> BTreeSet<u32> {
    let surv = survivors(catalog);
    catalog
        .records()
        .iter()
        .filter(|r| surv.contains(&r.gimel) && !has_tagged_pos_point(r))
        .map(|r| r.gimel)
        .collect()
}

fn quadratic_set(catalog: &Catalog, base: &BTreeSet<u32>, unit_a: bool) -> BTreeSet<u32> {
    catalog
        .records()
        .iter()
        .filter(|r| base.contains(&r.gimel))
        .filter(|r| {
            has_pos_point(r, |p| {
                (p.qtype.a() == 1) == unit_a
                    && p.involutions
                        .iter()
                        .any(|t| t.kind == InvolutionKind::Quadratic)
            })
        })
        .map(|r| r.gimel)
        .collect()
}

struct Evaluation {
    computed: BTreeSet<u32>,
    expected: BTreeSet<u32>,
    anomalies: BTreeSet<u32>,
    anchor: &'static str,
    soft: bool,
    note: String,
}

fn diff_status(ev: Evaluation, id: &str) -> ClaimResult {
    let missing: BTreeSet<u32> = ev.expected.difference(&ev.computed).copied().collect();
    let extra: BTreeSet<u32> = ev.computed.difference(&ev.expected).copied().collect();
    let status = if missing.is_empty() && extra.is_empty() {
        ClaimStatus::Match
    } else if missing.union(&extra).all(|g| ev.anomalies.contains(g)) {
        ClaimStatus::AnomalyMatch
    } else {
        ClaimStatus::Mismatch
    };
    ClaimResult {
        id: id.to_string(),
        status,
        computed: ev.computed,
        missing,
        extra,
        anchor: ev.anchor.to_string(),
        soft: ev.soft,
        note: ev.note,
    }
}

/// Evaluates one claim against the catalog.
pub fn evaluate_claim(catalog: &Catalog, id: &str) -> Result<ClaimResult, UnknownClaim> {
    let all: BTreeSet<u32> = catalog.records().iter().map(|r| r.gimel).collect();
    let ev = match id {
        "C-95" => Evaluation {
            computed: all,
            expected: (1..=95).collect(),
            anomalies: BTreeSet::new(),
            anchor: "the catalog has exactly 95 families with consecutive ordinals",
            soft: false,
            note: String::new(),
        },
        "C-G6" => Evaluation {
            computed: catalog
                .records()
                .iter()
                .filter(|r| r.kx3 <= rat(1, 1))
                .map(|r| r.gimel)
                .collect(),
            expected: (6..=95).collect(),
            anomalies: BTreeSet::new(),
            anchor: "anticanonical degree at most 1 exactly from ordinal 6 on",
            soft: false,
            note: String::new(),
        },
        "C-NEG" => Evaluation {
            computed: zero_like(catalog, false),
            expected: set(&NEG_SET),
            anomalies: BTreeSet::new(),
            anchor: "families whose every point has negative blow-up degree",
            soft: false,
            note: String::new(),
        },
        "C-ZERO" => Evaluation {
            computed: zero_like(catalog, true),
            expected: NEG_SET.iter().chain(ZERO_LIST.iter()).copied().collect(),
            anomalies: set(&[80, 82]),
            anchor: "families whose every point has nonpositive blow-up degree",
            soft: false,
            note: "computed-in 82: both its points have blow-up degree exactly 0; \
                   computed-out 80: its 1/10(1,3,7) point has blow-up degree 1/84 > 0. \
                   The asserted list carries 80 in place of 82; the swap is reproducible \
                   from the degrees above."
                .to_string(),
        },
        "C-SR" => Evaluation {
            computed: superrigid_computed(catalog),
            expected: set(&SR_LIST),
            anomalies: set(&[10, 11, 80, 82]),
            anchor: "surviving families with no involution at a positive-degree point",
            soft: false,
            note: "missing 11 and 82: both already land in the nonpositive-degree set, so \
                   they are not survivors here. extra 10: its only positive point 1/3(1,1,2) \
                   has the cubic numerology 10 = 3*3 + 1 but no second center, so no \
                   involution is detected and the family has nowhere else to go. extra 80: \
                   displaced by the 80/82 swap recorded under C-ZERO."
                .to_string(),
        },
        "C-ELL" => {
            let surv = survivors(catalog);
            let sr = superrigid_computed(catalog);
            let computed = catalog
                .records()
                .iter()
                .filter(|r| surv.contains(&r.gimel) && !sr.contains(&r.gimel))
                .filter(|r| {
                    has_pos_point(r, |p| {
                        p.involutions
                            .iter()
                            .any(|t| t.kind == InvolutionKind::Elliptic)
                    })
                })
                .map(|r| r.gimel)
                .collect();
            Evaluation {
                computed,
                expected: set(&ELL_LIST),
                anomalies: BTreeSet::new(),
                anchor: "survivors with an elliptic involution at a positive-degree point",
                soft: false,
                note: String::new(),
            }
        }
        "C-Q1" | "C-Q2" => {
            let unit = id == "C-Q1";
            let surv = survivors(catalog);
            let sr = superrigid_computed(catalog);
            let after_sr: BTreeSet<u32> = surv.difference(&sr).copied().collect();
            let conv1 = quadratic_set(catalog, &surv, unit);
            let conv2 = quadratic_set(catalog, &after_sr, unit);
            let agree = conv1 == conv2;
            Evaluation {
                computed: conv1,
                expected: set(if unit { &Q1_LIST[..] } else { &Q2_LIST[..] }),
                anomalies: if unit {
                    BTreeSet::new()
                } else {
                    set(&[25, 33])
                },
                anchor: if unit {
                    "survivors with a quadratic involution at a positive-degree point of \
                     type 1/r(1,1,r-1)"
                } else {
                    "survivors with a quadratic involution at a positive-degree point of \
                     type 1/r(1,a,r-a), a > 1"
                },
                soft: false,
                note: format!(
                    "both survivor conventions (every family outside the \
                     nonpositive-degree set, or additionally dropping the \
                     no-involution families) {}{}",
                    if agree {
                        "give the same set"
                    } else {
                        "give different sets; the first is reported"
                    },
                    if unit {
                        String::new()
                    } else {
                        "; extra 25 and 33: the numerology d = 2r + a_j holds at their \
                         1/7(1,3,4), 1/5(1,2,3) and 1/7(1,2,5) points and the detector \
                         reports it, but the asserted list excludes those centers on \
                         geometric grounds outside this calculator's arithmetic scope"
                            .to_string()
                    }
                ),
            }
        }
        "C-SM19" => {
            let computed = catalog
                .records()
                .iter()
                .filter(|r| r.gimel >= 6)
                .filter(|r| {
                    let a = r.ws.weights();
                    let d = r.ws.degree();
                    let kx3 = &r.kx3;
                    let one = rat(1, 1);
                    let c1 =
                        d % a[3] == 0 && a[0] != a[1] && rat((a[1] * a[2]) as i64, 1) * kx3 <= one;
                    let c2 =
                        d % a[3] == 0 && a[0] == 1 && a[1] != 1 && rat(a[2] as i64, 1) * kx3 <= one;
                    let c3 = a[0] != a[1] && rat((a[0] * a[3]) as i64, 1) * kx3 <= one;
                    !(c1 || c2 || c3)
                })
                .map(|r| r.gimel)
                .collect();
            Evaluation {
                computed,
                expected: set(&SM19_LIST),
                anomalies: set(&[28]),
                anchor: "families outside the reach of the three smooth-point bounds",
                soft: false,
                note: "extra 28: weights (3,3,4,5) have a_1 = a_2, which escapes all three \
                       stated hypotheses, and its numeric data a_2*a_3*(-K^3) = 1 ties with \
                       family 22 = (2,2,3,7), which the asserted list keeps; no reading of \
                       the hypotheses separates them, so 28 is carried as a reproducible \
                       anomaly."
                    .to_string(),
            }
        }
        "C-SPLIT" => {
            let computed = SPLIT_LIST
                .iter()
                .copied()
                .filter(|&g| {
                    let Ok(r) = catalog.family(g) else {
                        return false;
                    };
                    let (Some((e3, _)), Some((e4, _))) =
                        (r.vertex_analysis(3), r.vertex_analysis(4))
                    else {
                        return false;
                    };
                    kw3(&r.kx3, e3.qtype, e4.qtype).is_zero()
                })
                .collect();
            Evaluation {
                computed,
                expected: set(&SPLIT_LIST),
                anomalies: BTreeSet::new(),
                anchor: "the anticanonical degree splits over the two largest-weight vertices",
                soft: false,
                note: String::new(),
            }
        }
        "C-ANCHOR" => {
            let computed = ANCHOR_PAIRS
                .iter()
                .filter(|(g, w)| {
                    catalog
                        .family(*g)
                        .map(|r| r.ws.weights() == *w)
                        .unwrap_or(false)
                })
                .map(|(g, _)| *g)
                .collect();
            Evaluation {
                computed,
                expected: ANCHOR_PAIRS.iter().map(|(g, _)| *g).collect(),
                anomalies: BTreeSet::new(),
                anchor: "ordinal-to-weights anchors pinning the catalog order",
                soft: false,
                note: "anchor 43 is encoded as weights (2,4,5,9) of degree 20; the printed \
                       source has (2,3,5,9), which sums to 19 and cannot carry an \
                       anticanonical degree-20 hypersurface, while its own argument uses \
                       the degree -K^3 = 1/18 = 20/(2*4*5*9)."
                    .to_string(),
            }
        }
        "C-45" => {
            let computed: BTreeSet<u32> = catalog
                .records()
                .iter()
                .filter(|r| r.points.iter().any(|p| !p.involutions.is_empty()))
                .map(|r| r.gimel)
                .collect();
            let count = computed.len();
            Evaluation {
                computed,
                expected: BTreeSet::new(),
                anomalies: BTreeSet::new(),
                anchor: "exactly 45 families carry a birational involution",
                soft: true,
                note: format!("computed count {count}, asserted count 45"),
            }
        }
        "C-421" => {
            let surv = survivors(catalog);
            let sr = superrigid_computed(catalog);
            let computed = catalog
                .records()
                .iter()
                .filter(|r| surv.contains(&r.gimel) && !sr.contains(&r.gimel))
                .filter(|r| has_pos_point(r, |p| !p.children.is_empty()))
                .map(|r| r.gimel)
                .collect();
            Evaluation {
                computed,
                expected: set(&L421_LIST),
                anomalies: BTreeSet::new(),
                anchor: "survivors whose blow-up at a positive-degree point is singular \
                         (computable superset: some chart order exceeds 1)",
                soft: true,
                note: "informational: the asserted list additionally uses positivity facts \
                       about the second blow-up that are outside arithmetic scope, so the \
                       computed set is only a superset"
                    .to_string(),
            }
        }
        other => return Err(UnknownClaim(other.to_string())),
    };
    let mut res = diff_status(ev, id);
    if id == "C-45" {
        // count claim: the set diff machinery does not apply
        res.missing.clear();
        res.extra.clear();
        res.status = if res.computed.len() == 45 {
            ClaimStatus::Match
        } else {
            ClaimStatus::Mismatch
        };
    }
    if id == "C-421" {
        // informational: never better than a structured discrepancy record
        res.status = if res.missing.is_empty() {
            ClaimStatus::Match
        } else {
            ClaimStatus::Mismatch
        };
    }
    Ok(res)
}

/// One golden inequality system in the report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FmReport {
    pub id: String,
    pub expected: String,
    pub verdict: String,
    pub certificate_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub claims: Vec<ClaimResult>,
    pub fm: Vec<FmReport>,
    pub overall: ClaimStatus,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// True when no hard claim mismatches.
    pub fn passed(&self) -> bool {
        self.overall != ClaimStatus::Mismatch
    }
}

/// Evaluates every claim and every golden system.
pub fn verify_all(catalog: &Catalog) -> VerificationReport {
    let claims: Vec<ClaimResult> = CLAIM_IDS
        .iter()
        .map(|id| evaluate_claim(catalog, id).expect("registry ids are valid"))
        .collect();
    let fm = golden_entries()
        .iter()
        .map(|e| {
            let (verdict, certificate_ok) = match fm_feasibility(&e.system) {
                FeasibilityResult::Infeasible { certificate } => (
                    "infeasible",
                    check_certificate(&e.system, &certificate).unwrap_or(false),
                ),
                FeasibilityResult::Feasible { witness } => {
                    ("feasible", satisfies(&e.system, &witness))
                }
            };
            FmReport {
                id: e.id.to_string(),
                expected: match e.expected {
                    ExpectedVerdict::Infeasible => "infeasible".to_string(),
                },
                verdict: verdict.to_string(),
                certificate_ok,
            }
        })
        .collect();
    let overall = claims
        .iter()
        .filter(|c| !c.soft)
        .map(|c| c.status)
        .max()
        .unwrap_or(ClaimStatus::Match);
    VerificationReport {
        claims,
        fm,
        overall,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::enumerate_families;
    use std::sync::OnceLock;

    fn catalog() -> &'static Catalog {
        static CAT: OnceLock<Catalog> = OnceLock::new();
        CAT.get_or_init(|| enumerate_families(100).expect("default catalog"))
    }

    fn claim(id: &str) -> ClaimResult {
        evaluate_claim(catalog(), id).unwrap()
    }

    #[test]
    fn g6_matches() {
        let c = claim("C-G6");
        assert_eq!(c.status, ClaimStatus::Match);
        assert_eq!(c.computed, (6..=95).collect());
    }

    #[test]
    fn neg_matches() {
        let c = claim("C-NEG");
        assert_eq!(c.status, ClaimStatus::Match);
        assert_eq!(c.computed, set(&NEG_SET));
    }

    #[test]
    fn zero_is_an_anomaly_match() {
        let c = claim("C-ZERO");
        assert_eq!(c.status, ClaimStatus::AnomalyMatch);
        assert_eq!(c.extra, set(&[82]));
        assert_eq!(c.missing, set(&[80]));
        // 82 really computes to two zero-degree points
        let r = catalog().family(82).unwrap();
        assert!(r.points.iter().all(|p| p.sign == Sign::Zero));
        // 80 really has a positive-degree point
        let r = catalog().family(80).unwrap();
        assert!(r.points.iter().any(|p| p.sign == Sign::Pos));
    }

    #[test]
    fn sr_is_an_anomaly_match() {
        let c = claim("C-SR");
        assert_eq!(c.status, ClaimStatus::AnomalyMatch);
        assert_eq!(c.missing, set(&[11, 82]));
        assert_eq!(c.extra, set(&[10, 80]));
    }

    #[test]
    fn ell_matches_exactly() {
        let c = claim("C-ELL");
        assert_eq!(c.status, ClaimStatus::Match);
        assert_eq!(c.computed, set(&ELL_LIST));
    }

    #[test]
    fn quadratic_claims() {
        let q1 = claim("C-Q1");
        assert_eq!(q1.status, ClaimStatus::Match);
        let q2 = claim("C-Q2");
        assert_eq!(q2.status, ClaimStatus::AnomalyMatch);
        assert_eq!(q2.extra, set(&[25, 33]));
        assert!(q2.missing.is_empty());
    }

    #[test]
    fn sm19_is_an_anomaly_match() {
        let c = claim("C-SM19");
        assert_eq!(c.status, ClaimStatus::AnomalyMatch);
        assert_eq!(c.extra, set(&[28]));
        assert!(c.missing.is_empty());
    }

    #[test]
    fn split_matches() {
        let c = claim("C-SPLIT");
        assert_eq!(c.status, ClaimStatus::Match);
        assert_eq!(c.computed, set(&SPLIT_LIST));
    }

    #[test]
    fn anchors_match() {
        assert_eq!(claim("C-ANCHOR").status, ClaimStatus::Match);
    }

    #[test]
    fn involution_count_is_45() {
        let c = claim("C-45");
        assert!(c.soft);
        assert_eq!(c.computed.len(), 45);
        assert_eq!(c.status, ClaimStatus::Match);
    }

    #[test]
    fn l421_is_a_superset() {
        let c = claim("C-421");
        assert!(c.soft);
        assert!(c.missing.is_empty());
        assert!(c.computed.is_superset(&set(&L421_LIST)));
    }

    #[test]
    fn negative_control_tampered_expectation() {
        // forging a different expected set must surface as a mismatch: the
        // G6 predicate against the NEG expectation cannot match
        let g6 = claim("C-G6").computed;
        let forged = Evaluation {
            computed: g6,
            expected: set(&NEG_SET),
            anomalies: BTreeSet::new(),
            anchor: "forged",
            soft: false,
            note: String::new(),
        };
        let res = diff_status(forged, "forged");
        assert_eq!(res.status, ClaimStatus::Mismatch);
        assert!(!res.missing.is_empty() || !res.extra.is_empty());
    }

    #[test]
    fn unknown_claim_id() {
        assert!(evaluate_claim(catalog(), "C-NOPE").is_err());
    }

    #[test]
    fn report_round_trips_and_passes() {
        let report = verify_all(catalog());
        assert!(report.passed());
        assert_ne!(report.overall, ClaimStatus::Mismatch);
        let parsed = VerificationReport::from_json(&report.to_json()).unwrap();
        assert_eq!(parsed, report);
        // golden systems: the satisfiable pair surfaces as a discrepancy
        // (verdict differs from expected) without failing verification
        let sys12 = report.fm.iter().find(|f| f.id == "SYS-12").unwrap();
        assert_eq!(sys12.verdict, "feasible");
        assert_eq!(sys12.expected, "infeasible");
        assert!(sys12.certificate_ok);
    }
}
