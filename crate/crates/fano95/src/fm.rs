//! Exact Fourier–Motzkin elimination over the rationals for mixed
//! strict/non-strict linear inequality systems, with rational feasibility
//! witnesses and machine-checkable nonnegative-combination infeasibility
//! certificates.

use crate::rational::{parse_rational, Rational};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    /// strict `<`
    Lt,
    /// `≤`
    Le,
}

/// One constraint `Σ coeffs·x REL rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// A finite system of strict and non-strict rational inequalities over named
/// variables. Equalities are stored as two `≤` constraints.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LinearSystem {
    pub variables: Vec<String>,
    pub constraints: Vec<Constraint>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FmError {
    #[error("constraint has {got} coefficients for {want} variables")]
    DimensionMismatch { got: usize, want: usize },
    #[error("certificate has {got} multipliers for {want} constraints")]
    CertificateDimension { got: usize, want: usize },
    #[error("elimination order must be a permutation of the variable indices")]
    BadOrder,
}

impl LinearSystem {
    pub fn new<S: Into<String>>(variables: Vec<S>) -> Self {
        Self {
            variables: variables.into_iter().map(Into::into).collect(),
            constraints: Vec::new(),
        }
    }

    fn index(&self, var: &str) -> usize {
        self.variables
            .iter()
            .position(|v| v == var)
            .unwrap_or_else(|| panic!("unknown variable {var}"))
    }

    /// Adds `Σ terms REL rhs` with terms given as `(coefficient, variable)`.
    pub fn add(&mut self, terms: &[(Rational, &str)], relation: Relation, rhs: Rational) {
        let mut coeffs = vec![Rational::zero(); self.variables.len()];
        for (c, v) in terms {
            let i = self.index(v);
            coeffs[i] = &coeffs[i] + c;
        }
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
    }

    /// `var ≥ 0` for each listed variable.
    pub fn nonnegative(&mut self, vars: &[&str]) {
        for v in vars {
            self.add(
                &[(crate::rational::rat(-1, 1), v)],
                Relation::Le,
                Rational::zero(),
            );
        }
    }

    pub fn validate(&self) -> Result<(), FmError> {
        for c in &self.constraints {
            if c.coeffs.len() != self.variables.len() {
                return Err(FmError::DimensionMismatch {
                    got: c.coeffs.len(),
                    want: self.variables.len(),
                });
            }
        }
        Ok(())
    }
}

/// Nonnegative multipliers, one per constraint, whose weighted sum cancels
/// every variable and contradicts the constant side: either `0 < c` with
/// `c ≤ 0`, or `0 ≤ c` with `c < 0` (the combination is strict iff some
/// strict constraint carries a positive multiplier).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfeasibilityCertificate {
    pub multipliers: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FeasibilityResult {
    Feasible {
        witness: Vec<Rational>,
    },
    Infeasible {
        certificate: InfeasibilityCertificate,
    },
}

impl FeasibilityResult {
    pub fn is_feasible(&self) -> bool {
        matches!(self, FeasibilityResult::Feasible { .. })
    }
}

/// A working row: constraint plus its expression as a nonnegative
/// combination of the original constraints.
#[derive(Clone)]
struct Row {
    coeffs: Vec<Rational>,
    strict: bool,
    rhs: Rational,
    mult: Vec<Rational>,
}

impl Row {
    fn contradicts(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
            && ((self.strict && self.rhs <= Rational::zero())
                || (!self.strict && self.rhs < Rational::zero()))
    }

    /// Scales by the inverse of the largest absolute coefficient so that
    /// positive multiples of one another collide; the multipliers scale
    /// along, keeping the certificate valid.
    fn normalize(&mut self) {
        let mut scale: Option<Rational> = None;
        for c in &self.coeffs {
            let a = if *c < Rational::zero() {
                -c.clone()
            } else {
                c.clone()
            };
            if !a.is_zero() && scale.as_ref().is_none_or(|s| a > *s) {
                scale = Some(a);
            }
        }
        let Some(s) = scale else { return };
        for c in &mut self.coeffs {
            *c = &*c / &s;
        }
        self.rhs = &self.rhs / &s;
        for m in &mut self.mult {
            *m = &*m / &s;
        }
    }

    fn key(&self) -> (Vec<Rational>, Rational, bool) {
        (self.coeffs.clone(), self.rhs.clone(), self.strict)
    }
}

/// Decides feasibility, choosing at each stage the variable that generates
/// the fewest combination rows.
pub fn fm_feasibility(sys: &LinearSystem) -> FeasibilityResult {
    fm_run(sys, None).expect("greedy order needs no validation")
}

/// Variable elimination in the given order (a permutation of variable
/// indices). The verdict is order-independent; the witness need not be.
pub fn fm_feasibility_with_order(
    sys: &LinearSystem,
    order: &[usize],
) -> Result<FeasibilityResult, FmError> {
    let n = sys.variables.len();
    let mut seen = vec![false; n];
    if order.len() != n {
        return Err(FmError::BadOrder);
    }
    for &i in order {
        if i >= n || seen[i] {
            return Err(FmError::BadOrder);
        }
        seen[i] = true;
    }
    fm_run(sys, Some(order))
}

fn fm_run(sys: &LinearSystem, order: Option<&[usize]>) -> Result<FeasibilityResult, FmError> {
    sys.validate()?;
    let n = sys.variables.len();
    let m = sys.constraints.len();
    let mut rows: Vec<Row> = sys
        .constraints
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let mut mult = vec![Rational::zero(); m];
            mult[i] = Rational::new(1.into(), 1.into());
            Row {
                coeffs: c.coeffs.clone(),
                strict: c.relation == Relation::Lt,
                rhs: c.rhs.clone(),
                mult,
            }
        })
        .collect();

    // elimination stages retained for back-substitution: per variable, the
    // lower rows (negative coefficient) and upper rows (positive coefficient)
    let mut stages: Vec<(usize, Vec<Row>, Vec<Row>)> = Vec::new();
    let mut remaining: Vec<usize> = match order {
        Some(o) => o.to_vec(),
        None => (0..n).collect(),
    };

    for stage in 0..n {
        if let Some(row) = rows.iter().find(|r| r.contradicts()) {
            return Ok(FeasibilityResult::Infeasible {
                certificate: InfeasibilityCertificate {
                    multipliers: row.mult.clone(),
                },
            });
        }
        let var = match order {
            Some(o) => o[stage],
            None => {
                // fewest pairwise combinations first
                let best = remaining
                    .iter()
                    .copied()
                    .min_by_key(|&v| {
                        let pos = rows
                            .iter()
                            .filter(|r| r.coeffs[v] > Rational::zero())
                            .count();
                        let neg = rows
                            .iter()
                            .filter(|r| r.coeffs[v] < Rational::zero())
                            .count();
                        (pos * neg, v)
                    })
                    .expect("variables remain");
                best
            }
        };
        remaining.retain(|&v| v != var);
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut rest = Vec::new();
        for r in rows.drain(..) {
            if r.coeffs[var] > Rational::zero() {
                pos.push(r);
            } else if r.coeffs[var] < Rational::zero() {
                neg.push(r);
            } else {
                rest.push(r);
            }
        }
        let mut seen: std::collections::HashSet<(Vec<Rational>, Rational, bool)> =
            rest.iter().map(Row::key).collect();
        for p in &pos {
            for q in &neg {
                let cp = p.coeffs[var].clone();
                let cq = -q.coeffs[var].clone();
                let coeffs: Vec<Rational> = p
                    .coeffs
                    .iter()
                    .zip(&q.coeffs)
                    .map(|(x, y)| x / &cp + y / &cq)
                    .collect();
                let rhs = &p.rhs / &cp + &q.rhs / &cq;
                let mult: Vec<Rational> = p
                    .mult
                    .iter()
                    .zip(&q.mult)
                    .map(|(x, y)| x / &cp + y / &cq)
                    .collect();
                let mut row = Row {
                    coeffs,
                    strict: p.strict || q.strict,
                    rhs,
                    mult,
                };
                row.coeffs[var] = Rational::zero();
                row.normalize();
                if seen.insert(row.key()) {
                    rest.push(row);
                }
            }
        }
        stages.push((var, neg, pos));
        rows = rest;
    }
    if let Some(row) = rows.iter().find(|r| r.contradicts()) {
        return Ok(FeasibilityResult::Infeasible {
            certificate: InfeasibilityCertificate {
                multipliers: row.mult.clone(),
            },
        });
    }

    // feasible: choose values in reverse elimination order
    let mut witness = vec![Rational::zero(); n];
    let mut assigned = vec![false; n];
    for (var, lowers, uppers) in stages.iter().rev() {
        let eval = |row: &Row| -> Rational {
            let mut rest = Rational::zero();
            for (k, c) in row.coeffs.iter().enumerate() {
                if k != *var && !c.is_zero() {
                    debug_assert!(assigned[k] || witness[k].is_zero());
                    rest += c * &witness[k];
                }
            }
            (&row.rhs - rest) / &row.coeffs[*var]
        };
        let mut lo: Option<(Rational, bool)> = None;
        for r in lowers {
            let b = eval(r); // coefficient negative: bound from below
            match &lo {
                Some((cur, strict)) if b < *cur || (b == *cur && (*strict || !r.strict)) => {}
                _ => lo = Some((b, r.strict)),
            }
        }
        let mut hi: Option<(Rational, bool)> = None;
        for r in uppers {
            let b = eval(r);
            match &hi {
                Some((cur, strict)) if b > *cur || (b == *cur && (*strict || !r.strict)) => {}
                _ => hi = Some((b, r.strict)),
            }
        }
        let one = Rational::new(1.into(), 1.into());
        let two = Rational::new(2.into(), 1.into());
        witness[*var] = match (lo, hi) {
            (None, None) => Rational::zero(),
            (Some((l, ls)), None) => {
                if ls {
                    l + one
                } else {
                    l
                }
            }
            (None, Some((h, hs))) => {
                if hs {
                    h - one
                } else {
                    h
                }
            }
            (Some((l, _)), Some((h, _))) => {
                // projection feasibility guarantees l <= h, with equality
                // only when both sides are non-strict
                (l + h) / two
            }
        };
        assigned[*var] = true;
    }
    Ok(FeasibilityResult::Feasible { witness })
}

/// Verifies an infeasibility certificate against the system.
pub fn check_certificate(
    sys: &LinearSystem,
    cert: &InfeasibilityCertificate,
) -> Result<bool, FmError> {
    sys.validate()?;
    if cert.multipliers.len() != sys.constraints.len() {
        return Err(FmError::CertificateDimension {
            got: cert.multipliers.len(),
            want: sys.constraints.len(),
        });
    }
    if cert.multipliers.iter().any(|m| *m < Rational::zero()) {
        return Ok(false);
    }
    let n = sys.variables.len();
    let mut combined = vec![Rational::zero(); n];
    let mut rhs = Rational::zero();
    let mut strict = false;
    for (m, c) in cert.multipliers.iter().zip(&sys.constraints) {
        if m.is_zero() {
            continue;
        }
        for (k, x) in c.coeffs.iter().enumerate() {
            combined[k] += m * x;
        }
        rhs += m * &c.rhs;
        strict |= c.relation == Relation::Lt;
    }
    if combined.iter().any(|c| !c.is_zero()) {
        return Ok(false);
    }
    Ok((strict && rhs <= Rational::zero()) || (!strict && rhs < Rational::zero()))
}

/// Checks a witness against every constraint exactly.
pub fn satisfies(sys: &LinearSystem, witness: &[Rational]) -> bool {
    sys.constraints.iter().all(|c| {
        let lhs: Rational = c
            .coeffs
            .iter()
            .zip(witness)
            .map(|(a, x)| a * x)
            .fold(Rational::zero(), |s, t| s + t);
        match c.relation {
            Relation::Lt => lhs < c.rhs,
            Relation::Le => lhs <= c.rhs,
        }
    })
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
}

/// Parses the one-constraint-per-line text format, e.g.
///
/// ```text
/// # context
/// 3/5*m_Z + 1*mu < 7/10
/// m_C >= 0
/// ```
///
/// Relations `<`, `<=`, `>`, `>=`, `=` are accepted; both sides may carry
/// linear terms and constants. Variables are collected in order of first
/// appearance.
type ParsedLine = (Vec<(Rational, String)>, Relation, Rational, bool);

pub fn parse_system(text: &str) -> Result<LinearSystem, ParseError> {
    let mut vars: Vec<String> = Vec::new();
    let mut parsed: Vec<ParsedLine> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: &str| ParseError::Syntax {
            line: lineno + 1,
            msg: msg.to_string(),
        };
        let (lhs, rel, rhs, mirrored) = split_relation(line).ok_or_else(|| err("no relation"))?;
        let (lt, lc) = parse_side(lhs).map_err(|m| err(&m))?;
        let (rt, rc) = parse_side(rhs).map_err(|m| err(&m))?;
        // move variables left, constants right
        let mut terms: Vec<(Rational, String)> = lt;
        for (c, v) in rt {
            terms.push((-c, v));
        }
        let constant = rc - lc;
        for (_, v) in &terms {
            if !vars.iter().any(|x| x == v) {
                vars.push(v.clone());
            }
        }
        parsed.push((terms, rel, constant, mirrored));
    }
    let mut sys = LinearSystem::new(vars.iter().map(String::as_str).collect::<Vec<_>>());
    for (terms, rel, constant, mirrored) in parsed {
        let refs: Vec<(Rational, &str)> =
            terms.iter().map(|(c, v)| (c.clone(), v.as_str())).collect();
        sys.add(&refs, rel, constant.clone());
        if mirrored {
            // equality: add the reversed inequality as well
            let neg: Vec<(Rational, &str)> = terms
                .iter()
                .map(|(c, v)| (-c.clone(), v.as_str()))
                .collect();
            sys.add(&neg, Relation::Le, -constant);
        }
    }
    Ok(sys)
}

/// Splits on the relation; `>`/`>=` are normalized by swapping sides. The
/// flag marks equalities (caller adds the mirror constraint).
fn split_relation(line: &str) -> Option<(&str, Relation, &str, bool)> {
    for (tok, rel, swap, eq) in [
        ("<=", Relation::Le, false, false),
        (">=", Relation::Le, true, false),
        ("<", Relation::Lt, false, false),
        (">", Relation::Lt, true, false),
        ("=", Relation::Le, false, true),
    ] {
        if let Some(pos) = line.find(tok) {
            let (l, r) = (line[..pos].trim(), line[pos + tok.len()..].trim());
            return Some(if swap {
                (r, rel, l, eq)
            } else {
                (l, rel, r, eq)
            });
        }
    }
    None
}

/// Parses `c1*x + 5 - 2*y - 1/3` into terms and a constant.
fn parse_side(side: &str) -> Result<(Vec<(Rational, String)>, Rational), String> {
    if side.trim().is_empty() {
        return Err("empty side of a constraint".to_string());
    }
    let mut terms = Vec::new();
    let mut constant = Rational::zero();
    let cleaned = side.replace('-', "+-");
    for (idx, chunk) in cleaned.split('+').enumerate() {
        let chunk = chunk.trim();
        if chunk.is_empty() {
            // a leading '-' produces one empty leading chunk; anything else
            // is a dangling operator
            if idx == 0 {
                continue;
            }
            return Err(format!("dangling operator in `{side}`"));
        }
        let (neg, body) = match chunk.strip_prefix('-') {
            Some(rest) => (true, rest.trim()),
            None => (false, chunk),
        };
        if body.is_empty() {
            return Err(format!("dangling sign in `{side}`"));
        }
        let (coeff, var) = match body.split_once('*') {
            Some((c, v)) => (
                parse_rational(c).map_err(|e| e.to_string())?,
                Some(v.trim().to_string()),
            ),
            None => match parse_rational(body) {
                Ok(c) => (c, None),
                Err(_) => (Rational::new(1.into(), 1.into()), Some(body.to_string())),
            },
        };
        let coeff = if neg { -coeff } else { coeff };
        match var {
            Some(v) if !v.is_empty() => terms.push((coeff, v)),
            Some(_) => return Err(format!("empty variable name in `{side}`")),
            None => constant += coeff,
        }
    }
    Ok((terms, constant))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use proptest::prelude::*;

    fn infeasible_with_valid_cert(sys: &LinearSystem) -> bool {
        match fm_feasibility(sys) {
            FeasibilityResult::Infeasible { certificate } => {
                check_certificate(sys, &certificate).unwrap()
            }
            _ => false,
        }
    }

    #[test]
    fn example_systems() {
        // m_C <= 1/2, m_C > m_Z/2 + 1/2, m_Z >= 0
        let mut sys = LinearSystem::new(vec!["m_C", "m_Z"]);
        sys.add(&[(rat(1, 1), "m_C")], Relation::Le, rat(1, 2));
        sys.add(
            &[(rat(-1, 1), "m_C"), (rat(1, 2), "m_Z")],
            Relation::Lt,
            rat(-1, 2),
        );
        sys.nonnegative(&["m_Z"]);
        assert!(infeasible_with_valid_cert(&sys));

        let mut sys = LinearSystem::new(vec!["mu"]);
        sys.add(&[(rat(-1, 1), "mu")], Relation::Lt, rat(-7, 10));
        sys.add(&[(rat(1, 1), "mu")], Relation::Le, rat(11, 30));
        assert!(infeasible_with_valid_cert(&sys));

        let mut sys = LinearSystem::new(vec!["x"]);
        sys.add(&[(rat(-1, 1), "x")], Relation::Le, rat(0, 1));
        sys.add(&[(rat(1, 1), "x")], Relation::Le, rat(1, 1));
        match fm_feasibility(&sys) {
            FeasibilityResult::Feasible { witness } => {
                assert!(satisfies(&sys, &witness));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn strictness_matters() {
        // x >= 1 and x <= 1 is feasible; x > 1 and x <= 1 is not
        let mut weak = LinearSystem::new(vec!["x"]);
        weak.add(&[(rat(-1, 1), "x")], Relation::Le, rat(-1, 1));
        weak.add(&[(rat(1, 1), "x")], Relation::Le, rat(1, 1));
        assert!(fm_feasibility(&weak).is_feasible());

        let mut strict = LinearSystem::new(vec!["x"]);
        strict.add(&[(rat(-1, 1), "x")], Relation::Lt, rat(-1, 1));
        strict.add(&[(rat(1, 1), "x")], Relation::Le, rat(1, 1));
        assert!(infeasible_with_valid_cert(&strict));
    }

    #[test]
    fn degenerate_certificates_rejected() {
        let mut sys = LinearSystem::new(vec!["x"]);
        sys.add(&[(rat(1, 1), "x")], Relation::Le, rat(1, 1));
        let zero = InfeasibilityCertificate {
            multipliers: vec![rat(0, 1)],
        };
        assert_eq!(check_certificate(&sys, &zero), Ok(false));
        let negative = InfeasibilityCertificate {
            multipliers: vec![rat(-1, 1)],
        };
        assert_eq!(check_certificate(&sys, &negative), Ok(false));
        let wrong_len = InfeasibilityCertificate {
            multipliers: vec![],
        };
        assert!(check_certificate(&sys, &wrong_len).is_err());
    }

    #[test]
    fn unbounded_varieties_are_feasible() {
        let mut sys = LinearSystem::new(vec!["x", "y"]);
        sys.add(
            &[(rat(1, 1), "x"), (rat(1, 1), "y")],
            Relation::Lt,
            rat(0, 1),
        );
        match fm_feasibility(&sys) {
            FeasibilityResult::Feasible { witness } => assert!(satisfies(&sys, &witness)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parse_round_trip() {
        let sys = parse_system(
            "# a comment\n3/5*m_Z + 1*mu < 7/10\nmu > 1/4\nm_Z >= 0\nm_Z + mu = 1/2\n",
        )
        .unwrap();
        assert_eq!(sys.variables, vec!["m_Z", "mu"]);
        // equality expands to two constraints
        assert_eq!(sys.constraints.len(), 5);
        match fm_feasibility(&sys) {
            FeasibilityResult::Feasible { witness } => assert!(satisfies(&sys, &witness)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_system("x ! 3").is_err());
        assert!(parse_system("x + < 3").is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn verdict_independent_of_elimination_order(
            seed_cons in prop::collection::vec(
                (prop::collection::vec(-3i64..=3, 3), -2i64..=2, prop::bool::ANY),
                1..6
            ),
        ) {
            let mut sys = LinearSystem::new(vec!["x", "y", "z"]);
            for (coeffs, rhs, strict) in &seed_cons {
                let terms: Vec<(Rational, &str)> = coeffs
                    .iter()
                    .zip(["x", "y", "z"])
                    .map(|(c, v)| (rat(*c, 1), v))
                    .collect();
                let rel = if *strict { Relation::Lt } else { Relation::Le };
                sys.add(&terms, rel, rat(*rhs, 1));
            }
            let baseline = fm_feasibility(&sys).is_feasible();
            for order in [[0usize, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
                let got = fm_feasibility_with_order(&sys, &order).unwrap();
                prop_assert_eq!(got.is_feasible(), baseline);
                match got {
                    FeasibilityResult::Feasible { witness } => {
                        prop_assert!(satisfies(&sys, &witness));
                    }
                    FeasibilityResult::Infeasible { certificate } => {
                        prop_assert!(check_certificate(&sys, &certificate).unwrap());
                    }
                }
            }
        }
    }
}
