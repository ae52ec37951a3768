//! The family catalog: enumerate all quasismooth terminal anticanonically
//! embedded weighted Fano threefold hypersurfaces, assign ordinals, attach
//! blow-up analyses, and serialize the database.

use crate::blowup::{blowup_children, involutions_for_entry, ku3, sign_class, Involution, Sign};
use crate::rational::{parse_rational, Rational};
use crate::singularities::{basket, Basket, BasketEntry, Locus, QuotientType};
use crate::weights::{
    degree_and_kx3, is_quasismooth_general, is_well_formed, vertex_prescreen, WeightSystem,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Blow-up data for one basket entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointAnalysis {
    pub qtype: QuotientType,
    pub ku3: Rational,
    pub sign: Sign,
    pub involutions: Vec<Involution>,
    pub children: Vec<QuotientType>,
}

/// One catalog family: the ordinal, its weight system, anticanonical degree,
/// basket, and per-point analyses (parallel to the basket entries).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyRecord {
    pub gimel: u32,
    pub ws: WeightSystem,
    pub kx3: Rational,
    pub basket: Basket,
    pub points: Vec<PointAnalysis>,
}

impl FamilyRecord {
    /// Basket entries paired with their analyses.
    pub fn entries(&self) -> impl Iterator<Item = (&BasketEntry, &PointAnalysis)> {
        self.basket.entries.iter().zip(self.points.iter())
    }

    /// The analysis of the vertex point of the `j`-th weight, if any.
    pub fn vertex_analysis(&self, j: u8) -> Option<(&BasketEntry, &PointAnalysis)> {
        self.entries().find(|(e, _)| e.locus == Locus::Vertex(j))
    }
}

/// The complete ordered catalog.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Catalog {
    records: Vec<FamilyRecord>,
}

pub const EXPECTED_FAMILY_COUNT: usize = 95;
pub const DEFAULT_MAX_WEIGHT: u32 = 100;
pub const MIN_MAX_WEIGHT: u32 = 40;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CatalogError {
    #[error("max weight {0} is below the supported minimum {MIN_MAX_WEIGHT}")]
    BoundTooSmall(u32),
    #[error("enumeration found {found} families instead of {EXPECTED_FAMILY_COUNT}")]
    CountMismatch { found: usize },
    #[error("ordinal {0} is out of range 1..={EXPECTED_FAMILY_COUNT}")]
    OutOfRange(u32),
    #[error("catalog deserialization failed: {0}")]
    Parse(String),
}

fn accept(a: [u32; 4]) -> Option<(WeightSystem, Basket)> {
    let d: u32 = a.iter().sum();
    if !vertex_prescreen(a, d) {
        return None;
    }
    let ws = WeightSystem::new(a).expect("scan produces sorted positive weights");
    if !is_well_formed(&ws) || !is_quasismooth_general(&ws) {
        return None;
    }
    basket(&ws).ok().map(|b| (ws, b))
}

fn analyze(ws: WeightSystem, bsk: Basket) -> (WeightSystem, Rational, Basket, Vec<PointAnalysis>) {
    let (_, kx3) = degree_and_kx3(&ws);
    let points = (0..bsk.entries.len())
        .map(|idx| {
            let e = &bsk.entries[idx];
            let k = ku3(&kx3, e.qtype);
            PointAnalysis {
                qtype: e.qtype,
                sign: sign_class(&k),
                ku3: k,
                involutions: involutions_for_entry(&ws, &kx3, &bsk, idx),
                children: blowup_children(e.qtype),
            }
        })
        .collect();
    (ws, kx3, bsk, points)
}

fn build(mut found: Vec<(WeightSystem, Basket)>) -> Result<Catalog, CatalogError> {
    if found.len() != EXPECTED_FAMILY_COUNT {
        return Err(CatalogError::CountMismatch { found: found.len() });
    }
    found.sort_by_key(|(ws, _)| (ws.degree(), ws.weights()));
    let records = found
        .into_iter()
        .enumerate()
        .map(|(i, (ws, bsk))| {
            let (ws, kx3, basket, points) = analyze(ws, bsk);
            FamilyRecord {
                gimel: i as u32 + 1,
                ws,
                kx3,
                basket,
                points,
            }
        })
        .collect();
    Ok(Catalog { records })
}

/// Enumerates every weight system `1 ≤ a₁ ≤ a₂ ≤ a₃ ≤ a₄ ≤ max_weight` with
/// `d = Σaᵢ` whose general member is well formed, quasismooth, and terminal,
/// ordered by `(d, weights)` with 1-based ordinals. The scan fans out across
/// the leading weight; ordinal assignment happens after a deterministic sort,
/// so the result is independent of scheduling.
pub fn enumerate_families(max_weight: u32) -> Result<Catalog, CatalogError> {
    if max_weight < MIN_MAX_WEIGHT {
        return Err(CatalogError::BoundTooSmall(max_weight));
    }
    let found: Vec<(WeightSystem, Basket)> = (1..=max_weight)
        .into_par_iter()
        .flat_map_iter(|a1| ScanIter::new(a1, max_weight))
        .filter_map(accept)
        .collect();
    build(found)
}

/// Single-threaded variant of [`enumerate_families`], byte-for-byte
/// equivalent output.
pub fn enumerate_families_serial(max_weight: u32) -> Result<Catalog, CatalogError> {
    if max_weight < MIN_MAX_WEIGHT {
        return Err(CatalogError::BoundTooSmall(max_weight));
    }
    let found: Vec<(WeightSystem, Basket)> = (1..=max_weight)
        .flat_map(|a1| ScanIter::new(a1, max_weight))
        .filter_map(accept)
        .collect();
    build(found)
}

/// Ascending tuples `(a1, a2, a3, a4)` with fixed `a1`.
struct ScanIter {
    a1: u32,
    a2: u32,
    a3: u32,
    a4: u32,
    max: u32,
    done: bool,
}

impl ScanIter {
    fn new(a1: u32, max: u32) -> Self {
        Self {
            a1,
            a2: a1,
            a3: a1,
            a4: a1,
            max,
            done: a1 > max,
        }
    }
}

impl Iterator for ScanIter {
    type Item = [u32; 4];

    fn next(&mut self) -> Option<[u32; 4]> {
        if self.done {
            return None;
        }
        let item = [self.a1, self.a2, self.a3, self.a4];
        self.a4 += 1;
        if self.a4 > self.max {
            self.a3 += 1;
            self.a4 = self.a3;
            if self.a3 > self.max {
                self.a2 += 1;
                self.a3 = self.a2;
                self.a4 = self.a2;
                if self.a2 > self.max {
                    self.done = true;
                }
            }
        }
        Some(item)
    }
}

impl Catalog {
    pub fn records(&self) -> &[FamilyRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// The record with the given 1-based ordinal.
    pub fn family(&self, gimel: u32) -> Result<&FamilyRecord, CatalogError> {
        if gimel == 0 || gimel as usize > self.records.len() {
            return Err(CatalogError::OutOfRange(gimel));
        }
        Ok(&self.records[gimel as usize - 1])
    }

    /// Deterministic JSON export: an array of records with stable field
    /// order and all rationals rendered as `"p/q"` strings.
    pub fn to_json(&self) -> String {
        let rows: Vec<RecordJson> = self.records.iter().map(RecordJson::from).collect();
        let mut out = serde_json::to_string_pretty(&rows).expect("catalog serializes");
        out.push('\n');
        out
    }

    /// One record in the same JSON schema as [`Catalog::to_json`].
    pub fn family_json(&self, gimel: u32) -> Result<String, CatalogError> {
        let row = RecordJson::from(self.family(gimel)?);
        let mut out = serde_json::to_string_pretty(&row).expect("record serializes");
        out.push('\n');
        Ok(out)
    }

    /// Deterministic CSV export. The basket and involutions columns contain
    /// commas inside the quotient notation and are therefore quoted.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("gimel,a1,a2,a3,a4,degree,kx3,basket,involutions\n");
        for r in &self.records {
            let a = r.ws.weights();
            let bask = r
                .basket
                .entries
                .iter()
                .map(|e| format!("{}*{}", e.count, e.qtype))
                .collect::<Vec<_>>()
                .join(";");
            let invs = r
                .entries()
                .flat_map(|(e, p)| {
                    p.involutions.iter().map(move |t| {
                        let kind = match t.kind {
                            crate::blowup::InvolutionKind::Quadratic => "quadratic",
                            crate::blowup::InvolutionKind::Elliptic => "elliptic",
                        };
                        format!("{kind}:{}:j={}", e.qtype, t.j)
                    })
                })
                .collect::<Vec<_>>()
                .join(";");
            out.push_str(&format!(
                "{},{},{},{},{},{},{},\"{}\",\"{}\"\n",
                r.gimel,
                a[0],
                a[1],
                a[2],
                a[3],
                r.ws.degree(),
                r.kx3,
                bask,
                invs
            ));
        }
        out
    }

    /// Parses the JSON export back into a catalog.
    pub fn from_json(text: &str) -> Result<Catalog, CatalogError> {
        let rows: Vec<RecordJson> =
            serde_json::from_str(text).map_err(|e| CatalogError::Parse(e.to_string()))?;
        let records = rows
            .into_iter()
            .map(FamilyRecord::try_from)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Catalog { records })
    }
}

/// Serialized shape of one record. Field names and order are the stable
/// on-disk schema.
#[derive(Serialize, Deserialize)]
struct RecordJson {
    gimel: u32,
    weights: [u32; 4],
    degree: u32,
    kx3: String,
    basket: Vec<BasketEntryJson>,
    points: Vec<PointJson>,
}

#[derive(Serialize, Deserialize)]
struct BasketEntryJson {
    r: u32,
    a: u32,
    count: u32,
    locus: String,
}

#[derive(Serialize, Deserialize)]
struct PointJson {
    r: u32,
    a: u32,
    ku3: String,
    sign: Sign,
    involutions: Vec<Involution>,
    children: Vec<ChildJson>,
}

#[derive(Serialize, Deserialize)]
struct ChildJson {
    r: u32,
    a: u32,
}

impl From<&FamilyRecord> for RecordJson {
    fn from(r: &FamilyRecord) -> Self {
        RecordJson {
            gimel: r.gimel,
            weights: r.ws.weights(),
            degree: r.ws.degree(),
            kx3: r.kx3.to_string(),
            basket: r
                .basket
                .entries
                .iter()
                .map(|e| BasketEntryJson {
                    r: e.qtype.r(),
                    a: e.qtype.a(),
                    count: e.count,
                    locus: e.locus.to_string(),
                })
                .collect(),
            points: r
                .points
                .iter()
                .map(|p| PointJson {
                    r: p.qtype.r(),
                    a: p.qtype.a(),
                    ku3: p.ku3.to_string(),
                    sign: p.sign,
                    involutions: p.involutions.clone(),
                    children: p
                        .children
                        .iter()
                        .map(|c| ChildJson { r: c.r(), a: c.a() })
                        .collect(),
                })
                .collect(),
        }
    }
}

fn parse_locus(s: &str) -> Result<Locus, CatalogError> {
    let bad = || CatalogError::Parse(format!("bad locus `{s}`"));
    if let Some(j) = s.strip_prefix("vertex:") {
        return j.parse().map(Locus::Vertex).map_err(|_| bad());
    }
    if let Some(ij) = s.strip_prefix("edge:") {
        let (i, j) = ij.split_once(',').ok_or_else(bad)?;
        return Ok(Locus::Edge(
            i.parse().map_err(|_| bad())?,
            j.parse().map_err(|_| bad())?,
        ));
    }
    Err(bad())
}

impl TryFrom<RecordJson> for FamilyRecord {
    type Error = CatalogError;

    fn try_from(row: RecordJson) -> Result<Self, CatalogError> {
        let parse = |s: &str| parse_rational(s).map_err(|e| CatalogError::Parse(e.to_string()));
        let qt = |r, a| QuotientType::new(r, a).map_err(|e| CatalogError::Parse(e.to_string()));
        let ws = WeightSystem::new(row.weights).map_err(|e| CatalogError::Parse(e.to_string()))?;
        if ws.degree() != row.degree {
            return Err(CatalogError::Parse(format!(
                "degree {} does not match weights {:?}",
                row.degree, row.weights
            )));
        }
        let entries = row
            .basket
            .into_iter()
            .map(|e| {
                Ok(BasketEntry {
                    qtype: qt(e.r, e.a)?,
                    count: e.count,
                    locus: parse_locus(&e.locus)?,
                })
            })
            .collect::<Result<Vec<_>, CatalogError>>()?;
        let points = row
            .points
            .into_iter()
            .map(|p| {
                Ok(PointAnalysis {
                    qtype: qt(p.r, p.a)?,
                    ku3: parse(&p.ku3)?,
                    sign: p.sign,
                    involutions: p.involutions,
                    children: p
                        .children
                        .into_iter()
                        .map(|c| qt(c.r, c.a))
                        .collect::<Result<Vec<_>, _>>()?,
                })
            })
            .collect::<Result<Vec<_>, CatalogError>>()?;
        Ok(FamilyRecord {
            gimel: row.gimel,
            ws,
            kx3: parse(&row.kx3)?,
            basket: Basket { entries },
            points,
        })
    }
}
