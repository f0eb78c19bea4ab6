//! Spinor class fields as quotients of supplied class-group data.
//!
//! Everything arithmetic about the number field enters as input: a finite
//! abelian group standing for the Galois group of a class field, and the
//! Artin image of each relevant place. Subfields correspond to quotients.

mod group;

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::blocks::{geo_block, CosetSet, GeoType};
use crate::gamma::GammaClass;

pub use group::{quotient_by, AbelianGroup, Quotient};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassFieldError {
    #[error("element out of range: {0}")]
    ElementOutOfRange(String),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid genus input: {0}")]
    Schema(String),
    #[error("invalid local type at place {place}: {reason}")]
    InvalidGeoType { place: String, reason: String },
    #[error("unknown place {0}")]
    UnknownPlace(String),
    #[error("place {0} has no local type")]
    MissingGeoType(String),
    #[error("local type at place {0} is not symmetric")]
    NotLocallySymmetric(String),
    #[error("coset modulus {found} at place {place} does not match capacity {expected}")]
    ModulusMismatch { place: String, expected: u64, found: u64 },
    #[error("empty distance set")]
    EmptySet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlaceKind {
    Finite,
    Real,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArchFlag {
    Ramified,
    Unramified,
}

/// Local data at one place: Artin image, local capacity (the `f` of
/// `M_f(E)`), and the local type of the genus when it is not maximal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlaceData {
    pub id: String,
    pub kind: PlaceKind,
    pub frobenius: Vec<i64>,
    pub capacity: u64,
    #[serde(default)]
    pub geo_type: Option<GammaClass>,
}

impl PlaceData {
    pub fn finite(id: &str, frobenius: Vec<i64>, capacity: u64, geo_type: Option<GammaClass>) -> Self {
        PlaceData { id: id.to_string(), kind: PlaceKind::Finite, frobenius, capacity, geo_type }
    }

    pub fn real(id: &str, frobenius: Vec<i64>, capacity: u64) -> Self {
        PlaceData { id: id.to_string(), kind: PlaceKind::Real, frobenius, capacity, geo_type: None }
    }

    fn symmetric_killer_multiple(&self) -> Option<u64> {
        let t = self.geo_type.as_ref()?;
        if self.kind != PlaceKind::Finite || !t.is_symmetric() {
            return None;
        }
        Some(t.total_distance().gcd(&self.capacity))
    }
}

/// A genus of orders in a central simple algebra of degree `n`, described
/// through class-field data. Unlisted places are unramified and maximal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenusInput {
    pub n: u64,
    pub group: AbelianGroup,
    pub places: Vec<PlaceData>,
    #[serde(default)]
    pub arch_flags: Vec<ArchFlag>,
}

impl GenusInput {
    pub fn validate(&self) -> Result<(), ClassFieldError> {
        if self.n == 0 {
            return Err(ClassFieldError::Schema("degree must be positive".into()));
        }
        let mut seen = BTreeSet::new();
        for p in &self.places {
            if !seen.insert(p.id.as_str()) {
                return Err(ClassFieldError::Schema(format!("duplicate place id {}", p.id)));
            }
            if p.capacity == 0 || self.n % p.capacity != 0 {
                return Err(ClassFieldError::Schema(format!(
                    "capacity {} at place {} does not divide {}",
                    p.capacity, p.id, self.n
                )));
            }
            self.group.element(&p.frobenius)?;
            if let Some(t) = &p.geo_type {
                if p.kind == PlaceKind::Real {
                    return Err(ClassFieldError::Schema(format!("real place {} carries a local type", p.id)));
                }
                if t.rank() as u64 != p.capacity {
                    return Err(ClassFieldError::InvalidGeoType {
                        place: p.id.clone(),
                        reason: format!("rank {} differs from capacity {}", t.rank(), p.capacity),
                    });
                }
                if !t.is_totally_positive() {
                    return Err(ClassFieldError::InvalidGeoType {
                        place: p.id.clone(),
                        reason: format!("{t} is not totally positive"),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn place(&self, id: &str) -> Result<&PlaceData, ClassFieldError> {
        self.places
            .iter()
            .find(|p| p.id == id)
            .ok_or_else(|| ClassFieldError::UnknownPlace(id.to_string()))
    }

    fn frob(&self, p: &PlaceData) -> Vec<u64> {
        p.frobenius.iter().map(|&v| v as u64).collect()
    }

    pub fn eichler_condition(&self) -> bool {
        eichler_condition(self.n, &self.arch_flags)
    }

    /// Every listed type is symmetric (absent types are maximal, hence symmetric).
    pub fn is_locally_symmetric(&self) -> bool {
        self.places.iter().all(|p| p.geo_type.as_ref().map_or(true, GammaClass::is_symmetric))
    }
}

/// `n > 2`, or some archimedean place is unramified.
pub fn eichler_condition(n: u64, arch_flags: &[ArchFlag]) -> bool {
    n > 2 || arch_flags.contains(&ArchFlag::Unramified)
}

fn sigma0_kernel(inp: &GenusInput) -> Vec<Vec<u64>> {
    let g = &inp.group;
    let mut gens = Vec::new();
    for i in 0..g.ngens() {
        let mut e = g.identity();
        e[i] = 1;
        gens.push(g.scale(&e, inp.n as i64));
    }
    for p in &inp.places {
        let frob = inp.frob(p);
        match p.kind {
            PlaceKind::Finite => gens.push(g.scale(&frob, p.capacity as i64)),
            PlaceKind::Real if p.capacity == inp.n => gens.push(frob),
            PlaceKind::Real => {}
        }
    }
    gens
}

/// Extra kernel generators of the genus field over the maximal-order field:
/// `Frob^gcd(ρ, f)` at places with a symmetric local type.
pub fn sigma_extra_generators(inp: &GenusInput) -> Result<Vec<Vec<u64>>, ClassFieldError> {
    inp.validate()?;
    Ok(inp
        .places
        .iter()
        .filter_map(|p| p.symmetric_killer_multiple().map(|m| inp.group.scale(&inp.frob(p), m as i64)))
        .collect())
}

/// Galois group of the spinor class field of maximal orders.
pub fn sigma0(inp: &GenusInput) -> Result<Quotient, ClassFieldError> {
    inp.validate()?;
    quotient_by(&inp.group, &sigma0_kernel(inp))
}

/// Galois group of the spinor class field of the genus.
pub fn sigma(inp: &GenusInput) -> Result<Quotient, ClassFieldError> {
    let mut gens = sigma0_kernel(inp);
    gens.extend(sigma_extra_generators(inp)?);
    quotient_by(&inp.group, &gens)
}

pub fn spinor_genera_count(inp: &GenusInput) -> Result<u64, ClassFieldError> {
    Ok(sigma(inp)?.order())
}

/// Degree of the maximal-order field over the genus field.
pub fn sigma_index(inp: &GenusInput) -> Result<u64, ClassFieldError> {
    Ok(sigma0(inp)?.order() / sigma(inp)?.order())
}

/// Exponent of the Galois group of the maximal-order field over the genus field.
pub fn relative_exponent(inp: &GenusInput) -> Result<u64, ClassFieldError> {
    let s0 = sigma0(inp)?;
    let g0 = s0.group();
    Ok(sigma_extra_generators(inp)?
        .iter()
        .map(|x| g0.element_order(&s0.project_element(x)))
        .fold(1, |acc, o| acc.lcm(&o)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenusSummary {
    pub sigma0: Vec<u64>,
    pub sigma: Vec<u64>,
    pub index: u64,
    pub spinor_genera: u64,
    pub eichler_condition: bool,
    pub locally_symmetric: bool,
}

pub fn summarize(inp: &GenusInput) -> Result<GenusSummary, ClassFieldError> {
    let s0 = sigma0(inp)?;
    let s = sigma(inp)?;
    Ok(GenusSummary {
        sigma0: s0.invariants().to_vec(),
        sigma: s.invariants().to_vec(),
        index: s0.order() / s.order(),
        spinor_genera: s.order(),
        eichler_condition: inp.eichler_condition(),
        locally_symmetric: inp.is_locally_symmetric(),
    })
}

/// `Σ_℘ v_℘ · Frob_℘` in the given group coordinates.
fn raw_distance(inp: &GenusInput, valuations: &BTreeMap<String, i64>) -> Result<Vec<u64>, ClassFieldError> {
    let g = &inp.group;
    let mut acc = g.identity();
    for (id, &v) in valuations {
        let p = inp.place(id)?;
        acc = g.add(&acc, &g.scale(&inp.frob(p), v));
    }
    Ok(acc)
}

/// Distance between two maximal orders whose relative position has
/// valuation `v_℘` at each place, as an element of the genus field group.
pub fn distance(inp: &GenusInput, valuations: &BTreeMap<String, i64>) -> Result<Vec<u64>, ClassFieldError> {
    let s = sigma(inp)?;
    Ok(s.project_element(&raw_distance(inp, valuations)?))
}

/// As [`distance`], in the maximal-order field group.
pub fn distance0(inp: &GenusInput, valuations: &BTreeMap<String, i64>) -> Result<Vec<u64>, ClassFieldError> {
    let s0 = sigma0(inp)?;
    Ok(s0.project_element(&raw_distance(inp, valuations)?))
}

/// Whether intersections at two positions lie in the same spinor genus.
/// Only answered for locally symmetric genera.
pub fn same_spinor_genus(
    inp: &GenusInput,
    first: &BTreeMap<String, i64>,
    second: &BTreeMap<String, i64>,
) -> Result<bool, ClassFieldError> {
    inp.validate()?;
    if let Some(p) = inp
        .places
        .iter()
        .find(|p| p.geo_type.as_ref().is_some_and(|t| !t.is_symmetric()))
    {
        return Err(ClassFieldError::NotLocallySymmetric(p.id.clone()));
    }
    let mut diff = second.clone();
    for (id, v) in first {
        *diff.entry(id.clone()).or_insert(0) -= v;
    }
    Ok(distance(inp, &diff)?.iter().all(|&x| x == 0))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LabeledVertex {
    /// block coordinate at each labeled place
    pub coords: Vec<GammaClass>,
    /// sum of the canonical lift of each coordinate
    pub weights: Vec<i64>,
    pub element: Vec<u64>,
    pub sigma_element: Vec<u64>,
    pub label: String,
    pub extreme: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LabeledComplex {
    pub places: Vec<String>,
    pub types: Vec<GammaClass>,
    pub sigma0: Vec<u64>,
    pub sigma: Vec<u64>,
    pub vertices: Vec<LabeledVertex>,
    /// label to element of the maximal-order field group
    pub labels: BTreeMap<String, Vec<u64>>,
}

impl LabeledComplex {
    pub fn distinct_labels(&self) -> usize {
        self.labels.len()
    }

    pub fn label_of(&self, coords: &[GammaClass]) -> Option<&str> {
        self.vertices
            .iter()
            .find(|v| v.coords == coords)
            .map(|v| v.label.as_str())
    }
}

/// Letters `A..Z`, then `AA`, `AB`, ...
pub fn letter_name(mut k: usize) -> String {
    let mut s = Vec::new();
    loop {
        s.push(b'A' + (k % 26) as u8);
        if k < 26 {
            break;
        }
        k = k / 26 - 1;
    }
    s.reverse();
    String::from_utf8(s).expect("ascii")
}

/// Labels the product of the blocks at every finite place carrying a local type.
pub fn label_complex(inp: &GenusInput, base: &[i64]) -> Result<LabeledComplex, ClassFieldError> {
    let ids: Vec<String> = inp
        .places
        .iter()
        .filter(|p| p.kind == PlaceKind::Finite && p.geo_type.is_some())
        .map(|p| p.id.clone())
        .collect();
    label_complex_at(inp, base, &ids)
}

/// Labels the product of the blocks at the given places. A vertex with
/// coordinates `c_℘` gets `base + Σ w(c_℘) Frob_℘` in the maximal-order
/// field group, and letters are handed out by first appearance.
pub fn label_complex_at(inp: &GenusInput, base: &[i64], ids: &[String]) -> Result<LabeledComplex, ClassFieldError> {
    inp.validate()?;
    let base = inp.group.reduce(base)?;
    let s0 = sigma0(inp)?;
    let s = sigma(inp)?;
    let mut places = Vec::new();
    let mut types = Vec::new();
    for id in ids {
        let p = inp.place(id)?;
        let t = p.geo_type.clone().ok_or_else(|| ClassFieldError::MissingGeoType(id.clone()))?;
        places.push(p);
        types.push(GeoType::new(t).expect("validated as totally positive"));
    }
    let blocks: Vec<_> = types.iter().map(geo_block).collect();
    let grids: Vec<Vec<GammaClass>> = blocks.iter().map(|b| b.vertices()).collect();

    let mut vertices = Vec::new();
    let mut labels = BTreeMap::new();
    let mut by_element: BTreeMap<Vec<u64>, String> = BTreeMap::new();
    let mut idx = vec![0usize; grids.len()];
    loop {
        let coords: Vec<GammaClass> = idx.iter().zip(&grids).map(|(&k, g)| g[k].clone()).collect();
        let weights: Vec<i64> = coords.iter().map(|c| c.canonical_lift().iter().sum()).collect();
        let mut raw = base.clone();
        for (p, &w) in places.iter().zip(&weights) {
            raw = inp.group.add(&raw, &inp.group.scale(&inp.frob(p), w));
        }
        let element = s0.project_element(&raw);
        let next = by_element.len();
        let label = by_element
            .entry(element.clone())
            .or_insert_with(|| letter_name(next))
            .clone();
        labels.insert(label.clone(), element.clone());
        vertices.push(LabeledVertex {
            extreme: coords.iter().zip(&blocks).all(|(c, b)| b.is_extreme(c)),
            sigma_element: s.project_element(&raw),
            coords,
            weights,
            element,
            label,
        });

        let mut k = idx.len();
        loop {
            if k == 0 {
                return Ok(LabeledComplex {
                    places: ids.to_vec(),
                    types: types.into_iter().map(GammaClass::from).collect(),
                    sigma0: s0.invariants().to_vec(),
                    sigma: s.invariants().to_vec(),
                    vertices,
                    labels,
                });
            }
            k -= 1;
            if idx[k] + 1 < grids[k].len() {
                idx[k] += 1;
                for x in &mut idx[k + 1..] {
                    *x = 0;
                }
                break;
            }
        }
    }
}

/// Bounds for the representation field of a distance set `Φ`: the lower
/// field is fixed by `<Φ>`, the upper by the stabilizer `{γ : γΦ = Φ}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepresentationSets {
    pub lower: Quotient,
    pub upper: Quotient,
    pub stabilizer: Vec<Vec<u64>>,
    pub defined: bool,
}

/// `phi` is a set of elements of `group`.
pub fn representation_sets(group: &AbelianGroup, phi: &[Vec<u64>]) -> Result<RepresentationSets, ClassFieldError> {
    if phi.is_empty() {
        return Err(ClassFieldError::EmptySet);
    }
    let set: BTreeSet<Vec<u64>> = phi
        .iter()
        .map(|x| group.element(&x.iter().map(|&v| v as i64).collect::<Vec<_>>()))
        .collect::<Result<_, _>>()?;
    let stabilizer: Vec<Vec<u64>> = group
        .elements()
        .into_iter()
        .filter(|g| set.iter().all(|x| set.contains(&group.add(g, x))))
        .collect();
    let lower = quotient_by(group, &set.iter().cloned().collect::<Vec<_>>())?;
    let upper = quotient_by(group, &stabilizer)?;
    // the stabilizer always lies in <Φ>, so equal orders mean equal subgroups
    let defined = lower.order() == upper.order();
    Ok(RepresentationSets { lower, upper, stabilizer, defined })
}

/// `{ Σ t_℘ Frob_℘ : t_℘ ∈ residues_℘ }` in the maximal-order field group.
pub fn global_relative_image(
    inp: &GenusInput,
    per_place: &BTreeMap<String, CosetSet>,
) -> Result<BTreeSet<Vec<u64>>, ClassFieldError> {
    let s0 = sigma0(inp)?;
    let g = &inp.group;
    let mut acc: BTreeSet<Vec<u64>> = [g.identity()].into_iter().collect();
    for (id, cosets) in per_place {
        let p = inp.place(id)?;
        if cosets.modulus() != p.capacity {
            return Err(ClassFieldError::ModulusMismatch {
                place: id.clone(),
                expected: p.capacity,
                found: cosets.modulus(),
            });
        }
        let frob = inp.frob(p);
        acc = acc
            .iter()
            .flat_map(|x| cosets.residues().iter().map(|&t| g.add(x, &g.scale(&frob, t as i64))))
            .collect();
    }
    Ok(acc.iter().map(|x| s0.project_element(x)).collect())
}
