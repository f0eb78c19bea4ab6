//! Blocks of local orders in the standard apartment.
//!
//! The block of an order is the set of apartment vertices (maximal orders)
//! containing it. For a local generalized Eichler order `D_0 ∩ D_[b]` with
//! `[b]` totally positive it is the grid `0 <= c_i <= b_i`. For the maximal
//! order of a commutative semisimple algebra `L = ∏ L_i` it is a product of
//! simplices and free shifts, which is infinite, so every search over it
//! takes an explicit shift bound.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gamma::{GammaClass, GammaError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BlockError {
    #[error("type {0} is not totally positive")]
    NotTotallyPositive(GammaClass),
    #[error("rank mismatch: host has rank {host}, guest has rank {guest}")]
    SizeMismatch { host: usize, guest: usize },
    #[error("invalid local algebra: {0}")]
    InvalidAlgebra(String),
    #[error(transparent)]
    Gamma(#[from] GammaError),
}

/// Local isomorphism class of a generalized Eichler order: a totally
/// positive class `[b]`, standing for `D_0 ∩ D_[b]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "GammaClass", into = "GammaClass")]
pub struct GeoType {
    b: GammaClass,
}

impl TryFrom<GammaClass> for GeoType {
    type Error = BlockError;

    fn try_from(b: GammaClass) -> Result<Self, BlockError> {
        GeoType::new(b)
    }
}

impl From<GeoType> for GammaClass {
    fn from(t: GeoType) -> GammaClass {
        t.b
    }
}

impl GeoType {
    pub fn new(b: GammaClass) -> Result<Self, BlockError> {
        if b.is_totally_positive() {
            Ok(GeoType { b })
        } else {
            Err(BlockError::NotTotallyPositive(b))
        }
    }

    pub fn from_brackets(b: &[i64]) -> Result<Self, BlockError> {
        GeoType::new(GammaClass::try_new(b.to_vec())?)
    }

    /// Maximal order of rank `n`.
    pub fn maximal(n: usize) -> Self {
        GeoType { b: GammaClass::zero(n) }
    }

    pub fn class(&self) -> &GammaClass {
        &self.b
    }

    pub fn rank(&self) -> usize {
        self.b.rank()
    }

    pub fn is_symmetric(&self) -> bool {
        self.b.is_symmetric()
    }

    pub fn total_distance(&self) -> u64 {
        self.b.total_distance()
    }
}

/// Grid block `{[c] : 0 <= c_i <= b_i}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GridBlock {
    n: usize,
    bounds: Vec<u64>,
}

impl GridBlock {
    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn bounds(&self) -> &[u64] {
        &self.bounds
    }

    pub fn vertex_count(&self) -> u64 {
        self.bounds.iter().map(|b| b + 1).product()
    }

    pub fn contains(&self, c: &GammaClass) -> bool {
        c.rank() == self.n
            && c.brackets()
                .iter()
                .zip(&self.bounds)
                .all(|(&x, &b)| x >= 0 && x as u64 <= b)
    }

    /// All vertices in lexicographic order.
    pub fn vertices(&self) -> Vec<GammaClass> {
        let mut out = Vec::with_capacity(self.vertex_count() as usize);
        let mut cur = vec![0i64; self.bounds.len()];
        loop {
            out.push(GammaClass::new(cur.clone()));
            // odometer, last coordinate fastest
            let mut k = cur.len();
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                if (cur[k] as u64) < self.bounds[k] {
                    cur[k] += 1;
                    for x in &mut cur[k + 1..] {
                        *x = 0;
                    }
                    break;
                }
            }
        }
    }

    /// A vertex is extreme when every coordinate sits at 0 or at its bound.
    pub fn is_extreme(&self, c: &GammaClass) -> bool {
        self.contains(c)
            && c.brackets()
                .iter()
                .zip(&self.bounds)
                .all(|(&x, &b)| x == 0 || x as u64 == b)
    }
}

pub fn geo_block(t: &GeoType) -> GridBlock {
    GridBlock {
        n: t.rank(),
        bounds: t.b.brackets().iter().map(|&x| x as u64).collect(),
    }
}

/// Exactly `δ + 1` maximal orders contain the order, i.e. at most one
/// nonzero bracket coordinate.
pub fn is_line_type(t: &GeoType) -> bool {
    t.b.brackets().iter().filter(|&&x| x != 0).count() <= 1
}

/// One field factor of a commutative local algebra: ramification index
/// `e` and inertia degree `f`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldFactor {
    pub e: u32,
    pub f: u32,
}

impl FieldFactor {
    pub fn degree(&self) -> usize {
        (self.e * self.f) as usize
    }
}

/// A product of local fields `L = ∏ L_i` of total degree `n`, embedded in
/// `M_n(k)` block-diagonally through regular representations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommAlgebraLocal {
    components: Vec<FieldFactor>,
}

impl CommAlgebraLocal {
    pub fn new(components: Vec<FieldFactor>) -> Result<Self, BlockError> {
        if components.iter().any(|c| c.e == 0 || c.f == 0) {
            return Err(BlockError::InvalidAlgebra("ramification and inertia must be positive".into()));
        }
        let n: usize = components.iter().map(FieldFactor::degree).sum();
        if n < 2 {
            return Err(BlockError::InvalidAlgebra(format!("total degree {n} is below 2")));
        }
        Ok(CommAlgebraLocal { components })
    }

    /// From `(e, f)` pairs.
    pub fn from_pairs(pairs: &[(u32, u32)]) -> Result<Self, BlockError> {
        Self::new(pairs.iter().map(|&(e, f)| FieldFactor { e, f }).collect())
    }

    pub fn components(&self) -> &[FieldFactor] {
        &self.components
    }

    pub fn degree(&self) -> usize {
        self.components.iter().map(FieldFactor::degree).sum()
    }
}

/// Block of the maximal order of a commutative local algebra.
///
/// Component `i` occupies `e_i f_i` consecutive lift coordinates, ordered as
/// the basis `S ∪ πS ∪ ... ∪ π^{e-1}S`. The ideal `(π^j)` has valuation
/// pattern `(1,...,1,0,...,0)` with `j f_i` ones; adding a multiple of the
/// all-ones vector of the component gives the free shift.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CommBlock {
    n: usize,
    components: Vec<FieldFactor>,
}

impl CommBlock {
    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn components(&self) -> &[FieldFactor] {
        &self.components
    }

    /// Simplex vertex patterns of component `i`.
    pub fn simplex(&self, i: usize) -> Vec<Vec<i64>> {
        let FieldFactor { e, f } = self.components[i];
        (0..e)
            .map(|j| component_pattern(e, f, j as i64, 0))
            .collect()
    }

    pub fn contains(&self, x: &GammaClass) -> bool {
        if x.rank() != self.n {
            return false;
        }
        let a = x.canonical_lift();
        let mut offset = 0;
        for c in &self.components {
            let len = c.degree();
            if !is_staircase(&a[offset..offset + len], c.f as usize) {
                return false;
            }
            offset += len;
        }
        true
    }

    /// Vertices whose free shifts lie in `[-bound, bound]`, sorted.
    ///
    /// The first component is pinned to shift 0, which fixes the
    /// representative modulo the all-ones vector.
    pub fn vertices_within(&self, bound: u64) -> Vec<GammaClass> {
        let b = bound as i64;
        // per component: all (j, shift) choices
        let choices: Vec<Vec<Vec<i64>>> = self
            .components
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let shifts: Vec<i64> = if i == 0 { vec![0] } else { (-b..=b).collect() };
                shifts
                    .iter()
                    .flat_map(|&s| (0..c.e).map(move |j| component_pattern(c.e, c.f, j as i64, s)))
                    .collect()
            })
            .collect();
        let mut out = BTreeSet::new();
        let mut idx = vec![0usize; choices.len()];
        loop {
            let lift: Vec<i64> = idx
                .iter()
                .zip(&choices)
                .flat_map(|(&k, ch)| ch[k].iter().copied())
                .collect();
            out.insert(GammaClass::from_lift(&lift).expect("rank >= 2"));
            let mut k = idx.len();
            loop {
                if k == 0 {
                    return out.into_iter().collect();
                }
                k -= 1;
                if idx[k] + 1 < choices[k].len() {
                    idx[k] += 1;
                    for x in &mut idx[k + 1..] {
                        *x = 0;
                    }
                    break;
                }
            }
        }
    }
}

fn component_pattern(e: u32, f: u32, j: i64, shift: i64) -> Vec<i64> {
    let ones = (j as usize) * f as usize;
    let len = (e * f) as usize;
    (0..len).map(|k| shift + i64::from(k < ones)).collect()
}

/// `(q+1, ..., q+1, q, ..., q)` with the number of leading `q+1` a multiple of `f`.
fn is_staircase(slice: &[i64], f: usize) -> bool {
    let q = *slice.last().expect("nonempty component");
    let high = slice.iter().take_while(|&&x| x == q + 1).count();
    high % f == 0 && slice[high..].iter().all(|&x| x == q)
}

pub fn comm_block(l: &CommAlgebraLocal) -> CommBlock {
    CommBlock { n: l.degree(), components: l.components.clone() }
}

/// Either kind of host block for embedding questions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HostBlock {
    Grid(GridBlock),
    Comm(CommBlock),
}

impl HostBlock {
    pub fn rank(&self) -> usize {
        match self {
            HostBlock::Grid(g) => g.rank(),
            HostBlock::Comm(c) => c.rank(),
        }
    }

    pub fn contains(&self, x: &GammaClass) -> bool {
        match self {
            HostBlock::Grid(g) => g.contains(x),
            HostBlock::Comm(c) => c.contains(x),
        }
    }

    /// Finite vertex set searched for placements.
    pub fn search_vertices(&self, shift_bound: u64) -> Vec<GammaClass> {
        match self {
            HostBlock::Grid(g) => g.vertices(),
            HostBlock::Comm(c) => c.vertices_within(shift_bound),
        }
    }
}

impl From<GridBlock> for HostBlock {
    fn from(g: GridBlock) -> Self {
        HostBlock::Grid(g)
    }
}

impl From<CommBlock> for HostBlock {
    fn from(c: CommBlock) -> Self {
        HostBlock::Comm(c)
    }
}

/// Ordered pair of host vertices whose type distance is the guest type;
/// `c` is the image of the guest's `D_0`, `d` the image of `D_[b]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Placement {
    pub c: GammaClass,
    pub d: GammaClass,
}

impl Placement {
    /// Vertices of the block of `D_c ∩ D_d`, i.e. the guest grid carried
    /// onto this placement. Sorted.
    pub fn image_block(&self, guest: &GeoType) -> Vec<GammaClass> {
        let diff = &self.d - &self.c;
        let (rep, sigma) = diff.normalize_totally_positive();
        debug_assert_eq!(&rep, guest.class());
        let back = sigma.inverse();
        let mut out: Vec<GammaClass> = geo_block(guest)
            .vertices()
            .iter()
            .map(|t| &self.c + &t.act(&back).expect("same rank"))
            .collect();
        out.sort();
        out
    }
}

/// All ordered pairs `(c, d)` of host vertices with `d - c` in the
/// S_n-orbit of the guest type, sorted by `(c, d)`.
///
/// For a commutative host both vertices must come from the bounded search
/// set. `shift_bound` defaults to the guest's total length plus the rank:
/// the length covers every difference pattern, and the extra `n` lets the
/// free shifts reach every total distance modulo `n`.
pub fn placements(
    host: &HostBlock,
    guest: &GeoType,
    shift_bound: Option<u64>,
) -> Result<Vec<Placement>, BlockError> {
    if host.rank() != guest.rank() {
        return Err(BlockError::SizeMismatch { host: host.rank(), guest: guest.rank() });
    }
    let bound = shift_bound.unwrap_or_else(|| default_shift_bound(guest));
    let orbit = guest.class().orbit()?;
    let candidates = host.search_vertices(bound);
    let in_search: BTreeSet<&GammaClass> = candidates.iter().collect();
    let mut out = Vec::new();
    for c in &candidates {
        for o in &orbit {
            let d = c + o;
            if in_search.contains(&d) {
                out.push(Placement { c: c.clone(), d });
            }
        }
    }
    out.sort();
    Ok(out)
}

pub fn default_shift_bound(guest: &GeoType) -> u64 {
    guest.class().total_length() + guest.rank() as u64
}

pub fn embeds(host: &HostBlock, guest: &GeoType, shift_bound: Option<u64>) -> Result<bool, BlockError> {
    Ok(!placements(host, guest, shift_bound)?.is_empty())
}

/// A subset of `Z/n`, standing for the union of cosets `π^t O* k*^n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CosetSet {
    modulus: u64,
    residues: BTreeSet<u64>,
}

impl CosetSet {
    pub fn new(modulus: u64, residues: impl IntoIterator<Item = u64>) -> Self {
        assert!(modulus > 0, "modulus must be positive");
        CosetSet {
            modulus,
            residues: residues.into_iter().map(|r| r % modulus).collect(),
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn residues(&self) -> &BTreeSet<u64> {
        &self.residues
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty()
    }

    pub fn contains(&self, r: u64) -> bool {
        self.residues.contains(&(r % self.modulus))
    }

    /// `{g : g + S = S}`
    pub fn stabilizer(&self) -> BTreeSet<u64> {
        (0..self.modulus)
            .filter(|g| self.residues.iter().all(|r| self.contains(r + g)))
            .collect()
    }

    /// Nonempty and closed under subtraction.
    pub fn is_group(&self) -> bool {
        !self.is_empty()
            && self.residues.iter().all(|&x| {
                self.residues
                    .iter()
                    .all(|&y| self.contains(x + self.modulus - y))
            })
    }

    pub fn translate(&self, t: u64) -> CosetSet {
        CosetSet::new(self.modulus, self.residues.iter().map(|r| r + t))
    }
}

/// Total distances from the origin of the image of the guest's `D_0`,
/// over every placement. Empty when the guest does not embed.
pub fn relative_spinor_image(
    host: &HostBlock,
    guest: &GeoType,
    shift_bound: Option<u64>,
) -> Result<CosetSet, BlockError> {
    let n = guest.rank() as u64;
    let ps = placements(host, guest, shift_bound)?;
    Ok(CosetSet::new(n, ps.iter().map(|p| p.c.total_distance())))
}

/// Local spinor image of a GEO as the divisor `d` with `H = O* k*^d`:
/// `n/2` when the type is symmetric with total distance `n/2`, else `n`.
pub fn local_spinor_image(t: &GeoType) -> u64 {
    let n = t.rank() as u64;
    if n % 2 == 0 && t.is_symmetric() && t.total_distance() == n / 2 {
        n / 2
    } else {
        n
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geo(b: &[i64]) -> GeoType {
        GeoType::from_brackets(b).unwrap()
    }

    fn g(b: &[i64]) -> GammaClass {
        GammaClass::new(b.to_vec())
    }

    #[test]
    fn grid_sizes() {
        assert_eq!(geo_block(&geo(&[3, 1])).vertex_count(), 8);
        assert_eq!(geo_block(&geo(&[3, 1])).vertices().len(), 8);
        assert_eq!(geo_block(&geo(&[0, 0])).vertices(), vec![g(&[0, 0])]);
        assert_eq!(geo_block(&geo(&[1, 1])).vertex_count(), 4);
        let v = geo_block(&geo(&[1, 2])).vertices();
        assert_eq!(v.first(), Some(&g(&[0, 0])));
        assert_eq!(v.last(), Some(&g(&[1, 2])));
        assert!(v.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn rejects_non_totally_positive() {
        assert!(matches!(GeoType::from_brackets(&[1, -1]), Err(BlockError::NotTotallyPositive(_))));
    }

    #[test]
    fn line_type() {
        assert!(is_line_type(&geo(&[3, 0])));
        assert!(!is_line_type(&geo(&[2, 1])));
        assert!(is_line_type(&geo(&[0, 0])));
    }

    #[test]
    fn comm_block_shapes() {
        let ramified = comm_block(&CommAlgebraLocal::from_pairs(&[(2, 1), (1, 1)]).unwrap());
        for s in -3..=3 {
            assert!(ramified.contains(&g(&[0, s])));
            assert!(ramified.contains(&g(&[-1, s])));
            assert!(!ramified.contains(&g(&[1, s])));
            assert!(!ramified.contains(&g(&[-2, s])));
        }
        let split = comm_block(&CommAlgebraLocal::from_pairs(&[(1, 1), (1, 1), (1, 1)]).unwrap());
        assert!(split.contains(&g(&[5, -7])));
        let unramified = comm_block(&CommAlgebraLocal::from_pairs(&[(1, 3)]).unwrap());
        assert_eq!(unramified.vertices_within(4), vec![g(&[0, 0])]);
        assert!(!unramified.contains(&g(&[1, 0])));
        assert_eq!(ramified.simplex(0), vec![vec![0, 0], vec![1, 0]]);
        let mixed = comm_block(&CommAlgebraLocal::from_pairs(&[(2, 2)]).unwrap());
        assert_eq!(mixed.simplex(0), vec![vec![0, 0, 0, 0], vec![1, 1, 0, 0]]);
        assert!(CommAlgebraLocal::from_pairs(&[(1, 1)]).is_err());
        assert!(CommAlgebraLocal::from_pairs(&[(0, 2)]).is_err());
    }

    #[test]
    fn comm_search_set_is_inside_block() {
        let b = comm_block(&CommAlgebraLocal::from_pairs(&[(2, 1), (1, 2)]).unwrap());
        let vs = b.vertices_within(2);
        // 2 simplex choices, 5 shifts
        assert_eq!(vs.len(), 10);
        assert!(vs.iter().all(|v| b.contains(v)));
    }

    #[test]
    fn grid_embedding_counts() {
        let host: HostBlock = geo_block(&geo(&[4, 1])).into();
        let ps = placements(&host, &geo(&[3, 1]), None).unwrap();
        assert_eq!(ps.len(), 3);
        let img = relative_spinor_image(&host, &geo(&[3, 1]), None).unwrap();
        assert_eq!(img.residues().iter().copied().collect::<Vec<_>>(), vec![0, 1, 2]);
        assert!(img.is_group());

        let host: HostBlock = geo_block(&geo(&[4, 2])).into();
        assert_eq!(placements(&host, &geo(&[3, 2]), None).unwrap().len(), 2);
        let img = relative_spinor_image(&host, &geo(&[3, 2]), None).unwrap();
        assert_eq!(img.residues().iter().copied().collect::<Vec<_>>(), vec![0, 2]);
        assert!(!img.is_group());
        assert_eq!(img.stabilizer(), [0].into_iter().collect());
    }

    #[test]
    fn embeds_edge_cases() {
        let host: HostBlock = geo_block(&geo(&[1, 0])).into();
        assert!(!embeds(&host, &geo(&[2, 0]), None).unwrap());
        assert!(embeds(&host, &GeoType::maximal(3), None).unwrap());
        assert!(matches!(
            embeds(&host, &geo(&[1]), None),
            Err(BlockError::SizeMismatch { host: 3, guest: 2 })
        ));
        let same: HostBlock = geo_block(&geo(&[2, 3])).into();
        assert!(relative_spinor_image(&same, &geo(&[2, 3]), None).unwrap().contains(0));
    }

    #[test]
    fn commutative_host_embeds_one_two() {
        let host: HostBlock = comm_block(&CommAlgebraLocal::from_pairs(&[(2, 1), (1, 1)]).unwrap()).into();
        let guest = geo(&[1, 2]);
        let ps = placements(&host, &guest, None).unwrap();
        assert!(!ps.is_empty());
        for p in &ps {
            assert!(p.image_block(&guest).iter().all(|v| host.contains(v)));
        }
    }

    #[test]
    fn image_blocks_stay_in_host() {
        let guest = geo(&[3, 1]);
        let host: HostBlock = geo_block(&geo(&[4, 1])).into();
        for p in placements(&host, &guest, None).unwrap() {
            let img = p.image_block(&guest);
            assert_eq!(img.len(), 8);
            assert!(img.contains(&p.c) && img.contains(&p.d));
            assert!(img.iter().all(|v| host.contains(v)));
        }
    }

    #[test]
    fn local_images() {
        assert_eq!(local_spinor_image(&geo(&[1])), 1);
        assert_eq!(local_spinor_image(&geo(&[1, 1])), 3);
        assert_eq!(local_spinor_image(&geo(&[2])), 2);
        assert_eq!(local_spinor_image(&geo(&[3, 1])), 3);
        // [1,0,1]: lift (0,1,1,2), total 4 ≡ 0 mod 4
        assert_eq!(local_spinor_image(&geo(&[1, 0, 1])), 4);
        // [0,1,0]: lift (0,0,1,1), total 2 = 4/2
        assert_eq!(local_spinor_image(&geo(&[0, 1, 0])), 2);
    }

    #[test]
    fn coset_sets() {
        let s = CosetSet::new(6, [0, 2, 4]);
        assert!(s.is_group());
        assert_eq!(s.stabilizer(), [0, 2, 4].into_iter().collect());
        let t = CosetSet::new(6, [1, 3, 5]);
        assert!(!t.is_group());
        assert_eq!(t.stabilizer(), [0, 2, 4].into_iter().collect());
        assert!(!CosetSet::new(3, []).is_group());
        assert_eq!(s.translate(1), t);
    }
}
