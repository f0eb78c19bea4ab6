//! The group `Z^n / <(1,...,1)>` indexing the vertices of the standard
//! apartment.
//!
//! A class is stored by its bracket coordinates `[b_1, ..., b_{n-1}]`, the
//! successive differences of any lift `a` in `Z^n`. The canonical lift has
//! `a_1 = 0`, so equality of classes is structural equality of brackets.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest rank for which orbits are enumerated (8! permutations).
pub const DEFAULT_ORBIT_BOUND: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GammaError {
    #[error("a lift needs at least two coordinates, got {0}")]
    LengthMismatch(usize),
    #[error("rank mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("rank {n} exceeds the enumeration bound {bound}")]
    RankTooLarge { n: usize, bound: usize },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "GammaRepr", into = "GammaRepr")]
pub struct GammaClass {
    b: Vec<i64>,
}

/// Wire form `{"n": int, "b": [int]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
struct GammaRepr {
    n: usize,
    b: Vec<i64>,
}

impl TryFrom<GammaRepr> for GammaClass {
    type Error = String;

    fn try_from(r: GammaRepr) -> Result<Self, String> {
        if r.n < 2 {
            return Err(format!("rank must be at least 2, got {}", r.n));
        }
        if r.b.len() + 1 != r.n {
            return Err(format!("rank {} needs {} bracket entries, got {}", r.n, r.n - 1, r.b.len()));
        }
        Ok(GammaClass { b: r.b })
    }
}

impl From<GammaClass> for GammaRepr {
    fn from(g: GammaClass) -> Self {
        GammaRepr { n: g.rank(), b: g.b }
    }
}

impl GammaClass {
    /// Class with the given bracket coordinates. Panics on an empty vector,
    /// since rank 1 has no bracket representation.
    pub fn new(b: Vec<i64>) -> Self {
        assert!(!b.is_empty(), "bracket vector must be nonempty (rank >= 2)");
        GammaClass { b }
    }

    pub fn try_new(b: Vec<i64>) -> Result<Self, GammaError> {
        if b.is_empty() {
            return Err(GammaError::LengthMismatch(1));
        }
        Ok(GammaClass { b })
    }

    pub fn zero(n: usize) -> Self {
        assert!(n >= 2, "rank must be at least 2");
        GammaClass { b: vec![0; n - 1] }
    }

    /// Class of a lift `a`: `b_i = a_{i+1} - a_i`.
    pub fn from_lift(a: &[i64]) -> Result<Self, GammaError> {
        if a.len() < 2 {
            return Err(GammaError::LengthMismatch(a.len()));
        }
        Ok(GammaClass { b: a.windows(2).map(|w| w[1] - w[0]).collect() })
    }

    pub fn rank(&self) -> usize {
        self.b.len() + 1
    }

    pub fn brackets(&self) -> &[i64] {
        &self.b
    }

    /// Lift with `a_1 = 0`.
    pub fn canonical_lift(&self) -> Vec<i64> {
        let mut a = Vec::with_capacity(self.rank());
        let mut acc = 0;
        a.push(0);
        for &x in &self.b {
            acc += x;
            a.push(acc);
        }
        a
    }

    pub fn total_length(&self) -> u64 {
        self.b.iter().map(|x| x.unsigned_abs()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.b.iter().all(|&x| x == 0)
    }

    pub fn is_totally_positive(&self) -> bool {
        self.b.iter().all(|&x| x >= 0)
    }

    /// `[b]* = [-b_{n-1}, ..., -b_1]`; the image under the reversing permutation.
    pub fn star(&self) -> Self {
        GammaClass { b: self.b.iter().rev().map(|x| -x).collect() }
    }

    /// Palindromic bracket vector, equivalently `star(x) == -x`.
    pub fn is_symmetric(&self) -> bool {
        self.b.iter().eq(self.b.iter().rev())
    }

    /// Sum of the canonical lift modulo the rank.
    pub fn total_distance(&self) -> u64 {
        let n = self.rank() as i64;
        self.canonical_lift().iter().sum::<i64>().rem_euclid(n) as u64
    }

    pub fn act(&self, sigma: &Permutation) -> Result<Self, GammaError> {
        if sigma.degree() != self.rank() {
            return Err(GammaError::SizeMismatch(sigma.degree(), self.rank()));
        }
        let a = self.canonical_lift();
        let inv = sigma.inverse();
        let moved: Vec<i64> = (0..a.len()).map(|i| a[inv.image(i)]).collect();
        GammaClass::from_lift(&moved)
    }

    /// The S_n-orbit, sorted. Fails for ranks above `bound`.
    pub fn orbit_bounded(&self, bound: usize) -> Result<BTreeSet<GammaClass>, GammaError> {
        let n = self.rank();
        if n > bound {
            return Err(GammaError::RankTooLarge { n, bound });
        }
        let a = self.canonical_lift();
        let mut out = BTreeSet::new();
        for_each_permutation(n, |perm| {
            let moved: Vec<i64> = perm.iter().map(|&i| a[i]).collect();
            out.insert(GammaClass::from_lift(&moved).expect("rank >= 2"));
        });
        Ok(out)
    }

    pub fn orbit(&self) -> Result<BTreeSet<GammaClass>, GammaError> {
        self.orbit_bounded(DEFAULT_ORBIT_BOUND)
    }

    /// Unique totally positive member of the orbit, with a permutation
    /// mapping `self` onto it.
    pub fn normalize_totally_positive(&self) -> (GammaClass, Permutation) {
        let a = self.canonical_lift();
        let mut order: Vec<usize> = (0..a.len()).collect();
        order.sort_by_key(|&i| (a[i], i));
        // position i of the result reads a[order[i]], so sigma^{-1} = order
        let inv = Permutation { images: order };
        let sigma = inv.inverse();
        let sorted: Vec<i64> = inv.images.iter().map(|&i| a[i]).collect();
        (GammaClass::from_lift(&sorted).expect("rank >= 2"), sigma)
    }

    pub fn checked_add(&self, rhs: &GammaClass) -> Result<GammaClass, GammaError> {
        self.same_rank(rhs)?;
        Ok(GammaClass { b: self.b.iter().zip(&rhs.b).map(|(x, y)| x + y).collect() })
    }

    pub fn checked_sub(&self, rhs: &GammaClass) -> Result<GammaClass, GammaError> {
        self.same_rank(rhs)?;
        Ok(GammaClass { b: self.b.iter().zip(&rhs.b).map(|(x, y)| x - y).collect() })
    }

    fn same_rank(&self, rhs: &GammaClass) -> Result<(), GammaError> {
        if self.rank() == rhs.rank() {
            Ok(())
        } else {
            Err(GammaError::SizeMismatch(self.rank(), rhs.rank()))
        }
    }
}

impl fmt::Display for GammaClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, x) in self.b.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("]")
    }
}

impl Neg for &GammaClass {
    type Output = GammaClass;
    fn neg(self) -> GammaClass {
        GammaClass { b: self.b.iter().map(|x| -x).collect() }
    }
}

impl Neg for GammaClass {
    type Output = GammaClass;
    fn neg(self) -> GammaClass {
        -&self
    }
}

/// Panics on rank mismatch; use [`GammaClass::checked_add`] otherwise.
impl Add for &GammaClass {
    type Output = GammaClass;
    fn add(self, rhs: &GammaClass) -> GammaClass {
        self.checked_add(rhs).expect("rank mismatch")
    }
}

impl Sub for &GammaClass {
    type Output = GammaClass;
    fn sub(self, rhs: &GammaClass) -> GammaClass {
        self.checked_sub(rhs).expect("rank mismatch")
    }
}

/// Type distance between two apartment vertices: the sorted coordinate
/// differences of the lifts, normalized to minimum 0, plus their sum mod n.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TypeDistance {
    pub exponents: Vec<i64>,
    pub total: u64,
}

impl TypeDistance {
    /// The totally positive class whose canonical lift is `exponents`.
    pub fn as_class(&self) -> GammaClass {
        GammaClass::from_lift(&self.exponents).expect("rank >= 2")
    }
}

pub fn type_distance(from: &GammaClass, to: &GammaClass) -> Result<TypeDistance, GammaError> {
    from.same_rank(to)?;
    let n = from.rank() as i64;
    let mut diff: Vec<i64> = to
        .canonical_lift()
        .iter()
        .zip(from.canonical_lift())
        .map(|(d, c)| d - c)
        .collect();
    diff.sort_unstable();
    let total = diff.iter().sum::<i64>().rem_euclid(n) as u64;
    let min = diff[0];
    for x in &mut diff {
        *x -= min;
    }
    Ok(TypeDistance { exponents: diff, total })
}

/// A permutation of `{0, ..., n-1}`, written 1-based in cycle notation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n).collect() }
    }

    /// From 0-based images; must be a bijection.
    pub fn from_images(images: Vec<usize>) -> Result<Self, GammaError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(GammaError::InvalidPermutation(format!("{images:?} is not a bijection")));
            }
        }
        Ok(Permutation { images })
    }

    /// Parses 1-based cycle notation such as `"(12)(345)"` or `"(1 2)(3 4 5)"`.
    /// Without separators every digit is its own point, so ranks above 9
    /// need spaces or commas.
    pub fn parse_cycles(s: &str, n: usize) -> Result<Self, GammaError> {
        let bad = |msg: &str| GammaError::InvalidPermutation(format!("{s:?}: {msg}"));
        let mut images: Vec<usize> = (0..n).collect();
        let mut seen = vec![false; n];
        let mut rest = s.trim();
        while !rest.is_empty() {
            let body_start = rest.strip_prefix('(').ok_or_else(|| bad("expected '('"))?;
            let close = body_start.find(')').ok_or_else(|| bad("unclosed cycle"))?;
            let body = &body_start[..close];
            rest = body_start[close + 1..].trim_start();
            let points: Vec<usize> = if body.contains([' ', ',']) {
                body.split([' ', ','])
                    .filter(|t| !t.is_empty())
                    .map(|t| t.parse::<usize>().map_err(|_| bad("non-numeric point")))
                    .collect::<Result<_, _>>()?
            } else {
                body.chars()
                    .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(|| bad("non-numeric point")))
                    .collect::<Result<_, _>>()?
            };
            for &pt in &points {
                if pt == 0 || pt > n {
                    return Err(bad("point out of range"));
                }
                if std::mem::replace(&mut seen[pt - 1], true) {
                    return Err(bad("point repeated"));
                }
            }
            for (k, &pt) in points.iter().enumerate() {
                images[pt - 1] = points[(k + 1) % points.len()] - 1;
            }
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { images: inv }
    }

    /// `(self ∘ other)(i) = self(other(i))`
    pub fn compose(&self, other: &Permutation) -> Self {
        Permutation { images: other.images.iter().map(|&i| self.images[i]).collect() }
    }

    /// Permutation reversing `(1, ..., n)`.
    pub fn reversal(n: usize) -> Self {
        Permutation { images: (0..n).rev().collect() }
    }

    /// Every permutation of degree `n`, in lexicographic order of images.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        for_each_permutation(n, |p| out.push(Permutation { images: p.to_vec() }));
        out
    }
}

impl fmt::Display for Permutation {
    /// 1-based cycle notation, fixed points omitted; identity prints `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.images.len();
        let mut done = vec![false; n];
        let mut wrote = false;
        for start in 0..n {
            if done[start] || self.images[start] == start {
                continue;
            }
            f.write_str("(")?;
            let mut i = start;
            let mut first = true;
            while !done[i] {
                done[i] = true;
                if !first {
                    f.write_str(" ")?;
                }
                write!(f, "{}", i + 1)?;
                first = false;
                i = self.images[i];
            }
            f.write_str(")")?;
            wrote = true;
        }
        if !wrote {
            f.write_str("()")?;
        }
        Ok(())
    }
}

/// Calls `visit` on every arrangement of `0..n` in lexicographic order.
fn for_each_permutation(n: usize, mut visit: impl FnMut(&[usize])) {
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        visit(&p);
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| p[i] < p[i + 1]) else {
            return;
        };
        let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).expect("successor exists");
        p.swap(i, j);
        p[i + 1..].reverse();
    }
}
