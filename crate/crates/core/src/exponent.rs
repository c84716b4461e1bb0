//! The value group Γ = ℚ^d under lexicographic order.
//!
//! Besides the ordered-group operations this module carries the exact
//! ℚ-linear algebra used to reason about subgroups of Γ: membership in the
//! rational span of a set of generators (with a checkable certificate) and
//! linear independence modulo such a span.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// An element of Γ = ℚ^d. Coordinates are kept in lowest terms, so equality
/// is structural.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Exponent {
    coords: Vec<BigRational>,
}

impl Exponent {
    pub fn new(coords: Vec<BigRational>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Config("exponent dimension must be at least 1".into()));
        }
        Ok(Exponent { coords })
    }

    pub fn zero(dim: usize) -> Self {
        assert!(dim >= 1, "exponent dimension must be at least 1");
        Exponent {
            coords: vec![BigRational::zero(); dim],
        }
    }

    /// The one-dimensional exponent `q`.
    pub fn scalar(q: BigRational) -> Self {
        Exponent { coords: vec![q] }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Exponent::new(coords.iter().map(|&c| BigRational::from_integer(c.into())).collect())
            .expect("nonempty coordinates")
    }

    /// The `i`-th unit vector scaled by `q`.
    pub fn axis(dim: usize, i: usize, q: BigRational) -> Self {
        let mut e = Exponent::zero(dim);
        e.coords[i] = q;
        e
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    /// Sign of the first nonzero coordinate.
    pub fn signum(&self) -> Ordering {
        self.leading_index()
            .map(|i| self.coords[i].cmp(&BigRational::zero()))
            .unwrap_or(Ordering::Equal)
    }

    /// Index of the first nonzero coordinate, `None` for the zero vector.
    pub fn leading_index(&self) -> Option<usize> {
        self.coords.iter().position(|c| !c.is_zero())
    }

    fn check_dim(&self, other: &Exponent) -> Result<()> {
        if self.dim() == other.dim() {
            Ok(())
        } else {
            Err(Error::dim(self.dim(), other.dim()))
        }
    }

    pub fn checked_add(&self, other: &Exponent) -> Result<Exponent> {
        self.check_dim(other)?;
        Ok(self + other)
    }

    pub fn checked_sub(&self, other: &Exponent) -> Result<Exponent> {
        self.check_dim(other)?;
        Ok(self - other)
    }

    pub fn scale(&self, q: &BigRational) -> Exponent {
        Exponent {
            coords: self.coords.iter().map(|c| c * q).collect(),
        }
    }

    pub fn scale_int(&self, k: i64) -> Exponent {
        self.scale(&BigRational::from_integer(BigInt::from(k)))
    }

    /// Inner product with a weight vector of the same dimension.
    pub fn dot(&self, weights: &[BigRational]) -> BigRational {
        self.coords
            .iter()
            .zip(weights)
            .fold(BigRational::zero(), |acc, (c, w)| acc + c * w)
    }
}

/// Lexicographic comparison with a dimension check.
pub fn lex_cmp(a: &Exponent, b: &Exponent) -> Result<Ordering> {
    a.check_dim(b)?;
    Ok(a.cmp(b))
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coords
            .len()
            .cmp(&other.coords.len())
            .then_with(|| self.coords.cmp(&other.coords))
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> std::ops::Add<&'a Exponent> for &'a Exponent {
    type Output = Exponent;
    fn add(self, rhs: &Exponent) -> Exponent {
        debug_assert_eq!(self.dim(), rhs.dim());
        Exponent {
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> std::ops::Sub<&'a Exponent> for &'a Exponent {
    type Output = Exponent;
    fn sub(self, rhs: &Exponent) -> Exponent {
        debug_assert_eq!(self.dim(), rhs.dim());
        Exponent {
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect(),
        }
    }
}

impl std::ops::Neg for &Exponent {
    type Output = Exponent;
    fn neg(self) -> Exponent {
        Exponent {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

pub(crate) fn fmt_rational(q: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if q.is_integer() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dim() == 1 {
            return fmt_rational(&self.coords[0], f);
        }
        f.write_str("[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            fmt_rational(c, f)?;
        }
        f.write_str("]")
    }
}

/// A truncation point: a finite exponent or +∞ (exactly known).
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Bound {
    Finite(Exponent),
    Infinity,
}

impl Bound {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Bound::Infinity)
    }

    pub fn finite(&self) -> Option<&Exponent> {
        match self {
            Bound::Finite(e) => Some(e),
            Bound::Infinity => None,
        }
    }

    /// Shift by a finite exponent; +∞ absorbs.
    pub fn shift(&self, by: &Exponent) -> Bound {
        match self {
            Bound::Finite(e) => Bound::Finite(e + by),
            Bound::Infinity => Bound::Infinity,
        }
    }

    pub fn unshift(&self, by: &Exponent) -> Bound {
        match self {
            Bound::Finite(e) => Bound::Finite(e - by),
            Bound::Infinity => Bound::Infinity,
        }
    }

    /// True when `e` lies strictly below the bound.
    pub fn admits(&self, e: &Exponent) -> bool {
        match self {
            Bound::Finite(c) => e < c,
            Bound::Infinity => true,
        }
    }
}

impl From<Exponent> for Bound {
    fn from(e: Exponent) -> Self {
        Bound::Finite(e)
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Finite(e) => e.fmt(f),
            Bound::Infinity => f.write_str("+inf"),
        }
    }
}

/// Finite generating set of a subgroup of Γ; the group it denotes is the
/// ℚ-span (divisible hull) of the generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupBasis {
    dim: usize,
    generators: Vec<Exponent>,
}

impl SubgroupBasis {
    /// Duplicated generators are dropped; the spanned group is unchanged.
    pub fn new(dim: usize, generators: Vec<Exponent>) -> Result<Self> {
        let mut gens: Vec<Exponent> = Vec::with_capacity(generators.len());
        for g in generators {
            if g.dim() != dim {
                return Err(Error::dim(dim, g.dim()));
            }
            if !gens.contains(&g) {
                gens.push(g);
            }
        }
        Ok(SubgroupBasis {
            dim,
            generators: gens,
        })
    }

    pub fn trivial(dim: usize) -> Self {
        SubgroupBasis {
            dim,
            generators: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Exponent] {
        &self.generators
    }
}

/// Row reduction over ℚ. Returns the reduced row echelon form together with
/// the pivot column of each nonzero row.
fn rref(mut m: Vec<Vec<BigRational>>, cols: usize) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for x in m[row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                let pivot_row = m[row].clone();
                for (x, y) in m[r].iter_mut().zip(&pivot_row) {
                    *x -= &factor * y;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    (m, pivots)
}

/// Rank over ℚ of a list of vectors.
pub fn rank(vectors: &[Exponent]) -> usize {
    let Some(first) = vectors.first() else {
        return 0;
    };
    let rows = vectors.iter().map(|v| v.coords.clone()).collect();
    rref(rows, first.dim()).1.len()
}

/// Decide whether `g` lies in the ℚ-span of `basis`. On success returns
/// rational coefficients `c` with `Σ c_i · b_i = g`, verified exactly.
pub fn q_member(g: &Exponent, basis: &SubgroupBasis) -> Result<Option<Vec<BigRational>>> {
    if g.dim() != basis.dim {
        return Err(Error::dim(basis.dim, g.dim()));
    }
    let gens = &basis.generators;
    let n = gens.len();
    // Augmented system: one row per coordinate, one column per generator.
    let rows: Vec<Vec<BigRational>> = (0..g.dim())
        .map(|i| {
            let mut row: Vec<BigRational> = gens.iter().map(|b| b.coords[i].clone()).collect();
            row.push(g.coords[i].clone());
            row
        })
        .collect();
    let (reduced, pivots) = rref(rows, n + 1);
    if pivots.last() == Some(&n) {
        return Ok(None);
    }
    let mut cert = vec![BigRational::zero(); n];
    for (r, &col) in pivots.iter().enumerate() {
        cert[col] = reduced[r][n].clone();
    }
    debug_assert_eq!(&recombine(g.dim(), gens, &cert), g);
    Ok(Some(cert))
}

/// `Σ c_i · b_i`.
pub fn recombine(dim: usize, gens: &[Exponent], cert: &[BigRational]) -> Exponent {
    gens.iter()
        .zip(cert)
        .fold(Exponent::zero(dim), |acc, (b, c)| &acc + &b.scale(c))
}

/// True iff the images of `gs` in ℚ^d / span(basis) are linearly independent.
pub fn q_independent(gs: &[Exponent], basis: &SubgroupBasis) -> Result<bool> {
    for g in gs {
        if g.dim() != basis.dim {
            return Err(Error::dim(basis.dim, g.dim()));
        }
    }
    let base_rank = rank(&basis.generators);
    let mut stacked = basis.generators.clone();
    stacked.extend(gs.iter().cloned());
    Ok(rank(&stacked) == base_rank + gs.len())
}

/// Least `k ≥ 0` with `k · step ≥ gap`, for `step > 0`.
///
/// Under lexicographic order this fails when the leading coordinate of `step`
/// sits strictly after that of a positive `gap`: every multiple of `step` is
/// then infinitesimal relative to `gap`.
pub fn steps_to_reach(step: &Exponent, gap: &Exponent) -> Result<usize> {
    debug_assert!(step.is_positive());
    if !gap.is_positive() {
        return Ok(0);
    }
    let si = step.leading_index().expect("positive step");
    let gi = gap.leading_index().expect("positive gap");
    let unreachable = || Error::CutoffUnreachable {
        valuation: step.to_string(),
        gap: gap.to_string(),
    };
    if si > gi {
        return Err(unreachable());
    }
    let mut k: BigInt = if si < gi {
        BigInt::one()
    } else {
        (&gap.coords[si] / &step.coords[si]).ceil().to_integer()
    };
    if k < BigInt::one() {
        k = BigInt::one();
    }
    loop {
        let kq = BigRational::from_integer(k.clone());
        if step.scale(&kq) >= *gap {
            break;
        }
        k += 1;
    }
    usize::try_from(k).map_err(|_| unreachable())
}
