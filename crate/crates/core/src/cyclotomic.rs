//! Exact arithmetic in Z[α], α a primitive 2^n-th root of unity.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::f2::BitVec;

pub const MIN_LEVEL: u32 = 3;
pub const MAX_LEVEL: u32 = 12;

/// The exponent n of the conductor 2^n.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Level(u32);

impl Level {
    pub fn new(n: u32) -> Result<Self> {
        if !(MIN_LEVEL..=MAX_LEVEL).contains(&n) {
            return Err(Error::LevelOutOfRange { n, min: MIN_LEVEL, max: MAX_LEVEL });
        }
        Ok(Level(n))
    }

    pub fn n(self) -> u32 {
        self.0
    }

    /// 2^n
    pub fn order(self) -> usize {
        1 << self.0
    }

    /// 2^{n-1}, the degree of Q(α)
    pub fn degree(self) -> usize {
        1 << (self.0 - 1)
    }

    /// 2^{n-2}, the degree of the real subfield
    pub fn real_degree(self) -> usize {
        1 << (self.0 - 2)
    }

    /// 2^{n-3}; s at this index is √2
    pub fn sqrt2_index(self) -> usize {
        1 << (self.0 - 3)
    }

    pub fn require_at_least(self, min: u32) -> Result<Self> {
        if self.0 < min {
            return Err(Error::LevelTooSmall { n: self.0, min });
        }
        Ok(self)
    }

    pub(crate) fn check_same(self, other: Level) -> Result<()> {
        if self != other {
            return Err(Error::LevelMismatch { left: self.0, right: other.0 });
        }
        Ok(())
    }

    /// Reduce an exponent of α into 0..2^n.
    pub fn reduce_exp(self, e: i64) -> usize {
        e.rem_euclid(self.order() as i64) as usize
    }
}

impl TryFrom<u32> for Level {
    type Error = Error;
    fn try_from(n: u32) -> Result<Self> {
        Level::new(n)
    }
}

impl From<Level> for u32 {
    fn from(l: Level) -> u32 {
        l.0
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An odd residue k mod 2^n, naming σ_k : α ↦ α^k.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GaloisIndex {
    level: Level,
    k: usize,
}

impl GaloisIndex {
    pub fn new(level: Level, k: i64) -> Result<Self> {
        if k.rem_euclid(2) == 0 {
            return Err(Error::EvenGaloisIndex(k));
        }
        Ok(GaloisIndex { level, k: level.reduce_exp(k) })
    }

    pub fn k(self) -> usize {
        self.k
    }

    pub fn level(self) -> Level {
        self.level
    }

    pub fn all(level: Level) -> impl Iterator<Item = GaloisIndex> {
        (1..level.order()).step_by(2).map(move |k| GaloisIndex { level, k })
    }

    pub fn compose(self, other: GaloisIndex) -> GaloisIndex {
        GaloisIndex { level: self.level, k: (self.k * other.k) % self.level.order() }
    }
}

/// Element of Z[α] as its 2^{n-1} coefficients on 1, α, …, α^{2^{n-1}-1}.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycInt {
    level: Level,
    coeffs: Vec<BigInt>,
}

impl CycInt {
    pub fn zero(level: Level) -> Self {
        CycInt { level, coeffs: vec![BigInt::zero(); level.degree()] }
    }

    pub fn from_int(level: Level, c: impl Into<BigInt>) -> Self {
        let mut a = Self::zero(level);
        a.coeffs[0] = c.into();
        a
    }

    pub fn one(level: Level) -> Self {
        Self::from_int(level, 1)
    }

    /// α^e for any integer e.
    pub fn monomial(level: Level, e: i64) -> Self {
        let mut a = Self::zero(level);
        let (idx, neg) = reduce_monomial(level, level.reduce_exp(e));
        a.coeffs[idx] = if neg { -BigInt::one() } else { BigInt::one() };
        a
    }

    pub fn from_coeffs(level: Level, coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.len() != level.degree() {
            return Err(Error::IndexOutOfRange { index: coeffs.len() as i64, what: "coefficient vector length" });
        }
        Ok(CycInt { level, coeffs })
    }

    pub fn from_i64s(level: Level, coeffs: &[i64]) -> Result<Self> {
        Self::from_coeffs(level, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> &BigInt {
        &self.coeffs[j]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The value if this is a rational integer.
    pub fn as_integer(&self) -> Option<&BigInt> {
        self.coeffs[1..].iter().all(Zero::is_zero).then(|| &self.coeffs[0])
    }

    pub fn checked_add(&self, other: &CycInt) -> Result<CycInt> {
        self.level.check_same(other.level)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(CycInt { level: self.level, coeffs })
    }

    pub fn checked_sub(&self, other: &CycInt) -> Result<CycInt> {
        self.level.check_same(other.level)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(CycInt { level: self.level, coeffs })
    }

    pub fn checked_mul(&self, other: &CycInt) -> Result<CycInt> {
        self.level.check_same(other.level)?;
        Ok(CycInt { level: self.level, coeffs: negacyclic_mul(&self.coeffs, &other.coeffs) })
    }

    pub fn scale(&self, c: &BigInt) -> CycInt {
        CycInt { level: self.level, coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn pow(&self, mut e: u64) -> CycInt {
        let mut base = self.clone();
        let mut acc = CycInt::one(self.level);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Multiplication by α^e, a signed rotation.
    pub fn mul_monomial(&self, e: i64) -> CycInt {
        let m = self.level.degree();
        let shift = self.level.reduce_exp(e);
        let mut out = vec![BigInt::zero(); m];
        for (j, c) in self.coeffs.iter().enumerate() {
            let (idx, neg) = reduce_monomial(self.level, (j + shift) % self.level.order());
            out[idx] = if neg { -c } else { c.clone() };
        }
        CycInt { level: self.level, coeffs: out }
    }

    pub fn galois(&self, k: i64) -> Result<CycInt> {
        Ok(self.apply(GaloisIndex::new(self.level, k)?))
    }

    pub fn apply(&self, sigma: GaloisIndex) -> CycInt {
        assert_eq!(sigma.level, self.level, "Galois index from another level");
        let order = self.level.order();
        let mut out = vec![BigInt::zero(); self.level.degree()];
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (idx, neg) = reduce_monomial(self.level, (j * sigma.k) % order);
            if neg {
                out[idx] -= c;
            } else {
                out[idx] += c;
            }
        }
        CycInt { level: self.level, coeffs: out }
    }

    /// Complex conjugation σ_{-1}.
    pub fn conj(&self) -> CycInt {
        self.apply(GaloisIndex { level: self.level, k: self.level.order() - 1 })
    }

    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }

    /// Trace to Q, read off the monomial trace table: 2^{n-1} times the constant term.
    pub fn trace(&self) -> BigInt {
        &self.coeffs[0] * BigInt::from(self.level.degree())
    }

    /// Trace as the literal sum of all conjugates.
    pub fn trace_by_conjugates(&self) -> Result<BigInt> {
        let mut sum = CycInt::zero(self.level);
        for sigma in GaloisIndex::all(self.level) {
            sum = &sum + &self.apply(sigma);
        }
        sum.as_integer()
            .cloned()
            .ok_or_else(|| Error::InternalInconsistency("sum of conjugates is not rational".into()))
    }

    /// Norm to Q. The conjugates are multiplied in the order of the tower
    /// Q(α) ⊃ Q(α²) ⊃ … ⊃ Q: at each stage a·σ(a) with σ: α ↦ -α must have
    /// vanishing odd coefficients.
    pub fn norm(&self) -> Result<BigInt> {
        let mut v = self.coeffs.clone();
        while v.len() > 1 {
            v = relative_norm(&v)?;
        }
        Ok(v.pop().unwrap())
    }

    /// Norm as the literal product of all 2^{n-1} conjugates.
    pub fn norm_by_conjugates(&self) -> Result<BigInt> {
        let mut prod = CycInt::one(self.level);
        for sigma in GaloisIndex::all(self.level) {
            prod = &prod * &self.apply(sigma);
        }
        prod.as_integer()
            .cloned()
            .ok_or_else(|| Error::InternalInconsistency("product of conjugates is not rational".into()))
    }

    /// Inverse of a unit as norm^{-1} times the product of the other conjugates,
    /// grouped along the same tower as `norm`.
    pub fn invert_unit(&self) -> Result<CycInt> {
        let norm = self.norm()?;
        if !norm.abs().is_one() {
            return Err(Error::NotAUnit { norm: norm.to_string() });
        }
        let inv = tower_inverse(&self.coeffs)?;
        let out = CycInt { level: self.level, coeffs: inv };
        if !(&out * self).is_one() {
            return Err(Error::InternalInconsistency("unit inverse check failed".into()));
        }
        Ok(out)
    }

    /// Coefficient parities.
    pub fn mod2_coords(&self) -> BitVec {
        BitVec::from_bools(&self.coeffs.iter().map(BigInt::is_odd).collect::<Vec<_>>())
    }

    pub fn is_one_mod2(&self) -> bool {
        let bits = self.mod2_coords();
        bits.get(0) && bits.count_ones() == 1
    }
}

/// α^e with 0 ≤ e < 2^n, as (index, negated).
fn reduce_monomial(level: Level, e: usize) -> (usize, bool) {
    let m = level.degree();
    if e >= m {
        (e - m, true)
    } else {
        (e, false)
    }
}

fn negacyclic_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let m = a.len();
    let mut out = vec![BigInt::zero(); m];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            let p = x * y;
            if i + j < m {
                out[i + j] += p;
            } else {
                out[i + j - m] -= p;
            }
        }
    }
    out
}

fn flip_odd(v: &[BigInt]) -> Vec<BigInt> {
    v.iter().enumerate().map(|(j, c)| if j % 2 == 1 { -c } else { c.clone() }).collect()
}

/// a·σ(a) for σ: α ↦ -α, returned in the subring generated by α².
fn relative_norm(v: &[BigInt]) -> Result<Vec<BigInt>> {
    if v.len() == 1 {
        return Ok(v.to_vec());
    }
    let prod = negacyclic_mul(v, &flip_odd(v));
    if prod.iter().skip(1).step_by(2).any(|c| !c.is_zero()) {
        return Err(Error::InternalInconsistency("relative norm has odd terms".into()));
    }
    Ok(prod.into_iter().step_by(2).collect())
}

fn tower_inverse(v: &[BigInt]) -> Result<Vec<BigInt>> {
    if v.len() == 1 {
        if v[0].abs().is_one() {
            return Ok(v.to_vec());
        }
        return Err(Error::InternalInconsistency("tower inverse reached a non-unit".into()));
    }
    let sub_inv = tower_inverse(&relative_norm(v)?)?;
    let mut lifted = vec![BigInt::zero(); v.len()];
    for (i, c) in sub_inv.into_iter().enumerate() {
        lifted[2 * i] = c;
    }
    Ok(negacyclic_mul(&flip_odd(v), &lifted))
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        /// Panics if the operands live at different levels; use the
        /// `checked_*` method to get an error instead.
        impl $trait<&CycInt> for &CycInt {
            type Output = CycInt;
            fn $method(self, rhs: &CycInt) -> CycInt {
                self.$checked(rhs).expect("level mismatch")
            }
        }
        impl $trait<CycInt> for CycInt {
            type Output = CycInt;
            fn $method(self, rhs: CycInt) -> CycInt {
                (&self).$checked(&rhs).expect("level mismatch")
            }
        }
        impl $trait<&CycInt> for CycInt {
            type Output = CycInt;
            fn $method(self, rhs: &CycInt) -> CycInt {
                (&self).$checked(rhs).expect("level mismatch")
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        CycInt { level: self.level, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        -&self
    }
}

impl fmt::Debug for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycInt(n={}, {})", self.level, self)
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else if first { "" } else { "+" };
            let body = match (j, mag.is_one()) {
                (0, _) => mag.to_string(),
                (1, true) => "a".to_string(),
                (_, true) => format!("a^{j}"),
                (1, false) => format!("{mag}*a"),
                (_, false) => format!("{mag}*a^{j}"),
            };
            write!(f, "{sign}{body}")?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct CycIntRepr {
    n: u32,
    coeffs: Vec<String>,
}

impl Serialize for CycInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CycIntRepr { n: self.level.n(), coeffs: self.coeffs.iter().map(ToString::to_string).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycInt {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = CycIntRepr::deserialize(d)?;
        let level = Level::new(repr.n).map_err(D::Error::custom)?;
        let coeffs = repr
            .coeffs
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(D::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        CycInt::from_coeffs(level, coeffs).map_err(D::Error::custom)
    }
}
