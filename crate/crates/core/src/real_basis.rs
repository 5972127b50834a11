//! The real subfield Q(α + α^{-1}): the sequences s, d, r, the s-basis,
//! the special basis B and coordinates modulo 2.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::cyclotomic::{CycInt, Level};
use crate::error::{Error, Result};
use crate::f2::BitVec;

/// s_j = α^j + α^{-j}
pub fn seq_s(level: Level, j: i64) -> CycInt {
    &CycInt::monomial(level, j) + &CycInt::monomial(level, -j)
}

/// d_j = 1 + s_j
pub fn seq_d(level: Level, j: i64) -> CycInt {
    &CycInt::one(level) + &seq_s(level, j)
}

/// r_j = s_j + s_{2^{n-2}-j}
pub fn seq_r(level: Level, j: i64) -> CycInt {
    &seq_s(level, j) + &seq_s(level, level.real_degree() as i64 - j)
}

/// An index into the sequences s, d, r, with its canonical residues.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeqIndex(pub i64);

impl SeqIndex {
    /// Representative in 0..=2^{n-1} with s_j = s_rep exactly.
    pub fn s_exact(self, level: Level) -> usize {
        let j = level.reduce_exp(self.0);
        j.min(level.order() - j)
    }

    /// Representative in 0..=2^{n-2} with s_j ≡ s_rep (mod 2).
    pub fn s_mod2(self, level: Level) -> usize {
        let j = self.0.rem_euclid(level.degree() as i64) as usize;
        j.min(level.degree() - j)
    }

    /// Representative in 0..=2^{n-3} with r_j ≡ r_rep (mod 2).
    pub fn r_mod2(self, level: Level) -> usize {
        let j = self.0.rem_euclid(level.real_degree() as i64) as usize;
        j.min(level.real_degree() - j)
    }
}

/// Element of Z[s_1] over (1, s_1, …, s_{2^{n-2}-1}).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealElem {
    level: Level,
    s_coords: Vec<BigInt>,
}

impl RealElem {
    pub fn new(level: Level, s_coords: Vec<BigInt>) -> Result<Self> {
        if s_coords.len() != level.real_degree() {
            return Err(Error::IndexOutOfRange { index: s_coords.len() as i64, what: "s-coordinate vector length" });
        }
        Ok(RealElem { level, s_coords })
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn s_coords(&self) -> &[BigInt] {
        &self.s_coords
    }

    pub fn to_cyc(&self) -> CycInt {
        let mut acc = CycInt::from_int(self.level, self.s_coords[0].clone());
        for (j, c) in self.s_coords.iter().enumerate().skip(1) {
            if !c.is_zero() {
                acc = &acc + &seq_s(self.level, j as i64).scale(c);
            }
        }
        acc
    }

    /// Integer coordinates over B; s_{2^{n-3}+j} is rewritten as r_{2^{n-3}-j} - s_{2^{n-3}-j}.
    pub fn to_special(&self) -> Vec<BigInt> {
        let t = self.level.sqrt2_index();
        let c = &self.s_coords;
        let mut out = vec![BigInt::zero(); 2 * t];
        out[0] = c[0].clone();
        out[t] = c[t].clone();
        for i in 1..t {
            out[i] = &c[i] - &c[2 * t - i];
            out[t + i] = c[2 * t - i].clone();
        }
        out
    }

    pub fn from_special(level: Level, b: &[BigInt]) -> Result<RealElem> {
        let t = level.sqrt2_index();
        if b.len() != 2 * t {
            return Err(Error::IndexOutOfRange { index: b.len() as i64, what: "special coordinate vector length" });
        }
        let mut c = vec![BigInt::zero(); 2 * t];
        c[0] = b[0].clone();
        c[t] = b[t].clone();
        for i in 1..t {
            c[i] = &b[i] + &b[t + i];
            c[2 * t - i] = b[t + i].clone();
        }
        Ok(RealElem { level, s_coords: c })
    }
}

/// Coordinates of a real element on the s-basis. For real a the coefficient
/// of α^j (0 < j < 2^{n-2}) is already its s_j-coordinate.
pub fn to_s_basis(a: &CycInt) -> Result<RealElem> {
    if !a.is_real() {
        return Err(Error::NotReal);
    }
    let h = a.level().real_degree();
    let out = RealElem { level: a.level(), s_coords: a.coeffs()[..h].to_vec() };
    if out.to_cyc() != *a {
        return Err(Error::InternalInconsistency("s-basis projection does not round-trip".into()));
    }
    Ok(out)
}

/// A member of the special basis B.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisElem {
    One,
    /// s_i, 1 ≤ i ≤ 2^{n-3}
    S(usize),
    /// r_i, 1 ≤ i < 2^{n-3}
    R(usize),
}

impl BasisElem {
    pub fn position(self, level: Level) -> usize {
        let t = level.sqrt2_index();
        match self {
            BasisElem::One => 0,
            BasisElem::S(i) => {
                assert!((1..=t).contains(&i), "s_{i} not in B");
                i
            }
            BasisElem::R(i) => {
                assert!((1..t).contains(&i), "r_{i} not in B");
                t + i
            }
        }
    }

    pub fn from_position(level: Level, p: usize) -> BasisElem {
        let t = level.sqrt2_index();
        match p {
            0 => BasisElem::One,
            p if p <= t => BasisElem::S(p),
            p => {
                assert!(p < 2 * t, "position {p} outside B");
                BasisElem::R(p - t)
            }
        }
    }

    pub fn all(level: Level) -> impl Iterator<Item = BasisElem> {
        (0..level.real_degree()).map(move |p| BasisElem::from_position(level, p))
    }

    pub fn to_cyc(self, level: Level) -> CycInt {
        match self {
            BasisElem::One => CycInt::one(level),
            BasisElem::S(i) => seq_s(level, i as i64),
            BasisElem::R(i) => seq_r(level, i as i64),
        }
    }
}

impl fmt::Display for BasisElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisElem::One => write!(f, "1"),
            BasisElem::S(i) => write!(f, "s_{i}"),
            BasisElem::R(i) => write!(f, "r_{i}"),
        }
    }
}

/// F2 coordinates over B. Position 0 is 1, positions 1..=2^{n-3} are s_i,
/// the rest are r_i.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SpecialCoordsMod2 {
    level: Level,
    bits: BitVec,
}

impl SpecialCoordsMod2 {
    pub fn zero(level: Level) -> Self {
        SpecialCoordsMod2 { level, bits: BitVec::zeros(level.real_degree()) }
    }

    pub fn one(level: Level) -> Self {
        Self::basis(level, BasisElem::One)
    }

    pub fn basis(level: Level, e: BasisElem) -> Self {
        SpecialCoordsMod2 { level, bits: BitVec::unit(level.real_degree(), e.position(level)) }
    }

    pub fn from_terms(level: Level, terms: impl IntoIterator<Item = BasisElem>) -> Self {
        let bits = BitVec::from_ones(level.real_degree(), terms.into_iter().map(|e| e.position(level)));
        SpecialCoordsMod2 { level, bits }
    }

    pub fn from_bits(level: Level, bits: BitVec) -> Result<Self> {
        if bits.len() != level.real_degree() {
            return Err(Error::IndexOutOfRange { index: bits.len() as i64, what: "special coordinate vector length" });
        }
        Ok(SpecialCoordsMod2 { level, bits })
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn bits(&self) -> &BitVec {
        &self.bits
    }

    pub fn terms(&self) -> Vec<BasisElem> {
        self.bits.iter_ones().map(|p| BasisElem::from_position(self.level, p)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.bits.is_zero()
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one(self.level)
    }

    /// Supported on the r-block only.
    pub fn in_rtilde(&self) -> bool {
        self.bits.iter_ones().all(|p| p > self.level.sqrt2_index())
    }

    pub fn add(&self, other: &SpecialCoordsMod2) -> SpecialCoordsMod2 {
        SpecialCoordsMod2 { level: self.level, bits: self.bits.xor(&other.bits) }
    }

    /// The non-constant part, i.e. positions 1.. of B.
    pub fn tail(&self) -> BitVec {
        self.bits.slice(1, self.bits.len())
    }

    /// Class of a real element given by its α-coefficient parities.
    pub fn from_alpha_parities(level: Level, parities: &BitVec) -> Result<Self> {
        let (m, h, t) = (level.degree(), level.real_degree(), level.sqrt2_index());
        if parities.len() != m {
            return Err(Error::IndexOutOfRange { index: parities.len() as i64, what: "parity vector length" });
        }
        if parities.get(h) || (1..h).any(|j| parities.get(j) != parities.get(m - j)) {
            return Err(Error::NotReal);
        }
        let mut bits = BitVec::zeros(h);
        bits.set(0, parities.get(0));
        bits.set(t, parities.get(t));
        for i in 1..t {
            bits.set(i, parities.get(i) ^ parities.get(2 * t - i));
            bits.set(t + i, parities.get(2 * t - i));
        }
        Ok(SpecialCoordsMod2 { level, bits })
    }

    /// The same class on the s-basis, as parities of (1, s_1, …, s_{2^{n-2}-1}).
    pub fn to_s_basis_bits(&self) -> BitVec {
        let t = self.level.sqrt2_index();
        let mut out = BitVec::zeros(2 * t);
        for e in self.terms() {
            match e {
                BasisElem::One => out.flip(0),
                BasisElem::S(i) => out.flip(i),
                BasisElem::R(i) => {
                    out.flip(i);
                    out.flip(2 * t - i);
                }
            }
        }
        out
    }

    /// Parse a sum such as `1+r_8+r_4+(r_6+r_10+r_14)`. Summands may be
    /// products of the factors s_k, d_k, r_k, √2 (any integer k) or the
    /// constants 0 and 1; the sum is evaluated exactly and then reduced.
    pub fn parse(level: Level, text: &str) -> Result<SpecialCoordsMod2> {
        let cleaned: String = text.chars().filter(|c| !c.is_whitespace() && *c != '(' && *c != ')').collect();
        if cleaned.is_empty() {
            return Err(Error::Parse("empty expression".into()));
        }
        let mut acc = CycInt::zero(level);
        for term in cleaned.split('+') {
            acc = &acc + &parse_product(level, term)?;
        }
        special_mod2(&acc)
    }
}

fn parse_product(level: Level, term: &str) -> Result<CycInt> {
    match term {
        "0" => return Ok(CycInt::zero(level)),
        "1" => return Ok(CycInt::one(level)),
        "" => return Err(Error::Parse("empty summand".into())),
        _ => {}
    }
    let mut acc = CycInt::one(level);
    let mut rest = term;
    while !rest.is_empty() {
        if let Some(r) = rest.strip_prefix('√').and_then(|r| r.strip_prefix('2')) {
            acc = &acc * &seq_s(level, level.sqrt2_index() as i64);
            rest = r;
            continue;
        }
        let kind = rest.chars().next().unwrap();
        let body = rest[kind.len_utf8()..].trim_start_matches('_');
        let (digits, tail) = if let Some(b) = body.strip_prefix('{') {
            let close = b.find('}').ok_or_else(|| Error::Parse(format!("unclosed brace in {term:?}")))?;
            (&b[..close], &b[close + 1..])
        } else {
            let end = body.find(|c: char| !c.is_ascii_digit()).unwrap_or(body.len());
            (&body[..end], &body[end..])
        };
        let k: i64 = digits.parse().map_err(|_| Error::Parse(format!("bad index in {term:?}")))?;
        let factor = match kind {
            's' => seq_s(level, k),
            'd' => seq_d(level, k),
            'r' => seq_r(level, k),
            _ => return Err(Error::Parse(format!("unknown factor {kind:?} in {term:?}"))),
        };
        acc = &acc * &factor;
        rest = tail;
    }
    Ok(acc)
}

impl fmt::Display for SpecialCoordsMod2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = terms.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join("+"))
    }
}

/// B-coordinates of a real element, reduced mod 2.
pub fn special_mod2(a: &CycInt) -> Result<SpecialCoordsMod2> {
    let b = to_s_basis(a)?.to_special();
    let bits = BitVec::from_bools(&b.iter().map(BigInt::is_odd).collect::<Vec<_>>());
    Ok(SpecialCoordsMod2 { level: a.level(), bits })
}

/// Membership in R_Z + 2Z[s_1].
pub fn rtilde_member(a: &CycInt) -> Result<bool> {
    Ok(special_mod2(a)?.in_rtilde())
}

/// The case of the mod-2 multiplication table of B that applies to a pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProductRule {
    /// s_j s_k, j ≤ k < 2^{n-3}, j + k ≤ 2^{n-3}
    SsLow,
    /// s_j s_k, j ≤ k < 2^{n-3}, j + k > 2^{n-3}
    SsHigh,
    /// s_j s_{2^{n-3}}, j < 2^{n-3}
    SsSqrt2,
    /// s_{2^{n-3}}^2
    Sqrt2Squared,
    /// s_j r_k, j ≤ k, j + k < 2^{n-3}
    SrLow,
    /// s_j r_k, j ≤ k, j + k = 2^{n-3}
    SrMid,
    /// s_j r_k, j ≤ k, j + k > 2^{n-3}
    SrHigh,
    /// s_{2^{n-3}} r_k
    Sqrt2R,
    /// s_j r_k, k < j < 2^{n-3}, j + k < 2^{n-3}
    RsLow,
    /// s_j r_k, k < j < 2^{n-3}, j + k = 2^{n-3}
    RsMid,
    /// s_j r_k, k < j < 2^{n-3}, j + k > 2^{n-3}
    RsHigh,
    /// r_j r_k
    Rr,
}

impl ProductRule {
    pub const ALL: [ProductRule; 12] = [
        ProductRule::SsLow,
        ProductRule::SsHigh,
        ProductRule::SsSqrt2,
        ProductRule::Sqrt2Squared,
        ProductRule::SrLow,
        ProductRule::SrMid,
        ProductRule::SrHigh,
        ProductRule::Sqrt2R,
        ProductRule::RsLow,
        ProductRule::RsMid,
        ProductRule::RsHigh,
        ProductRule::Rr,
    ];
}

/// Product of two non-constant members of B modulo 2, from the case table
/// alone (no ring arithmetic).
pub fn basis_product_mod2(level: Level, x: BasisElem, y: BasisElem) -> (ProductRule, SpecialCoordsMod2) {
    use BasisElem::{One, R, S};
    let t = level.sqrt2_index();
    let h = level.real_degree();
    // s_0 ≡ 0, r_0 ≡ 0; every other index produced below lies in B
    let s = |i: usize| (i != 0).then_some(S(i));
    let r = |i: usize| (i != 0).then_some(R(i));
    let sum = |terms: Vec<Option<BasisElem>>| SpecialCoordsMod2::from_terms(level, terms.into_iter().flatten());
    let (x, y) = match (x, y) {
        (R(_), S(_)) => (y, x),
        (S(a), S(b)) if a > b => (y, x),
        _ => (x, y),
    };
    match (x, y) {
        (One, _) | (_, One) => panic!("constant factor has no case"),
        (S(j), S(k)) if j == t && k == t => (ProductRule::Sqrt2Squared, SpecialCoordsMod2::zero(level)),
        (S(j), S(k)) if k == t => (ProductRule::SsSqrt2, sum(vec![r(t - j)])),
        (S(j), S(k)) if j + k <= t => (ProductRule::SsLow, sum(vec![s(k - j), s(k + j)])),
        (S(j), S(k)) => (ProductRule::SsHigh, sum(vec![s(k - j), r(h - (k + j)), s(h - (k + j))])),
        (S(j), R(_)) if j == t => (ProductRule::Sqrt2R, SpecialCoordsMod2::zero(level)),
        (S(j), R(k)) if j <= k && j + k < t => (ProductRule::SrLow, sum(vec![r(k - j), r(k + j)])),
        (S(j), R(k)) if j <= k && j + k == t => (ProductRule::SrMid, sum(vec![r(k - j)])),
        (S(j), R(k)) if j <= k => (ProductRule::SrHigh, sum(vec![r(k - j), r(h - (k + j))])),
        (S(j), R(k)) if j + k < t => (ProductRule::RsLow, sum(vec![r(j - k), r(k + j)])),
        (S(j), R(k)) if j + k == t => (ProductRule::RsMid, sum(vec![r(j - k)])),
        (S(j), R(k)) => (ProductRule::RsHigh, sum(vec![r(j - k), r(h - (k + j))])),
        (R(_), R(_)) => (ProductRule::Rr, SpecialCoordsMod2::zero(level)),
        (R(_), S(_)) => unreachable!("normalized above"),
    }
}

/// Mod-2 product of two classes via the case table, extended bilinearly.
pub fn product_mod2_by_rules(a: &SpecialCoordsMod2, b: &SpecialCoordsMod2) -> SpecialCoordsMod2 {
    let level = a.level();
    let mut acc = SpecialCoordsMod2::zero(level);
    for x in a.terms() {
        for y in b.terms() {
            let term = match (x, y) {
                (BasisElem::One, e) | (e, BasisElem::One) => SpecialCoordsMod2::basis(level, e),
                _ => basis_product_mod2(level, x, y).1,
            };
            acc = acc.add(&term);
        }
    }
    acc
}
