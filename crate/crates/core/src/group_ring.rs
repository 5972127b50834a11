//! Normalized units of Z[C_{2^n}] built from circular units by the trace
//! formula for the character χ_1 : x ↦ α.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cyclotomic::{CycInt, Level};
use crate::error::{Error, Result};
use crate::funnel::f_generators;
use crate::units::{eval_word, generator_indices, UnitWord};

/// Σ γ_j x^j over the cyclic group ⟨x⟩ of order 2^n.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupRingElt {
    level: Level,
    coeffs: Vec<BigInt>,
}

impl GroupRingElt {
    pub fn zero(level: Level) -> Self {
        GroupRingElt { level, coeffs: vec![BigInt::zero(); level.order()] }
    }

    pub fn one(level: Level) -> Self {
        Self::x_pow(level, 0)
    }

    /// x^k, k taken mod 2^n.
    pub fn x_pow(level: Level, k: i64) -> Self {
        let mut out = Self::zero(level);
        let idx = k.rem_euclid(level.order() as i64) as usize;
        out.coeffs[idx] = BigInt::one();
        out
    }

    pub fn from_coeffs(level: Level, coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.len() != level.order() {
            return Err(Error::IndexOutOfRange { index: coeffs.len() as i64, what: "group ring coefficient count" });
        }
        Ok(GroupRingElt { level, coeffs })
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one(self.level)
    }

    /// Image under the trivial character.
    pub fn augmentation(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    /// Image under χ_1 : x ↦ α.
    pub fn chi1(&self) -> CycInt {
        let mut acc = CycInt::zero(self.level);
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc = &acc + &CycInt::monomial(self.level, j as i64).scale(c);
            }
        }
        acc
    }
}

impl fmt::Display for GroupRingElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let sign = if c.is_negative() { "-" } else if first { "" } else { "+" };
            let mag = c.abs();
            let body = match (j, mag.is_one()) {
                (0, _) => mag.to_string(),
                (1, true) => "x".to_string(),
                (1, false) => format!("{mag}*x"),
                (_, true) => format!("x^{j}"),
                (_, false) => format!("{mag}*x^{j}"),
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

impl fmt::Debug for GroupRingElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupRingElt(n={}, {})", self.level.n(), self)
    }
}

impl Serialize for GroupRingElt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let strs: Vec<String> = self.coeffs.iter().map(BigInt::to_string).collect();
        strs.serialize(s)
    }
}

/// Cyclic convolution, x^{2^n} = 1.
pub fn gr_mul(a: &GroupRingElt, b: &GroupRingElt) -> Result<GroupRingElt> {
    a.level.check_same(b.level)?;
    let order = a.level.order();
    let mut out = GroupRingElt::zero(a.level);
    for (i, x) in a.coeffs.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
        for (j, y) in b.coeffs.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
            out.coeffs[(i + j) % order] += x * y;
        }
    }
    Ok(out)
}

fn require_unit(beta: &CycInt) -> Result<()> {
    let norm = beta.norm()?;
    if !norm.abs().is_one() {
        return Err(Error::NotAUnit { norm: norm.to_string() });
    }
    Ok(())
}

/// γ_0 = 1 + tr(β-1)/2^n and γ_j = tr((β-1)α^{-j})/2^n. Fails with
/// `NotIntegral` at the first inexact division.
pub fn u_chi1(beta: &CycInt) -> Result<GroupRingElt> {
    require_unit(beta)?;
    let level = beta.level();
    let diff = beta - &CycInt::one(level);
    let denom = BigInt::from(level.order());
    let mut out = GroupRingElt::zero(level);
    for j in 0..level.order() {
        let tr = diff.mul_monomial(-(j as i64)).trace();
        let (q, r) = tr.div_rem(&denom);
        if !r.is_zero() {
            return Err(Error::NotIntegral { index: j });
        }
        out.coeffs[j] = q;
    }
    out.coeffs[0] += 1;
    Ok(out)
}

/// Real and ≡ 1 (mod 2).
pub fn is_admissible(beta: &CycInt) -> Result<bool> {
    require_unit(beta)?;
    Ok(beta.is_real() && beta.is_one_mod2())
}

#[derive(Clone, Debug, Serialize)]
pub struct V1Generator {
    pub label: String,
    pub word: UnitWord,
    pub unit: GroupRingElt,
}

/// W_1 = ⟨x^{2^{n-1}}⟩ × V_1 restricted to the circular-unit slice: V_1 is
/// generated by the images of the generators of F.
#[derive(Clone, Debug, Serialize)]
pub struct V1System {
    pub n: u32,
    pub exploratory: bool,
    pub torsion: GroupRingElt,
    pub generators: Vec<V1Generator>,
}

pub fn v1_generators(level: Level) -> Result<V1System> {
    let level = level.require_at_least(4)?;
    let torsion = u_chi1(&CycInt::from_int(level, -1))?;
    let mut generators = Vec::new();
    for g in f_generators(level)? {
        let unit = u_chi1(&eval_word(&g.word)?)?;
        generators.push(V1Generator { label: g.label.to_string(), word: g.word, unit });
    }
    Ok(V1System { n: level.n(), exploratory: level.n() > 7, torsion, generators })
}

/// Sparse random words of four kinds: 2^{n-2}-th powers, plain words,
/// α-twisted words and products of two F generators.
pub fn random_words(level: Level, seed: u64, count: usize) -> Result<Vec<UnitWord>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let idx = generator_indices(level);
    let f = f_generators(level)?;
    let h = level.real_degree() as i64;
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let picks: Vec<(u32, i64)> = (0..rng.gen_range(1..=3))
            .map(|_| (*idx.choose(&mut rng).unwrap(), rng.gen_range(-3i64..=3)))
            .collect();
        let mut base = UnitWord::identity(level);
        for (j, e) in &picks {
            base = base.checked_mul(&UnitWord::d(level, *j, *e)?)?;
        }
        let w = match i % 4 {
            0 => base.pow(h * (1 - 2 * rng.gen_range(0..2))).checked_mul(&UnitWord::d(level, picks[0].0, h)?)?,
            1 => base,
            2 => base.checked_mul(&UnitWord::alpha(level, rng.gen_range(1..level.order() as i64)))?,
            _ => {
                let a = f.choose(&mut rng).unwrap().word.pow(1 - 2 * rng.gen_range(0..2));
                a.checked_mul(&f.choose(&mut rng).unwrap().word)?
            }
        };
        out.push(w);
    }
    Ok(out)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AdmissibilityReport {
    pub words: usize,
    pub admissible: usize,
    /// Words where integrality of u_χ1 and admissibility disagree.
    pub counterexamples: Vec<String>,
    pub multiplicativity_failures: Vec<String>,
    pub inverse_failures: Vec<String>,
    pub character_failures: Vec<String>,
}

impl AdmissibilityReport {
    pub fn clean(&self) -> bool {
        self.counterexamples.is_empty()
            && self.multiplicativity_failures.is_empty()
            && self.inverse_failures.is_empty()
            && self.character_failures.is_empty()
    }
}

/// Integrality iff admissibility on seeded random words, with
/// multiplicativity, inverse and character checks on consecutive admissible
/// pairs.
pub fn admissibility_suite(level: Level, seed: u64, count: usize) -> Result<AdmissibilityReport> {
    let mut report = AdmissibilityReport { words: count, ..Default::default() };
    let mut prev: Option<(UnitWord, CycInt, GroupRingElt)> = None;
    for w in random_words(level, seed, count)? {
        let beta = eval_word(&w)?;
        let admissible = is_admissible(&beta)?;
        let unit = match u_chi1(&beta) {
            Ok(u) => Some(u),
            Err(Error::NotIntegral { .. }) => None,
            Err(e) => return Err(e),
        };
        if unit.is_some() != admissible {
            report.counterexamples.push(w.to_string());
        }
        let Some(unit) = unit else { continue };
        report.admissible += 1;
        if unit.chi1() != beta || !unit.augmentation().is_one() {
            report.character_failures.push(w.to_string());
        }
        let inv = u_chi1(&beta.invert_unit()?)?;
        if !gr_mul(&unit, &inv)?.is_one() {
            report.inverse_failures.push(w.to_string());
        }
        if let Some((pw, pbeta, punit)) = &prev {
            if u_chi1(&(pbeta * &beta))? != gr_mul(punit, &unit)? {
                report.multiplicativity_failures.push(format!("{pw} ; {w}"));
            }
        }
        prev = Some((w, beta, unit));
    }
    Ok(report)
}
