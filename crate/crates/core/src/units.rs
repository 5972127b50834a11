//! Circular units as words in α and the generators d_j, j ∈ A = {1, 3, …, 2^{n-1} - 3}.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Mul;

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::cyclotomic::{CycInt, Level};
use crate::error::{Error, Result};
use crate::real_basis::seq_d;

/// The index set A of the generators of D.
pub fn generator_indices(level: Level) -> Vec<u32> {
    (1..level.degree() as u32 - 2).step_by(2).collect()
}

fn check_generator(level: Level, j: u32) -> Result<()> {
    if j % 2 == 1 && (j as usize) < level.degree() - 2 {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange { index: j as i64, what: "generator index of D" })
    }
}

/// α^a · ∏ d_j^{e_j} over j ∈ A.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UnitWord {
    level: Level,
    alpha_exp: i64,
    d_exps: BTreeMap<u32, i64>,
}

impl UnitWord {
    pub fn identity(level: Level) -> Self {
        UnitWord { level, alpha_exp: 0, d_exps: BTreeMap::new() }
    }

    pub fn alpha(level: Level, a: i64) -> Self {
        UnitWord { level, alpha_exp: level.reduce_exp(a) as i64, d_exps: BTreeMap::new() }
    }

    /// d_j^e for j ∈ A.
    pub fn d(level: Level, j: u32, e: i64) -> Result<Self> {
        Self::from_parts(level, 0, [(j, e)])
    }

    pub fn from_parts(level: Level, alpha_exp: i64, d: impl IntoIterator<Item = (u32, i64)>) -> Result<Self> {
        let mut w = Self::alpha(level, alpha_exp);
        for (j, e) in d {
            check_generator(level, j)?;
            *w.d_exps.entry(j).or_insert(0) += e;
        }
        w.d_exps.retain(|_, e| *e != 0);
        Ok(w)
    }

    /// Word with exponent vector indexed like `generator_indices`.
    pub fn from_exponents(level: Level, exps: &[i64]) -> Result<Self> {
        let idx = generator_indices(level);
        if exps.len() != idx.len() {
            return Err(Error::IndexOutOfRange { index: exps.len() as i64, what: "exponent vector length" });
        }
        Self::from_parts(level, 0, idx.into_iter().zip(exps.iter().copied()))
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn alpha_exp(&self) -> i64 {
        self.alpha_exp
    }

    pub fn d_exp(&self, j: u32) -> i64 {
        self.d_exps.get(&j).copied().unwrap_or(0)
    }

    pub fn d_exps(&self) -> impl Iterator<Item = (u32, i64)> + '_ {
        self.d_exps.iter().map(|(&j, &e)| (j, e))
    }

    pub fn is_real(&self) -> bool {
        self.alpha_exp == 0
    }

    pub fn exponents(&self) -> Vec<i64> {
        generator_indices(self.level).into_iter().map(|j| self.d_exp(j)).collect()
    }

    pub fn checked_mul(&self, other: &UnitWord) -> Result<UnitWord> {
        self.level.check_same(other.level)?;
        Self::from_parts(self.level, self.alpha_exp + other.alpha_exp, self.d_exps().chain(other.d_exps()))
    }

    pub fn pow(&self, e: i64) -> UnitWord {
        UnitWord {
            level: self.level,
            alpha_exp: self.level.reduce_exp(self.alpha_exp * e) as i64,
            d_exps: self.d_exps.iter().filter(|_| e != 0).map(|(&j, &x)| (j, x * e)).collect(),
        }
    }

    pub fn inverse(&self) -> UnitWord {
        self.pow(-1)
    }

    /// Parse `a^3 * d1^-2 * d7^2`. Factors d_j with odd j outside A are
    /// rewritten through A.
    pub fn parse(level: Level, text: &str) -> Result<UnitWord> {
        let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut w = UnitWord::identity(level);
        if cleaned.is_empty() || cleaned == "1" {
            return Ok(w);
        }
        for factor in cleaned.split('*') {
            let (base, exp) = match factor.split_once('^') {
                Some((b, e)) => {
                    let e = e.trim_matches(|c| c == '(' || c == ')' || c == '{' || c == '}');
                    (b, e.parse::<i64>().map_err(|_| Error::Parse(format!("bad exponent in {factor:?}")))?)
                }
                None => (factor, 1),
            };
            let f = if base == "a" || base == "α" {
                UnitWord::alpha(level, 1)
            } else if let Some(j) = base.strip_prefix('d') {
                let j = j.trim_start_matches('_').trim_matches(|c| c == '{' || c == '}');
                let j: i64 = j.parse().map_err(|_| Error::Parse(format!("bad index in {factor:?}")))?;
                d_word(level, j)?
            } else if base == "1" {
                UnitWord::identity(level)
            } else {
                return Err(Error::Parse(format!("unknown factor {factor:?}")));
            };
            w = &w * &f.pow(exp);
        }
        Ok(w)
    }

    pub fn to_spec(&self) -> WordSpec {
        WordSpec { alpha: self.alpha_exp, d: self.d_exps().map(|(j, e)| (j.to_string(), e)).collect() }
    }
}

impl Mul<&UnitWord> for &UnitWord {
    type Output = UnitWord;
    /// Panics on level mismatch; see `checked_mul`.
    fn mul(self, rhs: &UnitWord) -> UnitWord {
        self.checked_mul(rhs).expect("level mismatch")
    }
}

impl fmt::Display for UnitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.alpha_exp != 0 {
            parts.push(if self.alpha_exp == 1 { "a".to_string() } else { format!("a^{}", self.alpha_exp) });
        }
        for (j, e) in self.d_exps() {
            parts.push(if e == 1 { format!("d{j}") } else { format!("d{j}^{e}") });
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" * "))
        }
    }
}

impl fmt::Debug for UnitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UnitWord(n={}, {})", self.level, self)
    }
}

/// JSON form of a word: `{"alpha": 3, "d": {"1": -2, "7": 2}}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordSpec {
    #[serde(default)]
    pub alpha: i64,
    #[serde(default)]
    pub d: BTreeMap<String, i64>,
}

impl WordSpec {
    pub fn into_word(self, level: Level) -> Result<UnitWord> {
        let mut w = UnitWord::alpha(level, self.alpha);
        for (j, e) in self.d {
            let j: i64 = j.parse().map_err(|_| Error::Parse(format!("bad generator index {j:?}")))?;
            w = &w * &d_word(level, j)?.pow(e);
        }
        Ok(w)
    }
}

impl Serialize for UnitWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_spec().serialize(s)
    }
}

/// d_j for any odd j as a word over A, using d_{-j} = d_j, period 2^n and
/// ∏_{odd j < 2^{n-1}} d_j = α^{-(1 + 3 + … + 3^{2^{n-2}-1})}.
pub fn d_word(level: Level, j: i64) -> Result<UnitWord> {
    if j.rem_euclid(2) == 0 {
        return Err(Error::IndexOutOfRange { index: j, what: "odd index of d" });
    }
    let r = level.reduce_exp(j);
    let r = r.min(level.order() - r) as u32;
    if (r as usize) < level.degree() - 2 {
        return UnitWord::d(level, r, 1);
    }
    // r = 2^{n-1} - 1
    let mut sum = 0i64;
    let mut p = 1i64;
    for _ in 0..level.real_degree() {
        sum += p;
        p = p * 3 % level.order() as i64;
    }
    UnitWord::from_parts(level, -sum, generator_indices(level).into_iter().map(|i| (i, -1)))
}

/// β_l = 1 + α^{3^l} + α^{2·3^l}
pub fn beta(level: Level, l: u32) -> Result<CycInt> {
    if l as usize >= level.real_degree() {
        return Err(Error::IndexOutOfRange { index: l as i64, what: "beta index" });
    }
    let g = pow3(level, l);
    Ok(&(&CycInt::one(level) + &CycInt::monomial(level, g)) + &CycInt::monomial(level, 2 * g))
}

/// β_l = α^{3^l} d_{3^l} as a word.
pub fn beta_word(level: Level, l: u32) -> Result<UnitWord> {
    if l as usize >= level.real_degree() {
        return Err(Error::IndexOutOfRange { index: l as i64, what: "beta index" });
    }
    let g = pow3(level, l);
    Ok(&UnitWord::alpha(level, g) * &d_word(level, g)?)
}

fn pow3(level: Level, l: u32) -> i64 {
    (0..l).fold(1i64, |acc, _| acc * 3 % level.order() as i64)
}

/// Exact value of a word.
pub fn eval_word(w: &UnitWord) -> Result<CycInt> {
    let level = w.level();
    let mut acc = CycInt::monomial(level, w.alpha_exp());
    for (j, e) in w.d_exps() {
        let d = seq_d(level, j as i64);
        let base = if e < 0 { d.invert_unit()? } else { d };
        acc = &acc * &base.pow(e.unsigned_abs());
    }
    if !acc.norm()?.abs().is_one() {
        return Err(Error::InternalInconsistency(format!("word {w} evaluated to a non-unit")));
    }
    Ok(acc)
}

/// α^a ∏_l (1 - α^{3^l})^{k_l}, l = 0 … 2^{n-2}-1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PWord {
    pub level: Level,
    pub alpha_exp: i64,
    pub cyc_exps: Vec<i64>,
}

impl PWord {
    pub fn new(level: Level, alpha_exp: i64, cyc_exps: Vec<i64>) -> Result<Self> {
        if cyc_exps.len() != level.real_degree() {
            return Err(Error::IndexOutOfRange { index: cyc_exps.len() as i64, what: "P-word exponent vector length" });
        }
        Ok(PWord { level, alpha_exp, cyc_exps })
    }

    /// log_2 of the absolute norm.
    pub fn norm_exponent(&self) -> i64 {
        self.cyc_exps.iter().sum()
    }

    /// The factors with positive (resp. negated negative) exponents, evaluated.
    pub fn numerator_denominator(&self) -> (CycInt, CycInt) {
        let level = self.level;
        let mut num = CycInt::monomial(level, self.alpha_exp);
        let mut den = CycInt::one(level);
        for (l, &k) in self.cyc_exps.iter().enumerate() {
            let f = &CycInt::one(level) - &CycInt::monomial(level, pow3(level, l as u32));
            if k > 0 {
                num = &num * &f.pow(k as u64);
            } else if k < 0 {
                den = &den * &f.pow((-k) as u64);
            }
        }
        (num, den)
    }

    /// Solve k_l = f_{l-1} - f_l (indices mod 2^{n-2}) with f_0 = 0 and
    /// return α^a ∏ β_l^{f_l}.
    pub fn to_unit_word(&self) -> Result<UnitWord> {
        if !p_word_is_unit(self) {
            return Err(Error::NotAUnit { norm: format!("2^{}", self.norm_exponent()) });
        }
        let mut w = UnitWord::alpha(self.level, self.alpha_exp);
        let mut f = 0i64;
        for (l, &k) in self.cyc_exps.iter().enumerate().skip(1) {
            f -= k;
            w = &w * &beta_word(self.level, l as u32)?.pow(f);
        }
        Ok(w)
    }
}

pub fn p_word_is_unit(p: &PWord) -> bool {
    p.norm_exponent() == 0
}

/// Numerical rank of the matrix log|σ_k(d_j)|, k odd < 2^{n-1}, j ∈ A.
pub fn independence_rank(level: Level) -> usize {
    let ks: Vec<usize> = (1..level.degree()).step_by(2).collect();
    let js = generator_indices(level);
    let half = level.degree() as f64;
    let m = nalgebra::DMatrix::from_fn(ks.len(), js.len(), |r, c| {
        let x = std::f64::consts::PI * (ks[r] * js[c] as usize) as f64 / half;
        (1.0 + 2.0 * x.cos()).abs().ln()
    });
    m.svd(false, false).singular_values.iter().filter(|&&s| s > 1e-6).count()
}
