//! Funnel partitions of A and the generator systems of F and √F/F.

use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

use crate::cyclotomic::Level;
use crate::error::{Error, Result};
use crate::lattice::{smith_invariants, Lattice};
use crate::units::{generator_indices, UnitWord};

/// A_0 ⊃ A_1 ⊃ … ⊃ A_{n-3} = {1} with A_k = {1, 3, …, 2^{n-2-k} - 1},
/// B_0 = A \ A_0 and B_k = A_{k-1} \ A_k.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FunnelPartition {
    pub n: u32,
    pub a_sets: Vec<Vec<u32>>,
    pub b_sets: Vec<Vec<u32>>,
}

pub fn build_partition(level: Level) -> Result<FunnelPartition> {
    let level = level.require_at_least(4)?;
    let n = level.n();
    let a_sets: Vec<Vec<u32>> = (0..=n - 3).map(|k| (1..1u32 << (n - 2 - k)).step_by(2).collect()).collect();
    let all = generator_indices(level);
    let b_sets = (0..=n as usize - 3)
        .map(|k| {
            let outer: &[u32] = if k == 0 { &all } else { &a_sets[k - 1] };
            outer.iter().copied().filter(|j| !a_sets[k].contains(j)).collect()
        })
        .collect();
    Ok(FunnelPartition { n, a_sets, b_sets })
}

/// q(k, j) = d_j^{-1} d_{2^{n-1-k} - j}
pub fn q_word(level: Level, k: u32, j: u32) -> Result<UnitWord> {
    let p = build_partition(level)?;
    let ok = match k {
        0 => j != 1 && p.a_sets[0].contains(&j),
        k if k <= level.n() - 3 => p.a_sets[k as usize].contains(&j),
        _ => false,
    };
    if !ok {
        return Err(Error::IndexNotInPartition { k, j });
    }
    UnitWord::from_parts(level, 0, [(j, -1), ((1u32 << (level.n() - 1 - k)) - j, 1)])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GenLabel {
    /// d_1^exp
    D1Power { exp: u32 },
    /// q(k, j)^exp
    Q { k: u32, j: u32, exp: u32 },
}

impl fmt::Display for GenLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GenLabel::D1Power { exp } => write!(f, "d1^{exp}"),
            GenLabel::Q { k, j, exp: 1 } => write!(f, "q({k},{j})"),
            GenLabel::Q { k, j, exp } => write!(f, "q({k},{j})^{exp}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub label: GenLabel,
    pub word: UnitWord,
}

impl Generator {
    fn new(level: Level, label: GenLabel) -> Result<Self> {
        let word = match label {
            GenLabel::D1Power { exp } => UnitWord::d(level, 1, exp as i64)?,
            GenLabel::Q { k, j, exp } => q_word(level, k, j)?.pow(exp as i64),
        };
        Ok(Generator { label, word })
    }
}

/// d_1^{2^{n-2}}, then q(k, j)^{2^k} for k = n-3 down to 1, then q(0, j);
/// j ascending within each k.
pub fn f_generators(level: Level) -> Result<Vec<Generator>> {
    let p = build_partition(level)?;
    let n = level.n();
    let mut labels = vec![GenLabel::D1Power { exp: 1 << (n - 2) }];
    for k in (1..=n - 3).rev() {
        labels.extend(p.a_sets[k as usize].iter().map(|&j| GenLabel::Q { k, j, exp: 1 << k }));
    }
    labels.extend(p.a_sets[0].iter().filter(|&&j| j != 1).map(|&j| GenLabel::Q { k: 0, j, exp: 1 }));
    labels.into_iter().map(|l| Generator::new(level, l)).collect()
}

/// Coset generators of √F/F: d_1^{2^{n-3}}, then q(k, j)^{2^{k-1}} for
/// k = n-3 down to 1, j ascending.
pub fn sqrt_over_f_generators(level: Level) -> Result<Vec<Generator>> {
    let p = build_partition(level)?;
    let n = level.n();
    let mut labels = vec![GenLabel::D1Power { exp: 1 << (n - 3) }];
    for k in (1..=n - 3).rev() {
        labels.extend(p.a_sets[k as usize].iter().map(|&j| GenLabel::Q { k, j, exp: 1 << (k - 1) }));
    }
    labels.into_iter().map(|l| Generator::new(level, l)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSystem {
    pub level: Level,
    pub f_gens: Vec<Generator>,
    pub sqrt_gens: Vec<Generator>,
}

impl GeneratorSystem {
    pub fn build(level: Level) -> Result<Self> {
        Ok(GeneratorSystem { level, f_gens: f_generators(level)?, sqrt_gens: sqrt_over_f_generators(level)? })
    }
}

/// Lattice of exponent vectors (over A) spanned by the words.
pub fn exponent_lattice(level: Level, words: &[&UnitWord]) -> Lattice {
    let rows: Vec<Vec<BigInt>> = words.iter().map(|w| w.exponents().into_iter().map(BigInt::from).collect()).collect();
    Lattice::from_generators(generator_indices(level).len(), &rows)
}

/// Indices in the chain D^{2^{n-2}} ≤ F ≤ √F ≤ D, computed on exponent lattices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunnelIndices {
    /// |D : F| from the Hermite form
    pub d_f: BigInt,
    /// |D : F| as the product of the Smith invariants
    pub d_f_smith: BigInt,
    /// |D : D^{2^{n-2}}|
    pub d_dpow: BigInt,
    /// |√F : F| where √F = F + ⟨coset generators⟩, from Hermite forms
    pub sqrtf_f: BigInt,
    /// 2^{number of even Smith invariants of F}, the order of the 2-torsion of D/F
    pub sqrtf_f_smith: BigInt,
}

pub fn funnel_indices(level: Level) -> Result<FunnelIndices> {
    let sys = GeneratorSystem::build(level)?;
    let f_words: Vec<&UnitWord> = sys.f_gens.iter().map(|g| &g.word).collect();
    let f = exponent_lattice(level, &f_words);
    let all: Vec<&UnitWord> = f_words.iter().copied().chain(sys.sqrt_gens.iter().map(|g| &g.word)).collect();
    let sqrt_f = exponent_lattice(level, &all);
    let r = generator_indices(level).len();
    let dpow = Lattice::scaled_standard(r, level.real_degree() as i64);
    let missing = || Error::InternalInconsistency("lattice is not of full rank".into());
    let d_f = f.index().ok_or_else(missing)?;
    let rows: Vec<Vec<BigInt>> = f_words.iter().map(|w| w.exponents().into_iter().map(BigInt::from).collect()).collect();
    let inv = smith_invariants(&rows);
    if inv.len() != r {
        return Err(missing());
    }
    let two = BigInt::from(2);
    let even = inv.iter().filter(|d| (*d % &two) == BigInt::from(0)).count();
    Ok(FunnelIndices {
        d_f_smith: inv.iter().product(),
        sqrtf_f: &d_f / sqrt_f.index().ok_or_else(missing)?,
        d_f,
        d_dpow: dpow.index().ok_or_else(missing)?,
        sqrtf_f_smith: BigInt::from(1) << even,
    })
}
