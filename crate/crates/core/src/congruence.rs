//! Unit words modulo 2 on the special basis, the q-power congruences, and the
//! F2 verification that √F ∩ E = F.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::{CycInt, Level};
use crate::error::{Error, Result};
use crate::f2::{BitMatrix, BitVec};
use crate::funnel::{q_word, sqrt_over_f_generators, GenLabel, Generator};
use crate::mod2::Mod2Elem;
use crate::real_basis::{seq_d, seq_r, special_mod2, BasisElem, SpecialCoordsMod2};
use crate::units::{eval_word, generator_indices, UnitWord};

/// Highest level whose verdict is backed by a proof.
pub const PROVEN_MAX_LEVEL: u32 = 7;

/// Exhaustive δ-enumeration is used up to this many coset generators.
pub const EXHAUSTIVE_MAX_GENS: usize = 16;

fn require_real(w: &UnitWord) -> Result<()> {
    if !w.is_real() {
        return Err(Error::NonRealWord(w.alpha_exp()));
    }
    Ok(())
}

/// A real word evaluated with every exponent replaced by its residue mod
/// 2^{n-2}; congruent to the word mod 2 because d_j^{2^{n-2}} ≡ 1.
pub fn lifted_value(w: &UnitWord) -> Result<CycInt> {
    require_real(w)?;
    let level = w.level();
    let period = level.real_degree() as i64;
    let mut acc = CycInt::one(level);
    for (j, e) in w.d_exps() {
        acc = &acc * &seq_d(level, j as i64).pow(e.rem_euclid(period) as u64);
    }
    Ok(acc)
}

/// Special coordinates of a real word mod 2, cross-checked against the
/// exact value obtained with true inverses.
pub fn word_mod2(w: &UnitWord) -> Result<SpecialCoordsMod2> {
    let lifted = special_mod2(&lifted_value(w)?)?;
    let exact = special_mod2(&eval_word(w)?)?;
    if lifted != exact {
        return Err(Error::InternalInconsistency(format!("mod-2 lift of {w} disagrees with exact evaluation")));
    }
    Ok(lifted)
}

/// A word together with its class mod 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mod2WordValue {
    pub word: UnitWord,
    pub coords: SpecialCoordsMod2,
}

impl Mod2WordValue {
    pub fn new(word: UnitWord) -> Result<Self> {
        let coords = word_mod2(&word)?;
        Ok(Mod2WordValue { word, coords })
    }
}

/// λ ∈ E iff λ ≡ 1 (mod 2).
pub fn e_membership(w: &UnitWord) -> Result<bool> {
    Ok(word_mod2(w)?.is_one())
}

fn check_p_index(level: Level, k: u32) -> Result<()> {
    if k == 0 || k > level.n().saturating_sub(3) {
        return Err(Error::IndexOutOfRange { index: k as i64, what: "P(k) needs 1 <= k <= n-3" });
    }
    Ok(())
}

/// P(k) = ∏_{j=k-1}^{n-4} d_1^{2^j}, exactly.
pub fn p_factor(level: Level, k: u32) -> Result<CycInt> {
    check_p_index(level, k)?;
    let d1 = seq_d(level, 1);
    Ok((k - 1..=level.n() - 4).fold(CycInt::one(level), |acc, j| &acc * &d1.pow(1 << j)))
}

/// P(k) mod 2 as the product of d_{2^j}, written with ascending indices.
pub fn p_factor_label(level: Level, k: u32) -> Result<String> {
    check_p_index(level, k)?;
    Ok((k - 1..=level.n() - 4).map(|j| format!("d_{}", 1u32 << j)).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
}

impl IdentityCheck {
    fn compare(name: String, lhs: &SpecialCoordsMod2, rhs: &SpecialCoordsMod2) -> Self {
        IdentityCheck { name, lhs: lhs.to_string(), rhs: rhs.to_string(), holds: lhs == rhs }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub n: u32,
    pub exploratory: bool,
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

/// The chain of congruences leading to q(k,1)^{2^{k-1}} ≡ 1 + P(k) r_{2^{k-1}}.
/// Each side is computed by its own exact route.
pub fn q_power_identities(level: Level) -> Result<IdentityReport> {
    let level = level.require_at_least(4)?;
    let n = level.n();
    let t = level.sqrt2_index() as i64;
    let one = CycInt::one(level);
    let mut checks = Vec::new();
    for k in 1..=n - 3 {
        let e = 1i64 << (k - 1);
        let p = p_factor(level, k)?;
        let p_label = p_factor_label(level, k)?;
        let d_e = seq_d(level, e);
        let r_e = seq_r(level, e);

        let lhs = word_mod2(&UnitWord::d(level, 1, -e)?)?;
        let rhs = special_mod2(&(&seq_d(level, t) * &p))?;
        checks.push(IdentityCheck::compare(format!("d_1^-{e} = d_{t}*P({k}) [P({k}) = {p_label}]"), &lhs, &rhs));

        let idx = (1i64 << (n - 1 - k)) - 1;
        let lhs = special_mod2(&seq_d(level, idx).pow(e as u64))?;
        let rhs = special_mod2(&(&d_e + &r_e))?;
        checks.push(IdentityCheck::compare(format!("d_{idx}^{e} = d_{e} + r_{e}"), &lhs, &rhs));

        let q = word_mod2(&q_word(level, k, 1)?.pow(e))?;
        let via_inverse = &d_e.invert_unit()? * &r_e;
        let rhs = special_mod2(&(&one + &via_inverse))?;
        checks.push(IdentityCheck::compare(format!("q({k},1)^{e} = 1 + d_{e}^-1 r_{e}"), &q, &rhs));

        let rhs = special_mod2(&(&one + &(&p * &r_e)))?;
        checks.push(IdentityCheck::compare(format!("q({k},1)^{e} = 1 + P({k}) r_{e}"), &q, &rhs));

        let c = special_mod2(&via_inverse)?;
        checks.push(IdentityCheck {
            name: format!("d_{e}^-1 r_{e} in R~"),
            lhs: c.to_string(),
            rhs: "r-block only".into(),
            holds: c.in_rtilde(),
        });
    }
    let sqrt2_unit = seq_d(level, t);
    for l in 1..t {
        let r = seq_r(level, l);
        let lhs = special_mod2(&(&sqrt2_unit * &r))?;
        let rhs = special_mod2(&r)?;
        checks.push(IdentityCheck::compare(format!("d_{t} r_{l} = r_{l}"), &lhs, &rhs));
    }
    Ok(IdentityReport { n, exploratory: n > PROVEN_MAX_LEVEL, checks })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransportEntry {
    pub j: u32,
    pub word_mod2: String,
    pub transported: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransportReport {
    pub n: u32,
    pub entries: Vec<TransportEntry>,
}

impl TransportReport {
    pub fn all_hold(&self) -> bool {
        self.entries.iter().all(|e| e.holds)
    }
}

/// q(1, j) mod 2 against σ_j applied to the exact value of q(1, 1).
pub fn galois_transport_check(level: Level) -> Result<TransportReport> {
    let level = level.require_at_least(4)?;
    let q11 = eval_word(&q_word(level, 1, 1)?)?;
    let a1: Vec<u32> = (1..level.sqrt2_index() as u32).step_by(2).collect();
    let mut entries = Vec::new();
    for j in a1 {
        let direct = word_mod2(&q_word(level, 1, j)?)?;
        let moved = special_mod2(&q11.galois(j as i64)?)?;
        entries.push(TransportEntry { j, word_mod2: direct.to_string(), transported: moved.to_string(), holds: direct == moved });
    }
    Ok(TransportReport { n: level.n(), entries })
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub seed: u64,
    pub spot_checks: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { seed: 0, spot_checks: 1000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertGenerator {
    pub label: String,
    pub word: String,
    pub coords: String,
    pub coords_hex: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExhaustiveRun {
    pub assignments: u64,
    pub congruent_to_one: u64,
    pub mismatches: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpotCheckRun {
    pub seed: u64,
    pub samples: u64,
    pub mismatches: u64,
}

/// The r_l rows with l odd against the q(1, ·) columns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OddBlock {
    pub rows: Vec<String>,
    pub columns: Vec<String>,
    pub rows_hex: Vec<String>,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub n: u32,
    pub tool_version: String,
    pub exploratory: bool,
    /// Labels of B; bit i of a coords_hex value is the coefficient of basis[i].
    pub basis: Vec<String>,
    pub generators: Vec<CertGenerator>,
    /// One row per non-constant member of B; bit c is the coefficient of δ_c.
    pub matrix_rows_hex: Vec<String>,
    pub rank: usize,
    pub nullity: usize,
    pub trivial_only: bool,
    pub verdict: String,
    pub exhaustive: Option<ExhaustiveRun>,
    pub spot_check: Option<SpotCheckRun>,
    pub odd_block: OddBlock,
    /// Odd r-rows vanish outside the q(1, ·) columns.
    pub block_triangular: bool,
    pub complement_block_rank: usize,
    pub elapsed_ms: u64,
}

impl Certificate {
    /// Rebuild the matrix from the generator table and recompute its rank.
    pub fn replay(&self) -> Result<bool> {
        let level = Level::new(self.n)?;
        let h = level.real_degree();
        let mut cols = Vec::new();
        for g in &self.generators {
            let bits = BitVec::from_hex(h, &g.coords_hex)
                .ok_or_else(|| Error::Parse(format!("bad coords_hex for {}", g.label)))?;
            if !bits.get(0) {
                return Ok(false);
            }
            cols.push(bits.slice(1, h));
        }
        let m = BitMatrix::from_columns(h - 1, &cols);
        let rows: Vec<String> = m.rows().iter().map(BitVec::to_hex).collect();
        Ok(rows == self.matrix_rows_hex && m.rank() == self.rank && m.nullity() == self.nullity)
    }
}

fn coset_product_predicted(tails: &[BitVec], delta: &BitVec, width: usize) -> BitVec {
    let mut acc = BitVec::zeros(width);
    for i in delta.iter_ones() {
        acc.xor_assign(&tails[i]);
    }
    acc
}

fn disagreement(level: Level, gens: &[Generator], delta: &BitVec, actual: &SpecialCoordsMod2, predicted: &BitVec) -> Error {
    let picked: Vec<String> = delta.iter_ones().map(|i| gens[i].label.to_string()).collect();
    let mut pred = BitVec::unit(level.real_degree(), 0);
    for i in predicted.iter_ones() {
        pred.set(i + 1, true);
    }
    let pred = SpecialCoordsMod2::from_bits(level, pred).map(|p| p.to_string()).unwrap_or_default();
    Error::Disagreement(format!(
        "n={} product of [{}]: exact {} but linearized {}",
        level.n(),
        picked.join(", "),
        actual,
        pred
    ))
}

/// Decide whether a product of coset generators of √F/F can be ≡ 1 (mod 2)
/// only trivially, by the linearized F2 system and, independently, by exact
/// mod-2 multiplication over all δ (or a random sample when there are more
/// than 16 generators).
pub fn verify_main_theorem(level: Level, opts: VerifyOptions) -> Result<Certificate> {
    let start = Instant::now();
    let level = level.require_at_least(4)?;
    let h = level.real_degree();
    let t = level.sqrt2_index();
    let gens = sqrt_over_f_generators(level)?;
    let g = gens.len();

    let mut values = Vec::with_capacity(g);
    let mut coords = Vec::with_capacity(g);
    for gen in &gens {
        let lifted = lifted_value(&gen.word)?;
        let c = word_mod2(&gen.word)?;
        if !c.bits().get(0) {
            return Err(Error::InternalInconsistency(format!("{} has even constant coordinate", gen.label)));
        }
        values.push(Mod2Elem::from_cyc(&lifted));
        coords.push(c);
    }
    let tails: Vec<BitVec> = coords.iter().map(SpecialCoordsMod2::tail).collect();
    let matrix = BitMatrix::from_columns(h - 1, &tails);
    let rank = matrix.rank();
    let nullity = g - rank;

    let check = |delta: &BitVec, prod: &Mod2Elem| -> Result<bool> {
        let actual = SpecialCoordsMod2::from_alpha_parities(level, prod.bits())?;
        let predicted = coset_product_predicted(&tails, delta, h - 1);
        if !actual.bits().get(0) || actual.tail() != predicted {
            return Err(disagreement(level, &gens, delta, &actual, &predicted));
        }
        Ok(actual.is_one())
    };

    let mut exhaustive = None;
    let mut spot_check = None;
    if g <= EXHAUSTIVE_MAX_GENS {
        let total = 1usize << g;
        let mut prods = Vec::with_capacity(total);
        prods.push(Mod2Elem::one(level));
        let mut ones = 0u64;
        for mask in 0..total {
            if mask > 0 {
                let low = mask.trailing_zeros() as usize;
                let p = prods[mask & (mask - 1)].mul(&values[low]);
                prods.push(p);
            }
            let delta = BitVec::from_ones(g, (0..g).filter(|i| mask >> i & 1 == 1));
            if check(&delta, &prods[mask])? {
                ones += 1;
            }
        }
        let exhaustive_trivial = ones == 1;
        if exhaustive_trivial != (nullity == 0) {
            return Err(Error::Disagreement(format!(
                "n={}: exhaustive search finds {ones} assignments congruent to 1, linear system has nullity {nullity}",
                level.n()
            )));
        }
        exhaustive = Some(ExhaustiveRun { assignments: total as u64, congruent_to_one: ones, mismatches: 0 });
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        for _ in 0..opts.spot_checks {
            let delta = BitVec::from_ones(g, (0..g).filter(|_| rng.gen_bool(0.5)));
            let prod = delta.iter_ones().fold(Mod2Elem::one(level), |acc, i| acc.mul(&values[i]));
            check(&delta, &prod)?;
        }
        spot_check = Some(SpotCheckRun { seed: opts.seed, samples: opts.spot_checks as u64, mismatches: 0 });
    }

    let q1_cols: Vec<usize> =
        (0..g).filter(|&c| matches!(gens[c].label, GenLabel::Q { k: 1, .. })).collect();
    let other_cols: Vec<usize> = (0..g).filter(|c| !q1_cols.contains(c)).collect();
    // matrix row i is B position i + 1; r_l sits at position t + l
    let odd_rows: Vec<usize> = (1..t).step_by(2).map(|l| t + l - 1).collect();
    let other_rows: Vec<usize> = (0..h - 1).filter(|r| !odd_rows.contains(r)).collect();
    let odd = matrix.submatrix(&odd_rows, &q1_cols);
    let block_triangular = matrix.submatrix(&odd_rows, &other_cols).rows().iter().all(BitVec::is_zero);
    let complement_block_rank = matrix.submatrix(&other_rows, &other_cols).rank();
    let odd_block = OddBlock {
        rows: (1..t).step_by(2).map(|l| format!("r_{l}")).collect(),
        columns: q1_cols.iter().map(|&c| gens[c].label.to_string()).collect(),
        rows_hex: odd.rows().iter().map(BitVec::to_hex).collect(),
        rank: odd.rank(),
    };

    let trivial_only = nullity == 0;
    let exploratory = level.n() > PROVEN_MAX_LEVEL;
    let verdict = match (trivial_only, exploratory) {
        (true, false) => "trivial_only",
        (false, false) => "nontrivial_solutions",
        (true, true) => "trivial_only (exploratory)",
        (false, true) => "nontrivial_solutions (exploratory)",
    };
    Ok(Certificate {
        n: level.n(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        exploratory,
        basis: BasisElem::all(level).map(|e| e.to_string()).collect(),
        generators: gens
            .iter()
            .zip(&coords)
            .map(|(gen, c)| CertGenerator {
                label: gen.label.to_string(),
                word: gen.word.to_string(),
                coords: c.to_string(),
                coords_hex: c.bits().to_hex(),
            })
            .collect(),
        matrix_rows_hex: matrix.rows().iter().map(BitVec::to_hex).collect(),
        rank,
        nullity,
        trivial_only,
        verdict: verdict.to_string(),
        exhaustive,
        spot_check,
        odd_block,
        block_triangular,
        complement_block_rank,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// |E : D^{2^{n-2}}| by listing every class of D/D^{2^{n-2}} and reducing it
/// mod 2. Only feasible for n ≤ 5.
pub fn e_index_bruteforce(level: Level) -> Result<u64> {
    let level = level.require_at_least(4)?;
    if level.n() > 5 {
        return Err(Error::LevelOutOfRange { n: level.n(), min: 4, max: 5 });
    }
    let period = level.real_degree();
    let powers: Vec<Vec<Mod2Elem>> = generator_indices(level)
        .into_iter()
        .map(|j| {
            let d = Mod2Elem::from_cyc(&seq_d(level, j as i64));
            (0..period as u64).map(|e| d.pow(e)).collect()
        })
        .collect();
    fn walk(powers: &[Vec<Mod2Elem>], acc: &Mod2Elem) -> u64 {
        match powers.split_first() {
            None => acc.is_one() as u64,
            Some((first, rest)) => first.iter().map(|p| walk(rest, &acc.mul(p))).sum(),
        }
    }
    Ok(walk(&powers, &Mod2Elem::one(level)))
}
