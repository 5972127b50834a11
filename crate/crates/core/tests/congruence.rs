use std::collections::BTreeSet;
use std::fs;

use circunit_core::congruence::{
    e_index_bruteforce, e_membership, galois_transport_check, lifted_value, p_factor, p_factor_label,
    q_power_identities, verify_main_theorem, word_mod2, Mod2WordValue, VerifyOptions,
};
use circunit_core::funnel::{build_partition, f_generators, funnel_indices, q_word, sqrt_over_f_generators};
use circunit_core::units::{eval_word, generator_indices};
use circunit_core::{seq_d, BasisElem, BitMatrix, BitVec, CycInt, Error, Level, SpecialCoordsMod2, UnitWord};
use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

fn lv(n: u32) -> Level {
    Level::new(n).unwrap()
}

fn sc(n: u32, text: &str) -> SpecialCoordsMod2 {
    SpecialCoordsMod2::parse(lv(n), text).unwrap()
}

fn w(n: u32, text: &str) -> UnitWord {
    UnitWord::parse(lv(n), text).unwrap()
}

fn bits(it: impl Iterator<Item = bool>) -> BitVec {
    BitVec::from_bools(&it.collect::<Vec<_>>())
}

// Solve for B-coordinates mod 2 by elimination against the α-coefficients
// of every basis element, without the closed-form change of basis.
fn coords_by_elimination(a: &CycInt) -> SpecialCoordsMod2 {
    let level = a.level();
    let m = level.degree();
    let basis: Vec<BasisElem> = BasisElem::all(level).collect();
    let cols: Vec<BitVec> = basis
        .iter()
        .map(|e| bits(e.to_cyc(level).coeffs().iter().map(|c| c.is_odd())))
        .collect();
    let target = bits(a.coeffs().iter().map(|c| c.is_odd()));
    let mut aug = cols.clone();
    aug.push(target);
    let (rref, pivots) = BitMatrix::from_columns(m, &aug).rref();
    assert!(!pivots.contains(&basis.len()), "not in the span of B");
    let mut x = BitVec::zeros(basis.len());
    for (row, &p) in pivots.iter().enumerate() {
        if rref.get(row, basis.len()) {
            x.set(p, true);
        }
    }
    SpecialCoordsMod2::from_bits(level, x).unwrap()
}

#[test]
fn word_mod2_examples() {
    for n in 4..=8 {
        let t = 1i64 << (n - 3);
        let got = word_mod2(&UnitWord::d(lv(n), 1, t).unwrap()).unwrap();
        assert_eq!(got, sc(n, &format!("1+s_{t}")), "n={n}");
    }
    assert_eq!(word_mod2(&q_word(lv(4), 1, 1).unwrap()).unwrap(), sc(4, "1+r_1"));
    assert_eq!(word_mod2(&q_word(lv(5), 1, 1).unwrap()).unwrap(), sc(5, "1+r_2+r_3"));
    assert_eq!(word_mod2(&q_word(lv(6), 1, 1).unwrap()).unwrap(), sc(6, "1+r_4+r_6+(r_1+r_3+r_7)"));
    assert_eq!(
        word_mod2(&q_word(lv(7), 1, 1).unwrap()).unwrap(),
        sc(7, "1+r_8+r_{12}+(r_2+r_6+r_{14})+(r_3+r_5+r_9+r_{11}+r_{15})")
    );
    assert_eq!(word_mod2(&w(5, "a^2 * d1")), Err(Error::NonRealWord(2)));
}

#[test]
fn word_mod2_matches_elimination_oracle() {
    for n in 4..=7 {
        for g in sqrt_over_f_generators(lv(n)).unwrap() {
            let v = Mod2WordValue::new(g.word.clone()).unwrap();
            assert_eq!(v.coords, coords_by_elimination(&eval_word(&g.word).unwrap()), "n={n} {}", g.label);
        }
    }
}

#[test]
fn lifted_value_differs_but_agrees_mod2() {
    let word = w(5, "d1^-3 * d5^2");
    let lifted = lifted_value(&word).unwrap();
    let exact = eval_word(&word).unwrap();
    assert_ne!(lifted, exact);
    assert_eq!(coords_by_elimination(&lifted), coords_by_elimination(&exact));
}

#[test]
fn p_factor_table() {
    let cases = [(4, 1, "d_1"), (5, 1, "d_1d_2"), (5, 2, "d_2"), (6, 1, "d_1d_2d_4"), (7, 1, "d_1d_2d_4d_8"), (7, 4, "d_8")];
    for (n, k, label) in cases {
        assert_eq!(p_factor_label(lv(n), k).unwrap(), label);
        let class = SpecialCoordsMod2::parse(lv(n), label).unwrap();
        assert_eq!(coords_by_elimination(&p_factor(lv(n), k).unwrap()), class, "n={n} k={k}");
    }
    assert!(matches!(p_factor(lv(7), 0), Err(Error::IndexOutOfRange { .. })));
    assert!(matches!(p_factor(lv(7), 5), Err(Error::IndexOutOfRange { .. })));
}

#[test]
fn q_power_chain_holds() {
    for n in 4..=8 {
        let report = q_power_identities(lv(n)).unwrap();
        let failed: Vec<_> = report.checks.iter().filter(|c| !c.holds).collect();
        assert!(failed.is_empty(), "n={n}: {failed:?}");
        assert_eq!(report.exploratory, n > 7);
    }
    let q = q_word(lv(7), 4, 1).unwrap().pow(8);
    assert_eq!(word_mod2(&q).unwrap(), sc(7, "1+r_8"));
}

#[test]
fn galois_transport() {
    for n in 5..=7 {
        assert!(galois_transport_check(lv(n)).unwrap().all_hold(), "n={n}");
    }
    assert_eq!(word_mod2(&q_word(lv(5), 1, 3).unwrap()).unwrap(), sc(5, "1+r_2+r_1"));
    assert_eq!(word_mod2(&q_word(lv(6), 1, 5).unwrap()).unwrap(), sc(6, "1+r_4+r_2+(r_1+r_3+r_5)"));
    assert_eq!(
        word_mod2(&q_word(lv(7), 1, 15).unwrap()).unwrap(),
        sc(7, "1+r_8+r_{12}+(r_2+r_6+r_{14})+(r_1+r_5+r_7+r_{11}+r_{13})")
    );
}

fn golden_cosets(n: u32) -> Vec<(String, String)> {
    let path = format!("{}/tests/golden/cosets_{}.txt", env!("CARGO_MANIFEST_DIR"), 1u32 << n);
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| {
            let (label, expr) = l.split_once('\t').unwrap();
            (label.to_string(), expr.to_string())
        })
        .collect()
}

#[test]
fn coset_generators_match_golden() {
    for n in 4..=7 {
        let golden = golden_cosets(n);
        let gens = sqrt_over_f_generators(lv(n)).unwrap();
        assert_eq!(gens.len(), golden.len());
        let mut got_set = BTreeSet::new();
        let mut want_set = BTreeSet::new();
        for (g, (label, expr)) in gens.iter().zip(&golden) {
            assert_eq!(&g.label.to_string(), label);
            let got = word_mod2(&g.word).unwrap();
            let want = sc(n, expr);
            assert_eq!(got, want, "n={n} {label}: {got} vs {expr}");
            got_set.insert(got.to_string());
            want_set.insert(want.to_string());
        }
        assert_eq!(got_set, want_set);
    }
}

#[test]
fn main_theorem_small_levels() {
    for n in 4..=7 {
        let cert = verify_main_theorem(lv(n), VerifyOptions::default()).unwrap();
        let g = 1usize << (n - 3);
        assert_eq!(cert.generators.len(), g);
        assert!(cert.trivial_only, "n={n}");
        assert_eq!((cert.rank, cert.nullity), (g, 0));
        assert_eq!(cert.verdict, "trivial_only");
        let ex = cert.exhaustive.as_ref().unwrap();
        assert_eq!(ex.assignments, 1u64 << g);
        assert_eq!(ex.congruent_to_one, 1);
        assert!(cert.spot_check.is_none());
        assert!(cert.replay().unwrap());
        assert!(cert.block_triangular);
        assert_eq!(cert.odd_block.rank, g / 2);
        assert_eq!(cert.complement_block_rank, g / 2);
    }
}

#[test]
fn n4_system_is_s2_and_r1() {
    let cert = verify_main_theorem(lv(4), VerifyOptions::default()).unwrap();
    let coords: Vec<_> = cert.generators.iter().map(|g| g.coords.as_str()).collect();
    assert_eq!(coords, ["1+s_2", "1+r_1"]);
}

const PRINTED_MATRIX_128: [&str; 8] =
    ["01010111", "10011110", "11001101", "00101111", "11010101", "10110011", "01111001", "11101001"];

// Printed rows for r_9 and r_15 disagree with the printed coset list; the
// second entry is what that list gives.
const PRINTED_MATRIX_128_ERRATA: [(usize, &str, &str); 2] = [(4, "11010101", "11110100"), (7, "11101001", "11101010")];

fn printed_rows() -> Vec<String> {
    let mut rows: Vec<String> = PRINTED_MATRIX_128.iter().map(|r| r.to_string()).collect();
    for (i, printed, fixed) in PRINTED_MATRIX_128_ERRATA {
        assert_eq!(rows[i], printed);
        rows[i] = fixed.to_string();
    }
    rows
}

fn rows_from_golden_cosets() -> Vec<String> {
    let q1: Vec<SpecialCoordsMod2> =
        golden_cosets(7).iter().filter(|(l, _)| l.starts_with("q(1,")).map(|(_, e)| sc(7, e)).collect();
    (1..16)
        .step_by(2)
        .map(|l| q1.iter().map(|c| if c.terms().contains(&BasisElem::R(l)) { '1' } else { '0' }).collect())
        .collect()
}

#[test]
fn n7_odd_block_matches_published_matrix() {
    let cert = verify_main_theorem(lv(7), VerifyOptions::default()).unwrap();
    let rows = printed_rows();
    assert_eq!(rows, rows_from_golden_cosets());
    let want: Vec<String> = rows.iter().map(|row| bits(row.chars().map(|c| c == '1')).to_hex()).collect();
    assert_eq!(cert.odd_block.rows, ["r_1", "r_3", "r_5", "r_7", "r_9", "r_11", "r_13", "r_15"]);
    assert_eq!(cert.odd_block.columns[0], "q(1,1)");
    assert_eq!(cert.odd_block.columns[7], "q(1,15)");
    assert_eq!(cert.odd_block.rows_hex, want);
    assert_eq!(cert.odd_block.rank, 8);
    let printed: Vec<BitVec> = PRINTED_MATRIX_128.iter().map(|r| bits(r.chars().map(|c| c == '1'))).collect();
    assert_eq!(BitMatrix::from_rows(8, printed).rank(), 8);
}

#[test]
fn exploratory_levels_use_spot_checks() {
    let cert = verify_main_theorem(lv(8), VerifyOptions { seed: 3, spot_checks: 200 }).unwrap();
    assert!(cert.exploratory);
    assert_eq!(cert.verdict, "trivial_only (exploratory)");
    assert!(cert.exhaustive.is_none());
    assert_eq!(cert.spot_check.as_ref().unwrap().samples, 200);
    assert_eq!(verify_main_theorem(lv(3), VerifyOptions::default()).unwrap_err(), Error::LevelTooSmall { n: 3, min: 4 });
}

#[test]
fn certificate_replay_detects_tampering() {
    let mut cert = verify_main_theorem(lv(6), VerifyOptions::default()).unwrap();
    assert!(cert.replay().unwrap());
    cert.matrix_rows_hex[0] = "ff".into();
    assert!(!cert.replay().unwrap());
    let mut cert = verify_main_theorem(lv(6), VerifyOptions::default()).unwrap();
    cert.rank -= 1;
    assert!(!cert.replay().unwrap());
}

#[test]
fn e_membership_examples() {
    for n in 4..=8 {
        let h = 1i64 << (n - 2);
        assert!(e_membership(&UnitWord::d(lv(n), 1, h).unwrap()).unwrap());
        assert!(!e_membership(&UnitWord::d(lv(n), 1, h / 2).unwrap()).unwrap());
        assert!(e_membership(&q_word(lv(n), 0, 3).unwrap()).unwrap());
    }
    assert_eq!(e_membership(&w(4, "a * d1")), Err(Error::NonRealWord(1)));
}

#[test]
fn funnel_congruences() {
    for n in 4..=7 {
        let level = lv(n);
        let p = build_partition(level).unwrap();
        for &j in p.a_sets[0].iter().filter(|&&j| j != 1) {
            assert!(e_membership(&q_word(level, 0, j).unwrap()).unwrap(), "q(0,{j})");
        }
        for k in 1..=n - 3 {
            for &j in &p.a_sets[k as usize] {
                let q = q_word(level, k, j).unwrap();
                assert!(e_membership(&q.pow(1 << k)).unwrap());
                assert!(!e_membership(&q.pow(1 << (k - 1))).unwrap(), "n={n} q({k},{j})");
            }
        }
        let half = 1i64 << (n - 3);
        let idx = generator_indices(level);
        for &a in &idx {
            for &b in &idx {
                let prod = UnitWord::d(level, a, half).unwrap().checked_mul(&UnitWord::d(level, b, half).unwrap()).unwrap();
                assert!(e_membership(&prod).unwrap());
            }
        }
    }
}

#[test]
fn order_of_d_mod_two() {
    for n in 4..=8 {
        let level = lv(n);
        for j in generator_indices(level) {
            let d = seq_d(level, j as i64);
            for k in 0..n - 2 {
                assert!(!d.pow(1 << k).is_one_mod2(), "n={n} d_{j}^{}", 1 << k);
            }
            assert!(d.pow(1 << (n - 2)).is_one_mod2());
        }
    }
}

#[test]
fn f_is_inside_e() {
    for n in 4..=7 {
        for g in f_generators(lv(n)).unwrap() {
            assert!(e_membership(&g.word).unwrap(), "n={n} {}", g.label);
        }
    }
}

#[test]
fn bruteforce_e_index_equals_f_index() {
    for n in 4..=5 {
        let idx = funnel_indices(lv(n)).unwrap();
        let f_over_dpow = &idx.d_dpow / &idx.d_f;
        assert_eq!(BigInt::from(e_index_bruteforce(lv(n)).unwrap()), f_over_dpow, "n={n}");
    }
    assert!(e_index_bruteforce(lv(6)).is_err());
}

fn random_word(level: Level, exps: &[i64]) -> UnitWord {
    let idx = generator_indices(level);
    UnitWord::from_parts(level, 0, idx.into_iter().zip(exps.iter().copied())).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn e_closed_and_contains_powers(a in prop::collection::vec(-3i64..=3, 7), b in prop::collection::vec(-3i64..=3, 7)) {
        let level = lv(5);
        let x = random_word(level, &a).pow(8);
        prop_assert!(e_membership(&x).unwrap());
        let f = f_generators(level).unwrap();
        let y = f.iter().zip(&b).fold(UnitWord::identity(level), |acc, (g, &e)| acc.checked_mul(&g.word.pow(e)).unwrap());
        prop_assert!(e_membership(&y).unwrap());
        prop_assert!(e_membership(&x.checked_mul(&y).unwrap()).unwrap());
    }

    #[test]
    fn linearization_on_subsets(mask in 0u32..256) {
        let level = lv(6);
        let gens = sqrt_over_f_generators(level).unwrap();
        let mut word = UnitWord::identity(level);
        let mut predicted = SpecialCoordsMod2::zero(level);
        for (i, g) in gens.iter().enumerate() {
            if mask >> i & 1 == 1 {
                word = word.checked_mul(&g.word).unwrap();
                predicted = predicted.add(&word_mod2(&g.word).unwrap().add(&SpecialCoordsMod2::one(level)));
            }
        }
        let exact = coords_by_elimination(&eval_word(&word).unwrap());
        prop_assert_eq!(exact, predicted.add(&SpecialCoordsMod2::one(level)));
    }
}
