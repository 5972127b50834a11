//! Z[α]/2Z[α] as F2[y]/(y^m + 1), m = 2^{n-1}, with packed coefficients.

use crate::cyclotomic::{CycInt, Level};
use crate::f2::BitVec;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mod2Elem {
    level: Level,
    bits: BitVec,
}

impl Mod2Elem {
    pub fn one(level: Level) -> Self {
        Mod2Elem { level, bits: BitVec::unit(level.degree(), 0) }
    }

    pub fn from_cyc(a: &CycInt) -> Self {
        Mod2Elem { level: a.level(), bits: a.mod2_coords() }
    }

    pub fn from_bits(level: Level, bits: BitVec) -> Self {
        assert_eq!(bits.len(), level.degree(), "parity vector length");
        Mod2Elem { level, bits }
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn bits(&self) -> &BitVec {
        &self.bits
    }

    pub fn is_one(&self) -> bool {
        self.bits.get(0) && self.bits.count_ones() == 1
    }

    pub fn mul(&self, other: &Mod2Elem) -> Mod2Elem {
        assert_eq!(self.level, other.level, "level mismatch");
        let m = self.level.degree();
        let bits = if m <= 64 {
            let mask = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
            let b = other.bits.words()[0];
            let mut a = self.bits.words()[0];
            let mut acc = 0u64;
            while a != 0 {
                let i = a.trailing_zeros() as usize;
                a &= a - 1;
                acc ^= if i == 0 { b } else { ((b << i) | (b >> (m - i))) & mask };
            }
            let mut v = BitVec::zeros(m);
            for i in 0..m {
                if acc >> i & 1 == 1 {
                    v.set(i, true);
                }
            }
            v
        } else {
            let mut acc = vec![0u64; m / 64];
            for i in self.bits.iter_ones() {
                rotate_xor(&mut acc, other.bits.words(), i);
            }
            let mut v = BitVec::zeros(m);
            for (wi, w) in acc.iter().enumerate() {
                let mut w = *w;
                while w != 0 {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    v.set(wi * 64 + b, true);
                }
            }
            v
        };
        Mod2Elem { level: self.level, bits }
    }

    pub fn pow(&self, mut e: u64) -> Mod2Elem {
        let mut base = self.clone();
        let mut acc = Mod2Elem::one(self.level);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

/// acc ^= src rotated left by `shift` bits (length a multiple of 64).
fn rotate_xor(acc: &mut [u64], src: &[u64], shift: usize) {
    let nw = src.len();
    let ws = shift / 64;
    let bs = shift % 64;
    for (w, &x) in src.iter().enumerate() {
        acc[(w + ws) % nw] ^= x << bs;
        if bs > 0 {
            acc[(w + ws + 1) % nw] ^= x >> (64 - bs);
        }
    }
}
