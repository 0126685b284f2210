//! Fixed-width bit vectors over GF(2).
//!
//! Bit `i` lives in word `i / 64` at position `i % 64`, so index 0 is the
//! lowest-order bit of the first word. Bits past `len` are always zero.

use std::fmt;

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bits {
    len: usize,
    words: Vec<u64>,
}

impl Bits {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(WORD)],
        }
    }

    pub fn from_indices(len: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        let mut bits = Self::zeros(len);
        for i in ones {
            bits.set(i, true);
        }
        bits
    }

    /// Low `len` bits of `value`.
    pub fn from_u64(len: usize, value: u64) -> Self {
        let mut bits = Self::zeros(len);
        if len > 0 {
            bits.words[0] = if len >= WORD {
                value
            } else {
                value & ((1u64 << len) - 1)
            };
        }
        bits
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range for width {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit {i} out of range for width {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range for width {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn xor_assign(&mut self, other: &Bits) {
        assert_eq!(self.len, other.len, "bit width mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &Bits) -> Bits {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// Parity of the bitwise AND, i.e. the GF(2) inner product.
    pub fn dot(&self, other: &Bits) -> bool {
        assert_eq!(self.len, other.len, "bit width mismatch");
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD + w.trailing_zeros() as usize)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let tz = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(wi * WORD + tz)
                }
            })
        })
    }

    /// Value of the first 64 bits. Only meaningful for widths up to 64.
    pub fn low_u64(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }

    /// Concatenate `self` (low positions) with `other` (high positions).
    pub fn concat(&self, other: &Bits) -> Bits {
        let mut out = Bits::zeros(self.len + other.len);
        for i in self.iter_ones() {
            out.set(i, true);
        }
        for i in other.iter_ones() {
            out.set(self.len + i, true);
        }
        out
    }

    pub fn slice(&self, start: usize, len: usize) -> Bits {
        assert!(start + len <= self.len);
        Bits::from_indices(
            len,
            self.iter_ones()
                .filter(|&i| i >= start && i < start + len)
                .map(|i| i - start),
        )
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bits(")?;
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Rank of a set of equal-width vectors over GF(2).
pub fn gf2_rank(rows: &[Bits]) -> usize {
    // Rows are kept with distinct leading bits; a new row reduced against
    // them in insertion order is zero iff it lies in their span.
    let mut reduced: Vec<Bits> = Vec::new();
    for row in rows {
        let mut r = row.clone();
        for b in &reduced {
            let pivot = b.first_one().expect("stored rows are nonzero");
            if r.get(pivot) {
                r.xor_assign(b);
            }
        }
        if !r.is_zero() {
            reduced.push(r);
        }
    }
    reduced.len()
}

/// Incrementally built reduced echelon basis over GF(2).
///
/// Every stored row has a distinct pivot bit that is zero in all other rows,
/// and carries the combination of inserted vectors it equals (`combo`, one
/// bit per accepted insertion, in insertion order).
#[derive(Clone, Debug, Default)]
pub struct EchelonBasis {
    rows: Vec<EchelonRow>,
}

#[derive(Clone, Debug)]
struct EchelonRow {
    pivot: usize,
    bits: Bits,
    combo: u64,
}

impl EchelonBasis {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Express `v` in terms of the accepted vectors. Returns the combination
    /// mask if `v` lies in the span.
    pub fn coordinates(&self, v: &Bits) -> Option<u64> {
        let mut residual = v.clone();
        let mut combo = 0u64;
        for row in &self.rows {
            if residual.get(row.pivot) {
                residual.xor_assign(&row.bits);
                combo ^= row.combo;
            }
        }
        residual.is_zero().then_some(combo)
    }

    /// Insert `v`; returns false (and leaves the basis unchanged) if it is
    /// already in the span.
    pub fn insert(&mut self, v: &Bits) -> bool {
        let mut residual = v.clone();
        let mut combo = 0u64;
        for row in &self.rows {
            if residual.get(row.pivot) {
                residual.xor_assign(&row.bits);
                combo ^= row.combo;
            }
        }
        let Some(pivot) = residual.first_one() else {
            return false;
        };
        let index = self.rows.len();
        assert!(index < 64, "echelon basis limited to 64 generators");
        combo ^= 1u64 << index;
        for row in &mut self.rows {
            if row.bits.get(pivot) {
                row.bits.xor_assign(&residual);
                row.combo ^= combo;
            }
        }
        self.rows.push(EchelonRow {
            pivot,
            bits: residual,
            combo,
        });
        true
    }
}
