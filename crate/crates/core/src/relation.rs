//! Dense binary relations over algebra elements, stored as one bitset row
//! per left-hand element.

use crate::formula::TruthMask;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    size: usize,
    words: usize,
    bits: Vec<u64>,
}

impl Relation {
    pub fn empty(size: usize) -> Self {
        let words = size.div_ceil(64);
        Self { size, words, bits: vec![0; size * words] }
    }

    /// Builds a relation from a predicate evaluated on every pair.
    pub fn from_fn(size: usize, mut f: impl FnMut(TruthMask, TruthMask) -> bool) -> Self {
        let mut r = Self::empty(size);
        for a in 0..size {
            for b in 0..size {
                if f(TruthMask(a as u32), TruthMask(b as u32)) {
                    r.set(a, b);
                }
            }
        }
        r
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, a: usize, b: usize) -> bool {
        self.bits[a * self.words + b / 64] >> (b % 64) & 1 == 1
    }

    pub fn contains(&self, a: TruthMask, b: TruthMask) -> bool {
        self.get(a.index(), b.index())
    }

    /// Returns true if the pair was newly added.
    pub fn set(&mut self, a: usize, b: usize) -> bool {
        let word = &mut self.bits[a * self.words + b / 64];
        let bit = 1u64 << (b % 64);
        let fresh = *word & bit == 0;
        *word |= bit;
        fresh
    }

    pub fn clear(&mut self, a: usize, b: usize) {
        self.bits[a * self.words + b / 64] &= !(1u64 << (b % 64));
    }

    pub fn toggle(&mut self, a: usize, b: usize) {
        self.bits[a * self.words + b / 64] ^= 1u64 << (b % 64);
    }

    pub fn row(&self, a: usize) -> &[u64] {
        &self.bits[a * self.words..(a + 1) * self.words]
    }

    /// Right-hand elements related to `a`, ascending.
    pub fn successors(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.size).filter(move |&b| self.get(a, b))
    }

    /// `row(a) |= row(b)`; returns whether anything changed.
    pub fn union_row_into(&mut self, a: usize, b: usize) -> bool {
        let mut changed = false;
        for w in 0..self.words {
            let src = self.bits[b * self.words + w];
            let dst = &mut self.bits[a * self.words + w];
            let next = *dst | src;
            changed |= next != *dst;
            *dst = next;
        }
        changed
    }

    /// Warshall transitive closure; returns whether anything changed.
    pub fn close_transitively(&mut self) -> bool {
        let mut changed = false;
        for k in 0..self.size {
            for i in 0..self.size {
                if i != k && self.get(i, k) {
                    changed |= self.union_row_into(i, k);
                }
            }
        }
        changed
    }

    /// Row as a hex string, most significant digit first.
    pub fn row_hex(&self, a: usize) -> String {
        let digits = self.size.div_ceil(4);
        let mut out = String::with_capacity(digits + 2);
        out.push_str("0x");
        for d in (0..digits).rev() {
            let mut nibble = 0u8;
            for k in 0..4 {
                let b = d * 4 + k;
                if b < self.size && self.get(a, b) {
                    nibble |= 1 << k;
                }
            }
            out.push(char::from_digit(nibble as u32, 16).unwrap().to_ascii_uppercase());
        }
        out
    }

    /// Parses a row written by [`Relation::row_hex`]. Returns `false` if the
    /// digits encode elements beyond the relation size.
    pub fn set_row_hex(&mut self, a: usize, hex: &str) -> bool {
        let digits = hex.trim_start_matches("0x").trim_start_matches("0X");
        for (d, c) in digits.chars().rev().enumerate() {
            let Some(nibble) = c.to_digit(16) else {
                return false;
            };
            for k in 0..4 {
                if nibble >> k & 1 == 1 {
                    let b = d * 4 + k;
                    if b >= self.size {
                        return false;
                    }
                    self.set(a, b);
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transitive_closure_of_a_path() {
        let mut r = Relation::empty(70);
        for i in 0..69 {
            r.set(i, i + 1);
        }
        assert!(r.close_transitively());
        assert!(r.get(0, 69));
        assert!(!r.get(69, 0));
        assert!(!r.close_transitively());
    }

    #[test]
    fn hex_rows_round_trip() {
        let mut r = Relation::empty(16);
        r.set(3, 0);
        r.set(3, 5);
        r.set(3, 15);
        assert_eq!(r.row_hex(3), "0x8021");
        let mut s = Relation::empty(16);
        assert!(s.set_row_hex(3, "0x8021"));
        assert_eq!(r, s);
        assert!(!s.set_row_hex(0, "0x10000"));
    }
}
