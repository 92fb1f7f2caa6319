use std::cmp::Ordering;
use std::fmt;

use super::GfError;

/// A fixed-length vector over F₂, packed little-endian into 64-bit words.
///
/// Bit `i` (0-based) is coordinate `i + 1` of the 1-based numbering used in
/// the documentation. Bits beyond `len` in the last word are always zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

#[inline]
pub(crate) fn words_for(bits: usize) -> usize {
    bits.div_ceil(64)
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector {
            len,
            words: vec![0; words_for(len)],
        }
    }

    /// Vector with a single one at 0-based position `pos`.
    pub fn unit(len: usize, pos: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(pos, true);
        v
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Parses a string of `0`/`1` characters, first character is bit 0.
    pub fn from_bit_str(s: &str) -> Option<Self> {
        let bits: Option<Vec<bool>> = s
            .chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect();
        bits.map(|b| Self::from_bits(&b))
    }

    /// Builds a vector from packed words; bits past `len` are cleared.
    pub fn from_words(len: usize, mut words: Vec<u64>) -> Self {
        words.resize(words_for(len), 0);
        let mut v = BitVector { len, words };
        v.clear_tail();
        v
    }

    /// The low `len` bits of `value`.
    pub fn from_u64(len: usize, value: u64) -> Self {
        Self::from_words(len, vec![value])
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn into_words(self) -> Vec<u64> {
        self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % 64);
        if bit {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn hamming(&self, other: &BitVector) -> Result<usize, GfError> {
        self.check_len(other)?;
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum())
    }

    pub fn xor(&self, other: &BitVector) -> Result<BitVector, GfError> {
        let mut out = self.clone();
        out.xor_assign(other)?;
        Ok(out)
    }

    pub fn xor_assign(&mut self, other: &BitVector) -> Result<(), GfError> {
        self.check_len(other)?;
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
        Ok(())
    }

    /// Parity of the bitwise AND, i.e. the F₂ inner product.
    pub fn dot(&self, other: &BitVector) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    /// Indices of set bits in increasing order.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let tz = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + tz)
                }
            })
        })
    }

    /// Lowest set bit, if any.
    pub fn first_one(&self) -> Option<usize> {
        self.ones().next()
    }

    /// Value of the low 64 bits; panics when a higher bit is set.
    pub fn to_u64(&self) -> u64 {
        assert!(
            self.words.iter().skip(1).all(|&w| w == 0),
            "bit vector does not fit in 64 bits"
        );
        self.words.first().copied().unwrap_or(0)
    }

    /// Keeps the coordinates listed in `idx` (0-based), in that order.
    pub fn project(&self, idx: &[usize]) -> BitVector {
        let mut out = BitVector::zeros(idx.len());
        for (j, &i) in idx.iter().enumerate() {
            if self.get(i) {
                out.set(j, true);
            }
        }
        out
    }

    /// Copies `bits` into this vector starting at `offset`.
    pub fn write_at(&mut self, offset: usize, bits: &BitVector) {
        assert!(offset + bits.len <= self.len);
        for i in bits.ones() {
            self.set(offset + i, true);
        }
    }

    /// Sub-vector `[offset, offset + len)`.
    pub fn slice(&self, offset: usize, len: usize) -> BitVector {
        assert!(offset + len <= self.len);
        let mut out = BitVector::zeros(len);
        for i in 0..len {
            if self.get(offset + i) {
                out.set(i, true);
            }
        }
        out
    }

    /// Packs bits MSB-first: bit 0 becomes the high bit of the first byte.
    pub fn to_bytes_msb(&self) -> Vec<u8> {
        let mut out = vec![0u8; self.len.div_ceil(8)];
        for i in self.ones() {
            out[i / 8] |= 0x80 >> (i % 8);
        }
        out
    }

    /// Inverse of [`to_bytes_msb`](Self::to_bytes_msb). Returns `None` when
    /// the byte count is wrong or a pad bit is set.
    pub fn from_bytes_msb(len: usize, bytes: &[u8]) -> Option<BitVector> {
        if bytes.len() != len.div_ceil(8) {
            return None;
        }
        let mut out = BitVector::zeros(len);
        for (bi, &b) in bytes.iter().enumerate() {
            for k in 0..8 {
                if b & (0x80 >> k) != 0 {
                    let i = bi * 8 + k;
                    if i >= len {
                        return None;
                    }
                    out.set(i, true);
                }
            }
        }
        Some(out)
    }

    fn check_len(&self, other: &BitVector) -> Result<(), GfError> {
        if self.len != other.len {
            return Err(GfError::LengthMismatch {
                left: self.len,
                right: other.len,
            });
        }
        Ok(())
    }

    fn clear_tail(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

/// Ordering is lexicographic by coordinate, coordinate 1 first, 0 < 1,
/// then by length.
impl Ord for BitVector {
    fn cmp(&self, other: &Self) -> Ordering {
        let n = self.len.min(other.len);
        for wi in 0..words_for(n) {
            let mut a = self.words[wi];
            let mut b = other.words[wi];
            if wi == words_for(n) - 1 && n % 64 != 0 {
                let mask = (1u64 << (n % 64)) - 1;
                a &= mask;
                b &= mask;
            }
            let d = a ^ b;
            if d != 0 {
                let lowest = d.trailing_zeros();
                return if (a >> lowest) & 1 == 1 {
                    Ordering::Greater
                } else {
                    Ordering::Less
                };
            }
        }
        self.len.cmp(&other.len)
    }
}

impl PartialOrd for BitVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector(")?;
        fmt::Display::fmt(self, f)?;
        write!(f, ")")
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Hamming distance between two equal-length vectors.
pub fn hamming(x: &BitVector, y: &BitVector) -> Result<usize, GfError> {
    x.hamming(y)
}

/// Hamming weight.
pub fn weight(x: &BitVector) -> usize {
    x.weight()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(s: &str) -> BitVector {
        BitVector::from_bit_str(s).unwrap()
    }

    #[test]
    fn example_one_distance() {
        assert_eq!(hamming(&bv("10111"), &bv("11001")).unwrap(), 3);
        assert_eq!(hamming(&bv("10111"), &bv("10111")).unwrap(), 0);
        assert_eq!(weight(&bv("00000")), 0);
    }

    #[test]
    fn length_mismatch() {
        assert!(matches!(
            hamming(&bv("101"), &bv("1011")),
            Err(GfError::LengthMismatch { left: 3, right: 4 })
        ));
    }

    #[test]
    fn ones_iterates_across_words() {
        let mut v = BitVector::zeros(200);
        for i in [0, 63, 64, 130, 199] {
            v.set(i, true);
        }
        assert_eq!(v.ones().collect::<Vec<_>>(), vec![0, 63, 64, 130, 199]);
        assert_eq!(v.weight(), 5);
    }

    #[test]
    fn msb_bytes_round_trip_and_pad_check() {
        let v = bv("10111");
        assert_eq!(v.to_bytes_msb(), vec![0b1011_1000]);
        assert_eq!(BitVector::from_bytes_msb(5, &[0b1011_1000]).unwrap(), v);
        assert!(BitVector::from_bytes_msb(5, &[0b1011_1001]).is_none());
        assert!(BitVector::from_bytes_msb(5, &[0, 0]).is_none());
    }

    #[test]
    fn lexicographic_order() {
        assert!(bv("00000") < bv("10111"));
        assert!(bv("10111") < bv("11001"));
        let mut long_a = BitVector::zeros(130);
        let mut long_b = BitVector::zeros(130);
        long_a.set(129, true);
        long_b.set(70, true);
        assert!(long_a < long_b);
    }

    #[test]
    fn projection() {
        // x = (1,0,1,0), x_{1,3} = (1,1)
        assert_eq!(bv("1010").project(&[0, 2]), bv("11"));
    }
}
