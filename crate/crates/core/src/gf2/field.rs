//! Binary extension fields GF(2^m) in polynomial basis.
//!
//! Elements are bit-packed low-degree-first into 64-bit words. Every degree
//! has exactly one canonical modulus (the numerically smallest irreducible
//! polynomial with nonzero constant term), so a degree alone identifies a
//! field and two hosts derive identical arithmetic from parameters only.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign};
use std::sync::{Arc, Mutex, OnceLock};

use smallvec::SmallVec;

use super::bits::{words_for, BitVector};
use super::GfError;

pub const MAX_DEGREE: usize = 4096;

type Words = SmallVec<[u64; 2]>;

/// Degree and irreducible modulus of a binary extension field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    degree: usize,
    /// `degree + 1` coefficient bits, constant term first.
    modulus: BitVector,
}

impl FieldSpec {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &BitVector {
        &self.modulus
    }
}

/// An element of GF(2^m). The degree tags which canonical field it lives in.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    degree: u32,
    w: Words,
}

impl FieldElement {
    pub fn degree(&self) -> usize {
        self.degree as usize
    }

    pub fn is_zero(&self) -> bool {
        self.w.iter().all(|&x| x == 0)
    }

    pub fn is_one(&self) -> bool {
        self.w.first() == Some(&1) && self.w.iter().skip(1).all(|&x| x == 0)
    }

    pub fn words(&self) -> &[u64] {
        &self.w
    }

    /// Polynomial-basis coefficients as a bit vector of length `m`.
    pub fn to_bits(&self) -> BitVector {
        BitVector::from_words(self.degree(), self.w.to_vec())
    }

    /// Integer whose binary digits are the coefficients; panics above 64 bits.
    pub fn to_u64(&self) -> u64 {
        assert!(self.w.iter().skip(1).all(|&x| x == 0), "element exceeds 64 bits");
        self.w[0]
    }

    /// Coefficient of `x^i`.
    pub fn coeff(&self, i: usize) -> bool {
        i < self.degree() && (self.w[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn try_add(&self, other: &FieldElement) -> Result<FieldElement, GfError> {
        check_same(self, other)?;
        let mut out = self.clone();
        for (a, b) in out.w.iter_mut().zip(&other.w) {
            *a ^= b;
        }
        Ok(out)
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{})[", self.degree)?;
        for w in self.w.iter().rev() {
            write!(f, "{w:016x}")?;
        }
        write!(f, "]")
    }
}

impl AddAssign<&FieldElement> for FieldElement {
    fn add_assign(&mut self, rhs: &FieldElement) {
        assert_eq!(self.degree, rhs.degree, "adding elements of different fields");
        for (a, b) in self.w.iter_mut().zip(&rhs.w) {
            *a ^= b;
        }
    }
}

impl AddAssign<FieldElement> for FieldElement {
    fn add_assign(&mut self, rhs: FieldElement) {
        *self += &rhs;
    }
}

impl Add<&FieldElement> for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    fn add(mut self, rhs: FieldElement) -> FieldElement {
        self += &rhs;
        self
    }
}

fn check_same(a: &FieldElement, b: &FieldElement) -> Result<(), GfError> {
    if a.degree != b.degree {
        return Err(GfError::FieldMismatch {
            left: a.degree(),
            right: b.degree(),
        });
    }
    Ok(())
}

struct Inner {
    spec: FieldSpec,
    m: usize,
    nw: usize,
    /// modulus minus x^m
    tail: Vec<u64>,
    /// modulus as words (m + 1 bits)
    modulus: Vec<u64>,
}

/// Handle to a canonical field GF(2^m); cheap to clone.
#[derive(Clone)]
pub struct Field {
    inner: Arc<Inner>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field(GF(2^{}))", self.inner.m)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.inner.m == other.inner.m
    }
}
impl Eq for Field {}

fn cache() -> &'static Mutex<HashMap<usize, Field>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Field>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The canonical field of degree `m`: its modulus is the numerically
/// smallest irreducible polynomial of degree `m` with constant term 1.
pub fn ff_make(m: usize) -> Result<Field, GfError> {
    Field::new(m)
}

impl Field {
    pub fn new(m: usize) -> Result<Field, GfError> {
        if !(1..=MAX_DEGREE).contains(&m) {
            return Err(GfError::DegreeOutOfRange(m));
        }
        if let Some(f) = cache().lock().unwrap().get(&m) {
            return Ok(f.clone());
        }
        let tail = find_irreducible_tail(m)?;
        let field = Field::from_tail(m, tail);
        cache().lock().unwrap().insert(m, field.clone());
        Ok(field)
    }

    /// Field over an explicit modulus `x^m + tail`; irreducibility is the
    /// caller's responsibility.
    fn from_tail(m: usize, tail: u64) -> Field {
        let nw = words_for(m);
        let mut modulus = vec![0u64; words_for(m + 1)];
        modulus[0] = tail;
        modulus[m / 64] |= 1u64 << (m % 64);
        let spec = FieldSpec {
            degree: m,
            modulus: BitVector::from_words(m + 1, modulus.clone()),
        };
        Field {
            inner: Arc::new(Inner {
                spec,
                m,
                nw,
                tail: vec![tail],
                modulus,
            }),
        }
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.inner.spec
    }

    pub fn degree(&self) -> usize {
        self.inner.m
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            degree: self.inner.m as u32,
            w: SmallVec::from_elem(0, self.inner.nw),
        }
    }

    pub fn one(&self) -> FieldElement {
        self.from_u64(1)
    }

    /// Element whose coefficients are the low bits of `v`; bits at or above
    /// the degree are rejected.
    pub fn from_u64(&self, v: u64) -> FieldElement {
        assert!(
            self.inner.m >= 64 || v >> self.inner.m == 0,
            "value {v:#x} does not fit in GF(2^{})",
            self.inner.m
        );
        let mut e = self.zero();
        e.w[0] = v;
        e
    }

    /// Element from coefficient bits; the vector may be shorter than `m`
    /// (zero-padded) but not longer.
    pub fn from_bits(&self, bits: &BitVector) -> Result<FieldElement, GfError> {
        if bits.len() > self.inner.m {
            return Err(GfError::WidthExceeded {
                width: bits.len(),
                degree: self.inner.m,
            });
        }
        let mut e = self.zero();
        for (dst, src) in e.w.iter_mut().zip(bits.words()) {
            *dst = *src;
        }
        Ok(e)
    }

    pub fn contains(&self, a: &FieldElement) -> bool {
        a.degree() == self.inner.m
    }

    fn check(&self, a: &FieldElement) -> Result<(), GfError> {
        if a.degree() != self.inner.m {
            return Err(GfError::FieldMismatch {
                left: self.inner.m,
                right: a.degree(),
            });
        }
        Ok(())
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        a + b
    }

    /// Product reduced by the modulus. Panics on elements of another field;
    /// see [`checked_mul`](Self::checked_mul).
    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.checked_mul(a, b).expect("field mismatch in mul")
    }

    pub fn checked_mul(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement, GfError> {
        self.check(a)?;
        self.check(b)?;
        let inner = &*self.inner;
        if inner.nw == 1 {
            let p = clmul64(a.w[0], b.w[0]);
            return Ok(self.wrap1(reduce1(p, inner.m, inner.tail[0])));
        }
        let mut prod = vec![0u64; 2 * inner.nw];
        for (i, &x) in a.w.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.w.iter().enumerate() {
                let p = clmul64(x, y);
                prod[i + j] ^= p as u64;
                prod[i + j + 1] ^= (p >> 64) as u64;
            }
        }
        Ok(self.wrap(reduce(&mut prod, inner.m, &inner.tail)))
    }

    pub fn square(&self, a: &FieldElement) -> FieldElement {
        self.check(a).expect("field mismatch in square");
        let inner = &*self.inner;
        if inner.nw == 1 {
            let x = a.w[0];
            let p = (spread32(x as u32) as u128) | ((spread32((x >> 32) as u32) as u128) << 64);
            return self.wrap1(reduce1(p, inner.m, inner.tail[0]));
        }
        let mut prod = square_words(&a.w);
        self.wrap(reduce(&mut prod, inner.m, &inner.tail))
    }

    /// `a^(2^k)`, the k-th Frobenius power.
    pub fn frob(&self, a: &FieldElement, k: usize) -> FieldElement {
        let mut out = a.clone();
        for _ in 0..(k % self.inner.m) {
            out = self.square(&out);
        }
        out
    }

    pub fn pow(&self, a: &FieldElement, mut e: u64) -> FieldElement {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.square(&base);
            }
        }
        acc
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement, GfError> {
        self.check(a)?;
        if a.is_zero() {
            return Err(GfError::ZeroInverse);
        }
        let inner = &*self.inner;
        let len = words_for(inner.m + 1);
        let mut u = a.w.to_vec();
        u.resize(len, 0);
        let mut v = inner.modulus.clone();
        let mut g1 = vec![0u64; len];
        g1[0] = 1;
        let mut g2 = vec![0u64; len];
        loop {
            let du = poly_degree(&u).expect("u stays nonzero");
            if du == 0 {
                break;
            }
            let dv = poly_degree(&v).expect("v stays nonzero");
            if du < dv {
                std::mem::swap(&mut u, &mut v);
                std::mem::swap(&mut g1, &mut g2);
                continue;
            }
            let j = du - dv;
            shl_xor(&mut u, &v, j);
            shl_xor(&mut g1, &g2, j);
        }
        g1.truncate(inner.nw);
        Ok(self.wrap(g1))
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement, GfError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// Zero-pads an element of a smaller (or equal) field into this one.
    /// This is an injective F₂-linear map, not a subfield embedding.
    pub fn pad(&self, a: &FieldElement) -> Result<FieldElement, GfError> {
        self.from_bits(&a.to_bits())
    }

    fn wrap1(&self, v: u64) -> FieldElement {
        let mut e = self.zero();
        e.w[0] = v;
        e
    }

    fn wrap(&self, words: Vec<u64>) -> FieldElement {
        let mut w: Words = SmallVec::from_vec(words);
        w.truncate(self.inner.nw);
        FieldElement {
            degree: self.inner.m as u32,
            w,
        }
    }
}

/// Product of two elements of the same canonical field.
pub fn ff_mul(a: &FieldElement, b: &FieldElement) -> Result<FieldElement, GfError> {
    check_same(a, b)?;
    Field::new(a.degree())?.checked_mul(a, b)
}

pub fn ff_inv(a: &FieldElement) -> Result<FieldElement, GfError> {
    Field::new(a.degree())?.inv(a)
}

pub fn ff_frob(a: &FieldElement, k: usize) -> FieldElement {
    Field::new(a.degree()).expect("element of a valid field").frob(a, k)
}

// --- word-level polynomial helpers -------------------------------------

#[inline]
fn clmul64(a: u64, b: u64) -> u128 {
    #[cfg(target_arch = "x86_64")]
    {
        if std::arch::is_x86_feature_detected!("pclmulqdq") {
            // SAFETY: feature presence checked at runtime.
            return unsafe { clmul64_pclmul(a, b) };
        }
    }
    clmul64_soft(a, b)
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "pclmulqdq")]
unsafe fn clmul64_pclmul(a: u64, b: u64) -> u128 {
    use std::arch::x86_64::*;
    let r = _mm_clmulepi64_si128(_mm_set_epi64x(0, a as i64), _mm_set_epi64x(0, b as i64), 0);
    std::mem::transmute::<__m128i, u128>(r)
}

pub(crate) fn clmul64_soft(a: u64, b: u64) -> u128 {
    let mut table = [0u128; 16];
    for i in 1..16 {
        table[i] = (table[i >> 1] << 1) ^ if i & 1 == 1 { a as u128 } else { 0 };
    }
    let mut r = 0u128;
    for nib in (0..16).rev() {
        r = (r << 4) ^ table[((b >> (4 * nib)) & 0xf) as usize];
    }
    r
}

/// Interleaves zeros between the bits of `x` (squaring over F₂).
#[inline]
fn spread32(x: u32) -> u64 {
    let mut v = x as u64;
    v = (v | (v << 16)) & 0x0000_FFFF_0000_FFFF;
    v = (v | (v << 8)) & 0x00FF_00FF_00FF_00FF;
    v = (v | (v << 4)) & 0x0F0F_0F0F_0F0F_0F0F;
    v = (v | (v << 2)) & 0x3333_3333_3333_3333;
    v = (v | (v << 1)) & 0x5555_5555_5555_5555;
    v
}

fn square_words(a: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; 2 * a.len()];
    for (i, &x) in a.iter().enumerate() {
        out[2 * i] = spread32(x as u32);
        out[2 * i + 1] = spread32((x >> 32) as u32);
    }
    out
}

/// Reduction of a product of two single-word elements.
#[inline]
fn reduce1(mut p: u128, m: usize, tail: u64) -> u64 {
    let mask: u128 = if m >= 128 { u128::MAX } else { (1u128 << m) - 1 };
    loop {
        let hi = p >> m;
        if hi == 0 {
            return p as u64;
        }
        // hi < 2^(m-1) ≤ 2^63 for single-word fields
        p = (p & mask) ^ clmul64(hi as u64, tail);
    }
}

pub(crate) fn poly_degree(a: &[u64]) -> Option<usize> {
    a.iter()
        .enumerate()
        .rev()
        .find(|(_, &w)| w != 0)
        .map(|(i, &w)| i * 64 + 63 - w.leading_zeros() as usize)
}

/// `dst ^= src << shift`, growing nothing: bits shifted past `dst` are dropped.
pub(crate) fn shl_xor(dst: &mut [u64], src: &[u64], shift: usize) {
    let ws = shift / 64;
    let bs = shift % 64;
    for (i, &s) in src.iter().enumerate() {
        if s == 0 {
            continue;
        }
        let lo = i + ws;
        if lo < dst.len() {
            dst[lo] ^= s << bs;
        }
        if bs != 0 && lo + 1 < dst.len() {
            dst[lo + 1] ^= s >> (64 - bs);
        }
    }
}

fn shr_words(a: &[u64], shift: usize) -> Vec<u64> {
    let ws = shift / 64;
    let bs = shift % 64;
    if ws >= a.len() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() - ws];
    for i in 0..out.len() {
        let lo = a[i + ws] >> bs;
        let hi = if bs != 0 && i + ws + 1 < a.len() {
            a[i + ws + 1] << (64 - bs)
        } else {
            0
        };
        out[i] = lo | hi;
    }
    out
}

/// Reduces `p` modulo `x^m + tail` by repeatedly folding the part above
/// degree `m` through `tail` (valid because `deg tail < m`).
fn reduce(p: &mut Vec<u64>, m: usize, tail: &[u64]) -> Vec<u64> {
    let nw = words_for(m);
    loop {
        match poly_degree(p) {
            Some(d) if d >= m => {}
            _ => break,
        }
        let hi = shr_words(p, m);
        // clear bits >= m
        for (i, w) in p.iter_mut().enumerate() {
            if i * 64 >= m {
                *w = 0;
            } else if (i + 1) * 64 > m {
                *w &= (1u64 << (m % 64)) - 1;
            }
        }
        for (i, &h) in hi.iter().enumerate() {
            if h == 0 {
                continue;
            }
            for (j, &t) in tail.iter().enumerate() {
                let prod = clmul64(h, t);
                if i + j < p.len() {
                    p[i + j] ^= prod as u64;
                }
                if i + j + 1 < p.len() {
                    p[i + j + 1] ^= (prod >> 64) as u64;
                }
            }
        }
    }
    let mut out = std::mem::take(p);
    out.resize(nw, 0);
    out
}

/// Remainder of `a` modulo `b` (b nonzero).
fn poly_rem(a: &[u64], b: &[u64]) -> Vec<u64> {
    let db = poly_degree(b).expect("division by zero polynomial");
    let mut r = a.to_vec();
    while let Some(dr) = poly_degree(&r) {
        if dr < db {
            break;
        }
        shl_xor(&mut r, b, dr - db);
    }
    r
}

fn poly_gcd(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    while poly_degree(&y).is_some() {
        let r = poly_rem(&x, &y);
        x = y;
        y = r;
    }
    x
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's test: `x^(2^m) = x (mod f)` and `gcd(x^(2^(m/p)) - x, f) = 1`
/// for every prime `p | m`.
fn is_irreducible(m: usize, tail: u64) -> bool {
    if m == 1 {
        return true;
    }
    let ring = Field::from_tail(m, tail);
    let mut x = ring.zero();
    x.w[0] = 2;
    let primes = prime_factors(m);
    let mut checkpoints: Vec<usize> = primes.iter().map(|p| m / p).collect();
    checkpoints.sort_unstable();
    let mut cur = x.clone();
    let mut done = 0;
    for &cp in &checkpoints {
        while done < cp {
            cur = ring.square(&cur);
            done += 1;
        }
        let mut diff: Vec<u64> = (&cur + &x).w.to_vec();
        diff.resize(words_for(m + 1), 0);
        if poly_degree(&diff).is_none() {
            return false;
        }
        let g = poly_gcd(&ring.inner.modulus, &diff);
        if poly_degree(&g) != Some(0) {
            return false;
        }
    }
    while done < m {
        cur = ring.square(&cur);
        done += 1;
    }
    cur == x
}

fn find_irreducible_tail(m: usize) -> Result<u64, GfError> {
    if m == 1 {
        return Ok(1);
    }
    let limit: u64 = if m >= 63 { u64::MAX } else { 1u64 << m };
    let mut tail = 1u64;
    while tail < limit {
        // x^m + tail has an even number of terms iff x + 1 divides it
        if (tail.count_ones() + 1) % 2 == 1 && is_irreducible(m, tail) {
            return Ok(tail);
        }
        tail += 2;
    }
    Err(GfError::NoIrreducible(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Exhaustive irreducibility by trial division over all lower-degree
    /// polynomials; independent of the Rabin test.
    fn brute_irreducible(poly: u64) -> bool {
        let deg = 63 - poly.leading_zeros() as usize;
        for d in 1..=deg / 2 {
            for q in (1u64 << d)..(1u64 << (d + 1)) {
                let mut r = poly;
                while r != 0 && (63 - r.leading_zeros() as usize) >= d {
                    let dr = 63 - r.leading_zeros() as usize;
                    r ^= q << (dr - d);
                }
                if r == 0 {
                    return false;
                }
            }
        }
        true
    }

    fn brute_smallest(m: usize) -> u64 {
        ((1u64 << m) + 1..(1u64 << (m + 1)))
            .step_by(2)
            .find(|&p| brute_irreducible(p))
            .unwrap()
    }

    #[test]
    fn moduli_match_brute_force() {
        for m in 2..=16 {
            let f = ff_make(m).unwrap();
            let got = f.spec().modulus().to_u64();
            assert_eq!(got, brute_smallest(m), "degree {m}");
        }
    }

    #[test]
    fn named_moduli() {
        assert_eq!(ff_make(3).unwrap().spec().modulus().to_string(), "1101");
        assert_eq!(ff_make(1).unwrap().spec().modulus().to_string(), "11");
        assert_eq!(ff_make(8).unwrap().spec().modulus().to_u64(), 0x11b);
    }

    #[test]
    fn degree_range() {
        assert!(matches!(ff_make(0), Err(GfError::DegreeOutOfRange(0))));
        assert!(matches!(ff_make(4097), Err(GfError::DegreeOutOfRange(_))));
    }

    #[test]
    fn large_degree_moduli_are_found() {
        for m in [120, 127, 233, 571, 1024] {
            let f = ff_make(m).unwrap();
            assert_eq!(f.spec().modulus().len(), m + 1);
            let a = f.from_u64(0x1234_5678_9abc_def1);
            assert_eq!(f.frob(&a, m), a, "Frobenius order at m={m}");
        }
    }

    #[test]
    fn gf8_examples() {
        let f = ff_make(3).unwrap();
        let x = f.from_u64(0b010);
        let x2 = f.from_u64(0b100);
        assert_eq!(f.mul(&x, &x2).to_bits().to_string(), "110");
        assert_eq!(f.inv(&x).unwrap(), f.from_u64(0b101));
        assert_eq!(f.inv(&f.one()).unwrap(), f.one());
        assert!(matches!(f.inv(&f.zero()), Err(GfError::ZeroInverse)));
        assert_eq!(f.frob(&x, 1), x2);
        assert_eq!(f.frob(&x, 0), x);
        assert_eq!(f.frob(&f.zero(), 5), f.zero());
    }

    #[test]
    fn mismatched_fields() {
        let a = ff_make(5).unwrap().one();
        let b = ff_make(6).unwrap().one();
        assert!(matches!(ff_mul(&a, &b), Err(GfError::FieldMismatch { .. })));
    }

    #[test]
    fn soft_clmul_matches_dispatch() {
        let pairs = [(0u64, 5u64), (u64::MAX, u64::MAX), (0x8000_0000_0000_0001, 3)];
        for (a, b) in pairs {
            assert_eq!(clmul64_soft(a, b), clmul64(a, b));
        }
    }

    fn elem(f: &Field, seed: &[u64]) -> FieldElement {
        f.from_bits(&BitVector::from_words(f.degree(), seed.to_vec())).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn ring_axioms(m in prop::sample::select(vec![2usize, 7, 13, 63, 64, 65, 120, 128, 200, 256]),
                       words in proptest::collection::vec(any::<u64>(), 12)) {
            let f = ff_make(m).unwrap();
            let (a, b, c) = (elem(&f, &words[0..4]), elem(&f, &words[4..8]), elem(&f, &words[8..12]));
            prop_assert_eq!(f.mul(&a, &(&b + &c)), &f.mul(&a, &b) + &f.mul(&a, &c));
            prop_assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
            prop_assert!((&a + &a).is_zero());
            prop_assert_eq!(f.square(&a), f.mul(&a, &a));
            prop_assert_eq!(f.frob(&a, m), a.clone());
            if !a.is_zero() {
                prop_assert!(f.mul(&a, &f.inv(&a).unwrap()).is_one());
            }
        }
    }
}
