//! Single-block scheme: one cluster of at most `h` strings, pairwise within
//! distance `ℓ`.

use std::collections::{BTreeMap, BTreeSet};

use crate::codes::CodeError;
use crate::gf2::{BinaryMatrix, BitVector, FieldElement};
use crate::params::{Params, SingleScheme};

pub type SymmetricDifference = BTreeSet<BitVector>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReconError {
    #[error("inconsistent digests: {0}")]
    InconsistentDigests(String),
    #[error("params select the other reconciliation scheme")]
    WrongScheme,
    #[error("element has length {got}, expected {expected}")]
    ElementLength { expected: usize, got: usize },
    #[error("digest shape does not match params")]
    DigestShape,
}

pub(crate) fn inconsistent(msg: impl Into<String>) -> ReconError {
    ReconError::InconsistentDigests(msg.into())
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Digest1 {
    pub w1: BitVector,
    pub w2: FieldElement,
}

impl Digest1 {
    pub fn xor(&self, other: &Digest1) -> Result<Digest1, ReconError> {
        Ok(Digest1 {
            w1: self.w1.xor(&other.w1).map_err(|_| ReconError::DigestShape)?,
            w2: self.w2.try_add(&other.w2).map_err(|_| ReconError::DigestShape)?,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.w1.is_zero() && self.w2.is_zero()
    }
}

/// Sparse indicator over the `2^r` syndrome positions: the positions holding
/// an odd number of set elements.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IndicatorVector {
    pub len: usize,
    pub ones: BTreeSet<usize>,
}

impl IndicatorVector {
    pub fn to_bits(&self) -> BitVector {
        let mut v = BitVector::zeros(self.len);
        for &i in &self.ones {
            v.set(i, true);
        }
        v
    }
}

pub(crate) fn check_len(params: &Params, x: &BitVector) -> Result<(), ReconError> {
    if x.len() != params.n() {
        return Err(ReconError::ElementLength {
            expected: params.n(),
            got: x.len(),
        });
    }
    Ok(())
}

/// Integer value of the C_ℓ syndrome of `x` (bit j of the syndrome is 2^j).
pub fn position(params: &Params, x: &BitVector) -> Result<usize, ReconError> {
    check_len(params, x)?;
    let s = params.c_ell().syndrome(x).expect("length checked");
    Ok(s.to_u64() as usize)
}

/// The r-bit syndrome whose integer value is `k`.
pub fn position_syndrome(params: &Params, k: usize) -> BitVector {
    BitVector::from_u64(params.r(), k as u64)
}

/// Per-syndrome occupancy counts `I_H(S)` for an arbitrary parity matrix,
/// indexed by the integer value of `H·x`.
pub fn indicator_counts<'a>(h: &BinaryMatrix, set: impl IntoIterator<Item = &'a BitVector>) -> Vec<usize> {
    let mut counts = vec![0; 1 << h.nrows()];
    for x in set {
        let s = h.mul_vec(x).expect("element length matches matrix");
        counts[s.to_u64() as usize] += 1;
    }
    counts
}

pub fn indicator<'a>(
    params: &Params,
    set: impl IntoIterator<Item = &'a BitVector>,
) -> Result<IndicatorVector, ReconError> {
    let mut ones = BTreeSet::new();
    for x in set {
        let k = position(params, x)?;
        if !ones.remove(&k) {
            ones.insert(k);
        }
    }
    Ok(IndicatorVector {
        len: params.big_n(),
        ones,
    })
}

fn scheme(params: &Params) -> Result<&SingleScheme, ReconError> {
    params.single().ok_or(ReconError::WrongScheme)
}

fn embed_hbar(s: &SingleScheme, x: &BitVector) -> FieldElement {
    let v = s.hbar.mul_vec(x).expect("length checked");
    s.digest_field.from_bits(&v).expect("n-r bits")
}

/// Digest `(w1, w2)`: `w1 = H_C·z` for the parity indicator `z`, and
/// `w2 = Σ b_{M(x)}·(H̄_ℓ·x)` over the digest field. Repeated elements cancel.
pub fn encode1<'a>(params: &Params, set: impl IntoIterator<Item = &'a BitVector>) -> Result<Digest1, ReconError> {
    let s = scheme(params)?;
    let mut w2 = s.digest_field.zero();
    let mut odd = BTreeSet::new();
    for x in set {
        let k = position(params, x)?;
        if !odd.remove(&k) {
            odd.insert(k);
        }
        w2 += s.digest_field.mul(&s.b.get(k), &embed_hbar(s, x));
    }
    let w1 = s.comp.syndrome_of_positions(odd.iter().copied());
    Ok(Digest1 { w1, w2 })
}

/// Recovers `S^A △ S^B` from both digests.
pub fn decode1(params: &Params, da: &Digest1, db: &Digest1) -> Result<SymmetricDifference, ReconError> {
    let s = scheme(params)?;
    if da.w1.len() != s.comp.redundancy() || !s.digest_field.contains(&da.w2) {
        return Err(ReconError::DigestShape);
    }
    let sum = da.xor(db)?;
    let positions = s
        .comp
        .decode_positions(&sum.w1)
        .map_err(|e| inconsistent(format!("position code: {e}")))?;
    if positions.is_empty() {
        if !sum.w2.is_zero() {
            return Err(inconsistent("empty difference with nonzero w2"));
        }
        return Ok(BTreeSet::new());
    }
    let f = &s.digest_field;
    let k1 = positions[0];
    let syn1 = position_syndrome(params, k1);
    let mut offsets = vec![BitVector::zeros(params.n())];
    let mut z = sum.w2.clone();
    let mut bsum = s.b.get(k1);
    for &k in &positions[1..] {
        let syn = syn1.xor(&position_syndrome(params, k)).expect("r bits");
        let e = params
            .c_ell()
            .decode_syndrome(&syn)
            .map_err(|e: CodeError| inconsistent(format!("offset decode: {e}")))?;
        let bk = s.b.get(k);
        z += f.mul(&bk, &embed_hbar(s, &e));
        bsum += &bk;
        offsets.push(e);
    }
    let s2 = f.div(&z, &bsum).map_err(|_| inconsistent("zero B_h subset sum"))?;
    let s2 = s2.to_bits();
    let low = params.n() - params.r();
    if s2.ones().any(|i| i >= low) {
        return Err(inconsistent("recovered complement syndrome exceeds n-r bits"));
    }
    let mut stacked = BitVector::zeros(params.n());
    stacked.write_at(0, &syn1);
    stacked.write_at(params.r(), &s2.slice(0, low));
    let x = s.hf_inv.mul_vec(&stacked).expect("n bits");
    let out: BTreeSet<BitVector> = offsets.iter().map(|e| x.xor(e).expect("n bits")).collect();
    validate_single(params, &out, &sum)?;
    Ok(out)
}

fn validate_single(params: &Params, out: &BTreeSet<BitVector>, sum: &Digest1) -> Result<(), ReconError> {
    if out.len() > params.h() {
        return Err(inconsistent("more than h elements"));
    }
    let v: Vec<&BitVector> = out.iter().collect();
    for (i, a) in v.iter().enumerate() {
        for b in &v[i + 1..] {
            if a.hamming(b).expect("n bits") > params.ell() {
                return Err(inconsistent("decoded elements farther apart than ell"));
            }
        }
    }
    if encode1(params, out.iter())? != *sum {
        return Err(inconsistent("decoded set does not reproduce the digests"));
    }
    Ok(())
}

/// Exact size `u + m` in bits, `m` the digest field degree (`n − r` unless
/// the B_h sequence needs more).
pub fn digest1_cost_bits(params: &Params) -> usize {
    match params.single() {
        Some(s) => s.comp.redundancy() + s.digest_field.degree(),
        None => params.digest_bits(),
    }
}

/// Estimate `n + (h−1)·ℓ·(lg n + 1)`.
pub fn digest1_estimate_bits(n: usize, h: usize, ell: usize) -> f64 {
    n as f64 + ((h - 1) * ell) as f64 * ((n as f64).log2() + 1.0)
}

/// Maps each decoded position to its element; exposed for diagnostics.
pub fn positions_of<'a>(
    params: &Params,
    set: impl IntoIterator<Item = &'a BitVector>,
) -> Result<BTreeMap<usize, Vec<BitVector>>, ReconError> {
    let mut m: BTreeMap<usize, Vec<BitVector>> = BTreeMap::new();
    for x in set {
        m.entry(position(params, x)?).or_default().push(x.clone());
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::ParamsSpec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn bv(s: &str) -> BitVector {
        BitVector::from_bit_str(s).unwrap()
    }

    #[test]
    fn paper_indicator_counts() {
        let h = BinaryMatrix::from_strs(&["101", "011"]);
        assert_eq!(h.mul_vec(&bv("110")).unwrap(), bv("11"));
        let set = [bv("000"), bv("110"), bv("101"), bv("001")];
        let counts = indicator_counts(&h, set.iter());
        assert_eq!(counts, vec![1, 0, 1, 2]);
        // α-power labels (α¹, α², α³, α⁴ = 0) correspond to integers 2, 3, 1, 0
        let by_power: Vec<usize> = [2, 3, 1, 0].iter().map(|&i| counts[i]).collect();
        assert_eq!(by_power, vec![1, 2, 0, 1]);
        assert_eq!(by_power.iter().map(|c| c % 2).collect::<Vec<_>>(), vec![1, 0, 0, 1]);
    }

    #[test]
    fn empty_and_identical() {
        let p = ParamsSpec::new(31, 1, 3, 2, vec![]).build().unwrap();
        let d = encode1(&p, [].iter()).unwrap();
        assert!(d.is_zero());
        let s = [bv(&"1".repeat(31)), BitVector::zeros(31)];
        let da = encode1(&p, s.iter()).unwrap();
        assert_eq!(da, encode1(&p, s.iter()).unwrap());
        assert!(decode1(&p, &da, &da).unwrap().is_empty());
    }

    #[test]
    fn random_clusters_round_trip() {
        let p = ParamsSpec::new(63, 1, 3, 2, vec![]).build().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let center = BitVector::from_words(63, vec![rng.gen()]);
            let mut delta = BTreeSet::from([center.clone()]);
            while delta.len() < rng.gen_range(1..=3) {
                let mut y = center.clone();
                y.flip(rng.gen_range(0..63));
                delta.insert(y);
            }
            let common: Vec<BitVector> = (0..10).map(|_| BitVector::from_words(63, vec![rng.gen()])).collect();
            let mut a: Vec<BitVector> = common.clone();
            let mut b = common;
            for (i, x) in delta.iter().enumerate() {
                if i % 2 == 0 { a.push(x.clone()) } else { b.push(x.clone()) }
            }
            let (da, db) = (encode1(&p, a.iter()).unwrap(), encode1(&p, b.iter()).unwrap());
            assert_eq!(decode1(&p, &da, &db).unwrap(), delta);
            assert_eq!(decode1(&p, &db, &da).unwrap(), delta);
        }
    }

    #[test]
    fn cost_n127() {
        let p = ParamsSpec::new(127, 1, 4, 1, vec![]).build().unwrap();
        assert_eq!(p.single().unwrap().comp.redundancy(), 29);
        assert_eq!(digest1_cost_bits(&p), 149);
    }
}
