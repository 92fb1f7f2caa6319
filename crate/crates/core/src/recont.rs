//! Multi-block scheme: up to `t` clusters, told apart by their projection
//! onto the index set I.

use std::collections::{BTreeMap, BTreeSet};

use crate::gf2::{field_solve, BitVector, Field, FieldElement};
use crate::maps::{f_inverse, f_sum_decompose, map_e, map_f};
use crate::params::{GeneralScheme, Params};
use crate::recon1::{check_len, inconsistent, position, ReconError, SymmetricDifference};

/// `w1`: the 2th Reed–Solomon syndromes of the tag vector `z₁`.
/// `w2`: the t×t grid, entry `(r, k)` at `r·t + k`, holding row `r` of
/// `H_F·z₂^(k)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DigestT {
    pub w1: Vec<FieldElement>,
    pub w2: Vec<FieldElement>,
}

impl DigestT {
    pub fn xor(&self, other: &DigestT) -> Result<DigestT, ReconError> {
        if self.w1.len() != other.w1.len() || self.w2.len() != other.w2.len() {
            return Err(ReconError::DigestShape);
        }
        let add = |a: &[FieldElement], b: &[FieldElement]| -> Result<Vec<FieldElement>, ReconError> {
            a.iter()
                .zip(b)
                .map(|(x, y)| x.try_add(y).map_err(|_| ReconError::DigestShape))
                .collect()
        };
        Ok(DigestT {
            w1: add(&self.w1, &other.w1)?,
            w2: add(&self.w2, &other.w2)?,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.w1.iter().chain(&self.w2).all(FieldElement::is_zero)
    }

    pub fn grid(&self, t: usize, r: usize, k: usize) -> &FieldElement {
        &self.w2[r * t + k]
    }
}

fn general(params: &Params) -> Result<&GeneralScheme, ReconError> {
    params.general().ok_or(ReconError::WrongScheme)
}

/// Zero-pads the bit pattern of `v` into `target`.
fn pad(target: &Field, v: &FieldElement) -> FieldElement {
    target.from_bits(&v.to_bits()).expect("narrower field")
}

/// Element with I-part `x_i` and Ī-part `x_bar`.
pub fn assemble(params: &Params, x_i: &BitVector, x_bar: &BitVector) -> BitVector {
    let mut x = BitVector::zeros(params.n());
    for (k, &c) in params.index().iter().enumerate() {
        x.set(c, x_i.get(k));
    }
    if let Some(g) = params.general() {
        for (k, &c) in g.complement.iter().enumerate() {
            x.set(c, x_bar.get(k));
        }
    }
    x
}

/// Stage-1 tag vector `z₁` (position → Σ f(x_I)), for diagnostics and tests.
pub fn tag_vector<'a>(
    params: &Params,
    set: impl IntoIterator<Item = &'a BitVector>,
) -> Result<BTreeMap<usize, FieldElement>, ReconError> {
    let g = general(params)?;
    let mut z1: BTreeMap<usize, FieldElement> = BTreeMap::new();
    for x in set {
        check_len(params, x)?;
        let fv = map_f(params, &x.project(params.index())).expect("general scheme");
        *z1.entry(position(params, x)?).or_insert_with(|| g.q_field.zero()) += fv;
    }
    z1.retain(|_, v| !v.is_zero());
    Ok(z1)
}

pub fn encode_t<'a>(params: &Params, set: impl IntoIterator<Item = &'a BitVector>) -> Result<DigestT, ReconError> {
    let g = general(params)?;
    let t = params.t();
    let big = &g.big;
    let mut z1: BTreeMap<usize, FieldElement> = BTreeMap::new();
    let mut z2: BTreeMap<usize, Vec<FieldElement>> = BTreeMap::new();
    for x in set {
        check_len(params, x)?;
        let j = position(params, x)?;
        let fv = map_f(params, &x.project(params.index())).expect("general scheme");
        let emb = big.from_bits(&x.project(&g.complement)).expect("nbar bits");
        let mut s = pad(big, &fv);
        let slot = z2.entry(j).or_insert_with(|| vec![big.zero(); t]);
        for entry in slot.iter_mut() {
            *entry += big.mul(&s, &emb);
            s = big.square(&s);
        }
        *z1.entry(j).or_insert_with(|| g.q_field.zero()) += fv;
    }
    let rs_field = g.rs.field();
    let padded: Vec<(usize, FieldElement)> = z1
        .iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(&j, v)| (j, pad(rs_field, v)))
        .collect();
    let w1 = g
        .rs
        .syndrome_sparse(padded.iter().map(|(j, v)| (*j, v)))
        .expect("positions below N");
    let mut w2 = vec![big.zero(); t * t];
    for (&j, zk) in &z2 {
        let mut gp = g.gamma.get(j);
        for r in 0..t {
            for (k, z) in zk.iter().enumerate() {
                w2[r * t + k] += big.mul(&gp, z);
            }
            gp = big.square(&gp);
        }
    }
    Ok(DigestT { w1, w2 })
}

struct Block {
    sigma: FieldElement,
    positions: Vec<usize>,
    offsets: Vec<BitVector>,
}

/// Recovers `S^A △ S^B` from both digests.
pub fn decode_t(params: &Params, da: &DigestT, db: &DigestT) -> Result<SymmetricDifference, ReconError> {
    let g = general(params)?;
    let (t, h) = (params.t(), params.h());
    let big = &g.big;
    if da.w1.len() != g.rs.redundancy()
        || da.w2.len() != t * t
        || da.w1.iter().any(|v| !g.rs.field().contains(v))
        || da.w2.iter().any(|v| !big.contains(v))
    {
        return Err(ReconError::DigestShape);
    }
    let sum = da.xor(db)?;
    let zdot = g
        .rs
        .decode(&sum.w1)
        .map_err(|e| inconsistent(format!("position code: {e}")))?;
    if zdot.is_empty() {
        if !sum.is_zero() {
            return Err(inconsistent("empty difference with nonzero w2"));
        }
        return Ok(BTreeSet::new());
    }

    // group positions by tag; the first position of each tag is its center
    let qdeg = g.q_field.degree();
    let mut blocks: Vec<Block> = Vec::new();
    for (i, val) in &zdot {
        let bits = val.to_bits();
        if bits.ones().any(|b| b >= qdeg) {
            return Err(inconsistent("position value outside the tag field"));
        }
        let zeta = g.q_field.from_bits(&bits.slice(0, qdeg)).expect("qdeg bits");
        let terms = f_sum_decompose(params, &zeta, t).map_err(|e| inconsistent(e.to_string()))?;
        for sigma in terms {
            match blocks.iter_mut().find(|b| b.sigma == sigma) {
                Some(b) => b.positions.push(*i),
                None => blocks.push(Block {
                    sigma,
                    positions: vec![*i],
                    offsets: Vec::new(),
                }),
            }
        }
    }
    if blocks.len() > t {
        return Err(inconsistent("more than t blocks"));
    }
    for b in &mut blocks {
        if b.positions.len() > h {
            return Err(inconsistent("block larger than h"));
        }
        let p = b.positions[0];
        b.offsets.push(BitVector::zeros(params.n()));
        for &j in &b.positions[1..] {
            let e = map_e(params, p, j).map_err(|e| inconsistent(e.to_string()))?;
            if params.index().iter().any(|&c| e.get(c)) {
                return Err(inconsistent("offset changes the I-projection"));
            }
            b.offsets.push(e);
        }
    }

    // remove the known offset contributions, leaving Σ σ^(2^k)·Γ^(2^r)·c
    let mut wd = sum.w2.clone();
    let mut sig_pows: Vec<Vec<FieldElement>> = Vec::with_capacity(blocks.len());
    let mut gam_pows: Vec<Vec<FieldElement>> = Vec::with_capacity(blocks.len());
    for b in &blocks {
        let sp = frob_powers(big, &pad(big, &b.sigma), t);
        let mut gsum = big.zero();
        for (&j, e) in b.positions.iter().zip(&b.offsets) {
            let gj = g.gamma.get(j);
            gsum += &gj;
            if e.is_zero() {
                continue;
            }
            let ebar = big.from_bits(&e.project(&g.complement)).expect("nbar bits");
            let gp = frob_powers(big, &gj, t);
            for (r, gr) in gp.iter().enumerate() {
                let ge = big.mul(gr, &ebar);
                for (k, sk) in sp.iter().enumerate() {
                    wd[r * t + k] += big.mul(&ge, sk);
                }
            }
        }
        if gsum.is_zero() {
            return Err(inconsistent("zero gamma sum"));
        }
        gam_pows.push(frob_powers(big, &gsum, t));
        sig_pows.push(sp);
    }
    let mut a = vec![Vec::with_capacity(blocks.len()); t * t];
    for r in 0..t {
        for k in 0..t {
            for bi in 0..blocks.len() {
                a[r * t + k].push(big.mul(&gam_pows[bi][r], &sig_pows[bi][k]));
            }
        }
    }
    let centers = field_solve(big, &a, &wd).ok_or_else(|| inconsistent("center system has no unique solution"))?;

    let mut out = BTreeSet::new();
    let mut count = 0;
    for (b, c) in blocks.iter().zip(&centers) {
        let x_i = f_inverse(params, &b.sigma).map_err(|e| inconsistent(e.to_string()))?;
        let center = assemble(params, &x_i, &c.to_bits());
        for (&j, e) in b.positions.iter().zip(&b.offsets) {
            let x = center.xor(e).expect("n bits");
            if position(params, &x)? != j {
                return Err(inconsistent("decoded element sits at the wrong position"));
            }
            out.insert(x);
            count += 1;
        }
        for (i, e1) in b.offsets.iter().enumerate() {
            for e2 in &b.offsets[i + 1..] {
                if e1.hamming(e2).expect("n bits") > params.ell() {
                    return Err(inconsistent("block elements farther apart than ell"));
                }
            }
        }
    }
    if out.len() != count {
        return Err(inconsistent("decoded elements collide"));
    }
    if encode_t(params, out.iter())? != sum {
        return Err(inconsistent("decoded set does not reproduce the digests"));
    }
    Ok(out)
}

fn frob_powers(f: &Field, x: &FieldElement, count: usize) -> Vec<FieldElement> {
    let mut out = Vec::with_capacity(count);
    let mut cur = x.clone();
    for _ in 0..count {
        out.push(cur.clone());
        cur = f.square(&cur);
    }
    out
}

/// Exact serialized size: `2th` symbols of `a` bits plus `t²·n̄`.
pub fn digest_t_cost_bits(params: &Params) -> usize {
    match params.general() {
        Some(g) => g.rs.redundancy() * g.rs.field().degree() + params.t() * params.t() * g.nbar,
        None => params.digest_bits(),
    }
}

/// Estimate `t²n + 2th(ℓ + t)·lg n`.
pub fn digest_t_estimate_bits(n: usize, t: usize, h: usize, ell: usize) -> f64 {
    (t * t * n) as f64 + (2 * t * h * (ell + t)) as f64 * (n as f64).log2()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::ParamsSpec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> BitVector {
        BitVector::from_words(n, (0..n.div_ceil(64)).map(|_| rng.gen()).collect())
    }

    #[test]
    fn empty_set_digest_is_zero() {
        let p = ParamsSpec::with_default_index(63, 2, 2, 1).build().unwrap();
        assert!(encode_t(&p, [].iter()).unwrap().is_zero());
    }

    #[test]
    fn two_blocks_round_trip() {
        let p = ParamsSpec::with_default_index(63, 2, 2, 1).build().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let k = p.index().len();
        for _ in 0..100 {
            let mut x = random_vec(&mut rng, 63);
            let mut y = random_vec(&mut rng, 63);
            while x.project(p.index()) == y.project(p.index()) {
                y = random_vec(&mut rng, 63);
            }
            let mut x2 = x.clone();
            x2.flip(rng.gen_range(k..63));
            let mut y2 = y.clone();
            y2.flip(rng.gen_range(k..63));
            let common: Vec<BitVector> = (0..5).map(|_| random_vec(&mut rng, 63)).collect();
            let mut a = common.clone();
            a.extend([x.clone(), y2.clone()]);
            let mut b = common;
            b.extend([x2.clone(), y.clone()]);
            let (da, db) = (encode_t(&p, a.iter()).unwrap(), encode_t(&p, b.iter()).unwrap());
            let expect: BTreeSet<BitVector> = [x.clone(), x2, y, y2].into_iter().collect();
            assert_eq!(decode_t(&p, &da, &db).unwrap(), expect);
            x.flip(0);
        }
    }

    #[test]
    fn cost_examples() {
        let p = ParamsSpec::with_default_index(127, 2, 4, 1).build().unwrap();
        assert_eq!(digest_t_cost_bits(&p), 736);
        assert!(digest_t_cost_bits(&p) < 2 * 4 * 128);
        let p = ParamsSpec::with_default_index(63, 2, 3, 2).build().unwrap();
        assert_eq!(digest_t_cost_bits(&p), 12 * 14 + 4 * 57);
    }
}
