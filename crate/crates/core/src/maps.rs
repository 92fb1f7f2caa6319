//! Support maps of the multi-block scheme: positions `M`, offsets `E`, the
//! injective tag `f` on I-projections, and the columns `γ_i` of H_F.

use crate::codes::poly;
use crate::gf2::{BitVector, FieldElement};
use crate::params::{GeneralScheme, Params};
use crate::recon1::{self, position_syndrome, ReconError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MapError {
    #[error("no error pattern of weight <= ell matches")]
    Uncorrectable,
    #[error("value is not in the image of f")]
    NotInImage,
    #[error("no decomposition into at most {0} f-values")]
    Undecodable(usize),
    #[error("params have an empty index set")]
    WrongScheme,
    #[error("input has {got} bits, expected {expected}")]
    Width { expected: usize, got: usize },
}

fn general(params: &Params) -> Result<&GeneralScheme, MapError> {
    params.general().ok_or(MapError::WrongScheme)
}

/// Position of `x`: the integer value of its C_ℓ syndrome.
pub fn map_m(params: &Params, x: &BitVector) -> Result<usize, ReconError> {
    recon1::position(params, x)
}

/// The unique weight-≤ℓ vector whose syndrome is `syn_i ⊕ syn_j`.
pub fn map_e(params: &Params, i: usize, j: usize) -> Result<BitVector, MapError> {
    let s = position_syndrome(params, i)
        .xor(&position_syndrome(params, j))
        .expect("r bits");
    params.c_ell().decode_syndrome(&s).map_err(|_| MapError::Uncorrectable)
}

/// `β = x_I` with an extra top bit, as an element of GF(2^(|I|+1)).
fn beta(g: &GeneralScheme, x_i: &BitVector) -> FieldElement {
    let d = g.f_field.degree();
    let mut bits = BitVector::zeros(d);
    bits.write_at(0, x_i);
    bits.set(d - 1, true);
    g.f_field.from_bits(&bits).expect("fits")
}

fn pack_powers(g: &GeneralScheme, b: &FieldElement) -> FieldElement {
    let f = &g.f_field;
    let d = f.degree();
    let t = g.q_field.degree() / d;
    let b2 = f.square(b);
    let mut p = b.clone();
    let mut bits = BitVector::zeros(g.q_field.degree());
    for j in 0..t {
        bits.write_at(j * d, &p.to_bits());
        p = f.mul(&p, &b2);
    }
    g.q_field.from_bits(&bits).expect("fits")
}

/// `f(x_I) = (β, β³, …, β^(2t−1))` packed into GF(Q).
pub fn map_f(params: &Params, x_i: &BitVector) -> Result<FieldElement, MapError> {
    let g = general(params)?;
    let k = params.index().len();
    if x_i.len() != k {
        return Err(MapError::Width {
            expected: k,
            got: x_i.len(),
        });
    }
    Ok(pack_powers(g, &beta(g, x_i)))
}

pub fn f_inverse(params: &Params, v: &FieldElement) -> Result<BitVector, MapError> {
    let g = general(params)?;
    if !g.q_field.contains(v) {
        return Err(MapError::NotInImage);
    }
    let d = g.f_field.degree();
    let bits = v.to_bits();
    if !bits.get(d - 1) {
        return Err(MapError::NotInImage);
    }
    let x_i = bits.slice(0, d - 1);
    if map_f(params, &x_i)? != *v {
        return Err(MapError::NotInImage);
    }
    Ok(x_i)
}

/// Splits a sum of at most `tmax` distinct f-values back into its terms
/// (binary BCH power-sum decoding over GF(2^(|I|+1))). The terms come back
/// ordered by their I-projection.
pub fn f_sum_decompose(params: &Params, zeta: &FieldElement, tmax: usize) -> Result<Vec<FieldElement>, MapError> {
    let g = general(params)?;
    if !g.q_field.contains(zeta) {
        return Err(MapError::Undecodable(tmax));
    }
    if zeta.is_zero() || tmax == 0 {
        return Err(MapError::Undecodable(tmax));
    }
    let f = &g.f_field;
    let d = f.degree();
    let t = params.t();
    let tmax = tmax.min(t);
    let bits = zeta.to_bits();
    let mut sums = vec![f.zero(); 2 * t];
    for j in 0..t {
        sums[2 * j] = f.from_bits(&bits.slice(j * d, d)).expect("fits");
    }
    for k in 1..=t {
        sums[2 * k - 1] = f.square(&sums[k - 1]);
    }
    let fail = MapError::Undecodable(tmax);
    let (lambda, l) = poly::berlekamp_massey(f, &sums);
    if l == 0 || l > tmax || poly::degree(&lambda) != Some(l) {
        return Err(fail);
    }
    let roots = poly::find_roots(f, &lambda).ok_or(fail.clone())?;
    if roots.len() != l {
        return Err(fail);
    }
    let mut terms: Vec<(BitVector, FieldElement)> = Vec::with_capacity(l);
    let mut check = g.q_field.zero();
    for root in roots {
        let b = f.inv(&root).map_err(|_| fail.clone())?;
        let bb = b.to_bits();
        if !bb.get(d - 1) {
            return Err(fail);
        }
        let v = pack_powers(g, &b);
        check += &v;
        terms.push((bb.slice(0, d - 1), v));
    }
    if check != *zeta {
        return Err(fail);
    }
    terms.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(terms.into_iter().map(|(_, v)| v).collect())
}

/// Column `γ_i` of H_F, an element of GF(2^n̄).
pub fn gamma(params: &Params, i: usize) -> Result<FieldElement, MapError> {
    Ok(general(params)?.gamma.get(i))
}
