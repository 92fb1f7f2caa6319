//! Dense univariate polynomials over GF(2^m), coefficients lowest degree first.

use crate::gf2::{Field, FieldElement};

pub type Poly = Vec<FieldElement>;

pub fn trim(p: &mut Poly) {
    while p.last().is_some_and(FieldElement::is_zero) {
        p.pop();
    }
}

/// Degree, `None` for the zero polynomial.
pub fn degree(p: &[FieldElement]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn eval(f: &Field, p: &[FieldElement], x: &FieldElement) -> FieldElement {
    let mut acc = f.zero();
    for c in p.iter().rev() {
        acc = f.mul(&acc, x);
        acc += c;
    }
    acc
}

pub fn mul(f: &Field, a: &[FieldElement], b: &[FieldElement]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += f.mul(x, y);
        }
    }
    trim(&mut out);
    out
}

/// Quotient and remainder; `b` must be nonzero.
pub fn divmod(f: &Field, a: &[FieldElement], b: &[FieldElement]) -> (Poly, Poly) {
    let db = degree(b).expect("division by the zero polynomial");
    let lead_inv = f.inv(&b[db]).expect("nonzero leading coefficient");
    let mut r: Poly = a.to_vec();
    trim(&mut r);
    let mut q = vec![f.zero(); r.len().saturating_sub(db).max(1)];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = f.mul(&r[dr], &lead_inv);
        for (i, bc) in b[..=db].iter().enumerate() {
            r[dr - db + i] += f.mul(&c, bc);
        }
        q[dr - db] = c;
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

pub fn rem(f: &Field, a: &[FieldElement], b: &[FieldElement]) -> Poly {
    divmod(f, a, b).1
}

pub fn monic(f: &Field, p: &[FieldElement]) -> Poly {
    let mut p = p.to_vec();
    trim(&mut p);
    if let Some(d) = degree(&p) {
        let li = f.inv(&p[d]).expect("nonzero");
        for c in p.iter_mut() {
            *c = f.mul(c, &li);
        }
    }
    p
}

/// Monic greatest common divisor.
pub fn gcd(f: &Field, a: &[FieldElement], b: &[FieldElement]) -> Poly {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(f, &x, &y);
        x = y;
        y = r;
    }
    monic(f, &x)
}

/// Shortest LFSR generating `s`; returns the connection polynomial
/// `Λ(z)` with `Λ(0) = 1` and its linear complexity.
pub fn berlekamp_massey(f: &Field, s: &[FieldElement]) -> (Poly, usize) {
    let mut c: Poly = vec![f.one()];
    let mut b: Poly = vec![f.one()];
    let mut l = 0usize;
    let mut m = 1usize;
    let mut bb = f.one();
    for n in 0..s.len() {
        let mut d = s[n].clone();
        for i in 1..=l.min(c.len().saturating_sub(1)) {
            d += f.mul(&c[i], &s[n - i]);
        }
        if d.is_zero() {
            m += 1;
            continue;
        }
        let coef = f.mul(&d, &f.inv(&bb).expect("nonzero discrepancy"));
        let mut next = c.clone();
        if next.len() < b.len() + m {
            next.resize(b.len() + m, f.zero());
        }
        for (i, bi) in b.iter().enumerate() {
            next[i + m] += f.mul(&coef, bi);
        }
        if 2 * l <= n {
            b = c;
            l = n + 1 - l;
            bb = d;
            m = 1;
        } else {
            m += 1;
        }
        c = next;
    }
    trim(&mut c);
    (c, l)
}

/// Formal derivative (characteristic two: only odd terms survive).
pub fn derivative(f: &Field, p: &[FieldElement]) -> Poly {
    let mut out: Poly = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| if i % 2 == 1 { c.clone() } else { f.zero() })
        .collect();
    trim(&mut out);
    out
}

/// All roots of `p` when it splits into distinct linear factors over the
/// field, `None` otherwise. Uses Berlekamp's trace algorithm: with
/// `X_i = x^(2^i) mod p`, `Tr(βx) mod p = Σ β^(2^i) X_i`, and gcds with these
/// trace polynomials separate the roots.
pub fn find_roots(f: &Field, p: &[FieldElement]) -> Option<Vec<FieldElement>> {
    let p = monic(f, p);
    let d = degree(&p)?;
    if d == 0 {
        return Some(Vec::new());
    }
    let s = f.degree();
    let mut xs: Vec<Poly> = Vec::with_capacity(s + 1);
    let mut cur = rem(f, &[f.zero(), f.one()], &p);
    xs.push(cur.clone());
    for _ in 0..s {
        cur = rem(f, &mul(f, &cur, &cur), &p);
        xs.push(cur.clone());
    }
    if xs[s] != xs[0] {
        return None;
    }
    xs.truncate(s);
    let mut roots = Vec::with_capacity(d);
    split(f, &p, &xs, 0, &mut roots)?;
    Some(roots)
}

fn split(f: &Field, q: &Poly, xs: &[Poly], first_basis: usize, out: &mut Vec<FieldElement>) -> Option<()> {
    let d = degree(q)?;
    if d == 1 {
        out.push(q[0].clone());
        return Some(());
    }
    let s = f.degree();
    for k in first_basis..s {
        let beta = f.from_bits(&crate::gf2::BitVector::unit(s, k)).ok()?;
        let mut tr: Poly = Vec::new();
        let mut bpow = beta;
        for x in xs {
            let xr = rem(f, x, q);
            if tr.len() < xr.len() {
                tr.resize(xr.len(), f.zero());
            }
            for (i, c) in xr.iter().enumerate() {
                tr[i] += f.mul(&bpow, c);
            }
            bpow = f.square(&bpow);
        }
        trim(&mut tr);
        let g = gcd(f, q, &tr);
        let dg = degree(&g).unwrap_or(0);
        if dg > 0 && dg < d {
            let (h, _) = divmod(f, q, &g);
            split(f, &g, xs, k + 1, out)?;
            split(f, &monic(f, &h), xs, k + 1, out)?;
            return Some(());
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::ff_make;

    #[test]
    fn roots_of_product_of_linears() {
        let f = ff_make(8).unwrap();
        let rs: Vec<FieldElement> = [3u64, 17, 200, 0, 255].iter().map(|&v| f.from_u64(v)).collect();
        let mut p: Poly = vec![f.one()];
        for r in &rs {
            p = mul(&f, &p, &[r.clone(), f.one()]);
        }
        let mut got: Vec<u64> = find_roots(&f, &p).unwrap().iter().map(|e| e.to_u64()).collect();
        got.sort_unstable();
        assert_eq!(got, vec![0, 3, 17, 200, 255]);
    }

    #[test]
    fn repeated_or_irreducible_factors_rejected() {
        let f = ff_make(4).unwrap();
        let a = f.from_u64(5);
        let sq = mul(&f, &[a.clone(), f.one()], &[a, f.one()]);
        assert!(find_roots(&f, &sq).is_none());
        // x^2 + x + β with Tr(β) = 1 has no roots in the field
        let irreducible = (1..16u64)
            .map(|v| vec![f.from_u64(v), f.one(), f.one()])
            .find(|p| (0..16u64).all(|x| !eval(&f, p, &f.from_u64(x)).is_zero()))
            .unwrap();
        assert!(find_roots(&f, &irreducible).is_none());
    }

    #[test]
    fn bm_recovers_lfsr() {
        let f = ff_make(5).unwrap();
        // power sums of two locators satisfy a degree-2 recurrence
        let (x1, x2) = (f.from_u64(7), f.from_u64(19));
        let s: Vec<FieldElement> = (1..=4).map(|j| &f.pow(&x1, j) + &f.pow(&x2, j)).collect();
        let (lambda, l) = berlekamp_massey(&f, &s);
        assert_eq!(l, 2);
        assert!(eval(&f, &lambda, &f.inv(&x1).unwrap()).is_zero());
        assert!(eval(&f, &lambda, &f.inv(&x2).unwrap()).is_zero());
    }
}
