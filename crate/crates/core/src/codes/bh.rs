use crate::gf2::{BitVector, Field, FieldElement};

use super::CodeError;

/// A `B_s` sequence: every nonempty subset of at most `order` elements has a
/// nonzero sum.
///
/// Element `i` packs the column `(1, x, x³, …, x^(2k−1))` of an extended
/// binary BCH code, `x = element(i)` of GF(2^⌈lg m⌉), zero-padded into the
/// target field. With `2k + 1 ≥ order` any `order` columns are independent.
/// Elements are produced on demand since `m` can be in the millions.
#[derive(Clone, Debug)]
pub struct BhSequence {
    m: usize,
    order: usize,
    k: usize,
    small: Field,
    target: Field,
}

pub fn bh_width(m: usize, order: usize) -> usize {
    let k = ((order.saturating_sub(1)).div_ceil(2)).max(1);
    1 + k * locator_degree(m)
}

fn locator_degree(m: usize) -> usize {
    (m.max(2).next_power_of_two().trailing_zeros() as usize).max(1)
}

/// `B_order` sequence of length `m` inside `target`.
pub fn bh_sequence(m: usize, order: usize, target: &Field) -> Result<BhSequence, CodeError> {
    if m == 0 || order == 0 {
        return Err(CodeError::InvalidParameters("B_h sequence needs m >= 1 and h >= 1".into()));
    }
    let width = bh_width(m, order);
    if width > target.degree() {
        return Err(CodeError::WidthExceeded {
            width,
            degree: target.degree(),
        });
    }
    Ok(BhSequence {
        m,
        order,
        k: ((order.saturating_sub(1)).div_ceil(2)).max(1),
        small: Field::new(locator_degree(m))?,
        target: target.clone(),
    })
}

impl BhSequence {
    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn width(&self) -> usize {
        1 + self.k * self.small.degree()
    }

    pub fn target(&self) -> &Field {
        &self.target
    }

    /// Packed bits of element `i` (0-based).
    pub fn bits(&self, i: usize) -> BitVector {
        assert!(i < self.m, "index {i} out of range");
        let f = &self.small;
        let s = f.degree();
        let x = f.from_u64(i as u64);
        let x2 = f.square(&x);
        let mut out = BitVector::zeros(self.width());
        out.set(0, true);
        let mut p = x;
        for j in 0..self.k {
            out.write_at(1 + j * s, &p.to_bits());
            p = f.mul(&p, &x2);
        }
        out
    }

    pub fn get(&self, i: usize) -> FieldElement {
        self.target.from_bits(&self.bits(i)).expect("width checked at construction")
    }

    /// All elements; only sensible for small `m`.
    pub fn elems(&self) -> Vec<FieldElement> {
        (0..self.m).map(|i| self.get(i)).collect()
    }
}
