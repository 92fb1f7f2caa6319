use crate::gf2::{Field, FieldElement};

use super::poly;
use super::CodeError;

/// Reed–Solomon code over GF(2^a) in syndrome form.
///
/// Position `i` has locator `X_i = element(i + 1)`; the syndromes of a word
/// `c` are `S_j = Σ c_i X_i^j` for `j = 1..d−1`.
#[derive(Clone, Debug)]
pub struct RsCode {
    field: Field,
    length: usize,
    d: usize,
}

impl RsCode {
    pub fn new(field: &Field, length: usize, d: usize) -> Result<RsCode, CodeError> {
        let max_len = if field.degree() >= usize::BITS as usize - 1 {
            usize::MAX
        } else {
            (1usize << field.degree()) - 1
        };
        if length == 0 || length > max_len {
            return Err(CodeError::InvalidParameters(format!(
                "RS length {length} outside 1..={max_len} for GF(2^{})",
                field.degree()
            )));
        }
        if d == 0 || d > length {
            return Err(CodeError::InvalidParameters(format!(
                "RS distance {d} outside 1..={length}"
            )));
        }
        Ok(RsCode {
            field: field.clone(),
            length,
            d,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.length
    }

    pub fn is_empty(&self) -> bool {
        self.length == 0
    }

    pub fn distance(&self) -> usize {
        self.d
    }

    /// Number of syndrome symbols.
    pub fn redundancy(&self) -> usize {
        self.d - 1
    }

    pub fn correctable(&self) -> usize {
        (self.d - 1) / 2
    }

    pub fn locator(&self, i: usize) -> FieldElement {
        self.field.from_u64(i as u64 + 1)
    }

    /// Syndromes of a word given by its nonzero `(position, value)` entries.
    pub fn syndrome_sparse<'a>(
        &self,
        entries: impl IntoIterator<Item = (usize, &'a FieldElement)>,
    ) -> Result<Vec<FieldElement>, CodeError> {
        let f = &self.field;
        let mut s = vec![f.zero(); self.redundancy()];
        for (i, v) in entries {
            if i >= self.length {
                return Err(CodeError::LengthMismatch {
                    expected: self.length,
                    got: i + 1,
                });
            }
            if !f.contains(v) {
                return Err(CodeError::Gf(crate::gf2::GfError::FieldMismatch {
                    left: f.degree(),
                    right: v.degree(),
                }));
            }
            let x = self.locator(i);
            let mut term = f.mul(v, &x);
            for sj in s.iter_mut() {
                *sj += &term;
                term = f.mul(&term, &x);
            }
        }
        Ok(s)
    }

    pub fn syndrome(&self, word: &[FieldElement]) -> Result<Vec<FieldElement>, CodeError> {
        if word.len() != self.length {
            return Err(CodeError::LengthMismatch {
                expected: self.length,
                got: word.len(),
            });
        }
        self.syndrome_sparse(word.iter().enumerate().filter(|(_, v)| !v.is_zero()))
    }

    /// Error positions and values (sorted by position) of the unique pattern
    /// with at most `⌊(d−1)/2⌋` nonzero symbols matching the syndromes.
    pub fn decode(&self, s: &[FieldElement]) -> Result<Vec<(usize, FieldElement)>, CodeError> {
        let f = &self.field;
        if s.len() != self.redundancy() {
            return Err(CodeError::LengthMismatch {
                expected: self.redundancy(),
                got: s.len(),
            });
        }
        if s.iter().all(FieldElement::is_zero) {
            return Ok(Vec::new());
        }
        let (lambda, l) = poly::berlekamp_massey(f, s);
        if l == 0 || l > self.correctable() || poly::degree(&lambda) != Some(l) {
            return Err(CodeError::Uncorrectable);
        }
        let roots = poly::find_roots(f, &lambda).ok_or(CodeError::Uncorrectable)?;
        if roots.len() != l {
            return Err(CodeError::Uncorrectable);
        }
        // Ω = S·Λ mod z^(d−1), S(z) = Σ S_j z^(j−1)
        let mut omega = poly::mul(f, s, &lambda);
        omega.truncate(self.redundancy());
        let dlambda = poly::derivative(f, &lambda);
        let mut out = Vec::with_capacity(l);
        for root in roots {
            if root.is_zero() {
                return Err(CodeError::Uncorrectable);
            }
            let x = f.inv(&root)?;
            let pos = usize::try_from(x.to_u64()).map_err(|_| CodeError::Uncorrectable)?;
            if pos == 0 || pos > self.length {
                return Err(CodeError::Uncorrectable);
            }
            let den = poly::eval(f, &dlambda, &root);
            if den.is_zero() {
                return Err(CodeError::Uncorrectable);
            }
            let val = f.div(&poly::eval(f, &omega, &root), &den)?;
            if val.is_zero() {
                return Err(CodeError::Uncorrectable);
            }
            out.push((pos - 1, val));
        }
        out.sort_by_key(|(p, _)| *p);
        if self.syndrome_sparse(out.iter().map(|(p, v)| (*p, v)))? != s {
            return Err(CodeError::Uncorrectable);
        }
        Ok(out)
    }
}
