//! Brute-force references and the seeded instance generator.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::codes::BchCode;
use crate::gf2::{BitVector, FieldElement};
use crate::maps::map_f;
use crate::params::Params;

/// Largest difference the exhaustive partition search accepts.
pub const MAX_SEARCH: usize = 12;
const MAX_RETRIES: usize = 1000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("difference of {0} elements is too large for exhaustive search (max {MAX_SEARCH})")]
    TooLarge(usize),
    #[error("instance generation failed: {0}")]
    RetriesExhausted(String),
}

pub fn oracle_symdiff(a: &BTreeSet<BitVector>, b: &BTreeSet<BitVector>) -> BTreeSet<BitVector> {
    a.symmetric_difference(b).cloned().collect()
}

/// How the index set of the block-separation condition is treated.
#[derive(Clone, Copy, Debug)]
pub enum IndexSpec<'a> {
    /// Plain partition condition only.
    Ignore,
    /// Blocks must be exactly the classes of equal projection onto these
    /// 0-based coordinates.
    Given(&'a [usize]),
    /// Some index set must exist.
    Search,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThlWitness {
    pub blocks: Vec<Vec<BitVector>>,
    /// The index set used (0-based), when one was required.
    pub index: Option<Vec<usize>>,
}

fn block_ok(block: &[BitVector], h: usize, ell: usize) -> bool {
    block.len() <= h
        && block
            .iter()
            .enumerate()
            .all(|(i, a)| block[i + 1..].iter().all(|b| a.hamming(b).expect("equal lengths") <= ell))
}

/// Coordinates constant inside every block.
fn constant_coords(blocks: &[Vec<BitVector>]) -> Vec<usize> {
    let n = blocks.iter().flatten().next().map_or(0, BitVector::len);
    (0..n)
        .filter(|&c| blocks.iter().all(|b| b.iter().all(|x| x.get(c) == b[0].get(c))))
        .collect()
}

fn projections_distinct(blocks: &[Vec<BitVector>], index: &[usize]) -> bool {
    let p: BTreeSet<BitVector> = blocks.iter().map(|b| b[0].project(index)).collect();
    p.len() == blocks.len()
}

/// Whether `S^A △ S^B` splits into at most `t` blocks of at most `h`
/// elements, pairwise within distance `ell`, subject to `index`.
pub fn oracle_is_thl(
    a: &BTreeSet<BitVector>,
    b: &BTreeSet<BitVector>,
    t: usize,
    h: usize,
    ell: usize,
    index: IndexSpec<'_>,
) -> Result<Option<ThlWitness>, OracleError> {
    let delta: Vec<BitVector> = oracle_symdiff(a, b).into_iter().collect();
    if delta.is_empty() {
        return Ok(Some(ThlWitness {
            blocks: Vec::new(),
            index: match index {
                IndexSpec::Ignore => None,
                IndexSpec::Given(i) => Some(i.to_vec()),
                IndexSpec::Search => Some(Vec::new()),
            },
        }));
    }
    if let IndexSpec::Given(idx) = index {
        let mut groups: BTreeMap<BitVector, Vec<BitVector>> = BTreeMap::new();
        for x in &delta {
            groups.entry(x.project(idx)).or_default().push(x.clone());
        }
        let blocks: Vec<Vec<BitVector>> = groups.into_values().collect();
        let ok = blocks.len() <= t && blocks.iter().all(|b| block_ok(b, h, ell));
        return Ok(ok.then(|| ThlWitness {
            blocks,
            index: Some(idx.to_vec()),
        }));
    }
    if delta.len() > MAX_SEARCH {
        return Err(OracleError::TooLarge(delta.len()));
    }
    let search = matches!(index, IndexSpec::Search);
    let mut blocks: Vec<Vec<BitVector>> = Vec::new();
    let mut found = None;
    partition(&delta, 0, t, h, ell, search, &mut blocks, &mut found);
    Ok(found)
}

#[allow(clippy::too_many_arguments)]
fn partition(
    delta: &[BitVector],
    next: usize,
    t: usize,
    h: usize,
    ell: usize,
    search: bool,
    blocks: &mut Vec<Vec<BitVector>>,
    found: &mut Option<ThlWitness>,
) {
    if found.is_some() {
        return;
    }
    if next == delta.len() {
        if !search {
            *found = Some(ThlWitness {
                blocks: blocks.clone(),
                index: None,
            });
            return;
        }
        let idx = constant_coords(blocks);
        if projections_distinct(blocks, &idx) {
            *found = Some(ThlWitness {
                blocks: blocks.clone(),
                index: Some(idx),
            });
        }
        return;
    }
    let x = &delta[next];
    for bi in 0..blocks.len() {
        let fits = blocks[bi].len() < h
            && blocks[bi].iter().all(|y| x.hamming(y).expect("equal lengths") <= ell);
        if fits {
            blocks[bi].push(x.clone());
            partition(delta, next + 1, t, h, ell, search, blocks, found);
            blocks[bi].pop();
            if found.is_some() {
                return;
            }
        }
    }
    if blocks.len() < t {
        blocks.push(vec![x.clone()]);
        partition(delta, next + 1, t, h, ell, search, blocks, found);
        blocks.pop();
    }
}

/// Exhaustive bounded-distance decoding over all patterns of weight up to
/// `max_weight`; returns the first match in order of weight.
pub fn oracle_decode_bch(code: &BchCode, s: &BitVector, max_weight: usize) -> Option<BitVector> {
    let n = code.len();
    let cols: Vec<BitVector> = (0..n).map(|i| code.syndrome_column(i)).collect();
    fn rec(cols: &[BitVector], start: usize, left: usize, acc: &BitVector, target: &BitVector, picked: &mut Vec<usize>) -> bool {
        if acc == target {
            return true;
        }
        if left == 0 {
            return false;
        }
        for i in start..cols.len() {
            picked.push(i);
            if rec(cols, i + 1, left - 1, &acc.xor(&cols[i]).expect("width"), target, picked) {
                return true;
            }
            picked.pop();
        }
        false
    }
    for w in 0..=max_weight {
        let mut picked = Vec::new();
        if rec(&cols, 0, w, &BitVector::zeros(s.len()), s, &mut picked) && picked.len() == w {
            let mut e = BitVector::zeros(n);
            for p in picked {
                e.set(p, true);
            }
            return Some(e);
        }
    }
    None
}

/// Exhaustive decomposition of a tag sum over all subsets of at most `tmax`
/// I-projections.
pub fn oracle_f_decompose(params: &Params, zeta: &FieldElement, tmax: usize) -> Option<Vec<BitVector>> {
    let k = params.index().len();
    let all: Vec<(BitVector, FieldElement)> = (0..1u64 << k)
        .map(|v| {
            let x = BitVector::from_u64(k, v);
            let fx = map_f(params, &x).ok()?;
            Some((x, fx))
        })
        .collect::<Option<_>>()?;
    fn rec(
        all: &[(BitVector, FieldElement)],
        start: usize,
        left: usize,
        acc: &FieldElement,
        target: &FieldElement,
        picked: &mut Vec<usize>,
    ) -> bool {
        if !picked.is_empty() && acc == target {
            return true;
        }
        if left == 0 {
            return false;
        }
        for i in start..all.len() {
            picked.push(i);
            if rec(all, i + 1, left - 1, &(acc + &all[i].1), target, picked) {
                return true;
            }
            picked.pop();
        }
        false
    }
    let mut picked = Vec::new();
    let zero = zeta.clone() + zeta.clone();
    rec(&all, 0, tmax, &zero, zeta, &mut picked).then(|| picked.iter().map(|&i| all[i].0.clone()).collect())
}

/// A generated instance: the two host sets and their true difference.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub a: BTreeSet<BitVector>,
    pub b: BTreeSet<BitVector>,
    pub delta: BTreeSet<BitVector>,
    pub blocks: Vec<Vec<BitVector>>,
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> BitVector {
    BitVector::from_words(n, (0..n.div_ceil(64)).map(|_| rng.gen()).collect())
}

/// Random offset of weight `1..=max_w` avoiding the coordinates in `fixed`.
fn random_offset(rng: &mut ChaCha8Rng, n: usize, free: &[usize], max_w: usize) -> BitVector {
    let w = rng.gen_range(1..=max_w.min(free.len()));
    let mut e = BitVector::zeros(n);
    for &c in free.choose_multiple(rng, w) {
        e.set(c, true);
    }
    e
}

/// Seeded instance for `params`: up to `t` blocks with distinct
/// I-projections, each of up to `h` elements pairwise within `ell`, plus
/// `common` shared elements; every difference element goes to a random side.
pub fn gen_instance(params: &Params, seed: u64, common: usize) -> Result<Instance, OracleError> {
    let (n, t, h, ell) = (params.n(), params.t(), params.h(), params.ell());
    let index = params.index();
    let free: Vec<usize> = (0..n).filter(|c| index.binary_search(c).is_err()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nblocks = rng.gen_range(1..=t);
    let mut blocks: Vec<Vec<BitVector>> = Vec::with_capacity(nblocks);
    let mut projections = BTreeSet::new();
    for _ in 0..nblocks {
        let center = (0..MAX_RETRIES)
            .map(|_| random_vector(&mut rng, n))
            .find(|c| !projections.contains(&c.project(index)))
            .ok_or_else(|| OracleError::RetriesExhausted("distinct I-projections".into()))?;
        projections.insert(center.project(index));
        let size = rng.gen_range(1..=h);
        let mut block = vec![center.clone()];
        let mut tries = 0;
        while block.len() < size && tries < 64 {
            tries += 1;
            let radius = if ell >= 2 && rng.gen_bool(0.5) { ell / 2 } else { ell };
            let y = center.xor(&random_offset(&mut rng, n, &free, radius)).expect("n bits");
            if block.iter().all(|z| *z != y && z.hamming(&y).expect("n bits") <= ell) {
                block.push(y);
            }
        }
        blocks.push(block);
    }
    let delta: BTreeSet<BitVector> = blocks.iter().flatten().cloned().collect();
    let mut a = BTreeSet::new();
    let mut b = BTreeSet::new();
    for x in &delta {
        if rng.gen_bool(0.5) {
            a.insert(x.clone());
        } else {
            b.insert(x.clone());
        }
    }
    let mut shared = 0;
    let mut tries = 0;
    while shared < common {
        tries += 1;
        if tries > common * 10 + MAX_RETRIES {
            return Err(OracleError::RetriesExhausted("common elements".into()));
        }
        let x = random_vector(&mut rng, n);
        if delta.contains(&x) || a.contains(&x) {
            continue;
        }
        a.insert(x.clone());
        b.insert(x);
        shared += 1;
    }
    let witness = oracle_is_thl(&a, &b, t, h, ell, IndexSpec::Given(index))?;
    if witness.is_none() {
        return Err(OracleError::RetriesExhausted("generated pair failed validation".into()));
    }
    Ok(Instance { a, b, delta, blocks })
}
