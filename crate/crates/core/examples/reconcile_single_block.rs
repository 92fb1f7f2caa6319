//! Two hosts whose sets differ by one cluster of nearby strings.
//!
//! The five-bit sets {00000, 10111} and {00000, 11001} are padded with
//! zeros to 31 bits so a code correcting three errors fits.

use std::collections::BTreeSet;

use thl_recon::gf2::BitVector;
use thl_recon::params::ParamsSpec;
use thl_recon::recon1::{decode1, digest1_cost_bits, encode1};

fn padded(bits: &str, n: usize) -> BitVector {
    let mut s = bits.to_string();
    s.extend(std::iter::repeat('0').take(n - bits.len()));
    BitVector::from_bit_str(&s).expect("binary string")
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = ParamsSpec::new(31, 1, 2, 3, vec![]).build()?;
    let a: BTreeSet<_> = ["00000", "10111"].iter().map(|s| padded(s, 31)).collect();
    let b: BTreeSet<_> = ["00000", "11001"].iter().map(|s| padded(s, 31)).collect();

    let da = encode1(&params, &a)?;
    let db = encode1(&params, &b)?;
    println!("digest size: {} bits per host", digest1_cost_bits(&params));

    for x in decode1(&params, &da, &db)? {
        println!("{}", &x.to_string()[..5]);
    }

    let big = ParamsSpec::new(127, 1, 4, 2, vec![]).build()?;
    let base: Vec<BitVector> = (0..1000u64)
        .map(|i| BitVector::from_words(127, vec![i.wrapping_mul(0x9e37_79b9_7f4a_7c15), i]))
        .collect();
    let center = BitVector::from_words(127, vec![u64::MAX, 42]);
    let mut near = center.clone();
    near.flip(3);
    near.flip(90);
    let mut a: BTreeSet<_> = base.iter().cloned().collect();
    let mut b = a.clone();
    a.insert(center);
    b.insert(near);
    let delta = decode1(&big, &encode1(&big, &a)?, &encode1(&big, &b)?)?;
    println!(
        "1001-element sets at n=127: recovered {} differing elements from {}-bit digests",
        delta.len(),
        digest1_cost_bits(&big)
    );
    Ok(())
}
