//! Syndrome decoding with a binary BCH code and a Reed–Solomon code.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thl_recon::codes::{bch_build, rs_code};
use thl_recon::gf2::{BitVector, Field};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let code = bch_build(127, 3)?;
    println!(
        "BCH length {} corrects {} errors with {} check bits",
        code.len(),
        code.design_errors(),
        code.redundancy()
    );
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut e = BitVector::zeros(127);
    while e.weight() < 3 {
        e.set(rng.gen_range(0..127), true);
    }
    let s = code.syndrome(&e)?;
    let found = code.decode_syndrome(&s)?;
    println!("error positions {:?} -> decoded {:?}", e.ones().collect::<Vec<_>>(), found.ones().collect::<Vec<_>>());

    let f = Field::new(8)?;
    let rs = rs_code(&f, 200, 7)?;
    let errors = [(5usize, f.from_u64(0x3c)), (77, f.from_u64(0x01)), (199, f.from_u64(0xfe))];
    let syn = rs.syndrome_sparse(errors.iter().map(|(p, v)| (*p, v)))?;
    let decoded = rs.decode(&syn)?;
    for (pos, val) in &decoded {
        println!("RS error at {pos}: {:#04x}", val.to_u64());
    }
    Ok(())
}
