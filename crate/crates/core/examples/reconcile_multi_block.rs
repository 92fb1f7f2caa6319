//! Several clusters at once. Elements of one cluster agree on the index
//! coordinates I and different clusters disagree there.

use thl_recon::oracle::{gen_instance, oracle_symdiff};
use thl_recon::params::{cond4_violation_prob, ParamsSpec};
use thl_recon::recont::{decode_t, digest_t_cost_bits, encode_t};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = ParamsSpec::with_default_index(127, 3, 2, 1);
    let params = spec.build()?;
    println!("I = {:?}, digest {} bits", spec.index_set, digest_t_cost_bits(&params));
    println!("chance random clusters break the index condition <= {:.3}", cond4_violation_prob(&spec));

    let mut exact = 0;
    for seed in 0..200 {
        let inst = gen_instance(&params, seed, 40)?;
        let delta = decode_t(&params, &encode_t(&params, &inst.a)?, &encode_t(&params, &inst.b)?)?;
        if delta == oracle_symdiff(&inst.a, &inst.b) {
            exact += 1;
        }
    }
    println!("{exact}/200 generated instances reconciled exactly");

    let inst = gen_instance(&params, 2024, 10)?;
    for (i, block) in inst.blocks.iter().enumerate() {
        println!("block {i}: {} elements", block.len());
    }
    Ok(())
}
