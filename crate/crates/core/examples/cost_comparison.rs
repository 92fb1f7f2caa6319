//! Digest sizes of both schemes against sending every differing element.

use thl_recon::bounds::baseline_bits;
use thl_recon::params::ParamsSpec;
use thl_recon::recon1::digest1_estimate_bits;
use thl_recon::recont::digest_t_estimate_bits;

fn main() {
    println!("{:>4} {:>2} {:>2} {:>3} {:>8} {:>9} {:>9}", "n", "t", "h", "ell", "digest", "estimate", "baseline");
    for n in [63, 127, 255] {
        for (t, h, ell) in [(1, 2, 1), (1, 4, 1), (1, 4, 2), (2, 2, 1), (2, 4, 1), (3, 2, 1)] {
            let spec = ParamsSpec::with_default_index(n, t, h, ell);
            let Ok(p) = spec.build() else {
                println!("{n:>4} {t:>2} {h:>2} {ell:>3}   (no parameterization)");
                continue;
            };
            let est = if t == 1 {
                digest1_estimate_bits(n, h, ell)
            } else {
                digest_t_estimate_bits(n, t, h, ell)
            };
            println!(
                "{n:>4} {t:>2} {h:>2} {ell:>3} {:>8} {est:>9.0} {:>9}",
                p.digest_bits(),
                baseline_bits(n, t, h)
            );
        }
    }
}
