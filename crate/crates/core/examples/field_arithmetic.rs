//! Arithmetic in GF(2^m): products, inverses, Frobenius, and a small linear
//! solve over the field.

use thl_recon::gf2::{field_solve, Field};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f8 = Field::new(3)?;
    println!("GF(8) modulus: {}", f8.spec().modulus());
    let a = f8.from_u64(0b011);
    let b = f8.from_u64(0b101);
    println!("(x+1)(x^2+1) = {:03b}", f8.mul(&a, &b).to_u64());
    println!("(x+1)^-1     = {:03b}", f8.inv(&a)?.to_u64());

    let big = Field::new(233)?;
    let x = big.from_u64(0xdead_beef);
    let y = big.from_u64(0x1234_5678_9abc);
    let prod = big.mul(&x, &y);
    assert_eq!(big.div(&prod, &y)?, x);
    assert_eq!(big.frob(&x, 233), x);
    println!("GF(2^233): division undoes multiplication, Frobenius has order 233");

    let f = Field::new(16)?;
    let a = vec![
        vec![f.from_u64(3), f.from_u64(7)],
        vec![f.from_u64(11), f.from_u64(2)],
    ];
    let want = [f.from_u64(100), f.from_u64(200)];
    let y: Vec<_> = a
        .iter()
        .map(|row| f.add(&f.mul(&row[0], &want[0]), &f.mul(&row[1], &want[1])))
        .collect();
    let sol = field_solve(&f, &a, &y).expect("nonsingular");
    println!("solved 2x2 system over GF(2^16): {:?}", sol.iter().map(|e| e.to_u64()).collect::<Vec<_>>());
    Ok(())
}
