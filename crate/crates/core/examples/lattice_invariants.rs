// Canonical lattices, relative position invariants and colengths.

use rz_lattice::coeff::{make_ring, RingParams};
use rz_lattice::lattice::{colength, intersect, inv, sum, Lattice};

fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let r = make_ring(RingParams::new(2, 2, 6), 0)?;
    let l0 = Lattice::standard(&r, 4);
    let a = Lattice::diagonal(&r, &[1, 0, -1, -1])?;
    let b = Lattice::diagonal(&r, &[0, 0, 0, -1])?;

    println!("inv(A, L0) = {}", inv(&r, &a, &l0)?);
    println!("inv(B, L0) = {}", inv(&r, &b, &l0)?);

    let s = sum(&r, &a, &b)?;
    let i = intersect(&r, &a, &b)?;
    println!("[A + B : A ∩ B] = {}", colength(&r, &i, &s)?);
    println!("A + B = {}", s.to_json(&r));
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
