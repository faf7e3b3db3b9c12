// Arithmetic in the truncated Witt ring `W_6(F_9)` and its Frobenius lift.

use rz_lattice::coeff::{make_ring, RingParams};

fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let r = make_ring(RingParams::new(3, 2, 6), 0)?;
    println!("R = (Z/3^6)[x]/(F), F = {:?}", r.f_coeffs());

    let x = r.gen();
    let s = r.frobenius_table().sigma_of_x;
    println!("sigma(x) = {}", r.elem_json(s));
    assert_eq!(r.frobenius(s, 1), x);

    let a = r.add(r.from_int(3), x);
    let b = r.invert(a)?;
    assert_eq!(r.mul(a, b), r.one());
    println!("(3 + x)^-1 = {}", r.elem_json(b));

    let p2 = r.from_int(9);
    println!("v(9) = {:?}, v(0) = {:?}", r.valuation(p2), r.valuation(r.zero()));
    println!("residue of x: {}", r.residue(x));
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
