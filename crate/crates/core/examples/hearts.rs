// Scalar-self-dual hearts and the points they cover.

use rz_lattice::moduli::{enumerate_dl_heart, enumerate_rz, heart_of, hearts, is_heart_point, stratum_of, Model, ModelParams};

fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let model = Model::new(ModelParams::new(2, 4, 1))?;
    let hs = hearts(&model)?;
    println!("{} hearts", hs.len());

    let points = enumerate_rz(&model)?;
    let first = &hs[0];
    let (mut under, mut attached) = (0, 0);
    for l in &points {
        if is_heart_point(&model, l, first)? {
            under += 1;
        }
        if stratum_of(&model, l)? == 2 && heart_of(&model, l)? == *first {
            attached += 1;
        }
    }
    let flags = enumerate_dl_heart(&model, first)?;
    println!("first heart: {under} points below it, {attached} attached to it, {} flags", flags.len());
    assert_eq!(under, flags.len());
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
