// Enumerates the lattice points at `n = 4`, `p = 2` and sorts them by stratum.

use std::collections::BTreeMap;

use rz_lattice::moduli::{enumerate_rz, stratum_of, xmu_label, Flavor, Model, ModelParams};

fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let model = Model::new(ModelParams::new(2, 4, 1))?;
    let points = enumerate_rz(&model)?;
    let mut by_k: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    for l in &points {
        let k = stratum_of(&model, l)?;
        let label = xmu_label(&model, l)?;
        let e = by_k.entry(k).or_default();
        e.0 += 1;
        if matches!(label.flavor, Flavor::Heart(_)) {
            e.1 += 1;
        }
    }
    println!("{} points", points.len());
    for (k, (count, heart)) in by_k {
        println!("k = {k}: {count} points, {heart} attached to a heart");
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
