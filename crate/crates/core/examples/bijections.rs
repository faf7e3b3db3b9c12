// Follows one lattice through the maps to `(M0, N0)`, the flag and the
// isotropic complement, and rebuilds it from the complement.

use rz_lattice::moduli::{
    complement_from_triple, dl_flag_from_y, enumerate_dl, enumerate_rz, enumerate_y, fiber_data, lattice_from_complement,
    mn_from_l, stratum_of, Model, ModelParams, TriplePoint,
};

fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let model = Model::new(ModelParams::new(2, 2, 1))?;
    let points = enumerate_rz(&model)?;
    println!("RZ: {}, Y: {}, DL: {}", points.len(), enumerate_y(&model, 1)?.len(), enumerate_dl(&model, 1)?.len());

    for l in &points {
        let k = stratum_of(&model, l)?;
        let y = mn_from_l(&model, l)?;
        let flag = dl_flag_from_y(&model, &y)?;
        let fiber = fiber_data(&model, &y)?;
        let t = TriplePoint::from_rz(&model, l)?;
        let fs = complement_from_triple(&model, &t, &fiber)?;
        let back = lattice_from_complement(&model, &y, &fiber, &fs)?;
        assert_eq!(&back, l);
        println!("k={k} flag={} L0={}", flag.to_json(&model), model.lattice_json(l));
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
