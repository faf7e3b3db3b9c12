// Point counts of the flag varieties over growing residue fields.

use rz_lattice::cli::census_csv;
use rz_lattice::moduli::{Model, ModelParams};
use rz_lattice::verify::{Session, SuiteOptions};

fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let model = Model::new(ModelParams::new(2, 4, 1))?;
    let session = Session::new(model, SuiteOptions::default());
    let rows = session.census()?;
    let csv = census_csv(&session.model().header(), &rows)?;
    print!("{}", String::from_utf8(csv)?);
    assert!(rows.iter().all(|r| r.matches != Some(false)));
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
