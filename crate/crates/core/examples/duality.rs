// Random checks of the duality identities and the pairing axioms.

use rz_lattice::moduli::{Model, ModelParams};
use rz_lattice::verify::{run_suite, SuiteOptions};

fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let model = Model::new(ModelParams::new(3, 3, 1))?;
    let opts = SuiteOptions { samples: 50, ..SuiteOptions::default() };
    for suite in ["duality", "pairing"] {
        for report in run_suite(model.clone(), suite, opts.clone())? {
            assert!(report.passed(), "{suite} failed: {:?}", report.counterexample);
            println!("{}", serde_json::to_string(&report.without_timing())?);
        }
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
