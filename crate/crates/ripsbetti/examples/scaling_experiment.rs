//! Growth-rate harness: generate a construction family across sizes, compute
//! the target Betti number, and fit the log-log slope.

use ripsbetti::bounds::{scaling_experiment, write_records_csv, ExperimentConfig, Family};
use ripsbetti::homology::FieldSpec;

fn main() -> ripsbetti::Result<()> {
    let runs = [
        (Family::S2km1, vec![8usize, 12, 16, 20], 1usize),
        (Family::S2, vec![12, 27, 48], 2),
        (Family::QuasiRipsRs, vec![4, 8, 12], 2),
    ];
    for (family, sizes, p) in runs {
        let config = ExperimentConfig {
            family,
            sizes,
            p,
            field: FieldSpec::default(),
            seed: 0,
            k: 1,
            jobs: 1,
        };
        let (records, summary) = scaling_experiment(&config)?;
        let mut csv = Vec::new();
        write_records_csv(&records, false, &mut csv)?;
        print!("{}", String::from_utf8_lossy(&csv));
        match summary.exponent {
            Some(slope) => println!("# {}: fitted exponent {slope:.3}\n", summary.family),
            None => println!("# {}: too few points for a fit\n", summary.family),
        }
    }
    Ok(())
}
