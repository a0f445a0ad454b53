//! Mean MISE as a function of the finest Meyer level, with common random numbers
//! across levels.
//!
//! cargo run --release --example j_search

use deconwave::estimator::EstimatorConfig;
use deconwave::experiment::{default_j_set, oracle_j_search, ExperimentSpec, JMode};
use deconwave::signals::TestSignal;

fn main() -> deconwave::Result<()> {
    let cfg = EstimatorConfig::default();
    for (f_t, snr1_db) in [(TestSignal::HeaviSine, 30.0), (TestSignal::Doppler, 30.0)] {
        let spec = ExperimentSpec {
            f_t,
            rows: 128,
            cols: 512,
            snr1_db,
            n_rep: 10,
            j_mode: JMode::OracleSearch,
            ..Default::default()
        };
        let search = oracle_j_search(&spec, &cfg, &default_j_set(&spec, &cfg))?;
        println!("{f_t} at {snr1_db} dB:");
        for p in &search.curve {
            let mark = if p.j == search.best_j { " <- best" } else { "" };
            println!(
                "  J = {}: {:.4e} (sd {:.1e}){mark}",
                p.j, p.mean_mise, p.sd_mise
            );
        }
    }
    Ok(())
}
