//! Monte-Carlo MISE of one simulation cell across data SNRs.
//!
//! cargo run --release --example benchmark_cell -- [reps]

use deconwave::estimator::EstimatorConfig;
use deconwave::experiment::{run_benchmark, ExperimentSpec, JMode};
use deconwave::signals::TestSignal;

fn main() -> deconwave::Result<()> {
    let reps = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(20);
    let cfg = EstimatorConfig::default();
    println!("snr1_db  mode    J  J'  mean_mise   sd_mise");
    for snr1_db in [10.0, 20.0, 30.0] {
        for j_mode in [JMode::Auto, JMode::OracleSearch] {
            let spec = ExperimentSpec {
                f_t: TestSignal::HeaviSine,
                f_u: TestSignal::Quadratic,
                rows: 128,
                cols: 512,
                snr1_db,
                n_rep: reps,
                j_mode,
                ..Default::default()
            };
            let r = run_benchmark(&spec, &cfg)?;
            let mode = if j_mode == JMode::Auto {
                "auto"
            } else {
                "oracle"
            };
            println!(
                "{snr1_db:7.0}  {mode:6} {:2} {:3}  {:.3e}  {:.1e}",
                r.chosen_j, r.chosen_jprime, r.mean_mise, r.sd_mise
            );
        }
    }
    Ok(())
}
