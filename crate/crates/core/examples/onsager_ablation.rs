//! Symbol error rate with and without the Onsager correction.

use mu_srldpc::sim::{SimConfig, Simulation};

fn main() -> mu_srldpc::Result<()> {
    let trials: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(100);
    for onsager in [true, false] {
        let mut cfg = SimConfig {
            max_trials: trials,
            min_bit_errors: u64::MAX,
            ..SimConfig::default()
        };
        cfg.decoder.onsager = onsager;
        let sim = Simulation::new(cfg)?;
        let m = sim.run_point(sim.points()[0])?;
        println!(
            "onsager={onsager:5}  SER {:.3e}  BER {:.3e}  avg iters {:.1}",
            m.ser(),
            m.ber(),
            m.avg_amp_iterations()
        );
    }
    Ok(())
}
