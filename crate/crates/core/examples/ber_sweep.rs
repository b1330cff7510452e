//! BER against Eb/N0 for two users at 1460 channel uses.
//!
//!     cargo run --release --example ber_sweep -- 200

use mu_srldpc::sim::{csv_string, SimConfig, Simulation};

fn main() -> mu_srldpc::Result<()> {
    let trials: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(100);
    let cfg = SimConfig {
        ebn0_db: vec![2.0, 2.25, 2.5, 2.75, 3.0],
        max_trials: trials,
        min_bit_errors: u64::MAX,
        record_timing: false,
        ..SimConfig::default()
    };
    let rows = Simulation::new(cfg)?.sweep()?;
    for r in &rows {
        let (lo, hi) = r.metrics.ber_ci();
        println!(
            "{:.2} dB  BER {:.3e}  [{:.2e}, {:.2e}]  avg iters {:.1}",
            r.point.ebn0_db,
            r.metrics.ber(),
            lo,
            hi,
            r.metrics.avg_amp_iterations()
        );
    }
    print!("\n{}", csv_string(&rows, false));
    Ok(())
}
