//! BER against sum rate at fixed Eb/N0 for K = 2 and K = 4.
//!
//!     cargo run --release --example rate_sweep -- 100

use mu_srldpc::sim::{SimConfig, Simulation};

fn main() -> mu_srldpc::Result<()> {
    let trials: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(50);
    for k_users in [2, 4] {
        let cfg = SimConfig {
            k_users,
            ebn0_db: vec![3.0],
            r_sum: vec![0.8, 0.84, 0.88, 0.92],
            max_trials: trials,
            min_bit_errors: u64::MAX,
            ..SimConfig::default()
        };
        for r in Simulation::new(cfg)?.sweep()? {
            println!(
                "K={k_users}  R_sum {:.3}  n {:5}  BER {:.3e}",
                r.r_sum(),
                r.point.channel_uses,
                r.metrics.ber()
            );
        }
    }
    Ok(())
}
