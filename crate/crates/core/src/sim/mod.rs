//! Gaussian multiple-access channel, Monte Carlo trial engine and result
//! emission.

mod channel;
mod config;
mod metrics;
mod runner;

pub use channel::{ebn0_to_power, power_to_ebn0, transmit};
pub use config::{channel_uses_for_rate, sum_rate, SimConfig, CONFIG_KEYS};
pub use metrics::{binomial_ci, TrialMetrics};
pub use runner::{
    csv_string, run_point, save_csv, sweep, write_csv, OperatingPoint, Simulation, SweepRow,
    CSV_HEADER, SIGMA,
};
