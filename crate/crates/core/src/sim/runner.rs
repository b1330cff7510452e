use std::io::Write;
use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::channel::{ebn0_to_power, transmit};
use super::config::{channel_uses_for_rate, sum_rate, SimConfig};
use super::metrics::TrialMetrics;
use crate::amp::AmpBpDecoder;
use crate::encoder::SrLdpcEncoder;
use crate::error::{Error, Result};
use crate::gf::GfField;
use crate::nbldpc::{load_nbal, random_code, NbLdpcCode};
use crate::sensing::SensingOperator;
use crate::sparc::{amplitude, symbols_to_bits};

/// Column order of the results CSV.
pub const CSV_HEADER: &str = "ebn0_db,k_users,B,n,q,L,M,dv,r_sum,trials,bits_total,bit_errors,ber,ber_ci_lo,ber_ci_hi,ser,fer,avg_amp_iters,seed,wall_time_ms";

/// Noise standard deviation; power is solved from Eb/N0 against it.
pub const SIGMA: f64 = 1.0;

pub(crate) fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

fn mix(a: u64, b: u64) -> u64 {
    splitmix64(a ^ splitmix64(b))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatingPoint {
    pub ebn0_db: f64,
    pub channel_uses: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub point: OperatingPoint,
    pub k_users: usize,
    pub info_bits: usize,
    pub q: usize,
    pub code_len: usize,
    pub checks: usize,
    pub dv: usize,
    pub seed: u64,
    pub metrics: TrialMetrics,
}

impl SweepRow {
    pub fn r_sum(&self) -> f64 {
        sum_rate(self.info_bits, self.k_users, self.point.channel_uses)
    }

    pub fn to_csv_line(&self, record_timing: bool) -> String {
        let m = &self.metrics;
        let (lo, hi) = m.ber_ci();
        let wall = if record_timing { m.wall_time.as_millis() } else { 0 };
        format!(
            "{},{},{},{},{},{},{},{},{:.6},{},{},{},{:.6e},{:.6e},{:.6e},{:.6e},{:.6e},{:.3},{},{}",
            self.point.ebn0_db,
            self.k_users,
            self.info_bits,
            self.point.channel_uses,
            self.q,
            self.code_len,
            self.checks,
            self.dv,
            self.r_sum(),
            m.trials,
            m.bits_total,
            m.bit_errors,
            m.ber(),
            lo,
            hi,
            m.ser(),
            m.fer(),
            m.avg_amp_iterations(),
            self.seed,
            wall
        )
    }
}

/// A validated configuration together with its outer code.
#[derive(Debug, Clone)]
pub struct Simulation {
    config: SimConfig,
    code: NbLdpcCode,
}

impl Simulation {
    pub fn new(config: SimConfig) -> Result<Self> {
        config.validate()?;
        let field = GfField::new(config.p, config.poly).map_err(|e| Error::Config(e.to_string()))?;
        let code = match &config.code_file {
            Some(path) => load_nbal(path, Some(&field))?,
            None => random_code(&field, config.code_len, config.checks, config.dv, config.code_seed)
                .map_err(|e| Error::Config(e.to_string()))?,
        };
        if code.len() != config.code_len || code.num_checks() != config.checks {
            return Err(Error::Config(format!(
                "code is ({}, {}) but config asks for code_len={} checks={}",
                code.len(),
                code.dimension(),
                config.code_len,
                config.checks
            )));
        }
        Ok(Simulation { config, code })
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    pub fn code(&self) -> &NbLdpcCode {
        &self.code
    }

    /// Grid points in output order.
    pub fn points(&self) -> Vec<OperatingPoint> {
        let c = &self.config;
        let mut pts = Vec::new();
        for &ebn0_db in &c.ebn0_db {
            if c.r_sum.is_empty() {
                pts.push(OperatingPoint {
                    ebn0_db,
                    channel_uses: c.channel_uses,
                });
            } else {
                for &r in &c.r_sum {
                    pts.push(OperatingPoint {
                        ebn0_db,
                        channel_uses: channel_uses_for_rate(c.info_bits, c.k_users, r),
                    });
                }
            }
        }
        pts
    }

    fn operators(&self, point: OperatingPoint, trial_seed: u64) -> Result<Vec<SensingOperator>> {
        let c = &self.config;
        let cols = self.code.len() * self.code.field().q();
        (0..c.k_users as u64)
            .map(|k| {
                let seed = if c.fixed_dictionary {
                    mix(c.seed ^ 0xD1C7_0000_0000_0000, k)
                } else {
                    mix(trial_seed, 0x0A00 + k)
                };
                SensingOperator::new(c.operator, point.channel_uses, cols, seed)
            })
            .collect()
    }

    /// Runs a single independent trial. Randomness depends only on the
    /// master seed and the trial index.
    pub fn run_trial(&self, point: OperatingPoint, trial: u64) -> Result<TrialMetrics> {
        let start = Instant::now();
        let c = &self.config;
        let field = self.code.field();
        let trial_seed = mix(c.seed, trial);
        let mut msg_rng = ChaCha8Rng::seed_from_u64(trial_seed);
        msg_rng.set_stream(1);
        let mut noise_rng = ChaCha8Rng::seed_from_u64(trial_seed);
        noise_rng.set_stream(2);

        let power = ebn0_to_power(point.ebn0_db, c.info_bits, SIGMA);
        let d = amplitude(power, self.code.len())?;
        let ops = self.operators(point, trial_seed)?;

        let mut sent = Vec::with_capacity(c.k_users);
        for op in &ops {
            let bits: Vec<u8> = (0..c.info_bits).map(|_| msg_rng.gen_range(0..2u8)).collect();
            sent.push((bits.clone(), SrLdpcEncoder::new(&self.code, op, d)?.encode_bits(&bits)?));
        }
        let signals: Vec<Vec<f64>> = sent.iter().map(|(_, m)| m.signal.clone()).collect();
        let sigma = if c.noiseless { 0.0 } else { SIGMA };
        let y = transmit(&signals, sigma, &mut noise_rng)?;

        let decoder = AmpBpDecoder::new(&ops, vec![&self.code; c.k_users], d, c.decoder.clone())?;
        let outcome = decoder.decode(&y, None)?;

        let mut m = TrialMetrics {
            trials: 1,
            amp_iterations_sum: outcome.iterations as u64,
            ..Default::default()
        };
        for ((bits, msg), est) in sent.iter().zip(&outcome.users) {
            let decoded_bits = symbols_to_bits(&self.code.extract_info(&est.symbols), field);
            let errs = bits.iter().zip(&decoded_bits).filter(|(a, b)| a != b).count() as u64;
            let sym_errs = msg
                .codeword
                .iter()
                .zip(&est.symbols)
                .filter(|(a, b)| a != b)
                .count() as u64;
            m.bits_total += bits.len() as u64;
            m.bit_errors += errs;
            m.symbols_total += msg.codeword.len() as u64;
            m.symbol_errors += sym_errs;
            m.frames += 1;
            m.frame_errors += u64::from(errs > 0);
        }
        m.wall_time = start.elapsed();
        Ok(m)
    }

    /// Accumulates trials in fixed-size batches until the error target (and
    /// bit budget) is met or `max_trials` is reached. Batches are evaluated
    /// on the current rayon pool; the stopping decision depends only on
    /// completed batches, so results do not depend on the worker count.
    pub fn run_point(&self, point: OperatingPoint) -> Result<TrialMetrics> {
        let c = &self.config;
        let mut total = TrialMetrics::default();
        let mut next = 0u64;
        while next < c.max_trials {
            let end = (next + c.batch_trials).min(c.max_trials);
            let batch: Vec<TrialMetrics> = (next..end)
                .into_par_iter()
                .map(|t| self.run_trial(point, t))
                .collect::<Result<_>>()?;
            for m in &batch {
                total += m;
            }
            next = end;
            if total.bit_errors >= c.min_bit_errors && total.bits_total >= c.min_bits {
                break;
            }
        }
        log::info!(
            "Eb/N0 {:.2} dB n={}: {} trials, BER {:.3e}",
            point.ebn0_db,
            point.channel_uses,
            total.trials,
            total.ber()
        );
        Ok(total)
    }

    pub fn row(&self, point: OperatingPoint, metrics: TrialMetrics) -> SweepRow {
        let c = &self.config;
        SweepRow {
            point,
            k_users: c.k_users,
            info_bits: c.info_bits,
            q: c.q(),
            code_len: c.code_len,
            checks: c.checks,
            dv: c.dv,
            seed: c.seed,
            metrics,
        }
    }

    pub fn sweep(&self) -> Result<Vec<SweepRow>> {
        self.points()
            .into_iter()
            .map(|pt| Ok(self.row(pt, self.run_point(pt)?)))
            .collect()
    }
}

/// Runs one Eb/N0 point at the configured blocklength.
pub fn run_point(config: &SimConfig, ebn0_db: f64) -> Result<TrialMetrics> {
    let sim = Simulation::new(config.clone())?;
    sim.run_point(OperatingPoint {
        ebn0_db,
        channel_uses: config.channel_uses,
    })
}

/// Runs every grid point of the configuration.
pub fn sweep(config: &SimConfig) -> Result<Vec<SweepRow>> {
    Simulation::new(config.clone())?.sweep()
}

pub fn write_csv<W: Write>(rows: &[SweepRow], mut w: W, record_timing: bool) -> std::io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(w, "{}", r.to_csv_line(record_timing))?;
    }
    Ok(())
}

pub fn csv_string(rows: &[SweepRow], record_timing: bool) -> String {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf, record_timing).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("CSV is ASCII")
}

pub fn save_csv(rows: &[SweepRow], path: impl AsRef<Path>, record_timing: bool) -> Result<()> {
    let path = path.as_ref();
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = std::io::BufWriter::new(file);
    write_csv(rows, &mut w, record_timing).map_err(|e| Error::io(path, e))?;
    w.flush().map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config() -> SimConfig {
        let mut c = SimConfig::default();
        c.p = 4;
        c.poly = 0x13;
        c.code_len = 32;
        c.checks = 4;
        c.info_bits = 4 * 28;
        c.channel_uses = 200;
        c.max_trials = 4;
        c.batch_trials = 2;
        c
    }

    #[test]
    fn noiseless_has_no_errors() {
        let mut c = small_config();
        c.noiseless = true;
        c.ebn0_db = vec![6.0];
        let m = run_point(&c, 6.0).unwrap();
        assert_eq!(m.trials, 4);
        assert_eq!(m.bit_errors, 0);
        assert_eq!(m.ber(), 0.0);
    }

    #[test]
    fn single_point_single_row() {
        let mut c = small_config();
        c.ebn0_db = vec![4.0];
        let rows = sweep(&c).unwrap();
        assert_eq!(rows.len(), 1);
        let csv = csv_string(&rows, false);
        assert_eq!(csv.lines().count(), 2);
        assert_eq!(csv.lines().next().unwrap(), CSV_HEADER);
        assert_eq!(csv.lines().nth(1).unwrap().split(',').count(), 20);
    }

    #[test]
    fn rate_sweep_points() {
        let mut c = SimConfig::default();
        c.ebn0_db = vec![3.0];
        c.r_sum = vec![0.84, 0.92];
        let sim = Simulation::new(c).unwrap();
        let n: Vec<usize> = sim.points().iter().map(|p| p.channel_uses).collect();
        assert_eq!(n, vec![1392, 1270]);
    }

    #[test]
    fn stopping_rule_respects_errors() {
        let mut c = small_config();
        c.ebn0_db = vec![-2.0];
        c.min_bit_errors = 1;
        c.max_trials = 100;
        let m = run_point(&c, -2.0).unwrap();
        // Deep below threshold the first batch already has errors.
        assert_eq!(m.trials, 2);
        assert!(m.bit_errors >= 1);
    }

    #[test]
    fn trials_reproducible() {
        let c = small_config();
        let sim = Simulation::new(c).unwrap();
        let pt = sim.points()[0];
        let mut a = sim.run_trial(pt, 3).unwrap();
        let mut b = sim.run_trial(pt, 3).unwrap();
        a.wall_time = Default::default();
        b.wall_time = Default::default();
        assert_eq!(a, b);
    }
}
