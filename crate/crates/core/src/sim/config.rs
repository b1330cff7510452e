//! Simulation configuration and its flat `key = value` file format.

use std::path::{Path, PathBuf};

use crate::amp::DecoderParams;
use crate::error::{Error, Result};
use crate::gf::DEFAULT_POLY_256;
use crate::sensing::OperatorKind;

/// Description of a Monte Carlo experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub k_users: usize,
    /// Information bits per user; must equal `p * (code_len - checks)`.
    pub info_bits: usize,
    pub p: u32,
    pub code_len: usize,
    pub checks: usize,
    /// Channel uses `n` for Eb/N0 sweeps.
    pub channel_uses: usize,
    pub dv: usize,
    pub poly: u32,
    pub code_seed: u64,
    /// Load the outer code from an nbal file instead of generating it.
    pub code_file: Option<PathBuf>,
    pub ebn0_db: Vec<f64>,
    /// Non-empty switches to a sum-rate sweep: `n` is derived per point.
    pub r_sum: Vec<f64>,
    pub min_bit_errors: u64,
    pub min_bits: u64,
    pub max_trials: u64,
    pub batch_trials: u64,
    pub seed: u64,
    pub operator: OperatorKind,
    pub fixed_dictionary: bool,
    pub noiseless: bool,
    pub decoder: DecoderParams,
    pub record_timing: bool,
    pub out: Option<PathBuf>,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            k_users: 2,
            info_bits: 584,
            p: 8,
            code_len: 76,
            checks: 3,
            channel_uses: 1460,
            dv: 2,
            poly: DEFAULT_POLY_256,
            code_seed: 1,
            code_file: None,
            ebn0_db: vec![3.0],
            r_sum: Vec::new(),
            min_bit_errors: 200,
            min_bits: 0,
            max_trials: 1000,
            batch_trials: 16,
            seed: 0,
            operator: OperatorKind::Hadamard,
            fixed_dictionary: false,
            noiseless: false,
            decoder: DecoderParams::default(),
            record_timing: true,
            out: None,
        }
    }
}

/// Every key accepted in config files and `--override`.
pub const CONFIG_KEYS: &[&str] = &[
    "k_users",
    "info_bits",
    "p",
    "code_len",
    "checks",
    "channel_uses",
    "dv",
    "poly",
    "code_seed",
    "code_file",
    "ebn0_db",
    "r_sum",
    "min_bit_errors",
    "min_bits",
    "max_trials",
    "batch_trials",
    "seed",
    "operator",
    "fixed_dictionary",
    "noiseless",
    "max_iterations",
    "bp_rounds",
    "early_stop",
    "tau_floor",
    "damping",
    "onsager",
    "record_timing",
    "out",
];

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| Error::Config(format!("{key}: cannot parse `{value}`: {e}")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" | "1" | "yes" | "on" => Ok(true),
        "false" | "0" | "no" | "off" => Ok(false),
        _ => Err(Error::Config(format!("{key}: expected a boolean, got `{value}`"))),
    }
}

fn parse_list(key: &str, value: &str) -> Result<Vec<f64>> {
    if value.trim().is_empty() {
        return Ok(Vec::new());
    }
    value.split(',').map(|t| parse(key, t.trim())).collect()
}

fn parse_u32_maybe_hex(key: &str, value: &str) -> Result<u32> {
    match value.strip_prefix("0x").or_else(|| value.strip_prefix("0X")) {
        Some(hex) => u32::from_str_radix(hex, 16)
            .map_err(|e| Error::Config(format!("{key}: cannot parse `{value}`: {e}"))),
        None => parse(key, value),
    }
}

impl SimConfig {
    /// Sets one field from its textual form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key {
            "k_users" => self.k_users = parse(key, value)?,
            "info_bits" => self.info_bits = parse(key, value)?,
            "p" => self.p = parse(key, value)?,
            "code_len" => self.code_len = parse(key, value)?,
            "checks" => self.checks = parse(key, value)?,
            "channel_uses" => self.channel_uses = parse(key, value)?,
            "dv" => self.dv = parse(key, value)?,
            "poly" => self.poly = parse_u32_maybe_hex(key, value)?,
            "code_seed" => self.code_seed = parse(key, value)?,
            "code_file" => {
                self.code_file = (!value.is_empty()).then(|| PathBuf::from(value));
            }
            "ebn0_db" => self.ebn0_db = parse_list(key, value)?,
            "r_sum" => self.r_sum = parse_list(key, value)?,
            "min_bit_errors" => self.min_bit_errors = parse(key, value)?,
            "min_bits" => self.min_bits = parse(key, value)?,
            "max_trials" => self.max_trials = parse(key, value)?,
            "batch_trials" => self.batch_trials = parse(key, value)?,
            "seed" => self.seed = parse(key, value)?,
            "operator" => self.operator = value.parse()?,
            "fixed_dictionary" => self.fixed_dictionary = parse_bool(key, value)?,
            "noiseless" => self.noiseless = parse_bool(key, value)?,
            "max_iterations" => self.decoder.max_iterations = parse(key, value)?,
            "bp_rounds" => self.decoder.bp_rounds = parse(key, value)?,
            "early_stop" => self.decoder.early_stop = parse_bool(key, value)?,
            "tau_floor" => self.decoder.tau_floor = parse(key, value)?,
            "damping" => self.decoder.damping = parse(key, value)?,
            "onsager" => self.decoder.onsager = parse_bool(key, value)?,
            "record_timing" => self.record_timing = parse_bool(key, value)?,
            "out" => self.out = (!value.is_empty()).then(|| PathBuf::from(value)),
            other => return Err(Error::Config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    /// Applies a `key=value` override.
    pub fn apply_override(&mut self, assignment: &str) -> Result<()> {
        let (k, v) = assignment
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("override `{assignment}` is not key=value")))?;
        self.set(k.trim(), v)
    }

    /// Parses a config document on top of the defaults. Blank lines and
    /// `#` comments are ignored.
    pub fn parse_str(text: &str) -> Result<Self> {
        let mut cfg = SimConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: i + 1,
                msg: format!("expected key=value, got `{line}`"),
            })?;
            cfg.set(k.trim(), v).map_err(|e| Error::Parse {
                line: i + 1,
                msg: e.to_string(),
            })?;
        }
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse_str(&text)
    }

    /// Serializes every field in file form.
    pub fn to_config_string(&self) -> String {
        let list = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        let path = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string()).unwrap_or_default();
        let d = &self.decoder;
        format!(
            "k_users = {}\ninfo_bits = {}\np = {}\ncode_len = {}\nchecks = {}\nchannel_uses = {}\n\
             dv = {}\npoly = {:#x}\ncode_seed = {}\ncode_file = {}\nebn0_db = {}\nr_sum = {}\n\
             min_bit_errors = {}\nmin_bits = {}\nmax_trials = {}\nbatch_trials = {}\nseed = {}\n\
             operator = {}\nfixed_dictionary = {}\nnoiseless = {}\nmax_iterations = {}\n\
             bp_rounds = {}\nearly_stop = {}\ntau_floor = {}\ndamping = {}\nonsager = {}\n\
             record_timing = {}\nout = {}\n",
            self.k_users,
            self.info_bits,
            self.p,
            self.code_len,
            self.checks,
            self.channel_uses,
            self.dv,
            self.poly,
            self.code_seed,
            path(&self.code_file),
            list(&self.ebn0_db),
            list(&self.r_sum),
            self.min_bit_errors,
            self.min_bits,
            self.max_trials,
            self.batch_trials,
            self.seed,
            self.operator,
            self.fixed_dictionary,
            self.noiseless,
            d.max_iterations,
            d.bp_rounds,
            d.early_stop,
            d.tau_floor,
            d.damping,
            d.onsager,
            self.record_timing,
            path(&self.out),
        )
    }

    pub fn q(&self) -> usize {
        1 << self.p
    }

    /// Sum rate `B K / n` at the configured blocklength.
    pub fn sum_rate(&self) -> f64 {
        sum_rate(self.info_bits, self.k_users, self.channel_uses)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.k_users == 0 {
            return bad("k_users must be >= 1".into());
        }
        if self.checks >= self.code_len {
            return bad(format!("checks {} must be < code_len {}", self.checks, self.code_len));
        }
        if self.info_bits != self.p as usize * (self.code_len - self.checks) {
            return bad(format!(
                "info_bits {} != p * (code_len - checks) = {}",
                self.info_bits,
                self.p as usize * (self.code_len - self.checks)
            ));
        }
        if self.channel_uses == 0 {
            return bad("channel_uses must be >= 1".into());
        }
        if self.ebn0_db.is_empty() {
            return bad("ebn0_db grid is empty".into());
        }
        if self.r_sum.iter().any(|&r| !(r > 0.0)) {
            return bad("r_sum entries must be positive".into());
        }
        if self.max_trials == 0 || self.batch_trials == 0 {
            return bad("max_trials and batch_trials must be >= 1".into());
        }
        self.decoder
            .validate()
            .map_err(|e| Error::Config(e.to_string()))
    }
}

pub fn sum_rate(info_bits: usize, k_users: usize, channel_uses: usize) -> f64 {
    (info_bits * k_users) as f64 / channel_uses as f64
}

/// Smallest even blocklength achieving at most the target sum rate.
pub fn channel_uses_for_rate(info_bits: usize, k_users: usize, r_sum: f64) -> usize {
    let exact = (info_bits * k_users) as f64 / r_sum;
    let n = (exact - 1e-9).ceil() as usize;
    n + (n % 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_consistent() {
        let cfg = SimConfig::default();
        cfg.validate().unwrap();
        assert!((cfg.sum_rate() - 0.8).abs() < 1e-12);
    }

    #[test]
    fn round_trip_text() {
        let mut cfg = SimConfig::default();
        cfg.ebn0_db = vec![2.25, 2.5, 3.0];
        cfg.r_sum = vec![0.84];
        cfg.out = Some("x.csv".into());
        cfg.decoder.bp_rounds = 2;
        let back = SimConfig::parse_str(&cfg.to_config_string()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn unknown_key_is_error() {
        assert!(SimConfig::parse_str("bogus = 3").unwrap_err().is_config());
        assert!(SimConfig::parse_str("k_users").is_err());
        let mut cfg = SimConfig::default();
        assert!(cfg.apply_override("k_users=4").is_ok());
        assert_eq!(cfg.k_users, 4);
        assert!(cfg.apply_override("nope=1").is_err());
        assert!(cfg.apply_override("k_users").is_err());
    }

    #[test]
    fn inconsistent_bits_rejected() {
        let mut cfg = SimConfig::default();
        cfg.info_bits = 580;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn comments_and_hex() {
        let cfg = SimConfig::parse_str("# header\npoly = 0x11d  # alt poly\n\nseed=9").unwrap();
        assert_eq!(cfg.poly, 0x11D);
        assert_eq!(cfg.seed, 9);
    }

    #[test]
    fn rate_to_blocklength() {
        assert_eq!(channel_uses_for_rate(584, 2, 0.84), 1392);
        assert_eq!(channel_uses_for_rate(584, 2, 0.92), 1270);
        assert_eq!(channel_uses_for_rate(584, 4, 0.92), 2540);
        assert_eq!(channel_uses_for_rate(584, 2, 0.8), 1460);
    }
}
