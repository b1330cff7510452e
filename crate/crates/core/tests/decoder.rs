use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mu_srldpc::amp::{AmpBpDecoder, DecoderParams};
use mu_srldpc::encoder::SrLdpcEncoder;
use mu_srldpc::gf::{GfField, GfSymbol};
use mu_srldpc::nbldpc::random_code;
use mu_srldpc::sensing::{OperatorKind, SensingOperator};
use mu_srldpc::sim::{transmit, SimConfig, Simulation};

fn random_info(rng: &mut ChaCha8Rng, len: usize, q: usize) -> Vec<GfSymbol> {
    (0..len).map(|_| GfSymbol::new(rng.gen_range(0..q as u16))).collect()
}

#[test]
fn noiseless_square_gaussian_recovers_in_ten_iterations() {
    let field = GfField::with_degree(4).unwrap();
    let code = random_code(&field, 16, 4, 2, 21).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..20 {
        let op = SensingOperator::gaussian(256, 256, rng.gen()).unwrap();
        let msg = SrLdpcEncoder::new(&code, &op, 2.0)
            .unwrap()
            .encode_symbols(random_info(&mut rng, code.dimension(), 16))
            .unwrap();
        let ops = [op];
        let dec = AmpBpDecoder::new(&ops, vec![&code], 2.0, DecoderParams::default()).unwrap();
        let truth = [msg.codeword.clone()];
        let out = dec.decode(&msg.signal, Some(&truth)).unwrap();
        assert!(out.converged);
        assert!(out.iterations <= 10);
        assert_eq!(out.users[0].symbols, msg.codeword);
        assert!(out.users[0].valid_codeword);
        assert_eq!(out.trace.last().unwrap().section_errors, Some(vec![0]));
    }
}

#[test]
fn hadamard_noiseless_two_users() {
    let cfg = SimConfig {
        noiseless: true,
        max_trials: 8,
        min_bit_errors: 1,
        ..SimConfig::default()
    };
    let sim = Simulation::new(cfg).unwrap();
    let m = sim.run_point(sim.points()[0]).unwrap();
    assert_eq!(m.trials, 8);
    assert_eq!(m.bit_errors, 0);
    assert_eq!(m.frame_errors, 0);
}

#[test]
fn gaussian_operator_and_fixed_dictionary_run() {
    let base = SimConfig {
        k_users: 2,
        p: 4,
        poly: 0x13,
        code_len: 32,
        checks: 4,
        info_bits: 112,
        channel_uses: 256,
        ebn0_db: vec![8.0],
        operator: OperatorKind::Gaussian,
        max_trials: 16,
        min_bit_errors: 1_000_000,
        ..SimConfig::default()
    };
    for fixed in [false, true] {
        let sim = Simulation::new(SimConfig {
            fixed_dictionary: fixed,
            ..base.clone()
        })
        .unwrap();
        let m = sim.run_point(sim.points()[0]).unwrap();
        assert_eq!(m.bits_total, 16 * 2 * 112);
        assert!(m.ber() < 0.01, "fixed={fixed}: BER {}", m.ber());
    }
}

#[test]
fn iteration_trace_matches_iterations() {
    let field = GfField::with_degree(4).unwrap();
    let code = random_code(&field, 32, 4, 2, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let ops: Vec<SensingOperator> = (0..2)
        .map(|_| SensingOperator::hadamard(300, 512, rng.gen()).unwrap())
        .collect();
    let msgs: Vec<_> = ops
        .iter()
        .map(|op| {
            SrLdpcEncoder::new(&code, op, 3.0)
                .unwrap()
                .encode_symbols(random_info(&mut rng, code.dimension(), 16))
                .unwrap()
        })
        .collect();
    let signals: Vec<Vec<f64>> = msgs.iter().map(|m| m.signal.clone()).collect();
    let y = transmit(&signals, 1.0, &mut rng).unwrap();
    let params = DecoderParams {
        early_stop: false,
        max_iterations: 12,
        ..DecoderParams::default()
    };
    let dec = AmpBpDecoder::new(&ops, vec![&code, &code], 3.0, params).unwrap();
    let out = dec.decode(&y, None).unwrap();
    assert_eq!(out.iterations, 12);
    assert_eq!(out.trace.len(), 12);
    assert!(out.trace.iter().all(|t| t.tau > 0.0 && t.section_errors.is_none()));
}

// Paired sign test over common trials: dropping the Onsager term must
// lose more trials than it wins.
#[test]
fn onsager_term_reduces_section_errors() {
    let with = Simulation::new(SimConfig::default()).unwrap();
    let mut cfg = SimConfig::default();
    cfg.decoder.onsager = false;
    let without = Simulation::new(cfg).unwrap();
    let pt = with.points()[0];

    let trials = 120u64;
    let (mut worse, mut better) = (0u64, 0u64);
    let (mut err_with, mut err_without) = (0u64, 0u64);
    for t in 0..trials {
        let a = with.run_trial(pt, t).unwrap().symbol_errors;
        let b = without.run_trial(pt, t).unwrap().symbol_errors;
        err_with += a;
        err_without += b;
        if b > a {
            worse += 1;
        } else if b < a {
            better += 1;
        }
    }
    assert!(err_without > err_with);
    // One-sided sign test at 95%: normal approximation to Binomial(m, 1/2).
    let m = (worse + better) as f64;
    let zscore = (worse as f64 - m / 2.0) / (m / 4.0).sqrt();
    assert!(
        zscore > 1.645,
        "without Onsager worse on {worse}, better on {better} of {trials} trials"
    );
}
