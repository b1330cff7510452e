//! Two users share a channel: encode, superimpose, add noise, decode jointly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mu_srldpc::amp::{AmpBpDecoder, DecoderParams};
use mu_srldpc::encoder::SrLdpcEncoder;
use mu_srldpc::gf::GfField;
use mu_srldpc::nbldpc::random_code;
use mu_srldpc::sensing::SensingOperator;
use mu_srldpc::sim::{ebn0_to_power, transmit};
use mu_srldpc::sparc::{amplitude, symbols_to_bits};

fn main() -> mu_srldpc::Result<()> {
    let ebn0_db: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3.0);
    let field = GfField::gf256();
    let code = random_code(&field, 76, 3, 2, 1)?;
    let n = 1460;
    let cols = code.len() * field.q();
    let info_bits = code.dimension() * 8;
    let d = amplitude(ebn0_to_power(ebn0_db, info_bits, 1.0), code.len())?;

    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let ops = vec![
        SensingOperator::hadamard(n, cols, rng.gen())?,
        SensingOperator::hadamard(n, cols, rng.gen())?,
    ];
    let mut bits = Vec::new();
    let mut signals = Vec::new();
    for op in &ops {
        let b: Vec<u8> = (0..info_bits).map(|_| rng.gen_range(0..2)).collect();
        signals.push(SrLdpcEncoder::new(&code, op, d)?.encode_bits(&b)?.signal);
        bits.push(b);
    }
    let y = transmit(&signals, 1.0, &mut rng)?;

    let dec = AmpBpDecoder::new(&ops, vec![&code, &code], d, DecoderParams::default())?;
    let out = dec.decode(&y, None)?;
    println!("Eb/N0 {ebn0_db} dB, d = {d:.3}, {} AMP iterations", out.iterations);
    for (k, (user, sent)) in out.users.iter().zip(&bits).enumerate() {
        let got = symbols_to_bits(&code.extract_info(&user.symbols), &field);
        let errors = got.iter().zip(sent).filter(|(a, b)| a != b).count();
        println!(
            "user {k}: {errors} bit errors of {info_bits}, valid codeword: {}",
            user.valid_codeword
        );
    }
    for (t, tr) in out.trace.iter().enumerate() {
        println!("  iter {t:2}: tau = {:.4}", tr.tau);
    }
    Ok(())
}
