//! Build a PEG outer code, inspect it, and round-trip it through nbal text.
//!
//!     cargo run --example make_code -- 76 3 out.nbal

use mu_srldpc::gf::GfField;
use mu_srldpc::nbldpc::{from_nbal, random_code, save_nbal, to_nbal};

fn main() -> mu_srldpc::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let len: usize = args.first().and_then(|s| s.parse().ok()).unwrap_or(76);
    let checks: usize = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(3);

    let field = GfField::gf256();
    let code = random_code(&field, len, checks, 2, 1)?;
    println!(
        "({}, {}) code over GF({}), rate {:.3}, girth {:?}",
        code.len(),
        code.dimension(),
        field.q(),
        code.rate(),
        code.girth()
    );
    for c in 0..code.num_checks() {
        println!("check {c}: degree {}", code.check_edges(c).len());
    }

    let text = to_nbal(&code);
    let back = from_nbal(&text, Some(&field))?;
    assert_eq!(to_nbal(&back), text);
    println!("nbal round trip ok ({} bytes)", text.len());

    if let Some(path) = args.get(2) {
        save_nbal(&code, path)?;
        println!("wrote {path}");
    }
    Ok(())
}
