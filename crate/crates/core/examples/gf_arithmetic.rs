//! Field arithmetic over GF(256) and the symbol/index bijection.

use mu_srldpc::gf::{GfField, GfSymbol};

fn main() -> mu_srldpc::Result<()> {
    let f = GfField::gf256();
    let a = GfSymbol::new(0x53);
    let b = GfSymbol::new(0xCA);
    println!("GF({}) with modulus {:#x}", f.q(), f.poly());
    println!("{:#04x} * {:#04x} = {:#04x}", a.value(), b.value(), f.mul(a, b).value());
    println!("{:#04x} + {:#04x} = {:#04x}", a.value(), b.value(), f.add(a, b).value());
    println!("inv({:#04x}) = {:#04x}", a.value(), f.inv(a)?.value());
    println!("{:#04x} / {:#04x} = {:#04x}", a.value(), b.value(), f.div(a, b)?.value());
    println!("section index of {:#04x}: {}", a.value(), f.phi(a));

    // A small field where the whole multiplication table fits on screen.
    let f4 = GfField::with_degree(2)?;
    println!("\nGF(4) multiplication table:");
    for x in f4.elements() {
        let row: Vec<String> = f4.elements().map(|y| f4.mul(x, y).value().to_string()).collect();
        println!("  {}", row.join(" "));
    }
    Ok(())
}
