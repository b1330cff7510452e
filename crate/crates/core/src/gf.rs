//! Arithmetic in GF(2^p) via log/antilog tables.
//!
//! Elements are stored in their polynomial-basis bit representation. The
//! symbol-to-index bijection used by the section mapping is the identity on
//! that representation, so `phi(0) = 0` and `phi(1) = 1` hold trivially.

use std::fmt;

use crate::error::{Error, Result};

/// Default reduction polynomial for GF(256): x^8 + x^4 + x^3 + x + 1.
pub const DEFAULT_POLY_256: u32 = 0x11B;

/// A field element.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct GfSymbol(u16);

impl GfSymbol {
    pub const ZERO: GfSymbol = GfSymbol(0);
    pub const ONE: GfSymbol = GfSymbol(1);

    /// Wraps a raw value. Range is checked by the field operations that
    /// consume it; use [`GfField::symbol`] for a checked constructor.
    pub const fn new(value: u16) -> Self {
        GfSymbol(value)
    }

    #[inline]
    pub const fn value(self) -> u16 {
        self.0
    }

    #[inline]
    pub const fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for GfSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#04x}", self.0)
    }
}

impl From<GfSymbol> for usize {
    fn from(s: GfSymbol) -> usize {
        s.0 as usize
    }
}

/// Lookup-table context for GF(2^p).
#[derive(Clone, PartialEq, Eq)]
pub struct GfField {
    p: u32,
    poly: u32,
    /// `log[a]` for a != 0; `log[0]` is unused.
    log: Vec<u16>,
    /// `exp[i] = g^i` for i in 0..2(q-1), doubled so products skip the modulo.
    exp: Vec<u16>,
}

impl fmt::Debug for GfField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GfField")
            .field("p", &self.p)
            .field("poly", &format_args!("{:#x}", self.poly))
            .finish()
    }
}

/// Carry-less multiply of two field elements followed by reduction.
pub(crate) fn poly_mulmod(mut a: u32, mut b: u32, poly: u32, p: u32) -> u32 {
    let mut acc = 0u32;
    let top = 1u32 << p;
    while b != 0 {
        if b & 1 != 0 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a & top != 0 {
            a ^= poly;
        }
    }
    acc
}

fn degree(x: u32) -> u32 {
    31 - x.leading_zeros()
}

/// Remainder of `a` divided by `b` in GF(2)[x].
fn poly_rem(mut a: u32, b: u32) -> u32 {
    let db = degree(b);
    while a != 0 && degree(a) >= db {
        a ^= b << (degree(a) - db);
    }
    a
}

/// Returns a nontrivial factor of `poly` if one exists.
fn find_factor(poly: u32) -> Option<u32> {
    let p = degree(poly);
    // Any reducible polynomial has a factor of degree <= p/2.
    (2u32..(1 << (p / 2 + 1))).find(|&cand| poly_rem(poly, cand) == 0)
}

impl GfField {
    /// Builds GF(2^p) with the given reduction polynomial (bitmask with the
    /// x^p term set).
    pub fn new(p: u32, poly: u32) -> Result<Self> {
        if !(2..=12).contains(&p) {
            return Err(Error::FieldDegree(p));
        }
        if poly == 0 || degree(poly) != p {
            return Err(Error::PolyDegree { poly, p });
        }
        if let Some(factor) = find_factor(poly) {
            return Err(Error::ReduciblePoly { poly, factor });
        }
        let q = 1usize << p;
        let order = q - 1;

        // The polynomial is irreducible but not necessarily primitive, so
        // search for a generator of the multiplicative group.
        let generator = (2..q as u32)
            .find(|&g| {
                let mut x = 1u32;
                for i in 1..=order {
                    x = poly_mulmod(x, g, poly, p);
                    if x == 1 {
                        return i == order;
                    }
                }
                false
            })
            .expect("multiplicative group of a finite field is cyclic");

        let mut exp = vec![0u16; 2 * order];
        let mut log = vec![0u16; q];
        let mut x = 1u32;
        for i in 0..order {
            exp[i] = x as u16;
            log[x as usize] = i as u16;
            x = poly_mulmod(x, generator, poly, p);
        }
        for i in order..2 * order {
            exp[i] = exp[i - order];
        }
        Ok(GfField { p, poly, log, exp })
    }

    /// GF(256) with [`DEFAULT_POLY_256`].
    pub fn gf256() -> Self {
        Self::new(8, DEFAULT_POLY_256).expect("0x11B is irreducible")
    }

    /// A field of order 2^p using a fixed irreducible polynomial per degree.
    pub fn with_degree(p: u32) -> Result<Self> {
        let poly = match p {
            2 => 0x7,
            3 => 0xB,
            4 => 0x13,
            5 => 0x25,
            6 => 0x43,
            7 => 0x89,
            8 => DEFAULT_POLY_256,
            9 => 0x211,
            10 => 0x409,
            11 => 0x805,
            12 => 0x1053,
            _ => return Err(Error::FieldDegree(p)),
        };
        Self::new(p, poly)
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn q(&self) -> usize {
        1 << self.p
    }

    #[inline]
    pub fn poly(&self) -> u32 {
        self.poly
    }

    /// `exp_table()[i]` is the i-th power of the table generator, i < q-1.
    pub fn exp_table(&self) -> &[u16] {
        &self.exp[..self.q() - 1]
    }

    /// Discrete logarithm of a nonzero element.
    pub fn log(&self, a: GfSymbol) -> Result<usize> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        self.check(a)?;
        Ok(self.log[a.index()] as usize)
    }

    /// Checked symbol constructor.
    pub fn symbol(&self, value: usize) -> Result<GfSymbol> {
        if value >= self.q() {
            return Err(Error::SymbolRange { value, q: self.q() });
        }
        Ok(GfSymbol(value as u16))
    }

    fn check(&self, a: GfSymbol) -> Result<()> {
        if a.index() >= self.q() {
            return Err(Error::SymbolRange {
                value: a.index(),
                q: self.q(),
            });
        }
        Ok(())
    }

    #[inline]
    pub fn add(&self, a: GfSymbol, b: GfSymbol) -> GfSymbol {
        GfSymbol(a.0 ^ b.0)
    }

    /// Subtraction coincides with addition in characteristic 2.
    #[inline]
    pub fn sub(&self, a: GfSymbol, b: GfSymbol) -> GfSymbol {
        self.add(a, b)
    }

    #[inline]
    pub fn mul(&self, a: GfSymbol, b: GfSymbol) -> GfSymbol {
        if a.0 == 0 || b.0 == 0 {
            return GfSymbol::ZERO;
        }
        GfSymbol(self.exp[self.log[a.index()] as usize + self.log[b.index()] as usize])
    }

    pub fn inv(&self, a: GfSymbol) -> Result<GfSymbol> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        self.check(a)?;
        let order = self.q() - 1;
        Ok(GfSymbol(self.exp[(order - self.log[a.index()] as usize) % order]))
    }

    pub fn div(&self, a: GfSymbol, b: GfSymbol) -> Result<GfSymbol> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Symbol to section index. Identity on the bit representation.
    #[inline]
    pub fn phi(&self, a: GfSymbol) -> usize {
        a.index()
    }

    /// Section index to symbol.
    pub fn phi_inv(&self, index: usize) -> Result<GfSymbol> {
        self.symbol(index)
    }

    /// Iterates over every field element in index order.
    pub fn elements(&self) -> impl Iterator<Item = GfSymbol> {
        (0..self.q() as u16).map(GfSymbol)
    }

    /// Iterates over the nonzero elements.
    pub fn nonzero(&self) -> impl Iterator<Item = GfSymbol> {
        (1..self.q() as u16).map(GfSymbol)
    }
}
