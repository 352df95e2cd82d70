//! GF(2^8) arithmetic over the primitive polynomial x^8 + x^4 + x^3 + x^2 + 1.
//!
//! Multiplication goes through log/antilog tables built at compile time, so the
//! tables are immutable and shared freely between threads.

use core::fmt;
use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Sub};

/// Field polynomial, including the x^8 term.
pub const FIELD_POLY: u16 = 0x11D;

struct Tables {
    /// `exp[i] = α^i`, doubled in length so `exp[log a + log b]` needs no reduction.
    exp: [u8; 512],
    log: [u8; 256],
}

const fn build_tables() -> Tables {
    let mut exp = [0u8; 512];
    let mut log = [0u8; 256];
    let mut val: u16 = 1;
    let mut i = 0;
    while i < 255 {
        exp[i] = val as u8;
        exp[i + 255] = val as u8;
        log[val as usize] = i as u8;
        val <<= 1;
        if val & 0x100 != 0 {
            val ^= FIELD_POLY;
        }
        i += 1;
    }
    exp[510] = exp[0];
    exp[511] = exp[1];
    Tables { exp, log }
}

static TABLES: Tables = build_tables();

/// Multiply two field elements given as raw bytes.
#[inline]
pub fn mul(a: u8, b: u8) -> u8 {
    if a == 0 || b == 0 {
        return 0;
    }
    TABLES.exp[TABLES.log[a as usize] as usize + TABLES.log[b as usize] as usize]
}

/// Multiplicative inverse. Zero has none.
#[inline]
pub fn inv(a: u8) -> Option<u8> {
    if a == 0 {
        None
    } else {
        Some(TABLES.exp[255 - TABLES.log[a as usize] as usize])
    }
}

/// α^power, for any (possibly negative) exponent.
#[inline]
pub fn alpha_pow(power: i64) -> u8 {
    TABLES.exp[power.rem_euclid(255) as usize]
}

/// Discrete log base α. Zero has none.
#[inline]
pub fn log(a: u8) -> Option<u8> {
    if a == 0 {
        None
    } else {
        Some(TABLES.log[a as usize])
    }
}

/// A GF(2^8) element.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gf256(pub u8);

impl Gf256 {
    pub const ZERO: Gf256 = Gf256(0);
    pub const ONE: Gf256 = Gf256(1);

    /// The primitive element α = x.
    pub const ALPHA: Gf256 = Gf256(2);

    pub fn inv(self) -> Option<Gf256> {
        inv(self.0).map(Gf256)
    }

    pub fn pow(self, exp: u32) -> Gf256 {
        match log(self.0) {
            None if exp == 0 => Gf256::ONE,
            None => Gf256::ZERO,
            Some(l) => Gf256(alpha_pow(l as i64 * exp as i64)),
        }
    }
}

impl fmt::Debug for Gf256 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf256({:#04x})", self.0)
    }
}

impl From<u8> for Gf256 {
    fn from(v: u8) -> Self {
        Gf256(v)
    }
}

impl Add for Gf256 {
    type Output = Gf256;
    #[inline]
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: Gf256) -> Gf256 {
        Gf256(self.0 ^ rhs.0)
    }
}

impl AddAssign for Gf256 {
    #[inline]
    #[allow(clippy::suspicious_op_assign_impl)]
    fn add_assign(&mut self, rhs: Gf256) {
        self.0 ^= rhs.0;
    }
}

impl Sub for Gf256 {
    type Output = Gf256;
    #[inline]
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn sub(self, rhs: Gf256) -> Gf256 {
        Gf256(self.0 ^ rhs.0)
    }
}

impl Mul for Gf256 {
    type Output = Gf256;
    #[inline]
    fn mul(self, rhs: Gf256) -> Gf256 {
        Gf256(mul(self.0, rhs.0))
    }
}

impl MulAssign for Gf256 {
    #[inline]
    fn mul_assign(&mut self, rhs: Gf256) {
        self.0 = mul(self.0, rhs.0);
    }
}

impl Div for Gf256 {
    type Output = Gf256;

    /// Panics on division by zero.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Gf256) -> Gf256 {
        self * rhs.inv().expect("division by zero in GF(256)")
    }
}
