//! Systematic Reed-Solomon codec over GF(2^8).
//!
//! Codewords are laid out message first, parity last. Array index `i` holds the
//! coefficient of x^(n-1-i), so the message occupies the high-order terms.
//!
//! Decoding runs the usual pipeline: syndromes, Berlekamp-Massey for the error
//! locator Λ(x), Chien search for its roots and Forney's formula for the error
//! magnitudes. A pattern is reported uncorrectable when the number of roots found
//! disagrees with deg Λ, or when the repaired word still has nonzero syndromes.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::gf::{self, alpha_pow, mul, FIELD_POLY};

/// Shape of a Reed-Solomon code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RsCodeParams {
    pub n: usize,
    pub k: usize,
    pub t: usize,
    pub field_poly: u16,
    /// Exponent of the first generator root, α^gen_start_root.
    pub gen_start_root: u8,
}

impl RsCodeParams {
    /// RS(255, 239, 8) with roots α^0 … α^15.
    pub const RS_255_239: RsCodeParams = RsCodeParams {
        n: 255,
        k: 239,
        t: 8,
        field_poly: FIELD_POLY,
        gen_start_root: 0,
    };

    pub fn parity_len(&self) -> usize {
        self.n - self.k
    }

    pub fn validate(&self) -> Result<()> {
        if self.field_poly != FIELD_POLY {
            return Err(Error::InvalidParameter(
                "only field polynomial 0x11D is supported",
            ));
        }
        if self.n > 255 || self.k == 0 || self.k >= self.n {
            return Err(Error::InvalidParameter("RS code needs 0 < k < n <= 255"));
        }
        if self.n - self.k != 2 * self.t {
            return Err(Error::InvalidParameter("RS code needs n - k = 2t"));
        }
        Ok(())
    }
}

impl Default for RsCodeParams {
    fn default() -> Self {
        Self::RS_255_239
    }
}

/// Result of a successful decode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decoded {
    pub message: Vec<u8>,
    /// Number of symbols that were repaired.
    pub corrected: usize,
}

#[derive(Debug, Clone)]
pub struct ReedSolomon {
    params: RsCodeParams,
    /// Monic generator, highest degree first; `generator[0] == 1`.
    generator: Vec<u8>,
}

impl ReedSolomon {
    pub fn new(params: RsCodeParams) -> Result<Self> {
        params.validate()?;
        let nsym = params.parity_len();
        let mut generator = vec![1u8];
        for i in 0..nsym {
            let root = alpha_pow(params.gen_start_root as i64 + i as i64);
            // multiply by (x + root)
            let mut next = vec![0u8; generator.len() + 1];
            for (j, &c) in generator.iter().enumerate() {
                next[j] ^= c;
                next[j + 1] ^= mul(c, root);
            }
            generator = next;
        }
        Ok(ReedSolomon { params, generator })
    }

    pub fn params(&self) -> &RsCodeParams {
        &self.params
    }

    /// Generator polynomial coefficients, highest degree first.
    pub fn generator(&self) -> &[u8] {
        &self.generator
    }

    pub fn encode(&self, msg: &[u8]) -> Result<Vec<u8>> {
        let RsCodeParams { n, k, .. } = self.params;
        if msg.len() != k {
            return Err(Error::Length {
                what: "RS message",
                expected: k,
                actual: msg.len(),
            });
        }
        let nsym = n - k;
        let mut parity = vec![0u8; nsym];
        for &m in msg {
            let feedback = m ^ parity[0];
            parity.copy_within(1.., 0);
            parity[nsym - 1] = 0;
            if feedback != 0 {
                for (p, &g) in parity.iter_mut().zip(&self.generator[1..]) {
                    *p ^= mul(feedback, g);
                }
            }
        }
        let mut codeword = Vec::with_capacity(n);
        codeword.extend_from_slice(msg);
        codeword.extend_from_slice(&parity);
        Ok(codeword)
    }

    /// S_j = r(α^(b+j)) for j in 0..2t.
    pub fn syndromes(&self, word: &[u8]) -> Vec<u8> {
        (0..self.params.parity_len())
            .map(|j| {
                let x = alpha_pow(self.params.gen_start_root as i64 + j as i64);
                word.iter().fold(0u8, |acc, &c| mul(acc, x) ^ c)
            })
            .collect()
    }

    pub fn decode(&self, received: &[u8]) -> Result<Decoded> {
        let RsCodeParams { n, k, .. } = self.params;
        if received.len() != n {
            return Err(Error::Length {
                what: "RS codeword",
                expected: n,
                actual: received.len(),
            });
        }
        let syndromes = self.syndromes(received);
        if syndromes.iter().all(|&s| s == 0) {
            return Ok(Decoded {
                message: received[..k].to_vec(),
                corrected: 0,
            });
        }

        let (locator, num_errors) = berlekamp_massey(&syndromes);
        if num_errors > self.params.t {
            return Err(Error::Uncorrectable);
        }

        let positions = chien_search(&locator, n);
        if positions.len() != num_errors {
            return Err(Error::Uncorrectable);
        }

        let evaluator = error_evaluator(&syndromes, &locator);
        let mut repaired = received.to_vec();
        for &pos in &positions {
            let power = (n - 1 - pos) as i64;
            let x_inv = alpha_pow(-power);
            let denom = eval_derivative(&locator, x_inv);
            if denom == 0 {
                return Err(Error::Uncorrectable);
            }
            let numer = eval_low_first(&evaluator, x_inv);
            // X^(1-b) Ω(X^-1) / Λ'(X^-1)
            let scale = alpha_pow(power * (1 - self.params.gen_start_root as i64));
            let magnitude = mul(mul(scale, numer), gf::inv(denom).unwrap());
            repaired[pos] ^= magnitude;
        }

        if self.syndromes(&repaired).iter().any(|&s| s != 0) {
            return Err(Error::Uncorrectable);
        }
        Ok(Decoded {
            message: repaired[..k].to_vec(),
            corrected: positions.len(),
        })
    }
}

/// Returns Λ(x) lowest degree first, and the LFSR length L.
fn berlekamp_massey(syndromes: &[u8]) -> (Vec<u8>, usize) {
    let len = syndromes.len();
    let mut current = vec![0u8; len + 1];
    let mut previous = vec![0u8; len + 1];
    current[0] = 1;
    previous[0] = 1;
    let mut lfsr_len = 0usize;
    let mut shift = 1usize;
    let mut prev_discrepancy = 1u8;

    for step in 0..len {
        let mut discrepancy = syndromes[step];
        for i in 1..=lfsr_len {
            discrepancy ^= mul(current[i], syndromes[step - i]);
        }
        if discrepancy == 0 {
            shift += 1;
            continue;
        }
        let coef = mul(discrepancy, gf::inv(prev_discrepancy).unwrap());
        let saved = current.clone();
        for i in 0..=len - shift {
            current[i + shift] ^= mul(coef, previous[i]);
        }
        if 2 * lfsr_len <= step {
            lfsr_len = step + 1 - lfsr_len;
            previous = saved;
            prev_discrepancy = discrepancy;
            shift = 1;
        } else {
            shift += 1;
        }
    }
    current.truncate(lfsr_len + 1);
    (current, lfsr_len)
}

/// Indices `i` (codeword positions) where Λ(α^-(n-1-i)) = 0.
fn chien_search(locator: &[u8], n: usize) -> Vec<usize> {
    (0..n)
        .filter(|&pos| eval_low_first(locator, alpha_pow(-((n - 1 - pos) as i64))) == 0)
        .collect()
}

/// Ω(x) = S(x)Λ(x) mod x^2t, lowest degree first.
fn error_evaluator(syndromes: &[u8], locator: &[u8]) -> Vec<u8> {
    let len = syndromes.len();
    let mut out = vec![0u8; len];
    for (i, &l) in locator.iter().enumerate() {
        if l == 0 {
            continue;
        }
        for (j, &s) in syndromes.iter().enumerate().take(len.saturating_sub(i)) {
            out[i + j] ^= mul(l, s);
        }
    }
    out
}

fn eval_low_first(poly: &[u8], x: u8) -> u8 {
    poly.iter().rev().fold(0u8, |acc, &c| mul(acc, x) ^ c)
}

/// Formal derivative evaluated at `x`; in characteristic 2 only odd terms survive.
fn eval_derivative(poly: &[u8], x: u8) -> u8 {
    let x_sq = mul(x, x);
    let mut acc = 0u8;
    let mut x_pow = 1u8;
    for coef in poly.iter().skip(1).step_by(2) {
        acc ^= mul(*coef, x_pow);
        x_pow = mul(x_pow, x_sq);
    }
    acc
}
