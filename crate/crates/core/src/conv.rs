//! Rate-1/2, K=7 convolutional code with generators 171/133 (octal) and a
//! hard-decision Viterbi decoder.
//!
//! The shift register holds the newest input bit in its most significant position,
//! which is the tap that multiplies the leading `1` of each octal generator. Blocks
//! are zero-tail terminated: six flush bits return the encoder to state 0 and the
//! decoder traces back from state 0 over the whole block.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

pub const CONSTRAINT_LENGTH: usize = 7;
pub const TAIL_BITS: usize = CONSTRAINT_LENGTH - 1;
const NUM_STATES: usize = 1 << TAIL_BITS;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConvCodeParams {
    /// Tap masks, MSB = newest input bit.
    pub generators: [u8; 2],
    pub constraint_length: usize,
}

impl ConvCodeParams {
    pub const G171_133: ConvCodeParams = ConvCodeParams {
        generators: [0o171, 0o133],
        constraint_length: CONSTRAINT_LENGTH,
    };

    pub fn tail_bits(&self) -> usize {
        self.constraint_length - 1
    }

    /// Length of the encoded block for `info_bits` input bits.
    pub fn encoded_len(&self, info_bits: usize) -> usize {
        2 * (info_bits + self.tail_bits())
    }
}

impl Default for ConvCodeParams {
    fn default() -> Self {
        Self::G171_133
    }
}

#[inline]
fn parity(x: u8) -> u8 {
    (x.count_ones() & 1) as u8
}

/// Branch outputs for `(state, input)`, packed as `g1 << 1 | g2`.
const fn branch_table(generators: [u8; 2]) -> [[u8; 2]; NUM_STATES] {
    let mut table = [[0u8; 2]; NUM_STATES];
    let mut state = 0;
    while state < NUM_STATES {
        let mut bit = 0;
        while bit < 2 {
            let reg = ((bit << TAIL_BITS) | state) as u8;
            let g1 = (reg & generators[0]).count_ones() as u8 & 1;
            let g2 = (reg & generators[1]).count_ones() as u8 & 1;
            table[state][bit] = (g1 << 1) | g2;
            bit += 1;
        }
        state += 1;
    }
    table
}

static BRANCHES: [[u8; 2]; NUM_STATES] = branch_table(ConvCodeParams::G171_133.generators);

/// Encode `bits` (0/1 values) followed by six zero tail bits.
pub fn cc_encode(bits: &[u8]) -> Vec<u8> {
    let [g1, g2] = ConvCodeParams::G171_133.generators;
    let mut out = Vec::with_capacity(2 * (bits.len() + TAIL_BITS));
    let mut reg = 0u8;
    for &b in bits.iter().chain(core::iter::repeat_n(&0u8, TAIL_BITS)) {
        reg = (reg >> 1) | ((b & 1) << TAIL_BITS);
        out.push(parity(reg & g1));
        out.push(parity(reg & g2));
    }
    out
}

/// Maximum-likelihood (Hamming metric) decode of a zero-terminated block.
///
/// Ties between equal-metric survivors go to the predecessor whose dropped bit is 0.
pub fn viterbi_decode(coded: &[u8]) -> Result<Vec<u8>> {
    if !coded.len().is_multiple_of(2) {
        return Err(Error::NotMultiple {
            what: "convolutional codeword",
            multiple: 2,
            actual: coded.len(),
        });
    }
    if coded.len() < 2 * TAIL_BITS {
        return Err(Error::Length {
            what: "convolutional codeword (minimum)",
            expected: 2 * TAIL_BITS,
            actual: coded.len(),
        });
    }
    let steps = coded.len() / 2;
    const UNREACHED: u32 = u32::MAX / 2;
    let mut metrics = [UNREACHED; NUM_STATES];
    metrics[0] = 0;
    let mut next = [0u32; NUM_STATES];
    // bit s of decisions[t] set => survivor into state s came from the odd predecessor
    let mut decisions = vec![0u64; steps];

    for (t, pair) in coded.chunks_exact(2).enumerate() {
        let rx = ((pair[0] & 1) << 1) | (pair[1] & 1);
        let mut word = 0u64;
        for (ns, slot) in next.iter_mut().enumerate() {
            let bit = ns >> (TAIL_BITS - 1);
            let p0 = (ns << 1) & (NUM_STATES - 1);
            let p1 = p0 | 1;
            let m0 = metrics[p0] + (BRANCHES[p0][bit] ^ rx).count_ones();
            let m1 = metrics[p1] + (BRANCHES[p1][bit] ^ rx).count_ones();
            if m1 < m0 {
                *slot = m1;
                word |= 1 << ns;
            } else {
                *slot = m0;
            }
        }
        decisions[t] = word;
        metrics = next;
    }

    let mut state = 0usize;
    let mut out = vec![0u8; steps];
    for t in (0..steps).rev() {
        out[t] = (state >> (TAIL_BITS - 1)) as u8;
        let from_odd = (decisions[t] >> state) & 1;
        state = ((state << 1) & (NUM_STATES - 1)) | from_odd as usize;
    }
    out.truncate(steps - TAIL_BITS);
    Ok(out)
}
