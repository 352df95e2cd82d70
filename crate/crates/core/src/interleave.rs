//! Byte-level convolutional (Forney) interleaving and the per-OFDM-symbol bit
//! interleaver.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Forney interleaver shape: `branches` delay lines, line `i` holding `i * delay_step` cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ForneyParams {
    pub branches: usize,
    pub delay_step: usize,
}

impl ForneyParams {
    pub fn new(branches: usize, delay_step: usize) -> Result<Self> {
        if branches == 0 {
            return Err(Error::InvalidParameter(
                "Forney interleaver needs at least one branch",
            ));
        }
        Ok(ForneyParams { branches, delay_step })
    }

    /// End-to-end latency of an interleaver/deinterleaver pair, in symbols.
    pub fn latency(&self) -> usize {
        self.branches * (self.branches - 1) * self.delay_step
    }
}

impl Default for ForneyParams {
    fn default() -> Self {
        ForneyParams {
            branches: 5,
            delay_step: 3,
        }
    }
}

/// Commutated bank of FIFO delay lines with zero-filled initial contents.
#[derive(Debug, Clone)]
struct DelayBank {
    lines: Vec<VecDeque<u8>>,
    cursor: usize,
}

impl DelayBank {
    fn new(delays: impl Iterator<Item = usize>) -> Self {
        DelayBank {
            lines: delays.map(|d| core::iter::repeat_n(0u8, d).collect()).collect(),
            cursor: 0,
        }
    }

    fn push(&mut self, sym: u8) -> u8 {
        let branches = self.lines.len();
        let line = &mut self.lines[self.cursor];
        self.cursor = (self.cursor + 1) % branches;
        if line.is_empty() {
            return sym;
        }
        line.push_back(sym);
        line.pop_front().unwrap()
    }
}

/// Streaming Forney interleaver: branch `i` delays its symbols by `i * M` commutator cycles.
#[derive(Debug, Clone)]
pub struct ForneyInterleaver(DelayBank);

impl ForneyInterleaver {
    pub fn new(p: ForneyParams) -> Self {
        ForneyInterleaver(DelayBank::new((0..p.branches).map(|i| i * p.delay_step)))
    }

    pub fn push(&mut self, sym: u8) -> u8 {
        self.0.push(sym)
    }

    pub fn process(&mut self, input: &[u8]) -> Vec<u8> {
        input.iter().map(|&s| self.push(s)).collect()
    }
}

/// Streaming inverse: branch `i` delays by `(B - 1 - i) * M` cycles.
#[derive(Debug, Clone)]
pub struct ForneyDeinterleaver(DelayBank);

impl ForneyDeinterleaver {
    pub fn new(p: ForneyParams) -> Self {
        let b = p.branches;
        ForneyDeinterleaver(DelayBank::new((0..b).map(|i| (b - 1 - i) * p.delay_step)))
    }

    pub fn push(&mut self, sym: u8) -> u8 {
        self.0.push(sym)
    }

    pub fn process(&mut self, input: &[u8]) -> Vec<u8> {
        input.iter().map(|&s| self.push(s)).collect()
    }
}

fn check_block(len: usize, p: &ForneyParams) -> Result<()> {
    if !len.is_multiple_of(p.branches) {
        return Err(Error::NotMultiple {
            what: "Forney block",
            multiple: p.branches,
            actual: len,
        });
    }
    Ok(())
}

/// Block form of the Forney interleaver with delay lines pre-loaded from the block's
/// own tail (tail-biting), so the output has the same length as the input.
///
/// Symbol `j` lands at `(j + (j mod B)·M·B) mod len`, which is what the streaming
/// interleaver produces once its lines hold the previous copy of a periodic input.
/// Requires `len` to be a multiple of `B`.
pub fn forney_interleave(block: &[u8], p: &ForneyParams) -> Result<Vec<u8>> {
    check_block(block.len(), p)?;
    let n = block.len();
    let mut out = alloc::vec![0u8; n];
    for (j, &s) in block.iter().enumerate() {
        out[forney_position(j, n, p)] = s;
    }
    Ok(out)
}

pub fn forney_deinterleave(block: &[u8], p: &ForneyParams) -> Result<Vec<u8>> {
    check_block(block.len(), p)?;
    let n = block.len();
    Ok((0..n).map(|j| block[forney_position(j, n, p)]).collect())
}

fn forney_position(j: usize, n: usize, p: &ForneyParams) -> usize {
    if n == 0 {
        return 0;
    }
    let shift = (j % p.branches) * p.delay_step * p.branches;
    (j + shift % n) % n
}

/// Bit interleaver for one OFDM symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockInterleaverParams {
    /// Coded bits per OFDM symbol.
    pub n_cbps: usize,
    pub columns: usize,
    pub s: usize,
}

impl BlockInterleaverParams {
    pub const COLUMNS: usize = 16;

    pub fn new(n_cbps: usize, bits_per_subcarrier: usize) -> Result<Self> {
        if n_cbps == 0 || !n_cbps.is_multiple_of(Self::COLUMNS) {
            return Err(Error::InvalidParameter(
                "n_cbps must be a positive multiple of 16",
            ));
        }
        Ok(BlockInterleaverParams {
            n_cbps,
            columns: Self::COLUMNS,
            s: (bits_per_subcarrier / 2).max(1),
        })
    }

    /// Output position of input bit `k`.
    pub fn permute(&self, k: usize) -> usize {
        let n = self.n_cbps;
        let d = self.columns;
        let m = (n / d) * (k % d) + k / d;
        let s = self.s;
        s * (m / s) + (m + n - (d * m) / n) % s
    }

    /// Table of `permute(k)` for every `k`.
    pub fn permutation(&self) -> Vec<usize> {
        (0..self.n_cbps).map(|k| self.permute(k)).collect()
    }
}

/// Per-symbol bit interleaver with a precomputed permutation.
#[derive(Debug, Clone)]
pub struct BlockInterleaver {
    params: BlockInterleaverParams,
    forward: Vec<usize>,
}

impl BlockInterleaver {
    pub fn new(params: BlockInterleaverParams) -> Self {
        BlockInterleaver {
            forward: params.permutation(),
            params,
        }
    }

    pub fn params(&self) -> &BlockInterleaverParams {
        &self.params
    }

    fn check(&self, len: usize) -> Result<()> {
        if len != self.params.n_cbps {
            return Err(Error::Length {
                what: "bit interleaver block",
                expected: self.params.n_cbps,
                actual: len,
            });
        }
        Ok(())
    }

    pub fn interleave(&self, bits: &[u8]) -> Result<Vec<u8>> {
        self.check(bits.len())?;
        let mut out = alloc::vec![0u8; bits.len()];
        for (k, &b) in bits.iter().enumerate() {
            out[self.forward[k]] = b;
        }
        Ok(out)
    }

    pub fn deinterleave(&self, bits: &[u8]) -> Result<Vec<u8>> {
        self.check(bits.len())?;
        Ok(self.forward.iter().map(|&j| bits[j]).collect())
    }
}

pub fn block_interleave(bits: &[u8], p: &BlockInterleaverParams) -> Result<Vec<u8>> {
    BlockInterleaver::new(*p).interleave(bits)
}

pub fn block_deinterleave(bits: &[u8], p: &BlockInterleaverParams) -> Result<Vec<u8>> {
    BlockInterleaver::new(*p).deinterleave(bits)
}
