use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{what}: expected length {expected}, got {actual}")]
    Length {
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("{what}: length {actual} is not a multiple of {multiple}")]
    NotMultiple {
        what: &'static str,
        multiple: usize,
        actual: usize,
    },

    #[error("uncorrectable Reed-Solomon block")]
    Uncorrectable,

    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),

    #[error("target BER is not bracketed by the records")]
    NotBracketed,

    #[error("channel state information required for a fading channel")]
    MissingCsi,
}

pub type Result<T> = core::result::Result<T, Error>;
