use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("input text is empty")]
    EmptyInput,

    #[error("input contains a NUL byte at offset {0}; 0x00 is reserved for the terminator")]
    InteriorNul(usize),

    #[error("text of length {len} exceeds the limit of {limit} symbols")]
    TextTooLong { len: usize, limit: usize },

    #[error("{what} index {index} out of range (length {len})")]
    OutOfRange {
        what: &'static str,
        index: usize,
        len: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("not an index file (bad magic)")]
    BadMagic,

    #[error("unsupported format version {0}")]
    UnsupportedVersion(u64),

    #[error("checksum mismatch: stored {stored:#010x}, computed {computed:#010x}")]
    Checksum { stored: u64, computed: u64 },

    #[error("malformed index: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn format_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Format(msg.into()))
}
