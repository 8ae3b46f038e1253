pub mod error;
pub mod exec;
pub mod fixtures;
pub mod gf2;
pub mod graph;
pub mod lc;
pub mod pauli;
pub mod reduction;
pub mod selftest;
pub mod state;
pub mod surface;

pub use error::{Error, Result};

/// Lowercase hex SHA-256, used for input digests in reports.
pub fn sha256_hex(bytes: &[u8]) -> String {
    use sha2::{Digest, Sha256};
    hex::encode(Sha256::digest(bytes))
}
