//! Shared test support: brute-force reference implementations, a seeded
//! corpus generator, the fixture corpus and a small HTTP client.

pub mod checks;
pub mod corpus;
pub mod fixture;
pub mod generate;
pub mod http;
pub mod oracle;

pub use corpus::Corpus;
