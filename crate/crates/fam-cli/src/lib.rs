//! Scenario harness for the finitely additive Markov chain engine: file
//! ingestion, the golden corpus, randomized property suites and report
//! emission.

pub mod corpus;
pub mod gen;
pub mod oracle;
pub mod report;
pub mod scenario;
pub mod suites;
