//! Command-line front end for the tautring engine: expression parsing,
//! verification suites, reports and the persistent integral cache.

pub mod cache;
pub mod commands;
pub mod parser;
pub mod report;
pub mod suites;
