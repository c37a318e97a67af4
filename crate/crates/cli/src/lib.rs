//! Command-line front end over `tdprof-core`: loads transaction files,
//! writes metric tables, clustering reports and benchmark audits.

pub mod cli;
pub mod commands;
pub mod input;
pub mod report;
