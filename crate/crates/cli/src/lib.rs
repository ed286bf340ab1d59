pub mod commands;
pub mod fixtures;
pub mod instance;
pub mod report;
pub mod suite;
