pub mod build;
pub mod generate;
pub mod query;
pub mod stats;
pub mod sweep;
