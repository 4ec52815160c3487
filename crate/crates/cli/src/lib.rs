//! Command-line front end for `cgsb-core`.

pub mod app;
pub mod expr;
pub mod files;

pub use app::run;
