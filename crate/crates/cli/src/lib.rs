//! Command-line front end for `confstat`: the statistic-expression parser,
//! the result cache and the subcommands.

pub mod app;
pub mod cache;
pub mod expr;
pub mod render;
