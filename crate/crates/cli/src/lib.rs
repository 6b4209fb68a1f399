//! Command-line front end for the `wallis` library.

pub mod commands;
pub mod reproduce;
pub mod specfile;
