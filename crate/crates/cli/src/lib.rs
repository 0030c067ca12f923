//! Library surface of the command-line laboratory, shared by the binary and
//! the integration suites.

pub mod commands;
pub mod config;
pub mod report;
pub mod reproduce;
