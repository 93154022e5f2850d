//! Command line and HTTP front ends for the repair-cascade harness.

pub mod commands;
pub mod config;
pub mod server;
