//! Secure subcarrier assignment and power allocation for NOMA two-way
//! amplify-and-forward relay networks with a passive eavesdropper.
//!
//! The pipeline per trial is [`channel`] (topology and fading) →
//! [`matching`] (SC pair assignment) → [`power`] (Dinkelbach relay power)
//! → [`rates`] (secrecy rates and energy efficiency). [`harness`] runs it
//! over Monte Carlo trials and [`cli`] wraps everything for the command line.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod cli;
pub mod config;
pub mod error;
pub mod harness;
pub mod matching;
pub mod power;
pub mod rates;
pub mod system;

pub use config::SystemConfig;
pub use error::{Error, Result};
