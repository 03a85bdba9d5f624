//! Design optimization of filament-wound composite pressure vessels with
//! unequal polar openings.

pub mod commands;
pub mod config;
pub mod error;
pub mod failure;
pub mod materials;
pub mod mechanics;
pub mod optimize;
pub mod report;
pub mod winding;

pub use error::{Error, Result};
