#![no_std]
extern crate alloc;

mod error;
mod rat;
pub mod exact;
pub mod intlin;
pub mod abgrp;
pub mod tiling;
pub mod collar;
pub mod apx;
pub mod limit;
pub mod cone;

pub use error::{Error, Result};
