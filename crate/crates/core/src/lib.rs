#![no_std]

extern crate alloc;

pub mod algebra;
pub mod bar;
pub mod emss;
pub mod error;
pub mod field;
pub mod series;
pub mod thom;
