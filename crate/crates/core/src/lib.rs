pub mod action;
pub mod crystal;
pub mod eyries;
pub mod model;
pub mod sample;
pub mod structure;
pub mod word;
