pub mod rational;
pub mod scalar;
pub mod series;
pub mod calibration;
pub mod frobenius;
pub mod matrix;
pub mod kdv;
pub mod periods;
pub mod catalan;
pub mod givental;
pub mod hirota;
pub mod operators;
pub mod lax;
pub mod cli;
