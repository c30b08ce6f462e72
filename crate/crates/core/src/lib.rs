pub mod error;
pub mod numerics;
pub mod recoupling;
pub mod tree;
pub mod engine;
pub mod symrep;
pub mod ponzano_regge;
pub mod cli;
