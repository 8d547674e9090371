pub mod exactfield;
pub mod structures;
pub mod checker;
pub mod deriver;
pub mod cli;
