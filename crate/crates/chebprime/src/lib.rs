pub mod cli;
pub mod output;
pub mod parallel;
pub mod verify;
