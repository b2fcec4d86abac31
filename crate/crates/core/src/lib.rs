pub mod blaschke;
pub mod cli;
pub mod error;
pub mod fuzz;
pub mod hermitian;
pub mod io;
pub mod pick_problem;
pub mod realization;
pub mod schwarz_pick;
pub mod series;
pub mod uniqueness;
