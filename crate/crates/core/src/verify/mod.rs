mod dirichlet;
mod holo;
mod inequalities;
mod maximal;
mod report;

pub use dirichlet::*;
pub use holo::*;
pub use inequalities::*;
pub use maximal::*;
pub use report::*;
