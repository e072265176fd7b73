mod divergence;
mod probe;

pub use divergence::*;
pub use probe::*;
