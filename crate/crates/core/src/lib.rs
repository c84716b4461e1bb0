pub mod analytic;
pub mod checks;
pub mod cli;
pub mod coeff;
pub mod error;
mod expand;
pub mod exponent;
pub mod oexp;
pub mod parse;
pub mod real;
pub mod series;
pub mod session;
pub mod valuation;

pub use coeff::{Coeff, CoeffMode, Tolerance};
pub use error::{Error, Result};
pub use exponent::{Bound, Exponent, SubgroupBasis};
pub use series::{Context, LeadingTerm, Series};
