pub mod cases;
pub mod config;
pub mod diagnostics;
pub mod error;
pub mod grp;
pub mod lambert;
pub mod mesh1d;
pub mod output;
pub mod quadrature;
pub mod riemann;
pub mod sweep;
pub mod roots;
pub mod solver2d;
pub mod thermo;

pub use error::{Error, Result};
pub use thermo::{ConsState1D, EosDerivatives, GasModel, PrimState1D};
