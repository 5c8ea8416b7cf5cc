//! Exact bounded cohomology of finite groupoids with normed coefficients.

pub mod amenability;
pub mod coefficients;
pub mod cohomology;
pub mod exact;
pub mod groupoid;
pub mod homalg;
pub mod io;
pub mod limits;
pub mod resolutions;

pub use limits::Limits;
