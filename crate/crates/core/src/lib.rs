//! Chemical reaction networks in the plane: exact polynomial systems,
//! mass-action realization, algebraic limit cycle constructions, curve
//! tracing and trajectory integration.

pub mod construct;
pub mod crn;
pub mod curves;
pub mod poly;
pub mod presets;
pub mod realize;
pub mod sim;
