//! Exact construction and factorization of the quadratic Misiurewicz-Thurston
//! polynomials, plus numerical location of the parameters they encode.

pub mod arith;
pub mod factor;
pub mod family;
pub mod par;
pub mod poly;
pub mod render;
pub mod roots;

pub use arith::CountRecord;
pub use factor::{FactorEngine, FactorError, FactorTable};
pub use family::{Family, FamilyError, FamilyIndex};
pub use par::Exec;
pub use poly::{Degree, IntPoly};
pub use render::{escape_time, render, Escape, Image, PlotSpec};
pub use roots::{find_roots, orbit_classify, points_of_order, Kind, ParamPoint, RootError};
