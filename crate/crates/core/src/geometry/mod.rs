//! Domain types: vectors, origin-symmetric segments and zonotopes, orthonormal
//! frames and projections, linear maps, and even test functions on the sphere.

pub mod frame;
pub mod linmap;
pub mod segment;
pub mod testfn;
pub mod vector;
pub mod zonotope;

pub use frame::{project, project_zonotope, OrthonormalFrame};
pub use linmap::{linear_image, linear_image_segment, LinearMap};
pub use segment::Segment;
pub use testfn::TestFunction;
pub use vector::Vector;
pub use zonotope::Zonotope;
