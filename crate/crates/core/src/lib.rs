pub mod bounds;
pub mod expr;
pub mod geometry;
pub mod groups3d;
pub mod planar;
pub mod presets;
pub mod screw;
pub mod stereohedron;
