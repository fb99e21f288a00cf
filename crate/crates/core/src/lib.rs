//! Space-with-walls structures on the universal cover of the suspension of a
//! free-by-free group `F_n ⋊_σ F_k`, computed on finite balls.

pub mod algebra;
pub mod rep;
pub mod cover;
pub mod cylinder;
pub mod walls;
pub mod geometry;
