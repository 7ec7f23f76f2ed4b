//! Jacobi diagrams, their legal orientations and Lie-algebraic weights.

pub mod canon;
pub mod corpus;
pub mod diagram;
pub mod error;
pub mod geom;
pub mod lie;
pub mod matrix;
pub mod orient;
pub mod poly;
pub mod rational;
pub mod sigma;
pub mod sum;
pub mod tensor;
pub mod weights;

pub use canon::{canonicalize, canonicalize_directed, Canonical, DiagramKey};
pub use diagram::{AnyDiagram, DirectedJacobiDiagram, JacobiDiagram, Skeleton};
pub use error::{Error, Result};
pub use rational::Q;
pub use sum::DiagramSum;
