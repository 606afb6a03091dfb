//! Test problems: synthetic quadratics with known conditioning, least
//! squares, logistic regression, inpainting and Poisson super-resolution.

pub mod design;
pub mod haar;
pub mod inpainting;
pub mod least_squares;
pub mod logistic;
pub mod operators;
pub mod poisson;
pub mod quadratic;

pub use design::Design;
pub use haar::{haar_transform, Direction, Haar1d, Haar2d, OrthogonalTransform};
pub use inpainting::{synthetic_image, InpaintingProblem};
pub use least_squares::LeastSquaresProblem;
pub use logistic::LogisticProblem;
pub use operators::{BlockDownsample, Convolution};
pub use poisson::PoissonSrProblem;
pub use quadratic::{make_quadratic_growth_test, QuadraticProblem};
