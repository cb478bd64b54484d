pub mod bidegree;
pub mod bockstein;
pub mod element;
pub mod error;
pub mod integral;
pub mod linalg;
pub mod monomial;
pub mod presentation;
pub mod prime;
pub mod report;
pub mod scheme;
pub mod steenrod;
pub mod text;
pub mod verify;

pub use bidegree::Bidegree;
pub use element::{Algebra, Ambient, Element, RawTerm};
pub use error::{AlgebraError, Result};
pub use monomial::{CoeffGen, CoeffMonomial, Monomial, SteenrodMonomial, TauSet};
pub use prime::Prime;
pub use scheme::{Scheme, SchemeId};
pub use linalg::{FpBasis, FpMatrix, ImageBasis};
pub use text::parse_element;
pub use steenrod::{basis, eta, BasisIndex, BidegreeBasis, Conjugation, MzEmbedding};
pub use bockstein::{beta, y, Block, BocksteinReport, BocksteinRow};
pub use integral::{IntCoeffRing, IntElement, IntMonomial, WTable};
pub use report::{Check, Status, SuiteReport};
