//! Exact symbolic computation toolkit for nested configurations of points in
//! the plane: sparse polynomial arithmetic over Q and F_p, Groebner engines
//! with Hilbert series, the determinantal fiber ideals of the Hilbert-Burch
//! family and their squarefree initial complex, Bott cohomology tables with
//! the associated degree computation, and punctual deformation families.

pub mod field;
pub mod vars;
pub mod monomial;
pub mod order;
pub mod poly;
pub mod groebner;
pub mod hilbert;
pub mod linalg;
pub mod srcomplex;
pub mod nest;
pub mod oracle;
pub mod tangent;
pub mod plane;
pub mod homology;
pub mod bott;
pub mod deform;
pub mod io;

pub use field::{scalar_parse, FieldKind, Scalar};
pub use monomial::Monomial;
pub use order::TermOrder;
pub use poly::{Bidegree, PolyError, Polynomial};
pub use vars::{VarName, VariableSet};
