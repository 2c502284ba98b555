//! Compressed sparse storage, reverse Cuthill-McKee ordering and a
//! left-looking sparse LU with threshold partial pivoting.

mod csr;
mod lu;
mod ordering;

pub use csr::CsrMatrix;
pub use lu::{factorize, factorize_with, ColumnOrdering, Factorization};
pub use ordering::reverse_cuthill_mckee;
