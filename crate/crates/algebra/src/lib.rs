// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Exact linear algebra over GF(p).

pub mod closure;
pub mod dense;
pub mod error;
pub mod field;
pub mod frobenius;
pub mod hankel;
pub mod lanczos;
pub mod matching;
pub mod operator;
pub mod pagerank;
pub mod partition;
pub mod schur;
pub mod sparse;
pub mod tridiagonal;

pub use dense::{DenseMatrix, LuFactors};
pub use error::{AlgebraError, Result};
pub use field::{PrimeField, MERSENNE_61};
pub use operator::LinearOperator;
pub use partition::BlockPartition;
pub use schur::{SchurFactorization, SolveStats};
pub use sparse::{SparseMatrix, Symmetry};
