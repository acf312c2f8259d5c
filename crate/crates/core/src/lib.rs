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

//! Power-law-bounded (PLB) graph toolkit: ingestion, degree statistics,
//! PLB parameter checking and fitting, erased configuration model
//! generation, and degree-ordered triangle and clique algorithms.

pub mod counting;
pub mod error;
pub mod generator;
pub mod graph;
pub mod matmul;
pub mod orient;
pub mod plb;

pub use error::{Error, Result};
pub use graph::{DegreeHistogram, DegreeSide, Graph, LoadMode};
pub use orient::OrientedGraph;
pub use plb::PlbParams;
