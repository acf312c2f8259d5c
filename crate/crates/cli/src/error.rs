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


use std::path::PathBuf;

use plb_algebra::AlgebraError;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),

    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] plb_core::Error),

    #[error(transparent)]
    Algebra(#[from] AlgebraError),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn file(path: impl Into<PathBuf>, source: std::io::Error) -> CliError {
        CliError::File {
            path: path.into(),
            source,
        }
    }

    /// Process exit status: 1 usage or I/O, 2 domain or precondition,
    /// 3 resource cap.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::File { .. } | CliError::Json(_) => 1,
            CliError::Core(e) => core_code(e),
            CliError::Algebra(e) => match e {
                AlgebraError::Resource(_) => 3,
                AlgebraError::Io(_) => 1,
                AlgebraError::Graph(g) => core_code(g),
                _ => 2,
            },
        }
    }
}

fn core_code(e: &plb_core::Error) -> i32 {
    use plb_core::Error;
    match e {
        Error::Io(_) | Error::Usage(_) => 1,
        Error::Parse { .. } | Error::Domain(_) | Error::Precondition(_) => 2,
        Error::Resource(_) => 3,
    }
}
