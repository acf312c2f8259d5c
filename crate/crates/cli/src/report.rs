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


use std::io::Write;
use std::path::Path;

use plb_core::PlbParams;
use serde::Serialize;
use serde_json::{Map, Value};

/// Version of `schema/run_report.schema.json` this crate emits.
pub const SCHEMA_VERSION: &str = "1.0.0";

#[derive(Debug, Clone, Serialize)]
pub struct InputInfo {
    pub path: String,
    /// `edges`, `histogram` or `matrix-market`.
    pub format: String,
    pub n: usize,
    /// Edges, histogram mass or stored entries, depending on `format`.
    pub m: usize,
    pub directed: bool,
}

/// One JSON object per invocation. Everything except `wall_time_ms` and
/// `peak_memory_kb` is a function of the inputs and the seed.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema_version: &'static str,
    pub command: String,
    pub input: Option<InputInfo>,
    pub plb_params: Option<PlbParams>,
    pub params: Map<String, Value>,
    pub result: Value,
    pub wall_time_ms: f64,
    pub peak_memory_kb: Option<u64>,
}

impl RunReport {
    pub fn new(command: &str) -> RunReport {
        RunReport {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            input: None,
            plb_params: None,
            params: Map::new(),
            result: Value::Object(Map::new()),
            wall_time_ms: 0.0,
            peak_memory_kb: None,
        }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        self.params.insert(key.to_string(), v);
    }

    pub fn write<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        serde_json::to_writer_pretty(&mut w, self)?;
        writeln!(w)
    }
}

pub fn path_string(p: &Path) -> String {
    p.to_string_lossy().into_owned()
}

/// High-water resident set size from `/proc/self/status`, where available.
pub fn peak_memory_kb() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    status
        .lines()
        .find_map(|l| l.strip_prefix("VmHWM:"))
        .and_then(|rest| rest.split_whitespace().next())
        .and_then(|v| v.parse().ok())
}
