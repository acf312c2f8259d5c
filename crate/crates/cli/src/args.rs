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


//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use plb_algebra::MERSENNE_61;
use plb_core::matmul::MulStrategy;
use plb_core::plb::FitObjective;
use plb_core::{DegreeSide, LoadMode};

use crate::bench::Suite;

#[derive(Debug, Parser)]
#[command(name = "plb", version, about = "Power-law-bounded graph analysis and algorithms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit PLB parameters to a degree distribution.
    Fit(FitArgs),
    /// Check a degree distribution against given PLB parameters.
    Check(CheckArgs),
    /// Smallest c2 for which the graph has PLB neighborhoods.
    C2(C2Args),
    /// Generate an erased-configuration-model graph.
    Gen(GenArgs),
    /// Count triangles.
    Triangles(TrianglesArgs),
    /// Maximum clique.
    Clique(CliqueArgs),
    /// Transitive closure of a directed graph.
    Tc(TcArgs),
    /// Determinant over a prime field.
    Det(MatrixArgs),
    /// Solve `M x = v` over a prime field.
    Solve(SolveArgs),
    /// Explicit inverse over a prime field.
    Inverse(InverseArgs),
    /// Perfect matching test and search.
    Matching(MatchingArgs),
    /// PageRank by the stochastic complement.
    Pagerank(PagerankArgs),
    /// Scaling benchmark over generated graphs.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Undirected,
    Directed,
    DirectedAsUndirected,
}

impl From<Mode> for LoadMode {
    fn from(m: Mode) -> LoadMode {
        match m {
            Mode::Undirected => LoadMode::Undirected,
            Mode::Directed => LoadMode::Directed,
            Mode::DirectedAsUndirected => LoadMode::DirectedAsUndirected,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Side {
    Total,
    Out,
}

impl From<Side> for DegreeSide {
    fn from(s: Side) -> DegreeSide {
        match s {
            Side::Total => DegreeSide::Total,
            Side::Out => DegreeSide::Out,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Objective {
    Tightest,
    MaxAlpha,
}

impl From<Objective> for FitObjective {
    fn from(o: Objective) -> FitObjective {
        match o {
            Objective::Tightest => FitObjective::Tightest,
            Objective::MaxAlpha => FitObjective::MaxAlpha,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Strategy {
    Classical,
    Strassen,
}

impl From<Strategy> for MulStrategy {
    fn from(s: Strategy) -> MulStrategy {
        match s {
            Strategy::Classical => MulStrategy::Classical,
            Strategy::Strassen => MulStrategy::Strassen,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PipelineChoice {
    Auto,
    Symmetric,
    General,
}

#[derive(Debug, Args)]
pub struct GraphInput {
    /// Edge list, one `u v` pair per line.
    pub input: PathBuf,
    /// How to read the edge list; each verb has its own default.
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
}

/// PLB parameters given on the command line.
#[derive(Debug, Args)]
pub struct PlbArgs {
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub t: f64,
    #[arg(long, default_value_t = 5.0)]
    pub c1: f64,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub graph: GraphInput,
    /// Read `degree count` pairs instead of an edge list.
    #[arg(long)]
    pub histogram: bool,
    #[arg(long, value_enum, default_value_t = Side::Total)]
    pub side: Side,
    #[arg(long, default_value_t = 5.0)]
    pub c1_max: f64,
    #[arg(long, value_enum, default_value_t = Objective::Tightest)]
    pub objective: Objective,
    /// Also fit c2 (edge-list input only).
    #[arg(long)]
    pub with_c2: bool,
    /// Write plot data (x, observed, bound_def31, bound_corollary) here.
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub graph: GraphInput,
    #[arg(long)]
    pub histogram: bool,
    #[arg(long, value_enum, default_value_t = Side::Total)]
    pub side: Side,
    #[command(flatten)]
    pub plb: PlbArgs,
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct C2Args {
    #[command(flatten)]
    pub graph: GraphInput,
    /// Parameters to test against; fitted from the graph when omitted.
    #[command(flatten)]
    pub plb: PlbArgs,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub directed: bool,
    #[arg(short, long)]
    pub output: PathBuf,
    /// Sidecar JSON path; defaults to the output path with `.json` appended.
    #[arg(long)]
    pub sidecar: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TrianglesArgs {
    #[command(flatten)]
    pub graph: GraphInput,
    /// Split the count at a degree threshold and use matrix products on the
    /// high-degree part.
    #[arg(long)]
    pub hybrid: bool,
    #[arg(long)]
    pub delta: Option<usize>,
    #[command(flatten)]
    pub plb: PlbArgs,
    /// Matrix multiplication exponent used in the threshold formula.
    #[arg(long)]
    pub omega: Option<f64>,
    #[arg(long, value_enum, default_value_t = Strategy::Classical)]
    pub strategy: Strategy,
    /// Use the threshold for graphs with PLB neighborhoods.
    #[arg(long)]
    pub neighborhoods: bool,
    /// Write `vertex,triangles` rows here.
    #[arg(long)]
    pub per_vertex: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CliqueArgs {
    #[command(flatten)]
    pub graph: GraphInput,
    /// Largest out-neighborhood searched before giving up.
    #[arg(long, default_value_t = plb_core::counting::DEFAULT_CLIQUE_CAP)]
    pub cap: usize,
}

#[derive(Debug, Args)]
pub struct TcArgs {
    #[command(flatten)]
    pub graph: GraphInput,
    #[arg(long)]
    pub k: Option<usize>,
    #[command(flatten)]
    pub plb: PlbArgs,
    /// Write the closure as an edge list here.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MatrixArgs {
    /// Matrix Market file, or an edge list whose pattern is filled with
    /// random field elements.
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    #[arg(long)]
    pub k: Option<usize>,
    #[command(flatten)]
    pub plb: PlbArgs,
    #[arg(long, default_value_t = 3.0)]
    pub omega: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = MERSENNE_61)]
    pub field_p: u64,
    #[arg(long, value_enum, default_value_t = PipelineChoice::Auto)]
    pub pipeline: PipelineChoice,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub matrix: MatrixArgs,
    /// Right-hand side, one field element per line; random when omitted.
    #[arg(long)]
    pub rhs: Option<PathBuf>,
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct InverseArgs {
    #[command(flatten)]
    pub matrix: MatrixArgs,
    /// Matrix Market output.
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct MatchingArgs {
    #[command(flatten)]
    pub graph: GraphInput,
    #[arg(long)]
    pub k: Option<usize>,
    #[command(flatten)]
    pub plb: PlbArgs,
    #[arg(long, default_value_t = 3.0)]
    pub omega: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = MERSENNE_61)]
    pub field_p: u64,
    /// Also construct a matching.
    #[arg(long)]
    pub find: bool,
    /// Write the matching edges here (implies --find).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PagerankArgs {
    #[command(flatten)]
    pub graph: GraphInput,
    #[arg(long, default_value_t = plb_algebra::pagerank::DEFAULT_DAMPING)]
    pub c: f64,
    #[arg(long, default_value_t = plb_algebra::pagerank::DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long)]
    pub k: Option<usize>,
    #[command(flatten)]
    pub plb: PlbArgs,
    #[arg(short, long)]
    pub output: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    /// Graph sizes; defaults depend on the suite.
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = vec![2.5])]
    pub alpha: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_values_t = vec![1u64])]
    pub seeds: Vec<u64>,
    /// Timed repetitions per point, after one untimed warm-up.
    #[arg(long, default_value_t = 3)]
    pub reps: usize,
    /// Raw rows.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Slope summary CSV.
    #[arg(long)]
    pub slopes: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}
