//! Reading graphs and generator matrices from inline arguments, files or
//! standard input, and rendering graphs in the supported text formats.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use elc_core::code::{self, GenMatrix};
use elc_core::{io, Coloring, Graph, Side};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InFormat {
    #[value(name = "graph6", alias = "g6")]
    Graph6,
    Edges,
    #[value(name = "adj", alias = "matrix")]
    Adj,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    #[value(name = "graph6", alias = "g6")]
    Graph6,
    Edges,
    #[value(name = "adj", alias = "matrix")]
    Adj,
    Dot,
    /// Generator matrix of the code of a bipartite graph.
    Code,
}

impl From<InFormat> for OutFormat {
    fn from(f: InFormat) -> Self {
        match f {
            InFormat::Graph6 => OutFormat::Graph6,
            InFormat::Edges => OutFormat::Edges,
            InFormat::Adj => OutFormat::Adj,
        }
    }
}

#[derive(Debug, Args)]
pub struct GraphInput {
    /// Graph given inline; with --format edges or adj, ';' separates lines
    #[arg(short, long, conflicts_with = "input")]
    pub graph: Option<String>,
    /// File holding the graph; `-` or no source reads standard input
    #[arg(short, long)]
    pub input: Option<PathBuf>,
    #[arg(short, long, value_enum, default_value_t = InFormat::Graph6)]
    pub format: InFormat,
}

impl GraphInput {
    pub fn read(&self) -> Result<Graph> {
        let text = match &self.graph {
            Some(s) => s.replace(';', "\n"),
            None => read_source(self.input.as_deref())?,
        };
        parse_graph(&text, self.format)
    }
}

#[derive(Debug, Args)]
pub struct MatrixInput {
    /// Generator matrix given inline, rows separated by ';'
    #[arg(short, long, conflicts_with = "input")]
    pub matrix: Option<String>,
    /// File holding the generator matrix; `-` or no source reads standard input
    #[arg(short, long)]
    pub input: Option<PathBuf>,
}

impl MatrixInput {
    pub fn read(&self) -> Result<GenMatrix> {
        let text = match &self.matrix {
            Some(s) => s.replace(';', "\n"),
            None => read_source(self.input.as_deref())?,
        };
        Ok(code::parse_matrix(&text)?)
    }
}

pub fn read_source(path: Option<&Path>) -> Result<String> {
    match path {
        Some(p) if p != Path::new("-") => {
            fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()))
        }
        _ => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .context("cannot read standard input")?;
            Ok(s)
        }
    }
}

pub fn read_matrix_file(path: &Path) -> Result<GenMatrix> {
    Ok(code::parse_matrix(&read_source(Some(path))?)?)
}

pub fn parse_graph(text: &str, format: InFormat) -> Result<Graph> {
    Ok(match format {
        InFormat::Graph6 => {
            let mut graphs = io::read_graph6_lines(text)?;
            match graphs.len() {
                1 => graphs.pop().expect("one graph"),
                0 => bail!("no graph6 line in input"),
                k => bail!("expected one graph, found {k} graph6 lines"),
            }
        }
        InFormat::Edges => io::from_edge_list(text)?,
        InFormat::Adj => io::from_adjacency_matrix(text)?,
    })
}

/// Renders `g`; the code format takes the generator matrix from `side`,
/// vertex 1 lying on the left.
pub fn render(g: &Graph, format: OutFormat, side: Side) -> Result<String> {
    Ok(match format {
        OutFormat::Graph6 => format!("{}\n", io::to_graph6(g)),
        OutFormat::Edges => io::to_edge_list(g),
        OutFormat::Adj => io::to_adjacency_matrix(g),
        OutFormat::Dot => io::to_dot(g, g.bipartition().as_ref()),
        OutFormat::Code => {
            let c = bipartition(g)?;
            code::graph_to_code(g, &c, side)?.to_string()
        }
    })
}

pub fn bipartition(g: &Graph) -> Result<Coloring> {
    g.bipartition().context("graph is not bipartite")
}

/// Converts a 1-based vertex label from the command line.
pub fn vertex(label: usize, g: &Graph) -> Result<usize> {
    if label == 0 || label > g.n() {
        bail!("vertex {label} out of range 1..={}", g.n());
    }
    Ok(label - 1)
}
