//! `elc`: edge local complementation, graph orbits and code classification
//! from the command line. Vertex labels and column indices are 1-based.

mod input;

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use elc_core::census::{self, CensusOptions, CensusTable, RepSet};
use elc_core::code::{self, GenMatrix};
use elc_core::orbit::{self, OrbitOptions};
use elc_core::{canonical_key, io, Graph, Operation, Side};

use input::{GraphInput, MatrixInput, OutFormat};

#[derive(Debug, Parser)]
#[command(
    name = "elc",
    version,
    about = "Edge local complementation, graph orbits and binary code classification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Apply edge local complementation on the edge {U, V}
    Pivot(PivotArgs),
    /// Enumerate the ELC (or LC) orbit of a connected graph
    Orbit(OrbitArgs),
    /// Operations on binary linear codes given by a generator matrix
    Code(CodeArgs),
    /// Classify graphs into orbits and count codes
    Census(CensusArgs),
    /// Convert a graph between text formats
    Convert(ConvertArgs),
    /// List all connected graphs on N vertices up to isomorphism, as graph6
    Generate(GenerateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Def {
    /// Three local complementations, G*u*v*u
    LcCompose,
    /// Toggle edges between the neighbourhood classes, then swap u and v
    Classes,
    /// Bipartite pivot on adjacency rows, then swap u and v
    Bipartite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SideArg {
    Left,
    Right,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Self {
        match s {
            SideArg::Left => Side::Left,
            SideArg::Right => Side::Right,
        }
    }
}

#[derive(Debug, Args)]
struct PivotArgs {
    u: usize,
    v: usize,
    #[command(flatten)]
    input: GraphInput,
    #[arg(long = "def", value_enum, default_value_t = Def::Classes)]
    def: Def,
    /// Leave u and v in place: the result then corresponds to the code with
    /// coordinates u and v interchanged
    #[arg(long)]
    no_swap: bool,
    /// Output format; defaults to the input format
    #[arg(long, value_enum)]
    to: Option<OutFormat>,
    /// Side read as information set by `--to code`
    #[arg(long, value_enum, default_value_t = SideArg::Left)]
    side: SideArg,
}

#[derive(Debug, Args)]
struct OrbitArgs {
    #[command(flatten)]
    input: GraphInput,
    /// Enumerate labelled graphs instead of isomorphism classes
    #[arg(long)]
    labeled: bool,
    /// Use local complementation instead of edge local complementation
    #[arg(long, conflicts_with_all = ["labeled", "colored"])]
    lc: bool,
    /// Keep the two sides of a bipartite graph apart
    #[arg(long)]
    colored: bool,
    /// Print orbit sizes and per-side minimum degrees instead of the members
    #[arg(long)]
    stats: bool,
    /// Fail once the orbit has more than this many members
    #[arg(long)]
    cap: Option<usize>,
    /// Write the orbit dump to a file
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CodeArgs {
    #[command(subcommand)]
    action: CodeAction,
}

#[derive(Debug, Subcommand)]
enum CodeAction {
    /// Minimum distance
    Mindist {
        #[command(flatten)]
        matrix: MatrixInput,
        /// Enumerate all codewords instead of walking the ELC orbit
        #[arg(long)]
        brute: bool,
    },
    /// Number of information sets
    Infosets {
        #[command(flatten)]
        matrix: MatrixInput,
        /// Test every column subset instead of counting the labelled orbit
        #[arg(long)]
        brute: bool,
    },
    /// Decide equivalence with a second code
    Equiv {
        other: PathBuf,
        #[command(flatten)]
        matrix: MatrixInput,
    },
    /// Generator matrix of the dual code, in standard form
    Dual {
        #[command(flatten)]
        matrix: MatrixInput,
    },
    /// Standard form with its column permutation
    Standard {
        #[command(flatten)]
        matrix: MatrixInput,
    },
    /// Bipartite graph of the code
    Graph {
        #[command(flatten)]
        matrix: MatrixInput,
        #[arg(long, value_enum, default_value_t = OutFormat::Graph6)]
        to: OutFormat,
    },
    /// Parameters [n,k,d] and structural flags
    Summary {
        #[command(flatten)]
        matrix: MatrixInput,
    },
}

#[derive(Debug, Args)]
struct CensusArgs {
    #[command(subcommand)]
    mode: CensusMode,
}

#[derive(Debug, Subcommand)]
enum CensusMode {
    /// ELC orbits of connected bipartite graphs on 1..=N vertices, grown by extension
    Bipartite {
        n: usize,
        /// Also count the indecomposable codes carried by the orbits
        #[arg(long)]
        codes: bool,
        #[command(flatten)]
        common: CensusCommon,
    },
    /// Classify graph6 streams, one file per vertex count, each listing every
    /// connected graph on that many vertices
    Stream {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        #[command(flatten)]
        classify: Classify,
        #[command(flatten)]
        common: CensusCommon,
    },
    /// Classify all connected graphs on 1..=N vertices, generated internally
    General {
        n: usize,
        #[command(flatten)]
        classify: Classify,
        #[command(flatten)]
        common: CensusCommon,
    },
}

#[derive(Debug, Args)]
struct Classify {
    /// LC orbits instead of ELC orbits
    #[arg(long)]
    lc: bool,
    /// With --lc, count the ELC orbits inside each LC orbit
    #[arg(long, requires = "lc")]
    refine: bool,
}

#[derive(Debug, Args)]
struct CensusCommon {
    /// Worker threads; 0 uses one per core
    #[arg(long, env = "ELC_THREADS", default_value_t = 0)]
    threads: usize,
    /// Directory receiving the table and one representative file per level
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Lift the default size guards
    #[arg(long)]
    allow_large: bool,
}

impl CensusCommon {
    fn options(&self) -> CensusOptions {
        CensusOptions {
            threads: self.threads,
            allow_large: self.allow_large,
            ..Default::default()
        }
    }
}

#[derive(Debug, Args)]
struct ConvertArgs {
    #[command(flatten)]
    input: GraphInput,
    #[arg(long, value_enum)]
    to: OutFormat,
    /// Side read as information set by `--to code`
    #[arg(long, value_enum, default_value_t = SideArg::Left)]
    side: SideArg,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    n: usize,
    /// Only bipartite graphs
    #[arg(long)]
    bipartite: bool,
    #[arg(long, env = "ELC_THREADS", default_value_t = 0)]
    threads: usize,
    #[arg(long)]
    allow_large: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout
                .write_all(out.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return ExitCode::FAILURE;
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let msg = format!("{e:#}").replace('\n', " ");
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Pivot(a) => pivot(a),
        Command::Orbit(a) => orbit_cmd(a),
        Command::Code(a) => code_cmd(a.action),
        Command::Census(a) => census_cmd(a.mode),
        Command::Convert(a) => input::render(&a.input.read()?, a.to, a.side.into()),
        Command::Generate(a) => generate(a),
    }
}

fn pivot(a: PivotArgs) -> Result<String> {
    let g = a.input.read()?;
    let (u, v) = (input::vertex(a.u, &g)?, input::vertex(a.v, &g)?);
    if !g.has_edge(u, v) {
        bail!("{{{}, {}}} is not an edge", a.u, a.v);
    }
    let h = match (a.def, a.no_swap) {
        (Def::Classes, true) => g.elc_without_swap(u, v)?,
        (Def::Classes, false) => g.elc_classes(u, v)?,
        (Def::LcCompose, swap) => unswap(g.elc_via_lc(u, v)?, u, v, swap)?,
        (Def::Bipartite, swap) => {
            if !g.is_bipartite() {
                bail!("graph is not bipartite");
            }
            unswap(g.pivot_bipartite(u, v)?, u, v, swap)?
        }
    };
    input::render(&h, a.to.unwrap_or(a.input.format.into()), a.side.into())
}

fn unswap(g: Graph, u: usize, v: usize, no_swap: bool) -> Result<Graph> {
    Ok(if no_swap { g.swap_vertices(u, v)? } else { g })
}

fn orbit_cmd(a: OrbitArgs) -> Result<String> {
    let g = a.input.read()?;
    let opts = OrbitOptions {
        cap: a.cap,
        ..Default::default()
    };
    let coloring = if a.colored {
        Some(input::bipartition(&g)?)
    } else {
        None
    };
    let (op, name) = if a.lc {
        (Operation::Lc, "LC")
    } else {
        (Operation::Elc, "ELC")
    };
    let mut stats = String::new();
    let dump = if a.labeled {
        let members = orbit::elc_orbit_labeled_with(&g, &opts)?;
        if a.stats {
            let unlabeled = orbit::elc_orbit_unlabeled_with(&g, None, &opts)?;
            let _ = writeln!(stats, "size_unlabeled={}", unlabeled.report.size_unlabeled);
            let _ = writeln!(stats, "size_labeled={}", members.len());
        }
        let mut out = format!("# {name} labeled orbit: {} graphs\n", members.len());
        for m in &members {
            let _ = writeln!(out, "{}", io::to_graph6(m));
        }
        out
    } else {
        let orb = match op {
            Operation::Elc => orbit::elc_orbit_unlabeled_with(&g, coloring.as_ref(), &opts)?,
            Operation::Lc => orbit::lc_orbit_unlabeled_with(&g, &opts)?,
        };
        if a.stats {
            let _ = writeln!(stats, "size_unlabeled={}", orb.report.size_unlabeled);
        }
        let kind = if coloring.is_some() { " colored" } else { "" };
        let mut out = format!(
            "# {name}{kind} orbit: {} isomorphism classes\n",
            orb.report.size_unlabeled
        );
        let _ = writeln!(out, "{}", io::to_graph6(&orb.report.representative));
        let colorings = orb.colorings.as_ref();
        for (i, m) in orb.members.iter().enumerate() {
            let key = canonical_key(m, colorings.map(|c| &c[i]));
            if key != orb.report.canonical {
                let _ = writeln!(out, "{}", io::to_graph6(&key.graph()));
            }
        }
        out
    };
    if a.stats && !a.lc {
        if let Some(c) = g.bipartition() {
            let (l, r) = orbit::orbit_min_degrees(&g, &c)?;
            let show = |d: Option<usize>| d.map_or("-".to_string(), |x| x.to_string());
            let _ = writeln!(stats, "delta_left={}", show(l));
            let _ = writeln!(stats, "delta_right={}", show(r));
        }
    }
    if let Some(path) = &a.out {
        write_file(path, &dump)?;
        return Ok(stats);
    }
    Ok(if a.stats { stats } else { dump })
}

fn code_cmd(action: CodeAction) -> Result<String> {
    Ok(match action {
        CodeAction::Mindist { matrix, brute } => {
            let m = matrix.read()?;
            let d = if brute {
                code::min_distance_bruteforce(&m)?
            } else {
                code::min_distance_via_orbit(&m)?
            };
            format!("{d}\n")
        }
        CodeAction::Infosets { matrix, brute } => {
            let m = matrix.read()?;
            let c = if brute {
                code::information_sets_oracle(&m)?
            } else {
                code::information_sets_via_orbit(&m)?
            };
            format!("{c}\n")
        }
        CodeAction::Equiv { other, matrix } => {
            let (a, b) = (matrix.read()?, input::read_matrix_file(&other)?);
            if code::are_equivalent(&a, &b)? {
                "equivalent\n"
            } else {
                "not equivalent\n"
            }
            .to_string()
        }
        CodeAction::Dual { matrix } => {
            let m = matrix.read()?;
            code::write_standard_form(&code::dual(&m)?)
        }
        CodeAction::Standard { matrix } => code::write_standard_form(&matrix.read()?),
        CodeAction::Graph { matrix, to } => code_graph(&matrix.read()?, to)?,
        CodeAction::Summary { matrix } => format!("{}\n", code::summary(&matrix.read()?)?),
    })
}

fn code_graph(m: &GenMatrix, to: OutFormat) -> Result<String> {
    if let Some(&c) = m.zero_columns().first() {
        bail!("column {} is identically zero", c + 1);
    }
    let (g, _) = code::code_to_graph(m)?;
    let perm = code::standard_form(m).perm;
    let cols: Vec<String> = perm.iter().map(|c| (c + 1).to_string()).collect();
    let body = input::render(&g, to, Side::Left)?;
    Ok(match to {
        OutFormat::Dot => body,
        _ => format!("# columns: {}\n{body}", cols.join(" ")),
    })
}

fn census_cmd(mode: CensusMode) -> Result<String> {
    match mode {
        CensusMode::Bipartite { n, codes, common } => {
            let opts = common.options();
            let levels = census::classify_bipartite(n, &opts)?;
            let connected: Vec<u64> = levels.iter().map(|l| l.len() as u64).collect();
            let counts = if codes {
                Some(
                    levels
                        .iter()
                        .map(|l| census::count_codes(l, &opts))
                        .collect::<Result<Vec<_>, _>>()?,
                )
            } else {
                None
            };
            let table = CensusTable::from_connected(&connected, counts.as_deref())?.to_tsv();
            if let Some(dir) = &common.out_dir {
                write_levels(dir, &levels, &table)?;
                if let Some(cc) = &counts {
                    let mut text = String::from("n\tk\tcodes\n");
                    for c in cc {
                        for (k, x) in &c.per_dimension {
                            let _ = writeln!(text, "{}\t{k}\t{x}", c.n);
                        }
                    }
                    write_file(&dir.join("codes.tsv"), &text)?;
                }
            }
            Ok(table)
        }
        CensusMode::Stream {
            paths,
            classify,
            common,
        } => {
            let opts = common.options();
            let mut levels = Vec::new();
            for p in &paths {
                let text = input::read_source(Some(p))?;
                let graphs =
                    io::read_graph6_lines(&text).with_context(|| format!("in {}", p.display()))?;
                let level = classify_level(graphs, &classify, &opts)
                    .with_context(|| format!("in {}", p.display()))?;
                levels.push(level);
            }
            levels.sort_by_key(|l| l.n);
            finish_general(levels, &classify, &common)
        }
        CensusMode::General {
            n,
            classify,
            common,
        } => {
            let opts = common.options();
            if n > census::DEFAULT_GENERAL_GUARD && !opts.allow_large {
                return Err(census::CensusError::Guard {
                    n,
                    guard: census::DEFAULT_GENERAL_GUARD,
                }
                .into());
            }
            let mut levels = Vec::new();
            for k in 1..=n {
                let graphs = census::connected_graphs(k, &opts)?;
                levels.push(classify_level(graphs, &classify, &opts)?);
            }
            finish_general(levels, &classify, &common)
        }
    }
}

fn classify_level(graphs: Vec<Graph>, classify: &Classify, opts: &CensusOptions) -> Result<RepSet> {
    let op = if classify.lc {
        Operation::Lc
    } else {
        Operation::Elc
    };
    Ok(census::classify_stream(graphs, op, classify.refine, opts)?)
}

/// Table with columns n, i, t (when the levels run 1, 2, ..., N) and the
/// ELC refinement total when computed.
fn finish_general(
    levels: Vec<RepSet>,
    classify: &Classify,
    common: &CensusCommon,
) -> Result<String> {
    for w in levels.windows(2) {
        if w[0].n == w[1].n {
            bail!("two streams hold graphs on {} vertices", w[0].n);
        }
    }
    let connected: Vec<u64> = levels.iter().map(|l| l.len() as u64).collect();
    let contiguous = levels.iter().enumerate().all(|(i, l)| l.n == i + 1);
    let totals = if contiguous {
        Some(census::euler_transform(&connected)?)
    } else {
        None
    };
    let mut table = String::from("n\ti");
    if totals.is_some() {
        table.push_str("\tt");
    }
    if classify.refine {
        table.push_str("\ti_ELC");
    }
    table.push('\n');
    for (idx, l) in levels.iter().enumerate() {
        let _ = write!(table, "{}\t{}", l.n, l.len());
        if let Some(t) = &totals {
            let _ = write!(table, "\t{}", t[idx]);
        }
        if classify.refine {
            let sub: usize = l.orbits.iter().filter_map(|o| o.elc_suborbits).sum();
            let _ = write!(table, "\t{sub}");
        }
        table.push('\n');
    }
    if let Some(dir) = &common.out_dir {
        write_levels(dir, &levels, &table)?;
    }
    Ok(table)
}

fn write_levels(dir: &Path, levels: &[RepSet], table: &str) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    write_file(&dir.join("table.tsv"), table)?;
    for l in levels {
        write_file(&dir.join(format!("reps-{:02}.txt", l.n)), &l.to_text())?;
    }
    Ok(())
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn generate(a: GenerateArgs) -> Result<String> {
    let opts = CensusOptions {
        threads: a.threads,
        allow_large: a.allow_large,
        ..Default::default()
    };
    let graphs = if a.bipartite {
        census::connected_bipartite_graphs(a.n, &opts)?
    } else {
        census::connected_graphs(a.n, &opts)?
    };
    let mut out = String::new();
    for g in &graphs {
        out.push_str(&io::to_graph6(g));
        out.push('\n');
    }
    Ok(out)
}
