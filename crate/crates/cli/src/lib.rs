//! Command-line front end for `ssloc-core`.
//!
//! [`execute`] parses a full argument vector and returns the exit code with
//! the text destined for stdout and stderr, so the binary is a thin wrapper
//! and the whole interface is testable in-process.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::sync::Arc;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ssloc_core::complex::{build_ball, sub_vertex_lattices, super_vertex_lattices, ComplexKind};
use ssloc_core::fq::SymplecticSpace;
use ssloc_core::hermitian::{
    classify_space, standard_space, standard_vertex_lattice, HermitianLattice, HermitianSpace, LatticeRecord, Variant,
};
use ssloc_core::oe::FieldParams;
use ssloc_core::strata::weyl::{coxeter_element, dl_dimension, stratum_element, stratum_parabolic};
use ssloc_core::strata::{census, resolution_endpoint, t_chain, xbar_flags};
use ssloc_core::verify::{run_all, run_criterion, CriterionResult, DEFAULT_SEED};
use ssloc_core::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "ssloc", version, about = "Vertex lattices, their complexes and Deligne-Lusztig strata")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Hermitian spaces.
    #[command(subcommand)]
    Space(SpaceCmd),
    /// Vertex lattices.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Neighbours and balls in the vertex-lattice complexes.
    #[command(subcommand)]
    Complex(ComplexCmd),
    /// Points of the Deligne-Lusztig variety over F_{p^k}.
    #[command(subcommand)]
    Dl(DlCmd),
    /// Weyl group combinatorics.
    #[command(subcommand)]
    Weyl(WeylCmd),
    /// Run acceptance criteria: `all` or a criterion number 1-10.
    Verify {
        target: String,
        #[command(flatten)]
        opts: Opts,
    },
}

#[derive(Subcommand, Debug)]
enum SpaceCmd {
    /// Split or non-split class of a standard space.
    Classify(Opts),
}

#[derive(Subcommand, Debug)]
enum LatticeCmd {
    /// Type of a lattice (standard of type --t unless --input is given).
    Type(Opts),
    /// Dual lattice.
    Dual(Opts),
    /// Signed index [L : M], with M the dual of L unless --other is given.
    Index(Opts),
}

#[derive(Subcommand, Debug)]
enum ComplexCmd {
    /// Vertex lattices contained in L.
    Sub(Opts),
    /// Vertex lattices containing L.
    Super(Opts),
    /// Ball of radius --radius around L.
    Ball(Opts),
    /// Ball of radius --radius around L as Graphviz text.
    Dot(Opts),
}

#[derive(Subcommand, Debug)]
enum DlCmd {
    /// Point counts per stratum and component.
    Count(Opts),
    /// Stratum, chain and component of each point (or of point --index).
    Stratum(Opts),
    /// Points containing the rational isotropic subspace number --index of dimension --dim.
    Closure(Opts),
    /// Endpoint map from closure-condition flags.
    Resolve(Opts),
}

#[derive(Subcommand, Debug)]
enum WeylCmd {
    /// Dimensions of the strata from the Weyl group side.
    Dim(Opts),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Dot,
    Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    SplitEven,
    NonSplitEven,
    Odd,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::SplitEven => Variant::SplitEven,
            VariantArg::NonSplitEven => Variant::NonSplitEven,
            VariantArg::Odd => Variant::Odd,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ComplexArg {
    T,
    L,
}

#[derive(Args, Debug, Clone)]
struct Opts {
    #[arg(long, default_value_t = 3)]
    p: u64,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, value_enum)]
    variant: Option<VariantArg>,
    #[arg(long, default_value_t = 1)]
    k: u32,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long, default_value_t = 1)]
    radius: usize,
    /// p-adic digits carried by O_E elements.
    #[arg(long, default_value_t = 8)]
    precision: u32,
    /// Unit ε with π² = εp.
    #[arg(long, default_value_t = 1)]
    epsilon: i64,
    /// Cap on enumerated candidates.
    #[arg(long, default_value_t = 1_000_000)]
    budget: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    output: OutputFormat,
    #[arg(long, value_enum, default_value_t = ComplexArg::T)]
    complex: ComplexArg,
    /// Dimension of W for `dl closure`.
    #[arg(long)]
    dim: Option<usize>,
    /// Position in the canonical enumeration order.
    #[arg(long)]
    index: Option<usize>,
    /// Lattice JSON {scale, basis} to use instead of a standard lattice.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Second lattice JSON for `lattice index`.
    #[arg(long)]
    other: Option<PathBuf>,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Execution {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    Budget(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::SearchTooLarge { .. } | Error::PrecisionExhausted(_) | Error::GroupTooLarge(_) => {
                Failure::Budget(e.to_string())
            }
            other => Failure::Usage(other.to_string()),
        }
    }
}

type Outcome = std::result::Result<String, Failure>;

/// Run the command line `argv` (including the program name).
pub fn execute<I, T>(argv: I) -> Execution
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    Execution { code: EXIT_OK, stdout: text, stderr: String::new() }
                }
                _ => Execution { code: EXIT_USAGE, stdout: String::new(), stderr: text },
            };
        }
    };
    match dispatch(cli.command) {
        Ok(stdout) => Execution { code: EXIT_OK, stdout, stderr: String::new() },
        Err(Failure::Verification(stdout)) => {
            Execution { code: EXIT_VERIFY_FAILED, stdout, stderr: "verification failed\n".into() }
        }
        Err(Failure::Usage(msg)) => Execution { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {msg}\n") },
        Err(Failure::Budget(msg)) => Execution { code: EXIT_BUDGET, stdout: String::new(), stderr: format!("error: {msg}\n") },
    }
}

fn dispatch(cmd: Command) -> Outcome {
    match cmd {
        Command::Space(SpaceCmd::Classify(o)) => space_classify(&o),
        Command::Lattice(c) => lattice_cmd(c),
        Command::Complex(c) => complex_cmd(c),
        Command::Dl(c) => dl_cmd(c),
        Command::Weyl(WeylCmd::Dim(o)) => weyl_dim(&o),
        Command::Verify { target, opts } => verify(&target, &opts),
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn render(o: &Opts, value: &Value, table: impl FnOnce() -> String) -> Outcome {
    match o.output {
        OutputFormat::Json => Ok(serde_json::to_string_pretty(value).expect("JSON values serialize") + "\n"),
        OutputFormat::Table => Ok(table()),
        OutputFormat::Dot => Err(usage("--output dot is only available for complex balls")),
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("records serialize")
}

fn hermitian_space(o: &Opts) -> std::result::Result<Arc<HermitianSpace>, Failure> {
    let n = o.n.ok_or_else(|| usage("--n is required"))?;
    let variant: Variant = match o.variant {
        Some(v) => v.into(),
        None if n % 2 == 1 => Variant::Odd,
        None => Variant::SplitEven,
    };
    let params = FieldParams::new(o.p, o.epsilon, o.precision)?;
    Ok(standard_space(n, variant, &params)?.into_arc())
}

fn read_lattice(space: &Arc<HermitianSpace>, path: &PathBuf) -> std::result::Result<HermitianLattice, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let rec: LatticeRecord = serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    Ok(HermitianLattice::from_record(space, &rec)?)
}

fn lattice(o: &Opts) -> std::result::Result<HermitianLattice, Failure> {
    let space = hermitian_space(o)?;
    match &o.input {
        Some(path) => read_lattice(&space, path),
        None => Ok(standard_vertex_lattice(&space, o.t.unwrap_or(0))?),
    }
}

fn space_classify(o: &Opts) -> Outcome {
    let space = hermitian_space(o)?;
    let class = classify_space(&space)?;
    let value = json!({
        "label": class.label,
        "disc_unit": class.disc_unit,
        "p": o.p,
        "n": space.dim(),
        "variant": space.variant(),
    });
    render(o, &value, || format!("{:?} (discriminant unit {})\n", class.label, class.disc_unit))
}

fn lattice_json(l: &HermitianLattice) -> Value {
    to_value(&l.to_record())
}

fn lattice_cmd(c: LatticeCmd) -> Outcome {
    match c {
        LatticeCmd::Type(o) => {
            let l = lattice(&o)?;
            let t = l.vertex_type()?;
            render(&o, &json!({"type": t, "lattice": lattice_json(&l)}), || format!("type {t}\n"))
        }
        LatticeCmd::Dual(o) => {
            let d = lattice(&o)?.dual()?;
            render(&o, &json!({"dual": lattice_json(&d)}), || format!("{d:?}\n"))
        }
        LatticeCmd::Index(o) => {
            let l = lattice(&o)?;
            let m = match &o.other {
                Some(path) => read_lattice(l.space(), path)?,
                None => l.dual()?,
            };
            let index = l.index(&m)?;
            render(&o, &json!({"index": index}), || format!("{index}\n"))
        }
    }
}

fn neighbour_list(o: &Opts, list: &[(HermitianLattice, usize)]) -> Outcome {
    let value = Value::Array(list.iter().map(|(m, t)| json!({"type": t, "lattice": lattice_json(m)})).collect());
    render(o, &value, || {
        let mut s = String::new();
        for (m, t) in list {
            let _ = writeln!(s, "type {t}: scale {} basis {:?}", m.scale(), m.to_record().basis);
        }
        s
    })
}

fn complex_cmd(c: ComplexCmd) -> Outcome {
    match c {
        ComplexCmd::Sub(o) => neighbour_list(&o, &sub_vertex_lattices(&lattice(&o)?, o.budget)?),
        ComplexCmd::Super(o) => neighbour_list(&o, &super_vertex_lattices(&lattice(&o)?, o.budget)?),
        ComplexCmd::Ball(o) => ball(&o, false),
        ComplexCmd::Dot(o) => ball(&o, true),
    }
}

fn ball(o: &Opts, dot: bool) -> Outcome {
    let kind = match o.complex {
        ComplexArg::T => ComplexKind::T,
        ComplexArg::L => ComplexKind::L,
    };
    let g = build_ball(&lattice(o)?, o.radius, kind, o.budget)?;
    match o.output {
        _ if dot => Ok(g.to_dot()),
        OutputFormat::Dot => Ok(g.to_dot()),
        OutputFormat::Table => Ok(format!("{} nodes, {} edges\n", g.nodes.len(), g.edges.len())),
        OutputFormat::Json => Ok(serde_json::to_string_pretty(&g.to_record()).expect("graph serializes") + "\n"),
    }
}

fn symplectic(o: &Opts) -> std::result::Result<SymplecticSpace, Failure> {
    let m = o.m.ok_or_else(|| usage("--m is required"))?;
    if m == 0 {
        return Err(usage("--m must be at least 1"));
    }
    let p = u32::try_from(o.p).map_err(|_| usage("--p is too large"))?;
    Ok(SymplecticSpace::standard(p, m)?)
}

fn dl_cmd(c: DlCmd) -> Outcome {
    match c {
        DlCmd::Count(o) => {
            let v = symplectic(&o)?;
            let report = census(&v, o.k, o.budget)?.report(o.budget)?;
            render(&o, &to_value(&report), || {
                let mut s = format!("total {}\n", report.total);
                for st in &report.strata {
                    let _ = writeln!(s, "S_{}: {} points in {} components", st.i, st.count, st.components.len());
                }
                s
            })
        }
        DlCmd::Stratum(o) => {
            let v = symplectic(&o)?;
            let c = census(&v, o.k, o.budget)?;
            let chosen: Vec<_> = match o.index {
                Some(i) => vec![c.points.get(i).ok_or_else(|| usage(format!("only {} points", c.points.len())))?],
                None => c.points.iter().collect(),
            };
            let mut rows = Vec::new();
            for pt in &chosen {
                let tc = t_chain(&v, &pt.point)?;
                rows.push(json!({
                    "point": to_value(&pt.point.to_record()),
                    "stratum": pt.stratum,
                    "component": to_value(&pt.component.to_record()),
                    "t_chain": tc.dims,
                }));
            }
            render(&o, &Value::Array(rows), || {
                chosen.iter().map(|pt| format!("{:?}: S_{}\n", pt.point, pt.stratum)).collect()
            })
        }
        DlCmd::Closure(o) => {
            let v = symplectic(&o)?;
            let dim = o.dim.unwrap_or(0);
            if dim > v.m() {
                return Err(usage("--dim exceeds m"));
            }
            let ws = v.rational_isotropic(dim, o.budget)?;
            let idx = o.index.unwrap_or(0);
            let w = ws.get(idx).ok_or_else(|| usage(format!("only {} rational isotropic subspaces", ws.len())))?;
            let c = census(&v, o.k, o.budget)?;
            let pts = c.closure_points(w)?;
            let quotient = v.quotient(w)?;
            let qc = census(quotient.space(), o.k, o.budget)?;
            let mut strata = vec![0usize; v.m() + 1];
            let mut preserved = true;
            for pt in &pts {
                strata[pt.stratum] += 1;
                let image = quotient.project(&pt.point)?;
                preserved &= qc.points.iter().any(|q| q.point == image && q.stratum == pt.stratum);
            }
            let value = json!({
                "W": to_value(&w.to_record()),
                "count": pts.len(),
                "strata": strata,
                "quotient_count": qc.points.len(),
                "bijection": preserved && pts.len() == qc.points.len(),
            });
            render(&o, &value, || format!("{} points, quotient has {}\n", pts.len(), qc.points.len()))
        }
        DlCmd::Resolve(o) => {
            let v = symplectic(&o)?;
            let c = census(&v, o.k, o.budget)?;
            let flags = xbar_flags(&v, o.k, o.budget)?;
            let mut fibres = std::collections::BTreeMap::new();
            for f in &flags {
                *fibres.entry(resolution_endpoint(f).clone()).or_insert(0usize) += 1;
            }
            let surjective = c.points.iter().all(|pt| fibres.contains_key(&pt.point)) && fibres.len() == c.points.len();
            let top: Vec<_> = c.points.iter().filter(|pt| pt.stratum == v.m()).collect();
            let injective_top = top.iter().all(|pt| fibres.get(&pt.point) == Some(&1));
            let value = json!({
                "flags": flags.len(),
                "points": c.points.len(),
                "image": fibres.len(),
                "top_stratum": top.len(),
                "surjective": surjective,
                "bijective_over_top": injective_top,
            });
            render(&o, &value, || format!("{} flags onto {} of {} points\n", flags.len(), fibres.len(), c.points.len()))
        }
    }
}

fn weyl_dim(o: &Opts) -> Outcome {
    let m = o.m.ok_or_else(|| usage("--m is required"))?;
    let mut rows = Vec::new();
    for i in 0..=m {
        let w = stratum_element(m, i);
        let parabolic = stratum_parabolic(m, i);
        let d = dl_dimension(&parabolic, &w)?;
        rows.push(json!({"i": i, "w": w.images(), "parabolic": parabolic, "dim": d.dim}));
    }
    let cox = coxeter_element(m).length();
    let value = json!({"m": m, "coxeter_length": cox, "strata": rows});
    render(o, &value, || {
        let mut s = format!("coxeter length {cox}\n");
        for r in &rows {
            let _ = writeln!(s, "i={} dim={}", r["i"], r["dim"]);
        }
        s
    })
}

fn verify(target: &str, o: &Opts) -> Outcome {
    let results: Vec<CriterionResult> = if target == "all" {
        run_all(o.seed)
    } else {
        let id: u8 = target.parse().map_err(|_| usage(format!("unknown criterion {target:?}")))?;
        vec![run_criterion(id, o.seed)?]
    };
    let mut out = String::new();
    for r in &results {
        let _ = writeln!(out, "{r}");
    }
    if results.iter().all(|r| r.passed) {
        Ok(out)
    } else {
        Err(Failure::Verification(out))
    }
}
