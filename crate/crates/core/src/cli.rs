//! `qonc` command-line front end.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 invalid netlist,
//! 3 algebraic loop (well-posedness), 4 check failed or unsupported request,
//! 5 singular frequency.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::value::RawValue;
use sha2::{Digest, Sha256};

use crate::analysis::{
    check_realizability, stability, FrequencyResponse, OmegaGrid, RealizabilityReport,
    DEFAULT_TOLERANCE, DEFAULT_UNITARITY_TOLERANCE,
};
use crate::compile::{
    compile_active, compile_passive, compile_slh_passive, Network, WellPosedness,
};
use crate::digraph::{to_dot, NodeTable};
use crate::error::Error;
use crate::model::{SlhModel, StateSpaceModel};
use crate::netlist::parse_netlist;
use crate::scalar::CMatrix;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NOT_WELL_POSED: i32 = 3;
pub const EXIT_CHECK_FAILED: i32 = 4;
pub const EXIT_SINGULAR_FREQUENCY: i32 = 5;

pub const TOLERANCE_ENV: &str = "QONC_TOLERANCE";

#[derive(Debug, Parser)]
#[command(
    name = "qonc",
    version,
    about = "Compile linear quantum optical networks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Emit the QSDE and/or SLH matrices of a network.
    Compile {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = ModelKind::Both)]
        model: ModelKind,
        /// Doubled-up model; required for networks with squeezers.
        #[arg(long)]
        active: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run the realizability checks on a passive network.
    Check {
        file: PathBuf,
        #[arg(long)]
        tolerance: Option<f64>,
        /// Frequency grid for the lossless check, `start:stop:count`.
        #[arg(long, allow_hyphen_values = true)]
        omega: Option<OmegaGrid>,
    },
    /// Print the mirror digraph.
    Graph {
        file: PathBuf,
        #[arg(long)]
        dot: bool,
    },
    /// Evaluate the transfer function on a frequency grid.
    Tf {
        file: PathBuf,
        /// `start:stop:count`; defaults to 101 points over [-10, 10].
        #[arg(long, allow_hyphen_values = true)]
        omega: Option<OmegaGrid>,
        /// Space the grid logarithmically (positive bounds only).
        #[arg(long)]
        log: bool,
        #[arg(long)]
        csv: bool,
        #[arg(long)]
        active: bool,
    },
    /// Print the tool version.
    Version,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    Qsde,
    Slh,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let env_tolerance = std::env::var(TOLERANCE_ENV).ok();
    run_with_env(args, env_tolerance.as_deref(), out, err)
}

pub fn run_with_env<I, S>(
    args: I,
    env_tolerance: Option<&str>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind::{DisplayHelp, DisplayVersion};
            return if matches!(e.kind(), DisplayHelp | DisplayVersion) {
                let _ = write!(out, "{e}");
                EXIT_OK
            } else {
                let _ = write!(err, "{e}");
                EXIT_USAGE
            };
        }
    };
    let mut ctx = Context { out, err };
    match ctx.dispatch(cli.command, env_tolerance) {
        Ok(code) => code,
        Err(code) => code,
    }
}

struct Context<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

struct Input {
    file: String,
    sha256: String,
    network: Network<f64>,
}

type Exit<T> = std::result::Result<T, i32>;

impl Context<'_> {
    fn dispatch(&mut self, command: Command, env_tolerance: Option<&str>) -> Exit<i32> {
        match command {
            Command::Compile {
                file,
                model,
                active,
                format,
            } => self.compile(&file, model, active, format),
            Command::Check {
                file,
                tolerance,
                omega,
            } => {
                let tolerance = self.tolerance(tolerance, env_tolerance)?;
                self.check(&file, tolerance, omega.unwrap_or_default())
            }
            Command::Graph { file, dot } => self.graph(&file, dot),
            Command::Tf {
                file,
                omega,
                log,
                csv,
                active,
            } => {
                let mut grid = omega.unwrap_or_default();
                if log {
                    grid = grid.log().map_err(|e| self.fail(&file, e))?;
                }
                self.tf(&file, grid, csv, active)
            }
            Command::Version => {
                self.emit(&format!("qonc {}\n", env!("CARGO_PKG_VERSION")))?;
                Ok(EXIT_OK)
            }
        }
    }

    fn tolerance(&mut self, flag: Option<f64>, env: Option<&str>) -> Exit<f64> {
        let value = match (flag, env) {
            (Some(t), _) => t,
            (None, Some(text)) => text.trim().parse().map_err(|_| {
                let _ = writeln!(self.err, "ERROR {TOLERANCE_ENV}: not a number: '{text}'");
                EXIT_USAGE
            })?,
            (None, None) => DEFAULT_TOLERANCE,
        };
        if !(value.is_finite() && value > 0.0) {
            let _ = writeln!(
                self.err,
                "ERROR tolerance must be positive and finite, got {value}"
            );
            return Err(EXIT_USAGE);
        }
        Ok(value)
    }

    fn emit(&mut self, text: &str) -> Exit<()> {
        self.out.write_all(text.as_bytes()).map_err(|e| {
            let _ = writeln!(self.err, "ERROR writing output: {e}");
            EXIT_USAGE
        })
    }

    /// Reports `e` on stderr and returns its exit code.
    fn fail(&mut self, file: &Path, e: Error) -> i32 {
        let name = file.display().to_string();
        match e {
            Error::Invalid(diags) => {
                for d in &diags {
                    let _ = writeln!(self.err, "{}", d.render(&name));
                }
                EXIT_INVALID
            }
            Error::NotWellPosed(report) => {
                let _ = writeln!(self.err, "ERROR {name}: well-posedness: {report}");
                EXIT_NOT_WELL_POSED
            }
            Error::Solve(msg) => {
                let _ = writeln!(self.err, "ERROR {name}: well-posedness: {msg}");
                EXIT_NOT_WELL_POSED
            }
            Error::SingularFrequency { .. } => {
                let _ = writeln!(self.err, "ERROR {name}: {e}");
                EXIT_SINGULAR_FREQUENCY
            }
            Error::Unsupported(_) => {
                let _ = writeln!(self.err, "ERROR {name}: {e}");
                EXIT_CHECK_FAILED
            }
            Error::Domain(_) => {
                let _ = writeln!(self.err, "ERROR {name}: {e}");
                EXIT_INVALID
            }
        }
    }

    fn load(&mut self, file: &Path) -> Exit<Input> {
        let bytes = std::fs::read(file).map_err(|e| {
            let _ = writeln!(self.err, "ERROR {}: {e}", file.display());
            EXIT_USAGE
        })?;
        let text = String::from_utf8(bytes.clone()).map_err(|_| {
            let _ = writeln!(self.err, "ERROR {}: not valid UTF-8", file.display());
            EXIT_USAGE
        })?;
        let spec = parse_netlist(&text).map_err(|d| self.fail(file, Error::Invalid(d)))?;
        let network = Network::elaborate(&spec).map_err(|e| self.fail(file, e))?;
        Ok(Input {
            file: file.display().to_string(),
            sha256: Sha256::digest(&bytes)
                .iter()
                .map(|b| format!("{b:02x}"))
                .collect(),
            network,
        })
    }

    fn compile(&mut self, file: &Path, kind: ModelKind, active: bool, format: Format) -> Exit<i32> {
        let input = self.load(file)?;
        let net = &input.network;
        if net.spec.has_squeezers() && !active {
            let _ = writeln!(
                self.err,
                "ERROR {}: network contains squeezers; pass --active",
                input.file
            );
            return Err(EXIT_INVALID);
        }
        if active && kind == ModelKind::Slh {
            return Err(self.fail(
                file,
                Error::Unsupported("SLH output is defined for passive networks only".into()),
            ));
        }
        let wellposed = net.wellposedness();
        let want_qsde = kind != ModelKind::Slh;
        let want_slh = kind != ModelKind::Qsde && !active;
        let qsde = if want_qsde {
            let m = if active {
                compile_active(net)
            } else {
                compile_passive(net)
            };
            Some(m.map_err(|e| self.fail(file, e))?)
        } else {
            None
        };
        let slh = if want_slh {
            Some(compile_slh_passive(net).map_err(|e| self.fail(file, e))?)
        } else {
            None
        };
        let realizability = match &qsde {
            Some(m) if !active => {
                Some(check_realizability(m, DEFAULT_TOLERANCE).map_err(|e| self.fail(file, e))?)
            }
            _ => None,
        };
        let text = match format {
            Format::Json => {
                let bundle = OutputBundle {
                    meta: Meta::new(&input),
                    node_table: node_table(&net.nodes),
                    qsde: qsde.as_ref().map(QsdeOut::new),
                    slh: slh.as_ref().map(SlhOut::new),
                    report: ReportOut::new(&wellposed, realizability.as_ref(), qsde.as_ref()),
                };
                let mut s = serde_json::to_string_pretty(&bundle).expect("serializable output");
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut s = String::from("matrix,rows,cols,row,col,re,im\n");
                if let Some(m) = &qsde {
                    for (name, x) in [("F", &m.f), ("G", &m.g), ("H", &m.h), ("K", &m.k)] {
                        csv_matrix(&mut s, name, x);
                    }
                }
                if let Some(m) = &slh {
                    for (name, x) in [
                        ("S", &m.scattering),
                        ("N", &m.coupling),
                        ("M", &m.hamiltonian),
                    ] {
                        csv_matrix(&mut s, name, x);
                    }
                }
                s
            }
        };
        self.emit(&text)?;
        Ok(EXIT_OK)
    }

    fn check(&mut self, file: &Path, tolerance: f64, grid: OmegaGrid) -> Exit<i32> {
        let input = self.load(file)?;
        let model = compile_passive(&input.network).map_err(|e| self.fail(file, e))?;
        let report = check_realizability(&model, tolerance).map_err(|e| self.fail(file, e))?;
        let response =
            FrequencyResponse::evaluate(&model, &grid).map_err(|e| self.fail(file, e))?;
        let lossless = response.max_unitarity_residual();
        let lossless_ok = lossless <= DEFAULT_UNITARITY_TOLERANCE;

        let mut text = format!("file: {}\ntolerance: {tolerance:e}\n", input.file);
        for r in report.residuals() {
            text.push_str(&format!(
                "{:<16} {:.3e}  (scale {:.3e})  {}\n",
                r.name,
                r.value,
                r.scale,
                verdict(r.passed)
            ));
        }
        text.push_str(&format!(
            "{:<16} {lossless:.3e}  ({} points)  {}\n",
            "lossless grid",
            grid.points,
            verdict(lossless_ok)
        ));
        text.push_str(&format!(
            "spectral abscissa {:.6e}\n",
            report.spectral_abscissa
        ));
        let passed = report.passed() && lossless_ok;
        text.push_str(if passed {
            "result: pass\n"
        } else {
            "result: fail\n"
        });
        self.emit(&text)?;
        Ok(if passed { EXIT_OK } else { EXIT_CHECK_FAILED })
    }

    fn graph(&mut self, file: &Path, dot: bool) -> Exit<i32> {
        let input = self.load(file)?;
        let net = &input.network;
        let text = if dot {
            to_dot(&net.nodes, &net.adjacency)
        } else {
            let mut s = format!("nodes: {}\n", net.nodes.len());
            for (i, n) in net.nodes.nodes.iter().enumerate() {
                s.push_str(&format!(
                    "{:>3} {:<20} {}\n",
                    i + 1,
                    n.class.label(),
                    n.port_name()
                ));
            }
            s.push_str(&format!("edges: {}\n", net.adjacency.edge_count()));
            let full = &net.adjacency.full;
            for i in 0..full.nrows() {
                for j in 0..full.ncols() {
                    let z = full[(i, j)];
                    if z.re != 0.0 || z.im != 0.0 {
                        s.push_str(&format!(
                            "{:>3} -> {:<3} phase {:.6}\n",
                            i + 1,
                            j + 1,
                            z.arg()
                        ));
                    }
                }
            }
            s
        };
        self.emit(&text)?;
        Ok(EXIT_OK)
    }

    fn tf(&mut self, file: &Path, grid: OmegaGrid, csv: bool, active: bool) -> Exit<i32> {
        let input = self.load(file)?;
        let net = &input.network;
        if net.spec.has_squeezers() && !active {
            let _ = writeln!(
                self.err,
                "ERROR {}: network contains squeezers; pass --active",
                input.file
            );
            return Err(EXIT_INVALID);
        }
        let model = if active {
            compile_active(net)
        } else {
            compile_passive(net)
        }
        .map_err(|e| self.fail(file, e))?;
        let response =
            FrequencyResponse::evaluate(&model, &grid).map_err(|e| self.fail(file, e))?;
        let text = if csv {
            response.to_csv()
        } else {
            let out = TfOut {
                meta: Meta::new(&input),
                mode: model.mode.label(),
                frequencies: response.frequencies.iter().map(|&w| number(w)).collect(),
                values: response.values.iter().map(MatrixOut::new).collect(),
            };
            let mut s = serde_json::to_string_pretty(&out).expect("serializable output");
            s.push('\n');
            s
        };
        self.emit(&text)?;
        Ok(EXIT_OK)
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

fn csv_matrix(out: &mut String, name: &str, m: &CMatrix<f64>) {
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let z = m[(i, j)];
            out.push_str(&format!(
                "{name},{},{},{},{},{:.16e},{:.16e}\n",
                m.nrows(),
                m.ncols(),
                i + 1,
                j + 1,
                z.re,
                z.im
            ));
        }
    }
}

/// 17 significant digits; non-finite values become `null`.
fn number(x: f64) -> Option<Box<RawValue>> {
    x.is_finite()
        .then(|| RawValue::from_string(format!("{x:.16e}")).expect("valid JSON number"))
}

#[derive(Serialize)]
struct OutputBundle {
    meta: Meta,
    node_table: Vec<NodeOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    qsde: Option<QsdeOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    slh: Option<SlhOut>,
    report: ReportOut,
}

#[derive(Serialize)]
struct Meta {
    tool: &'static str,
    version: &'static str,
    file: String,
    input_sha256: String,
}

impl Meta {
    fn new(input: &Input) -> Self {
        Meta {
            tool: "qonc",
            version: env!("CARGO_PKG_VERSION"),
            file: input.file.clone(),
            input_sha256: input.sha256.clone(),
        }
    }
}

#[derive(Serialize)]
struct NodeOut {
    index: usize,
    class: &'static str,
    port: String,
}

fn node_table(table: &NodeTable) -> Vec<NodeOut> {
    table
        .nodes
        .iter()
        .enumerate()
        .map(|(i, n)| NodeOut {
            index: i + 1,
            class: n.class.label(),
            port: n.port_name(),
        })
        .collect()
}

type Complex = [Option<Box<RawValue>>; 2];

#[derive(Serialize)]
struct MatrixOut {
    rows: usize,
    cols: usize,
    data: Vec<Vec<Complex>>,
}

impl MatrixOut {
    fn new(m: &CMatrix<f64>) -> Self {
        MatrixOut {
            rows: m.nrows(),
            cols: m.ncols(),
            data: (0..m.nrows())
                .map(|i| {
                    (0..m.ncols())
                        .map(|j| [number(m[(i, j)].re), number(m[(i, j)].im)])
                        .collect()
                })
                .collect(),
        }
    }
}

#[derive(Serialize)]
#[allow(non_snake_case)]
struct QsdeOut {
    mode: &'static str,
    F: MatrixOut,
    G: MatrixOut,
    H: MatrixOut,
    K: MatrixOut,
}

impl QsdeOut {
    fn new(m: &StateSpaceModel<f64>) -> Self {
        QsdeOut {
            mode: m.mode.label(),
            F: MatrixOut::new(&m.f),
            G: MatrixOut::new(&m.g),
            H: MatrixOut::new(&m.h),
            K: MatrixOut::new(&m.k),
        }
    }
}

#[derive(Serialize)]
#[allow(non_snake_case)]
struct SlhOut {
    S: MatrixOut,
    N: MatrixOut,
    M: MatrixOut,
}

impl SlhOut {
    fn new(m: &SlhModel<f64>) -> Self {
        SlhOut {
            S: MatrixOut::new(&m.scattering),
            N: MatrixOut::new(&m.coupling),
            M: MatrixOut::new(&m.hamiltonian),
        }
    }
}

#[derive(Serialize)]
struct ResidualOut {
    name: &'static str,
    value: Option<Box<RawValue>>,
    scale: Option<Box<RawValue>>,
    passed: bool,
}

#[derive(Serialize)]
struct RealizabilityOut {
    tolerance: Option<Box<RawValue>>,
    passed: bool,
    residuals: Vec<ResidualOut>,
}

#[derive(Serialize)]
struct ReportOut {
    assumption: u8,
    condition: Option<Box<RawValue>>,
    well_posed: bool,
    spectral_abscissa: Option<Box<RawValue>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    realizability: Option<RealizabilityOut>,
}

impl ReportOut {
    fn new(
        w: &WellPosedness,
        r: Option<&RealizabilityReport<f64>>,
        model: Option<&StateSpaceModel<f64>>,
    ) -> Self {
        ReportOut {
            assumption: w.assumption.number(),
            condition: number(w.condition),
            well_posed: w.well_posed,
            spectral_abscissa: model.and_then(|m| number(stability(m))),
            realizability: r.map(|r| RealizabilityOut {
                tolerance: number(r.tolerance),
                passed: r.passed(),
                residuals: r
                    .residuals()
                    .iter()
                    .map(|x| ResidualOut {
                        name: x.name,
                        value: number(x.value),
                        scale: number(x.scale),
                        passed: x.passed,
                    })
                    .collect(),
            }),
        }
    }
}

#[derive(Serialize)]
struct TfOut {
    meta: Meta,
    mode: &'static str,
    frequencies: Vec<Option<Box<RawValue>>>,
    values: Vec<MatrixOut>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str], env: Option<&str>) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run_with_env(
            std::iter::once("qonc").chain(args.iter().copied()),
            env,
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    fn fixture(text: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(text.as_bytes()).unwrap();
        f
    }

    const CAVITY: &str =
        "source s\ncavity c kappa=[1]\nsink d\nlink s.out -> c.m1.in\nlink c.m1.out -> d.in\n";

    #[test]
    fn version_and_usage() {
        let (code, out, _) = run_args(&["version"], None);
        assert_eq!(code, 0);
        assert!(out.starts_with("qonc "));
        assert_eq!(run_args(&["frobnicate"], None).0, EXIT_USAGE);
        assert_eq!(
            run_args(&["compile", "/no/such/file.qon"], None).0,
            EXIT_USAGE
        );
    }

    #[test]
    fn json_numbers_have_17_digits() {
        let f = fixture(CAVITY);
        let (code, out, _) = run_args(&["compile", f.path().to_str().unwrap()], None);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["qsde"]["F"]["data"][0][0][0].as_f64(), Some(-0.5));
        assert!(out.contains("-5.0000000000000000e-1"));
        assert_eq!(v["slh"]["S"]["rows"], 1);
    }

    #[test]
    fn tolerance_precedence() {
        let f = fixture(CAVITY);
        let path = f.path().to_str().unwrap();
        let (_, out, _) = run_args(&["check", path], Some("1e-3"));
        assert!(out.contains("tolerance: 1e-3"));
        let (_, out, _) = run_args(&["check", path, "--tolerance", "1e-5"], Some("1e-3"));
        assert!(out.contains("tolerance: 1e-5"));
        let (_, out, _) = run_args(&["check", path], None);
        assert!(out.contains("tolerance: 1e-9"));
        assert_eq!(run_args(&["check", path], Some("abc")).0, EXIT_USAGE);
    }

    #[test]
    fn squeezer_needs_active() {
        let f = fixture("source s\ncavity c kappa=[1] chi=0.1\nsink d\nlink s.out -> c.m1.in\nlink c.m1.out -> d.in\n");
        let path = f.path().to_str().unwrap();
        assert_eq!(run_args(&["compile", path], None).0, EXIT_INVALID);
        let (code, out, _) = run_args(&["compile", path, "--active", "--model", "qsde"], None);
        assert_eq!(code, 0);
        assert!(out.contains("active-doubled"));
        assert_eq!(run_args(&["check", path], None).0, EXIT_CHECK_FAILED);
    }

    #[test]
    fn tf_csv_rows() {
        let f = fixture(CAVITY);
        let (code, out, _) = run_args(
            &[
                "tf",
                f.path().to_str().unwrap(),
                "--omega",
                "-10:10:101",
                "--csv",
            ],
            None,
        );
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 102);
    }

    #[test]
    fn compile_output_is_deterministic() {
        let f = fixture(CAVITY);
        let path = f.path().to_str().unwrap();
        assert_eq!(
            run_args(&["compile", path], None),
            run_args(&["compile", path], None)
        );
        let (_, csv, _) = run_args(
            &["compile", path, "--format", "csv", "--model", "qsde"],
            None,
        );
        assert_eq!(csv.lines().count(), 5);
    }
}
