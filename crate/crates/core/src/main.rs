use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use density_lattice::bipartite::BipartiteContext;
use density_lattice::convex::minimal_face;
use density_lattice::harness::{improper_mixture_demo, random_element_in, run_suite, separable_volume, SuiteConfig};
use density_lattice::herm::{SpaceShape, Tolerances};
use density_lattice::io::{
    read_json, to_json_string, write_json, CertificateJson, ElementJson, MatrixJson, VNJson, VerdictJson,
};
use density_lattice::lattice::{Lattice, LatticeElement};
use density_lattice::random::random_density;
use density_lattice::separability::{is_separable, SeparabilityStatus};
use density_lattice::vn::face_embed_in;
use density_lattice::Error;

/// `println!` that tolerates a closed stdout, as when piped into `head`.
macro_rules! say {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

/// Computations in the lattice of density operators.
#[derive(Parser, Debug)]
#[command(name = "dlattice", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Root seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Trial or sample count (suite default when omitted).
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Dimension of a single Hilbert space.
    #[arg(long, global = true, conflicts_with = "shape")]
    dim: Option<usize>,
    /// Tensor shape such as `2x3`.
    #[arg(long, global = true)]
    shape: Option<String>,
    /// Smallest eigenvalue accepted as nonnegative.
    #[arg(long = "tol-psd", global = true)]
    tol_psd: Option<f64>,
    /// Iteration cap for facial reduction and decomposition search.
    #[arg(long, global = true)]
    budget: Option<usize>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Print the facial-reduction certificate of the result.
    #[arg(long = "emit-certificate", global = true)]
    emit_certificate: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a random density or lattice element.
    Gen {
        #[arg(value_enum)]
        kind: GenKind,
        /// Rank of a density (default full rank).
        #[arg(long)]
        rank: Option<usize>,
        /// Number of random densities spanning an element.
        #[arg(short, long, default_value_t = 2)]
        k: usize,
    },
    /// Lattice operation on element files.
    Op {
        #[arg(value_enum)]
        op: OpKind,
        a: PathBuf,
        b: Option<PathBuf>,
    },
    /// Face of the state body for a projector file.
    EmbedFace { p: PathBuf },
    /// Going-up map on a pair of factor elements.
    Psi { a: PathBuf, b: PathBuf },
    /// Going-down map keeping one factor.
    Tau {
        l: PathBuf,
        #[arg(long, default_value_t = 1)]
        keep: usize,
    },
    /// Separability verdict for a density file.
    Sep { rho: PathBuf },
    /// Run a property suite.
    Check { suite: String },
    /// Demonstrations.
    Demo {
        #[arg(value_enum)]
        which: DemoKind,
    },
    /// Monte Carlo estimate of the separable fraction.
    Volume,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GenKind {
    Density,
    Element,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OpKind {
    Meet,
    Join,
    Neg,
    Leq,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DemoKind {
    ImproperMixture,
}

const USAGE: u8 = 64;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_code(&e))
        }
    }
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::Undecided { .. } | Error::NonConvergence { .. } | Error::OracleInconclusive(_) => 2,
        _ => USAGE,
    }
}

impl Cli {
    fn tolerances(&self) -> Tolerances {
        let mut t = Tolerances::default();
        if let Some(p) = self.tol_psd {
            t.psd = p;
        }
        t
    }

    fn lattice(&self) -> Lattice {
        let mut lat = Lattice { tol: self.tolerances(), ..Lattice::default() };
        if let Some(b) = self.budget {
            lat.budget = b;
        }
        lat
    }

    fn shape(&self) -> Result<Option<SpaceShape>, Error> {
        match (&self.shape, self.dim) {
            (Some(s), _) => SpaceShape::parse(s).map(Some),
            (None, Some(n)) => SpaceShape::new(vec![n]).map(Some),
            (None, None) => Ok(None),
        }
    }

    fn shape_or(&self, default: SpaceShape) -> Result<SpaceShape, Error> {
        Ok(self.shape()?.unwrap_or(default))
    }

    fn context(&self) -> Result<BipartiteContext, Error> {
        let shape = self.shape()?.ok_or_else(|| Error::InvalidParameter("--shape n1xn2 is required".into()))?;
        BipartiteContext::from_shape(&shape, self.lattice())
    }

    fn emit(&self, value: &Value, text: impl FnOnce() -> String) -> Result<(), Error> {
        if let Some(path) = &self.out {
            return write_json(path, value);
        }
        match self.format {
            Format::Json => say!("{}", to_json_string(value)?),
            Format::Text => say!("{}", text()),
        }
        Ok(())
    }

    /// Writes an element; with `--emit-certificate` its facial-reduction
    /// certificate goes to stdout (or alongside the element without `--out`).
    fn emit_element(&self, lat: &Lattice, e: &LatticeElement) -> Result<(), Error> {
        let value = to_value(&ElementJson::from_element(e));
        let text = || format!("element of dimension {} over shape {:?}", e.dim(), e.shape().factors());
        if !self.emit_certificate {
            return self.emit(&value, text);
        }
        let cert = if e.is_zero() {
            Value::Null
        } else {
            to_value(&CertificateJson::from_certificate(&minimal_face(e.rep(), &lat.tol, lat.budget)?))
        };
        match &self.out {
            Some(path) => {
                write_json(path, &value)?;
                say!("{}", to_json_string(&cert)?);
                Ok(())
            }
            None => self.emit(&json!({ "element": value, "certificate": cert }), text),
        }
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

fn read_element(path: &Path, lat: &Lattice) -> Result<LatticeElement, Error> {
    read_json::<ElementJson>(path)?.to_element(lat)
}

fn run(cli: &Cli) -> Result<u8, Error> {
    let lat = cli.lattice();
    match &cli.command {
        Command::Gen { kind: GenKind::Density, rank, .. } => {
            let shape = cli.shape_or(SpaceShape::simple(2))?;
            let n = shape.total();
            let rho = random_density(n, rank.unwrap_or(n), cli.seed)?;
            cli.emit(&to_value(&MatrixJson::from_op(rho.op())), || format!("{:?}", rho.op().matrix()))?;
            Ok(0)
        }
        Command::Gen { kind: GenKind::Element, k, .. } => {
            let shape = cli.shape_or(SpaceShape::simple(2))?;
            let e = random_element_in(shape, *k, cli.seed)?;
            cli.emit_element(&lat, &e)?;
            Ok(0)
        }
        Command::Op { op, a, b } => {
            let a = read_element(a, &lat)?;
            let need_b = || -> Result<LatticeElement, Error> {
                let path = b.as_ref().ok_or_else(|| Error::InvalidParameter("this operation needs two elements".into()))?;
                read_element(path, &lat)
            };
            match op {
                OpKind::Meet => cli.emit_element(&lat, &lat.meet(&a, &need_b()?)?)?,
                OpKind::Join => cli.emit_element(&lat, &lat.join(&a, &need_b()?)?)?,
                OpKind::Neg => cli.emit_element(&lat, &lat.neg(&a)?)?,
                OpKind::Leq => {
                    let r = lat.leq(&a, &need_b()?)?;
                    cli.emit(&json!({ "leq": r }), || format!("leq: {r}"))?;
                }
            }
            Ok(0)
        }
        Command::EmbedFace { p } => {
            let p = read_json::<VNJson>(p)?.to_vn(&lat.tol)?;
            let shape = cli.shape_or(SpaceShape::simple(p.dim()))?;
            shape.check(p.dim())?;
            cli.emit_element(&lat, &face_embed_in(&p, shape))?;
            Ok(0)
        }
        Command::Psi { a, b } => {
            let (a, b) = (read_element(a, &lat)?, read_element(b, &lat)?);
            // The factor files already fix the shape when none is given.
            let shape = cli.shape_or(SpaceShape::bipartite(a.hilbert_dim(), b.hilbert_dim()))?;
            let ctx = BipartiteContext::from_shape(&shape, lat)?;
            let a = a.with_shape(ctx.factor_shape(1))?;
            let b = b.with_shape(ctx.factor_shape(2))?;
            cli.emit_element(&lat, &ctx.psi(&a, &b)?)?;
            Ok(0)
        }
        Command::Tau { l, keep } => {
            let l = read_element(l, &lat)?;
            let shape = match cli.shape()? {
                Some(s) => s,
                None => l.shape().clone(),
            };
            let ctx = BipartiteContext::from_shape(&shape, lat)?;
            let l = l.with_shape(shape)?;
            cli.emit_element(&lat, &ctx.tau(&l, *keep)?)?;
            Ok(0)
        }
        Command::Sep { rho } => {
            let ctx = cli.context()?;
            let rho = read_json::<MatrixJson>(rho)?.to_density(&lat.tol)?;
            let v = is_separable(&rho, &ctx, lat.budget, cli.seed)?;
            let value = to_value(&VerdictJson::from_verdict(&v));
            // The verdict always goes to stdout; --out keeps a copy.
            if let Some(path) = &cli.out {
                write_json(path, &value)?;
            }
            match cli.format {
                Format::Json => say!("{}", to_json_string(&value)?),
                Format::Text => say!("{:?} (PPT minimum eigenvalue {:.6e}): {}", v.status, v.ppt_min_eigenvalue, v.note),
            }
            Ok(match v.status {
                SeparabilityStatus::Separable => 0,
                SeparabilityStatus::Entangled => 1,
                SeparabilityStatus::Inconclusive => 2,
            })
        }
        Command::Check { suite } => {
            let mut cfg = SuiteConfig::new(suite)?.with_seed(cli.seed);
            if let Some(shape) = cli.shape()? {
                cfg = cfg.with_shape(shape);
            }
            if let Some(t) = cli.trials {
                cfg = cfg.with_trials(t);
            }
            cfg.tol = lat.tol;
            cfg.budget = lat.budget;
            let report = run_suite(&cfg)?;
            cli.emit(&to_value(&report), || report.render_text())?;
            Ok(report.exit_code() as u8)
        }
        Command::Demo { which: DemoKind::ImproperMixture } => {
            let shape = cli.shape_or(SpaceShape::bipartite(2, 2))?;
            let f = shape.factors();
            if f.len() != 2 {
                return Err(Error::UnsupportedDims(format!("demo needs two factors, got {f:?}")));
            }
            let entangled = improper_mixture_demo(f[0], f[1], cli.seed, false)?;
            let control = improper_mixture_demo(f[0], f[1], cli.seed, true)?;
            let ok = entangled.vn_rank > 1 && entangled.atom_dim == 1 && entangled.atom_is_meet && control.vn_rank == 1;
            let value = json!({ "entangled": entangled, "product_control": control, "passed": ok });
            cli.emit(&value, || {
                format!(
                    "entangled pure state: vN conjunction rank {}, 𝓛 atom dimension {} (meet of containing elements: {})\n\
                     product control: vN conjunction rank {}, 𝓛 atom dimension {}",
                    entangled.vn_rank, entangled.atom_dim, entangled.atom_is_meet, control.vn_rank, control.atom_dim
                )
            })?;
            Ok(if ok { 0 } else { 1 })
        }
        Command::Volume => {
            let shape = cli.shape_or(SpaceShape::bipartite(2, 2))?;
            let samples = cli.trials.unwrap_or(10_000);
            let v = separable_volume(&shape, samples, cli.seed)?;
            if !v.exact {
                eprintln!("warning: PPT does not decide separability for {:?}; reporting the PPT fraction", shape.factors());
            }
            cli.emit(&to_value(&v), || format!("separable fraction {:.4} ± {:.4} ({} samples)", v.fraction, v.ci_halfwidth, v.samples))?;
            Ok(0)
        }
    }
}
