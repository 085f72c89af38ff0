//! `qspec`: invariants, quantum Euler matrices, Newton polygons and spectra
//! of blown-up surfaces from the command line.

mod cache;
mod commands;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qspec_core::QspecError;

#[derive(Parser, Debug)]
#[command(name = "qspec", version, about = "Quantum spectra of surfaces under blow-up")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// p2, p1xp1, ruled:g=<genus>,u=<degree> or nef:<path to JSON>.
    #[arg(long, default_value = "p2")]
    pub surface: String,
    /// Number of blown-up points.
    #[arg(long, short = 'r', default_value_t = 0)]
    pub blowups: usize,
    /// Degree cap D on minimal-model classes.
    #[arg(long = "degree", short = 'D', default_value_t = 6)]
    pub degree: i64,
    /// Truncation order T in t_p.
    #[arg(long = "order", short = 'T', default_value_t = 12)]
    pub order: u32,
    /// Cache directory (overrides $QSPEC_CACHE).
    #[arg(long)]
    pub cache: Option<PathBuf>,
    /// Neither read nor write the cache.
    #[arg(long)]
    pub no_cache: bool,
}

#[derive(Args, Debug, Clone)]
pub struct ScanArgs {
    /// Ray entries nu_i (rationals, comma separated); all ones by default.
    #[arg(long)]
    pub ray: Option<String>,
    /// Value of t_p.
    #[arg(long, default_value = "1/10")]
    pub tp: String,
    #[arg(long, default_value_t = 1e-6)]
    pub qmin: f64,
    #[arg(long, default_value_t = 1e-1)]
    pub qmax: f64,
    #[arg(long, default_value_t = 26)]
    pub samples: usize,
    /// Post-hoc spectral shift 2 t_0 (rational).
    #[arg(long)]
    pub shift: Option<String>,
    /// Skip extended-precision refinement.
    #[arg(long)]
    pub fast: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutFormat {
    Csv,
    Json,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Appendix,
    Wdvv,
    Polygon,
    Spectral,
    All,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Print one invariant N_{beta,alpha}.
    Gw {
        #[command(flatten)]
        common: Common,
        /// `d[,a1,..]` on the plane, `b,d[,a1,..]` on two-divisor surfaces.
        #[arg(long)]
        class: String,
        #[arg(long)]
        json: bool,
    },
    /// Print the matrix K as JSON.
    Kmatrix {
        #[command(flatten)]
        common: Common,
        /// Print lowest-order terms as text instead.
        #[arg(long)]
        lowest: bool,
    },
    /// Print det(lambda - K) as JSON.
    Charpoly {
        #[command(flatten)]
        common: Common,
    },
    /// Newton polygon along a ray, checked against the blow-up law.
    Polygon {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        ray: Option<String>,
        /// `generic` or a rational value.
        #[arg(long, default_value = "generic")]
        tp: String,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Eigenvalues of K along q_i = nu_i q.
    Spectrum {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        scan: ScanArgs,
        #[arg(long, value_enum, default_value = "csv")]
        out: OutFormat,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Write to this file instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run verification suites and print a JSON report.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Inspect or clear the invariant cache.
    Cache {
        #[command(subcommand)]
        action: CacheCmd,
    },
    /// Write every artifact for one configuration into a directory.
    Pipeline {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        scan: ScanArgs,
        #[arg(long, default_value = "generic")]
        polygon_tp: String,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum CacheCmd {
    Info {
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    Clear {
        #[arg(long)]
        cache: Option<PathBuf>,
    },
}

/// 2 for anything the caller can fix, 3 for internal and I/O failures.
pub fn exit_code(e: &QspecError) -> u8 {
    match e {
        QspecError::Config(_)
        | QspecError::Domain(_)
        | QspecError::Capacity(_)
        | QspecError::Unsupported(_)
        | QspecError::Precondition(_)
        | QspecError::Parse { .. }
        | QspecError::CacheInvalid(_)
        | QspecError::CacheCorrupt { .. } => 2,
        QspecError::Internal(_) | QspecError::Io(_) | QspecError::Json(_) => 3,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Gw { common, class, json } => commands::gw(&common, &class, json),
        Cmd::Kmatrix { common, lowest } => commands::kmatrix(&common, lowest),
        Cmd::Charpoly { common } => commands::charpoly(&common),
        Cmd::Polygon { common, ray, tp, svg } => commands::polygon(&common, ray.as_deref(), &tp, svg.as_deref()),
        Cmd::Spectrum { common, scan, out, svg, output } => commands::spectrum(&common, &scan, out, svg.as_deref(), output.as_deref()),
        Cmd::Verify { common, suite, output } => commands::verify(&common, suite, output.as_deref()),
        Cmd::Cache { action } => match action {
            CacheCmd::Info { cache } => commands::cache_info(cache.as_deref()),
            CacheCmd::Clear { cache } => commands::cache_clear(cache.as_deref()),
        },
        Cmd::Pipeline { common, scan, polygon_tp, out_dir } => commands::pipeline(&common, &scan, &polygon_tp, &out_dir),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
