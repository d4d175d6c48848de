//! Command line front end. Exit codes: 0 when every check passes, 1 when a
//! check fails, 2 on usage or input errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::boolean::Gbds;
use crate::checks::{self, Check};
use crate::filters::enumerate_tight;
use crate::format::{import_graph, parse_system, ParseError};
use crate::groupoid::{enumerate_gamma, groupoid_dot, orbits};
use crate::paths::enumerate_boundary;
use crate::semigroup::{enumerate_elements, enumerate_idempotents};
use crate::steinberg::{ck_check, matrix_rep};

#[derive(Debug, Parser)]
#[command(name = "gbds", version, about = "Exact computations for finite generalized Boolean dynamical systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse and validate a system file.
    Validate { file: PathBuf },
    /// Enumerate the inverse semigroup and check its laws.
    Semigroup {
        file: PathBuf,
        #[arg(long)]
        max_word: usize,
    },
    /// List tight filters and compare both tightness criteria.
    Tight {
        file: PathBuf,
        #[arg(long)]
        depth: usize,
    },
    /// List boundary paths.
    Boundary {
        file: PathBuf,
        #[arg(long)]
        depth: usize,
    },
    /// Check the cutting and gluing identities.
    SurgeryCheck {
        file: PathBuf,
        #[arg(long)]
        depth: usize,
    },
    /// Enumerate groupoid elements and check the groupoid laws.
    Groupoid {
        file: PathBuf,
        #[arg(long)]
        depth: usize,
        /// Write the groupoid as DOT to this path.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Check the defining relations of the generators.
    CkCheck {
        file: PathBuf,
        #[arg(long)]
        depth: usize,
    },
    /// Matrix representation on a finite boundary.
    Matrix { file: PathBuf },
    /// Check the transcription to paths and the germ correspondence.
    IsoCheck {
        file: PathBuf,
        #[arg(long)]
        depth: usize,
    },
}

/// Reads a system; files ending in `.graph` are imported as labeled graphs.
pub fn load_system(path: &Path) -> Result<Gbds, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let parsed: Result<Gbds, ParseError> = if path.extension().is_some_and(|e| e == "graph") {
        import_graph(&text)
    } else {
        parse_system(&text)
    };
    parsed.map_err(|e| format!("{}: {e}", path.display()))
}

struct Report {
    lines: Vec<String>,
    ok: bool,
}

impl Report {
    fn new() -> Report {
        Report {
            lines: Vec::new(),
            ok: true,
        }
    }

    fn say(&mut self, line: impl Into<String>) {
        self.lines.push(line.into());
    }

    fn check(&mut self, c: &Check) {
        self.ok &= c.passed();
        self.lines.push(c.line());
    }

    fn checks(&mut self, cs: &[Check]) {
        for c in cs {
            self.check(c);
        }
    }
}

/// Input errors come back as `Err`; check failures are in the report.
fn execute(command: Command) -> Result<Report, String> {
    let mut r = Report::new();
    match command {
        Command::Validate { file } => match load_system(&file) {
            Ok(sys) => {
                let atoms: Vec<&str> = sys.atoms().map(|a| sys.atom_name(a)).collect();
                let labels: Vec<&str> = sys.labels().map(|l| sys.label_name(l)).collect();
                r.say(format!("atoms: {}", atoms.join(" ")));
                r.say(format!("labels: {}", labels.join(" ")));
                r.say(format!("sinks: {}", sys.show_set(sys.sink_atoms())));
                r.say("PASS valid system");
            }
            Err(e) => {
                r.say(format!("FAIL {e}"));
                r.ok = false;
            }
        },
        Command::Semigroup { file, max_word } => {
            let sys = load_system(&file)?;
            r.say(format!("elements: {}", enumerate_elements(&sys, max_word).len()));
            r.say(format!("idempotents: {}", enumerate_idempotents(&sys, max_word).len()));
            r.checks(&checks::semigroup_laws(&sys, max_word));
        }
        Command::Tight { file, depth } => {
            let sys = load_system(&file)?;
            let listing = enumerate_tight(&sys, depth);
            r.say(format!("finite: {}", listing.finite.len()));
            for xi in &listing.finite {
                r.say(format!("filter {}", xi.show(&sys)));
            }
            r.say(format!("cylinders: {}", listing.cylinders.len()));
            for c in &listing.cylinders {
                r.say(format!("cylinder {}", c.show(&sys)));
            }
            r.check(&checks::filter_round_trip(&sys, depth));
            r.check(&checks::tight_agreement(&sys, depth, 1));
        }
        Command::Boundary { file, depth } => {
            let sys = load_system(&file)?;
            let listing = enumerate_boundary(&sys, depth);
            r.say(format!("paths: {}", listing.finite.len()));
            for mu in &listing.finite {
                r.say(format!("path {}", mu.show(&sys)));
            }
            r.say(format!("cylinders: {}", listing.cylinders.len()));
            for c in &listing.cylinders {
                r.say(format!("cylinder {}", c.show(&sys)));
            }
        }
        Command::SurgeryCheck { file, depth } => {
            let sys = load_system(&file)?;
            r.checks(&checks::surgery_laws(&sys, depth));
        }
        Command::Groupoid { file, depth, dot } => {
            let sys = load_system(&file)?;
            let elems = enumerate_gamma(&sys, depth);
            r.say(format!("elements: {}", elems.len()));
            for g in &elems {
                r.say(format!("element {}", g.show(&sys)));
            }
            let sizes: Vec<String> = orbits(&elems).iter().map(|o| o.len().to_string()).collect();
            r.say(format!("orbits: [{}]", sizes.join(", ")));
            r.checks(&checks::groupoid_laws(&sys, &elems));
            if let Some(out) = dot {
                std::fs::write(&out, groupoid_dot(&sys, &elems))
                    .map_err(|e| format!("{}: {e}", out.display()))?;
                r.say(format!("dot: {}", out.display()));
            }
        }
        Command::CkCheck { file, depth } => {
            let sys = load_system(&file)?;
            let numerals = ["(i)", "(ii)", "(iii)", "(iv)"];
            for (n, mut c) in numerals.iter().zip(ck_check(&sys, depth)) {
                c.name = format!("{n} {}", c.name);
                r.check(&c);
            }
        }
        Command::Matrix { file } => {
            let sys = load_system(&file)?;
            match matrix_rep(&sys) {
                Ok(rep) => {
                    let blocks: Vec<String> = rep.blocks.iter().map(usize::to_string).collect();
                    r.say(format!("points: {}", rep.points.len()));
                    r.say(format!("blocks: [{}]; dim {}", blocks.join(", "), rep.dimension));
                    let mut c = Check::new("dimension is the sum of squared block sizes");
                    c.record(rep.dimension == rep.block_dimension(), || {
                        format!("{} vs {}", rep.dimension, rep.block_dimension())
                    });
                    r.check(&c);
                }
                Err(e) => {
                    r.say(format!("FAIL {e}"));
                    r.ok = false;
                }
            }
        }
        Command::IsoCheck { file, depth } => {
            let sys = load_system(&file)?;
            r.checks(&checks::phi_laws(&sys, depth));
            r.checks(&checks::germ_laws(&sys, depth));
            r.check(&checks::transport_law(&sys, depth));
        }
    }
    Ok(r)
}

/// Runs the command line on `args` (program name first).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = write!(out, "{e}");
            return 0;
        }
        Err(e) => {
            let _ = write!(err, "{e}");
            return 2;
        }
    };
    match execute(cli.command) {
        Ok(report) => {
            for line in &report.lines {
                let _ = writeln!(out, "{line}");
            }
            if report.ok {
                0
            } else {
                1
            }
        }
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

pub fn main() -> ExitCode {
    let code = run(
        std::env::args_os(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    ExitCode::from(code)
}
