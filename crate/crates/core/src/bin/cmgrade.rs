use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use cmgrade::corpus;
use cmgrade::dsl::{Options, Session};
use cmgrade::report::Report;
use cmgrade::Error;

#[derive(Parser)]
#[command(name = "cmgrade", version, about = "Grade, height and Cohen-Macaulay checks over finitely presented algebras")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Session script to load before the command.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    /// Step budget for each Gröbner run.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Largest power for truncated local-cohomology grade.
    #[arg(long, global = true)]
    nmax: Option<usize>,
    /// Degree bound of generated test families.
    #[arg(long = "degree-bound", global = true)]
    degree_bound: Option<u32>,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Grade of an ideal on a module.
    Grade {
        #[arg(long, default_value = "koszul")]
        notion: String,
        /// Ideal name or generator list such as `(x, y)`.
        #[arg(long)]
        ideal: String,
        /// Module name; the ring itself when omitted.
        #[arg(long)]
        module: Option<String>,
    },
    /// One Cohen-Macaulay sense over a test family.
    CmCheck {
        /// One of fg, primes, max, glaz, wb, wbh, hm.
        #[arg(long)]
        sense: String,
        /// Ring name from the script.
        #[arg(long)]
        ring: String,
        /// Family name from the script, or a file with one ideal per line.
        #[arg(long)]
        family: Option<String>,
    },
    /// Run the built-in example corpus.
    Corpus {
        /// Only items whose id contains one of these.
        select: Vec<String>,
        /// List item ids and exit.
        #[arg(long)]
        list: bool,
    },
    /// Execute the `--input` script and report every command.
    Run,
}

fn options(c: &Common) -> Options {
    let d = Options::default();
    Options {
        budget: c.budget.unwrap_or(d.budget),
        n_max: c.nmax.unwrap_or(d.n_max),
        degree_bound: c.degree_bound.unwrap_or(d.degree_bound),
        workers: c.workers.unwrap_or(d.workers),
        ..d
    }
}

fn load(session: &mut Session, input: &Option<PathBuf>) -> Result<(), Error> {
    if let Some(p) = input {
        let src = fs::read_to_string(p).map_err(|e| Error::Invalid(format!("{}: {e}", p.display())))?;
        session.exec(&src)?;
    }
    Ok(())
}

fn family_clause(session: &mut Session, ring: &str, family: &Option<String>) -> Result<String, Error> {
    let Some(f) = family else { return Ok(String::new()) };
    if session.get(f).is_some() {
        return Ok(format!(" family {f}"));
    }
    let text = fs::read_to_string(f).map_err(|e| Error::Invalid(format!("{f}: {e}")))?;
    let ideals: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).collect();
    let name = "cli_family";
    session.exec(&format!("family {name} in {ring} = {{{}}};", ideals.join(", ")))?;
    Ok(format!(" family {name}"))
}

fn execute(cli: &Cli) -> Result<Report, Error> {
    let opts = options(&cli.common);
    cmgrade::groebner::set_default_budget(opts.budget);
    if opts.workers > 0 {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(opts.workers).build_global();
    }
    let mut session = Session::new(opts.clone());
    match &cli.cmd {
        Cmd::Grade { notion, ideal, module } => {
            load(&mut session, &cli.common.input)?;
            let on = module.as_ref().map(|m| format!(" on {m}")).unwrap_or_default();
            let out = session.exec(&format!("grade {notion} {ideal}{on};"))?;
            Ok(Report::from_outputs("grade", &out))
        }
        Cmd::CmCheck { sense, ring, family } => {
            load(&mut session, &cli.common.input)?;
            let fam = family_clause(&mut session, ring, family)?;
            let out = session.exec(&format!("check {sense} {ring}{fam};"))?;
            let pass = out.iter().all(|o| o.primary != json!("fail"));
            Ok(Report::new("cm-check", pass, &out))
        }
        Cmd::Corpus { select, list } => {
            let items = corpus::select(select);
            if *list {
                let ids: Vec<&str> = items.iter().map(|i| i.id).collect();
                return Ok(Report::new("corpus", true, ids));
            }
            let results = corpus::run(&items, &opts);
            let pass = results.iter().all(|r| r.pass);
            Ok(Report::new("corpus", pass, results))
        }
        Cmd::Run => {
            let Some(p) = &cli.common.input else {
                return Err(Error::Invalid("`run` needs --input".into()));
            };
            let src = fs::read_to_string(p).map_err(|e| Error::Invalid(format!("{}: {e}", p.display())))?;
            let out = session.exec(&src)?;
            Ok(Report::from_outputs("run", &out))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(report) => {
            let text = report.to_json();
            match &cli.common.json {
                Some(p) => {
                    if let Err(e) = fs::write(p, &text) {
                        eprintln!("error: {}: {e}", p.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{text}"),
            }
            if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
