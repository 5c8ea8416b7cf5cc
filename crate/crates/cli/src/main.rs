use std::path::PathBuf;
use std::process::ExitCode;

use bcgroupoid::io::{load_workspace, run_workspace, JobKind};
use bcgroupoid::Limits;
use clap::Parser;

/// Exact bounded cohomology of finite groupoids.
///
/// Exit codes: 0 pass, 1 assertion failure, 2 input error, 3 resource cap.
#[derive(Debug, Parser)]
#[command(name = "bcg", version)]
struct Args {
    /// workspace file (JSON)
    #[arg(long)]
    workspace: PathBuf,
    /// job to run instead of the workspace's own job list
    #[arg(long)]
    job: Option<String>,
    /// top degree
    #[arg(long, default_value_t = Limits::default().degree)]
    degree: usize,
    /// maximum number of basis paths per degree
    #[arg(long, default_value_t = Limits::default().path_cap)]
    path_cap: usize,
    /// maximum number of LP variables
    #[arg(long, default_value_t = Limits::default().lp_var_cap)]
    lp_var_cap: usize,
    /// write the report here instead of stdout
    #[arg(long)]
    report: Option<PathBuf>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let job = match args.job.as_deref().map(str::parse::<JobKind>).transpose() {
        Ok(j) => j,
        Err(e) => {
            eprintln!("bcg: {e}");
            return ExitCode::from(2);
        }
    };
    let ws = match load_workspace(&args.workspace) {
        Ok(ws) => ws,
        Err(e) => {
            eprintln!("bcg: {e}");
            return ExitCode::from(2);
        }
    };
    let limits = Limits {
        path_cap: args.path_cap,
        lp_var_cap: args.lp_var_cap,
        degree: args.degree,
    };
    let report = run_workspace(&ws, job, &limits);
    let text = report.to_json();
    match &args.report {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("bcg: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    for j in &report.jobs {
        eprintln!("{:<20} {:<28} {:?}", j.job, j.target, j.status);
    }
    ExitCode::from(report.exit_code() as u8)
}
