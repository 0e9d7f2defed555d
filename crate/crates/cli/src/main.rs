use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use uam_core::force_model::MassGeometry;
use uam_core::harness::{
    envelope_csv, envelope_svg, run_case, run_table, table_markdown, timeseries_svg, SimCase, DEFAULT_ENVELOPE_BETAS,
};
use uam_core::{UamParams, GRAVITY};

#[derive(Parser)]
#[command(name = "sim", version, about = "Planar aerial manipulator pushing simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one case and print its report as JSON.
    Run {
        case: PathBuf,
        /// Output directory for the report and optional artifacts.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the per-step telemetry CSV.
        #[arg(long)]
        csv: bool,
        /// Write a force/thrust time-series SVG.
        #[arg(long)]
        svg: bool,
    },
    /// Run every `*.json` case in a directory and print the summary table.
    Table {
        dir: PathBuf,
        /// Also write `table.json` here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed-form force envelopes over phi0 for a list of surfaces.
    Envelope {
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_ENVELOPE_BETAS)]
        betas: Vec<f64>,
        /// Total weight G_t [N]. Defaults to the fixture vehicle.
        #[arg(long)]
        gt: Option<f64>,
        #[arg(long, default_value_t = 400)]
        points: usize,
        #[arg(long, default_value = "envelope")]
        out: PathBuf,
    },
    /// Parse and validate a case file.
    Validate { case: PathBuf },
    /// Write the six reference cases as JSON files.
    Cases { dir: PathBuf },
}

fn out_dir(out: &Option<PathBuf>) -> Result<Option<&Path>> {
    match out {
        Some(d) => {
            fs::create_dir_all(d).with_context(|| format!("creating {}", d.display()))?;
            Ok(Some(d.as_path()))
        }
        None => Ok(None),
    }
}

fn run(case_path: &Path, out: &Option<PathBuf>, csv: bool, svg: bool) -> Result<()> {
    let case = SimCase::load(case_path).with_context(|| format!("loading {}", case_path.display()))?;
    let report = run_case(&case)?;
    let json = report.to_json()?;
    println!("{json}");
    let dir = out_dir(out)?;
    if (csv || svg) && dir.is_none() {
        bail!("--csv and --svg need --out");
    }
    if let Some(dir) = dir {
        fs::write(dir.join(format!("{}.report.json", case.name)), &json)?;
        if csv {
            let file = fs::File::create(dir.join(format!("{}.csv", case.name)))?;
            report.write_csv(std::io::BufWriter::new(file))?;
        }
        if svg {
            fs::write(dir.join(format!("{}.svg", case.name)), timeseries_svg(&report))?;
        }
    }
    Ok(())
}

fn table(dir: &Path, out: &Option<PathBuf>) -> Result<bool> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        bail!("no case files in {}", dir.display());
    }
    let cases = paths
        .iter()
        .map(|p| SimCase::load(p).with_context(|| format!("loading {}", p.display())))
        .collect::<Result<Vec<_>>>()?;
    let report = run_table(&cases)?;
    print!("{}", table_markdown(&report));
    if let Some(d) = out_dir(out)? {
        fs::write(d.join("table.json"), serde_json::to_string_pretty(&report)?)?;
    }
    Ok(report.all_passed())
}

fn envelope(betas: &[f64], gt: Option<f64>, points: usize, out: &Path) -> Result<()> {
    let mg = match gt {
        Some(g_t) => MassGeometry::from_total_weight(g_t, GRAVITY)?,
        None => {
            let p = UamParams::default();
            MassGeometry::new(p.m_b, p.m_e, p.g, 0.0, 0.0)?
        }
    };
    fs::create_dir_all(out)?;
    for &b in betas {
        let path = out.join(format!("envelope_beta{b}.csv"));
        fs::write(&path, envelope_csv(b, &mg, points)?)?;
        println!("{}", path.display());
    }
    let path = out.join("envelope.svg");
    fs::write(&path, envelope_svg(betas, &mg, points)?)?;
    println!("{}", path.display());
    Ok(())
}

fn cases(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    for case in SimCase::table_cases() {
        let path = dir.join(format!("{}.json", case.name));
        fs::write(&path, case.to_json()? + "\n")?;
        println!("{}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run { case, out, csv, svg } => run(case, out, *csv, *svg).map(|_| true),
        Command::Table { dir, out } => table(dir, out),
        Command::Envelope { betas, gt, points, out } => envelope(betas, *gt, *points, out).map(|_| true),
        Command::Validate { case } => SimCase::load(case).map(|c| {
            println!("{}: ok ({} steps)", c.name, c.steps());
            true
        }).map_err(Into::into),
        Command::Cases { dir } => cases(dir).map(|_| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
