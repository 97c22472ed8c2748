use std::fs;
use std::path::{Path, PathBuf};

use ffl::error::Error;
use ffl::moments::{asymptotic_table, sweep, SweepConfig, SweepOutcome, SweepReport};
use ffl::FieldSpec;

/// Probe that a path can be created/written before hours of work start.
fn check_writable(path: &Path) -> Result<(), Error> {
    let existed = path.exists();
    let file = fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| Error::domain(format!("cannot write {}: {e}", path.display())))?;
    drop(file);
    if !existed {
        let _ = fs::remove_file(path);
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
pub fn run_sweep(
    spec: FieldSpec,
    genus: u32,
    workers: Option<usize>,
    chunk_size: u64,
    checkpoint: Option<PathBuf>,
    out: Option<PathBuf>,
    dump_primes: Option<PathBuf>,
    higher_moments: Option<u32>,
    max_chunks: Option<u64>,
) -> Result<bool, Error> {
    for path in [&checkpoint, &out, &dump_primes].into_iter().flatten() {
        check_writable(path)?;
    }
    let mut cfg = SweepConfig::new(spec, genus);
    if let Some(w) = workers {
        cfg.workers = w;
    }
    cfg.chunk_size = chunk_size;
    cfg.checkpoint = checkpoint;
    cfg.dump_primes = dump_primes;
    cfg.higher_moments_max_k = higher_moments;
    cfg.max_chunks = max_chunks;

    match sweep(&cfg)? {
        SweepOutcome::Stopped { next_chunk_index } => {
            println!(
                "sweep stopped at chunk {next_chunk_index} (state in {}); rerun to continue",
                cfg.checkpoint
                    .as_ref()
                    .map(|p| p.display().to_string())
                    .unwrap_or_default()
            );
            Ok(true)
        }
        SweepOutcome::Complete(report) => {
            print!("{}", report.render_text());
            if let Some(path) = &out {
                fs::write(path, report.to_json()?)?;
                println!("report written to {}", path.display());
            }
            Ok(true)
        }
    }
}

pub fn run_table(inputs: &[PathBuf], csv: bool) -> Result<bool, Error> {
    let mut reports: Vec<SweepReport> = Vec::with_capacity(inputs.len());
    for path in inputs {
        let data = fs::read_to_string(path)
            .map_err(|e| Error::domain(format!("cannot read {}: {e}", path.display())))?;
        reports.push(SweepReport::from_json(&data)?);
    }
    let table = asymptotic_table(&reports)?;
    if csv {
        print!("{}", table.render_csv());
    } else {
        print!("{}", table.render_text());
    }
    if !table.all_consistent {
        eprintln!("error: at least one report fails the exact Cauchy–Schwarz re-check");
    }
    Ok(table.all_consistent)
}
