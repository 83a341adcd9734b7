//! Command-line Monte-Carlo harness: BLER sweeps, PMP-table collection and
//! sorter-complexity reports for polar list decoders.

use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use polarsim::config::{parse_profile, parse_sweep, ConfigError, DecoderKind, RawConfig};
use polarsim::{
    cas_table, run_bler_sweep, run_pmp_collection, write_bler_csv, write_boxes_csv,
    write_cas_csv, SimConfig, SimError, ALL_NODE_CLASSES,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Sweep Es/N0 and record block/bit error rates.
    Bler,
    /// Collect the path-metric-probability table at one Es/N0 point.
    Pmp,
    /// Emit the sorter compare-and-select complexity table.
    Cas,
}

/// Monte-Carlo simulator for polar successive-cancellation list decoders.
#[derive(Debug, Parser)]
#[command(version, about)]
struct Cli {
    /// Configuration file (`[code]`/`[sim]` sections, `key = value` lines).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Decoder to simulate.
    #[arg(long, value_parser = ["sc", "scl", "sscl", "ps-scl"])]
    decoder: Option<String>,
    /// List size L.
    #[arg(long)]
    list: Option<usize>,
    /// Stair selection profile `x,y,z` (or a single `x` for a rectangle).
    #[arg(long)]
    profile: Option<String>,
    /// Decoded subtree size.
    #[arg(long = "node-size", value_parser = ["4", "8"])]
    node_size: Option<String>,
    /// Es/N0 sweep in dB: `a:b:step`, a comma list, or one value.
    #[arg(long, allow_hyphen_values = true)]
    esn0: Option<String>,
    /// Base RNG seed; frame i uses stream (seed, i).
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory for CSV files.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// What to run.
    #[arg(long, value_enum, default_value_t = Mode::Bler)]
    mode: Mode,
}

fn overrides_from_cli(cli: &Cli) -> Result<RawConfig, ConfigError> {
    let flag_error = |flag: &str, message: String| ConfigError {
        problems: vec![(flag.to_string(), message)],
    };
    let mut raw = RawConfig::default();
    if let Some(d) = &cli.decoder {
        raw.decoder = Some(DecoderKind::parse(d).expect("clap restricts the values"));
    }
    raw.list_size = cli.list;
    if let Some(p) = &cli.profile {
        raw.profile = Some(parse_profile(p).map_err(|e| flag_error("--profile", e))?);
    }
    if let Some(n) = &cli.node_size {
        raw.node_size = Some(n.parse().expect("clap restricts the values"));
    }
    if let Some(s) = &cli.esn0 {
        raw.esn0_sweep = Some(parse_sweep(s).map_err(|e| flag_error("--esn0", e))?);
    }
    raw.seed = cli.seed;
    Ok(raw)
}

fn build_config(cli: &Cli) -> Result<SimConfig, ConfigError> {
    let base = match &cli.config {
        Some(path) => RawConfig::parse_file(path)?,
        None => RawConfig::default(),
    };
    let over = overrides_from_cli(cli)?;
    base.overlay(over).build()
}

fn bler_file_name(cfg: &SimConfig) -> String {
    let mut name = format!(
        "bler_{}_n{}_k{}",
        cfg.decoder.tag(),
        cfg.code.n_block(),
        cfg.code.k_payload()
    );
    if cfg.decoder != DecoderKind::Sc {
        name.push_str(&format!("_l{}", cfg.list_size));
    }
    if cfg.decoder == DecoderKind::PsScl {
        let p = cfg.profile.expect("validated");
        name.push_str(&format!("_p{}-{}-{}", p.x(), p.y(), p.z()));
    }
    name.push_str(&format!("_nv{}.csv", cfg.code.node_size()));
    name
}

fn run(cli: &Cli) -> Result<(), SimError> {
    match cli.mode {
        Mode::Cas => {
            let rows = cas_table();
            let path = cli.out.join("cas_table.csv");
            write_cas_csv(&mut BufWriter::new(File::create(&path)?), &rows)?;
            println!("wrote {}", path.display());
            for r in &rows {
                println!(
                    "node {} list {:>2}: scl {:>6} fast-sscl {:>5} ps-scl {:>5}",
                    r.node_size, r.list_size, r.scl, r.fast_sscl, r.ps_scl
                );
            }
        }
        Mode::Bler => {
            let cfg = build_config(cli)?;
            let records = run_bler_sweep(&cfg)?;
            let path = cli.out.join(bler_file_name(&cfg));
            write_bler_csv(&mut BufWriter::new(File::create(&path)?), &records)?;
            println!("wrote {}", path.display());
            for r in &records {
                println!(
                    "esn0 {:>6.3} dB: frames {:>8} errors {:>6} bler {:.3e} (95% CI {:.3e}..{:.3e}) in {:.1?}",
                    r.esn0_db, r.frames, r.frame_errors, r.bler, r.bler_ci_low, r.bler_ci_high, r.wall
                );
            }
        }
        Mode::Pmp => {
            let cfg = build_config(cli)?;
            let report = run_pmp_collection(&cfg)?;
            let nv = cfg.code.node_size();
            let aggregate = report.accumulator.table(&ALL_NODE_CLASSES);
            let path = cli.out.join(format!("pmp_nv{nv}_all.csv"));
            polar::analysis::write_pmp_csv(
                &mut BufWriter::new(File::create(&path)?),
                &aggregate,
            )?;
            println!("wrote {}", path.display());
            for class in ALL_NODE_CLASSES {
                let table = report.accumulator.table(&[class]);
                if table.steps() == 0 {
                    continue;
                }
                let path = cli.out.join(format!("pmp_nv{nv}_{}.csv", class.name()));
                polar::analysis::write_pmp_csv(
                    &mut BufWriter::new(File::create(&path)?),
                    &table,
                )?;
                println!("wrote {}", path.display());
            }
            let path = cli.out.join(format!("pmp_nv{nv}_boxes.csv"));
            write_boxes_csv(
                &mut BufWriter::new(File::create(&path)?),
                &cfg.pmp_boxes,
                &aggregate,
            )?;
            println!("wrote {}", path.display());
            println!(
                "{} frames at {} dB, decoder bler {:.3e}",
                report.frames, report.esn0_db, report.tally_bler
            );
            for b in &cfg.pmp_boxes {
                let p = aggregate.box_probability(&b.profile).expect("box fits table");
                println!("box ({}): {:.5}%", b.label, 100.0 * p);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(SimError::Config(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
