//! Command-line driver: JSON run configs in, reproducible CSV/JSON artifacts
//! out.
//!
//! Exit codes: 0 success, 1 property or criterion failure, 2 configuration
//! error, 3 numerical failure (unitarity loss, norm drift, quadrature).

use abcage::config::{self, FrameSpec, InitialSpec};
use abcage::dynamics::{self, StepControl};
use abcage::export;
use abcage::floquet::{self, SweepSpec};
use abcage::lattice::{self, FluxedRhombicParams};
use abcage::validate::{run_battery, Inject};
use abcage::Error;
use clap::{Args, Parser, Subcommand};
use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "abcage",
    version,
    about = "Aharonov-Bohm caging in driven rhombic photonic lattices"
)]
struct Cli {
    /// Worker threads for parameter sweeps (falls back to ABCAGE_THREADS,
    /// then to the number of cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Directory for output files (created if missing).
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArg {
    /// Path to the JSON run configuration.
    #[arg(long)]
    config: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Static band structure and compact flat-band states.
    Bands(ConfigArg),
    /// Floquet quasi-energy sweep with the effective-model overlay.
    Quasienergy(ConfigArg),
    /// Propagate an excitation through the modulated lattice.
    Propagate(ConfigArg),
    /// Physical waveguide design numbers from normalized parameters.
    Design {
        #[command(flatten)]
        config: ConfigArg,
        /// Also print the report as JSON to stdout.
        #[arg(long)]
        json: bool,
    },
    /// Run the built-in property battery.
    Validate {
        /// Reduced grids; finishes in well under a minute.
        #[arg(long)]
        quick: bool,
        /// Test hook: corrupt one directed hop to prove the battery notices.
        #[arg(long, hide = true)]
        inject_kappa_sign_flip: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_threads(cli.threads);
    let out_dir = cli.out.clone();
    let code = match run(cli, &out_dir) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    };
    ExitCode::from(code)
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::InvalidParameter(_) | Error::InvalidPhaseIndex(_) => 2,
        Error::NormDrift { .. }
        | Error::UnitarityLoss { .. }
        | Error::QuadratureNonConvergence { .. } => 3,
        _ => 2,
    }
}

fn init_threads(cli_threads: Option<usize>) {
    let threads = cli_threads.or_else(|| {
        std::env::var("ABCAGE_THREADS")
            .ok()
            .and_then(|s| s.parse().ok())
    });
    if let Some(n) = threads {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
    }
}

fn read_config(path: &Path) -> abcage::Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))
}

fn create_output(out_dir: &Path, rel: &str) -> abcage::Result<BufWriter<fs::File>> {
    let path = out_dir.join(rel);
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    Ok(BufWriter::new(fs::File::create(&path)?))
}

fn run(cli: Cli, out_dir: &Path) -> abcage::Result<u8> {
    match cli.command {
        Command::Bands(cfg) => cmd_bands(&cfg.config, out_dir),
        Command::Quasienergy(cfg) => cmd_quasienergy(&cfg.config, out_dir),
        Command::Propagate(cfg) => cmd_propagate(&cfg.config, out_dir),
        Command::Design { config, json } => cmd_design(&config.config, out_dir, json),
        Command::Validate {
            quick,
            inject_kappa_sign_flip,
        } => cmd_validate(quick, inject_kappa_sign_flip),
    }
}

fn cmd_bands(config_path: &Path, out_dir: &Path) -> abcage::Result<u8> {
    let cfg: config::BandsConfig = config::load(&read_config(config_path)?)?;
    cfg.validate()?;
    let kappa = cfg.kappa_si();
    let params = FluxedRhombicParams::new(kappa, cfg.gamma_rad, 2, lattice::Boundary::Periodic)?;
    let bands = lattice::bloch_bands(&params, cfg.q_count)?;
    let header = export::echo_header(&cfg)?;
    export::write_bands_csv(create_output(out_dir, &cfg.bands_csv)?, &header, &bands)?;
    let states = lattice::compact_flat_band_states(kappa);
    export::write_states_json(create_output(out_dir, &cfg.states_json)?, &cfg, &states)?;
    println!(
        "bands: wrote {} ({} momenta) and {}",
        cfg.bands_csv, cfg.q_count, cfg.states_json
    );
    Ok(0)
}

fn cmd_quasienergy(config_path: &Path, out_dir: &Path) -> abcage::Result<u8> {
    let cfg: config::QuasiEnergyConfig = config::load(&read_config(config_path)?)?;
    cfg.validate()?;
    let spec = SweepSpec {
        gamma_values: floquet::uniform_grid(cfg.gamma_min, cfg.gamma_max, cfg.gamma_count),
        phi: cfg.phi_rad,
        order: cfg.order,
        omega_over_kappa: cfg.omega_over_kappa,
        q_values: lattice::brillouin_grid(cfg.q_count),
    };
    let rows = floquet::sweep(&spec)?;
    let header = export::echo_header(&cfg)?;
    export::write_sweep_csv(create_output(out_dir, &cfg.sweep_csv)?, &header, &rows)?;
    println!(
        "quasienergy: wrote {} ({} Gamma x {} q rows)",
        cfg.sweep_csv, cfg.gamma_count, cfg.q_count
    );
    Ok(0)
}

fn cmd_propagate(config_path: &Path, out_dir: &Path) -> abcage::Result<u8> {
    let cfg: config::PropagateConfig = config::load(&read_config(config_path)?)?;
    cfg.validate()?;
    let drive = cfg.drive()?;
    let initial = cfg.initial_field()?;
    let sample_every = cfg.sample_every_periods.map(|p| p * drive.period());
    let ctrl = StepControl::default();

    let frames = cfg.frames();
    let primary = dynamics::integrate(
        frames[0],
        &initial,
        1.0,
        &drive,
        cfg.kappa_t_end,
        sample_every,
        &ctrl,
    )?;
    let mut header = export::echo_header(&cfg)?;
    if cfg.frame == FrameSpec::CrossCheck {
        let secondary = dynamics::integrate(
            frames[1],
            &initial,
            1.0,
            &drive,
            cfg.kappa_t_end,
            sample_every,
            &ctrl,
        )?;
        let deviation = primary.max_intensity_deviation(&secondary);
        println!("cross-check max per-site intensity deviation (gauged vs lab): {deviation:.3e}");
        header.push_str(&format!(
            "# cross_check_max_deviation: {}\n",
            export::fmt_f64(deviation)
        ));
    }
    if primary.boundary_leak_flagged {
        eprintln!(
            "warning: boundary leak {:.3e} of input power; enlarge the window",
            primary.boundary_leak_max.unwrap_or(0.0)
        );
    }

    let cell = match cfg.initial {
        InitialSpec::SingleSite { cell, .. } => cell,
        _ => 0,
    };
    let cage = dynamics::default_cage(cell);
    export::write_trajectory_csv(
        create_output(out_dir, &cfg.trajectory_csv)?,
        &header,
        &primary,
    )?;
    export::write_summary_csv(
        create_output(out_dir, &cfg.summary_csv)?,
        &header,
        &primary,
        &cage,
        cell,
    )?;
    println!(
        "propagate: wrote {} and {} ({} samples)",
        cfg.trajectory_csv,
        cfg.summary_csv,
        primary.times.len(),
    );
    Ok(0)
}

fn cmd_design(config_path: &Path, out_dir: &Path, json: bool) -> abcage::Result<u8> {
    let cfg: config::DesignConfig = config::load(&read_config(config_path)?)?;
    cfg.validate()?;
    let design = cfg.design()?;
    let fab = abcage::design::fabrication_parameters(&design)?;
    let norm = design.normalized();

    println!("waveguide design");
    println!("  wavelength          {:>12.4} nm", design.wavelength * 1e9);
    println!("  substrate index     {:>12.4}", design.substrate_index);
    println!(
        "  half spacing d      {:>12.4} um",
        design.half_spacing * 1e6
    );
    println!("  kappa               {:>12.6} cm^-1", design.kappa / 1e2);
    println!("  sigma               {:>12.6} cm^-1", design.sigma / 1e2);
    println!("  omega               {:>12.6} cm^-1", design.omega / 1e2);
    println!("  Gamma               {:>12.6}", design.gamma_norm);
    println!("derived");
    println!("  omega / kappa       {:>12.6}", norm.omega_over_kappa);
    println!("  sigma / omega       {:>12.6}", norm.sigma_over_omega);
    println!("  bend radius R       {:>12.4} cm", fab.bend_radius * 1e2);
    println!(
        "  modulation period T {:>12.4} mm",
        fab.modulation_period * 1e3
    );
    println!("  index depth dn      {:>12.6e}", fab.index_depth);
    if let Some(kt) = cfg.kappa_t_end {
        let length = abcage::design::array_length(&design, kt);
        println!(
            "  array length        {:>12.4} cm  (kappa t = {kt})",
            length * 1e2
        );
    }

    if json || cfg.report_json.is_some() {
        let report = serde_json::json!({
            "artifact_version": env!("CARGO_PKG_VERSION"),
            "config": &cfg,
            "design_si": &design,
            "normalized": &norm,
            "fabrication": &fab,
            "array_length_m": cfg.kappa_t_end.map(|kt| abcage::design::array_length(&design, kt)),
        });
        let text = serde_json::to_string_pretty(&report)?;
        if json {
            println!("{text}");
        }
        if let Some(path) = &cfg.report_json {
            use std::io::Write;
            let mut w = create_output(out_dir, path)?;
            w.write_all(text.as_bytes())?;
            w.write_all(b"\n")?;
        }
    }
    Ok(0)
}

fn cmd_validate(quick: bool, inject: bool) -> abcage::Result<u8> {
    let inject = if inject {
        Inject::KappaSignFlip
    } else {
        Inject::None
    };
    let reports = run_battery(quick, inject);
    let mut failures = 0;
    for r in &reports {
        let tag = if r.passed { "PASS" } else { "FAIL" };
        println!("[{tag}] {:<34} {}", r.name, r.detail);
        if !r.passed {
            failures += 1;
        }
    }
    if failures == 0 {
        println!("all {} properties passed", reports.len());
        Ok(0)
    } else {
        println!("{failures} of {} properties failed", reports.len());
        Ok(1)
    }
}
