use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use volrad::classify::comparison_table;
use volrad::cli::{self, RunConfig, Settings};
use volrad::synth::{benchmark_templates, make_synth_dataset};
use volrad::Error;

#[derive(Parser)]
#[command(name = "volrad", version, about = "Volume-radius fractal texture analysis")]
struct Cli {
    #[command(flatten)]
    common: CommonArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// JSON file with RunConfig fields; flags override it
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long = "r-max", global = true)]
    r_max: Option<u32>,
    /// Fraction of pixels used as sphere centers
    #[arg(long, global = true, conflicts_with = "n_centers")]
    fraction: Option<f64>,
    #[arg(long = "n-centers", global = true)]
    n_centers: Option<usize>,
    /// Points per signature segment
    #[arg(long, global = true)]
    m: Option<usize>,
    /// vrfd, fourier, glcm, gabor, a comma list, or all
    #[arg(long, global = true)]
    method: Option<String>,
    /// Cut dataset images into WxH tiles
    #[arg(long, global = true)]
    tile: Option<String>,
    #[arg(long = "z-scale", global = true)]
    z_scale: Option<u32>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Texture signatures (or baseline features) for PGM images
    Signature {
        #[arg(required = true)]
        images: Vec<PathBuf>,
        /// Also write each image's volume curve
        #[arg(long)]
        curves: bool,
    },
    /// Mean and spread of the fractal dimension over repeated samplings
    Dimension {
        image: PathBuf,
        #[arg(long, default_value_t = 30)]
        repeats: usize,
    },
    /// Dimension spread as a function of the center fraction
    Stability {
        image: PathBuf,
        #[arg(long, value_delimiter = ',', default_values_t = [0.01, 0.05, 0.10, 0.20])]
        fractions: Vec<f64>,
        #[arg(long, default_value_t = 30)]
        repeats: usize,
    },
    /// Leave-one-out LDA accuracy on a root/<class>/<image>.pgm dataset
    Classify { root: PathBuf },
    /// Accuracy as a function of the signature segment length
    SweepM {
        root: PathBuf,
        #[arg(long = "m-list", value_delimiter = ',', default_values_t = [5, 10, 15, 20])]
        m_list: Vec<usize>,
    },
    /// Write the five-class synthetic benchmark dataset as PGM files
    Synth {
        root: PathBuf,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        #[arg(long, default_value_t = 64)]
        size: usize,
        #[arg(long = "base-seed", default_value_t = 0)]
        base_seed: u64,
    },
}

fn settings(common: &CommonArgs) -> Result<Settings, Error> {
    let file = match &common.config {
        Some(path) => RunConfig::from_json_file(path)?,
        None => RunConfig::default(),
    };
    let flags = RunConfig {
        r_max: common.r_max,
        center_fraction: common.fraction,
        n_centers: common.n_centers,
        m: common.m,
        seed: common.seed,
        method: common.method.clone(),
        tile: common.tile.clone(),
        out: common.out.clone(),
        z_scale: common.z_scale,
    };
    file.overlay(flags).resolve()
}

fn run(cli: Cli) -> Result<(), Error> {
    let settings = settings(&cli.common)?;
    match cli.command {
        Command::Signature { images, curves } => {
            let out = cli::cmd_signature(&images, &settings, curves)?;
            for f in out.files {
                println!("wrote {}", f.display());
            }
        }
        Command::Dimension { image, repeats } => {
            let stats = cli::cmd_dimension(&image, &settings, repeats)?;
            println!("D mean {:.6} std {:.6} over {} repeats", stats.mean, stats.std, stats.runs.len());
        }
        Command::Stability {
            image,
            fractions,
            repeats,
        } => {
            println!("{:>9} {:>9} {:>10} {:>10}", "fraction", "centers", "mean D", "std D");
            for r in cli::cmd_stability(&image, &settings, &fractions, repeats)? {
                println!("{:>9} {:>9} {:>10.6} {:>10.6}", r.fraction, r.n_centers, r.mean_d, r.std_d);
            }
        }
        Command::Classify { root } => {
            let rows = cli::cmd_classify(&root, &settings)?;
            print!("{}", comparison_table(&rows));
        }
        Command::SweepM { root, m_list } => {
            println!("{:>4} {:>4} {:>12}", "m", "k", "success %");
            for r in cli::cmd_sweep_m(&root, &settings, &m_list)? {
                println!("{:>4} {:>4} {:>12.2}", r.m, r.k, r.accuracy_percent);
            }
        }
        Command::Synth {
            root,
            samples,
            size,
            base_seed,
        } => {
            let ds = make_synth_dataset(&benchmark_templates(size, size), samples, base_seed)?;
            ds.write_to_dir(&root)?;
            println!("wrote {} images in {} classes to {}", ds.len(), ds.n_classes(), root.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_input_error() { 2 } else { 1 })
        }
    }
}
