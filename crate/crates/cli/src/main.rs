use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use darboux_cli::commands::{self, parse_param, parse_projection, Format, Report};
use darboux_cli::scene::{Scene, Validation};
use darboux_cli::CliError;
use darboux_core::darboux::ImageKind;

#[derive(Parser)]
#[command(name = "darboux", version, about = "Darboux frames and pseudo-spherical images of curves on spacelike surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SceneArgs {
    /// Scene JSON file, or catalog:<id>.
    scene: String,
    /// Catalog parameter override, name=value. Repeatable.
    #[arg(long = "param", value_parser = parse_param)]
    params: Vec<(String, f64)>,
    /// Jet order; overrides the scene and DARBOUX_JET_ORDER.
    #[arg(long)]
    order: Option<usize>,
    /// Warn instead of failing when the surface is not spacelike.
    #[arg(long)]
    lenient: bool,
    /// Write to this file instead of standard output.
    #[arg(short, long)]
    output: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Sample the frame, curvatures and δ invariants along the curve.
    Analyze {
        #[command(flatten)]
        scene: SceneArgs,
        /// Number of evenly spaced arc-length samples (default 64).
        #[arg(long)]
        samples: Option<usize>,
        /// csv or json.
        #[arg(long, default_value = "csv")]
        format: Format,
    },
    /// Locate and classify the singular points of one image.
    Classify {
        #[command(flatten)]
        scene: SceneArgs,
        /// Tr, Sr, Lr, So or Lo.
        #[arg(long)]
        image: ImageKind,
        /// Parameter grid for the sign-change scan (default 2048).
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Check frame, sphere, duality and derivative identities.
    Verify {
        #[command(flatten)]
        scene: SceneArgs,
        /// Number of evenly spaced arc-length samples (default 64).
        #[arg(long)]
        samples: Option<usize>,
        /// text or json.
        #[arg(long, default_value = "text")]
        format: Format,
    },
    /// Write one image curve as csv, json or svg.
    Export {
        #[command(flatten)]
        scene: SceneArgs,
        /// Tr, Sr, Lr, So or Lo.
        #[arg(long)]
        image: ImageKind,
        /// csv, json or svg.
        #[arg(long, default_value = "json")]
        format: Format,
        /// Coordinate plane of the SVG: xy (x1, x2), x0x1 or x0x2.
        #[arg(long, default_value = "xy", value_parser = parse_projection)]
        projection: [usize; 2],
        /// Number of points along the curve (default 512).
        #[arg(long)]
        samples: Option<usize>,
    },
    /// List the built-in example scenes.
    Catalog {
        /// Machine-readable listing.
        #[arg(long)]
        json: bool,
    },
}

fn load(args: &SceneArgs) -> Result<Scene, CliError> {
    let validation = if args.lenient { Validation::Warn } else { Validation::Fail };
    let scene = commands::load(&args.scene, &args.params, validation)?;
    for w in &scene.warnings {
        eprintln!("warning: {}", w);
    }
    Ok(scene)
}

fn run(cli: Cli) -> Result<(Report, Option<String>), CliError> {
    Ok(match cli.command {
        Command::Analyze { scene, samples, format } => {
            let s = load(&scene)?;
            (commands::analyze(&s, samples, scene.order, format)?, scene.output)
        }
        Command::Classify { scene, image, grid } => {
            let s = load(&scene)?;
            (commands::classify(&s, image, grid, scene.order)?, scene.output)
        }
        Command::Verify { scene, samples, format } => {
            let s = load(&scene)?;
            (commands::verify(&s, samples, scene.order, format)?, scene.output)
        }
        Command::Export {
            scene,
            image,
            format,
            projection,
            samples,
        } => {
            let s = load(&scene)?;
            (
                commands::export(&s, image, format, projection, samples, scene.order)?,
                scene.output,
            )
        }
        Command::Catalog { json } => (
            commands::catalog_listing(if json { Format::Json } else { Format::Text })?,
            None,
        ),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(cli).and_then(|(report, path)| {
        match path {
            Some(p) => std::fs::write(&p, &report.text).map_err(|e| CliError::Io {
                path: p,
                message: e.to_string(),
            })?,
            None => print!("{}", report.text),
        }
        Ok(report.ok)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
