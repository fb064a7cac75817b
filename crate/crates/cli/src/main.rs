use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use tilehull::dto::MatrixDto;
use tilehull::fixtures::load_fixtures;
use tilehull::pipeline::{Config, Pipeline, PipelineError};
use tilehull::report::{self, PipelineReport};
use tilehull::system_file::{self, BUILTINS};
use tilehull::{svg, verify};
use tilehull_core::collar::{collared_substitution_matrix, CensusOptions};
use tilehull_core::exact::Motion;
use tilehull_core::intlin::IntMatrix;
use tilehull_core::tiling::{substitute, Patch, Tile};

#[derive(Parser)]
#[command(name = "tilehull", version, about = "Cohomology of substitution tiling hulls")]
struct Cli {
    /// Built-in system name (pinwheel, triangle, toy) or a JSON system file.
    #[arg(long, global = true, default_value = "pinwheel")]
    system: String,
    /// Work with this power of the substitution.
    #[arg(long, global = true, default_value_t = 1)]
    power: u32,
    /// Substitution depth of the patches that seed the collared census.
    #[arg(long, global = true)]
    seed_level: Option<u32>,
    /// Express the degree-two map in the embedded tile-value generators.
    #[arg(long, global = true)]
    paper_generators: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output file (a directory for export-matrices); stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Quotient {
    /// Degree two of the quotient from this run's own limit.
    Computed,
    /// Degree two from the limit of the embedded reference matrix.
    Fixtures,
}

#[derive(Subcommand)]
enum Command {
    /// Collared tile census.
    Collar,
    /// Cell counts and faces of the Anderson-Putnam complex.
    Complex,
    /// Cohomology of the complex.
    Cohomology,
    /// Maps induced by the substitution on cohomology.
    Induced,
    /// Direct limits of the induced maps.
    Limit,
    /// Half-turn symmetric centres and their orbits under substitution.
    Singularities,
    /// Cohomology of the hull.
    Hull {
        #[arg(long, value_enum, default_value_t = Quotient::Computed)]
        quotient: Quotient,
    },
    /// Every stage in one JSON document.
    Report,
    /// Draw a substituted prototile as SVG.
    Render {
        #[arg(long, default_value_t = 2)]
        level: u32,
        /// Prototile label; the first prototile when absent.
        #[arg(long)]
        tile: Option<String>,
    },
    /// Write the coboundary, induced and substitution matrices.
    ExportMatrices,
    /// Check the reproduction criteria and print one line per criterion.
    VerifyPaper,
}

enum Failure {
    Input(String),
    Computation(String),
    Verification(String),
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::Input(m) => Failure::Input(m),
            PipelineError::Computation(m) => Failure::Computation(m),
        }
    }
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> Failure + '_ {
    move |e| Failure::Input(format!("{}: {e}", path.display()))
}

fn config(cli: &Cli) -> Result<Config, Failure> {
    let system = if BUILTINS.contains(&cli.system.as_str()) {
        system_file::builtin(&cli.system)
    } else {
        let path = Path::new(&cli.system);
        if !path.exists() {
            return Err(Failure::Input(format!(
                "--system: {:?} is neither a built-in ({}) nor an existing file",
                cli.system,
                BUILTINS.join(", ")
            )));
        }
        let text = std::fs::read_to_string(path).map_err(io_err(path))?;
        system_file::parse_system(&text)
    }
    .map_err(|e| Failure::Input(format!("{}: {e}", cli.system)))?;
    if cli.power == 0 {
        return Err(Failure::Input("--power must be at least 1".into()));
    }
    Ok(Config {
        system_name: cli.system.clone(),
        system,
        power: cli.power,
        seed_level: cli.seed_level.unwrap_or(CensusOptions::default().seed_level),
        paper_generators: cli.paper_generators,
    })
}

fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(io_err(path)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn csv_text(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    if !header.is_empty() {
        w.write_record(header).expect("in-memory write");
    }
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

fn matrix_csv(m: &IntMatrix) -> String {
    let rows = m.to_rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
    csv_text(&[], rows)
}

fn joined<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let p = Pipeline::new(config(cli)?);
    let mut rep = PipelineReport::new(&p);
    let csv = cli.format == Format::Csv;
    match &cli.command {
        Command::Collar => {
            let r = report::census_report(&p)?;
            if csv {
                let rows = r
                    .tiles
                    .iter()
                    .map(|t| {
                        vec![
                            t.label.clone(),
                            t.base.clone(),
                            t.corona_size.to_string(),
                            t.symmetric.to_string(),
                            t.children.join(" "),
                        ]
                    })
                    .collect();
                return emit(cli, &csv_text(&["label", "base", "corona_size", "symmetric", "children"], rows));
            }
            rep.census = Some(r);
        }
        Command::Complex => {
            let r = report::complex_report(&p)?;
            if csv {
                let rows = r
                    .face_list
                    .iter()
                    .map(|f| {
                        let word: Vec<String> = f.boundary.iter().map(|(e, s)| format!("{}{e}", if *s < 0 { "-" } else { "+" })).collect();
                        vec![f.label.clone(), f.weight.to_string(), word.join(" ")]
                    })
                    .collect();
                return emit(cli, &csv_text(&["face", "weight", "boundary"], rows));
            }
            rep.complex = Some(r);
        }
        Command::Cohomology => {
            let r = report::cohomology_report(&p)?;
            if csv {
                let rows = [("0", &r.h0), ("1", &r.h1), ("2", &r.h2)]
                    .iter()
                    .map(|(d, g)| vec![d.to_string(), g.free_rank.to_string(), joined(&tilehull::dto::unbig(&g.torsion))])
                    .collect();
                return emit(cli, &csv_text(&["degree", "free_rank", "torsion"], rows));
            }
            rep.cohomology = Some(r);
        }
        Command::Induced => {
            let r = report::induced_report(&p)?;
            if csv {
                return emit(cli, &matrix_csv(&r.a2.to_matrix(0).map_err(Failure::Computation)?));
            }
            rep.induced = Some(r);
        }
        Command::Limit => {
            let r = report::limits_report(&p)?;
            if csv {
                let rows = [("0", &r.h0), ("1", &r.h1), ("2", &r.h2)]
                    .iter()
                    .map(|(d, g)| vec![d.to_string(), g.status.clone(), g.display.clone()])
                    .collect();
                return emit(cli, &csv_text(&["degree", "status", "group"], rows));
            }
            rep.limits = Some(r);
        }
        Command::Singularities => {
            let r = report::singularities_report(&p)?;
            if csv {
                let rows = r
                    .iter()
                    .map(|c| {
                        vec![
                            c.kind.clone(),
                            c.labels.join(" "),
                            c.period.map_or(String::new(), |x| x.to_string()),
                            joined(&c.orbit),
                        ]
                    })
                    .collect();
                return emit(cli, &csv_text(&["kind", "tiles", "period", "orbit"], rows));
            }
            rep.singularities = Some(r);
        }
        Command::Hull { quotient } => {
            let r = report::hull_report(&p, *quotient == Quotient::Fixtures)?;
            if csv {
                let rows = [("0", &r.h0), ("1", &r.h1), ("2", &r.h2), ("3", &r.h3)]
                    .iter()
                    .map(|(d, g)| vec![d.to_string(), g.status.clone(), g.display.clone()])
                    .collect();
                return emit(cli, &csv_text(&["degree", "status", "group"], rows));
            }
            rep.hull = Some(r);
        }
        Command::Report => {
            rep.census = Some(report::census_report(&p)?);
            rep.complex = Some(report::complex_report(&p)?);
            rep.cohomology = Some(report::cohomology_report(&p)?);
            rep.induced = Some(report::induced_report(&p)?);
            rep.limits = Some(report::limits_report(&p)?);
            rep.singularities = Some(report::singularities_report(&p)?);
            // an unsupported hull is recorded by its absence
            rep.hull = report::hull_report(&p, false).ok();
        }
        Command::Render { level, tile } => {
            let s = p.system()?;
            let proto = match tile {
                None => 0,
                Some(l) => s
                    .index_of(l)
                    .ok_or_else(|| Failure::Input(format!("--tile: no prototile {l:?}")))?,
            };
            let patch = substitute(&Patch::single(Tile::new(proto, Motion::identity())), s, *level);
            return emit(cli, &svg::render_patch(&patch, s));
        }
        Command::ExportMatrices => return export_matrices(cli, &p),
        Command::VerifyPaper => {
            let fx = load_fixtures().map_err(|e| Failure::Computation(e.to_string()))?;
            let results = verify::run_all(&p, &fx);
            let text = if csv {
                let rows = results
                    .iter()
                    .map(|r| vec![r.id.to_string(), r.title.to_string(), r.passed.to_string(), r.detail.clone()])
                    .collect();
                csv_text(&["criterion", "title", "passed", "detail"], rows)
            } else {
                verify::table(&results)
            };
            emit(cli, &text)?;
            let failed: Vec<String> = results.iter().filter(|r| !r.passed).map(|r| r.id.to_string()).collect();
            if !failed.is_empty() {
                return Err(Failure::Verification(format!("criteria {} failed", failed.join(", "))));
            }
            return Ok(());
        }
    }
    emit(cli, &json(&rep.finish(&p)))
}

fn export_matrices(cli: &Cli, p: &Pipeline) -> Result<(), Failure> {
    let cs = p.census()?;
    let cw = p.complex()?;
    let maps = p.maps()?;
    let a2 = p.a2_endo()?;
    let mats: Vec<(&str, IntMatrix)> = vec![
        ("substitution", collared_substitution_matrix(cs)),
        ("delta0", cw.delta0().clone()),
        ("delta1", cw.delta1().clone()),
        ("a0", maps.a0.matrix().clone()),
        ("a1", maps.a1.matrix().clone()),
        ("a2", a2.matrix.clone()),
    ];
    let dir = cli
        .out
        .clone()
        .ok_or_else(|| Failure::Input("export-matrices: --out <DIR> is required".into()))?;
    std::fs::create_dir_all(&dir).map_err(io_err(&dir))?;
    match cli.format {
        Format::Csv => {
            for (name, m) in &mats {
                let path = dir.join(format!("{name}.csv"));
                std::fs::write(&path, matrix_csv(m)).map_err(io_err(&path))?;
            }
        }
        Format::Json => {
            let map: std::collections::BTreeMap<&str, MatrixDto> =
                mats.iter().map(|(n, m)| (*n, MatrixDto::from(m))).collect();
            let path = dir.join("matrices.json");
            std::fs::write(&path, json(&map)).map_err(io_err(&path))?;
        }
    }
    let mut listing = String::new();
    for (name, m) in &mats {
        let _ = writeln!(listing, "{name}: {} x {}", m.rows(), m.cols());
    }
    eprint!("{listing}");
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Computation(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Verification(m)) => {
            eprintln!("verification failed: {m}");
            ExitCode::from(3)
        }
    }
}
