//! Command-line front end: builds a model, runs one computation and renders
//! the result as text, CSV or OFF.

pub mod model_file;
mod render;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use okounkov_core::geometry::rational;
use okounkov_core::models::{builtin_model, BuiltinModel, ModelRecipe};
use okounkov_core::oracle::{oracle_hull, OracleKind, OracleModel};
use okounkov_core::surface::{
    asymptotic_valuation_surface, mu_surface, okounkov_polygon, ord_along, zariski_decompose,
};
use okounkov_core::threefold::{
    asymptotic_valuation_3, chamber_of, check_flag_admissibility, limiting_body, mu_threefold, okounkov_body,
    ord_flag, polyhedrality_report, slice_at, t_partition, zariski_mds, ThreefoldModel,
};
use okounkov_core::{Error, QVector};

use model_file::ModelFile;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_ADMISSIBILITY: i32 = 3;
pub const EXIT_USAGE: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "okounkov", version, about = "Exact Newton-Okounkov bodies from numerical model data")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Built-in model name.
    #[arg(long, global = true)]
    model: Option<String>,

    /// JSON model file.
    #[arg(long, global = true, conflicts_with = "model")]
    model_file: Option<PathBuf>,

    /// Model parameter `key=value`; repeatable.
    #[arg(long = "param", value_name = "KEY=VALUE", global = true)]
    params: Vec<String>,

    /// Divisor coordinates in the model basis, e.g. "1,0,-1/2".
    #[arg(long, global = true, allow_hyphen_values = true)]
    divisor: Option<String>,

    /// Divisor as a combination of labels, e.g. "2*phiH+E2".
    #[arg(long, global = true, conflicts_with = "divisor", allow_hyphen_values = true)]
    divisor_expr: Option<String>,

    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Worker threads (falls back to OKOUNKOV_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Okounkov body of a big class.
    Body,
    /// Limiting body of a pseudo-effective class.
    LimitingBody,
    /// Slice of the body at x1 = t.
    Slice {
        #[arg(long, allow_hyphen_values = true)]
        t: String,
    },
    /// Zariski decomposition.
    Zariski,
    /// Right end of the first coordinate.
    Mu,
    /// Asymptotic order of vanishing along the flag divisor or a label.
    Ord {
        #[arg(long)]
        label: Option<String>,
    },
    /// Chamber cover of the path D - tS.
    Partition,
    /// Chambers of the model, or those containing the divisor.
    Chambers,
    /// Flag admissibility along the path D - tS.
    Admissibility,
    /// Polyhedrality report.
    Polyhedrality,
    /// Empirical body from explicit sections.
    Oracle {
        #[arg(long, default_value_t = 8)]
        mmax: u32,
    },
    /// Build the model and run all audits.
    Validate,
    /// Print the model as a JSON model file.
    Export,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Off,
}

/// Exit code and captured streams of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type CliResult<T> = Result<T, Failure>;

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            return if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let threads = cli
        .threads
        .or_else(|| std::env::var("OKOUNKOV_THREADS").ok().and_then(|s| s.trim().parse().ok()));
    let result = match threads {
        Some(n) if n > 0 => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(&cli)),
            Err(e) => Err(Failure::Usage(format!("cannot start {n} threads: {e}"))),
        },
        Some(_) => Err(Failure::Usage("--threads must be positive".into())),
        None => dispatch(&cli),
    };
    match result {
        Ok(stdout) => Outcome { code: EXIT_OK, stdout, stderr: String::new() },
        Err(Failure::Usage(m)) => Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {m}\n") },
        Err(Failure::Core(e)) => {
            let code = match e {
                Error::Admissibility { .. } => EXIT_ADMISSIBILITY,
                Error::UnknownModel(_) => EXIT_USAGE,
                _ => EXIT_VALIDATION,
            };
            Outcome { code, stdout: String::new(), stderr: format!("error: {e}\n") }
        }
    }
}

fn load_model(cli: &Cli) -> CliResult<BuiltinModel> {
    match (&cli.model, &cli.model_file) {
        (Some(name), None) => {
            let mut recipe = ModelRecipe::new(name);
            for p in &cli.params {
                let (k, v) = p
                    .split_once('=')
                    .ok_or_else(|| Failure::Usage(format!("--param expects key=value, got {p:?}")))?;
                recipe = recipe.param(k.trim(), v.trim());
            }
            Ok(builtin_model(&recipe)?)
        }
        (None, Some(path)) => {
            if !cli.params.is_empty() {
                return Err(Failure::Usage("--param only applies to built-in models".into()));
            }
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
            Ok(ModelFile::parse(&text)?.build()?)
        }
        (None, None) => Err(Failure::Usage("one of --model or --model-file is required".into())),
        (Some(_), Some(_)) => Err(Failure::Usage("--model and --model-file are exclusive".into())),
    }
}

/// Labels usable in `--divisor-expr`: basis labels first, then named
/// effective generators or curves.
fn label_classes(model: &BuiltinModel) -> Vec<(String, QVector)> {
    let (basis, extra): (&[String], Vec<(String, QVector)>) = match model {
        BuiltinModel::Surface { model, .. } => (
            model.basis_labels(),
            model.negative_curves().iter().map(|c| (c.label.clone(), c.class.clone())).collect(),
        ),
        BuiltinModel::Threefold(m) => (
            m.basis_labels(),
            m.eff_generators().iter().map(|g| (g.label.clone(), g.class.clone())).collect(),
        ),
    };
    let r = basis.len();
    let mut out: Vec<(String, QVector)> = basis
        .iter()
        .enumerate()
        .map(|(i, l)| (l.clone(), QVector::unit(r, i)))
        .collect();
    for (l, c) in extra {
        if !out.iter().any(|(k, _)| k == &l) {
            out.push((l, c));
        }
    }
    out
}

/// Parses `"2*phiH - 1/2*E1 + E2"`.
pub fn parse_divisor_expr(expr: &str, labels: &[(String, QVector)], rank: usize) -> Result<QVector, Error> {
    let compact: String = expr.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::Parse("empty divisor expression".into()));
    }
    let mut terms = Vec::new();
    let mut start = 0;
    for (i, ch) in compact.char_indices() {
        if (ch == '+' || ch == '-') && i > 0 && !compact[..i].ends_with('*') {
            terms.push(&compact[start..i]);
            start = i;
        }
    }
    terms.push(&compact[start..]);
    let mut total = QVector::zeros(rank);
    for term in terms {
        let (sign, body) = match term.as_bytes().first() {
            Some(b'-') => (rational::int(-1), &term[1..]),
            Some(b'+') => (rational::int(1), &term[1..]),
            _ => (rational::int(1), term),
        };
        let (coef, label) = match body.rsplit_once('*') {
            Some((c, l)) => (rational::parse(c)?, l),
            None => (rational::int(1), body),
        };
        let class = labels
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, c)| c)
            .ok_or_else(|| Error::Parse(format!("unknown label {label:?} in divisor expression")))?;
        total = total.add_scaled(&(sign * coef), class);
    }
    Ok(total)
}

fn rank_of(model: &BuiltinModel) -> usize {
    match model {
        BuiltinModel::Surface { model, .. } => model.rank(),
        BuiltinModel::Threefold(m) => m.rank(),
    }
}

fn divisor(cli: &Cli, model: &BuiltinModel) -> CliResult<QVector> {
    let rank = rank_of(model);
    let d = match (&cli.divisor, &cli.divisor_expr) {
        (Some(s), None) => QVector(
            s.split(',')
                .map(|x| rational::parse(x.trim()))
                .collect::<Result<Vec<_>, _>>()?,
        ),
        (None, Some(e)) => parse_divisor_expr(e, &label_classes(model), rank)?,
        _ => return Err(Failure::Usage("one of --divisor or --divisor-expr is required".into())),
    };
    if d.dim() != rank {
        return Err(Error::DimensionMismatch(format!("divisor has {} coordinates, model rank is {rank}", d.dim())).into());
    }
    Ok(d)
}

fn threefold<'a>(model: &'a BuiltinModel, command: &str) -> CliResult<&'a ThreefoldModel> {
    match model {
        BuiltinModel::Threefold(m) => Ok(m),
        BuiltinModel::Surface { .. } => Err(Failure::Usage(format!("{command} needs a threefold model"))),
    }
}

fn text_only(cli: &Cli, command: &str) -> CliResult<()> {
    if cli.format != Format::Text {
        return Err(Failure::Usage(format!("{command} only supports --format text")));
    }
    Ok(())
}

fn dispatch(cli: &Cli) -> CliResult<String> {
    let model = load_model(cli)?;
    match &cli.command {
        Command::Validate => {
            text_only(cli, "validate")?;
            Ok(render::validation(&model))
        }
        Command::Export => {
            text_only(cli, "export")?;
            Ok(ModelFile::from_model(&model).to_json() + "\n")
        }
        Command::Chambers if cli.divisor.is_none() && cli.divisor_expr.is_none() => {
            text_only(cli, "chambers")?;
            Ok(render::chamber_list(threefold(&model, "chambers")?))
        }
        command => {
            let d = divisor(cli, &model)?;
            run_on_divisor(cli, command, &model, &d)
        }
    }
}

fn run_on_divisor(cli: &Cli, command: &Command, model: &BuiltinModel, d: &QVector) -> CliResult<String> {
    if let BuiltinModel::Surface { model: s, flag } = model {
        flag.validate(s)?;
        return match command {
            Command::Body | Command::LimitingBody => {
                if matches!(command, Command::Body) && !s.is_big(d) {
                    return Err(Error::NotBig.into());
                }
                if cli.format == Format::Off {
                    return Err(Failure::Usage("OFF output needs a threefold body".into()));
                }
                Ok(render::surface_polygon(&okounkov_polygon(s, flag, d)?, cli.format))
            }
            Command::Zariski => {
                text_only(cli, "zariski")?;
                Ok(render::surface_zariski(s, &zariski_decompose(s, d)?))
            }
            Command::Mu => {
                text_only(cli, "mu")?;
                Ok(format!("mu {}\n", rational::fmt(&mu_surface(s, d, &flag.curve_class)?)))
            }
            Command::Ord { label } => {
                text_only(cli, "ord")?;
                Ok(match label {
                    Some(l) => format!("ord {l} {}\n", rational::fmt(&asymptotic_valuation_surface(s, d, l)?)),
                    None => format!("ord {}\n", rational::fmt(&ord_along(s, d, &flag.curve_class)?)),
                })
            }
            _ => Err(Failure::Usage("this command needs a threefold model".into())),
        };
    }
    let m = threefold(model, "this command")?;
    match command {
        Command::Body => Ok(render::body(&okounkov_body(m, d)?, cli.format)),
        Command::LimitingBody => Ok(render::body(&limiting_body(m, d)?, cli.format)),
        Command::Slice { t } => {
            let t = rational::parse(t.trim())?;
            let polygon = slice_at(m, d, &t)?;
            if cli.format == Format::Off {
                return Err(Failure::Usage("OFF output needs a threefold body".into()));
            }
            let chamber = chamber_of(m, &d.add_scaled(&-t.clone(), m.flag_surface_class()))?;
            Ok(render::slice(&t, &chamber.primary, &polygon, cli.format))
        }
        Command::Zariski => {
            text_only(cli, "zariski")?;
            Ok(render::threefold_zariski(&zariski_mds(m, d)?))
        }
        Command::Mu => {
            text_only(cli, "mu")?;
            Ok(format!("mu {}\n", rational::fmt(&mu_threefold(m, d)?)))
        }
        Command::Ord { label } => {
            text_only(cli, "ord")?;
            Ok(match label {
                Some(l) => format!("ord {l} {}\n", rational::fmt(&asymptotic_valuation_3(m, d, l)?)),
                None => format!("ord {}\n", rational::fmt(&ord_flag(m, d)?)),
            })
        }
        Command::Partition => {
            if cli.format == Format::Off {
                return Err(Failure::Usage("partition supports text or csv".into()));
            }
            Ok(render::partition(&t_partition(m, d)?, cli.format))
        }
        Command::Chambers => {
            text_only(cli, "chambers")?;
            let c = chamber_of(m, d)?;
            Ok(format!("primary {}\nall {}\n", c.primary, c.all.join(" ")))
        }
        Command::Admissibility => {
            text_only(cli, "admissibility")?;
            let report = check_flag_admissibility(m, d)?;
            if let Some(chamber) = report.failing {
                return Err(Error::Admissibility { chamber }.into());
            }
            Ok(render::admissibility(&report))
        }
        Command::Polyhedrality => {
            text_only(cli, "polyhedrality")?;
            Ok(render::polyhedrality(&polyhedrality_report(m, d)?))
        }
        Command::Oracle { mmax } => {
            let om = oracle_for(cli, m)?;
            if *mmax == 0 {
                return Err(Failure::Usage("--mmax must be positive".into()));
            }
            let hull = oracle_hull(&om, d, *mmax)?;
            if cli.format == Format::Csv {
                return Err(Failure::Usage("oracle supports text or off".into()));
            }
            Ok(render::polytope(&hull, cli.format))
        }
        Command::Validate | Command::Export => unreachable!("handled before divisor parsing"),
    }
}

/// The section oracle realises the two-point blow-up with a line as flag
/// curve; other models are refused.
fn oracle_for(cli: &Cli, m: &ThreefoldModel) -> CliResult<OracleModel> {
    let line = okounkov_core::models::blowup_p3_two_points(1).expect("built-in model");
    if cli.model.as_deref() != Some("blowup-p3-2pts") || m != &line {
        return Err(Error::Unavailable(
            "the section oracle is implemented for blowup-p3-2pts with d=1 only".into(),
        )
        .into());
    }
    Ok(OracleModel::new(OracleKind::BlowupTwoPoints))
}
