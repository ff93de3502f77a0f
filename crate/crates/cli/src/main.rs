use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use burstic::cgzic::run_cgzic_scheme;
use burstic::schemes_two_user::{run_scheme, upper_bound_two_user};
use burstic::single_user::{interference_free_rate, optimal_burstiness};
use burstic::sweep::{
    format_g6, parse_config, parse_schemes, query_thresholds, reproduce_figure, run_sweep,
    ChannelParams, Figure, Model, SweepParam, SweepRange, SweepSpec, SweepTable, ThresholdMode,
};
use burstic::{Error, SchemeResult, SchemeTag, SearchConfig, UserBudget};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "burstic", version, about = "Sum rates of bursty interference channels with processing cost")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimal burstiness of one user (uses --p1 and --eps1).
    SingleUser(SingleUserArgs),
    /// Two-user interference channel.
    TwoUser {
        #[command(subcommand)]
        command: TwoUserCommand,
    },
    /// Three-user cascade Z interference channel.
    Cgzic {
        #[command(subcommand)]
        command: CgzicCommand,
    },
    /// Emit the dataset behind one of the preset figures.
    Reproduce(ReproduceArgs),
}

#[derive(Subcommand)]
enum TwoUserCommand {
    Sweep(SweepArgs),
    /// Very-strong interference thresholds.
    Thresholds(ThresholdArgs),
    /// Sum rate of one scheme at one channel.
    Rate(RateArgs),
}

#[derive(Subcommand)]
enum CgzicCommand {
    Sweep(SweepArgs),
    /// Sum rate of one scheme at one channel.
    Rate(RateArgs),
}

#[derive(Args, Default)]
struct ChannelArgs {
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    #[arg(long)]
    a1: Option<f64>,
    #[arg(long)]
    a2: Option<f64>,
    #[arg(long)]
    p1: Option<f64>,
    #[arg(long)]
    p2: Option<f64>,
    #[arg(long)]
    p3: Option<f64>,
    #[arg(long)]
    eps1: Option<f64>,
    #[arg(long)]
    eps2: Option<f64>,
    #[arg(long)]
    eps3: Option<f64>,
    /// key=value file; flags given on the command line take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct GridArgs {
    /// Coarse grid spacing for every optimizer.
    #[arg(long)]
    grid_res: Option<f64>,
    /// Number of local refinement rounds.
    #[arg(long)]
    refinements: Option<usize>,
}

#[derive(Args)]
struct SingleUserArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    #[command(flatten)]
    grid: GridArgs,
    /// Swept parameter: a, b, a1, a2, p, p1..p3, eps, eps1..eps3.
    #[arg(long)]
    sweep: Option<String>,
    /// start:stop:step
    #[arg(long)]
    range: Option<String>,
    /// Comma-separated schemes (I,II,III,IV) or "all".
    #[arg(long)]
    schemes: Option<String>,
    /// Append the maximizing profile of this scheme.
    #[arg(long)]
    argmax: Option<String>,
    /// Output path, or "stdout".
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct ThresholdArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    /// exact or asymptotic
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct RateArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long)]
    scheme: String,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct ReproduceArgs {
    /// fig4 .. fig10
    #[arg(long)]
    figure: String,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long)]
    out: Option<String>,
}

/// Flag values layered over an optional config file.
struct Settings {
    file: BTreeMap<String, String>,
}

impl Settings {
    fn load(path: Option<&PathBuf>) -> Result<Self, Error> {
        let file = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| {
                    Error::InvalidParameter(format!("cannot read config {}: {e}", p.display()))
                })?;
                parse_config(&text)?
            }
            None => BTreeMap::new(),
        };
        Ok(Settings { file })
    }

    fn text(&self, key: &str, flag: Option<&String>) -> Option<String> {
        flag.cloned().or_else(|| self.file.get(key).cloned())
    }

    fn num(&self, key: &str, flag: Option<f64>) -> Result<Option<f64>, Error> {
        if flag.is_some() {
            return Ok(flag);
        }
        self.file
            .get(key)
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|_| Error::InvalidParameter(format!("config {key}: bad number {v:?}")))
            })
            .transpose()
    }

    fn channel(&self, c: &ChannelArgs) -> Result<ChannelParams, Error> {
        let d = ChannelParams::default();
        let get = |key: &str, flag: Option<f64>, default: f64| -> Result<f64, Error> {
            Ok(self.num(key, flag)?.unwrap_or(default))
        };
        Ok(ChannelParams {
            a: get("a", c.a, d.a)?,
            b: get("b", c.b, d.b)?,
            a1: get("a1", c.a1, d.a1)?,
            a2: get("a2", c.a2, d.a2)?,
            p: [
                get("p1", c.p1, d.p[0])?,
                get("p2", c.p2, d.p[1])?,
                get("p3", c.p3, d.p[2])?,
            ],
            eps: [
                get("eps1", c.eps1, d.eps[0])?,
                get("eps2", c.eps2, d.eps[1])?,
                get("eps3", c.eps3, d.eps[2])?,
            ],
        })
    }

    fn search(&self, g: &GridArgs) -> Result<SearchConfig, Error> {
        let mut cfg = SearchConfig::default();
        if let Some(r) = self.num("grid-res", g.grid_res)? {
            cfg.fraction.resolution = r;
            cfg.split.resolution = r;
            cfg.profile3.resolution = r;
        }
        let refinements = match g.refinements {
            Some(n) => Some(n),
            None => self
                .file
                .get("refinements")
                .map(|v| {
                    v.parse::<usize>().map_err(|_| {
                        Error::InvalidParameter(format!("config refinements: bad count {v:?}"))
                    })
                })
                .transpose()?,
        };
        if let Some(n) = refinements {
            cfg.fraction.refinements = n;
            cfg.split.refinements = n;
            cfg.profile3.refinements = n;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn open_out(target: Option<String>) -> Result<Box<dyn Write>, Error> {
    match target.as_deref() {
        None | Some("stdout") | Some("-") => Ok(Box::new(io::stdout().lock())),
        Some(path) => {
            let f = File::create(path)
                .map_err(|e| Error::Output(format!("cannot create {path}: {e}")))?;
            Ok(Box::new(BufWriter::new(f)))
        }
    }
}

fn write_lines(out: Option<String>, header: &str, rows: &[Vec<String>]) -> Result<(), Error> {
    let mut w = open_out(out)?;
    let io = |e: io::Error| Error::Output(e.to_string());
    writeln!(w, "{header}").map_err(io)?;
    for r in rows {
        writeln!(w, "{}", r.join(",")).map_err(io)?;
    }
    w.flush().map_err(io)
}

fn default_range(param: SweepParam, base: &ChannelParams) -> Result<SweepRange, Error> {
    match param {
        SweepParam::A | SweepParam::B | SweepParam::A1 => SweepRange::new(1.0, 6.0, 0.05),
        SweepParam::A2 => SweepRange::new(0.0, 1.0, 0.05),
        SweepParam::Eps => {
            let top = base.p.iter().cloned().fold(f64::INFINITY, f64::min);
            SweepRange::new(0.0, top, 0.1)
        }
        SweepParam::Eps1 => SweepRange::new(0.0, base.p[0], 0.1),
        SweepParam::Eps2 => SweepRange::new(0.0, base.p[1], 0.1),
        SweepParam::Eps3 => SweepRange::new(0.0, base.p[2], 0.1),
        _ => Err(Error::InvalidParameter(format!(
            "--range is required when sweeping {param}"
        ))),
    }
}

fn sweep(model: Model, args: SweepArgs) -> Result<(), Error> {
    let s = Settings::load(args.channel.config.as_ref())?;
    let base = s.channel(&args.channel)?;
    let default_param = if model == Model::TwoUser { "a" } else { "a1" };
    let param: SweepParam = s
        .text("sweep", args.sweep.as_ref())
        .unwrap_or_else(|| default_param.to_string())
        .parse()?;
    let range = match s.text("range", args.range.as_ref()) {
        Some(r) => r.parse()?,
        None => default_range(param, &base)?,
    };
    let mut spec = SweepSpec::new(model, param, range, base);
    if let Some(list) = s.text("schemes", args.schemes.as_ref()) {
        spec.schemes = parse_schemes(&list)?;
    }
    if let Some(tag) = s.text("argmax", args.argmax.as_ref()) {
        spec.argmax = Some(tag.parse()?);
    }
    spec.search = s.search(&args.grid)?;
    let table = run_sweep(&spec)?;
    emit(&table, s.text("out", args.out.as_ref()))
}

fn emit(table: &SweepTable, out: Option<String>) -> Result<(), Error> {
    table.write_csv(open_out(out)?)
}

fn single_user(args: SingleUserArgs) -> Result<(), Error> {
    let s = Settings::load(args.channel.config.as_ref())?;
    let params = s.channel(&args.channel)?;
    let budget = UserBudget::new(params.p[0], params.eps[0])?;
    let point = optimal_burstiness(budget);
    let rate = interference_free_rate(budget).bits();
    write_lines(
        s.text("out", args.out.as_ref()),
        "p,eps,theta,nu,rate",
        &[vec![
            format_g6(params.p[0]),
            format_g6(params.eps[0]),
            format_g6(point.theta),
            format_g6(point.nu),
            format_g6(rate),
        ]],
    )
}

fn thresholds(args: ThresholdArgs) -> Result<(), Error> {
    let s = Settings::load(args.channel.config.as_ref())?;
    let ch = s.channel(&args.channel)?.two_user()?;
    let mode: ThresholdMode = s
        .text("mode", args.mode.as_ref())
        .unwrap_or_else(|| "exact".into())
        .parse()?;
    let r = query_thresholds(&ch, mode)?;
    write_lines(
        s.text("out", args.out.as_ref()),
        "a_min,b_min,a_classical,b_classical",
        &[[r.a_min, r.b_min, r.classical.0, r.classical.1]
            .iter()
            .map(|v| format_g6(*v))
            .collect()],
    )
}

fn rate(model: Model, args: RateArgs) -> Result<(), Error> {
    let s = Settings::load(args.channel.config.as_ref())?;
    let params = s.channel(&args.channel)?;
    let cfg = s.search(&args.grid)?;
    let tag: SchemeTag = args.scheme.parse()?;
    let (res, ub): (SchemeResult, f64) = match model {
        Model::TwoUser => {
            let ch = params.two_user()?;
            (run_scheme(&ch, tag, &cfg)?, upper_bound_two_user(&ch).bits())
        }
        Model::Cascade => {
            let ch = params.cascade()?;
            (
                run_cgzic_scheme(&ch, tag, &cfg)?,
                burstic::cgzic::upper_bound_cgzic(&ch).bits(),
            )
        }
    };
    let thetas = res
        .profile
        .map(|p| p.thetas().iter().map(|t| format_g6(*t)).collect::<Vec<_>>().join(";"))
        .unwrap_or_else(|| "NA".into());
    write_lines(
        s.text("out", args.out.as_ref()),
        "scheme,sum_rate,upper_bound,thetas",
        &[vec![
            tag.numeral().to_string(),
            format_g6(res.sum_rate.bits()),
            format_g6(ub),
            thetas,
        ]],
    )
}

fn reproduce(args: ReproduceArgs) -> Result<(), Error> {
    let s = Settings::load(None)?;
    let fig: Figure = args.figure.parse()?;
    let table = reproduce_figure(fig, &s.search(&args.grid)?)?;
    emit(&table, args.out)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Regime { .. } => 3,
        Error::Invariant(_) | Error::NoFeasiblePoint => 4,
        Error::Output(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::SingleUser(a) => single_user(a),
        Command::TwoUser { command } => match command {
            TwoUserCommand::Sweep(a) => sweep(Model::TwoUser, a),
            TwoUserCommand::Thresholds(a) => thresholds(a),
            TwoUserCommand::Rate(a) => rate(Model::TwoUser, a),
        },
        Command::Cgzic { command } => match command {
            CgzicCommand::Sweep(a) => sweep(Model::Cascade, a),
            CgzicCommand::Rate(a) => rate(Model::Cascade, a),
        },
        Command::Reproduce(a) => reproduce(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("burstic: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
