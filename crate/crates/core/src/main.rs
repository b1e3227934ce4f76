use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use lsmcpp::bench::{mean_relative_improvement, run_bench, BenchConfig, LS_ALGORITHM};
use lsmcpp::estc::{estc_path, full_stc_path};
use lsmcpp::init::{initial_solution, InitMethod};
use lsmcpp::io::generate::{make_incomplete_protected, random_instance, GeneratorConfig};
use lsmcpp::io::report::{report_text, write_results, RunRecord};
use lsmcpp::io::svg::render_svg;
use lsmcpp::io::{load_instance, Instance, SolutionFile};
use lsmcpp::oracle::oracle_mcpp;
use lsmcpp::search::{search, SearchParams};

/// Default output directory when `--out` is not given.
const OUT_DIR_ENV: &str = "MCPP_OUT_DIR";

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{path}: {source}")]
    File { path: PathBuf, source: lsmcpp::Error },
    #[error(transparent)]
    Lib(#[from] lsmcpp::Error),
    #[error("{0}")]
    Usage(String),
}

type CliResult<T> = std::result::Result<T, CliError>;

fn at<T>(path: &Path, r: lsmcpp::Result<T>) -> CliResult<T> {
    r.map_err(|source| CliError::File {
        path: path.to_path_buf(),
        source,
    })
}

#[derive(Parser)]
#[command(name = "lsmcpp", version, about = "Multi-robot coverage path planning on incomplete grid graphs")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance: initializer, then local search.
    Solve(SolveArgs),
    /// Run every instance over a range of seeds and report mean±std.
    Bench(BenchArgs),
    /// Generate a random instance.
    Gen(GenArgs),
    /// Remove random subcells from an instance, keeping it connected.
    Corrupt(CorruptArgs),
    /// Single-robot coverage path over the whole graph.
    Estc(EstcArgs),
    /// Exact minimum makespan by enumeration (tiny instances only).
    Oracle(OracleArgs),
    /// Render an instance, optionally with a solution, to SVG.
    Render(RenderArgs),
}

#[derive(Args, Clone)]
struct SearchArgs {
    /// Initial solution: greedy or vor.
    #[arg(long)]
    init: Option<InitMethod>,
    /// Number of search iterations.
    #[arg(long)]
    iters: Option<usize>,
    /// Forced deduplication period.
    #[arg(long)]
    dedup_period: Option<usize>,
    /// Pool weight learning rate.
    #[arg(long)]
    gamma: Option<f64>,
    /// Temperature reached after the last iteration (starts at 1).
    #[arg(long)]
    alpha_end: Option<f64>,
}

#[derive(Args)]
struct SolveArgs {
    instance: PathBuf,
    #[command(flatten)]
    search: SearchArgs,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory [default: $MCPP_OUT_DIR or .]
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write <name>.svg.
    #[arg(long)]
    svg: bool,
    /// Also write the iteration trace as <name>.trace.jsonl.
    #[arg(long)]
    trace: bool,
    /// Also write the paths as <name>.solution.json.
    #[arg(long)]
    solution: bool,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(required = true)]
    instances: Vec<PathBuf>,
    #[command(flatten)]
    search: SearchArgs,
    /// Seeds as a range `a-b` or a list `a,b,c`.
    #[arg(long, default_value = "0-11")]
    seeds: String,
    /// Output directory [default: $MCPP_OUT_DIR or .]
    #[arg(long)]
    out: Option<PathBuf>,
    /// CSV file name inside the output directory.
    #[arg(long, default_value = "bench.csv")]
    csv: String,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 10)]
    width: usize,
    #[arg(long, default_value_t = 10)]
    height: usize,
    /// Fraction of terrain cells that become obstacles.
    #[arg(long, default_value_t = 0.1)]
    obstacles: f64,
    /// Fraction of terrain cells that lose subcells.
    #[arg(long, default_value_t = 0.0)]
    incomplete: f64,
    #[arg(long, default_value_t = 4)]
    robots: usize,
    /// Random edge weights in [1, 10].
    #[arg(long)]
    weighted: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    name: Option<String>,
    /// Output file [default: stdout].
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CorruptArgs {
    instance: PathBuf,
    /// Fraction of terrain cells that lose 1–3 subcells.
    #[arg(long)]
    fraction: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file [default: stdout].
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct EstcArgs {
    instance: PathBuf,
    /// Whose root to start from.
    #[arg(long, default_value_t = 0)]
    robot: usize,
    /// Use the plain spanning-tree coverage path instead.
    #[arg(long)]
    full_stc: bool,
    /// Print the walk as well.
    #[arg(long)]
    walk: bool,
}

#[derive(Args)]
struct OracleArgs {
    instance: PathBuf,
}

#[derive(Args)]
struct RenderArgs {
    instance: PathBuf,
    /// Solution file written by `solve --solution`.
    #[arg(long)]
    solution: Option<PathBuf>,
    /// Output file [default: stdout].
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn out_dir(flag: Option<PathBuf>) -> CliResult<PathBuf> {
    let dir = flag
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    at(&dir, std::fs::create_dir_all(&dir).map_err(Into::into))?;
    Ok(dir)
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    at(path, std::fs::write(path, text).map_err(Into::into))
}

fn emit(output: Option<&Path>, text: &str) -> CliResult<()> {
    match output {
        Some(p) => write_file(p, text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(lsmcpp::Error::from)?;
            if !text.ends_with('\n') {
                out.write_all(b"\n").map_err(lsmcpp::Error::from)?;
            }
            Ok(())
        }
    }
}

fn load(path: &Path) -> CliResult<Instance> {
    at(path, load_instance(path))
}

/// Defaults, then instance overrides, then command-line flags.
fn resolve_params(inst: &Instance, a: &SearchArgs, seed: Option<u64>) -> CliResult<SearchParams> {
    let mut o = inst.params.clone();
    o.iters = a.iters.or(o.iters);
    o.dedup_period = a.dedup_period.or(o.dedup_period);
    o.gamma = a.gamma.or(o.gamma);
    o.alpha_end = a.alpha_end.or(o.alpha_end);
    o.seed = seed.or(o.seed);
    Ok(o.to_params()?)
}

fn parse_seeds(s: &str) -> CliResult<Vec<u64>> {
    let bad = || CliError::Usage(format!("invalid seed list {s:?}; use a-b or a,b,c"));
    if let Some((a, b)) = s.split_once('-') {
        let a: u64 = a.trim().parse().map_err(|_| bad())?;
        let b: u64 = b.trim().parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    s.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect()
}

fn solve(a: SolveArgs) -> CliResult<()> {
    let inst = load(&a.instance)?;
    let params = resolve_params(&inst, &a.search, a.seed)?;
    let init = a.search.init.unwrap_or_default();
    let d = &inst.decomposed;

    let start = Instant::now();
    let initial = initial_solution(d, &inst.roots, init)?;
    let init_ms = start.elapsed().as_secs_f64() * 1e3;
    let out = search(d, &initial, &params, a.trace)?;
    let total_ms = start.elapsed().as_secs_f64() * 1e3;

    let record = |algorithm: String, makespan: f64, runtime_ms: f64, iterations: usize| RunRecord {
        instance: inst.name.clone(),
        algorithm,
        seed: params.seed,
        makespan,
        runtime_ms,
        iterations,
    };
    let records = [
        record(init.to_string(), initial.makespan, init_ms, 0),
        record(LS_ALGORITHM.to_string(), out.best.makespan, total_ms, out.iterations),
    ];

    let dir = out_dir(a.out)?;
    write_file(&dir.join(format!("{}.csv", inst.name)), &write_results(&records)?)?;
    if a.svg {
        let svg = render_svg(d, &inst.roots, &out.best.paths);
        write_file(&dir.join(format!("{}.svg", inst.name)), &svg)?;
    }
    if a.trace {
        let mut text = String::new();
        for t in &out.trace {
            text.push_str(&serde_json::to_string(t).map_err(lsmcpp::Error::from)?);
            text.push('\n');
        }
        write_file(&dir.join(format!("{}.trace.jsonl", inst.name)), &text)?;
    }
    if a.solution {
        let file = SolutionFile::from_solution(d, &inst.name, &out.best);
        write_file(&dir.join(format!("{}.solution.json", inst.name)), &file.to_json()?)?;
    }
    println!("instance {}", inst.name);
    println!("initial makespan {:.4} ({init})", initial.makespan);
    println!("makespan {:.4}", out.best.makespan);
    println!("iterations {}", out.iterations);
    println!("runtime {total_ms:.1} ms");
    Ok(())
}

fn bench(a: BenchArgs) -> CliResult<()> {
    let instances = a.instances.iter().map(|p| load(p)).collect::<CliResult<Vec<_>>>()?;
    let defaults = SearchParams::default();
    let mut cfg = BenchConfig {
        seeds: parse_seeds(&a.seeds)?,
        max_iters: a.search.iters.unwrap_or(defaults.max_iters),
        dedup_period: a.search.dedup_period.unwrap_or(defaults.dedup_period),
        gamma: a.search.gamma.unwrap_or(defaults.gamma),
        ..BenchConfig::default()
    };
    if let Some(init) = a.search.init {
        cfg.init = init;
    }
    if let Some(t) = a.search.alpha_end {
        cfg.final_temperature = t;
    }
    let out = run_bench(&instances, &cfg)?;
    for (name, seed, msg) in &out.failures {
        eprintln!("run failed: {name} seed {seed}: {msg}");
    }
    let dir = out_dir(a.out)?;
    write_file(&dir.join(&a.csv), &write_results(&out.records)?)?;
    print!("{}", report_text(&out.records));
    if let Some(gain) = mean_relative_improvement(&out.records, &cfg.init.to_string()) {
        println!("mean improvement over {}: {:.2}%", cfg.init, gain * 100.0);
    }
    if out.records.is_empty() {
        return Err(CliError::Usage("every run failed".into()));
    }
    Ok(())
}

fn gen(a: GenArgs) -> CliResult<()> {
    let cfg = GeneratorConfig {
        width: a.width,
        height: a.height,
        obstacle_fraction: a.obstacles,
        incomplete_fraction: a.incomplete,
        robots: a.robots,
        weighted: a.weighted,
    };
    let name = a
        .name
        .unwrap_or_else(|| format!("rand-{}x{}-k{}-s{}", a.width, a.height, a.robots, a.seed));
    let inst = random_instance(&name, &cfg, &mut ChaCha8Rng::seed_from_u64(a.seed))?;
    emit(a.output.as_deref(), &inst.to_json()?)
}

fn corrupt(a: CorruptArgs) -> CliResult<()> {
    let inst = load(&a.instance)?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let d = make_incomplete_protected(&inst.decomposed, a.fraction, &inst.roots, &mut rng)?;
    emit(a.output.as_deref(), &inst.with_decomposed(d)?.to_json()?)
}

fn estc(a: EstcArgs) -> CliResult<()> {
    let inst = load(&a.instance)?;
    let d = &inst.decomposed;
    let &root = inst
        .roots
        .get(a.robot)
        .ok_or_else(|| CliError::Usage(format!("robot {} out of range (k = {})", a.robot, inst.num_robots())))?;
    let all = d.vertex_set();
    let path = if a.full_stc {
        full_stc_path(d, &all, root)?
    } else {
        estc_path(d, &all, root)?
    };
    println!("cost {:.4}", path.cost());
    println!("steps {}", path.num_edges());
    if a.walk {
        let walk: Vec<String> = path.closed().map(|v| d.coord(v).to_string()).collect();
        println!("{}", walk.join(" "));
    }
    Ok(())
}

fn oracle(a: OracleArgs) -> CliResult<()> {
    let inst = load(&a.instance)?;
    let m = oracle_mcpp(&inst.decomposed, &inst.roots)?;
    println!("makespan {m:.4}");
    Ok(())
}

fn render(a: RenderArgs) -> CliResult<()> {
    let inst = load(&a.instance)?;
    let paths = match &a.solution {
        Some(p) => at(p, SolutionFile::load(p).and_then(|s| s.to_paths(&inst.decomposed)))?,
        None => Vec::new(),
    };
    emit(a.output.as_deref(), &render_svg(&inst.decomposed, &inst.roots, &paths))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let r = match cli.cmd {
        Command::Solve(a) => solve(a),
        Command::Bench(a) => bench(a),
        Command::Gen(a) => gen(a),
        Command::Corrupt(a) => corrupt(a),
        Command::Estc(a) => estc(a),
        Command::Oracle(a) => oracle(a),
        Command::Render(a) => render(a),
    };
    match r {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
