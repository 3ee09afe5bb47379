use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use whlab::factorgraph::enumerate_factors_capped;
use whlab::products::{products_report, DEFAULT_SEARCH_BUDGET};
use whlab::rigidity::{crawl_with_budget, standard_apartment, validate_chain};
use whlab::verify::{run_criterion, VerifyConfig};
use whlab::whitehead::{graded_antipode_with_budget, has_full_support, is_primitive, minimize, DEFAULT_LEVEL_BUDGET};
use whlab::{CoreGraph, Error, WhiteheadGraph, Word};

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "whlab", version, about = "Whitehead graphs, free factors and apartments in free groups")]
struct Cli {
    #[command(flatten)]
    config: Config,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Config {
    /// Rank N of the free group; inferred from the words when omitted.
    #[arg(long, global = true)]
    rank: Option<usize>,
    /// Word length bound.
    #[arg(long, global = true)]
    len: Option<usize>,
    /// Search depth.
    #[arg(long, global = true)]
    depth: Option<usize>,
    /// Maximum number of search states; WHLAB_BUDGET takes precedence.
    #[arg(long, global = true)]
    budget: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Whitehead graph of a word.
    Wgraph {
        word: Word,
        /// Use the cyclic graph of the cyclic reduction instead.
        #[arg(long)]
        cyclic: bool,
    },
    /// Minimise a word under Whitehead automorphisms.
    Minimize { word: Word },
    /// Whether a word is primitive.
    Primitive { word: Word },
    /// Whether a word lies in no proper free factor.
    Support { word: Word },
    /// Graded antipode verdict for a primitive word and A = <x1..xk>.
    Gal {
        #[arg(long)]
        k: usize,
        word: Word,
    },
    /// Stallings core graph of a comma-separated generating list.
    Fold { generators: String },
    /// Intersection of two subgroups, each a comma-separated list.
    Intersect { first: String, second: String },
    /// Truncated free factor graphs.
    Ffgraph {
        #[command(subcommand)]
        action: FfgraphAction,
    },
    /// Standard apartment of a partial basis.
    Apartment {
        #[arg(long)]
        basis: String,
    },
    /// Crawling chain between two bases of the same free factor.
    Crawl {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Standard product subgroups.
    Products {
        #[command(subcommand)]
        action: ProductsAction,
    },
    /// Run every acceptance criterion and emit one JSON report.
    VerifyAll {
        /// Run only these criteria.
        #[arg(long, value_delimiter = ',')]
        only: Vec<usize>,
    },
}

#[derive(Subcommand)]
enum FfgraphAction {
    Build {
        #[arg(long)]
        k: usize,
    },
}

#[derive(Subcommand)]
enum ProductsAction {
    Verify,
}

struct Output {
    text: String,
    failed: bool,
}

impl Output {
    fn ok(text: String) -> Output {
        Output { text, failed: false }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json") + "\n"
}

impl Config {
    fn budget(&self, default: usize) -> anyhow::Result<usize> {
        match std::env::var("WHLAB_BUDGET") {
            Ok(s) => s.trim().parse().with_context(|| format!("WHLAB_BUDGET={s:?} is not a number")),
            Err(_) => Ok(self.budget.unwrap_or(default)),
        }
    }

    fn rank_for(&self, words: &[Word]) -> whlab::Result<usize> {
        let needed = words.iter().map(Word::max_index).max().unwrap_or(0).max(2);
        match self.rank {
            Some(r) if r < needed => Err(Error::LetterOutOfRange { index: needed, rank: r }),
            Some(r) => Ok(r),
            None => Ok(needed),
        }
    }

    fn format(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }
}

fn words(list: &str) -> whlab::Result<Vec<Word>> {
    Word::parse_list(list)
}

fn bool_output(cfg: &Config, key: &str, word: &Word, value: bool) -> Output {
    match cfg.format(Format::Text) {
        Format::Json => Output::ok(pretty(&json!({ "word": word, key: value }))),
        _ => Output::ok(format!("{value}\n")),
    }
}

fn run(cli: &Cli) -> anyhow::Result<Output> {
    let cfg = &cli.config;
    let out = match &cli.command {
        Command::Wgraph { word, cyclic } => {
            let rank = cfg.rank_for(std::slice::from_ref(word))?;
            let g = if *cyclic { WhiteheadGraph::cyclic(rank, word)? } else { WhiteheadGraph::of_word(rank, word)? };
            match cfg.format(Format::Dot) {
                Format::Dot => Output::ok(g.to_dot()),
                Format::Json => Output::ok(pretty(&json!({
                    "rank": rank,
                    "word": word,
                    "vertices": g.vertices().map(|v| v.name()).collect::<Vec<_>>(),
                    "edges": g.edge_names(),
                }))),
                Format::Text => Output::ok(g.edge_names().iter().map(|[a, b]| format!("{a} -- {b}\n")).collect()),
            }
        }
        Command::Minimize { word } => {
            let rank = cfg.rank_for(std::slice::from_ref(word))?;
            let (min, phi) = minimize(rank, word)?;
            match cfg.format(Format::Text) {
                Format::Json => Output::ok(pretty(&json!({ "word": word, "minimal": min, "length": min.len(), "automorphism": phi }))),
                _ => Output::ok(format!("{min}\n")),
            }
        }
        Command::Primitive { word } => {
            let rank = cfg.rank_for(std::slice::from_ref(word))?;
            bool_output(cfg, "primitive", word, is_primitive(rank, word)?)
        }
        Command::Support { word } => {
            let rank = cfg.rank_for(std::slice::from_ref(word))?;
            bool_output(cfg, "full_support", word, has_full_support(rank, word)?)
        }
        Command::Gal { k, word } => {
            let needed = cfg.rank_for(std::slice::from_ref(word))?;
            let rank = cfg.rank.unwrap_or(needed.max(k + 1));
            let verdict = graded_antipode_with_budget(rank, *k, word, cfg.budget(DEFAULT_LEVEL_BUDGET)?)?;
            Output::ok(pretty(&serde_json::to_value(&verdict)?))
        }
        Command::Fold { generators } => {
            let gens = words(generators)?;
            let g = CoreGraph::fold(cfg.rank_for(&gens)?, &gens)?;
            core_output(cfg, &g)?
        }
        Command::Intersect { first, second } => {
            let (a, b) = (words(first)?, words(second)?);
            let all: Vec<Word> = a.iter().chain(&b).cloned().collect();
            let rank = cfg.rank_for(&all)?;
            let g = CoreGraph::fold(rank, &a)?.intersect(&CoreGraph::fold(rank, &b)?)?;
            core_output(cfg, &g)?
        }
        Command::Ffgraph { action: FfgraphAction::Build { k } } => {
            let rank = cfg.rank.unwrap_or(3);
            let len = cfg.len.unwrap_or(4);
            let g = enumerate_factors_capped(rank, *k, len, cfg.budget(whlab::factorgraph::DEFAULT_VERTEX_CAP)?)?;
            match cfg.format(Format::Json) {
                Format::Dot => Output::ok(g.to_dot()),
                Format::Json => Output::ok(pretty(&g.to_json())),
                Format::Text => Output::ok(g.vertices().iter().map(|v| format!("{}\n", v.label())).collect()),
            }
        }
        Command::Apartment { basis } => {
            let basis = words(basis)?;
            let a = standard_apartment(cfg.rank_for(&basis)?, &basis)?;
            match cfg.format(Format::Json) {
                Format::Dot => Output::ok(a.to_dot()),
                _ => Output::ok(pretty(&a.to_json())),
            }
        }
        Command::Crawl { from, to } => {
            let (from, to) = (words(from)?, words(to)?);
            let all: Vec<Word> = from.iter().chain(&to).cloned().collect();
            let rank = cfg.rank_for(&all)?;
            let chain = crawl_with_budget(rank, &from, &to, cfg.budget(DEFAULT_LEVEL_BUDGET)?)?;
            let violations = validate_chain(&chain, &from, &to)?;
            let mut v = serde_json::to_value(&chain)?;
            v["violations"] = json!(violations);
            Output { text: pretty(&v), failed: !violations.is_empty() }
        }
        Command::Products { action: ProductsAction::Verify } => {
            let rank = cfg.rank.unwrap_or(3);
            let depth = cfg.depth.unwrap_or(2);
            let report = products_report(rank, depth, cfg.budget(DEFAULT_SEARCH_BUDGET)?)?;
            let text = match cfg.format(Format::Text) {
                Format::Json => pretty(&serde_json::to_value(&report)?),
                _ => report
                    .checks
                    .iter()
                    .map(|c| {
                        let w = c.witness.as_deref().map(|w| format!(" ({w})")).unwrap_or_default();
                        format!("{} {}{}\n", if c.status == whlab::products::Status::Pass { "PASS" } else { "FAIL" }, c.name, w)
                    })
                    .collect(),
            };
            Output { text, failed: !report.passed() }
        }
        Command::VerifyAll { only } => {
            let vc = VerifyConfig { seed: cfg.seed, budget: cfg.budget(DEFAULT_SEARCH_BUDGET)? };
            let ids: Vec<usize> = if only.is_empty() { (1..=12).collect() } else { only.clone() };
            let mut reports = Vec::new();
            for id in ids {
                let r = run_criterion(id, &vc).ok_or_else(|| Usage(format!("no criterion {id}")))?;
                eprintln!("{}", r.line());
                reports.push(r);
            }
            let passed = reports.iter().all(|r| r.passed);
            Output { text: pretty(&json!({ "seed": cfg.seed, "passed": passed, "criteria": reports })), failed: !passed }
        }
    };
    Ok(out)
}

fn core_output(cfg: &Config, g: &CoreGraph) -> anyhow::Result<Output> {
    Ok(match cfg.format(Format::Json) {
        Format::Dot => Output::ok(g.to_dot()),
        Format::Json => Output::ok(pretty(&serde_json::to_value(g)?)),
        Format::Text => {
            let basis: Vec<String> = g.basis().iter().map(Word::to_string).collect();
            Output::ok(format!("rank {}\nbasis {}\nkey {}\n", g.rank(), basis.join(","), g.key().digest))
        }
    })
}

#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::BudgetExceeded { .. }) => EXIT_BUDGET,
        Some(Error::Inconsistent(_)) => EXIT_FAILURE,
        _ => EXIT_USAGE,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|out| {
        match &cli.config.out {
            Some(path) => std::fs::write(path, &out.text).with_context(|| format!("writing {}", path.display()))?,
            None => print!("{}", out.text),
        }
        Ok(out.failed)
    });
    match result {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(EXIT_FAILURE),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
