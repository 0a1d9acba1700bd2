use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use selfsim::catalog;
use selfsim::group::DEFAULT_CLOSURE_CAP;
use selfsim::io::{self, EndoFile, GroupFile};
use selfsim::morphism::{self, SearchMode};
use selfsim::power;
use selfsim::tree::{self, MealyAutomaton, Transversal};
use selfsim::verify::{self, SuiteConfig, TheoremReport};
use selfsim::{Error, GroupTable, VirtualEndomorphism};

/// Budget applied to searches on groups above the exhaustive-search order.
const DEFAULT_BUDGET: u64 = 20_000;
const FULL_SEARCH_MAX_ORDER: usize = 81;

#[derive(Parser)]
#[command(name = "selfsim", version, about = "Self-similar actions of finite p-groups")]
struct Cli {
    /// Largest group the closure may build.
    #[arg(long, global = true, env = "SELFSIM_CLOSURE_CAP", default_value_t = DEFAULT_CLOSURE_CAP)]
    closure_cap: usize,
    /// Deepest tree level used for separation and wreath closures.
    #[arg(long, global = true, env = "SELFSIM_DEPTH_CAP", default_value_t = 8)]
    depth_cap: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Built-in groups.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Element ids, labels, orders and permutations.
    Elements {
        group: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[command(flatten)]
        out: Out,
    },
    /// Power structure and predicates.
    Analyze {
        group: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[command(flatten)]
        out: Out,
    },
    /// Search for simple virtual endomorphisms of index p.
    SearchSelfsim {
        group: String,
        /// Search exhaustively, ignoring the default budget for large groups.
        #[arg(long)]
        all: bool,
        /// Stop at the first simple endomorphism.
        #[arg(long, conflicts_with = "all")]
        first: bool,
        /// Homomorphisms to examine before giving up.
        #[arg(long)]
        budget: Option<u64>,
        #[command(flatten)]
        out: Out,
    },
    /// Write the automaton of a simple endomorphism.
    EmitAutomaton {
        /// Catalog name or group file.
        group: Option<String>,
        #[arg(long = "group", conflicts_with = "group")]
        group_file: Option<String>,
        /// Endomorphism file, or `example23` for the standard Heisenberg map.
        #[arg(long)]
        endo: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Keep every element state instead of those reachable from the generators.
        #[arg(long)]
        full: bool,
        #[command(flatten)]
        out: Out,
    },
    /// Apply an automaton state to a word.
    Act {
        #[arg(long)]
        automaton: PathBuf,
        /// State id, label or initial name.
        #[arg(long)]
        state: String,
        /// Letters as digits (`0120`) or comma separated (`0,1,2,0`).
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        #[command(flatten)]
        out: Out,
    },
    /// Lift a simple endomorphism to `G ≀ C_p` and check the closure order.
    Wreath {
        group: String,
        #[arg(long)]
        endo: Option<PathBuf>,
        /// Also write the lifted automaton as JSON.
        #[arg(long)]
        automaton_out: Option<PathBuf>,
        #[command(flatten)]
        out: Out,
    },
    /// Run the theorem checks.
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum CatalogAction {
    List {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[command(flatten)]
        out: Out,
    },
    Show {
        name: String,
        #[command(flatten)]
        out: Out,
    },
    /// Write the group file of an entry.
    Export {
        name: String,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// `default` or `all`.
    #[arg(long, conflicts_with = "theorem", required_unless_present = "theorem")]
    suite: Option<Suite>,
    #[arg(long, requires = "group")]
    theorem: Option<Theorem>,
    #[arg(long)]
    group: Option<String>,
    #[arg(long)]
    endo: Option<PathBuf>,
    /// Homomorphism budget for groups above the exhaustive-search order.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Keep every per-endomorphism report in the suite output.
    #[arg(long)]
    keep_reports: bool,
    #[command(flatten)]
    out: Out,
}

#[derive(Args)]
struct Out {
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Default,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum Theorem {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    Split,
    Transfer,
    Restrict,
    Wreath,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("violations found");
            ExitCode::from(1)
        }
        Err(err) => {
            eprintln!("error[{}]: {err:#}", class(&err));
            ExitCode::from(2)
        }
    }
}

fn class(err: &anyhow::Error) -> &'static str {
    match err.downcast_ref::<Error>() {
        Some(Error::CapExceeded { .. } | Error::TooLarge { .. }) => "cap",
        Some(Error::Json(_) | Error::InvalidPerm(_) | Error::DegreeMismatch { .. }) => "format",
        Some(Error::Io(_)) => "io",
        Some(_) => "input",
        None if err.downcast_ref::<std::io::Error>().is_some() => "io",
        None => "usage",
    }
}

fn emit(out: &Out, text: &str) -> anyhow::Result<()> {
    write_to(out.out.as_deref(), text)
}

fn write_to(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    let mut text = text.to_owned();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match path {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("output serializes")
}

fn load(cli: &Cli, reference: &str) -> anyhow::Result<Arc<GroupTable>> {
    let g = io::load_group(reference, cli.closure_cap)?;
    Ok(Arc::new(g))
}

fn prime_of(g: &GroupTable) -> anyhow::Result<u32> {
    g.prime_hint()
        .or_else(|| g.p_group_prime())
        .ok_or_else(|| anyhow!(Error::InvalidInput(format!("group of order {} is not a p-group", g.order()))))
}

fn default_budget(g: &GroupTable) -> Option<u64> {
    (g.order() > FULL_SEARCH_MAX_ORDER).then_some(DEFAULT_BUDGET)
}

fn first_simple(g: &Arc<GroupTable>, p: u32) -> anyhow::Result<VirtualEndomorphism> {
    let found = morphism::search_simple_endos(g, p, default_budget(g), SearchMode::First)?;
    found.endos.into_iter().next().ok_or_else(|| {
        anyhow!(Error::InvalidInput(format!(
            "no simple endomorphism found for {}",
            g.name().unwrap_or("group")
        )))
    })
}

fn load_endo(cli: &Cli, path: &Path, group: Option<&str>) -> anyhow::Result<VirtualEndomorphism> {
    let (file, from_file) = io::load_endo_file(path, cli.closure_cap)?;
    let g = match group {
        Some(reference) => load(cli, reference)?,
        None => Arc::new(from_file),
    };
    let p = prime_of(&g)?;
    Ok(file.resolve_on(g, p)?)
}

fn run(cli: &Cli) -> anyhow::Result<bool> {
    match &cli.command {
        Command::Catalog { action } => run_catalog(cli, action),
        Command::Elements { group, format, out } => {
            let g = load(cli, group)?;
            let rows: Vec<_> = g
                .elements()
                .map(|x| {
                    json!({
                        "id": x,
                        "label": g.label(x),
                        "order": g.order_of(x),
                        "perm": g.perm(x).to_string(),
                    })
                })
                .collect();
            let text = match format {
                Format::Json => to_json(&rows),
                _ => g
                    .elements()
                    .map(|x| format!("{x}\t{}\t{}\t{}", g.label(x), g.order_of(x), g.perm(x)))
                    .collect::<Vec<_>>()
                    .join("\n"),
            };
            emit(out, &text)?;
            Ok(true)
        }
        Command::Analyze { group, format, out } => {
            let g = load(cli, group)?;
            let analysis = power::analyze(&g, prime_of(&g)?)?;
            let text = match format {
                Format::Text => analysis.to_table(),
                _ => to_json(&analysis),
            };
            emit(out, &text)?;
            Ok(true)
        }
        Command::SearchSelfsim {
            group,
            all,
            first,
            budget,
            out,
        } => {
            let g = load(cli, group)?;
            let p = prime_of(&g)?;
            let budget = match (budget, all) {
                (Some(b), _) => Some(*b),
                (None, true) => None,
                (None, false) => default_budget(&g),
            };
            let mode = if *first { SearchMode::First } else { SearchMode::All };
            let found = morphism::search_simple_endos(&g, p, budget, mode)?;
            let endos: Vec<_> = found.endos.iter().map(|e| endo_json(&g, e)).collect();
            let doc = json!({
                "group": g.name(),
                "p": p,
                "order": g.order(),
                "budget": budget,
                "exhausted": found.exhausted,
                "homs_examined": found.homs_examined,
                "maximal_subgroups": found.maximal_subgroups,
                "self_similar": if !found.endos.is_empty() {
                    "yes"
                } else if found.exhausted {
                    "no"
                } else {
                    "unknown"
                },
                "endomorphisms": endos,
            });
            emit(out, &to_json(&doc))?;
            Ok(true)
        }
        Command::EmitAutomaton {
            group,
            group_file,
            endo,
            format,
            full,
            out,
        } => {
            let group = group.as_deref().or(group_file.as_deref());
            let (automaton, greek) = emit_automaton(cli, group, endo.as_deref())?;
            let automaton = if *full {
                automaton
            } else {
                let roots: Vec<_> = automaton.initials().values().copied().collect();
                automaton.reachable(&roots)
            };
            let automaton = if greek { automaton.map_labels(greek_letters) } else { automaton };
            let text = match format {
                Format::Dot => automaton.to_dot(),
                Format::Json => automaton.to_json(),
                Format::Text => bail!("automata are written as json or dot"),
            };
            emit(out, &text)?;
            Ok(true)
        }
        Command::Act {
            automaton,
            state,
            word,
            out,
        } => {
            let text = std::fs::read_to_string(automaton)
                .with_context(|| format!("reading {}", automaton.display()))?;
            let a = MealyAutomaton::from_json(&text)?;
            let s = a
                .resolve_state(state)
                .ok_or_else(|| anyhow!(Error::InvalidInput(format!("no state {state:?}"))))?;
            let letters = parse_word(word, a.p())?;
            let image = a.act(s, &letters);
            let sep = if a.p() > 10 || word.contains(',') { "," } else { "" };
            let text = image.iter().map(u8::to_string).collect::<Vec<_>>().join(sep);
            emit(out, &text)?;
            Ok(true)
        }
        Command::Wreath {
            group,
            endo,
            automaton_out,
            out,
        } => {
            let g = load(cli, group)?;
            let endo = match endo {
                Some(path) => load_endo(cli, path, Some(group))?,
                None => first_simple(&g, prime_of(&g)?)?,
            };
            let lift = verify::wreath_lift(&endo, cli.depth_cap, cli.closure_cap)?;
            if let Some(path) = automaton_out {
                write_to(Some(path), &lift.automaton.to_json())?;
            }
            let doc = json!({
                "group": g.name(),
                "states": lift.automaton.len(),
                "inner_separating_depth": lift.inner_separating_depth,
                "depth": lift.depth,
                "order": lift.order,
                "expected_order": lift.expected_order,
                "report": lift.report,
            });
            emit(out, &to_json(&doc))?;
            Ok(lift.report.holds)
        }
        Command::Verify(args) => run_verify(cli, args),
    }
}

fn run_catalog(cli: &Cli, action: &CatalogAction) -> anyhow::Result<bool> {
    match action {
        CatalogAction::List { format, out } => {
            let entries = catalog::entries();
            let text = match format {
                Format::Json => to_json(&entries),
                _ => entries
                    .iter()
                    .map(|e| {
                        let tags: Vec<_> = e.tags.iter().map(|t| format!("{t:?}").to_lowercase()).collect();
                        format!(
                            "{:<26} p={} order={:<6} exponent={:<3} {}{}",
                            e.name,
                            e.p,
                            e.expected_order,
                            e.expected_exponent,
                            tags.join(","),
                            if e.default { "" } else { " (extended)" }
                        )
                    })
                    .collect::<Vec<_>>()
                    .join("\n"),
            };
            emit(out, &text)?;
        }
        CatalogAction::Show { name, out } => {
            let entry = catalog::lookup(name)
                .ok_or_else(|| anyhow!(Error::InvalidInput(format!("no catalog entry {name:?}"))))?;
            let g = entry.build_with_cap(cli.closure_cap)?;
            let doc = json!({
                "entry": entry,
                "order": g.order(),
                "exponent": g.exponent(),
                "degree": g.degree(),
                "generators": GroupFile::from_table(&g).generators,
                "fingerprint": g.fingerprint(),
            });
            emit(out, &to_json(&doc))?;
        }
        CatalogAction::Export { name, out } => {
            let entry = catalog::lookup(name)
                .ok_or_else(|| anyhow!(Error::InvalidInput(format!("no catalog entry {name:?}"))))?;
            let g = entry.build_with_cap(cli.closure_cap)?;
            write_to(Some(out), &GroupFile::from_table(&g).to_json())?;
        }
    }
    Ok(true)
}

fn run_verify(cli: &Cli, args: &VerifyArgs) -> anyhow::Result<bool> {
    if let Some(suite) = args.suite {
        let entries = match suite {
            Suite::Default => catalog::default_entries(),
            Suite::All => catalog::entries(),
        };
        let cfg = SuiteConfig {
            closure_cap: cli.closure_cap,
            hom_budget: args.budget,
            depth_cap: cli.depth_cap,
            keep_reports: args.keep_reports,
            ..SuiteConfig::default()
        };
        let report = verify::run_suite(&entries, &cfg);
        emit(&args.out, &report.to_json())?;
        let s = &report.summary;
        eprintln!(
            "{} groups, {} simple endomorphisms, {} hypotheses met, {} conclusions held, {} violations, {} errors",
            s.groups, s.simple_endomorphisms, s.hypotheses_met, s.conclusions_held, s.violations, s.errors
        );
        return Ok(s.violations == 0);
    }
    let theorem = args.theorem.expect("clap requires --suite or --theorem");
    let reference = args.group.as_deref().expect("clap requires --group");
    let g = load(cli, reference)?;
    let p = prime_of(&g)?;
    let endos = match &args.endo {
        Some(path) => vec![load_endo(cli, path, Some(reference))?],
        None => {
            let budget = default_budget(&g).map(|_| args.budget);
            morphism::search_simple_endos(&g, p, budget, SearchMode::All)?.endos
        }
    };
    let mut reports: Vec<TheoremReport> = Vec::new();
    for endo in &endos {
        let report = match theorem {
            Theorem::One => verify::check_theorem1(endo)?,
            Theorem::Two => verify::check_theorem2(endo)?,
            Theorem::Split => verify::check_split_lemma(endo)?,
            Theorem::Transfer => verify::check_exponent_transfer(endo)?,
            Theorem::Restrict => verify::check_restriction(endo)?,
            Theorem::Wreath => verify::wreath_lift(endo, cli.depth_cap, cli.closure_cap)?.report,
        };
        reports.push(report);
        if matches!(theorem, Theorem::Wreath) {
            break;
        }
    }
    let holds = reports.iter().all(|r| r.holds);
    let doc = json!({
        "group": g.name(),
        "scope": verify::SCOPE,
        "endomorphisms": endos.len(),
        "holds": holds,
        "reports": reports,
    });
    emit(&args.out, &to_json(&doc))?;
    Ok(holds)
}

fn emit_automaton(cli: &Cli, group: Option<&str>, endo: Option<&str>) -> anyhow::Result<(MealyAutomaton, bool)> {
    match endo {
        Some("example23") => {
            let p = match group {
                None => 3,
                Some(name) => catalog::lookup(name)
                    .filter(|e| matches!(e.construction, catalog::Construction::Heisenberg { .. }))
                    .map(|e| e.p)
                    .ok_or_else(|| {
                        anyhow!(Error::InvalidInput(format!(
                            "the standard endomorphism needs a Heisenberg group, not {name:?}"
                        )))
                    })?,
            };
            let (endo, t) = catalog::heisenberg_endo(p)?;
            Ok((tree::build_automaton(&endo, &t)?, true))
        }
        Some(path) => {
            let endo = load_endo(cli, Path::new(path), group)?;
            let t = Transversal::preferred(&endo)?;
            Ok((tree::build_automaton(&endo, &t)?, false))
        }
        None => {
            let reference = group.ok_or_else(|| anyhow!("give a group or --endo"))?;
            let g = load(cli, reference)?;
            let endo = first_simple(&g, prime_of(&g)?)?;
            let t = Transversal::preferred(&endo)?;
            Ok((tree::build_automaton(&endo, &t)?, false))
        }
    }
}

fn endo_json(g: &GroupTable, endo: &VirtualEndomorphism) -> serde_json::Value {
    let file = EndoFile::from_endo(g.name().unwrap_or("group"), endo);
    let map: Vec<String> = file
        .h_gens
        .iter()
        .zip(&file.images)
        .map(|(&x, &y)| format!("{} -> {}", g.label(x), g.label(y)))
        .collect();
    let generator_images: Vec<String> = g
        .gen_ids()
        .iter()
        .filter_map(|&x| endo.apply(x).map(|y| format!("{} -> {}", g.label(x), g.label(y))))
        .collect();
    json!({
        "H_gens": file.h_gens,
        "images": file.images,
        "map": map,
        "generator_images": generator_images,
        "h_order": endo.h().order(),
        "image_order": endo.image_subgroup().order(),
        "simple": endo.is_simple(),
    })
}

fn greek_letters(label: &str) -> String {
    label
        .chars()
        .map(|c| match c {
            'a' => 'α',
            'b' => 'β',
            'c' => 'γ',
            other => other,
        })
        .collect()
}

fn parse_word(word: &str, p: usize) -> anyhow::Result<Vec<u8>> {
    let parts: Vec<&str> = if word.contains(',') {
        word.split(',').map(str::trim).collect()
    } else {
        word.split("").filter(|s| !s.is_empty()).collect()
    };
    parts
        .iter()
        .map(|s| {
            let letter: usize = s
                .parse()
                .map_err(|_| anyhow!(Error::InvalidInput(format!("bad letter {s:?} in word"))))?;
            if letter >= p {
                return Err(anyhow!(Error::InvalidInput(format!(
                    "letter {letter} is outside the alphabet 0..{p}"
                ))));
            }
            Ok(letter as u8)
        })
        .collect()
}
