use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use semiembed::families::{read_generators, standard_generators, write_generators, GeneratorFile};
use semiembed::invariants::{element_profiles, table_profile};
use semiembed::search::{
    automorphism_search, count_embeddings, dedup_images, find_embeddings, find_isomorphism, minimal_degree,
    two_generated_embeddings, ImageAction, Limit, SearchConfig, SearchReport, SearchStats,
};
use semiembed::{build_family, read_table, write_table, CayleyTable, Family, FamilyElement, GeneratedTable};

/// Embeddings, isomorphisms and invariants of finite semigroups given by
/// multiplication tables.
#[derive(Parser, Debug)]
#[command(name = "semiembed", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check that a table (or generator file) defines a semigroup.
    Validate { input: PathBuf },
    /// Print the isomorphism invariants of a table.
    Profile {
        input: PathBuf,
        /// Also print the profile of every element.
        #[arg(long)]
        elements: bool,
    },
    /// Write the table (or generators) of a standard family.
    Gen {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        degree: usize,
        /// Write a generator file instead of the table.
        #[arg(long)]
        generators: bool,
        /// List the elements as comments above the table.
        #[arg(long)]
        elements: bool,
    },
    /// Find embeddings of SOURCE into TARGET.
    Embed {
        source: PathBuf,
        /// A table, or a generator file (needed for --up-to conjugation).
        target: PathBuf,
        /// Report every embedding instead of the first.
        #[arg(long)]
        all: bool,
        /// Keep one embedding per class of images.
        #[arg(long, value_enum)]
        up_to: Option<UpTo>,
        /// Stop after this many embeddings.
        #[arg(long, conflicts_with_all = ["all", "up_to"])]
        limit: Option<usize>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Find an isomorphism between two tables.
    Iso {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// List the automorphisms of a table.
    Aut {
        input: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Smallest degree at which SOURCE embeds into a family.
    Mindeg {
        source: PathBuf,
        #[arg(long)]
        family: Family,
        #[arg(long)]
        max: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Count embeddings, distinct images and image classes.
    Count {
        source: PathBuf,
        target: PathBuf,
        #[arg(long, value_enum, default_value_t = UpTo::Nothing)]
        up_to: UpTo,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Embeddings into 2-generated subsemigroups of a generated target.
    Twogen {
        source: PathBuf,
        /// Generator file of the target.
        target: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args, Debug, Clone, Copy)]
struct SearchArgs {
    /// Search without invariant classes (for comparison).
    #[arg(long)]
    no_partition: bool,
    /// Worker threads for the search.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    threads: u16,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug, Clone, Copy)]
struct OutputArgs {
    /// `lines`: results on stdout, report on stderr. `text`: both on stdout.
    #[arg(long, value_enum, default_value_t = Format::Lines)]
    format: Format,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Lines,
    Text,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum UpTo {
    #[value(name = "none")]
    Nothing,
    Conjugation,
    Automorphism,
}

enum Outcome {
    Found,
    NotFound,
}

struct Output {
    format: Format,
    results: String,
    report: String,
}

impl Output {
    fn new(format: Format) -> Self {
        Self {
            format,
            results: String::new(),
            report: String::new(),
        }
    }

    fn result(&mut self, line: impl AsRef<str>) {
        self.results.push_str(line.as_ref());
        self.results.push('\n');
    }

    fn report(&mut self, key: &str, value: impl std::fmt::Display) {
        let _ = writeln!(self.report, "{key}: {value}");
    }

    fn stats(&mut self, stats: &SearchStats) {
        self.report("search space", &stats.search_space);
        self.report("nodes", stats.nodes);
        self.report("candidates tried", stats.candidates);
    }

    fn emit(self) {
        match self.format {
            Format::Lines => {
                print!("{}", self.results);
                eprint!("{}", self.report);
            }
            Format::Text => print!("{}{}", self.report, self.results),
        }
    }
}

/// A loaded table, with element payloads when read from a generator file.
enum Loaded {
    Table(CayleyTable),
    Generated(GeneratedTable<FamilyElement>),
}

impl Loaded {
    fn table(&self) -> &CayleyTable {
        match self {
            Loaded::Table(t) => t,
            Loaded::Generated(g) => g.table(),
        }
    }

    fn generated(&self) -> Option<&GeneratedTable<FamilyElement>> {
        match self {
            Loaded::Table(_) => None,
            Loaded::Generated(g) => Some(g),
        }
    }
}

fn read_text(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load(path: &Path) -> Result<Loaded, String> {
    let text = read_text(path)?;
    if GeneratorFile::looks_like(&text) {
        let file = read_generators(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        let closed = file.close().map_err(|e| format!("{}: {e}", path.display()))?;
        Ok(Loaded::Generated(closed.sorted_by_encoding()))
    } else {
        read_table(&text)
            .map(Loaded::Table)
            .map_err(|e| format!("{}: {e}", path.display()))
    }
}

fn load_table(path: &Path) -> Result<CayleyTable, String> {
    match load(path)? {
        Loaded::Table(t) => Ok(t),
        Loaded::Generated(g) => Ok(g.into_parts().0),
    }
}

fn search_config(args: &SearchArgs) -> SearchConfig {
    let config = SearchConfig::default().with_threads(args.threads as usize);
    if args.no_partition {
        config.without_partition()
    } else {
        config
    }
}

fn image_action(up_to: UpTo, target: &Loaded) -> Result<ImageAction, String> {
    match up_to {
        UpTo::Nothing => Ok(ImageAction::trivial(target.table().order())),
        UpTo::Conjugation => {
            ImageAction::conjugation_for(target.table(), target.generated()).map_err(|e| e.to_string())
        }
        UpTo::Automorphism => Ok(ImageAction::automorphisms(target.table())),
    }
}

fn found(any: bool) -> Outcome {
    if any {
        Outcome::Found
    } else {
        Outcome::NotFound
    }
}

fn validate(input: &Path) -> Result<Outcome, String> {
    let loaded = load(input)?;
    let table = loaded.table();
    println!("order: {}", table.order());
    if table.is_associative() {
        println!("associative: yes");
        Ok(Outcome::Found)
    } else {
        println!("associative: no");
        Ok(Outcome::NotFound)
    }
}

fn profile(input: &Path, elements: bool) -> Result<Outcome, String> {
    let table = load_table(input)?;
    print!("{}", table_profile(&table).report());
    if elements {
        for (k, p) in element_profiles(&table).iter().enumerate() {
            println!("element {}: {p}", k + 1);
        }
    }
    Ok(Outcome::Found)
}

fn generate(family: Family, degree: usize, generators: bool, elements: bool) -> Result<Outcome, String> {
    if generators {
        let gens = standard_generators(family, degree)
            .ok_or_else(|| format!("no standard generating set for {family}; write the table instead"))?;
        let file = GeneratorFile {
            kind: family.element_kind(),
            degree,
            generators: gens,
        };
        print!("{}", write_generators(&file));
        return Ok(Outcome::Found);
    }
    let built = build_family(family, degree).map_err(|e| e.to_string())?;
    if elements {
        for (k, e) in built.elements().iter().enumerate() {
            println!("# {} {e}", k + 1);
        }
    }
    print!("{}", write_table(built.table()));
    Ok(Outcome::Found)
}

fn infeasible_note(out: &mut Output, report: &SearchReport) {
    if let Some(reason) = &report.infeasible {
        out.report("infeasible", reason);
    }
}

fn embed(
    source: &Path,
    target: &Path,
    all: bool,
    up_to: Option<UpTo>,
    limit: Option<usize>,
    search: &SearchArgs,
) -> Result<Outcome, String> {
    let source = load_table(source)?;
    let target = load(target)?;
    let action = up_to.map(|u| image_action(u, &target)).transpose()?;
    let limit = match (all || action.is_some(), limit) {
        (true, _) => Limit::All,
        (false, Some(n)) => Limit::First(n),
        (false, None) => Limit::First(1),
    };
    let config = search_config(search).with_limit(limit);
    let report = find_embeddings(&source, target.table(), &config);
    let solutions = match &action {
        Some(action) => dedup_images(&report.solutions, action),
        None => report.solutions.clone(),
    };

    let mut out = Output::new(search.output.format);
    out.stats(&report.stats);
    infeasible_note(&mut out, &report);
    out.report("dedup", solutions.dedup);
    out.report("solutions", solutions.len());
    out.results.push_str(&solutions.to_lines());
    let outcome = found(!solutions.is_empty());
    out.emit();
    Ok(outcome)
}

fn iso(a: &Path, b: &Path, search: &SearchArgs) -> Result<Outcome, String> {
    let a = load_table(a)?;
    let b = load_table(b)?;
    let report = find_isomorphism(&a, &b, &search_config(search));
    let mut out = Output::new(search.output.format);
    if let Some(key) = report.profile_difference {
        out.result(format!("profiles differ: {key}"));
        out.emit();
        return Ok(Outcome::NotFound);
    }
    out.stats(&report.stats);
    let outcome = match &report.map {
        Some(map) => {
            out.result(map.iter().map(|&t| (t + 1).to_string()).collect::<Vec<_>>().join(" "));
            Outcome::Found
        }
        None => {
            out.report("isomorphic", "no");
            Outcome::NotFound
        }
    };
    out.emit();
    Ok(outcome)
}

fn aut(input: &Path, output: OutputArgs) -> Result<Outcome, String> {
    let table = load_table(input)?;
    let report = automorphism_search(&table, &SearchConfig::default());
    let mut out = Output::new(output.format);
    out.stats(&report.stats);
    out.report("group order", report.solutions.len());
    out.results.push_str(&report.solutions.to_lines());
    out.emit();
    Ok(Outcome::Found)
}

fn mindeg(source: &Path, family: Family, max: usize, output: OutputArgs) -> Result<Outcome, String> {
    let source = load_table(source)?;
    let degree = minimal_degree(&source, family, max, &SearchConfig::default()).map_err(|e| e.to_string())?;
    let mut out = Output::new(output.format);
    out.report("family", family);
    let outcome = match degree {
        Some(d) => {
            out.result(d.to_string());
            Outcome::Found
        }
        None => {
            out.report("degree", format!("none up to {max}"));
            Outcome::NotFound
        }
    };
    out.emit();
    Ok(outcome)
}

fn count(source: &Path, target: &Path, up_to: UpTo, output: OutputArgs) -> Result<Outcome, String> {
    let source = load_table(source)?;
    let target = load(target)?;
    let action = image_action(up_to, &target)?;
    let counted = count_embeddings(&source, target.table(), &action, &SearchConfig::default());
    let mut out = Output::new(output.format);
    out.stats(&counted.stats);
    out.report("dedup", action.mode());
    out.result(format!("embeddings: {}", counted.embeddings));
    out.result(format!("images: {}", counted.images));
    out.result(format!("classes: {}", counted.classes.len()));
    let outcome = found(counted.embeddings > 0);
    out.emit();
    Ok(outcome)
}

fn twogen(source: &Path, target: &Path, output: OutputArgs) -> Result<Outcome, String> {
    let source = load_table(source)?;
    let Loaded::Generated(target) = load(target)? else {
        return Err("twogen needs a generator file as target".into());
    };
    let report = two_generated_embeddings(&source, &target, &SearchConfig::default()).map_err(|e| e.to_string())?;
    let mut out = Output::new(output.format);
    out.report("2-generated subsemigroups", report.closures);
    out.report("candidates", report.candidates);
    out.report("dedup", report.distinct_images.dedup);
    out.report("distinct images", report.distinct_images.len());
    let elements = target.elements();
    for hit in &report.hits {
        let (a, b) = hit.generators;
        out.result(format!(
            "{} {} size {} embeddings {}",
            elements[a as usize],
            elements[b as usize],
            hit.subsemigroup.len(),
            hit.solutions.len()
        ));
    }
    out.report("hits", report.hits.len());
    let outcome = found(!report.hits.is_empty());
    out.emit();
    Ok(outcome)
}

fn run(cli: Cli) -> Result<Outcome, String> {
    match cli.command {
        Command::Validate { input } => validate(&input),
        Command::Profile { input, elements } => profile(&input, elements),
        Command::Gen {
            family,
            degree,
            generators,
            elements,
        } => generate(family, degree, generators, elements),
        Command::Embed {
            source,
            target,
            all,
            up_to,
            limit,
            search,
        } => embed(&source, &target, all, up_to, limit, &search),
        Command::Iso { a, b, search } => iso(&a, &b, &search),
        Command::Aut { input, output } => aut(&input, output),
        Command::Mindeg {
            source,
            family,
            max,
            output,
        } => mindeg(&source, family, max, output),
        Command::Count {
            source,
            target,
            up_to,
            output,
        } => count(&source, &target, up_to, output),
        Command::Twogen { source, target, output } => twogen(&source, &target, output),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(Outcome::Found) => ExitCode::SUCCESS,
        Ok(Outcome::NotFound) => ExitCode::from(1),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
