use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use owlrules_core::{
    extract_all, merge, parse_fact_base, parse_ontology, render_structured, render_text, run_fixpoint,
    EngineError, ExtractionReport, Fact, FactBase, InferenceResult, MergeError, OntologyModel, ParseError,
    Rule, RuleCategory,
};

const EXIT_PARSE: u8 = 1;
const EXIT_MERGE: u8 = 2;
const EXIT_CONTRADICTION: u8 = 3;
const EXIT_CAP: u8 = 4;
const EXIT_STRICT: u8 = 5;

/// Extract, classify and run rules hidden in OWL ontologies.
#[derive(Debug, Parser)]
#[command(name = "owlrules", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the rules found in the merged ontologies.
    Extract(Common),
    /// Print per-category counts and the category of every rule.
    Classify(Common),
    /// Run the executable rules over a fact file to a fixpoint.
    Infer {
        #[command(flatten)]
        common: Common,
        /// Fact file: isa(a, C), link(a, p, b), ...
        #[arg(long, value_name = "FILE")]
        facts: PathBuf,
    },
}

#[derive(Debug, Args)]
struct Common {
    /// Ontology files in the RDF/XML subset.
    #[arg(required = true, value_name = "FILES")]
    inputs: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
    /// Iteration cap for inference.
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    cap: u64,
    /// Exit with status 5 when inference reports constraint violations.
    #[arg(long)]
    strict: bool,
    /// Leave out rules that cannot be executed.
    #[arg(long)]
    no_nonexecutable: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Debug)]
enum Failure {
    Io(String),
    Parse(ParseError),
    Merge(MergeError),
    Engine(EngineError),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) | Failure::Parse(_) => EXIT_PARSE,
            Failure::Merge(_) => EXIT_MERGE,
            Failure::Engine(EngineError::Contradiction { .. }) => EXIT_CONTRADICTION,
            Failure::Engine(_) => EXIT_PARSE,
        }
    }

    fn report(&self) {
        match self {
            Failure::Io(msg) => eprintln!("ERROR {msg}"),
            Failure::Parse(err) => {
                for d in &err.diagnostics {
                    eprintln!("{}", d.render(&err.name));
                }
            }
            Failure::Merge(err) => eprintln!("ERROR merge: {err}"),
            Failure::Engine(EngineError::Contradiction {
                individual,
                class,
                positive,
                negative,
            }) => eprintln!(
                "ERROR contradiction: {individual} is both in {class} ({positive}) and not in it ({negative})"
            ),
            Failure::Engine(err) => eprintln!("ERROR {err}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() {
                ExitCode::from(EXIT_PARSE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            failure.report();
            ExitCode::from(failure.code())
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Extract(common) => {
            let (report, sources) = load(&common)?;
            let rules = select(report.rules, !common.no_nonexecutable);
            let out = match common.format {
                Format::Text => rules.iter().map(|r| format!("{}\n", render_text(r))).collect(),
                Format::Structured => render_structured(&rules, &sources),
            };
            emit(&common, &out)?;
            Ok(0)
        }
        Command::Classify(common) => {
            let (report, _) = load(&common)?;
            let rules = select(report.rules, !common.no_nonexecutable);
            emit(&common, &classify_report(&rules, common.format))?;
            Ok(0)
        }
        Command::Infer { common, facts } => {
            let (report, _) = load(&common)?;
            let rules = select(report.rules, false);
            let text = read(&facts)?;
            let parsed = parse_fact_base(&text, &facts.display().to_string()).map_err(Failure::Parse)?;
            for d in &parsed.diagnostics {
                eprintln!("{}", d.render(&facts.display().to_string()));
            }
            let cap = usize::try_from(common.cap).unwrap_or(usize::MAX);
            let result = run_fixpoint(&rules, &parsed.facts, cap).map_err(Failure::Engine)?;
            emit(&common, &infer_report(&result, &parsed.facts, common.format))?;
            if !result.converged {
                eprintln!("ERROR iteration cap {cap} reached before a fixpoint");
                Ok(EXIT_CAP)
            } else if common.strict && !result.violations.is_empty() {
                Ok(EXIT_STRICT)
            } else {
                Ok(0)
            }
        }
    }
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

/// Parses and merges every input, printing warnings to standard error.
fn load(common: &Common) -> Result<(ExtractionReport, Vec<String>), Failure> {
    let mut models: Vec<OntologyModel> = Vec::new();
    let mut sources = Vec::new();
    for path in &common.inputs {
        let name = path.display().to_string();
        let parsed = parse_ontology(&read(path)?, &name).map_err(Failure::Parse)?;
        for d in &parsed.diagnostics {
            eprintln!("{}", d.render(&name));
        }
        models.push(parsed.model);
        sources.push(name);
    }
    let merged = merge(&models).map_err(Failure::Merge)?;
    for w in &merged.warnings {
        eprintln!("WARNING {w}");
    }
    let report = extract_all(&merged.model);
    for w in &report.warnings {
        eprintln!("WARNING {w}");
    }
    sources.sort();
    sources.dedup();
    Ok((report, sources))
}

fn select(rules: Vec<Rule>, include_nonexecutable: bool) -> Vec<Rule> {
    rules
        .into_iter()
        .filter(|r| include_nonexecutable || r.executable())
        .collect()
}

fn emit(common: &Common, out: &str) -> Result<(), Failure> {
    match &common.output {
        Some(path) => fs::write(path, out).map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
        None => io::stdout()
            .lock()
            .write_all(out.as_bytes())
            .map_err(|e| Failure::Io(format!("stdout: {e}"))),
    }
}

#[derive(Serialize)]
struct ClassifyDoc<'a> {
    counts: CategoryCounts,
    rules: Vec<RuleCategoryDoc<'a>>,
}

#[derive(Serialize, Default)]
struct CategoryCounts {
    identifying: usize,
    specifying: usize,
    unobvious: usize,
    #[serde(rename = "meaning-enriching")]
    meaning_enriching: usize,
}

#[derive(Serialize)]
struct RuleCategoryDoc<'a> {
    id: &'a str,
    category: &'static str,
    rule: String,
}

fn classify_report(rules: &[Rule], format: Format) -> String {
    let mut counts = CategoryCounts::default();
    for r in rules {
        *match r.category() {
            RuleCategory::Identifying => &mut counts.identifying,
            RuleCategory::Specifying => &mut counts.specifying,
            RuleCategory::Unobvious => &mut counts.unobvious,
            RuleCategory::MeaningEnriching => &mut counts.meaning_enriching,
        } += 1;
    }
    let mut ordered: Vec<&Rule> = rules.iter().collect();
    ordered.sort_by(|a, b| a.category().cmp(&b.category()).then_with(|| a.id().cmp(b.id())));
    match format {
        Format::Text => {
            let mut out = format!(
                "identifying: {}\nspecifying: {}\nunobvious: {}\nmeaning-enriching: {}\n",
                counts.identifying, counts.specifying, counts.unobvious, counts.meaning_enriching
            );
            for r in ordered {
                out.push_str(&format!("{}\t{}\t{}\n", r.category().name(), r.id(), render_text(r)));
            }
            out
        }
        Format::Structured => {
            let doc = ClassifyDoc {
                counts,
                rules: ordered
                    .into_iter()
                    .map(|r| RuleCategoryDoc {
                        id: r.id(),
                        category: r.category().name(),
                        rule: render_text(r),
                    })
                    .collect(),
            };
            let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
            s.push('\n');
            s
        }
    }
}

#[derive(Serialize)]
struct InferDoc {
    derived: Vec<FactDoc>,
    violations: Vec<FactDoc>,
    iterations: usize,
    converged: bool,
    initial_facts: usize,
    final_facts: usize,
}

#[derive(Serialize)]
struct FactDoc {
    fact: String,
    rule: String,
}

fn fact_docs(list: &[(Fact, String)]) -> Vec<FactDoc> {
    list.iter()
        .map(|(f, r)| FactDoc {
            fact: f.to_string(),
            rule: r.clone(),
        })
        .collect()
}

fn infer_report(result: &InferenceResult, initial: &FactBase, format: Format) -> String {
    match format {
        Format::Text => {
            let mut out = String::new();
            for (fact, _) in &result.derived {
                out.push_str(&format!("{fact}\n"));
            }
            for (fact, rule) in &result.violations {
                out.push_str(&format!("# violation: {fact} breaks {rule}\n"));
            }
            out.push_str(&format!(
                "# iterations: {}, converged: {}, derived: {}, violations: {}\n",
                result.iterations,
                result.converged,
                result.derived.len(),
                result.violations.len()
            ));
            out
        }
        Format::Structured => {
            let doc = InferDoc {
                derived: fact_docs(&result.derived),
                violations: fact_docs(&result.violations),
                iterations: result.iterations,
                converged: result.converged,
                initial_facts: initial.len(),
                final_facts: result.final_facts.len(),
            };
            let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
            s.push('\n');
            s
        }
    }
}
