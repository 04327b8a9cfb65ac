use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context as _, Result};
use clap::{Parser, Subcommand, ValueEnum};

use antecede::{parse_document, run, DiscourseDocument};

#[derive(Parser)]
#[command(name = "antecede", version, about = "Resolve pronouns in annotated discourse")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    #[default]
    Text,
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Resolve every pronoun in the given discourse documents.
    Resolve {
        /// Discourse documents (line format or JSON mirror).
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Additional rule file merged into each document's rules.
        #[arg(long)]
        rules: Option<PathBuf>,
        /// Include derivation traces and context snapshots.
        #[arg(long)]
        trace: bool,
        /// Output format.
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        report: ReportFormat,
        /// Exit nonzero when any embedded expectation fails.
        #[arg(long)]
        check: bool,
    },
}

fn load_document(path: &PathBuf, rules: Option<&PathBuf>) -> Result<DiscourseDocument> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let mut doc = parse_document(&text)
        .map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
    if let Some(rules_path) = rules {
        let rule_text = fs::read_to_string(rules_path)
            .with_context(|| format!("reading {}", rules_path.display()))?;
        let extra = antecede::parse_rules(&rule_text)
            .map_err(|e| anyhow::anyhow!("{}: {e}", rules_path.display()))?;
        doc.rules
            .extend(extra)
            .map_err(|e| anyhow::anyhow!("{}: {e}", rules_path.display()))?;
    }
    Ok(doc)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Resolve {
            files,
            rules,
            trace,
            report,
            check,
        } => {
            let mut failures = 0usize;
            for path in &files {
                let doc = match load_document(path, rules.as_ref()) {
                    Ok(doc) => doc,
                    Err(e) => {
                        eprintln!("error: {e:#}");
                        failures += 1;
                        continue;
                    }
                };
                let result = run(&doc);
                match report {
                    ReportFormat::Text => print!("{}", result.render_text(trace)),
                    ReportFormat::Structured => println!("{}", result.render_structured()),
                }
                if !result.all_passed() {
                    failures += 1;
                }
                let had_errors = result.utterances.iter().any(|u| !u.errors.is_empty());
                if had_errors && check {
                    failures += 1;
                }
            }
            if check && failures > 0 {
                return ExitCode::FAILURE;
            }
            ExitCode::SUCCESS
        }
    }
}
