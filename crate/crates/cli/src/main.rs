use std::fs;
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use drskit::baselines::{self, EmbeddingTable};
use drskit::corpus::{apply_ids, corpus_to_string, read_corpus, ClausalForm};
use drskit::counter::{MatchConfig, MatchResult, Search};
use drskit::eval::{self, token_counts_from};
use drskit::render::{render_form, BoxStyle, RenderOptions};
use drskit::{validate, SynsetMap};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "drskit", version, about = "Validate, score and draw DRSs in clausal form")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check every document of a corpus for well-formedness.
    Validate {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Score a system corpus against gold.
    Score {
        system: PathBuf,
        gold: PathBuf,
        #[command(flatten)]
        matching: MatchArgs,
        #[arg(long)]
        json: bool,
    },
    /// Fine-grained, oracle and sentence-length breakdown.
    Analyze {
        system: PathBuf,
        gold: PathBuf,
        #[command(flatten)]
        matching: MatchArgs,
        /// Tokenized sentences, one per line, for the length breakdown.
        #[arg(long)]
        tokenized: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Approximate randomization test between two systems.
    Significance {
        system_a: PathBuf,
        system_b: PathBuf,
        gold: PathBuf,
        #[command(flatten)]
        matching: MatchArgs,
        /// Randomization rounds.
        #[arg(long = "R", default_value_t = 1000)]
        rounds: usize,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long)]
        json: bool,
    },
    /// Predict the most typical training DRS for every sentence.
    Spar {
        #[arg(long)]
        train: PathBuf,
        /// Estimate typicality against this many sampled documents.
        #[arg(long)]
        sample: Option<usize>,
        /// Number of documents to emit.
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        matching: MatchArgs,
    },
    /// Predict the DRS of the most similar training sentence.
    Simspar {
        #[arg(long)]
        train: PathBuf,
        #[arg(long)]
        embeddings: PathBuf,
        /// Sentences, one per line.
        #[arg(long)]
        input: PathBuf,
    },
    /// Draw each document in box notation.
    Render {
        file: PathBuf,
        #[arg(long)]
        ascii: bool,
        /// Stack side-by-side boxes that would exceed this many columns.
        #[arg(long)]
        width: Option<usize>,
    },
}

#[derive(Args)]
struct MatchArgs {
    #[arg(long, default_value_t = 10)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Exact search instead of hill climbing.
    #[arg(long)]
    exhaustive: bool,
    /// Keep REF clauses that duplicate a concept's referent.
    #[arg(long)]
    include_ref: bool,
    /// Tab-separated sense normalization table.
    #[arg(long)]
    synset_map: Option<PathBuf>,
    /// Document ids for the system corpus, one per line.
    #[arg(long)]
    system_ids: Option<PathBuf>,
    /// Document ids for the gold corpus, one per line.
    #[arg(long)]
    gold_ids: Option<PathBuf>,
}

impl MatchArgs {
    fn config(&self) -> MatchConfig {
        MatchConfig {
            restarts: self.restarts,
            seed: self.seed,
            search: if self.exhaustive { Search::Exhaustive } else { Search::HillClimb },
            include_ref: self.include_ref,
            ..MatchConfig::default()
        }
    }

    fn synset_map(&self) -> Result<Option<SynsetMap>> {
        self.synset_map
            .as_deref()
            .map(|p| SynsetMap::parse(&read_text(p)?).with_context(|| format!("{}", p.display())))
            .transpose()
    }

    fn ids(docs: &mut [ClausalForm], path: Option<&Path>) -> Result<()> {
        if let Some(path) = path {
            apply_ids(docs, &read_text(path)?).with_context(|| format!("{}", path.display()))?;
        }
        Ok(())
    }

    fn system(&self, path: &Path) -> Result<Vec<ClausalForm>> {
        let mut docs = load(path)?;
        Self::ids(&mut docs, self.system_ids.as_deref())?;
        Ok(docs)
    }

    fn gold(&self, path: &Path) -> Result<Vec<ClausalForm>> {
        let mut docs = load(path)?;
        Self::ids(&mut docs, self.gold_ids.as_deref())?;
        Ok(docs)
    }
}

fn read_text(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        return io::read_to_string(io::stdin()).context("reading standard input");
    }
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load(path: &Path) -> Result<Vec<ClausalForm>> {
    let text = read_text(path)?;
    read_corpus(text.as_bytes()).with_context(|| format!("{}", path.display()))
}

fn pct(x: f64) -> String {
    format!("{:.1}", x * 100.0)
}

fn print_json<T: Serialize>(out: &mut impl Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn print_totals(out: &mut impl Write, r: &MatchResult) -> io::Result<()> {
    writeln!(out, "matched\t{}", r.matched)?;
    writeln!(out, "produced\t{}", r.produced)?;
    writeln!(out, "gold\t{}", r.gold)?;
    writeln!(out, "P\t{}", pct(r.precision))?;
    writeln!(out, "R\t{}", pct(r.recall))?;
    writeln!(out, "F\t{}", pct(r.f1))
}

#[derive(Serialize)]
struct DocValidation<'a> {
    index: usize,
    doc_id: &'a str,
    report: drskit::ValidationReport,
}

/// Returns whether the command succeeded in its domain sense.
fn run(command: Command, out: &mut impl Write) -> Result<bool> {
    match command {
        Command::Validate { file, json } => {
            let docs = load(&file)?;
            let reports: Vec<DocValidation> = docs
                .iter()
                .enumerate()
                .map(|(index, d)| DocValidation {
                    index,
                    doc_id: &d.doc_id,
                    report: validate(d),
                })
                .collect();
            let invalid = reports.iter().filter(|r| !r.report.valid).count();
            if json {
                print_json(out, &reports)?;
            } else {
                for r in &reports {
                    for v in &r.report.violations {
                        writeln!(out, "DOC{}\t{}\t{}", r.index, v.rule, v.message)?;
                    }
                }
            }
            eprintln!("{} documents, {invalid} invalid", docs.len());
            Ok(invalid == 0)
        }
        Command::Score {
            system,
            gold,
            matching,
            json,
        } => {
            let (system, gold) = (matching.system(&system)?, matching.gold(&gold)?);
            let map = matching.synset_map()?;
            let score = eval::score_corpus(&system, &gold, &matching.config(), map.as_ref())?;
            if json {
                print_json(out, &score)?;
            } else {
                writeln!(out, "doc\tmatched\tproduced\tgold\tP\tR\tF\tvalid")?;
                for d in &score.per_doc {
                    let r = &d.result;
                    writeln!(
                        out,
                        "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                        d.doc_id,
                        r.matched,
                        r.produced,
                        r.gold,
                        pct(r.precision),
                        pct(r.recall),
                        pct(r.f1),
                        if d.valid { "yes" } else { "no" }
                    )?;
                }
                writeln!(out)?;
                print_totals(out, &score.micro)?;
                writeln!(out, "perfect\t{}", score.perfect_count)?;
                writeln!(out, "ill-formed\t{}", score.ill_formed_count)?;
            }
            Ok(true)
        }
        Command::Analyze {
            system,
            gold,
            matching,
            tokenized,
            json,
        } => {
            let (system, gold) = (matching.system(&system)?, matching.gold(&gold)?);
            let map = matching.synset_map()?;
            let tokens = tokenized.as_deref().map(read_text).transpose()?.map(|t| token_counts_from(&t));
            let report = eval::analyze(&system, &gold, &matching.config(), map.as_ref(), tokens.as_deref())?;
            if json {
                print_json(out, &report)?;
            } else {
                write!(out, "{}", report.to_tsv())?;
            }
            Ok(true)
        }
        Command::Significance {
            system_a,
            system_b,
            gold,
            matching,
            rounds,
            alpha,
            json,
        } => {
            let gold = matching.gold(&gold)?;
            let map = matching.synset_map()?;
            let config = matching.config();
            let a = eval::score_corpus(&matching.system(&system_a)?, &gold, &config, map.as_ref())?;
            let b = eval::score_corpus(&matching.system(&system_b)?, &gold, &config, map.as_ref())?;
            let result = eval::approx_randomization(&a.counts(), &b.counts(), rounds, alpha, matching.seed)?;
            if json {
                #[derive(Serialize)]
                struct Report<'a> {
                    a: &'a MatchResult,
                    b: &'a MatchResult,
                    test: &'a eval::SignificanceResult,
                }
                print_json(
                    out,
                    &Report {
                        a: &a.micro,
                        b: &b.micro,
                        test: &result,
                    },
                )?;
            } else {
                writeln!(out, "F(A)\t{}", pct(a.micro.f1))?;
                writeln!(out, "F(B)\t{}", pct(b.micro.f1))?;
                writeln!(out, "delta\t{}", pct(result.observed_delta))?;
                writeln!(out, "p\t{:.4}", result.p_value)?;
                writeln!(out, "rounds\t{}", result.rounds)?;
                writeln!(out, "alpha\t{}", result.alpha)?;
                let verdict = if result.significant { "significant" } else { "not significant" };
                writeln!(out, "{verdict}")?;
            }
            Ok(true)
        }
        Command::Spar {
            train,
            sample,
            n,
            matching,
        } => {
            let training = load(&train)?;
            let default = baselines::spar_select(&training, &matching.config(), sample)?;
            write!(out, "{}", corpus_to_string(&baselines::spar_predict(n, &default)))?;
            Ok(true)
        }
        Command::Simspar {
            train,
            embeddings,
            input,
        } => {
            let training = baselines::training_pairs(&load(&train)?);
            let file = fs::File::open(&embeddings).with_context(|| format!("cannot read {}", embeddings.display()))?;
            let table = EmbeddingTable::read(io::BufReader::new(file)).with_context(|| format!("{}", embeddings.display()))?;
            let sentences: Vec<String> = read_text(&input)?
                .as_bytes()
                .lines()
                .collect::<io::Result<Vec<_>>>()?
                .into_iter()
                .filter(|l| !l.trim().is_empty())
                .collect();
            let predicted = baselines::sim_spar_predict(&sentences, &training, &table)?;
            write!(out, "{}", corpus_to_string(&predicted))?;
            Ok(true)
        }
        Command::Render { file, ascii, width } => {
            let docs = load(&file)?;
            let options = RenderOptions {
                style: if ascii { BoxStyle::Ascii } else { BoxStyle::Unicode },
                width,
            };
            let mut ok = true;
            for (i, doc) in docs.iter().enumerate() {
                if i > 0 {
                    writeln!(out)?;
                }
                if !doc.raw_text.is_empty() {
                    writeln!(out, "{}\n", doc.raw_text)?;
                }
                let report = validate(doc);
                if !report.valid {
                    ok = false;
                    for v in &report.violations {
                        eprintln!("DOC{i}\t{}\t{}", v.rule, v.message);
                    }
                    continue;
                }
                match render_form(doc, options) {
                    Ok(text) => write!(out, "{text}")?,
                    Err(e) => bail!("document {i}: {e}"),
                }
            }
            Ok(ok)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = run(cli.command, &mut out);
    let flushed = out.flush();
    match result {
        Ok(true) if flushed.is_ok() => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
