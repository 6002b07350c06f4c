use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use schubert_core::incexc::{
    alternating_sum_with, cw_augmentation, cw_inclusion_exclusion, cw_recursive,
};
use schubert_core::purple::{characterize_monomials, purple_family};
use schubert_core::schubert::{schubert_diagram, schubert_shared};
use schubert_core::verify::{
    self, Claim, ResultCache, RunConfig, EXIT_BUDGET, EXIT_COUNTEREXAMPLE,
};
use schubert_core::weyl::{chi, ChiOptions};
use schubert_core::{rothe, Diagram, Error, Permutation, Polynomial, Word};

#[derive(Parser)]
#[command(
    name = "schubx",
    version,
    about = "Schubert polynomials, Rothe diagrams and positivity checks"
)]
struct Cli {
    #[arg(
        long,
        global = true,
        value_enum,
        default_value = "text",
        env = "SCHUBX_FORMAT"
    )]
    format: Format,
    /// Write output here instead of standard output.
    #[arg(long, global = true, env = "SCHUBX_OUT")]
    out: Option<PathBuf>,
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0, env = "SCHUBX_JOBS")]
    jobs: usize,
    #[arg(long, global = true, default_value_t = 4, env = "SCHUBX_MAX_N")]
    max_n: usize,
    #[arg(long, global = true, default_value_t = verify::DEFAULT_SEED, env = "SCHUBX_SEED")]
    seed: u64,
    /// JSON-lines file of memoized values, read at start and appended at exit.
    #[arg(long, global = true, env = "SCHUBX_CACHE")]
    cache: Option<PathBuf>,
    /// Largest number of dominated diagrams a dual character may enumerate.
    #[arg(long, global = true, default_value_t = schubert_core::weyl::DEFAULT_BUDGET, env = "SCHUBX_BUDGET_DOMINATED")]
    budget_dominated: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchubertMethod {
    Diagram,
    Divdiff,
    Weyl,
}

#[derive(Clone, Copy, ValueEnum)]
enum CwMethod {
    Ie,
    Rec,
    Aug,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Schubert polynomial of a permutation.
    Schubert {
        perm: Permutation,
        #[arg(long, value_enum, default_value = "divdiff", env = "SCHUBX_METHOD")]
        method: SchubertMethod,
    },
    /// Print the Rothe diagram of a permutation.
    Rothe { perm: Permutation },
    /// Print c_w.
    Cw {
        perm: Permutation,
        #[arg(long, value_enum, default_value = "ie", env = "SCHUBX_CW_METHOD")]
        method: CwMethod,
        /// Compute by every applicable method and fail on disagreement.
        #[arg(long, env = "SCHUBX_ALL_METHODS")]
        all_methods: bool,
    },
    /// Tabulate c_w over S_1, ..., S_max-n.
    CwTable,
    /// Check a claim on every input up to max-n.
    Verify {
        claim: Claim,
        /// Extra random inputs for sampled claims.
        #[arg(long, default_value_t = 0, env = "SCHUBX_SAMPLES")]
        samples: usize,
        #[arg(long, default_value_t = 6, env = "SCHUBX_SAMPLE_N")]
        sample_n: usize,
        #[arg(long, default_value_t = schubert_core::schubert::REDUCED_WORD_GUARD, env = "SCHUBX_REDUCED_WORD_CAP")]
        reduced_word_cap: usize,
        /// Record wall-clock time per input.
        #[arg(long, env = "SCHUBX_TIMING")]
        timing: bool,
    },
    /// Purple boxes and family for a permutation or a diagram.
    Purple {
        /// A permutation, a diagram as JSON, or @file holding diagram JSON.
        input: String,
        #[arg(long)]
        k: u32,
        /// Defaults to w_k for permutation input.
        #[arg(long)]
        l: Option<u32>,
        /// Also split the working monomials into purple and extra ones.
        #[arg(long)]
        characterize: bool,
    },
    /// Dual character of a permutation's Rothe diagram or of a diagram.
    Chi {
        /// A permutation, a diagram as JSON, or @file holding diagram JSON.
        input: String,
    },
    /// The signed sum over the subwords between u and w.
    AlternatingSum {
        perm: Permutation,
        /// Use "()" for the empty word.
        u: Word,
        #[arg(long)]
        sum_only: bool,
    },
}

enum Target {
    Perm(Permutation),
    Diagram(Diagram),
}

fn parse_target(s: &str) -> anyhow::Result<Target> {
    let text = match s.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).with_context(|| format!("reading {path}"))?,
        None => s.to_string(),
    };
    if text.trim_start().starts_with('{') {
        let value: Value = serde_json::from_str(&text).context("diagram JSON")?;
        Ok(Target::Diagram(Diagram::from_json(&value)?))
    } else {
        Ok(Target::Perm(text.trim().parse()?))
    }
}

fn poly_out(p: &Polynomial, n: usize, format: Format) -> String {
    match format {
        Format::Json => p.to_json_vars(n).to_string(),
        _ => p.to_string(),
    }
}

struct Output {
    text: String,
    code: i32,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, code: 0 }
    }
}

fn run(cli: &Cli) -> anyhow::Result<Output> {
    let format = cli.format;
    let chi_opts = ChiOptions {
        budget: cli.budget_dominated,
        modular_prepass: false,
    };
    Ok(match &cli.command {
        Command::Schubert { perm, method } => {
            let p = match method {
                SchubertMethod::Divdiff => (*schubert_shared(perm)?).clone(),
                SchubertMethod::Diagram => schubert_diagram(perm)?,
                SchubertMethod::Weyl => chi(&rothe(perm), &chi_opts)?,
            };
            Output::ok(poly_out(&p, perm.len(), format))
        }
        Command::Rothe { perm } => {
            let d = rothe(perm);
            Output::ok(match format {
                Format::Json => d.to_json().to_string(),
                _ => format!("{}\n{}", d, d.picture().trim_end()),
            })
        }
        Command::Cw {
            perm,
            method,
            all_methods,
        } => {
            if *all_methods {
                let ie = cw_inclusion_exclusion(perm);
                let rec = cw_recursive(perm);
                let aug = if perm.avoids_1432_1423() {
                    Some(schubert_core::BigInt::from(cw_augmentation(perm)?))
                } else {
                    None
                };
                let agree = rec == ie && aug.as_ref().is_none_or(|a| *a == ie);
                let text = match format {
                    Format::Json => json!({
                        "w": perm.to_string(),
                        "ie": ie.to_string(),
                        "rec": rec.to_string(),
                        "aug": aug.as_ref().map(ToString::to_string),
                        "agree": agree,
                    })
                    .to_string(),
                    _ => {
                        let aug = aug.map_or("n/a".to_string(), |a| a.to_string());
                        let verdict = if agree {
                            "methods agree"
                        } else {
                            "methods DISAGREE"
                        };
                        format!("{ie}\nie={ie} rec={rec} aug={aug} {verdict}")
                    }
                };
                Output {
                    text,
                    code: if agree { 0 } else { EXIT_COUNTEREXAMPLE },
                }
            } else {
                let c = match method {
                    CwMethod::Ie => cw_inclusion_exclusion(perm),
                    CwMethod::Rec => cw_recursive(perm),
                    CwMethod::Aug => cw_augmentation(perm)?.into(),
                };
                Output::ok(match format {
                    Format::Json => {
                        json!({ "w": perm.to_string(), "c": c.to_string() }).to_string()
                    }
                    _ => c.to_string(),
                })
            }
        }
        Command::CwTable => {
            let rows = verify::cw_table(cli.max_n, cli.jobs)?;
            let agree = rows.iter().all(|r| r.methods_agree());
            let text = match format {
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    w.write_record(["w", "length", "c_w", "methods_agree"])?;
                    for r in &rows {
                        w.write_record([
                            r.w.to_string(),
                            r.length.to_string(),
                            r.cw.to_string(),
                            r.methods_agree().to_string(),
                        ])?;
                    }
                    String::from_utf8(w.into_inner()?)?
                }
                Format::Json => rows
                    .iter()
                    .map(|r| {
                        json!({
                            "w": r.w.to_string(),
                            "length": r.length,
                            "c_w": r.cw.to_string(),
                            "methods_agree": r.methods_agree(),
                        })
                        .to_string()
                            + "\n"
                    })
                    .collect(),
                Format::Text => rows
                    .iter()
                    .map(|r| {
                        let mark = if r.methods_agree() {
                            ""
                        } else {
                            "  methods disagree"
                        };
                        format!("{:<8} l={:<2} c={}{}\n", r.w, r.length, r.cw, mark)
                    })
                    .collect(),
            };
            Output {
                text,
                code: if agree { 0 } else { EXIT_COUNTEREXAMPLE },
            }
        }
        Command::Verify {
            claim,
            samples,
            sample_n,
            reduced_word_cap,
            timing,
        } => {
            let config = RunConfig {
                max_n: cli.max_n,
                jobs: cli.jobs,
                budget_dominated: cli.budget_dominated,
                reduced_word_cap: *reduced_word_cap,
                seed: cli.seed,
                samples: *samples,
                sample_n: *sample_n,
                timing: *timing,
            };
            let batch = verify::run(*claim, &config)?;
            let text = match format {
                Format::Json => batch.to_json_lines(),
                Format::Csv => batch.to_csv(),
                Format::Text => batch.to_text(),
            };
            Output {
                text,
                code: batch.exit_code(),
            }
        }
        Command::Purple {
            input,
            k,
            l,
            characterize,
        } => {
            let (d, l, perm) = match parse_target(input)? {
                Target::Perm(w) => {
                    if *k == 0 || *k as usize > w.len() {
                        bail!("--k must lie in 1..={}", w.len());
                    }
                    let l = l.unwrap_or(w.at(*k as usize));
                    (rothe(&w), l, Some(w))
                }
                Target::Diagram(d) => {
                    let l = l.ok_or_else(|| anyhow!("--l is required for diagram input"))?;
                    (d, l, None)
                }
            };
            let family = purple_family(&d, *k, l);
            let mut value = family.to_json();
            let mut text = format!(
                "purple boxes: {}\nmembers:\n{}\nmonomials: {}",
                family.boxes,
                family
                    .members
                    .iter()
                    .map(|m| format!("  {m}"))
                    .collect::<Vec<_>>()
                    .join("\n"),
                monomial_list(family.monomials.iter().rev()),
            );
            if *characterize {
                let w = perm.ok_or_else(|| anyhow!("--characterize needs a permutation"))?;
                if l != w.at(*k as usize) {
                    bail!("--characterize removes column w_k = {}", w.at(*k as usize));
                }
                let c = characterize_monomials(&w, *k)?;
                value["characterization"] = c.to_json();
                text.push_str(&format!(
                    "\npattern: {}\nworking: {}\nfrom purple: {}\nextra: {}",
                    c.pattern,
                    monomial_list(c.working.iter().rev()),
                    monomial_list(c.from_purple.iter().rev()),
                    monomial_list(c.extra.iter().rev()),
                ));
            }
            Output::ok(match format {
                Format::Json => value.to_string(),
                _ => text,
            })
        }
        Command::Chi { input } => {
            let d = match parse_target(input)? {
                Target::Perm(w) => rothe(&w),
                Target::Diagram(d) => d,
            };
            let p = chi(&d, &chi_opts)?;
            Output::ok(poly_out(&p, d.n(), format))
        }
        Command::AlternatingSum { perm, u, sum_only } => {
            let r = alternating_sum_with(perm, u, !sum_only)?;
            Output::ok(match format {
                Format::Json => r.to_json().to_string(),
                _ if *sum_only => r.sum.to_string(),
                _ => {
                    let mut out = String::new();
                    for t in &r.terms {
                        let sign = if t.sign > 0 { '+' } else { '-' };
                        out.push_str(&format!("{sign} [{}] {} * ({})\n", t.v, t.m, t.schubert));
                    }
                    out.push_str(&format!("= {}", r.sum));
                    out
                }
            })
        }
    })
}

fn monomial_list<'a>(ms: impl Iterator<Item = &'a schubert_core::Monomial>) -> String {
    let items: Vec<String> = ms.map(ToString::to_string).collect();
    format!("{{{}}}", items.join(", "))
}

fn exit_code_for(e: &anyhow::Error) -> i32 {
    match e.downcast_ref::<Error>() {
        Some(Error::BudgetExceeded { .. } | Error::LengthGuardExceeded { .. }) => EXIT_BUDGET,
        _ => 1,
    }
}

fn emit(cli: &Cli, text: &str) -> anyhow::Result<()> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &cli.out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).context("writing output")
        }
    }
}

fn main() -> ExitCode {
    // clap's own usage code is 2, which is reserved for counterexamples
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let outcome = (|| {
        let mut cache = cli.cache.as_ref().map(ResultCache::open).transpose()?;
        let out = run(&cli)?;
        emit(&cli, &out.text)?;
        if let Some(cache) = cache.as_mut() {
            cache.persist()?;
        }
        anyhow::Ok(out.code)
    })();
    match outcome {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code_for(&e) as u8)
        }
    }
}
