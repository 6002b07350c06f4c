//! Batch verification of the positivity statements over `S_n`.
//!
//! A run enumerates the inputs of one claim, checks them on a rayon pool,
//! and returns the reports in enumeration order, so the output does not
//! depend on the number of workers.

mod cache;
mod claims;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};

pub use cache::ResultCache;
pub use claims::cw_table;
pub use claims::CwRow;

/// Seed used by sampled suites unless one is given.
pub const DEFAULT_SEED: u64 = 1432;

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub max_n: usize,
    /// Worker threads; 0 lets rayon decide.
    pub jobs: usize,
    pub budget_dominated: u64,
    pub reduced_word_cap: usize,
    pub seed: u64,
    /// Extra random inputs drawn at size `sample_n`, for claims that sample.
    pub samples: usize,
    pub sample_n: usize,
    /// Adds wall-clock timings to reports (which makes them nondeterministic).
    pub timing: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            max_n: 4,
            jobs: 0,
            budget_dominated: crate::weyl::DEFAULT_BUDGET,
            reduced_word_cap: crate::schubert::REDUCED_WORD_GUARD,
            seed: DEFAULT_SEED,
            samples: 0,
            sample_n: 6,
            timing: false,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.budget_dominated == 0 || self.reduced_word_cap == 0 {
            return Err(Error::Invalid("budgets must be positive".into()));
        }
        if self.max_n > 10 || self.sample_n > 10 {
            return Err(Error::Invalid("sizes above 10 are not supported".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Claim {
    /// Single-step positivity `S_sigma - M S_pi >= 0`.
    Thm1_0,
    /// Nonnegativity of the alternating sums for avoiders.
    Thm1_1,
    /// `c_w` counts non-augmentations for avoiders.
    Thm1_2,
    /// `chi_{D(w)} = S_w`.
    Thm2_4,
    /// The diagram sum equals `S_w` exactly for avoiders.
    Thm2_7,
    /// Positivity for every member of the purple family.
    Thm4_1,
    /// Specialized alternating sums are nonnegative for every `u`.
    Conj5_1,
    /// Purple monomials are all the working monomials for avoiders.
    Conj5_3,
    /// Reduced-word formula for `S_w(1)`.
    Macdonald,
    /// `sum_{v <= w} c_{perm(v)} = S_w(1)`, and `c_w = 0` when `w(n) = n`.
    CwIdentity,
}

impl Claim {
    pub const ALL: [Claim; 10] = [
        Claim::Thm1_0,
        Claim::Thm1_1,
        Claim::Thm1_2,
        Claim::Thm2_4,
        Claim::Thm2_7,
        Claim::Thm4_1,
        Claim::Conj5_1,
        Claim::Conj5_3,
        Claim::Macdonald,
        Claim::CwIdentity,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Claim::Thm1_0 => "thm1.0",
            Claim::Thm1_1 => "thm1.1",
            Claim::Thm1_2 => "thm1.2-equality",
            Claim::Thm2_4 => "thm2.4-equality",
            Claim::Thm2_7 => "thm2.7",
            Claim::Thm4_1 => "thm4.1",
            Claim::Conj5_1 => "conj5.1",
            Claim::Conj5_3 => "conj5.3",
            Claim::Macdonald => "macdonald",
            Claim::CwIdentity => "cw-identity",
        }
    }

    /// Whether the claim draws `samples` random extra inputs.
    pub fn samples(self) -> bool {
        matches!(self, Claim::Thm1_1 | Claim::Thm2_4 | Claim::Thm4_1)
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Claim {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let alias = match s {
            "thm1.2" => Some(Claim::Thm1_2),
            "thm2.4" => Some(Claim::Thm2_4),
            _ => None,
        };
        alias
            .or_else(|| Claim::ALL.into_iter().find(|c| c.id() == s))
            .ok_or_else(|| Error::Parse {
                what: "claim",
                input: s.to_string(),
                reason: format!("expected one of {}", Claim::ALL.map(Claim::id).join(", ")),
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Holds,
    Fails,
    OutsideScope,
    BudgetExceeded,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::OutsideScope => "outside-scope",
            Verdict::BudgetExceeded => "budget-exceeded",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One checked input. A `Fails` verdict always carries a witness.
#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub claim: Claim,
    pub input: Value,
    pub verdict: Verdict,
    pub witness: Option<Value>,
    pub elapsed: Option<Duration>,
}

impl VerificationReport {
    pub(crate) fn new(
        claim: Claim,
        input: Value,
        verdict: Verdict,
        witness: Option<Value>,
    ) -> Self {
        debug_assert!(verdict != Verdict::Fails || witness.is_some());
        VerificationReport {
            claim,
            input,
            verdict,
            witness,
            elapsed: None,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut out = json!({
            "claim": self.claim.id(),
            "input": self.input,
            "verdict": self.verdict.as_str(),
        });
        if let Some(w) = &self.witness {
            out["witness"] = w.clone();
        }
        if let Some(t) = self.elapsed {
            out["elapsed_ms"] = json!(t.as_secs_f64() * 1e3);
        }
        out
    }

    /// `key=value` pairs of the input, space separated.
    pub fn input_text(&self) -> String {
        match &self.input {
            Value::Object(map) => map
                .iter()
                .map(|(k, v)| match v {
                    Value::String(s) => format!("{k}={s}"),
                    other => format!("{k}={other}"),
                })
                .collect::<Vec<_>>()
                .join(" "),
            other => other.to_string(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut line = format!("{} {} {}", self.claim, self.input_text(), self.verdict);
        if let Some(w) = &self.witness {
            line.push_str(&format!(" witness={w}"));
        }
        if let Some(t) = self.elapsed {
            line.push_str(&format!(" elapsed_ms={:.3}", t.as_secs_f64() * 1e3));
        }
        line
    }

    pub const CSV_HEADER: [&'static str; 4] = ["claim", "input", "verdict", "witness"];

    pub fn csv_record(&self) -> [String; 4] {
        let witness = self
            .witness
            .as_ref()
            .map(Value::to_string)
            .unwrap_or_default();
        [
            self.claim.id().to_string(),
            self.input_text(),
            self.verdict.to_string(),
            witness,
        ]
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Summary {
    pub inputs: usize,
    pub holds: usize,
    pub fails: usize,
    pub outside_scope: usize,
    pub budget_exceeded: usize,
}

impl Summary {
    fn add(&mut self, v: Verdict) {
        self.inputs += 1;
        match v {
            Verdict::Holds => self.holds += 1,
            Verdict::Fails => self.fails += 1,
            Verdict::OutsideScope => self.outside_scope += 1,
            Verdict::BudgetExceeded => self.budget_exceeded += 1,
        }
    }
}

/// The reports of one claim with the configuration that produced them.
#[derive(Clone, Debug)]
pub struct Batch {
    pub claim: Claim,
    pub config: RunConfig,
    pub reports: Vec<VerificationReport>,
    pub summary: Summary,
}

pub const EXIT_HOLDS: i32 = 0;
pub const EXIT_CRASH: i32 = 1;
pub const EXIT_COUNTEREXAMPLE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

impl Batch {
    /// 2 if anything fails, else 3 if a budget was hit, else 0.
    pub fn exit_code(&self) -> i32 {
        if self.summary.fails > 0 {
            EXIT_COUNTEREXAMPLE
        } else if self.summary.budget_exceeded > 0 {
            EXIT_BUDGET
        } else {
            EXIT_HOLDS
        }
    }

    pub fn header_json(&self) -> Value {
        let c = &self.config;
        let mut batch = json!({
            "claim": self.claim.id(),
            "max_n": c.max_n,
            "seed": c.seed,
            "budget_dominated": c.budget_dominated,
            "reduced_word_cap": c.reduced_word_cap,
        });
        if self.claim.samples() {
            batch["samples"] = json!(c.samples);
            batch["sample_n"] = json!(c.sample_n);
        }
        json!({ "batch": batch })
    }

    pub fn summary_json(&self) -> Value {
        let s = &self.summary;
        json!({
            "summary": {
                "claim": self.claim.id(),
                "inputs": s.inputs,
                "holds": s.holds,
                "fails": s.fails,
                "outside_scope": s.outside_scope,
                "budget_exceeded": s.budget_exceeded,
            }
        })
    }

    /// Header, one line per report, then the summary; each newline-terminated.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for v in std::iter::once(self.header_json())
            .chain(self.reports.iter().map(VerificationReport::to_json))
            .chain(std::iter::once(self.summary_json()))
        {
            out.push_str(&v.to_string());
            out.push('\n');
        }
        out
    }

    pub fn to_text(&self) -> String {
        let c = &self.config;
        let mut out = format!("# {} max_n={} seed={}", self.claim, c.max_n, c.seed);
        if self.claim.samples() {
            out.push_str(&format!(" samples={} sample_n={}", c.samples, c.sample_n));
        }
        out.push('\n');
        for r in &self.reports {
            out.push_str(&r.to_text());
            out.push('\n');
        }
        let s = &self.summary;
        out.push_str(&format!(
            "# inputs={} holds={} fails={} outside-scope={} budget-exceeded={}\n",
            s.inputs, s.holds, s.fails, s.outside_scope, s.budget_exceeded
        ));
        out
    }

    /// One row per report; the seed goes in a leading `#` comment line.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(format!("# seed={}\n", self.config.seed).into_bytes());
        w.write_record(VerificationReport::CSV_HEADER)
            .expect("in-memory write");
        for r in &self.reports {
            w.write_record(r.csv_record()).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("UTF-8 fields")
    }
}

/// Runs `f` on a pool of `jobs` workers (0 = rayon default).
pub fn with_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Invalid(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

/// Checks every input of `claim`. Budget overruns become verdicts; any other
/// error aborts the run.
pub fn run(claim: Claim, config: &RunConfig) -> Result<Batch> {
    config.validate()?;
    let inputs = claims::inputs(claim, config);
    let checked: Vec<Result<VerificationReport>> = with_pool(config.jobs, || {
        inputs
            .par_iter()
            .map(|input| {
                let start = Instant::now();
                let mut report = claims::check(claim, input, config)?;
                if config.timing {
                    report.elapsed = Some(start.elapsed());
                }
                Ok(report)
            })
            .collect()
    })?;
    let reports = checked.into_iter().collect::<Result<Vec<_>>>()?;
    let mut summary = Summary::default();
    for r in &reports {
        summary.add(r.verdict);
    }
    Ok(Batch {
        claim,
        config: config.clone(),
        reports,
        summary,
    })
}
