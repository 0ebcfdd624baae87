use std::collections::BTreeMap;
use std::fmt::Write as _;

use clap::ValueEnum;
use nclcs_core::chars::{
    fit_coinduced, fit_coinduced_characters, quotient_character, quotient_row, CharacterFit, CoinducedFit,
    SchurExpansion,
};
use nclcs_core::forms::checks::{
    lambda2_quotient_dim, lemma_2_2_1_random, star_property_suite, theorem_2_2_check, verify_eta_relation,
    verify_strange3, IdentityReport,
};
use nclcs_core::lcs::{
    hilbert_table, hilbert_table_upto, necklace_count, witt_dim, BigradedTable, LcsConfig, LcsEngine,
};
use nclcs_core::report::{CheckRecord, Report, REPORT_SCHEMA_VERSION};
use nclcs_core::scalar::{random_prime_pair, with_field, FieldTask, DEFAULT_PRIME};
use nclcs_core::{Error, Field, FieldKind, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::{FieldMode, Format};

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    #[value(name = "theorem-1-3")]
    Theorem13,
    #[value(name = "theorem-1-4")]
    Theorem14,
    #[value(name = "theorem-2-2")]
    Theorem22,
    Identities,
    StarAssoc,
    Lambda2,
    Oracles,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Theorem13 => "theorem-1-3",
            Suite::Theorem14 => "theorem-1-4",
            Suite::Theorem22 => "theorem-2-2",
            Suite::Identities => "identities",
            Suite::StarAssoc => "star-assoc",
            Suite::Lambda2 => "lambda2",
            Suite::Oracles => "oracles",
        }
    }

    fn default_n(self) -> usize {
        match self {
            Suite::Theorem13 | Suite::Oracles => 2,
            Suite::Theorem14 | Suite::Lambda2 => 3,
            Suite::Theorem22 | Suite::Identities | Suite::StarAssoc => 4,
        }
    }

    fn default_max_len(self) -> usize {
        match self {
            Suite::Theorem13 => 12,
            Suite::Theorem14 | Suite::Oracles => 8,
            Suite::Theorem22 | Suite::StarAssoc => 5,
            Suite::Lambda2 => 6,
            Suite::Identities => 3,
        }
    }
}

pub struct Outcome {
    pub output: String,
    pub passed: bool,
}

pub struct Runner {
    pub mode: FieldMode,
    pub prime: Option<u32>,
    pub seed: u64,
    pub format: Format,
    pub config: LcsConfig,
}

fn engine<F: Field>(n: usize, config: &LcsConfig) -> Result<LcsEngine<F>> {
    LcsEngine::new(n, config.clone())
}

#[derive(Clone)]
struct HilbertTask {
    n: usize,
    max_len: usize,
    k_max: Option<usize>,
    config: LcsConfig,
}

impl FieldTask for HilbertTask {
    type Output = Result<BigradedTable>;
    fn run<F: Field>(self) -> Result<BigradedTable> {
        let e = engine::<F>(self.n, &self.config)?;
        match self.k_max {
            Some(k) => hilbert_table_upto(&e, self.max_len, k),
            None => hilbert_table(&e, self.max_len),
        }
    }
}

#[derive(Clone)]
struct VerifyTask {
    suite: Suite,
    n: usize,
    max_len: usize,
    cases: usize,
    seed: u64,
    config: LcsConfig,
}

fn identity_record(r: IdentityReport, params: Value) -> CheckRecord {
    CheckRecord::compare(r.identity, params, Vec::<String>::new(), r.violations)
}

impl FieldTask for VerifyTask {
    type Output = Result<Vec<CheckRecord>>;
    fn run<F: Field>(self) -> Result<Vec<CheckRecord>> {
        let VerifyTask { suite, n, max_len, cases, seed, config } = self;
        let mut out = Vec::new();
        match suite {
            Suite::Theorem13 | Suite::Theorem14 => {
                let e = engine::<F>(n, &config)?;
                for len in 2..=max_len {
                    let expected = match suite {
                        Suite::Theorem13 => len - 1,
                        _ => len * len - 1,
                    };
                    let got = e.quotient_dim(2, len)?;
                    out.push(CheckRecord::compare("quotient-dim", json!({"n": n, "k": 2, "len": len}), expected, got));
                }
            }
            Suite::Theorem22 => {
                let e = engine::<F>(n, &config)?;
                for len in 2..=max_len {
                    let r = theorem_2_2_check(&e, len)?;
                    let params = json!({
                        "n": n,
                        "len": len,
                        "lcs_dim": r.lcs_dim,
                        "closed_by_degree": r.closed_by_degree,
                    });
                    let expected = json!({
                        "closed_sum": r.lcs_dim,
                        "phi_rank": r.lcs_dim,
                        "phi_full_rank": r.even_dim,
                        "images_closed": true,
                        "images_positive_degree": true,
                    });
                    let got = json!({
                        "closed_sum": r.closed_sum,
                        "phi_rank": r.phi_rank,
                        "phi_full_rank": r.phi_full_rank,
                        "images_closed": r.images_closed,
                        "images_positive_degree": r.images_positive_degree,
                    });
                    out.push(CheckRecord::compare("theorem-2-2", params, expected, got));
                    if n == 4 && len == 4 {
                        let top = r.closed_by_degree.iter().find(|(j, _)| *j == 4).map(|(_, d)| *d);
                        out.push(CheckRecord::compare("top-form", json!({"n": n, "len": len}), Some(1), top));
                    }
                }
            }
            Suite::Identities => {
                out.push(identity_record(verify_eta_relation::<F>(n)?, json!({"n": n})));
                out.push(identity_record(verify_strange3::<F>(n)?, json!({"n": n})));
                let r = lemma_2_2_1_random::<F>(n, cases, max_len, seed)?;
                out.push(identity_record(r, json!({"n": n, "cases": cases, "max_word_len": max_len, "seed": seed})));
            }
            Suite::StarAssoc => {
                let params = json!({"n_max": n, "max_weight": max_len, "cases": cases, "seed": seed});
                for r in star_property_suite::<F>(n, max_len, cases, seed)? {
                    out.push(identity_record(r, params.clone()));
                }
            }
            Suite::Lambda2 => {
                let e = engine::<F>(n, &config)?;
                for len in 1..=max_len {
                    let expected = e.quotient_dim(2, len)?;
                    let got = lambda2_quotient_dim::<F>(n, len, config.budget)?;
                    out.push(CheckRecord::compare("lambda2", json!({"n": n, "len": len}), expected, got));
                }
            }
            Suite::Oracles => {
                let e = engine::<F>(n, &config)?;
                let table = hilbert_table(&e, max_len)?;
                for len in 1..=max_len {
                    let params = json!({"n": n, "len": len});
                    let (nn, ll) = (n as u64, len as u64);
                    out.push(CheckRecord::compare(
                        "necklace",
                        params.clone(),
                        necklace_count(nn, ll) as u64,
                        table.entry(1, len),
                    ));
                    out.push(CheckRecord::compare(
                        "witt",
                        params.clone(),
                        witt_dim(nn, ll) as u64,
                        table.entry(len, len),
                    ));
                    let power = (n as u64).checked_pow(len as u32);
                    out.push(CheckRecord::compare("column-sum", params, power, Some(table.column_sum(len))));
                }
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
struct LevelCharacter {
    len: usize,
    dim: u64,
    decomposition: SchurExpansion,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
struct CharsReport {
    version: u32,
    n: usize,
    k: usize,
    max_len: usize,
    fields: Vec<FieldKind>,
    levels: Vec<LevelCharacter>,
    dimension_fit: CoinducedFit,
    character_fit: CharacterFit,
}

#[derive(Clone)]
struct CharsTask {
    n: usize,
    k: usize,
    max_len: usize,
    config: LcsConfig,
}

impl FieldTask for CharsTask {
    type Output = Result<CharsReport>;
    fn run<F: Field>(self) -> Result<CharsReport> {
        let e = engine::<F>(self.n, &self.config)?;
        let levels: Vec<usize> = (self.k..=self.max_len).collect();
        let mut chars = BTreeMap::new();
        let mut out = Vec::new();
        for &len in &levels {
            let decomposition = quotient_character(&e, self.k, len)?;
            out.push(LevelCharacter { len, dim: decomposition.dim(), decomposition: decomposition.clone() });
            chars.insert(len, decomposition);
        }
        let row = quotient_row(&e, self.k, levels)?;
        Ok(CharsReport {
            version: REPORT_SCHEMA_VERSION,
            n: self.n,
            k: self.k,
            max_len: self.max_len,
            fields: vec![F::kind()],
            levels: out,
            dimension_fit: fit_coinduced(&row, self.n)?,
            character_fit: fit_coinduced_characters(&chars, self.n)?,
        })
    }
}

fn field_list(fields: &[FieldKind]) -> String {
    fields.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

impl Runner {
    fn fields(&self) -> Result<Vec<FieldKind>> {
        match self.mode {
            FieldMode::Prime => Ok(vec![FieldKind::Prime { p: self.prime.unwrap_or(DEFAULT_PRIME) }]),
            FieldMode::TwoPrime | FieldMode::Rational if self.prime.is_some() => {
                Err(Error::InvalidArgument("--prime only applies to --field prime".into()))
            }
            FieldMode::TwoPrime => {
                let (p, q) = random_prime_pair(&mut ChaCha8Rng::seed_from_u64(self.seed));
                Ok(vec![FieldKind::Prime { p }, FieldKind::Prime { p: q }])
            }
            FieldMode::Rational => Ok(vec![FieldKind::Rational]),
        }
    }

    fn run_fields<T, R>(&self, task: T) -> Result<Vec<(FieldKind, R)>>
    where
        T: FieldTask<Output = Result<R>> + Clone,
    {
        self.fields()?.into_iter().map(|kind| Ok((kind, with_field(kind, task.clone())??))).collect()
    }

    pub fn hilbert(&self, n: usize, max_len: usize, k_max: Option<usize>) -> Result<Outcome> {
        if n == 0 || max_len == 0 {
            return Err(Error::InvalidArgument("--n and --max-len must be at least 1".into()));
        }
        let task = HilbertTask { n, max_len, k_max, config: self.config.clone() };
        let mut results = self.run_fields(task)?.into_iter().map(|(_, t)| t);
        let first = results.next().expect("at least one field");
        let table = results.try_fold(first, |acc, t| acc.merge_agreeing(&t))?;
        let output = match self.format {
            Format::Text => table.to_text(),
            Format::Json => serde_json::to_string_pretty(&table)? + "\n",
            Format::Csv => table.to_csv(),
        };
        Ok(Outcome { output, passed: true })
    }

    pub fn verify(
        &self,
        suite: Suite,
        n: Option<usize>,
        max_len: Option<usize>,
        cases: Option<usize>,
    ) -> Result<Outcome> {
        if self.format == Format::Csv {
            return Err(Error::InvalidArgument("csv output is only available for hilbert".into()));
        }
        let fixed = matches!(suite, Suite::Theorem13 | Suite::Theorem14);
        if fixed && n.is_some_and(|n| n != suite.default_n()) {
            return Err(Error::InvalidArgument(format!("{} is stated for n = {}", suite.name(), suite.default_n())));
        }
        let n = n.unwrap_or(suite.default_n());
        let max_len = max_len.unwrap_or(suite.default_max_len());
        let cases = cases.unwrap_or(match suite {
            Suite::StarAssoc => 128,
            _ => 100,
        });
        if n == 0 {
            return Err(Error::InvalidArgument("--n must be at least 1".into()));
        }
        let task = VerifyTask { suite, n, max_len, cases, seed: self.seed, config: self.config.clone() };
        let results = self.run_fields(task)?;
        let fields: Vec<FieldKind> = results.iter().map(|(k, _)| *k).collect();
        let mut results = results.into_iter().map(|(_, r)| r);
        let first = results.next().expect("at least one field");
        for other in results {
            if let Some((a, b)) = first.iter().zip(&other).find(|(a, b)| a != b) {
                return Err(Error::FieldDisagreement {
                    cell: format!("{} {}", a.check, a.params),
                    left: a.got.to_string(),
                    right: b.got.to_string(),
                });
            }
        }
        let mut report = Report::new(suite.name(), json!({"n": n, "max_len": max_len, "fields": fields}));
        report.extend(first);
        let output = match self.format {
            Format::Json => report.to_json(),
            _ => render_report(&report, &fields),
        };
        Ok(Outcome { passed: report.passed, output })
    }

    pub fn chars(&self, n: usize, k: usize, max_len: usize) -> Result<Outcome> {
        if n == 0 || k < 2 {
            return Err(Error::InvalidArgument("chars needs --n >= 1 and --k >= 2".into()));
        }
        if self.format == Format::Csv {
            return Err(Error::InvalidArgument("csv output is only available for hilbert".into()));
        }
        let task = CharsTask { n, k, max_len, config: self.config.clone() };
        let mut results = self.run_fields(task)?.into_iter().map(|(_, r)| r);
        let mut report = results.next().expect("at least one field");
        for other in results {
            let mut normalized = other.clone();
            normalized.fields = report.fields.clone();
            if normalized != report {
                return Err(Error::FieldDisagreement {
                    cell: format!("characters of A_{{{n},{k}}}"),
                    left: serde_json::to_string(&report.levels)?,
                    right: serde_json::to_string(&other.levels)?,
                });
            }
            report.fields.extend(other.fields);
        }
        let output = match self.format {
            Format::Json => serde_json::to_string_pretty(&report)? + "\n",
            _ => render_chars(&report),
        };
        Ok(Outcome { output, passed: true })
    }
}

fn render_report(report: &Report, fields: &[FieldKind]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "suite {} over {}", report.suite, field_list(fields));
    for c in &report.checks {
        let verdict = if c.pass { "PASS" } else { "FAIL" };
        let _ = writeln!(s, "{verdict} {} {} expected={} got={}", c.check, c.params, c.expected, c.got);
    }
    let passed = report.checks.iter().filter(|c| c.pass).count();
    let _ = writeln!(s, "{passed}/{} checks passed", report.checks.len());
    s
}

fn render_chars(r: &CharsReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "A_{{{},{}}} as gl_{} modules over {}", r.n, r.k, r.n, field_list(&r.fields));
    for l in &r.levels {
        let _ = writeln!(s, "  len {}: dim {} = {}", l.len, l.dim, l.decomposition);
    }
    let layers: Vec<String> = r.dimension_fit.layers.iter().map(|l| format!("({},{})", l.dim, l.level)).collect();
    let _ = writeln!(
        s,
        "dimension layers (dim, level): {}",
        if layers.is_empty() { "none".to_string() } else { layers.join(" ") }
    );
    match r.dimension_fit.failure {
        Some(f) => {
            let _ = writeln!(s, "dimension fit fails at len {} with residual {}", f.level, f.residual);
        }
        None => {
            let _ = writeln!(s, "dimension fit residual: 0");
        }
    }
    for l in &r.character_fit.layers {
        let _ = writeln!(s, "character layer at len {}: {}", l.level, l.expansion);
    }
    if let Some(f) = &r.character_fit.failure {
        let _ =
            writeln!(s, "character fit fails at len {}: s{} has multiplicity {}", f.level, f.partition, f.multiplicity);
    }
    s
}
