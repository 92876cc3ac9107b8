use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use meaningfock::analysis::{compare_pipeline, Comparison};
use meaningfock::classicality::{classify, ExemplarType};
use meaningfock::dataset::{
    parse_corpus, parse_membership_csv, parse_pairs_csv, parse_similarity_csv, write_membership,
    write_similarities, TokenizerOptions,
};
use meaningfock::fock_model::{audit_donkey_example, fit, FitStrategy};
use meaningfock::lsa::{LsaConfig, QueryOptions, SemanticSpace, SvdMethod, SvdOptions};
use meaningfock::report::{self, ReportConfig};
use meaningfock::state_reconstruction::parse_request;
use meaningfock::threshold_model::{self, ThresholdParams};
use serde::Serialize;

use crate::args::{
    Cli, Command, Format, LsaBuildArgs, LsaCommand, Preset, Strategy, SvdChoice, ThresholdArgs,
};
use crate::output::{read_input, write_atomic, write_output};

/// Inconsistent flags; reported like a command-line parse error.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

macro_rules! usage {
    ($($arg:tt)*) => {
        return Err(UsageError(format!($($arg)*)).into())
    };
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Classify { input, out, tol } => classify_cmd(&input, out.as_deref(), tol),
        Command::Fit {
            input,
            out,
            strategy,
            theta,
            m2,
        } => {
            let strategy = fit_strategy(strategy, theta, m2)?;
            fit_cmd(&input, out.as_deref(), strategy)
        }
        Command::Reconstruct { input, out } => {
            let req = parse_request(&read_input(&input)?)?;
            let report = req.solve()?;
            let mut json = serde_json::to_vec_pretty(&report)?;
            json.push(b'\n');
            write_output(out.as_deref(), &json)
        }
        Command::Lsa(LsaCommand::Build { corpus, out, lsa }) => {
            let space = build_space(&corpus, &lsa)?;
            write_atomic(&out, &space.to_bytes())?;
            log::info!(
                "{} terms, {} documents, rank {}",
                space.vocabulary().len(),
                space.n_docs(),
                space.rank()
            );
            Ok(())
        }
        Command::Lsa(LsaCommand::Sim {
            space,
            a,
            b,
            pairs,
            data,
            out,
            clip,
            keep_stop_words,
        }) => {
            let space = load_space(&space)?;
            let query = query_options(keep_stop_words);
            match (a, b, pairs, data) {
                (Some(a), Some(b), None, None) => {
                    let s = space.similarity_with(&a, &b, &query, clip)?;
                    write_output(out.as_deref(), format!("{s}\n").as_bytes())
                }
                (None, None, Some(pairs), Some(data)) => {
                    let pairs = parse_pairs_csv(&pairs)?;
                    let data = parse_membership_csv(&data)?;
                    let (mut sims, _) = report::similarity_table(&space, &pairs, &data, &query)?;
                    if clip {
                        for s in &mut sims {
                            s.s_a = s.s_a.max(0.0);
                            s.s_b = s.s_b.max(0.0);
                            s.s_or = s.s_or.max(0.0);
                        }
                    }
                    let mut buf = Vec::new();
                    write_similarities(&mut buf, &sims)?;
                    write_output(out.as_deref(), &buf)
                }
                _ => usage!("give either --a and --b, or --pairs and --data"),
            }
        }
        Command::Threshold { input, out, params } => {
            let params = threshold_params(&params)?;
            let sims = parse_similarity_csv(&input)?;
            let rows = threshold_model::apply(&sims, &params);
            let mut buf = Vec::new();
            write_membership(&mut buf, &rows)?;
            write_output(out.as_deref(), &buf)
        }
        Command::Compare {
            reference,
            model,
            out,
            format,
            tol,
        } => {
            let reference = parse_membership_csv(&reference)?;
            let model = parse_membership_csv(&model)?;
            let cmp = compare_pipeline(&reference, &model, tol)?;
            let bytes = match format {
                Format::Csv => cmp.correlations.to_csv().into_bytes(),
                Format::Json => json_bytes(&cmp)?,
                Format::Dot => cmp.graph.to_dot("transitions").into_bytes(),
            };
            write_output(out.as_deref(), &bytes)
        }
        Command::Report {
            space,
            corpus,
            lsa,
            pairs,
            data,
            out_dir,
            tol,
            keep_stop_words,
        } => {
            let space = match (space, corpus) {
                (Some(path), _) => load_space(&path)?,
                (None, Some(corpus)) => build_space(&corpus, &lsa)?,
                (None, None) => usage!("one of --space or --corpus is required"),
            };
            report_cmd(&space, &pairs, &data, &out_dir, tol, keep_stop_words)
        }
        Command::VerifyExample { out } => {
            let a = audit_donkey_example();
            let mut s = String::new();
            writeln!(s, "mu_a = {}, mu_b = {}, m2 = {}, theta = {} deg", a.mu_a, a.mu_b, a.m2, a.theta_deg)?;
            writeln!(s, "computed mu_or = {:.12}", a.computed_mu_or)?;
            writeln!(s, "claimed  mu_or = {}", a.claimed_mu_or)?;
            writeln!(s, "abs discrepancy = {:.12}", a.abs_discrepancy)?;
            match a.matching_theta_deg {
                Some(t) => writeln!(s, "theta reproducing the claimed value at m2 = {}: {:.6} deg", a.m2, t)?,
                None => writeln!(s, "no angle reproduces the claimed value at m2 = {}", a.m2)?,
            }
            write_output(out.as_deref(), s.as_bytes())
        }
    }
}

fn fit_strategy(s: Strategy, theta: Option<f64>, m2: Option<f64>) -> Result<FitStrategy> {
    match (s, theta, m2) {
        (Strategy::MinSector2, None, None) => Ok(FitStrategy::MinSector2),
        (Strategy::FixedTheta, Some(deg), None) => Ok(FitStrategy::FixedTheta(deg.to_radians())),
        (Strategy::FixedM2, None, Some(m2)) => Ok(FitStrategy::FixedM2(m2)),
        (Strategy::FixedTheta, None, _) => usage!("--strategy fixed-theta needs --theta"),
        (Strategy::FixedM2, _, None) => usage!("--strategy fixed-m2 needs --m2"),
        _ => usage!("--theta and --m2 only apply to fixed-theta and fixed-m2 respectively"),
    }
}

fn threshold_params(args: &ThresholdArgs) -> Result<ThresholdParams> {
    match (args.s_l, args.s_t, args.s_h) {
        (Some(l), Some(t), Some(h)) => {
            ThresholdParams::new(l, t, h).map_err(|e| UsageError(e.to_string()).into())
        }
        _ => Ok(match args.preset {
            Preset::Wide => ThresholdParams::WIDE,
            Preset::Narrow => ThresholdParams::NARROW,
        }),
    }
}

fn query_options(keep_stop_words: bool) -> QueryOptions {
    if keep_stop_words {
        QueryOptions::without_stop_words()
    } else {
        QueryOptions::default()
    }
}

fn build_space(corpus: &Path, args: &LsaBuildArgs) -> Result<SemanticSpace> {
    let corpus = parse_corpus(corpus, TokenizerOptions { stem: args.stem })?;
    let method = match args.svd {
        SvdChoice::Auto => SvdMethod::Auto,
        SvdChoice::Dense => SvdMethod::Dense,
        SvdChoice::Randomized => SvdMethod::DEFAULT_RANDOMIZED,
    };
    let config = LsaConfig {
        rank: args.k,
        weighting: args.weighting,
        min_term_count: args.min_term_count,
        svd: SvdOptions {
            method,
            seed: args.seed,
        },
        stemmed: args.stem,
    };
    Ok(SemanticSpace::build(&corpus, &config)?)
}

fn load_space(path: &Path) -> Result<SemanticSpace> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    SemanticSpace::from_bytes(&bytes).with_context(|| format!("loading space {}", path.display()))
}

fn json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut v = serde_json::to_vec_pretty(value)?;
    v.push(b'\n');
    Ok(v)
}

#[derive(Serialize)]
struct ClassifiedRow<'a> {
    pair_id: &'a str,
    exemplar: &'a str,
    mu_a: f64,
    mu_b: f64,
    mu_or: f64,
    delta_d: f64,
    k_d: f64,
    #[serde(rename = "type")]
    kind: ExemplarType,
}

fn classify_cmd(input: &Path, out: Option<&Path>, tol: f64) -> Result<()> {
    let rows = parse_membership_csv(input)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    for t in &rows {
        let r = classify(t, tol);
        w.serialize(ClassifiedRow {
            pair_id: &t.pair_id,
            exemplar: &t.exemplar,
            mu_a: t.mu_a,
            mu_b: t.mu_b,
            mu_or: t.mu_or,
            delta_d: r.delta_d,
            k_d: r.k_d,
            kind: r.kind,
        })?;
    }
    write_output(out, &w.into_inner()?)
}

#[derive(Serialize)]
struct FitRow<'a> {
    pair_id: &'a str,
    exemplar: &'a str,
    mu_a: f64,
    mu_b: f64,
    mu_or: f64,
    m2: Option<f64>,
    n2: Option<f64>,
    theta_deg: Option<f64>,
    residual: Option<f64>,
    representable: bool,
}

fn fit_cmd(input: &Path, out: Option<&Path>, strategy: FitStrategy) -> Result<()> {
    let rows = parse_membership_csv(input)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    for t in &rows {
        let fitted = fit(t, strategy);
        if let Err(e) = &fitted {
            log::warn!("`{}` in `{}`: {e}", t.exemplar, t.pair_id);
        }
        let f = fitted.as_ref().ok();
        w.serialize(FitRow {
            pair_id: &t.pair_id,
            exemplar: &t.exemplar,
            mu_a: t.mu_a,
            mu_b: t.mu_b,
            mu_or: t.mu_or,
            m2: f.map(|f| f.m2),
            n2: f.map(|f| f.n2),
            theta_deg: f.map(|f| f.theta_degrees()),
            residual: f.map(|f| f.residual),
            representable: f.is_some(),
        })?;
    }
    write_output(out, &w.into_inner()?)
}

fn report_cmd(
    space: &SemanticSpace,
    pairs: &Path,
    data: &Path,
    out_dir: &Path,
    tol: f64,
    keep_stop_words: bool,
) -> Result<()> {
    let pairs = parse_pairs_csv(pairs)?;
    let data = parse_membership_csv(data)?;
    let config = ReportConfig {
        tol,
        query: query_options(keep_stop_words),
        ..ReportConfig::default()
    };
    let rep = report::run(space, &pairs, &data, &config)?;
    fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;

    let mut buf = Vec::new();
    write_similarities(&mut buf, &rep.similarities)?;
    write_atomic(&out_dir.join("similarities.csv"), &buf)?;
    write_atomic(&out_dir.join("report.json"), &json_bytes(&rep)?)?;

    let sims = &rep.similarities;
    for m in &rep.models {
        let memberships = match m.model.as_str() {
            report::MODEL_LSA => report::clipped_memberships(sims),
            report::MODEL_WIDE => threshold_model::apply(sims, &config.wide),
            _ => threshold_model::apply(sims, &config.narrow),
        };
        let mut buf = Vec::new();
        write_membership(&mut buf, &memberships)?;
        write_atomic(&out_dir.join(format!("memberships_{}.csv", m.model)), &buf)?;
        write_atomic(
            &out_dir.join(format!("correlations_{}.csv", m.model)),
            m.comparison.correlations.to_csv().as_bytes(),
        )?;
        write_atomic(
            &out_dir.join(format!("transitions_{}.dot", m.model)),
            m.comparison.graph.to_dot(&m.model).as_bytes(),
        )?;
    }

    let summary = summary_text(&rep);
    write_atomic(&out_dir.join("summary.txt"), summary.as_bytes())?;
    print!("{summary}");
    Ok(())
}

fn summary_text(rep: &report::Report) -> String {
    let mut s = String::new();
    let c = &rep.clipping;
    writeln!(s, "exemplars compared: {}", c.exemplars_total).unwrap();
    writeln!(s, "exemplars skipped (no known terms): {}", rep.skipped.len()).unwrap();
    writeln!(
        s,
        "negative similarities clipped: {} of {} values, {} of {} exemplars",
        c.values_clipped, c.values_total, c.exemplars_clipped, c.exemplars_total
    )
    .unwrap();
    if let Some(m) = c.most_negative {
        writeln!(s, "most negative similarity: {m}").unwrap();
    }
    if let Some(first) = rep.models.first() {
        write_types(&mut s, "data", &first.comparison, true);
    }
    for m in &rep.models {
        writeln!(s).unwrap();
        writeln!(s, "[{}]", m.model).unwrap();
        write_types(&mut s, "model", &m.comparison, false);
        let edges: Vec<String> = m
            .comparison
            .graph
            .edges()
            .map(|(f, t, n)| format!("{f}->{t}:{n}"))
            .collect();
        writeln!(s, "transitions: {}", edges.join(" ")).unwrap();
        for p in &m.comparison.correlations.pairs {
            writeln!(s, "r[{}] a={} b={} or={}", p.pair_id, p.r_a, p.r_b, p.r_or).unwrap();
        }
    }
    s
}

fn write_types(s: &mut String, label: &str, cmp: &Comparison, reference: bool) {
    let t = if reference {
        &cmp.reference_types
    } else {
        &cmp.model_types
    };
    writeln!(s, "{label} types: C={} D={} K={}", t.classical, t.delta, t.k).unwrap();
}
