//! `hhs model …`: export a model's window and run experiments on it.

use anyhow::{bail, Result};
use clap::{Args, Subcommand};

use hhs_core::model::experiments::{
    distance_formula_harness, lipschitz_check, passing_up, projection_consistency, realise, rho_consistency,
    sample_pairs, AxiomReport, ConsistentTuple,
};
use hhs_core::model::trace::{
    render_verdict, trace_producing_transverse, trace_subgroup_eyrie_search, verify_rho_distribution, ProofTrace,
    TraceConfig, TransverseMode, Verdict,
};
use hhs_core::model::{BigSetConfig, CPoint, Dom, Model, ModelError, Point};
use hhs_core::structure::Relation;

use crate::report::{Outcome, Report};
use crate::Cli;

#[derive(Subcommand, Debug)]
pub enum ModelCommand {
    /// Print a model's window as a structure file with its action.
    Export {
        /// `zn(N)`, `free(RANK,RADIUS)` or `product(SPEC,SPEC,…)`.
        spec: String,
    },
    /// Run an experiment on a model.
    #[command(subcommand)]
    Run(Experiment),
}

#[derive(Args, Debug)]
pub struct ModelArg {
    #[arg(long = "model")]
    spec: String,
}

#[derive(Subcommand, Debug)]
pub enum Experiment {
    /// Fit d(x, y) against the thresholded sum of projection distances.
    DistanceFormula {
        #[command(flatten)]
        m: ModelArg,
        /// Threshold s; defaults to 10 (1 for ℤⁿ).
        #[arg(long)]
        threshold: Option<f64>,
        #[arg(long, default_value_t = 500)]
        pairs: usize,
        /// Word length of sampled points.
        #[arg(long, default_value_t = 6)]
        radius: usize,
    },
    /// Realise the projection tuple of a point, optionally perturbed.
    Realisation {
        #[command(flatten)]
        m: ModelArg,
        #[arg(long)]
        point: String,
        /// Override one entry: `DOM=INT` on a line, `DOM=WORD` on a coned graph.
        #[arg(long = "set")]
        set: Vec<String>,
        /// Consistency constant; defaults to E.
        #[arg(long)]
        kappa: Option<f64>,
    },
    /// Find W ⊑ V with d_W(x, y) > C above a separating domain.
    PassingUp {
        #[command(flatten)]
        m: ModelArg,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        /// Defaults to the maximal domain.
        #[arg(long)]
        within: Option<String>,
        #[arg(long)]
        c: f64,
    },
    /// Check that ρ^U_W for separating U lie near a geodesic and are ordered.
    RhoDistribution {
        #[command(flatten)]
        m: ModelArg,
        #[arg(long)]
        w: Option<String>,
        #[arg(long)]
        y: String,
        #[arg(long)]
        z: String,
        #[arg(long)]
        d: f64,
        /// Domains to use; defaults to those nested in W separating y, z by more than 3E.
        #[arg(long = "u")]
        us: Vec<String>,
    },
    /// Trace the construction of an element moving ρ^V_W, or making W transverse.
    TraceTransverse {
        #[command(flatten)]
        m: ModelArg,
        #[arg(long)]
        v: String,
        #[arg(long)]
        w: String,
        #[arg(long, value_enum, default_value_t = Mode::Hhg)]
        mode: Mode,
        /// Subgroup generators for `condition-a`.
        #[arg(long = "gen")]
        gens: Vec<String>,
        /// Points of H for `condition-b`.
        #[arg(long = "point")]
        points: Vec<String>,
        #[arg(long, default_value_t = 41.0)]
        c_prime: f64,
    },
    /// Trace the search for an eyrie of a subgroup above U.
    TraceSubgroup {
        #[command(flatten)]
        m: ModelArg,
        #[arg(long = "gen", required = true)]
        gens: Vec<String>,
        #[arg(long)]
        u: String,
        /// A domain transverse to U; defaults to U's first transverse translate.
        #[arg(long)]
        v: Option<String>,
        #[arg(long, default_value_t = 4)]
        cap_outer: usize,
        #[arg(long, default_value_t = 4)]
        cap_inner: usize,
        #[arg(long, default_value_t = 400)]
        cap_n: usize,
    },
    /// Estimate the big-set of an element.
    BigSet {
        #[command(flatten)]
        m: ModelArg,
        #[arg(long)]
        element: String,
        #[arg(long, default_value_t = 64)]
        prefix_cap: usize,
        #[arg(long, default_value_t = 0.25)]
        slope: f64,
    },
    /// Spot-check projection consistency, ρ-consistency and Lipschitz bounds.
    Axioms {
        #[command(flatten)]
        m: ModelArg,
        #[arg(long, default_value_t = 200)]
        pairs: usize,
        #[arg(long, default_value_t = 5)]
        radius: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    Hhg,
    ConditionA,
    ConditionB,
}

pub fn run(cli: &Cli, cmd: &ModelCommand) -> Result<(Report, Outcome)> {
    match cmd {
        ModelCommand::Export { spec } => {
            let model = Model::parse(spec)?;
            let export = model.export()?;
            let mut r = Report::new("model export", "the model's window written as an index structure with its action");
            r.field("model", model.name());
            r.field("domains", export.doms.len());
            r.field("structure", export.render());
            r.line(export.render().trim_end().to_string()).raw();
            Ok((r, Outcome::Ok))
        }
        ModelCommand::Run(e) => experiment(cli, e),
    }
}

fn dom(model: &Model, id: &str) -> Result<Dom> {
    Ok(model.parse_dom(id)?)
}

fn point(model: &Model, s: &str) -> Result<Point> {
    Ok(model.parse_point(s)?)
}

/// Splits model errors into refusals, failed checks and plain input errors.
fn model_outcome(r: &mut Report, e: ModelError) -> Result<Outcome> {
    match e {
        ModelError::Precondition(msg) => {
            r.both("verdict", "verdict", "refused");
            r.both("reason", "reason", msg);
            Ok(Outcome::Refused)
        }
        ModelError::Assertion(msg) => {
            r.both("verdict", "verdict", "failed");
            r.both("reason", "reason", msg);
            Ok(Outcome::Negative)
        }
        other => Err(other.into()),
    }
}

fn experiment(cli: &Cli, e: &Experiment) -> Result<(Report, Outcome)> {
    match e {
        Experiment::DistanceFormula { m, threshold, pairs, radius } => {
            let model = Model::parse(&m.spec)?;
            let s = threshold.unwrap_or(if matches!(model, Model::Zn(_)) { 1.0 } else { 10.0 });
            let mut r = Report::new(
                "model run distance-formula",
                "d(x,y) is within A·Σ{{d_U(x,y)}}_s + B and Σ/A − B on sampled pairs, with the smallest A ≥ 1 and then B found",
            );
            r.field("model", model.name());
            r.both("threshold", "threshold s", s);
            r.both("pairs", "pairs", pairs);
            let sample = sample_pairs(&model, *pairs, *radius, cli.seed);
            match distance_formula_harness(&model, s, &sample) {
                Ok(fit) => {
                    let upper = fit.residuals.iter().map(|p| p.upper_slack).fold(f64::INFINITY, f64::min);
                    let lower = fit.residuals.iter().map(|p| p.lower_slack).fold(f64::INFINITY, f64::min);
                    r.both("a", "A", format!("{:.4}", fit.a));
                    r.both("b", "B", format!("{:.4}", fit.b));
                    r.both("min_upper_slack", "min upper slack", format!("{upper:.4}"));
                    r.both("min_lower_slack", "min lower slack", format!("{lower:.4}"));
                    let ok = fit.holds();
                    r.both("verdict", "verdict", if ok { "holds" } else { "fails" });
                    Ok((r, if ok { Outcome::Ok } else { Outcome::Negative }))
                }
                Err(err) => {
                    let o = model_outcome(&mut r, err)?;
                    Ok((r, o))
                }
            }
        }
        Experiment::Realisation { m, point: p, set, kappa } => {
            let model = Model::parse(&m.spec)?;
            let x = point(&model, p)?;
            let window = model.window();
            let mut tuple = ConsistentTuple::of_point(&model, &window, &x);
            for s in set {
                let Some((id, value)) = s.split_once('=') else { bail!("--set expects DOM=VALUE, got `{s}`") };
                let u = dom(&model, id.trim())?;
                let value = value.trim();
                let c = match value.parse::<i64>() {
                    Ok(i) => CPoint::Int(i),
                    Err(_) => match point(&model, value)? {
                        Point::Free(w) => CPoint::Vertex(w),
                        _ => bail!("`{value}` is not a point of 𝒞{id}"),
                    },
                };
                tuple.entries.insert(u, vec![c]);
            }
            let kappa = kappa.unwrap_or(model.e());
            let mut r = Report::new(
                "model run realisation",
                "a κ-consistent tuple is realised by a point whose projections lie within θ_e of every entry",
            );
            r.field("model", model.name());
            r.both("kappa", "κ", kappa);
            r.both("entries", "entries", tuple.entries.len());
            match realise(&model, &tuple, kappa) {
                Ok(real) => {
                    r.both("point", "realising point", model.render_point(&real.x));
                    r.both("theta_e", "θ_e", real.theta_e);
                    r.both("theta_u", "θ_u", real.theta_u);
                    r.both("candidates", "candidates checked", real.candidates_checked);
                    r.both("verdict", "verdict", "realised");
                    Ok((r, Outcome::Ok))
                }
                Err(err) => {
                    let o = model_outcome(&mut r, err)?;
                    Ok((r, o))
                }
            }
        }
        Experiment::PassingUp { m, x, y, within, c } => {
            let model = Model::parse(&m.spec)?;
            let (x, y) = (point(&model, x)?, point(&model, y)?);
            let v = match within {
                Some(id) => dom(&model, id)?,
                None => model.top(),
            };
            let mut r = Report::new(
                "model run passing-up",
                "enough domains in V separating x from y force some W ⊑ V above one of them with d_W(x,y) > C",
            );
            r.field("model", model.name());
            r.both("within", "V", model.dom_id(&v));
            r.both("c", "C", c);
            match passing_up(&model, &x, &y, &v, *c) {
                Ok(p) => {
                    r.both("separating", "separating domains", p.separating_count);
                    r.both("required", "required", p.required);
                    r.both("w", "W", model.dom_id(&p.w));
                    r.both("d_w", "d_W(x,y)", p.d_w);
                    r.both("below", "separating domain below W", model.dom_id(&p.below));
                    r.both("verdict", "verdict", "found");
                    Ok((r, Outcome::Ok))
                }
                Err(err) => {
                    let o = model_outcome(&mut r, err)?;
                    Ok((r, o))
                }
            }
        }
        Experiment::RhoDistribution { m, w, y, z, d, us } => {
            let model = Model::parse(&m.spec)?;
            let w = match w {
                Some(id) => dom(&model, id)?,
                None => model.top(),
            };
            let (y, z) = (point(&model, y)?, point(&model, z)?);
            let us: Vec<Dom> = if us.is_empty() {
                model
                    .separating_above(&y, &z, 3.0 * model.e())
                    .into_iter()
                    .map(|(u, _)| u)
                    .filter(|u| model.relation(u, &w) == Relation::NestedIn)
                    .collect()
            } else {
                us.iter().map(|id| dom(&model, id)).collect::<Result<_>>()?
            };
            let t = verify_rho_distribution(&model, &w, &y, &z, &us, *d);
            Ok(trace_report(&model, "model run rho-distribution", &t))
        }
        Experiment::TraceTransverse { m, v, w, mode, gens, points, c_prime } => {
            let model = Model::parse(&m.spec)?;
            let (v, w) = (dom(&model, v)?, dom(&model, w)?);
            let mode = match mode {
                Mode::Hhg => TransverseMode::Hhg,
                Mode::ConditionA => TransverseMode::ConditionA {
                    subgroup: gens.iter().map(|g| point(&model, g)).collect::<Result<_>>()?,
                },
                Mode::ConditionB => TransverseMode::ConditionB {
                    points: points.iter().map(|p| point(&model, p)).collect::<Result<_>>()?,
                    c_prime: *c_prime,
                },
            };
            let cfg = TraceConfig { proof_scale: cli.proof_scale, search_len: cli.cap_word, ..TraceConfig::default() };
            let t = trace_producing_transverse(&model, &v, &w, &mode, &cfg);
            Ok(trace_report(&model, "model run trace-transverse", &t))
        }
        Experiment::TraceSubgroup { m, gens, u, v, cap_outer, cap_inner, cap_n } => {
            let model = Model::parse(&m.spec)?;
            let gens: Vec<Point> = gens.iter().map(|g| point(&model, g)).collect::<Result<_>>()?;
            let u = dom(&model, u)?;
            let v = match v {
                Some(id) => dom(&model, id)?,
                None => first_transverse_translate(&model, &gens, &u)?,
            };
            let cfg = TraceConfig {
                proof_scale: cli.proof_scale,
                search_len: cli.cap_word,
                outer_cap: *cap_outer,
                inner_cap: *cap_inner,
                n_cap: *cap_n,
                ..TraceConfig::default()
            };
            let t = trace_subgroup_eyrie_search(&model, &gens, &u, &v, &cfg);
            Ok(trace_report(&model, "model run trace-subgroup", &t))
        }
        Experiment::BigSet { m, element, prefix_cap, slope } => {
            let model = Model::parse(&m.spec)?;
            if *prefix_cap < 8 {
                bail!("--prefix-cap must be at least 8");
            }
            let g = point(&model, element)?;
            let big = model.big_set_of(&g, BigSetConfig { prefix_cap: *prefix_cap, slope: *slope });
            let mut r = Report::new(
                "model run big-set",
                "the domains on which powers of h have unbounded orbit, estimated by linear growth of d_U(1, hⁿ)",
            );
            r.field("model", model.name());
            r.both("element", "h", model.render_point(&g));
            let ids: Vec<String> = big.iter().map(|u| model.dom_id(u)).collect();
            r.both("big_set", "big-set", format!("{{{}}}", ids.join(", ")));
            r.field("size", big.len());
            let orthogonal =
                big.iter().enumerate().all(|(i, a)| big[i + 1..].iter().all(|b| model.relation(a, b) == Relation::Orthogonal));
            r.both("pairwise_orthogonal", "pairwise orthogonal", orthogonal);
            Ok((r, if orthogonal { Outcome::Ok } else { Outcome::Negative }))
        }
        Experiment::Axioms { m, pairs, radius } => {
            let model = Model::parse(&m.spec)?;
            let window = model.window();
            let sample = sample_pairs(&model, *pairs, *radius, cli.seed);
            let points: Vec<Point> = sample.iter().flat_map(|(x, y)| [x.clone(), y.clone()]).collect();
            let mut r = Report::new(
                "model run axioms",
                "projection consistency, ρ-consistency within 2E, and the E-Lipschitz bound on sampled points of the window",
            );
            r.field("model", model.name());
            r.both("e", "E", model.e());
            let mut ok = true;
            for (key, rep) in [
                ("projection", projection_consistency(&model, &window, &points)),
                ("rho", rho_consistency(&model, &window)),
                ("lipschitz", lipschitz_check(&model, &sample)),
            ] {
                ok &= axiom_lines(&mut r, key, &rep);
            }
            r.both("verdict", "verdict", if ok { "holds" } else { "fails" });
            Ok((r, if ok { Outcome::Ok } else { Outcome::Negative }))
        }
    }
}

fn axiom_lines(r: &mut Report, key: &str, rep: &AxiomReport) -> bool {
    r.both(&format!("{key}.checks"), &format!("{key} checks"), rep.checks);
    r.both(&format!("{key}.worst"), &format!("{key} worst"), format!("{:.4}", rep.worst));
    r.both(&format!("{key}.violations"), &format!("{key} violations"), rep.violations.len());
    for v in rep.violations.iter().take(5) {
        r.line(format!("  {v}"));
    }
    rep.violations.is_empty()
}

/// `gU` for the first generator `g` (or its inverse) making `gU ⋔ U`.
fn first_transverse_translate(model: &Model, gens: &[Point], u: &Dom) -> Result<Dom> {
    for g in gens {
        for h in [g.clone(), model.inv(g)] {
            let gu = model.act_dom(&h, u);
            if model.relation(&gu, u) == Relation::Transverse {
                return Ok(gu);
            }
        }
    }
    bail!("no generator moves {} to a transverse domain; pass --v", model.dom_id(u))
}

fn trace_report(model: &Model, command: &str, t: &ProofTrace) -> (Report, Outcome) {
    let mut r = Report::new(command, &t.title);
    r.field("model", model.name());
    for l in t.render(model).lines() {
        r.line(l.to_string());
    }
    r.field("entries", t.entries.len());
    r.both("inequalities", "inequalities", t.inequality_count());
    if let Some(m) = t.min_margin() {
        r.both("min_margin", "min margin", format!("{m:.4}"));
    }
    if let Some(m) = t.final_margin() {
        r.both("final_margin", "final margin", format!("{m:.4}"));
    }
    r.both("scaled", "scaled constants", t.scaled);
    if let Some(h) = &t.h {
        r.field("h", model.render_point(h));
    }
    if let Some(f) = &t.found {
        r.both("found", "found", model.dom_id(f));
    }
    let replay_ok = match t.replay(model) {
        Ok(n) => {
            r.both("replayed", "replayed", n);
            true
        }
        Err(e) => {
            r.both("replay_error", "replay error", &e);
            false
        }
    };
    let (word, outcome) = match &t.verdict {
        Verdict::Completed if replay_ok => ("completed", Outcome::Ok),
        Verdict::Completed => ("replay-failed", Outcome::Negative),
        Verdict::CapReached(_) => ("inconclusive", Outcome::Ok),
        Verdict::AssertionFailed { .. } => ("assertion-failed", Outcome::Negative),
        Verdict::Refused(_) => ("refused", Outcome::Refused),
    };
    r.both("verdict", "verdict", word);
    r.both("detail", "detail", render_verdict(&t.verdict));
    (r, outcome)
}
