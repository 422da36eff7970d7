//! `hhs`: validate index structures, compute eyries, decide crystallographic
//! groups and run experiments on concrete models.
//!
//! Exit codes: 0 success, 2 a negative mathematical verdict, 1 bad input or
//! usage.

mod model_cmd;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use hhs_core::action::{verify_equivariance, ActionTable};
use hhs_core::crystal::{decide_hhg, parse_crystal, wallpaper_catalog, Decision, Verdict};
use hhs_core::eyries::{
    classify_trichotomy, classify_virtually_abelian, compute_eyries_default, compute_subgroup_eyries, AbelianVerdict,
    EyrieCertificate, EyrieError, SubgroupLabeling, Trichotomy,
};
use hhs_core::structure::{parse_structure_file, validate, StructureFile};

use report::{Format, Outcome, Report};

#[derive(Parser, Debug)]
#[command(name = "hhs", version, about = "Hierarchical structures, eyries and crystallographic groups")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed for every sampled experiment.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Multiplier for the constants of the subgroup trace.
    #[arg(long, global = true, default_value_t = 0.001)]
    proof_scale: f64,
    /// Word-length cap for searches over group elements.
    #[arg(long = "cap-word", global = true, default_value_t = 4)]
    cap_word: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a structure file against the axioms (and its action, if any).
    Validate { file: PathBuf },
    /// Compute and certify eyries.
    Eyries {
        file: PathBuf,
        /// Labeling file restricting to a subgroup.
        #[arg(long)]
        labels: Option<PathBuf>,
    },
    /// Virtually-abelian test and eyrie trichotomy.
    Classify {
        file: PathBuf,
        #[arg(long)]
        labels: Option<PathBuf>,
    },
    /// Crystallographic groups.
    #[command(subcommand)]
    Crystal(CrystalCommand),
    /// Concrete models: export and experiments.
    #[command(subcommand)]
    Model(model_cmd::ModelCommand),
}

#[derive(Subcommand, Debug)]
enum CrystalCommand {
    /// Decide whether a crystallographic group is hierarchically hyperbolic.
    Decide { file: PathBuf },
    /// Decide every plane crystallographic group.
    Wallpaper {
        /// Accepted for symmetry with scripts; the sweep always covers all 17.
        #[arg(long)]
        all: bool,
    },
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_structure(path: &Path) -> Result<(StructureFile, Option<ActionTable>)> {
    let file = parse_structure_file(&read(path)?).with_context(|| format!("in {}", path.display()))?;
    let action = match &file.action {
        Some(spec) => Some(ActionTable::from_spec(&file.structure, spec).context("bad ACTION section")?),
        None => None,
    };
    Ok((file, action))
}

fn cmd_validate(path: &Path) -> Result<(Report, Outcome)> {
    let (file, action) = load_structure(path)?;
    let mut report = validate(&file.structure);
    if let Some(a) = &action {
        report = report.merge(verify_equivariance(&file.structure, a));
    }
    let mut r = Report::new("validate", "the index-set axioms: nesting order, orthogonality, containers, bounded complexity, and equivariance of the action");
    let n = report.violations.len();
    r.field("domains", file.structure.len());
    if report.is_valid() {
        r.line(format!("VALID ({n} violations)"));
        r.field("verdict", "valid");
    } else {
        r.line(format!("INVALID ({n} violations)"));
        r.field("verdict", "invalid");
    }
    r.field("violations", n);
    for (i, v) in report.violations.iter().enumerate() {
        r.line(format!("  {v}"));
        r.field(&format!("violation.{i}.axiom"), v.axiom);
        r.field(&format!("violation.{i}.witness"), v.witness.join(","));
        r.field(&format!("violation.{i}.detail"), &v.detail);
    }
    Ok((r, if report.is_valid() { Outcome::Ok } else { Outcome::Negative }))
}

fn certificate(path: &Path, labels: Option<&Path>) -> Result<std::result::Result<(StructureFile, EyrieCertificate), EyrieError>> {
    let (file, action) = load_structure(path)?;
    let cert = match labels {
        Some(l) => {
            let labeling = SubgroupLabeling::parse(&read(l)?)?;
            compute_subgroup_eyries(&file.structure, &labeling, action.as_ref())
        }
        None => compute_eyries_default(&file.structure, action.as_ref()),
    };
    Ok(cert.map(|c| (file, c)))
}

/// Invalid structures are a negative verdict; other eyrie errors are input
/// errors.
fn eyrie_error(r: &mut Report, e: EyrieError) -> Result<Outcome> {
    match e {
        EyrieError::InvalidStructure(rep) => {
            r.line(format!("INVALID ({} violations)", rep.violations.len()));
            r.field("verdict", "invalid-structure");
            for (i, v) in rep.violations.iter().enumerate() {
                r.line(format!("  {v}"));
                r.field(&format!("violation.{i}"), v);
            }
            Ok(Outcome::Negative)
        }
        other => Err(other.into()),
    }
}

fn render_certificate(r: &mut Report, cert: &EyrieCertificate) {
    let eyries: Vec<&str> = cert.eyries.iter().map(String::as_str).collect();
    r.both("eyries", "eyries", format!("{{{}}}", eyries.join(", ")));
    r.field("eyrie_count", cert.eyries.len());
    r.line("covering:");
    for (u, w) in &cert.covering {
        r.line(format!("  {u} ⊑ {w}"));
        r.field(&format!("covering.{u}"), w);
    }
    r.line("orthogonality checks:");
    for (u, v) in &cert.pairwise_orthogonal {
        r.line(format!("  {u} ⊥ {v}"));
    }
    r.field("orthogonal_pairs", cert.pairwise_orthogonal.len());
    r.both("invariant_under", "invariant under", cert.invariant_under.join(","));
    match &cert.failure {
        None => {
            r.both("verdict", "verdict", "certified");
        }
        Some(f) => {
            r.both("verdict", "verdict", "failure");
            r.both("failure", "witness", f);
        }
    }
}

fn cmd_eyries(path: &Path, labels: Option<&Path>) -> Result<(Report, Outcome)> {
    let mut r = Report::new(
        "eyries",
        "a finite invariant set of pairwise orthogonal unbounded domains with every unbounded domain nested in one of them",
    );
    let (_, cert) = match certificate(path, labels)? {
        Ok(x) => x,
        Err(e) => {
            let o = eyrie_error(&mut r, e)?;
            return Ok((r, o));
        }
    };
    render_certificate(&mut r, &cert);
    Ok((r, if cert.is_success() { Outcome::Ok } else { Outcome::Negative }))
}

fn cmd_classify(path: &Path, labels: Option<&Path>) -> Result<(Report, Outcome)> {
    let mut r = Report::new(
        "classify",
        "virtual rank equals the number of eyries when all unbounded domains are quasilines; no eyrie, one eyrie, or a product of k",
    );
    let (file, cert) = match certificate(path, labels)? {
        Ok(x) => x,
        Err(e) => {
            let o = eyrie_error(&mut r, e)?;
            return Ok((r, o));
        }
    };
    render_certificate(&mut r, &cert);
    if !cert.is_success() {
        return Ok((r, Outcome::Negative));
    }
    match classify_virtually_abelian(&file.structure, &cert)? {
        AbelianVerdict::VirtuallyAbelian(k) => {
            r.both("abelian", "virtually abelian", format!("VirtuallyAbelian(rank {k})"));
            r.field("rank", k);
        }
        AbelianVerdict::NotByThisCriterion(w) => {
            r.both("abelian", "virtually abelian", format!("NotByThisCriterion({w} is not a quasiline)"));
        }
    }
    let tri = match classify_trichotomy(&cert)? {
        Trichotomy::NoEyrie => "NoEyrie".to_string(),
        Trichotomy::SingleEyrie(w) => format!("SingleEyrie({w})"),
        Trichotomy::ProductOfK { k, factors } => format!("ProductOf{k}({})", factors.join(", ")),
    };
    r.both("trichotomy", "trichotomy", tri);
    Ok((r, Outcome::Ok))
}

fn decision_text(d: &Decision) -> String {
    match &d.verdict {
        Verdict::Admissible { .. } => "Admissible".into(),
        Verdict::NotHhg(o) => match o {
            hhs_core::crystal::Obstruction::ElementOrderAbsent { order } => format!("NotHHG: order-{order} obstruction"),
            other => format!("NotHHG: {other}"),
        },
    }
}

fn cmd_crystal_decide(path: &Path) -> Result<(Report, Outcome)> {
    let group = parse_crystal(&read(path)?).with_context(|| format!("in {}", path.display()))?;
    let d = decide_hhg(&group)?;
    let mut r = Report::new(
        "crystal decide",
        "a crystallographic group is hierarchically hyperbolic iff its point group embeds in the hyperoctahedral group of the same dimension",
    );
    r.both("name", "group", &d.name);
    r.both("dim", "dimension", d.dim);
    r.both("point_group_order", "point group order", d.point_group_order);
    let spectrum: Vec<String> = d.order_spectrum.iter().map(usize::to_string).collect();
    r.both("order_spectrum", "element orders", spectrum.join(","));
    r.both("verdict", "verdict", decision_text(&d));
    r.both("cubulation", "cubulation", d.cubulation());
    if let Verdict::Admissible { generator_images } = &d.verdict {
        for (g, p) in generator_images {
            r.line(format!("  point-group element {g} ↦ {p}"));
            r.field(&format!("image.{g}"), p);
        }
    }
    Ok((r, if d.is_admissible() { Outcome::Ok } else { Outcome::Negative }))
}

fn cmd_wallpaper() -> Result<(Report, Outcome)> {
    let mut r = Report::new("crystal wallpaper", "the point-group embedding criterion on all 17 plane groups");
    r.line(format!("{:<6} {:>4}  {:<10} {}", "group", "|F|", "orders", "verdict"));
    let mut not_hhg = 0;
    for e in wallpaper_catalog()? {
        let d = decide_hhg(&e.group)?;
        let spectrum: Vec<String> = d.order_spectrum.iter().map(usize::to_string).collect();
        let v = decision_text(&d);
        if !d.is_admissible() {
            not_hhg += 1;
        }
        r.line(format!("{:<6} {:>4}  {:<10} {}", e.name, d.point_group_order, spectrum.join(","), v));
        r.field(&format!("group.{}.point_group_order", e.name), d.point_group_order);
        r.field(&format!("group.{}.verdict", e.name), if d.is_admissible() { "admissible" } else { "not-hhg" });
    }
    r.both("not_hhg", "not HHG", not_hhg);
    Ok((r, Outcome::Ok))
}

fn run(cli: &Cli) -> Result<(Report, Outcome)> {
    match &cli.command {
        Command::Validate { file } => cmd_validate(file),
        Command::Eyries { file, labels } => cmd_eyries(file, labels.as_deref()),
        Command::Classify { file, labels } => cmd_classify(file, labels.as_deref()),
        Command::Crystal(CrystalCommand::Decide { file }) => cmd_crystal_decide(file),
        Command::Crystal(CrystalCommand::Wallpaper { .. }) => cmd_wallpaper(),
        Command::Model(m) => model_cmd::run(cli, m),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((report, outcome)) => {
            print!("{}", report.render(cli.format));
            ExitCode::from(outcome.code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
