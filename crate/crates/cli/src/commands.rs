use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use qcat_core::adjunction::{check_fixed_category, check_fixed_presheaf, fibers, is_fixed_category_direct, roundtrip, sheafify_oracle, sigma_construct};
use qcat_core::completion::complete;
use qcat_core::sample::{random_presheaf, rng, DEFAULT_SEED};
use qcat_core::setenriched::{karoubi_envelope, FinCategory, Profunctor};
use qcat_core::{fixtures, qcat, Distributor, QCategory};

use crate::format::{self, Document, FormatError, Kind, SingletonEntry};

#[derive(Debug, Parser)]
#[command(name = "qcat", version, about = "Quantaloid-enriched categories, sheaves and Karoubi envelopes on finite data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the produced document here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a document of any kind and run its validator.
    Validate { path: PathBuf },
    /// List the maps (1-cells with a right adjoint) of a quantaloid.
    Maps {
        path: PathBuf,
        /// Only maps whose right adjoint is their involute.
        #[arg(long)]
        symmetric: bool,
    },
    /// Total Q-category of a presheaf.
    Sigma { path: PathBuf },
    /// Presheaf of fibers of a Q-category.
    Fibers {
        path: PathBuf,
        #[arg(long)]
        symmetric: bool,
    },
    /// Cauchy completion, with the singleton behind each new element.
    Complete {
        path: PathBuf,
        #[arg(long)]
        symmetric: bool,
    },
    /// Send a presheaf through completion and back; FIXED when it returns unchanged.
    Roundtrip { path: PathBuf },
    /// Join-of-maps test for a Q-category; `direct:` compares it with its
    /// image under completion of the total category of its fibers.
    CheckFixedCat {
        path: PathBuf,
        #[arg(long)]
        symmetric: bool,
    },
    /// Fixed-point test for a presheaf, with a witness when it fails.
    CheckFixedPresheaf { path: PathBuf },
    /// Karoubi envelope of a finite category.
    Karoubi { path: PathBuf },
    /// Sheafification of a presheaf on a finite space, computed from germs.
    OracleSheafify { path: PathBuf },
    /// Random set-valued presheaf on the symmetric maps of a topological quantaloid.
    SamplePresheaf {
        path: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        max_fiber: usize,
    },
    /// Emit a built-in example document.
    Fixture { name: FixtureName },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FixtureName {
    Rs,
    Q3,
    Boolean,
    Chaotic2,
    FSheaf,
    FBad,
    SectionsFSheaf,
    SectionsFBad,
    UnitX,
    HomSectionsFSheaf,
    EIdem,
    HomEIdem,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Write { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Format { path: String, source: FormatError },
    #[error("{0}")]
    Core(#[from] qcat_core::Error),
}

/// A produced document, verdict lines and the exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub document: Option<String>,
    pub verdict: Vec<String>,
    pub code: u8,
}

impl Outcome {
    fn document(text: String) -> Self {
        Self { document: Some(text), verdict: Vec::new(), code: 0 }
    }

    fn verdict(fixed: bool, witness: impl IntoIterator<Item = String>, document: Option<String>) -> Self {
        let mut verdict = vec![format!("verdict: {}", if fixed { "FIXED" } else { "NOT-FIXED" })];
        verdict.extend(witness.into_iter().map(|w| format!("witness: {w}")));
        Self { document, verdict, code: if fixed { 0 } else { 1 } }
    }
}

fn load(path: &Path, kind: Option<Kind>) -> Result<Document, CliError> {
    let shown = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|source| CliError::Read { path: shown.clone(), source })?;
    let parsed = match kind {
        Some(k) => format::parse_as(&text, k),
        None => format::parse(&text),
    };
    parsed.map_err(|source| CliError::Format { path: shown, source })
}

macro_rules! load_as {
    ($path:expr, $variant:ident, $kind:ident) => {
        match load($path, Some(Kind::$kind))? {
            Document::$variant(x) => x,
            _ => unreachable!("parse_as checks the kind"),
        }
    };
}

pub fn run(command: &Command) -> Result<Outcome, CliError> {
    Ok(match command {
        Command::Validate { path } => {
            let doc = load(path, None)?;
            Outcome { document: None, verdict: vec![format!("verdict: VALID {}", doc.kind())], code: 0 }
        }
        Command::Maps { path, symmetric } => {
            let q = load_as!(path, Quantaloid, Quantaloid);
            let maps = q.enumerate_maps(*symmetric);
            let mut verdict: Vec<String> = maps
                .iter()
                .map(|m| {
                    format!(
                        "map {} -> {}: {} right adjoint {}{}",
                        q.object_name(m.src()),
                        q.object_name(m.dst()),
                        q.cell_name(m.forward),
                        q.cell_name(m.adjoint),
                        if m.symmetric { " (symmetric)" } else { "" }
                    )
                })
                .collect();
            verdict.push(format!("count: {}", maps.len()));
            Outcome { document: None, verdict, code: 0 }
        }
        Command::Sigma { path } => {
            let f = load_as!(path, Presheaf, Presheaf);
            Outcome::document(format::write_qcategory(&sigma_construct(&f)?, &[]))
        }
        Command::Fibers { path, symmetric } => {
            let a = load_as!(path, QCategory, Qcategory);
            Outcome::document(format::write_presheaf(&fibers(&a, *symmetric)?.presheaf))
        }
        Command::Complete { path, symmetric } => {
            let a = load_as!(path, QCategory, Qcategory);
            let c = complete(&a, *symmetric)?;
            Outcome::document(format::write_qcategory(&c.category, &annex(&a, &c.category, &c.singletons)))
        }
        Command::Roundtrip { path } => {
            let f = load_as!(path, Presheaf, Presheaf);
            let r = roundtrip(&f)?;
            let fixed = r.is_isomorphic(&f);
            let witness = if fixed { None } else { check_fixed_presheaf(&f)?.witness };
            Outcome::verdict(fixed, witness, Some(format::write_presheaf(&r)))
        }
        Command::CheckFixedPresheaf { path } => {
            let f = load_as!(path, Presheaf, Presheaf);
            let report = check_fixed_presheaf(&f)?;
            Outcome::verdict(report.fixed, report.witness, None)
        }
        Command::CheckFixedCat { path, symmetric } => {
            let a = load_as!(path, QCategory, Qcategory);
            let report = check_fixed_category(&a, *symmetric)?;
            let mut outcome = Outcome::verdict(report.is_ok(), report.violations, None);
            let direct = is_fixed_category_direct(&a, *symmetric)?;
            outcome.verdict.push(format!("direct: {}", if direct { "FIXED" } else { "NOT-FIXED" }));
            outcome
        }
        Command::Karoubi { path } => {
            let c = load_as!(path, FinCategory, Fincategory);
            let (kar, _) = karoubi_envelope(&c)?;
            Outcome::document(format::write_fincategory(&kar))
        }
        Command::OracleSheafify { path } => {
            let f = load_as!(path, Presheaf, Presheaf);
            Outcome::document(format::write_presheaf(&sheafify_oracle(&f)?))
        }
        Command::SamplePresheaf { path, seed, max_fiber } => {
            let q = load_as!(path, Quantaloid, Quantaloid);
            let f = random_presheaf(q, *max_fiber, &mut rng(*seed))?;
            Outcome::document(format::write_presheaf(&f))
        }
        Command::Fixture { name } => Outcome::document(fixture(*name)?.to_text()),
    })
}

fn annex(a: &QCategory, completed: &QCategory, singletons: &[qcat_core::Singleton]) -> Vec<SingletonEntry> {
    let q = a.quantaloid();
    singletons
        .iter()
        .enumerate()
        .map(|(x, s)| SingletonEntry {
            element: completed.name(x).to_string(),
            sigma: s.sigma().iter().map(|&c| q.cell_name(c).to_string()).collect(),
            adjoint: s.adjoint.iter().map(|&c| q.cell_name(c).to_string()).collect(),
        })
        .collect()
}

pub fn fixture(name: FixtureName) -> Result<Document, CliError> {
    Ok(match name {
        FixtureName::Rs => Document::Quantaloid(fixtures::rs()),
        FixtureName::Q3 => Document::Quantaloid(fixtures::q3()),
        FixtureName::Boolean => Document::Quantaloid(fixtures::boolean()),
        FixtureName::Chaotic2 => Document::Quantaloid(fixtures::chaotic_boolean(2)),
        FixtureName::FSheaf => Document::Presheaf(fixtures::f_sheaf()),
        FixtureName::FBad => Document::Presheaf(fixtures::f_bad()),
        FixtureName::SectionsFSheaf => Document::QCategory(qcat::sections_qcat(&fixtures::f_sheaf())?),
        FixtureName::SectionsFBad => Document::QCategory(qcat::sections_qcat(&fixtures::f_bad())?),
        FixtureName::UnitX => {
            let q = fixtures::rs();
            let x = q.object("X")?;
            Document::QCategory(qcat::unit_qcat(q, x))
        }
        FixtureName::HomSectionsFSheaf => {
            Document::Distributor(Distributor::identity(&qcat::sections_qcat(&fixtures::f_sheaf())?))
        }
        FixtureName::EIdem => Document::FinCategory(Arc::new(FinCategory::e_idem())),
        FixtureName::HomEIdem => Document::Profunctor(Profunctor::hom(&Arc::new(FinCategory::e_idem()))),
    })
}

/// Runs a parsed command line; returns the exit status and what was printed
/// to standard output and standard error.
pub fn execute(cli: &Cli) -> (u8, String, String) {
    let outcome = match run(&cli.command) {
        Ok(o) => o,
        Err(e) => return (2, String::new(), format!("error: {e}\n")),
    };
    let mut stdout = String::new();
    if let Some(doc) = &outcome.document {
        match &cli.out {
            Some(path) => {
                if let Err(source) = fs::write(path, doc) {
                    let e = CliError::Write { path: path.display().to_string(), source };
                    return (2, String::new(), format!("error: {e}\n"));
                }
            }
            None if outcome.verdict.is_empty() => stdout.push_str(doc),
            None => {}
        }
    }
    for line in &outcome.verdict {
        stdout.push_str(line);
        stdout.push('\n');
    }
    (outcome.code, stdout, String::new())
}
