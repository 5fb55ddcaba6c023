use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("duplicate identifier `{0}`")]
    Duplicate(String),
    #[error("not a lattice: {0}")]
    NotALattice(String),
    #[error("not a topology: {0}")]
    NotATopology(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("quantaloid has no involution")]
    NoInvolution,
    #[error("quantaloid is not built from a topology")]
    NotTopological,
    #[error("invalid structure: {0}")]
    Invalid(String),
    #[error("no representative for {0}")]
    NotRepresentable(String),
}

/// List of violated invariants; empty means the checked structure is valid.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub violations: Vec<String>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, msg: impl Into<String>) {
        self.violations.push(msg.into());
    }

    pub fn extend(&mut self, other: Report) {
        self.violations.extend(other.violations);
    }

    /// Turns a non-empty report into an error carrying the first violation.
    pub fn into_result(self) -> Result<()> {
        match self.violations.into_iter().next() {
            None => Ok(()),
            Some(first) => Err(Error::Invalid(first)),
        }
    }
}

impl std::fmt::Display for Report {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "violation: {v}")?;
        }
        Ok(())
    }
}
