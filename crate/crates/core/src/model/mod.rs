//! Constraint catalogs: families, severities, expressivity tags, loading,
//! linting and classification.

mod catalog;
mod classify;
mod family;
mod lint;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use catalog::{
    load_catalog, load_catalog_str, Catalog, CatalogError, CatalogProblem, Constraint, ParamValue, Params,
};
pub use classify::{classify, ClassificationSummary, VocabularyClassification};
pub use family::{family, families, Bound, FamilyKind, FamilySpec, ParamKind, ParamSpec};
pub use lint::{lint_catalog, LintFinding, LintKind};

/// Severity levels, ordered informational < warning < error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    #[serde(alias = "informational")]
    Info,
    Warning,
    Error,
}

impl Severity {
    pub const ALL: [Severity; 3] = [Severity::Info, Severity::Warning, Severity::Error];

    /// Table superscript: `*`, `**` or `***`.
    pub fn stars(self) -> &'static str {
        match self {
            Severity::Info => "*",
            Severity::Warning => "**",
            Severity::Error => "***",
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Severity::Info => "info",
            Severity::Warning => "warning",
            Severity::Error => "error",
        }
    }
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Severity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "info" | "informational" => Ok(Severity::Info),
            "warning" => Ok(Severity::Warning),
            "error" => Ok(Severity::Error),
            other => Err(format!("unknown severity '{other}'")),
        }
    }
}

/// Whether a constraint is executable or only catalogued.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Implemented,
    NotImplemented,
}

/// Which kinds of constraint language can express a constraint. The sets
/// overlap; SPARQL is implied when neither of the others applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Expressivity {
    pub rdfs_owl: bool,
    pub constraint_language: bool,
    pub sparql: bool,
}

impl Expressivity {
    pub const SPARQL: Expressivity = Expressivity { rdfs_owl: false, constraint_language: false, sparql: true };
    pub const BOTH: Expressivity = Expressivity { rdfs_owl: true, constraint_language: true, sparql: false };
    pub const RDFS_OWL: Expressivity = Expressivity { rdfs_owl: true, constraint_language: false, sparql: false };
    pub const CL: Expressivity = Expressivity { rdfs_owl: false, constraint_language: true, sparql: false };

    /// Applies the implication rule: an empty set means SPARQL.
    pub fn normalized(mut self) -> Self {
        if !self.rdfs_owl && !self.constraint_language {
            self.sparql = true;
        }
        self
    }

    pub fn from_labels<'a>(labels: impl IntoIterator<Item = &'a str>) -> Result<Self, String> {
        let mut e = Expressivity::default();
        for l in labels {
            match l.to_ascii_uppercase().as_str() {
                "SPARQL" => e.sparql = true,
                "CL" | "CONSTRAINT-LANGUAGE" => e.constraint_language = true,
                "RDFS/OWL" | "RDFS-OWL" | "OWL" => e.rdfs_owl = true,
                other => return Err(format!("unknown expressivity label '{other}'")),
            }
        }
        Ok(e.normalized())
    }

    pub fn labels(self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.sparql {
            out.push("SPARQL");
        }
        if self.constraint_language {
            out.push("CL");
        }
        if self.rdfs_owl {
            out.push("RDFS/OWL");
        }
        out
    }
}

/// A percentage with one decimal, stored in tenths and rounded half-up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Percent(u32);

impl Percent {
    pub const ZERO: Percent = Percent(0);

    /// `count / total * 100`; an empty denominator gives 0.0.
    pub fn of(count: u64, total: u64) -> Percent {
        if total == 0 {
            return Percent::ZERO;
        }
        let tenths = (2 * count as u128 * 1000 + total as u128) / (2 * total as u128);
        Percent(tenths as u32)
    }

    pub fn from_tenths(tenths: u32) -> Percent {
        Percent(tenths)
    }

    pub fn tenths(self) -> u32 {
        self.0
    }

    /// Unweighted mean of already rounded percentages, rounded half-up.
    pub fn mean(values: &[Percent]) -> Percent {
        if values.is_empty() {
            return Percent::ZERO;
        }
        let n = values.len() as u64;
        let sum: u64 = values.iter().map(|p| p.0 as u64).sum();
        Percent(((2 * sum + n) / (2 * n)) as u32)
    }

    /// Unweighted mean of exact `count / total` ratios, rounded half-up once
    /// at the end. A ratio with an empty denominator counts as zero.
    pub fn mean_of_ratios(ratios: &[(u64, u64)]) -> Percent {
        if ratios.is_empty() {
            return Percent::ZERO;
        }
        exact_mean_tenths(ratios).unwrap_or_else(|| {
            let sum: f64 = ratios.iter().filter(|r| r.1 > 0).map(|&(c, t)| c as f64 / t as f64).sum();
            (sum * 1000.0 / ratios.len() as f64 + 0.5).floor() as u32
        })
        .into()
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64 / 10.0
    }
}

impl From<u32> for Percent {
    fn from(tenths: u32) -> Self {
        Percent(tenths)
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `None` when the common denominator outgrows u128.
fn exact_mean_tenths(ratios: &[(u64, u64)]) -> Option<u32> {
    let (mut num, mut den) = (0u128, 1u128);
    for &(c, t) in ratios.iter().filter(|r| r.1 > 0) {
        let t = t as u128;
        let l = (den / gcd(den, t)).checked_mul(t)?;
        num = num.checked_mul(l / den)?.checked_add((c as u128).checked_mul(l / t)?)?;
        den = l;
        let g = gcd(num, den).max(1);
        (num, den) = (num / g, den / g);
    }
    let d = den.checked_mul(ratios.len() as u128)?;
    let tenths = (num.checked_mul(2000)?.checked_add(d)?) / d.checked_mul(2)?;
    u32::try_from(tenths).ok()
}

impl fmt::Display for Percent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.0 / 10, self.0 % 10)
    }
}

impl FromStr for Percent {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("not a one-decimal percentage: '{s}'");
        let (whole, frac) = s.split_once('.').ok_or_else(bad)?;
        if frac.len() != 1 {
            return Err(bad());
        }
        let whole: u32 = whole.parse().map_err(|_| bad())?;
        let frac: u32 = frac.parse().map_err(|_| bad())?;
        Ok(Percent(whole * 10 + frac))
    }
}

impl Serialize for Percent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(self.as_f64())
    }
}
