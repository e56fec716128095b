use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebra::LaurentPoly;
use crate::error::{Error, Result};
use crate::quiver::Quiver;
use crate::toric::{cd_census, census_polynomial, wyss_kac, Stratum};

pub const SCHEMA: &str = "kacdepth/1";

/// Versioned report envelope shared by every command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub command: String,
    pub ok: bool,
    /// Human-readable lines, also used for the text format.
    pub summary: Vec<String>,
    /// Mismatch descriptions; empty when `ok`.
    pub diff: Vec<String>,
    pub result: Value,
}

impl Report {
    pub fn new<T: Serialize>(command: &str, result: &T) -> Self {
        Self {
            schema: SCHEMA.to_string(),
            command: command.to_string(),
            ok: true,
            summary: Vec::new(),
            diff: Vec::new(),
            result: serde_json::to_value(result).expect("report serialization"),
        }
    }

    pub fn line(mut self, s: impl Into<String>) -> Self {
        self.summary.push(s.into());
        self
    }

    /// Records a failed assertion.
    pub fn mismatch(mut self, s: impl Into<String>) -> Self {
        self.ok = false;
        self.diff.push(s.into());
        self
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let r: Self = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        if r.schema != SCHEMA {
            return Err(Error::Parse(format!("unknown schema {:?}", r.schema)));
        }
        Ok(r)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}: {}\n", self.command, if self.ok { "ok" } else { "FAILED" });
        for l in &self.summary {
            out.push_str(l);
            out.push('\n');
        }
        for d in &self.diff {
            out.push_str("diff: ");
            out.push_str(d);
            out.push('\n');
        }
        out
    }
}

/// Toric Kac polynomial computed both ways, with the stratum census.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KacReport {
    pub quiver: Quiver,
    pub alpha: u32,
    pub polynomial: String,
    pub wyss: LaurentPoly,
    pub contraction_deletion: LaurentPoly,
    pub agree: bool,
    pub census: Vec<Stratum>,
}

pub fn kac_report(q: &Quiver, alpha: u32) -> Result<KacReport> {
    let wyss = wyss_kac(q, alpha)?;
    let census = cd_census(q, alpha)?;
    let cd = census_polynomial(&census);
    Ok(KacReport {
        quiver: q.clone(),
        alpha,
        polynomial: cd.to_string(),
        agree: wyss == cd,
        wyss,
        contraction_deletion: cd,
        census,
    })
}
