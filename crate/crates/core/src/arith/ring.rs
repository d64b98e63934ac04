use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::padic::Zpn;
use crate::error::{Error, Result};

/// `Z_p[[t1..td]]` modelled with coefficients mod `p^N` and total degree `< D`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingDescriptor {
    coeffs: Zpn,
    vars: Arc<[String]>,
    degree_cap: u32,
}

impl RingDescriptor {
    pub fn new(p: u64, prec: u32, vars: Vec<String>, degree_cap: u32) -> Result<Self> {
        let coeffs = Zpn::new(p, prec)?;
        if degree_cap == 0 {
            return Err(Error::InvalidRing("degree cap must be positive".into()));
        }
        for (i, v) in vars.iter().enumerate() {
            if !is_identifier(v) {
                return Err(Error::InvalidRing(format!("bad variable name {v:?}")));
            }
            if vars[..i].contains(v) {
                return Err(Error::InvalidRing(format!("duplicate variable {v}")));
            }
        }
        Ok(RingDescriptor {
            coeffs,
            vars: vars.into(),
            degree_cap,
        })
    }

    /// Ring with the default names `t1..td`.
    pub fn standard(p: u64, prec: u32, d: usize, degree_cap: u32) -> Result<Self> {
        Self::new(p, prec, (1..=d).map(|i| format!("t{i}")).collect(), degree_cap)
    }

    pub fn p(&self) -> u64 {
        self.coeffs.p()
    }

    pub fn precision(&self) -> u32 {
        self.coeffs.precision()
    }

    pub fn degree_cap(&self) -> u32 {
        self.degree_cap
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn coeffs(&self) -> Zpn {
        self.coeffs
    }

    /// The ring `A` with `B = A[[t_d]]`, i.e. the last variable dropped.
    pub fn subring(&self) -> Result<Self> {
        self.without_var(self.nvars().checked_sub(1).ok_or_else(|| {
            Error::BadVariable("the base ring Z_p has no variables".into())
        })?)
    }

    pub fn without_var(&self, k: usize) -> Result<Self> {
        if k >= self.nvars() {
            return Err(Error::BadVariable(format!("index {k} in a ring with {} variables", self.nvars())));
        }
        let mut vars = self.vars.to_vec();
        vars.remove(k);
        Ok(RingDescriptor {
            coeffs: self.coeffs,
            vars: vars.into(),
            degree_cap: self.degree_cap,
        })
    }

    /// `self[[name]]`.
    pub fn extend(&self, name: &str) -> Result<Self> {
        let mut vars = self.vars.to_vec();
        vars.push(name.to_string());
        Self::new(self.p(), self.precision(), vars, self.degree_cap)
    }

    pub fn with_precision(&self, prec: u32, degree_cap: u32) -> Result<Self> {
        Self::new(self.p(), prec, self.vars.to_vec(), degree_cap)
    }

    pub fn with_vars(&self, vars: Vec<String>) -> Result<Self> {
        Self::new(self.p(), self.precision(), vars, self.degree_cap)
    }

    /// Index of a variable by name; `s`, `t` alias `t1`, `t2` when `d <= 2`
    /// (with `t` meaning `t1` when `d = 1`), and `ti` always means index `i - 1`.
    pub fn var_index(&self, name: &str) -> Option<usize> {
        if let Some(i) = self.vars.iter().position(|v| v == name) {
            return Some(i);
        }
        let d = self.nvars();
        match (name, d) {
            ("s", 2) | ("t", 1) => return Some(0),
            ("t", 2) => return Some(1),
            _ => {}
        }
        let idx: usize = name.strip_prefix('t')?.parse().ok()?;
        (1..=d).contains(&idx).then(|| idx - 1)
    }

    pub fn to_json(&self) -> RingJson {
        RingJson {
            p: self.p(),
            precision: self.precision(),
            vars: self.vars.to_vec(),
            degree_cap: self.degree_cap,
        }
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Wire form of a ring: `{"p":…, "N":…, "vars":[…], "D":…}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingJson {
    pub p: u64,
    #[serde(rename = "N")]
    pub precision: u32,
    pub vars: Vec<String>,
    #[serde(rename = "D")]
    pub degree_cap: u32,
}

impl RingJson {
    pub fn build(&self) -> Result<RingDescriptor> {
        RingDescriptor::new(self.p, self.precision, self.vars.clone(), self.degree_cap)
    }
}
