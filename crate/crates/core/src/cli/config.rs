//! Job configuration files.
//!
//! Symbolic monomials are written either as words (`"e1*e8*q^-1"`) or as
//! exponent vectors over `gens`, whose entries are integers or `"n/d"`
//! strings. Complex numbers are `[re, im]` pairs.

use std::sync::Arc;

use serde::Deserialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::exactgroup::monomial::parse_rat;
use crate::exactgroup::{Monomial, Rat, RelationLattice};
use crate::numerics::{eps_from_t, NumericParams, C64};
use crate::thetafield::{Case, ThetaQuotient};

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum MonomialSpec {
    Word(String),
    Vector(Vec<Value>),
}

impl MonomialSpec {
    pub fn resolve(&self, gens: &[String]) -> Result<Monomial> {
        match self {
            MonomialSpec::Word(s) => s.parse(),
            MonomialSpec::Vector(v) => {
                if v.len() != gens.len() {
                    return Err(Error::Config(format!(
                        "exponent vector has {} entries but there are {} generators",
                        v.len(),
                        gens.len()
                    )));
                }
                let ex: Vec<(String, Rat)> = gens
                    .iter()
                    .zip(v)
                    .map(|(g, x)| Ok((g.clone(), exponent(x)?)))
                    .collect::<Result<_>>()?;
                Ok(Monomial::from_parts(Rat::from_integer(0), ex))
            }
        }
    }
}

fn exponent(v: &Value) -> Result<Rat> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(Rat::from_integer)
            .ok_or_else(|| Error::Config(format!("exponent {n} is not an integer; use \"n/d\""))),
        Value::String(s) => parse_rat(s),
        other => Err(Error::Config(format!("bad exponent {other}"))),
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuotientSpec {
    #[serde(default = "one")]
    pub level: u32,
    #[serde(default)]
    pub constant: Option<MonomialSpec>,
    #[serde(default)]
    pub z_power: i64,
    /// `[shift, exponent]` pairs for `θ(shift · z_k)^exponent`.
    pub factors: Vec<(MonomialSpec, i64)>,
}

fn one() -> u32 {
    1
}

/// Input of `check`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolicConfig {
    #[serde(default)]
    pub case: Option<String>,
    #[serde(default)]
    pub gens: Option<Vec<String>>,
    #[serde(default)]
    pub lattice: Option<Vec<Vec<i64>>>,
    /// Extra relations on top of `lattice`.
    #[serde(default)]
    pub relations: Vec<MonomialSpec>,
    #[serde(default)]
    pub eps: Option<Vec<MonomialSpec>>,
    /// A coefficient `b` checked on its own (custom jobs).
    #[serde(default)]
    pub b: Option<QuotientSpec>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseChoice {
    Known(Case),
    Custom,
}

impl std::str::FromStr for CaseChoice {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "custom" => Ok(CaseChoice::Custom),
            _ => s.parse().map(CaseChoice::Known),
        }
    }
}

/// A resolved `check` job.
#[derive(Clone, Debug)]
pub struct CheckJob {
    pub case: CaseChoice,
    pub lattice: Arc<RelationLattice>,
    pub eps: Vec<Monomial>,
    pub b: Option<ThetaQuotient>,
}

pub fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T> {
    // serde_json's message already names the field and the line/column
    serde_json::from_str(text).map_err(|e| Error::Config(format!("{what}: {e}")))
}

impl SymbolicConfig {
    /// `cli_case` wins over the file's `case`; custom jobs default to the
    /// case-A generators and lattice.
    pub fn resolve(&self, cli_case: Option<CaseChoice>) -> Result<CheckJob> {
        let case = match (cli_case, &self.case) {
            (Some(c), _) => c,
            (None, Some(s)) => s.parse().map_err(|_| Error::Config(format!("case: unknown case {s:?}")))?,
            (None, None) => return Err(Error::Config("case: not given on the command line or in the file".into())),
        };
        let base = match case {
            CaseChoice::Known(c) => c,
            CaseChoice::Custom => Case::A,
        };
        let gens = self.gens.clone().unwrap_or_else(|| base.generators());
        let rows = match (&self.lattice, &self.gens) {
            (Some(rows), _) => rows.clone(),
            (None, None) => base.lattice().basis().to_vec(),
            (None, Some(_)) => {
                return Err(Error::Config("lattice: required when gens is given".into()))
            }
        };
        let lattice = RelationLattice::new(gens.clone(), rows)
            .map_err(|e| Error::Config(format!("lattice: {e}")))?;
        let extra: Vec<Monomial> = self
            .relations
            .iter()
            .enumerate()
            .map(|(i, r)| r.resolve(&gens).map_err(|e| Error::Config(format!("relations[{i}]: {e}"))))
            .collect::<Result<_>>()?;
        // with_relations would adopt new generators; in a config that is a typo
        for (i, r) in extra.iter().enumerate() {
            if let Some(g) = r.exponents().keys().find(|g| !gens.contains(g)) {
                return Err(Error::Config(format!("relations[{i}]: unknown generator {g}")));
            }
        }
        let lattice = if extra.is_empty() {
            lattice
        } else {
            lattice
                .with_relations(&extra)
                .map_err(|e| Error::Config(format!("relations: {e}")))?
        };
        let eps = match &self.eps {
            Some(v) => {
                if v.len() != 8 {
                    return Err(Error::Config(format!("eps: expected 8 entries, got {}", v.len())));
                }
                v.iter()
                    .enumerate()
                    .map(|(i, m)| m.resolve(&gens).map_err(|e| Error::Config(format!("eps[{i}]: {e}"))))
                    .collect::<Result<_>>()?
            }
            None => base.epsilons(),
        };
        let b = self
            .b
            .as_ref()
            .map(|qs| {
                let constant = match &qs.constant {
                    Some(c) => c.resolve(&gens)?,
                    None => Monomial::one(),
                };
                let factors: Vec<(Monomial, i64)> = qs
                    .factors
                    .iter()
                    .map(|(m, n)| Ok((m.resolve(&gens)?, *n)))
                    .collect::<Result<_>>()?;
                if qs.level == 0 {
                    return Err(Error::Config("level must be positive".into()));
                }
                Ok(ThetaQuotient::from_parts(qs.level, constant, qs.z_power, factors))
            })
            .transpose()
            .map_err(|e: Error| Error::Config(format!("b: {e}")))?;
        if case == CaseChoice::Custom && b.is_none() && self.eps.is_none() {
            return Err(Error::Config("custom case needs b or eps".into()));
        }
        Ok(CheckJob {
            case,
            lattice: Arc::new(lattice),
            eps,
            b,
        })
    }
}

/// Input of `validate` and `eval`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NumericConfig {
    pub p: [f64; 2],
    pub q: [f64; 2],
    #[serde(default)]
    pub eps: Option<Vec<[f64; 2]>>,
    /// Alternative to `eps`: `t_1..t_5` and `c`, with `t_8` from balancing.
    #[serde(default)]
    pub t: Option<Vec<[f64; 2]>>,
    #[serde(default)]
    pub c: Option<[f64; 2]>,
    #[serde(default)]
    pub trunc: Option<usize>,
    #[serde(default)]
    pub nodes: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
    /// Number of seeded sample points for the equation residual.
    #[serde(default)]
    pub samples: Option<usize>,
    /// `[r_min, r_max]` for the residual sample points.
    #[serde(default)]
    pub annulus: Option<[f64; 2]>,
}

pub fn cplx(v: [f64; 2]) -> C64 {
    C64::new(v[0], v[1])
}

impl NumericConfig {
    pub fn params(&self, trunc: Option<usize>, nodes: Option<usize>) -> Result<NumericParams> {
        let (p, q) = (cplx(self.p), cplx(self.q));
        let eps = match (&self.eps, &self.t, &self.c) {
            (Some(e), None, None) => {
                let v: Vec<C64> = e.iter().map(|x| cplx(*x)).collect();
                v.try_into()
                    .map_err(|v: Vec<C64>| Error::Config(format!("eps: expected 8 entries, got {}", v.len())))?
            }
            (None, Some(t), Some(c)) => {
                let v: Vec<C64> = t.iter().map(|x| cplx(*x)).collect();
                let t5: [C64; 5] = v
                    .try_into()
                    .map_err(|v: Vec<C64>| Error::Config(format!("t: expected 5 entries, got {}", v.len())))?;
                eps_from_t(&t5, cplx(*c), p, q)
            }
            _ => return Err(Error::Config("give either eps, or t together with c".into())),
        };
        let params = NumericParams {
            p,
            q,
            eps,
            trunc: trunc.or(self.trunc).unwrap_or(80),
            nodes: nodes.or(self.nodes).unwrap_or(2048),
        };
        params.check().map_err(|e| Error::Config(e.to_string()))?;
        Ok(params)
    }
}

/// Point list of `eval`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointsConfig {
    pub points: Vec<[f64; 2]>,
    /// Subset of `theta, gamma, A, V, f`; all when absent.
    #[serde(default)]
    pub functions: Option<Vec<String>>,
}
