//! Flag value types shared by several subcommands.

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use clap::Args;
use serde::{Deserialize, Serialize};

use netpool::analytics::{ClosedForm, Estimate};
use netpool::model::{calibrate_alpha, implied_prevalence, ModelParams, PoolingParams};

use crate::{CliResult, Failure};

/// Group sizes: `10`, `2..40`, `2..=40`, `5,10,15`, or a mix such as `2..5,10`.
/// `a..b` includes `b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct SizeList {
    text: String,
    sizes: Vec<usize>,
}

impl SizeList {
    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }
}

impl FromStr for SizeList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut sizes = Vec::new();
        for part in s.split(',').map(str::trim) {
            if part.is_empty() {
                return Err(format!("empty entry in '{s}'"));
            }
            if part.contains("..") {
                let range = part.parse::<GroupRange>()?;
                sizes.extend(range.range());
            } else {
                sizes.push(parse_size(part)?);
            }
        }
        Ok(Self {
            text: s.to_string(),
            sizes,
        })
    }
}

impl TryFrom<String> for SizeList {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<SizeList> for String {
    fn from(list: SizeList) -> Self {
        list.text
    }
}

impl fmt::Display for SizeList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

fn parse_size(s: &str) -> Result<usize, String> {
    s.trim()
        .parse()
        .map_err(|_| format!("'{s}' is not a nonnegative integer"))
}

/// Inclusive range `a..b` or `a..=b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct GroupRange {
    pub start: usize,
    pub end: usize,
}

impl GroupRange {
    pub fn range(self) -> RangeInclusive<usize> {
        self.start..=self.end
    }
}

impl FromStr for GroupRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, b) = s
            .split_once("..")
            .ok_or_else(|| format!("expected a range like 2..50, got '{s}'"))?;
        let b = b.strip_prefix('=').unwrap_or(b);
        let (start, end) = (parse_size(a)?, parse_size(b)?);
        if start > end {
            return Err(format!("range '{s}' is empty"));
        }
        Ok(Self { start, end })
    }
}

impl TryFrom<String> for GroupRange {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<GroupRange> for String {
    fn from(r: GroupRange) -> Self {
        r.to_string()
    }
}

impl fmt::Display for GroupRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

/// Comma-separated strategy names, duplicates removed, order kept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategyList<T> {
    pub items: Vec<T>,
}

impl<T: FromStr<Err = String> + PartialEq> FromStr for StrategyList<T> {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut items = Vec::new();
        for name in s.split(',').map(str::trim) {
            let item = name.parse::<T>()?;
            if !items.contains(&item) {
                items.push(item);
            }
        }
        Ok(Self { items })
    }
}

impl<T: fmt::Display> Serialize for StrategyList<T> {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de, T: FromStr<Err = String> + PartialEq> Deserialize<'de> for StrategyList<T> {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        String::deserialize(deserializer)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

impl<T: fmt::Display> fmt::Display for StrategyList<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, item) in self.items.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{item}")?;
        }
        Ok(())
    }
}

/// `N`, `v` and optionally the network `(m, p, q)` with `alpha`.
#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ModelArgs {
    /// Population size
    #[arg(long = "N", value_name = "N")]
    pub population: usize,
    /// Prevalence among non-seed individuals (alpha is calibrated from it)
    #[arg(long = "v", value_name = "V", conflicts_with = "transmission")]
    pub prevalence: Option<f64>,
    /// Transmission probability (prevalence is derived from it)
    #[arg(long = "alpha", value_name = "ALPHA")]
    pub transmission: Option<f64>,
    /// Community size
    #[arg(long = "m", value_name = "M")]
    pub community_size: Option<usize>,
    /// Within-community edge probability
    #[arg(long = "p", value_name = "P")]
    pub p_within: Option<f64>,
    /// Between-community edge probability
    #[arg(long = "q", value_name = "Q")]
    pub q_between: Option<f64>,
}

/// [`ModelArgs`] with `v` and, when a network is given, `alpha` filled in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolvedModel {
    pub population: usize,
    pub prevalence: f64,
    /// `(m, p, q, alpha)`.
    pub network: Option<(usize, f64, f64, f64)>,
}

impl ModelArgs {
    pub fn resolve(&self) -> CliResult<ResolvedModel> {
        let network = match (self.community_size, self.p_within, self.q_between) {
            (Some(m), Some(p), Some(q)) => Some((m, p, q)),
            (None, None, None) => None,
            _ => return Err(Failure::parameter("--m, --p and --q must be given together")),
        };
        match (network, self.prevalence, self.transmission) {
            (None, Some(v), None) => Ok(ResolvedModel {
                population: self.population,
                prevalence: v,
                network: None,
            }),
            (None, _, Some(_)) => Err(Failure::parameter("--alpha needs a network (--m, --p, --q)")),
            (_, None, None) => Err(Failure::parameter("give --v or --alpha")),
            (Some((m, p, q)), Some(v), None) => {
                let alpha = calibrate_alpha(self.population, m, p, q, v)?;
                Ok(ResolvedModel {
                    population: self.population,
                    prevalence: v,
                    network: Some((m, p, q, alpha)),
                })
            }
            (Some((m, p, q)), None, Some(alpha)) => Ok(ResolvedModel {
                population: self.population,
                prevalence: implied_prevalence(self.population, m, p, q, alpha),
                network: Some((m, p, q, alpha)),
            }),
            (Some(_), Some(_), Some(_)) => Err(Failure::parameter("give only one of --v and --alpha")),
        }
    }
}

impl ResolvedModel {
    pub fn pooling(&self, group_size: usize) -> netpool::Result<PoolingParams> {
        PoolingParams::new(self.population, group_size, self.prevalence)
    }

    /// Full parameters at group size `n`; `None` without a network.
    pub fn params(&self, group_size: usize) -> netpool::Result<Option<ModelParams>> {
        let Some((m, p, q, alpha)) = self.network else {
            return Ok(None);
        };
        let params = ModelParams {
            population: self.population,
            group_size,
            community_size: m,
            p_within: p,
            q_between: q,
            prevalence: self.prevalence,
            transmission: alpha,
        };
        params.check()?;
        Ok(Some(params))
    }

    /// `form` at group size `n`; `None` when it needs a network and there is none.
    pub fn evaluate(&self, form: ClosedForm, group_size: usize) -> netpool::Result<Option<Estimate>> {
        if let Some(estimate) = form.evaluate_pooling(&self.pooling(group_size)?) {
            return estimate.map(Some);
        }
        self.params(group_size)?.map(|params| form.evaluate(&params)).transpose()
    }

    /// The requested forms, or every form these parameters allow.
    pub fn forms(&self, requested: Option<&StrategyList<ClosedForm>>) -> CliResult<Vec<ClosedForm>> {
        match requested {
            Some(list) => {
                if self.network.is_none() {
                    if let Some(form) = list.items.iter().find(|f| f.needs_network()) {
                        return Err(Failure::parameter(format!("{form} needs --m, --p and --q")));
                    }
                }
                Ok(list.items.clone())
            }
            None => Ok(ClosedForm::ALL
                .into_iter()
                .filter(|f| !f.needs_network() || self.network.is_some())
                .collect()),
        }
    }
}
