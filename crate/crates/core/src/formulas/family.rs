use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rug::Rational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Which integers the summation index runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    /// n = 1, 3, 5, …
    Odd,
    /// n = 2, 4, 6, …
    Even,
    /// n = 1, 2, 3, …
    All,
}

impl Parity {
    pub fn admits(self, n: u64) -> bool {
        match self {
            Parity::Odd => n % 2 == 1,
            Parity::Even => n.is_multiple_of(2),
            Parity::All => true,
        }
    }
}

/// A convergent series with an exact closed form (or a candidate for one).
///
/// The Bessel kinds sum `J_p(nπ/2) J_q(nπ/2) / n^e` over the index set of the
/// parity. Even kinds use `n = 2k`, i.e. `J(kπ)/(2k)^e`. `HyperSq` is
/// `Σ_{n≥1} n^w F_n²` with `F_n = 2F3((α+2)/2, (α+3)/2; (α+β+3)/2, (α+β+4)/2, 3/2; −n²π²/4)`,
/// so that `w = 2` is the Parseval sum of the state `(α, β)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SeriesFamily {
    OddBesselSq { p: u32, e: u32 },
    OddBesselProd { p: u32, q: u32, e: u32 },
    EvenBesselSq { p: u32, e: u32 },
    EvenBesselProd { p: u32, q: u32, e: u32 },
    AllNBesselProd { p: u32, q: u32, e: u32 },
    HyperSq { alpha: Rational, beta: Rational, w: u32 },
}

impl SeriesFamily {
    /// Bessel family from its parts, squared kinds when `p == q` and
    /// orders sorted otherwise.
    pub fn bessel(parity: Parity, p: u32, q: u32, e: u32) -> Self {
        let (p, q) = (p.min(q), p.max(q));
        match (parity, p == q) {
            (Parity::Odd, true) => SeriesFamily::OddBesselSq { p, e },
            (Parity::Odd, false) => SeriesFamily::OddBesselProd { p, q, e },
            (Parity::Even, true) => SeriesFamily::EvenBesselSq { p, e },
            (Parity::Even, false) => SeriesFamily::EvenBesselProd { p, q, e },
            (Parity::All, _) => SeriesFamily::AllNBesselProd { p, q, e },
        }
    }

    /// Normal form: product orders sorted, products of equal orders as squares.
    pub fn canonical(&self) -> Self {
        match self.bessel_parts() {
            Some((parity, p, q, e)) => Self::bessel(parity, p, q, e),
            None => self.clone(),
        }
    }

    /// `(parity, p, q, e)` for Bessel kinds.
    pub fn bessel_parts(&self) -> Option<(Parity, u32, u32, u32)> {
        match *self {
            SeriesFamily::OddBesselSq { p, e } => Some((Parity::Odd, p, p, e)),
            SeriesFamily::OddBesselProd { p, q, e } => Some((Parity::Odd, p, q, e)),
            SeriesFamily::EvenBesselSq { p, e } => Some((Parity::Even, p, p, e)),
            SeriesFamily::EvenBesselProd { p, q, e } => Some((Parity::Even, p, q, e)),
            SeriesFamily::AllNBesselProd { p, q, e } => Some((Parity::All, p, q, e)),
            SeriesFamily::HyperSq { .. } => None,
        }
    }

    /// Checks the parameter invariants that make the series meaningful.
    pub fn validate(&self) -> Result<()> {
        match self {
            SeriesFamily::HyperSq { alpha, beta, w } => {
                let half = Rational::from((1, 2));
                if *alpha < half || *beta < half {
                    return Err(Error::domain(format!(
                        "hyper needs α, β ≥ 1/2, got α = {alpha}, β = {beta}"
                    )));
                }
                // F_n decays like n^(−min(α,β) − 2), so n^w F_n² is summable
                // only for w < 2 min(α,β) + 3.
                let limit = Rational::from(alpha.min(beta) * 2u32) + 3u32;
                if *w >= limit {
                    return Err(Error::domain(format!(
                        "hyper with w = {w} diverges for min(α, β) = {}",
                        Rational::from(alpha.min(beta))
                    )));
                }
                Ok(())
            }
            _ => {
                let (_, p, q, e) = self.bessel_parts().expect("bessel kind");
                if e == 0 {
                    return Err(Error::domain(format!("{self}: exponent must be ≥ 1")));
                }
                if p > crate::specfun::MAX_ORDER || q > crate::specfun::MAX_ORDER {
                    return Err(Error::domain(format!(
                        "{self}: orders above {} are not supported",
                        crate::specfun::MAX_ORDER
                    )));
                }
                Ok(())
            }
        }
    }

    /// Grammar keyword for the kind.
    pub fn kind(&self) -> &'static str {
        match self {
            SeriesFamily::OddBesselSq { .. } => "odd-sq",
            SeriesFamily::OddBesselProd { .. } => "odd-prod",
            SeriesFamily::EvenBesselSq { .. } => "even-sq",
            SeriesFamily::EvenBesselProd { .. } => "even-prod",
            SeriesFamily::AllNBesselProd { .. } => "alln-prod",
            SeriesFamily::HyperSq { .. } => "hyper",
        }
    }

    /// Summation written out, e.g. `Σ_{n odd} J_1(nπ/2)²/n^2`.
    pub fn notation(&self) -> String {
        match self {
            SeriesFamily::HyperSq { alpha, beta, w } => {
                let weight = match w {
                    0 => String::new(),
                    1 => "n ".to_string(),
                    _ => format!("n^{w} "),
                };
                format!("Σ_{{n≥1}} {weight}F_n², (α, β) = ({alpha}, {beta})")
            }
            _ => {
                let (parity, p, q, e) = self.bessel_parts().expect("bessel kind");
                let range = match parity {
                    Parity::Odd => "n odd",
                    Parity::Even => "n even",
                    Parity::All => "n≥1",
                };
                let prod = if p == q {
                    format!("J_{p}(nπ/2)²")
                } else {
                    format!("J_{p}(nπ/2) J_{q}(nπ/2)")
                };
                format!("Σ_{{{range}}} {prod}/n^{e}")
            }
        }
    }
}

impl fmt::Display for SeriesFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesFamily::OddBesselSq { p, e } | SeriesFamily::EvenBesselSq { p, e } => {
                write!(f, "{} p={p} e={e}", self.kind())
            }
            SeriesFamily::OddBesselProd { p, q, e }
            | SeriesFamily::EvenBesselProd { p, q, e }
            | SeriesFamily::AllNBesselProd { p, q, e } => {
                write!(f, "{} p={p} q={q} e={e}", self.kind())
            }
            SeriesFamily::HyperSq { alpha, beta, w } => {
                write!(f, "hyper a={alpha} b={beta} w={w}")
            }
        }
    }
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn take<'a>(fields: &mut BTreeMap<&'a str, &'a str>, key: &str, kind: &str) -> Result<&'a str> {
    fields
        .remove(key)
        .ok_or_else(|| parse_err(format!("{kind} needs {key}=…")))
}

fn parse_u32(key: &str, v: &str) -> Result<u32> {
    v.parse::<u32>()
        .map_err(|_| parse_err(format!("{key}={v}: expected a non-negative integer")))
}

/// Accepts `3`, `5/2` or `-1/2`.
pub(crate) fn parse_rational(key: &str, v: &str) -> Result<Rational> {
    let bad = || parse_err(format!("{key}={v}: expected an integer or p/q"));
    let (num, den) = match v.split_once('/') {
        Some((a, b)) => (a.parse::<i64>().map_err(|_| bad())?, b.parse::<i64>().map_err(|_| bad())?),
        None => (v.parse::<i64>().map_err(|_| bad())?, 1),
    };
    if den <= 0 {
        return Err(bad());
    }
    Ok(Rational::from((num, den)))
}

impl FromStr for SeriesFamily {
    type Err = Error;

    /// `<kind> key=value …`, whitespace separated, keys in any order.
    ///
    /// Syntax problems are parse errors; well-formed families that violate an
    /// invariant are domain errors.
    fn from_str(s: &str) -> Result<Self> {
        let mut words = s.split_whitespace();
        let kind = words.next().ok_or_else(|| parse_err("empty family"))?;
        let mut fields = BTreeMap::new();
        for w in words {
            let (k, v) = w
                .split_once('=')
                .ok_or_else(|| parse_err(format!("expected key=value, got `{w}`")))?;
            if fields.insert(k, v).is_some() {
                return Err(parse_err(format!("duplicate key `{k}`")));
            }
        }
        let fam = match kind {
            "odd-sq" | "even-sq" => {
                let p = parse_u32("p", take(&mut fields, "p", kind)?)?;
                let e = parse_u32("e", take(&mut fields, "e", kind)?)?;
                if kind == "odd-sq" {
                    SeriesFamily::OddBesselSq { p, e }
                } else {
                    SeriesFamily::EvenBesselSq { p, e }
                }
            }
            "odd-prod" | "even-prod" | "alln-prod" => {
                let p = parse_u32("p", take(&mut fields, "p", kind)?)?;
                let q = parse_u32("q", take(&mut fields, "q", kind)?)?;
                let e = parse_u32("e", take(&mut fields, "e", kind)?)?;
                let parity = match kind {
                    "odd-prod" => Parity::Odd,
                    "even-prod" => Parity::Even,
                    _ => Parity::All,
                };
                SeriesFamily::bessel(parity, p, q, e)
            }
            "hyper" => {
                let alpha = parse_rational("a", take(&mut fields, "a", kind)?)?;
                let beta = parse_rational("b", take(&mut fields, "b", kind)?)?;
                let w = parse_u32("w", take(&mut fields, "w", kind)?)?;
                SeriesFamily::HyperSq { alpha, beta, w }
            }
            other => return Err(parse_err(format!("unknown family kind `{other}`"))),
        };
        if let Some(k) = fields.keys().next() {
            return Err(parse_err(format!("unexpected key `{k}` for {kind}")));
        }
        fam.validate()?;
        Ok(fam)
    }
}

impl Serialize for SeriesFamily {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SeriesFamily {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
