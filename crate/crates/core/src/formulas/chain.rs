//! Series solved one state at a time.
//!
//! States are visited by increasing `α + β`, then increasing `|α − β|`. Each
//! state's identity brings exactly one series not seen before; the others
//! were solved by earlier states, so the new one follows by elimination.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use rug::Rational;

use super::bessel_form::bessel_conversion;
use super::family::SeriesFamily;
use crate::error::{Error, Result};
use crate::exactval::{ExactSum, ExactValue};

/// Largest `ν = min(α, β) + 1/2` in the chain.
pub const NU_MAX: i64 = 10;

/// Largest `α + β` in the chain.
pub const SUM_MAX: i64 = 2 * NU_MAX - 1;

/// One solved series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainNode {
    pub alpha: Rational,
    pub beta: Rational,
    pub family: SeriesFamily,
    pub value: ExactValue,
    /// Earlier series the elimination used.
    pub consumes: Vec<SeriesFamily>,
}

fn chain_states() -> Vec<(Rational, Rational)> {
    let mut states = Vec::new();
    for sum in 1..=SUM_MAX {
        for d in 0..=2i64 {
            // α = (sum − d)/2 must be a half-integer ≥ 1/2 with ν ≤ NU_MAX
            let twice_alpha = sum - d;
            if twice_alpha < 1 || twice_alpha % 2 == 0 || (twice_alpha + 1) / 2 > NU_MAX {
                continue;
            }
            let alpha = Rational::from((twice_alpha, 2));
            let beta = Rational::from(&alpha + d);
            states.push((alpha, beta));
        }
    }
    states
}

fn build() -> Result<Vec<ChainNode>> {
    let mut solved: BTreeMap<SeriesFamily, ExactValue> = BTreeMap::new();
    let mut nodes = Vec::new();
    for (alpha, beta) in chain_states() {
        let id = bessel_conversion(&alpha, &beta)?;
        let mut rest = id.rhs.clone();
        let mut unknown = Vec::new();
        let mut consumes = Vec::new();
        for (f, c) in &id.terms {
            match solved.get(f) {
                Some(v) => {
                    rest = rest - ExactSum::from(c * v);
                    consumes.push(f.clone());
                }
                None => unknown.push((f.clone(), c.clone())),
            }
        }
        let (family, coeff) = match unknown.as_slice() {
            [one] => one.clone(),
            _ => {
                return Err(Error::Algebra(format!(
                    "state ({alpha}, {beta}) leaves {} unsolved series",
                    unknown.len()
                )))
            }
        };
        let value = rest.checked_div(&coeff)?.as_single().ok_or_else(|| {
            Error::Algebra(format!("{family} does not reduce to a single monomial"))
        })?;
        solved.insert(family.clone(), value.clone());
        nodes.push(ChainNode {
            alpha,
            beta,
            family,
            value,
            consumes,
        });
    }
    Ok(nodes)
}

static CHAIN: OnceLock<Result<Vec<ChainNode>>> = OnceLock::new();

/// All solved series, in solving order. Built once per process.
pub fn chain_nodes() -> Result<&'static [ChainNode]> {
    match CHAIN.get_or_init(build) {
        Ok(v) => Ok(v.as_slice()),
        Err(e) => Err(e.clone()),
    }
}

/// The node that solved `f`, if any.
pub fn chain_node(f: &SeriesFamily) -> Option<&'static ChainNode> {
    let f = f.canonical();
    chain_nodes().ok()?.iter().find(|n| n.family == f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_nodes() {
        let nodes = chain_nodes().unwrap();
        assert_eq!(nodes[0].family, SeriesFamily::OddBesselSq { p: 1, e: 2 });
        assert_eq!(nodes[0].value, ExactValue::frac(1, 3));
        assert!(nodes[0].consumes.is_empty());
        assert_eq!(nodes[1].family, SeriesFamily::EvenBesselSq { p: 2, e: 2 });
        assert_eq!(nodes[1].value, ExactValue::frac(1, 15));
        assert_eq!(nodes[1].consumes, vec![SeriesFamily::OddBesselSq { p: 1, e: 2 }]);
    }

    #[test]
    fn every_state_solves_a_distinct_series() {
        let nodes = chain_nodes().unwrap();
        assert_eq!(nodes.len(), 10 + 9 + 9);
        let mut seen = std::collections::BTreeSet::new();
        for n in nodes {
            assert!(seen.insert(n.family.clone()), "{} solved twice", n.family);
            for c in &n.consumes {
                assert!(seen.contains(c), "{} used before it was solved", c);
            }
        }
    }

    #[test]
    fn lookup_canonicalizes() {
        let f = SeriesFamily::OddBesselProd { p: 2, q: 1, e: 3 };
        let node = chain_node(&f).unwrap();
        assert_eq!(node.value, ExactValue::new(Rational::from((2, 45)), 2));
    }
}
