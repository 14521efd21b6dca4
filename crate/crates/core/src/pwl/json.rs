//! Wire format for combinations:
//! `{"n": 2, "terms": [{"coeff": "p/q", "max": [{"grad": ["p/q", ..], "const": "p/q"}, ..]}, ..]}`.
//!
//! Terms and constituents are written in canonical order.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Result;
use crate::pwl::{AffineFunc, LinComb, MaxTerm};
use crate::rational::{serde_str, Rational};

#[derive(Serialize, Deserialize)]
struct AffineWire {
    #[serde(with = "serde_str::vec")]
    grad: Vec<Rational>,
    #[serde(rename = "const", with = "serde_str")]
    constant: Rational,
}

#[derive(Serialize, Deserialize)]
struct TermWire {
    #[serde(with = "serde_str")]
    coeff: Rational,
    max: Vec<AffineWire>,
}

#[derive(Serialize, Deserialize)]
struct LinCombWire {
    n: usize,
    terms: Vec<TermWire>,
}

impl From<&AffineFunc> for AffineWire {
    fn from(f: &AffineFunc) -> Self {
        AffineWire {
            grad: f.gradient().to_vec(),
            constant: f.constant().clone(),
        }
    }
}

impl Serialize for AffineFunc {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        AffineWire::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for AffineFunc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = AffineWire::deserialize(d)?;
        AffineFunc::new(w.grad, w.constant).map_err(serde::de::Error::custom)
    }
}

impl Serialize for LinComb {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let canonical = self.canonicalize();
        LinCombWire {
            n: canonical.dim(),
            terms: canonical
                .terms()
                .iter()
                .map(|(c, t)| TermWire {
                    coeff: c.clone(),
                    max: t.constituents().iter().map(AffineWire::from).collect(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LinComb {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = LinCombWire::deserialize(d)?;
        let mut terms = Vec::with_capacity(w.terms.len());
        for t in w.terms {
            let constituents = t
                .max
                .into_iter()
                .map(|a| AffineFunc::new(a.grad, a.constant))
                .collect::<Result<Vec<_>>>()
                .map_err(D::Error::custom)?;
            terms.push((t.coeff, MaxTerm::new(constituents).map_err(D::Error::custom)?));
        }
        LinComb::new(w.n, terms).map_err(D::Error::custom)
    }
}

impl LinComb {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("combination serializes")
    }

    pub fn from_json(text: &str) -> Result<LinComb> {
        Ok(serde_json::from_str(text)?)
    }
}
