//! Formal linear combinations of diagrams modulo AS.

use std::collections::BTreeMap;
use std::fmt;

use num::Zero;
use serde::Serialize;

use crate::canon::{canonicalize, canonicalize_directed, DiagramKey};
use crate::diagram::{DirectedJacobiDiagram, JacobiDiagram};
use crate::rational::{self, Q};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DiagramSum {
    terms: BTreeMap<DiagramKey, Q>,
}

impl DiagramSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(d: &JacobiDiagram) -> Self {
        let mut s = Self::new();
        s.add_diagram(d, &rational::one());
        s
    }

    pub fn single_directed(d: &DirectedJacobiDiagram) -> Self {
        let mut s = Self::new();
        s.add_directed(d, &rational::one());
        s
    }

    pub fn add_key(&mut self, key: DiagramKey, c: &Q) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(key);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_diagram(&mut self, d: &JacobiDiagram, c: &Q) {
        let can = canonicalize(d);
        self.add_key(can.key, &(c * Q::from_integer(can.sign.into())));
    }

    pub fn add_directed(&mut self, d: &DirectedJacobiDiagram, c: &Q) {
        let can = canonicalize_directed(d);
        self.add_key(can.key, &(c * Q::from_integer(can.sign.into())));
    }

    pub fn add_sum(&mut self, other: &DiagramSum, c: &Q) {
        for (k, v) in &other.terms {
            self.add_key(k.clone(), &(v * c));
        }
    }

    pub fn scaled(&self, c: &Q) -> Self {
        let mut s = Self::new();
        s.add_sum(self, c);
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, key: &DiagramKey) -> Q {
        self.terms.get(key).cloned().unwrap_or_else(rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&DiagramKey, &Q)> {
        self.terms.iter()
    }

    pub fn to_json(&self) -> Vec<SumTermJson> {
        self.terms
            .iter()
            .map(|(k, c)| SumTermJson { key: k.to_string(), coefficient: rational::to_string(c) })
            .collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SumTermJson {
    pub key: String,
    pub coefficient: String,
}

impl fmt::Display for DiagramSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({})[{k}]", rational::to_string(c))?;
        }
        Ok(())
    }
}
