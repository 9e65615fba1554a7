//! JSON documents for algebras, relations and single operations.
//!
//! Values in documents are 0-based domain elements. A lone operation may
//! omit `domain_size` when it can be recovered from `values.len() = t^arity`.

use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, Domain, OperationTable, Relation};
use crate::error::{Error, Result};
use crate::Element;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperationDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain_size: Option<usize>,
    pub arity: usize,
    pub values: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDoc {
    pub domain_size: usize,
    pub operations: Vec<OperationDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationDoc {
    pub domain_size: usize,
    pub arity: usize,
    pub tuples: Vec<Vec<u64>>,
}

fn parse<T: for<'de> Deserialize<'de>>(what: &str, text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("{what}: {e}")))
}

fn element(domain: Domain, v: u64) -> Result<Element> {
    match Element::try_from(v) {
        Ok(x) if (x as usize) < domain.size() => Ok(x),
        _ => Err(Error::DomainViolation {
            value: v.min(usize::MAX as u64) as usize,
            size: domain.size(),
        }),
    }
}

fn elements(domain: Domain, vs: &[u64]) -> Result<Vec<Element>> {
    vs.iter().map(|&v| element(domain, v)).collect()
}

/// Smallest `t` with `t^arity = len`, if any.
fn infer_domain_size(arity: usize, len: usize) -> Option<usize> {
    if arity == 0 {
        return None;
    }
    (1..=256usize).find(|t| u32::try_from(arity).ok().and_then(|a| t.checked_pow(a)) == Some(len))
}

impl OperationDoc {
    pub fn from_table(f: &OperationTable, name: Option<&str>) -> Self {
        OperationDoc {
            name: name.map(str::to_string),
            domain_size: Some(f.domain().size()),
            arity: f.arity(),
            values: f.values().iter().map(|&v| v as u64).collect(),
        }
    }

    /// Builds the table, taking the domain from `domain`, the document, or
    /// the table length, in that order.
    pub fn to_table(&self, domain: Option<Domain>) -> Result<OperationTable> {
        let size = match (domain, self.domain_size) {
            (Some(d), Some(s)) if d.size() != s => {
                return Err(Error::DomainMismatch {
                    left: d.size(),
                    right: s,
                })
            }
            (Some(d), _) => d.size(),
            (None, Some(s)) => s,
            (None, None) => infer_domain_size(self.arity, self.values.len()).ok_or_else(|| {
                Error::InvalidInput("operation needs domain_size: it cannot be inferred from its table".into())
            })?,
        };
        let domain = Domain::new(size)?;
        OperationTable::new(domain, self.arity, elements(domain, &self.values)?)
    }
}

impl AlgebraDoc {
    pub fn from_algebra(alg: &Algebra) -> Self {
        AlgebraDoc {
            domain_size: alg.domain().size(),
            operations: alg
                .operations()
                .iter()
                .zip(alg.names())
                .map(|(f, n)| {
                    let mut doc = OperationDoc::from_table(f, Some(n));
                    doc.domain_size = None;
                    doc
                })
                .collect(),
        }
    }

    pub fn to_algebra(&self) -> Result<Algebra> {
        let domain = Domain::new(self.domain_size)?;
        let mut ops = Vec::with_capacity(self.operations.len());
        let mut names = Vec::with_capacity(self.operations.len());
        for (i, doc) in self.operations.iter().enumerate() {
            ops.push(
                doc.to_table(Some(domain))
                    .map_err(|e| Error::InvalidInput(format!("operation {i}: {e}")))?,
            );
            names.push(doc.name.clone().unwrap_or_else(|| format!("f{i}")));
        }
        Algebra::with_names(domain, ops, names)
    }
}

impl RelationDoc {
    pub fn from_relation(r: &Relation) -> Self {
        RelationDoc {
            domain_size: r.domain().size(),
            arity: r.arity(),
            tuples: r.iter().map(|t| t.iter().map(|&v| v as u64).collect()).collect(),
        }
    }

    pub fn to_relation(&self) -> Result<Relation> {
        let domain = Domain::new(self.domain_size)?;
        let tuples = self
            .tuples
            .iter()
            .map(|t| elements(domain, t))
            .collect::<Result<Vec<_>>>()?;
        Relation::new(domain, self.arity, tuples)
    }
}

pub fn parse_algebra(text: &str) -> Result<Algebra> {
    parse::<AlgebraDoc>("algebra", text)?.to_algebra()
}

pub fn parse_relation(text: &str) -> Result<Relation> {
    parse::<RelationDoc>("relation", text)?.to_relation()
}

/// A single operation, on `domain` if given.
pub fn parse_operation(text: &str, domain: Option<Domain>) -> Result<OperationTable> {
    parse::<OperationDoc>("operation", text)?.to_table(domain)
}

/// Generators given either as an algebra document, a single operation or
/// a list of operations.
pub fn parse_generators(text: &str) -> Result<Algebra> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Gens {
        Algebra(AlgebraDoc),
        One(OperationDoc),
        Many(Vec<OperationDoc>),
    }
    let docs = match parse::<Gens>("generators", text)? {
        Gens::Algebra(a) => return a.to_algebra(),
        Gens::One(op) => vec![op],
        Gens::Many(ops) => ops,
    };
    let mut ops = Vec::with_capacity(docs.len());
    let mut names = Vec::with_capacity(docs.len());
    let mut domain = None;
    for (i, doc) in docs.iter().enumerate() {
        let f = doc.to_table(domain)?;
        domain = Some(f.domain());
        ops.push(f);
        names.push(doc.name.clone().unwrap_or_else(|| format!("f{i}")));
    }
    let domain = domain.ok_or_else(|| Error::InvalidInput("generators: empty operation list".into()))?;
    Algebra::with_names(domain, ops, names)
}
