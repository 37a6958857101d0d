//! File formats. Input documents are JSON with every rational written as a
//! string (`"3/2"`) or an integer; floats are rejected at the boundary so
//! exactness survives the round trip. Indices in files are 1-based to match
//! the basis labels used in reports.

use crate::algebra::{AlgebraError, NilpotentLieAlgebra};
use crate::graph::{DirectedGraph, GraphError};
use crate::heintze::{HeintzeData, HeintzeError};
use crate::linalg::Matrix;
use crate::rational::{fmt_rat, parse_rat, rat, Rat};
use crate::spectral::{Derivation, SpectralError};
use serde::de::Visitor;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::sync::Arc;

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid algebra: {0}")]
    Algebra(#[from] AlgebraError),
    #[error("invalid graph: {0}")]
    Graph(#[from] GraphError),
    #[error("invalid derivation: {0}")]
    Spectral(#[from] SpectralError),
    #[error("not a Heintze datum: {0}")]
    Heintze(#[from] HeintzeError),
    #[error("index {0} is out of range 1..={1}")]
    IndexOutOfRange(usize, usize),
    #[error("this command needs a derivation; add weights or a matrix to the document")]
    MissingDerivation,
    #[error("this command needs a single datum, but the document is a pair")]
    UnexpectedPair,
    #[error("a pair document cannot nest another pair")]
    NestedPair,
}

/// Exact rational at the file boundary: serialized as `"p/q"` (or `"p"`),
/// deserialized from such strings or from JSON integers — never floats.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExactRat(pub Rat);

impl From<Rat> for ExactRat {
    fn from(q: Rat) -> Self {
        ExactRat(q)
    }
}

impl From<&Rat> for ExactRat {
    fn from(q: &Rat) -> Self {
        ExactRat(q.clone())
    }
}

impl Serialize for ExactRat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rat(&self.0))
    }
}

impl<'de> Deserialize<'de> for ExactRat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct RatVisitor;
        impl Visitor<'_> for RatVisitor {
            type Value = ExactRat;
            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("an exact rational as a string \"p/q\" or an integer")
            }
            fn visit_str<E: serde::de::Error>(self, v: &str) -> Result<ExactRat, E> {
                parse_rat(v).map(ExactRat).map_err(E::custom)
            }
            fn visit_i64<E: serde::de::Error>(self, v: i64) -> Result<ExactRat, E> {
                Ok(ExactRat(rat(v)))
            }
            fn visit_u64<E: serde::de::Error>(self, v: u64) -> Result<ExactRat, E> {
                i64::try_from(v).map(|n| ExactRat(rat(n))).map_err(E::custom)
            }
            fn visit_f64<E: serde::de::Error>(self, v: f64) -> Result<ExactRat, E> {
                Err(E::custom(format!(
                    "floats are not exact: write {v} as a \"p/q\" string"
                )))
            }
        }
        d.deserialize_any(RatVisitor)
    }
}

/// One structure constant `[left, right] = value * target` (1-based).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BracketEntry {
    pub left: usize,
    pub right: usize,
    pub target: usize,
    pub value: ExactRat,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraDocument {
    pub dimension: usize,
    #[serde(default)]
    pub brackets: Vec<BracketEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DerivationDocument {
    pub algebra: AlgebraDocument,
    /// Row-major matrix of the derivation in the algebra's basis.
    pub matrix: Vec<Vec<ExactRat>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub vertices: usize,
    /// Directed edges as 1-based `[source, target]` pairs.
    pub edges: Vec<(usize, usize)>,
    /// Positive vertex weights; present when the document describes a
    /// Heintze datum rather than a bare algebra.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<ExactRat>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairDocument {
    pub left: Box<InputDocument>,
    pub right: Box<InputDocument>,
}

/// Any file the CLI accepts, discriminated by its `kind` field.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum InputDocument {
    Algebra(AlgebraDocument),
    Derivation(DerivationDocument),
    Graph(GraphDocument),
    Pair(PairDocument),
}

/// What a document denotes once validated.
#[derive(Debug)]
pub enum LoadedData {
    /// An algebra with no derivation attached.
    Algebra(Arc<NilpotentLieAlgebra>),
    Heintze(Box<HeintzeData>),
    Pair(Box<HeintzeData>, Box<HeintzeData>),
}

fn to_index(i: usize, dim: usize) -> Result<usize, IoError> {
    if i == 0 || i > dim {
        return Err(IoError::IndexOutOfRange(i, dim));
    }
    Ok(i - 1)
}

impl AlgebraDocument {
    pub fn build(&self) -> Result<Arc<NilpotentLieAlgebra>, IoError> {
        let mut triples = Vec::with_capacity(self.brackets.len());
        for b in &self.brackets {
            triples.push((
                to_index(b.left, self.dimension)?,
                to_index(b.right, self.dimension)?,
                to_index(b.target, self.dimension)?,
                b.value.0.clone(),
            ));
        }
        Ok(NilpotentLieAlgebra::new(self.dimension, &triples, self.labels.clone())?)
    }
}

impl DerivationDocument {
    pub fn build(&self) -> Result<Derivation, IoError> {
        let algebra = self.algebra.build()?;
        let rows: Vec<Vec<Rat>> = self
            .matrix
            .iter()
            .map(|r| r.iter().map(|c| c.0.clone()).collect())
            .collect();
        Ok(Derivation::new(algebra, Matrix::from_rows(rows))?)
    }
}

impl GraphDocument {
    pub fn build_graph(&self) -> Result<DirectedGraph, IoError> {
        let mut edges = Vec::with_capacity(self.edges.len());
        for &(u, v) in &self.edges {
            edges.push((to_index(u, self.vertices)?, to_index(v, self.vertices)?));
        }
        Ok(DirectedGraph::new(self.vertices, edges)?)
    }
}

impl InputDocument {
    pub fn parse(text: &str) -> Result<Self, IoError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Validates the document and builds the objects it denotes.
    pub fn build(&self) -> Result<LoadedData, IoError> {
        match self {
            InputDocument::Algebra(doc) => Ok(LoadedData::Algebra(doc.build()?)),
            InputDocument::Derivation(doc) => {
                let h = HeintzeData::new(doc.build()?)?;
                Ok(LoadedData::Heintze(Box::new(h)))
            }
            InputDocument::Graph(doc) => {
                let graph = doc.build_graph()?;
                match &doc.weights {
                    None => Ok(LoadedData::Algebra(graph.build_algebra())),
                    Some(w) => {
                        let weights: Vec<Rat> = w.iter().map(|x| x.0.clone()).collect();
                        let (_, d) = graph.weighted_algebra(&weights)?;
                        Ok(LoadedData::Heintze(Box::new(HeintzeData::new(d)?)))
                    }
                }
            }
            InputDocument::Pair(doc) => {
                let nested = |e| match e {
                    IoError::UnexpectedPair => IoError::NestedPair,
                    other => other,
                };
                let left = doc.left.build_single().map_err(nested)?;
                let right = doc.right.build_single().map_err(nested)?;
                Ok(LoadedData::Pair(left, right))
            }
        }
    }

    /// Builds a document that must denote one Heintze datum.
    pub fn build_single(&self) -> Result<Box<HeintzeData>, IoError> {
        if matches!(self, InputDocument::Pair(_)) {
            return Err(IoError::UnexpectedPair);
        }
        match self.build()? {
            LoadedData::Heintze(h) => Ok(h),
            LoadedData::Algebra(_) => Err(IoError::MissingDerivation),
            LoadedData::Pair(..) => unreachable!("non-pair documents never build to pairs"),
        }
    }
}
