//! JSON documents: representation / presentation inputs and emitted
//! complexes.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldChoice};
use crate::linalg::Matrix;
use crate::matroid::ElementSet;
use crate::multigraded::{render_monomial, FreeComplex, Generator, MultigradedPresentation, Poly, PolyMatrix};
use crate::report::Check;
use crate::tcomplex::{BasisLabel, Block, VectorSpaceComplex};

/// A scalar written either as a string `"p/q"` or as a JSON integer.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(untagged)]
pub enum ScalarText {
    Text(String),
    Int(i64),
}

impl ScalarText {
    fn as_text(&self) -> String {
        match self {
            ScalarText::Text(s) => s.clone(),
            ScalarText::Int(i) => i.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(untagged)]
pub enum RingVars {
    Names(Vec<String>),
    Count(usize),
}

/// Input document for every command except `verify` on an emitted complex.
#[derive(Clone, Debug, Default, PartialEq, Eq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct InputDoc {
    #[serde(default)]
    pub field: Option<String>,
    #[serde(default)]
    pub labels: Option<Vec<String>>,
    #[serde(default)]
    pub matrix: Option<Vec<Vec<ScalarText>>>,
    #[serde(default)]
    pub poly_matrix: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub ring_vars: Option<RingVars>,
    #[serde(default)]
    pub source_degrees: Option<Vec<Vec<u32>>>,
    #[serde(default)]
    pub target_degrees: Option<Vec<Vec<u32>>>,
}

/// Parsed input: the scalar matrix with labels, plus the presentation when
/// degrees are present.
#[derive(Clone, Debug)]
pub struct ParsedInput<F: Field> {
    pub labels: Vec<String>,
    pub matrix: Matrix<F>,
    pub presentation: Option<MultigradedPresentation<F>>,
}

impl InputDoc {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Field requested by the document (`QQ` when absent).
    pub fn field_choice(&self) -> Result<FieldChoice> {
        match &self.field {
            Some(s) => s.parse(),
            None => Ok(FieldChoice::Rationals),
        }
    }

    pub fn is_multigraded(&self) -> bool {
        self.poly_matrix.is_some() || self.source_degrees.is_some() || self.target_degrees.is_some()
    }

    fn vars(&self) -> Result<Vec<String>> {
        match &self.ring_vars {
            Some(RingVars::Names(v)) => Ok(v.clone()),
            Some(RingVars::Count(n)) => Ok((1..=*n).map(|i| format!("x{i}")).collect()),
            None => {
                let n = self
                    .target_degrees
                    .as_ref()
                    .and_then(|t| t.first())
                    .or_else(|| self.source_degrees.as_ref().and_then(|s| s.first()))
                    .map_or(0, |d| d.len());
                Ok((1..=n).map(|i| format!("x{i}")).collect())
            }
        }
    }

    pub fn parse<F: Field>(&self, field: &F) -> Result<ParsedInput<F>> {
        if self.matrix.is_some() == self.poly_matrix.is_some() {
            return Err(Error::Parse(
                "exactly one of \"matrix\" and \"poly_matrix\" is required".to_string(),
            ));
        }
        if let Some(poly) = &self.poly_matrix {
            let vars = self.vars()?;
            let cols = poly.first().map_or(0, |r| r.len());
            let labels = self.labels_for(cols)?;
            let targets = self
                .target_degrees
                .clone()
                .ok_or_else(|| Error::Parse("\"poly_matrix\" needs \"target_degrees\"".to_string()))?;
            let p = MultigradedPresentation::from_poly_matrix(
                field,
                vars,
                labels.clone(),
                poly,
                targets,
                self.source_degrees.clone(),
            )?;
            p.validate()?;
            return Ok(ParsedInput {
                labels,
                matrix: p.scalar.clone(),
                presentation: Some(p),
            });
        }
        let rows = self.matrix.as_ref().expect("checked above");
        let cols = match (rows.first(), &self.labels) {
            (Some(r), _) => r.len(),
            (None, Some(l)) => l.len(),
            (None, None) => 0,
        };
        let mut parsed = Vec::with_capacity(rows.len());
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Parse(format!(
                    "matrix row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            let mut out = Vec::with_capacity(cols);
            for (j, s) in row.iter().enumerate() {
                out.push(
                    field
                        .parse(&s.as_text())
                        .map_err(|e| Error::Parse(format!("matrix entry ({i},{j}): {e}")))?,
                );
            }
            parsed.push(out);
        }
        let matrix = Matrix::from_rows(field, cols, parsed)?;
        let labels = self.labels_for(cols)?;
        let presentation = if self.is_multigraded() {
            let sources = self
                .source_degrees
                .clone()
                .ok_or_else(|| Error::Parse("\"source_degrees\" missing".to_string()))?;
            let targets = self
                .target_degrees
                .clone()
                .ok_or_else(|| Error::Parse("\"target_degrees\" missing".to_string()))?;
            let p = MultigradedPresentation::new(self.vars()?, labels.clone(), matrix.clone(), sources, targets)?;
            p.validate()?;
            Some(p)
        } else {
            None
        };
        Ok(ParsedInput {
            labels,
            matrix,
            presentation,
        })
    }

    fn labels_for(&self, cols: usize) -> Result<Vec<String>> {
        let labels = match &self.labels {
            Some(l) if l.len() != cols => {
                return Err(Error::Parse(format!("{} labels for {cols} columns", l.len())));
            }
            Some(l) => l.clone(),
            None => (1..=cols).map(|i| i.to_string()).collect(),
        };
        let mut seen = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if let Some(prev) = seen.insert(l.clone(), i) {
                return Err(Error::Parse(format!("label {l:?} used for columns {prev} and {i}")));
            }
        }
        Ok(labels)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorDoc {
    pub block: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tflat: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub element: Option<String>,
    pub index: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentDoc {
    pub hdeg: usize,
    pub generators: Vec<GeneratorDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryDoc {
    pub coeff: String,
    pub exp: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poly: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixDoc {
    /// Source index: the map `C_hdeg -> C_(hdeg-1)`.
    pub hdeg: usize,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<EntryDoc>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainDoc {
    pub flats: Vec<Vec<String>>,
    pub vector: String,
}

/// A multiplicity space with its basis rendered as polynomials in `g1, g2, …`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicityDoc {
    pub tflat: Vec<String>,
    pub level: usize,
    pub dim: usize,
    pub basis: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chains: Option<Vec<ChainDoc>>,
}

pub const COMPLEX_FORMAT: &str = "tresolve-complex/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexDoc {
    pub format: String,
    /// `t_complex`, `augmented_t_complex` or `t_resolution`.
    pub kind: String,
    pub field: String,
    pub labels: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring_vars: Option<Vec<String>>,
    pub components: Vec<ComponentDoc>,
    pub differentials: Vec<MatrixDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplicity_spaces: Option<Vec<MultiplicityDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structural_checks: Option<Vec<Check>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checks: Option<Vec<Check>>,
}

impl ComplexDoc {
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ComplexDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if doc.format != COMPLEX_FORMAT {
            return Err(Error::Parse(format!("unsupported format {:?}", doc.format)));
        }
        Ok(doc)
    }

    pub fn is_resolution(&self) -> bool {
        self.kind == "t_resolution"
    }
}

fn label_doc(label: &BasisLabel, labels: &[String], degree: Option<Vec<u32>>) -> GeneratorDoc {
    let (block, tflat, element) = match label.block {
        Block::Ambient => ("ambient", None, None),
        Block::Element(a) => ("element", None, Some(labels[a].clone())),
        Block::TFlat(set) => (
            "tflat",
            Some(set.iter().map(|i| labels[i].clone()).collect()),
            None,
        ),
    };
    GeneratorDoc {
        block: block.to_string(),
        tflat,
        element,
        index: label.index,
        degree,
    }
}

fn label_from_doc(g: &GeneratorDoc, index: &HashMap<&str, usize>) -> Result<BasisLabel> {
    let lookup = |name: &str| {
        index
            .get(name)
            .copied()
            .ok_or_else(|| Error::Parse(format!("unknown label {name:?}")))
    };
    let block = match g.block.as_str() {
        "ambient" => Block::Ambient,
        "element" => Block::Element(lookup(
            g.element
                .as_deref()
                .ok_or_else(|| Error::Parse("element generator without \"element\"".to_string()))?,
        )?),
        "tflat" => {
            let names = g
                .tflat
                .as_ref()
                .ok_or_else(|| Error::Parse("tflat generator without \"tflat\"".to_string()))?;
            let mut set = ElementSet::EMPTY;
            for n in names {
                set = set.with(lookup(n)?);
            }
            Block::TFlat(set)
        }
        other => return Err(Error::Parse(format!("unknown block kind {other:?}"))),
    };
    Ok(BasisLabel {
        block,
        index: g.index,
    })
}

fn zero_entry() -> EntryDoc {
    EntryDoc {
        coeff: "0".to_string(),
        exp: None,
        poly: None,
    }
}

pub fn vector_space_complex_doc<F: Field>(c: &VectorSpaceComplex<F>, labels: &[String], kind: &str) -> ComplexDoc {
    let f = c.field();
    let components = (0..c.len())
        .map(|k| ComponentDoc {
            hdeg: k,
            generators: c.labels(k).iter().map(|l| label_doc(l, labels, None)).collect(),
        })
        .collect();
    let differentials = (1..c.len())
        .map(|k| {
            let d = c.differential(k).expect("in range");
            MatrixDoc {
                hdeg: k,
                rows: d.rows(),
                cols: d.cols(),
                entries: (0..d.rows())
                    .map(|i| {
                        (0..d.cols())
                            .map(|j| {
                                let v = d.get(i, j);
                                if f.is_zero(v) {
                                    zero_entry()
                                } else {
                                    EntryDoc {
                                        coeff: f.render(v),
                                        exp: None,
                                        poly: None,
                                    }
                                }
                            })
                            .collect()
                    })
                    .collect(),
            }
        })
        .collect();
    ComplexDoc {
        format: COMPLEX_FORMAT.to_string(),
        kind: kind.to_string(),
        field: f.name(),
        labels: labels.to_vec(),
        ring_vars: None,
        components,
        differentials,
        multiplicity_spaces: None,
        structural_checks: None,
        checks: None,
    }
}

pub fn free_complex_doc<F: Field>(c: &FreeComplex<F>, labels: &[String]) -> ComplexDoc {
    let f = &c.field;
    let components = c
        .components
        .iter()
        .enumerate()
        .map(|(k, gens)| ComponentDoc {
            hdeg: k,
            generators: gens
                .iter()
                .map(|g| label_doc(&g.label, labels, Some(g.degree.clone())))
                .collect(),
        })
        .collect();
    let differentials = c
        .differentials
        .iter()
        .enumerate()
        .map(|(k0, d)| MatrixDoc {
            hdeg: k0 + 1,
            rows: d.rows(),
            cols: d.cols(),
            entries: (0..d.rows())
                .map(|i| {
                    (0..d.cols())
                        .map(|j| match d.get(i, j).as_monomial() {
                            Some((coeff, exp)) => EntryDoc {
                                coeff: f.render(coeff),
                                exp: Some(exp.clone()),
                                poly: Some(render_monomial(f, coeff, exp, &c.vars)),
                            },
                            None => zero_entry(),
                        })
                        .collect()
                })
                .collect(),
        })
        .collect();
    ComplexDoc {
        format: COMPLEX_FORMAT.to_string(),
        kind: "t_resolution".to_string(),
        field: f.name(),
        labels: labels.to_vec(),
        ring_vars: Some(c.vars.clone()),
        components,
        differentials,
        multiplicity_spaces: None,
        structural_checks: None,
        checks: None,
    }
}

fn doc_labels(doc: &ComplexDoc) -> Result<Vec<Vec<BasisLabel>>> {
    let index: HashMap<&str, usize> = doc
        .labels
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i))
        .collect();
    if index.len() != doc.labels.len() {
        return Err(Error::Parse("duplicate labels".to_string()));
    }
    for (k, c) in doc.components.iter().enumerate() {
        if c.hdeg != k {
            return Err(Error::Parse(format!("component {k} has hdeg {}", c.hdeg)));
        }
    }
    doc.components
        .iter()
        .map(|c| c.generators.iter().map(|g| label_from_doc(g, &index)).collect())
        .collect()
}

fn check_matrix_doc(doc: &ComplexDoc, k0: usize, m: &MatrixDoc) -> Result<()> {
    let k = k0 + 1;
    if m.hdeg != k {
        return Err(Error::Parse(format!("differential {k0} has hdeg {}", m.hdeg)));
    }
    let rows = doc.components.get(k - 1).map_or(0, |c| c.generators.len());
    let cols = doc.components.get(k).map_or(0, |c| c.generators.len());
    if (m.rows, m.cols) != (rows, cols)
        || m.entries.len() != rows
        || m.entries.iter().any(|r| r.len() != cols)
    {
        return Err(Error::Parse(format!(
            "differential d_{k} must be {rows}x{cols}"
        )));
    }
    Ok(())
}

pub fn vector_space_complex_from_doc<F: Field>(field: &F, doc: &ComplexDoc) -> Result<VectorSpaceComplex<F>> {
    let components = doc_labels(doc)?;
    let mut diffs = Vec::new();
    for (k0, m) in doc.differentials.iter().enumerate() {
        check_matrix_doc(doc, k0, m)?;
        let mut mat = Matrix::zeros(field, m.rows, m.cols);
        for (i, row) in m.entries.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                mat.set(i, j, field.parse(&e.coeff)?);
            }
        }
        diffs.push(mat);
    }
    VectorSpaceComplex::new(field, components, diffs)
}

pub fn free_complex_from_doc<F: Field>(field: &F, doc: &ComplexDoc) -> Result<FreeComplex<F>> {
    let labels = doc_labels(doc)?;
    let vars = doc.ring_vars.clone().unwrap_or_default();
    let components: Vec<Vec<Generator>> = labels
        .into_iter()
        .zip(&doc.components)
        .map(|(ls, c)| {
            ls.into_iter()
                .zip(&c.generators)
                .map(|(label, g)| {
                    let degree = g
                        .degree
                        .clone()
                        .ok_or_else(|| Error::Parse("generator without degree".to_string()))?;
                    if degree.len() != vars.len() {
                        return Err(Error::Parse(format!(
                            "degree {degree:?} for {} variables",
                            vars.len()
                        )));
                    }
                    Ok(Generator { label, degree })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut diffs = Vec::new();
    for (k0, m) in doc.differentials.iter().enumerate() {
        check_matrix_doc(doc, k0, m)?;
        let mut pm = PolyMatrix::zeros(m.rows, m.cols);
        for (i, row) in m.entries.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                let c = field.parse(&e.coeff)?;
                if field.is_zero(&c) {
                    continue;
                }
                let exp = e
                    .exp
                    .clone()
                    .ok_or_else(|| Error::Parse(format!("d_{}[{i},{j}] has no exponent", k0 + 1)))?;
                if exp.len() != vars.len() {
                    return Err(Error::Parse(format!("d_{}[{i},{j}] exponent length", k0 + 1)));
                }
                pm.set(i, j, Poly::monomial(field, c, exp));
            }
        }
        diffs.push(pm);
    }
    if diffs.len() + 1 != components.len() && !(components.is_empty() && diffs.is_empty()) {
        return Err(Error::Parse("differential count does not match components".to_string()));
    }
    Ok(FreeComplex {
        field: field.clone(),
        vars,
        components,
        differentials: diffs,
    })
}
