//! JSON formats for problem inputs and certificate files.
//!
//! Ring elements are arrays of non-negative integers below `ℓ^N`, the
//! coefficients of `1, x, x², …` in the power basis of the defining
//! polynomial (lowest degree first). A bare integer stands for a constant.

use std::fs;
use std::io::Write;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groups::{build_family, inertia_split, FamilySpec, FiniteGroup, GroupError, InertiaStructure};
use crate::linalg::{invariant_forms, KMatrix, LinalgError, OKMatrix, Parity};
use crate::modrep::{rep_from_input, ModrepError, Representation};
use crate::padic::{OKElem, PadicError, RingParams, RingSpec};
use crate::scenarios::{build_demo, Demo, DemoFamily, ScenarioError};
use crate::symplectic::{AssertionLedger, SymplecticCertificate, SymplecticError, VerificationReport};

pub const DEFAULT_PRECISION: u32 = 16;
pub const MIN_EMBED_PRECISION: u32 = 8;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot access {path}: {source}")]
    File { path: String, source: std::io::Error },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Modrep(#[from] ModrepError),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Symplectic(#[from] SymplecticError),
}

pub type Result<T> = std::result::Result<T, IoError>;

/// A ring element: a constant or a coefficient vector. Negative integers are
/// accepted on input and reduced mod `ℓ^N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EntryJson {
    Int(i64),
    Coeffs(Vec<i64>),
}

/// `ℓ^shift · coeffs`, with `coeffs` given row by row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub coeffs: Vec<Vec<EntryJson>>,
    #[serde(default)]
    pub shift: i32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupInput {
    Table { order: usize, table: Vec<Vec<usize>> },
    Family { family: FamilySpec },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorImage {
    pub element: u32,
    pub matrix: MatrixJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RepInput {
    Explicit { dim: usize, generator_images: Vec<GeneratorImage> },
    /// One of the demo families; the group and form come from the builder.
    Builder { builder: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemInput {
    pub ell: u64,
    #[serde(default = "one")]
    pub unramified_degree: usize,
    #[serde(default = "default_precision")]
    pub precision: u32,
    /// Ignored for builder inputs.
    #[serde(default)]
    pub group: Option<GroupInput>,
    #[serde(default)]
    pub h: Option<Vec<u32>>,
    #[serde(default)]
    pub c: Option<u32>,
    pub rep: RepInput,
    /// Invariant alternating form; found by search when absent.
    #[serde(default)]
    pub form: Option<MatrixJson>,
}

fn one() -> usize {
    1
}

fn default_precision() -> u32 {
    DEFAULT_PRECISION
}

/// A parsed problem, ready for the embedding.
#[derive(Clone, Debug)]
pub struct Problem {
    pub ring: RingSpec,
    pub structure: InertiaStructure,
    pub rep: Representation,
    pub form: KMatrix,
}

fn entry(ring: &RingSpec, e: &EntryJson) -> OKElem {
    match e {
        EntryJson::Int(v) => ring.from_int(*v),
        EntryJson::Coeffs(c) => ring.from_signed_coeffs(c),
    }
}

impl MatrixJson {
    pub fn to_kmatrix(&self, ring: &RingSpec, dim: usize) -> Result<KMatrix> {
        if self.coeffs.len() != dim || self.coeffs.iter().any(|r| r.len() != dim) {
            return Err(IoError::Invalid(format!("expected a {dim}x{dim} matrix")));
        }
        let data = self.coeffs.iter().flatten().map(|e| entry(ring, e)).collect();
        Ok(KMatrix::new(ring, OKMatrix::from_data(dim, dim, data, ring.precision()), self.shift))
    }

    pub fn from_okmatrix(ring: &RingSpec, m: &OKMatrix) -> Self {
        let coeffs = (0..m.rows())
            .map(|i| {
                (0..m.cols())
                    .map(|j| EntryJson::Coeffs(ring.coeffs(m.get(i, j)).iter().map(|&c| c as i64).collect()))
                    .collect()
            })
            .collect();
        MatrixJson { coeffs, shift: 0 }
    }
}

impl ProblemInput {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&read(path)?)
    }

    /// Build the ring, the inertia structure, the representation and the form.
    pub fn resolve(&self, seed: u64) -> Result<Problem> {
        if self.precision < MIN_EMBED_PRECISION {
            return Err(IoError::Invalid(format!("precision {} below the minimum {MIN_EMBED_PRECISION}", self.precision)));
        }
        let (dim, gens) = match &self.rep {
            RepInput::Builder { builder } => return self.resolve_builder(builder, seed),
            RepInput::Explicit { dim, generator_images } => (*dim, generator_images),
        };
        if dim % 2 == 1 {
            return Err(IoError::Invalid(format!("dimension {dim} is odd")));
        }
        let ring = RingSpec::new(self.ell, self.unramified_degree, self.precision)?;
        let group = match self.group.as_ref().ok_or_else(|| IoError::Invalid("missing group".into()))? {
            GroupInput::Table { order, table } => {
                if table.len() != *order {
                    return Err(IoError::Invalid(format!("table has {} rows, order is {order}", table.len())));
                }
                FiniteGroup::from_table(table)?
            }
            GroupInput::Family { family } => build_family(family)?,
        };
        let structure = match (&self.h, self.c) {
            (Some(h), Some(c)) => InertiaStructure::new(group.clone(), self.ell, h.clone(), c)?,
            (None, None) => inertia_split(&group, self.ell)?,
            _ => return Err(IoError::Invalid("give both h and c, or neither".into())),
        };
        let images = gens
            .iter()
            .map(|g| Ok((g.element, g.matrix.to_kmatrix(&ring, dim)?)))
            .collect::<Result<Vec<_>>>()?;
        let rep = rep_from_input(&ring, &group, &images)?;
        let form = match &self.form {
            Some(f) => f.to_kmatrix(&ring, dim)?,
            None => search_form(&ring, &rep, seed)?,
        };
        Ok(Problem { ring, structure, rep, form })
    }

    fn resolve_builder(&self, name: &str, seed: u64) -> Result<Problem> {
        let family: DemoFamily = name.parse()?;
        match build_demo(family, Some(self.ell), self.precision, seed)? {
            Demo::Embed(p) => Ok(Problem { ring: p.ring, structure: p.structure, rep: p.rep, form: p.form }),
            Demo::Extension(_) => Err(IoError::Invalid(format!("{name} is an extension problem, not an embedding input"))),
        }
    }
}

/// A random nondegenerate combination of the invariant alternating forms.
fn search_form(ring: &RingSpec, rep: &Representation, seed: u64) -> Result<KMatrix> {
    let forms = invariant_forms(ring, &rep.images, Parity::Alternating);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..64 {
        let mut f = OKMatrix::zeros(ring, rep.dim, rep.dim);
        for g in &forms {
            f = f.add(ring, &g.scale(ring, &ring.random(&mut rng)));
        }
        if ring.valuation(&f.det(ring)).is_some() {
            return Ok(KMatrix::from_integral(f));
        }
    }
    Err(IoError::Invalid("no nondegenerate invariant alternating form".into()))
}

/// Self-contained serialization of a certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateFile {
    pub version: String,
    pub seed: u64,
    pub ring: RingParams,
    pub group: Vec<Vec<usize>>,
    pub h: Vec<u32>,
    pub c: u32,
    pub dim: usize,
    /// Image of every group element, indexed by element: rows of entries,
    /// each entry a coefficient vector.
    pub images: Vec<Vec<Vec<Vec<u64>>>>,
    pub gram: Vec<Vec<Vec<u64>>>,
    pub ledger: AssertionLedger,
    pub report: VerificationReport,
}

fn grid(ring: &RingSpec, m: &OKMatrix) -> Vec<Vec<Vec<u64>>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| ring.coeffs(m.get(i, j)).to_vec()).collect()).collect()
}

fn from_grid(ring: &RingSpec, g: &[Vec<Vec<u64>>], dim: usize) -> Result<OKMatrix> {
    if g.len() != dim || g.iter().any(|r| r.len() != dim) {
        return Err(IoError::Invalid(format!("expected a {dim}x{dim} grid")));
    }
    let mut data = Vec::with_capacity(dim * dim);
    for c in g.iter().flatten() {
        let x = ring.from_coeffs(c);
        if c.len() != ring.degree() || ring.coeffs(&x) != c.as_slice() {
            return Err(IoError::Invalid(format!("entry {c:?} is not a reduced element")));
        }
        data.push(x);
    }
    Ok(OKMatrix::from_data(dim, dim, data, ring.precision()))
}

impl CertificateFile {
    pub fn new(cert: &SymplecticCertificate, report: VerificationReport, seed: u64) -> Self {
        let ring = &cert.ring;
        CertificateFile {
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            ring: ring.params(),
            group: cert.group().rows(),
            h: cert.structure.h.clone(),
            c: cert.structure.c,
            dim: cert.dim,
            images: cert.images.iter().map(|m| grid(ring, m)).collect(),
            gram: grid(ring, &cert.gram),
            ledger: cert.ledger.clone(),
            report,
        }
    }

    /// Rebuild the certificate. Only the shape is validated here; the
    /// mathematical checks belong to the verifier.
    pub fn to_certificate(&self) -> Result<SymplecticCertificate> {
        let ring = RingSpec::from_params(&self.ring)?;
        let group = FiniteGroup::from_table(&self.group)?;
        if self.images.len() != group.order() {
            return Err(IoError::Invalid(format!("{} images for a group of order {}", self.images.len(), group.order())));
        }
        let structure = InertiaStructure::new(group, ring.ell(), self.h.clone(), self.c)?;
        let images = self.images.iter().map(|g| from_grid(&ring, g, self.dim)).collect::<Result<Vec<_>>>()?;
        let gram = from_grid(&ring, &self.gram, self.dim)?;
        Ok(SymplecticCertificate { ring, structure, dim: self.dim, images, gram, ledger: self.ledger.clone() })
    }

    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("certificate serializes");
        let mut out = String::new();
        format_value(&value, 0, &mut out);
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&read(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        write_atomic(path, self.to_json().as_bytes())
    }
}

/// Nesting depth of arrays, or `None` if `v` contains an object.
fn array_depth(v: &serde_json::Value) -> Option<usize> {
    match v {
        serde_json::Value::Array(xs) => xs.iter().try_fold(1, |d, x| Some(d.max(1 + array_depth(x)?))),
        serde_json::Value::Object(_) => None,
        _ => Some(0),
    }
}

/// Indented JSON with shallow arrays (matrix rows, table rows) kept on one
/// line.
fn format_value(v: &serde_json::Value, indent: usize, out: &mut String) {
    use serde_json::Value;
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Array(xs) if !xs.is_empty() && array_depth(v).is_none_or(|d| d > 2) => {
            out.push_str("[\n");
            for (i, x) in xs.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                format_value(x, indent + 1, out);
                out.push_str(if i + 1 < xs.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(m) if !m.is_empty() => {
            out.push_str("{\n");
            for (i, (k, x)) in m.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                format_value(x, indent + 1, out);
                out.push_str(if i + 1 < m.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        _ => out.push_str(&v.to_string()),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| IoError::File { path: path.display().to_string(), source })
}

/// Write through a temporary file in the target directory, then rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let err = |source| IoError::File { path: path.display().to_string(), source };
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(err)?;
    tmp.write_all(bytes).map_err(err)?;
    tmp.persist(path).map_err(|e| err(e.error))?;
    Ok(())
}
