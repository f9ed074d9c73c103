//! Square sparse matrices over an exact field, row-major.

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::arith::{Field, Scalar};
use crate::error::{Error, Result};

/// Rows are kept sorted by column, with no stored zeros, so structural
/// equality is matrix equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    dim: usize,
    field: Field,
    rows: Vec<Vec<(usize, Scalar)>>,
}

impl SparseMatrix {
    pub fn zero(dim: usize, field: Field) -> Self {
        SparseMatrix { dim, field, rows: vec![Vec::new(); dim] }
    }

    pub fn identity(dim: usize, field: Field) -> Self {
        Self::from_diagonal(field, (0..dim).map(|_| field.one()))
    }

    pub fn from_diagonal(field: Field, diag: impl IntoIterator<Item = Scalar>) -> Self {
        let rows: Vec<Vec<(usize, Scalar)>> = diag
            .into_iter()
            .enumerate()
            .map(|(i, v)| if v.is_zero() { Vec::new() } else { vec![(i, v)] })
            .collect();
        SparseMatrix { dim: rows.len(), field, rows }
    }

    /// Builds from `(row, col, value)` triplets; repeated positions are summed.
    pub fn from_triplets(dim: usize, field: Field, triplets: impl IntoIterator<Item = (usize, usize, Scalar)>) -> Result<Self> {
        let mut acc: Vec<BTreeMap<usize, Scalar>> = vec![BTreeMap::new(); dim];
        for (r, c, v) in triplets {
            if r >= dim || c >= dim {
                return Err(Error::InvalidParams(format!("entry ({r},{c}) outside a {dim}x{dim} matrix")));
            }
            if v.field() != field {
                return Err(Error::FieldMismatch(v.field(), field));
            }
            let slot = acc[r].entry(c).or_insert_with(|| field.zero());
            *slot += &v;
        }
        Ok(Self::from_maps(dim, field, acc))
    }

    fn from_maps(dim: usize, field: Field, maps: Vec<BTreeMap<usize, Scalar>>) -> Self {
        let rows = maps.into_iter().map(|m| m.into_iter().filter(|(_, v)| !v.is_zero()).collect()).collect();
        SparseMatrix { dim, field, rows }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    pub fn get(&self, row: usize, col: usize) -> Scalar {
        self.rows
            .get(row)
            .and_then(|r| r.binary_search_by_key(&col, |(c, _)| *c).ok().map(|k| r[k].1.clone()))
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn row(&self, row: usize) -> &[(usize, Scalar)] {
        &self.rows[row]
    }

    /// `(row, col, value)` in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> + '_ {
        self.rows.iter().enumerate().flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, c.to_owned(), v)))
    }

    fn check(&self, other: &SparseMatrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        if self.dim != other.dim {
            return Err(Error::InvalidParams(format!("dimension mismatch {} vs {}", self.dim, other.dim)));
        }
        Ok(())
    }

    pub fn add(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        self.check(other)?;
        let maps = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| {
                let mut m: BTreeMap<usize, Scalar> = a.iter().cloned().collect();
                for (c, v) in b {
                    let slot = m.entry(*c).or_insert_with(|| self.field.zero());
                    *slot += v;
                }
                m
            })
            .collect();
        Ok(Self::from_maps(self.dim, self.field, maps))
    }

    pub fn scale(&self, c: &Scalar) -> SparseMatrix {
        let maps = self.rows.iter().map(|row| row.iter().map(|(k, v)| (*k, v * c)).collect()).collect();
        Self::from_maps(self.dim, self.field, maps)
    }

    pub fn sub(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        self.add(&other.scale(&-self.field.one()))
    }

    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        self.check(other)?;
        let maps = self
            .rows
            .iter()
            .map(|row| {
                let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
                for (k, a) in row {
                    for (j, b) in &other.rows[*k] {
                        let slot = acc.entry(*j).or_insert_with(|| self.field.zero());
                        *slot += &(a * b);
                    }
                }
                acc
            })
            .collect();
        Ok(Self::from_maps(self.dim, self.field, maps))
    }

    pub fn pow(&self, e: u32) -> Result<SparseMatrix> {
        let mut out = Self::identity(self.dim, self.field);
        for _ in 0..e {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// Row-major dense flattening, used by span computations.
    pub fn to_dense_vec(&self) -> Vec<Scalar> {
        let mut out = vec![self.field.zero(); self.dim * self.dim];
        for (r, c, v) in self.entries() {
            out[r * self.dim + c] = v.clone();
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("matrices always serialize")
    }
}

impl Serialize for SparseMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let entries: Vec<(usize, usize, String)> = self.entries().map(|(r, c, v)| (r, c, v.to_string())).collect();
        let mut st = serializer.serialize_struct("SparseMatrix", 2)?;
        st.serialize_field("dim", &self.dim)?;
        st.serialize_field("entries", &entries)?;
        st.end()
    }
}

impl fmt::Display for SparseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.dim {
            let row: Vec<String> = (0..self.dim).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// Incremental row echelon form with lowest-index pivots, each pivot scaled to 1.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Field,
    len: usize,
    rows: BTreeMap<usize, Vec<Scalar>>,
}

impl Echelon {
    pub fn new(field: Field, len: usize) -> Self {
        Echelon { field, len, rows: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis; if something survives it becomes a new
    /// basis row and `true` is returned.
    pub fn insert(&mut self, mut v: Vec<Scalar>) -> Result<bool> {
        if v.len() != self.len {
            return Err(Error::InvalidParams(format!("vector of length {} in a space of length {}", v.len(), self.len)));
        }
        let mut start = 0;
        loop {
            let Some(piv) = (start..self.len).find(|i| !v[*i].is_zero()) else {
                return Ok(false);
            };
            match self.rows.get(&piv) {
                Some(row) => {
                    let c = v[piv].clone();
                    for (k, x) in row.iter().enumerate().skip(piv) {
                        if !x.is_zero() {
                            v[k] = &v[k] - &(&c * x);
                        }
                    }
                    start = piv + 1;
                }
                None => {
                    let inv = v[piv].inv().expect("nonzero pivot");
                    for x in v.iter_mut().skip(piv) {
                        if !x.is_zero() {
                            *x = &*x * &inv;
                        }
                    }
                    debug_assert!(v[piv].field() == self.field);
                    self.rows.insert(piv, v);
                    return Ok(true);
                }
            }
        }
    }
}
