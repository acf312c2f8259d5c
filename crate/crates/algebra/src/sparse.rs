// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Sparse matrices over GF(p) in compressed row form, with Matrix Market
//! style text serialization.

use std::io::{BufRead, Write};

use crate::dense::DenseMatrix;
use crate::error::{AlgebraError, Result};
use crate::field::PrimeField;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    General,
    Symmetric,
    SkewSymmetric,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    vals: Vec<u64>,
}

impl SparseMatrix {
    /// Builds from `(row, col, value)` triplets; duplicates are summed and
    /// zero results dropped. Values must already be reduced.
    pub fn from_triplets<I>(f: &PrimeField, rows: usize, cols: usize, entries: I) -> Result<SparseMatrix>
    where
        I: IntoIterator<Item = (usize, usize, u64)>,
    {
        let mut t: Vec<(usize, usize, u64)> = Vec::new();
        for (i, j, v) in entries {
            if i >= rows || j >= cols {
                return Err(AlgebraError::Dimension(format!(
                    "entry ({i}, {j}) outside {rows}x{cols}"
                )));
            }
            t.push((i, j, f.reduce(v)));
        }
        t.sort_unstable_by_key(|&(i, j, _)| (i, j));
        let mut row_ptr = vec![0usize; rows + 1];
        let mut col_idx = Vec::with_capacity(t.len());
        let mut vals: Vec<u64> = Vec::with_capacity(t.len());
        let mut last: Option<(usize, usize)> = None;
        for (i, j, v) in t {
            if last == Some((i, j)) {
                let x = vals.last_mut().expect("previous entry");
                *x = f.add(*x, v);
                continue;
            }
            if let Some((li, lj)) = last {
                if vals.last() == Some(&0) {
                    vals.pop();
                    col_idx.pop();
                    row_ptr[li + 1] -= 1;
                    let _ = lj;
                }
            }
            last = Some((i, j));
            col_idx.push(j);
            vals.push(v);
            row_ptr[i + 1] += 1;
        }
        if let Some((li, _)) = last {
            if vals.last() == Some(&0) {
                vals.pop();
                col_idx.pop();
                row_ptr[li + 1] -= 1;
            }
        }
        for i in 0..rows {
            row_ptr[i + 1] += row_ptr[i];
        }
        Ok(SparseMatrix {
            rows,
            cols,
            row_ptr,
            col_idx,
            vals,
        })
    }

    pub fn identity(n: usize) -> SparseMatrix {
        SparseMatrix {
            rows: n,
            cols: n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n).collect(),
            vals: vec![1; n],
        }
    }

    pub fn from_dense(a: &DenseMatrix) -> SparseMatrix {
        let mut row_ptr = vec![0usize];
        let mut col_idx = Vec::new();
        let mut vals = Vec::new();
        for i in 0..a.rows() {
            for (j, &x) in a.row(i).iter().enumerate() {
                if x != 0 {
                    col_idx.push(j);
                    vals.push(x);
                }
            }
            row_ptr.push(col_idx.len());
        }
        SparseMatrix {
            rows: a.rows(),
            cols: a.cols(),
            row_ptr,
            col_idx,
            vals,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row_nnz(&self, i: usize) -> usize {
        self.row_ptr[i + 1] - self.row_ptr[i]
    }

    /// `(col, value)` pairs of row `i`, ascending by column.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, u64)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[r.clone()].iter().copied().zip(self.vals[r].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.col_idx[r.clone()].binary_search(&j) {
            Ok(k) => self.vals[r.start + k],
            Err(_) => 0,
        }
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        (0..self.rows).flat_map(move |i| self.row(i).map(move |(j, v)| (i, j, v)))
    }

    pub fn mul_vec(&self, f: &PrimeField, x: &[u64]) -> Vec<u64> {
        assert_eq!(x.len(), self.cols, "vector length");
        (0..self.rows)
            .map(|i| self.row(i).fold(0, |acc, (j, v)| f.mul_add(acc, v, x[j])))
            .collect()
    }

    /// `self^T * x`.
    pub fn transpose_mul_vec(&self, f: &PrimeField, x: &[u64]) -> Vec<u64> {
        assert_eq!(x.len(), self.rows, "vector length");
        let mut y = vec![0u64; self.cols];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, v) in self.row(i) {
                y[j] = f.mul_add(y[j], v, xi);
            }
        }
        y
    }

    /// `self * b` for dense `b`.
    pub fn mul_dense(&self, f: &PrimeField, b: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != b.rows() {
            return Err(AlgebraError::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows,
                self.cols,
                b.rows(),
                b.cols()
            )));
        }
        let mut out = DenseMatrix::zeros(self.rows, b.cols());
        for i in 0..self.rows {
            let mut acc = vec![0u64; b.cols()];
            for (j, v) in self.row(i) {
                f.axpy(&mut acc, v, b.row(j));
            }
            out.row_mut(i).copy_from_slice(&acc);
        }
        Ok(out)
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut counts = vec![0usize; self.cols + 1];
        for &j in &self.col_idx {
            counts[j + 1] += 1;
        }
        for j in 0..self.cols {
            counts[j + 1] += counts[j];
        }
        let mut fill = counts.clone();
        let mut col_idx = vec![0usize; self.nnz()];
        let mut vals = vec![0u64; self.nnz()];
        for i in 0..self.rows {
            for (j, v) in self.row(i) {
                col_idx[fill[j]] = i;
                vals[fill[j]] = v;
                fill[j] += 1;
            }
        }
        SparseMatrix {
            rows: self.cols,
            cols: self.rows,
            row_ptr: counts,
            col_idx,
            vals,
        }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(self.rows, self.cols);
        for (i, j, v) in self.triplets() {
            d.set(i, j, v);
        }
        d
    }

    /// Classifies the matrix exactly; non-square matrices are general.
    pub fn symmetry(&self, f: &PrimeField) -> Symmetry {
        if self.rows != self.cols {
            return Symmetry::General;
        }
        let mut sym = true;
        let mut skew = true;
        for (i, j, v) in self.triplets() {
            let w = self.get(j, i);
            sym &= w == v;
            skew &= w == f.neg(v);
            if !sym && !skew {
                return Symmetry::General;
            }
        }
        if sym {
            Symmetry::Symmetric
        } else {
            Symmetry::SkewSymmetric
        }
    }

    /// `P self P^T` where row `i` of the result is row `perm[i]` of `self`.
    pub fn permute_symmetric(&self, perm: &[usize]) -> SparseMatrix {
        assert_eq!(self.rows, self.cols, "symmetric permutation needs a square matrix");
        let mut inv = vec![0usize; perm.len()];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let mut row_ptr = vec![0usize];
        let mut col_idx = Vec::with_capacity(self.nnz());
        let mut vals = Vec::with_capacity(self.nnz());
        for &old in perm {
            let mut row: Vec<(usize, u64)> = self.row(old).map(|(j, v)| (inv[j], v)).collect();
            row.sort_unstable_by_key(|&(j, _)| j);
            for (j, v) in row {
                col_idx.push(j);
                vals.push(v);
            }
            row_ptr.push(col_idx.len());
        }
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            row_ptr,
            col_idx,
            vals,
        }
    }

    /// Writes `%%MatrixMarket matrix coordinate integer general` with the
    /// field modulus on a comment line and 1-based indices.
    pub fn write_matrix_market<W: Write>(&self, f: &PrimeField, mut w: W) -> Result<()> {
        writeln!(w, "%%MatrixMarket matrix coordinate integer general")?;
        writeln!(w, "% field p={}", f.modulus())?;
        writeln!(w, "{} {} {}", self.rows, self.cols, self.nnz())?;
        for (i, j, v) in self.triplets() {
            writeln!(w, "{} {} {}", i + 1, j + 1, v)?;
        }
        Ok(())
    }

    /// Reads the format written by [`SparseMatrix::write_matrix_market`].
    /// Returns the modulus found in the header, if any. Negative values are
    /// accepted and reduced.
    pub fn read_matrix_market<R: BufRead>(reader: R, default_field: &PrimeField) -> Result<(SparseMatrix, PrimeField)> {
        let mut field = *default_field;
        let mut dims: Option<(usize, usize, usize)> = None;
        let mut entries = Vec::new();
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            let lineno = lineno + 1;
            let t = line.trim();
            if t.is_empty() {
                continue;
            }
            let parse_err = |msg: String| AlgebraError::Parse { line: lineno, msg };
            if let Some(rest) = t.strip_prefix('%') {
                if lineno == 1 && !t.starts_with("%%MatrixMarket matrix coordinate") {
                    return Err(parse_err(format!("unsupported header {t:?}")));
                }
                if let Some(p) = rest.trim().strip_prefix("field p=") {
                    let p: u64 = p.trim().parse().map_err(|_| parse_err(format!("bad modulus {p:?}")))?;
                    field = PrimeField::new(p)?;
                }
                continue;
            }
            let toks: Vec<&str> = t.split_whitespace().collect();
            if toks.len() != 3 {
                return Err(parse_err(format!("expected three fields, got {}", toks.len())));
            }
            match dims {
                None => {
                    let parse = |s: &str| s.parse::<usize>().map_err(|_| parse_err(format!("bad size {s:?}")));
                    dims = Some((parse(toks[0])?, parse(toks[1])?, parse(toks[2])?));
                }
                Some((r, c, _)) => {
                    let idx = |s: &str, bound: usize| -> Result<usize> {
                        let k: usize = s.parse().map_err(|_| parse_err(format!("bad index {s:?}")))?;
                        if k == 0 || k > bound {
                            return Err(parse_err(format!("index {k} out of range 1..={bound}")));
                        }
                        Ok(k - 1)
                    };
                    let v: i128 = toks[2].parse().map_err(|_| parse_err(format!("bad value {:?}", toks[2])))?;
                    let v = v.rem_euclid(field.modulus() as i128) as u64;
                    entries.push((idx(toks[0], r)?, idx(toks[1], c)?, v));
                }
            }
        }
        let (r, c, nnz) = dims.ok_or_else(|| AlgebraError::Parse {
            line: 0,
            msg: "missing size line".into(),
        })?;
        if entries.len() != nnz {
            return Err(AlgebraError::Parse {
                line: 0,
                msg: format!("size line promises {nnz} entries, found {}", entries.len()),
            });
        }
        Ok((SparseMatrix::from_triplets(&field, r, c, entries)?, field))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplets_merge_and_drop_zeros() {
        let f = PrimeField::new(7).unwrap();
        let m = SparseMatrix::from_triplets(&f, 2, 3, [(0, 1, 3), (0, 1, 4), (1, 2, 5), (1, 0, 1), (0, 0, 2)]).unwrap();
        assert_eq!(m.nnz(), 3);
        assert_eq!(m.get(0, 1), 0);
        assert_eq!(m.get(1, 0), 1);
        assert_eq!(m.row(1).collect::<Vec<_>>(), vec![(0, 1), (2, 5)]);
    }

    #[test]
    fn products_match_dense() {
        let f = PrimeField::default();
        let m = SparseMatrix::from_triplets(&f, 3, 3, [(0, 0, 2), (0, 2, 5), (1, 1, 3), (2, 0, f.from_i64(-1))]).unwrap();
        let x = [1, 2, 3];
        assert_eq!(m.mul_vec(&f, &x), m.to_dense().mul_vec(&f, &x));
        assert_eq!(m.transpose_mul_vec(&f, &x), m.transpose().mul_vec(&f, &x));
    }

    #[test]
    fn symmetry_classes() {
        let f = PrimeField::new(11).unwrap();
        let s = SparseMatrix::from_triplets(&f, 2, 2, [(0, 1, 3), (1, 0, 3)]).unwrap();
        let k = SparseMatrix::from_triplets(&f, 2, 2, [(0, 1, 3), (1, 0, 8)]).unwrap();
        let g = SparseMatrix::from_triplets(&f, 2, 2, [(0, 1, 3)]).unwrap();
        assert_eq!(s.symmetry(&f), Symmetry::Symmetric);
        assert_eq!(k.symmetry(&f), Symmetry::SkewSymmetric);
        assert_eq!(g.symmetry(&f), Symmetry::General);
    }

    #[test]
    fn matrix_market_round_trip() {
        let f = PrimeField::new(1_000_000_007).unwrap();
        let m = SparseMatrix::from_triplets(&f, 3, 4, [(0, 3, 9), (2, 1, 1_000_000_006)]).unwrap();
        let mut buf = Vec::new();
        m.write_matrix_market(&f, &mut buf).unwrap();
        let (back, g) = SparseMatrix::read_matrix_market(&buf[..], &PrimeField::default()).unwrap();
        assert_eq!(back, m);
        assert_eq!(g, f);
    }

    #[test]
    fn matrix_market_errors() {
        let f = PrimeField::default();
        let bad = "%%MatrixMarket matrix coordinate integer general\n2 2 1\n3 1 4\n";
        let err = SparseMatrix::read_matrix_market(bad.as_bytes(), &f).unwrap_err();
        assert!(matches!(err, AlgebraError::Parse { line: 3, .. }));
    }
}
