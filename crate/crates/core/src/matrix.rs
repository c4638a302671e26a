//! Dense row-major matrices over [`Rational`].

use std::fmt::Write as _;
use std::io::Write;
use std::ops::{Index, IndexMut};

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::subset_lattice::{format_rational, Rational, SubsetId};

#[derive(Clone, Debug, PartialEq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::from_integer(1.into());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        RatMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Domain("ragged rows".into()));
        }
        Ok(RatMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn mul(&self, rhs: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::Domain(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = RatMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::Domain(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    /// `vᵀ M v`, exactly.
    pub fn quadratic_form(&self, v: &[Rational]) -> Result<Rational> {
        let mv = self.mul_vec(v)?;
        Ok(v.iter().zip(&mv).map(|(a, b)| a * b).sum())
    }

    pub fn add_assign(&mut self, rhs: &RatMatrix) -> Result<()> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::Domain("shape mismatch in addition".into()));
        }
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            if !b.is_zero() {
                *a += b;
            }
        }
        Ok(())
    }

    /// Adds `w · u uᵀ`.
    pub fn add_rank_one(&mut self, w: &Rational, u: &[Rational]) {
        assert_eq!(u.len(), self.rows);
        assert!(self.is_square());
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            let wi = w * ui;
            for (j, uj) in u.iter().enumerate() {
                if !uj.is_zero() {
                    self.data[i * self.cols + j] += &wi * uj;
                }
            }
        }
    }

    pub fn max_abs(&self) -> Rational {
        self.data
            .iter()
            .map(|x| x.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = &self[(i, j)];
                    if i == j {
                        *x == Rational::from_integer(1.into())
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn data(&self) -> &[Rational] {
        &self.data
    }

    /// Writes `row,col,value` lines with subset labels as row/column names.
    pub fn write_csv<W: Write>(&self, labels: &[SubsetId], mut w: W) -> Result<()> {
        if labels.len() != self.rows || labels.len() != self.cols {
            return Err(Error::Domain(
                "label count does not match matrix shape".into(),
            ));
        }
        writeln!(w, "row,col,value")?;
        let mut line = String::new();
        for i in 0..self.rows {
            for j in 0..self.cols {
                line.clear();
                let _ = write!(
                    line,
                    "\"{}\",\"{}\",{}",
                    labels[i],
                    labels[j],
                    format_rational(&self[(i, j)])
                );
                writeln!(w, "{line}")?;
            }
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for RatMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subset_lattice::rat;

    fn m(rows: &[&[i64]]) -> RatMatrix {
        RatMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| rat(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn multiply_and_quadratic_form() {
        let a = m(&[&[1, 2], &[3, 4]]);
        let b = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(a.mul(&b).unwrap(), m(&[&[2, 1], &[4, 3]]));
        assert_eq!(a.quadratic_form(&[rat(1), rat(-1)]).unwrap(), rat(0));
        assert!(a.mul(&RatMatrix::zeros(3, 3)).is_err());
    }

    #[test]
    fn rank_one_update_is_symmetric() {
        let mut z = RatMatrix::zeros(3, 3);
        z.add_rank_one(&rat(2), &[rat(1), rat(0), rat(-1)]);
        assert!(z.is_symmetric());
        assert_eq!(z[(0, 2)], rat(-2));
    }

    #[test]
    fn csv_dump() {
        let labels = [SubsetId::EMPTY, SubsetId::singleton(0)];
        let mut out = Vec::new();
        RatMatrix::identity(2).write_csv(&labels, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.starts_with("row,col,value\n\"{}\",\"{}\",1\n"));
        assert_eq!(text.lines().count(), 5);
    }
}
