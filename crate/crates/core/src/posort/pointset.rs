use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::measures::DiscreteMeasure;

/// Finite set of weighted points.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    points: Matrix,
    measure: DiscreteMeasure,
}

impl PointSet {
    pub fn new(points: Matrix, measure: DiscreteMeasure) -> Result<Self> {
        if points.rows() == 0 {
            return Err(Error::EmptyInput);
        }
        if points.rows() != measure.len() {
            return Err(Error::DimensionMismatch {
                expected: points.rows(),
                got: measure.len(),
            });
        }
        Ok(Self { points, measure })
    }

    /// Counting measure over `rows`.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let points = Matrix::from_rows(rows)?;
        let measure = DiscreteMeasure::counting(points.rows());
        Self::new(points, measure)
    }

    pub fn weighted<R: AsRef<[f64]>>(rows: &[R], weights: Vec<f64>) -> Result<Self> {
        Self::new(Matrix::from_rows(rows)?, DiscreteMeasure::new(weights)?)
    }

    pub fn len(&self) -> usize {
        self.points.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> usize {
        self.points.cols()
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        self.points.row(i)
    }

    pub fn points(&self) -> &Matrix {
        &self.points
    }

    pub fn measure(&self) -> &DiscreteMeasure {
        &self.measure
    }

    #[inline]
    pub fn weight(&self, i: usize) -> f64 {
        self.measure.weight(i)
    }

    pub(crate) fn check_indices(&self, subset: &[usize]) -> Result<()> {
        match subset.iter().find(|&&i| i >= self.len()) {
            Some(&index) => Err(Error::IndexOutOfRange {
                index,
                len: self.len(),
            }),
            None => Ok(()),
        }
    }

    /// Reads `x1,...,xM[,weight]` CSV. The weight column is recognised by its
    /// header name and defaults to 1.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = rdr.headers()?.clone();
        let weight_col = headers.iter().position(|h| h.eq_ignore_ascii_case("weight"));
        let dim = headers.len() - usize::from(weight_col.is_some());
        if dim == 0 {
            return Err(Error::EmptyInput);
        }
        let mut data = Vec::new();
        let mut weights = Vec::new();
        for record in rdr.records() {
            let record = record?;
            for (j, field) in record.iter().enumerate() {
                let v: f64 = field.parse().map_err(|_| {
                    Error::InvalidParameter(format!(
                        "non-numeric value `{field}` in column {}",
                        j + 1
                    ))
                })?;
                if Some(j) == weight_col {
                    weights.push(v);
                } else {
                    data.push(v);
                }
            }
            if weight_col.is_none() {
                weights.push(1.0);
            }
        }
        if weights.is_empty() {
            return Err(Error::EmptyInput);
        }
        Self::new(Matrix::new(data, dim)?, DiscreteMeasure::new(weights)?)
    }

    /// Writes `x1,...,xM,weight` CSV.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header: Vec<String> = (1..=self.dim()).map(|j| format!("x{j}")).collect();
        header.push("weight".into());
        w.write_record(&header)?;
        for i in 0..self.len() {
            let mut rec: Vec<String> = self.point(i).iter().map(|v| format!("{v:?}")).collect();
            rec.push(format!("{:?}", self.weight(i)));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}
