use std::fmt::Write;

use crate::scalar::{cmp_scalar, Scalar};

/// Pairs of one homological dimension.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DimensionDiagram<T> {
    /// `(birth, death)` with `death > birth`.
    pub finite: Vec<(T, T)>,
    /// Births of classes still alive at the truncation threshold.
    pub infinite: Vec<T>,
}

impl<T: Scalar> DimensionDiagram<T> {
    /// Sorts both multisets so diagrams can be compared with `==`.
    pub fn canonicalize(&mut self) {
        self.finite.sort_by(|a, b| cmp_scalar(a.0, b.0).then(cmp_scalar(a.1, b.1)));
        self.infinite.sort_by(|a, b| cmp_scalar(*a, *b));
    }

    pub fn lifetimes(&self) -> impl Iterator<Item = T> + '_ {
        self.finite.iter().map(|&(b, d)| d - b)
    }
}

/// Per-dimension persistence pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct PersistenceDiagram<T> {
    dims: Vec<DimensionDiagram<T>>,
}

impl<T: Scalar> PersistenceDiagram<T> {
    pub fn new(dims: Vec<DimensionDiagram<T>>) -> Self {
        let mut d = Self { dims };
        d.canonicalize();
        d
    }

    /// Builds a diagram from explicit dimension-1 finite pairs; dimension 0 is empty.
    pub fn from_dim1_pairs(pairs: Vec<(T, T)>) -> Self {
        Self::new(vec![DimensionDiagram::default(), DimensionDiagram { finite: pairs, infinite: vec![] }])
    }

    fn canonicalize(&mut self) {
        self.dims.iter_mut().for_each(DimensionDiagram::canonicalize);
    }

    /// Number of dimensions reported (dimension `z` for `z < max_dim()`).
    pub fn max_dim(&self) -> usize {
        self.dims.len()
    }

    pub fn dim(&self, z: usize) -> Option<&DimensionDiagram<T>> {
        self.dims.get(z)
    }

    /// Finite pairs in dimension `z`; empty when `z` was not computed.
    pub fn finite(&self, z: usize) -> &[(T, T)] {
        self.dims.get(z).map_or(&[], |d| d.finite.as_slice())
    }

    pub fn infinite(&self, z: usize) -> &[T] {
        self.dims.get(z).map_or(&[], |d| d.infinite.as_slice())
    }

    /// `dim,birth,death` CSV with `inf` for classes that never die.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("dim,birth,death\n");
        for (z, d) in self.dims.iter().enumerate() {
            for (b, de) in &d.finite {
                let _ = writeln!(out, "{z},{b},{de}");
            }
            for b in &d.infinite {
                let _ = writeln!(out, "{z},{b},inf");
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_dump() {
        let d = PersistenceDiagram::new(vec![
            DimensionDiagram { finite: vec![(0.0, 2.0)], infinite: vec![0.0] },
            DimensionDiagram { finite: vec![(1.0, 1.5)], infinite: vec![] },
        ]);
        assert_eq!(d.to_csv(), "dim,birth,death\n0,0,2\n0,0,inf\n1,1,1.5\n");
        assert!(d.finite(3).is_empty());
    }
}
