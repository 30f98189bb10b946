use std::collections::HashMap;

use super::diagram::{DimensionDiagram, PersistenceDiagram};
use super::filtration::FilteredSimplex;
use super::PersistenceError;
use crate::scalar::Scalar;

/// Z/2 symmetric difference of two sorted index lists.
fn add_columns(a: &[usize], b: &[usize], out: &mut Vec<usize>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
}

fn boundary_matrix<T: Scalar>(
    filtration: &[FilteredSimplex<T>],
    n_points: usize,
) -> Result<Vec<Vec<usize>>, PersistenceError> {
    let mut position: HashMap<&[usize], usize> = HashMap::with_capacity(filtration.len());
    let mut columns = Vec::with_capacity(filtration.len());
    for (pos, s) in filtration.iter().enumerate() {
        let invalid = |reason: &str| PersistenceError::InvalidSimplex { position: pos, reason: reason.into() };
        if s.vertices.is_empty() {
            return Err(invalid("no vertices"));
        }
        if !s.vertices.windows(2).all(|w| w[0] < w[1]) {
            return Err(invalid("vertices not strictly increasing"));
        }
        if s.vertices.iter().any(|&v| v >= n_points) {
            return Err(invalid("vertex index out of range"));
        }
        if !s.filtration.is_finite() {
            return Err(invalid("non-finite filtration value"));
        }
        if pos > 0 && s.filtration < filtration[pos - 1].filtration {
            return Err(PersistenceError::UnsortedFiltration { position: pos });
        }
        let mut col = Vec::with_capacity(s.vertices.len());
        if s.vertices.len() > 1 {
            for skip in 0..s.vertices.len() {
                let face: Vec<usize> =
                    s.vertices.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, &v)| v).collect();
                match position.get(face.as_slice()) {
                    Some(&p) => col.push(p),
                    None => return Err(PersistenceError::MissingFace { position: pos }),
                }
            }
            col.sort_unstable();
        }
        if position.insert(&s.vertices, pos).is_some() {
            return Err(invalid("duplicate simplex"));
        }
        columns.push(col);
    }
    Ok(columns)
}

/// Persistence pairs of an explicit filtration by boundary-matrix column
/// reduction, top dimension first, clearing the columns of simplices already
/// known to be positive.
///
/// The filtration must be non-decreasing in value with every face listed
/// before its cofaces; ties may appear in any order. Dimensions 0 and 1 of
/// the given complex are reported.
pub fn compute_persistence<T: Scalar>(
    filtration: &[FilteredSimplex<T>],
    n_points: usize,
) -> Result<PersistenceDiagram<T>, PersistenceError> {
    let mut columns = boundary_matrix(filtration, n_points)?;
    let m = filtration.len();
    let top_dim = filtration.iter().map(FilteredSimplex::dim).max().unwrap_or(0);

    // pivot_of[row] = column whose reduced lowest entry is `row`.
    let mut pivot_of: Vec<Option<usize>> = vec![None; m];
    let mut cleared = vec![false; m];
    let mut scratch = Vec::new();

    for dim in (1..=top_dim).rev() {
        for j in 0..m {
            if filtration[j].dim() != dim || cleared[j] {
                continue;
            }
            while let Some(&low) = columns[j].last() {
                match pivot_of[low] {
                    Some(i) => {
                        add_columns(&columns[j], &columns[i], &mut scratch);
                        std::mem::swap(&mut columns[j], &mut scratch);
                    }
                    None => {
                        pivot_of[low] = Some(j);
                        cleared[low] = true;
                        columns[low].clear();
                        break;
                    }
                }
            }
        }
    }

    let mut dims: Vec<DimensionDiagram<T>> = vec![DimensionDiagram::default(), DimensionDiagram::default()];
    for (row, killer) in pivot_of.iter().enumerate() {
        if let Some(j) = *killer {
            let (birth, death) = (filtration[row].filtration, filtration[j].filtration);
            let z = filtration[row].dim();
            if death > birth && z < dims.len() {
                dims[z].finite.push((birth, death));
            }
        }
    }
    for (pos, s) in filtration.iter().enumerate() {
        let z = s.dim();
        let negative = !columns[pos].is_empty();
        if z < dims.len() && !negative && pivot_of[pos].is_none() {
            dims[z].infinite.push(s.filtration);
        }
    }
    Ok(PersistenceDiagram::new(dims))
}
