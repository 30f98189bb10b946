use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashMap};

use super::diagram::{DimensionDiagram, PersistenceDiagram};
use crate::cloud::DistanceMatrix;
use crate::scalar::{cmp_scalar, Scalar};

/// Filtration key: diameter, then combinatorial index. Within one dimension
/// this is a total order that refines the filtration.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Key<T> {
    diameter: T,
    index: u64,
}

impl<T: Scalar> Eq for Key<T> {}

impl<T: Scalar> Ord for Key<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_scalar(self.diameter, other.diameter).then(self.index.cmp(&other.index))
    }
}

impl<T: Scalar> PartialOrd for Key<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[inline]
fn choose2(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

#[inline]
fn choose3(n: u64) -> u64 {
    n * n.saturating_sub(1) * n.saturating_sub(2) / 6
}

/// Colexicographic index of the triangle `{a, b, c}` (any order).
#[inline]
fn triangle_index(a: usize, b: usize, c: usize) -> u64 {
    let mut v = [a as u64, b as u64, c as u64];
    v.sort_unstable();
    choose3(v[2]) + choose2(v[1]) + v[0]
}

#[derive(Debug, Clone, Copy)]
struct Edge<T> {
    key: Key<T>,
    /// `lo < hi`.
    lo: usize,
    hi: usize,
}

struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect(), rank: vec![0; n] }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            Ordering::Less => self.parent[ra] = rb,
            Ordering::Greater => self.parent[rb] = ra,
            Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }
}

struct Coboundary<'a, T> {
    d: &'a DistanceMatrix<T>,
    threshold: T,
}

impl<T: Scalar> Coboundary<'_, T> {
    /// Triangles `{lo, hi, v}` with diameter within the threshold.
    fn cofaces(&self, e: &Edge<T>) -> impl Iterator<Item = Key<T>> + '_ {
        let (lo, hi, de) = (e.lo, e.hi, e.key.diameter);
        let row_lo = self.d.row(lo);
        let row_hi = self.d.row(hi);
        (0..self.d.len()).filter(move |&v| v != lo && v != hi).filter_map(move |v| {
            let diameter = de.max(row_lo[v]).max(row_hi[v]);
            (diameter <= self.threshold).then(|| Key { diameter, index: triangle_index(lo, hi, v) })
        })
    }
}

/// Pops the smallest key that survives mod-2 cancellation and leaves it on the heap.
fn pivot<T: Scalar>(heap: &mut BinaryHeap<Reverse<Key<T>>>) -> Option<Key<T>> {
    while let Some(Reverse(top)) = heap.pop() {
        let mut count = 1usize;
        while heap.peek().is_some_and(|Reverse(k)| *k == top) {
            heap.pop();
            count += 1;
        }
        if count % 2 == 1 {
            heap.push(Reverse(top));
            return Some(top);
        }
    }
    None
}

/// Dimension-0 and dimension-1 persistence of the Vietoris–Rips filtration
/// of `d` truncated at `threshold`.
///
/// Components: union–find over edges in filtration order (all births are 0).
/// Loops: reduction of the edge coboundary matrix, edges processed in
/// decreasing filtration order, skipping edges that merged components. A
/// column whose smallest coface is not yet claimed is paired immediately
/// without materializing the rest of its coboundary.
pub fn rips_persistence<T: Scalar>(d: &DistanceMatrix<T>, threshold: T) -> PersistenceDiagram<T> {
    let n = d.len();
    let mut edges: Vec<Edge<T>> = Vec::new();
    for hi in 0..n {
        let row = d.row(hi);
        for (lo, &diameter) in row.iter().enumerate().take(hi) {
            if diameter <= threshold {
                edges.push(Edge { key: Key { diameter, index: choose2(hi as u64) + lo as u64 }, lo, hi });
            }
        }
    }
    edges.sort_unstable_by_key(|e| e.key);

    let mut dim0 = DimensionDiagram::default();
    let mut uf = UnionFind::new(n);
    let mut merges = vec![false; edges.len()];
    let mut components = n;
    for (pos, e) in edges.iter().enumerate() {
        if uf.union(e.lo, e.hi) {
            merges[pos] = true;
            components -= 1;
            if e.key.diameter > T::zero() {
                dim0.finite.push((T::zero(), e.key.diameter));
            }
        }
    }
    dim0.infinite = vec![T::zero(); components];

    let cob = Coboundary { d, threshold };
    let mut dim1 = DimensionDiagram::default();
    // Pivot triangle -> reduction record (the edges whose coboundaries sum to the column).
    let mut pivots: HashMap<u64, usize> = HashMap::new();
    let mut records: Vec<Vec<usize>> = Vec::new();
    let mut heap: BinaryHeap<Reverse<Key<T>>> = BinaryHeap::new();

    for pos in (0..edges.len()).rev() {
        if merges[pos] {
            continue;
        }
        let e = &edges[pos];
        let smallest = cob.cofaces(e).min();
        let Some(first) = smallest else {
            dim1.infinite.push(e.key.diameter);
            continue;
        };
        if let std::collections::hash_map::Entry::Vacant(slot) = pivots.entry(first.index) {
            slot.insert(records.len());
            records.push(vec![pos]);
            if first.diameter > e.key.diameter {
                dim1.finite.push((e.key.diameter, first.diameter));
            }
            continue;
        }

        heap.clear();
        heap.extend(cob.cofaces(e).map(Reverse));
        let mut combo = vec![pos];
        loop {
            match pivot(&mut heap) {
                None => {
                    dim1.infinite.push(e.key.diameter);
                    break;
                }
                Some(p) => match pivots.get(&p.index) {
                    Some(&r) => {
                        for &other in &records[r] {
                            heap.extend(cob.cofaces(&edges[other]).map(Reverse));
                            combo.push(other);
                        }
                    }
                    None => {
                        pivots.insert(p.index, records.len());
                        records.push(cancel_pairs(combo));
                        if p.diameter > e.key.diameter {
                            dim1.finite.push((e.key.diameter, p.diameter));
                        }
                        break;
                    }
                },
            }
        }
    }

    PersistenceDiagram::new(vec![dim0, dim1])
}

/// Removes entries that occur an even number of times.
fn cancel_pairs(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    let mut out = Vec::with_capacity(v.len());
    let mut i = 0;
    while i < v.len() {
        let mut j = i;
        while j < v.len() && v[j] == v[i] {
            j += 1;
        }
        if (j - i) % 2 == 1 {
            out.push(v[i]);
        }
        i = j;
    }
    out
}
