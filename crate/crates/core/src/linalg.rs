//! Exact sparse linear algebra: rank, kernels, subspace intersection and
//! membership over any [`Field`].
//!
//! Matrices are stored row-sparse; every reduction produces the canonical
//! reduced row-echelon form, so equal subspaces always print the same basis.
//! Over the rationals, rows are rescaled to primitive integer vectors between
//! elimination steps, which keeps intermediate numerators small.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::field::Field;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("vector length {0} does not match ambient dimension {1}")]
    VectorLength(usize, usize),
}

/// A sparse row: strictly increasing column indices, no explicit zeros.
pub type SparseRow<F> = Vec<(u32, <F as Field>::Elem)>;

/// Row-sparse matrix over a field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<SparseRow<F>>,
}

impl<F: Field> SparseMatrix<F> {
    pub fn zero(field: F, rows: usize, cols: usize) -> Self {
        SparseMatrix { field, rows, cols, data: vec![Vec::new(); rows] }
    }

    pub fn identity(field: F, n: usize) -> Self {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            m.data[i].push((i as u32, field.one()));
        }
        m
    }

    /// Build from `(row, col, value)` triples. Duplicate positions are summed;
    /// zeros are dropped.
    pub fn from_triplets(
        field: F,
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, F::Elem)>,
    ) -> Self {
        let mut maps: Vec<BTreeMap<u32, F::Elem>> = vec![BTreeMap::new(); rows];
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "entry ({r},{c}) outside {rows}x{cols}");
            let slot = maps[r].entry(c as u32);
            match slot {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(v);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    let sum = field.add(e.get(), &v);
                    *e.get_mut() = sum;
                }
            }
        }
        let data = maps
            .into_iter()
            .map(|m| m.into_iter().filter(|(_, v)| !field.is_zero(v)).collect())
            .collect();
        SparseMatrix { field, rows, cols, data }
    }

    pub fn from_rows(field: F, cols: usize, rows: Vec<SparseRow<F>>) -> Self {
        for r in &rows {
            debug_assert!(r.windows(2).all(|w| w[0].0 < w[1].0));
            debug_assert!(r.iter().all(|(c, v)| (*c as usize) < cols && !field.is_zero(v)));
        }
        SparseMatrix { field, rows: rows.len(), cols, data: rows }
    }

    pub fn field(&self) -> F {
        self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn row(&self, i: usize) -> &SparseRow<F> {
        &self.data[i]
    }
    pub fn row_slices(&self) -> &[SparseRow<F>] {
        &self.data
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &F::Elem)> + '_ {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c as usize, v)))
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    pub fn transpose(&self) -> SparseMatrix<F> {
        let mut rows: Vec<SparseRow<F>> = vec![Vec::new(); self.cols];
        for (r, c, v) in self.entries() {
            rows[c].push((r as u32, v.clone()));
        }
        SparseMatrix { field: self.field, rows: self.cols, cols: self.rows, data: rows }
    }

    /// `self * other`, sizes permitting.
    pub fn matmul(&self, other: &SparseMatrix<F>) -> SparseMatrix<F> {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        let f = self.field;
        let mut out: Vec<SparseRow<F>> = Vec::with_capacity(self.rows);
        for row in &self.data {
            let mut acc: BTreeMap<u32, F::Elem> = BTreeMap::new();
            for (k, a) in row {
                for (j, b) in &other.data[*k as usize] {
                    let prod = f.mul(a, b);
                    match acc.entry(*j) {
                        std::collections::btree_map::Entry::Vacant(e) => {
                            e.insert(prod);
                        }
                        std::collections::btree_map::Entry::Occupied(mut e) => {
                            let s = f.add(e.get(), &prod);
                            *e.get_mut() = s;
                        }
                    }
                }
            }
            out.push(acc.into_iter().filter(|(_, v)| !f.is_zero(v)).collect());
        }
        SparseMatrix { field: f, rows: self.rows, cols: other.cols, data: out }
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.data.iter().all(|r| r.is_empty())
    }

    /// Canonical reduced row-echelon form together with its pivot columns.
    pub fn rref(&self) -> Rref<F> {
        rref_rows(self.field, self.cols, self.data.clone())
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Canonical basis of the right kernel, `dim = cols - rank`.
    pub fn kernel_basis(&self) -> Subspace<F> {
        let f = self.field;
        let rref = self.rref();
        let pivot_of_col: BTreeMap<u32, usize> =
            rref.pivots.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        let mut vectors: Vec<SparseRow<F>> = Vec::new();
        for free in 0..self.cols as u32 {
            if pivot_of_col.contains_key(&free) {
                continue;
            }
            // x_free = 1, pivot variables solve against the free column.
            let mut v: Vec<(u32, F::Elem)> = vec![(free, f.one())];
            for (i, pc) in rref.pivots.iter().enumerate() {
                if let Some((_, coef)) =
                    rref.matrix.data[i].iter().find(|(c, _)| *c == free)
                {
                    v.push((*pc, f.neg(coef)));
                }
            }
            v.sort_by_key(|(c, _)| *c);
            vectors.push(v);
        }
        Subspace::from_spanning_rows(f, self.cols, vectors)
    }
}

/// Result of row reduction: the reduced matrix (zero rows dropped) and the
/// pivot column of each remaining row, in increasing order.
#[derive(Debug, Clone)]
pub struct Rref<F: Field> {
    pub matrix: SparseMatrix<F>,
    pub pivots: Vec<u32>,
}

fn add_scaled_row<F: Field>(
    f: F,
    target: &SparseRow<F>,
    scale: &F::Elem,
    source: &SparseRow<F>,
) -> SparseRow<F> {
    // target + scale * source, merging sorted sequences.
    let mut out = Vec::with_capacity(target.len() + source.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() || j < source.len() {
        match (target.get(i), source.get(j)) {
            (Some((tc, tv)), Some((sc, sv))) if tc == sc => {
                let v = f.add(tv, &f.mul(scale, sv));
                if !f.is_zero(&v) {
                    out.push((*tc, v));
                }
                i += 1;
                j += 1;
            }
            (Some((tc, tv)), Some((sc, _))) if tc < sc => {
                out.push((*tc, tv.clone()));
                i += 1;
            }
            (Some(_), Some((sc, sv))) => {
                let v = f.mul(scale, sv);
                if !f.is_zero(&v) {
                    out.push((*sc, v));
                }
                j += 1;
            }
            (Some((tc, tv)), None) => {
                out.push((*tc, tv.clone()));
                i += 1;
            }
            (None, Some((sc, sv))) => {
                let v = f.mul(scale, sv);
                if !f.is_zero(&v) {
                    out.push((*sc, v));
                }
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

fn rref_rows<F: Field>(f: F, cols: usize, mut work: Vec<SparseRow<F>>) -> Rref<F> {
    let mut reduced: Vec<SparseRow<F>> = Vec::new();
    let mut pivots: Vec<u32> = Vec::new();

    for row in work.iter_mut() {
        f.normalize_row(row);
    }

    // Forward elimination, keeping `reduced` in echelon form throughout.
    while let Some(mut row) = pop_best_row::<F>(&mut work) {
        // Reduce against existing pivots.
        loop {
            let Some(lead) = row.first().map(|e| e.0) else { break };
            match pivots.binary_search(&lead) {
                Ok(idx) => {
                    let coef = row[0].1.clone();
                    let pivot_val = reduced[idx][0].1.clone();
                    let scale = f.neg(&f.div(&coef, &pivot_val));
                    row = add_scaled_row(f, &row, &scale, &reduced[idx]);
                    f.normalize_row(&mut row);
                }
                Err(_) => break,
            }
        }
        let Some(&(lead, _)) = row.first() else { continue };
        let at = pivots.binary_search(&lead).unwrap_err();
        pivots.insert(at, lead);
        reduced.insert(at, row);
    }

    // Back substitution: clear pivot columns above, then scale pivots to one.
    for i in (0..reduced.len()).rev() {
        let pivot_col = pivots[i];
        for j in 0..i {
            if let Some((_, coef)) =
                reduced[j].iter().find(|(c, _)| *c == pivot_col).cloned()
            {
                let pivot_val = reduced[i][0].1.clone();
                let scale = f.neg(&f.div(&coef, &pivot_val));
                let updated = add_scaled_row(f, &reduced[j], &scale, &reduced[i]);
                reduced[j] = updated;
            }
        }
    }
    for row in reduced.iter_mut() {
        let inv = f.inv(&row[0].1.clone());
        for (_, v) in row.iter_mut() {
            *v = f.mul(v, &inv);
        }
    }

    Rref { matrix: SparseMatrix { field: f, rows: reduced.len(), cols, data: reduced }, pivots }
}

/// Pick the sparsest row with the leftmost leading column; deterministic and
/// cheap, and it keeps fill-in moderate on the graded matrices we see.
fn pop_best_row<F: Field>(work: &mut Vec<SparseRow<F>>) -> Option<SparseRow<F>> {
    let mut best: Option<(usize, u32, usize)> = None; // (index, lead, len)
    for (i, row) in work.iter().enumerate() {
        let Some(&(lead, _)) = row.first() else { continue };
        let candidate = (i, lead, row.len());
        best = match best {
            None => Some(candidate),
            Some((bi, blead, blen)) => {
                if (lead, row.len()) < (blead, blen) {
                    Some(candidate)
                } else {
                    Some((bi, blead, blen))
                }
            }
        };
    }
    match best {
        Some((i, _, _)) => Some(work.swap_remove(i)),
        None => {
            work.clear();
            None
        }
    }
}

/// A linear subspace of `k^ambient`, stored as a canonical RREF basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace<F: Field> {
    ambient: usize,
    basis: SparseMatrix<F>,
    pivots: Vec<u32>,
}

impl<F: Field> Subspace<F> {
    pub fn zero(field: F, ambient: usize) -> Self {
        Subspace { ambient, basis: SparseMatrix::zero(field, 0, ambient), pivots: Vec::new() }
    }

    pub fn full(field: F, ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: SparseMatrix::identity(field, ambient),
            pivots: (0..ambient as u32).collect(),
        }
    }

    pub fn from_spanning_rows(field: F, ambient: usize, rows: Vec<SparseRow<F>>) -> Self {
        let rref = rref_rows(field, ambient, rows);
        Subspace { ambient, basis: rref.matrix, pivots: rref.pivots }
    }

    pub fn from_spanning_matrix(m: &SparseMatrix<F>) -> Self {
        Self::from_spanning_rows(m.field(), m.cols(), m.row_slices().to_vec())
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }
    pub fn dim(&self) -> usize {
        self.basis.rows()
    }
    pub fn basis(&self) -> &SparseMatrix<F> {
        &self.basis
    }
    pub fn pivots(&self) -> &[u32] {
        &self.pivots
    }

    /// Residual of `v` after eliminating this subspace's pivot coordinates:
    /// a linear map whose kernel is exactly the subspace.
    pub fn reduce(&self, v: &SparseRow<F>) -> SparseRow<F> {
        let f = self.basis.field();
        let mut current = v.clone();
        loop {
            let Some((idx, coef)) = current.iter().find_map(|(c, val)| {
                self.pivots.binary_search(c).ok().map(|i| (i, val.clone()))
            }) else {
                return current;
            };
            let scale = f.neg(&coef);
            current = add_scaled_row(f, &current, &scale, self.basis.row(idx));
        }
    }

    pub fn contains(&self, v: &SparseRow<F>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Coordinates of `v` in this basis, if `v` lies in the subspace.
    pub fn membership_coords(&self, v: &SparseRow<F>) -> Option<Vec<F::Elem>> {
        let f = self.basis.field();
        let mut coords = vec![f.zero(); self.dim()];
        let mut current = v.clone();
        loop {
            let Some((idx, coef)) = current.iter().find_map(|(c, val)| {
                self.pivots.binary_search(c).ok().map(|i| (i, val.clone()))
            }) else {
                break;
            };
            coords[idx] = coef.clone();
            let scale = f.neg(&coef);
            current = add_scaled_row(f, &current, &scale, self.basis.row(idx));
        }
        if current.is_empty() {
            Some(coords)
        } else {
            None
        }
    }

    /// Intersection of a family of subspaces of one ambient space.
    ///
    /// The intersection is the joint kernel of the reduction maps of the
    /// inputs, computed exactly; an empty family yields the full space.
    pub fn intersect(field: F, ambient: usize, spaces: &[Subspace<F>]) -> Result<Subspace<F>, LinalgError> {
        for s in spaces {
            if s.ambient != ambient {
                return Err(LinalgError::AmbientMismatch(s.ambient, ambient));
            }
        }
        if spaces.is_empty() {
            return Ok(Subspace::full(field, ambient));
        }
        // Stack the residual maps v -> v - proj_i(v); v is in the intersection
        // iff every residual vanishes.
        let mut constraint_rows: Vec<SparseRow<F>> = Vec::new();
        for s in spaces {
            // Residual map matrix: for each ambient basis vector e_c compute
            // reduce(e_c); collect as columns. Rows of the constraint block are
            // indexed by ambient coordinates of the residual.
            let mut residual_cols: Vec<SparseRow<F>> = Vec::with_capacity(ambient);
            for c in 0..ambient as u32 {
                residual_cols.push(s.reduce(&vec![(c, field.one())]));
            }
            let mut block: BTreeMap<u32, SparseRow<F>> = BTreeMap::new();
            for (c, col) in residual_cols.iter().enumerate() {
                for (r, v) in col {
                    block.entry(*r).or_default().push((c as u32, v.clone()));
                }
            }
            constraint_rows.extend(block.into_values());
        }
        let constraints =
            SparseMatrix::from_rows(field, ambient, constraint_rows);
        Ok(constraints.kernel_basis())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use num_rational::BigRational;

    fn qq(n: i64) -> BigRational {
        Rationals.from_int(n)
    }

    fn mat(rows: usize, cols: usize, entries: &[(usize, usize, i64)]) -> SparseMatrix<Rationals> {
        SparseMatrix::from_triplets(
            Rationals,
            rows,
            cols,
            entries.iter().map(|(r, c, v)| (*r, *c, qq(*v))),
        )
    }

    #[test]
    fn rank_zero_matrix() {
        assert_eq!(mat(3, 3, &[]).rank(), 0);
    }

    #[test]
    fn rank_identity() {
        assert_eq!(SparseMatrix::identity(Rationals, 3).rank(), 3);
    }

    #[test]
    fn rank_proportional_rows() {
        let m = mat(2, 2, &[(0, 0, 1), (0, 1, 2), (1, 0, 2), (1, 1, 4)]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn kernel_of_identity_is_zero() {
        let k = SparseMatrix::identity(Rationals, 4).kernel_basis();
        assert_eq!(k.dim(), 0);
    }

    #[test]
    fn kernel_of_zero_map_is_everything() {
        let k = mat(2, 3, &[]).kernel_basis();
        assert_eq!(k.dim(), 3);
        assert_eq!(k.basis().rank(), 3);
    }

    #[test]
    fn kernel_single_condition() {
        // row (1,1): kernel spanned by (1,-1)
        let k = mat(1, 2, &[(0, 0, 1), (0, 1, 1)]).kernel_basis();
        assert_eq!(k.dim(), 1);
        let row = k.basis().row(0);
        assert_eq!(row, &vec![(0, qq(1)), (1, qq(-1))]);
    }

    #[test]
    fn rank_plus_nullity() {
        let m = mat(
            3,
            5,
            &[(0, 0, 1), (0, 2, 3), (1, 1, 2), (1, 2, -1), (2, 0, 2), (2, 2, 6)],
        );
        assert_eq!(m.rank() + m.kernel_basis().dim(), m.cols());
    }

    #[test]
    fn rref_idempotent_and_canonical() {
        let m = mat(3, 4, &[(0, 0, 2), (0, 1, 4), (1, 0, 1), (1, 1, 2), (1, 3, 1), (2, 3, 5)]);
        let s1 = Subspace::from_spanning_matrix(&m);
        let s2 = Subspace::from_spanning_matrix(s1.basis());
        assert_eq!(s1, s2);
        // Same row space presented differently gives the identical basis.
        let m2 = mat(2, 4, &[(0, 0, 1), (0, 1, 2), (0, 3, 6), (1, 3, 1)]);
        let s3 = Subspace::from_spanning_matrix(&m2);
        assert_eq!(s1, s3);
    }

    #[test]
    fn intersect_coordinate_planes() {
        let f = Rationals;
        let e = |i: u32| vec![(i, qq(1))];
        let s12 = Subspace::from_spanning_rows(f, 3, vec![e(0), e(1)]);
        let s23 = Subspace::from_spanning_rows(f, 3, vec![e(1), e(2)]);
        let inter = Subspace::intersect(f, 3, &[s12.clone(), s23]).unwrap();
        assert_eq!(inter.dim(), 1);
        assert_eq!(inter.basis().row(0), &e(1));

        let full = Subspace::full(f, 3);
        let same = Subspace::intersect(f, 3, &[s12.clone(), full]).unwrap();
        assert_eq!(same, s12);
    }

    #[test]
    fn intersect_ambient_mismatch() {
        let f = Rationals;
        let a = Subspace::full(f, 2);
        assert!(Subspace::intersect(f, 3, &[a]).is_err());
    }

    /// Quadratic commutator span: (R ⊗ V) ∩ (V ⊗ R) = 0 inside V^3 for
    /// R = span(xy - yx) on a two-dimensional V. Basis order of V^3:
    /// xxx, xxy, xyx, xyy, yxx, yxy, yyx, yyy.
    #[test]
    fn intersect_commutator_cube_is_zero() {
        let f = Rationals;
        let idx = |word: &str| -> u32 {
            word.chars().fold(0u32, |acc, ch| acc * 2 + if ch == 'y' { 1 } else { 0 })
        };
        let vec_of = |pos: &str, neg: &str| {
            let mut v = vec![(idx(pos), qq(1)), (idx(neg), qq(-1))];
            v.sort_by_key(|(c, _)| *c);
            v
        };
        // (xy - yx) ⊗ x, (xy - yx) ⊗ y
        let rv = Subspace::from_spanning_rows(
            f,
            8,
            vec![vec_of("xyx", "yxx"), vec_of("xyy", "yxy")],
        );
        // x ⊗ (xy - yx), y ⊗ (xy - yx)
        let vr = Subspace::from_spanning_rows(
            f,
            8,
            vec![vec_of("xxy", "xyx"), vec_of("yxy", "yyx")],
        );
        assert_eq!(rv.dim(), 2);
        assert_eq!(vr.dim(), 2);
        // Independent cross-check: dim(U ∩ W) = dim U + dim W - dim(U + W).
        let mut all_rows = rv.basis().row_slices().to_vec();
        all_rows.extend(vr.basis().row_slices().to_vec());
        let sum_dim = Subspace::from_spanning_rows(f, 8, all_rows).dim();
        assert_eq!(sum_dim, 4);
        let inter = Subspace::intersect(f, 8, &[rv, vr]).unwrap();
        assert_eq!(inter.dim(), 0);
    }

    #[test]
    fn membership_examples() {
        let f = Rationals;
        let e = |i: u32| vec![(i, qq(1))];
        let s = Subspace::from_spanning_rows(f, 3, vec![e(1)]);
        // zero vector: zero coordinates
        assert_eq!(s.membership_coords(&Vec::new()), Some(vec![qq(0)]));
        // e1 against span{e2}: absent
        assert_eq!(s.membership_coords(&e(0)), None);
        // the generator itself: coordinates (1)
        let gen = vec![(1u32, qq(1))];
        assert_eq!(s.membership_coords(&gen), Some(vec![qq(1)]));
    }

    #[test]
    fn rank_agrees_over_prime_field_or_drops() {
        // rank over Q >= rank over GF(p): deterministic examples.
        let gf = PrimeField::new(5).unwrap();
        let m_q = mat(2, 2, &[(0, 0, 1), (0, 1, 2), (1, 0, 3), (1, 1, 11)]);
        let m_p = SparseMatrix::from_triplets(
            gf,
            2,
            2,
            [(0usize, 0usize, 1i64), (0, 1, 2), (1, 0, 3), (1, 1, 11)]
                .iter()
                .map(|(r, c, v)| (*r, *c, gf.from_int(*v))),
        );
        // det = 11 - 6 = 5, zero mod 5.
        assert_eq!(m_q.rank(), 2);
        assert_eq!(m_p.rank(), 1);
    }
}
