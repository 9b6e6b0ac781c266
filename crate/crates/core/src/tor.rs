//! Graded Betti tables via the reduced bar complex.
//!
//! This module is the independent cross-check for every homology number in
//! the crate: it is built only on the quotient algebra and the exact linear
//! algebra, and deliberately imports none of the bracketing machinery.
//!
//! The reduced bar complex has pieces `A^(⊗n)` with the alternating-sum
//! multiplication differential, sign `(-1)^(i-1)` on the `i`-th merge; its
//! homology gives the Tor groups of the vertex bimodule over the augmented
//! algebra, graded by path length when the ideal is homogeneous.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::field::Field;
use crate::linalg::SparseMatrix;
use crate::par::par_map;
use crate::quiver::{Path, QuotientAlgebra, QuiverError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TorError {
    #[error("graded Betti numbers need a homogeneous ideal: {0}")]
    NotGraded(String),
    #[error("ideal pieces did not certify saturation; refusing to report dimensions")]
    Unsaturated,
    #[error(transparent)]
    Quiver(#[from] QuiverError),
}

/// Trust of one reported cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellTrust {
    Exact,
    Untrusted,
}

/// Graded dimensions indexed by (homological degree, internal degree),
/// with explicit window bounds; absent cells inside the window are zero.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BettiTable {
    window_hom: u32,
    window_internal: u32,
    entries: BTreeMap<(u32, u32), usize>,
    untrusted: BTreeSet<(u32, u32)>,
}

impl BettiTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_window(window_hom: u32, window_internal: u32) -> Self {
        BettiTable { window_hom, window_internal, ..Self::default() }
    }

    pub fn window(&self) -> (u32, u32) {
        (self.window_hom, self.window_internal)
    }

    pub fn set(&mut self, hom: u32, internal: u32, dim: usize, trust: CellTrust) {
        self.window_hom = self.window_hom.max(hom);
        self.window_internal = self.window_internal.max(internal);
        if dim > 0 {
            self.entries.insert((hom, internal), dim);
        }
        if trust == CellTrust::Untrusted {
            self.untrusted.insert((hom, internal));
        }
    }

    pub fn mark_untrusted(&mut self, hom: u32, internal: u32) {
        self.untrusted.insert((hom, internal));
    }

    pub fn dim(&self, hom: u32, internal: u32) -> usize {
        self.entries.get(&(hom, internal)).copied().unwrap_or(0)
    }

    pub fn is_trusted(&self, hom: u32, internal: u32) -> bool {
        hom <= self.window_hom
            && internal <= self.window_internal
            && !self.untrusted.contains(&(hom, internal))
    }

    pub fn total_dim(&self) -> usize {
        self.entries.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(u32, u32), &usize)> {
        self.entries.iter()
    }

    pub fn has_untrusted_cells(&self) -> bool {
        !self.untrusted.is_empty()
    }

    /// Dimensions of one homological degree by internal degree.
    pub fn row(&self, hom: u32) -> Vec<(u32, usize)> {
        self.entries
            .iter()
            .filter(|((n, _), _)| *n == hom)
            .map(|((_, l), d)| (*l, *d))
            .collect()
    }
}

/// The reduced bar complex of a quotient algebra, graded by tensor count and
/// total path length. Basis vectors are composable tuples of normal-form
/// monomials.
#[derive(Debug)]
pub struct BarComplex<'a, F: Field> {
    algebra: &'a QuotientAlgebra<F>,
    max_internal: u32,
    /// graded monomial bases of the algebra, per length 1..=max_internal
    monomials: Vec<Vec<Path>>,
    pieces: BTreeMap<(u32, u32), BarPiece>,
}

#[derive(Debug, Clone)]
struct BarPiece {
    basis: Vec<Vec<Path>>,
    index: HashMap<Vec<Path>, u32>,
}

impl<'a, F: Field> BarComplex<'a, F> {
    pub fn new(
        algebra: &'a QuotientAlgebra<F>,
        max_hom: u32,
        max_internal: u32,
    ) -> Result<Self, TorError> {
        if !algebra.ideal().is_homogeneous() {
            return Err(TorError::NotGraded(
                "the bar differential only filters path length for inhomogeneous ideals".into(),
            ));
        }
        assert!(max_internal <= algebra.max_length());
        let monomials: Vec<Vec<Path>> =
            (1..=max_internal).map(|l| algebra.graded_basis(l)).collect();
        let mut pieces = BTreeMap::new();
        for n in 1..=max_hom {
            for l in 1..=max_internal {
                let mut basis = Vec::new();
                let mut tuple = Vec::new();
                collect_tuples(algebra, &monomials, n, l, None, &mut tuple, &mut basis);
                if basis.is_empty() {
                    continue;
                }
                basis.sort();
                let index =
                    basis.iter().enumerate().map(|(i, t)| (t.clone(), i as u32)).collect();
                pieces.insert((n, l), BarPiece { basis, index });
            }
        }
        Ok(BarComplex { algebra, max_internal, monomials, pieces })
    }

    pub fn dim(&self, hom: u32, internal: u32) -> usize {
        self.pieces.get(&(hom, internal)).map(|p| p.basis.len()).unwrap_or(0)
    }

    /// Matrix of the bar differential from `(hom, internal)` to
    /// `(hom - 1, internal)`.
    pub fn differential_matrix(&self, hom: u32, internal: u32) -> SparseMatrix<F> {
        let f = self.algebra.field();
        let source = match self.pieces.get(&(hom, internal)) {
            Some(p) => p,
            None => return SparseMatrix::zero(f, 0, 0),
        };
        let target = self.pieces.get(&(hom - 1, internal));
        let target_dim = target.map(|p| p.basis.len()).unwrap_or(0);
        let mut triplets = Vec::new();
        for (col, tuple) in source.basis.iter().enumerate() {
            if tuple.len() < 2 {
                continue;
            }
            for i in 0..tuple.len() - 1 {
                let merged = self
                    .algebra
                    .multiply(
                        &crate::quiver::PathElement::from_path(f, tuple[i].clone()),
                        &crate::quiver::PathElement::from_path(f, tuple[i + 1].clone()),
                    )
                    .expect("products inside the window stay inside the window");
                if merged.is_zero() {
                    continue;
                }
                let negative = i % 2 == 1; // sign (-1)^(i-1) with i one-based
                for (p, c) in merged.terms() {
                    let mut out = Vec::with_capacity(tuple.len() - 1);
                    out.extend_from_slice(&tuple[..i]);
                    out.push(p.clone());
                    out.extend_from_slice(&tuple[i + 2..]);
                    let row = target
                        .and_then(|t| t.index.get(&out))
                        .copied()
                        .unwrap_or_else(|| panic!("bar tuple missing from registry"));
                    let coeff = if negative { f.neg(c) } else { c.clone() };
                    triplets.push((row as usize, col, coeff));
                }
            }
        }
        SparseMatrix::from_triplets(f, target_dim, source.basis.len(), triplets)
    }

    pub fn max_internal(&self) -> u32 {
        self.max_internal
    }

    pub fn monomial_count(&self, len: u32) -> usize {
        self.monomials[(len - 1) as usize].len()
    }
}

fn collect_tuples<F: Field>(
    algebra: &QuotientAlgebra<F>,
    monomials: &[Vec<Path>],
    slots: u32,
    budget: u32,
    carry: Option<usize>,
    tuple: &mut Vec<Path>,
    out: &mut Vec<Vec<Path>>,
) {
    if slots == 0 {
        if budget == 0 {
            out.push(tuple.clone());
        }
        return;
    }
    if budget < slots {
        return;
    }
    let quiver = algebra.quiver();
    for len in 1..=(budget - (slots - 1)) {
        for p in &monomials[(len - 1) as usize] {
            if carry.is_some_and(|c| quiver.path_src(p) != c) {
                continue;
            }
            tuple.push(p.clone());
            collect_tuples(
                algebra,
                monomials,
                slots - 1,
                budget - len,
                Some(quiver.path_tgt(p)),
                tuple,
                out,
            );
            tuple.pop();
        }
    }
}

/// Graded dimensions of `Tor` for the vertex bimodule, computed from the bar
/// complex. The oracle side of every comparison in the crate.
pub fn tor_via_bar<F: Field>(
    algebra: &QuotientAlgebra<F>,
    max_hom: u32,
    max_internal: u32,
) -> Result<BettiTable, TorError> {
    if !algebra.saturation().trusted() {
        return Err(TorError::Unsaturated);
    }
    // Pieces vanish when the tensor count exceeds the total length, so one
    // extra homological degree suffices for incoming ranks.
    let bar = BarComplex::new(algebra, max_hom + 1, max_internal)?;
    let cells: Vec<(u32, u32)> = (1..=max_hom + 1)
        .flat_map(|n| (1..=max_internal).map(move |l| (n, l)))
        .collect();
    let ranks: HashMap<(u32, u32), usize> =
        par_map(cells, |(n, l)| ((n, l), bar.differential_matrix(n, l).rank()))
            .into_iter()
            .collect();
    let mut table = BettiTable::with_window(max_hom, max_internal);
    for n in 1..=max_hom {
        for l in 1..=max_internal {
            let dim = bar.dim(n, l);
            if dim == 0 {
                continue;
            }
            let h = dim - ranks[&(n, l)] - ranks[&(n + 1, l)];
            if h > 0 {
                table.set(n, l, h, CellTrust::Exact);
            }
        }
    }
    Ok(table)
}

/// Dimensions of the Ext groups dual to a Betti table. Over a field the
/// dual has the same graded dimensions, so this is the identity on tables;
/// it exists so reports can name the dual side explicitly.
pub fn ext_dims(table: &BettiTable) -> BettiTable {
    table.clone()
}
