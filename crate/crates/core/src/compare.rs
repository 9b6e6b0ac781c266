//! Cross-checks between the two homology paths, the quadratic intersection
//! complex, and the Koszulity probe.
//!
//! [`compare_tor`] puts the coalgebra homology side by side with the bar
//! oracle cell by cell. [`koszul_complex`] computes the intersection
//! `⋂ V^p ⊗ R₂ ⊗ V^q` exactly, and [`koszul_test`] combines the Betti table
//! with those intersections into a verdict.

use crate::coalgebra::AinfCoalgebra;
use crate::decor::ResError;
use crate::field::Field;
use crate::linalg::{SparseRow, Subspace};
use crate::quiver::{PathElement, PathWindow, Quiver, QuotientAlgebra};
use crate::tor::{tor_via_bar, BettiTable, TorError};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CompareError {
    #[error(transparent)]
    Res(#[from] ResError),
    #[error(transparent)]
    Tor(#[from] TorError),
}

/// Cell-by-cell comparison of the two Betti computations.
#[derive(Debug, Clone)]
pub struct TorComparison {
    pub coalgebra_side: BettiTable,
    pub bar_side: BettiTable,
    pub first_mismatch: Option<TorMismatch>,
    pub cells_compared: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TorMismatch {
    pub hom: u32,
    pub internal: u32,
    pub coalgebra_dim: usize,
    pub bar_dim: usize,
}

impl TorComparison {
    pub fn agree(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

/// Compare the homology of the coalgebra differential against the bar
/// oracle over the full trusted window of the coalgebra.
pub fn compare_tor<F: Field>(
    coalgebra: &AinfCoalgebra<F>,
    algebra: &QuotientAlgebra<F>,
) -> Result<TorComparison, CompareError> {
    let coalgebra_side = coalgebra.homology()?;
    let max_internal = coalgebra.max_internal();
    let max_hom = coalgebra.max_hom();
    let bar_side = tor_via_bar(algebra, max_hom, max_internal)?;
    let mut first_mismatch = None;
    let mut cells = 0usize;
    'outer: for n in 1..=max_hom {
        for l in 1..=max_internal {
            if !coalgebra_side.is_trusted(n, l) || !bar_side.is_trusted(n, l) {
                continue;
            }
            cells += 1;
            let a = coalgebra_side.dim(n, l);
            let b = bar_side.dim(n, l);
            if a != b {
                first_mismatch = Some(TorMismatch {
                    hom: n,
                    internal: l,
                    coalgebra_dim: a,
                    bar_dim: b,
                });
                break 'outer;
            }
        }
    }
    Ok(TorComparison { coalgebra_side, bar_side, first_mismatch, cells_compared: cells })
}

/// The quadratic part of the ideal as spanning path elements, one per
/// canonical basis row of level two.
pub fn quadratic_part<F: Field>(algebra: &QuotientAlgebra<F>) -> Vec<PathElement<F>> {
    let field = algebra.field();
    let quiver = algebra.quiver();
    let mut out = Vec::new();
    for s in 0..quiver.vertex_count() {
        for t in 0..quiver.vertex_count() {
            let piece = algebra.piece(s, t);
            for (i, level) in piece.row_levels.iter().enumerate() {
                if *level == 2 {
                    out.push(piece.row_element(field, i));
                }
            }
        }
    }
    out
}

/// The degree-`n` piece of the quadratic intersection complex:
/// `⋂_{p+q=n-2} V^p ⊗ R₂ ⊗ V^q`, as a subspace of the full length-`n` path
/// space.
pub fn koszul_complex<F: Field>(
    field: F,
    quiver: &Quiver,
    r2: &[PathElement<F>],
    n: u32,
) -> Subspace<F> {
    assert!(n >= 2);
    let window = PathWindow::exact_global(quiver, n);
    let ambient = window.len();
    let mut intersectands = Vec::new();
    for p in 0..=(n - 2) {
        let q = n - 2 - p;
        let mut rows: Vec<SparseRow<F>> = Vec::new();
        for r in r2 {
            let lefts: Vec<Option<crate::quiver::Path>> = if p == 0 {
                vec![None]
            } else {
                quiver.paths_of_length(p).into_iter().map(Some).collect()
            };
            for left in &lefts {
                let after_left = match left {
                    None => r.clone(),
                    Some(u) => r.mul_path_left(quiver, field, u),
                };
                if after_left.is_zero() {
                    continue;
                }
                if q == 0 {
                    if let Some(row) = window.to_row(&after_left) {
                        rows.push(row);
                    }
                    continue;
                }
                for v in quiver.paths_of_length(q) {
                    let product = after_left.mul_path_right(quiver, field, &v);
                    if !product.is_zero() {
                        if let Some(row) = window.to_row(&product) {
                            rows.push(row);
                        }
                    }
                }
            }
        }
        intersectands.push(Subspace::from_spanning_rows(field, ambient, rows));
    }
    Subspace::intersect(field, ambient, &intersectands)
        .expect("intersectands share the length-n ambient space")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KoszulVerdict {
    /// All checked Tor cells sit on the diagonal.
    KoszulUpToBound,
    /// Witness cell `(hom, internal)` off the diagonal.
    NotKoszul { witness: (u32, u32) },
    /// The window cannot certify the requested bound.
    Inconclusive { reason: String },
}

#[derive(Debug, Clone)]
pub struct KoszulReport {
    pub verdict: KoszulVerdict,
    /// Whether the ideal generated by its quadratic part has the same
    /// graded pieces as the presented ideal within the window.
    pub quadratic_generated: bool,
    pub betti: Option<BettiTable>,
    /// `dim B_n` of the intersection complex for `n = 1..=bound` (`B_1` is
    /// the arrow space).
    pub intersection_dims: Vec<usize>,
    /// On an affirmative verdict: `dim Tor_{n,n} == dim B_n` for each `n`.
    pub diagonal_match: bool,
}

/// Probe Koszulity up to a homological bound: Tor must be concentrated on
/// the diagonal and the diagonal must match the quadratic intersection
/// complex.
pub fn koszul_test<F: Field>(algebra: &QuotientAlgebra<F>, bound: u32) -> KoszulReport {
    let field = algebra.field();
    let quiver = algebra.quiver().clone();
    let max_internal = algebra.max_length();

    let r2 = quadratic_part(algebra);
    let mut intersection_dims = vec![quiver.arrow_count()];
    for n in 2..=bound.min(max_internal) {
        intersection_dims.push(koszul_complex(field, &quiver, &r2, n).dim());
    }

    // Quadratic generation: recompute the pieces from the quadratic part.
    let quadratic_ideal = crate::quiver::IdealPresentation::new(r2.clone());
    let mut quadratic_generated = true;
    'pieces: for s in 0..quiver.vertex_count() {
        for t in 0..quiver.vertex_count() {
            let original = algebra.piece(s, t);
            let from_r2 =
                quadratic_ideal.filtered_piece(&quiver, field, s, t, max_internal, 0);
            if original.level_dims(max_internal) != from_r2.level_dims(max_internal) {
                quadratic_generated = false;
                break 'pieces;
            }
        }
    }

    if bound > max_internal {
        return KoszulReport {
            verdict: KoszulVerdict::Inconclusive {
                reason: format!(
                    "bound {bound} exceeds the internal window {max_internal}; \
                     diagonal cells beyond it cannot be inspected"
                ),
            },
            quadratic_generated,
            betti: None,
            intersection_dims,
            diagonal_match: false,
        };
    }

    let betti = match tor_via_bar(algebra, bound, max_internal) {
        Ok(t) => t,
        Err(e) => {
            return KoszulReport {
                verdict: KoszulVerdict::Inconclusive { reason: e.to_string() },
                quadratic_generated,
                betti: None,
                intersection_dims,
                diagonal_match: false,
            };
        }
    };

    let mut witness = None;
    'scan: for n in 1..=bound {
        for l in 1..=max_internal {
            if l != n && betti.dim(n, l) > 0 {
                witness = Some((n, l));
                break 'scan;
            }
        }
    }
    if let Some(w) = witness {
        return KoszulReport {
            verdict: KoszulVerdict::NotKoszul { witness: w },
            quadratic_generated,
            betti: Some(betti),
            intersection_dims,
            diagonal_match: false,
        };
    }
    let diagonal_match = (1..=bound)
        .all(|n| betti.dim(n, n) == intersection_dims[(n - 1) as usize]);
    KoszulReport {
        verdict: KoszulVerdict::KoszulUpToBound,
        quadratic_generated,
        betti: Some(betti),
        intersection_dims,
        diagonal_match,
    }
}
