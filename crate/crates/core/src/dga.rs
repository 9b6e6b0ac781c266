//! The free dg algebra resolution on decorated open bracketings.
//!
//! Degree zero is the truncated path space; a basis vector in degree `n` is
//! an open contracted bracketing with `n` bracket pairs. The differential
//! removes the `m`-th left bracket with sign `(-1)^(m-1)` (all brackets
//! counted, because the Leibniz rule is left-handed), the product is
//! concatenation, the homotopy wraps non-outer-bracketed words in one more
//! bracket, and the augmentation sends degree zero to normal forms in the
//! quotient algebra.
//!
//! [`cobar_differential`] rebuilds the differential from the coalgebra
//! coproducts through the shift signs and the Leibniz rule;
//! [`compare_cobar`] checks the two constructions agree entry for entry,
//! which pins every sign in the crate to one consistent convention.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::bracket::Sym;
use crate::coalgebra::{decorated_piece, AinfCoalgebra, GradedPiece};
use crate::decor::{
    remove_bracket_decorated, Combo, DecoratedWord, ResContext, ResError,
};
use crate::field::Field;
use crate::linalg::SparseMatrix;
use crate::par::par_map;
use crate::quiver::{Path, PathElement, QuiverError};
use crate::tor::{BettiTable, CellTrust};

/// The free resolution, truncated at internal degree `max_internal` and
/// homological degree `max_hom`.
#[derive(Debug)]
pub struct DgAlgebra<F: Field> {
    ctx: Arc<ResContext<F>>,
    max_internal: u32,
    max_hom: u32,
    pieces: BTreeMap<(u32, u32), GradedPiece>,
}

/// Build the resolution. `max_hom` defaults to twice the internal
/// truncation, which exceeds the bracket-pair bound.
pub fn build_dga<F: Field>(
    ctx: Arc<ResContext<F>>,
    max_internal: u32,
    max_hom: Option<u32>,
) -> DgAlgebra<F> {
    assert!(max_internal >= 1, "truncation must be positive");
    assert!(
        max_internal <= ctx.max_internal(),
        "resolution truncation exceeds the presentation window"
    );
    let max_hom = max_hom.unwrap_or(2 * max_internal);
    let keys: Vec<(u32, u32)> = (0..=max_hom)
        .flat_map(|n| (1..=max_internal).map(move |l| (n, l)))
        .collect();
    let ctx_ref = &ctx;
    let pieces = par_map(keys, |(n, l)| {
        ((n, l), GradedPiece::new(decorated_piece(ctx_ref, false, n, l)))
    })
    .into_iter()
    .filter(|(_, p)| p.dim() > 0)
    .collect();
    DgAlgebra { ctx, max_internal, max_hom, pieces }
}

impl<F: Field> DgAlgebra<F> {
    pub fn ctx(&self) -> &Arc<ResContext<F>> {
        &self.ctx
    }
    pub fn max_internal(&self) -> u32 {
        self.max_internal
    }
    pub fn max_hom(&self) -> u32 {
        self.max_hom
    }
    pub fn piece(&self, hom: u32, internal: u32) -> Option<&GradedPiece> {
        self.pieces.get(&(hom, internal))
    }
    pub fn dim(&self, hom: u32, internal: u32) -> usize {
        self.piece(hom, internal).map(|p| p.dim()).unwrap_or(0)
    }
    pub fn pieces(&self) -> impl Iterator<Item = (&(u32, u32), &GradedPiece)> {
        self.pieces.iter()
    }

    /// Homological degree of a basis vector: its bracket-pair count.
    pub fn hom_degree(w: &DecoratedWord) -> u32 {
        w.shape.pairs()
    }

    /// The differential: signed sum over all left-bracket removals.
    pub fn differential(&self, w: &DecoratedWord) -> Result<Combo<F>, ResError> {
        let f = self.ctx.field();
        let mut out = Combo::zero();
        for m in 1..=w.shape.pairs() {
            let (combo, _) = remove_bracket_decorated(&self.ctx, w, m as usize)?;
            let sign = if m % 2 == 1 { f.one() } else { f.neg(&f.one()) };
            out.add_scaled(f, &combo, &sign);
        }
        Ok(out)
    }

    pub fn differential_combo(&self, c: &Combo<F>) -> Result<Combo<F>, ResError> {
        let f = self.ctx.field();
        let mut out = Combo::zero();
        for (w, coeff) in c.iter() {
            let image = self.differential(w)?;
            out.add_scaled(f, &image, coeff);
        }
        Ok(out)
    }

    /// Product of basis vectors: concatenation, zero across mismatched
    /// endpoints, an overflow error outside the internal window.
    pub fn multiply(
        &self,
        u: &DecoratedWord,
        v: &DecoratedWord,
    ) -> Result<Combo<F>, ResError> {
        let f = self.ctx.field();
        let du = u.internal_degree(&self.ctx);
        let dv = v.internal_degree(&self.ctx);
        if du + dv > self.max_internal {
            return Err(ResError::TruncationOverflow(du, dv, self.max_internal));
        }
        if u.endpoints(&self.ctx).1 != v.endpoints(&self.ctx).0 {
            return Ok(Combo::zero());
        }
        Ok(Combo::single(f, DecoratedWord::concat(&[u.clone(), v.clone()])))
    }

    pub fn multiply_combo(&self, a: &Combo<F>, b: &Combo<F>) -> Result<Combo<F>, ResError> {
        let f = self.ctx.field();
        let mut out = Combo::zero();
        for (u, cu) in a.iter() {
            for (v, cv) in b.iter() {
                let prod = self.multiply(u, v)?;
                out.add_scaled(f, &prod, &f.mul(cu, cv));
            }
        }
        Ok(out)
    }

    /// The contracting homotopy on a positive-degree basis vector: wrap in
    /// an outer bracket, zero if the word is already outer-bracketed.
    pub fn homotopy_positive(&self, w: &DecoratedWord) -> Combo<F> {
        let f = self.ctx.field();
        debug_assert!(w.shape.pairs() >= 1);
        match w.shape.add_outer() {
            Ok(shape) => Combo::single(f, DecoratedWord::new(shape, w.decor.clone())),
            Err(_) => Combo::zero(),
        }
    }

    /// The homotopy on a degree-zero element, defined exactly on the ideal:
    /// express the element in the canonical ideal basis, wrap each basis
    /// vector as `[*]`.
    pub fn homotopy_degree_zero(&self, e: &PathElement<F>) -> Result<Combo<F>, ResError> {
        let f = self.ctx.field();
        let coords = self.ctx.ideal_coords(e)?;
        let mut out = Combo::zero();
        let star_shape = crate::bracket::Bracketing::from_word(vec![
            Sym::Open,
            Sym::Star,
            Sym::Close,
        ])
        .unwrap();
        for (id, c) in coords {
            out.add_term(
                f,
                DecoratedWord::new(star_shape.clone(), vec![crate::decor::Decor::Star(id)]),
                c,
            );
        }
        Ok(out)
    }

    /// The homotopy on a mixed combination; degree-zero terms are gathered
    /// and must lie in the ideal.
    pub fn homotopy_combo(&self, c: &Combo<F>) -> Result<Combo<F>, ResError> {
        let f = self.ctx.field();
        let mut out = Combo::zero();
        let mut degree_zero = PathElement::zero();
        for (w, coeff) in c.iter() {
            if w.shape.pairs() == 0 {
                degree_zero.add_term(
                    f,
                    w.as_path().expect("degree-zero words are plain"),
                    coeff.clone(),
                );
            } else {
                out.add_scaled(f, &self.homotopy_positive(w), coeff);
            }
        }
        if !degree_zero.is_zero() {
            let wrapped = self.homotopy_degree_zero(&degree_zero)?;
            out.add_scaled(f, &wrapped, &f.one());
        }
        Ok(out)
    }

    /// The augmentation: normal form on degree zero, zero elsewhere.
    pub fn rho(&self, w: &DecoratedWord) -> Result<PathElement<F>, QuiverError> {
        if w.shape.pairs() > 0 {
            return Ok(PathElement::zero());
        }
        let f = self.ctx.field();
        let path = w.as_path().expect("degree-zero words are plain");
        self.ctx.algebra().normal_form(&PathElement::from_path(f, path))
    }

    /// Matrix of the differential from `(hom, internal)` to
    /// `(hom - 1, internal)`; valid in the graded case.
    pub fn differential_matrix(
        &self,
        hom: u32,
        internal: u32,
    ) -> Result<SparseMatrix<F>, ResError> {
        assert!(hom >= 1);
        self.map_matrix(hom, internal, |w| self.differential(w))
    }

    fn map_matrix(
        &self,
        hom: u32,
        internal: u32,
        map: impl Fn(&DecoratedWord) -> Result<Combo<F>, ResError>,
    ) -> Result<SparseMatrix<F>, ResError> {
        let f = self.ctx.field();
        let source = match self.piece(hom, internal) {
            Some(p) => p,
            None => return Ok(SparseMatrix::zero(f, 0, 0)),
        };
        let empty = GradedPiece::new(Vec::new());
        let target = self.piece(hom - 1, internal).unwrap_or(&empty);
        let mut triplets = Vec::new();
        for (col, w) in source.basis.iter().enumerate() {
            let image = map(w)?;
            for (word, coeff) in image.iter() {
                let row = target.position(word).unwrap_or_else(|| {
                    panic!("differential output missing from the registry: {word:?}")
                });
                triplets.push((row as usize, col, coeff.clone()));
            }
        }
        Ok(SparseMatrix::from_triplets(f, target.dim(), source.dim(), triplets))
    }

    /// Graded homology dimensions, homological degree zero included.
    pub fn homology(&self) -> Result<BettiTable, ResError> {
        if !self.ctx.saturation().trusted() {
            return Err(ResError::Untrusted(
                "ideal pieces did not stabilize; homology dimensions would be unreliable".into(),
            ));
        }
        if !self.ctx.is_homogeneous() {
            return Err(ResError::Untrusted(
                "the differential only filters internal degree for inhomogeneous ideals".into(),
            ));
        }
        let cells: Vec<(u32, u32)> = (1..=self.max_hom)
            .flat_map(|n| (1..=self.max_internal).map(move |l| (n, l)))
            .collect();
        let ranks: HashMap<(u32, u32), usize> = par_map(cells, |(n, l)| {
            let rank = self.differential_matrix(n, l).map(|m| m.rank());
            ((n, l), rank)
        })
        .into_iter()
        .map(|(k, r)| Ok((k, r?)))
        .collect::<Result<_, ResError>>()?;
        let mut table = BettiTable::with_window(self.max_hom, self.max_internal);
        for n in 0..=self.max_hom {
            for l in 1..=self.max_internal {
                let dim = self.dim(n, l);
                let rank_out = if n >= 1 { ranks[&(n, l)] } else { 0 };
                let rank_in = if n + 1 <= self.max_hom { ranks[&(n + 1, l)] } else { 0 };
                // Bracket pairs are bounded by twice the leaf count, so a
                // piece beyond the built window is empty iff n+1 > 2l - 1.
                let trusted = n + 1 <= self.max_hom || n + 1 > 2 * l - 1;
                if dim == 0 {
                    continue;
                }
                let h = dim - rank_out - rank_in;
                if h > 0 || !trusted {
                    table.set(
                        n,
                        l,
                        h,
                        if trusted { CellTrust::Exact } else { CellTrust::Untrusted },
                    );
                }
            }
        }
        Ok(table)
    }

    /// Rank of the augmentation on the degree-zero piece of one internal
    /// degree; equals the graded dimension of the quotient algebra.
    pub fn rho_rank(&self, internal: u32) -> usize {
        let f = self.ctx.field();
        let algebra = self.ctx.algebra();
        let basis = algebra.graded_basis(internal);
        let index: HashMap<&Path, usize> = basis.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let source = match self.piece(0, internal) {
            Some(p) => p,
            None => return 0,
        };
        let mut triplets = Vec::new();
        for (col, w) in source.basis.iter().enumerate() {
            let nf = self.rho(w).expect("degree-zero paths fit the window");
            for (p, c) in nf.terms() {
                triplets.push((index[p], col, c.clone()));
            }
        }
        SparseMatrix::from_triplets(f, basis.len(), source.dim(), triplets).rank()
    }
}

// ---------------------------------------------------------------------------
// Cobar repackaging of the coalgebra differential
// ---------------------------------------------------------------------------

/// The differential a coalgebra induces on one generator under the cobar
/// identification: `-Σ_k (shift signs) Δ_k`, with the `k`-fold shift acting
/// by `(-1)^(Σ (k-i)·d_i)` on factor degrees.
fn cobar_generator_differential<F: Field>(
    k: &AinfCoalgebra<F>,
    w: &DecoratedWord,
) -> Result<Combo<F>, ResError> {
    let f = k.ctx().field();
    let mut out = Combo::zero();
    // k = 1 component: -Δ₁.
    let d1 = k.delta1(w)?;
    out.add_scaled(f, &d1, &f.neg(&f.one()));
    // higher components
    for (arity, tensor) in k.delta_all_higher(w)? {
        debug_assert!(arity >= 2);
        for (factors, coeff) in tensor.iter() {
            let degrees: Vec<u32> =
                factors.iter().map(|x| AinfCoalgebra::<F>::hom_degree(x)).collect();
            let shift_exp: u32 = degrees
                .iter()
                .enumerate()
                .map(|(i, d)| (degrees.len() as u32 - 1 - i as u32) * d)
                .sum();
            let mut c = f.neg(coeff);
            if shift_exp % 2 == 1 {
                c = f.neg(&c);
            }
            out.add_term(f, DecoratedWord::concat(factors), c);
        }
    }
    Ok(out)
}

/// The packaged differential on a decorated open word: Leibniz over the
/// top-level closed factors with the generator differential above.
pub fn cobar_differential<F: Field>(
    coalgebra: &AinfCoalgebra<F>,
    w: &DecoratedWord,
) -> Result<Combo<F>, ResError> {
    let f = coalgebra.ctx().field();
    let factors = w.split_top_level();
    let mut out = Combo::zero();
    let mut prefix_degree = 0u32;
    for (i, factor) in factors.iter().enumerate() {
        let dg = cobar_generator_differential(coalgebra, factor)?;
        if !dg.is_zero() {
            let sign = if prefix_degree % 2 == 0 { f.one() } else { f.neg(&f.one()) };
            for (word, coeff) in dg.iter() {
                let mut parts: Vec<DecoratedWord> = Vec::with_capacity(factors.len());
                parts.extend_from_slice(&factors[..i]);
                parts.push(word.clone());
                parts.extend_from_slice(&factors[i + 1..]);
                // concat of mixed-degree parts; empty differentials drop out
                let assembled = DecoratedWord::concat(&parts);
                out.add_term(f, assembled, f.mul(coeff, &sign));
            }
        }
        // Cobar degree of a generator is its bracket-pair count.
        prefix_degree += factor.shape.pairs();
    }
    Ok(out)
}

/// Compare the direct differential of the resolution with the cobar
/// packaging of the coalgebra, entry for entry over the whole window.
pub fn compare_cobar<F: Field>(
    coalgebra: &AinfCoalgebra<F>,
    dga: &DgAlgebra<F>,
) -> Result<Option<(u32, u32, DecoratedWord)>, ResError> {
    let cells: Vec<((u32, u32), Vec<DecoratedWord>)> = dga
        .pieces()
        .filter(|((n, _), _)| *n >= 1)
        .map(|(key, piece)| (*key, piece.basis.clone()))
        .collect();
    let results = par_map(cells, |((n, l), basis)| -> Result<Option<_>, ResError> {
        for w in &basis {
            let direct = dga.differential(w)?;
            let packaged = cobar_differential(coalgebra, w)?;
            if direct != packaged {
                return Ok(Some((n, l, w.clone())));
            }
        }
        Ok(None)
    });
    let mut first: Option<(u32, u32, DecoratedWord)> = None;
    for r in results {
        if let Some(m) = r? {
            first = match first {
                None => Some(m),
                Some(old) => {
                    if (m.0, m.1) < (old.0, old.1) {
                        Some(m)
                    } else {
                        Some(old)
                    }
                }
            };
        }
    }
    Ok(first)
}

// ---------------------------------------------------------------------------
// The classical cobar construction over integer sequences
// ---------------------------------------------------------------------------

/// The dg algebra on sequence-indexed tensor powers: a summand per finite
/// sequence of positive integers, with the splitting differential.
#[derive(Debug)]
pub struct SequenceAlgebra<F: Field> {
    field: F,
    max_internal: u32,
    pieces: BTreeMap<(u32, u32), SeqPiece>,
}

type SeqKey = (Vec<u32>, Path);

#[derive(Debug, Clone)]
struct SeqPiece {
    basis: Vec<SeqKey>,
    index: HashMap<SeqKey, u32>,
}

/// Degree of a sequence: sum of (part - 1).
fn seq_degree(seq: &[u32]) -> u32 {
    seq.iter().map(|p| p - 1).sum()
}

fn compositions(total: u32) -> Vec<Vec<u32>> {
    if total == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=total {
        for rest in compositions(total - first) {
            let mut c = Vec::with_capacity(rest.len() + 1);
            c.push(first);
            c.extend(rest);
            out.push(c);
        }
    }
    out
}

impl<F: Field> SequenceAlgebra<F> {
    pub fn new(field: F, quiver: crate::quiver::Quiver, max_internal: u32) -> Self {
        let mut pieces: BTreeMap<(u32, u32), Vec<SeqKey>> = BTreeMap::new();
        for total in 1..=max_internal {
            let paths = quiver.paths_of_length(total);
            for seq in compositions(total) {
                let degree = seq_degree(&seq);
                for p in &paths {
                    pieces
                        .entry((degree, total))
                        .or_default()
                        .push((seq.clone(), p.clone()));
                }
            }
        }
        let pieces = pieces
            .into_iter()
            .map(|(key, mut basis)| {
                basis.sort();
                let index =
                    basis.iter().enumerate().map(|(i, k)| (k.clone(), i as u32)).collect();
                (key, SeqPiece { basis, index })
            })
            .collect();
        SequenceAlgebra { field, max_internal, pieces }
    }

    pub fn dim(&self, degree: u32, internal: u32) -> usize {
        self.pieces.get(&(degree, internal)).map(|p| p.basis.len()).unwrap_or(0)
    }

    pub fn max_internal(&self) -> u32 {
        self.max_internal
    }

    /// The splitting differential on one basis vector, as signed target keys.
    pub fn differential(&self, key: &SeqKey) -> Vec<(SeqKey, bool)> {
        let (seq, path) = key;
        let mut out = Vec::new();
        for (j, part) in seq.iter().enumerate() {
            for a in 1..*part {
                let b = part - a;
                let mut split = Vec::with_capacity(seq.len() + 1);
                split.extend_from_slice(&seq[..j]);
                split.push(a);
                split.push(b);
                split.extend_from_slice(&seq[j + 1..]);
                // sign: (-1)^(degree of the prefix ending at the first half)
                let prefix_degree = seq_degree(&seq[..j]) + (a - 1);
                out.push(((split, path.clone()), prefix_degree % 2 == 1));
            }
        }
        out
    }

    pub fn differential_matrix(&self, degree: u32, internal: u32) -> SparseMatrix<F> {
        let f = self.field;
        let source = match self.pieces.get(&(degree, internal)) {
            Some(p) => p,
            None => return SparseMatrix::zero(f, 0, 0),
        };
        let target = self.pieces.get(&(degree - 1, internal));
        let target_dim = target.map(|p| p.basis.len()).unwrap_or(0);
        let mut triplets = Vec::new();
        for (col, key) in source.basis.iter().enumerate() {
            for (out_key, negative) in self.differential(key) {
                let row = target
                    .and_then(|t| t.index.get(&out_key))
                    .copied()
                    .expect("split sequence stays in the registry");
                let c = if negative { f.neg(&f.one()) } else { f.one() };
                triplets.push((row as usize, col, c));
            }
        }
        SparseMatrix::from_triplets(f, target_dim, source.basis.len(), triplets)
    }

    /// Homology dimensions per (degree, internal degree).
    pub fn homology(&self) -> BTreeMap<(u32, u32), usize> {
        let mut out = BTreeMap::new();
        for internal in 1..=self.max_internal {
            let max_degree = internal - 1;
            let ranks: Vec<usize> = (0..=max_degree + 1)
                .map(|d| {
                    if d == 0 {
                        0
                    } else {
                        self.differential_matrix(d, internal).rank()
                    }
                })
                .collect();
            for d in 0..=max_degree {
                let dim = self.dim(d, internal);
                if dim == 0 {
                    continue;
                }
                let rank_in = if d + 1 <= max_degree { ranks[d as usize + 1] } else { 0 };
                let h = dim - ranks[d as usize] - rank_in;
                if h > 0 {
                    out.insert((d, internal), h);
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bracket::Bracketing;
    use crate::coalgebra::build_coalgebra;
    use crate::decor::Decor;
    use crate::field::Rationals;
    use crate::quiver::{IdealPresentation, Quiver, QuotientAlgebra};

    fn ctx_for(arrows: &[&str], relations: &[&str], n: u32) -> Arc<ResContext<Rationals>> {
        let q = Quiver::loops(arrows);
        let ideal = IdealPresentation::parse(&q, Rationals, relations).unwrap();
        ResContext::new(QuotientAlgebra::new(Rationals, q, ideal, n))
    }

    #[test]
    fn degree_zero_is_the_path_basis() {
        let ctx = ctx_for(&["x"], &["x*x"], 3);
        let f = build_dga(ctx, 3, None);
        for l in 1..=3u32 {
            assert_eq!(f.dim(0, l), 1, "one path of each length");
        }
    }

    #[test]
    fn degree_one_shapes_at_internal_three() {
        // I = (x²), internal degree 3, one bracket pair: shapes [*]1 and
        // 1[*] with the star of level 2, plus [*] with the level-3 star.
        let ctx = ctx_for(&["x"], &["x*x"], 4);
        let f = build_dga(ctx, 4, None);
        let piece = f.piece(1, 3).unwrap();
        let texts: Vec<String> =
            piece.basis.iter().map(|w| w.shape.text()).collect();
        assert_eq!(piece.dim(), 3);
        assert!(texts.contains(&"[*]1".to_string()));
        assert!(texts.contains(&"1[*]".to_string()));
        assert!(texts.contains(&"[*]".to_string()));
    }

    #[test]
    fn degree_two_contains_nested_shape() {
        let ctx = ctx_for(&["x"], &["x*x"], 4);
        let f = build_dga(ctx, 4, None);
        let piece = f.piece(2, 3).unwrap();
        assert!(piece.basis.iter().any(|w| w.shape.text() == "[[*]1]"));
    }

    #[test]
    fn differential_signs_on_nested_shape() {
        let ctx = ctx_for(&["x"], &["x*x"], 4);
        let f = build_dga(ctx.clone(), 4, None);
        let star2 = ctx.stars().iter().find(|(_, v)| v.level == 2).unwrap().0;
        let star3 = ctx.stars().iter().find(|(_, v)| v.level == 3).unwrap().0;
        let w = DecoratedWord::new(
            Bracketing::parse("[[*]1]").unwrap(),
            vec![Decor::Star(star2), Decor::Arrow(0)],
        );
        let image = f.differential(&w).unwrap();
        // m=1 (outer) gives +[*]1, m=2 merges into -[*] with the level-3 star
        let mut expected = Combo::zero();
        expected.add_term(
            Rationals,
            DecoratedWord::new(
                Bracketing::parse("[*]1").unwrap(),
                vec![Decor::Star(star2), Decor::Arrow(0)],
            ),
            Rationals.from_int(1),
        );
        expected.add_term(
            Rationals,
            DecoratedWord::new(Bracketing::parse("[*]").unwrap(), vec![Decor::Star(star3)]),
            Rationals.from_int(-1),
        );
        assert_eq!(image, expected);
    }

    #[test]
    fn differential_image_of_star_is_the_ideal_element() {
        // d(h(r)) = r for a degree-zero ideal element r.
        let ctx = ctx_for(&["x"], &["x*x"], 4);
        let f = build_dga(ctx.clone(), 4, None);
        let q = ctx.quiver().clone();
        let x2 = PathElement::from_path(Rationals, q.path(&["x", "x"]).unwrap());
        let wrapped = f.homotopy_degree_zero(&x2).unwrap();
        let image = f.differential_combo(&wrapped).unwrap();
        assert_eq!(image.as_path_element(Rationals).unwrap(), x2);
    }

    #[test]
    fn differential_squares_to_zero_small() {
        for relations in [&["x*y - y*x"][..], &["x*x", "x*y", "y*x", "y*y"][..]] {
            let ctx = ctx_for(&["x", "y"], relations, 4);
            let f = build_dga(ctx, 4, None);
            for (_, piece) in f.pieces() {
                for w in &piece.basis {
                    let once = f.differential(w).unwrap();
                    let twice = f.differential_combo(&once).unwrap();
                    assert!(twice.is_zero(), "d² ≠ 0 on {w:?}");
                }
            }
        }
    }

    #[test]
    fn product_is_concatenation_and_respects_leibniz() {
        let ctx = ctx_for(&["x"], &["x*x"], 6);
        let f = build_dga(ctx.clone(), 6, None);
        let field = Rationals;
        let star2 = ctx.stars().iter().find(|(_, v)| v.level == 2).unwrap().0;
        let star = DecoratedWord::new(
            Bracketing::parse("[*]").unwrap(),
            vec![Decor::Star(star2)],
        );
        let one = DecoratedWord::new(
            Bracketing::parse("1").unwrap(),
            vec![Decor::Arrow(0)],
        );
        // ([*])·(1) = [*]1
        let prod = f.multiply(&star, &one).unwrap();
        let (word, _) = prod.iter().next().unwrap();
        assert_eq!(word.shape.text(), "[*]1");

        // Leibniz on u = v = [*], both of degree 1:
        // d(uv) = (du)v - u(dv).
        let uv = f.multiply(&star, &star).unwrap();
        let lhs = f.differential_combo(&uv).unwrap();
        let du = f.differential(&star).unwrap();
        let mut rhs = f.multiply_combo(&du, &Combo::single(field, star.clone())).unwrap();
        let u_dv = f.multiply_combo(&Combo::single(field, star.clone()), &du).unwrap();
        rhs.add_scaled(field, &u_dv, &field.from_int(-1));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn degree_zero_products_are_path_concatenation() {
        let ctx = ctx_for(&["x", "y"], &["x*y - y*x"], 4);
        let f = build_dga(ctx.clone(), 4, None);
        let x = DecoratedWord::new(Bracketing::parse("1").unwrap(), vec![Decor::Arrow(0)]);
        let y = DecoratedWord::new(Bracketing::parse("1").unwrap(), vec![Decor::Arrow(1)]);
        let xy = f.multiply(&x, &y).unwrap();
        let (word, _) = xy.iter().next().unwrap();
        assert_eq!(word.as_path().unwrap(), ctx.quiver().path(&["x", "y"]).unwrap());
        // overflow is flagged
        let ctx_small = ctx_for(&["x"], &[], 1);
        let g = build_dga(ctx_small, 1, None);
        let xx = g.multiply(&x, &x);
        assert!(matches!(xx, Err(ResError::TruncationOverflow(1, 1, 1))));
    }

    #[test]
    fn homotopy_identities() {
        let ctx = ctx_for(&["x"], &["x*x"], 5);
        let f = build_dga(ctx.clone(), 5, None);
        let field = Rationals;
        // h(x²) is the wrapped star
        let q = ctx.quiver().clone();
        let x2 = PathElement::from_path(field, q.path(&["x", "x"]).unwrap());
        let h = f.homotopy_degree_zero(&x2).unwrap();
        assert_eq!(h.len(), 1);
        let (word, _) = h.iter().next().unwrap();
        assert_eq!(word.shape.text(), "[*]");
        // h of an outer-bracketed word vanishes
        assert!(f.homotopy_combo(&h).unwrap().is_zero());
        // h is undefined off the ideal
        let x = PathElement::from_path(field, q.path(&["x"]).unwrap());
        assert!(matches!(f.homotopy_degree_zero(&x), Err(ResError::NotInIdeal)));
    }

    #[test]
    fn contraction_on_kernel_basis() {
        // dh + hd = id on the kernel ideal: positive degrees, plus the
        // ideal part in degree zero.
        let ctx = ctx_for(&["x", "y"], &["x*y - y*x"], 4);
        let f = build_dga(ctx.clone(), 4, None);
        let field = Rationals;
        for (key, piece) in f.pieces() {
            if key.0 == 0 {
                continue;
            }
            for w in &piece.basis {
                let single = Combo::single(field, w.clone());
                let dh = f.differential_combo(&f.homotopy_combo(&single).unwrap()).unwrap();
                let hd = f.homotopy_combo(&f.differential(w).unwrap()).unwrap();
                let mut sum = dh;
                sum.add_scaled(field, &hd, &field.one());
                assert_eq!(sum, single, "dh + hd ≠ id on {w:?}");
            }
        }
        // degree zero: basis of the ideal
        for (_, sv) in ctx.stars().iter() {
            let e = sv.element.clone();
            let dh = f.differential_combo(&f.homotopy_degree_zero(&e).unwrap()).unwrap();
            assert_eq!(dh.as_path_element(field).unwrap(), e);
        }
    }

    #[test]
    fn rho_vanishes_on_positive_degrees_and_boundaries() {
        let ctx = ctx_for(&["x"], &["x*x"], 4);
        let f = build_dga(ctx.clone(), 4, None);
        let field = Rationals;
        // x² maps to zero in the quotient
        let q = ctx.quiver().clone();
        let x2w = DecoratedWord::from_path(&q.path(&["x", "x"]).unwrap());
        assert!(f.rho(&x2w).unwrap().is_zero());
        // any degree-one vector maps to zero, and ρ∘d = 0 there
        if let Some(piece) = f.piece(1, 2) {
            for w in &piece.basis {
                assert!(f.rho(w).unwrap().is_zero());
                let image = f.differential(w).unwrap();
                let mut total = PathElement::zero();
                for (word, c) in image.iter() {
                    let nf = f.rho(word).unwrap();
                    total = total.add(field, &nf.scale(field, c));
                }
                assert!(total.is_zero(), "ρ∘d ≠ 0");
            }
        }
        // surjectivity per degree
        for l in 1..=4u32 {
            assert_eq!(f.rho_rank(l), ctx.algebra().graded_dimension(l));
        }
    }

    #[test]
    fn homology_is_the_quotient_algebra() {
        let ctx = ctx_for(&["x", "y"], &["x*y - y*x"], 4);
        let f = build_dga(ctx.clone(), 4, None);
        let h = f.homology().unwrap();
        for l in 1..=4u32 {
            assert_eq!(h.dim(0, l), l as usize + 1, "H₀ at length {l}");
            for n in 1..=f.max_hom() {
                assert_eq!(h.dim(n, l), 0, "H_{n} at length {l}");
            }
        }
    }

    #[test]
    fn cobar_packaging_agrees_with_direct_differential() {
        let ctx = ctx_for(&["x"], &["x*x"], 4);
        let k = build_coalgebra(ctx.clone(), 4, None);
        let f = build_dga(ctx, 4, None);
        assert!(compare_cobar(&k, &f).unwrap().is_none());
    }

    #[test]
    fn generators_are_arrows_plus_wrapped_words() {
        // closed words: either the bare input or an outer-bracketed word
        // that the homotopy produces from a non-wrapped one.
        let ctx = ctx_for(&["x"], &["x*x"], 4);
        let k = build_coalgebra(ctx, 4, None);
        for (key, piece) in k.pieces() {
            for w in &piece.basis {
                if key.0 == 1 {
                    assert_eq!(w.shape.text(), "1");
                } else {
                    // wrapping it again must fail: exactly the homotopy image
                    assert!(w.shape.is_outer_bracketed());
                    assert!(w.shape.add_outer().is_err());
                }
            }
        }
    }

    #[test]
    fn sequence_algebra_dims_and_first_split_sign() {
        let q = Quiver::loops(&["x"]);
        let s = SequenceAlgebra::new(Rationals, q, 6);
        // dims: C(n-1, r-1) compositions with r = n - d parts
        for n in 1..=6u32 {
            for d in 0..n {
                let r = n - d;
                let expected = binomial(n - 1, r - 1);
                assert_eq!(s.dim(d, n), expected, "degree {d}, internal {n}");
            }
        }
        // π = (2) splits into (1,1) with sign +1
        let key = (vec![2u32], Path(vec![0, 0]));
        let image = s.differential(&key);
        assert_eq!(image.len(), 1);
        assert_eq!(image[0].0 .0, vec![1, 1]);
        assert!(!image[0].1, "positive sign");
    }

    fn binomial(n: u32, k: u32) -> usize {
        if k > n {
            return 0;
        }
        let mut result = 1usize;
        for i in 0..k {
            result = result * (n - i) as usize / (i + 1) as usize;
        }
        result
    }

    #[test]
    fn sequence_algebra_is_a_resolution_of_the_arrow_space() {
        let q = Quiver::loops(&["x", "y"]);
        let s = SequenceAlgebra::new(Rationals, q, 6);
        let h = s.homology();
        assert_eq!(h.get(&(0, 1)), Some(&2));
        assert_eq!(h.len(), 1, "everything above internal degree one is exact");
    }

    #[test]
    fn sequence_algebra_differential_squares_to_zero() {
        let q = Quiver::loops(&["x"]);
        let s = SequenceAlgebra::new(Rationals, q, 6);
        for n in 1..=6u32 {
            for d in 2..n {
                let d1 = s.differential_matrix(d, n);
                let d0 = s.differential_matrix(d - 1, n);
                if d1.rows() > 0 && d0.rows() > 0 {
                    assert!(d0.matmul(&d1).is_zero_matrix(), "d² ≠ 0 at ({d},{n})");
                }
            }
        }
    }

    #[test]
    fn sequence_algebra_euler_characteristic_vanishes() {
        let q = Quiver::loops(&["x"]);
        let s = SequenceAlgebra::new(Rationals, q, 6);
        for n in 2..=6u32 {
            let chi: i64 = (0..n)
                .map(|d| {
                    let dim = s.dim(d, n) as i64;
                    if d % 2 == 0 {
                        dim
                    } else {
                        -dim
                    }
                })
                .sum();
            assert_eq!(chi, 0, "internal degree {n}");
        }
    }
}
