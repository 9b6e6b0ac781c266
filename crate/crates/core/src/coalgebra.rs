//! The A-infinity coalgebra of decorated closed bracketings, its coproducts,
//! the coherence verifier and the homology of its differential.
//!
//! Homological degree of a basis vector is its bracket-pair count plus one,
//! so the bare input sits in degree 1 and `[*]` in degree 2. The
//! differential removes internal brackets with sign `(-1)^(m-1)`; the single
//! higher coproduct on an outer-bracketed shape splits it into its top-level
//! closed factors with the sign `-(-1)^(Σ (k-i)·d_i)`. On `[*]` the higher
//! coproducts expand the star into arrow tensors, one component per term
//! length, with the same sign rule at all factor degrees equal to one.

use std::collections::HashMap;
use std::sync::Arc;

use crate::bracket::{enumerate_with_stars, Bracketing, BracketingFamily, Sym};
use crate::decor::{
    decorations, remove_bracket_decorated, Combo, Decor, DecoratedWord, ResContext, ResError,
    TensorCombo,
};
use crate::field::Field;
use crate::linalg::SparseMatrix;
use crate::par::{par_find_map, par_map};
use crate::quiver::{Path, Quiver};
use crate::tor::{BettiTable, CellTrust};

/// An ordered graded piece with index lookup.
#[derive(Debug, Clone)]
pub struct GradedPiece {
    pub basis: Vec<DecoratedWord>,
    index: HashMap<DecoratedWord, u32>,
}

impl GradedPiece {
    pub fn new(mut basis: Vec<DecoratedWord>) -> Self {
        basis.sort();
        let index = basis.iter().enumerate().map(|(i, w)| (w.clone(), i as u32)).collect();
        GradedPiece { basis, index }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    pub fn position(&self, w: &DecoratedWord) -> Option<u32> {
        self.index.get(w).copied()
    }
}

/// Enumerate the decorated words of a contracted family piece.
pub(crate) fn decorated_piece<F: Field>(
    ctx: &ResContext<F>,
    closed: bool,
    pairs: u32,
    internal: u32,
) -> Vec<DecoratedWord> {
    let family = if closed {
        BracketingFamily::CLOSED_CONTRACTED
    } else {
        BracketingFamily::OPEN_CONTRACTED
    };
    let mut words = Vec::new();
    for stars in 0..=pairs {
        if stars as u32 > internal {
            break;
        }
        for inputs in 0..=internal.saturating_sub(stars) {
            for shape in enumerate_with_stars(family, inputs, stars, pairs) {
                for decor in decorations(ctx, &shape, internal) {
                    words.push(DecoratedWord::new(shape.clone(), decor));
                }
            }
        }
    }
    words
}

/// The A-infinity coalgebra on decorated closed bracketings, truncated at
/// internal degree `max_internal` and homological degree `max_hom`.
#[derive(Debug)]
pub struct AinfCoalgebra<F: Field> {
    ctx: Arc<ResContext<F>>,
    max_internal: u32,
    max_hom: u32,
    pieces: std::collections::BTreeMap<(u32, u32), GradedPiece>,
}

/// Build the coalgebra over the given presentation context. `max_hom`
/// defaults to twice the internal truncation, which is beyond the bracket
/// bound, so no homological truncation occurs.
pub fn build_coalgebra<F: Field>(
    ctx: Arc<ResContext<F>>,
    max_internal: u32,
    max_hom: Option<u32>,
) -> AinfCoalgebra<F> {
    assert!(max_internal >= 1, "truncation must be positive");
    assert!(
        max_internal <= ctx.max_internal(),
        "coalgebra truncation exceeds the presentation window"
    );
    let max_hom = max_hom.unwrap_or(2 * max_internal);
    let keys: Vec<(u32, u32)> = (1..=max_hom)
        .flat_map(|n| (1..=max_internal).map(move |l| (n, l)))
        .collect();
    let ctx_ref = &ctx;
    let pieces = par_map(keys, |(n, l)| {
        ((n, l), GradedPiece::new(decorated_piece(ctx_ref, true, n - 1, l)))
    })
    .into_iter()
    .filter(|(_, p)| p.dim() > 0)
    .collect();
    AinfCoalgebra { ctx, max_internal, max_hom, pieces }
}

impl<F: Field> AinfCoalgebra<F> {
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

    /// Homological degree of a basis vector: bracket pairs plus one.
    pub fn hom_degree(w: &DecoratedWord) -> u32 {
        w.shape.pairs() + 1
    }

    /// The differential: signed sum over internal bracket removals.
    pub fn delta1(&self, w: &DecoratedWord) -> Result<Combo<F>, ResError> {
        let f = self.ctx.field();
        let mut out = Combo::zero();
        if !w.shape.is_outer_bracketed() {
            return Ok(out);
        }
        let internal = w.shape.pairs() - 1;
        for m in 1..=internal {
            let (combo, _) = remove_bracket_decorated(&self.ctx, w, m as usize + 1)?;
            let sign = if m % 2 == 1 { f.one() } else { f.neg(&f.one()) };
            out.add_scaled(f, &combo, &sign);
        }
        Ok(out)
    }

    /// The higher coproduct with `k` outputs; zero unless the shape splits
    /// into exactly `k` closed factors (or is `[*]` with a term of length
    /// `k`).
    pub fn delta_k(&self, w: &DecoratedWord, k: u32) -> Result<TensorCombo<F>, ResError> {
        assert!(k >= 2);
        let f = self.ctx.field();
        let mut out = TensorCombo::zero();
        if !w.shape.is_outer_bracketed() {
            return Ok(out);
        }
        if w.shape.word() == [Sym::Open, Sym::Star, Sym::Close] {
            // Star expansion into arrow tensors, one component per term of
            // length k; every factor has homological degree one.
            let star_id = match w.decor[0] {
                Decor::Star(id) => id,
                Decor::Arrow(_) => unreachable!(),
            };
            let star = self.ctx.stars().vector(star_id).clone();
            let sign = delta_sign(f, &vec![1u32; k as usize]);
            for (path, coeff) in star.element.terms() {
                if path.len() != k {
                    continue;
                }
                let factors: Vec<DecoratedWord> = path
                    .arrows()
                    .iter()
                    .map(|a| {
                        DecoratedWord::new(
                            Bracketing::from_word(vec![Sym::Input]).unwrap(),
                            vec![Decor::Arrow(*a)],
                        )
                    })
                    .collect();
                out.add_term(f, factors, f.mul(coeff, &sign));
            }
            return Ok(out);
        }
        let factors = w.split_outer();
        if factors.len() as u32 != k {
            return Ok(out);
        }
        let degrees: Vec<u32> = factors.iter().map(Self::hom_degree).collect();
        let sign = delta_sign(f, &degrees);
        out.add_term(f, factors, sign);
        Ok(out)
    }

    /// All nonzero higher coproducts of a basis vector, as `(k, value)`.
    pub fn delta_all_higher(
        &self,
        w: &DecoratedWord,
    ) -> Result<Vec<(u32, TensorCombo<F>)>, ResError> {
        let mut out = Vec::new();
        if !w.shape.is_outer_bracketed() {
            return Ok(out);
        }
        if w.shape.word() == [Sym::Open, Sym::Star, Sym::Close] {
            let star_id = match w.decor[0] {
                Decor::Star(id) => id,
                Decor::Arrow(_) => unreachable!(),
            };
            let lengths: std::collections::BTreeSet<u32> = self
                .ctx
                .stars()
                .vector(star_id)
                .element
                .terms()
                .map(|(p, _)| p.len())
                .collect();
            for k in lengths {
                if k >= 2 {
                    let v = self.delta_k(w, k)?;
                    if !v.is_zero() {
                        out.push((k, v));
                    }
                }
            }
            return Ok(out);
        }
        let k = w.split_outer().len() as u32;
        if k >= 2 {
            let v = self.delta_k(w, k)?;
            if !v.is_zero() {
                out.push((k, v));
            }
        }
        Ok(out)
    }

    /// The matrix of the differential from `(hom, internal)` into
    /// `(hom - 1, internal)`; valid in the graded (homogeneous) case.
    pub fn delta1_matrix(&self, hom: u32, internal: u32) -> Result<SparseMatrix<F>, ResError> {
        let f = self.ctx.field();
        let source = match self.piece(hom, internal) {
            Some(p) => p,
            None => return Ok(SparseMatrix::zero(f, 0, 0)),
        };
        let empty = GradedPiece::new(Vec::new());
        let target = self.piece(hom - 1, internal).unwrap_or(&empty);
        let mut triplets = Vec::new();
        for (col, w) in source.basis.iter().enumerate() {
            let image = self.delta1(w)?;
            for (word, coeff) in image.iter() {
                let row = target.position(word).unwrap_or_else(|| {
                    panic!("differential output missing from the registry: {word:?}")
                });
                triplets.push((row as usize, col, coeff.clone()));
            }
        }
        Ok(SparseMatrix::from_triplets(f, target.dim(), source.dim(), triplets))
    }

    /// Graded dimensions of the homology of the differential.
    pub fn homology(&self) -> Result<BettiTable, ResError> {
        if !self.ctx.is_homogeneous() && !self.ctx.saturation().trusted() {
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
        let ranks: HashMap<(u32, u32), usize> = par_map(cells.clone(), |(n, l)| {
            let rank = self.delta1_matrix(n, l).map(|m| m.rank());
            ((n, l), rank)
        })
        .into_iter()
        .map(|(k, r)| Ok((k, r?)))
        .collect::<Result<_, ResError>>()?;
        let mut table = BettiTable::with_window(self.max_hom, self.max_internal);
        for (n, l) in cells {
            let dim = self.dim(n, l);
            if dim == 0 {
                continue;
            }
            let rank_out = ranks[&(n, l)];
            let rank_in = if n + 1 <= self.max_hom { ranks[&(n + 1, l)] } else { 0 };
            let h = dim - rank_out - rank_in;
            // A piece beyond the built window is empty iff its bracket-pair
            // count n exceeds 2·(leaf count) - 1 <= 2l - 1.
            let trusted = n + 1 <= self.max_hom || n + 1 > 2 * l;
            if h > 0 || !trusted {
                table.set(n, l, h, if trusted { CellTrust::Exact } else { CellTrust::Untrusted });
            }
        }
        Ok(table)
    }
}

/// The sign of the `k`-fold coproduct on homological factor degrees `d_i`:
/// `-(-1)^(Σ (k-i)·d_i)` with `i` counted from one.
fn delta_sign<F: Field>(f: F, degrees: &[u32]) -> F::Elem {
    let k = degrees.len() as u32;
    let exponent: u32 = degrees.iter().enumerate().map(|(i, d)| (k - 1 - i as u32) * d).sum();
    if exponent % 2 == 0 {
        f.neg(&f.one())
    } else {
        f.one()
    }
}

// ---------------------------------------------------------------------------
// Coherence verification
// ---------------------------------------------------------------------------

/// Anything with A-infinity coproducts on decorated-word bases.
pub trait AinfStructure<F: Field> {
    fn field(&self) -> F;
    /// All basis vectors in the truncation window.
    fn basis_all(&self) -> Vec<DecoratedWord>;
    fn hom_degree_of(&self, w: &DecoratedWord) -> u32;
    /// The `s`-fold coproduct (with `s = 1` the differential).
    fn delta(&self, s: u32, w: &DecoratedWord) -> Result<TensorCombo<F>, ResError>;
}

impl<F: Field> AinfStructure<F> for AinfCoalgebra<F> {
    fn field(&self) -> F {
        self.ctx.field()
    }

    fn basis_all(&self) -> Vec<DecoratedWord> {
        self.pieces.values().flat_map(|p| p.basis.iter().cloned()).collect()
    }

    fn hom_degree_of(&self, w: &DecoratedWord) -> u32 {
        Self::hom_degree(w)
    }

    fn delta(&self, s: u32, w: &DecoratedWord) -> Result<TensorCombo<F>, ResError> {
        let f = self.ctx.field();
        if s == 1 {
            let combo = self.delta1(w)?;
            let mut out = TensorCombo::zero();
            for (word, coeff) in combo.iter() {
                out.add_term(f, vec![word.clone()], coeff.clone());
            }
            Ok(out)
        } else {
            self.delta_k(w, s)
        }
    }
}

/// The bar coalgebra: tensor powers of the arrow space with the tautological
/// splitting as the only coproduct.
#[derive(Debug, Clone)]
pub struct BarCoalgebra<F: Field> {
    field: F,
    quiver: Quiver,
    max_internal: u32,
}

impl<F: Field> BarCoalgebra<F> {
    pub fn new(field: F, quiver: Quiver, max_internal: u32) -> Self {
        BarCoalgebra { field, quiver, max_internal }
    }
}

impl<F: Field> AinfStructure<F> for BarCoalgebra<F> {
    fn field(&self) -> F {
        self.field
    }

    fn basis_all(&self) -> Vec<DecoratedWord> {
        (1..=self.max_internal)
            .flat_map(|l| self.quiver.paths_of_length(l))
            .map(|p| DecoratedWord::from_path(&p))
            .collect()
    }

    fn hom_degree_of(&self, w: &DecoratedWord) -> u32 {
        w.decor.len() as u32
    }

    fn delta(&self, s: u32, w: &DecoratedWord) -> Result<TensorCombo<F>, ResError> {
        let mut out = TensorCombo::zero();
        if s != 2 {
            return Ok(out);
        }
        let path = w.as_path().expect("bar basis vectors are plain words");
        for cut in 1..path.len() {
            let left = Path(path.arrows()[..cut as usize].to_vec());
            let right = Path(path.arrows()[cut as usize..].to_vec());
            out.add_term(
                self.field,
                vec![DecoratedWord::from_path(&left), DecoratedWord::from_path(&right)],
                self.field.one(),
            );
        }
        Ok(out)
    }
}

/// First violated coherence relation, if any.
#[derive(Debug, Clone)]
pub struct AinfViolation {
    pub vector: DecoratedWord,
    pub relation: u32,
    pub residual_terms: usize,
}

/// Evaluate the coherence relations `Σ (-1)^(r+st) (1⊗..⊗Δ_s⊗..⊗1) ∘ Δ_(r+1+t)`
/// for every `n <= n_max` on every basis vector; tensor maps are applied with
/// the Koszul sign rule.
pub fn verify_ainf<F: Field, S: AinfStructure<F> + Sync>(
    structure: &S,
    n_max: u32,
) -> Result<Option<AinfViolation>, ResError> {
    let basis = structure.basis_all();
    let result = par_find_map(basis, |w| check_vector(structure, &w, n_max).transpose());
    result.transpose()
}

fn check_vector<F: Field, S: AinfStructure<F>>(
    structure: &S,
    w: &DecoratedWord,
    n_max: u32,
) -> Result<Option<AinfViolation>, ResError> {
    let f = structure.field();
    for n in 1..=n_max {
        let mut acc: TensorCombo<F> = TensorCombo::zero();
        for r in 0..n {
            for s in 1..=(n - r) {
                let t = n - r - s;
                let inner = r + 1 + t;
                let first = structure.delta(inner, w)?;
                if first.is_zero() {
                    continue;
                }
                let outer_sign_negative = (r + s * t) % 2 == 1;
                for (factors, c) in first.iter() {
                    debug_assert_eq!(factors.len() as u32, inner);
                    let target = &factors[r as usize];
                    let second = structure.delta(s, target)?;
                    if second.is_zero() {
                        continue;
                    }
                    // Koszul sign: Δ_s (degree s-2) passes the first r factors.
                    let passed: u32 =
                        factors[..r as usize].iter().map(|x| structure.hom_degree_of(x)).sum();
                    let koszul_negative = (s % 2 == 1) && (passed % 2 == 1);
                    let negative = outer_sign_negative ^ koszul_negative;
                    for (sub, c2) in second.iter() {
                        let mut tensor =
                            Vec::with_capacity(factors.len() + sub.len() - 1);
                        tensor.extend_from_slice(&factors[..r as usize]);
                        tensor.extend_from_slice(sub);
                        tensor.extend_from_slice(&factors[r as usize + 1..]);
                        let mut coeff = f.mul(c, c2);
                        if negative {
                            coeff = f.neg(&coeff);
                        }
                        acc.add_term(f, tensor, coeff);
                    }
                }
            }
        }
        if !acc.is_zero() {
            return Ok(Some(AinfViolation {
                vector: w.clone(),
                relation: n,
                residual_terms: acc.len(),
            }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use crate::quiver::{IdealPresentation, QuotientAlgebra};

    fn ctx_for(arrows: &[&str], relations: &[&str], n: u32) -> Arc<ResContext<Rationals>> {
        let q = Quiver::loops(arrows);
        let ideal = IdealPresentation::parse(&q, Rationals, relations).unwrap();
        ResContext::new(QuotientAlgebra::new(Rationals, q, ideal, n))
    }

    /// One loop with all length-2 words as relations presents the trivial
    /// multiplication; its coalgebra is the free one.
    fn free_ainf_ctx(n: u32) -> Arc<ResContext<Rationals>> {
        ctx_for(&["x"], &["x*x"], n)
    }

    #[test]
    fn free_coalgebra_dims_match_bracketing_counts() {
        let ctx = free_ainf_ctx(5);
        let k = build_coalgebra(ctx, 5, None);
        // K_1 = V
        assert_eq!(k.dim(1, 1), 1);
        for l in 2..=5 {
            assert_eq!(k.dim(2, l), 1, "K_2 at internal degree {l}");
        }
        // internal degree 4: dims (1, 5, 5) in homological degrees (2, 3, 4)
        assert_eq!(k.dim(2, 4), 1);
        assert_eq!(k.dim(3, 4), 5);
        assert_eq!(k.dim(4, 4), 5);
        // no bracketings below the diagonal
        assert_eq!(k.dim(3, 2), 0);
    }

    #[test]
    fn delta1_examples() {
        let ctx = free_ainf_ctx(5);
        let k = build_coalgebra(ctx.clone(), 5, None);
        // [*] has no internal brackets
        let star2 = ctx.stars().iter().find(|(_, v)| v.level == 2).unwrap().0;
        let w = DecoratedWord::new(
            Bracketing::parse("[*]").unwrap(),
            vec![Decor::Star(star2)],
        );
        assert!(k.delta1(&w).unwrap().is_zero());
        // [[*]1]: one internal removal with coefficient +1 landing in [*]
        let w2 = DecoratedWord::new(
            Bracketing::parse("[[*]1]").unwrap(),
            vec![Decor::Star(star2), Decor::Arrow(0)],
        );
        let image = k.delta1(&w2).unwrap();
        assert_eq!(image.len(), 1);
        let (word, coeff) = image.iter().next().unwrap();
        assert_eq!(word.shape.text(), "[*]");
        assert_eq!(*coeff, Rationals.from_int(1));
    }

    #[test]
    fn delta_k_sign_on_split_pair() {
        // Shape [[*][*]] splits into two degree-2 factors with sign -1.
        let ctx = free_ainf_ctx(5);
        let k = build_coalgebra(ctx.clone(), 5, None);
        let star2 = ctx.stars().iter().find(|(_, v)| v.level == 2).unwrap().0;
        let w = DecoratedWord::new(
            Bracketing::parse("[[*][*]]").unwrap(),
            vec![Decor::Star(star2), Decor::Star(star2)],
        );
        let v = k.delta_k(&w, 2).unwrap();
        assert_eq!(v.len(), 1);
        let (factors, coeff) = v.first().unwrap();
        assert_eq!(factors.len(), 2);
        assert_eq!(*coeff, Rationals.from_int(-1));
    }

    #[test]
    fn delta_k_star_expansion_signs() {
        let ctx = free_ainf_ctx(5);
        let k = build_coalgebra(ctx.clone(), 5, None);
        for level in 2..=4u32 {
            let star = ctx.stars().iter().find(|(_, v)| v.level == level).unwrap().0;
            let w = DecoratedWord::new(
                Bracketing::parse("[*]").unwrap(),
                vec![Decor::Star(star)],
            );
            let v = k.delta_k(&w, level).unwrap();
            assert_eq!(v.len(), 1);
            let (factors, coeff) = v.first().unwrap();
            assert_eq!(factors.len() as u32, level);
            // sign -(-1)^(k(k-1)/2)
            let exp = (level * (level - 1) / 2) % 2;
            let expected = if exp == 0 { -1 } else { 1 };
            assert_eq!(*coeff, Rationals.from_int(expected));
            // all other higher coproducts vanish
            for other in 2..=5u32 {
                if other != level {
                    assert!(k.delta_k(&w, other).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn supports_at_most_one_higher_coproduct() {
        let ctx = ctx_for(&["x", "y"], &["x*y - y*x"], 4);
        let k = build_coalgebra(ctx, 4, None);
        for w in k.basis_all() {
            let all = k.delta_all_higher(&w).unwrap();
            assert!(all.len() <= 1, "homogeneous vectors support one coproduct: {w:?}");
        }
    }

    #[test]
    fn delta1_squares_to_zero_small() {
        let ctx = ctx_for(&["x", "y"], &["x*y - y*x"], 4);
        let k = build_coalgebra(ctx.clone(), 4, None);
        let f = Rationals;
        for w in k.basis_all() {
            let once = k.delta1(&w).unwrap();
            let mut twice = Combo::zero();
            for (word, coeff) in once.iter() {
                let image = k.delta1(word).unwrap();
                twice.add_scaled(f, &image, coeff);
            }
            assert!(twice.is_zero(), "d² ≠ 0 on {w:?}");
        }
    }

    #[test]
    fn bar_coalgebra_is_coassociative() {
        let bar = BarCoalgebra::new(Rationals, Quiver::loops(&["x", "y"]), 4);
        assert!(verify_ainf(&bar, 4).unwrap().is_none());
    }

    #[test]
    fn free_coalgebra_satisfies_relations() {
        let ctx = free_ainf_ctx(5);
        let k = build_coalgebra(ctx, 5, None);
        assert!(verify_ainf(&k, 5).unwrap().is_none());
    }

    #[test]
    fn kernel_on_the_diagonal_matches_arrow_powers() {
        // For the free coalgebra on two loops, the kernel of the
        // differential on the top diagonal piece has dimension 2^k.
        let ctx = ctx_for(&["x", "y"], &["x*x", "x*y", "y*x", "y*y"], 4);
        let k = build_coalgebra(ctx, 4, None);
        for internal in 2..=4u32 {
            let m = k.delta1_matrix(internal, internal).unwrap();
            let kernel = m.cols() - m.rank();
            assert_eq!(kernel, 2usize.pow(internal), "internal degree {internal}");
        }
    }

    #[test]
    fn homology_of_free_coalgebra_is_diagonal() {
        let ctx = free_ainf_ctx(5);
        let k = build_coalgebra(ctx, 5, None);
        let h = k.homology().unwrap();
        for n in 1..=5u32 {
            assert_eq!(h.dim(n, n), 1, "H at ({n},{n})");
        }
        assert_eq!(h.total_dim(), 5);
    }
}
