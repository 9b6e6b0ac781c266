//! Decorated bracketings: the shared basis machinery for the coalgebra and
//! the dg algebra sides of the resolution.
//!
//! A basis vector is a contracted bracketing shape whose input slots carry
//! arrows and whose star slots carry canonical ideal basis vectors, with the
//! whole left-to-right chain composable. Removing a bracket either splices
//! the shape (non-innermost brackets), multiplies the star content into the
//! enclosing bracket's ideal piece (innermost bracket surrounded by matching
//! brackets and plain inputs), or expands the star into plain arrows
//! (anything else). The last two cases re-express results in the canonical
//! ideal bases, so outputs are always linear combinations of basis vectors.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::bracket::{matching_table, Bracketing, Sym};
use crate::field::Field;
use crate::linalg::Subspace;
use crate::quiver::{Path, PathElement, Quiver, QuotientAlgebra, Saturation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ResError {
    #[error("product of internal degrees {0} + {1} exceeds the truncation {2}")]
    TruncationOverflow(u32, u32, u32),
    #[error(
        "ideal piece ({src},{tgt}) is not saturated at level {level}; increase the pad"
    )]
    IdealSaturation { src: usize, tgt: usize, level: u32 },
    #[error("element of degree zero lies outside the ideal; the homotopy is undefined there")]
    NotInIdeal,
    #[error("homology requested on an untrusted window: {0}")]
    Untrusted(String),
}

/// One canonical ideal basis vector usable as a star decoration.
#[derive(Debug, Clone)]
pub struct StarVector<F: Field> {
    pub src: usize,
    pub tgt: usize,
    /// Internal degree contributed by this star: the pivot length of the
    /// ideal basis row (the exact length for homogeneous ideals).
    pub level: u32,
    pub element: PathElement<F>,
}

/// All star decorations of a presentation, indexed globally, with the rows
/// of each `(src, tgt)` ideal piece in membership-coordinate order.
#[derive(Debug, Clone)]
pub struct StarTable<F: Field> {
    vectors: Vec<StarVector<F>>,
    by_pair: BTreeMap<(usize, usize), Vec<u32>>,
}

impl<F: Field> StarTable<F> {
    pub fn from_algebra(algebra: &QuotientAlgebra<F>) -> Self {
        let field = algebra.field();
        let mut vectors = Vec::new();
        let mut by_pair = BTreeMap::new();
        for s in 0..algebra.quiver().vertex_count() {
            for t in 0..algebra.quiver().vertex_count() {
                let piece = algebra.piece(s, t);
                let mut ids = Vec::with_capacity(piece.row_levels.len());
                for (i, level) in piece.row_levels.iter().enumerate() {
                    ids.push(vectors.len() as u32);
                    vectors.push(StarVector {
                        src: s,
                        tgt: t,
                        level: *level,
                        element: piece.row_element(field, i),
                    });
                }
                by_pair.insert((s, t), ids);
            }
        }
        StarTable { vectors, by_pair }
    }

    pub fn vector(&self, id: u32) -> &StarVector<F> {
        &self.vectors[id as usize]
    }
    pub fn len(&self) -> usize {
        self.vectors.len()
    }
    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
    pub fn ids_for_pair(&self, src: usize, tgt: usize) -> &[u32] {
        self.by_pair.get(&(src, tgt)).map(|v| v.as_slice()).unwrap_or(&[])
    }
    pub fn iter(&self) -> impl Iterator<Item = (u32, &StarVector<F>)> {
        self.vectors.iter().enumerate().map(|(i, v)| (i as u32, v))
    }
}

/// Shared immutable context: the quotient algebra (with its ideal pieces)
/// and the star table derived from it.
#[derive(Debug)]
pub struct ResContext<F: Field> {
    algebra: QuotientAlgebra<F>,
    stars: StarTable<F>,
}

impl<F: Field> ResContext<F> {
    pub fn new(algebra: QuotientAlgebra<F>) -> Arc<Self> {
        let stars = StarTable::from_algebra(&algebra);
        Arc::new(ResContext { algebra, stars })
    }

    pub fn field(&self) -> F {
        self.algebra.field()
    }
    pub fn quiver(&self) -> &Quiver {
        self.algebra.quiver()
    }
    pub fn algebra(&self) -> &QuotientAlgebra<F> {
        &self.algebra
    }
    pub fn stars(&self) -> &StarTable<F> {
        &self.stars
    }
    pub fn max_internal(&self) -> u32 {
        self.algebra.max_length()
    }
    pub fn saturation(&self) -> Saturation {
        self.algebra.saturation()
    }
    pub fn is_homogeneous(&self) -> bool {
        self.algebra.ideal().is_homogeneous()
    }

    fn star_membership(
        &self,
        src: usize,
        tgt: usize,
        element: &PathElement<F>,
        level: u32,
    ) -> Result<Vec<(u32, F::Elem)>, ResError> {
        let piece = self.algebra.piece(src, tgt);
        let row = piece
            .window
            .to_row(element)
            .ok_or(ResError::IdealSaturation { src, tgt, level })?;
        let coords = piece
            .space
            .membership_coords(&row)
            .ok_or(ResError::IdealSaturation { src, tgt, level })?;
        let ids = self.stars.ids_for_pair(src, tgt);
        let f = self.field();
        Ok(coords
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !f.is_zero(c))
            .map(|(i, c)| (ids[i], c))
            .collect())
    }

    /// Express an ideal element in star coordinates; errors when the element
    /// is not (recognizably) in the ideal.
    pub fn ideal_coords(
        &self,
        element: &PathElement<F>,
    ) -> Result<Vec<(u32, F::Elem)>, ResError> {
        let quiver = self.quiver();
        let mut out = Vec::new();
        for s in 0..quiver.vertex_count() {
            for t in 0..quiver.vertex_count() {
                let comp = element.left_component(quiver, s).right_component(quiver, t);
                if comp.is_zero() {
                    continue;
                }
                match self.star_membership(s, t, &comp, comp.max_len()) {
                    Ok(coords) => out.extend(coords),
                    Err(ResError::IdealSaturation { .. }) => return Err(ResError::NotInIdeal),
                    Err(e) => return Err(e),
                }
            }
        }
        Ok(out)
    }
}

/// A slot decoration: an arrow on an input, an ideal basis vector on a star.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Decor {
    Arrow(u32),
    Star(u32),
}

/// A decorated bracketing: the basis vectors of the coalgebra and of the
/// dg algebra. Plain input words (no brackets) double as monomial paths.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DecoratedWord {
    pub shape: Bracketing,
    pub decor: Vec<Decor>,
}

impl DecoratedWord {
    pub fn new(shape: Bracketing, decor: Vec<Decor>) -> Self {
        debug_assert_eq!(shape.leaves() as usize, decor.len());
        DecoratedWord { shape, decor }
    }

    /// A bracket-free word carrying the arrows of a path.
    pub fn from_path(path: &Path) -> Self {
        let word = vec![Sym::Input; path.len() as usize];
        DecoratedWord {
            shape: Bracketing::from_word(word).expect("plain input word"),
            decor: path.arrows().iter().map(|a| Decor::Arrow(*a)).collect(),
        }
    }

    /// The path of a bracket-free word, if it is one.
    pub fn as_path(&self) -> Option<Path> {
        if self.shape.pairs() > 0 {
            return None;
        }
        let ids = self
            .decor
            .iter()
            .map(|d| match d {
                Decor::Arrow(a) => *a,
                Decor::Star(_) => unreachable!("plain words carry arrows only"),
            })
            .collect();
        Some(Path(ids))
    }

    pub fn decor_weight<F: Field>(ctx: &ResContext<F>, d: &Decor) -> u32 {
        match d {
            Decor::Arrow(_) => 1,
            Decor::Star(id) => ctx.stars().vector(*id).level,
        }
    }

    pub fn internal_degree<F: Field>(&self, ctx: &ResContext<F>) -> u32 {
        self.decor.iter().map(|d| Self::decor_weight(ctx, d)).sum()
    }

    pub fn decor_endpoints<F: Field>(ctx: &ResContext<F>, d: &Decor) -> (usize, usize) {
        match d {
            Decor::Arrow(a) => {
                let arrow = ctx.quiver().arrow(*a);
                (arrow.src, arrow.tgt)
            }
            Decor::Star(id) => {
                let sv = ctx.stars().vector(*id);
                (sv.src, sv.tgt)
            }
        }
    }

    pub fn endpoints<F: Field>(&self, ctx: &ResContext<F>) -> (usize, usize) {
        let first = Self::decor_endpoints(ctx, &self.decor[0]);
        let last = Self::decor_endpoints(ctx, self.decor.last().unwrap());
        (first.0, last.1)
    }

    pub fn is_composable<F: Field>(&self, ctx: &ResContext<F>) -> bool {
        self.decor.windows(2).all(|w| {
            Self::decor_endpoints(ctx, &w[0]).1 == Self::decor_endpoints(ctx, &w[1]).0
        })
    }

    /// The decorated factors of the top-level items, left to right.
    pub fn split_top_level(&self) -> Vec<DecoratedWord> {
        let leaf_positions = self.shape.leaf_positions();
        let mut factors = Vec::new();
        for range in self.shape.top_level_items() {
            let shape = self.shape.item(range.clone());
            let decor: Vec<Decor> = leaf_positions
                .iter()
                .zip(&self.decor)
                .filter(|((pos, _), _)| range.contains(pos))
                .map(|(_, d)| *d)
                .collect();
            factors.push(DecoratedWord::new(shape, decor));
        }
        factors
    }

    /// Strip the outer bracket of a closed word and return the decorated
    /// closed factors of its content. Not defined on `[*]` (whose content is
    /// a bare star) or on words without an outer bracket.
    pub fn split_outer(&self) -> Vec<DecoratedWord> {
        let word = self.shape.word();
        debug_assert!(self.shape.is_outer_bracketed());
        debug_assert_ne!(word, [Sym::Open, Sym::Star, Sym::Close]);
        let inner = Bracketing::from_word(word[1..word.len() - 1].to_vec())
            .expect("content of a closed word splits into closed items");
        let leaf_positions = self.shape.leaf_positions();
        let mut factors = Vec::new();
        for range in inner.top_level_items() {
            // offset by one for the stripped outer bracket
            let full_range = range.start + 1..range.end + 1;
            let shape = inner.item(range);
            let decor: Vec<Decor> = leaf_positions
                .iter()
                .zip(&self.decor)
                .filter(|((pos, _), _)| full_range.contains(pos))
                .map(|(_, d)| *d)
                .collect();
            factors.push(DecoratedWord::new(shape, decor));
        }
        factors
    }

    /// Concatenation of decorated words (shape and slots).
    pub fn concat(words: &[DecoratedWord]) -> DecoratedWord {
        let mut word = Vec::new();
        let mut decor = Vec::new();
        for w in words {
            word.extend_from_slice(w.shape.word());
            decor.extend_from_slice(&w.decor);
        }
        DecoratedWord::new(
            Bracketing::from_word(word).expect("concatenation of valid words"),
            decor,
        )
    }
}

/// A finite linear combination of decorated words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Combo<F: Field> {
    terms: BTreeMap<DecoratedWord, F::Elem>,
}

impl<F: Field> Default for Combo<F> {
    fn default() -> Self {
        Combo { terms: BTreeMap::new() }
    }
}

impl<F: Field> Combo<F> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(field: F, w: DecoratedWord) -> Self {
        let mut c = Self::zero();
        c.add_term(field, w, field.one());
        c
    }

    pub fn add_term(&mut self, field: F, w: DecoratedWord, c: F::Elem) {
        if field.is_zero(&c) {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = field.add(e.get(), &c);
                if field.is_zero(&s) {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, field: F, other: &Combo<F>, scale: &F::Elem) {
        for (w, c) in &other.terms {
            self.add_term(field, w.clone(), field.mul(c, scale));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn iter(&self) -> impl Iterator<Item = (&DecoratedWord, &F::Elem)> {
        self.terms.iter()
    }

    /// Interpret a combination of bracket-free words as a path element.
    pub fn as_path_element(&self, field: F) -> Option<PathElement<F>> {
        let mut e = PathElement::zero();
        for (w, c) in &self.terms {
            e.add_term(field, w.as_path()?, c.clone());
        }
        Some(e)
    }

    pub fn from_path_element(field: F, e: &PathElement<F>) -> Self {
        let mut combo = Self::zero();
        for (p, c) in e.terms() {
            combo.add_term(field, DecoratedWord::from_path(p), c.clone());
        }
        combo
    }
}

/// A linear combination of tensor words, for coproduct outputs and the
/// coherence checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorCombo<F: Field> {
    terms: BTreeMap<Vec<DecoratedWord>, F::Elem>,
}

impl<F: Field> Default for TensorCombo<F> {
    fn default() -> Self {
        TensorCombo { terms: BTreeMap::new() }
    }
}

impl<F: Field> TensorCombo<F> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, field: F, t: Vec<DecoratedWord>, c: F::Elem) {
        if field.is_zero(&c) {
            return;
        }
        match self.terms.entry(t) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = field.add(e.get(), &c);
                if field.is_zero(&s) {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn iter(&self) -> impl Iterator<Item = (&Vec<DecoratedWord>, &F::Elem)> {
        self.terms.iter()
    }
    pub fn first(&self) -> Option<(&Vec<DecoratedWord>, &F::Elem)> {
        self.terms.iter().next()
    }
}

/// Outcome classification of one bracket removal, mostly for tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RemovalKind {
    /// Non-innermost bracket: pure shape surgery.
    Splice,
    /// Innermost star bracket whose parent becomes innermost: the star is
    /// multiplied with the neighbouring arrows inside the ideal.
    IdealMerge,
    /// Innermost star bracket in any other position: the star expands into
    /// plain arrows.
    Expand,
}

/// Remove the `m`-th left bracket (1-based over all left brackets) of a
/// decorated word and renormalize into canonical basis vectors.
///
/// The caller supplies the sign convention; the returned combination carries
/// coefficient `+1` times the star-decomposition coefficients.
pub fn remove_bracket_decorated<F: Field>(
    ctx: &ResContext<F>,
    w: &DecoratedWord,
    m: usize,
) -> Result<(Combo<F>, RemovalKind), ResError> {
    let field = ctx.field();
    let word = w.shape.word();
    let matching = matching_table(word);
    let opens: Vec<usize> = word
        .iter()
        .enumerate()
        .filter(|(_, s)| **s == Sym::Open)
        .map(|(i, _)| i)
        .collect();
    assert!(m >= 1 && m <= opens.len(), "bracket index out of range");
    let open_at = opens[m - 1];
    let close_at = matching[open_at];
    let content = &word[open_at + 1..close_at];
    let leaf_positions = w.shape.leaf_positions();
    let leaf_index_of = |pos: usize| leaf_positions.iter().position(|(p, _)| *p == pos);

    if content.iter().any(|s| *s == Sym::Open) {
        // Non-innermost: splice the two bracket symbols out.
        let mut new_word = Vec::with_capacity(word.len() - 2);
        for (i, s) in word.iter().enumerate() {
            if i != open_at && i != close_at {
                new_word.push(*s);
            }
        }
        let shape = Bracketing::from_word(new_word).expect("splice of a valid word");
        let out = Combo::single(field, DecoratedWord::new(shape, w.decor.clone()));
        return Ok((out, RemovalKind::Splice));
    }

    // Innermost bracket: content is exactly one star.
    debug_assert_eq!(content, [Sym::Star]);
    let star_pos = open_at + 1;
    let star_slot = leaf_index_of(star_pos).expect("star is a leaf");
    let star_id = match w.decor[star_slot] {
        Decor::Star(id) => id,
        Decor::Arrow(_) => unreachable!("star slot carries a star"),
    };
    let star = ctx.stars().vector(star_id).clone();

    // Locate the enclosing bracket, if any.
    let mut parent: Option<(usize, usize)> = None;
    let mut depth = 0i64;
    for i in (0..open_at).rev() {
        match word[i] {
            Sym::Close => depth += 1,
            Sym::Open => {
                if depth == 0 {
                    parent = Some((i, matching[i]));
                    break;
                }
                depth -= 1;
            }
            _ => {}
        }
    }

    let merges_into_parent = match parent {
        None => false,
        Some((p_open, p_close)) => !word[p_open + 1..p_close]
            .iter()
            .enumerate()
            .any(|(off, s)| *s == Sym::Open && p_open + 1 + off != open_at),
    };

    if merges_into_parent {
        let (p_open, p_close) = parent.expect("merge case has a parent");
        // Leaves directly inside the parent: a run of inputs, the star,
        // another run of inputs.
        let inside: Vec<usize> = leaf_positions
            .iter()
            .enumerate()
            .filter(|(_, (pos, _))| *pos > p_open && *pos < p_close)
            .map(|(slot, _)| slot)
            .collect();
        let first_slot = *inside.first().expect("parent has leaves");
        let last_slot = *inside.last().unwrap();
        let left_arrows: Vec<u32> = (first_slot..star_slot)
            .map(|i| match w.decor[i] {
                Decor::Arrow(a) => a,
                Decor::Star(_) => unreachable!("merge case has plain inputs around the star"),
            })
            .collect();
        let right_arrows: Vec<u32> = (star_slot + 1..=last_slot)
            .map(|i| match w.decor[i] {
                Decor::Arrow(a) => a,
                Decor::Star(_) => unreachable!(),
            })
            .collect();
        let quiver = ctx.quiver();
        let mut product = star.element.clone();
        if !left_arrows.is_empty() {
            product = product.mul_path_left(quiver, field, &Path(left_arrows.clone()));
        }
        if !right_arrows.is_empty() {
            product = product.mul_path_right(quiver, field, &Path(right_arrows.clone()));
        }
        debug_assert!(!product.is_zero());
        let level = star.level + left_arrows.len() as u32 + right_arrows.len() as u32;
        let src = if left_arrows.is_empty() {
            star.src
        } else {
            quiver.arrow(left_arrows[0]).src
        };
        let tgt = if right_arrows.is_empty() {
            star.tgt
        } else {
            quiver.arrow(*right_arrows.last().unwrap()).tgt
        };
        let coords = ctx.star_membership(src, tgt, &product, level)?;

        // Parent becomes the innermost bracket around one new star.
        let mut new_word: Vec<Sym> = Vec::with_capacity(word.len() - 2);
        new_word.extend_from_slice(&word[..p_open]);
        new_word.extend_from_slice(&[Sym::Open, Sym::Star, Sym::Close]);
        new_word.extend_from_slice(&word[p_close + 1..]);
        let shape = Bracketing::from_word(new_word).expect("merged word is valid");
        let mut out = Combo::zero();
        for (id, coeff) in coords {
            let mut decor = Vec::with_capacity(w.decor.len() - (last_slot - first_slot));
            decor.extend_from_slice(&w.decor[..first_slot]);
            decor.push(Decor::Star(id));
            decor.extend_from_slice(&w.decor[last_slot + 1..]);
            out.add_term(field, DecoratedWord::new(shape.clone(), decor), coeff);
        }
        return Ok((out, RemovalKind::IdealMerge));
    }

    // Expansion: the star content spills into the word as plain arrows.
    let mut out = Combo::zero();
    for (path, coeff) in star.element.terms() {
        let mut new_word: Vec<Sym> = Vec::with_capacity(word.len() + path.len() as usize - 3);
        new_word.extend_from_slice(&word[..open_at]);
        new_word.extend(std::iter::repeat(Sym::Input).take(path.len() as usize));
        new_word.extend_from_slice(&word[close_at + 1..]);
        let shape = Bracketing::from_word(new_word).expect("expanded word is valid");
        let mut decor = Vec::with_capacity(w.decor.len() + path.len() as usize - 1);
        decor.extend_from_slice(&w.decor[..star_slot]);
        decor.extend(path.arrows().iter().map(|a| Decor::Arrow(*a)));
        decor.extend_from_slice(&w.decor[star_slot + 1..]);
        out.add_term(field, DecoratedWord::new(shape, decor), coeff.clone());
    }
    Ok((out, RemovalKind::Expand))
}

/// All composable decorations of a shape with the given total internal
/// degree, in a fixed deterministic order.
pub fn decorations<F: Field>(
    ctx: &ResContext<F>,
    shape: &Bracketing,
    internal: u32,
) -> Vec<Vec<Decor>> {
    let slots = shape.leaf_positions();
    let mut out = Vec::new();
    let mut current: Vec<Decor> = Vec::with_capacity(slots.len());
    fill_slots(ctx, &slots, 0, None, internal, &mut current, &mut out);
    out
}

fn fill_slots<F: Field>(
    ctx: &ResContext<F>,
    slots: &[(usize, Sym)],
    i: usize,
    carry: Option<usize>,
    remaining: u32,
    current: &mut Vec<Decor>,
    out: &mut Vec<Vec<Decor>>,
) {
    if i == slots.len() {
        if remaining == 0 {
            out.push(current.clone());
        }
        return;
    }
    let slots_left = (slots.len() - i - 1) as u32;
    if remaining < 1 + slots_left {
        return;
    }
    let budget = remaining - slots_left;
    match slots[i].1 {
        Sym::Input => {
            for (id, arrow) in ctx.quiver().arrows().iter().enumerate() {
                if carry.is_some_and(|c| c != arrow.src) {
                    continue;
                }
                current.push(Decor::Arrow(id as u32));
                fill_slots(ctx, slots, i + 1, Some(arrow.tgt), remaining - 1, current, out);
                current.pop();
            }
        }
        Sym::Star => {
            for (id, sv) in ctx.stars().iter() {
                if sv.level > budget {
                    continue;
                }
                if carry.is_some_and(|c| c != sv.src) {
                    continue;
                }
                current.push(Decor::Star(id));
                fill_slots(ctx, slots, i + 1, Some(sv.tgt), remaining - sv.level, current, out);
                current.pop();
            }
        }
        _ => unreachable!("leaf slots are inputs or stars"),
    }
}

/// Matrix-free access to an ideal piece as a subspace, for reuse in tests.
pub fn piece_subspace<F: Field>(ctx: &ResContext<F>, src: usize, tgt: usize) -> &Subspace<F> {
    &ctx.algebra().piece(src, tgt).space
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use crate::quiver::IdealPresentation;

    fn context(relations: &[&str], n: u32) -> Arc<ResContext<Rationals>> {
        let q = Quiver::loops(&["x", "y"]);
        let ideal = IdealPresentation::parse(&q, Rationals, relations).unwrap();
        ResContext::new(QuotientAlgebra::new(Rationals, q, ideal, n))
    }

    fn one_loop_context(relations: &[&str], n: u32) -> Arc<ResContext<Rationals>> {
        let q = Quiver::loops(&["x"]);
        let ideal = IdealPresentation::parse(&q, Rationals, relations).unwrap();
        ResContext::new(QuotientAlgebra::new(Rationals, q, ideal, n))
    }

    #[test]
    fn star_table_levels() {
        let ctx = context(&["x*y - y*x"], 4);
        // levels 2..4 with dims 1, 4, 11
        let dims: Vec<usize> = (2..=4)
            .map(|l| ctx.stars().iter().filter(|(_, v)| v.level == l).count())
            .collect();
        assert_eq!(dims, vec![1, 4, 11]);
    }

    #[test]
    fn removal_splice() {
        let ctx = one_loop_context(&["x*x"], 5);
        // shape [[*]1] with star x^2: removing bracket 1 (outer) splices.
        let star0 = ctx.stars().iter().find(|(_, v)| v.level == 2).unwrap().0;
        let w = DecoratedWord::new(
            Bracketing::parse("[[*]1]").unwrap(),
            vec![Decor::Star(star0), Decor::Arrow(0)],
        );
        let (combo, kind) = remove_bracket_decorated(&ctx, &w, 1).unwrap();
        assert_eq!(kind, RemovalKind::Splice);
        let (word, coeff) = combo.iter().next().unwrap();
        assert_eq!(word.shape.text(), "[*]1");
        assert_eq!(*coeff, Rationals.from_int(1));
    }

    #[test]
    fn removal_ideal_merge() {
        let ctx = one_loop_context(&["x*x"], 5);
        let star2 = ctx.stars().iter().find(|(_, v)| v.level == 2).unwrap().0;
        let star3 = ctx.stars().iter().find(|(_, v)| v.level == 3).unwrap().0;
        let w = DecoratedWord::new(
            Bracketing::parse("[[*]1]").unwrap(),
            vec![Decor::Star(star2), Decor::Arrow(0)],
        );
        // removing bracket 2 (the [*]) merges x^2 · x into the level-3 star
        let (combo, kind) = remove_bracket_decorated(&ctx, &w, 2).unwrap();
        assert_eq!(kind, RemovalKind::IdealMerge);
        let (word, coeff) = combo.iter().next().unwrap();
        assert_eq!(word.shape.text(), "[*]");
        assert_eq!(word.decor, vec![Decor::Star(star3)]);
        assert_eq!(*coeff, Rationals.from_int(1));
    }

    #[test]
    fn removal_expand() {
        let ctx = one_loop_context(&["x*x"], 5);
        let star2 = ctx.stars().iter().find(|(_, v)| v.level == 2).unwrap().0;
        // open word [*]1: removing the star bracket expands x^2 into arrows.
        let w = DecoratedWord::new(
            Bracketing::parse("[*]1").unwrap(),
            vec![Decor::Star(star2), Decor::Arrow(0)],
        );
        let (combo, kind) = remove_bracket_decorated(&ctx, &w, 1).unwrap();
        assert_eq!(kind, RemovalKind::Expand);
        let (word, _) = combo.iter().next().unwrap();
        assert_eq!(word.shape.text(), "3");
        assert_eq!(word.decor.len(), 3);
    }

    #[test]
    fn decorations_chain_composably() {
        let q = Quiver::new(
            vec!["1".into(), "2".into()],
            vec![
                ("a".into(), "1".into(), "2".into()),
                ("b".into(), "2".into(), "1".into()),
            ],
        )
        .unwrap();
        let ideal = IdealPresentation::parse(&q, Rationals, &["a*b", "b*a"]).unwrap();
        let ctx = ResContext::new(QuotientAlgebra::new(Rationals, q, ideal, 4));
        let shape = Bracketing::parse("[[*]1]").unwrap();
        for decor in decorations(&ctx, &shape, 3) {
            let w = DecoratedWord::new(shape.clone(), decor);
            assert!(w.is_composable(&ctx));
            assert_eq!(w.internal_degree(&ctx), 3);
        }
        // star of level 2 followed by a matching arrow: a*b then a, b*a then b
        assert_eq!(decorations(&ctx, &shape, 3).len(), 2);
    }

    #[test]
    fn split_and_concat_roundtrip() {
        let ctx = one_loop_context(&["x*x"], 6);
        let star2 = ctx.stars().iter().find(|(_, v)| v.level == 2).unwrap().0;
        let w = DecoratedWord::new(
            Bracketing::parse("[*]1[*]").unwrap(),
            vec![Decor::Star(star2), Decor::Arrow(0), Decor::Star(star2)],
        );
        let parts = w.split_top_level();
        assert_eq!(parts.len(), 3);
        assert_eq!(DecoratedWord::concat(&parts), w);
    }
}
