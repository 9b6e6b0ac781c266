//! Quivers, paths, path elements, two-sided ideals and quotient algebras.
//!
//! The base is the semisimple algebra spanned by the vertex idempotents; the
//! arrow bimodule tensors over it, so the basis of a tensor power is exactly
//! the set of composable paths. Ideals are presented by generator expressions
//! in the relation grammar (`"x*y - y*x"`); their graded or filtered pieces
//! are computed exactly by row reduction and reused for normal forms, star
//! decorations and homology.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

use crate::field::Field;
use crate::linalg::{SparseRow, Subspace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuiverError {
    #[error("duplicate vertex name `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate arrow name `{0}`")]
    DuplicateArrow(String),
    #[error("arrow `{0}` references unknown vertex `{1}`")]
    UnknownVertex(String, String),
    #[error("unknown vertex `{0}`")]
    UnknownVertexName(String),
    #[error("empty quiver: at least one vertex is required")]
    EmptyQuiver,
    #[error("paths do not compose: `{0}` ends at `{1}` but `{2}` starts at `{3}`")]
    Noncomposable(String, String, String, String),
    #[error("empty path")]
    EmptyPath,
    #[error("relation parse error at offset {offset}: {message} in `{text}`")]
    RelationParse { text: String, offset: usize, message: String },
    #[error("term `{0}` has length {1} exceeding the truncation {2}")]
    LengthOverflow(String, u32, u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub src: usize,
    pub tgt: usize,
}

/// A finite quiver: named vertices and named arrows between them.
#[derive(Debug, Clone)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    vertex_index: HashMap<String, usize>,
    arrow_index: HashMap<String, usize>,
    /// Rank of each arrow in name-sorted order; the lexicographic part of the
    /// monomial order compares these.
    name_rank: Vec<u32>,
}

impl Quiver {
    pub fn new(
        vertices: Vec<String>,
        arrows: Vec<(String, String, String)>,
    ) -> Result<Self, QuiverError> {
        if vertices.is_empty() {
            return Err(QuiverError::EmptyQuiver);
        }
        let mut vertex_index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if vertex_index.insert(v.clone(), i).is_some() {
                return Err(QuiverError::DuplicateVertex(v.clone()));
            }
        }
        let mut arrow_index = HashMap::new();
        let mut arrs = Vec::new();
        for (name, s, t) in arrows {
            let src = *vertex_index
                .get(&s)
                .ok_or_else(|| QuiverError::UnknownVertex(name.clone(), s.clone()))?;
            let tgt = *vertex_index
                .get(&t)
                .ok_or_else(|| QuiverError::UnknownVertex(name.clone(), t.clone()))?;
            if arrow_index.insert(name.clone(), arrs.len()).is_some() {
                return Err(QuiverError::DuplicateArrow(name));
            }
            arrs.push(Arrow { name, src, tgt });
        }
        let mut order: Vec<usize> = (0..arrs.len()).collect();
        order.sort_by(|a, b| arrs[*a].name.cmp(&arrs[*b].name));
        let mut name_rank = vec![0u32; arrs.len()];
        for (rank, id) in order.into_iter().enumerate() {
            name_rank[id] = rank as u32;
        }
        Ok(Quiver { vertices, arrows: arrs, vertex_index, arrow_index, name_rank })
    }

    /// One vertex, loops named as given.
    pub fn loops(names: &[&str]) -> Self {
        Quiver::new(
            vec!["v".to_string()],
            names.iter().map(|n| (n.to_string(), "v".to_string(), "v".to_string())).collect(),
        )
        .expect("loop quiver is always valid")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }
    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }
    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertices[v]
    }
    pub fn vertex_id(&self, name: &str) -> Result<usize, QuiverError> {
        self.vertex_index
            .get(name)
            .copied()
            .ok_or_else(|| QuiverError::UnknownVertexName(name.to_string()))
    }
    pub fn arrow(&self, id: u32) -> &Arrow {
        &self.arrows[id as usize]
    }
    pub fn arrow_id(&self, name: &str) -> Option<u32> {
        self.arrow_index.get(name).map(|i| *i as u32)
    }
    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn path(&self, arrow_names: &[&str]) -> Result<Path, QuiverError> {
        let mut ids = Vec::with_capacity(arrow_names.len());
        for n in arrow_names {
            let id = self
                .arrow_id(n)
                .ok_or_else(|| QuiverError::UnknownVertex(n.to_string(), n.to_string()))?;
            ids.push(id);
        }
        self.path_from_ids(ids)
    }

    pub fn path_from_ids(&self, ids: Vec<u32>) -> Result<Path, QuiverError> {
        if ids.is_empty() {
            return Err(QuiverError::EmptyPath);
        }
        for w in ids.windows(2) {
            let a = self.arrow(w[0]);
            let b = self.arrow(w[1]);
            if a.tgt != b.src {
                return Err(QuiverError::Noncomposable(
                    a.name.clone(),
                    self.vertices[a.tgt].clone(),
                    b.name.clone(),
                    self.vertices[b.src].clone(),
                ));
            }
        }
        Ok(Path(ids))
    }

    pub fn path_src(&self, p: &Path) -> usize {
        self.arrow(p.0[0]).src
    }
    pub fn path_tgt(&self, p: &Path) -> usize {
        self.arrow(*p.0.last().unwrap()).tgt
    }

    /// Concatenation `p` then `q`; errors when the endpoints do not match,
    /// which is exactly when the product vanishes across idempotents.
    pub fn compose(&self, p: &Path, q: &Path) -> Result<Path, QuiverError> {
        if self.path_tgt(p) != self.path_src(q) {
            return Err(QuiverError::Noncomposable(
                self.path_text(p),
                self.vertices[self.path_tgt(p)].clone(),
                self.path_text(q),
                self.vertices[self.path_src(q)].clone(),
            ));
        }
        let mut ids = p.0.clone();
        ids.extend_from_slice(&q.0);
        Ok(Path(ids))
    }

    pub fn path_text(&self, p: &Path) -> String {
        p.0.iter().map(|a| self.arrow(*a).name.as_str()).collect::<Vec<_>>().join("*")
    }

    /// Monomial order: length first, then the arrow name sequence.
    pub fn cmp_paths(&self, a: &Path, b: &Path) -> std::cmp::Ordering {
        a.len()
            .cmp(&b.len())
            .then_with(|| {
                let ra = a.0.iter().map(|i| self.name_rank[*i as usize]);
                let rb = b.0.iter().map(|i| self.name_rank[*i as usize]);
                ra.cmp(rb)
            })
    }

    /// All paths of exact length `len` from `src` (any target).
    pub fn paths_from(&self, src: usize, len: u32) -> Vec<Path> {
        if len == 0 {
            return Vec::new();
        }
        let mut acc = Vec::new();
        let mut stack: Vec<(usize, Vec<u32>)> = vec![(src, Vec::new())];
        while let Some((at, prefix)) = stack.pop() {
            if prefix.len() as u32 == len {
                acc.push(Path(prefix));
                continue;
            }
            for (id, a) in self.arrows.iter().enumerate() {
                if a.src == at {
                    let mut next = prefix.clone();
                    next.push(id as u32);
                    stack.push((a.tgt, next));
                }
            }
        }
        acc
    }

    /// All paths of exact length `len` between the given endpoints.
    pub fn paths_between(&self, src: usize, tgt: usize, len: u32) -> Vec<Path> {
        self.paths_from(src, len).into_iter().filter(|p| self.path_tgt(p) == tgt).collect()
    }

    /// All paths of exact length `len`.
    pub fn paths_of_length(&self, len: u32) -> Vec<Path> {
        (0..self.vertex_count()).flat_map(|s| self.paths_from(s, len)).collect()
    }
}

/// A nonempty composable sequence of arrows, stored by arrow id.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path(pub Vec<u32>);

impl Path {
    pub fn len(&self) -> u32 {
        self.0.len() as u32
    }
    pub fn arrows(&self) -> &[u32] {
        &self.0
    }
}

/// A finite linear combination of paths with nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathElement<F: Field> {
    terms: BTreeMap<Path, F::Elem>,
}

impl<F: Field> Default for PathElement<F> {
    fn default() -> Self {
        PathElement { terms: BTreeMap::new() }
    }
}

impl<F: Field> PathElement<F> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_path(field: F, p: Path) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(p, field.one());
        PathElement { terms }
    }

    pub fn add_term(&mut self, field: F, p: Path, c: F::Elem) {
        match self.terms.entry(p) {
            std::collections::btree_map::Entry::Vacant(e) => {
                if !field.is_zero(&c) {
                    e.insert(c);
                }
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

    pub fn add(&self, field: F, other: &Self) -> Self {
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(field, p.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, field: F, c: &F::Elem) -> Self {
        if field.is_zero(c) {
            return Self::zero();
        }
        PathElement {
            terms: self.terms.iter().map(|(p, v)| (p.clone(), field.mul(v, c))).collect(),
        }
    }

    pub fn neg(&self, field: F) -> Self {
        PathElement {
            terms: self.terms.iter().map(|(p, v)| (p.clone(), field.neg(v))).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn terms(&self) -> impl Iterator<Item = (&Path, &F::Elem)> {
        self.terms.iter()
    }
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }
    pub fn max_len(&self) -> u32 {
        self.terms.keys().map(|p| p.len()).max().unwrap_or(0)
    }
    pub fn min_len(&self) -> u32 {
        self.terms.keys().map(|p| p.len()).min().unwrap_or(0)
    }

    /// True when all terms share one length (zero counts as homogeneous).
    pub fn is_homogeneous(&self) -> bool {
        self.max_len() == self.min_len()
    }

    /// Retain terms with the given source vertex.
    pub fn left_component(&self, quiver: &Quiver, src: usize) -> Self {
        PathElement {
            terms: self
                .terms
                .iter()
                .filter(|(p, _)| quiver.path_src(p) == src)
                .map(|(p, c)| (p.clone(), c.clone()))
                .collect(),
        }
    }

    /// Retain terms with the given target vertex.
    pub fn right_component(&self, quiver: &Quiver, tgt: usize) -> Self {
        PathElement {
            terms: self
                .terms
                .iter()
                .filter(|(p, _)| quiver.path_tgt(p) == tgt)
                .map(|(p, c)| (p.clone(), c.clone()))
                .collect(),
        }
    }

    /// Left multiplication by a path; non-composable terms vanish.
    pub fn mul_path_left(&self, quiver: &Quiver, field: F, u: &Path) -> Self {
        let mut out = Self::zero();
        for (p, c) in &self.terms {
            if quiver.path_tgt(u) == quiver.path_src(p) {
                let mut ids = u.0.clone();
                ids.extend_from_slice(&p.0);
                out.add_term(field, Path(ids), c.clone());
            }
        }
        out
    }

    /// Right multiplication by a path; non-composable terms vanish.
    pub fn mul_path_right(&self, quiver: &Quiver, field: F, v: &Path) -> Self {
        let mut out = Self::zero();
        for (p, c) in &self.terms {
            if quiver.path_tgt(p) == quiver.path_src(v) {
                let mut ids = p.0.clone();
                ids.extend_from_slice(&v.0);
                out.add_term(field, Path(ids), c.clone());
            }
        }
        out
    }

    pub fn mul(&self, quiver: &Quiver, field: F, other: &Self) -> Self {
        let mut out = Self::zero();
        for (p, c) in &self.terms {
            for (q, d) in &other.terms {
                if quiver.path_tgt(p) == quiver.path_src(q) {
                    let mut ids = p.0.clone();
                    ids.extend_from_slice(&q.0);
                    out.add_term(field, Path(ids), field.mul(c, d));
                }
            }
        }
        out
    }

    pub fn display<'a>(&'a self, quiver: &'a Quiver) -> PathElementDisplay<'a, F> {
        PathElementDisplay { elem: self, quiver }
    }
}

pub struct PathElementDisplay<'a, F: Field> {
    elem: &'a PathElement<F>,
    quiver: &'a Quiver,
}

impl<F: Field> fmt::Display for PathElementDisplay<'_, F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.elem.is_zero() {
            return write!(f, "0");
        }
        let mut sorted: Vec<_> = self.elem.terms.iter().collect();
        sorted.sort_by(|a, b| self.quiver.cmp_paths(a.0, b.0));
        for (i, (p, c)) in sorted.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({})*{}", c, self.quiver.path_text(p))?;
        }
        Ok(())
    }
}

/// An ordered list of paths serving as the coordinate system of a subspace.
///
/// Paths are listed in descending monomial order (longest first), so the
/// pivot of a reduced row is its leading monomial and rows supported on
/// short paths sit in the tail of the window.
#[derive(Debug, Clone)]
pub struct PathWindow {
    paths: Vec<Path>,
    index: HashMap<Path, u32>,
}

impl PathWindow {
    pub fn new(quiver: &Quiver, mut paths: Vec<Path>) -> Self {
        paths.sort_by(|a, b| quiver.cmp_paths(b, a));
        paths.dedup();
        let index = paths.iter().enumerate().map(|(i, p)| (p.clone(), i as u32)).collect();
        PathWindow { paths, index }
    }

    /// Paths between fixed endpoints with length in `1..=max_len`.
    pub fn filtered(quiver: &Quiver, src: usize, tgt: usize, max_len: u32) -> Self {
        let mut paths = Vec::new();
        for len in 1..=max_len {
            paths.extend(quiver.paths_between(src, tgt, len));
        }
        Self::new(quiver, paths)
    }

    /// All paths of one exact length between fixed endpoints.
    pub fn exact(quiver: &Quiver, src: usize, tgt: usize, len: u32) -> Self {
        Self::new(quiver, quiver.paths_between(src, tgt, len))
    }

    /// All paths of one exact length, any endpoints.
    pub fn exact_global(quiver: &Quiver, len: u32) -> Self {
        Self::new(quiver, quiver.paths_of_length(len))
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }
    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }
    pub fn path(&self, i: u32) -> &Path {
        &self.paths[i as usize]
    }
    pub fn paths(&self) -> &[Path] {
        &self.paths
    }
    pub fn position(&self, p: &Path) -> Option<u32> {
        self.index.get(p).copied()
    }

    pub fn to_row<F: Field>(&self, e: &PathElement<F>) -> Option<SparseRow<F>> {
        let mut row: SparseRow<F> = Vec::with_capacity(e.term_count());
        for (p, c) in e.terms() {
            row.push((self.position(p)?, c.clone()));
        }
        row.sort_by_key(|(c, _)| *c);
        Some(row)
    }

    pub fn to_element<F: Field>(&self, field: F, row: &SparseRow<F>) -> PathElement<F> {
        let mut e = PathElement::zero();
        for (c, v) in row {
            e.add_term(field, self.paths[*c as usize].clone(), v.clone());
        }
        e
    }
}

/// Saturation status of a computed ideal piece.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Saturation {
    /// Homogeneous generators: the piece is exact.
    Exact,
    /// Inhomogeneous, but the padded computation stabilized at `pad + 1`.
    Stable,
    /// Inhomogeneous and the dimensions still moved when the pad grew.
    Unverified,
}

impl Saturation {
    pub fn trusted(self) -> bool {
        !matches!(self, Saturation::Unverified)
    }
}

/// A two-sided ideal presented by generator path elements.
#[derive(Debug, Clone)]
pub struct IdealPresentation<F: Field> {
    generators: Vec<PathElement<F>>,
    homogeneous: bool,
}

impl<F: Field> IdealPresentation<F> {
    pub fn new(generators: Vec<PathElement<F>>) -> Self {
        let generators: Vec<_> = generators.into_iter().filter(|g| !g.is_zero()).collect();
        let homogeneous = generators.iter().all(|g| g.is_homogeneous());
        IdealPresentation { generators, homogeneous }
    }

    /// Parse each relation expression and collect the presentation.
    pub fn parse(quiver: &Quiver, field: F, relations: &[&str]) -> Result<Self, QuiverError> {
        let gens = relations
            .iter()
            .map(|r| parse_relation(quiver, field, r))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(gens))
    }

    pub fn generators(&self) -> &[PathElement<F>] {
        &self.generators
    }
    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous
    }
    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    /// Longest term length over all generators.
    pub fn max_generator_length(&self) -> u32 {
        self.generators.iter().map(|g| g.max_len()).max().unwrap_or(0)
    }

    /// Default spanning pad for inhomogeneous ideals.
    pub fn default_pad(&self) -> u32 {
        if self.homogeneous {
            0
        } else {
            2 * self.max_generator_length()
        }
    }

    /// The filtered piece `e_src · I · e_tgt` restricted to lengths
    /// `<= max_len`, spanned by padded products `u·g·v`.
    ///
    /// For homogeneous generators the result is exact per length. Otherwise
    /// the span uses products whose longest term fits in `max_len + pad` and
    /// the result carries a [`Saturation`] flag from a stabilization check.
    pub fn filtered_piece(
        &self,
        quiver: &Quiver,
        field: F,
        src: usize,
        tgt: usize,
        max_len: u32,
        pad: u32,
    ) -> FilteredPiece<F> {
        let effective_pad = if self.homogeneous { 0 } else { pad };
        let piece = self.filtered_piece_at_pad(quiver, field, src, tgt, max_len, effective_pad);
        if self.homogeneous {
            return piece;
        }
        let check = self.filtered_piece_at_pad(quiver, field, src, tgt, max_len, effective_pad + 1);
        let stable = piece.level_dims(max_len) == check.level_dims(max_len);
        FilteredPiece {
            saturation: if stable { Saturation::Stable } else { Saturation::Unverified },
            ..piece
        }
    }

    fn filtered_piece_at_pad(
        &self,
        quiver: &Quiver,
        field: F,
        src: usize,
        tgt: usize,
        max_len: u32,
        pad: u32,
    ) -> FilteredPiece<F> {
        let bound = max_len + pad;
        let big_window = PathWindow::filtered(quiver, src, tgt, bound);
        let mut rows: Vec<SparseRow<F>> = Vec::new();
        for g in &self.generators {
            let gmin = g.min_len();
            if gmin > bound {
                continue;
            }
            for a in 0..=(bound - gmin) {
                let lefts: Vec<Option<Path>> = if a == 0 {
                    vec![None]
                } else {
                    quiver.paths_from(src, a).into_iter().map(Some).collect()
                };
                for left in &lefts {
                    let after_left = match left {
                        None => g.left_component(quiver, src),
                        Some(u) => g.mul_path_left(quiver, field, u),
                    };
                    if after_left.is_zero() || after_left.min_len() > bound {
                        continue;
                    }
                    let mut push = |product: PathElement<F>| {
                        if !product.is_zero() && product.max_len() <= bound {
                            let row = big_window
                                .to_row(&product)
                                .expect("spanning product fits the padded window");
                            rows.push(row);
                        }
                    };
                    push(after_left.right_component(quiver, tgt));
                    for b in 1..=(bound - after_left.min_len()) {
                        for v in quiver.paths_of_length(b) {
                            if quiver.path_tgt(&v) == tgt {
                                push(after_left.mul_path_right(quiver, field, &v));
                            }
                        }
                    }
                }
            }
        }
        let big_space = Subspace::from_spanning_rows(field, big_window.len(), rows);

        // Restrict to the <= max_len window: rows whose pivot path has length
        // <= max_len are supported entirely inside it, because the window
        // lists longer paths first.
        let window = PathWindow::filtered(quiver, src, tgt, max_len);
        let offset = (big_window.len() - window.len()) as u32;
        let mut kept: Vec<SparseRow<F>> = Vec::new();
        let mut row_levels: Vec<u32> = Vec::new();
        for (i, pivot) in big_space.pivots().iter().enumerate() {
            let pivot_path = big_window.path(*pivot);
            if pivot_path.len() <= max_len {
                let row = big_space
                    .basis()
                    .row(i)
                    .iter()
                    .map(|(c, v)| (c - offset, v.clone()))
                    .collect();
                kept.push(row);
                row_levels.push(pivot_path.len());
            }
        }
        let space = Subspace::from_spanning_rows(field, window.len(), kept);
        debug_assert_eq!(space.dim(), row_levels.len());
        FilteredPiece { window, space, row_levels, saturation: Saturation::Exact }
    }

    /// The piece of the ideal at one exact length between fixed endpoints.
    ///
    /// For homogeneous generators this is exactly `e_src · I_len · e_tgt`.
    /// For inhomogeneous generators it is the filtered piece at `len`
    /// restricted to its top layer; inspect [`FilteredPiece::saturation`] on
    /// the filtered form when trust matters.
    pub fn piece_at_length(
        &self,
        quiver: &Quiver,
        field: F,
        src: &str,
        tgt: &str,
        len: u32,
        pad: u32,
    ) -> Result<Subspace<F>, QuiverError> {
        let s = quiver.vertex_id(src)?;
        let t = quiver.vertex_id(tgt)?;
        let filtered = self.filtered_piece(quiver, field, s, t, len, pad);
        let window = PathWindow::exact(quiver, s, t, len);
        let mut rows = Vec::new();
        for (i, level) in filtered.row_levels.iter().enumerate() {
            if *level == len {
                let row: SparseRow<F> = filtered
                    .space
                    .basis()
                    .row(i)
                    .iter()
                    .filter_map(|(c, v)| {
                        let p = filtered.window.path(*c);
                        window.position(p).map(|j| (j, v.clone()))
                    })
                    .collect();
                rows.push(row);
            }
        }
        Ok(Subspace::from_spanning_rows(field, window.len(), rows))
    }
}

/// A canonical reduced basis of an ideal block `e_src · I · e_tgt` within a
/// length window, with the pivot length of each basis row.
#[derive(Debug, Clone)]
pub struct FilteredPiece<F: Field> {
    pub window: PathWindow,
    pub space: Subspace<F>,
    pub row_levels: Vec<u32>,
    pub saturation: Saturation,
}

impl<F: Field> FilteredPiece<F> {
    pub fn level_dims(&self, max_len: u32) -> Vec<usize> {
        let mut dims = vec![0usize; max_len as usize + 1];
        for l in &self.row_levels {
            dims[*l as usize] += 1;
        }
        dims
    }

    pub fn dim_at_level(&self, level: u32) -> usize {
        self.row_levels.iter().filter(|l| **l == level).count()
    }

    /// Basis row as a path element.
    pub fn row_element(&self, field: F, i: usize) -> PathElement<F> {
        self.window.to_element(field, self.space.basis().row(i))
    }
}

/// The quotient algebra `T_S(V)/I` truncated at a maximal path length, with
/// canonical normal-form data per endpoint pair.
#[derive(Debug, Clone)]
pub struct QuotientAlgebra<F: Field> {
    field: F,
    quiver: Quiver,
    ideal: IdealPresentation<F>,
    max_length: u32,
    pad: u32,
    pieces: BTreeMap<(usize, usize), FilteredPiece<F>>,
}

impl<F: Field> QuotientAlgebra<F> {
    pub fn new(
        field: F,
        quiver: Quiver,
        ideal: IdealPresentation<F>,
        max_length: u32,
    ) -> Self {
        let pad = ideal.default_pad();
        Self::with_pad(field, quiver, ideal, max_length, pad)
    }

    pub fn with_pad(
        field: F,
        quiver: Quiver,
        ideal: IdealPresentation<F>,
        max_length: u32,
        pad: u32,
    ) -> Self {
        assert!(max_length >= 1, "truncation must be positive");
        let mut pieces = BTreeMap::new();
        for s in 0..quiver.vertex_count() {
            for t in 0..quiver.vertex_count() {
                let piece = ideal.filtered_piece(&quiver, field, s, t, max_length, pad);
                pieces.insert((s, t), piece);
            }
        }
        QuotientAlgebra { field, quiver, ideal, max_length, pad, pieces }
    }

    pub fn field(&self) -> F {
        self.field
    }
    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }
    pub fn ideal(&self) -> &IdealPresentation<F> {
        &self.ideal
    }
    pub fn max_length(&self) -> u32 {
        self.max_length
    }
    pub fn pad(&self) -> u32 {
        self.pad
    }
    pub fn piece(&self, src: usize, tgt: usize) -> &FilteredPiece<F> {
        &self.pieces[&(src, tgt)]
    }

    pub fn saturation(&self) -> Saturation {
        if self.ideal.is_homogeneous() {
            Saturation::Exact
        } else if self.pieces.values().all(|p| p.saturation.trusted()) {
            Saturation::Stable
        } else {
            Saturation::Unverified
        }
    }

    /// Canonical representative of `e` modulo the computed ideal pieces.
    pub fn normal_form(&self, e: &PathElement<F>) -> Result<PathElement<F>, QuiverError> {
        if let Some((p, _)) = e.terms().find(|(p, _)| p.len() > self.max_length) {
            return Err(QuiverError::LengthOverflow(
                self.quiver.path_text(p),
                p.len(),
                self.max_length,
            ));
        }
        let mut out = PathElement::zero();
        for s in 0..self.quiver.vertex_count() {
            for t in 0..self.quiver.vertex_count() {
                let component = e.left_component(&self.quiver, s).right_component(&self.quiver, t);
                if component.is_zero() {
                    continue;
                }
                let piece = self.piece(s, t);
                let row = piece
                    .window
                    .to_row(&component)
                    .expect("component paths fit the filtered window");
                let reduced = piece.space.reduce(&row);
                out = out.add(self.field, &piece.window.to_element(self.field, &reduced));
            }
        }
        Ok(out)
    }

    /// Product followed by normal form.
    pub fn multiply(
        &self,
        a: &PathElement<F>,
        b: &PathElement<F>,
    ) -> Result<PathElement<F>, QuiverError> {
        let prod = a.mul(&self.quiver, self.field, b);
        self.normal_form(&prod)
    }

    /// Dimension of the space of length-`len` normal forms.
    pub fn graded_dimension(&self, len: u32) -> usize {
        assert!(len <= self.max_length, "length beyond truncation");
        let mut dim = 0usize;
        for s in 0..self.quiver.vertex_count() {
            for t in 0..self.quiver.vertex_count() {
                let total = self.quiver.paths_between(s, t, len).len();
                let cut = self.piece(s, t).dim_at_level(len);
                dim += total - cut;
            }
        }
        dim
    }

    /// Canonical monomial basis of the length-`len` graded piece: the
    /// non-pivot paths, in ascending monomial order.
    pub fn graded_basis(&self, len: u32) -> Vec<Path> {
        let mut basis = Vec::new();
        for s in 0..self.quiver.vertex_count() {
            for t in 0..self.quiver.vertex_count() {
                let piece = self.piece(s, t);
                let pivot_paths: Vec<&Path> =
                    piece.space.pivots().iter().map(|c| piece.window.path(*c)).collect();
                for p in self.quiver.paths_between(s, t, len) {
                    if !pivot_paths.contains(&&p) {
                        basis.push(p);
                    }
                }
            }
        }
        basis.sort_by(|a, b| self.quiver.cmp_paths(a, b));
        basis
    }
}

// ---------------------------------------------------------------------------
// Relation expression grammar:
//   expression := term (('+'|'-') term)*
//   term       := coeff '*' path | path
//   path       := arrowName ('*' arrowName)*
//   coeff      := integer | integer '/' positiveInteger
// Whitespace is insignificant. Over GF(p) integer literals reduce mod p.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    Int(i64),
    Star,
    Slash,
    Plus,
    Minus,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, QuiverError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0usize;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        match c {
            '*' => {
                out.push((i, Token::Star));
                i += 1;
            }
            '/' => {
                out.push((i, Token::Slash));
                i += 1;
            }
            '+' => {
                out.push((i, Token::Plus));
                i += 1;
            }
            '-' => {
                out.push((i, Token::Minus));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                    i += 1;
                }
                let lit = &text[start..i];
                let n: i64 = lit.parse().map_err(|_| QuiverError::RelationParse {
                    text: text.to_string(),
                    offset: start,
                    message: format!("integer literal `{lit}` out of range"),
                })?;
                out.push((start, Token::Int(n)));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push((start, Token::Ident(text[start..i].to_string())));
            }
            other => {
                return Err(QuiverError::RelationParse {
                    text: text.to_string(),
                    offset: i,
                    message: format!("unexpected character `{other}`"),
                });
            }
        }
    }
    Ok(out)
}

/// Parse one relation expression into a path element.
pub fn parse_relation<F: Field>(
    quiver: &Quiver,
    field: F,
    text: &str,
) -> Result<PathElement<F>, QuiverError> {
    let tokens = tokenize(text)?;
    let err = |offset: usize, message: String| QuiverError::RelationParse {
        text: text.to_string(),
        offset,
        message,
    };
    let mut pos = 0usize;
    let mut result = PathElement::zero();
    let mut first = true;
    loop {
        if pos >= tokens.len() {
            if first {
                return Err(err(0, "empty expression".to_string()));
            }
            break;
        }
        // Separator (optional leading sign on the first term).
        let mut sign_negative = false;
        match &tokens[pos].1 {
            Token::Plus => {
                pos += 1;
            }
            Token::Minus => {
                sign_negative = true;
                pos += 1;
            }
            _ if first => {}
            _ => {
                return Err(err(tokens[pos].0, "expected `+` or `-` between terms".to_string()));
            }
        }
        first = false;

        // Optional coefficient.
        let mut coeff = field.one();
        if let Some((off, Token::Int(n))) = tokens.get(pos).map(|(o, t)| (*o, t.clone())) {
            pos += 1;
            let mut num = n;
            let mut den = 1u64;
            if let Some((_, Token::Slash)) = tokens.get(pos) {
                pos += 1;
                match tokens.get(pos) {
                    Some((_, Token::Int(d))) if *d > 0 => {
                        den = *d as u64;
                        pos += 1;
                    }
                    _ => {
                        return Err(err(off, "expected positive denominator after `/`".into()));
                    }
                }
            }
            if sign_negative {
                num = -num;
            }
            coeff = field.from_ratio(num, den).map_err(|e| err(off, e.to_string()))?;
            match tokens.get(pos) {
                Some((_, Token::Star)) => {
                    pos += 1;
                }
                _ => {
                    return Err(err(off, "a coefficient must be followed by `*path`".into()));
                }
            }
        } else if sign_negative {
            coeff = field.neg(&coeff);
        }

        // Path.
        let mut arrows: Vec<&str> = Vec::new();
        loop {
            match tokens.get(pos) {
                Some((_, Token::Ident(name))) => {
                    arrows.push(name.as_str());
                    pos += 1;
                }
                Some((off, tok)) => {
                    return Err(err(*off, format!("expected arrow name, found {tok:?}")));
                }
                None => {
                    return Err(err(text.len(), "expected arrow name".to_string()));
                }
            }
            match tokens.get(pos) {
                Some((_, Token::Star)) => {
                    pos += 1;
                }
                _ => break,
            }
        }
        let mut ids = Vec::with_capacity(arrows.len());
        for name in &arrows {
            match quiver.arrow_id(name) {
                Some(id) => ids.push(id),
                None => {
                    return Err(err(0, format!("unknown arrow `{name}`")));
                }
            }
        }
        let path = quiver.path_from_ids(ids).map_err(|e| err(0, e.to_string()))?;
        result.add_term(field, path, coeff);
    }
    Ok(result)
}
