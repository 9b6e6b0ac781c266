//! Bracketing words: grammar, parsing, printing, enumeration and surgery.
//!
//! A bracketing is a balanced word over inputs `•`, stars `*` and brackets,
//! subject to one structural rule: no bracket may enclose exactly one
//! bracketed subword (`[[α]]` is never valid). The text form abbreviates a
//! run of `n` inputs as the decimal `n`, so `[[2]1]` is `[ [ • • ] • ]`.
//!
//! Families select subsets of the grammar: *closed* words carry an outer
//! bracket (the single input `1` counts as closed), *non-degenerate* words
//! have at least two inputs inside every bracket, and in *contracted* words
//! every innermost bracket holds exactly one star.
//!
//! The face counts of the associahedron fall out of the closed
//! non-degenerate family; [`noncrossing_f_vector`] recomputes them from
//! scratch by enumerating pairwise-noncrossing diagonal sets of a convex
//! polygon, which keeps the cross-check independent of the word grammar.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BracketError {
    #[error("empty bracketing")]
    Empty,
    #[error("unbalanced brackets at position {0}")]
    Unbalanced(usize),
    #[error("bracket at position {0} wraps a single bracketed word")]
    DoubleBracket(usize),
    #[error("empty bracket at position {0}")]
    EmptyBracket(usize),
    #[error("unexpected character `{0}` at position {1}")]
    MalformedChar(char, usize),
    #[error("input run of zero at position {0}")]
    ZeroRun(usize),
    #[error("star at position {0} is not the sole content of a bracket")]
    StrayStar(usize),
    #[error("bracket index {0} out of range 1..={1}")]
    BracketIndex(usize, usize),
    #[error("word is already outer-bracketed")]
    AlreadyWrapped,
    #[error("word has no outer bracket to remove")]
    NotOuterBracketed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sym {
    Input,
    Star,
    Open,
    Close,
}

/// One of the bracketing families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BracketingFamily {
    pub closed: bool,
    pub nondegenerate: bool,
    pub contracted: bool,
}

impl BracketingFamily {
    pub const OPEN_DEGENERATE: Self =
        BracketingFamily { closed: false, nondegenerate: false, contracted: false };
    pub const CLOSED_DEGENERATE: Self =
        BracketingFamily { closed: true, nondegenerate: false, contracted: false };
    pub const CLOSED_NONDEGENERATE: Self =
        BracketingFamily { closed: true, nondegenerate: true, contracted: false };
    pub const OPEN_NONDEGENERATE: Self =
        BracketingFamily { closed: false, nondegenerate: true, contracted: false };
    pub const OPEN_CONTRACTED: Self =
        BracketingFamily { closed: false, nondegenerate: false, contracted: true };
    pub const CLOSED_CONTRACTED: Self =
        BracketingFamily { closed: true, nondegenerate: false, contracted: true };
}

/// A validated bracketing word with cached statistics.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bracketing {
    word: Vec<Sym>,
    inputs: u32,
    stars: u32,
    pairs: u32,
    closed: bool,
}

impl fmt::Debug for Bracketing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bracketing({})", self.text())
    }
}

impl fmt::Display for Bracketing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.text())
    }
}

impl Bracketing {
    /// Validate a symbol word and cache its statistics.
    pub fn from_word(word: Vec<Sym>) -> Result<Self, BracketError> {
        if word.is_empty() {
            return Err(BracketError::Empty);
        }
        // Balance.
        let mut depth = 0i64;
        for (i, s) in word.iter().enumerate() {
            match s {
                Sym::Open => depth += 1,
                Sym::Close => {
                    depth -= 1;
                    if depth < 0 {
                        return Err(BracketError::Unbalanced(i));
                    }
                }
                _ => {}
            }
        }
        if depth != 0 {
            return Err(BracketError::Unbalanced(word.len()));
        }
        let matching = matching_table(&word);
        for (i, s) in word.iter().enumerate() {
            match s {
                Sym::Open => {
                    let j = matching[i];
                    if j == i + 1 {
                        return Err(BracketError::EmptyBracket(i));
                    }
                    // Rule: the content must not be a single bracketed word.
                    if word[i + 1] == Sym::Open && matching[i + 1] == j - 1 {
                        return Err(BracketError::DoubleBracket(i));
                    }
                }
                Sym::Star => {
                    let wrapped = i > 0
                        && i + 1 < word.len()
                        && word[i - 1] == Sym::Open
                        && word[i + 1] == Sym::Close;
                    if !wrapped {
                        return Err(BracketError::StrayStar(i));
                    }
                }
                _ => {}
            }
        }
        let inputs = word.iter().filter(|s| **s == Sym::Input).count() as u32;
        let stars = word.iter().filter(|s| **s == Sym::Star).count() as u32;
        let pairs = word.iter().filter(|s| **s == Sym::Open).count() as u32;
        let closed = (word.len() == 1 && word[0] == Sym::Input)
            || (word[0] == Sym::Open && matching[0] == word.len() - 1);
        Ok(Bracketing { word, inputs, stars, pairs, closed })
    }

    /// Parse the text form: digit runs are that many inputs, `*` a star.
    pub fn parse(text: &str) -> Result<Self, BracketError> {
        let mut word = Vec::new();
        let bytes = text.as_bytes();
        let mut i = 0usize;
        while i < bytes.len() {
            let c = bytes[i] as char;
            match c {
                '[' => {
                    word.push(Sym::Open);
                    i += 1;
                }
                ']' => {
                    word.push(Sym::Close);
                    i += 1;
                }
                '*' => {
                    word.push(Sym::Star);
                    i += 1;
                }
                '0'..='9' => {
                    let start = i;
                    while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                        i += 1;
                    }
                    let n: u32 = text[start..i]
                        .parse()
                        .map_err(|_| BracketError::ZeroRun(start))?;
                    if n == 0 {
                        return Err(BracketError::ZeroRun(start));
                    }
                    word.extend(std::iter::repeat(Sym::Input).take(n as usize));
                }
                c if c.is_whitespace() => {
                    i += 1;
                }
                other => return Err(BracketError::MalformedChar(other, i)),
            }
        }
        Self::from_word(word)
    }

    /// Canonical text: run-length digits, `*`, brackets.
    pub fn text(&self) -> String {
        let mut out = String::new();
        let mut run = 0u32;
        for s in &self.word {
            if *s == Sym::Input {
                run += 1;
                continue;
            }
            if run > 0 {
                out.push_str(&run.to_string());
                run = 0;
            }
            out.push(match s {
                Sym::Star => '*',
                Sym::Open => '[',
                Sym::Close => ']',
                Sym::Input => unreachable!(),
            });
        }
        if run > 0 {
            out.push_str(&run.to_string());
        }
        out
    }

    pub fn word(&self) -> &[Sym] {
        &self.word
    }
    pub fn inputs(&self) -> u32 {
        self.inputs
    }
    pub fn stars(&self) -> u32 {
        self.stars
    }
    /// Number of bracket pairs.
    pub fn pairs(&self) -> u32 {
        self.pairs
    }
    /// Leaf slots: inputs plus stars, in word order.
    pub fn leaves(&self) -> u32 {
        self.inputs + self.stars
    }
    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// True when the whole word is `[α]` for a single bracket pair.
    pub fn is_outer_bracketed(&self) -> bool {
        self.word[0] == Sym::Open && matching_table(&self.word)[0] == self.word.len() - 1
    }

    /// Positions of the leaf symbols in word order.
    pub fn leaf_positions(&self) -> Vec<(usize, Sym)> {
        self.word
            .iter()
            .enumerate()
            .filter(|(_, s)| matches!(s, Sym::Input | Sym::Star))
            .map(|(i, s)| (i, *s))
            .collect()
    }

    pub fn matches(&self, family: BracketingFamily) -> bool {
        if family.closed && !self.closed {
            return false;
        }
        if family.contracted {
            return self.is_contracted();
        }
        if self.stars > 0 {
            return false;
        }
        if family.nondegenerate && !self.is_nondegenerate() {
            return false;
        }
        true
    }

    /// Every bracket pair encloses at least two inputs.
    pub fn is_nondegenerate(&self) -> bool {
        let matching = matching_table(&self.word);
        for (i, s) in self.word.iter().enumerate() {
            if *s == Sym::Open {
                let enclosed = self.word[i + 1..matching[i]]
                    .iter()
                    .filter(|t| **t == Sym::Input)
                    .count();
                if enclosed < 2 {
                    return false;
                }
            }
        }
        true
    }

    /// Every innermost bracket holds exactly one star and stars appear
    /// nowhere else.
    pub fn is_contracted(&self) -> bool {
        let matching = matching_table(&self.word);
        for (i, s) in self.word.iter().enumerate() {
            if *s == Sym::Open {
                let inner = &self.word[i + 1..matching[i]];
                let has_bracket = inner.iter().any(|t| *t == Sym::Open);
                if !has_bracket && inner != [Sym::Star] {
                    return false;
                }
            }
        }
        // from_word already forces stars to sit alone inside brackets.
        true
    }

    /// Remove the `m`-th left bracket (1-based, counted over all left
    /// brackets in word order) together with its matching right bracket.
    pub fn remove_bracket(&self, m: usize) -> Result<Bracketing, BracketError> {
        let opens: Vec<usize> = self
            .word
            .iter()
            .enumerate()
            .filter(|(_, s)| **s == Sym::Open)
            .map(|(i, _)| i)
            .collect();
        if m == 0 || m > opens.len() {
            return Err(BracketError::BracketIndex(m, opens.len()));
        }
        let open_at = opens[m - 1];
        let close_at = matching_table(&self.word)[open_at];
        let mut word = Vec::with_capacity(self.word.len() - 2);
        for (i, s) in self.word.iter().enumerate() {
            if i != open_at && i != close_at {
                word.push(*s);
            }
        }
        Bracketing::from_word(word)
    }

    /// Remove the `m`-th internal left bracket of a closed word (skipping
    /// the outer bracket).
    pub fn remove_internal_bracket(&self, m: usize) -> Result<Bracketing, BracketError> {
        if !self.is_outer_bracketed() {
            return Err(BracketError::NotOuterBracketed);
        }
        if m == 0 || m as u32 > self.pairs - 1 {
            return Err(BracketError::BracketIndex(m, self.pairs as usize - 1));
        }
        self.remove_bracket(m + 1)
    }

    /// Wrap in an outer bracket; defined exactly on words that are not
    /// already of the form `[α]`.
    pub fn add_outer(&self) -> Result<Bracketing, BracketError> {
        if self.is_outer_bracketed() {
            return Err(BracketError::AlreadyWrapped);
        }
        let mut word = Vec::with_capacity(self.word.len() + 2);
        word.push(Sym::Open);
        word.extend_from_slice(&self.word);
        word.push(Sym::Close);
        Bracketing::from_word(word)
    }

    /// Byte ranges of the top-level items of the word: each item is a single
    /// leaf or a complete bracketed group.
    pub fn top_level_items(&self) -> Vec<std::ops::Range<usize>> {
        let matching = matching_table(&self.word);
        let mut items = Vec::new();
        let mut i = 0usize;
        while i < self.word.len() {
            match self.word[i] {
                Sym::Input | Sym::Star => {
                    items.push(i..i + 1);
                    i += 1;
                }
                Sym::Open => {
                    let j = matching[i];
                    items.push(i..j + 1);
                    i = j + 1;
                }
                Sym::Close => unreachable!("balanced word"),
            }
        }
        items
    }

    /// Split a closed word at its outer bracket into the maximal sequence of
    /// closed factors; single inputs become the closed bracketing `1`.
    pub fn top_level_split(&self) -> Result<Vec<Bracketing>, BracketError> {
        if !self.is_outer_bracketed() {
            return Err(BracketError::NotOuterBracketed);
        }
        let inner = self.word[1..self.word.len() - 1].to_vec();
        let inner = Bracketing::from_word(inner)?;
        inner
            .top_level_items()
            .into_iter()
            .map(|r| Bracketing::from_word(inner.word[r].to_vec()))
            .collect()
    }

    /// The subword of one top-level item.
    pub fn item(&self, range: std::ops::Range<usize>) -> Bracketing {
        Bracketing::from_word(self.word[range].to_vec()).expect("item of a valid word is valid")
    }
}

/// Matching position for every bracket symbol.
pub fn matching_table(word: &[Sym]) -> Vec<usize> {
    let mut table = vec![usize::MAX; word.len()];
    let mut stack = Vec::new();
    for (i, s) in word.iter().enumerate() {
        match s {
            Sym::Open => stack.push(i),
            Sym::Close => {
                let open = stack.pop().expect("balanced word");
                table[open] = i;
                table[i] = open;
            }
            _ => {}
        }
    }
    table
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Kind {
    Seq,
    Closed,
    Group,
}

struct Enumerator {
    family: BracketingFamily,
    memo: HashMap<(Kind, u32, u32, u32), Vec<Vec<Sym>>>,
}

impl Enumerator {
    fn new(family: BracketingFamily) -> Self {
        Enumerator { family, memo: HashMap::new() }
    }

    fn run(&mut self, kind: Kind, inputs: u32, stars: u32, pairs: u32) -> Vec<Vec<Sym>> {
        if let Some(hit) = self.memo.get(&(kind, inputs, stars, pairs)) {
            return hit.clone();
        }
        let result = match kind {
            Kind::Seq => self.seq(inputs, stars, pairs),
            Kind::Closed => self.closed(inputs, stars, pairs),
            Kind::Group => self.group(inputs, stars, pairs),
        };
        self.memo.insert((kind, inputs, stars, pairs), result.clone());
        result
    }

    /// Nonempty sequences of closed items.
    fn seq(&mut self, inputs: u32, stars: u32, pairs: u32) -> Vec<Vec<Sym>> {
        let mut out = Vec::new();
        for i in 0..=inputs {
            for s in 0..=stars {
                for p in 0..=pairs {
                    if (i, s, p) == (0, 0, 0) {
                        continue;
                    }
                    let firsts = self.run(Kind::Closed, i, s, p);
                    if firsts.is_empty() {
                        continue;
                    }
                    let (ri, rs, rp) = (inputs - i, stars - s, pairs - p);
                    if (ri, rs, rp) == (0, 0, 0) {
                        out.extend(firsts);
                        continue;
                    }
                    let rests = self.run(Kind::Seq, ri, rs, rp);
                    for first in &firsts {
                        for rest in &rests {
                            let mut w = first.clone();
                            w.extend_from_slice(rest);
                            out.push(w);
                        }
                    }
                }
            }
        }
        out
    }

    /// Single closed items: a bare input, or a bracketed group.
    fn closed(&mut self, inputs: u32, stars: u32, pairs: u32) -> Vec<Vec<Sym>> {
        let mut out = Vec::new();
        if (inputs, stars, pairs) == (1, 0, 0) {
            out.push(vec![Sym::Input]);
        }
        out.extend(self.run(Kind::Group, inputs, stars, pairs));
        out
    }

    fn group(&mut self, inputs: u32, stars: u32, pairs: u32) -> Vec<Vec<Sym>> {
        if pairs == 0 {
            return Vec::new();
        }
        let mut out = Vec::new();
        if self.family.contracted && (inputs, stars, pairs) == (0, 1, 1) {
            out.push(vec![Sym::Open, Sym::Star, Sym::Close]);
            return out;
        }
        if self.family.nondegenerate && inputs < 2 {
            return out;
        }
        for content in self.run(Kind::Seq, inputs, stars, pairs - 1) {
            // No bracket may wrap a single bracketed word.
            let single_group =
                content[0] == Sym::Open && matching_table(&content)[0] == content.len() - 1;
            if single_group {
                continue;
            }
            // A contracted bracket that is not [*] must contain a bracket.
            if self.family.contracted && !content.iter().any(|s| *s == Sym::Open) {
                continue;
            }
            let mut w = Vec::with_capacity(content.len() + 2);
            w.push(Sym::Open);
            w.extend_from_slice(&content);
            w.push(Sym::Close);
            out.push(w);
        }
        out
    }
}

/// All words of the family with the given leaf and pair counts, sorted by
/// canonical text. For contracted families `stars` counts the star leaves;
/// plain families only return star-free words.
pub fn enumerate_with_stars(
    family: BracketingFamily,
    inputs: u32,
    stars: u32,
    pairs: u32,
) -> Vec<Bracketing> {
    if !family.contracted && stars > 0 {
        return Vec::new();
    }
    let mut e = Enumerator::new(family);
    let kind = if family.closed { Kind::Closed } else { Kind::Seq };
    let mut words: Vec<Bracketing> = e
        .run(kind, inputs, stars, pairs)
        .into_iter()
        .map(|w| Bracketing::from_word(w).expect("enumerator output is valid"))
        .filter(|b| b.matches(family))
        .collect();
    words.sort_by(|a, b| a.text().cmp(&b.text()));
    words
}

/// All star-free words of the family with `inputs` leaves and `pairs` bracket
/// pairs; for contracted families, all star counts are included.
pub fn enumerate(family: BracketingFamily, inputs: u32, pairs: u32) -> Vec<Bracketing> {
    if !family.contracted {
        return enumerate_with_stars(family, inputs, 0, pairs);
    }
    // Each star consumes one bracket pair, so the star count is bounded.
    let mut words = Vec::new();
    for stars in 0..=pairs {
        words.extend(enumerate_with_stars(family, inputs, stars, pairs));
    }
    words.sort_by(|a, b| a.text().cmp(&b.text()));
    words
}

/// Face counts of the `(k-2)`-dimensional associahedron, indexed by face
/// dimension, computed from the closed non-degenerate bracketings of `k`
/// inputs: a word with `d` bracket pairs indexes a face of dimension
/// `k - 1 - d`.
pub fn associahedron_f_vector(k: u32) -> Vec<usize> {
    assert!(k >= 2, "the associahedron needs at least two inputs");
    let mut f = vec![0usize; (k - 1) as usize];
    for d in 1..=(k - 1) {
        let count = enumerate(BracketingFamily::CLOSED_NONDEGENERATE, k, d).len();
        f[(k - 1 - d) as usize] = count;
    }
    f
}

/// Independent oracle for the associahedron face counts: faces of dimension
/// `k - 2 - m` correspond to sets of `m` pairwise noncrossing diagonals of a
/// convex `(k+1)`-gon. Pure combinatorics, no bracketing code involved.
pub fn noncrossing_f_vector(k: u32) -> Vec<usize> {
    assert!(k >= 2);
    let n = (k + 1) as usize; // polygon vertices
    let mut diagonals = Vec::new();
    for i in 0..n {
        for j in (i + 2)..n {
            if i == 0 && j == n - 1 {
                continue; // polygon edge, not a diagonal
            }
            diagonals.push((i, j));
        }
    }
    let crossing = |a: (usize, usize), b: (usize, usize)| -> bool {
        let (p, q) = a;
        let (r, s) = b;
        (p < r && r < q && q < s) || (r < p && p < s && s < q)
    };
    let mut counts_by_size = vec![0usize; (k - 1) as usize];
    // Backtracking over subsets of pairwise noncrossing diagonals.
    fn extend(
        diagonals: &[(usize, usize)],
        crossing: &dyn Fn((usize, usize), (usize, usize)) -> bool,
        chosen: &mut Vec<(usize, usize)>,
        start: usize,
        counts: &mut [usize],
    ) {
        counts[chosen.len()] += 1;
        for i in start..diagonals.len() {
            let d = diagonals[i];
            if chosen.iter().all(|c| !crossing(*c, d)) {
                chosen.push(d);
                extend(diagonals, crossing, chosen, i + 1, counts);
                chosen.pop();
            }
        }
    }
    let mut chosen = Vec::new();
    extend(&diagonals, &crossing, &mut chosen, 0, &mut counts_by_size);
    // size m <-> dimension k - 2 - m
    let mut f = vec![0usize; (k - 1) as usize];
    for (m, c) in counts_by_size.iter().enumerate() {
        f[(k as usize - 2) - m] = *c;
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let b = Bracketing::parse("[[2]1]").unwrap();
        assert_eq!(
            b.word(),
            &[Sym::Open, Sym::Open, Sym::Input, Sym::Input, Sym::Close, Sym::Input, Sym::Close]
        );
        assert_eq!(b.text(), "[[2]1]");
        let c = Bracketing::parse("[[2][3]]").unwrap();
        assert_eq!(c.inputs(), 5);
        assert_eq!(c.pairs(), 3);
        assert!(matches!(Bracketing::parse("[[1]]"), Err(BracketError::DoubleBracket(_))));
        assert!(matches!(Bracketing::parse("[[2]1"), Err(BracketError::Unbalanced(_))));
        assert!(matches!(Bracketing::parse("[a]"), Err(BracketError::MalformedChar('a', _))));
        assert!(matches!(Bracketing::parse("0"), Err(BracketError::ZeroRun(_))));
        assert!(matches!(Bracketing::parse("*"), Err(BracketError::StrayStar(_))));
        assert!(matches!(Bracketing::parse(""), Err(BracketError::Empty)));
        // whitespace is insignificant; multi-digit runs are greedy
        assert_eq!(Bracketing::parse("[ 12 ]").unwrap().inputs(), 12);
    }

    #[test]
    fn closed_nondegenerate_counts_four_inputs() {
        let family = BracketingFamily::CLOSED_NONDEGENERATE;
        assert_eq!(enumerate(family, 4, 1).len(), 1);
        assert_eq!(enumerate(family, 4, 2).len(), 5);
        assert_eq!(enumerate(family, 4, 3).len(), 5);
    }

    #[test]
    fn figure_one_lists() {
        let family = BracketingFamily::CLOSED_NONDEGENERATE;
        let threefold: Vec<String> =
            enumerate(family, 4, 3).iter().map(|b| b.text()).collect();
        let mut expected =
            vec!["[[[2]1]1]", "[1[[2]1]]", "[[1[2]]1]", "[1[1[2]]]", "[[2][2]]"];
        expected.sort();
        assert_eq!(threefold, expected);
        let twofold: Vec<String> = enumerate(family, 4, 2).iter().map(|b| b.text()).collect();
        let mut expected2 = vec!["[[3]1]", "[[2]2]", "[1[2]1]", "[2[2]]", "[1[3]]"];
        expected2.sort();
        assert_eq!(twofold, expected2);
        assert_eq!(enumerate(family, 4, 1)[0].text(), "[4]");
    }

    #[test]
    fn open_degenerate_small_counts() {
        let family = BracketingFamily::OPEN_DEGENERATE;
        let one: Vec<String> = (0..=2)
            .flat_map(|d| enumerate(family, 1, d))
            .map(|b| b.text())
            .collect();
        assert_eq!(one, vec!["1", "[1]"]);
        let two: Vec<String> = (0..=3)
            .flat_map(|d| enumerate(family, 2, d))
            .map(|b| b.text())
            .collect();
        let mut expected: Vec<String> =
            ["2", "[2]", "[1]1", "1[1]", "[[1]1]", "[1[1]]", "[1][1]", "[[1][1]]"]
                .iter()
                .map(|s| s.to_string())
                .collect();
        let mut got = two.clone();
        got.sort();
        expected.sort();
        assert_eq!(got, expected);
        assert_eq!(two.len(), 8);
    }

    #[test]
    fn closed_nondegenerate_two_inputs() {
        let family = BracketingFamily::CLOSED_NONDEGENERATE;
        let all: Vec<String> = (0..=3)
            .flat_map(|d| enumerate(family, 2, d))
            .map(|b| b.text())
            .collect();
        assert_eq!(all, vec!["[2]"]);
    }

    #[test]
    fn removal_examples() {
        let b = Bracketing::parse("[[2]1]").unwrap();
        assert_eq!(b.remove_bracket(2).unwrap().text(), "[3]");
        assert_eq!(b.remove_bracket(1).unwrap().text(), "[2]1");
        let c = Bracketing::parse("[[2][3]]").unwrap();
        assert_eq!(c.remove_bracket(3).unwrap().text(), "[[2]3]");
        assert!(b.remove_bracket(3).is_err());
        assert!(b.remove_bracket(0).is_err());
    }

    #[test]
    fn add_outer_examples() {
        assert_eq!(Bracketing::parse("2").unwrap().add_outer().unwrap().text(), "[2]");
        assert_eq!(Bracketing::parse("[2]1").unwrap().add_outer().unwrap().text(), "[[2]1]");
        assert!(Bracketing::parse("[2]").unwrap().add_outer().is_err());
    }

    #[test]
    fn removal_and_add_outer_are_inverse_at_the_outer_position() {
        for text in ["2", "[2]1", "1[2]3", "[2][3]"] {
            let b = Bracketing::parse(text).unwrap();
            let wrapped = b.add_outer().unwrap();
            assert_eq!(wrapped.remove_bracket(1).unwrap(), b);
        }
    }

    #[test]
    fn split_examples() {
        let b = Bracketing::parse("[[2]2[3]]").unwrap();
        let parts: Vec<String> =
            b.top_level_split().unwrap().iter().map(|p| p.text()).collect();
        assert_eq!(parts, vec!["[2]", "1", "1", "[3]"]);
        let four = Bracketing::parse("[4]").unwrap();
        assert_eq!(four.top_level_split().unwrap().len(), 4);
        let pair = Bracketing::parse("[[2][2]]").unwrap();
        let split: Vec<String> =
            pair.top_level_split().unwrap().iter().map(|p| p.text()).collect();
        assert_eq!(split, vec!["[2]", "[2]"]);
        assert!(Bracketing::parse("1").unwrap().top_level_split().is_err());
    }

    #[test]
    fn f_vector_small() {
        assert_eq!(associahedron_f_vector(2), vec![1]);
        assert_eq!(associahedron_f_vector(3), vec![2, 1]);
        assert_eq!(associahedron_f_vector(4), vec![5, 5, 1]);
        assert_eq!(noncrossing_f_vector(2), vec![1]);
        assert_eq!(noncrossing_f_vector(3), vec![2, 1]);
        assert_eq!(noncrossing_f_vector(4), vec![5, 5, 1]);
    }

    #[test]
    fn f_vector_matches_oracle_up_to_seven() {
        for k in 2..=7u32 {
            assert_eq!(associahedron_f_vector(k), noncrossing_f_vector(k), "k = {k}");
        }
    }

    #[test]
    fn euler_characteristic_is_one() {
        for k in 2..=7u32 {
            let f = associahedron_f_vector(k);
            let chi: i64 = f
                .iter()
                .enumerate()
                .map(|(dim, c)| if dim % 2 == 0 { *c as i64 } else { -(*c as i64) })
                .sum();
            assert_eq!(chi, 1, "k = {k}");
        }
    }

    #[test]
    fn contracted_enumeration_star_counts() {
        let family = BracketingFamily::OPEN_CONTRACTED;
        for inputs in 0..=3u32 {
            for pairs in 0..=4u32 {
                for b in enumerate(family, inputs, pairs) {
                    // star count equals innermost bracket count
                    let matching = matching_table(b.word());
                    let innermost = b
                        .word()
                        .iter()
                        .enumerate()
                        .filter(|(i, s)| {
                            **s == Sym::Open
                                && !b.word()[*i + 1..matching[*i]]
                                    .iter()
                                    .any(|t| *t == Sym::Open)
                        })
                        .count() as u32;
                    assert_eq!(b.stars(), innermost);
                    assert!(b.pairs() <= 2 * (b.inputs() + b.stars()));
                }
            }
        }
    }

    #[test]
    fn roundtrip_on_enumerated_words() {
        for family in [
            BracketingFamily::OPEN_DEGENERATE,
            BracketingFamily::CLOSED_NONDEGENERATE,
            BracketingFamily::OPEN_CONTRACTED,
        ] {
            for inputs in 0..=4u32 {
                for pairs in 0..=4u32 {
                    for b in enumerate(family, inputs, pairs) {
                        assert_eq!(Bracketing::parse(&b.text()).unwrap(), b);
                    }
                }
            }
        }
    }
}
