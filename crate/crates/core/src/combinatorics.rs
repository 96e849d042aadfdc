//! Permutation pairs, Rauzy operations, Rauzy classes and the integer cocycle
//! attached to Rauzy paths.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A pair of orderings of a finite alphabet: the top row lists the letters by
/// increasing `π_t`, the bottom row by increasing `π_b`.
///
/// Letters are stored as indices into the alphabet, which is kept sorted so
/// that the derived ordering is lexicographic on the two-row encoding.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CombinatorialDatum {
    alphabet: Vec<String>,
    top: Vec<usize>,
    bottom: Vec<usize>,
    top_pos: Vec<usize>,
    bottom_pos: Vec<usize>,
}

impl CombinatorialDatum {
    /// Builds a datum from two rows of letter names.
    pub fn from_rows<S: AsRef<str>>(top_row: &[S], bottom_row: &[S]) -> Result<Self> {
        if top_row.is_empty() || bottom_row.is_empty() {
            return Err(Error::TooFewLetters);
        }
        let mut alphabet: Vec<String> = Vec::with_capacity(top_row.len());
        for name in top_row {
            let name = name.as_ref();
            if alphabet.iter().any(|l| l == name) {
                return Err(Error::DuplicateLetter(name.to_string()));
            }
            alphabet.push(name.to_string());
        }
        let mut seen = BTreeSet::new();
        for name in bottom_row {
            if !seen.insert(name.as_ref()) {
                return Err(Error::DuplicateLetter(name.as_ref().to_string()));
            }
        }
        if top_row.len() != bottom_row.len() {
            return Err(Error::RowMismatch(format!(
                "top has {} letters, bottom has {}",
                top_row.len(),
                bottom_row.len()
            )));
        }
        alphabet.sort();
        let index = |name: &str| -> Result<usize> {
            alphabet
                .binary_search_by(|l| l.as_str().cmp(name))
                .map_err(|_| Error::RowMismatch(format!("`{name}` is missing from the top row")))
        };
        let top = top_row
            .iter()
            .map(|n| index(n.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        let bottom = bottom_row
            .iter()
            .map(|n| index(n.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_indices(alphabet, top, bottom))
    }

    /// Parses two whitespace-separated rows.
    pub fn parse(top_row: &str, bottom_row: &str) -> Result<Self> {
        let top: Vec<&str> = top_row.split_whitespace().collect();
        let bottom: Vec<&str> = bottom_row.split_whitespace().collect();
        Self::from_rows(&top, &bottom)
    }

    /// Builds a datum from rows of alphabet indices. The alphabet must be
    /// sorted and the rows must be permutations of `0..alphabet.len()`.
    pub(crate) fn from_indices(alphabet: Vec<String>, top: Vec<usize>, bottom: Vec<usize>) -> Self {
        let d = alphabet.len();
        debug_assert_eq!(top.len(), d);
        debug_assert_eq!(bottom.len(), d);
        let mut top_pos = vec![0; d];
        let mut bottom_pos = vec![0; d];
        for (p, &l) in top.iter().enumerate() {
            top_pos[l] = p;
        }
        for (p, &l) in bottom.iter().enumerate() {
            bottom_pos[l] = p;
        }
        Self {
            alphabet,
            top,
            bottom,
            top_pos,
            bottom_pos,
        }
    }

    pub fn d(&self) -> usize {
        self.alphabet.len()
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn letter(&self, index: usize) -> &str {
        &self.alphabet[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.alphabet.binary_search_by(|l| l.as_str().cmp(name)).ok()
    }

    pub fn letter_index(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownLetter(name.to_string()))
    }

    /// Letters in top order (`π_t^{-1}(1), …, π_t^{-1}(d)`).
    pub fn top(&self) -> &[usize] {
        &self.top
    }

    /// Letters in bottom order.
    pub fn bottom(&self) -> &[usize] {
        &self.bottom
    }

    /// Zero-based top position of a letter, i.e. `π_t(α) − 1`.
    pub fn top_pos(&self, letter: usize) -> usize {
        self.top_pos[letter]
    }

    /// Zero-based bottom position of a letter, i.e. `π_b(α) − 1`.
    pub fn bottom_pos(&self, letter: usize) -> usize {
        self.bottom_pos[letter]
    }

    /// The letters occupying the last top and last bottom slot.
    pub fn last_letters(&self) -> (usize, usize) {
        let d = self.d();
        (self.top[d - 1], self.bottom[d - 1])
    }

    pub fn is_admissible(&self) -> bool {
        let d = self.d();
        let mut in_top = vec![false; d];
        let mut in_bottom = vec![false; d];
        let mut common = 0;
        for k in 0..d.saturating_sub(1) {
            let (t, b) = (self.top[k], self.bottom[k]);
            in_top[t] = true;
            if in_bottom[t] {
                common += 1;
            }
            in_bottom[b] = true;
            if in_top[b] {
                common += 1;
            }
            if common == k + 1 {
                return false;
            }
        }
        true
    }

    /// The permutation `σ = π_b ∘ π_t^{-1}` on zero-based positions.
    pub fn sigma(&self) -> Vec<usize> {
        self.top.iter().map(|&l| self.bottom_pos[l]).collect()
    }

    /// Whether `σ` is a single cycle of length `d`.
    pub fn is_cyclic(&self) -> bool {
        let sigma = self.sigma();
        let mut k = sigma[0];
        let mut len = 1;
        while k != 0 {
            k = sigma[k];
            len += 1;
        }
        len == self.d()
    }

    /// Applies `R^t` or `R^b`. The datum must be admissible.
    pub fn rauzy_step(&self, kind: Kind) -> RauzyArrow {
        let (alpha_t, alpha_b) = self.last_letters();
        debug_assert_ne!(alpha_t, alpha_b, "Rauzy step on a non-admissible datum");
        let (winner, loser, top, bottom) = match kind {
            Kind::Top => {
                let mut bottom = self.bottom[..self.d() - 1].to_vec();
                let at = self.bottom_pos[alpha_t];
                bottom.insert(at + 1, alpha_b);
                (alpha_t, alpha_b, self.top.clone(), bottom)
            }
            Kind::Bottom => {
                let mut top = self.top[..self.d() - 1].to_vec();
                let at = self.top_pos[alpha_b];
                top.insert(at + 1, alpha_t);
                (alpha_b, alpha_t, top, self.bottom.clone())
            }
        };
        let target = Self::from_indices(self.alphabet.clone(), top, bottom);
        RauzyArrow {
            source: self.clone(),
            kind,
            winner,
            loser,
            target,
        }
    }

    /// Keeps only the given letters, re-indexing both rows increasingly.
    /// The result may fail to be admissible.
    pub fn reduction(&self, keep: &[usize]) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::EmptySubset);
        }
        let mut mask = vec![false; self.d()];
        for &l in keep {
            if l >= self.d() {
                return Err(Error::UnknownLetter(l.to_string()));
            }
            mask[l] = true;
        }
        let top: Vec<&str> = self
            .top
            .iter()
            .filter(|&&l| mask[l])
            .map(|&l| self.letter(l))
            .collect();
        let bottom: Vec<&str> = self
            .bottom
            .iter()
            .filter(|&&l| mask[l])
            .map(|&l| self.letter(l))
            .collect();
        Self::from_rows(&top, &bottom)
    }

    /// Reduction keeping the letters named in `keep`.
    pub fn reduction_by_name<S: AsRef<str>>(&self, keep: &[S]) -> Result<Self> {
        let idx = keep
            .iter()
            .map(|n| self.letter_index(n.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        self.reduction(&idx)
    }

    /// The hyperelliptic datum on letters `A, B, …` (bottom row reversed).
    pub fn hyperelliptic(d: usize) -> Self {
        let names: Vec<String> = (0..d).map(default_letter_name).collect();
        let reversed: Vec<String> = names.iter().rev().cloned().collect();
        Self::from_rows(&names, &reversed).expect("distinct generated letters")
    }

    fn row_string(&self, row: &[usize]) -> String {
        row.iter()
            .map(|&l| self.letter(l))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Default letter names `A…Z`, then `L26`, `L27`, … .
pub fn default_letter_name(i: usize) -> String {
    if i < 26 {
        ((b'A' + i as u8) as char).to_string()
    } else {
        format!("L{i}")
    }
}

impl fmt::Display for CombinatorialDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} / {}",
            self.row_string(&self.top),
            self.row_string(&self.bottom)
        )
    }
}

impl fmt::Debug for CombinatorialDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for CombinatorialDatum {
    type Err = Error;

    /// Parses `"A B C D / D C B A"`.
    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split('/');
        let (Some(top), Some(bottom), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(Error::Parse {
                input: s.to_string(),
                reason: "expected two rows separated by `/`".into(),
            });
        };
        Self::parse(top, bottom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Top,
    Bottom,
}

impl Kind {
    pub const BOTH: [Kind; 2] = [Kind::Top, Kind::Bottom];

    pub fn as_char(self) -> char {
        match self {
            Kind::Top => 't',
            Kind::Bottom => 'b',
        }
    }

    pub fn from_char(c: char) -> Result<Self> {
        match c {
            't' => Ok(Kind::Top),
            'b' => Ok(Kind::Bottom),
            other => Err(Error::Parse {
                input: other.to_string(),
                reason: "arrow kinds are `t` or `b`".into(),
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RauzyArrow {
    pub source: CombinatorialDatum,
    pub kind: Kind,
    pub winner: usize,
    pub loser: usize,
    pub target: CombinatorialDatum,
}

/// A compatible concatenation of arrows, possibly empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RauzyPath {
    source: CombinatorialDatum,
    arrows: Vec<RauzyArrow>,
}

impl RauzyPath {
    pub fn empty(source: CombinatorialDatum) -> Self {
        Self {
            source,
            arrows: Vec::new(),
        }
    }

    /// Follows a string over `{t, b}` from an admissible datum.
    pub fn from_kinds(source: CombinatorialDatum, kinds: &str) -> Result<Self> {
        if !source.is_admissible() {
            return Err(Error::NotAdmissible);
        }
        let mut path = Self::empty(source);
        for c in kinds.chars().filter(|c| !c.is_whitespace()) {
            path.push_kind(Kind::from_char(c)?);
        }
        Ok(path)
    }

    pub fn source(&self) -> &CombinatorialDatum {
        &self.source
    }

    pub fn target(&self) -> &CombinatorialDatum {
        self.arrows.last().map_or(&self.source, |a| &a.target)
    }

    pub fn arrows(&self) -> &[RauzyArrow] {
        &self.arrows
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn push_kind(&mut self, kind: Kind) {
        let arrow = self.target().rauzy_step(kind);
        self.arrows.push(arrow);
    }

    pub fn push(&mut self, arrow: RauzyArrow) -> Result<()> {
        if &arrow.source != self.target() {
            return Err(Error::IncompatibleArrow);
        }
        self.arrows.push(arrow);
        Ok(())
    }

    /// `self ∗ other`.
    pub fn concat(&self, other: &RauzyPath) -> Result<Self> {
        if other.source() != self.target() {
            return Err(Error::IncompatibleArrow);
        }
        let mut out = self.clone();
        out.arrows.extend(other.arrows.iter().cloned());
        Ok(out)
    }

    /// The first `r` arrows.
    pub fn truncate(&self, r: usize) -> Self {
        Self {
            source: self.source.clone(),
            arrows: self.arrows[..r.min(self.len())].to_vec(),
        }
    }

    pub fn kinds(&self) -> String {
        self.arrows.iter().map(|a| a.kind.as_char()).collect()
    }

    pub fn winners(&self) -> Vec<usize> {
        self.arrows.iter().map(|a| a.winner).collect()
    }

    /// The cocycle matrix `B_γ`, with `B_{γ1∗γ2} = B_{γ2}·B_{γ1}`.
    pub fn matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::identity(self.source.d());
        for a in &self.arrows {
            // Left multiplication by I + E_{loser,winner}.
            m.add_row(a.winner, a.loser);
        }
        m
    }

    /// Return times `q = B_γ·1` and their sum `N`.
    pub fn return_times(&self) -> (Vec<BigInt>, BigInt) {
        let q = self.matrix().row_sums();
        let n = q.iter().sum();
        (q, n)
    }

    /// `(every entry of B_γ is positive, every letter wins some arrow)`.
    pub fn predicates(&self) -> (bool, bool) {
        let positive = self.matrix().entries.iter().all(|e| e.is_positive());
        let mut won = vec![false; self.source.d()];
        for a in &self.arrows {
            won[a.winner] = true;
        }
        (positive, won.iter().all(|&w| w))
    }
}

impl fmt::Display for RauzyPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} : {}", self.source, self.kinds())
    }
}

/// Dense square matrix of arbitrary-precision integers, indexed by letters.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    dim: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![BigInt::zero(); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = BigInt::one();
        }
        Self { dim, entries }
    }

    pub fn from_rows<T: Into<BigInt> + Copy>(rows: &[Vec<T>]) -> Self {
        let dim = rows.len();
        let entries = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), dim, "matrix must be square");
                r.iter().map(|&x| x.into())
            })
            .collect();
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> &BigInt {
        &self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn row(&self, row: usize) -> &[BigInt] {
        &self.entries[row * self.dim..(row + 1) * self.dim]
    }

    /// `row[to] += row[from]`.
    fn add_row(&mut self, from: usize, to: usize) {
        let d = self.dim;
        for c in 0..d {
            let v = self.entries[from * d + c].clone();
            self.entries[to * d + c] += v;
        }
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.dim, other.dim);
        let d = self.dim;
        let mut entries = vec![BigInt::zero(); d * d];
        for i in 0..d {
            for k in 0..d {
                let a = &self.entries[i * d + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    entries[i * d + j] += a * &other.entries[k * d + j];
                }
            }
        }
        IntMatrix { dim: d, entries }
    }

    pub fn transpose(&self) -> IntMatrix {
        let d = self.dim;
        let mut entries = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                entries.push(self.entries[j * d + i].clone());
            }
        }
        IntMatrix { dim: d, entries }
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Vec<BigRational> {
        let d = self.dim;
        (0..d)
            .map(|i| {
                (0..d).fold(BigRational::zero(), |acc, j| {
                    acc + BigRational::from_integer(self.entries[i * d + j].clone()) * &v[j]
                })
            })
            .collect()
    }

    pub fn row_sums(&self) -> Vec<BigInt> {
        (0..self.dim).map(|i| self.row(i).iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<BigInt> {
        let d = self.dim;
        (0..d)
            .map(|j| (0..d).map(|i| &self.entries[i * d + j]).sum())
            .collect()
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        let d = self.dim;
        if d == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = (0..d).map(|i| self.row(i).to_vec()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..d - 1 {
            if a[k][k].is_zero() {
                let Some(p) = (k + 1..d).find(|&i| !a[i][k].is_zero()) else {
                    return BigInt::zero();
                };
                a.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..d {
                for j in k + 1..d {
                    let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[d - 1][d - 1]
    }

    /// Exact inverse by Gauss–Jordan over the rationals; `None` if singular.
    pub fn inverse(&self) -> Option<Vec<Vec<BigRational>>> {
        let d = self.dim;
        let mut a: Vec<Vec<BigRational>> = (0..d)
            .map(|i| {
                let mut row: Vec<BigRational> = self
                    .row(i)
                    .iter()
                    .map(|x| BigRational::from_integer(x.clone()))
                    .collect();
                row.extend((0..d).map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                }));
                row
            })
            .collect();
        for col in 0..d {
            let p = (col..d).find(|&i| !a[i][col].is_zero())?;
            a.swap(col, p);
            let pivot = a[col][col].clone();
            for x in a[col].iter_mut() {
                *x /= &pivot;
            }
            for i in 0..d {
                if i != col && !a[i][col].is_zero() {
                    let factor = a[i][col].clone();
                    for j in 0..2 * d {
                        let v = &a[col][j] * &factor;
                        a[i][j] -= v;
                    }
                }
            }
        }
        Some(a.into_iter().map(|row| row[d..].to_vec()).collect())
    }

    /// `(ᵗM)^{-1}` as an integer matrix; `None` unless the determinant is ±1.
    pub fn transpose_inverse(&self) -> Option<IntMatrix> {
        let inv = self.transpose().inverse()?;
        let mut entries = Vec::with_capacity(self.dim * self.dim);
        for row in inv {
            for x in row {
                if !x.is_integer() {
                    return None;
                }
                entries.push(x.to_integer());
            }
        }
        Some(IntMatrix {
            dim: self.dim,
            entries,
        })
    }

    /// Rows as `i64`, for display; `None` on overflow.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.dim)
            .map(|i| self.row(i).iter().map(|x| x.to_i64()).collect())
            .collect()
    }
}

/// The closure of a datum under both Rauzy operations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RauzyClass {
    data: Vec<CombinatorialDatum>,
    arrows: Vec<RauzyArrow>,
}

impl RauzyClass {
    /// Breadth-first closure; data are returned in lexicographic order and
    /// arrows in (source, kind) order.
    pub fn generate(seed: &CombinatorialDatum) -> Result<Self> {
        if !seed.is_admissible() {
            return Err(Error::NotAdmissible);
        }
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(seed.clone());
        queue.push_back(seed.clone());
        while let Some(p) = queue.pop_front() {
            for kind in Kind::BOTH {
                let next = p.rauzy_step(kind).target;
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
        let data: Vec<_> = seen.into_iter().collect();
        let arrows = data
            .iter()
            .flat_map(|p| Kind::BOTH.map(|k| p.rauzy_step(k)))
            .collect();
        Ok(Self { data, arrows })
    }

    pub fn data(&self) -> &[CombinatorialDatum] {
        &self.data
    }

    pub fn arrows(&self) -> &[RauzyArrow] {
        &self.arrows
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn contains(&self, p: &CombinatorialDatum) -> bool {
        self.data.binary_search(p).is_ok()
    }

    /// The first cyclic datum in lexicographic order.
    pub fn find_cyclic(&self) -> Option<&CombinatorialDatum> {
        self.data.iter().find(|p| p.is_cyclic())
    }

    /// A shortest path between two data of the class (arrows explored in
    /// `t`, `b` order).
    pub fn find_path(&self, from: &CombinatorialDatum, to: &CombinatorialDatum) -> Result<RauzyPath> {
        for p in [from, to] {
            if !self.contains(p) {
                return Err(Error::NotInClass(p.to_string()));
            }
        }
        self.bfs(from, |p| p == to)
            .ok_or_else(|| Error::NotInClass(to.to_string()))
    }

    /// A shortest path from `from` to the nearest cyclic datum.
    pub fn path_to_nearest_cyclic(&self, from: &CombinatorialDatum) -> Result<RauzyPath> {
        if !self.contains(from) {
            return Err(Error::NotInClass(from.to_string()));
        }
        self.bfs(from, |p| p.is_cyclic()).ok_or(Error::NoCyclicDatum)
    }

    fn bfs(
        &self,
        from: &CombinatorialDatum,
        accept: impl Fn(&CombinatorialDatum) -> bool,
    ) -> Option<RauzyPath> {
        let mut parent: HashMap<CombinatorialDatum, Option<RauzyArrow>> = HashMap::new();
        let mut queue = VecDeque::new();
        parent.insert(from.clone(), None);
        queue.push_back(from.clone());
        while let Some(p) = queue.pop_front() {
            if accept(&p) {
                let mut arrows = Vec::new();
                let mut cur = p;
                while let Some(Some(a)) = parent.get(&cur) {
                    arrows.push(a.clone());
                    cur = a.source.clone();
                }
                arrows.reverse();
                return Some(RauzyPath {
                    source: from.clone(),
                    arrows,
                });
            }
            for kind in Kind::BOTH {
                let arrow = p.rauzy_step(kind);
                if !parent.contains_key(&arrow.target) {
                    queue.push_back(arrow.target.clone());
                    parent.insert(arrow.target.clone(), Some(arrow));
                }
            }
        }
        None
    }
}

/// Every admissible datum over the letters `A, B, …` (`d` of them).
pub fn all_admissible(d: usize) -> Vec<CombinatorialDatum> {
    let names: Vec<String> = (0..d).map(default_letter_name).collect();
    let perms = permutations(d);
    let mut out = Vec::new();
    for t in &perms {
        for b in &perms {
            let p = CombinatorialDatum::from_indices(names.clone(), t.clone(), b.clone());
            if p.is_admissible() {
                out.push(p);
            }
        }
    }
    out.sort();
    out
}

/// Partitions all admissible data over `d` letters into Rauzy classes.
pub fn all_rauzy_classes(d: usize) -> Vec<RauzyClass> {
    let mut remaining: BTreeSet<CombinatorialDatum> = all_admissible(d).into_iter().collect();
    let mut classes = Vec::new();
    while let Some(seed) = remaining.pop_first() {
        let class = RauzyClass::generate(&seed).expect("seed is admissible");
        for p in class.data() {
            remaining.remove(p);
        }
        classes.push(class);
    }
    classes
}

fn permutations(d: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; d], &mut out);
    out
}
