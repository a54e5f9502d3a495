//! The two interpretations of the two-sorted language over a universe, and
//! the hash-consed key store the evaluator computes in.
//!
//! * `Native`: quantifiers range over the universe itself, `∈` is membership
//!   and `=` is equality of canonical values.
//! * `ZfmImage`: every value is replaced by its pure-set encoding and both
//!   sorts range over the transitive closure of the encoded universe.

use std::fmt;
use std::hash::BuildHasher;
use std::str::FromStr;

use hashbrown::HashTable;
use rustc_hash::{FxBuildHasher, FxHashMap as HashMap};
use smallvec::SmallVec;

use crate::encode::encode_zfm;
use crate::logic::universe::Universe;
use crate::value::{Shape, Value, View};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Model {
    Native,
    ZfmImage,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Native => "native",
            Model::ZfmImage => "zfm-image",
        }
    }

    /// The quantification domain for `u`, in value order. In the ZFM image
    /// this is the transitive closure of the encodings, so that membership
    /// questions about encoded matrices (whose elements are Kuratowski pairs)
    /// stay inside the domain.
    pub fn domain(self, u: &Universe) -> Vec<Value> {
        match self {
            Model::Native => u.values().to_vec(),
            Model::ZfmImage => {
                let mut seen = std::collections::HashSet::new();
                let mut stack: Vec<Value> = u.values().iter().map(encode_zfm).collect();
                while let Some(v) = stack.pop() {
                    if let Some(elems) = v.elements() {
                        stack.extend(elems.iter().filter(|e| !seen.contains(*e)).cloned());
                    }
                    seen.insert(v);
                }
                let mut out: Vec<Value> = seen.into_iter().collect();
                out.sort();
                out
            }
        }
    }

    /// Whether `v`, a domain element, is in the range of set variables.
    pub fn is_set_sort(self, v: &Value) -> bool {
        match self {
            Model::Native => v.is_set(),
            Model::ZfmImage => true,
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "native" => Ok(Model::Native),
            "zfm" | "zfm-image" => Ok(Model::ZfmImage),
            _ => Err(format!("unknown model `{s}` (expected native or zfm-image)")),
        }
    }
}

pub(crate) type Key = u32;

/// An interned node: a slice of the flat key buffer, plus the shape for a
/// native matrix (`None` for a set).
#[derive(Clone, Copy, Debug)]
struct Node {
    start: usize,
    len: usize,
    shape: Option<Shape>,
}

impl Node {
    fn ids<'a>(&self, data: &'a [Key]) -> &'a [Key] {
        &data[self.start..self.start + self.len]
    }
}

fn node_hash(shape: Option<Shape>, ids: &[Key]) -> u64 {
    FxBuildHasher.hash_one((shape, ids))
}

fn hash_key(nodes: &[Node], data: &[Key], k: Key) -> u64 {
    let n = nodes[k as usize];
    node_hash(n.shape, n.ids(data))
}

/// Side tables filled since a mark, undone on rollback.
enum Undo {
    Kpair(Key, Key),
    IndexPair(u32, u32),
    Numeral,
}

/// A point to roll the store back to. Keys created after it become invalid.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Mark {
    nodes: usize,
    undo: usize,
}

/// Hash-consed values. Two keys are equal exactly when the values they stand
/// for are equal in the model: in the ZFM image a matrix is interned as its
/// function set, so a matrix and its encoding share a key.
pub(crate) struct KeyStore {
    model: Model,
    nodes: Vec<Node>,
    data: Vec<Key>,
    table: HashTable<Key>,
    kpairs: HashMap<(Key, Key), Key>,
    numerals: Vec<Key>,
    /// `index_grid[i-1][j-1]` is the key of the index pair `(i, j)`.
    index_grid: Vec<Vec<Option<Key>>>,
    index_of: HashMap<Key, (u32, u32)>,
    memo: HashMap<Value, Key>,
    undo: Vec<Undo>,
    empty: Key,
}

impl KeyStore {
    pub(crate) fn new(model: Model) -> KeyStore {
        let mut ks = KeyStore {
            model,
            nodes: Vec::new(),
            data: Vec::new(),
            table: HashTable::new(),
            kpairs: HashMap::default(),
            numerals: Vec::new(),
            index_grid: Vec::new(),
            index_of: HashMap::default(),
            memo: HashMap::default(),
            undo: Vec::new(),
            empty: 0,
        };
        ks.empty = ks.intern(None, &[]);
        ks
    }

    pub(crate) fn empty(&self) -> Key {
        self.empty
    }

    pub(crate) fn mark(&self) -> Mark {
        Mark { nodes: self.nodes.len(), undo: self.undo.len() }
    }

    /// Forgets every node created since `mark`.
    pub(crate) fn rollback(&mut self, mark: Mark) {
        while self.undo.len() > mark.undo {
            match self.undo.pop().expect("non-empty") {
                Undo::Kpair(a, b) => {
                    self.kpairs.remove(&(a, b));
                }
                Undo::IndexPair(i, j) => {
                    if let Some(k) = self.index_grid[i as usize - 1][j as usize - 1].take() {
                        self.index_of.remove(&k);
                    }
                }
                Undo::Numeral => {
                    self.numerals.pop();
                }
            }
        }
        if self.nodes.len() <= mark.nodes {
            return;
        }
        for k in (mark.nodes..self.nodes.len()).rev() {
            let k = k as Key;
            let h = hash_key(&self.nodes, &self.data, k);
            if let Ok(entry) = self.table.find_entry(h, |&x| x == k) {
                entry.remove();
            }
        }
        self.data.truncate(self.nodes[mark.nodes].start);
        self.nodes.truncate(mark.nodes);
    }

    fn intern(&mut self, shape: Option<Shape>, ids: &[Key]) -> Key {
        let h = node_hash(shape, ids);
        let (nodes, data) = (&self.nodes, &self.data);
        let same = |&k: &Key| {
            let n = nodes[k as usize];
            n.shape == shape && n.ids(data) == ids
        };
        if let Some(&k) = self.table.find(h, same) {
            return k;
        }
        let k = self.nodes.len() as Key;
        self.nodes.push(Node { start: self.data.len(), len: ids.len(), shape });
        self.data.extend_from_slice(ids);
        let (nodes, data) = (&self.nodes, &self.data);
        self.table.insert_unique(h, k, |&k| hash_key(nodes, data, k));
        k
    }

    /// Interns the set with elements `ids` (sorted and deduplicated here).
    pub(crate) fn intern_set(&mut self, ids: &mut [Key]) -> Key {
        ids.sort_unstable();
        let n = dedup_sorted(ids);
        self.intern(None, &ids[..n])
    }

    pub(crate) fn singleton(&mut self, a: Key) -> Key {
        self.intern(None, &[a])
    }

    pub(crate) fn kpair(&mut self, a: Key, b: Key) -> Key {
        if let Some(&k) = self.kpairs.get(&(a, b)) {
            return k;
        }
        let sa = self.singleton(a);
        let sab = self.intern_set(&mut [a, b]);
        let k = self.intern_set(&mut [sa, sab]);
        self.kpairs.insert((a, b), k);
        self.undo.push(Undo::Kpair(a, b));
        k
    }

    fn numeral(&mut self, n: u32) -> Key {
        while self.numerals.len() <= n as usize {
            let mut elems = self.numerals.clone();
            let k = self.intern_set(&mut elems);
            self.numerals.push(k);
            self.undo.push(Undo::Numeral);
        }
        self.numerals[n as usize]
    }

    fn index_pair(&mut self, i: u32, j: u32) -> Key {
        let (r, c) = (i as usize - 1, j as usize - 1);
        if let Some(&Some(k)) = self.index_grid.get(r).and_then(|row| row.get(c)) {
            return k;
        }
        let (a, b) = (self.numeral(i), self.numeral(j));
        let k = self.kpair(a, b);
        if self.index_grid.len() <= r {
            self.index_grid.resize(r + 1, Vec::new());
        }
        if self.index_grid[r].len() <= c {
            self.index_grid[r].resize(c + 1, None);
        }
        self.index_grid[r][c] = Some(k);
        self.index_of.insert(k, (i, j));
        self.undo.push(Undo::IndexPair(i, j));
        k
    }

    /// Interns the index pairs of `shape` and their pairs with each of
    /// `entries`, ahead of any mark, so that rollbacks keep them.
    pub(crate) fn prepare_shape(&mut self, shape: Shape, entries: &[Key]) {
        if self.model == Model::Native || shape.is_unit() {
            return;
        }
        for i in 1..=shape.rows() {
            for j in 1..=shape.cols() {
                let idx = self.index_pair(i, j);
                for &e in entries {
                    self.kpair(idx, e);
                }
            }
        }
    }

    /// Key of the `shape` matrix with entry keys `entries`.
    pub(crate) fn matrix(&mut self, shape: Shape, entries: &[Key]) -> Key {
        debug_assert_eq!(entries.len(), shape.len());
        if shape.is_unit() {
            return entries[0];
        }
        match self.model {
            Model::Native => self.intern(Some(shape), entries),
            Model::ZfmImage => {
                let cols = shape.cols();
                let mut pairs: SmallVec<[Key; 8]> = SmallVec::with_capacity(entries.len());
                for (n, &e) in entries.iter().enumerate() {
                    let n = n as u32;
                    let idx = self.index_pair(n / cols + 1, n % cols + 1);
                    pairs.push(self.kpair(idx, e));
                }
                self.intern_set(&mut pairs)
            }
        }
    }

    /// Key of `v`, interpreted in the store's model.
    pub(crate) fn key_of(&mut self, v: &Value) -> Key {
        if let Some(&k) = self.memo.get(v) {
            return k;
        }
        match v.view() {
            View::Set(elems) => {
                let mut ids: SmallVec<[Key; 8]> = elems.iter().map(|e| self.key_of(e)).collect();
                self.intern_set(&mut ids)
            }
            View::Matrix(shape, entries) => {
                let ids: SmallVec<[Key; 8]> = entries.iter().map(|e| self.key_of(e)).collect();
                self.matrix(shape, &ids)
            }
        }
    }

    /// Like [`KeyStore::key_of`] but remembers the answer; meant for the
    /// fixed domain, before any mark is taken.
    pub(crate) fn key_of_memo(&mut self, v: &Value) -> Key {
        let k = self.key_of(v);
        self.memo.insert(v.clone(), k);
        k
    }

    /// Number of interned nodes; every key is below it.
    pub(crate) fn len(&self) -> usize {
        self.nodes.len()
    }

    pub(crate) fn elements(&self, k: Key) -> Option<&[Key]> {
        let n = self.nodes[k as usize];
        match n.shape {
            None => Some(n.ids(&self.data)),
            Some(_) => None,
        }
    }

    pub(crate) fn mem(&self, a: Key, b: Key) -> bool {
        self.elements(b).is_some_and(|ids| ids.binary_search(&a).is_ok())
    }

    fn unpair(&self, p: Key) -> Option<(Key, Key)> {
        match *self.elements(p)? {
            [s] => match *self.elements(s)? {
                [a] => Some((a, a)),
                _ => None,
            },
            [s1, s2] => {
                let (e1, e2) = (self.elements(s1)?, self.elements(s2)?);
                let (single, double) = match (e1.len(), e2.len()) {
                    (1, 2) => (e1, e2),
                    (2, 1) => (e2, e1),
                    _ => return None,
                };
                let a = single[0];
                match *double {
                    [x, y] if x == a => Some((a, y)),
                    [x, y] if y == a => Some((a, x)),
                    _ => None,
                }
            }
            _ => None,
        }
    }

    /// The entry keys of the `shape` matrix whose key is `target`, if any.
    pub(crate) fn decompose(&mut self, shape: Shape, target: Key) -> Option<SmallVec<[Key; 8]>> {
        if shape.is_unit() {
            return Some(SmallVec::from_slice(&[target]));
        }
        match self.model {
            Model::Native => {
                let n = self.nodes[target as usize];
                (n.shape == Some(shape)).then(|| SmallVec::from_slice(n.ids(&self.data)))
            }
            Model::ZfmImage => {
                if self.elements(target)?.len() != shape.len() {
                    return None;
                }
                // make sure every index pair of the shape is registered
                for i in 1..=shape.rows() {
                    for j in 1..=shape.cols() {
                        self.index_pair(i, j);
                    }
                }
                let cols = shape.cols() as usize;
                let mut out: SmallVec<[Option<Key>; 8]> = smallvec::smallvec![None; shape.len()];
                for &p in self.elements(target)? {
                    let (idx, e) = self.unpair(p)?;
                    let &(i, j) = self.index_of.get(&idx)?;
                    if i > shape.rows() || j as usize > cols {
                        return None;
                    }
                    let slot = &mut out[(i as usize - 1) * cols + (j as usize - 1)];
                    if slot.is_some() {
                        return None;
                    }
                    *slot = Some(e);
                }
                out.into_iter().collect()
            }
        }
    }
}

/// Moves the distinct values of a sorted slice to its front and returns how
/// many there are.
fn dedup_sorted(ids: &mut [Key]) -> usize {
    if ids.is_empty() {
        return 0;
    }
    let mut n = 1;
    for i in 1..ids.len() {
        if ids[i] != ids[n - 1] {
            ids[n] = ids[i];
            n += 1;
        }
    }
    n
}
