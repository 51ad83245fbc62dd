use std::collections::{BTreeSet, HashMap};
use std::fmt;

use super::term::{Iri, Term, Triple};

/// Dense id of an interned term within one graph.
pub type TermId = u32;

/// Ids in subject, predicate, object order.
pub type IdTriple = [TermId; 3];

#[derive(Debug, Default, Clone)]
struct Interner {
    terms: Vec<Term>,
    ids: HashMap<Term, TermId>,
}

impl Interner {
    fn intern(&mut self, term: &Term) -> TermId {
        if let Some(&id) = self.ids.get(term) {
            return id;
        }
        let id = TermId::try_from(self.terms.len()).expect("more than 2^32 distinct terms");
        self.terms.push(term.clone());
        self.ids.insert(term.clone(), id);
        id
    }

    fn intern_owned(&mut self, term: Term) -> TermId {
        if let Some(&id) = self.ids.get(&term) {
            return id;
        }
        let id = TermId::try_from(self.terms.len()).expect("more than 2^32 distinct terms");
        self.ids.insert(term.clone(), id);
        self.terms.push(term);
        id
    }
}

/// Mutable staging area for a graph. Single writer; `freeze` builds the indexes.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    interner: Interner,
    triples: Vec<IdTriple>,
    next_blank: u64,
    name: Option<String>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn set_name(&mut self, name: Option<String>) {
        self.name = name;
    }

    pub fn intern(&mut self, term: &Term) -> TermId {
        self.interner.intern(term)
    }

    pub fn intern_owned(&mut self, term: Term) -> TermId {
        self.interner.intern_owned(term)
    }

    /// A blank node labelled `b{n}`, unique within this builder.
    pub fn fresh_blank(&mut self) -> TermId {
        loop {
            let term = Term::BlankNode(format!("b{}", self.next_blank));
            self.next_blank += 1;
            if !self.interner.ids.contains_key(&term) {
                return self.interner.intern_owned(term);
            }
        }
    }

    pub fn term(&self, id: TermId) -> &Term {
        &self.interner.terms[id as usize]
    }

    /// Adds a triple by ids. The caller guarantees subject is not a literal
    /// and predicate is an IRI.
    pub fn insert_ids(&mut self, triple: IdTriple) {
        debug_assert!(!self.term(triple[0]).is_literal());
        debug_assert!(self.term(triple[1]).is_iri());
        self.triples.push(triple);
    }

    pub fn insert(&mut self, triple: &Triple) {
        let s = self.intern(&triple.subject);
        let p = self.intern_owned(Term::Iri(triple.predicate.clone()));
        let o = self.intern(&triple.object);
        self.triples.push([s, p, o]);
    }

    pub(crate) fn truncate(&mut self, len: usize) {
        self.triples.truncate(len);
    }

    /// Number of staged triples, duplicates included.
    pub fn staged(&self) -> usize {
        self.triples.len()
    }

    pub fn freeze(self) -> Graph {
        let GraphBuilder {
            interner,
            mut triples,
            name,
            ..
        } = self;
        triples.sort_unstable();
        triples.dedup();
        let mut pos: Vec<IdTriple> = triples.iter().map(|&[s, p, o]| [p, o, s]).collect();
        pos.sort_unstable();
        let mut osp: Vec<IdTriple> = triples.iter().map(|&[s, p, o]| [o, s, p]).collect();
        osp.sort_unstable();
        Graph {
            terms: interner.terms,
            ids: interner.ids,
            spo: triples,
            pos,
            osp,
            name,
        }
    }
}

impl Extend<Triple> for GraphBuilder {
    fn extend<I: IntoIterator<Item = Triple>>(&mut self, iter: I) {
        for t in iter {
            self.insert(&t);
        }
    }
}

impl FromIterator<Triple> for Graph {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        let mut b = GraphBuilder::new();
        b.extend(iter);
        b.freeze()
    }
}

/// Which sorted permutation a probe runs against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexKind {
    Spo,
    Pos,
    Osp,
}

/// An immutable, indexed set of triples.
#[derive(Clone)]
pub struct Graph {
    terms: Vec<Term>,
    ids: HashMap<Term, TermId>,
    spo: Vec<IdTriple>,
    pos: Vec<IdTriple>,
    osp: Vec<IdTriple>,
    name: Option<String>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("name", &self.name)
            .field("triples", &self.spo.len())
            .field("terms", &self.terms.len())
            .finish()
    }
}

impl Default for Graph {
    fn default() -> Self {
        GraphBuilder::new().freeze()
    }
}

impl Graph {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.spo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spo.is_empty()
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn set_name(&mut self, name: Option<String>) {
        self.name = name;
    }

    /// Number of interned terms, including ones no longer used by a triple.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn term(&self, id: TermId) -> &Term {
        &self.terms[id as usize]
    }

    pub fn id_of(&self, term: &Term) -> Option<TermId> {
        self.ids.get(term).copied()
    }

    pub fn id_of_iri(&self, iri: &str) -> Option<TermId> {
        self.ids.get(&Term::Iri(Iri::new_unchecked(iri))).copied()
    }

    /// All triples as ids in SPO order.
    pub fn id_triples(&self) -> &[IdTriple] {
        &self.spo
    }

    /// Raw enumeration of one index, each entry mapped back to (s, p, o).
    pub fn index_triples(&self, kind: IndexKind) -> impl Iterator<Item = IdTriple> + '_ {
        let slice = match kind {
            IndexKind::Spo => &self.spo,
            IndexKind::Pos => &self.pos,
            IndexKind::Osp => &self.osp,
        };
        slice.iter().map(move |&k| unpermute(kind, k))
    }

    pub fn triple(&self, ids: IdTriple) -> Triple {
        let predicate = match self.term(ids[1]) {
            Term::Iri(iri) => iri.clone(),
            other => unreachable!("non-IRI predicate {other}"),
        };
        Triple {
            subject: self.term(ids[0]).clone(),
            predicate,
            object: self.term(ids[2]).clone(),
        }
    }

    pub fn triples(&self) -> impl Iterator<Item = Triple> + '_ {
        self.spo.iter().map(|&t| self.triple(t))
    }

    pub fn contains_ids(&self, t: IdTriple) -> bool {
        self.spo.binary_search(&t).is_ok()
    }

    /// Index and key prefix for a probe with the given bound positions.
    fn choose(s: Option<TermId>, p: Option<TermId>, o: Option<TermId>) -> (IndexKind, [TermId; 3], usize) {
        match (s, p, o) {
            (Some(s), Some(p), Some(o)) => (IndexKind::Spo, [s, p, o], 3),
            (Some(s), Some(p), None) => (IndexKind::Spo, [s, p, 0], 2),
            (Some(s), None, Some(o)) => (IndexKind::Osp, [o, s, 0], 2),
            (None, Some(p), Some(o)) => (IndexKind::Pos, [p, o, 0], 2),
            (Some(s), None, None) => (IndexKind::Spo, [s, 0, 0], 1),
            (None, Some(p), None) => (IndexKind::Pos, [p, 0, 0], 1),
            (None, None, Some(o)) => (IndexKind::Osp, [o, 0, 0], 1),
            (None, None, None) => (IndexKind::Spo, [0; 3], 0),
        }
    }

    fn range(&self, kind: IndexKind, prefix: &[TermId]) -> &[IdTriple] {
        let slice = match kind {
            IndexKind::Spo => &self.spo[..],
            IndexKind::Pos => &self.pos[..],
            IndexKind::Osp => &self.osp[..],
        };
        let n = prefix.len();
        if n == 0 {
            return slice;
        }
        let lo = slice.partition_point(|k| k[..n] < *prefix);
        let hi = lo + slice[lo..].partition_point(|k| k[..n] <= *prefix);
        &slice[lo..hi]
    }

    /// Exact number of triples matching the bound positions.
    pub fn extent(&self, s: Option<TermId>, p: Option<TermId>, o: Option<TermId>) -> usize {
        let (kind, key, n) = Self::choose(s, p, o);
        self.range(kind, &key[..n]).len()
    }

    /// Triples agreeing with every bound position, in the chosen index's order.
    pub fn match_ids(
        &self,
        s: Option<TermId>,
        p: Option<TermId>,
        o: Option<TermId>,
    ) -> impl Iterator<Item = IdTriple> + '_ {
        let (kind, key, n) = Self::choose(s, p, o);
        self.range(kind, &key[..n])
            .iter()
            .map(move |&k| unpermute(kind, k))
    }

    /// Term-level probe. A bound term absent from the graph matches nothing.
    pub fn match_terms(
        &self,
        s: Option<&Term>,
        p: Option<&Term>,
        o: Option<&Term>,
    ) -> Vec<Triple> {
        let lookup = |t: Option<&Term>| match t {
            None => Some(None),
            Some(t) => self.id_of(t).map(Some),
        };
        let (Some(s), Some(p), Some(o)) = (lookup(s), lookup(p), lookup(o)) else {
            return Vec::new();
        };
        self.match_ids(s, p, o).map(|t| self.triple(t)).collect()
    }

    /// Ground triple set, for equality checks on graphs without blank nodes.
    pub fn triple_set(&self) -> BTreeSet<Triple> {
        self.triples().collect()
    }

    /// Subjects typed with `class` via an explicit rdf:type triple.
    pub fn instances_of(&self, class: &str) -> Vec<TermId> {
        let (Some(ty), Some(c)) = (self.id_of_iri(super::vocab::rdf::TYPE), self.id_of_iri(class))
        else {
            return Vec::new();
        };
        self.match_ids(None, Some(ty), Some(c)).map(|t| t[0]).collect()
    }
}

fn unpermute(kind: IndexKind, k: IdTriple) -> IdTriple {
    match kind {
        IndexKind::Spo => k,
        IndexKind::Pos => [k[2], k[0], k[1]],
        IndexKind::Osp => [k[1], k[2], k[0]],
    }
}

impl PartialEq for Graph {
    /// Exact equality of the triple sets. Blank nodes compare by label.
    fn eq(&self, other: &Self) -> bool {
        self.len() == other.len() && self.triple_set() == other.triple_set()
    }
}

impl Eq for Graph {}
