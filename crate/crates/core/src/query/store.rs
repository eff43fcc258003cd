use std::collections::HashMap;

use crate::model::KnowledgeBase;
use crate::term::{Term, Triple};
use crate::turtle::{kb_to_graph, TripleGraph};

pub type TermId = u32;

/// Interned, fully indexed, read-only triple set.
#[derive(Debug, Default, Clone)]
pub struct TripleStore {
    terms: Vec<Term>,
    ids: HashMap<Term, TermId>,
    sp: HashMap<(TermId, TermId), Vec<TermId>>,
    po: HashMap<(TermId, TermId), Vec<TermId>>,
    by_p: HashMap<TermId, Vec<(TermId, TermId)>>,
    by_s: HashMap<TermId, Vec<(TermId, TermId)>>,
    by_o: HashMap<TermId, Vec<(TermId, TermId)>>,
    triples: Vec<[TermId; 3]>,
}

impl TripleStore {
    pub fn from_kb(kb: &KnowledgeBase) -> Self {
        Self::from_graph(&kb_to_graph(kb))
    }

    pub fn from_graph(graph: &TripleGraph) -> Self {
        Self::from_triples(&graph.triples)
    }

    pub fn from_triples<'a>(triples: impl IntoIterator<Item = &'a Triple>) -> Self {
        let mut st = TripleStore::default();
        for t in triples {
            let s = st.intern(&t.subject);
            let p = st.intern(&t.predicate);
            let o = st.intern(&t.object);
            st.triples.push([s, p, o]);
        }
        st.triples.sort_unstable();
        st.triples.dedup();
        for &[s, p, o] in &st.triples {
            st.sp.entry((s, p)).or_default().push(o);
            st.po.entry((p, o)).or_default().push(s);
            st.by_p.entry(p).or_default().push((s, o));
            st.by_s.entry(s).or_default().push((p, o));
            st.by_o.entry(o).or_default().push((s, p));
        }
        st
    }

    fn intern(&mut self, t: &Term) -> TermId {
        if let Some(id) = self.ids.get(t) {
            return *id;
        }
        let id = self.terms.len() as TermId;
        self.terms.push(t.clone());
        self.ids.insert(t.clone(), id);
        id
    }

    pub fn id(&self, t: &Term) -> Option<TermId> {
        self.ids.get(t).copied()
    }

    pub fn id_of_iri(&self, iri: &str) -> Option<TermId> {
        self.id(&Term::iri(iri))
    }

    pub fn term(&self, id: TermId) -> &Term {
        &self.terms[id as usize]
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn contains(&self, s: TermId, p: TermId, o: TermId) -> bool {
        self.objects(s, p).contains(&o)
    }

    pub fn objects(&self, s: TermId, p: TermId) -> &[TermId] {
        self.sp.get(&(s, p)).map_or(&[], Vec::as_slice)
    }

    pub fn subjects(&self, p: TermId, o: TermId) -> &[TermId] {
        self.po.get(&(p, o)).map_or(&[], Vec::as_slice)
    }

    /// `(subject, object)` pairs for a predicate.
    pub fn pairs(&self, p: TermId) -> &[(TermId, TermId)] {
        self.by_p.get(&p).map_or(&[], Vec::as_slice)
    }

    /// `(predicate, object)` pairs for a subject.
    pub fn outgoing(&self, s: TermId) -> &[(TermId, TermId)] {
        self.by_s.get(&s).map_or(&[], Vec::as_slice)
    }

    /// `(subject, predicate)` pairs for an object.
    pub fn incoming(&self, o: TermId) -> &[(TermId, TermId)] {
        self.by_o.get(&o).map_or(&[], Vec::as_slice)
    }

    pub fn triples(&self) -> &[[TermId; 3]] {
        &self.triples
    }

    pub fn is_predicate(&self, p: TermId) -> bool {
        self.by_p.contains_key(&p)
    }
}
