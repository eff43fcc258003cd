//! Subclass hierarchy of ontology classes.
//!
//! The graph is kept acyclic at all times: [`Taxonomy::register_class`]
//! rejects any edge that would close a loop. Subsumption is the
//! reflexive-transitive closure of the asserted edges.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::vocab::{class, local_name};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TaxonomyError {
    #[error("unknown class <{0}>")]
    UnknownClass(String),
    #[error("unknown parent class <{0}>")]
    UnknownParent(String),
    #[error("making <{child}> a subclass of <{parent}> would create a cycle")]
    Cycle { child: String, parent: String },
}

/// Directed acyclic subclass graph over class IRIs.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Taxonomy {
    parents: BTreeMap<String, BTreeSet<String>>,
}

const CORE_EDGES: &[(&str, &[&str])] = &[
    (class::SINGLE_SUBJECT_DESIGN, &[]),
    (class::SIMPLE_DESIGN, &[class::SINGLE_SUBJECT_DESIGN]),
    (class::WITHDRAWAL_DESIGN, &[class::SINGLE_SUBJECT_DESIGN]),
    (class::MULTIPLE_BASELINE_DESIGN, &[class::SINGLE_SUBJECT_DESIGN]),
    (class::ALTERNATING_TREATMENT_DESIGN, &[class::SINGLE_SUBJECT_DESIGN]),
    (class::AB_DESIGN, &[class::SIMPLE_DESIGN]),
    (class::ABAB_DESIGN, &[class::WITHDRAWAL_DESIGN]),
    (class::ACROSS_OUTCOME_MBD, &[class::MULTIPLE_BASELINE_DESIGN]),
    (class::ACROSS_SETTING_MBD, &[class::MULTIPLE_BASELINE_DESIGN]),
    (class::ACROSS_SUBJECT_MBD, &[class::MULTIPLE_BASELINE_DESIGN]),
    (class::PHASE, &[]),
    (class::BASELINE_PHASE, &[class::PHASE]),
    (class::INTERVENTION_PHASE, &[class::PHASE]),
    (class::FOLLOW_UP_PHASE, &[class::PHASE]),
    (class::SIMPLE_INTERVENTION_PHASE, &[class::INTERVENTION_PHASE]),
    (class::ALTERNATING_INTERVENTION_PHASE, &[class::INTERVENTION_PHASE]),
    (class::MBD_ITEM, &[]),
    (class::ACROSS_OUTCOME_MBD_ITEM, &[class::MBD_ITEM]),
    (class::ACROSS_SETTING_MBD_ITEM, &[class::MBD_ITEM]),
    (class::ACROSS_SUBJECT_MBD_ITEM, &[class::MBD_ITEM]),
    (class::PARTICIPANT, &[]),
    (class::AGE_DESCRIPTION, &[]),
    (class::RESULT, &[]),
    (class::INSTANT, &[]),
    (class::INTERVENTION_TYPE, &[]),
    (class::OUTCOME, &[]),
    (class::PEER_MEDIATED_INTERVENTION, &[class::INTERVENTION_TYPE]),
    (class::COMMUNICATION_OUTCOME, &[class::OUTCOME]),
];

impl Taxonomy {
    /// An empty hierarchy.
    pub fn empty() -> Self {
        Taxonomy::default()
    }

    /// The core SSD hierarchy together with the autism extension classes.
    pub fn core() -> Self {
        let mut t = Taxonomy::empty();
        for (name, parents) in CORE_EDGES {
            t.add_class(name, parents.iter().copied())
                .expect("core hierarchy is well formed");
        }
        t
    }

    /// Returns a copy of the taxonomy with `name` added under `parents`.
    pub fn register_class<'a>(
        &self,
        name: &str,
        parents: impl IntoIterator<Item = &'a str>,
    ) -> Result<Taxonomy, TaxonomyError> {
        let mut t = self.clone();
        t.add_class(name, parents)?;
        Ok(t)
    }

    /// In-place form of [`Taxonomy::register_class`]. On error the taxonomy
    /// is left unchanged.
    pub fn add_class<'a>(
        &mut self,
        name: &str,
        parents: impl IntoIterator<Item = &'a str>,
    ) -> Result<(), TaxonomyError> {
        let parents: BTreeSet<&str> = parents.into_iter().collect();
        for parent in &parents {
            if *parent == name {
                return Err(TaxonomyError::Cycle {
                    child: name.to_string(),
                    parent: parent.to_string(),
                });
            }
        }
        for parent in &parents {
            if !self.contains(parent) {
                return Err(TaxonomyError::UnknownParent(parent.to_string()));
            }
        }
        if self.contains(name) {
            for parent in &parents {
                if self.reaches(parent, name) {
                    return Err(TaxonomyError::Cycle {
                        child: name.to_string(),
                        parent: parent.to_string(),
                    });
                }
            }
        }
        let entry = self.parents.entry(name.to_string()).or_default();
        entry.extend(parents.into_iter().map(str::to_string));
        Ok(())
    }

    pub fn contains(&self, name: &str) -> bool {
        self.parents.contains_key(name)
    }

    pub fn classes(&self) -> impl Iterator<Item = &str> {
        self.parents.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.parents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parents.is_empty()
    }

    /// Directly asserted parents of `name`.
    pub fn direct_parents(&self, name: &str) -> impl Iterator<Item = &str> {
        self.parents
            .get(name)
            .into_iter()
            .flat_map(|p| p.iter().map(String::as_str))
    }

    /// Reflexive-transitive subsumption test.
    pub fn is_subclass_of(&self, a: &str, b: &str) -> Result<bool, TaxonomyError> {
        for name in [a, b] {
            if !self.contains(name) {
                return Err(TaxonomyError::UnknownClass(name.to_string()));
            }
        }
        Ok(self.reaches(a, b))
    }

    /// `a ⊑ b`, treating unknown classes as unrelated to everything but
    /// themselves.
    pub fn subsumed_by(&self, a: &str, b: &str) -> bool {
        a == b || self.reaches(a, b)
    }

    fn reaches(&self, from: &str, to: &str) -> bool {
        if from == to {
            return true;
        }
        let mut stack = vec![from];
        let mut seen = BTreeSet::new();
        while let Some(c) = stack.pop() {
            for p in self.direct_parents(c) {
                if p == to {
                    return true;
                }
                if seen.insert(p) {
                    stack.push(p);
                }
            }
        }
        false
    }

    /// All superclasses of `name`, including `name` itself.
    pub fn ancestors(&self, name: &str) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        out.insert(name.to_string());
        let mut stack = vec![name];
        while let Some(c) = stack.pop() {
            for p in self.direct_parents(c) {
                if out.insert(p.to_string()) {
                    stack.push(p);
                }
            }
        }
        out
    }

    /// Ancestor sets for every class, computed once.
    pub fn closure(&self) -> BTreeMap<String, BTreeSet<String>> {
        self.classes()
            .map(|c| (c.to_string(), self.ancestors(c)))
            .collect()
    }

    /// Sorts classes most specific first (more ancestors), then by local
    /// name.
    pub fn sort_specific_first<'a>(&self, classes: impl IntoIterator<Item = &'a String>) -> Vec<&'a String> {
        let mut v: Vec<_> = classes.into_iter().collect();
        v.sort_by(|a, b| {
            let da = self.ancestors(a).len();
            let db = self.ancestors(b).len();
            db.cmp(&da)
                .then_with(|| local_name(a).cmp(local_name(b)))
                .then_with(|| a.cmp(b))
        });
        v
    }
}
