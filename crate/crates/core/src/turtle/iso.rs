//! RDF graph isomorphism: equality of triple sets up to a bijection between
//! blank-node labels.
//!
//! Blank nodes are first partitioned by iterated neighbourhood hashing; a
//! backtracking search then only tries candidates with matching colours.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeSet, HashMap, HashSet};
use std::hash::{Hash, Hasher};

use crate::term::{Term, Triple};

/// True when the two triple sets are equal up to blank-node renaming.
pub fn isomorphic(a: &BTreeSet<Triple>, b: &BTreeSet<Triple>) -> bool {
    find_blank_bijection(a, b).is_some()
}

/// A blank-node mapping from `a` to `b` under which the graphs coincide.
pub fn find_blank_bijection(
    a: &BTreeSet<Triple>,
    b: &BTreeSet<Triple>,
) -> Option<HashMap<String, String>> {
    if a.len() != b.len() {
        return None;
    }
    let has_blank = |t: &Triple| t.subject.is_blank() || t.object.is_blank();
    let (a_blank, a_ground): (Vec<&Triple>, Vec<&Triple>) = a.iter().partition(|t| has_blank(t));
    let (b_blank, b_ground): (Vec<&Triple>, Vec<&Triple>) = b.iter().partition(|t| has_blank(t));
    if a_ground != b_ground || a_blank.len() != b_blank.len() {
        return None;
    }

    let ga = BlankGraph::new(&a_blank);
    let gb = BlankGraph::new(&b_blank);
    if ga.nodes.len() != gb.nodes.len() {
        return None;
    }
    let (ca, cb) = refine_colours(&ga, &gb);

    let mut hist_a: HashMap<u64, usize> = HashMap::new();
    let mut hist_b: HashMap<u64, usize> = HashMap::new();
    for c in ca.values() {
        *hist_a.entry(*c).or_default() += 1;
    }
    for c in cb.values() {
        *hist_b.entry(*c).or_default() += 1;
    }
    if hist_a != hist_b {
        return None;
    }

    // Most constrained colour classes first.
    let mut order: Vec<&str> = ga.nodes.iter().map(String::as_str).collect();
    order.sort_by_key(|n| (hist_a[&ca[*n]], ca[*n], *n));

    let b_set: HashSet<&Triple> = b_blank.iter().copied().collect();
    let mut mapping: HashMap<&str, &str> = HashMap::new();
    let mut used: HashSet<&str> = HashSet::new();
    let candidates: HashMap<u64, Vec<&str>> = {
        let mut m: HashMap<u64, Vec<&str>> = HashMap::new();
        for n in &gb.nodes {
            m.entry(cb[n.as_str()]).or_default().push(n);
        }
        m
    };

    if search(0, &order, &ca, &candidates, &ga, &b_set, &mut mapping, &mut used) {
        Some(
            mapping
                .into_iter()
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect(),
        )
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn search<'a>(
    depth: usize,
    order: &[&'a str],
    ca: &HashMap<&'a str, u64>,
    candidates: &HashMap<u64, Vec<&'a str>>,
    ga: &BlankGraph<'a>,
    b_set: &HashSet<&Triple>,
    mapping: &mut HashMap<&'a str, &'a str>,
    used: &mut HashSet<&'a str>,
) -> bool {
    let Some(&node) = order.get(depth) else {
        return true;
    };
    for &cand in candidates.get(&ca[node]).into_iter().flatten() {
        if used.contains(cand) {
            continue;
        }
        mapping.insert(node, cand);
        used.insert(cand);
        if consistent(node, ga, b_set, mapping)
            && search(depth + 1, order, ca, candidates, ga, b_set, mapping, used)
        {
            return true;
        }
        mapping.remove(node);
        used.remove(cand);
    }
    false
}

/// Checks every triple touching `node` whose blank nodes are all mapped.
fn consistent(
    node: &str,
    ga: &BlankGraph<'_>,
    b_set: &HashSet<&Triple>,
    mapping: &HashMap<&str, &str>,
) -> bool {
    let map_term = |t: &Term| -> Option<Term> {
        match t {
            Term::Blank(l) => mapping.get(l.as_str()).map(|m| Term::Blank(m.to_string())),
            other => Some(other.clone()),
        }
    };
    for t in ga.incident.get(node).into_iter().flatten() {
        let (Some(s), Some(o)) = (map_term(&t.subject), map_term(&t.object)) else {
            continue;
        };
        let mapped = Triple::new(s, t.predicate.clone(), o);
        if !b_set.contains(&mapped) {
            return false;
        }
    }
    true
}

struct BlankGraph<'a> {
    nodes: BTreeSet<String>,
    incident: HashMap<String, Vec<&'a Triple>>,
}

impl<'a> BlankGraph<'a> {
    fn new(triples: &[&'a Triple]) -> Self {
        let mut nodes = BTreeSet::new();
        let mut incident: HashMap<String, Vec<&'a Triple>> = HashMap::new();
        for t in triples {
            let mut seen = Vec::new();
            for term in [&t.subject, &t.object] {
                if let Term::Blank(l) = term {
                    nodes.insert(l.clone());
                    if !seen.contains(&l) {
                        incident.entry(l.clone()).or_default().push(t);
                        seen.push(l);
                    }
                }
            }
        }
        BlankGraph { nodes, incident }
    }
}

fn hash_one(h: impl Hash) -> u64 {
    let mut s = DefaultHasher::new();
    h.hash(&mut s);
    s.finish()
}

fn refine_colours<'a, 'b>(
    ga: &'a BlankGraph<'_>,
    gb: &'b BlankGraph<'_>,
) -> (HashMap<&'a str, u64>, HashMap<&'b str, u64>) {
    fn step<'g>(g: &'g BlankGraph<'_>, colours: &HashMap<&'g str, u64>) -> HashMap<&'g str, u64> {
        g.nodes
            .iter()
            .map(|n| {
                let mut parts: Vec<u64> = g.incident[n]
                    .iter()
                    .map(|t| {
                        let part = |term: &Term| match term {
                            Term::Blank(l) if l == n => hash_one("self"),
                            Term::Blank(l) => hash_one(("blank", colours[l.as_str()])),
                            other => hash_one(("ground", other)),
                        };
                        hash_one((part(&t.subject), &t.predicate, part(&t.object)))
                    })
                    .collect();
                parts.sort_unstable();
                (n.as_str(), hash_one((colours[n.as_str()], parts)))
            })
            .collect()
    }

    let mut ca: HashMap<&str, u64> = ga.nodes.iter().map(|n| (n.as_str(), 0)).collect();
    let mut cb: HashMap<&str, u64> = gb.nodes.iter().map(|n| (n.as_str(), 0)).collect();
    let distinct = |c: &HashMap<&str, u64>| c.values().collect::<HashSet<_>>().len();
    let mut classes = 1;
    for _ in 0..=ga.nodes.len() {
        ca = step(ga, &ca);
        cb = step(gb, &cb);
        let now = distinct(&ca);
        if now == classes {
            break;
        }
        classes = now;
    }
    (ca, cb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::turtle::parse_turtle;

    fn g(src: &str) -> BTreeSet<Triple> {
        parse_turtle(src).unwrap().triples
    }

    #[test]
    fn relabelled_graphs_match() {
        let a = g("ssd:p ssd:hasAge _:x . _:x ssd:years 7 . ssd:q ssd:hasAge _:y . _:y ssd:years 7 .");
        let b = g("ssd:p ssd:hasAge _:n2 . _:n2 ssd:years 7 . ssd:q ssd:hasAge _:n1 . _:n1 ssd:years 7 .");
        let m = find_blank_bijection(&a, &b).unwrap();
        assert_eq!(m["x"], "n2");
        assert_eq!(m["y"], "n1");
    }

    #[test]
    fn different_literals_do_not_match() {
        let a = g("ssd:p ssd:hasAge _:x . _:x ssd:years 7 .");
        let b = g("ssd:p ssd:hasAge _:x . _:x ssd:years 8 .");
        assert!(!isomorphic(&a, &b));
    }

    #[test]
    fn symmetric_cycles_need_search() {
        // Two 2-cycles versus one 4-cycle: equal local neighbourhoods.
        let a = g("_:a ssd:n _:b . _:b ssd:n _:a . _:c ssd:n _:d . _:d ssd:n _:c .");
        let b = g("_:a ssd:n _:b . _:b ssd:n _:c . _:c ssd:n _:d . _:d ssd:n _:a .");
        assert!(!isomorphic(&a, &b));
        let c = g("_:w ssd:n _:x . _:x ssd:n _:w . _:y ssd:n _:z . _:z ssd:n _:y .");
        assert!(isomorphic(&a, &c));
    }

    #[test]
    fn self_loops() {
        let a = g("_:a ssd:n _:a .");
        let b = g("_:b ssd:n _:b .");
        let c = g("_:b ssd:n _:c .");
        assert!(isomorphic(&a, &b));
        assert!(!isomorphic(&a, &c));
    }
}
