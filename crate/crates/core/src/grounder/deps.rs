//! Predicate dependency graph and its strongly connected components.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::ast::{Literal, Rule, Signature};

fn literal_predicates(lit: &Literal, in_aggregate: bool, out: &mut Vec<(Signature, bool)>) {
    match lit {
        Literal::Atom { atom, .. } => out.push((atom.signature(), in_aggregate)),
        Literal::Aggregate { atom, .. } => {
            for e in &atom.elements {
                for c in &e.condition {
                    literal_predicates(c, true, out);
                }
            }
        }
        Literal::Builtin(_) | Literal::External { .. } => {}
    }
}

/// Body predicates of a rule, each flagged if it occurs inside an aggregate.
pub(crate) fn body_predicates(body: &[Literal]) -> Vec<(Signature, bool)> {
    let mut out = Vec::new();
    for l in body {
        literal_predicates(l, false, &mut out);
    }
    out
}

pub(crate) struct Components {
    /// Components in dependency order: each only depends on itself and earlier ones.
    pub order: Vec<Vec<Signature>>,
    pub of: BTreeMap<Signature, usize>,
}

/// Builds the graph over head predicates (head → body edges, heads of one
/// rule mutually linked) and returns its components, dependencies first.
pub(crate) fn components(rules: &[Rule]) -> Components {
    let mut index: BTreeMap<Signature, usize> = BTreeMap::new();
    let mut nodes: Vec<Signature> = Vec::new();
    for r in rules {
        for h in &r.head {
            let sig = h.signature();
            if !index.contains_key(&sig) {
                index.insert(sig.clone(), nodes.len());
                nodes.push(sig);
            }
        }
    }
    let mut edges: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
    let add = |from: usize, to: usize, edges: &mut Vec<Vec<usize>>| {
        if !edges[from].contains(&to) {
            edges[from].push(to);
        }
    };
    for r in rules {
        let heads: Vec<usize> = r.head.iter().map(|h| index[&h.signature()]).collect();
        let deps: Vec<usize> = body_predicates(&r.body)
            .into_iter()
            .filter_map(|(sig, _)| index.get(&sig).copied())
            .collect();
        for &h in &heads {
            for &other in heads.iter().chain(&deps) {
                add(h, other, &mut edges);
            }
        }
    }

    let mut t = Tarjan {
        edges: &edges,
        index: vec![None; nodes.len()],
        low: vec![0; nodes.len()],
        on_stack: vec![false; nodes.len()],
        stack: Vec::new(),
        counter: 0,
        out: Vec::new(),
    };
    for v in 0..nodes.len() {
        if t.index[v].is_none() {
            t.visit(v);
        }
    }
    let mut of = BTreeMap::new();
    let order = t
        .out
        .into_iter()
        .enumerate()
        .map(|(ci, comp)| {
            let mut comp = comp;
            comp.sort_unstable();
            comp.into_iter()
                .map(|v| {
                    of.insert(nodes[v].clone(), ci);
                    nodes[v].clone()
                })
                .collect()
        })
        .collect();
    Components { order, of }
}

struct Tarjan<'a> {
    edges: &'a [Vec<usize>],
    index: Vec<Option<usize>>,
    low: Vec<usize>,
    on_stack: Vec<bool>,
    stack: Vec<usize>,
    counter: usize,
    out: Vec<Vec<usize>>,
}

impl Tarjan<'_> {
    fn visit(&mut self, v: usize) {
        self.index[v] = Some(self.counter);
        self.low[v] = self.counter;
        self.counter += 1;
        self.stack.push(v);
        self.on_stack[v] = true;
        for &w in &self.edges[v] {
            match self.index[w] {
                None => {
                    self.visit(w);
                    self.low[v] = self.low[v].min(self.low[w]);
                }
                Some(iw) if self.on_stack[w] => self.low[v] = self.low[v].min(iw),
                Some(_) => {}
            }
        }
        if Some(self.low[v]) == self.index[v] {
            let mut comp = Vec::new();
            loop {
                let w = self.stack.pop().expect("tarjan stack");
                self.on_stack[w] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            self.out.push(comp);
        }
    }
}
