//! Graphviz export of a model's states and indistinguishability edges.

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::model::Model;
use crate::syntax::Agent;

/// An undirected edge between two states and the agents that confuse them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub agents: Vec<Agent>,
}

/// The letters and budgets that distinguish states in a drawing.
fn features(model: &Model, w: usize) -> Vec<String> {
    let mut out: Vec<String> = model.true_props(w).iter().map(|p| p.to_string()).collect();
    for a in model.agents() {
        out.push(format!("b[{a}]={}", model.budget(a, w).expect("known agent")));
    }
    out
}

fn distance(x: &[String], y: &[String]) -> usize {
    let x: BTreeSet<&String> = x.iter().collect();
    let y: BTreeSet<&String> = y.iter().collect();
    x.symmetric_difference(&y).count()
}

fn label(model: &Model, u: usize, v: usize) -> Vec<Agent> {
    model
        .agents()
        .iter()
        .filter(|a| model.relation(a).expect("known agent").related(u, v))
        .cloned()
        .collect()
}

/// Every pair of distinct related states, except edges implied by a path
/// through a third state: a pair is left out when some `x` is linked to
/// both ends by at least the same agents over strictly shorter hops whose
/// lengths add up to at most the pair's own length. Lengths count the
/// letters and budgets on which two states differ.
pub fn drawn_edges(model: &Model) -> Vec<Edge> {
    let n = model.len();
    let feats: Vec<Vec<String>> = (0..n).map(|w| features(model, w)).collect();
    let d = |u: usize, v: usize| distance(&feats[u], &feats[v]);
    let labels: Vec<Vec<Vec<Agent>>> = (0..n).map(|u| (0..n).map(|v| label(model, u, v)).collect()).collect();
    let covers = |outer: &[Agent], inner: &[Agent]| inner.iter().all(|a| outer.contains(a));
    let mut out = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let l = &labels[u][v];
            if l.is_empty() {
                continue;
            }
            let implied = (0..n).filter(|&x| x != u && x != v).any(|x| {
                covers(&labels[u][x], l)
                    && covers(&labels[x][v], l)
                    && d(u, x) < d(u, v)
                    && d(x, v) < d(u, v)
                    && d(u, x) + d(x, v) <= d(u, v)
            });
            if !implied {
                out.push(Edge { from: u, to: v, agents: l.clone() });
            }
        }
    }
    out
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// The model as an undirected Graphviz graph. Nodes show the true letters
/// and budgets; reflexive edges are not drawn.
pub fn to_dot(model: &Model) -> String {
    let mut out = String::from("graph model {\n");
    for w in 0..model.len() {
        let mut lines = vec![model.state_name(w).to_string()];
        lines.extend(features(model, w));
        let text = lines.iter().map(|l| l.replace('\\', "\\\\").replace('"', "\\\"")).collect::<Vec<_>>().join("\\n");
        writeln!(out, "  {} [label=\"{}\"];", quote(model.state_name(w)), text).expect("writing to a string");
    }
    for e in drawn_edges(model) {
        let names: Vec<&str> = e.agents.iter().map(|a| a.name()).collect();
        writeln!(
            out,
            "  {} -- {} [label={}];",
            quote(model.state_name(e.from)),
            quote(model.state_name(e.to)),
            quote(&names.join(","))
        )
        .expect("writing to a string");
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::telescope;

    #[test]
    fn telescope_drawing() {
        let m = telescope();
        let edges: Vec<(usize, usize, String)> = drawn_edges(&m)
            .into_iter()
            .map(|e| (e.from, e.to, e.agents.iter().map(|a| a.name()).collect::<Vec<_>>().join(",")))
            .collect();
        assert_eq!(
            edges,
            vec![
                (0, 1, "l,m,n".to_string()),
                (0, 2, "l".to_string()),
                (1, 3, "l".to_string()),
                (2, 3, "l,m,n".to_string()),
            ]
        );
        let dot = to_dot(&m);
        assert!(dot.starts_with("graph model {"));
        assert_eq!(dot.matches(" -- ").count(), 4);
        assert_eq!(dot.matches("[label=\"w").count(), 4);
    }
}
