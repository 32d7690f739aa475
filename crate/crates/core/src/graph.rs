//! Graphs, triangle-free certification and tessellations.
//!
//! A tessellation partitions the node set into cliques. On a triangle-free
//! graph every clique has at most two nodes, so a tessellation is a matching
//! padded with singletons. A [`TessellationSet`] covers the graph when every
//! edge appears as a two-node element of at least one of its tessellations.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Undirected simple graph on nodes `0..node_count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    node_count: usize,
    /// Sorted, deduplicated, each with `i < j`.
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph, normalizing edge orientation and dropping duplicates.
    pub fn new(node_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut set = BTreeSet::new();
        for &(a, b) in edges {
            for node in [a, b] {
                if node >= node_count {
                    return Err(Error::NodeOutOfRange { node, node_count });
                }
            }
            if a == b {
                return Err(Error::SelfLoop { node: a });
            }
            set.insert((a.min(b), a.max(b)));
        }
        let edges: Vec<_> = set.into_iter().collect();
        let mut adjacency = vec![Vec::new(); node_count];
        for &(a, b) in &edges {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Self {
            node_count,
            edges,
            adjacency,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.adjacency[node]
    }

    pub fn degree(&self, node: usize) -> usize {
        self.adjacency[node].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.node_count && b < self.node_count && self.adjacency[a].binary_search(&b).is_ok()
    }

    /// Returns some triangle `(a, b, c)` with `a < b < c`, if one exists.
    pub fn find_triangle(&self) -> Option<(usize, usize, usize)> {
        for &(a, b) in &self.edges {
            // sorted adjacency lists: intersect by merge
            let (na, nb) = (&self.adjacency[a], &self.adjacency[b]);
            let (mut i, mut j) = (0, 0);
            while i < na.len() && j < nb.len() {
                match na[i].cmp(&nb[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        let mut t = [a, b, na[i]];
                        t.sort_unstable();
                        return Some((t[0], t[1], t[2]));
                    }
                }
            }
        }
        None
    }

    pub fn is_triangle_free(&self) -> bool {
        self.find_triangle().is_none()
    }

    /// Two-coloring of the nodes if the graph is bipartite.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let mut side: Vec<Option<bool>> = vec![None; self.node_count];
        let mut stack = Vec::new();
        for root in 0..self.node_count {
            if side[root].is_some() {
                continue;
            }
            side[root] = Some(false);
            stack.push(root);
            while let Some(u) = stack.pop() {
                let su = side[u].unwrap();
                for &v in &self.adjacency[u] {
                    match side[v] {
                        None => {
                            side[v] = Some(!su);
                            stack.push(v);
                        }
                        Some(sv) if sv == su => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(side.into_iter().map(Option::unwrap).collect())
    }
}

/// Convenience wrapper around [`Graph::new`].
pub fn build_graph(node_count: usize, edges: &[(usize, usize)]) -> Result<Graph> {
    Graph::new(node_count, edges)
}

pub fn is_triangle_free(g: &Graph) -> bool {
    g.is_triangle_free()
}

/// One element of a tessellation: a single node or a two-node clique.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Single(usize),
    Pair(usize, usize),
}

impl Element {
    pub fn nodes(&self) -> impl Iterator<Item = usize> {
        let (first, second) = match *self {
            Element::Single(i) => (i, None),
            Element::Pair(i, j) => (i, Some(j)),
        };
        std::iter::once(first).chain(second)
    }

    fn smallest(&self) -> usize {
        match *self {
            Element::Single(i) => i,
            Element::Pair(i, j) => i.min(j),
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Single(i) => write!(f, "{{{i}}}"),
            Element::Pair(i, j) => write!(f, "{{{i},{j}}}"),
        }
    }
}

// JSON form: `[i]` or `[i, j]`.
impl Serialize for Element {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            Element::Single(i) => [i].serialize(s),
            Element::Pair(i, j) => [i, j].serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for Element {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let nodes = Vec::<usize>::deserialize(d)?;
        match nodes.as_slice() {
            [i] => Ok(Element::Single(*i)),
            [i, j] => Ok(Element::Pair(*i, *j)),
            other => Err(serde::de::Error::custom(format!(
                "tessellation element must hold 1 or 2 nodes, got {}",
                other.len()
            ))),
        }
    }
}

/// A partition of the node set into 1- and 2-node cliques.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Tessellation {
    elements: Vec<Element>,
}

impl Tessellation {
    pub fn new(elements: Vec<Element>) -> Self {
        Self { elements }
    }

    /// Builds a tessellation on `node_count` nodes from a matching, padding
    /// the unmatched nodes with singletons. Elements are ordered by their
    /// smallest node.
    pub fn from_matching(node_count: usize, pairs: &[(usize, usize)]) -> Self {
        let mut covered = vec![false; node_count];
        let mut elements = Vec::with_capacity(node_count);
        for &(i, j) in pairs {
            covered[i] = true;
            covered[j] = true;
            elements.push(Element::Pair(i.min(j), i.max(j)));
        }
        elements.extend(
            covered
                .iter()
                .enumerate()
                .filter(|(_, c)| !**c)
                .map(|(i, _)| Element::Single(i)),
        );
        elements.sort_by_key(Element::smallest);
        Self { elements }
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.elements.iter().filter_map(|e| match *e {
            Element::Pair(i, j) => Some((i, j)),
            Element::Single(_) => None,
        })
    }

    pub fn singletons(&self) -> impl Iterator<Item = usize> + '_ {
        self.elements.iter().filter_map(|e| match *e {
            Element::Single(i) => Some(i),
            Element::Pair(..) => None,
        })
    }

    /// Checks only the partition property on `node_count` nodes.
    pub fn partition_violations(&self, node_count: usize) -> Vec<TessellationViolation> {
        let mut owner: Vec<Option<usize>> = vec![None; node_count];
        let mut violations = Vec::new();
        for (index, element) in self.elements.iter().enumerate() {
            if let Element::Pair(i, j) = *element {
                if i == j {
                    violations.push(TessellationViolation::DegeneratePair {
                        element: index,
                        node: i,
                    });
                    continue;
                }
            }
            for node in element.nodes() {
                if node >= node_count {
                    violations.push(TessellationViolation::NodeOutOfRange { element: index, node });
                    continue;
                }
                match owner[node] {
                    Some(first) => violations.push(TessellationViolation::RepeatedNode {
                        node,
                        first_element: first,
                        element: index,
                    }),
                    None => owner[node] = Some(index),
                }
            }
        }
        violations.extend(
            owner
                .iter()
                .enumerate()
                .filter(|(_, o)| o.is_none())
                .map(|(node, _)| TessellationViolation::MissingNode { node }),
        );
        violations
    }
}

/// Why a tessellation fails to be a clique partition of its graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TessellationViolation {
    NodeOutOfRange {
        element: usize,
        node: usize,
    },
    DegeneratePair {
        element: usize,
        node: usize,
    },
    RepeatedNode {
        node: usize,
        first_element: usize,
        element: usize,
    },
    MissingNode {
        node: usize,
    },
    NotAnEdge {
        element: usize,
        pair: (usize, usize),
    },
}

impl fmt::Display for TessellationViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::NodeOutOfRange { element, node } => {
                write!(f, "element {element}: node {node} out of range")
            }
            Self::DegeneratePair { element, node } => {
                write!(f, "element {element}: pair repeats node {node}")
            }
            Self::RepeatedNode {
                node,
                first_element,
                element,
            } => write!(
                f,
                "element {element}: node {node} repeated (already in element {first_element})"
            ),
            Self::MissingNode { node } => write!(f, "node {node} is not in any element"),
            Self::NotAnEdge { element, pair: (i, j) } => {
                write!(f, "element {element}: ({i},{j}) is not an edge")
            }
        }
    }
}

/// Checks that `t` partitions the nodes of `g` into cliques. An empty
/// violation list means the tessellation is valid.
pub fn validate_tessellation(g: &Graph, t: &Tessellation) -> std::result::Result<(), Vec<TessellationViolation>> {
    let mut violations = t.partition_violations(g.node_count());
    for (element, e) in t.elements.iter().enumerate() {
        if let Element::Pair(i, j) = *e {
            if i != j && i < g.node_count() && j < g.node_count() && !g.has_edge(i, j) {
                violations.push(TessellationViolation::NotAnEdge { element, pair: (i, j) });
            }
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

/// Ordered tessellations; the order is the order in which the local
/// operators are applied within one walk step.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TessellationSet {
    tessellations: Vec<Tessellation>,
}

impl TessellationSet {
    pub fn new(tessellations: Vec<Tessellation>) -> Self {
        Self { tessellations }
    }

    pub fn len(&self) -> usize {
        self.tessellations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tessellations.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Tessellation> {
        self.tessellations.iter()
    }

    pub fn as_slice(&self) -> &[Tessellation] {
        &self.tessellations
    }

    /// Edges of `g` that appear in no tessellation.
    pub fn uncovered_edges(&self, g: &Graph) -> Vec<(usize, usize)> {
        let covered: BTreeSet<(usize, usize)> = self
            .tessellations
            .iter()
            .flat_map(Tessellation::pairs)
            .map(|(i, j)| (i.min(j), i.max(j)))
            .collect();
        g.edges().iter().copied().filter(|e| !covered.contains(e)).collect()
    }

    /// Validates every tessellation against `g` and checks the edge cover.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        for (index, t) in self.tessellations.iter().enumerate() {
            validate_tessellation(g, t).map_err(|violations| Error::InvalidTessellation { index, violations })?;
        }
        let uncovered = self.uncovered_edges(g);
        if let Some(&first) = uncovered.first() {
            return Err(Error::UncoveredEdges {
                uncovered: uncovered.len(),
                first,
            });
        }
        Ok(())
    }
}

impl<'a> IntoIterator for &'a TessellationSet {
    type Item = &'a Tessellation;
    type IntoIter = std::slice::Iter<'a, Tessellation>;

    fn into_iter(self) -> Self::IntoIter {
        self.tessellations.iter()
    }
}

/// Path graph on `node_count` nodes with its two tessellations: the first
/// pairs `(2l, 2l+1)`, the second `(2l+1, 2l+2)`; boundary nodes left
/// unpaired become singletons.
pub fn generate_path_tessellations(node_count: usize) -> Result<(Graph, TessellationSet)> {
    if node_count == 0 {
        return Err(Error::EmptyPath);
    }
    generate_lattice_tessellations(&[node_count])
}

/// Open-boundary square lattice with `2 * dims.len()` tessellations.
///
/// Nodes are indexed row-major (last axis fastest). For each axis there are
/// two tessellations; tessellation `(axis, parity)` pairs node `c` with
/// `c + e_axis` whenever the coordinate sum of `c` has the given parity.
/// In one dimension this reduces to the even/odd pairing of a path. Every
/// node is paired in at most one element per tessellation and interior
/// nodes are paired in all of them.
pub fn generate_lattice_tessellations(dims: &[usize]) -> Result<(Graph, TessellationSet)> {
    if dims.is_empty() {
        return Err(Error::EmptyDimensions);
    }
    if let Some(axis) = dims.iter().position(|&d| d == 0) {
        return Err(Error::ZeroDimension { axis });
    }
    let node_count: usize = dims.iter().product();
    let mut strides = vec![1usize; dims.len()];
    for axis in (0..dims.len() - 1).rev() {
        strides[axis] = strides[axis + 1] * dims[axis + 1];
    }
    let coords = |index: usize| -> Vec<usize> { dims.iter().zip(&strides).map(|(&d, &s)| (index / s) % d).collect() };

    let mut edges = Vec::new();
    let mut tessellations = Vec::with_capacity(2 * dims.len());
    for axis in 0..dims.len() {
        let mut by_parity: [Vec<(usize, usize)>; 2] = [Vec::new(), Vec::new()];
        for node in 0..node_count {
            let c = coords(node);
            if c[axis] + 1 < dims[axis] {
                let parity = c.iter().sum::<usize>() % 2;
                let pair = (node, node + strides[axis]);
                by_parity[parity].push(pair);
                edges.push(pair);
            }
        }
        for pairs in &by_parity {
            tessellations.push(Tessellation::from_matching(node_count, pairs));
        }
    }
    let graph = Graph::new(node_count, &edges)?;
    Ok((graph, TessellationSet::new(tessellations)))
}

/// Cycle graph on `node_count >= 3` nodes (no tessellations; use
/// [`greedy_tessellate`]).
pub fn cycle_graph(node_count: usize) -> Result<Graph> {
    let edges: Vec<_> = (0..node_count).map(|i| (i, (i + 1) % node_count)).collect();
    Graph::new(node_count, &edges)
}

/// Tree from a parent list: node `i + 1` hangs from `parents[i]`, which must be `<= i`.
pub fn tree_from_parents(parents: &[usize]) -> Result<Graph> {
    let node_count = parents.len() + 1;
    let edges: Vec<_> = parents.iter().enumerate().map(|(i, &p)| (p, i + 1)).collect();
    for &(p, child) in &edges {
        if p >= child {
            return Err(Error::NodeOutOfRange {
                node: p,
                node_count: child,
            });
        }
    }
    Graph::new(node_count, &edges)
}

/// Complete `arity`-ary tree of the given depth (depth 0 is a single node).
pub fn regular_tree(arity: usize, depth: usize) -> Result<Graph> {
    let mut parents = Vec::new();
    let mut level = vec![0usize];
    let mut next_id = 1;
    for _ in 0..depth {
        let mut next = Vec::new();
        for &p in &level {
            for _ in 0..arity {
                parents.push(p);
                next.push(next_id);
                next_id += 1;
            }
        }
        level = next;
    }
    tree_from_parents(&parents)
}

/// Tessellates a triangle-free graph.
///
/// Edges are first covered by repeatedly taking a greedy maximal matching of
/// the still-uncovered edges, each matching becoming one tessellation. If
/// that needs more than `max_degree` tessellations, a proper edge coloring is
/// used instead: König's alternating-path construction for bipartite graphs
/// (exactly `max_degree` classes) or Misra–Gries otherwise (at most
/// `max_degree + 1`). The result always has at most `max_degree + 1`
/// tessellations; the edgeless graph gets one tessellation of singletons.
pub fn greedy_tessellate(g: &Graph) -> Result<TessellationSet> {
    if let Some(t) = g.find_triangle() {
        return Err(Error::NotTriangleFree(t));
    }
    let n = g.node_count();
    if g.edge_count() == 0 {
        return Ok(TessellationSet::new(vec![Tessellation::from_matching(n, &[])]));
    }
    let degree = g.max_degree();
    let mut classes = iterated_maximal_matchings(g);
    if classes.len() > degree {
        let coloring = match g.bipartition() {
            Some(_) => bipartite_edge_coloring(g),
            None => misra_gries_edge_coloring(g),
        };
        if coloring.len() < classes.len() {
            classes = coloring;
        }
    }
    Ok(TessellationSet::new(
        classes
            .iter()
            .map(|pairs| Tessellation::from_matching(n, pairs))
            .collect(),
    ))
}

fn iterated_maximal_matchings(g: &Graph) -> Vec<Vec<(usize, usize)>> {
    let mut remaining: Vec<(usize, usize)> = g.edges().to_vec();
    let mut classes = Vec::new();
    while !remaining.is_empty() {
        let mut used = vec![false; g.node_count()];
        let mut matching = Vec::new();
        remaining.retain(|&(a, b)| {
            if used[a] || used[b] {
                true
            } else {
                used[a] = true;
                used[b] = true;
                matching.push((a, b));
                false
            }
        });
        classes.push(matching);
    }
    classes
}

/// Color bookkeeping shared by the edge-coloring routines: `at[u][c]` is the
/// neighbor joined to `u` by the edge of color `c`.
struct EdgeColoring {
    at: Vec<Vec<Option<usize>>>,
}

impl EdgeColoring {
    fn new(node_count: usize, colors: usize) -> Self {
        Self {
            at: vec![vec![None; colors]; node_count],
        }
    }

    fn free_color(&self, u: usize) -> usize {
        self.at[u].iter().position(Option::is_none).expect("palette exhausted")
    }

    fn is_free(&self, u: usize, c: usize) -> bool {
        self.at[u][c].is_none()
    }

    fn color_of(&self, u: usize, v: usize) -> Option<usize> {
        self.at[u].iter().position(|&w| w == Some(v))
    }

    fn set(&mut self, u: usize, v: usize, c: usize) {
        self.at[u][c] = Some(v);
        self.at[v][c] = Some(u);
    }

    fn clear(&mut self, u: usize, v: usize, c: usize) {
        self.at[u][c] = None;
        self.at[v][c] = None;
    }

    /// Swaps colors `a` and `b` along the maximal path from `start` whose
    /// first edge has color `a`.
    fn flip_path(&mut self, start: usize, a: usize, b: usize) {
        let mut path = Vec::new();
        let (mut u, mut c) = (start, a);
        while let Some(v) = self.at[u][c] {
            path.push((u, v, c));
            u = v;
            c = if c == a { b } else { a };
            if path.len() > self.at.len() {
                break;
            }
        }
        for &(u, v, c) in &path {
            self.clear(u, v, c);
        }
        for &(u, v, c) in &path {
            let other = if c == a { b } else { a };
            self.set(u, v, other);
        }
    }

    fn into_classes(self) -> Vec<Vec<(usize, usize)>> {
        let colors = self.at.first().map_or(0, Vec::len);
        let mut classes = vec![Vec::new(); colors];
        for (u, row) in self.at.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                if let Some(v) = v {
                    if u < v {
                        classes[c].push((u, v));
                    }
                }
            }
        }
        classes.retain(|c| !c.is_empty());
        classes
    }
}

fn bipartite_edge_coloring(g: &Graph) -> Vec<Vec<(usize, usize)>> {
    let mut col = EdgeColoring::new(g.node_count(), g.max_degree());
    for &(u, v) in g.edges() {
        let a = col.free_color(u);
        let b = col.free_color(v);
        if !col.is_free(v, a) {
            // the a/b path from v cannot reach u in a bipartite graph
            col.flip_path(v, a, b);
        }
        col.set(u, v, a);
    }
    col.into_classes()
}

fn misra_gries_edge_coloring(g: &Graph) -> Vec<Vec<(usize, usize)>> {
    let mut col = EdgeColoring::new(g.node_count(), g.max_degree() + 1);
    for &(u, v) in g.edges() {
        // maximal fan at u starting with v
        let mut fan = vec![v];
        let mut candidates: Vec<usize> = g.neighbors(u).iter().copied().filter(|&w| w != v).collect();
        loop {
            let last = *fan.last().unwrap();
            let next = candidates
                .iter()
                .position(|&w| col.color_of(u, w).is_some_and(|c| col.is_free(last, c)));
            match next {
                Some(pos) => fan.push(candidates.swap_remove(pos)),
                None => break,
            }
        }
        let c = col.free_color(u);
        let d = col.free_color(*fan.last().unwrap());
        if c != d {
            col.flip_path(u, d, c);
        }
        let w = fan
            .iter()
            .position(|&x| col.is_free(x, d))
            .expect("Misra-Gries invariant: some fan vertex has d free");
        // rotate the fan prefix
        for i in 0..w {
            let ci = col.color_of(u, fan[i + 1]).expect("fan edge is colored");
            col.clear(u, fan[i + 1], ci);
            col.set(u, fan[i], ci);
        }
        col.set(u, fan[w], d);
    }
    col.into_classes()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::new(n, &edges).unwrap()
    }

    fn t(elems: &[&[usize]]) -> Tessellation {
        Tessellation::new(
            elems
                .iter()
                .map(|e| match e {
                    [i] => Element::Single(*i),
                    [i, j] => Element::Pair(*i, *j),
                    _ => unreachable!(),
                })
                .collect(),
        )
    }

    #[test]
    fn build_graph_normalizes() {
        let g = build_graph(2, &[(1, 0), (0, 1)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1)]);
        let g = build_graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        assert_eq!(g.edge_count(), 4);
        assert_eq!(g.max_degree(), 2);
        assert!(build_graph(3, &[(0, 1), (1, 2), (0, 2)]).is_ok());
    }

    #[test]
    fn build_graph_rejects_bad_input() {
        assert!(matches!(build_graph(3, &[(1, 1)]), Err(Error::SelfLoop { node: 1 })));
        assert!(matches!(
            build_graph(3, &[(0, 3)]),
            Err(Error::NodeOutOfRange { node: 3, node_count: 3 })
        ));
        assert!(build_graph(0, &[]).is_ok());
    }

    #[test]
    fn triangle_detection() {
        assert!(is_triangle_free(&path(5)));
        let tri = build_graph(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(!is_triangle_free(&tri));
        assert_eq!(tri.find_triangle(), Some((0, 1, 2)));
        let square = build_graph(4, &[(0, 1), (1, 3), (3, 2), (2, 0)]).unwrap();
        assert!(is_triangle_free(&square));
    }

    #[test]
    fn validate_red_path_tessellation() {
        let g = path(5);
        assert_eq!(validate_tessellation(&g, &t(&[&[0, 1], &[2, 3], &[4]])), Ok(()));
    }

    #[test]
    fn validate_reports_repeated_node() {
        let g = path(5);
        let errs = validate_tessellation(&g, &t(&[&[0, 1], &[1, 2], &[3], &[4]])).unwrap_err();
        assert!(errs.contains(&TessellationViolation::RepeatedNode {
            node: 1,
            first_element: 0,
            element: 1
        }));
    }

    #[test]
    fn validate_reports_non_edge() {
        let g = path(5);
        let errs = validate_tessellation(&g, &t(&[&[0, 2], &[1], &[3, 4]])).unwrap_err();
        assert_eq!(
            errs,
            vec![TessellationViolation::NotAnEdge {
                element: 0,
                pair: (0, 2)
            }]
        );
        assert!(errs[0].to_string().contains("(0,2) is not an edge"));
    }

    #[test]
    fn validate_reports_missing_and_out_of_range() {
        let g = path(3);
        let errs = validate_tessellation(&g, &t(&[&[0, 1], &[5]])).unwrap_err();
        assert!(errs.contains(&TessellationViolation::MissingNode { node: 2 }));
        assert!(errs.contains(&TessellationViolation::NodeOutOfRange { element: 1, node: 5 }));
        let errs = validate_tessellation(&g, &t(&[&[0, 0], &[1], &[2]])).unwrap_err();
        assert!(matches!(errs[0], TessellationViolation::DegeneratePair { .. }));
    }

    #[test]
    fn path_tessellations_n5() {
        let (g, ts) = generate_path_tessellations(5).unwrap();
        assert_eq!(g, path(5));
        assert_eq!(ts.as_slice()[0], t(&[&[0, 1], &[2, 3], &[4]]));
        assert_eq!(ts.as_slice()[1], t(&[&[0], &[1, 2], &[3, 4]]));
        ts.validate(&g).unwrap();
    }

    #[test]
    fn path_tessellations_degenerate_and_empty() {
        let (g, ts) = generate_path_tessellations(1).unwrap();
        assert_eq!(g.node_count(), 1);
        assert_eq!(ts.as_slice(), &[t(&[&[0]]), t(&[&[0]])]);
        assert!(matches!(generate_path_tessellations(0), Err(Error::EmptyPath)));
    }

    #[test]
    fn path_tessellations_n133_counts() {
        let (g, ts) = generate_path_tessellations(133).unwrap();
        let t0 = &ts.as_slice()[0];
        assert_eq!(t0.pairs().count(), 66);
        assert_eq!(t0.singletons().collect::<Vec<_>>(), vec![132]);
        let t1 = &ts.as_slice()[1];
        assert_eq!(t1.pairs().count(), 66);
        assert_eq!(t1.singletons().collect::<Vec<_>>(), vec![0]);
        assert!(ts.uncovered_edges(&g).is_empty());
    }

    #[test]
    fn even_path_has_one_singleton_per_boundary() {
        let (g, ts) = generate_path_tessellations(6).unwrap();
        ts.validate(&g).unwrap();
        assert_eq!(ts.as_slice()[0].singletons().count(), 0);
        assert_eq!(ts.as_slice()[1].singletons().collect::<Vec<_>>(), vec![0, 5]);
    }

    #[test]
    fn lattice_1d_matches_path() {
        assert_eq!(
            generate_lattice_tessellations(&[5]).unwrap(),
            generate_path_tessellations(5).unwrap()
        );
    }

    #[test]
    fn lattice_2x2_is_four_cycle_with_single_pair_tessellations() {
        let (g, ts) = generate_lattice_tessellations(&[2, 2]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (0, 2), (1, 3), (2, 3)]);
        assert_eq!(ts.len(), 4);
        for tess in &ts {
            assert_eq!(tess.pairs().count(), 1);
            assert_eq!(tess.singletons().count(), 2);
        }
        ts.validate(&g).unwrap();
    }

    #[test]
    fn lattice_3x3_covers_twelve_edges() {
        let (g, ts) = generate_lattice_tessellations(&[3, 3]).unwrap();
        assert_eq!(g.node_count(), 9);
        assert_eq!(g.edge_count(), 12);
        assert_eq!(ts.len(), 4);
        ts.validate(&g).unwrap();
        let total: usize = ts.iter().map(|t| t.pairs().count()).sum();
        assert_eq!(total, 12);
    }

    #[test]
    fn lattice_interior_nodes_paired_in_every_tessellation() {
        let (_, ts) = generate_lattice_tessellations(&[5, 5, 5]).unwrap();
        assert_eq!(ts.len(), 6);
        // centre of a 5x5x5 lattice
        let centre = 2 * 25 + 2 * 5 + 2;
        for tess in &ts {
            assert!(tess.pairs().any(|(i, j)| i == centre || j == centre));
        }
    }

    #[test]
    fn lattice_rejects_bad_dims() {
        assert!(matches!(
            generate_lattice_tessellations(&[]),
            Err(Error::EmptyDimensions)
        ));
        assert!(matches!(
            generate_lattice_tessellations(&[3, 0]),
            Err(Error::ZeroDimension { axis: 1 })
        ));
    }

    #[test]
    fn greedy_path_needs_two() {
        let g = path(5);
        let ts = greedy_tessellate(&g).unwrap();
        assert_eq!(ts.len(), 2);
        ts.validate(&g).unwrap();
    }

    #[test]
    fn greedy_star_pairs_center_with_each_leaf() {
        let g = build_graph(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let ts = greedy_tessellate(&g).unwrap();
        assert_eq!(ts.len(), 4);
        for tess in &ts {
            let pairs: Vec<_> = tess.pairs().collect();
            assert_eq!(pairs.len(), 1);
            assert_eq!(pairs[0].0, 0);
        }
        ts.validate(&g).unwrap();
    }

    #[test]
    fn greedy_edgeless_is_all_singletons() {
        let g = build_graph(3, &[]).unwrap();
        let ts = greedy_tessellate(&g).unwrap();
        assert_eq!(ts.as_slice(), &[t(&[&[0], &[1], &[2]])]);
    }

    #[test]
    fn greedy_rejects_triangle() {
        let g = build_graph(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(matches!(greedy_tessellate(&g), Err(Error::NotTriangleFree(_))));
    }

    #[test]
    fn odd_cycle_needs_degree_plus_one() {
        let g = cycle_graph(5).unwrap();
        let ts = greedy_tessellate(&g).unwrap();
        assert_eq!(ts.len(), 3);
        ts.validate(&g).unwrap();
    }

    #[test]
    fn petersen_graph_within_bound() {
        let outer: Vec<_> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
        let spokes: Vec<_> = (0..5).map(|i| (i, i + 5)).collect();
        let inner: Vec<_> = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5)).collect();
        let edges: Vec<_> = outer.into_iter().chain(spokes).chain(inner).collect();
        let g = build_graph(10, &edges).unwrap();
        assert!(g.is_triangle_free());
        let ts = greedy_tessellate(&g).unwrap();
        // class-2 graph: exactly degree + 1
        assert_eq!(ts.len(), 4);
        ts.validate(&g).unwrap();
    }

    #[test]
    fn bipartite_coloring_uses_exactly_max_degree() {
        for g in [
            regular_tree(3, 3).unwrap(),
            generate_lattice_tessellations(&[4, 5]).unwrap().0,
            cycle_graph(8).unwrap(),
        ] {
            let classes = bipartite_edge_coloring(&g);
            assert_eq!(classes.len(), g.max_degree());
            let ts = TessellationSet::new(
                classes
                    .iter()
                    .map(|c| Tessellation::from_matching(g.node_count(), c))
                    .collect(),
            );
            ts.validate(&g).unwrap();
        }
    }

    #[test]
    fn misra_gries_is_proper_on_bipartite_too() {
        let g = generate_lattice_tessellations(&[4, 4]).unwrap().0;
        let classes = misra_gries_edge_coloring(&g);
        assert!(classes.len() <= g.max_degree() + 1);
        let ts = TessellationSet::new(
            classes
                .iter()
                .map(|c| Tessellation::from_matching(g.node_count(), c))
                .collect(),
        );
        ts.validate(&g).unwrap();
    }

    #[test]
    fn validation_is_stable_under_reordering() {
        let g = path(5);
        let mut elems = vec![Element::Pair(0, 1), Element::Pair(2, 3), Element::Single(4)];
        elems.reverse();
        assert_eq!(validate_tessellation(&g, &Tessellation::new(elems)), Ok(()));
    }

    #[test]
    fn element_json_forms() {
        let e: Element = serde_json::from_str("[3]").unwrap();
        assert_eq!(e, Element::Single(3));
        let e: Element = serde_json::from_str("[1,2]").unwrap();
        assert_eq!(e, Element::Pair(1, 2));
        assert!(serde_json::from_str::<Element>("[1,2,3]").is_err());
        assert_eq!(serde_json::to_string(&Element::Pair(4, 5)).unwrap(), "[4,5]");
    }
}
