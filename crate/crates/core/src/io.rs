//! JSON graph files: `{"nodes": n, "edges": [[i, j], ...], "tessellations": [...]}`.
//!
//! `tessellations` is optional; each tessellation is a list of `[i]` or
//! `[i, j]` elements. Everything is validated on read.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, TessellationSet};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    nodes: usize,
    edges: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tessellations: Option<TessellationSet>,
}

/// A graph read from disk, with its tessellations when the file supplies them.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedGraph {
    pub graph: Graph,
    pub tessellations: Option<TessellationSet>,
}

pub fn parse_graph_json(text: &str) -> Result<LoadedGraph> {
    let file: GraphFile = serde_json::from_str(text).map_err(|e| Error::from_json(e, text))?;
    let graph = Graph::new(file.nodes, &file.edges)?;
    if let Some(ts) = &file.tessellations {
        ts.validate(&graph)?;
    }
    Ok(LoadedGraph {
        graph,
        tessellations: file.tessellations,
    })
}

pub fn graph_to_json(graph: &Graph, tessellations: Option<&TessellationSet>) -> String {
    let file = GraphFile {
        nodes: graph.node_count(),
        edges: graph.edges().to_vec(),
        tessellations: tessellations.cloned(),
    };
    serde_json::to_string(&file).expect("graph serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate_lattice_tessellations;

    #[test]
    fn reads_graph_without_tessellations() {
        let loaded = parse_graph_json(r#"{"nodes": 3, "edges": [[0,1],[2,1]]}"#).unwrap();
        assert_eq!(loaded.graph.edges(), &[(0, 1), (1, 2)]);
        assert!(loaded.tessellations.is_none());
    }

    #[test]
    fn reads_and_validates_tessellations() {
        let text = r#"{"nodes": 3, "edges": [[0,1],[1,2]],
                       "tessellations": [[[0,1],[2]], [[0],[1,2]]]}"#;
        let loaded = parse_graph_json(text).unwrap();
        assert_eq!(loaded.tessellations.unwrap().len(), 2);

        let uncovered = r#"{"nodes": 3, "edges": [[0,1],[1,2]], "tessellations": [[[0,1],[2]]]}"#;
        assert!(matches!(parse_graph_json(uncovered), Err(Error::UncoveredEdges { .. })));

        let bad = r#"{"nodes": 3, "edges": [[0,1],[1,2]], "tessellations": [[[0,2],[1]]]}"#;
        assert!(matches!(parse_graph_json(bad), Err(Error::InvalidTessellation { .. })));
    }

    #[test]
    fn rejects_bad_graphs() {
        assert!(matches!(
            parse_graph_json(r#"{"nodes": 2, "edges": [[0,0]]}"#),
            Err(Error::SelfLoop { .. })
        ));
        assert!(matches!(
            parse_graph_json(r#"{"nodes": 2, "edges": [[0,"#),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn writes_what_it_reads() {
        let (g, ts) = generate_lattice_tessellations(&[2, 3]).unwrap();
        let loaded = parse_graph_json(&graph_to_json(&g, Some(&ts))).unwrap();
        assert_eq!(loaded.graph, g);
        assert_eq!(loaded.tessellations, Some(ts));
    }
}
