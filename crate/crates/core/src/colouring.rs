//! Total edge colourings of a host graph and the per-colour subgraphs.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use crate::graph::{Graph, GraphError};

/// Total map from the edges of a host graph to colours 0..r.
#[derive(Debug, Clone)]
pub struct EdgeColouring {
    n: usize,
    r: usize,
    map: HashMap<(usize, usize), usize>,
}

impl EdgeColouring {
    /// Builds a colouring, checking totality against the host's edge set.
    pub fn new(
        host: &Graph,
        r: usize,
        assignments: &[(usize, usize, usize)],
    ) -> Result<Self, GraphError> {
        let mut map = HashMap::with_capacity(assignments.len());
        for &(u, v, c) in assignments {
            if !host.has_edge(u, v) {
                return Err(GraphError::Parse(format!("coloured non-edge {u}-{v}")));
            }
            if c >= r {
                return Err(GraphError::Parse(format!("colour {c} out of range (r = {r})")));
            }
            map.insert(key(u, v), c);
        }
        if map.len() != host.edge_count() {
            return Err(GraphError::Parse(format!(
                "colouring covers {} of {} edges",
                map.len(),
                host.edge_count()
            )));
        }
        Ok(EdgeColouring { n: host.n(), r, map })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn colour(&self, u: usize, v: usize) -> Option<usize> {
        self.map.get(&key(u, v)).copied()
    }

    /// One spanning subgraph per colour; the subgraphs are edge-disjoint.
    pub fn colour_subgraphs(&self) -> Vec<Graph> {
        let mut buckets: Vec<Vec<(usize, usize)>> = vec![Vec::new(); self.r];
        for (&(u, v), &c) in &self.map {
            buckets[c].push((u, v));
        }
        buckets
            .into_iter()
            .map(|edges| Graph::from_edges(self.n, &edges).expect("edges come from a graph"))
            .collect()
    }

    /// Text format: header `n m r`, then `u v c` per edge.
    pub fn write<W: Write>(&self, mut out: W) -> Result<(), GraphError> {
        writeln!(out, "{} {} {}", self.n, self.map.len(), self.r)?;
        let mut entries: Vec<_> = self.map.iter().collect();
        entries.sort();
        for (&(u, v), &c) in entries {
            writeln!(out, "{u} {v} {c}")?;
        }
        Ok(())
    }

    pub fn read<R: BufRead>(host: &Graph, reader: R) -> Result<Self, GraphError> {
        let mut lines = reader.lines();
        let header = lines
            .next()
            .ok_or_else(|| GraphError::Parse("missing colouring header".into()))??;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(GraphError::Parse("colouring header needs `n m r`".into()));
        }
        let r: usize = fields[2]
            .parse()
            .map_err(|e| GraphError::Parse(format!("bad r: {e}")))?;
        let mut assignments = Vec::new();
        for line in lines {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(GraphError::Parse(format!("bad colouring line: {line}")));
            }
            let u = parts[0].parse().map_err(|e| GraphError::Parse(format!("{e}")))?;
            let v = parts[1].parse().map_err(|e| GraphError::Parse(format!("{e}")))?;
            let c = parts[2].parse().map_err(|e| GraphError::Parse(format!("{e}")))?;
            assignments.push((u, v, c));
        }
        EdgeColouring::new(host, r, &assignments)
    }
}

fn key(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn totality_enforced() {
        let g = Graph::path(3);
        assert!(EdgeColouring::new(&g, 2, &[(0, 1, 0)]).is_err());
        let c = EdgeColouring::new(&g, 2, &[(0, 1, 0), (1, 2, 1)]).unwrap();
        assert_eq!(c.colour(1, 0), Some(0));
        assert_eq!(c.colour(2, 1), Some(1));
        let subs = c.colour_subgraphs();
        assert_eq!(subs[0].edge_count(), 1);
        assert_eq!(subs[1].edge_count(), 1);
    }

    #[test]
    fn io_round_trip() {
        let g = Graph::cycle(4);
        let c = EdgeColouring::new(&g, 3, &[(0, 1, 2), (1, 2, 0), (2, 3, 1), (3, 0, 0)]).unwrap();
        let mut buf = Vec::new();
        c.write(&mut buf).unwrap();
        let back = EdgeColouring::read(&g, &buf[..]).unwrap();
        assert_eq!(back.colour(0, 1), Some(2));
        assert_eq!(back.r(), 3);
    }
}
