//! Standalone embedding verifier. Deliberately shares no code with the
//! embedder's own checks: raw edge lists, plain hash sets, its own parsing.

use std::collections::{HashMap, HashSet};
use std::io::BufRead;

/// Checks that `embedding` maps the pattern injectively into the host with
/// every pattern edge landing on a host edge of the given colour.
pub fn independent_verify(
    pattern_n: usize,
    pattern_edges: &[(usize, usize)],
    coloured_host_edges: &[(usize, usize, usize)],
    embedding: &[(usize, usize)],
    colour: usize,
) -> Result<(), String> {
    let mut map = HashMap::new();
    let mut hit = HashSet::new();
    for &(pv, hv) in embedding {
        if pv >= pattern_n {
            return Err(format!("pattern vertex {pv} out of range"));
        }
        if map.insert(pv, hv).is_some() {
            return Err(format!("pattern vertex {pv} mapped twice"));
        }
        if !hit.insert(hv) {
            return Err(format!("host vertex {hv} used twice"));
        }
    }
    if map.len() != pattern_n {
        return Err(format!("embedding covers {} of {pattern_n} vertices", map.len()));
    }
    let wanted: HashSet<(usize, usize)> = coloured_host_edges
        .iter()
        .filter(|&&(_, _, c)| c == colour)
        .map(|&(u, v, _)| (u.min(v), u.max(v)))
        .collect();
    for &(a, b) in pattern_edges {
        let (ha, hb) = (map[&a], map[&b]);
        let key = (ha.min(hb), ha.max(hb));
        if !wanted.contains(&key) {
            return Err(format!(
                "pattern edge {a}-{b} maps to {ha}-{hb}, not a colour-{colour} host edge"
            ));
        }
    }
    Ok(())
}

/// File-based verification: pattern edge list, coloured host edge list and a
/// JSON report with `embedding` and `colour` fields.
pub fn verify_report_files(
    pattern: impl BufRead,
    colouring: impl BufRead,
    report: &serde_json::Value,
) -> Result<(), String> {
    let (pattern_n, pattern_edges) = parse_edge_list(pattern)?;
    let host_edges = parse_coloured_edges(colouring)?;
    let embedding: Vec<(usize, usize)> = report
        .get("embedding")
        .and_then(|e| serde_json::from_value(e.clone()).ok())
        .ok_or("report lacks an embedding array")?;
    let colour = report
        .get("colour")
        .and_then(|c| c.as_u64())
        .ok_or("report lacks a colour")? as usize;
    independent_verify(pattern_n, &pattern_edges, &host_edges, &embedding, colour)
}

fn parse_edge_list(reader: impl BufRead) -> Result<(usize, Vec<(usize, usize)>), String> {
    let mut lines = reader.lines();
    let header = lines.next().ok_or("empty pattern file")?.map_err(|e| e.to_string())?;
    let mut it = header.split_whitespace();
    let n: usize = it.next().ok_or("bad header")?.parse().map_err(|_| "bad n")?;
    let mut edges = Vec::new();
    for line in lines {
        let line = line.map_err(|e| e.to_string())?;
        let line = line.trim();
        if line.is_empty() || line.starts_with("order:") {
            continue;
        }
        let mut it = line.split_whitespace();
        let u: usize = it.next().ok_or("bad edge")?.parse().map_err(|_| "bad edge")?;
        let v: usize = it.next().ok_or("bad edge")?.parse().map_err(|_| "bad edge")?;
        edges.push((u, v));
    }
    Ok((n, edges))
}

fn parse_coloured_edges(reader: impl BufRead) -> Result<Vec<(usize, usize, usize)>, String> {
    let mut lines = reader.lines();
    let _header = lines.next().ok_or("empty colouring file")?.map_err(|e| e.to_string())?;
    let mut edges = Vec::new();
    for line in lines {
        let line = line.map_err(|e| e.to_string())?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(format!("bad colouring line: {line}"));
        }
        let u = parts[0].parse().map_err(|_| "bad endpoint")?;
        let v = parts[1].parse().map_err(|_| "bad endpoint")?;
        let c = parts[2].parse().map_err(|_| "bad colour")?;
        edges.push((u, v, c));
    }
    Ok(edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_valid_embedding() {
        let pattern_edges = vec![(0, 1), (1, 2)];
        let host = vec![(10, 11, 0), (11, 12, 0), (10, 12, 1)];
        let emb = vec![(0, 10), (1, 11), (2, 12)];
        assert!(independent_verify(3, &pattern_edges, &host, &emb, 0).is_ok());
    }

    #[test]
    fn rejects_wrong_colour_and_collisions() {
        let pattern_edges = vec![(0, 1)];
        let host = vec![(10, 11, 1)];
        let emb = vec![(0, 10), (1, 11)];
        assert!(independent_verify(2, &pattern_edges, &host, &emb, 0).is_err());
        let emb = vec![(0, 10), (1, 10)];
        assert!(independent_verify(2, &pattern_edges, &host, &emb, 1).is_err());
        let emb = vec![(0, 10)];
        assert!(independent_verify(2, &pattern_edges, &host, &emb, 1).is_err());
    }
}
