//! Line-oriented text format for maps.
//!
//! ```text
//! # comment
//! map <V> <E>
//! edge <id> <v_a> <v_b> <sign>        # sign is + or -
//! vertex <id>: <dart> <dart> ...       # darts in cyclic order
//! diskface <face-index>                # optional
//! ```

use std::fmt::Write as _;

use super::{Corner, Dart, EmbeddedGraph, Edge, MapError, Sign};

fn syntax(line: usize, message: impl Into<String>) -> MapError {
    MapError::Syntax {
        line,
        message: message.into(),
    }
}

fn parse_usize(tok: Option<&str>, line: usize, what: &str) -> Result<usize, MapError> {
    let tok = tok.ok_or_else(|| syntax(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| syntax(line, format!("invalid {what} `{tok}`")))
}

pub fn parse_map(text: &str) -> Result<EmbeddedGraph, MapError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges: Vec<Option<Edge>> = Vec::new();
    let mut rotations: Vec<Option<Vec<Dart>>> = Vec::new();
    let mut disk_face: Option<(usize, usize)> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut toks = content.split_whitespace();
        let keyword = toks.next().unwrap();
        if keyword != "map" && header.is_none() {
            return Err(syntax(line, "expected `map <V> <E>` header first"));
        }
        match keyword {
            "map" => {
                if header.is_some() {
                    return Err(syntax(line, "duplicate header"));
                }
                let v = parse_usize(toks.next(), line, "vertex count")?;
                let e = parse_usize(toks.next(), line, "edge count")?;
                header = Some((v, e));
                edges = vec![None; e];
                rotations = vec![None; v];
            }
            "edge" => {
                let id = parse_usize(toks.next(), line, "edge id")?;
                let a = parse_usize(toks.next(), line, "endpoint")?;
                let b = parse_usize(toks.next(), line, "endpoint")?;
                let sign = match toks.next() {
                    Some("+") | Some("+1") | Some("1") => Sign::Plus,
                    Some("-") | Some("-1") => Sign::Minus,
                    Some(t) => return Err(syntax(line, format!("invalid sign `{t}`"))),
                    None => return Err(syntax(line, "missing sign")),
                };
                let slot = edges
                    .get_mut(id)
                    .ok_or_else(|| syntax(line, format!("edge id {id} out of range")))?;
                if slot.is_some() {
                    return Err(syntax(line, format!("edge {id} defined twice")));
                }
                *slot = Some(Edge { ends: [a, b], sign });
            }
            "vertex" => {
                let id_tok = toks
                    .next()
                    .ok_or_else(|| syntax(line, "missing vertex id"))?;
                let id_tok = id_tok.strip_suffix(':').unwrap_or(id_tok);
                let id: usize = id_tok
                    .parse()
                    .map_err(|_| syntax(line, format!("invalid vertex id `{id_tok}`")))?;
                let mut darts = Vec::new();
                for tok in toks {
                    if tok == ":" {
                        continue;
                    }
                    darts.push(Dart(tok.parse().map_err(|_| {
                        syntax(line, format!("invalid dart `{tok}`"))
                    })?));
                }
                let slot = rotations
                    .get_mut(id)
                    .ok_or_else(|| syntax(line, format!("vertex id {id} out of range")))?;
                if slot.is_some() {
                    return Err(syntax(line, format!("vertex {id} defined twice")));
                }
                *slot = Some(darts);
            }
            "diskface" => {
                let f = parse_usize(toks.next(), line, "face index")?;
                disk_face = Some((f, line));
            }
            other => return Err(syntax(line, format!("unknown keyword `{other}`"))),
        }
    }

    if header.is_none() {
        return Err(syntax(1, "missing `map <V> <E>` header"));
    }
    let edges = edges
        .into_iter()
        .enumerate()
        .map(|(i, e)| e.ok_or_else(|| MapError::Structure(format!("edge {i} is not defined"))))
        .collect::<Result<Vec<_>, _>>()?;
    let rotations = rotations
        .into_iter()
        .enumerate()
        .map(|(i, r)| {
            r.ok_or_else(|| MapError::Structure(format!("vertex {i} has no rotation line")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let map = EmbeddedGraph::new(edges, rotations, None)?;
    match disk_face {
        None => Ok(map),
        Some((f, _)) => {
            let walks = map.trace_faces();
            let corner: Corner = walks
                .get(f)
                .ok_or(MapError::FaceNotFound(f))?
                .corners[0];
            Ok(map.with_disk(Some(corner)))
        }
    }
}

pub fn write_map(map: &EmbeddedGraph) -> String {
    let mut out = String::new();
    writeln!(out, "map {} {}", map.vertex_count(), map.edge_count()).unwrap();
    for (id, e) in map.edges().iter().enumerate() {
        let sign = if e.sign.is_plus() { '+' } else { '-' };
        writeln!(out, "edge {id} {} {} {sign}", e.ends[0], e.ends[1]).unwrap();
    }
    for (v, rot) in map.rotations().iter().enumerate() {
        let darts: Vec<String> = rot.iter().map(|d| d.0.to_string()).collect();
        writeln!(out, "vertex {v}: {}", darts.join(" ")).unwrap();
    }
    if map.disk_corner().is_some() {
        let table = map.face_table();
        if let Some(f) = map.disk_face(&table) {
            writeln!(out, "diskface {f}").unwrap();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    const TETRA: &str = "\
# tetrahedron
map 4 6
edge 0 0 1 +
edge 1 0 2 +
edge 2 0 3 +
edge 3 1 2 +
edge 4 1 3 +
edge 5 2 3 +
vertex 0: 0 2 4
vertex 1: 1 8 6
vertex 2: 3 7 10
vertex 3: 5 11 9
";

    #[test]
    fn parses_tetrahedron() {
        let map = parse_map(TETRA).unwrap();
        assert_eq!(map.vertex_count(), 4);
        assert_eq!(map.euler_characteristic(), 2);
    }

    #[test]
    fn edge_used_once_is_structural_error() {
        let text = TETRA.replace("vertex 3: 5 11 9", "vertex 3: 5 9");
        assert!(matches!(parse_map(&text), Err(MapError::Structure(_))));
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let text = TETRA.replace("edge 4 1 3 +", "edge 4 1 x +");
        match parse_map(&text) {
            Err(MapError::Syntax { line, .. }) => assert_eq!(line, 7),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_map("vertex 0: 0 1"),
            Err(MapError::Syntax { line: 1, .. })
        ));
    }

    #[test]
    fn write_then_parse_is_identity() {
        for map in [
            catalog::k7_torus(),
            catalog::k6_projective(),
            catalog::single_loop(Sign::Minus),
        ] {
            let back = parse_map(&write_map(&map)).unwrap();
            assert_eq!(back, map.clone().with_disk(None));
        }
    }

    #[test]
    fn disk_face_survives_round_trip() {
        let map = catalog::k7_torus();
        let corner = map.trace_faces()[5].corners[0];
        let map = map.with_disk(Some(corner));
        let back = parse_map(&write_map(&map)).unwrap();
        let table = back.face_table();
        assert_eq!(back.disk_face(&table), Some(5));
    }
}
