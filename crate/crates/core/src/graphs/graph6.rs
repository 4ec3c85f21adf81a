//! graph6 short form (`n < 63`).
//!
//! A record is one header byte `63 + n` followed by `ceil(n(n-1)/2 / 6)`
//! payload bytes. The payload is the upper triangle taken column by column,
//! (0,1), (0,2), (1,2), (0,3), ..., packed six bits per byte, most
//! significant bit first, each byte offset by 63.

use std::io::BufRead;

use super::Graph;
use crate::error::{Error, Result};

const OFFSET: u8 = 63;
const MAX_SHORT: usize = 62;

fn parse_err(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        offset,
        message: message.into(),
    }
}

/// Decodes a single graph6 record. A trailing `\n` or `\r\n` is accepted.
pub fn parse_graph6(line: &str) -> Result<Graph> {
    let line = line.strip_suffix('\n').unwrap_or(line);
    let line = line.strip_suffix('\r').unwrap_or(line);
    let bytes = line.as_bytes();
    let Some(&header) = bytes.first() else {
        return Err(parse_err(0, "empty record"));
    };
    if !(OFFSET..=126).contains(&header) {
        return Err(parse_err(0, format!("header byte {header} outside 63..=126")));
    }
    let n = (header - OFFSET) as usize;
    if n > MAX_SHORT {
        return Err(parse_err(0, "long-form graph6 (n >= 63) is not supported"));
    }
    let pairs = n * n.saturating_sub(1) / 2;
    let payload_len = pairs.div_ceil(6);
    let payload = &bytes[1..];
    if payload.len() < payload_len {
        return Err(parse_err(
            bytes.len(),
            format!(
                "expected {payload_len} payload bytes for n = {n}, found {}",
                payload.len()
            ),
        ));
    }
    if payload.len() > payload_len {
        return Err(parse_err(1 + payload_len, "trailing bytes after record"));
    }
    for (i, &b) in payload.iter().enumerate() {
        if !(OFFSET..=126).contains(&b) {
            return Err(parse_err(1 + i, format!("payload byte {b} outside 63..=126")));
        }
    }

    let mut g = Graph::empty(n);
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = payload[k / 6] - OFFSET;
            if byte >> (5 - k % 6) & 1 == 1 {
                g.add_edge(i, j);
            }
            k += 1;
        }
    }
    Ok(g)
}

/// Encodes a graph as a graph6 record (no trailing newline).
///
/// Panics if `g.n() > 62`.
pub fn to_graph6(g: &Graph) -> String {
    let n = g.n();
    assert!(n <= MAX_SHORT, "graph6 short form holds at most {MAX_SHORT} vertices");
    let pairs = n * n.saturating_sub(1) / 2;
    let mut out = vec![OFFSET + n as u8];
    let mut payload = vec![0u8; pairs.div_ceil(6)];
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if g.has_edge(i, j) {
                payload[k / 6] |= 1 << (5 - k % 6);
            }
            k += 1;
        }
    }
    out.extend(payload.into_iter().map(|b| b + OFFSET));
    String::from_utf8(out).expect("graph6 bytes are ASCII")
}

/// Streams graph6 records from a reader, one per line. Blank lines and an
/// optional `>>graph6<<` prefix on the first record are skipped.
pub fn read_graph6<R: BufRead>(reader: R) -> impl Iterator<Item = Result<Graph>> {
    reader.lines().enumerate().filter_map(|(lineno, line)| {
        let line = match line {
            Ok(l) => l,
            Err(e) => return Some(Err(Error::Input(format!("line {}: {e}", lineno + 1)))),
        };
        let rec = if lineno == 0 {
            line.strip_prefix(">>graph6<<").unwrap_or(&line)
        } else {
            &line
        };
        let rec = rec.trim_end();
        if rec.is_empty() {
            return None;
        }
        Some(parse_graph6(rec).map_err(|e| match e {
            Error::Parse { offset, message } => Error::Parse {
                offset,
                message: format!("line {}: {message}", lineno + 1),
            },
            other => other,
        }))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn decodes_hand_examples() {
        let k2 = parse_graph6("A_").unwrap();
        assert_eq!(k2.n(), 2);
        assert!(k2.has_edge(0, 1));

        let single = parse_graph6("@").unwrap();
        assert_eq!((single.n(), single.edge_count()), (1, 0));

        let k3 = parse_graph6("Bw\n").unwrap();
        assert_eq!(k3.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 2), (1, 2)]);

        assert_eq!(parse_graph6("?").unwrap().n(), 0);
    }

    #[test]
    fn rejects_malformed_records() {
        assert!(matches!(parse_graph6(""), Err(Error::Parse { offset: 0, .. })));
        assert!(matches!(parse_graph6("B"), Err(Error::Parse { offset: 1, .. })));
        assert!(matches!(parse_graph6("Bww"), Err(Error::Parse { offset: 2, .. })));
        assert!(matches!(parse_graph6("B "), Err(Error::Parse { offset: 1, .. })));
        assert!(matches!(parse_graph6("~"), Err(Error::Parse { offset: 0, .. })));
        assert!(matches!(parse_graph6(" "), Err(Error::Parse { offset: 0, .. })));
    }

    #[test]
    fn known_encodings() {
        // Path on four vertices: pairs (0,1),(0,2),(1,2),(0,3),(1,3),(2,3) -> 101001.
        let p4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(to_graph6(&p4), "Ch");
        // Matches the five-vertex example produced by petgraph.
        let g = Graph::from_edges(5, &[(0, 2), (0, 4), (1, 3), (3, 4)]).unwrap();
        assert_eq!(to_graph6(&g), "DQc");
    }

    #[test]
    fn stream_reader() {
        let text = ">>graph6<<A_\n\nBw\r\n@\n";
        let gs: Vec<_> = read_graph6(text.as_bytes()).collect::<Result<_>>().unwrap();
        assert_eq!(gs.len(), 3);
        assert_eq!(gs[1].edge_count(), 3);
        let bad: Vec<_> = read_graph6("A_\nBx?\n".as_bytes()).collect();
        assert!(bad[1].is_err());
    }

    proptest! {
        #[test]
        fn round_trip(n in 0usize..=7, bits in any::<u64>()) {
            let g = Graph::from_upper_bits(n, bits);
            prop_assert_eq!(parse_graph6(&to_graph6(&g)).unwrap(), g);
        }
    }
}
