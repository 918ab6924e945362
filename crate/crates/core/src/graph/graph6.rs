//! graph6 output: `N(n)` followed by the upper triangle of the adjacency
//! matrix in column order (`x(0,1), x(0,2), x(1,2), x(0,3), ...`), packed
//! big-endian into 6-bit groups, each offset by 63, newline-terminated.

use std::io::Write;

use super::{DenseAdjacency, GraphError, IntegralGraph, VertexId};

/// Largest order with a graph6 size header we emit (the 4-byte form).
pub const GRAPH6_MAX_ORDER: usize = 258_047;

pub trait Adjacency {
    fn order(&self) -> usize;
    fn has_edge(&self, i: usize, j: usize) -> bool;
}

impl Adjacency for DenseAdjacency {
    fn order(&self) -> usize {
        DenseAdjacency::order(self)
    }

    fn has_edge(&self, i: usize, j: usize) -> bool {
        DenseAdjacency::has_edge(self, i, j)
    }
}

impl Adjacency for IntegralGraph<'_> {
    fn order(&self) -> usize {
        IntegralGraph::order(self)
    }

    fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adjacent_unchecked(VertexId(i as u32), VertexId(j as u32))
    }
}

fn size_header(n: usize) -> Result<Vec<u8>, GraphError> {
    match n {
        0..=62 => Ok(vec![n as u8 + 63]),
        63..=GRAPH6_MAX_ORDER => Ok(vec![
            126,
            (n >> 12 & 63) as u8 + 63,
            (n >> 6 & 63) as u8 + 63,
            (n & 63) as u8 + 63,
        ]),
        _ => Err(GraphError::SizeBoundExceeded {
            vertices: n as u128,
            bound: GRAPH6_MAX_ORDER as u64,
        }),
    }
}

pub fn write_graph6<A: Adjacency + ?Sized, W: Write>(
    graph: &A,
    out: &mut W,
) -> Result<(), GraphError> {
    let n = graph.order();
    let mut bytes = size_header(n)?;
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = acc << 1 | graph.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                bytes.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        bytes.push((acc << (6 - filled)) + 63);
    }
    bytes.push(b'\n');
    out.write_all(&bytes)?;
    Ok(())
}

/// The graph6 line without its trailing newline.
pub fn graph6_string<A: Adjacency + ?Sized>(graph: &A) -> Result<String, GraphError> {
    let mut buf = Vec::new();
    write_graph6(graph, &mut buf)?;
    buf.pop();
    Ok(String::from_utf8(buf).expect("graph6 is printable ASCII"))
}

pub fn export_graph6<W: Write>(g: &IntegralGraph<'_>, out: &mut W) -> Result<(), GraphError> {
    write_graph6(g, out)
}
