//! Readers and writers for the line-oriented LG format and SNAP edge lists.
//!
//! LG:
//! ```text
//! t # name          (optional header)
//! v <id> <label>
//! e <src> <dst> [label]
//! ```
//! All `v` lines precede all `e` lines; `#` starts a comment elsewhere.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{DataGraph, DataGraphBuilder, GraphError, Label, LabelTable, PatternGraph};

const DEFAULT_EDGE_LABEL: &str = "0";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Directedness {
    #[default]
    Directed,
    /// Each input edge becomes two opposite directed edges with one label.
    Undirected,
}

impl Directedness {
    pub fn from_flag(undirected: bool) -> Self {
        if undirected {
            Directedness::Undirected
        } else {
            Directedness::Directed
        }
    }

    fn is_undirected(self) -> bool {
        self == Directedness::Undirected
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum GraphFormat {
    #[default]
    Lg,
    Snap,
}

impl FromStr for GraphFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lg" => Ok(GraphFormat::Lg),
            "snap" => Ok(GraphFormat::Snap),
            other => Err(format!("unknown graph format {other:?} (expected lg or snap)")),
        }
    }
}

/// Label assignment for SNAP edge lists, which carry no labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SnapOptions {
    pub vertex_labels: usize,
    pub edge_labels: usize,
    pub seed: u64,
    pub directedness: Directedness,
}

impl Default for SnapOptions {
    fn default() -> Self {
        Self {
            vertex_labels: 1,
            edge_labels: 1,
            seed: 0,
            directedness: Directedness::Directed,
        }
    }
}

enum Record<'a> {
    Header,
    Vertex { id: u64, label: &'a str },
    Edge { src: u64, dst: u64, label: &'a str },
}

fn parse_int(token: &str, line: usize) -> Result<u64, GraphError> {
    token.parse().map_err(|_| GraphError::InvalidToken {
        line,
        token: token.to_owned(),
    })
}

fn parse_record(raw: &str, line: usize) -> Result<Option<Record<'_>>, GraphError> {
    let trimmed = raw.trim();
    if trimmed == "t" || (trimmed.starts_with('t') && trimmed[1..].starts_with(|c: char| c.is_whitespace() || c == '#'))
    {
        return Ok(Some(Record::Header));
    }
    let content = trimmed.split('#').next().unwrap_or("").trim();
    if content.is_empty() {
        return Ok(None);
    }
    let tokens: Vec<&str> = content.split_whitespace().collect();
    let malformed = |message: &str| GraphError::Malformed {
        line,
        message: message.to_owned(),
    };
    match tokens[0] {
        "v" => {
            if tokens.len() != 3 {
                return Err(malformed("expected `v <id> <label>`"));
            }
            Ok(Some(Record::Vertex {
                id: parse_int(tokens[1], line)?,
                label: tokens[2],
            }))
        }
        "e" => {
            if tokens.len() != 3 && tokens.len() != 4 {
                return Err(malformed("expected `e <src> <dst> [label]`"));
            }
            Ok(Some(Record::Edge {
                src: parse_int(tokens[1], line)?,
                dst: parse_int(tokens[2], line)?,
                label: tokens.get(3).copied().unwrap_or(DEFAULT_EDGE_LABEL),
            }))
        }
        other => Err(malformed(&format!("unknown record type {other:?}"))),
    }
}

/// Incremental reader shared by the data-graph and pattern parsers.
struct LgBlock {
    builder: DataGraphBuilder,
    ids: HashMap<u64, u32>,
    seen_edge: bool,
    directedness: Directedness,
}

impl LgBlock {
    fn new(vertex_table: LabelTable, edge_table: LabelTable, directedness: Directedness) -> Self {
        Self {
            builder: DataGraphBuilder::with_tables(vertex_table, edge_table).undirected(directedness.is_undirected()),
            ids: HashMap::new(),
            seen_edge: false,
            directedness,
        }
    }

    fn add_vertex(&mut self, id: u64, label: &str, line: usize) -> Result<(), GraphError> {
        if self.seen_edge {
            return Err(GraphError::Malformed {
                line,
                message: "vertex declared after an edge".into(),
            });
        }
        if self.ids.contains_key(&id) {
            return Err(GraphError::DuplicateVertex { line, id });
        }
        let label = self.builder.vertex_label_table_mut().intern(label)?;
        let dense = self.builder.add_vertex(label, id);
        self.ids.insert(id, dense);
        Ok(())
    }

    fn add_edge(&mut self, src: u64, dst: u64, label: &str, line: usize) -> Result<(), GraphError> {
        self.seen_edge = true;
        let lookup = |id| {
            self.ids
                .get(&id)
                .copied()
                .ok_or(GraphError::UndeclaredVertex { line, id })
        };
        let (s, d) = (lookup(src)?, lookup(dst)?);
        if s == d {
            return Err(GraphError::Malformed {
                line,
                message: format!("self-loop on vertex {src}"),
            });
        }
        let duplicate =
            self.builder.contains_edge(s, d) || (self.directedness.is_undirected() && self.builder.contains_edge(d, s));
        if duplicate {
            return Err(GraphError::DuplicateEdge { line, src, dst });
        }
        let label = self.builder.edge_label_table_mut().intern(label)?;
        self.builder.add_edge(s, d, label);
        Ok(())
    }
}

/// Parses a single LG graph.
pub fn parse_lg(reader: impl BufRead, directedness: Directedness) -> Result<DataGraph, GraphError> {
    let mut block = LgBlock::new(LabelTable::new(), LabelTable::new(), directedness);
    let mut headers = 0;
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        match parse_record(&line, line_no)? {
            None => {}
            Some(Record::Header) => {
                headers += 1;
                if headers > 1 || block.builder.vertex_count() > 0 {
                    return Err(GraphError::Malformed {
                        line: line_no,
                        message: "more than one graph in file".into(),
                    });
                }
            }
            Some(Record::Vertex { id, label }) => block.add_vertex(id, label, line_no)?,
            Some(Record::Edge { src, dst, label }) => block.add_edge(src, dst, label, line_no)?,
        }
    }
    Ok(block.builder.build())
}

/// Parses one or more LG patterns separated by `t` headers, resolving label
/// tokens against the given tables. Tokens missing from the tables receive
/// fresh ids, so they match nothing in a data graph built from those tables.
pub fn parse_lg_patterns(
    reader: impl BufRead,
    vertex_table: &mut LabelTable,
    edge_table: &mut LabelTable,
    directedness: Directedness,
) -> Result<Vec<PatternGraph>, GraphError> {
    let mut patterns = Vec::new();
    let mut current: Option<LgBlock> = None;

    let mut finish = |block: LgBlock, vt: &mut LabelTable, et: &mut LabelTable| {
        let graph = block.builder.build();
        *vt = graph.vertex_label_table().clone();
        *et = graph.edge_label_table().clone();
        if graph.vertex_count() > 0 {
            let ids: Vec<u32> = (0..graph.vertex_count() as u32).collect();
            patterns.push(graph.induced_pattern(&ids).expect("dense ids"));
        }
    };

    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        match parse_record(&line, line_no)? {
            None => {}
            Some(Record::Header) => {
                if let Some(block) = current.take() {
                    finish(block, vertex_table, edge_table);
                }
            }
            Some(record) => {
                let block =
                    current.get_or_insert_with(|| LgBlock::new(vertex_table.clone(), edge_table.clone(), directedness));
                match record {
                    Record::Vertex { id, label } => block.add_vertex(id, label, line_no)?,
                    Record::Edge { src, dst, label } => block.add_edge(src, dst, label, line_no)?,
                    Record::Header => unreachable!(),
                }
            }
        }
    }
    if let Some(block) = current.take() {
        finish(block, vertex_table, edge_table);
    }
    Ok(patterns)
}

/// Serializes with dense ids. Undirected graphs emit each vertex pair once.
pub fn serialize_lg(g: &DataGraph) -> String {
    let mut out = String::from("t # 0\n");
    let vtable = g.vertex_label_table();
    let etable = g.edge_label_table();
    for v in 0..g.vertex_count() as u32 {
        let label = g.label(v);
        let token = vtable
            .token(label)
            .map(str::to_owned)
            .unwrap_or_else(|| label.to_string());
        writeln!(out, "v {v} {token}").unwrap();
    }
    for (u, v, label) in g.edges() {
        if g.is_undirected() && u > v {
            continue;
        }
        let token = etable
            .token(label)
            .map(str::to_owned)
            .unwrap_or_else(|| label.to_string());
        writeln!(out, "e {u} {v} {token}").unwrap();
    }
    out
}

/// Writes patterns as consecutive LG blocks, one `t # i` header each.
pub fn write_patterns_lg(patterns: &[PatternGraph], vertex_table: &LabelTable, edge_table: &LabelTable) -> String {
    let mut out = String::new();
    for (i, p) in patterns.iter().enumerate() {
        writeln!(out, "t # {i}").unwrap();
        for (v, &label) in p.labels().iter().enumerate() {
            let token = vertex_table
                .token(label)
                .map(str::to_owned)
                .unwrap_or_else(|| label.to_string());
            writeln!(out, "v {v} {token}").unwrap();
        }
        for (u, v, label) in p.edges() {
            let token = edge_table
                .token(label)
                .map(str::to_owned)
                .unwrap_or_else(|| label.to_string());
            writeln!(out, "e {u} {v} {token}").unwrap();
        }
    }
    out
}

/// Parses a SNAP edge list and assigns labels from a seeded generator.
///
/// Vertices are renumbered densely in first-appearance order. Vertex labels
/// are drawn first (in dense order), then one label per kept edge.
pub fn parse_snap_edges(reader: impl BufRead, options: SnapOptions) -> Result<DataGraph, GraphError> {
    if options.vertex_labels == 0 || options.edge_labels == 0 {
        return Err(GraphError::InvalidLabelCount);
    }
    let mut ids: HashMap<u64, u32> = HashMap::new();
    let mut originals = Vec::new();
    let mut pairs = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.len() < 2 {
            return Err(GraphError::Malformed {
                line: line_no,
                message: "expected `src dst`".into(),
            });
        }
        let mut dense = |raw: u64| {
            *ids.entry(raw).or_insert_with(|| {
                originals.push(raw);
                (originals.len() - 1) as u32
            })
        };
        let src = parse_int(tokens[0], line_no)?;
        let dst = parse_int(tokens[1], line_no)?;
        pairs.push((dense(src), dense(dst)));
    }
    if pairs.is_empty() {
        return Err(GraphError::EmptyEdgeSet);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut builder = DataGraphBuilder::with_tables(
        LabelTable::numeric(options.vertex_labels),
        LabelTable::numeric(options.edge_labels),
    )
    .undirected(options.directedness.is_undirected());
    for &raw in &originals {
        let label = Label(rng.gen_range(0..options.vertex_labels) as u16);
        builder.add_vertex(label, raw);
    }
    for (src, dst) in pairs {
        let duplicate = src == dst
            || builder.contains_edge(src, dst)
            || (options.directedness.is_undirected() && builder.contains_edge(dst, src));
        if duplicate {
            builder.add_edge(src, dst, Label(0));
            continue;
        }
        let label = Label(rng.gen_range(0..options.edge_labels) as u16);
        builder.add_edge(src, dst, label);
    }
    Ok(builder.build())
}

/// Opens and parses a graph file in the given format.
pub fn read_graph_file(path: &Path, format: GraphFormat, snap: SnapOptions) -> Result<DataGraph, GraphError> {
    let reader = BufReader::new(File::open(path)?);
    match format {
        GraphFormat::Lg => parse_lg(reader, snap.directedness),
        GraphFormat::Snap => parse_snap_edges(reader, snap),
    }
}
