//! Mirror digraph: node numbering, phase-weighted adjacency matrix and its
//! 4×4 block partition by node class.
//!
//! Nodes are numbered (1-based in user-facing output, 0-based in code)
//! sources first, then cavity mirrors, then beamsplitter mirrors, then
//! sinks. Within a class, declaration order decides. For beamsplitter `i`
//! the κ̃ mirror sits at offset `i` of the beamsplitter range and the κ̄
//! mirror at offset `i + k`.

use std::fmt::Write;
use std::ops::Range;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::netlist::{
    BeamsplitterSide, ComponentKind, Diagnostic, Entity, NetworkSpec, ResolvedPort, Rule, Terminal,
};
use crate::scalar::{CMatrix, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeClass {
    Source = 0,
    CavityMirror = 1,
    BeamsplitterMirror = 2,
    Sink = 3,
}

impl NodeClass {
    pub const ALL: [NodeClass; 4] = [
        NodeClass::Source,
        NodeClass::CavityMirror,
        NodeClass::BeamsplitterMirror,
        NodeClass::Sink,
    ];

    pub fn label(self) -> &'static str {
        match self {
            NodeClass::Source => "source",
            NodeClass::CavityMirror => "cavity-mirror",
            NodeClass::BeamsplitterMirror => "beamsplitter-mirror",
            NodeClass::Sink => "sink",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub class: NodeClass,
    /// Index of the owning component in the spec.
    pub owner: usize,
    pub owner_name: String,
    pub terminal: Terminal,
}

impl Node {
    /// `s1`, `c1.m2`, `b1.a`.
    pub fn port_name(&self) -> String {
        match self.terminal {
            Terminal::Field => self.owner_name.clone(),
            Terminal::Mirror(j) => format!("{}.m{}", self.owner_name, j + 1),
            Terminal::Side(BeamsplitterSide::A) => format!("{}.a", self.owner_name),
            Terminal::Side(BeamsplitterSide::B) => format!("{}.b", self.owner_name),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeTable {
    pub nodes: Vec<Node>,
    /// Sources m.
    pub sources: usize,
    /// Cavity mirrors n_m.
    pub cavity_mirrors: usize,
    /// Beamsplitters k (owning 2k nodes).
    pub beamsplitters: usize,
}

impl NodeTable {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// 0-based index range of a class.
    pub fn range(&self, class: NodeClass) -> Range<usize> {
        let m = self.sources;
        let nm = self.cavity_mirrors;
        let k2 = 2 * self.beamsplitters;
        match class {
            NodeClass::Source => 0..m,
            NodeClass::CavityMirror => m..m + nm,
            NodeClass::BeamsplitterMirror => m + nm..m + nm + k2,
            NodeClass::Sink => m + nm + k2..2 * m + nm + k2,
        }
    }

    /// Node index of a resolved port (direction is irrelevant).
    pub fn index_of(&self, port: &ResolvedPort) -> Option<usize> {
        self.nodes
            .iter()
            .position(|n| n.owner == port.component && n.terminal == port.terminal)
    }
}

/// Numbers the mirror digraph nodes of a network.
pub fn enumerate_nodes(spec: &NetworkSpec) -> NodeTable {
    let mut sources = Vec::new();
    let mut mirrors = Vec::new();
    let mut bs_a = Vec::new();
    let mut bs_b = Vec::new();
    let mut sinks = Vec::new();
    for (i, c) in spec.components.iter().enumerate() {
        let node = |class, terminal| Node {
            class,
            owner: i,
            owner_name: c.name.clone(),
            terminal,
        };
        match &c.kind {
            ComponentKind::Source => sources.push(node(NodeClass::Source, Terminal::Field)),
            ComponentKind::Sink => sinks.push(node(NodeClass::Sink, Terminal::Field)),
            ComponentKind::Cavity(p) => {
                for j in 0..p.kappas.len() {
                    mirrors.push(node(NodeClass::CavityMirror, Terminal::Mirror(j)));
                }
            }
            ComponentKind::Beamsplitter(_) => {
                bs_a.push(node(
                    NodeClass::BeamsplitterMirror,
                    Terminal::Side(BeamsplitterSide::A),
                ));
                bs_b.push(node(
                    NodeClass::BeamsplitterMirror,
                    Terminal::Side(BeamsplitterSide::B),
                ));
            }
        }
    }
    let table = NodeTable {
        sources: sources.len(),
        cavity_mirrors: mirrors.len(),
        beamsplitters: bs_a.len(),
        nodes: Vec::new(),
    };
    NodeTable {
        nodes: [sources, mirrors, bs_a, bs_b, sinks].concat(),
        ..table
    }
}

/// Phase-weighted adjacency matrix with `a[i][j] = e^{iθ}` for a link from
/// node `i`'s output to node `j`'s input.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjacencyPartition<T: Scalar> {
    pub full: CMatrix<T>,
    pub ranges: [Range<usize>; 4],
}

impl<T: Scalar> AdjacencyPartition<T> {
    /// Block `A_{rc}` for node classes `r` (row) and `c` (column).
    pub fn block(&self, row: NodeClass, col: NodeClass) -> CMatrix<T> {
        let r = &self.ranges[row as usize];
        let c = &self.ranges[col as usize];
        self.full
            .view((r.start, c.start), (r.len(), c.len()))
            .into_owned()
    }

    /// Block by the 1-based class numbers used in the literature: `a(2, 3)` is A₂₃.
    pub fn a(&self, row: usize, col: usize) -> CMatrix<T> {
        self.block(NodeClass::ALL[row - 1], NodeClass::ALL[col - 1])
    }

    /// Transposed block `A_{rc}ᵀ` (plain transpose, phases unchanged).
    pub fn at(&self, row: usize, col: usize) -> CMatrix<T> {
        self.a(row, col).transpose()
    }

    pub fn edge_count(&self) -> usize {
        self.full.iter().filter(|z| !z.is_zero_complex()).count()
    }
}

trait IsZero {
    fn is_zero_complex(&self) -> bool;
}

impl<T: Scalar> IsZero for Complex<T> {
    fn is_zero_complex(&self) -> bool {
        self.re == T::zero() && self.im == T::zero()
    }
}

/// Assembles the adjacency matrix. Fails with diagnostics if a link cannot
/// be resolved; run [`crate::netlist::validate`] first for full checking.
pub fn build_adjacency<T: Scalar>(
    spec: &NetworkSpec,
    table: &NodeTable,
) -> Result<AdjacencyPartition<T>> {
    let n = table.len();
    let mut full = CMatrix::<T>::zeros(n, n);
    let mut diags = Vec::new();
    for (li, link) in spec.links.iter().enumerate() {
        let ends = spec
            .resolve(&link.from)
            .ok()
            .and_then(|p| table.index_of(&p))
            .zip(spec.resolve(&link.to).ok().and_then(|p| table.index_of(&p)));
        match ends {
            Some((i, j)) => {
                let theta = T::lit(link.phase);
                full[(i, j)] = Complex::new(theta.cos(), theta.sin());
            }
            None => diags.push(Diagnostic::new(
                Rule::DanglingPort,
                Entity::Link(li),
                format!("cannot resolve link {} -> {}", link.from, link.to),
            )),
        }
    }
    if !diags.is_empty() {
        return Err(Error::Invalid(diags));
    }
    Ok(AdjacencyPartition {
        full,
        ranges: NodeClass::ALL.map(|c| table.range(c)),
    })
}

/// Graphviz rendering of the mirror digraph.
pub fn to_dot<T: Scalar>(table: &NodeTable, adj: &AdjacencyPartition<T>) -> String {
    let mut out = String::from("digraph mirror {\n  rankdir=LR;\n");
    for (i, node) in table.nodes.iter().enumerate() {
        writeln!(
            out,
            "  n{} [label=\"{}: {} {}\"];",
            i + 1,
            i + 1,
            node.class.label(),
            node.port_name()
        )
        .unwrap();
    }
    let n = table.len();
    for i in 0..n {
        for j in 0..n {
            let z = adj.full[(i, j)];
            if z.is_zero_complex() {
                continue;
            }
            let theta = z.im.as_f64().atan2(z.re.as_f64());
            if theta == 0.0 {
                writeln!(out, "  n{} -> n{};", i + 1, j + 1).unwrap();
            } else {
                writeln!(
                    out,
                    "  n{} -> n{} [label=\"θ={:.4}\"];",
                    i + 1,
                    j + 1,
                    theta
                )
                .unwrap();
            }
        }
    }
    out.push_str("}\n");
    out
}
