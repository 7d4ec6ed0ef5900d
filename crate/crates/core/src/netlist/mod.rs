//! Network description language: types, parser, validator and printer.
//!
//! A `.qon` file is a list of line-oriented declarations:
//!
//! ```text
//! # comment
//! source s1
//! cavity c1 kappa=[1.0, 2.0] detuning=0.5 chi=0.1-0.2i
//! beamsplitter b1 xi=0.25
//! beamsplitter b2 kappa=[1.0, 3.0]
//! sink d1
//! link s1.out -> c1.m1.in phase=1.5707963267948966
//! ```
//!
//! Cavity ports are `m1..mN` (one per partially reflecting mirror, in
//! `kappa` order), beamsplitter ports are `a` (the κ̃ mirror) and `b`
//! (the κ̄ mirror). Every port carries an `.in` and an `.out` side.

mod diag;
mod lexer;
mod parser;
mod serialize;
mod validate;

pub use diag::{Diagnostic, Entity, Rule, Span};
pub use parser::{parse_netlist, parse_unchecked, SourceMap};
pub use serialize::serialize_netlist;
pub use validate::validate;

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dir {
    In,
    Out,
}

impl Dir {
    pub fn as_str(self) -> &'static str {
        match self {
            Dir::In => "in",
            Dir::Out => "out",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BeamsplitterSide {
    /// Mirror carrying κ̃.
    A,
    /// Mirror carrying κ̄.
    B,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CavityParams {
    pub kappas: Vec<f64>,
    pub detuning: f64,
    /// Squeezing strength; zero for a passive cavity.
    pub chi: Complex64,
}

impl CavityParams {
    pub fn passive(kappas: Vec<f64>, detuning: f64) -> Self {
        CavityParams {
            kappas,
            detuning,
            chi: Complex64::new(0.0, 0.0),
        }
    }

    /// Total decay rate γ = Σκ.
    pub fn gamma(&self) -> f64 {
        self.kappas.iter().sum()
    }

    pub fn is_squeezer(&self) -> bool {
        self.chi.re != 0.0 || self.chi.im != 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BeamsplitterParams {
    Xi(f64),
    Couplings { tilde: f64, bar: f64 },
}

impl BeamsplitterParams {
    /// (κ̃, κ̄); a bare ξ is canonicalized to (1 − ξ, 1 + ξ).
    pub fn couplings(&self) -> (f64, f64) {
        match *self {
            BeamsplitterParams::Xi(xi) => (1.0 - xi, 1.0 + xi),
            BeamsplitterParams::Couplings { tilde, bar } => (tilde, bar),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ComponentKind {
    Source,
    Sink,
    Cavity(CavityParams),
    Beamsplitter(BeamsplitterParams),
}

impl ComponentKind {
    pub fn keyword(&self) -> &'static str {
        match self {
            ComponentKind::Source => "source",
            ComponentKind::Sink => "sink",
            ComponentKind::Cavity(_) => "cavity",
            ComponentKind::Beamsplitter(_) => "beamsplitter",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComponentSpec {
    pub name: String,
    pub kind: ComponentKind,
}

impl ComponentSpec {
    pub fn source(name: impl Into<String>) -> Self {
        ComponentSpec {
            name: name.into(),
            kind: ComponentKind::Source,
        }
    }

    pub fn sink(name: impl Into<String>) -> Self {
        ComponentSpec {
            name: name.into(),
            kind: ComponentKind::Sink,
        }
    }

    pub fn cavity(name: impl Into<String>, kappas: Vec<f64>, detuning: f64) -> Self {
        ComponentSpec {
            name: name.into(),
            kind: ComponentKind::Cavity(CavityParams::passive(kappas, detuning)),
        }
    }

    pub fn squeezer(
        name: impl Into<String>,
        kappas: Vec<f64>,
        detuning: f64,
        chi: Complex64,
    ) -> Self {
        ComponentSpec {
            name: name.into(),
            kind: ComponentKind::Cavity(CavityParams {
                kappas,
                detuning,
                chi,
            }),
        }
    }

    pub fn beamsplitter(name: impl Into<String>, params: BeamsplitterParams) -> Self {
        ComponentSpec {
            name: name.into(),
            kind: ComponentKind::Beamsplitter(params),
        }
    }
}

/// One end of a link, as written: `name.out`, `name.m2.in`, `name.a.out`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PortRef {
    pub component: String,
    /// Middle path segment (`m2`, `a`); absent for sources and sinks.
    pub port: Option<String>,
    pub dir: Dir,
}

impl PortRef {
    pub fn field(component: impl Into<String>, dir: Dir) -> Self {
        PortRef {
            component: component.into(),
            port: None,
            dir,
        }
    }

    pub fn named(component: impl Into<String>, port: impl Into<String>, dir: Dir) -> Self {
        PortRef {
            component: component.into(),
            port: Some(port.into()),
            dir,
        }
    }

    /// Parses `a.b` or `a.b.c` without validating names against a network.
    pub fn parse(text: &str) -> Option<Self> {
        let parts: Vec<&str> = text.split('.').collect();
        let dir = match *parts.last()? {
            "in" => Dir::In,
            "out" => Dir::Out,
            _ => return None,
        };
        match parts.len() {
            2 => Some(PortRef::field(parts[0], dir)),
            3 => Some(PortRef::named(parts[0], parts[1], dir)),
            _ => None,
        }
    }
}

impl std::fmt::Display for PortRef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.port {
            Some(p) => write!(f, "{}.{}.{}", self.component, p, self.dir.as_str()),
            None => write!(f, "{}.{}", self.component, self.dir.as_str()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinkSpec {
    pub from: PortRef,
    pub to: PortRef,
    /// Propagation phase θ in radians.
    pub phase: f64,
}

impl LinkSpec {
    pub fn new(from: PortRef, to: PortRef) -> Self {
        LinkSpec {
            from,
            to,
            phase: 0.0,
        }
    }

    pub fn with_phase(mut self, phase: f64) -> Self {
        self.phase = phase;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct NetworkSpec {
    pub components: Vec<ComponentSpec>,
    pub links: Vec<LinkSpec>,
}

impl NetworkSpec {
    pub fn new(components: Vec<ComponentSpec>, links: Vec<LinkSpec>) -> Self {
        NetworkSpec { components, links }
    }

    pub fn sources(&self) -> impl Iterator<Item = &ComponentSpec> {
        self.components
            .iter()
            .filter(|c| matches!(c.kind, ComponentKind::Source))
    }

    pub fn sinks(&self) -> impl Iterator<Item = &ComponentSpec> {
        self.components
            .iter()
            .filter(|c| matches!(c.kind, ComponentKind::Sink))
    }

    pub fn cavities(&self) -> impl Iterator<Item = (&ComponentSpec, &CavityParams)> {
        self.components.iter().filter_map(|c| match &c.kind {
            ComponentKind::Cavity(p) => Some((c, p)),
            _ => None,
        })
    }

    pub fn beamsplitters(&self) -> impl Iterator<Item = (&ComponentSpec, &BeamsplitterParams)> {
        self.components.iter().filter_map(|c| match &c.kind {
            ComponentKind::Beamsplitter(p) => Some((c, p)),
            _ => None,
        })
    }

    /// Number of sources, m.
    pub fn source_count(&self) -> usize {
        self.sources().count()
    }

    pub fn sink_count(&self) -> usize {
        self.sinks().count()
    }

    /// Number of cavities, n.
    pub fn cavity_count(&self) -> usize {
        self.cavities().count()
    }

    /// Total number of cavity mirrors, n_m.
    pub fn cavity_mirror_count(&self) -> usize {
        self.cavities().map(|(_, p)| p.kappas.len()).sum()
    }

    /// Number of beamsplitters, k.
    pub fn beamsplitter_count(&self) -> usize {
        self.beamsplitters().count()
    }

    pub fn has_squeezers(&self) -> bool {
        self.cavities().any(|(_, p)| p.is_squeezer())
    }

    pub fn component(&self, name: &str) -> Option<&ComponentSpec> {
        self.components.iter().find(|c| c.name == name)
    }
}

/// A port reference resolved against a network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Terminal {
    /// The single port of a source or sink.
    Field,
    /// Cavity mirror, 0-based in `kappa` order.
    Mirror(usize),
    Side(BeamsplitterSide),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ResolvedPort {
    pub component: usize,
    pub terminal: Terminal,
    pub dir: Dir,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PortError {
    UnknownComponent(String),
    NoSuchPort(String),
}

impl NetworkSpec {
    /// Finds the component and terminal a [`PortRef`] names. Direction is
    /// not checked against the link role here.
    pub fn resolve(&self, port: &PortRef) -> Result<ResolvedPort, PortError> {
        let (index, comp) = self
            .components
            .iter()
            .enumerate()
            .find(|(_, c)| c.name == port.component)
            .ok_or_else(|| PortError::UnknownComponent(port.component.clone()))?;
        let missing = || PortError::NoSuchPort(port.to_string());
        let terminal = match (&comp.kind, port.port.as_deref(), port.dir) {
            (ComponentKind::Source, None, Dir::Out) | (ComponentKind::Sink, None, Dir::In) => {
                Terminal::Field
            }
            (ComponentKind::Cavity(p), Some(name), _) => {
                let idx: usize = name
                    .strip_prefix('m')
                    .filter(|d| !d.starts_with('0'))
                    .and_then(|d| d.parse().ok())
                    .ok_or_else(missing)?;
                if idx == 0 || idx > p.kappas.len() {
                    return Err(missing());
                }
                Terminal::Mirror(idx - 1)
            }
            (ComponentKind::Beamsplitter(_), Some("a"), _) => Terminal::Side(BeamsplitterSide::A),
            (ComponentKind::Beamsplitter(_), Some("b"), _) => Terminal::Side(BeamsplitterSide::B),
            _ => return Err(missing()),
        };
        Ok(ResolvedPort {
            component: index,
            terminal,
            dir: port.dir,
        })
    }

    /// Every port a totally wired network must connect, in declaration order.
    pub fn ports(&self) -> Vec<PortRef> {
        let mut out = Vec::new();
        for c in &self.components {
            match &c.kind {
                ComponentKind::Source => out.push(PortRef::field(&c.name, Dir::Out)),
                ComponentKind::Sink => out.push(PortRef::field(&c.name, Dir::In)),
                ComponentKind::Cavity(p) => {
                    for j in 0..p.kappas.len() {
                        for dir in [Dir::In, Dir::Out] {
                            out.push(PortRef::named(&c.name, format!("m{}", j + 1), dir));
                        }
                    }
                }
                ComponentKind::Beamsplitter(_) => {
                    for side in ["a", "b"] {
                        for dir in [Dir::In, Dir::Out] {
                            out.push(PortRef::named(&c.name, side, dir));
                        }
                    }
                }
            }
        }
        out
    }
}
