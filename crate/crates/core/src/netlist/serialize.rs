use std::fmt::Write;

use super::{BeamsplitterParams, ComponentKind, NetworkSpec};

/// Canonical text form. Floats use Rust's shortest round-trip formatting,
/// so `parse_netlist(&serialize_netlist(&s)) == Ok(s)` for valid `s`.
pub fn serialize_netlist(spec: &NetworkSpec) -> String {
    let mut out = String::new();
    for c in &spec.components {
        match &c.kind {
            ComponentKind::Source | ComponentKind::Sink => {
                writeln!(out, "{} {}", c.kind.keyword(), c.name).unwrap();
            }
            ComponentKind::Cavity(p) => {
                write!(
                    out,
                    "cavity {} kappa=[{}] detuning={:?}",
                    c.name,
                    list(&p.kappas),
                    p.detuning
                )
                .unwrap();
                if p.is_squeezer() {
                    let sign = if p.chi.im.is_sign_negative() {
                        '-'
                    } else {
                        '+'
                    };
                    write!(out, " chi={:?}{}{:?}i", p.chi.re, sign, p.chi.im.abs()).unwrap();
                }
                out.push('\n');
            }
            ComponentKind::Beamsplitter(BeamsplitterParams::Xi(xi)) => {
                writeln!(out, "beamsplitter {} xi={:?}", c.name, xi).unwrap();
            }
            ComponentKind::Beamsplitter(BeamsplitterParams::Couplings { tilde, bar }) => {
                writeln!(
                    out,
                    "beamsplitter {} kappa=[{:?}, {:?}]",
                    c.name, tilde, bar
                )
                .unwrap();
            }
        }
    }
    for l in &spec.links {
        write!(out, "link {} -> {}", l.from, l.to).unwrap();
        if l.phase != 0.0 {
            write!(out, " phase={:?}", l.phase).unwrap();
        }
        out.push('\n');
    }
    out
}

fn list(xs: &[f64]) -> String {
    xs.iter()
        .map(|x| format!("{x:?}"))
        .collect::<Vec<_>>()
        .join(", ")
}
