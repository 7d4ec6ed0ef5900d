use std::collections::{HashMap, HashSet};

use super::diag::{Diagnostic, Entity, Rule};
use super::{BeamsplitterParams, ComponentKind, Dir, NetworkSpec, PortError, ResolvedPort};

/// Checks every invariant of a network description.
///
/// Rules that would only restate an earlier failure are suppressed: name
/// clashes make port resolution ambiguous, so links are not checked; a
/// source/sink imbalance or a broken link makes total wiring impossible to
/// judge, so the wiring check is skipped.
pub fn validate(spec: &NetworkSpec) -> Vec<Diagnostic> {
    let mut out = Vec::new();

    let mut names: HashMap<&str, usize> = HashMap::new();
    let mut duplicate_names = false;
    for (i, c) in spec.components.iter().enumerate() {
        if let Some(first) = names.get(c.name.as_str()) {
            duplicate_names = true;
            out.push(Diagnostic::new(
                Rule::DuplicateName,
                Entity::Component(i),
                format!(
                    "component name `{}` already used by declaration #{}",
                    c.name,
                    first + 1
                ),
            ));
        } else {
            names.insert(&c.name, i);
        }
    }

    for (i, c) in spec.components.iter().enumerate() {
        check_parameters(i, c.name.as_str(), &c.kind, &mut out);
    }

    let sources = spec.source_count();
    let sinks = spec.sink_count();
    let counts_ok = sources == sinks;
    if !counts_ok {
        out.push(Diagnostic::new(
            Rule::CountMismatch,
            Entity::Network,
            format!("source/sink count mismatch: {sources} source(s), {sinks} sink(s)"),
        ));
    }

    if duplicate_names {
        return out;
    }

    let mut link_errors = false;
    let mut used: HashMap<ResolvedPort, usize> = HashMap::new();
    for (li, link) in spec.links.iter().enumerate() {
        if !link.phase.is_finite() {
            out.push(Diagnostic::new(
                Rule::NonFinite,
                Entity::Link(li),
                format!("phase of link {} -> {} is not finite", link.from, link.to),
            ));
        }
        for (port, want) in [(&link.from, Dir::Out), (&link.to, Dir::In)] {
            let resolved = match spec.resolve(port) {
                Ok(r) => r,
                Err(e) => {
                    link_errors = true;
                    let msg = match e {
                        PortError::UnknownComponent(name) => {
                            format!("`{port}` refers to undeclared component `{name}`")
                        }
                        PortError::NoSuchPort(p) => format!("component has no port `{p}`"),
                    };
                    out.push(Diagnostic::new(Rule::DanglingPort, Entity::Link(li), msg));
                    break;
                }
            };
            if resolved.dir != want {
                link_errors = true;
                let role = if want == Dir::Out { "start" } else { "end" };
                out.push(Diagnostic::new(
                    Rule::PortDirection,
                    Entity::Link(li),
                    format!(
                        "link must {role} at an .{} port, got `{port}`",
                        want.as_str()
                    ),
                ));
                break;
            }
            if let Some(prev) = used.insert(resolved, li) {
                link_errors = true;
                let what = if want == Dir::Out {
                    "fan-out: output"
                } else {
                    "merge: input"
                };
                out.push(Diagnostic::new(
                    Rule::DuplicatePort,
                    Entity::Link(li),
                    format!("{what} port `{port}` already used by link #{}", prev + 1),
                ));
            }
        }
    }

    if counts_ok && !link_errors {
        let wired: HashSet<String> = spec
            .links
            .iter()
            .flat_map(|l| [l.from.to_string(), l.to.to_string()])
            .collect();
        let mut first = None;
        let mut missing = Vec::new();
        for port in spec.ports() {
            let text = port.to_string();
            if !wired.contains(&text) {
                first.get_or_insert(port.component.clone());
                missing.push(text);
            }
        }
        if let Some(owner) = first {
            let idx = names[owner.as_str()];
            out.push(Diagnostic::new(
                Rule::UnwiredPort,
                Entity::Component(idx),
                format!("unwired port(s): {}", missing.join(", ")),
            ));
        }
    }

    out
}

fn check_parameters(i: usize, name: &str, kind: &ComponentKind, out: &mut Vec<Diagnostic>) {
    let entity = Entity::Component(i);
    let coupling = |label: String, value: f64, out: &mut Vec<Diagnostic>| {
        if !value.is_finite() {
            out.push(Diagnostic::new(
                Rule::NonFinite,
                entity,
                format!("coupling of {label} is not finite"),
            ));
        } else if value <= 0.0 {
            out.push(Diagnostic::new(
                Rule::NonpositiveCoupling,
                entity,
                format!("coupling of {label} must be positive, got {value}"),
            ));
        }
    };
    match kind {
        ComponentKind::Source | ComponentKind::Sink => {}
        ComponentKind::Cavity(p) => {
            if p.kappas.is_empty() {
                out.push(Diagnostic::new(
                    Rule::EmptyCavity,
                    entity,
                    format!("cavity `{name}` has no mirrors"),
                ));
            }
            for (j, &k) in p.kappas.iter().enumerate() {
                coupling(format!("{name}.m{}", j + 1), k, out);
            }
            if !p.detuning.is_finite() || !p.chi.re.is_finite() || !p.chi.im.is_finite() {
                out.push(Diagnostic::new(
                    Rule::NonFinite,
                    entity,
                    format!("cavity `{name}` has a non-finite detuning or squeezing"),
                ));
            }
        }
        ComponentKind::Beamsplitter(BeamsplitterParams::Xi(xi)) => {
            if !xi.is_finite() {
                out.push(Diagnostic::new(
                    Rule::NonFinite,
                    entity,
                    format!("xi of `{name}` is not finite"),
                ));
            } else if *xi <= -1.0 || *xi >= 1.0 {
                out.push(Diagnostic::new(
                    Rule::XiRange,
                    entity,
                    format!("xi of `{name}` must lie in (-1, 1), got {xi}"),
                ));
            }
        }
        ComponentKind::Beamsplitter(BeamsplitterParams::Couplings { tilde, bar }) => {
            coupling(format!("{name}.a"), *tilde, out);
            coupling(format!("{name}.b"), *bar, out);
        }
    }
}
