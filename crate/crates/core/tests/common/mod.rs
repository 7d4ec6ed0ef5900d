#![allow(dead_code)]

use std::f64::consts::PI;

use qonc::compile::Network;
use qonc::netlist::{BeamsplitterParams, ComponentSpec, Dir, LinkSpec, NetworkSpec, PortRef};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

/// Elimination matrices worse-conditioned than this are redrawn so that
/// residual checks measure the formulas, not near-singular solves.
pub const MAX_CONDITION: f64 = 1e8;

#[derive(Debug, Clone, Copy)]
pub struct Shape {
    pub max_cavities: usize,
    pub max_mirrors: usize,
    pub max_beamsplitters: usize,
    pub max_channels: usize,
    pub min_cavities: usize,
    pub min_beamsplitters: usize,
    pub phases: bool,
    pub squeezing: bool,
}

impl Shape {
    pub const GENERAL: Shape = Shape {
        max_cavities: 6,
        max_mirrors: 12,
        max_beamsplitters: 4,
        max_channels: 6,
        min_cavities: 0,
        min_beamsplitters: 0,
        phases: true,
        squeezing: false,
    };

    pub fn cavities_only() -> Shape {
        Shape {
            max_beamsplitters: 0,
            min_cavities: 1,
            ..Shape::GENERAL
        }
    }

    pub fn beamsplitters_only() -> Shape {
        Shape {
            max_cavities: 0,
            min_beamsplitters: 1,
            ..Shape::GENERAL
        }
    }
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

fn coupling(rng: &mut StdRng) -> f64 {
    // Log-uniform over (0.1, 10).
    10f64.powf(rng.gen_range(-1.0..1.0))
}

/// One random netlist; it validates but may not be well-posed.
pub fn random_spec(rng: &mut StdRng, shape: &Shape) -> NetworkSpec {
    let n = rng.gen_range(shape.min_cavities..=shape.max_cavities);
    let k = rng.gen_range(shape.min_beamsplitters..=shape.max_beamsplitters);
    let m = rng.gen_range(1..=shape.max_channels);

    let mut mirrors = vec![1usize; n];
    let extra = shape.max_mirrors.saturating_sub(n);
    for _ in 0..rng.gen_range(0..=extra) {
        if n > 0 {
            mirrors[rng.gen_range(0..n)] += 1;
        }
    }

    let mut components = Vec::new();
    let mut outputs = Vec::new();
    let mut inputs = Vec::new();
    for i in 0..m {
        let name = format!("s{}", i + 1);
        outputs.push(PortRef::field(&name, Dir::Out));
        components.push(ComponentSpec::source(name));
    }
    for (i, &count) in mirrors.iter().enumerate() {
        let name = format!("c{}", i + 1);
        let kappas = (0..count).map(|_| coupling(rng)).collect();
        let detuning = rng.gen_range(-5.0..5.0);
        components.push(if shape.squeezing && rng.gen_bool(0.5) {
            let chi =
                num_complex::Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            ComponentSpec::squeezer(&name, kappas, detuning, chi)
        } else {
            ComponentSpec::cavity(&name, kappas, detuning)
        });
        for j in 1..=count {
            outputs.push(PortRef::named(&name, format!("m{j}"), Dir::Out));
            inputs.push(PortRef::named(&name, format!("m{j}"), Dir::In));
        }
    }
    for i in 0..k {
        let name = format!("b{}", i + 1);
        let params = if rng.gen_bool(0.5) {
            BeamsplitterParams::Xi(rng.gen_range(-0.95..0.95))
        } else {
            BeamsplitterParams::Couplings {
                tilde: coupling(rng),
                bar: coupling(rng),
            }
        };
        components.push(ComponentSpec::beamsplitter(&name, params));
        for side in ["a", "b"] {
            outputs.push(PortRef::named(&name, side, Dir::Out));
            inputs.push(PortRef::named(&name, side, Dir::In));
        }
    }
    for i in 0..m {
        let name = format!("d{}", i + 1);
        inputs.push(PortRef::field(&name, Dir::In));
        components.push(ComponentSpec::sink(name));
    }

    inputs.shuffle(rng);
    let links = outputs
        .into_iter()
        .zip(inputs)
        .map(|(from, to)| {
            let link = LinkSpec::new(from, to);
            if shape.phases && rng.gen_bool(0.5) {
                link.with_phase(rng.gen_range(-PI..PI))
            } else {
                link
            }
        })
        .collect();
    NetworkSpec::new(components, links)
}

/// Draws until the network is well-posed with a moderate condition number.
pub fn random_network(rng: &mut StdRng, shape: &Shape) -> Network<f64> {
    loop {
        let spec = random_spec(rng, shape);
        let net = Network::<f64>::elaborate(&spec).expect("generator emits valid netlists");
        if net.wellposedness().condition <= MAX_CONDITION {
            return net;
        }
    }
}

pub fn fixture(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("fixtures")
        .join(name)
}

pub fn read_fixture(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).expect("fixture readable")
}
