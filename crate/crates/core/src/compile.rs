//! Model synthesis: eliminate the internal signals ũ₂, ũ₃, ỹ₂, ỹ₃ through
//! the interconnection equations and emit (F, G, H, K) and (S, N, M).
//!
//! Throughout, `W = I − [[A₂₂ᵀ, A₃₂ᵀB̂], [A₂₃ᵀ, A₃₃ᵀB̂]]` is the elimination
//! matrix. Blocks with a zero dimension flow through the general formulas,
//! so cavity-only (k = 0) and beamsplitter-only (n = 0) networks need no
//! special handling; the dedicated special-case routines below exist as
//! independent cross-checks.

use std::fmt;

use nalgebra::DMatrix;

use crate::digraph::{build_adjacency, enumerate_nodes, AdjacencyPartition, NodeTable};
use crate::error::{Error, Result};
use crate::linalg::{block2, condition_number, hstack, identity, vstack, Factorization};
use crate::model::{SlhModel, StateSpaceModel};
use crate::netlist::{validate, NetworkSpec};
use crate::scalar::{c, to_complex, CMatrix, Scalar};
use crate::structmat::StructuralMatrices;

/// A validated network with its digraph and structural matrices.
#[derive(Debug, Clone)]
pub struct Network<T: Scalar> {
    pub spec: NetworkSpec,
    pub nodes: NodeTable,
    pub adjacency: AdjacencyPartition<T>,
    pub matrices: StructuralMatrices<T>,
}

impl<T: Scalar> Network<T> {
    pub fn elaborate(spec: &NetworkSpec) -> Result<Self> {
        let diags = validate(spec);
        if !diags.is_empty() {
            return Err(Error::Invalid(diags));
        }
        let nodes = enumerate_nodes(spec);
        let adjacency = build_adjacency(spec, &nodes)?;
        let matrices = StructuralMatrices::build(spec, &nodes)?;
        Ok(Network {
            spec: spec.clone(),
            nodes,
            adjacency,
            matrices,
        })
    }

    /// Number of field channels m.
    pub fn channels(&self) -> usize {
        self.nodes.sources
    }

    /// Number of cavity modes n.
    pub fn modes(&self) -> usize {
        self.matrices.cavities()
    }

    pub fn wellposedness(&self) -> WellPosedness {
        check_wellposedness(&self.adjacency, &self.matrices.bhat)
    }
}

/// Which nonsingularity assumption governs a network.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Assumption {
    /// W nonsingular (general network).
    General = 1,
    /// I − A₂₂ᵀ nonsingular (no beamsplitters).
    CavityOnly = 2,
    /// I − A₃₃ᵀB̂ nonsingular (no cavities).
    BeamsplitterOnly = 3,
}

impl Assumption {
    pub fn number(self) -> u8 {
        self as u8
    }

    pub fn matrix(self) -> &'static str {
        match self {
            Assumption::General => "I - [[A22^T, A32^T Bhat], [A23^T, A33^T Bhat]]",
            Assumption::CavityOnly => "I - A22^T",
            Assumption::BeamsplitterOnly => "I - A33^T Bhat",
        }
    }

    fn of(adj_mirrors: usize, adj_bs_nodes: usize) -> Self {
        match (adj_mirrors, adj_bs_nodes) {
            (nm, 0) if nm > 0 => Assumption::CavityOnly,
            (0, k2) if k2 > 0 => Assumption::BeamsplitterOnly,
            _ => Assumption::General,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WellPosedness {
    pub assumption: Assumption,
    /// 2-norm condition number of the elimination matrix (`inf` if singular).
    pub condition: f64,
    pub threshold: f64,
    pub well_posed: bool,
}

impl fmt::Display for WellPosedness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.well_posed {
            write!(
                f,
                "Assumption {} holds: {} has condition number {:e}",
                self.assumption.number(),
                self.assumption.matrix(),
                self.condition
            )
        } else {
            write!(
                f,
                "algebraic loop: Assumption {} violated: {} is singular (condition number {:e} exceeds {:e})",
                self.assumption.number(),
                self.assumption.matrix(),
                self.condition,
                self.threshold
            )
        }
    }
}

/// W = I − [[A₂₂ᵀ, A₃₂ᵀB̂], [A₂₃ᵀ, A₃₃ᵀB̂]].
pub fn elimination_matrix<T: Scalar>(adj: &AdjacencyPartition<T>, bhat: &DMatrix<T>) -> CMatrix<T> {
    let bh = to_complex(bhat);
    let loop_gain = block2(
        &adj.at(2, 2),
        &(adj.at(3, 2) * &bh),
        &adj.at(2, 3),
        &(adj.at(3, 3) * &bh),
    );
    identity::<T>(loop_gain.nrows()) - loop_gain
}

pub fn check_wellposedness<T: Scalar>(
    adj: &AdjacencyPartition<T>,
    bhat: &DMatrix<T>,
) -> WellPosedness {
    let w = elimination_matrix(adj, bhat);
    let condition = condition_number(&w);
    let threshold = T::SINGULAR_CONDITION;
    WellPosedness {
        assumption: Assumption::of(adj.ranges[1].len(), adj.ranges[2].len()),
        condition,
        threshold,
        well_posed: condition.is_finite() && condition <= threshold,
    }
}

fn require_well_posed<T: Scalar>(net: &Network<T>) -> Result<()> {
    let report = net.wellposedness();
    if report.well_posed {
        Ok(())
    } else {
        Err(Error::NotWellPosed(report))
    }
}

fn require_passive<T: Scalar>(net: &Network<T>) -> Result<()> {
    if net.spec.has_squeezers() {
        Err(Error::Unsupported(
            "network contains squeezers; compile it as an active network".into(),
        ))
    } else {
        Ok(())
    }
}

/// −½C̃C̃ᵀ + iD, with C̃C̃ᵀ taken as diag(γ).
fn free_dynamics<T: Scalar>(m: &StructuralMatrices<T>) -> CMatrix<T> {
    let half = T::lit(0.5);
    let n = m.cavities();
    CMatrix::from_fn(n, n, |i, j| {
        if i == j {
            c(-m.gamma[i] * half, m.detuning[(i, i)])
        } else {
            c(T::zero(), T::zero())
        }
    })
}

/// Solved interconnection: W⁻¹ applied to the state and input feeds.
struct Elimination<T: Scalar> {
    /// W⁻¹ [A₂₂ᵀ; A₂₃ᵀ], (n_m + 2k) × n_m.
    state_feed: CMatrix<T>,
    /// W⁻¹ [A₁₂ᵀ; A₁₃ᵀ], (n_m + 2k) × m.
    input_feed: CMatrix<T>,
    /// [A₂₄ᵀ  A₃₄ᵀB̂], m × (n_m + 2k).
    output_map: CMatrix<T>,
}

impl<T: Scalar> Elimination<T> {
    fn new(net: &Network<T>) -> Result<Self> {
        let adj = &net.adjacency;
        let bh = to_complex(&net.matrices.bhat);
        let w = elimination_matrix(adj, &net.matrices.bhat);
        let lu = Factorization::new(&w);
        Ok(Elimination {
            state_feed: lu.solve(&vstack(&adj.at(2, 2), &adj.at(2, 3)))?,
            input_feed: lu.solve(&vstack(&adj.at(1, 2), &adj.at(1, 3)))?,
            output_map: hstack(&adj.at(2, 4), &(adj.at(3, 4) * &bh)),
        })
    }

    /// Rows of a feed belonging to ũ₂, i.e. the product [I 0]·(feed).
    fn cavity_rows(feed: &CMatrix<T>, nm: usize) -> CMatrix<T> {
        feed.rows(0, nm).into_owned()
    }
}

struct PassiveBlocks<T: Scalar> {
    f: CMatrix<T>,
    g: CMatrix<T>,
    h: CMatrix<T>,
    k: CMatrix<T>,
    elim: Elimination<T>,
}

fn passive_blocks<T: Scalar>(net: &Network<T>) -> Result<PassiveBlocks<T>> {
    require_well_posed(net)?;
    let adj = &net.adjacency;
    let ct = to_complex(&net.matrices.ctilde);
    let ctt = ct.transpose();
    let nm = ct.ncols();
    let elim = Elimination::new(net)?;

    let f =
        free_dynamics(&net.matrices) - &ct * Elimination::cavity_rows(&elim.state_feed, nm) * &ctt;
    let g = -(&ct * Elimination::cavity_rows(&elim.input_feed, nm));
    let h = (adj.at(2, 4) + &elim.output_map * &elim.state_feed) * &ctt;
    let k = &elim.output_map * &elim.input_feed + adj.at(1, 4);
    Ok(PassiveBlocks { f, g, h, k, elim })
}

/// QSDEs ȧ = F a + G u, y = H a + K u of a passive network.
pub fn compile_passive<T: Scalar>(net: &Network<T>) -> Result<StateSpaceModel<T>> {
    require_passive(net)?;
    let b = passive_blocks(net)?;
    Ok(StateSpaceModel::passive(b.f, b.g, b.h, b.k))
}

/// (S, N, M) of a passive network, evaluated from the closed-form
/// elimination expressions (not by inverting the QSDE relations).
pub fn compile_slh_passive<T: Scalar>(net: &Network<T>) -> Result<SlhModel<T>> {
    require_passive(net)?;
    let b = passive_blocks(net)?;
    let adj = &net.adjacency;
    let ct = to_complex(&net.matrices.ctilde);
    let nm = ct.ncols();
    let bh = to_complex(&net.matrices.bhat);

    // Adjoint-side elimination V = I − [[Ā₂₂, Ā₂₃], [B̂ᵀĀ₃₂, B̂ᵀĀ₃₃]] (= W†).
    let a22 = adj.a(2, 2).conjugate();
    let a23 = adj.a(2, 3).conjugate();
    let a32 = adj.a(3, 2).conjugate();
    let a33 = adj.a(3, 3).conjugate();
    let bht = bh.transpose();
    let v = identity::<T>(a22.nrows() + a32.nrows())
        - block2(&a22, &a23, &(&bht * &a32), &(&bht * &a33));
    let selector = vstack(&identity::<T>(nm), &CMatrix::zeros(v.nrows() - nm, nm));
    let adjoint_term = hstack(&a22, &a23) * Factorization::new(&v).solve(&selector)?;
    let bracket = Elimination::cavity_rows(&b.elim.state_feed, nm) - adjoint_term;

    let half_i = c(T::zero(), T::lit(0.5));
    let hamiltonian = -to_complex(&net.matrices.detuning) - &ct * bracket * ct.transpose() * half_i;
    Ok(SlhModel {
        scattering: b.k,
        coupling: b.h,
        hamiltonian,
    })
}

/// Cavity-only formulas built on (I − A₂₂ᵀ)⁻¹.
pub fn compile_cavity_only<T: Scalar>(
    net: &Network<T>,
) -> Result<(StateSpaceModel<T>, SlhModel<T>)> {
    require_passive(net)?;
    if net.nodes.beamsplitters != 0 {
        return Err(Error::Unsupported(
            "cavity-only formulas need a network without beamsplitters".into(),
        ));
    }
    require_well_posed(net)?;
    let adj = &net.adjacency;
    let ct = to_complex(&net.matrices.ctilde);
    let ctt = ct.transpose();
    let nm = ct.ncols();
    let a22t = adj.at(2, 2);
    let a22c = adj.a(2, 2).conjugate();
    let p = Factorization::new(&(identity::<T>(nm) - &a22t));

    let f = free_dynamics(&net.matrices) - &ct * p.solve(&a22t)? * &ctt;
    let g = -(&ct * p.solve(&adj.at(1, 2))?);
    let h = adj.at(2, 4) * p.solve(&ctt)?;
    let k = adj.at(2, 4) * p.solve(&adj.at(1, 2))? + adj.at(1, 4);

    // M = −D + (i/2) C̃ (I − A₂₂ᵀ)⁻¹ (Ā₂₂ − A₂₂ᵀ)(I − Ā₂₂)⁻¹ C̃ᵀ
    let right = Factorization::new(&(identity::<T>(nm) - &a22c)).solve(&ctt)?;
    let inner = p.solve(&((&a22c - &a22t) * right))?;
    let half_i = c(T::zero(), T::lit(0.5));
    let hamiltonian = -to_complex(&net.matrices.detuning) + &ct * inner * half_i;

    let slh = SlhModel {
        scattering: k.clone(),
        coupling: h.clone(),
        hamiltonian,
    };
    Ok((StateSpaceModel::passive(f, g, h, k), slh))
}

/// Static scattering matrix of a network with no cavities: L = 0, 𝐇 = 0.
pub fn compile_beamsplitter_only<T: Scalar>(net: &Network<T>) -> Result<SlhModel<T>> {
    if net.modes() != 0 {
        return Err(Error::Unsupported(
            "beamsplitter-only formulas need a network without cavities".into(),
        ));
    }
    require_well_posed(net)?;
    let adj = &net.adjacency;
    let bh = to_complex(&net.matrices.bhat);
    let q = identity::<T>(bh.nrows()) - adj.at(3, 3) * &bh;
    let routed = Factorization::new(&q).solve(&adj.at(1, 3))?;
    let scattering = adj.at(3, 4) * &bh * routed + adj.at(1, 4);
    let m = net.channels();
    Ok(SlhModel {
        scattering,
        coupling: CMatrix::zeros(m, 0),
        hamiltonian: CMatrix::zeros(0, 0),
    })
}

/// Doubled-up QSDEs for networks that may contain squeezers.
pub fn compile_active<T: Scalar>(net: &Network<T>) -> Result<StateSpaceModel<T>> {
    let b = passive_blocks(net)?;
    let (n, m) = (net.modes(), net.channels());
    let f2 = -net.matrices.squeezing.clone();
    Ok(StateSpaceModel::doubled(
        (b.f, f2),
        (b.g, CMatrix::zeros(n, m)),
        (b.h, CMatrix::zeros(m, n)),
        (b.k, CMatrix::zeros(m, m)),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;
    use crate::netlist::parse_netlist;

    fn net(text: &str) -> Network<f64> {
        Network::elaborate(&parse_netlist(text).unwrap()).unwrap()
    }

    fn cm(rows: usize, cols: usize, data: &[f64]) -> CMatrix<f64> {
        CMatrix::from_row_iterator(rows, cols, data.iter().map(|&x| c(x, 0.0)))
    }

    #[test]
    fn single_cavity_matches_closed_form() {
        let (kappa, det) = (0.8_f64, -1.25_f64);
        let n = net(&format!(
            "source s\ncavity c kappa=[{kappa}] detuning={det}\nsink d\nlink s.out -> c.m1.in\nlink c.m1.out -> d.in\n"
        ));
        let ss = compile_passive(&n).unwrap();
        assert_eq!(ss.f[(0, 0)], c(-kappa / 2.0, det));
        assert_eq!(ss.g[(0, 0)], c(-kappa.sqrt(), 0.0));
        assert_eq!(ss.h[(0, 0)], c(kappa.sqrt(), 0.0));
        assert_eq!(ss.k[(0, 0)], c(1.0, 0.0));
        let slh = compile_slh_passive(&n).unwrap();
        assert!((slh.hamiltonian[(0, 0)] - c(-det, 0.0)).norm() < 1e-15);
        assert_eq!(slh.scattering, CMatrix::identity(1, 1));
    }

    #[test]
    fn multi_mirror_cavity_channelwise() {
        let ks = [0.5_f64, 1.5, 2.0];
        let n = net(
            "source s1\nsource s2\nsource s3\ncavity c kappa=[0.5, 1.5, 2.0] detuning=0.7\n\
                     sink d1\nsink d2\nsink d3\n\
                     link s1.out -> c.m1.in\nlink s2.out -> c.m2.in\nlink s3.out -> c.m3.in\n\
                     link c.m1.out -> d1.in\nlink c.m2.out -> d2.in\nlink c.m3.out -> d3.in\n",
        );
        let (ss, _) = compile_cavity_only(&n).unwrap();
        assert_eq!(ss.f[(0, 0)], c(-2.0, 0.7));
        for (i, k) in ks.iter().enumerate() {
            assert!((ss.g[(0, i)] - c(-k.sqrt(), 0.0)).norm() < 1e-15);
            assert!((ss.h[(i, 0)] - c(k.sqrt(), 0.0)).norm() < 1e-15);
        }
        assert_eq!(ss.k, CMatrix::identity(3, 3));
    }

    #[test]
    fn cascaded_cavities() {
        let n = net(
            "source s\ncavity c1 kappa=[1]\ncavity c2 kappa=[1]\nsink d\n\
                     link s.out -> c1.m1.in\nlink c1.m1.out -> c2.m1.in\nlink c2.m1.out -> d.in\n",
        );
        let (ss, slh) = compile_cavity_only(&n).unwrap();
        assert!(max_abs_diff(&ss.f, &cm(2, 2, &[-0.5, 0.0, -1.0, -0.5])) < 1e-15);
        assert!(max_abs_diff(&ss.g, &cm(2, 1, &[-1.0, -1.0])) < 1e-15);
        assert!(max_abs_diff(&ss.h, &cm(1, 2, &[1.0, 1.0])) < 1e-15);
        assert_eq!(ss.k, cm(1, 1, &[1.0]));
        let general = compile_passive(&n).unwrap();
        assert!(max_abs_diff(&ss.f, &general.f) < 1e-15);
        assert!(slh.hermiticity_residual() < 1e-15);
        let back = slh.to_state_space();
        assert!(max_abs_diff(&back.f, &ss.f) < 1e-14);
    }

    #[test]
    fn passthrough() {
        let n = net("source s\nsink d\nlink s.out -> d.in\n");
        let ss = compile_passive(&n).unwrap();
        assert_eq!(ss.f.shape(), (0, 0));
        assert_eq!(ss.g.shape(), (0, 1));
        assert_eq!(ss.h.shape(), (1, 0));
        assert_eq!(ss.k, CMatrix::identity(1, 1));
        let slh = compile_slh_passive(&n).unwrap();
        assert_eq!(slh.scattering, CMatrix::identity(1, 1));
        assert_eq!(slh.coupling.shape(), (1, 0));
        assert_eq!(slh.hamiltonian.shape(), (0, 0));
    }

    #[test]
    fn self_loop_violates_assumption_2() {
        let n = net("source s\ncavity c kappa=[1, 1]\nsink d\n\
                     link s.out -> c.m1.in\nlink c.m1.out -> d.in\nlink c.m2.out -> c.m2.in\n");
        let report = n.wellposedness();
        assert!(!report.well_posed);
        assert_eq!(report.assumption, Assumption::CavityOnly);
        assert!(report.to_string().contains("Assumption 2 violated"));
        assert!(matches!(compile_passive(&n), Err(Error::NotWellPosed(_))));
        assert!(matches!(
            compile_cavity_only(&n),
            Err(Error::NotWellPosed(_))
        ));
    }

    #[test]
    fn self_loop_with_phase_is_well_posed() {
        let n = net("source s\ncavity c kappa=[1, 1]\nsink d\n\
                     link s.out -> c.m1.in\nlink c.m1.out -> d.in\nlink c.m2.out -> c.m2.in phase=1.0\n");
        assert!(n.wellposedness().well_posed);
    }

    /// The 4×4 I − A₃₃ᵀB̂ for two symmetric beamsplitters closing a
    /// transmission loop, written out by hand.
    #[test]
    fn beamsplitter_loop_by_hand() {
        let n = net(
            "source s1\nsource s2\nbeamsplitter b1 xi=0\nbeamsplitter b2 xi=0\nsink d1\nsink d2\n\
                     link s1.out -> b1.a.in\nlink s2.out -> b2.b.in\n\
                     link b1.a.out -> b2.a.in\nlink b2.b.out -> b1.b.in\n\
                     link b1.b.out -> d1.in\nlink b2.a.out -> d2.in\n",
        );
        // Local order: b1.a, b2.a, b1.b, b2.b.
        let hand = cm(
            4,
            4,
            &[
                1.0, 0.0, 0.0, 0.0, //
                0.0, 1.0, 1.0, 0.0, //
                0.0, 1.0, 1.0, 0.0, //
                0.0, 0.0, 0.0, 1.0,
            ],
        );
        let w = elimination_matrix(&n.adjacency, &n.matrices.bhat);
        assert!(max_abs_diff(&w, &hand) < 1e-15);
        let report = n.wellposedness();
        assert_eq!(report.assumption, Assumption::BeamsplitterOnly);
        assert!(!report.well_posed);
        assert!(report.condition > 1e12);
    }

    #[test]
    fn beamsplitter_only_straight() {
        let n = net("source s1\nsource s2\nbeamsplitter b kappa=[1, 3]\nsink d1\nsink d2\n\
                     link s1.out -> b.a.in\nlink s2.out -> b.b.in\nlink b.a.out -> d1.in\nlink b.b.out -> d2.in\n");
        let slh = compile_beamsplitter_only(&n).unwrap();
        let h = 3f64.sqrt() / 2.0;
        assert!(max_abs_diff(&slh.scattering, &cm(2, 2, &[0.5, -h, -h, -0.5])) < 1e-15);
        let general = compile_passive(&n).unwrap();
        assert!(max_abs_diff(&general.k, &slh.scattering) < 1e-15);
    }

    #[test]
    fn symmetric_beamsplitter_swaps() {
        let n = net("source s1\nsource s2\nbeamsplitter b xi=0\nsink d1\nsink d2\n\
                     link s1.out -> b.a.in\nlink s2.out -> b.b.in\nlink b.a.out -> d1.in\nlink b.b.out -> d2.in\n");
        let s = compile_beamsplitter_only(&n).unwrap().scattering;
        assert_eq!(s, cm(2, 2, &[0.0, -1.0, -1.0, 0.0]));
    }

    #[test]
    fn mach_zehnder_is_product_of_beamsplitters() {
        let (x1, x2) = (0.3_f64, -0.6_f64);
        let n = net(&format!(
            "source s1\nsource s2\nbeamsplitter p xi={x1}\nbeamsplitter q xi={x2}\nsink d1\nsink d2\n\
             link s1.out -> p.a.in\nlink s2.out -> p.b.in\nlink p.a.out -> q.a.in\nlink p.b.out -> q.b.in\n\
             link q.a.out -> d1.in\nlink q.b.out -> d2.in\n"
        ));
        let s = compile_beamsplitter_only(&n).unwrap().scattering;
        let bs = |x: f64| {
            let r = (1.0 - x * x).sqrt();
            [[x, -r], [-r, -x]]
        };
        let (p, q) = (bs(x1), bs(x2));
        let mut want = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                want[i][j] = q[i][0] * p[0][j] + q[i][1] * p[1][j];
            }
        }
        let want = cm(2, 2, &[want[0][0], want[0][1], want[1][0], want[1][1]]);
        assert!(max_abs_diff(&s, &want) < 1e-14);
        let slh = SlhModel {
            scattering: s,
            coupling: CMatrix::zeros(2, 0),
            hamiltonian: CMatrix::zeros(0, 0),
        };
        assert!(slh.unitarity_residual() < 1e-14);
    }

    #[test]
    fn special_cases_reject_wrong_networks() {
        let bs = net("source s1\nsource s2\nbeamsplitter b xi=0\nsink d1\nsink d2\n\
                      link s1.out -> b.a.in\nlink s2.out -> b.b.in\nlink b.a.out -> d1.in\nlink b.b.out -> d2.in\n");
        assert!(matches!(
            compile_cavity_only(&bs),
            Err(Error::Unsupported(_))
        ));
        let cav = net(
            "source s\ncavity c kappa=[1]\nsink d\nlink s.out -> c.m1.in\nlink c.m1.out -> d.in\n",
        );
        assert!(matches!(
            compile_beamsplitter_only(&cav),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn single_squeezer_doubled_form() {
        let (kappa, det) = (1.3_f64, 0.4_f64);
        let n = net(&format!(
            "source s\ncavity c kappa=[{kappa}] detuning={det} chi=0.25-0.5i\nsink d\nlink s.out -> c.m1.in\nlink c.m1.out -> d.in\n"
        ));
        assert!(matches!(compile_passive(&n), Err(Error::Unsupported(_))));
        let ss = compile_active(&n).unwrap();
        let chi = c(0.25, -0.5);
        let want = CMatrix::from_row_slice(
            2,
            2,
            &[
                c(-kappa / 2.0, det),
                -chi,
                -chi.conj(),
                c(-kappa / 2.0, -det),
            ],
        );
        assert_eq!(ss.f, want);
        assert!(ss.has_doubled_symmetry());
    }

    #[test]
    fn f32_pipeline() {
        let spec = parse_netlist(
            "source s\ncavity c1 kappa=[1]\ncavity c2 kappa=[1]\nsink d\n\
                     link s.out -> c1.m1.in\nlink c1.m1.out -> c2.m1.in\nlink c2.m1.out -> d.in\n",
        )
        .unwrap();
        let n = Network::<f32>::elaborate(&spec).unwrap();
        let ss = compile_passive(&n).unwrap();
        assert!((ss.f[(1, 0)] - c(-1.0f32, 0.0)).norm() < 1e-6);
    }
}
