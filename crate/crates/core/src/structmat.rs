//! Structural matrices consumed by the synthesis formulas.

use nalgebra::DMatrix;

use crate::digraph::{NodeClass, NodeTable};
use crate::error::{Error, Result};
use crate::netlist::NetworkSpec;
use crate::scalar::{c, CMatrix, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct StructuralMatrices<T: Scalar> {
    /// C̃, n × n_m: √κ of each cavity mirror in its cavity's row.
    pub ctilde: DMatrix<T>,
    /// γᵢ = Σκ per cavity; equal to the diagonal of C̃C̃ᵀ.
    pub gamma: Vec<T>,
    /// D, n × n diagonal detuning.
    pub detuning: DMatrix<T>,
    /// 𝒳, n × n diagonal squeezing.
    pub squeezing: CMatrix<T>,
    /// B̃, k × k diagonal √κ̃.
    pub btilde: DMatrix<T>,
    /// B̄, k × k diagonal √κ̄.
    pub bbar: DMatrix<T>,
    /// B̂, 2k × 2k static beamsplitter map ỹ₃ = B̂ũ₃.
    pub bhat: DMatrix<T>,
}

impl<T: Scalar> StructuralMatrices<T> {
    pub fn build(spec: &NetworkSpec, table: &NodeTable) -> Result<Self> {
        let (btilde, bbar) = build_beamsplitter_matrices(spec);
        let bhat = compute_bhat(&btilde, &bbar)?;
        Ok(StructuralMatrices {
            ctilde: build_cavity_matrix(spec, table),
            gamma: spec.cavities().map(|(_, p)| T::lit(p.gamma())).collect(),
            detuning: build_detuning_matrix(spec),
            squeezing: build_squeezing_matrix(spec),
            btilde,
            bbar,
            bhat,
        })
    }

    pub fn cavities(&self) -> usize {
        self.ctilde.nrows()
    }

    /// Full n × (2m + n_m + 2k) cavity matrix C = [0 | C̃ | 0 | 0].
    pub fn full_cavity_matrix(&self, table: &NodeTable) -> DMatrix<T> {
        let mut c = DMatrix::zeros(self.ctilde.nrows(), table.len());
        let r = table.range(NodeClass::CavityMirror);
        c.view_mut((0, r.start), self.ctilde.shape())
            .copy_from(&self.ctilde);
        c
    }

    /// Full k × (2m + n_m + 2k) beamsplitter matrix B = [0 | 0 | B̃ | B̄ | 0].
    pub fn full_beamsplitter_matrix(&self, table: &NodeTable) -> DMatrix<T> {
        let k = self.btilde.nrows();
        let mut b = DMatrix::zeros(k, table.len());
        let start = table.range(NodeClass::BeamsplitterMirror).start;
        b.view_mut((0, start), (k, k)).copy_from(&self.btilde);
        b.view_mut((0, start + k), (k, k)).copy_from(&self.bbar);
        b
    }
}

/// C̃ with columns in node-table order of the cavity mirrors.
pub fn build_cavity_matrix<T: Scalar>(spec: &NetworkSpec, table: &NodeTable) -> DMatrix<T> {
    let mut ct = DMatrix::zeros(spec.cavity_count(), table.cavity_mirrors);
    let mut col = 0;
    for (row, (_, p)) in spec.cavities().enumerate() {
        for &kappa in &p.kappas {
            ct[(row, col)] = T::lit(kappa).sqrt();
            col += 1;
        }
    }
    ct
}

pub fn build_detuning_matrix<T: Scalar>(spec: &NetworkSpec) -> DMatrix<T> {
    let d: Vec<T> = spec.cavities().map(|(_, p)| T::lit(p.detuning)).collect();
    DMatrix::from_diagonal(&nalgebra::DVector::from_vec(d))
}

pub fn build_squeezing_matrix<T: Scalar>(spec: &NetworkSpec) -> CMatrix<T> {
    let x: Vec<_> = spec
        .cavities()
        .map(|(_, p)| c(T::lit(p.chi.re), T::lit(p.chi.im)))
        .collect();
    CMatrix::from_diagonal(&nalgebra::DVector::from_vec(x))
}

/// (B̃, B̄) diagonal √κ̃, √κ̄ in beamsplitter declaration order.
pub fn build_beamsplitter_matrices<T: Scalar>(spec: &NetworkSpec) -> (DMatrix<T>, DMatrix<T>) {
    let (tilde, bar): (Vec<T>, Vec<T>) = spec
        .beamsplitters()
        .map(|(_, p)| {
            let (kt, kb) = p.couplings();
            (T::lit(kt).sqrt(), T::lit(kb).sqrt())
        })
        .unzip();
    (
        DMatrix::from_diagonal(&nalgebra::DVector::from_vec(tilde)),
        DMatrix::from_diagonal(&nalgebra::DVector::from_vec(bar)),
    )
}

/// ξ = (κ̄ − κ̃)/(κ̃ + κ̄).
pub fn xi_of_kappas<T: Scalar>(tilde: T, bar: T) -> Result<T> {
    if !(tilde > T::zero() && bar > T::zero()) {
        return Err(Error::Domain(format!(
            "beamsplitter couplings must be positive, got ({tilde}, {bar})"
        )));
    }
    Ok((bar - tilde) / (tilde + bar))
}

/// Canonical couplings (1 − ξ, 1 + ξ).
pub fn kappas_of_xi<T: Scalar>(xi: T) -> Result<(T, T)> {
    let one = T::one();
    if !(xi > -one && xi < one) {
        return Err(Error::Domain(format!("xi must lie in (-1, 1), got {xi}")));
    }
    Ok((one - xi, one + xi))
}

/// B̂ = −[B̃ B̄]ᵀ(B̃B̃ᵀ+B̄B̄ᵀ)⁻¹[B̃ B̄] + [−B̄ B̃]ᵀ(B̃B̃ᵀ+B̄B̄ᵀ)⁻¹[−B̄ B̃].
pub fn compute_bhat<T: Scalar>(btilde: &DMatrix<T>, bbar: &DMatrix<T>) -> Result<DMatrix<T>> {
    let k = btilde.nrows();
    if btilde.shape() != (k, k) || bbar.shape() != (k, k) {
        return Err(Error::Domain(
            "B̃ and B̄ must be square and equal-sized".into(),
        ));
    }
    let gram = btilde * btilde.transpose() + bbar * bbar.transpose();
    let inv = gram
        .try_inverse()
        .ok_or_else(|| Error::Domain("B̃B̃ᵀ + B̄B̄ᵀ is singular".into()))?;
    let mut p = DMatrix::zeros(k, 2 * k);
    p.view_mut((0, 0), (k, k)).copy_from(btilde);
    p.view_mut((0, k), (k, k)).copy_from(bbar);
    let mut q = DMatrix::zeros(k, 2 * k);
    q.view_mut((0, 0), (k, k)).copy_from(&(-bbar));
    q.view_mut((0, k), (k, k)).copy_from(btilde);
    Ok(-(p.transpose() * &inv * &p) + q.transpose() * &inv * &q)
}
