//! Compiled model types.

use crate::linalg::{block2, identity};
use crate::scalar::{c, CMatrix, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// ȧ = F a + G u, y = H a + K u over annihilation operators only.
    PassiveAnnihilation,
    /// Doubled-up form over (a, a#) with Δ(X₁, X₂) block structure.
    ActiveDoubled,
}

impl Mode {
    pub fn label(self) -> &'static str {
        match self {
            Mode::PassiveAnnihilation => "passive-annihilation",
            Mode::ActiveDoubled => "active-doubled",
        }
    }
}

/// Linear QSDE state-space model. In doubled mode every matrix is the 2×2
/// block Δ(X₁, X₂) = [[X₁, X₂], [X₂#, X₁#]].
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpaceModel<T: Scalar> {
    pub mode: Mode,
    pub f: CMatrix<T>,
    pub g: CMatrix<T>,
    pub h: CMatrix<T>,
    pub k: CMatrix<T>,
    /// Number of cavity modes n.
    pub modes: usize,
    /// Number of field channels m.
    pub channels: usize,
}

impl<T: Scalar> StateSpaceModel<T> {
    pub fn passive(f: CMatrix<T>, g: CMatrix<T>, h: CMatrix<T>, k: CMatrix<T>) -> Self {
        let modes = f.nrows();
        let channels = k.nrows();
        assert_eq!(f.shape(), (modes, modes));
        assert_eq!(g.shape(), (modes, channels));
        assert_eq!(h.shape(), (channels, modes));
        assert_eq!(k.shape(), (channels, channels));
        StateSpaceModel {
            mode: Mode::PassiveAnnihilation,
            f,
            g,
            h,
            k,
            modes,
            channels,
        }
    }

    /// Builds Δ(F₁,F₂), Δ(G₁,G₂), Δ(H₁,H₂), Δ(K₁,K₂).
    pub fn doubled(
        (f1, f2): (CMatrix<T>, CMatrix<T>),
        (g1, g2): (CMatrix<T>, CMatrix<T>),
        (h1, h2): (CMatrix<T>, CMatrix<T>),
        (k1, k2): (CMatrix<T>, CMatrix<T>),
    ) -> Self {
        let modes = f1.nrows();
        let channels = k1.nrows();
        StateSpaceModel {
            mode: Mode::ActiveDoubled,
            f: delta(&f1, &f2),
            g: delta(&g1, &g2),
            h: delta(&h1, &h2),
            k: delta(&k1, &k2),
            modes,
            channels,
        }
    }

    fn upper(&self, m: &CMatrix<T>, rows: usize, cols: usize, right: bool) -> CMatrix<T> {
        let start = if right { cols } else { 0 };
        match self.mode {
            Mode::PassiveAnnihilation if right => CMatrix::zeros(rows, cols),
            Mode::PassiveAnnihilation => m.clone(),
            Mode::ActiveDoubled => m.view((0, start), (rows, cols)).into_owned(),
        }
    }

    /// (F₁, F₂); F₂ is zero for passive models.
    pub fn f_blocks(&self) -> (CMatrix<T>, CMatrix<T>) {
        let n = self.modes;
        (
            self.upper(&self.f, n, n, false),
            self.upper(&self.f, n, n, true),
        )
    }

    pub fn g_blocks(&self) -> (CMatrix<T>, CMatrix<T>) {
        let (n, m) = (self.modes, self.channels);
        (
            self.upper(&self.g, n, m, false),
            self.upper(&self.g, n, m, true),
        )
    }

    pub fn h_blocks(&self) -> (CMatrix<T>, CMatrix<T>) {
        let (n, m) = (self.modes, self.channels);
        (
            self.upper(&self.h, m, n, false),
            self.upper(&self.h, m, n, true),
        )
    }

    pub fn k_blocks(&self) -> (CMatrix<T>, CMatrix<T>) {
        let m = self.channels;
        (
            self.upper(&self.k, m, m, false),
            self.upper(&self.k, m, m, true),
        )
    }

    /// True when every matrix has the exact Δ(X₁, X₂) conjugate-block layout.
    pub fn has_doubled_symmetry(&self) -> bool {
        if self.mode != Mode::ActiveDoubled {
            return false;
        }
        let check = |m: &CMatrix<T>, (x1, x2): (CMatrix<T>, CMatrix<T>)| *m == delta(&x1, &x2);
        check(&self.f, self.f_blocks())
            && check(&self.g, self.g_blocks())
            && check(&self.h, self.h_blocks())
            && check(&self.k, self.k_blocks())
    }
}

/// Δ(X₁, X₂) = [[X₁, X₂], [X₂#, X₁#]].
pub fn delta<T: Scalar>(x1: &CMatrix<T>, x2: &CMatrix<T>) -> CMatrix<T> {
    block2(x1, x2, &x2.conjugate(), &x1.conjugate())
}

/// (S, L, H) parameters of an annihilation-only model: L = N a, 𝐇 = a†M a.
#[derive(Debug, Clone, PartialEq)]
pub struct SlhModel<T: Scalar> {
    pub scattering: CMatrix<T>,
    pub coupling: CMatrix<T>,
    pub hamiltonian: CMatrix<T>,
}

impl<T: Scalar> SlhModel<T> {
    /// F = −iM − ½N†N, G = −N†S, H = N, K = S.
    pub fn to_state_space(&self) -> StateSpaceModel<T> {
        let n = &self.coupling;
        let half = c(T::lit(0.5), T::zero());
        let i = c(T::zero(), T::one());
        let f = -(&self.hamiltonian * i) - n.adjoint() * n * half;
        let g = -(n.adjoint() * &self.scattering);
        StateSpaceModel::passive(f, g, n.clone(), self.scattering.clone())
    }

    /// ‖M − M†‖_F.
    pub fn hermiticity_residual(&self) -> f64 {
        (&self.hamiltonian - self.hamiltonian.adjoint())
            .norm()
            .as_f64()
    }

    /// ‖S†S − I‖_F.
    pub fn unitarity_residual(&self) -> f64 {
        let m = self.scattering.nrows();
        (self.scattering.adjoint() * &self.scattering - identity::<T>(m))
            .norm()
            .as_f64()
    }
}
