//! Diagnostics over compiled models.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::compile::{compile_beamsplitter_only, compile_passive, Network};
use crate::error::{Error, Result};
use crate::linalg::{condition_number, eigenvalues, identity, Factorization};
use crate::model::{Mode, StateSpaceModel};
use crate::netlist::{BeamsplitterParams, ComponentSpec, LinkSpec, NetworkSpec, PortRef};
use crate::scalar::{c, CMatrix, Scalar};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_UNITARITY_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    pub name: &'static str,
    /// Frobenius norm of the residual matrix.
    pub value: f64,
    /// Magnitude of the terms that cancel; the check passes when
    /// `value <= tolerance * scale`.
    pub scale: f64,
    pub passed: bool,
}

#[derive(Debug, Clone)]
pub struct RealizabilityReport<T: Scalar> {
    /// F + F† + H†H
    pub dissipation: Residual,
    /// G + H†K
    pub input_coupling: Residual,
    /// K†K − I
    pub unitarity: Residual,
    /// M − M† for M = i(F + ½H†H)
    pub hermiticity: Residual,
    pub hamiltonian: CMatrix<T>,
    /// Reported, not judged.
    pub spectral_abscissa: f64,
    pub tolerance: f64,
}

impl<T: Scalar> RealizabilityReport<T> {
    pub fn residuals(&self) -> [&Residual; 4] {
        [
            &self.dissipation,
            &self.input_coupling,
            &self.unitarity,
            &self.hermiticity,
        ]
    }

    pub fn passed(&self) -> bool {
        self.residuals().iter().all(|r| r.passed)
    }
}

fn residual(name: &'static str, value: f64, scale: f64, tolerance: f64) -> Residual {
    let scale = scale.max(1.0);
    Residual {
        name,
        value,
        scale,
        passed: value <= tolerance * scale,
    }
}

pub fn check_realizability<T: Scalar>(
    model: &StateSpaceModel<T>,
    tolerance: f64,
) -> Result<RealizabilityReport<T>> {
    if model.mode != Mode::PassiveAnnihilation {
        return Err(Error::Unsupported(
            "realizability check applies to passive annihilation-only models".into(),
        ));
    }
    let (f, g, h, k) = (&model.f, &model.g, &model.h, &model.k);
    let hh = h.adjoint() * h;
    let nf = f.norm().as_f64();
    let nh2 = hh.norm().as_f64();
    let nk = k.norm().as_f64();

    let dissipation = (f + f.adjoint() + &hh).norm().as_f64();
    let input = (g + h.adjoint() * k).norm().as_f64();
    let unitary = (k.adjoint() * k - identity::<T>(k.nrows())).norm().as_f64();
    let hamiltonian = (f + &hh * c(T::lit(0.5), T::zero())) * c(T::zero(), T::one());
    let herm = (&hamiltonian - hamiltonian.adjoint()).norm().as_f64();

    Ok(RealizabilityReport {
        dissipation: residual("F+F^dag+H^dag H", dissipation, 2.0 * nf + nh2, tolerance),
        input_coupling: residual(
            "G+H^dag K",
            input,
            g.norm().as_f64() + h.norm().as_f64() * nk,
            tolerance,
        ),
        unitarity: residual("K^dag K-I", unitary, nk * nk, tolerance),
        hermiticity: residual("M-M^dag", herm, 2.0 * nf + nh2, tolerance),
        hamiltonian,
        spectral_abscissa: stability(model),
        tolerance,
    })
}

/// Spectral abscissa max Re λ(F); `-inf` when there are no modes.
pub fn stability<T: Scalar>(model: &StateSpaceModel<T>) -> f64 {
    eigenvalues(&model.f)
        .iter()
        .map(|z| z.re.as_f64())
        .fold(f64::NEG_INFINITY, f64::max)
}

/// T(iω) = K + H(iωI − F)⁻¹G.
pub fn transfer_function<T: Scalar>(model: &StateSpaceModel<T>, omega: f64) -> Result<CMatrix<T>> {
    let n = model.f.nrows();
    if n == 0 {
        return Ok(model.k.clone());
    }
    let resolvent = identity::<T>(n) * c(T::zero(), T::lit(omega)) - &model.f;
    let condition = condition_number(&resolvent);
    if !condition.is_finite() || condition > T::SINGULAR_CONDITION {
        return Err(Error::SingularFrequency { omega, condition });
    }
    let x = Factorization::new(&resolvent).solve(&model.g)?;
    Ok(&model.k + &model.h * x)
}

pub fn dc_gain<T: Scalar>(model: &StateSpaceModel<T>) -> Result<CMatrix<T>> {
    transfer_function(model, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridSpacing {
    Linear,
    Log,
}

/// `points` frequencies from `start` to `stop` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmegaGrid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub spacing: GridSpacing,
}

impl Default for OmegaGrid {
    fn default() -> Self {
        OmegaGrid {
            start: -10.0,
            stop: 10.0,
            points: 101,
            spacing: GridSpacing::Linear,
        }
    }
}

impl OmegaGrid {
    pub fn linear(start: f64, stop: f64, points: usize) -> Self {
        OmegaGrid {
            start,
            stop,
            points,
            spacing: GridSpacing::Linear,
        }
    }

    pub fn log(self) -> Result<Self> {
        if self.start <= 0.0 || self.stop <= 0.0 {
            return Err(Error::Domain("log grid needs positive bounds".into()));
        }
        Ok(OmegaGrid {
            spacing: GridSpacing::Log,
            ..self
        })
    }

    pub fn frequencies(&self) -> Vec<f64> {
        let (a, b) = match self.spacing {
            GridSpacing::Linear => (self.start, self.stop),
            GridSpacing::Log => (self.start.log10(), self.stop.log10()),
        };
        let at = |i: usize| {
            if self.points == 1 {
                a
            } else if i + 1 == self.points {
                b
            } else {
                a + (b - a) * i as f64 / (self.points - 1) as f64
            }
        };
        (0..self.points)
            .map(|i| match self.spacing {
                GridSpacing::Linear => at(i),
                GridSpacing::Log => 10f64.powf(at(i)),
            })
            .collect()
    }
}

impl FromStr for OmegaGrid {
    type Err = String;

    /// `start:stop:count`
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, n] = parts.as_slice() else {
            return Err(format!("expected start:stop:count, got '{s}'"));
        };
        let start: f64 = a.trim().parse().map_err(|_| format!("bad start '{a}'"))?;
        let stop: f64 = b.trim().parse().map_err(|_| format!("bad stop '{b}'"))?;
        let points: usize = n.trim().parse().map_err(|_| format!("bad count '{n}'"))?;
        if !start.is_finite() || !stop.is_finite() {
            return Err("grid bounds must be finite".into());
        }
        if points == 0 {
            return Err("grid needs at least one point".into());
        }
        Ok(OmegaGrid::linear(start, stop, points))
    }
}

#[derive(Debug, Clone)]
pub struct FrequencyResponse<T: Scalar> {
    pub frequencies: Vec<f64>,
    pub values: Vec<CMatrix<T>>,
}

impl<T: Scalar> FrequencyResponse<T> {
    pub fn evaluate(model: &StateSpaceModel<T>, grid: &OmegaGrid) -> Result<Self> {
        let frequencies = grid.frequencies();
        let values = frequencies
            .iter()
            .map(|&w| transfer_function(model, w))
            .collect::<Result<Vec<_>>>()?;
        Ok(FrequencyResponse {
            frequencies,
            values,
        })
    }

    /// max over the grid of ‖T†T − I‖_F.
    pub fn max_unitarity_residual(&self) -> f64 {
        self.values
            .iter()
            .map(|t| (t.adjoint() * t - identity::<T>(t.ncols())).norm().as_f64())
            .fold(0.0, f64::max)
    }

    /// Columns ω, then Re/Im of each entry, row-major.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("omega");
        if let Some(first) = self.values.first() {
            for i in 1..=first.nrows() {
                for j in 1..=first.ncols() {
                    let _ = write!(out, ",re_T{i}_{j},im_T{i}_{j}");
                }
            }
        }
        out.push('\n');
        for (w, t) in self.frequencies.iter().zip(&self.values) {
            let _ = write!(out, "{w:.16e}");
            for i in 0..t.nrows() {
                for j in 0..t.ncols() {
                    let z = t[(i, j)];
                    let _ = write!(out, ",{:.16e},{:.16e}", z.re.as_f64(), z.im.as_f64());
                }
            }
            out.push('\n');
        }
        out
    }
}

fn two_port(middle: ComponentSpec, a: &str, b: &str) -> NetworkSpec {
    let name = middle.name.clone();
    let port = |p: &str, dir| PortRef::named(name.clone(), p, dir);
    use crate::netlist::Dir::{In, Out};
    NetworkSpec::new(
        vec![
            ComponentSpec::source("s1"),
            ComponentSpec::source("s2"),
            middle,
            ComponentSpec::sink("d1"),
            ComponentSpec::sink("d2"),
        ],
        vec![
            LinkSpec::new(PortRef::field("s1", Out), port(a, In)),
            LinkSpec::new(PortRef::field("s2", Out), port(b, In)),
            LinkSpec::new(port(a, Out), PortRef::field("d1", In)),
            LinkSpec::new(port(b, Out), PortRef::field("d2", In)),
        ],
    )
}

/// Two-mirror cavity with couplings κ̃/ε, κ̄/ε and zero detuning, each
/// mirror wired straight from a source to a sink.
pub fn scaled_cavity(kappa_tilde: f64, kappa_bar: f64, eps: f64) -> NetworkSpec {
    two_port(
        ComponentSpec::cavity("c", vec![kappa_tilde / eps, kappa_bar / eps], 0.0),
        "m1",
        "m2",
    )
}

/// Single beamsplitter with couplings (κ̃, κ̄) wired straight through.
pub fn straight_beamsplitter(kappa_tilde: f64, kappa_bar: f64) -> NetworkSpec {
    two_port(
        ComponentSpec::beamsplitter(
            "b",
            BeamsplitterParams::Couplings {
                tilde: kappa_tilde,
                bar: kappa_bar,
            },
        ),
        "a",
        "b",
    )
}

/// T_ε(iω) of the scaled two-mirror cavity for each ε, compiled through the
/// full pipeline.
pub fn beamsplitter_limit_oracle<T: Scalar>(
    kappa_tilde: f64,
    kappa_bar: f64,
    eps: &[f64],
    omega: f64,
) -> Result<Vec<CMatrix<T>>> {
    eps.iter()
        .map(|&e| {
            if e <= 0.0 {
                return Err(Error::Domain(format!("epsilon must be positive, got {e}")));
            }
            let net = Network::<T>::elaborate(&scaled_cavity(kappa_tilde, kappa_bar, e))?;
            transfer_function(&compile_passive(&net)?, omega)
        })
        .collect()
}

/// The static limit of [`beamsplitter_limit_oracle`]: scattering matrix of
/// the beamsplitter with the same couplings.
pub fn beamsplitter_limit<T: Scalar>(kappa_tilde: f64, kappa_bar: f64) -> Result<CMatrix<T>> {
    let net = Network::<T>::elaborate(&straight_beamsplitter(kappa_tilde, kappa_bar))?;
    Ok(compile_beamsplitter_only(&net)?.scattering)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;
    use crate::model::StateSpaceModel;
    use crate::netlist::parse_netlist;
    use crate::structmat::compute_bhat;
    use nalgebra::DMatrix;

    fn compiled(text: &str) -> StateSpaceModel<f64> {
        let net = Network::<f64>::elaborate(&parse_netlist(text).unwrap()).unwrap();
        compile_passive(&net).unwrap()
    }

    const CAVITY: &str =
        "source s\ncavity c kappa=[1]\nsink d\nlink s.out -> c.m1.in\nlink c.m1.out -> d.in\n";

    #[test]
    fn single_cavity_dc_gain_and_allpass() {
        let m = compiled(CAVITY);
        assert!((dc_gain(&m).unwrap()[(0, 0)] - c(-1.0, 0.0)).norm() < 1e-15);
        let r = FrequencyResponse::evaluate(&m, &OmegaGrid::default()).unwrap();
        assert_eq!(r.values.len(), 101);
        assert!(r.max_unitarity_residual() < 1e-12);
        assert_eq!(stability(&m), -0.5);
    }

    #[test]
    fn single_cavity_report_exact() {
        let report = check_realizability(&compiled(CAVITY), DEFAULT_TOLERANCE).unwrap();
        assert!(report.passed());
        assert_eq!(report.dissipation.value, 0.0);
    }

    #[test]
    fn perturbed_model_fails() {
        let mut m = compiled(CAVITY);
        m.f *= c(1.01, 0.0);
        let report = check_realizability(&m, DEFAULT_TOLERANCE).unwrap();
        assert!((report.dissipation.value - 0.01).abs() < 1e-12);
        assert!(!report.passed());
    }

    #[test]
    fn passthrough_transfer_is_k() {
        let m = compiled("source s\nsink d\nlink s.out -> d.in\n");
        assert_eq!(transfer_function(&m, 3.0).unwrap(), m.k);
        assert_eq!(stability(&m), f64::NEG_INFINITY);
    }

    #[test]
    fn singular_frequency_detected() {
        let zero = CMatrix::<f64>::zeros(1, 1);
        let m = StateSpaceModel::passive(
            CMatrix::from_element(1, 1, c(0.0, 2.0)),
            zero.clone(),
            zero.clone(),
            CMatrix::identity(1, 1),
        );
        assert!(matches!(
            transfer_function(&m, 2.0),
            Err(Error::SingularFrequency { .. })
        ));
    }

    #[test]
    fn active_squeezer_is_unstable_and_unsupported() {
        let spec = parse_netlist(
            "source s\ncavity c kappa=[1] chi=1\nsink d\nlink s.out -> c.m1.in\nlink c.m1.out -> d.in\n",
        )
        .unwrap();
        let net = Network::<f64>::elaborate(&spec).unwrap();
        let m = crate::compile::compile_active(&net).unwrap();
        assert!((stability(&m) - 0.5).abs() < 1e-12);
        assert!(matches!(
            check_realizability(&m, DEFAULT_TOLERANCE),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn oracle_symmetric_dc_is_swap() {
        let swap = CMatrix::from_row_slice(
            2,
            2,
            &[c(0.0, 0.0), c(-1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)],
        );
        for t in beamsplitter_limit_oracle::<f64>(1.0, 1.0, &[1.0, 0.1, 0.01], 0.0).unwrap() {
            assert!(max_abs_diff(&t, &swap) < 1e-15);
        }
    }

    #[test]
    fn oracle_converges_linearly() {
        let limit = beamsplitter_limit::<f64>(1.0, 3.0).unwrap();
        let ts = beamsplitter_limit_oracle::<f64>(1.0, 3.0, &[1.0, 0.1, 0.01], 1.0).unwrap();
        let errs: Vec<f64> = ts.iter().map(|t| (t - &limit).norm()).collect();
        assert!(errs[0] > errs[1] && errs[1] > errs[2]);
        assert!((errs[1] / errs[2] - 10.0).abs() < 0.5);
    }

    #[test]
    fn oracle_limit_matches_bhat() {
        let bhat = compute_bhat(
            &DMatrix::from_element(1, 1, 1f64),
            &DMatrix::from_element(1, 1, 3f64.sqrt()),
        )
        .unwrap();
        let t = &beamsplitter_limit_oracle::<f64>(1.0, 3.0, &[1e-6], 1e-4).unwrap()[0];
        assert!(max_abs_diff(t, &crate::scalar::to_complex(&bhat)) < 1e-9);
    }

    #[test]
    fn grid_parsing() {
        let g: OmegaGrid = "-10:10:101".parse().unwrap();
        let w = g.frequencies();
        assert_eq!((w[0], w[50], w[100]), (-10.0, 0.0, 10.0));
        assert!("1:2".parse::<OmegaGrid>().is_err());
        let l = OmegaGrid::linear(0.1, 10.0, 3).log().unwrap().frequencies();
        assert!((l[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn csv_layout() {
        let r = FrequencyResponse::evaluate(&compiled(CAVITY), &OmegaGrid::linear(0.0, 1.0, 2))
            .unwrap();
        let csv = r.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "omega,re_T1_1,im_T1_1");
        assert_eq!(lines.len(), 3);
    }
}
