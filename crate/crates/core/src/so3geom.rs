// SPDX-License-Identifier: Apache-2.0

//! Euler-angle chart of SO(3), embeddings, Gram matrices of the reference
//! metric `g` and of the field metric `g^f`, and the vertical/horizontal split
//! of gradients.
//!
//! Conventions: `R(φ, θ, ψ) = R_3(φ) R_2(θ) R_3(ψ)` with `R_3` the rotation
//! about `e_3` and `R_2` the rotation about `e_2`. The reference metric `g` is
//! the bi-invariant one with Gram matrix `gram(θ, 1, 1)` in `(φ, θ, ψ)`
//! coordinates; the fibers `ψ ↦ P R_3(ψ)` are unit-speed circles of length 2π.

use std::f64::consts::{PI, TAU};
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Points with `θ` closer than this to `0` or `π` are outside the chart.
pub const CHART_MARGIN: f64 = 1e-8;

/// Reduce an angle to `[-π, π)`.
pub fn wrap_angle(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(TAU) - PI;
    if y >= PI {
        y - TAU
    } else {
        y
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EulerPoint {
    phi: f64,
    theta: f64,
    psi: f64,
}

impl EulerPoint {
    /// Reduces `(φ, θ, ψ)` to the chart ranges, using
    /// `R(φ, 2π-θ, ψ) = R(φ+π, θ, ψ+π)` when `θ ∉ [0, π]`.
    pub fn new(phi: f64, theta: f64, psi: f64) -> Result<Self> {
        if !(phi.is_finite() && theta.is_finite() && psi.is_finite()) {
            return Err(Error::Chart { theta });
        }
        let mut t = theta.rem_euclid(TAU);
        let (mut p, mut q) = (phi, psi);
        if t > PI {
            t = TAU - t;
            p += PI;
            q += PI;
        }
        if t < CHART_MARGIN || t > PI - CHART_MARGIN {
            return Err(Error::Chart { theta });
        }
        Ok(Self {
            phi: wrap_angle(p),
            theta: t,
            psi: wrap_angle(q),
        })
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
    pub fn theta(&self) -> f64 {
        self.theta
    }
    pub fn psi(&self) -> f64 {
        self.psi
    }

    /// The point `P R_3(δ)`, i.e. a shift along the fiber.
    pub fn fiber_shift(&self, delta: f64) -> Self {
        Self {
            psi: wrap_angle(self.psi + delta),
            ..*self
        }
    }

    pub fn to_matrix(&self) -> RotationMatrix {
        euler_to_matrix(self)
    }

    /// Euler angles of a rotation matrix in the chart.
    pub fn from_matrix(m: &RotationMatrix) -> Result<Self> {
        let a = &m.0;
        let theta = a[2][2].clamp(-1.0, 1.0).acos();
        let phi = a[1][2].atan2(a[0][2]);
        let psi = a[2][1].atan2(-a[2][0]);
        Self::new(phi, theta, psi)
    }
}

/// 3×3 rotation matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RotationMatrix(pub [[f64; 3]; 3]);

impl RotationMatrix {
    pub const IDENTITY: Self = Self([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);

    /// Rotation by `a` about `e_3`.
    pub fn r3(a: f64) -> Self {
        let (s, c) = a.sin_cos();
        Self([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
    }

    /// Rotation by `a` about `e_2`.
    pub fn r2(a: f64) -> Self {
        let (s, c) = a.sin_cos();
        Self([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])
    }

    pub fn transpose(&self) -> Self {
        let a = &self.0;
        let mut t = [[0.0; 3]; 3];
        for (i, row) in t.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = a[j][i];
            }
        }
        Self(t)
    }

    pub fn column(&self, j: usize) -> [f64; 3] {
        [self.0[0][j], self.0[1][j], self.0[2][j]]
    }

    pub fn apply(&self, v: [f64; 3]) -> [f64; 3] {
        let a = &self.0;
        [
            a[0][0] * v[0] + a[0][1] * v[1] + a[0][2] * v[2],
            a[1][0] * v[0] + a[1][1] * v[1] + a[1][2] * v[2],
            a[2][0] * v[0] + a[2][1] * v[1] + a[2][2] * v[2],
        ]
    }

    pub fn det(&self) -> f64 {
        det3(&self.0)
    }

    /// `‖PᵀP - I‖_∞`.
    pub fn orthogonality_defect(&self) -> f64 {
        let p = self.transpose() * *self;
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((p.0[i][j] - target).abs());
            }
        }
        worst
    }
}

impl Mul for RotationMatrix {
    type Output = RotationMatrix;
    fn mul(self, rhs: Self) -> Self {
        let (a, b) = (&self.0, &rhs.0);
        let mut c = [[0.0; 3]; 3];
        for (i, row) in c.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
            }
        }
        RotationMatrix(c)
    }
}

fn det3(a: &[[f64; 3]; 3]) -> f64 {
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

pub fn euler_to_matrix(p: &EulerPoint) -> RotationMatrix {
    RotationMatrix::r3(p.phi) * RotationMatrix::r2(p.theta) * RotationMatrix::r3(p.psi)
}

/// `(P e_2, P e_3) ∈ R^6`: the unit-tangent-bundle picture of SO(3), with the
/// fiber `P R_3(ψ)` rotating the first three coordinates in a unit circle.
///
/// The Euclidean metric of `R^6` pulled back by this map is *not* the
/// bi-invariant metric `g` off the fibers; area is measured with
/// [`isometric_embed`].
pub fn embed(p: &RotationMatrix) -> [f64; 6] {
    let (u, v) = (p.column(1), p.column(2));
    [u[0], u[1], u[2], v[0], v[1], v[2]]
}

/// `P / √2 ∈ R^9`, an isometric embedding of `(SO(3), g)`.
pub fn isometric_embed(p: &RotationMatrix) -> [f64; 9] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let a = &p.0;
    [
        a[0][0] * s,
        a[0][1] * s,
        a[0][2] * s,
        a[1][0] * s,
        a[1][1] * s,
        a[1][2] * s,
        a[2][0] * s,
        a[2][1] * s,
        a[2][2] * s,
    ]
}

/// `π(P) = P e_3 ∈ S²`.
pub fn project(p: &RotationMatrix) -> [f64; 3] {
    p.column(2)
}

/// Symmetric 3×3 matrix in the `(φ, θ, ψ)` coordinate basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GramMatrix(pub [[f64; 3]; 3]);

impl GramMatrix {
    pub fn det(&self) -> f64 {
        det3(&self.0)
    }

    /// Adjugate inverse.
    pub fn inverse(&self) -> GramMatrix {
        let a = &self.0;
        let d = self.det();
        let cof = |r0: usize, r1: usize, c0: usize, c1: usize| a[r0][c0] * a[r1][c1] - a[r0][c1] * a[r1][c0];
        let inv = [
            [cof(1, 2, 1, 2) / d, -cof(0, 2, 1, 2) / d, cof(0, 1, 1, 2) / d],
            [-cof(1, 2, 0, 2) / d, cof(0, 2, 0, 2) / d, -cof(0, 1, 0, 2) / d],
            [cof(1, 2, 0, 1) / d, -cof(0, 2, 0, 1) / d, cof(0, 1, 0, 1) / d],
        ];
        GramMatrix(inv)
    }

    /// `uᵀ G v`.
    pub fn form(&self, u: [f64; 3], v: [f64; 3]) -> f64 {
        let mut acc = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                acc += u[i] * self.0[i][j] * v[j];
            }
        }
        acc
    }

    pub fn apply(&self, v: [f64; 3]) -> [f64; 3] {
        let a = &self.0;
        [
            a[0][0] * v[0] + a[0][1] * v[1] + a[0][2] * v[2],
            a[1][0] * v[0] + a[1][1] * v[1] + a[1][2] * v[2],
            a[2][0] * v[0] + a[2][1] * v[1] + a[2][2] * v[2],
        ]
    }
}

/// Gram matrix of the field metric in Euler coordinates:
///
/// ```text
/// ⎡ ξ² sin²θ + s² cos²θ   0    s² cos θ ⎤
/// ⎢ 0                     ξ²   0        ⎥
/// ⎣ s² cos θ              0    s²       ⎦
/// ```
///
/// `gram(θ, 1, 1)` is the reference metric `g`.
pub fn gram(theta: f64, xi: f64, s: f64) -> GramMatrix {
    let (sn, cs) = theta.sin_cos();
    let (x2, s2) = (xi * xi, s * s);
    GramMatrix([
        [x2 * sn * sn + s2 * cs * cs, 0.0, s2 * cs],
        [0.0, x2, 0.0],
        [s2 * cs, 0.0, s2],
    ])
}

/// Vertical/horizontal split of a gradient.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GradientSplit {
    /// `∂_ψ f = ⟨∇f, V⟩`.
    pub vertical: f64,
    /// `‖∇^H f‖` in the reference metric.
    pub horizontal_norm: f64,
    /// `‖∇f‖_{g^f} = √(ξ²‖∇^H f‖² + s²(∂_ψ f)²)`.
    pub gf_norm: f64,
}

/// Splits the coordinate gradient `(∂_φ f, ∂_θ f, ∂_ψ f)` at colatitude `θ`.
pub fn decompose_gradient(grad: [f64; 3], theta: f64, xi: f64, s: f64) -> Result<GradientSplit> {
    if !(theta > 0.0 && theta < PI) {
        return Err(Error::Chart { theta });
    }
    let ginv = gram(theta, 1.0, 1.0).inverse();
    let full = ginv.form(grad, grad);
    let vertical = grad[2];
    let mut h2 = full - vertical * vertical;
    if h2 < 0.0 {
        if h2 < -1e-9 * full.max(1.0) {
            return Err(Error::Inconsistency {
                op: "decompose_gradient",
                detail: format!("negative horizontal norm² {h2}"),
            });
        }
        h2 = 0.0;
    }
    let gf2 = xi * xi * h2 + s * s * vertical * vertical;
    Ok(GradientSplit {
        vertical,
        horizontal_norm: h2.sqrt(),
        gf_norm: gf2.sqrt(),
    })
}

/// Components of `∇^H f` in the orthonormal horizontal frame
/// `(∂_θ, (∂_φ - cos θ ∂_ψ)/sin θ)`.
pub fn horizontal_components(grad: [f64; 3], theta: f64) -> [f64; 2] {
    let (sn, cs) = theta.sin_cos();
    [grad[1], (grad[0] - cs * grad[2]) / sn]
}

/// Spherical chart coordinates `(φ, θ)` of a unit vector.
pub fn sphere_coords(x: [f64; 3]) -> Result<(f64, f64)> {
    let norm = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    let theta = (x[2] / norm).clamp(-1.0, 1.0).acos();
    if !(CHART_MARGIN..=PI - CHART_MARGIN).contains(&theta) {
        return Err(Error::Chart { theta });
    }
    Ok((x[1].atan2(x[0]), theta))
}

/// A chart point `P(x)` on the fiber over `x`, with `ψ = 0`.
pub fn fiber_base(x: [f64; 3]) -> Result<EulerPoint> {
    let (phi, theta) = sphere_coords(x)?;
    EulerPoint::new(phi, theta, 0.0)
}

/// `k` equally spaced points `P(x) R_3(2πj/k)` on the fiber over `x`.
pub fn fiber_points(x: [f64; 3], k: usize) -> Result<Vec<EulerPoint>> {
    if k == 0 {
        return Err(Error::domain("fiber_points", "k must be positive"));
    }
    let base = fiber_base(x)?;
    Ok((0..k).map(|j| base.fiber_shift(TAU * j as f64 / k as f64)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    fn random_point(rng: &mut ChaCha8Rng) -> EulerPoint {
        EulerPoint::new(
            rng.random_range(-PI..PI),
            rng.random_range(0.01..PI - 0.01),
            rng.random_range(-PI..PI),
        )
        .unwrap()
    }

    #[test]
    fn euler_matrix_examples() {
        let m = EulerPoint::new(0.0, PI / 2.0, 0.0).unwrap().to_matrix();
        assert!(close(&m.column(0), &[0.0, 0.0, -1.0], 1e-15));
        assert!(close(&m.column(1), &[0.0, 1.0, 0.0], 1e-15));
        assert!(close(&m.column(2), &[1.0, 0.0, 0.0], 1e-15));

        let tiny = EulerPoint::new(1e-9, 1e-7, -1e-9).unwrap().to_matrix();
        assert!(tiny.orthogonality_defect() < 1e-14);
        for i in 0..3 {
            assert!(close(&tiny.column(i), &RotationMatrix::IDENTITY.column(i), 1e-6));
        }

        let a = euler_to_matrix(&EulerPoint { phi: PI, theta: 0.8, psi: 0.3 });
        let b = euler_to_matrix(&EulerPoint { phi: -PI, theta: 0.8, psi: 0.3 });
        for i in 0..3 {
            assert!(close(&a.column(i), &b.column(i), 1e-15));
        }
    }

    #[test]
    fn chart_reduction_and_rejection() {
        let p = EulerPoint::new(7.0, 0.5, -4.0).unwrap();
        assert!(p.phi() >= -PI && p.phi() < PI && p.psi() >= -PI && p.psi() < PI);
        // θ beyond π folds back onto the chart with the same matrix.
        let q = EulerPoint::new(0.2, 4.0, 0.1).unwrap();
        let direct = RotationMatrix::r3(0.2) * RotationMatrix::r2(4.0) * RotationMatrix::r3(0.1);
        for i in 0..3 {
            assert!(close(&q.to_matrix().column(i), &direct.column(i), 1e-14));
        }
        assert!(EulerPoint::new(0.0, 0.0, 0.0).is_err());
        assert!(EulerPoint::new(0.0, PI, 0.0).is_err());
        assert!(EulerPoint::new(0.0, 1e-9, 0.0).is_err());
    }

    #[test]
    fn matrix_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let p = random_point(&mut rng);
            let back = EulerPoint::from_matrix(&p.to_matrix()).unwrap();
            assert!((p.phi() - back.phi()).abs() < 1e-10);
            assert!((p.theta() - back.theta()).abs() < 1e-10);
            assert!((p.psi() - back.psi()).abs() < 1e-10);
        }
    }

    #[test]
    fn orthogonality_on_grid() {
        let n = 10;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let p = EulerPoint::new(
                        -PI + TAU * i as f64 / n as f64,
                        (j as f64 + 0.5) * PI / n as f64,
                        -PI + TAU * k as f64 / n as f64,
                    )
                    .unwrap();
                    let m = p.to_matrix();
                    assert!(m.orthogonality_defect() <= 1e-12);
                    assert!((m.det() - 1.0).abs() <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn embedding_examples() {
        assert_eq!(embed(&RotationMatrix::IDENTITY), [0.0, 1.0, 0.0, 0.0, 0.0, 1.0]);
        let e = embed(&RotationMatrix::r3(PI / 2.0));
        assert!(close(&e, &[-1.0, 0.0, 0.0, 0.0, 0.0, 1.0], 1e-15));
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let e = embed(&random_point(&mut rng).to_matrix());
            assert!((e.iter().map(|v| v * v).sum::<f64>() - 2.0).abs() < 1e-13);
        }
    }

    #[test]
    fn projection_examples() {
        assert_eq!(project(&RotationMatrix::IDENTITY), [0.0, 0.0, 1.0]);
        assert!(close(&project(&RotationMatrix::r2(PI / 2.0)), &[1.0, 0.0, 0.0], 1e-15));
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let p = random_point(&mut rng);
            let base = project(&p.to_matrix());
            for &d in &[0.3, 2.0, -1.1] {
                assert!(close(&project(&p.fiber_shift(d).to_matrix()), &base, 1e-14));
            }
        }
    }

    fn chord_vs_metric(embedding: impl Fn(&RotationMatrix) -> Vec<f64>, h: f64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let mut worst: f64 = 0.0;
        for _ in 0..100 {
            let p = random_point(&mut rng);
            let dir: [f64; 3] = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
            let delta = dir.map(|v| v * h);
            let q = EulerPoint::new(p.phi() + delta[0], p.theta() + delta[1], p.psi() + delta[2]).unwrap();
            let (a, b) = (embedding(&p.to_matrix()), embedding(&q.to_matrix()));
            let chord = a.iter().zip(&b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
            let metric = gram(p.theta(), 1.0, 1.0).form(delta, delta).sqrt();
            worst = worst.max((chord - metric).abs() / metric);
        }
        worst
    }

    #[test]
    fn isometric_embedding_matches_reference_metric() {
        for &h in &[1e-3, 1e-4] {
            let err = chord_vs_metric(|m| isometric_embed(m).to_vec(), h);
            assert!(err < 10.0 * h, "h={h}: {err}");
        }
    }

    #[test]
    fn column_embedding_is_not_isometric_off_fibers() {
        assert!(chord_vs_metric(|m| embed(m).to_vec(), 1e-4) > 0.01);
    }

    #[test]
    fn gram_examples() {
        let g = gram(PI / 2.0, 3.0, 2.0);
        let want = [[9.0, 0.0, 0.0], [0.0, 9.0, 0.0], [0.0, 0.0, 4.0]];
        for i in 0..3 {
            assert!(close(&g.0[i], &want[i], 1e-14));
        }
        let theta = 0.7f64;
        let g = gram(theta, 1.0, 1.0);
        assert!((g.0[0][0] - 1.0).abs() < 1e-15 && g.0[1][1] == 1.0 && g.0[2][2] == 1.0);
        assert!((g.0[0][2] - theta.cos()).abs() < 1e-15);
        let (xi, s) = (2.5f64, 1.5f64);
        let d = gram(theta, xi, s).det();
        let want = xi.powi(4) * s * s * theta.sin().powi(2);
        assert!((d - want).abs() < 1e-12 * want);
        // Inverse.
        let gi = gram(theta, xi, s).inverse();
        let e = gram(theta, xi, s).apply(gi.apply([1.0, 2.0, 3.0]));
        assert!(close(&e, &[1.0, 2.0, 3.0], 1e-12));
    }

    #[test]
    fn decomposition_examples() {
        let (xi, s) = (3.0, 2.0);
        let v = decompose_gradient([0.0, 0.0, 1.5], PI / 2.0, xi, s).unwrap();
        assert!((v.vertical - 1.5).abs() < 1e-15 && v.horizontal_norm < 1e-7);
        assert!((v.gf_norm - 3.0).abs() < 1e-12);
        // Off the equator the covector dψ has a horizontal part along (∂_φ - cos θ ∂_ψ)/sin θ.
        let theta = 0.9f64;
        let v = decompose_gradient([0.0, 0.0, 1.5], theta, xi, s).unwrap();
        assert!((v.horizontal_norm - 1.5 / theta.tan()).abs() < 1e-12);
        for &theta in &[0.2, 1.0, 2.9] {
            let h = decompose_gradient([0.0, -0.7, 0.0], theta, xi, s).unwrap();
            assert_eq!(h.vertical, 0.0);
            assert!((h.horizontal_norm - 0.7).abs() < 1e-14);
            assert!((h.gf_norm - xi * 0.7).abs() < 1e-13);
        }
        assert!(decompose_gradient([1.0, 0.0, 0.0], 0.0, xi, s).is_err());
    }

    #[test]
    fn split_matches_field_metric_quadratic_form() {
        // ‖∇f‖²_{g^f} = (G⁻¹∇)ᵀ Σ_{(ξ,s)} (G⁻¹∇) with G the reference Gram matrix.
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..100 {
            let theta = rng.random_range(0.05..PI - 0.05);
            let grad = [rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)];
            let (xi, s) = (rng.random_range(0.5..5.0), rng.random_range(0.0..4.0));
            let split = decompose_gradient(grad, theta, xi, s).unwrap();
            let u = gram(theta, 1.0, 1.0).inverse().apply(grad);
            let direct = gram(theta, xi, s).form(u, u);
            let via = xi * xi * split.horizontal_norm.powi(2) + s * s * split.vertical.powi(2);
            assert!((direct - via).abs() <= 1e-10 * direct.max(1.0));
            assert!((split.gf_norm.powi(2) - via).abs() <= 1e-12 * via.max(1.0));
            let [h1, h2] = horizontal_components(grad, theta);
            assert!(((h1 * h1 + h2 * h2).sqrt() - split.horizontal_norm).abs() < 1e-10);
        }
    }

    #[test]
    fn vertical_direction_is_orthogonal_to_its_complement_in_both_metrics() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let v = [0.0, 0.0, 1.0];
        for _ in 0..50 {
            let theta = rng.random_range(0.05..PI - 0.05);
            let (xi, s) = (rng.random_range(0.5..5.0), rng.random_range(0.1..4.0));
            let g = gram(theta, 1.0, 1.0);
            let gf = gram(theta, xi, s);
            // g-orthonormal horizontal frame.
            let e1 = [0.0, 1.0, 0.0];
            let e2 = [1.0 / theta.sin(), 0.0, -theta.cos() / theta.sin()];
            for e in [e1, e2] {
                assert!(g.form(v, e).abs() < 1e-12);
                assert!(gf.form(v, e).abs() < 1e-10);
                assert!((g.form(e, e) - 1.0).abs() < 1e-12);
                assert!((gf.form(e, e) - xi * xi).abs() < 1e-10 * xi * xi);
            }
            assert!((gf.form(v, v) - s * s).abs() < 1e-12);
            // Quadratic form split for an arbitrary vector.
            let (a, b, c) = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            let u = [a * e1[0] + b * e2[0] + c * v[0], a * e1[1] + b * e2[1], a * e1[2] + b * e2[2] + c];
            let want = xi * xi * (a * a + b * b) + s * s * c * c;
            assert!((gf.form(u, u) - want).abs() < 1e-10 * want.max(1.0));
        }
    }

    #[test]
    fn fibers() {
        let x = [0.3, -0.5, 0.812];
        let n = (x.iter().map(|v| v * v).sum::<f64>()).sqrt();
        let x = x.map(|v| v / n);
        let pts = fiber_points(x, 4).unwrap();
        assert_eq!(pts.len(), 4);
        for p in &pts {
            assert!(close(&project(&p.to_matrix()), &x, 1e-14));
        }
        for w in pts.windows(2) {
            assert!((wrap_angle(w[1].psi() - w[0].psi()) - PI / 2.0).abs() < 1e-14);
        }
        // Embedded fiber: first three coordinates on a unit circle orthogonal to x; last three fixed.
        let pts = fiber_points(x, 16).unwrap();
        for p in &pts {
            let e = embed(&p.to_matrix());
            assert!(close(&e[3..], &x, 1e-14));
            let r = (e[0] * e[0] + e[1] * e[1] + e[2] * e[2]).sqrt();
            assert!((r - 1.0).abs() < 1e-14);
            assert!((e[0] * x[0] + e[1] * x[1] + e[2] * x[2]).abs() < 1e-14);
        }
        assert!(fiber_points([0.0, 0.0, 1.0], 4).is_err());
    }
}
