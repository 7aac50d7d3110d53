// SPDX-License-Identifier: Apache-2.0

//! Marching tetrahedra on an [`EulerGrid`]. Vertices are placed by linear
//! interpolation in chart coordinates and areas are measured after mapping to
//! `R^9` by [`isometric_embed`](crate::so3geom::isometric_embed).

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI, TAU};
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::grid::{EulerGrid, GridValues, RefinedBasis};
use crate::error::Result;
use crate::so3geom::{embed, EulerPoint, RotationMatrix};
use crate::spinfield::FieldRealization;

/// Which of the two mirror-image 6-tetrahedron splits of a cell to use.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TetSplit {
    /// Tetrahedra around the diagonal from corner `(0,0,0)` to `(1,1,1)`.
    #[default]
    Primary,
    /// Tetrahedra around the diagonal from `(1,0,0)` to `(0,1,1)`.
    Mirrored,
}

/// Corner `c = di + 2 dj + 4 dk` of a cell.
const KUHN: [[usize; 4]; 6] = [
    [0, 1, 3, 7],
    [0, 1, 5, 7],
    [0, 2, 3, 7],
    [0, 2, 6, 7],
    [0, 4, 5, 7],
    [0, 4, 6, 7],
];

fn tetrahedra(split: TetSplit) -> [[usize; 4]; 6] {
    match split {
        TetSplit::Primary => KUHN,
        TetSplit::Mirrored => KUHN.map(|t| t.map(|c| c ^ 1)),
    }
}

/// `R(φ, θ, ψ) / √2` flattened row-major, without reducing the angles.
#[inline]
fn chart_embed9(p: [f64; 3]) -> [f64; 9] {
    let (sf, cf) = p[0].sin_cos();
    let (st, ct) = p[1].sin_cos();
    let (sp, cp) = p[2].sin_cos();
    let k = std::f64::consts::FRAC_1_SQRT_2;
    [
        k * (cf * ct * cp - sf * sp),
        k * (-cf * ct * sp - sf * cp),
        k * cf * st,
        k * (sf * ct * cp + cf * sp),
        k * (-sf * ct * sp + cf * cp),
        k * sf * st,
        -k * st * cp,
        k * st * sp,
        k * ct,
    ]
}

#[inline]
fn triangle_area9(a: &[f64; 9], b: &[f64; 9], c: &[f64; 9]) -> f64 {
    let (mut uu, mut vv, mut uv) = (0.0, 0.0, 0.0);
    for n in 0..9 {
        let u = b[n] - a[n];
        let v = c[n] - a[n];
        uu += u * u;
        vv += v * v;
        uv += u * v;
    }
    0.5 * (uu * vv - uv * uv).max(0.0).sqrt()
}

/// How triangle areas are summed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AreaRule {
    /// Linear edge crossings and the Euclidean area of each triangle in `R^9`.
    Euclidean,
    /// Edge crossings from cubic Hermite interpolation of node values and
    /// gradients, and each triangle's area projected onto the level
    /// surface's tangent plane using the interpolated gradient. Falls back to
    /// [`AreaRule::Euclidean`] without gradients.
    #[default]
    Corrected,
}

struct Cell {
    values: [f64; 8],
    coords: [[f64; 3]; 8],
    grads: [[f64; 3]; 8],
}

/// Part of SO(3) a chart is responsible for in a two-chart cover.
///
/// The second chart measures the copy `P ↦ f(R₂(π/2) P)` of the field, which
/// moves the polar caps `|cos θ| > 1/√2` onto `|sin θ cos φ| > 1/√2`, away from
/// the coordinate singularities at `θ ∈ {0, π}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Patch {
    #[default]
    All,
    /// `|cos θ| ≤ 1/√2`.
    Equatorial,
    /// `|sin θ cos φ| > 1/√2`.
    Polar,
}

impl Patch {
    /// Left translation taking the caps of the first chart to the polar patch.
    pub fn rotation() -> EulerPoint {
        EulerPoint::new(0.0, FRAC_PI_2, 0.0).expect("interior chart point")
    }

    /// Non-positive exactly on the patch; 1-Lipschitz in `(φ, θ)`.
    fn excess(self, chart: [f64; 3]) -> f64 {
        let cp = chart[0].cos();
        let (st, ct) = chart[1].sin_cos();
        match self {
            Patch::All => f64::NEG_INFINITY,
            Patch::Equatorial => ct.abs() - FRAC_1_SQRT_2,
            Patch::Polar => FRAC_1_SQRT_2 - (st * cp).abs(),
        }
    }

    fn contains(self, chart: [f64; 3]) -> bool {
        self == Patch::All || self.excess(chart) <= 0.0
    }
}

fn cells(grid: &EulerGrid) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
    (0..grid.n_theta - 1).flat_map(move |j| (0..grid.n_phi).flat_map(move |i| (0..grid.n_psi).map(move |k| (i, j, k))))
}

fn load_cell(v: &GridValues, i: usize, j: usize, k: usize) -> Cell {
    let g = v.grid();
    let mut values = [0.0; 8];
    let mut coords = [[0.0; 3]; 8];
    let mut grads = [[0.0; 3]; 8];
    for c in 0..8 {
        let (di, dj, dk) = (c & 1, (c >> 1) & 1, (c >> 2) & 1);
        let (ii, jj, kk) = ((i + di) % g.n_phi, j + dj, (k + dk) % g.n_psi);
        values[c] = v.get(ii, jj, kk);
        // Unwrapped coordinates keep cells contiguous across the seam.
        coords[c] = [g.phi(i + di), g.theta(jj), g.psi(k + dk)];
        if let Some(d) = v.gradient(ii, jj, kk) {
            grads[c] = d;
        }
    }
    Cell { values, coords, grads }
}

/// Triangles of the level set inside one tetrahedron, as corner-index pairs
/// whose edges carry the vertices.
fn tet_triangles(vals: [f64; 4], t: f64, out: &mut Vec<[(usize, usize); 3]>) {
    let (mut inside, mut outside) = ([0usize; 4], [0usize; 4]);
    let (mut ni, mut no) = (0, 0);
    for (n, &v) in vals.iter().enumerate() {
        if v >= t {
            inside[ni] = n;
            ni += 1;
        } else {
            outside[no] = n;
            no += 1;
        }
    }
    match ni {
        1 => {
            let a = inside[0];
            out.push([(a, outside[0]), (a, outside[1]), (a, outside[2])]);
        }
        3 => {
            let a = outside[0];
            out.push([(a, inside[0]), (a, inside[1]), (a, inside[2])]);
        }
        2 => {
            let (a, b, c, d) = (inside[0], inside[1], outside[0], outside[1]);
            out.push([(a, c), (a, d), (b, d)]);
            out.push([(a, c), (b, d), (b, c)]);
        }
        _ => {}
    }
}

#[inline]
fn edge_lambda(cell: &Cell, a: usize, b: usize, t: f64) -> f64 {
    let (va, vb) = (cell.values[a], cell.values[b]);
    if vb == va {
        0.5
    } else {
        ((t - va) / (vb - va)).clamp(0.0, 1.0)
    }
}

#[inline]
fn lerp3(pa: [f64; 3], pb: [f64; 3], lam: f64) -> [f64; 3] {
    [pa[0] + lam * (pb[0] - pa[0]), pa[1] + lam * (pb[1] - pa[1]), pa[2] + lam * (pb[2] - pa[2])]
}

/// Point where `f = t` on the segment between two corners, by linear interpolation.
#[inline]
fn edge_point(cell: &Cell, a: usize, b: usize, t: f64) -> [f64; 3] {
    lerp3(cell.coords[a], cell.coords[b], edge_lambda(cell, a, b, t))
}

/// `|cos|` of the angle between the triangle's normal and `df` in the
/// reference metric at the triangle's colatitude.
fn normal_cosine(p: &[[f64; 3]; 3], df: [f64; 3]) -> f64 {
    let u = [p[1][0] - p[0][0], p[1][1] - p[0][1], p[1][2] - p[0][2]];
    let v = [p[2][0] - p[0][0], p[2][1] - p[0][1], p[2][2] - p[0][2]];
    let w = [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]];
    let c = ((p[0][1] + p[1][1] + p[2][1]) / 3.0).cos();
    // sin²θ times the inverse reference metric.
    let form = |a: [f64; 3], b: [f64; 3]| {
        a[0] * b[0] + a[2] * b[2] - c * (a[0] * b[2] + a[2] * b[0]) + (1.0 - c * c) * a[1] * b[1]
    };
    let den = (form(w, w) * form(df, df)).sqrt();
    if den == 0.0 {
        1.0
    } else {
        (form(w, df).abs() / den).min(1.0)
    }
}

/// Calls `emit` with the chart coordinates of every triangle of `{f = t}`.
fn march(v: &GridValues, t: f64, split: TetSplit, mut emit: impl FnMut(&[[f64; 3]; 3])) {
    let tets = tetrahedra(split);
    let mut tris = Vec::with_capacity(4);
    for (i, j, k) in cells(v.grid()) {
        let cell = load_cell(v, i, j, k);
        let (lo, hi) = cell.values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &x| (l.min(x), h.max(x)));
        if t < lo || t > hi {
            continue;
        }
        for tet in &tets {
            tris.clear();
            tet_triangles(tet.map(|c| cell.values[c]), t, &mut tris);
            for tri in &tris {
                let pts = tri.map(|(a, b)| edge_point(&cell, tet[a], tet[b], t));
                emit(&pts);
            }
        }
    }
}

/// Level-crossing parameter on the edge `a → b` from the cubic Hermite
/// interpolant of the values and directional derivatives at both ends,
/// started and bracketed at the linear estimate.
fn hermite_lambda(cell: &Cell, a: usize, b: usize, t: f64) -> f64 {
    let (pa, pb) = (cell.coords[a], cell.coords[b]);
    let d = [pb[0] - pa[0], pb[1] - pa[1], pb[2] - pa[2]];
    let dot = |g: [f64; 3]| g[0] * d[0] + g[1] * d[1] + g[2] * d[2];
    let (fa, fb) = (cell.values[a] - t, cell.values[b] - t);
    let (ma, mb) = (dot(cell.grads[a]), dot(cell.grads[b]));
    let p = |x: f64| {
        let (x2, x3) = (x * x, x * x * x);
        (2.0 * x3 - 3.0 * x2 + 1.0) * fa + (x3 - 2.0 * x2 + x) * ma + (3.0 * x2 - 2.0 * x3) * fb + (x3 - x2) * mb
    };
    let dp = |x: f64| {
        let x2 = x * x;
        (6.0 * x2 - 6.0 * x) * (fa - fb) + (3.0 * x2 - 4.0 * x + 1.0) * ma + (3.0 * x2 - 2.0 * x) * mb
    };
    let linear = edge_lambda(cell, a, b, t);
    if hermite_crossings(p, ma, mb, fa - fb) > 1 {
        return linear;
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    let lo_neg = fa < 0.0;
    let mut x = linear;
    for _ in 0..30 {
        let v = p(x);
        if v == 0.0 {
            return x;
        }
        if (v < 0.0) == lo_neg {
            lo = x;
        } else {
            hi = x;
        }
        let step = v / dp(x);
        let next = x - step;
        if step.abs() < 1e-13 {
            return next.clamp(lo, hi);
        }
        x = if step.is_finite() && next > lo && next < hi { next } else { 0.5 * (lo + hi) };
        if hi - lo < 1e-12 {
            break;
        }
    }
    x
}

/// Sign changes of the Hermite cubic `p` on `[0, 1]`, counted between its
/// critical points.
fn hermite_crossings(p: impl Fn(f64) -> f64, ma: f64, mb: f64, df: f64) -> usize {
    let (qa, qb, qc) = (6.0 * df + 3.0 * (ma + mb), -6.0 * df - 4.0 * ma - 2.0 * mb, ma);
    let mut knots = [0.0, 1.0, 1.0, 1.0];
    let mut nk = 1;
    if qa.abs() > 1e-14 * (qb.abs() + qc.abs()) {
        let disc = qb * qb - 4.0 * qa * qc;
        if disc > 0.0 {
            let r = disc.sqrt();
            let (x1, x2) = ((-qb - r) / (2.0 * qa), (-qb + r) / (2.0 * qa));
            for x in [x1.min(x2), x1.max(x2)] {
                if x > 0.0 && x < 1.0 {
                    knots[nk] = x;
                    nk += 1;
                }
            }
        }
    } else if qb != 0.0 {
        let x = -qc / qb;
        if x > 0.0 && x < 1.0 {
            knots[nk] = x;
            nk += 1;
        }
    }
    let mut count = 0;
    let mut prev = 0.0;
    for &x in &knots[..=nk] {
        let v = p(x);
        if v != 0.0 {
            if prev != 0.0 && (prev < 0.0) != (v < 0.0) {
                count += 1;
            }
            prev = v;
        }
    }
    count
}

#[derive(Clone, Copy)]
struct EdgeVertex {
    e9: [f64; 9],
    chart: [f64; 3],
    grad: [f64; 3],
}

/// Level-set areas for several levels in one pass over the grid.
pub fn level_areas(v: &GridValues, levels: &[f64], split: TetSplit, rule: AreaRule) -> Vec<f64> {
    level_areas_on(v, levels, split, rule, Patch::All)
}

/// As [`level_areas`], counting only triangles whose centroid lies on `patch`.
pub fn level_areas_on(v: &GridValues, levels: &[f64], split: TetSplit, rule: AreaRule, patch: Patch) -> Vec<f64> {
    let corrected = rule != AreaRule::Euclidean && v.has_gradients();
    let tets = tetrahedra(split);
    let g = v.grid();
    let margin = cell_reach(g);
    let mut areas = vec![0.0; levels.len()];
    for (i, j, k) in cells(g) {
        if patch != Patch::All && patch.excess([g.phi(i), g.theta(j), 0.0]) > margin {
            continue;
        }
        accumulate_cell(&load_cell(v, i, j, k), levels, &tets, corrected, patch, &mut areas);
    }
    areas
}

/// Bound on the `(φ, θ)` distance from a cell's first corner to any point of the cell.
fn cell_reach(g: &EulerGrid) -> f64 {
    (TAU / g.n_phi as f64).hypot(PI / g.n_theta as f64)
}

/// As [`level_areas`], with every cell of the base grid that a level cuts
/// re-marched on its `refine³` subcells, evaluated exactly from `r`.
pub fn refined_level_areas(
    basis: &RefinedBasis,
    r: &FieldRealization,
    levels: &[f64],
    split: TetSplit,
    rule: AreaRule,
    patch: Patch,
) -> Vec<f64> {
    let corrected = rule != AreaRule::Euclidean;
    let tets = tetrahedra(split);
    let mut areas = vec![0.0; levels.len()];
    let table = basis.amplitudes(r);
    let q = basis.refine();
    let g = *basis.grid();
    let spacing = [TAU / g.n_phi as f64, PI / g.n_theta as f64, TAU / g.n_psi as f64];
    let margin = cell_reach(&g);
    let side = q + 1;
    let local_index = |a: usize, b: usize, c: usize| (a * side + b) * side + c;
    let mut nodes = vec![(0.0, [0.0; 3], [0.0; 3]); side * side * side];
    let mut sub_levels = Vec::with_capacity(levels.len());
    let mut ts = Vec::with_capacity(levels.len());
    let mut local = Vec::with_capacity(levels.len());
    for (i, j, k) in cells(&g) {
        if patch != Patch::All && patch.excess(basis.coords(q * i, q * j, 0)) > margin {
            continue;
        }
        // First-order reach of each corner across the cell, so thin pockets
        // between same-sign corners are still refined.
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for c in 0..8 {
            let bits = [c & 1, (c >> 1) & 1, (c >> 2) & 1];
            let (v, grad) = basis.node(&table, q * (i + bits[0]), q * (j + bits[1]), q * (k + bits[2]));
            let (mut down, mut up) = (v, v);
            for ax in 0..3 {
                let step = grad[ax] * spacing[ax] * if bits[ax] == 0 { 1.0 } else { -1.0 };
                down += step.min(0.0);
                up += step.max(0.0);
            }
            lo = lo.min(down);
            hi = hi.max(up);
        }
        sub_levels.clear();
        sub_levels.extend(levels.iter().enumerate().filter(|(_, &t)| t >= lo && t <= hi).map(|(n, _)| n));
        if sub_levels.is_empty() {
            continue;
        }
        ts.clear();
        ts.extend(sub_levels.iter().map(|&n| levels[n]));
        local.clear();
        local.resize(ts.len(), 0.0);
        for a in 0..side {
            for b in 0..side {
                for c in 0..side {
                    let (ii, jj, kk) = (q * i + a, q * j + b, q * k + c);
                    let (v, grad) = basis.node(&table, ii, jj, kk);
                    nodes[local_index(a, b, c)] = (v, grad, basis.coords(ii, jj, kk));
                }
            }
        }
        for (a, b, c) in (0..q).flat_map(|a| (0..q).flat_map(move |b| (0..q).map(move |c| (a, b, c)))) {
            let mut cell = Cell { values: [0.0; 8], coords: [[0.0; 3]; 8], grads: [[0.0; 3]; 8] };
            for n in 0..8 {
                let (v, grad, coords) = nodes[local_index(a + (n & 1), b + ((n >> 1) & 1), c + ((n >> 2) & 1))];
                cell.values[n] = v;
                cell.grads[n] = grad;
                cell.coords[n] = coords;
            }
            accumulate_cell(&cell, &ts, &tets, corrected, patch, &mut local);
        }
        for (&n, a) in sub_levels.iter().zip(&local) {
            areas[n] += a;
        }
    }
    areas
}

fn accumulate_cell(cell: &Cell, levels: &[f64], tets: &[[usize; 4]; 6], corrected: bool, patch: Patch, areas: &mut [f64]) {
    let (lo, hi) = cell.values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &x| (l.min(x), h.max(x)));
    let mut tris = Vec::with_capacity(4);
    for (slot, &t) in areas.iter_mut().zip(levels) {
        if t < lo || t > hi {
            continue;
        }
        // Each edge of the cell is located at most once per level.
        let mut cache: [[Option<EdgeVertex>; 8]; 8] = [[None; 8]; 8];
        let mut vertex = |ca: usize, cb: usize| {
            // A fixed orientation makes the located root independent of which end is inside.
            let (ca, cb) = (ca.min(cb), ca.max(cb));
            *cache[ca][cb].get_or_insert_with(|| {
                let lam = if corrected { hermite_lambda(cell, ca, cb, t) } else { edge_lambda(cell, ca, cb, t) };
                let chart = lerp3(cell.coords[ca], cell.coords[cb], lam);
                EdgeVertex {
                    e9: chart_embed9(chart),
                    chart,
                    grad: lerp3(cell.grads[ca], cell.grads[cb], lam),
                }
            })
        };
        for tet in tets {
            tris.clear();
            tet_triangles(tet.map(|c| cell.values[c]), t, &mut tris);
            for tri in &tris {
                let pts = tri.map(|(a, b)| vertex(tet[a], tet[b]));
                if patch != Patch::All {
                    let centroid = [0, 1, 2].map(|n| (pts[0].chart[n] + pts[1].chart[n] + pts[2].chart[n]) / 3.0);
                    if !patch.contains(centroid) {
                        continue;
                    }
                }
                let mut area = triangle_area9(&pts[0].e9, &pts[1].e9, &pts[2].e9);
                if corrected && area > 0.0 {
                    let df = [0, 1, 2].map(|n| pts[0].grad[n] + pts[1].grad[n] + pts[2].grad[n]);
                    area *= normal_cosine(&pts.map(|p| p.chart), df);
                }
                *slot += area;
            }
        }
    }
}

/// Triangulated level surface `{f = t}`.
#[derive(Clone, Debug)]
pub struct LevelSurfaceMesh {
    level: f64,
    triangles: Vec<[[f64; 3]; 3]>,
    total_area: f64,
}

impl LevelSurfaceMesh {
    pub fn from_values(v: &GridValues, t: f64, split: TetSplit) -> Self {
        let mut triangles = Vec::new();
        let mut total_area = 0.0;
        march(v, t, split, |tri| {
            let e = tri.map(chart_embed9);
            total_area += triangle_area9(&e[0], &e[1], &e[2]);
            triangles.push(*tri);
        });
        Self {
            level: t,
            triangles,
            total_area,
        }
    }

    pub fn level(&self) -> f64 {
        self.level
    }

    pub fn total_area(&self) -> f64 {
        self.total_area
    }

    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    /// Vertices in chart coordinates `(φ, θ, ψ)`; `φ` and `ψ` may exceed `π`
    /// by up to one cell.
    pub fn chart_triangles(&self) -> &[[[f64; 3]; 3]] {
        &self.triangles
    }

    pub fn vertex_points(&self) -> impl Iterator<Item = EulerPoint> + '_ {
        self.triangles
            .iter()
            .flat_map(|t| t.iter())
            .map(|p| EulerPoint::new(p[0], p[1], p[2]).expect("mesh vertices lie in the chart"))
    }

    /// Triangles mapped by `ι(P) = (P e_2, P e_3)`.
    pub fn embedded_triangles(&self) -> Vec<[[f64; 6]; 3]> {
        self.triangles.iter().map(|t| t.map(|p| embed(&chart_matrix(p)))).collect()
    }

    /// OFF text: the first three `ι` coordinates as vertex positions, all six
    /// in a trailing comment.
    pub fn write_off(&self, mut w: impl Write) -> Result<()> {
        let tris = self.embedded_triangles();
        writeln!(w, "OFF")?;
        writeln!(w, "# level {} area {}", self.level, self.total_area)?;
        writeln!(w, "{} {} 0", 3 * tris.len(), tris.len())?;
        for t in &tris {
            for e in t {
                writeln!(w, "{} {} {} # {} {} {} {} {} {}", e[0], e[1], e[2], e[0], e[1], e[2], e[3], e[4], e[5])?;
            }
        }
        for n in 0..tris.len() {
            writeln!(w, "3 {} {} {}", 3 * n, 3 * n + 1, 3 * n + 2)?;
        }
        Ok(())
    }
}

fn chart_matrix(p: [f64; 3]) -> RotationMatrix {
    RotationMatrix::r3(p[0]) * RotationMatrix::r2(p[1]) * RotationMatrix::r3(p[2])
}

/// Samples `r` on `grid` and extracts `{f = t}`.
pub fn extract_level_surface(r: &FieldRealization, t: f64, grid: &EulerGrid) -> LevelSurfaceMesh {
    LevelSurfaceMesh::from_values(&GridValues::sample(r, *grid), t, TetSplit::Primary)
}
