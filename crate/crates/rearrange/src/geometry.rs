//! 2D footprints, poses, workspace containment, and exact pairwise overlap.
//!
//! All predicates treat boundary tangency as *non*-overlap: two unit discs at
//! center distance exactly 2.0 do not overlap. Disc-disc uses the analytic
//! squared-distance predicate; polygon pairs and disc-polygon go through a
//! separating-axis test with a small epsilon for degenerate axes.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Epsilon for separating-axis degeneracy. Instances are generated, not
/// measured, so double precision with a fixed epsilon is sufficient.
pub const SAT_EPS: f64 = 1e-9;

/// Tolerance when comparing poses for equality (plan replay, tree search).
pub const POSE_TOL: f64 = 1e-6;

/// A planar pose: position plus orientation, theta normalized to `[0, 2*pi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pose {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
}

impl Pose {
    pub fn new(x: f64, y: f64, theta: f64) -> Self {
        Pose {
            x,
            y,
            theta: normalize_angle(theta),
        }
    }

    pub fn xy(x: f64, y: f64) -> Self {
        Pose { x, y, theta: 0.0 }
    }

    /// True when both positions and angles agree within `POSE_TOL`.
    pub fn approx_eq(&self, other: &Pose) -> bool {
        (self.x - other.x).abs() <= POSE_TOL
            && (self.y - other.y).abs() <= POSE_TOL
            && angle_dist(self.theta, other.theta) <= POSE_TOL
    }
}

pub fn normalize_angle(theta: f64) -> f64 {
    let two_pi = std::f64::consts::TAU;
    let mut t = theta % two_pi;
    if t < 0.0 {
        t += two_pi;
    }
    if t >= two_pi {
        t = 0.0;
    }
    t
}

fn angle_dist(a: f64, b: f64) -> f64 {
    let two_pi = std::f64::consts::TAU;
    let d = (a - b).abs() % two_pi;
    d.min(two_pi - d)
}

/// Object footprint in its local frame. Polygons are strictly convex with
/// counterclockwise vertices; pose application is rotate-then-translate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Footprint {
    Disc { radius: f64 },
    ConvexPolygon { vertices: Vec<[f64; 2]> },
}

impl Footprint {
    pub fn disc(radius: f64) -> crate::Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(crate::Error::InvalidInput(format!(
                "disc radius must be positive and finite, got {radius}"
            )));
        }
        Ok(Footprint::Disc { radius })
    }

    pub fn convex_polygon(vertices: Vec<[f64; 2]>) -> crate::Result<Self> {
        if vertices.len() < 3 {
            return Err(crate::Error::InvalidInput(
                "polygon needs at least 3 vertices".into(),
            ));
        }
        let n = vertices.len();
        for i in 0..n {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            let c = vertices[(i + 2) % n];
            let cross = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]);
            if cross <= SAT_EPS {
                return Err(crate::Error::InvalidInput(
                    "polygon must be strictly convex with CCW vertex order".into(),
                ));
            }
        }
        Ok(Footprint::ConvexPolygon { vertices })
    }

    /// Axis-aligned rectangle centered at the local origin.
    pub fn rectangle(width: f64, height: f64) -> crate::Result<Self> {
        let (hw, hh) = (width / 2.0, height / 2.0);
        Footprint::convex_polygon(vec![[-hw, -hh], [hw, -hh], [hw, hh], [-hw, hh]])
    }

    /// Loose outer radius, used by samplers for rejection bounds.
    pub fn outer_radius(&self) -> f64 {
        match self {
            Footprint::Disc { radius } => *radius,
            Footprint::ConvexPolygon { vertices } => vertices
                .iter()
                .map(|v| (v[0] * v[0] + v[1] * v[1]).sqrt())
                .fold(0.0, f64::max),
        }
    }

    pub fn area(&self) -> f64 {
        match self {
            Footprint::Disc { radius } => std::f64::consts::PI * radius * radius,
            Footprint::ConvexPolygon { vertices } => {
                let n = vertices.len();
                let mut s = 0.0;
                for i in 0..n {
                    let a = vertices[i];
                    let b = vertices[(i + 1) % n];
                    s += a[0] * b[1] - b[0] * a[1];
                }
                s / 2.0
            }
        }
    }
}

/// Axis-aligned rectangular workspace with its origin corner at (0, 0).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Workspace {
    pub width: f64,
    pub height: f64,
}

impl Workspace {
    pub fn new(width: f64, height: f64) -> crate::Result<Self> {
        if !(width > 0.0 && height > 0.0) {
            return Err(crate::Error::InvalidInput(
                "workspace dimensions must be positive".into(),
            ));
        }
        Ok(Workspace { width, height })
    }
}

/// A set of posed objects in a workspace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Arrangement {
    pub workspace: Workspace,
    /// object id -> (footprint, pose); ids are 1-based.
    pub objects: BTreeMap<usize, (Footprint, Pose)>,
}

impl Arrangement {
    pub fn new(workspace: Workspace) -> Self {
        Arrangement {
            workspace,
            objects: BTreeMap::new(),
        }
    }

    pub fn ids(&self) -> Vec<usize> {
        self.objects.keys().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }
}

fn rotate(v: [f64; 2], cos: f64, sin: f64) -> [f64; 2] {
    [v[0] * cos - v[1] * sin, v[0] * sin + v[1] * cos]
}

/// Polygon vertices in world coordinates.
pub fn world_vertices(vertices: &[[f64; 2]], pose: &Pose) -> Vec<[f64; 2]> {
    let (sin, cos) = pose.theta.sin_cos();
    vertices
        .iter()
        .map(|&v| {
            let r = rotate(v, cos, sin);
            [r[0] + pose.x, r[1] + pose.y]
        })
        .collect()
}

fn project(points: &[[f64; 2]], axis: [f64; 2]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for p in points {
        let d = p[0] * axis[0] + p[1] * axis[1];
        lo = lo.min(d);
        hi = hi.max(d);
    }
    (lo, hi)
}

fn axis_overlap_extent(a: (f64, f64), b: (f64, f64)) -> f64 {
    a.1.min(b.1) - a.0.max(b.0)
}

fn normalized(v: [f64; 2]) -> Option<[f64; 2]> {
    let n = (v[0] * v[0] + v[1] * v[1]).sqrt();
    if n <= SAT_EPS {
        return None;
    }
    Some([v[0] / n, v[1] / n])
}

fn edge_normals(pts: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let n = pts.len();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let a = pts[i];
        let b = pts[(i + 1) % n];
        if let Some(ax) = normalized([b[1] - a[1], a[0] - b[0]]) {
            out.push(ax);
        }
    }
    out
}

fn polys_overlap(pa: &[[f64; 2]], pb: &[[f64; 2]]) -> bool {
    for axis in edge_normals(pa).into_iter().chain(edge_normals(pb)) {
        if axis_overlap_extent(project(pa, axis), project(pb, axis)) <= SAT_EPS {
            return false;
        }
    }
    true
}

fn disc_poly_overlap(center: [f64; 2], r: f64, poly: &[[f64; 2]]) -> bool {
    let mut axes = edge_normals(poly);
    // Axis toward the polygon vertex nearest to the disc center catches the
    // corner-region case that edge normals miss.
    let mut best = None;
    let mut best_d = f64::INFINITY;
    for p in poly {
        let d = (p[0] - center[0]).powi(2) + (p[1] - center[1]).powi(2);
        if d < best_d {
            best_d = d;
            best = Some(*p);
        }
    }
    if let Some(p) = best {
        if let Some(ax) = normalized([p[0] - center[0], p[1] - center[1]]) {
            axes.push(ax);
        }
    }
    for axis in axes {
        let c = center[0] * axis[0] + center[1] * axis[1];
        if axis_overlap_extent((c - r, c + r), project(poly, axis)) <= SAT_EPS {
            return false;
        }
    }
    true
}

/// True iff the interiors of the two posed footprints intersect.
pub fn overlap(fp_a: &Footprint, pa: &Pose, fp_b: &Footprint, pb: &Pose) -> bool {
    match (fp_a, fp_b) {
        (Footprint::Disc { radius: ra }, Footprint::Disc { radius: rb }) => {
            let dx = pa.x - pb.x;
            let dy = pa.y - pb.y;
            let rs = ra + rb;
            dx * dx + dy * dy < rs * rs
        }
        (Footprint::ConvexPolygon { vertices: va }, Footprint::ConvexPolygon { vertices: vb }) => {
            polys_overlap(&world_vertices(va, pa), &world_vertices(vb, pb))
        }
        (Footprint::Disc { radius }, Footprint::ConvexPolygon { vertices }) => {
            disc_poly_overlap([pa.x, pa.y], *radius, &world_vertices(vertices, pb))
        }
        (Footprint::ConvexPolygon { vertices }, Footprint::Disc { radius }) => {
            disc_poly_overlap([pb.x, pb.y], *radius, &world_vertices(vertices, pa))
        }
    }
}

/// True iff the posed footprint lies entirely inside the workspace rectangle.
/// Boundary contact counts as contained.
pub fn contains(ws: &Workspace, fp: &Footprint, pose: &Pose) -> bool {
    match fp {
        Footprint::Disc { radius } => {
            pose.x - radius >= -SAT_EPS
                && pose.y - radius >= -SAT_EPS
                && pose.x + radius <= ws.width + SAT_EPS
                && pose.y + radius <= ws.height + SAT_EPS
        }
        Footprint::ConvexPolygon { vertices } => world_vertices(vertices, pose).iter().all(|p| {
            p[0] >= -SAT_EPS
                && p[1] >= -SAT_EPS
                && p[0] <= ws.width + SAT_EPS
                && p[1] <= ws.height + SAT_EPS
        }),
    }
}

/// One reason an arrangement is infeasible.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    OverlappingPair { a: usize, b: usize },
    OutOfWorkspace { id: usize },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::OverlappingPair { a, b } => write!(f, "objects {a} and {b} overlap"),
            Violation::OutOfWorkspace { id } => {
                write!(f, "object {id} protrudes from the workspace")
            }
        }
    }
}

/// Empty result iff the arrangement is feasible. Containment checks can be
/// disabled for external-buffer poses that intentionally sit outside.
pub fn validate_arrangement(a: &Arrangement, require_containment: bool) -> Vec<Violation> {
    let mut out = Vec::new();
    let items: Vec<(&usize, &(Footprint, Pose))> = a.objects.iter().collect();
    for (idx, (ia, (fa, pa))) in items.iter().enumerate() {
        if require_containment && !contains(&a.workspace, fa, pa) {
            out.push(Violation::OutOfWorkspace { id: **ia });
        }
        for (ib, (fb, pb)) in items.iter().skip(idx + 1) {
            if overlap(fa, pa, fb, pb) {
                out.push(Violation::OverlappingPair { a: **ia, b: **ib });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn unit_disc() -> Footprint {
        Footprint::disc(1.0).unwrap()
    }

    fn unit_square() -> Footprint {
        Footprint::rectangle(1.0, 1.0).unwrap()
    }

    #[test]
    fn disc_disc_tangency_is_not_overlap() {
        let d = unit_disc();
        assert!(!overlap(&d, &Pose::xy(0.0, 0.0), &d, &Pose::xy(2.0, 0.0)));
        assert!(overlap(&d, &Pose::xy(0.0, 0.0), &d, &Pose::xy(1.9, 0.0)));
    }

    /// Dense point-sampling oracle: any sampled point inside both footprints
    /// forces the predicate to report overlap. Independent of the SAT path.
    fn sampled_common_point(fa: &Footprint, pa: &Pose, fb: &Footprint, pb: &Pose) -> bool {
        let inside = |fp: &Footprint, pose: &Pose, p: [f64; 2]| -> bool {
            match fp {
                Footprint::Disc { radius } => {
                    (p[0] - pose.x).powi(2) + (p[1] - pose.y).powi(2) < radius * radius
                }
                Footprint::ConvexPolygon { vertices } => {
                    let w = world_vertices(vertices, pose);
                    let n = w.len();
                    (0..n).all(|i| {
                        let a = w[i];
                        let b = w[(i + 1) % n];
                        (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]) > 0.0
                    })
                }
            }
        };
        let r = fa.outer_radius();
        let steps = 260;
        for i in 0..steps {
            for j in 0..steps {
                let p = [
                    pa.x - r + 2.0 * r * (i as f64 + 0.5) / steps as f64,
                    pa.y - r + 2.0 * r * (j as f64 + 0.5) / steps as f64,
                ];
                if inside(fa, pa, p) && inside(fb, pb, p) {
                    return true;
                }
            }
        }
        false
    }

    #[test]
    fn disc_vs_square_matches_sampling_oracle_near_contact() {
        let d = unit_disc();
        let s = unit_square();
        // Closest square point at x = 1.1 is outside the unit disc: no overlap.
        let far = Pose::xy(1.6, 0.0);
        assert_eq!(
            overlap(&d, &Pose::xy(0.0, 0.0), &s, &far),
            sampled_common_point(&d, &Pose::xy(0.0, 0.0), &s, &far)
        );
        assert!(!overlap(&d, &Pose::xy(0.0, 0.0), &s, &far));
        // Closest square point at x = 0.9 is inside: overlap.
        let near = Pose::xy(1.4, 0.0);
        assert!(overlap(&d, &Pose::xy(0.0, 0.0), &s, &near));
        assert!(sampled_common_point(&d, &Pose::xy(0.0, 0.0), &s, &near));
    }

    #[test]
    fn rotated_square_corner_hits_disc() {
        let d = unit_disc();
        let s = unit_square();
        // Rotated 45 degrees the half-diagonal 0.707 reaches into the disc.
        let p = Pose::new(1.65, 0.0, std::f64::consts::FRAC_PI_4);
        assert!(overlap(&d, &Pose::xy(0.0, 0.0), &s, &p));
        assert!(sampled_common_point(&d, &Pose::xy(0.0, 0.0), &s, &p));
    }

    #[test]
    fn workspace_containment() {
        let ws = Workspace::new(10.0, 10.0).unwrap();
        let d = unit_disc();
        assert!(contains(&ws, &d, &Pose::xy(5.0, 5.0)));
        assert!(!contains(&ws, &d, &Pose::xy(0.5, 5.0)));
        // Axis-aligned at 9.4 the square fits; rotated 45 degrees the corner
        // at 9.4 + 0.707 protrudes past x = 10.
        let s = unit_square();
        assert!(contains(&ws, &s, &Pose::xy(9.4, 5.0)));
        assert!(!contains(
            &ws,
            &s,
            &Pose::new(9.4, 5.0, std::f64::consts::FRAC_PI_4)
        ));
    }

    #[test]
    fn validate_reports_pairs_and_containment() {
        let ws = Workspace::new(10.0, 10.0).unwrap();
        let mut a = Arrangement::new(ws);
        a.objects.insert(1, (unit_disc(), Pose::xy(3.0, 3.0)));
        assert!(validate_arrangement(&a, true).is_empty());
        a.objects.insert(2, (unit_disc(), Pose::xy(3.0, 3.0)));
        let v = validate_arrangement(&a, true);
        assert_eq!(v, vec![Violation::OverlappingPair { a: 1, b: 2 }]);
    }

    #[test]
    fn polygon_constructor_rejects_bad_input() {
        assert!(Footprint::convex_polygon(vec![[0.0, 0.0], [1.0, 0.0]]).is_err());
        // Clockwise order is rejected.
        assert!(Footprint::convex_polygon(vec![[0.0, 0.0], [0.0, 1.0], [1.0, 0.0]]).is_err());
        assert!(Footprint::convex_polygon(vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]]).is_ok());
    }

    #[test]
    fn sampling_oracle_never_contradicts_sat_on_random_pairs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let shapes = [unit_disc(), unit_square(), triangle()];
        let mut hits = 0;
        for _ in 0..1200 {
            let fa = &shapes[rng.gen_range(0..shapes.len())];
            let fb = &shapes[rng.gen_range(0..shapes.len())];
            let pa = Pose::new(0.0, 0.0, rng.gen_range(0.0..std::f64::consts::TAU));
            let pb = Pose::new(
                rng.gen_range(-2.5..2.5),
                rng.gen_range(-2.5..2.5),
                rng.gen_range(0.0..std::f64::consts::TAU),
            );
            if sampled_common_point(fa, &pa, fb, &pb) {
                hits += 1;
                assert!(overlap(fa, &pa, fb, &pb), "SAT false negative: {fa:?} {pb:?}");
            }
        }
        assert!(hits > 100, "oracle sample too weak: {hits}");
    }

    fn triangle() -> Footprint {
        Footprint::convex_polygon(vec![[-0.8, -0.5], [0.8, -0.4], [0.0, 0.9]]).unwrap()
    }

    proptest! {
        #[test]
        fn overlap_is_symmetric(
            ax in -3.0f64..3.0, ay in -3.0f64..3.0, at in 0.0f64..6.28,
            bx in -3.0f64..3.0, by in -3.0f64..3.0, bt in 0.0f64..6.28,
            sa in 0usize..3, sb in 0usize..3,
        ) {
            let shapes = [unit_disc(), unit_square(), triangle()];
            let pa = Pose::new(ax, ay, at);
            let pb = Pose::new(bx, by, bt);
            prop_assert_eq!(
                overlap(&shapes[sa], &pa, &shapes[sb], &pb),
                overlap(&shapes[sb], &pb, &shapes[sa], &pa)
            );
        }

        #[test]
        fn theta_is_normalized(t in -100.0f64..100.0) {
            let p = Pose::new(0.0, 0.0, t);
            prop_assert!(p.theta >= 0.0 && p.theta < std::f64::consts::TAU);
        }
    }
}
