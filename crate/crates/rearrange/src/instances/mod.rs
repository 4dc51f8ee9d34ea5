//! Instance generators and fixture instances.
//!
//! Random instances are density-controlled: `rho = n*pi*r^2 / (w*h)` for disc
//! footprints. Low densities are rejection-sampled directly; high densities
//! start from a stretched workspace with extra filler discs and squeeze one
//! wall inward in small steps, resolving overlaps by penalty pushes, until the
//! target box is reached. Everything is a pure function of `(config, seed)`.

pub mod fixtures;

use crate::depgraph::{build_labeled, build_unlabeled, LabeledDepGraph, UnlabeledDepGraph};
use crate::geometry::{
    contains, overlap, validate_arrangement, Arrangement, Footprint, Pose, Workspace,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// How start poses map to goal poses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Labeling {
    /// Object `i` must reach goal pose `i`, matching ids drawn at random.
    Random,
    /// Object `i` must reach the `i`-th sampled goal pose.
    Identity,
    /// Objects are interchangeable.
    Unlabeled,
}

/// One object: a footprint posed at a start and at a goal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectSpec {
    pub footprint: Footprint,
    pub start: Pose,
    pub goal: Pose,
}

/// A full rearrangement instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub workspace: Workspace,
    pub objects: BTreeMap<usize, ObjectSpec>,
    pub labeling: Labeling,
}

impl Instance {
    pub fn n(&self) -> usize {
        self.objects.len()
    }

    pub fn start_arrangement(&self) -> Arrangement {
        Arrangement {
            workspace: self.workspace,
            objects: self
                .objects
                .iter()
                .map(|(&id, o)| (id, (o.footprint.clone(), o.start)))
                .collect(),
        }
    }

    pub fn goal_arrangement(&self) -> Arrangement {
        Arrangement {
            workspace: self.workspace,
            objects: self
                .objects
                .iter()
                .map(|(&id, o)| (id, (o.footprint.clone(), o.goal)))
                .collect(),
        }
    }

    pub fn labeled_graph(&self) -> crate::Result<LabeledDepGraph> {
        build_labeled(&self.start_arrangement(), &self.goal_arrangement())
    }

    pub fn unlabeled_graph(&self) -> crate::Result<UnlabeledDepGraph> {
        build_unlabeled(&self.start_arrangement(), &self.goal_arrangement())
    }

    /// Fraction of the workspace covered by footprints.
    pub fn density(&self) -> f64 {
        let area: f64 = self.objects.values().map(|o| o.footprint.area()).sum();
        area / (self.workspace.width * self.workspace.height)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let objects: Vec<serde_json::Value> = self
            .objects
            .iter()
            .map(|(&id, o)| {
                let shape = match &o.footprint {
                    Footprint::Disc { radius } => serde_json::json!({"disc": {"r": radius}}),
                    Footprint::ConvexPolygon { vertices } => {
                        serde_json::json!({"poly": {"pts": vertices}})
                    }
                };
                serde_json::json!({
                    "id": id,
                    "shape": shape,
                    "start": {"x": o.start.x, "y": o.start.y, "theta": o.start.theta},
                    "goal": {"x": o.goal.x, "y": o.goal.y, "theta": o.goal.theta},
                })
            })
            .collect();
        serde_json::json!({
            "schema": 1,
            "workspace": {"w": self.workspace.width, "h": self.workspace.height},
            "objects": objects,
            "labeling": match self.labeling {
                Labeling::Random => "random",
                Labeling::Identity => "identity",
                Labeling::Unlabeled => "unlabeled",
            },
        })
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("instance serializes")
    }

    pub fn from_json_str(s: &str) -> crate::Result<Instance> {
        let v: serde_json::Value = serde_json::from_str(s)?;
        let bad = |m: &str| crate::Error::InvalidInput(format!("instance json: {m}"));
        let ws = v.get("workspace").ok_or_else(|| bad("missing workspace"))?;
        let workspace = Workspace::new(
            ws.get("w").and_then(|x| x.as_f64()).ok_or_else(|| bad("workspace.w"))?,
            ws.get("h").and_then(|x| x.as_f64()).ok_or_else(|| bad("workspace.h"))?,
        )?;
        let labeling = match v.get("labeling").and_then(|x| x.as_str()) {
            Some("random") => Labeling::Random,
            Some("identity") => Labeling::Identity,
            Some("unlabeled") => Labeling::Unlabeled,
            other => return Err(bad(&format!("labeling {other:?}"))),
        };
        let mut objects = BTreeMap::new();
        for o in v
            .get("objects")
            .and_then(|x| x.as_array())
            .ok_or_else(|| bad("objects"))?
        {
            let id = o.get("id").and_then(|x| x.as_u64()).ok_or_else(|| bad("id"))? as usize;
            let shape = o.get("shape").ok_or_else(|| bad("shape"))?;
            let footprint = if let Some(d) = shape.get("disc") {
                Footprint::disc(d.get("r").and_then(|x| x.as_f64()).ok_or_else(|| bad("disc.r"))?)?
            } else if let Some(p) = shape.get("poly") {
                let pts: Vec<[f64; 2]> = serde_json::from_value(
                    p.get("pts").cloned().ok_or_else(|| bad("poly.pts"))?,
                )?;
                Footprint::convex_polygon(pts)?
            } else {
                return Err(bad("unknown shape"));
            };
            let pose = |key: &str| -> crate::Result<Pose> {
                let p = o.get(key).ok_or_else(|| bad(key))?;
                Ok(Pose::new(
                    p.get("x").and_then(|x| x.as_f64()).ok_or_else(|| bad("pose.x"))?,
                    p.get("y").and_then(|x| x.as_f64()).ok_or_else(|| bad("pose.y"))?,
                    p.get("theta").and_then(|x| x.as_f64()).unwrap_or(0.0),
                ))
            };
            objects.insert(
                id,
                ObjectSpec {
                    footprint,
                    start: pose("start")?,
                    goal: pose("goal")?,
                },
            );
        }
        Ok(Instance {
            workspace,
            objects,
            labeling,
        })
    }
}

/// Template for generated footprints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FootprintKind {
    Disc,
    Square,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub n: usize,
    pub rho: f64,
    pub workspace: Workspace,
    pub footprint: FootprintKind,
    pub seed: u64,
    pub labeling: Labeling,
    /// Extra filler objects per real object during squeezing.
    pub filler_fraction: f64,
}

impl GeneratorConfig {
    pub fn discs(n: usize, rho: f64, seed: u64, labeling: Labeling) -> Self {
        GeneratorConfig {
            n,
            rho,
            workspace: Workspace {
                width: 10.0,
                height: 10.0,
            },
            footprint: FootprintKind::Disc,
            seed,
            labeling,
            filler_fraction: 0.3,
        }
    }

    /// Footprint size solving `rho = n * area / (w * h)`.
    fn object_radius(&self) -> f64 {
        let per_object = self.rho * self.workspace.width * self.workspace.height / self.n as f64;
        match self.footprint {
            FootprintKind::Disc => (per_object / std::f64::consts::PI).sqrt(),
            FootprintKind::Square => per_object.sqrt() / 2.0,
        }
    }

    fn make_footprint(&self) -> Footprint {
        match self.footprint {
            FootprintKind::Disc => Footprint::Disc {
                radius: self.object_radius(),
            },
            FootprintKind::Square => {
                Footprint::rectangle(2.0 * self.object_radius(), 2.0 * self.object_radius())
                    .expect("positive side")
            }
        }
    }
}

const REJECTION_DENSITY_LIMIT: f64 = 0.32;

/// Generate one feasible arrangement of the given footprints.
fn sample_arrangement(
    footprints: &[Footprint],
    ws: Workspace,
    rng: &mut ChaCha8Rng,
    polygons_rotate: bool,
) -> Option<Vec<Pose>> {
    let mut poses: Vec<Pose> = Vec::with_capacity(footprints.len());
    'obj: for (k, fp) in footprints.iter().enumerate() {
        let r = fp.outer_radius();
        for _ in 0..4000 {
            let theta = if polygons_rotate && matches!(fp, Footprint::ConvexPolygon { .. }) {
                rng.gen_range(0.0..std::f64::consts::TAU)
            } else {
                0.0
            };
            let p = Pose::new(
                rng.gen_range(r..(ws.width - r).max(r + f64::EPSILON)),
                rng.gen_range(r..(ws.height - r).max(r + f64::EPSILON)),
                theta,
            );
            if !contains(&ws, fp, &p) {
                continue;
            }
            if poses
                .iter()
                .zip(footprints.iter())
                .take(k)
                .all(|(q, fq)| !overlap(fp, &p, fq, q))
            {
                poses.push(p);
                continue 'obj;
            }
        }
        return None;
    }
    Some(poses)
}

/// Push overlapping discs apart and clamp into the box until feasible.
/// Per-iteration displacement is capped to avoid overshoot; stalls get a tiny
/// seeded jitter. Returns false if the relaxation never settles.
fn relax_discs(
    radii: &[f64],
    poses: &mut [Pose],
    width: f64,
    height: f64,
    rng: &mut ChaCha8Rng,
) -> bool {
    let n = poses.len();
    let max_r = radii.iter().cloned().fold(0.0, f64::max);
    let cell = (4.0 * max_r).max(1e-6);
    let mut last_penetration = f64::INFINITY;
    let mut stalled = 0usize;
    for _ in 0..2500 {
        for (i, p) in poses.iter_mut().enumerate() {
            let r = radii[i];
            p.x = p.x.clamp(r, (width - r).max(r));
            p.y = p.y.clamp(r, (height - r).max(r));
        }
        // Bucketed neighbor lookup keeps each sweep near linear.
        let mut buckets: BTreeMap<(i64, i64), Vec<usize>> = BTreeMap::new();
        for (i, p) in poses.iter().enumerate() {
            buckets
                .entry(((p.x / cell).floor() as i64, (p.y / cell).floor() as i64))
                .or_default()
                .push(i);
        }
        let mut penetration = 0.0f64;
        let mut shifts = vec![(0.0f64, 0.0f64); n];
        for (&(bx, by), ids) in &buckets {
            for dx in -1..=1 {
                for dy in -1..=1 {
                    let Some(other) = buckets.get(&(bx + dx, by + dy)) else {
                        continue;
                    };
                    for &i in ids {
                        for &j in other {
                            if j <= i {
                                continue;
                            }
                            let rx = poses[i].x - poses[j].x;
                            let ry = poses[i].y - poses[j].y;
                            let d2 = rx * rx + ry * ry;
                            let rs = radii[i] + radii[j];
                            if d2 >= rs * rs {
                                continue;
                            }
                            let d = d2.sqrt().max(1e-9);
                            penetration += rs - d;
                            let push = 0.55 * (rs - d) + 1e-4;
                            let (ux, uy) = (rx / d, ry / d);
                            shifts[i].0 += ux * push;
                            shifts[i].1 += uy * push;
                            shifts[j].0 -= ux * push;
                            shifts[j].1 -= uy * push;
                        }
                    }
                }
            }
        }
        if penetration == 0.0 {
            return true;
        }
        if penetration >= last_penetration - 1e-7 {
            stalled += 1;
        } else {
            stalled = 0;
        }
        last_penetration = penetration;
        for (i, p) in poses.iter_mut().enumerate() {
            let (mut sx, mut sy) = shifts[i];
            let mag = (sx * sx + sy * sy).sqrt();
            let cap = 0.35 * radii[i];
            if mag > cap {
                sx *= cap / mag;
                sy *= cap / mag;
            }
            if stalled > 12 {
                sx += rng.gen_range(-0.05..0.05) * radii[i];
                sy += rng.gen_range(-0.05..0.05) * radii[i];
            }
            p.x += sx;
            p.y += sy;
        }
        if stalled > 12 {
            stalled = 0;
        }
    }
    false
}

/// Squeeze-based dense arrangement: sample real plus filler discs in a wider
/// box at comfortable density, walk the right wall inward, relax after every
/// step, then drop the fillers.
fn squeeze_arrangement(
    n: usize,
    r: f64,
    ws: Workspace,
    filler_fraction: f64,
    rng: &mut ChaCha8Rng,
) -> Option<Vec<Pose>> {
    let n_fill = (filler_fraction * n as f64).ceil() as usize;
    let r_fill = 0.55 * r;
    let area = n as f64 * std::f64::consts::PI * r * r
        + n_fill as f64 * std::f64::consts::PI * r_fill * r_fill;
    let start_density = 0.24;
    let width0 = (area / (start_density * ws.height)).max(ws.width);
    let mut radii: Vec<f64> = std::iter::repeat(r)
        .take(n)
        .chain(std::iter::repeat(r_fill).take(n_fill))
        .collect();
    let fps: Vec<Footprint> = radii
        .iter()
        .map(|&r| Footprint::Disc { radius: r })
        .collect();
    let wide = Workspace {
        width: width0,
        height: ws.height,
    };
    let mut poses = sample_arrangement(&fps, wide, rng, false)?;
    let steps = 160;
    for k in 1..=steps {
        let w = width0 + (ws.width - width0) * k as f64 / steps as f64;
        if !relax_discs(&radii, &mut poses, w, ws.height, rng) {
            return None;
        }
    }
    poses.truncate(n);
    radii.truncate(n);
    if !relax_discs(&radii, &mut poses, ws.width, ws.height, rng) {
        return None;
    }
    Some(poses)
}

/// Two independent feasible arrangements at exactly the requested density.
pub fn random_instance(cfg: &GeneratorConfig) -> crate::Result<Instance> {
    if cfg.n == 0 {
        return Err(crate::Error::InvalidInput("n must be positive".into()));
    }
    if !(cfg.rho > 0.0 && cfg.rho < 1.0) {
        return Err(crate::Error::InvalidInput(format!(
            "density must lie in (0, 1), got {}",
            cfg.rho
        )));
    }
    let fp = cfg.make_footprint();
    let footprints = vec![fp.clone(); cfg.n];
    let r = cfg.object_radius();

    let mut endpoints: Vec<Vec<Pose>> = Vec::new();
    for (phase, salt) in [("start", 0x5eed_0001u64), ("goal", 0x5eed_0002u64)] {
        let mut found = None;
        let easy = cfg.rho <= REJECTION_DENSITY_LIMIT
            || cfg.n <= 4
            || cfg.footprint == FootprintKind::Square;
        for attempt in 0..24u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ salt ^ (attempt << 32));
            // The squeeze path relaxes discs, so polygonal footprints stay on
            // rejection sampling.
            let poses = if cfg.footprint == FootprintKind::Square || (easy && attempt < 4) {
                sample_arrangement(&footprints, cfg.workspace, &mut rng, false)
            } else {
                // Later attempts thin the fillers out; very dense targets can
                // be infeasible with the full filler load.
                let ff = cfg.filler_fraction / (1 << (attempt / 6).min(3)) as f64;
                squeeze_arrangement(cfg.n, r, cfg.workspace, ff, &mut rng)
            };
            if let Some(p) = poses {
                found = Some(p);
                break;
            }
        }
        let poses = found.ok_or_else(|| crate::Error::Generation {
            phase: phase.into(),
            reason: format!("no feasible arrangement after retries (rho={})", cfg.rho),
        })?;
        endpoints.push(poses);
    }
    let goals = endpoints.pop().expect("goal poses");
    let starts = endpoints.pop().expect("start poses");

    // Random labeling permutes which goal pose belongs to which object.
    let goal_order: Vec<usize> = match cfg.labeling {
        Labeling::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed_0003);
            let mut idx: Vec<usize> = (0..cfg.n).collect();
            for i in (1..idx.len()).rev() {
                idx.swap(i, rng.gen_range(0..=i));
            }
            idx
        }
        _ => (0..cfg.n).collect(),
    };

    let mut objects = BTreeMap::new();
    for i in 0..cfg.n {
        objects.insert(
            i + 1,
            ObjectSpec {
                footprint: fp.clone(),
                start: starts[i],
                goal: goals[goal_order[i]],
            },
        );
    }
    let inst = Instance {
        workspace: cfg.workspace,
        objects,
        labeling: cfg.labeling,
    };
    let sv = validate_arrangement(&inst.start_arrangement(), true);
    let gv = validate_arrangement(&inst.goal_arrangement(), true);
    if !sv.is_empty() || !gv.is_empty() {
        return Err(crate::Error::Generation {
            phase: "validate".into(),
            reason: format!("{} start / {} goal violations", sv.len(), gv.len()),
        });
    }
    Ok(inst)
}

/// Unlabeled instance whose dependency graph is the `m x 2m` grid: discs on a
/// checkerboard lattice with pitch `1.9r`, so only lattice-adjacent start/goal
/// pairs overlap.
pub fn dependency_grid_instance(m: usize) -> crate::Result<Instance> {
    if m < 2 {
        return Err(crate::Error::InvalidInput("grid needs m >= 2".into()));
    }
    let r = 1.0;
    let pitch = 1.9 * r;
    let margin = r + 0.5;
    let cols = m;
    let rows = 2 * m;
    let ws = Workspace::new(
        (cols - 1) as f64 * pitch + 2.0 * margin,
        (rows - 1) as f64 * pitch + 2.0 * margin,
    )?;
    let fp = Footprint::Disc { radius: r };
    let cell_pos = |x: usize, y: usize| {
        Pose::xy(
            margin + (x - 1) as f64 * pitch,
            margin + (y - 1) as f64 * pitch,
        )
    };
    let mut starts = Vec::new();
    let mut goals = Vec::new();
    for y in 1..=rows {
        for x in 1..=cols {
            if (x + y) % 2 == 0 {
                starts.push(cell_pos(x, y));
            } else {
                goals.push(cell_pos(x, y));
            }
        }
    }
    debug_assert_eq!(starts.len(), m * m);
    debug_assert_eq!(goals.len(), m * m);
    let mut objects = BTreeMap::new();
    for (i, (s, g)) in starts.into_iter().zip(goals).enumerate() {
        objects.insert(
            i + 1,
            ObjectSpec {
                footprint: fp.clone(),
                start: s,
                goal: g,
            },
        );
    }
    Ok(Instance {
        workspace: ws,
        objects,
        labeling: Labeling::Unlabeled,
    })
}

/// The grid the generator is supposed to realize, built directly from lattice
/// adjacency with the same vertex numbering. Used as the isomorphism oracle.
pub fn canonical_grid_graph(m: usize) -> UnlabeledDepGraph {
    let cols = m;
    let rows = 2 * m;
    let mut start_id = BTreeMap::new();
    let mut goal_id = BTreeMap::new();
    let mut ns = 0usize;
    let mut ng = 0usize;
    for y in 1..=rows {
        for x in 1..=cols {
            if (x + y) % 2 == 0 {
                ns += 1;
                start_id.insert((x, y), ns);
            } else {
                ng += 1;
                goal_id.insert((x, y), ng);
            }
        }
    }
    let mut edges = std::collections::BTreeSet::new();
    for y in 1..=rows {
        for x in 1..=cols {
            for (nx, ny) in [(x + 1, y), (x, y + 1)] {
                if nx > cols || ny > rows {
                    continue;
                }
                let a = (x, y);
                let b = (nx, ny);
                if let (Some(&s), Some(&g)) = (start_id.get(&a), goal_id.get(&b)) {
                    edges.insert((s, g));
                }
                if let (Some(&s), Some(&g)) = (start_id.get(&b), goal_id.get(&a)) {
                    edges.insert((s, g));
                }
            }
        }
    }
    UnlabeledDepGraph {
        starts: (1..=ns).collect(),
        goals: (1..=ng).collect(),
        edges,
    }
}

fn mod_inverse(a: usize, n: usize) -> Option<usize> {
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (n as i64, a as i64);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    if r > 1 {
        return None;
    }
    Some(t.rem_euclid(n as i64) as usize)
}

/// Labeled instance on a circle where object `i` depends on `i-1` and
/// `i+sqrt(n)` (indices mod `n`). Starts sit on circle slots in a stride
/// pattern; each goal sits in the gap between the two start slots of exactly
/// the objects it must wait for.
pub fn labeled_cycle_instance(n: usize) -> crate::Result<Instance> {
    let m = (n as f64).sqrt().round() as usize;
    if m * m != n || m < 2 {
        return Err(crate::Error::InvalidInput(
            "labeled cycle instance needs n = m^2, m >= 2".into(),
        ));
    }
    let c = mod_inverse(m + 1, n).ok_or_else(|| {
        crate::Error::InvalidInput("m + 1 must be invertible mod n".into())
    })?;
    let r = 1.0;
    // Slot pitch chord slightly above 2r keeps starts disjoint while each
    // half-step start/goal pair overlaps.
    let unit = std::f64::consts::TAU / n as f64;
    let radius = 1.025 * r / (unit / 2.0).sin();
    let center = radius + r + 0.5;
    let ws = Workspace::new(2.0 * center, 2.0 * center)?;
    let slot_pose = |slot: f64| {
        Pose::xy(
            center + radius * (slot * unit).cos(),
            center + radius * (slot * unit).sin(),
        )
    };
    let fp = Footprint::Disc { radius: r };
    let mut objects = BTreeMap::new();
    for i in 0..n {
        // start of object i occupies slot c*i; goal of object i sits in the
        // gap after the slot of object i-1.
        let start_slot = (c * i) % n;
        let prev_slot = (c * ((i + n - 1) % n)) % n;
        objects.insert(
            i + 1,
            ObjectSpec {
                footprint: fp.clone(),
                start: slot_pose(start_slot as f64),
                goal: slot_pose(prev_slot as f64 + 0.5),
            },
        );
    }
    Ok(Instance {
        workspace: ws,
        objects,
        labeling: Labeling::Identity,
    })
}

/// Thin uniform cuboids: `n` horizontal rods stacked as starts, `n` vertical
/// rods as goals, every goal crossing every start. The labeled graph is the
/// bidirectional complete graph; unlabeled it is complete bipartite.
pub fn thin_cuboid_instance(n: usize) -> crate::Result<Instance> {
    if n < 2 {
        return Err(crate::Error::InvalidInput("need n >= 2 cuboids".into()));
    }
    let thickness = 0.3;
    let len = (n - 1) as f64 + 2.4;
    let fp = Footprint::rectangle(len, thickness)?;
    let lo = 3.0;
    let mid = lo + (n - 1) as f64 / 2.0;
    let extent = lo + (n - 1) as f64 + 3.0;
    let ws = Workspace::new(extent, extent)?;
    let mut objects = BTreeMap::new();
    for k in 0..n {
        objects.insert(
            k + 1,
            ObjectSpec {
                footprint: fp.clone(),
                start: Pose::new(mid, lo + k as f64, 0.0),
                goal: Pose::new(lo + k as f64, mid, std::f64::consts::FRAC_PI_2),
            },
        );
    }
    Ok(Instance {
        workspace: ws,
        objects,
        labeling: Labeling::Identity,
    })
}
