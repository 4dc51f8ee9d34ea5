//! Hand-built fixture instances with known dependency graphs and optima.
//!
//! Each fixture realizes a specific graph geometrically; tests assert the
//! built graph arc-for-arc against the golden edge list stored here, so the
//! coordinates are load-bearing.

use super::{Instance, Labeling, ObjectSpec};
use crate::geometry::{Footprint, Pose, Workspace};
use std::collections::{BTreeMap, BTreeSet};

/// A fixture instance plus its expected combinatorics.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub aliases: &'static [&'static str],
    pub instance: Instance,
    /// Golden labeled arc list.
    pub arcs: BTreeSet<(usize, usize)>,
    pub mrb: Option<usize>,
    pub mfvs: Option<usize>,
    /// Minimum total buffers among plans that also attain the MRB.
    pub total_given_mrb: Option<usize>,
}

impl Fixture {
    pub fn labeled_graph(&self) -> crate::Result<crate::depgraph::LabeledDepGraph> {
        self.instance.labeled_graph()
    }

    pub fn unlabeled_graph(&self) -> crate::Result<crate::depgraph::UnlabeledDepGraph> {
        self.instance.unlabeled_graph()
    }
}

fn disc_instance(
    ws: Workspace,
    r: f64,
    coords: &[(f64, f64, f64, f64)],
    labeling: Labeling,
) -> Instance {
    let fp = Footprint::Disc { radius: r };
    let mut objects = BTreeMap::new();
    for (i, &(sx, sy, gx, gy)) in coords.iter().enumerate() {
        objects.insert(
            i + 1,
            ObjectSpec {
                footprint: fp.clone(),
                start: Pose::xy(sx, sy),
                goal: Pose::xy(gx, gy),
            },
        );
    }
    Instance {
        workspace: ws,
        objects,
        labeling,
    }
}

/// Three soda cans in a row: objects 1 and 2 want each other's spot, object 3
/// waits on 1. One buffer suffices and every plan has four actions.
pub fn three_cans() -> Fixture {
    let instance = disc_instance(
        Workspace {
            width: 12.0,
            height: 8.0,
        },
        1.0,
        &[
            (4.0, 4.0, 5.4, 4.9),
            (6.5, 4.0, 3.0, 5.5),
            (9.0, 4.0, 4.4, 2.2),
        ],
        Labeling::Identity,
    );
    Fixture {
        name: "cans3",
        aliases: &["fig1"],
        instance,
        arcs: [(1, 2), (2, 1), (3, 1)].into_iter().collect(),
        mrb: Some(1),
        mfvs: Some(1),
        total_given_mrb: Some(1),
    }
}

/// The seven-disc running example. Its labeled graph has two 2-cycles that
/// share a longer cycle through 2, 6, 5, 7; the optimum needs two buffers.
pub fn seven_discs() -> Fixture {
    let instance = disc_instance(
        Workspace {
            width: 16.0,
            height: 12.0,
        },
        1.0,
        &[
            // (sx, sy, gx, gy) per object 1..=7
            (12.0, 7.4, 14.0, 3.0),
            (9.0, 3.0, 7.5, 7.05),
            (9.8, 8.8, 4.5, 7.05),
            (3.0, 2.5, 7.95, 4.5),
            (3.0, 6.0, 10.4, 7.05),
            (6.0, 6.0, 4.5, 4.95),
            (9.0, 6.0, 10.05, 4.5),
        ],
        Labeling::Identity,
    );
    Fixture {
        name: "discs7",
        aliases: &["fig2"],
        instance,
        arcs: [
            (2, 6),
            (2, 7),
            (3, 5),
            (3, 6),
            (4, 2),
            (4, 7),
            (5, 1),
            (5, 3),
            (5, 7),
            (6, 5),
            (7, 2),
        ]
        .into_iter()
        .collect(),
        mrb: Some(2),
        mfvs: Some(2),
        total_given_mrb: Some(2),
    }
}

/// Three disjoint 2-cycles: every cycle needs one buffer in total (MFVS is 3),
/// but the cycles resolve one after another with a single running buffer.
pub fn three_two_cycles() -> Fixture {
    let mut coords = Vec::new();
    for k in 0..3 {
        let ox = 2.0 + 6.0 * k as f64;
        // pair (a, b): a's goal overlaps b's start and vice versa.
        coords.push((ox, 4.0, ox + 1.45, 5.6));
        coords.push((ox + 2.4, 4.0, ox + 0.95, 2.4));
    }
    let instance = disc_instance(
        Workspace {
            width: 19.0,
            height: 8.0,
        },
        1.0,
        &coords,
        Labeling::Identity,
    );
    Fixture {
        name: "two_cycles3",
        aliases: &["fig4"],
        instance,
        arcs: [(1, 2), (2, 1), (3, 4), (4, 3), (5, 6), (6, 5)]
            .into_iter()
            .collect(),
        mrb: Some(1),
        mfvs: Some(3),
        total_given_mrb: Some(3),
    }
}

/// Mutually blocking triangle of discs: complete bidirectional graph on three
/// objects, so two of them must wait in buffers at once.
pub fn triangle_trio() -> Fixture {
    let instance = disc_instance(
        Workspace {
            width: 8.0,
            height: 8.0,
        },
        1.0,
        &triangle_coords(4.0, 4.0),
        Labeling::Identity,
    );
    Fixture {
        name: "triangle3",
        aliases: &["fig8"],
        instance,
        arcs: [(1, 2), (1, 3), (2, 1), (2, 3), (3, 1), (3, 2)]
            .into_iter()
            .collect(),
        mrb: Some(2),
        mfvs: Some(2),
        total_given_mrb: Some(2),
    }
}

fn triangle_coords(cx: f64, cy: f64) -> Vec<(f64, f64, f64, f64)> {
    // Starts on an equilateral triangle (side 2.05); each goal sits outward of
    // one edge midpoint, overlapping exactly the two starts of that edge.
    let rs = 2.05 / 3.0f64.sqrt();
    let s1 = (cx, cy + rs);
    let s2 = (cx - 1.025, cy - rs / 2.0);
    let s3 = (cx + 1.025, cy - rs / 2.0);
    let out = 0.9;
    let g1 = (cx, cy - rs / 2.0 - out);
    let g2 = (
        cx + 0.5125 + out * 0.8660254,
        cy + rs / 4.0 + out * 0.5,
    );
    let g3 = (
        cx - 0.5125 - out * 0.8660254,
        cy + rs / 4.0 + out * 0.5,
    );
    vec![
        (s1.0, s1.1, g1.0, g1.1),
        (s2.0, s2.1, g2.0, g2.1),
        (s3.0, s3.1, g3.0, g3.1),
    ]
}

/// The triangle plus one independent object; the triangle component must be
/// dissolved by unlabeled preprocessing, after which the instance is monotone.
pub fn preprocess_quartet() -> Fixture {
    let mut coords = triangle_coords(4.0, 4.0);
    coords.push((9.0, 5.0, 9.0, 2.8));
    let instance = disc_instance(
        Workspace {
            width: 12.0,
            height: 8.0,
        },
        1.0,
        &coords,
        Labeling::Identity,
    );
    Fixture {
        name: "preprocess4",
        aliases: &["fig9"],
        instance,
        arcs: [(1, 2), (1, 3), (2, 1), (2, 3), (3, 1), (3, 2)]
            .into_iter()
            .collect(),
        mrb: Some(2),
        mfvs: Some(2),
        total_given_mrb: Some(2),
    }
}

#[derive(Clone, Copy)]
enum Pad {
    None,
    /// Extend the low end of the interval.
    Low,
    /// Extend the high end.
    High,
    /// Extend both ends equally.
    Split,
}

/// Ten thin cuboids whose dependency graph interlocks three 2-cycles through a
/// long-buffered connector object. The minimum feedback vertex set has size 3,
/// the MRB is 2, and any plan attaining 2 running buffers parks 4 objects.
///
/// Construction: starts are horizontal rods on distinct grid rows, goals are
/// the same rods turned upright on distinct grid columns. A goal crosses a
/// start exactly when the start's covered column interval contains the goal's
/// column and the goal's covered row interval contains the start's row, which
/// reduces the wanted arc set to interval arithmetic on the two grid orders.
pub fn ten_cuboids() -> Fixture {
    let n = 10;
    // Grid positions (1..=10) of each object's start row and goal column.
    let row_of = [0usize, 9, 5, 4, 2, 8, 6, 3, 10, 1, 7];
    let col_of = [0usize, 10, 5, 3, 7, 1, 8, 9, 4, 6, 2];
    let deps: [&[usize]; 11] = [
        &[],
        &[],
        &[4, 9],
        &[5, 10],
        &[3, 7, 9],
        &[4],
        &[4, 7],
        &[6],
        &[10],
        &[2, 3, 6],
        &[3, 4],
    ];
    let goal_pad = [
        Pad::None,
        Pad::None,
        Pad::None,
        Pad::High,
        Pad::Low,
        Pad::None,
        Pad::Low,
        Pad::Split,
        Pad::None,
        Pad::None,
        Pad::None,
    ];
    let start_pad = [
        Pad::None,
        Pad::None,
        Pad::Split,
        Pad::None,
        Pad::None,
        Pad::None,
        Pad::None,
        Pad::None,
        Pad::None,
        Pad::None,
        Pad::Low,
    ];
    let users: Vec<Vec<usize>> = (0..=n)
        .map(|j| {
            (1..=n)
                .filter(|&i| deps[i].contains(&j))
                .collect::<Vec<usize>>()
        })
        .collect();

    let hull = |cells: &[usize], grid: &[usize]| -> Option<(f64, f64)> {
        if cells.is_empty() {
            return None;
        }
        let lo = cells.iter().map(|&c| grid[c]).min().unwrap();
        let hi = cells.iter().map(|&c| grid[c]).max().unwrap();
        Some((2.0 * lo as f64 - 0.6, 2.0 * hi as f64 + 0.6))
    };
    let pad_interval = |iv: (f64, f64), target: f64, pad: Pad| -> (f64, f64) {
        let missing = target - (iv.1 - iv.0);
        if missing <= 1e-12 {
            return iv;
        }
        match pad {
            Pad::Low => (iv.0 - missing, iv.1),
            Pad::High => (iv.0, iv.1 + missing),
            Pad::Split | Pad::None => (iv.0 - missing / 2.0, iv.1 + missing / 2.0),
        }
    };

    let park = 24.0;
    let thickness = 0.3;
    let mut raw: Vec<(f64, Pose, Pose)> = Vec::new(); // (length, start, goal), unshifted
    for j in 1..=n {
        let g_hull = hull(deps[j], &row_of);
        let s_hull = hull(&users[j], &col_of);
        let len = g_hull
            .map(|(a, b)| b - a)
            .unwrap_or(1.0)
            .max(s_hull.map(|(a, b)| b - a).unwrap_or(1.0));
        let s_iv = match s_hull {
            Some(iv) => pad_interval(iv, len, start_pad[j]),
            None => (park - len / 2.0, park + len / 2.0),
        };
        let g_iv = match g_hull {
            Some(iv) => pad_interval(iv, len, goal_pad[j]),
            None => (park - len / 2.0, park + len / 2.0),
        };
        let start = Pose::new((s_iv.0 + s_iv.1) / 2.0, 2.0 * row_of[j] as f64, 0.0);
        let goal = Pose::new(
            2.0 * col_of[j] as f64,
            (g_iv.0 + g_iv.1) / 2.0,
            std::f64::consts::FRAC_PI_2,
        );
        raw.push((len, start, goal));
    }

    // Shift everything into the positive quadrant with a unit margin.
    let mut min_x = f64::INFINITY;
    let mut min_y = f64::INFINITY;
    let mut max_x = f64::NEG_INFINITY;
    let mut max_y = f64::NEG_INFINITY;
    for (len, s, g) in &raw {
        let h = len / 2.0;
        min_x = min_x.min(s.x - h).min(g.x - thickness);
        max_x = max_x.max(s.x + h).max(g.x + thickness);
        min_y = min_y.min(g.y - h).min(s.y - thickness);
        max_y = max_y.max(g.y + h).max(s.y + thickness);
    }
    let (dx, dy) = (1.0 - min_x, 1.0 - min_y);
    let ws = Workspace {
        width: max_x - min_x + 2.0,
        height: max_y - min_y + 2.0,
    };
    let mut objects = BTreeMap::new();
    for (j, (len, s, g)) in raw.into_iter().enumerate() {
        objects.insert(
            j + 1,
            ObjectSpec {
                footprint: Footprint::rectangle(len, thickness).expect("rod"),
                start: Pose::new(s.x + dx, s.y + dy, s.theta),
                goal: Pose::new(g.x + dx, g.y + dy, g.theta),
            },
        );
    }
    let arcs: BTreeSet<(usize, usize)> = (1..=n)
        .flat_map(|i| deps[i].iter().map(move |&j| (i, j)))
        .collect();
    Fixture {
        name: "cuboids10",
        aliases: &["fig5"],
        instance: Instance {
            workspace: ws,
            objects,
            labeling: Labeling::Identity,
        },
        arcs,
        mrb: Some(2),
        mfvs: Some(3),
        total_given_mrb: Some(4),
    }
}

/// All fixture instances, in a stable order.
pub fn worked_examples() -> Vec<Fixture> {
    vec![
        three_cans(),
        seven_discs(),
        three_two_cycles(),
        ten_cuboids(),
        triangle_trio(),
        preprocess_quartet(),
    ]
}

/// Look a fixture up by name or alias.
pub fn fixture_by_name(name: &str) -> Option<Fixture> {
    worked_examples()
        .into_iter()
        .find(|f| f.name == name || f.aliases.contains(&name))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::validate_arrangement;

    #[test]
    fn fixtures_are_feasible_and_match_their_golden_graphs() {
        for f in worked_examples() {
            let sv = validate_arrangement(&f.instance.start_arrangement(), true);
            assert!(sv.is_empty(), "{}: start violations {sv:?}", f.name);
            let gv = validate_arrangement(&f.instance.goal_arrangement(), true);
            assert!(gv.is_empty(), "{}: goal violations {gv:?}", f.name);
            let g = f.labeled_graph().unwrap();
            assert_eq!(g.arcs, f.arcs, "{}: arc set differs from golden", f.name);
        }
    }

    #[test]
    fn fixture_lookup_accepts_aliases() {
        assert_eq!(fixture_by_name("fig2").unwrap().name, "discs7");
        assert_eq!(fixture_by_name("cuboids10").unwrap().name, "cuboids10");
        assert!(fixture_by_name("nope").is_none());
    }

    #[test]
    fn seven_discs_unlabeled_graph_has_expected_self_pairs() {
        // Objects 6 and 7 block their own goals; nothing else does.
        let f = seven_discs();
        let u = f.unlabeled_graph().unwrap();
        let selfs: Vec<usize> = (1..=7).filter(|&i| u.edges.contains(&(i, i))).collect();
        assert_eq!(selfs, vec![6, 7]);
    }
}
