//! Library results against independent, hand-written oracles.

mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{cournot, game_path, nash_oracle};
use ppe::game_model::{feasible_set, minmax, pure_nash, ActionProfile};
use ppe::geometry::{
    area, convex_hull, hausdorff, intersect_halfplane, point_segment_distance, to_halfspaces,
    to_vertices, GeomTolerance, HalfPlane, Point, PolygonV,
};
use ppe::vertex_enum::{
    affine_image_2d, enumerate_vertices, AffineMap2, EnumOptions, HPolytope, HalfSpace,
};

fn tol() -> GeomTolerance {
    GeomTolerance::default()
}

fn random_points(rng: &mut ChaCha8Rng, n: usize) -> Vec<Point> {
    (0..n)
        .map(|_| Point::new(rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)))
        .collect()
}

fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a - o).cross(b - o)
}

/// `p` lies in the closed triangle `abc` (either orientation).
fn in_triangle(p: Point, a: Point, b: Point, c: Point) -> bool {
    let (d1, d2, d3) = (cross(a, b, p), cross(b, c, p), cross(c, a, p));
    let neg = d1 < 0.0 || d2 < 0.0 || d3 < 0.0;
    let pos = d1 > 0.0 || d2 > 0.0 || d3 > 0.0;
    !(neg && pos)
}

/// Hull vertices by Carathéodory: a point is extreme iff no three other
/// points span a triangle containing it.
fn brute_hull_vertices(pts: &[Point]) -> Vec<Point> {
    let n = pts.len();
    (0..n)
        .filter(|&i| {
            let others: Vec<Point> = (0..n).filter(|&j| j != i).map(|j| pts[j]).collect();
            let m = others.len();
            for a in 0..m {
                for b in a + 1..m {
                    for c in b + 1..m {
                        if in_triangle(pts[i], others[a], others[b], others[c]) {
                            return false;
                        }
                    }
                }
            }
            true
        })
        .map(|i| pts[i])
        .collect()
}

fn same_points(a: &[Point], b: &[Point], eps: f64) -> bool {
    a.len() == b.len()
        && a.iter().all(|p| b.iter().any(|q| p.dist(*q) <= eps))
        && b.iter().all(|p| a.iter().any(|q| p.dist(*q) <= eps))
}

#[test]
fn cournot_static_values() {
    let g = cournot();
    let mm = minmax(&g);
    // row maxima per column for player 1: 21, 10, 0; column maxima per row
    // for player 2: 13, 4, 0
    assert_eq!(mm.v_under, Point::new(0.0, 0.0));
    assert_eq!(mm.punisher, [2, 2]);
    assert_eq!(pure_nash(&g), vec![ActionProfile(1, 1)]);
    assert_eq!(nash_oracle(&g), pure_nash(&g));
    assert_eq!(g.payoff(ActionProfile(1, 1)), Point::new(10.0, 4.0));

    let payoffs: Vec<Point> = g.profiles().map(|a| g.payoff(a)).collect();
    let want = brute_hull_vertices(&payoffs);
    assert!(same_points(feasible_set(&g).vertices(), &want, 1e-12));
}

#[test]
fn hull_matches_caratheodory_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..5 {
        let pts = random_points(&mut rng, 100);
        let h = convex_hull(&pts, &tol());
        assert!(same_points(h.vertices(), &brute_hull_vertices(&pts), 0.0));
    }
}

#[test]
fn halfspace_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..50 {
        let n = rng.gen_range(3..20);
        let p = convex_hull(&random_points(&mut rng, n), &tol());
        if p.len() < 3 {
            continue;
        }
        let back = to_vertices(&to_halfspaces(&p).unwrap(), &tol()).unwrap();
        assert!(same_points(back.vertices(), p.vertices(), 1e-9));
    }
}

/// Sutherland–Hodgman against a single halfplane.
fn edge_walk_clip(poly: &[Point], n: Point, b: f64) -> Vec<Point> {
    let inside = |p: Point| n.dot(p) <= b;
    let mut out = Vec::new();
    for i in 0..poly.len() {
        let (p, q) = (poly[i], poly[(i + 1) % poly.len()]);
        if inside(p) {
            out.push(p);
        }
        if inside(p) != inside(q) {
            let t = (b - n.dot(p)) / n.dot(q - p);
            out.push(p + t * (q - p));
        }
    }
    out
}

#[test]
fn clipping_matches_edge_walk() {
    let square = convex_hull(
        &[
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ],
        &tol(),
    );
    let half = intersect_halfplane(&square, &HalfPlane::new(Point::new(1.0, 0.0), 0.5), &tol());
    assert!((area(&half) - 0.5).abs() < 1e-12);

    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..100 {
        let p = convex_hull(&random_points(&mut rng, 12), &tol());
        let a = rng.gen_range(0.0..std::f64::consts::TAU);
        let n = Point::new(a.cos(), a.sin());
        let b = n.dot(Point::new(0.5, 0.5)) + rng.gen_range(-0.4..0.4);
        let got = intersect_halfplane(&p, &HalfPlane::new(n, b), &tol());
        let want = convex_hull(&edge_walk_clip(p.vertices(), n, b), &tol());
        assert!((area(&got) - area(&want)).abs() < 1e-9);
        if !want.is_empty() {
            assert!(hausdorff(&got, &want).unwrap() < 1e-9);
        }
    }
}

/// Directed Hausdorff by walking the boundary of `a` in small steps and
/// measuring each sample against the region `b`.
fn sampled_directed(a: &PolygonV, b: &PolygonV, steps: usize) -> f64 {
    let bv = b.vertices();
    let dist_to_b = |p: Point| {
        let n = bv.len();
        let inside = (0..n).all(|i| cross(bv[i], bv[(i + 1) % n], p) >= 0.0);
        if inside {
            0.0
        } else {
            (0..n)
                .map(|i| point_segment_distance(p, bv[i], bv[(i + 1) % n]))
                .fold(f64::INFINITY, f64::min)
        }
    };
    let av = a.vertices();
    let mut worst: f64 = 0.0;
    for i in 0..av.len() {
        let (p, q) = (av[i], av[(i + 1) % av.len()]);
        for s in 0..=steps {
            let t = s as f64 / steps as f64;
            worst = worst.max(dist_to_b(p + t * (q - p)));
        }
    }
    worst
}

#[test]
fn hausdorff_matches_boundary_sampling() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..30 {
        let a = convex_hull(&random_points(&mut rng, 10), &tol());
        let b = convex_hull(&random_points(&mut rng, 10), &tol());
        if a.len() < 3 || b.len() < 3 {
            continue;
        }
        let want = sampled_directed(&a, &b, 2000).max(sampled_directed(&b, &a, 2000));
        let got = hausdorff(&a, &b).unwrap();
        assert!((got - want).abs() < 1e-6, "{got} vs {want}");
    }
}

#[test]
fn affine_image_contains_sampled_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..20 {
        let dim = 4;
        let mut p = HPolytope::new(dim);
        for k in 0..dim {
            let mut e = vec![0.0; dim];
            e[k] = 1.0;
            p.push(HalfSpace::new(e.clone(), 1.0));
            e[k] = -1.0;
            p.push(HalfSpace::new(e, 1.0));
        }
        for _ in 0..3 {
            let n: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
            p.push(HalfSpace::new(n, rng.gen_range(0.2..1.0)));
        }
        let map = AffineMap2 {
            rows: [
                (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect(),
                (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect(),
            ],
            offset: Point::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
        };
        let vs = enumerate_vertices(&p, &EnumOptions::default()).unwrap();
        let image = convex_hull(&affine_image_2d(&vs, &map), &tol());
        let mut hits = 0;
        while hits < 500 {
            let x: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
            if p.max_violation(&x) > 0.0 {
                continue;
            }
            hits += 1;
            assert!(image.contains(map.apply(&x), &tol()));
        }
    }
}

#[test]
fn sweep_area_grows_with_patience() {
    let dir = tempfile::tempdir().unwrap();
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_ppe"))
        .args(["sweep", "--game"])
        .arg(game_path("pd.json"))
        .args(["--delta-grid", "0.5,0.8,0.9", "--theta", "0.02", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let mut rdr = csv::Reader::from_path(dir.path().join("summary.csv")).unwrap();
    let areas: Vec<f64> = rdr
        .records()
        .map(|r| r.unwrap()[2].parse().unwrap())
        .collect();
    assert_eq!(areas.len(), 3);
    assert!(areas.windows(2).all(|w| w[0] <= w[1]), "{areas:?}");
}
