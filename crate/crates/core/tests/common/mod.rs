//! Helpers shared by the integration targets: independent oracles and
//! random instance generators.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use ppe::game_model::{parse_game, ActionProfile, ParseOptions, StageGame};
use ppe::geometry::{Point, PolygonV};
use ppe::vertex_enum::{HPolytope, HalfSpace};

pub const PD: &str = include_str!("../../games/pd.json");
pub const COURNOT: &str = include_str!("../../games/cournot.json");

pub fn pd() -> StageGame {
    parse_game(PD, &ParseOptions::default()).unwrap()
}

pub fn cournot() -> StageGame {
    parse_game(COURNOT, &ParseOptions::default()).unwrap()
}

pub fn game_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("games")
        .join(name)
}

/// Solves `a x = b` by Gaussian elimination; `None` when singular.
fn solve_square(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-10 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = a[r][col] / a[col][col];
                for c in col..n {
                    a[r][c] -= f * a[col][c];
                }
                b[r] -= f * b[col];
            }
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

fn subsets(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for i in start..n {
        cur.push(i);
        subsets(n, k, i + 1, cur, out);
        cur.pop();
    }
}

/// Vertices by trying every `dim`-subset of rows as the active set.
pub fn brute_force_vertices(p: &HPolytope) -> Vec<Vec<f64>> {
    let rows: Vec<HalfSpace> = p.rows().iter().map(|r| r.clone().normalized()).collect();
    let dim = p.dim();
    let mut combos = Vec::new();
    subsets(rows.len(), dim, 0, &mut Vec::new(), &mut combos);
    let mut found: Vec<Vec<f64>> = Vec::new();
    for s in combos {
        let a = s.iter().map(|&i| rows[i].normal.clone()).collect();
        let b = s.iter().map(|&i| rows[i].offset).collect();
        let Some(x) = solve_square(a, b) else {
            continue;
        };
        if rows.iter().all(|r| r.violation(&x) <= 1e-9)
            && !found.iter().any(|y| max_abs_diff(y, &x) <= 1e-7)
        {
            found.push(x);
        }
    }
    found
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Two point sets agree when each point has a partner within `tol`.
pub fn same_point_set(a: &[Vec<f64>], b: &[Vec<f64>], tol: f64) -> bool {
    let covered = |xs: &[Vec<f64>], ys: &[Vec<f64>]| {
        xs.iter()
            .all(|x| ys.iter().any(|y| max_abs_diff(x, y) <= tol))
    };
    covered(a, b) && covered(b, a)
}

/// A bounded system of dimension 1..=4 with at most 12 rows: a box or a
/// simplex, plus random cuts. Integer cuts are mixed in to create
/// degenerate vertices.
pub fn random_bounded_system(rng: &mut ChaCha8Rng) -> HPolytope {
    let dim = rng.gen_range(1..=4);
    let mut p = HPolytope::new(dim);
    if rng.gen_bool(0.5) {
        for i in 0..dim {
            let mut e = vec![0.0; dim];
            e[i] = 1.0;
            p.push(HalfSpace::new(e.clone(), 1.0));
            e[i] = -1.0;
            p.push(HalfSpace::new(e, 1.0));
        }
    } else {
        for i in 0..dim {
            let mut e = vec![0.0; dim];
            e[i] = -1.0;
            p.push(HalfSpace::new(e, 0.0));
        }
        p.push(HalfSpace::new(vec![1.0; dim], 1.0));
    }
    let extra = rng.gen_range(0..=12 - p.rows().len());
    let integer = rng.gen_bool(0.3);
    for _ in 0..extra {
        let normal: Vec<f64> = (0..dim)
            .map(|_| {
                if integer {
                    rng.gen_range(-1..=1) as f64
                } else {
                    rng.gen_range(-1.0..1.0)
                }
            })
            .collect();
        let offset = if integer {
            rng.gen_range(0..=2) as f64 * 0.5
        } else {
            rng.gen_range(-0.2..1.0)
        };
        p.push(HalfSpace::new(normal, offset));
    }
    p
}

/// Pure Nash profiles by checking every unilateral deviation.
pub fn nash_oracle(g: &StageGame) -> Vec<ActionProfile> {
    g.profiles()
        .filter(|&a| {
            (0..2).all(|i| {
                let own = if i == 0 { g.payoff(a).x } else { g.payoff(a).y };
                (0..g.num_actions(i)).all(|d| {
                    let p = g.payoff(a.with_action(i, d));
                    (if i == 0 { p.x } else { p.y }) <= own
                })
            })
        })
        .collect()
}

/// A random `n × n` game with integer payoffs, at least one pure Nash profile
/// and 2..=4 signals.
pub fn random_game_with_nash(rng: &mut ChaCha8Rng, n: usize) -> StageGame {
    loop {
        let payoffs: Vec<Vec<[f64; 2]>> = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| [rng.gen_range(-5..=5) as f64, rng.gen_range(-5..=5) as f64])
                    .collect()
            })
            .collect();
        let ny = rng.gen_range(2..=4);
        let probs: Vec<Vec<Vec<f64>>> = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| {
                        let w: Vec<f64> = (0..ny).map(|_| rng.gen_range(0..=4) as f64).collect();
                        let total: f64 = w.iter().sum();
                        if total == 0.0 {
                            let mut v = vec![0.0; ny];
                            v[0] = 1.0;
                            v
                        } else {
                            w.iter().map(|x| x / total).collect()
                        }
                    })
                    .collect()
            })
            .collect();
        let labels = |p: &str| (0..n).map(|i| format!("{p}{i}")).collect::<Vec<_>>();
        let g = StageGame::new(
            [labels("r"), labels("c")],
            payoffs,
            (0..ny).map(|y| format!("y{y}")).collect(),
            probs,
        )
        .unwrap();
        if !nash_oracle(&g).is_empty() {
            return g;
        }
    }
}

/// Largest distance from a vertex of `set` to `q`.
pub fn max_distance_to(set: &PolygonV, q: Point) -> f64 {
    set.vertices().iter().map(|p| p.dist(q)).fold(0.0, f64::max)
}
