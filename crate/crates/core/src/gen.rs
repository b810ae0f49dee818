//! Seeded benchmark generators: grid-world reach-avoid controllers and
//! uniformly random policy tables.

use std::collections::{BTreeSet, VecDeque};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::policy::{ActionSet, Policy, Value, VarKind};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub size: usize,
    /// Number of rectangular obstacles.
    pub obstacles: usize,
    /// Number of goal cells. With more than one, a third variable `g`
    /// selects which goal the controller currently heads for.
    pub goals: usize,
    pub seed: u64,
}

impl GridSpec {
    /// A square grid with obstacle count growing with its side.
    pub fn square(size: usize, seed: u64) -> Self {
        GridSpec {
            size,
            obstacles: size / 3,
            goals: 1,
            seed,
        }
    }

    /// A square grid visiting `size / 2` goals in turn.
    pub fn patrol(size: usize, seed: u64) -> Self {
        GridSpec {
            goals: (size / 2).max(2),
            ..GridSpec::square(size, seed)
        }
    }
}

const MOVES: [(&str, i64, i64); 4] = [("E", 1, 0), ("N", 0, 1), ("S", 0, -1), ("W", -1, 0)];

/// Most permissive controller reaching the goal on shortest paths while
/// avoiding obstacles. States are the cells that can reach the goal; every
/// move decreasing the distance is allowed, and the goal itself allows
/// `stay`. With several goals the state also records the goal index.
pub fn grid_world(spec: GridSpec) -> Result<Policy> {
    let n = spec.size.max(2) as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut blocked = vec![false; (n * n) as usize];
    let idx = |x: i64, y: i64| (y * n + x) as usize;
    let inside = |x: i64, y: i64| (0..n).contains(&x) && (0..n).contains(&y);
    for _ in 0..spec.obstacles {
        let w = rng.gen_range(1..=(n / 3).max(1));
        let h = rng.gen_range(1..=(n / 3).max(1));
        let x0 = rng.gen_range(0..=n - w);
        let y0 = rng.gen_range(0..=n - h);
        for y in y0..y0 + h {
            for x in x0..x0 + w {
                blocked[idx(x, y)] = true;
            }
        }
    }
    let mut free: Vec<(i64, i64)> = (0..n)
        .flat_map(|y| (0..n).map(move |x| (x, y)))
        .filter(|&(x, y)| !blocked[idx(x, y)])
        .collect();
    if free.is_empty() {
        blocked[0] = false;
        free.push((0, 0));
    }
    let goals: Vec<(i64, i64)> = (0..spec.goals.max(1))
        .map(|_| *free.choose(&mut rng).expect("nonempty"))
        .collect();
    let multi = goals.len() > 1;

    let mut rows = Vec::new();
    for (g, &goal) in goals.iter().enumerate() {
        let mut dist = vec![usize::MAX; (n * n) as usize];
        dist[idx(goal.0, goal.1)] = 0;
        let mut queue = VecDeque::from([goal]);
        while let Some((x, y)) = queue.pop_front() {
            let d = dist[idx(x, y)];
            for (_, dx, dy) in MOVES {
                let (nx, ny) = (x + dx, y + dy);
                if inside(nx, ny) && !blocked[idx(nx, ny)] && dist[idx(nx, ny)] == usize::MAX {
                    dist[idx(nx, ny)] = d + 1;
                    queue.push_back((nx, ny));
                }
            }
        }
        for y in 0..n {
            for x in 0..n {
                let d = dist[idx(x, y)];
                if d == usize::MAX {
                    continue;
                }
                let actions = if d == 0 {
                    ActionSet::singleton("stay")
                } else {
                    ActionSet::new(MOVES.iter().filter_map(|&(name, dx, dy)| {
                        let (nx, ny) = (x + dx, y + dy);
                        (inside(nx, ny) && dist[idx(nx, ny)] == d - 1).then_some(name)
                    }))
                };
                let mut state = vec![Value::Int(x), Value::Int(y)];
                if multi {
                    state.push(Value::Int(g as i64));
                }
                rows.push((state, actions));
            }
        }
    }
    let mut vars = vec![("x".to_string(), Some(VarKind::Int)), ("y".to_string(), Some(VarKind::Int))];
    if multi {
        vars.push(("g".to_string(), Some(VarKind::Int)));
    }
    Policy::new(vars, rows)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomSpec {
    pub max_vars: usize,
    pub max_domain: usize,
    pub max_actions: usize,
    pub max_rows: usize,
    pub seed: u64,
}

impl Default for RandomSpec {
    fn default() -> Self {
        RandomSpec {
            max_vars: 4,
            max_domain: 8,
            max_actions: 6,
            max_rows: 64,
            seed: 0,
        }
    }
}

/// A random integer policy: each variable draws up to `max_domain` distinct
/// values from `[-10, 10]`, rows are distinct points of the product and
/// each row gets a uniformly random nonempty subset of the actions.
pub fn random_policy(spec: RandomSpec) -> Result<Policy> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let nvars = rng.gen_range(1..=spec.max_vars.max(1));
    let nactions = rng.gen_range(1..=spec.max_actions.max(1));
    let actions: Vec<String> = (0..nactions).map(|i| format!("a{i}")).collect();
    let pool: Vec<i64> = (-10..=10).collect();
    let domains: Vec<Vec<i64>> = (0..nvars)
        .map(|_| {
            let k = rng.gen_range(1..=spec.max_domain.max(1));
            let mut d: Vec<i64> = pool.choose_multiple(&mut rng, k).copied().collect();
            d.sort_unstable();
            d
        })
        .collect();
    let product: usize = domains.iter().map(Vec::len).product();
    let target = rng.gen_range(1..=spec.max_rows.max(1)).min(product);

    let mut states = BTreeSet::new();
    if target * 2 >= product {
        let mut all: Vec<usize> = (0..product).collect();
        all.shuffle(&mut rng);
        states.extend(all.into_iter().take(target));
    } else {
        while states.len() < target {
            states.insert(rng.gen_range(0..product));
        }
    }

    let rows = states
        .into_iter()
        .map(|mut code| {
            let state: Vec<Value> = domains
                .iter()
                .map(|d| {
                    let v = d[code % d.len()];
                    code /= d.len();
                    Value::Int(v)
                })
                .collect();
            let mask = rng.gen_range(1..(1u32 << nactions));
            let set = ActionSet::new((0..nactions).filter(|i| mask >> i & 1 == 1).map(|i| actions[i].clone()));
            (state, set)
        })
        .collect();
    let vars = (0..nvars).map(|i| (format!("x{i}"), Some(VarKind::Int))).collect();
    Policy::new(vars, rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_world_is_deterministic_and_sound() {
        let spec = GridSpec::square(8, 3);
        let p = grid_world(spec).unwrap();
        assert_eq!(p, grid_world(spec).unwrap());
        let goals: Vec<_> = p.rows().filter(|(_, a)| a.contains("stay")).collect();
        assert_eq!(goals.len(), 1);
        for (s, a) in p.rows() {
            assert!(!a.is_empty(), "{s}");
        }
    }

    #[test]
    fn open_grid_has_every_cell() {
        let p = grid_world(GridSpec {
            size: 5,
            obstacles: 0,
            goals: 1,
            seed: 1,
        })
        .unwrap();
        assert_eq!(p.len(), 25);
    }

    #[test]
    fn several_goals_add_a_goal_variable() {
        let p = grid_world(GridSpec {
            size: 4,
            obstacles: 0,
            goals: 3,
            seed: 2,
        })
        .unwrap();
        assert_eq!(p.vars().len(), 3);
        assert_eq!(p.len(), 48);
        assert_eq!(p.rows().filter(|(_, a)| a.contains("stay")).count(), 3);
    }

    #[test]
    fn random_policy_respects_bounds() {
        for seed in 0..50 {
            let spec = RandomSpec {
                seed,
                ..Default::default()
            };
            let p = random_policy(spec).unwrap();
            assert!(p.vars().len() <= 4);
            assert!(p.vars().iter().all(|v| v.domain.len() <= 8));
            assert!(p.actions().len() <= 6);
            assert!(!p.is_empty() && p.len() <= 64);
            assert_eq!(p, random_policy(spec).unwrap());
        }
    }
}
