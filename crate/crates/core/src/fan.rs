//! The simplicial fan on the almost positive roots: cones are the pairwise
//! compatible subsets, rays are the images of the roots in `Z^n`.

use std::collections::{HashMap, VecDeque};

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::combinat::{catalan, compatible, AlmostPositiveRoot};
use crate::error::{Error, Result};
use crate::exactla::bareiss;

/// Largest rank for which the fan is built (ray sets are `u128` bitmasks).
pub const MAX_FAN_N: usize = 10;

pub type RayVector = Vec<i64>;

pub fn ray_vector(a: &AlmostPositiveRoot, n: usize) -> RayVector {
    let mut v = vec![0i64; n];
    match a {
        AlmostPositiveRoot::NegSimple(i) => v[i - 1] = -1,
        AlmostPositiveRoot::Pos(r) => {
            for k in r.lo..=r.hi {
                v[k - 1] = 1;
            }
        }
    }
    v
}

#[derive(Clone, Debug)]
pub struct Fan {
    pub n: usize,
    pub rays: Vec<(AlmostPositiveRoot, RayVector)>,
    /// `cone_counts[k]` = number of cones with `k` rays, `k = 0..=n`.
    pub cone_counts: Vec<u64>,
    /// Maximal cones as sorted ray-index lists, in lexicographic order.
    pub max_cones: Vec<Vec<usize>>,
    /// Sizes of the maximal compatible subsets (all equal `n` for a pure fan).
    pub maximal_clique_sizes: Vec<usize>,
    adjacency: Vec<u128>,
}

impl Fan {
    pub fn ray_count(&self) -> usize {
        self.rays.len()
    }

    pub fn is_cone(&self, rays: &[usize]) -> bool {
        rays.iter()
            .enumerate()
            .all(|(k, &a)| rays[k + 1..].iter().all(|&b| self.adjacency[a] >> b & 1 == 1))
    }

    pub fn label(&self, k: usize) -> String {
        self.rays[k].0.to_string()
    }

    pub fn to_json(&self) -> FanJson {
        FanJson {
            n: self.n,
            rays: self
                .rays
                .iter()
                .map(|(a, v)| RayJson {
                    label: a.to_string(),
                    vector: v.clone(),
                })
                .collect(),
            max_cones: self.max_cones.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RayJson {
    pub label: String,
    pub vector: Vec<i64>,
}

/// Export format: `{"n":N,"rays":[{"label":..,"vector":[..]}],"max_cones":[[..]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanJson {
    pub n: usize,
    pub rays: Vec<RayJson>,
    pub max_cones: Vec<Vec<usize>>,
}

pub fn build_fan(n: usize) -> Result<Fan> {
    if n == 0 {
        return Err(Error::Dimension("the fan needs n >= 1".into()));
    }
    if n > MAX_FAN_N {
        return Err(Error::ResourceLimit(format!(
            "fan construction capped at n <= {MAX_FAN_N}"
        )));
    }
    let labels = AlmostPositiveRoot::all(n);
    let rays: Vec<_> = labels.iter().map(|a| (*a, ray_vector(a, n))).collect();
    let adjacency: Vec<u128> = labels
        .iter()
        .enumerate()
        .map(|(i, a)| {
            labels
                .iter()
                .enumerate()
                .filter(|&(j, b)| j != i && compatible(a, b))
                .fold(0u128, |m, (j, _)| m | 1 << j)
        })
        .collect();

    let mut cone_counts = vec![0u64; labels.len() + 1];
    let mut max_cones = Vec::new();
    let mut maximal_clique_sizes = Vec::new();
    let mut cur = Vec::new();
    let all = if labels.len() == 128 {
        u128::MAX
    } else {
        (1u128 << labels.len()) - 1
    };
    enumerate_cliques(&adjacency, all, &mut cur, &mut cone_counts, &mut |clique| {
        maximal_clique_sizes.push(clique.len());
        if clique.len() == n {
            max_cones.push(clique.to_vec());
        }
    });
    cone_counts.truncate(n + 1);
    max_cones.sort();
    Ok(Fan {
        n,
        rays,
        cone_counts,
        max_cones,
        maximal_clique_sizes,
        adjacency,
    })
}

/// Visit every clique (counting by size); `on_maximal` fires for cliques that
/// cannot be extended by any vertex.
fn enumerate_cliques<F: FnMut(&[usize])>(
    adj: &[u128],
    candidates: u128,
    cur: &mut Vec<usize>,
    counts: &mut [u64],
    on_maximal: &mut F,
) {
    counts[cur.len()] += 1;
    let common = cur.iter().fold(!0u128 >> (128 - adj.len()), |m, &v| m & adj[v]);
    if common == 0 {
        on_maximal(cur);
    }
    let mut cand = candidates;
    while cand != 0 {
        let v = cand.trailing_zeros() as usize;
        cand &= cand - 1;
        cur.push(v);
        // only larger indices keep each clique visited once
        let higher = if v + 1 >= 128 { 0 } else { !((1u128 << (v + 1)) - 1) };
        enumerate_cliques(adj, candidates & adj[v] & higher, cur, counts, on_maximal);
        cur.pop();
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FanCheck {
    pub passed: bool,
    pub violations: Vec<String>,
}

impl FanCheck {
    fn from_violations(mut violations: Vec<String>) -> Self {
        violations.sort();
        FanCheck {
            passed: violations.is_empty(),
            violations,
        }
    }
}

fn cone_det(f: &Fan, cone: &[usize]) -> BigInt {
    let m: Vec<Vec<BigInt>> = cone
        .iter()
        .map(|&k| f.rays[k].1.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    bareiss(m)
}

/// Every maximal cone has `n` rays with determinant `±1`; every maximal
/// compatible set has exactly `n` elements.
pub fn verify_smooth(f: &Fan) -> FanCheck {
    let mut v = Vec::new();
    for (k, &s) in f.maximal_clique_sizes.iter().enumerate() {
        if s != f.n {
            v.push(format!("maximal compatible set #{k} has {s} elements"));
        }
    }
    for cone in &f.max_cones {
        let d = cone_det(f, cone);
        if d.abs() != BigInt::from(1) {
            let labels: Vec<String> = cone.iter().map(|&k| f.label(k)).collect();
            v.push(format!("cone {{{}}} has determinant {d}", labels.join(",")));
        }
    }
    FanCheck::from_violations(v)
}

/// Wall pairing: every codimension-one cone lies in exactly two maximal
/// cones, on opposite sides; and the maximal cones are connected through
/// walls.
pub fn verify_complete(f: &Fan) -> FanCheck {
    let mut v = Vec::new();
    let mut walls: HashMap<Vec<usize>, Vec<(usize, usize)>> = HashMap::new();
    for (ci, cone) in f.max_cones.iter().enumerate() {
        for drop in 0..cone.len() {
            let mut wall = cone.clone();
            let opposite = wall.remove(drop);
            walls.entry(wall).or_default().push((ci, opposite));
        }
    }
    let expected_walls = f.cone_counts.get(f.n.saturating_sub(1)).copied().unwrap_or(0);
    if walls.len() as u64 != expected_walls {
        v.push(format!(
            "{} walls of maximal cones but {} cones of dimension n-1",
            walls.len(),
            expected_walls
        ));
    }
    let mut graph = vec![Vec::new(); f.max_cones.len()];
    for (wall, sides) in &walls {
        if sides.len() != 2 {
            v.push(format!("wall {wall:?} lies in {} maximal cones", sides.len()));
            continue;
        }
        // the opposite rays must lie strictly on opposite sides of the wall
        let side = |ray: usize| {
            let mut cone = wall.clone();
            cone.push(ray);
            cone_det(f, &cone)
        };
        let (a, b) = (side(sides[0].1), side(sides[1].1));
        if (a.sign() == b.sign()) || a.is_zero() || b.is_zero() {
            v.push(format!("wall {wall:?}: both neighbours on the same side"));
        }
        graph[sides[0].0].push(sides[1].0);
        graph[sides[1].0].push(sides[0].0);
    }
    if !f.max_cones.is_empty() {
        let mut seen = vec![false; graph.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(c) = queue.pop_front() {
            for &d in &graph[c] {
                if !seen[d] {
                    seen[d] = true;
                    queue.push_back(d);
                }
            }
        }
        let unreached = seen.iter().filter(|s| !**s).count();
        if unreached > 0 {
            v.push(format!("{unreached} maximal cones not reachable through walls"));
        }
    }
    FanCheck::from_violations(v)
}

/// `b_{2k} = Σ_{i≥k} (-1)^{i-k} C(i,k) d_{n-i}` from the cone counts.
pub fn betti_numbers(f: &Fan) -> Vec<BigInt> {
    let n = f.n;
    let d = &f.cone_counts;
    (0..=n)
        .map(|k| {
            let mut acc = BigInt::zero();
            for i in k..=n {
                let term = BigInt::from(binomial(i as u64, k as u64)) * BigInt::from(d[n - i]);
                if (i - k) % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        })
        .collect()
}

fn binomial(n: u64, k: u64) -> BigUint {
    let mut b = BigUint::from(1u32);
    for j in 0..k {
        b = b * BigUint::from(n - j) / BigUint::from(j + 1);
    }
    b
}

/// Whether the number of maximal cones is `c_{n+1}`.
pub fn max_cone_count_is_catalan(f: &Fan) -> bool {
    BigUint::from(f.max_cones.len()) == catalan(f.n as u64 + 1)
}

/// Betti numbers as machine integers.
pub fn betti_u64(f: &Fan) -> Vec<u64> {
    betti_numbers(f)
        .iter()
        .map(|b| b.to_u64().unwrap_or(u64::MAX))
        .collect()
}
