//! Independent reference implementations used to check the library.
//! Everything here is brute force or exact rational linear algebra and shares
//! no code with the engine beyond the graph type.

#![allow(dead_code)]

use num_rational::Ratio;
use rand::rngs::StdRng;
use rand::Rng;

use chipfire::constructions::random_connected;
use chipfire::Multigraph;

type Q = Ratio<i128>;

/// Exact inverse of the Laplacian with vertex 0 removed.
pub struct Laplacian {
    n: usize,
    inverse: Vec<Vec<Q>>,
}

impl Laplacian {
    pub fn new(g: &Multigraph) -> Self {
        let n = g.vertex_count();
        let m = n.saturating_sub(1);
        let mut a: Vec<Vec<Q>> = (1..n)
            .map(|i| {
                (1..n)
                    .map(|j| {
                        let x = if i == j {
                            g.valence(i) as i128
                        } else {
                            -(g.multiplicity(i, j) as i128)
                        };
                        Q::from_integer(x)
                    })
                    .collect()
            })
            .collect();
        let mut inv: Vec<Vec<Q>> = (0..m)
            .map(|i| (0..m).map(|j| Q::from_integer((i == j) as i128)).collect())
            .collect();
        for col in 0..m {
            let piv = (col..m).find(|&r| a[r][col] != Q::from_integer(0)).expect("reduced Laplacian is invertible");
            a.swap(col, piv);
            inv.swap(col, piv);
            let p = a[col][col];
            for j in 0..m {
                a[col][j] /= p;
                inv[col][j] /= p;
            }
            for r in 0..m {
                if r != col && a[r][col] != Q::from_integer(0) {
                    let f = a[r][col];
                    for j in 0..m {
                        let (x, y) = (a[col][j], inv[col][j]);
                        a[r][j] -= f * x;
                        inv[r][j] -= f * y;
                    }
                }
            }
        }
        Laplacian { n, inverse: inv }
    }

    /// `D` is the Laplacian of an integer vector.
    pub fn is_principal(&self, d: &[i64]) -> bool {
        if d.iter().sum::<i64>() != 0 {
            return false;
        }
        (0..self.n - 1).all(|i| {
            let x: Q = (0..self.n - 1)
                .map(|j| self.inverse[i][j] * Q::from_integer(d[j + 1] as i128))
                .sum();
            x.is_integer()
        })
    }
}

/// Calls `f` on every multiset of `k` vertices out of `n`.
pub fn multisets(n: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    fn go(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for v in start..n {
            cur.push(v);
            go(n, k, v, cur, f);
            cur.pop();
        }
    }
    go(n, k, 0, &mut Vec::new(), f);
}

pub fn equivalent_to_effective(lap: &Laplacian, d: &[i64]) -> bool {
    let deg: i64 = d.iter().sum();
    if deg < 0 {
        return false;
    }
    let mut found = false;
    multisets(d.len(), deg as usize, &mut |c| {
        if found {
            return;
        }
        let mut diff = d.to_vec();
        for &v in c {
            diff[v] -= 1;
        }
        found = lap.is_principal(&diff);
    });
    found
}

/// Rank straight from the definition.
pub fn rank(g: &Multigraph, d: &[i64]) -> i64 {
    let lap = Laplacian::new(g);
    if !equivalent_to_effective(&lap, d) {
        return -1;
    }
    let mut k = 1;
    loop {
        let mut all = true;
        multisets(d.len(), k, &mut |e| {
            if !all {
                return;
            }
            let mut rest = d.to_vec();
            for &v in e {
                rest[v] -= 1;
            }
            all = equivalent_to_effective(&lap, &rest);
        });
        if !all {
            return k as i64 - 1;
        }
        k += 1;
    }
}

/// Reducedness by checking every candidate firing set away from `q`.
pub fn is_reduced(g: &Multigraph, d: &[i64], q: usize) -> bool {
    let n = g.vertex_count();
    if (0..n).any(|v| v != q && d[v] < 0) {
        return false;
    }
    let others: Vec<usize> = (0..n).filter(|&v| v != q).collect();
    for mask in 1u32..(1 << others.len()) {
        let inside: Vec<bool> = {
            let mut m = vec![false; n];
            for (i, &v) in others.iter().enumerate() {
                m[v] = mask >> i & 1 == 1;
            }
            m
        };
        let legal = (0..n).filter(|&v| inside[v]).all(|v| {
            let out: i64 = (0..n).filter(|&w| !inside[w]).map(|w| g.multiplicity(v, w) as i64).sum();
            d[v] >= out
        });
        if legal {
            return false;
        }
    }
    true
}

pub fn spanning_trees(g: &Multigraph) -> u64 {
    let n = g.vertex_count();
    let m = g.edge_count();
    let mut count = 0;
    let mut chosen = Vec::new();
    fn go(g: &Multigraph, n: usize, m: usize, start: usize, chosen: &mut Vec<usize>, count: &mut u64) {
        if chosen.len() == n - 1 {
            let mut parent: Vec<usize> = (0..n).collect();
            fn find(p: &mut Vec<usize>, x: usize) -> usize {
                if p[x] != x {
                    let r = find(p, p[x]);
                    p[x] = r;
                }
                p[x]
            }
            for &e in chosen.iter() {
                let (u, v) = g.edges()[e];
                let (a, b) = (find(&mut parent, u), find(&mut parent, v));
                if a == b {
                    return;
                }
                parent[a] = b;
            }
            *count += 1;
            return;
        }
        for e in start..m {
            chosen.push(e);
            go(g, n, m, e + 1, chosen, count);
            chosen.pop();
        }
    }
    go(g, n, m, 0, &mut chosen, &mut count);
    count
}

/// Four disjoint connected vertex sets, pairwise joined by an edge.
pub fn has_k4_minor(g: &Multigraph) -> bool {
    let n = g.vertex_count();
    if n < 4 {
        return false;
    }
    let mut label = vec![0u8; n];
    loop {
        if branch_sets_ok(g, &label) {
            return true;
        }
        let mut i = 0;
        while i < n {
            label[i] += 1;
            if label[i] <= 4 {
                break;
            }
            label[i] = 0;
            i += 1;
        }
        if i == n {
            return false;
        }
    }
}

fn branch_sets_ok(g: &Multigraph, label: &[u8]) -> bool {
    let n = label.len();
    for b in 1..=4u8 {
        let members: Vec<usize> = (0..n).filter(|&v| label[v] == b).collect();
        let Some(&start) = members.first() else {
            return false;
        };
        let mut seen = vec![false; n];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(u) = stack.pop() {
            for &(w, _) in g.neighbors(u) {
                if label[w] == b && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if members.iter().any(|&v| !seen[v]) {
            return false;
        }
    }
    let mut adj = [[false; 5]; 5];
    for &(u, v) in g.edges() {
        adj[label[u] as usize][label[v] as usize] = true;
        adj[label[v] as usize][label[u] as usize] = true;
    }
    (1..=4).all(|a| (a + 1..=4).all(|b| adj[a][b]))
}

pub fn random_graph(rng: &mut StdRng, max_vertices: usize, max_extra: usize) -> Multigraph {
    let n = rng.gen_range(1..=max_vertices);
    let extra = if n > 1 { rng.gen_range(0..=max_extra) } else { 0 };
    random_connected(n, extra, rng).expect("random graph is valid")
}

pub fn random_values(rng: &mut StdRng, n: usize, lo: i64, hi: i64) -> Vec<i64> {
    (0..n).map(|_| rng.gen_range(lo..=hi)).collect()
}
