//! Brute-force references that share no code with the distance solver.

use toeplitz_triples::random::{gaussian, seeded, SeededRng};

/// Longest feasible value of `f(target) − f(source)` under difference
/// constraints `f(v) − f(u) ≤ w` for each edge `(u, v, w)`, which is the
/// shortest-path distance from `source` to `target`. Bellman-Ford, so
/// negative cycles (an unbounded problem) are reported as `None`.
pub fn difference_constraint_max(n: usize, edges: &[(usize, usize, f64)], source: usize, target: usize) -> Option<f64> {
    let mut dist = vec![f64::INFINITY; n];
    dist[source] = 0.0;
    for _ in 0..n {
        let mut changed = false;
        for &(u, v, w) in edges {
            if dist[u] + w < dist[v] {
                dist[v] = dist[u] + w;
                changed = true;
            }
        }
        if !changed {
            return Some(dist[target]);
        }
    }
    None
}

/// 1-Lipschitz constraints between neighbours of an `n`-point grid on the
/// circle of length 2π.
pub fn circle_lipschitz_edges(n: usize) -> Vec<(usize, usize, f64)> {
    let h = 2.0 * std::f64::consts::PI / n as f64;
    (0..n).flat_map(|k| [(k, (k + 1) % n, h), ((k + 1) % n, k, h)]).collect()
}

/// Maximises `c·x / L(x)` over `x ≠ 0` by evaluating every point of the grid
/// `{−1, 0, 1}^d` and running Hooke-Jeeves pattern search from the best
/// `starts` of them. Iterates are kept on the unit sphere since the ratio is
/// scale invariant. Returns `inf` when some grid point has `L = 0` and `c·x ≠ 0`.
pub fn ratio_max(c: &[f64], seminorm: &dyn Fn(&[f64]) -> f64, starts: usize) -> f64 {
    let d = c.len();
    let ratio = |x: &[f64]| {
        let num: f64 = c.iter().zip(x).map(|(a, b)| a * b).sum();
        let l = seminorm(x);
        if l == 0.0 {
            if num.abs() > 1e-12 { f64::INFINITY } else { 0.0 }
        } else {
            num.abs() / l
        }
    };
    let mut scored = Vec::new();
    let mut x = vec![0.0; d];
    for code in 1..3usize.pow(d as u32) {
        let mut k = code;
        for xi in x.iter_mut() {
            *xi = (k % 3) as f64 - 1.0;
            k /= 3;
        }
        let r = ratio(&x);
        if r.is_infinite() {
            return r;
        }
        scored.push((r, x.clone()));
    }
    scored.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut best = 0.0_f64;
    for (_, x0) in scored.iter().take(starts) {
        best = best.max(hooke_jeeves(&ratio, normalized(x0), 0.25, 1e-9));
    }
    best
}

fn normalized(x: &[f64]) -> Vec<f64> {
    let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    x.iter().map(|v| v / n).collect()
}

/// Gains below this relative size count as no progress.
const MIN_GAIN: f64 = 1e-13;

fn better(new: f64, old: f64) -> bool {
    new > old + MIN_GAIN * old.abs()
}

fn hooke_jeeves(f: &dyn Fn(&[f64]) -> f64, mut base: Vec<f64>, mut step: f64, min_step: f64) -> f64 {
    let mut f_base = f(&base);
    let mut rng = seeded(0x4a11);
    let mut rounds = 0;
    while step > min_step && rounds < 5000 {
        rounds += 1;
        let (trial, f_trial) = explore(f, &base, f_base, step);
        if better(f_trial, f_base) {
            // Pattern move: keep going in the improving direction while it pays.
            let mut prev = base;
            let mut cur = trial;
            let mut f_cur = f_trial;
            for _ in 0..100 {
                let jump: Vec<f64> = cur.iter().zip(&prev).map(|(c, p)| 2.0 * c - p).collect();
                let (next, f_next) = explore(f, &normalized(&jump), f(&normalized(&jump)), step);
                if better(f_next, f_cur) {
                    prev = cur;
                    cur = next;
                    f_cur = f_next;
                } else {
                    break;
                }
            }
            base = cur;
            f_base = f_cur;
        } else if let Some((x, fx)) = random_poll(f, &base, f_base, step, &mut rng) {
            // Coordinate moves stall on the kinks of a max-eigenvalue
            // seminorm; random directions get past them.
            base = x;
            f_base = fx;
        } else {
            step *= 0.5;
        }
    }
    f_base
}

fn random_poll(f: &dyn Fn(&[f64]) -> f64, x: &[f64], fx: f64, step: f64, rng: &mut SeededRng) -> Option<(Vec<f64>, f64)> {
    for _ in 0..4 * x.len() {
        let dir = normalized(&(0..x.len()).map(|_| gaussian(rng)).collect::<Vec<_>>());
        for sign in [1.0, -1.0] {
            let t = normalized(&x.iter().zip(&dir).map(|(a, d)| a + sign * step * d).collect::<Vec<_>>());
            let ft = f(&t);
            if better(ft, fx) {
                return Some((t, ft));
            }
        }
    }
    None
}

fn explore(f: &dyn Fn(&[f64]) -> f64, x: &[f64], fx: f64, step: f64) -> (Vec<f64>, f64) {
    let mut cur = x.to_vec();
    let mut f_cur = fx;
    for i in 0..cur.len() {
        for sign in [1.0, -1.0] {
            let mut t = cur.clone();
            t[i] += sign * step;
            let t = normalized(&t);
            let ft = f(&t);
            if better(ft, f_cur) {
                cur = t;
                f_cur = ft;
                break;
            }
        }
    }
    (cur, f_cur)
}

