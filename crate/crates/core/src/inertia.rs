//! Dense symmetric matrices, a Jacobi eigensolver, and the star-forest
//! witness matrices whose nullity meets the game value.

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Dense real symmetric matrix; symmetry is enforced at construction.
#[derive(Clone, Debug)]
pub struct SymmetricMatrix {
    n: usize,
    a: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn zeros(n: usize) -> Self {
        SymmetricMatrix { n, a: vec![0.0; n * n] }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    /// Set a_{ij} and a_{ji} together.
    pub fn set(&mut self, i: usize, j: usize, x: f64) {
        self.a[i * self.n + j] = x;
        self.a[j * self.n + i] = x;
    }

    pub fn adjacency(g: &Graph) -> Self {
        let mut m = SymmetricMatrix::zeros(g.n());
        for &(u, v) in g.edges() {
            m.set(u, v, 1.0);
        }
        m
    }

    /// Add c to every diagonal entry.
    pub fn shift(&mut self, c: f64) {
        for i in 0..self.n {
            self.a[i * self.n + i] += c;
        }
    }

    pub fn direct_sum(&self, other: &SymmetricMatrix) -> SymmetricMatrix {
        let n = self.n + other.n;
        let mut m = SymmetricMatrix::zeros(n);
        for i in 0..self.n {
            for j in 0..self.n {
                m.a[i * n + j] = self.get(i, j);
            }
        }
        for i in 0..other.n {
            for j in 0..other.n {
                m.a[(self.n + i) * n + (self.n + j)] = other.get(i, j);
            }
        }
        m
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.a[i * self.n + i]).sum()
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.a.iter().map(|x| x * x).sum()
    }

    /// Congruence D * A * D by a diagonal sign matrix.
    pub fn sign_congruence(&self, signs: &[f64]) -> SymmetricMatrix {
        let mut m = self.clone();
        for i in 0..self.n {
            for j in 0..self.n {
                m.a[i * self.n + j] *= signs[i] * signs[j];
            }
        }
        m
    }
}

/// True iff the off-diagonal support of `m` is exactly the edge set of `g`;
/// the diagonal is unconstrained.
pub fn pattern_matches(m: &SymmetricMatrix, g: &Graph) -> Result<bool> {
    if m.order() != g.n() {
        return Err(Error::Domain(format!(
            "matrix order {} does not match graph order {}",
            m.order(),
            g.n()
        )));
    }
    for i in 0..g.n() {
        for j in (i + 1)..g.n() {
            if (m.get(i, j) != 0.0) != g.has_edge(i, j) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

const MAX_SWEEPS: usize = 100;

/// Eigenvalues by cyclic Jacobi rotations, sorted ascending. Converges to
/// off-diagonal Frobenius norm below `tol`.
pub fn eigenvalues_symmetric(m: &SymmetricMatrix, tol: f64) -> Result<Vec<f64>> {
    let n = m.n;
    let mut a = m.a.clone();
    let idx = |i: usize, j: usize| i * n + j;
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[idx(i, j)] * a[idx(i, j)])
            .sum();
        if off.sqrt() < tol {
            let mut eigs: Vec<f64> = (0..n).map(|i| a[idx(i, i)]).collect();
            eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
            return Ok(eigs);
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[idx(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[idx(q, q)] - a[idx(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[idx(k, p)];
                    let akq = a[idx(k, q)];
                    a[idx(k, p)] = c * akp - s * akq;
                    a[idx(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[idx(p, k)];
                    let aqk = a[idx(q, k)];
                    a[idx(p, k)] = c * apk - s * aqk;
                    a[idx(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }
    Err(Error::NoConvergence)
}

/// Eigenvalue sign counts with a zero threshold relative to the spectral
/// radius.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Inertia {
    pub positives: usize,
    pub negatives: usize,
    pub nullity: usize,
}

pub const DEFAULT_ZERO_TOL: f64 = 1e-8;

pub fn inertia_of(m: &SymmetricMatrix, zero_tol: f64) -> Result<Inertia> {
    let eigs = eigenvalues_symmetric(m, zero_tol)?;
    let radius = eigs.iter().fold(0.0f64, |r, x| r.max(x.abs()));
    let cut = zero_tol * radius.max(1.0);
    let positives = eigs.iter().filter(|&&x| x > cut).count();
    let negatives = eigs.iter().filter(|&&x| x < -cut).count();
    Ok(Inertia { positives, negatives, nullity: m.n - positives - negatives })
}

/// Witness matrix for a forest of stars with `leaves[i]` leaves each: the
/// first min(q, k) adjacency blocks are left in place, the rest are shifted
/// by the square root of their leaf count so they become positive
/// semidefinite.
pub fn star_witness(leaves: &[usize], q: usize) -> Result<SymmetricMatrix> {
    if leaves.is_empty() || leaves.iter().any(|&m| m < 1) {
        return Err(Error::Domain("need at least one star, each with a leaf".into()));
    }
    let mut out: Option<SymmetricMatrix> = None;
    for (i, &m) in leaves.iter().enumerate() {
        let star = crate::families::star(m + 1)?;
        let mut block = SymmetricMatrix::adjacency(&star);
        if i >= q {
            block.shift((m as f64).sqrt());
        }
        out = Some(match out {
            None => block,
            Some(acc) => acc.direct_sum(&block),
        });
    }
    Ok(out.unwrap())
}

/// Expected nullity of the witness: sum of (leaves - 1) over the unshifted
/// blocks, plus one per shifted block.
pub fn witness_nullity(leaves: &[usize], q: usize) -> usize {
    let k = leaves.len();
    if q < k {
        leaves[..q].iter().map(|&m| m - 1).sum::<usize>() + (k - q)
    } else {
        leaves.iter().map(|&m| m - 1).sum()
    }
}

#[derive(Clone, Debug)]
pub struct RemarkReport {
    pub inertia: Inertia,
    pub expected_negatives: usize,
    pub expected_nullity: usize,
    pub pattern_ok: bool,
    pub zq_value: u32,
    pub failures: Vec<String>,
}

impl RemarkReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Check the witness for a star forest: sign counts, nullity, pattern, and
/// nullity at most the supplied game value.
pub fn verify_remark(leaves: &[usize], q: usize, zq_value: u32) -> Result<RemarkReport> {
    let w = star_witness(leaves, q)?;
    let inertia = inertia_of(&w, DEFAULT_ZERO_TOL)?;
    let expected_negatives = q.min(leaves.len());
    let expected_nullity = witness_nullity(leaves, q);
    let forest =
        crate::families::star_forest(&leaves.iter().map(|&m| m + 1).collect::<Vec<_>>())?;
    let pattern_ok = pattern_matches(&w, &forest)?;
    let mut failures = Vec::new();
    if inertia.negatives != expected_negatives {
        failures.push(format!(
            "negatives {} != expected {expected_negatives}",
            inertia.negatives
        ));
    }
    if inertia.nullity != expected_nullity {
        failures.push(format!("nullity {} != expected {expected_nullity}", inertia.nullity));
    }
    if !pattern_ok {
        failures.push("off-diagonal support does not match the forest".into());
    }
    if inertia.nullity as u32 > zq_value {
        failures.push(format!(
            "nullity {} exceeds game value {zq_value}",
            inertia.nullity
        ));
    }
    Ok(RemarkReport { inertia, expected_negatives, expected_nullity, pattern_ok, zq_value, failures })
}
