//! The `n × n` discrete torus whose edges join `v` to `v ± s_ℓ`, its
//! Laplacian `ℒ`, and the invariants built from `tr(ℒ⁺)`.
//!
//! The Laplacian eigenvalues are `2|Φ| ψ(t_{j,k})`, so `tr(ℒ⁺) = F_n / (2|Φ|)`.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::lattice::LatticeSpec;
use crate::sums::fn_direct;

/// Largest vertex count accepted by the dense eigensolver.
pub const MAX_DENSE_VERTICES: usize = 65_536;

/// A `2|Φ|`-regular simple graph on `ℤ_n²`.
#[derive(Debug, Clone)]
pub struct TorusGraph {
    spec: LatticeSpec,
    n: usize,
    offsets: Vec<[usize; 2]>,
}

impl TorusGraph {
    /// Fails with [`Error::DegenerateGraph`] when two of the `2|Φ|` offsets
    /// `±s_ℓ` coincide modulo `n` or one of them vanishes, since the graph would
    /// then carry multiple edges or loops.
    pub fn new(spec: &LatticeSpec, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::DegenerateGraph {
                n,
                reason: "the torus needs n >= 2".into(),
            });
        }
        let modulus = n as i64;
        let mut offsets: Vec<[usize; 2]> = Vec::with_capacity(2 * spec.size());
        for s in spec.vectors() {
            for sign in [1, -1] {
                let off = [
                    (sign * s[0]).rem_euclid(modulus) as usize,
                    (sign * s[1]).rem_euclid(modulus) as usize,
                ];
                if off == [0, 0] {
                    return Err(Error::DegenerateGraph {
                        n,
                        reason: format!("offset {s:?} vanishes modulo {n}"),
                    });
                }
                if offsets.contains(&off) {
                    return Err(Error::DegenerateGraph {
                        n,
                        reason: format!("offset {:?} of {s:?} collides modulo {n}", [sign * s[0], sign * s[1]]),
                    });
                }
                offsets.push(off);
            }
        }
        Ok(Self {
            spec: spec.clone(),
            n,
            offsets,
        })
    }

    pub fn spec(&self) -> &LatticeSpec {
        &self.spec
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `ν = n²`.
    pub fn vertex_count(&self) -> usize {
        self.n * self.n
    }

    /// `𝖽 = 2|Φ|`.
    pub fn degree(&self) -> usize {
        self.offsets.len()
    }

    /// Vertex `(u, v)` is stored at `u·n + v`.
    pub fn neighbors(&self, vertex: usize) -> impl Iterator<Item = usize> + '_ {
        let (u, v) = (vertex / self.n, vertex % self.n);
        self.offsets
            .iter()
            .map(move |o| ((u + o[0]) % self.n) * self.n + (v + o[1]) % self.n)
    }

    /// The Laplacian with integer entries, row-major.
    pub fn laplacian_entries(&self) -> Vec<i64> {
        let nu = self.vertex_count();
        let mut m = vec![0i64; nu * nu];
        for row in 0..nu {
            m[row * nu + row] = self.degree() as i64;
            for col in self.neighbors(row) {
                m[row * nu + col] -= 1;
            }
        }
        m
    }

    pub fn laplacian(&self) -> Result<DMatrix<f64>> {
        let nu = self.vertex_count();
        if nu > MAX_DENSE_VERTICES {
            return Err(Error::InvalidArgument(format!(
                "dense Laplacian limited to {MAX_DENSE_VERTICES} vertices, got {nu}"
            )));
        }
        let entries = self.laplacian_entries();
        Ok(DMatrix::from_row_iterator(nu, nu, entries.into_iter().map(|x| x as f64)))
    }
}

/// `tr(ℒ⁺) = F_n / (2|Φ|)` from the closed-form eigenvalues.
pub fn trace_pseudoinverse_spectral(graph: &TorusGraph) -> Result<f64> {
    let f = fn_direct(&graph.spec, graph.n, None, None)?;
    Ok(f.value / graph.degree() as f64)
}

/// `tr(ℒ⁺)` from a dense symmetric eigensolve of the explicit matrix.
/// Requires the zero eigenvalue to be simple (`λ₂ > 10⁻¹⁰ 𝖽`).
pub fn trace_pseudoinverse_dense(graph: &TorusGraph) -> Result<f64> {
    let eig = SymmetricEigen::new(graph.laplacian()?);
    let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    let threshold = 1e-10 * graph.degree() as f64;
    if values.len() < 2 || values[1] <= threshold {
        return Err(Error::DegenerateGraph {
            n: graph.n,
            reason: "the graph is disconnected".into(),
        });
    }
    Ok(values[1..].iter().rev().map(|l| 1.0 / l).sum())
}

/// `τ(G) = (1/12)(1 − 2(ν−1)/(𝖽ν))² + tr(ℒ⁺)/ν` and `Kf(G) = ν tr(ℒ⁺)`.
///
/// The τ formula is valid for equi-resistant graphs; that property is assumed,
/// not checked.
pub fn tau_and_kirchhoff(graph: &TorusGraph) -> Result<(f64, f64)> {
    let trace = trace_pseudoinverse_spectral(graph)?;
    let nu = graph.vertex_count() as f64;
    let d = graph.degree() as f64;
    let shift = 1.0 - 2.0 * (nu - 1.0) / (d * nu);
    let tau = shift * shift / 12.0 + trace / nu;
    Ok((tau, nu * trace))
}
