//! Seeded generators of random complexes, chain maps, commutative squares
//! and packages with exact integer data.

use rand::Rng;

use crate::error::Result;
use crate::homological::{ChainMap, CommutativeSquare, Complex};
use crate::linalg::{Matrix, Subspace, Vector};
use crate::padic::BaseField;
use crate::phin::Filtration;
use crate::syntomic::GeometryPackage;

pub fn int_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, field: &BaseField) -> Matrix {
    Matrix::from_fn(rows, cols, field, |_, _| field.int(rng.gen_range(-4..=4)))
}

/// A unimodular integer matrix and its inverse, as a product of elementary
/// operations.
pub fn unimodular<R: Rng>(rng: &mut R, n: usize, field: &BaseField) -> (Matrix, Matrix) {
    let mut g = Matrix::identity(n, field);
    let mut ginv = Matrix::identity(n, field);
    if n < 2 {
        return (g, ginv);
    }
    for _ in 0..3 * n {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c = rng.gen_range(-2..=2i64);
        // row_i += c row_j on g, col_j -= c col_i on the inverse
        let mut e = Matrix::identity(n, field);
        e.set(i, j, field.int(c));
        let mut einv = Matrix::identity(n, field);
        einv.set(i, j, field.int(-c));
        g = e.mul(&g);
        ginv = ginv.mul(&einv);
    }
    (g, ginv)
}

/// A complex in standard form conjugated by unimodular changes of basis.
/// In standard coordinates degree i is H^i ⊕ S^i ⊕ T^i with d mapping S^i
/// identically onto T^(i+1).
#[derive(Clone, Debug)]
pub struct RandomComplex {
    pub complex: Complex,
    pub h_dims: Vec<usize>,
    basis: Vec<Matrix>,
    inverse: Vec<Matrix>,
}

impl RandomComplex {
    fn lo(&self) -> i32 {
        self.complex.lo()
    }

    /// Standard-coordinate projection onto H^i composed with the change of basis.
    fn h_coords(&self, i: i32) -> Matrix {
        let k = (i - self.lo()) as usize;
        let field = self.complex.field();
        let h = self.h_dims.get(k).copied().unwrap_or(0);
        let n = self.complex.dim(i);
        if n == 0 {
            return Matrix::zeros(h, 0, field);
        }
        Matrix::from_fn(h, n, field, |r, c| if r == c { field.one() } else { field.zero() }).mul(&self.inverse[k])
    }

    fn h_embed(&self, i: i32) -> Matrix {
        let k = (i - self.lo()) as usize;
        let field = self.complex.field();
        let h = self.h_dims.get(k).copied().unwrap_or(0);
        let n = self.complex.dim(i);
        if n == 0 {
            return Matrix::zeros(0, h, field);
        }
        self.basis[k].mul(&Matrix::from_fn(n, h, field, |r, c| if r == c { field.one() } else { field.zero() }))
    }
}

/// Degrees lo..lo+len, each of dimension at most `max_dim`.
pub fn random_complex<R: Rng>(rng: &mut R, field: &BaseField, lo: i32, len: usize, max_dim: usize) -> RandomComplex {
    let mut s = vec![0usize; len];
    let mut h = vec![0usize; len];
    let mut t = vec![0usize; len];
    for k in 0..len {
        let room = max_dim - t[k];
        h[k] = rng.gen_range(0..=room.min(2));
        if k + 1 < len {
            s[k] = rng.gen_range(0..=(room - h[k]).min(max_dim));
            t[k + 1] = s[k];
        }
    }
    let dims: Vec<usize> = (0..len).map(|k| h[k] + s[k] + t[k]).collect();
    let mut basis = Vec::new();
    let mut inverse = Vec::new();
    for &n in &dims {
        let (g, gi) = unimodular(rng, n, field);
        basis.push(g);
        inverse.push(gi);
    }
    let diffs: Vec<Matrix> = (0..len.saturating_sub(1))
        .map(|k| {
            let mut std = Matrix::zeros(dims[k + 1], dims[k], field);
            for j in 0..s[k] {
                std.set(h[k + 1] + s[k + 1] + j, h[k] + j, field.one());
            }
            basis[k + 1].mul(&std).mul(&inverse[k])
        })
        .collect();
    let complex = Complex::new(lo, dims, diffs, field).expect("standard complex");
    RandomComplex { complex, h_dims: h, basis, inverse }
}

/// A chain map: a random map on the H blocks plus d h + h d.
pub fn random_chain_map<R: Rng>(rng: &mut R, a: &RandomComplex, b: &RandomComplex) -> ChainMap {
    let field = a.complex.field().clone();
    let lo = a.complex.lo().min(b.complex.lo());
    let hi = a.complex.hi().max(b.complex.hi());
    let homotopy: Vec<Matrix> = (lo..=hi + 1).map(|i| int_matrix(rng, b.complex.dim(i - 1), a.complex.dim(i), &field)).collect();
    let hmat = |i: i32| -> Matrix {
        if i < lo || i > hi + 1 {
            Matrix::zeros(b.complex.dim(i - 1), a.complex.dim(i), &field)
        } else {
            homotopy[(i - lo) as usize].clone()
        }
    };
    let core: Vec<Matrix> = (lo..=hi)
        .map(|i| {
            let ha = a.h_coords(i).rows();
            let hb = b.h_embed(i).cols();
            int_matrix(rng, hb, ha, &field)
        })
        .collect();
    ChainMap::new(&a.complex, &b.complex, |i| {
        let c = &core[(i - lo) as usize];
        let base = b.h_embed(i).mul(c).mul(&a.h_coords(i));
        let dh = b.complex.d(i - 1).mul(&hmat(i));
        let hd = hmat(i + 1).mul(&a.complex.d(i));
        base.add(&dh).add(&hd)
    })
    .expect("chain map")
}

/// A commutative square A → B, A → C = A ⊕ E, B → D, C → D with
/// v_A = (id, φ) and γ(a, e) = v_B α a - ε φ a + ε e.
pub fn random_square<R: Rng>(rng: &mut R, field: &BaseField, max_dim: usize) -> Result<CommutativeSquare> {
    let len = 3;
    let a = random_complex(rng, field, 0, len, max_dim);
    let b = random_complex(rng, field, 0, len, max_dim);
    let e = random_complex(rng, field, 0, len, max_dim);
    let d = random_complex(rng, field, 0, len, max_dim);
    let alpha = random_chain_map(rng, &a, &b);
    let vb = random_chain_map(rng, &b, &d);
    let phi = random_chain_map(rng, &a, &e);
    let eps = random_chain_map(rng, &e, &d);
    let c = crate::homological::direct_sum(&[&a.complex, &e.complex], field);
    let va = ChainMap::new(&a.complex, &c, |i| Matrix::vstack(&[&Matrix::identity(a.complex.dim(i), field), &phi.at(i)], a.complex.dim(i), field))?;
    let gamma = ChainMap::new(&c, &d.complex, |i| {
        let left = vb.at(i).mul(&alpha.at(i)).sub(&eps.at(i).mul(&phi.at(i)));
        Matrix::hstack(&[&left, &eps.at(i)], d.complex.dim(i), field)
    })?;
    CommutativeSquare::new(alpha, va, vb, gamma)
}

/// A random decreasing filtration with labels in lo..=hi.
pub fn random_filtration<R: Rng>(rng: &mut R, dim: usize, lo: i64, hi: i64, field: &BaseField) -> Result<Filtration> {
    let (g, _) = unimodular(rng, dim, field);
    let mut given = vec![(lo, Subspace::whole(dim, field))];
    let mut size = dim;
    for label in lo + 1..=hi {
        size = rng.gen_range(0..=size);
        let cols: Vec<Vector> = (0..size).map(|k| g.column(k)).collect();
        given.push((label, Subspace::span(dim, &cols, field)?));
    }
    Filtration::new(dim, given, field)
}

/// Φ and N with pΦN = NΦ: Jordan-type pairs (p·b, b) linked by N plus
/// singletons, conjugated by a unimodular matrix.
pub fn random_phi_n<R: Rng>(rng: &mut R, dim: usize, field: &BaseField) -> (Matrix, Matrix) {
    let p = field.p() as i64;
    let mut phi = Matrix::zeros(dim, dim, field);
    let mut n = Matrix::zeros(dim, dim, field);
    let mut k = 0;
    while k < dim {
        let nonzero = |rng: &mut R| loop {
            let v = rng.gen_range(-3..=3i64);
            if v != 0 {
                break v;
            }
        };
        if k + 1 < dim && rng.gen_bool(0.5) {
            let b = nonzero(rng);
            phi.set(k, k, field.int(p * b));
            phi.set(k + 1, k + 1, field.int(b));
            n.set(k + 1, k, field.one());
            k += 2;
        } else {
            phi.set(k, k, field.int(nonzero(rng)));
            k += 1;
        }
    }
    let (g, gi) = unimodular(rng, dim, field);
    (g.mul(&phi).mul(&gi), g.mul(&n).mul(&gi))
}

/// A split package of the given dimension d with random Φ, N and Hodge
/// filtrations in degrees 0..=2d.
pub fn random_package<R: Rng>(rng: &mut R, field: &BaseField, dimension: i32, max_dim: usize, semistable: bool) -> Result<GeometryPackage> {
    let mut phis = Vec::new();
    let mut ns = Vec::new();
    let mut fil = Vec::new();
    for deg in 0..=2 * dimension {
        let dim = rng.gen_range(1..=max_dim);
        let (phi, n) = random_phi_n(rng, dim, field);
        phis.push(phi);
        ns.push(if semistable { n } else { Matrix::zeros(dim, dim, field) });
        fil.push(random_filtration(rng, dim, 0, deg as i64 + 1, field)?);
    }
    GeometryPackage::split("random", field, dimension, 0, phis, Some(ns), fil)
}
