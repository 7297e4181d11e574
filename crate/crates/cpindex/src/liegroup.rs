//! Geodesics of Lie groups with a bi-invariant semi-Riemannian metric.
//!
//! In an h-orthonormal basis `X₁…Xₙ` with `[Xᵢ, Xⱼ] = Σₖ Cᵏᵢⱼ Xₖ` and
//! `h(Xᵢ, Xᵢ) = εᵢ`, Jacobi fields along `exp(tX)` solve
//! `Y'' = ¼ ad_X² Y`, so the geodesic is an instance of `v'' = Av` with
//! `g = diag(ε)`.
//!
//! For the direction `Xₙ` write `aᵢⱼ = εᵢ Cⁱₙⱼ` (skew in `i, j < n`). When
//! all 4×4 Pfaffians of `a` vanish, i.e.
//! `Cⁿᵢⱼ Cⁿₖₗ + Cⁿⱼₖ Cⁿᵢₗ + Cⁿₖᵢ Cⁿⱼₗ = 0` for distinct `i, j, k, l`, the
//! characteristic polynomial of `ad_Xₙ` restricted to `Xₙ^⊥` is
//! `(−1)ⁿ⁻¹ λⁿ⁻³ (λ² + Σ_{i<j} εᵢεⱼ aᵢⱼ²)`.

use nalgebra::{DMatrix, DVector};

use crate::conjugate::{conjugate_instants, ConjugateInstant};
use crate::error::{Error, Result};
use crate::forms::{self, Inertia};
use crate::jordan::{self, GSymmetricSystem};
use crate::linalg;
use crate::maslov::{maslov_index, MaslovBreakdown};
use crate::scalar::Real;
use crate::tol::Tolerances;

#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebraSpec<T: Real> {
    dim: usize,
    /// `Cᵏᵢⱼ` at `k·n² + i·n + j`.
    structure: Vec<T>,
    metric_signs: Vec<i8>,
}

impl<T: Real> LieAlgebraSpec<T> {
    /// `structure[k][i][j] = Cᵏᵢⱼ`. Only shapes and signs are checked here;
    /// see [`validate_algebra`].
    pub fn new(structure: Vec<Vec<Vec<T>>>, metric_signs: Vec<i8>) -> Result<Self> {
        let n = metric_signs.len();
        let mut flat = Vec::with_capacity(n * n * n);
        if structure.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: structure.len() });
        }
        for plane in &structure {
            if plane.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: plane.len() });
            }
            for row in plane {
                if row.len() != n {
                    return Err(Error::DimensionMismatch { expected: n, found: row.len() });
                }
                flat.extend_from_slice(row);
            }
        }
        Self::from_flat(flat, metric_signs)
    }

    pub fn from_flat(structure: Vec<T>, metric_signs: Vec<i8>) -> Result<Self> {
        let n = metric_signs.len();
        if structure.len() != n * n * n {
            return Err(Error::DimensionMismatch { expected: n * n * n, found: structure.len() });
        }
        if metric_signs.iter().any(|&e| e != 1 && e != -1) {
            return Err(Error::MetricSigns);
        }
        if structure.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { dim: n, structure, metric_signs })
    }

    /// Builds constants from `(i, j, k, c)` entries `[Xᵢ, Xⱼ] ∋ c·Xₖ`,
    /// filling in `Cᵏⱼᵢ = −c`.
    pub fn from_brackets(dim: usize, brackets: &[(usize, usize, usize, T)], metric_signs: Vec<i8>) -> Result<Self> {
        if metric_signs.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: metric_signs.len() });
        }
        let mut flat = vec![T::zero(); dim * dim * dim];
        for &(i, j, k, c) in brackets {
            if i >= dim || j >= dim || k >= dim {
                return Err(Error::DimensionMismatch { expected: dim, found: i.max(j).max(k) + 1 });
            }
            flat[k * dim * dim + i * dim + j] += c;
            flat[k * dim * dim + j * dim + i] -= c;
        }
        Self::from_flat(flat, metric_signs)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn metric_signs(&self) -> &[i8] {
        &self.metric_signs
    }

    pub fn eps(&self, i: usize) -> T {
        T::lit(f64::from(self.metric_signs[i]))
    }

    /// `Cᵏᵢⱼ`.
    pub fn c(&self, k: usize, i: usize, j: usize) -> T {
        self.structure[(k * self.dim + i) * self.dim + j]
    }

    /// `C_{kij} = εₖ Cᵏᵢⱼ`.
    pub fn lowered(&self, k: usize, i: usize, j: usize) -> T {
        self.eps(k) * self.c(k, i, j)
    }

    pub fn metric(&self) -> DMatrix<T> {
        linalg::diag(&(0..self.dim).map(|i| self.eps(i)).collect::<Vec<_>>())
    }

    pub fn structure(&self) -> Vec<Vec<Vec<T>>> {
        let n = self.dim;
        (0..n).map(|k| (0..n).map(|i| (0..n).map(|j| self.c(k, i, j)).collect()).collect()).collect()
    }

    fn scale(&self) -> T {
        self.structure.iter().fold(T::one(), |m, c| m.max(c.abs()))
    }
}

/// Checks antisymmetry (exact), the Jacobi identity, bi-invariance and the
/// ε-weighted form `Σₘ εₘ(CᵐᵢⱼCᵐₖₗ + CᵐⱼₖCᵐᵢₗ + CᵐₖᵢCᵐⱼₗ) = 0`, in that order.
pub fn validate_algebra<T: Real>(spec: &LieAlgebraSpec<T>, tol: &Tolerances<T>) -> Result<()> {
    let n = spec.dim;
    for k in 0..n {
        for i in 0..n {
            for j in i..n {
                if spec.c(k, i, j) != -spec.c(k, j, i) {
                    return Err(Error::Antisymmetry { k, i, j });
                }
            }
        }
    }
    let s = spec.scale();
    let bound = tol.sym * s * s;
    let mut jacobi = T::zero();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut r = T::zero();
                    for m in 0..n {
                        r += spec.c(m, i, j) * spec.c(l, m, k)
                            + spec.c(m, j, k) * spec.c(l, m, i)
                            + spec.c(m, k, i) * spec.c(l, m, j);
                    }
                    jacobi = jacobi.max(r.abs());
                }
            }
        }
    }
    if jacobi > bound {
        return Err(Error::Jacobi { residual: (jacobi / (s * s)).as_f64() });
    }
    // h(ad_Xi Xj, Xk) + h(Xj, ad_Xi Xk) = C_{kij} + C_{jik}.
    let mut bi = T::zero();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                bi = bi.max((spec.lowered(k, i, j) + spec.lowered(j, i, k)).abs());
            }
        }
    }
    if bi > tol.sym * s {
        return Err(Error::BiInvariance { residual: (bi / s).as_f64() });
    }
    let mut weighted = T::zero();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut r = T::zero();
                    for m in 0..n {
                        r += spec.eps(m)
                            * (spec.c(m, i, j) * spec.c(m, k, l)
                                + spec.c(m, j, k) * spec.c(m, i, l)
                                + spec.c(m, k, i) * spec.c(m, j, l));
                    }
                    weighted = weighted.max(r.abs());
                }
            }
        }
    }
    if weighted > bound {
        return Err(Error::Jacobi { residual: (weighted / (s * s)).as_f64() });
    }
    Ok(())
}

/// Matrix of `Y ↦ [X, Y]`: entry `(k, j)` is `Σᵢ xᵢ Cᵏᵢⱼ`.
pub fn ad_operator<T: Real>(spec: &LieAlgebraSpec<T>, x: &DVector<T>) -> Result<DMatrix<T>> {
    let n = spec.dim;
    if x.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: x.len() });
    }
    Ok(DMatrix::from_fn(n, n, |k, j| (0..n).fold(T::zero(), |s, i| s + x[i] * spec.c(k, i, j))))
}

/// `g = diag(ε)`, `A = ¼ ad_X²` on `[0, T]`.
pub fn jacobi_system<T: Real>(
    spec: &LieAlgebraSpec<T>,
    x: &DVector<T>,
    horizon: T,
    tol: &Tolerances<T>,
) -> Result<GSymmetricSystem<T>> {
    let ad = ad_operator(spec, x)?;
    let a = &ad * &ad * T::lit(0.25);
    jordan::validate(spec.metric(), a, horizon, tol).map_err(|e| match e {
        Error::NotGSymmetric { residual } => Error::BiInvariance { residual },
        other => other,
    })
}

/// `aᵢⱼ = εᵢ Cⁱₙⱼ` over the indices other than `n_index`.
fn pivot_matrix<T: Real>(spec: &LieAlgebraSpec<T>, n_index: usize) -> (Vec<usize>, DMatrix<T>) {
    let rest: Vec<usize> = (0..spec.dim).filter(|&i| i != n_index).collect();
    let a = DMatrix::from_fn(rest.len(), rest.len(), |p, q| spec.eps(rest[p]) * spec.c(rest[p], n_index, rest[q]));
    (rest, a)
}

/// Whether `Cⁿᵢⱼ Cⁿₖₗ + Cⁿⱼₖ Cⁿᵢₗ + Cⁿₖᵢ Cⁿⱼₗ = 0` for all pairwise distinct
/// `i, j, k, l ≠ n_index`. Vacuous below dimension 5.
pub fn check_identities<T: Real>(spec: &LieAlgebraSpec<T>, n_index: usize, tol: &Tolerances<T>) -> Result<bool> {
    if n_index >= spec.dim {
        return Err(Error::DimensionMismatch { expected: spec.dim, found: n_index + 1 });
    }
    let rest: Vec<usize> = (0..spec.dim).filter(|&i| i != n_index).collect();
    let s = spec.scale();
    let c = |i: usize, j: usize| spec.c(n_index, i, j);
    for &i in &rest {
        for &j in &rest {
            for &k in &rest {
                for &l in &rest {
                    if i == j || i == k || i == l || j == k || j == l || k == l {
                        continue;
                    }
                    let r = c(i, j) * c(k, l) + c(j, k) * c(i, l) + c(k, i) * c(j, l);
                    if r.abs() > tol.sym * s * s {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

fn check_skew<T: Real>(m: &DMatrix<T>, tol: T) -> Result<usize> {
    let n = linalg::check_square(m)?;
    let scale = linalg::max_abs(m).max(T::one());
    let r = linalg::max_abs(&(m + m.transpose()));
    if r > tol * scale {
        return Err(Error::NotSkew { residual: (r / scale).as_f64() });
    }
    Ok(n)
}

fn pf_rec<T: Real>(m: &DMatrix<T>, idx: &[usize]) -> T {
    if idx.is_empty() {
        return T::one();
    }
    let first = idx[0];
    let mut total = T::zero();
    for p in 1..idx.len() {
        let a = m[(first, idx[p])];
        if a == T::zero() {
            continue;
        }
        let rest: Vec<usize> = idx[1..].iter().copied().filter(|&q| q != idx[p]).collect();
        let term = a * pf_rec(m, &rest);
        if p % 2 == 1 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

/// Pfaffian by recursive expansion along the first row.
pub fn pfaffian<T: Real>(skew: &DMatrix<T>) -> Result<T> {
    let n = check_skew(skew, T::default_tolerances().sym)?;
    if n % 2 != 0 {
        return Err(Error::OddDimension(n));
    }
    Ok(pf_rec(skew, &(0..n).collect::<Vec<_>>()))
}

/// Coefficients (ascending powers) of `det(λI − M)` by Faddeev–LeVerrier.
pub fn faddeev_leverrier<T: Real>(m: &DMatrix<T>) -> Result<Vec<T>> {
    let n = linalg::check_square(m)?;
    let mut c = vec![T::zero(); n + 1];
    c[n] = T::one();
    let id = DMatrix::<T>::identity(n, n);
    let mut mk = DMatrix::<T>::zeros(n, n);
    for k in 1..=n {
        mk = m * &mk + &id * c[n - k + 1];
        c[n - k] = -(m * &mk).trace() / T::from_usize_lossy(k);
    }
    Ok(c)
}

/// Characteristic polynomials of `ad_Xₙ` for the direction `n_index`.
#[derive(Debug, Clone, PartialEq)]
pub struct CharPoly<T: Real> {
    /// `P(λ) = det(B′ − λI)` on `Xₙ^⊥`, ascending powers, degree `n − 1`.
    pub restricted: Vec<T>,
    /// `det(ad_Xₙ − λI) = −λ·P(λ)`, degree `n`.
    pub full: Vec<T>,
    /// `Σ_{i<j} εᵢεⱼ aᵢⱼ²`.
    pub s: T,
    /// Largest coefficient deviation from Faddeev–LeVerrier on `ad_Xₙ`,
    /// relative to the largest coefficient.
    pub deviation: T,
}

fn full_from_restricted<T: Real>(p: &[T]) -> Vec<T> {
    let mut full = vec![T::zero(); p.len() + 1];
    for (i, &c) in p.iter().enumerate() {
        full[i + 1] = -c;
    }
    full
}

fn compare_direct<T: Real>(spec: &LieAlgebraSpec<T>, n_index: usize, full: &[T]) -> Result<T> {
    let mut e = DVector::zeros(spec.dim);
    e[n_index] = T::one();
    let ad = ad_operator(spec, &e)?;
    let mut direct = faddeev_leverrier(&ad)?;
    if spec.dim % 2 == 1 {
        direct.iter_mut().for_each(|c| *c = -*c);
    }
    let scale = direct.iter().fold(T::one(), |m, c| m.max(c.abs()));
    let dev = full.iter().zip(&direct).fold(T::zero(), |m, (a, b)| m.max((*a - *b).abs()));
    Ok(dev / scale)
}

fn sign_pow<T: Real>(k: usize) -> T {
    if k % 2 == 0 {
        T::one()
    } else {
        -T::one()
    }
}

/// Closed-form `P(λ)`; refuses when [`check_identities`] fails. The result is
/// cross-checked against Faddeev–LeVerrier on `ad_Xₙ`.
pub fn char_poly_pfaffian<T: Real>(spec: &LieAlgebraSpec<T>, n_index: usize, tol: &Tolerances<T>) -> Result<CharPoly<T>> {
    if !check_identities(spec, n_index, tol)? {
        return Err(Error::IdentitiesFail);
    }
    let (rest, a) = pivot_matrix(spec, n_index);
    let m = rest.len();
    let mut s = T::zero();
    for p in 0..m {
        for q in p + 1..m {
            s += spec.eps(rest[p]) * spec.eps(rest[q]) * a[(p, q)] * a[(p, q)];
        }
    }
    let sign = sign_pow::<T>(m);
    let mut restricted = vec![T::zero(); m + 1];
    restricted[m] = sign;
    if m >= 2 {
        restricted[m - 2] = sign * s;
    }
    let full = full_from_restricted(&restricted);
    let deviation = compare_direct(spec, n_index, &full)?;
    if deviation > tol.sym * T::from_usize_lossy(spec.dim.max(1)) {
        return Err(Error::numeric("char_poly_pfaffian", format!("deviation {:e} from direct polynomial", deviation.as_f64())));
    }
    Ok(CharPoly { restricted, full, s, deviation })
}

/// `P(λ)` by the general expansion
/// `(−1)ⁿ⁻¹ Σₘ λⁿ⁻¹⁻²ᵐ Σ_{|S|=2m} ε_S Pf(a_S)²`, valid without the identities.
pub fn char_poly_minors<T: Real>(spec: &LieAlgebraSpec<T>, n_index: usize) -> Result<CharPoly<T>> {
    if n_index >= spec.dim {
        return Err(Error::DimensionMismatch { expected: spec.dim, found: n_index + 1 });
    }
    let (rest, a) = pivot_matrix(spec, n_index);
    let m = rest.len();
    if m > 20 {
        return Err(Error::numeric("char_poly_minors", "dimension too large for subset expansion"));
    }
    let sign = sign_pow::<T>(m);
    let mut restricted = vec![T::zero(); m + 1];
    let mut s = T::zero();
    for mask in 0u32..(1u32 << m) {
        let size = mask.count_ones() as usize;
        if size % 2 == 1 {
            continue;
        }
        let idx: Vec<usize> = (0..m).filter(|&i| mask & (1 << i) != 0).collect();
        let eps = idx.iter().fold(T::one(), |e, &i| e * spec.eps(rest[i]));
        let pf = pf_rec(&a, &idx);
        let term = eps * pf * pf;
        restricted[m - size] += sign * term;
        if size == 2 {
            s += term;
        }
    }
    let full = full_from_restricted(&restricted);
    let deviation = compare_direct(spec, n_index, &full)?;
    Ok(CharPoly { restricted, full, s, deviation })
}

/// Rewrites the constants in the basis `X′ₐ = Σᵢ Pᵢₐ Xᵢ`, which must be
/// h-orthonormal (`PᵀEP` diagonal with entries ±1).
pub fn change_basis<T: Real>(spec: &LieAlgebraSpec<T>, p: &DMatrix<T>, tol: &Tolerances<T>) -> Result<LieAlgebraSpec<T>> {
    let n = spec.dim;
    if p.nrows() != n || p.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: p.nrows() });
    }
    let gram = p.transpose() * spec.metric() * p;
    let mut signs = Vec::with_capacity(n);
    for a in 0..n {
        let d = gram[(a, a)];
        if (d.abs() - T::one()).abs() > tol.recon * T::lit(100.0) {
            return Err(Error::MetricSigns);
        }
        signs.push(if d > T::zero() { 1 } else { -1 });
        for b in 0..n {
            if a != b && gram[(a, b)].abs() > tol.recon * T::lit(100.0) {
                return Err(Error::MetricSigns);
            }
        }
    }
    let pinv = linalg::invert(p, "basis change")?;
    let mut flat = vec![T::zero(); n * n * n];
    for k in 0..n {
        let mk = DMatrix::from_fn(n, n, |i, j| spec.c(k, i, j));
        let tk = p.transpose() * mk * p;
        for c in 0..n {
            let w = pinv[(c, k)];
            if w == T::zero() {
                continue;
            }
            for a in 0..n {
                for b in 0..n {
                    flat[(c * n + a) * n + b] += w * tk[(a, b)];
                }
            }
        }
    }
    // Restore exact antisymmetry lost to rounding.
    for c in 0..n {
        for a in 0..n {
            for b in a..n {
                let v = (flat[(c * n + a) * n + b] - flat[(c * n + b) * n + a]) * T::lit(0.5);
                flat[(c * n + a) * n + b] = v;
                flat[(c * n + b) * n + a] = -v;
            }
        }
    }
    LieAlgebraSpec::from_flat(flat, signs)
}

/// An h-orthonormal basis whose last vector is `x/√|h(x, x)|`; `None` when
/// `x` is (numerically) null.
pub fn orthonormal_completion<T: Real>(spec: &LieAlgebraSpec<T>, x: &DVector<T>, tol: &Tolerances<T>) -> Result<Option<DMatrix<T>>> {
    let n = spec.dim;
    let e = spec.metric();
    let hx = (x.transpose() * &e * x)[(0, 0)];
    let norm2 = x.norm_squared();
    if norm2 == T::zero() || hx.abs() <= tol.null.sqrt() * norm2 {
        return Ok(None);
    }
    let xn = x / hx.abs().sqrt();
    let w = linalg::null_space(&DMatrix::from_row_slice(1, n, (e.clone() * &xn).as_slice()), tol.rank, T::zero())?;
    let (vals, vecs) = linalg::sym_eigen(&(w.transpose() * &e * &w))?;
    let mut p = DMatrix::zeros(n, n);
    for (c, v) in vals.iter().enumerate() {
        let col = &w * vecs.column(c) / v.abs().sqrt();
        p.set_column(c, &col);
    }
    p.set_column(n - 1, &xn);
    Ok(Some(p))
}

/// The real 2-plane `W_α` of `ad_Xₙ` for `α = √s`.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigenplane<T: Real> {
    pub alpha: T,
    /// `n × 2` in the coordinates of the spec.
    pub basis: DMatrix<T>,
    /// Pivot `(p, q)` when the basis is `{B eₚ, B e_q}`; `None` for the
    /// generic kernel of `ad² + α²`.
    pub pivot: Option<(usize, usize)>,
    pub inertia: Inertia,
}

/// Basis of `W_α` and the inertia of `h` on it. Requires the identities and
/// `s > 0`.
pub fn eigenplane<T: Real>(spec: &LieAlgebraSpec<T>, n_index: usize, tol: &Tolerances<T>) -> Result<Eigenplane<T>> {
    let cp = char_poly_pfaffian(spec, n_index, tol)?;
    let scale = spec.scale();
    if cp.s <= tol.rank * scale * scale {
        return Err(Error::numeric("eigenplane", "Σ εᵢεⱼ aᵢⱼ² is not positive; no imaginary eigenvalues"));
    }
    let alpha = cp.s.sqrt();
    let mut e = DVector::zeros(spec.dim);
    e[n_index] = T::one();
    let ad = ad_operator(spec, &e)?;
    let (rest, a) = pivot_matrix(spec, n_index);
    let mut best = (0, 0, T::zero());
    for p in 0..rest.len() {
        for q in p + 1..rest.len() {
            if a[(p, q)].abs() > best.2 {
                best = (p, q, a[(p, q)].abs());
            }
        }
    }
    let (basis, pivot) = if best.2 > tol.rank.sqrt() * scale {
        let (p, q) = (rest[best.0], rest[best.1]);
        let cols = [ad.column(p).into_owned(), ad.column(q).into_owned()];
        (DMatrix::from_columns(&cols), Some((p, q)))
    } else {
        let id = DMatrix::<T>::identity(spec.dim, spec.dim);
        let (v, _) = linalg::smallest_right_vectors(&(&ad * &ad + id * cp.s), 2)?;
        (v, None)
    };
    let inertia = forms::inertia_of_matrix(&(basis.transpose() * spec.metric() * &basis), tol.null)?;
    Ok(Eigenplane { alpha, basis, pivot, inertia })
}

/// Closed-form facts about the direction when it can be normalized.
#[derive(Debug, Clone, PartialEq)]
pub struct PfaffianAnalysis<T: Real> {
    /// h-orthonormal basis with the normalized direction last.
    pub basis: DMatrix<T>,
    pub identities_hold: bool,
    pub char_poly: CharPoly<T>,
    pub eigenplane: Option<Eigenplane<T>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicInstant<T: Real> {
    pub instant: ConjugateInstant<T>,
    /// Maslov contribution `σ(h|W̃)` (Jordan signature τ at `T`).
    pub contribution: i64,
    pub local_injectivity_broken: bool,
    /// `dim_R Σₖ Ker(ad_X² + (2kπ/t)²)`, from the spectrum of `ad_X`.
    pub ad_multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicReport<T: Real> {
    pub direction: DVector<T>,
    pub ad: DMatrix<T>,
    pub system: GSymmetricSystem<T>,
    pub instants: Vec<GeodesicInstant<T>>,
    pub maslov: MaslovBreakdown<T>,
    pub pfaffian: Option<PfaffianAnalysis<T>>,
}

impl<T: Real> GeodesicReport<T> {
    /// Conjugate instants agree with the imaginary spectrum of `ad_X`.
    pub fn spectrally_consistent(&self) -> bool {
        self.instants.iter().all(|i| i.ad_multiplicity == i.instant.multiplicity)
    }
}

fn ad_multiplicity<T: Real>(ad: &DMatrix<T>, t: T, tol: &Tolerances<T>) -> Result<usize> {
    let n = ad.nrows();
    let rho = linalg::spectral_norm(ad)?;
    let radius = tol.eig * rho.max(T::one());
    let two_pi = T::two_pi();
    let ad2 = ad * ad;
    // Only eigenvalues with positive imaginary part are visited; repeated
    // eigenvalues share one kernel, so each β is counted once.
    let mut betas: Vec<T> = Vec::new();
    let mut dedup = 0;
    for mu in crate::jordan::eigenvalues(&ad)?.iter() {
        if mu.re.abs() > radius || mu.im <= radius {
            continue;
        }
        let k = (mu.im * t / two_pi).round();
        if k < T::one() || (mu.im - k * two_pi / t).abs() > radius {
            continue;
        }
        let beta = k * two_pi / t;
        if betas.iter().any(|b| (*b - beta).abs() <= radius) {
            continue;
        }
        betas.push(beta);
        let m = &ad2 + DMatrix::<T>::identity(n, n) * (beta * beta);
        dedup += n - linalg::rank(&m, tol.rank * (rho * rho).max(T::one()), T::zero())?;
    }
    Ok(dedup)
}

/// Conjugate points along `t ↦ exp(tX)` on `(0, T]`.
pub fn geodesic_report<T: Real>(
    spec: &LieAlgebraSpec<T>,
    x: &DVector<T>,
    horizon: T,
    tol: &Tolerances<T>,
) -> Result<GeodesicReport<T>> {
    let system = jacobi_system(spec, x, horizon, tol)?;
    let ad = ad_operator(spec, x)?;
    let decomposition = jordan::decompose(&system, tol)?;
    let conj = conjugate_instants(&system, &decomposition.spectrum(), tol);
    let maslov = maslov_index(&system, &decomposition, &conj, tol)?;
    let mut instants = Vec::with_capacity(conj.len());
    for (inst, contribution) in &maslov.per_instant {
        if inst.multiplicity % 2 != 0 {
            return Err(Error::numeric(
                "geodesic_report",
                format!("odd multiplicity {} at t = {}", inst.multiplicity, inst.t),
            ));
        }
        instants.push(GeodesicInstant {
            instant: inst.clone(),
            contribution: *contribution,
            local_injectivity_broken: *contribution != 0,
            ad_multiplicity: ad_multiplicity(&ad, inst.t, tol)?,
        });
    }
    let pfaffian = match orthonormal_completion(spec, x, tol)? {
        None => None,
        Some(basis) => {
            let rotated = change_basis(spec, &basis, tol)?;
            let last = spec.dim - 1;
            let identities_hold = check_identities(&rotated, last, tol)?;
            let char_poly =
                if identities_hold { char_poly_pfaffian(&rotated, last, tol)? } else { char_poly_minors(&rotated, last)? };
            let scale = rotated.scale();
            let eigenplane = if identities_hold && char_poly.s > tol.rank * scale * scale {
                let mut plane = eigenplane(&rotated, last, tol)?;
                plane.basis = &basis * plane.basis;
                Some(plane)
            } else {
                None
            };
            if let Some(plane) = &eigenplane {
                if plane.inertia.nullity != 0 || plane.inertia.signature().abs() != 2 {
                    return Err(Error::numeric("geodesic_report", "h is not definite on the eigenplane"));
                }
                for gi in instants.iter().filter(|g| !g.instant.is_final) {
                    let i = &gi.instant;
                    if i.degenerate || i.multiplicity != 2 || gi.contribution.abs() != 2 {
                        return Err(Error::numeric(
                            "geodesic_report",
                            format!("instant t = {} violates the rank-two structure", i.t),
                        ));
                    }
                }
            }
            Some(PfaffianAnalysis { basis, identities_hold, char_poly, eigenplane })
        }
    };
    Ok(GeodesicReport { direction: x.clone(), ad, system, instants, maslov, pfaffian })
}

pub mod examples {
    //! Algebras with bi-invariant metrics used by tests and the CLI corpus.

    use super::*;

    /// `su(2) ≅ so(3)` with `[Xᵢ, Xⱼ] = ε_{ijk} Xₖ` and a definite metric.
    pub fn so3<T: Real>() -> LieAlgebraSpec<T> {
        let one = T::one();
        LieAlgebraSpec::from_brackets(3, &[(0, 1, 2, one), (1, 2, 0, one), (2, 0, 1, one)], vec![1, 1, 1])
            .expect("valid")
    }

    /// `so(2, 1)` with Lorentzian metric `(1, 1, −1)`.
    pub fn so21<T: Real>() -> LieAlgebraSpec<T> {
        let one = T::one();
        LieAlgebraSpec::from_brackets(3, &[(0, 1, 2, -one), (1, 2, 0, one), (2, 0, 1, one)], vec![1, 1, -1])
            .expect("valid")
    }

    /// `Rⁿ`.
    pub fn abelian<T: Real>(n: usize) -> LieAlgebraSpec<T> {
        LieAlgebraSpec::from_flat(vec![T::zero(); n * n * n], vec![1; n]).expect("valid")
    }

    /// The 4-dim oscillator algebra `[t, x] = y`, `[t, y] = −x`, `[x, y] = z`
    /// with the Lorentzian metric `h(x, x) = h(y, y) = h(z, t) = 1`, in the
    /// orthonormal basis `(x, y, (z + t)/√2, (z − t)/√2)`.
    pub fn oscillator<T: Real>() -> LieAlgebraSpec<T> {
        let one = T::one();
        let (x, y, z, t) = (0, 1, 2, 3);
        let mut flat = vec![T::zero(); 64];
        let mut set = |i: usize, j: usize, k: usize, c: T| {
            flat[(k * 4 + i) * 4 + j] += c;
            flat[(k * 4 + j) * 4 + i] -= c;
        };
        set(t, x, y, one);
        set(t, y, x, -one);
        set(x, y, z, one);
        let r = T::lit(0.5).sqrt();
        let p = DMatrix::from_row_slice(4, 4, &[
            one, T::zero(), T::zero(), T::zero(),
            T::zero(), one, T::zero(), T::zero(),
            T::zero(), T::zero(), r, r,
            T::zero(), T::zero(), r, -r,
        ]);
        let pinv = p.clone().try_inverse().expect("invertible");
        let mut out = vec![T::zero(); 64];
        for k in 0..4 {
            let mk = DMatrix::from_fn(4, 4, |i, j| flat[(k * 4 + i) * 4 + j]);
            let tk = p.transpose() * mk * &p;
            for c in 0..4 {
                for a in 0..4 {
                    for b in 0..4 {
                        out[(c * 4 + a) * 4 + b] += pinv[(c, k)] * tk[(a, b)];
                    }
                }
            }
        }
        for v in out.iter_mut() {
            // Entries are 0, ±1 or ±1/√2; snap rounding so antisymmetry is exact.
            *v = (*v * T::lit(1e12)).round() / T::lit(1e12);
        }
        LieAlgebraSpec::from_flat(out, vec![1, 1, 1, -1]).expect("valid")
    }

    /// `su(2) ⊕ su(2)` with `h₀ ⊕ (−h₀)`, written in an orthonormal basis
    /// whose last vector is `cosh r·X₃ + sinh r·X₆`. For `r ≠ 0` the
    /// quadratic identities fail in that direction.
    pub fn s3xs3<T: Real>(boost: T) -> LieAlgebraSpec<T> {
        let one = T::one();
        let mut br = Vec::new();
        for off in [0, 3] {
            br.push((off, off + 1, off + 2, one));
            br.push((off + 1, off + 2, off, one));
            br.push((off + 2, off, off + 1, one));
        }
        let base = LieAlgebraSpec::from_brackets(6, &br, vec![1, 1, 1, -1, -1, -1]).expect("valid");
        let (ch, sh) = (boost.cosh(), boost.sinh());
        let mut p = DMatrix::zeros(6, 6);
        p[(0, 0)] = one;
        p[(1, 1)] = one;
        p[(3, 2)] = one;
        p[(4, 3)] = one;
        p[(2, 4)] = sh;
        p[(5, 4)] = ch;
        p[(2, 5)] = ch;
        p[(5, 5)] = sh;
        change_basis(&base, &p, &T::default_tolerances()).expect("orthonormal")
    }
}

#[cfg(test)]
mod tests {
    use super::examples::*;
    use super::*;

    fn e(n: usize, i: usize) -> DVector<f64> {
        let mut v = DVector::zeros(n);
        v[i] = 1.0;
        v
    }

    #[test]
    fn fixtures_validate() {
        let tol = Tolerances::default();
        validate_algebra(&so3::<f64>(), &tol).unwrap();
        validate_algebra(&so21::<f64>(), &tol).unwrap();
        validate_algebra(&abelian::<f64>(4), &tol).unwrap();
        validate_algebra(&oscillator::<f64>(), &tol).unwrap();
        validate_algebra(&s3xs3::<f64>(0.7), &tol).unwrap();
    }

    #[test]
    fn jacobi_violation() {
        let tol = Tolerances::default();
        let mut s = so3::<f64>().structure();
        s[0][0][1] = 0.1;
        s[0][1][0] = -0.1;
        let bad = LieAlgebraSpec::new(s, vec![1, 1, 1]).unwrap();
        assert!(matches!(validate_algebra(&bad, &tol), Err(Error::Jacobi { .. })));
        let mut s = so3::<f64>().structure();
        s[2][0][1] = 1.1;
        s[2][1][0] = -1.1;
        let bad = LieAlgebraSpec::new(s, vec![1, 1, 1]).unwrap();
        assert!(matches!(validate_algebra(&bad, &tol), Err(Error::BiInvariance { .. })));
        let mut s = so3::<f64>().structure();
        s[2][0][1] = 1.1;
        let bad = LieAlgebraSpec::new(s, vec![1, 1, 1]).unwrap();
        assert!(matches!(validate_algebra(&bad, &tol), Err(Error::Antisymmetry { k: 2, i: 0, j: 1 })));
    }

    #[test]
    fn ad_examples() {
        let ad = ad_operator(&so3::<f64>(), &e(3, 2)).unwrap();
        assert_eq!(ad, DMatrix::from_row_slice(3, 3, &[0., -1., 0., 1., 0., 0., 0., 0., 0.]));
        assert_eq!(ad_operator(&so3::<f64>(), &DVector::zeros(3)).unwrap(), DMatrix::zeros(3, 3));
        let sys = jacobi_system(&so3::<f64>(), &e(3, 2), 1.0, &Tolerances::default()).unwrap();
        assert_eq!(sys.a(), &linalg::diag(&[-0.25, -0.25, 0.0]));
    }

    #[test]
    fn pfaffian_examples() {
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 3.0, -3.0, 0.0]);
        assert_eq!(pfaffian(&m).unwrap(), 3.0);
        let a = [[0.0, 1.0, 2.0, 3.0], [0.0, 0.0, 4.0, 5.0], [0.0, 0.0, 0.0, 6.0]];
        let m = DMatrix::from_fn(4, 4, |i, j| if i < j { a[i][j] } else if i > j { -a[j][i] } else { 0.0 });
        assert_eq!(pfaffian(&m).unwrap(), 1.0 * 6.0 - 2.0 * 5.0 + 3.0 * 4.0);
        assert!(matches!(pfaffian(&DMatrix::<f64>::zeros(3, 3)), Err(Error::OddDimension(3))));
        assert!(matches!(pfaffian(&DMatrix::from_element(2, 2, 1.0)), Err(Error::NotSkew { .. })));
    }

    #[test]
    fn char_poly_examples() {
        let tol = Tolerances::default();
        let cp = char_poly_pfaffian(&so3::<f64>(), 2, &tol).unwrap();
        assert_eq!(cp.restricted, vec![1.0, 0.0, 1.0]);
        assert_eq!(cp.full, vec![0.0, -1.0, 0.0, -1.0]);
        let cp = char_poly_pfaffian(&abelian::<f64>(3), 2, &tol).unwrap();
        assert_eq!(cp.full, vec![0.0, 0.0, 0.0, -1.0]);
        assert!(!check_identities(&s3xs3::<f64>(0.7), 5, &tol).unwrap());
        assert!(check_identities(&s3xs3::<f64>(0.0), 5, &tol).unwrap());
        assert!(matches!(char_poly_pfaffian(&s3xs3::<f64>(0.7), 5, &tol), Err(Error::IdentitiesFail)));
        let general = char_poly_minors(&s3xs3::<f64>(0.7), 5).unwrap();
        assert!(general.deviation < 1e-12);
    }

    #[test]
    fn so3_geodesic() {
        let tol = Tolerances::default();
        let r = geodesic_report(&so3::<f64>(), &e(3, 2), 7.0, &tol).unwrap();
        assert_eq!(r.instants.len(), 1);
        let i = &r.instants[0];
        assert!((i.instant.t - 2.0 * std::f64::consts::PI).abs() < 1e-12);
        assert_eq!((i.instant.multiplicity, i.instant.degenerate, i.contribution), (2, false, 2));
        assert!(r.spectrally_consistent());
        let r = geodesic_report(&abelian::<f64>(3), &e(3, 0), 7.0, &tol).unwrap();
        assert!(r.instants.is_empty());
    }
}
