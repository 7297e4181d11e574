//! Spectrum and canonical pair decomposition of a g-symmetric operator.
//!
//! For every real eigenvalue λ the generalized eigenspace splits into
//! g-orthogonal cyclic subspaces; in a suitable basis `A` acts as a Jordan
//! block `J_k(λ)` and `g` as `ε·Sip_k`. Non-real eigenvalues are only
//! summarised.

use nalgebra::{Complex, DMatrix, DVector, Schur};

use crate::error::{Error, Result};
use crate::forms::{self, BilinearForm};
use crate::linalg;
use crate::scalar::Real;
use crate::tol::Tolerances;

/// The data `(g, A, T)` of `v'' = A v` on `[0, T]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GSymmetricSystem<T: Real> {
    g: BilinearForm<T>,
    a: DMatrix<T>,
    horizon: T,
}

impl<T: Real> GSymmetricSystem<T> {
    /// Validates with the default tolerances of `T`; see [`validate`].
    pub fn new(g: DMatrix<T>, a: DMatrix<T>, horizon: T) -> Result<Self> {
        validate(g, a, horizon, &T::default_tolerances())
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn g(&self) -> &BilinearForm<T> {
        &self.g
    }

    pub fn a(&self) -> &DMatrix<T> {
        &self.a
    }

    pub fn horizon(&self) -> T {
        self.horizon
    }

    pub fn with_horizon(&self, horizon: T) -> Result<Self> {
        if !(horizon > T::zero()) || !horizon.is_finite() {
            return Err(Error::NonPositiveHorizon(horizon.as_f64()));
        }
        Ok(Self { horizon, ..self.clone() })
    }
}

/// Checks nondegeneracy of `g`, g-symmetry of `A` and positivity of `T`.
pub fn validate<T: Real>(
    g: DMatrix<T>,
    a: DMatrix<T>,
    horizon: T,
    tol: &Tolerances<T>,
) -> Result<GSymmetricSystem<T>> {
    let g = BilinearForm::new(g, tol.sym)?;
    let n = linalg::check_square(&a)?;
    linalg::check_finite(&a)?;
    if n != g.dim() {
        return Err(Error::DimensionMismatch { expected: g.dim(), found: n });
    }
    let nullity = forms::inertia(&g, tol.null)?.nullity;
    if nullity > 0 {
        return Err(Error::DegenerateForm { nullity });
    }
    let ga = g.matrix() * &a;
    let scale = linalg::max_abs(&ga);
    let residual = linalg::max_abs(&(&ga - ga.transpose()));
    if residual > tol.sym * scale {
        return Err(Error::NotGSymmetric { residual: (residual / scale).as_f64() });
    }
    if !(horizon > T::zero()) || !horizon.is_finite() {
        return Err(Error::NonPositiveHorizon(horizon.as_f64()));
    }
    Ok(GSymmetricSystem { g, a, horizon })
}

/// A clustered eigenvalue. Non-real eigenvalues are recorded once per
/// conjugate pair, with positive imaginary part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenvalueRecord<T: Real> {
    pub value: Complex<T>,
    pub algebraic_multiplicity: usize,
    pub geometric_multiplicity: usize,
    pub is_real: bool,
}

impl<T: Real> EigenvalueRecord<T> {
    pub fn real(&self) -> T {
        self.value.re
    }

    pub fn is_defective(&self) -> bool {
        self.algebraic_multiplicity != self.geometric_multiplicity
    }
}

/// One cyclic block: `A·vⱼ = λ vⱼ + vⱼ₋₁` and `g(vᵢ, vⱼ) = ε·[i + j = size + 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalBlock<T: Real> {
    pub lambda: T,
    pub size: usize,
    pub epsilon: i8,
    /// `dim × size`, columns `v₁ … v_size`.
    pub basis: DMatrix<T>,
}

impl<T: Real> CanonicalBlock<T> {
    /// The expected matrix of `A` on the block, upper Jordan form.
    pub fn jordan_matrix(&self) -> DMatrix<T> {
        jordan_block(self.lambda, self.size)
    }

    /// The expected matrix of `g` on the block.
    pub fn form_matrix(&self) -> DMatrix<T> {
        let eps = if self.epsilon > 0 { T::one() } else { -T::one() };
        forms::sip_matrix::<T>(self.size).into_matrix() * eps
    }

    /// `(‖A V − V J‖_max, ‖VᵀGV − ε Sip‖_max)`.
    pub fn residuals(&self, system: &GSymmetricSystem<T>) -> (T, T) {
        let v = &self.basis;
        let ra = linalg::max_abs(&(system.a() * v - v * self.jordan_matrix()));
        let rg = linalg::max_abs(&(v.transpose() * system.g().matrix() * v - self.form_matrix()));
        (ra, rg)
    }
}

pub fn jordan_block<T: Real>(lambda: T, size: usize) -> DMatrix<T> {
    DMatrix::from_fn(size, size, |i, j| {
        if i == j {
            lambda
        } else if j == i + 1 {
            T::one()
        } else {
            T::zero()
        }
    })
}

/// All canonical blocks of one real eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenGroup<T: Real> {
    pub record: EigenvalueRecord<T>,
    pub blocks: Vec<CanonicalBlock<T>>,
}

impl<T: Real> EigenGroup<T> {
    pub fn lambda(&self) -> T {
        self.record.value.re
    }

    /// Columns spanning the generalized eigenspace `Ker(A − λ)ⁿ`.
    pub fn basis(&self) -> DMatrix<T> {
        let parts: Vec<&DMatrix<T>> = self.blocks.iter().map(|b| &b.basis).collect();
        let n = self.blocks.first().map(|b| b.basis.nrows()).unwrap_or(0);
        linalg::hstack(n, &parts)
    }

    /// Columns `v₁` of each block: a basis of `Ker(A − λ)`.
    pub fn eigenvectors(&self) -> DMatrix<T> {
        let n = self.blocks.first().map(|b| b.basis.nrows()).unwrap_or(0);
        let cols: Vec<DMatrix<T>> = self.blocks.iter().map(|b| b.basis.columns(0, 1).into_owned()).collect();
        let refs: Vec<&DMatrix<T>> = cols.iter().collect();
        linalg::hstack(n, &refs)
    }

    /// Signature of g on the generalized eigenspace: Σ ε over odd blocks.
    pub fn generalized_signature(&self) -> i64 {
        self.blocks.iter().filter(|b| b.size % 2 == 1).map(|b| b.epsilon as i64).sum()
    }

    /// n₊ of g on the generalized eigenspace, from block data.
    pub fn generalized_n_plus(&self) -> usize {
        self.blocks
            .iter()
            .map(|b| if b.epsilon > 0 { b.size.div_ceil(2) } else { b.size / 2 })
            .sum()
    }

    /// n₋ of g on the generalized eigenspace, from block data.
    pub fn generalized_n_minus(&self) -> usize {
        self.blocks
            .iter()
            .map(|b| if b.epsilon < 0 { b.size.div_ceil(2) } else { b.size / 2 })
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalPairDecomposition<T: Real> {
    /// Real eigenvalues in ascending order, each with its blocks.
    pub real_blocks: Vec<EigenGroup<T>>,
    /// Non-real spectrum, one record per conjugate pair.
    pub complex_summary: Vec<EigenvalueRecord<T>>,
    /// Orthonormal basis of the g-orthogonal complement of all real blocks.
    pub complement_basis: DMatrix<T>,
}

impl<T: Real> CanonicalPairDecomposition<T> {
    pub fn group(&self, lambda: T, radius: T) -> Option<&EigenGroup<T>> {
        self.real_blocks.iter().find(|g| (g.lambda() - lambda).abs() <= radius)
    }

    pub fn spectrum(&self) -> Vec<EigenvalueRecord<T>> {
        self.real_blocks.iter().map(|g| g.record).chain(self.complex_summary.iter().copied()).collect()
    }

    /// Change of basis `P = [blocks…, complement]`.
    pub fn change_of_basis(&self) -> DMatrix<T> {
        let n = self.complement_basis.nrows();
        let mut parts: Vec<&DMatrix<T>> = Vec::new();
        for g in &self.real_blocks {
            for b in &g.blocks {
                parts.push(&b.basis);
            }
        }
        parts.push(&self.complement_basis);
        linalg::hstack(n, &parts)
    }

    /// Max-abs residuals of `P⁻¹AP` and `PᵀGP` against the canonical form on
    /// the real-block part, including coupling to the complement.
    pub fn reconstruction_residual(&self, system: &GSymmetricSystem<T>) -> Result<(T, T)> {
        let p = self.change_of_basis();
        let pinv = linalg::invert(&p, "change of basis")?;
        let ma = &pinv * system.a() * &p;
        let mg = p.transpose() * system.g().matrix() * &p;
        let mut ja = Vec::new();
        let mut jg = Vec::new();
        for g in &self.real_blocks {
            for b in &g.blocks {
                ja.push(b.jordan_matrix());
                jg.push(b.form_matrix());
            }
        }
        let ea = linalg::block_diag(&ja);
        let eg = linalg::block_diag(&jg);
        let r = ea.nrows();
        let n = p.nrows();
        let mut ra = T::zero();
        let mut rg = T::zero();
        for i in 0..n {
            for j in 0..n {
                if i >= r && j >= r {
                    continue;
                }
                let (xa, xg) = if i < r && j < r { (ea[(i, j)], eg[(i, j)]) } else { (T::zero(), T::zero()) };
                ra = ra.max((ma[(i, j)] - xa).abs());
                rg = rg.max((mg[(i, j)] - xg).abs());
            }
        }
        Ok((ra, rg))
    }
}

fn cabs<T: Real>(z: Complex<T>) -> T {
    (z.re * z.re + z.im * z.im).sqrt()
}

struct Cluster<T: Real> {
    mean: Complex<T>,
    size: usize,
}

fn cluster_radius<T: Real>(eigs: &[Complex<T>], tol: &Tolerances<T>) -> T {
    let rho = eigs.iter().fold(T::zero(), |acc, z| acc.max(cabs(*z)));
    tol.eig * rho.max(T::one())
}

pub(crate) fn eigenvalues<T: Real>(a: &DMatrix<T>) -> Result<Vec<Complex<T>>> {
    if a.nrows() == 0 {
        return Ok(Vec::new());
    }
    let schur = Schur::try_new(a.clone(), T::eps(), 10_000)
        .ok_or_else(|| Error::numeric("eigensolver", "Schur iteration did not converge"))?;
    let (_, t) = schur.unpack();
    Ok(quasi_triangular_eigenvalues(&t))
}

/// Eigenvalues of a real quasi-upper-triangular matrix. Computed block by
/// block because the 2×2 discriminant can round to NaN for a repeated pair.
fn quasi_triangular_eigenvalues<T: Real>(t: &DMatrix<T>) -> Vec<Complex<T>> {
    let n = t.nrows();
    let mut out = Vec::with_capacity(n);
    let mut i = 0;
    while i < n {
        if i + 1 < n && t[(i + 1, i)] != T::zero() {
            let (a, b, c, d) = (t[(i, i)], t[(i, i + 1)], t[(i + 1, i)], t[(i + 1, i + 1)]);
            let half = T::lit(0.5);
            let mean = (a + d) * half;
            let diff = (a - d) * half;
            let disc = diff * diff + b * c;
            if disc >= T::zero() {
                let r = disc.sqrt();
                out.push(Complex::new(mean + r, T::zero()));
                out.push(Complex::new(mean - r, T::zero()));
            } else {
                let r = (-disc).sqrt();
                out.push(Complex::new(mean, r));
                out.push(Complex::new(mean, -r));
            }
            i += 2;
        } else {
            out.push(Complex::new(t[(i, i)], T::zero()));
            i += 1;
        }
    }
    out
}

/// Single-linkage clustering of the eigenvalues of `a`.
fn clusters<T: Real>(a: &DMatrix<T>, tol: &Tolerances<T>) -> Result<(Vec<Cluster<T>>, T)> {
    let eigs = eigenvalues(a)?;
    let radius = cluster_radius(&eigs, tol);
    let n = eigs.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        let mut k = i;
        while p[k] != r {
            let next = p[k];
            p[k] = r;
            k = next;
        }
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if cabs(eigs[i] - eigs[j]) <= radius {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    let mut out: Vec<(usize, Complex<T>, usize)> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match out.iter_mut().find(|c| c.0 == r) {
            Some(c) => {
                c.1 += eigs[i];
                c.2 += 1;
            }
            None => out.push((r, eigs[i], 1)),
        }
    }
    let clusters = out
        .into_iter()
        .map(|(_, sum, size)| {
            let k = T::from_usize_lossy(size);
            Cluster { mean: Complex::new(sum.re / k, sum.im / k), size }
        })
        .collect();
    Ok((clusters, radius))
}

fn rank_scale<T: Real>(m: &DMatrix<T>, a: &DMatrix<T>) -> Result<T> {
    Ok(linalg::spectral_norm(m)?.max(linalg::spectral_norm(a)?).max(T::one()))
}

/// Clustered spectrum of `A`: real eigenvalues ascending, then non-real
/// pairs ordered by real and imaginary part.
///
/// Algebraic multiplicity is the cluster size, verified by requiring exactly
/// that many negligible singular values of `(A − λ)^alg`; geometric
/// multiplicity is `dim − rank(A − λ)`.
pub fn real_spectrum<T: Real>(system: &GSymmetricSystem<T>, tol: &Tolerances<T>) -> Result<Vec<EigenvalueRecord<T>>> {
    let a = system.a();
    let n = a.nrows();
    let (clusters, radius) = clusters(a, tol)?;
    let mut real = Vec::new();
    let mut complex = Vec::new();
    for c in clusters {
        if c.mean.im.abs() <= radius {
            let lambda = c.mean.re;
            let shifted = a - DMatrix::identity(n, n) * lambda;
            let scale = rank_scale(&shifted, a)?;
            let geometric = n - linalg::rank(&shifted, tol.rank, scale)?;
            verify_algebraic(&shifted, c.size, tol)?;
            if geometric == 0 || geometric > c.size {
                return Err(Error::IllConditioned {
                    what: "eigenvalue multiplicity",
                    detail: format!("λ = {lambda:e}: geometric {geometric}, algebraic {}", c.size),
                });
            }
            real.push(EigenvalueRecord {
                value: Complex::new(lambda, T::zero()),
                algebraic_multiplicity: c.size,
                geometric_multiplicity: geometric,
                is_real: true,
            });
        } else if c.mean.im > T::zero() {
            let (re, im) = (c.mean.re, c.mean.im);
            let shifted = a - DMatrix::identity(n, n) * re;
            let quad = &shifted * &shifted + DMatrix::identity(n, n) * (im * im);
            let scale = rank_scale(&quad, &(a * a))?;
            let twice = n - linalg::rank(&quad, tol.rank, scale)?;
            complex.push(EigenvalueRecord {
                value: c.mean,
                algebraic_multiplicity: c.size,
                geometric_multiplicity: (twice / 2).max(1),
                is_real: false,
            });
        }
    }
    real.sort_by(|x, y| x.value.re.partial_cmp(&y.value.re).unwrap_or(std::cmp::Ordering::Equal));
    complex.sort_by(|x, y| {
        (x.value.re, x.value.im)
            .partial_cmp(&(y.value.re, y.value.im))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    real.extend(complex);
    Ok(real)
}

fn verify_algebraic<T: Real>(shifted: &DMatrix<T>, alg: usize, tol: &Tolerances<T>) -> Result<()> {
    let power = linalg::mat_pow(shifted, alg);
    let s = linalg::singular_values(&power)?;
    let n = s.len();
    let scale = s[0].max(T::one());
    let small = tol.recon * scale;
    let kernel_ok = s[n - alg..].iter().all(|&x| x <= small);
    let rest_ok = alg == n || s[n - alg - 1] > small;
    if kernel_ok && rest_ok {
        Ok(())
    } else {
        Err(Error::IllConditioned {
            what: "eigenvalue clustering",
            detail: format!(
                "generalized eigenspace of dimension {alg} not confirmed (singular values {:?})",
                s.iter().map(|x| x.as_f64()).collect::<Vec<_>>()
            ),
        })
    }
}

fn find_real_record<T: Real>(
    spectrum: &[EigenvalueRecord<T>],
    lambda: T,
    radius: T,
) -> Result<EigenvalueRecord<T>> {
    spectrum
        .iter()
        .filter(|r| r.is_real)
        .find(|r| (r.value.re - lambda).abs() <= radius)
        .copied()
        .ok_or(Error::NotAnEigenvalue { value: lambda.as_f64() })
}

/// Newton correction of an approximate invariant subspace: with `W` the
/// orthogonal complement, `V + WX` where `A₂₂X − XA₁₁ = −A₂₁`. Keeps the
/// input when the Sylvester system is singular.
fn refine_invariant<T: Real>(a: &DMatrix<T>, mut v: DMatrix<T>) -> DMatrix<T> {
    let (n, k) = v.shape();
    if k == 0 || k == n {
        return v;
    }
    for _ in 0..2 {
        let mut full = DMatrix::zeros(n, n);
        full.columns_mut(0, k).copy_from(&v);
        let q = full.qr().q();
        let w = q.columns(k, n - k).into_owned();
        let a11 = v.transpose() * a * &v;
        let a21 = w.transpose() * a * &v;
        let a22 = w.transpose() * a * &w;
        let m = n - k;
        let mut op = DMatrix::<T>::zeros(m * k, m * k);
        for j in 0..k {
            op.view_mut((j * m, j * m), (m, m)).copy_from(&a22);
            for i in 0..k {
                let c = a11[(i, j)];
                for r in 0..m {
                    op[(j * m + r, i * m + r)] -= c;
                }
            }
        }
        let rhs = DVector::from_iterator(m * k, a21.iter().map(|x| -*x));
        let Some(x) = op.lu().solve(&rhs) else { break };
        if !x.iter().all(|e| e.is_finite()) {
            break;
        }
        let xm = DMatrix::from_column_slice(m, k, x.as_slice());
        v = (&v + &w * xm).qr().q();
    }
    v
}

/// Canonical blocks of the real eigenvalue `lambda`, sorted by descending
/// size and then descending ε.
pub fn canonical_pair<T: Real>(
    system: &GSymmetricSystem<T>,
    lambda: T,
    tol: &Tolerances<T>,
) -> Result<Vec<CanonicalBlock<T>>> {
    let spectrum = real_spectrum(system, tol)?;
    let eigs: Vec<Complex<T>> = spectrum.iter().map(|r| r.value).collect();
    let radius = cluster_radius(&eigs, tol);
    let record = find_real_record(&spectrum, lambda, radius)?;
    canonical_pair_for(system, &record, tol)
}

fn canonical_pair_for<T: Real>(
    system: &GSymmetricSystem<T>,
    record: &EigenvalueRecord<T>,
    tol: &Tolerances<T>,
) -> Result<Vec<CanonicalBlock<T>>> {
    let a = system.a();
    let n = a.nrows();
    let lambda = record.value.re;
    let alg = record.algebraic_multiplicity;
    let shifted = a - DMatrix::identity(n, n) * lambda;
    let (v, _) = linalg::smallest_right_vectors(&linalg::mat_pow(&shifted, alg), alg)?;
    let v = refine_invariant(a, v);
    let nc = v.transpose() * &shifted * &v;
    let gc = v.transpose() * system.g().matrix() * &v;
    let nil_scale = linalg::spectral_norm(&nc)?.max(T::one());
    let nil_tol = tol.recon * T::lit(10.0);

    let mut blocks = Vec::new();
    // Orthonormal basis (in V-coordinates) of the part still to be split.
    let mut u = DMatrix::<T>::identity(alg, alg);
    while u.ncols() > 0 {
        let k = u.ncols();
        let nu = u.transpose() * &nc * &u;
        let gu = u.transpose() * &gc * &u;
        let mut s = 1;
        let mut pw = nu.clone();
        while s < k && linalg::max_abs(&pw) > nil_tol * nil_scale.powi(s as i32) {
            pw = &pw * &nu;
            s += 1;
        }
        let top = linalg::mat_pow(&nu, s - 1);
        let b = linalg::symmetrize(&(top.transpose() * &gu));
        let (vals, vecs) = linalg::sym_eigen(&b)?;
        let (imax, mu) = vals
            .iter()
            .copied()
            .enumerate()
            .max_by(|x, y| x.1.abs().partial_cmp(&y.1.abs()).unwrap_or(std::cmp::Ordering::Equal))
            .expect("nonempty subspace");
        let gscale = linalg::spectral_norm(&gu)?.max(T::eps());
        if mu.abs() <= tol.null * gscale * nil_scale.powi(s as i32 - 1) {
            return Err(Error::IllConditioned {
                what: "canonical pair",
                detail: format!(
                    "no vector a with g((A−λ)^{}a, a) bounded away from zero at λ = {:e}",
                    s - 1,
                    lambda.as_f64()
                ),
            });
        }
        let eps = if mu > T::zero() { T::one() } else { -T::one() };
        let a1 = vecs.column(imax) / mu.abs().sqrt();
        let chain: Vec<_> = (0..s).map(|j| linalg::mat_pow(&nu, j) * &a1).collect();
        let mut b1 = a1.clone();
        for m in 2..=s {
            // α_m enters g(b₁, N^{s−m} b₁) linearly with coefficient 2ε.
            let q = &gu * (linalg::mat_pow(&nu, s - m) * &b1);
            let c = b1.dot(&q);
            let alpha = -c / (T::lit(2.0) * eps);
            b1 += &chain[m - 1] * alpha;
        }
        let w = DMatrix::from_fn(k, s, |r, j| {
            let p = s - 1 - j;
            (linalg::mat_pow(&nu, p) * &b1)[r]
        });
        let basis = &v * &u * &w;
        blocks.push(CanonicalBlock { lambda, size: s, epsilon: if eps > T::zero() { 1 } else { -1 }, basis });
        if s == k {
            break;
        }
        let constraint = w.transpose() * &gu;
        let comp = linalg::null_space(&constraint, tol.rank, T::one())?;
        if comp.ncols() != k - s {
            return Err(Error::IllConditioned {
                what: "canonical pair",
                detail: format!("g-orthogonal complement has dimension {} instead of {}", comp.ncols(), k - s),
            });
        }
        u = &u * comp;
    }
    if blocks.len() != record.geometric_multiplicity {
        return Err(Error::IllConditioned {
            what: "canonical pair",
            detail: format!(
                "{} blocks at λ = {:e} but geometric multiplicity {}",
                blocks.len(),
                lambda.as_f64(),
                record.geometric_multiplicity
            ),
        });
    }
    blocks.sort_by(|x, y| y.size.cmp(&x.size).then(y.epsilon.cmp(&x.epsilon)));
    Ok(blocks)
}

/// Canonical pair for every real eigenvalue plus a summary of the rest.
pub fn decompose<T: Real>(system: &GSymmetricSystem<T>, tol: &Tolerances<T>) -> Result<CanonicalPairDecomposition<T>> {
    let spectrum = real_spectrum(system, tol)?;
    let mut real_blocks = Vec::new();
    let mut complex_summary = Vec::new();
    for rec in spectrum {
        if rec.is_real {
            let blocks = canonical_pair_for(system, &rec, tol)?;
            real_blocks.push(EigenGroup { record: rec, blocks });
        } else {
            complex_summary.push(rec);
        }
    }
    let n = system.dim();
    let parts: Vec<DMatrix<T>> = real_blocks.iter().map(|g| g.basis()).collect();
    let refs: Vec<&DMatrix<T>> = parts.iter().collect();
    let all = linalg::hstack(n, &refs);
    let complement_basis = if all.ncols() == 0 {
        DMatrix::identity(n, n)
    } else {
        linalg::null_space(&(all.transpose() * system.g().matrix()), tol.rank, T::one())?
    };
    if all.ncols() + complement_basis.ncols() != n {
        return Err(Error::IllConditioned {
            what: "decomposition",
            detail: "complement of the real generalized eigenspaces has the wrong dimension".into(),
        });
    }
    Ok(CanonicalPairDecomposition { real_blocks, complex_summary, complement_basis })
}
