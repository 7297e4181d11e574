//! Deterministic fixture generators for tests, benchmarks and the CLI corpus.
//!
//! Constructed fixtures start from a known canonical pair (Jordan blocks with
//! ε·Sip forms, plus 2×2 blocks with non-real spectrum) and are conjugated by
//! a random well-conditioned change of basis, so their exact block structure
//! is known. Generic fixtures draw `g` and a g-symmetric `A = g⁻¹S` at random
//! and are rejected when eigenvalues or instants are too close to resolve.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::conley_zehnder::zero_radius;
use crate::jordan::{real_spectrum, GSymmetricSystem};
use crate::linalg;
use crate::symplectic::SymplecticCoefficient;
use crate::tol::Tolerances;

pub type FixtureRng = ChaCha8Rng;

pub fn rng(seed: u64) -> FixtureRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockSpec {
    pub lambda: f64,
    pub size: usize,
    pub epsilon: i8,
}

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: String,
    pub system: GSymmetricSystem<f64>,
    /// Known real canonical blocks, when the fixture was constructed from them.
    pub blocks: Option<Vec<BlockSpec>>,
}

/// What kinds of spectrum a constructed fixture may contain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumMix {
    pub max_block: usize,
    pub allow_zero: bool,
    pub allow_positive: bool,
    pub allow_complex: bool,
    /// Probability of placing one eigenvalue so that `T` is exactly conjugate.
    pub final_instant: f64,
}

impl Default for SpectrumMix {
    fn default() -> Self {
        Self { max_block: 3, allow_zero: false, allow_positive: true, allow_complex: true, final_instant: 0.1 }
    }
}

fn uniform(rng: &mut FixtureRng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

fn random_matrix(rng: &mut FixtureRng, r: usize, c: usize) -> DMatrix<f64> {
    DMatrix::from_fn(r, c, |_, _| uniform(rng, -1.0, 1.0))
}

pub fn random_orthogonal(rng: &mut FixtureRng, n: usize) -> DMatrix<f64> {
    loop {
        let m = random_matrix(rng, n, n);
        if linalg::rank(&m, 1e-6, 0.0).unwrap_or(0) == n {
            return m.qr().q();
        }
    }
}

/// `Q₁ · diag(s) · Q₂` with singular values in `[1, cond]`.
pub fn random_conditioned(rng: &mut FixtureRng, n: usize, cond: f64) -> DMatrix<f64> {
    let q1 = random_orthogonal(rng, n);
    let q2 = random_orthogonal(rng, n);
    let s: Vec<f64> = (0..n).map(|_| uniform(rng, 1.0, cond)).collect();
    q1 * linalg::diag(&s) * q2
}

pub fn random_symmetric(rng: &mut FixtureRng, n: usize, scale: f64) -> DMatrix<f64> {
    linalg::symmetrize(&random_matrix(rng, n, n)) * scale
}

/// Assembles the canonical pair `(G₀, A₀)` of the given blocks and complex
/// pairs `(a, b)` (eigenvalues `a ± ib`, form `diag(1, −1)`).
pub fn canonical_pair_matrices(blocks: &[BlockSpec], complex: &[(f64, f64)]) -> (DMatrix<f64>, DMatrix<f64>) {
    let mut gs = Vec::new();
    let mut as_ = Vec::new();
    for b in blocks {
        let sip = DMatrix::from_fn(b.size, b.size, |i, j| if i + j + 1 == b.size { 1.0 } else { 0.0 });
        gs.push(sip * f64::from(b.epsilon));
        as_.push(crate::jordan::jordan_block(b.lambda, b.size));
    }
    for &(a, b) in complex {
        gs.push(linalg::diag(&[1.0, -1.0]));
        as_.push(DMatrix::from_row_slice(2, 2, &[a, b, -b, a]));
    }
    (linalg::block_diag(&gs), linalg::block_diag(&as_))
}

/// `(PᵀG₀P, P⁻¹A₀P)`.
pub fn conjugate_pair(g0: &DMatrix<f64>, a0: &DMatrix<f64>, p: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>) {
    let pinv = p.clone().try_inverse().expect("conditioned change of basis");
    let g = linalg::symmetrize(&(p.transpose() * g0 * p));
    (g, pinv * a0 * p)
}

/// Minimum distances used to reject fixtures the oracle cannot resolve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Separation {
    pub eigenvalue: f64,
    /// Relative to `T`, between distinct instants and between instants and `T`.
    pub instant: f64,
}

impl Default for Separation {
    fn default() -> Self {
        Self { eigenvalue: 0.05, instant: 0.004 }
    }
}

/// Instants `kπ/θ` and `2kπ/θ` of every real negative eigenvalue.
fn all_instants(lambdas: &[f64], horizon: f64) -> Vec<f64> {
    let mut out = Vec::new();
    for &l in lambdas.iter().filter(|&&l| l < 0.0) {
        let p = std::f64::consts::PI / (-l).sqrt();
        let mut k = 1;
        while p * k as f64 <= horizon * 1.01 {
            out.push(p * k as f64);
            k += 1;
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out
}

/// Checks eigenvalue separation and instant separation (exact coincidences
/// and instants exactly at `T` are allowed).
pub fn well_separated(system: &GSymmetricSystem<f64>, sep: &Separation) -> bool {
    let tol = Tolerances::default();
    let Ok(spec) = real_spectrum(system, &tol) else { return false };
    let horizon = system.horizon();
    for (i, x) in spec.iter().enumerate() {
        for y in &spec[i + 1..] {
            let d = ((x.value.re - y.value.re).powi(2) + (x.value.im - y.value.im).powi(2)).sqrt();
            if d < sep.eigenvalue {
                return false;
            }
        }
        if !x.is_real && x.value.im < sep.eigenvalue {
            return false;
        }
    }
    let zr = zero_radius(&spec, &tol);
    if spec.iter().any(|r| r.is_real && r.value.re.abs() > zr && r.value.re.abs() < sep.eigenvalue) {
        return false;
    }
    let reals: Vec<f64> = spec.iter().filter(|r| r.is_real).map(|r| r.value.re).collect();
    let inst = all_instants(&reals, horizon);
    let exact = 1e-9 * horizon;
    let gap = sep.instant * horizon;
    for w in inst.windows(2) {
        let d = w[1] - w[0];
        if d > exact && d < gap {
            return false;
        }
    }
    inst.iter().all(|&t| {
        let d = (t - horizon).abs();
        d <= exact || d >= gap
    })
}

fn random_blocks(
    rng: &mut FixtureRng,
    dim: usize,
    mix: &SpectrumMix,
    horizon: f64,
) -> (Vec<BlockSpec>, Vec<(f64, f64)>) {
    let mut blocks = Vec::new();
    let mut complex = Vec::new();
    let mut pool: Vec<f64> = Vec::new();
    let mut left = dim;
    while left > 0 {
        if mix.allow_complex && left >= 2 && rng.random_bool(0.15) {
            complex.push((uniform(rng, -2.0, 2.0), uniform(rng, 0.3, 2.0)));
            left -= 2;
            continue;
        }
        let size = rng.random_range(1..=mix.max_block.min(left));
        let lambda = if !pool.is_empty() && rng.random_bool(0.3) {
            pool[rng.random_range(0..pool.len())]
        } else {
            let r = rng.random::<f64>();
            let l = if mix.allow_zero && r < 0.15 {
                0.0
            } else if mix.allow_positive && r < 0.35 {
                uniform(rng, 0.1, 2.0)
            } else if rng.random_bool(mix.final_instant) {
                let k = rng.random_range(1..=3) as f64;
                -(k * std::f64::consts::PI / horizon).powi(2)
            } else {
                let theta = uniform(rng, 0.3, 2.5);
                -theta * theta
            };
            pool.push(l);
            l
        };
        let epsilon = if rng.random_bool(0.5) { 1 } else { -1 };
        blocks.push(BlockSpec { lambda, size, epsilon });
        left -= size;
    }
    (blocks, complex)
}

/// A conjugated canonical-pair fixture of dimension `dim`.
pub fn constructed(rng: &mut FixtureRng, dim: usize, mix: &SpectrumMix, sep: &Separation) -> Fixture {
    loop {
        let horizon = uniform(rng, 1.0, 10.0);
        let (blocks, complex) = random_blocks(rng, dim, mix, horizon);
        let (g0, a0) = canonical_pair_matrices(&blocks, &complex);
        let p = random_conditioned(rng, dim, 2.0);
        let (g, a) = conjugate_pair(&g0, &a0, &p);
        let Ok(system) = GSymmetricSystem::new(g, a, horizon) else { continue };
        if !well_separated(&system, sep) {
            continue;
        }
        let name = format!("constructed-{dim}-{}", blocks.len());
        return Fixture { name, system, blocks: Some(blocks) };
    }
}

/// Random signature form `PᵀDP` with `D = diag(±1)` and `cond(P) ≤ 2`.
pub fn random_form(rng: &mut FixtureRng, dim: usize, definite: bool) -> DMatrix<f64> {
    let d: Vec<f64> = (0..dim).map(|_| if definite || rng.random_bool(0.5) { 1.0 } else { -1.0 }).collect();
    let p = random_conditioned(rng, dim, 2.0);
    linalg::symmetrize(&(p.transpose() * linalg::diag(&d) * &p))
}

/// `A = g⁻¹S` with random symmetric `S`; `definite` makes `g` positive.
pub fn generic(rng: &mut FixtureRng, dim: usize, definite: bool, sep: &Separation) -> Fixture {
    loop {
        let horizon = uniform(rng, 1.0, 8.0);
        let g = random_form(rng, dim, definite);
        let s = random_symmetric(rng, dim, 2.0);
        let a = g.clone().try_inverse().expect("nondegenerate form") * s;
        let Ok(system) = GSymmetricSystem::new(g, a, horizon) else { continue };
        if linalg::spectral_norm(system.a()).unwrap_or(f64::INFINITY) > 12.0 || !well_separated(&system, sep) {
            continue;
        }
        return Fixture { name: format!("generic-{dim}"), system, blocks: None };
    }
}

/// `count` fixtures over dimensions 2–6, alternating [`constructed`] and
/// [`generic`]; every third constructed fixture may have a zero eigenvalue
/// and every other generic one has a definite form.
pub fn mixed(rng: &mut FixtureRng, count: usize, sep: &Separation) -> Vec<Fixture> {
    (0..count)
        .map(|i| {
            let dim = 2 + i % 5;
            if i % 2 == 0 {
                let mix = SpectrumMix { allow_zero: i % 3 == 0, ..Default::default() };
                constructed(rng, dim, &mix, sep)
            } else {
                generic(rng, dim, i % 4 == 1, sep)
            }
        })
        .collect()
}

/// Random reducible symplectic coefficient: `𝔄 = 𝔅S` with `𝔅`, `S`, `ℭ` symmetric.
pub fn reducible_symplectic(rng: &mut FixtureRng, dim: usize, sep: &Separation) -> (SymplecticCoefficient<f64>, f64) {
    loop {
        let horizon = uniform(rng, 1.0, 6.0);
        let b = random_form(rng, dim, false);
        let s = random_symmetric(rng, dim, 0.6);
        let a = &b * &s;
        let c = random_symmetric(rng, dim, 1.5);
        let Ok(x) = SymplecticCoefficient::new(a, b, c) else { continue };
        let Ok(reduced) = crate::symplectic::reduce(&x, horizon) else { continue };
        if linalg::spectral_norm(reduced.a()).unwrap_or(f64::INFINITY) > 12.0 || !well_separated(&reduced, sep) {
            continue;
        }
        return (x, horizon);
    }
}

/// Coefficient with `Ker 𝔄ᵀ ∩ Ker 𝔅 ≠ 0`: every instant is conjugate.
pub fn continuum_symplectic(rng: &mut FixtureRng, dim: usize) -> SymplecticCoefficient<f64> {
    let q = random_orthogonal(rng, dim);
    let u = q.column(0).into_owned();
    let proj = DMatrix::identity(dim, dim) - &u * u.transpose();
    let b = &proj * random_symmetric(rng, dim, 1.0) * &proj;
    let a = &proj * random_matrix(rng, dim, dim);
    let c = random_symmetric(rng, dim, 1.0);
    SymplecticCoefficient::new(a, b, c).expect("symmetric blocks")
}

fn sys(g: &[f64], a: &[f64], t: f64) -> GSymmetricSystem<f64> {
    let n = (g.len() as f64).sqrt() as usize;
    GSymmetricSystem::new(DMatrix::from_row_slice(n, n, g), DMatrix::from_row_slice(n, n, a), t)
        .expect("named fixture is valid")
}

fn named(name: &str, system: GSymmetricSystem<f64>, blocks: Option<Vec<BlockSpec>>) -> Fixture {
    Fixture { name: name.to_string(), system, blocks }
}

fn bs(lambda: f64, size: usize, epsilon: i8) -> BlockSpec {
    BlockSpec { lambda, size, epsilon }
}

/// Hand-built systems with known structure.
pub fn named_second_order() -> Vec<Fixture> {
    use std::f64::consts::PI;
    let mut out = vec![
        named("riemannian-I2", sys(&[1., 0., 0., 1.], &[-1., 0., 0., -1.], 3.5), Some(vec![bs(-1.0, 1, 1), bs(-1.0, 1, 1)])),
        named("sip2-jordan-pi", sys(&[0., 1., 1., 0.], &[-1., 1., 0., -1.], PI), Some(vec![bs(-1.0, 2, 1)])),
        named("sip2-jordan-4", sys(&[0., 1., 1., 0.], &[-1., 1., 0., -1.], 4.0), Some(vec![bs(-1.0, 2, 1)])),
        named(
            "split-diagonal",
            sys(&[1., 0., 0., -1.], &[-1., 0., 0., -4.], 3.2),
            Some(vec![bs(-4.0, 1, -1), bs(-1.0, 1, 1)]),
        ),
        named("oscillator-7", sys(&[1.], &[-1.], 7.0), Some(vec![bs(-1.0, 1, 1)])),
        named("hyperbolic-10", sys(&[1.], &[1.], 10.0), Some(vec![bs(1.0, 1, 1)])),
        named("null-I2", sys(&[1., 0., 0., 1.], &[0.; 4], 1.0), Some(vec![bs(0.0, 1, 1), bs(0.0, 1, 1)])),
        named("nilpotent-sip2", sys(&[0., 1., 1., 0.], &[0., 1., 0., 0.], 2.0), Some(vec![bs(0.0, 2, 1)])),
    ];
    // Size-3 block with ε = −1 next to an indefinite diagonalizable pair.
    let (g0, a0) = canonical_pair_matrices(&[bs(-0.25, 3, -1), bs(-1.0, 1, 1), bs(-1.0, 1, -1)], &[]);
    out.push(named(
        "jordan3-mixed",
        GSymmetricSystem::new(g0, a0, 9.0).expect("valid"),
        Some(vec![bs(-1.0, 1, 1), bs(-1.0, 1, -1), bs(-0.25, 3, -1)]),
    ));
    // Two size-2 blocks of opposite sign at λ = −1, in a random basis.
    let (g0, a0) = canonical_pair_matrices(&[bs(-1.0, 2, 1), bs(-1.0, 2, -1)], &[]);
    let mut r = rng(7);
    let p = random_conditioned(&mut r, 4, 2.0);
    let (g, a) = conjugate_pair(&g0, &a0, &p);
    out.push(named(
        "double-jordan2",
        GSymmetricSystem::new(g, a, 4.0).expect("valid"),
        Some(vec![bs(-1.0, 2, 1), bs(-1.0, 2, -1)]),
    ));
    out
}
