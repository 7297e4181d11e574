//! Definitional computation of conjugate instants, Maslov and Conley–Zehnder
//! indices by evolving the fundamental solution numerically.
//!
//! The Lagrangian path is propagated with orthonormal frames on a uniform
//! grid. On every grid interval a chart Lagrangian `L₁`, transversal to the
//! base `L₀` and to the path on the whole closed interval, is selected and
//! certified with a Lipschitz bound; the index is the sum of the increments
//! of the extended coindex `n₊ + nullity` of the chart form
//! `(x, y) ↦ ω(Tx, y)` on `L₀`, where the path point is the graph of
//! `T: L₀ → L₁`. Nothing here uses the spectral closed forms.

use nalgebra::{Complex, DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::jordan::GSymmetricSystem;
use crate::linalg;
use crate::scalar::Real;

/// How a chart is picked among the admissible candidates of an interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChartStrategy {
    /// Keep the current chart while certified, else take the largest margin.
    Best,
    /// Candidates in a seeded random order; the first certified one wins.
    Shuffled(u64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    /// Number of grid intervals on `[0, T]`.
    pub grid: usize,
    /// Random symmetric chart candidates in addition to `M = 0, ±I`.
    pub random_charts: usize,
    pub seed: u64,
    pub strategy: ChartStrategy,
    /// Bisection depth budget when no candidate chart is certified.
    pub max_depth: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { grid: 2048, random_charts: 6, seed: 0x5eed_cafe, strategy: ChartStrategy::Best, max_depth: 24 }
    }
}

impl OracleConfig {
    pub fn with_grid(mut self, grid: usize) -> Self {
        self.grid = grid.max(8);
        self
    }

    pub fn with_strategy(mut self, strategy: ChartStrategy) -> Self {
        self.strategy = strategy;
        self
    }
}

/// A point of the path `ℓ(t) = Φ(t)(L₀)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticPathSample<T: Real> {
    pub t: T,
    pub phi: DMatrix<T>,
    /// Orthonormal `2n × n` frame of `ℓ(t)`.
    pub lagrangian_frame: DMatrix<T>,
    pub intersection_dim: usize,
}

/// Result of a definitional index computation.
#[derive(Debug, Clone, PartialEq)]
pub struct PathIndex<T: Real> {
    pub index: i64,
    /// Partition points with a nontrivial intersection with the base.
    pub intersections: Vec<(T, usize)>,
    /// Number of chart switches.
    pub chart_changes: usize,
    pub subdivisions: usize,
}

/// `𝒞(B) = Σ Bᵏ/(2k)!` and `𝒮(B) = Σ Bᵏ/(2k+1)!` by scaling and squaring:
/// the series is summed for `B/4ʲ` and doubled back with
/// `𝒞(4B) = 2𝒞(B)² − I`, `𝒮(4B) = 𝒮(B)𝒞(B)`.
pub fn cos_sin_series<T: Real>(b: &DMatrix<T>) -> Result<(DMatrix<T>, DMatrix<T>)> {
    let n = linalg::check_square(b)?;
    linalg::check_finite(b)?;
    let id = DMatrix::<T>::identity(n, n);
    let norm = b.column_iter().map(|c| c.iter().fold(T::zero(), |acc, x| acc + x.abs())).fold(T::zero(), |m, x| m.max(x));
    let mut j = 0u32;
    let mut scale = T::one();
    while norm / scale > T::one() {
        scale *= T::lit(4.0);
        j += 1;
        if j > 200 {
            return Err(Error::numeric("fundamental solution", "argument too large for scaling"));
        }
    }
    let bs = b / scale;
    let mut c = id.clone();
    let mut s = id.clone();
    let mut power = id.clone();
    let mut fact = T::one();
    let mut k = 0usize;
    loop {
        k += 1;
        power = &power * &bs;
        let kk = T::from_usize_lossy(2 * k);
        fact = fact * (kk - T::one()) * kk;
        let tc = &power / fact;
        let ts = &power / (fact * (kk + T::one()));
        c += &tc;
        s += &ts;
        if linalg::max_abs(&tc) <= T::eps() * T::lit(1e-3) || k > 60 {
            if k > 60 {
                return Err(Error::numeric("fundamental solution", "series did not converge"));
            }
            break;
        }
    }
    for _ in 0..j {
        let c2 = &c * &c;
        s = &s * &c;
        c = c2 * T::lit(2.0) - &id;
    }
    Ok((c, s))
}

/// `Φ(t) = exp(tX)` for `X = [[0, g⁻¹], [gA, 0]]`, via the series above.
pub fn fundamental_solution<T: Real>(system: &GSymmetricSystem<T>, t: T) -> Result<DMatrix<T>> {
    let g = system.g().matrix();
    let g_inv = linalg::invert(g, "metric inverse")?;
    fundamental_from_parts(g, &g_inv, system.a(), t)
}

fn fundamental_from_parts<T: Real>(g: &DMatrix<T>, g_inv: &DMatrix<T>, a: &DMatrix<T>, t: T) -> Result<DMatrix<T>> {
    let n = a.nrows();
    let (c, s) = cos_sin_series(&(a * (t * t)))?;
    let mut phi = DMatrix::zeros(2 * n, 2 * n);
    phi.view_mut((0, 0), (n, n)).copy_from(&c);
    phi.view_mut((0, n), (n, n)).copy_from(&(&s * g_inv * t));
    phi.view_mut((n, 0), (n, n)).copy_from(&(g * a * &s * t));
    phi.view_mut((n, n), (n, n)).copy_from(&(g * &c * g_inv));
    Ok(phi)
}

/// `max|φᵀJφ − J|`.
pub fn symplectic_residual<T: Real>(phi: &DMatrix<T>) -> T {
    let j = linalg::canonical_j::<T>(phi.nrows() / 2);
    linalg::max_abs(&(phi.transpose() * &j * phi - j))
}

fn null_threshold<T: Real>() -> T {
    T::eps().powf(T::lit(0.7))
}

fn accept_threshold<T: Real>() -> T {
    T::eps().powf(T::lit(0.4))
}

/// `ℓ(t)` with its intersection dimension against `{0} ⊕ Rⁿ`.
pub fn sample<T: Real>(system: &GSymmetricSystem<T>, t: T) -> Result<SymplecticPathSample<T>> {
    let n = system.dim();
    let phi = fundamental_solution(system, t)?;
    let frame = linalg::qr_frame(&phi.columns(n, n).into_owned());
    let sv = linalg::singular_values(&frame.rows(0, n).into_owned())?;
    let thr = accept_threshold::<T>();
    let intersection_dim = sv.iter().filter(|&&x| x <= thr).count();
    Ok(SymplecticPathSample { t, phi, lagrangian_frame: frame, intersection_dim })
}

#[derive(Debug, Clone)]
enum Flow<T: Real> {
    Second { g: DMatrix<T>, g_inv: DMatrix<T>, a: DMatrix<T> },
    Matrix(DMatrix<T>),
    /// Acts as the identity on the first factor: the graph path `(z, Φz)`.
    Doubled(Box<Flow<T>>),
}

impl<T: Real> Flow<T> {
    fn generator(&self) -> DMatrix<T> {
        match self {
            Flow::Second { g, g_inv, a } => {
                let n = a.nrows();
                let mut x = DMatrix::zeros(2 * n, 2 * n);
                x.view_mut((0, n), (n, n)).copy_from(g_inv);
                x.view_mut((n, 0), (n, n)).copy_from(&(g * a));
                x
            }
            Flow::Matrix(h) => h.clone(),
            Flow::Doubled(inner) => {
                let x = inner.generator();
                linalg::block_diag(&[DMatrix::zeros(x.nrows(), x.nrows()), x])
            }
        }
    }

    fn propagator(&self, s: T) -> Result<DMatrix<T>> {
        match self {
            Flow::Second { g, g_inv, a } => fundamental_from_parts(g, g_inv, a, s),
            Flow::Matrix(h) => {
                let e = (h * s).exp();
                linalg::check_finite(&e)?;
                Ok(e)
            }
            Flow::Doubled(inner) => {
                let p = inner.propagator(s)?;
                Ok(linalg::block_diag(&[DMatrix::identity(p.nrows(), p.nrows()), p]))
            }
        }
    }
}

struct Path<T: Real> {
    flow: Flow<T>,
    j: DMatrix<T>,
    base: DMatrix<T>,
    base_perp: DMatrix<T>,
    start: DMatrix<T>,
    horizon: T,
    h_norm: T,
}

#[derive(Debug, Clone)]
struct Point<T: Real> {
    t: T,
    frame: DMatrix<T>,
    null: usize,
}

struct Chart<T: Real> {
    w_top: DMatrix<T>,
    w_bot: DMatrix<T>,
    k: DMatrix<T>,
    w_top_norm: T,
}

impl<T: Real> Path<T> {
    fn new(flow: Flow<T>, j: DMatrix<T>, base: DMatrix<T>, start: DMatrix<T>, horizon: T) -> Result<Self> {
        if !(horizon > T::zero()) || !horizon.is_finite() {
            return Err(Error::NonPositiveHorizon(horizon.as_f64()));
        }
        let h_norm = linalg::spectral_norm(&flow.generator())?;
        let nn = base.nrows();
        let full = linalg::full_svd(&base.transpose())?;
        let base_perp = full.v.columns(base.ncols(), nn - base.ncols()).into_owned();
        Ok(Self { flow, j, base, base_perp, start: linalg::qr_frame(&start), horizon, h_norm })
    }

    fn intersection_sv(&self, frame: &DMatrix<T>) -> Result<Vec<T>> {
        linalg::singular_values(&(self.base_perp.transpose() * frame))
    }

    fn point(&self, t: T, frame: DMatrix<T>) -> Result<Point<T>> {
        let thr = null_threshold::<T>();
        let null = self.intersection_sv(&frame)?.iter().filter(|&&x| x <= thr).count();
        Ok(Point { t, frame, null })
    }

    fn is_gray(&self, frame: &DMatrix<T>) -> Result<bool> {
        let thr = null_threshold::<T>();
        let (lo, hi) = (thr / T::lit(10.0), thr * T::lit(10.0));
        Ok(self.intersection_sv(frame)?.iter().any(|&x| x > lo && x < hi))
    }

    fn advance(&self, from: &Point<T>, t: T) -> Result<DMatrix<T>> {
        Ok(linalg::qr_frame(&(self.flow.propagator(t - from.t)? * &from.frame)))
    }

    /// Grid points, with interior points nudged off ambiguous near-intersections.
    fn grid(&self, n: usize) -> Result<(Vec<Point<T>>, Vec<Point<T>>)> {
        let h = self.horizon / T::from_usize_lossy(n);
        let step = self.flow.propagator(h)?;
        let mut chain = Vec::with_capacity(n + 1);
        let mut eval = Vec::with_capacity(n + 1);
        let mut frame = self.start.clone();
        for i in 0..=n {
            if i > 0 {
                frame = linalg::qr_frame(&(&step * &frame));
            }
            let t = if i == n { self.horizon } else { h * T::from_usize_lossy(i) };
            let base = Point { t, frame: frame.clone(), null: 0 };
            let mut chosen = self.point(t, frame.clone())?;
            if i > 0 && i < n && self.is_gray(&frame)? {
                for f in [0.25, -0.25, 0.4, -0.4, 0.1, -0.1] {
                    let tt = t + h * T::lit(f);
                    let fr = self.advance(&base, tt)?;
                    if !self.is_gray(&fr)? {
                        chosen = self.point(tt, fr)?;
                        break;
                    }
                }
            }
            chain.push(base);
            eval.push(chosen);
        }
        Ok((chain, eval))
    }

    fn chart(&self, m: &DMatrix<T>) -> Result<Chart<T>> {
        let nn = self.base.nrows();
        let k = self.base.ncols();
        let b1 = linalg::qr_frame(&(&self.j * &self.base + &self.base * m));
        let w = linalg::invert(&linalg::hstack(nn, &[&self.base, &b1]), "chart frame")?;
        let w_top = w.rows(0, k).into_owned();
        let w_bot = w.rows(k, k).into_owned();
        let kk = b1.transpose() * &self.j * &self.base;
        let w_top_norm = linalg::spectral_norm(&w_top)?;
        Ok(Chart { w_top, w_bot, k: kk, w_top_norm })
    }

    fn candidates(&self, cfg: &OracleConfig) -> Result<Vec<Chart<T>>> {
        let k = self.base.ncols();
        let id = DMatrix::<T>::identity(k, k);
        let mut ms = vec![DMatrix::zeros(k, k), id.clone(), -id];
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        for _ in 0..cfg.random_charts {
            let r = DMatrix::from_fn(k, k, |_, _| T::lit(rng.random::<f64>() * 2.0 - 1.0));
            ms.push(linalg::symmetrize(&r) * T::lit(1.5));
        }
        ms.iter().map(|m| self.chart(m)).collect()
    }

    fn margin(&self, chart: &Chart<T>, p: &Point<T>) -> Result<T> {
        let s = linalg::singular_values(&(&chart.w_top * &p.frame))?;
        Ok(s.last().copied().unwrap_or_else(T::zero))
    }

    fn certified(&self, chart: &Chart<T>, a: &Point<T>, b: &Point<T>) -> Result<Option<T>> {
        let len = b.t - a.t;
        let lip = chart.w_top_norm * self.h_norm * (len * self.h_norm).exp();
        let (ma, mb) = (self.margin(chart, a)?, self.margin(chart, b)?);
        Ok((ma + mb > T::lit(1.05) * lip * len).then_some(ma.min(mb)))
    }

    fn ext_coindex(&self, chart: &Chart<T>, p: &Point<T>) -> Result<usize> {
        let pm = &chart.w_top * &p.frame;
        let qm = &chart.w_bot * &p.frame;
        let form = qm.transpose() * &chart.k * pm;
        let (vals, _) = linalg::sym_eigen(&form)?;
        let mut by_mag = vals;
        by_mag.sort_by(|x, y| x.abs().partial_cmp(&y.abs()).unwrap_or(std::cmp::Ordering::Equal));
        let plus = by_mag[p.null..].iter().filter(|&&x| x > T::zero()).count();
        Ok(plus + p.null)
    }

    fn index(&self, cfg: &OracleConfig) -> Result<PathIndex<T>> {
        let charts = self.candidates(cfg)?;
        let (_, eval) = self.grid(cfg.grid)?;
        let mut order: Vec<usize> = (0..charts.len()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(match cfg.strategy {
            ChartStrategy::Best => 0,
            ChartStrategy::Shuffled(s) => s,
        });
        let mut state = IndexState { current: None, changes: 0, subdivisions: 0, total: 0 };
        for w in eval.windows(2) {
            if let ChartStrategy::Shuffled(_) = cfg.strategy {
                for i in (1..order.len()).rev() {
                    order.swap(i, rng.random_range(0..=i));
                }
            }
            self.interval(&charts, &order, cfg, &w[0], &w[1], 0, &mut state)?;
        }
        let intersections = eval.iter().filter(|p| p.null > 0).map(|p| (p.t, p.null)).collect();
        Ok(PathIndex {
            index: state.total,
            intersections,
            chart_changes: state.changes,
            subdivisions: state.subdivisions,
        })
    }

    #[allow(clippy::too_many_arguments)]
    fn interval(
        &self,
        charts: &[Chart<T>],
        order: &[usize],
        cfg: &OracleConfig,
        a: &Point<T>,
        b: &Point<T>,
        depth: usize,
        state: &mut IndexState,
    ) -> Result<()> {
        let pick = match cfg.strategy {
            ChartStrategy::Best => {
                let keep = match state.current {
                    Some(c) => self.certified(&charts[c], a, b)?.map(|_| c),
                    None => None,
                };
                match keep {
                    Some(c) => Some(c),
                    None => {
                        let mut best: Option<(usize, T)> = None;
                        for (i, c) in charts.iter().enumerate() {
                            if let Some(m) = self.certified(c, a, b)? {
                                if best.is_none_or(|(_, bm)| m > bm) {
                                    best = Some((i, m));
                                }
                            }
                        }
                        best.map(|x| x.0)
                    }
                }
            }
            ChartStrategy::Shuffled(_) => {
                let mut found = None;
                for &i in order {
                    if self.certified(&charts[i], a, b)?.is_some() {
                        found = Some(i);
                        break;
                    }
                }
                found
            }
        };
        match pick {
            Some(c) => {
                if state.current != Some(c) {
                    state.changes += 1;
                    state.current = Some(c);
                }
                let inc = self.ext_coindex(&charts[c], b)? as i64 - self.ext_coindex(&charts[c], a)? as i64;
                state.total += inc;
                Ok(())
            }
            None => {
                if depth >= cfg.max_depth {
                    return Err(Error::numeric(
                        "definitional index",
                        format!("no transversal chart on [{:e}, {:e}]", a.t.as_f64(), b.t.as_f64()),
                    ));
                }
                state.subdivisions += 1;
                let len = b.t - a.t;
                let mut mid = Point { t: T::zero(), frame: a.frame.clone(), null: 0 };
                for f in [0.5, 0.4, 0.6, 0.3, 0.7] {
                    let t = a.t + len * T::lit(f);
                    let fr = self.advance(a, t)?;
                    mid = self.point(t, fr.clone())?;
                    if !self.is_gray(&fr)? {
                        break;
                    }
                }
                self.interval(charts, order, cfg, a, &mid, depth + 1, state)?;
                self.interval(charts, order, cfg, &mid, b, depth + 1, state)
            }
        }
    }

    /// Instants in `(0, T]` where the path meets the base, with the dimension
    /// of the intersection.
    fn detect(&self, n: usize) -> Result<Vec<(T, usize)>> {
        let (chain, _) = self.grid(n)?;
        let sig: Vec<T> = chain.iter().map(|p| self.log_det(&p.frame)).collect::<Result<_>>()?;
        let h = self.horizon / T::from_usize_lossy(n);
        let accept = accept_threshold::<T>();
        let mut found: Vec<(T, usize)> = Vec::new();
        let mut candidates = Vec::new();
        for i in 1..=n {
            let left = if i == 1 { T::max_value().unwrap_or_else(T::one) } else { sig[i - 1] };
            if i == n {
                let d = self.deficiency(&chain[n].frame)?;
                if d > 0 {
                    found.push((self.horizon, d));
                }
                continue;
            }
            if sig[i] <= left && sig[i] <= sig[i + 1] {
                candidates.push(i);
            }
        }
        for (c, &i) in candidates.iter().enumerate() {
            let lo = if i == 1 { h * T::lit(0.5) } else { chain[i - 1].t };
            let hi = chain[i + 1].t;
            let tg = self.golden(&chain, lo, hi, h)?;
            let (smin, _) = self.sigma_at(&chain, tg, h)?;
            if smin > accept {
                continue;
            }
            let mut gap = tg;
            if c > 0 {
                gap = gap.min(tg - chain[candidates[c - 1]].t);
            }
            if c + 1 < candidates.len() {
                gap = gap.min(chain[candidates[c + 1]].t - tg);
            }
            let radius = (h * T::lit(8.0)).min(gap * T::lit(0.4)).max(h * T::lit(0.5));
            let t = self.polish(&chain, tg, radius, h)?;
            if t > self.horizon {
                continue;
            }
            let mut d = self.deficiency(&self.sigma_at(&chain, t, h)?.1)?;
            if d == 0 {
                d = self.deficiency(&self.sigma_at(&chain, tg, h)?.1)?;
            }
            if d > 0 {
                found.push((t, d));
            }
        }
        found.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap_or(std::cmp::Ordering::Equal));
        let band = self.horizon * T::lit(1e-7);
        let mut out: Vec<(T, usize)> = Vec::new();
        for (t, d) in found {
            match out.last_mut() {
                Some(last) if t - last.0 <= band => {
                    if t == self.horizon {
                        *last = (t, d.max(last.1));
                    } else {
                        last.1 = last.1.max(d);
                    }
                }
                _ => out.push((t, d)),
            }
        }
        Ok(out)
    }

    fn deficiency(&self, frame: &DMatrix<T>) -> Result<usize> {
        let thr = accept_threshold::<T>();
        Ok(self.intersection_sv(frame)?.iter().filter(|&&x| x <= thr).count())
    }

    fn nearest(&self, chain: &[Point<T>], t: T, h: T) -> usize {
        ((t / h).floor().to_usize().unwrap_or(0)).min(chain.len() - 1)
    }

    /// Frame at `t`, propagated straight from `t = 0` when that frame is
    /// well conditioned (accumulated chain rounding would otherwise limit the
    /// accuracy of high-order intersections), else from the nearest grid point.
    fn raw_frame(&self, chain: &[Point<T>], t: T, h: T) -> Result<DMatrix<T>> {
        let direct = self.flow.propagator(t)? * &self.start;
        let s = linalg::singular_values(&direct)?;
        if let (Some(&hi), Some(&lo)) = (s.first(), s.last()) {
            if lo > T::zero() && hi / lo <= T::lit(1e3) {
                return Ok(direct);
            }
        }
        let i = self.nearest(chain, t, h);
        Ok(self.flow.propagator(t - chain[i].t)? * &chain[i].frame)
    }

    /// `Σ ln max(σᵢ, floor)` over the intersection singular values: every
    /// zero of the determinant is a separate dip, even next to a smaller
    /// singular value belonging to another instant.
    fn log_det(&self, frame: &DMatrix<T>) -> Result<T> {
        let floor = null_threshold::<T>();
        Ok(self.intersection_sv(frame)?.iter().fold(T::zero(), |acc, &x| acc + x.max(floor).ln()))
    }

    fn log_det_at(&self, chain: &[Point<T>], t: T, h: T) -> Result<T> {
        self.log_det(&linalg::qr_frame(&self.raw_frame(chain, t, h)?))
    }

    fn sigma_at(&self, chain: &[Point<T>], t: T, h: T) -> Result<(T, DMatrix<T>)> {
        let frame = linalg::qr_frame(&self.raw_frame(chain, t, h)?);
        let s = self.intersection_sv(&frame)?;
        Ok((s.last().copied().unwrap_or_else(T::zero), frame))
    }

    fn golden(&self, chain: &[Point<T>], mut lo: T, mut hi: T, h: T) -> Result<T> {
        let r = T::lit(0.618_033_988_749_894_8);
        let mut x1 = hi - r * (hi - lo);
        let mut x2 = lo + r * (hi - lo);
        let mut f1 = self.log_det_at(chain, x1, h)?;
        let mut f2 = self.log_det_at(chain, x2, h)?;
        for _ in 0..80 {
            if f1 <= f2 {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - r * (hi - lo);
                f1 = self.log_det_at(chain, x1, h)?;
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + r * (hi - lo);
                f2 = self.log_det_at(chain, x2, h)?;
            }
            if hi - lo <= T::eps() * T::lit(4.0) * hi.abs().max(T::one()) {
                break;
            }
        }
        Ok(if f1 <= f2 { x1 } else { x2 })
    }

    /// Locates an intersection of any order from `det(B⊥ᵀ Z(t))`, which is
    /// analytic across the instant when `Z` is propagated from one fixed grid
    /// frame. A least-squares polynomial is fitted on the window and the
    /// centroid of its root cluster near the estimate is returned; unlike the
    /// individual roots of a multiple zero, the centroid is well conditioned.
    fn polish(&self, chain: &[Point<T>], tg: T, radius: T, h: T) -> Result<T> {
        const SAMPLES: i32 = 16;
        const DEGREE: usize = 8;
        let anchor = &chain[self.nearest(chain, tg, h)];
        let mut center = tg;
        for _ in 0..2 {
            let mut xs = Vec::with_capacity(2 * SAMPLES as usize + 1);
            let mut ds = Vec::with_capacity(xs.capacity());
            for j in -SAMPLES..=SAMPLES {
                let x = T::lit(f64::from(j) / f64::from(SAMPLES));
                let z = self.flow.propagator(center + x * radius - anchor.t)? * &anchor.frame;
                xs.push(x);
                ds.push((self.base_perp.transpose() * z).determinant());
            }
            let scale = ds.iter().fold(T::zero(), |m, d| m.max(d.abs()));
            if !(scale > T::zero()) || !scale.is_finite() {
                return Ok(center);
            }
            let v = DMatrix::from_fn(xs.len(), DEGREE + 1, |r, c| xs[r].powi(c as i32));
            let rhs = DVector::from_iterator(ds.len(), ds.iter().map(|d| *d / scale));
            let Ok(coef) = v.svd(true, true).solve(&rhs, T::eps()) else { return Ok(center) };
            let coef: Vec<T> = coef.iter().copied().collect();
            let Some(x) = [0.5, 0.35, 0.25].iter().find_map(|&rho| root_centroid(&coef, T::lit(rho))) else {
                return Ok(center);
            };
            let next = center + radius * x;
            let done = (next - center).abs() <= radius * T::lit(1e-3);
            center = next;
            if done {
                break;
            }
        }
        Ok(center)
    }
}

/// Number and centroid of the zeros of the real polynomial `coef` inside
/// `|z| < rho`, from the contour integrals `∮ z^k p′/p dz`. `None` when a
/// zero is too close to the contour for the count to be an integer.
fn root_centroid<T: Real>(coef: &[T], rho: T) -> Option<T> {
    const POINTS: usize = 256;
    let eval = |z: Complex<T>| {
        let mut p = Complex::new(T::zero(), T::zero());
        let mut dp = Complex::new(T::zero(), T::zero());
        for &c in coef.iter().rev() {
            dp = dp * z + p;
            p = p * z + Complex::new(c, T::zero());
        }
        (p, dp)
    };
    let mut count = Complex::new(T::zero(), T::zero());
    let mut first = Complex::new(T::zero(), T::zero());
    for k in 0..POINTS {
        let theta = T::two_pi() * T::from_usize_lossy(k) / T::from_usize_lossy(POINTS);
        let z = Complex::new(rho * theta.cos(), rho * theta.sin());
        let (p, dp) = eval(z);
        if p.re == T::zero() && p.im == T::zero() {
            return None;
        }
        let f = dp / p * z;
        count += f;
        first += f * z;
    }
    let m = T::from_usize_lossy(POINTS);
    let (count, first) = (count.re / m, first.re / m);
    let n = count.round();
    if (count - n).abs() > T::lit(0.05) || n < T::one() {
        return None;
    }
    Some(first / n)
}

struct IndexState {
    current: Option<usize>,
    changes: usize,
    subdivisions: usize,
    total: i64,
}

fn second_order_flow<T: Real>(system: &GSymmetricSystem<T>) -> Result<Flow<T>> {
    let g = system.g().matrix().clone();
    let g_inv = linalg::invert(&g, "metric inverse")?;
    Ok(Flow::Second { g, g_inv, a: system.a().clone() })
}

fn vertical<T: Real>(n: usize) -> DMatrix<T> {
    let mut b = DMatrix::zeros(2 * n, n);
    b.view_mut((n, 0), (n, n)).fill_with_identity();
    b
}

fn maslov_path<T: Real>(flow: Flow<T>, n: usize, horizon: T) -> Result<Path<T>> {
    let base = vertical::<T>(n);
    Path::new(flow, linalg::canonical_j(n), base.clone(), base, horizon)
}

fn graph_path<T: Real>(flow: Flow<T>, n: usize, horizon: T) -> Result<Path<T>> {
    let j = linalg::canonical_j::<T>(n);
    let jbar = linalg::block_diag(&[j.clone(), -j]);
    let id = DMatrix::<T>::identity(2 * n, 2 * n);
    let mut base = DMatrix::zeros(4 * n, 2 * n);
    base.view_mut((0, 0), (2 * n, 2 * n)).copy_from(&id);
    base.view_mut((2 * n, 0), (2 * n, 2 * n)).copy_from(&id);
    let base = base / T::lit(2.0).sqrt();
    Path::new(Flow::Doubled(Box::new(flow)), jbar, base.clone(), base, horizon)
}

/// Rank drops of `𝒮(t²A)` on `(0, T]`: `(t, deficiency)`.
pub fn detect_conjugate<T: Real>(system: &GSymmetricSystem<T>, cfg: &OracleConfig) -> Result<Vec<(T, usize)>> {
    maslov_path(second_order_flow(system)?, system.dim(), system.horizon())?.detect(cfg.grid)
}

/// Maslov index of `t ↦ Φ(t)({0} ⊕ Rⁿ)` relative to `{0} ⊕ Rⁿ` on `[0, T]`.
pub fn maslov_definitional<T: Real>(system: &GSymmetricSystem<T>, cfg: &OracleConfig) -> Result<i64> {
    Ok(maslov_path_index(system, cfg)?.index)
}

pub fn maslov_path_index<T: Real>(system: &GSymmetricSystem<T>, cfg: &OracleConfig) -> Result<PathIndex<T>> {
    maslov_path(second_order_flow(system)?, system.dim(), system.horizon())?.index(cfg)
}

/// Maslov index of `t ↦ Gr Φ(t)` relative to the diagonal of
/// `(R²ⁿ ⊕ R²ⁿ, ω ⊕ −ω)`. Singular `A` is evaluated directly: the constant
/// part `Ker A ⊕ 0` of the intersection contributes to the nullity at every
/// partition point.
pub fn cz_definitional<T: Real>(system: &GSymmetricSystem<T>, cfg: &OracleConfig) -> Result<i64> {
    Ok(cz_path_index(system, cfg)?.index)
}

pub fn cz_path_index<T: Real>(system: &GSymmetricSystem<T>, cfg: &OracleConfig) -> Result<PathIndex<T>> {
    graph_path(second_order_flow(system)?, system.dim(), system.horizon())?.index(cfg)
}

/// Maslov index of `t ↦ exp(tH)({0} ⊕ Rⁿ)` for an arbitrary Hamiltonian
/// matrix `H` (propagated with a general matrix exponential).
pub fn maslov_hamiltonian<T: Real>(h: &DMatrix<T>, horizon: T, cfg: &OracleConfig) -> Result<i64> {
    let n = check_hamiltonian(h)?;
    Ok(maslov_path(Flow::Matrix(h.clone()), n, horizon)?.index(cfg)?.index)
}

/// Intersections of `exp(tH)({0} ⊕ Rⁿ)` with `{0} ⊕ Rⁿ` on `(0, T]`.
pub fn detect_hamiltonian<T: Real>(h: &DMatrix<T>, horizon: T, cfg: &OracleConfig) -> Result<Vec<(T, usize)>> {
    let n = check_hamiltonian(h)?;
    maslov_path(Flow::Matrix(h.clone()), n, horizon)?.detect(cfg.grid)
}

fn check_hamiltonian<T: Real>(h: &DMatrix<T>) -> Result<usize> {
    let nn = linalg::check_square(h)?;
    if nn % 2 != 0 {
        return Err(Error::OddDimension(nn));
    }
    let j = linalg::canonical_j::<T>(nn / 2);
    let r = linalg::max_abs(&(h.transpose() * &j + &j * h));
    let scale = linalg::max_abs(h).max(T::one());
    if r > T::default_tolerances().sym * scale {
        return Err(Error::NotSymmetric { residual: (r / scale).as_f64() });
    }
    Ok(nn / 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn sys(g: &[f64], a: &[f64], t: f64) -> GSymmetricSystem<f64> {
        let n = (g.len() as f64).sqrt() as usize;
        GSymmetricSystem::new(DMatrix::from_row_slice(n, n, g), DMatrix::from_row_slice(n, n, a), t).unwrap()
    }

    #[test]
    fn fundamental_solution_examples() {
        let s = sys(&[1.0, 0.0, 0.0, -1.0], &[-1.0, 0.5, -0.5, 2.0], 1.0);
        let phi = fundamental_solution(&s, 0.0).unwrap();
        assert!(linalg::max_abs(&(phi - DMatrix::identity(4, 4))) == 0.0);

        let s = sys(&[1.0], &[-1.0], 1.0);
        let phi = fundamental_solution(&s, PI / 2.0).unwrap();
        let expected = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        assert!(linalg::max_abs(&(phi - expected)) < 1e-14);
    }

    #[test]
    fn cos_sin_identity() {
        let a = DMatrix::<f64>::from_row_slice(2, 2, &[-3.0, 1.0, 0.5, 2.0]);
        for t in [0.1f64, 1.0, 3.0, 7.5] {
            let b = &a * (t * t);
            let (c, s) = cos_sin_series(&b).unwrap();
            let r = &c * &c - &b * &s * &s - DMatrix::identity(2, 2);
            let scale: f64 = linalg::max_abs(&(&c * &c)).max(1.0);
            assert!(linalg::max_abs(&r) / scale < 1e-12, "t = {t}");
        }
    }

    #[test]
    fn definitional_examples() {
        let cfg = OracleConfig::default();
        let s = sys(&[1.0, 0.0, 0.0, 1.0], &[-1.0, 0.0, 0.0, -1.0], 3.5);
        assert_eq!(maslov_definitional(&s, &cfg).unwrap(), 2);
        let d = detect_conjugate(&s, &cfg).unwrap();
        assert_eq!(d.len(), 1, "{d:?}");
        assert!((d[0].0 - PI).abs() < 1e-9 && d[0].1 == 2);

        let s = sys(&[0.0, 1.0, 1.0, 0.0], &[-1.0, 1.0, 0.0, -1.0], 4.0);
        let d = detect_conjugate(&s, &cfg).unwrap();
        assert_eq!(d.len(), 1);
        assert!((d[0].0 - PI).abs() < 1e-8 && d[0].1 == 1, "{d:?}");

    }
}
