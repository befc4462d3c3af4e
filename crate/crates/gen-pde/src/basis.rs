//! Learnable basis-function families.
//!
//! Each family fixes a per-basis parameter layout and an evaluation formula;
//! the parameters themselves (amplitudes, frequencies, centers, widths,
//! offsets) are trained jointly with the synthesis network. Evaluation is
//! written against [`JetCtx`], so the same formulas run directly on jets or
//! recorded on a tape where every basis parameter receives gradients.
//!
//! Gaussian widths are reparameterized as `|sigma| + 1e-6` at evaluation
//! time, which keeps every width strictly positive whatever the optimizer
//! does to the raw parameter.

use rand::Rng;

use crate::autodiff::{Jet2, JetCtx};
use crate::domain::DomainBox;
use crate::error::{Error, Result};

/// Width floor added to `|sigma|` when evaluating Gaussian bases.
pub const SIGMA_GUARD: f64 = 1e-6;

/// The catalog of basis families.
///
/// * `SineHeat` — decaying spatial modes `a e^{-w^2 t} sin(w x) + b`; each
///   mode solves the heat equation exactly.
/// * `GaussHeatProduct` — separable products of temporal decays `e^{-mu_t t}`
///   and spatial Gaussians `a e^{-((x-mu_x)/sigma)^2}`.
/// * `SineTraveling` — sine pairs along the wave characteristics,
///   `a sin(w(x-t)) + b sin(w(x+t)) + d`.
/// * `GaussTraveling` — Gaussian bumps moving along both characteristics.
/// * `SineSpatial` — generic spatial sines `a sin(w x + phi) + b`, optionally
///   concatenated with temporal Gaussians for user-composed problems.
/// * `GaussTemporal` — generic temporal Gaussians
///   `alpha exp(-(t-mu)^2 / (2 sigma^2))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BasisFamily {
    SineHeat,
    GaussHeatProduct,
    SineTraveling,
    GaussTraveling,
    SineSpatial,
    GaussTemporal,
}

impl BasisFamily {
    pub fn tag(&self) -> &'static str {
        match self {
            BasisFamily::SineHeat => "sine-heat",
            BasisFamily::GaussHeatProduct => "gauss-heat-product",
            BasisFamily::SineTraveling => "sine-traveling",
            BasisFamily::GaussTraveling => "gauss-traveling",
            BasisFamily::SineSpatial => "sine-spatial",
            BasisFamily::GaussTemporal => "gauss-temporal",
        }
    }
}

/// How `GaussHeatProduct` presents its factors to the synthesis network:
/// all `m * n` pairwise products, or the `m + n` raw factors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum FeedMode {
    #[default]
    Products,
    Factors,
}

/// A basis family instance: counts, trainable parameters and the domain box
/// the centers were initialized over.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct BasisSet {
    pub family: BasisFamily,
    pub count_m: usize,
    pub count_n: usize,
    pub feed: FeedMode,
    pub domain: DomainBox,
    pub params: Vec<f64>,
}

/// Parameter layout arithmetic for a family instance, independent of any
/// parameter storage. `m` is the (spatial or fused) basis count, `n` the
/// temporal count where the family uses one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct BasisLayout {
    pub family: BasisFamily,
    pub m: usize,
    pub n: usize,
    pub feed: FeedMode,
}

impl BasisLayout {
    /// Trainable reals per fused/spatial basis.
    fn per_m(&self) -> usize {
        match self.family {
            BasisFamily::SineHeat => 3,           // a, w, b
            BasisFamily::GaussHeatProduct => 3,   // a, mu_x, sigma
            BasisFamily::SineTraveling => 4,      // a, b, w, d
            BasisFamily::GaussTraveling => 7,     // a, b, mu, nu, sigma, tau, d
            BasisFamily::SineSpatial => 4,        // a, w, phi, b
            BasisFamily::GaussTemporal => 3,      // alpha, mu, sigma
        }
    }

    /// Trainable reals per temporal basis (families without a temporal block
    /// have none).
    fn per_n(&self) -> usize {
        match self.family {
            BasisFamily::GaussHeatProduct => 1, // mu_t
            BasisFamily::SineSpatial => 3,      // alpha, mu, sigma
            _ => 0,
        }
    }

    pub fn param_len(&self) -> usize {
        // temporal block first where present, then per-basis blocks
        self.n * self.per_n() + self.m * self.per_m()
    }

    /// Number of jets this layout feeds to the synthesis network.
    pub fn output_len(&self) -> usize {
        match self.family {
            BasisFamily::GaussHeatProduct => match self.feed {
                FeedMode::Products => self.m * self.n,
                FeedMode::Factors => self.m + self.n,
            },
            BasisFamily::SineSpatial => self.m + self.n,
            _ => self.m,
        }
    }

    fn temporal_offset(&self, j: usize) -> usize {
        j * self.per_n()
    }

    fn spatial_offset(&self, i: usize) -> usize {
        self.n * self.per_n() + i * self.per_m()
    }

    /// Evaluate every basis output at seeded jets, appending to `out`.
    /// Parameters are read from `ctx.param(base + k)`.
    pub fn eval_into<C: JetCtx>(
        &self,
        ctx: &mut C,
        base: usize,
        x: C::V,
        t: C::V,
        out: &mut Vec<C::V>,
    ) {
        match self.family {
            BasisFamily::SineHeat => {
                for i in 0..self.m {
                    let o = base + self.spatial_offset(i);
                    let a = ctx.param(o);
                    let w = ctx.param(o + 1);
                    let b = ctx.param(o + 2);
                    let wx = ctx.mul(w, x);
                    let s = ctx.sin(wx);
                    let w2 = ctx.mul(w, w);
                    let w2t = ctx.mul(w2, t);
                    let arg = ctx.neg(w2t);
                    let e = ctx.exp(arg);
                    let ae = ctx.mul(a, e);
                    let aes = ctx.mul(ae, s);
                    out.push(ctx.add(aes, b));
                }
            }
            BasisFamily::GaussHeatProduct => {
                let mut temporal = Vec::with_capacity(self.n);
                for j in 0..self.n {
                    let o = base + self.temporal_offset(j);
                    let mu_t = ctx.param(o);
                    let mt = ctx.mul(mu_t, t);
                    let arg = ctx.neg(mt);
                    temporal.push(ctx.exp(arg));
                }
                let mut spatial = Vec::with_capacity(self.m);
                for i in 0..self.m {
                    let o = base + self.spatial_offset(i);
                    let a = ctx.param(o);
                    let mu_x = ctx.param(o + 1);
                    let sigma = ctx.param(o + 2);
                    let g = gaussian_bump(ctx, x, mu_x, sigma);
                    spatial.push(ctx.mul(a, g));
                }
                match self.feed {
                    FeedMode::Products => {
                        for &f in &spatial {
                            for &g in &temporal {
                                out.push(ctx.mul(f, g));
                            }
                        }
                    }
                    FeedMode::Factors => {
                        out.extend_from_slice(&spatial);
                        out.extend_from_slice(&temporal);
                    }
                }
            }
            BasisFamily::SineTraveling => {
                let xm = ctx.sub(x, t);
                let xp = ctx.add(x, t);
                for i in 0..self.m {
                    let o = base + self.spatial_offset(i);
                    let a = ctx.param(o);
                    let b = ctx.param(o + 1);
                    let w = ctx.param(o + 2);
                    let d = ctx.param(o + 3);
                    let wm = ctx.mul(w, xm);
                    let s1 = ctx.sin(wm);
                    let wp = ctx.mul(w, xp);
                    let s2 = ctx.sin(wp);
                    let as1 = ctx.mul(a, s1);
                    let bs2 = ctx.mul(b, s2);
                    let sum = ctx.add(as1, bs2);
                    out.push(ctx.add(sum, d));
                }
            }
            BasisFamily::GaussTraveling => {
                let xm = ctx.sub(x, t);
                let xp = ctx.add(x, t);
                for i in 0..self.m {
                    let o = base + self.spatial_offset(i);
                    let a = ctx.param(o);
                    let b = ctx.param(o + 1);
                    let mu = ctx.param(o + 2);
                    let nu = ctx.param(o + 3);
                    let sigma = ctx.param(o + 4);
                    let tau = ctx.param(o + 5);
                    let d = ctx.param(o + 6);
                    let g1 = gaussian_bump(ctx, xm, mu, sigma);
                    let g2 = gaussian_bump(ctx, xp, nu, tau);
                    let ag = ctx.mul(a, g1);
                    let bg = ctx.mul(b, g2);
                    let sum = ctx.add(ag, bg);
                    out.push(ctx.add(sum, d));
                }
            }
            BasisFamily::SineSpatial => {
                for i in 0..self.m {
                    let o = base + self.spatial_offset(i);
                    let a = ctx.param(o);
                    let w = ctx.param(o + 1);
                    let phi = ctx.param(o + 2);
                    let b = ctx.param(o + 3);
                    let wx = ctx.mul(w, x);
                    let arg = ctx.add(wx, phi);
                    let s = ctx.sin(arg);
                    let asn = ctx.mul(a, s);
                    out.push(ctx.add(asn, b));
                }
                for j in 0..self.n {
                    let o = base + self.temporal_offset(j);
                    out.push(gauss_temporal(ctx, o, t));
                }
            }
            BasisFamily::GaussTemporal => {
                for i in 0..self.m {
                    let o = base + self.spatial_offset(i);
                    out.push(gauss_temporal(ctx, o, t));
                }
            }
        }
    }
}

/// `exp(-((s - mu) / (|sigma| + guard))^2)`
fn gaussian_bump<C: JetCtx>(ctx: &mut C, s: C::V, mu: C::V, sigma: C::V) -> C::V {
    let diff = ctx.sub(s, mu);
    let sa = ctx.abs(sigma);
    let sg = ctx.add_const(sa, SIGMA_GUARD);
    let inv = ctx.recip(sg);
    let z = ctx.mul(diff, inv);
    let z2 = ctx.mul(z, z);
    let arg = ctx.neg(z2);
    ctx.exp(arg)
}

/// `alpha exp(-(t - mu)^2 / (2 (|sigma| + guard)^2))` with params at `o`.
fn gauss_temporal<C: JetCtx>(ctx: &mut C, o: usize, t: C::V) -> C::V {
    let alpha = ctx.param(o);
    let mu = ctx.param(o + 1);
    let sigma = ctx.param(o + 2);
    let diff = ctx.sub(t, mu);
    let sa = ctx.abs(sigma);
    let sg = ctx.add_const(sa, SIGMA_GUARD);
    let inv = ctx.recip(sg);
    let z = ctx.mul(diff, inv);
    let z2 = ctx.mul(z, z);
    let arg = ctx.scale(z2, -0.5);
    let e = ctx.exp(arg);
    ctx.mul(alpha, e)
}

/// Draw the initial parameters for a family instance.
///
/// Amplitudes are `U(0,1)`; the i-th sine frequency draws from `[0, i*pi]`
/// (1-based index); Gaussian widths are `U(0,1)`; Gaussian centers draw
/// uniformly over the relevant coordinate range of `domain` (the
/// characteristic ranges `x -/+ t` for traveling bumps); phases and offsets
/// start at zero. Draws happen in layout order, so a fixed seed reproduces
/// the set exactly.
pub fn init_basis(
    family: BasisFamily,
    count_m: usize,
    count_n: usize,
    domain: DomainBox,
    rng: &mut impl Rng,
) -> Result<BasisSet> {
    let layout = BasisLayout { family, m: count_m, n: count_n, feed: FeedMode::default() };
    let needs_n = layout.per_n() > 0;
    if count_m < 1 {
        return Err(Error::Config(format!("{}: count_m must be >= 1", family.tag())));
    }
    if needs_n && count_n < 1 {
        return Err(Error::Config(format!("{}: count_n must be >= 1", family.tag())));
    }

    let u = |rng: &mut dyn rand::RngCore| rng.random_range(0.0..1.0);
    let range = |lo: f64, hi: f64, rng: &mut dyn rand::RngCore| {
        lo + (hi - lo) * rng.random_range(0.0..1.0)
    };
    let omega = |i: usize, rng: &mut dyn rand::RngCore| {
        (i + 1) as f64 * std::f64::consts::PI * rng.random_range(0.0..1.0)
    };

    let mut params = Vec::with_capacity(layout.param_len());
    match family {
        BasisFamily::SineHeat => {
            for i in 0..count_m {
                params.push(u(rng)); // a
                params.push(omega(i, rng)); // w
                params.push(0.0); // b
            }
        }
        BasisFamily::GaussHeatProduct => {
            for _ in 0..count_n {
                params.push(range(domain.t_lo, domain.t_hi, rng)); // mu_t
            }
            for _ in 0..count_m {
                params.push(u(rng)); // a
                params.push(range(domain.x_lo, domain.x_hi, rng)); // mu_x
                params.push(u(rng)); // sigma
            }
        }
        BasisFamily::SineTraveling => {
            for i in 0..count_m {
                params.push(u(rng)); // a
                params.push(u(rng)); // b
                params.push(omega(i, rng)); // w
                params.push(0.0); // d
            }
        }
        BasisFamily::GaussTraveling => {
            // characteristic coordinate ranges over the domain box
            let (xi_lo, xi_hi) = (domain.x_lo - domain.t_hi, domain.x_hi - domain.t_lo);
            let (eta_lo, eta_hi) = (domain.x_lo + domain.t_lo, domain.x_hi + domain.t_hi);
            for _ in 0..count_m {
                params.push(u(rng)); // a
                params.push(u(rng)); // b
                params.push(range(xi_lo, xi_hi, rng)); // mu on x - t
                params.push(range(eta_lo, eta_hi, rng)); // nu on x + t
                params.push(u(rng)); // sigma
                params.push(u(rng)); // tau
                params.push(0.0); // d
            }
        }
        BasisFamily::SineSpatial => {
            for _ in 0..count_n {
                params.push(u(rng)); // alpha
                params.push(range(domain.t_lo, domain.t_hi, rng)); // mu
                params.push(u(rng)); // sigma
            }
            for i in 0..count_m {
                params.push(u(rng)); // a
                params.push(omega(i, rng)); // w
                params.push(0.0); // phi
                params.push(0.0); // b
            }
        }
        BasisFamily::GaussTemporal => {
            for _ in 0..count_m {
                params.push(u(rng)); // alpha
                params.push(range(domain.t_lo, domain.t_hi, rng)); // mu
                params.push(u(rng)); // sigma
            }
        }
    }
    debug_assert_eq!(params.len(), layout.param_len());

    Ok(BasisSet {
        family,
        count_m,
        count_n,
        feed: FeedMode::default(),
        domain,
        params,
    })
}

impl BasisSet {
    pub fn layout(&self) -> BasisLayout {
        BasisLayout { family: self.family, m: self.count_m, n: self.count_n, feed: self.feed }
    }

    pub fn output_len(&self) -> usize {
        self.layout().output_len()
    }

    /// Evaluate every basis output at the given seeded jets.
    pub fn eval(&self, x_jet: Jet2, t_jet: Jet2) -> Vec<Jet2> {
        let mut ctx = crate::autodiff::DirectCtx::new(&self.params);
        let mut out = Vec::with_capacity(self.output_len());
        let layout = self.layout();
        let (x, t) = (ctx.raw_jet(x_jet), ctx.raw_jet(t_jet));
        layout.eval_into(&mut ctx, 0, x, t, &mut out);
        out
    }
}

/// Spec'd convenience form of [`BasisSet::eval`].
pub fn eval_basis(set: &BasisSet, x_jet: Jet2, t_jet: Jet2) -> Vec<Jet2> {
    set.eval(x_jet, t_jet)
}

/// Complete description of a basis set: raw parameters (sufficient to
/// rebuild the set exactly), a per-output presentation table, and curves
/// sampled on a caller-supplied grid.
#[derive(Clone, Debug, serde::Serialize)]
pub struct BasisExport {
    pub family: BasisFamily,
    pub count_m: usize,
    pub count_n: usize,
    pub feed: FeedMode,
    pub domain: DomainBox,
    pub params: Vec<f64>,
    pub columns: Vec<&'static str>,
    /// One row per basis output, in evaluation order.
    pub rows: Vec<Vec<f64>>,
    /// `curves[point][basis]` values at the supplied grid points.
    pub curves: Vec<Vec<f64>>,
    pub grid: Vec<(f64, f64)>,
}

/// Deterministic parameter dump plus sampled curves.
pub fn export_basis(set: &BasisSet, grid: &[(f64, f64)]) -> BasisExport {
    let layout = set.layout();
    let p = &set.params;
    let (columns, rows): (Vec<&'static str>, Vec<Vec<f64>>) = match set.family {
        BasisFamily::SineHeat => (
            vec!["a", "omega", "b"],
            (0..set.count_m).map(|i| p[3 * i..3 * i + 3].to_vec()).collect(),
        ),
        BasisFamily::GaussHeatProduct => {
            let spatial = |i: usize| {
                let o = set.count_n + 3 * i;
                (p[o], p[o + 1], p[o + 2])
            };
            let cols = vec!["a", "mu_x", "sigma", "mu_t"];
            let rows = match set.feed {
                FeedMode::Products => (0..set.count_m)
                    .flat_map(|i| {
                        let (a, mx, s) = spatial(i);
                        (0..set.count_n).map(move |j| vec![a, mx, s, p[j]]).collect::<Vec<_>>()
                    })
                    .collect(),
                FeedMode::Factors => (0..set.count_m)
                    .map(|i| {
                        let (a, mx, s) = spatial(i);
                        vec![a, mx, s, f64::NAN]
                    })
                    .chain((0..set.count_n).map(|j| vec![f64::NAN, f64::NAN, f64::NAN, p[j]]))
                    .collect(),
            };
            (cols, rows)
        }
        BasisFamily::SineTraveling => (
            vec!["a", "b", "omega", "d"],
            (0..set.count_m).map(|i| p[4 * i..4 * i + 4].to_vec()).collect(),
        ),
        BasisFamily::GaussTraveling => (
            vec!["a", "b", "mu", "nu", "sigma", "tau", "d"],
            (0..set.count_m).map(|i| p[7 * i..7 * i + 7].to_vec()).collect(),
        ),
        BasisFamily::SineSpatial => {
            let cols = vec!["a", "omega", "phi", "b", "alpha", "mu", "sigma"];
            let spatial_base = 3 * set.count_n;
            let rows = (0..set.count_m)
                .map(|i| {
                    let o = spatial_base + 4 * i;
                    vec![p[o], p[o + 1], p[o + 2], p[o + 3], f64::NAN, f64::NAN, f64::NAN]
                })
                .chain((0..set.count_n).map(|j| {
                    let o = 3 * j;
                    vec![
                        f64::NAN,
                        f64::NAN,
                        f64::NAN,
                        f64::NAN,
                        p[o],
                        p[o + 1],
                        p[o + 2],
                    ]
                }))
                .collect();
            (cols, rows)
        }
        BasisFamily::GaussTemporal => (
            vec!["alpha", "mu", "sigma"],
            (0..set.count_m).map(|i| p[3 * i..3 * i + 3].to_vec()).collect(),
        ),
    };
    debug_assert_eq!(rows.len(), layout.output_len());

    let curves = grid
        .iter()
        .map(|&(x, t)| {
            set.eval(Jet2::seed_x(x), Jet2::seed_t(t)).iter().map(|j| j.v).collect()
        })
        .collect();

    BasisExport {
        family: set.family,
        count_m: set.count_m,
        count_n: set.count_n,
        feed: set.feed,
        domain: set.domain,
        params: set.params.clone(),
        columns,
        rows,
        curves,
        grid: grid.to_vec(),
    }
}

impl BasisExport {
    /// Rebuild the basis set this export came from.
    pub fn import(&self) -> BasisSet {
        BasisSet {
            family: self.family,
            count_m: self.count_m,
            count_n: self.count_n,
            feed: self.feed,
            domain: self.domain,
            params: self.params.clone(),
        }
    }
}
