//! Forward/inverse Dunkl transform and the transform engine shared by the
//! translation, Riesz and BMO layers.
//!
//! For the supported kinds the kernel and the weight factorize over axes, so
//! an N-dimensional transform is a sequence of one-dimensional weighted
//! contractions. Each axis contraction carries the Navot kink correction from
//! `grid`, with the center value interpolated from the raw row (the kernel
//! factor is exactly 1 on the hyperplane, so the correction is independent of
//! the output frequency).

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{DunklError, Result};
use crate::grid::{
    even_center_value, hurwitz_half_zeta_neg, integrate_weighted, lp_norm, separable_axis_k,
    tail_mass, Domain, GridFunction, GridSpec,
};
use crate::geometry::WeightContext;
use crate::series::KernelEvaluator;

/// Largest cached per-axis kernel matrix (entries); larger grids evaluate
/// kernel values on the fly.
const CACHE_LIMIT: usize = 9_000_000;

/// Gaussian normalization constant by weighted quadrature, guarded by the
/// integrand's own tail mass.
pub fn c_k_constant(ctx: &WeightContext, grid: &GridSpec) -> Result<f64> {
    let gauss = GridFunction::real_from_fn(*grid, Domain::Space, |x| {
        (-x.iter().map(|c| c * c).sum::<f64>() / 2.0).exp()
    });
    let tail = tail_mass(&gauss, ctx, 0.9);
    if tail > 1e-12 {
        return Err(DunklError::DomainTooSmall(format!(
            "Gaussian tail mass {tail:.3e} beyond 0.9·box exceeds 1e-12"
        )));
    }
    Ok(integrate_weighted(&gauss, ctx)?.re)
}

/// Frequency-domain samples together with the normalization they were
/// produced with.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub function: GridFunction,
    pub c_k: f64,
}

impl Spectrum {
    /// Pointwise multiply by a function of the frequency node.
    pub fn multiplied(&self, m: impl Fn(&[f64]) -> Complex64) -> Spectrum {
        let g = self.function.grid;
        let mut out = self.function.clone();
        for idx in 0..g.node_count() {
            out.samples[idx] *= m(&g.node(idx));
        }
        Spectrum {
            function: out,
            c_k: self.c_k,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct PlancherelReport {
    pub l2_space: f64,
    pub l2_freq: f64,
    pub ratio: f64,
}

enum AxisKernel {
    Cached(Vec<Complex64>),
    OnTheFly,
}

/// Transform engine for one (weight context, space grid, frequency grid)
/// triple; immutable after construction.
pub struct Engine {
    pub ctx: WeightContext,
    pub ev: KernelEvaluator,
    pub space: GridSpec,
    pub freq: GridSpec,
    pub c_k: f64,
    axis_k: Vec<f64>,
    space_nodes: Vec<f64>,
    freq_nodes: Vec<f64>,
    /// |x|^{2k_d} on space/frequency axis nodes.
    space_w: Vec<Vec<f64>>,
    freq_w: Vec<Vec<f64>>,
    space_navot: Vec<f64>,
    freq_navot: Vec<f64>,
    /// E(i x_t ξ_u) cached as [u · n_in + t] when affordable.
    fwd_kernels: Vec<AxisKernel>,
    inv_kernels: Vec<AxisKernel>,
}

impl Engine {
    pub fn new(ctx: WeightContext, space: GridSpec, freq: GridSpec) -> Result<Self> {
        if space.dim != ctx.dimension() || freq.dim != ctx.dimension() {
            return Err(DunklError::InvalidArgument(
                "grid dimension must match the root system".into(),
            ));
        }
        let axis_k = separable_axis_k(&ctx).ok_or_else(|| {
            DunklError::UnsupportedGroup(
                "transforms need the trivial, rank1 or z2_product kernel".into(),
            )
        })?;
        // tables must cover |x·ξ| for grid nodes and off-grid translation
        // points up to the box corner
        let z_max = 1.05 * space.half_width.max(freq.half_width)
            * (space.half_width + freq.half_width);
        let ev = KernelEvaluator::from_context(&ctx, z_max)?;
        let c_k = match ctx.c_k_if_set() {
            Some(v) => v,
            None => {
                let v = c_k_constant(&ctx, &space)?;
                ctx.c_k_cached(|| v)
            }
        };
        let space_nodes = space.axis_nodes();
        let freq_nodes = freq.axis_nodes();
        let space_w: Vec<Vec<f64>> = axis_k
            .iter()
            .map(|&k| space_nodes.iter().map(|&x| x.abs().powf(2.0 * k)).collect())
            .collect();
        let freq_w: Vec<Vec<f64>> = axis_k
            .iter()
            .map(|&k| freq_nodes.iter().map(|&x| x.abs().powf(2.0 * k)).collect())
            .collect();
        let hs = space.spacing();
        let hf = freq.spacing();
        let space_navot: Vec<f64> = axis_k
            .iter()
            .map(|&k| 2.0 * hurwitz_half_zeta_neg(2.0 * k) * hs.powf(2.0 * k + 1.0))
            .collect();
        let freq_navot: Vec<f64> = axis_k
            .iter()
            .map(|&k| 2.0 * hurwitz_half_zeta_neg(2.0 * k) * hf.powf(2.0 * k + 1.0))
            .collect();
        let mut fwd_kernels = Vec::new();
        let mut inv_kernels = Vec::new();
        for d in 0..space.dim {
            let unit = ev.unit(d);
            if space.n * freq.n <= CACHE_LIMIT {
                let mut fwd = Vec::with_capacity(freq.n * space.n);
                for &xi in &freq_nodes {
                    for &x in &space_nodes {
                        fwd.push(unit.eval_imag(x * xi)?);
                    }
                }
                let mut inv = Vec::with_capacity(space.n * freq.n);
                for &x in &space_nodes {
                    for &xi in &freq_nodes {
                        inv.push(unit.eval_imag(x * xi)?);
                    }
                }
                fwd_kernels.push(AxisKernel::Cached(fwd));
                inv_kernels.push(AxisKernel::Cached(inv));
            } else {
                fwd_kernels.push(AxisKernel::OnTheFly);
                inv_kernels.push(AxisKernel::OnTheFly);
            }
        }
        Ok(Self {
            ctx,
            ev,
            space,
            freq,
            c_k,
            axis_k,
            space_nodes,
            freq_nodes,
            space_w,
            freq_w,
            space_navot,
            freq_navot,
            fwd_kernels,
            inv_kernels,
        })
    }

    /// Convenience constructor with frequency grid equal to the space grid.
    pub fn with_default_freq(ctx: WeightContext, space: GridSpec) -> Result<Self> {
        Self::new(ctx, space, space)
    }

    pub fn dim(&self) -> usize {
        self.space.dim
    }

    pub fn space_axis_nodes(&self) -> &[f64] {
        &self.space_nodes
    }

    pub fn freq_axis_nodes(&self) -> &[f64] {
        &self.freq_nodes
    }

    /// One weighted axis contraction with the Navot center correction.
    /// `kernel(u, t)` is the axis kernel between output node u and input
    /// node t; it must equal 1 when the input node sits on the hyperplane.
    fn contract_axis<K>(
        data: &[Complex64],
        shape: &mut Vec<usize>,
        axis: usize,
        out_len: usize,
        weights: &[f64],
        navot: f64,
        h: f64,
        kernel: K,
    ) -> Vec<Complex64>
    where
        K: Fn(usize, usize) -> Complex64 + Sync,
    {
        let in_len = shape[axis];
        let stride: usize = shape[axis + 1..].iter().product();
        let outer: usize = shape[..axis].iter().product();
        let rows = outer * stride;
        // gather rows and their center interpolations once
        let mut gathered: Vec<Complex64> = vec![Complex64::default(); rows * in_len];
        let mut centers: Vec<Complex64> = vec![Complex64::default(); rows];
        for o in 0..outer {
            for i in 0..stride {
                let r = o * stride + i;
                let base = o * in_len * stride + i;
                for t in 0..in_len {
                    gathered[r * in_len + t] = data[base + t * stride];
                }
                let row = &gathered[r * in_len..(r + 1) * in_len];
                centers[r] = even_center_value(row);
            }
        }
        let out_total = rows * out_len;
        let out_flat: Vec<Complex64> = (0..out_total)
            .into_par_iter()
            .map(|of| {
                let r = of / out_len;
                let u = of % out_len;
                let row = &gathered[r * in_len..(r + 1) * in_len];
                let mut acc = Complex64::default();
                for t in 0..in_len {
                    acc += row[t] * weights[t] * kernel(u, t);
                }
                acc * h + centers[r] * navot
            })
            .collect();
        // scatter back to row-major with the new axis length
        let mut out = vec![Complex64::default(); out_total];
        for o in 0..outer {
            for i in 0..stride {
                let r = o * stride + i;
                let base = o * out_len * stride + i;
                for u in 0..out_len {
                    out[base + u * stride] = out_flat[r * out_len + u];
                }
            }
        }
        shape[axis] = out_len;
        out
    }

    /// `Ff(ξ) = (1/c_k) ∫ f(x) E(-iξ, x) dm_k(x)`.
    pub fn forward(&self, f: &GridFunction) -> Result<Spectrum> {
        if f.domain != Domain::Space {
            return Err(DunklError::DomainTag {
                expected: "space".into(),
                got: f.domain.name().into(),
            });
        }
        if f.grid != self.space {
            return Err(DunklError::InvalidArgument(
                "function grid differs from the engine space grid".into(),
            ));
        }
        let mut shape = vec![self.space.n; self.dim()];
        let mut data = f.samples.clone();
        let h = self.space.spacing();
        for d in 0..self.dim() {
            let unit = self.ev.unit(d);
            let (sn, fnm) = (&self.space_nodes, &self.freq_nodes);
            data = match &self.fwd_kernels[d] {
                AxisKernel::Cached(m) => Self::contract_axis(
                    &data,
                    &mut shape,
                    d,
                    self.freq.n,
                    &self.space_w[d],
                    self.space_navot[d],
                    h,
                    |u, t| m[u * self.space.n + t].conj(),
                ),
                AxisKernel::OnTheFly => Self::contract_axis(
                    &data,
                    &mut shape,
                    d,
                    self.freq.n,
                    &self.space_w[d],
                    self.space_navot[d],
                    h,
                    |u, t| unit.eval_imag(sn[t] * fnm[u]).expect("table range").conj(),
                ),
            };
        }
        let scale = 1.0 / self.c_k;
        for v in &mut data {
            *v *= scale;
        }
        Ok(Spectrum {
            function: GridFunction {
                grid: self.freq,
                domain: Domain::Frequency,
                samples: data,
            },
            c_k: self.c_k,
        })
    }

    /// `F⁻¹g(x) = (1/c_k) ∫ g(ξ) E(ix, ξ) dm_k(ξ)`, i.e. the forward
    /// transform composed with argument negation.
    pub fn inverse(&self, s: &Spectrum) -> Result<GridFunction> {
        if (s.c_k - self.c_k).abs() > 1e-12 * self.c_k {
            return Err(DunklError::SpectrumMismatch {
                produced: s.c_k,
                consumed: self.c_k,
            });
        }
        if s.function.grid != self.freq {
            return Err(DunklError::InvalidArgument(
                "spectrum grid differs from the engine frequency grid".into(),
            ));
        }
        let mut shape = vec![self.freq.n; self.dim()];
        let mut data = s.function.samples.clone();
        let h = self.freq.spacing();
        for d in 0..self.dim() {
            let unit = self.ev.unit(d);
            let (sn, fnm) = (&self.space_nodes, &self.freq_nodes);
            data = match &self.inv_kernels[d] {
                AxisKernel::Cached(m) => Self::contract_axis(
                    &data,
                    &mut shape,
                    d,
                    self.space.n,
                    &self.freq_w[d],
                    self.freq_navot[d],
                    h,
                    |u, t| m[u * self.freq.n + t],
                ),
                AxisKernel::OnTheFly => Self::contract_axis(
                    &data,
                    &mut shape,
                    d,
                    self.space.n,
                    &self.freq_w[d],
                    self.freq_navot[d],
                    h,
                    |u, t| unit.eval_imag(sn[u] * fnm[t]).expect("table range"),
                ),
            };
        }
        let scale = 1.0 / self.c_k;
        for v in &mut data {
            *v *= scale;
        }
        Ok(GridFunction {
            grid: self.space,
            domain: Domain::Space,
            samples: data,
        })
    }

    /// Evaluate `F⁻¹(s · extra per-axis factors)` at one off-grid point `y`,
    /// where the per-axis factor must be 1 on the hyperplane (a product of
    /// unit kernels is). Used for translations at arbitrary base points.
    pub fn inverse_at(&self, s: &Spectrum, point_kernels: &[Vec<Complex64>]) -> Result<Complex64> {
        let mut shape = vec![self.freq.n; self.dim()];
        let mut data = s.function.samples.clone();
        let h = self.freq.spacing();
        for d in 0..self.dim() {
            let col = &point_kernels[d];
            data = Self::contract_axis(
                &data,
                &mut shape,
                d,
                1,
                &self.freq_w[d],
                self.freq_navot[d],
                h,
                |_, t| col[t],
            );
        }
        Ok(data[0] / self.c_k)
    }

    /// ‖f‖₂ against ‖Ff‖₂; the ratio tends to 1 under refinement for
    /// Schwartz-class samples.
    pub fn plancherel_check(&self, f: &GridFunction) -> Result<PlancherelReport> {
        let s = self.forward(f)?;
        let l2_space = lp_norm(f, &self.ctx, 2.0)?;
        let l2_freq = lp_norm(&s.function, &self.ctx, 2.0)?;
        let ratio = if l2_space > 0.0 {
            l2_freq / l2_space
        } else {
            if l2_freq > 0.0 {
                f64::INFINITY
            } else {
                1.0
            }
        };
        Ok(PlancherelReport {
            l2_space,
            l2_freq,
            ratio,
        })
    }

    /// Relative L² distance between two space-domain functions.
    pub fn rel_l2_distance(&self, a: &GridFunction, b: &GridFunction) -> Result<f64> {
        let diff = a.zip(b, |x, y| x - y);
        let denom = lp_norm(b, &self.ctx, 2.0)?;
        if denom == 0.0 {
            return Ok(lp_norm(&diff, &self.ctx, 2.0)?);
        }
        Ok(lp_norm(&diff, &self.ctx, 2.0)? / denom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::RootSystemSpec;
    use approx::assert_abs_diff_eq;

    fn engine(k: f64, n: usize, l: f64) -> Engine {
        let ctx = WeightContext::new(RootSystemSpec::preset("rank1", &[k]).unwrap()).unwrap();
        let g = GridSpec::new(1, n, l).unwrap();
        Engine::with_default_freq(ctx, g).unwrap()
    }

    fn gaussian(g: GridSpec) -> GridFunction {
        GridFunction::real_from_fn(g, Domain::Space, |x| {
            (-x.iter().map(|c| c * c).sum::<f64>() / 2.0).exp()
        })
    }

    #[test]
    fn c_k_matches_analytic_values() {
        // k=0: √(2π); k=1: √(2π); k=1/2: 2
        for (k, expect) in [
            (0.0, (2.0 * std::f64::consts::PI).sqrt()),
            (1.0, (2.0 * std::f64::consts::PI).sqrt()),
            (0.5, 2.0),
        ] {
            let ctx = WeightContext::new(RootSystemSpec::preset("rank1", &[k]).unwrap()).unwrap();
            let g = GridSpec::new(1, 2048, 20.0).unwrap();
            let c = c_k_constant(&ctx, &g).unwrap();
            assert_abs_diff_eq!(c, expect, epsilon = 1e-9);
        }
    }

    #[test]
    fn c_k_rejects_small_domains() {
        let ctx = WeightContext::new(RootSystemSpec::preset("rank1", &[1.0]).unwrap()).unwrap();
        let g = GridSpec::new(1, 128, 3.0).unwrap();
        assert!(matches!(
            c_k_constant(&ctx, &g),
            Err(DunklError::DomainTooSmall(_))
        ));
    }

    #[test]
    fn c_k_refinement_stability() {
        let ctx = WeightContext::new(RootSystemSpec::preset("rank1", &[0.5]).unwrap()).unwrap();
        let c1 = c_k_constant(&ctx, &GridSpec::new(1, 2048, 20.0).unwrap()).unwrap();
        let c2 = c_k_constant(&ctx, &GridSpec::new(1, 4096, 20.0).unwrap()).unwrap();
        assert!(
            (c1 - c2).abs() / c1 < 1e-8,
            "c_k moved by {:.3e} under refinement",
            (c1 - c2).abs() / c1
        );
    }

    #[test]
    fn gaussian_is_fixed_by_the_transform() {
        for k in [0.0, 0.5, 1.0, 2.0] {
            let e = engine(k, 2048, 20.0);
            let f = gaussian(e.space);
            let s = e.forward(&f).unwrap();
            let err = s
                .function
                .samples
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    let xi = e.freq.node(i)[0];
                    (v - Complex64::new((-xi * xi / 2.0).exp(), 0.0)).norm()
                })
                .fold(0.0, f64::max);
            assert!(err < 1e-8, "k={k}: fixed-point sup error {err:.3e}");
        }
    }

    #[test]
    fn forward_is_linear() {
        let e = engine(1.0, 256, 10.0);
        let f = gaussian(e.space);
        let g = GridFunction::real_from_fn(e.space, Domain::Space, |x| {
            x[0] * (-x[0] * x[0] / 2.0).exp()
        });
        let combo = f.zip(&g, |a, b| a * 2.0 + b * Complex64::new(0.0, 3.0));
        let s_combo = e.forward(&combo).unwrap();
        let sf = e.forward(&f).unwrap();
        let sg = e.forward(&g).unwrap();
        for i in 0..s_combo.function.samples.len() {
            let expect = sf.function.samples[i] * 2.0
                + sg.function.samples[i] * Complex64::new(0.0, 3.0);
            assert!((s_combo.function.samples[i] - expect).norm() < 1e-12);
        }
    }

    #[test]
    fn parity_is_preserved() {
        let e = engine(1.0, 512, 12.0);
        let even = gaussian(e.space);
        let s = e.forward(&even).unwrap();
        for v in &s.function.samples {
            assert!(v.im.abs() < 1e-12, "real even input must map to real spectrum");
        }
        let odd = GridFunction::real_from_fn(e.space, Domain::Space, |x| {
            x[0] * (-x[0] * x[0] / 2.0).exp()
        });
        let s = e.forward(&odd).unwrap();
        for v in &s.function.samples {
            assert!(v.re.abs() < 1e-12, "real odd input must map to imaginary spectrum");
        }
    }

    #[test]
    fn round_trip_on_schwartz_samples() {
        for k in [0.0, 0.5, 1.0, 2.0] {
            let e = engine(k, 2048, 20.0);
            let f = gaussian(e.space);
            let back = e.inverse(&e.forward(&f).unwrap()).unwrap();
            let err = e.rel_l2_distance(&back, &f).unwrap();
            assert!(err < 1e-6, "k={k}: round trip {err:.3e}");

            let fp = GridFunction::real_from_fn(e.space, Domain::Space, |x| {
                (1.0 + x[0] * x[0]) * (-x[0] * x[0] / 2.0).exp()
            });
            let back = e.inverse(&e.forward(&fp).unwrap()).unwrap();
            let err = e.rel_l2_distance(&back, &fp).unwrap();
            assert!(err < 1e-5, "k={k}: polynomial round trip {err:.3e}");
        }
    }

    #[test]
    fn plancherel_ratio_examples() {
        let e = engine(1.0, 2048, 20.0);
        let f = gaussian(e.space);
        let rep = e.plancherel_check(&f).unwrap();
        assert!((rep.ratio - 1.0).abs() < 1e-6, "ratio {}", rep.ratio);

        let zero = GridFunction::zeros(e.space, Domain::Space);
        let rep = e.plancherel_check(&zero).unwrap();
        assert_eq!(rep.l2_space, 0.0);
        assert_eq!(rep.l2_freq, 0.0);
        assert_eq!(rep.ratio, 1.0);
    }

    #[test]
    fn classical_reduction_matches_independent_fourier_quadrature() {
        // k = 0: compare against a direct cos/sin quadrature of the unitary
        // Fourier transform, sharing no kernel code.
        let e = engine(0.0, 1024, 16.0);
        let f = gaussian(e.space);
        let s = e.forward(&f).unwrap();
        let h = e.space.spacing();
        let c0 = (2.0 * std::f64::consts::PI).sqrt();
        let mut worst = 0.0f64;
        for (q, &xi) in e.freq_axis_nodes().iter().enumerate().step_by(37) {
            let mut acc = Complex64::default();
            for (m, &x) in e.space_axis_nodes().iter().enumerate() {
                let phase = -xi * x;
                acc += f.samples[m] * Complex64::new(phase.cos(), phase.sin());
            }
            acc *= h / c0;
            worst = worst.max((acc - s.function.samples[q]).norm());
        }
        assert!(worst < 1e-12, "classical reduction error {worst:.3e}");
    }

    #[test]
    fn transform_works_for_z2_product() {
        let ctx =
            WeightContext::new(RootSystemSpec::preset("z2_product", &[0.5, 1.0]).unwrap()).unwrap();
        let g = GridSpec::new(2, 128, 9.0).unwrap();
        let e = Engine::with_default_freq(ctx, g).unwrap();
        let f = gaussian(g);
        let s = e.forward(&f).unwrap();
        let err = s
            .function
            .samples
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let xi = e.freq.node(i);
                let expect = (-(xi[0] * xi[0] + xi[1] * xi[1]) / 2.0).exp();
                (v - Complex64::new(expect, 0.0)).norm()
            })
            .fold(0.0, f64::max);
        assert!(err < 1e-6, "2-D Gaussian fixed point error {err:.3e}");
        let back = e.inverse(&s).unwrap();
        assert!(e.rel_l2_distance(&back, &f).unwrap() < 1e-6);
    }

    #[test]
    fn spectrum_mismatch_is_rejected() {
        let e = engine(1.0, 256, 10.0);
        let f = gaussian(e.space);
        let mut s = e.forward(&f).unwrap();
        s.c_k *= 1.5;
        assert!(matches!(
            e.inverse(&s),
            Err(DunklError::SpectrumMismatch { .. })
        ));
    }
}
