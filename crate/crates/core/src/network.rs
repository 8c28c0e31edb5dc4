//! The network map `(ξ, η) ↦ (x, y)`.
//!
//! Inputs are augmented with `tan` and `cot` of a shifted copy of each
//! coordinate. Each hidden layer computes
//! `u' = sigmoid(V u + c) ⊙ act(W u + b)`, a per-neuron attention gate on
//! the activation. The output layer is a sigmoid rescaled to a bounding box.
//!
//! Parameters live in one flat vector. Per hidden layer, in order: `W`
//! (row-major, `width × fan_in`), `b`, `V`, `c`; then the output `W`
//! (`2 × width`) and `b`.

use std::path::Path;

use rand::distr::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::autodiff::{HyperDual, Scalar};
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::pde::SecondOrderJet;

/// Augmented input width.
pub const INPUT_DIM: usize = 6;
/// Initial gate bias, so gates start mostly open.
pub const GATE_BIAS_INIT: f64 = 2.0;
const LEAKY_SLOPE: f64 = 0.01;
const SELU_ALPHA: f64 = 1.673_263_242_354_377_3;
const SELU_SCALE: f64 = 1.050_700_987_355_480_5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    Tanh,
    Sigmoid,
    Relu,
    #[serde(rename = "leakyrelu")]
    LeakyRelu,
    Elu,
    Selu,
}

impl Activation {
    /// In ablation table order.
    pub const ALL: [Activation; 6] = [
        Activation::Sigmoid,
        Activation::Relu,
        Activation::LeakyRelu,
        Activation::Tanh,
        Activation::Elu,
        Activation::Selu,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Activation::Tanh => "tanh",
            Activation::Sigmoid => "sigmoid",
            Activation::Relu => "relu",
            Activation::LeakyRelu => "leakyrelu",
            Activation::Elu => "elu",
            Activation::Selu => "selu",
        }
    }

    fn apply<S: Scalar>(self, z: HyperDual<S>) -> HyperDual<S> {
        match self {
            Activation::Tanh => z.tanh(),
            Activation::Sigmoid => z.sigmoid(),
            Activation::Relu => z.relu(),
            Activation::LeakyRelu => z.leaky_relu(LEAKY_SLOPE),
            Activation::Elu => z.elu(1.0),
            Activation::Selu => z.elu(SELU_ALPHA).scale(SELU_SCALE),
        }
    }

    fn apply_real<S: Scalar>(self, z: S) -> S {
        let v = z.value();
        match self {
            Activation::Tanh => z.tanh(),
            Activation::Sigmoid => z.sigmoid(),
            Activation::Relu if v > 0.0 => z,
            Activation::Relu => z.constant_like(0.0),
            Activation::LeakyRelu if v > 0.0 => z,
            Activation::LeakyRelu => z * LEAKY_SLOPE,
            Activation::Elu if v > 0.0 => z,
            Activation::Elu => z.exp() - 1.0,
            Activation::Selu if v > 0.0 => z * SELU_SCALE,
            Activation::Selu => (z.exp() - 1.0) * (SELU_ALPHA * SELU_SCALE),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Architecture {
    pub depth: usize,
    pub width: usize,
    pub activation: Activation,
}

/// Offsets of one hidden layer's tensors in the flat parameter vector.
#[derive(Debug, Clone, Copy)]
struct HiddenLayout {
    fan_in: usize,
    w: usize,
    b: usize,
    v: usize,
    c: usize,
}

impl Architecture {
    pub fn new(depth: usize, width: usize, activation: Activation) -> Result<Self> {
        if depth == 0 || width == 0 {
            return Err(Error::invalid(format!(
                "network needs depth >= 1 and width >= 1, got {depth}x{width}"
            )));
        }
        Ok(Architecture {
            depth,
            width,
            activation,
        })
    }

    fn hidden(&self, layer: usize) -> HiddenLayout {
        let w = self.width;
        let first = 2 * w * INPUT_DIM + 2 * w;
        let rest = 2 * w * w + 2 * w;
        let (start, fan_in) = if layer == 0 {
            (0, INPUT_DIM)
        } else {
            (first + (layer - 1) * rest, w)
        };
        HiddenLayout {
            fan_in,
            w: start,
            b: start + w * fan_in,
            v: start + w * fan_in + w,
            c: start + 2 * w * fan_in + w,
        }
    }

    fn output_offset(&self) -> usize {
        let h = self.hidden(self.depth - 1);
        h.c + self.width
    }

    pub fn num_params(&self) -> usize {
        self.output_offset() + 2 * self.width + 2
    }

    /// `(name, shape, offset)` of every tensor, in storage order.
    pub fn tensors(&self) -> Vec<(String, Vec<usize>, usize)> {
        let w = self.width;
        let mut out = Vec::with_capacity(4 * self.depth + 2);
        for l in 0..self.depth {
            let h = self.hidden(l);
            out.push((format!("hidden{l}.W"), vec![w, h.fan_in], h.w));
            out.push((format!("hidden{l}.b"), vec![w], h.b));
            out.push((format!("hidden{l}.V"), vec![w, h.fan_in], h.v));
            out.push((format!("hidden{l}.c"), vec![w], h.c));
        }
        let o = self.output_offset();
        out.push(("output.W".into(), vec![2, w], o));
        out.push(("output.b".into(), vec![2], o + 2 * w));
        out
    }
}

/// Axis-aligned box the sigmoid output is rescaled to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BBox {
    pub min: Point,
    pub max: Point,
}

impl BBox {
    pub fn new(min: Point, max: Point) -> Result<Self> {
        if !(min.is_finite() && max.is_finite() && max.x > min.x && max.y > min.y) {
            return Err(Error::DegenerateGeometry(format!(
                "bounding box {min} .. {max} has no area"
            )));
        }
        Ok(BBox { min, max })
    }

    pub fn unit() -> Self {
        BBox {
            min: Point::new(0.0, 0.0),
            max: Point::new(1.0, 1.0),
        }
    }

    pub fn center(&self) -> Point {
        self.min.lerp(self.max, 0.5)
    }

    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    /// Grows each side by `frac` of the extent along that axis.
    pub fn padded(&self, frac: f64) -> Self {
        let (dx, dy) = (self.max.x - self.min.x, self.max.y - self.min.y);
        BBox {
            min: Point::new(self.min.x - frac * dx, self.min.y - frac * dy),
            max: Point::new(self.max.x + frac * dx, self.max.y + frac * dy),
        }
    }
}

/// Parameters of the network together with its shape and output box.
#[derive(Debug, Clone, PartialEq)]
pub struct PinnModel {
    pub arch: Architecture,
    pub params: Vec<f64>,
    pub bbox: BBox,
}

/// Safety shift keeping `tan`/`cot` arguments inside `[0.1, 0.9]`.
pub fn shift(z: f64) -> f64 {
    0.8 * z + 0.1
}

fn check_unit(xi: f64, eta: f64) -> Result<()> {
    if !((0.0..=1.0).contains(&xi) && (0.0..=1.0).contains(&eta)) {
        return Err(Error::invalid(format!(
            "computational coordinates ({xi}, {eta}) outside [0, 1]²"
        )));
    }
    Ok(())
}

/// `[ξ, η, tan s(ξ), tan s(η), cot s(ξ), cot s(η)]` with `s(z) = 0.8z + 0.1`.
pub fn augment(xi: f64, eta: f64) -> Result<[f64; INPUT_DIM]> {
    check_unit(xi, eta)?;
    let (a, b) = (shift(xi), shift(eta));
    Ok([xi, eta, a.tan(), b.tan(), 1.0 / a.tan(), 1.0 / b.tan()])
}

/// Hyper-dual augmentation of seeded inputs.
pub fn augment_hd(xi: HyperDual<f64>, eta: HyperDual<f64>) -> Result<[HyperDual<f64>; INPUT_DIM]> {
    check_unit(xi.re, eta.re)?;
    let (a, b) = (xi.scale(0.8).shift(0.1), eta.scale(0.8).shift(0.1));
    Ok([xi, eta, a.tan()?, b.tan()?, a.cot()?, b.cot()?])
}

/// Seeds `(a, b)` for the three jet passes over `(ξ, η)`.
pub const JET_SEEDS: [((f64, f64), (f64, f64)); 3] = [
    ((1.0, 0.0), (1.0, 0.0)),
    ((0.0, 1.0), (0.0, 1.0)),
    ((1.0, 0.0), (0.0, 1.0)),
];

/// The three seeded augmented inputs used by [`PinnModel::evaluate_jet`].
pub fn jet_inputs(xi: f64, eta: f64) -> Result<[[HyperDual<f64>; INPUT_DIM]; 3]> {
    let pass = |k: usize| {
        let ((a0, a1), (b0, b1)) = JET_SEEDS[k];
        augment_hd(HyperDual::seeded(xi, a0, b0), HyperDual::seeded(eta, a1, b1))
    };
    Ok([pass(0)?, pass(1)?, pass(2)?])
}

fn check_finite<S: Scalar>(layer: usize, vals: &[S]) -> Result<()> {
    if vals.iter().all(|v| v.value().is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFiniteLayer { layer })
    }
}

/// Hyper-dual forward pass over arbitrary scalars. `params` must follow the
/// layout of `arch`; `input` is an augmented input already lifted into the
/// scalar context. Returns physical `[x, y]`.
pub fn forward_hd<S: Scalar>(
    arch: &Architecture,
    params: &[S],
    bbox: &BBox,
    input: [HyperDual<S>; INPUT_DIM],
) -> Result<[HyperDual<S>; 2]> {
    debug_assert_eq!(params.len(), arch.num_params());
    let width = arch.width;
    // components stored separately so each affine map is four dot products
    let mut comps: [Vec<S>; 4] = [
        input.iter().map(|h| h.re).collect(),
        input.iter().map(|h| h.d1).collect(),
        input.iter().map(|h| h.d2).collect(),
        input.iter().map(|h| h.d12).collect(),
    ];
    let affine = |comps: &[Vec<S>; 4], w: &[S], b: S| -> HyperDual<S> {
        HyperDual::new(
            S::dot(w, &comps[0]) + b,
            S::dot(w, &comps[1]),
            S::dot(w, &comps[2]),
            S::dot(w, &comps[3]),
        )
    };
    for l in 0..arch.depth {
        let h = arch.hidden(l);
        let mut next: [Vec<S>; 4] = std::array::from_fn(|_| Vec::with_capacity(width));
        for n in 0..width {
            let w = &params[h.w + n * h.fan_in..h.w + (n + 1) * h.fan_in];
            let v = &params[h.v + n * h.fan_in..h.v + (n + 1) * h.fan_in];
            let z = affine(&comps, w, params[h.b + n]);
            let g = affine(&comps, v, params[h.c + n]).sigmoid();
            let u = g * arch.activation.apply(z);
            next[0].push(u.re);
            next[1].push(u.d1);
            next[2].push(u.d2);
            next[3].push(u.d12);
        }
        for c in &next {
            check_finite(l, c)?;
        }
        comps = next;
    }
    let o = arch.output_offset();
    let out: [HyperDual<S>; 2] = std::array::from_fn(|k| {
        let w = &params[o + k * width..o + (k + 1) * width];
        affine(&comps, w, params[o + 2 * width + k]).sigmoid()
    });
    let span = [bbox.max.x - bbox.min.x, bbox.max.y - bbox.min.y];
    let lo = [bbox.min.x, bbox.min.y];
    let phys = [0, 1].map(|k| out[k].scale(span[k]).shift(lo[k]));
    for p in &phys {
        check_finite(arch.depth, &[p.re, p.d1, p.d2, p.d12])?;
    }
    Ok(phys)
}

/// Value-only forward pass over arbitrary scalars.
pub fn forward_real<S: Scalar>(
    arch: &Architecture,
    params: &[S],
    bbox: &BBox,
    input: [S; INPUT_DIM],
) -> Result<[S; 2]> {
    let width = arch.width;
    let mut u: Vec<S> = input.to_vec();
    for l in 0..arch.depth {
        let h = arch.hidden(l);
        let mut next = Vec::with_capacity(width);
        for n in 0..width {
            let w = &params[h.w + n * h.fan_in..h.w + (n + 1) * h.fan_in];
            let v = &params[h.v + n * h.fan_in..h.v + (n + 1) * h.fan_in];
            let z = S::dot(w, &u) + params[h.b + n];
            let g = (S::dot(v, &u) + params[h.c + n]).sigmoid();
            next.push(g * arch.activation.apply_real(z));
        }
        check_finite(l, &next)?;
        u = next;
    }
    let o = arch.output_offset();
    let span = [bbox.max.x - bbox.min.x, bbox.max.y - bbox.min.y];
    let lo = [bbox.min.x, bbox.min.y];
    let out: [S; 2] = std::array::from_fn(|k| {
        let w = &params[o + k * width..o + (k + 1) * width];
        (S::dot(w, &u) + params[o + 2 * width + k]).sigmoid() * span[k] + lo[k]
    });
    check_finite(arch.depth, &out)?;
    Ok(out)
}

/// Glorot-uniform bound for a `fan_in → fan_out` weight matrix.
pub fn glorot_bound(fan_in: usize, fan_out: usize) -> f64 {
    (6.0 / (fan_in + fan_out) as f64).sqrt()
}

/// Glorot-uniform `W` and `V`, zero biases, gate biases at
/// [`GATE_BIAS_INIT`]. Deterministic in `seed`.
pub fn init_model(arch: Architecture, bbox: BBox, seed: u64) -> PinnModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut params = vec![0.0; arch.num_params()];
    let mut fill = |dst: &mut [f64], fan_in: usize, fan_out: usize| {
        let r = glorot_bound(fan_in, fan_out);
        let dist = Uniform::new_inclusive(-r, r).expect("finite bound");
        for v in dst {
            *v = dist.sample(&mut rng);
        }
    };
    let w = arch.width;
    for l in 0..arch.depth {
        let h = arch.hidden(l);
        fill(&mut params[h.w..h.b], h.fan_in, w);
        fill(&mut params[h.v..h.c], h.fan_in, w);
        params[h.c..h.c + w].fill(GATE_BIAS_INIT);
    }
    let o = arch.output_offset();
    fill(&mut params[o..o + 2 * w], w, 2);
    PinnModel { arch, params, bbox }
}

/// Anything that can report positions and second-order jets of a map from
/// the computational square.
pub trait Mapping: Sync {
    fn position(&self, xi: f64, eta: f64) -> Result<Point>;
    fn jet(&self, xi: f64, eta: f64) -> Result<SecondOrderJet>;
}

/// A map given in closed form over hyper-dual numbers; its jet uses the same
/// three seeded passes as the network.
pub struct AnalyticMap<F>(pub F);

impl<F> Mapping for AnalyticMap<F>
where
    F: Fn(HyperDual<f64>, HyperDual<f64>) -> [HyperDual<f64>; 2] + Sync,
{
    fn position(&self, xi: f64, eta: f64) -> Result<Point> {
        let [x, y] = (self.0)(HyperDual::real(xi), HyperDual::real(eta));
        Ok(Point::new(x.re, y.re))
    }

    fn jet(&self, xi: f64, eta: f64) -> Result<SecondOrderJet> {
        let pass = |k: usize| {
            let ((a0, a1), (b0, b1)) = JET_SEEDS[k];
            (self.0)(HyperDual::seeded(xi, a0, b0), HyperDual::seeded(eta, a1, b1))
        };
        SecondOrderJet::from_passes(pass(0), pass(1), pass(2))
    }
}

/// The identity map `x = ξ, y = η`.
pub fn identity_map() -> AnalyticMap<fn(HyperDual<f64>, HyperDual<f64>) -> [HyperDual<f64>; 2]> {
    fn id(xi: HyperDual<f64>, eta: HyperDual<f64>) -> [HyperDual<f64>; 2] {
        [xi, eta]
    }
    AnalyticMap(id)
}

impl PinnModel {
    pub fn forward(&self, xi: f64, eta: f64) -> Result<Point> {
        let [x, y] = forward_real(&self.arch, &self.params, &self.bbox, augment(xi, eta)?)?;
        Ok(Point::new(x, y))
    }

    /// Three hyper-dual passes seeded `(ξ,ξ)`, `(η,η)`, `(ξ,η)`.
    pub fn evaluate_jet(&self, xi: f64, eta: f64) -> Result<SecondOrderJet> {
        let inputs = jet_inputs(xi, eta)?;
        let [a, b, c] =
            inputs.map(|input| forward_hd(&self.arch, &self.params, &self.bbox, input));
        SecondOrderJet::from_passes(a?, b?, c?)
    }

    pub fn num_params(&self) -> usize {
        self.params.len()
    }

    /// Writes a JSON checkpoint listing every tensor with its shape.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let text = serde_json::to_string_pretty(&Checkpoint::from_model(self))
            .map_err(|e| Error::invalid(format!("serializing checkpoint: {e}")))?;
        std::fs::write(path, text).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let ck: Checkpoint = serde_json::from_str(&text).map_err(|e| Error::Parse {
            line: e.line(),
            detail: e.to_string(),
        })?;
        ck.into_model()
    }
}

impl Mapping for PinnModel {
    fn position(&self, xi: f64, eta: f64) -> Result<Point> {
        self.forward(xi, eta)
    }

    fn jet(&self, xi: f64, eta: f64) -> Result<SecondOrderJet> {
        self.evaluate_jet(xi, eta)
    }
}

const CHECKPOINT_FORMAT: &str = "elastimesh-model";
const CHECKPOINT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Tensor {
    name: String,
    shape: Vec<usize>,
    data: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct Checkpoint {
    format: String,
    version: u32,
    depth: usize,
    width: usize,
    activation: Activation,
    output_activation: String,
    bbox: BBox,
    tensors: Vec<Tensor>,
}

impl Checkpoint {
    fn from_model(m: &PinnModel) -> Self {
        let tensors = m
            .arch
            .tensors()
            .into_iter()
            .map(|(name, shape, off)| {
                let n: usize = shape.iter().product();
                Tensor {
                    name,
                    shape,
                    data: m.params[off..off + n].to_vec(),
                }
            })
            .collect();
        Checkpoint {
            format: CHECKPOINT_FORMAT.into(),
            version: CHECKPOINT_VERSION,
            depth: m.arch.depth,
            width: m.arch.width,
            activation: m.arch.activation,
            output_activation: "sigmoid".into(),
            bbox: m.bbox,
            tensors,
        }
    }

    fn into_model(self) -> Result<PinnModel> {
        let bad = |detail: String| Error::Parse { line: 0, detail };
        if self.format != CHECKPOINT_FORMAT || self.version != CHECKPOINT_VERSION {
            return Err(bad(format!(
                "unsupported checkpoint {} v{}",
                self.format, self.version
            )));
        }
        let arch = Architecture::new(self.depth, self.width, self.activation)?;
        let bbox = BBox::new(self.bbox.min, self.bbox.max)?;
        let expected = arch.tensors();
        if expected.len() != self.tensors.len() {
            return Err(bad(format!(
                "expected {} tensors, found {}",
                expected.len(),
                self.tensors.len()
            )));
        }
        let mut params = vec![0.0; arch.num_params()];
        for ((name, shape, off), t) in expected.into_iter().zip(self.tensors) {
            let n: usize = shape.iter().product();
            if t.name != name || t.shape != shape || t.data.len() != n {
                return Err(bad(format!(
                    "tensor {} {:?} does not match expected {name} {shape:?}",
                    t.name, t.shape
                )));
            }
            params[off..off + n].copy_from_slice(&t.data);
        }
        Ok(PinnModel { arch, params, bbox })
    }
}
