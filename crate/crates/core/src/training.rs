//! Collocation, the composite loss, boundary weights, optimizers and the
//! training loop.
//!
//! The loss is evaluated in a normalized frame: physical coordinates are
//! shifted by the domain's bounding-box minimum and divided by its larger
//! side, so targets lie in `[0, 1]²` whatever the domain's units. Every
//! governing residual is equivariant under this map.

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::autodiff::{HyperDual, Scalar, Tape, Var};
use crate::error::{Error, Result};
use crate::geometry::{check_corner_compatibility, DomainSpec, Point, Side};
use crate::mesh::{uniform_comp_grid, CompGrid, Provenance, StructuredMesh};
use crate::network::{
    augment, forward_hd, forward_real, init_model, jet_inputs, Activation, Architecture, BBox,
    Mapping, PinnModel, INPUT_DIM,
};
use crate::pde::{Governing, LameConstants, LaplaceForm, Residual, SecondOrderJet};

/// Number of boundary curves, and the factor that makes uniform softmax
/// weights average to one.
pub const NUM_CURVES: usize = 4;
/// Epochs between learning-rate decays.
pub const DECAY_INTERVAL: usize = 1000;
/// Corner tolerance required before training.
pub const TRAIN_CORNER_TOL: f64 = 1e-6;
/// Fraction of the domain extent added around it for the output box.
pub const BBOX_PADDING: f64 = 0.1;
/// Collocation points per tape.
const CHUNK: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Optimizer {
    Adam,
    Sgd,
}

/// How the boundary-weight logits move each step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightUpdate {
    /// Climb the loss, so curves that are fitted worst gain weight.
    #[default]
    Ascent,
    /// Descend with the network. The weights then drift onto the curves
    /// that are already fitted best.
    Descent,
    Frozen,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    pub epochs: usize,
    pub lr0: f64,
    /// Multiplier applied every [`DECAY_INTERVAL`] epochs.
    pub decay: f64,
    pub optimizer: Optimizer,
    pub beta1: f64,
    pub beta2: f64,
    pub adam_eps: f64,
    pub lame: LameConstants,
    pub governing: Governing,
    pub laplace_form: LaplaceForm,
    pub ni: usize,
    pub nj: usize,
    pub interior_weight: f64,
    pub weight_update: WeightUpdate,
    pub seed: u64,
    pub depth: usize,
    pub width: usize,
    pub activation: Activation,
    /// Reference cell area for the hyperbolic system, in the normalized
    /// frame. Defaults to the normalized domain area.
    pub hyperbolic_area: Option<f64>,
}

impl TrainConfig {
    /// 8 × 50 network, 15000 epochs from 1e-5.
    pub fn paper() -> Self {
        TrainConfig {
            epochs: 15000,
            lr0: 1e-5,
            decay: 0.99,
            optimizer: Optimizer::Adam,
            beta1: 0.9,
            beta2: 0.999,
            adam_eps: 1e-8,
            lame: LameConstants::default(),
            governing: Governing::NavierLame,
            laplace_form: LaplaceForm::Winslow,
            ni: 21,
            nj: 21,
            interior_weight: 1.0,
            weight_update: WeightUpdate::Ascent,
            seed: 0,
            depth: 8,
            width: 50,
            activation: Activation::Tanh,
            hyperbolic_area: None,
        }
    }

    /// 2 × 16 network, 2000 epochs from 1e-3. The second-moment decay is
    /// shortened to 0.99: the tan/cot inputs start the equation term orders
    /// of magnitude above its later scale, and a 1000-epoch memory keeps
    /// the step size throttled for most of a 2000-epoch run.
    pub fn desk() -> Self {
        TrainConfig {
            epochs: 2000,
            lr0: 1e-3,
            beta2: 0.99,
            depth: 2,
            width: 16,
            ..Self::paper()
        }
    }

    pub fn architecture(&self) -> Result<Architecture> {
        Architecture::new(self.depth, self.width, self.activation)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::invalid(m));
        if self.epochs < 1 {
            return bad("epochs must be at least 1".into());
        }
        if !(self.lr0 > 0.0 && self.lr0.is_finite()) {
            return bad(format!("lr0 must be positive, got {}", self.lr0));
        }
        if !(self.decay > 0.0 && self.decay <= 1.0) {
            return bad(format!("decay must lie in (0, 1], got {}", self.decay));
        }
        if !(0.0..1.0).contains(&self.beta1) || !(0.0..1.0).contains(&self.beta2) {
            return bad("adam betas must lie in [0, 1)".into());
        }
        if !(self.adam_eps > 0.0) {
            return bad("adam_eps must be positive".into());
        }
        if !(self.interior_weight >= 0.0 && self.interior_weight.is_finite()) {
            return bad("interior_weight must be non-negative".into());
        }
        if let Some(s) = self.hyperbolic_area {
            if !s.is_finite() {
                return bad("hyperbolic_area must be finite".into());
            }
        }
        LameConstants::new(self.lame.lambda, self.lame.mu)?;
        uniform_comp_grid(self.ni, self.nj)?;
        self.architecture()?;
        Ok(())
    }
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self::paper()
    }
}

/// `lr0 · decay^⌊e / 1000⌋`.
pub fn lr_at_epoch(e: usize, cfg: &TrainConfig) -> f64 {
    cfg.lr0 * cfg.decay.powi((e / DECAY_INTERVAL) as i32)
}

/// Learnable per-curve weights, kept as a softmax over logits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryWeights {
    pub logits: [f64; NUM_CURVES],
}

impl Default for BoundaryWeights {
    fn default() -> Self {
        BoundaryWeights {
            logits: [0.0; NUM_CURVES],
        }
    }
}

impl BoundaryWeights {
    pub fn new(logits: [f64; NUM_CURVES]) -> Self {
        BoundaryWeights { logits }
    }

    pub fn weights(&self) -> [f64; NUM_CURVES] {
        let m = self.logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let e = self.logits.map(|l| (l - m).exp());
        let s: f64 = e.iter().sum();
        e.map(|v| v / s)
    }

    /// `4 · softmax`, the per-point multipliers in the boundary term.
    pub fn point_weights(&self) -> [f64; NUM_CURVES] {
        self.weights().map(|w| NUM_CURVES as f64 * w)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossBreakdown {
    pub epoch: usize,
    pub equation_term: f64,
    pub boundary_term: f64,
    pub total: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    pub xi: f64,
    pub eta: f64,
    pub side: Side,
    /// Curve parameter, the grid-index fraction along the curve.
    pub t: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Collocation {
    pub interior: Vec<(f64, f64)>,
    pub boundary: Vec<BoundaryPoint>,
}

/// Owner of boundary node `(i, j)`. Corners go to the first curve in the
/// order south, east, north, west.
pub fn boundary_owner(grid: &CompGrid, i: usize, j: usize) -> Option<(Side, f64)> {
    let (ni, nj) = (grid.ni(), grid.nj());
    if j == 0 {
        Some((Side::South, grid.xi(i)))
    } else if i == ni - 1 {
        Some((Side::East, grid.eta(j)))
    } else if j == nj - 1 {
        Some((Side::North, grid.xi(i)))
    } else if i == 0 {
        Some((Side::West, grid.eta(j)))
    } else {
        None
    }
}

/// Splits the grid nodes into interior points and tagged boundary points,
/// both in storage order.
pub fn collocation_points(grid: &CompGrid) -> Collocation {
    let mut interior = Vec::new();
    let mut boundary = Vec::new();
    for j in 0..grid.nj() {
        for i in 0..grid.ni() {
            let (xi, eta) = (grid.xi(i), grid.eta(j));
            match boundary_owner(grid, i, j) {
                Some((side, t)) => boundary.push(BoundaryPoint { xi, eta, side, t }),
                None => interior.push((xi, eta)),
            }
        }
    }
    Collocation { interior, boundary }
}

/// Affine map from physical coordinates into the loss frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossFrame {
    pub origin: Point,
    pub scale: f64,
}

impl LossFrame {
    pub fn of(domain: &DomainSpec) -> Result<Self> {
        let (lo, hi) = domain.bounding_box();
        let scale = (hi.x - lo.x).max(hi.y - lo.y);
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::DegenerateGeometry(format!(
                "domain bounding box {lo} .. {hi} is degenerate"
            )));
        }
        Ok(LossFrame { origin: lo, scale })
    }

    pub fn point(&self, p: Point) -> Point {
        Point::new(
            (p.x - self.origin.x) / self.scale,
            (p.y - self.origin.y) / self.scale,
        )
    }

    fn jet<S: Scalar>(&self, j: SecondOrderJet<S>) -> SecondOrderJet<S> {
        j.normalized(self.origin.x, self.origin.y, self.scale)
    }

    fn real<S: Scalar>(&self, v: S, axis: usize) -> S {
        let o = if axis == 0 { self.origin.x } else { self.origin.y };
        (v - o) * (1.0 / self.scale)
    }
}

/// Residual with coefficients resolved for `domain` in the loss frame.
pub fn residual_for(domain: &DomainSpec, cfg: &TrainConfig) -> Result<Residual> {
    let frame = LossFrame::of(domain)?;
    let area = cfg
        .hyperbolic_area
        .unwrap_or_else(|| domain.area() / (frame.scale * frame.scale));
    Ok(Residual {
        governing: cfg.governing,
        lame: cfg.lame,
        laplace_form: cfg.laplace_form,
        reference_area: area,
    })
}

fn boundary_targets(domain: &DomainSpec, frame: &LossFrame, pts: &[BoundaryPoint]) -> Vec<Point> {
    pts.iter()
        .map(|b| frame.point(domain.curve(b.side).eval(b.t)))
        .collect()
}

/// Loss of an arbitrary mapping. `equation_term` averages
/// `w_j (r1² + r2²)` over interior points, `boundary_term` averages
/// `4·softmax(curve) · |mapped − target|²` over boundary points.
pub fn compute_loss(
    mapping: &dyn Mapping,
    domain: &DomainSpec,
    points: &Collocation,
    bw: &BoundaryWeights,
    cfg: &TrainConfig,
) -> Result<LossBreakdown> {
    let frame = LossFrame::of(domain)?;
    let residual = residual_for(domain, cfg)?;
    let mut eq = 0.0;
    for &(xi, eta) in &points.interior {
        let jet = frame.jet(mapping.jet(xi, eta)?);
        let (r1, r2) = residual.eval(&jet);
        let v = cfg.interior_weight * (r1 * r1 + r2 * r2);
        if !v.is_finite() {
            return Err(Error::NonFiniteLoss { xi, eta });
        }
        eq += v;
    }
    let targets = boundary_targets(domain, &frame, &points.boundary);
    let w = bw.point_weights();
    let mut bd = 0.0;
    for (b, target) in points.boundary.iter().zip(&targets) {
        let p = frame.point(mapping.position(b.xi, b.eta)?);
        let (dx, dy) = (p.x - target.x, p.y - target.y);
        let v = w[b.side.index()] * (dx * dx + dy * dy);
        if !v.is_finite() {
            return Err(Error::NonFiniteLoss { xi: b.xi, eta: b.eta });
        }
        bd += v;
    }
    let equation_term = if points.interior.is_empty() {
        0.0
    } else {
        eq / points.interior.len() as f64
    };
    let boundary_term = bd / points.boundary.len() as f64;
    Ok(LossBreakdown {
        epoch: 0,
        equation_term,
        boundary_term,
        total: equation_term + boundary_term,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdamState {
    pub m: Vec<f64>,
    pub v: Vec<f64>,
    pub t: u64,
}

impl AdamState {
    pub fn new(n: usize) -> Self {
        AdamState {
            m: vec![0.0; n],
            v: vec![0.0; n],
            t: 0,
        }
    }
}

/// One bias-corrected Adam update.
pub fn adam_step(
    params: &mut [f64],
    grads: &[f64],
    state: &mut AdamState,
    lr: f64,
    beta1: f64,
    beta2: f64,
    eps: f64,
) {
    assert_eq!(params.len(), grads.len());
    assert_eq!(params.len(), state.m.len());
    state.t += 1;
    let t = state.t as i32;
    let (c1, c2) = (1.0 - beta1.powi(t), 1.0 - beta2.powi(t));
    for k in 0..params.len() {
        let g = grads[k];
        state.m[k] = beta1 * state.m[k] + (1.0 - beta1) * g;
        state.v[k] = beta2 * state.v[k] + (1.0 - beta2) * g * g;
        let mh = state.m[k] / c1;
        let vh = state.v[k] / c2;
        params[k] -= lr * mh / (vh.sqrt() + eps);
    }
}

pub fn sgd_step(params: &mut [f64], grads: &[f64], lr: f64) {
    assert_eq!(params.len(), grads.len());
    for (p, g) in params.iter_mut().zip(grads) {
        *p -= lr * g;
    }
}

/// Loss value and gradient with respect to model parameters followed by
/// the four logits.
#[derive(Debug, Clone)]
pub struct LossGradient {
    pub loss: LossBreakdown,
    pub grad: Vec<f64>,
}

enum Work<'a> {
    Interior(&'a [[[HyperDual<f64>; INPUT_DIM]; 3]]),
    Boundary(&'a [[f64; INPUT_DIM]], &'a [Point], &'a [BoundaryPoint]),
}

/// Full-batch training state for one domain.
pub struct Trainer {
    cfg: TrainConfig,
    frame: LossFrame,
    residual: Residual,
    points: Collocation,
    interior_inputs: Vec<[[HyperDual<f64>; INPUT_DIM]; 3]>,
    boundary_inputs: Vec<[f64; INPUT_DIM]>,
    targets: Vec<Point>,
    model: PinnModel,
    weights: BoundaryWeights,
    adam: AdamState,
    epoch: usize,
}

impl Trainer {
    pub fn new(domain: &DomainSpec, cfg: &TrainConfig) -> Result<Self> {
        cfg.validate()?;
        let (lo, hi) = domain.bounding_box();
        let bbox = BBox::new(lo, hi)?.padded(BBOX_PADDING);
        let model = init_model(cfg.architecture()?, bbox, cfg.seed);
        Self::with_model(domain, cfg, model, BoundaryWeights::default())
    }

    /// Starts from a given model and weights instead of a fresh init.
    pub fn with_model(
        domain: &DomainSpec,
        cfg: &TrainConfig,
        model: PinnModel,
        weights: BoundaryWeights,
    ) -> Result<Self> {
        cfg.validate()?;
        let corners = check_corner_compatibility(domain, TRAIN_CORNER_TOL);
        if !corners.pass {
            return Err(Error::IncompatibleCorners {
                max_gap: corners.max_gap(),
                tol: TRAIN_CORNER_TOL,
            });
        }
        let frame = LossFrame::of(domain)?;
        let residual = residual_for(domain, cfg)?;
        let grid = uniform_comp_grid(cfg.ni, cfg.nj)?;
        let points = collocation_points(&grid);
        let interior_inputs = points
            .interior
            .iter()
            .map(|&(xi, eta)| jet_inputs(xi, eta))
            .collect::<Result<Vec<_>>>()?;
        let boundary_inputs = points
            .boundary
            .iter()
            .map(|b| augment(b.xi, b.eta))
            .collect::<Result<Vec<_>>>()?;
        let targets = boundary_targets(domain, &frame, &points.boundary);
        let n = model.num_params() + NUM_CURVES;
        Ok(Trainer {
            cfg: cfg.clone(),
            frame,
            residual,
            points,
            interior_inputs,
            boundary_inputs,
            targets,
            model,
            weights,
            adam: AdamState::new(n),
            epoch: 0,
        })
    }

    pub fn model(&self) -> &PinnModel {
        &self.model
    }

    pub fn weights(&self) -> &BoundaryWeights {
        &self.weights
    }

    pub fn epoch(&self) -> usize {
        self.epoch
    }

    pub fn points(&self) -> &Collocation {
        &self.points
    }

    fn work_items(&self) -> Vec<Work<'_>> {
        let mut items: Vec<Work<'_>> = self
            .interior_inputs
            .chunks(CHUNK)
            .map(Work::Interior)
            .collect();
        let b = &self.boundary_inputs;
        for s in (0..b.len()).step_by(CHUNK) {
            let e = (s + CHUNK).min(b.len());
            items.push(Work::Boundary(
                &b[s..e],
                &self.targets[s..e],
                &self.points.boundary[s..e],
            ));
        }
        items
    }

    /// Taped loss of one chunk: `(equation part, boundary part, gradient)`,
    /// each already divided by its point count.
    fn chunk(&self, work: &Work<'_>) -> Result<(f64, f64, Vec<f64>)> {
        let arch = &self.model.arch;
        let tape = Tape::with_capacity(1 << 16);
        let params: Vec<Var<'_>> = self.model.params.iter().map(|p| tape.param(*p)).collect();
        let logits: Vec<Var<'_>> = self.weights.logits.iter().map(|l| tape.param(*l)).collect();
        let zero = tape.constant(0.0);
        let (loss, is_eq) = match work {
            Work::Interior(inputs) => {
                let mut acc = zero;
                for passes in inputs.iter() {
                    let outs = passes
                        .map(|input| forward_hd(arch, &params, &self.model.bbox, input.map(|h| h.lift(zero))));
                    let [a, b, c] = outs;
                    let jet = self.frame.jet(SecondOrderJet::from_passes(a?, b?, c?)?);
                    let (r1, r2) = self.residual.eval(&jet);
                    acc = acc + (r1 * r1 + r2 * r2) * self.cfg.interior_weight;
                }
                let n = self.points.interior.len() as f64;
                (acc * (1.0 / n), true)
            }
            Work::Boundary(inputs, targets, pts) => {
                let m = self.weights.logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let e: Vec<Var<'_>> = logits.iter().map(|l| (*l - m).exp()).collect();
                let sum = e[0] + e[1] + e[2] + e[3];
                let w: Vec<Var<'_>> = e
                    .iter()
                    .map(|v| v.div(sum) * NUM_CURVES as f64)
                    .collect();
                let mut per_side = [zero; NUM_CURVES];
                for ((input, target), b) in inputs.iter().zip(targets.iter()).zip(pts.iter()) {
                    let lifted = input.map(|v| zero.constant_like(v));
                    let [x, y] = forward_real(arch, &params, &self.model.bbox, lifted)?;
                    let dx = self.frame.real(x, 0) - target.x;
                    let dy = self.frame.real(y, 1) - target.y;
                    let k = b.side.index();
                    per_side[k] = per_side[k] + dx * dx + dy * dy;
                }
                let mut acc = zero;
                for k in 0..NUM_CURVES {
                    acc = acc + w[k] * per_side[k];
                }
                let n = self.points.boundary.len() as f64;
                (acc * (1.0 / n), false)
            }
        };
        let value = loss.value();
        let grad = tape.backprop(loss.slot())?;
        Ok(if is_eq {
            (value, 0.0, grad)
        } else {
            (0.0, value, grad)
        })
    }

    /// Loss and gradient at the current parameters. Chunks run in parallel
    /// and are reduced in a fixed order.
    pub fn loss_and_gradient(&self) -> Result<LossGradient> {
        let items = self.work_items();
        let parts: Vec<Result<(f64, f64, Vec<f64>)>> =
            items.par_iter().map(|w| self.chunk(w)).collect();
        let n = self.model.num_params() + NUM_CURVES;
        let (mut eq, mut bd, mut grad) = (0.0, 0.0, vec![0.0; n]);
        for part in parts {
            let (e, b, g) = part.map_err(|e| Error::Training {
                epoch: self.epoch,
                detail: e.to_string(),
            })?;
            eq += e;
            bd += b;
            for (acc, v) in grad.iter_mut().zip(&g) {
                *acc += v;
            }
        }
        let loss = LossBreakdown {
            epoch: self.epoch,
            equation_term: eq,
            boundary_term: bd,
            total: eq + bd,
        };
        if !loss.total.is_finite() || grad.iter().any(|g| !g.is_finite()) {
            return Err(Error::Training {
                epoch: self.epoch,
                detail: format!("non-finite loss {}", loss.total),
            });
        }
        Ok(LossGradient { loss, grad })
    }

    /// One optimizer step. Returns the loss before the update.
    pub fn step(&mut self) -> Result<LossBreakdown> {
        let LossGradient { loss, mut grad } = self.loss_and_gradient()?;
        let lr = lr_at_epoch(self.epoch, &self.cfg);
        let np = self.model.num_params();
        for g in &mut grad[np..] {
            *g = match self.cfg.weight_update {
                WeightUpdate::Ascent => -*g,
                WeightUpdate::Descent => *g,
                WeightUpdate::Frozen => 0.0,
            };
        }
        let mut all: Vec<f64> = self.model.params.clone();
        all.extend_from_slice(&self.weights.logits);
        match self.cfg.optimizer {
            Optimizer::Adam => adam_step(
                &mut all,
                &grad,
                &mut self.adam,
                lr,
                self.cfg.beta1,
                self.cfg.beta2,
                self.cfg.adam_eps,
            ),
            Optimizer::Sgd => sgd_step(&mut all, &grad, lr),
        }
        self.model.params.copy_from_slice(&all[..np]);
        self.weights.logits.copy_from_slice(&all[np..]);
        self.epoch += 1;
        Ok(loss)
    }

    pub fn into_outcome(self, history: Vec<LossBreakdown>) -> TrainOutcome {
        TrainOutcome {
            model: self.model,
            weights: self.weights,
            history,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub model: PinnModel,
    pub weights: BoundaryWeights,
    /// Loss before each epoch's update, then the loss after the last one.
    pub history: Vec<LossBreakdown>,
}

impl TrainOutcome {
    pub fn final_loss(&self) -> &LossBreakdown {
        self.history.last().expect("history is never empty")
    }
}

/// Runs `cfg.epochs` full-batch epochs from a fresh model.
pub fn train(domain: &DomainSpec, cfg: &TrainConfig) -> Result<TrainOutcome> {
    train_with(domain, cfg, |_, _| {})
}

/// [`train`] with a callback after every epoch, given the trainer and the
/// pre-step loss.
pub fn train_with(
    domain: &DomainSpec,
    cfg: &TrainConfig,
    mut on_epoch: impl FnMut(&Trainer, &LossBreakdown),
) -> Result<TrainOutcome> {
    let mut trainer = Trainer::new(domain, cfg)?;
    let mut history = Vec::with_capacity(cfg.epochs + 1);
    for _ in 0..cfg.epochs {
        let loss = trainer.step()?;
        on_epoch(&trainer, &loss);
        history.push(loss);
    }
    history.push(trainer.loss_and_gradient()?.loss);
    Ok(trainer.into_outcome(history))
}

/// Evaluates the model at every node of `grid`.
pub fn generate_mesh(model: &PinnModel, grid: &CompGrid) -> Result<StructuredMesh> {
    let coords = grid
        .nodes()
        .map(|(xi, eta)| model.forward(xi, eta))
        .collect::<Result<Vec<_>>>()?;
    StructuredMesh::new(grid.ni(), grid.nj(), coords, Provenance::Pinn)
}

/// Writes `epoch,equation_term,boundary_term,total`.
pub fn write_loss_csv<W: Write>(history: &[LossBreakdown], mut w: W) -> std::io::Result<()> {
    writeln!(w, "epoch,equation_term,boundary_term,total")?;
    for h in history {
        writeln!(
            w,
            "{},{:e},{:e},{:e}",
            h.epoch, h.equation_term, h.boundary_term, h.total
        )?;
    }
    w.flush()
}

pub fn export_loss_csv(history: &[LossBreakdown], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_loss_csv(history, std::io::BufWriter::new(file)).map_err(|e| Error::io(path, e))
}
