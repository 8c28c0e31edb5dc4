//! Wengert tape for reverse-mode differentiation of scalar programs.
//!
//! Every primitive real operation is appended as one node, so the node list
//! is topologically ordered by construction. Hyper-dual arithmetic over
//! [`Var`] records the real arithmetic of all four components, which makes
//! the gradient of a loss containing second derivatives an ordinary reverse
//! sweep.

use std::cell::RefCell;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::scalar::{sigmoid_f64, Scalar};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
enum Op {
    Leaf,
    Add(u32, u32),
    Sub(u32, u32),
    Mul(u32, u32),
    Div(u32, u32),
    Neg(u32),
    Scale(u32, f64),
    Shift(u32, f64),
    Tanh(u32),
    Sigmoid(u32),
    Sin(u32),
    Cos(u32),
    Tan(u32),
    Exp(u32),
    Ln(u32),
    /// Dot product over `len` operand pairs stored from `start` in `pairs`.
    Dot { start: u32, len: u32 },
}

#[derive(Default)]
struct Inner {
    ops: Vec<Op>,
    vals: Vec<f64>,
    pairs: Vec<(u32, u32)>,
    /// Node index of each registered parameter, in registration order.
    params: Vec<u32>,
}

impl Inner {
    fn push(&mut self, op: Op, val: f64) -> u32 {
        let idx = self.ops.len() as u32;
        self.ops.push(op);
        self.vals.push(val);
        idx
    }

    fn eval(&self, op: Op, vals: &[f64]) -> f64 {
        let v = |i: u32| vals[i as usize];
        match op {
            Op::Leaf => unreachable!("leaves carry their own value"),
            Op::Add(a, b) => v(a) + v(b),
            Op::Sub(a, b) => v(a) - v(b),
            Op::Mul(a, b) => v(a) * v(b),
            Op::Div(a, b) => v(a) / v(b),
            Op::Neg(a) => -v(a),
            Op::Scale(a, c) => v(a) * c,
            Op::Shift(a, c) => v(a) + c,
            Op::Tanh(a) => v(a).tanh(),
            Op::Sigmoid(a) => sigmoid_f64(v(a)),
            Op::Sin(a) => v(a).sin(),
            Op::Cos(a) => v(a).cos(),
            Op::Tan(a) => v(a).tan(),
            Op::Exp(a) => v(a).exp(),
            Op::Ln(a) => v(a).ln(),
            Op::Dot { start, len } => {
                let pairs = &self.pairs[start as usize..(start + len) as usize];
                pairs.iter().map(|&(x, y)| v(x) * v(y)).sum()
            }
        }
    }
}

/// Recording of primitive real operations.
///
/// Operations are appended through [`Var`] handles, which borrow the tape.
/// Parameters registered with [`Tape::param`] receive gradient slots in
/// registration order.
#[derive(Default)]
pub struct Tape {
    inner: RefCell<Inner>,
}

/// Index of a node on a tape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Slot(pub usize);

/// Handle to a recorded value.
#[derive(Clone, Copy)]
pub struct Var<'t> {
    tape: &'t Tape,
    idx: u32,
}

impl fmt::Debug for Var<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Var#{}({})", self.idx, self.value())
    }
}

impl Tape {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(nodes: usize) -> Self {
        let inner = Inner {
            ops: Vec::with_capacity(nodes),
            vals: Vec::with_capacity(nodes),
            pairs: Vec::with_capacity(nodes),
            params: Vec::new(),
        };
        Tape {
            inner: RefCell::new(inner),
        }
    }

    /// A differentiable input. Its gradient is reported at the next free
    /// parameter slot.
    pub fn param(&self, value: f64) -> Var<'_> {
        let mut inner = self.inner.borrow_mut();
        let idx = inner.push(Op::Leaf, value);
        inner.params.push(idx);
        Var { tape: self, idx }
    }

    /// A leaf that is not a parameter.
    pub fn constant(&self, value: f64) -> Var<'_> {
        let idx = self.inner.borrow_mut().push(Op::Leaf, value);
        Var { tape: self, idx }
    }

    pub fn len(&self) -> usize {
        self.inner.borrow().ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn num_params(&self) -> usize {
        self.inner.borrow().params.len()
    }

    /// Recorded value of a node.
    pub fn value(&self, slot: Slot) -> Option<f64> {
        self.inner.borrow().vals.get(slot.0).copied()
    }

    /// Re-evaluates every non-leaf node from the leaf values, in tape order.
    pub fn replay(&self) -> Vec<f64> {
        let inner = self.inner.borrow();
        let mut vals = Vec::with_capacity(inner.vals.len());
        for (i, &op) in inner.ops.iter().enumerate() {
            let v = match op {
                Op::Leaf => inner.vals[i],
                _ => inner.eval(op, &vals),
            };
            vals.push(v);
        }
        vals
    }

    /// Reverse sweep from `loss`; returns `∂loss/∂p` for every registered
    /// parameter, in registration order.
    pub fn backprop(&self, loss: Slot) -> Result<Vec<f64>> {
        let inner = self.inner.borrow();
        let n = inner.ops.len();
        if loss.0 >= n {
            return Err(Error::invalid(format!(
                "slot {} is not on this tape ({} nodes)",
                loss.0, n
            )));
        }
        let vals = &inner.vals;
        let mut adj = vec![0.0; loss.0 + 1];
        adj[loss.0] = 1.0;
        for i in (0..=loss.0).rev() {
            let g = adj[i];
            if g == 0.0 {
                continue;
            }
            let out = vals[i];
            match inner.ops[i] {
                Op::Leaf => {}
                Op::Add(a, b) => {
                    adj[a as usize] += g;
                    adj[b as usize] += g;
                }
                Op::Sub(a, b) => {
                    adj[a as usize] += g;
                    adj[b as usize] -= g;
                }
                Op::Mul(a, b) => {
                    let (va, vb) = (vals[a as usize], vals[b as usize]);
                    adj[a as usize] += g * vb;
                    adj[b as usize] += g * va;
                }
                Op::Div(a, b) => {
                    let vb = vals[b as usize];
                    adj[a as usize] += g / vb;
                    adj[b as usize] -= g * out / vb;
                }
                Op::Neg(a) => adj[a as usize] -= g,
                Op::Scale(a, c) => adj[a as usize] += g * c,
                Op::Shift(a, _) => adj[a as usize] += g,
                Op::Tanh(a) => adj[a as usize] += g * (1.0 - out * out),
                Op::Sigmoid(a) => adj[a as usize] += g * out * (1.0 - out),
                Op::Sin(a) => adj[a as usize] += g * vals[a as usize].cos(),
                Op::Cos(a) => adj[a as usize] -= g * vals[a as usize].sin(),
                Op::Tan(a) => adj[a as usize] += g * (1.0 + out * out),
                Op::Exp(a) => adj[a as usize] += g * out,
                Op::Ln(a) => adj[a as usize] += g / vals[a as usize],
                Op::Dot { start, len } => {
                    for &(x, y) in &inner.pairs[start as usize..(start + len) as usize] {
                        let (vx, vy) = (vals[x as usize], vals[y as usize]);
                        adj[x as usize] += g * vy;
                        adj[y as usize] += g * vx;
                    }
                }
            }
        }
        Ok(inner
            .params
            .iter()
            .map(|&p| adj.get(p as usize).copied().unwrap_or(0.0))
            .collect())
    }

    fn record(&self, op: Op) -> Var<'_> {
        let mut inner = self.inner.borrow_mut();
        let val = inner.eval(op, &inner.vals);
        let idx = inner.push(op, val);
        Var { tape: self, idx }
    }

    fn record_dot(&self, a: &[Var<'_>], b: &[Var<'_>]) -> Var<'_> {
        assert!(!a.is_empty() && a.len() == b.len(), "dot: bad lengths");
        let mut inner = self.inner.borrow_mut();
        let start = inner.pairs.len() as u32;
        for (x, y) in a.iter().zip(b) {
            debug_assert!(std::ptr::eq(x.tape, self) && std::ptr::eq(y.tape, self));
            inner.pairs.push((x.idx, y.idx));
        }
        let op = Op::Dot {
            start,
            len: a.len() as u32,
        };
        let val = inner.eval(op, &inner.vals);
        let idx = inner.push(op, val);
        Var { tape: self, idx }
    }
}

impl<'t> Var<'t> {
    pub fn slot(&self) -> Slot {
        Slot(self.idx as usize)
    }

    pub fn tape(&self) -> &'t Tape {
        self.tape
    }

    fn same_tape(&self, other: &Var<'t>) {
        assert!(
            std::ptr::eq(self.tape, other.tape),
            "operands recorded on different tapes"
        );
    }

    fn unary(self, op: fn(u32) -> Op) -> Self {
        self.tape.record(op(self.idx))
    }
}

impl<'t> Add for Var<'t> {
    type Output = Var<'t>;
    fn add(self, rhs: Self) -> Self {
        self.same_tape(&rhs);
        self.tape.record(Op::Add(self.idx, rhs.idx))
    }
}

impl<'t> Sub for Var<'t> {
    type Output = Var<'t>;
    fn sub(self, rhs: Self) -> Self {
        self.same_tape(&rhs);
        self.tape.record(Op::Sub(self.idx, rhs.idx))
    }
}

impl<'t> Mul for Var<'t> {
    type Output = Var<'t>;
    fn mul(self, rhs: Self) -> Self {
        self.same_tape(&rhs);
        self.tape.record(Op::Mul(self.idx, rhs.idx))
    }
}

impl<'t> Neg for Var<'t> {
    type Output = Var<'t>;
    fn neg(self) -> Self {
        self.tape.record(Op::Neg(self.idx))
    }
}

impl<'t> Add<f64> for Var<'t> {
    type Output = Var<'t>;
    fn add(self, rhs: f64) -> Self {
        self.tape.record(Op::Shift(self.idx, rhs))
    }
}

impl<'t> Sub<f64> for Var<'t> {
    type Output = Var<'t>;
    fn sub(self, rhs: f64) -> Self {
        self.tape.record(Op::Shift(self.idx, -rhs))
    }
}

impl<'t> Mul<f64> for Var<'t> {
    type Output = Var<'t>;
    fn mul(self, rhs: f64) -> Self {
        self.tape.record(Op::Scale(self.idx, rhs))
    }
}

impl Scalar for Var<'_> {
    fn value(&self) -> f64 {
        self.tape.inner.borrow().vals[self.idx as usize]
    }

    fn constant_like(&self, v: f64) -> Self {
        self.tape.constant(v)
    }

    fn div(self, rhs: Self) -> Self {
        self.same_tape(&rhs);
        self.tape.record(Op::Div(self.idx, rhs.idx))
    }

    fn tanh(self) -> Self {
        self.unary(Op::Tanh)
    }

    fn sigmoid(self) -> Self {
        self.unary(Op::Sigmoid)
    }

    fn sin(self) -> Self {
        self.unary(Op::Sin)
    }

    fn cos(self) -> Self {
        self.unary(Op::Cos)
    }

    fn tan(self) -> Self {
        self.unary(Op::Tan)
    }

    fn exp(self) -> Self {
        self.unary(Op::Exp)
    }

    fn ln(self) -> Self {
        self.unary(Op::Ln)
    }

    fn dot(a: &[Self], b: &[Self]) -> Self {
        a[0].tape.record_dot(a, b)
    }
}
