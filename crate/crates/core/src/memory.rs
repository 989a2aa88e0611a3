//! Composite-midpoint quadrature for the memory flux `int_0^t (b/a) u~ ds`.
//!
//! The running sum `S^n = sum_{l<n} (b/a U~)^{l+1/2}` is all a stepper needs;
//! the total flux at level `n` is `U^n = U~^n + dt S^n`.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `dt * sum(samples)`, or with `include_final_half` the last sample weighted `dt/2`.
///
/// This is the identity `int_0^{t_{n+1/2}} u = dt sum_{l<n} u(t_{l+1/2}) + dt/2 u(t_{n+1/2}) + O(dt^2)`
/// when the samples are taken at half steps.
pub fn midpoint_integral<T: Scalar>(samples: &[T], dt: T, include_final_half: bool) -> T {
    let Some((last, head)) = samples.split_last() else {
        return T::zero();
    };
    let head_sum: T = head.iter().copied().sum();
    let last_weight = if include_final_half { T::lit(0.5) } else { T::one() };
    dt * (head_sum + last_weight * *last)
}

#[derive(Debug, Clone, PartialEq)]
pub struct HistoryState<T> {
    accumulated: Vec<T>,
    steps: usize,
    dt: T,
    /// Per-step half-level samples, kept only when requested for replay checks.
    samples: Option<Vec<Vec<T>>>,
}

impl<T: Scalar> HistoryState<T> {
    pub fn new(faces: usize, dt: T) -> Self {
        Self {
            accumulated: vec![T::zero(); faces],
            steps: 0,
            dt,
            samples: None,
        }
    }

    /// Like [`new`](Self::new) but also records each step's samples so the
    /// running sum can be recomputed from scratch.
    pub fn with_replay(faces: usize, dt: T) -> Self {
        Self {
            samples: Some(Vec::new()),
            ..Self::new(faces, dt)
        }
    }

    /// `S^n`, one entry per face.
    pub fn sum(&self) -> &[T] {
        &self.accumulated
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn dt(&self) -> T {
        self.dt
    }

    /// `S^{n+1} = S^n + (b_mid / a) (u_old + u_new) / 2`, face by face.
    pub fn advance(&mut self, b_mid: &[T], a: &[T], u_old: &[T], u_new: &[T]) -> Result<()> {
        let n = self.accumulated.len();
        if [b_mid.len(), a.len(), u_old.len(), u_new.len()].iter().any(|&l| l != n) {
            return Err(Error::Shape(format!("history expects {n} face values")));
        }
        let half = T::lit(0.5);
        let sample: Vec<T> = (0..n)
            .map(|f| b_mid[f] / a[f] * (u_old[f] + u_new[f]) * half)
            .collect();
        for (s, v) in self.accumulated.iter_mut().zip(&sample) {
            *s = *s + *v;
        }
        if let Some(store) = self.samples.as_mut() {
            store.push(sample);
        }
        self.steps += 1;
        Ok(())
    }

    /// Functional form of [`advance`](Self::advance).
    pub fn advanced(&self, b_mid: &[T], a: &[T], u_old: &[T], u_new: &[T]) -> Result<Self> {
        let mut next = self.clone();
        next.advance(b_mid, a, u_old, u_new)?;
        Ok(next)
    }

    /// `dt S^n`: the memory part of the total flux at the current level.
    pub fn memory_flux(&self) -> Vec<T> {
        self.accumulated.iter().map(|s| self.dt * *s).collect()
    }

    /// Recomputes the sum from the stored samples, if replay is enabled.
    pub fn replayed_sum(&self) -> Option<Vec<T>> {
        self.samples.as_ref().map(|store| {
            let mut out = vec![T::zero(); self.accumulated.len()];
            for sample in store {
                for (o, v) in out.iter_mut().zip(sample) {
                    *o = *o + *v;
                }
            }
            out
        })
    }
}
