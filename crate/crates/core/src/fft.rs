//! Thin wrapper over `rustfft` with a per-thread planner cache.
//!
//! Two scalings are used in the crate: the *unitary* transform (factor 1/√N both
//! ways) for OFDM grids, and the *raw* forward transform (no scaling) for filter
//! and channel frequency responses.

use std::cell::RefCell;
use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use crate::C64;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(n)
        } else {
            p.plan_fft_forward(n)
        }
    })
}

/// In-place forward DFT, `X_k = Σ x_n e^{-j2πkn/N}`.
pub fn forward_raw(buf: &mut [C64]) {
    if buf.is_empty() {
        return;
    }
    plan(buf.len(), false).process(buf);
}

/// In-place inverse DFT without scaling, `x_n = Σ X_k e^{+j2πkn/N}`.
pub fn inverse_raw(buf: &mut [C64]) {
    if buf.is_empty() {
        return;
    }
    plan(buf.len(), true).process(buf);
}

/// In-place unitary forward DFT.
pub fn forward_unitary(buf: &mut [C64]) {
    forward_raw(buf);
    scale(buf, 1.0 / (buf.len() as f64).sqrt());
}

/// In-place unitary inverse DFT.
pub fn inverse_unitary(buf: &mut [C64]) {
    inverse_raw(buf);
    scale(buf, 1.0 / (buf.len() as f64).sqrt());
}

/// Raw DFT of `taps` zero-padded to `n` points. `taps.len()` must not exceed `n`.
pub fn padded_response(taps: &[(usize, C64)], n: usize) -> Vec<C64> {
    let mut buf = vec![C64::new(0.0, 0.0); n];
    for &(delay, g) in taps {
        buf[delay] += g;
    }
    forward_raw(&mut buf);
    buf
}

fn scale(buf: &mut [C64], s: f64) {
    for x in buf.iter_mut() {
        *x *= s;
    }
}
