use super::{check_mu, quantize_component};
use crate::{Error, Result, C64};

/// Fock amplitudes `e^{-|α|²/2} α^k / √(k!)` for `k < cutoff`.
pub fn coherent_state_truncated(alpha: C64, cutoff: usize) -> Vec<C64> {
    let mut amps = Vec::with_capacity(cutoff);
    let mut a = C64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    for k in 0..cutoff {
        if k > 0 {
            a = a * alpha / (k as f64).sqrt();
        }
        amps.push(a);
    }
    amps
}

/// Squared overlap between the Fock-truncated coherent state and its
/// `μ`-bit quantized, renormalized copy.
pub fn coherent_state_fidelity(alpha: C64, cutoff: usize, mu: u32) -> Result<f64> {
    check_mu(mu)?;
    let exact = coherent_state_truncated(alpha, cutoff);
    let norm_sqr: f64 = exact.iter().map(|a| a.norm_sqr()).sum();
    if norm_sqr < 1.0 - 1e-12 {
        return Err(Error::arg(format!(
            "cutoff {cutoff} keeps only {norm_sqr:.15} of the norm"
        )));
    }
    let quantized = exact
        .iter()
        .map(|a| Ok(C64::new(quantize_component(a.re, mu)?, quantize_component(a.im, mu)?)))
        .collect::<Result<Vec<_>>>()?;
    let q_norm_sqr: f64 = quantized.iter().map(|a| a.norm_sqr()).sum();
    if q_norm_sqr == 0.0 {
        return Ok(0.0);
    }
    let overlap: C64 = quantized.iter().zip(&exact).map(|(q, e)| q.conj() * e).sum();
    Ok((overlap.norm_sqr() / (q_norm_sqr * norm_sqr)).min(1.0))
}
