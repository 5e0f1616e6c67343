use super::{check_mu, resolution};
use crate::qcore::StateVector;
use crate::{Error, Result, C64};

/// A state whose amplitude components all lie on the `2^(-μ/2)` grid.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantizedState {
    pub state: StateVector,
    pub mu: u32,
    /// `1 - |ψ_q|² / |ψ|²`: probability lost to unresolvable amplitude.
    pub norm_loss: f64,
    /// `norm_loss > 2^(-μ/2)`.
    pub significant_loss: bool,
}

/// Snaps one component onto the grid, truncating toward zero, so that any
/// magnitude below one grid step is unresolvable.
pub fn quantize_component(x: f64, mu: u32) -> Result<f64> {
    // written negated so NaN is rejected too
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(x.abs() <= 1.0 + 1e-12) {
        return Err(Error::ComponentRange { value: x });
    }
    let x = x.clamp(-1.0, 1.0);
    let step = resolution(mu);
    Ok((x / step).trunc() * step)
}

/// Stores the state at `μ` bits per amplitude (`μ/2` per real component).
/// The result is not renormalized.
pub fn quantize(state: &StateVector, mu: u32) -> Result<QuantizedState> {
    check_mu(mu)?;
    let amps = state
        .amplitudes()
        .iter()
        .map(|a| Ok(C64::new(quantize_component(a.re, mu)?, quantize_component(a.im, mu)?)))
        .collect::<Result<Vec<_>>>()?;
    let before = state.norm_sqr();
    let q = StateVector::from_amplitudes(amps)?;
    let norm_loss = if before == 0.0 {
        0.0
    } else {
        (1.0 - q.norm_sqr() / before).clamp(0.0, 1.0)
    };
    Ok(QuantizedState {
        state: q,
        mu,
        norm_loss,
        significant_loss: norm_loss > resolution(mu),
    })
}

/// Largest uniform superposition that survives quantization: `2^μ` terms.
pub fn superposition_bound(mu: u32) -> Result<u128> {
    check_mu(mu)?;
    Ok(1u128 << mu)
}
