use crate::{Error, Result, C64};

/// Largest register the dense backend accepts.
pub const MAX_QUBITS: usize = 24;
/// Amplitudes with magnitude at or below this count as zero in support tests.
pub const SUPPORT_EPS: f64 = 1e-12;
/// Tolerance on the squared norm for "normalized" checks.
pub const NORM_TOLERANCE: f64 = 1e-9;

/// Dense complex amplitudes over `num_qubits` qubits.
///
/// The squared 2-norm never exceeds `1 + NORM_TOLERANCE`. Sub-normalized
/// states are legal: they arise from non-unitary gates and from amplitude
/// quantization. Normalization is checked on demand with
/// [`StateVector::check_normalized`].
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<C64>,
}

impl StateVector {
    pub fn new_basis_state(num_qubits: usize, basis_index: usize) -> Result<Self> {
        check_register(num_qubits)?;
        let dim = 1usize << num_qubits;
        if basis_index >= dim {
            return Err(Error::IndexOutOfRange {
                index: basis_index,
                dim,
            });
        }
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[basis_index] = C64::new(1.0, 0.0);
        Ok(Self { num_qubits, amps })
    }

    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        let dim = amps.len();
        if !dim.is_power_of_two() {
            return Err(Error::arg(format!("amplitude count {dim} is not a power of two")));
        }
        let num_qubits = dim.trailing_zeros() as usize;
        check_register(num_qubits)?;
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::arg("non-finite amplitude"));
        }
        let state = Self { num_qubits, amps };
        let n2 = state.norm_sqr();
        if n2 > 1.0 + NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm_sqr: n2 });
        }
        Ok(state)
    }

    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Self::from_amplitudes(amps.iter().map(|&a| C64::new(a, 0.0)).collect())
    }

    /// `2^(-n/2) Σ_x |x⟩|f(x)⟩` with the oracle value written into a
    /// `flag_width`-qubit register after the `n` index qubits.
    pub fn prepare_oracle_superposition<F>(n: usize, flag_width: usize, oracle: F) -> Result<Self>
    where
        F: Fn(usize) -> u64,
    {
        if flag_width == 0 {
            return Err(Error::arg("flag register needs at least one qubit"));
        }
        check_register(n + flag_width)?;
        let amp = C64::new((0.5f64).powf(n as f64 / 2.0), 0.0);
        let mut amps = vec![C64::new(0.0, 0.0); 1 << (n + flag_width)];
        for x in 0..1usize << n {
            let fx = oracle(x);
            if fx >> flag_width != 0 {
                return Err(Error::Overflow {
                    value: fx,
                    width: flag_width,
                });
            }
            amps[(x << flag_width) | fx as usize] = amp;
        }
        Ok(Self {
            num_qubits: n + flag_width,
            amps,
        })
    }

    /// Builds a state from a kernel output. The caller guarantees the length.
    pub(crate) fn from_raw(num_qubits: usize, amps: Vec<C64>) -> Self {
        debug_assert_eq!(amps.len(), 1 << num_qubits);
        Self { num_qubits, amps }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= NORM_TOLERANCE
    }

    pub fn check_normalized(&self) -> Result<()> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(Error::NotNormalized {
                norm_sqr: self.norm_sqr(),
            })
        }
    }

    /// Returns the state rescaled to unit norm.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sqr().sqrt();
        if n == 0.0 {
            return Err(Error::DegenerateState);
        }
        Ok(Self::from_raw(
            self.num_qubits,
            self.amps.iter().map(|a| a / n).collect(),
        ))
    }

    /// Number of basis states with magnitude above [`SUPPORT_EPS`].
    pub fn support_size(&self) -> usize {
        self.amps.iter().filter(|a| a.norm() > SUPPORT_EPS).count()
    }

    /// Tensor product `self ⊗ other`; `self` occupies the leading qubits.
    pub fn tensor(&self, other: &StateVector) -> Result<Self> {
        check_register(self.num_qubits + other.num_qubits)?;
        let amps = self
            .amps
            .iter()
            .flat_map(|a| other.amps.iter().map(move |b| a * b))
            .collect();
        Ok(Self::from_raw(self.num_qubits + other.num_qubits, amps))
    }

    /// Largest per-amplitude distance to `other`.
    pub fn max_distance(&self, other: &StateVector) -> f64 {
        assert_eq!(self.dim(), other.dim());
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

fn check_register(num_qubits: usize) -> Result<()> {
    if num_qubits > MAX_QUBITS {
        return Err(Error::ResourceBound {
            what: "qubits",
            value: num_qubits,
            max: MAX_QUBITS,
        });
    }
    Ok(())
}
