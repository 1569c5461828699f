//! Classical-to-quantum embedding circuits ρ_θ(x) and the parameter grid Θ.
//!
//! An [`EmbeddingAnsatz`] is a list of layers applied in time order; layer `l`
//! first applies its data-encoding gates S_l(x) and then its parameterized
//! gates U_l(θ_l), so the circuit unitary is ∏ U_l(θ_l) S_l(x) with the first
//! layer rightmost. The state is that unitary applied to |0…0⟩.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmath::{CMatrix, DensityMatrix};
use crate::scalar::{cone, cplx, czero, Real, C};

/// General single-qubit rotation Rot(θ₁, θ₂, θ₃) = R_Z(θ₁) R_Y(θ₂) R_Z(θ₃).
pub fn rot_gate<R: Real>(theta1: R, theta2: R, theta3: R) -> CMatrix<R> {
    let half = R::lit(0.5);
    let (s, c) = (theta2 * half).sin_cos();
    let e = |phase: R| C::from_polar(R::one(), phase * half);
    let mut m = CMatrix::zeros(2);
    m[(0, 0)] = e(-theta1 - theta3) * c;
    m[(0, 1)] = -e(-theta1 + theta3) * s;
    m[(1, 0)] = e(theta1 - theta3) * s;
    m[(1, 1)] = e(theta1 + theta3) * c;
    m
}

/// Pauli-X rotation exp(−i x X / 2).
pub fn rx_gate<R: Real>(x: R) -> CMatrix<R> {
    let (s, c) = (x * R::lit(0.5)).sin_cos();
    let mut m = CMatrix::zeros(2);
    m[(0, 0)] = cplx(c, R::zero());
    m[(0, 1)] = cplx(R::zero(), -s);
    m[(1, 0)] = cplx(R::zero(), -s);
    m[(1, 1)] = cplx(c, R::zero());
    m
}

/// Pauli-Y rotation exp(−i x Y / 2).
pub fn ry_gate<R: Real>(x: R) -> CMatrix<R> {
    let (s, c) = (x * R::lit(0.5)).sin_cos();
    let mut m = CMatrix::zeros(2);
    m[(0, 0)] = cplx(c, R::zero());
    m[(0, 1)] = cplx(-s, R::zero());
    m[(1, 0)] = cplx(s, R::zero());
    m[(1, 1)] = cplx(c, R::zero());
    m
}

/// Pauli-Z rotation exp(−i x Z / 2).
pub fn rz_gate<R: Real>(x: R) -> CMatrix<R> {
    let half = R::lit(0.5);
    let mut m = CMatrix::zeros(2);
    m[(0, 0)] = C::from_polar(R::one(), -x * half);
    m[(1, 1)] = C::from_polar(R::one(), x * half);
    m
}

/// Embedding parameter vector; angles are reduced into [0, 2π).
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaVector<R> {
    angles: Vec<R>,
}

impl<R: Real> ThetaVector<R> {
    pub fn new(angles: impl IntoIterator<Item = R>) -> Self {
        let two_pi = R::TAU();
        let angles = angles
            .into_iter()
            .map(|a| {
                let r = a % two_pi;
                let r = if r < R::zero() { r + two_pi } else { r };
                // `r + 2π` can round up to exactly 2π
                if r >= two_pi { R::zero() } else { r }
            })
            .collect();
        Self { angles }
    }

    pub fn zeros(len: usize) -> Self {
        Self { angles: vec![R::zero(); len] }
    }

    pub fn angles(&self) -> &[R] {
        &self.angles
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }
}

/// Data-encoding gate S(x); the gate angle is the feature value itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "gate", rename_all = "snake_case", deny_unknown_fields)]
pub enum DataGate {
    Rx { qubit: usize },
    Ry { qubit: usize },
    Rz { qubit: usize },
}

impl DataGate {
    fn qubits(&self) -> Vec<usize> {
        match *self {
            DataGate::Rx { qubit } | DataGate::Ry { qubit } | DataGate::Rz { qubit } => vec![qubit],
        }
    }
}

/// Parameterized gate of U_l(θ_l).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "gate", rename_all = "snake_case", deny_unknown_fields)]
pub enum ParamGate {
    /// Three-angle general rotation.
    Rot { qubit: usize },
    Rx { qubit: usize },
    Ry { qubit: usize },
    Rz { qubit: usize },
    /// Parameter-free entangler.
    Cnot { control: usize, target: usize },
    Cz { control: usize, target: usize },
}

impl ParamGate {
    pub fn param_count(&self) -> usize {
        match self {
            ParamGate::Rot { .. } => 3,
            ParamGate::Rx { .. } | ParamGate::Ry { .. } | ParamGate::Rz { .. } => 1,
            ParamGate::Cnot { .. } | ParamGate::Cz { .. } => 0,
        }
    }

    fn qubits(&self) -> Vec<usize> {
        match *self {
            ParamGate::Rot { qubit }
            | ParamGate::Rx { qubit }
            | ParamGate::Ry { qubit }
            | ParamGate::Rz { qubit } => vec![qubit],
            ParamGate::Cnot { control, target } | ParamGate::Cz { control, target } => {
                vec![control, target]
            }
        }
    }
}

/// One layer: data gates S_l(x) followed by parameterized gates U_l(θ_l).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Layer {
    #[serde(default)]
    pub data: Vec<DataGate>,
    #[serde(default)]
    pub unitary: Vec<ParamGate>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EncodingKind {
    /// Data enters once, before every parameterized gate.
    OneTime,
    /// Data gates are interleaved with parameterized gates.
    Repeated,
}

/// Anything that maps (θ, x) to a density matrix.
pub trait Embedding<R: Real>: Sync {
    /// Hilbert-space dimension n.
    fn dim(&self) -> usize;

    fn num_params(&self) -> usize;

    fn embed(&self, theta: &ThetaVector<R>, x: R) -> Result<DensityMatrix<R>>;

    fn encoding_kind(&self) -> EncodingKind;

    /// κ(x): the state after the single data-encoding stage. Only defined for
    /// one-time encodings.
    fn encoding_state(&self, x: R) -> Result<DensityMatrix<R>>;

    /// Upper envelope over θ of Tr ρ_θ(x)².
    fn purity_envelope(&self, _x: R) -> R {
        R::one()
    }
}

/// Layered parameterized circuit acting on `num_qubits` qubits from |0…0⟩.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbeddingAnsatz {
    pub num_qubits: usize,
    pub layers: Vec<Layer>,
}

/// Largest circuit simulated.
pub const MAX_QUBITS: usize = 4;

impl EmbeddingAnsatz {
    pub fn new(num_qubits: usize, layers: Vec<Layer>) -> Result<Self> {
        let a = Self { num_qubits, layers };
        a.validate()?;
        Ok(a)
    }

    /// U_θ(x) = R_X(x) Rot_θ R_X(x) on one qubit.
    pub fn rx_rot_rx() -> Self {
        Self {
            num_qubits: 1,
            layers: vec![
                Layer { data: vec![DataGate::Rx { qubit: 0 }], unitary: vec![ParamGate::Rot { qubit: 0 }] },
                Layer { data: vec![DataGate::Rx { qubit: 0 }], unitary: vec![] },
            ],
        }
    }

    /// Looks up a built-in ansatz by name.
    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "rx_rot_rx" => Some(Self::rx_rot_rx()),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_qubits == 0 || self.num_qubits > MAX_QUBITS {
            return Err(Error::InvalidAnsatz(format!(
                "num_qubits must be in 1..={MAX_QUBITS}, got {}",
                self.num_qubits
            )));
        }
        for (l, layer) in self.layers.iter().enumerate() {
            let qubits = layer
                .data
                .iter()
                .flat_map(DataGate::qubits)
                .chain(layer.unitary.iter().flat_map(ParamGate::qubits));
            for q in qubits {
                if q >= self.num_qubits {
                    return Err(Error::InvalidAnsatz(format!(
                        "layer {l} addresses qubit {q} but the circuit has {}",
                        self.num_qubits
                    )));
                }
            }
            for g in &layer.unitary {
                if let ParamGate::Cnot { control, target } | ParamGate::Cz { control, target } = *g {
                    if control == target {
                        return Err(Error::InvalidAnsatz(format!(
                            "layer {l}: two-qubit gate with control == target == {control}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn hilbert_dim(&self) -> usize {
        1 << self.num_qubits
    }

    pub fn param_count(&self) -> usize {
        self.layers.iter().flat_map(|l| &l.unitary).map(ParamGate::param_count).sum()
    }

    pub fn kind(&self) -> EncodingKind {
        let mut seen_params = false;
        let mut data_stages = 0;
        for layer in &self.layers {
            if !layer.data.is_empty() {
                if seen_params {
                    return EncodingKind::Repeated;
                }
                data_stages += 1;
            }
            if !layer.unitary.is_empty() {
                seen_params = true;
            }
        }
        if data_stages <= 1 {
            EncodingKind::OneTime
        } else {
            EncodingKind::Repeated
        }
    }

    /// Full circuit unitary U(θ, x).
    pub fn unitary<R: Real>(&self, theta: &ThetaVector<R>, x: R) -> Result<CMatrix<R>> {
        let expected = self.param_count();
        if theta.len() != expected {
            return Err(Error::ArityMismatch { expected, got: theta.len() });
        }
        let n = self.hilbert_dim();
        let mut u = CMatrix::identity(n);
        let mut params = theta.angles().iter().copied();
        for layer in &self.layers {
            for g in &layer.data {
                let (q, m) = match *g {
                    DataGate::Rx { qubit } => (qubit, rx_gate(x)),
                    DataGate::Ry { qubit } => (qubit, ry_gate(x)),
                    DataGate::Rz { qubit } => (qubit, rz_gate(x)),
                };
                u = &self.lift(q, &m) * &u;
            }
            for g in &layer.unitary {
                let full = match *g {
                    ParamGate::Rot { qubit } => {
                        let a = params.next().unwrap();
                        let b = params.next().unwrap();
                        let c = params.next().unwrap();
                        self.lift(qubit, &rot_gate(a, b, c))
                    }
                    ParamGate::Rx { qubit } => self.lift(qubit, &rx_gate(params.next().unwrap())),
                    ParamGate::Ry { qubit } => self.lift(qubit, &ry_gate(params.next().unwrap())),
                    ParamGate::Rz { qubit } => self.lift(qubit, &rz_gate(params.next().unwrap())),
                    ParamGate::Cnot { control, target } => self.controlled(control, target, false),
                    ParamGate::Cz { control, target } => self.controlled(control, target, true),
                };
                u = &full * &u;
            }
        }
        Ok(u)
    }

    /// Data-encoding unitary of a one-time encoding circuit.
    pub fn encoding_unitary<R: Real>(&self, x: R) -> Result<CMatrix<R>> {
        if self.kind() != EncodingKind::OneTime {
            return Err(Error::NotOneTimeEncoding);
        }
        let mut u = CMatrix::identity(self.hilbert_dim());
        for layer in &self.layers {
            for g in &layer.data {
                let (q, m) = match *g {
                    DataGate::Rx { qubit } => (qubit, rx_gate(x)),
                    DataGate::Ry { qubit } => (qubit, ry_gate(x)),
                    DataGate::Rz { qubit } => (qubit, rz_gate(x)),
                };
                u = &self.lift(q, &m) * &u;
            }
        }
        Ok(u)
    }

    /// Single-qubit gate on `qubit` (qubit 0 is the most significant bit).
    fn lift<R: Real>(&self, qubit: usize, g: &CMatrix<R>) -> CMatrix<R> {
        if self.num_qubits == 1 {
            return g.clone();
        }
        let mut m = CMatrix::identity(1);
        for q in 0..self.num_qubits {
            m = if q == qubit { m.kron(g) } else { m.kron(&CMatrix::identity(2)) };
        }
        m
    }

    fn controlled<R: Real>(&self, control: usize, target: usize, phase: bool) -> CMatrix<R> {
        let n = self.hilbert_dim();
        let bit = |q: usize| 1usize << (self.num_qubits - 1 - q);
        let mut m = CMatrix::zeros(n);
        for basis in 0..n {
            let on = basis & bit(control) != 0;
            if phase {
                let sign = if on && basis & bit(target) != 0 { -R::one() } else { R::one() };
                m[(basis, basis)] = cplx(sign, R::zero());
            } else {
                let out = if on { basis ^ bit(target) } else { basis };
                m[(out, basis)] = cone();
            }
        }
        m
    }

    fn ground_state<R: Real>(&self) -> Vec<C<R>> {
        let mut psi = vec![czero(); self.hilbert_dim()];
        psi[0] = cone();
        psi
    }
}

impl<R: Real> Embedding<R> for EmbeddingAnsatz {
    fn dim(&self) -> usize {
        self.hilbert_dim()
    }

    fn num_params(&self) -> usize {
        self.param_count()
    }

    fn embed(&self, theta: &ThetaVector<R>, x: R) -> Result<DensityMatrix<R>> {
        let u = self.unitary(theta, x)?;
        DensityMatrix::from_pure_state(&u.apply(&self.ground_state()))
    }

    fn encoding_kind(&self) -> EncodingKind {
        self.kind()
    }

    fn encoding_state(&self, x: R) -> Result<DensityMatrix<R>> {
        let u = self.encoding_unitary(x)?;
        DensityMatrix::from_pure_state(&u.apply(&self.ground_state()))
    }
}

/// θ-independent embedding given by an explicit table of states per feature value.
#[derive(Debug, Clone)]
pub struct TableEmbedding<R> {
    features: Vec<R>,
    states: Vec<DensityMatrix<R>>,
}

impl<R: Real> TableEmbedding<R> {
    /// `features` must be strictly increasing; all states share one dimension.
    pub fn new(features: Vec<R>, states: Vec<DensityMatrix<R>>) -> Result<Self> {
        if features.is_empty() || features.len() != states.len() {
            return Err(Error::InvalidArgument(format!(
                "table needs one state per feature ({} features, {} states)",
                features.len(),
                states.len()
            )));
        }
        if features.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument("table features must be strictly increasing".into()));
        }
        let dim = states[0].dim();
        if let Some(s) = states.iter().find(|s| s.dim() != dim) {
            return Err(Error::DimMismatch { left: dim, right: s.dim() });
        }
        Ok(Self { features, states })
    }

    fn lookup(&self, x: R) -> &DensityMatrix<R> {
        let i = match self.features.binary_search_by(|f| f.partial_cmp(&x).unwrap()) {
            Ok(i) => i,
            Err(0) => 0,
            Err(i) if i >= self.features.len() => self.features.len() - 1,
            Err(i) => {
                if x - self.features[i - 1] <= self.features[i] - x {
                    i - 1
                } else {
                    i
                }
            }
        };
        &self.states[i]
    }
}

impl<R: Real> Embedding<R> for TableEmbedding<R> {
    fn dim(&self) -> usize {
        self.states[0].dim()
    }

    fn num_params(&self) -> usize {
        0
    }

    fn embed(&self, theta: &ThetaVector<R>, x: R) -> Result<DensityMatrix<R>> {
        if !theta.is_empty() {
            return Err(Error::ArityMismatch { expected: 0, got: theta.len() });
        }
        Ok(self.lookup(x).clone())
    }

    fn encoding_kind(&self) -> EncodingKind {
        EncodingKind::OneTime
    }

    fn encoding_state(&self, x: R) -> Result<DensityMatrix<R>> {
        Ok(self.lookup(x).clone())
    }

    fn purity_envelope(&self, x: R) -> R {
        self.lookup(x).purity()
    }
}

/// Default cap on the number of grid points.
pub const DEFAULT_GRID_CAP: usize = 1_000_000;

/// Uniform grid over [0, 2π)^d in lexicographic order (axis 0 varies slowest).
#[derive(Debug, Clone)]
pub struct ThetaGrid<R> {
    points: Vec<ThetaVector<R>>,
    resolution: usize,
}

impl<R: Real> ThetaGrid<R> {
    /// Grid for an embedding with `dims` parameters.
    pub fn uniform(dims: usize, resolution: usize, cap: usize) -> Result<Self> {
        if resolution < 2 {
            return Err(Error::GridResolution(resolution));
        }
        let count = (resolution as u128).checked_pow(dims as u32).unwrap_or(u128::MAX);
        if count > cap as u128 {
            return Err(Error::GridTooLarge { points: count, cap });
        }
        let count = count as usize;
        let step = R::TAU() / R::from_usize(resolution).unwrap();
        let points = (0..count)
            .map(|mut idx| {
                let mut axes = vec![R::zero(); dims];
                for axis in (0..dims).rev() {
                    axes[axis] = R::from_usize(idx % resolution).unwrap() * step;
                    idx /= resolution;
                }
                ThetaVector { angles: axes }
            })
            .collect();
        Ok(Self { points, resolution })
    }

    /// Grid holding exactly the given points, in the given order.
    pub fn from_points(points: Vec<ThetaVector<R>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidArgument("theta grid must be nonempty".into()));
        }
        let d = points[0].len();
        if let Some(p) = points.iter().find(|p| p.len() != d) {
            return Err(Error::ArityMismatch { expected: d, got: p.len() });
        }
        Ok(Self { points, resolution: 1 })
    }

    pub fn points(&self) -> &[ThetaVector<R>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Points per axis (1 for grids built from explicit points).
    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn get(&self, i: usize) -> &ThetaVector<R> {
        &self.points[i]
    }
}

/// Uniform grid matched to `embedding`'s parameter count.
pub fn make_theta_grid<R: Real, E: Embedding<R> + ?Sized>(
    embedding: &E,
    resolution: usize,
) -> Result<ThetaGrid<R>> {
    ThetaGrid::uniform(embedding.num_params(), resolution, DEFAULT_GRID_CAP)
}

/// Index of the smallest value. Values within `ARGMIN_TOL` of the running
/// best count as ties and the lower index wins.
pub fn grid_argmin<R: Real>(values: &[R]) -> Option<usize> {
    let tol = R::lit(R::ARGMIN_TOL);
    let mut best: Option<(usize, R)> = None;
    for (i, &v) in values.iter().enumerate() {
        match best {
            Some((_, b)) if !(v < b - tol) => {}
            _ => best = Some((i, v)),
        }
    }
    best.map(|(i, _)| i)
}

/// Precomputed ρ_θ(x) for every grid point and feature value.
#[derive(Debug, Clone)]
pub struct EmbeddingTable<R> {
    features: Vec<R>,
    grid: ThetaGrid<R>,
    dim: usize,
    states: Vec<CMatrix<R>>,
}

impl<R: Real> EmbeddingTable<R> {
    pub fn new<E: Embedding<R> + ?Sized>(embedding: &E, grid: &ThetaGrid<R>, features: &[R]) -> Result<Self> {
        let rows: Result<Vec<Vec<CMatrix<R>>>> = grid
            .points()
            .par_iter()
            .map(|theta| {
                features
                    .iter()
                    .map(|&x| embedding.embed(theta, x).map(DensityMatrix::into_matrix))
                    .collect()
            })
            .collect();
        let states: Vec<CMatrix<R>> = rows?.into_iter().flatten().collect();
        Ok(Self { features: features.to_vec(), grid: grid.clone(), dim: embedding.dim(), states })
    }

    #[inline]
    pub fn state(&self, grid_index: usize, feature_index: usize) -> &CMatrix<R> {
        &self.states[grid_index * self.features.len() + feature_index]
    }

    pub fn features(&self) -> &[R] {
        &self.features
    }

    /// Errors unless `features` are exactly the tabulated feature values.
    pub fn check_features(&self, features: &[R]) -> Result<()> {
        if features != self.features.as_slice() {
            return Err(Error::UnalignedSupport);
        }
        Ok(())
    }

    pub fn grid(&self) -> &ThetaGrid<R> {
        &self.grid
    }

    pub fn grid_len(&self) -> usize {
        self.grid.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Σᵢ wᵢ ρ(θ_g, xᵢ) over feature indices.
    pub fn weighted_sum(&self, grid_index: usize, weights: impl IntoIterator<Item = (usize, R)>) -> CMatrix<R> {
        let mut acc = CMatrix::zeros(self.dim);
        for (i, w) in weights {
            if w != R::zero() {
                acc.add_scaled(self.state(grid_index, i), w);
            }
        }
        acc
    }
}
