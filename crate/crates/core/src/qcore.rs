//! Dense three-qubit kernel: the GHZ state and its four Pauli contexts.
//!
//! Basis convention: `|↑⟩ = (1, 0)`, `|↓⟩ = (0, 1)`. Qubits are ordered
//! `x, y, z` with `x` as the most significant index bit, unless an explicit
//! [`QubitOrder`] is supplied.

use std::fmt;
use std::ops::Mul;

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result, TOLERANCE};

pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

/// A site at which one particle is localized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Position {
    X,
    Y,
    Z,
}

impl Position {
    pub const ALL: [Position; 3] = [Position::X, Position::Y, Position::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn name(self) -> char {
        ['x', 'y', 'z'][self.index()]
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// Spin measurement direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    pub const ALL: [Axis; 2] = [Axis::X, Axis::Y];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn symbol(self) -> char {
        match self {
            Axis::X => 'X',
            Axis::Y => 'Y',
        }
    }

    pub fn parse(c: char) -> Result<Self> {
        match c {
            'X' | 'x' => Ok(Axis::X),
            'Y' | 'y' => Ok(Axis::Y),
            other => Err(Error::Parse(format!("unknown axis '{other}'"))),
        }
    }

    /// The 2×2 Pauli matrix for this axis.
    pub fn pauli(self) -> Array2<C64> {
        match self {
            Axis::X => Array2::from_shape_vec((2, 2), vec![ZERO, ONE, ONE, ZERO]).unwrap(),
            Axis::Y => Array2::from_shape_vec((2, 2), vec![ZERO, -I, I, ZERO]).unwrap(),
        }
    }
}

/// A measurement outcome or row target, restricted to ±1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_value(v: i64) -> Result<Self> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(Error::InvalidTarget(other)),
        }
    }

    /// GF(2) encoding: bit set means −1.
    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn bit(self) -> bool {
        self == Sign::Minus
    }

    pub fn flip(self) -> Self {
        Self::from_bit(!self.bit())
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_bit(self.bit() ^ rhs.bit())
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Plus => f.write_str("+1"),
            Sign::Minus => f.write_str("-1"),
        }
    }
}

impl Serialize for Sign {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i8(self.value())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = i64::deserialize(d)?;
        Sign::from_value(v).map_err(serde::de::Error::custom)
    }
}

/// One observable in a context: a Pauli axis measured at a position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Slot {
    pub position: Position,
    pub axis: Axis,
}

impl Slot {
    pub fn new(position: Position, axis: Axis) -> Self {
        Slot { position, axis }
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.axis.symbol(), self.position.name())
    }
}

/// Three jointly measured single-site observables and the product they
/// are required to yield.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasurementContext {
    pub slots: [Slot; 3],
    pub target: Sign,
}

impl MeasurementContext {
    pub fn new(slots: [Slot; 3], target: Sign) -> Result<Self> {
        let ctx = MeasurementContext { slots, target };
        ctx.validate()?;
        Ok(ctx)
    }

    /// Builds a context from axis letters read in position order `x, y, z`,
    /// e.g. `"XYY"`.
    pub fn from_axes(axes: &str, target: Sign) -> Result<Self> {
        let chars: Vec<char> = axes.chars().collect();
        if chars.len() != 3 {
            return Err(Error::Parse(format!("context '{axes}' must name 3 axes")));
        }
        let mut slots = [Slot::new(Position::X, Axis::X); 3];
        for (k, c) in chars.into_iter().enumerate() {
            slots[k] = Slot::new(Position::ALL[k], Axis::parse(c)?);
        }
        Self::new(slots, target)
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = [false; 3];
        for slot in &self.slots {
            let k = slot.position.index();
            if seen[k] {
                return Err(Error::MalformedContext(format!(
                    "position {} appears twice",
                    slot.position
                )));
            }
            seen[k] = true;
        }
        Ok(())
    }

    /// Axis measured at `position`, if any slot sits there.
    pub fn axis_at(&self, position: Position) -> Option<Axis> {
        self.slots
            .iter()
            .find(|s| s.position == position)
            .map(|s| s.axis)
    }

    /// Axis letters in position order, e.g. `"XYY"`.
    pub fn axes_name(&self) -> String {
        Position::ALL
            .iter()
            .map(|&p| self.axis_at(p).map_or('I', Axis::symbol))
            .collect()
    }
}

impl fmt::Display for MeasurementContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.slots.iter().map(Slot::to_string).collect();
        write!(f, "{} -> {}", names.join(" "), self.target)
    }
}

/// An ordered list of measurement contexts with targets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextTable {
    rows: Vec<MeasurementContext>,
}

impl ContextTable {
    pub fn new(rows: Vec<MeasurementContext>) -> Result<Self> {
        for row in &rows {
            row.validate()?;
        }
        Ok(ContextTable { rows })
    }

    pub fn empty() -> Self {
        ContextTable { rows: Vec::new() }
    }

    /// The GHZ rows `XYY → +1`, `YXY → +1`, `YYX → +1`, `XXX → −1`.
    pub fn ghz() -> Self {
        Self::ghz_with_targets([Sign::Plus, Sign::Plus, Sign::Plus, Sign::Minus])
    }

    /// The four GHZ contexts with arbitrary targets.
    pub fn ghz_with_targets(targets: [Sign; 4]) -> Self {
        let rows = ["XYY", "YXY", "YYX", "XXX"]
            .iter()
            .zip(targets)
            .map(|(axes, t)| MeasurementContext::from_axes(axes, t).expect("static context"))
            .collect();
        ContextTable { rows }
    }

    /// All sixteen target-sign patterns of the GHZ contexts, in binary order
    /// (bit `k` of the pattern index set means row `k` targets −1).
    pub fn ghz_sign_patterns() -> impl Iterator<Item = ContextTable> {
        (0u8..16).map(|pattern| {
            let mut targets = [Sign::Plus; 4];
            for (k, t) in targets.iter_mut().enumerate() {
                *t = Sign::from_bit(pattern >> k & 1 == 1);
            }
            Self::ghz_with_targets(targets)
        })
    }

    pub fn rows(&self) -> &[MeasurementContext] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn targets(&self) -> Vec<Sign> {
        self.rows.iter().map(|r| r.target).collect()
    }
}

/// Assignment of positions to index bits. `shift(p)` is the bit position
/// (0 = least significant) carrying the qubit at `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QubitOrder {
    shifts: [u32; 3],
}

impl Default for QubitOrder {
    fn default() -> Self {
        QubitOrder { shifts: [2, 1, 0] }
    }
}

impl QubitOrder {
    pub fn new(shifts: [u32; 3]) -> Result<Self> {
        let mut sorted = shifts;
        sorted.sort_unstable();
        if sorted != [0, 1, 2] {
            return Err(Error::Parse(format!("{shifts:?} is not a permutation of bits")));
        }
        Ok(QubitOrder { shifts })
    }

    /// All six orders.
    pub fn all() -> Vec<QubitOrder> {
        let perms = [
            [2, 1, 0],
            [2, 0, 1],
            [1, 2, 0],
            [1, 0, 2],
            [0, 2, 1],
            [0, 1, 2],
        ];
        perms.iter().map(|&shifts| QubitOrder { shifts }).collect()
    }

    pub fn shift(&self, position: Position) -> u32 {
        self.shifts[position.index()]
    }

    /// Basis index of the product ket with `bits[p]` as the spin at `p`
    /// (`false` = up).
    pub fn index_of(&self, bits: [bool; 3]) -> usize {
        Position::ALL
            .iter()
            .filter(|p| bits[p.index()])
            .map(|&p| 1usize << self.shift(p))
            .sum()
    }
}

/// A normalized pure state of `n` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: Array1<C64>,
}

impl StateVector {
    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Result<Self> {
        let dim = amplitudes.len();
        if !dim.is_power_of_two() {
            return Err(Error::DimensionMismatch {
                expected: dim.next_power_of_two(),
                got: dim,
            });
        }
        let state = StateVector {
            amplitudes: Array1::from(amplitudes),
        };
        let norm = state.norm();
        if (norm - 1.0).abs() > TOLERANCE {
            return Err(Error::NotNormalized { norm });
        }
        Ok(state)
    }

    /// Computational basis ket `|index⟩` on `qubits` qubits.
    pub fn basis(qubits: u32, index: usize) -> Result<Self> {
        let dim = 1usize << qubits;
        if index >= dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: index,
            });
        }
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Self::from_amplitudes(amps)
    }

    pub fn amplitudes(&self) -> &Array1<C64> {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn qubits(&self) -> u32 {
        self.dim().trailing_zeros()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn with_global_phase(&self, theta: f64) -> Self {
        let phase = C64::from_polar(1.0, theta);
        StateVector {
            amplitudes: self.amplitudes.mapv(|a| a * phase),
        }
    }

    /// `|⟨self|other⟩|`.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(inner(&self.amplitudes, &other.amplitudes)?.norm())
    }
}

/// A dense complex square operator.
#[derive(Clone, Debug, PartialEq)]
pub struct Observable {
    matrix: Array2<C64>,
}

impl Observable {
    /// Wraps a Hermitian matrix.
    pub fn new(matrix: Array2<C64>) -> Result<Self> {
        let obs = Self::from_matrix_unchecked(matrix)?;
        let deviation = obs.hermitian_deviation();
        if deviation > TOLERANCE {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(obs)
    }

    /// Wraps any square matrix without the Hermiticity check.
    pub fn from_matrix_unchecked(matrix: Array2<C64>) -> Result<Self> {
        let (r, c) = matrix.dim();
        if r != c {
            return Err(Error::DimensionMismatch {
                expected: r,
                got: c,
            });
        }
        Ok(Observable { matrix })
    }

    pub fn identity(dim: usize) -> Self {
        Observable {
            matrix: Array2::eye(dim),
        }
    }

    pub fn matrix(&self) -> &Array2<C64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn hermitian_deviation(&self) -> f64 {
        let adjoint = self.matrix.t().mapv(|z| z.conj());
        max_abs_diff(&self.matrix, &adjoint)
    }

    pub fn apply(&self, amplitudes: &Array1<C64>) -> Result<Array1<C64>> {
        if amplitudes.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: amplitudes.len(),
            });
        }
        Ok(self.matrix.dot(amplitudes))
    }

    /// Matrix product `self · other`.
    pub fn compose(&self, other: &Observable) -> Result<Observable> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(Observable {
            matrix: self.matrix.dot(&other.matrix),
        })
    }

    /// Frobenius norm of `[self, other]`.
    pub fn commutator_norm(&self, other: &Observable) -> Result<f64> {
        let ab = self.compose(other)?;
        let ba = other.compose(self)?;
        Ok((&ab.matrix - &ba.matrix)
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    /// Largest entrywise deviation between `self²` and the identity.
    pub fn involution_deviation(&self) -> f64 {
        let sq = self.matrix.dot(&self.matrix);
        max_abs_diff(&sq, &Array2::eye(self.dim()))
    }
}

pub(crate) fn max_abs_diff(a: &Array2<C64>, b: &Array2<C64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub(crate) fn inner(a: &Array1<C64>, b: &Array1<C64>) -> Result<C64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    Ok(a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum())
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &Array2<C64>, b: &Array2<C64>) -> Array2<C64> {
    let (ar, ac) = a.dim();
    let (br, bc) = b.dim();
    let mut out = Array2::zeros((ar * br, ac * bc));
    for ((i, j), &x) in a.indexed_iter() {
        if x == ZERO {
            continue;
        }
        for ((k, l), &y) in b.indexed_iter() {
            out[[i * br + k, j * bc + l]] = x * y;
        }
    }
    out
}

/// `(|↑↑↑⟩ − |↓↓↓⟩)/√2` in the default qubit order.
pub fn make_ghz() -> StateVector {
    make_ghz_in(QubitOrder::default())
}

pub fn make_ghz_in(order: QubitOrder) -> StateVector {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut amps = vec![ZERO; 8];
    amps[order.index_of([false; 3])] = C64::new(h, 0.0);
    amps[order.index_of([true; 3])] = C64::new(-h, 0.0);
    StateVector::from_amplitudes(amps).expect("GHZ state is normalized")
}

/// Tensor product of the context's Pauli factors, identity on positions the
/// context does not touch.
pub fn pauli_context_operator(ctx: &MeasurementContext) -> Result<Observable> {
    pauli_context_operator_in(ctx, QubitOrder::default())
}

pub fn pauli_context_operator_in(ctx: &MeasurementContext, order: QubitOrder) -> Result<Observable> {
    ctx.validate()?;
    // Kronecker factors run from the most significant bit down.
    let mut by_shift: [Array2<C64>; 3] = std::array::from_fn(|_| Array2::eye(2));
    for slot in &ctx.slots {
        by_shift[order.shift(slot.position) as usize] = slot.axis.pauli();
    }
    let m = kron(&kron(&by_shift[2], &by_shift[1]), &by_shift[0]);
    Observable::new(m)
}

/// `⟨ψ|M|ψ⟩`, which must be real to within tolerance.
pub fn expectation(state: &StateVector, obs: &Observable) -> Result<f64> {
    expectation_raw(&state.amplitudes, obs)
}

pub(crate) fn expectation_raw(amplitudes: &Array1<C64>, obs: &Observable) -> Result<f64> {
    let m_psi = obs.apply(amplitudes)?;
    let value = inner(amplitudes, &m_psi)?;
    if value.im.abs() > TOLERANCE {
        return Err(Error::ComplexExpectation { imag: value.im });
    }
    Ok(value.re)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruthRow {
    pub context: MeasurementContext,
    /// Raw computed expectation; not rounded.
    pub measured: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruthTable {
    pub rows: Vec<TruthRow>,
}

impl TruthTable {
    pub fn measured(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.measured).collect()
    }

    pub fn contexts(&self) -> ContextTable {
        ContextTable {
            rows: self.rows.iter().map(|r| r.context).collect(),
        }
    }
}

/// Evaluates every GHZ context on the GHZ state and checks the result
/// against the row's target.
pub fn ghz_truth_table() -> Result<TruthTable> {
    ghz_truth_table_in(QubitOrder::default())
}

pub fn ghz_truth_table_in(order: QubitOrder) -> Result<TruthTable> {
    let state = make_ghz_in(order);
    let table = ContextTable::ghz();
    let mut rows = Vec::with_capacity(table.len());
    for ctx in table.rows() {
        let op = pauli_context_operator_in(ctx, order)?;
        let measured = expectation(&state, &op)?;
        let expected = f64::from(ctx.target.value());
        if (measured - expected).abs() > TOLERANCE {
            return Err(Error::Inconsistent {
                what: format!("<{}>", ctx.axes_name()),
                computed: measured,
                expected,
            });
        }
        rows.push(TruthRow {
            context: *ctx,
            measured,
        });
    }
    Ok(TruthTable { rows })
}
