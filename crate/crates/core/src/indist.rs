//! Three indistinguishable bosons on a mode ⊗ spin single-particle space.
//!
//! Single-particle states are indexed `2·mode + spin` (6 states). Three
//! labeled particles `a, b, c` live in the 216-dimensional tensor product,
//! with `a` as the most significant factor. The GHZ spin state is attached
//! to spatial modes `a↦x, b↦y, c↦z` and then symmetrized.
//!
//! A second, occupation-number route ([`fock_build`] + [`first_quantize`])
//! builds the same state without touching the symmetrizer.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use ndarray::{Array1, Array2};

use crate::qcore::{self, MeasurementContext, Observable, Position, C64};
use crate::{Error, Result, TOLERANCE};

pub const SINGLE_DIM: usize = 6;
pub const DIM: usize = SINGLE_DIM * SINGLE_DIM * SINGLE_DIM;

/// Formal particle label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    A,
    B,
    C,
}

impl Label {
    pub const ALL: [Label; 3] = [Label::A, Label::B, Label::C];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> char {
        ['a', 'b', 'c'][self.index()]
    }

    pub fn parse(c: char) -> Result<Self> {
        match c {
            'a' => Ok(Label::A),
            'b' => Ok(Label::B),
            'c' => Ok(Label::C),
            other => Err(Error::Parse(format!("unknown label '{other}'"))),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Spin {
    Up,
    Down,
}

/// One of the six single-particle states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SingleParticleState {
    pub mode: Position,
    pub spin: Spin,
}

impl SingleParticleState {
    pub fn new(mode: Position, spin: Spin) -> Self {
        SingleParticleState { mode, spin }
    }

    pub fn flat(self) -> usize {
        2 * self.mode.index() + self.spin as usize
    }

    pub fn from_flat(k: usize) -> Option<Self> {
        let mode = Position::from_index(k / 2)?;
        let spin = if k % 2 == 0 { Spin::Up } else { Spin::Down };
        Some(SingleParticleState { mode, spin })
    }
}

/// Index of the labeled product ket `|u⟩_a |v⟩_b |w⟩_c`.
pub fn ket_index(factors: [usize; 3]) -> usize {
    factors[0] * SINGLE_DIM * SINGLE_DIM + factors[1] * SINGLE_DIM + factors[2]
}

pub fn split_index(i: usize) -> [usize; 3] {
    [
        i / (SINGLE_DIM * SINGLE_DIM),
        (i / SINGLE_DIM) % SINGLE_DIM,
        i % SINGLE_DIM,
    ]
}

/// The six permutations of three tensor factors. `perm[k]` is the slot
/// factor `k` moves to.
pub const PERMUTATIONS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

fn permute_factors(factors: [usize; 3], perm: [usize; 3]) -> [usize; 3] {
    let mut out = [0; 3];
    for k in 0..3 {
        out[perm[k]] = factors[k];
    }
    out
}

/// A normalized vector in the labeled three-particle space.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledState {
    amplitudes: Array1<C64>,
}

impl LabeledState {
    pub fn from_amplitudes(amplitudes: Array1<C64>) -> Result<Self> {
        if amplitudes.len() != DIM {
            return Err(Error::DimensionMismatch {
                expected: DIM,
                got: amplitudes.len(),
            });
        }
        let norm = norm(&amplitudes);
        if (norm - 1.0).abs() > TOLERANCE {
            return Err(Error::NotNormalized { norm });
        }
        Ok(LabeledState { amplitudes })
    }

    fn normalize(amplitudes: Array1<C64>) -> Result<Self> {
        let n = norm(&amplitudes);
        if n == 0.0 {
            return Err(Error::NotNormalized { norm: 0.0 });
        }
        Self::from_amplitudes(amplitudes.mapv(|a| a / n))
    }

    /// The product ket `|u⟩_a |v⟩_b |w⟩_c`.
    pub fn product(factors: [SingleParticleState; 3]) -> Self {
        let mut amps = Array1::zeros(DIM);
        amps[ket_index(factors.map(SingleParticleState::flat))] = C64::new(1.0, 0.0);
        LabeledState { amplitudes: amps }
    }

    pub fn amplitudes(&self) -> &Array1<C64> {
        &self.amplitudes
    }

    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &LabeledState) -> C64 {
        qcore::inner(&self.amplitudes, &other.amplitudes).expect("equal dimensions")
    }

    pub fn fidelity(&self, other: &LabeledState) -> f64 {
        self.overlap(other).norm()
    }

    /// Largest entrywise difference from `other`.
    pub fn max_diff(&self, other: &LabeledState) -> f64 {
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    /// Applies the tensor-factor permutation `perm`.
    pub fn permute(&self, perm: [usize; 3]) -> LabeledState {
        let mut out = Array1::zeros(DIM);
        for (i, &a) in self.amplitudes.iter().enumerate() {
            if a != C64::new(0.0, 0.0) {
                out[ket_index(permute_factors(split_index(i), perm))] = a;
            }
        }
        LabeledState { amplitudes: out }
    }
}

fn norm(v: &Array1<C64>) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// Matrix of the factor permutation `perm` on the 216-dim space.
pub fn permutation_operator(perm: [usize; 3]) -> Observable {
    let mut m = Array2::zeros((DIM, DIM));
    for col in 0..DIM {
        let row = ket_index(permute_factors(split_index(col), perm));
        m[[row, col]] = C64::new(1.0, 0.0);
    }
    Observable::from_matrix_unchecked(m).expect("square")
}

/// `S = (1/6) Σ_π P_π`, the projector onto the bosonic subspace.
pub fn symmetrizer() -> Observable {
    let mut m = Array2::zeros((DIM, DIM));
    for perm in PERMUTATIONS {
        m += permutation_operator(perm).matrix();
    }
    m.mapv_inplace(|z| z / 6.0);
    Observable::new(m).expect("symmetrizer is Hermitian")
}

/// Swaps the tensor factors carried by labels `i` and `j`.
pub fn exchange(state: &LabeledState, i: Label, j: Label) -> Result<LabeledState> {
    if i == j {
        return Err(Error::SameLabel);
    }
    let mut perm = [0, 1, 2];
    perm.swap(i.index(), j.index());
    Ok(state.permute(perm))
}

/// The unsymmetrized GHZ term `|↑x⟩_a|↑y⟩_b|↑z⟩_c` (or all-down).
fn ghz_product_term(spin: Spin) -> [SingleParticleState; 3] {
    Position::ALL.map(|p| SingleParticleState::new(p, spin))
}

/// Symmetrized three-boson GHZ state: `S` applied to
/// `(|↑↑↑⟩ − |↓↓↓⟩)/√2 ⊗ |ψ_x⟩_a|ψ_y⟩_b|ψ_z⟩_c`, then normalized.
pub fn build_identity_state() -> LabeledState {
    let up = LabeledState::product(ghz_product_term(Spin::Up));
    let down = LabeledState::product(ghz_product_term(Spin::Down));
    let raw = (up.amplitudes - down.amplitudes).mapv(|a| a * FRAC_1_SQRT_2);
    let symmetrized = symmetrizer().apply(&raw).expect("dimension 216");
    LabeledState::normalize(symmetrized).expect("nonzero symmetric component")
}

/// Amplitudes of the state on the six label permutations of the
/// unsymmetrized all-up product term, in [`PERMUTATIONS`] order.
pub fn permutation_term_amplitudes(state: &LabeledState) -> [C64; 6] {
    let base = ghz_product_term(Spin::Up).map(SingleParticleState::flat);
    PERMUTATIONS.map(|perm| state.amplitudes[ket_index(permute_factors(base, perm))])
}

/// `Σ_k (|p⟩⟨p| ⊗ O)_k`: the spin operator `spin_op` applied to whichever
/// particle sits at `position`, summed over the three labels.
pub fn symmetrized_local_observable(spin_op: &Array2<C64>, position: Position) -> Result<Observable> {
    let spin = Observable::new(spin_op.clone())?;
    if spin.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: spin.dim(),
        });
    }
    let mut projector = Array2::zeros((3, 3));
    projector[[position.index(), position.index()]] = C64::new(1.0, 0.0);
    let single = qcore::kron(&projector, spin.matrix());
    let eye: Array2<C64> = Array2::eye(SINGLE_DIM);

    let mut total = Array2::zeros((DIM, DIM));
    for k in 0..3 {
        let factors: [&Array2<C64>; 3] = std::array::from_fn(|f| if f == k { &single } else { &eye });
        total += &qcore::kron(&qcore::kron(factors[0], factors[1]), factors[2]);
    }
    Observable::new(total)
}

/// Product of the three symmetrized single-position observables of a
/// context. They commute, so the order of the product is immaterial.
pub fn context_observable(ctx: &MeasurementContext) -> Result<Observable> {
    ctx.validate()?;
    let mut acc = Observable::identity(DIM);
    for slot in &ctx.slots {
        let local = symmetrized_local_observable(&slot.axis.pauli(), slot.position)?;
        acc = acc.compose(&local)?;
    }
    Observable::new(acc.matrix().clone())
}

pub fn expectation(state: &LabeledState, obs: &Observable) -> Result<f64> {
    qcore::expectation_raw(&state.amplitudes, obs)
}

/// Occupation numbers over the six single-particle states.
pub type Occupation = [u8; SINGLE_DIM];

/// A superposition of occupation-number configurations.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FockState {
    amplitudes: BTreeMap<Occupation, C64>,
}

impl FockState {
    pub fn vacuum() -> Self {
        let mut amplitudes = BTreeMap::new();
        amplitudes.insert([0; SINGLE_DIM], C64::new(1.0, 0.0));
        FockState { amplitudes }
    }

    pub fn amplitudes(&self) -> &BTreeMap<Occupation, C64> {
        &self.amplitudes
    }

    /// `a†_k` with `a†|n⟩ = √(n+1) |n+1⟩`.
    pub fn create(&self, state: SingleParticleState) -> FockState {
        let k = state.flat();
        let mut out = BTreeMap::new();
        for (occ, &amp) in &self.amplitudes {
            let mut next = *occ;
            next[k] += 1;
            let factor = f64::from(next[k]).sqrt();
            *out.entry(next).or_insert(C64::new(0.0, 0.0)) += amp * factor;
        }
        FockState { amplitudes: out }
    }

    /// Applies creation operators right to left, as written.
    pub fn create_all(&self, ops: &[SingleParticleState]) -> FockState {
        ops.iter().rev().fold(self.clone(), |acc, &s| acc.create(s))
    }

    pub fn sub(&self, other: &FockState) -> FockState {
        let mut out = self.amplitudes.clone();
        for (occ, &amp) in &other.amplitudes {
            *out.entry(*occ).or_insert(C64::new(0.0, 0.0)) -= amp;
        }
        out.retain(|_, a| a.norm() > 0.0);
        FockState { amplitudes: out }
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalized(&self) -> FockState {
        let n = self.norm();
        FockState {
            amplitudes: self.amplitudes.iter().map(|(k, &a)| (*k, a / n)).collect(),
        }
    }

    /// Particle number shared by every occupied configuration, if any.
    pub fn particle_number(&self) -> Option<u32> {
        let mut counts = self
            .amplitudes
            .keys()
            .map(|occ| occ.iter().map(|&n| u32::from(n)).sum::<u32>());
        let first = counts.next()?;
        counts.all(|n| n == first).then_some(first)
    }
}

/// `(a†_{↑x} a†_{↑y} a†_{↑z} − a†_{↓z} a†_{↓y} a†_{↓x}) |vac⟩`, normalized.
pub fn fock_build() -> FockState {
    let vac = FockState::vacuum();
    let up = vac.create_all(&ghz_product_term(Spin::Up));
    let mut down_ops = ghz_product_term(Spin::Down);
    down_ops.reverse();
    let down = vac.create_all(&down_ops);
    up.sub(&down).normalized()
}

fn factorial(n: u8) -> f64 {
    (1..=u32::from(n)).map(f64::from).product()
}

/// Maps each occupation configuration to its normalized symmetric labeled
/// ket `(N! Π n_k!)^{-1/2} Σ_π P_π |u₁u₂u₃⟩`.
pub fn first_quantize(f: &FockState) -> Result<LabeledState> {
    let mut amps = Array1::zeros(DIM);
    for (occ, &amp) in f.amplitudes() {
        let mut listed = Vec::with_capacity(3);
        for (k, &n) in occ.iter().enumerate() {
            listed.extend(std::iter::repeat(k).take(usize::from(n)));
        }
        if listed.len() != 3 {
            return Err(Error::DimensionMismatch {
                expected: 3,
                got: listed.len(),
            });
        }
        let base = [listed[0], listed[1], listed[2]];
        let weight = 1.0 / (6.0 * occ.iter().map(|&n| factorial(n)).product::<f64>()).sqrt();
        for perm in PERMUTATIONS {
            amps[ket_index(permute_factors(base, perm))] += amp * weight;
        }
    }
    LabeledState::from_amplitudes(amps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{make_ghz, pauli_context_operator, Axis, ContextTable};

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= TOLERANCE
    }

    /// Number of multisets of size 3 drawn from 6 states, counted directly.
    fn symmetric_dimension_oracle() -> usize {
        let mut count = 0;
        for i in 0..SINGLE_DIM {
            for j in i..SINGLE_DIM {
                for _k in j..SINGLE_DIM {
                    count += 1;
                }
            }
        }
        count
    }

    /// The literal second form: spin GHZ on labels ⊗ (1/√6)·Σ spatial perms.
    fn spin_times_spatial_form() -> LabeledState {
        let mut amps = Array1::zeros(DIM);
        for (spin_bits, sign) in [(0usize, 1.0), (1usize, -1.0)] {
            for perm in PERMUTATIONS {
                let modes = permute_factors([0, 1, 2], perm);
                let factors = modes.map(|m| 2 * m + spin_bits);
                amps[ket_index(factors)] += C64::new(sign * FRAC_1_SQRT_2 / 6f64.sqrt(), 0.0);
            }
        }
        LabeledState::from_amplitudes(amps).unwrap()
    }

    #[test]
    fn flat_indexing_is_bijective() {
        let mut seen = [false; SINGLE_DIM];
        for k in 0..SINGLE_DIM {
            let s = SingleParticleState::from_flat(k).unwrap();
            assert_eq!(s.flat(), k);
            seen[k] = true;
        }
        assert!(seen.iter().all(|&b| b));
        assert!(SingleParticleState::from_flat(6).is_none());
    }

    #[test]
    fn symmetrizer_is_projector() {
        let s = symmetrizer();
        let s2 = s.compose(&s).unwrap();
        assert!(qcore::max_abs_diff(s2.matrix(), s.matrix()) < TOLERANCE);
        assert!(s.hermitian_deviation() < TOLERANCE);
        let trace: C64 = s.matrix().diag().sum();
        assert!(close(trace.re, symmetric_dimension_oracle() as f64));
        assert_eq!(symmetric_dimension_oracle(), 56);
    }

    #[test]
    fn symmetrizer_on_distinct_product() {
        let u = [0usize, 3, 5];
        let ket = LabeledState::product(u.map(|k| SingleParticleState::from_flat(k).unwrap()));
        let out = symmetrizer().apply(ket.amplitudes()).unwrap();
        for perm in PERMUTATIONS {
            let a = out[ket_index(permute_factors(u, perm))];
            assert!((a - C64::new(1.0 / 6.0, 0.0)).norm() < TOLERANCE);
        }
        let nonzero = out.iter().filter(|a| a.norm() > TOLERANCE).count();
        assert_eq!(nonzero, 6);
    }

    #[test]
    fn identity_state_is_symmetric() {
        let psi = build_identity_state();
        let s_psi = symmetrizer().apply(psi.amplitudes()).unwrap();
        let s_psi = LabeledState::from_amplitudes(s_psi).unwrap();
        assert!(s_psi.max_diff(&psi) < TOLERANCE);
        for perm in PERMUTATIONS {
            assert!(close(psi.permute(perm).fidelity(&psi), 1.0));
            let via_matrix = permutation_operator(perm).apply(psi.amplitudes()).unwrap();
            let via_matrix = LabeledState::from_amplitudes(via_matrix).unwrap();
            assert!(via_matrix.max_diff(&psi) < TOLERANCE);
        }
    }

    #[test]
    fn identity_state_matches_spin_times_spatial_form() {
        assert!(build_identity_state().max_diff(&spin_times_spatial_form()) < TOLERANCE);
    }

    #[test]
    fn exchanges() {
        let psi = build_identity_state();
        for (i, j) in [(Label::A, Label::B), (Label::A, Label::C), (Label::B, Label::C)] {
            let swapped = exchange(&psi, i, j).unwrap();
            assert!(close(swapped.fidelity(&psi), 1.0));
            assert_eq!(exchange(&swapped, i, j).unwrap(), psi);
        }
        assert_eq!(exchange(&psi, Label::B, Label::B), Err(Error::SameLabel));

        let u = SingleParticleState::new(Position::X, Spin::Up);
        let v = SingleParticleState::new(Position::Y, Spin::Down);
        let w = SingleParticleState::new(Position::Z, Spin::Up);
        let swapped = exchange(&LabeledState::product([u, v, w]), Label::A, Label::B).unwrap();
        assert_eq!(swapped, LabeledState::product([v, u, w]));
    }

    #[test]
    fn permutation_terms_have_equal_magnitude() {
        let amps = permutation_term_amplitudes(&build_identity_state());
        let expected = 1.0 / 12f64.sqrt();
        for a in amps {
            assert!(close(a.norm(), expected));
        }
    }

    #[test]
    fn symmetrized_observables_commute_with_permutations() {
        for axis in Axis::ALL {
            for pos in Position::ALL {
                let o = symmetrized_local_observable(&axis.pauli(), pos).unwrap();
                for perm in PERMUTATIONS {
                    assert!(o.commutator_norm(&permutation_operator(perm)).unwrap() < TOLERANCE);
                }
            }
        }
    }

    #[test]
    fn symmetrized_observables_at_distinct_positions_commute() {
        let ops: Vec<_> = Position::ALL
            .iter()
            .flat_map(|&p| Axis::ALL.map(|a| (p, symmetrized_local_observable(&a.pauli(), p).unwrap())))
            .collect();
        for (p, a) in &ops {
            for (q, b) in &ops {
                if p != q {
                    assert!(a.commutator_norm(b).unwrap() < TOLERANCE);
                }
            }
        }
    }

    #[test]
    fn context_expectations_match_qubit_kernel() {
        let psi = build_identity_state();
        let ghz = make_ghz();
        for ctx in ContextTable::ghz().rows() {
            let lifted = expectation(&psi, &context_observable(ctx).unwrap()).unwrap();
            let direct = qcore::expectation(&ghz, &pauli_context_operator(ctx).unwrap()).unwrap();
            assert!(close(lifted, direct));
            assert!(close(lifted, f64::from(ctx.target.value())));
        }
    }

    #[test]
    fn non_hermitian_spin_op_rejected() {
        let mut m = Array2::zeros((2, 2));
        m[[0, 1]] = C64::new(1.0, 0.0);
        assert!(symmetrized_local_observable(&m, Position::X).is_err());
    }

    #[test]
    fn fock_build_configurations() {
        let f = fock_build();
        assert_eq!(f.particle_number(), Some(3));
        assert!(close(f.norm(), 1.0));
        let entries: Vec<_> = f.amplitudes().iter().collect();
        assert_eq!(entries.len(), 2);
        let up: Occupation = [1, 0, 1, 0, 1, 0];
        let down: Occupation = [0, 1, 0, 1, 0, 1];
        assert!((f.amplitudes()[&up] - C64::new(FRAC_1_SQRT_2, 0.0)).norm() < TOLERANCE);
        assert!((f.amplitudes()[&down] - C64::new(-FRAC_1_SQRT_2, 0.0)).norm() < TOLERANCE);
    }

    #[test]
    fn creation_operator_bookkeeping() {
        let s = SingleParticleState::new(Position::X, Spin::Up);
        let f = FockState::vacuum().create(s).create(s);
        // a†a†|0⟩ = √2 |2⟩
        assert!(close(f.amplitudes()[&[2, 0, 0, 0, 0, 0]].re, 2f64.sqrt()));
    }

    #[test]
    fn first_quantize_distinct_configuration() {
        let occ: Occupation = [1, 0, 0, 1, 1, 0];
        let f = FockState {
            amplitudes: BTreeMap::from([(occ, C64::new(1.0, 0.0))]),
        };
        let psi = first_quantize(&f).unwrap();
        let nonzero: Vec<_> = psi.amplitudes().iter().filter(|a| a.norm() > 0.0).collect();
        assert_eq!(nonzero.len(), 6);
        for a in nonzero {
            assert!(close(a.re, 1.0 / 6f64.sqrt()));
        }
    }

    #[test]
    fn first_quantize_doubly_occupied() {
        let occ: Occupation = [2, 0, 0, 0, 1, 0];
        let f = FockState {
            amplitudes: BTreeMap::from([(occ, C64::new(1.0, 0.0))]),
        };
        let psi = first_quantize(&f).unwrap();
        let nonzero: Vec<_> = psi.amplitudes().iter().filter(|a| a.norm() > 0.0).collect();
        assert_eq!(nonzero.len(), 3);
        for a in nonzero {
            assert!(close(a.re, 1.0 / 3f64.sqrt()));
        }
    }

    #[test]
    fn first_quantize_rejects_wrong_particle_number() {
        let f = FockState::vacuum();
        assert!(first_quantize(&f).is_err());
    }

    #[test]
    fn second_quantized_oracle_agrees() {
        let via_fock = first_quantize(&fock_build()).unwrap();
        let direct = build_identity_state();
        assert!(close(via_fock.fidelity(&direct), 1.0));
    }
}
