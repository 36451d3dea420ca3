//! Hidden-variable model families and their exhaustive classification.
//!
//! Every engine takes an arbitrary [`ContextTable`] and walks its whole
//! search space in ascending packed-integer order, so solution lists come
//! out sorted and reproducible. A separate GF(2) elimination answers the
//! noncontextual question algebraically.

use std::fmt;
use std::str::FromStr;

use crate::indist::Label;
use crate::qcore::{Axis, ContextTable, MeasurementContext, Position, Sign, Slot};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelKind {
    /// One value per (position, axis), shared by every context.
    Noncontextual,
    /// One value per (row, slot).
    Contextual,
    /// Label-bound values; the label sitting at each position may change
    /// from row to row.
    Identity,
    /// Label-bound values with one arrangement shared by every row.
    IdentityFixed,
    /// One arrangement shared by every row; label-bound values may change
    /// from row to row.
    Hybrid,
}

impl ModelKind {
    pub const ALL: [ModelKind; 5] = [
        ModelKind::Noncontextual,
        ModelKind::Contextual,
        ModelKind::Identity,
        ModelKind::IdentityFixed,
        ModelKind::Hybrid,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Noncontextual => "noncontextual",
            ModelKind::Contextual => "contextual",
            ModelKind::Identity => "identity",
            ModelKind::IdentityFixed => "identity-fixed",
            ModelKind::Hybrid => "hybrid",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ModelKind::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown model '{s}'")))
    }
}

/// Which label occupies each position, written in one-line notation
/// (`"bac"` puts `b` at `x`, `a` at `y`, `c` at `z`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arrangement([Label; 3]);

impl Arrangement {
    pub const IDENTITY: Arrangement = Arrangement([Label::A, Label::B, Label::C]);

    /// All six arrangements in lexicographic order of their names.
    pub const ALL: [Arrangement; 6] = [
        Arrangement([Label::A, Label::B, Label::C]),
        Arrangement([Label::A, Label::C, Label::B]),
        Arrangement([Label::B, Label::A, Label::C]),
        Arrangement([Label::B, Label::C, Label::A]),
        Arrangement([Label::C, Label::A, Label::B]),
        Arrangement([Label::C, Label::B, Label::A]),
    ];

    pub fn new(labels: [Label; 3]) -> Result<Self> {
        let mut seen = [false; 3];
        for l in labels {
            if std::mem::replace(&mut seen[l.index()], true) {
                return Err(Error::Parse(format!("label {l} used twice")));
            }
        }
        Ok(Arrangement(labels))
    }

    pub fn label_at(self, position: Position) -> Label {
        self.0[position.index()]
    }

    pub fn labels(self) -> [Label; 3] {
        self.0
    }

    /// Applies a global relabeling `a ↦ σ[a]`.
    pub fn relabel(self, sigma: Arrangement) -> Arrangement {
        Arrangement(self.0.map(|l| sigma.0[l.index()]))
    }
}

impl fmt::Display for Arrangement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in self.0 {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Arrangement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let labels: Vec<Label> = s.chars().map(Label::parse).collect::<Result<_>>()?;
        let labels: [Label; 3] = labels
            .try_into()
            .map_err(|_| Error::Parse(format!("arrangement '{s}' must have 3 labels")))?;
        Arrangement::new(labels)
    }
}

/// Values bound to (position, axis); bit `2·position + axis` set means −1.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NoncontextualValues {
    bits: u8,
}

impl NoncontextualValues {
    pub const SPACE: u64 = 1 << 6;

    pub fn from_bits(bits: u8) -> Self {
        NoncontextualValues { bits: bits & 0x3f }
    }

    pub fn bits(self) -> u8 {
        self.bits
    }

    fn bit(position: Position, axis: Axis) -> u8 {
        1 << (2 * position.index() + axis.index())
    }

    pub fn get(self, position: Position, axis: Axis) -> Sign {
        Sign::from_bit(self.bits & Self::bit(position, axis) != 0)
    }

    pub fn with(mut self, position: Position, axis: Axis, value: Sign) -> Self {
        let b = Self::bit(position, axis);
        if value.bit() {
            self.bits |= b;
        } else {
            self.bits &= !b;
        }
        self
    }
}

/// Values bound to (label, axis); bit `2·label + axis` set means −1.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabelValues {
    bits: u8,
}

impl LabelValues {
    pub const SPACE: u64 = 1 << 6;

    pub fn from_bits(bits: u8) -> Self {
        LabelValues { bits: bits & 0x3f }
    }

    pub fn bits(self) -> u8 {
        self.bits
    }

    fn bit(label: Label, axis: Axis) -> u8 {
        1 << (2 * label.index() + axis.index())
    }

    pub fn get(self, label: Label, axis: Axis) -> Sign {
        Sign::from_bit(self.bits & Self::bit(label, axis) != 0)
    }

    pub fn with(mut self, label: Label, axis: Axis, value: Sign) -> Self {
        let b = Self::bit(label, axis);
        if value.bit() {
            self.bits |= b;
        } else {
            self.bits &= !b;
        }
        self
    }

    /// Moves every value from label `l` to `σ[l]`.
    pub fn relabel(self, sigma: Arrangement) -> Self {
        let mut out = LabelValues::default();
        for l in Label::ALL {
            for axis in Axis::ALL {
                out = out.with(sigma.0[l.index()], axis, self.get(l, axis));
            }
        }
        out
    }
}

/// One value per (row, slot).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ContextualValues {
    pub rows: Vec<[Sign; 3]>,
}

impl ContextualValues {
    /// Unpacks `bits` with row 0, slot 0 as the most significant bit.
    pub fn from_bits(bits: u64, rows: usize) -> Self {
        let shift = |r: usize, k: usize| 3 * (rows - 1 - r) + (2 - k);
        ContextualValues {
            rows: (0..rows)
                .map(|r| std::array::from_fn(|k| Sign::from_bit(bits >> shift(r, k) & 1 == 1)))
                .collect(),
        }
    }

    /// The contextual assignment read off a noncontextual one.
    pub fn from_noncontextual(values: NoncontextualValues, table: &ContextTable) -> Self {
        ContextualValues {
            rows: table
                .rows()
                .iter()
                .map(|ctx| ctx.slots.map(|s| values.get(s.position, s.axis)))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IdentityAssignment {
    /// One arrangement per row.
    pub arrangements: Vec<Arrangement>,
    pub values: LabelValues,
}

impl IdentityAssignment {
    /// Applies a global relabeling of `a, b, c` to both the arrangements
    /// and the bound values. Predictions are unchanged.
    pub fn relabel(&self, sigma: Arrangement) -> Self {
        IdentityAssignment {
            arrangements: self.arrangements.iter().map(|a| a.relabel(sigma)).collect(),
            values: self.values.relabel(sigma),
        }
    }

    /// Position-indexed values seen in row `row`.
    pub fn position_values(&self, row: usize) -> Option<NoncontextualValues> {
        let arr = *self.arrangements.get(row)?;
        let mut out = NoncontextualValues::default();
        for p in Position::ALL {
            for axis in Axis::ALL {
                out = out.with(p, axis, self.values.get(arr.label_at(p), axis));
            }
        }
        Some(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HybridAssignment {
    pub arrangement: Arrangement,
    /// Label-bound values per row. Values no row consumes are +1.
    pub values: Vec<LabelValues>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Assignment {
    Noncontextual(NoncontextualValues),
    Contextual(ContextualValues),
    Identity(IdentityAssignment),
    Hybrid(HybridAssignment),
}

impl Assignment {
    pub fn kind(&self) -> ModelKind {
        match self {
            Assignment::Noncontextual(_) => ModelKind::Noncontextual,
            Assignment::Contextual(_) => ModelKind::Contextual,
            Assignment::Identity(_) => ModelKind::Identity,
            Assignment::Hybrid(_) => ModelKind::Hybrid,
        }
    }

    /// Whether every row of `table` is reproduced exactly.
    pub fn satisfies(&self, table: &ContextTable) -> Result<bool> {
        for (r, ctx) in table.rows().iter().enumerate() {
            if predict(self, r, ctx)? != ctx.target {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Predictions for every row of `table`.
    pub fn predictions(&self, table: &ContextTable) -> Result<Vec<Sign>> {
        table
            .rows()
            .iter()
            .enumerate()
            .map(|(r, ctx)| predict(self, r, ctx))
            .collect()
    }
}

fn slot_value(assignment: &Assignment, row: usize, k: usize, slot: Slot) -> Result<Sign> {
    let missing = || Error::MissingEntry(format!("row {} slot {slot}", row + 1));
    match assignment {
        Assignment::Noncontextual(v) => Ok(v.get(slot.position, slot.axis)),
        Assignment::Contextual(v) => v.rows.get(row).map(|r| r[k]).ok_or_else(missing),
        Assignment::Identity(a) => {
            let arr = a.arrangements.get(row).ok_or_else(missing)?;
            Ok(a.values.get(arr.label_at(slot.position), slot.axis))
        }
        Assignment::Hybrid(h) => {
            let values = h.values.get(row).ok_or_else(missing)?;
            Ok(values.get(h.arrangement.label_at(slot.position), slot.axis))
        }
    }
}

/// Product of the three slot values an assignment supplies for row `row`.
pub fn predict(assignment: &Assignment, row: usize, ctx: &MeasurementContext) -> Result<Sign> {
    let mut product = Sign::Plus;
    for (k, &slot) in ctx.slots.iter().enumerate() {
        product = product * slot_value(assignment, row, k, slot)?;
    }
    Ok(product)
}

/// A satisfying assignment and its index in the model's search space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub packed: u64,
    pub assignment: Assignment,
}

/// The outcome of an exhaustive search.
#[derive(Clone, Debug, PartialEq)]
pub struct SolutionSet {
    pub model: ModelKind,
    /// Declared size of the search space.
    pub space: u64,
    /// Candidates actually examined; equals `space` after a full search.
    pub visited: u64,
    /// Satisfying assignments in ascending packed order.
    pub solutions: Vec<Solution>,
}

impl SolutionSet {
    pub fn count(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    /// Re-checks every listed assignment against `table`.
    pub fn verify(&self, table: &ContextTable) -> Result<bool> {
        for s in &self.solutions {
            if !s.assignment.satisfies(table)? {
                return Ok(false);
            }
        }
        Ok(self.count() as u64 <= self.space)
    }

    pub fn contains(&self, assignment: &Assignment) -> bool {
        self.solutions.iter().any(|s| &s.assignment == assignment)
    }

    pub fn assignments(&self) -> impl Iterator<Item = &Assignment> {
        self.solutions.iter().map(|s| &s.assignment)
    }
}

fn exhaust(
    model: ModelKind,
    table: &ContextTable,
    space: u64,
    decode: impl Fn(u64) -> Assignment,
) -> SolutionSet {
    let mut visited = 0;
    let mut solutions = Vec::new();
    for packed in 0..space {
        visited += 1;
        let assignment = decode(packed);
        if assignment.satisfies(table).expect("decoded assignments cover every row") {
            solutions.push(Solution { packed, assignment });
        }
    }
    SolutionSet {
        model,
        space,
        visited,
        solutions,
    }
}

fn pow(base: u64, exp: usize) -> u64 {
    u32::try_from(exp)
        .ok()
        .and_then(|e| base.checked_pow(e))
        .expect("search space exceeds u64")
}

/// All `2^6` position-indexed assignments.
pub fn enumerate_noncontextual(table: &ContextTable) -> SolutionSet {
    exhaust(ModelKind::Noncontextual, table, NoncontextualValues::SPACE, |p| {
        Assignment::Noncontextual(NoncontextualValues::from_bits(p as u8))
    })
}

/// All `2^(3·rows)` per-slot assignments.
pub fn enumerate_contextual(table: &ContextTable) -> SolutionSet {
    let rows = table.len();
    exhaust(ModelKind::Contextual, table, pow(2, 3 * rows), |p| {
        Assignment::Contextual(ContextualValues::from_bits(p, rows))
    })
}

/// All `6^rows` per-row arrangements times `2^6` label-bound values.
/// Packing: `Σ_r code(arr_r)·6^(rows−1−r)`, then `·64 + value bits`.
pub fn enumerate_identity_contextual(table: &ContextTable) -> SolutionSet {
    let rows = table.len();
    let space = pow(6, rows) * LabelValues::SPACE;
    exhaust(ModelKind::Identity, table, space, |p| {
        let values = LabelValues::from_bits((p % LabelValues::SPACE) as u8);
        let mut code = p / LabelValues::SPACE;
        let mut arrangements = vec![Arrangement::IDENTITY; rows];
        for slot in arrangements.iter_mut().rev() {
            *slot = Arrangement::ALL[(code % 6) as usize];
            code /= 6;
        }
        Assignment::Identity(IdentityAssignment {
            arrangements,
            values,
        })
    })
}

/// One arrangement for every row: `6 · 2^6` candidates.
pub fn enumerate_identity_fixed(table: &ContextTable) -> SolutionSet {
    let rows = table.len();
    let mut set = exhaust(ModelKind::IdentityFixed, table, 6 * LabelValues::SPACE, |p| {
        Assignment::Identity(IdentityAssignment {
            arrangements: vec![Arrangement::ALL[(p / LabelValues::SPACE) as usize]; rows],
            values: LabelValues::from_bits((p % LabelValues::SPACE) as u8),
        })
    });
    set.model = ModelKind::IdentityFixed;
    set
}

/// One arrangement for every row, label-bound values chosen per row:
/// `6 · 2^(3·rows)` candidates. Only the three values a row consumes are
/// free; the rest stay +1.
pub fn enumerate_hybrid(table: &ContextTable) -> SolutionSet {
    let per_row = pow(2, 3 * table.len());
    exhaust(ModelKind::Hybrid, table, 6 * per_row, |p| {
        let arrangement = Arrangement::ALL[(p / per_row) as usize];
        let bits = p % per_row;
        let values = table
            .rows()
            .iter()
            .enumerate()
            .map(|(r, ctx)| {
                ctx.slots
                    .iter()
                    .enumerate()
                    .fold(LabelValues::default(), |acc, (k, slot)| {
                        let v = Sign::from_bit(bits >> (3 * r + k) & 1 == 1);
                        acc.with(arrangement.label_at(slot.position), slot.axis, v)
                    })
            })
            .collect();
        Assignment::Hybrid(HybridAssignment {
            arrangement,
            values,
        })
    })
}

/// Dispatches to the enumerator for `model`.
pub fn enumerate(model: ModelKind, table: &ContextTable) -> SolutionSet {
    match model {
        ModelKind::Noncontextual => enumerate_noncontextual(table),
        ModelKind::Contextual => enumerate_contextual(table),
        ModelKind::Identity => enumerate_identity_contextual(table),
        ModelKind::IdentityFixed => enumerate_identity_fixed(table),
        ModelKind::Hybrid => enumerate_hybrid(table),
    }
}

/// Result of the GF(2) parity analysis of a table under noncontextual
/// values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Feasibility {
    /// A satisfying assignment (free variables set to +1).
    Feasible { witness: NoncontextualValues },
    /// Zero-based rows whose parity equations sum to `0 = 1`.
    Infeasible { certificate: Vec<usize> },
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible { .. })
    }
}

#[derive(Clone)]
struct ParityRow {
    vars: u8,
    rhs: bool,
    combination: Vec<bool>,
}

impl ParityRow {
    fn absorb(&mut self, other: &ParityRow) {
        self.vars ^= other.vars;
        self.rhs ^= other.rhs;
        for (a, b) in self.combination.iter_mut().zip(&other.combination) {
            *a ^= b;
        }
    }
}

/// Gauss-Jordan elimination of the rows' parity equations over GF(2).
///
/// Each variable is the bit of one (position, axis) value (1 ⟺ −1); each
/// row demands that its three bits sum to the target's bit.
pub fn gf2_feasibility(table: &ContextTable) -> Feasibility {
    let n = table.len();
    let mut rows: Vec<ParityRow> = table
        .rows()
        .iter()
        .enumerate()
        .map(|(r, ctx)| {
            let vars = ctx
                .slots
                .iter()
                .fold(0u8, |acc, s| acc ^ NoncontextualValues::bit(s.position, s.axis));
            let mut combination = vec![false; n];
            combination[r] = true;
            ParityRow {
                vars,
                rhs: ctx.target.bit(),
                combination,
            }
        })
        .collect();

    let mut pivots: Vec<(usize, u8)> = Vec::new();
    let mut next = 0;
    for var in 0..6 {
        let mask = 1u8 << var;
        let Some(found) = (next..n).find(|&r| rows[r].vars & mask != 0) else {
            continue;
        };
        rows.swap(next, found);
        let pivot = rows[next].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != next && row.vars & mask != 0 {
                row.absorb(&pivot);
            }
        }
        pivots.push((next, mask));
        next += 1;
    }

    if let Some(bad) = rows.iter().find(|r| r.vars == 0 && r.rhs) {
        let certificate = bad
            .combination
            .iter()
            .enumerate()
            .filter_map(|(r, &used)| used.then_some(r))
            .collect();
        return Feasibility::Infeasible { certificate };
    }

    let mut bits = 0u8;
    for (r, mask) in pivots {
        if rows[r].rhs {
            bits |= mask;
        }
    }
    Feasibility::Feasible {
        witness: NoncontextualValues::from_bits(bits),
    }
}
