//! Reachable Łn-relations: graded maps from `(state, set of states)` to Łn,
//! with the identity, union, concurrent composition, star and parallel
//! operations.
//!
//! A relation over `m` states is stored densely as `m * 2^m` numerators,
//! indexed by state and by the bitmask of the target set. Absent support is
//! simply a zero numerator, so structural equality is semantic equality.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chain::{ChainContext, ChainError, ChainValue};

/// Hard bound on state spaces; the set-indexed tables grow as `4^m`.
pub const MAX_STATES: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelationError {
    #[error("state space must have between 1 and {MAX_STATES} states, got {0}")]
    BadSpaceSize(usize),
    #[error("relations over different state spaces ({left} vs {right} states)")]
    SpaceMismatch { left: usize, right: usize },
    #[error("state {state} out of range for a space of {size} states")]
    StateOutOfRange { state: usize, size: usize },
    #[error(transparent)]
    Chain(#[from] ChainError),
}

/// A nonempty finite state space `{0, .., size-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StateSpace {
    size: usize,
}

impl StateSpace {
    pub fn new(size: usize) -> Result<Self, RelationError> {
        if (1..=MAX_STATES).contains(&size) {
            Ok(StateSpace { size })
        } else {
            Err(RelationError::BadSpaceSize(size))
        }
    }

    pub fn size(self) -> usize {
        self.size
    }

    /// Number of subsets, `2^size`.
    pub fn subset_count(self) -> usize {
        1 << self.size
    }

    pub fn states(self) -> std::ops::Range<usize> {
        0..self.size
    }

    /// Every subset, in increasing bitmask order (the empty set first).
    pub fn subsets(self) -> impl Iterator<Item = StateSet> {
        (0..self.subset_count() as u32).map(StateSet)
    }

    pub fn full(self) -> StateSet {
        StateSet((self.subset_count() - 1) as u32)
    }

    pub fn check_state(self, state: usize) -> Result<(), RelationError> {
        if state < self.size {
            Ok(())
        } else {
            Err(RelationError::StateOutOfRange {
                state,
                size: self.size,
            })
        }
    }

    pub fn set_of<I: IntoIterator<Item = usize>>(self, states: I) -> Result<StateSet, RelationError> {
        let mut bits = 0u32;
        for s in states {
            self.check_state(s)?;
            bits |= 1 << s;
        }
        Ok(StateSet(bits))
    }
}

/// A subset of a state space, encoded as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct StateSet(u32);

impl StateSet {
    pub const EMPTY: StateSet = StateSet(0);

    pub fn singleton(state: usize) -> StateSet {
        StateSet(1 << state)
    }

    pub fn from_bits(bits: u32) -> StateSet {
        StateSet(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, state: usize) -> bool {
        state < 32 && self.0 & (1 << state) != 0
    }

    pub fn union(self, other: StateSet) -> StateSet {
        StateSet(self.0 | other.0)
    }

    pub fn is_subset(self, other: StateSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..32).filter(move |s| bits & (1 << s) != 0)
    }
}

impl fmt::Display for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, s) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str("}")
    }
}

/// How `∪` treats its arguments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UnionReading {
    /// `(R ∪ Q)(s,T) = R(s,T) ∨ Q(s,T)`.
    #[default]
    Pointwise,
    /// The join indexed by `t ∈ T` taken literally: zero at `T = ∅`.
    Literal,
}

/// Which decompositions `T ∪ W = X` the parallel operation joins over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParallelReading {
    /// Any pair whose union is `X`, overlapping or not.
    #[default]
    Overlapping,
    /// Only pairs with `T ∩ W = ∅`.
    Disjoint,
}

/// A reachable Łn-relation on a finite state space.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ReachRelation {
    ctx: ChainContext,
    space: StateSpace,
    vals: Vec<u32>,
}

impl fmt::Debug for ReachRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (s, t, v) in self.entries() {
            m.entry(&format_args!("({s},{t})"), &format_args!("{v}"));
        }
        m.finish()
    }
}

impl ReachRelation {
    /// The relation that is `0̄` everywhere.
    pub fn zero(space: StateSpace, ctx: ChainContext) -> Self {
        ReachRelation {
            ctx,
            space,
            vals: vec![0; space.size() * space.subset_count()],
        }
    }

    /// `ι(s,T) = 1̄` iff `T = {s}`.
    pub fn iota(space: StateSpace, ctx: ChainContext) -> Self {
        let mut r = Self::zero(space, ctx);
        for s in space.states() {
            let i = r.index(s, StateSet::singleton(s));
            r.vals[i] = ctx.top_num();
        }
        r
    }

    /// Each entry is nonzero with probability `density`, and then uniform
    /// over the nonzero chain elements.
    pub fn random<R: Rng + ?Sized>(space: StateSpace, ctx: ChainContext, density: f64, rng: &mut R) -> Self {
        let mut r = Self::zero(space, ctx);
        for v in r.vals.iter_mut() {
            if rng.gen_bool(density.clamp(0.0, 1.0)) {
                *v = rng.gen_range(1..=ctx.top_num());
            }
        }
        r
    }

    pub fn context(&self) -> ChainContext {
        self.ctx
    }

    pub fn space(&self) -> StateSpace {
        self.space
    }

    #[inline]
    fn index(&self, s: usize, t: StateSet) -> usize {
        s * self.space.subset_count() + t.bits() as usize
    }

    #[inline]
    pub(crate) fn raw(&self, s: usize, t: StateSet) -> u32 {
        self.vals[self.index(s, t)]
    }

    /// The row `T ↦ R(s,T)` as raw numerators.
    #[inline]
    pub(crate) fn row(&self, s: usize) -> &[u32] {
        let w = self.space.subset_count();
        &self.vals[s * w..(s + 1) * w]
    }

    fn row_mut(&mut self, s: usize) -> &mut [u32] {
        let w = self.space.subset_count();
        &mut self.vals[s * w..(s + 1) * w]
    }

    pub fn get(&self, s: usize, t: StateSet) -> ChainValue {
        debug_assert!(s < self.space.size() && t.is_subset(self.space.full()));
        ChainValue::from_ctx_raw(self.ctx, self.raw(s, t))
    }

    pub fn set(&mut self, s: usize, t: StateSet, value: ChainValue) -> Result<(), RelationError> {
        self.space.check_state(s)?;
        if !t.is_subset(self.space.full()) {
            return Err(RelationError::StateOutOfRange {
                state: t.iter().max().unwrap_or(0),
                size: self.space.size(),
            });
        }
        if value.context() != self.ctx {
            return Err(ChainError::ContextMismatch {
                left: self.ctx.order(),
                right: value.context().order(),
            }
            .into());
        }
        let i = self.index(s, t);
        self.vals[i] = value.numerator();
        Ok(())
    }

    /// Nonzero entries in (state, bitmask) order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, StateSet, ChainValue)> + '_ {
        let w = self.space.subset_count();
        self.vals.iter().enumerate().filter(|(_, &v)| v != 0).map(move |(i, &v)| {
            (
                i / w,
                StateSet::from_bits((i % w) as u32),
                ChainValue::from_ctx_raw(self.ctx, v),
            )
        })
    }

    pub fn is_zero(&self) -> bool {
        self.vals.iter().all(|&v| v == 0)
    }

    fn compatible(&self, other: &ReachRelation) -> Result<(), RelationError> {
        if self.space != other.space {
            return Err(RelationError::SpaceMismatch {
                left: self.space.size(),
                right: other.space.size(),
            });
        }
        if self.ctx != other.ctx {
            return Err(ChainError::ContextMismatch {
                left: self.ctx.order(),
                right: other.ctx.order(),
            }
            .into());
        }
        Ok(())
    }

    /// Pointwise order.
    pub fn leq(&self, other: &ReachRelation) -> Result<bool, RelationError> {
        self.compatible(other)?;
        Ok(self.vals.iter().zip(&other.vals).all(|(a, b)| a <= b))
    }

    pub fn union(&self, other: &ReachRelation) -> Result<ReachRelation, RelationError> {
        self.union_with(other, UnionReading::Pointwise)
    }

    pub fn union_with(&self, other: &ReachRelation, reading: UnionReading) -> Result<ReachRelation, RelationError> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (a, b) in out.vals.iter_mut().zip(&other.vals) {
            *a = (*a).max(*b);
        }
        if reading == UnionReading::Literal {
            for s in self.space.states() {
                out.row_mut(s)[0] = 0;
            }
        }
        Ok(out)
    }

    /// Concurrent composition `R ∘ Q`.
    ///
    /// `(R∘Q)(s,T)` is the join, over `U ⊆ S` and families `{T_u}` with
    /// `⋃ T_u = T`, of `R(s,U) ⊙ ⨀_u Q(u,T_u)`. The inner join over families
    /// does not depend on `s`, so it is tabulated once per `U` as an
    /// iterated union-convolution of the rows `Q(u,·)`.
    pub fn compose(&self, other: &ReachRelation) -> Result<ReachRelation, RelationError> {
        self.compatible(other)?;
        let ctx = self.ctx;
        let w = self.space.subset_count();
        // fan[U][T] = ⋁ { ⨀_{u∈U} Q(u,T_u) : ⋃ T_u = T }
        let mut fan: Vec<Vec<u32>> = Vec::with_capacity(w);
        let mut unit = vec![0; w];
        unit[0] = ctx.top_num();
        fan.push(unit);
        for u_bits in 1..w {
            let low = u_bits.trailing_zeros() as usize;
            let rest = &fan[u_bits & (u_bits - 1)];
            fan.push(union_convolve(ctx, rest, other.row(low), false));
        }

        let mut out = ReachRelation::zero(self.space, ctx);
        for s in self.space.states() {
            let row = self.row(s);
            let target = out.row_mut(s);
            for (u_bits, &r) in row.iter().enumerate() {
                if r == 0 {
                    continue;
                }
                for (t, &g) in fan[u_bits].iter().enumerate() {
                    if g == 0 {
                        continue;
                    }
                    let v = ctx.conj_raw(r, g);
                    if v > target[t] {
                        target[t] = v;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `R⁽ᵏ⁾`: `R⁽⁰⁾ = ι`, `R⁽ᵏ⁺¹⁾ = ι ∪ (R ∘ R⁽ᵏ⁾)`.
    pub fn power(&self, k: usize) -> ReachRelation {
        let iota = ReachRelation::iota(self.space, self.ctx);
        let mut cur = iota.clone();
        for _ in 0..k {
            cur = iota.union(&self.compose(&cur).expect("same space")).expect("same space");
        }
        cur
    }

    /// `R*`, the limit of the increasing chain `R⁽ᵏ⁾`.
    pub fn star(&self) -> ReachRelation {
        let iota = ReachRelation::iota(self.space, self.ctx);
        let mut cur = iota.clone();
        loop {
            let next = iota.union(&self.compose(&cur).expect("same space")).expect("same space");
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    /// Parallel execution `R ⊗ Q` with overlapping decompositions.
    pub fn parallel(&self, other: &ReachRelation) -> Result<ReachRelation, RelationError> {
        self.parallel_with(other, ParallelReading::Overlapping)
    }

    /// `(R⊗Q)(s,X) = ⋁ { R(s,T) ⊙ Q(s,W) : T ∪ W = X }`.
    pub fn parallel_with(&self, other: &ReachRelation, reading: ParallelReading) -> Result<ReachRelation, RelationError> {
        self.compatible(other)?;
        let mut out = ReachRelation::zero(self.space, self.ctx);
        let disjoint = reading == ParallelReading::Disjoint;
        for s in self.space.states() {
            let row = union_convolve(self.ctx, self.row(s), other.row(s), disjoint);
            out.row_mut(s).copy_from_slice(&row);
        }
        Ok(out)
    }
}

/// `h(X) = ⋁ { f(A) ⊙ g(B) : A ∪ B = X }`, optionally only over disjoint pairs.
fn union_convolve(ctx: ChainContext, f: &[u32], g: &[u32], disjoint: bool) -> Vec<u32> {
    let mut h = vec![0; f.len()];
    for (a, &fa) in f.iter().enumerate() {
        if fa == 0 {
            continue;
        }
        for (b, &gb) in g.iter().enumerate() {
            if gb == 0 || (disjoint && a & b != 0) {
                continue;
            }
            let v = ctx.conj_raw(fa, gb);
            let x = a | b;
            if v > h[x] {
                h[x] = v;
            }
        }
    }
    h
}

impl ChainValue {
    #[inline]
    pub(crate) fn from_ctx_raw(ctx: ChainContext, num: u32) -> ChainValue {
        ctx.value(num).expect("numerator within chain")
    }
}
