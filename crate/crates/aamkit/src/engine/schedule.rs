use crate::engine::cost::CostFunction;
use crate::engine::set::ProjectableSet;

/// One side of a set schedule: the sets revealed at iterations 1, 2, ...
///
/// `Constant` never exhausts; `List` exhausts after its last entry;
/// `Generated` computes the set for an iteration index on demand.
pub enum SetSequence<S> {
    Constant(S),
    List(Vec<S>),
    Generated(Box<dyn Fn(usize) -> S + Send + Sync>),
}

impl<S: Clone> SetSequence<S> {
    /// The set revealed at iteration `n >= 1` (index 0 holds the initial
    /// sets). `None` once a finite list is exhausted.
    pub fn at(&self, n: usize) -> Option<S> {
        match self {
            SetSequence::Constant(s) => Some(s.clone()),
            SetSequence::List(v) => v.get(n).cloned(),
            SetSequence::Generated(f) => Some(f(n)),
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, SetSequence::Constant(_))
    }
}

/// The revealed sequence of constraint-set pairs together with their
/// declared limits.
///
/// The per-iteration drift `eps_n` is the sum of the Hausdorff distances of
/// the revealed pair to the limits. For the built-in generators the drift is
/// monotone decreasing; for data-driven schedules it is an estimate and is
/// reported as such.
pub struct SetSchedule<S> {
    pub p_sets: SetSequence<S>,
    pub q_sets: SetSequence<S>,
    pub p_limit: S,
    pub q_limit: S,
}

impl<S: Clone> SetSchedule<S> {
    /// Constant schedule: the classical fixed-set algorithm.
    pub fn constant(p_set: S, q_set: S) -> Self {
        SetSchedule {
            p_limit: p_set.clone(),
            q_limit: q_set.clone(),
            p_sets: SetSequence::Constant(p_set),
            q_sets: SetSequence::Constant(q_set),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.p_sets.is_constant() && self.q_sets.is_constant()
    }

    /// `d_H(P_n, P) + d_H(Q_n, Q)` for the pair revealed at iteration `n`.
    pub fn eps_at<C>(&self, n: usize) -> Option<f64>
    where
        C: CostFunction,
        S: ProjectableSet<C>,
    {
        let p = self.p_sets.at(n)?;
        let q = self.q_sets.at(n)?;
        Some(p.hausdorff_to(&self.p_limit) + q.hausdorff_to(&self.q_limit))
    }
}
