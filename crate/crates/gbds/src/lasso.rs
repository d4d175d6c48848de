//! Finite or eventually periodic sequences, kept in a canonical form so that
//! structural equality is sequence equality.

use std::collections::HashMap;
use std::hash::Hash;

/// `prefix` followed by `cycle` repeated forever; finite when `cycle` is empty.
///
/// Canonical form: the cycle is primitive and the prefix is as short as
/// possible (its last item differs from the cycle's last item).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lasso<T> {
    prefix: Vec<T>,
    cycle: Vec<T>,
}

impl<T: Clone + Eq> Lasso<T> {
    pub fn finite(items: Vec<T>) -> Self {
        Lasso {
            prefix: items,
            cycle: Vec::new(),
        }
    }

    pub fn new(prefix: Vec<T>, cycle: Vec<T>) -> Self {
        let mut out = Lasso { prefix, cycle };
        out.normalize();
        out
    }

    fn normalize(&mut self) {
        let c = self.cycle.len();
        if c == 0 {
            return;
        }
        if let Some(p) = (1..=c)
            .filter(|p| c % p == 0)
            .find(|p| (0..c).all(|i| self.cycle[i] == self.cycle[i % p]))
        {
            self.cycle.truncate(p);
        }
        while self.prefix.last().is_some() && self.prefix.last() == self.cycle.last() {
            self.prefix.pop();
            self.cycle.rotate_right(1);
        }
    }

    pub fn prefix(&self) -> &[T] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[T] {
        &self.cycle
    }

    pub fn is_finite(&self) -> bool {
        self.cycle.is_empty()
    }

    /// Length when finite.
    pub fn len(&self) -> Option<usize> {
        self.is_finite().then_some(self.prefix.len())
    }

    pub fn is_empty(&self) -> bool {
        self.prefix.is_empty() && self.cycle.is_empty()
    }

    /// Zero-based item lookup.
    pub fn get(&self, i: usize) -> Option<&T> {
        if i < self.prefix.len() {
            return self.prefix.get(i);
        }
        if self.cycle.is_empty() {
            return None;
        }
        self.cycle.get((i - self.prefix.len()) % self.cycle.len())
    }

    /// True when the sequence has at least `n` items.
    pub fn has_len(&self, n: usize) -> bool {
        !self.is_finite() || self.prefix.len() >= n
    }

    /// The first `n` items, or fewer when the sequence is shorter.
    pub fn take(&self, n: usize) -> Vec<T> {
        (0..n).map_while(|i| self.get(i).cloned()).collect()
    }

    /// Drops the first `n` items; `None` when the sequence is shorter.
    pub fn drop_front(&self, n: usize) -> Option<Self> {
        if !self.has_len(n) {
            return None;
        }
        if n <= self.prefix.len() {
            return Some(Lasso::new(self.prefix[n..].to_vec(), self.cycle.clone()));
        }
        let mut cycle = self.cycle.clone();
        cycle.rotate_left((n - self.prefix.len()) % self.cycle.len());
        Some(Lasso::new(Vec::new(), cycle))
    }

    pub fn prepend(&self, items: &[T]) -> Self {
        let mut prefix = items.to_vec();
        prefix.extend(self.prefix.iter().cloned());
        Lasso::new(prefix, self.cycle.clone())
    }

    /// Number of items needed to see every (item, next item) pair.
    pub fn span(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    /// Applies `f` itemwise; the result is renormalised.
    pub fn map<U: Clone + Eq>(&self, f: impl Fn(&T) -> U) -> Lasso<U> {
        Lasso::new(
            self.prefix.iter().map(&f).collect(),
            self.cycle.iter().map(&f).collect(),
        )
    }
}

/// Forward dynamics on a finite state space used to describe infinite
/// continuations: `succ(s)` lists the pairs `(item, next state)`.
pub struct Continuations<S, T> {
    infinite: HashMap<S, bool>,
    unique: HashMap<S, Option<(T, S)>>,
}

impl<S, T> Continuations<S, T>
where
    S: Copy + Eq + Hash,
    T: Clone + Eq,
{
    /// `states` must be closed under `succ`.
    pub fn new(states: &[S], succ: impl Fn(S) -> Vec<(T, S)>) -> Self {
        let table: HashMap<S, Vec<(T, S)>> = states.iter().map(|s| (*s, succ(*s))).collect();
        // A state admits an infinite run iff it can reach a cycle; peel off
        // states with no surviving successor until stable.
        let mut alive: HashMap<S, bool> = states.iter().map(|s| (*s, true)).collect();
        loop {
            let dead: Vec<S> = states
                .iter()
                .filter(|s| alive[*s] && !table[*s].iter().any(|(_, t)| alive[t]))
                .copied()
                .collect();
            if dead.is_empty() {
                break;
            }
            for s in dead {
                alive.insert(s, false);
            }
        }
        // Unique continuation: exactly one live successor, itself unique.
        let mut unique: HashMap<S, Option<(T, S)>> = states
            .iter()
            .map(|s| {
                let live: Vec<&(T, S)> = table[s].iter().filter(|(_, t)| alive[t]).collect();
                let step = (alive[s] && live.len() == 1).then(|| live[0].clone());
                (*s, step)
            })
            .collect();
        loop {
            let broken: Vec<S> = states
                .iter()
                .filter(|s| match &unique[*s] {
                    Some((_, t)) => unique[t].is_none(),
                    None => false,
                })
                .copied()
                .collect();
            if broken.is_empty() {
                break;
            }
            for s in broken {
                unique.insert(s, None);
            }
        }
        Continuations {
            infinite: alive,
            unique,
        }
    }

    pub fn has_infinite_run(&self, s: S) -> bool {
        self.infinite.get(&s).copied().unwrap_or(false)
    }

    /// The single infinite run from `s`, as a lasso, when there is exactly one.
    pub fn unique_run(&self, s: S) -> Option<Lasso<T>> {
        let mut seen: HashMap<S, usize> = HashMap::new();
        let mut items = Vec::new();
        let mut cur = s;
        loop {
            if let Some(&start) = seen.get(&cur) {
                let cycle = items.split_off(start);
                return Some(Lasso::new(items, cycle));
            }
            seen.insert(cur, items.len());
            let (item, next) = self.unique.get(&cur)?.clone()?;
            items.push(item);
            cur = next;
        }
    }
}
