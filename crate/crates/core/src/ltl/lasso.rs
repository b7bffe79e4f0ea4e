use super::Ltl;

/// An ultimately periodic sequence of atom valuations: positions
/// `0..len` where the successor of the last position is `loop_start`.
///
/// Bit `a` of a valuation is the truth of atom `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lasso {
    pub valuations: Vec<u64>,
    pub loop_start: usize,
}

impl Lasso {
    pub fn new(valuations: Vec<u64>, loop_start: usize) -> Self {
        assert!(loop_start < valuations.len(), "loop must be non-empty");
        Lasso {
            valuations,
            loop_start,
        }
    }

    pub fn len(&self) -> usize {
        self.valuations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.valuations.is_empty()
    }

    #[inline]
    pub fn succ(&self, i: usize) -> usize {
        if i + 1 == self.valuations.len() {
            self.loop_start
        } else {
            i + 1
        }
    }

    /// Whether the infinite word satisfies `f` at position 0.
    pub fn holds(&self, f: &Ltl) -> bool {
        self.eval(f)[0]
    }

    /// Truth of `f` at every position.
    ///
    /// Until is the least and release the greatest fixpoint of its one-step
    /// unfolding; iterating `len` times over the finite position graph
    /// reaches both.
    pub fn eval(&self, f: &Ltl) -> Vec<bool> {
        let n = self.valuations.len();
        match f {
            Ltl::True => vec![true; n],
            Ltl::False => vec![false; n],
            Ltl::Atom(a) => self.valuations.iter().map(|v| v >> a & 1 == 1).collect(),
            Ltl::Not(x) => self.eval(x).into_iter().map(|b| !b).collect(),
            Ltl::And(a, b) => zip(self.eval(a), self.eval(b), |x, y| x && y),
            Ltl::Or(a, b) => zip(self.eval(a), self.eval(b), |x, y| x || y),
            Ltl::Next(x) => {
                let v = self.eval(x);
                (0..n).map(|i| v[self.succ(i)]).collect()
            }
            Ltl::Finally(x) => self.fixpoint(&vec![true; n], &self.eval(x), false),
            Ltl::Globally(x) => self.fixpoint(&vec![false; n], &self.eval(x), true),
            Ltl::Until(a, b) => self.fixpoint(&self.eval(a), &self.eval(b), false),
            Ltl::Release(a, b) => self.fixpoint(&self.eval(a), &self.eval(b), true),
        }
    }

    /// `until`: v[i] = rhs[i] || (lhs[i] && v[i+1]), from all-false.
    /// `release`: v[i] = rhs[i] && (lhs[i] || v[i+1]), from all-true.
    fn fixpoint(&self, lhs: &[bool], rhs: &[bool], release: bool) -> Vec<bool> {
        let n = lhs.len();
        let mut v = vec![release; n];
        for _ in 0..=n {
            let next: Vec<bool> = (0..n)
                .map(|i| {
                    if release {
                        rhs[i] && (lhs[i] || v[self.succ(i)])
                    } else {
                        rhs[i] || (lhs[i] && v[self.succ(i)])
                    }
                })
                .collect();
            if next == v {
                break;
            }
            v = next;
        }
        v
    }
}

fn zip(a: Vec<bool>, b: Vec<bool>, op: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    a.into_iter().zip(b).map(|(x, y)| op(x, y)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_operators() {
        let p = Ltl::Atom(0);
        // p false, then p true forever
        let l = Lasso::new(vec![0, 1], 1);
        assert!(l.holds(&Ltl::finally(p.clone())));
        assert!(!l.holds(&Ltl::globally(p.clone())));
        assert!(l.holds(&Ltl::finally(Ltl::globally(p.clone()))));
        assert!(l.holds(&Ltl::next(p.clone())));
        assert!(l.holds(&Ltl::until(Ltl::not(p.clone()), p.clone())));
        // alternating forever
        let l = Lasso::new(vec![0, 1], 0);
        assert!(l.holds(&Ltl::globally(Ltl::finally(p.clone()))));
        assert!(!l.holds(&Ltl::finally(Ltl::globally(p.clone()))));
        // p never: false R !p holds, p U true holds
        let l = Lasso::new(vec![0], 0);
        assert!(l.holds(&Ltl::release(Ltl::False, Ltl::not(p.clone()))));
        assert!(!l.holds(&Ltl::until(Ltl::True, p)));
    }
}
