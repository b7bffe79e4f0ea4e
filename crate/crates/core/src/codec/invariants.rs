//! Place invariants and the place bounds they imply.
//!
//! A place invariant is a weight vector `y` with `yᵀC = 0`, where `C` is the
//! incidence matrix. Every reachable marking `m` then satisfies
//! `y·m = y·m0`. The integer kernel basis comes from fraction-free row
//! reduction of `Cᵀ`; semi-positive invariants (all weights `>= 0`) give
//! upper bounds `b(p) = floor(y·m0 / y(p))`.

use crate::petri::PetriNet;

/// Semi-positive invariant search is abandoned past this many rows.
const FARKAS_ROW_LIMIT: usize = 2_000;

#[derive(Debug, Clone, Default)]
pub struct InvariantAnalysis {
    /// Integer kernel basis of `Cᵀ`. Basis vector `k` is the only one with a
    /// nonzero entry in column `free[k]`.
    pub basis: Vec<Vec<i64>>,
    /// The place each basis vector is pinned to (a redundant place).
    pub free: Vec<usize>,
    /// Semi-positive invariants found (basis vectors of constant sign plus
    /// any produced by the Farkas elimination).
    pub semipositive: Vec<Vec<i64>>,
    /// Tightest bound per place over all semi-positive invariants covering it.
    pub bounds: Vec<Option<u64>>,
}

impl InvariantAnalysis {
    pub fn all_bounded(&self) -> bool {
        self.bounds.iter().all(Option::is_some)
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn normalize(row: &mut [i128]) {
    let g = row.iter().fold(0, |g, &x| gcd(g, x));
    if g > 1 {
        row.iter_mut().for_each(|x| *x /= g);
    }
}

/// Reduced row echelon form over the integers. Each pivot row keeps its
/// pivot entry positive and every other row is zero in pivot columns.
/// Returns the pivot columns, or `None` on arithmetic overflow.
fn integer_rref(rows: &mut Vec<Vec<i128>>, cols: usize) -> Option<Vec<usize>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(sel) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, sel);
        if rows[r][c] < 0 {
            rows[r].iter_mut().for_each(|x| *x = -*x);
        }
        normalize(&mut rows[r]);
        let pivot_row = rows[r].clone();
        let a = pivot_row[c];
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c] == 0 {
                continue;
            }
            let f = row[c];
            for (x, &p) in row.iter_mut().zip(&pivot_row) {
                *x = x.checked_mul(a)?.checked_sub(f.checked_mul(p)?)?;
            }
            normalize(row);
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    Some(pivots)
}

fn lcm(a: i128, b: i128) -> Option<i128> {
    (a / gcd(a, b)).checked_mul(b)
}

/// Integer basis of the invariant space plus each vector's pinned column.
fn kernel_basis(net: &PetriNet) -> Option<(Vec<Vec<i64>>, Vec<usize>)> {
    let np = net.num_places();
    let mut rows: Vec<Vec<i128>> = (0..net.num_transitions())
        .map(|t| (0..np).map(|p| i128::from(net.incidence(p, t))).collect())
        .filter(|row: &Vec<i128>| row.iter().any(|&x| x != 0))
        .collect();
    let pivots = if rows.is_empty() {
        Vec::new()
    } else {
        integer_rref(&mut rows, np)?
    };
    let mut basis = Vec::new();
    let mut free = Vec::new();
    for f in (0..np).filter(|c| !pivots.contains(c)) {
        let mut scale = 1i128;
        for (row, &c) in rows.iter().zip(&pivots) {
            if row[f] != 0 {
                scale = lcm(scale, row[c])?;
            }
        }
        let mut y = vec![0i128; np];
        y[f] = scale;
        for (row, &c) in rows.iter().zip(&pivots) {
            y[c] = -(row[f].checked_mul(scale)? / row[c]);
        }
        normalize(&mut y);
        if y[f] < 0 {
            y.iter_mut().for_each(|x| *x = -*x);
        }
        basis.push(y.into_iter().map(i64::try_from).collect::<Result<_, _>>().ok()?);
        free.push(f);
    }
    Some((basis, free))
}

/// Semi-positive invariants by Farkas elimination on `[C | I]`.
fn farkas(net: &PetriNet) -> Option<Vec<Vec<i64>>> {
    let np = net.num_places();
    let nt = net.num_transitions();
    let mut rows: Vec<(Vec<i128>, Vec<i128>)> = (0..np)
        .map(|p| {
            let c = (0..nt).map(|t| i128::from(net.incidence(p, t))).collect();
            let mut id = vec![0; np];
            id[p] = 1;
            (c, id)
        })
        .collect();
    for t in 0..nt {
        let (zero, rest): (Vec<_>, Vec<_>) = rows.into_iter().partition(|(c, _)| c[t] == 0);
        let (pos, neg): (Vec<_>, Vec<_>) = rest.into_iter().partition(|(c, _)| c[t] > 0);
        let mut next = zero;
        for (cp, yp) in &pos {
            for (cn, yn) in &neg {
                let (a, b) = (-cn[t], cp[t]);
                let mut c = Vec::with_capacity(nt);
                for (x, y) in cp.iter().zip(cn) {
                    c.push(x.checked_mul(a)?.checked_add(y.checked_mul(b)?)?);
                }
                let mut y = Vec::with_capacity(np);
                for (x, z) in yp.iter().zip(yn) {
                    y.push(x.checked_mul(a)?.checked_add(z.checked_mul(b)?)?);
                }
                let g = c.iter().chain(&y).fold(0, |g, &x| gcd(g, x));
                if g > 1 {
                    c.iter_mut().chain(y.iter_mut()).for_each(|x| *x /= g);
                }
                next.push((c, y));
                if next.len() > FARKAS_ROW_LIMIT {
                    return None;
                }
            }
        }
        next.sort();
        next.dedup();
        rows = next;
    }
    rows.into_iter()
        .map(|(_, y)| y.into_iter().map(i64::try_from).collect::<Result<Vec<_>, _>>().ok())
        .collect()
}

/// Computes invariants and the per-place bounds they imply. Places covered by
/// no semi-positive invariant get `None`.
pub fn compute_invariant_bounds(net: &PetriNet) -> InvariantAnalysis {
    let np = net.num_places();
    let (basis, free) = kernel_basis(net).unwrap_or_default();
    let mut semipositive: Vec<Vec<i64>> = basis
        .iter()
        .filter_map(|y| {
            if y.iter().all(|&x| x >= 0) {
                Some(y.clone())
            } else if y.iter().all(|&x| x <= 0) {
                Some(y.iter().map(|x| -x).collect())
            } else {
                None
            }
        })
        .collect();
    if let Some(extra) = farkas(net) {
        for y in extra {
            if !semipositive.contains(&y) {
                semipositive.push(y);
            }
        }
    }

    let m0 = net.initial_marking();
    let mut bounds: Vec<Option<u64>> = vec![None; np];
    for y in &semipositive {
        let total: i128 = y.iter().zip(m0).map(|(&w, &m)| i128::from(w) * i128::from(m)).sum();
        for p in (0..np).filter(|&p| y[p] > 0) {
            let b = u64::try_from(total / i128::from(y[p])).unwrap_or(u64::MAX);
            bounds[p] = Some(bounds[p].map_or(b, |old| old.min(b)));
        }
    }
    InvariantAnalysis {
        basis,
        free,
        semipositive,
        bounds,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::petri::NetBuilder;

    fn is_invariant(net: &PetriNet, y: &[i64]) -> bool {
        (0..net.num_transitions())
            .all(|t| (0..net.num_places()).map(|p| y[p] * net.incidence(p, t)).sum::<i64>() == 0)
    }

    #[test]
    fn two_place_cycle() {
        let mut b = NetBuilder::new();
        let p1 = b.place("p1", 1);
        let p2 = b.place("p2", 0);
        let t1 = b.transition("t1");
        let t2 = b.transition("t2");
        b.input(p1, t1, 1).output(t1, p2, 1);
        b.input(p2, t2, 1).output(t2, p1, 1);
        let net = b.build().unwrap();
        let inv = compute_invariant_bounds(&net);
        assert_eq!(inv.basis, vec![vec![1, 1]]);
        assert_eq!(inv.bounds, vec![Some(1), Some(1)]);
    }

    #[test]
    fn source_transition_leaves_place_unbounded() {
        let mut b = NetBuilder::new();
        let p = b.place("p", 0);
        let t = b.transition("src");
        b.output(t, p, 1);
        let net = b.build().unwrap();
        let inv = compute_invariant_bounds(&net);
        assert!(inv.basis.is_empty());
        assert_eq!(inv.bounds, vec![None]);
        assert!(!inv.all_bounded());
    }

    #[test]
    fn weighted_invariant() {
        // t1: p1 -> 2 p2, t2: 2 p2 -> p1; invariant 2*p1 + p2 = 2.
        let mut b = NetBuilder::new();
        let p1 = b.place("p1", 1);
        let p2 = b.place("p2", 0);
        let t1 = b.transition("t1");
        let t2 = b.transition("t2");
        b.input(p1, t1, 1).output(t1, p2, 2);
        b.input(p2, t2, 2).output(t2, p1, 1);
        let net = b.build().unwrap();
        let inv = compute_invariant_bounds(&net);
        assert_eq!(inv.basis, vec![vec![2, 1]]);
        assert_eq!(inv.bounds, vec![Some(1), Some(2)]);
    }

    #[test]
    fn single_conservation_law_bounds_all_places() {
        // Cycles a<->b and c<->d joined by a one-way a->c transition: only
        // a+b+c+d survives.
        let mut bld = NetBuilder::new();
        let ps: Vec<_> = ["a", "b", "c", "d"].iter().map(|n| bld.place(*n, 1)).collect();
        for (i, (x, y)) in [(0, 1), (1, 0), (2, 3), (3, 2), (0, 2)].into_iter().enumerate() {
            let t = bld.transition(format!("t{i}"));
            bld.input(ps[x], t, 1).output(t, ps[y], 1);
        }
        let net = bld.build().unwrap();
        let inv = compute_invariant_bounds(&net);
        for y in inv.basis.iter().chain(&inv.semipositive) {
            assert!(is_invariant(&net, y));
        }
        assert_eq!(inv.bounds, vec![Some(4); 4]);
    }

    #[test]
    fn basis_vectors_pin_their_free_place() {
        let mut b = NetBuilder::new();
        let ps: Vec<_> = (0..5).map(|i| b.place(format!("p{i}"), 1)).collect();
        let t = b.transition("t");
        b.input(ps[0], t, 1).input(ps[1], t, 1).output(t, ps[2], 2);
        let u = b.transition("u");
        b.input(ps[2], u, 1).output(u, ps[3], 1).output(u, ps[4], 1);
        let net = b.build().unwrap();
        let inv = compute_invariant_bounds(&net);
        assert_eq!(inv.basis.len(), 3);
        for (k, y) in inv.basis.iter().enumerate() {
            assert!(is_invariant(&net, y));
            for (j, &f) in inv.free.iter().enumerate() {
                assert_eq!(y[f] != 0, j == k);
            }
        }
    }
}
