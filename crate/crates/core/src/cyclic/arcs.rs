use serde::Serialize;

use super::perm::CyclicPerm;
use crate::gcd;
use crate::setcore::ElementSet;
use crate::{Error, Result};

/// Arcs of a cyclic order: `B_r` is the `r`-th block of `m` consecutive
/// positions, `A_r` its first `m - l` positions and `D_r` the last `l`.
/// Indices are 1-based and read modulo `nbar = n / gcd(n, m)`.
#[derive(Clone, Debug)]
pub struct ArcLayout {
    perm: CyclicPerm,
    m: usize,
    l: usize,
    nbar: usize,
    b: Vec<ElementSet>,
    a: Vec<ElementSet>,
    d: Vec<ElementSet>,
}

impl ArcLayout {
    pub fn new(perm: CyclicPerm, m: usize, l: usize) -> Result<Self> {
        let n = perm.n();
        if !(0 < l && l < m && m + l <= n) {
            return Err(Error::InvalidParameter(format!(
                "arc layout needs 0 < l < m and m + l <= n, got n={n} m={m} l={l}"
            )));
        }
        let nbar = n / gcd(n, m);
        let (m_i, l_i) = (m as i64, l as i64);
        let mut b = Vec::with_capacity(nbar);
        let mut a = Vec::with_capacity(nbar);
        let mut d = Vec::with_capacity(nbar);
        for r in 1..=nbar as i64 {
            let lo = (r - 1) * m_i;
            b.push(perm.arc(lo, lo + m_i));
            a.push(perm.arc(lo, lo + m_i - l_i));
            d.push(perm.arc(lo + m_i - l_i, lo + m_i));
        }
        Ok(ArcLayout { perm, m, l, nbar, b, a, d })
    }

    pub fn perm(&self) -> &CyclicPerm {
        &self.perm
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn l(&self) -> usize {
        self.l
    }

    /// Number of distinct arcs, `n / gcd(n, m)`.
    pub fn nbar(&self) -> usize {
        self.nbar
    }

    #[inline]
    fn idx(&self, r: i64) -> usize {
        (r - 1).rem_euclid(self.nbar as i64) as usize
    }

    #[inline]
    pub fn b(&self, r: i64) -> ElementSet {
        self.b[self.idx(r)]
    }

    #[inline]
    pub fn a(&self, r: i64) -> ElementSet {
        self.a[self.idx(r)]
    }

    #[inline]
    pub fn d(&self, r: i64) -> ElementSet {
        self.d[self.idx(r)]
    }

    /// `C_r(j) = B_r ∪ D_{r+j}`.
    #[inline]
    pub fn c(&self, r: i64, j: i64) -> ElementSet {
        self.b(r).union(self.d(r + j))
    }
}

/// The three-family arc system for `n = 3m - l`.
#[derive(Clone, Debug)]
pub struct ArcSystem3 {
    layout: ArcLayout,
    d: usize,
}

impl ArcSystem3 {
    pub fn layout(&self) -> &ArcLayout {
        &self.layout
    }

    /// `gcd(n, m)`.
    pub fn d(&self) -> usize {
        self.d
    }

    /// `n / d`, the number of arcs of each kind.
    pub fn count(&self) -> usize {
        self.layout.nbar
    }

    pub fn a(&self, r: i64) -> ElementSet {
        self.layout.a(r)
    }

    pub fn b(&self, r: i64) -> ElementSet {
        self.layout.b(r)
    }

    /// `C_r = B_r ∪ D_{r+1}`.
    pub fn c(&self, r: i64) -> ElementSet {
        self.layout.c(r, 1)
    }

    pub fn d_part(&self, r: i64) -> ElementSet {
        self.layout.d(r)
    }

    /// Checks sizes, `B_r = A_r ⊔ D_r`, `C_r ∪ A_{r+1} = B_r ∪ B_{r+1}` and the
    /// two partitions `B_r, B_{r+1}, A_{r+2}` and `C_r, A_{r+1}, A_{r+2}` of `[n]`.
    pub fn check_invariants(&self) -> Result<()> {
        let (m, l) = (self.layout.m, self.layout.l);
        let full = self.layout.perm.ground().full_mask();
        let fail = |what: String| Err(Error::Violation { claim: "arc system invariant".into(), detail: what });
        for r in 1..=self.count() as i64 {
            let (a, b, c, d) = (self.a(r), self.b(r), self.c(r), self.d_part(r));
            if a.len() != m - l || b.len() != m || c.len() != m + l || d.len() != l {
                return fail(format!("sizes at r={r}"));
            }
            if !a.is_disjoint(d) || a.union(d) != b {
                return fail(format!("B_{r} != A_{r} ⊔ D_{r}"));
            }
            if c.union(self.a(r + 1)) != b.union(self.b(r + 1)) {
                return fail(format!("C_{r} ∪ A_{} != B_{r} ∪ B_{}", r + 1, r + 1));
            }
            for parts in [[b, self.b(r + 1), self.a(r + 2)], [c, self.a(r + 1), self.a(r + 2)]] {
                let disjoint = parts[0].is_disjoint(parts[1])
                    && parts[0].is_disjoint(parts[2])
                    && parts[1].is_disjoint(parts[2]);
                let cover = parts.iter().fold(0, |acc, s| acc | s.mask()) == full;
                if !(disjoint && cover) {
                    return fail(format!("{parts:?} is not a partition at r={r}"));
                }
            }
        }
        Ok(())
    }
}

pub fn build_arcs3(perm: &CyclicPerm, m: usize, l: usize) -> Result<ArcSystem3> {
    let n = perm.n();
    if !(0 < l && l < m) || 3 * m != n + l {
        return Err(Error::InvalidParameter(format!("need m > l > 0 and n = 3m - l, got n={n} m={m} l={l}")));
    }
    let layout = ArcLayout::new(perm.clone(), m, l)?;
    Ok(ArcSystem3 { d: gcd(n, m), layout })
}

/// What sits at a circle position: the `A` arc, the `B` arc, or `C(j)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ArcKind {
    A,
    B,
    C(usize),
}

/// The `b * nbar` copies `B_r^(p)` arranged on a circle, for general `k`.
///
/// Position `q` (1-based) carries `r = ((q-1) mod nbar) + 1` and
/// `p = ((q-1) mod k) + 1`; all sets at position `q` belong to family `p`.
#[derive(Clone, Debug)]
pub struct ArcCircle {
    layout: ArcLayout,
    k: usize,
    b: usize,
}

impl ArcCircle {
    pub fn layout(&self) -> &ArcLayout {
        &self.layout
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn nbar(&self) -> usize {
        self.layout.nbar
    }

    /// Smallest `b` with `k | b * nbar`.
    pub fn b(&self) -> usize {
        self.b
    }

    /// Circle length `b * nbar`.
    pub fn len(&self) -> usize {
        self.b * self.layout.nbar
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Normalizes any integer position into `1..=len`.
    #[inline]
    pub fn wrap(&self, q: i64) -> usize {
        ((q - 1).rem_euclid(self.len() as i64) + 1) as usize
    }

    /// `(r, p)` at position `q`, both 1-based.
    #[inline]
    pub fn position(&self, q: i64) -> (usize, usize) {
        let q0 = (q - 1).rem_euclid(self.len() as i64) as usize;
        (q0 % self.layout.nbar + 1, q0 % self.k + 1)
    }

    /// Kinds present at every position: `A`, `B`, `C(1..=k-2)`.
    pub fn kinds(&self) -> impl Iterator<Item = ArcKind> {
        [ArcKind::A, ArcKind::B].into_iter().chain((1..=self.k - 2).map(ArcKind::C))
    }

    pub fn set_at(&self, q: i64, kind: ArcKind) -> ElementSet {
        let (r, _) = self.position(q);
        let r = r as i64;
        match kind {
            ArcKind::A => self.layout.a(r),
            ArcKind::B => self.layout.b(r),
            ArcKind::C(j) => self.layout.c(r, j as i64),
        }
    }

    pub fn check_invariants(&self) -> Result<()> {
        let (m, l, k) = (self.layout.m, self.layout.l, self.k);
        let fail = |what: String| Err(Error::Violation { claim: "arc circle invariant".into(), detail: what });
        if !self.len().is_multiple_of(k) {
            return fail(format!("k = {k} does not divide circle length {}", self.len()));
        }
        for q in 1..=self.len() as i64 {
            let (r, p) = self.position(q);
            for j in 1..=(k - 2) as i64 {
                let c = self.set_at(q, ArcKind::C(j as usize));
                if c.len() != m + l {
                    return fail(format!("|C_{r}^({p})({j})| = {}", c.len()));
                }
                // position q + j carries (r + j, p + j)
                let ahead = self.position(q + j);
                if ahead != (((r - 1 + j as usize) % self.nbar()) + 1, ((p - 1 + j as usize) % k) + 1) {
                    return fail(format!("position arithmetic at q={q}"));
                }
                let lhs = c.union(self.set_at(q + j, ArcKind::A));
                let rhs = self.set_at(q, ArcKind::B).union(self.set_at(q + j, ArcKind::B));
                if lhs != rhs {
                    return fail(format!("C ∪ A_(+{j}) != B ∪ B_(+{j}) at q={q}"));
                }
            }
        }
        // each (kind, p) family has len / k copies
        let mut per_family = vec![0usize; k];
        for q in 1..=self.len() as i64 {
            per_family[self.position(q).1 - 1] += 1;
        }
        if per_family.iter().any(|&c| c != self.len() / k) {
            return fail(format!("uneven family sizes {per_family:?}"));
        }
        Ok(())
    }
}

pub fn build_arc_circle(perm: &CyclicPerm, k: usize, m: usize, l: usize) -> Result<ArcCircle> {
    let n = perm.n();
    if k < 3 || !(0 < l && l < m) || k * m != n + l {
        return Err(Error::InvalidParameter(format!(
            "need k >= 3, m > l > 0 and n = km - l, got n={n} k={k} m={m} l={l}"
        )));
    }
    let layout = ArcLayout::new(perm.clone(), m, l)?;
    let b = k / gcd(layout.nbar, k);
    Ok(ArcCircle { layout, k, b })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::rng_from_seed;
    use crate::setcore::GroundSet;

    fn ident(n: usize) -> CyclicPerm {
        CyclicPerm::identity(GroundSet::new(n).unwrap())
    }

    #[test]
    fn five_point_system() {
        let s = build_arcs3(&ident(5), 2, 1).unwrap();
        assert_eq!((s.d(), s.count()), (1, 5));
        assert_eq!(s.a(1).to_vec(), vec![1]);
        assert_eq!(s.b(1).to_vec(), vec![1, 2]);
        assert_eq!(s.c(1).to_vec(), vec![1, 2, 4]);
        assert_eq!(s.b(3).to_vec(), vec![1, 5]);
        s.check_invariants().unwrap();
    }

    #[test]
    fn ten_point_system_wraps() {
        let s = build_arcs3(&ident(10), 4, 2).unwrap();
        assert_eq!((s.d(), s.count()), (2, 5));
        assert_eq!(s.b(3).to_vec(), vec![1, 2, 9, 10]);
        // the last arc ends at x_n
        assert!(s.b(5).contains(10) && s.b(5).contains(7));
        s.check_invariants().unwrap();
    }

    #[test]
    fn invariants_on_random_perms() {
        let mut rng = rng_from_seed(1);
        for (m, l) in [(2, 1), (3, 1), (3, 2), (4, 1), (4, 3), (5, 2)] {
            let g = GroundSet::new(3 * m - l).unwrap();
            for _ in 0..5 {
                build_arcs3(&CyclicPerm::random(g, &mut rng), m, l).unwrap().check_invariants().unwrap();
            }
        }
    }

    #[test]
    fn parameter_mismatch() {
        assert!(build_arcs3(&ident(6), 2, 1).is_err());
        assert!(build_arcs3(&ident(5), 1, 1).is_err());
        assert!(build_arc_circle(&ident(7), 3, 2, 1).is_err());
        assert!(build_arc_circle(&ident(5), 2, 3, 1).is_err());
    }

    #[test]
    fn circle_lengths() {
        let c = build_arc_circle(&ident(5), 3, 2, 1).unwrap();
        assert_eq!((c.nbar(), c.b(), c.len()), (5, 3, 15));
        let c = build_arc_circle(&ident(7), 4, 2, 1).unwrap();
        assert_eq!((c.nbar(), c.b(), c.len()), (7, 4, 28));
        // n = 10, m = 4: nbar = 5, b = 3
        let c = build_arc_circle(&ident(10), 3, 4, 2).unwrap();
        assert_eq!((c.nbar(), c.b(), c.len()), (5, 3, 15));
        // n = 14, m = 4, k = 4: d = 2, nbar = 7, b = 4
        let c = build_arc_circle(&ident(14), 4, 4, 2).unwrap();
        assert_eq!((c.nbar(), c.b(), c.len()), (7, 4, 28));
    }

    #[test]
    fn circle_invariants_on_random_perms() {
        let mut rng = rng_from_seed(2);
        for (k, m, l) in [(3, 2, 1), (4, 2, 1), (5, 2, 1), (3, 3, 1), (4, 3, 2), (6, 2, 1), (3, 4, 2)] {
            let g = GroundSet::new(k * m - l).unwrap();
            for _ in 0..3 {
                let c = build_arc_circle(&CyclicPerm::random(g, &mut rng), k, m, l).unwrap();
                c.check_invariants().unwrap();
                assert_eq!(c.position(1), (1, 1));
            }
        }
    }
}
