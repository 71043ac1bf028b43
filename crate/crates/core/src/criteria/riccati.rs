//! Riccati candidates: triples `(r0, r1, r2)` of theta products with
//! `div r1 ≤ div p2`, `div r2 ≤ div σ^{-1}(p3)`, `deg r1 = deg r2` and
//! `ω(r1/r2) = q_k^{deg r0}` modulo `p^Z`.
//!
//! Both searches share the same pruning. The weight condition is projected to
//! `V / (L_Q + Q·p)`, where it becomes a homogeneous linear system in the
//! multiplicities and `deg r0 ≥ 0`; an exact LP finds the variables that can
//! be positive at all, a DFS with interval bounds walks the rest, and every
//! leaf is decided exactly with the membership oracle.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use super::lp::cone_support;
use crate::divisors::Divisor;
use crate::error::{Error, Result};
use crate::exactgroup::{int, Monomial, Rat, RelationLattice, P, Q};
use crate::thetafield::{tq_divisor, tq_sigma, Case, ThetaQuotient};

pub const DEFAULT_NODE_LIMIT: u64 = 5_000_000;

/// Point counts in the shape used for the hypergeometric divisors.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct HypergeometricCounts {
    pub alpha: Vec<i64>,
    pub alpha_prime: Vec<i64>,
    pub gamma: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RiccatiCandidate {
    pub r1: Divisor,
    pub r2: Divisor,
    pub deg_r1: i64,
    pub deg_r2: i64,
    pub deg_r0: i64,
    /// `ω(r1/r2) = q_k^{deg r0} p^m` for the canonical representatives.
    pub m: i64,
    pub counts: Option<HypergeometricCounts>,
}

type CandidateKey = (Vec<(Monomial, i64)>, Vec<(Monomial, i64)>, i64, i64);

impl RiccatiCandidate {
    /// The constant candidate `r0 = r1 = r2 = 1`.
    pub fn is_constant(&self) -> bool {
        self.r1.is_empty() && self.r2.is_empty() && self.deg_r0 == 0
    }

    /// Identity of the candidate, ignoring derived bookkeeping.
    pub fn key(&self) -> CandidateKey {
        (
            self.r1.terms().iter().map(|(m, n)| (m.clone(), *n)).collect(),
            self.r2.terms().iter().map(|(m, n)| (m.clone(), *n)).collect(),
            self.deg_r0,
            self.m,
        )
    }

    fn sort_key(&self) -> (i64, Option<HypergeometricCounts>, CandidateKey) {
        (self.deg_r1, self.counts.clone(), self.key())
    }
}

fn sort_candidates(c: &mut [RiccatiCandidate]) {
    c.sort_by_key(|x| x.sort_key());
}

/// Fills in `alpha`, `alpha'` and `gamma` for parameters `eps`.
pub fn attach_counts(cands: &mut [RiccatiCandidate], eps: &[Monomial], lattice: &RelationLattice) {
    let class = |m: &Monomial| lattice.canonical_point(m).0;
    let eps_cls: Vec<Monomial> = eps.iter().map(class).collect();
    let q = Monomial::gen(Q);
    let eps_q: Vec<Monomial> = eps.iter().map(|e| class(&(&q / e))).collect();
    let quarter1 = class(&q.inv());
    let quarter2 = class(&q.powi(3));
    for c in cands.iter_mut() {
        let mut alpha = vec![0; eps.len()];
        let mut alpha_prime = vec![0; eps.len()];
        let mut gamma = 0;
        for pt in c.r1.terms().keys() {
            let sq = class(&pt.powi(2));
            if let Some(j) = eps_cls.iter().position(|e| *e == sq) {
                alpha[j] += 1;
            } else if class(&pt.powi(4)) == quarter1 {
                gamma += 1;
            }
        }
        for pt in c.r2.terms().keys() {
            let sq = class(&pt.powi(2));
            if let Some(j) = eps_q.iter().position(|e| *e == sq) {
                alpha_prime[j] += 1;
            } else if class(&pt.powi(4)) == quarter2 {
                gamma += 1;
            }
        }
        c.counts = Some(HypergeometricCounts {
            alpha,
            alpha_prime,
            gamma,
        });
    }
}

/// Linear image of a point in `V / (L_Q + Q·p)`.
fn projected(lattice: &RelationLattice, m: &Monomial) -> BTreeMap<String, Rat> {
    lattice.projector(&[P]).reduce(&m.free_part()).exponents().clone()
}

/// Variables are sign-tagged vectors; `d` (the degree of `r0`) is appended as
/// the last column. Returns one row per coordinate plus the degree row.
fn linear_rows(
    lattice: &RelationLattice,
    level: u32,
    vars: &[(BTreeMap<String, Rat>, i64)],
) -> Vec<Vec<Rat>> {
    let mut q_vec = projected(lattice, &Monomial::gen(Q));
    for v in q_vec.values_mut() {
        *v = -*v / int(i64::from(level));
    }
    let mut coords: Vec<&String> = vars.iter().flat_map(|(v, _)| v.keys()).chain(q_vec.keys()).collect();
    coords.sort();
    coords.dedup();
    let n = vars.len() + 1;
    let mut rows: Vec<Vec<Rat>> = coords
        .iter()
        .map(|c| {
            let mut row: Vec<Rat> = vars
                .iter()
                .map(|(v, s)| v.get(*c).copied().unwrap_or_else(Rat::zero) * int(*s))
                .collect();
            row.push(q_vec.get(*c).copied().unwrap_or_else(Rat::zero));
            row
        })
        .collect();
    let mut deg: Vec<Rat> = vars.iter().map(|(_, s)| int(*s)).collect();
    deg.push(Rat::zero());
    rows.push(deg);
    debug_assert!(rows.iter().all(|r| r.len() == n));
    rows
}

/// Depth-first walk over bounded integer vectors with per-row interval
/// pruning. Column `n-1` of every row is the unbounded `d ≥ 0` (only used for
/// bounds, never enumerated).
struct Walker<'a> {
    rows: &'a [Vec<Rat>],
    upper: Vec<i64>,
    d_free: bool,
    smin: Vec<Vec<Rat>>,
    smax: Vec<Vec<Rat>>,
    nodes: u64,
    node_limit: u64,
}

impl<'a> Walker<'a> {
    fn new(rows: &'a [Vec<Rat>], upper: Vec<i64>, d_free: bool, node_limit: u64) -> Self {
        let nv = upper.len();
        let nr = rows.len();
        let mut smin = vec![vec![Rat::zero(); nr]; nv + 1];
        let mut smax = vec![vec![Rat::zero(); nr]; nv + 1];
        for i in (0..nv).rev() {
            for r in 0..nr {
                let c = rows[r][i] * int(upper[i]);
                smin[i][r] = smin[i + 1][r] + c.min(Rat::zero());
                smax[i][r] = smax[i + 1][r] + c.max(Rat::zero());
            }
        }
        Walker {
            rows,
            upper,
            d_free,
            smin,
            smax,
            nodes: 0,
            node_limit,
        }
    }

    fn feasible(&self, depth: usize, partial: &[Rat]) -> bool {
        let dcol = self.rows.first().map_or(0, |r| r.len() - 1);
        partial.iter().enumerate().all(|(r, s)| {
            let dc = if self.d_free { self.rows[r][dcol] } else { Rat::zero() };
            let lo_inf = dc < Rat::zero();
            let hi_inf = dc > Rat::zero();
            (lo_inf || *s + self.smin[depth][r] <= Rat::zero())
                && (hi_inf || *s + self.smax[depth][r] >= Rat::zero())
        })
    }

    fn run<F>(&mut self, leaf: &mut F) -> Result<()>
    where
        F: FnMut(&[i64]) -> Result<()>,
    {
        let mut x = vec![0; self.upper.len()];
        let partial = vec![Rat::zero(); self.rows.len()];
        self.go(0, &mut x, partial, leaf)
    }

    fn go<F>(&mut self, depth: usize, x: &mut Vec<i64>, partial: Vec<Rat>, leaf: &mut F) -> Result<()>
    where
        F: FnMut(&[i64]) -> Result<()>,
    {
        self.nodes += 1;
        if self.nodes > self.node_limit {
            return Err(Error::SearchLimit(self.node_limit));
        }
        if !self.feasible(depth, &partial) {
            return Ok(());
        }
        if depth == self.upper.len() {
            return leaf(x);
        }
        for v in 0..=self.upper[depth] {
            let next: Vec<Rat> = partial
                .iter()
                .enumerate()
                .map(|(r, s)| *s + self.rows[r][depth] * int(v))
                .collect();
            x[depth] = v;
            self.go(depth + 1, x, next, leaf)?;
        }
        x[depth] = 0;
        Ok(())
    }
}

/// Exact condition (iv) for a chosen pair of sub-divisors. Returns
/// `(deg r0, m)` if it holds.
fn weight_condition(
    r1: &Divisor,
    r2: &Divisor,
    lattice: &RelationLattice,
) -> Result<Option<(i64, i64)>> {
    let level = i64::from(r1.level());
    let ratio = &r1.weight().value / &r2.weight().value;
    let Some(sol) = lattice.solve_in_subgroup(&ratio, &[Q, P]) else {
        return Ok(None);
    };
    if !sol.is_unique() {
        return Err(Error::NonGenericLattice(
            "q and p are multiplicatively dependent".into(),
        ));
    }
    let d = sol.particular[0] * int(level);
    let m = sol.particular[1];
    if !d.is_integer() || d < Rat::zero() || !m.is_integer() {
        return Ok(None);
    }
    Ok(Some((d.to_integer(), m.to_integer())))
}

fn candidate(r1: Divisor, r2: Divisor, d: i64, m: i64) -> RiccatiCandidate {
    RiccatiCandidate {
        deg_r1: r1.degree(),
        deg_r2: r2.degree(),
        r1,
        r2,
        deg_r0: d,
        m,
        counts: None,
    }
}

/// Point-level exhaustive search for arbitrary `p2`, `p3 ∈ Θ_2` (any level).
pub fn general_riccati_enumerator(
    p2: &ThetaQuotient,
    p3: &ThetaQuotient,
    lattice: &Arc<RelationLattice>,
    budget: usize,
) -> Result<Vec<RiccatiCandidate>> {
    general_riccati_enumerator_with_limit(p2, p3, lattice, budget, DEFAULT_NODE_LIMIT)
}

pub fn general_riccati_enumerator_with_limit(
    p2: &ThetaQuotient,
    p3: &ThetaQuotient,
    lattice: &Arc<RelationLattice>,
    budget: usize,
    node_limit: u64,
) -> Result<Vec<RiccatiCandidate>> {
    let d1 = tq_divisor(p2, lattice);
    let d2 = tq_divisor(&tq_sigma(p3, -1), lattice);
    enumerate_divisors(&d1, &d2, lattice, budget, node_limit)
}

/// The point-level search on the two bounding divisors directly.
pub fn enumerate_divisors(
    d1: &Divisor,
    d2: &Divisor,
    lattice: &Arc<RelationLattice>,
    budget: usize,
    node_limit: u64,
) -> Result<Vec<RiccatiCandidate>> {
    for d in [d1, d2] {
        let deg = d.terms().values().map(|n| n.max(&0)).sum::<i64>();
        if deg > budget as i64 {
            return Err(Error::BudgetExceeded {
                needed: deg,
                budget,
            });
        }
    }
    let level = d1.level();
    let side = |d: &Divisor, s: i64| -> Vec<(Monomial, i64, i64)> {
        d.terms()
            .iter()
            .filter(|(_, n)| **n > 0)
            .map(|(m, n)| (m.clone(), *n, s))
            .collect()
    };
    let mut pts = side(d1, 1);
    pts.extend(side(d2, -1));
    let vars: Vec<(BTreeMap<String, Rat>, i64)> = pts
        .iter()
        .map(|(m, _, s)| (projected(lattice, m), *s))
        .collect();
    let rows = linear_rows(lattice, level, &vars);
    let support = cone_support(&rows, vars.len() + 1);
    let upper: Vec<i64> = pts
        .iter()
        .zip(&support)
        .map(|((_, n, _), ok)| if *ok { *n } else { 0 })
        .collect();
    let mut walker = Walker::new(&rows, upper, support[vars.len()], node_limit);
    let mut out = Vec::new();
    walker.run(&mut |x: &[i64]| {
        let mut a = Divisor::zero(level, lattice.clone());
        let mut b = Divisor::zero(level, lattice.clone());
        for ((m, _, s), k) in pts.iter().zip(x) {
            if *s > 0 {
                a.add_point(m, *k);
            } else {
                b.add_point(m, *k);
            }
        }
        if a.degree() != b.degree() {
            return Ok(());
        }
        if let Some((d, m)) = weight_condition(&a, &b, lattice)? {
            out.push(candidate(a, b, d, m));
        }
        Ok(())
    })?;
    sort_candidates(&mut out);
    Ok(out)
}

/// All `k`-subsets of `items`, in lexicographic index order.
fn subsets<T: Clone>(items: &[T], k: usize) -> Vec<Vec<T>> {
    fn rec<T: Clone>(items: &[T], k: usize, start: usize, cur: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i].clone());
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(items, k, 0, &mut Vec::new(), &mut out);
    out
}

/// Count-level search for multiplicity-one divisors over a generic lattice.
///
/// Support points with the same image in `V / (L_Q + Q·p)` are
/// interchangeable for the linear conditions, so the search runs over how
/// many points of each such group are used and only expands into explicit
/// subsets for count vectors that pass the linear test.
pub fn riccati_constraint_search(
    p2_div: &Divisor,
    sigma_inv_p3_div: &Divisor,
    lattice: &Arc<RelationLattice>,
    case: Case,
) -> Result<Vec<RiccatiCandidate>> {
    riccati_constraint_search_with_limit(p2_div, sigma_inv_p3_div, lattice, case, DEFAULT_NODE_LIMIT)
}

pub fn riccati_constraint_search_with_limit(
    p2_div: &Divisor,
    sigma_inv_p3_div: &Divisor,
    lattice: &Arc<RelationLattice>,
    case: Case,
    node_limit: u64,
) -> Result<Vec<RiccatiCandidate>> {
    if !lattice.same_span(&case.lattice()) {
        return Err(Error::NonGenericLattice(case.to_string()));
    }
    for d in [p2_div, sigma_inv_p3_div] {
        if let Some(n) = d.terms().values().find(|n| **n != 1) {
            return Err(Error::Multiplicity(*n));
        }
    }
    let level = p2_div.level();
    let group = |d: &Divisor| -> Vec<(BTreeMap<String, Rat>, Vec<Monomial>)> {
        let mut g: BTreeMap<Vec<(String, Rat)>, (BTreeMap<String, Rat>, Vec<Monomial>)> =
            BTreeMap::new();
        for pt in d.terms().keys() {
            let v = projected(lattice, pt);
            let key: Vec<(String, Rat)> = v.iter().map(|(a, b)| (a.clone(), *b)).collect();
            g.entry(key).or_insert_with(|| (v, Vec::new())).1.push(pt.clone());
        }
        g.into_values().collect()
    };
    let g1 = group(p2_div);
    let g2 = group(sigma_inv_p3_div);
    let vars: Vec<(BTreeMap<String, Rat>, i64)> = g1
        .iter()
        .map(|(v, _)| (v.clone(), 1))
        .chain(g2.iter().map(|(v, _)| (v.clone(), -1)))
        .collect();
    let members: Vec<&Vec<Monomial>> = g1.iter().chain(g2.iter()).map(|(_, m)| m).collect();
    let rows = linear_rows(lattice, level, &vars);
    let support = cone_support(&rows, vars.len() + 1);
    let upper: Vec<i64> = members
        .iter()
        .zip(&support)
        .map(|(m, ok)| if *ok { m.len() as i64 } else { 0 })
        .collect();
    let n1 = g1.len();
    let mut walker = Walker::new(&rows, upper, support[vars.len()], node_limit);
    let mut out = Vec::new();
    walker.run(&mut |counts: &[i64]| {
        let choices: Vec<Vec<Vec<Monomial>>> = members
            .iter()
            .zip(counts)
            .map(|(m, c)| subsets(m, *c as usize))
            .collect();
        let mut idx = vec![0usize; choices.len()];
        loop {
            let mut a = Divisor::zero(level, lattice.clone());
            let mut b = Divisor::zero(level, lattice.clone());
            for (g, (ch, i)) in choices.iter().zip(&idx).enumerate() {
                for pt in &ch[*i] {
                    if g < n1 {
                        a.add_point(pt, 1);
                    } else {
                        b.add_point(pt, 1);
                    }
                }
            }
            if let Some((d, m)) = weight_condition(&a, &b, lattice)? {
                out.push(candidate(a, b, d, m));
            }
            // odometer over the subset choices
            let mut g = 0;
            loop {
                if g == idx.len() {
                    return Ok(());
                }
                idx[g] += 1;
                if idx[g] < choices[g].len() {
                    break;
                }
                idx[g] = 0;
                g += 1;
            }
        }
    })?;
    attach_counts(&mut out, &case.epsilons(), lattice);
    sort_candidates(&mut out);
    Ok(out)
}

/// Whether two candidate lists describe the same set.
pub fn same_candidates(a: &[RiccatiCandidate], b: &[RiccatiCandidate]) -> bool {
    let mut ka: Vec<CandidateKey> = a.iter().map(|c| c.key()).collect();
    let mut kb: Vec<CandidateKey> = b.iter().map(|c| c.key()).collect();
    ka.sort();
    kb.sort();
    ka == kb
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thetafield::Hypergeometric;

    fn m(s: &str) -> Monomial {
        s.parse().unwrap()
    }

    #[test]
    fn hypergeometric_only_constant_candidate() {
        for case in [Case::A, Case::B] {
            let h = Hypergeometric::for_case(case).unwrap();
            let d1 = tq_divisor(&h.p2, &h.lattice);
            let d2 = tq_divisor(&h.sigma_inv_p3(), &h.lattice);
            let c = riccati_constraint_search(&d1, &d2, &h.lattice, case).unwrap();
            assert_eq!(c.len(), 1, "case {case}");
            assert!(c[0].is_constant());
            let counts = c[0].counts.as_ref().unwrap();
            assert_eq!(counts.alpha, vec![0; 8]);
            assert_eq!(counts.gamma, 0);
            let g = general_riccati_enumerator(&h.p2, &h.p3, &h.lattice, 48).unwrap();
            assert!(same_candidates(&c, &g));
        }
    }

    #[test]
    fn empty_divisors_give_single_zero_candidate() {
        let l = Arc::new(Case::A.lattice());
        let z = Divisor::zero(2, l.clone());
        let c = riccati_constraint_search(&z, &z, &l, Case::A).unwrap();
        assert_eq!(c.len(), 1);
        assert!(c[0].is_constant());
        assert_eq!(c[0].m, 0);
    }

    #[test]
    fn crafted_half_q_shift_is_found() {
        // div p2 = [q^{1/2}], div σ^{-1}p3 = [1]: r1/r2 has weight q_2.
        let l = Arc::new(Case::A.lattice());
        let p2 = ThetaQuotient::theta(2, m("q^-1/2"));
        let p3 = ThetaQuotient::theta(2, m("q^1/2"));
        let c = general_riccati_enumerator(&p2, &p3, &l, 4).unwrap();
        assert_eq!(c.len(), 2);
        let nz = c.iter().find(|c| !c.is_constant()).unwrap();
        assert_eq!((nz.deg_r1, nz.deg_r2, nz.deg_r0, nz.m), (1, 1, 1, 0));
    }

    #[test]
    fn negative_q_power_is_rejected() {
        // weight ratio q^{-1/2} needs deg r0 = -1
        let l = Arc::new(Case::A.lattice());
        let p2 = ThetaQuotient::theta(2, Monomial::one());
        let p3 = ThetaQuotient::theta(2, Monomial::one());
        // σ^{-1}p3 = θ(q^{-1/2} z2): zero at q^{1/2}; r1 = [1], r2 = [q^{1/2}]
        let c = general_riccati_enumerator(&p2, &p3, &l, 4).unwrap();
        assert!(c.iter().all(|c| c.is_constant()));
    }

    #[test]
    fn budget_is_enforced() {
        let h = Hypergeometric::for_case(Case::A).unwrap();
        let r = general_riccati_enumerator(&h.p2, &h.p3, &h.lattice, 47);
        assert_eq!(r.unwrap_err(), Error::BudgetExceeded { needed: 48, budget: 47 });
    }

    #[test]
    fn non_generic_lattice_rejected() {
        let l = Arc::new(Case::A.lattice().with_relations(&[m("e1*e8*q^-1")]).unwrap());
        let z = Divisor::zero(2, l.clone());
        assert!(matches!(
            riccati_constraint_search(&z, &z, &l, Case::A),
            Err(Error::NonGenericLattice(_))
        ));
    }

    #[test]
    fn multiplicity_two_rejected() {
        let l = Arc::new(Case::A.lattice());
        let d = Divisor::from_points(2, l.clone(), [(m("e1^1/2"), 2)]);
        let z = Divisor::zero(2, l.clone());
        assert_eq!(
            riccati_constraint_search(&d, &z, &l, Case::A),
            Err(Error::Multiplicity(2))
        );
    }

    #[test]
    fn subsets_count() {
        assert_eq!(subsets(&[1, 2, 3, 4], 2).len(), 6);
        assert_eq!(subsets(&[1, 2], 0), vec![Vec::<i32>::new()]);
    }
}
