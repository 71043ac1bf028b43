//! Integer relation lattices among generators, and exact linear algebra over
//! the divisible hull.
//!
//! A [`RelationLattice`] stores integer exponent vectors declared to multiply
//! to 1, kept in Hermite normal form. Every equality decision is taken in the
//! divisible hull, i.e. modulo the rational span of the basis; the integer
//! basis itself is what gets reported and compared.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{One, Zero};

use super::monomial::{int, Monomial, Rat};
use crate::error::{Error, Result};

pub const P: &str = "p";
pub const Q: &str = "q";

type Sparse = BTreeMap<String, Rat>;

fn sparse_of(m: &Monomial) -> Sparse {
    m.exponents().clone()
}

fn monomial_of(torsion: Rat, v: &Sparse) -> Monomial {
    Monomial::from_parts(torsion, v.iter().map(|(g, e)| (g.clone(), *e)))
}

fn axpy(v: &mut Sparse, c: Rat, row: &Sparse) {
    for (g, e) in row {
        let slot = v.entry(g.clone()).or_insert_with(Rat::zero);
        *slot += c * *e;
        if slot.is_zero() {
            v.remove(g);
        }
    }
}

/// Pivot priority: ordinary generators first (in lattice order, unknown names
/// after them), then `q`, then `p`. Keeping `p` last means reduced vectors
/// keep an explicit `p` coordinate whenever possible.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Priority {
    order: Vec<String>,
}

impl Priority {
    fn rank(&self, g: &str) -> (u8, usize, String) {
        match g {
            P => (3, 0, String::new()),
            Q => (2, 0, String::new()),
            _ => match self.order.iter().position(|x| x == g) {
                Some(i) => (0, i, String::new()),
                None => (1, 0, g.to_string()),
            },
        }
    }
}

/// Reduced row echelon form of a set of rational sparse vectors; reduces any
/// vector to the canonical representative of its coset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reducer {
    priority: Priority,
    rows: Vec<(String, Sparse)>,
}

impl Reducer {
    fn new(order: &[String]) -> Self {
        Reducer {
            priority: Priority {
                order: order.to_vec(),
            },
            rows: Vec::new(),
        }
    }

    fn push(&mut self, v: &Sparse) {
        let mut v = self.reduce_sparse(v);
        let Some(pivot) = v
            .keys()
            .min_by_key(|g| self.priority.rank(g))
            .cloned()
        else {
            return;
        };
        let c = v[&pivot];
        for e in v.values_mut() {
            *e /= c;
        }
        for (_, row) in self.rows.iter_mut() {
            if let Some(c) = row.get(&pivot).copied() {
                axpy(row, -c, &v);
            }
        }
        self.rows.push((pivot, std::mem::take(&mut v)));
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub(crate) fn reduce_sparse(&self, v: &Sparse) -> Sparse {
        let mut v = v.clone();
        for (pivot, row) in &self.rows {
            if let Some(c) = v.get(pivot).copied() {
                axpy(&mut v, -c, row);
            }
        }
        v
    }

    /// Canonical free part modulo the span; torsion is left untouched.
    pub fn reduce(&self, m: &Monomial) -> Monomial {
        monomial_of(m.torsion(), &self.reduce_sparse(&sparse_of(m)))
    }

    pub fn is_zero_mod(&self, m: &Monomial) -> bool {
        self.reduce_sparse(&sparse_of(m)).is_empty()
    }
}

/// Affine solution set `particular + span(null_space)` of a membership query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Membership {
    pub particular: Vec<Rat>,
    pub null_space: Vec<Vec<Rat>>,
}

impl Membership {
    pub fn is_unique(&self) -> bool {
        self.null_space.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct RelationLattice {
    generators: Vec<String>,
    basis: Vec<Vec<i64>>,
    reducer: Reducer,
}

impl PartialEq for RelationLattice {
    fn eq(&self, other: &Self) -> bool {
        self.generators == other.generators && self.basis == other.basis
    }
}

impl Eq for RelationLattice {}

impl RelationLattice {
    pub fn new(generators: Vec<String>, relations: Vec<Vec<i64>>) -> Result<Self> {
        for (i, g) in generators.iter().enumerate() {
            if generators[..i].contains(g) {
                return Err(Error::InvalidArgument(format!("duplicate generator {g}")));
            }
        }
        for r in &relations {
            if r.len() != generators.len() {
                return Err(Error::InvalidArgument(format!(
                    "relation of length {} over {} generators",
                    r.len(),
                    generators.len()
                )));
            }
        }
        let basis = hermite_normal_form(relations);
        let mut reducer = Reducer::new(&generators);
        for row in &basis {
            reducer.push(&Self::row_sparse(&generators, row));
        }
        Ok(RelationLattice {
            generators,
            basis,
            reducer,
        })
    }

    pub fn empty(generators: Vec<String>) -> Self {
        Self::new(generators, Vec::new()).expect("empty lattice is always valid")
    }

    /// Relations given as monomials equal to 1; rational exponents are cleared
    /// by scaling each relation with its common denominator.
    pub fn from_monomials(generators: Vec<String>, relations: &[Monomial]) -> Result<Self> {
        let mut rows = Vec::new();
        for r in relations {
            if !r.is_torsion_free() {
                return Err(Error::InvalidArgument(format!(
                    "relation {r} has a torsion part"
                )));
            }
            if let Some(g) = r.exponents().keys().find(|g| !generators.contains(g)) {
                return Err(Error::InvalidArgument(format!(
                    "relation {r} uses unknown generator {g}"
                )));
            }
            let den = r.denominator_lcm();
            rows.push(
                generators
                    .iter()
                    .map(|g| (r.exponent(g) * int(den)).to_integer())
                    .collect(),
            );
        }
        Self::new(generators, rows)
    }

    fn row_sparse(generators: &[String], row: &[i64]) -> Sparse {
        generators
            .iter()
            .zip(row)
            .filter(|(_, e)| **e != 0)
            .map(|(g, e)| (g.clone(), int(*e)))
            .collect()
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn relation_monomials(&self) -> Vec<Monomial> {
        self.basis
            .iter()
            .map(|r| monomial_of(Rat::zero(), &Self::row_sparse(&self.generators, r)))
            .collect()
    }

    /// A larger lattice: these relations plus the given ones.
    pub fn with_relations(&self, extra: &[Monomial]) -> Result<Self> {
        let mut rels = self.relation_monomials();
        rels.extend_from_slice(extra);
        let mut gens = self.generators.clone();
        for r in extra {
            for g in r.exponents().keys() {
                if !gens.contains(g) {
                    gens.push(g.clone());
                }
            }
        }
        Self::from_monomials(gens, &rels)
    }

    /// Equality of rational spans, independent of generator order.
    pub fn same_span(&self, other: &Self) -> bool {
        self.rank() == other.rank()
            && other
                .relation_monomials()
                .iter()
                .all(|m| self.reducer.is_zero_mod(m))
    }

    pub fn reducer(&self) -> &Reducer {
        &self.reducer
    }

    /// Canonical free part modulo the lattice (torsion untouched).
    pub fn reduce(&self, m: &Monomial) -> Monomial {
        self.reducer.reduce(m)
    }

    /// Whether `m` equals 1: torsion zero and free part in the lattice span.
    pub fn is_trivial(&self, m: &Monomial) -> bool {
        m.is_torsion_free() && self.reducer.is_zero_mod(m)
    }

    pub fn equivalent(&self, a: &Monomial, b: &Monomial) -> bool {
        self.is_trivial(&(a / b))
    }

    /// Span of the lattice together with the listed generators.
    pub fn projector(&self, extra: &[&str]) -> Reducer {
        let mut r = self.reducer.clone();
        for g in extra {
            r.push(&sparse_of(&Monomial::gen(g)));
        }
        r
    }

    /// Canonical representative of the class of `m` in `C*/p^Z`, together with
    /// the integer `n` such that `m ≡ rep · p^n` modulo the lattice.
    pub fn canonical_point(&self, m: &Monomial) -> (Monomial, i64) {
        let v = self.reducer.reduce_sparse(&sparse_of(m));
        let rp = self.reducer.reduce_sparse(&sparse_of(&Monomial::gen(P)));
        let Some(coord) = (if rp.contains_key(P) {
            Some(P.to_string())
        } else {
            rp.keys().next().cloned()
        }) else {
            return (monomial_of(m.torsion(), &v), 0);
        };
        let x = v.get(&coord).copied().unwrap_or_else(Rat::zero) / rp[&coord];
        let n = x.floor().to_integer();
        let mut v = v;
        axpy(&mut v, -int(n), &rp);
        (monomial_of(m.torsion(), &v), n)
    }

    /// Solves `m ≡ ∏ g^{a_g}` over the rationals, modulo the lattice. Nonzero
    /// torsion is never a member. Free variables of an underdetermined system
    /// are set to zero in `particular`.
    pub fn solve_in_subgroup(&self, m: &Monomial, subgroup: &[&str]) -> Option<Membership> {
        if !m.is_torsion_free() {
            return None;
        }
        let target = self.reducer.reduce_sparse(&sparse_of(m));
        let cols: Vec<Sparse> = subgroup
            .iter()
            .map(|g| self.reducer.reduce_sparse(&sparse_of(&Monomial::gen(g))))
            .collect();
        solve_rational(&cols, &target)
    }

    pub fn member_with_exponents(&self, m: &Monomial, subgroup: &[&str]) -> Option<Vec<Rat>> {
        self.solve_in_subgroup(m, subgroup).map(|s| s.particular)
    }
}

/// `member_with_exponents` as a free function, in argument order
/// `(monomial, subgroup, lattice)`.
pub fn member_with_exponents(
    m: &Monomial,
    subgroup: &[&str],
    lattice: &RelationLattice,
) -> Option<Vec<Rat>> {
    lattice.member_with_exponents(m, subgroup)
}

/// Solves `Σ a_i cols[i] = target` over Q.
fn solve_rational(cols: &[Sparse], target: &Sparse) -> Option<Membership> {
    let n = cols.len();
    let mut keys: Vec<&String> = cols.iter().flat_map(|c| c.keys()).chain(target.keys()).collect();
    keys.sort();
    keys.dedup();
    // Augmented matrix, one row per coordinate.
    let mut mat: Vec<Vec<Rat>> = keys
        .iter()
        .map(|k| {
            let mut row: Vec<Rat> = cols
                .iter()
                .map(|c| c.get(*k).copied().unwrap_or_else(Rat::zero))
                .collect();
            row.push(target.get(*k).copied().unwrap_or_else(Rat::zero));
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(i) = (r..mat.len()).find(|&i| !mat[i][c].is_zero()) else {
            continue;
        };
        mat.swap(r, i);
        let pv = mat[r][c];
        for x in mat[r].iter_mut() {
            *x /= pv;
        }
        for i in 0..mat.len() {
            if i != r && !mat[i][c].is_zero() {
                let f = mat[i][c];
                for j in 0..=n {
                    let d = f * mat[r][j];
                    mat[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if mat[r..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    let mut particular = vec![Rat::zero(); n];
    for (i, &c) in pivots.iter().enumerate() {
        particular[c] = mat[i][n];
    }
    let null_space = (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Rat::zero(); n];
            v[free] = Rat::one();
            for (i, &c) in pivots.iter().enumerate() {
                v[c] = -mat[i][free];
            }
            v
        })
        .collect();
    Some(Membership {
        particular,
        null_space,
    })
}

/// Row-style Hermite normal form: nonzero rows, positive pivots, entries
/// above each pivot reduced into `[0, pivot)`.
pub fn hermite_normal_form(rows: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut a: Vec<Vec<i128>> = rows
        .into_iter()
        .map(|r| r.into_iter().map(i128::from).collect())
        .collect();
    let rank = echelonize(&mut a, ncols);
    a.truncate(rank);
    a.into_iter()
        .map(|r| {
            r.into_iter()
                .map(|x| i64::try_from(x).expect("HNF entry overflows i64"))
                .collect()
        })
        .collect()
}

/// Integer row reduction on the first `ncols` columns with unimodular row
/// operations; returns the number of pivot rows. Rows past the rank are zero
/// on those columns.
fn echelonize(a: &mut [Vec<i128>], ncols: usize) -> usize {
    let m = a.len();
    let mut r = 0;
    for col in 0..ncols {
        if r == m {
            break;
        }
        loop {
            let Some(best) = (r..m)
                .filter(|&i| a[i][col] != 0)
                .min_by_key(|&i| a[i][col].abs())
            else {
                break;
            };
            a.swap(r, best);
            let mut done = true;
            for i in r + 1..m {
                if a[i][col] != 0 {
                    let f = Integer::div_floor(&a[i][col], &a[r][col]);
                    let (top, rest) = a.split_at_mut(i);
                    for (x, y) in rest[0].iter_mut().zip(&top[r]) {
                        *x -= f * y;
                    }
                    if a[i][col] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if a[r][col] == 0 {
            continue;
        }
        if a[r][col] < 0 {
            for x in a[r].iter_mut() {
                *x = -*x;
            }
        }
        for i in 0..r {
            let f = Integer::div_floor(&a[i][col], &a[r][col]);
            if f != 0 {
                let (top, rest) = a.split_at_mut(r);
                for (x, y) in top[i].iter_mut().zip(&rest[0]) {
                    *x -= f * y;
                }
            }
        }
        r += 1;
    }
    r
}

/// Full integer kernel of a monomial substitution.
///
/// `images[i]` is the image of `source[i]` written in the target generators.
/// Returns all integer exponent vectors `v` over `source` whose image
/// `∏ images[i]^{v_i}` is trivial modulo `target`, as a lattice in Hermite
/// normal form. Torsion parts of the images are ignored.
pub fn kernel_lattice(
    source: &[String],
    images: &[Monomial],
    target: &RelationLattice,
) -> Result<RelationLattice> {
    if source.len() != images.len() {
        return Err(Error::InvalidArgument(format!(
            "{} source generators but {} images",
            source.len(),
            images.len()
        )));
    }
    let reduced: Vec<Sparse> = images
        .iter()
        .map(|m| target.reducer.reduce_sparse(&sparse_of(m)))
        .collect();
    let mut coords: Vec<&String> = reduced.iter().flat_map(|v| v.keys()).collect();
    coords.sort();
    coords.dedup();
    let n = source.len();
    // One integer row per coordinate, denominators cleared row by row.
    let b: Vec<Vec<i128>> = coords
        .iter()
        .map(|k| {
            let row: Vec<Rat> = reduced
                .iter()
                .map(|v| v.get(*k).copied().unwrap_or_else(Rat::zero))
                .collect();
            let den = row.iter().fold(1i64, |acc, x| acc.lcm(x.denom()));
            row.iter()
                .map(|x| i128::from((*x * int(den)).to_integer()))
                .collect()
        })
        .collect();
    // [B^T | I]: reduce on the B^T part; zero rows carry kernel vectors.
    let r = b.len();
    let mut aug: Vec<Vec<i128>> = (0..n)
        .map(|i| {
            let mut row: Vec<i128> = b.iter().map(|brow| brow[i]).collect();
            row.extend((0..n).map(|j| i128::from(i == j)));
            row
        })
        .collect();
    let rank = echelonize(&mut aug, r);
    let kernel: Vec<Vec<i64>> = aug[rank..]
        .iter()
        .map(|row| {
            row[r..]
                .iter()
                .map(|x| i64::try_from(*x).expect("kernel entry overflows i64"))
                .collect()
        })
        .collect();
    RelationLattice::new(source.to_vec(), kernel)
}
