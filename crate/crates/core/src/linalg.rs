//! Exact sparse linear algebra over [`Scalar`].
//!
//! Elimination is fraction-free Bareiss style on denominator-cleared rows
//! with lowest-index pivot tie-breaking, so ranks, nullspaces and solutions
//! are exact and deterministic given the input ordering.

use crate::qfield::{LaurentPoly, Scalar};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Sparse vector; stored entries are nonzero in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SparseVector {
    entries: BTreeMap<usize, Scalar>,
}

impl SparseVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn unit(i: usize) -> Self {
        let mut v = Self::new();
        v.set(i, Scalar::one());
        v
    }

    pub fn set(&mut self, i: usize, c: Scalar) {
        if c.is_zero() {
            self.entries.remove(&i);
        } else {
            self.entries.insert(i, c);
        }
    }

    pub fn add_to(&mut self, i: usize, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let cur = self.entries.remove(&i);
        let next = match cur {
            Some(x) => &x + c,
            None => c.clone(),
        };
        if !next.is_zero() {
            self.entries.insert(i, next);
        }
    }

    pub fn get(&self, i: usize) -> Scalar {
        self.entries.get(&i).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.entries.iter().map(|(&i, c)| (i, c))
    }

    pub fn scaled(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::new();
        }
        SparseVector {
            entries: self.entries.iter().map(|(&i, x)| (i, x * c)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (i, c) in other.iter() {
            out.add_to(i, c);
        }
        out
    }

    pub fn axpy(&mut self, c: &Scalar, other: &Self) {
        if c.is_zero() {
            return;
        }
        for (i, x) in other.iter() {
            self.add_to(i, &(x * c));
        }
    }
}

/// Sparse matrix; zero entries absent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: BTreeMap<(usize, usize), Scalar>,
}

impl SparseMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        assert!(r < self.rows && c < self.cols);
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        self.entries.get(&(r, c)).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), &Scalar)> {
        self.entries.iter().map(|(&k, v)| (k, v))
    }

    pub fn apply(&self, v: &SparseVector) -> SparseVector {
        let mut out = SparseVector::new();
        for ((r, c), x) in self.iter() {
            let vc = v.get(c);
            if !vc.is_zero() {
                out.add_to(r, &(x * &vc));
            }
        }
        out
    }
}

/// Row-echelon data from fraction-free elimination.
struct Echelon {
    /// (pivot row in reduced order, pivot column) pairs.
    pivots: Vec<(usize, usize)>,
    /// Rows after elimination, in elimination order, as polynomial rows.
    rows: Vec<Vec<LaurentPoly>>,
}

/// Bareiss elimination on denominator-cleared rows. Pivot selection scans
/// columns left to right and takes the lowest-index usable row.
fn eliminate(m: &SparseMatrix, extra_cols: &[SparseVector]) -> Echelon {
    let ncols = m.cols + extra_cols.len();
    // Dense polynomial rows with denominators cleared row by row.
    let mut rows: Vec<Vec<LaurentPoly>> = Vec::with_capacity(m.rows);
    for r in 0..m.rows {
        let mut scal: Vec<Scalar> = Vec::with_capacity(ncols);
        for c in 0..m.cols {
            scal.push(m.get(r, c));
        }
        for e in extra_cols {
            scal.push(e.get(r));
        }
        let mut den = LaurentPoly::one();
        for s in &scal {
            if !s.is_zero() {
                let g = den.gcd(s.denominator());
                den = &den * &s.denominator().exact_div(&g);
            }
        }
        let row: Vec<LaurentPoly> = scal
            .iter()
            .map(|s| {
                if s.is_zero() {
                    LaurentPoly::zero()
                } else {
                    s.numerator() * &den.exact_div(s.denominator())
                }
            })
            .collect();
        rows.push(row);
    }

    let mut pivots = Vec::new();
    let mut prev = LaurentPoly::one();
    let mut next_row = 0usize;
    for col in 0..ncols {
        if next_row >= rows.len() {
            break;
        }
        let Some(pr) = (next_row..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(next_row, pr);
        let pivot_val = rows[next_row][col].clone();
        for r in next_row + 1..rows.len() {
            if rows[r][col].is_zero() {
                // Still rescale per Bareiss to keep entries as exact minors.
                for c in col..ncols {
                    if !rows[r][c].is_zero() {
                        rows[r][c] = (&rows[r][c] * &pivot_val).exact_div(&prev);
                    }
                }
            } else {
                let lead = rows[r][col].clone();
                for c in col..ncols {
                    let t = &(&rows[r][c] * &pivot_val) - &(&rows[next_row][c] * &lead);
                    rows[r][c] = if t.is_zero() { t } else { t.exact_div(&prev) };
                }
            }
        }
        pivots.push((next_row, col));
        prev = pivot_val;
        next_row += 1;
    }
    Echelon { pivots, rows }
}

pub fn rank(m: &SparseMatrix) -> usize {
    eliminate(m, &[]).pivots.len()
}

/// A basis of the right nullspace, deterministic given input ordering:
/// one vector per free column, free variable set to 1 and other free
/// variables to 0.
pub fn nullspace(m: &SparseMatrix) -> Vec<SparseVector> {
    let ech = eliminate(m, &[]);
    let pivot_cols: Vec<usize> = ech.pivots.iter().map(|&(_, c)| c).collect();
    let mut out = Vec::new();
    for free in 0..m.cols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = SparseVector::new();
        v.set(free, Scalar::one());
        // Back-substitute pivots from the bottom up.
        for k in (0..ech.pivots.len()).rev() {
            let (r, pc) = ech.pivots[k];
            if pc > free {
                continue;
            }
            let mut acc = Scalar::zero();
            for c in pc + 1..=free {
                let coef = &ech.rows[r][c];
                if coef.is_zero() {
                    continue;
                }
                let vc = v.get(c);
                if !vc.is_zero() {
                    acc += &(&Scalar::from_poly(coef.clone()) * &vc);
                }
            }
            let pv = Scalar::from_poly(ech.rows[r][pc].clone());
            v.set(pc, &(-&acc) / &pv);
        }
        out.push(v);
    }
    out
}

/// Solve `m x = rhs`. Returns the canonical solution with free variables
/// set to 0 and lowest-index pivoting, or `None` if inconsistent.
pub fn solve(m: &SparseMatrix, rhs: &SparseVector) -> Option<SparseVector> {
    let ech = eliminate(m, std::slice::from_ref(rhs));
    // A pivot in the augmented column means inconsistency.
    if ech.pivots.iter().any(|&(_, c)| c == m.cols) {
        return None;
    }
    // Rows below the pivot count must have zero augmented entry.
    for r in ech.pivots.len()..ech.rows.len() {
        if !ech.rows[r][m.cols].is_zero() {
            return None;
        }
    }
    let mut x = SparseVector::new();
    for k in (0..ech.pivots.len()).rev() {
        let (r, pc) = ech.pivots[k];
        let mut acc = Scalar::from_poly(ech.rows[r][m.cols].clone());
        for c in pc + 1..m.cols {
            let coef = &ech.rows[r][c];
            if coef.is_zero() {
                continue;
            }
            let xc = x.get(c);
            if !xc.is_zero() {
                acc -= &(&Scalar::from_poly(coef.clone()) * &xc);
            }
        }
        let pv = Scalar::from_poly(ech.rows[r][pc].clone());
        x.set(pc, &acc / &pv);
    }
    Some(x)
}

/// Outcome of a proportionality test `u = c * v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Proportionality {
    /// `u = c * v` with the given factor. Both vectors zero reports `c = 1`.
    Factor(Scalar),
    /// `u = 0` but `v != 0`; flagged apart from a genuine nonzero factor.
    LeftZero,
    NotProportional,
}

pub fn proportional(u: &SparseVector, v: &SparseVector) -> Proportionality {
    if v.is_zero() {
        return if u.is_zero() {
            Proportionality::Factor(Scalar::one())
        } else {
            Proportionality::NotProportional
        };
    }
    if u.is_zero() {
        return Proportionality::LeftZero;
    }
    let (i0, v0) = v.iter().next().unwrap();
    let u0 = u.get(i0);
    if u0.is_zero() {
        return Proportionality::NotProportional;
    }
    let c = &u0 / v0;
    if u == &v.scaled(&c) {
        Proportionality::Factor(c)
    } else {
        Proportionality::NotProportional
    }
}

/// Column reduction used when expressing spanning vectors in a chosen basis:
/// processes dense columns in order, returns the pivot column indices and,
/// for every column, its coordinates with respect to the pivot columns.
pub struct ColumnReduction {
    pub pivots: Vec<usize>,
    /// `coords[j]` expresses column j in the pivot columns (pivot columns
    /// get a unit vector).
    pub coords: Vec<Vec<Scalar>>,
}

/// Same contract as [`reduce_columns`], but routed through modular
/// evaluation with rational reconstruction and an exact verification of the
/// lifted result; falls back to the purely exact path when any step fails.
/// The pivot profile on success is provably the exact greedy profile.
pub fn reduce_columns_hybrid(nrows: usize, columns: &[Vec<Scalar>]) -> ColumnReduction {
    if columns.len() <= 6 {
        return reduce_columns(nrows, columns);
    }
    match crate::zp::modular_column_reduction(nrows, columns) {
        Some(red) => red,
        None => {
            if std::env::var("QAFFINE_TRACE_BUILD").is_ok() {
                eprintln!("modular reduction fell back (nrows={}, ncols={})", nrows, columns.len());
            }
            reduce_columns(nrows, columns)
        }
    }
}

pub fn reduce_columns(nrows: usize, columns: &[Vec<Scalar>]) -> ColumnReduction {
    struct Basis {
        lead: usize,
        vec: Vec<Scalar>,
        // Expression of this reduced vector in the original pivot columns.
        expr: Vec<Scalar>,
    }
    let mut basis: Vec<Basis> = Vec::new();
    let mut pivots = Vec::new();
    let mut coords = Vec::new();
    for col in columns {
        assert_eq!(col.len(), nrows);
        let mut r = col.clone();
        let mut alpha = vec![Scalar::zero(); basis.len()];
        for (k, b) in basis.iter().enumerate() {
            let c = r[b.lead].clone();
            if c.is_zero() {
                continue;
            }
            for (ri, bi) in r.iter_mut().zip(&b.vec) {
                *ri -= &(&c * bi);
            }
            alpha[k] = c;
        }
        match r.iter().position(|x| !x.is_zero()) {
            Some(lead) => {
                // New pivot column.
                let inv = r[lead].inv();
                let vec: Vec<Scalar> = r.iter().map(|x| x * &inv).collect();
                let mut expr = vec![Scalar::zero(); pivots.len() + 1];
                expr[pivots.len()] = inv.clone();
                for (k, a) in alpha.iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    let scale = &(-a) * &inv;
                    for (ei, be) in expr.iter_mut().zip(basis[k].expr.iter()) {
                        *ei += &(&scale * be);
                    }
                }
                pivots.push(coords.len());
                let mut unit = vec![Scalar::zero(); pivots.len()];
                unit[pivots.len() - 1] = Scalar::one();
                coords.push(unit);
                basis.push(Basis { lead, vec, expr });
            }
            None => {
                // Dependent column: coordinates from the alphas.
                let mut expr = vec![Scalar::zero(); pivots.len()];
                for (k, a) in alpha.iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    for (ei, be) in expr.iter_mut().zip(basis[k].expr.iter()) {
                        *ei += &(a * be);
                    }
                }
                coords.push(expr);
            }
        }
    }
    // Pad earlier coordinate vectors to the final pivot count.
    let np = pivots.len();
    for c in &mut coords {
        c.resize(np, Scalar::zero());
    }
    ColumnReduction { pivots, coords }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::qint;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q() -> Scalar {
        Scalar::q_pow(1)
    }

    #[test]
    fn nullspace_examples() {
        // 1x1 zero matrix -> basis {e1}
        let m = SparseMatrix::new(1, 1);
        let ns = nullspace(&m);
        assert_eq!(ns.len(), 1);
        assert_eq!(ns[0], SparseVector::unit(0));

        // 2x2 identity -> empty basis
        let mut id = SparseMatrix::new(2, 2);
        id.set(0, 0, Scalar::one());
        id.set(1, 1, Scalar::one());
        assert!(nullspace(&id).is_empty());

        // [[1, q], [q^-1, 1]] -> one vector proportional to (-q, 1),
        // and the canonical choice is exactly (-q, 1).
        let mut m = SparseMatrix::new(2, 2);
        m.set(0, 0, Scalar::one());
        m.set(0, 1, q());
        m.set(1, 0, Scalar::q_pow(-1));
        m.set(1, 1, Scalar::one());
        let ns = nullspace(&m);
        assert_eq!(ns.len(), 1);
        let mut expect = SparseVector::new();
        expect.set(0, -&q());
        expect.set(1, Scalar::one());
        assert_eq!(ns[0], expect);
    }

    #[test]
    fn solve_examples() {
        let mut id = SparseMatrix::new(2, 2);
        id.set(0, 0, Scalar::one());
        id.set(1, 1, Scalar::one());
        let sol = solve(&id, &SparseVector::unit(0)).unwrap();
        assert_eq!(sol, SparseVector::unit(0));

        // 1x2 system [1, 1]: rhs 0 -> (0,0); rhs 1 -> (1,0).
        let mut m = SparseMatrix::new(1, 2);
        m.set(0, 0, Scalar::one());
        m.set(0, 1, Scalar::one());
        let z = solve(&m, &SparseVector::new()).unwrap();
        assert!(z.is_zero());
        let s = solve(&m, &SparseVector::unit(0)).unwrap();
        assert_eq!(s, SparseVector::unit(0));

        // Singular inconsistent system.
        let mut m = SparseMatrix::new(2, 1);
        m.set(0, 0, Scalar::one());
        m.set(1, 0, Scalar::one());
        let mut rhs = SparseVector::new();
        rhs.set(0, Scalar::one());
        assert_eq!(solve(&m, &rhs), None);
    }

    #[test]
    fn proportional_examples() {
        let mut u = SparseVector::new();
        u.set(0, q());
        let v = SparseVector::unit(0);
        assert_eq!(proportional(&u, &v), Proportionality::Factor(q()));

        let mut w = SparseVector::new();
        w.set(0, Scalar::one());
        w.set(1, Scalar::one());
        assert_eq!(proportional(&w, &v), Proportionality::NotProportional);

        assert_eq!(proportional(&SparseVector::new(), &v), Proportionality::LeftZero);
        assert_eq!(
            proportional(&SparseVector::new(), &SparseVector::new()),
            Proportionality::Factor(Scalar::one())
        );
    }

    fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> SparseMatrix {
        let mut m = SparseMatrix::new(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if rng.gen_bool(0.6) {
                    let cv: i64 = rng.gen_range(-3..4);
                    let e: i64 = rng.gen_range(-2..3);
                    m.set(r, c, &Scalar::from_int(cv) * &Scalar::s_pow(e));
                }
            }
        }
        m
    }

    #[test]
    fn nullspace_vectors_are_exact_kernel_elements() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..25 {
            let rows = rng.gen_range(1..6);
            let cols = rng.gen_range(1..6);
            let m = random_matrix(&mut rng, rows, cols);
            let ns = nullspace(&m);
            for w in &ns {
                assert!(m.apply(w).is_zero());
            }
            assert_eq!(rank(&m) + ns.len(), cols);
        }
    }

    #[test]
    fn solve_agrees_with_apply() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..25 {
            let rows = rng.gen_range(1..6);
            let cols = rng.gen_range(1..6);
            let m = random_matrix(&mut rng, rows, cols);
            let mut x = SparseVector::new();
            for c in 0..cols {
                if rng.gen_bool(0.5) {
                    x.set(c, Scalar::from_int(rng.gen_range(-2..3)));
                }
            }
            let rhs = m.apply(&x);
            let sol = solve(&m, &rhs).expect("consistent by construction");
            assert_eq!(m.apply(&sol), rhs);
        }
    }

    #[test]
    fn reduce_columns_expresses_dependents() {
        // Columns: c0 = (1, q^-1), c1 = (q, 1) = q*c0, c2 = (0,1).
        let cols = vec![
            vec![Scalar::one(), Scalar::q_pow(-1)],
            vec![qint(1, 1).clone().pow(1), Scalar::one()],
            vec![Scalar::zero(), Scalar::one()],
        ];
        let mut cols = cols;
        cols[1][0] = Scalar::q_pow(1);
        let red = reduce_columns(2, &cols);
        assert_eq!(red.pivots, vec![0, 2]);
        assert_eq!(red.coords[1][0], Scalar::q_pow(1));
        assert!(red.coords[1][1].is_zero());
    }
}
