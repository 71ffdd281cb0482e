//! Independent weight multiplicity oracle for integrable highest weight
//! modules of the two affine root systems used here, via Freudenthal's
//! recursion.
//!
//! The recursion is exact integer arithmetic: reflect a weight to the
//! dominant chamber (reflections preserve multiplicities), then
//!
//! `(|L+rho|^2 - |w+rho|^2) mult(w) = 2 sum_{a>0} mult(a) sum_{j>=1}
//! mult(w+ja) (w+ja, a)`
//!
//! over positive roots `a` counted with root multiplicity (imaginary roots
//! carry the rank of the finite part). The Weyl vector is fixed by
//! `rho(h_i) = 1` for every `i`.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

/// Affine root system tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AffineType {
    /// Rank-one affine type: two simple roots, imaginary multiplicity one.
    A1Aff,
    /// The C2 affine type: three simple roots with `d = (2, 1, 2)` matching
    /// the convention `q_1 = q`, `q_2 = q^2`; imaginary multiplicity two.
    C2Aff,
}

/// Cartan data plus positive-root enumeration for one affine type.
pub struct RootSystemData {
    pub kind: AffineType,
    pub n: usize,
    cartan: Vec<Vec<i64>>, // cartan[i][j] = alpha_j(h_i)
    d: Vec<i64>,           // (alpha_i, alpha_i) / 2
    marks: Vec<i64>,       // delta = sum marks[i] alpha_i
    imaginary_mult: i64,
    finite_positive: Vec<Vec<i64>>,
    mult_memo: RefCell<HashMap<(Vec<i64>, Vec<i64>), i64>>,
}

impl RootSystemData {
    pub fn new(kind: AffineType) -> Self {
        match kind {
            AffineType::A1Aff => RootSystemData {
                kind,
                n: 2,
                cartan: vec![vec![2, -2], vec![-2, 2]],
                d: vec![1, 1],
                marks: vec![1, 1],
                imaginary_mult: 1,
                finite_positive: vec![vec![0, 1]],
                mult_memo: RefCell::new(HashMap::new()),
            },
            AffineType::C2Aff => RootSystemData {
                kind,
                n: 3,
                cartan: vec![vec![2, -1, 0], vec![-2, 2, -2], vec![0, -1, 2]],
                d: vec![2, 1, 2],
                marks: vec![1, 2, 1],
                imaginary_mult: 2,
                finite_positive: vec![
                    vec![0, 1, 0],
                    vec![0, 0, 1],
                    vec![0, 1, 1],
                    vec![0, 2, 1],
                ],
                mult_memo: RefCell::new(HashMap::new()),
            },
        }
    }

    /// Symmetric bilinear form on root-coordinate vectors.
    fn form(&self, u: &[i64], v: &[i64]) -> i64 {
        let mut acc = 0i64;
        for i in 0..self.n {
            if u[i] == 0 {
                continue;
            }
            for j in 0..self.n {
                if v[j] != 0 {
                    acc += self.d[i] * self.cartan[i][j] * u[i] * v[j];
                }
            }
        }
        acc
    }

    /// `(mu, alpha_i)`-values of `Lambda - beta` as `h_i` pairings.
    fn pairings(&self, lambda: &[i64], beta: &[i64]) -> Vec<i64> {
        (0..self.n)
            .map(|i| lambda[i] - (0..self.n).map(|j| self.cartan[i][j] * beta[j]).sum::<i64>())
            .collect()
    }

    /// Positive real roots alpha with `alpha <= bound` componentwise,
    /// enumerated by imaginary depth then finite-root index.
    pub fn real_roots_below(&self, bound: &[i64]) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        let max_n = (0..self.n)
            .map(|i| bound[i] / self.marks[i])
            .min()
            .unwrap_or(0)
            .max(0)
            + 1;
        for nd in 0..=max_n {
            for f in &self.finite_positive {
                for sgn in [1i64, -1] {
                    if sgn < 0 && nd == 0 {
                        continue;
                    }
                    let alpha: Vec<i64> =
                        (0..self.n).map(|i| nd * self.marks[i] + sgn * f[i]).collect();
                    if alpha.iter().zip(bound).all(|(a, b)| a <= b) && alpha.iter().any(|&a| a > 0)
                    {
                        out.push(alpha);
                    }
                }
            }
        }
        out
    }

    fn imaginary_roots_below(&self, bound: &[i64]) -> Vec<Vec<i64>> {
        let max_k = (0..self.n).map(|i| bound[i] / self.marks[i]).min().unwrap_or(0);
        (1..=max_k)
            .map(|k| (0..self.n).map(|i| k * self.marks[i]).collect())
            .collect()
    }

    /// Weight multiplicity of `Lambda - beta` in the integrable module of
    /// highest weight `Lambda` (given by its `h_i` labels).
    pub fn mult(&self, lambda: &[i64], beta: &[i64]) -> i64 {
        assert_eq!(lambda.len(), self.n);
        assert_eq!(beta.len(), self.n);
        assert!(lambda.iter().all(|&m| m >= 0), "dominant highest weight required");
        self.mult_inner(lambda, beta.to_vec(), None)
    }

    /// Same as [`Self::mult`], with an explicit positive-root ordering for
    /// the recursion sum (the result must not depend on it).
    pub fn mult_with_root_order(
        &self,
        lambda: &[i64],
        beta: &[i64],
        order: &dyn Fn(&mut Vec<Vec<i64>>),
    ) -> i64 {
        self.mult_inner(lambda, beta.to_vec(), Some(order))
    }

    fn mult_inner(
        &self,
        lambda: &[i64],
        mut beta: Vec<i64>,
        order: Option<&dyn Fn(&mut Vec<Vec<i64>>)>,
    ) -> i64 {
        // Reflect to the dominant chamber; multiplicities are Weyl invariant.
        loop {
            if beta.iter().any(|&b| b < 0) {
                return 0;
            }
            if beta.iter().all(|&b| b == 0) {
                return 1;
            }
            let pair = self.pairings(lambda, &beta);
            match (0..self.n).find(|&i| pair[i] < 0) {
                None => break,
                Some(i) => beta[i] += pair[i],
            }
        }
        let key = (lambda.to_vec(), beta.clone());
        if order.is_none() {
            if let Some(&m) = self.mult_memo.borrow().get(&key) {
                return m;
            }
        }

        // Freudenthal at a dominant weight strictly below the top.
        let lam_rho: Vec<i64> = lambda.iter().map(|&m| m + 1).collect();
        let two_lr_beta: i64 =
            2 * (0..self.n).map(|i| self.d[i] * lam_rho[i] * beta[i]).sum::<i64>();
        let denom = two_lr_beta - self.form(&beta, &beta);
        assert!(denom > 0, "Freudenthal denominator must be positive at a dominant weight");

        let mut roots = self.real_roots_below(&beta);
        if let Some(ord) = order {
            ord(&mut roots);
        }
        let mut num: i64 = 0;
        let mut add_root = |alpha: &[i64], root_mult: i64, this: &Self| {
            let alpha_alpha = this.form(alpha, alpha);
            let lam_alpha: i64 =
                (0..this.n).map(|i| this.d[i] * lambda[i] * alpha[i]).sum::<i64>();
            let beta_alpha = this.form(&beta, alpha);
            let mut j = 1i64;
            loop {
                let shifted: Vec<i64> =
                    (0..this.n).map(|i| beta[i] - j * alpha[i]).collect();
                if shifted.iter().any(|&b| b < 0) {
                    break;
                }
                let m = this.mult_inner(lambda, shifted, order);
                if m != 0 {
                    // (lambda_weight + j alpha, alpha) with lambda_weight = Lambda - beta
                    let pairing = lam_alpha - beta_alpha + j * alpha_alpha;
                    num += root_mult * m * pairing;
                }
                j += 1;
            }
        };
        for alpha in &roots {
            add_root(alpha, 1, self);
        }
        for alpha in self.imaginary_roots_below(&beta) {
            add_root(&alpha, self.imaginary_mult, self);
        }
        let num = 2 * num;
        assert!(num % denom == 0, "Freudenthal division must be exact");
        let m = num / denom;
        assert!(m >= 0);
        if order.is_none() {
            self.mult_memo.borrow_mut().insert(key, m);
        }
        m
    }
}

/// Multiplicity table for the rank-one affine type, indexed by root
/// coordinates `(x, y)` of `Lambda - x a0 - y a1`, including all weights of
/// height `x + y <= height`. Zero multiplicities are omitted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultTableA1 {
    pub lambda: (i64, i64),
    pub height: u32,
    pub entries: BTreeMap<(u32, u32), u64>,
}

pub fn freudenthal_a1(m0: i64, m1: i64, height: u32) -> MultTableA1 {
    let rs = RootSystemData::new(AffineType::A1Aff);
    let lambda = [m0, m1];
    let mut entries = BTreeMap::new();
    for h in 0..=height {
        for x in 0..=h {
            let y = h - x;
            let m = rs.mult(&lambda, &[x as i64, y as i64]);
            if m > 0 {
                entries.insert((x, y), m as u64);
            }
        }
    }
    MultTableA1 { lambda: (m0, m1), height, entries }
}

/// Multiplicity table for the C2 affine type at depth `x0 <= depth` in the
/// null-root direction graded by the zero node. Zero multiplicities omitted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultTableC2 {
    pub lambda: (i64, i64, i64),
    pub depth: u32,
    pub entries: BTreeMap<(u32, u32, u32), u64>,
}

pub fn freudenthal_c2(m0: i64, m1: i64, m2: i64, depth: u32) -> MultTableC2 {
    let rs = RootSystemData::new(AffineType::C2Aff);
    let lambda = [m0, m1, m2];
    let lam_rho: Vec<i64> = lambda.iter().map(|&m| m + 1).collect();
    let level = m0 + m1 + m2;
    // Box large enough to contain the support ellipse at every x0 <= depth.
    let bound = (6 * (depth as i64 + 2) * (level + 1)).max(12);
    let mut entries = BTreeMap::new();
    for x0 in 0..=depth as i64 {
        for x1 in 0..=bound {
            for x2 in 0..=bound {
                let beta = [x0, x1, x2];
                let norm_ok = {
                    let two_lr: i64 =
                        2 * (0..3).map(|i| rs.d[i] * lam_rho[i] * beta[i]).sum::<i64>();
                    two_lr >= rs.form(&beta, &beta)
                };
                if (x1 == bound || x2 == bound) && norm_ok {
                    panic!("support box too small for depth {depth}");
                }
                if !norm_ok {
                    continue;
                }
                let m = rs.mult(&lambda, &beta);
                if m > 0 {
                    entries.insert((x0 as u32, x1 as u32, x2 as u32), m as u64);
                }
            }
        }
    }
    MultTableC2 { lambda: (m0, m1, m2), depth, entries }
}

/// Outcome of an exact table comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableDiff<K> {
    /// Depth range actually compared (minimum of the two tables).
    pub compared_depth: u32,
    /// First discrepancy `(key, left, right)` in key order, if any.
    pub first_diff: Option<(K, u64, u64)>,
    /// True when the inputs had different depth bounds.
    pub depth_mismatch: bool,
}

impl<K> TableDiff<K> {
    pub fn is_equal(&self) -> bool {
        self.first_diff.is_none()
    }
}

fn compare_maps<K: Ord + Clone>(
    a: &BTreeMap<K, u64>,
    b: &BTreeMap<K, u64>,
    in_range: impl Fn(&K) -> bool,
) -> Option<(K, u64, u64)> {
    let keys: std::collections::BTreeSet<K> =
        a.keys().chain(b.keys()).filter(|k| in_range(k)).cloned().collect();
    for k in keys {
        let av = a.get(&k).copied().unwrap_or(0);
        let bv = b.get(&k).copied().unwrap_or(0);
        if av != bv {
            return Some((k, av, bv));
        }
    }
    None
}

pub fn compare_a1(a: &MultTableA1, b: &MultTableA1) -> TableDiff<(u32, u32)> {
    let depth = a.height.min(b.height);
    TableDiff {
        compared_depth: depth,
        first_diff: compare_maps(&a.entries, &b.entries, |&(x, y)| x + y <= depth),
        depth_mismatch: a.height != b.height,
    }
}

pub fn compare_c2(a: &MultTableC2, b: &MultTableC2) -> TableDiff<(u32, u32, u32)> {
    let depth = a.depth.min(b.depth);
    TableDiff {
        compared_depth: depth,
        first_diff: compare_maps(&a.entries, &b.entries, |&(x0, _, _)| x0 <= depth),
        depth_mismatch: a.depth != b.depth,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn highest_weight_has_multiplicity_one() {
        let rs = RootSystemData::new(AffineType::A1Aff);
        assert_eq!(rs.mult(&[2, 0], &[0, 0]), 1);
        let rs2 = RootSystemData::new(AffineType::C2Aff);
        assert_eq!(rs2.mult(&[1, 0, 0], &[0, 0, 0]), 1);
    }

    #[test]
    fn a1_level2_first_layer() {
        let t = freudenthal_a1(2, 0, 2);
        assert_eq!(t.entries.get(&(1, 0)), Some(&1));
        // f1 kills the top vector when the h1 label is zero.
        assert_eq!(t.entries.get(&(0, 1)), None);
        // Level-two vacuum at the first null-root step.
        assert_eq!(t.entries.get(&(1, 1)), Some(&1));
        assert_eq!(t.entries.get(&(2, 0)), Some(&1));
    }

    #[test]
    fn a1_weight_diagram_is_flip_symmetric_between_conjugate_modules() {
        let a = freudenthal_a1(2, 0, 6);
        let b = freudenthal_a1(0, 2, 6);
        for (&(x, y), &m) in &a.entries {
            assert_eq!(b.entries.get(&(y, x)), Some(&m));
        }
    }

    #[test]
    fn c2_basic_module_low_depth() {
        let t = freudenthal_c2(1, 0, 0, 1);
        assert_eq!(t.entries.get(&(0, 0, 0)), Some(&1));
        assert_eq!(t.entries.get(&(1, 0, 0)), Some(&1));
        // Reflection string through the zero-node extremal weight.
        assert_eq!(t.entries.get(&(1, 1, 0)), Some(&1));
        assert_eq!(t.entries.get(&(1, 2, 0)), Some(&1));
        // The null root direction carries multiplicity two at level one.
        assert_eq!(t.entries.get(&(1, 2, 1)), Some(&2));
        // Full first layer, cross-checked by hand against the graded basis
        // of the constructed realization (three states on each charge-one
        // Fock summand, three on the depth-one module slice, one oscillator).
        let layer: BTreeMap<(u32, u32, u32), u64> = t
            .entries
            .iter()
            .filter(|(&(x0, _, _), _)| x0 == 1)
            .map(|(&k, &m)| (k, m))
            .collect();
        let expect: BTreeMap<(u32, u32, u32), u64> = [
            ((1, 0, 0), 1),
            ((1, 1, 0), 1),
            ((1, 2, 0), 1),
            ((1, 1, 1), 1),
            ((1, 2, 1), 2),
            ((1, 3, 1), 1),
            ((1, 2, 2), 1),
            ((1, 3, 2), 1),
            ((1, 4, 2), 1),
        ]
        .into_iter()
        .collect();
        assert_eq!(layer, expect);
    }

    #[test]
    fn freudenthal_sum_is_root_order_independent() {
        let rs = RootSystemData::new(AffineType::A1Aff);
        let lambda = [1i64, 1];
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for trial in 0..4 {
            let _ = trial;
            let shuffle = |v: &mut Vec<Vec<i64>>| {
                let mut r = ChaCha8Rng::seed_from_u64(rng.clone().gen_seed());
                v.shuffle(&mut r);
            };
            for x in 0..=4i64 {
                for y in 0..=4i64 {
                    let a = rs.mult(&lambda, &[x, y]);
                    let b = rs.mult_with_root_order(&lambda, &[x, y], &shuffle);
                    assert_eq!(a, b);
                }
            }
        }
    }

    trait GenSeed {
        fn gen_seed(self) -> u64;
    }
    impl GenSeed for ChaCha8Rng {
        fn gen_seed(mut self) -> u64 {
            rand::RngCore::next_u64(&mut self)
        }
    }

    #[test]
    fn compare_reports_first_discrepancy() {
        let a = freudenthal_a1(2, 0, 3);
        let mut b = a.clone();
        assert!(compare_a1(&a, &b).is_equal());
        let key = (1u32, 1u32);
        let old = b.entries[&key];
        b.entries.insert(key, old + 1);
        let d = compare_a1(&a, &b);
        assert_eq!(d.first_diff, Some((key, old, old + 1)));

        let c = freudenthal_a1(2, 0, 2);
        let d = compare_a1(&a, &c);
        assert!(d.depth_mismatch);
        assert_eq!(d.compared_depth, 2);
        assert!(d.is_equal());
    }
}
