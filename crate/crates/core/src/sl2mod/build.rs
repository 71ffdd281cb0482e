//! Layer-by-layer construction of the truncated irreducible module, plus
//! the contravariant pairing kept as an independent cross-check.

use super::{Coord, IrredModuleA1, WeightA1, WeightSpace};
use crate::linalg::{reduce_columns_hybrid, SparseVector};
use crate::qfield::{qint, Scalar};
use rayon::prelude::*;
use std::collections::BTreeMap;

pub fn build(lambda: WeightA1, height: u32) -> IrredModuleA1 {
    assert!(lambda.m0 >= 0 && lambda.m1 >= 0, "dominant weight required");
    assert!(lambda.level() >= 1, "level must be at least one");
    let mut m = IrredModuleA1 {
        lambda,
        height,
        spaces: BTreeMap::new(),
        f_mat: [BTreeMap::new(), BTreeMap::new()],
        e_mat: [BTreeMap::new(), BTreeMap::new()],
    };
    m.spaces.insert((0, 0), WeightSpace { words: vec![Vec::new()] });

    for h in 1..=height {
        // Spaces within one layer depend only on lower layers, so they can
        // be built in parallel and merged in coordinate order.
        let results: Vec<(Coord, SpaceResult)> = (0..=h)
            .into_par_iter()
            .map(|x| {
                let coord = (x, h - x);
                (coord, compute_space(&m, coord))
            })
            .collect();
        for (coord, res) in results {
            merge_space(&mut m, coord, res);
        }
    }
    m
}

/// Dense coordinates of `e_j` applied to basis state `idx` of `src`,
/// written in the basis of the `e_j`-target space. Empty target gives an
/// empty vector.
fn e_image_dense(m: &IrredModuleA1, j: usize, src: Coord, idx: usize) -> Vec<Scalar> {
    let (tx, ty) = match j {
        0 => (src.0 as i64 - 1, src.1 as i64),
        _ => (src.0 as i64, src.1 as i64 - 1),
    };
    if tx < 0 || ty < 0 {
        return Vec::new();
    }
    let tdim = m.dim_at((tx as u32, ty as u32));
    let mut out = vec![Scalar::zero(); tdim];
    if let Some(cols) = m.e_mat[j].get(&src) {
        for (r, c) in cols[idx].iter() {
            out[r] = c.clone();
        }
    }
    out
}

/// Everything one layer step produces for a single weight space.
struct SpaceResult {
    words: Vec<Vec<u8>>,
    /// Per parent side: the f-matrix columns from that parent.
    f_cols: [Option<(Coord, Vec<SparseVector>)>; 2],
    /// Raising matrices on the new basis states.
    e_cols: [Option<Vec<SparseVector>>; 2],
}

fn compute_space(m: &IrredModuleA1, coord: Coord) -> SpaceResult {
    let (x, y) = coord;
    // Parents: f_0 from (x-1, y), f_1 from (x, y-1).
    let parent = |i: usize| -> Option<Coord> {
        match i {
            0 if x > 0 => Some((x - 1, y)),
            1 if y > 0 => Some((x, y - 1)),
            _ => None,
        }
    };
    // Row spaces for the raising images are the parent spaces themselves.
    let dim0 = parent(0).map_or(0, |c| m.dim_at(c));
    let dim1 = parent(1).map_or(0, |c| m.dim_at(c));
    let nrows = dim0 + dim1;

    let mut cand_cols: Vec<Vec<Scalar>> = Vec::new();
    let mut cand_src: Vec<(usize, Coord, usize)> = Vec::new(); // (i, parent, idx)
    for i in 0..2usize {
        let Some(pc) = parent(i) else { continue };
        let pdim = m.dim_at(pc);
        for idx in 0..pdim {
            // e_j (f_i u) = f_i (e_j u) + delta_ij [mu(h_i)] u.
            let mut col = vec![Scalar::zero(); nrows];
            for j in 0..2usize {
                let offset = if j == 0 { 0 } else { dim0 };
                let ej_u = e_image_dense(m, j, pc, idx);
                if !ej_u.is_empty() {
                    // Apply f_i from the e_j-target of the parent.
                    let esrc = match j {
                        0 => (pc.0 - 1, pc.1),
                        _ => (pc.0, pc.1 - 1),
                    };
                    if let Some(fcols) = m.f_mat[i].get(&esrc) {
                        for (k, a) in ej_u.iter().enumerate() {
                            if a.is_zero() {
                                continue;
                            }
                            for (r, b) in fcols[k].iter() {
                                let t = &(a * b) + &col[offset + r];
                                col[offset + r] = t;
                            }
                        }
                    }
                }
                if j == i {
                    let me = match i {
                        0 => m.lambda.h0(pc.0 as i64, pc.1 as i64),
                        _ => m.lambda.h1(pc.0 as i64, pc.1 as i64),
                    };
                    let t = &col[offset + idx] + &qint(me, 1);
                    col[offset + idx] = t;
                }
            }
            cand_cols.push(col);
            cand_src.push((i, pc, idx));
        }
    }
    let mut out = SpaceResult { words: Vec::new(), f_cols: [None, None], e_cols: [None, None] };
    if cand_cols.is_empty() {
        return out;
    }

    let red = reduce_columns_hybrid(nrows, &cand_cols);
    let dim = red.pivots.len();
    if dim > 0 {
        assert!(
            m.lambda.possible_weight(x as i64, y as i64),
            "nonzero space at an impossible weight"
        );
        out.words = red
            .pivots
            .iter()
            .map(|&p| {
                let (i, pc, idx) = cand_src[p];
                let parent_word = &m.spaces[&pc].words[idx];
                let mut w = Vec::with_capacity(parent_word.len() + 1);
                w.push(i as u8);
                w.extend_from_slice(parent_word);
                w
            })
            .collect();
    }

    // f-matrices into this space (also stored when the space is empty, as
    // zero columns, so application can distinguish zero from overflow).
    for i in 0..2usize {
        let Some(pc) = parent(i) else { continue };
        let pdim = m.dim_at(pc);
        let mut cols: Vec<SparseVector> = Vec::with_capacity(pdim);
        for idx in 0..pdim {
            let cpos = cand_src
                .iter()
                .position(|&(ci, cpc, cidx)| ci == i && cpc == pc && cidx == idx)
                .unwrap();
            let mut v = SparseVector::new();
            for (r, c) in red.coords[cpos].iter().enumerate() {
                if !c.is_zero() {
                    v.set(r, c.clone());
                }
            }
            cols.push(v);
        }
        out.f_cols[i] = Some((pc, cols));
    }

    // e-matrices on the new basis states: their raising images were already
    // computed as candidate columns.
    if dim > 0 {
        for j in 0..2usize {
            let (off, tdim) = if j == 0 { (0, dim0) } else { (dim0, dim1) };
            if tdim == 0 {
                continue;
            }
            let mut cols: Vec<SparseVector> = Vec::with_capacity(dim);
            for &p in &red.pivots {
                let mut v = SparseVector::new();
                for r in 0..tdim {
                    let c = &cand_cols[p][off + r];
                    if !c.is_zero() {
                        v.set(r, c.clone());
                    }
                }
                cols.push(v);
            }
            out.e_cols[j] = Some(cols);
        }
    }
    out
}

fn merge_space(m: &mut IrredModuleA1, coord: Coord, res: SpaceResult) {
    if !res.words.is_empty() {
        m.spaces.insert(coord, WeightSpace { words: res.words });
    }
    for i in 0..2usize {
        if let Some((pc, cols)) = &res.f_cols[i] {
            m.f_mat[i].insert(*pc, cols.clone());
        }
    }
    for j in 0..2usize {
        if let Some(cols) = &res.e_cols[j] {
            m.e_mat[j].insert(coord, cols.clone());
        }
    }
}

/// Contravariant pairing `< f_w1 v, f_w2 v >` computed purely from the
/// commutation relations, independent of any constructed module. The
/// antiautomorphism swaps `e_i` and `f_i` and fixes `t_i`.
pub fn shapovalov_pairing(lambda: WeightA1, w1: &[u8], w2: &[u8]) -> Scalar {
    // The transpose of the lowering word acts with its raisings innermost
    // first, which is the stored letter order itself.
    pair_rec(lambda, w1, w2)
}

fn pair_rec(lambda: WeightA1, eword: &[u8], fword: &[u8]) -> Scalar {
    match eword.first() {
        None => {
            if fword.is_empty() {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        }
        Some(&i) => {
            let mut acc = Scalar::zero();
            // Push e_i past each matching f in the word; the commutator
            // picks up the q-integer of the weight below the removal point.
            let mut xy = (0i64, 0i64);
            // Weight below position k: lambda minus letters k+1.. end.
            let mut suffix_counts: Vec<(i64, i64)> = vec![(0, 0); fword.len() + 1];
            for k in (0..fword.len()).rev() {
                let (mut a, mut b) = suffix_counts[k + 1];
                if fword[k] == 0 {
                    a += 1;
                } else {
                    b += 1;
                }
                suffix_counts[k] = (a, b);
            }
            let _ = &mut xy;
            for k in 0..fword.len() {
                if fword[k] != i {
                    continue;
                }
                let (a, b) = suffix_counts[k + 1];
                let me = if i == 0 { lambda.h0(a, b) } else { lambda.h1(a, b) };
                let mut rest: Vec<u8> = Vec::with_capacity(fword.len() - 1);
                rest.extend_from_slice(&fword[..k]);
                rest.extend_from_slice(&fword[k + 1..]);
                let sub = pair_rec(lambda, &eword[1..], &rest);
                if !sub.is_zero() {
                    acc += &(&qint(me, 1) * &sub);
                }
            }
            acc
        }
    }
}
