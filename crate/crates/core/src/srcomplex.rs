//! The squarefree monomial ideal attached to the antidiagonal leading terms
//! of the fiber ideal, its Stanley-Reisner complex on the grid \[n+1\] x \[n\],
//! minimal-transversal (c-facet) enumeration, the facet counting identities,
//! and the shift-down bijection between consecutive grids.

use serde::Serialize;

use crate::monomial::Monomial;
use crate::vars::{VarName, VariableSet};

/// Grid vertex (i, j), 1-based, i <= n+1, j <= n.
pub type Vertex = (u16, u16);

#[derive(Clone, Debug, Serialize)]
pub struct KGenerators {
    pub n: usize,
    /// x_h for h = 2..=n+1
    pub x: Vec<Vec<Vertex>>,
    /// y_h for h = 2..=n+1
    pub y: Vec<Vec<Vertex>>,
    /// z_h for h = 3..=n+1
    pub z: Vec<Vec<Vertex>>,
}

impl KGenerators {
    /// All generator supports in the fixed order x_2.., y_2.., z_3..
    pub fn all(&self) -> Vec<Vec<Vertex>> {
        let mut out = Vec::with_capacity(3 * self.n - 1);
        out.extend(self.x.iter().cloned());
        out.extend(self.y.iter().cloned());
        out.extend(self.z.iter().cloned());
        out
    }

    /// Generators as monomials in the row-major matrix ring.
    pub fn monomials(&self, vars: &std::sync::Arc<VariableSet>) -> Vec<Monomial> {
        self.all()
            .iter()
            .map(|sup| {
                let mut e = vec![0u32; vars.len()];
                for &(i, j) in sup {
                    let k = vars.position(VarName::W(i, j)).expect("grid variable");
                    e[k] += 1;
                }
                Monomial(e)
            })
            .collect()
    }
}

/// The 3n-1 antidiagonal generators. Requires n >= 2.
pub fn k_generators(n: usize) -> KGenerators {
    assert!(n >= 2, "the squarefree ideal needs n >= 2");
    let n16 = n as u16;
    let mut x = Vec::new();
    let mut y = Vec::new();
    let mut z = Vec::new();
    for h in 2..=(n16 + 1) {
        let mut sup = Vec::new();
        for i in 2..h {
            sup.push((i, n16 + 2 - i));
        }
        for i in (h + 1)..=(n16 + 1) {
            sup.push((i, n16 + 3 - i));
        }
        x.push(sup);
        let mut sup = Vec::new();
        for i in 1..h {
            sup.push((i, n16 + 1 - i));
        }
        for i in (h + 1)..=(n16 + 1) {
            sup.push((i, n16 + 2 - i));
        }
        y.push(sup);
    }
    for h in 3..=(n16 + 1) {
        let mut sup = Vec::new();
        for i in 3..h {
            sup.push((i, n16 + 3 - i));
        }
        for i in h..=(n16 + 1) {
            sup.push((i, n16 + 2 - i));
        }
        for i in (h + 1)..=(n16 + 1) {
            sup.push((i, n16 + 4 - i));
        }
        sup.sort_unstable();
        z.push(sup);
    }
    KGenerators { n, x, y, z }
}

// --- minimal transversal enumeration -----------------------------------------

/// All minimal hitting sets of the given hyperedges over compact vertex ids
/// 0..nverts (nverts <= 128). `order` permutes the branching order of
/// vertices; the output set does not depend on it.
pub fn min_transversals(
    edges: &[Vec<usize>],
    nverts: usize,
    order: Option<&[usize]>,
) -> Vec<Vec<usize>> {
    assert!(nverts <= 128, "vertex universe too large");
    assert!(edges.len() <= 64, "too many hyperedges");
    let identity: Vec<usize> = (0..nverts).collect();
    let branch_order = order.unwrap_or(&identity);
    let mut vmask = vec![0u64; nverts];
    for (e, edge) in edges.iter().enumerate() {
        for &v in edge {
            vmask[v] |= 1 << e;
        }
    }
    let all_edges: u64 = if edges.len() == 64 { !0 } else { (1u64 << edges.len()) - 1 };
    let cand: u128 = if nverts == 128 { !0 } else { (1u128 << nverts) - 1 };
    // parallelize over the first branching choice; the merged output is
    // sorted, so it does not depend on the thread count
    let first_edge = all_edges.trailing_zeros() as usize;
    let first_vs: Vec<usize> = branch_order
        .iter()
        .copied()
        .filter(|&v| edges[first_edge].contains(&v))
        .collect();
    use rayon::prelude::*;
    let mut out: Vec<Vec<usize>> = first_vs
        .par_iter()
        .enumerate()
        .flat_map(|(k, &v)| {
            let mut local: Vec<Vec<usize>> = Vec::new();
            let mut remaining = cand;
            for &earlier in &first_vs[..k] {
                remaining &= !(1u128 << earlier);
            }
            let mask = vmask[v];
            let mut chosen = vec![v];
            let mut crit = vec![all_edges & mask];
            rec(
                &mut chosen,
                &mut crit,
                all_edges & !mask,
                remaining & !(1u128 << v),
                &vmask,
                edges,
                branch_order,
                &mut local,
            );
            local
        })
        .collect();
    for s in &mut out {
        s.sort_unstable();
    }
    out.sort();
    return out;

    #[allow(clippy::too_many_arguments)]
    fn rec(
        chosen: &mut Vec<usize>,
        crit: &mut Vec<u64>,
        uncov: u64,
        cand: u128,
        vmask: &[u64],
        edges: &[Vec<usize>],
        branch_order: &[usize],
        out: &mut Vec<Vec<usize>>,
    ) {
        if uncov == 0 {
            out.push(chosen.clone());
            return;
        }
        let e = uncov.trailing_zeros() as usize;
        // branch over the candidate vertices of e in the configured order
        let vs: Vec<usize> = branch_order
            .iter()
            .copied()
            .filter(|&v| edges[e].contains(&v) && (cand >> v) & 1 == 1)
            .collect();
        let mut remaining = cand;
        for &v in &vs {
            remaining &= !(1u128 << v);
            // every already-chosen vertex must keep a private edge
            let mask = vmask[v];
            if crit.iter().any(|&c| c & !mask == 0) {
                continue;
            }
            let saved: Vec<u64> = crit.clone();
            for c in crit.iter_mut() {
                *c &= !mask;
            }
            chosen.push(v);
            crit.push(uncov & mask);
            rec(chosen, crit, uncov & !mask, remaining, vmask, edges, branch_order, out);
            chosen.pop();
            crit.pop();
            *crit = saved;
        }
    }
}

/// Compact-id encoding of the grid.
fn grid_index(n: usize) -> impl Fn(Vertex) -> usize {
    move |(i, j)| ((i as usize) - 1) * n + (j as usize - 1)
}

fn grid_unindex(n: usize, v: usize) -> Vertex {
    ((v / n + 1) as u16, (v % n + 1) as u16)
}

/// All c-facets (minimal transversals of the generator supports) of the
/// complex on \[n+1\] x \[n\], canonically sorted. Branches by antidiagonal.
pub fn c_facets(n: usize) -> Vec<Vec<Vertex>> {
    c_facets_with_order(n, true)
}

/// `antidiagonal_order = false` branches in plain row-major order instead;
/// the result is identical (cross-check mode).
pub fn c_facets_with_order(n: usize, antidiagonal_order: bool) -> Vec<Vec<Vertex>> {
    let gens = k_generators(n);
    let idx = grid_index(n);
    let nverts = (n + 1) * n;
    let edges: Vec<Vec<usize>> = gens
        .all()
        .iter()
        .map(|sup| sup.iter().map(|&v| idx(v)).collect())
        .collect();
    let order: Option<Vec<usize>> = if antidiagonal_order {
        let mut vs: Vec<usize> = (0..nverts).collect();
        vs.sort_by_key(|&v| {
            let (i, j) = grid_unindex(n, v);
            (i + j, i)
        });
        Some(vs)
    } else {
        None
    };
    let raw = min_transversals(&edges, nverts, order.as_deref());
    raw.into_iter()
        .map(|s| {
            let mut f: Vec<Vertex> = s.into_iter().map(|v| grid_unindex(n, v)).collect();
            f.sort_unstable();
            f
        })
        .collect()
}

/// The closed count of c-facets.
pub fn c_facet_count_formula(n: u64) -> u64 {
    (n - 1) * n * (n + 1) * (3 * n - 2) / 12
}

#[derive(Clone, Debug, Serialize)]
pub struct CountsReport {
    pub n: usize,
    pub total: usize,
    pub formula_total: u64,
    pub all_size_four: bool,
    pub last_column: usize,
    pub formula_last_column: u64,
    pub rectangle: usize,
    pub rectangle_matches_previous: bool,
    pub pass: bool,
}

/// Purity, the closed total count, the last-column count, and the recursion
/// into the shifted rectangle.
pub fn verify_counts(n: usize) -> CountsReport {
    let facets = c_facets(n);
    let total = facets.len();
    let all_size_four = facets.iter().all(|f| f.len() == 4);
    let last_column: Vec<_> = facets
        .iter()
        .filter(|f| f.iter().any(|&(_, j)| j as usize == n))
        .collect();
    let rect: Vec<_> = facets
        .iter()
        .filter(|f| f.iter().all(|&(i, j)| i >= 2 && (j as usize) < n))
        .collect();
    let rectangle_matches_previous = if n >= 3 {
        rect.len() as u64 == c_facet_count_formula(n as u64 - 1)
    } else {
        rect.is_empty()
    };
    let formula_total = c_facet_count_formula(n as u64);
    let formula_last_column = ((n - 1) * (n - 1) * n) as u64;
    let pass = all_size_four
        && total as u64 == formula_total
        && last_column.len() as u64 == formula_last_column
        && rectangle_matches_previous
        && last_column.len() + rect.len() == total;
    CountsReport {
        n,
        total,
        formula_total,
        all_size_four,
        last_column: last_column.len(),
        formula_last_column,
        rectangle: rect.len(),
        rectangle_matches_previous,
        pass,
    }
}

/// Shift every vertex one row down.
pub fn sd(v: Vertex) -> Vertex {
    (v.0 + 1, v.1)
}

fn sd_set(s: &[Vertex]) -> Vec<Vertex> {
    let mut out: Vec<Vertex> = s.iter().map(|&v| sd(v)).collect();
    out.sort_unstable();
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct SdReport {
    pub n: usize,
    pub generators_divide_down: bool,
    pub generators_extend_up: bool,
    pub cfacet_bijection: bool,
    pub pass: bool,
}

/// The shift-down comparison between the grids for n-1 and n: generators of
/// the larger ideal are divisible by shifted generators of the smaller, every
/// smaller generator extends by one last-column variable, and shifting is a
/// bijection from c-facets at n-1 onto the c-facets at n inside the shifted
/// rectangle.
pub fn sd_check(n: usize) -> SdReport {
    assert!(n >= 3);
    let big = k_generators(n);
    let small = k_generators(n - 1);
    let contains = |sup: &[Vertex], sub: &[Vertex]| sub.iter().all(|v| sup.contains(v));
    let generators_divide_down = big.all().iter().all(|u| {
        small.all().iter().any(|v| contains(u, &sd_set(v)))
    });
    let generators_extend_up = small.all().iter().all(|v| {
        let shifted = sd_set(v);
        big.all().iter().any(|u| {
            if u.len() != shifted.len() + 1 {
                return false;
            }
            let extra: Vec<_> = u.iter().filter(|x| !shifted.contains(x)).collect();
            contains(u, &shifted) && extra.len() == 1 && extra[0].1 as usize == n
        })
    });
    let shifted_small: Vec<Vec<Vertex>> =
        c_facets(n - 1).iter().map(|f| sd_set(f)).collect();
    let rect_big: Vec<Vec<Vertex>> = c_facets(n)
        .into_iter()
        .filter(|f| f.iter().all(|&(i, j)| i >= 2 && (j as usize) < n))
        .collect();
    let mut a = shifted_small;
    a.sort();
    let mut b = rect_big;
    b.sort();
    let cfacet_bijection = a == b;
    let pass = generators_divide_down && generators_extend_up && cfacet_bijection;
    SdReport { n, generators_divide_down, generators_extend_up, cfacet_bijection, pass }
}

// --- the complex itself -------------------------------------------------------

/// A simplicial complex on compact vertex ids, given by its facets.
#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    pub nverts: usize,
    /// sorted vertex lists, canonically ordered
    pub facets: Vec<Vec<usize>>,
}

impl SimplicialComplex {
    /// Stanley-Reisner complex of a squarefree monomial ideal given by
    /// generator supports: a subset is a face iff it contains no generator.
    /// Facets are the complements of the minimal transversals.
    pub fn from_squarefree(gens: &[Vec<usize>], nverts: usize) -> SimplicialComplex {
        let transversals = min_transversals(gens, nverts, None);
        let mut facets: Vec<Vec<usize>> = transversals
            .iter()
            .map(|t| (0..nverts).filter(|v| !t.contains(v)).collect())
            .collect();
        facets.sort();
        SimplicialComplex { nverts, facets }
    }

    pub fn grid_complex(n: usize) -> SimplicialComplex {
        let gens = k_generators(n);
        let idx = grid_index(n);
        let edges: Vec<Vec<usize>> = gens
            .all()
            .iter()
            .map(|sup| sup.iter().map(|&v| idx(v)).collect())
            .collect();
        SimplicialComplex::from_squarefree(&edges, (n + 1) * n)
    }

    pub fn is_face(&self, subset: &[usize]) -> bool {
        self.facets
            .iter()
            .any(|f| subset.iter().all(|v| f.contains(v)))
    }

    /// Dimension (empty complex: None).
    pub fn dim(&self) -> Option<isize> {
        self.facets.iter().map(|f| f.len() as isize - 1).max()
    }

    /// Facets of the link of a face.
    pub fn link(&self, face: &[usize]) -> SimplicialComplex {
        let mut facets: Vec<Vec<usize>> = self
            .facets
            .iter()
            .filter(|f| face.iter().all(|v| f.contains(v)))
            .map(|f| f.iter().copied().filter(|v| !face.contains(v)).collect())
            .collect();
        facets.sort();
        facets.dedup();
        // drop non-maximal entries
        let keep: Vec<bool> = facets
            .iter()
            .map(|f| {
                !facets
                    .iter()
                    .any(|g| g.len() > f.len() && f.iter().all(|v| g.contains(v)))
            })
            .collect();
        let facets = facets
            .into_iter()
            .zip(keep)
            .filter_map(|(f, k)| if k { Some(f) } else { None })
            .collect();
        SimplicialComplex { nverts: self.nverts, facets }
    }

    /// Every face, grouped by dimension (index 0 = vertices). The empty face
    /// is implicit.
    pub fn faces_by_dim(&self) -> Vec<Vec<Vec<usize>>> {
        use std::collections::BTreeSet;
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        for f in &self.facets {
            // all subsets of f
            let k = f.len();
            assert!(k <= 24, "face enumeration only supports desk-scale complexes");
            for mask in 1u64..(1 << k) {
                let sub: Vec<usize> = (0..k)
                    .filter(|b| (mask >> b) & 1 == 1)
                    .map(|b| f[b])
                    .collect();
                seen.insert(sub);
            }
        }
        let maxd = self.dim().map_or(0, |d| d.max(0) as usize);
        let mut out = vec![Vec::new(); maxd + 1];
        for face in seen {
            out[face.len() - 1].push(face);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_at_n2() {
        let g = k_generators(2);
        assert_eq!(g.x, vec![vec![(3, 2)], vec![(2, 2)]]);
        assert_eq!(g.y, vec![vec![(1, 2), (3, 1)], vec![(1, 2), (2, 1)]]);
        // z_3 is the single variable w_{3,1}
        assert_eq!(g.z, vec![vec![(3, 1)]]);
        assert_eq!(g.all().len(), 3 * 2 - 1);
    }

    #[test]
    fn generators_at_n5_match_display() {
        let g = k_generators(5);
        // x_2 = w35 w44 w53 w62
        assert_eq!(g.x[0], vec![(3, 5), (4, 4), (5, 3), (6, 2)]);
        // y_2 = w15 w34 w43 w52 w61
        assert_eq!(g.y[0], vec![(1, 5), (3, 4), (4, 3), (5, 2), (6, 1)]);
        // z_6 = w35 w44 w53 w61
        assert_eq!(g.z[3], vec![(3, 5), (4, 4), (5, 3), (6, 1)]);
        // z_3 = w34 w43 w52 w61 w45 w54 w63 (sorted)
        let mut z3 = vec![(3, 4), (4, 3), (5, 2), (6, 1), (4, 5), (5, 4), (6, 3)];
        z3.sort_unstable();
        assert_eq!(g.z[0], z3);
        // every generator is on the four antidiagonals
        for sup in g.all() {
            for (i, j) in sup {
                let s = (i + j) as usize;
                assert!(s >= 5 + 1 && s <= 5 + 4);
            }
        }
    }

    #[test]
    fn two_cfacets_at_n2() {
        // hand enumeration: singleton edges force w32, w22, w31; the edge
        // {w12, w21} splits into two minimal transversals
        let f = c_facets(2);
        assert_eq!(f.len(), 2);
        for c in &f {
            assert_eq!(c.len(), 4);
        }
        assert!(f.contains(&vec![(1, 2), (2, 2), (3, 1), (3, 2)]));
        assert!(f.contains(&vec![(2, 1), (2, 2), (3, 1), (3, 2)]));
    }

    #[test]
    fn transversal_bruteforce_cross_check() {
        // powerset oracle on the n = 2 and n = 3 hypergraphs
        for n in [2usize, 3] {
            let gens = k_generators(n);
            let idx = grid_index(n);
            let nverts = (n + 1) * n;
            let edges: Vec<Vec<usize>> = gens
                .all()
                .iter()
                .map(|sup| sup.iter().map(|&v| idx(v)).collect())
                .collect();
            let fast = min_transversals(&edges, nverts, None);
            // brute force: all subsets that hit every edge, then filter minimal
            let mut hitting: Vec<u128> = Vec::new();
            for mask in 0u128..(1 << nverts) {
                let hits = edges.iter().all(|e| e.iter().any(|&v| (mask >> v) & 1 == 1));
                if hits {
                    hitting.push(mask);
                }
            }
            let minimal: Vec<u128> = hitting
                .iter()
                .copied()
                .filter(|&m| {
                    !hitting.iter().any(|&o| o != m && o & m == o)
                })
                .collect();
            let mut brute: Vec<Vec<usize>> = minimal
                .into_iter()
                .map(|m| (0..nverts).filter(|v| (m >> v) & 1 == 1).collect())
                .collect();
            brute.sort();
            assert_eq!(fast, brute, "transversal mismatch at n={n}");
        }
    }

    #[test]
    fn order_modes_agree() {
        for n in 2..=4 {
            assert_eq!(c_facets_with_order(n, true), c_facets_with_order(n, false));
        }
    }

    #[test]
    fn counts_small_n() {
        for (n, total) in [(2usize, 2u64), (3, 14), (4, 50), (5, 130)] {
            let rep = verify_counts(n);
            assert!(rep.pass, "counts report failed at n={n}: {rep:?}");
            assert_eq!(rep.total as u64, total);
        }
    }

    #[test]
    fn recursion_identity() {
        // count(n) = count(n-1) + (n-1)^2 n
        for n in 3u64..=10 {
            assert_eq!(
                c_facet_count_formula(n),
                c_facet_count_formula(n - 1) + (n - 1) * (n - 1) * n
            );
        }
    }

    #[test]
    fn antidiagonal_structure() {
        // every c-facet has exactly one vertex on i+j = n+1
        for n in 2..=5 {
            for f in c_facets(n) {
                let low = f.iter().filter(|&&(i, j)| (i + j) as usize == n + 1).count();
                assert_eq!(low, 1, "n={n}, facet {f:?}");
                for &(i, j) in &f {
                    let s = (i + j) as usize;
                    assert!((n + 1..=n + 4).contains(&s));
                }
            }
        }
    }

    #[test]
    fn sd_bijection_small() {
        for n in 3..=5 {
            let rep = sd_check(n);
            assert!(rep.pass, "sd check failed at n={n}: {rep:?}");
        }
    }

    #[test]
    fn sd_preserves_inclusion() {
        // coordinate shifts are monotone on subsets
        let faces = c_facets(3);
        for a in &faces {
            for b in &faces {
                let incl = a.iter().all(|v| b.contains(v));
                let incl_sd =
                    sd_set(a).iter().all(|v| sd_set(b).contains(v));
                assert_eq!(incl, incl_sd);
            }
        }
    }

    #[test]
    fn purity_up_to_n10() {
        for n in 2..=10usize {
            let f = c_facets(n);
            assert_eq!(f.len() as u64, c_facet_count_formula(n as u64), "count at n={n}");
            assert!(f.iter().all(|c| c.len() == 4), "purity at n={n}");
        }
    }

    #[test]
    fn complex_basics() {
        let c = SimplicialComplex::grid_complex(2);
        // dim = |V| - 5
        assert_eq!(c.dim(), Some(6 - 5));
        assert_eq!(c.facets.len(), 2);
        // complement of a c-facet is a facet
        let idx = grid_index(2);
        let cf = &c_facets(2)[0];
        let complement: Vec<usize> = (0..6)
            .filter(|&v| !cf.iter().any(|&w| idx(w) == v))
            .collect();
        assert!(c.facets.contains(&complement));
        // faces: 6 vertices minus the 3 forbidden singleton-generator ones...
        // singleton generators w22, w32, w31 are non-faces
        let faces = c.faces_by_dim();
        assert_eq!(faces[0].len(), 3);
        assert_eq!(faces[1].len(), 2);
    }
}
