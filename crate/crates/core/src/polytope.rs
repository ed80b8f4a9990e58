//! Exact rational convex geometry in low dimension.
//!
//! Polytopes are stored canonically as their sorted extreme-point sets, so
//! equality is syntactic. Volumes are computed by fan triangulation from the
//! lexicographically smallest vertex over exhaustively enumerated facets;
//! dimensions stay small (<= ~6) by design, exactness wins over speed.

use crate::{factorial, Error, Int, Rat, Result};
use num::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatPolytope {
    dim: usize,
    verts: Vec<Vec<Rat>>,
}

impl RatPolytope {
    /// Convex hull of a point set: deduplicates, keeps extreme points only,
    /// sorts them lexicographically.
    pub fn from_points(dim: usize, points: &[Vec<Rat>]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Invalid("empty point set".into()));
        }
        for p in points {
            if p.len() != dim {
                return Err(Error::Dimension(format!(
                    "point of length {} in dimension {}",
                    p.len(),
                    dim
                )));
            }
        }
        let mut pts: Vec<Vec<Rat>> = points.to_vec();
        pts.sort();
        pts.dedup();
        if dim == 1 {
            let mut verts = vec![pts[0].clone()];
            if pts.len() > 1 {
                verts.push(pts[pts.len() - 1].clone());
            }
            return Ok(RatPolytope { dim, verts });
        }
        if dim == 2 {
            let mut verts = hull_2d(&pts);
            verts.sort();
            return Ok(RatPolytope { dim, verts });
        }
        let mut verts: Vec<Vec<Rat>> = Vec::new();
        for i in 0..pts.len() {
            let others: Vec<&Vec<Rat>> = pts
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, p)| p)
                .collect();
            if others.is_empty() || !in_convex_hull(&pts[i], &others) {
                verts.push(pts[i].clone());
            }
        }
        Ok(RatPolytope { dim, verts })
    }

    pub fn from_integer_points(dim: usize, points: &[Vec<Int>]) -> Result<Self> {
        let pts: Vec<Vec<Rat>> = points
            .iter()
            .map(|p| p.iter().map(|x| Rat::from(x.clone())).collect())
            .collect();
        Self::from_points(dim, &pts)
    }

    /// The single point at the origin.
    pub fn origin(dim: usize) -> Self {
        RatPolytope { dim, verts: vec![vec![Rat::zero(); dim]] }
    }

    /// Segment from the origin to `v`.
    pub fn segment_to(v: &[Rat]) -> Self {
        let dim = v.len();
        Self::from_points(dim, &[vec![Rat::zero(); dim], v.to_vec()])
            .expect("two points form a polytope")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<Rat>] {
        &self.verts
    }

    /// Dimension of the affine span of the vertex set.
    pub fn affine_rank(&self) -> usize {
        affine_rank(&self.verts)
    }

    pub fn contains_point(&self, p: &[Rat]) -> bool {
        let refs: Vec<&Vec<Rat>> = self.verts.iter().collect();
        in_convex_hull(p, &refs)
    }

    pub fn is_subset_of(&self, other: &RatPolytope) -> bool {
        self.verts.iter().all(|v| other.contains_point(v))
    }

    pub fn scale(&self, c: &Rat) -> RatPolytope {
        if c.is_zero() {
            return RatPolytope::origin(self.dim);
        }
        let pts: Vec<Vec<Rat>> = self
            .verts
            .iter()
            .map(|v| v.iter().map(|x| x * c).collect())
            .collect();
        Self::from_points(self.dim, &pts).expect("scaling preserves hulls")
    }

    /// Minkowski sum: hull of pairwise vertex sums.
    pub fn minkowski_sum(&self, other: &RatPolytope) -> Result<RatPolytope> {
        if self.dim != other.dim {
            return Err(Error::Dimension("Minkowski sum of different dimensions".into()));
        }
        let mut pts = Vec::with_capacity(self.verts.len() * other.verts.len());
        for a in &self.verts {
            for b in &other.verts {
                pts.push(a.iter().zip(b).map(|(x, y)| x + y).collect());
            }
        }
        Self::from_points(self.dim, &pts)
    }

    /// Hull of `sum_g c_g * Q_g` over vertex choices.
    pub fn linear_combination(groups: &[(&RatPolytope, usize)]) -> Result<RatPolytope> {
        let dim = groups
            .first()
            .map(|(q, _)| q.dim)
            .ok_or_else(|| Error::Invalid("empty combination".into()))?;
        let mut acc = RatPolytope::origin(dim);
        for (q, c) in groups {
            if *c == 0 {
                continue;
            }
            acc = acc.minkowski_sum(&q.scale(&Rat::from(Int::from(*c))))?;
        }
        Ok(acc)
    }

    /// Exact Euclidean volume of the hull (0 when degenerate).
    pub fn hull_volume(&self) -> Rat {
        if self.dim == 0 {
            return Rat::one();
        }
        if self.dim == 1 {
            return if self.verts.len() < 2 {
                Rat::zero()
            } else {
                (&self.verts[1][0] - &self.verts[0][0]).abs()
            };
        }
        if self.dim == 2 {
            let chain = hull_2d(&self.verts);
            if chain.len() < 3 {
                return Rat::zero();
            }
            let mut s = Rat::zero();
            for i in 0..chain.len() {
                let p = &chain[i];
                let q = &chain[(i + 1) % chain.len()];
                s += &p[0] * &q[1] - &q[0] * &p[1];
            }
            return s.abs() / Rat::from(Int::from(2));
        }
        if affine_rank(&self.verts) < self.dim {
            return Rat::zero();
        }
        let simplices = triangulate(&self.verts, self.dim);
        let mut vol = Rat::zero();
        for s in simplices {
            vol += simplex_volume(&self.verts, &s);
        }
        vol
    }
}

/// Exact mixed volume of `p` polytopes in dimension `p`, by inclusion-
/// exclusion over subset Minkowski sums. Symmetric and multilinear; an
/// integer on lattice polytopes.
pub fn mixed_volume(polys: &[&RatPolytope]) -> Result<Rat> {
    let p = polys.len();
    if p == 0 {
        return Err(Error::Invalid("mixed volume of an empty family".into()));
    }
    for q in polys {
        if q.dim() != p {
            return Err(Error::Dimension(format!(
                "mixed volume of {} polytopes needs dimension {}, got {}",
                p,
                p,
                q.dim()
            )));
        }
    }
    // group equal polytopes; repeated summands become scalings
    let mut groups: Vec<(&RatPolytope, usize)> = Vec::new();
    for q in polys {
        match groups.iter_mut().find(|(g, _)| *g == *q) {
            Some((_, c)) => *c += 1,
            None => groups.push((q, 1)),
        }
    }
    let mut total = Rat::zero();
    let mut counts = vec![0usize; groups.len()];
    loop {
        // advance the count vector (mixed-radix increment)
        let mut i = 0;
        loop {
            if i == groups.len() {
                return Ok(total);
            }
            counts[i] += 1;
            if counts[i] <= groups[i].1 {
                break;
            }
            counts[i] = 0;
            i += 1;
        }
        let j: usize = counts.iter().sum();
        let mut coeff = Rat::from(if (p - j) % 2 == 0 { Int::one() } else { -Int::one() });
        for (g, &c) in groups.iter().zip(&counts) {
            coeff *= Rat::from(crate::binomial(g.1, c));
        }
        let combo: Vec<(&RatPolytope, usize)> = groups
            .iter()
            .zip(&counts)
            .map(|((q, _), &c)| (*q, c))
            .collect();
        let vol = RatPolytope::linear_combination(&combo)?.hull_volume();
        total += coeff * vol;
    }
}

/// `(p-1)! * Vol_{p-1}(pi_v(Q)) * ||v||_2`, computed without irrational
/// intermediates as `(p-1)! * Vol_p(pi_v(Q) + [0, v])` (an orthogonal prism).
/// For `p = 1` the empty projection has volume 1 and the value is `|v|`.
pub fn prism_degree(q: &RatPolytope, v: &[Rat]) -> Result<Rat> {
    let p = q.dim();
    if v.len() != p {
        return Err(Error::Dimension("direction length mismatch".into()));
    }
    if v.iter().all(Rat::is_zero) {
        return Err(Error::Invalid("prism direction must be nonzero".into()));
    }
    if p == 1 {
        return Ok(v[0].abs());
    }
    let vv: Rat = v.iter().map(|x| x * x).sum();
    let project = |q_vert: &Vec<Rat>| -> Vec<Rat> {
        let qv: Rat = q_vert.iter().zip(v).map(|(a, b)| a * b).sum();
        let f = qv / &vv;
        q_vert.iter().zip(v).map(|(a, b)| a - &f * b).collect()
    };
    let mut pts: Vec<Vec<Rat>> = Vec::with_capacity(2 * q.vertices().len());
    for w in q.vertices() {
        let base = project(w);
        let lifted: Vec<Rat> = base.iter().zip(v).map(|(a, b)| a + b).collect();
        pts.push(base);
        pts.push(lifted);
    }
    let prism = RatPolytope::from_points(p, &pts)?;
    Ok(Rat::from(factorial(p - 1)) * prism.hull_volume())
}

/// Feasibility of `p in conv(set)` by exact phase-1 simplex.
fn in_convex_hull(p: &[Rat], set: &[&Vec<Rat>]) -> bool {
    let d = p.len();
    let n = set.len();
    // rows: one per coordinate plus the affine row
    let mut a: Vec<Vec<Rat>> = Vec::with_capacity(d + 1);
    let mut b: Vec<Rat> = Vec::with_capacity(d + 1);
    for c in 0..d {
        a.push(set.iter().map(|v| v[c].clone()).collect());
        b.push(p[c].clone());
    }
    a.push(vec![Rat::one(); n]);
    b.push(Rat::one());
    lp_feasible(a, b)
}

/// Does `A x = b` admit a solution with `x >= 0`? Exact simplex, Bland's rule.
fn lp_feasible(mut a: Vec<Vec<Rat>>, mut b: Vec<Rat>) -> bool {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    for i in 0..m {
        if b[i].is_negative() {
            for x in a[i].iter_mut() {
                *x = -x.clone();
            }
            b[i] = -b[i].clone();
        }
    }
    // tableau with artificial basis; minimize the sum of artificials
    let cols = n + m;
    let mut t: Vec<Vec<Rat>> = (0..m)
        .map(|i| {
            let mut row = Vec::with_capacity(cols + 1);
            row.extend(a[i].iter().cloned());
            for j in 0..m {
                row.push(if i == j { Rat::one() } else { Rat::zero() });
            }
            row.push(b[i].clone());
            row
        })
        .collect();
    let mut basis: Vec<usize> = (n..n + m).collect();
    // objective row: reduced costs for minimizing the artificial sum
    let mut obj = vec![Rat::zero(); cols + 1];
    for i in 0..m {
        for j in 0..=cols {
            let v = &obj[j] - &t[i][j];
            obj[j] = v;
        }
    }
    for j in n..n + m {
        obj[j] = Rat::zero();
    }
    loop {
        // Bland: smallest index with a negative reduced cost
        let Some(enter) = (0..cols).find(|&j| obj[j].is_negative()) else {
            break;
        };
        // ratio test
        let mut leave: Option<usize> = None;
        let mut best: Option<Rat> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][cols] / &t[i][enter];
                let better = match &best {
                    None => true,
                    Some(r) => {
                        ratio < *r || (ratio == *r && basis[i] < basis[leave.unwrap()])
                    }
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
        }
        let Some(li) = leave else {
            // unbounded phase-1 objective cannot happen; treat as infeasible
            return false;
        };
        // pivot
        let piv = t[li][enter].clone();
        for j in 0..=cols {
            t[li][j] /= &piv;
        }
        for i in 0..m {
            if i != li && !t[i][enter].is_zero() {
                let f = t[i][enter].clone();
                for j in 0..=cols {
                    let v = &t[i][j] - &f * &t[li][j];
                    t[i][j] = v;
                }
            }
        }
        if !obj[enter].is_zero() {
            let f = obj[enter].clone();
            for j in 0..=cols {
                let v = &obj[j] - &f * &t[li][j];
                obj[j] = v;
            }
        }
        basis[li] = enter;
    }
    // feasible iff the artificial objective reached zero
    obj[cols].is_zero()
}

/// Convex hull of deduplicated sorted planar points (Andrew's monotone
/// chain), counter-clockwise; collinear interior points dropped. Returns the
/// endpoints for degenerate input.
fn hull_2d(pts: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let n = pts.len();
    if n <= 2 {
        return pts.to_vec();
    }
    let mut sorted: Vec<&Vec<Rat>> = pts.iter().collect();
    sorted.sort();
    sorted.dedup();
    let cross = |o: &Vec<Rat>, a: &Vec<Rat>, b: &Vec<Rat>| -> Rat {
        (&a[0] - &o[0]) * (&b[1] - &o[1]) - (&a[1] - &o[1]) * (&b[0] - &o[0])
    };
    let build = |iter: Vec<&Vec<Rat>>| -> Vec<Vec<Rat>> {
        let mut chain: Vec<Vec<Rat>> = Vec::new();
        for p in iter {
            while chain.len() >= 2
                && !cross(&chain[chain.len() - 2], &chain[chain.len() - 1], p).is_positive()
            {
                chain.pop();
            }
            chain.push(p.clone());
        }
        chain
    };
    let lower = build(sorted.clone());
    let upper = build(sorted.into_iter().rev().collect());
    let mut hull = lower;
    hull.pop();
    hull.extend(upper.into_iter());
    hull.pop();
    if hull.is_empty() {
        // fully collinear input: keep the extremes
        let mut sorted: Vec<&Vec<Rat>> = pts.iter().collect();
        sorted.sort();
        return vec![sorted[0].clone(), sorted[sorted.len() - 1].clone()];
    }
    hull
}

fn affine_rank(pts: &[Vec<Rat>]) -> usize {
    if pts.len() <= 1 {
        return 0;
    }
    let rows: Vec<Vec<Rat>> = pts[1..]
        .iter()
        .map(|p| p.iter().zip(&pts[0]).map(|(a, b)| a - b).collect())
        .collect();
    crate::lattice::rational_rank(&rows)
}

/// Primitive integer normal of the hyperplane through `pts` (affine rank
/// `d-1` in `Q^d`), or `None` when degenerate.
fn hyperplane_normal(pts: &[&Vec<Rat>], d: usize) -> Option<Vec<Int>> {
    let base = pts[0];
    let rows: Vec<Vec<Rat>> = pts[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    // solve rows * a = 0 with a != 0 by Gaussian elimination
    let m = rows.len();
    let mut a = rows;
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0;
    for j in 0..d {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !a[i][j].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let piv = a[r][j].clone();
        for l in 0..d {
            a[r][l] /= &piv;
        }
        for i in 0..m {
            if i != r && !a[i][j].is_zero() {
                let f = a[i][j].clone();
                for l in 0..d {
                    let v = &a[i][l] - &f * &a[r][l];
                    a[i][l] = v;
                }
            }
        }
        pivots.push((r, j));
        r += 1;
    }
    if r != d - 1 {
        return None; // degenerate subset
    }
    // free column: the one without a pivot
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, j)| j).collect();
    let free = (0..d).find(|j| !pivot_cols.contains(j))?;
    let mut normal = vec![Rat::zero(); d];
    normal[free] = Rat::one();
    for &(ri, j) in &pivots {
        normal[j] = -a[ri][free].clone();
    }
    // clear denominators and make primitive with a canonical sign
    let mut lcm = Int::one();
    for x in &normal {
        lcm = num::Integer::lcm(&lcm, x.denom());
    }
    let mut iv: Vec<Int> = normal.iter().map(|x| x.numer() * &lcm / x.denom()).collect();
    let mut g = Int::zero();
    for x in &iv {
        g = num::Integer::gcd(&g, x);
    }
    if !g.is_zero() && !g.is_one() {
        for x in iv.iter_mut() {
            *x = &*x / &g;
        }
    }
    if let Some(first) = iv.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in iv.iter_mut() {
                *x = -x.clone();
            }
        }
    }
    Some(iv)
}

fn dot_ri(a: &[Int], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| Rat::from(x.clone()) * y).sum()
}

/// Facets of `conv(pts)` in `Q^d` (affine span must be all of `Q^d`):
/// unique supporting hyperplanes found by exhaustive subset enumeration,
/// each with its incident point indices.
fn facets(pts: &[Vec<Rat>], d: usize) -> Vec<Vec<usize>> {
    let n = pts.len();
    let mut seen: Vec<(Vec<Int>, Rat)> = Vec::new();
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut subset: Vec<usize> = (0..d).collect();
    loop {
        let chosen: Vec<&Vec<Rat>> = subset.iter().map(|&i| &pts[i]).collect();
        if let Some(normal) = hyperplane_normal(&chosen, d) {
            let offset = dot_ri(&normal, chosen[0]);
            if !seen.iter().any(|(a, b)| *a == normal && *b == offset) {
                let mut side_pos = false;
                let mut side_neg = false;
                let mut incident = Vec::new();
                for (i, p) in pts.iter().enumerate() {
                    let v = dot_ri(&normal, p);
                    if v > offset {
                        side_pos = true;
                    } else if v < offset {
                        side_neg = true;
                    } else {
                        incident.push(i);
                    }
                    if side_pos && side_neg {
                        break;
                    }
                }
                if !(side_pos && side_neg) {
                    out.push(incident);
                }
                seen.push((normal, offset));
            }
        }
        // next d-combination of {0..n}
        let mut i = d;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if subset[i] != i + n - d {
                subset[i] += 1;
                for j in i + 1..d {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Triangulation of `conv(pts)` where the points affinely span `Q^d`.
/// Returns index simplices (each of `d + 1` points).
fn triangulate(pts: &[Vec<Rat>], d: usize) -> Vec<Vec<usize>> {
    if d == 0 {
        return vec![vec![0]];
    }
    if d == 1 {
        let imin = (0..pts.len()).min_by_key(|&i| &pts[i]).expect("nonempty");
        let imax = (0..pts.len()).max_by_key(|&i| &pts[i]).expect("nonempty");
        return vec![vec![imin, imax]];
    }
    if pts.len() == d + 1 {
        // the points span dimension d, so they already form a simplex
        return vec![(0..=d).collect()];
    }
    let v0 = (0..pts.len()).min_by_key(|&i| &pts[i]).expect("nonempty");
    let mut out = Vec::new();
    for facet in facets(pts, d) {
        if facet.contains(&v0) {
            continue;
        }
        // drop a coordinate in which the facet is not degenerate
        let fpts: Vec<Vec<Rat>> = facet.iter().map(|&i| pts[i].clone()).collect();
        let chosen: Vec<&Vec<Rat>> = fpts.iter().collect();
        let Some(normal) = hyperplane_normal(&chosen, d) else {
            continue;
        };
        let drop = (0..d).find(|&j| !normal[j].is_zero()).expect("nonzero normal");
        let projected: Vec<Vec<Rat>> = fpts
            .iter()
            .map(|p| {
                p.iter()
                    .enumerate()
                    .filter(|&(j, _)| j != drop)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        for simplex in triangulate(&projected, d - 1) {
            let mut s: Vec<usize> = simplex.into_iter().map(|i| facet[i]).collect();
            s.push(v0);
            out.push(s);
        }
    }
    out
}

fn simplex_volume(pts: &[Vec<Rat>], simplex: &[usize]) -> Rat {
    let d = simplex.len() - 1;
    let base = &pts[simplex[d]];
    let rows: Vec<Vec<Rat>> = simplex[..d]
        .iter()
        .map(|&i| pts[i].iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    rat_det_abs(&rows) / Rat::from(factorial(d))
}

fn rat_det_abs(m: &[Vec<Rat>]) -> Rat {
    let n = m.len();
    if n == 0 {
        return Rat::one();
    }
    let mut a = m.to_vec();
    let mut det = Rat::one();
    for j in 0..n {
        let Some(p) = (j..n).find(|&i| !a[i][j].is_zero()) else {
            return Rat::zero();
        };
        a.swap(j, p);
        let pivot = a[j][j].clone();
        det *= &pivot;
        for i in j + 1..n {
            if !a[i][j].is_zero() {
                let f = &a[i][j] / &pivot;
                for l in j..n {
                    let v = &a[i][l] - &f * &a[j][l];
                    a[i][l] = v;
                }
            }
        }
    }
    det.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(coords: &[i64]) -> Vec<Rat> {
        coords.iter().map(|&x| Rat::from(Int::from(x))).collect()
    }

    fn poly(dim: usize, pts: &[&[i64]]) -> RatPolytope {
        RatPolytope::from_points(dim, &pts.iter().map(|p| pt(p)).collect::<Vec<_>>()).unwrap()
    }

    fn rat(p: i64, q: i64) -> Rat {
        Rat::new(Int::from(p), Int::from(q))
    }

    /// Independent 2-d oracle.
    fn shoelace(pts: &[Vec<Rat>]) -> Rat {
        // order the hull vertices by angle around the centroid
        let n = Rat::from(Int::from(pts.len() as i64));
        let cx: Rat = pts.iter().map(|p| p[0].clone()).sum::<Rat>() / &n;
        let cy: Rat = pts.iter().map(|p| p[1].clone()).sum::<Rat>() / &n;
        let mut ordered: Vec<&Vec<Rat>> = pts.iter().collect();
        ordered.sort_by(|a, b| {
            let ha = ((&a[1] - &cy).is_negative(), (&a[0] - &cx).is_negative());
            let hb = ((&b[1] - &cy).is_negative(), (&b[0] - &cx).is_negative());
            // half-plane first, then cross product
            let key = |h: (bool, bool)| match h {
                (false, false) => 0,
                (false, true) => 1,
                (true, true) => 2,
                (true, false) => 3,
            };
            key(ha).cmp(&key(hb)).then_with(|| {
                let cross = (&a[0] - &cx) * (&b[1] - &cy) - (&b[0] - &cx) * (&a[1] - &cy);
                Rat::zero().cmp(&cross)
            })
        });
        let mut s = Rat::zero();
        for i in 0..ordered.len() {
            let p = ordered[i];
            let q = ordered[(i + 1) % ordered.len()];
            s += &p[0] * &q[1] - &q[0] * &p[1];
        }
        s.abs() / Rat::from(Int::from(2))
    }

    #[test]
    fn canonicalization_keeps_extreme_points_only() {
        let q = poly(2, &[&[0, 0], &[2, 0], &[0, 2], &[1, 1], &[1, 0]]);
        assert_eq!(q.vertices().len(), 3);
        let r = poly(2, &[&[0, 0], &[2, 0], &[0, 2]]);
        assert_eq!(q, r);
        // degenerate: collinear points keep the endpoints
        let s = poly(2, &[&[0, 0], &[1, 1], &[2, 2]]);
        assert_eq!(s.vertices().len(), 2);
    }

    #[test]
    fn volumes() {
        // unit simplex in dimensions 1..4 has volume 1/p!
        for p in 1..=4usize {
            let mut pts: Vec<Vec<Rat>> = vec![vec![Rat::zero(); p]];
            for i in 0..p {
                let mut e = vec![Rat::zero(); p];
                e[i] = Rat::one();
                pts.push(e);
            }
            let q = RatPolytope::from_points(p, &pts).unwrap();
            assert_eq!(q.hull_volume(), Rat::new(Int::one(), factorial(p)));
        }
        let square = poly(2, &[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(square.hull_volume(), Rat::one());
        let pentagon = poly(2, &[&[0, 0], &[1, 0], &[2, 1], &[1, 2], &[0, 1]]);
        assert_eq!(pentagon.hull_volume(), rat(5, 2));
        assert_eq!(shoelace(pentagon.vertices()), rat(5, 2));
        // degenerate has volume zero
        let seg = poly(2, &[&[0, 0], &[3, 3]]);
        assert_eq!(seg.hull_volume(), Rat::zero());
        // 3-d cube
        let cube = poly(
            3,
            &[
                &[0, 0, 0],
                &[1, 0, 0],
                &[0, 1, 0],
                &[0, 0, 1],
                &[1, 1, 0],
                &[1, 0, 1],
                &[0, 1, 1],
                &[1, 1, 1],
            ],
        );
        assert_eq!(cube.hull_volume(), Rat::one());
    }

    #[test]
    fn volume_matches_shoelace_on_random_2d() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let pts: Vec<Vec<Rat>> = (0..6)
                .map(|_| pt(&[rng.gen_range(-4..=4), rng.gen_range(-4..=4)]))
                .collect();
            let q = RatPolytope::from_points(2, &pts).unwrap();
            if q.affine_rank() == 2 {
                assert_eq!(q.hull_volume(), shoelace(q.vertices()));
            }
        }
    }

    #[test]
    fn minkowski_sums() {
        let q = poly(2, &[&[0, 0], &[1, 0], &[0, 1]]);
        let origin = RatPolytope::origin(2);
        assert_eq!(q.minkowski_sum(&origin).unwrap(), q);
        let e1 = poly(2, &[&[0, 0], &[1, 0]]);
        let e2 = poly(2, &[&[0, 0], &[0, 1]]);
        let square = poly(2, &[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(e1.minkowski_sum(&e2).unwrap(), square);
        let diag = poly(2, &[&[0, 0], &[1, 1]]);
        let pentagon = poly(2, &[&[0, 0], &[1, 0], &[2, 1], &[1, 2], &[0, 1]]);
        assert_eq!(diag.minkowski_sum(&q).unwrap(), pentagon);
        // dimension mismatch
        assert!(q.minkowski_sum(&poly(1, &[&[0], &[1]])).is_err());
    }

    #[test]
    fn mixed_volumes() {
        let e1 = poly(2, &[&[0, 0], &[1, 0]]);
        let e2 = poly(2, &[&[0, 0], &[0, 1]]);
        assert_eq!(mixed_volume(&[&e1, &e2]).unwrap(), Rat::one());

        // MV(Q, ..., Q) = p! Vol(Q)
        let q = poly(2, &[&[0, 0], &[2, 0], &[0, 3], &[2, 3]]);
        assert_eq!(
            mixed_volume(&[&q, &q]).unwrap(),
            Rat::from(factorial(2)) * q.hull_volume()
        );
        let c = poly(3, &[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(
            mixed_volume(&[&c, &c, &c]).unwrap(),
            Rat::from(factorial(3)) * c.hull_volume()
        );

        let diag = poly(2, &[&[0, 0], &[1, 1]]);
        let tri = poly(2, &[&[0, 0], &[1, 0], &[0, 1]]);
        assert_eq!(mixed_volume(&[&diag, &tri]).unwrap(), rat(2, 1));

        // degenerate inputs are legal: parallel segments span no area
        let seg = poly(2, &[&[0, 0], &[2, 2]]);
        assert_eq!(mixed_volume(&[&diag, &seg]).unwrap(), Rat::zero());
    }

    #[test]
    fn prism_degrees() {
        let tri = poly(2, &[&[0, 0], &[1, 0], &[0, 1]]);
        assert_eq!(prism_degree(&tri, &pt(&[1, 1])).unwrap(), rat(2, 1));
        let square = poly(2, &[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(prism_degree(&square, &pt(&[1, 0])).unwrap(), Rat::one());
        // p = 1 convention
        let seg = poly(1, &[&[0], &[5]]);
        assert_eq!(prism_degree(&seg, &pt(&[-3])).unwrap(), rat(3, 1));
        assert!(prism_degree(&tri, &pt(&[0, 0])).is_err());
    }

    #[test]
    fn hull_membership() {
        let tri = poly(2, &[&[0, 0], &[2, 0], &[0, 2]]);
        assert!(tri.contains_point(&pt(&[1, 1])));
        assert!(tri.contains_point(&[rat(1, 2), rat(1, 2)]));
        assert!(!tri.contains_point(&pt(&[2, 2])));
        assert!(poly(2, &[&[0, 0], &[1, 0]]).is_subset_of(&tri));
    }
}
