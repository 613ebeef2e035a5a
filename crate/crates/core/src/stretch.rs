//! Row and column stretching of dense matrices.
//!
//! A row stretching splits selected rows along an ordered partition of the
//! columns into `m` pieces. Consecutive pieces are tied together by glue
//! columns carrying `-sigma` in the earlier piece and `+sigma` in the later
//! one. Column stretching is the transpose.
//!
//! Layout: original rows and columns keep their positions (the first piece
//! of a stretched row stays where the row was); pieces `2..m` and the glue
//! are appended. Use [`StretchOutput::permuted`] for any other ordering.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::lu::dense_lu;
use crate::matrix::{DenseMatrix, Norm, Permutation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StretchMode {
    Row,
    Column,
}

/// Glue scaling `D_j = sigma I`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlueSpec {
    pub mode: StretchMode,
    pub norm: Norm,
    pub sigma: f64,
}

/// Glue magnitude that keeps `||A^S||_p` within a factor of `||A||_p`.
pub fn glue_sigma(a: &DenseMatrix, mode: StretchMode, p: Norm) -> Result<GlueSpec> {
    let na = a.norm(p);
    if na == 0.0 {
        return Err(Error::InvalidParameter(
            "glue scaling of a zero matrix".into(),
        ));
    }
    let sigma = match (mode, p) {
        (StretchMode::Row, Norm::One) | (StretchMode::Column, Norm::Inf) => na / 2.0,
        (StretchMode::Row, Norm::Inf) | (StretchMode::Column, Norm::One) => na,
    };
    Ok(GlueSpec {
        mode,
        norm: p,
        sigma,
    })
}

/// Ordered partition of `0..len` into nonempty blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Blocks {
    sets: Vec<Vec<usize>>,
    len: usize,
}

impl Blocks {
    /// Contiguous blocks with the given sizes.
    pub fn from_sizes(sizes: &[usize]) -> Result<Self> {
        let mut sets = Vec::with_capacity(sizes.len());
        let mut start = 0;
        for &s in sizes {
            if s == 0 {
                return Err(Error::InvalidParameter("empty block in partition".into()));
            }
            sets.push((start..start + s).collect());
            start += s;
        }
        Self::from_sets(sets, start)
    }

    pub fn from_sets(sets: Vec<Vec<usize>>, len: usize) -> Result<Self> {
        let mut seen = vec![false; len];
        for set in &sets {
            if set.is_empty() {
                return Err(Error::InvalidParameter("empty block in partition".into()));
            }
            for &i in set {
                if i >= len || seen[i] {
                    return Err(Error::InvalidParameter(format!(
                        "partition index {i} repeated or out of range"
                    )));
                }
                seen[i] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidParameter(
                "partition does not cover every index".into(),
            ));
        }
        if sets.is_empty() {
            return Err(Error::InvalidParameter("partition with no blocks".into()));
        }
        Ok(Self { sets, len })
    }

    pub fn count(&self) -> usize {
        self.sets.len()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }
}

/// Correspondence between original and stretched indices.
///
/// "Stretched dimension" means rows for row stretching and columns for
/// column stretching; the "carried" dimension is the other one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StretchMap {
    pub mode: StretchMode,
    pub original_order: usize,
    pub order: usize,
    /// Per original index, its descendants in the stretched dimension. The
    /// first entry is the representative that receives the right side (row
    /// mode) or yields the solution (column mode).
    pub groups: Vec<Vec<usize>>,
    /// Per original index, its position in the carried dimension.
    pub carry: Vec<usize>,
    /// Positions of glue in the carried dimension.
    pub glue: Vec<usize>,
}

impl StretchMap {
    /// Largest number of pieces any original index was split into.
    pub fn max_pieces(&self) -> usize {
        self.groups.iter().map(Vec::len).max().unwrap_or(1)
    }

    fn check_len(&self, found: usize, expected: usize) -> Result<()> {
        if found != expected {
            return Err(Error::DimensionMismatch {
                context: "stretch map vector",
                expected,
                found,
            });
        }
        Ok(())
    }

    /// Right side of the stretched system for an original right side `y`.
    pub fn scatter_rhs(&self, y: &[f64]) -> Result<Vec<f64>> {
        self.check_len(y.len(), self.original_order)?;
        let mut out = vec![0.0; self.order];
        match self.mode {
            StretchMode::Row => {
                for (g, v) in self.groups.iter().zip(y) {
                    out[g[0]] = *v;
                }
            }
            StretchMode::Column => {
                for (&p, v) in self.carry.iter().zip(y) {
                    out[p] = *v;
                }
            }
        }
        Ok(out)
    }

    /// Original unknowns read off a stretched solution `z`.
    pub fn gather_solution(&self, z: &[f64]) -> Result<Vec<f64>> {
        self.check_len(z.len(), self.order)?;
        Ok(match self.mode {
            StretchMode::Row => self.carry.iter().map(|&p| z[p]).collect(),
            StretchMode::Column => self.groups.iter().map(|g| z[g[0]]).collect(),
        })
    }

    fn relabel(&self, stretched: &Permutation, carried: &Permutation) -> StretchMap {
        let s_inv = stretched.inverse();
        let c_inv = carried.inverse();
        StretchMap {
            mode: self.mode,
            original_order: self.original_order,
            order: self.order,
            groups: self
                .groups
                .iter()
                .map(|g| g.iter().map(|&p| s_inv.source(p)).collect())
                .collect(),
            carry: self.carry.iter().map(|&p| c_inv.source(p)).collect(),
            glue: self.glue.iter().map(|&p| c_inv.source(p)).collect(),
        }
    }
}

/// Block factors of a stretching.
///
/// Row mode: `A^S = [B G] P^T` with `Y B = A` and `Y G = 0`.
/// Column mode: `A^S = P [B; G]` with `B X = A` and `G X = 0`; `y` then
/// holds `X`.
#[derive(Debug, Clone, PartialEq)]
pub struct StretchCertificate {
    pub mode: StretchMode,
    pub b: DenseMatrix,
    pub g: DenseMatrix,
    pub y: DenseMatrix,
    pub perm: Permutation,
}

/// A stretched matrix with its bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct StretchOutput {
    pub matrix: DenseMatrix,
    pub map: StretchMap,
    pub glue: GlueSpec,
    /// No stretching selected a descendant of an earlier stretched row/column.
    pub disjoint: bool,
}

impl StretchOutput {
    pub fn order(&self) -> usize {
        self.map.order
    }

    pub fn max_pieces(&self) -> usize {
        self.map.max_pieces()
    }

    /// Row-stretching view: the transpose for column mode.
    fn row_view(&self) -> DenseMatrix {
        match self.map.mode {
            StretchMode::Row => self.matrix.clone(),
            StretchMode::Column => self.matrix.transpose(),
        }
    }

    pub fn certificate(&self) -> StretchCertificate {
        let rv = self.row_view();
        let n = self.map.original_order;
        let all: Vec<usize> = (0..self.order()).collect();
        let b = rv.submatrix(&all, &self.map.carry);
        let g = rv.submatrix(&all, &self.map.glue);
        let mut y = DenseMatrix::zeros(n, self.order());
        for (i, grp) in self.map.groups.iter().enumerate() {
            for &p in grp {
                y[(i, p)] = 1.0;
            }
        }
        let mut cols: Vec<usize> = vec![0; self.order()];
        for (k, &p) in self.map.carry.iter().chain(&self.map.glue).enumerate() {
            cols[p] = k;
        }
        let perm = Permutation::from_vec(cols).expect("carry and glue partition the columns");
        match self.map.mode {
            StretchMode::Row => StretchCertificate {
                mode: StretchMode::Row,
                b,
                g,
                y,
                perm,
            },
            StretchMode::Column => StretchCertificate {
                mode: StretchMode::Column,
                b: b.transpose(),
                g: g.transpose(),
                y: y.transpose(),
                perm,
            },
        }
    }

    /// Reorders rows and columns of the stretched matrix after the fact.
    pub fn permuted(&self, rows: &Permutation, cols: &Permutation) -> Result<StretchOutput> {
        let matrix = self.matrix.permute(rows, cols)?;
        let map = match self.map.mode {
            StretchMode::Row => self.map.relabel(rows, cols),
            StretchMode::Column => self.map.relabel(cols, rows),
        };
        Ok(StretchOutput {
            matrix,
            map,
            glue: self.glue,
            disjoint: self.disjoint,
        })
    }

    /// Stretches this output again in the same mode. `selected` indexes the
    /// current stretched matrix; `blocks` partitions its carried dimension.
    pub fn restretch(
        &self,
        selected: &[usize],
        blocks: &Blocks,
        glue: &GlueSpec,
    ) -> Result<StretchOutput> {
        if glue.mode != self.map.mode {
            return Err(Error::InvalidParameter(
                "mixed row and column stretching".into(),
            ));
        }
        let rv = self.row_view();
        let row_glue = GlueSpec {
            mode: StretchMode::Row,
            ..*glue
        };
        let second = stretch_rows(&rv, selected, blocks, &row_glue)?;
        let stretched_before: Vec<bool> = {
            let mut v = vec![false; self.order()];
            for g in self.map.groups.iter().filter(|g| g.len() > 1) {
                for &p in g {
                    v[p] = true;
                }
            }
            v
        };
        let disjoint = self.disjoint && selected.iter().all(|&p| !stretched_before[p]);
        let groups = self
            .map
            .groups
            .iter()
            .map(|g| {
                g.iter()
                    .flat_map(|&p| second.map.groups[p].iter().copied())
                    .collect()
            })
            .collect();
        let carry = self
            .map
            .carry
            .iter()
            .map(|&p| second.map.carry[p])
            .collect();
        let glue_pos = self
            .map
            .glue
            .iter()
            .map(|&p| second.map.carry[p])
            .chain(second.map.glue.iter().copied())
            .collect();
        let matrix = match self.map.mode {
            StretchMode::Row => second.matrix,
            StretchMode::Column => second.matrix.transpose(),
        };
        Ok(StretchOutput {
            map: StretchMap {
                mode: self.map.mode,
                original_order: self.map.original_order,
                order: matrix.rows(),
                groups,
                carry,
                glue: glue_pos,
            },
            matrix,
            glue: *glue,
            disjoint,
        })
    }
}

fn check_square(a: &DenseMatrix) -> Result<usize> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            context: "stretching needs a square matrix",
            expected: a.rows(),
            found: a.cols(),
        });
    }
    Ok(a.rows())
}

fn check_selection(sel: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    for &s in sel {
        if s >= n || seen[s] {
            return Err(Error::InvalidParameter(format!(
                "selected index {s} repeated or out of range"
            )));
        }
        seen[s] = true;
    }
    Ok(())
}

fn check_glue(glue: &GlueSpec, mode: StretchMode) -> Result<()> {
    if glue.mode != mode {
        return Err(Error::InvalidParameter(
            "glue spec built for the other mode".into(),
        ));
    }
    if !glue.sigma.is_finite() || glue.sigma == 0.0 {
        return Err(Error::InvalidParameter(
            "glue sigma must be finite and nonzero".into(),
        ));
    }
    Ok(())
}

/// Stretches the rows `rows` of `a` over the column partition `blocks`.
pub fn stretch_rows(
    a: &DenseMatrix,
    rows: &[usize],
    blocks: &Blocks,
    glue: &GlueSpec,
) -> Result<StretchOutput> {
    let n = check_square(a)?;
    check_selection(rows, n)?;
    check_glue(glue, StretchMode::Row)?;
    if blocks.len() != n {
        return Err(Error::DimensionMismatch {
            context: "column partition length",
            expected: n,
            found: blocks.len(),
        });
    }
    let d = rows.len();
    let m = blocks.count();
    let order = n + d * (m - 1);
    let sigma = glue.sigma;
    let mut s = DenseMatrix::zeros(order, order);
    let mut groups: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    let mut selected = vec![false; n];
    for &r in rows {
        selected[r] = true;
    }
    for i in (0..n).filter(|&i| !selected[i]) {
        s.row_mut(i)[..n].copy_from_slice(a.row(i));
    }
    for (t, &r) in rows.iter().enumerate() {
        for (b, set) in blocks.sets().iter().enumerate() {
            let pos = if b == 0 { r } else { n + (b - 1) * d + t };
            if b > 0 {
                groups[r].push(pos);
            }
            for &j in set {
                s[(pos, j)] = a[(r, j)];
            }
            if b + 1 < m {
                s[(pos, n + b * d + t)] = -sigma;
            }
            if b > 0 {
                s[(pos, n + (b - 1) * d + t)] = sigma;
            }
        }
    }
    Ok(StretchOutput {
        matrix: s,
        map: StretchMap {
            mode: StretchMode::Row,
            original_order: n,
            order,
            groups,
            carry: (0..n).collect(),
            glue: (n..order).collect(),
        },
        glue: *glue,
        disjoint: true,
    })
}

/// Stretches the columns `cols` of `a` over the row partition `blocks`.
pub fn stretch_cols(
    a: &DenseMatrix,
    cols: &[usize],
    blocks: &Blocks,
    glue: &GlueSpec,
) -> Result<StretchOutput> {
    check_glue(glue, StretchMode::Column)?;
    let row_glue = GlueSpec {
        mode: StretchMode::Row,
        ..*glue
    };
    let t = stretch_rows(&a.transpose(), cols, blocks, &row_glue)?;
    Ok(StretchOutput {
        matrix: t.matrix.transpose(),
        map: StretchMap {
            mode: StretchMode::Column,
            ..t.map
        },
        glue: *glue,
        disjoint: true,
    })
}

/// First identity that failed in [`verify_certificate`].
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{identity} violated: {detail}")]
pub struct CertificateViolation {
    pub identity: &'static str,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertificateReport {
    /// Relative error of the inverse reconstruction, when it was attempted.
    pub inverse_error: Option<f64>,
}

/// Rank of `m` by Gaussian elimination with complete pivoting.
pub fn numerical_rank(m: &DenseMatrix) -> usize {
    let mut w = m.clone();
    let (r, c) = (w.rows(), w.cols());
    let tol = (r.max(c) as f64) * f64::EPSILON * w.max_abs();
    let mut rank = 0;
    for k in 0..r.min(c) {
        let (mut pi, mut pj, mut best) = (k, k, 0.0);
        for i in k..r {
            for j in k..c {
                if w[(i, j)].abs() > best {
                    best = w[(i, j)].abs();
                    pi = i;
                    pj = j;
                }
            }
        }
        if best <= tol || best == 0.0 {
            break;
        }
        rank += 1;
        w.swap_rows(k, pi);
        for i in 0..r {
            let t = w[(i, k)];
            w[(i, k)] = w[(i, pj)];
            w[(i, pj)] = t;
        }
        for i in k + 1..r {
            let f = w[(i, k)] / w[(k, k)];
            for j in k..c {
                w[(i, j)] -= f * w[(k, j)];
            }
        }
    }
    rank
}

fn violation(identity: &'static str, detail: String) -> CertificateViolation {
    CertificateViolation { identity, detail }
}

/// Checks the block identities of a stretching against the original matrix.
///
/// Exact identities are compared bit for bit. For orders up to 64 the
/// inverse of `A` is also reconstructed from the stretched inverse.
pub fn verify_certificate(
    a: &DenseMatrix,
    out: &StretchOutput,
) -> std::result::Result<CertificateReport, CertificateViolation> {
    let map = &out.map;
    let n = map.original_order;
    if a.rows() != n || !a.is_square() {
        return Err(violation(
            "shape",
            format!("expected order {n}, got {}x{}", a.rows(), a.cols()),
        ));
    }
    let (av, sv) = match map.mode {
        StretchMode::Row => (a.clone(), out.matrix.clone()),
        StretchMode::Column => (a.transpose(), out.matrix.transpose()),
    };
    let cert = out.certificate();
    let (b, g, y) = match map.mode {
        StretchMode::Row => (cert.b, cert.g, cert.y),
        StretchMode::Column => (cert.b.transpose(), cert.g.transpose(), cert.y.transpose()),
    };
    let mut bg = DenseMatrix::zeros(sv.rows(), sv.cols());
    for i in 0..sv.rows() {
        for j in 0..n {
            bg[(i, j)] = b[(i, j)];
        }
        for j in 0..g.cols() {
            bg[(i, n + j)] = g[(i, j)];
        }
    }
    let rebuilt = bg
        .permute(&Permutation::identity(sv.rows()), &cert.perm)
        .map_err(|e| violation("block layout", e.to_string()))?;
    if rebuilt != sv {
        return Err(violation(
            "A^S = [B G] P^T",
            "stretched matrix differs from its blocks".into(),
        ));
    }
    for j in 0..y.cols() {
        let ones = (0..n).filter(|&i| y[(i, j)] == 1.0).count();
        let others = (0..n)
            .filter(|&i| y[(i, j)] != 0.0 && y[(i, j)] != 1.0)
            .count();
        if ones != 1 || others != 0 {
            return Err(violation(
                "Y is a 0/1 selector",
                format!("column {j} has {ones} ones"),
            ));
        }
    }
    let yb = y.matmul(&b).expect("shapes agree");
    if yb != av {
        return Err(violation(
            "Y B = A",
            "summed pieces differ from the original".into(),
        ));
    }
    let yg = y.matmul(&g).expect("shapes agree");
    if yg.max_abs() != 0.0 {
        return Err(violation(
            "Y G = 0",
            format!("max |YG| = {:e}", yg.max_abs()),
        ));
    }
    if numerical_rank(&g) != g.cols() {
        return Err(violation(
            "G has full column rank",
            format!("rank below {}", g.cols()),
        ));
    }
    let mut inverse_error = None;
    if out.order() <= 64 {
        if let (Ok(fa), Ok(fs)) = (dense_lu(&av), dense_lu(&sv)) {
            let inv_a = crate::spectral::inverse_from(&fa);
            let inv_s = crate::spectral::inverse_from(&fs);
            let mut err: f64 = 0.0;
            for j in 0..n {
                for i in 0..n {
                    let via = inv_s[(map.carry[j], map.groups[i][0])];
                    err = err.max((via - inv_a[(j, i)]).abs());
                }
            }
            let rel = err / inv_a.max_abs();
            if rel > 1e-10 {
                return Err(violation(
                    "A^-1 = Xbar (A^S)^-1 Y^-",
                    format!("relative error {rel:e}"),
                ));
            }
            inverse_error = Some(rel);
        }
    }
    Ok(CertificateReport { inverse_error })
}

/// Weighted graph on the stretched dimension: an edge joins two rows (row
/// mode) or columns (column mode) for every glue column (row) they share.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlueGraph {
    pub vertices: usize,
    pub edges: BTreeMap<(usize, usize), usize>,
}

impl GlueGraph {
    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..self.vertices).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for &(a, b) in self.edges.keys() {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut comps: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..self.vertices {
            let r = find(&mut parent, v);
            comps.entry(r).or_default().push(v);
        }
        comps.into_values().collect()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertices];
        for (&(a, b), &w) in &self.edges {
            deg[a] += w;
            deg[b] += w;
        }
        deg
    }
}

/// Nonzero positions of one glue line in the stretched dimension.
fn glue_line(out: &StretchOutput, pos: usize) -> Vec<(usize, f64)> {
    let m = &out.matrix;
    match out.map.mode {
        StretchMode::Row => (0..m.rows())
            .filter(|&i| m[(i, pos)] != 0.0)
            .map(|i| (i, m[(i, pos)]))
            .collect(),
        StretchMode::Column => (0..m.cols())
            .filter(|&j| m[(pos, j)] != 0.0)
            .map(|j| (j, m[(pos, j)]))
            .collect(),
    }
}

pub fn glue_graph(out: &StretchOutput) -> GlueGraph {
    let mut edges = BTreeMap::new();
    for &pos in &out.map.glue {
        let nz = glue_line(out, pos);
        for a in 0..nz.len() {
            for b in a + 1..nz.len() {
                *edges.entry((nz[a].0, nz[b].0)).or_insert(0) += 1;
            }
        }
    }
    GlueGraph {
        vertices: out.order(),
        edges,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GlueTreeReport {
    pub ok: bool,
    pub components: usize,
    pub diagnostics: Vec<String>,
}

/// Checks that the glue forms one tree per original row (column): every glue
/// line has two entries of equal magnitude and opposite sign, no pair of
/// pieces shares two glue lines, and components coincide with the groups.
pub fn check_glue_trees(out: &StretchOutput) -> GlueTreeReport {
    let mut diag = Vec::new();
    for &pos in &out.map.glue {
        let nz = glue_line(out, pos);
        if nz.len() != 2 {
            diag.push(format!("glue line {pos} has {} nonzeros", nz.len()));
        } else if nz[0].1 != -nz[1].1 {
            diag.push(format!(
                "glue line {pos} entries {:e} and {:e} do not cancel",
                nz[0].1, nz[1].1
            ));
        }
    }
    let graph = glue_graph(out);
    for (&(a, b), &w) in &graph.edges {
        if w != 1 {
            diag.push(format!("pieces {a} and {b} share {w} glue lines"));
        }
    }
    let comps = graph.components();
    let mut groups: Vec<Vec<usize>> = out
        .map
        .groups
        .iter()
        .map(|g| {
            let mut g = g.clone();
            g.sort_unstable();
            g
        })
        .collect();
    groups.sort();
    let mut sorted = comps.clone();
    sorted.sort();
    if sorted != groups {
        diag.push("glue components differ from the descendant groups".into());
    }
    for c in &comps {
        let e: usize = graph
            .edges
            .iter()
            .filter(|((a, _), _)| c.binary_search(a).is_ok())
            .map(|(_, w)| w)
            .sum();
        if e + 1 != c.len() {
            diag.push(format!("component of {} vertices has {e} edges", c.len()));
        }
    }
    GlueTreeReport {
        ok: diag.is_empty(),
        components: comps.len(),
        diagnostics: diag,
    }
}

/// Row-mode blocks after moving every group representative to the front.
struct SplitBlocks {
    reps: Vec<usize>,
    others: Vec<usize>,
    b1: DenseMatrix,
    b2: DenseMatrix,
    g2: DenseMatrix,
    y2: DenseMatrix,
}

fn split_blocks(out: &StretchOutput) -> SplitBlocks {
    let map = &out.map;
    let rv = out.row_view();
    let reps: Vec<usize> = map.groups.iter().map(|g| g[0]).collect();
    let mut is_rep = vec![false; out.order()];
    for &r in &reps {
        is_rep[r] = true;
    }
    let others: Vec<usize> = (0..out.order()).filter(|&i| !is_rep[i]).collect();
    let mut owner = vec![0; out.order()];
    for (i, g) in map.groups.iter().enumerate() {
        for &p in g {
            owner[p] = i;
        }
    }
    let mut y2 = DenseMatrix::zeros(map.original_order, others.len());
    for (t, &p) in others.iter().enumerate() {
        y2[(owner[p], t)] = 1.0;
    }
    SplitBlocks {
        b1: rv.submatrix(&reps, &map.carry),
        b2: rv.submatrix(&others, &map.carry),
        g2: rv.submatrix(&others, &map.glue),
        y2,
        reps,
        others,
    }
}

/// Outcome of inverting the glue block left after deleting one row per tree.
#[derive(Debug, Clone, PartialEq)]
pub struct G2Report {
    pub order: usize,
    /// Largest distance of an entry of `G2^-1` from `{0, 1/sigma, -1/sigma}`,
    /// relative to `1/sigma`.
    pub max_deviation: f64,
}

pub fn g2_inverse_check(out: &StretchOutput) -> Result<G2Report> {
    let sb = split_blocks(out);
    let k = sb.g2.rows();
    if k == 0 {
        return Ok(G2Report {
            order: 0,
            max_deviation: 0.0,
        });
    }
    let inv = crate::spectral::inverse(&sb.g2)?;
    let s = 1.0 / out.glue.sigma.abs();
    let mut dev: f64 = 0.0;
    for i in 0..k {
        for j in 0..k {
            let v = inv[(i, j)].abs();
            dev = dev.max(v.min((v - s).abs()) / s);
        }
    }
    Ok(G2Report {
        order: k,
        max_deviation: dev,
    })
}

/// Explicit inverse of a stretched matrix assembled from `A^-1` and `G2^-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct StretchedInverse {
    pub inverse: DenseMatrix,
    /// `G2^-1 B2`, whose norm is bounded by `||A|| / sigma` up to a factor.
    pub g2_inv_b2: DenseMatrix,
}

pub fn stretched_inverse(a: &DenseMatrix, out: &StretchOutput) -> Result<StretchedInverse> {
    let map = &out.map;
    let n = map.original_order;
    let av = match map.mode {
        StretchMode::Row => a.clone(),
        StretchMode::Column => a.transpose(),
    };
    let sb = split_blocks(out);
    let a_inv = crate::spectral::inverse(&av)?;
    let k = sb.others.len();
    let g2_inv = if k > 0 {
        crate::spectral::inverse(&sb.g2)?
    } else {
        DenseMatrix::zeros(0, 0)
    };
    let g2_inv_b2 = g2_inv.matmul(&sb.b2)?;
    let ainv_y2 = a_inv.matmul(&sb.y2)?;
    let lower_left = g2_inv_b2.matmul(&a_inv)?;
    let mut inner = DenseMatrix::identity(k);
    let b2_ainv_y2 = sb.b2.matmul(&ainv_y2)?;
    for i in 0..k {
        for j in 0..k {
            inner[(i, j)] -= b2_ainv_y2[(i, j)];
        }
    }
    let lower_right = g2_inv.matmul(&inner)?;
    let order = out.order();
    let mut inv = DenseMatrix::zeros(order, order);
    for (r, &col_pos) in map.carry.iter().enumerate() {
        for (c, &row_pos) in sb.reps.iter().enumerate() {
            inv[(col_pos, row_pos)] = a_inv[(r, c)];
        }
        for (c, &row_pos) in sb.others.iter().enumerate() {
            inv[(col_pos, row_pos)] = ainv_y2[(r, c)];
        }
    }
    for (r, &col_pos) in map.glue.iter().enumerate() {
        for (c, &row_pos) in sb.reps.iter().enumerate() {
            inv[(col_pos, row_pos)] = -lower_left[(r, c)];
        }
        for (c, &row_pos) in sb.others.iter().enumerate() {
            inv[(col_pos, row_pos)] = lower_right[(r, c)];
        }
    }
    debug_assert_eq!(sb.b1.rows(), n);
    let inverse = match map.mode {
        StretchMode::Row => inv,
        StretchMode::Column => inv.transpose(),
    };
    Ok(StretchedInverse { inverse, g2_inv_b2 })
}

/// Factor `c` in `kappa_p(A^S) <= c kappa_p(A)` for `m` pieces.
pub fn condition_multiplier(mode: StretchMode, p: Norm, m: u64, disjoint: bool) -> u64 {
    let quad = if disjoint { (m * m).min(3 * m) } else { m * m };
    match (mode, p) {
        (StretchMode::Row, Norm::One) | (StretchMode::Column, Norm::Inf) => 2 * m - 1,
        (StretchMode::Row, Norm::Inf) | (StretchMode::Column, Norm::One) => quad,
    }
}

/// Forward error bound for solving through a stretching with a backward
/// stable factorization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AprioriBound {
    pub c1: u64,
    pub c2: u64,
    pub delta1: f64,
    pub delta2: f64,
    /// Multiplies `kappa_p(A)` to bound the relative error in `x`.
    pub multiplier: f64,
}

pub fn apriori_constants(mode: StretchMode, p: Norm, m: u64, disjoint: bool) -> (u64, u64) {
    let odd = 2 * m - 1;
    let (c1, c2) = match (mode, p) {
        (StretchMode::Row, Norm::One) => (2, odd * odd),
        (StretchMode::Row, Norm::Inf) => (m, m * m),
        (StretchMode::Column, Norm::One) => (m, m * m * m),
        (StretchMode::Column, Norm::Inf) => (2, odd),
    };
    if !disjoint {
        return (c1, c2);
    }
    let c2d = match (mode, p) {
        (StretchMode::Row, Norm::Inf) => 3 * m,
        (StretchMode::Column, Norm::One) => 3 * m * m,
        _ => c2,
    };
    (c1.min(2), c2.min(c2d))
}

/// `order` is the order of the factored matrix, `eps` the unit roundoff
/// and `rel_e` the relative backward error of the factorization.
pub fn apriori_bound(
    mode: StretchMode,
    p: Norm,
    m: u64,
    disjoint: bool,
    order: usize,
    eps: f64,
    rel_e: f64,
) -> Result<AprioriBound> {
    if m == 0 {
        return Err(Error::InvalidParameter(
            "stretching into zero pieces".into(),
        ));
    }
    let (c1, c2) = apriori_constants(mode, p, m, disjoint);
    let delta1 = c1 as f64 * (order as f64 * eps.ln_1p()).exp_m1();
    if delta1 >= 1.0 {
        return Err(Error::Hypothesis(format!(
            "delta1 = {delta1:e} is not below 1"
        )));
    }
    let delta2 = rel_e;
    let cap = (1.0 - delta1) / (1.0 + delta1);
    if delta2 >= cap {
        return Err(Error::Hypothesis(format!(
            "delta2 = {delta2:e} is not below {cap:e}"
        )));
    }
    let s = delta1 + delta2 + delta1 * delta2;
    Ok(AprioriBound {
        c1,
        c2,
        delta1,
        delta2,
        multiplier: c2 as f64 * s / (1.0 - s),
    })
}
