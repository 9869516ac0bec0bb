//! Root data presented on a cocharacter lattice.
//!
//! A root datum here is the combinatorial core of a connected reductive
//! group: a lattice `Y ≅ Z^rank` (cocharacters), simple coroots `α∨_i` as
//! vectors in `Y`, and simple roots `α_i` as integer covectors on `Y`
//! (given by their pairing row against the standard basis). Everything
//! else — the Cartan matrix, the full sets of positive roots and coroots,
//! `2ρ`, the finite Weyl group — is derived and validated at construction
//! time.
//!
//! Two stock realizations are provided for the classical and exceptional
//! Cartan types: *adjoint* (simple roots are the standard covector basis,
//! coroots are the Cartan columns) and *simply connected* (simple coroots
//! are the standard basis, roots are the Cartan rows). Arbitrary explicit
//! data are accepted and validated; in particular lattices with central
//! directions (rank larger than the number of simple roots) work for
//! everything that does not need a finite `Y/ZR∨`.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::sync::{Arc, OnceLock, RwLock};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::{Error, Result};

/// An element of the lattice `Y`, as coordinates in the standard basis.
pub type Coweight = Vec<i64>;

/// Hard cap on reflection-orbit generation. The largest finite system we
/// ever meet (E8) has 240 roots; anything that blows past this cap is not
/// of finite type.
const ORBIT_CAP: usize = 1000;

/// Hard cap on finite-Weyl-group enumeration (E6 fits, E7/E8 do not; the
/// operations that need a full enumeration are only used on small ranks).
const WEYL_ENUM_CAP: usize = 2_000_000;

// ---------------------------------------------------------------------------
// Small exact linear algebra
// ---------------------------------------------------------------------------

fn mat_vec(m: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let mut out = vec![vec![0i64; n]; n];
    for r in 0..n {
        for c in 0..n {
            out[r][c] = (0..n).map(|k| a[r][k] * b[k][c]).sum();
        }
    }
    out
}

fn identity_mat(n: usize) -> Vec<Vec<i64>> {
    let mut m = vec![vec![0i64; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1;
    }
    m
}

/// Fraction-free (Bareiss) determinant of a square integer matrix.
fn bareiss_det(mut m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            let swap = (k + 1..n).find(|&r| m[r][k] != 0);
            match swap {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

fn minor(m: &[Vec<i128>], skip_r: usize, skip_c: usize) -> Vec<Vec<i128>> {
    m.iter()
        .enumerate()
        .filter(|(r, _)| *r != skip_r)
        .map(|(_, row)| {
            row.iter()
                .enumerate()
                .filter(|(c, _)| *c != skip_c)
                .map(|(_, &x)| x)
                .collect()
        })
        .collect()
}

/// Adjugate matrix: `adj(M) · M = det(M) · I`.
fn adjugate(m: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let n = m.len();
    let mut adj = vec![vec![0i128; n]; n];
    for r in 0..n {
        for c in 0..n {
            let cof = bareiss_det(minor(m, r, c));
            let sign = if (r + c) % 2 == 0 { 1 } else { -1 };
            // adjugate is the transposed cofactor matrix
            adj[c][r] = sign * cof;
        }
    }
    adj
}

/// Exact solver for `Σ_j c_j g_j = v` where the generators `g_j ∈ Z^dim`
/// are linearly independent columns. Solutions are unique when they
/// exist; consistency against *all* coordinates is verified on every
/// query, so `dim` may exceed the number of generators.
#[derive(Debug)]
struct ColumnSolver {
    generators: Vec<Vec<i64>>,
    /// Row indices forming an invertible square submatrix.
    rows: Vec<usize>,
    adj: Vec<Vec<i128>>,
    det: i128,
}

impl ColumnSolver {
    fn build(generators: &[Vec<i64>], dim: usize) -> Result<Self> {
        let m = generators.len();
        if m == 0 {
            return Ok(ColumnSolver {
                generators: Vec::new(),
                rows: Vec::new(),
                adj: Vec::new(),
                det: 1,
            });
        }
        // Greedily pick rows that keep the chosen submatrix invertible.
        let mut rows: Vec<usize> = Vec::new();
        for r in 0..dim {
            if rows.len() == m {
                break;
            }
            let mut trial = rows.clone();
            trial.push(r);
            if submatrix_rank(generators, &trial) == trial.len() {
                rows = trial;
            }
        }
        if rows.len() < m {
            return Err(Error::InvalidDatum(
                "generator vectors are not linearly independent".into(),
            ));
        }
        let square: Vec<Vec<i128>> = rows
            .iter()
            .map(|&r| generators.iter().map(|g| g[r] as i128).collect())
            .collect();
        let det = bareiss_det(square.clone());
        debug_assert_ne!(det, 0);
        Ok(ColumnSolver {
            generators: generators.to_vec(),
            rows,
            adj: adjugate(&square),
            det,
        })
    }

    /// The unique rational solution `(numerators, denominator)` with
    /// `c_j = num_j / den`, or `None` if `v` is outside the span. The
    /// denominator is normalized positive but not reduced.
    fn solve_rational(&self, v: &[i64]) -> Option<(Vec<i128>, i128)> {
        if self.generators.is_empty() {
            return v.iter().all(|&x| x == 0).then(|| (Vec::new(), 1));
        }
        let picked: Vec<i128> = self.rows.iter().map(|&r| v[r] as i128).collect();
        let mut nums: Vec<i128> = self
            .adj
            .iter()
            .map(|row| row.iter().zip(&picked).map(|(a, b)| a * b).sum())
            .collect();
        // Verify every coordinate, not just the selected rows.
        for (r, &vr) in v.iter().enumerate() {
            let lhs: i128 = self
                .generators
                .iter()
                .zip(&nums)
                .map(|(g, &c)| g[r] as i128 * c)
                .sum();
            if lhs != self.det * vr as i128 {
                return None;
            }
        }
        let mut den = self.det;
        if den < 0 {
            den = -den;
            for n in &mut nums {
                *n = -*n;
            }
        }
        Some((nums, den))
    }

    /// The unique integral solution, if `v` is an integral combination.
    fn solve_integral(&self, v: &[i64]) -> Option<Vec<i64>> {
        let (nums, den) = self.solve_rational(v)?;
        nums.iter()
            .map(|&n| (n % den == 0).then(|| (n / den) as i64))
            .collect()
    }
}

fn submatrix_rank(generators: &[Vec<i64>], rows: &[usize]) -> usize {
    // Rank of the |rows| × m matrix via fraction-free elimination.
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .map(|&r| generators.iter().map(|g| g[r] as i128).collect())
        .collect();
    let nrows = m.len();
    let ncols = generators.len();
    let mut rank = 0;
    for col in 0..ncols {
        let pivot = (rank..nrows).find(|&r| m[r][col] != 0);
        let Some(p) = pivot else { continue };
        m.swap(rank, p);
        for r in 0..nrows {
            if r != rank && m[r][col] != 0 {
                let (a, b) = (m[rank][col], m[r][col]);
                for c in 0..ncols {
                    m[r][c] = m[r][c] * a - m[rank][c] * b;
                }
            }
        }
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}

// ---------------------------------------------------------------------------
// Construction input
// ---------------------------------------------------------------------------

/// JSON-facing description of a root datum: either a named Cartan type
/// with a lattice form, or fully explicit lattice data.
///
/// ```json
/// {"type":"A1","form":"adjoint"}
/// {"rank":2,"simple_roots":[[1,0],[0,1]],"simple_coroots":[[2,-1],[-1,2]]}
/// ```
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DatumSpec {
    Named {
        #[serde(rename = "type")]
        kind: String,
        form: String,
    },
    Explicit {
        rank: usize,
        simple_roots: Vec<Vec<i64>>,
        simple_coroots: Vec<Vec<i64>>,
    },
}

/// The Cartan matrix of a named finite type, `cartan[i][j] = ⟨α∨_j, α_i⟩`.
///
/// Accepted names: `A1`…, `B2`…, `C2`…, `D3`…, `E6`, `E7`, `E8`, `F4`,
/// `G2` (case-insensitive).
pub fn standard_cartan(kind: &str) -> Result<Vec<Vec<i64>>> {
    let kind = kind.trim();
    let bad = || Error::Parse(format!("unknown Cartan type `{kind}`"));
    let (series, rank_str) = kind.split_at(1);
    let n: usize = rank_str.parse().map_err(|_| bad())?;
    let series = series.to_ascii_uppercase();
    let mut a = vec![vec![0i64; n]; n];
    for i in 0..n {
        a[i][i] = 2;
    }
    fn chain(a: &mut [Vec<i64>], edges: &[(usize, usize)]) {
        for &(u, v) in edges {
            a[u - 1][v - 1] = -1;
            a[v - 1][u - 1] = -1;
        }
    }
    match (series.as_str(), n) {
        ("A", n) if n >= 1 => {
            chain(&mut a, &(1..n).map(|i| (i, i + 1)).collect::<Vec<_>>());
        }
        ("B", n) if n >= 2 => {
            chain(&mut a, &(1..n).map(|i| (i, i + 1)).collect::<Vec<_>>());
            // α_n is the short root: ⟨α_{n-1}, α∨_n⟩ = -2.
            a[n - 2][n - 1] = -2;
        }
        ("C", n) if n >= 2 => {
            chain(&mut a, &(1..n).map(|i| (i, i + 1)).collect::<Vec<_>>());
            // α_n is the long root: ⟨α_n, α∨_{n-1}⟩ = -2.
            a[n - 1][n - 2] = -2;
        }
        ("D", n) if n >= 3 => {
            chain(&mut a, &(1..n - 1).map(|i| (i, i + 1)).collect::<Vec<_>>());
            chain(&mut a, &[(n - 2, n)]);
        }
        ("E", n @ 6..=8) => {
            let mut edges = vec![(1, 3), (3, 4), (4, 5), (5, 6), (2, 4)];
            if n >= 7 {
                edges.push((6, 7));
            }
            if n == 8 {
                edges.push((7, 8));
            }
            chain(&mut a, &edges);
        }
        ("F", 4) => {
            chain(&mut a, &[(1, 2), (2, 3), (3, 4)]);
            a[1][2] = -2;
        }
        ("G", 2) => {
            a[0][1] = -1;
            a[1][0] = -3;
        }
        _ => return Err(bad()),
    }
    Ok(a)
}

// ---------------------------------------------------------------------------
// RootDatum
// ---------------------------------------------------------------------------

/// A validated root datum with all derived structure populated.
///
/// Construct with [`build_root_datum`], [`RootDatum::adjoint`],
/// [`RootDatum::simply_connected`], or [`RootDatum::from_alias`]. The
/// struct is immutable after construction and safe to share across
/// threads.
#[derive(Debug)]
pub struct RootDatum {
    rank: usize,
    simple_roots: Vec<Vec<i64>>,
    simple_coroots: Vec<Vec<i64>>,
    cartan: Vec<Vec<i64>>,
    pos_roots: Vec<Vec<i64>>,
    pos_coroots: Vec<Vec<i64>>,
    /// Expansion of each positive root in the simple roots.
    pos_root_exps: Vec<Vec<i64>>,
    /// Expansion of each positive coroot in the simple coroots.
    pos_coroot_exps: Vec<Vec<i64>>,
    root_heights: Vec<i64>,
    two_rho: Vec<i64>,
    two_rho_check: Vec<i64>,
    /// Connected components of the Dynkin diagram (sorted index lists).
    components: Vec<Vec<usize>>,
    /// Index into `pos_roots` of the highest root of each component.
    component_highest: Vec<usize>,
    coroot_solver: ColumnSolver,
    /// Square solver for `⟨μ, α_i⟩ = p_i` (semisimple data only).
    pairing_solver: Option<ColumnSolver>,
    fingerprint: u128,
    longest: OnceLock<FiniteWeylElement>,
}

/// Build a root datum from a [`DatumSpec`], validating everything.
pub fn build_root_datum(spec: &DatumSpec) -> Result<RootDatum> {
    match spec {
        DatumSpec::Named { kind, form } => {
            let cartan = standard_cartan(kind)?;
            match form.to_ascii_lowercase().as_str() {
                "adjoint" | "adj" => RootDatum::adjoint(&cartan),
                "simply-connected" | "simply_connected" | "sc" => {
                    RootDatum::simply_connected(&cartan)
                }
                other => Err(Error::Parse(format!(
                    "unknown lattice form `{other}` (expected `adjoint` or `simply-connected`)"
                ))),
            }
        }
        DatumSpec::Explicit {
            rank,
            simple_roots,
            simple_coroots,
        } => RootDatum::from_explicit(*rank, simple_roots.clone(), simple_coroots.clone()),
    }
}

impl RootDatum {
    /// Adjoint realization of a Cartan matrix: `Y` is the coweight
    /// lattice of the adjoint group, simple roots are the standard
    /// covector basis, and coroot `j` has coordinates `cartan[·][j]`.
    pub fn adjoint(cartan: &[Vec<i64>]) -> Result<Self> {
        let n = cartan.len();
        let simple_roots = identity_mat(n);
        let simple_coroots: Vec<Vec<i64>> =
            (0..n).map(|j| (0..n).map(|i| cartan[i][j]).collect()).collect();
        Self::from_explicit(n, simple_roots, simple_coroots)
    }

    /// Simply connected realization: `Y` is the coroot lattice, simple
    /// coroots are the standard basis, and root `i` is `cartan[i][·]`.
    pub fn simply_connected(cartan: &[Vec<i64>]) -> Result<Self> {
        let n = cartan.len();
        let simple_coroots = identity_mat(n);
        let simple_roots: Vec<Vec<i64>> = cartan.to_vec();
        Self::from_explicit(n, simple_roots, simple_coroots)
    }

    /// Short names used by the CLI: `a1-adj`, `a1-sc`, `a2-adj`, `a2-sc`,
    /// `b2`, `g2`, and generally `<type>[-adj|-sc]` with `-adj` the
    /// default.
    pub fn from_alias(name: &str) -> Result<Self> {
        let name = name.trim().to_ascii_lowercase();
        let (kind, form) = match name.rsplit_once('-') {
            Some((k, f @ ("adj" | "sc"))) => (k.to_string(), f.to_string()),
            _ => (name.clone(), "adj".to_string()),
        };
        build_root_datum(&DatumSpec::Named {
            kind: kind.to_ascii_uppercase(),
            form,
        })
    }

    /// Validate explicit lattice data and derive the full structure.
    pub fn from_explicit(
        rank: usize,
        simple_roots: Vec<Vec<i64>>,
        simple_coroots: Vec<Vec<i64>>,
    ) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidDatum("rank must be positive".into()));
        }
        let n = simple_roots.len();
        if simple_coroots.len() != n {
            return Err(Error::InvalidDatum(format!(
                "{} simple roots but {} simple coroots",
                n,
                simple_coroots.len()
            )));
        }
        for v in simple_roots.iter().chain(&simple_coroots) {
            if v.len() != rank {
                return Err(Error::RankMismatch {
                    expected: rank,
                    got: v.len(),
                });
            }
        }
        let cartan: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| dot(&simple_coroots[j], &simple_roots[i]))
                    .collect()
            })
            .collect();
        for i in 0..n {
            if cartan[i][i] != 2 {
                return Err(Error::InvalidDatum(format!(
                    "⟨α∨_{0}, α_{0}⟩ = {1}, expected 2",
                    i + 1,
                    cartan[i][i]
                )));
            }
            for j in 0..n {
                if i != j {
                    if cartan[i][j] > 0 {
                        return Err(Error::InvalidDatum(format!(
                            "off-diagonal Cartan entry ⟨α∨_{}, α_{}⟩ = {} is positive",
                            j + 1,
                            i + 1,
                            cartan[i][j]
                        )));
                    }
                    if (cartan[i][j] == 0) != (cartan[j][i] == 0) {
                        return Err(Error::InvalidDatum(format!(
                            "Cartan zeros not symmetric at ({}, {})",
                            i + 1,
                            j + 1
                        )));
                    }
                }
            }
        }
        let coroot_solver = ColumnSolver::build(&simple_coroots, rank).map_err(|_| {
            Error::InvalidDatum("simple coroots are not linearly independent".into())
        })?;
        ColumnSolver::build(&simple_roots, rank).map_err(|_| {
            Error::InvalidDatum("simple roots are not linearly independent".into())
        })?;

        // Generate the full root system by closing the simple pairs under
        // all simple reflections, tracking both expansions.
        #[derive(Clone)]
        struct OrbitEntry {
            root: Vec<i64>,
            coroot: Vec<i64>,
            root_exp: Vec<i64>,
            coroot_exp: Vec<i64>,
        }
        let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
        let mut queue: VecDeque<OrbitEntry> = VecDeque::new();
        let mut all: Vec<OrbitEntry> = Vec::new();
        for i in 0..n {
            let mut root_exp = vec![0i64; n];
            root_exp[i] = 1;
            let e = OrbitEntry {
                root: simple_roots[i].clone(),
                coroot: simple_coroots[i].clone(),
                root_exp: root_exp.clone(),
                coroot_exp: root_exp,
            };
            if seen.insert(e.root.clone()) {
                queue.push_back(e.clone());
                all.push(e);
            }
        }
        // Coordinates in a finite system stay tiny; runaway growth means
        // an indefinite Cartan matrix, caught here before i64 overflow.
        const COORD_CAP: i128 = 1 << 40;
        fn dot_i128(a: &[i64], b: &[i64]) -> i128 {
            a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum()
        }
        while let Some(entry) = queue.pop_front() {
            for i in 0..n {
                // s_i(β) = β − ⟨α∨_i, β⟩ α_i ; s_i(β∨) = β∨ − ⟨β∨, α_i⟩ α∨_i
                let c_root = dot_i128(&simple_coroots[i], &entry.root);
                let c_coroot = dot_i128(&entry.coroot, &simple_roots[i]);
                if c_root.abs() > COORD_CAP || c_coroot.abs() > COORD_CAP {
                    return Err(Error::NotFiniteType(ORBIT_CAP));
                }
                let mut next = entry.clone();
                for k in 0..rank {
                    let nr = next.root[k] as i128 - c_root * simple_roots[i][k] as i128;
                    let nc = next.coroot[k] as i128 - c_coroot * simple_coroots[i][k] as i128;
                    if nr.abs() > COORD_CAP || nc.abs() > COORD_CAP {
                        return Err(Error::NotFiniteType(ORBIT_CAP));
                    }
                    next.root[k] = nr as i64;
                    next.coroot[k] = nc as i64;
                }
                next.root_exp[i] -= c_root as i64;
                next.coroot_exp[i] -= c_coroot as i64;
                if next.root_exp[i].unsigned_abs() as i128 > COORD_CAP
                    || next.coroot_exp[i].unsigned_abs() as i128 > COORD_CAP
                {
                    return Err(Error::NotFiniteType(ORBIT_CAP));
                }
                if seen.insert(next.root.clone()) {
                    if all.len() >= ORBIT_CAP {
                        return Err(Error::NotFiniteType(ORBIT_CAP));
                    }
                    queue.push_back(next.clone());
                    all.push(next);
                }
            }
        }

        let mut positives: Vec<OrbitEntry> = Vec::new();
        for e in &all {
            let pos = e.root_exp.iter().all(|&c| c >= 0);
            let neg = e.root_exp.iter().all(|&c| c <= 0);
            if !(pos ^ neg) {
                return Err(Error::Internal(
                    "root orbit produced a mixed-sign expansion".into(),
                ));
            }
            if pos {
                positives.push(e.clone());
            }
        }
        positives.sort_by(|a, b| {
            let ha: i64 = a.root_exp.iter().sum();
            let hb: i64 = b.root_exp.iter().sum();
            (ha, &a.root).cmp(&(hb, &b.root))
        });

        let pos_roots: Vec<Vec<i64>> = positives.iter().map(|e| e.root.clone()).collect();
        let pos_coroots: Vec<Vec<i64>> = positives.iter().map(|e| e.coroot.clone()).collect();
        let pos_root_exps: Vec<Vec<i64>> = positives.iter().map(|e| e.root_exp.clone()).collect();
        let pos_coroot_exps: Vec<Vec<i64>> =
            positives.iter().map(|e| e.coroot_exp.clone()).collect();
        let root_heights: Vec<i64> = pos_root_exps.iter().map(|e| e.iter().sum()).collect();
        let mut two_rho = vec![0i64; rank];
        let mut two_rho_check = vec![0i64; rank];
        for e in &positives {
            for k in 0..rank {
                two_rho[k] += e.root[k];
                two_rho_check[k] += e.coroot[k];
            }
        }

        // Dynkin-diagram components and their highest roots.
        let mut comp_id = vec![usize::MAX; n];
        let mut components: Vec<Vec<usize>> = Vec::new();
        for start in 0..n {
            if comp_id[start] != usize::MAX {
                continue;
            }
            let id = components.len();
            let mut comp = vec![];
            let mut stack = vec![start];
            comp_id[start] = id;
            while let Some(i) = stack.pop() {
                comp.push(i);
                for j in 0..n {
                    if comp_id[j] == usize::MAX && cartan[i][j] != 0 {
                        comp_id[j] = id;
                        stack.push(j);
                    }
                }
            }
            comp.sort_unstable();
            components.push(comp);
        }
        let mut component_highest = Vec::new();
        for comp in &components {
            let in_comp = |exp: &[i64]| {
                exp.iter()
                    .enumerate()
                    .all(|(i, &c)| c == 0 || comp.contains(&i))
            };
            let best = (0..pos_roots.len())
                .filter(|&r| in_comp(&pos_root_exps[r]))
                .max_by_key(|&r| (root_heights[r], std::cmp::Reverse(r)))
                .ok_or_else(|| Error::Internal("component without roots".into()))?;
            // The highest root of an irreducible system is unique.
            let ties = (0..pos_roots.len())
                .filter(|&r| in_comp(&pos_root_exps[r]) && root_heights[r] == root_heights[best])
                .count();
            if ties != 1 {
                return Err(Error::Internal("highest root is not unique".into()));
            }
            component_highest.push(best);
        }

        let pairing_solver = if n == rank {
            // Solve ⟨μ, α_i⟩ = p_i: the "columns" are the coordinate
            // functionals, i.e. we solve Rᵀ-style with the root rows.
            let root_cols: Vec<Vec<i64>> = (0..rank)
                .map(|k| (0..n).map(|i| simple_roots[i][k]).collect())
                .collect();
            Some(ColumnSolver::build(&root_cols, n)?)
        } else {
            None
        };

        let fingerprint = {
            let blob = serde_json::to_vec(&(rank, &simple_roots, &simple_coroots))
                .expect("serializing integer vectors cannot fail");
            let digest = Sha256::digest(&blob);
            u128::from_le_bytes(digest[..16].try_into().unwrap())
        };

        Ok(RootDatum {
            rank,
            simple_roots,
            simple_coroots,
            cartan,
            pos_roots,
            pos_coroots,
            pos_root_exps,
            pos_coroot_exps,
            root_heights,
            two_rho,
            two_rho_check,
            components,
            component_highest,
            coroot_solver,
            pairing_solver,
            fingerprint,
            longest: OnceLock::new(),
        })
    }

    // -- plain accessors ----------------------------------------------------

    pub fn rank(&self) -> usize {
        self.rank
    }
    pub fn num_simple(&self) -> usize {
        self.simple_roots.len()
    }
    pub fn simple_roots(&self) -> &[Vec<i64>] {
        &self.simple_roots
    }
    pub fn simple_coroots(&self) -> &[Vec<i64>] {
        &self.simple_coroots
    }
    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }
    pub fn pos_roots(&self) -> &[Vec<i64>] {
        &self.pos_roots
    }
    pub fn pos_coroots(&self) -> &[Vec<i64>] {
        &self.pos_coroots
    }
    /// Expansion of each positive root in the simple roots (index-aligned
    /// with [`pos_roots`](Self::pos_roots)).
    pub fn pos_root_expansions(&self) -> &[Vec<i64>] {
        &self.pos_root_exps
    }
    /// Expansion of each positive coroot in the simple coroots
    /// (index-aligned with [`pos_coroots`](Self::pos_coroots)).
    pub fn pos_coroot_expansions(&self) -> &[Vec<i64>] {
        &self.pos_coroot_exps
    }
    pub fn root_heights(&self) -> &[i64] {
        &self.root_heights
    }
    /// The covector `2ρ` (sum of the positive roots).
    pub fn two_rho(&self) -> &[i64] {
        &self.two_rho
    }
    /// The coweight `2ρ∨` (sum of the positive coroots).
    pub fn two_rho_check(&self) -> &[i64] {
        &self.two_rho_check
    }
    /// Connected components of the Dynkin diagram, as sorted lists of
    /// simple indices.
    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }
    /// For each component, the index into `pos_roots` of its highest root.
    pub fn component_highest_roots(&self) -> &[usize] {
        &self.component_highest
    }
    /// True when the simple coroots span `Y` up to finite index.
    pub fn is_semisimple(&self) -> bool {
        self.num_simple() == self.rank
    }
    /// Stable identity of this datum (used to key caches).
    pub fn fingerprint(&self) -> u128 {
        self.fingerprint
    }

    /// Validate that a vector has the right length for this datum.
    pub fn check_rank(&self, v: &[i64]) -> Result<()> {
        if v.len() == self.rank {
            Ok(())
        } else {
            Err(Error::RankMismatch {
                expected: self.rank,
                got: v.len(),
            })
        }
    }

    // -- pairing and dominance ----------------------------------------------

    /// The canonical pairing `⟨λ, χ⟩` of a coweight with a covector.
    ///
    /// Panics on a length mismatch; use [`check_rank`](Self::check_rank)
    /// at input boundaries.
    pub fn pair(&self, coweight: &[i64], covector: &[i64]) -> i64 {
        assert_eq!(
            coweight.len(),
            covector.len(),
            "pairing a length-{} coweight with a length-{} covector",
            coweight.len(),
            covector.len()
        );
        dot(coweight, covector)
    }

    /// `⟨λ, α_i⟩ ≥ 0` for every simple root.
    pub fn is_dominant(&self, lambda: &[i64]) -> bool {
        self.simple_roots
            .iter()
            .all(|a| self.pair(lambda, a) >= 0)
    }

    /// The dominance order: `λ ⪯ μ` iff `μ − λ` is a nonnegative integer
    /// combination of simple coroots.
    pub fn dominance_leq(&self, lambda: &[i64], mu: &[i64]) -> bool {
        let diff: Vec<i64> = mu.iter().zip(lambda).map(|(a, b)| a - b).collect();
        match self.coroot_solver.solve_integral(&diff) {
            Some(c) => c.iter().all(|&x| x >= 0),
            None => false,
        }
    }

    /// Integral expansion of `v` in the simple coroots, if one exists.
    pub fn coroot_expansion(&self, v: &[i64]) -> Option<Vec<i64>> {
        self.coroot_solver.solve_integral(v)
    }

    /// Rational coroot height of `v`: the sum of the (rational)
    /// coefficients of `v` in the simple coroots, as a reduced fraction
    /// `(num, den)` with `den > 0`; `None` if `v` is outside the span.
    pub fn rational_coroot_height(&self, v: &[i64]) -> Option<(i128, i128)> {
        let (nums, den) = self.coroot_solver.solve_rational(v)?;
        let num: i128 = nums.iter().sum();
        let g = gcd(num.unsigned_abs(), den.unsigned_abs()).max(1) as i128;
        Some((num / g, den / g))
    }

    /// Solve `⟨μ, α_i⟩ = p_i` for `μ ∈ Y` (semisimple data only; the
    /// solution is unique over ℚ and returned only when integral).
    pub fn solve_pairings(&self, p: &[i64]) -> Result<Option<Vec<i64>>> {
        let solver = self
            .pairing_solver
            .as_ref()
            .ok_or(Error::NotSemisimple("solve_pairings"))?;
        Ok(solver.solve_integral(p))
    }

    // -- finite Weyl group ----------------------------------------------------

    /// The simple reflection `s_i` (0-based index).
    pub fn simple_reflection(&self, i: usize) -> FiniteWeylElement {
        assert!(i < self.num_simple(), "simple reflection index out of range");
        self.reflection(&self.simple_roots[i], &self.simple_coroots[i])
    }

    /// The reflection attached to any (root, coroot) pair.
    pub fn reflection(&self, root: &[i64], coroot: &[i64]) -> FiniteWeylElement {
        let n = self.rank;
        let mut mat = identity_mat(n);
        for r in 0..n {
            for c in 0..n {
                mat[r][c] -= coroot[r] * root[c];
            }
        }
        FiniteWeylElement {
            inv: mat.clone(),
            mat,
        }
    }

    pub fn weyl_identity(&self) -> FiniteWeylElement {
        FiniteWeylElement {
            mat: identity_mat(self.rank),
            inv: identity_mat(self.rank),
        }
    }

    /// Number of inversions of `w`: `#{α ∈ R_+ : w(α) ∈ −R_+}`. This is
    /// the Coxeter length of `w` in `W_f`.
    pub fn length_f(&self, w: &FiniteWeylElement) -> usize {
        self.pos_roots
            .iter()
            .filter(|a| self.root_is_negative(&w.act_covector(a)))
            .count()
    }

    /// Sign test for an element of `R`: positive roots pair strictly
    /// positively with `2ρ∨`, negative ones strictly negatively.
    pub fn root_is_negative(&self, root: &[i64]) -> bool {
        self.pair(&self.two_rho_check, root) < 0
    }

    /// The longest element `w∘` of `W_f` (cached).
    pub fn longest_element(&self) -> &FiniteWeylElement {
        self.longest.get_or_init(|| {
            let mut w = self.weyl_identity();
            loop {
                // ℓ(w s_i) > ℓ(w) iff w(α_i) > 0; keep raising until stuck.
                let raise = (0..self.num_simple())
                    .find(|&i| !self.root_is_negative(&w.act_covector(&self.simple_roots[i])));
                match raise {
                    Some(i) => w = w.compose(&self.simple_reflection(i)),
                    None => break,
                }
            }
            w
        })
    }

    /// Canonical reduced word of `w` (greedy smallest left descent),
    /// as 0-based simple indices.
    pub fn reduced_word(&self, w: &FiniteWeylElement) -> Vec<usize> {
        let mut word = Vec::new();
        let mut cur = w.clone();
        loop {
            // ℓ(s_i w) < ℓ(w) iff w⁻¹(α_i) ∈ −R_+.
            let descent = (0..self.num_simple()).find(|&i| {
                self.root_is_negative(&cur.inverse().act_covector(&self.simple_roots[i]))
            });
            match descent {
                Some(i) => {
                    word.push(i);
                    cur = self.simple_reflection(i).compose(&cur);
                }
                None => break,
            }
        }
        debug_assert!(cur.is_identity());
        word
    }

    /// All elements of the finite Weyl group, cached per datum, ordered
    /// by (length, matrix) for reproducibility.
    ///
    /// Errors if the group is too large to enumerate (E7, E8).
    pub fn finite_weyl_elements(&self) -> Result<Arc<Vec<FiniteWeylElement>>> {
        static TABLES: OnceLock<RwLock<HashMap<u128, Arc<Vec<FiniteWeylElement>>>>> =
            OnceLock::new();
        let tables = TABLES.get_or_init(|| RwLock::new(HashMap::new()));
        if let Some(t) = tables.read().unwrap().get(&self.fingerprint) {
            return Ok(Arc::clone(t));
        }
        let mut seen: HashSet<Vec<Vec<i64>>> = HashSet::new();
        let mut out: Vec<FiniteWeylElement> = Vec::new();
        let mut frontier = vec![self.weyl_identity()];
        seen.insert(frontier[0].mat.clone());
        while !frontier.is_empty() {
            frontier.sort_by(|a, b| a.mat.cmp(&b.mat));
            out.extend(frontier.iter().cloned());
            if out.len() > WEYL_ENUM_CAP {
                return Err(Error::TooLarge(format!(
                    "finite Weyl group exceeds {WEYL_ENUM_CAP} elements"
                )));
            }
            let mut next = Vec::new();
            for w in &frontier {
                for i in 0..self.num_simple() {
                    // Raising multiplications only: BFS shells are length shells.
                    if !self.root_is_negative(&w.act_covector(&self.simple_roots[i])) {
                        let nw = w.compose(&self.simple_reflection(i));
                        if seen.insert(nw.mat.clone()) {
                            next.push(nw);
                        }
                    }
                }
            }
            frontier = next;
        }
        let arc = Arc::new(out);
        tables
            .write()
            .unwrap()
            .insert(self.fingerprint, Arc::clone(&arc));
        Ok(arc)
    }

    /// Greedy dominant representative: returns `(v(λ), v)` with `v(λ)`
    /// dominant and `v` of minimal length among elements achieving it.
    pub fn make_dominant(&self, lambda: &[i64]) -> (Vec<i64>, FiniteWeylElement) {
        let mut cur = lambda.to_vec();
        let mut v = self.weyl_identity();
        loop {
            let bad = (0..self.num_simple()).find(|&i| self.pair(&cur, &self.simple_roots[i]) < 0);
            match bad {
                Some(i) => {
                    let s = self.simple_reflection(i);
                    cur = s.act(&cur);
                    v = s.compose(&v);
                }
                None => return (cur, v),
            }
        }
    }

    /// The integral coweight `w(ρ∨) − ρ∨`, computed as
    /// `½(w(2ρ∨) − 2ρ∨)`.
    ///
    /// Errors if parity fails, which would indicate a root-datum bug.
    pub fn rho_check_shift(&self, w: &FiniteWeylElement) -> Result<Vec<i64>> {
        let moved = w.act(&self.two_rho_check);
        moved
            .iter()
            .zip(&self.two_rho_check)
            .map(|(a, b)| {
                let d = a - b;
                if d % 2 == 0 {
                    Ok(d / 2)
                } else {
                    Err(Error::Internal(
                        "w(2ρ∨) − 2ρ∨ has an odd coordinate".into(),
                    ))
                }
            })
            .collect()
    }
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

// ---------------------------------------------------------------------------
// FiniteWeylElement
// ---------------------------------------------------------------------------

/// An element of the finite Weyl group, stored as its action on `Y`
/// together with the inverse matrix (so that the dual action on covectors
/// needs no solving). Identity of elements is identity of matrices.
#[derive(Clone, Debug)]
pub struct FiniteWeylElement {
    mat: Vec<Vec<i64>>,
    inv: Vec<Vec<i64>>,
}

impl PartialEq for FiniteWeylElement {
    fn eq(&self, other: &Self) -> bool {
        self.mat == other.mat
    }
}
impl Eq for FiniteWeylElement {}
impl PartialOrd for FiniteWeylElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for FiniteWeylElement {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.mat.cmp(&other.mat)
    }
}
impl std::hash::Hash for FiniteWeylElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.mat.hash(state);
    }
}

impl FiniteWeylElement {
    /// Action on a coweight: `λ ↦ w(λ)`.
    pub fn act(&self, coweight: &[i64]) -> Vec<i64> {
        mat_vec(&self.mat, coweight)
    }

    /// Dual action on a covector: `(w·β)(v) = β(w⁻¹ v)`. For `β ∈ R`
    /// this is the usual action on roots.
    pub fn act_covector(&self, covector: &[i64]) -> Vec<i64> {
        let n = covector.len();
        (0..n)
            .map(|c| (0..n).map(|k| covector[k] * self.inv[k][c]).sum())
            .collect()
    }

    /// Group law: `(self ∘ other)(λ) = self(other(λ))`.
    pub fn compose(&self, other: &Self) -> Self {
        FiniteWeylElement {
            mat: mat_mul(&self.mat, &other.mat),
            inv: mat_mul(&other.inv, &self.inv),
        }
    }

    pub fn inverse(&self) -> Self {
        FiniteWeylElement {
            mat: self.inv.clone(),
            inv: self.mat.clone(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.mat
            .iter()
            .enumerate()
            .all(|(r, row)| row.iter().enumerate().all(|(c, &x)| x == i64::from(r == c)))
    }

    /// The underlying matrix (rows act on coweight coordinates).
    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.mat
    }
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
