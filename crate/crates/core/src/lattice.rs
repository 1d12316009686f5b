//! Models, finite-volume Hamiltonians and keyed disorder.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::measures::ProbabilityMeasure;
use crate::rng::{block_stream, keyed_uniform};

/// Largest box (in sites) that will be assembled.
pub const DEFAULT_SITE_CAP: usize = 10_000_000;

/// Underlying graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Geometry {
    /// Z^d partitioned into cubes of side `k_block`.
    Cube { d: usize, k_block: usize },
    /// Z × {1..L} with L×L matrix potentials.
    Strip { width: usize },
    /// Rooted tree with coordination number `k`.
    Bethe { k: usize },
}

/// Finitely many symmetric matrices with sampling weights.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixFamily {
    size: usize,
    matrices: Vec<Vec<f64>>,
    weights: Vec<f64>,
    cumulative: Vec<f64>,
    norms: Vec<f64>,
}

impl MatrixFamily {
    /// `matrices` are row-major `size × size`; weights are renormalized.
    pub fn new(size: usize, matrices: Vec<Vec<f64>>, weights: Vec<f64>) -> Result<Self> {
        if size == 0 || matrices.is_empty() || matrices.len() != weights.len() {
            return Err(Error::InvalidModel("matrix family needs matching nonempty matrices and weights".into()));
        }
        for (n, m) in matrices.iter().enumerate() {
            if m.len() != size * size {
                return Err(Error::InvalidModel(format!("matrix {n} has {} entries, expected {}", m.len(), size * size)));
            }
            for i in 0..size {
                for j in 0..i {
                    if (m[i * size + j] - m[j * size + i]).abs() > 1e-12 {
                        return Err(Error::InvalidModel(format!("matrix {n} is not symmetric at ({i}, {j})")));
                    }
                }
            }
        }
        if weights.iter().any(|w| !(*w >= 0.0)) {
            return Err(Error::InvalidModel("matrix weights must be nonnegative".into()));
        }
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(Error::InvalidModel("matrix weights sum to zero".into()));
        }
        let weights: Vec<f64> = weights.iter().map(|w| w / total).collect();
        let mut acc = 0.0;
        let mut cumulative: Vec<f64> = weights.iter().map(|w| {
            acc += w;
            acc
        }).collect();
        *cumulative.last_mut().unwrap() = 1.0;
        let norms = matrices.iter().map(|m| symmetric_eigenvalues(size, m).iter().fold(0.0f64, |a, e| a.max(e.abs()))).collect();
        Ok(Self { size, matrices, weights, cumulative, norms })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn matrices(&self) -> &[Vec<f64>] {
        &self.matrices
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Largest spectral norm in the family.
    pub fn max_norm(&self) -> f64 {
        self.norms.iter().cloned().fold(0.0, f64::max)
    }

    /// Index of the matrix selected by a uniform draw `u`.
    pub fn quantile_index(&self, u: f64) -> usize {
        self.cumulative.partition_point(|&c| c <= u).min(self.matrices.len() - 1)
    }
}

/// Eigenvalues of a small dense symmetric matrix given row-major.
pub fn symmetric_eigenvalues(size: usize, m: &[f64]) -> Vec<f64> {
    let a = faer::Mat::<f64>::from_fn(size, size, |i, j| m[i * size + j]);
    let mut e = a.selfadjoint_eigenvalues(faer::Side::Lower);
    e.sort_by(f64::total_cmp);
    e
}

/// Law of a single disorder variable.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum SiteLaw {
    Scalar(ProbabilityMeasure),
    Matrix(MatrixFamily),
}

/// Operator family H = Δ + λ Σ_j ω_j P_j.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub geometry: Geometry,
    /// Profile Θ on the K^d sites of a block, row-major with coordinate 0 slowest.
    pub profile: Vec<f64>,
    pub lambda: f64,
    pub law: SiteLaw,
}

/// Boundary rule of a cube or strip box.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Boundary {
    Open,
    Periodic,
}

/// Finite region on which a box is assembled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Region {
    /// Sites within sup-distance `radius` of the origin (cube, strip) or the
    /// tree of depth `radius` (Bethe), open boundary.
    Centered { radius: usize },
    /// The torus [0, side)^d (cube) or ring of `side` cells (strip).
    Periodic { side: usize },
}

impl Region {
    pub fn boundary(&self) -> Boundary {
        match self {
            Region::Centered { .. } => Boundary::Open,
            Region::Periodic { .. } => Boundary::Periodic,
        }
    }
}

impl ModelSpec {
    /// Cube model with profile Θ ≡ 1.
    pub fn cube(d: usize, k_block: usize, lambda: f64, measure: ProbabilityMeasure) -> Result<Self> {
        let n = k_block.checked_pow(d as u32).unwrap_or(0);
        let m = Self { geometry: Geometry::Cube { d, k_block }, profile: vec![1.0; n], lambda, law: SiteLaw::Scalar(measure) };
        m.validate()?;
        Ok(m)
    }

    pub fn strip(family: MatrixFamily, lambda: f64) -> Result<Self> {
        let m = Self { geometry: Geometry::Strip { width: family.size() }, profile: vec![1.0], lambda, law: SiteLaw::Matrix(family) };
        m.validate()?;
        Ok(m)
    }

    pub fn bethe(k: usize, lambda: f64, measure: ProbabilityMeasure) -> Result<Self> {
        let m = Self { geometry: Geometry::Bethe { k }, profile: vec![1.0], lambda, law: SiteLaw::Scalar(measure) };
        m.validate()?;
        Ok(m)
    }

    pub fn with_profile(mut self, profile: Vec<f64>) -> Result<Self> {
        self.profile = profile;
        self.validate()?;
        Ok(self)
    }

    pub fn with_measure(&self, measure: ProbabilityMeasure) -> Self {
        Self { law: SiteLaw::Scalar(measure), ..self.clone() }
    }

    pub fn with_lambda(&self, lambda: f64) -> Self {
        Self { lambda, ..self.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda >= 0.0) || !self.lambda.is_finite() {
            return Err(Error::InvalidModel(format!("disorder scale {} must be nonnegative", self.lambda)));
        }
        if self.profile.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidModel("profile values must be finite".into()));
        }
        match (&self.geometry, &self.law) {
            (Geometry::Cube { d, k_block }, SiteLaw::Scalar(_)) => {
                if *d == 0 || *k_block == 0 {
                    return Err(Error::InvalidModel("cube needs d ≥ 1 and K ≥ 1".into()));
                }
                let n = k_block.checked_pow(*d as u32).ok_or_else(|| Error::InvalidModel("K^d overflows".into()))?;
                if self.profile.len() != n {
                    return Err(Error::InvalidModel(format!("profile has {} values, expected K^d = {n}", self.profile.len())));
                }
            }
            (Geometry::Strip { width }, SiteLaw::Matrix(f)) => {
                if *width == 0 || f.size() != *width {
                    return Err(Error::InvalidModel("strip width must match the matrix size".into()));
                }
            }
            (Geometry::Bethe { k }, SiteLaw::Scalar(_)) => {
                if *k < 3 {
                    return Err(Error::InvalidModel(format!("coordination number {k} must be at least 3")));
                }
            }
            _ => return Err(Error::InvalidModel("site law does not fit the geometry".into())),
        }
        Ok(())
    }

    /// Rank N of the projection P₀.
    pub fn n_proj(&self) -> usize {
        match self.geometry {
            Geometry::Cube { d, k_block } => k_block.pow(d as u32),
            Geometry::Strip { width } => width,
            Geometry::Bethe { .. } => 1,
        }
    }

    /// Support bound of the single-site law (largest matrix norm for strips).
    pub fn support_bound(&self) -> f64 {
        match &self.law {
            SiteLaw::Scalar(m) => m.support_bound(),
            SiteLaw::Matrix(f) => f.max_norm(),
        }
    }

    pub fn profile_sup(&self) -> f64 {
        self.profile.iter().fold(0.0f64, |a, t| a.max(t.abs()))
    }

    /// Radius r with σ(H) ⊂ [-r, r] for every disorder realization.
    pub fn spectral_bound(&self) -> f64 {
        let pot = self.lambda * self.support_bound();
        match self.geometry {
            Geometry::Cube { d, .. } => 2.0 * d as f64 + pot * self.profile_sup(),
            Geometry::Strip { .. } => 2.0 + pot,
            Geometry::Bethe { k } => 2.0 * ((k - 1) as f64).sqrt() + pot,
        }
    }

    /// Parses a flat `key = value` model description. A relative `measure`
    /// path is resolved against `base_dir`.
    pub fn from_kv(text: &str, base_dir: &Path) -> Result<Self> {
        let kv = parse_kv(text)?;
        let get = |k: &str| kv.get(k).map(String::as_str);
        let num = |k: &str| -> Result<Option<f64>> {
            get(k).map(|v| v.parse::<f64>().map_err(|e| Error::InvalidModel(format!("{k} = {v:?}: {e}")))).transpose()
        };
        let int = |k: &str, default: usize| -> Result<usize> {
            match get(k) {
                None => Ok(default),
                Some(v) => v.parse::<usize>().map_err(|e| Error::InvalidModel(format!("{k} = {v:?}: {e}"))),
            }
        };
        let list = |v: &str| -> Result<Vec<f64>> {
            v.split(',')
                .map(|s| s.trim().parse::<f64>().map_err(|e| Error::InvalidModel(format!("bad list entry {s:?}: {e}"))))
                .collect()
        };
        let allowed = ["geometry", "d", "K", "k", "L", "lambda", "profile", "measure", "matrices", "matrix_weights"];
        if let Some(bad) = kv.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(Error::InvalidModel(format!("unknown model key {bad:?}")));
        }
        let lambda = num("lambda")?.unwrap_or(1.0);
        let measure = || -> Result<ProbabilityMeasure> {
            let p = get("measure").ok_or_else(|| Error::InvalidModel("missing measure path".into()))?;
            let p = Path::new(p);
            let p = if p.is_absolute() { p.to_path_buf() } else { base_dir.join(p) };
            ProbabilityMeasure::read(&p)
        };
        let model = match get("geometry").unwrap_or("cube") {
            "cube" => {
                let m = Self::cube(int("d", 1)?, int("K", 1)?, lambda, measure()?)?;
                match get("profile") {
                    Some(p) => m.with_profile(list(p)?)?,
                    None => m,
                }
            }
            "bethe" => Self::bethe(int("k", 3)?, lambda, measure()?)?,
            "strip" => {
                let l = int("L", 1)?;
                let mats = get("matrices").ok_or_else(|| Error::InvalidModel("strip needs matrices".into()))?;
                let matrices = mats.split(';').map(list).collect::<Result<Vec<_>>>()?;
                let weights = match get("matrix_weights") {
                    Some(w) => list(w)?,
                    None => vec![1.0; matrices.len()],
                };
                Self::strip(MatrixFamily::new(l, matrices, weights)?, lambda)?
            }
            other => return Err(Error::InvalidModel(format!("unknown geometry {other:?}"))),
        };
        Ok(model)
    }
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_kv(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse { line: i + 1, message: format!("expected key = value, got {line:?}") })?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

/// Largest radius at which Tr(P₀ Hⁿ P₀) on the centered box equals its
/// infinite-volume value.
pub fn dependence_radius(model: &ModelSpec, n: usize) -> usize {
    match model.geometry {
        Geometry::Cube { k_block, .. } => (k_block - 1) + n / 2,
        Geometry::Strip { .. } | Geometry::Bethe { .. } => n / 2,
    }
}

/// Bound Γ(n) on the number of disorder variables entering Tr(P₀ Hⁿ P₀):
/// 2^d n^d on the cube, 3 k^{n/2} on the Bethe lattice, 2n on the strip.
pub fn gamma_count(model: &ModelSpec, n: usize) -> f64 {
    let nf = n as f64;
    match model.geometry {
        Geometry::Cube { d, .. } => (2.0 * nf).powi(d as i32),
        Geometry::Strip { .. } => 2.0 * nf,
        Geometry::Bethe { k } => 3.0 * (k as f64).powf(nf / 2.0),
    }
}

/// Sharper count of the blocks met by walks of length n: for K ≥ 2 the
/// ceiling formula (2⌈(K-1+⌊n/2⌋)/(K-1)⌉)^d, for K = 1 the exact (2⌊n/2⌋+1)^d.
/// On the Bethe lattice it is the size of the tree of depth ⌊n/2⌋.
pub fn gamma_count_refined(model: &ModelSpec, n: usize) -> f64 {
    let half = (n / 2) as f64;
    match model.geometry {
        Geometry::Cube { d, k_block } => {
            let per_axis = if k_block == 1 {
                2.0 * half + 1.0
            } else {
                let km1 = (k_block - 1) as f64;
                2.0 * ((km1 + half) / km1).ceil()
            };
            per_axis.powi(d as i32)
        }
        Geometry::Strip { .. } => 2.0 * half + 1.0,
        Geometry::Bethe { k } => tree_size(k, n / 2) as f64,
    }
}

fn tree_size(k: usize, depth: usize) -> usize {
    let mut total = 1usize;
    let mut level = 1usize;
    for t in 1..=depth {
        level = if t == 1 { k } else { level.saturating_mul(k - 1) };
        total = total.saturating_add(level);
    }
    total
}

/// Value of one disorder variable.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum SiteValue {
    Scalar(f64),
    /// Index into the model's matrix family.
    Matrix(usize),
}

/// Disorder realization keyed by block coordinate (cube), cell index (strip)
/// or vertex index (Bethe).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Disorder {
    values: HashMap<Vec<i64>, SiteValue>,
}

impl Disorder {
    pub fn get(&self, key: &[i64]) -> Option<SiteValue> {
        self.values.get(key).copied()
    }

    pub fn insert(&mut self, key: Vec<i64>, value: SiteValue) {
        self.values.insert(key, value);
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Keys in sorted order.
    pub fn keys(&self) -> Vec<Vec<i64>> {
        let mut k: Vec<Vec<i64>> = self.values.keys().cloned().collect();
        k.sort();
        k
    }
}

/// Draws the disorder variable of one block from its key.
pub fn draw_value(model: &ModelSpec, seed: u64, sample: u64, key: &[i64]) -> SiteValue {
    let u = keyed_uniform(seed, sample, block_stream(key));
    match &model.law {
        SiteLaw::Scalar(m) => SiteValue::Scalar(m.quantile(u)),
        SiteLaw::Matrix(f) => SiteValue::Matrix(f.quantile_index(u)),
    }
}

/// One value per disorder block meeting `region`; each value depends only on
/// (seed, sample, block key).
pub fn sample_disorder(model: &ModelSpec, seed: u64, sample: u64, region: Region) -> Result<Disorder> {
    let keys = block_keys(model, region)?;
    let mut d = Disorder::default();
    for key in keys {
        let v = draw_value(model, seed, sample, &key);
        d.insert(key, v);
    }
    Ok(d)
}

fn block_keys(model: &ModelSpec, region: Region) -> Result<Vec<Vec<i64>>> {
    let layout = Layout::new(model, region, DEFAULT_SITE_CAP)?;
    let mut keys: Vec<Vec<i64>> = (0..layout.cells()).map(|c| layout.block_key(c)).collect();
    keys.sort();
    keys.dedup();
    Ok(keys)
}

/// Site enumeration of a region, before potentials are attached.
struct Layout {
    geometry: Geometry,
    /// Per-cell coordinates (cube: d entries; strip: 1; Bethe: vertex index).
    coords: Vec<Vec<i64>>,
    /// Neighbor cells in canonical order.
    neighbors: Vec<Vec<usize>>,
    /// Distance of each cell to the cells carrying P₀.
    level: Vec<u32>,
}

impl Layout {
    fn new(model: &ModelSpec, region: Region, cap: usize) -> Result<Self> {
        match (&model.geometry, region) {
            (Geometry::Cube { d, k_block }, _) => Self::cube(*d, *k_block, region, cap),
            (Geometry::Strip { width }, _) => {
                let l = Self::cube(1, 1, region, cap / (*width).max(1))?;
                Ok(Self { geometry: model.geometry.clone(), ..l })
            }
            (Geometry::Bethe { k }, Region::Centered { radius }) => Self::bethe(*k, radius, cap),
            (Geometry::Bethe { .. }, Region::Periodic { .. }) => invalid("the Bethe lattice has no periodic boxes"),
        }
    }

    fn cells(&self) -> usize {
        self.coords.len()
    }

    fn cube(d: usize, k_block: usize, region: Region, cap: usize) -> Result<Self> {
        let (lo, side) = match region {
            Region::Centered { radius } => {
                if radius == 0 {
                    return invalid("box radius must be at least 1");
                }
                (-(radius as i64), 2 * radius + 1)
            }
            Region::Periodic { side } => {
                if side < 3 || side % k_block != 0 {
                    return invalid(format!("periodic side {side} must be ≥ 3 and a multiple of K = {k_block}"));
                }
                (0, side)
            }
        };
        let count = (side as f64).powi(d as i32);
        if count > cap as f64 {
            return Err(Error::ResourceLimit(format!("box with {count} sites exceeds the cap of {cap}")));
        }
        let count = count as usize;
        let periodic = matches!(region, Region::Periodic { .. });
        let mut coords = Vec::with_capacity(count);
        for idx in 0..count {
            let mut c = vec![0i64; d];
            let mut rest = idx;
            for axis in (0..d).rev() {
                c[axis] = lo + (rest % side) as i64;
                rest /= side;
            }
            coords.push(c);
        }
        let index_of = |c: &[i64]| -> usize { c.iter().fold(0usize, |acc, &x| acc * side + (x - lo) as usize) };
        let kb = k_block as i64;
        let mut neighbors = Vec::with_capacity(count);
        let mut level = Vec::with_capacity(count);
        for c in &coords {
            let mut nb = Vec::with_capacity(2 * d);
            for axis in 0..d {
                for step in [-1i64, 1] {
                    let mut n = c.clone();
                    n[axis] += step;
                    if periodic {
                        n[axis] = n[axis].rem_euclid(side as i64);
                    } else if n[axis] < lo || n[axis] >= lo + side as i64 {
                        continue;
                    }
                    nb.push(index_of(&n));
                }
            }
            neighbors.push(nb);
            // distance to Λ₀ = [0, K-1]^d, measured on the torus when periodic
            let dist: i64 = c
                .iter()
                .map(|&x| {
                    let direct = if x < 0 { -x } else if x > kb - 1 { x - (kb - 1) } else { 0 };
                    if periodic {
                        let wrapped = if x > kb - 1 { (side as i64 - x).max(0) } else { direct };
                        direct.min(wrapped)
                    } else {
                        direct
                    }
                })
                .sum();
            level.push(dist as u32);
        }
        Ok(Self { geometry: Geometry::Cube { d, k_block }, coords, neighbors, level })
    }

    fn bethe(k: usize, depth: usize, cap: usize) -> Result<Self> {
        let total = tree_size(k, depth);
        if total > cap {
            return Err(Error::ResourceLimit(format!("tree with {total} vertices exceeds the cap of {cap}")));
        }
        let mut coords = Vec::with_capacity(total);
        let mut neighbors: Vec<Vec<usize>> = Vec::with_capacity(total);
        let mut level = Vec::with_capacity(total);
        coords.push(vec![0i64]);
        neighbors.push(Vec::new());
        level.push(0u32);
        // vertices of the previous generation: (local index, position within generation)
        let mut frontier: Vec<(usize, u64)> = vec![(0, 0)];
        let mut gen_offset: u64 = 0;
        let mut gen_size: u64 = 1;
        for t in 1..=depth {
            let children = if t == 1 { k } else { k - 1 } as u64;
            let next_offset = gen_offset + gen_size;
            let mut next = Vec::with_capacity(frontier.len() * children as usize);
            for &(parent, pos) in &frontier {
                for c in 0..children {
                    let child_pos = pos * children + c;
                    let key = next_offset
                        .checked_add(child_pos)
                        .filter(|v| *v <= i64::MAX as u64)
                        .ok_or_else(|| Error::ResourceLimit("tree too deep for vertex keys".into()))?;
                    let idx = coords.len();
                    coords.push(vec![key as i64]);
                    neighbors.push(vec![parent]);
                    neighbors[parent].push(idx);
                    level.push(t as u32);
                    next.push((idx, child_pos));
                }
            }
            gen_offset = next_offset;
            gen_size = if t == 1 { k as u64 } else { gen_size * (k as u64 - 1) };
            frontier = next;
        }
        Ok(Self { geometry: Geometry::Bethe { k }, coords, neighbors, level })
    }

    fn block_key(&self, cell: usize) -> Vec<i64> {
        match self.geometry {
            Geometry::Cube { k_block, .. } => self.coords[cell].iter().map(|x| x.div_euclid(k_block as i64)).collect(),
            _ => self.coords[cell].clone(),
        }
    }

    fn profile_index(&self, cell: usize) -> usize {
        match self.geometry {
            Geometry::Cube { k_block, .. } => {
                let kb = k_block as i64;
                self.coords[cell].iter().fold(0usize, |acc, x| acc * k_block + x.rem_euclid(kb) as usize)
            }
            _ => 0,
        }
    }
}

/// Finite-volume Hamiltonian in compressed sparse row form.
///
/// Each row lists the diagonal followed by the off-diagonal entries in a fixed
/// canonical order, so every matrix-vector product is reproducible bit for bit.
#[derive(Clone, Debug)]
pub struct HamiltonianBox {
    region: Region,
    dim: usize,
    coords: Vec<Vec<i64>>,
    diag: Vec<f64>,
    row_start: Vec<usize>,
    cols: Vec<u32>,
    vals: Vec<f64>,
    projection: Vec<usize>,
    /// Sites sorted by level, with `level_end[c]` sites of level ≤ c.
    order: Vec<usize>,
    level_end: Vec<usize>,
}

/// Assembles H on `region` from a disorder map covering every block of the region.
pub fn assemble_box(model: &ModelSpec, region: Region, disorder: &Disorder) -> Result<HamiltonianBox> {
    model.validate()?;
    let layout = Layout::new(model, region, DEFAULT_SITE_CAP)?;
    let width = match model.geometry {
        Geometry::Strip { width } => width,
        _ => 1,
    };
    let cells = layout.cells();
    let dim = cells * width;
    let mut diag = vec![0.0; dim];
    let mut row_start = Vec::with_capacity(dim + 1);
    let mut cols = Vec::new();
    let mut vals = Vec::new();
    let mut coords = Vec::with_capacity(dim);
    let mut level = Vec::with_capacity(dim);
    for cell in 0..cells {
        let key = layout.block_key(cell);
        let value = disorder
            .get(&key)
            .ok_or_else(|| Error::InvalidArgument(format!("disorder map has no value for block {key:?}")))?;
        for a in 0..width {
            let row = cell * width + a;
            row_start.push(cols.len());
            match (value, &model.law) {
                (SiteValue::Scalar(w), SiteLaw::Scalar(_)) => {
                    diag[row] = model.lambda * w * model.profile[layout.profile_index(cell)];
                }
                (SiteValue::Matrix(i), SiteLaw::Matrix(f)) => {
                    let m = f.matrices().get(i).ok_or_else(|| Error::InvalidArgument(format!("matrix index {i} out of range")))?;
                    diag[row] = model.lambda * m[a * width + a];
                    for &nb in &layout.neighbors[cell] {
                        cols.push((nb * width + a) as u32);
                        vals.push(1.0);
                    }
                    for b in 0..width {
                        if b != a && m[a * width + b] != 0.0 {
                            cols.push((cell * width + b) as u32);
                            vals.push(model.lambda * m[a * width + b]);
                        }
                    }
                    let mut c = layout.coords[cell].clone();
                    c.push(a as i64);
                    coords.push(c);
                    level.push(layout.level[cell]);
                    continue;
                }
                _ => return Err(Error::InvalidArgument("disorder value does not match the site law".into())),
            }
            for &nb in &layout.neighbors[cell] {
                cols.push(nb as u32);
                vals.push(1.0);
            }
            coords.push(layout.coords[cell].clone());
            level.push(layout.level[cell]);
        }
    }
    row_start.push(cols.len());
    let projection: Vec<usize> = (0..dim).filter(|&i| level[i] == 0).collect();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by_key(|&i| (level[i], i));
    let max_level = level.iter().copied().max().unwrap_or(0) as usize;
    let mut level_end = vec![0usize; max_level + 1];
    for &l in &level {
        level_end[l as usize] += 1;
    }
    for c in 1..=max_level {
        level_end[c] += level_end[c - 1];
    }
    Ok(HamiltonianBox { region, dim, coords, diag, row_start, cols, vals, projection, order, level_end })
}

impl ModelSpec {
    /// Samples disorder and assembles the box in one step.
    pub fn sample_box(&self, region: Region, seed: u64, sample: u64) -> Result<HamiltonianBox> {
        let disorder = sample_disorder(self, seed, sample, region)?;
        assemble_box(self, region, &disorder)
    }
}

impl HamiltonianBox {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn region(&self) -> Region {
        self.region
    }

    pub fn boundary(&self) -> Boundary {
        self.region.boundary()
    }

    /// Coordinates of each basis vector (strip boxes append the component index).
    pub fn coords(&self) -> &[Vec<i64>] {
        &self.coords
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diag
    }

    /// Basis indices spanning the range of P₀.
    pub fn projection_sites(&self) -> &[usize] {
        &self.projection
    }

    /// Off-diagonal entries of row `i` as (column, value) pairs in canonical order.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let (s, e) = (self.row_start[i], self.row_start[i + 1]);
        self.cols[s..e].iter().zip(&self.vals[s..e]).map(|(&c, &v)| (c as usize, v))
    }

    /// Matrix entry H[i][j].
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        let off: f64 = self.row(i).filter(|(c, _)| *c == j).map(|(_, v)| v).sum();
        if i == j {
            self.diag[i] + off
        } else {
            off
        }
    }

    /// Largest Gershgorin radius max_i (|H_ii| + Σ_j |H_ij|).
    pub fn gershgorin_bound(&self) -> f64 {
        (0..self.dim).map(|i| self.diag[i].abs() + self.row(i).map(|(_, v)| v.abs()).sum::<f64>()).fold(0.0, f64::max)
    }

    #[inline]
    pub(crate) fn row_times(&self, i: usize, v: &[f64]) -> f64 {
        let mut acc = self.diag[i] * v[i];
        for k in self.row_start[i]..self.row_start[i + 1] {
            acc += self.vals[k] * v[self.cols[k] as usize];
        }
        acc
    }

    /// Sites at level ≤ `level`, i.e. within graph distance `level` of P₀.
    pub(crate) fn cone(&self, level: usize) -> &[usize] {
        &self.order[..self.level_end[level.min(self.level_end.len() - 1)]]
    }

    /// Adds `by` to the diagonal entry of basis vector `i`.
    pub fn shift_diagonal(&mut self, i: usize, by: f64) {
        self.diag[i] += by;
    }

    /// y = H v.
    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.dim {
            return invalid(format!("vector has length {}, box has dimension {}", v.len(), self.dim));
        }
        Ok((0..self.dim).map(|i| self.row_times(i, v)).collect())
    }

    /// Σ_{s ∈ P₀} ⟨e_s, H^j e_s⟩ for j = 0..=n.
    ///
    /// Only rows inside the light cone of P₀ that can still influence the final
    /// diagonal entries are updated; this is exact on any box containing the
    /// dependence radius of `n`.
    pub fn trace_powers(&self, n: usize) -> Vec<f64> {
        let mut moments = vec![0.0; n + 1];
        let mut cur = vec![0.0; self.dim];
        let mut next = vec![0.0; self.dim];
        for &s in &self.projection {
            cur.iter_mut().for_each(|x| *x = 0.0);
            next.iter_mut().for_each(|x| *x = 0.0);
            cur[s] = 1.0;
            moments[0] += 1.0;
            for j in 0..n {
                let cone = (j + 1).min(n - j - 1);
                let end = self.level_end[cone.min(self.level_end.len() - 1)];
                for &i in &self.order[..end] {
                    next[i] = self.row_times(i, &cur);
                }
                std::mem::swap(&mut cur, &mut next);
                moments[j + 1] += cur[s];
            }
        }
        moments.iter().map(|m| m + 0.0).collect()
    }

    /// Dense copy of the matrix.
    pub fn to_dense(&self) -> faer::Mat<f64> {
        let mut m = faer::Mat::<f64>::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            m[(i, i)] += self.diag[i];
            for (j, v) in self.row(i) {
                m[(i, j)] += v;
            }
        }
        m
    }

    /// All eigenvalues in increasing order.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let mut e = self.to_dense().selfadjoint_eigenvalues(faer::Side::Lower);
        if e.iter().any(|x| !x.is_finite()) {
            return Err(Error::Numerical("eigenvalue computation produced non-finite values".into()));
        }
        e.sort_by(f64::total_cmp);
        Ok(e)
    }

    /// Eigenvalues and the squared weights |⟨e_s, u_k⟩|² summed over P₀,
    /// i.e. the spectral measure of P₀.
    pub fn projected_spectrum(&self) -> Result<(Vec<f64>, Vec<f64>)> {
        let eig = self.to_dense().selfadjoint_eigendecomposition(faer::Side::Lower);
        let s = eig.s().column_vector();
        let u = eig.u();
        let mut vals = Vec::with_capacity(self.dim);
        let mut weights = Vec::with_capacity(self.dim);
        for k in 0..self.dim {
            let e = s.read(k);
            if !e.is_finite() {
                return Err(Error::Numerical("eigendecomposition produced non-finite values".into()));
            }
            vals.push(e);
            weights.push(self.projection.iter().map(|&p| u.read(p, k).powi(2)).sum());
        }
        Ok((vals, weights))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bernoulli() -> ProbabilityMeasure {
        ProbabilityMeasure::bernoulli(1.0, 0.5).unwrap()
    }

    #[test]
    fn free_chain_box() {
        let m = ModelSpec::cube(1, 1, 0.0, bernoulli()).unwrap();
        let b = m.sample_box(Region::Centered { radius: 2 }, 1, 0).unwrap();
        assert_eq!(b.dim(), 5);
        for i in 0..5 {
            assert_eq!(b.diagonal()[i], 0.0);
            for j in 0..5 {
                let want = if (i as i64 - j as i64).abs() == 1 { 1.0 } else { 0.0 };
                assert_eq!(b.entry(i, j), want);
            }
        }
    }

    #[test]
    fn profile_zero_every_second_site() {
        let m = ModelSpec::cube(1, 2, 1.0, bernoulli()).unwrap().with_profile(vec![1.0, 0.0]).unwrap();
        let b = m.sample_box(Region::Centered { radius: 4 }, 3, 0).unwrap();
        for (c, &v) in b.coords().iter().zip(b.diagonal()) {
            if c[0].rem_euclid(2) == 1 {
                assert_eq!(v, 0.0);
            } else {
                assert_eq!(v.abs(), 1.0);
            }
        }
    }

    #[test]
    fn dependence_radius_examples() {
        let c1 = ModelSpec::cube(1, 1, 1.0, bernoulli()).unwrap();
        assert_eq!(dependence_radius(&c1, 4), 2);
        let c3 = ModelSpec::cube(1, 3, 1.0, bernoulli()).unwrap();
        assert_eq!(dependence_radius(&c3, 0), 2);
        let b = ModelSpec::bethe(3, 1.0, bernoulli()).unwrap();
        assert_eq!(dependence_radius(&b, 6), 3);
    }

    #[test]
    fn gamma_examples() {
        let c2 = ModelSpec::cube(2, 1, 1.0, bernoulli()).unwrap();
        assert_eq!(gamma_count(&c2, 4), 64.0);
        let c1 = ModelSpec::cube(1, 1, 1.0, bernoulli()).unwrap();
        assert_eq!(gamma_count(&c1, 1), 2.0);
        let b = ModelSpec::bethe(3, 1.0, bernoulli()).unwrap();
        assert_eq!(gamma_count(&b, 4), 27.0);
        assert_eq!(gamma_count_refined(&b, 4), 10.0);
        assert_eq!(gamma_count_refined(&c2, 4), 25.0);
        let c22 = ModelSpec::cube(2, 3, 1.0, bernoulli()).unwrap();
        assert_eq!(gamma_count_refined(&c22, 4), 16.0);
    }

    #[test]
    fn delta_measure_gives_zero_potential() {
        let m = ModelSpec::cube(2, 1, 1.0, ProbabilityMeasure::delta(0.0)).unwrap();
        let d = sample_disorder(&m, 9, 0, Region::Centered { radius: 3 }).unwrap();
        assert_eq!(d.len(), 49);
        for k in d.keys() {
            assert_eq!(d.get(&k), Some(SiteValue::Scalar(0.0)));
        }
    }

    #[test]
    fn bethe_tree_shape() {
        let m = ModelSpec::bethe(3, 0.0, bernoulli()).unwrap();
        let b = m.sample_box(Region::Centered { radius: 3 }, 0, 0).unwrap();
        assert_eq!(b.dim(), 1 + 3 + 6 + 12);
        assert_eq!(b.row(0).count(), 3);
        assert_eq!(b.row(1).count(), 3);
        assert_eq!(b.row(b.dim() - 1).count(), 1);
        let e = b.eigenvalues().unwrap();
        let r = m.spectral_bound();
        assert!(e[0] >= -r && *e.last().unwrap() <= r);
        // the same vertex keeps its key when the tree grows
        let big = m.sample_box(Region::Centered { radius: 5 }, 0, 0).unwrap();
        assert_eq!(&big.coords()[..b.dim()], b.coords());
    }

    #[test]
    fn trace_powers_match_full_products() {
        let m = ModelSpec::cube(2, 2, 0.7, bernoulli()).unwrap();
        let n = 9;
        let b = m.sample_box(Region::Centered { radius: dependence_radius(&m, n) }, 5, 2).unwrap();
        let fast = b.trace_powers(n);
        let mut slow = vec![0.0; n + 1];
        for &s in b.projection_sites() {
            let mut v = vec![0.0; b.dim()];
            v[s] = 1.0;
            for j in 0..=n {
                slow[j] += v[s];
                v = b.apply(&v).unwrap();
            }
        }
        for j in 0..=n {
            assert!((fast[j] - slow[j]).abs() < 1e-9 * slow[j].abs().max(1.0), "{j}: {} {}", fast[j], slow[j]);
        }
    }

    #[test]
    fn strip_box_structure() {
        let a = vec![0.5, 0.2, 0.2, -0.5];
        let fam = MatrixFamily::new(2, vec![a.clone()], vec![1.0]).unwrap();
        let m = ModelSpec::strip(fam, 1.0).unwrap();
        let b = m.sample_box(Region::Centered { radius: 2 }, 0, 0).unwrap();
        assert_eq!(b.dim(), 10);
        assert_eq!(b.projection_sites().len(), 2);
        let p = b.projection_sites()[0];
        assert_eq!(b.diagonal()[p], 0.5);
        assert_eq!(b.entry(p, p + 1), 0.2);
        assert!(MatrixFamily::new(2, vec![vec![0.0, 1.0, 0.5, 0.0]], vec![1.0]).is_err());
    }

    #[test]
    fn kv_model_parsing() {
        let dir = std::env::temp_dir();
        let m = ModelSpec::from_kv("geometry = strip\nL = 2\nlambda = 0.5\nmatrices = 1,0,0,1; 0,1,1,0\n", &dir).unwrap();
        assert_eq!(m.n_proj(), 2);
        assert!(ModelSpec::from_kv("geometry = cube\nbogus = 1\n", &dir).is_err());
    }

    #[test]
    fn periodic_requires_multiple_of_block() {
        let m = ModelSpec::cube(1, 2, 1.0, bernoulli()).unwrap();
        assert!(m.sample_box(Region::Periodic { side: 5 }, 0, 0).is_err());
        assert!(m.sample_box(Region::Periodic { side: 6 }, 0, 0).is_ok());
    }
}
