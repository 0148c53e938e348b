//! Energies, equilibrium measures and Robin constants of finite disc unions,
//! transfinite diameters, Chebyshev constants and the mu-energy.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::berk_points::{contains, truncate, BerkPoint};
use crate::error::{Error, Result};
use crate::exact_numbers::{int, KernelValue, PrimeConfig, Rat, ValExp};
use crate::kernels::{hsia_log, spherical_log};
use crate::linalg::solve;
use crate::metrized_graph::DiscreteMeasure;

/// Above this many boundary points the equilibrium solver switches from the
/// dense active-set system to the cluster-tree recursion.
pub const DENSE_LIMIT: usize = 48;

/// A finite union of closed discs, normalized so no disc contains another.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscUnion {
    discs: Vec<(Rat, ValExp)>,
}

#[derive(Deserialize)]
struct DiscRepr {
    #[serde(with = "crate::exact_numbers::rat_str")]
    center: Rat,
    rexp: ValExp,
}

impl Serialize for DiscUnion {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

/// JSON form: a list of {"center": "a/b", "rexp": {...}}.
impl DiscUnion {
    pub fn from_json(v: &serde_json::Value, cfg: &PrimeConfig) -> Result<Self> {
        let list: Vec<DiscRepr> =
            serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        DiscUnion::new(list.into_iter().map(|d| (d.center, d.rexp)).collect(), cfg)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.discs
                .iter()
                .map(|(c, t)| serde_json::json!({"center": c.to_string(), "rexp": t}))
                .collect(),
        )
    }
}

impl DiscUnion {
    pub fn new(mut discs: Vec<(Rat, ValExp)>, cfg: &PrimeConfig) -> Result<Self> {
        if discs.is_empty() {
            return Err(Error::Invalid("empty disc union".into()));
        }
        // larger discs first; a disc is dropped if a kept one contains it
        discs.sort_by(|a, b| a.1.cmp(&b.1));
        let mut kept: Vec<(Rat, ValExp)> = Vec::new();
        let mut keys: HashMap<(ValExp, Rat), ()> = HashMap::new();
        let mut exps: Vec<ValExp> = Vec::new();
        for (c, t) in discs {
            let covered = exps
                .iter()
                .filter(|s| **s <= t)
                .any(|s| keys.contains_key(&(s.clone(), fast_truncate(&c, s.ceil(), cfg))));
            if covered {
                continue;
            }
            if !exps.contains(&t) {
                exps.push(t.clone());
            }
            keys.insert((t.clone(), fast_truncate(&c, t.ceil(), cfg)), ());
            kept.push((c, t));
        }
        Ok(DiscUnion { discs: kept })
    }

    /// The p^n discs B(i, p^-n), i = 0..p^n - 1, approximating Z_p.
    pub fn zp_level(n: u32, cfg: &PrimeConfig) -> Self {
        let count = cfg.p().pow(n);
        DiscUnion {
            discs: (0..count)
                .map(|i| (Rat::from_integer(BigInt::from(i)), ValExp::int(n as i64)))
                .collect(),
        }
    }

    pub fn discs(&self) -> &[(Rat, ValExp)] {
        &self.discs
    }

    pub fn boundary_points(&self) -> Vec<BerkPoint> {
        self.discs
            .iter()
            .map(|(c, t)| BerkPoint::disc(c.clone(), t.clone()))
            .collect()
    }

    /// Whether x lies in one of the closed discs.
    pub fn contains_point(&self, x: &BerkPoint, cfg: &PrimeConfig) -> bool {
        self.boundary_points()
            .iter()
            .any(|d| contains(d, x, cfg).unwrap_or(false))
    }

    /// Sub-discs of each disc down to `levels` steps deeper, including the
    /// discs themselves.
    pub fn refined_candidates(&self, levels: u32, cfg: &PrimeConfig) -> Vec<BerkPoint> {
        let mut out = Vec::new();
        for (c, s) in &self.discs {
            let k0 = s.ceil();
            for l in 0..=levels as i64 {
                let t = s + &ValExp::int(l);
                let count = cfg.p().pow((t.ceil() - k0) as u32);
                let step = cfg.pow(k0);
                for j in 0..count {
                    out.push(BerkPoint::disc(c + &step * int(j as i64), t.clone()));
                }
            }
        }
        out
    }
}

/// `truncate` with a shortcut for integer centers.
fn fast_truncate(a: &Rat, k: i64, cfg: &PrimeConfig) -> Rat {
    if a.is_integer() && k >= 0 {
        let m = num_traits::pow(cfg.p_big().clone(), k as usize);
        return Rat::from_integer(a.numer().mod_floor(&m));
    }
    truncate(a, k, cfg)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquilibriumResult {
    pub measure: DiscreteMeasure,
    pub robin: ValExp,
    pub capacity_log: ValExp,
}

impl EquilibriumResult {
    fn new(measure: DiscreteMeasure, robin: ValExp) -> Self {
        let capacity_log = -&robin;
        EquilibriumResult {
            measure,
            robin,
            capacity_log,
        }
    }
}

fn kernel_sum<'a, I: Iterator<Item = (&'a BerkPoint, &'a ValExp)>>(
    z: &BerkPoint,
    atoms: I,
    zeta: &BerkPoint,
    cfg: &PrimeConfig,
) -> KernelValue {
    let mut acc = KernelValue::Finite(ValExp::zero());
    for (x, m) in atoms {
        if m.is_zero() {
            continue;
        }
        let k = hsia_log(z, x, zeta, cfg);
        let term = match k {
            KernelValue::Finite(v) => KernelValue::Finite(v * m),
            inf if m.is_positive() => inf,
            inf => inf.neg(),
        };
        acc = acc.add(&term).expect("mixed infinities in a potential");
    }
    acc
}

/// u_mu(z, zeta) = sum m_i (-log delta(z, x_i)_zeta).
pub fn potential(
    mu: &DiscreteMeasure,
    z: &BerkPoint,
    zeta: &BerkPoint,
    cfg: &PrimeConfig,
) -> KernelValue {
    kernel_sum(z, mu.atoms.iter().map(|a| (&a.point, &a.mass)), zeta, cfg)
}

/// I_zeta(nu) for a probability measure nu.
pub fn energy(nu: &DiscreteMeasure, zeta: &BerkPoint, cfg: &PrimeConfig) -> Result<KernelValue> {
    if !nu.is_probability() {
        return Err(Error::Invalid("energy needs a probability measure".into()));
    }
    if nu.atoms.iter().any(|a| a.point.same(zeta, cfg)) {
        return Err(Error::ZetaInSupport);
    }
    if nu
        .atoms
        .iter()
        .any(|a| a.point.is_type_i() && a.mass.is_positive())
    {
        return Ok(KernelValue::PlusInf);
    }
    let mut total = ValExp::zero();
    for a in &nu.atoms {
        let u = potential(nu, &a.point, zeta, cfg).expect_finite("energy term");
        total += &(u * &a.mass);
    }
    Ok(KernelValue::Finite(total))
}

fn check_zeta_outside(e: &DiscUnion, zeta: &BerkPoint, cfg: &PrimeConfig) -> Result<()> {
    if e.contains_point(zeta, cfg) {
        return Err(Error::Invalid("zeta lies in E".into()));
    }
    Ok(())
}

/// Equilibrium measure and Robin constant of E with respect to zeta.
pub fn equilibrium(
    e: &DiscUnion,
    zeta: &BerkPoint,
    cfg: &PrimeConfig,
) -> Result<EquilibriumResult> {
    check_zeta_outside(e, zeta, cfg)?;
    let pts = e.boundary_points();
    if pts.len() <= DENSE_LIMIT {
        equilibrium_dense(&pts, zeta, cfg)
    } else {
        equilibrium_tree(&pts, zeta, cfg)
    }
}

/// Active-set solve of K w = V 1, 1^T w = 1, dropping the most negative
/// weight until all weights are nonnegative.
pub fn equilibrium_dense(
    points: &[BerkPoint],
    zeta: &BerkPoint,
    cfg: &PrimeConfig,
) -> Result<EquilibriumResult> {
    let n = points.len();
    let mut k = vec![vec![ValExp::zero(); n]; n];
    for i in 0..n {
        for j in i..n {
            let v = hsia_log(&points[i], &points[j], zeta, cfg).expect_finite("energy kernel");
            k[i][j] = v.clone();
            k[j][i] = v;
        }
    }
    let mut active: Vec<usize> = (0..n).collect();
    loop {
        let m = active.len();
        let mut a = vec![vec![ValExp::zero(); m + 1]; m + 1];
        for (r, &i) in active.iter().enumerate() {
            for (c, &j) in active.iter().enumerate() {
                a[r][c] = k[i][j].clone();
            }
            a[r][m] = ValExp::int(-1);
            a[m][r] = ValExp::int(1);
        }
        let mut rhs = vec![ValExp::zero(); m + 1];
        rhs[m] = ValExp::int(1);
        let sol = solve(&a, &rhs)?;
        let worst = (0..m)
            .filter(|&r| sol[r].is_negative())
            .min_by(|&r, &s| sol[r].cmp(&sol[s]));
        match worst {
            Some(r) => {
                active.remove(r);
            }
            None => {
                let measure = DiscreteMeasure::from_atoms(
                    active
                        .iter()
                        .zip(&sol)
                        .map(|(&i, w)| (points[i].clone(), w.clone())),
                    cfg,
                );
                let v = KernelValue::Finite(sol[m].clone());
                for (i, x) in points.iter().enumerate() {
                    if !active.contains(&i) && potential(&measure, x, zeta, cfg) > v {
                        return Err(Error::VerificationFailed(format!(
                            "dropped boundary point {x} has potential above the Robin constant"
                        )));
                    }
                }
                return Ok(EquilibriumResult::new(measure, sol[m].clone()));
            }
        }
    }
}

/// The zeta-rooted hierarchy of a point set: kernels between points in
/// distinct children of a node all equal the node's value.
#[derive(Clone, Debug)]
pub struct ClusterTree {
    pub nodes: Vec<ClusterNode>,
    pub root: usize,
}

#[derive(Clone, Debug)]
pub struct ClusterNode {
    /// Self-kernel for leaves; common cross kernel for inner nodes.
    pub value: ValExp,
    pub children: Vec<usize>,
    pub point: Option<usize>,
}

impl ClusterTree {
    /// Builds the hierarchy of distinct non-type-I points.
    pub fn build(points: &[BerkPoint], zeta: &BerkPoint, cfg: &PrimeConfig) -> ClusterTree {
        let mut t = ClusterTree {
            nodes: Vec::new(),
            root: 0,
        };
        let idx: Vec<usize> = (0..points.len()).collect();
        t.root = if zeta.is_infinity() {
            t.build_inf(points, idx, cfg)
        } else {
            let k: Vec<Vec<ValExp>> = points
                .iter()
                .map(|x| {
                    points
                        .iter()
                        .map(|y| hsia_log(x, y, zeta, cfg).expect_finite("cluster kernel"))
                        .collect()
                })
                .collect();
            t.build_matrix(&k, idx)
        };
        t
    }

    fn leaf(&mut self, value: ValExp, point: usize) -> usize {
        self.nodes.push(ClusterNode {
            value,
            children: Vec::new(),
            point: Some(point),
        });
        self.nodes.len() - 1
    }

    fn inner(&mut self, value: ValExp, children: Vec<usize>) -> usize {
        self.nodes.push(ClusterNode {
            value,
            children,
            point: None,
        });
        self.nodes.len() - 1
    }

    fn build_inf(&mut self, pts: &[BerkPoint], idx: Vec<usize>, cfg: &PrimeConfig) -> usize {
        let data = InfData::new(pts, cfg);
        self.build_inf_rec(&data, idx, cfg)
    }

    fn build_inf_rec(&mut self, d: &InfData, idx: Vec<usize>, cfg: &PrimeConfig) -> usize {
        if idx.len() == 1 {
            return self.leaf(d.rexp[idx[0]].clone(), idx[0]);
        }
        let i0 = idx[0];
        let mut min_ord: Option<i64> = None;
        for &j in &idx[1..] {
            if let Some(o) = d.ord_diff(i0, j, cfg) {
                min_ord = Some(min_ord.map_or(o, |m: i64| m.min(o)));
            }
        }
        let mut g = match &d.int_rexp {
            Some(ir) => ValExp::int(idx.iter().map(|&i| ir[i]).min().unwrap()),
            None => idx.iter().map(|&i| &d.rexp[i]).min().unwrap().clone(),
        };
        if let Some(o) = min_ord {
            g = g.min(ValExp::int(o));
        }
        let k = g.floor() + 1;
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut key_of: HashMap<CenterKey, usize> = HashMap::new();
        let mut own: Option<usize> = None;
        let g_int = g
            .as_rat()
            .filter(|r| r.is_integer())
            .and_then(|r| i64::try_from(r.to_integer()).ok());
        for &i in &idx {
            let at_node = match (&d.int_rexp, g_int) {
                (Some(ir), Some(gi)) => ir[i] == gi,
                (Some(_), None) => false,
                _ => d.rexp[i] == g,
            };
            if at_node {
                own = Some(i);
                continue;
            }
            let gi = *key_of.entry(d.key(i, k, cfg)).or_insert_with(|| {
                groups.push(Vec::new());
                groups.len() - 1
            });
            groups[gi].push(i);
        }
        let mut children: Vec<usize> = Vec::new();
        if let Some(i) = own {
            children.push(self.leaf(g.clone(), i));
        }
        for grp in groups {
            children.push(self.build_inf_rec(d, grp, cfg));
        }
        self.inner(g, children)
    }

    fn build_matrix(&mut self, k: &[Vec<ValExp>], idx: Vec<usize>) -> usize {
        if idx.len() == 1 {
            return self.leaf(k[idx[0]][idx[0]].clone(), idx[0]);
        }
        let x0 = idx[0];
        let g = idx[1..].iter().map(|&j| k[x0][j].clone()).min().unwrap();
        let mut assigned = vec![false; idx.len()];
        let mut children = Vec::new();
        for a in 0..idx.len() {
            if assigned[a] {
                continue;
            }
            let i = idx[a];
            if k[i][i] == g {
                assigned[a] = true;
                children.push(self.leaf(g.clone(), i));
                continue;
            }
            let mut grp = Vec::new();
            for b in a..idx.len() {
                if !assigned[b] && k[i][idx[b]] > g {
                    assigned[b] = true;
                    grp.push(idx[b]);
                }
            }
            children.push(self.build_matrix(k, grp));
        }
        self.inner(g, children)
    }

    /// Post-order listing of node ids.
    fn post_order(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![(self.root, false)];
        while let Some((v, done)) = stack.pop() {
            if done {
                out.push(v);
            } else {
                stack.push((v, true));
                for &c in &self.nodes[v].children {
                    stack.push((c, false));
                }
            }
        }
        out
    }
}

/// Equilibrium by recursion over the cluster tree: at a node with value g and
/// children of Robin constants V_c, child masses are proportional to
/// 1/(V_c - g) and V = g + 1/sum 1/(V_c - g).
pub fn equilibrium_tree(
    points: &[BerkPoint],
    zeta: &BerkPoint,
    cfg: &PrimeConfig,
) -> Result<EquilibriumResult> {
    let tree = ClusterTree::build(points, zeta, cfg);
    let order = tree.post_order();
    let n = tree.nodes.len();
    // Robin constants of inner nodes; leaves use their own value.
    let mut inner_robin: Vec<Option<ValExp>> = vec![None; n];
    // per inner node, runs of (relative child mass, run length)
    let mut weights: Vec<Vec<(ValExp, usize)>> = vec![Vec::new(); n];
    // nodes with equal value and child runs share the computation
    type Runs = Vec<(ValExp, usize)>;
    let mut memo: HashMap<(ValExp, Runs), (ValExp, Runs)> = HashMap::new();
    for &v in &order {
        let node = &tree.nodes[v];
        if node.children.is_empty() {
            continue;
        }
        let rb = |c: usize| inner_robin[c].as_ref().unwrap_or(&tree.nodes[c].value);
        let g = &node.value;
        let mut runs: Runs = Vec::new();
        for &c in &node.children {
            match runs.last_mut() {
                Some((r, k)) if r == rb(c) => *k += 1,
                _ => runs.push((rb(c).clone(), 1)),
            }
        }
        let key = (g.clone(), runs);
        if let Some((r, w)) = memo.get(&key) {
            inner_robin[v] = Some(r.clone());
            weights[v] = w.clone();
            continue;
        }
        let runs = &key.1;
        let (robin, w) = if let Some(pos) = runs.iter().position(|(r, _)| r == g) {
            // a child at the node itself shields everything below it
            let before: usize = runs[..pos].iter().map(|(_, k)| k).sum();
            let w = vec![
                (ValExp::zero(), before),
                (ValExp::int(1), 1),
                (ValExp::zero(), node.children.len() - before - 1),
            ];
            (g.clone(), w)
        } else {
            let inv: Vec<ValExp> = runs.iter().map(|(r, _)| (r - g).recip()).collect();
            let total: ValExp = inv
                .iter()
                .zip(runs)
                .map(|(x, (_, k))| x.scale(&int(*k as i64)))
                .sum();
            let tinv = total.recip();
            let w = inv
                .iter()
                .zip(runs)
                .map(|(x, (_, k))| (x * &tinv, *k))
                .collect();
            (g + &tinv, w)
        };
        inner_robin[v] = Some(robin.clone());
        weights[v] = w.clone();
        memo.insert(key, (robin, w));
    }
    // push masses down, sharing products between equal (mass, weight) pairs
    let mut mass: Vec<Option<ValExp>> = vec![None; n];
    mass[tree.root] = Some(ValExp::int(1));
    let mut products: HashMap<(ValExp, ValExp), ValExp> = HashMap::new();
    let mut atoms = Vec::with_capacity(points.len());
    for &v in order.iter().rev() {
        let node = &tree.nodes[v];
        let Some(m) = mass[v].take() else { continue };
        if let Some(i) = node.point {
            if !m.is_zero() {
                atoms.push(crate::metrized_graph::Atom {
                    point: points[i].clone(),
                    mass: m,
                });
            }
            continue;
        }
        let mut children = node.children.iter();
        for (w, k) in &weights[v] {
            let key = (m.clone(), w.clone());
            let prod = products.entry(key).or_insert_with(|| &m * w).clone();
            for c in children.by_ref().take(*k) {
                mass[*c] = Some(prod.clone());
            }
        }
    }
    let robin = inner_robin[tree.root]
        .take()
        .unwrap_or_else(|| tree.nodes[tree.root].value.clone());
    // atoms come from distinct points, so no merging is needed
    Ok(EquilibriumResult::new(DiscreteMeasure { atoms }, robin))
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum CenterKey {
    Small(u128),
    Big(Rat),
}

/// Disc data for the pole-at-infinity hierarchy. When all centers scaled by
/// p^-m are p-integral and p^depth fits a u128, residues mod p^depth replace
/// rational arithmetic.
struct InfData<'a> {
    centers: Vec<&'a Rat>,
    rexp: Vec<ValExp>,
    int_rexp: Option<Vec<i64>>,
    residues: Option<Residues>,
}

struct Residues {
    r: Vec<u128>,
    shift: i64,
    p: u128,
    depth: u32,
}

impl<'a> InfData<'a> {
    fn new(pts: &'a [BerkPoint], cfg: &PrimeConfig) -> Self {
        let (centers, rexp): (Vec<&Rat>, Vec<ValExp>) = pts
            .iter()
            .map(|x| match x {
                BerkPoint::Disc { center, rexp } => (center, rexp.clone()),
                _ => panic!("cluster tree needs disc points"),
            })
            .unzip();
        let residues = Self::residues(&centers, &rexp, cfg);
        let int_rexp = rexp
            .iter()
            .map(|s| {
                s.as_rat()
                    .filter(|r| r.is_integer())
                    .and_then(|r| i64::try_from(r.to_integer()).ok())
            })
            .collect::<Option<Vec<i64>>>();
        InfData {
            centers,
            rexp,
            int_rexp,
            residues,
        }
    }

    fn residues(centers: &[&Rat], rexp: &[ValExp], cfg: &PrimeConfig) -> Option<Residues> {
        let shift = centers
            .iter()
            .filter_map(|a| cfg.ord(a))
            .min()
            .unwrap_or(0)
            .min(0);
        let top = rexp.iter().map(|s| s.ceil()).max()?;
        let depth = u32::try_from(top - shift).ok()?;
        let p = cfg.p() as u128;
        let modulus = p.checked_pow(depth).filter(|m| m.leading_zeros() >= 2)?;
        let big_mod = BigInt::from(modulus);
        let scale = cfg.pow(-shift);
        let r = centers
            .iter()
            .map(|a| {
                let y = *a * &scale;
                if y.is_integer() {
                    let v = y.numer().mod_floor(&big_mod);
                    return u128::try_from(v).expect("residue below the modulus");
                }
                let inv = crate::berk_points::mod_inverse(&y.denom().mod_floor(&big_mod), &big_mod);
                let v = (y.numer() * inv).mod_floor(&big_mod);
                u128::try_from(v).expect("residue below the modulus")
            })
            .collect();
        Some(Residues { r, shift, p, depth })
    }

    fn ord_diff(&self, i: usize, j: usize, cfg: &PrimeConfig) -> Option<i64> {
        match &self.residues {
            Some(res) => {
                let (a, b) = (res.r[i], res.r[j]);
                let mut d = a.abs_diff(b);
                if d == 0 {
                    // agree to full depth, which no disc exponent exceeds
                    return None;
                }
                let mut o = 0;
                while d % res.p == 0 {
                    d /= res.p;
                    o += 1;
                }
                Some(o + res.shift)
            }
            None => cfg.ord(&(self.centers[i] - self.centers[j])),
        }
    }

    fn key(&self, i: usize, k: i64, cfg: &PrimeConfig) -> CenterKey {
        match &self.residues {
            Some(res) => {
                let e = (k - res.shift).clamp(0, res.depth as i64) as u32;
                CenterKey::Small(res.r[i] % res.p.pow(e))
            }
            None => CenterKey::Big(fast_truncate(self.centers[i], k, cfg)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrostmanReport {
    pub passed: bool,
    pub support_equality: bool,
    pub global_inequality: bool,
    /// First point violating a condition, with its potential.
    pub witness: Option<(BerkPoint, KernelValue)>,
}

/// Checks u_mu = V on the support and u_mu <= V at the samples and the
/// boundary points.
pub fn frostman_check(
    e: &DiscUnion,
    result: &EquilibriumResult,
    zeta: &BerkPoint,
    samples: &[BerkPoint],
    cfg: &PrimeConfig,
) -> FrostmanReport {
    let v = KernelValue::Finite(result.robin.clone());
    let mut witness = None;
    let mut support_equality = result.measure.is_probability();
    for a in &result.measure.atoms {
        let u = potential(&result.measure, &a.point, zeta, cfg);
        if u != v {
            support_equality = false;
            witness.get_or_insert((a.point.clone(), u));
        }
    }
    let mut global_inequality = true;
    for x in samples.iter().chain(e.boundary_points().iter()) {
        if x.same(zeta, cfg) {
            continue;
        }
        let u = potential(&result.measure, x, zeta, cfg);
        if u > v {
            global_inequality = false;
            witness.get_or_insert((x.clone(), u));
        }
    }
    FrostmanReport {
        passed: support_equality && global_inequality,
        support_equality,
        global_inequality,
        witness,
    }
}

/// Cluster tree over candidates and boundary points with membership flags.
struct FlaggedTree {
    tree: ClusterTree,
    candidate: Vec<bool>,
    boundary: Vec<bool>,
}

fn flagged_tree(
    boundary: &[BerkPoint],
    candidates: &[BerkPoint],
    zeta: &BerkPoint,
    cfg: &PrimeConfig,
) -> Result<FlaggedTree> {
    let mut pts: Vec<BerkPoint> = Vec::new();
    let mut cand = Vec::new();
    let mut bnd = Vec::new();
    let mut index: HashMap<BerkPoint, usize> = HashMap::new();
    for (x, is_b) in boundary
        .iter()
        .map(|x| (x, true))
        .chain(candidates.iter().map(|x| (x, false)))
    {
        if x.is_type_i() {
            return Err(Error::Invalid("candidates must not be of type I".into()));
        }
        let key = x.canonical(cfg);
        let i = *index.entry(key).or_insert_with(|| {
            pts.push(x.clone());
            cand.push(false);
            bnd.push(false);
            pts.len() - 1
        });
        if is_b {
            bnd[i] = true;
        } else {
            cand[i] = true;
        }
    }
    Ok(FlaggedTree {
        tree: ClusterTree::build(&pts, zeta, cfg),
        candidate: cand,
        boundary: bnd,
    })
}

/// -log d_n over n-multisets of candidates: the minimum of
/// (1/(n(n-1))) sum_{i != j} -log delta(x_i, x_j)_zeta.
pub fn transfinite_diameter(
    e: &DiscUnion,
    n: usize,
    candidates: &[BerkPoint],
    zeta: &BerkPoint,
    cfg: &PrimeConfig,
) -> Result<ValExp> {
    if !(2..=8).contains(&n) {
        return Err(Error::Invalid(
            "transfinite diameter needs 2 <= n <= 8".into(),
        ));
    }
    if candidates.is_empty() {
        return Err(Error::Invalid("no candidates".into()));
    }
    if candidates.iter().any(|x| !e.contains_point(x, cfg)) {
        return Err(Error::CandidatesOutsideE);
    }
    let ft = flagged_tree(&[], candidates, zeta, cfg)?;
    let t = &ft.tree;
    // f[v][k]: least sum over ordered pairs for k points in the subtree
    let mut f: Vec<Vec<Option<ValExp>>> = vec![Vec::new(); t.nodes.len()];
    for v in t.post_order() {
        let node = &t.nodes[v];
        if let Some(i) = node.point {
            f[v] = (0..=n)
                .map(|k| {
                    (k == 0 || ft.candidate[i])
                        .then(|| node.value.scale(&int((k * k.saturating_sub(1)) as i64)))
                })
                .collect();
            continue;
        }
        let g = &node.value;
        let mut acc: Vec<Option<ValExp>> = (0..=n).map(|k| (k == 0).then(ValExp::zero)).collect();
        for &c in &node.children {
            let h: Vec<Option<ValExp>> = f[c]
                .iter()
                .enumerate()
                .map(|(k, x)| x.as_ref().map(|x| x - &g.scale(&int((k * k) as i64))))
                .collect();
            let mut next: Vec<Option<ValExp>> = vec![None; n + 1];
            for (j, aj) in acc.iter().enumerate() {
                let Some(aj) = aj else { continue };
                for (i, hi) in h.iter().enumerate().take(n + 1 - j) {
                    let Some(hi) = hi else { continue };
                    let s = aj + hi;
                    if next[i + j].as_ref().is_none_or(|cur| s < *cur) {
                        next[i + j] = Some(s);
                    }
                }
            }
            acc = next;
        }
        f[v] = acc
            .into_iter()
            .enumerate()
            .map(|(k, x)| x.map(|x| x + g.scale(&int((k * k) as i64))))
            .collect();
    }
    let best = f[t.root][n].clone().expect("candidates are nonempty");
    Ok(best.scale(&Rat::new(BigInt::one(), BigInt::from(n * (n - 1)))))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ChebyshevMode {
    Restricted,
    Unrestricted,
}

/// -log CH_n over candidate tuples: the maximum over n-multisets a of
/// (1/n) min over boundary points x of sum_i -log delta(x, a_i)_zeta.
///
/// The sup of the pseudo-polynomial over E is taken at boundary points: each
/// delta(., a_i) is non-increasing along paths into a disc, so the maximum on
/// a disc is attained at its boundary point.
pub fn chebyshev(
    e: &DiscUnion,
    n: usize,
    mode: ChebyshevMode,
    candidates: &[BerkPoint],
    zeta: &BerkPoint,
    cfg: &PrimeConfig,
) -> Result<ValExp> {
    if !(1..=8).contains(&n) {
        return Err(Error::Invalid(
            "Chebyshev constant needs 1 <= n <= 8".into(),
        ));
    }
    let cands: Vec<BerkPoint> = match mode {
        ChebyshevMode::Unrestricted => candidates.to_vec(),
        ChebyshevMode::Restricted => candidates
            .iter()
            .filter(|x| e.contains_point(x, cfg))
            .cloned()
            .collect(),
    };
    if cands.is_empty() {
        return Err(Error::Invalid("no admissible candidates".into()));
    }
    let bnd = e.boundary_points();
    if bnd.iter().any(|x| x.same(zeta, cfg)) {
        return Err(Error::Invalid("zeta is a boundary point".into()));
    }
    let ft = flagged_tree(&bnd, &cands, zeta, cfg)?;
    let t = &ft.tree;
    // b[v][k]: best value of min_x sum_a for k tuple points in the subtree;
    // Top = no boundary point in the subtree, None = infeasible.
    #[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
    enum B {
        Val(ValExp),
        Top,
    }
    let mut b: Vec<Vec<Option<B>>> = vec![Vec::new(); t.nodes.len()];
    for v in t.post_order() {
        let node = &t.nodes[v];
        if let Some(i) = node.point {
            b[v] = (0..=n)
                .map(|k| {
                    if k > 0 && !ft.candidate[i] {
                        None
                    } else if ft.boundary[i] {
                        Some(B::Val(node.value.scale(&int(k as i64))))
                    } else {
                        Some(B::Top)
                    }
                })
                .collect();
            continue;
        }
        let g = &node.value;
        let mut acc: Vec<Option<B>> = (0..=n).map(|k| (k == 0).then_some(B::Top)).collect();
        for &c in &node.children {
            let h: Vec<Option<B>> = b[c]
                .iter()
                .enumerate()
                .map(|(k, x)| {
                    x.as_ref().map(|x| match x {
                        B::Val(x) => B::Val(x - &g.scale(&int(k as i64))),
                        B::Top => B::Top,
                    })
                })
                .collect();
            let mut next: Vec<Option<B>> = vec![None; n + 1];
            for (j, aj) in acc.iter().enumerate() {
                let Some(aj) = aj else { continue };
                for (i, hi) in h.iter().enumerate().take(n + 1 - j) {
                    let Some(hi) = hi else { continue };
                    let s = aj.clone().min(hi.clone());
                    if next[i + j].as_ref().is_none_or(|cur| s > *cur) {
                        next[i + j] = Some(s);
                    }
                }
            }
            acc = next;
        }
        b[v] = acc
            .into_iter()
            .enumerate()
            .map(|(k, x)| {
                x.map(|x| match x {
                    B::Val(x) => B::Val(x + g.scale(&int(k as i64))),
                    B::Top => B::Top,
                })
            })
            .collect();
    }
    match b[t.root][n].clone() {
        Some(B::Val(x)) => Ok(x.scale(&Rat::new(BigInt::one(), BigInt::from(n)))),
        _ => Err(Error::Invalid("no feasible candidate tuple".into())),
    }
}

/// I_mu(nu) = iint g_mu dnu dnu with g_mu normalized so that I_mu(mu) = 0.
/// Computed as (nu - mu)^T J (nu - mu) with J the spherical kernel j at the
/// Gauss point.
pub fn mu_energy(mu: &DiscreteMeasure, nu: &DiscreteMeasure, cfg: &PrimeConfig) -> Result<ValExp> {
    for m in [mu, nu] {
        if !m.is_probability() {
            return Err(Error::Invalid(
                "mu_energy needs probability measures".into(),
            ));
        }
        if m.atoms.iter().any(|a| a.point.is_type_i()) {
            return Err(Error::TypeIAtom);
        }
    }
    let diff = nu.minus(mu, cfg);
    let mut total = ValExp::zero();
    for a in &diff.atoms {
        for b in &diff.atoms {
            let j = spherical_log(&a.point, &b.point, cfg).expect_finite("spherical kernel");
            total += &(&(&a.mass * &b.mass) * &j);
        }
    }
    Ok(total)
}

/// g_mu(x, y) = j(x, y) - u(x) - u(y) + C, with j and u taken at the Gauss
/// point and C = iint j dmu dmu.
pub fn mu_kernel(
    mu: &DiscreteMeasure,
    x: &BerkPoint,
    y: &BerkPoint,
    cfg: &PrimeConfig,
) -> KernelValue {
    let g = BerkPoint::gauss();
    let u = |z: &BerkPoint| kernel_sum_j(z, mu, cfg);
    let c: ValExp = mu
        .atoms
        .iter()
        .map(|a| u(&a.point).expect_finite("mu potential") * &a.mass)
        .sum();
    let _ = &g;
    spherical_log(x, y, cfg)
        .sub(&u(x))
        .and_then(|v| v.sub(&u(y)))
        .and_then(|v| v.add(&KernelValue::Finite(c)))
        .expect("finite potentials")
}

fn kernel_sum_j(z: &BerkPoint, mu: &DiscreteMeasure, cfg: &PrimeConfig) -> KernelValue {
    let mut acc = KernelValue::Finite(ValExp::zero());
    for a in &mu.atoms {
        let term = match spherical_log(z, &a.point, cfg) {
            KernelValue::Finite(v) => KernelValue::Finite(v * &a.mass),
            other => other,
        };
        acc = acc.add(&term).expect("mixed infinities");
    }
    acc
}
