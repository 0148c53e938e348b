//! Finite metrized trees inside the Berkovich line, CPA functions on them and
//! the graph Laplacian.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::berk_points::BerkPoint;
use crate::error::{Error, Result};
use crate::exact_numbers::{int, KernelValue, PrimeConfig, Rat, ValExp};
use crate::kernels::{depth, join, median, path_distance};

/// A finite signed measure with finitely many atoms, masses in Q(sqrt 2).
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DiscreteMeasure {
    pub atoms: Vec<Atom>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Atom {
    pub point: BerkPoint,
    pub mass: ValExp,
}

impl DiscreteMeasure {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn dirac(x: BerkPoint) -> Self {
        DiscreteMeasure {
            atoms: vec![Atom {
                point: x,
                mass: ValExp::int(1),
            }],
        }
    }

    /// Merges repeated points and drops zero masses; atom order follows first
    /// occurrence.
    pub fn from_atoms<I: IntoIterator<Item = (BerkPoint, ValExp)>>(
        items: I,
        cfg: &PrimeConfig,
    ) -> Self {
        let mut index: HashMap<BerkPoint, usize> = HashMap::new();
        let mut atoms: Vec<Atom> = Vec::new();
        for (pt, m) in items {
            let key = pt.canonical(cfg);
            match index.get(&key) {
                Some(&i) => atoms[i].mass += &m,
                None => {
                    index.insert(key, atoms.len());
                    atoms.push(Atom { point: pt, mass: m });
                }
            }
        }
        atoms.retain(|a| !a.mass.is_zero());
        DiscreteMeasure { atoms }
    }

    pub fn from_rat_atoms<I: IntoIterator<Item = (BerkPoint, Rat)>>(
        items: I,
        cfg: &PrimeConfig,
    ) -> Self {
        Self::from_atoms(
            items.into_iter().map(|(x, m)| (x, ValExp::from_rat(m))),
            cfg,
        )
    }

    pub fn total_mass(&self) -> ValExp {
        self.atoms.iter().map(|a| a.mass.clone()).sum()
    }

    pub fn mass_at(&self, x: &BerkPoint, cfg: &PrimeConfig) -> ValExp {
        self.atoms
            .iter()
            .filter(|a| a.point.same(x, cfg))
            .map(|a| a.mass.clone())
            .sum()
    }

    pub fn is_probability(&self) -> bool {
        self.total_mass() == ValExp::int(1) && self.atoms.iter().all(|a| !a.mass.is_negative())
    }

    pub fn scale(&self, c: &ValExp) -> DiscreteMeasure {
        DiscreteMeasure {
            atoms: self
                .atoms
                .iter()
                .filter(|_| !c.is_zero())
                .map(|a| Atom {
                    point: a.point.clone(),
                    mass: &a.mass * c,
                })
                .collect(),
        }
    }

    pub fn plus(&self, o: &DiscreteMeasure, cfg: &PrimeConfig) -> DiscreteMeasure {
        Self::from_atoms(
            self.atoms
                .iter()
                .chain(o.atoms.iter())
                .map(|a| (a.point.clone(), a.mass.clone())),
            cfg,
        )
    }

    pub fn minus(&self, o: &DiscreteMeasure, cfg: &PrimeConfig) -> DiscreteMeasure {
        self.plus(&o.scale(&ValExp::int(-1)), cfg)
    }

    /// Same atoms with the same masses, ignoring order and representatives.
    pub fn same(&self, o: &DiscreteMeasure, cfg: &PrimeConfig) -> bool {
        self.minus(o, cfg).atoms.is_empty()
    }

    /// Canonical atom order (by display string of canonical points).
    pub fn sorted(&self, cfg: &PrimeConfig) -> DiscreteMeasure {
        let mut atoms: Vec<Atom> = self
            .atoms
            .iter()
            .map(|a| Atom {
                point: a.point.canonical(cfg),
                mass: a.mass.clone(),
            })
            .collect();
        atoms.sort_by_key(|a| a.point.to_string());
        DiscreteMeasure { atoms }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub length: ValExp,
}

/// A point of a graph: a vertex, or a point in the interior of an edge at
/// distance `offset` from the edge's `i` end.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GraphPoint {
    Vertex(usize),
    Edge { edge: usize, offset: ValExp },
}

/// A finite metrized tree of non-type-I points. Edges are stored child to
/// parent (`i` is the end farther from the root vertex).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MetrizedGraph {
    pub vertices: Vec<BerkPoint>,
    pub edges: Vec<Edge>,
    pub root: usize,
    #[serde(skip)]
    parent: Vec<Option<usize>>,
    #[serde(skip)]
    up_edge: Vec<Option<usize>>,
    #[serde(skip)]
    height: Vec<ValExp>,
    #[serde(skip)]
    level: Vec<usize>,
}

#[derive(Deserialize)]
struct GraphRepr {
    vertices: Vec<BerkPoint>,
    edges: Vec<Edge>,
    #[serde(default)]
    root: usize,
}

impl<'de> Deserialize<'de> for MetrizedGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = GraphRepr::deserialize(d)?;
        MetrizedGraph::from_parts(r.vertices, r.edges, r.root).map_err(serde::de::Error::custom)
    }
}

impl MetrizedGraph {
    /// Builds a tree from vertices and undirected edges, orienting edges
    /// toward `root`.
    pub fn from_parts(vertices: Vec<BerkPoint>, edges: Vec<Edge>, root: usize) -> Result<Self> {
        let n = vertices.len();
        if n == 0 || root >= n {
            return Err(Error::Invalid("graph needs a root vertex".into()));
        }
        if edges.len() + 1 != n {
            return Err(Error::Invalid(
                "graph is not a tree (|E| != |V| - 1)".into(),
            ));
        }
        if vertices.iter().any(|v| v.is_type_i()) {
            return Err(Error::Invalid(
                "graph vertices must not be of type I".into(),
            ));
        }
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for (k, e) in edges.iter().enumerate() {
            if e.i >= n || e.j >= n || e.i == e.j || !e.length.is_positive() {
                return Err(Error::Invalid(format!("bad edge {k}")));
            }
            adj[e.i].push((e.j, k));
            adj[e.j].push((e.i, k));
        }
        let mut parent = vec![None; n];
        let mut up_edge = vec![None; n];
        let mut height = vec![ValExp::zero(); n];
        let mut level = vec![0usize; n];
        let mut seen = vec![false; n];
        let mut stack = vec![root];
        seen[root] = true;
        let mut oriented = edges.clone();
        while let Some(u) = stack.pop() {
            for &(w, k) in &adj[u] {
                if seen[w] {
                    continue;
                }
                seen[w] = true;
                parent[w] = Some(u);
                up_edge[w] = Some(k);
                height[w] = &height[u] + &edges[k].length;
                level[w] = level[u] + 1;
                oriented[k] = Edge {
                    i: w,
                    j: u,
                    length: edges[k].length.clone(),
                };
                stack.push(w);
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Invalid("graph is not connected".into()));
        }
        Ok(MetrizedGraph {
            vertices,
            edges: oriented,
            root,
            parent,
            up_edge,
            height,
            level,
        })
    }

    /// Checks that edge lengths are path distances and no vertex sits strictly
    /// inside an edge.
    pub fn validate(&self, cfg: &PrimeConfig) -> Result<()> {
        for (k, e) in self.edges.iter().enumerate() {
            let rho = path_distance(&self.vertices[e.i], &self.vertices[e.j], cfg);
            if rho != KernelValue::Finite(e.length.clone()) {
                return Err(Error::Invalid(format!(
                    "edge {k} length is not the path distance"
                )));
            }
            for (v, x) in self.vertices.iter().enumerate() {
                if v != e.i
                    && v != e.j
                    && on_segment(x, &self.vertices[e.i], &self.vertices[e.j], cfg)
                {
                    return Err(Error::Invalid(format!("vertex {v} lies inside edge {k}")));
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    /// Edges incident to v as (neighbour, edge index).
    pub fn neighbours(&self, v: usize) -> Vec<(usize, usize)> {
        self.edges
            .iter()
            .enumerate()
            .filter_map(|(k, e)| {
                if e.i == v {
                    Some((e.j, k))
                } else if e.j == v {
                    Some((e.i, k))
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn vertex_of(&self, x: &BerkPoint, cfg: &PrimeConfig) -> Option<usize> {
        self.vertices.iter().position(|v| v.same(x, cfg))
    }

    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        while self.level[a] > self.level[b] {
            a = self.parent[a].unwrap();
        }
        while self.level[b] > self.level[a] {
            b = self.parent[b].unwrap();
        }
        while a != b {
            a = self.parent[a].unwrap();
            b = self.parent[b].unwrap();
        }
        a
    }

    fn is_ancestor(&self, anc: usize, mut v: usize) -> bool {
        loop {
            if v == anc {
                return true;
            }
            match self.parent[v] {
                Some(p) => v = p,
                None => return false,
            }
        }
    }

    /// Tree distance between vertices along the graph's own edges.
    pub fn vertex_distance(&self, a: usize, b: usize) -> ValExp {
        let c = self.lca(a, b);
        &self.height[a] + &self.height[b] - self.height[c].scale(&int(2))
    }

    /// Tree distance between arbitrary graph points.
    pub fn distance(&self, x: &GraphPoint, y: &GraphPoint) -> ValExp {
        match (x, y) {
            (GraphPoint::Vertex(a), GraphPoint::Vertex(b)) => self.vertex_distance(*a, *b),
            (GraphPoint::Edge { edge, offset }, GraphPoint::Vertex(b))
            | (GraphPoint::Vertex(b), GraphPoint::Edge { edge, offset }) => {
                let e = &self.edges[*edge];
                if self.is_ancestor(e.i, *b) {
                    self.vertex_distance(e.i, *b) + offset
                } else {
                    self.vertex_distance(e.j, *b) + (&e.length - offset)
                }
            }
            (
                GraphPoint::Edge {
                    edge: e1,
                    offset: o1,
                },
                GraphPoint::Edge {
                    edge: e2,
                    offset: o2,
                },
            ) => {
                if e1 == e2 {
                    return (o1 - o2).abs();
                }
                let e = &self.edges[*e1];
                // route through whichever end of e1 faces y
                let y_below = self.is_ancestor(e.i, self.edges[*e2].i);
                if y_below {
                    self.distance(&GraphPoint::Vertex(e.i), y) + o1
                } else {
                    self.distance(&GraphPoint::Vertex(e.j), y) + (&e.length - o1)
                }
            }
        }
    }

    /// The Berkovich point represented by a graph point.
    pub fn to_berk(&self, x: &GraphPoint, cfg: &PrimeConfig) -> BerkPoint {
        match x {
            GraphPoint::Vertex(v) => self.vertices[*v].clone(),
            GraphPoint::Edge { edge, offset } => {
                let e = &self.edges[*edge];
                point_along(&self.vertices[e.i], &self.vertices[e.j], offset, cfg)
            }
        }
    }

    /// The graph point for a Berkovich point lying on the graph.
    pub fn locate(&self, x: &BerkPoint, cfg: &PrimeConfig) -> Result<GraphPoint> {
        if let Some(v) = self.vertex_of(x, cfg) {
            return Ok(GraphPoint::Vertex(v));
        }
        if x.is_type_i() {
            return Err(Error::PointNotOnGraph);
        }
        for (k, e) in self.edges.iter().enumerate() {
            let (u, w) = (&self.vertices[e.i], &self.vertices[e.j]);
            if on_segment(x, u, w, cfg) {
                let off = path_distance(u, x, cfg).expect_finite("edge point");
                return Ok(GraphPoint::Edge {
                    edge: k,
                    offset: off,
                });
            }
        }
        Err(Error::PointNotOnGraph)
    }

    /// Nearest point of the graph on the path from x into it.
    pub fn retract(&self, x: &BerkPoint, cfg: &PrimeConfig) -> GraphPoint {
        let anchor = &self.vertices[self.root];
        let mut best: Option<(BerkPoint, ValExp)> = None;
        for v in &self.vertices {
            let m = median(anchor, v, x, cfg);
            let d = path_distance(anchor, &m, cfg).expect_finite("median on the graph");
            if best.as_ref().is_none_or(|(_, bd)| d > *bd) {
                best = Some((m, d));
            }
        }
        let (r, _) = best.unwrap();
        self.locate(&r, cfg).expect("retraction lies on the graph")
    }

    pub fn retract_point(&self, x: &BerkPoint, cfg: &PrimeConfig) -> BerkPoint {
        self.to_berk(&self.retract(x, cfg), cfg)
    }

    /// A refined copy with the given on-graph points added as vertices.
    pub fn refine(&self, extra: &[BerkPoint], cfg: &PrimeConfig) -> Result<MetrizedGraph> {
        for x in extra {
            self.locate(x, cfg)?;
        }
        let mut pts: Vec<BerkPoint> = self.vertices.clone();
        pts.extend(extra.iter().cloned());
        span(&pts, &self.vertices[self.root], cfg)
    }

    /// Graph-native potential kernel, via the Gromov product of tree distances.
    pub fn j_kernel(&self, z: &GraphPoint, x: &GraphPoint, y: &GraphPoint) -> ValExp {
        let s = self.distance(x, z) + self.distance(y, z) - self.distance(x, y);
        s.scale(&crate::exact_numbers::rat(1, 2))
    }

    /// Retraction of a measure onto the graph (atoms moved to their
    /// retractions and merged).
    pub fn retract_measure(&self, m: &DiscreteMeasure, cfg: &PrimeConfig) -> DiscreteMeasure {
        DiscreteMeasure::from_atoms(
            m.atoms
                .iter()
                .map(|a| (self.retract_point(&a.point, cfg), a.mass.clone())),
            cfg,
        )
    }
}

/// Whether x lies on the path between u and w.
pub fn on_segment(x: &BerkPoint, u: &BerkPoint, w: &BerkPoint, cfg: &PrimeConfig) -> bool {
    median(u, w, x, cfg).same(x, cfg)
}

/// The point at distance `offset` from u on the path from u to w.
pub fn point_along(u: &BerkPoint, w: &BerkPoint, offset: &ValExp, cfg: &PrimeConfig) -> BerkPoint {
    let top = join(u, w, cfg);
    let t_top = depth(&top).expect_finite("join of discs");
    let (
        BerkPoint::Disc {
            center: cu,
            rexp: su,
        },
        BerkPoint::Disc { center: cw, .. },
    ) = (u, w)
    else {
        panic!("point_along needs disc endpoints");
    };
    let up = su - &t_top;
    if *offset <= up {
        BerkPoint::disc(cu.clone(), su - offset)
    } else {
        BerkPoint::disc(cw.clone(), &t_top + &(offset - &up))
    }
}

/// Convex hull tree of `points` and `anchor`, rooted at the anchor.
pub fn span(points: &[BerkPoint], anchor: &BerkPoint, cfg: &PrimeConfig) -> Result<MetrizedGraph> {
    if anchor.is_type_i() || points.iter().any(|x| x.is_type_i()) {
        return Err(Error::Invalid("span: points must not be of type I".into()));
    }
    let mut verts: Vec<BerkPoint> = vec![anchor.canonical(cfg)];
    let mut seen: HashMap<BerkPoint, usize> = HashMap::new();
    seen.insert(verts[0].clone(), 0);
    let mut add = |x: BerkPoint, verts: &mut Vec<BerkPoint>| {
        let k = x.canonical(cfg);
        if !seen.contains_key(&k) {
            seen.insert(k.clone(), verts.len());
            verts.push(k);
        }
    };
    for x in points {
        add(x.clone(), &mut verts);
    }
    let base = verts.clone();
    for a in 0..base.len() {
        for b in a + 1..base.len() {
            add(median(&base[a], &base[b], anchor, cfg), &mut verts);
        }
    }
    let n = verts.len();
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    for v in 1..n {
        // parent: the nearest other vertex on the path from v to the anchor
        let mut best: Option<(usize, ValExp)> = None;
        for u in 0..n {
            if u == v || !on_segment(&verts[u], &verts[v], anchor, cfg) {
                continue;
            }
            let d = path_distance(&verts[v], &verts[u], cfg).expect_finite("vertex distance");
            if best.as_ref().is_none_or(|(_, bd)| d < *bd) {
                best = Some((u, d));
            }
        }
        let (u, d) = best.expect("anchor is always on the path");
        edges.push(Edge {
            i: v,
            j: u,
            length: d,
        });
    }
    MetrizedGraph::from_parts(verts, edges, 0)
}

/// A continuous piecewise-affine function given by its vertex values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CpaFunction {
    pub graph: MetrizedGraph,
    pub values: Vec<ValExp>,
}

impl CpaFunction {
    pub fn new(graph: MetrizedGraph, values: Vec<ValExp>) -> Result<Self> {
        if values.len() != graph.len() {
            return Err(Error::Invalid("one value per vertex expected".into()));
        }
        Ok(CpaFunction { graph, values })
    }

    pub fn from_fn<F: FnMut(&BerkPoint) -> ValExp>(graph: &MetrizedGraph, f: F) -> Self {
        let values = graph.vertices.iter().map(f).collect();
        CpaFunction {
            graph: graph.clone(),
            values,
        }
    }

    pub fn eval(&self, x: &GraphPoint) -> ValExp {
        match x {
            GraphPoint::Vertex(v) => self.values[*v].clone(),
            GraphPoint::Edge { edge, offset } => {
                let e = &self.graph.edges[*edge];
                let slope = (&self.values[e.j] - &self.values[e.i]) / e.length.clone();
                &self.values[e.i] + &(slope * offset)
            }
        }
    }

    /// Outgoing derivative at v along the edge to w.
    pub fn slope(&self, v: usize, edge: usize) -> ValExp {
        let e = &self.graph.edges[edge];
        let w = if e.i == v { e.j } else { e.i };
        (&self.values[w] - &self.values[v]) / e.length.clone()
    }
}

/// Delta(f) = sum over vertices of minus the outgoing slopes.
pub fn laplacian(f: &CpaFunction, cfg: &PrimeConfig) -> DiscreteMeasure {
    let g = &f.graph;
    let mut out: Vec<ValExp> = vec![ValExp::zero(); g.len()];
    for (k, e) in g.edges.iter().enumerate() {
        out[e.i] -= &f.slope(e.i, k);
        out[e.j] -= &f.slope(e.j, k);
    }
    DiscreteMeasure::from_atoms(g.vertices.iter().cloned().zip(out), cfg)
}

/// j_z(x, y) computed inside the graph; errors if a point is off the graph.
pub fn potential_kernel_graph(
    graph: &MetrizedGraph,
    z: &BerkPoint,
    x: &BerkPoint,
    y: &BerkPoint,
    cfg: &PrimeConfig,
) -> Result<ValExp> {
    let z = graph.locate(z, cfg)?;
    let x = graph.locate(x, cfg)?;
    let y = graph.locate(y, cfg)?;
    Ok(graph.j_kernel(&z, &x, &y))
}

/// Sum over vertices of f(v) * mu({v}) for a measure supported on vertices.
pub fn pair(f: &CpaFunction, mu: &DiscreteMeasure, cfg: &PrimeConfig) -> ValExp {
    mu.atoms
        .iter()
        .map(|a| {
            let v = f
                .graph
                .vertex_of(&a.point, cfg)
                .expect("measure supported on vertices");
            &f.values[v] * &a.mass
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_numbers::int;
    use crate::kernels::j_kernel;

    fn cfg(p: u64) -> PrimeConfig {
        PrimeConfig::new(p).unwrap()
    }

    #[test]
    fn span_examples() {
        let c = cfg(3);
        let g = span(&[BerkPoint::gauss()], &BerkPoint::gauss(), &c).unwrap();
        assert_eq!(g.len(), 1);
        let a = BerkPoint::disc_i(int(0), 1);
        let b = BerkPoint::disc_i(int(1), 1);
        let g = span(&[a.clone(), b.clone()], &BerkPoint::gauss(), &c).unwrap();
        assert_eq!(g.len(), 3);
        assert!(g
            .edges
            .iter()
            .all(|e| e.length == ValExp::int(1) && e.j == 0));
        g.validate(&c).unwrap();
    }

    #[test]
    fn retract_examples() {
        let c = cfg(3);
        let g = span(&[BerkPoint::disc_i(int(0), 2)], &BerkPoint::gauss(), &c).unwrap();
        assert_eq!(g.retract(&BerkPoint::gauss(), &c), GraphPoint::Vertex(0));
        let r = g.retract_point(&BerkPoint::TypeI(int(27)), &c);
        assert!(r.same(&BerkPoint::disc_i(int(0), 2), &c));
        let r = g.retract_point(&BerkPoint::TypeI(int(9 + 3)), &c);
        assert!(r.same(&BerkPoint::disc_i(int(0), 1), &c));
        assert!(matches!(
            g.retract(&BerkPoint::TypeI(int(12)), &c),
            GraphPoint::Edge { .. }
        ));
        assert_eq!(g.retract(&BerkPoint::Infinity, &c), GraphPoint::Vertex(0));
    }

    #[test]
    fn laplacian_examples() {
        let c = cfg(5);
        let top = BerkPoint::gauss();
        let mid = BerkPoint::disc_i(int(0), 1);
        let bot = BerkPoint::disc_i(int(0), 2);
        let g = span(&[mid.clone(), bot.clone()], &top, &c).unwrap();
        let konst = CpaFunction::from_fn(&g, |_| ValExp::int(7));
        assert!(laplacian(&konst, &c).atoms.is_empty());
        // rising then falling: +2 at the peak, -1 at each end
        let f = CpaFunction::from_fn(&g, |x| {
            if x.same(&mid, &c) {
                ValExp::int(1)
            } else {
                ValExp::zero()
            }
        });
        let lap = laplacian(&f, &c);
        assert_eq!(lap.mass_at(&mid, &c), ValExp::int(2));
        assert_eq!(lap.mass_at(&top, &c), ValExp::int(-1));
        assert_eq!(lap.mass_at(&bot, &c), ValExp::int(-1));
        // j_z(., y) has Laplacian delta_y - delta_z
        let j = CpaFunction::from_fn(&g, |x| j_kernel(x, &bot, &top, &c).expect_finite("j"));
        let lap = laplacian(&j, &c);
        let want = DiscreteMeasure::from_atoms(
            [
                (bot.clone(), ValExp::int(1)),
                (top.clone(), ValExp::int(-1)),
            ],
            &c,
        );
        assert!(lap.same(&want, &c));
    }

    #[test]
    fn point_along_turns_at_the_join() {
        let c = cfg(3);
        let u = BerkPoint::disc_i(int(0), 1);
        let w = BerkPoint::disc_i(int(1), 2);
        let g = span(&[u.clone(), w.clone()], &u, &c).unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g.edges[0].length, ValExp::int(3));
        // edge runs from w (child) up to the root u
        let mid = g.to_berk(
            &GraphPoint::Edge {
                edge: 0,
                offset: ValExp::int(1),
            },
            &c,
        );
        assert!(mid.same(&BerkPoint::disc_i(int(1), 1), &c));
        assert_eq!(
            g.locate(&BerkPoint::gauss(), &c).unwrap(),
            GraphPoint::Edge {
                edge: 0,
                offset: ValExp::int(2)
            }
        );
    }

    #[test]
    fn graph_json_roundtrip() {
        let c = cfg(2);
        let g = span(
            &[BerkPoint::disc_i(int(0), 1), BerkPoint::disc_i(int(1), 3)],
            &BerkPoint::gauss(),
            &c,
        )
        .unwrap();
        let s = serde_json::to_string(&g).unwrap();
        let back: MetrizedGraph = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
    }
}
