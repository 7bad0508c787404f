//! Multigraphs with loops and circle components, fragments with labeled open
//! ends, gluing, canonical keys and bounded fragment enumeration.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest number of permutable vertices accepted by [`canonical_key`].
pub const MAX_CANONICAL_VERTICES: usize = 8;

/// A finite undirected multigraph. Loops and parallel edges are allowed.
/// `circles` counts components that are a single edge with no vertices.
///
/// Edges are stored with `u <= v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Multigraph {
    vertices: usize,
    edges: Vec<(usize, usize)>,
    circles: usize,
}

impl Multigraph {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>, circles: usize) -> Result<Self> {
        let g = Multigraph::from_raw(vertices, edges, circles);
        g.validate()?;
        Ok(g)
    }

    fn from_raw(vertices: usize, edges: Vec<(usize, usize)>, circles: usize) -> Self {
        let edges = edges
            .into_iter()
            .map(|(u, v)| if u <= v { (u, v) } else { (v, u) })
            .collect();
        Multigraph {
            vertices,
            edges,
            circles,
        }
    }

    /// Checks that every endpoint is a valid vertex index.
    pub fn validate(&self) -> Result<()> {
        for &(u, v) in &self.edges {
            let worst = u.max(v);
            if worst >= self.vertices {
                return Err(Error::OutOfRangeEndpoint {
                    endpoint: worst,
                    vertex_count: self.vertices,
                });
            }
        }
        Ok(())
    }

    pub fn empty() -> Self {
        Multigraph::default()
    }

    /// The circle `O`: one edge, no vertices.
    pub fn circle() -> Self {
        Multigraph {
            vertices: 0,
            edges: Vec::new(),
            circles: 1,
        }
    }

    /// Complete simple graph on `n` vertices.
    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Multigraph::from_raw(n, edges, 0)
    }

    /// Cycle on `n >= 1` vertices; `n = 1` is a loop, `n = 2` a double edge.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 1, "cycle needs at least one vertex");
        let edges = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Multigraph::from_raw(n, edges, 0)
    }

    /// Path with `n` vertices and `n - 1` edges.
    pub fn path(n: usize) -> Self {
        let edges = (1..n).map(|i| (i - 1, i)).collect();
        Multigraph::from_raw(n, edges, 0)
    }

    /// Two vertices joined by `m` parallel edges.
    pub fn multi_edge(m: usize) -> Self {
        Multigraph::from_raw(2, vec![(0, 1); m], 0)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn circles(&self) -> usize {
        self.circles
    }

    /// Degrees with loops counted twice.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertices];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// Applies a vertex relabeling `v -> perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.vertices {
            return Err(Error::ShapeMismatch(format!(
                "permutation of length {} for {} vertices",
                perm.len(),
                self.vertices
            )));
        }
        let mut seen = vec![false; perm.len()];
        for &p in perm {
            if p >= perm.len() || seen[p] {
                return Err(Error::ShapeMismatch("not a permutation".into()));
            }
            seen[p] = true;
        }
        let edges = self.edges.iter().map(|&(u, v)| (perm[u], perm[v])).collect();
        Ok(Multigraph::from_raw(self.vertices, edges, self.circles))
    }

    /// The same graph with all circle components removed.
    pub fn without_circles(&self) -> Self {
        Multigraph {
            circles: 0,
            ..self.clone()
        }
    }
}

impl fmt::Display for Multigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G(n={}, E={:?}", self.vertices, self.edges)?;
        if self.circles > 0 {
            write!(f, ", O^{}", self.circles)?;
        }
        write!(f, ")")
    }
}

/// Disjoint union; vertex indices of `g2` are shifted past those of `g1`.
pub fn disjoint_union(g1: &Multigraph, g2: &Multigraph) -> Multigraph {
    let shift = g1.vertices;
    let mut edges = g1.edges.clone();
    edges.extend(g2.edges.iter().map(|&(u, v)| (u + shift, v + shift)));
    Multigraph {
        vertices: g1.vertices + g2.vertices,
        edges,
        circles: g1.circles + g2.circles,
    }
}

/// A multigraph with an ordered list of open ends. Each open end has degree
/// exactly one; its label is its position in `open_ends`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fragment {
    graph: Multigraph,
    open_ends: Vec<usize>,
}

impl Fragment {
    pub fn new(graph: Multigraph, open_ends: Vec<usize>) -> Result<Self> {
        let f = Fragment { graph, open_ends };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        self.graph.validate()?;
        if self.graph.circles != 0 {
            return Err(Error::InvalidFragment("fragments carry no circles".into()));
        }
        let deg = self.graph.degrees();
        let mut seen = vec![false; self.graph.vertices];
        for &o in &self.open_ends {
            if o >= self.graph.vertices {
                return Err(Error::OutOfRangeEndpoint {
                    endpoint: o,
                    vertex_count: self.graph.vertices,
                });
            }
            if seen[o] {
                return Err(Error::InvalidFragment(format!("open end {o} listed twice")));
            }
            seen[o] = true;
            if deg[o] != 1 {
                return Err(Error::InvalidFragment(format!(
                    "open end {o} has degree {}",
                    deg[o]
                )));
            }
        }
        Ok(())
    }

    /// A fragment without open ends.
    pub fn closed(graph: Multigraph) -> Result<Self> {
        Fragment::new(graph, Vec::new())
    }

    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn open_ends(&self) -> &[usize] {
        &self.open_ends
    }

    pub fn labels(&self) -> usize {
        self.open_ends.len()
    }

    pub fn internal_count(&self) -> usize {
        self.graph.vertices - self.open_ends.len()
    }

    /// One internal vertex carrying `l` half edges to open ends `1..=l`.
    pub fn star(l: usize) -> Self {
        let edges = (1..=l).map(|i| (0, i)).collect();
        Fragment {
            graph: Multigraph::from_raw(l + 1, edges, 0),
            open_ends: (1..=l).collect(),
        }
    }

    /// A path on `internal` vertices whose two ends carry the half edges of
    /// labels 1 and 2.
    pub fn path2(internal: usize) -> Self {
        assert!(internal >= 1);
        let mut edges: Vec<(usize, usize)> = (1..internal).map(|i| (i - 1, i)).collect();
        edges.push((0, internal));
        edges.push((internal - 1, internal + 1));
        Fragment {
            graph: Multigraph::from_raw(internal + 2, edges, 0),
            open_ends: vec![internal, internal + 1],
        }
    }

    /// A single edge joining open ends 1 and 2.
    pub fn bare_edge() -> Self {
        Fragment {
            graph: Multigraph::from_raw(2, vec![(0, 1)], 0),
            open_ends: vec![0, 1],
        }
    }

    /// Internal vertices first (original relative order), then open ends in
    /// label order.
    pub fn normalized(&self) -> Fragment {
        let n = self.graph.vertices;
        let l = self.open_ends.len();
        let m = n - l;
        let mut perm = vec![usize::MAX; n];
        for (label, &o) in self.open_ends.iter().enumerate() {
            perm[o] = m + label;
        }
        let mut next = 0;
        for p in perm.iter_mut() {
            if *p == usize::MAX {
                *p = next;
                next += 1;
            }
        }
        let graph = self.graph.relabel(&perm).expect("valid permutation");
        Fragment {
            graph,
            open_ends: (m..n).collect(),
        }
    }

    /// Permutes internal vertices only; `perm` has length `internal_count()`
    /// and acts on the internal vertices in their normalized order.
    pub fn relabel_internal(&self, perm: &[usize]) -> Result<Fragment> {
        let norm = self.normalized();
        let m = norm.internal_count();
        if perm.len() != m {
            return Err(Error::ShapeMismatch("internal permutation length".into()));
        }
        let mut full: Vec<usize> = perm.to_vec();
        full.extend(m..norm.graph.vertices);
        let graph = norm.graph.relabel(&full)?;
        Ok(Fragment {
            graph,
            open_ends: norm.open_ends,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    F,
    H,
}

impl Side {
    fn flip(self) -> Side {
        match self {
            Side::F => Side::H,
            Side::H => Side::F,
        }
    }
}

#[derive(Clone, Copy, Debug)]
enum Port {
    /// A surviving vertex of the glued graph.
    Vertex(usize),
    /// Another junction, entered on the given side.
    Junction(usize),
}

/// Glues two fragments with the same number of open ends: identically labeled
/// half edges are joined and the open ends deleted. Chains of joined half
/// edges that close up without meeting a surviving vertex become circles.
pub fn glue(f: &Fragment, h: &Fragment) -> Result<Multigraph> {
    if f.labels() != h.labels() {
        return Err(Error::LabelCountMismatch {
            left: f.labels(),
            right: h.labels(),
        });
    }
    let l = f.labels();
    let f = f.normalized();
    let h = h.normalized();
    let mf = f.internal_count();
    let mh = h.internal_count();

    // Port of each junction on each side; internal vertices of h are shifted by mf.
    let mut ports = [vec![Port::Vertex(0); l], vec![Port::Vertex(0); l]];
    let mut edges = Vec::new();
    for (side, frag, shift, m) in [(0usize, &f, 0usize, mf), (1, &h, mf, mh)] {
        for &(u, v) in frag.graph.edges() {
            match (u < m, v < m) {
                (true, true) => edges.push((u + shift, v + shift)),
                (true, false) => ports[side][v - m] = Port::Vertex(u + shift),
                (false, true) => ports[side][u - m] = Port::Vertex(v + shift),
                (false, false) => {
                    ports[side][u - m] = Port::Junction(v - m);
                    ports[side][v - m] = Port::Junction(u - m);
                }
            }
        }
    }
    let port = |j: usize, s: Side| match s {
        Side::F => ports[0][j],
        Side::H => ports[1][j],
    };

    let mut visited = vec![false; l];
    let mut circles = 0;
    for start in 0..l {
        if visited[start] {
            continue;
        }
        visited[start] = true;
        // Walk out of the F side first.
        let mut cur = start;
        let mut leave = Side::F;
        let mut end_f = None;
        loop {
            match port(cur, leave) {
                Port::Vertex(v) => {
                    end_f = Some(v);
                    break;
                }
                Port::Junction(j) => {
                    // Arriving at j on the same side we left; continue out the other.
                    if j == start {
                        break;
                    }
                    visited[j] = true;
                    cur = j;
                    leave = leave.flip();
                }
            }
        }
        let Some(a) = end_f else {
            circles += 1;
            continue;
        };
        let mut cur = start;
        let mut leave = Side::H;
        let b = loop {
            match port(cur, leave) {
                Port::Vertex(v) => break v,
                Port::Junction(j) => {
                    visited[j] = true;
                    cur = j;
                    leave = leave.flip();
                }
            }
        };
        edges.push((a, b));
    }
    Ok(Multigraph::from_raw(mf + mh, edges, circles))
}

/// Byte string identifying a multigraph or fragment up to isomorphism
/// (fragment isomorphisms fix open-end labels).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey(pub Vec<u8>);

impl CanonicalKey {
    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl Serialize for CanonicalKey {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for CanonicalKey {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if s.len() % 2 != 0 {
            return Err(serde::de::Error::custom("odd-length key"));
        }
        (0..s.len())
            .step_by(2)
            .map(|i| u8::from_str_radix(&s[i..i + 2], 16))
            .collect::<std::result::Result<Vec<u8>, _>>()
            .map(CanonicalKey)
            .map_err(serde::de::Error::custom)
    }
}

/// Lexicographic successor; returns false after the last permutation.
fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Minimum sorted edge list over permutations of the first `m` vertices;
/// vertices `m..n` stay fixed.
fn min_edge_list(n: usize, m: usize, edges: &[(usize, usize)]) -> Vec<(u8, u8)> {
    let mut perm: Vec<usize> = (0..m).collect();
    let mut best: Option<Vec<(u8, u8)>> = None;
    let mut buf = Vec::with_capacity(edges.len());
    loop {
        buf.clear();
        buf.extend(edges.iter().map(|&(u, v)| {
            let pu = if u < m { perm[u] } else { u };
            let pv = if v < m { perm[v] } else { v };
            let (a, b) = if pu <= pv { (pu, pv) } else { (pv, pu) };
            (a as u8, b as u8)
        }));
        buf.sort_unstable();
        if best.as_ref().is_none_or(|b| buf < *b) {
            best = Some(buf.clone());
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    debug_assert!(n < 256);
    best.unwrap_or_default()
}

fn encode_key(tag: u8, n: usize, l: usize, circles: usize, edges: &[(u8, u8)]) -> CanonicalKey {
    let mut bytes = Vec::with_capacity(8 + 2 * edges.len());
    bytes.push(tag);
    bytes.push(n as u8);
    bytes.push(l as u8);
    bytes.extend_from_slice(&(circles as u32).to_be_bytes());
    for &(u, v) in edges {
        bytes.push(u);
        bytes.push(v);
    }
    CanonicalKey(bytes)
}

/// Canonical key of a multigraph; all vertices are permutable.
pub fn canonical_key(g: &Multigraph) -> Result<CanonicalKey> {
    if g.vertices > MAX_CANONICAL_VERTICES {
        return Err(Error::TooLarge(format!(
            "{} vertices exceeds canonicalization bound {}",
            g.vertices, MAX_CANONICAL_VERTICES
        )));
    }
    let edges = min_edge_list(g.vertices, g.vertices, &g.edges);
    Ok(encode_key(0, g.vertices, 0, g.circles, &edges))
}

/// Canonical key of a fragment; only internal vertices are permutable.
pub fn fragment_key(f: &Fragment) -> Result<CanonicalKey> {
    let m = f.internal_count();
    if m > MAX_CANONICAL_VERTICES {
        return Err(Error::TooLarge(format!(
            "{m} internal vertices exceeds canonicalization bound {MAX_CANONICAL_VERTICES}"
        )));
    }
    if f.graph.vertices > 255 {
        return Err(Error::TooLarge("more than 255 vertices".into()));
    }
    let norm = f.normalized();
    let edges = min_edge_list(norm.graph.vertices, m, &norm.graph.edges);
    Ok(encode_key(1, norm.graph.vertices, f.labels(), 0, &edges))
}

/// Bounds for [`enumerate_fragments`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusBounds {
    pub max_internal_vertices: usize,
    /// Total edge budget, counting half edges and bare edges.
    pub max_edges: usize,
    pub allow_bare_edges: bool,
}

impl CorpusBounds {
    pub fn new(max_internal_vertices: usize, max_edges: usize) -> Self {
        CorpusBounds {
            max_internal_vertices,
            max_edges,
            allow_bare_edges: false,
        }
    }

    pub fn with_bare_edges(mut self, allow: bool) -> Self {
        self.allow_bare_edges = allow;
        self
    }
}

/// Where an open end's half edge goes.
#[derive(Clone, Copy)]
enum Attach {
    Internal(usize),
    OpenEnd(usize),
}

fn open_end_attachments(l: usize, m: usize, allow_bare: bool) -> Vec<Vec<Attach>> {
    fn rec(
        i: usize,
        m: usize,
        allow_bare: bool,
        cur: &mut Vec<Option<Attach>>,
        out: &mut Vec<Vec<Attach>>,
    ) {
        let l = cur.len();
        if i == l {
            out.push(cur.iter().map(|a| a.expect("assigned")).collect());
            return;
        }
        if cur[i].is_some() {
            rec(i + 1, m, allow_bare, cur, out);
            return;
        }
        for x in 0..m {
            cur[i] = Some(Attach::Internal(x));
            rec(i + 1, m, allow_bare, cur, out);
        }
        if allow_bare {
            for j in i + 1..l {
                if cur[j].is_none() {
                    cur[i] = Some(Attach::OpenEnd(j));
                    cur[j] = Some(Attach::OpenEnd(i));
                    rec(i + 1, m, allow_bare, cur, out);
                    cur[j] = None;
                }
            }
        }
        cur[i] = None;
    }
    let mut out = Vec::new();
    rec(0, m, allow_bare, &mut vec![None; l], &mut out);
    out
}

/// All multisets of at most `budget` items from `types` kinds.
fn multisets(types: usize, budget: usize) -> Vec<Vec<usize>> {
    fn rec(t: usize, types: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if t == types {
            out.push(cur.clone());
            return;
        }
        for c in 0..=left {
            cur.push(c);
            rec(t + 1, types, left - c, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, types, budget, &mut Vec::new(), &mut out);
    out
}

/// One representative per isomorphism class (labels fixed) of `l`-fragments
/// within the bounds, sorted by canonical key. With bare edges disallowed no
/// edge joins two open ends, so gluings never create circles.
pub fn enumerate_fragments(l: usize, bounds: CorpusBounds) -> Result<Vec<Fragment>> {
    if bounds.max_internal_vertices > MAX_CANONICAL_VERTICES {
        return Err(Error::TooLarge(format!(
            "{} internal vertices exceeds canonicalization bound {}",
            bounds.max_internal_vertices, MAX_CANONICAL_VERTICES
        )));
    }
    if l + bounds.max_internal_vertices > 255 {
        return Err(Error::TooLarge("more than 255 vertices".into()));
    }
    let mut found: BTreeMap<CanonicalKey, Fragment> = BTreeMap::new();
    for m in 0..=bounds.max_internal_vertices {
        let pairs: Vec<(usize, usize)> = (0..m)
            .flat_map(|u| (u..m).map(move |v| (u, v)))
            .collect();
        for attach in open_end_attachments(l, m, bounds.allow_bare_edges) {
            let mut half_edges = Vec::new();
            for (i, a) in attach.iter().enumerate() {
                match *a {
                    Attach::Internal(x) => half_edges.push((x, m + i)),
                    Attach::OpenEnd(j) if j > i => half_edges.push((m + i, m + j)),
                    Attach::OpenEnd(_) => {}
                }
            }
            if half_edges.len() > bounds.max_edges {
                continue;
            }
            let budget = bounds.max_edges - half_edges.len();
            for counts in multisets(pairs.len(), budget) {
                let mut edges = half_edges.clone();
                for (&c, &p) in counts.iter().zip(&pairs) {
                    edges.extend(std::iter::repeat_n(p, c));
                }
                let frag = Fragment {
                    graph: Multigraph::from_raw(m + l, edges, 0),
                    open_ends: (m..m + l).collect(),
                };
                let key = fragment_key(&frag)?;
                found.entry(key).or_insert(frag);
            }
        }
    }
    Ok(found.into_values().collect())
}

/// Closed graphs (no circles) with at most `max_vertices` vertices and
/// `max_edges` edges, one per isomorphism class.
pub fn enumerate_graphs(max_vertices: usize, max_edges: usize) -> Result<Vec<Multigraph>> {
    Ok(enumerate_fragments(0, CorpusBounds::new(max_vertices, max_edges))?
        .into_iter()
        .map(|f| f.graph)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pendant() -> Fragment {
        Fragment::star(1)
    }

    #[test]
    fn validate_examples() {
        assert!(Multigraph::new(2, vec![(0, 1)], 0).is_ok());
        assert_eq!(
            Multigraph::new(1, vec![(0, 1)], 0),
            Err(Error::OutOfRangeEndpoint {
                endpoint: 1,
                vertex_count: 1
            })
        );
        let o = Multigraph::new(0, vec![], 1).unwrap();
        assert_eq!(o, Multigraph::circle());
    }

    #[test]
    fn degrees_count_loops_twice() {
        let g = Multigraph::new(2, vec![(0, 0), (0, 1)], 0).unwrap();
        assert_eq!(g.degrees(), vec![3, 1]);
    }

    #[test]
    fn disjoint_union_examples() {
        let k2 = Multigraph::complete(2);
        let u = disjoint_union(&k2, &k2);
        assert_eq!(u.vertex_count(), 4);
        assert_eq!(u.edges(), &[(0, 1), (2, 3)]);
        let c5 = Multigraph::cycle(5);
        assert_eq!(disjoint_union(&Multigraph::empty(), &c5), c5);
        let oo = disjoint_union(&Multigraph::circle(), &Multigraph::circle());
        assert_eq!(oo.circles(), 2);
        assert_eq!(oo.vertex_count(), 0);
    }

    #[test]
    fn fragment_validation() {
        // Open end with degree two.
        let g = Multigraph::new(3, vec![(0, 1), (1, 2)], 0).unwrap();
        assert!(matches!(
            Fragment::new(g.clone(), vec![1]),
            Err(Error::InvalidFragment(_))
        ));
        assert!(Fragment::new(g.clone(), vec![0, 2]).is_ok());
        assert!(matches!(
            Fragment::new(g, vec![0, 0]),
            Err(Error::InvalidFragment(_))
        ));
    }

    #[test]
    fn glue_pendants_gives_k2() {
        let g = glue(&pendant(), &pendant()).unwrap();
        assert_eq!(canonical_key(&g), canonical_key(&Multigraph::complete(2)));
        assert_eq!(g.circles(), 0);
    }

    #[test]
    fn glue_cherries_gives_double_edge() {
        let c = Fragment::star(2);
        let g = glue(&c, &c).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edges(), &[(0, 1), (0, 1)]);
    }

    #[test]
    fn glue_bare_edges_gives_circle() {
        let b = Fragment::bare_edge();
        let g = glue(&b, &b).unwrap();
        assert_eq!(g.vertex_count(), 0);
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.circles(), 1);
    }

    #[test]
    fn glue_bare_edge_with_path_closes_cycle() {
        // Bare edge glued to a 2-path fragment on one vertex: the vertex gets a loop.
        let g = glue(&Fragment::bare_edge(), &Fragment::path2(1)).unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edges(), &[(0, 0)]);
        assert_eq!(g.circles(), 0);
    }

    #[test]
    fn glue_label_mismatch() {
        assert_eq!(
            glue(&Fragment::star(1), &Fragment::star(2)),
            Err(Error::LabelCountMismatch { left: 1, right: 2 })
        );
    }

    #[test]
    fn glue_paths_gives_cycle() {
        let g = glue(&Fragment::path2(2), &Fragment::path2(3)).unwrap();
        assert_eq!(canonical_key(&g), canonical_key(&Multigraph::cycle(5)));
    }

    #[test]
    fn key_examples() {
        let k2a = Multigraph::new(2, vec![(0, 1)], 0).unwrap();
        let k2b = Multigraph::new(2, vec![(1, 0)], 0).unwrap();
        assert_eq!(canonical_key(&k2a), canonical_key(&k2b));
        let p = Multigraph::path(3);
        let q = p.relabel(&[2, 0, 1]).unwrap();
        assert_eq!(canonical_key(&p).unwrap(), canonical_key(&q).unwrap());
        // Cherry with swapped labels: swapping open ends is an automorphism here.
        let cherry = Fragment::star(2);
        let swapped = Fragment::new(cherry.graph().clone(), vec![2, 1]).unwrap();
        assert_eq!(fragment_key(&cherry), fragment_key(&swapped));
        // Labeled path 1-a-b-2 plus loop at a: swapping labels is not an automorphism.
        let g = Multigraph::new(4, vec![(0, 1), (0, 2), (1, 3), (0, 0)], 0).unwrap();
        let f1 = Fragment::new(g.clone(), vec![2, 3]).unwrap();
        let f2 = Fragment::new(g, vec![3, 2]).unwrap();
        assert_ne!(fragment_key(&f1).unwrap(), fragment_key(&f2).unwrap());
    }

    #[test]
    fn key_too_large() {
        assert!(matches!(
            canonical_key(&Multigraph::path(9)),
            Err(Error::TooLarge(_))
        ));
    }

    #[test]
    fn enumeration_examples() {
        let one = enumerate_fragments(1, CorpusBounds::new(1, 1)).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(fragment_key(&one[0]), fragment_key(&Fragment::star(1)));

        let bare = enumerate_fragments(2, CorpusBounds::new(0, 1).with_bare_edges(true)).unwrap();
        assert_eq!(bare.len(), 1);
        assert_eq!(fragment_key(&bare[0]), fragment_key(&Fragment::bare_edge()));

        // ∅, K₁, K₁+loop, K₁⊔K₁, K₂ and (K₁+loop)⊔K₁.
        let closed = enumerate_graphs(2, 1).unwrap();
        let mut expected: Vec<CanonicalKey> = [
            Multigraph::empty(),
            Multigraph::new(1, vec![], 0).unwrap(),
            Multigraph::cycle(1),
            Multigraph::new(2, vec![], 0).unwrap(),
            Multigraph::complete(2),
            Multigraph::new(2, vec![(0, 0)], 0).unwrap(),
        ]
        .iter()
        .map(|g| fragment_key(&Fragment::closed(g.clone()).unwrap()).unwrap())
        .collect();
        expected.sort();
        let got: Vec<CanonicalKey> = closed
            .iter()
            .map(|g| fragment_key(&Fragment::closed(g.clone()).unwrap()).unwrap())
            .collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn enumeration_without_bare_edges_is_circle_free() {
        let frags = enumerate_fragments(2, CorpusBounds::new(2, 4)).unwrap();
        for f in &frags {
            for h in &frags {
                assert_eq!(glue(f, h).unwrap().circles(), 0);
            }
        }
    }

    #[test]
    fn next_permutation_counts() {
        let mut p = vec![0, 1, 2, 3];
        let mut count = 1;
        while next_permutation(&mut p) {
            count += 1;
        }
        assert_eq!(count, 24);
    }
}
