//! The Lie graph complex `F⟨g,n⟩`: connected graphs with `n` numbered legs whose vertices carry
//! C∞ generators, with the differential induced by the one of C∞.
//!
//! A vertex with half-edge set `H` carries an element of a space `D(H)` of degree `|H| − 3`,
//! presented by lists of `H`. The list `(h_0; h_1, …, h_k)` stands for `m_k` with output `h_0`.
//! Lists obey
//!
//! * rotation: `(h_0, …, h_k) = (−1)^k (h_1, …, h_k, h_0)`,
//! * signed shuffles: `Σ sgn(σ) (h_0; σ-shuffle of u and v) = 0` for every split `uv` of the inputs,
//!
//! so `D(H)` has dimension `(|H| − 2)!`, with basis the lists starting with the two smallest
//! half-edges. Edges are even, reordering vertices costs the Koszul sign of their degrees, and
//! graph automorphisms act through these rules; classes they reverse vanish.
//!
//! The differential splits one vertex along two complementary cyclic arcs `A`, `B` of its list
//! into `(A…, e) ⊗ (e', B…)` with sign `(−1)^{|A|}`, so that
//! `∂ m_3 = m_2 ∘_2 m_2 − m_2 ∘_1 m_2`.

use crate::free::{perm_sign, shuffles};
use crate::infinity::permutations;
use crate::linalg::{rank_of, Reducer};
use crate::q::{q, Lin, Vector, Q};
use crate::Error;
use num_traits::One;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Port {
    Leg(usize),
    /// Each edge label occurs exactly twice in a graph.
    Edge(usize),
}

impl fmt::Display for Port {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Port::Leg(l) => write!(f, "{}", l),
            Port::Edge(e) => write!(f, "e{}", e),
        }
    }
}

/// A graph with one list per vertex, output first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecoratedGraph {
    pub vertices: Vec<Vec<Port>>,
}

impl DecoratedGraph {
    /// The generator `m_k` as a one-vertex graph in `F⟨0,k+1⟩`.
    pub fn corolla(k: usize) -> Self {
        DecoratedGraph {
            vertices: vec![(0..=k).map(Port::Leg).collect()],
        }
    }

    pub fn degree(&self) -> i64 {
        self.vertices.iter().map(|v| v.len() as i64 - 3).sum()
    }

    /// `(legs, edges)` after validation.
    pub fn counts(&self) -> Result<(usize, usize), Error> {
        Raw::from_graph(self).map(|r| (r.legs(), r.edges()))
    }

    pub fn genus(&self) -> Result<usize, Error> {
        let (_, e) = self.counts()?;
        Ok(e + 1 - self.vertices.len())
    }
}

impl fmt::Display for DecoratedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .vertices
            .iter()
            .map(|v| {
                let ins: Vec<String> = v[1..].iter().map(|p| p.to_string()).collect();
                format!("m{}({};{})", v.len() - 1, v[0], ins.join(","))
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Half-edge level data: `lists[v]` holds half-edge ids, `partner` pairs edges, `leg` labels legs.
#[derive(Clone, Debug)]
struct Raw {
    lists: Vec<Vec<usize>>,
    partner: Vec<Option<usize>>,
    leg: Vec<Option<usize>>,
}

impl Raw {
    fn from_graph(g: &DecoratedGraph) -> Result<Raw, Error> {
        let mut lists = Vec::new();
        let mut partner = Vec::new();
        let mut leg = Vec::new();
        let mut open: BTreeMap<usize, usize> = BTreeMap::new();
        let mut seen_edges = BTreeSet::new();
        for v in &g.vertices {
            if v.len() < 3 {
                return Err(Error::Domain(
                    "every vertex needs at least three half-edges".into(),
                ));
            }
            let mut list = Vec::new();
            for p in v {
                let h = partner.len();
                partner.push(None);
                leg.push(None);
                match *p {
                    Port::Leg(l) => leg[h] = Some(l),
                    Port::Edge(e) => {
                        if let Some(o) = open.remove(&e) {
                            partner[h] = Some(o);
                            partner[o] = Some(h);
                        } else if !seen_edges.insert(e) {
                            return Err(Error::Domain(format!(
                                "edge e{} occurs more than twice",
                                e
                            )));
                        } else {
                            open.insert(e, h);
                        }
                    }
                }
                list.push(h);
            }
            lists.push(list);
        }
        if let Some(e) = open.keys().next() {
            return Err(Error::Domain(format!("edge e{} has only one end", e)));
        }
        let mut labels: Vec<usize> = leg.iter().flatten().copied().collect();
        labels.sort();
        if labels.iter().enumerate().any(|(i, &l)| i != l) {
            return Err(Error::Domain(
                "legs must be labelled 0..n−1, each once".into(),
            ));
        }
        let r = Raw {
            lists,
            partner,
            leg,
        };
        if !r.connected() {
            return Err(Error::Domain("graph is not connected".into()));
        }
        Ok(r)
    }

    fn to_graph(&self) -> DecoratedGraph {
        let mut names: BTreeMap<usize, usize> = BTreeMap::new();
        let vertices = self
            .lists
            .iter()
            .map(|l| {
                l.iter()
                    .map(|&h| match self.leg[h] {
                        Some(x) => Port::Leg(x),
                        None => {
                            let key = h.min(self.partner[h].unwrap());
                            let next = names.len();
                            Port::Edge(*names.entry(key).or_insert(next))
                        }
                    })
                    .collect()
            })
            .collect();
        DecoratedGraph { vertices }
    }

    fn legs(&self) -> usize {
        self.leg.iter().flatten().count()
    }

    fn edges(&self) -> usize {
        self.partner.iter().flatten().count() / 2
    }

    fn vertex_of(&self) -> Vec<usize> {
        let mut v = vec![0; self.partner.len()];
        for (i, l) in self.lists.iter().enumerate() {
            for &h in l {
                v[h] = i;
            }
        }
        v
    }

    fn connected(&self) -> bool {
        let vo = self.vertex_of();
        let mut seen = vec![false; self.lists.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &h in &self.lists[v] {
                if let Some(o) = self.partner[h] {
                    let w = vo[o];
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        seen.iter().all(|&s| s)
    }
}

/// An unlabelled graph in canonical vertex order: `legs[l]` is the vertex of leg `l`, `adj`
/// counts edges (loops on the diagonal).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Shape {
    pub legs: Vec<usize>,
    pub adj: Vec<Vec<usize>>,
}

impl Shape {
    pub fn vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn edges(&self) -> usize {
        (0..self.vertices())
            .map(|i| (i..self.vertices()).map(|j| self.adj[i][j]).sum::<usize>())
            .sum()
    }

    pub fn valence(&self, v: usize) -> usize {
        self.legs.iter().filter(|&&x| x == v).count()
            + self.adj[v].iter().sum::<usize>()
            + self.adj[v][v]
    }

    pub fn genus(&self) -> usize {
        self.edges() + 1 - self.vertices()
    }

    pub fn degree(&self) -> i64 {
        (0..self.vertices())
            .map(|v| self.valence(v) as i64 - 3)
            .sum()
    }

    /// Canonical half-edges: legs first, then both ends of each edge in `(i ≤ j)` order.
    fn layout(&self) -> Raw {
        let v = self.vertices();
        let mut lists = vec![Vec::new(); v];
        let mut partner = Vec::new();
        let mut leg = Vec::new();
        for (l, &x) in self.legs.iter().enumerate() {
            lists[x].push(l);
            partner.push(None);
            leg.push(Some(l));
        }
        for i in 0..v {
            for j in i..v {
                for _ in 0..self.adj[i][j] {
                    let c = partner.len();
                    partner.push(Some(c + 1));
                    partner.push(Some(c));
                    leg.push(None);
                    leg.push(None);
                    lists[i].push(c);
                    lists[j].push(c + 1);
                }
            }
        }
        Raw {
            lists,
            partner,
            leg,
        }
    }
}

struct Canon {
    shape: Shape,
    /// raw half-edge → canonical half-edge
    phi: Vec<usize>,
    /// raw vertex → canonical vertex
    pi: Vec<usize>,
}

fn key_for(raw: &Raw, vo: &[usize], pi: &[usize]) -> Shape {
    let v = raw.lists.len();
    let mut legs = vec![0; raw.legs()];
    let mut adj = vec![vec![0; v]; v];
    for h in 0..raw.partner.len() {
        if let Some(l) = raw.leg[h] {
            legs[l] = pi[vo[h]];
        }
        if let Some(o) = raw.partner[h] {
            if h < o {
                let (a, b) = (pi[vo[h]], pi[vo[o]]);
                adj[a][b] += 1;
                if a != b {
                    adj[b][a] += 1;
                }
            }
        }
    }
    Shape { legs, adj }
}

/// Every vertex order (as raw vertex → position) realising the minimal key.
fn minimal_orders(raw: &Raw) -> (Shape, Vec<Vec<usize>>) {
    let vo = raw.vertex_of();
    let v = raw.lists.len();
    let inv: Vec<(usize, Vec<usize>, usize)> = (0..v)
        .map(|i| {
            let mut legs: Vec<usize> = raw.lists[i].iter().filter_map(|&h| raw.leg[h]).collect();
            legs.sort();
            let loops = raw.lists[i]
                .iter()
                .filter(|&&h| raw.partner[h].map(|o| vo[o] == i).unwrap_or(false))
                .count();
            (raw.lists[i].len(), legs, loops)
        })
        .collect();
    let mut sorted: Vec<usize> = (0..v).collect();
    sorted.sort_by(|a, b| inv[*a].cmp(&inv[*b]));
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &i in &sorted {
        match classes.last_mut() {
            Some(c) if inv[c[0]] == inv[i] => c.push(i),
            _ => classes.push(vec![i]),
        }
    }
    let class_perms: Vec<Vec<Vec<usize>>> = classes.iter().map(|c| permutations(c.len())).collect();
    let mut best: Option<Shape> = None;
    let mut orders = Vec::new();
    let mut idx = vec![0; classes.len()];
    loop {
        let mut pi = vec![0; v];
        let mut pos = 0;
        for (c, class) in classes.iter().enumerate() {
            for &k in &class_perms[c][idx[c]] {
                pi[class[k]] = pos;
                pos += 1;
            }
        }
        let key = key_for(raw, &vo, &pi);
        match &best {
            Some(b) if key > *b => {}
            Some(b) if key == *b => orders.push(pi),
            _ => {
                best = Some(key);
                orders = vec![pi];
            }
        }
        let mut c = 0;
        loop {
            if c == classes.len() {
                return (best.unwrap(), orders);
            }
            idx[c] += 1;
            if idx[c] < class_perms[c].len() {
                break;
            }
            idx[c] = 0;
            c += 1;
        }
    }
}

/// Half-edge map onto the canonical layout for a given vertex order.
fn half_edge_map(raw: &Raw, shape: &Shape, pi: &[usize]) -> Vec<usize> {
    let vo = raw.vertex_of();
    let mut phi = vec![usize::MAX; raw.partner.len()];
    let mut bundles: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
    for h in 0..raw.partner.len() {
        if let Some(l) = raw.leg[h] {
            phi[h] = l;
        }
        if let Some(o) = raw.partner[h] {
            if h < o {
                let (a, b) = (pi[vo[h]], pi[vo[o]]);
                if a <= b {
                    bundles.entry((a, b)).or_default().push((h, o));
                } else {
                    bundles.entry((b, a)).or_default().push((o, h));
                }
            }
        }
    }
    let mut c = shape.legs.len();
    let v = shape.vertices();
    for i in 0..v {
        for j in i..v {
            let b = bundles.remove(&(i, j)).unwrap_or_default();
            assert_eq!(b.len(), shape.adj[i][j]);
            for (h, o) in b {
                phi[h] = c;
                phi[o] = c + 1;
                c += 2;
            }
        }
    }
    phi
}

fn canonicalize(raw: &Raw) -> Canon {
    let (shape, orders) = minimal_orders(raw);
    let pi = orders[0].clone();
    let phi = half_edge_map(raw, &shape, &pi);
    Canon { shape, phi, pi }
}

/// Normal forms in `D` for lists of `0..n`.
struct DecTable {
    n: usize,
    std: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    red: Reducer<(bool, Vec<usize>)>,
    cache: HashMap<Vec<usize>, Lin<usize>>,
}

impl DecTable {
    fn new(n: usize) -> Self {
        let k = n - 1;
        let mut red = Reducer::new();
        let key = |w: &[usize]| (w[0] == 1, w.to_vec());
        let mut std = Vec::new();
        for p in permutations(k) {
            let w: Vec<usize> = p.iter().map(|x| x + 1).collect();
            if w[0] == 1 {
                let mut l = vec![0];
                l.extend(&w);
                std.push(l);
            }
            for split in 1..k {
                let mut rel: Lin<(bool, Vec<usize>)> = Lin::zero();
                for (perm, sg) in shuffles(split as i64, (k - split) as i64).unwrap().elements {
                    let mut x = vec![0; k];
                    for (i, &pi) in perm.iter().enumerate() {
                        x[pi] = w[i];
                    }
                    rel.add_term(key(&x), q(sg as i64));
                }
                red.insert(&rel);
            }
        }
        std.sort();
        let index = std
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i))
            .collect();
        let t = DecTable {
            n,
            std,
            index,
            red,
            cache: HashMap::new(),
        };
        assert_eq!(t.red.rank() + t.std.len(), (1..=k).product::<usize>());
        t
    }

    fn dim(&self) -> usize {
        self.std.len()
    }

    /// Normal form of a list of `0..n`.
    fn nf(&mut self, list: &[usize]) -> Lin<usize> {
        if let Some(v) = self.cache.get(list) {
            return v.clone();
        }
        let n = self.n;
        let r = list.iter().position(|&x| x == 0).unwrap();
        let mut rot: Vec<usize> = list[r..].to_vec();
        rot.extend(&list[..r]);
        let sg = if (n - 1) * r % 2 == 1 {
            -Q::one()
        } else {
            Q::one()
        };
        let (rem, _) = self
            .red
            .reduce(&Lin::basis((rot[1] == 1, rot[1..].to_vec())));
        let mut out = Lin::zero();
        for ((standard, w), c) in rem.iter() {
            assert!(*standard);
            let mut l = vec![0];
            l.extend(w);
            out.add_term(self.index[&l], c * &sg);
        }
        self.cache.insert(list.to_vec(), out.clone());
        out
    }
}

/// A basis element of `F⟨g,n⟩`: a canonical shape and one standard list per vertex.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GraphKey {
    pub shape: Shape,
    pub decoration: Vec<usize>,
}

pub type GraphChain = Lin<GraphKey>;

struct ShapeData {
    layout: Raw,
    sets: Vec<Vec<usize>>,
    reducer: Reducer<Vec<usize>>,
    basis: Vec<Vec<usize>>,
}

/// Homology of one `F⟨g,n⟩`, indexed by degree `0..=2g−3+n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphHomology {
    pub genus: usize,
    pub legs: usize,
    pub shapes: Vec<usize>,
    pub dims: Vec<usize>,
    /// `ranks[d]` is the rank of `∂: F_d → F_{d−1}`.
    pub ranks: Vec<usize>,
    pub betti: Vec<usize>,
    pub d_squared_zero: bool,
}

impl GraphHomology {
    pub fn euler_chains(&self) -> i64 {
        self.dims
            .iter()
            .enumerate()
            .map(|(d, &x)| if d % 2 == 0 { x as i64 } else { -(x as i64) })
            .sum()
    }

    pub fn euler_homology(&self) -> i64 {
        self.betti
            .iter()
            .enumerate()
            .map(|(d, &x)| if d % 2 == 0 { x as i64 } else { -(x as i64) })
            .sum()
    }

    pub fn render(&self) -> String {
        let mut s = format!(
            "F<{},{}>\n degree  shapes  dim  rank  H\n",
            self.genus, self.legs
        );
        for d in 0..self.dims.len() {
            s += &format!(
                " {:>6}  {:>6}  {:>3}  {:>4}  {}\n",
                d, self.shapes[d], self.dims[d], self.ranks[d], self.betti[d]
            );
        }
        s += &format!(
            " euler characteristic {} (chains) = {} (homology)",
            self.euler_chains(),
            self.euler_homology()
        );
        s
    }
}

/// `F^d⟨g,n⟩ = s^{2d(1−g)} F⟨g,n⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Regraded {
    pub genus: usize,
    pub legs: usize,
    pub shift: i64,
    pub dims: BTreeMap<i64, usize>,
    pub betti: BTreeMap<i64, usize>,
}

pub fn regrade(d: i64, h: &GraphHomology) -> Regraded {
    let shift = 2 * d * (1 - h.genus as i64);
    let re = |v: &[usize]| {
        v.iter()
            .enumerate()
            .map(|(k, &x)| (k as i64 + shift, x))
            .collect()
    };
    Regraded {
        genus: h.genus,
        legs: h.legs,
        shift,
        dims: re(&h.dims),
        betti: re(&h.betti),
    }
}

/// Caches decoration tables and shape data; all graph computations go through it.
#[derive(Default)]
pub struct GraphComplex {
    dec: HashMap<usize, DecTable>,
    shapes: HashMap<Shape, ShapeData>,
    families: HashMap<(usize, usize), Vec<Vec<Shape>>>,
}

fn split_sign(p: usize) -> Q {
    if p % 2 == 1 {
        -Q::one()
    } else {
        Q::one()
    }
}

impl GraphComplex {
    pub fn new() -> Self {
        Self::default()
    }

    /// Dimension of `D(H)` for `|H| = n`.
    pub fn decoration_dim(&mut self, n: usize) -> usize {
        self.table(n).dim()
    }

    fn table(&mut self, n: usize) -> &mut DecTable {
        self.dec.entry(n).or_insert_with(|| DecTable::new(n))
    }

    /// Normal form of per-vertex lists, vertex `v` living on the sorted half-edge set `sets[v]`.
    fn lists_nf(&mut self, lists: &[Vec<usize>], sets: &[Vec<usize>]) -> Lin<Vec<usize>> {
        let mut acc: Lin<Vec<usize>> = Lin::basis(vec![]);
        for (l, set) in lists.iter().zip(sets) {
            let local: Vec<usize> = l.iter().map(|h| set.binary_search(h).unwrap()).collect();
            let v = self.table(l.len()).nf(&local);
            let mut next = Lin::zero();
            for (t, c) in acc.iter() {
                for (i, d) in v.iter() {
                    let mut t2 = t.clone();
                    t2.push(*i);
                    next.add_term(t2, c * d);
                }
            }
            acc = next;
            if acc.is_zero() {
                break;
            }
        }
        acc
    }

    /// Move lists along `(phi, pi)` and normalise on the target sets.
    fn transport(
        &mut self,
        lists: &[Vec<usize>],
        phi: &[usize],
        pi: &[usize],
        sets: &[Vec<usize>],
    ) -> Lin<Vec<usize>> {
        let v = lists.len();
        let mut moved = vec![Vec::new(); v];
        for (i, l) in lists.iter().enumerate() {
            moved[pi[i]] = l.iter().map(|&h| phi[h]).collect();
        }
        let odd: Vec<usize> = (0..v)
            .filter(|&i| lists[i].len().is_multiple_of(2))
            .map(|i| pi[i])
            .collect();
        let sg = if perm_sign(&odd) < 0 {
            -Q::one()
        } else {
            Q::one()
        };
        self.lists_nf(&moved, sets).scaled(&sg)
    }

    fn shape_data(&mut self, shape: &Shape) -> &ShapeData {
        if !self.shapes.contains_key(shape) {
            let d = self.build_shape(shape);
            self.shapes.insert(shape.clone(), d);
        }
        &self.shapes[shape]
    }

    fn build_shape(&mut self, shape: &Shape) -> ShapeData {
        let layout = shape.layout();
        let sets: Vec<Vec<usize>> = layout
            .lists
            .iter()
            .map(|l| {
                let mut s = l.clone();
                s.sort();
                s
            })
            .collect();
        let dims: Vec<usize> = sets.iter().map(|s| self.decoration_dim(s.len())).collect();
        let mut tuples: Vec<Vec<usize>> = vec![vec![]];
        for &d in &dims {
            tuples = tuples
                .iter()
                .flat_map(|t| (0..d).map(move |i| [t.clone(), vec![i]].concat()))
                .collect();
        }
        let v = shape.vertices();
        let mut gens: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
        let (_, orders) = minimal_orders(&layout);
        for pi in orders {
            let phi = half_edge_map(&layout, shape, &pi);
            gens.push((phi, pi));
        }
        let id: Vec<usize> = (0..v).collect();
        let mut c = shape.legs.len();
        for i in 0..v {
            for j in i..v {
                for t in 0..shape.adj[i][j] {
                    let mut phi: Vec<usize> = (0..layout.partner.len()).collect();
                    if i == j {
                        phi.swap(c, c + 1);
                        gens.push((phi.clone(), id.clone()));
                        phi.swap(c, c + 1);
                    }
                    if t + 1 < shape.adj[i][j] {
                        phi.swap(c, c + 2);
                        phi.swap(c + 1, c + 3);
                        gens.push((phi, id.clone()));
                    }
                    c += 2;
                }
            }
        }
        let mut reducer = Reducer::new();
        for b in &tuples {
            let lists = self.std_lists(b, &sets);
            for (phi, pi) in &gens {
                let mut rel = self.transport(&lists, phi, pi, &sets);
                rel.add_term(b.clone(), -Q::one());
                reducer.insert(&rel);
            }
        }
        let pivots: BTreeSet<Vec<usize>> = reducer.leading_keys().into_iter().collect();
        let basis = tuples.into_iter().filter(|t| !pivots.contains(t)).collect();
        ShapeData {
            layout,
            sets,
            reducer,
            basis,
        }
    }

    fn std_lists(&mut self, tuple: &[usize], sets: &[Vec<usize>]) -> Vec<Vec<usize>> {
        tuple
            .iter()
            .zip(sets)
            .map(|(&i, set)| {
                let local = self.table(set.len()).std[i].clone();
                local.iter().map(|&x| set[x]).collect()
            })
            .collect()
    }

    fn representative_raw(&mut self, key: &GraphKey) -> Raw {
        let (layout, sets) = {
            let d = self.shape_data(&key.shape);
            (d.layout.clone(), d.sets.clone())
        };
        let lists = self.std_lists(&key.decoration, &sets);
        Raw { lists, ..layout }
    }

    /// A graph realising a basis element.
    pub fn representative(&mut self, key: &GraphKey) -> DecoratedGraph {
        self.representative_raw(key).to_graph()
    }

    pub fn render_key(&mut self, key: &GraphKey) -> String {
        self.representative(key).to_string()
    }

    pub fn render_chain(&mut self, c: &GraphChain) -> String {
        if c.is_zero() {
            return "0".into();
        }
        let terms: Vec<(String, Q)> = c
            .iter()
            .map(|(k, x)| (format!("[{}]", self.render_key(&k.clone())), x.clone()))
            .collect();
        crate::dictionary::fmt_combination(&terms)
    }

    fn normalize_raw(&mut self, raw: &Raw) -> GraphChain {
        let canon = canonicalize(raw);
        let sets = self.shape_data(&canon.shape).sets.clone();
        let v = self.transport(&raw.lists, &canon.phi, &canon.pi, &sets);
        let (rem, _) = self.shapes[&canon.shape].reducer.reduce(&v);
        rem.map_keys(|t| {
            Some((
                GraphKey {
                    shape: canon.shape.clone(),
                    decoration: t.clone(),
                },
                Q::one(),
            ))
        })
    }

    /// The class of a decorated graph in the canonical basis.
    pub fn normalize(&mut self, g: &DecoratedGraph) -> Result<GraphChain, Error> {
        let raw = Raw::from_graph(g)?;
        Ok(self.normalize_raw(&raw))
    }

    fn boundary_raw(&mut self, raw: &Raw) -> GraphChain {
        let mut out = GraphChain::zero();
        let h = raw.partner.len();
        let mut prefix = 0usize;
        for i in 0..raw.lists.len() {
            let list = &raw.lists[i];
            let n = list.len();
            let outer_sign = if prefix % 2 == 1 { -Q::one() } else { Q::one() };
            for qlen in 2..=n.saturating_sub(2) {
                for a in 1..=n - qlen {
                    let r = a + qlen;
                    let rot_sign = if (n - 1) * (r % n) % 2 == 1 {
                        -Q::one()
                    } else {
                        Q::one()
                    };
                    let mut outer: Vec<usize> = list[r..].to_vec();
                    outer.extend(&list[..a]);
                    let p = outer.len();
                    outer.push(h);
                    let mut inner = vec![h + 1];
                    inner.extend(&list[a..r]);
                    let mut lists = raw.lists.clone();
                    lists[i] = outer;
                    lists.insert(i + 1, inner);
                    let mut partner = raw.partner.clone();
                    partner.push(Some(h + 1));
                    partner.push(Some(h));
                    let mut leg = raw.leg.clone();
                    leg.push(None);
                    leg.push(None);
                    let c = &outer_sign * &rot_sign * split_sign(p);
                    let term = self.normalize_raw(&Raw {
                        lists,
                        partner,
                        leg,
                    });
                    out.add_scaled(&term, &c);
                }
            }
            prefix += n - 3;
        }
        out
    }

    pub fn boundary(&mut self, c: &GraphChain) -> GraphChain {
        let mut out = GraphChain::zero();
        for (k, x) in c.iter() {
            let raw = self.representative_raw(k);
            out.add_scaled(&self.boundary_raw(&raw), x);
        }
        out
    }

    /// `ξ_{i,j}`: glue legs `i` and `j` into an edge and renumber the remaining legs in order.
    pub fn contract(&mut self, c: &GraphChain, i: usize, j: usize) -> Result<GraphChain, Error> {
        let mut out = GraphChain::zero();
        for (k, x) in c.iter() {
            let n = k.shape.legs.len();
            if i == j || i >= n || j >= n {
                return Err(Error::Domain(format!(
                    "cannot contract legs {} and {} of a graph with {} legs",
                    i, j, n
                )));
            }
            let mut raw = self.representative_raw(k);
            let hi = raw.leg.iter().position(|&l| l == Some(i)).unwrap();
            let hj = raw.leg.iter().position(|&l| l == Some(j)).unwrap();
            raw.partner[hi] = Some(hj);
            raw.partner[hj] = Some(hi);
            raw.leg[hi] = None;
            raw.leg[hj] = None;
            for l in raw.leg.iter_mut().flatten() {
                *l -= (*l > i) as usize + (*l > j) as usize;
            }
            out.add_scaled(&self.normalize_raw(&raw), x);
        }
        Ok(out)
    }

    /// Shapes of `F⟨g,n⟩` by degree, from the one-vertex graph down by vertex expansions.
    pub fn shapes(&mut self, g: usize, n: usize) -> Vec<Vec<Shape>> {
        if let Some(f) = self.families.get(&(g, n)) {
            return f.clone();
        }
        let top = 2 * g as i64 - 3 + n as i64;
        let mut fam: Vec<Vec<Shape>> = vec![Vec::new(); (top + 1).max(0) as usize];
        if top >= 0 {
            fam[top as usize] = vec![Shape {
                legs: vec![0; n],
                adj: vec![vec![g]],
            }];
            for d in (0..top as usize).rev() {
                let mut next = BTreeSet::new();
                for s in &fam[d + 1] {
                    let raw = s.layout();
                    let h = raw.partner.len();
                    for (i, set) in raw.lists.iter().enumerate() {
                        let m = set.len();
                        if m < 4 {
                            continue;
                        }
                        for mask in 0u32..(1 << (m - 1)) {
                            let a: Vec<usize> = (0..m - 1)
                                .filter(|b| mask >> b & 1 == 1)
                                .map(|b| set[b + 1])
                                .collect();
                            let mut outer = vec![set[0]];
                            outer.extend(&a);
                            let inner: Vec<usize> = set[1..]
                                .iter()
                                .filter(|x| !a.contains(x))
                                .copied()
                                .collect();
                            if outer.len() < 2 || inner.len() < 2 {
                                continue;
                            }
                            outer.push(h);
                            let mut inner2 = vec![h + 1];
                            inner2.extend(inner);
                            let mut lists = raw.lists.clone();
                            lists[i] = outer;
                            lists.push(inner2);
                            let mut partner = raw.partner.clone();
                            partner.push(Some(h + 1));
                            partner.push(Some(h));
                            let mut leg = raw.leg.clone();
                            leg.push(None);
                            leg.push(None);
                            next.insert(
                                minimal_orders(&Raw {
                                    lists,
                                    partner,
                                    leg,
                                })
                                .0,
                            );
                        }
                    }
                }
                fam[d] = next.into_iter().collect();
            }
        }
        self.families.insert((g, n), fam.clone());
        fam
    }

    /// Canonical basis of `F⟨g,n⟩` in degree `d`; empty outside `0..=2g−3+n`.
    pub fn basis(&mut self, g: usize, n: usize, d: i64) -> Vec<GraphKey> {
        let fam = self.shapes(g, n);
        if d < 0 || d as usize >= fam.len() {
            return vec![];
        }
        let mut out = Vec::new();
        for s in &fam[d as usize] {
            for t in self.shape_data(s).basis.clone() {
                out.push(GraphKey {
                    shape: s.clone(),
                    decoration: t,
                });
            }
        }
        out
    }

    /// Columns of `∂: F_d → F_{d−1}` in the canonical bases.
    pub fn differential(&mut self, g: usize, n: usize, d: i64) -> Vec<Vector> {
        let src = self.basis(g, n, d);
        let tgt = self.basis(g, n, d - 1);
        let index: HashMap<GraphKey, usize> =
            tgt.into_iter().enumerate().map(|(i, k)| (k, i)).collect();
        src.iter()
            .map(|k| {
                let b = self.boundary(&GraphChain::basis(k.clone()));
                b.map_keys(|t| {
                    Some((
                        *index.get(t).expect("boundary leaves the complex"),
                        Q::one(),
                    ))
                })
            })
            .collect()
    }

    pub fn homology(&mut self, g: usize, n: usize) -> Result<GraphHomology, Error> {
        if g + n == 0 {
            return Err(Error::Domain("need g + n ≥ 1".into()));
        }
        let fam = self.shapes(g, n);
        let top = fam.len();
        let dims: Vec<usize> = (0..top).map(|d| self.basis(g, n, d as i64).len()).collect();
        let diffs: Vec<Vec<Vector>> = (0..top)
            .map(|d| self.differential(g, n, d as i64))
            .collect();
        let ranks: Vec<usize> = diffs.iter().map(|c| rank_of(c)).collect();
        let betti = (0..top)
            .map(|d| dims[d] - ranks[d] - ranks.get(d + 1).copied().unwrap_or(0))
            .collect();
        let mut d_squared_zero = true;
        for d in 2..top {
            for col in &diffs[d] {
                let mut v = Vector::zero();
                for (i, c) in col.iter() {
                    v.add_scaled(&diffs[d - 1][*i], c);
                }
                d_squared_zero &= v.is_zero();
            }
        }
        Ok(GraphHomology {
            genus: g,
            legs: n,
            shapes: fam.iter().map(|f| f.len()).collect(),
            dims,
            ranks,
            betti,
            d_squared_zero,
        })
    }

    /// `F^d[0] = ⊕_g F^d⟨g,0⟩` for `g ≤ max_genus`, nonempty pieces only.
    pub fn assemble_vacuum(&mut self, d: i64, max_genus: usize) -> Result<Vec<Regraded>, Error> {
        let mut out = Vec::new();
        for g in 1..=max_genus {
            let h = self.homology(g, 0)?;
            if !h.dims.is_empty() {
                out.push(regrade(d, &h));
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decoration_dimensions() {
        let mut gc = GraphComplex::new();
        for n in 3..=7 {
            assert_eq!(gc.decoration_dim(n), (1..=n - 2).product::<usize>());
        }
    }

    #[test]
    fn small_bases() {
        let mut gc = GraphComplex::new();
        assert_eq!(
            gc.shapes(0, 3),
            vec![vec![Shape {
                legs: vec![0, 0, 0],
                adj: vec![vec![0]]
            }]]
        );
        let s = gc.shapes(0, 4);
        assert_eq!((s[0].len(), s[1].len()), (3, 1));
        assert_eq!(gc.basis(0, 4, 1).len(), 2);
    }

    #[test]
    fn displayed_boundary() {
        let mut gc = GraphComplex::new();
        let m3 = gc.normalize(&DecoratedGraph::corolla(3)).unwrap();
        let x = gc.contract(&m3, 1, 2).unwrap();
        use Port::*;
        let g1 = DecoratedGraph {
            vertices: vec![
                vec![Leg(0), Edge(0), Edge(1)],
                vec![Edge(1), Edge(0), Leg(1)],
            ],
        };
        let g2 = DecoratedGraph {
            vertices: vec![
                vec![Leg(0), Edge(1), Leg(1)],
                vec![Edge(1), Edge(0), Edge(0)],
            ],
        };
        let mut want = gc.normalize(&g1).unwrap();
        want.sub(&gc.normalize(&g2).unwrap());
        assert!(!gc.normalize(&g2).unwrap().is_zero());
        assert_eq!(gc.boundary(&x), want);
        assert_eq!(gc.contract(&m3, 2, 1).unwrap(), x);
    }

    #[test]
    fn genus_zero_and_one() {
        let mut gc = GraphComplex::new();
        for n in 3..=6 {
            let h = gc.homology(0, n).unwrap();
            assert!(h.d_squared_zero);
            let mut want = vec![0; h.dims.len()];
            want[0] = 1;
            assert_eq!(h.betti, want, "{}", h.render());
        }
        let h = gc.homology(1, 1).unwrap();
        assert_eq!(h.betti, vec![1]);
        let h = gc.homology(1, 2).unwrap();
        assert_eq!(h.betti, vec![1, 0], "{}", h.render());
        assert_eq!(h.euler_chains(), h.euler_homology());
    }

    /// `A_{1,n} = ℤ/2 ⋉ ℤ^{n−1}` with `−1` acting by inversion: `H_k = Λ^k ℚ^{n−1}` for even `k`.
    #[test]
    fn genus_one_matches_group_homology() {
        let mut gc = GraphComplex::new();
        for n in 1..=4usize {
            let h = gc.homology(1, n).unwrap();
            let want: Vec<usize> = (0..h.dims.len())
                .map(|k| {
                    if k % 2 == 0 && k < n {
                        (0..k).fold(1, |acc, i| acc * (n - 1 - i) / (i + 1))
                    } else {
                        0
                    }
                })
                .collect();
            assert_eq!(h.betti, want, "{}", h.render());
        }
        for (g, n) in [(2, 0), (2, 1), (3, 0)] {
            assert_eq!(gc.homology(g, n).unwrap().betti.iter().sum::<usize>(), 1);
        }
    }
}
