//! Source problems of the hardness gadgets, with validation and exact
//! brute-force solvers.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest source the brute-force solvers accept (edges or variables).
pub const MAX_SOURCE_SIZE: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ReductionSource {
    /// A properly edge-colored path; every listed color is used.
    RainbowPath {
        vertices: Vec<String>,
        colors: Vec<String>,
        /// `[u, v, color]`
        edges: Vec<[String; 3]>,
        k: usize,
    },
    /// A bipartite graph with sides `u` and `v`; edges are `[u, v]`.
    Mmm {
        u: Vec<String>,
        v: Vec<String>,
        edges: Vec<[String; 2]>,
        k: usize,
    },
    /// Clauses of exactly three literals; `-x` negates `x`. Every variable
    /// occurs exactly twice positively and twice negatively.
    Sat3b2 {
        variables: Vec<String>,
        clauses: Vec<Vec<String>>,
    },
}

/// A validated path with colored edges, in path order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RainbowPath {
    pub vertices: Vec<String>,
    pub colors: Vec<String>,
    /// Edge `j` joins `vertices[j]` and `vertices[j+1]` and has color
    /// `edge_colors[j]`.
    pub edge_colors: Vec<usize>,
    pub k: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bipartite {
    pub u: Vec<String>,
    pub v: Vec<String>,
    /// `(index in u, index in v)`, deduplicated, sorted.
    pub edges: Vec<(usize, usize)>,
    pub k: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub var: usize,
    pub positive: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Formula {
    pub variables: Vec<String>,
    pub clauses: Vec<[Literal; 3]>,
}

fn index_names(names: &[String], what: &str) -> Result<HashMap<String, usize>> {
    let mut map = HashMap::new();
    for (i, n) in names.iter().enumerate() {
        if map.insert(n.clone(), i).is_some() {
            return Err(Error::InvalidSource(format!("duplicate {what} `{n}`")));
        }
    }
    Ok(map)
}

impl ReductionSource {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let src: ReductionSource = serde_json::from_str(s)?;
        src.validate()?;
        Ok(src)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ReductionSource::RainbowPath { .. } => self.rainbow().map(|_| ()),
            ReductionSource::Mmm { .. } => self.bipartite().map(|_| ()),
            ReductionSource::Sat3b2 { .. } => self.formula().map(|_| ()),
        }
    }

    pub fn rainbow(&self) -> Result<RainbowPath> {
        let ReductionSource::RainbowPath {
            vertices,
            colors,
            edges,
            k,
        } = self
        else {
            return Err(Error::InvalidSource("not a rainbow path source".into()));
        };
        let vid = index_names(vertices, "vertex")?;
        let cid = index_names(colors, "color")?;
        if vertices.is_empty() {
            return Err(Error::InvalidSource("the path has no vertices".into()));
        }
        if edges.len() + 1 != vertices.len() {
            return Err(Error::InvalidSource(format!(
                "a path on {} vertices has {} edges, got {}",
                vertices.len(),
                vertices.len() - 1,
                edges.len()
            )));
        }
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); vertices.len()];
        for [a, b, c] in edges {
            let lookup = |x: &String| {
                vid.get(x)
                    .copied()
                    .ok_or_else(|| Error::InvalidSource(format!("unknown vertex `{x}`")))
            };
            let (a, b) = (lookup(a)?, lookup(b)?);
            let c = *cid
                .get(c)
                .ok_or_else(|| Error::InvalidSource(format!("unknown color `{c}`")))?;
            if a == b {
                return Err(Error::InvalidSource("self-loop".into()));
            }
            adj[a].push((b, c));
            adj[b].push((a, c));
        }
        if adj.iter().any(|l| l.len() > 2) {
            return Err(Error::InvalidSource("the graph is not a path".into()));
        }
        // walk from the first endpoint in listing order
        let start = (0..vertices.len()).find(|&v| adj[v].len() <= 1).unwrap();
        let mut order = vec![start];
        let mut edge_colors = Vec::new();
        let mut prev = usize::MAX;
        let mut cur = start;
        while let Some(&(next, c)) = adj[cur].iter().find(|&&(w, _)| w != prev) {
            if order.contains(&next) {
                break;
            }
            edge_colors.push(c);
            order.push(next);
            prev = cur;
            cur = next;
        }
        if order.len() != vertices.len() {
            return Err(Error::InvalidSource("the graph is not a path".into()));
        }
        if edge_colors.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidSource(
                "the edge coloring is not proper".into(),
            ));
        }
        let used: BTreeSet<usize> = edge_colors.iter().copied().collect();
        if used.len() != colors.len() {
            return Err(Error::InvalidSource("some color is used by no edge".into()));
        }
        if *k > colors.len() {
            return Err(Error::InvalidSource(format!(
                "k = {k} exceeds the number of colors {}",
                colors.len()
            )));
        }
        Ok(RainbowPath {
            vertices: order.iter().map(|&v| vertices[v].clone()).collect(),
            colors: colors.clone(),
            edge_colors,
            k: *k,
        })
    }

    pub fn bipartite(&self) -> Result<Bipartite> {
        let ReductionSource::Mmm { u, v, edges, k } = self else {
            return Err(Error::InvalidSource("not a matching source".into()));
        };
        let uid = index_names(u, "vertex")?;
        let vid = index_names(v, "vertex")?;
        if let Some(x) = u.iter().find(|x| vid.contains_key(*x)) {
            return Err(Error::InvalidSource(format!("`{x}` is on both sides")));
        }
        let mut out = BTreeSet::new();
        for [a, b] in edges {
            let e = match (uid.get(a), vid.get(b), uid.get(b), vid.get(a)) {
                (Some(&i), Some(&j), _, _) | (_, _, Some(&i), Some(&j)) => (i, j),
                _ if (uid.contains_key(a) && uid.contains_key(b))
                    || (vid.contains_key(a) && vid.contains_key(b)) =>
                {
                    return Err(Error::InvalidSource(format!(
                        "edge {a}-{b} joins one side: the graph is not bipartite"
                    )))
                }
                _ => {
                    return Err(Error::InvalidSource(format!(
                        "edge {a}-{b} has an unknown endpoint"
                    )))
                }
            };
            out.insert(e);
        }
        if *k < 1 || *k > out.len() {
            return Err(Error::InvalidSource(format!(
                "k = {k} must lie in 1..={}",
                out.len()
            )));
        }
        Ok(Bipartite {
            u: u.clone(),
            v: v.clone(),
            edges: out.into_iter().collect(),
            k: *k,
        })
    }

    pub fn formula(&self) -> Result<Formula> {
        let ReductionSource::Sat3b2 { variables, clauses } = self else {
            return Err(Error::InvalidSource("not a formula source".into()));
        };
        let vid = index_names(variables, "variable")?;
        let mut parsed = Vec::with_capacity(clauses.len());
        let mut pos = vec![0; variables.len()];
        let mut neg = vec![0; variables.len()];
        for (ci, c) in clauses.iter().enumerate() {
            if c.len() != 3 {
                return Err(Error::InvalidSource(format!(
                    "clause {ci} has {} literals, expected 3",
                    c.len()
                )));
            }
            let mut lits = [Literal {
                var: 0,
                positive: true,
            }; 3];
            for (r, text) in c.iter().enumerate() {
                let (positive, name) = match text.strip_prefix('-') {
                    Some(rest) => (false, rest),
                    None => (true, text.as_str()),
                };
                let var = *vid
                    .get(name)
                    .ok_or_else(|| Error::InvalidSource(format!("unknown variable `{name}`")))?;
                if positive {
                    pos[var] += 1;
                } else {
                    neg[var] += 1;
                }
                lits[r] = Literal { var, positive };
            }
            parsed.push(lits);
        }
        for (i, name) in variables.iter().enumerate() {
            if pos[i] != 2 || neg[i] != 2 {
                return Err(Error::InvalidSource(format!(
                    "variable `{name}` occurs {} times positively and {} times negatively, expected 2 and 2",
                    pos[i], neg[i]
                )));
            }
        }
        Ok(Formula {
            variables: variables.clone(),
            clauses: parsed,
        })
    }
}

/// Exact answer of a source instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceAnswer {
    MaxRainbowMatching(usize),
    MinMaximalMatching(usize),
    Satisfiable(bool),
}

impl SourceAnswer {
    /// Whether the source is a yes-instance of its decision problem.
    pub fn is_yes(&self, src: &ReductionSource) -> bool {
        match (self, src) {
            (SourceAnswer::MaxRainbowMatching(m), ReductionSource::RainbowPath { k, .. }) => m >= k,
            (SourceAnswer::MinMaximalMatching(m), ReductionSource::Mmm { k, .. }) => m <= k,
            (SourceAnswer::Satisfiable(s), ReductionSource::Sat3b2 { .. }) => *s,
            _ => false,
        }
    }
}

fn check_size(what: &'static str, size: usize) -> Result<()> {
    if size > MAX_SOURCE_SIZE {
        return Err(Error::BoundExceeded {
            what,
            size,
            bound: MAX_SOURCE_SIZE,
        });
    }
    Ok(())
}

/// Largest rainbow matching of a path, by exhaustive search.
pub fn max_rainbow_matching(p: &RainbowPath) -> Result<usize> {
    let m = p.edge_colors.len();
    check_size("rainbow matching search (edges)", m)?;
    let mut best = 0;
    for set in 0u32..(1 << m) {
        let adjacent = set & (set >> 1) != 0;
        let mut colors = 0u64;
        let mut ok = !adjacent;
        for j in 0..m {
            if ok && set & (1 << j) != 0 {
                let c = 1u64 << p.edge_colors[j];
                ok = colors & c == 0;
                colors |= c;
            }
        }
        if ok {
            best = best.max(set.count_ones() as usize);
        }
    }
    Ok(best)
}

/// Smallest maximal matching, by exhaustive search. Also returns one.
pub fn min_maximal_matching(g: &Bipartite) -> Result<(usize, Vec<(usize, usize)>)> {
    let m = g.edges.len();
    check_size("maximal matching search (edges)", m)?;
    let mut best: Option<(usize, u32)> = None;
    for set in 0u32..(1 << m) {
        let size = set.count_ones() as usize;
        if best.is_some_and(|(b, _)| size >= b) {
            continue;
        }
        let mut used_u = vec![false; g.u.len()];
        let mut used_v = vec![false; g.v.len()];
        let mut matching = true;
        for (j, &(a, b)) in g.edges.iter().enumerate() {
            if set & (1 << j) != 0 {
                if used_u[a] || used_v[b] {
                    matching = false;
                }
                used_u[a] = true;
                used_v[b] = true;
            }
        }
        let maximal = g.edges.iter().all(|&(a, b)| used_u[a] || used_v[b]);
        if matching && maximal {
            best = Some((size, set));
        }
    }
    let (size, set) = best.expect("some matching is maximal");
    let edges = (0..m)
        .filter(|j| set & (1 << j) != 0)
        .map(|j| g.edges[j])
        .collect();
    Ok((size, edges))
}

/// First satisfying assignment in binary counting order (variable 0 is the
/// lowest bit), if any.
pub fn satisfying_assignment(f: &Formula) -> Result<Option<Vec<bool>>> {
    let n = f.variables.len();
    check_size("satisfiability search (variables)", n)?;
    for bits in 0u32..(1 << n) {
        let value = |l: &Literal| (bits >> l.var & 1 == 1) == l.positive;
        if f.clauses.iter().all(|c| c.iter().any(value)) {
            return Ok(Some((0..n).map(|i| bits >> i & 1 == 1).collect()));
        }
    }
    Ok(None)
}

pub fn solve_source(src: &ReductionSource) -> Result<SourceAnswer> {
    match src {
        ReductionSource::RainbowPath { .. } => Ok(SourceAnswer::MaxRainbowMatching(
            max_rainbow_matching(&src.rainbow()?)?,
        )),
        ReductionSource::Mmm { .. } => Ok(SourceAnswer::MinMaximalMatching(
            min_maximal_matching(&src.bipartite()?)?.0,
        )),
        ReductionSource::Sat3b2 { .. } => Ok(SourceAnswer::Satisfiable(
            satisfying_assignment(&src.formula()?)?.is_some(),
        )),
    }
}
