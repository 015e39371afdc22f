//! Instance generators for the six hardness gadgets and constructions of
//! the stable outcomes that a yes-instance of the source maps to.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::source::{
    min_maximal_matching, satisfying_assignment, Bipartite, Formula, Literal, RainbowPath,
    ReductionSource,
};
use crate::error::{Error, Result};
use crate::model::{Assignment, Instance, InstanceBuilder, InstanceFile, Player, Slot};
use crate::outcome::Concept;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    NsPathRainbow,
    NsStarMmm,
    NsComponents3sat,
    CorePathRainbow,
    CoreStarMmm,
    CoreComponents3sat,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::NsPathRainbow,
        Family::NsStarMmm,
        Family::NsComponents3sat,
        Family::CorePathRainbow,
        Family::CoreStarMmm,
        Family::CoreComponents3sat,
    ];

    pub fn concept(self) -> Concept {
        match self {
            Family::NsPathRainbow | Family::NsStarMmm | Family::NsComponents3sat => Concept::Nash,
            _ => Concept::Core,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::NsPathRainbow => "ns-path-rainbow",
            Family::NsStarMmm => "ns-star-mmm",
            Family::NsComponents3sat => "ns-components-3sat",
            Family::CorePathRainbow => "core-path-rainbow",
            Family::CoreStarMmm => "core-star-mmm",
            Family::CoreComponents3sat => "core-components-3sat",
        }
    }

    /// The family for a source kind and concept.
    pub fn for_source(src: &ReductionSource, concept: Concept) -> Result<Family> {
        Ok(match (src, concept) {
            (ReductionSource::RainbowPath { .. }, Concept::Nash) => Family::NsPathRainbow,
            (ReductionSource::RainbowPath { .. }, Concept::Core) => Family::CorePathRainbow,
            (ReductionSource::Mmm { .. }, Concept::Nash) => Family::NsStarMmm,
            (ReductionSource::Mmm { .. }, Concept::Core) => Family::CoreStarMmm,
            (ReductionSource::Sat3b2 { .. }, Concept::Nash) => Family::NsComponents3sat,
            (ReductionSource::Sat3b2 { .. }, Concept::Core) => Family::CoreComponents3sat,
            (_, Concept::IndividualRationality) => {
                return Err(Error::Inapplicable(
                    "the gadgets target Nash or core stability".into(),
                ))
            }
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidSource(format!("unknown family `{s}`")))
    }
}

/// A generated instance with human-readable player labels.
#[derive(Clone, Debug)]
pub struct Generated {
    pub family: Family,
    pub instance: Instance,
    pub labels: Vec<String>,
}

impl Generated {
    pub fn player(&self, label: &str) -> Player {
        self.labels
            .iter()
            .position(|l| l == label)
            .unwrap_or_else(|| panic!("no player labelled `{label}`"))
    }

    /// Instance file carrying a provenance record.
    pub fn to_file(&self, src: &ReductionSource) -> InstanceFile {
        let mut file = InstanceFile::from(&self.instance);
        file.provenance = Some(serde_json::json!({
            "family": self.family,
            "source": src,
            "players": self.labels,
        }));
        file
    }
}

// Collects players by label; builds the instance at the end.
struct Gadget {
    labels: Vec<String>,
    classes: Vec<String>,
    edges: Vec<(Player, Player)>,
    ranks: Vec<(Player, String, usize, i64)>,
}

impl Gadget {
    fn new() -> Self {
        Gadget {
            labels: Vec::new(),
            classes: Vec::new(),
            edges: Vec::new(),
            ranks: Vec::new(),
        }
    }

    fn player(&mut self, label: impl Into<String>) -> Player {
        self.labels.push(label.into());
        self.labels.len() - 1
    }

    fn class(&mut self, id: impl Into<String>) {
        self.classes.push(id.into());
    }

    fn edge(&mut self, u: Player, v: Player) {
        self.edges.push((u, v));
    }

    fn rank(&mut self, i: Player, class: &str, size: usize, r: i64) {
        self.ranks.push((i, class.to_string(), size, r));
    }

    // Listed alternatives best first; equal numbers mean ties. Ranks are
    // assigned counting down to 1.
    fn order(&mut self, i: Player, tiers: &[&[(&str, usize)]]) {
        let top = tiers.len() as i64;
        for (t, tier) in tiers.iter().enumerate() {
            for &(c, k) in tier.iter() {
                self.rank(i, c, k, top - t as i64);
            }
        }
    }

    fn finish(self, family: Family) -> Result<Generated> {
        let mut b = InstanceBuilder::new(self.labels.len());
        for c in &self.classes {
            b.add_class(c.clone(), 1);
        }
        for &(u, v) in &self.edges {
            b.add_edge(u, v);
        }
        for (i, c, k, r) in self.ranks {
            b.add_rank(i, c, k, r);
        }
        let instance = b
            .build()
            .map_err(|e| Error::InvalidSource(format!("generated instance is invalid: {e}")))?;
        Ok(Generated {
            family,
            instance,
            labels: self.labels,
        })
    }
}

fn color_class(c: &str) -> String {
    format!("c:{c}")
}

fn aux_class(c: &str) -> String {
    format!("a:{c}")
}

/// Path gadget: vertex and edge players along the source path, then
/// `q - k` garbage collectors, then one stalker pair (Nash) or one
/// empty-core triple (core) per color.
pub fn generate_from_rainbow(src: &ReductionSource, concept: Concept) -> Result<Generated> {
    let family = Family::for_source(src, concept)?;
    let p = src.rainbow()?;
    let q = p.colors.len();
    let mut g = Gadget::new();
    let colors: Vec<String> = p.colors.iter().map(|c| color_class(c)).collect();
    for c in &colors {
        g.class(c.clone());
    }
    if concept == Concept::Core {
        for c in &p.colors {
            g.class(aux_class(c));
        }
    }

    let mut last: Option<Player> = None;
    let mut chain = |g: &mut Gadget, v: Player| {
        if let Some(u) = last {
            g.edge(u, v);
        }
        last = Some(v);
    };
    for (j, name) in p.vertices.iter().enumerate() {
        let v = g.player(format!("v:{name}"));
        chain(&mut g, v);
        for e in [j.checked_sub(1), (j < p.edge_colors.len()).then_some(j)]
            .into_iter()
            .flatten()
        {
            g.rank(v, &colors[p.edge_colors[e]], 3, 1);
        }
        if j < p.edge_colors.len() {
            let e = g.player(format!("e:{j}"));
            chain(&mut g, e);
            g.rank(e, &colors[p.edge_colors[j]], 3, 1);
        }
    }
    for i in 0..q - p.k {
        let gc = g.player(format!("g:{}", i + 1));
        chain(&mut g, gc);
        for c in &colors {
            g.rank(gc, c, 1, 1);
        }
    }
    for (ci, name) in p.colors.iter().enumerate() {
        let c = colors[ci].as_str();
        match concept {
            Concept::Nash => {
                let s1 = g.player(format!("s1:{name}"));
                chain(&mut g, s1);
                let s2 = g.player(format!("s2:{name}"));
                chain(&mut g, s2);
                g.rank(s1, c, 1, 1);
                g.rank(s2, c, 2, 1);
            }
            _ => {
                let a = aux_class(name);
                let a = a.as_str();
                let t1 = g.player(format!("t1:{name}"));
                chain(&mut g, t1);
                let t2 = g.player(format!("t2:{name}"));
                chain(&mut g, t2);
                let t3 = g.player(format!("t3:{name}"));
                chain(&mut g, t3);
                g.order(t1, &[&[(c, 2)], &[(a, 3)]]);
                g.order(t2, &[&[(a, 2)], &[(c, 2)], &[(a, 3)]]);
                g.order(t3, &[&[(a, 3)], &[(c, 1)], &[(a, 2)]]);
            }
        }
    }
    g.finish(family)
}

/// Effective matching bound: sizes `|V| - k + 1` must be at least 1, and a
/// maximal matching never has more than `|V|` edges.
pub fn effective_k(b: &Bipartite) -> usize {
    b.k.min(b.v.len())
}

/// Star gadget: center, one leaf per vertex of `V`, and a stalker (Nash)
/// or two empty-core partners (core).
pub fn generate_from_mmm(src: &ReductionSource, concept: Concept) -> Result<Generated> {
    let family = Family::for_source(src, concept)?;
    let b = src.bipartite()?;
    let size = b.v.len() - effective_k(&b) + 1;
    let mut g = Gadget::new();
    let us: Vec<String> = b.u.iter().map(|u| format!("u:{u}")).collect();
    for u in &us {
        g.class(u.clone());
    }
    let center = g.player("center");
    for (j, name) in b.v.iter().enumerate() {
        let v = g.player(format!("v:{name}"));
        g.edge(center, v);
        for &(i, jj) in &b.edges {
            if jj == j {
                g.rank(v, &us[i], 1, 2);
            }
        }
        g.rank(v, "a", size, 1);
    }
    g.class("a");
    match concept {
        Concept::Nash => {
            g.class("b");
            let s = g.player("s");
            g.edge(center, s);
            g.order(center, &[&[("a", size)], &[("b", 1)]]);
            g.rank(s, "b", 2, 1);
        }
        _ => {
            g.class("x");
            g.class("y");
            let s1 = g.player("s1");
            let s2 = g.player("s2");
            g.edge(center, s1);
            g.edge(center, s2);
            g.order(s1, &[&[("y", 2)], &[("x", 3)]]);
            g.order(
                center,
                &[&[("a", size)], &[("x", 2)], &[("y", 2)], &[("x", 3)]],
            );
            g.order(s2, &[&[("x", 3)], &[("y", 1)], &[("x", 2)]]);
        }
    }
    g.finish(family)
}

/// Literal activity of every occurrence: `(clause, position) -> class`.
/// The first positive occurrence of `x` in clause order is `x1`, the second
/// `x2`, likewise for negative occurrences.
fn occurrence_classes(f: &Formula) -> Vec<[String; 3]> {
    let mut seen_pos = vec![0; f.variables.len()];
    let mut seen_neg = vec![0; f.variables.len()];
    f.clauses
        .iter()
        .map(|c| {
            c.map(|l: Literal| {
                let x = &f.variables[l.var];
                let counter = if l.positive {
                    &mut seen_pos
                } else {
                    &mut seen_neg
                };
                counter[l.var] += 1;
                literal_class(x, l.positive, counter[l.var])
            })
        })
        .collect()
}

fn literal_class(x: &str, positive: bool, occurrence: usize) -> String {
    if positive {
        format!("{x}:pos{occurrence}")
    } else {
        format!("{x}:neg{occurrence}")
    }
}

fn var_class(x: &str) -> String {
    format!("{x}:var")
}

/// Small-components gadget built from a (3,B2) formula.
pub fn generate_from_3sat(src: &ReductionSource, concept: Concept) -> Result<Generated> {
    let family = Family::for_source(src, concept)?;
    let f = src.formula()?;
    let occ = occurrence_classes(&f);
    let mut g = Gadget::new();
    for x in &f.variables {
        g.class(var_class(x));
        for positive in [true, false] {
            for o in 1..=2 {
                g.class(literal_class(x, positive, o));
            }
        }
        g.class(format!("{x}:a"));
        g.class(format!("{x}:na"));
        if concept == Concept::Core {
            g.class(format!("{x}:b"));
            g.class(format!("{x}:nb"));
        }
    }
    match concept {
        Concept::Nash => {
            for (ci, _) in f.clauses.iter().enumerate() {
                g.class(format!("clause{ci}"));
            }
            for x in &f.variables {
                let v = var_class(x);
                for (positive, a) in [(true, format!("{x}:a")), (false, format!("{x}:na"))] {
                    let l1 = literal_class(x, positive, 1);
                    let l2 = literal_class(x, positive, 2);
                    let sign = if positive { "" } else { "-" };
                    let p1 = g.player(format!("var:{sign}{x}:1"));
                    let p2 = g.player(format!("var:{sign}{x}:2"));
                    g.edge(p1, p2);
                    g.order(
                        p1,
                        &[&[(&v, 2)], &[(&v, 1)], &[(&l1, 1)], &[(&l2, 2)], &[(&a, 1)]],
                    );
                    g.order(p2, &[&[(&v, 2)], &[(&l2, 1)], &[(&l1, 2)], &[(&a, 2)]]);
                }
            }
            for (ci, lits) in occ.iter().enumerate() {
                let c = format!("clause{ci}");
                let s = g.player(format!("clause{ci}:s"));
                for (r, l) in lits.iter().enumerate() {
                    let p = g.player(format!("clause{ci}:c{}", r + 1));
                    g.edge(s, p);
                    g.order(p, &[&[(l, 1)], &[(&c, 2)]]);
                }
                g.order(
                    s,
                    &[&[(&lits[0], 2), (&lits[1], 2), (&lits[2], 2), (&c, 2)]],
                );
            }
        }
        _ => {
            for x in &f.variables {
                let v = var_class(x);
                let (x1, x2) = (literal_class(x, true, 1), literal_class(x, true, 2));
                let (n1, n2) = (literal_class(x, false, 1), literal_class(x, false, 2));
                let (a, b) = (format!("{x}:a"), format!("{x}:b"));
                let (na, nb) = (format!("{x}:na"), format!("{x}:nb"));
                let p1 = g.player(format!("var:{x}:1"));
                let p2 = g.player(format!("var:{x}:2"));
                let px = g.player(format!("var:{x}:v"));
                g.edge(px, p1);
                g.edge(px, p2);
                g.order(p1, &[&[(&v, 3), (&x1, 1)], &[(&b, 2)], &[(&a, 3)]]);
                g.order(
                    p2,
                    &[&[(&v, 3), (&x2, 1)], &[(&a, 2)], &[(&b, 2)], &[(&a, 3)]],
                );
                g.order(px, &[&[(&v, 3)], &[(&a, 3)], &[(&b, 1)], &[(&a, 2)]]);
                let q1 = g.player(format!("var:-{x}:1"));
                let q2 = g.player(format!("var:-{x}:2"));
                let qx = g.player(format!("var:-{x}:v"));
                g.edge(qx, q1);
                g.edge(qx, q2);
                // the first negative literal player's last entry has size 2,
                // unlike its positive counterpart
                g.order(q1, &[&[(&v, 3), (&n1, 1)], &[(&nb, 2)], &[(&na, 2)]]);
                g.order(
                    q2,
                    &[&[(&v, 3), (&n2, 1)], &[(&na, 2)], &[(&nb, 2)], &[(&na, 3)]],
                );
                g.order(qx, &[&[(&v, 3)], &[(&na, 3)], &[(&nb, 1)], &[(&na, 2)]]);
            }
            for (ci, lits) in occ.iter().enumerate() {
                let c1 = g.player(format!("clause{ci}:c1"));
                let c2 = g.player(format!("clause{ci}:c2"));
                let c3 = g.player(format!("clause{ci}:c3"));
                g.edge(c2, c1);
                g.edge(c2, c3);
                let [l1, l2, l3] = lits;
                g.order(c1, &[&[(l1, 2)]]);
                g.order(c2, &[&[(l2, 2)], &[(l1, 2)], &[(l3, 2)]]);
                g.order(c3, &[&[(l3, 2)], &[(l1, 1)], &[(l2, 2)]]);
            }
        }
    }
    g.finish(family)
}

pub fn generate(src: &ReductionSource, concept: Concept) -> Result<Generated> {
    match src {
        ReductionSource::RainbowPath { .. } => generate_from_rainbow(src, concept),
        ReductionSource::Mmm { .. } => generate_from_mmm(src, concept),
        ReductionSource::Sat3b2 { .. } => generate_from_3sat(src, concept),
    }
}

fn slot_of(inst: &Instance, class: &str) -> Option<Slot> {
    Some(Slot::new(
        inst.class_id(class).expect("gadget class exists"),
        0,
    ))
}

/// Largest rainbow matching as edge indices along the path.
pub fn rainbow_matching(p: &RainbowPath) -> Vec<usize> {
    let m = p.edge_colors.len();
    let mut best = 0u32;
    for set in 0u32..(1 << m) {
        if set & (set >> 1) != 0 || set.count_ones() <= best.count_ones() {
            continue;
        }
        let mut colors = 0u64;
        let ok = (0..m).filter(|j| set & (1 << j) != 0).all(|j| {
            let c = 1u64 << p.edge_colors[j];
            let fresh = colors & c == 0;
            colors |= c;
            fresh
        });
        if ok {
            best = set;
        }
    }
    (0..m).filter(|j| best & (1 << j) != 0).collect()
}

/// The stable outcome a yes-instance maps to, or `None` on a no-instance.
pub fn witness(src: &ReductionSource, gen: &Generated) -> Result<Option<Assignment>> {
    let inst = &gen.instance;
    let mut pi = Assignment::all_void(inst.n());
    match src {
        ReductionSource::RainbowPath { .. } => {
            let p = src.rainbow()?;
            let matching = rainbow_matching(&p);
            if matching.len() < p.k {
                return Ok(None);
            }
            let mut used = vec![false; p.colors.len()];
            for &j in &matching[..p.k] {
                let c = p.edge_colors[j];
                used[c] = true;
                let slot = slot_of(inst, &color_class(&p.colors[c]));
                for label in [
                    format!("v:{}", p.vertices[j]),
                    format!("e:{j}"),
                    format!("v:{}", p.vertices[j + 1]),
                ] {
                    pi.set(gen.player(&label), slot);
                }
            }
            let spare = (0..p.colors.len()).filter(|&c| !used[c]);
            for (i, c) in spare.enumerate() {
                pi.set(
                    gen.player(&format!("g:{}", i + 1)),
                    slot_of(inst, &color_class(&p.colors[c])),
                );
            }
            if gen.family.concept() == Concept::Core {
                for c in &p.colors {
                    let slot = slot_of(inst, &aux_class(c));
                    for t in ["t1", "t2", "t3"] {
                        pi.set(gen.player(&format!("{t}:{c}")), slot);
                    }
                }
            }
        }
        ReductionSource::Mmm { .. } => {
            let b = src.bipartite()?;
            let k = effective_k(&b);
            let (size, matching) = min_maximal_matching(&b)?;
            if size > k {
                return Ok(None);
            }
            let mut matched = vec![false; b.v.len()];
            for &(i, j) in &matching {
                matched[j] = true;
                pi.set(
                    gen.player(&format!("v:{}", b.v[j])),
                    slot_of(inst, &format!("u:{}", b.u[i])),
                );
            }
            let a = slot_of(inst, "a");
            pi.set(gen.player("center"), a);
            for j in (0..b.v.len()).filter(|&j| !matched[j]).take(b.v.len() - k) {
                pi.set(gen.player(&format!("v:{}", b.v[j])), a);
            }
            if gen.family.concept() == Concept::Core {
                pi.set(gen.player("s2"), slot_of(inst, "y"));
            }
        }
        ReductionSource::Sat3b2 { .. } => {
            let f = src.formula()?;
            let Some(truth) = satisfying_assignment(&f)? else {
                return Ok(None);
            };
            let occ = occurrence_classes(&f);
            let core = gen.family.concept() == Concept::Core;
            for (xi, x) in f.variables.iter().enumerate() {
                let (lit_sign, var_sign) = if truth[xi] { ("", "-") } else { ("-", "") };
                let positive = truth[xi];
                for o in 1..=2 {
                    pi.set(
                        gen.player(&format!("var:{lit_sign}{x}:{o}")),
                        slot_of(inst, &literal_class(x, positive, o)),
                    );
                }
                let v = slot_of(inst, &var_class(x));
                for o in 1..=2 {
                    pi.set(gen.player(&format!("var:{var_sign}{x}:{o}")), v);
                }
                if core {
                    let b = if positive {
                        format!("{x}:b")
                    } else {
                        format!("{x}:nb")
                    };
                    pi.set(
                        gen.player(&format!("var:{lit_sign}{x}:v")),
                        slot_of(inst, &b),
                    );
                    pi.set(gen.player(&format!("var:{var_sign}{x}:v")), v);
                }
            }
            let used = |pi: &Assignment, class: &str| {
                let c = inst.class_id(class).unwrap();
                pi.slots().iter().any(|s| s.is_some_and(|s| s.class == c))
            };
            for (ci, lits) in occ.iter().enumerate() {
                if !core {
                    let chosen = (0..3)
                        .find(|&r| used(&pi, &lits[r]))
                        .expect("formula is satisfied");
                    pi.set(
                        gen.player(&format!("clause{ci}:s")),
                        slot_of(inst, &format!("clause{ci}")),
                    );
                    pi.set(
                        gen.player(&format!("clause{ci}:c{}", chosen + 1)),
                        slot_of(inst, &format!("clause{ci}")),
                    );
                    for r in (0..3).filter(|&r| r != chosen) {
                        if !used(&pi, &lits[r]) {
                            pi.set(
                                gen.player(&format!("clause{ci}:c{}", r + 1)),
                                slot_of(inst, &lits[r]),
                            );
                        }
                    }
                } else {
                    let c = |r: usize| gen.player(&format!("clause{ci}:c{r}"));
                    let candidates: Vec<(&String, Vec<Player>)> = vec![
                        (&lits[0], vec![c(1), c(2)]),
                        (&lits[1], vec![c(2), c(3)]),
                        (&lits[0], vec![c(3)]),
                        (&lits[2], vec![c(2), c(3)]),
                    ];
                    let alive: Vec<&(&String, Vec<Player>)> =
                        candidates.iter().filter(|(l, _)| !used(&pi, l)).collect();
                    let rank = |i: Player, (l, s): &(&String, Vec<Player>)| {
                        inst.rank_of(i, inst.class_id(l).unwrap(), s.len())
                    };
                    // first candidate that no other candidate blocks: w blocks v
                    // when all of w gains, and w either uses another
                    // activity or contains v's group
                    let under = |i: Player, v: &(&String, Vec<Player>)| {
                        if v.1.contains(&i) {
                            rank(i, v)
                        } else {
                            0
                        }
                    };
                    let source = alive.iter().find(|&&v| {
                        !alive.iter().any(|&w| {
                            !std::ptr::eq(w, v)
                                && (w.0 != v.0 || v.1.iter().all(|i| w.1.contains(i)))
                                && w.1.iter().all(|&i| rank(i, w) > under(i, v))
                        })
                    });
                    if let Some(&&(l, ref s)) = source {
                        let slot = slot_of(inst, l);
                        for &i in s {
                            pi.set(i, slot);
                        }
                    }
                }
            }
        }
    }
    Ok(Some(pi))
}
