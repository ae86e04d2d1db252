use std::collections::{BTreeMap, HashMap};

use super::{LaminationApprox, MergeReason, MergeWitness, Provenance};
use crate::circle::{Angle, AngleSet};
use crate::error::{Error, Result};
use crate::portrait::{kneading_status, one_sided_word, CriticalPortrait, Kneading, Side};
use crate::word::EventualWord;

type Word = EventualWord<usize>;

/// Builds the depth-`depth` approximation of `~_Θ`.
///
/// The universe is `A(Θ)` together with its iterated preimages up to
/// `depth` levels; forward images are added on demand. Angles are merged
/// by four sound rules until nothing changes:
///
/// * members of one initial set;
/// * `x, y` with `i⁺(x) = i⁻(y)`, compared as exact infinite words;
/// * images of angles in one class;
/// * preimages of one class lying in one unlinked class, for classes that
///   carry no critical value.
///
/// Fails with [`Error::PeriodicKneading`] unless the portrait has
/// aperiodic kneading.
pub fn generate_lamination(portrait: &CriticalPortrait, depth: usize) -> Result<LaminationApprox> {
    if let Kneading::Periodic {
        angle,
        side,
        period,
    } = kneading_status(portrait)
    {
        return Err(Error::PeriodicKneading {
            angle: angle.to_string(),
            side: side.to_string(),
            period,
        });
    }
    let mut g = Generator::new(portrait, depth);
    g.seed();
    g.pull_back_universe();
    g.match_itineraries();
    loop {
        let forward = g.forward_pass();
        let pullback = g.pullback_pass();
        if !forward && !pullback {
            break;
        }
    }
    Ok(g.finish())
}

struct Node {
    angle: Angle,
    /// Pullback level; `None` for angles added as forward images.
    level: Option<usize>,
    plus: Word,
    minus: Word,
    /// Unlinked class, `None` on `A(Θ)`.
    class: Option<usize>,
    /// Node of `σ_d(angle)`, once known.
    image: Option<usize>,
    /// Nodes of the preimages added to the universe.
    children: Vec<usize>,
}

struct Generator<'a> {
    portrait: &'a CriticalPortrait,
    depth: usize,
    nodes: Vec<Node>,
    index: HashMap<Angle, usize>,
    parent: Vec<usize>,
    witnesses: Vec<MergeWitness>,
    /// Angles by minus-word and by plus-word, for itinerary matching.
    by_minus: HashMap<Word, Vec<usize>>,
    by_plus: HashMap<Word, Vec<usize>>,
    critical_values: Vec<Angle>,
}

impl<'a> Generator<'a> {
    fn new(portrait: &'a CriticalPortrait, depth: usize) -> Self {
        Generator {
            portrait,
            depth,
            nodes: Vec::new(),
            index: HashMap::new(),
            parent: Vec::new(),
            witnesses: Vec::new(),
            by_minus: HashMap::new(),
            by_plus: HashMap::new(),
            critical_values: portrait.critical_values(),
        }
    }

    fn push(&mut self, angle: Angle, level: Option<usize>, plus: Word, minus: Word) -> usize {
        let id = self.nodes.len();
        let class = self.portrait.class_of(&angle);
        self.index.insert(angle.clone(), id);
        self.parent.push(id);
        self.nodes.push(Node {
            angle,
            level,
            plus,
            minus,
            class,
            image: None,
            children: Vec::new(),
        });
        id
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize, reason: MergeReason) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        self.witnesses.push(MergeWitness {
            a: self.nodes[a].angle.clone(),
            b: self.nodes[b].angle.clone(),
            reason,
        });
        true
    }

    fn seed(&mut self) {
        let p = self.portrait;
        for theta in p.points() {
            let plus = one_sided_word(theta, Side::Plus, p);
            let minus = one_sided_word(theta, Side::Minus, p);
            self.push(theta.clone(), Some(0), plus, minus);
        }
        for set in p.sets() {
            let ids: Vec<usize> = set.iter().map(|a| self.index[a]).collect();
            for w in ids.windows(2) {
                self.union(w[0], w[1], MergeReason::InitialSet);
            }
        }
    }

    /// Adds preimages level by level. Words of a preimage are the words of
    /// its image with one letter prepended.
    fn pull_back_universe(&mut self) {
        let d = self.portrait.degree();
        let mut frontier: Vec<usize> = (0..self.nodes.len()).collect();
        for level in 1..=self.depth {
            let mut next = Vec::new();
            for &id in &frontier {
                let y = self.nodes[id].angle.clone();
                for x in y.preimages(d) {
                    if let Some(&old) = self.index.get(&x) {
                        self.nodes[old].image = Some(id);
                        self.nodes[id].children.push(old);
                        continue;
                    }
                    let plus = self.nodes[id]
                        .plus
                        .prepend(self.portrait.side_class(&x, Side::Plus));
                    let minus = self.nodes[id]
                        .minus
                        .prepend(self.portrait.side_class(&x, Side::Minus));
                    let child = self.push(x, Some(level), plus, minus);
                    self.nodes[child].image = Some(id);
                    self.nodes[id].children.push(child);
                    next.push(child);
                }
            }
            frontier = next;
        }
    }

    /// Adds `x` as a forward image if it is not yet present.
    fn ensure(&mut self, x: Angle) -> usize {
        if let Some(&id) = self.index.get(&x) {
            return id;
        }
        let plus = one_sided_word(&x, Side::Plus, self.portrait);
        let minus = one_sided_word(&x, Side::Minus, self.portrait);
        let id = self.push(x, None, plus, minus);
        self.register(id);
        self.match_node(id);
        id
    }

    fn register(&mut self, id: usize) {
        let n = &self.nodes[id];
        self.by_minus.entry(n.minus.clone()).or_default().push(id);
        self.by_plus.entry(n.plus.clone()).or_default().push(id);
    }

    fn match_node(&mut self, id: usize) {
        let mut partners: Vec<usize> = Vec::new();
        if let Some(ys) = self.by_minus.get(&self.nodes[id].plus) {
            partners.extend(ys);
        }
        if let Some(ys) = self.by_plus.get(&self.nodes[id].minus) {
            partners.extend(ys);
        }
        for y in partners {
            if y != id {
                self.union(id, y, MergeReason::Itinerary);
            }
        }
    }

    fn match_itineraries(&mut self) {
        for id in 0..self.nodes.len() {
            self.register(id);
        }
        for id in 0..self.nodes.len() {
            let Some(ys) = self.by_minus.get(&self.nodes[id].plus) else {
                continue;
            };
            let ys = ys.clone();
            for y in ys {
                if y != id {
                    self.union(id, y, MergeReason::Itinerary);
                }
            }
        }
    }

    fn groups(&mut self) -> BTreeMap<usize, Vec<usize>> {
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for id in 0..self.nodes.len() {
            let r = self.find(id);
            groups.entry(r).or_default().push(id);
        }
        groups.retain(|_, members| members.len() > 1);
        groups
    }

    /// Node of `σ_d(x)`, adding it if needed.
    fn image_of(&mut self, m: usize) -> usize {
        if let Some(y) = self.nodes[m].image {
            return y;
        }
        let y = self.nodes[m].angle.sigma(self.portrait.degree());
        let id = self.ensure(y);
        self.nodes[m].image = Some(id);
        id
    }

    /// Merges the images of every class. Returns whether anything changed.
    fn forward_pass(&mut self) -> bool {
        let mut changed = false;
        for members in self.groups().into_values() {
            let before = self.nodes.len();
            let mut images: Vec<usize> = members.iter().map(|&m| self.image_of(m)).collect();
            changed |= self.nodes.len() != before;
            images.sort_unstable();
            images.dedup();
            for w in images.windows(2) {
                changed |= self.union(w[0], w[1], MergeReason::Forward);
            }
        }
        changed
    }

    /// Merges the preimages of each class that fall in one unlinked class.
    fn pullback_pass(&mut self) -> bool {
        let mut changed = false;
        let critical: Vec<usize> = self
            .critical_values
            .iter()
            .filter_map(|v| self.index.get(v).copied())
            .collect();
        for members in self.groups().into_values() {
            if members.iter().any(|m| critical.contains(m)) {
                continue;
            }
            let mut by_class: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for &m in &members {
                for &x in &self.nodes[m].children {
                    if let Some(c) = self.nodes[x].class {
                        by_class.entry(c).or_default().push(x);
                    }
                }
            }
            for ids in by_class.into_values() {
                for w in ids.windows(2) {
                    changed |= self.union(w[0], w[1], MergeReason::Pullback);
                }
            }
        }
        changed
    }

    fn finish(mut self) -> LaminationApprox {
        let groups = self.groups();
        let mut root_of_witness: HashMap<usize, Vec<MergeWitness>> = HashMap::new();
        for w in std::mem::take(&mut self.witnesses) {
            let r = self.find(self.index[&w.a]);
            root_of_witness.entry(r).or_default().push(w);
        }
        let mut out: Vec<(AngleSet, Provenance)> = groups
            .into_iter()
            .map(|(root, members)| {
                let set = AngleSet::new(members.iter().map(|&m| self.nodes[m].angle.clone()));
                let level = members
                    .iter()
                    .map(|&m| self.nodes[m].level.unwrap_or(self.depth))
                    .min()
                    .unwrap_or(0);
                let merges = root_of_witness.remove(&root).unwrap_or_default();
                (set, Provenance { level, merges })
            })
            .collect();
        out.sort_by(|a, b| a.0.first().cmp(&b.0.first()));
        let (classes, provenance) = out.into_iter().unzip();
        LaminationApprox {
            portrait: self.portrait.clone(),
            depth: self.depth,
            classes,
            provenance,
        }
    }
}
