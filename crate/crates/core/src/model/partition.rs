/// An equivalence relation on `0..n`, stored as a class id per element.
/// Class ids are numbered in order of first appearance, so equal relations
/// have equal representations.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    class_of: Vec<usize>,
}

impl Partition {
    /// From arbitrary labels; elements with equal labels share a class.
    pub fn from_labels<L: Ord + Clone>(labels: &[L]) -> Partition {
        let mut seen: std::collections::BTreeMap<L, usize> = std::collections::BTreeMap::new();
        let class_of = labels
            .iter()
            .map(|l| {
                let next = seen.len();
                *seen.entry(l.clone()).or_insert(next)
            })
            .collect();
        Partition { class_of }
    }

    /// From explicit classes; fails on overlap, gaps or out-of-range members.
    pub fn from_classes(n: usize, classes: &[Vec<usize>]) -> Result<Partition, String> {
        let mut label: Vec<Option<usize>> = vec![None; n];
        for (c, class) in classes.iter().enumerate() {
            if class.is_empty() {
                return Err(format!("class {c} is empty"));
            }
            for &w in class {
                if w >= n {
                    return Err(format!("state index {w} out of range"));
                }
                if label[w].is_some() {
                    return Err(format!("state index {w} occurs in two classes"));
                }
                label[w] = Some(c);
            }
        }
        if let Some(w) = label.iter().position(Option::is_none) {
            return Err(format!("state index {w} is in no class"));
        }
        let labels: Vec<usize> = label.into_iter().map(|l| l.expect("checked")).collect();
        Ok(Partition::from_labels(&labels))
    }

    pub fn universal(n: usize) -> Partition {
        Partition { class_of: vec![0; n] }
    }

    pub fn discrete(n: usize) -> Partition {
        Partition { class_of: (0..n).collect() }
    }

    pub fn len(&self) -> usize {
        self.class_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.class_of.is_empty()
    }

    pub fn class_of(&self, w: usize) -> usize {
        self.class_of[w]
    }

    pub fn labels(&self) -> &[usize] {
        &self.class_of
    }

    pub fn related(&self, u: usize, v: usize) -> bool {
        self.class_of[u] == self.class_of[v]
    }

    pub fn class_count(&self) -> usize {
        self.class_of.iter().max().map_or(0, |m| m + 1)
    }

    /// Classes as sorted member lists, in class-id order.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.class_count()];
        for (w, &c) in self.class_of.iter().enumerate() {
            out[c].push(w);
        }
        out
    }

    /// The members of `w`'s class.
    pub fn class_members(&self, w: usize) -> Vec<usize> {
        let c = self.class_of[w];
        (0..self.len()).filter(|&v| self.class_of[v] == c).collect()
    }

    /// The relation induced on `keep` (increasing indices), renumbered.
    pub fn restrict(&self, keep: &[usize]) -> Partition {
        let labels: Vec<usize> = keep.iter().map(|&w| self.class_of[w]).collect();
        Partition::from_labels(&labels)
    }

    /// Splits each class by the value of `side`.
    pub fn refine(&self, side: &[bool]) -> Partition {
        let labels: Vec<(usize, bool)> = self.class_of.iter().zip(side).map(|(&c, &s)| (c, s)).collect();
        Partition::from_labels(&labels)
    }

    /// Number of related ordered pairs, including reflexive ones.
    pub fn pair_count(&self) -> usize {
        self.classes().iter().map(|c| c.len() * c.len()).sum()
    }
}
