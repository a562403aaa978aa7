//! Bipartite matching between items (edges of a graph) and colors.
//!
//! Two entry points: [`max_matching`] computes a maximum matching from
//! scratch and extracts a Hall-violating certificate when some item stays
//! unmatched; [`IncrementalMatching`] adds items one at a time with a single
//! augmenting-path search each, and can roll back to an earlier mark.

/// Result of a from-scratch matching.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingResult {
    /// `item_color[i]` is the color matched to item `i`.
    pub item_color: Vec<Option<usize>>,
    pub size: usize,
}

impl MatchingResult {
    pub fn is_perfect(&self) -> bool {
        self.size == self.item_color.len()
    }
}

fn augment(
    item: usize,
    adj: &[Vec<usize>],
    item_color: &mut [Option<usize>],
    color_item: &mut [Option<usize>],
    seen: &mut [bool],
) -> bool {
    for &c in &adj[item] {
        if seen[c] {
            continue;
        }
        seen[c] = true;
        let free = match color_item[c] {
            None => true,
            Some(other) => augment(other, adj, item_color, color_item, seen),
        };
        if free {
            item_color[item] = Some(c);
            color_item[c] = Some(item);
            return true;
        }
    }
    false
}

/// Maximum matching of items to colors `0..colors`, where item `i` may take
/// any color in `adj[i]`. Items are processed in index order and each item
/// scans its colors in the order given, so the result is deterministic.
pub fn max_matching(adj: &[Vec<usize>], colors: usize) -> MatchingResult {
    let mut item_color = vec![None; adj.len()];
    let mut color_item = vec![None; colors];
    let mut seen = vec![false; colors];
    let mut size = 0;
    for i in 0..adj.len() {
        seen.iter_mut().for_each(|s| *s = false);
        if augment(i, adj, &mut item_color, &mut color_item, &mut seen) {
            size += 1;
        }
    }
    MatchingResult { item_color, size }
}

/// A set of items whose combined colors are fewer than the items.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HallCertificate {
    pub items: Vec<usize>,
    pub colors: Vec<usize>,
}

/// Given a maximum matching that leaves some item unmatched, returns the
/// items reachable from it by alternating paths. Their neighborhood is
/// exactly the colors matched to the other reachable items, so it is one
/// smaller than the item set (König).
pub fn hall_certificate(
    adj: &[Vec<usize>],
    colors: usize,
    m: &MatchingResult,
) -> Option<HallCertificate> {
    let start = m.item_color.iter().position(Option::is_none)?;
    let mut color_item = vec![None; colors];
    for (i, c) in m.item_color.iter().enumerate() {
        if let Some(c) = c {
            color_item[*c] = Some(i);
        }
    }
    let mut in_items = vec![false; adj.len()];
    let mut in_colors = vec![false; colors];
    let mut stack = vec![start];
    in_items[start] = true;
    while let Some(i) = stack.pop() {
        for &c in &adj[i] {
            if in_colors[c] {
                continue;
            }
            in_colors[c] = true;
            // c must be matched, otherwise the matching was not maximum
            let j = color_item[c].expect("maximum matching has no augmenting path");
            if !in_items[j] {
                in_items[j] = true;
                stack.push(j);
            }
        }
    }
    Some(HallCertificate {
        items: (0..adj.len()).filter(|&i| in_items[i]).collect(),
        colors: (0..colors).filter(|&c| in_colors[c]).collect(),
    })
}

#[derive(Debug, Clone, Copy)]
enum Change {
    Pushed,
    ItemColor(usize, Option<usize>),
    ColorItem(usize, Option<usize>),
}

/// Matching maintained under item insertions with rollback.
#[derive(Debug, Clone)]
pub struct IncrementalMatching {
    adj: Vec<Vec<usize>>,
    item_color: Vec<Option<usize>>,
    color_item: Vec<Option<usize>>,
    seen: Vec<u32>,
    stamp: u32,
    log: Vec<Change>,
    augmentations: u64,
}

impl IncrementalMatching {
    pub fn new(colors: usize) -> Self {
        IncrementalMatching {
            adj: Vec::new(),
            item_color: Vec::new(),
            color_item: vec![None; colors],
            seen: vec![0; colors],
            stamp: 0,
            log: Vec::new(),
            augmentations: 0,
        }
    }

    pub fn items(&self) -> usize {
        self.adj.len()
    }

    /// Number of augmenting-path searches run so far.
    pub fn augmentations(&self) -> u64 {
        self.augmentations
    }

    pub fn mark(&self) -> usize {
        self.log.len()
    }

    pub fn rollback(&mut self, mark: usize) {
        while self.log.len() > mark {
            match self.log.pop().unwrap() {
                Change::Pushed => {
                    self.adj.pop();
                    self.item_color.pop();
                }
                Change::ItemColor(i, old) => self.item_color[i] = old,
                Change::ColorItem(c, old) => self.color_item[c] = old,
            }
        }
    }

    /// Adds an item and tries to extend the matching to cover it. Returns
    /// whether every item is matched afterwards (given that all earlier
    /// items were).
    pub fn push(&mut self, colors: Vec<usize>) -> bool {
        self.adj.push(colors);
        self.item_color.push(None);
        self.log.push(Change::Pushed);
        let item = self.adj.len() - 1;
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.seen.iter_mut().for_each(|s| *s = 0);
            self.stamp = 1;
        }
        self.augmentations += 1;
        self.augment_logged(item)
    }

    fn augment_logged(&mut self, item: usize) -> bool {
        for idx in 0..self.adj[item].len() {
            let c = self.adj[item][idx];
            if self.seen[c] == self.stamp {
                continue;
            }
            self.seen[c] = self.stamp;
            let free = match self.color_item[c] {
                None => true,
                Some(other) => self.augment_logged(other),
            };
            if free {
                self.log
                    .push(Change::ItemColor(item, self.item_color[item]));
                self.log.push(Change::ColorItem(c, self.color_item[c]));
                self.item_color[item] = Some(c);
                self.color_item[c] = Some(item);
                return true;
            }
        }
        false
    }

    pub fn color_of(&self, item: usize) -> Option<usize> {
        self.item_color[item]
    }

    pub fn is_perfect(&self) -> bool {
        self.item_color.iter().all(Option::is_some)
    }
}
