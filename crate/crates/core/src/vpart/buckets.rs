use std::collections::{BTreeMap, BTreeSet};

const ABSENT: i64 = i64::MIN;

/// Vertices keyed by integer gain. `pop_max` yields the highest gain, lowest
/// vertex id first.
#[derive(Debug)]
pub struct GainBuckets {
    buckets: BTreeMap<i64, BTreeSet<u32>>,
    key: Vec<i64>,
    len: usize,
}

impl GainBuckets {
    pub fn new(n: usize) -> Self {
        Self {
            buckets: BTreeMap::new(),
            key: vec![ABSENT; n],
            len: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains(&self, v: u32) -> bool {
        self.key[v as usize] != ABSENT
    }

    pub fn gain(&self, v: u32) -> Option<i64> {
        let k = self.key[v as usize];
        (k != ABSENT).then_some(k)
    }

    /// Insert `v`, or move it to a new gain if already present.
    pub fn set(&mut self, v: u32, gain: i64) {
        debug_assert!(gain != ABSENT);
        if self.key[v as usize] == gain {
            return;
        }
        self.remove(v);
        self.buckets.entry(gain).or_default().insert(v);
        self.key[v as usize] = gain;
        self.len += 1;
    }

    pub fn remove(&mut self, v: u32) {
        let k = self.key[v as usize];
        if k == ABSENT {
            return;
        }
        if let Some(set) = self.buckets.get_mut(&k) {
            set.remove(&v);
            if set.is_empty() {
                self.buckets.remove(&k);
            }
        }
        self.key[v as usize] = ABSENT;
        self.len -= 1;
    }

    pub fn pop_max(&mut self) -> Option<(u32, i64)> {
        let mut entry = self.buckets.last_entry()?;
        let gain = *entry.key();
        let v = entry
            .get_mut()
            .pop_first()
            .expect("bucket sets are never left empty");
        if entry.get().is_empty() {
            entry.remove();
        }
        self.key[v as usize] = ABSENT;
        self.len -= 1;
        Some((v, gain))
    }

    pub fn clear(&mut self) {
        for set in std::mem::take(&mut self.buckets).into_values() {
            for v in set {
                self.key[v as usize] = ABSENT;
            }
        }
        self.len = 0;
    }
}
