//! The Reuse Store Table.
//!
//! Per service, previously computed results live in an [`LshIndex`] keyed by
//! entry id, alongside the entry records themselves. Lookups classify the
//! nearest candidate as a full match (`distance <= tau_full`), a partial
//! match (`distance <= tau_partial`) or a miss. When a service's table is
//! full the least frequently reused entry is evicted; ties go to the entry
//! used least recently, then to the smallest id.

use std::collections::{BTreeMap, HashMap};
use std::io::{Read, Write};

use crate::domain::{EntryId, FeatureVector, ReuseOutput};
use crate::error::{Error, Result};
use crate::lsh::{self, LshIndex, LshParams};
use crate::rng;

#[derive(Debug, Clone, PartialEq)]
pub struct StoreConfig {
    /// Maximum entries per service.
    pub capacity: usize,
    pub tau_full: f64,
    pub tau_partial: f64,
    /// Share of a task covered by a partial match.
    pub partial_fraction: f64,
    /// Halve every frequency each time this many seconds elapse. `None`
    /// keeps lifetime counts.
    pub halving_window: Option<f64>,
    pub dimension: usize,
    pub num_tables: usize,
    pub bits_per_table: usize,
    pub max_candidates: usize,
    pub seed: u64,
}

impl Default for StoreConfig {
    fn default() -> Self {
        Self {
            capacity: 500,
            tau_full: 1.0,
            tau_partial: 3.0,
            partial_fraction: 0.5,
            halving_window: None,
            dimension: 32,
            num_tables: lsh::DEFAULT_NUM_TABLES,
            bits_per_table: lsh::DEFAULT_BITS_PER_TABLE,
            max_candidates: lsh::DEFAULT_MAX_CANDIDATES,
            seed: 0,
        }
    }
}

impl StoreConfig {
    pub fn validate(&self) -> Result<()> {
        if self.capacity == 0 {
            return Err(Error::param("store.capacity", "must be >= 1"));
        }
        if !(self.tau_full.is_finite() && self.tau_full >= 0.0) {
            return Err(Error::param("store.tau_full", "must be >= 0"));
        }
        if !(self.tau_partial.is_finite() && self.tau_partial > self.tau_full) {
            return Err(Error::param("store.tau_partial", "must be > store.tau_full"));
        }
        if !(self.partial_fraction > 0.0 && self.partial_fraction < 1.0) {
            return Err(Error::param("store.partial_fraction", "must be in (0, 1)"));
        }
        if let Some(w) = self.halving_window {
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::param("store.halving_window", "must be > 0"));
            }
        }
        if self.max_candidates == 0 {
            return Err(Error::param("lsh.max_candidates", "must be >= 1"));
        }
        self.lsh_params("").validate()
    }

    fn lsh_params(&self, service: &str) -> LshParams {
        LshParams {
            num_tables: self.num_tables,
            bits_per_table: self.bits_per_table,
            dimension: self.dimension,
            seed: rng::mix(self.seed, rng::name_hash(service)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReuseEntry {
    pub id: EntryId,
    pub service: String,
    pub features: FeatureVector,
    pub output: ReuseOutput,
    pub frequency: u64,
    pub inserted_at: f64,
    pub last_used_at: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LookupResult {
    Full(ReuseEntry),
    Partial {
        entry: ReuseEntry,
        remaining_fraction: f64,
        distance: f64,
    },
    Miss,
}

/// What a lookup would return, without touching any counter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Classification {
    Full(EntryId, f64),
    Partial(EntryId, f64),
    Miss,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ServiceStats {
    pub entries: usize,
    pub hits: u64,
    pub misses: u64,
    pub evictions: u64,
}

#[derive(Debug, Clone)]
struct ServiceTable {
    index: LshIndex,
    entries: HashMap<EntryId, ReuseEntry>,
}

#[derive(Debug, Clone, Copy)]
pub struct Placement {
    pub id: EntryId,
    pub evicted: Option<EntryId>,
}

#[derive(Debug, Clone)]
pub struct ReuseStore {
    config: StoreConfig,
    tables: BTreeMap<String, ServiceTable>,
    counters: BTreeMap<String, ServiceStats>,
    next_id: u64,
    aging_epoch: u64,
}

impl ReuseStore {
    pub fn new(config: StoreConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            config,
            tables: BTreeMap::new(),
            counters: BTreeMap::new(),
            next_id: 0,
            aging_epoch: 0,
        })
    }

    pub fn config(&self) -> &StoreConfig {
        &self.config
    }

    pub fn len(&self, service: &str) -> usize {
        self.tables.get(service).map_or(0, |t| t.entries.len())
    }

    pub fn total_len(&self) -> usize {
        self.tables.values().map(|t| t.entries.len()).sum()
    }

    pub fn services(&self) -> impl Iterator<Item = &str> {
        self.tables.keys().map(String::as_str)
    }

    /// Entries of one service ordered by id.
    pub fn entries(&self, service: &str) -> Vec<&ReuseEntry> {
        let mut v: Vec<_> = self
            .tables
            .get(service)
            .map(|t| t.entries.values().collect())
            .unwrap_or_default();
        v.sort_by_key(|e| e.id);
        v
    }

    pub fn get(&self, service: &str, id: EntryId) -> Option<&ReuseEntry> {
        self.tables.get(service)?.entries.get(&id)
    }

    /// Nearest stored entry classified against the thresholds; read-only.
    pub fn peek(&self, service: &str, q: &FeatureVector) -> Result<Classification> {
        let Some(table) = self.tables.get(service) else {
            return Ok(Classification::Miss);
        };
        let best = table.index.query(q, self.config.max_candidates)?;
        Ok(match best.first() {
            Some(&(id, d)) if d <= self.config.tau_full => Classification::Full(id, d),
            Some(&(id, d)) if d <= self.config.tau_partial => Classification::Partial(id, d),
            _ => Classification::Miss,
        })
    }

    pub fn lookup(&mut self, service: &str, q: &FeatureVector, now: f64) -> Result<LookupResult> {
        self.age(now);
        let class = if service.is_empty() {
            Classification::Miss
        } else {
            self.peek(service, q)?
        };
        let (id, distance, full) = match class {
            Classification::Miss => {
                self.counters.entry(service.to_owned()).or_default().misses += 1;
                return Ok(LookupResult::Miss);
            }
            Classification::Full(id, d) => (id, d, true),
            Classification::Partial(id, d) => (id, d, false),
        };
        self.counters.entry(service.to_owned()).or_default().hits += 1;
        let entry = self
            .tables
            .get_mut(service)
            .and_then(|t| t.entries.get_mut(&id))
            .expect("index and entry map agree");
        entry.frequency += 1;
        entry.last_used_at = entry.last_used_at.max(now);
        let entry = entry.clone();
        Ok(if full {
            LookupResult::Full(entry)
        } else {
            LookupResult::Partial {
                entry,
                remaining_fraction: 1.0 - self.config.partial_fraction,
                distance,
            }
        })
    }

    /// Admit a freshly computed result, evicting first if the table is full.
    pub fn place(
        &mut self,
        service: &str,
        features: FeatureVector,
        output: ReuseOutput,
        now: f64,
    ) -> Result<Placement> {
        features.check_dimension(self.config.dimension)?;
        self.age(now);
        let evicted = if self.len(service) >= self.config.capacity {
            Some(self.evict_lfu(service)?)
        } else {
            None
        };
        let id = EntryId(self.next_id);
        self.next_id += 1;
        self.insert_entry(ReuseEntry {
            id,
            service: service.to_owned(),
            features,
            output,
            frequency: 0,
            inserted_at: now,
            last_used_at: now,
        })?;
        Ok(Placement { id, evicted })
    }

    fn insert_entry(&mut self, entry: ReuseEntry) -> Result<()> {
        if !self.tables.contains_key(&entry.service) {
            let index = LshIndex::build(self.config.lsh_params(&entry.service))?;
            self.tables.insert(
                entry.service.clone(),
                ServiceTable {
                    index,
                    entries: HashMap::new(),
                },
            );
        }
        let table = self.tables.get_mut(&entry.service).expect("just inserted");
        table.index.insert(entry.id, entry.features.clone())?;
        table.entries.insert(entry.id, entry);
        Ok(())
    }

    pub fn evict_lfu(&mut self, service: &str) -> Result<EntryId> {
        let table = self
            .tables
            .get_mut(service)
            .filter(|t| !t.entries.is_empty())
            .ok_or_else(|| Error::EmptyTable(service.to_owned()))?;
        let victim = table
            .entries
            .values()
            .min_by(|a, b| {
                a.frequency
                    .cmp(&b.frequency)
                    .then(a.last_used_at.total_cmp(&b.last_used_at))
                    .then(a.id.cmp(&b.id))
            })
            .map(|e| e.id)
            .expect("non-empty");
        table.entries.remove(&victim);
        table.index.remove(victim)?;
        self.counters.entry(service.to_owned()).or_default().evictions += 1;
        Ok(victim)
    }

    pub fn stats(&self) -> BTreeMap<String, ServiceStats> {
        let mut out = self.counters.clone();
        for (service, table) in &self.tables {
            out.entry(service.clone()).or_default().entries = table.entries.len();
        }
        out
    }

    fn age(&mut self, now: f64) {
        let Some(window) = self.config.halving_window else {
            return;
        };
        let epoch = (now / window).floor().max(0.0) as u64;
        if epoch <= self.aging_epoch {
            return;
        }
        let shift = (epoch - self.aging_epoch).min(63);
        self.aging_epoch = epoch;
        for table in self.tables.values_mut() {
            for e in table.entries.values_mut() {
                e.frequency >>= shift;
            }
        }
    }

    /// Write every entry as one line:
    /// `service,id,frequency,inserted_at,last_used_at,label,v1,...,vd`.
    pub fn write_snapshot<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .has_headers(false)
            .flexible(true)
            .from_writer(out);
        for service in self.tables.keys() {
            for e in self.entries(service) {
                let mut rec = vec![
                    e.service.clone(),
                    e.id.0.to_string(),
                    e.frequency.to_string(),
                    e.inserted_at.to_string(),
                    e.last_used_at.to_string(),
                    e.output.label.clone(),
                ];
                rec.extend(e.features.as_slice().iter().map(f64::to_string));
                w.write_record(&rec)?;
            }
        }
        w.flush()?;
        Ok(())
    }

    /// Rebuild a store from [`write_snapshot`](Self::write_snapshot) output.
    /// Output sizes are not part of the record format and restore as zero.
    pub fn restore<R: Read>(config: StoreConfig, input: R) -> Result<Self> {
        let mut store = Self::new(config)?;
        let mut r = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .from_reader(input);
        for (i, rec) in r.records().enumerate() {
            let line = i + 1;
            let rec = rec.map_err(|e| Error::Parse {
                line,
                reason: e.to_string(),
            })?;
            let field = |idx: usize, name: &str| {
                rec.get(idx).ok_or_else(|| Error::Parse {
                    line,
                    reason: format!("missing {name}"),
                })
            };
            let num = |idx: usize, name: &str| -> Result<f64> {
                field(idx, name)?.trim().parse::<f64>().map_err(|e| Error::Parse {
                    line,
                    reason: format!("{name}: {e}"),
                })
            };
            let service = field(0, "service")?.to_owned();
            let id = num(1, "id")? as u64;
            let frequency = num(2, "frequency")? as u64;
            let inserted_at = num(3, "inserted_at")?;
            let last_used_at = num(4, "last_used_at")?;
            let label = field(5, "label")?.to_owned();
            let values = (6..rec.len())
                .map(|j| num(j, "feature"))
                .collect::<Result<Vec<_>>>()?;
            if values.len() != store.config.dimension {
                return Err(Error::Parse {
                    line,
                    reason: format!(
                        "expected {} feature values, got {}",
                        store.config.dimension,
                        values.len()
                    ),
                });
            }
            let features = FeatureVector::new(values).map_err(|e| Error::Parse {
                line,
                reason: e.to_string(),
            })?;
            if store.len(&service) >= store.config.capacity {
                return Err(Error::Parse {
                    line,
                    reason: format!("service `{service}` exceeds store capacity"),
                });
            }
            store.insert_entry(ReuseEntry {
                id: EntryId(id),
                service,
                features,
                output: ReuseOutput {
                    label,
                    output_size: 0.0,
                },
                frequency,
                inserted_at,
                last_used_at,
            })?;
            store.next_id = store.next_id.max(id + 1);
        }
        Ok(store)
    }

    /// Debug check that index and entry map agree for every service.
    pub fn is_consistent(&self) -> bool {
        self.tables.values().all(|t| {
            t.index.len() == t.entries.len()
                && t.entries.keys().all(|id| t.index.contains(*id))
                && t.index.bucket_references() == t.entries.len() * self.config.num_tables
        })
    }
}
