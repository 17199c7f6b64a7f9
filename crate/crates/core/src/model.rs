//! Problem instances, capacity computation, JSON parsing, and the read-only
//! multi-pass cursor used by the streaming evaluators.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the capacity C; inputs beyond it are refused outright.
pub const DEFAULT_MAX_CAPACITY: u64 = 100_000;

/// A subset-sum instance: does some subset of `m` sum to `b`?
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub m: Vec<i64>,
    #[serde(rename = "B")]
    pub b: i64,
}

/// The unary cost measure C = |B| + sum |m_i| + 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Capacity(pub u64);

/// Subset-sum with vector entries: rows `m[i]` and target `b`, all length `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VectorInstance {
    pub m: Vec<Vec<i64>>,
    #[serde(rename = "B")]
    pub b: Vec<i64>,
}

/// 0-1 knapsack: maximize the value sum subject to the weight bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnapsackInstance {
    pub w: Vec<i64>,
    pub v: Vec<i64>,
    #[serde(rename = "B")]
    pub b: i64,
}

impl Instance {
    pub fn new(m: Vec<i64>, b: i64) -> Instance {
        Instance { m, b }
    }

    pub fn n(&self) -> usize {
        self.m.len()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("instances always serialize")
    }
}

impl VectorInstance {
    pub fn new(m: Vec<Vec<i64>>, b: Vec<i64>) -> Result<VectorInstance> {
        let inst = VectorInstance { m, b };
        inst.validate()?;
        Ok(inst)
    }

    pub fn n(&self) -> usize {
        self.m.len()
    }

    pub fn k(&self) -> usize {
        self.b.len()
    }

    fn validate(&self) -> Result<()> {
        if self.b.is_empty() {
            return Err(Error::ShapeError("target vector must have k >= 1".into()));
        }
        let k = self.b.len();
        for (i, row) in self.m.iter().enumerate() {
            if row.len() != k {
                return Err(Error::ShapeError(format!(
                    "row {} has length {}, expected {}",
                    i + 1,
                    row.len(),
                    k
                )));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("instances always serialize")
    }
}

impl KnapsackInstance {
    pub fn new(w: Vec<i64>, v: Vec<i64>, b: i64) -> Result<KnapsackInstance> {
        if w.len() != v.len() {
            return Err(Error::ShapeError(format!(
                "weights ({}) and values ({}) differ in length",
                w.len(),
                v.len()
            )));
        }
        Ok(KnapsackInstance { w, v, b })
    }

    pub fn n(&self) -> usize {
        self.w.len()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("instances always serialize")
    }
}

fn abs_sum<'a>(vals: impl Iterator<Item = &'a i64>) -> u64 {
    vals.map(|&v| v.unsigned_abs()).sum()
}

/// C = |B| + sum |m_i| + 1.
pub fn capacity(instance: &Instance) -> Capacity {
    Capacity(instance.b.unsigned_abs() + abs_sum(instance.m.iter()) + 1)
}

/// C = 1 + sum |m_ij| + sum |B_j|.
pub fn vector_capacity(vinstance: &VectorInstance) -> Capacity {
    Capacity(
        1 + abs_sum(vinstance.m.iter().flatten()) + abs_sum(vinstance.b.iter()),
    )
}

pub fn check_capacity(c: Capacity, max: u64) -> Result<Capacity> {
    if c.0 > max {
        return Err(Error::CapacityExceeded(c.0, max));
    }
    Ok(c)
}

/// What kind of instance a JSON document should parse as.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InstanceKind {
    Scalar,
    Vector,
    Knapsack,
}

/// Any of the three instance forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParsedInstance {
    Scalar(Instance),
    Vector(VectorInstance),
    Knapsack(KnapsackInstance),
}

/// Parses and validates a JSON instance document, enforcing the capacity cap.
pub fn parse_instance(text: &str, kind: InstanceKind, max_capacity: u64) -> Result<ParsedInstance> {
    match kind {
        InstanceKind::Scalar => {
            let inst: Instance =
                serde_json::from_str(text).map_err(|e| Error::ParseError(e.to_string()))?;
            check_capacity(capacity(&inst), max_capacity)?;
            Ok(ParsedInstance::Scalar(inst))
        }
        InstanceKind::Vector => {
            let inst: VectorInstance =
                serde_json::from_str(text).map_err(|e| Error::ParseError(e.to_string()))?;
            inst.validate()?;
            check_capacity(vector_capacity(&inst), max_capacity)?;
            Ok(ParsedInstance::Vector(inst))
        }
        InstanceKind::Knapsack => {
            let raw: KnapsackInstance =
                serde_json::from_str(text).map_err(|e| Error::ParseError(e.to_string()))?;
            let inst = KnapsackInstance::new(raw.w, raw.v, raw.b)?;
            let weight_side = 1 + 2 * (abs_sum(inst.w.iter()) + abs_sum(inst.v.iter()));
            check_capacity(Capacity(weight_side), max_capacity)?;
            Ok(ParsedInstance::Knapsack(inst))
        }
    }
}

/// Read-only multi-pass cursor over an instance's `m` sequence.
///
/// Evaluators stream the input through this rather than indexing at will; the
/// cursor position is the only state and is what the space meter charges.
pub struct TapeCursor<'a> {
    m: &'a [i64],
    position: usize,
    rewinds: u64,
}

impl<'a> TapeCursor<'a> {
    pub fn read(&mut self) -> Option<i64> {
        let out = self.m.get(self.position).copied();
        if out.is_some() {
            self.position += 1;
        }
        out
    }

    pub fn rewind(&mut self) {
        self.position = 0;
        self.rewinds += 1;
    }

    /// 1-based position of the next element to be read.
    pub fn position(&self) -> usize {
        self.position + 1
    }

    pub fn rewinds(&self) -> u64 {
        self.rewinds
    }
}

/// Opens a cursor over the instance tape.
pub fn scan(instance: &Instance) -> TapeCursor<'_> {
    TapeCursor {
        m: &instance.m,
        position: 0,
        rewinds: 0,
    }
}
