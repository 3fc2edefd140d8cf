//! JSON descriptors for diagrams, orders, measures, and band specs, so that
//! configurations round-trip losslessly across the CLI boundary. Rationals
//! travel as `"num/den"` strings.

use serde::{Deserialize, Serialize};

use crate::diagram::Diagram;
use crate::error::{Error, Result};
use crate::measures::{parse_rational, BernoulliParam, EigenParam};
use crate::orders::{
    build_barrier_order, build_ray_guided_order, build_segment_order, lift_subdiagram_order,
    FillRule, OrderAssignment,
};
use crate::subdiagrams::BandSpec;

/// `{"kind":"pascal"|"gen1"|"gen2","depth":N,"window":[lo,hi]}`; the window
/// is required for `gen2`, optional for `gen1` (upper index bound, default
/// `depth + 2`), and rejected for `pascal`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct DiagramDescriptor {
    pub kind: DiagramKindTag,
    pub depth: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<(i64, i64)>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum DiagramKindTag {
    Pascal,
    Gen1,
    Gen2,
}

impl DiagramDescriptor {
    pub fn pascal(depth: u32) -> Self {
        Self {
            kind: DiagramKindTag::Pascal,
            depth,
            window: None,
        }
    }

    pub fn build(&self) -> Result<Diagram> {
        match self.kind {
            DiagramKindTag::Pascal => {
                if self.window.is_some() {
                    return Err(Error::Invalid(
                        "the Pascal diagram takes no window".into(),
                    ));
                }
                Ok(Diagram::pascal(self.depth))
            }
            DiagramKindTag::Gen1 => {
                let hi = match self.window {
                    None => i64::from(self.depth) + 2,
                    Some((1, hi)) => hi,
                    Some((lo, _)) => {
                        return Err(Error::Invalid(format!(
                            "one-sided window must start at 1, got {lo}"
                        )))
                    }
                };
                Diagram::gen_one_sided(self.depth, hi)
            }
            DiagramKindTag::Gen2 => {
                let (lo, hi) = self.window.ok_or_else(|| {
                    Error::Invalid("two-sided diagram needs a window [lo,hi]".into())
                })?;
                Diagram::gen_two_sided(self.depth, lo, hi)
            }
        }
    }
}

/// `{"kind":"canonical"|"anticanonical"|"ray"|"segment"|"barrier"|"lift",...}`
/// with the per-kind parameters inline.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum OrderDescriptor {
    /// Lower-source-index edge of every fiber labeled 0.
    Canonical,
    /// Higher-source-index edge of every fiber labeled 0.
    Anticanonical,
    /// Ray-guided order on the Pascal diagram (continuum minimal and maximal
    /// paths); guides cover dyadic directions up to the given level.
    Ray { max_dyadic_level: u32 },
    /// Comb-segment order on the Pascal diagram (continuum minimal paths,
    /// countably many maximal ones).
    Segment,
    /// Staircase-barrier order on the two-sided diagram (no extreme paths in
    /// the limit); `g` lists the exponent table entries.
    Barrier { g: Vec<BarrierEntry> },
    /// Canonical Pascal order lifted into a generalized diagram at the given
    /// level-0 anchor index.
    Lift { anchor: i64 },
}

/// One entry of the barrier exponent table: barrier at level-0 index `n`,
/// destroying minimality (`i = 1`) or maximality (`i = 0`), with `K = 3^g`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct BarrierEntry {
    pub n: i64,
    pub i: u8,
    pub g: u32,
}

impl OrderDescriptor {
    /// Builds the order on `diagram`. Ray and segment orders require a Pascal
    /// diagram, the barrier order a two-sided one, the lift a generalized one.
    pub fn build(&self, diagram: &Diagram) -> Result<OrderAssignment> {
        match self {
            OrderDescriptor::Canonical => Ok(OrderAssignment::canonical(diagram)),
            OrderDescriptor::Anticanonical => Ok(OrderAssignment::anticanonical(diagram)),
            OrderDescriptor::Ray { max_dyadic_level } => {
                require_kind(diagram, crate::diagram::DiagramKind::PascalStandard, "ray")?;
                Ok(build_ray_guided_order(diagram.depth(), *max_dyadic_level)?.order)
            }
            OrderDescriptor::Segment => {
                require_kind(
                    diagram,
                    crate::diagram::DiagramKind::PascalStandard,
                    "segment",
                )?;
                Ok(build_segment_order(diagram.depth())?.order)
            }
            OrderDescriptor::Barrier { g } => {
                let table: Vec<((i64, u8), u32)> =
                    g.iter().map(|e| ((e.n, e.i), e.g)).collect();
                Ok(build_barrier_order(diagram, &table)?.order)
            }
            OrderDescriptor::Lift { anchor } => {
                let inner = OrderAssignment::canonical(&Diagram::pascal(diagram.depth()));
                lift_subdiagram_order(diagram, &inner, *anchor, FillRule::LeftToRight)
            }
        }
    }
}

fn require_kind(
    diagram: &Diagram,
    kind: crate::diagram::DiagramKind,
    what: &str,
) -> Result<()> {
    if diagram.kind() != kind {
        return Err(Error::Invalid(format!(
            "the {what} order is built on a {kind:?} diagram"
        )));
    }
    Ok(())
}

/// `{"type":"bernoulli","p":"2/3"}` or `{"type":"eigen","lambda":"3/2"}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum MeasureDescriptor {
    Bernoulli { p: String },
    Eigen { lambda: String },
}

/// A validated measure parameter.
#[derive(Debug, Clone)]
pub enum MeasureSpec {
    Bernoulli(BernoulliParam),
    Eigen(EigenParam),
}

impl MeasureDescriptor {
    pub fn build(&self) -> Result<MeasureSpec> {
        match self {
            MeasureDescriptor::Bernoulli { p } => {
                Ok(MeasureSpec::Bernoulli(BernoulliParam::new(parse_rational(p)?)?))
            }
            MeasureDescriptor::Eigen { lambda } => {
                Ok(MeasureSpec::Eigen(EigenParam::new(parse_rational(lambda)?)?))
            }
        }
    }
}

/// `{"p":"1/2","epsilon":"1/10","thresholds":[...]}`; produced from a built
/// [`BandSpec`] and parseable back into its inputs.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct BandDescriptor {
    pub p: String,
    pub epsilon: String,
    pub thresholds: Vec<u64>,
}

impl BandDescriptor {
    pub fn from_spec(spec: &BandSpec) -> Self {
        Self {
            p: crate::measures::format_rational(spec.p().p()),
            epsilon: crate::measures::format_rational(spec.epsilon()),
            thresholds: spec.thresholds().to_vec(),
        }
    }
}

/// Deserializes a descriptor of any of the above types from a JSON string,
/// surfacing schema errors as [`Error::Invalid`].
pub fn from_json<'a, T: Deserialize<'a>>(s: &'a str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| Error::Invalid(format!("descriptor: {e}")))
}

/// Serializes any descriptor back to compact JSON.
pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("descriptors serialize infallibly")
}

/// Serializes a label assignment as CSV rows
/// `level,source_index,range_index,label`, sorted for byte-stable output.
pub fn labels_csv(order: &OrderAssignment) -> String {
    let mut rows: Vec<(u32, i64, i64, u8)> = order
        .labels()
        .iter()
        .map(|(e, &l)| (e.range.level, e.source.index, e.range.index, l))
        .collect();
    rows.sort_unstable();
    let mut out = String::from("level,source_index,range_index,label\n");
    for (level, src, dst, label) in rows {
        out.push_str(&format!("{level},{src},{dst},{label}\n"));
    }
    out
}

/// Orbit dump format: one JSON object per edge of each path.
pub fn paths_json(paths: &[crate::diagram::FinitePath]) -> serde_json::Value {
    let list: Vec<serde_json::Value> = paths
        .iter()
        .map(|p| {
            p.edges()
                .iter()
                .map(|e| {
                    serde_json::json!({
                        "level": e.source.level,
                        "from": e.source.index,
                        "to": e.range.index,
                    })
                })
                .collect::<Vec<_>>()
                .into()
        })
        .collect();
    serde_json::Value::Array(list)
}
