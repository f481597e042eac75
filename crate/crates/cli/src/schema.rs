//! The JSON file formats: rings, complexes, filtrations, subsets, and
//! complex lists.  Elements are exact strings (decimal integers, polynomial
//! expressions in `x`, fractions over localized rings).

use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use tstruct_core::complex::PerfectComplex;
use tstruct_core::exactalg::{
    parse_element, BaseRing, Matrix, PrimePoint, RingDescriptor, RingElement,
};
use tstruct_core::supports::{Filtration, SpecSubset};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RingJson {
    pub base: BaseJson,
    #[serde(default = "default_invert")]
    pub invert: String,
}

fn default_invert() -> String {
    "1".to_string()
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub enum BaseJson {
    #[serde(rename = "Z")]
    Z,
    Fp(u32),
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum SubsetJson {
    Keyword(String),
    Finite(Vec<String>),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplexJson {
    pub ring: RingJson,
    #[serde(default)]
    pub terms: BTreeMap<String, usize>,
    #[serde(default)]
    pub diff: BTreeMap<String, Vec<Vec<String>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FiltrationJson {
    pub ring: RingJson,
    pub head: SubsetJson,
    #[serde(default)]
    pub steps: Vec<(i64, SubsetJson)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplexListJson {
    pub complexes: Vec<ComplexJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SubsetFileJson {
    pub ring: RingJson,
    pub subset: SubsetJson,
}

// ---- conversions to core ----

pub fn ring_to_core(r: &RingJson) -> Result<RingDescriptor> {
    let base = match &r.base {
        BaseJson::Z => RingDescriptor::integers(),
        BaseJson::Fp(p) => RingDescriptor::poly_over_fp(*p)?,
    };
    let inv = parse_element(&base, &r.invert)
        .with_context(|| format!("bad inverted element '{}'", r.invert))?;
    if base.is_zero(&inv) {
        bail!("cannot invert zero");
    }
    Ok(base.localize(&inv)?)
}

pub fn ring_to_json(ring: &RingDescriptor) -> RingJson {
    let base = match ring.base() {
        BaseRing::Integers => BaseJson::Z,
        BaseRing::PolyOverFp { p } => BaseJson::Fp(*p),
    };
    RingJson {
        base,
        invert: format!("{}", ring.inverted()),
    }
}

pub fn element_to_core(ring: &RingDescriptor, s: &str) -> Result<RingElement> {
    Ok(parse_element(ring, s)?)
}

pub fn subset_to_core(ring: &RingDescriptor, s: &SubsetJson) -> Result<SpecSubset> {
    match s {
        SubsetJson::Keyword(k) if k == "all" => Ok(SpecSubset::All),
        SubsetJson::Keyword(k) => bail!("unknown subset keyword '{k}' (expected \"all\")"),
        SubsetJson::Finite(items) => {
            let mut points = vec![];
            for item in items {
                let e = parse_element(ring, item)
                    .with_context(|| format!("bad point '{item}'"))?;
                if e.fexp() != 0 {
                    bail!("point '{item}' is not a base element");
                }
                points.push(
                    PrimePoint::new(ring, e.numerator().clone())
                        .with_context(|| format!("bad point '{item}'"))?,
                );
            }
            Ok(SpecSubset::finite(points))
        }
    }
}

pub fn subset_to_json(ring: &RingDescriptor, s: &SpecSubset) -> SubsetJson {
    let _ = ring;
    match s {
        SpecSubset::All => SubsetJson::Keyword("all".to_string()),
        SpecSubset::Finite(points) => SubsetJson::Finite(
            points
                .iter()
                .map(|p| format!("{}", p.generator()))
                .collect(),
        ),
    }
}

/// Builds and fully validates a complex (shape and `d o d = 0`).
pub fn complex_to_core(c: &ComplexJson) -> Result<PerfectComplex> {
    let ring = ring_to_core(&c.ring)?;
    let mut degrees: Vec<i64> = vec![];
    for k in c.terms.keys() {
        degrees.push(
            k.parse::<i64>()
                .map_err(|_| anyhow!("bad degree key '{k}'"))?,
        );
    }
    if degrees.is_empty() {
        return Ok(PerfectComplex::zero(ring));
    }
    degrees.sort_unstable();
    let lo = degrees[0];
    let hi = *degrees.last().unwrap();
    let rank = |d: i64| -> usize {
        c.terms.get(&d.to_string()).copied().unwrap_or(0)
    };
    let mut ranks = vec![];
    let mut diffs = vec![];
    for n in lo..=hi {
        ranks.push(rank(n));
        if n < hi {
            let entries = c.diff.get(&n.to_string());
            let m = match entries {
                None => Matrix::zero(&ring, rank(n + 1), rank(n)),
                Some(rows) => {
                    if rows.len() != rank(n + 1)
                        || rows.iter().any(|r| r.len() != rank(n))
                    {
                        bail!(
                            "differential at degree {n} must be {}x{}",
                            rank(n + 1),
                            rank(n)
                        );
                    }
                    let mut parsed: Vec<Vec<RingElement>> = vec![];
                    for row in rows {
                        let mut out = vec![];
                        for cell in row {
                            out.push(
                                parse_element(&ring, cell)
                                    .with_context(|| format!("bad entry '{cell}'"))?,
                            );
                        }
                        parsed.push(out);
                    }
                    Matrix::from_rows(&ring, parsed)?
                }
            };
            diffs.push(m);
        }
    }
    let cx = PerfectComplex::new(ring, lo, ranks, diffs)?;
    Ok(cx)
}

/// Serializes a complex with numerically ordered degree keys.
pub fn complex_to_json(c: &PerfectComplex) -> Value {
    let ring = c.ring();
    let mut terms = Map::new();
    let mut diff = Map::new();
    if let (Some(lo), Some(hi)) = (c.lo(), c.hi()) {
        for n in lo..=hi {
            if c.rank(n) > 0 {
                terms.insert(n.to_string(), json!(c.rank(n)));
            }
            if n < hi {
                let d = c.diff_or_zero(n);
                if d.rows() == 0 || d.cols() == 0 {
                    continue;
                }
                let rows: Vec<Value> = (0..d.rows())
                    .map(|i| {
                        Value::Array(
                            (0..d.cols())
                                .map(|j| json!(ring.format_element(d.get(i, j))))
                                .collect(),
                        )
                    })
                    .collect();
                diff.insert(n.to_string(), Value::Array(rows));
            }
        }
    }
    json!({
        "ring": serde_json::to_value(ring_to_json(ring)).unwrap(),
        "terms": Value::Object(terms),
        "diff": Value::Object(diff),
    })
}

pub fn filtration_to_core(f: &FiltrationJson) -> Result<Filtration> {
    let ring = ring_to_core(&f.ring)?;
    let head = subset_to_core(&ring, &f.head)?;
    let mut steps = vec![];
    for (d, s) in &f.steps {
        steps.push((*d, subset_to_core(&ring, s)?));
    }
    Ok(Filtration::new(ring, head, steps)?)
}

pub fn filtration_to_json(phi: &Filtration) -> Value {
    let ring = phi.ring();
    let steps: Vec<Value> = phi
        .steps()
        .iter()
        .map(|(d, s)| json!([d, serde_json::to_value(subset_to_json(ring, s)).unwrap()]))
        .collect();
    json!({
        "ring": serde_json::to_value(ring_to_json(ring)).unwrap(),
        "head": serde_json::to_value(subset_to_json(ring, phi.head())).unwrap(),
        "steps": steps,
    })
}

pub fn complex_list_to_core(l: &ComplexListJson) -> Result<(RingDescriptor, Vec<PerfectComplex>)> {
    if l.complexes.is_empty() {
        bail!("empty complex list");
    }
    let mut out = vec![];
    for c in &l.complexes {
        out.push(complex_to_core(c)?);
    }
    let ring = out[0].ring().clone();
    for c in &out {
        ring.same_ring(c.ring())?;
    }
    Ok((ring, out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cone2_json() -> ComplexJson {
        serde_json::from_value(json!({
            "ring": {"base": "Z", "invert": "1"},
            "terms": {"-1": 1, "0": 1},
            "diff": {"-1": [["2"]]}
        }))
        .unwrap()
    }

    #[test]
    fn complex_roundtrip() {
        let c = complex_to_core(&cone2_json()).unwrap();
        assert_eq!(c.lo(), Some(-1));
        let v = complex_to_json(&c);
        let back: ComplexJson = serde_json::from_value(v.clone()).unwrap();
        let c2 = complex_to_core(&back).unwrap();
        assert_eq!(c, c2);
        // and byte-stable
        assert_eq!(
            serde_json::to_string(&v).unwrap(),
            serde_json::to_string(&complex_to_json(&c2)).unwrap()
        );
    }

    #[test]
    fn localized_ring_roundtrip() {
        let r: RingJson = serde_json::from_value(json!({"base": "Z", "invert": "12"})).unwrap();
        let ring = ring_to_core(&r).unwrap();
        // canonical squarefree form
        assert_eq!(format!("{}", ring.inverted()), "6");
        let back = ring_to_json(&ring);
        assert_eq!(back.invert, "6");
        assert_eq!(ring_to_core(&back).unwrap(), ring);
    }

    #[test]
    fn filtration_roundtrip() {
        let f: FiltrationJson = serde_json::from_value(json!({
            "ring": {"base": "Z", "invert": "1"},
            "head": ["2", "3"],
            "steps": [[1, ["2"]], [2, []]]
        }))
        .unwrap();
        let phi = filtration_to_core(&f).unwrap();
        assert!(phi.validate().is_ok());
        let v = filtration_to_json(&phi);
        let back: FiltrationJson = serde_json::from_value(v).unwrap();
        assert_eq!(filtration_to_core(&back).unwrap(), phi);
    }

    #[test]
    fn poly_ring_parse() {
        let f: FiltrationJson = serde_json::from_value(json!({
            "ring": {"base": {"Fp": 2}, "invert": "1"},
            "head": ["x", "x+1"],
            "steps": [[1, []]]
        }))
        .unwrap();
        let phi = filtration_to_core(&f).unwrap();
        assert_eq!(phi.value(0).format(phi.ring()), "{(x), (x+1)}");
    }

    #[test]
    fn rejects_bad_input() {
        // non-prime subset point
        let f: FiltrationJson = serde_json::from_value(json!({
            "ring": {"base": "Z", "invert": "1"},
            "head": ["4"],
            "steps": [[1, []]]
        }))
        .unwrap();
        assert!(filtration_to_core(&f).is_err());

        // wrong differential shape
        let c: ComplexJson = serde_json::from_value(json!({
            "ring": {"base": "Z", "invert": "1"},
            "terms": {"-1": 2, "0": 1},
            "diff": {"-1": [["2"]]}
        }))
        .unwrap();
        assert!(complex_to_core(&c).is_err());
    }
}
