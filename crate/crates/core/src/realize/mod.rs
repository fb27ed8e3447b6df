//! Realized systems: covectors of rational hyperplane arrangements, finite or
//! periodic, computed with exact arithmetic.

pub mod arrangement;
pub mod examples;
pub mod lp;
pub mod periodic;

use serde_json::{json, Value};

pub use arrangement::{parse_window, FiniteArrangement, RationalHyperplane, DEFAULT_SEED};
pub use periodic::{PeriodicArrangement, Provenance};

use crate::error::{Error, Result};
use crate::rational::{fmt_q, parse_q, Q};

/// An arrangement read from JSON: a `lattice` key makes it periodic.
#[derive(Clone, Debug)]
pub enum Arrangement {
    Finite(FiniteArrangement),
    Periodic(PeriodicArrangement),
}

fn rational_field(v: &Value, what: &str) -> Result<Q> {
    match v {
        Value::String(s) => parse_q(s),
        Value::Number(n) if n.is_i64() => Ok(crate::rational::q(n.as_i64().unwrap())),
        _ => Err(Error::Parse(format!(
            "{what}: expected a rational string, got {v}"
        ))),
    }
}

fn parse_hyperplanes(v: &Value) -> Result<Vec<RationalHyperplane>> {
    let hs = v
        .as_array()
        .ok_or_else(|| Error::Parse("\"hyperplanes\" must be an array".into()))?;
    hs.iter()
        .enumerate()
        .map(|(i, h)| {
            let name = match h.get("name") {
                Some(Value::String(s)) => s.clone(),
                None => format!("H{}", i + 1),
                Some(other) => return Err(Error::Parse(format!("bad name {other}"))),
            };
            let normal = h
                .get("normal")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse(format!("hyperplane {name}: missing normal")))?
                .iter()
                .map(|x| rational_field(x, &name))
                .collect::<Result<Vec<_>>>()?;
            let offset = match h.get("offset") {
                Some(x) => rational_field(x, &name)?,
                None => crate::rational::q(0),
            };
            Ok(RationalHyperplane::new(name, normal, offset))
        })
        .collect()
}

pub fn parse_arrangement(text: &str) -> Result<Arrangement> {
    let v: Value = serde_json::from_str(text)?;
    let dim = v
        .get("dim")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Parse("missing \"dim\"".into()))? as usize;
    let hs = parse_hyperplanes(v.get("hyperplanes").unwrap_or(&Value::Array(vec![])))?;
    match v.get("lattice") {
        None | Some(Value::Null) => Ok(Arrangement::Finite(FiniteArrangement::new(dim, hs)?)),
        Some(l) => {
            let gens = l
                .as_array()
                .ok_or_else(|| Error::Parse("\"lattice\" must be a list of vectors".into()))?
                .iter()
                .map(|g| {
                    g.as_array()
                        .ok_or_else(|| Error::Parse("lattice generator must be an array".into()))?
                        .iter()
                        .map(|x| {
                            let r = rational_field(x, "lattice")?;
                            if !r.is_integer() {
                                return Err(Error::Parse(
                                    "lattice entries must be integers".into(),
                                ));
                            }
                            num_traits::ToPrimitive::to_i64(&r.to_integer())
                                .ok_or_else(|| Error::TooLarge("lattice entry".into()))
                        })
                        .collect::<Result<Vec<i64>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Arrangement::Periodic(PeriodicArrangement::new(
                dim, hs, gens,
            )?))
        }
    }
}

fn hyperplane_json(h: &RationalHyperplane) -> Value {
    json!({
        "name": h.name,
        "normal": h.normal.iter().map(fmt_q).collect::<Vec<_>>(),
        "offset": fmt_q(&h.offset),
    })
}

pub fn arrangement_to_json(a: &Arrangement) -> Value {
    match a {
        Arrangement::Finite(f) => json!({
            "dim": f.dim(),
            "hyperplanes": f.hyperplanes().iter().map(hyperplane_json).collect::<Vec<_>>(),
        }),
        Arrangement::Periodic(p) => json!({
            "dim": p.dim(),
            "hyperplanes": p.reps().iter().map(hyperplane_json).collect::<Vec<_>>(),
            "lattice": p.lattice(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_finite_and_periodic() {
        let f = parse_arrangement(
            r#"{"dim":2,"hyperplanes":[{"name":"H1","normal":["1","-1"],"offset":"0"},{"name":"H4","normal":[0,1],"offset":"-1"}]}"#,
        )
        .unwrap();
        assert!(matches!(f, Arrangement::Finite(ref a) if a.len() == 2));
        let text = serde_json::to_string(&arrangement_to_json(&f)).unwrap();
        let again = parse_arrangement(&text).unwrap();
        assert_eq!(arrangement_to_json(&again), arrangement_to_json(&f));

        let p = parse_arrangement(
            r#"{"dim":1,"hyperplanes":[{"name":"x","normal":["1"],"offset":"0"}],"lattice":[["1"]]}"#,
        )
        .unwrap();
        assert!(matches!(p, Arrangement::Periodic(_)));
    }

    #[test]
    fn rejects_fractional_lattice() {
        let r = parse_arrangement(
            r#"{"dim":1,"hyperplanes":[{"name":"x","normal":["1"]}],"lattice":[["1/2"]]}"#,
        );
        assert!(r.is_err());
    }
}
