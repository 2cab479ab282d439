//! JSON helpers shared by the library and the command line.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::symcore::{parse, RationalPoint, VarName};

/// Parse a rational from a JSON integer or a string such as `"-3/4"`.
pub fn rational_from_json(v: &Value) -> Result<BigRational> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigRational::from_integer(BigInt::from(i)))
            } else if let Some(u) = n.as_u64() {
                Ok(BigRational::from_integer(BigInt::from(u)))
            } else {
                Err(Error::Input(format!("non-integer number {n}; write rationals as strings like \"1/3\"")))
            }
        }
        Value::String(s) => {
            let e = parse(s)?;
            e.constant_value().ok_or_else(|| Error::Input(format!("`{s}` is not a rational constant")))
        }
        other => Err(Error::Input(format!("expected a number, found {other}"))),
    }
}

/// `{"x": 0, "t": "1/2"}` into a point.
pub fn point_from_json(v: &Value) -> Result<RationalPoint> {
    let obj = v.as_object().ok_or_else(|| Error::Input("a point must be a JSON object".into()))?;
    obj.iter()
        .map(|(k, x)| Ok((VarName::new(k)?, rational_from_json(x)?)))
        .collect()
}

/// A single point or a list of points.
pub fn points_from_json(v: &Value) -> Result<Vec<RationalPoint>> {
    match v {
        Value::Array(a) => a.iter().map(point_from_json).collect(),
        Value::Object(_) => Ok(vec![point_from_json(v)?]),
        _ => Err(Error::Input("expected a point object or a list of points".into())),
    }
}

pub fn point_to_json(pt: &RationalPoint) -> Value {
    let mut m = serde_json::Map::new();
    for (k, v) in pt {
        let val = if v.is_integer() {
            v.to_integer().to_string().parse::<serde_json::Number>().map(Value::Number).unwrap_or_else(|_| Value::String(v.to_string()))
        } else {
            Value::String(v.to_string())
        };
        m.insert(k.to_string(), val);
    }
    Value::Object(m)
}
