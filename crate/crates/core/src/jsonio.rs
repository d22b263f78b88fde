//! JSON forms for germs and representations, bit-exact by construction:
//! every number is a string (rationals `p/q`, p-adic digit strings,
//! integer polynomial coefficient maps), so round-trips are lossless on
//! every platform.
//!
//! Germ form:    {"ring": <descriptor>, "order": N, "coeffs": [..]}
//! Rep form:     {"presentation": name, "ring": .., "order": N,
//!                "generators": {name: germ}, "certificate": [..]}

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::reps::{Nontriviality, NontrivialityCertificate, RelatorCertificate, Representation};
use crate::rings::{Ring, RingDescriptor};
use crate::series::Germ;

pub fn germ_to_json<R: Ring>(germ: &Germ<R>) -> Value {
    let ring = germ.ring();
    json!({
        "ring": serde_json::to_value(ring.descriptor()).expect("descriptor serializes"),
        "order": germ.order(),
        "coeffs": germ.coeffs().iter().map(|c| ring.elem_to_json(c)).collect::<Vec<_>>(),
    })
}

pub fn germ_from_json<R: Ring>(ring: &R, v: &Value) -> Result<Germ<R>> {
    let obj = v.as_object().ok_or_else(|| Error::Parse("expected germ object".into()))?;
    let descriptor = ring_descriptor_of(v)?;
    if descriptor != ring.descriptor() {
        return Err(Error::WrongRing {
            expected: ring.descriptor().to_string(),
            got: descriptor.to_string(),
        });
    }
    let order = obj
        .get("order")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Parse("missing order".into()))? as usize;
    let coeffs = obj
        .get("coeffs")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("missing coeffs".into()))?;
    if coeffs.len() != order {
        return Err(Error::Parse(format!(
            "order {order} does not match {} coefficients",
            coeffs.len()
        )));
    }
    let elems = coeffs.iter().map(|c| ring.elem_from_json(c)).collect::<Result<Vec<_>>>()?;
    Germ::new(ring.clone(), elems)
}

/// Ring descriptor embedded in a germ or representation JSON value.
pub fn ring_descriptor_of(v: &Value) -> Result<RingDescriptor> {
    let obj = v.as_object().ok_or_else(|| Error::Parse("expected object".into()))?;
    let ring = obj.get("ring").ok_or_else(|| Error::Parse("missing ring descriptor".into()))?;
    serde_json::from_value(ring.clone()).map_err(|e| Error::Parse(e.to_string()))
}

pub fn representation_to_json<R: Ring>(rep: &Representation<R>) -> Value {
    let ring_descriptor = rep
        .generators
        .first()
        .map(|(_, g)| g.ring().descriptor())
        .expect("representations have generators");
    let mut generators = Map::new();
    for (name, germ) in &rep.generators {
        generators.insert(name.clone(), germ_to_json(germ));
    }
    json!({
        "presentation": rep.presentation,
        "ring": serde_json::to_value(ring_descriptor).expect("descriptor serializes"),
        "order": rep.order,
        "generators": Value::Object(generators),
        "certificate": rep.certificate.iter().map(|c| json!({
            "relator": c.relator,
            "verified_to_order": c.verified_to_order,
        })).collect::<Vec<_>>(),
    })
}

pub fn representation_from_json<R: Ring>(ring: &R, v: &Value) -> Result<Representation<R>> {
    let obj = v.as_object().ok_or_else(|| Error::Parse("expected representation object".into()))?;
    let presentation = obj
        .get("presentation")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Parse("missing presentation".into()))?
        .to_string();
    let pres = crate::presentations::lookup(&presentation)?;
    let order = obj
        .get("order")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Parse("missing order".into()))? as usize;
    let generators_json = obj
        .get("generators")
        .and_then(Value::as_object)
        .ok_or_else(|| Error::Parse("missing generators".into()))?;
    let mut generators = Vec::new();
    for name in pres.generator_names() {
        let germ_json = generators_json
            .get(&name)
            .ok_or_else(|| Error::Parse(format!("missing generator `{name}`")))?;
        generators.push((name.clone(), germ_from_json(ring, germ_json)?));
    }
    let certificate = obj
        .get("certificate")
        .and_then(Value::as_array)
        .map(|arr| {
            arr.iter()
                .map(|c| {
                    let relator = c
                        .get("relator")
                        .and_then(Value::as_str)
                        .ok_or_else(|| Error::Parse("certificate entry missing relator".into()))?
                        .to_string();
                    let verified_to_order = c
                        .get("verified_to_order")
                        .and_then(Value::as_u64)
                        .ok_or_else(|| Error::Parse("certificate entry missing order".into()))?
                        as usize;
                    Ok(RelatorCertificate { relator, verified_to_order })
                })
                .collect::<Result<Vec<_>>>()
        })
        .transpose()?
        .unwrap_or_default();
    Ok(Representation { presentation, generators, order, certificate })
}

pub fn certificate_to_json<R: Ring>(
    ring: &R,
    cert: &NontrivialityCertificate<R>,
    names: Option<&[String]>,
) -> Value {
    match &cert.result {
        Nontriviality::Deviates { index, coefficient } => json!({
            "word": cert.word.display(names),
            "status": "nontrivial",
            "first_deviation_index": index,
            "deviating_coefficient": ring.elem_to_json(coefficient),
        }),
        Nontriviality::UndecidedAtOrder(order) => json!({
            "word": cert.word.display(names),
            "status": "undecided",
            "agrees_with_identity_to_order": order,
        }),
    }
}
