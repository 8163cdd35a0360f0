use rand::Rng;
use serde_json::{json, Map, Value};

use streetflow::builder::generator::random_building_data;
use streetflow::builder::minimal::minimal_types;
use streetflow::builder::{matching_tori, BuildingData};
use streetflow::curves::{
    curve_word, curve_word_signed, display_primed, display_torus, fiber_count, lift, matrix_factor, segment_chain,
    upper_triangle, CurveClass, UniMatrix,
};
use streetflow::homotopy::word::SURFACE;
use streetflow::homotopy::{abelianize, dehn_reduce, homology_original_basis, pass_homology, represent, Time};
use streetflow::hyperelliptic::{classify_class, perturbation_bound_note, FormSpec, Poly, RealHyperelliptic};
use streetflow::oracle::GluedRealization;
use streetflow::semigroup::{closed_curve_verdict, enumerate_level, max_depth, word, ClosedCurve, SemigroupWord};
use streetflow::streets::{street_triple, Street, StreetTriple};
use streetflow::transition::{build_transition, sigma_string, BrokenIsometry};
use streetflow::{Error, FoliationSpec, Interval, LatticeVector, Plane, Scalar};

use crate::{svg, Failure, Output};

type Res = Result<Output, Failure>;

fn interval(i: &Interval) -> Value {
    json!([i.lo, i.hi])
}

fn vector(v: LatticeVector) -> Value {
    json!([v.p, v.q])
}

fn by_street<F: Fn(Street) -> Value>(f: F) -> Value {
    let mut m = Map::new();
    for s in Street::ORDER {
        m.insert(s.label().to_string(), f(s));
    }
    Value::Object(m)
}

fn triples(spec: &FoliationSpec) -> Result<(StreetTriple, StreetTriple), Error> {
    Ok((street_triple(spec, Plane::One)?, street_triple(spec, Plane::Two)?))
}

fn transition_of(spec: &FoliationSpec) -> Result<(StreetTriple, StreetTriple, BrokenIsometry), Error> {
    let (t1, t2) = triples(spec)?;
    let bi = build_transition(&t1, &t2)?;
    Ok((t1, t2, bi))
}

fn plane_doc(t: &StreetTriple) -> Value {
    let basis = t.mbasis_homology();
    json!({
        "plane": t.plane.index(),
        "widths": by_street(|s| json!(t.width(s))),
        "heights": by_street(|s| vector(t.height(s))),
        "intervals": by_street(|s| interval(&t.interval(s))),
        "return_shifts": by_street(|s| json!(t.return_shift(s))),
        "cut_points": t.cut_points(),
        "ua_pair": [t.ua_pair.0, t.ua_pair.1],
        "by_pair": [t.by_pair.0, t.by_pair.1],
        "basis": {
            "a_star": vector(basis.a_star),
            "b_star": vector(basis.b_star),
            "matrix": basis.matrix,
            "det": basis.det,
        },
    })
}

pub fn streets(spec: &FoliationSpec, svg_out: bool) -> Res {
    let (t1, t2) = triples(spec)?;
    if svg_out {
        return Ok(Output::Text(svg::streets(spec, &t1, &t2)));
    }
    Ok(Output::Json(json!({
        "spec": spec.to_json(),
        "m": spec.m,
        "planes": [plane_doc(&t1), plane_doc(&t2)],
    })))
}

fn pair_name(p: (Street, Street)) -> String {
    format!("{} {}'", p.0.label(), p.1.label())
}

pub fn transition(spec: &FoliationSpec) -> Res {
    let (_, _, bi) = transition_of(spec)?;
    let row = bi.ty.row();
    let pieces: Vec<Value> = (0..5)
        .map(|q| {
            json!({
                "letter": q + 1,
                "domain": interval(&bi.tau[q]),
                "shift": bi.shifts[q],
                "image": interval(&bi.images()[q]),
                "pair": pair_name(bi.pairs[q]),
            })
        })
        .collect();
    let mut measures = Map::new();
    for a in Street::ORDER {
        let mut inner = Map::new();
        for b in Street::ORDER {
            inner.insert(format!("{}'", b.label()), json!(bi.pair_measures[a.label() as usize][b.label() as usize]));
        }
        measures.insert(a.label().to_string(), Value::Object(inner));
    }
    Ok(Output::Json(json!({
        "spec": spec.to_json(),
        "type": bi.ty.to_string(),
        "sigma": sigma_string(&bi.sigma),
        "reference_sigma": row.printed_sigma,
        "pieces": pieces,
        "pair_measures": measures,
        "points": {
            "3*": bi.points.three_star,
            "0*": bi.points.zero_star,
            "1'": bi.points.one_prime,
            "2'": bi.points.two_prime,
        },
        "cut_points": bi.cut_points(),
    })))
}

fn verdict(w: &SemigroupWord) -> Value {
    match closed_curve_verdict(w) {
        Ok(ClosedCurve::PositiveClosed(m)) => json!({"kind": "positive_closed", "measure": m}),
        Ok(ClosedCurve::NegativeClosed(m)) => json!({"kind": "negative_closed", "measure": m}),
        Err(_) => json!({"kind": "zero_shift"}),
    }
}

fn word_doc(w: &SemigroupWord) -> Value {
    json!({
        "letters": w.letters_string(),
        "carrier": interval(&w.carrier),
        "measure": w.measure(),
        "shift": w.shift,
        "verdict": verdict(w),
    })
}

pub fn words(spec: &FoliationSpec, depth: usize) -> Res {
    let bound = max_depth();
    if depth > bound {
        return Err(Failure::resource(format!("depth {depth} exceeds the bound {bound}; raise STREETFLOW_MAX_DEPTH")));
    }
    let (_, _, bi) = transition_of(spec)?;
    let mut levels = Vec::new();
    for n in 1..=depth {
        let ws = enumerate_level(&bi, n)?;
        levels.push(json!({"length": n, "count": ws.len(), "words": ws.iter().map(word_doc).collect::<Vec<_>>()}));
    }
    Ok(Output::Json(json!({"spec": spec.to_json(), "type": bi.ty.to_string(), "max_depth": bound, "levels": levels})))
}

fn parse_letters(s: &str) -> Result<Vec<u8>, Error> {
    s.chars()
        .filter(|c| !c.is_whitespace() && *c != ',')
        .map(|c| match c.to_digit(10) {
            Some(d @ 1..=5) => Ok(d as u8),
            _ => Err(Error::Parse(format!("word letters are 1..5, got {c:?}"))),
        })
        .collect()
}

pub fn pi1(spec: &FoliationSpec, letters: &str, negative: bool) -> Res {
    let letters = parse_letters(letters)?;
    if letters.is_empty() {
        return Err(Error::Parse("empty word".into()).into());
    }
    let (t1, t2, bi) = transition_of(spec)?;
    let w = word(&bi, &letters)?;
    if w.is_zero() {
        return Err(Error::Domain(format!("word {} is zero", w.letters_string())).into());
    }
    let time = if negative { Time::Negative } else { Time::Positive };
    let class = represent(&bi, &w, time)?;
    let pairs: Vec<(Street, Street)> = w.letters.iter().map(|&q| bi.pairs[q as usize - 1]).collect();
    let h = abelianize(&class);
    Ok(Output::Json(json!({
        "spec": spec.to_json(),
        "type": bi.ty.to_string(),
        "word": word_doc(&w),
        "time": if negative { "negative" } else { "positive" },
        "pairs": pairs.iter().map(|&p| pair_name(p)).collect::<Vec<_>>(),
        "class": class.display(SURFACE),
        "reduced": dehn_reduce(&class).display(SURFACE),
        "homology": h,
        "street_homology": pass_homology(&pairs),
        "homology_original_basis": homology_original_basis(h, &t1.mbasis_homology(), &t2.mbasis_homology()),
    })))
}

pub fn curve(k: i64, l: i64, r: Option<u32>) -> Res {
    let signed = curve_word_signed(k, l)?;
    let mut doc = json!({"k": k, "l": l, "word": display_primed(&signed)});
    let class = (k > 0 && l > 0).then(|| CurveClass::new(k as u32, l as u32).ok()).flatten();
    if let Some(c) = class {
        let chain = segment_chain(c)?;
        doc["positive_word"] = json!(display_primed(&curve_word(c)?));
        doc["segment_order"] = json!(chain.order);
        doc["segments"] = json!(chain
            .segments
            .iter()
            .map(|s| json!({"j": s.j, "start": s.start, "end": format!("{}'", s.end_primed)}))
            .collect::<Vec<_>>());
        if let Some(r) = r {
            doc["upper_triangle"] = json!({"r": r, "word": display_torus(&upper_triangle(c, r)?)});
        }
    } else if r.is_some() {
        return Err(Error::Domain("the upper-triangle form needs k > l > 0 coprime".into()).into());
    }
    Ok(Output::Json(doc))
}

pub fn matrix(entries: &[i64]) -> Res {
    let [k, l, p, q] = entries else {
        return Err(Error::Parse("--entries takes four integers k,l,p,q".into()).into());
    };
    let t = UniMatrix::new(*k, *l, *p, *q)?;
    let gens = matrix_factor(t)?;
    let (a, b) = lift(t)?.display();
    let fiber = if t.entry_sum() >= 3 {
        let f = fiber_count(t)?;
        json!({
            "count": f.count,
            "chain": f.chain.iter().map(|p| { let (a, b) = p.display(); json!([a, b]) }).collect::<Vec<_>>(),
        })
    } else {
        Value::Null
    };
    Ok(Output::Json(json!({
        "matrix": [[k, p], [l, q]],
        "entry_sum": t.entry_sum(),
        "factorization": gens.iter().map(|g| format!("{g:?}")).collect::<Vec<_>>(),
        "lift": {"a": a, "b": b},
        "fiber": fiber,
    })))
}

fn violations_failure(v: &[streetflow::builder::Violation]) -> Failure {
    let first = &v[0];
    Failure::validation(first.condition, first.detail.clone(), serde_json::to_value(v).expect("violations serialize"))
}

fn building_doc(data: &BuildingData) -> Result<Value, Failure> {
    let v = data.validate();
    if !v.is_empty() {
        return Err(violations_failure(&v));
    }
    let glued = data.glue()?;
    let class = glued.classify()?;
    Ok(json!({
        "data": data,
        "genus": glued.genus,
        "t": glued.t,
        "r": glued.r,
        "saddles": glued.saddles.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
        "center_pairs": glued.center_pairs,
        "classification": class,
    }))
}

pub fn build_from(v: &Value, svg_out: bool) -> Res {
    let data: BuildingData = serde_json::from_value(v.get("data").cloned().unwrap_or_else(|| v.clone()))
        .map_err(|e| Error::Parse(e.to_string()))?;
    if svg_out {
        let shape = data.tree.shape_violations();
        if !shape.is_empty() {
            return Err(violations_failure(&shape));
        }
        return Ok(Output::Text(svg::tree(&data.tree)));
    }
    Ok(Output::Json(building_doc(&data)?))
}

pub fn build_minimal(g: usize, svg_out: bool) -> Res {
    let types = minimal_types(g)?;
    if svg_out {
        let trees: Vec<_> = types.iter().map(|(ty, t)| (format!("type {}", ty.label()), t.clone())).collect();
        return Ok(Output::Text(svg::trees(&trees)));
    }
    let mut out = Vec::new();
    for (ty, tree) in types {
        let tori = matching_tori(&tree)?;
        let data = BuildingData { tree, tori };
        let mut doc = building_doc(&data)?;
        doc["minimal_type"] = json!(ty.label().to_string());
        out.push(doc);
    }
    Ok(Output::Json(json!({"genus": g, "diagrams": out})))
}

pub fn build_random<R: Rng>(rng: &mut R, max_genus: u32, svg_out: bool) -> Res {
    let data = random_building_data(rng, max_genus, 64);
    if svg_out {
        return Ok(Output::Text(svg::tree(&data.tree)));
    }
    Ok(Output::Json(building_doc(&data)?))
}

fn rational(s: &str) -> Result<Scalar, Error> {
    let x: Scalar = s.parse()?;
    if !x.is_rational() {
        return Err(Error::Parse(format!("branch point {s} is not rational")));
    }
    Ok(x)
}

pub fn hyper(roots: &[String], u: &str, v: &str) -> Res {
    let roots = roots.iter().map(|r| rational(r).map(|x| x.rational_part().clone())).collect::<Result<Vec<_>, _>>()?;
    let curve = RealHyperelliptic::new(roots)?;
    let form = FormSpec { u: Poly::parse(u)?, v: Poly::parse(v)? };
    let verdict = classify_class(&curve, &form)?;
    Ok(Output::Json(json!({
        "roots": curve.roots().iter().map(|r| Scalar::rational(r.clone())).collect::<Vec<_>>(),
        "form": form,
        "verdict": verdict,
        "perturbation": perturbation_bound_note(&curve, &form),
    })))
}

/// Uniform point of `(0, m)` on a fine grid, kept in the field of `m`.
fn sample_point<R: Rng>(rng: &mut R, m: &Scalar) -> Scalar {
    m * &Scalar::ratio(rng.gen_range(1..10_007), 10_007)
}

pub fn simulate<R: Rng>(spec: &FoliationSpec, points: usize, steps: usize, rng: &mut R) -> Res {
    let (t1, t2, bi) = transition_of(spec)?;
    let glued = GluedRealization::new(spec)?;
    let mut agree = 0usize;
    let mut mismatches = Vec::new();
    let mut starts = Vec::with_capacity(points);
    for _ in 0..points {
        let x0 = sample_point(rng, &spec.m);
        starts.push(x0.clone());
        let oracle = glued.itinerary(&x0, steps)?;
        let mut x = x0;
        for (i, step) in oracle.iter().enumerate() {
            let q = bi.letter_at(&x).ok_or_else(|| Error::Domain(format!("{x} left the slit")))?;
            let next = bi.apply(&x).map_err(|e| match e {
                Error::CutPoint { x, .. } => Error::CutPoint { x, step: i },
                other => other,
            })?;
            let a = Street::ORDER.into_iter().find(|&s| t1.height(s) == step.first.displacement);
            let b = Street::ORDER.into_iter().find(|&s| t2.height(s) == step.second.displacement);
            if &next == step.landing() && a.zip(b) == Some(bi.pairs[q]) {
                agree += 1;
            } else if mismatches.len() < 10 {
                mismatches.push(json!({"start": starts.last(), "step": i, "model": next, "oracle": step.landing()}));
            }
            x = step.landing().clone();
        }
    }
    Ok(Output::Json(json!({
        "spec": spec.to_json(),
        "type": bi.ty.to_string(),
        "points": points,
        "steps": steps,
        "compared": points * steps,
        "agree": agree,
        "mismatches": mismatches,
    })))
}
