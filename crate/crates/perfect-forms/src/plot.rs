//! Data for drawing the binary partition on the trace plane: each ray `xxᵗ`
//! is a point on the unit circle and each domain is the polygon spanned by
//! its rays.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use perfect_forms_core::walk::{self, PlaneCell};
use perfect_forms_core::{QuadForm, Rational};
use serde_json::{json, Value};

use crate::io;

/// Rays `xxᵗ` with `xᵗx` up to this norm bound the exported cells.
pub const MAX_RAY_NORM: u64 = 13;
/// Cells whose rays all have `xᵗx` at most this are labeled by their form.
pub const LABEL_NORM: u64 = 5;

#[derive(Clone, Debug, PartialEq)]
pub struct Ray {
    pub vector: [i64; 2],
    pub point: (Rational, Rational),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Cell {
    pub form: QuadForm,
    /// Rays in counterclockwise order of their points.
    pub rays: Vec<[i64; 2]>,
    pub labeled: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Partition {
    pub rays: Vec<Ray>,
    pub cells: Vec<Cell>,
}

fn norm(x: &[i64; 2]) -> i64 {
    x[0] * x[0] + x[1] * x[1]
}

fn to_f64(r: &Rational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

fn angle(x: &[i64; 2]) -> f64 {
    let (a, b) = point(x);
    to_f64(&b).atan2(to_f64(&a))
}

fn point(x: &[i64; 2]) -> (Rational, Rational) {
    walk::ray_point(&[BigInt::from(x[0]), BigInt::from(x[1])])
}

/// The representative of `±x` with positive second coordinate, or `(1, 0)`.
fn small(x: &[BigInt]) -> [i64; 2] {
    let (a, b) = (x[0].to_i64().expect("small ray"), x[1].to_i64().expect("small ray"));
    if b < 0 || (b == 0 && a < 0) {
        [-a, -b]
    } else {
        [a, b]
    }
}

pub fn partition() -> Result<Partition, perfect_forms_core::Error> {
    let cells: Vec<PlaneCell> = walk::binary_cells(MAX_RAY_NORM)?;
    let mut rays: Vec<[i64; 2]> = Vec::new();
    let mut out = Vec::new();
    for cell in cells {
        let mut cell_rays: Vec<[i64; 2]> = cell.rays.iter().map(|x| small(x)).collect();
        cell_rays.sort_by(|a, b| angle(a).total_cmp(&angle(b)));
        rays.extend(cell_rays.iter().copied());
        let labeled = cell_rays.iter().all(|x| norm(x) <= LABEL_NORM as i64);
        out.push(Cell { form: cell.form, rays: cell_rays, labeled });
    }
    rays.sort_by_key(|x| (norm(x), *x));
    rays.dedup();
    out.sort_by(|a, b| a.form.entries().cmp(b.form.entries()));
    Ok(Partition { rays: rays.into_iter().map(|vector| Ray { point: point(&vector), vector }).collect(), cells: out })
}

pub fn label(q: &QuadForm) -> String {
    let e = q.entries();
    format!("({},{};{},{})", e[0][0], e[0][1], e[1][0], e[1][1])
}

pub fn to_json(p: &Partition) -> Value {
    let rays: Vec<Value> = p
        .rays
        .iter()
        .map(|r| {
            json!({
                "vector": r.vector,
                "point": [to_f64(&r.point.0), to_f64(&r.point.1)],
                "point_exact": [io::rational_value(&r.point.0), io::rational_value(&r.point.1)],
            })
        })
        .collect();
    let cells: Vec<Value> = p
        .cells
        .iter()
        .map(|c| {
            let polygon: Vec<Value> = c
                .rays
                .iter()
                .map(|x| {
                    let (a, b) = point(x);
                    json!([to_f64(&a), to_f64(&b)])
                })
                .collect();
            json!({
                "form": io::form_value(&c.form),
                "label": if c.labeled { Value::String(label(&c.form)) } else { Value::Null },
                "rays": c.rays,
                "polygon": polygon,
            })
        })
        .collect();
    json!({ "rays": rays, "cells": cells })
}

/// One row per ray and one row per polygon vertex.
pub fn to_csv(p: &Partition) -> String {
    let mut s = String::from("kind,cell,label,a,b,x,y\n");
    for r in &p.rays {
        let (x, y) = (to_f64(&r.point.0), to_f64(&r.point.1));
        s.push_str(&format!("ray,,,{},{},{x},{y}\n", r.vector[0], r.vector[1]));
    }
    for (i, c) in p.cells.iter().enumerate() {
        let name = label(&c.form);
        let shown = if c.labeled { name.as_str() } else { "" };
        for x in &c.rays {
            let (a, b) = point(x);
            s.push_str(&format!("vertex,{i},{shown},{},{},{},{}\n", x[0], x[1], to_f64(&a), to_f64(&b)));
        }
    }
    s
}
