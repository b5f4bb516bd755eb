//! Executable checks of the structure of a materialized window of `Λ̃`.

use std::collections::BTreeSet;

use crate::alignment::{enumerate_min_fe, is_exhaustive, mce, ExhaustiveVerdict};
use crate::degree::Degree;
use crate::error::{Error, Result};
use crate::path::{Path, VertexId};
use crate::tally::{PropertyReport, Tally};

use super::{project_pi_infinite, DMorph, Desource, DesourcedWindow};

/// Skips instances that reach beyond the window.
fn windowed<T>(r: Result<T>, tally: &mut Tally) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::WindowExceeded(_)) | Err(Error::NoWitnessInWindow(_)) => {
            tally.skipped += 1;
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

/// Every window path from `v` of degree at most the room left at `v`.
fn window_paths(dw: &DesourcedWindow, v: VertexId) -> Result<Option<Vec<Path>>> {
    let room = dw.window.checked_sub(&dw.vertices[v as usize].c).expect("offset inside window");
    match dw.graph.paths_up_to(v, &room) {
        Ok(p) => Ok(Some(p)),
        Err(Error::WindowExceeded(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

fn key_of(dw: &DesourcedWindow, v: VertexId) -> crate::desource::VertexKey {
    dw.vertices[v as usize].key()
}

/// Category laws, factorization, absence of sources in the guard, and the
/// preservation properties for common extensions, exhaustive sets and `π`.
pub fn check_desourced(ds: &Desource, dw: &DesourcedWindow) -> Result<PropertyReport> {
    let g = ds.graph;
    let tg = &dw.graph;
    let k = g.rank();
    let fmt = |p: &Path| tg.format_path(p);

    let mut degree = Tally::new("degree_and_ends");
    let mut factor = Tally::new("factorization");
    let mut complete = Tally::new("completeness");
    let mut assoc = Tally::new("associativity");
    let mut ident = Tally::new("identity");
    let mut morphs: Vec<Vec<(Path, DMorph)>> = Vec::new();

    for v in tg.vertices() {
        let Some(paths) = window_paths(dw, v)? else {
            degree.skipped += 1;
            morphs.push(Vec::new());
            continue;
        };
        let mut here = Vec::new();
        for p in paths {
            let m = dw.morph_of_path(ds, &p)?;
            degree.record(
                &m.b == p.degree() && m.range() == key_of(dw, p.range()) && m.source() == key_of(dw, p.source()),
                || fmt(&p),
            );
            if let Some(back) = windowed(dw.path_of_morph(ds, &m), &mut factor)? {
                factor.record(back == p, || format!("{} refactors as {}", fmt(&p), fmt(&back)));
            }
            let d = p.degree().clone();
            for n in d.box_below() {
                let left = ds.segment_d(&m, &Degree::zero(k), &n)?;
                let right = ds.segment_d(&m, &n, &d)?;
                let by_path = dw.morph_of_path(ds, &tg.segment(&p, &Degree::zero(k), &n)?)?;
                factor.record(left == by_path && ds.compose_d(&left, &right)? == m, || format!("{} at {n}", fmt(&p)));
                for n2 in d.box_below().into_iter().filter(|n2| n.leq(n2)) {
                    let a = left.clone();
                    let b = ds.segment_d(&m, &n, &n2)?;
                    let c = ds.segment_d(&m, &n2, &d)?;
                    let lhs = ds.compose_d(&ds.compose_d(&a, &b)?, &c)?;
                    let rhs = ds.compose_d(&a, &ds.compose_d(&b, &c)?)?;
                    assoc.record(lhs == rhs, || format!("{} at {n}, {n2}", fmt(&p)));
                }
            }
            let src = ds.source_vertex(&m)?;
            let rng = ds.range_vertex(&m);
            ident.record(
                ds.compose_d(&m, &ds.identity(&src))? == m && ds.compose_d(&ds.identity(&rng), &m)? == m,
                || fmt(&p),
            );
            here.push((p, m));
        }
        // Morphisms listed from the admissibility conditions match the window paths.
        let (vb, c) = key_of(dw, v);
        let room = dw.window.sub(&c);
        for b in room.box_below() {
            let (direct, pending) = ds.morphs_from(vb, &c, &b)?;
            complete.skipped += pending.len();
            let direct: BTreeSet<DMorph> = direct.into_iter().filter(|m| dw.vertex_of(&m.source()).is_some()).collect();
            let listed: BTreeSet<DMorph> = here.iter().filter(|(p, _)| p.degree() == &b).map(|(_, m)| m.clone()).collect();
            complete.record(direct == listed, || format!("{} in degree {b}", tg.vertex_name(v)));
        }
        morphs.push(here);
    }

    let mut sources = Tally::new("no_sources_in_guard");
    for v in tg.vertices().filter(|&v| dw.is_guarded(v)) {
        for i in 0..k {
            sources.record(!tg.edges_into(v, i).is_empty(), || format!("{} in color {}", tg.vertex_name(v), i + 1));
        }
    }

    let mut mce_pres = Tally::new("mce_preservation");
    let mut fe_pres = Tally::new("fe_preservation");
    for v in g.vertices() {
        let Some(ev) = dw.embedded(v) else { continue };
        let Ok(base) = g.paths_up_to(v, &dw.window) else {
            mce_pres.skipped += 1;
            continue;
        };
        for (i, mu) in base.iter().enumerate() {
            for nu in &base[i..] {
                let Some(ext) = windowed(mce(g, mu, nu), &mut mce_pres)? else { continue };
                let (Some(im), Some(iv)) = (
                    windowed(ds.embed_iota(mu).and_then(|m| dw.path_of_morph(ds, &m)), &mut mce_pres)?,
                    windowed(ds.embed_iota(nu).and_then(|m| dw.path_of_morph(ds, &m)), &mut mce_pres)?,
                ) else {
                    continue;
                };
                let Some(tilde) = windowed(mce(tg, &im, &iv), &mut mce_pres)? else { continue };
                let lifted: Result<BTreeSet<DMorph>> = ext.iter().map(|p| ds.embed_iota(p)).collect();
                let Some(lifted) = windowed(lifted, &mut mce_pres)? else { continue };
                let found: BTreeSet<DMorph> =
                    tilde.iter().map(|p| dw.morph_of_path(ds, p)).collect::<Result<_>>()?;
                mce_pres.record(found == lifted, || format!("{} and {}", g.format_path(mu), g.format_path(nu)));
            }
        }
        let ones = Degree::new(vec![1; k]);
        let Some(fe) = windowed(enumerate_min_fe(g, v, &ones, &dw.window), &mut fe_pres)? else { continue };
        for set in &fe.sets {
            let lifted: Result<Vec<Path>> =
                set.iter().map(|p| ds.embed_iota(p).and_then(|m| dw.path_of_morph(ds, &m))).collect();
            let Some(lifted) = windowed(lifted, &mut fe_pres)? else { continue };
            match is_exhaustive(tg, ev, &lifted, &dw.window)? {
                ExhaustiveVerdict::Yes => fe_pres.record(true, String::new),
                ExhaustiveVerdict::No(w) => fe_pres.record(false, || format!("{:?} misses {}", set, fmt(&w))),
                ExhaustiveVerdict::UnknownUpTo(_) => fe_pres.skipped += 1,
            }
        }
    }

    let mut count = Tally::new("mce_count_identity");
    let mut count_bound = Tally::new("mce_count_bound");
    let mut cyl = Tally::new("projection_cylinder");
    let mut proj_mce = Tally::new("projection_mce");
    let mut unique = Tally::new("projection_uniqueness");
    for v in tg.vertices() {
        let here = &morphs[v as usize];
        let embedded = dw.is_embedded_vertex(v);
        for (i, (p, pm)) in here.iter().enumerate() {
            for (q, qm) in &here[i..] {
                if p.degree().leq(q.degree()) && tg.has_prefix(q, p)? {
                    cyl.record(
                        pm.lambda.degree().leq(qm.lambda.degree()) && g.has_prefix(&qm.lambda, &pm.lambda)?,
                        || format!("{} under {}", fmt(q), fmt(p)),
                    );
                }
                let Some(ext) = windowed(mce(tg, p, q), &mut proj_mce)? else { continue };
                let Some(base_ext) = windowed(mce(g, &pm.lambda, &qm.lambda), &mut proj_mce)? else { continue };
                let projected: BTreeSet<Path> =
                    ext.iter().map(|e| Ok(dw.morph_of_path(ds, e)?.lambda)).collect::<Result<_>>()?;
                let base_set: BTreeSet<Path> = base_ext.iter().cloned().collect();
                proj_mce.record(projected.is_subset(&base_set), || format!("{} and {}", fmt(p), fmt(q)));
                if embedded {
                    count.record(ext.len() == base_ext.len(), || {
                        format!("|MCE({}, {})| = {} but {} below", fmt(p), fmt(q), ext.len(), base_ext.len())
                    });
                    count_bound.record(ext.len() <= base_ext.len(), || format!("{} and {}", fmt(p), fmt(q)));
                    if p.degree() == q.degree() && pm.lambda == qm.lambda {
                        unique.record(p == q, || format!("{} and {}", fmt(p), fmt(q)));
                    }
                }
            }
        }
    }

    Ok(PropertyReport {
        checks: vec![
            degree, factor, complete, assoc, ident, sources, mce_pres, fe_pres, count, count_bound, cyl, proj_mce,
            unique,
        ],
    })
}

/// Checks the windowed form of the homeomorphism between infinite paths of
/// `Λ̃` from embedded vertices and boundary paths.
///
/// For each vertex `v` the window paths of degree `W` from `ι(v)` are
/// projected to boundary prefixes `ω(0, W ∧ d(ω))` and compared with the
/// prefixes listed by the tail oracle. Membership of `ω` in `Z(μ)` is read
/// from the prefix `λ`: `ω` stops exactly in the colors where `d(λ)_i < W_i`,
/// so `ω ∈ Z(μ)` iff `d(μ) ≤ d(λ)` and `μ` is a prefix of `λ`. With
/// `openness` set the image of each cylinder `Z(μ)` of `Λ̃` is also compared
/// with `Z(π(μ))`.
pub fn check_shadow(ds: &Desource, dw: &DesourcedWindow, openness: bool) -> Result<PropertyReport> {
    let g = ds.graph;
    let tg = &dw.graph;
    let w = &dw.window;
    let mut bij = Tally::new("projection_bijection");
    let mut transfer = Tally::new("membership_transfer");
    let mut open = Tally::new("projection_open");
    for v in g.vertices() {
        let Some(ev) = dw.embedded(v) else { continue };
        let Some(expected) = ds.oracle.boundary_prefixes(g, v, w)? else {
            bij.skipped += 1;
            continue;
        };
        let paths = match tg.enumerate_paths(ev, w) {
            Ok(p) => p,
            Err(Error::WindowExceeded(_)) => {
                bij.skipped += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        let mut images = Vec::new();
        for x in &paths {
            images.push(project_pi_infinite(ds, dw, x)?.prefix);
        }
        let distinct: BTreeSet<Path> = images.iter().cloned().collect();
        let target: BTreeSet<Path> = expected.iter().cloned().collect();
        bij.record(distinct.len() == images.len() && distinct == target, || {
            format!("{}: {} window paths, {} prefixes", g.vertex_name(v), images.len(), target.len())
        });

        let in_z = |lambda: &Path, mu: &Path| -> Result<bool> {
            Ok(mu.degree().leq(lambda.degree()) && g.has_prefix(lambda, mu)?)
        };
        let Ok(base) = g.paths_up_to(v, w) else { continue };
        for mu in &base {
            let Ok(im) = ds.embed_iota(mu).and_then(|m| dw.path_of_morph(ds, &m)) else {
                transfer.skipped += 1;
                continue;
            };
            for (x, lambda) in paths.iter().zip(&images) {
                let lhs = tg.has_prefix(x, &im)?;
                transfer.record(lhs == in_z(lambda, mu)?, || format!("{} against {}", tg.format_path(x), g.format_path(mu)));
            }
        }
        if openness {
            let Ok(prefixes) = tg.paths_up_to(ev, w) else { continue };
            for mu in &prefixes {
                let pi_mu = dw.morph_of_path(ds, mu)?.lambda;
                let mut lhs = BTreeSet::new();
                for (x, lambda) in paths.iter().zip(&images) {
                    if tg.has_prefix(x, mu)? {
                        lhs.insert(lambda.clone());
                    }
                }
                let mut rhs = BTreeSet::new();
                for omega in &expected {
                    if in_z(omega, &pi_mu)? {
                        rhs.insert(omega.clone());
                    }
                }
                open.record(lhs == rhs, || format!("cylinder of {}", tg.format_path(mu)));
            }
        }
    }
    let mut checks = vec![bij, transfer];
    if openness {
        checks.push(open);
    }
    Ok(PropertyReport { checks })
}
