use std::sync::Arc;

use anyhow::{anyhow, bail, Result};
use serde_json::json;

use dgtan::derham::{adr_cohomology, local_system_from_rep, ls_hom, AdrReport, LocalSystem};
use dgtan::eqcdga::{
    phi_comparison, pushout_square_check, regular_iso_check, tc_hom, verify_right_homotopy, PresentedGCdga,
};
use dgtan::fixtures;
use dgtan::repcat::tensor_automorphisms;
use dgtan::simpset::{EdgeLabeling, DEFAULT_COSET_BUDGET};
use dgtan::wordcat::{word_count, words_up_to_depth, Word};
use dgtan::{FinSimplicialSet, FiniteGroup, Representation};

use crate::output::{Report, Table};
use crate::{
    Check, CohomologyArgs, Command, FixturesArgs, SpaceArgs, TannakaArgs, TdrHomArgs, THomArgs, VerifyArgs, WordsArgs,
    Workspace,
};

pub fn dispatch(ws: &Workspace, cmd: &Command) -> Result<Report> {
    match cmd {
        Command::Cohomology(a) => cohomology(ws, a),
        Command::TdrHom(a) => tdr_hom(ws, a),
        Command::THom(a) => t_hom(ws, a),
        Command::Tannaka(a) => tannaka(ws, a),
        Command::Verify(a) => verify(ws, a),
        Command::Words(a) => words(a),
        Command::Fixtures(a) => fixtures_cmd(ws, a),
    }
}

fn s<T: ToString>(x: T) -> String {
    x.to_string()
}

struct Loaded {
    space: Arc<FinSimplicialSet>,
    group: Arc<FiniteGroup>,
    labeling: EdgeLabeling,
}

fn load_space(ws: &Workspace, a: &SpaceArgs) -> Result<Loaded> {
    let space = ws.space(&a.space)?;
    let group = ws.group(&a.group)?;
    let labeling = ws.labeling(&a.space, &space, &group, a.labeling.as_deref())?;
    Ok(Loaded { space, group, labeling })
}

impl Loaded {
    fn system(&self, ws: &Workspace, rep: &str) -> Result<LocalSystem> {
        let r = ws.representation(&self.group, rep)?;
        Ok(local_system_from_rep(self.space.clone(), &self.labeling, &r)?)
    }
}

fn adr_report(command: &str, title: &str, report: &AdrReport, weight_cap: usize) -> Result<Report> {
    let mut weights = Table::new(format!("{title}: weight filtration"), &[
        "max_weight",
        "degree",
        "cochain_dim",
        "cohomology",
        "certified",
    ]);
    for row in &report.rows {
        for q in 0..row.cohomology.len() {
            weights.push(vec![
                s(row.max_weight),
                s(q),
                s(row.cochain_dims[q]),
                s(row.cohomology[q]),
                s(row.certified[q]),
            ]);
        }
    }
    let mut summary = Table::new(format!("{title}: cohomology"), &["degree", "dim", "simplicial"]);
    for (q, (h, o)) in report.cohomology.iter().zip(&report.oracle).enumerate() {
        summary.push(vec![s(q), s(h), s(o)]);
    }
    let status = match report.stabilized_at {
        Some(w) => format!("stabilized at weight {w}"),
        None => format!("not stabilized up to weight cap {weight_cap}"),
    };
    Ok(Report::new(command, report.stabilized(), json!({"title": title, "weight_cap": weight_cap, "report": report}))?
        .table(summary)
        .table(weights)
        .message(status))
}

fn cohomology(ws: &Workspace, a: &CohomologyArgs) -> Result<Report> {
    let l = load_space(ws, &a.space)?;
    let system = l.system(ws, &a.coeff)?;
    let report = adr_cohomology(&l.space, &system, a.weight_cap)?;
    adr_report("cohomology", &format!("H({}; {})", a.space.space, a.coeff), &report, a.weight_cap)
}

fn tdr_hom(ws: &Workspace, a: &TdrHomArgs) -> Result<Report> {
    let l = load_space(ws, &a.space)?;
    let hom = ls_hom(&l.system(ws, &a.source)?, &l.system(ws, &a.target)?)?;
    let report = adr_cohomology(&l.space, &hom, a.weight_cap)?;
    adr_report("tdr-hom", &format!("Hom({}, {}) over {}", a.source, a.target, a.space.space), &report, a.weight_cap)
}

fn t_hom(ws: &Workspace, a: &THomArgs) -> Result<Report> {
    let cdga = ws.cdga(&a.cdga)?;
    let context = ws.representations_of(cdga.group());
    let x = Word::parse(&a.source)?;
    let y = Word::parse(&a.target)?;
    let h = tc_hom(&cdga, &context, &x, &y, a.degree_bound)?;
    let algebra = cdga.basis(a.degree_bound).dims();
    let report = h.report();
    let mut t = Table::new(format!("Hom({x}, {y}) over {}", a.cdga), &["degree", "algebra", "cochain", "cohomology"]);
    for n in 0..=a.degree_bound {
        t.push(vec![s(n), s(algebra[n]), s(report.cochain_dims[n]), s(report.cohomology[n])]);
    }
    let data = json!({
        "cdga": a.cdga,
        "source": x.to_string(),
        "target": y.to_string(),
        "algebra_dims": algebra,
        "hom": report,
    });
    Ok(Report::new("t-hom", true, data)?.table(t))
}

fn tannaka(ws: &Workspace, a: &TannakaArgs) -> Result<Report> {
    let group = ws.group(&a.group)?;
    let t = tensor_automorphisms(group.clone())?;
    let isomorphic = group.isomorphism_to(&t.group).is_some();
    let bijective = {
        let mut seen = t.phi.clone();
        seen.sort_unstable();
        seen.dedup();
        seen.len() == group.order()
    };
    let phi_iso = bijective && group.is_homomorphism(&t.group, &t.phi);
    let mut table = Table::new(format!("φ: {} → Aut⊗(ω)", a.group), &["element", "image", "order"]);
    for g in group.elements() {
        table.push(vec![s(group.name(g)), s(t.group.name(t.phi[g])), s(group.element_order(g))]);
    }
    let data = json!({
        "group": a.group,
        "order": group.order(),
        "reconstructed_order": t.group.order(),
        "isomorphic": isomorphic,
        "phi_is_isomorphism": phi_iso,
        "reconstructed": t.group.to_json(),
        "phi": t.phi,
    });
    Ok(Report::new("tannaka", isomorphic && phi_iso, data)?
        .table(table)
        .message(format!("reconstructed group of order {}", t.group.order())))
}

fn verify(ws: &Workspace, a: &VerifyArgs) -> Result<Report> {
    let cdga = || -> Result<Arc<PresentedGCdga>> {
        ws.cdga(a.cdga.as_deref().ok_or_else(|| anyhow!("--cdga is required for this check"))?)
    };
    match a.check {
        Check::RegularIso => {
            let cdga = cdga()?;
            let n = a.degree_bound.unwrap_or(7);
            match regular_iso_check(&cdga, n) {
                Ok(r) => {
                    let mut t = Table::new("A → A ⊗^G V_r", &["degree", "source", "target", "rank"]);
                    for q in 0..=n {
                        t.push(vec![s(q), s(r.source_dims[q]), s(r.target_dims[q]), s(r.ranks[q])]);
                    }
                    Ok(Report::new("verify regular-iso", true, &r)?.table(t))
                }
                Err(dgtan::Error::Verification(m)) => {
                    Ok(Report::new("verify regular-iso", false, json!({"failure": m}))?.message(m))
                }
                Err(e) => Err(e.into()),
            }
        }
        Check::Pushout => {
            let cdga = cdga()?;
            let n = a.degree_bound.unwrap_or(5);
            let objects: Vec<(String, Representation)> = if a.objects.is_empty() {
                ws.representations_of(cdga.group()).into_iter().filter(|(n, _)| fixtures::REPRESENTATIONS.contains(&n.as_str())).collect()
            } else {
                a.objects.iter().map(|n| Ok((n.clone(), ws.representation(cdga.group(), n)?))).collect::<Result<_>>()?
            };
            let r = pushout_square_check(&cdga, &objects, n)?;
            let mut t = Table::new("pushout corners", &["source", "target", "degree", "Hom_G", "Hom", "A⊗^G Hom", "A⊗Hom"]);
            for row in &r.rows {
                t.push(vec![
                    row.source.clone(),
                    row.target.clone(),
                    s(row.degree),
                    s(row.top_left),
                    s(row.top_right),
                    s(row.bottom_left),
                    s(row.bottom_right),
                ]);
            }
            let mut report = Report::new("verify pushout", r.passed(), &r)?.table(t);
            for f in &r.failures {
                report = report.message(f.clone());
            }
            Ok(report)
        }
        Check::Phi => {
            let space_name = a.space.as_deref().ok_or_else(|| anyhow!("--space is required for phi"))?;
            let l = load_space(ws, &SpaceArgs { space: space_name.into(), group: a.group.clone(), labeling: a.labeling.clone() })?;
            let v = ws.representation(&l.group, &a.source)?;
            let w = ws.representation(&l.group, &a.target)?;
            let n = a.degree_bound.unwrap_or(4);
            let r = phi_comparison(&l.space, &l.labeling, &v, &w, n, a.weight_cap, DEFAULT_COSET_BUDGET)?;
            let mut t = Table::new(format!("Φ on Hom({}, {}) over {space_name}", a.source, a.target), &[
                "degree",
                "max_weight",
                "source",
                "cover",
                "invariants",
                "image_rank",
                "injective",
                "image=invariants",
                "chain_map",
            ]);
            for row in &r.rows {
                t.push(vec![
                    s(row.degree),
                    s(row.max_weight),
                    s(row.source_dim),
                    s(row.cover_dim),
                    s(row.invariant_dim),
                    s(row.image_rank),
                    s(row.injective),
                    s(row.image_is_invariants),
                    s(row.chain_map),
                ]);
            }
            Ok(Report::new("verify phi", r.passed(), &r)?
                .table(t)
                .message(format!("composition compatible: {}", r.composition)))
        }
        Check::Homotopy => {
            let name = a.candidate.as_deref().ok_or_else(|| anyhow!("--candidate is required for homotopy"))?;
            let r = verify_right_homotopy(ws.homotopy(name)?)?;
            let mut t = Table::new(format!("right homotopy {name}"), &["failure"]);
            for f in &r.failures {
                t.push(vec![f.clone()]);
            }
            let mut report = Report::new("verify homotopy", r.ok, &r)?.table(t);
            for f in &r.failures {
                report = report.message(f.clone());
            }
            Ok(report)
        }
    }
}

fn words(a: &WordsArgs) -> Result<Report> {
    let alphabet: Vec<String> = a.alphabet.iter().filter(|x| !x.is_empty()).cloned().collect();
    if a.count_only {
        let mut t = Table::new("words by maximal depth", &["depth", "count"]);
        let mut counts = Vec::new();
        for p in 0..=a.depth {
            let c = word_count(alphabet.len(), p).ok_or_else(|| dgtan::Error::BudgetExceeded("word count overflows".into()))?;
            t.push(vec![s(p), s(c)]);
            counts.push(c.to_string());
        }
        return Ok(Report::new("words", true, json!({"alphabet": alphabet, "counts": counts}))?.table(t));
    }
    let list = words_up_to_depth(&alphabet, a.depth, a.budget)?;
    let mut t = Table::new(format!("words of depth ≤ {}", a.depth), &["index", "depth", "word"]);
    for (i, w) in list.iter().enumerate() {
        t.push(vec![s(i), s(w.depth()), w.to_string()]);
    }
    let data = json!({"alphabet": alphabet, "depth": a.depth, "words": list.iter().map(|w| w.to_string()).collect::<Vec<_>>()});
    Ok(Report::new("words", true, data)?.table(t))
}

fn fixtures_cmd(ws: &Workspace, a: &FixturesArgs) -> Result<Report> {
    let Some(name) = &a.name else {
        let mut t = Table::new("objects", &["kind", "name", "origin"]);
        let builtin = [
            ("space", &fixtures::SPACES[..]),
            ("group", &fixtures::GROUPS[..]),
            ("representation", &fixtures::REPRESENTATIONS[..]),
            ("cdga", &fixtures::CDGAS[..]),
        ];
        let mut rows = Vec::new();
        for (kind, names) in builtin {
            rows.extend(names.iter().map(|n| (kind, n.to_string(), "built-in")));
        }
        rows.extend(ws.names().into_iter().map(|(kind, n)| (kind, n, "workspace")));
        let rows: Vec<_> = rows.into_iter().filter(|(k, _, _)| a.kind.as_deref().is_none_or(|x| x == *k)).collect();
        for (k, n, o) in &rows {
            t.push(vec![s(k), n.clone(), s(o)]);
        }
        let data: Vec<_> = rows.iter().map(|(k, n, o)| json!({"kind": k, "name": n, "origin": o})).collect();
        return Ok(Report::new("fixtures", true, data)?.table(t));
    };
    let kind = a.kind.as_deref().ok_or_else(|| anyhow!("--kind is required with --name"))?;
    let (data, summary) = match kind {
        "space" => {
            let k = ws.space(name)?;
            (serde_json::to_value(k.to_json())?, format!("simplices per dimension {:?}", k.counts()))
        }
        "group" => {
            let g = ws.group(name)?;
            (serde_json::to_value(g.to_json())?, format!("order {}", g.order()))
        }
        "representation" => {
            let g = ws.group(&a.group)?;
            let r = ws.representation(&g, name)?;
            (serde_json::to_value(r.to_json())?, format!("dimension {}", r.dim()))
        }
        "cdga" => {
            let c = ws.cdga(name)?;
            (serde_json::to_value(c.to_json())?, format!("generators {}", c.algebra().names().join(", ")))
        }
        other => bail!("unknown kind {other:?}; expected space, group, representation or cdga"),
    };
    let mut t = Table::new(format!("{kind} {name}"), &["summary"]);
    t.push(vec![summary]);
    Ok(Report::new("fixtures", true, data)?.table(t))
}
