use crate::{Document, RunConfig, RunOutcome, Status, Task};
use glq_ekr::bruteforce::{build_graph, max_independent, verify_extremal};
use glq_ekr::chartab::{hook_degree, symmetrize, Symmetrized, Tower};
use glq_ekr::chartab::label::check_strata;
use glq_ekr::cyclotomic::Cyclotomic;
use glq_ekr::ekr::{
    bound_report, build_qt_direct, build_st_reduced, check_s_against_table, compare_qt, estimates_check,
    select_h, sigma_pi_sets, solve_weights, span_check, span_constituents, tail_check, BoundReport, HChoice,
    HTable, Mode, Strata,
};
use glq_ekr::gfq::{build_field, FieldTable};
use glq_ekr::glq::GroupData;
use glq_ekr::partitions::gl_order;
use glq_ekr::scheme::{eigenvalue_matrix, Idempotents, SchemeEigen, DENSE_MAX_ORDER};
use glq_ekr::Error;
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};
use std::collections::BTreeMap;

fn classify(e: &Error) -> Status {
    match e {
        Error::BudgetExceeded { .. } | Error::TooLarge { .. } | Error::NotPrimePower(_) => Status::Budget,
        _ => Status::Failed,
    }
}

fn err_doc(task: Task, e: &Error) -> Document {
    Document {
        task,
        status: classify(e),
        cache_hit: None,
        result: json!({ "error": e.to_string() }),
    }
}

fn ok_or_fail(ok: bool) -> Status {
    if ok {
        Status::Ok
    } else {
        Status::Failed
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn cyc_json(c: &Cyclotomic) -> Value {
    c.compact_json()
}

type R<T> = std::result::Result<T, Error>;

pub(crate) struct Runner<'a> {
    cfg: &'a RunConfig,
    field: Option<FieldTable>,
    group: Option<GroupData>,
    tower: Option<Tower>,
    sym: Option<Symmetrized>,
    eigen: Option<SchemeEigen>,
    ids: Option<Idempotents>,
    h: BTreeMap<bool, HTable>,
    strata: BTreeMap<usize, Strata>,
    bounds: BTreeMap<Mode, BoundReport>,
}

impl<'a> Runner<'a> {
    pub(crate) fn new(cfg: &'a RunConfig) -> Self {
        Runner {
            cfg,
            field: None,
            group: None,
            tower: None,
            sym: None,
            eigen: None,
            ids: None,
            h: BTreeMap::new(),
            strata: BTreeMap::new(),
            bounds: BTreeMap::new(),
        }
    }

    pub(crate) fn run(mut self) -> RunOutcome {
        if let Err(e) = self.cfg.validate() {
            let e = Error::InvalidArgument(e);
            return RunOutcome {
                docs: self.cfg.tasks.iter().map(|&t| err_doc(t, &e)).collect(),
            };
        }
        if let Err(e) = self.field() {
            return RunOutcome {
                docs: self.cfg.tasks.iter().map(|&t| err_doc(t, &e)).collect(),
            };
        }
        let mut docs = Vec::new();
        for &task in &self.cfg.tasks {
            log::info!("task {task}");
            let doc = match self.task(task) {
                Ok(d) => d,
                Err(e) => err_doc(task, &e),
            };
            docs.push(doc);
        }
        RunOutcome { docs }
    }

    fn task(&mut self, task: Task) -> R<Document> {
        match task {
            Task::Classes => self.classes(),
            Task::Chartab => self.chartab(),
            Task::Qt => self.qt(),
            Task::Weights => self.weights(),
            Task::Bound => self.bound(),
            Task::Brute => self.brute(),
            Task::Span => self.span(),
            Task::Estimates => self.estimates(),
        }
    }

    fn field(&mut self) -> R<FieldTable> {
        if self.field.is_none() {
            self.field = Some(build_field(self.cfg.q)?);
        }
        Ok(self.field.clone().unwrap())
    }

    fn group(&mut self) -> R<&GroupData> {
        if self.group.is_none() {
            let f = self.field()?;
            self.group = Some(GroupData::build(&f, self.cfg.n, self.cfg.budget_elements)?);
        }
        Ok(self.group.as_ref().unwrap())
    }

    fn tower(&mut self) -> R<&Tower> {
        if self.tower.is_none() {
            let f = self.field()?;
            let t = Tower::build(
                &f,
                self.cfg.n,
                self.cfg.cache.as_ref(),
                self.cfg.budget_elements,
                self.group.as_ref(),
            )?;
            self.tower = Some(t);
        }
        Ok(self.tower.as_ref().unwrap())
    }

    fn sym(&mut self) -> R<&Symmetrized> {
        if self.sym.is_none() {
            let f = self.field()?;
            let n = self.cfg.n;
            let s = symmetrize(self.tower()?.table(n).expect("top level built"), &f)?;
            self.sym = Some(s);
        }
        Ok(self.sym.as_ref().unwrap())
    }

    fn eigen(&mut self) -> R<&SchemeEigen> {
        if self.eigen.is_none() {
            let f = self.field()?;
            let e = eigenvalue_matrix(self.sym()?, &f)?;
            self.eigen = Some(e);
        }
        Ok(self.eigen.as_ref().unwrap())
    }

    fn idempotents(&mut self) -> R<&Idempotents> {
        if self.ids.is_none() {
            self.group()?;
            self.sym()?;
            let n = self.cfg.n;
            let ids = Idempotents::build(
                self.group.as_ref().unwrap(),
                self.tower.as_ref().unwrap().table(n).unwrap(),
                self.sym.as_ref().unwrap(),
            )?;
            self.ids = Some(ids);
        }
        Ok(self.ids.as_ref().unwrap())
    }

    fn h(&mut self, alt: bool) -> R<HTable> {
        if !self.h.contains_key(&alt) {
            let f = self.field()?;
            let choice = if alt { HChoice::Greatest } else { HChoice::Least };
            let h = select_h(&f, self.cfg.n, self.cfg.t, choice)?;
            self.h.insert(alt, h);
        }
        Ok(self.h[&alt].clone())
    }

    fn strata(&mut self, level: usize) -> R<&Strata> {
        if !self.strata.contains_key(&level) {
            let f = self.field()?;
            let h = self.h(false)?;
            self.sym()?;
            let table = self.tower.as_ref().unwrap().table(self.cfg.n).unwrap();
            let s = sigma_pi_sets(&f, table, self.sym.as_ref().unwrap(), &h, level)?;
            self.strata.insert(level, s);
        }
        Ok(&self.strata[&level])
    }

    fn weight_pipeline_applies(&self) -> bool {
        self.cfg.t >= 1 && self.cfg.n > 2 * self.cfg.t
    }

    fn not_applicable(&self, task: Task) -> Document {
        Document {
            task,
            status: Status::NotApplicable,
            cache_hit: None,
            result: json!({ "reason": format!("needs 1 ≤ t and n > 2t (n = {}, t = {})", self.cfg.n, self.cfg.t) }),
        }
    }

    fn classes(&mut self) -> R<Document> {
        let q = self.cfg.q;
        let n = self.cfg.n;
        let g = self.group()?;
        let classes: Vec<Value> = g
            .classes()
            .iter()
            .map(|c| json!({ "sigma": c.index.label(), "size": c.size, "counted": c.counted }))
            .collect();
        let size_sum: u64 = g.classes().iter().map(|c| c.size).sum();
        let order = gl_order(n, q);
        let sizes_match_order = BigInt::from(size_sum) == order;
        let counts_match = g.classes().iter().all(|c| c.size == c.counted);
        Ok(Document {
            task: Task::Classes,
            status: ok_or_fail(sizes_match_order && counts_match && g.order() as u64 == size_sum),
            cache_hit: None,
            result: json!({
                "order": order.to_string(),
                "class_count": g.num_classes(),
                "size_sum": size_sum.to_string(),
                "sizes_match_order": sizes_match_order,
                "counts_match": counts_match,
                "classes": classes,
            }),
        })
    }

    fn chartab(&mut self) -> R<Document> {
        let f = self.field()?;
        let n = self.cfg.n;
        let t = self.cfg.t.min(n);
        let tower = self.tower()?;
        let cache_hit = tower.cache_hit(n);
        let table = tower.table(n).expect("top level built");
        let orthogonal = table.verify_orthogonality().is_ok();
        let labels = table.labels().ok_or(Error::LabelingRequired)?;
        let mut hook_mismatches = 0;
        let characters: Vec<Value> = (0..table.rows().len())
            .map(|r| {
                let hd = hook_degree(&labels[r], f.q());
                if hd != BigInt::from(table.degrees()[r]) {
                    hook_mismatches += 1;
                }
                json!({
                    "label": labels[r].label(),
                    "degree": table.degrees()[r],
                    "hook_degree": hd.to_string(),
                    "values": table.row(r).iter().map(cyc_json).collect::<Vec<_>>(),
                })
            })
            .collect();
        let strata = check_strata(&f, table);
        let zeta = table.zeta_character(&f, t, 0);
        let mult = table.decompose(&zeta)?;
        let constituents: Vec<Value> = mult
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(r, &c)| json!({ "label": labels[r].label(), "degree": table.degrees()[r], "multiplicity": c }))
            .collect();
        let ok = orthogonal && hook_mismatches == 0 && strata.is_ok();
        let mut degrees_sorted = table.degrees().to_vec();
        degrees_sorted.sort_unstable();
        Ok(Document {
            task: Task::Chartab,
            status: ok_or_fail(ok),
            cache_hit: Some(cache_hit),
            result: json!({
                "exponent": table.m(),
                "classes": table.classes().iter().map(|c| c.label()).collect::<Vec<_>>(),
                "class_sizes": table.class_sizes(),
                "characters": characters,
                "degrees_sorted": degrees_sorted,
                "orthogonal": orthogonal,
                "hook_mismatches": hook_mismatches,
                "strata_ok": strata.is_ok(),
                "strata_error": strata.err().map(|e| e.to_string()),
                "zeta": { "t": t, "i": 0, "constituents": constituents },
                "ambiguities": to_value(&table.ambiguities()),
            }),
        })
    }

    fn qt(&mut self) -> R<Document> {
        if !(self.cfg.n > 2 * self.cfg.t) {
            return Ok(self.not_applicable(Task::Qt));
        }
        let f = self.field()?;
        let n = self.cfg.n;
        let t = self.cfg.t;
        let h = self.h(false)?;
        let strata = self.strata(t)?.clone();
        let sym = self.sym()?.clone();
        let direct = build_qt_direct(&sym, &strata, n)?;
        let tower = self.tower.as_ref().unwrap();
        let levels: Vec<_> = (1..=t).map(|l| tower.table(l).unwrap()).collect();
        let reduced = build_st_reduced(&f, &levels, &h, t)?;
        let diff = compare_qt(&direct, &reduced.q);
        let s_check = check_s_against_table(&f, tower.table(n).unwrap(), &h, &reduced)?;
        let mut result = json!({
            "h_table": to_value(&h),
            "pair_mode": h.pair_mode(),
            "pair_slots": h.pair_slots(),
            "strata": to_value(&strata),
            "direct": to_value(&direct),
            "reduced": to_value(&reduced),
            "paths_equal": diff.equal,
            "path_diff": to_value(&diff),
            "s_block_check": to_value(&s_check),
        });
        if self.cfg.alt_h {
            let ha = self.h(true)?;
            let table = self.tower.as_ref().unwrap().table(n).unwrap();
            let sa = sigma_pi_sets(&f, table, &sym, &ha, t)?;
            let qa = build_qt_direct(&sym, &sa, n)?;
            let d = compare_qt(&direct, &qa);
            result["alt_h"] = json!({
                "h_table": to_value(&ha),
                "direct": to_value(&qa),
                "same_as_default": d.equal,
                "diff": to_value(&d),
            });
        }
        Ok(Document {
            task: Task::Qt,
            status: ok_or_fail(diff.equal && s_check.passed()),
            cache_hit: None,
            result,
        })
    }

    fn weight_system(&mut self, mode: Mode) -> R<glq_ekr::ekr::WeightSystem> {
        let f = self.field()?;
        let (n, t) = (self.cfg.n, self.cfg.t);
        let level = if mode == Mode::Points { t } else { t - 1 };
        let strata = self.strata(level)?.clone();
        let eigen = self.eigen()?;
        solve_weights(&f, eigen, &strata, n, t, mode)
    }

    fn weights(&mut self) -> R<Document> {
        if !self.weight_pipeline_applies() {
            return Ok(self.not_applicable(Task::Weights));
        }
        let f = self.field()?;
        let n = self.cfg.n;
        let mut out = Vec::new();
        let mut ok = true;
        let mut violations = Vec::new();
        for mode in self.cfg.mode.modes() {
            let ws = self.weight_system(mode)?;
            let tail = tail_check(&f, self.eigen()?, &ws, n);
            ok &= ws.passed() && tail.targets_exact;
            violations.extend(tail.violations.iter().map(|l| json!({ "mode": mode, "lambda": l.label() })));
            out.push(json!({ "mode": mode, "system": to_value(&ws), "eigen_report": to_value(&tail) }));
        }
        Ok(Document {
            task: Task::Weights,
            status: ok_or_fail(ok),
            cache_hit: None,
            result: json!({ "modes": out, "violations": violations }),
        })
    }

    fn bound(&mut self) -> R<Document> {
        if !self.weight_pipeline_applies() {
            return Ok(self.not_applicable(Task::Bound));
        }
        let q = self.cfg.q as usize;
        let n = self.cfg.n;
        let mut out = Vec::new();
        let mut ok = true;
        for mode in self.cfg.mode.modes() {
            let ws = self.weight_system(mode)?;
            let b = bound_report(self.eigen()?, &ws, q, n)?;
            ok &= !b.p_min_is_target || b.independent_equal;
            out.push(json!({
                "mode": mode,
                "hoffman": to_value(&b.independent),
                "cross": to_value(&b.cross),
                "closed_form": b.closed_form,
                "equal": b.independent_equal,
                "cross_equal": b.cross_equal,
                "p_min_is_target": b.p_min_is_target,
                "attaining": b.attaining.iter().map(|l| l.label()).collect::<Vec<_>>(),
            }));
            self.bounds.insert(mode, b);
        }
        Ok(Document {
            task: Task::Bound,
            status: ok_or_fail(ok),
            cache_hit: None,
            result: json!({ "modes": out }),
        })
    }

    fn brute(&mut self) -> R<Document> {
        let t = self.cfg.t;
        let n = self.cfg.n;
        let f = self.field()?;
        let order = self.group()?.order();
        let with_proj = order <= DENSE_MAX_ORDER;
        if with_proj {
            self.idempotents()?;
        }
        let mut out = Vec::new();
        let mut status = Status::Ok;
        for mode in self.cfg.mode.modes() {
            let group = self.group.as_ref().unwrap();
            let g = build_graph(group, t, mode)?;
            let res = max_independent(&g, group, Some(self.cfg.timeout));
            let cons = with_proj.then(|| span_constituents(&f, self.sym.as_ref().unwrap(), n, t, mode));
            let proj = self.ids.as_ref().zip(cons.as_deref());
            let rep = verify_extremal(group, &g, &res.witness, proj);
            let mut doc = json!({
                "mode": mode,
                "max_size": res.max_size,
                "exact": res.exact,
                "lower_bound_only": !res.exact,
                "witness_verified": res.witness_verified,
                "witness_codes": res.witness.iter().map(|&x| group.code(x).to_string()).collect::<Vec<_>>(),
                "extremal": to_value(&rep),
            });
            // a timed-out search only certifies a lower bound, so the extremal
            // structure is not asserted
            let mut ok = res.witness_verified && (!res.exact || rep.passed());
            if let Some(b) = self.bounds.get(&mode) {
                let hb = b.independent.bound_rational();
                let max = BigRational::from_integer(BigInt::from(res.max_size));
                let ge = hb.as_ref().is_some_and(|h| *h >= max);
                let eq = hb.as_ref().is_some_and(|h| *h == max);
                doc["hoffman_bound"] = cyc_json(&b.independent.bound);
                doc["hoffman_ge_max"] = json!(ge);
                doc["hoffman_equals_max"] = json!(eq);
                ok &= ge && (!b.p_min_is_target || !res.exact || eq);
            }
            if !ok {
                status = Status::Failed;
            } else if !res.exact && status == Status::Ok {
                status = Status::Budget;
            }
            out.push(doc);
        }
        Ok(Document {
            task: Task::Brute,
            status,
            cache_hit: None,
            result: json!({ "modes": out }),
        })
    }

    fn span(&mut self) -> R<Document> {
        let t = self.cfg.t;
        let n = self.cfg.n;
        self.group()?;
        self.idempotents()?;
        let group = self.group.as_ref().unwrap();
        let table = self.tower.as_ref().unwrap().table(n).unwrap();
        let mut out = Vec::new();
        let mut ok = true;
        for mode in self.cfg.mode.modes() {
            let r = span_check(group, table, self.sym.as_ref().unwrap(), self.ids.as_ref().unwrap(), t, mode)?;
            ok &= r.passed();
            out.push(to_value(&r));
        }
        Ok(Document {
            task: Task::Span,
            status: ok_or_fail(ok),
            cache_hit: None,
            result: json!({ "modes": out }),
        })
    }

    fn estimates(&mut self) -> R<Document> {
        let f = self.field()?;
        if self.cfg.t >= self.cfg.n {
            return Ok(self.not_applicable(Task::Estimates));
        }
        let h = self.h(false)?;
        let r = estimates_check(&f, self.cfg.n, self.cfg.t, &h)?;
        Ok(Document {
            task: Task::Estimates,
            status: ok_or_fail(r.passed()),
            cache_hit: None,
            result: to_value(&r),
        })
    }
}
