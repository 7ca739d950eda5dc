//! Acceptance run: one pass/fail line per criterion, nonzero exit on any failure.

use std::collections::HashMap;
use std::process::Command;
use std::time::{Duration, Instant};

use lagr::bd::{all_sequences, enumerate_triples, is_nilpotent, run_sequence, s_of, sequence_for, Triple};
use lagr::chevalley::{Label, Oracle, TorusElement, DEFAULT_ORACLE_CAP};
use lagr::lagrlin::{canonical_vs, h_diagonal};
use lagr::poisson::{conjugacy_rank, flag_table, Nonempty, DEFAULT_SAMPLES};
use lagr::rootdata::RootSystem;
use lagr::strata::{check_maximality, irreducible_components, lagr_gh_census, stratum_dim, stratum_dim_bundle, v_s};
use lagr::weyl::WeylGroup;

const SEED: u64 = 0xBD;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    ensure(start.elapsed() < limit, || format!("took {:?}, limit {:?}", start.elapsed(), limit))
}

fn weyl(spec: &str) -> WeylGroup {
    WeylGroup::new(&RootSystem::new(spec).expect("type")).expect("weyl group")
}

fn oracle(spec: &str) -> Oracle {
    Oracle::new(&RootSystem::new(spec).expect("type"), DEFAULT_ORACLE_CAP).expect("oracle")
}

fn lagr(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_lagr")).args(args).output().expect("run lagr");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn c1_sl2_census() -> Check {
    let t = Instant::now();
    let c = irreducible_components(&weyl("A1"), SEED).map_err(|e| e.to_string())?;
    let mut dims: Vec<usize> = c.components().map(|s| s.stratum_dim).collect();
    dims.sort_unstable();
    ensure(dims == vec![2, 3], || format!("component dims {dims:?}"))?;
    within(t, Duration::from_secs(1))?;
    let (code, text) = lagr(&["census", "A1"]);
    let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    ensure(code == 0 && v["components"] == 2, || format!("cli exit {code}, {}", v["components"]))?;
    Ok("2 components, dims 3 and 2".into())
}

fn c2_stratum_dims() -> Check {
    let t = Instant::now();
    let mut count = 0;
    for spec in ["A1", "A2", "A3", "B2", "G2"] {
        let wg = weyl(spec);
        let rs = wg.root_system();
        for tr in enumerate_triples(&wg, false) {
            let n = rs.dim_g();
            let z = rs.rank() - tr.s.len();
            let bundle = (n - z) + z * z.saturating_sub(1) / 2;
            let a = stratum_dim(rs, &tr);
            ensure(a == bundle && a == stratum_dim_bundle(rs, &tr), || format!("{spec} {tr}: {a} vs {bundle}"))?;
            count += 1;
        }
    }
    within(t, Duration::from_secs(10))?;
    Ok(format!("{count} triples agree"))
}

struct Sweeps {
    a1: lagr::chevalley::VerifyReport,
    a2: lagr::chevalley::VerifyReport,
    b2: lagr::chevalley::VerifyReport,
    elapsed: Duration,
}

fn sweeps() -> Sweeps {
    let t = Instant::now();
    let run = |spec: &str| oracle(spec).verify_sweep(SEED, 5).expect("sweep");
    let (a2, b2) = (run("A2"), run("B2"));
    let elapsed = t.elapsed();
    Sweeps { a1: run("A1"), a2, b2, elapsed }
}

fn failures<'a>(reports: &[&'a lagr::chevalley::VerifyReport], kinds: &[&str]) -> Vec<&'a String> {
    reports.iter().flat_map(|r| r.failures.iter()).filter(|f| kinds.iter().any(|k| f.starts_with(k))).collect()
}

fn c3_normalizer(s: &Sweeps) -> Check {
    let bad = failures(&[&s.a2, &s.b2], &["normalizer"]);
    ensure(bad.is_empty(), || format!("{} mismatches, first {:?}", bad.len(), bad.first()))?;
    ensure(s.elapsed < Duration::from_secs(600), || format!("took {:?}", s.elapsed))?;
    Ok(format!("{} A2 labels, {} B2 labels", s.a2.labels, s.b2.labels))
}

fn c4_nilpotency(s: &Sweeps) -> Check {
    let bad = failures(&[&s.a2, &s.b2], &["nilpotency", "lemma"]);
    ensure(bad.is_empty(), || format!("{} failures, first {:?}", bad.len(), bad.first()))?;
    Ok(format!("{} labels", s.a2.labels + s.b2.labels))
}

fn c5_sequences() -> Check {
    let t = Instant::now();
    let mut count = 0;
    for spec in ["A2", "A3", "B2"] {
        let wg = weyl(spec);
        for tr in enumerate_triples(&wg, false) {
            let mut hits: HashMap<usize, usize> = HashMap::new();
            for q in all_sequences(&wg, &tr) {
                *hits.entry(q.v_inf).or_default() += 1;
            }
            let reps = wg.min_coset_reps(tr.t);
            ensure(hits.len() == reps.len() && reps.iter().all(|v| hits.get(&v.id) == Some(&1)), || {
                format!("{spec} {tr}: v_inf not a bijection onto W^T")
            })?;
            for v in reps {
                let q = sequence_for(&wg, &tr, v).map_err(|e| e.to_string())?;
                let choices: Vec<_> = q.choices().into_iter().map(|id| wg.get(id)).collect();
                let back = run_sequence(&wg, &tr, &choices).map_err(|e| e.to_string())?;
                let s_vd = s_of(&wg, &tr, v).map_err(|e| e.to_string())?;
                ensure(back == q && back.v_inf == v.id && back.s_inf == s_vd, || format!("{spec} {tr}: round trip fails at {}", v.name()))?;
                count += 1;
            }
        }
    }
    within(t, Duration::from_secs(60))?;
    Ok(format!("{count} (triple, v) pairs"))
}

fn c6_belavin_drinfeld() -> Check {
    let o = oracle("A2");
    let wg = o.weyl();
    let rs = wg.root_system();
    let nil = enumerate_triples(wg, true);
    ensure(nil.len() == 3, || format!("{} nilpotent triples", nil.len()))?;
    let by_s1: Vec<Triple> = enumerate_triples(wg, false)
        .into_iter()
        .filter(|t| s_of(wg, t, wg.identity()).map(|s| s.is_empty()).unwrap_or(false))
        .collect();
    ensure(by_s1 == nil, || "nilpotent filter differs from S(1,d) = empty".into())?;
    let (code, text) = lagr(&["bd", "A2", "--nilpotent", "--format", "csv"]);
    ensure(code == 0 && text.lines().count() == 4, || format!("cli: exit {code}, {} lines", text.lines().count()))?;
    let e = TorusElement::identity(rs.rank());
    let (mut admissible, mut converse) = (0, 0);
    for tr in enumerate_triples(wg, false) {
        let cd = rs.cartan_subspaces(tr.s, tr.t, &tr.d).map_err(|e| e.to_string())?;
        for nv in canonical_vs(rs, &tr, SEED) {
            let label = Label { triple: tr.clone(), v_space: nv.v.clone(), v: 0, m: e.clone() };
            let l = o.build_lagrangian(&label).map_err(|e| e.to_string())?;
            let meet = o.model().intersect_with_diagonal(&l).dim();
            if is_nilpotent(wg, &tr) {
                let transversal = h_diagonal(rs, 1).intersect(&nv.v.embedded().sum(&v_s(&cd, rs.rank()))).is_zero();
                if transversal {
                    admissible += 1;
                    ensure(meet == 0, || format!("{tr} V={}: intersection of dim {meet}", nv.name))?;
                }
            } else {
                let parts = o.normalizer_formula(&label).map_err(|e| e.to_string())?;
                let vp = o.v_prime(&label, &parts.z_prime).map_err(|e| e.to_string())?;
                if !vp.is_zero() {
                    converse += 1;
                    ensure(meet > 0, || format!("{tr} V={}: V' nonzero but intersection zero", nv.name))?;
                }
            }
        }
    }
    ensure(admissible > 0, || "no BD system among the canonical V".into())?;
    Ok(format!("3 BD triples, {admissible} BD systems with zero intersection, {converse} converse cases"))
}

fn c7_rank_cross_check() -> Check {
    let t = Instant::now();
    let o = oracle("A2");
    let rows = flag_table(&o, DEFAULT_SAMPLES, SEED).map_err(|e| e.to_string())?;
    ensure(rows.len() == 216, || format!("{} rows", rows.len()))?;
    let cert: Vec<_> = rows.iter().filter(|r| r.nonempty == Nonempty::CertifiedNonempty).collect();
    for r in &cert {
        ensure((r.rank, r.dim) == r.closed_form, || format!("({},{},{}): {:?} vs {:?}", r.u, r.v, r.w, (r.rank, r.dim), r.closed_form))?;
        ensure(r.rank % 2 == 0 && r.rank <= r.dim, || format!("({},{},{}): rank {} dim {}", r.u, r.v, r.w, r.rank, r.dim))?;
    }
    within(t, Duration::from_secs(300))?;
    Ok(format!("{} certified cells agree", cert.len()))
}

fn c8_conjugacy() -> Check {
    let wg = weyl("A1");
    let e = conjugacy_rank(&wg, 2, wg.identity());
    let s = conjugacy_rank(&wg, 2, wg.longest());
    ensure(e.rank == 2 && e.open_dense_leaf, || format!("{e:?}"))?;
    ensure(s.rank == 0 && !s.open_dense_leaf && !s.cell_empty, || format!("{s:?}"))?;
    let (code, text) = lagr(&["rank", "A1", "conj", "--dimC", "2"]);
    ensure(code == 0 && text.contains("e,2,true") && text.contains("s1,0,false"), || format!("cli: {text}"))?;
    Ok("e -> 2 (open dense leaf), s -> 0".into())
}

fn c9_lagrangian(s: &Sweeps) -> Check {
    let bad = failures(&[&s.a1, &s.a2, &s.b2], &["lagrangian"]);
    ensure(bad.is_empty(), || format!("{} failures, first {:?}", bad.len(), bad.first()))?;
    Ok(format!("{} subalgebras", s.a1.labels + s.a2.labels + s.b2.labels))
}

fn c10_maximality() -> Check {
    let mut counts = Vec::new();
    for spec in ["A1", "A2"] {
        let c = irreducible_components(&weyl(spec), SEED).map_err(|e| e.to_string())?;
        ensure(check_maximality(&c), || format!("{spec}: a stratum lies in no component closure"))?;
        counts.push(c.component_count());
        if spec == "A2" {
            let note = c.note.clone().unwrap_or_default();
            ensure(note.contains("discrepancy"), || "sl3 census has no discrepancy note".into())?;
        }
    }
    Ok(format!("components A1 {}, A2 {} (with note)", counts[0], counts[1]))
}

fn c11_gh_census() -> Check {
    for spec in ["A1", "A2", "A3"] {
        let rs = RootSystem::new(spec).map_err(|e| e.to_string())?;
        let r = rs.rank();
        let want = (rs.num_positive() + r * (r - 1) / 2, 2);
        let got = lagr_gh_census(&rs);
        ensure(got == want, || format!("{spec}: {got:?} vs {want:?}"))?;
    }
    Ok("A1-A3 match".into())
}

fn cli_exit_codes() -> Check {
    let cases: [(&[&str], i32); 3] = [(&["verify", "A1"], 0), (&["verify", "G2", "--oracle-cap", "2"], 2), (&["census"], 2)];
    for (args, want) in cases {
        let (code, _) = lagr(args);
        ensure(code == want, || format!("{args:?}: exit {code}, want {want}"))?;
    }
    Ok("0 / 2 / 2".into())
}

fn main() {
    let s = sweeps();
    let results: Vec<(&str, Check)> = vec![
        ("1 sl2 census", c1_sl2_census()),
        ("2 stratum dimension identity", c2_stratum_dims()),
        ("3 normalizer theorem", c3_normalizer(&s)),
        ("4 phi nilpotency", c4_nilpotency(&s)),
        ("5 sequence bijection", c5_sequences()),
        ("6 Belavin-Drinfeld correspondence", c6_belavin_drinfeld()),
        ("7 rank cross-check", c7_rank_cross_check()),
        ("8 conjugacy ranks", c8_conjugacy()),
        ("9 Lagrangian axioms", c9_lagrangian(&s)),
        ("10 component maximality", c10_maximality()),
        ("11 g+h census", c11_gh_census()),
        ("cli exit codes", cli_exit_codes()),
    ];
    let mut failed = 0;
    for (name, r) in &results {
        match r {
            Ok(msg) => println!("criterion {name}: pass ({msg})"),
            Err(msg) => {
                failed += 1;
                println!("criterion {name}: FAIL ({msg})");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
