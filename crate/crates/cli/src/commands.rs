//! Subcommand implementations.

use std::sync::Arc;

use psep::classify::{classify_mixed, classify_pure, IndicatorProfile, Trilean};
use psep::entropy::EntropyKind;
use psep::lattice::{
    bell_number, format_class, format_downset, format_partition, hasse_dot, parse_downset,
    parse_partition, DownSetLabel, PartitionLattice, Sublattice,
};
use psep::measures::{
    alpha_entanglement, check_multipartite_monotonicity, downset_covers, downset_entanglement,
    ChainVerdict, MeasureLevel, MeasureReport, PureMeasureSpec,
};
use psep::qstate::{self, pure_downset_separable, QuantumState, PURITY_EPS};
use psep::roof::{eof_downset, mixed_indicator, wootters_eof, MixedVerdict};
use psep::{Error, Result};

use crate::config::{resolve, Effective};
use crate::source::parse_state;
use crate::{Cli, Command, Format};

pub fn run(cli: Cli) -> Result<()> {
    let eff = resolve(&cli)?;
    match &cli.command {
        Command::Lattice {
            n,
            level,
            sublattice,
        } => cmd_lattice(*n, level, sublattice, &eff),
        Command::Measure {
            state,
            label,
            level,
        } => cmd_measure(state, label.as_deref(), level, &eff),
        Command::Roof { state, label } => cmd_roof(state, label.as_deref(), &eff),
        Command::Classify { state, threshold } => {
            cmd_classify(state, threshold.unwrap_or(eff.threshold), &eff)
        }
        Command::Selftest { suite } => cmd_selftest(suite, &eff),
    }
}

struct Rendering {
    title: String,
    names: Vec<String>,
    covers: Vec<(usize, usize)>,
}

fn cmd_lattice(n: usize, level: &str, sublattice: &str, eff: &Effective) -> Result<()> {
    let lattice = PartitionLattice::new(n)?;
    let chain_labels = |kind: &str| -> Result<Vec<DownSetLabel>> {
        let mut out: Vec<DownSetLabel> = Vec::new();
        for k in 1..=n {
            let label = match kind {
                "ksep" => lattice.k_sep_label(k)?,
                _ => lattice.k_prod_label(k)?,
            };
            if !out.contains(&label) {
                out.push(label);
            }
        }
        Ok(out)
    };
    let downset_labels = |selector: &str| -> Result<Vec<DownSetLabel>> {
        match selector {
            "full" => lattice.enumerate_downset_labels(),
            "ksep" | "kprod" => chain_labels(selector),
            other => Err(Error::Config(format!("unknown sublattice '{other}'"))),
        }
    };
    let rendering = match level {
        "I" | "i" => Rendering {
            title: format!("P_I({n})"),
            names: lattice.elements().iter().map(format_partition).collect(),
            covers: lattice.covers(),
        },
        "II" | "ii" => {
            let labels = downset_labels(sublattice)?;
            Rendering {
                title: format!("P_II({n})"),
                names: labels.iter().map(|l| format_downset(l, &lattice)).collect(),
                covers: downset_covers(&labels)?,
            }
        }
        "III" | "iii" => {
            let labels = downset_labels(sublattice)?;
            let sub = Arc::new(Sublattice::new(&lattice, labels)?);
            let classes = psep::lattice::enumerate_class_labels(&sub)?;
            let mut covers = Vec::new();
            for i in 0..classes.len() {
                for j in 0..classes.len() {
                    if i == j || !classes[i].members().is_subset(classes[j].members()) {
                        continue;
                    }
                    let between = classes.iter().enumerate().any(|(k, c)| {
                        k != i
                            && k != j
                            && classes[i].members().is_subset(c.members())
                            && c.members().is_subset(classes[j].members())
                    });
                    if !between {
                        covers.push((i, j));
                    }
                }
            }
            Rendering {
                title: format!("P_III({n})"),
                names: classes.iter().map(|c| format_class(c, &lattice)).collect(),
                covers,
            }
        }
        other => return Err(Error::Config(format!("unknown level '{other}'"))),
    };
    match eff.format {
        Format::Text => {
            for name in &rendering.names {
                println!("{name}");
            }
            println!(
                "nodes: {}, edges: {}",
                rendering.names.len(),
                rendering.covers.len()
            );
        }
        Format::Json => {
            let covers: Vec<[usize; 2]> =
                rendering.covers.iter().map(|&(l, u)| [l, u]).collect();
            println!(
                "{}",
                serde_json::to_string(&serde_json::json!({
                    "title": rendering.title,
                    "nodes": rendering.names,
                    "covers": covers,
                }))
                .expect("rendering serializes")
            );
        }
        Format::Dot => {
            print!(
                "{}",
                hasse_dot(&rendering.title, &rendering.names, &rendering.covers)
            );
        }
    }
    Ok(())
}

fn cmd_measure(state: &str, label: Option<&str>, level: &str, eff: &Effective) -> Result<()> {
    let psi = parse_state(state, eff.seed)?;
    let lattice = PartitionLattice::new(psi.n())?;
    let report = match label {
        Some(text) => {
            let trimmed = text.trim();
            if trimmed.starts_with('↓') || trimmed.starts_with("down") {
                let vs_alpha = parse_downset(&lattice, trimmed)?;
                MeasureReport {
                    labels: vec![format_downset(&vs_alpha, &lattice)],
                    values: vec![downset_entanglement(&psi, &vs_alpha, &lattice, &eff.spec)?],
                    chain: vec![],
                }
            } else {
                let alpha = parse_partition(psi.n(), trimmed)?;
                MeasureReport {
                    labels: vec![format_partition(&alpha)],
                    values: vec![alpha_entanglement(&psi, &alpha, &eff.spec)?],
                    chain: vec![],
                }
            }
        }
        None => {
            let measure_level = match level {
                "I" | "i" => MeasureLevel::I,
                "II" | "ii" => MeasureLevel::II,
                other => return Err(Error::Config(format!("unknown level '{other}'"))),
            };
            check_multipartite_monotonicity(&psi, measure_level, &eff.spec, &lattice)?
        }
    };
    print_report(&report, eff)
}

fn print_report(report: &MeasureReport, eff: &Effective) -> Result<()> {
    match eff.format {
        Format::Json => println!(
            "{}",
            serde_json::to_string(report).expect("report serializes")
        ),
        Format::Text => {
            for (label, value) in report.labels.iter().zip(&report.values) {
                println!("{label}\t{value:.12}");
            }
            let broken: Vec<&ChainVerdict> =
                report.chain.iter().filter(|v| !v.ok).collect();
            if !report.chain.is_empty() {
                println!(
                    "chain: {} covering pairs, {} violated",
                    report.chain.len(),
                    broken.len()
                );
                for v in broken {
                    println!(
                        "  violated: {} >= {}",
                        report.labels[v.lower], report.labels[v.upper]
                    );
                }
            }
        }
        Format::Dot => {
            return Err(Error::Config("measure does not render DOT".into()))
        }
    }
    Ok(())
}

fn cmd_roof(state: &str, label: Option<&str>, eff: &Effective) -> Result<()> {
    let rho = parse_state(state, eff.seed)?;
    let lattice = PartitionLattice::new(rho.n())?;
    let vs_alpha = match label {
        Some(text) => parse_downset(&lattice, text)?,
        None => lattice.bottom_downset(),
    };
    let result = eof_downset(&rho, &vs_alpha, &lattice, &eff.spec, &eff.roof)?;
    match eff.format {
        Format::Json => println!("{}", result.to_json()),
        Format::Text => {
            println!("label: {}", format_downset(&vs_alpha, &lattice));
            println!("value: {:.12}", result.value);
            println!("converged: {}", result.converged);
            println!("iterations: {}", result.iterations);
            let spread: Vec<String> = result
                .restart_values
                .iter()
                .map(|v| format!("{v:.6}"))
                .collect();
            println!("restart values: [{}]", spread.join(", "));
            println!("note: optimizer value is an upper bound on the true roof");
        }
        Format::Dot => return Err(Error::Config("roof does not render DOT".into())),
    }
    Ok(())
}

fn cmd_classify(state: &str, threshold: f64, eff: &Effective) -> Result<()> {
    let rho = parse_state(state, eff.seed)?;
    let lattice = PartitionLattice::new(rho.n())?;
    let sub = Arc::new(Sublattice::full(&lattice)?);
    let (classes, profile) = if rho.is_pure(PURITY_EPS) {
        let class = classify_pure(&rho, &sub, &lattice)?;
        let mut values = Vec::new();
        let mut verdicts = Vec::new();
        for (i, label) in sub.labels().iter().enumerate() {
            values.push(downset_entanglement(&rho, label, &lattice, &eff.spec)?);
            verdicts.push(if class.contains(i) {
                Trilean::Zero
            } else {
                Trilean::Positive
            });
        }
        let profile = IndicatorProfile {
            sublattice: Arc::clone(&sub),
            values,
            verdicts,
        };
        (vec![class], profile)
    } else {
        classify_mixed(&rho, &sub, &lattice, &eff.spec, &eff.roof, threshold)?
    };
    match eff.format {
        Format::Json => println!("{}", profile.to_json(&lattice, &classes)),
        Format::Text => {
            if classes.len() == 1 {
                println!("class: {}", format_class(&classes[0], &lattice));
            } else {
                println!("consistent classes: {}", classes.len());
                for class in &classes {
                    println!("  {}", format_class(class, &lattice));
                }
            }
            for (i, label) in sub.labels().iter().enumerate() {
                println!(
                    "{}\t{:?}\t{:.9}",
                    format_downset(label, &lattice),
                    profile.verdicts[i],
                    profile.values[i]
                );
            }
        }
        Format::Dot => return Err(Error::Config("classify does not render DOT".into())),
    }
    Ok(())
}

fn cmd_selftest(suite: &str, eff: &Effective) -> Result<()> {
    let mut checks: Vec<(String, bool)> = Vec::new();
    let run_lattice = suite == "all" || suite == "lattice";
    let run_means = suite == "all" || suite == "means";
    let run_measures = suite == "all" || suite == "measures";
    let run_roof = suite == "all" || suite == "roof";
    if !(run_lattice || run_means || run_measures || run_roof) {
        return Err(Error::Config(format!("unknown suite '{suite}'")));
    }

    if run_lattice {
        checks.push((
            "lattice: partition counts match Bell numbers".into(),
            (1..=6).all(|n| {
                psep::lattice::enumerate_partitions(n)
                    .map(|v| v.len() as u64 == bell_number(n))
                    .unwrap_or(false)
            }),
        ));
        let lat3 = PartitionLattice::new(3)?;
        checks.push((
            "lattice: |P_II(3)| = 9".into(),
            lat3.enumerate_downset_labels()?.len() == 9,
        ));
        let sub = Arc::new(Sublattice::full(&lat3)?);
        checks.push((
            "lattice: |P_III(3)| = 20".into(),
            psep::lattice::enumerate_class_labels(&sub)?.len() == 20,
        ));
    }

    if run_means {
        use psep::means::{evaluate, ExtReal, MeanSpec};
        let xs = [0.3, 1.2, 0.7];
        let qs = [
            ExtReal::NegInf,
            ExtReal::Finite(-1.0),
            ExtReal::Finite(0.0),
            ExtReal::Finite(0.5),
            ExtReal::Finite(1.0),
            ExtReal::PosInf,
        ];
        let values: Vec<f64> = qs
            .iter()
            .map(|q| evaluate(&MeanSpec::QMean(*q), &xs))
            .collect::<Result<_>>()?;
        checks.push((
            "means: q-mean monotone in q".into(),
            values.windows(2).all(|w| w[0] <= w[1] + 1e-12),
        ));
        checks.push((
            "means: zero propagates for q <= 0".into(),
            evaluate(&MeanSpec::QMean(ExtReal::Finite(-1.0)), &[1.0, 0.0])? == 0.0,
        ));
    }

    if run_measures {
        let lat3 = PartitionLattice::new(3)?;
        let spec = PureMeasureSpec::default();
        let ghz = qstate::ghz(3, 2)?;
        let ln2 = std::f64::consts::LN_2;
        let split = parse_partition(3, "1|23")?;
        checks.push((
            "measures: E_{1|23}(GHZ) = ln 2".into(),
            (alpha_entanglement(&ghz, &split, &spec)? - ln2).abs() < 1e-9,
        ));
        let bisep = parse_downset(&lat3, "↓{1|23,2|13,3|12}")?;
        let w = qstate::w_state(3)?;
        let expect = 3f64.ln() - (2.0 / 3.0) * ln2;
        checks.push((
            "measures: E_bisep(W) = ln 3 - (2/3) ln 2".into(),
            (downset_entanglement(&w, &bisep, &lat3, &spec)? - expect).abs() < 1e-9,
        ));
        let mut all_ok = true;
        for seed in 0..20 {
            let psi =
                qstate::haar_random_pure(&qstate::DimProfile::qubits(3)?, eff.seed + seed)?;
            all_ok &= check_multipartite_monotonicity(&psi, MeasureLevel::I, &spec, &lat3)?
                .all_ok();
            all_ok &= check_multipartite_monotonicity(&psi, MeasureLevel::II, &spec, &lat3)?
                .all_ok();
        }
        checks.push((
            "measures: default chains hold on 20 random states".into(),
            all_ok,
        ));
    }

    if run_roof {
        let spec = PureMeasureSpec::default();
        let lat2 = PartitionLattice::new(2)?;
        let bisep2 = lat2.bottom_downset();
        let bell = qstate::bell()?;
        let roof_bell = eof_downset(&bell, &bisep2, &lat2, &spec, &eff.roof)?;
        checks.push((
            "roof: pure input reproduces the pure value".into(),
            (roof_bell.value - std::f64::consts::LN_2).abs() < 1e-9,
        ));
        let werner = qstate::werner(0.5)?;
        let oracle = wootters_eof(&werner, eff.log_base)?;
        let roof_w = eof_downset(&werner, &bisep2, &lat2, &spec, &eff.roof)?;
        checks.push((
            "roof: Werner p=0.5 matches Wootters within 1e-4".into(),
            (roof_w.value - oracle).abs() <= 1e-4,
        ));
        let tr3 = qstate::ghz(3, 2)?.partial_trace(&[3])?;
        let outcome =
            mixed_indicator(&tr3, &bisep2, &lat2, &spec, &eff.roof, eff.threshold)?;
        let certified = outcome.verdict == MixedVerdict::MemberCertified
            && outcome
                .roof
                .ensemble
                .entries()
                .iter()
                .all(|(_, s)| {
                    pure_downset_separable(s, &bisep2, &lat2, 1e-6).unwrap_or(false)
                });
        checks.push((
            "roof: tr_3 GHZ certified bipartite separable".into(),
            certified,
        ));
        // constant scaling passes through the roof
        let f = |psi: &QuantumState| {
            psep::measures::f_k(psi, &[1], &EntropyKind::von_neumann())
        };
        let g = |psi: &QuantumState| f(psi).map(|v| 2.0 * v);
        let r1 = psep::roof::convex_roof(&f, &werner, &eff.roof)?;
        let r2 = psep::roof::convex_roof(&g, &werner, &eff.roof)?;
        checks.push((
            "roof: scaling f by 2 doubles the roof".into(),
            (r2.value - 2.0 * r1.value).abs() < 1e-4,
        ));
    }

    let mut failures = 0;
    for (name, ok) in &checks {
        if *ok {
            println!("PASS {name}");
        } else {
            println!("FAIL {name}");
            failures += 1;
        }
    }
    println!("{} checks, {} failed", checks.len(), failures);
    Ok(())
}
