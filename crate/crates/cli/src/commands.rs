//! One function per subcommand; each returns a [`Report`].

use std::f64::consts::FRAC_PI_6;
use std::fmt::Write;

use serde_json::json;

use cell24_core::constructions::{automorphisms, d4, disjoint_hexagon_claim, enumerate_hexagons};
use cell24_core::designs::design_strength;
use cell24_core::dynamics::{
    basin_experiment, classify, d4_closed_form_spectrum, d4_hessian_closed_form, descend,
    family_gradient_residual, hessian_spectrum, theta_critical_points, DescentOptions,
    CLASSIFY_TOL, CRITICAL_ZERO_TOL,
};
use cell24_core::energy::{
    best_theta_vs_d4, energy, lemma_genfun_check, lemma_minimum, scan_theta,
};
use cell24_core::exact::proposition::TAIL_INDUCTION_NOTE;
use cell24_core::exact::{
    proposition_table, tail_criterion, tail_first_k, tail_induction_step_holds, three_design_roots,
    verify_k3_identity,
};
use cell24_core::geometry::hopf_image;
use cell24_core::{Potential, Result};

use crate::output::Report;
use crate::Command;

/// Values of k for which some C_θ beats the 24-cell.
const PROPOSITION_POSITIVE: std::ops::RangeInclusive<u32> = 8..=13;
const LEMMA_SPREAD_TOL: f64 = 1e-10;
const LEMMA_ARGMIN_TOL: f64 = 1e-8;
const GENFUN_TOL: f64 = 1e-10;
const CUBE_SUM_TOL: f64 = 1e-8;
const HESSIAN_REL_TOL: f64 = 1e-6;
const HOPF_TOL: f64 = 1e-9;

pub fn run(cmd: &Command) -> Result<Report> {
    match cmd {
        Command::Gen { code } => {
            let c = code.build()?;
            let mut text = String::new();
            for p in &c.points {
                let [a, b, x, y] = p.0;
                let _ = writeln!(text, "{a} {b} {x} {y}");
            }
            Ok(Report::new(&c, text).seeds(code.seed()))
        }
        Command::Energy { code, potential } => {
            let c = code.build()?;
            let e = energy(&c, potential)?;
            Ok(Report::new(
                json!({"code": c.label, "potential": potential.to_string(), "energy": e}),
                format!("{e}\n"),
            )
            .seeds(code.seed()))
        }
        Command::ScanTheta {
            potential,
            grid,
            tol,
        } => {
            let scan = scan_theta(potential, *grid, *tol)?;
            let mut text = String::from("theta energy\n");
            for m in &scan.minima {
                let _ = writeln!(text, "{:.10} {:.10}", m.theta, m.energy);
            }
            Ok(Report::new(
                json!({"potential": potential.to_string(), "minima": scan.minima}),
                text,
            )
            .with_csv(scan.to_csv()))
        }
        Command::BestTheta { potential } => {
            let mut rows = Vec::new();
            let mut text = String::from("potential theta energy margin\n");
            for f in potential {
                let b = best_theta_vs_d4(f)?;
                let _ = writeln!(
                    text,
                    "{f} {:.10} {:.10} {:.10}",
                    b.theta, b.energy, b.margin
                );
                rows.push(json!({"potential": f.to_string(), "theta": b.theta, "energy": b.energy, "margin": b.margin}));
            }
            Ok(Report::new(rows, text))
        }
        Command::DesignStrength { code, k_max, tol } => {
            let c = code.build()?;
            let r = design_strength(&c, *k_max, *tol);
            let mut text = format!("strength {}\n", r.strength);
            for d in &r.defects {
                let _ = writeln!(text, "k={} defect={:.3e}", d.k, d.defect);
            }
            Ok(Report::new(&r, text).seeds(code.seed()))
        }
        Command::Proposition { k_min, k_max } => {
            let rows = proposition_table(*k_min, *k_max)?;
            let ok = rows
                .iter()
                .all(|r| r.attains_positive == PROPOSITION_POSITIVE.contains(&r.k));
            let mut text = String::from("k attains_positive numerator_degree wall_time_ms\n");
            for r in &rows {
                let deg = r
                    .numerator_degree
                    .map_or("-".to_string(), |d| d.to_string());
                let _ = writeln!(
                    text,
                    "{} {} {} {:.1}",
                    r.k, r.attains_positive, deg, r.wall_time_ms
                );
            }
            let csv =
                std::iter::once("k,attains_positive,numerator_degree,wall_time_ms\n".to_string())
                    .chain(rows.iter().map(|r| {
                        let deg = r.numerator_degree.map_or(String::new(), |d| d.to_string());
                        format!(
                            "{},{},{},{}\n",
                            r.k, r.attains_positive, deg, r.wall_time_ms
                        )
                    }))
                    .collect();
            Ok(Report::new(&rows, text).with_csv(csv).verified(ok))
        }
        Command::K3Identity => {
            let ok = verify_k3_identity();
            Ok(Report::new(
                json!({"identity": "-18*(u^6 - 6*u^4 - 12*u^3 + 3*u^2 - 2)^2/(u^2+1)^6", "holds": ok}),
                format!("k=3 factorization holds: {ok}\n"),
            )
            .verified(ok))
        }
        Command::TailCriterion { k_min, k_max } => {
            let rows = (*k_min..=*k_max)
                .map(|k| Ok((k, tail_criterion(k)?)))
                .collect::<Result<Vec<_>>>()?;
            let all = rows.iter().all(|r| r.1);
            let step = tail_induction_step_holds();
            let first = tail_first_k(k_max.max(&200).to_owned());
            let text = format!(
                "criterion holds for every k in {k_min}..={k_max}: {all}\nfirst k where it holds: {}\ninduction step holds: {step}\n{TAIL_INDUCTION_NOTE}\n",
                first.map_or("none".to_string(), |k| k.to_string())
            );
            let body = json!({
                "rows": rows.iter().map(|(k, h)| json!({"k": k, "holds": h})).collect::<Vec<_>>(),
                "all_hold": all,
                "first_k": first,
                "induction_step_holds": step,
                "induction_note": TAIL_INDUCTION_NOTE,
            });
            Ok(Report::new(body, text).verified(all && step))
        }
        Command::ThreeDesign => {
            let d = three_design_roots()?;
            let ok = d.same_code
                && d.roots.len() == 2
                && d.cube_sums
                    .iter()
                    .all(|x| (x + 1.0 / 3.0).abs() < CUBE_SUM_TOL);
            let mut text = String::new();
            for ((u, (s, c)), cs) in d.roots.iter().zip(&d.sin_cos).zip(&d.cube_sums) {
                let _ = writeln!(
                    text,
                    "u={u:.10} sin={s:.10} cos={c:.10} sin^3+cos^3={cs:.12}"
                );
            }
            let _ = writeln!(
                text,
                "cubic root y=sin+cos: {:.12}\nsame code: {}",
                d.cubic_root, d.same_code
            );
            Ok(Report::new(&d, text).verified(ok))
        }
        Command::Lemma { k_min, k_max, grid } => {
            let mut rows = Vec::new();
            let mut ok = true;
            let mut text = String::from("k spread theta_min value\n");
            for k in *k_min..=*k_max {
                let m = lemma_minimum(k, *grid);
                let row_ok = if k <= 5 {
                    m.spread < LEMMA_SPREAD_TOL
                } else {
                    (m.theta - FRAC_PI_6).abs() < LEMMA_ARGMIN_TOL && m.runner_up > m.value
                };
                ok &= row_ok;
                let _ = writeln!(
                    text,
                    "{k} {:.3e} {:.12} {:.10} {}",
                    m.spread,
                    m.theta,
                    m.value,
                    if row_ok { "ok" } else { "FAIL" }
                );
                rows.push(json!({"k": k, "spread": m.spread, "theta": m.theta, "value": m.value, "ok": row_ok}));
            }
            Ok(Report::new(rows, text).verified(ok))
        }
        Command::GenfunCheck { theta, max_order } => {
            let rows: Vec<(f64, f64)> = theta
                .iter()
                .map(|&t| (t, lemma_genfun_check(t, *max_order)))
                .collect();
            let ok = rows.iter().all(|r| r.1 < GENFUN_TOL);
            let text = rows
                .iter()
                .map(|(t, d)| format!("theta={t} max_discrepancy={d:.3e}\n"))
                .collect::<String>();
            let body: Vec<_> = rows
                .iter()
                .map(|(t, d)| json!({"theta": t, "max_discrepancy": d}))
                .collect();
            Ok(Report::new(json!({"max_order": max_order, "rows": body}), text).verified(ok))
        }
        Command::Hessian {
            code,
            potential,
            zero_tol,
        } => {
            let c = code.build()?;
            let s = hessian_spectrum(&c, potential, *zero_tol)?;
            let mut text = format!(
                "negative {} zero {} positive {}\n",
                s.negative_count, s.zero_count, s.positive_count
            );
            for (v, m) in &s.clusters {
                let _ = writeln!(text, "{v:.10} x{m}");
            }
            Ok(Report::new(&s, text)
                .with_csv(s.to_csv())
                .seeds(code.seed()))
        }
        Command::HessianTable {
            potential,
            positivity_k_max,
        } => hessian_table(potential, *positivity_k_max),
        Command::Descend {
            code,
            potential,
            grad_tol,
            max_iters,
        } => {
            let start = code.build()?;
            let opts = DescentOptions {
                grad_tol: *grad_tol,
                max_iters: *max_iters,
                ..Default::default()
            };
            let mut r = descend(&start, potential, &opts)?;
            let refs = cell24_core::dynamics::basin_references(potential)?;
            r.label = Some(classify(&r.code, &refs, CLASSIFY_TOL));
            let text = format!(
                "energy {:.12}\niterations {}\ngradient_norm {:.3e}\nconverged {}\nstalled {}\nlabel {}\n",
                r.energy,
                r.iterations,
                r.grad_norm,
                r.converged,
                r.stalled,
                r.label.as_deref().unwrap_or("")
            );
            Ok(Report::new(&r, text).seeds(code.seed()))
        }
        Command::Basin {
            potential,
            trials,
            seed,
        } => {
            let s = basin_experiment(potential, *trials, *seed, &DescentOptions::default())?;
            let mut text = format!(
                "trials {} seed {} not_converged {}\n",
                s.trials, s.seed, s.not_converged
            );
            for (label, n) in &s.counts {
                let _ = writeln!(text, "{label}: {n} ({:.1}%)", 100.0 * s.fractions[label]);
            }
            Ok(Report::new(&s, text).seeds([*seed]))
        }
        Command::CriticalPoints { potential } => {
            let cps = theta_critical_points(potential)?;
            let mut text =
                String::from("theta energy negative zero gradient_norm family_minimum\n");
            for c in &cps {
                let _ = writeln!(
                    text,
                    "{:.10} {:.6} {} {} {:.3e} {}",
                    c.theta,
                    c.energy,
                    c.negative_count,
                    c.zero_count,
                    c.gradient_norm,
                    c.family_minimum
                );
            }
            let body: Vec<_> = cps
                .iter()
                .map(|c| {
                    json!({"theta": c.theta, "energy": c.energy, "negative_count": c.negative_count,
                           "zero_count": c.zero_count, "gradient_norm": c.gradient_norm,
                           "family_minimum": c.family_minimum, "eigenvalues": c.eigenvalues})
                })
                .collect();
            Ok(Report::new(
                json!({"potential": potential.to_string(), "zero_tol": CRITICAL_ZERO_TOL, "points": body}),
                text,
            ))
        }
        Command::GradientResidual { potential, theta } => {
            let rows = theta
                .iter()
                .map(|&t| Ok((t, family_gradient_residual(t, potential)?)))
                .collect::<Result<Vec<_>>>()?;
            let text = rows
                .iter()
                .map(|(t, r)| format!("theta={t} residual={r:.3e}\n"))
                .collect::<String>();
            let body: Vec<_> = rows
                .iter()
                .map(|(t, r)| json!({"theta": t, "residual": r}))
                .collect();
            Ok(Report::new(body, text))
        }
        Command::HexagonClaim => {
            let code = d4();
            let hexagons = enumerate_hexagons(&code);
            let autos = automorphisms(&code)?;
            let claim = disjoint_hexagon_claim(&code)?;
            let ok = claim.holds;
            let text = format!(
                "hexagons {}\nautomorphisms {}\neisenstein partitions {}\ndisjoint pairs {}\nevery disjoint pair lies in an Eisenstein partition: {}\n",
                hexagons.len(),
                autos.len(),
                claim.partitions.len(),
                claim.disjoint_pairs.len(),
                claim.holds
            );
            let body = json!({
                "hexagon_count": hexagons.len(),
                "automorphism_count": autos.len(),
                "partition_count": claim.partitions.len(),
                "disjoint_pair_count": claim.disjoint_pairs.len(),
                "claim": claim,
            });
            Ok(Report::new(body, text).verified(ok))
        }
        Command::Hopf { code } => {
            let c = code.build()?;
            let img = hopf_image(&c, HOPF_TOL);
            let tetra = img.is_regular_tetrahedron(HOPF_TOL);
            let mut text = format!(
                "distinct images {}\nregular tetrahedron {}\n",
                img.points.len(),
                tetra
            );
            for (p, n) in &img.points {
                let _ = writeln!(
                    text,
                    "({:.12}, {:.12}, {:.12}) x{n}",
                    p.0[0], p.0[1], p.0[2]
                );
            }
            Ok(
                Report::new(json!({"image": img, "regular_tetrahedron": tetra}), text)
                    .seeds(code.seed()),
            )
        }
    }
}

fn hessian_table(potentials: &[Potential], positivity_k_max: u32) -> Result<Report> {
    let mut ok = true;
    let mut text = String::new();
    let mut tables = Vec::new();
    for f in potentials {
        let numeric = hessian_spectrum(&d4(), f, 1e-8)?;
        let closed = d4_closed_form_spectrum(f)?;
        let scale = numeric.spectral_radius().max(f64::MIN_POSITIVE);
        let max_rel = numeric
            .eigenvalues
            .iter()
            .zip(&closed)
            .map(|(a, b)| (a - b).abs() / scale)
            .fold(0.0, f64::max);
        let matches = max_rel < HESSIAN_REL_TOL;
        ok &= matches;
        let _ = writeln!(
            text,
            "{f}: max relative deviation {max_rel:.3e} ({})",
            if matches { "ok" } else { "FAIL" }
        );
        let rows = d4_hessian_closed_form(f)?;
        for (v, m) in &rows {
            let _ = writeln!(text, "  {v:.10} x{m}");
        }
        tables.push(
            json!({"potential": f.to_string(), "closed_form": rows, "numeric": numeric.eigenvalues,
                           "max_relative_deviation": max_rel, "matches": matches}),
        );
    }
    let nonpositive: Vec<u32> = (6..=positivity_k_max)
        .filter(|&k| {
            d4_hessian_closed_form(&Potential::PowPlus(k))
                .map(|r| r[1..].iter().any(|(v, _)| *v <= 0.0))
                .unwrap_or(true)
        })
        .collect();
    ok &= nonpositive.is_empty();
    let _ = writeln!(
        text,
        "nonzero closed forms positive for (1+t)^k, k = 6..={positivity_k_max}: {}",
        nonpositive.is_empty()
    );
    let body = json!({"tables": tables, "positivity_k_max": positivity_k_max, "nonpositive_k": nonpositive});
    Ok(Report::new(body, text).verified(ok))
}
