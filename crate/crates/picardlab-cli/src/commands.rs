//! One function per subcommand, each returning a finished report.
//!
//! Checks run in registry order; nothing here depends on completion order.

use std::f64::consts::PI;

use picardlab::congruence::{rho, trace_congruence_count};
use picardlab::expsums::{kloosterman, twisted_csum, weil_bound};
use picardlab::geocount::Census;
use picardlab::gint::enumerate_by_norm;
use picardlab::lfun::{
    dedekind_fe_residual, dedekind_residue, dedekind_zeta, dedekind_zeta_lattice, lerch_fe_rhs, lerch_zeta,
};
use picardlab::moments::{
    gaussian_integral_oracle, h_star, h_weight, i_decay_slope, i_weight, omega_t, psi_mellin_check, IRep,
    WeightSpec,
};
use picardlab::specfun::gamma::stirling_leading;
use picardlab::specfun::{
    bessel_addition_check, gamma_c, hyp2f1, motohashi_k_def, motohashi_k_rep1, motohashi_k_rep2,
};
use picardlab::spectral::{edge_check, explicit_rhs, load_table, spectral_exp_sum, SpectralTable};
use picardlab::{Error, GaussianInt, LerchSpec, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::report::{cx, Check, Report};
use crate::{Cli, Command};

type Run = Result<Report, String>;

fn err(e: Error) -> String {
    e.to_string()
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn g(re: i64, im: i64) -> GaussianInt {
    GaussianInt::new(re, im)
}

fn gauss(s: &str) -> Result<GaussianInt, String> {
    s.parse().map_err(err)
}

impl Cli {
    fn tol(&self, default: f64) -> f64 {
        self.tolerance.unwrap_or(default)
    }

    fn config(&self) -> Value {
        json!({
            "qmax_norm": self.qmax_norm,
            "nmax_norm": self.nmax_norm,
            "truncation_norm": self.truncation_norm,
            "tolerance": self.tolerance,
            "eigenvalues": self.eigenvalues.as_ref().map(|p| p.display().to_string()),
            "H": self.h,
            "conj_height": self.conj_height,
            "seed": self.seed,
        })
    }

    fn table(&self) -> Result<SpectralTable, String> {
        let path = self.eigenvalues.as_ref().ok_or("this command needs --eigenvalues FILE")?;
        load_table(path).map_err(err)
    }
}

pub fn run(cli: &Cli) -> Run {
    if let Some(t) = cli.tolerance {
        if !(t > 0.0) {
            return Err("--tolerance must be positive".into());
        }
    }
    match &cli.command {
        Command::Kloosterman { m, n, c } => kloosterman_cmd(cli, m.as_deref(), n.as_deref(), c.as_deref()),
        Command::Identity => identity(cli),
        Command::Rho { q, n } => rho_cmd(cli, q, n),
        Command::Zeta => zeta(cli),
        Command::LerchFe => lerch(cli),
        Command::SpecfunCheck => specfun(cli),
        Command::MomentsCheck => moments(cli),
        Command::Geodesics { x, points } => geodesics(cli, *x, *points),
        Command::SpectralSum { t, x, g } => spectral_sum(cli, *t, *x, *g),
        Command::ExplicitFormula { x, t } => explicit(cli, *x, *t),
    }
}

fn kloosterman_cmd(cli: &Cli, m: Option<&str>, n: Option<&str>, cc: Option<&str>) -> Run {
    let tol = cli.tol(1e-9);
    let anchor = "Weil bound";
    let checks = match (m, n, cc) {
        (Some(m), Some(n), Some(cc)) => {
            let (m, n, cc) = (gauss(m)?, gauss(n)?, gauss(cc)?);
            let k = kloosterman(m, n, cc).map_err(err)?;
            let excess = (k.value.norm() - k.weil_bound).max(0.0);
            let values = json!({"m": m.to_string(), "n": n.to_string(), "c": cc.to_string(),
                                "S": cx(k.value), "bound": k.weil_bound});
            vec![Check::residual("S(m,n;c)", anchor, values, excess, tol)]
        }
        (None, None, None) => {
            let mn: Vec<GaussianInt> = std::iter::once(g(0, 0)).chain(enumerate_by_norm(cli.nmax_norm)).collect();
            let mut rows = Vec::new();
            for cc in enumerate_by_norm(cli.qmax_norm) {
                let mut worst = f64::NEG_INFINITY;
                let mut ratio = 0.0f64;
                for &m in &mn {
                    for &n in &mn {
                        let v = kloosterman(m, n, cc).map_err(err)?.value.norm();
                        let b = weil_bound(m, n, cc);
                        worst = worst.max(v - b);
                        ratio = ratio.max(v / b);
                    }
                }
                let values = json!({"c": cc.to_string(), "max_ratio_to_bound": ratio});
                rows.push(Check::residual(format!("c={cc}"), anchor, values, worst.max(0.0), tol));
            }
            rows
        }
        _ => return Err("give all of --m, --n, --c, or none of them for the panel".into()),
    };
    Ok(Report::new("kloosterman", cli.config(), checks, Value::Null))
}

const N_PANEL: [(i64, i64); 12] = [
    (0, 0), (1, 0), (0, 1), (1, 1), (2, 0), (2, 1),
    (-1, 2), (3, 0), (3, -1), (-2, -2), (4, 1), (-3, 5),
];

fn identity(cli: &Cli) -> Run {
    let tol = cli.tol(1e-6);
    let mut checks = Vec::new();
    for q in enumerate_by_norm(cli.qmax_norm) {
        let mut worst = 0.0f64;
        for &(a, b) in &N_PANEL {
            let n = g(a, b);
            let lhs = twisted_csum(n, q).map_err(err)?;
            let r = rho(q, n.conj() * n.conj() - g(4, 0)).map_err(err)?.count;
            worst = worst.max((lhs - q.norm() as f64 * r as f64).norm());
        }
        let values = json!({"q": q.to_string(), "panel_size": N_PANEL.len()});
        checks.push(Check::residual(format!("q={q}"), "sum of Kloosterman sums", values, worst, tol));
    }
    Ok(Report::new("identity", cli.config(), checks, Value::Null))
}

fn rho_cmd(cli: &Cli, q: &str, n: &str) -> Run {
    let (q, n) = (gauss(q)?, gauss(n)?);
    let d = n.conj() * n.conj() - g(4, 0);
    let count = rho(q, d).map_err(err)?.count;
    let traces = trace_congruence_count(n, q).map_err(err)?;
    let values = json!({"count": count, "trace_congruence_count": traces});
    let checks = vec![Check::flag("correspondence", "trace congruence correspondence", values, count == traces)];
    let data = json!({"q": q.to_string(), "n": n.to_string(), "D": d.to_string(), "count": count});
    Ok(Report::new("rho", cli.config(), checks, data))
}

fn zeta(cli: &Cli) -> Run {
    let mut checks = Vec::new();
    let s = c(2.0, 0.0);
    let exact = dedekind_zeta(s).map_err(err)?;
    let lat = dedekind_zeta_lattice(s, cli.truncation_norm);
    checks.push(Check::residual(
        "lattice s=2",
        "Dedekind zeta lattice sum",
        json!({"continued": cx(exact), "lattice": cx(lat), "truncation_norm": cli.truncation_norm}),
        (lat - exact).norm(),
        cli.tol(1e-4),
    ));
    for u in [c(0.1, 0.2), c(-0.3, 1.0), c(0.25, -2.5), c(-0.1, 4.0), c(0.4, 0.7)] {
        let r = dedekind_fe_residual(u).map_err(err)?;
        checks.push(Check::residual(
            format!("FE s={}{:+}i", u.re, u.im),
            "Dedekind zeta functional equation",
            json!({"s": cx(u)}),
            r,
            cli.tol(1e-8),
        ));
    }
    let res = dedekind_residue(1e-4).map_err(err)?;
    checks.push(Check::residual(
        "residue s=1",
        "Dedekind zeta residue pi/4",
        json!({"residue": res}),
        (res - PI / 4.0).abs(),
        cli.tol(1e-6),
    ));
    Ok(Report::new("zeta", cli.config(), checks, Value::Null))
}

fn lerch(cli: &Cli) -> Run {
    let xi = c(0.25, 0.5);
    let mut checks = Vec::new();
    for s in [c(-0.3, 0.4), c(-0.7, -1.1), c(-1.5, 2.5)] {
        for m in [0, 2, -4] {
            let spec = LerchSpec { s, m, xi };
            let a = lerch_zeta(spec).map_err(err)?;
            let b = lerch_fe_rhs(spec, 60.0).map_err(err)?;
            checks.push(Check::residual(
                format!("s={}{:+}i m={m}", s.re, s.im),
                "Lerch zeta functional equation",
                json!({"s": cx(s), "m": m, "xi": cx(xi), "lhs": cx(a), "rhs": cx(b)}),
                (a - b).norm(),
                cli.tol(1e-6),
            ));
        }
    }
    let h = 1e-5;
    let up = lerch_zeta(LerchSpec { s: c(1.0 + h, 0.0), m: 0, xi }).map_err(err)? * h;
    let down = lerch_zeta(LerchSpec { s: c(1.0 - h, 0.0), m: 0, xi }).map_err(err)? * (-h);
    let res = (up + down) * 0.5;
    checks.push(Check::residual(
        "residue m=0",
        "Lerch zeta residue pi",
        json!({"residue": cx(res)}),
        (res - PI).norm(),
        cli.tol(1e-6),
    ));
    Ok(Report::new("lerch-fe", cli.config(), checks, Value::Null))
}

fn specfun(cli: &Cli) -> Run {
    let mut checks = Vec::new();
    let mut gam = 0.0f64;
    for i in 0..=100 {
        let r = i as f64 / 10.0;
        let lhs = gamma_c(c(0.5, r)).map_err(err)? * gamma_c(c(0.5, -r)).map_err(err)?;
        let rhs = PI / (PI * r).cosh();
        gam = gam.max((lhs.re / rhs - 1.0).abs() + lhs.im.abs() / rhs);
    }
    checks.push(Check::residual(
        "Gamma(1/2+ir)Gamma(1/2-ir)",
        "Gamma reflection on the critical line",
        json!({"grid": "r = 0, 0.1, ..., 10"}),
        gam,
        cli.tol(1e-10),
    ));
    for z in [c(10.0, 20.0), c(30.0, -5.0), c(5.0, 60.0)] {
        let rel = (gamma_c(z).map_err(err)? / stirling_leading(z) - 1.0).norm();
        checks.push(Check::residual(
            format!("Stirling z={}{:+}i", z.re, z.im),
            "Stirling leading term",
            json!({"z": cx(z), "bound": 1.0 / (6.0 * z.norm())}),
            rel,
            cli.tol(1.0 / (6.0 * z.norm())),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    for i in 0..5 {
        let (a, b) = (rng.gen_range(0.1..2.0), rng.gen_range(0.1..2.0));
        let z = rng.gen_range(0.1..3.0);
        let theta = rng.gen_range(0.0..PI);
        let r = bessel_addition_check(a, b, z, theta, 40);
        checks.push(Check::residual(
            format!("addition #{i}"),
            "Bessel addition identity",
            json!({"a": a, "b": b, "z": z, "theta": theta}),
            r,
            cli.tol(1e-8),
        ));
    }
    let pts = [
        (0.3, C64::from_polar(1.5, PI / 7.0)),
        (1.0, C64::from_polar(0.8, 1.2)),
        (2.5, C64::from_polar(2.2, -0.4)),
        (0.7, C64::from_polar(0.4, 2.5)),
        (1.8, C64::from_polar(3.0, 0.9)),
    ];
    for (r, u) in pts {
        let k1 = motohashi_k_rep1(r, u).map_err(err)?;
        let k2 = motohashi_k_rep2(r, u, 40).map_err(err)?;
        let kd = motohashi_k_def(r, u).map_err(err)?;
        checks.push(Check::residual(
            format!("K r={r} u={:.3}{:+.3}i", u.re, u.im),
            "kernel K representations",
            json!({"r": r, "u": cx(u), "rep1": cx(k1), "rep2": cx(k2), "definition": cx(kd)}),
            (k1 - k2).norm().max((k1 - kd).norm()),
            cli.tol(1e-6),
        ));
    }
    let (a, b, cc, z) = (c(0.5, 0.3), c(1.2, -0.4), c(2.1, 0.2), c(0.3, 0.2));
    let lhs = hyp2f1(a, b, cc, z).map_err(err)?;
    let rhs = (1.0 - z).powc(cc - a - b) * hyp2f1(cc - a, cc - b, cc, z).map_err(err)?;
    checks.push(Check::residual(
        "Euler transformation",
        "2F1 Euler transformation",
        json!({"a": cx(a), "b": cx(b), "c": cx(cc), "z": cx(z), "value": cx(lhs)}),
        (lhs - rhs).norm(),
        cli.tol(1e-10),
    ));
    Ok(Report::new("specfun-check", cli.config(), checks, Value::Null))
}

fn moments(cli: &Cli) -> Run {
    let mut checks = Vec::new();
    let w = WeightSpec::new(5.0, 2, 10.0, 1.0, 1.0).map_err(err)?;
    let mut zeros = 0.0f64;
    for n in 1..=3u32 {
        let wn = WeightSpec::new(5.0, n, 10.0, 1.0, 3.0).map_err(err)?;
        for k in 1..=n {
            for z in [c(0.0, k as f64), c(0.0, k as f64 - 0.5)] {
                zeros = zeros.max(h_weight(z, &wn).norm()).max(h_weight(-z, &wn).norm());
            }
        }
    }
    checks.push(Check::residual("q_N zeros", "zeros of the weight h", json!({"N": "1..3"}), zeros, cli.tol(1e-12)));

    let tau = PI / 4.0;
    let base = h_star(1, tau, c(0.5, 0.0), &w).map_err(err)?.norm();
    let vanish = h_star(1, tau, c(-1.0, 0.0), &w).map_err(err)?.norm() / base;
    checks.push(Check::residual(
        "h* at s=-1",
        "vanishing of h*",
        json!({"m": 1, "tau": tau, "reference_modulus": base}),
        vanish,
        cli.tol(1e-6),
    ));

    let mellin = psi_mellin_check(1, tau, c(1.2, 0.0), &w).map_err(err)?;
    checks.push(Check::residual(
        "psi Mellin",
        "Mellin transform of psi",
        json!({"m": 1, "tau": tau, "s": cx(c(1.2, 0.0))}),
        mellin,
        cli.tol(1e-6),
    ));

    let n = g(3, 2);
    let s = c(0.6, 0.2);
    let i1 = i_weight(n, PI / 3.0, s, &w, IRep::One).map_err(err)?;
    let i2 = i_weight(n, PI / 3.0, s, &w, IRep::Two).map_err(err)?;
    checks.push(Check::residual(
        "I rep1 vs rep2",
        "I integral representations",
        json!({"n": n.to_string(), "tau": PI / 3.0, "s": cx(s), "rep1": cx(i1), "rep2": cx(i2)}),
        (i1 - i2).norm() / i1.norm(),
        cli.tol(1e-5),
    ));

    let ns: Vec<i64> = (3..=10).collect();
    let slope = i_decay_slope(&ns, tau, s, &w).map_err(err)?;
    let slope_max = -(w.n as f64 + 0.5) + 0.5;
    checks.push(Check::flag(
        "I decay slope",
        "decay of I in |n|",
        json!({"slope": slope, "max_slope": slope_max, "n_range": "3..10"}),
        slope <= slope_max,
    ));

    let t: f64 = 100.0;
    let gg = t.powf(0.1);
    let window = (omega_t(1.5 * t, t, gg) - 1.0)
        .abs()
        .max(omega_t(4.0 * t, t, gg))
        .max(omega_t(-t, t, gg))
        .max((omega_t(t, t, gg) - 0.5).abs())
        .max((omega_t(2.0 * t, t, gg) - 0.5).abs());
    checks.push(Check::residual(
        "omega_T window",
        "dyadic window omega_T",
        json!({"T": t, "G": gg}),
        window,
        cli.tol(1e-6),
    ));

    let panel = [
        (c(1.0, 0.0), c(0.0, 0.0), 0),
        (c(1.0, 0.0), c(2.0, 0.0), 1),
        (c(0.8, 0.3), c(1.0, -2.0), 2),
        (c(1.5, -0.4), c(-0.5, 3.0), 3),
        (c(0.6, 0.1), c(0.0, 4.0), 4),
    ];
    for (p, q, k) in panel {
        let chk = gaussian_integral_oracle(p, q, k).map_err(err)?;
        checks.push(Check::residual(
            format!("Gaussian p={}{:+}i q={}{:+}i n={k}", p.re, p.im, q.re, q.im),
            "Gaussian moment integrals",
            json!({"closed": cx(chk.closed_moment), "quadrature": cx(chk.quad_moment)}),
            chk.residual(),
            cli.tol(1e-10),
        ));
    }
    Ok(Report::new("moments-check", cli.config(), checks, Value::Null))
}

fn geodesics(cli: &Cli, x: Option<f64>, points: usize) -> Run {
    let census = Census::build(cli.h, cli.conj_height).map_err(err)?;
    let x = x.unwrap_or(census.x_max);
    let rep = census.count(x).map_err(err)?;
    let checks = vec![
        Check::flag(
            "box certificate",
            "class inventory stable under conjugator doubling",
            json!({"classes": census.classes.len(), "x_max": census.x_max}),
            census.complete,
        ),
        Check::info(
            "counts",
            "prime geodesic counting functions",
            json!({"X": rep.x, "pi_gamma": rep.pi_gamma, "psi_gamma": rep.psi_gamma, "E_gamma": rep.e_gamma,
                   "psi_over_main_term": rep.psi_gamma / (x * x / 2.0)}),
        ),
    ];
    let mut series = Vec::new();
    let lo = 2.0f64.min(x);
    for i in 0..points {
        let xi = if points == 1 { x } else { lo + (x - lo) * i as f64 / (points - 1) as f64 };
        if xi <= 1.0 {
            continue;
        }
        let r = census.count(xi).map_err(err)?;
        series.push(json!({"X": xi, "psi_gamma": r.psi_gamma, "pi_gamma": r.pi_gamma, "main_term": xi * xi / 2.0}));
    }
    let data = json!({"report": rep, "series": series});
    Ok(Report::new("geodesics", cli.config(), checks, data))
}

fn positive(name: &str, v: f64) -> Result<(), String> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(format!("{name} must be positive"))
    }
}

fn spectral_sum(cli: &Cli, t: f64, x: f64, gg: f64) -> Run {
    positive("T", t)?;
    positive("G", gg)?;
    if !(x > 1.0) {
        return Err("X must exceed 1".into());
    }
    let table = cli.table()?;
    let s = spectral_exp_sum(&table, t, x);
    let end = table.values.partition_point(|&r| r <= t);
    let rev: C64 = table.values[..end].iter().rev().map(|&r| C64::from_polar(1.0, r * x.ln())).sum();
    let edge = edge_check(&table, t, gg, x, 3.0);
    let checks = vec![
        Check::info(
            "S(T,X)",
            "spectral exponential sum",
            json!({"S": cx(s), "terms": end, "source": table.source}),
        ),
        Check::residual(
            "summation order",
            "spectral exponential sum",
            json!({"reversed": cx(rev)}),
            (s - rev).norm(),
            cli.tol(1e-12 * (end.max(1) as f64)),
        ),
        Check::flag(
            "dyadic smoothing",
            "dyadic split with window omega_T",
            json!({"smoothed": cx(edge.smoothed), "difference": edge.residual,
                   "edge_terms": edge.edge_count, "window": edge.window}),
            edge.within_bound,
        ),
    ];
    Ok(Report::new("spectral-sum", cli.config(), checks, Value::Null).with_warnings(table.warnings()))
}

fn explicit(cli: &Cli, x: f64, t: f64) -> Run {
    positive("T", t)?;
    if !(x > 1.0) {
        return Err("X must exceed 1".into());
    }
    let table = cli.table()?;
    let rhs = explicit_rhs(&table, t, x);
    let mut warnings = table.warnings();
    if !rhs.in_range {
        warnings.push(format!("T = {t} lies outside [1, sqrt(X)] = [1, {:.6}]", x.sqrt()));
    }
    let terms = table.values.partition_point(|&r| r <= t);
    let checks = vec![Check::info(
        "Psi approximation",
        "explicit formula for Psi",
        json!({"psi_approx": rhs.value, "main_term": x * x / 2.0, "terms": terms}),
    )];
    let data = json!({"X": x, "T": t, "psi_approx": rhs.value, "source": table.source});
    Ok(Report::new("explicit-formula", cli.config(), checks, data).with_warnings(warnings))
}
