use serde_json::json;

use spinchaos::chaoscoef::{expected_area_density, S2};
use spinchaos::levelset::{
    extract_level_surface, mc_expectation_levels, mc_orthogonality, mc_truncation, AreaOptions,
};
use spinchaos::rng::stream_seed;
use spinchaos::{ChaosCoefficientTable, EulerGrid, FieldRealization, Region, SphereQuadrature};

use crate::config::ExperimentConfig;
use crate::report::{envelope, to_pretty, write_all};
use crate::CliError;

/// Reports flag |z| above this.
pub const Z_LIMIT: f64 = 4.0;

pub fn table(cfg: &ExperimentConfig) -> Result<ChaosCoefficientTable, CliError> {
    Ok(ChaosCoefficientTable::build(cfg.profile.spin_ratio_sq(), cfg.level, cfg.max_order)?)
}

pub fn quadrature(cfg: &ExperimentConfig) -> Result<SphereQuadrature, CliError> {
    Ok(SphereQuadrature::gauss_product(cfg.region, cfg.quadrature, 2 * cfg.quadrature)?)
}

fn csv(write: impl FnOnce(&mut Vec<u8>) -> spinchaos::Result<()>) -> Result<String, CliError> {
    let mut buf = Vec::new();
    write(&mut buf)?;
    Ok(String::from_utf8(buf).expect("csv is ascii"))
}

fn require_full_sphere(cfg: &ExperimentConfig, what: &str) -> Result<(), CliError> {
    if cfg.region != Region::FullSphere {
        return Err(CliError::Usage(format!("{what} measures grid areas over the full sphere; set region to full_sphere")));
    }
    Ok(())
}

pub fn coeffs(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let t = table(cfg)?;
    let files = [
        ("kappa.csv", csv(|w| t.write_kappa_csv(w))?),
        ("icoeff.csv", csv(|w| t.write_icoeff_csv(w))?),
        ("theta.csv", csv(|w| t.write_theta_csv(w))?),
        ("nu.csv", csv(|w| t.write_nu_csv(w))?),
        ("coeffs.json", to_pretty(&envelope(cfg, "coeffs", json!({ "r2": t.spin_ratio_sq(), "level": t.level() })))),
    ];
    write_all(&cfg.out_dir, &files)?;
    println!("wrote {} files to {}", files.len(), cfg.out_dir.display());
    Ok(())
}

pub fn expectation(cfg: &ExperimentConfig) -> Result<(), CliError> {
    require_full_sphere(cfg, "expectation")?;
    let profile = &cfg.profile;
    let options = AreaOptions {
        rule: cfg.area_rule,
        refine: cfg.refine,
        two_charts: cfg.two_charts,
        ..AreaOptions::default()
    };
    let report = mc_expectation_levels(
        profile,
        &[cfg.level],
        EulerGrid::cubic(cfg.grid)?,
        cfg.n_realizations,
        cfg.seed,
        &options,
    )?
    .remove(0);
    let density = expected_area_density(cfg.level, profile.spin(), profile.xi());
    let bracket = density / (2.0 * (-cfg.level * cfg.level / 2.0).exp());
    let target = density * S2;
    let z = report.z_score(target);
    let body = json!({
        "estimate": report.estimate,
        "stderr": report.stderr,
        "target": target,
        "target_density": density,
        "bracket": bracket,
        "z": z,
        "relative_error": (report.estimate - target) / target,
        "pass": z.abs() <= Z_LIMIT,
        "report": report,
    });
    write_all(&cfg.out_dir, &[("expectation.json", to_pretty(&envelope(cfg, "expectation", body)))])?;
    println!(
        "area/xi = {:.6} +- {:.6}, target {:.6} (density {:.6}), z = {:.3}",
        report.estimate, report.stderr, target, density, z
    );
    if z.abs() > Z_LIMIT {
        return Err(CliError::Failed(format!("|z| = {:.3} exceeds {Z_LIMIT}", z.abs())));
    }
    Ok(())
}

pub fn chaos(cfg: &ExperimentConfig) -> Result<(), CliError> {
    require_full_sphere(cfg, "chaos")?;
    if cfg.max_order < 2 {
        return Err(CliError::Usage("chaos needs max_order of at least 2".into()));
    }
    let quad = quadrature(cfg)?;
    let profile = &cfg.profile;
    let trunc = mc_truncation(
        profile,
        cfg.level,
        cfg.max_order,
        EulerGrid::cubic(cfg.grid)?,
        &quad,
        cfg.method,
        cfg.n_realizations,
        cfg.seed,
    )?;
    let ortho = if cfg.max_order >= 4 {
        Some(mc_orthogonality(profile, cfg.level, 2, 4, &quad, cfg.method, cfg.n_realizations, cfg.seed)?)
    } else {
        None
    };

    let mut failures = Vec::new();
    for w in trunc.rows.windows(2) {
        let rise = w[1].residual_variance - w[0].residual_variance;
        if rise > Z_LIMIT * w[1].step_stderr {
            failures.push(format!("residual variance rises by {rise:e} at Q' = {}", w[1].order));
        }
    }
    let k = trunc.covariance.len();
    for i in 1..k {
        for j in 1..i {
            let (c, se) = (trunc.covariance[i][j], trunc.covariance_stderr[i][j]);
            if c.abs() > Z_LIMIT * se {
                failures.push(format!("cov(L[{}], L[{}]) = {c:e} exceeds {Z_LIMIT} stderr ({se:e})", 2 * j, 2 * i));
            }
        }
    }
    if let Some(o) = &ortho {
        if o.estimate.abs() > Z_LIMIT * o.stderr {
            failures.push(format!("cov(L[2], L[4]) = {:e} exceeds {Z_LIMIT} stderr", o.estimate));
        }
    }

    let mut trunc_csv = String::from("order,residual_variance,residual_stderr,step_stderr\n");
    for r in &trunc.rows {
        trunc_csv.push_str(&format!("{},{:e},{:e},{:e}\n", r.order, r.residual_variance, r.residual_stderr, r.step_stderr));
    }
    let mut cov_csv = String::from("q1,q2,covariance,stderr\n");
    for i in 0..k {
        for j in 0..k {
            cov_csv.push_str(&format!(
                "{},{},{:e},{:e}\n",
                2 * i,
                2 * j,
                trunc.covariance[i][j],
                trunc.covariance_stderr[i][j]
            ));
        }
    }
    let body = json!({
        "truncation": trunc,
        "orthogonality": ortho,
        "failures": failures,
        "pass": failures.is_empty(),
    });
    write_all(
        &cfg.out_dir,
        &[
            ("truncation.csv", trunc_csv),
            ("covariance.csv", cov_csv),
            ("chaos.json", to_pretty(&envelope(cfg, "chaos", body))),
        ],
    )?;
    for r in &trunc.rows {
        println!("Q' = {:2}: residual variance {:.6e} +- {:.2e}", r.order, r.residual_variance, r.residual_stderr);
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failed(failures.join("; ")))
    }
}

pub fn simulate(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let r = FieldRealization::sample(&cfg.profile, stream_seed(cfg.seed, 0));
    let grid = EulerGrid::cubic(cfg.grid)?;
    let mesh = extract_level_surface(&r, cfg.level, &grid);
    let mut off = Vec::new();
    mesh.write_off(&mut off)?;
    let area = mesh.total_area();
    let body = json!({
        "realization": r,
        "level": cfg.level,
        "triangles": mesh.len(),
        "area": area,
        "area_over_xi": area / cfg.profile.xi(),
        "expected_area_over_xi": expected_area_density(cfg.level, cfg.profile.spin(), cfg.profile.xi()) * S2,
    });
    write_all(
        &cfg.out_dir,
        &[
            ("field.json", to_pretty(&envelope(cfg, "simulate", body))),
            ("level_surface.off", String::from_utf8(off).expect("off is ascii")),
        ],
    )?;
    println!("{} triangles, area {:.6}", mesh.len(), area);
    Ok(())
}
