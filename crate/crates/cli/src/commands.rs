//! The subcommands. Each returns the bytes to write.

use mlia::exact::{format_rational, to_f64};
use mlia::gdof::alignment_dims;
use mlia::link_sim::{noiseless_threshold, run_monte_carlo, sweep_distances};
use mlia::scheme::{build_layer_plan, desired_set, interference_set, DimensionSet, Scheme};
use mlia::{
    achievable_gdof, achievable_gdof_limit, certify_family, converse_family, make_pair_bound, optimal_sum_gdof,
    AlphaProfile, Error, WeightedBound, SCHEMA_VERSION,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::config::{Format, RunConfig};
use crate::CliError;

fn exact(v: &BigRational) -> Value {
    json!({ "exact": format_rational(v), "decimal": to_f64(v) })
}

fn pretty(v: &Value) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(v).expect("json value");
    s.push('\n');
    s.into_bytes()
}

fn csv_bytes(header: &[&str], rows: Vec<Vec<String>>) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.into_inner().map_err(|e| CliError::Csv(e.into_error().into()))
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn gdof(cfg: &RunConfig) -> Result<Vec<u8>, CliError> {
    let alpha = cfg.alpha()?;
    let optimal = optimal_sum_gdof(alpha);
    let achievable = cfg
        .n
        .iter()
        .map(|&n| Ok((n, achievable_gdof(alpha, n)?)))
        .collect::<Result<Vec<_>, Error>>()?;
    let limit = achievable_gdof_limit(alpha);
    match cfg.format {
        Format::Json => Ok(pretty(&json!({
            "schema": SCHEMA_VERSION,
            "alphas": alpha,
            "optimal": exact(&optimal),
            "achievable": achievable.iter().map(|(n, v)| {
                let mut e = exact(v);
                e["n"] = json!(n);
                e
            }).collect::<Vec<_>>(),
            "achievable_limit": exact(&limit),
        }))),
        Format::Csv => {
            let mut rows = vec![vec![
                SCHEMA_VERSION.into(),
                "optimal".into(),
                String::new(),
                format_rational(&optimal),
                to_f64(&optimal).to_string(),
            ]];
            for (n, v) in &achievable {
                rows.push(vec![
                    SCHEMA_VERSION.into(),
                    "achievable".into(),
                    n.to_string(),
                    format_rational(v),
                    to_f64(v).to_string(),
                ]);
            }
            rows.push(vec![
                SCHEMA_VERSION.into(),
                "achievable_limit".into(),
                String::new(),
                format_rational(&limit),
                to_f64(&limit).to_string(),
            ]);
            csv_bytes(&["schema", "quantity", "n", "exact", "decimal"], rows)
        }
    }
}

/// Without alphas the weights are still fully determined by K; the
/// profile `(1/K, 2/K, …, 1)` stands in for certification.
fn bounds_alpha(cfg: &RunConfig) -> Result<AlphaProfile, CliError> {
    if let Some(a) = &cfg.alpha {
        return Ok(a.clone());
    }
    let k = cfg.k.ok_or_else(|| Error::Config("bounds needs k or alphas".into()))?;
    if k < 2 {
        return Err(Error::Config(format!("need K >= 2 users, got {k}")).into());
    }
    let k_big = BigInt::from(k);
    Ok(AlphaProfile::new(
        (1..=k)
            .map(|i| BigRational::new(BigInt::from(i), k_big.clone()))
            .collect(),
    )?)
}

pub fn bounds(cfg: &RunConfig) -> Result<Vec<u8>, CliError> {
    let alpha = bounds_alpha(cfg)?;
    let k = alpha.k();
    let (bounds, average): (Vec<WeightedBound>, BigRational) = if k == 2 {
        let b = make_pair_bound(&alpha, 1, 2)?;
        let v = b.rhs_value.clone();
        (vec![b], v)
    } else {
        let fam = converse_family(&alpha)?;
        let avg = certify_family(&alpha, &fam)?;
        (fam.bounds, avg)
    };
    let optimal = optimal_sum_gdof(&alpha);
    if average != optimal {
        return Err(Error::Certification(format!(
            "bound average {} differs from the optimum {}",
            format_rational(&average),
            format_rational(&optimal)
        ))
        .into());
    }
    match cfg.format {
        Format::Json => Ok(pretty(&json!({
            "schema": SCHEMA_VERSION,
            "k": k,
            "alphas": alpha,
            "bounds": bounds.iter().map(|b| json!({
                "text": b.to_string(),
                "lhs": b.lhs_weights,
                "rhs": b.rhs_weights,
                "rhs_value": format_rational(&b.rhs_value),
            })).collect::<Vec<_>>(),
            "average": exact(&average),
            "certified": true,
        }))),
        Format::Csv => {
            let rows = bounds
                .iter()
                .enumerate()
                .map(|(i, b)| {
                    vec![
                        SCHEMA_VERSION.into(),
                        (i + 1).to_string(),
                        b.to_string(),
                        format_rational(&b.rhs_value),
                    ]
                })
                .collect();
            csv_bytes(&["schema", "index", "bound", "rhs_value"], rows)
        }
    }
}

fn exponent_rows(set: &DimensionSet, k: usize, rows: &mut Vec<Vec<String>>) {
    for i in 0..set.len() {
        let mut r = vec![
            SCHEMA_VERSION.to_string(),
            format!("{:?}", set.kind),
            set.layer.to_string(),
            set.user.map(|u| u.to_string()).unwrap_or_default(),
            i.to_string(),
            set.values()[i].to_string(),
        ];
        r.extend(set.full_row(i).into_iter().map(|e| e.to_string()));
        debug_assert_eq!(r.len(), 6 + k * k);
        rows.push(r);
    }
}

pub fn scheme(cfg: &RunConfig) -> Result<Vec<u8>, CliError> {
    let alpha = cfg.alpha()?;
    let n = cfg.single_n()?;
    let sim = cfg.sim_config(vec![cfg.power])?;
    let channel = sim.channel()?;
    let plan = build_layer_plan(alpha, n, cfg.eps.as_ref(), cfg.power)?;
    let scheme = Scheme::new(channel, plan)?;
    let k = alpha.k();

    let mut layers = Vec::new();
    let mut csv_rows = Vec::new();
    for params in &scheme.plan.layers {
        let mut entry = serde_json::to_value(params).expect("plan serializes");
        if params.is_alignment_layer() {
            let (big_n, m) = alignment_dims(params.k_users, n);
            entry["n_over_m"] = exact(&BigRational::new(big_n, m));
            let v = monomial_len(&scheme, params.layer);
            let mut users = Vec::new();
            for user in params.layer..=k {
                let s = desired_set(&scheme.channel, user, params.layer, n)?;
                let i = interference_set(&scheme.channel, user, params.layer, n)?;
                users.push(json!({ "user": user, "s": s.len(), "i": i.len() }));
                if cfg.format == Format::Csv {
                    if user == params.layer {
                        if let Some(vset) = scheme.v_set(params.layer) {
                            exponent_rows(vset, k, &mut csv_rows);
                        }
                    }
                    exponent_rows(&s, k, &mut csv_rows);
                    exponent_rows(&i, k, &mut csv_rows);
                }
            }
            entry["cardinalities"] = json!({ "v": v, "receivers": users });
        }
        layers.push(entry);
    }
    match cfg.format {
        Format::Json => Ok(pretty(&json!({
            "schema": SCHEMA_VERSION,
            "alphas": alpha,
            "n": n,
            "eps": format_rational(&scheme.plan.eps),
            "power": cfg.power,
            "seed": cfg.seed,
            "channel": scheme.channel,
            "eta": scheme.eta,
            "gamma": scheme.gamma,
            "layers": layers,
        }))),
        Format::Csv => {
            let mut header: Vec<String> = ["schema", "set", "layer", "user", "index", "value"]
                .iter()
                .map(|s| s.to_string())
                .collect();
            for i in 1..=k {
                for j in 1..=k {
                    header.push(format!("h{i}_{j}"));
                }
            }
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            csv_bytes(&header, csv_rows)
        }
    }
}

fn monomial_len(scheme: &Scheme, ell: usize) -> usize {
    scheme.v_set(ell).map(DimensionSet::len).unwrap_or(0)
}

pub fn simulate(cfg: &RunConfig) -> Result<Vec<u8>, CliError> {
    let sim = cfg.sim_config(cfg.powers.clone())?;
    let report = run_monte_carlo(&sim)?;
    match cfg.format {
        Format::Json => {
            let mut s = report.to_json();
            s.push('\n');
            Ok(s.into_bytes())
        }
        Format::Csv => {
            let rows = report
                .ser_rows()
                .into_iter()
                .map(|r| {
                    vec![
                        SCHEMA_VERSION.into(),
                        r.power.to_string(),
                        r.user.to_string(),
                        r.layer.to_string(),
                        r.trials.to_string(),
                        r.errors.to_string(),
                        r.ser.to_string(),
                        opt(r.dmin),
                        r.tbound.to_string(),
                    ]
                })
                .collect();
            csv_bytes(
                &[
                    "schema", "P", "user", "layer", "trials", "errors", "ser", "dmin", "tbound",
                ],
                rows,
            )
        }
    }
}

pub fn mindist(cfg: &RunConfig) -> Result<Vec<u8>, CliError> {
    let sim = cfg.sim_config(cfg.powers.clone())?;
    let channel = sim.channel()?;
    let rows = sweep_distances(&channel, &sim.alpha, sim.n, sim.eps.as_ref(), &sim.powers, sim.cap)?;
    let threshold = noiseless_threshold(&rows);
    match cfg.format {
        Format::Json => Ok(pretty(&json!({
            "schema": SCHEMA_VERSION,
            "alphas": sim.alpha,
            "n": sim.n,
            "seed": sim.seed,
            "channel": channel,
            "noiseless_threshold": threshold,
            "rows": rows.iter().map(|r| json!({
                "power": r.power,
                "user": r.user,
                "layer": r.layer,
                "dmin": r.dmin,
                "tbound": r.tbound,
                "separated": r.separated(),
            })).collect::<Vec<_>>(),
        }))),
        Format::Csv => {
            let rows = rows
                .iter()
                .map(|r| {
                    vec![
                        SCHEMA_VERSION.into(),
                        r.power.to_string(),
                        r.user.to_string(),
                        r.layer.to_string(),
                        r.dmin.to_string(),
                        r.tbound.to_string(),
                        r.separated().to_string(),
                    ]
                })
                .collect();
            csv_bytes(&["schema", "P", "user", "layer", "dmin", "tbound", "separated"], rows)
        }
    }
}
