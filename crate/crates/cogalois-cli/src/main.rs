//! Deterministic command-line front end: every computation of the library is
//! exposed as a scriptable subcommand with table or JSON output.
//!
//! Exit codes: 0 success, 1 verified-false (a decision procedure returned a
//! negative verdict), 2 usage or parse error, 3 desk-scale cap exceeded.

use clap::{Parser, Subcommand, ValueEnum};
use cogalois::carlitz::{carlitz_operator, cyclotomic_poly, RationalAmbient};
use cogalois::cohomology::{
    self, enumerate_cocycles, enumerate_cocycles_bruteforce, phi_inverse, phi_map, Cocycle,
};
use cogalois::extension::{
    default_purity_bound, degree_is_p_power, is_cyclotomic_coradical, is_pure, kummer_verify,
    ExtensionSpec,
};
use cogalois::classnumber::counterexample_report;
use cogalois::parse::parse_poly;
use cogalois::poly::{PolyRing, RtPoly};
use cogalois::tower::CyclotomicField;
use cogalois::twisted::TwistedRing;
use cogalois::{Error, Fq};
use std::fmt::Write as _;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "cogalois",
    about = "Carlitz cyclotomic towers and their Drinfeld cogalois modules, exactly",
    version
)]
struct Cli {
    /// Field size, q = p or p^m (e.g. `3` or `3^2`).
    #[arg(long, global = true, default_value = "3")]
    q: String,
    /// Modulus for extension fields (monic irreducible over F_p in `x`),
    /// required when m > 1.
    #[arg(long, global = true)]
    modulus: Option<String>,
    /// Monic irreducible level polynomial P, e.g. `T` or `T^2+1`.
    #[arg(long = "P", global = true, default_value = "T")]
    p_poly: String,
    /// Tower level n >= 1.
    #[arg(long, global = true, default_value_t = 1)]
    n: usize,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Worker threads for the parallel scans (speed only; output is
    /// byte-identical for any value).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Write output to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
    /// Label group elements s1..sN in the conventional worked-example order,
    /// available for q = 3, P = T, n = 2 or 3.
    #[arg(long, global = true)]
    paper_labels: bool,
    /// Explicit comma-separated label map (polynomial literals in sigma
    /// order), overriding --paper-labels.
    #[arg(long, global = true)]
    labels: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Base {
    /// The rational function field k.
    K,
    /// The first tower level k(Lambda_P).
    Level1,
}

#[derive(Subcommand)]
enum Command {
    /// Multiplication table of the relative Galois group Gal(L_n/L_1).
    GroupTable,
    /// Enumerate all crossed homomorphisms Z^1(G, Lambda_{P^n}).
    Cocycles {
        /// Use the exhaustive scan instead of the generator-relation method.
        #[arg(long)]
        bruteforce: bool,
    },
    /// |Drincog(L_n/L_1)| = |Z^1|.
    Drincog,
    /// Solve for the normalized preimage of a cocycle given as JSON.
    Preimage {
        /// JSON file: {"values": [{"sigma": "...", "d": "..."}, ...]}.
        #[arg(long)]
        cocycle: std::path::PathBuf,
    },
    /// Purity of k(Lambda_{P^n}) over the chosen base.
    Purity {
        #[arg(long, value_enum, default_value_t = Base::Level1)]
        base: Base,
    },
    /// Cyclotomic-coradical decision over the chosen base.
    Coradical {
        #[arg(long, value_enum, default_value_t = Base::Level1)]
        base: Base,
    },
    /// Drinfeld-Kummer verification of C_a(U) - z over k(Lambda_a).
    Kummer {
        /// Monic divisor a of P^n.
        #[arg(long)]
        a: String,
        /// Use the embedded first-level generator as alpha (degenerate case).
        #[arg(long)]
        first_level_alpha: bool,
    },
    /// The class-number-two counterexample suite (q = 3 only).
    Counterexample,
    /// The Carlitz operator C_M, optionally evaluated at a rational function.
    CarlitzEval {
        /// Operand polynomial M.
        #[arg(long = "M")]
        m: String,
        /// Evaluate C_M at this element of k (`poly` or `poly/poly`).
        #[arg(long)]
        at: Option<String>,
    },
    /// The Carlitz cyclotomic polynomial Psi_{P^n}(U).
    Cyclopoly,
}

struct Outcome {
    text: String,
    json: serde_json::Value,
    certificates: Vec<String>,
    verified_false: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(out) => {
            let rendered = match cli.format {
                Format::Table => out.text.clone(),
                Format::Json => {
                    let payload = serde_json::json!({
                        "schema": 1,
                        "q": cli.q,
                        "P": cli.p_poly,
                        "n": cli.n,
                        "command": command_name(&cli.command),
                        "result": out.json,
                        "certificates": out.certificates,
                    });
                    serde_json::to_string_pretty(&payload).expect("serializable")
                }
            };
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, rendered + "\n") {
                    eprintln!("error: cannot write output file: {e}");
                    return ExitCode::from(2);
                }
            } else {
                use std::io::Write;
                let mut stdout = std::io::stdout().lock();
                // a closed pipe (e.g. piping into `head`) is not an error
                if let Err(e) = writeln!(stdout, "{rendered}") {
                    if e.kind() != std::io::ErrorKind::BrokenPipe {
                        eprintln!("error: {e}");
                        return ExitCode::from(2);
                    }
                }
            }
            if out.verified_false {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::DeskScaleExceeded { .. } => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::GroupTable => "group-table",
        Command::Cocycles { .. } => "cocycles",
        Command::Drincog => "drincog",
        Command::Preimage { .. } => "preimage",
        Command::Purity { .. } => "purity",
        Command::Coradical { .. } => "coradical",
        Command::Kummer { .. } => "kummer",
        Command::Counterexample => "counterexample",
        Command::CarlitzEval { .. } => "carlitz-eval",
        Command::Cyclopoly => "cyclopoly",
    }
}

fn parse_field(cli: &Cli) -> cogalois::Result<Fq> {
    let (p, m) = if let Some((base, exp)) = cli.q.split_once('^') {
        let p: u64 = base.parse().map_err(|_| Error::Parse {
            pos: 0,
            msg: "bad q literal".into(),
        })?;
        let m: usize = exp.parse().map_err(|_| Error::Parse {
            pos: 0,
            msg: "bad q exponent".into(),
        })?;
        (p, m)
    } else {
        let q: u64 = cli.q.parse().map_err(|_| Error::Parse {
            pos: 0,
            msg: "bad q literal".into(),
        })?;
        // split q into p^m
        let mut p = q;
        let mut m = 1;
        for cand in 2..=q {
            if cand * cand > q {
                break;
            }
            if q.is_multiple_of(cand) {
                p = cand;
                let mut rest = q;
                m = 0;
                while rest.is_multiple_of(cand) {
                    rest /= cand;
                    m += 1;
                }
                if rest != 1 {
                    return Err(Error::Invalid(format!("{q} is not a prime power")));
                }
                break;
            }
        }
        (p, m)
    };
    if m == 1 {
        Fq::prime(p)
    } else {
        let modulus_text = cli.modulus.as_ref().ok_or_else(|| {
            Error::Invalid("extension fields need --modulus (over F_p in x)".into())
        })?;
        let fp = Fq::prime(p)?;
        let modulus = parse_poly(&fp, modulus_text, 'x')?;
        let coeffs: Vec<u64> = modulus
            .coeffs()
            .iter()
            .map(|c| c.residues()[0])
            .collect();
        Fq::extension(p, &coeffs)
    }
}

fn build_tower(cli: &Cli) -> cogalois::Result<CyclotomicField> {
    let fq = parse_field(cli)?;
    let p_poly = parse_poly(&fq, &cli.p_poly, 'T')?;
    CyclotomicField::build_tower(fq, p_poly, cli.n)
}

/// Resolves sigma labels: identity permutation (canonical order), a built-in
/// worked-example order for the two known towers, or an explicit map.
fn resolve_labels(cli: &Cli, tower: &CyclotomicField) -> cogalois::Result<Vec<usize>> {
    let group = tower.relative_units();
    if let Some(spec) = &cli.labels {
        let fq = tower.fq().clone();
        let mut order = Vec::new();
        for part in spec.split(',') {
            let poly = parse_poly(&fq, part.trim(), 'T')?;
            let reduced = tower.residue_ring()?.reduce(&poly);
            let idx = group
                .iter()
                .position(|b| *b == reduced)
                .ok_or_else(|| Error::Invalid(format!("label {part} is not in the group")))?;
            order.push(idx);
        }
        if order.len() != group.len() {
            return Err(Error::Invalid("label map must cover the whole group".into()));
        }
        return Ok(order);
    }
    if cli.paper_labels {
        let known: Option<&[&str]> = match (cli.q.as_str(), cli.p_poly.as_str(), cli.n) {
            ("3", "T", 2) => Some(&["1", "T+1", "2T+1"]),
            ("3", "T", 3) => Some(&[
                "1",
                "2T^2+T+1",
                "2T^2+2T+1",
                "T^2+T+1",
                "T^2+2T+1",
                "T+1",
                "2T+1",
                "T^2+1",
                "2T^2+1",
            ]),
            _ => None,
        };
        let known = known.ok_or_else(|| {
            Error::Invalid("no built-in label map for this tower; use --labels".into())
        })?;
        let fq = tower.fq().clone();
        let mut order = Vec::new();
        for text in known {
            let poly = parse_poly(&fq, text, 'T')?;
            let reduced = tower.residue_ring()?.reduce(&poly);
            order.push(group.iter().position(|b| *b == reduced).expect("member"));
        }
        return Ok(order);
    }
    Ok((0..group.len()).collect())
}

fn execute(cli: &Cli) -> cogalois::Result<Outcome> {
    #[cfg(feature = "parallel")]
    if let Some(n) = cli.workers {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::Invalid(format!("thread pool: {e}")))?;
        return pool.install(|| dispatch(cli));
    }
    #[cfg(not(feature = "parallel"))]
    let _ = cli.workers;
    dispatch(cli)
}

fn dispatch(cli: &Cli) -> cogalois::Result<Outcome> {
    match &cli.command {
        Command::GroupTable => group_table(cli),
        Command::Cocycles { bruteforce } => cocycles_cmd(cli, *bruteforce),
        Command::Drincog => drincog_cmd(cli),
        Command::Preimage { cocycle } => preimage_cmd(cli, cocycle),
        Command::Purity { base } => purity_cmd(cli, *base),
        Command::Coradical { base } => coradical_cmd(cli, *base),
        Command::Kummer {
            a,
            first_level_alpha,
        } => kummer_cmd(cli, a, *first_level_alpha),
        Command::Counterexample => counterexample_cmd(cli),
        Command::CarlitzEval { m, at } => carlitz_eval_cmd(cli, m, at.as_deref()),
        Command::Cyclopoly => cyclopoly_cmd(cli),
    }
}

fn group_table(cli: &Cli) -> cogalois::Result<Outcome> {
    let tower = build_tower(cli)?;
    let labels = resolve_labels(cli, &tower)?;
    let table = tower.multiplication_table(&tower.relative_group())?;
    // position of canonical index within the label order
    let back: Vec<usize> = {
        let mut v = vec![0; labels.len()];
        for (pos, &c) in labels.iter().enumerate() {
            v[c] = pos;
        }
        v
    };
    let n = labels.len();
    let mut text = String::new();
    let head: Vec<String> = (1..=n).map(|i| format!("s{i}")).collect();
    writeln!(text, "      {}", head.join("  ")).unwrap();
    let mut rows_json = Vec::new();
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            row.push(back[table[labels[i]][labels[j]]] + 1);
        }
        let cells: Vec<String> = row.iter().map(|k| format!("s{k}")).collect();
        writeln!(text, "s{:<4} {}", i + 1, cells.join("  ")).unwrap();
        rows_json.push(row);
    }
    let mut legend = Vec::new();
    for (pos, &c) in labels.iter().enumerate() {
        legend.push(format!(
            "s{} = {}",
            pos + 1,
            tower
                .ring()
                .format_rt(tower.relative_units()[c].rep(), "T")
        ));
    }
    writeln!(text, "{}", legend.join(", ")).unwrap();
    Ok(Outcome {
        text: text.trim_end().to_string(),
        json: serde_json::json!({ "table": rows_json, "labels": legend }),
        certificates: vec![],
        verified_false: false,
    })
}

fn cocycle_line(tower: &CyclotomicField, f: &Cocycle, labels: &[usize]) -> String {
    let parts: Vec<String> = labels
        .iter()
        .map(|&i| tower.ring().format_rt(f.values[i].rep(), "T"))
        .collect();
    format!("({})", parts.join(", "))
}

fn cocycles_cmd(cli: &Cli, bruteforce: bool) -> cogalois::Result<Outcome> {
    let tower = build_tower(cli)?;
    let labels = resolve_labels(cli, &tower)?;
    let report = if bruteforce {
        enumerate_cocycles_bruteforce(&tower)?
    } else {
        enumerate_cocycles(&tower)?
    };
    let mut text = String::new();
    let heads: Vec<String> = labels
        .iter()
        .map(|&i| {
            tower
                .ring()
                .format_rt(tower.relative_units()[i].rep(), "T")
        })
        .collect();
    writeln!(text, "sigma order: {}", heads.join(", ")).unwrap();
    for f in &report.cocycles {
        writeln!(text, "{}", cocycle_line(&tower, f, &labels)).unwrap();
    }
    writeln!(
        text,
        "z1 = {}, b1 = {}, h1 = {}",
        report.z1_size, report.b1_size, report.h1_size
    )
    .unwrap();
    let json = serde_json::json!({
        "method": if bruteforce { "bruteforce" } else { "generators" },
        "sigma_order": heads,
        "cocycles": report
            .cocycles
            .iter()
            .map(|f| labels
                .iter()
                .map(|&i| tower.ring().format_rt(f.values[i].rep(), "T"))
                .collect::<Vec<_>>())
            .collect::<Vec<_>>(),
        "z1": report.z1_size,
        "b1": report.b1_size,
        "h1": report.h1_size,
    });
    Ok(Outcome {
        text: text.trim_end().to_string(),
        json,
        certificates: vec![],
        verified_false: false,
    })
}

fn drincog_cmd(cli: &Cli) -> cogalois::Result<Outcome> {
    let tower = build_tower(cli)?;
    let report = enumerate_cocycles(&tower)?;
    let bound = cohomology::size_bound_check(&tower, &report)?;
    let certificates = vec![
        format!(
            "z1 = {} = b1 {} x h1 {}",
            report.z1_size, report.b1_size, report.h1_size
        ),
        format!(
            "size bound: {} <= {} (rank {})",
            bound.drincog_size, bound.bound, bound.rank
        ),
    ];
    Ok(Outcome {
        text: report.z1_size.to_string(),
        json: serde_json::json!(report.z1_size),
        certificates,
        verified_false: !bound.holds,
    })
}

fn preimage_cmd(cli: &Cli, path: &std::path::Path) -> cogalois::Result<Outcome> {
    let tower = build_tower(cli)?;
    let raw = std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("cannot read cocycle file: {e}")))?;
    let parsed: serde_json::Value = serde_json::from_str(&raw).map_err(|e| Error::Parse {
        pos: 0,
        msg: format!("bad cocycle JSON: {e}"),
    })?;
    let entries = parsed
        .get("values")
        .and_then(|v| v.as_array())
        .ok_or_else(|| Error::Parse {
            pos: 0,
            msg: "cocycle JSON needs a `values` array".into(),
        })?;
    let fq = tower.fq().clone();
    let rr = tower.residue_ring()?.clone();
    let group = tower.relative_units().to_vec();
    let mut values = vec![None; group.len()];
    for e in entries {
        let sigma = e.get("sigma").and_then(|s| s.as_str()).ok_or(Error::Parse {
            pos: 0,
            msg: "entry needs a `sigma` string".into(),
        })?;
        let d = e.get("d").and_then(|s| s.as_str()).ok_or(Error::Parse {
            pos: 0,
            msg: "entry needs a `d` string".into(),
        })?;
        let sigma = rr.reduce(&parse_poly(&fq, sigma, 'T')?);
        let d = rr.reduce(&parse_poly(&fq, d, 'T')?);
        let idx = group
            .iter()
            .position(|b| *b == sigma)
            .ok_or(Error::MissingGroupElement)?;
        values[idx] = Some(d);
    }
    let values: Vec<_> = values
        .into_iter()
        .collect::<Option<_>>()
        .ok_or(Error::MissingGroupElement)?;
    let cocycle = Cocycle {
        level: tower.level().unwrap().clone(),
        values,
    };
    let alpha = phi_inverse(&tower, &cocycle)?;
    let back = phi_map(&tower, &alpha)?;
    debug_assert_eq!(back, cocycle);
    let coords: Vec<String> = tower
        .coordinates(&alpha)
        .iter()
        .map(|c| tower.rat_field().format(c, "T"))
        .collect();
    let text = format!("alpha = {}", tower.format_elem(&alpha));
    Ok(Outcome {
        text,
        json: serde_json::json!({ "coordinates": coords }),
        certificates: vec![format!(
            "phi(alpha) reproduces the cocycle; C_(P^n)(alpha) lies in the base field"
        )],
        verified_false: false,
    })
}

fn base_spec(tower: &CyclotomicField, base: Base) -> cogalois::Result<ExtensionSpec> {
    match base {
        Base::K => ExtensionSpec::over_k(tower),
        Base::Level1 => ExtensionSpec::full_tower(tower),
    }
}

fn purity_cmd(cli: &Cli, base: Base) -> cogalois::Result<Outcome> {
    let tower = build_tower(cli)?;
    let spec = base_spec(&tower, base)?;
    let verdict = is_pure(&tower, &spec, default_purity_bound(&tower))?;
    let text = if verdict.pure {
        "pure".to_string()
    } else {
        format!(
            "not pure (witness m = {})",
            tower
                .ring()
                .format_rt(verdict.witness.as_ref().unwrap(), "T")
        )
    };
    let json = serde_json::json!({
        "pure": verdict.pure,
        "witness": verdict
            .witness
            .as_ref()
            .map(|w| tower.ring().format_rt(w, "T")),
        "scanned_degree_bound": verdict.scanned_degree_bound,
    });
    Ok(Outcome {
        verified_false: !verdict.pure,
        text,
        json,
        certificates: vec![],
    })
}

fn coradical_cmd(cli: &Cli, base: Base) -> cogalois::Result<Outcome> {
    let tower = build_tower(cli)?;
    let spec = base_spec(&tower, base)?;
    let cert = is_cyclotomic_coradical(&tower, &spec, default_purity_bound(&tower))?;
    let (p_power, s) = degree_is_p_power(&tower, &spec);
    let mut certificates = vec![
        format!("radical: {}", cert.radical),
        format!("separable: {}", cert.separable),
        format!("pure: {}", cert.purity.pure),
        format!("[L:K] = {} (p-power: {}, exponent {})", spec.degree(), p_power, s),
    ];
    if let Some(clause) = cert.failed_clause {
        certificates.push(format!("failed clause: {clause}"));
    }
    let text = if cert.verdict {
        "cyclotomic coradical".to_string()
    } else {
        format!(
            "not cyclotomic coradical (failed: {})",
            cert.failed_clause.unwrap_or("unknown")
        )
    };
    Ok(Outcome {
        json: serde_json::json!({
            "coradical": cert.verdict,
            "radical": cert.radical,
            "separable": cert.separable,
            "pure": cert.purity.pure,
            "degree": spec.degree().to_string(),
            "degree_is_p_power": p_power,
        }),
        verified_false: !cert.verdict,
        text,
        certificates,
    })
}

fn kummer_cmd(cli: &Cli, a: &str, first_level_alpha: bool) -> cogalois::Result<Outcome> {
    let tower = build_tower(cli)?;
    let a = parse_poly(&tower.fq().clone(), a, 'T')?;
    let alpha = if first_level_alpha {
        tower.lambda_first_level()?
    } else {
        tower.lambda()
    };
    let report = kummer_verify(&tower, &a, &alpha)?;
    let ok = report.p_power_exponent.is_some()
        && report.theta_in_torsion
        && report.theta_injective
        && report.theta_homomorphism;
    let text = format!(
        "[K(alpha):K] = {}{}; roots checked: {}; Theta monomorphism: {}",
        report.degree,
        report
            .p_power_exponent
            .map(|s| format!(" = p^{s}"))
            .unwrap_or_else(|| " (not a p-power)".into()),
        report.roots_checked,
        report.theta_injective && report.theta_homomorphism && report.theta_in_torsion,
    );
    Ok(Outcome {
        json: serde_json::json!({
            "degree": report.degree,
            "p_power_exponent": report.p_power_exponent,
            "roots_checked": report.roots_checked,
            "theta_in_torsion": report.theta_in_torsion,
            "theta_injective": report.theta_injective,
            "theta_homomorphism": report.theta_homomorphism,
            "degenerate": report.degenerate,
        }),
        verified_false: !ok,
        text,
        certificates: vec![],
    })
}

fn counterexample_cmd(cli: &Cli) -> cogalois::Result<Outcome> {
    let q: u128 = cli
        .q
        .parse()
        .map_err(|_| Error::Invalid("bad q literal".into()))?;
    let report = counterexample_report(q)?;
    let mut text = String::new();
    writeln!(text, "{}", report.verdict).unwrap();
    writeln!(
        text,
        "(T xi)^2 = xi(1-xi): {} (embedded: {})",
        report.square_relation, report.square_relation_embedded
    )
    .unwrap();
    writeln!(
        text,
        "ell(Z) mod xi = Z^2, mod (xi-1) = Z^2: ramification indices {} and {}",
        report.kummer_x.ramification_index, report.kummer_x_minus_one.ramification_index
    )
    .unwrap();
    writeln!(
        text,
        "(A/(xi))^* : order {}, cyclic {}, generator 2+y, (2+y)^2 = {}",
        report.units.order,
        report.units.cyclic,
        format_quot(report.units.generator_square),
    )
    .unwrap();
    writeln!(
        text,
        "stabilizer of delta: order {}; [E(delta):E] = {}, [L:E(delta)] = {}",
        report.delta.stabilizer_order, report.delta.degree_e_delta, report.delta.degree_l_over_e_delta
    )
    .unwrap();
    for c in &report.contradicted {
        writeln!(text, "contradicts: {} -- witness: {}", c.statement, c.witness).unwrap();
    }
    let json = serde_json::json!({
        "verdict": report.verdict,
        "degrees": [report.delta.degree_e_delta, report.delta.degree_l_over_e_delta],
        "unit_group_order": report.units.order,
        "unit_orders": report.units.element_orders,
        "contradicted": report
            .contradicted
            .iter()
            .map(|c| serde_json::json!({ "statement": c.statement, "witness": c.witness }))
            .collect::<Vec<_>>(),
        "class_number": report.class_number,
    });
    Ok(Outcome {
        verified_false: !report.consistent,
        text: text.trim_end().to_string(),
        json,
        certificates: vec![format!("h_A = {} (recorded, not recomputed)", report.class_number)],
    })
}

fn format_quot(u: cogalois::classnumber::QuotElem) -> String {
    match (u.a, u.b) {
        (a, 0) => a.to_string(),
        (0, 1) => "y".into(),
        (0, b) => format!("{b}y"),
        (a, 1) => format!("{a}+y"),
        (a, b) => format!("{a}+{b}y"),
    }
}

fn carlitz_eval_cmd(cli: &Cli, m: &str, at: Option<&str>) -> cogalois::Result<Outcome> {
    let fq = parse_field(cli)?;
    let ring = PolyRing::new(fq.clone());
    let m = parse_poly(&fq, m, 'T')?;
    let op = carlitz_operator(&ring, &m);
    let tw = TwistedRing::new(ring.clone());
    let mut text = format!("C_M = {}", tw.format(&op));
    let mut json = serde_json::json!({ "operator": tw.format(&op) });
    if let Some(at) = at {
        let rat = cogalois::RatField::new(fq.clone());
        let value = if let Some((num, den)) = at.split_once('/') {
            rat.fraction(parse_poly(&fq, num, 'T')?, parse_poly(&fq, den, 'T')?)?
        } else {
            rat.from_poly(parse_poly(&fq, at, 'T')?)
        };
        let ambient = RationalAmbient { field: rat.clone() };
        let image = cogalois::carlitz::carlitz_act(&ring, &ambient, &m, &value);
        let shown = rat.format(&image, "T");
        write!(text, "\nC_M({}) = {}", rat.format(&value, "T"), shown).unwrap();
        json = serde_json::json!({
            "operator": tw.format(&op),
            "at": rat.format(&value, "T"),
            "value": shown,
        });
    }
    Ok(Outcome {
        text,
        json,
        certificates: vec![],
        verified_false: false,
    })
}

fn format_u_poly(ring: &PolyRing<Fq>, psi: &[RtPoly]) -> String {
    let mut terms = Vec::new();
    for (i, c) in psi.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let cs = ring.format_rt(c, "T");
        let term = match i {
            0 => cs,
            _ => {
                let head = if cs == "1" {
                    String::new()
                } else if cs.contains('+') || cs.contains('T') {
                    format!("({cs})")
                } else {
                    cs
                };
                if i == 1 {
                    format!("{head}U")
                } else {
                    format!("{head}U^{i}")
                }
            }
        };
        terms.push(term);
    }
    terms.join("+")
}

fn cyclopoly_cmd(cli: &Cli) -> cogalois::Result<Outcome> {
    let fq = parse_field(cli)?;
    let ring = PolyRing::new(fq.clone());
    let p_poly = parse_poly(&fq, &cli.p_poly, 'T')?;
    let psi = cyclotomic_poly(&ring, &p_poly, cli.n)?;
    let text = format_u_poly(&ring, &psi);
    let coeffs: Vec<String> = psi.iter().map(|c| ring.format_rt(c, "T")).collect();
    Ok(Outcome {
        json: serde_json::json!({ "psi": text, "degree": psi.len() - 1, "coefficients": coeffs }),
        text,
        certificates: vec![format!("degree = Phi(P^n) = {}", psi.len() - 1)],
        verified_false: false,
    })
}
