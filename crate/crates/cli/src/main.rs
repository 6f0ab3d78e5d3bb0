//! exform: exact exterior-calculus analyses over `.form` files.
//!
//! Every subcommand prints one [`report::AnalysisReport`] to standard
//! output (json by default, text with `--format text`) and reserves the
//! exit code for the tool itself: 0 means the analysis ran, whatever the
//! mathematical verdicts were; 1 is a usage or input error, 2 a syntax
//! error in a `.form` file, 3 a semantic error (unknown names, degree or
//! variable mismatches, out-of-domain parameters). Errors and parse
//! warnings go to standard error, never into the report.

mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use exform::closure::{classify_form, restrict_and_test, Exactness};
use exform::dsl::{parse, Declaration, Document};
use exform::evolutionary::{
    degree_descent, evolutionary_differential, integrating_factor_search, jacobian_determinant,
    nonidentity_report, poisson_bracket, Descent, EvolutionaryRelation, FactorSearch,
    DEFAULT_EXPONENT_BOUND,
};
use exform::forms::{DifferentialForm, ParamMap};
use exform::metric::{
    codifferential, hodge_star, laplace_alternate, laplace_de_rham, DiagonalMetric,
};
use exform::physics::{
    classification_table, maxwell_check, poincare_cartan_check, thermo_demo, DimensionPolicy,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use report::{AnalysisReport, InputDigest, Restriction, ResultBody, ResultEntry, TableRow};
use sha2::{Digest, Sha256};

#[derive(Parser)]
#[command(
    name = "exform",
    version,
    about = "Exact symbolic analyses of exterior and evolutionary differential forms"
)]
struct Cli {
    /// Report format on standard output.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Cmd {
    /// Closure, exactness, commutator, and dual-closure report per form.
    Analyze {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Analyze only these declared forms (default: all, in order).
        #[arg(long)]
        form: Vec<String>,
        /// A metric declared in the file; adds the dual-closure check.
        #[arg(long)]
        metric: Option<String>,
        /// A map declared in the file; also classifies the restriction.
        #[arg(long)]
        map: Option<String>,
    },
    /// Exterior derivative of each form.
    D {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        form: Vec<String>,
    },
    /// Wedge product of two declared forms.
    Wedge {
        file: PathBuf,
        left: String,
        right: String,
    },
    /// Hodge dual of each form (default metric: Euclidean).
    Star {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        form: Vec<String>,
        #[arg(long)]
        metric: Option<String>,
    },
    /// Codifferential of each form (default metric: Euclidean).
    Delta {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        form: Vec<String>,
        #[arg(long)]
        metric: Option<String>,
    },
    /// Laplace-de Rham operator on each form (default metric: Euclidean).
    Laplace {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        form: Vec<String>,
        #[arg(long)]
        metric: Option<String>,
    },
    /// Commutator matrix of each 1-form.
    Commutator {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        form: Vec<String>,
    },
    /// Pullback of each form through a declared map.
    Pullback {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        form: Vec<String>,
        #[arg(long)]
        map: String,
    },
    /// Closure check and polynomial exactness witness per form.
    Witness {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        form: Vec<String>,
    },
    /// Evolutionary differential of each form under a torsion family.
    Evolve {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        form: Vec<String>,
        #[arg(long)]
        torsion: String,
    },
    /// Identity test for the balance relation written against each form.
    Relation {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        form: Vec<String>,
        #[arg(long)]
        torsion: Option<String>,
    },
    /// Integrating-factor search for each 1-form.
    Factor {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        form: Vec<String>,
        /// Laurent exponent bound (overrides EXFORM_EXPONENT_BOUND).
        #[arg(long)]
        exponent_bound: Option<u32>,
    },
    /// One degree-descent step of each form through a declared map.
    Descent {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        form: Vec<String>,
        #[arg(long)]
        map: String,
    },
    /// Jacobian determinant and degeneracy samples of declared maps.
    Jacobian {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Analyze only this declared map (default: all, in order).
        #[arg(long)]
        map: Option<String>,
    },
    /// Poisson bracket of two declared 0-forms under canonical pairs.
    Poisson {
        file: PathBuf,
        left: String,
        right: String,
        /// Canonical coordinate pairs, e.g. `q:p` or `q1:p1,q2:p2`.
        #[arg(long)]
        pairs: String,
    },
    /// Field-equation check dF = 0 and d*F = 0 for each 2-form.
    Maxwell {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        form: Vec<String>,
        /// A metric declared in the file (default: the +,-,-,- signature).
        #[arg(long)]
        metric: Option<String>,
    },
    /// Action-form invariance check for Hamiltonian 0-forms.
    Hamilton {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Check only these forms (default: every 0-form).
        #[arg(long)]
        form: Vec<String>,
    },
    /// Ideal-gas heat form, its integrating factor, and the entropy.
    Thermo {
        /// Heat capacity at constant volume, a positive rational.
        #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
        cv: BigRational,
        /// Gas constant, a nonnegative rational.
        #[arg(long = "R", value_parser = parse_rational, allow_hyphen_values = true)]
        gas_constant: BigRational,
        #[arg(long)]
        exponent_bound: Option<u32>,
    },
    /// The triangular classification table of evolutionary structures.
    Table {
        /// Fix the ambient space dimension instead of matching the degree.
        #[arg(long)]
        space_dimension: Option<u32>,
    },
}

enum Failure {
    Usage(String),
    Syntax(String),
    Semantic(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Syntax(_) => 2,
            Failure::Semantic(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Syntax(m) | Failure::Semantic(m) => m,
        }
    }
}

fn semantic(e: exform::Error) -> Failure {
    Failure::Semantic(format!("error: {e}"))
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    let start = Instant::now();
    let mut inputs = Vec::new();
    let results = match dispatch(&cli.command, &mut inputs) {
        Ok(results) => results,
        Err(failure) => {
            eprintln!("{}", failure.message());
            return failure.code();
        }
    };
    let report = AnalysisReport {
        tool_version: env!("CARGO_PKG_VERSION"),
        command: std::env::args().skip(1).collect::<Vec<_>>().join(" "),
        inputs,
        results,
        timing_ms: start.elapsed().as_millis(),
    };
    match cli.format {
        Format::Json => print!("{}", report.to_json()),
        Format::Text => print!("{}", report.to_text()),
    }
    0
}

fn dispatch(cmd: &Cmd, inputs: &mut Vec<InputDigest>) -> Result<Vec<ResultEntry>, Failure> {
    match cmd {
        Cmd::Analyze {
            files,
            form,
            metric,
            map,
        } => for_each_form(files, form, inputs, |loaded, _, w| {
            analyze_one(loaded, w, metric, map)
        }),
        Cmd::D { files, form } => for_each_form(files, form, inputs, |_, _, w| {
            let d = w.exterior_derivative();
            Ok(ResultBody::Derivative {
                degree: d.degree(),
                derivative: d.to_string(),
                zero: d.is_zero(),
            })
        }),
        Cmd::Wedge { file, left, right } => {
            let loaded = load(file, inputs)?;
            let l = lookup_form(&loaded, left)?;
            let r = lookup_form(&loaded, right)?;
            let product = l.wedge(r).map_err(semantic)?;
            Ok(vec![ResultEntry {
                target: format!("{}:{}^{}", loaded.name, left, right),
                body: ResultBody::Wedge {
                    left: l.to_string(),
                    right: r.to_string(),
                    degree: product.degree(),
                    product: product.to_string(),
                },
            }])
        }
        Cmd::Star {
            files,
            form,
            metric,
        } => for_each_form(files, form, inputs, |loaded, _, w| {
            let (name, g) = resolve_metric(loaded, metric, w.variables().len())?;
            let dual = hodge_star(w, &g).map_err(semantic)?;
            Ok(ResultBody::Star {
                metric: name,
                degree: dual.degree(),
                dual: dual.to_string(),
            })
        }),
        Cmd::Delta {
            files,
            form,
            metric,
        } => for_each_form(files, form, inputs, |loaded, _, w| {
            let (name, g) = resolve_metric(loaded, metric, w.variables().len())?;
            let delta = codifferential(w, &g).map_err(semantic)?;
            Ok(ResultBody::Codifferential {
                metric: name,
                codifferential: delta.to_string(),
            })
        }),
        Cmd::Laplace {
            files,
            form,
            metric,
        } => for_each_form(files, form, inputs, |loaded, _, w| {
            let (name, g) = resolve_metric(loaded, metric, w.variables().len())?;
            let laplace = laplace_de_rham(w, &g).map_err(semantic)?;
            let alternate = laplace_alternate(w, &g).map_err(semantic)?;
            Ok(ResultBody::Laplace {
                metric: name,
                laplace: laplace.to_string(),
                alternate: alternate.to_string(),
            })
        }),
        Cmd::Commutator { files, form } => for_each_form(files, form, inputs, |_, _, w| {
            let k = w.commutator().map_err(semantic)?;
            Ok(ResultBody::Commutator {
                zero: k.is_zero(),
                commutator: k.to_string(),
            })
        }),
        Cmd::Pullback { files, form, map } => for_each_form(files, form, inputs, |loaded, _, w| {
            let phi = lookup_map(&loaded.document, &loaded.name, map)?;
            let pulled = w.pullback(phi).map_err(semantic)?;
            Ok(ResultBody::Pullback {
                map: map.clone(),
                pseudostructure_dim: phi.arity(),
                pullback: pulled.to_string(),
            })
        }),
        Cmd::Witness { files, form } => for_each_form(files, form, inputs, |_, _, w| {
            let report = classify_form(w, None).map_err(semantic)?;
            let (status, witness) = witness_status(report.closed, &report.exactness);
            Ok(ResultBody::Witness {
                closed: report.closed,
                status,
                witness,
            })
        }),
        Cmd::Evolve {
            files,
            form,
            torsion,
        } => for_each_form(files, form, inputs, |loaded, _, w| {
            let t = lookup_torsion(&loaded.document, &loaded.name, torsion)?;
            let differential = evolutionary_differential(w, &t).map_err(semantic)?;
            Ok(ResultBody::Evolve {
                torsion: torsion.clone(),
                reduces_to_d: differential == w.exterior_derivative(),
                differential: differential.to_string(),
            })
        }),
        Cmd::Relation {
            files,
            form,
            torsion,
        } => for_each_form(files, form, inputs, |loaded, _, w| {
            let t = torsion
                .as_ref()
                .map(|n| lookup_torsion(&loaded.document, &loaded.name, n))
                .transpose()?;
            let relation = EvolutionaryRelation::new("psi", w.clone()).map_err(semantic)?;
            let verdict = nonidentity_report(&relation, t.as_ref()).map_err(semantic)?;
            Ok(ResultBody::Relation {
                psi: relation.psi().to_string(),
                torsion: torsion.clone(),
                identical: verdict.identical,
                internal_force: verdict.internal_force.to_string(),
                commutator: verdict.commutator.map(|k| k.to_string()),
            })
        }),
        Cmd::Factor {
            files,
            form,
            exponent_bound,
        } => {
            let bound = resolve_bound(*exponent_bound)?;
            for_each_form(files, form, inputs, |_, _, w| {
                let search = integrating_factor_search(w, bound).map_err(semantic)?;
                let (status, factor) = match search {
                    FactorSearch::Found(mu) => ("found", Some(mu.to_string())),
                    FactorSearch::NotFoundWithinAnsatz => ("not_found_within_ansatz", None),
                    FactorSearch::FrobeniusFails => ("frobenius_fails", None),
                };
                Ok(ResultBody::Factor {
                    exponent_bound: bound,
                    status: status.to_string(),
                    factor,
                })
            })
        }
        Cmd::Descent { files, form, map } => for_each_form(files, form, inputs, |loaded, name, w| {
            let phi = lookup_map(&loaded.document, &loaded.name, map)?;
            let relation = EvolutionaryRelation::new(name, w.clone()).map_err(semantic)?;
            let step = degree_descent(&relation, phi).map_err(semantic)?;
            let body = match step {
                Descent::Identical { relation, next } => ResultBody::Descent {
                    map: map.clone(),
                    status: "identical".to_string(),
                    pulled: Some(relation.pulled.to_string()),
                    witness: Some(relation.witness.to_string()),
                    next_degree: Some(next.degree()),
                    residual: None,
                },
                Descent::NotClosed { residual } => ResultBody::Descent {
                    map: map.clone(),
                    status: "not_closed".to_string(),
                    pulled: None,
                    witness: None,
                    next_degree: None,
                    residual: Some(residual.to_string()),
                },
                Descent::Undecided { pulled } => ResultBody::Descent {
                    map: map.clone(),
                    status: "undecided".to_string(),
                    pulled: Some(pulled.to_string()),
                    witness: None,
                    next_degree: None,
                    residual: None,
                },
            };
            Ok(body)
        }),
        Cmd::Jacobian { files, map } => {
            let mut entries = Vec::new();
            for path in files {
                let loaded = load(path, inputs)?;
                let maps = select_maps(&loaded, map)?;
                for (name, phi) in maps {
                    let report = jacobian_determinant(phi).map_err(semantic)?;
                    entries.push(ResultEntry {
                        target: format!("{}:{}", loaded.name, name),
                        body: ResultBody::Jacobian {
                            map: name,
                            determinant: report.determinant.to_string(),
                            identically_zero: report.identically_zero,
                            vanishing_samples: report
                                .vanishing_samples
                                .iter()
                                .map(|pt| pt.iter().map(BigRational::to_string).collect())
                                .collect(),
                        },
                    });
                }
            }
            Ok(entries)
        }
        Cmd::Poisson {
            file,
            left,
            right,
            pairs,
        } => {
            let pair_list = parse_pairs(pairs)?;
            let loaded = load(file, inputs)?;
            let f = lookup_form(&loaded, left)?.scalar_value().map_err(semantic)?;
            let g = lookup_form(&loaded, right)?
                .scalar_value()
                .map_err(semantic)?;
            let bracket = poisson_bracket(&f, &g, &pair_list).map_err(semantic)?;
            Ok(vec![ResultEntry {
                target: format!("{}:{{{}, {}}}", loaded.name, left, right),
                body: ResultBody::Poisson {
                    pairs: pair_list
                        .iter()
                        .map(|(q, p)| format!("{q}:{p}"))
                        .collect(),
                    left: f.to_string(),
                    right: g.to_string(),
                    bracket: bracket.to_string(),
                },
            }])
        }
        Cmd::Maxwell {
            files,
            form,
            metric,
        } => for_each_form(files, form, inputs, |loaded, _, w| {
            let (name, g) = match metric {
                Some(_) => resolve_metric(loaded, metric, 4)?,
                None => (
                    "minkowski".to_string(),
                    DiagonalMetric::new(vec![1, -1, -1, -1]).expect("signature is valid"),
                ),
            };
            let report = maxwell_check(w, &g).map_err(semantic)?;
            Ok(ResultBody::Maxwell {
                metric: name,
                homogeneous: report.homogeneous,
                source_free: report.source_free,
                satisfied: report.satisfied,
                faraday_residual: report.faraday_residual.to_string(),
                dual: report.dual.to_string(),
                source_residual: report.source_residual.to_string(),
            })
        }),
        Cmd::Hamilton { files, form } => {
            let mut entries = Vec::new();
            for path in files {
                let loaded = load(path, inputs)?;
                let targets: Vec<(String, &DifferentialForm)> = if form.is_empty() {
                    loaded
                        .document
                        .forms()
                        .filter(|(_, w)| w.degree() == 0)
                        .map(|(n, w)| (n.to_string(), w))
                        .collect()
                } else {
                    selected_forms(&loaded, form)?
                };
                for (name, w) in targets {
                    let h = w.scalar_value().map_err(semantic)?;
                    let pc = poincare_cartan_check(w.variables().clone(), &h)
                        .map_err(semantic)?;
                    let field = w
                        .variables()
                        .iter()
                        .map(|v| format!("{v} -> {}", pc.field.component(v)))
                        .collect();
                    entries.push(ResultEntry {
                        target: format!("{}:{}", loaded.name, name),
                        body: ResultBody::Hamilton {
                            hamiltonian: h.to_string(),
                            action_form: pc.action_form.to_string(),
                            field,
                            residual: pc.residual.to_string(),
                            invariant: pc.invariant,
                        },
                    });
                }
            }
            Ok(entries)
        }
        Cmd::Thermo {
            cv,
            gas_constant,
            exponent_bound,
        } => {
            let bound = resolve_bound(*exponent_bound)?;
            let report = thermo_demo(cv, gas_constant, bound).map_err(semantic)?;
            let (factor_status, factor) = match &report.factor {
                FactorSearch::Found(mu) => ("found", Some(mu.to_string())),
                FactorSearch::NotFoundWithinAnsatz => ("not_found_within_ansatz", None),
                FactorSearch::FrobeniusFails => ("frobenius_fails", None),
            };
            let (entropy_status, entropy) = match &report.entropy {
                Some(e) => {
                    let (status, witness) = witness_status(true, e);
                    (Some(status), witness)
                }
                None => (None, None),
            };
            Ok(vec![ResultEntry {
                target: format!("thermo(c_v={cv}, R={gas_constant})"),
                body: ResultBody::Thermo {
                    c_v: cv.to_string(),
                    gas_constant: gas_constant.to_string(),
                    heat_form: report.heat_form.to_string(),
                    closed: report.closed,
                    factor_status: factor_status.to_string(),
                    factor,
                    entropy_status,
                    entropy,
                },
            }])
        }
        Cmd::Table { space_dimension } => {
            let (policy, label) = match space_dimension {
                Some(n) => (DimensionPolicy::Fixed(*n), format!("fixed({n})")),
                None => (DimensionPolicy::MatchDegree, "match_degree".to_string()),
            };
            let table = classification_table(policy);
            let rows = table
                .rows
                .iter()
                .map(|r| TableRow {
                    p: r.evolutionary_degree,
                    k: r.closure_degree,
                    interaction: r.interaction.as_str().to_string(),
                    space_dimension: r.space_dimension,
                    pseudostructure_dimension: r.pseudostructure_dimension,
                    parameter_count: r.parameter_count,
                    structure: r.structure_label.clone(),
                })
                .collect();
            Ok(vec![ResultEntry {
                target: "table".to_string(),
                body: ResultBody::Table {
                    policy: label,
                    rows,
                    material_elements: table
                        .material_elements
                        .iter()
                        .map(|e| e.to_string())
                        .collect(),
                    metric_dimensions: table.metric_dimensions.to_vec(),
                },
            }])
        }
    }
}

fn analyze_one(
    loaded: &Loaded,
    w: &DifferentialForm,
    metric: &Option<String>,
    map: &Option<String>,
) -> Result<ResultBody, Failure> {
    let g = metric
        .as_ref()
        .map(|n| lookup_metric(&loaded.document, &loaded.name, n))
        .transpose()?;
    let report = classify_form(w, g).map_err(semantic)?;
    let commutator = if w.degree() == 1 {
        Some(w.commutator().map_err(semantic)?)
    } else {
        None
    };
    let restriction = map
        .as_ref()
        .map(|n| {
            let phi = lookup_map(&loaded.document, &loaded.name, n)?;
            let restricted = restrict_and_test(w, phi).map_err(semantic)?;
            let (classification, witness) = (
                restricted.report.classification.as_str().to_string(),
                match &restricted.report.exactness {
                    Exactness::Exact(theta) => Some(theta.to_string()),
                    _ => None,
                },
            );
            Ok(Restriction {
                map: n.clone(),
                pseudostructure_dim: restricted.pseudostructure_dim,
                pulled: restricted.pulled.to_string(),
                closed: restricted.report.closed,
                classification,
                witness,
            })
        })
        .transpose()?;
    let witness = match &report.exactness {
        Exactness::Exact(theta) => Some(theta.to_string()),
        _ => None,
    };
    Ok(ResultBody::Closure {
        degree: w.degree(),
        variables: w.variables().to_string(),
        closed: report.closed,
        differential: report.differential.to_string(),
        classification: report.classification.as_str().to_string(),
        witness,
        commutator: commutator.as_ref().map(|k| k.to_string()),
        commutator_zero: commutator.as_ref().map(|k| k.is_zero()),
        metric: metric.clone(),
        dual_closed: report.dual_closed,
        dual_residual: report.dual_residual.as_ref().map(|r| r.to_string()),
        restriction,
    })
}

struct Loaded {
    name: String,
    document: Document,
}

fn load(path: &Path, inputs: &mut Vec<InputDigest>) -> Result<Loaded, Failure> {
    let name = path.display().to_string();
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("error: cannot read {name}: {e}")))?;
    let mut hasher = Sha256::new();
    hasher.update(text.as_bytes());
    let sha256 = hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect();
    inputs.push(InputDigest {
        file: name.clone(),
        sha256,
    });
    let parsed = parse(&text).map_err(|e| {
        if e.is_syntax() {
            Failure::Syntax(format!("{name}:{e}"))
        } else {
            Failure::Semantic(format!("{name}:{e}"))
        }
    })?;
    for warning in &parsed.warnings {
        eprintln!("{name}:{warning}");
    }
    Ok(Loaded {
        name,
        document: parsed.document,
    })
}

fn for_each_form<F>(
    files: &[PathBuf],
    filter: &[String],
    inputs: &mut Vec<InputDigest>,
    mut op: F,
) -> Result<Vec<ResultEntry>, Failure>
where
    F: FnMut(&Loaded, &str, &DifferentialForm) -> Result<ResultBody, Failure>,
{
    let mut entries = Vec::new();
    for path in files {
        let loaded = load(path, inputs)?;
        for (name, form) in selected_forms(&loaded, filter)? {
            let body = op(&loaded, &name, form)?;
            entries.push(ResultEntry {
                target: format!("{}:{}", loaded.name, name),
                body,
            });
        }
    }
    Ok(entries)
}

fn selected_forms<'d>(
    loaded: &'d Loaded,
    filter: &[String],
) -> Result<Vec<(String, &'d DifferentialForm)>, Failure> {
    if filter.is_empty() {
        return Ok(loaded
            .document
            .forms()
            .map(|(n, f)| (n.to_string(), f))
            .collect());
    }
    filter
        .iter()
        .map(|n| {
            lookup_form(loaded, n).map(|f| (n.clone(), f))
        })
        .collect()
}

fn lookup_form<'d>(loaded: &'d Loaded, name: &str) -> Result<&'d DifferentialForm, Failure> {
    loaded.document.form(name).ok_or_else(|| {
        Failure::Semantic(format!(
            "error: no form named `{name}` in {}",
            loaded.name
        ))
    })
}

fn lookup_map<'d>(doc: &'d Document, file: &str, name: &str) -> Result<&'d ParamMap, Failure> {
    doc.map(name)
        .ok_or_else(|| Failure::Semantic(format!("error: no map named `{name}` in {file}")))
}

fn lookup_metric<'d>(
    doc: &'d Document,
    file: &str,
    name: &str,
) -> Result<&'d DiagonalMetric, Failure> {
    doc.metric(name)
        .ok_or_else(|| Failure::Semantic(format!("error: no metric named `{name}` in {file}")))
}

fn lookup_torsion(
    doc: &Document,
    file: &str,
    name: &str,
) -> Result<exform::evolutionary::StructureCoefficients, Failure> {
    doc.torsion(name).ok_or_else(|| {
        Failure::Semantic(format!("error: no torsion family named `{name}` in {file}"))
    })
}

fn select_maps<'d>(
    loaded: &'d Loaded,
    filter: &Option<String>,
) -> Result<Vec<(String, &'d ParamMap)>, Failure> {
    match filter {
        Some(n) => Ok(vec![(
            n.clone(),
            lookup_map(&loaded.document, &loaded.name, n)?,
        )]),
        None => Ok(loaded
            .document
            .declarations()
            .iter()
            .filter_map(|d| match d {
                Declaration::Map { name, map } => Some((name.clone(), map)),
                _ => None,
            })
            .collect()),
    }
}

fn resolve_metric(
    loaded: &Loaded,
    name: &Option<String>,
    dim: usize,
) -> Result<(String, DiagonalMetric), Failure> {
    match name {
        Some(n) => lookup_metric(&loaded.document, &loaded.name, n)
            .map(|g| (n.clone(), g.clone())),
        None => Ok(("euclidean".to_string(), DiagonalMetric::euclidean(dim))),
    }
}

fn witness_status(closed: bool, exactness: &Exactness) -> (String, Option<String>) {
    if !closed {
        return ("not_closed".to_string(), None);
    }
    match exactness {
        Exactness::Exact(theta) => ("exact".to_string(), Some(theta.to_string())),
        Exactness::Undecided => ("undecided".to_string(), None),
        Exactness::No => ("none".to_string(), None),
    }
}

fn resolve_bound(flag: Option<u32>) -> Result<u32, Failure> {
    if let Some(bound) = flag {
        return Ok(bound);
    }
    match std::env::var("EXFORM_EXPONENT_BOUND") {
        Ok(raw) => raw.trim().parse().map_err(|_| {
            Failure::Usage(format!(
                "error: EXFORM_EXPONENT_BOUND must be a nonnegative integer, got `{raw}`"
            ))
        }),
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_EXPONENT_BOUND),
        Err(e) => Err(Failure::Usage(format!("error: EXFORM_EXPONENT_BOUND: {e}"))),
    }
}

fn parse_rational(raw: &str) -> Result<BigRational, String> {
    let (num, den) = match raw.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (raw.trim(), "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| format!("`{raw}` is not a rational number like 3/2"))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| format!("`{raw}` is not a rational number like 3/2"))?;
    if den == BigInt::from(0) {
        return Err(format!("`{raw}` has a zero denominator"));
    }
    Ok(BigRational::new(num, den))
}

fn parse_pairs(raw: &str) -> Result<Vec<(String, String)>, Failure> {
    raw.split(',')
        .map(|pair| {
            let mut halves = pair.split(':');
            match (halves.next(), halves.next(), halves.next()) {
                (Some(q), Some(p), None) if !q.trim().is_empty() && !p.trim().is_empty() => {
                    Ok((q.trim().to_string(), p.trim().to_string()))
                }
                _ => Err(Failure::Usage(format!(
                    "error: --pairs expects q:p[,q:p...], got `{raw}`"
                ))),
            }
        })
        .collect()
}
