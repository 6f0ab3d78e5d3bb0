//! The analysis report: one schema for every subcommand, emitted as json
//! or rendered as text. Forms, scalars, and commutators are embedded as
//! strings in the DSL's canonical syntax, so any form in a report can be
//! pasted back into a `.form` file. Field names are stable and booleans
//! are json booleans.

use serde::Serialize;

#[derive(Serialize)]
pub struct AnalysisReport {
    pub tool_version: &'static str,
    pub command: String,
    pub inputs: Vec<InputDigest>,
    pub results: Vec<ResultEntry>,
    pub timing_ms: u128,
}

#[derive(Serialize)]
pub struct InputDigest {
    pub file: String,
    pub sha256: String,
}

#[derive(Serialize)]
pub struct ResultEntry {
    /// What was analyzed, as `file:name` for declarations or a bare label
    /// for file-free subcommands.
    pub target: String,
    #[serde(flatten)]
    pub body: ResultBody,
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ResultBody {
    Closure {
        degree: usize,
        variables: String,
        closed: bool,
        differential: String,
        classification: String,
        witness: Option<String>,
        commutator: Option<String>,
        commutator_zero: Option<bool>,
        metric: Option<String>,
        dual_closed: Option<bool>,
        dual_residual: Option<String>,
        restriction: Option<Restriction>,
    },
    Derivative {
        degree: usize,
        derivative: String,
        zero: bool,
    },
    Wedge {
        left: String,
        right: String,
        degree: usize,
        product: String,
    },
    Star {
        metric: String,
        degree: usize,
        dual: String,
    },
    Codifferential {
        metric: String,
        codifferential: String,
    },
    Laplace {
        metric: String,
        laplace: String,
        /// The same operator under the opposite sign convention, dd - dd
        /// with the factors swapped; reported alongside for comparison.
        alternate: String,
    },
    Commutator {
        commutator: String,
        zero: bool,
    },
    Pullback {
        map: String,
        pseudostructure_dim: usize,
        pullback: String,
    },
    Witness {
        closed: bool,
        status: String,
        witness: Option<String>,
    },
    Evolve {
        torsion: String,
        differential: String,
        reduces_to_d: bool,
    },
    Relation {
        psi: String,
        torsion: Option<String>,
        identical: bool,
        internal_force: String,
        commutator: Option<String>,
    },
    Factor {
        exponent_bound: u32,
        status: String,
        factor: Option<String>,
    },
    Descent {
        map: String,
        status: String,
        pulled: Option<String>,
        witness: Option<String>,
        next_degree: Option<usize>,
        residual: Option<String>,
    },
    Jacobian {
        map: String,
        determinant: String,
        identically_zero: bool,
        vanishing_samples: Vec<Vec<String>>,
    },
    Poisson {
        pairs: Vec<String>,
        left: String,
        right: String,
        bracket: String,
    },
    Maxwell {
        metric: String,
        homogeneous: bool,
        source_free: bool,
        satisfied: bool,
        faraday_residual: String,
        dual: String,
        source_residual: String,
    },
    Hamilton {
        hamiltonian: String,
        action_form: String,
        field: Vec<String>,
        residual: String,
        invariant: bool,
    },
    Thermo {
        c_v: String,
        gas_constant: String,
        heat_form: String,
        closed: bool,
        factor_status: String,
        factor: Option<String>,
        entropy_status: Option<String>,
        entropy: Option<String>,
    },
    #[serde(rename = "classification_table")]
    Table {
        policy: String,
        rows: Vec<TableRow>,
        material_elements: Vec<String>,
        metric_dimensions: Vec<usize>,
    },
}

#[derive(Serialize)]
pub struct Restriction {
    pub map: String,
    pub pseudostructure_dim: usize,
    pub pulled: String,
    pub closed: bool,
    pub classification: String,
    pub witness: Option<String>,
}

#[derive(Serialize)]
pub struct TableRow {
    pub p: usize,
    pub k: usize,
    pub interaction: String,
    pub space_dimension: usize,
    pub pseudostructure_dimension: usize,
    pub parameter_count: usize,
    pub structure: Option<String>,
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut push = |line: &str| {
            out.push_str(line.trim_end());
            out.push('\n');
        };
        push(&format!("exform {}", self.tool_version));
        push(&format!("command: {}", self.command));
        for input in &self.inputs {
            push(&format!("input: {} sha256={}", input.file, input.sha256));
        }
        for entry in &self.results {
            push("");
            push(&format!("{}", entry.target));
            for line in body_lines(&entry.body) {
                push(&format!("  {line}"));
            }
        }
        push("");
        push(&format!("timing: {} ms", self.timing_ms));
        out
    }
}

fn opt(value: &Option<String>) -> &str {
    value.as_deref().unwrap_or("-")
}

fn body_lines(body: &ResultBody) -> Vec<String> {
    match body {
        ResultBody::Closure {
            degree,
            variables,
            closed,
            differential,
            classification,
            witness,
            commutator,
            commutator_zero,
            metric,
            dual_closed,
            dual_residual,
            restriction,
        } => {
            let mut lines = vec![
                format!("degree: {degree}"),
                format!("variables: {variables}"),
                format!("closed: {closed}"),
                format!("differential: {differential}"),
                format!("classification: {classification}"),
                format!("witness: {}", opt(witness)),
            ];
            if let Some(k) = commutator {
                lines.push(format!("commutator: {k}"));
                lines.push(format!(
                    "commutator zero: {}",
                    commutator_zero.unwrap_or_default()
                ));
            }
            if let Some(g) = metric {
                lines.push(format!("metric: {g}"));
                lines.push(format!("dual closed: {}", dual_closed.unwrap_or_default()));
                lines.push(format!("dual residual: {}", opt(dual_residual)));
            }
            if let Some(r) = restriction {
                lines.push(format!(
                    "restriction through {}: {} (dim {})",
                    r.map, r.pulled, r.pseudostructure_dim
                ));
                lines.push(format!(
                    "restriction classification: {} (witness: {})",
                    r.classification,
                    opt(&r.witness)
                ));
            }
            lines
        }
        ResultBody::Derivative {
            degree,
            derivative,
            zero,
        } => vec![
            format!("degree: {degree}"),
            format!("derivative: {derivative}"),
            format!("zero: {zero}"),
        ],
        ResultBody::Wedge {
            left,
            right,
            degree,
            product,
        } => vec![
            format!("left: {left}"),
            format!("right: {right}"),
            format!("degree: {degree}"),
            format!("product: {product}"),
        ],
        ResultBody::Star {
            metric,
            degree,
            dual,
        } => vec![
            format!("metric: {metric}"),
            format!("degree: {degree}"),
            format!("dual: {dual}"),
        ],
        ResultBody::Codifferential {
            metric,
            codifferential,
        } => vec![
            format!("metric: {metric}"),
            format!("codifferential: {codifferential}"),
        ],
        ResultBody::Laplace {
            metric,
            laplace,
            alternate,
        } => vec![
            format!("metric: {metric}"),
            format!("laplace: {laplace}"),
            format!("alternate convention: {alternate}"),
        ],
        ResultBody::Commutator { commutator, zero } => vec![
            format!("commutator: {commutator}"),
            format!("zero: {zero}"),
        ],
        ResultBody::Pullback {
            map,
            pseudostructure_dim,
            pullback,
        } => vec![
            format!("map: {map}"),
            format!("pseudostructure dimension: {pseudostructure_dim}"),
            format!("pullback: {pullback}"),
        ],
        ResultBody::Witness {
            closed,
            status,
            witness,
        } => vec![
            format!("closed: {closed}"),
            format!("status: {status}"),
            format!("witness: {}", opt(witness)),
        ],
        ResultBody::Evolve {
            torsion,
            differential,
            reduces_to_d,
        } => vec![
            format!("torsion: {torsion}"),
            format!("evolutionary differential: {differential}"),
            format!("reduces to d: {reduces_to_d}"),
        ],
        ResultBody::Relation {
            psi,
            torsion,
            identical,
            internal_force,
            commutator,
        } => {
            let mut lines = vec![
                format!("potential: {psi}"),
                format!("torsion: {}", torsion.as_deref().unwrap_or("none")),
                format!("identical: {identical}"),
                format!("internal force: {internal_force}"),
            ];
            if let Some(k) = commutator {
                lines.push(format!("commutator: {k}"));
            }
            lines
        }
        ResultBody::Factor {
            exponent_bound,
            status,
            factor,
        } => vec![
            format!("exponent bound: {exponent_bound}"),
            format!("status: {status}"),
            format!("factor: {}", opt(factor)),
        ],
        ResultBody::Descent {
            map,
            status,
            pulled,
            witness,
            next_degree,
            residual,
        } => {
            let mut lines = vec![format!("map: {map}"), format!("status: {status}")];
            if let Some(p) = pulled {
                lines.push(format!("pulled: {p}"));
            }
            if let Some(w) = witness {
                lines.push(format!("witness: {w}"));
            }
            if let Some(d) = next_degree {
                lines.push(format!("next degree: {d}"));
            }
            if let Some(r) = residual {
                lines.push(format!("residual: {r}"));
            }
            lines
        }
        ResultBody::Jacobian {
            map,
            determinant,
            identically_zero,
            vanishing_samples,
        } => {
            let mut lines = vec![
                format!("map: {map}"),
                format!("determinant: {determinant}"),
                format!("identically zero: {identically_zero}"),
            ];
            if vanishing_samples.is_empty() {
                lines.push("vanishing samples: none".to_string());
            } else {
                let points: Vec<String> = vanishing_samples
                    .iter()
                    .map(|pt| format!("({})", pt.join(", ")))
                    .collect();
                lines.push(format!("vanishing samples: {}", points.join(" ")));
            }
            lines
        }
        ResultBody::Poisson {
            pairs,
            left,
            right,
            bracket,
        } => vec![
            format!("pairs: {}", pairs.join(", ")),
            format!("left: {left}"),
            format!("right: {right}"),
            format!("bracket: {bracket}"),
        ],
        ResultBody::Maxwell {
            metric,
            homogeneous,
            source_free,
            satisfied,
            faraday_residual,
            dual,
            source_residual,
        } => vec![
            format!("metric: {metric}"),
            format!("dF: {faraday_residual}"),
            format!("homogeneous (dF = 0): {homogeneous}"),
            format!("*F: {dual}"),
            format!("d*F: {source_residual}"),
            format!("source free (d*F = 0): {source_free}"),
            format!("maxwell satisfied: {satisfied}"),
        ],
        ResultBody::Hamilton {
            hamiltonian,
            action_form,
            field,
            residual,
            invariant,
        } => vec![
            format!("hamiltonian: {hamiltonian}"),
            format!("action form: {action_form}"),
            format!("field: {}", field.join(", ")),
            format!("residual: {residual}"),
            format!("invariant: {invariant}"),
        ],
        ResultBody::Thermo {
            c_v,
            gas_constant,
            heat_form,
            closed,
            factor_status,
            factor,
            entropy_status,
            entropy,
        } => vec![
            format!("c_v: {c_v}"),
            format!("R: {gas_constant}"),
            format!("heat form: {heat_form}"),
            format!("closed: {closed}"),
            format!("factor status: {factor_status}"),
            format!("factor: {}", opt(factor)),
            format!("entropy status: {}", entropy_status.as_deref().unwrap_or("-")),
            format!("entropy: {}", opt(entropy)),
        ],
        ResultBody::Table {
            policy,
            rows: _,
            material_elements,
            metric_dimensions,
        } => table_lines(body, policy, material_elements, metric_dimensions),
    }
}

const CELL: usize = 16;

fn table_lines(
    body: &ResultBody,
    policy: &str,
    material_elements: &[String],
    metric_dimensions: &[usize],
) -> Vec<String> {
    let ResultBody::Table { rows, .. } = body else {
        unreachable!("only called on table bodies");
    };
    let mut lines = vec![
        format!("policy: {policy}"),
        "rows: p (evolutionary degree); columns: k (closure degree)".to_string(),
    ];
    let interactions = ["strong", "weak", "electromagnetic", "gravitational"];
    lines.push(grid_line("interaction:", interactions.iter().copied()));
    for p in 0..4 {
        let cells: Vec<String> = (0..4)
            .map(|k| {
                rows.iter()
                    .find(|r| r.p == p && r.k == k)
                    .map(|r| r.structure.clone().unwrap_or_else(|| "-".to_string()))
                    .unwrap_or_else(|| ".".to_string())
            })
            .collect();
        lines.push(grid_line(
            &format!("p={p}"),
            cells.iter().map(String::as_str),
        ));
    }
    lines.push(grid_line(
        "element:",
        material_elements.iter().map(String::as_str),
    ));
    let dims: Vec<String> = metric_dimensions.iter().map(usize::to_string).collect();
    lines.push(grid_line("N:", dims.iter().map(String::as_str)));
    lines
}

fn grid_line<'c>(label: &str, cells: impl Iterator<Item = &'c str>) -> String {
    let mut line = format!("{label:CELL$}");
    for cell in cells {
        line.push_str(&format!("{cell:CELL$}"));
    }
    line.trim_end().to_string()
}
