//! `genfermat`: batch front end printing one JSON report per invocation.
//!
//! Exit status: 0 on success, 2 for invalid input, 3 when an enumeration
//! would exceed the budget, 4 when a mathematical precondition fails.

mod payload;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use genfermat::arrangement::{normalize, Arrangement, Normalization, StandardParameter};
use genfermat::constructions::{
    conic_curve_parameters, kummer_parameters, restrict_to_line_lenient, tangent_conic, ConicCurve,
    LineRestriction,
};
use genfermat::exactfield::{Matrix, Rational};
use genfermat::fermatgroup::{
    automorphism_order, classify_low_n, equations, fixed_locus, induced_permutation,
    is_linear_automorphism, monomial_pattern, smoothness_certificate, subgroup_acts_freely,
    AutomorphismOrder, EquationSystem, FixedLocusReport, FreenessReport, GfmType,
    LowNClassification,
};
use genfermat::invariants::{invariant_report, InvariantReport};
use genfermat::modaction::{
    are_isomorphic, canonical_representative, kernel_of_r, orbit_and_stabilizer, IsomorphismReport,
    OrbitReport, Permutation, DEFAULT_BUDGET,
};
use genfermat::{Error, Exec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use payload::{
    parse, ConicEtaRequest, FixedLocusRequest, FreeRequest, IsoRequest, KummerRequest,
    ParameterWithDegree, RestrictRequest, VerifyRequest,
};

/// Payload arguments accept inline JSON, `@file`, or `-` for stdin.
#[derive(Parser)]
#[command(
    name = "genfermat",
    version,
    about = "Exact computations with generalized Fermat manifolds"
)]
struct Cli {
    /// Maximum number of permutations or group elements to enumerate.
    #[arg(long, global = true, env = "GENFERMAT_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u128,
    /// Indent the JSON report.
    #[arg(long, global = true)]
    pretty: bool,
    /// Seed for verbs that sample random parameters.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Evaluate loops on a single thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Standard parameter of an arrangement `{"d", "points"}`.
    Normalize { payload: String },
    /// Orbit of a parameter under the permutation action.
    Orbit { payload: String },
    /// Stabilizer of a parameter and the sampled kernel of the action.
    Stabilizer { payload: String },
    /// Whether two parameters lie in one orbit: `{"a", "b", "k"?}`.
    Iso { payload: String },
    /// Least element of the orbit.
    Canon { payload: String },
    /// Defining equations: `{"parameter", "k"}`.
    Equations { payload: String },
    /// Fixed points of a group element: `{"type", "element"}`.
    FixedLocus { payload: String },
    /// Whether a subgroup acts freely: `{"type", "generators"}`.
    Free { payload: String },
    /// Order of the automorphism group: `{"parameter", "k"}`.
    AutOrder { payload: String },
    /// Whether a matrix is a linear automorphism: `{"parameter", "k", "matrix"}`.
    VerifyMatrix { payload: String },
    /// Cohomological invariants of type (d; k, n).
    Invariants {
        d: usize,
        k: u32,
        n: usize,
        /// Comma-separated plurigenus indices.
        #[arg(long, value_delimiter = ',', default_values_t = [1u32, 2, 3])]
        pluri: Vec<u32>,
    },
    /// Kummer surface parameter from six values `{"alpha"}`.
    Kummer { payload: String },
    /// Curve obtained over a line: `{"parameter", "rho"}`.
    RestrictLine { payload: String },
    /// The conic tangent to the four canonical lines.
    Conic { a: String },
    /// Curve parameter from tangency points: `{"a", "parameter"}`.
    ConicEta { payload: String },
    /// Classification for 2 <= n <= d.
    ClassifyLowN { d: usize, n: usize },
}

impl Verb {
    fn name(&self) -> &'static str {
        match self {
            Verb::Normalize { .. } => "normalize",
            Verb::Orbit { .. } => "orbit",
            Verb::Stabilizer { .. } => "stabilizer",
            Verb::Iso { .. } => "iso",
            Verb::Canon { .. } => "canon",
            Verb::Equations { .. } => "equations",
            Verb::FixedLocus { .. } => "fixed-locus",
            Verb::Free { .. } => "free",
            Verb::AutOrder { .. } => "aut-order",
            Verb::VerifyMatrix { .. } => "verify-matrix",
            Verb::Invariants { .. } => "invariants",
            Verb::Kummer { .. } => "kummer",
            Verb::RestrictLine { .. } => "restrict-line",
            Verb::Conic { .. } => "conic",
            Verb::ConicEta { .. } => "conic-eta",
            Verb::ClassifyLowN { .. } => "classify-low-n",
        }
    }
}

#[derive(Serialize)]
struct EquationsReport {
    system: EquationSystem,
    text: Vec<String>,
    smooth: bool,
}

#[derive(Serialize)]
struct StabilizerReport {
    parameter: StandardParameter,
    stabilizer: Vec<Permutation>,
    order: usize,
    /// Permutations fixing every sampled parameter of the same space.
    sampled_kernel: Vec<Permutation>,
}

#[derive(Serialize)]
struct CanonReport {
    parameter: StandardParameter,
    canonical: StandardParameter,
}

#[derive(Serialize)]
struct VerifyReport {
    is_automorphism: bool,
    monomial: bool,
    /// The permutation of branch hyperplanes, for monomial matrices.
    induced_permutation: Option<Permutation>,
}

#[derive(Serialize)]
struct ConicReport {
    a: Rational,
    coefficients: [Rational; 6],
    matrix: Matrix<Rational>,
    dual: Matrix<Rational>,
}

/// Every verb's result. Serialized directly rather than through
/// `serde_json::Value`, which cannot hold integers beyond 64 bits.
#[derive(Serialize)]
#[serde(untagged)]
enum Output {
    Normalization(Normalization),
    Orbit(OrbitReport),
    Stabilizer(StabilizerReport),
    Isomorphism(IsomorphismReport),
    Canon(CanonReport),
    Equations(EquationsReport),
    FixedLocus(FixedLocusReport),
    Freeness(FreenessReport),
    AutomorphismOrder(AutomorphismOrder),
    Verify(VerifyReport),
    Invariants(InvariantReport),
    Parameter(StandardParameter),
    Restriction(LineRestriction),
    Conic(ConicReport),
    ConicCurve(ConicCurve),
    LowN(LowNClassification),
}

#[derive(Serialize)]
struct ErrorBody {
    kind: &'static str,
    message: String,
}

#[derive(Serialize)]
struct Envelope<'a> {
    verb: &'a str,
    ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    result: Option<Output>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<ErrorBody>,
}

fn run(cli: &Cli) -> Result<Output, Error> {
    let exec = if cli.sequential {
        Exec::Sequential
    } else {
        Exec::Parallel
    };
    let budget = cli.budget;
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    match &cli.verb {
        Verb::Normalize { payload } => {
            let arr: Arrangement = parse(payload)?;
            Ok(Output::Normalization(normalize(&arr)?))
        }
        Verb::Orbit { payload } => {
            let p: StandardParameter = parse(payload)?;
            Ok(Output::Orbit(orbit_and_stabilizer(&p, budget, exec)?))
        }
        Verb::Stabilizer { payload } => {
            let p: StandardParameter = parse(payload)?;
            let report = orbit_and_stabilizer(&p, budget, exec)?;
            let sampled_kernel = kernel_of_r(p.n(), p.d(), 8, &mut rng, budget, exec)?;
            Ok(Output::Stabilizer(StabilizerReport {
                order: report.stabilizer.len(),
                stabilizer: report.stabilizer,
                parameter: p,
                sampled_kernel,
            }))
        }
        Verb::Iso { payload } => {
            let req: IsoRequest = parse(payload)?;
            Ok(Output::Isomorphism(are_isomorphic(
                &req.a, &req.b, req.k, budget, exec,
            )?))
        }
        Verb::Canon { payload } => {
            let p: StandardParameter = parse(payload)?;
            let canonical = canonical_representative(&p, budget, exec)?;
            Ok(Output::Canon(CanonReport {
                parameter: p,
                canonical,
            }))
        }
        Verb::Equations { payload } => {
            let req: ParameterWithDegree = parse(payload)?;
            let system = equations(&req.parameter, req.k)?;
            Ok(Output::Equations(EquationsReport {
                text: system.render(),
                smooth: smoothness_certificate(&system),
                system,
            }))
        }
        Verb::FixedLocus { payload } => {
            let req: FixedLocusRequest = parse(payload)?;
            Ok(Output::FixedLocus(fixed_locus(
                &req.element,
                &req.gfm_type,
            )?))
        }
        Verb::Free { payload } => {
            let req: FreeRequest = parse(payload)?;
            Ok(Output::Freeness(subgroup_acts_freely(
                &req.generators,
                &req.gfm_type,
                budget,
                exec,
            )?))
        }
        Verb::AutOrder { payload } => {
            let req: ParameterWithDegree = parse(payload)?;
            Ok(Output::AutomorphismOrder(automorphism_order(
                &req.parameter,
                req.k,
                budget,
                exec,
                &mut rng,
            )?))
        }
        Verb::VerifyMatrix { payload } => {
            let req: VerifyRequest = parse(payload)?;
            let m = req.cyclotomic_matrix()?;
            let is_automorphism = is_linear_automorphism(&m, &req.parameter, req.k)?;
            Ok(Output::Verify(VerifyReport {
                is_automorphism,
                monomial: monomial_pattern(&m).is_some(),
                induced_permutation: induced_permutation(&m),
            }))
        }
        Verb::Invariants { d, k, n, pluri } => {
            let t = GfmType::new(*d, *k, *n)?;
            Ok(Output::Invariants(invariant_report(&t, pluri, exec)?))
        }
        Verb::Kummer { payload } => {
            let req: KummerRequest = parse(payload)?;
            Ok(Output::Parameter(kummer_parameters(&req.alpha)?))
        }
        Verb::RestrictLine { payload } => {
            let req: RestrictRequest = parse(payload)?;
            Ok(Output::Restriction(restrict_to_line_lenient(
                &req.parameter,
                &req.rho,
            )?))
        }
        Verb::Conic { a } => {
            let a: Rational = a
                .parse()
                .map_err(|_| Error::InvalidInput(format!("not a rational number: {a}")))?;
            let q = tangent_conic(&a)?;
            Ok(Output::Conic(ConicReport {
                a,
                matrix: q.matrix(),
                dual: q.adjugate(),
                coefficients: q.coefficients,
            }))
        }
        Verb::ConicEta { payload } => {
            let req: ConicEtaRequest = parse(payload)?;
            Ok(Output::ConicCurve(conic_curve_parameters(
                &req.a,
                &req.parameter,
            )?))
        }
        Verb::ClassifyLowN { d, n } => Ok(Output::LowN(classify_low_n(*d, *n)?)),
    }
}

fn failure(e: &Error) -> (&'static str, u8) {
    match e {
        Error::BudgetExceeded { .. } => ("budget", 3),
        Error::Precondition(_) => ("precondition", 4),
        Error::InvalidInput(_)
        | Error::NotGeneralPosition
        | Error::NotStandardParameter(_)
        | Error::Singular => ("validation", 2),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let verb = cli.verb.name();
    let (envelope, code) = match run(&cli) {
        Ok(result) => (
            Envelope {
                verb,
                ok: true,
                result: Some(result),
                error: None,
            },
            0,
        ),
        Err(e) => {
            let (kind, code) = failure(&e);
            let error = ErrorBody {
                kind,
                message: e.to_string(),
            };
            (
                Envelope {
                    verb,
                    ok: false,
                    result: None,
                    error: Some(error),
                },
                code,
            )
        }
    };
    let text = if cli.pretty {
        serde_json::to_string_pretty(&envelope)
    } else {
        serde_json::to_string(&envelope)
    }
    .expect("reports serialize");
    println!("{text}");
    ExitCode::from(code)
}
