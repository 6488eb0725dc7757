use serde::Serialize;
use sumsetlab_core::density::{density_scan, DensityReport};
use sumsetlab_core::diophantine::{
    adversarial_thick, example_ncd_build, find_ncd_k0, observation_sequence, orbit, vandermonde_witness, Angle,
    OrbitStats, DEFAULT_SEARCH_CAP,
};
use sumsetlab_core::fs::{ap_detect, coverage_report, fs_coverage_capped, ApHit, CoverageReport};
use sumsetlab_core::hypotheses::{
    certify, geometric_floors, zannier_check, zannier_prime_witness, CertifyOptions, DEFAULT_FLOORS, DEFAULT_QMAX,
    DEFAULT_ZMAX,
};
use sumsetlab_core::sets::{enumerate, SetSpec};

use crate::args::{Command, Common, ConstructArgs, ConstructKind, DensityArgs, Format, WitnessArgs, WitnessKind};
use crate::output::{to_json, Sink};
use crate::CliError;

const DEFAULT_ALPHAS: [&str; 2] = ["sqrt:2", "golden"];
const DEFAULT_KMAX: u64 = 30;
const DEFAULT_PRIME_FLOOR: u64 = 1000;

pub fn run(cmd: &Command) -> Result<u8, CliError> {
    let c = cmd.common();
    let sink = Sink::new(cmd.name(), c.out.clone());
    match cmd {
        Command::Gen(c) => gen(c, &sink),
        Command::Fs(c) => fs(c, &sink),
        Command::Certify { common, extra } => {
            let spec = common.set_spec()?;
            let bound = common.bound()?;
            reject_format(common, &[Format::Json])?;
            let mut opts = CertifyOptions {
                qmax: common.qmax.unwrap_or(DEFAULT_QMAX),
                max_bits: common.max_bits(),
                coverage: !extra.no_coverage,
                ..CertifyOptions::default()
            };
            if let Some(s) = extra.strategy {
                opts.strategy = s.into();
            }
            if common.alpha.is_some() || common.precision.is_some() {
                opts.alphas = alphas(common)?;
            }
            let cert = certify(&spec, bound, &opts)?;
            sink.emit(to_json(&cert).as_bytes())?;
            Ok(cert.exit_code() as u8)
        }
        Command::Orbit(c) => orbits(c, &sink),
        Command::Density { common, extra } => density(common, extra, &sink),
        Command::Witness { common, extra } => witness(common, extra, &sink),
        Command::Construct { common, extra } => construct(common, extra, &sink),
    }
}

fn reject_format(c: &Common, allowed: &[Format]) -> Result<(), CliError> {
    match c.format {
        Some(f) if !allowed.contains(&f) => Err(CliError::Usage(format!("--format {f:?} is not available here").to_lowercase())),
        _ => Ok(()),
    }
}

fn alphas(c: &Common) -> Result<Vec<Angle>, CliError> {
    let precision = c.precision()?;
    let texts: Vec<String> = match &c.alpha {
        Some(v) => v.clone(),
        None => DEFAULT_ALPHAS.iter().map(|s| s.to_string()).collect(),
    };
    texts
        .iter()
        .map(|t| Angle::parse(t, precision).map_err(|e| CliError::Usage(format!("--alpha {t:?}: {e}"))))
        .collect()
}

#[derive(Serialize)]
struct GenReport<'a> {
    spec: &'a SetSpec,
    bound: u64,
    count: usize,
    elements: &'a [u64],
}

fn gen(c: &Common, sink: &Sink) -> Result<u8, CliError> {
    let spec = c.set_spec()?;
    let bound = c.bound()?;
    reject_format(c, &[Format::Json, Format::Csv])?;
    let set = enumerate(&spec, bound)?;
    let text = match c.format {
        Some(Format::Json) => to_json(&GenReport {
            spec: &spec,
            bound,
            count: set.len(),
            elements: set.elements(),
        }),
        _ => set.to_text(),
    };
    sink.emit(text.as_bytes())?;
    Ok(0)
}

#[derive(Serialize)]
struct FsReport<'a> {
    spec: &'a SetSpec,
    bound: u64,
    element_count: usize,
    fs_count: u64,
    report: CoverageReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    ap_hits: Option<Vec<ApHit>>,
}

fn fs(c: &Common, sink: &Sink) -> Result<u8, CliError> {
    let spec = c.set_spec()?;
    let bound = c.bound()?;
    let set = enumerate(&spec, bound)?;
    let cov = fs_coverage_capped(&set, bound, c.max_bits())?;
    let report = FsReport {
        spec: &spec,
        bound,
        element_count: set.len(),
        fs_count: cov.count(),
        report: coverage_report(&cov),
        ap_hits: c.qmax.map(|q| ap_detect(&cov, q)),
    };
    match c.format {
        Some(Format::Bits) => {
            let path = sink
                .out()
                .ok_or_else(|| CliError::Usage("--format bits needs --out".into()))?;
            sink.emit_file(path, &cov.to_dump_bytes())?;
            sink.stdout(to_json(&report).as_bytes())
        }
        Some(Format::Csv) => {
            let mut s = String::from("missing\n");
            let mut missing: Vec<u64> = cov.iter_missing_desc().collect();
            missing.reverse();
            for n in missing {
                s.push_str(&format!("{n}\n"));
            }
            sink.emit(s.as_bytes())
        }
        _ => sink.emit(to_json(&report).as_bytes()),
    }?;
    Ok(0)
}

#[derive(Serialize)]
struct OrbitReport<'a> {
    spec: &'a SetSpec,
    bound: u64,
    orbits: &'a [OrbitStats],
}

fn orbits(c: &Common, sink: &Sink) -> Result<u8, CliError> {
    let spec = c.set_spec()?;
    let bound = c.bound()?;
    reject_format(c, &[Format::Json, Format::Csv])?;
    let set = enumerate(&spec, bound)?;
    let stats = alphas(c)?
        .iter()
        .map(|a| orbit(&set, a))
        .collect::<Result<Vec<_>, _>>()?;
    let text = match c.format {
        Some(Format::Csv) => {
            let mut s = String::from("alpha,n,point\n");
            for o in &stats {
                for (p, (_, n)) in o.points.iter().zip(o.exact_points()) {
                    s.push_str(&format!("{},{n},{p}\n", o.alpha));
                }
            }
            s
        }
        _ => to_json(&OrbitReport {
            spec: &spec,
            bound,
            orbits: &stats,
        }),
    };
    sink.emit(text.as_bytes())?;
    Ok(0)
}

#[derive(Serialize)]
struct DensityTable<'a> {
    spec: &'a SetSpec,
    reports: &'a [DensityReport],
}

fn default_ladder(bound: u64) -> Vec<u64> {
    let mut ns: Vec<u64> = std::iter::successors(Some(10u64), |n| n.checked_mul(10))
        .take_while(|&n| n <= bound)
        .collect();
    if ns.last() != Some(&bound) {
        ns.push(bound);
    }
    ns
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn density(c: &Common, extra: &DensityArgs, sink: &Sink) -> Result<u8, CliError> {
    let spec = c.set_spec()?;
    reject_format(c, &[Format::Json, Format::Csv])?;
    let ns = match &extra.ns {
        Some(ns) if ns.contains(&0) => return Err(CliError::Usage("--ns entries must be >= 1".into())),
        Some(ns) => ns.clone(),
        None => default_ladder(c.bound()?),
    };
    let reports = density_scan(&spec, &ns, c.max_bits())?;
    let text = match c.format {
        Some(Format::Csv) => {
            let mut s = String::from("N,element_count,element_bound,fs_count,fs_fraction,exponent\n");
            for r in &reports {
                s.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    r.N,
                    r.element_count,
                    opt(r.element_bound),
                    r.fs_count,
                    r.fs_fraction,
                    opt(r.exponent)
                ));
            }
            s
        }
        _ => to_json(&DensityTable {
            spec: &spec,
            reports: &reports,
        }),
    };
    sink.emit(text.as_bytes())?;
    Ok(0)
}

fn single_poly(c: &Common) -> Result<sumsetlab_core::sets::IntPoly, CliError> {
    let mut polys = c.int_polys()?;
    if polys.len() != 1 {
        return Err(CliError::Usage("this witness takes exactly one polynomial".into()));
    }
    Ok(polys.remove(0))
}

fn witness(c: &Common, w: &WitnessArgs, sink: &Sink) -> Result<u8, CliError> {
    reject_format(c, &[Format::Json])?;
    let kind = w
        .kind
        .ok_or_else(|| CliError::Usage("missing --kind (vandermonde, zannier or prime)".into()))?;
    let text = match kind {
        WitnessKind::Vandermonde => {
            let nodes = w.nodes.as_ref().ok_or_else(|| CliError::Usage("missing --nodes".into()))?;
            to_json(&vandermonde_witness(&single_poly(c)?, nodes)?)
        }
        WitnessKind::Prime => {
            to_json(&zannier_prime_witness(&single_poly(c)?, w.floor.unwrap_or(DEFAULT_PRIME_FLOOR))?)
        }
        WitnessKind::Zannier => {
            let spec = c.set_spec()?;
            let set = enumerate(&spec, c.bound()?)?;
            let floors = w.floors.clone().unwrap_or_else(|| geometric_floors(&set, DEFAULT_FLOORS));
            let report = zannier_check(
                &set,
                w.k.unwrap_or(2),
                w.value_bound.unwrap_or(2),
                w.zmax.unwrap_or(DEFAULT_ZMAX),
                &floors,
                w.z.as_deref(),
            )?;
            to_json(&report)
        }
    };
    sink.emit(text.as_bytes())?;
    Ok(0)
}

fn first_alpha(c: &Common) -> Result<Angle, CliError> {
    let mut a = alphas(c)?;
    if c.alpha.as_ref().is_some_and(|v| v.len() != 1) {
        return Err(CliError::Usage("this construction takes exactly one --alpha".into()));
    }
    Ok(a.remove(0))
}

fn construct(c: &Common, x: &ConstructArgs, sink: &Sink) -> Result<u8, CliError> {
    reject_format(c, &[Format::Json])?;
    let kind = x
        .kind
        .ok_or_else(|| CliError::Usage("missing --kind (ncd, thick or observation)".into()))?;
    let alpha = first_alpha(c)?;
    let text = match kind {
        ConstructKind::Ncd => {
            let kmax = x.kmax.unwrap_or(DEFAULT_KMAX);
            let built = match x.k0 {
                Some(k0) => example_ncd_build(&alpha, k0, kmax)?,
                None => find_ncd_k0(&alpha, kmax)?,
            };
            to_json(&built)
        }
        ConstructKind::Thick => {
            let bases = c.bases.clone().unwrap_or_else(|| vec![2, 3]);
            to_json(&adversarial_thick(
                &bases,
                &alpha,
                x.depth.unwrap_or(2),
                x.search_cap.unwrap_or(DEFAULT_SEARCH_CAP),
            )?)
        }
        ConstructKind::Observation => {
            let m = x.m.as_ref().ok_or_else(|| CliError::Usage("missing --m".into()))?;
            let beta = match &x.beta {
                Some(t) => Some(
                    Angle::parse(t, c.precision()?).map_err(|e| CliError::Usage(format!("--beta {t:?}: {e}")))?,
                ),
                None => None,
            };
            to_json(&observation_sequence(&alpha, beta.as_ref(), m)?)
        }
    };
    sink.emit(text.as_bytes())?;
    Ok(0)
}
