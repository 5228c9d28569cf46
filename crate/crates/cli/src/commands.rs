use std::path::Path;

use dmolab_chain::{
    bloch_dispersion, bloch_momenta, deform_chain, diagonalize_chain, level_law, periodic_chain, Boundary, ChainParams,
};
use dmolab_dmo::analytic::{block_eigenvalues, block_invariant, ShellBranch};
use dmolab_dmo::numeric::minimum_cutoff;
use dmolab_dmo::{
    analytic_spectrum, block_matrix_3d, fw_equivalence_check, fw_free_check, numeric_spectrum,
    susy_anticommutator_check, two_particle_spectrum, Dimension, DmoError, DmoParams, HalfInt, ParityClass,
};
use dmolab_extended::dynamics::time_grid;
use dmolab_extended::{dynamics_run, resonance_scan, Branch, ExtendedParams, InitialState};
use dmolab_hex::{
    build_hex_lattice, build_hex_torus, conic_analysis, deform_hex_lattice, diagonalize_hex, dirac_points,
    dispersion_surface, level_peaks, HexParams, PeakProtocol,
};
use dmolab_manybody::{cockroach_nest_count, ManyBodyParams};
use dmolab_opkit::{LatticeGeometry, SpectrumResult};

use crate::cli::{
    BoundaryArg, BranchArg, ChainArgs, ChainDiagArgs, DmoBlocksArgs, DmoFwArgs, DmoSpectrumArgs, DmoSusyArgs,
    HexArgs, HexDiagArgs, HexDispersionArgs, HexGenArgs, NestArgs, RunArgs, ScanArgs, TwoParticleArgs,
};
use crate::config::{parse_list, parse_range};
use crate::output::{Artifact, Format, Table};
use crate::CliError;

/// Largest matrix the CLI hands to a dense eigensolver.
pub const MAX_DENSE_DIM: usize = 10_000;

pub struct Context {
    pub format: Format,
    pub dry_run: bool,
}

type Output = Result<Vec<Artifact>, CliError>;

fn check_dim(what: &str, dim: usize) -> Result<(), CliError> {
    if dim > MAX_DENSE_DIM {
        return Err(CliError::TooLarge {
            what: what.to_owned(),
            size: dim,
            limit: MAX_DENSE_DIM,
        });
    }
    Ok(())
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Spinor components × Fock states with at most `cutoff` quanta.
fn dmo_dimension(dim: Dimension, cutoff: usize) -> usize {
    let spins = if dim == Dimension::Three { 4 } else { 2 };
    spins * binomial(cutoff + dim.number(), dim.number())
}

fn spectrum_table(spectrum: &SpectrumResult) -> Table {
    let mut table = Table::new(&["index", "E"]);
    for (k, e) in spectrum.eigenvalues.iter().enumerate() {
        table.push(vec![k.into(), (*e).into()]);
    }
    table
}

pub fn dmo_spectrum(ctx: &Context, p: &DmoSpectrumArgs) -> Output {
    let dim = Dimension::from_number(p.dim)?;
    let params = DmoParams::new(p.mass, p.omega, dim)?;
    let minimum = minimum_cutoff(p.buffer);
    if p.cutoff < minimum {
        return Err(DmoError::CutoffTooSmall {
            cutoff: p.cutoff,
            minimum,
        }
        .into());
    }
    check_dim("oscillator basis", dmo_dimension(dim, p.cutoff))?;
    if ctx.dry_run {
        return Ok(Vec::new());
    }
    let numeric = numeric_spectrum(&params, p.cutoff, p.buffer)?.eigenvalues;
    let levels = analytic_spectrum(&params, p.cutoff - p.buffer)
        .labels
        .expect("analytic spectra are labelled");
    let mut table = Table::new(&["E", "branch", "n", "j", "degeneracy"]);
    let mut matched = 0;
    for level in &levels {
        // the numeric value reported is the mean of the eigenvalues sharing this energy
        let near: Vec<f64> = numeric.iter().copied().filter(|e| (e - level.energy).abs() < 1e-8).collect();
        if near.is_empty() {
            return Err(CliError::Compute(format!(
                "no numeric eigenvalue near the closed-form level {}",
                level.energy
            )));
        }
        matched += level.degeneracy;
        let energy = near.iter().sum::<f64>() / near.len() as f64;
        let j = level.label.j().map_or(String::new(), |j| j.value().to_string());
        table.push(vec![
            energy.into(),
            level.label.branch_name().into(),
            level.label.n().into(),
            j.into(),
            level.degeneracy.into(),
        ]);
    }
    if matched != numeric.len() {
        return Err(CliError::Compute(format!(
            "{} numeric eigenvalues but {matched} labelled states",
            numeric.len()
        )));
    }
    Ok(vec![Artifact::table("spectrum", &table, ctx.format)])
}

pub fn dmo_blocks(ctx: &Context, p: &DmoBlocksArgs) -> Output {
    let params = DmoParams::new(p.mass, p.omega, Dimension::Three)?;
    let max_j = HalfInt::from_f64(p.max_j)
        .filter(|j| j.is_half_odd() && j.twice() >= 1)
        .ok_or_else(|| CliError::Config(format!("max_j = {} must be a positive half-odd number", p.max_j)))?;
    if ctx.dry_run {
        return Ok(Vec::new());
    }
    let mut table = Table::new(&["n", "j", "branch", "h11", "h12", "h21", "h22", "E-", "E+"]);
    for n in 0..=p.max_n {
        for twice_j in (1..=max_j.twice()).step_by(2) {
            let j = HalfInt::from_twice(twice_j);
            for (branch, name) in [(ShellBranch::Infinite, "infinite"), (ShellBranch::Finite, "finite")] {
                // finite-branch labels start at n = 1
                if branch == ShellBranch::Finite && n == 0 {
                    continue;
                }
                let block = block_matrix_3d(&params, j, block_invariant(n, j, branch), branch)?;
                let [lo, hi] = block_eigenvalues(&block);
                table.push(vec![
                    n.into(),
                    j.value().into(),
                    name.into(),
                    block[0][0].into(),
                    block[0][1].into(),
                    block[1][0].into(),
                    block[1][1].into(),
                    lo.into(),
                    hi.into(),
                ]);
            }
        }
    }
    Ok(vec![Artifact::table("blocks", &table, ctx.format)])
}

pub fn dmo_susy(ctx: &Context, p: &DmoSusyArgs) -> Output {
    check_dim("oscillator basis", dmo_dimension(Dimension::Three, p.cutoff))?;
    if ctx.dry_run {
        return Ok(Vec::new());
    }
    let report = susy_anticommutator_check(p.cutoff, p.buffer)?;
    let mut table = Table::new(&["cutoff", "buffer", "safe_residual", "full_residual"]);
    table.push(vec![
        p.cutoff.into(),
        p.buffer.into(),
        report.safe_residual.into(),
        report.full_residual.into(),
    ]);
    Ok(vec![Artifact::table("susy", &table, ctx.format)])
}

pub fn dmo_fw(ctx: &Context, p: &DmoFwArgs) -> Output {
    let params = DmoParams::new(p.mass, p.omega, Dimension::Three)?;
    check_dim("oscillator basis", dmo_dimension(Dimension::Three, p.cutoff))?;
    if p.momentum_points == 0 || !(p.momentum_max >= 0.0) {
        return Err(CliError::Config("momentum_points must be > 0 and momentum_max >= 0".into()));
    }
    if ctx.dry_run {
        return Ok(Vec::new());
    }
    let axis: Vec<f64> = match p.momentum_points {
        1 => vec![0.0],
        n => (0..n)
            .map(|k| -p.momentum_max + 2.0 * p.momentum_max * k as f64 / (n - 1) as f64)
            .collect(),
    };
    let mut momenta = Vec::new();
    for &x in &axis {
        for &y in &axis {
            for &z in &axis {
                momenta.push([x, y, z]);
            }
        }
    }
    let mut table = Table::new(&["check", "max_deviation"]);
    table.push(vec!["oscillator".into(), fw_equivalence_check(&params, p.cutoff, p.buffer)?.into()]);
    table.push(vec!["free".into(), fw_free_check(p.mass, &momenta)?.into()]);
    Ok(vec![Artifact::table("fw", &table, ctx.format)])
}

pub fn two_particle(ctx: &Context, p: &TwoParticleArgs) -> Output {
    if !(p.omega >= 0.0 && p.omega.is_finite()) {
        return Err(CliError::Config(format!("omega must be finite and >= 0, got {}", p.omega)));
    }
    if ctx.dry_run {
        return Ok(Vec::new());
    }
    let mut table = Table::new(&["N", "s", "parity", "E-", "E0", "E+"]);
    for quanta in 0..=p.max_quanta {
        for (spin, parity, name) in [
            (0, ParityClass::Natural, "natural"),
            (1, ParityClass::Natural, "natural"),
            (1, ParityClass::Unnatural, "unnatural"),
        ] {
            let [lo, zero, hi] = two_particle_spectrum(p.omega, quanta, spin, parity)?;
            table.push(vec![
                quanta.into(),
                (spin as usize).into(),
                name.into(),
                lo.into(),
                zero.into(),
                hi.into(),
            ]);
        }
    }
    Ok(vec![Artifact::table("twoparticle", &table, ctx.format)])
}

pub fn nbody_nest(ctx: &Context, p: &NestArgs) -> Output {
    let cutoffs = parse_list(&p.cutoffs)?;
    let params: Vec<ManyBodyParams> = cutoffs
        .iter()
        .map(|&c| ManyBodyParams::new(p.particles, p.mass, p.omega, c))
        .collect::<Result<_, _>>()?;
    for q in &params {
        let dim = q.dimension().unwrap_or(usize::MAX);
        if dim > dmolab_manybody::MAX_DIMENSION {
            return Err(CliError::TooLarge {
                what: "many-body basis".into(),
                size: dim,
                limit: dmolab_manybody::MAX_DIMENSION,
            });
        }
    }
    if ctx.dry_run {
        return Ok(Vec::new());
    }
    let mut table = Table::new(&["cutoff", "n_particles", "omega", "nest_count", "predicted_lower_bound"]);
    for q in &params {
        let r = cockroach_nest_count(q, p.tolerance)?;
        table.push(vec![
            r.cutoff.into(),
            r.n_particles.into(),
            r.omega.into(),
            r.nest_count.into(),
            r.predicted_lower_bound.into(),
        ]);
    }
    Ok(vec![Artifact::table("nest", &table, ctx.format)])
}

fn initial_state(n: usize, branch: BranchArg, theta: f64) -> InitialState {
    InitialState {
        n,
        branch: match branch {
            BranchArg::Positive => Branch::Positive,
            BranchArg::Negative => Branch::Negative,
        },
        theta,
    }
}

fn dynamics_checks(cutoff: usize, n: usize, horizon: f64, samples: usize) -> Result<(), CliError> {
    // isospin × *-spin × Fock states
    check_dim("dynamics basis", 4 * (cutoff + 1))?;
    if cutoff < n + 4 {
        return Err(CliError::Config(format!("cutoff {cutoff} must be at least n + 4 = {}", n + 4)));
    }
    if !(horizon >= 0.0 && horizon.is_finite()) || samples == 0 {
        return Err(CliError::Config(format!(
            "need T >= 0 and samples > 0, got {horizon} and {samples}"
        )));
    }
    Ok(())
}

pub fn dynamics_run_cmd(ctx: &Context, p: &RunArgs) -> Output {
    let params = ExtendedParams::new(p.mass, p.gamma, p.scalar, p.weighted, dmolab_extended::ExtendedDim::One)?;
    dynamics_checks(p.cutoff, p.n, p.horizon, p.samples)?;
    if ctx.dry_run {
        return Ok(Vec::new());
    }
    let initial = initial_state(p.n, p.branch, p.theta);
    let series = dynamics_run(
        &params,
        &initial,
        &time_grid(p.horizon, p.samples),
        p.cutoff,
        p.cutoff - (p.n + 4),
    )?;
    let mut table = Table::new(&["t", "purity", "entropy"]);
    for s in &series.samples {
        table.push(vec![s.t.into(), s.purity.into(), s.entropy.into()]);
    }
    Ok(vec![Artifact::table("timeseries", &table, ctx.format)])
}

pub fn dynamics_scan_cmd(ctx: &Context, p: &ScanArgs) -> Output {
    let base = ExtendedParams::new(p.mass, 0.0, p.scalar, p.weighted, dmolab_extended::ExtendedDim::One)?;
    let gammas = parse_range(&p.gamma_scan)?;
    dynamics_checks(p.cutoff, p.n, p.horizon, p.samples)?;
    if ctx.dry_run {
        return Ok(Vec::new());
    }
    let initial = initial_state(p.n, p.branch, p.theta);
    let points = resonance_scan(&base, &initial, &gammas, p.horizon, p.samples, p.cutoff)?;
    let mut table = Table::new(&["gamma", "mean_purity", "min_purity"]);
    for q in &points {
        table.push(vec![q.gamma.into(), q.mean_purity.into(), q.min_purity.into()]);
    }
    Ok(vec![Artifact::table("scan", &table, ctx.format)])
}

fn chain_params(p: &ChainArgs) -> Result<ChainParams, CliError> {
    let mut params = ChainParams::from_mass_split(p.offset, p.mass_split, p.delta, p.cells, p.omega)?;
    params.decay_length = p.decay_length;
    params.period = p.lambda;
    Ok(params.with_origin(p.origin).validated()?)
}

fn chain_geometry(p: &ChainArgs, params: &ChainParams) -> Result<LatticeGeometry, CliError> {
    if params.omega > 0.0 {
        return Ok(deform_chain(params)?);
    }
    let boundary = match p.boundary {
        BoundaryArg::Open => Boundary::Open,
        BoundaryArg::Periodic => Boundary::Periodic,
    };
    Ok(periodic_chain(params, boundary)?)
}

pub fn chain_gen(ctx: &Context, p: &ChainArgs) -> Output {
    let params = chain_params(p)?;
    let geometry = chain_geometry(p, &params)?;
    if ctx.dry_run {
        return Ok(Vec::new());
    }
    Ok(vec![Artifact::json("geometry.json", &geometry)])
}

fn load_geometry(path: &Path) -> Result<LatticeGeometry, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let geometry: LatticeGeometry = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("geometry {}: {e}", path.display())))?;
    geometry.validate().map_err(|e| CliError::Config(format!("geometry {}: {e}", path.display())))?;
    Ok(geometry)
}

pub fn chain_diag(ctx: &Context, p: &ChainDiagArgs) -> Output {
    let params = chain_params(&p.chain)?;
    if p.levels > 0 && (p.geometry.is_some() || params.omega <= 0.0) {
        return Err(CliError::Config("levels needs a generated chain with omega > 0".into()));
    }
    let geometry = match &p.geometry {
        Some(path) => load_geometry(path)?,
        None => chain_geometry(&p.chain, &params)?,
    };
    check_dim("chain", geometry.n_sites())?;
    if ctx.dry_run {
        return Ok(Vec::new());
    }
    let spectrum = diagonalize_chain(&geometry, params.alpha, params.beta, false)?;
    let mut artifacts = vec![Artifact::table("spectrum", &spectrum_table(&spectrum), ctx.format)];
    if p.levels > 0 {
        let report = level_law(&params, p.levels)?;
        let mut table = Table::new(&["n", "E", "predicted", "relative_error"]);
        for (k, (e, q)) in report.levels.iter().zip(&report.predicted).enumerate() {
            let rel = (e - q).abs() / (q - params.offset());
            table.push(vec![(k + 1).into(), (*e).into(), (*q).into(), rel.into()]);
        }
        artifacts.push(Artifact::table("levels", &table, ctx.format));
    }
    Ok(artifacts)
}

pub fn chain_dispersion(ctx: &Context, p: &ChainArgs) -> Output {
    let params = chain_params(p)?;
    if ctx.dry_run {
        return Ok(Vec::new());
    }
    let mut table = Table::new(&["k", "E+", "E-"]);
    for k in bloch_momenta(&params) {
        let (upper, lower) = bloch_dispersion(&params, k);
        table.push(vec![k.into(), upper.into(), lower.into()]);
    }
    Ok(vec![Artifact::table("dispersion", &table, ctx.format)])
}

fn hex_params(p: &HexArgs) -> Result<HexParams, CliError> {
    Ok(HexParams {
        delta: p.delta,
        delta_prime: p.delta2,
        decay_length: p.decay_length,
        period: p.lambda,
        mass_split: p.mass_split,
        offset: p.offset,
        omega: p.omega,
        radius: p.radius,
        angle_split: p.angle_split,
    }
    .validated()?)
}

/// 6R² sites for a flake of radius R.
fn check_flake(radius: usize) -> Result<(), CliError> {
    check_dim("hex flake", 6usize.saturating_mul(radius).saturating_mul(radius))
}

pub fn hex_gen(ctx: &Context, p: &HexGenArgs) -> Output {
    let params = hex_params(&p.hex)?;
    if ctx.dry_run {
        return Ok(Vec::new());
    }
    let lattice = if p.torus > 0 {
        build_hex_torus(&params, p.torus)?
    } else {
        build_hex_lattice(&params)?
    };
    Ok(vec![Artifact::json("geometry.json", &lattice.geometry)])
}

fn check_radius(params: &HexParams) -> Result<(), CliError> {
    match dmolab_hex::max_feasible_radius(params) {
        Some(max_radius) if params.radius > max_radius => Err(dmolab_hex::HexError::RadiusTooLarge {
            radius: params.radius,
            max_radius,
        }
        .into()),
        _ => Ok(()),
    }
}

pub fn hex_deform(ctx: &Context, p: &HexArgs) -> Output {
    let params = hex_params(p)?;
    check_radius(&params)?;
    if ctx.dry_run {
        return Ok(Vec::new());
    }
    Ok(vec![Artifact::json("geometry.json", &deform_hex_lattice(&params)?.geometry)])
}

pub fn hex_diag(ctx: &Context, p: &HexDiagArgs) -> Output {
    let params = hex_params(&p.hex)?;
    if p.levels && (p.geometry.is_some() || params.omega <= 0.0) {
        return Err(CliError::Config("levels needs a generated lattice with omega > 0".into()));
    }
    let lattice = match &p.geometry {
        Some(path) => {
            let geometry = load_geometry(path)?;
            check_dim("hex lattice", geometry.n_sites())?;
            if ctx.dry_run {
                return Ok(Vec::new());
            }
            let spectrum = diagonalize_hex(&geometry, params.alpha(), params.beta(), false)?;
            return Ok(vec![Artifact::table("spectrum", &spectrum_table(&spectrum), ctx.format)]);
        }
        None => {
            check_flake(params.radius)?;
            check_radius(&params)?;
            if ctx.dry_run {
                return Ok(Vec::new());
            }
            if params.omega > 0.0 {
                deform_hex_lattice(&params)?
            } else {
                build_hex_lattice(&params)?
            }
        }
    };
    let spectrum = diagonalize_hex(&lattice.geometry, params.alpha(), params.beta(), false)?;
    let mut artifacts = vec![Artifact::table("spectrum", &spectrum_table(&spectrum), ctx.format)];
    if p.levels {
        let peaks = level_peaks(&lattice, &params, &PeakProtocol::default())?;
        let mut table = Table::new(&["N", "E", "predicted", "relative_error"]);
        for (k, (e, q)) in peaks.levels.iter().zip(&peaks.predicted).enumerate() {
            let rel = (e - q).abs() / (q - params.offset);
            table.push(vec![k.into(), (*e).into(), (*q).into(), rel.into()]);
        }
        artifacts.push(Artifact::table("levels", &table, ctx.format));
    }
    Ok(artifacts)
}

pub fn hex_dispersion_cmd(ctx: &Context, p: &HexDispersionArgs) -> Output {
    let params = hex_params(&p.hex)?;
    if p.points < 2 || !(p.extent > 0.0 && p.extent.is_finite()) {
        return Err(CliError::Config("need points >= 2 and a finite extent > 0".into()));
    }
    check_dim("dispersion grid rows", p.points)?;
    if ctx.dry_run {
        return Ok(Vec::new());
    }
    let mut table = Table::new(&["kx", "ky", "E+", "E-"]);
    for s in dispersion_surface(&params, p.extent, p.points) {
        table.push(vec![s.kx.into(), s.ky.into(), s.upper.into(), s.lower.into()]);
    }
    Ok(vec![Artifact::table("dispersion", &table, ctx.format)])
}

pub fn hex_conic(ctx: &Context, p: &HexArgs) -> Output {
    let params = hex_params(p)?;
    if ctx.dry_run {
        return Ok(Vec::new());
    }
    let mut table = Table::new(&[
        "kx", "ky", "ux", "uy", "vx", "vy", "axis_min", "axis_max", "axis_ratio",
    ]);
    for k0 in dirac_points(&params)? {
        let c = conic_analysis(&params, k0);
        table.push(vec![
            k0[0].into(),
            k0[1].into(),
            c.u[0].into(),
            c.u[1].into(),
            c.v[0].into(),
            c.v[1].into(),
            c.principal_axes[0].into(),
            c.principal_axes[1].into(),
            c.axis_ratio().into(),
        ]);
    }
    Ok(vec![Artifact::table("conic", &table, ctx.format)])
}
