//! Finite-dimensional density-matrix dynamics: the reversible von
//! Neumann group against the irreversible Kossakowski-Lindblad
//! semigroup.
//!
//! A generator combines a Hermitian Hamiltonian with jump operators in
//! GKSL form,
//!
//! ```text
//! L rho = -i [H, rho] + sum_k ( L_k rho L_k' - 1/2 {L_k' L_k, rho} ),
//! ```
//!
//! and evolution is the exact superoperator exponential `e^{Lt}` on the
//! `n^2`-dimensional column-stacked state (scaling-and-squaring, `n`
//! capped at 16).  With jumps present the exponential is a one-parameter
//! *semigroup*: `t < 0` is rejected with `semigroup-domain` and
//! composition holds forward in time.  Without jumps the same machinery
//! is the unitary *group* `rho -> U rho U'` — defined for every real
//! `t`, spectrum- and purity-preserving — which is the
//! irreversible-vs-reversible contrast the module exists to exhibit.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::error::{Result, ToolkitError};

/// Largest supported Hilbert-space dimension: the superoperator has
/// `dim^4` entries, and 16 keeps the exponential desk-scale.
pub const MAX_DIMENSION: usize = 16;

/// Hermiticity and unit-trace tolerance for validated states.
const STATE_TOL: f64 = 1e-12;

/// Eigenvalue floor: round-off below zero is tolerated to this depth,
/// anything more negative is a genuine positivity violation.
const EIGEN_FLOOR: f64 = -1e-10;

type CMatrix = DMatrix<Complex64>;

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn hermiticity_defect(m: &CMatrix) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

fn check_finite(m: &CMatrix, what: &str) -> Result<()> {
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(
            ToolkitError::invalid_model("matrix entries must be finite").with("matrix", what)
        );
    }
    Ok(())
}

/// A validated quantum state: Hermitian, unit trace, positive
/// semidefinite up to the numerical floor.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    entries: CMatrix,
}

impl DensityMatrix {
    /// Validates and wraps a density matrix.
    pub fn new(entries: CMatrix) -> Result<Self> {
        if entries.nrows() == 0 || entries.nrows() != entries.ncols() {
            return Err(
                ToolkitError::invalid_model("density matrix must be square and non-empty")
                    .with("rows", entries.nrows())
                    .with("cols", entries.ncols()),
            );
        }
        check_finite(&entries, "density matrix")?;
        let defect = hermiticity_defect(&entries);
        if defect > STATE_TOL {
            return Err(
                ToolkitError::invariant_violation("density matrix must be Hermitian")
                    .with("defect", defect),
            );
        }
        let trace = entries.trace();
        if (trace - Complex64::new(1.0, 0.0)).norm() > STATE_TOL {
            return Err(
                ToolkitError::invariant_violation("density matrix must have unit trace")
                    .with("trace_re", trace.re)
                    .with("trace_im", trace.im),
            );
        }
        let min = min_symmetric_eigenvalue(&entries);
        if min < EIGEN_FLOOR {
            return Err(ToolkitError::invariant_violation(
                "density matrix must be positive semidefinite",
            )
            .with("min_eigenvalue", min));
        }
        Ok(DensityMatrix { entries })
    }

    /// The pure state `|psi><psi| / <psi|psi>`.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        if psi.is_empty() {
            return Err(ToolkitError::invalid_model(
                "state vector must be non-empty",
            ));
        }
        let norm_sq: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if !norm_sq.is_finite() || norm_sq <= 0.0 {
            return Err(
                ToolkitError::invalid_model("state vector must be normalizable")
                    .with("norm_sq", norm_sq),
            );
        }
        let n = psi.len();
        let entries = CMatrix::from_fn(n, n, |i, j| psi[i] * psi[j].conj() / norm_sq);
        DensityMatrix::new(entries)
    }

    /// The maximally mixed state `I / n`.
    pub fn maximally_mixed(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(ToolkitError::invalid_model("dimension must be positive"));
        }
        let entries = CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(1.0 / n as f64, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        DensityMatrix::new(entries)
    }

    /// Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// The matrix entries.
    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    /// `tr(rho^2)`: 1 for pure states, `1/n` at maximal mixing.
    pub fn purity(&self) -> f64 {
        (&self.entries * &self.entries).trace().re
    }

    /// Smallest eigenvalue (non-negative up to the numerical floor).
    pub fn min_eigenvalue(&self) -> f64 {
        min_symmetric_eigenvalue(&self.entries)
    }

    /// Real eigenvalues in ascending order.
    pub fn spectrum(&self) -> Vec<f64> {
        let mut eigs: Vec<f64> = self
            .entries
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .collect();
        eigs.sort_by(|a, b| a.total_cmp(b));
        eigs
    }
}

fn min_symmetric_eigenvalue(m: &CMatrix) -> f64 {
    // Symmetrize first so the eigensolver sees an exactly Hermitian
    // input even when the matrix carries round-off.
    let herm = (m + m.adjoint()).scale(0.5);
    herm.symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// A GKSL generator: Hermitian Hamiltonian plus jump operators with
/// their rates folded in (`L_k = sqrt(rate_k) * matrix_k`).
#[derive(Debug, Clone)]
pub struct LiouvillianGenerator {
    h: CMatrix,
    jumps: Vec<CMatrix>,
}

impl LiouvillianGenerator {
    /// Validates and wraps a generator: `h` square, Hermitian, of
    /// dimension at most [`MAX_DIMENSION`]; jumps of matching dimension.
    pub fn new(h: CMatrix, jumps: Vec<CMatrix>) -> Result<Self> {
        let n = h.nrows();
        if n == 0 || n != h.ncols() {
            return Err(
                ToolkitError::invalid_model("Hamiltonian must be square and non-empty")
                    .with("rows", h.nrows())
                    .with("cols", h.ncols()),
            );
        }
        if n > MAX_DIMENSION {
            return Err(ToolkitError::invalid_model(
                "dimension exceeds the supported superoperator size",
            )
            .with("dim", n)
            .with("max", MAX_DIMENSION));
        }
        check_finite(&h, "hamiltonian")?;
        let defect = hermiticity_defect(&h);
        if defect > STATE_TOL {
            return Err(
                ToolkitError::invalid_model("Hamiltonian must be Hermitian").with("defect", defect)
            );
        }
        for (k, l) in jumps.iter().enumerate() {
            if l.nrows() != n || l.ncols() != n {
                return Err(ToolkitError::invalid_model(
                    "jump operators must match the Hamiltonian dimension",
                )
                .with("jump", k)
                .with("rows", l.nrows()));
            }
            check_finite(l, "jump operator")?;
        }
        Ok(LiouvillianGenerator { h, jumps })
    }

    /// Parses the generator JSON schema
    /// `{"dim", "h": [[[re, im], ...]], "jumps": [{"matrix", "rate"}]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: GeneratorSpec = serde_json::from_str(text).map_err(|e| {
            ToolkitError::invalid_model("malformed generator JSON").with("cause", e)
        })?;
        let h = parse_matrix(&spec.h, spec.dim, "h")?;
        let mut jumps = Vec::with_capacity(spec.jumps.len());
        for (k, jump) in spec.jumps.iter().enumerate() {
            if !jump.rate.is_finite() || jump.rate < 0.0 {
                return Err(ToolkitError::invalid_model(
                    "jump rates must be non-negative and finite",
                )
                .with("jump", k)
                .with("rate", jump.rate));
            }
            let m = parse_matrix(&jump.matrix, spec.dim, "jump matrix")?;
            jumps.push(m.scale(jump.rate.sqrt()));
        }
        LiouvillianGenerator::new(h, jumps)
    }

    /// Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.h.nrows()
    }

    /// The Hamiltonian.
    pub fn hamiltonian(&self) -> &CMatrix {
        &self.h
    }

    /// The jump operators (rates folded in).
    pub fn jumps(&self) -> &[CMatrix] {
        &self.jumps
    }

    /// Whether the generator is purely Hamiltonian.
    pub fn is_unitary(&self) -> bool {
        self.jumps.is_empty()
    }
}

/// The two-level amplitude-damping model: zero Hamiltonian and the
/// single jump `sqrt(rate) |ground><excited|` (basis index 0 = ground,
/// 1 = excited).  Closed form: the excited population decays as
/// `e^{-rate t}` and coherences as `e^{-rate t / 2}`.
///
/// The channel is not unital: from a coherent pure state the purity
/// first drops, reaches its minimum when the surviving excited
/// population equals 1/2, and then climbs back toward 1 as the state
/// settles into the pure ground state.
pub fn amplitude_damping(rate: f64) -> Result<LiouvillianGenerator> {
    if !rate.is_finite() || rate <= 0.0 {
        return Err(
            ToolkitError::invalid_model("damping rate must be positive and finite")
                .with("rate", rate),
        );
    }
    let h = CMatrix::zeros(2, 2);
    let mut l = CMatrix::zeros(2, 2);
    l[(0, 1)] = Complex64::new(rate.sqrt(), 0.0);
    LiouvillianGenerator::new(h, vec![l])
}

/// The two-level phase-damping model: zero Hamiltonian and the single
/// jump `sqrt(rate) sigma_z`.  Populations are untouched while
/// coherences decay as `e^{-2 rate t}`.  The channel is unital, so the
/// purity of every state is non-increasing for all forward times.
pub fn phase_damping(rate: f64) -> Result<LiouvillianGenerator> {
    if !rate.is_finite() || rate <= 0.0 {
        return Err(
            ToolkitError::invalid_model("damping rate must be positive and finite")
                .with("rate", rate),
        );
    }
    let h = CMatrix::zeros(2, 2);
    let mut l = CMatrix::zeros(2, 2);
    l[(0, 0)] = Complex64::new(rate.sqrt(), 0.0);
    l[(1, 1)] = Complex64::new(-rate.sqrt(), 0.0);
    LiouvillianGenerator::new(h, vec![l])
}

#[derive(Deserialize)]
struct GeneratorSpec {
    dim: usize,
    h: Vec<Vec<[f64; 2]>>,
    #[serde(default)]
    jumps: Vec<JumpSpec>,
}

#[derive(Deserialize)]
struct JumpSpec {
    matrix: Vec<Vec<[f64; 2]>>,
    rate: f64,
}

fn parse_matrix(rows: &[Vec<[f64; 2]>], dim: usize, what: &str) -> Result<CMatrix> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(
            ToolkitError::invalid_model("matrix shape must match the declared dimension")
                .with("matrix", what)
                .with("dim", dim),
        );
    }
    Ok(CMatrix::from_fn(dim, dim, |i, j| {
        Complex64::new(rows[i][j][0], rows[i][j][1])
    }))
}

/// Applies the generator once:
/// `-i [H, rho] + sum_k ( L_k rho L_k' - 1/2 {L_k' L_k, rho} )`.
/// The output is trace-free and Hermitian (within round-off).
pub fn liouvillian_apply(g: &LiouvillianGenerator, rho: &DensityMatrix) -> Result<CMatrix> {
    if g.dim() != rho.dim() {
        return Err(
            ToolkitError::invalid_model("generator and state dimensions must match")
                .with("generator", g.dim())
                .with("state", rho.dim()),
        );
    }
    let r = rho.entries();
    let commutator = &g.h * r - r * &g.h;
    let mut out = commutator.scale(1.0) * Complex64::new(0.0, -1.0);
    for l in &g.jumps {
        let l_dag = l.adjoint();
        let ll = &l_dag * l;
        out += l * r * l_dag - (&ll * r + r * ll).scale(0.5);
    }
    Ok(out)
}

/// The `n^2 x n^2` superoperator of the generator acting on
/// column-stacked matrices.
fn superoperator(g: &LiouvillianGenerator) -> CMatrix {
    let n = g.dim();
    let eye = CMatrix::identity(n, n);
    // Column-major stacking: vec(A X B) = (B^T kron A) vec(X).
    let mut m = (eye.kronecker(&g.h) - g.h.transpose().kronecker(&eye)) * Complex64::new(0.0, -1.0);
    for l in &g.jumps {
        let l_dag = l.adjoint();
        let ll = &l_dag * l;
        m += l.map(|z| z.conj()).kronecker(l)
            - (eye.kronecker(&ll) + ll.transpose().kronecker(&eye)).scale(0.5);
    }
    m
}

/// Evolves a state with the full generator: `rho(t) = e^{Lt} rho(0)` by
/// the exact superoperator exponential.
///
/// With jumps present the evolution is a forward semigroup and `t < 0`
/// is rejected with `semigroup-domain`; a purely Hamiltonian generator
/// evolves for every real `t` (it is a group).
pub fn lindblad_evolve(
    g: &LiouvillianGenerator,
    rho0: &DensityMatrix,
    t: f64,
) -> Result<DensityMatrix> {
    if !t.is_finite() {
        return Err(ToolkitError::invalid_model("evolution time must be finite").with("t", t));
    }
    if t < 0.0 && !g.is_unitary() {
        return Err(ToolkitError::semigroup_domain(
            "dissipative evolution is defined forward in time only",
        )
        .with("t", t));
    }
    if g.dim() != rho0.dim() {
        return Err(
            ToolkitError::invalid_model("generator and state dimensions must match")
                .with("generator", g.dim())
                .with("state", rho0.dim()),
        );
    }
    let n = g.dim();
    let propagator = (superoperator(g) * Complex64::new(t, 0.0)).exp();
    if propagator
        .iter()
        .any(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        return Err(
            ToolkitError::non_convergence("superoperator exponential overflowed").with("t", t),
        );
    }
    let vec0 = DVector::from_column_slice(rho0.entries().as_slice());
    let vec_t = propagator * vec0;
    let entries = CMatrix::from_column_slice(n, n, vec_t.as_slice());
    DensityMatrix::new(entries)
}

/// Unitary von Neumann evolution `rho(t) = e^{-iHt} rho(0) e^{iHt}` by
/// eigendecomposition of the Hamiltonian.  A group evolution: every real
/// `t` is allowed, and the spectrum of the state is preserved.
pub fn von_neumann_evolve(h: &CMatrix, rho0: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
    if !t.is_finite() {
        return Err(ToolkitError::invalid_model("evolution time must be finite").with("t", t));
    }
    if h.nrows() != h.ncols() || h.nrows() != rho0.dim() {
        return Err(
            ToolkitError::invalid_model("Hamiltonian shape must match the state")
                .with("rows", h.nrows())
                .with("state", rho0.dim()),
        );
    }
    check_finite(h, "hamiltonian")?;
    let defect = hermiticity_defect(h);
    if defect > STATE_TOL {
        return Err(
            ToolkitError::invalid_model("Hamiltonian must be Hermitian").with("defect", defect)
        );
    }
    let eigen = h.clone().symmetric_eigen();
    let n = h.nrows();
    let phases = CMatrix::from_fn(n, n, |i, j| {
        if i == j {
            (Complex64::new(0.0, -t) * eigen.eigenvalues[i]).exp()
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let u = &eigen.eigenvectors * phases * eigen.eigenvectors.adjoint();
    let entries = &u * rho0.entries() * u.adjoint();
    DensityMatrix::new(entries)
}

/// Max-norm deviation between stepping `t1` then `t2` and evolving
/// directly by `t1 + t2`: the semigroup law measured numerically.
pub fn semigroup_compose_check(
    g: &LiouvillianGenerator,
    rho0: &DensityMatrix,
    t1: f64,
    t2: f64,
) -> Result<f64> {
    let stepped = lindblad_evolve(&g.clone(), &lindblad_evolve(g, rho0, t1)?, t2)?;
    let direct = lindblad_evolve(g, rho0, t1 + t2)?;
    Ok(max_abs(&(stepped.entries() - direct.entries())))
}

/// A reproducible random generator-and-state pair for the given
/// dimension: a random Hermitian Hamiltonian, one random jump operator,
/// and a full-rank random state, all drawn from a counter-based stream
/// seeded with `seed`.
pub fn seeded_generator(dim: usize, seed: u64) -> Result<(LiouvillianGenerator, DensityMatrix)> {
    if dim == 0 || dim > MAX_DIMENSION {
        return Err(ToolkitError::invalid_model(
            "dimension must be between 1 and the supported maximum",
        )
        .with("dim", dim)
        .with("max", MAX_DIMENSION));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = move || Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));

    let a = CMatrix::from_fn(dim, dim, |_, _| draw());
    let h = (&a + a.adjoint()).scale(0.5);
    let l = CMatrix::from_fn(dim, dim, |_, _| draw()).scale(1.0 / (dim as f64).sqrt());
    let generator = LiouvillianGenerator::new(h, vec![l])?;

    let gmat = CMatrix::from_fn(dim, dim, |_, _| draw());
    let positive = &gmat * gmat.adjoint();
    let trace = positive.trace().re;
    let rho = DensityMatrix::new(positive.map(|z| z / trace))?;
    Ok((generator, rho))
}
