"""Positivity preservers: construction from measure families, sampling checks, moment-side checks."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Any, Literal, Mapping, Sequence

import numpy as np

from .algebra import (
    Backend,
    ComplexVector,
    HermMatrix,
    MultiIndex,
    eig_min,
    grlex_key,
    monomials,
    psd_check_exact,
    psd_check_many,
    to_scalar,
)
from .algebra.herm import ComplexArray, cadjoint, cmatmul
from .algebra.sampling import make_rng, random_complex_matrix
from .algebra.scalars import format_number
from .config import settings
from .errors import DegreeOverflowError, OrderError, RegionError
from .linop import (
    CanonicalRep,
    PolyOperator,
    apply_operator,
    canonical_from_constants,
    extract_canonical,
    operator_from_function,
    reconstruct,
)
from .matpoly import GridSpec, MatrixPolynomial, PolynomialBuilder, RegionK, pos_sample
from .measures import AtomicMapMeasure, ChoiMap, random_choi_map
from .moments import (
    MomentVerdict,
    bisgaard_sequence,
    default_probes,
    moment_matrix,
    moment_test_matrices,
)

logger = logging.getLogger(__name__)

CheckMode = Literal["local", "block"]


def _sqrt_upper(q: Fraction) -> Fraction:
    """A rational s >= sqrt(q)."""
    s = Fraction(math.sqrt(float(q)))
    while s * s < q:
        s = Fraction(math.nextafter(float(s), math.inf))
    return s


# Measure families

@dataclass(frozen=True, eq=False)
class CovariantMeasureFamily:
    """nu_y = sum_i Phi_i delta_{c_i} on K - y for every y, with completely positive Phi_i."""
    nvars: int
    dim: int
    backend: Backend
    atoms: tuple[tuple[tuple[Fraction, ...], ChoiMap], ...]
    region: RegionK

    @classmethod
    def create(
        cls,
        atoms: Sequence[tuple[Sequence, ChoiMap]],
        region: RegionK,
        backend: Backend = Backend.EXACT,
        check: bool = True,
        tol: float | None = None,
    ) -> "CovariantMeasureFamily":
        if not atoms:
            raise ValueError("A measure family needs at least one atom")
        dim = atoms[0][1].dim
        norm = []
        for c, phi in atoms:
            if len(c) != region.nvars:
                raise RegionError(f"Offset {tuple(c)} has {len(c)} coordinates, expected {region.nvars}")
            if phi.dim != dim:
                raise ValueError(f"All maps must act on dimension {dim}")
            norm.append((tuple(to_scalar(v, backend) for v in c), phi.to_backend(backend)))
        out = cls(region.nvars, dim, backend, tuple(norm), region)
        if check:
            for c, phi in out.atoms:
                if not phi.is_completely_positive(tol):
                    raise ValueError(f"Map at offset {c} is not completely positive")
        return out

    @property
    def offsets(self) -> list[tuple]:
        return [c for c, _ in self.atoms]

    @property
    def maps(self) -> list[ChoiMap]:
        return [phi for _, phi in self.atoms]

    def measure_at(self, y: Sequence) -> AtomicMapMeasure:
        """nu_y as a map-valued measure on K - y."""
        shift = [-to_scalar(v, Backend.EXACT) for v in y]
        return AtomicMapMeasure(self.nvars, self.dim, self.backend, self.atoms, self.region.shifted(shift))

    def admissible_region(self) -> RegionK:
        """Points y of K with y + c_i in K for every offset (an inscribed ball for ball regions)."""
        offs = [tuple(Fraction(v) for v in c) for c in self.offsets]
        if self.region.kind == "all":
            return self.region
        box = self.region.bounding_box()
        if self.region.kind == "box":
            lo = [max(a, a - min(c[i] for c in offs)) for i, (a, _) in enumerate(box)]
            hi = [min(b, b - max(c[i] for c in offs)) for i, (_, b) in enumerate(box)]
            if any(a > b for a, b in zip(lo, hi)):
                raise RegionError("No y keeps every shifted atom inside the box")
            return RegionK.box(lo, hi)
        center = [(a + b) / 2 for a, b in box]
        reach = max(_sqrt_upper(sum(v * v for v in c)) for c in offs)
        radius = self.region.radius - reach
        if radius <= 0:
            raise RegionError("Offsets reach beyond the ball radius")
        return RegionK.ball(center, radius)

    @classmethod
    def random(
        cls,
        nvars: int,
        dim: int,
        seed: int | np.random.Generator | None = None,
        region: RegionK | None = None,
        offset_region: RegionK | None = None,
        n_atoms: int | None = None,
        backend: Backend = Backend.EXACT,
    ) -> "CovariantMeasureFamily":
        """Random CP maps at rational offsets drawn from `offset_region` (default [-1/2, 1/2]^n)."""
        rng = make_rng(seed)
        region = region or RegionK.box([-1] * nvars, [1] * nvars)
        offset_region = offset_region or RegionK.box([Fraction(-1, 2)] * nvars, [Fraction(1, 2)] * nvars)
        n_atoms = n_atoms or int(rng.integers(1, 4))
        atoms = [(offset_region.sample_point(rng), random_choi_map(rng, dim, backend)) for _ in range(n_atoms)]
        return cls.create(atoms, region, backend, check=False)


def build_from_family(F: CovariantMeasureFamily, max_deg: int) -> PolyOperator:
    """T(A (x) x^beta)(y) = sum_i (y + c_i)^beta Phi_i(A)."""
    if max_deg < 0:
        raise DegreeOverflowError(max_deg, 0)

    def image(i: int, beta: MultiIndex, e: HermMatrix) -> MatrixPolynomial:
        builder = PolynomialBuilder(F.nvars, F.dim, F.backend)
        for c, phi in F.atoms:
            builder.add_polynomial(MatrixPolynomial.monomial(phi.apply(e), beta).shift_arg(c))
        return builder.build()

    return operator_from_function(image, F.nvars, F.dim, max_deg, F.backend)


# Positive inputs

def hermitian_square(g: Mapping[Sequence[int], ComplexArray], nvars: int, backend: Backend = Backend.EXACT) -> MatrixPolynomial:
    """G(x)* G(x) for G = sum_alpha G_alpha x^alpha with rectangular complex G_alpha."""
    items = sorted(((MultiIndex(a), m) for a, m in g.items()), key=lambda kv: grlex_key(kv[0]))
    if not items:
        raise ValueError("hermitian_square needs at least one coefficient")
    dim = np.asarray(items[0][1][0]).shape[1]
    builder = PolynomialBuilder(nvars, dim, backend)
    for j, (a, ga) in enumerate(items):
        for b, gb in items[j:]:
            re, im = cmatmul(cadjoint(ga), gb)
            if a == b:
                builder.add(a.add(b), HermMatrix(re, im, backend))
            else:
                # G_a* G_b + G_b* G_a is Hermitian
                builder.add(a.add(b), HermMatrix(re + re.T, im - im.T, backend))
    return builder.build()


def _random_factor(rng: np.random.Generator, nvars: int, dim: int, deg: int, backend: Backend) -> dict[MultiIndex, ComplexArray]:
    return {a: random_complex_matrix(rng, dim, dim, backend) for a in monomials(nvars, deg)}


def random_positive_poly(
    region: RegionK,
    deg: int,
    dim: int,
    seed: int | np.random.Generator | None = None,
    backend: Backend = Backend.EXACT,
) -> MatrixPolynomial:
    """G*G + sum_j g_j H_j*H_j with K = {g_j >= 0}; positive semidefinite on K by construction."""
    if deg < 0:
        raise ValueError("deg must be nonnegative")
    rng = make_rng(seed)
    n = region.nvars
    p = hermitian_square(_random_factor(rng, n, dim, deg // 2, backend), n, backend)
    for g in region.constraints():
        half = (deg - int(g.degree)) // 2
        if half < 0:
            continue
        h = hermitian_square(_random_factor(rng, n, dim, half, backend), n, backend)
        p = p + h.times_scalar_poly(g)
    return p


# Sampling check

@dataclass(frozen=True)
class PreserverReport:
    """Sampled preservation check; a fail certifies T is not a K-preserver, a pass is evidence."""
    trials: int
    passed: bool
    worst_trial: int
    worst_point: tuple[float, ...]
    min_eigenvalue: float
    tolerance: float
    first_failing_trial: int | None = None

    def to_dict(self) -> dict[str, Any]:
        out = {
            "trials": self.trials,
            "passed": self.passed,
            "worstTrial": self.worst_trial,
            "worstPoint": list(self.worst_point),
            "minEigenvalue": self.min_eigenvalue,
            "tolerance": self.tolerance,
            "evidence": "certificate" if not self.passed else "sampled",
        }
        if self.first_failing_trial is not None:
            out["firstFailingTrial"] = self.first_failing_trial
        return out


def check_preserver_sampling(
    T: PolyOperator,
    region: RegionK,
    trials: int | None = None,
    deg: int | None = None,
    grid: GridSpec | None = None,
    tol: float | None = None,
    seed: int | None = None,
    target: RegionK | None = None,
) -> PreserverReport:
    """Apply T to seeded positive inputs on K and sample T(p) on `target` (default K).

    Unbounded targets are sampled on [-1, 1]^n unless `grid` carries bounds.
    """
    trials = settings.trials if trials is None else trials
    deg = T.max_deg if deg is None else deg
    seed = settings.seed if seed is None else seed
    target = target or region
    if grid is None and not target.is_bounded:
        grid = GridSpec(bounds=((-1.0, 1.0),) * target.nvars)
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if deg > T.max_deg:
        raise DegreeOverflowError(deg, T.max_deg)
    worst = None
    first_fail = None
    for t, child in enumerate(np.random.SeedSequence(seed).spawn(trials)):
        p = random_positive_poly(region, deg, T.dim, np.random.default_rng(child), T.backend)
        report = pos_sample(apply_operator(T, p), target, grid, tol)
        if worst is None or report.min_eigenvalue < worst[1].min_eigenvalue:
            worst = (t, report)
        if not report.passed and first_fail is None:
            first_fail = t
    t, report = worst
    logger.info(f"Sampled {trials} inputs: {'pass' if first_fail is None else 'fail'} (worst {report.min_eigenvalue:.3e})")
    return PreserverReport(
        trials=trials,
        passed=first_fail is None,
        worst_trial=t,
        worst_point=report.worst_point,
        min_eigenvalue=report.min_eigenvalue,
        tolerance=report.tolerance,
        first_failing_trial=first_fail,
    )


# Moment-side checks

def default_probe_matrices(dim: int, backend: Backend = Backend.EXACT) -> list[tuple[str, HermMatrix]]:
    """E_jj, E_jj + E_kk +- (E_jk + E_kj) and E_jj + E_kk +- i(E_jk - E_kj): PSD and rational."""
    def mat(entries: dict[tuple[int, int], complex]) -> HermMatrix:
        rows = [[0] * dim for _ in range(dim)]
        for (j, k), v in entries.items():
            rows[j][k] = v
        return HermMatrix.of(rows, backend)

    out = [(f"E{j + 1}{j + 1}", mat({(j, j): 1})) for j in range(dim)]
    for j in range(dim):
        for k in range(j + 1, dim):
            jj, kk, jk = f"E{j + 1}{j + 1}", f"E{k + 1}{k + 1}", f"{j + 1}{k + 1}"
            for s, sign in ((1, "+"), (-1, "-")):
                out.append((f"{jj}+{kk}{sign}(E{jk}+E{jk[::-1]})", mat({(j, j): 1, (k, k): 1, (j, k): s, (k, j): s})))
            for s, sign in ((1, "+"), (-1, "-")):
                out.append((f"{jj}+{kk}{sign}i(E{jk}-E{jk[::-1]})", mat({(j, j): 1, (k, k): 1, (j, k): s * 1j, (k, j): -s * 1j})))
    return out


def default_y_grid(region: RegionK, points: int | None = None) -> list[tuple[Fraction, ...]]:
    """Rational tensor grid on K's bounding box ([-1, 1]^n for all-space), kept where it meets K."""
    points = settings.y_grid_points if points is None else points
    if points < 1:
        raise ValueError("points must be at least 1")
    box = region.bounding_box() or [(Fraction(-1), Fraction(1))] * region.nvars
    if points == 1:
        axes = [[(a + b) / 2] for a, b in box]
    else:
        axes = [[a + (b - a) * Fraction(k, points - 1) for k in range(points)] for a, b in box]
    index = sorted(product(range(len(axes[0])), repeat=region.nvars), key=grlex_key)
    grid = [tuple(axes[i][k] for i, k in enumerate(idx)) for idx in index]
    return [y for y in grid if region.contains(y)]


@dataclass(frozen=True)
class BorceaCell:
    y: tuple
    probe: str
    verdict: MomentVerdict


@dataclass(frozen=True)
class BorceaReport:
    """Per-(y, A) truncated moment verdicts of the sequences (Q_alpha(A)(y))."""
    mode: CheckMode
    order: int
    cells: tuple[BorceaCell, ...]
    passed: bool

    @property
    def first_failure(self) -> BorceaCell | None:
        return next((c for c in self.cells if not c.verdict.passed), None)

    def to_dict(self, digits: int | None = None) -> dict[str, Any]:
        fail = self.first_failure
        out: dict[str, Any] = {
            "mode": self.mode,
            "order": self.order,
            "passed": self.passed,
            "cellsTested": len(self.cells),
            "cellsFailed": sum(1 for c in self.cells if not c.verdict.passed),
            "evidence": "certificate" if not self.passed else "necessary-condition",
        }
        if fail is not None:
            out["failure"] = {
                "y": [format_number(v, Backend.EXACT) if isinstance(v, Fraction) else v for v in fail.y],
                "probeMatrix": fail.probe,
                "verdict": fail.verdict.to_dict(digits),
            }
        return out


def borcea_necessary_check(
    T: PolyOperator | CanonicalRep,
    region: RegionK,
    y_grid: Sequence[Sequence] | None = None,
    D: int | None = None,
    mode: CheckMode = "block",
    probes: Sequence[ComplexVector] | None = None,
    probe_matrices: Sequence[tuple[str, HermMatrix]] | None = None,
    tol: float | None = None,
    backend: Backend | None = None,
) -> BorceaReport:
    """Truncated moment tests of (Q_alpha(A)(y))_{|alpha| <= 2D} on K - y.

    block mode tests the block moment/localizing matrices (operator moment sequence),
    local mode tests every probe compression (local operator moment sequence).
    `backend` optionally converts the sequences before the PSD tests.
    """
    C = T if isinstance(T, CanonicalRep) else extract_canonical(T)
    D = C.max_deg // 2 if D is None else D
    if D < 0 or 2 * D > C.max_deg:
        raise OrderError(f"Order {D} needs canonical data up to degree {2 * D}, have {C.max_deg}")
    if mode not in ("local", "block"):
        raise ValueError(f"Unknown check mode: {mode!r}")
    y_grid = default_y_grid(region) if y_grid is None else list(y_grid)
    probe_matrices = default_probe_matrices(C.dim, C.backend) if probe_matrices is None else list(probe_matrices)
    test_mode = "compression" if mode == "local" else "block"

    cells = []
    for y in y_grid:
        if not region.contains(y):
            raise RegionError(f"Grid point {tuple(y)} lies outside {region.describe()}")
        shifted = region.shifted([-to_scalar(v, Backend.EXACT) for v in y])
        for label, a in probe_matrices:
            seq = C.sequence_at(a, y, 2 * D)
            if backend is not None:
                seq = seq.to_backend(backend)
            cell_probes = probes
            if test_mode == "compression" and probes is None:
                cell_probes = default_probes(C.dim, seq.backend)
            cells.append((tuple(y), label, moment_test_matrices(seq, shifted, D, test_mode, cell_probes)))

    verdicts = iter(psd_check_many([m for *_, labelled in cells for _, m in labelled], tol))
    out = []
    for y, label, labelled in cells:
        results = tuple((name, next(verdicts)) for name, _ in labelled)
        failing = next(((name, v) for name, v in results if not v.is_psd), None)
        out.append(BorceaCell(y, label, MomentVerdict(
            mode=test_mode,
            results=results,
            passed=failing is None,
            failing_label=failing[0] if failing else None,
            witness=failing[1].witness if failing else None,
        )))
    passed = all(c.verdict.passed for c in out)
    logger.info(f"{mode} check at order {D}: {len(out)} cells, {'pass' if passed else 'fail'}")
    return BorceaReport(mode=mode, order=D, cells=tuple(out), passed=passed)


# Canonical-data constructions

def sign_corrupted(
    C: CanonicalRep,
    seed: int | np.random.Generator | None = None,
    signs: Mapping[Sequence[int], int] | None = None,
) -> CanonicalRep:
    """Flip Q_beta by signs eps_beta; random signs always include eps_0 = -1."""
    if signs is None:
        rng = make_rng(seed)
        signs = {beta: int(rng.choice([-1, 1])) for beta in monomials(C.nvars, C.max_deg)}
        signs[MultiIndex.zero(C.nvars)] = -1
    return C.scaled({MultiIndex(b): s for b, s in signs.items()})


def bisgaard_canonical(k_max: int) -> CanonicalRep:
    """Q_k(E_i) equal to the k-th Bisgaard entry for every basis element, k <= 2*k_max."""
    seq = bisgaard_sequence(k_max)
    constants = {((n,), i): seq[(n,)] for n in range(seq.order + 1) for i in range(4)}
    return canonical_from_constants(constants, 1, 2, seq.order)


def bisgaard_operator(k_max: int) -> PolyOperator:
    """The operator on Herm_2[x] whose canonical form is bisgaard_canonical(k_max)."""
    return reconstruct(bisgaard_canonical(k_max))


BISGAARD_BLOCK = ((4, 0, 0, 2), (0, 1, 2, 0), (0, 2, 1, 0), (2, 0, 0, 4))


def bisgaard_demo(k_max: int = 3, trials: int | None = None, seed: int | None = None) -> dict[str, Any]:
    """The Bisgaard preserver: local moment checks pass, the block check fails, sampling passes."""
    k_max = max(k_max, 1)
    assertions: list[dict[str, Any]] = []

    def claim(name: str, ok: bool) -> None:
        assertions.append({"name": name, "passed": bool(ok)})

    seq = bisgaard_sequence(k_max)
    block = moment_matrix(seq, 1)
    claim("moment matrix of order 1 matches the 4x4 block", block == HermMatrix.of(BISGAARD_BLOCK))
    exact = psd_check_exact(block)
    witness_value = block.quad_form(exact.witness) if exact.witness is not None else 0
    claim("exact check rejects it with a witness", not exact.is_psd and witness_value < 0)
    lam = eig_min(block.to_backend(Backend.APPROX))
    claim("minimum eigenvalue is -1", abs(lam + 1.0) <= 1e-9)

    C = bisgaard_canonical(k_max)
    everywhere = RegionK.all_space(1)
    local = [borcea_necessary_check(C, everywhere, D=D, mode="local") for D in range(1, min(3, k_max) + 1)]
    for D, report in zip(range(1, len(local) + 1), local):
        claim(f"local check passes at order {D}", report.passed)
    blk = borcea_necessary_check(C, everywhere, D=1, mode="block")
    claim("block check fails at order 1", not blk.passed)

    sampling = check_preserver_sampling(
        bisgaard_operator(k_max), everywhere, trials=trials, deg=2,
        grid=GridSpec(bounds=((-1.0, 1.0),)), seed=seed,
    )
    claim("sampled preservation on [-1, 1] passes", sampling.passed)

    return {
        "demo": "bisgaard",
        "kMax": k_max,
        "momentMatrix": [[format_number(v, Backend.EXACT) for v in row] for row in block.re.tolist()],
        "witness": [format_number(v, Backend.EXACT) for v in exact.witness.re] if exact.witness is not None else None,
        "witnessValue": format_number(witness_value, Backend.EXACT),
        "minEigenvalue": lam,
        "local": [r.to_dict() for r in local],
        "block": blk.to_dict(),
        "sampling": sampling.to_dict(),
        "assertions": assertions,
        "passed": all(a["passed"] for a in assertions),
    }


__all__ = [
    "BorceaCell",
    "BorceaReport",
    "CovariantMeasureFamily",
    "PreserverReport",
    "bisgaard_canonical",
    "bisgaard_demo",
    "bisgaard_operator",
    "borcea_necessary_check",
    "build_from_family",
    "check_preserver_sampling",
    "default_probe_matrices",
    "default_y_grid",
    "hermitian_square",
    "random_positive_poly",
    "sign_corrupted",
]
