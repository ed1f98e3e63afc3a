"""Titchmarsh-Weyl (Neumann-to-Dirichlet) matrix, residues, visibility.

M_B(mu)[k,l] is the value at vertex v_k of the solution of -f'' = mu f with
unit derivative balance at v_l and zero balance elsewhere.  Eigenvalues of
the graph Laplacian appear as order-one poles of M_B unless their
eigenfunctions vanish on B; residue ranks quantify exactly how much of each
eigenspace is visible from the vertex data.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .graphs import MetricGraph, betti_graph, core_decomposition
from .lengths import candidate_steps
from .resonance import ResonanceReport, resonance_dimension
from .spectral import (SolverOptions, Spectrum, assemble_secular_complex,
                       eigenvalues_in)


class NearSpectrumError(RuntimeError):
    """mu is too close to the spectrum for a reliable solve."""


class ResidueError(RuntimeError):
    """Residue estimation failed (tiny gap or method disagreement)."""


@dataclass(frozen=True)
class VertexSelection:
    vertices: tuple[str, ...]
    mode: str                    # "auto" | "explicit"
    warnings: tuple[str, ...] = ()

    @property
    def hypotheses_verified(self) -> bool:
        return not any("unverified" in w for w in self.warnings)


def select_vertices(graph: MetricGraph, mode: str = "auto",
                    vertices: Optional[list[str]] = None) -> VertexSelection:
    """Auto mode: boundary vertices plus proper core vertices, the smallest
    set for which the visibility classification is guaranteed."""
    core = core_decomposition(graph)
    auto = sorted(set(core.boundary_vertices) | set(core.proper_core_vertices))
    if mode == "auto":
        return VertexSelection(tuple(auto), "auto")
    if not vertices:
        raise ValueError("explicit vertex selection must be nonempty")
    unknown = [v for v in vertices if v not in graph.vertices]
    if unknown:
        raise ValueError(f"unknown vertices in selection: {unknown}")
    warnings = ()
    if not set(auto) <= set(vertices):
        warnings = ("selection misses boundary/proper-core vertices; "
                    "visibility hypotheses unverified",)
    return VertexSelection(tuple(vertices), "explicit", warnings)


@dataclass(frozen=True)
class TWSample:
    mu: complex
    vertices: tuple[str, ...]
    matrix: np.ndarray


def ntd_matrix(graph: MetricGraph, selection: VertexSelection, mu: complex,
               cond_max: float = 1e12) -> TWSample:
    """Sample the Neumann-to-Dirichlet matrix at mu (off the spectrum)."""
    a = assemble_secular_complex(graph, mu)
    cond = np.linalg.cond(a)
    if not np.isfinite(cond) or cond > cond_max:
        raise NearSpectrumError(
            f"system at mu={mu!r} has condition {cond:.3g} > {cond_max:.3g}")
    ne = len(graph.edges)
    vix = {v: i for i, v in enumerate(graph.vertices)}
    m = len(selection.vertices)
    rhs = np.zeros((a.shape[0], m), dtype=complex)
    for l, v in enumerate(selection.vertices):
        rhs[2 * ne + vix[v], l] = 1.0
    sol = np.linalg.solve(a, rhs)
    rows = [2 * ne + vix[v] for v in selection.vertices]
    return TWSample(mu, selection.vertices, sol[rows, :].copy())


@dataclass
class ResidueOptions:
    r_max: float = 0.5
    nodes: int = 64               # initial contour nodes, doubled to converge
    max_nodes: int = 1024
    quad_rel_tol: float = 1e-10
    rank_tol: float = 1e-8
    abs_floor_factor: float = 1e-12
    limit_angles: int = 24


@dataclass(frozen=True)
class ResidueEstimate:
    lam: float
    matrix: np.ndarray            # contour-method residue (authoritative)
    rank: int
    singular_values: np.ndarray
    radius: float
    nodes: int
    limit_matrix: np.ndarray
    limit_rank: int
    reference_norm: float         # ||M_B(lam + r)||
    diagnostics: dict = field(default_factory=dict)


def residue(graph: MetricGraph, selection: VertexSelection, lam: float,
            gap: float, opts: Optional[ResidueOptions] = None) -> ResidueEstimate:
    """Residue of M_B at lam by contour quadrature, cross-checked against a
    radius-shrink limit fit; ranks must agree."""
    if opts is None:
        opts = ResidueOptions()
    r = min(gap / 2.0, opts.r_max)
    if r <= 0 or not math.isfinite(r):
        raise ResidueError(f"spectral gap {gap!r} too small for a contour")

    def sample(mu: complex) -> np.ndarray:
        return ntd_matrix(graph, selection, mu).matrix

    # contour: trapezoidal rule on |mu - lam| = r, exponentially convergent
    n = opts.nodes
    prev = None
    while True:
        thetas = 2 * math.pi * np.arange(n) / n
        acc = np.zeros((len(selection.vertices),) * 2, dtype=complex)
        for t in thetas:
            w = cmath.exp(1j * t)
            acc += sample(lam + r * w) * w
        est = acc * (r / n)
        if prev is not None:
            scale = max(np.linalg.norm(est), 1e-300)
            if np.linalg.norm(est - prev) <= opts.quad_rel_tol * scale:
                break
        if n >= opts.max_nodes:
            break
        prev = est
        n *= 2

    ref_norm = float(np.linalg.norm(sample(lam + r), 2))
    abs_floor = opts.abs_floor_factor * ref_norm

    def rank_of(mat: np.ndarray) -> tuple[int, np.ndarray]:
        sv = np.linalg.svd(mat, compute_uv=False)
        thresh = max(opts.rank_tol * (sv[0] if len(sv) else 0.0), abs_floor)
        return int(np.sum(sv > thresh)), sv

    # limit method: angle-averaged (mu-lam)*M at shrinking radii, fitted in
    # the radius and extrapolated to zero.  The angle average cancels all
    # Taylor terms except powers divisible by the angle count, so the radii
    # stay well inside the contour.
    radii = [r / 2, r / 4, r / 8]
    averages = []
    for rho in radii:
        acc = np.zeros_like(est)
        for j in range(opts.limit_angles):
            t = 2 * math.pi * (j + 0.5) / opts.limit_angles
            mu = lam + rho * cmath.exp(1j * t)
            acc += (mu - lam) * sample(mu)
        averages.append(acc / opts.limit_angles)
    vand = np.vander(np.array(radii), 3, increasing=True)  # [1, rho, rho^2]
    stack = np.array([a.ravel() for a in averages])
    coef, *_ = np.linalg.lstsq(vand, stack, rcond=None)
    limit_est = coef[0].reshape(est.shape)

    rank_c, sv_c = rank_of(est)
    rank_l, _ = rank_of(limit_est)
    if rank_c != rank_l:
        raise ResidueError(
            f"residue rank disagreement at lambda={lam!r}: "
            f"contour {rank_c} vs limit {rank_l}")
    return ResidueEstimate(
        lam=lam, matrix=est, rank=rank_c, singular_values=sv_c, radius=r,
        nodes=n, limit_matrix=limit_est, limit_rank=rank_l,
        reference_norm=ref_norm,
        diagnostics={"abs_floor": abs_floor, "rank_tol": opts.rank_tol})


# ---------------------------------------------------------------------------
# Visibility classification


@dataclass(frozen=True)
class VisibilityRow:
    lam: float
    k: float
    dim_ker: int
    rank_residue: int
    dim_resonance: int
    step: Optional[str]
    identity_ok: bool
    classification: str          # fully-visible | partially-visible | invisible
    notes: tuple[str, ...] = ()
    residue: Optional[ResidueEstimate] = None
    resonance: Optional[ResonanceReport] = None


@dataclass(frozen=True)
class VisibilityReport:
    rows: tuple[VisibilityRow, ...]
    selection: VertexSelection
    spectrum: Spectrum
    warnings: tuple[str, ...] = ()

    @property
    def all_identities_hold(self) -> bool:
        return all(r.identity_ok for r in self.rows)


def _classify(dim_ker: int, rank: int) -> str:
    if rank == 0:
        return "invisible" if dim_ker > 0 else "regular"
    if rank < dim_ker:
        return "partially-visible"
    return "fully-visible"


def visibility_report(graph: MetricGraph, selection: VertexSelection,
                      lambda_max: float,
                      solver_opts: Optional[SolverOptions] = None,
                      residue_opts: Optional[ResidueOptions] = None,
                      step_match_tol: float = 1e-6) -> VisibilityReport:
    """Classify every eigenvalue <= lambda_max by its visibility for M_B."""
    l_total = graph.total_length()
    margin = math.pi / l_total
    spec = eigenvalues_in(graph, lambda_max, solver_opts, k_margin=margin)
    warnings = list(spec.warnings) + list(selection.warnings)

    hits = list(spec.eigenvalues)
    lams = [h.lam for h in hits]
    cands = candidate_steps(graph, (math.sqrt(lambda_max) + margin) ** 2 * 1.01)

    rows = []
    for i, hit in enumerate(hits):
        if hit.lam > lambda_max * (1 + 1e-12):
            continue
        gaps = []
        if i > 0:
            gaps.append(hit.lam - lams[i - 1])
        if i + 1 < len(lams):
            gaps.append(lams[i + 1] - hit.lam)
        gap = min(gaps) if gaps else math.inf

        notes: list[str] = []
        if hit.lam == 0.0:
            dim_res = 0
            step_str = None
            res_rep = None
        else:
            match = next((c for c in cands
                          if abs(hit.lam - c.lam) <= step_match_tol * max(1.0, hit.lam)),
                         None)
            if match is None:
                dim_res = 0
                step_str = None
                res_rep = None
                notes.append("no commensurate structure detected")
            else:
                res_rep = resonance_dimension(graph, match.step)
                dim_res = res_rep.dim
                step_str = str(match.step)

        res = residue(graph, selection, hit.lam, gap,
                      residue_opts)
        identity_ok = hit.multiplicity == res.rank + dim_res
        if not identity_ok:
            warnings.append(
                f"identity violated at lambda={hit.lam:.12g}: "
                f"dim ker {hit.multiplicity} != rank {res.rank} + dimR {dim_res}")
        rows.append(VisibilityRow(
            lam=hit.lam, k=hit.k, dim_ker=hit.multiplicity,
            rank_residue=res.rank, dim_resonance=dim_res, step=step_str,
            identity_ok=identity_ok,
            classification=_classify(hit.multiplicity, res.rank),
            notes=tuple(notes), residue=res, resonance=res_rep))
    b0 = betti_graph(graph).beta0
    assert rows and rows[0].lam == 0.0 and rows[0].dim_ker == b0
    return VisibilityReport(tuple(rows), selection, spec, tuple(warnings))
