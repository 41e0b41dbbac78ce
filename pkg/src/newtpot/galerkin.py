"""Piecewise-constant Galerkin discretisation of the logarithmic potential.

Cells are either polar patches (discs and ellipses, mapped from the unit
disc) or triangles (convex polygons, fanned from the centroid).  The matrix
entry for cells i, j is the double integral of -log|x - y| / (2 pi) over
cell_i x cell_j.  Far pairs use the centroid rule, near pairs a tensor Gauss
rule on both cells, and the diagonal the exact self-integral of an
equal-area disc.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from .domains import Domain2D
from .errors import AssemblyError, DomainError, MeshError, PreconditionError, SolverError, StateError
from .specfun import gauss_legendre

NEAR_FACTOR = 3.0
# uniform meshes put many pairs exactly on the threshold; the slack keeps
# their classification stable under rounding and rescaling
_NEAR_SLACK = 1.0 + 1e-9
MIN_CELLS = 16
RESIDUAL_LIMIT = 1e-8
THREADS_ENV = "NEWTPOT_THREADS"

__all__ = [
    "Domain2D",
    "Mesh2D",
    "OperatorMatrix",
    "SpectrumResult",
    "build_mesh",
    "nested_disc_meshes",
    "assemble",
    "spectrum",
    "galerkin_spectrum",
    "thread_count",
    "check_containment",
    "eigfun_integral",
    "monotonicity_check",
    "nested_rayleigh_check",
    "log_kernel",
    "diag_self_integral",
]


def log_kernel(r):
    """-log(r) / (2 pi)."""
    return -np.log(r) / (2.0 * np.pi)


def diag_self_integral(r):
    """Double integral of -log|x - y| / (2 pi) over a disc of radius r twice.

    The mean of log|x - y| for two uniform points in a disc is log r - 1/4,
    so the integral is -(pi r**2)**2 (log r - 1/4) / (2 pi).
    """
    r = np.asarray(r, dtype=float)
    return np.pi * r**4 * (1.0 - 4.0 * np.log(r)) / 8.0


# --- meshes -----------------------------------------------------------------


@dataclass
class Mesh2D:
    """Cell centroids, areas, bounding radii and per-cell Gauss rules.

    ``cells`` holds the geometry: rows (r0, r1, t0, t1) of unit-disc polar
    patches mapped through ``frame = (cx, cy, ax, ay)`` for kind "polar", or
    (3, 2) vertex triples for kind "tri".
    """

    kind: str
    cells: np.ndarray
    centroids: np.ndarray
    areas: np.ndarray
    radii: np.ndarray
    nodes: np.ndarray
    weights: np.ndarray
    frame: tuple[float, float, float, float] | None = None
    near_order: int = 2

    @property
    def n(self) -> int:
        return len(self.areas)

    @property
    def total_area(self) -> float:
        return float(self.areas.sum())

    def refine(self) -> "Mesh2D":
        """Split every cell into four; the new space contains the old one."""
        if self.kind == "polar":
            r0, r1, t0, t1 = self.cells.T
            rm, tm = 0.5 * (r0 + r1), 0.5 * (t0 + t1)
            parts = [
                np.column_stack(c)
                for c in ((r0, rm, t0, tm), (r0, rm, tm, t1), (rm, r1, t0, tm), (rm, r1, tm, t1))
            ]
            cells = np.stack(parts, axis=1).reshape(-1, 4)
            return _polar_mesh(cells, self.frame, self.near_order)
        a, b, c = self.cells[:, 0], self.cells[:, 1], self.cells[:, 2]
        ab, bc, ca = 0.5 * (a + b), 0.5 * (b + c), 0.5 * (c + a)
        kids = np.stack(
            [np.stack(t, axis=1) for t in ((a, ab, ca), (ab, b, bc), (ca, bc, c), (bc, ca, ab))],
            axis=1,
        )
        return _tri_mesh(kids.reshape(-1, 3, 2), self.near_order)

    def subset(self, index) -> "Mesh2D":
        index = np.asarray(index)
        return Mesh2D(
            self.kind,
            self.cells[index],
            self.centroids[index],
            self.areas[index],
            self.radii[index],
            self.nodes[index],
            self.weights[index],
            self.frame,
            self.near_order,
        )

    def scaled(self, factor: float) -> "Mesh2D":
        """Mesh of the image domain under x -> factor * x."""
        if self.kind == "polar":
            cx, cy, ax, ay = self.frame
            return _polar_mesh(self.cells, (cx * factor, cy * factor, ax * factor, ay * factor), self.near_order)
        return _tri_mesh(self.cells * factor, self.near_order)


def _polar_mesh(cells: np.ndarray, frame, order: int) -> Mesh2D:
    cx, cy, ax, ay = frame
    r0, r1, t0, t1 = cells.T
    jac = ax * ay
    areas = jac * 0.5 * (r1**2 - r0**2) * (t1 - t0)
    m_r = (r1**3 - r0**3) / 3.0
    mx = jac * m_r * (np.sin(t1) - np.sin(t0))
    my = jac * m_r * (np.cos(t0) - np.cos(t1))
    centroids = np.column_stack([cx + ax * mx / areas, cy + ay * my / areas])

    def to_xy(rho, theta):
        return np.stack([cx + ax * rho * np.cos(theta), cy + ay * rho * np.sin(theta)], axis=-1)

    # bounding radius from corners and arc samples
    s = np.linspace(0.0, 1.0, 7)
    th = t0[:, None] + s[None, :] * (t1 - t0)[:, None]
    ring = np.concatenate([to_xy(r0[:, None], th), to_xy(r1[:, None], th)], axis=1)
    radii = np.linalg.norm(ring - centroids[:, None, :], axis=2).max(axis=1)

    x, w = gauss_legendre(order)
    u = 0.5 * (x + 1.0)
    rho = r0[:, None] + u[None, :] * (r1 - r0)[:, None]
    theta = t0[:, None] + u[None, :] * (t1 - t0)[:, None]
    w_r = 0.5 * w[None, :] * (r1 - r0)[:, None] * rho
    w_t = 0.5 * w[None, :] * (t1 - t0)[:, None]
    nodes = to_xy(rho[:, :, None], theta[:, None, :]).reshape(len(cells), -1, 2)
    weights = (jac * w_r[:, :, None] * w_t[:, None, :]).reshape(len(cells), -1)
    return Mesh2D("polar", cells, centroids, areas, radii, nodes, weights, tuple(frame), order)


def _tri_mesh(tris: np.ndarray, order: int) -> Mesh2D:
    a, b, c = tris[:, 0], tris[:, 1], tris[:, 2]
    cross = (b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1]) - (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0])
    areas = 0.5 * np.abs(cross)
    centroids = (a + b + c) / 3.0
    radii = np.linalg.norm(tris - centroids[:, None, :], axis=2).max(axis=1)
    # collapsed (Duffy) tensor rule: x = a + u (b - a) + u v (c - b)
    x, w = gauss_legendre(order)
    u = 0.5 * (x + 1.0)
    wu = 0.5 * w
    uu, vv = np.meshgrid(u, u, indexing="ij")
    ww = np.outer(wu, wu) * uu
    uu, vv, ww = uu.ravel(), vv.ravel(), ww.ravel()
    nodes = (
        a[:, None, :]
        + uu[None, :, None] * (b - a)[:, None, :]
        + (uu * vv)[None, :, None] * (c - b)[:, None, :]
    )
    weights = 2.0 * areas[:, None] * ww[None, :]
    return Mesh2D("tri", tris, centroids, areas, radii, nodes, weights, None, order)


def _ring_cells(edges: np.ndarray, first_ring: int = 0) -> np.ndarray:
    rows = []
    for i, (lo, hi) in enumerate(zip(edges[:-1], edges[1:]), start=first_ring):
        m = 4 * (2 * i + 1)
        t = np.linspace(0.0, 2.0 * np.pi, m + 1)
        rows.append(np.column_stack([np.full(m, lo), np.full(m, hi), t[:-1], t[1:]]))
    return np.concatenate(rows)


def _frame(domain: Domain2D) -> tuple[float, float, float, float]:
    cx, cy = domain.center
    if domain.shape == "disc":
        return cx, cy, domain.radius, domain.radius
    return cx, cy, domain.axes[0], domain.axes[1]


def build_mesh(domain: Domain2D, target_cells: int, near_order: int = 2) -> Mesh2D:
    """Quasi-uniform mesh with roughly ``target_cells`` cells.

    Discs and ellipses get polar rings of equal width with 4(2i+1) sectors in
    ring i (4 nr**2 cells); convex polygons are fanned from the centroid and
    each fan triangle split into m**2 similar triangles.
    """
    if target_cells < MIN_CELLS:
        raise MeshError(f"target_cells must be >= {MIN_CELLS}, got {target_cells}")
    if near_order < 1:
        raise MeshError(f"near_order must be >= 1, got {near_order}")
    if domain.area <= 0 or not math.isfinite(domain.area):
        raise MeshError("degenerate domain (zero area)")
    if domain.shape in ("disc", "ellipse"):
        nr = max(2, round(math.sqrt(target_cells / 4.0)))
        edges = np.linspace(0.0, 1.0, nr + 1)
        return _polar_mesh(_ring_cells(edges), _frame(domain), near_order)
    if not domain.is_convex:
        raise MeshError("only convex polygons can be meshed")
    v = domain.vertex_array
    centre = v.mean(axis=0)
    m = max(1, round(math.sqrt(target_cells / len(v))))
    tris = []
    for p, q in zip(v, np.roll(v, -1, axis=0)):
        tris.extend(_split_triangle(centre, p, q, m))
    tris = np.array(tris)
    mesh = _tri_mesh(tris, near_order)
    if np.any(mesh.areas <= 1e-300):
        raise MeshError("degenerate triangle in polygon fan")
    return mesh


def _split_triangle(a, b, c, m):
    """Uniform m x m subdivision into m**2 triangles of equal area."""

    def pt(i, j):
        return a + (i / m) * (b - a) + (j / m) * (c - a)

    out = []
    for i in range(m):
        for j in range(m - i):
            out.append((pt(i, j), pt(i + 1, j), pt(i, j + 1)))
            if i + j < m - 1:
                out.append((pt(i + 1, j), pt(i + 1, j + 1), pt(i, j + 1)))
    return out


def nested_disc_meshes(
    inner_radius: float, outer_radius: float, rings: int, near_order: int = 2, center=(0.0, 0.0)
) -> tuple[Mesh2D, Mesh2D]:
    """Meshes of two concentric discs where the inner cells are exactly the
    first cells of the outer mesh (outer = inner plus annulus rings)."""
    if not 0 < inner_radius < outer_radius:
        raise MeshError("need 0 < inner_radius < outer_radius")
    if rings < 2:
        raise MeshError("need at least 2 rings")
    h = inner_radius / rings
    extra = max(1, round((outer_radius - inner_radius) / h))
    edges = np.concatenate(
        [np.linspace(0.0, inner_radius, rings + 1), np.linspace(inner_radius, outer_radius, extra + 1)[1:]]
    )
    frame = (center[0], center[1], 1.0, 1.0)
    outer = _polar_mesh(_ring_cells(edges), frame, near_order)
    inner = outer.subset(np.arange(4 * rings**2))
    return inner, outer


# --- assembly ---------------------------------------------------------------


def thread_count(threads: int | None = None) -> int:
    """Worker count: explicit value, else NEWTPOT_THREADS, else the CPU count."""
    if threads is None:
        raw = os.environ.get(THREADS_ENV)
        if raw is None or raw == "":
            return os.cpu_count() or 1
        try:
            threads = int(raw)
        except ValueError:
            raise DomainError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
    if threads < 1:
        raise DomainError(f"thread count must be a positive integer, got {threads}")
    return threads


@dataclass
class OperatorMatrix:
    entries: np.ndarray
    mesh: Mesh2D

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def apply_to_ones(self) -> np.ndarray:
        """Cell integrals of N(1)."""
        return self.entries.sum(axis=1)


def _rows(mesh: Mesh2D, lo: int, hi: int) -> np.ndarray:
    c, area, rad = mesh.centroids, mesh.areas, mesh.radii
    d = np.linalg.norm(c[lo:hi, None, :] - c[None, :, :], axis=2)
    rows = np.arange(lo, hi)
    d[rows - lo, rows] = 1.0
    block = area[lo:hi, None] * area[None, :] * log_kernel(d)
    near = d < NEAR_FACTOR * _NEAR_SLACK * (rad[lo:hi, None] + rad[None, :])
    near[rows - lo, rows] = False
    bi, bj = np.nonzero(near)
    if len(bi):
        x = mesh.nodes[bi + lo]
        y = mesh.nodes[bj]
        wx = mesh.weights[bi + lo]
        wy = mesh.weights[bj]
        dist = np.linalg.norm(x[:, :, None, :] - y[:, None, :, :], axis=3)
        block[bi, bj] = np.einsum("pi,pj,pij->p", wx, wy, log_kernel(dist))
    block[rows - lo, rows] = diag_self_integral(np.sqrt(area[lo:hi] / np.pi))
    return block


def assemble(mesh: Mesh2D, threads: int | None = None, block_rows: int = 128) -> OperatorMatrix:
    """Dense symmetric Galerkin matrix; rows are filled in parallel blocks.

    Each entry depends only on its pair of cells, so the result does not
    depend on the number of workers.
    """
    n = mesh.n
    if n < 1:
        raise AssemblyError("empty mesh")
    scale = float(np.sqrt(mesh.areas.max()))
    for lo in range(0, n, block_rows):
        d = np.linalg.norm(mesh.centroids[lo : lo + block_rows, None, :] - mesh.centroids[None], axis=2)
        idx = np.arange(lo, min(n, lo + block_rows))
        d[idx - lo, idx] = np.inf
        if d.min() <= 1e-9 * scale:
            raise AssemblyError("overlapping cells: two cells share a centroid")
    starts = list(range(0, n, block_rows))
    workers = min(thread_count(threads), len(starts))
    out = np.empty((n, n))
    if workers == 1:
        for lo in starts:
            out[lo : lo + block_rows] = _rows(mesh, lo, min(n, lo + block_rows))
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            blocks = pool.map(lambda lo: (lo, _rows(mesh, lo, min(n, lo + block_rows))), starts)
            for lo, block in blocks:
                out[lo : lo + block_rows] = block
    if not np.all(np.isfinite(out)):
        raise AssemblyError("non-finite matrix entries")
    # near pairs sum in a different order for (i, j) and (j, i)
    out = 0.5 * (out + out.T)
    return OperatorMatrix(out, mesh)


# --- eigen-solve ------------------------------------------------------------


@dataclass
class SpectrumResult:
    """Leading eigenpairs in decreasing order; eigenvectors hold cell values
    normalised to unit L2 norm with nonnegative integral."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None
    mesh_size: int
    residuals: np.ndarray = field(default_factory=lambda: np.zeros(0))


def spectrum(matrix: OperatorMatrix, count: int, keep_vectors: bool = True) -> SpectrumResult:
    """Top ``count`` solutions of A v = lam M v with M = diag(cell areas)."""
    n = matrix.n
    if not 1 <= count <= n:
        raise DomainError(f"count must lie in [1, {n}], got {count}")
    area = matrix.mesh.areas
    s = 1.0 / np.sqrt(area)
    b = matrix.entries * s[:, None] * s[None, :]
    try:
        vals, vecs = linalg.eigh(b, subset_by_index=[n - count, n - 1])
    except (linalg.LinAlgError, ValueError) as exc:
        raise SolverError(f"symmetric eigen-solve failed: {exc}") from None
    vals, vecs = vals[::-1], vecs[:, ::-1]
    scale = max(abs(vals).max(), np.finfo(float).tiny)
    residuals = np.linalg.norm(b @ vecs - vecs * vals, axis=0) / scale
    if np.any(residuals > RESIDUAL_LIMIT):
        raise SolverError(f"eigenpair residuals too large: max {residuals.max():.3e}")
    v = vecs * s[:, None]
    integrals = area @ v
    sign = np.where(integrals < 0, -1.0, 1.0)
    v *= sign
    return SpectrumResult(vals.copy(), v if keep_vectors else None, n, residuals)


def eigfun_integral(result: SpectrumResult, mesh: Mesh2D, index: int) -> float:
    """Integral of the index-th discrete eigenfunction over the domain."""
    if result.eigenvectors is None:
        raise StateError("spectrum was computed without eigenvectors")
    if not 0 <= index < result.eigenvectors.shape[1]:
        raise DomainError(f"index {index} out of range")
    if mesh.n != result.mesh_size:
        raise StateError("mesh does not match the spectrum")
    return float(mesh.areas @ result.eigenvectors[:, index])


def galerkin_spectrum(domain: Domain2D, cells: int, count: int, threads: int | None = None):
    """Mesh, assemble and solve in one call; returns (mesh, matrix, result)."""
    mesh = build_mesh(domain, cells)
    matrix = assemble(mesh, threads)
    return mesh, matrix, spectrum(matrix, min(count, mesh.n))


# --- monotonicity -----------------------------------------------------------


@dataclass(frozen=True)
class ModeComparison:
    k: int
    inner: float
    outer: float
    passed: bool


@dataclass
class MonotonicityReport:
    tau: float
    backend: str
    modes: list[ModeComparison]

    @property
    def all_pass(self) -> bool:
        return all(m.passed for m in self.modes)

    def to_dict(self) -> dict:
        return {
            "backend": self.backend,
            "tau": self.tau,
            "all_pass": self.all_pass,
            "modes": [
                {"k": m.k, "inner": m.inner, "outer": m.outer, "pass": m.passed} for m in self.modes
            ],
        }


def check_containment(inner: Domain2D, outer: Domain2D, samples: int = 512) -> None:
    pts = inner.boundary_samples(samples)
    if not np.all(outer.contains(pts)):
        raise PreconditionError("inner domain is not contained in the outer domain")


def _compare(inner_vals, outer_vals, tau, backend) -> MonotonicityReport:
    modes = [
        ModeComparison(k, float(a), float(b), bool(a <= b * (1.0 + tau) if b > 0 else a <= b + tau * abs(b)))
        for k, (a, b) in enumerate(zip(inner_vals, outer_vals))
    ]
    return MonotonicityReport(tau, backend, modes)


def monotonicity_check(
    inner: Domain2D,
    outer: Domain2D,
    count: int = 10,
    cells: int = 400,
    tau: float = 0.02,
    backend: str = "galerkin",
    threads: int | None = None,
) -> MonotonicityReport:
    """Compare the leading eigenvalues of nested domains.

    ``backend="closed-form"`` needs two concentric discs of radius <= 1 and
    compares exact values; otherwise both domains are meshed with the same
    target cell count.
    """
    check_containment(inner, outer)
    if backend == "closed-form":
        from .disc import disc_lambda_array

        if inner.shape != "disc" or outer.shape != "disc":
            raise PreconditionError("closed-form comparison needs two discs")
        lo = disc_lambda_array(inner.radius, count)
        hi = disc_lambda_array(outer.radius, count)
        return _compare(lo, hi, 0.0, backend)
    if backend != "galerkin":
        raise DomainError(f"unknown backend {backend!r}")
    _, _, a = galerkin_spectrum(inner, cells, count, threads)
    _, _, b = galerkin_spectrum(outer, cells, count, threads)
    return _compare(a.eigenvalues, b.eigenvalues, tau, backend)


@dataclass
class NestedRayleighReport:
    inner_eigenvalues: np.ndarray
    outer_eigenvalues: np.ndarray
    padded_quotients: np.ndarray
    submatrix_mismatch: float
    ordering_pass: bool
    quotient_pass: bool

    @property
    def all_pass(self) -> bool:
        return self.ordering_pass and self.quotient_pass and self.submatrix_mismatch <= 1e-14


def nested_rayleigh_check(
    inner_radius: float = 0.5,
    outer_radius: float = 1.0,
    rings: int = 8,
    count: int = 10,
    tol: float = 1e-10,
) -> NestedRayleighReport:
    """Zero-padding check on nested disc meshes.

    Inner eigenvectors padded with zeros have the same Rayleigh quotient in
    the outer matrix, and the inner eigenvalues never exceed the outer ones.
    """
    inner_mesh, outer_mesh = nested_disc_meshes(inner_radius, outer_radius, rings)
    a_in = assemble(inner_mesh)
    a_out = assemble(outer_mesh)
    n = inner_mesh.n
    mismatch = float(np.abs(a_out.entries[:n, :n] - a_in.entries).max() / np.abs(a_in.entries).max())
    s_in = spectrum(a_in, count)
    s_out = spectrum(a_out, count, keep_vectors=False)
    padded = np.zeros((outer_mesh.n, count))
    padded[:n] = s_in.eigenvectors
    num = np.einsum("ik,ij,jk->k", padded, a_out.entries, padded)
    den = np.einsum("ik,i,ik->k", padded, outer_mesh.areas, padded)
    quotients = num / den
    scale = abs(s_out.eigenvalues[0])
    ordering = bool(np.all(s_in.eigenvalues <= s_out.eigenvalues + tol * scale))
    quotient = bool(np.allclose(quotients, s_in.eigenvalues, rtol=0, atol=tol * scale))
    return NestedRayleighReport(s_in.eigenvalues, s_out.eigenvalues, quotients, mismatch, ordering, quotient)
