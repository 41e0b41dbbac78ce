import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from newtpot.disc import DiscSpec, disc_eigenvalues, disc_modes
from newtpot.domains import Domain2D
from newtpot.errors import AssemblyError, DomainError, MeshError, PreconditionError, StateError
from newtpot.galerkin import (
    THREADS_ENV,
    assemble,
    build_mesh,
    check_containment,
    diag_self_integral,
    eigfun_integral,
    galerkin_spectrum,
    log_kernel,
    monotonicity_check,
    nested_disc_meshes,
    nested_rayleigh_check,
    spectrum,
    thread_count,
)

from oracles import monte_carlo_disc_self_integral


@pytest.fixture(scope="module")
def disc_small():
    return galerkin_spectrum(Domain2D.disc(0.1), 400, 8)


# --- meshes ------------------------------------------------------------------


def test_mesh_areas():
    assert build_mesh(Domain2D.disc(1.0), 100).total_area == pytest.approx(math.pi, rel=1e-6)
    assert build_mesh(Domain2D.polygon([(0, 0), (1, 0), (1, 1), (0, 1)]), 64).total_area == pytest.approx(1.0, abs=1e-15)
    assert build_mesh(Domain2D.ellipse((2, 1)), 200).total_area == pytest.approx(2 * math.pi, rel=1e-6)


@pytest.mark.parametrize(
    "dom",
    [Domain2D.disc(0.3, (1, 1)), Domain2D.ellipse((1, 0.4)), Domain2D.square(2.0), Domain2D.polygon([(0, 0), (2, 0), (0.5, 1)])],
)
@pytest.mark.parametrize("target", [16, 100, 400])
def test_mesh_counts_and_containment(dom, target):
    mesh = build_mesh(dom, target)
    assert target / 2 <= mesh.n <= 2 * target
    assert mesh.total_area == pytest.approx(dom.area, rel=1e-6)
    assert np.all(dom.contains(mesh.centroids))
    assert np.all(mesh.areas > 0)
    # per-cell rules integrate the constant exactly
    assert np.allclose(mesh.weights.sum(axis=1), mesh.areas, rtol=1e-12)


def test_refine_and_scale():
    mesh = build_mesh(Domain2D.disc(1.0), 64)
    fine = mesh.refine()
    assert fine.n == 4 * mesh.n
    assert fine.total_area == pytest.approx(mesh.total_area, rel=1e-13)
    tri = build_mesh(Domain2D.square(1.0), 64)
    assert tri.refine().total_area == pytest.approx(1.0, abs=1e-14)
    assert mesh.scaled(0.5).total_area == pytest.approx(mesh.total_area / 4, rel=1e-13)


def test_mesh_errors():
    with pytest.raises(MeshError):
        build_mesh(Domain2D.disc(1.0), 10)
    with pytest.raises(MeshError):
        build_mesh(Domain2D.polygon([(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)]), 100)
    with pytest.raises(MeshError):
        nested_disc_meshes(1.0, 0.5, 4)


# --- assembly ----------------------------------------------------------------


def test_diag_closed_form_against_monte_carlo():
    est, err = monte_carlo_disc_self_integral(0.1)
    assert abs(diag_self_integral(0.1) - est) <= 3 * err


def test_symmetry(disc_small):
    a = disc_small[1].entries
    assert np.abs(a - a.T).max() <= 1e-13 * np.abs(a).max()


def _two_cells(mesh, other):
    pick = lambda f: np.concatenate([getattr(mesh, f)[:1], getattr(other, f)[:1]])
    fields = ("cells", "centroids", "areas", "radii", "nodes", "weights")
    return type(mesh)("tri", *(pick(f) for f in fields))


def _triangle_samples(rng, tri, n):
    u, v = rng.random(n), rng.random(n)
    flip = u + v > 1
    u[flip], v[flip] = 1 - u[flip], 1 - v[flip]
    return tri[0] + u[:, None] * (tri[1] - tri[0]) + v[:, None] * (tri[2] - tri[0])


@pytest.mark.parametrize("shift", [10.0, 25.0])
def test_far_cells_match_kernel(shift):
    rng = np.random.default_rng(3)
    # a side-4 square in 16 cells gives unit-area triangles
    both = _two_cells(build_mesh(Domain2D.square(4.0), 16), build_mesh(Domain2D.square(4.0, (shift, 0.0)), 16))
    assert both.areas == pytest.approx([1.0, 1.0])
    d = float(np.linalg.norm(both.centroids[0] - both.centroids[1]))
    assert d >= 10
    entry = assemble(both).entries[0, 1]
    assert entry == pytest.approx(float(log_kernel(d)), rel=1e-3)
    x = _triangle_samples(rng, both.cells[0], 200_000)
    y = _triangle_samples(rng, both.cells[1], 200_000)
    assert entry == pytest.approx(float(np.mean(log_kernel(np.linalg.norm(x - y, axis=1)))), rel=1e-3)


def test_coincident_cells_rejected():
    mesh = build_mesh(Domain2D.disc(1.0), 64)
    with pytest.raises(AssemblyError):
        assemble(mesh.subset(np.array([0, 1, 1, 2])))


def test_thread_count_independence(monkeypatch):
    mesh = build_mesh(Domain2D.ellipse((1, 0.5)), 400)
    one = assemble(mesh, threads=1, block_rows=50).entries
    many = assemble(mesh, threads=4, block_rows=50).entries
    assert np.array_equal(one, many)
    monkeypatch.setenv(THREADS_ENV, "3")
    assert thread_count() == 3
    assert thread_count(2) == 2
    monkeypatch.setenv(THREADS_ENV, "x")
    with pytest.raises(DomainError):
        thread_count()
    with pytest.raises(DomainError):
        thread_count(0)


# --- spectrum ----------------------------------------------------------------


def test_disc_spectrum_against_closed_form(disc_small):
    _, _, res = disc_small
    exact = [p.lam for p in disc_modes(0.1, 8)]
    assert res.eigenvalues[0] == pytest.approx(exact[0], rel=0.05)
    assert res.eigenvalues[1] == pytest.approx(exact[1], rel=0.05)
    assert res.eigenvalues[2] == pytest.approx(exact[2], rel=0.05)
    assert np.all(res.eigenvalues > 0)
    assert np.all(np.diff(res.eigenvalues) <= 0)
    assert res.residuals.max() <= 1e-8


def test_refinement_raises_leading_eigenvalue():
    mesh = build_mesh(Domain2D.disc(0.1), 100)
    lams = []
    for _ in range(3):
        lams.append(spectrum(assemble(mesh), 1).eigenvalues[0])
        mesh = mesh.refine()
    assert lams[0] < lams[1] < lams[2]


def test_convergence_under_refinement():
    exact = disc_eigenvalues(DiscSpec(0.1, 0, 1))[0].lam
    errs = [abs(galerkin_spectrum(Domain2D.disc(0.1), n, 1)[2].eigenvalues[0] - exact) for n in (400, 1600)]
    assert errs[1] < errs[0]


def test_integrals(disc_small):
    mesh, _, res = disc_small
    a = 0.1
    # the k = 1 pair integrates to zero by symmetry
    assert abs(eigfun_integral(res, mesh, 1)) <= 1e-3 * a
    assert abs(eigfun_integral(res, mesh, 2)) <= 1e-3 * a
    exact = disc_eigenvalues(DiscSpec(a, 0, 1))[0].int_normalized
    assert eigfun_integral(res, mesh, 0) == pytest.approx(exact, rel=0.1)
    sq_mesh, _, sq = galerkin_spectrum(Domain2D.square(1.0), 100, 2)
    assert eigfun_integral(sq, sq_mesh, 0) > 0


def test_eigenvectors_orthonormal(disc_small):
    mesh, _, res = disc_small
    v = res.eigenvectors
    assert np.allclose(v.T @ (mesh.areas[:, None] * v), np.eye(v.shape[1]), atol=1e-10)


def test_spectrum_errors(disc_small):
    mesh, matrix, _ = disc_small
    with pytest.raises(DomainError):
        spectrum(matrix, 0)
    with pytest.raises(DomainError):
        spectrum(matrix, matrix.n + 1)
    bare = spectrum(matrix, 2, keep_vectors=False)
    with pytest.raises(StateError):
        eigfun_integral(bare, mesh, 0)
    with pytest.raises(DomainError):
        eigfun_integral(spectrum(matrix, 2), mesh, 5)


@settings(max_examples=8)
@given(st.floats(0.05, 5.0))
def test_scaling_law_on_meshes(s):
    # x -> s x: each entry picks up s**4 and the kernel shifts by -log(s)/(2 pi)
    mesh = build_mesh(Domain2D.square(1.0), 36)
    a = assemble(mesh).entries
    b = assemble(mesh.scaled(s)).entries
    m = mesh.areas
    expected = s**4 * (a - math.log(s) / (2 * math.pi) * np.outer(m, m))
    assert np.allclose(b, expected, rtol=1e-11, atol=1e-14 * np.abs(expected).max())


# --- monotonicity ------------------------------------------------------------


def test_closed_form_monotonicity():
    rep = monotonicity_check(Domain2D.disc(0.5), Domain2D.disc(1.0), count=10, backend="closed-form")
    assert rep.all_pass
    assert len(rep.modes) == 10


def test_square_inside_disc():
    rep = monotonicity_check(Domain2D.square(1.0), Domain2D.disc(0.75), count=10, cells=400)
    assert rep.all_pass
    d = rep.to_dict()
    assert d["backend"] == "galerkin" and d["all_pass"] is True and len(d["modes"]) == 10


def test_containment_violation():
    with pytest.raises(PreconditionError):
        check_containment(Domain2D.square(2.0), Domain2D.disc(0.75))
    with pytest.raises(PreconditionError):
        monotonicity_check(Domain2D.disc(1.0), Domain2D.disc(0.5), backend="closed-form")


def test_nested_rayleigh():
    rep = nested_rayleigh_check()
    assert rep.submatrix_mismatch == 0.0
    assert rep.ordering_pass and rep.quotient_pass and rep.all_pass
    assert np.all(rep.inner_eigenvalues <= rep.outer_eigenvalues)
