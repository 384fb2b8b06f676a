"""Scalar line minimization: closed form, global pencil search, limit lemma."""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

import _oracles
from bjorth import (
    Field,
    InputError,
    Matrix,
    Vector,
    global_inf_lambda,
    inner_inf,
    limit_lemma_check,
    operator_norm,
)


def cvec(xs) -> Vector:
    return Vector(Field.COMPLEX, np.array(xs, dtype=complex))


def rvec(xs) -> Vector:
    return Vector(Field.REAL, np.array(xs, dtype=float))


def cmat(rows) -> Matrix:
    return Matrix(Field.COMPLEX, np.array(rows, dtype=complex))


def rmat(rows) -> Matrix:
    return Matrix(Field.REAL, np.array(rows, dtype=float))


def seeded_vec(n, seed, complex_field=True):
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    x = rng.standard_normal(n)
    if complex_field:
        x = x + 1j * rng.standard_normal(n)
    return x


# ------------------------------------------------------------------ inner_inf


def test_inner_inf_orthogonal_pair():
    res = inner_inf(rvec([1.0, 0.0]), rvec([0.0, 1.0]))
    assert res.value == 1.0
    assert res.lambda_star == 0.0


def test_inner_inf_parallel_pair():
    res = inner_inf(cvec([1.0, 0.0]), cvec([1.0, 0.0]))
    assert res.value == 0.0
    assert res.lambda_star == -1.0 + 0j


def test_inner_inf_zero_direction():
    res = inner_inf(rvec([3.0, 4.0]), rvec([0.0, 0.0]))
    assert res.value == 5.0
    assert res.lambda_star == 0.0


def test_inner_inf_against_frozen_grid():
    # frozen: vector_grid_min((1,1)/sqrt(2), e1, radius=2, step=1e-3)
    u = cvec(np.array([1.0, 1.0]) / math.sqrt(2.0))
    v = cvec([1.0, 0.0])
    res = inner_inf(u, v)
    assert abs(res.value - 0.7071067892491357) <= 1e-3
    assert abs(res.lambda_star - (-0.5 / math.sqrt(0.5))) <= 1e-6


def test_inner_inf_against_live_grid():
    for seed in (1, 2):
        u = seeded_vec(3, seed)
        u /= np.linalg.norm(u)
        v = seeded_vec(3, seed + 10)
        v /= np.linalg.norm(v)
        ref, _ = _oracles.vector_grid_min(u, v, radius=1.5, step=2e-3)
        res = inner_inf(cvec(u), cvec(v))
        assert res.value <= ref + 1e-12
        assert ref - res.value <= 3e-3


def test_inner_inf_real_lambda_type():
    res = inner_inf(rvec([1.0, 1.0]), rvec([1.0, 0.0]))
    assert isinstance(res.lambda_star, float)


def test_inner_inf_rejects_mismatch():
    with pytest.raises(InputError):
        inner_inf(rvec([1.0]), rvec([1.0, 0.0]))
    with pytest.raises(InputError):
        inner_inf(rvec([1.0, 0.0]), cvec([1.0, 0.0]))


@given(st.integers(0, 2 ** 32 - 1), st.booleans())
def test_inner_inf_is_the_minimum(seed, complex_field):
    u = seeded_vec(4, seed, complex_field)
    v = seeded_vec(4, seed + 1, complex_field)
    fld = Field.COMPLEX if complex_field else Field.REAL
    res = inner_inf(Vector(fld, u), Vector(fld, v))
    # attained at lambda_star, never beaten by sampled lambdas
    assert np.linalg.norm(u + res.lambda_star * v) == pytest.approx(res.value, abs=1e-10)
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed + 2)))
    for _ in range(16):
        lam = rng.standard_normal() * 2.0
        if complex_field:
            lam = lam + 1j * rng.standard_normal()
        assert np.linalg.norm(u + lam * v) >= res.value - 1e-12


# ----------------------------------------------------------- global_inf_lambda


def test_global_inf_orthogonal_diagonals():
    res = global_inf_lambda(cmat([[1, 0], [0, 0]]), cmat([[0, 0], [0, 1]]))
    assert res.value == pytest.approx(1.0, abs=1e-7)
    assert abs(res.lambda_star) <= 1.0 + 1e-6


def test_global_inf_against_frozen_grid():
    # frozen: pencil_grid_min_2x2(diag(2,1), I, radius=4, step=1e-3)
    res = global_inf_lambda(cmat([[2, 0], [0, 1]]), cmat([[1, 0], [0, 1]]))
    assert abs(res.value - 0.5000000000002753) <= 1e-3
    assert abs(res.lambda_star - (-1.5)) <= 1e-3


def test_global_inf_real_field_frozen_grid():
    res = global_inf_lambda(rmat([[2, 0], [0, 1]]), rmat([[1, 0], [0, 1]]))
    assert abs(res.value - 0.5) <= 1e-3
    assert isinstance(res.lambda_star, float)


def test_global_inf_zero_direction():
    a = cmat([[2, 0], [0, 1]])
    res = global_inf_lambda(a, cmat(np.zeros((2, 2))))
    assert res.value == operator_norm(a)
    assert res.lambda_star == 0


def test_global_inf_zero_base():
    res = global_inf_lambda(rmat(np.zeros((2, 2))), rmat(np.eye(2)))
    assert res.value == 0.0
    assert res.lambda_star == 0.0


def test_global_inf_rejects_bad_input():
    a = rmat([[1.0]])
    with pytest.raises(InputError):
        global_inf_lambda(a, rmat(np.eye(2)))
    with pytest.raises(InputError):
        global_inf_lambda(a, cmat([[1.0]]))
    with pytest.raises(InputError):
        global_inf_lambda(a, a, tol=0.0)


def test_global_inf_never_exceeds_norm_a():
    for seed in range(6):
        fld = Field.COMPLEX if seed % 2 else Field.REAL
        a = Matrix(fld, _oracles.seeded(3, 60 + seed, fld is Field.COMPLEX))
        b = Matrix(fld, _oracles.seeded(3, 70 + seed, fld is Field.COMPLEX))
        res = global_inf_lambda(a, b)
        assert res.value <= operator_norm(a) + 1e-12
        assert res.evaluations >= 1
        assert not res.budget_limited


def test_global_inf_scale_equivariance():
    a = cmat(_oracles.seeded(3, 80))
    b = cmat(_oracles.seeded(3, 81))
    base = global_inf_lambda(a, b).value
    for c in (0.25, 7.0):
        scaled = global_inf_lambda(
            Matrix(a.field, c * a.data), Matrix(b.field, c * b.data)).value
        assert abs(scaled - c * base) <= 1e-8 * max(1.0, c * base)


def test_global_inf_matches_live_grid_3x3_real():
    a = _oracles.seeded(3, 90, complex_field=False)
    b = _oracles.seeded(3, 91, complex_field=False)
    ref, _ = _oracles.pencil_grid_min_eigh(a, b, radius=6.0, step=1e-3)
    res = global_inf_lambda(Matrix(Field.REAL, a), Matrix(Field.REAL, b))
    assert res.value <= ref + 1e-9
    assert ref - res.value <= 1e-3


def test_global_inf_budget_flag():
    a = cmat(_oracles.seeded(4, 95))
    b = cmat(_oracles.seeded(4, 96))
    full = global_inf_lambda(a, b)
    tight = global_inf_lambda(a, b, budget=8)
    assert tight.budget_limited
    assert tight.evaluations <= 8
    assert full.value - 1e-12 <= tight.value <= operator_norm(a) + 1e-12


def test_pencil_norm_is_midpoint_convex():
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(17)))
    a = cmat(_oracles.seeded(3, 97))
    b = cmat(_oracles.seeded(3, 98))

    def f(lam):
        return operator_norm(Matrix(Field.COMPLEX, a.data + lam * b.data))

    for _ in range(20):
        l1 = complex(rng.standard_normal(), rng.standard_normal())
        l2 = complex(rng.standard_normal(), rng.standard_normal())
        assert f(0.5 * (l1 + l2)) <= 0.5 * (f(l1) + f(l2)) + 1e-10


# ------------------------------------------------------------ limit_lemma_check


def test_limit_lemma_zero_scalar():
    assert limit_lemma_check(0.0, 1.0) is True


def test_limit_lemma_rejects_order_one_scalar():
    assert limit_lemma_check(1.0, 1.0) is False


def test_limit_lemma_rejects_small_imaginary():
    assert limit_lemma_check(1e-2j, 1.0) is False


def test_limit_lemma_resolution_floor():
    # below the smallest sampled magnitude the violation is invisible
    assert limit_lemma_check(1e-9, 1.0) is True


def test_limit_lemma_validation():
    with pytest.raises(InputError):
        limit_lemma_check(0.0, -1.0)
    with pytest.raises(InputError):
        limit_lemma_check(0.0, 1.0, samples=3)


@given(st.floats(0.0, 2.0 * math.pi, allow_nan=False),
       st.sampled_from([1e-6, 1e-3, 1.0, 1e3]))
def test_limit_lemma_rejects_any_visible_phase(phase, mag):
    z = mag * complex(math.cos(phase), math.sin(phase))
    assert limit_lemma_check(z, 1.0) is False
