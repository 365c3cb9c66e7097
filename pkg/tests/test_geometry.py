import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sqc_lab.core import RngSeed
from sqc_lab.geometry import (AffineImage, Box, ClosedBall, FullSpace, Interval, LinearMap, PointTag, Region,
                              T_HIGH, T_LOW, classify, iter_triple_blocks, min_modulus, sample_point, sample_triples)
from sqc_lab.loci import SinglePoint, Sphere

DOMAINS = [
    Interval(0.0, 1.0),
    Box(np.array([0.0, -1.0]), np.array([1.0, 2.0])),
    ClosedBall(np.zeros(2), 1.0),
    ClosedBall(np.array([1.0, -1.0, 0.5]), 0.5),
    AffineImage(LinearMap(np.array([[2.0, 1.0], [0.0, 3.0]]), np.array([1.0, -2.0])), ClosedBall(np.zeros(2), 1.0)),
]


def test_classify_examples():
    ball = ClosedBall(np.zeros(2), 1.0)
    assert classify(ball, [0.5, 0.0]).tag is PointTag.INTERIOR
    assert classify(ball, [1.0, 0.0]).tag is PointTag.BOUNDARY
    assert classify(Interval(0.0, 1.0), [2.0]).tag is PointTag.OUTSIDE
    with pytest.raises(ValueError):
        classify(ball, [1.0])
    with pytest.raises(ValueError):
        classify(ball, [0.0, 0.0], tol=0.0)


def test_constructor_invariants():
    with pytest.raises(ValueError):
        Interval(1.0, 1.0)
    with pytest.raises(ValueError):
        Box(np.zeros(2), np.array([1.0, 0.0]))
    with pytest.raises(ValueError):
        ClosedBall(np.zeros(2), 0.0)
    with pytest.raises(ValueError):
        LinearMap(np.array([[1.0, 2.0], [2.0, 4.0]]))


def test_sample_point_examples():
    rng = RngSeed(1).generator()
    p = sample_point(ClosedBall(np.zeros(2), 1.0), "boundary", rng)
    assert abs(np.linalg.norm(p) - 1.0) < 1e-12
    p = sample_point(Interval(0.0, 1.0), "interior", rng)
    assert 0.0 < p[0] < 1.0
    p = sample_point(Box(np.zeros(2), np.ones(2)), "anywhere", rng)
    assert np.all((0 <= p) & (p <= 1))
    with pytest.raises(ValueError):
        sample_point(FullSpace(2), Region.BOUNDARY, rng)


@pytest.mark.parametrize("domain", DOMAINS, ids=lambda d: type(d).__name__)
def test_sampled_regions_classify_back(domain):
    rng = RngSeed(3).generator()
    n = 100_000
    interior = domain.sample(rng, Region.INTERIOR, n)
    tags, _ = domain.classify_many(interior)
    assert np.all(tags == 0)
    boundary = domain.sample(rng, Region.BOUNDARY, n)
    tags, _ = domain.classify_many(boundary)
    assert np.all(tags == 1)
    anywhere = domain.sample(rng, Region.ANYWHERE, n)
    tags, _ = domain.classify_many(anywhere)
    assert np.all(tags != 2)


def test_affine_image_membership_round_trip():
    m = LinearMap(np.array([[2.0, 1.0], [0.0, 3.0]]), np.array([1.0, -2.0]))
    inner = ClosedBall(np.zeros(2), 1.0)
    img = AffineImage(m, inner)
    X = RngSeed(5).generator().uniform(-6, 6, (10_000, 2))
    np.testing.assert_array_equal(img.contains(X), inner.contains(m.backward(X)))


@pytest.mark.parametrize("A, beta", [
    (2 * np.eye(2), 0.5),
    (np.eye(4), 1.0),
    (np.diag([1.0, 3.0]), 1 / 3),
])
def test_min_modulus_examples(A, beta):
    assert min_modulus(LinearMap(A)) == pytest.approx(beta, rel=1e-10)


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=1, max_value=8), st.integers(min_value=0, max_value=2**32 - 1))
def test_min_modulus_matches_svd_and_bounds_inverse(n, seed):
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((n, n)) + n * np.eye(n)
    m = LinearMap(A)
    beta = min_modulus(m)
    # independent oracle: LAPACK singular values
    assert beta == pytest.approx(1 / np.linalg.svd(A, compute_uv=False)[0], rel=1e-6)
    V = rng.standard_normal((1000, n))
    lhs = np.linalg.norm(V @ m.inverse_matrix.T, axis=1)
    assert np.all(lhs >= beta * np.linalg.norm(V, axis=1) - 1e-8)


@pytest.mark.parametrize("domain", DOMAINS + [FullSpace(3)], ids=lambda d: type(d).__name__)
def test_triple_contract(domain):
    blk = sample_triples(domain, 5000, seed=11, min_pair_distance=1e-6)
    assert len(blk) == 5000
    assert np.all(domain.contains(blk.X)) and np.all(domain.contains(blk.Y))
    assert np.all(domain.contains(blk.Z))
    assert np.all(np.linalg.norm(blk.X - blk.Y, axis=1) >= 1e-6)
    assert np.all((blk.T > T_LOW) & (blk.T < T_HIGH))
    idx = np.arange(5000) % 100
    assert np.all(blk.T[idx == 0] == 0.5) and np.all(blk.T[idx == 1] == 0.1) and np.all(blk.T[idx == 2] == 0.9)


def test_small_count_and_determinism():
    a = sample_triples(ClosedBall(np.zeros(2), 1.0), 10, seed=4)
    b = sample_triples(ClosedBall(np.zeros(2), 1.0), 10, seed=4)
    assert len(a) == 10
    np.testing.assert_array_equal(a.X, b.X)
    np.testing.assert_array_equal(a.T, b.T)
    with pytest.raises(ValueError):
        sample_triples(FullSpace(1), 0)


def test_longer_stream_extends_shorter_one():
    short = sample_triples(FullSpace(2), 2500, seed=9)
    long = sample_triples(FullSpace(2), 6000, seed=9)
    np.testing.assert_array_equal(short.X, long.X[:2500])


def test_stress_sets_concentrate_samples():
    sph = Sphere(1.0, np.zeros(2))
    blk = sample_triples(FullSpace(2), 1000, stress_sets=[sph], seed=2)
    near = [np.abs(np.linalg.norm(P, axis=1) - 1.0) <= 1e-3 for P in (blk.X, blk.Y, blk.Z)]
    assert np.sum(near[0] | near[1] | near[2]) >= 300

    pt = SinglePoint([0.5])
    blk = sample_triples(Interval(0.0, 1.0), 1000, stress_sets=[pt], seed=2)
    near = [np.abs(P[:, 0] - 0.5) <= 1e-3 for P in (blk.X, blk.Y, blk.Z)]
    assert np.sum(near[0] | near[1] | near[2]) >= 300


def test_stress_dimension_mismatch():
    with pytest.raises(ValueError):
        next(iter_triple_blocks(FullSpace(2), 10, [SinglePoint([0.0])]))
