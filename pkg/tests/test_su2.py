"""Polyadic SU(2): products, querelements, identities, traces, parameter laws."""

import json

import numpy as np
import pytest

from polysigma import ArityError, DomainError, ValidationError
from polysigma.matrices import BlockCyclicMatrix, det, hermitian, trace
from polysigma.su2 import (
    PolyadicSU2Element,
    SU2Params,
    binary_param_mul,
    binary_su2_matrix,
    det_law_check,
    identity_element,
    invariant_i2,
    nary_product,
    polyadic_identity,
    polyadic_trace,
    querelement,
    random_su2_params,
    ternary_idempotent,
    ternary_param_mul,
    to_matrix,
)

from conftest import assert_close


def dense_product(mats):
    out = mats[0].dense()
    for m in mats[1:]:
        out = out @ m.dense()
    return out


# ---------------------------------------------------------------------------
# construction


def test_params_validation():
    with pytest.raises(ValidationError):
        SU2Params(1.0, (0.5, 0.0, 0.0))
    with pytest.raises(ValidationError):
        SU2Params(float("nan"), (0.0, 0.0, 0.0))
    SU2Params(1.0 + 4e-10, (0.0, 0.0, 0.0))  # within file round-trip tolerance


def test_to_matrix_identity_blocks():
    for n in (2, 3, 5):
        e = PolyadicSU2Element(n, (SU2Params(1.0, (0, 0, 0)),) * (n - 1))
        assert to_matrix(e).allclose(identity_element(n), 0.0)
    e3 = identity_element(3)
    assert nary_product([e3] * 3, 3).allclose(e3, 0.0)


def test_to_matrix_binary_is_single_block():
    p = SU2Params(0.5, (0.5, 0.5, 0.5))
    m = to_matrix(PolyadicSU2Element(2, (p,)))
    assert m.dim == 2
    assert_close(m.dense(), p.block(), 0.0)


def test_to_matrix_ternary_layout():
    # explicit 4x4 layout: zero diagonal blocks, block 1 upper right,
    # block 2 lower left, each x0 + i x.sigma
    a = SU2Params(0.5, (0.5, -0.5, 0.5))
    b = SU2Params(0.0, (0.6, 0.8, 0.0))
    dense = to_matrix(PolyadicSU2Element(3, (a, b))).dense()

    def blk(p):
        x1, x2, x3 = p.x
        return np.array([[p.x0 + 1j * x3, x2 + 1j * x1],
                         [-x2 + 1j * x1, p.x0 - 1j * x3]])

    expected = np.zeros((4, 4), dtype=complex)
    expected[0:2, 2:4] = blk(a)
    expected[2:4, 0:2] = blk(b)
    assert_close(dense, expected, 0.0)


def test_block_unitarity(rng):
    e = PolyadicSU2Element.random(rng, 4)
    for b in to_matrix(e).blocks:
        assert_close(hermitian(b) @ b, np.eye(2), 1e-12)


def test_json_roundtrip(rng):
    e = PolyadicSU2Element.random(rng, 4)
    back = PolyadicSU2Element.from_dict(json.loads(json.dumps(e.to_dict())))
    assert to_matrix(back).allclose(to_matrix(e), 0.0)


# ---------------------------------------------------------------------------
# n-ary product and querelement


def test_nary_product_requires_allowed_count(rng):
    e = to_matrix(PolyadicSU2Element.random(rng, 3))
    for count in (1, 2, 4, 6):
        with pytest.raises(ArityError):
            nary_product([e] * count, 3)
    nary_product([e] * 3, 3)
    nary_product([e] * 5, 3)


def test_nary_product_matches_dense(rng):
    for n, l in ((3, 1), (3, 2), (4, 1), (4, 2), (5, 1), (5, 2)):
        count = l * (n - 1) + 1
        mats = [to_matrix(PolyadicSU2Element.random(rng, n)) for _ in range(count)]
        got = nary_product(mats, n)
        assert_close(got.dense(), dense_product(mats), 1e-12)
        # closure: result block-cyclic with unitary blocks
        for b in got.blocks:
            assert_close(hermitian(b) @ b, np.eye(2), 1e-12)


def test_total_associativity_ternary(rng):
    mats = [to_matrix(PolyadicSU2Element.random(rng, 3)) for _ in range(5)]
    b1 = nary_product([nary_product(mats[:3], 3), mats[3], mats[4]], 3)
    b2 = nary_product([mats[0], nary_product(mats[1:4], 3), mats[4]], 3)
    b3 = nary_product([mats[0], mats[1], nary_product(mats[2:], 3)], 3)
    assert b1.allclose(b2, 1e-12) and b2.allclose(b3, 1e-12)


def test_querelement_is_inverse_at_arity_3(rng):
    m = to_matrix(PolyadicSU2Element.random(rng, 3))
    assert_close(querelement(m).dense(), np.linalg.inv(m.dense()), 1e-12)


def test_querelement_every_position(rng):
    for n in (3, 4, 5):
        m = to_matrix(PolyadicSU2Element.random(rng, n))
        mq = querelement(m)
        for pos in range(n):
            factors = [m] * n
            factors[pos] = mq
            assert nary_product(factors, n).allclose(m, 1e-12)


def test_querelement_of_identity():
    for n in (3, 4):
        e = identity_element(n)
        assert querelement(e).allclose(e, 0.0)


def test_querelement_singular_block():
    m = BlockCyclicMatrix(3, (np.eye(2), np.zeros((2, 2))))
    with pytest.raises(DomainError):
        querelement(m)


# ---------------------------------------------------------------------------
# polyadic identities


def test_identity_validation():
    with pytest.raises(ValidationError):
        polyadic_identity(3, "left", (2.0, 1.0))  # product != 1
    with pytest.raises(ValidationError):
        polyadic_identity(3, "left", (0.0, 1.0))
    with pytest.raises(ValidationError):
        polyadic_identity(3, "middle", (1.0, 1.0))


def test_left_right_identity_laws(rng):
    for n in (3, 4):
        coeffs = rng.uniform(0.5, 2.0, size=n - 1)
        coeffs[-1] = 1.0 / np.prod(coeffs[:-1])
        el = polyadic_identity(n, "left", coeffs)
        er = polyadic_identity(n, "right", coeffs)
        m = to_matrix(PolyadicSU2Element.random(rng, n))
        assert nary_product([el] * (n - 1) + [m], n).allclose(m, 1e-12)
        assert nary_product([m] + [er] * (n - 1), n).allclose(m, 1e-12)


def test_identity_subgroup_law(rng):
    # the n-ary product of n left identities is again one: coefficient
    # product stays 1
    n = 4
    ids = []
    for _ in range(n):
        c = rng.uniform(0.5, 2.0, size=n - 1)
        c[-1] = 1.0 / np.prod(c[:-1])
        ids.append(polyadic_identity(n, "left", c))
    prod = nary_product(ids, n)
    coeffs = [b[0, 0].real for b in prod.blocks]
    for b, c in zip(prod.blocks, coeffs):
        assert_close(b, c * np.eye(2), 1e-12)
    assert abs(np.prod(coeffs) - 1.0) <= 1e-9


def test_no_middle_identity_for_generic_element():
    # fixed generic witness: distinct blocks, deterministically seeded
    rng = np.random.default_rng(7)
    n = 3
    m = to_matrix(PolyadicSU2Element.random(rng, n))
    e = identity_element(n)
    mid = nary_product([e, m, e], n)
    assert not mid.allclose(m, 1e-6)
    # the blocks come back cyclically shifted by one position
    assert_close(mid.blocks[0], m.blocks[1], 1e-12)
    assert_close(mid.blocks[1], m.blocks[0], 1e-12)
    # the naive sandwich placement fails as well
    assert not nary_product([m, e, m], n).allclose(m, 1e-6)


def test_middle_identity_for_equal_blocks(rng):
    p = random_su2_params(rng)
    m = to_matrix(PolyadicSU2Element.restricted(p, 3))
    e = identity_element(3)
    assert nary_product([e, m, e], 3).allclose(m, 1e-12)


def test_ternary_idempotent():
    eid = ternary_idempotent(2.0)
    assert_close(eid.blocks[0], 2.0 * np.eye(2), 0.0)
    assert_close(eid.blocks[1], 0.5 * np.eye(2), 0.0)
    assert nary_product([eid] * 3, 3).allclose(eid, 1e-12)


# ---------------------------------------------------------------------------
# traces and determinant


def test_polyadic_trace_of_identities(rng):
    n = 4
    coeffs = np.array([2.0, 3.0, 1.0 / 6.0])
    el = polyadic_identity(n, "left", coeffs)
    assert polyadic_trace(el) == pytest.approx(2 * coeffs.sum())
    assert abs(trace(el.dense())) == 0.0


def test_polyadic_trace_binary_is_ordinary(rng):
    e = PolyadicSU2Element.random(rng, 2)
    m = to_matrix(e)
    assert polyadic_trace(m) == pytest.approx(trace(m.dense()))


def test_polyadic_trace_of_su2_element(rng):
    for n in (3, 5):
        e = PolyadicSU2Element.random(rng, n)
        expected = 2 * sum(p.x0 for p in e.params)
        assert polyadic_trace(to_matrix(e)) == pytest.approx(expected)


def test_det_law(rng):
    # det factorizes over the blocks, with no arity-dependent sign: the block
    # cycle's permutation sign is squared by the 2x2 block size
    for n in (3, 4, 5):
        assert det_law_check(PolyadicSU2Element.random(rng, n)) == pytest.approx(1.0, abs=1e-10)


def test_block_diagonal_det_trace_split(rng):
    a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    b = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    m = np.zeros((4, 4), dtype=complex)
    m[:2, :2] = a
    m[2:, 2:] = b
    assert abs(det(m) - det(a) * det(b)) <= 1e-10
    assert abs(trace(m) - (trace(a) + trace(b))) == 0.0


# ---------------------------------------------------------------------------
# parameter-space products


def test_binary_param_mul_identity(rng):
    p = random_su2_params(rng)
    e = SU2Params(1.0, (0, 0, 0))
    assert binary_param_mul(e, p) == p
    assert binary_param_mul(p, e) == p


def test_binary_param_mul_quaternion_units():
    i = SU2Params(0.0, (1.0, 0.0, 0.0))
    j = SU2Params(0.0, (0.0, 1.0, 0.0))
    k = binary_param_mul(i, j)
    assert k.x0 == pytest.approx(0.0)
    assert tuple(k.x) == pytest.approx((0.0, 0.0, 1.0))


def test_binary_param_mul_oracle(rng):
    worst = 0.0
    for _ in range(1000):
        p, q = random_su2_params(rng), random_su2_params(rng)
        r = binary_param_mul(p, q)
        dev = np.abs(binary_su2_matrix(p) @ binary_su2_matrix(q)
                     - binary_su2_matrix(r)).max()
        worst = max(worst, float(dev))
        assert abs(r.norm_sq() - 1.0) <= 1e-10
    assert worst <= 1e-12


def test_binary_layout_is_block_layout_with_reversed_vector(rng):
    # the two 2x2 realizations differ by the x1 <-> x3 relabeling
    p = random_su2_params(rng)
    rev = SU2Params(p.x0, p.x[::-1])
    assert_close(binary_su2_matrix(p), rev.block(), 0.0)


def test_ternary_param_mul_identity():
    e = SU2Params(1.0, (0, 0, 0))
    out = ternary_param_mul((e, e), (e, e), (e, e))
    assert out == (e, e)


def test_ternary_param_mul_oracle(rng):
    worst = 0.0
    for _ in range(1000):
        elems = [PolyadicSU2Element.random(rng, 3) for _ in range(3)]
        res = ternary_param_mul(*[tuple(e.params) for e in elems])
        out = PolyadicSU2Element(3, res)
        dev = np.abs(dense_product([to_matrix(e) for e in elems])
                     - to_matrix(out).dense()).max()
        worst = max(worst, float(dev))
        assert abs(res[0].norm_sq() - 1.0) <= 1e-10
        assert abs(res[1].norm_sq() - 1.0) <= 1e-10
    assert worst <= 1e-12


def test_ternary_param_mul_querelement_relation(rng):
    e = PolyadicSU2Element.random(rng, 3)
    m = to_matrix(e)
    mq = querelement(m)
    qparams = tuple(
        SU2Params(b[0, 0].real, (b[0, 1].imag, b[0, 1].real, b[0, 0].imag))
        for b in mq.blocks
    )
    res = ternary_param_mul(tuple(e.params), tuple(e.params), qparams)
    assert to_matrix(PolyadicSU2Element(3, res)).allclose(m, 1e-12)


def test_invariant_i2(rng):
    p = random_su2_params(rng)
    assert invariant_i2(p, p) == pytest.approx(1.0)
    e = SU2Params(1.0, (0, 0, 0))
    ex = SU2Params(0.0, (1.0, 0.0, 0.0))
    assert invariant_i2(e, ex) == pytest.approx(0.0)
    for _ in range(50):
        a, b = random_su2_params(rng), random_su2_params(rng)
        tr = np.trace(hermitian(a.block()) @ b.block())
        assert invariant_i2(a, b) == pytest.approx(0.5 * tr.real, abs=1e-12)
