"""Code-model checks: constructions, axioms, distance, overlap diagnostics.

Expected values marked as derived are recomputed here by independent
brute-force oracles (full codeword enumeration, coset search) rather
than by the implementation under test.
"""

import random

import pytest

from qsticker.codes import (
    OperatorSet,
    contained_logical_count,
    crowd_numbers,
    css_code,
    derive_css_logicals,
    direct_sum,
    exact_distance,
    hgp,
    redundancy_number,
    repetition_check,
    support_union,
    validate_code,
)
from qsticker.gf2 import Gf2Matrix, kernel_basis, rank, row_basis


# -- oracles -----------------------------------------------------------


def span_vectors(m):
    out = {0}
    for b in row_basis(m).bits:
        out |= {v ^ b for v in out}
    return out


def distance_oracle(code):
    """Exhaustive minimum over all codewords of both species."""
    best = None
    for h, j in ((code.hx, code.jx), (code.hz, code.jz)):
        for v in span_vectors(kernel_basis(h)):
            if v and j.mul_vec(v) != 0:
                w = v.bit_count()
                if best is None or w < best:
                    best = w
    return best


def redundancy_oracle(code, sigma):
    """Brute force over all logical classes and all stabiliser dressings."""
    support = 0
    for r in sigma.vectors.bits:
        support |= r
    dressings = span_vectors(code.z_stabilizer_span())
    passing = []
    for x in range(1 << code.k):
        tau = 0
        for i in range(code.k):
            if (x >> i) & 1:
                tau ^= code.jz.bits[i]
        if any((tau ^ s) & ~support == 0 for s in dressings):
            passing.append(sum(((x >> i) & 1) << i for i in range(code.k)))
    k_n = rank(Gf2Matrix(passing, code.k)) if passing else 0
    stab = code.z_stabilizer_span()
    q = rank(sigma.vectors.vstack(stab)) - rank(stab)
    return k_n - q


def random_css(rng, n, r1, r2):
    """Seeded CSS pair: random hz, then hx rows drawn from ker hz."""
    while True:
        hz = Gf2Matrix(
            [sum((1 << j) for j in range(n) if rng.random() < 0.4) for _ in range(r2)],
            n,
        )
        kx = kernel_basis(hz)
        if kx.rows == 0:
            continue
        rows = []
        for _ in range(r1):
            acc = 0
            for b in kx.bits:
                if rng.random() < 0.5:
                    acc ^= b
            rows.append(acc)
        hx = Gf2Matrix(rows, n)
        try:
            return css_code(hx, hz)
        except ValueError:
            continue


# -- repetition code ---------------------------------------------------


def test_repetition_check_matches_printed_forms():
    lam5 = repetition_check(5)
    assert lam5.to_lists() == [
        [1, 1, 0, 0, 0],
        [0, 1, 1, 0, 0],
        [0, 0, 1, 1, 0],
        [0, 0, 0, 1, 1],
    ]
    lam5t = repetition_check(5, truncated=True)
    assert lam5t.to_lists() == [
        [1, 1, 0, 0],
        [0, 1, 1, 0],
        [0, 0, 1, 1],
        [0, 0, 0, 1],
    ]
    assert repetition_check(2).to_lists() == [[1, 1]]
    with pytest.raises(ValueError):
        repetition_check(1)


# -- hypergraph product ------------------------------------------------


def test_hgp_dimensions_and_parameters():
    lam3 = repetition_check(3)
    c = hgp(lam3, lam3)
    assert c.n == 9 + 4 == 13
    assert c.hx.rows == 6 and c.hz.rows == 6
    assert c.k == 1
    assert validate_code(c).ok
    assert distance_oracle(c) == 3
    assert exact_distance(c).value == 3

    c2 = hgp(repetition_check(2), repetition_check(2))
    assert (c2.n, c2.k) == (5, 1)
    assert distance_oracle(c2) == 2
    assert exact_distance(c2).value == 2


def test_hgp_zero_row_input_degenerates():
    a = Gf2Matrix.zeros(0, 3)
    b = repetition_check(3)
    c = hgp(a, b)
    assert c.hx.rows == 0
    assert c.n == 9
    assert validate_code(c).ok


def test_hgp_exact_distance_family():
    for m in (2, 3, 4):
        c = hgp(repetition_check(m), repetition_check(m))
        res = exact_distance(c)
        assert res.exact and res.value == m


def test_derive_css_logicals_trivial_code():
    e = Gf2Matrix.zeros(0, 3)
    jx, jz = derive_css_logicals(e, e)
    assert jx == Gf2Matrix.identity(3)
    assert jz == Gf2Matrix.identity(3)


def test_derive_css_logicals_pairing_random():
    rng = random.Random(42)
    for _ in range(10):
        c = random_css(rng, 10, 3, 3)
        assert validate_code(c).ok
        assert c.jx.mul_transpose(c.jz) == Gf2Matrix.identity(c.k)


def test_standard_form_logicals_have_unit_weight_on_z_supports():
    # every jx row must meet the union of jz supports in <= 1 position
    rng = random.Random(3)
    for _ in range(10):
        c = random_css(rng, 12, 4, 4)
        zsupp = 0
        for r in c.jz.bits:
            zsupp |= r
        for r in c.jx.bits:
            assert (r & zsupp).bit_count() <= 1


# -- validation --------------------------------------------------------


def test_validate_flags_broken_pairing():
    from dataclasses import replace

    c = hgp(repetition_check(3), repetition_check(3))
    bad = replace(c, jz=Gf2Matrix([c.hz.bits[0]], c.n))  # stabiliser row as logical
    rep = validate_code(bad)
    assert not rep.ok
    assert any("jx @ jz^T" in f.name or "ker decomposition" in f.name
               for f in rep.failures())


def test_validate_flags_noncommuting_checks():
    from qsticker.codes import SubsystemCode

    code = SubsystemCode(hx=Gf2Matrix([0b11], 2), hz=Gf2Matrix([0b01], 2),
                         jx=Gf2Matrix.zeros(0, 2), jz=Gf2Matrix.zeros(0, 2),
                         fx=Gf2Matrix.zeros(0, 2), fz=Gf2Matrix.zeros(0, 2))
    rep = validate_code(code)
    assert not rep.ok
    assert any("hx @ hz^T" in f.name and f.witness for f in rep.failures())


def test_k0_distance_unknown_by_convention():
    lam2 = repetition_check(2)
    c = hgp(lam2, lam2)
    from dataclasses import replace

    k0 = replace(c, jx=Gf2Matrix.zeros(0, c.n), jz=Gf2Matrix.zeros(0, c.n),
                 fx=c.jx, fz=c.jz)
    res = exact_distance(k0)
    assert res.value is None and not res.exact
    assert "k=0" in res.note


def test_distance_budget_returns_labelled_estimate():
    c = hgp(repetition_check(4), repetition_check(4))
    res = exact_distance(c, cap=2, budget=10)
    assert res.value is None and not res.exact
    assert "estimate" in res.note
    if res.upper_bound is not None:
        assert res.upper_bound >= 4  # true distance


# -- supports and crowd numbers -----------------------------------------


def test_support_union_examples():
    s = OperatorSet("Z", Gf2Matrix.from_rows([[0, 0, 1, 1, 0]]))
    assert support_union(s) == (2, 3)  # 0-based for 1-based {3,4}
    two = OperatorSet("Z", Gf2Matrix.from_rows([[1, 1, 0, 0], [0, 0, 1, 1]]))
    assert len(support_union(two)) == 4
    empty = OperatorSet("Z", Gf2Matrix.zeros(0, 4))
    assert support_union(empty) == ()


def test_crowd_numbers_examples():
    s = OperatorSet("Z", Gf2Matrix.from_rows([[1, 1, 0], [0, 1, 1]]))
    counts, mx = crowd_numbers(s)
    assert counts == [1, 2, 1] and mx == 2
    single = OperatorSet("Z", Gf2Matrix.from_rows([[0, 1, 0]]))
    assert crowd_numbers(single)[1] == 1
    q = 4
    allones = OperatorSet("Z", Gf2Matrix([(1 << 3) - 1] * q, 3))
    assert crowd_numbers(allones)[1] == q


def test_max_crowd_at_least_mean():
    rng = random.Random(15)
    for _ in range(20):
        n = rng.randrange(4, 12)
        rows = [sum((1 << j) for j in range(n) if rng.random() < 0.4)
                for _ in range(rng.randrange(1, 5))]
        s = OperatorSet("Z", Gf2Matrix(rows, n))
        counts, mx = crowd_numbers(s)
        total = sum(counts)
        assert mx * n >= total  # max >= mean, the crowd lower bound


# -- redundancy number ---------------------------------------------------


def test_redundancy_single_minimum_logical_is_zero():
    c = hgp(repetition_check(3), repetition_check(3))
    s = OperatorSet("Z", c.jz)
    assert redundancy_number(c, s) == 0
    assert redundancy_oracle(c, s) == 0


def test_redundancy_full_basis_full_support():
    hx = Gf2Matrix([0b1111], 4)
    hz = Gf2Matrix.zeros(0, 4)
    c = css_code(hx, hz)
    assert c.k == 3
    s = OperatorSet("Z", c.jz)
    assert support_union(s) == (0, 1, 2, 3)
    assert redundancy_number(c, s) == 0


def test_redundancy_contained_operator():
    # k=4 HGP code from a block-diagonal classical code; one operator
    # whose support contains another logical gives rn = 1
    lam2 = repetition_check(2)
    h = Gf2Matrix([0b0011, 0b1100], 4)
    c = hgp(h, h)
    assert c.k == 4
    sigma_row = c.jz.bits[0] ^ c.jz.bits[1]
    s = OperatorSet("Z", Gf2Matrix([sigma_row], c.n))
    got = redundancy_number(c, s)
    want = redundancy_oracle(c, s)
    assert got == want == 1


def test_redundancy_rejects_non_codeword():
    c = hgp(repetition_check(3), repetition_check(3))
    bad = OperatorSet("Z", Gf2Matrix([1], c.n))
    with pytest.raises(ValueError):
        redundancy_number(c, bad)


def test_redundancy_matches_oracle_on_seeded_small_codes():
    rng = random.Random(2024)
    trials = 0
    while trials < 40:
        n = rng.randrange(5, 13)
        c = random_css(rng, n, rng.randrange(1, 4), rng.randrange(1, 4))
        if c.k == 0 or c.k > 6:
            continue
        rows = []
        for _ in range(rng.randrange(1, min(3, c.k) + 1)):
            acc = 0
            for b in c.jz.bits:
                if rng.random() < 0.5:
                    acc ^= b
            if acc:
                rows.append(acc)
        if not rows:
            continue
        s = OperatorSet("Z", Gf2Matrix(rows, c.n))
        assert redundancy_number(c, s) == redundancy_oracle(c, s)
        trials += 1


def test_direct_sum_code():
    c1 = hgp(repetition_check(2), repetition_check(2))
    c = direct_sum(c1, c1)
    assert c.n == 10 and c.k == 2
    assert validate_code(c).ok
    # the two logical blocks have disjoint supports
    assert c.jz.bits[0] & c.jz.bits[1] == 0
