from fractions import Fraction

import pytest

from app.cli.parser import parse_poly
from app.core.errors import ToolkitError
from app.core.exact_algebra import F, G, X, Y, FracPoly, x_content
from app.core.dependence import (
    ReductionState,
    StandardMonomial,
    build_dependence,
    dependence_to_dict,
    extension_degree,
    find_standard_monomial,
    leading_edge_data,
    normalize_monic,
    reduce_pair,
    verify_dependence,
)


# ---- 标准单项式 ----

@pytest.mark.parametrize("target, s, expected", [
    (6, -1, StandardMonomial(3, ())),
    (4, 0, StandardMonomial(2, (0,))),
    (5, 0, StandardMonomial(1, (1,))),
])
def test_find_standard_monomial(target, s, expected):
    state = ReductionState.from_degrees(2, [3])
    assert state.multipliers == [2]
    monomial, lead = find_standard_monomial(state, target, s)
    assert monomial == expected
    assert lead == 1


def test_reduction_stuck():
    state = ReductionState.from_degrees(4, [2])
    with pytest.raises(ToolkitError, match="reduction stuck"):
        find_standard_monomial(state, 3, 0)
    with pytest.raises(ToolkitError, match="reduction stuck"):
        find_standard_monomial(state, -2, 0)


def test_gcd_chain():
    state = ReductionState.from_degrees(12, [8, 6, 9])
    assert state.gcds == [4, 2, 1]
    assert state.multipliers == [3, 2, 2]


# ---- 依赖关系 ----

def test_dependence_of_cusp_pair():
    dep = build_dependence(Y ** 2, Y ** 3 + Y)
    assert str(dep.P) == "G^2 - F^3 - 2*F^2 - F"
    assert (dep.a0, dep.b0, dep.nu) == (2, 3, 1)
    assert dep.edge == ((3, 0, 0), (0, 2, 0))
    assert verify_dependence(dep, Y ** 2, Y ** 3 + Y)


def test_dependence_of_parabola():
    dep = build_dependence(X + Y ** 2, Y)
    assert dep.P == G ** 2 - F + X
    assert (dep.a0, dep.b0, dep.nu) == (2, 1, 1)
    assert extension_degree(dep) == 1


def test_dependence_when_f_is_y():
    g = parse_poly("x^2*y + x + 1")
    dep = build_dependence(Y, g)
    assert dep.P == G - X ** 2 * F - X - 1


def test_dependence_transcript():
    _, state, transcript = reduce_pair(Y ** 2, Y ** 3 + Y)
    assert transcript[0].kind == "new-generator"
    assert transcript[1].kind == "head"
    assert transcript[-1].kind == "zero"
    assert state.degrees == [3]
    assert all("f^-" not in (step.monomial or "") for step in transcript)


@pytest.mark.parametrize("f, g", [
    (X, Y),
    (Y, FracPoly.zero()),
    (parse_poly("x^(1/2)*y"), Y),
    (Y + F, Y),
])
def test_dependence_rejects_bad_input(f, g):
    with pytest.raises(ToolkitError):
        build_dependence(f, g)


def test_step_budget():
    with pytest.raises(ToolkitError, match="step budget"):
        build_dependence(Y ** 2, Y ** 3 + Y, max_steps=1)


# ---- 首一化 ----

def test_normalize_monic_divides_by_monomial():
    result = normalize_monic(3 * X * G ** 3 + X ** 2 * G)
    assert result.ok
    assert result.P == G ** 3 + Fraction(1, 3) * X * G
    assert (result.c0, result.d) == (3, 1)


def test_normalize_monic_unchanged():
    P = G ** 2 - F + X
    result = normalize_monic(P)
    assert result.ok
    assert result.P == P
    assert (result.c0, result.d) == (1, 0)


def test_normalize_monic_verdict():
    result = normalize_monic((X + 1) * G ** 2 - F)
    assert not result.ok
    assert result.reason == "p_0 not a monomial"
    assert result.p0 == X + 1


def test_normalize_monic_of_zero():
    with pytest.raises(ToolkitError):
        normalize_monic(FracPoly.zero())


# ---- 校验 ----

@pytest.mark.parametrize("P, f, g, expected", [
    (G ** 2 - F ** 3, Y ** 2, Y ** 3, True),
    (G ** 2 - F ** 3, Y ** 2, Y ** 3 + Y, False),
    (G - F, X + Y, X + Y, True),
])
def test_verify_dependence(P, f, g, expected):
    assert verify_dependence(P, f, g) is expected


# ---- 首边 ----

def test_leading_edge_of_cusp():
    edge = leading_edge_data(G ** 2 - F ** 3 - 2 * F ** 2 - F, 2, 3)
    assert edge.ok
    assert (edge.a0, edge.b0, edge.nu) == (2, 3, 1)
    assert edge.edge == ((3, 0, 0), (0, 2, 0))
    assert edge.leading_form == G ** 2 - F ** 3


def test_leading_edge_of_parabola():
    edge = leading_edge_data(G ** 2 - F + X, 2, 1)
    assert edge.ok
    assert (edge.a0, edge.b0, edge.nu) == (2, 1, 1)
    assert edge.leading_form == G ** 2 - F


def test_leading_edge_not_binomial_power():
    edge = leading_edge_data(G ** 2 - F ** 2 - F, 1, 1)
    assert not edge.ok
    assert edge.reason == "not a pure binomial power"
    assert edge.nu == 2
    assert edge.edge is None


def test_dependence_to_dict():
    document = dependence_to_dict(build_dependence(X + Y ** 2, Y))
    assert document["P"] == "G^2 - F + x"
    assert document["edge"] == [[1, 0, 0], [0, 2, 0]]
    assert [1, 0, 0, "-1"] in document["terms"]
    assert document["transcript"][-1]["kind"] == "zero"


# ---- 语料库 ----

def test_corpus_dependences_verify(corpus):
    for name, f, g in corpus:
        dep = build_dependence(f, g)
        assert verify_dependence(dep, f, g), name
        deg_f = int(f.degree("y"))
        assert deg_f % int(dep.P.degree("G")) == 0, name


def test_automorphic_pairs_have_full_degree(automorphisms):
    for name, f, g in automorphisms:
        dep = build_dependence(f, g)
        assert int(dep.P.degree("G")) == int(f.degree("y")), name
        assert extension_degree(dep) == 1, name


def test_automorphic_pairs_leading_edge(automorphisms):
    for name, f, g in automorphisms:
        dep = build_dependence(f, g)
        edge = leading_edge_data(dep, int(f.degree("y")), int(g.degree("y")))
        assert edge.ok, name
        assert edge.b0 * edge.nu == int(dep.P.degree("F")), name
        assert edge.a0 * edge.nu == int(dep.P.degree("G")), name


def test_corpus_dependences_are_primitive_in_x(corpus):
    for name, f, g in corpus:
        assert x_content(build_dependence(f, g).P) == 1, name


def test_corpus_transcripts_use_nonnegative_f_powers(corpus):
    for name, f, g in corpus:
        _, _, transcript = reduce_pair(f, g)
        for step in transcript:
            if step.kind not in ("head", "reduce"):
                continue
            f_part = step.monomial.split("*")[0]
            assert f_part.startswith("f^"), name
            assert int(f_part[2:]) >= 0, name
