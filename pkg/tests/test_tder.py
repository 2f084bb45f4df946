from fractions import Fraction
from itertools import combinations

import pytest

from kvforge.scripts.cyclic import trace
from kvforge.scripts.errors import ConfigMismatchError, MalformedInputError
from kvforge.scripts.freelie import (
    AssocSeries,
    LieSeries,
    TruncationConfig,
    bracket,
    embed,
    generators,
)
from kvforge.scripts.tder import (
    APart,
    TAutElement,
    TangentialDerivation,
    apply,
    apply_assoc,
    apply_cyc,
    coface,
    compose,
    compose_all,
    exp_apply,
    exp_apply_cyc,
    inverse,
    parse_coface_spec,
    split_a_part,
    t_embed,
    t_sum,
    tder_basis,
    tder_bracket,
)


def _tder(config, *slots):
    return TangentialDerivation(config, list(slots))


def test_t12_slots():
    config = TruncationConfig(2, 4)
    x, y = generators(config)
    assert t_embed(1, 2, config).slots == (y, x)


def test_t13_kills_the_middle_generator():
    config = TruncationConfig(3, 4)
    x, y, z = generators(config)
    assert not apply(t_embed(1, 3, config), y)
    with pytest.raises(MalformedInputError):
        t_embed(2, 1, config)
    with pytest.raises(MalformedInputError):
        t_embed(1, 4, config)


def test_canonical_form_strips_own_generator():
    config = TruncationConfig(2, 4)
    x, y = generators(config)
    assert _tder(config, x, y) == TangentialDerivation.zero(config)
    assert _tder(config, x + y, x) == t_embed(1, 2, config)


def test_split_a_part():
    config = TruncationConfig(2, 3)
    x, y = generators(config)
    u, a = split_a_part(config, [x * 3 + y, x])
    assert u == t_embed(1, 2, config)
    assert a == APart((3, 0))
    assert bool(a) and not APart.zero(2)


def test_canonicalization_preserves_the_action():
    config = TruncationConfig(2, 5)
    x, y = generators(config)
    raw_slots = [x + bracket(x, y), y * 2 + x]
    u = _tder(config, *raw_slots)
    images = [bracket(g, a) for g, a in zip(generators(config), raw_slots)]
    assert apply(u, x) == images[0]
    assert apply(u, y) == images[1]
    assert apply(u, bracket(x, y)) == bracket(images[0], y) + bracket(x, images[1])


def test_t12_annihilates_x_plus_y():
    config = TruncationConfig(2, 5)
    x, y = generators(config)
    assert not apply(t_embed(1, 2, config), x + y)


def test_tder_bracket_antisymmetry_and_jacobi():
    config = TruncationConfig(2, 5)
    basis = tder_basis(config, 1) + tder_basis(config, 2)
    for u, v in combinations(basis, 2):
        assert tder_bracket(u, v) == -tder_bracket(v, u)
    for u, v, w in combinations(basis, 3):
        jacobi = (tder_bracket(u, tder_bracket(v, w)) + tder_bracket(v, tder_bracket(w, u))
                  + tder_bracket(w, tder_bracket(u, v)))
        assert not jacobi


def test_tder_bracket_is_the_commutator_of_actions():
    config = TruncationConfig(2, 5)
    x, y = generators(config)
    u = _tder(config, bracket(x, y), LieSeries.zero(config))
    v = t_embed(1, 2, config)
    a = bracket(x, bracket(x, y)) + y
    assert apply(tder_bracket(u, v), a) == apply(u, apply(v, a)) - apply(v, apply(u, a))


def test_t4_relations():
    config = TruncationConfig(4, 3)
    t = lambda *pairs: t_sum(pairs, config)
    assert not tder_bracket(t((1, 2)), t((3, 4)))
    assert not tder_bracket(t((1, 2)), t((1, 3), (2, 3)))
    assert not tder_bracket(t((1, 3)), t((1, 2), (2, 3)))
    assert not tder_bracket(t((2, 4)), t((1, 2), (1, 4)))


def test_apply_cyc_commutes_with_trace():
    config = TruncationConfig(2, 5)
    x, y = generators(config)
    u = _tder(config, bracket(x, y), x * Fraction(1, 2))
    a = AssocSeries(config, {(0, 1): 1, (0, 0, 1): 2, (1, 1, 0): -1})
    assert apply_cyc(u, trace(a)) == trace(apply_assoc(u, a))


def test_coface_examples():
    config = TruncationConfig(2, 3)
    config3 = TruncationConfig(3, 3)
    t12 = t_embed(1, 2, config)
    assert coface(t12, "1,23") == t_sum([(1, 2), (1, 3)], config3)
    assert coface(t12, "12,3") == t_sum([(1, 3), (2, 3)], config3)
    assert coface(t12, "2,3") == t_embed(2, 3, config3)
    assert coface(t12, "1,2") == t_embed(1, 2, config3)


def test_coface_keeps_generator_names():
    config = TruncationConfig(2, 3, ("a", "b"))
    a, b = generators(config)
    lifted = coface(_tder(config, b, a), "1,23")
    assert lifted.config.generator_names == ("a", "b", "x")


def test_coface_is_a_lie_homomorphism():
    config = TruncationConfig(2, 4)
    x, y = generators(config)
    u = _tder(config, bracket(x, y), x)
    v = _tder(config, y, bracket(x, y) * 2)
    for spec in ("1,2", "2,3", "1,23", "12,3"):
        assert coface(tder_bracket(u, v), spec) == tder_bracket(coface(u, spec), coface(v, spec))


def test_parse_coface_spec_errors():
    assert parse_coface_spec("1,23", 2) == [(0,), (1, 2)]
    for bad in ("1", "1,1", "1,4", "a,2", "1,"):
        with pytest.raises(MalformedInputError):
            parse_coface_spec(bad, 2)


def test_tder_basis_sizes():
    config = TruncationConfig(2, 4)
    assert len(tder_basis(config, 1)) == 2
    assert len(tder_basis(config, 2)) == 2
    assert len(tder_basis(config, 3)) == 4
    assert len(tder_basis(TruncationConfig(3, 3), 1)) == 6


def test_compose_is_g_first_then_f():
    config = TruncationConfig(2, 5)
    x, y = generators(config)
    F = TAutElement.exp_of(t_embed(1, 2, config))
    G = TAutElement.exp_of(_tder(config, bracket(x, y), x * Fraction(1, 3)))
    a = x + bracket(x, y)
    assert exp_apply(compose(F, G), a) == exp_apply(F, exp_apply(G, a))


def test_inverse_and_identity():
    config = TruncationConfig(2, 5)
    x, y = generators(config)
    F = TAutElement.exp_of(_tder(config, bracket(x, y), x))
    assert compose(F, inverse(F)).is_identity()
    assert compose(TAutElement.identity(config), F) == F
    assert compose_all([F, inverse(F), F]) == F
    assert exp_apply(inverse(F), exp_apply(F, y)) == y


def test_exp_apply_moves_generators_only_in_higher_degree():
    config = TruncationConfig(2, 6)
    x, y = generators(config)
    F = TAutElement.exp_of(_tder(config, bracket(x, y), LieSeries.zero(config)))
    moved = exp_apply(F, x) - x
    assert moved.min_degree() == 3
    assert exp_apply(F, y) == y


def test_exp_apply_cyc_matches_trace_of_images():
    config = TruncationConfig(2, 4)
    x, y = generators(config)
    F = TAutElement.exp_of(_tder(config, y, LieSeries.zero(config)))
    c = trace(embed(x) * embed(y))
    Fx, Fy = exp_apply(F, x), exp_apply(F, y)
    assert exp_apply_cyc(F, c) == trace(embed(Fx) * embed(Fy))


def test_mismatched_configs():
    u = TangentialDerivation.zero(TruncationConfig(2, 3))
    v = TangentialDerivation.zero(TruncationConfig(2, 4))
    with pytest.raises(ConfigMismatchError):
        u + v
    with pytest.raises(ConfigMismatchError):
        TangentialDerivation(TruncationConfig(2, 3), [LieSeries.zero(TruncationConfig(2, 3))])


def test_single_exponential_conjugates_each_generator():
    config = TruncationConfig(2, 6)
    x, y = generators(config)
    a = bracket(x, y)
    F = TAutElement.exp_of(_tder(config, a, LieSeries.zero(config)))
    # e^u(x) = e^-a x e^a up to terms of degree 2 deg(a) + 1
    assert (exp_apply(F, x) - x - bracket(x, a)).min_degree() == 5
    xx = trace(embed(x) * embed(x))
    assert exp_apply_cyc(F, xx) == xx
