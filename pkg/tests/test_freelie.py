import warnings
from fractions import Fraction
from itertools import product

import pytest

from kvforge.scripts.cyclic import partial_i
from kvforge.scripts.errors import (
    ConfigMismatchError,
    DegreeRangeError,
    MalformedInputError,
    NotLieElementError,
    ScalarPartError,
)
from kvforge.scripts.freelie import (
    AssocSeries,
    LieSeries,
    TruncationConfig,
    assoc_mul,
    bch,
    bch_lie,
    bch_series,
    bracket,
    dynkin_project,
    embed,
    evaluate_lie_word,
    exp_trunc,
    generator,
    generators,
    is_lyndon,
    log_trunc,
    lyndon_basis,
    lyndon_words,
    standard_factorization,
    substitute,
    to_lie,
    witt_dimension,
)


def test_lyndon_words_small_degrees():
    assert lyndon_words(2, 1) == ((0,), (1,))
    assert lyndon_words(2, 2) == ((0, 1),)
    assert lyndon_words(2, 3) == ((0, 0, 1), (0, 1, 1))
    assert lyndon_words(3, 2) == ((0, 1), (0, 2), (1, 2))


@pytest.mark.parametrize("n, expected", [(2, [2, 1, 2, 3, 6, 9]), (3, [3, 3, 8, 18, 48, 116])])
def test_witt_dimension_matches_lyndon_count(n, expected):
    config = TruncationConfig(n, 6)
    for d, dim in enumerate(expected, start=1):
        assert witt_dimension(n, d) == dim
        assert len(lyndon_basis(config, d)) == dim


def test_lyndon_basis_degree_out_of_range():
    config = TruncationConfig(2, 3)
    with pytest.raises(DegreeRangeError):
        lyndon_basis(config, 4)
    with pytest.raises(DegreeRangeError):
        lyndon_basis(config, 0)


def test_is_lyndon():
    assert is_lyndon((0, 1))
    assert is_lyndon((0, 0, 1, 1))
    assert not is_lyndon((1, 0))
    assert not is_lyndon((0, 1, 0))
    assert not is_lyndon((0, 0))
    assert not is_lyndon(())


def test_standard_factorization_uses_longest_lyndon_suffix():
    assert standard_factorization((0, 0, 1)) == ((0,), (0, 1))
    assert standard_factorization((0, 1, 1)) == ((0, 1), (1,))
    assert standard_factorization((0, 0, 1, 1)) == ((0,), (0, 1, 1))


def test_config_validation():
    with pytest.raises(DegreeRangeError):
        TruncationConfig(2, 0)
    with pytest.raises(MalformedInputError):
        TruncationConfig(0, 3)
    with pytest.raises(MalformedInputError):
        TruncationConfig(2, 3, ("x", "x"))
    assert TruncationConfig(4, 2).generator_names == ("x1", "x2", "x3", "x4")


def test_lie_series_rejects_non_lyndon_keys():
    with pytest.raises(MalformedInputError):
        LieSeries(TruncationConfig(2, 3), {(1, 0): 1})


def test_mixed_configs_are_rejected():
    x3 = generator(TruncationConfig(2, 3), 0)
    x4 = generator(TruncationConfig(2, 4), 0)
    with pytest.raises(ConfigMismatchError):
        x3 + x4
    with pytest.raises(ConfigMismatchError):
        x3.truncate(4)


def test_series_drop_terms_above_truncation():
    s = LieSeries(TruncationConfig(2, 2), {(0,): 1, (0, 0, 1): 5})
    assert s.degree_counts() == {1: 1}


def test_bch_degree_three_terms():
    x, y = generators(TruncationConfig(2, 3))
    z = bch(x, y)
    assert dict(z.terms) == {
        (0,): 1,
        (1,): 1,
        (0, 1): Fraction(1, 2),
        (0, 0, 1): Fraction(1, 12),
        (0, 1, 1): Fraction(1, 12),
    }


def test_bch_trivial_cases():
    config = TruncationConfig(2, 5)
    x, y = generators(config)
    assert bch(x, LieSeries.zero(config)) == x
    a = x + bracket(x, y)
    assert bch(a, -a) == LieSeries.zero(config)


def test_bch_series_is_truncation_consistent():
    assert bch_series(6).truncate(4) == bch_series(4)


def test_bch_lie_agrees_with_associative_bch():
    config = TruncationConfig(2, 5)
    x, y = generators(config)
    a = x + bracket(x, y) * Fraction(1, 3)
    b = y - x * 2
    assert bch_lie(a, b, bracket, 5) == bch(a, b)


def test_exp_log_inverse():
    config = TruncationConfig(2, 5)
    x, y = generators(config)
    a = embed(x + bracket(x, y))
    assert log_trunc(exp_trunc(a)) == a


def test_scalar_part_preconditions():
    config = TruncationConfig(2, 3)
    one = AssocSeries.one(config)
    with pytest.raises(ScalarPartError):
        exp_trunc(one)
    with pytest.raises(ScalarPartError):
        log_trunc(one * 2)
    with pytest.raises(ScalarPartError):
        dynkin_project(one)


def test_to_lie_inverts_embed():
    config = TruncationConfig(3, 4)
    x, y, z = generators(config)
    s = bracket(x, bracket(y, z)) - bracket(bracket(x, y), z) * 3 + y
    assert to_lie(embed(s)) == s


def test_to_lie_rejects_non_lie_elements():
    config = TruncationConfig(2, 3)
    with pytest.raises(NotLieElementError):
        to_lie(AssocSeries(config, {(0, 1): 1}))


def test_dynkin_projection_fixes_lie_elements():
    config = TruncationConfig(2, 4)
    x, y = generators(config)
    s = bracket(x, bracket(x, y)) + y
    assert dynkin_project(embed(s)) == s


def test_bracket_is_antisymmetric_and_satisfies_jacobi():
    config = TruncationConfig(3, 5)
    x, y, z = generators(config)
    a, b, c = x + bracket(x, y), y * 2 - z, bracket(z, x) + x
    assert bracket(a, b) == -bracket(b, a)
    jacobi = bracket(a, bracket(b, c)) + bracket(b, bracket(c, a)) + bracket(c, bracket(a, b))
    assert not jacobi


def test_substitute_swaps_generators():
    config = TruncationConfig(2, 4)
    x, y = generators(config)
    s = bracket(x, bracket(x, y))
    assert substitute(s, (y, x)) == bracket(y, bracket(y, x))


def test_evaluate_lie_word_checks_argument_count():
    config = TruncationConfig(2, 3)
    x, y = generators(config)
    with pytest.raises(ConfigMismatchError):
        evaluate_lie_word(bracket(x, y), (x,), bracket)


def test_with_generators_keeps_custom_names():
    named = TruncationConfig(2, 3, ("a", "b"))
    assert named.with_generators(3).generator_names == ("a", "b", "x")
    assert named.with_generators(1).generator_names == ("a",)
    assert named.with_generators(2) == named
    assert TruncationConfig(2, 3).with_generators(4) == TruncationConfig(4, 3)
    assert TruncationConfig(2, 3, ("x", "z")).with_generators(3).generator_names == ("x", "z", "y")


def test_homogeneous_parts_rebuild_the_series():
    x, y = generators(TruncationConfig(2, 4))
    z = bch(x, y)
    parts = z.homogeneous_parts()
    assert list(parts) == [1, 2, 3, 4]
    total = LieSeries.zero(z.config)
    for d, part in parts.items():
        assert part == z.degree_part(d)
        total = total + part
    assert total == z
    assert LieSeries.zero(z.config).homogeneous_parts() == {}


def test_homogeneous_parts_skip_missing_degrees():
    a = AssocSeries(TruncationConfig(2, 4), {(): 2, (0, 1, 1): 1, (1, 0, 0): -1})
    parts = a.homogeneous_parts()
    assert list(parts) == [0, 3]
    assert parts[0] == AssocSeries.one(a.config) * 2


@pytest.mark.parametrize("n, d", [(2, 4), (2, 6), (3, 4), (4, 3)])
def test_lyndon_words_match_rotation_minimal_words(n, d):
    brute = [w for w in product(range(n), repeat=d) if all(w < w[i:] + w[:i] for i in range(1, d))]
    assert list(lyndon_words(n, d)) == brute
    assert witt_dimension(n, d) == len(brute)


def test_bch_degree_four_term():
    x, y = generators(TruncationConfig(2, 4))
    expected = bracket(y, bracket(x, bracket(x, y))) * Fraction(-1, 24)
    assert bch(x, y).degree_part(4) == expected


def test_bch_is_associative_on_three_generators():
    x, y, z = generators(TruncationConfig(3, 5))
    assert bch(bch(x, y), z) == bch(x, bch(y, z))


def test_dynkin_projection_of_a_single_word():
    config = TruncationConfig(2, 3)
    assert dynkin_project(AssocSeries(config, {(0, 1): 1})) == LieSeries(config, {(0, 1): Fraction(1, 2)})


def test_embed_expands_a_double_bracket():
    config = TruncationConfig(2, 3)
    x, y = generators(config)
    assert embed(bracket(x, bracket(x, y))) == AssocSeries(config, {(0, 0, 1): 1, (0, 1, 0): -2, (1, 0, 0): 1})


def test_series_rebuilds_from_right_derivatives():
    config = TruncationConfig(3, 4)
    a = AssocSeries(config, {(): 3, (2,): 1, (0, 1): -2, (1, 2, 0): Fraction(1, 5), (2, 2, 1, 0): 4})
    rebuilt = AssocSeries.one(config) * a.scalar()
    for i, g in enumerate(generators(config)):
        rebuilt = rebuilt + assoc_mul(partial_i(a, i), embed(g))
    assert rebuilt == a


def test_substitute_preserves_brackets():
    config = TruncationConfig(2, 5)
    x, y = generators(config)
    a = x + bracket(x, y)
    b = bracket(y, bracket(x, y)) - y
    args = (x + y * 2, bracket(x, y) + y)
    assert substitute(bracket(a, b), args) == bracket(substitute(a, args), substitute(b, args))


def test_witt_dimension_is_a_plain_int_without_warnings():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        dim = witt_dimension(2, 12)
    assert type(dim) is int
    assert dim == 335
