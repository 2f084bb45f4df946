from fractions import Fraction

import pytest

from kvforge.scripts.cyclic import CyclicSeries, OneVarSeries
from kvforge.scripts.errors import ConfigMismatchError, MalformedInputError
from kvforge.scripts.freelie import AssocSeries, TruncationConfig, bch, generators
from kvforge.scripts.kvsolve import KRVElement, theta_inv
from kvforge.scripts.serialization import dump, dump_grtbasis, dump_kvsol, parse, payload_kind
from kvforge.scripts.tder import TAutElement, t_embed
from kvforge.scripts.wiring import no_input_diagram, stacking_diagram

BCH3 = "\n".join([
    "lie n=2 N=3",
    "1 1/1 x",
    "1 1/1 y",
    "2 1/2 x.y",
    "3 1/12 x.x.y",
    "3 1/12 x.y.y",
]) + "\n"


def test_bch_text_is_canonical():
    x, y = generators(TruncationConfig(2, 3))
    assert dump(bch(x, y)) == BCH3
    assert parse(BCH3) == bch(x, y)
    assert payload_kind(BCH3) == "lie"


def test_tder_round_trip():
    u = t_embed(1, 3, TruncationConfig(3, 4))
    text = dump(u)
    assert text.startswith("tder n=3 N=4\nslot 1\nlie n=3 N=4\n")
    assert parse(text, "tder") == u


def test_cyclic_payload_keeps_the_linear_quotient_flag():
    c = CyclicSeries(TruncationConfig(2, 3), {(0, 1): Fraction(-3, 4)}, quotient_linear=True)
    text = dump(c)
    assert text == "cyc n=2 N=3 modlinear\n2 -3/4 x.y\n"
    parsed = parse(text)
    assert parsed == c
    assert parsed.quotient_linear


def test_series1_payload():
    r = OneVarSeries(5, {2: Fraction(1, 24), 4: Fraction(-1, 2880)})
    assert dump(r) == "series1 N=5\n2 1/24\n4 -1/2880\n"
    assert parse(dump(r)) == r


def test_assoc_payload_with_scalar_term():
    a = parse("assoc n=2 N=2\n0 2/1 ()\n2 1/1 y.x\n")
    assert a == AssocSeries(TruncationConfig(2, 2), {(): 2, (1, 0): 1})


def test_kvsol_round_trip(kv_zero):
    text = dump_kvsol(kv_zero.candidate, "zero")
    assert text.startswith("kvsol N=4 gauge=zero\ntder n=2 N=4\n")
    candidate, gauge = parse(text)
    assert gauge == "zero"
    assert candidate == kv_zero.candidate


def test_krv_and_aut_round_trip():
    config = TruncationConfig(2, 4)
    e = KRVElement(TAutElement.exp_of(t_embed(1, 2, config)), OneVarSeries(4))
    assert parse(dump(e), "krv") == e
    G = theta_inv(e)
    assert parse(dump(G), "aut") == G


def test_grtbasis_round_trip(sigma3):
    text = dump_grtbasis({3: [sigma3]}, 5)
    assert parse(text, "grtbasis") == {3: [sigma3]}


def test_wd_round_trip_and_arrow_spelling():
    S = stacking_diagram(2)
    D = no_input_diagram((2, 1), circles=1)
    assert parse(dump(S) + dump(D), "wd") == [S, D]
    assert dump(D) == "wd out- [1,2] out+ [1,2] strands (0:1->0:2) (0:2->0:1) circles 1\n"
    unicode = "wd out- [1,2] out+ [1,2] strands (0:1→0:2) (0:2→0:1) circles 1\n"
    assert parse(unicode) == [D]


@pytest.mark.parametrize("text", [
    "lie n=2 N=3\n2 1/1 y.x\n",
    "lie n=2 N=3\n2 1/1 x\n",
    "lie n=2 N=3\n1 1/1 x\n1 2/1 x\n",
    "lie n=2 N=3\n1 1/1 w\n",
    "lie n=2 N=3\n1 one x\n",
    "lie n=2\n",
    "cyc n=2 N=3\n2 1/1 y.x\n",
    "series1 N=3\n1 1/1\n",
    "lie n=2 N=3\n1 1/1 x\nseries1 N=3\n",
    "tder n=2 N=3\nslot 2\nlie n=2 N=3\n",
    "wd out- [a] out+ [b] strands (0:a-0:b) circles 0\n",
    "wd out- [a] out+ [b] strands (0:a->0:b)\n",
    "nonsense\n",
    "",
])
def test_malformed_payloads(text):
    with pytest.raises(MalformedInputError):
        parse(text)


def test_payload_exceeding_truncation():
    with pytest.raises(ConfigMismatchError):
        parse("lie n=2 N=2\n3 1/1 x.x.y\n")
    with pytest.raises(ConfigMismatchError):
        parse("tder n=2 N=3\nslot 1\nlie n=2 N=2\nslot 2\nlie n=2 N=3\n")


def test_expected_kind_mismatch():
    with pytest.raises(MalformedInputError):
        parse(BCH3, "cyc")
    with pytest.raises(MalformedInputError):
        dump(object())
