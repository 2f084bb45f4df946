"""
serialization.py - Canonical text payloads for every value the CLI reads or
writes.

Payload headers:
    lie n=<gens> N=<trunc>              Lyndon-basis Lie series
    assoc n=<gens> N=<trunc>            associative series, "()" is the empty word
    cyc n=<gens> N=<trunc> [modlinear]  cyclic words (rotation-minimal)
    series1 N=<trunc>                   one-variable series, lines "<deg> <num>/<den>"
    tder n=<strands> N=<trunc>          "slot k" + lie payload per strand
    kvsol N=<trunc> gauge=<id>          tder payload of log F + series1 of r
    krv N=<trunc>                       tder payload of log alpha + series1 of s
    aut N=<trunc>                       cyc w + tder n + "apart c1 c2" + series1 gamma
    grtbasis N=<trunc>                  one lie payload per basis vector
    wd out- [..] out+ [..] ...          a wiring diagram on one line

Term lines are "<degree> <num>/<den> <letters>" sorted by (degree, word);
letters are the generator names joined by ".".
"""

import re
from fractions import Fraction
from typing import Any, Dict, List, Optional, Set, Tuple

from .cyclic import CyclicSeries, OneVarSeries, necklace
from .errors import ConfigMismatchError, MalformedInputError
from .freelie import AssocSeries, LieSeries, TruncationConfig, Word, is_lyndon
from .kvsolve import AutArrowsElement, KRVElement, KVCandidate
from .tder import APart, TAutElement, TangentialDerivation
from .wiring import WiringDiagram


class _Lines:
    """Cursor over the nonblank lines of a payload."""

    def __init__(self, text: str):
        self.lines = [line.strip() for line in text.splitlines() if line.strip()]
        self.pos = 0

    def peek(self) -> Optional[str]:
        return self.lines[self.pos] if self.pos < len(self.lines) else None

    def next(self) -> str:
        line = self.peek()
        if line is None:
            raise MalformedInputError("unexpected end of payload")
        self.pos += 1
        return line

    def at_end(self) -> bool:
        return self.pos >= len(self.lines)


def _fraction_text(c: Fraction) -> str:
    return f"{c.numerator}/{c.denominator}"


def _parse_fraction(token: str) -> Fraction:
    try:
        return Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise MalformedInputError(f"bad rational {token!r}")


def _header(line: str, kind: str) -> Tuple[Dict[str, str], Set[str]]:
    tokens = line.split()
    if not tokens or tokens[0] != kind:
        raise MalformedInputError(f"expected a {kind!r} header, got {line!r}")
    fields, flags = {}, set()
    for token in tokens[1:]:
        if "=" in token:
            key, value = token.split("=", 1)
            fields[key] = value
        else:
            flags.add(token)
    return fields, flags


def _int_field(fields: Dict[str, str], key: str) -> int:
    if key not in fields:
        raise MalformedInputError(f"header is missing {key}=")
    try:
        return int(fields[key])
    except ValueError:
        raise MalformedInputError(f"{key}= must be an integer, got {fields[key]!r}")


def _config(fields: Dict[str, str]) -> TruncationConfig:
    return TruncationConfig(_int_field(fields, "n"), _int_field(fields, "N"))


def _is_term_line(line: Optional[str]) -> bool:
    return line is not None and line.split()[0].isdigit()


def _parse_word(token: str, config: TruncationConfig) -> Word:
    if token == "()":
        return ()
    index = {name: i for i, name in enumerate(config.generator_names)}
    try:
        return tuple(index[name] for name in token.split("."))
    except KeyError as e:
        raise MalformedInputError(f"unknown generator {e.args[0]!r} in {token!r}")


def _dump_terms(series: Any) -> List[str]:
    config = series.config
    return [f"{len(w)} {_fraction_text(c)} {config.word_text(w)}" for w, c in series.sorted_terms()]


def _read_terms(lines: _Lines, config: TruncationConfig, check_word=None) -> Dict[Word, Fraction]:
    terms: Dict[Word, Fraction] = {}
    while _is_term_line(lines.peek()):
        line = lines.next()
        tokens = line.split()
        if len(tokens) != 3:
            raise MalformedInputError(f"bad term line {line!r}")
        degree = int(tokens[0])
        word = _parse_word(tokens[2], config)
        if len(word) != degree:
            raise MalformedInputError(f"degree {degree} does not match word {tokens[2]!r}")
        if degree > config.max_degree:
            raise ConfigMismatchError(f"term of degree {degree} exceeds N={config.max_degree}")
        if word in terms:
            raise MalformedInputError(f"duplicate term {tokens[2]!r}")
        if check_word is not None:
            check_word(word, tokens[2])
        terms[word] = _parse_fraction(tokens[1])
    return terms


def _expect(config: TruncationConfig, n: int, N: int, kind: str) -> None:
    if config.n_generators != n or config.max_degree != N:
        raise ConfigMismatchError(
            f"{kind} payload has n={config.n_generators} N={config.max_degree}, expected n={n} N={N}")


# ---------------------------------------------------------------------------
# Series payloads
# ---------------------------------------------------------------------------

def dump_lie(s: LieSeries) -> str:
    header = f"lie n={s.config.n_generators} N={s.config.max_degree}"
    return "\n".join([header] + _dump_terms(s)) + "\n"


def _read_lie(lines: _Lines) -> LieSeries:
    config = _config(_header(lines.next(), "lie")[0])

    def lyndon_only(word, token):
        if not word or not is_lyndon(word):
            raise MalformedInputError(f"{token} is not a Lyndon word")

    return LieSeries(config, _read_terms(lines, config, lyndon_only))


def dump_assoc(a: AssocSeries) -> str:
    header = f"assoc n={a.config.n_generators} N={a.config.max_degree}"
    return "\n".join([header] + _dump_terms(a)) + "\n"


def _read_assoc(lines: _Lines) -> AssocSeries:
    config = _config(_header(lines.next(), "assoc")[0])
    return AssocSeries(config, _read_terms(lines, config))


def dump_cyc(c: CyclicSeries) -> str:
    header = f"cyc n={c.config.n_generators} N={c.config.max_degree}"
    if c.quotient_linear:
        header += " modlinear"
    return "\n".join([header] + _dump_terms(c)) + "\n"


def _read_cyc(lines: _Lines) -> CyclicSeries:
    fields, flags = _header(lines.next(), "cyc")
    config = _config(fields)

    def rotation_minimal(word, token):
        if not word or necklace(word) != word:
            raise MalformedInputError(f"{token} is not a rotation-minimal cyclic word")

    terms = _read_terms(lines, config, rotation_minimal)
    return CyclicSeries(config, terms, quotient_linear="modlinear" in flags)


def dump_series1(r: OneVarSeries) -> str:
    lines = [f"series1 N={r.max_degree}"]
    lines += [f"{d} {_fraction_text(c)}" for d, c in sorted(r.coefficients.items())]
    return "\n".join(lines) + "\n"


def _read_series1(lines: _Lines) -> OneVarSeries:
    N = _int_field(_header(lines.next(), "series1")[0], "N")
    coefficients: Dict[int, Fraction] = {}
    while _is_term_line(lines.peek()):
        line = lines.next()
        tokens = line.split()
        if len(tokens) != 2:
            raise MalformedInputError(f"bad series1 line {line!r}")
        d = int(tokens[0])
        if d < 2 or d > N or d in coefficients:
            raise MalformedInputError(f"bad series1 degree in {line!r}")
        coefficients[d] = _parse_fraction(tokens[1])
    return OneVarSeries(N, coefficients)


def dump_tder(u: TangentialDerivation) -> str:
    parts = [f"tder n={u.config.n_generators} N={u.config.max_degree}\n"]
    for k, s in enumerate(u.slots, start=1):
        parts.append(f"slot {k}\n")
        parts.append(dump_lie(s))
    return "".join(parts)


def _read_tder(lines: _Lines) -> TangentialDerivation:
    config = _config(_header(lines.next(), "tder")[0])
    slots = []
    for k in range(1, config.n_generators + 1):
        line = lines.next()
        if line.split() != ["slot", str(k)]:
            raise MalformedInputError(f"expected 'slot {k}', got {line!r}")
        s = _read_lie(lines)
        _expect(s.config, config.n_generators, config.max_degree, "slot")
        slots.append(s)
    return TangentialDerivation(config, slots)


def _read_apart(lines: _Lines, n: int) -> APart:
    tokens = lines.next().split()
    if not tokens or tokens[0] != "apart" or len(tokens) != n + 1:
        raise MalformedInputError(f"expected an 'apart' line with {n} coefficients")
    return APart(tuple(_parse_fraction(t) for t in tokens[1:]))


# ---------------------------------------------------------------------------
# Composite payloads
# ---------------------------------------------------------------------------

def dump_kvsol(c: KVCandidate, gauge: str = "none") -> str:
    if c.r is None:
        raise MalformedInputError("a KV solution file needs the Duflo series r")
    return f"kvsol N={c.config.max_degree} gauge={gauge}\n" + dump_tder(c.F.log) + dump_series1(c.r)


def _read_kvsol(lines: _Lines) -> Tuple[KVCandidate, str]:
    fields, _ = _header(lines.next(), "kvsol")
    N = _int_field(fields, "N")
    u = _read_tder(lines)
    r = _read_series1(lines)
    _expect(u.config, 2, N, "tder")
    if r.max_degree != N:
        raise ConfigMismatchError(f"series1 has N={r.max_degree}, expected {N}")
    return KVCandidate(TAutElement(u.config, u), r), fields.get("gauge", "none")


def dump_krv(e: KRVElement) -> str:
    return f"krv N={e.config.max_degree}\n" + dump_tder(e.alpha.log) + dump_series1(e.s)


def _read_krv(lines: _Lines) -> KRVElement:
    N = _int_field(_header(lines.next(), "krv")[0], "N")
    u = _read_tder(lines)
    s = _read_series1(lines)
    _expect(u.config, 2, N, "tder")
    if s.max_degree != N:
        raise ConfigMismatchError(f"series1 has N={s.max_degree}, expected {N}")
    return KRVElement(TAutElement(u.config, u), s)


def dump_aut(G: AutArrowsElement) -> str:
    apart = "apart " + " ".join(_fraction_text(c) for c in G.a_part.coefficients) + "\n"
    return (f"aut N={G.config.max_degree}\n" + dump_cyc(G.w) + dump_tder(G.n_part)
            + apart + dump_series1(G.gamma))


def _read_aut(lines: _Lines) -> AutArrowsElement:
    N = _int_field(_header(lines.next(), "aut")[0], "N")
    w = _read_cyc(lines)
    n_part = _read_tder(lines)
    _expect(w.config, 2, N, "cyc")
    _expect(n_part.config, 2, N, "tder")
    a_part = _read_apart(lines, 2)
    gamma = _read_series1(lines)
    if gamma.max_degree != N:
        raise ConfigMismatchError(f"series1 has N={gamma.max_degree}, expected {N}")
    return AutArrowsElement(w, n_part, a_part, gamma)


def dump_grtbasis(basis: Dict[int, List[LieSeries]], N: int) -> str:
    parts = [f"grtbasis N={N}\n"]
    for d in sorted(basis):
        parts.extend(dump_lie(psi) for psi in basis[d])
    return "".join(parts)


def _read_grtbasis(lines: _Lines) -> Dict[int, List[LieSeries]]:
    N = _int_field(_header(lines.next(), "grtbasis")[0], "N")
    basis: Dict[int, List[LieSeries]] = {}
    while not lines.at_end():
        psi = _read_lie(lines)
        _expect(psi.config, 2, N, "lie")
        basis.setdefault(psi.min_degree() or 0, []).append(psi)
    return basis


# ---------------------------------------------------------------------------
# Wiring diagrams
# ---------------------------------------------------------------------------

_WD_TOKEN = re.compile(r"(out|in\d+)([-+])\s*\[([^\]]*)\]")
_WD_STRAND = re.compile(r"\((\d+):([^\s()]+?)\s*(?:->|→)\s*(\d+):([^\s()]+)\)")


def _labels_text(labels) -> str:
    return "[" + ",".join(sorted(labels)) + "]"


def dump_wd(D: WiringDiagram) -> str:
    parts = ["wd", "out-", _labels_text(D.output[0]), "out+", _labels_text(D.output[1])]
    for k, (minus, plus) in enumerate(D.inputs, start=1):
        parts += [f"in{k}-", _labels_text(minus), f"in{k}+", _labels_text(plus)]
    parts.append("strands")
    parts += [f"({a[0]}:{a[1]}->{b[0]}:{b[1]})" for a, b in D.sorted_strands()]
    parts += ["circles", str(D.circles)]
    return " ".join(parts) + "\n"


def parse_wd(line: str) -> WiringDiagram:
    line = line.strip()
    if not line.startswith("wd "):
        raise MalformedInputError(f"expected a 'wd' line, got {line!r}")
    head, sep, rest = line[3:].partition("strands")
    if not sep:
        raise MalformedInputError("wd line has no 'strands' section")
    sets: Dict[Tuple[str, str], List[str]] = {}
    for disc, role, body in _WD_TOKEN.findall(head):
        sets[(disc, role)] = [l.strip() for l in body.split(",") if l.strip()]
    if ("out", "-") not in sets or ("out", "+") not in sets:
        raise MalformedInputError("wd line needs out- and out+ label sets")
    r = 0
    while (f"in{r + 1}", "-") in sets or (f"in{r + 1}", "+") in sets:
        r += 1
    inputs = tuple((sets.get((f"in{k}", "-"), []), sets.get((f"in{k}", "+"), [])) for k in range(1, r + 1))
    strand_text, sep, circles_text = rest.partition("circles")
    if not sep:
        raise MalformedInputError("wd line has no 'circles' count")
    try:
        circles = int(circles_text.strip())
    except ValueError:
        raise MalformedInputError(f"bad circle count {circles_text.strip()!r}")
    strands = [((int(a), la), (int(b), lb)) for a, la, b, lb in _WD_STRAND.findall(strand_text)]
    if len(strands) != strand_text.count("("):
        raise MalformedInputError("unreadable strand in wd line")
    return WiringDiagram((sets[("out", "-")], sets[("out", "+")]), inputs, frozenset(strands), circles)


# ---------------------------------------------------------------------------
# Entry points
# ---------------------------------------------------------------------------

_READERS = {
    "lie": _read_lie,
    "assoc": _read_assoc,
    "cyc": _read_cyc,
    "series1": _read_series1,
    "tder": _read_tder,
    "kvsol": _read_kvsol,
    "krv": _read_krv,
    "aut": _read_aut,
    "grtbasis": _read_grtbasis,
}


def payload_kind(text: str) -> str:
    lines = _Lines(text)
    first = lines.peek()
    if first is None:
        raise MalformedInputError("empty payload")
    return first.split()[0]


def parse(text: str, kind: Optional[str] = None) -> Any:
    """
    Parse one payload.

    Args:
        text: payload text
        kind: expected header keyword; None accepts any known kind

    Returns:
        The parsed value ((KVCandidate, gauge) for kvsol, a list of diagrams
        for wd, a degree -> basis dict for grtbasis)

    Raises:
        MalformedInputError: unknown header, bad lines or trailing content
        ConfigMismatchError: nested payloads disagree on n or N
    """
    found = payload_kind(text)
    if kind is not None and found != kind:
        raise MalformedInputError(f"expected a {kind!r} payload, got {found!r}")
    if found == "wd":
        return [parse_wd(line) for line in text.splitlines() if line.strip()]
    if found not in _READERS:
        raise MalformedInputError(f"unknown payload kind {found!r}")
    lines = _Lines(text)
    value = _READERS[found](lines)
    if not lines.at_end():
        raise MalformedInputError(f"trailing content after {found} payload: {lines.peek()!r}")
    return value


def dump(value: Any) -> str:
    """Serialize any supported value with its canonical header."""
    if isinstance(value, LieSeries):
        return dump_lie(value)
    if isinstance(value, CyclicSeries):
        return dump_cyc(value)
    if isinstance(value, AssocSeries):
        return dump_assoc(value)
    if isinstance(value, OneVarSeries):
        return dump_series1(value)
    if isinstance(value, TangentialDerivation):
        return dump_tder(value)
    if isinstance(value, KVCandidate):
        return dump_kvsol(value)
    if isinstance(value, KRVElement):
        return dump_krv(value)
    if isinstance(value, AutArrowsElement):
        return dump_aut(value)
    if isinstance(value, WiringDiagram):
        return dump_wd(value)
    raise MalformedInputError(f"no text form for {type(value).__name__}")
