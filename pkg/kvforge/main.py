"""
KVForge - Main Entry Point

Command-line interface for the truncated Lie algebra engine: compute BCH and
Lyndon bases, divergences and Jacobians, check and solve the Kashiwara-Vergne
and grt_1 equations, move between automorphism data and KRV, and compose
wiring diagrams.

Exit codes: 0 success or passed check, 1 failed check, 2 malformed input or
configuration mismatch.
"""

import argparse
import sys
from dataclasses import dataclass, fields
from typing import List, Optional

from . import __version__
from .scripts.errors import (
    ConfigMismatchError,
    DegreeRangeError,
    KVForgeError,
    MalformedInputError,
    SettingsError,
)
from .scripts.settings import log, set_verbose

DEFAULT_N = 6
EXIT_OK, EXIT_FAILED, EXIT_MALFORMED = 0, 1, 2

COMMANDS = [
    "bch", "lyndon", "div", "jac", "kv-check", "kv-solve", "krv-check", "grt-check",
    "grt-solve", "rho", "theta", "theta-inv", "bubble", "wd-compose", "replay",
]


@dataclass
class JobManifest:
    """Everything needed to re-run a command and reproduce its output byte for byte."""

    command: str
    N: Optional[int] = None
    n: Optional[int] = None
    gauge: str = "zero"
    in_path: Optional[str] = None
    out_path: Optional[str] = None
    slot: int = 1
    orientation: str = "inverse"
    degree: Optional[int] = None
    version: str = __version__

    _KEYS = {"in_path": "in", "out_path": "out"}

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "JobManifest":
        return cls(command=args.command, N=args.N, n=args.n, gauge=args.gauge, in_path=args.in_path,
                   out_path=args.out_path, slot=args.slot, orientation=args.orientation, degree=args.degree)

    def to_text(self) -> str:
        parts = ["job"]
        for f in fields(self):
            value = getattr(self, f.name)
            parts.append(f"{self._KEYS.get(f.name, f.name)}={'-' if value is None else value}")
        return " ".join(parts) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "JobManifest":
        tokens = text.split()
        if not tokens or tokens[0] != "job":
            raise MalformedInputError("a manifest starts with 'job'")
        names = {cls._KEYS.get(f.name, f.name): f.name for f in fields(cls)}
        values = {}
        for token in tokens[1:]:
            key, sep, value = token.partition("=")
            if not sep or key not in names:
                raise MalformedInputError(f"bad manifest field {token!r}")
            values[names[key]] = None if value == "-" else value
        if "command" not in values or values["command"] not in COMMANDS[:-1]:
            raise MalformedInputError("manifest names no replayable command")
        try:
            for key in ("N", "n", "degree", "slot"):
                if values.get(key) is not None:
                    values[key] = int(values[key])
        except ValueError as e:
            raise MalformedInputError(f"bad manifest number: {e}")
        return cls(**values)

    def to_argv(self) -> List[str]:
        argv = [self.command]
        for flag, value in (("--N", self.N), ("--n", self.n), ("--gauge", self.gauge), ("--in", self.in_path),
                            ("--out", self.out_path), ("--slot", self.slot),
                            ("--orientation", self.orientation), ("--degree", self.degree)):
            if value is not None:
                argv += [flag, str(value)]
        return argv


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------

def _read_text(path: Optional[str]) -> str:
    if not path:
        raise MalformedInputError("this command needs --in")
    with open(path, "r", encoding="utf-8") as file:
        return file.read()


def _emit(text: str, out_path: Optional[str]) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="\n") as file:
            file.write(text)
        log(f"✅ Wrote {out_path}")
    else:
        sys.stdout.write(text)


def _truncation(args: argparse.Namespace, found: Optional[int] = None) -> int:
    """The N to work at: the file's N, which must agree with an explicit --N."""
    if found is None:
        return DEFAULT_N if args.N is None else args.N
    if args.N is not None and args.N != found:
        raise ConfigMismatchError(f"--N {args.N} does not match the input's N={found}")
    return found


def _report(report) -> int:
    sys.stdout.write(report.to_text())
    if report.passed:
        log("✅ All equations hold")
        return EXIT_OK
    log(f"❌ {len(report.failures())} degree/equation pairs fail")
    return EXIT_FAILED


def _load(args: argparse.Namespace, kind: str):
    from .scripts.serialization import parse

    return parse(_read_text(args.in_path), kind)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def run_bch(args) -> int:
    from .scripts.freelie import TruncationConfig, bch, generator
    from .scripts.serialization import dump_lie

    config = TruncationConfig(args.n or 2, _truncation(args))
    if config.n_generators < 2:
        raise MalformedInputError("bch needs at least two generators")
    _emit(dump_lie(bch(generator(config, 0), generator(config, 1))), args.out_path)
    return EXIT_OK


def run_lyndon(args) -> int:
    from .scripts.freelie import TruncationConfig, lyndon_basis, witt_dimension

    config = TruncationConfig(args.n or 2, _truncation(args))
    degrees = [args.degree] if args.degree is not None else range(1, config.max_degree + 1)
    lines = [f"lyndon n={config.n_generators} N={config.max_degree}"]
    for d in degrees:
        words = lyndon_basis(config, d)
        lines.append(f"deg={d} count={witt_dimension(config.n_generators, d)}")
        lines += [f"{d} {config.word_text(w)}" for w in words]
    _emit("\n".join(lines) + "\n", args.out_path)
    return EXIT_OK


def run_div(args) -> int:
    from .scripts.divjac import divergence
    from .scripts.serialization import dump_cyc

    u = _load(args, "tder")
    _truncation(args, u.config.max_degree)
    _emit(dump_cyc(divergence(u)), args.out_path)
    return EXIT_OK


def run_jac(args) -> int:
    from .scripts.divjac import jacobian
    from .scripts.serialization import dump_cyc
    from .scripts.tder import TAutElement

    u = _load(args, "tder")
    _truncation(args, u.config.max_degree)
    _emit(dump_cyc(jacobian(TAutElement.exp_of(u))), args.out_path)
    return EXIT_OK


def run_kv_check(args) -> int:
    from .scripts.kvsolve import check_solkv

    candidate, _ = _load(args, "kvsol")
    _truncation(args, candidate.config.max_degree)
    return _report(check_solkv(candidate))


def run_kv_solve(args) -> int:
    from .scripts.kvsolve import solve_kv
    from .scripts.serialization import dump_kvsol

    N = _truncation(args)
    result = solve_kv(N, args.gauge)
    for row in result.dimensions.itertuples(index=False):
        log(f"📊 deg={row.degree} unknowns={row.unknowns} eq1_dim={row.eq1_dimension} joint_dim={row.joint_dimension}")
    _emit(dump_kvsol(result.candidate, args.gauge), args.out_path)
    return EXIT_OK


def run_krv_check(args) -> int:
    from .scripts.kvsolve import check_krv_group

    e = _load(args, "krv")
    _truncation(args, e.config.max_degree)
    return _report(check_krv_group(e))


def run_grt_check(args) -> int:
    from .scripts.grtbridge import check_grt

    psi = _load(args, "lie")
    _truncation(args, psi.config.max_degree)
    return _report(check_grt(psi))


def run_grt_solve(args) -> int:
    from .scripts.grtbridge import solve_grt
    from .scripts.serialization import dump_grtbasis

    N = _truncation(args)
    result = solve_grt(N)
    for row in result.dimensions.itertuples(index=False):
        log(f"📊 deg={row.degree} candidates={row.candidates} dimension={row.dimension}")
    _emit(dump_grtbasis(result.basis, N), args.out_path)
    return EXIT_OK


def run_rho(args) -> int:
    from .scripts.grtbridge import rho
    from .scripts.serialization import dump_tder

    psi = _load(args, "lie")
    _truncation(args, psi.config.max_degree)
    _emit(dump_tder(rho(psi)), args.out_path)
    return EXIT_OK


def run_theta(args) -> int:
    from .scripts.kvsolve import theta
    from .scripts.serialization import dump_krv

    G = _load(args, "aut")
    _truncation(args, G.config.max_degree)
    _emit(dump_krv(theta(G)), args.out_path)
    return EXIT_OK


def run_theta_inv(args) -> int:
    from .scripts.kvsolve import theta_inv
    from .scripts.serialization import dump_aut

    e = _load(args, "krv")
    _truncation(args, e.config.max_degree)
    _emit(dump_aut(theta_inv(e)), args.out_path)
    return EXIT_OK


def run_bubble(args) -> int:
    from .scripts.grtbridge import bubble_identity

    psi = _load(args, "lie")
    N = _truncation(args, psi.config.max_degree)
    return _report(bubble_identity(psi, N, orientation=args.orientation))


def run_wd_compose(args) -> int:
    from .scripts.serialization import dump_wd
    from .scripts.wiring import compose_at

    diagrams = _load(args, "wd")
    if len(diagrams) != 2:
        raise MalformedInputError(f"wd-compose needs exactly two diagrams, got {len(diagrams)}")
    outer, inner = diagrams
    _emit(dump_wd(compose_at(outer, args.slot, inner)), args.out_path)
    return EXIT_OK


def run_replay(args) -> int:
    manifest = JobManifest.from_text(_read_text(args.in_path))
    if manifest.version != __version__:
        print(f"⚠️ Manifest was recorded with version {manifest.version}, running {__version__}", file=sys.stderr)
    log(f"🔁 Replaying {manifest.command}")
    argv = manifest.to_argv()
    if args.verbose:
        argv.append("--verbose")
    return main(argv)


HANDLERS = {
    "bch": run_bch,
    "lyndon": run_lyndon,
    "div": run_div,
    "jac": run_jac,
    "kv-check": run_kv_check,
    "kv-solve": run_kv_solve,
    "krv-check": run_krv_check,
    "grt-check": run_grt_check,
    "grt-solve": run_grt_solve,
    "rho": run_rho,
    "theta": run_theta,
    "theta-inv": run_theta_inv,
    "bubble": run_bubble,
    "wd-compose": run_wd_compose,
    "replay": run_replay,
}

HELP = {
    "bch": "Print bch(x, y) in the Lyndon basis",
    "lyndon": "List Lyndon words and Witt dimensions",
    "div": "Divergence of a tder payload",
    "jac": "Jacobian of exp(u) for a tder payload u",
    "kv-check": "Check a SolKV solution file",
    "kv-solve": "Solve the SolKV equations degree by degree",
    "krv-check": "Check a KRV element",
    "grt-check": "Check the grt_1 equations for a Lie series psi",
    "grt-solve": "Basis of grt_1 up to degree N",
    "rho": "The derivation rho(psi)",
    "theta": "KRV element of an automorphism payload",
    "theta-inv": "Automorphism payload of a KRV element",
    "bubble": "Check the bubble identity for psi",
    "wd-compose": "Compose two wiring diagrams at --slot",
    "replay": "Re-run a recorded job manifest",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="KVForge - exact Kashiwara-Vergne and grt computations")
    subparsers = parser.add_subparsers(dest="command", help="Available commands")
    for name in COMMANDS:
        sub = subparsers.add_parser(name, help=HELP[name])
        sub.add_argument("--N", type=int, default=None, help=f"Truncation degree (default {DEFAULT_N})")
        sub.add_argument("--n", type=int, default=None, help="Number of generators or strands")
        sub.add_argument("--gauge", default="zero", help="Free-parameter choice for kv-solve: zero or named (alias unit)")
        sub.add_argument("--in", dest="in_path", default=None, help="Input payload file")
        sub.add_argument("--out", dest="out_path", default=None, help="Output file (default stdout)")
        sub.add_argument("--format", default="text", choices=["text"], help="Payload format")
        sub.add_argument("--slot", type=int, default=1, help="Input slot for wd-compose")
        sub.add_argument("--orientation", default="inverse", choices=["inverse", "stated"],
                         help="Bubble identity orientation")
        sub.add_argument("--degree", type=int, default=None, help="Single degree for lyndon")
        sub.add_argument("--manifest", default=None, help="Write the job manifest of this run here")
        sub.add_argument("--verbose", action="store_true", help="Progress messages on stderr")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.command:
        parser.print_help(sys.stderr)
        return EXIT_MALFORMED

    set_verbose(True if args.verbose else None)
    try:
        if args.manifest and args.command != "replay":
            with open(args.manifest, "w", encoding="utf-8", newline="\n") as file:
                file.write(JobManifest.from_args(args).to_text())
        return HANDLERS[args.command](args)
    except (MalformedInputError, ConfigMismatchError, DegreeRangeError, SettingsError) as e:
        print(f"❌ Error in {args.command}: {str(e)}", file=sys.stderr)
        return EXIT_MALFORMED
    except OSError as e:
        print(f"❌ Error reading or writing files: {str(e)}", file=sys.stderr)
        return EXIT_MALFORMED
    except KVForgeError as e:
        print(f"❌ {args.command} failed: {str(e)}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
