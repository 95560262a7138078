"""Command-line front end: ``eval``, ``verify`` and ``sample``.

Exit codes: 0 success, 1 failing verification, 2 usage or parse error,
3 domain error.  Payload goes to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import re
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import adapted as ad
from . import conformal as cf
from . import fibration as fb
from . import projective as pj
from . import verify as vf
from .algebra import AlgebraError, AlgebraKind, DomainError, Element, bilinear, conj, inverse, mul

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2, 3


class ParseError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Expression evaluation
#
#   expr    := factor ('*' factor)*          left to right
#   factor  := number | literal | call | '(' expr ')'
#   literal := '(' number ',' number ',' number ')'
#   call    := name '(' expr (',' expr)* ')'

_TOKEN = re.compile(r"\s*(?:(?P<num>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_]\w*)|(?P<op>[(),*]))")

_FUNCS = {"inv": 1, "conj": 1, "dot": 2, "pi1": 1, "pi2": 1}


@dataclass
class _Tok:
    kind: str
    text: str


def _tokenize(text: str) -> list[_Tok]:
    out, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at position {pos}: {text[pos:pos + 10]!r}")
        kind = m.lastgroup
        out.append(_Tok(kind, m.group(kind)))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str, kind: AlgebraKind):
        self.toks = _tokenize(text)
        self.i = 0
        self.kind = kind

    def peek(self, k: int = 0) -> _Tok | None:
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else None

    def take(self, text: str | None = None) -> _Tok:
        tok = self.peek()
        if tok is None or (text is not None and tok.text != text):
            raise ParseError(f"expected {text or 'token'}, got {tok.text if tok else 'end of input'}")
        self.i += 1
        return tok

    def parse(self):
        if not self.toks:
            raise ParseError("empty expression")
        value = self.expr()
        if self.peek() is not None:
            raise ParseError(f"unexpected {self.peek().text!r}")
        return value

    def expr(self):
        value = self.factor()
        while self.peek() is not None and self.peek().text == "*":
            self.take("*")
            value = _times(value, self.factor())
        return value

    def factor(self):
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input")
        if tok.kind == "num":
            self.take()
            return float(tok.text)
        if tok.kind == "name":
            return self.call()
        if tok.text == "(":
            nxt, sep = self.peek(1), self.peek(2)
            if nxt is not None and nxt.kind == "num" and sep is not None and sep.text == ",":
                return self.literal()
            self.take("(")
            value = self.expr()
            self.take(")")
            return value
        raise ParseError(f"unexpected {tok.text!r}")

    def literal(self) -> Element:
        self.take("(")
        coeffs = []
        for k in range(3):
            tok = self.take()
            if tok.kind != "num":
                raise ParseError(f"literal coefficient must be a number, got {tok.text!r}")
            coeffs.append(float(tok.text))
            self.take("," if k < 2 else ")")
        return Element(*coeffs, kind=self.kind)

    def call(self):
        name = self.take().text
        if name not in _FUNCS:
            raise ParseError(f"unknown function {name!r}")
        self.take("(")
        args = [self.expr()]
        while self.peek() is not None and self.peek().text == ",":
            self.take(",")
            args.append(self.expr())
        self.take(")")
        if len(args) != _FUNCS[name]:
            raise ParseError(f"{name} takes {_FUNCS[name]} argument(s)")
        if not all(isinstance(a, Element) for a in args):
            raise ParseError(f"{name} expects algebra elements")
        if name == "inv":
            return inverse(args[0])
        if name == "conj":
            return conj(args[0])
        if name == "dot":
            return bilinear(*args)
        return fb.pi1(args[0]) if name == "pi1" else fb.pi2(args[0])


def _times(a, b):
    if isinstance(a, Element) and isinstance(b, Element):
        return mul(a, b)
    if isinstance(a, Element):
        return a.scale(b)
    if isinstance(b, Element):
        return b.scale(a)
    return a * b


def evaluate(text: str, kind="II"):
    return _Parser(text, AlgebraKind.parse(kind)).parse()


def _fmt(v: float) -> str:
    return f"{float(v) + 0.0:.12g}"


def render(value) -> str:
    if isinstance(value, Element):
        return "(" + ",".join(_fmt(c) for c in value.coeffs) + ")"
    return _fmt(value)


# ---------------------------------------------------------------------------
# Sampling


def _csv_value(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v) + 0.0)


def _rows_to_csv(header: list[str], rows) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(_csv_value(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def sample_rows(what: str, args) -> tuple[list[str], list[tuple]]:
    xs = np.linspace(args.range[0], args.range[1], args.n)
    if what == "fibers-conformal":
        return ["c", "x", "y"], [(c, x, cf.fiber_image(c, x)) for c in args.c for x in xs]
    if what == "fibers-projective":
        return ["v", "x1", "x2"], [(v, x, pj.fiber_projection(v, x)) for v in args.v for x in xs]
    if what == "geodesics":
        return ["A", "B", "x1", "x2"], [
            (A, B, x, pj.geodesic_family(A, B, x)) for A in args.A for B in args.B for x in xs
        ]
    if what == "sphere":
        rows = []
        for eps in (1, -1):
            for u in args.c:
                for phi in xs:
                    q = ad.sphere_point(ad.SpherePoint(u, phi, eps))
                    rows.append((u, phi, eps, *q.coeffs))
        return ["u", "phi", "eps", "x0", "x1", "x2"], rows
    raise ValueError(what)


_SAMPLE_DEFAULTS = {
    "fibers-conformal": (-3.0, 3.0),
    "fibers-projective": (-3.0, 3.0),
    "geodesics": (-2.0, 2.0),
    "sphere": (-2.0, 2.0),
}


# ---------------------------------------------------------------------------
# Argument parsing


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="trialgebra", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", help="evaluate an algebra expression")
    e.add_argument("expr", help="e.g. '(1,2,3)*inv((2,1,4))'; functions inv conj dot pi1 pi2")
    e.add_argument("--kind", default="II", choices=["I", "II", "III"])

    v = sub.add_parser("verify", help="run verification suites and print a JSON report")
    v.add_argument("suites", nargs="*", help="suite names (see --list)")
    v.add_argument("--all", action="store_true", help="run every suite")
    v.add_argument("--list", action="store_true", help="list suite names and exit")
    v.add_argument("--seed", type=int, default=42)
    v.add_argument("--trials", type=int, default=1000)
    v.add_argument("--json", dest="json_path", type=Path, help="write the report here instead of stdout")

    s = sub.add_parser(
        "sample",
        help="emit CSV samples of curve families",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=(
            "columns:\n"
            "  fibers-conformal   c,x,y        y = -c/2 (x - 1)^2\n"
            "  fibers-projective  v,x1,x2      x2 = -v/2 (x1 + 1)^2\n"
            "  geodesics          A,B,x1,x2    x2 = A (x1^2 - 1) + B x1\n"
            "  sphere             u,phi,eps,x0,x1,x2   points of S^2(1), u from --c, phi over --range"
        ),
    )
    s.add_argument("what", choices=sorted(_SAMPLE_DEFAULTS))
    s.add_argument("--c", type=float, nargs="+", default=[-2.0, -1.0, 0.0, 1.0, 2.0])
    s.add_argument("--v", type=float, nargs="+", default=[-2.0, -1.0, 0.0, 1.0, 2.0])
    s.add_argument("--A", type=float, nargs="+", default=[0.0, 1.0])
    s.add_argument("--B", type=float, nargs="+", default=[0.0])
    s.add_argument("--range", type=float, nargs=2, metavar=("LO", "HI"))
    s.add_argument("--xmin", type=float)
    s.add_argument("--xmax", type=float)
    s.add_argument("--n", type=int, default=50)
    s.add_argument("--out", type=Path, help="write CSV here instead of stdout")
    return p


def _err(msg: str) -> None:
    print(f"trialgebra: {msg}", file=sys.stderr)


def _cmd_eval(args) -> int:
    try:
        value = evaluate(args.expr, args.kind)
    except ParseError as exc:
        _err(f"parse error: {exc}")
        return EXIT_USAGE
    except (DomainError, AlgebraError, ZeroDivisionError) as exc:
        _err(f"domain error: {exc}")
        return EXIT_DOMAIN
    print(render(value))
    return EXIT_OK


def _cmd_verify(args) -> int:
    if args.list:
        print("\n".join(vf.suite_names()))
        return EXIT_OK
    names = vf.suite_names() if args.all else args.suites
    if not names:
        _err("name at least one suite or pass --all")
        return EXIT_USAGE
    unknown = [n for n in names if n not in vf.SUITES]
    if unknown:
        _err(f"unknown suite(s): {', '.join(unknown)}")
        return EXIT_USAGE
    if args.trials < 1 or not 0 <= args.seed < 2**64:
        _err("trials must be positive and seed a 64-bit unsigned integer")
        return EXIT_USAGE
    reports = vf.run_suites(names, args.seed, args.trials)
    payload = vf.dumps(vf.aggregate(reports, args.seed, args.trials)) + "\n"
    if args.json_path:
        args.json_path.write_text(payload, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(payload)
    for r in reports:
        _err(f"{r.status:4s} {r.suite} failures={r.failures}")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def _cmd_sample(args) -> int:
    lo, hi = args.range if args.range else _SAMPLE_DEFAULTS[args.what]
    lo = args.xmin if args.xmin is not None else lo
    hi = args.xmax if args.xmax is not None else hi
    if not (np.isfinite(lo) and np.isfinite(hi) and lo < hi):
        _err(f"invalid range [{lo}, {hi}]")
        return EXIT_USAGE
    if args.n < 2:
        _err("--n must be at least 2")
        return EXIT_USAGE
    args.range = (lo, hi)
    try:
        header, rows = sample_rows(args.what, args)
    except DomainError as exc:
        _err(f"domain error: {exc}")
        return EXIT_DOMAIN
    text = _rows_to_csv(header, rows)
    if args.out:
        args.out.write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"eval": _cmd_eval, "verify": _cmd_verify, "sample": _cmd_sample}[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
