"""Tiny grammar for smooth maps F: polynomials of degree <= 6 plus exp(k x) terms.

    expr := ['+'|'-'] term (('+'|'-') term)*
    term := coef ['*' 'x' ['^' int]]
          | 'x' ['^' int]
          | [coef '*'] 'exp' '(' [['-'] coef '*'] 'x' ')'

Derivatives are exact: the term set is closed under differentiation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .errors import ConvexityError, MapSyntaxError

MAX_DEGREE = 6

_TOKEN = re.compile(r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)|(?P<name>[A-Za-z_]+)|(?P<op>[-+*^()]))")


def _tokenize(text: str):
    pos, out = 0, []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            pos += len(text[pos:]) - len(text[pos:].lstrip())
            raise MapSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        start = m.start(kind)
        out.append((kind, m.group(kind), start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self, value=None):
        kind, val, _ = self.toks[self.i]
        return val if value is None else val == value

    def take(self, expect=None):
        kind, val, pos = self.toks[self.i]
        if expect is not None and val != expect:
            shown = val or "end of input"
            raise MapSyntaxError(f"expected {expect!r}, found {shown!r}", pos)
        self.i += 1
        return kind, val, pos

    def number(self):
        kind, val, pos = self.take()
        if kind != "num":
            raise MapSyntaxError(f"expected a number, found {val or 'end of input'!r}", pos)
        return float(val)

    def parse(self):
        poly = np.zeros(MAX_DEGREE + 1)
        exps: dict[float, float] = {}
        sign = 1.0
        if self.peek() in ("+", "-"):
            sign = -1.0 if self.take()[1] == "-" else 1.0
        while True:
            self.term(sign, poly, exps)
            if self.peek() in ("+", "-"):
                sign = -1.0 if self.take()[1] == "-" else 1.0
                continue
            kind, val, pos = self.toks[self.i]
            if kind != "end":
                raise MapSyntaxError(f"unexpected {val!r}", pos)
            break
        return poly, exps

    def term(self, sign, poly, exps):
        kind, val, pos = self.toks[self.i]
        coef = 1.0
        if kind == "num":
            coef = self.number()
            if not self.peek("*"):
                poly[0] += sign * coef
                return
            self.take("*")
            kind, val, pos = self.toks[self.i]
        if val == "x":
            self.take()
            deg = 1
            if self.peek("^"):
                self.take()
                _, dval, dpos = self.toks[self.i]
                if not dval.isdigit():
                    raise MapSyntaxError("exponent must be a non-negative integer", dpos)
                self.take()
                deg = int(dval)
                if deg > MAX_DEGREE:
                    raise MapSyntaxError(f"degree {deg} exceeds {MAX_DEGREE}", dpos)
            poly[deg] += sign * coef
        elif val == "exp":
            self.take()
            self.take("(")
            k = 1.0
            neg = False
            if self.peek("-"):
                self.take()
                neg = True
            if self.toks[self.i][0] == "num":
                k = self.number()
                self.take("*")
            self.take("x")
            self.take(")")
            k = -k if neg else k
            exps[k] = exps.get(k, 0.0) + sign * coef
        else:
            raise MapSyntaxError(f"expected a term, found {val or 'end of input'!r}", pos)


@dataclass(frozen=True, eq=False)
class SmoothMap:
    """F(x) = sum_d poly[d] x**d + sum_j c_j exp(k_j x)."""

    poly: np.ndarray
    exps: tuple[tuple[float, float], ...]  # (coefficient, rate)
    text: str = ""

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.polynomial.polynomial.polyval(x, self.poly)
        for c, k in self.exps:
            out = out + c * np.exp(k * x)
        return out

    def derivative(self) -> "SmoothMap":
        dpoly = np.polynomial.polynomial.polyder(self.poly) if self.poly.size > 1 else np.zeros(1)
        exps = tuple((c * k, k) for c, k in self.exps if c * k != 0)
        return SmoothMap(dpoly, exps, f"d/dx[{self.text}]")

    def __str__(self):
        parts = [f"{c:g}*x^{d}" for d, c in enumerate(self.poly) if c != 0]
        parts += [f"{c:g}*exp({k:g}*x)" for c, k in self.exps]
        return " + ".join(parts) or "0"

    def check_convex(self, lo: float, hi: float, samples: int = 1000) -> None:
        x = np.linspace(lo, hi, samples)
        d2 = self.derivative().derivative()(x)
        if not np.all(d2 > 0):
            bad = float(x[np.argmin(d2)])
            raise ConvexityError(f"F'' is not positive on [{lo}, {hi}] (F''({bad:.6g}) = {np.min(d2):.6g})")

    def sup_abs_derivative(self, lo: float, hi: float) -> float:
        """sup |F'| on [lo, hi]; F' is monotone when F'' > 0, so endpoints suffice."""
        d = self.derivative()
        return float(max(abs(d(lo)), abs(d(hi))))


def parse_map(text: str) -> SmoothMap:
    poly, exps = _Parser(text).parse()
    nz = np.flatnonzero(poly)
    poly = poly[: nz[-1] + 1] if nz.size else np.zeros(1)
    return SmoothMap(poly, tuple((c, k) for k, c in exps.items() if c != 0), text)
