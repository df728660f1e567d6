"""Text form of bicirculant parameters.

Accepted forms (whitespace-insensitive)::

    B(m; R; S; T)    comma-separated residue lists, ``_`` or nothing for empty
    GP(m,k)          B(m; 1,m-1; 0; k,m-k)
    I(m,j,k)         B(m; j,m-j; 0; k,m-k)
    H(m; S)          B(m; _; S; _)
"""
from __future__ import annotations

import re

from .core import BicirculantError, BicirculantParams, make_params, render_params, sym

_TOKEN = re.compile(r"\s*(?:(-?\d+)|([A-Za-z]+)|(.))")


class ParamSyntaxError(ValueError):
    def __init__(self, msg, position):
        super().__init__(f"{msg} at position {position}")
        self.position = position


class _Lexer:
    def __init__(self, text):
        self.text = text
        self.toks = []
        for mt in _TOKEN.finditer(text):
            if mt.group(1) is not None:
                self.toks.append(("int", int(mt.group(1)), mt.start(1)))
            elif mt.group(2) is not None:
                self.toks.append(("name", mt.group(2), mt.start(2)))
            elif mt.group(3) is not None and not mt.group(3).isspace():
                self.toks.append(("sym", mt.group(3), mt.start(3)))
        self.toks.append(("end", None, len(text)))
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind, value=None):
        t = self.toks[self.i]
        if t[0] != kind or (value is not None and t[1] != value):
            want = value if value is not None else kind
            got = "end of input" if t[0] == "end" else repr(t[1])
            raise ParamSyntaxError(f"expected {want!r}, got {got}", t[2])
        self.i += 1
        return t

    def at(self, kind, value=None):
        t = self.toks[self.i]
        return t[0] == kind and (value is None or t[1] == value)


def _int_list(lx, terminators):
    """Comma-separated integers, ``_`` or nothing; returns (values, start position)."""
    pos = lx.peek()[2]
    if lx.at("sym", "_"):
        lx.take("sym")
        return [], pos
    vals = []
    if any(lx.at("sym", t) for t in terminators):
        return vals, pos
    vals.append(lx.take("int")[1])
    while lx.at("sym", ","):
        lx.take("sym")
        vals.append(lx.take("int")[1])
    return vals, pos


def _positioned(fn, positions):
    try:
        return fn()
    except BicirculantError as e:
        e.position = positions.get(e.field, 0)
        raise


def parse_params(text: str) -> BicirculantParams:
    lx = _Lexer(text)
    head = lx.take("name")
    name = head[1].upper()
    lx.take("sym", "(")
    m_tok = lx.take("int")
    m = m_tok[1]
    if m < 1:
        raise ParamSyntaxError("m must be positive", m_tok[2])
    if name == "B":
        fields = {}
        for key in ("R", "S", "T"):
            lx.take("sym", ";")
            fields[key] = _int_list(lx, (";", ")"))
        lx.take("sym", ")")
        lx.take("end")
        pos = {k: v[1] for k, v in fields.items()}
        return _positioned(lambda: make_params(m, fields["R"][0], fields["S"][0], fields["T"][0]), pos)
    if name in ("GP", "I"):
        args = []
        nargs = 1 if name == "GP" else 2
        for _ in range(nargs):
            if not (lx.at("sym", ",") or lx.at("sym", ";")):
                lx.take("sym", ",")
            lx.take("sym")
            args.append(lx.take("int"))
        lx.take("sym", ")")
        lx.take("end")
        if name == "GP":
            j, k = 1, args[0][1]
            pos = {"R": head[2], "T": args[0][2]}
        else:
            j, k = args[0][1], args[1][1]
            pos = {"R": args[0][2], "T": args[1][2]}
        for val, tok in zip((j, k), args if name == "I" else [args[0], args[0]]):
            if val % m == 0:
                raise ParamSyntaxError("rim type must be nonzero mod m", tok[2])
        return _positioned(lambda: make_params(m, sym(m, j), {0}, sym(m, k)), pos)
    if name == "H":
        lx.take("sym", ";") if lx.at("sym", ";") else lx.take("sym", ",")
        S, spos = _int_list(lx, (")",))
        lx.take("sym", ")")
        lx.take("end")
        return _positioned(lambda: make_params(m, (), S, ()), {"S": spos})
    raise ParamSyntaxError(f"unknown graph family {head[1]!r}", head[2])


__all__ = ["parse_params", "render_params", "ParamSyntaxError"]
