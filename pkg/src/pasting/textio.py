"""Text grammars for the command line and serialization.

Maps:     [n]->[m]:(v0,...,vn)
Terms:    O for the point, [t1,...,tm] for a node
Strings:  whitespace-separated letters l<idx><sign?>, last letter signless
Specs:    dn n p q1..qp
Complexes: JSON {dim, basis: [[names...]...], bd: {name: {plus: {..},
           minus: {..}}}, aug: {name: int}}
Cells:    JSON {dim, levels: [[minus, plus]...], top} with combination
          objects {name: coeff}
"""

from __future__ import annotations

import json
import re

from .adc import Adc, Combi
from .delta import LetterString, MonotoneMap
from .theta import POINT, Term, node


class ParseError(ValueError):
    def __init__(self, message, position=None):
        self.position = position
        super().__init__(message if position is None
                         else f"{message} (at position {position})")


MAP_RE = re.compile(r"^\[(\d+)\]->\[(\d+)\]:\(([^)]*)\)$")


def parse_map(text: str) -> MonotoneMap:
    m = MAP_RE.match(text.strip())
    if not m:
        raise ParseError("expected [n]->[m]:(v0,...,vn)", 0)
    n, mm = int(m.group(1)), int(m.group(2))
    body = m.group(3).strip()
    values = tuple(int(v) for v in body.split(",")) if body else ()
    try:
        return MonotoneMap(n, mm, values)
    except AssertionError as exc:
        raise ParseError(str(exc) or "malformed monotone map") from exc


def show_map(f: MonotoneMap) -> str:
    return f"[{f.source_size}]->[{f.target_size}]:(" + \
        ",".join(map(str, f.values)) + ")"


def parse_term(text: str) -> Term:
    pos = 0
    s = text.strip()

    def skip_ws(i):
        while i < len(s) and s[i] in " \t":
            i += 1
        return i

    def term(i):
        i = skip_ws(i)
        if i >= len(s):
            raise ParseError("unexpected end of term", i)
        if s[i] == "O":
            return POINT, i + 1
        if s[i] != "[":
            raise ParseError(f"expected 'O' or '[', found {s[i]!r}", i)
        i += 1
        children = []
        while True:
            child, i = term(i)
            children.append(child)
            i = skip_ws(i)
            if i >= len(s):
                raise ParseError("unclosed bracket", i)
            if s[i] == ",":
                i += 1
                continue
            if s[i] == "]":
                return node(*children), i + 1
            raise ParseError(f"expected ',' or ']', found {s[i]!r}", i)

    out, end = term(pos)
    end = skip_ws(end)
    if end != len(s):
        raise ParseError("trailing input after term", end)
    return out


def show_term(t: Term) -> str:
    return repr(t)


LETTER_RE = re.compile(r"^l(\d+)([-*+]?)$")


def parse_string(text: str, alphabet_bound: int | None = None) -> LetterString:
    words = text.split()
    letters = []
    for k, w in enumerate(words):
        m = LETTER_RE.match(w)
        if not m:
            raise ParseError(f"bad letter {w!r}", k)
        idx = int(m.group(1))
        sign = m.group(2) or None
        if k == len(words) - 1 and sign is not None:
            raise ParseError("trailing letter must be signless", k)
        letters.append((idx, sign))
    bound = alphabet_bound
    if bound is None:
        bound = max((i for i, _ in letters), default=0) + 1
    return LetterString(tuple(letters), bound)


def show_string(s: LetterString) -> str:
    return " ".join(f"l{i}{sg or ''}" for i, sg in s.letters)


def parse_spec(words):
    from .dgens import DnSpec
    if len(words) < 3 or words[0] != "dn":
        raise ParseError("expected: dn n p q1..qp")
    n, p = int(words[1]), int(words[2])
    q = tuple(int(w) for w in words[3:])
    if len(q) != p:
        raise ParseError(f"expected {p} budget entries, found {len(q)}")
    return DnSpec(n, p, q)


def adc_to_json(x: Adc) -> dict:
    return {
        "dim": x.dim,
        "basis": [list(lv) for lv in x.basis],
        "bd": {nm: {"plus": dict(x.bd_plus[nm].terms),
                    "minus": dict(x.bd_minus[nm].terms)}
               for lv in x.basis[1:] for nm in lv},
        "aug": dict(x.aug),
    }


def adc_from_json(data: dict) -> Adc:
    basis = tuple(tuple(lv) for lv in data["basis"])
    bd_plus, bd_minus = {}, {}
    for nm, sides in data.get("bd", {}).items():
        bd_plus[nm] = Combi(sides.get("plus", {}))
        bd_minus[nm] = Combi(sides.get("minus", {}))
    return Adc(basis, bd_plus, bd_minus, dict(data["aug"]))


def parse_adc(text: str) -> Adc:
    try:
        return adc_from_json(json.loads(text))
    except (json.JSONDecodeError, KeyError) as exc:
        raise ParseError(f"bad complex JSON: {exc}") from exc


def cell_to_json(c) -> dict:
    return {"dim": c.top_dim,
            "levels": [[dict(mi.terms), dict(pl.terms)]
                       for mi, pl in c.tables],
            "top": dict(c.top.terms)}


def cell_from_json(data: dict):
    from .omega import Cell
    tables = tuple((Combi(mi), Combi(pl)) for mi, pl in data["levels"])
    return Cell(tables, Combi(data["top"]), data["dim"])
