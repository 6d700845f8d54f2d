"""Read and write the plain-text group definition format.

Format, one statement per line ('#' starts a comment):

    type free 2              # or: type surface 2
    gen a = (re,im re,im re,im re,im)   # row-major 2x2 matrix
    marking a1 b1 a2 b2      # optional
"""

from __future__ import annotations

from .errors import ParseError
from .moebius import GroupDefinition, MoebiusMap


def _parse_entry(tok: str) -> complex:
    parts = tok.split(",")
    if len(parts) != 2:
        raise ParseError(f"matrix entry {tok!r} is not 're,im'")
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError as exc:
        raise ParseError(f"bad number in entry {tok!r}") from exc


def parse_group(text: str, validate: bool = True) -> GroupDefinition:
    ctype = None
    names, maps = [], []
    marking = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if toks[0] == "type":
            if len(toks) != 3 or toks[1] not in ("free", "surface"):
                raise ParseError(f"line {lineno}: bad type statement")
            try:
                ctype = (toks[1], int(toks[2]))
            except ValueError:
                raise ParseError(f"line {lineno}: bad type count")
        elif toks[0] == "gen":
            if len(toks) < 3 or toks[2] != "=":
                raise ParseError(f"line {lineno}: expected 'gen <name> = (...)'")
            name = toks[1]
            body = line.split("=", 1)[1].strip()
            if not (body.startswith("(") and body.endswith(")")):
                raise ParseError(f"line {lineno}: matrix must be parenthesized")
            entries = body[1:-1].split()
            if len(entries) != 4:
                raise ParseError(f"line {lineno}: expected 4 matrix entries")
            a, b, c, d = (_parse_entry(e) for e in entries)
            try:
                m = MoebiusMap(a, b, c, d)
            except ValueError as exc:
                raise ParseError(f"line {lineno}: {exc}") from exc
            names.append(name)
            maps.append(m)
        elif toks[0] == "marking":
            marking = toks[1:]
        else:
            raise ParseError(f"line {lineno}: unknown statement {toks[0]!r}")
    if ctype is None:
        raise ParseError("missing 'type' statement")
    for name in marking or []:
        if name not in names:
            raise ParseError(f"marking references unknown generator {name!r}")
    return GroupDefinition(names, maps, ctype, marking=marking, validate=validate)


def load_group(path, validate: bool = True) -> GroupDefinition:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_group(fh.read(), validate=validate)


def format_group(G: GroupDefinition) -> str:
    lines = [f"type {G.kind} {G.count}"]
    for name, m in zip(G.names, G.maps):
        entries = " ".join(
            f"{z.real!r},{z.imag!r}" for z in (m.a, m.b, m.c, m.d))
        lines.append(f"gen {name} = ({entries})")
    if G.marking:
        lines.append("marking " + " ".join(G.marking))
    return "\n".join(lines) + "\n"


def save_group(G: GroupDefinition, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_group(G))
