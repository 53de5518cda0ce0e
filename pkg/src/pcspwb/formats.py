"""Line-oriented text formats for structures and instances.

Structure file::

    # comments run to end of line
    structure one-in-three
    domain 2            # or: domain a b c  (names are interned as 0, 1, 2)
    relation R 3
    1 0 0
    0 1 0
    0 0 1
    end

Instance file::

    instance example
    var x y z           # optional; without it variables are collected in order
    constraint R x y z
    triple x y z        # shorthand for constraint R x y z
    end                 # optional

An instance made only of ``triple`` lines parses to a
:class:`~pcspwb.pcsp13.TripleInstance`.
"""

from __future__ import annotations

from typing import Mapping

from .core import Instance, RelationalStructure, validate_structure
from .errors import ParseError
from .pcsp13 import TripleInstance


def _lines(text: str):
    for n, line in enumerate(text.splitlines(), 1):
        toks = line.split("#", 1)[0].split()
        if toks:
            yield n, toks


def parse_structure(text: str) -> RelationalStructure:
    name = None
    names: list[str] | None = None
    domain_size = None
    arities: dict[str, int] = {}
    relations: dict[str, list[tuple]] = {}
    current = None
    ended = False
    lines = list(_lines(text))
    if not lines:
        raise ParseError("empty structure file")
    for n, toks in lines:
        if ended:
            raise ParseError("content after 'end'", n, 1)
        key = toks[0]
        if key == "structure":
            if len(toks) > 2 or name is not None:
                raise ParseError("malformed or repeated 'structure' line", n, 1)
            name = toks[1] if len(toks) == 2 else ""
        elif key == "domain":
            if domain_size is not None:
                raise ParseError("repeated 'domain' line", n, 1)
            if len(toks) == 2 and toks[1].isdigit():
                domain_size = int(toks[1])
            elif len(toks) >= 2:
                names = toks[1:]
                if len(set(names)) != len(names):
                    raise ParseError("duplicate element name", n)
                domain_size = len(names)
            else:
                raise ParseError("'domain' needs a size or element names", n, 1)
            if domain_size < 1:
                raise ParseError("domain must be nonempty", n, 2)
        elif key == "relation":
            if len(toks) != 3 or not toks[2].isdigit() or int(toks[2]) < 1:
                raise ParseError("expected 'relation <name> <arity>' with arity >= 1", n, 1)
            if toks[1] in arities:
                raise ParseError(f"relation {toks[1]} declared twice", n, 10)
            current = toks[1]
            arities[current] = int(toks[2])
            relations[current] = []
        elif key == "end":
            ended = True
        else:
            if current is None:
                raise ParseError(f"unexpected {key!r} before any relation", n, 1)
            if domain_size is None:
                raise ParseError("tuple before 'domain' line", n, 1)
            if len(toks) != arities[current]:
                raise ParseError(
                    f"tuple of length {len(toks)} in relation {current} of arity {arities[current]}", n, 1)
            tup = []
            for col, tok in enumerate(toks, 1):
                if names is not None:
                    if tok not in names:
                        raise ParseError(f"unknown element {tok!r}", n, col)
                    tup.append(names.index(tok))
                else:
                    try:
                        tup.append(int(tok))
                    except ValueError:
                        raise ParseError(f"element {tok!r} is not an integer", n, col) from None
            relations[current].append(tuple(tup))
    if name is None:
        raise ParseError("missing 'structure' header")
    if domain_size is None:
        raise ParseError("missing 'domain' line")
    report = validate_structure(domain_size, relations, arities)
    if report:
        raise ParseError(report[0].message)
    return RelationalStructure(domain_size, relations, arities, name=name or None)


def format_structure(A: RelationalStructure, name: str | None = None) -> str:
    out = [f"structure {name or A.name or 'unnamed'}", f"domain {A.domain_size}"]
    for r, k in A.signature.items():
        out.append(f"relation {r} {k}")
        out += [" ".join(map(str, t)) for t in A.tuples(r)]
    out.append("end")
    return "\n".join(out) + "\n"


def parse_instance(text: str, signature: Mapping[str, int] | None = None):
    """Parse an instance file; unknown relations are errors when ``signature`` is given."""
    declared: list[str] | None = None
    seen: list[str] = []
    constraints: list[tuple[str, tuple]] = []
    any_constraint = False
    arities: dict[str, int] = dict(signature or {})
    ended = False
    lines = list(_lines(text))
    if not lines:
        raise ParseError("empty instance file")
    for n, toks in lines:
        if ended:
            raise ParseError("content after 'end'", n, 1)
        key = toks[0]
        if key == "instance":
            continue
        if key == "var":
            declared = (declared or []) + toks[1:]
            continue
        if key == "end":
            ended = True
            continue
        if key == "triple":
            rel, scope = "R", tuple(toks[1:])
            if len(scope) != 3:
                raise ParseError("'triple' takes exactly three variables", n, 1)
        elif key == "constraint":
            if len(toks) < 3:
                raise ParseError("expected 'constraint <relation> <vars...>'", n, 1)
            rel, scope = toks[1], tuple(toks[2:])
            any_constraint = True
        else:
            raise ParseError(f"unknown statement {key!r}", n, 1)
        if signature is not None and rel not in signature:
            raise ParseError(f"unknown relation {rel!r}", n, 2 if key == "constraint" else 1)
        if arities.setdefault(rel, len(scope)) != len(scope):
            raise ParseError(f"relation {rel} has arity {arities[rel]}, got {len(scope)} variables", n)
        if declared is not None:
            for v in scope:
                if v not in declared:
                    raise ParseError(f"undeclared variable {v!r}", n)
        seen += scope
        constraints.append((rel, scope))
    variables = declared if declared is not None else seen
    if not any_constraint:
        return TripleInstance(variables, [s for _, s in constraints])
    return Instance(variables, constraints, {r: arities[r] for r, _ in constraints})


def format_instance(X, name: str = "instance") -> str:
    out = [f"instance {name}", "var " + " ".join(map(str, X.variables))]
    if isinstance(X, TripleInstance):
        out += ["triple " + " ".join(map(str, t)) for t in X.triples]
    else:
        out += [" ".join(["constraint", r, *map(str, s)]) for r, s in X.constraints]
    out.append("end")
    return "\n".join(out) + "\n"


def format_assignment(h: Mapping) -> str:
    return "".join(f"{v} = {a}\n" for v, a in h.items())
