"""Instance and solution files.

Both are JSON objects written with one top-level key per line in a fixed
order, so files diff cleanly and re-serialise byte-identically::

    {
      "kind": "cacap",
      "n": 3,
      "root": 0,
      "cycles": [[0, 1, 2]],
      "links": [[1, 2], [0, 2]]
    }

A ``"tap"`` file carries ``"edges"`` (tree edges) instead of ``"cycles"``.
``kind`` defaults to ``"cacap"`` and ``root`` to 0.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from .cactus import Instance, check_solution, make_instance, validate_cactus
from .errors import Infeasible, ParseError
from .transforms import TapInstance, tap_to_cacap

INSTANCE_KEYS = {"kind", "n", "root", "cycles", "edges", "links"}
SOLUTION_KEYS = ("algorithm", "link_ids", "size", "feasible", "stats")


@dataclass(frozen=True)
class InstanceFile:
    n: int
    links: tuple[tuple[int, int], ...]
    cycles: tuple[tuple[int, ...], ...] = ()
    edges: tuple[tuple[int, int], ...] = ()
    root: int = 0
    kind: str = "cacap"

    def to_instance(self) -> Instance:
        if self.kind == "tap":
            return tap_to_cacap(TapInstance(self.n, self.edges, self.links, self.root))
        return make_instance(validate_cactus(self.n, self.cycles), self.links, self.root)

    @staticmethod
    def from_instance(instance: Instance) -> "InstanceFile":
        return InstanceFile(
            n=instance.n,
            links=tuple(l.endpoints for l in instance.links),
            cycles=instance.cactus.cycles,
            root=instance.root,
        )


@dataclass(frozen=True)
class SolutionFile:
    algorithm: str
    link_ids: tuple[int, ...]
    size: int
    feasible: bool
    stats: dict[str, Any] = field(default_factory=dict)


def _line_of(text: str, key: str) -> int | None:
    needle = json.dumps(key)
    for no, line in enumerate(text.splitlines(), 1):
        if needle in line:
            return no
    return None


def _load_object(text: str) -> dict:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from None
    if not isinstance(data, dict):
        raise ParseError("top level must be an object", line=1)
    return data


def _is_int(x: Any) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def _int_rows(text: str, data: dict, key: str, arity: int | None) -> tuple[tuple[int, ...], ...]:
    rows = data.get(key, [])
    bad = ParseError(
        f"expected a list of {'pairs' if arity == 2 else 'integer lists'}", line=_line_of(text, key), field=key
    )
    if not isinstance(rows, list):
        raise bad
    out = []
    for row in rows:
        if not isinstance(row, list) or not all(_is_int(x) for x in row):
            raise bad
        if arity is not None and len(row) != arity:
            raise bad
        out.append(tuple(row))
    return tuple(out)


def parse_instance_file(text: str) -> InstanceFile:
    data = _load_object(text)
    extra = set(data) - INSTANCE_KEYS
    if extra:
        key = sorted(extra)[0]
        raise ParseError("unknown key", line=_line_of(text, key), field=key)
    kind = data.get("kind", "cacap")
    if kind not in ("cacap", "tap"):
        raise ParseError("kind must be 'cacap' or 'tap'", line=_line_of(text, "kind"), field="kind")
    for key in ("n", "links"):
        if key not in data:
            raise ParseError("missing key", field=key)
    n, root = data["n"], data.get("root", 0)
    for key, val in (("n", n), ("root", root)):
        if not _is_int(val) or val < 0:
            raise ParseError("expected a non-negative integer", line=_line_of(text, key), field=key)
    if kind == "tap":
        if "cycles" in data:
            raise ParseError("tap files give edges, not cycles", line=_line_of(text, "cycles"), field="cycles")
        edges = _int_rows(text, data, "edges", 2)
        cycles: tuple = ()
    else:
        if "edges" in data:
            raise ParseError("cacap files give cycles, not edges", line=_line_of(text, "edges"), field="edges")
        if "cycles" not in data:
            raise ParseError("missing key", field="cycles")
        cycles = _int_rows(text, data, "cycles", None)
        edges = ()
    links = _int_rows(text, data, "links", 2)
    return InstanceFile(n=n, links=links, cycles=cycles, edges=edges, root=root, kind=kind)


def _rows(rows) -> str:
    return json.dumps([list(r) for r in rows], separators=(", ", ": "))


def serialize_instance_file(f: InstanceFile) -> str:
    lines = [f'  "kind": {json.dumps(f.kind)}', f'  "n": {f.n}', f'  "root": {f.root}']
    if f.kind == "tap":
        lines.append(f'  "edges": {_rows(f.edges)}')
    else:
        lines.append(f'  "cycles": {_rows(f.cycles)}')
    lines.append(f'  "links": {_rows(f.links)}')
    return "{\n" + ",\n".join(lines) + "\n}\n"


def load_instance(path) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return parse_instance_file(fh.read()).to_instance()


def parse_solution_file(text: str) -> SolutionFile:
    data = _load_object(text)
    for key in SOLUTION_KEYS:
        if key not in data:
            raise ParseError("missing key", field=key)
    extra = set(data) - set(SOLUTION_KEYS)
    if extra:
        key = sorted(extra)[0]
        raise ParseError("unknown key", line=_line_of(text, key), field=key)
    if not isinstance(data["algorithm"], str):
        raise ParseError("expected a string", line=_line_of(text, "algorithm"), field="algorithm")
    ids = data["link_ids"]
    if not isinstance(ids, list) or not all(_is_int(i) for i in ids):
        raise ParseError("expected a list of link ids", line=_line_of(text, "link_ids"), field="link_ids")
    if not _is_int(data["size"]):
        raise ParseError("expected an integer", line=_line_of(text, "size"), field="size")
    if not isinstance(data["feasible"], bool):
        raise ParseError("expected true or false", line=_line_of(text, "feasible"), field="feasible")
    if not isinstance(data["stats"], dict):
        raise ParseError("expected an object", line=_line_of(text, "stats"), field="stats")
    return SolutionFile(data["algorithm"], tuple(ids), data["size"], data["feasible"], data["stats"])


def serialize_solution_file(f: SolutionFile) -> str:
    lines = [
        f'  "algorithm": {json.dumps(f.algorithm)}',
        f'  "link_ids": {json.dumps(list(f.link_ids))}',
        f'  "size": {f.size}',
        f'  "feasible": {json.dumps(f.feasible)}',
        f'  "stats": {json.dumps(f.stats, sort_keys=True)}',
    ]
    return "{\n" + ",\n".join(lines) + "\n}\n"


def solution_file_from(instance: Instance, solution) -> SolutionFile:
    try:
        check_solution(instance, solution.link_ids)
        feasible = True
    except Infeasible:
        feasible = False
    stats = dict(solution.stats)
    stats.update({"in_count": solution.in_count, "cross_count": solution.cross_count})
    return SolutionFile(solution.algorithm, tuple(sorted(solution.link_ids)), solution.size, feasible, stats)
