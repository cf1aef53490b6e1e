"""Structured-text serialization shared by scenario and certificate files.

All rationals travel as decimal-free "numerator/denominator" strings, so
round-trips are lossless and diffs stay readable.  Canonical form is JSON
with sorted keys and fixed separators; certificates are compared byte for
byte in canonical form.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, List, Optional, Tuple

from .errors import SchemaError

SCENARIO_SCHEMA = "scenario/1"
CERTIFICATE_SCHEMA = "certificate/1"


def rat_str(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def rat_parse(s: str) -> Fraction:
    if not isinstance(s, str) or "/" not in s:
        raise SchemaError(f"rational must be a 'p/q' string, got {s!r}")
    num, den = s.split("/", 1)
    try:
        return Fraction(int(num), int(den))
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"bad rational {s!r}: {exc}") from exc


def canonical_dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def canonical_bytes(obj: Any) -> bytes:
    return canonical_dumps(obj).encode("utf-8")


def load_json(path) -> Any:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: not valid JSON: {exc}") from exc


def dump_json(path, obj: Any) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, sort_keys=True, indent=1)
        fh.write("\n")


def check_assumptions(entries: Any, where: str) -> List[dict]:
    """Validate assumption lists: every stipulated fact must carry a tag."""
    if entries is None:
        return []
    if not isinstance(entries, list):
        raise SchemaError(f"{where}: assumptions must be a list")
    out = []
    for e in entries:
        if not isinstance(e, dict) or "statement" not in e or "tag" not in e:
            raise SchemaError(f"{where}: assumption entries need 'tag' and 'statement'")
        if e["tag"] not in ("assumption", "derived"):
            raise SchemaError(f"{where}: assumption tag must be assumption|derived")
        out.append({"tag": e["tag"], "statement": e["statement"]})
    return out


def diff_paths(a: Any, b: Any, prefix: str = "$") -> Optional[str]:
    """First JSON path at which two documents differ, or None."""
    if type(a) is not type(b):
        return prefix
    if isinstance(a, dict):
        for key in sorted(set(a) | set(b)):
            if key not in a or key not in b:
                return f"{prefix}.{key}"
            got = diff_paths(a[key], b[key], f"{prefix}.{key}")
            if got:
                return got
        return None
    if isinstance(a, list):
        if len(a) != len(b):
            return f"{prefix}.length"
        for i, (x, y) in enumerate(zip(a, b)):
            got = diff_paths(x, y, f"{prefix}[{i}]")
            if got:
                return got
        return None
    return None if a == b else prefix


def _is_rational_str(s: str) -> bool:
    return "/" in s and s.split("/", 1)[0].lstrip("-").isdigit()


def mutate_one_field(obj: Any) -> Tuple[Any, str]:
    """Return a deep copy with one leaf altered, plus the path touched.

    Used by integrity tests: a certified document must stop verifying after
    any single-field edit.  Rational strings are preferred targets, then
    integers, numeric strings, other strings, and booleans.
    """
    doc = json.loads(json.dumps(obj))
    leaves: List[Tuple[int, list, Any, str]] = []

    def walk(node, trail, path):
        if isinstance(node, dict):
            for key in sorted(node):
                walk(node[key], trail + [key], f"{path}.{key}")
        elif isinstance(node, list):
            for i, item in enumerate(node):
                walk(item, trail + [i], f"{path}[{i}]")
        elif isinstance(node, bool):
            leaves.append((4, trail, node, path))
        elif isinstance(node, int):
            leaves.append((1, trail, node, path))
        elif isinstance(node, str):
            if _is_rational_str(node):
                leaves.append((0, trail, node, path))
            elif node.lstrip("-").isdigit():
                leaves.append((2, trail, node, path))
            else:
                leaves.append((3, trail, node, path))

    walk(doc, [], "$")
    if not leaves:
        raise ValueError("document has no mutable leaf")
    rank, trail, value, path = min(leaves, key=lambda l: l[0])
    if rank == 0:
        num, den = value.split("/", 1)
        replacement: Any = f"{int(num) + 1}/{den}"
    elif rank == 1:
        replacement = value + 1
    elif rank == 2:
        replacement = str(int(value) + 1)
    elif rank == 3:
        replacement = value + "~"
    else:
        replacement = not value
    target = doc
    for step in trail[:-1]:
        target = target[step]
    target[trail[-1]] = replacement
    return doc, path
