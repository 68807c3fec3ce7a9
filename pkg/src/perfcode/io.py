"""File formats: permutations and matrices (JSON), code files, SQS files,
regular-subgroup files, tau catalogs, and classification output (JSON/CSV).

Bitstring convention: the leftmost character of a row or word string is
coordinate 0 (column 1); so "110" encodes the integer 0b011 = 3.
"""

from __future__ import annotations

import csv
import io as _io
import json

import numpy as np

from .algebra import BitMatrix, PointPerm
from .classify import CatalogEntry
from .codes import CosetUnionCode, ExplicitCode, LinearCode
from .errors import MalformedInput
from .regular_groups import RegularSubgroup, TauCatalog
from .sqs import SQS


def row_to_string(row: int, width: int) -> str:
    return "".join("1" if (row >> j) & 1 else "0" for j in range(width))


def string_to_row(s: str) -> int:
    if not s or any(ch not in "01" for ch in s):
        raise MalformedInput(f"bad bitstring {s!r}")
    return sum(1 << j for j, ch in enumerate(s) if ch == "1")


def matrix_to_strings(m: BitMatrix) -> list[str]:
    return [row_to_string(row, m.cols) for row in m.row_bits]


def matrix_from_strings(rows: list[str]) -> BitMatrix:
    widths = {len(s) for s in rows}
    if len(widths) != 1:
        raise MalformedInput("matrix rows have inconsistent widths")
    return BitMatrix(len(rows), widths.pop(), tuple(string_to_row(s) for s in rows))


# ---------------------------------------------------------------------------
# PointPerm JSON
# ---------------------------------------------------------------------------


def dump_point_perm(tau: PointPerm) -> str:
    return json.dumps({"r": tau.r, "perm": list(tau.images)}, separators=(",", ":"))


def parse_point_perm(text: str) -> PointPerm:
    try:
        obj = json.loads(text)
        return PointPerm(int(obj["r"]), tuple(int(x) for x in obj["perm"]))
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise MalformedInput(f"bad permutation file: {exc}") from exc


def save_point_perm(path, tau: PointPerm) -> None:
    with open(path, "w") as fh:
        fh.write(dump_point_perm(tau) + "\n")


def load_point_perm(path) -> PointPerm:
    with open(path) as fh:
        return parse_point_perm(fh.read())


# ---------------------------------------------------------------------------
# Code files
# ---------------------------------------------------------------------------


def save_code_file(path, code) -> None:
    """Write a code file: header "n=<length> k=<log2 size>", then either
    explicit 0/1 word lines, or a "G" generator section optionally
    followed by an "R" representative section (coset-union codes)."""
    lines = []
    if isinstance(code, ExplicitCode):
        k = code.size.bit_length() - 1
        if 1 << k != code.size:
            raise ValueError("explicit code size is not a power of two")
        lines.append(f"n={code.length} k={k}")
        lines.extend(row_to_string(w, code.length) for w in code.words)
    elif isinstance(code, CosetUnionCode):
        k = code.r + code.base.dim
        lines.append(f"n={code.length} k={k}")
        lines.append("G")
        lines.extend(row_to_string(w, code.length) for w in code.base.generators.row_bits)
        lines.append("R")
        lines.extend(row_to_string(w, code.length) for w in code.reps)
    elif isinstance(code, LinearCode):
        lines.append(f"n={code.length} k={code.dim}")
        lines.append("G")
        lines.extend(row_to_string(w, code.length) for w in code.generators.row_bits)
    else:
        raise TypeError(f"cannot serialize {type(code).__name__}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_code_file(path):
    """Inverse of save_code_file; the section structure picks the type."""
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines or not lines[0].startswith("n="):
        raise MalformedInput("missing code header")
    try:
        fields = dict(part.split("=") for part in lines[0].split())
        n = int(fields["n"])
    except (ValueError, KeyError) as exc:
        raise MalformedInput(f"bad code header: {lines[0]!r}") from exc
    body = lines[1:]
    if not body:
        raise MalformedInput("empty code file")
    if body[0] != "G":
        words = tuple(sorted(string_to_row(s) for s in body))
        if any(len(s) != n for s in body):
            raise MalformedInput("word length does not match header")
        return ExplicitCode(n, words)
    try:
        r_idx = body.index("R")
    except ValueError:
        gens = [string_to_row(s) for s in body[1:]]
        return LinearCode(n, BitMatrix(len(gens), n, tuple(gens)))
    gens = [string_to_row(s) for s in body[1:r_idx]]
    reps = [string_to_row(s) for s in body[r_idx + 1 :]]
    r = len(reps).bit_length() - 1
    if 1 << r != len(reps) or n != 2 << r:
        raise MalformedInput("coset-union sections do not match the header")
    base = LinearCode(n, BitMatrix(len(gens), n, tuple(gens)))
    return CosetUnionCode(r=r, base=base, reps=tuple(reps))


# ---------------------------------------------------------------------------
# SQS files
# ---------------------------------------------------------------------------


def save_sqs(path, q: SQS) -> None:
    """Canonical on-disk form: sorted quadruple lines (golden-test stable)."""
    quads = sorted(q.quadruples)
    with open(path, "w") as fh:
        fh.write(f"v={q.order} b={len(quads)}\n")
        for quad in quads:
            fh.write(" ".join(str(p) for p in quad) + "\n")


def load_sqs(path) -> SQS:
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines or not lines[0].startswith("v="):
        raise MalformedInput("missing SQS header")
    try:
        fields = dict(part.split("=") for part in lines[0].split())
        v, b = int(fields["v"]), int(fields["b"])
    except (ValueError, KeyError) as exc:
        raise MalformedInput(f"bad SQS header: {lines[0]!r}") from exc
    quads = set()
    for ln in lines[1:]:
        try:
            quad = tuple(sorted(int(x) for x in ln.split()))
        except ValueError as exc:
            raise MalformedInput(f"bad quadruple line {ln!r}") from exc
        if len(quad) != 4:
            raise MalformedInput(f"bad quadruple line {ln!r}")
        quads.add(quad)
    if len(quads) != b:
        raise MalformedInput(f"header claims {b} quadruples, file has {len(quads)}")
    return SQS(order=v, quadruples=frozenset(quads))


# ---------------------------------------------------------------------------
# Regular-subgroup files
# ---------------------------------------------------------------------------


def group_to_obj(group: RegularSubgroup) -> dict:
    return {
        "r": group.r,
        "mats": {str(a): matrix_to_strings(m) for a, m in enumerate(group.mats)},
    }


def group_from_obj(obj: dict) -> RegularSubgroup:
    try:
        r = int(obj["r"])
        mats = tuple(
            matrix_from_strings(obj["mats"][str(a)]) for a in range(1 << r)
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput(f"bad group object: {exc}") from exc
    return RegularSubgroup(r=r, mats=mats)


def save_groups(path, r: int, groups, complete: bool) -> None:
    obj = {"r": r, "complete": complete, "groups": [group_to_obj(g) for g in groups]}
    with open(path, "w") as fh:
        json.dump(obj, fh, separators=(",", ":"))
        fh.write("\n")


def load_groups(path):
    with open(path) as fh:
        try:
            obj = json.load(fh)
            return int(obj["r"]), bool(obj["complete"]), [
                group_from_obj(g) for g in obj["groups"]
            ]
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise MalformedInput(f"bad groups file: {exc}") from exc


# ---------------------------------------------------------------------------
# Tau catalogs
# ---------------------------------------------------------------------------


def save_tau_catalog(path, catalog: TauCatalog) -> None:
    """A JSON list of {"tau": [...], "r":, "group_id":, "aut_id":}."""
    with open(path, "w") as fh:
        fh.write("[")
        for i in range(len(catalog)):
            if i:
                fh.write(",")
            gid, aid = catalog.provenance(i)
            images = [int(x) for x in catalog.images[i]]
            fh.write(
                json.dumps(
                    {"tau": images, "r": catalog.r, "group_id": gid, "aut_id": aid},
                    separators=(",", ":"),
                )
            )
        fh.write("]\n")


def load_tau_catalog(path) -> TauCatalog:
    with open(path) as fh:
        try:
            items = json.load(fh)
            if not isinstance(items, list) or not items:
                raise ValueError("catalog must be a non-empty list")
            r = int(items[0]["r"])
            images = np.array([[int(x) for x in it["tau"]] for it in items], dtype=np.int8)
            gids = [int(it["group_id"]) for it in items]
            aids = [int(it["aut_id"]) for it in items]
            if any(int(it["r"]) != r for it in items):
                raise ValueError("mixed r in catalog")
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise MalformedInput(f"bad tau catalog: {exc}") from exc
    return TauCatalog(r, images, gids, aids, complete=True)


# ---------------------------------------------------------------------------
# Classification output
# ---------------------------------------------------------------------------

CSV_COLUMNS = [
    "tau_id",
    "r",
    "rank",
    "kernel_dim",
    "intersection_dim",
    "point_transitive",
    "aut_order",
    "class_id",
    "non_mollard",
    "provenance",
]


def _entry_obj(e: CatalogEntry) -> dict:
    return {
        "tau_id": e.tau_id,
        "r": e.r,
        "rank": e.rank,
        "kernel_dim": e.kernel_dim,
        "intersection_dim": e.intersection_dim,
        "point_transitive": e.point_transitive,
        "aut_order": e.aut_order,
        "class_id": e.class_id,
        "non_mollard": e.non_mollard,
        "provenance": e.provenance,
    }


def emit_catalog_json(entries: list[CatalogEntry]) -> str:
    return json.dumps([_entry_obj(e) for e in entries], separators=(",", ":")) + "\n"


def parse_catalog_json(text: str) -> list[CatalogEntry]:
    try:
        items = json.loads(text)
        return [
            CatalogEntry(
                tau_id=str(it["tau_id"]),
                r=int(it["r"]),
                rank=int(it["rank"]),
                kernel_dim=int(it["kernel_dim"]),
                intersection_dim=int(it["intersection_dim"]),
                point_transitive=bool(it["point_transitive"]),
                aut_order=None if it["aut_order"] is None else int(it["aut_order"]),
                class_id=int(it["class_id"]),
                non_mollard=bool(it["non_mollard"]),
                provenance=str(it["provenance"]),
            )
            for it in items
        ]
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise MalformedInput(f"bad classification JSON: {exc}") from exc


def emit_catalog_csv(entries: list[CatalogEntry]) -> str:
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for e in entries:
        obj = _entry_obj(e)
        row = []
        for col in CSV_COLUMNS:
            val = obj[col]
            if isinstance(val, bool):
                row.append("true" if val else "false")
            elif val is None:
                row.append("")
            else:
                row.append(str(val))
        writer.writerow(row)
    return buf.getvalue()
