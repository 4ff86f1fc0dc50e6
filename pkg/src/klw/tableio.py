"""
Saving and loading :class:`~klw.hecke.KLTable` objects.

Two formats, chosen by file extension:

``.json``
    Readable. A header (schema, library version, Cartan type, normalization
    tag, element list as reduced words) followed by ``[x, w, coefficients]``
    triples, ``x`` and ``w`` being positions in the element list.

anything else (``.klwt`` by convention)
    Binary. A magic line, a one-line JSON header and a run of little-endian
    ``int64`` arrays. It stores the group enumeration as well so that loading
    never re-enumerates the group.

Both are deterministic: exporting a loaded table reproduces the original bytes.
"""

from __future__ import annotations

import json
import os
from itertools import islice
from pathlib import Path

import numpy as np

from . import __version__
from .coxeter import CartanType, CoxeterSystem, _Indexed
from .errors import KLWError, TableFormatError
from .hecke import NORMALIZATION, KLTable

__all__ = ["SCHEMA", "dumps_json", "loads_json", "dumps_binary", "loads_binary",
           "save_table", "load_table", "cache_path"]

SCHEMA = 1
FORMAT = "klw-table"
MAGIC = b"KLWT\n"
_ARRAYS = ("perms", "word_off", "word_let", "rmul", "lmul", "inv", "rdesc", "ldesc",
           "row_off", "pair_x", "pair_poly", "poly_off", "poly_coef", "mu_off", "mu_x", "mu_val")


def _header(table: KLTable) -> dict:
    return {
        "schema": SCHEMA,
        "format": FORMAT,
        "version": __version__,
        "cartan": str(table.system.cartan),
        "normalization": NORMALIZATION,
        "order": len(table),
    }


def _check_header(head: dict) -> CoxeterSystem:
    if not isinstance(head, dict):
        raise TableFormatError("table header is not an object")
    for key, want in (("format", FORMAT), ("schema", SCHEMA), ("normalization", NORMALIZATION),
                      ("version", __version__)):
        if head.get(key) != want:
            raise TableFormatError(f"table {key} is {head.get(key)!r}, expected {want!r}")
    try:
        system = CoxeterSystem(CartanType.parse(head["cartan"]))
    except (KeyError, KLWError) as exc:
        raise TableFormatError(f"bad Cartan type in table header: {exc}") from exc
    if head.get("order") != system.order:
        raise TableFormatError(f"table lists {head.get('order')} elements, |W| = {system.order}")
    return system


def dumps_json(table: KLTable) -> bytes:
    head = _header(table)
    ix = table.system.indexed
    head["elements"] = ["".join(map(str, w)) for w in ix.words]
    head["entries"] = [[x, w, list(p)] for x, w, p in table.pairs()]
    return (json.dumps(head, sort_keys=True, separators=(",", ":")) + "\n").encode()


def loads_json(raw: bytes) -> KLTable:
    try:
        head = json.loads(raw)
    except (ValueError, UnicodeDecodeError) as exc:
        raise TableFormatError(f"table is not valid JSON: {exc}") from exc
    system = _check_header(head)
    ix = system.indexed
    words = ["".join(map(str, w)) for w in ix.words]
    if head.get("elements") != words:
        raise TableFormatError("element list does not match the canonical enumeration")
    rows: list[dict] = [{} for _ in words]
    try:
        for x, w, coeffs in head["entries"]:
            rows[w][x] = tuple(int(a) for a in coeffs)
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise TableFormatError(f"malformed table entries: {exc}") from exc
    _check_rows(rows)
    return KLTable(system, [{x: r[x] for x in sorted(r)} for r in rows])


def _check_rows(rows):
    for w, row in enumerate(rows):
        if row.get(w) != (1,) or row.get(0, ()) == ():
            raise TableFormatError(f"table row {w} is incomplete")


def dumps_binary(table: KLTable) -> bytes:
    system = table.system
    ix = system.indexed
    polys: dict[tuple[int, ...], int] = {}
    row_off, pair_x, pair_poly = [0], [], []
    for w in range(len(table)):
        for x, p in table.row(w).items():
            pair_x.append(x)
            pair_poly.append(polys.setdefault(p, len(polys)))
        row_off.append(len(pair_x))
    poly_off, poly_coef = [0], []
    for p in polys:
        if any(abs(a) >= 2**62 for a in p):
            raise TableFormatError("coefficient too large for the binary format; use .json")
        poly_coef.extend(p)
        poly_off.append(len(poly_coef))
    word_off, word_let = [0], []
    for wd in ix.words:
        word_let.extend(wd)
        word_off.append(len(word_let))
    arrays = {
        "perms": [v for w in ix.elements for comp in w.data for v in comp],
        "word_off": word_off,
        "word_let": word_let,
        "rmul": [v for row in ix.rmul for v in row],
        "lmul": [v for row in ix.lmul for v in row],
        "inv": ix.inv,
        "rdesc": ix.rdesc,
        "ldesc": ix.ldesc,
        "row_off": row_off,
        "pair_x": pair_x,
        "pair_poly": pair_poly,
        "poly_off": poly_off,
        "poly_coef": poly_coef,
    }
    mu_off, mu_x, mu_val = [0], [], []
    for w in range(len(table)):
        for x, m in table.mu_below(w):
            mu_x.append(x)
            mu_val.append(m)
        mu_off.append(len(mu_x))
    arrays.update(mu_off=mu_off, mu_x=mu_x, mu_val=mu_val)
    head = _header(table)
    head["sizes"] = [len(arrays[k]) for k in _ARRAYS]
    payload = b"".join(np.asarray(arrays[k], dtype="<i8").tobytes() for k in _ARRAYS)
    return MAGIC + json.dumps(head, sort_keys=True, separators=(",", ":")).encode() + b"\n" + payload


def loads_binary(raw: bytes) -> KLTable:
    if not raw.startswith(MAGIC):
        raise TableFormatError("not a klw binary table (bad magic)")
    end = raw.find(b"\n", len(MAGIC))
    if end < 0:
        raise TableFormatError("truncated table header")
    try:
        head = json.loads(raw[len(MAGIC):end])
    except ValueError as exc:
        raise TableFormatError(f"bad table header: {exc}") from exc
    system = _check_header(head)
    sizes = head.get("sizes")
    if not isinstance(sizes, list) or len(sizes) != len(_ARRAYS):
        raise TableFormatError("bad array sizes in table header")
    body = memoryview(raw)[end + 1:]
    if len(body) != 8 * sum(sizes):
        raise TableFormatError(f"table payload has {len(body)} bytes, expected {8 * sum(sizes)}")
    flat = np.frombuffer(body, dtype="<i8")
    n, r = system.order, system.rank
    widths = [m + 1 if f == "A" else m for f, m in zip(system.cartan.families, system.cartan.ranks)]
    expect = {"perms": n * sum(widths), "word_off": n + 1, "rmul": n * r, "lmul": n * r, "inv": n,
              "rdesc": n, "ldesc": n, "row_off": n + 1, "mu_off": n + 1}
    spans = {}
    pos = 0
    for key, size in zip(_ARRAYS, sizes):
        if key in expect and size != expect[key]:
            raise TableFormatError(f"table array {key} has {size} entries, expected {expect[key]}")
        spans[key] = (pos, pos + size)
        pos += size
    for key, bound in (("pair_x", n), ("pair_poly", sizes[_ARRAYS.index("poly_off")] - 1)):
        a, b = spans[key]
        if b > a and (flat[a:b].min() < 0 or flat[a:b].max() >= bound):
            raise TableFormatError(f"table array {key} points outside its target")
    # one tolist() call is much cheaper than one per array
    values = flat.tolist()
    arr = {k: values[a:b] for k, (a, b) in spans.items()}

    width = sum(widths)
    perms = arr["perms"]
    if len(widths) == 1:
        datas = [(tuple(perms[k:k + width]),) for k in range(0, n * width, width)]
    else:
        cuts = list(zip(np.cumsum([0] + widths[:-1]).tolist(), np.cumsum(widths).tolist()))
        datas = [tuple(tuple(perms[k + a:k + b]) for a, b in cuts) for k in range(0, n * width, width)]
    wo, wl = arr["word_off"], arr["word_let"]
    words = [tuple(wl[a:b]) for a, b in zip(wo, wo[1:])]
    rmul = [arr["rmul"][g * n:(g + 1) * n] for g in range(r)]
    lmul = [arr["lmul"][g * n:(g + 1) * n] for g in range(r)]
    system._install_indexed(
        _Indexed.restore(system, datas, words, rmul, lmul, arr["inv"], arr["rdesc"], arr["ldesc"])
    )

    po, pc = arr["poly_off"], arr["poly_coef"]
    polys = [tuple(pc[po[k]:po[k + 1]]) for k in range(len(po) - 1)]
    ro, px, pp = arr["row_off"], arr["pair_x"], arr["pair_poly"]
    mo, mx, mv = arr["mu_off"], arr["mu_x"], arr["mu_val"]
    entries = zip(px, map(polys.__getitem__, pp))
    rows = [dict(islice(entries, b - a)) for a, b in zip(ro, ro[1:])]
    _check_rows(rows)
    mu_pairs = list(zip(mx, mv))
    mus = [mu_pairs[a:b] for a, b in zip(mo, mo[1:])]
    return KLTable(system, rows, mus)


def save_table(table: KLTable, path: str | os.PathLike) -> Path:
    path = Path(path)
    raw = dumps_json(table) if path.suffix == ".json" else dumps_binary(table)
    path.write_bytes(raw)
    return path


def load_table(path: str | os.PathLike) -> KLTable:
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise TableFormatError(f"cannot read table {path}: {exc}") from exc
    return loads_json(raw) if path.suffix == ".json" else loads_binary(raw)


def cache_path(cartan: str | CartanType, directory: str | os.PathLike | None = None) -> Path | None:
    """Location of the cached binary table, under ``directory`` or ``$KLW_TABLE_DIR``."""
    directory = directory or os.environ.get("KLW_TABLE_DIR")
    if not directory:
        return None
    return Path(directory) / f"{CartanType.parse(cartan)}.klwt"
