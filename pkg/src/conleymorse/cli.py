"""Command-line front end: validate inputs, print Morse data, compute and render barcodes."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field as dc_field
from importlib import resources
from pathlib import Path

import jsonschema

from .complex import SimplicialComplex, build_complex
from .conley import (
    MorseDecomposition,
    conley_morse_graph,
    minimal_morse_decomposition,
    morse_decomposition_from_sets,
)
from .errors import ConleyError, EmptyInput, NotContained
from .mvf import MultivectorField
from .pipeline import Bundle, CombinedBarcode, FiltrationSequence, full_barcode, index_pairs_for
from .zigzag import Bar

log = logging.getLogger("conleymorse")

EXIT_OK, EXIT_DOMAIN, EXIT_IO = 0, 1, 2


class InputError(Exception):
    """Unreadable file, malformed JSON or a schema violation."""


def load_schema(name: str) -> dict:
    return json.loads(resources.files("conleymorse").joinpath(name).read_text())


def load_raw(path: str | Path) -> dict:
    try:
        raw = json.loads(Path(path).read_text())
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror or e}") from e
    except json.JSONDecodeError as e:
        raise InputError(f"malformed JSON in {path}: {e}") from e
    try:
        jsonschema.validate(raw, load_schema("input_schema.json"))
    except jsonschema.ValidationError as e:
        where = "/".join(str(x) for x in e.absolute_path) or "<root>"
        raise InputError(f"schema violation at {where}: {e.message}") from e
    return raw


@dataclass
class Checked:
    """Outcome of checking a raw input: whatever could be built, plus every violation."""

    complex: SimplicialComplex | None = None
    fields: list[MultivectorField | None] = dc_field(default_factory=list)
    isolating: list[frozenset[int]] = dc_field(default_factory=list)
    morse_sets: list[list[frozenset[int]] | None] | None = None
    errors: list[str] = dc_field(default_factory=list)
    warnings: list[str] = dc_field(default_factory=list)

    def bundle(self, p: int, thicken: int) -> Bundle:
        if self.errors:
            raise ConleyError(self.errors[0])
        return Bundle(self.complex, list(self.fields), self.isolating, p, thicken, self.morse_sets)


def _describe(e: ConleyError) -> str:
    return f"{type(e).__name__}: {e}"


def check_input(raw: dict, p: int = 2) -> Checked:
    out = Checked()
    try:
        K = out.complex = build_complex(raw["complex"])
    except ConleyError as e:
        out.errors.append(f"complex: {_describe(e)}")
        return out
    if not raw["fields"]:
        out.errors.append(f"fields: {_describe(EmptyInput('no fields given'))}")
        return out
    for i, part in enumerate(raw["fields"], 1):
        try:
            out.fields.append(MultivectorField(K, part, p))
        except ConleyError as e:
            out.fields.append(None)
            out.errors.append(f"field {i}: {_describe(e)}")
    iso = raw["isolating"]
    n = len(raw["fields"])
    if all(isinstance(x, int) for x in iso):
        sets = [iso] * n
    elif len(iso) == n:
        sets = iso
    else:
        out.errors.append(f"isolating: {len(iso)} sets for {n} fields")
        return out
    for i, N in enumerate(sets, 1):
        bad = [s for s in N if s >= len(K)]
        if bad:
            out.errors.append(f"isolating set {i}: {_describe(NotContained(f'unknown simplex {bad[0]}'))}")
            out.isolating.append(frozenset())
            continue
        N = frozenset(N)
        if not K.is_closed(N):
            missing = sorted(K.closure(N) - N)
            out.warnings.append(f"isolating set {i} is not closed; added faces {missing}")
            N = K.closure(N)
        out.isolating.append(N)
    overrides = raw.get("morse_sets")
    if overrides is not None:
        if len(overrides) != n:
            out.errors.append(f"morse_sets: {len(overrides)} entries for {n} fields")
            return out
        out.morse_sets = [None if o is None else [frozenset(m) for m in o] for o in overrides]
    if out.errors:
        return out
    for i, (f, N) in enumerate(zip(out.fields, out.isolating), 1):
        try:
            if out.morse_sets and out.morse_sets[i - 1] is not None:
                morse_decomposition_from_sets(f, N, out.morse_sets[i - 1], p)
            else:
                minimal_morse_decomposition(f, N, p)
        except ConleyError as e:
            out.errors.append(f"field {i} in its isolating set: {_describe(e)}")
    return out


def _ids(A) -> list[int]:
    return sorted(A)


def bar_json(bar: Bar, source: str) -> dict:
    bf, bc, df, dc = bar.field_span()
    return {
        "dim": bar.dim,
        "birth_pos": bar.birth,
        "death_pos": bar.death,
        "birth_field": bf,
        "death_field": df,
        "birth_closed": bc,
        "death_closed": dc,
        "source": source,
    }


def filtration_id(i: int) -> str:
    return f"filtration-{i + 1}"


def filtration_json(i: int, F: FiltrationSequence) -> dict:
    return {
        "id": filtration_id(i),
        "start_field": F.start + 1,
        "end_field": F.end + 1,
        "morse_sets": list(F.morse),
        "steps": [
            {"pos": F.first_pos + q, "P": _ids(ip.P), "E": _ids(ip.E)} for q, ip in enumerate(F.slots())
        ],
    }


def decomposition_json(dec: MorseDecomposition) -> dict:
    return {"morse_sets": [_ids(m) for m in dec.sets], "kinds": list(dec.kinds), "order": sorted(map(list, dec.order))}


def cmgraph_json(field_no: int, g) -> dict:
    return {
        "field": field_no,
        "vertices": [
            {
                "id": v,
                "simplices": _ids(g.sets[v]),
                "kind": g.decomposition.kinds[v],
                "poincare": g.poincare[v],
            }
            for v in g.vertices
        ],
        "edges": [list(e) for e in g.edges],
    }


def barcode_json(cb: CombinedBarcode, p: int, thicken: int) -> dict:
    return {
        "char": p,
        "thicken": thicken,
        "graph_bars": [bar_json(b, "graph") for b in cb.graph_bars],
        "conley_bars": [bar_json(sb.bar, filtration_id(sb.source)) for sb in cb.conley_bars],
        "filtrations": [filtration_json(i, F) for i, F in enumerate(cb.filtrations)],
        "cm_graphs": [cmgraph_json(i + 1, g) for i, g in enumerate(cb.cm_graphs)],
    }


PALETTE = ("#1b4f72", "#2e86c1", "#85c1e9", "#d6eaf8")


def render_svg(data: dict, n_fields: int) -> str:
    """Static barcode picture: graph bars above a divider, conley bars grouped by dimension."""
    positions = max(2 * n_fields - 1, 1)
    left, right, top, row, gap = 90, 20, 30, 14, 10
    unit = 60
    width = left + positions * unit + right

    def x(pos: float) -> float:
        return left + (pos - 1) * unit

    parts = []
    y = top

    def bar_rect(b: dict, colour: str) -> None:
        nonlocal y
        x0, x1 = x(b["birth_pos"]) + 4, x(b["death_pos"] + 1) - 4
        parts.append(
            f'<rect x="{x0:.1f}" y="{y}" width="{x1 - x0:.1f}" height="{row - 4}" fill="{colour}">'
            f'<title>H{b["dim"]} [{b["birth_pos"]}, {b["death_pos"]}] {b["source"]}</title></rect>'
        )
        y += row

    def label(text: str) -> None:
        parts.append(f'<text x="8" y="{y + row - 4}" font-size="11">{text}</text>')

    label("graph")
    for b in data["graph_bars"]:
        bar_rect(b, PALETTE[b["dim"] % len(PALETTE)])
    y += gap
    parts.append(f'<line x1="0" y1="{y}" x2="{width}" y2="{y}" stroke="#444" stroke-dasharray="4 3"/>')
    y += gap
    dims = sorted({b["dim"] for b in data["conley_bars"]})
    for d in dims:
        label(f"conley H{d}")
        for b in data["conley_bars"]:
            if b["dim"] == d:
                bar_rect(b, PALETTE[d % len(PALETTE)])
        y += gap // 2
    axis = y + gap
    for pos in range(1, positions + 1):
        cx = x(pos) + unit / 2
        text = f"V{(pos + 1) // 2}" if pos % 2 else "∩"
        parts.append(f'<text x="{cx:.1f}" y="{axis + 12}" font-size="10" text-anchor="middle">{text}</text>')
    height = axis + 24
    head = f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">'
    bg = f'<rect width="{width}" height="{height}" fill="white"/>'
    return "\n".join([head, bg, *parts, "</svg>"]) + "\n"


def _emit(obj, path: str | None = None) -> None:
    text = json.dumps(obj, indent=2) + "\n"
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _prepare(args) -> tuple[Checked, int, int]:
    raw = load_raw(args.input)
    p = args.char if getattr(args, "char", None) is not None else raw.get("char", 2)
    thicken = args.thicken if getattr(args, "thicken", None) is not None else raw.get("thicken", 0)
    checked = check_input(raw, p)
    for w in checked.warnings:
        log.warning(w)
    if checked.errors:
        raise ConleyError("; ".join(checked.errors))
    return checked, p, thicken


def _field_index(checked: Checked, i: int) -> int:
    if not 1 <= i <= len(checked.fields):
        raise ConleyError(f"field {i} out of range 1..{len(checked.fields)}")
    return i - 1


def _decomposition(checked: Checked, j: int, p: int) -> MorseDecomposition:
    f, N = checked.fields[j], checked.isolating[j]
    override = checked.morse_sets[j] if checked.morse_sets else None
    if override is None:
        return minimal_morse_decomposition(f, N, p)
    return morse_decomposition_from_sets(f, N, override, p)


def cmd_validate(args) -> int:
    checked = check_input(load_raw(args.input))
    for w in checked.warnings:
        print(f"warning: {w}")
    for e in checked.errors:
        print(f"error: {e}")
    if checked.errors:
        return EXIT_DOMAIN
    print(f"ok: {len(checked.complex)} simplices, {len(checked.fields)} fields")
    return EXIT_OK


def cmd_barcode(args) -> int:
    checked, p, thicken = _prepare(args)
    cb = full_barcode(checked.bundle(p, thicken))
    data = barcode_json(cb, p, thicken)
    _emit(data, args.json)
    if args.svg:
        Path(args.svg).write_text(render_svg(data, len(checked.fields)))
    return EXIT_OK


def cmd_morse(args) -> int:
    checked, p, _ = _prepare(args)
    j = _field_index(checked, args.field)
    _emit({"field": args.field, **decomposition_json(_decomposition(checked, j, p))})
    return EXIT_OK


def cmd_cmgraph(args) -> int:
    checked, p, thicken = _prepare(args)
    j = _field_index(checked, args.field)
    dec = _decomposition(checked, j, p)
    f = checked.fields[j]
    pairs = dict(enumerate(index_pairs_for(f, dec, thicken, p)))
    _emit(cmgraph_json(args.field, conley_morse_graph(f, dec.N, dec, p, pairs)))
    return EXIT_OK


def cmd_filtrations(args) -> int:
    checked, p, thicken = _prepare(args)
    cb = full_barcode(checked.bundle(p, thicken))
    rows = [filtration_json(i, F) for i, F in enumerate(cb.filtrations)]
    if args.field is not None:
        _field_index(checked, args.field)
        rows = [r for r in rows if r["start_field"] <= args.field <= r["end_field"]]
    _emit({"filtrations": rows})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="conleymorse", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def command(name: str, fn, help_: str, field: bool = False, field_required: bool = False):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("input", help="input JSON file")
        sp.add_argument("--char", type=int, default=None, help="field characteristic (default 2)")
        sp.add_argument("--thicken", type=int, default=None, help="thickening rounds (default 0)")
        if field:
            sp.add_argument("--field", type=int, default=None if not field_required else 1, help="1-based field number")
        sp.set_defaults(fn=fn)
        return sp

    command("validate", cmd_validate, "check complex, fields and isolating sets")
    bc = command("barcode", cmd_barcode, "compute the combined barcode")
    bc.add_argument("--json", default=None, metavar="PATH", help="write JSON here instead of stdout")
    bc.add_argument("--svg", default=None, metavar="PATH", help="also render an SVG barcode")
    command("morse", cmd_morse, "minimal Morse sets of one field", field=True, field_required=True)
    command("cmgraph", cmd_cmgraph, "Conley-Morse graph of one field", field=True, field_required=True)
    command("filtrations", cmd_filtrations, "maximal index-pair sequences", field=True)
    return ap


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(format="%(levelname)s: %(message)s", stream=sys.stderr)
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    except (ConleyError, AssertionError) as e:
        print(f"error: {_describe(e) if isinstance(e, ConleyError) else e}", file=sys.stderr)
        return EXIT_DOMAIN
