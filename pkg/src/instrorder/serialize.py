"""On-disk JSON documents for POVMs, instruments, states, witnesses,
simulation programs and reports.

Complex numbers are stored as [re, im] pairs and matrices as row-major
nested arrays, so documents are trivially parseable anywhere; floats print
with shortest-round-trip precision, which keeps save/load exact.  Parsing is
strict: unknown fields, wrong shapes and unsupported versions all raise
ParseError naming the offending field.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import ParseError
from .instrument import Instrument, QuantumOperation, State
from .order import InstrumentWitness
from .povm import Povm
from .simulate import SimulationProgram

VERSION = 1

KINDS = ("povm", "instrument", "state", "witness", "program", "report")


@dataclass(eq=False)
class Document:
    kind: str
    payload: object
    version: int = VERSION


def _require_keys(obj, where, required, optional=()):
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: expected an object")
    for key in required:
        if key not in obj:
            raise ParseError(f"{where}: missing field '{key}'")
    for key in obj:
        if key not in required and key not in optional:
            raise ParseError(f"{where}: unknown field '{key}'")


def _int_field(obj, where, key, minimum=1):
    value = obj[key]
    if not isinstance(value, int) or isinstance(value, bool) or value < minimum:
        raise ParseError(f"{where}.{key}: expected an integer >= {minimum}")
    return value


def _enc_matrix(M):
    M = np.asarray(M, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in M]


def _dec_matrix(obj, rows, cols, where):
    if not isinstance(obj, list) or len(obj) != rows:
        raise ParseError(f"{where}: expected {rows} rows")
    out = np.empty((rows, cols), dtype=complex)
    for i, row in enumerate(obj):
        if not isinstance(row, list) or len(row) != cols:
            raise ParseError(f"{where}[{i}]: expected {cols} entries")
        for j, entry in enumerate(row):
            if (
                not isinstance(entry, list)
                or len(entry) != 2
                or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in entry)
            ):
                raise ParseError(f"{where}[{i}][{j}]: expected a [re, im] pair")
            out[i, j] = complex(entry[0], entry[1])
    return out


def _enc_povm(P: Povm):
    return {
        "dim": P.dim,
        "outcomes": [{"label": l, "effect": _enc_matrix(E)} for l, E in P.outcomes],
    }


def _dec_povm(obj, where):
    _require_keys(obj, where, ("dim", "outcomes"))
    dim = _int_field(obj, where, "dim")
    if not isinstance(obj["outcomes"], list) or not obj["outcomes"]:
        raise ParseError(f"{where}.outcomes: expected a nonempty list")
    outcomes = []
    for i, entry in enumerate(obj["outcomes"]):
        here = f"{where}.outcomes[{i}]"
        _require_keys(entry, here, ("label", "effect"))
        if not isinstance(entry["label"], str):
            raise ParseError(f"{here}.label: expected a string")
        outcomes.append((entry["label"], _dec_matrix(entry["effect"], dim, dim, f"{here}.effect")))
    return Povm(dim, outcomes)


def _enc_instrument(I: Instrument):
    return {
        "dim_in": I.dim_in,
        "dim_out": I.dim_out,
        "outcomes": [
            {"label": l, "kraus": [_enc_matrix(K) for K in op.kraus]} for l, op in I.outcomes
        ],
    }


def _dec_instrument(obj, where):
    _require_keys(obj, where, ("dim_in", "dim_out", "outcomes"))
    d_in = _int_field(obj, where, "dim_in")
    d_out = _int_field(obj, where, "dim_out")
    if not isinstance(obj["outcomes"], list) or not obj["outcomes"]:
        raise ParseError(f"{where}.outcomes: expected a nonempty list")
    outcomes = []
    for i, entry in enumerate(obj["outcomes"]):
        here = f"{where}.outcomes[{i}]"
        _require_keys(entry, here, ("label", "kraus"))
        if not isinstance(entry["label"], str):
            raise ParseError(f"{here}.label: expected a string")
        if not isinstance(entry["kraus"], list) or not entry["kraus"]:
            raise ParseError(f"{here}.kraus: expected a nonempty list of matrices")
        ks = [
            _dec_matrix(K, d_out, d_in, f"{here}.kraus[{j}]")
            for j, K in enumerate(entry["kraus"])
        ]
        outcomes.append((entry["label"], QuantumOperation(d_in, d_out, ks)))
    return Instrument(d_in, d_out, outcomes)


def _enc_state(s: State):
    return {"dim": s.dim, "matrix": _enc_matrix(s.matrix)}


def _dec_state(obj, where):
    _require_keys(obj, where, ("dim", "matrix"))
    dim = _int_field(obj, where, "dim")
    return State(dim, _dec_matrix(obj["matrix"], dim, dim, f"{where}.matrix"))


def _enc_witness(w: InstrumentWitness):
    return {
        "source_labels": list(w.source_labels),
        "processors": [
            {"source": x, "instrument": _enc_instrument(w.processors[x])}
            for x in w.source_labels
        ],
        "targets": [
            {"label": y, "choi": _enc_matrix(w.target_chois[y])} for y in w.target_labels
        ],
    }


def _dec_witness(obj, where):
    _require_keys(obj, where, ("source_labels", "processors", "targets"))
    labels = obj["source_labels"]
    if not isinstance(labels, list) or not all(isinstance(l, str) for l in labels):
        raise ParseError(f"{where}.source_labels: expected a list of strings")
    processors = {}
    for i, entry in enumerate(obj["processors"]):
        here = f"{where}.processors[{i}]"
        _require_keys(entry, here, ("source", "instrument"))
        if not isinstance(entry["source"], str):
            raise ParseError(f"{here}.source: expected a string")
        processors[entry["source"]] = _dec_instrument(entry["instrument"], f"{here}.instrument")
    if set(processors) != set(labels):
        raise ParseError(f"{where}.processors: must cover exactly the source labels")
    target_labels = []
    target_chois = {}
    for i, entry in enumerate(obj["targets"]):
        here = f"{where}.targets[{i}]"
        _require_keys(entry, here, ("label", "choi"))
        if not isinstance(entry["label"], str):
            raise ParseError(f"{here}.label: expected a string")
        # Choi matrices are square; infer the side length from the rows.
        rows = entry["choi"]
        if not isinstance(rows, list) or not rows:
            raise ParseError(f"{here}.choi: expected a nonempty matrix")
        side = len(rows)
        target_labels.append(entry["label"])
        target_chois[entry["label"]] = _dec_matrix(rows, side, side, f"{here}.choi")
    return InstrumentWitness(
        source_labels=list(labels),
        processors=processors,
        target_labels=target_labels,
        target_chois=target_chois,
    )


def _enc_program(p: SimulationProgram):
    return {
        "components": [_enc_instrument(c) for c in p.components],
        "probs": [float(w) for w in p.probs],
        "processors": [
            {"component": i, "outcome": x, "instrument": _enc_instrument(R)}
            for (i, x), R in sorted(p.processors.items())
        ],
    }


def _dec_program(obj, where):
    _require_keys(obj, where, ("components", "probs", "processors"))
    if not isinstance(obj["components"], list) or not obj["components"]:
        raise ParseError(f"{where}.components: expected a nonempty list")
    components = [
        _dec_instrument(c, f"{where}.components[{i}]") for i, c in enumerate(obj["components"])
    ]
    probs = obj["probs"]
    if not isinstance(probs, list) or not all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in probs
    ):
        raise ParseError(f"{where}.probs: expected a list of numbers")
    processors = {}
    for i, entry in enumerate(obj["processors"]):
        here = f"{where}.processors[{i}]"
        _require_keys(entry, here, ("component", "outcome", "instrument"))
        comp = _int_field(entry, here, "component", minimum=0)
        if not isinstance(entry["outcome"], str):
            raise ParseError(f"{here}.outcome: expected a string")
        if comp >= len(components):
            raise ParseError(f"{here}.component: no component {comp}")
        processors[(comp, entry["outcome"])] = _dec_instrument(
            entry["instrument"], f"{here}.instrument"
        )
    try:
        return SimulationProgram(components, probs, processors)
    except ValueError as exc:
        raise ParseError(f"{where}: {exc}") from None


def document_for(obj) -> Document:
    """Wrap a domain object in a Document, inferring the kind."""
    if isinstance(obj, Povm):
        return Document("povm", obj)
    if isinstance(obj, Instrument):
        return Document("instrument", obj)
    if isinstance(obj, State):
        return Document("state", obj)
    if isinstance(obj, InstrumentWitness):
        return Document("witness", obj)
    if isinstance(obj, SimulationProgram):
        return Document("program", obj)
    if isinstance(obj, dict):
        return Document("report", obj)
    raise TypeError(f"no document kind for {type(obj).__name__}")


def encode(doc: Document) -> dict:
    body = {"kind": doc.kind, "version": doc.version}
    if doc.kind == "povm":
        body.update(_enc_povm(doc.payload))
    elif doc.kind == "instrument":
        body.update(_enc_instrument(doc.payload))
    elif doc.kind == "state":
        body.update(_enc_state(doc.payload))
    elif doc.kind == "witness":
        body.update(_enc_witness(doc.payload))
    elif doc.kind == "program":
        body.update(_enc_program(doc.payload))
    elif doc.kind == "report":
        body["report"] = doc.payload
    else:
        raise ValueError(f"unknown document kind {doc.kind!r}")
    return body


def decode(obj) -> Document:
    if not isinstance(obj, dict):
        raise ParseError("document: expected a JSON object")
    if "kind" not in obj:
        raise ParseError("document: missing field 'kind'")
    if "version" not in obj:
        raise ParseError("document: missing field 'version'")
    if obj["version"] != VERSION:
        raise ParseError(f"document.version: unsupported version {obj['version']!r}")
    kind = obj["kind"]
    if kind not in KINDS:
        raise ParseError(f"document.kind: unknown kind {kind!r}")
    rest = {k: v for k, v in obj.items() if k not in ("kind", "version")}
    where = kind
    if kind == "povm":
        return Document(kind, _dec_povm(rest, where))
    if kind == "instrument":
        return Document(kind, _dec_instrument(rest, where))
    if kind == "state":
        return Document(kind, _dec_state(rest, where))
    if kind == "witness":
        return Document(kind, _dec_witness(rest, where))
    if kind == "program":
        return Document(kind, _dec_program(rest, where))
    _require_keys(rest, where, ("report",))
    if not isinstance(rest["report"], dict):
        raise ParseError("report.report: expected an object")
    return Document(kind, rest["report"])


def save(doc: Document, path) -> None:
    if not isinstance(doc, Document):
        doc = document_for(doc)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(encode(doc), fh, indent=2)
        fh.write("\n")


def load(path) -> Document:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(
                f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
            ) from None
    return decode(raw)
