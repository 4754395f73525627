"""
JSON input documents

A document names algebras, pairs, Poisson algebras, Rinehart data, modules,
jets and equivalences. Tensors are sparse lists of entries
[label, label, ..., "p/q"] keyed by basis labels; JSON floats are refused.

Example:
    {
      "schema_version": "1.0",
      "algebras": {
        "DUAL": {"kind": "associative", "basis": ["1", "x"], "unit": "1",
                 "c": [["1", "1", "1", "1"], ["1", "x", "x", "1"], ["x", "1", "x", "1"]]},
        "ZERO": {"kind": "lie", "basis": [], "c": []}
      },
      "pairs": {"DUAL_PAIR": {"A": "DUAL", "L": "ZERO", "mu": []}},
      "jets": {"X2": {"base": "DUAL_PAIR", "order": 1, "alpha": {"1": [["x", "x", "1", "1"]]}}}
    }
"""
import json
import logging
from dataclasses import dataclass, field, replace
from decimal import Decimal
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .algebra import (ASSOCIATIVE, LIE, LeibnizPair, PairModule, PoissonAlgebra, StructureAlgebra,
                      ValidationReport, self_module, validate_associative, validate_lie, validate_module,
                      validate_pair, validate_poisson, validate_poisson_module, validate_rinehart)
from .common_utils import ZERO, format_rational, parse_rational
from .config import SCHEMA_VERSION, get_example_path
from .deformation import DeformationJet, EquivalenceJet
from .errors import DocumentError, StructureError

logger = logging.getLogger(__name__)

SECTIONS = ("algebras", "pairs", "poisson", "rinehart", "modules", "jets", "equivalences")

Base = Union[LeibnizPair, PoissonAlgebra]


@dataclass
class ModuleEntry:
    base: str
    module: PairModule
    declared_self: bool = False


@dataclass
class RinehartEntry:
    pair: str
    a_action_on_L: np.ndarray


@dataclass
class InputDocument:
    """Parsed document; every reference has been resolved"""
    schema_version: str = SCHEMA_VERSION
    algebras: Dict[str, StructureAlgebra] = field(default_factory=dict)
    pairs: Dict[str, LeibnizPair] = field(default_factory=dict)
    poisson: Dict[str, PoissonAlgebra] = field(default_factory=dict)
    rinehart: Dict[str, RinehartEntry] = field(default_factory=dict)
    modules: Dict[str, ModuleEntry] = field(default_factory=dict)
    jets: Dict[str, DeformationJet] = field(default_factory=dict)
    equivalences: Dict[str, EquivalenceJet] = field(default_factory=dict)
    source: Optional[str] = None

    def base(self, name: str, location: str = "") -> Base:
        """A pair or Poisson algebra by name"""
        if name in self.pairs:
            return self.pairs[name]
        if name in self.poisson:
            return self.poisson[name]
        raise DocumentError(f"no pair or poisson algebra named '{name}'", location)

    def module(self, name: str, location: str = "") -> ModuleEntry:
        try:
            return self.modules[name]
        except KeyError:
            raise DocumentError(f"no module named '{name}'", location)

    def jet(self, name: str, location: str = "") -> DeformationJet:
        try:
            return self.jets[name]
        except KeyError:
            raise DocumentError(f"no jet named '{name}'", location)


def _value(raw: Any, location: str):
    if isinstance(raw, bool):
        raise DocumentError("booleans are not rational coefficients", location)
    if isinstance(raw, int):
        return parse_rational(str(raw))
    if isinstance(raw, (float, Decimal)):
        raise DocumentError(f"floating point value {raw} refused; write rationals as \"p/q\" strings", location)
    if isinstance(raw, str):
        try:
            return parse_rational(raw)
        except StructureError as exc:
            raise DocumentError(str(exc), location)
    raise DocumentError(f"expected a rational, got {type(raw).__name__}", location)


def _labels(raw: Any, location: str) -> Tuple[str, ...]:
    if not isinstance(raw, list) or not all(isinstance(label, str) for label in raw):
        raise DocumentError("basis must be a list of label strings", location)
    if len(set(raw)) != len(raw):
        raise DocumentError("duplicate basis labels", location)
    return tuple(raw)


def parse_tensor(raw: Any, axes: Sequence[Sequence[str]], location: str) -> np.ndarray:
    """
    Dense object tensor from sparse labelled entries

    Args:
        raw: List of [label_1, ..., label_k, value] entries
        axes: Basis labels of each of the k axes
        location: JSON path used in error messages

    Returns:
        Tensor of Fractions with unlisted entries zero
    """
    if raw is None:
        raw = []
    if not isinstance(raw, list):
        raise DocumentError("tensor must be a list of entries", location)
    lookup = [{label: i for i, label in enumerate(axis)} for axis in axes]
    tensor = np.full(tuple(len(axis) for axis in axes), ZERO, dtype=object)
    seen = set()
    for n, entry in enumerate(raw):
        where = f"{location}[{n}]"
        if not isinstance(entry, list) or len(entry) != len(axes) + 1:
            raise DocumentError(f"entry must be {len(axes)} labels and a value", where)
        index = []
        for axis, label in enumerate(entry[:-1]):
            if label not in lookup[axis]:
                raise DocumentError(f"unknown basis label {label!r}", where)
            index.append(lookup[axis][label])
        key = tuple(index)
        if key in seen:
            raise DocumentError(f"duplicate entry for {tuple(entry[:-1])}", where)
        seen.add(key)
        tensor[key] = _value(entry[-1], where)
    return tensor


def dump_tensor(tensor: np.ndarray, axes: Sequence[Sequence[str]]) -> List[List[str]]:
    """Sparse entries in basis order, zeros dropped"""
    entries = []
    for index in np.argwhere(np.asarray(tensor != 0, dtype=bool)):
        labels = [axes[axis][i] for axis, i in enumerate(index)]
        entries.append(labels + [format_rational(tensor[tuple(index)])])
    return entries


def _section(raw: Dict[str, Any], name: str) -> Dict[str, Any]:
    body = raw.get(name, {})
    if not isinstance(body, dict):
        raise DocumentError("section must be an object keyed by name", name)
    return body


def _require(body: Dict[str, Any], key: str, location: str) -> Any:
    if not isinstance(body, dict):
        raise DocumentError("definition must be an object", location)
    if key not in body:
        raise DocumentError(f"missing field '{key}'", location)
    return body[key]


def _build(constructor, location: str, *args, **kwargs):
    try:
        return constructor(*args, **kwargs)
    except StructureError as exc:
        raise DocumentError(str(exc), location)


def _parse_algebra(name: str, body: Dict[str, Any]) -> StructureAlgebra:
    location = f"algebras.{name}"
    kind = _require(body, "kind", location)
    if kind not in (ASSOCIATIVE, LIE):
        raise DocumentError(f"kind must be '{ASSOCIATIVE}' or '{LIE}'", f"{location}.kind")
    labels = _labels(_require(body, "basis", location), f"{location}.basis")
    c = parse_tensor(body.get("c"), [labels] * 3, f"{location}.c")
    unit = body.get("unit")
    unit_index = None
    if unit is not None:
        if unit not in labels:
            raise DocumentError(f"unit {unit!r} is not a basis label", f"{location}.unit")
        unit_index = labels.index(unit)
    return _build(StructureAlgebra, location, kind, labels, c, unit_index=unit_index, name=name)


def _algebra_ref(doc: InputDocument, ref: Any, location: str) -> StructureAlgebra:
    if ref not in doc.algebras:
        raise DocumentError(f"unknown algebra {ref!r}", location)
    return doc.algebras[ref]


def _parse_pair(doc: InputDocument, name: str, body: Dict[str, Any]) -> LeibnizPair:
    location = f"pairs.{name}"
    A = _algebra_ref(doc, _require(body, "A", location), f"{location}.A")
    L = _algebra_ref(doc, _require(body, "L", location), f"{location}.L")
    mu = parse_tensor(body.get("mu"), [L.basis_labels, A.basis_labels, A.basis_labels], f"{location}.mu")
    return _build(LeibnizPair, location, A, L, mu, name=name)


def _parse_poisson(doc: InputDocument, name: str, body: Dict[str, Any]) -> PoissonAlgebra:
    location = f"poisson.{name}"
    A = _algebra_ref(doc, _require(body, "A", location), f"{location}.A")
    bracket = parse_tensor(body.get("bracket"), [A.basis_labels] * 3, f"{location}.bracket")
    return _build(PoissonAlgebra, location, A, bracket, name=name)


def _pair_of(base: Base) -> LeibnizPair:
    return base.as_pair() if isinstance(base, PoissonAlgebra) else base


def _parse_module(doc: InputDocument, name: str, body: Dict[str, Any]) -> ModuleEntry:
    location = f"modules.{name}"
    base_name = _require(body, "pair", location)
    pair = _pair_of(doc.base(base_name, f"{location}.pair"))
    if body.get("self") is True:
        return ModuleEntry(base_name, replace(self_module(pair), name=name), declared_self=True)
    M = _labels(_require(body, "M", location), f"{location}.M")
    P = _labels(body.get("P", []), f"{location}.P")
    la, ll = pair.A.basis_labels, pair.L.basis_labels
    tensors = {
        "left_act": parse_tensor(body.get("left_act"), [la, M, M], f"{location}.left_act"),
        "right_act": parse_tensor(body.get("right_act"), [M, la, M], f"{location}.right_act"),
        "L_on_M": parse_tensor(body.get("L_on_M"), [ll, M, M], f"{location}.L_on_M"),
        "L_on_P": parse_tensor(body.get("L_on_P"), [ll, P, P], f"{location}.L_on_P"),
        "P_on_A": parse_tensor(body.get("P_on_A"), [P, la, M], f"{location}.P_on_A"),
    }
    regular = body.get("regular", False)
    if not isinstance(regular, bool):
        raise DocumentError("regular must be true or false", f"{location}.regular")
    module = _build(PairModule, location, M, P, regular=regular, name=name, **tensors)
    return ModuleEntry(base_name, _build(module.check_shapes, location, pair))


def _parse_rinehart(doc: InputDocument, name: str, body: Dict[str, Any]) -> RinehartEntry:
    location = f"rinehart.{name}"
    pair_name = _require(body, "pair", location)
    if pair_name not in doc.pairs:
        raise DocumentError(f"unknown pair {pair_name!r}", f"{location}.pair")
    pair = doc.pairs[pair_name]
    action = parse_tensor(body.get("a_action_on_L"),
                          [pair.A.basis_labels, pair.L.basis_labels, pair.L.basis_labels],
                          f"{location}.a_action_on_L")
    return RinehartEntry(pair_name, action)


def _base_axes(base: Base) -> Tuple[Tuple[str, ...], Tuple[str, ...]]:
    if isinstance(base, PoissonAlgebra):
        return base.A.basis_labels, base.A.basis_labels
    return base.A.basis_labels, base.L.basis_labels


def _order(body: Dict[str, Any], location: str) -> int:
    order = _require(body, "order", location)
    if isinstance(order, bool) or not isinstance(order, int) or order < 0:
        raise DocumentError("order must be a non-negative integer", f"{location}.order")
    return order


def _series(raw: Any, order: int, axes: Sequence[Sequence[str]], location: str) -> Tuple[np.ndarray, ...]:
    """Order-indexed tensors {"1": entries, "2": ...}; absent orders are zero"""
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise DocumentError("expected an object keyed by order", location)
    terms = [np.full(tuple(len(axis) for axis in axes), ZERO, dtype=object) for _ in range(order)]
    for key, entries in raw.items():
        if not key.isdigit() or not 1 <= int(key) <= order:
            raise DocumentError(f"order key {key!r} outside 1..{order}", location)
        terms[int(key) - 1] = parse_tensor(entries, axes, f"{location}.{key}")
    return tuple(terms)


def _parse_jet(doc: InputDocument, name: str, body: Dict[str, Any]) -> DeformationJet:
    location = f"jets.{name}"
    base = doc.base(_require(body, "base", location), f"{location}.base")
    order = _order(body, location)
    la, ll = _base_axes(base)
    alpha = _series(body.get("alpha"), order, [la, la, la], f"{location}.alpha")
    lam = _series(body.get("lambda"), order, [ll, ll, ll], f"{location}.lambda")
    if isinstance(base, PoissonAlgebra):
        if body.get("mu"):
            raise DocumentError("poisson jets carry no mu (mu = lambda)", f"{location}.mu")
        mu: Tuple[np.ndarray, ...] = ()
    else:
        mu = _series(body.get("mu"), order, [ll, la, la], f"{location}.mu")
    return _build(DeformationJet, location, base, order, alpha, mu, lam, name=name)


def _parse_equivalence(doc: InputDocument, name: str, body: Dict[str, Any]) -> EquivalenceJet:
    location = f"equivalences.{name}"
    base = doc.base(_require(body, "base", location), f"{location}.base")
    order = _order(body, location)
    la, ll = _base_axes(base)
    phi = _series(body.get("phi"), order, [la, la], f"{location}.phi")
    if isinstance(base, PoissonAlgebra):
        if body.get("psi"):
            raise DocumentError("poisson equivalences use psi = phi", f"{location}.psi")
        psi: Tuple[np.ndarray, ...] = ()
    else:
        psi = _series(body.get("psi"), order, [ll, ll], f"{location}.psi")
    return _build(EquivalenceJet, location, base, order, phi, psi, name=name)


def parse_document(raw: Any, source: Optional[str] = None) -> InputDocument:
    """
    Resolve a decoded JSON document

    Raises:
        DocumentError: wrong schema version, unknown section, malformed entry
            or unresolved reference, with the JSON path of the problem
    """
    if not isinstance(raw, dict):
        raise DocumentError("document must be a JSON object")
    version = raw.get("schema_version")
    if version != SCHEMA_VERSION:
        raise DocumentError(f"schema_version must be \"{SCHEMA_VERSION}\", got {version!r}", "schema_version")
    unknown = sorted(set(raw) - set(SECTIONS) - {"schema_version"})
    if unknown:
        raise DocumentError(f"unknown sections {unknown}")
    doc = InputDocument(version, source=source)
    for name, body in _section(raw, "algebras").items():
        doc.algebras[name] = _parse_algebra(name, body)
    for name, body in _section(raw, "pairs").items():
        doc.pairs[name] = _parse_pair(doc, name, body)
    for name, body in _section(raw, "poisson").items():
        if name in doc.pairs:
            raise DocumentError("name already used by a pair", f"poisson.{name}")
        doc.poisson[name] = _parse_poisson(doc, name, body)
    for name, body in _section(raw, "rinehart").items():
        doc.rinehart[name] = _parse_rinehart(doc, name, body)
    for name, body in _section(raw, "modules").items():
        doc.modules[name] = _parse_module(doc, name, body)
    for name, body in _section(raw, "jets").items():
        doc.jets[name] = _parse_jet(doc, name, body)
    for name, body in _section(raw, "equivalences").items():
        doc.equivalences[name] = _parse_equivalence(doc, name, body)
    logger.info(f"parsed document {source or '<inline>'}: "
                + ", ".join(f"{len(getattr(doc, s))} {s}" for s in SECTIONS))
    return doc


def resolve_input(path_or_name: str) -> Path:
    """A file path, or the name of a bundled example"""
    path = Path(path_or_name)
    if path.is_file():
        return path
    return get_example_path(path_or_name)


def load_document(path_or_name: Union[str, Path]) -> InputDocument:
    """
    Read and parse a document file, or a bundled example by name

    Raises:
        DocumentError: unreadable file, invalid JSON or an invalid document
    """
    path = resolve_input(str(path_or_name))
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc.strerror}")
    return loads_document(text, source=str(path))


def loads_document(text: str, source: Optional[str] = None) -> InputDocument:
    try:
        raw = json.loads(text, parse_float=Decimal)
    except json.JSONDecodeError as exc:
        raise DocumentError(exc.msg, f"line {exc.lineno} column {exc.colno}")
    return parse_document(raw, source)


def _dump_series(terms: Sequence[np.ndarray], axes: Sequence[Sequence[str]]) -> Dict[str, List]:
    out = {}
    for k, term in enumerate(terms, start=1):
        entries = dump_tensor(term, axes)
        if entries:
            out[str(k)] = entries
    return out


def dump_document(doc: InputDocument) -> Dict[str, Any]:
    """Deterministic JSON-ready form; parse_document(dump_document(d)) rebuilds d"""
    out: Dict[str, Any] = {"schema_version": doc.schema_version}
    algebras = {}
    for name, alg in doc.algebras.items():
        body: Dict[str, Any] = {"kind": alg.kind, "basis": list(alg.basis_labels),
                                "c": dump_tensor(alg.c, [alg.basis_labels] * 3)}
        if alg.unit_index is not None:
            body["unit"] = alg.basis_labels[alg.unit_index]
        algebras[name] = body
    out["algebras"] = algebras
    out["pairs"] = {
        name: {"A": pair.A.name, "L": pair.L.name,
               "mu": dump_tensor(pair.mu, [pair.L.basis_labels, pair.A.basis_labels, pair.A.basis_labels])}
        for name, pair in doc.pairs.items()
    }
    out["poisson"] = {
        name: {"A": p.A.name, "bracket": dump_tensor(p.bracket, [p.A.basis_labels] * 3)}
        for name, p in doc.poisson.items()
    }
    rinehart = {}
    for name, entry in doc.rinehart.items():
        pair = doc.pairs[entry.pair]
        rinehart[name] = {"pair": entry.pair, "a_action_on_L": dump_tensor(
            entry.a_action_on_L, [pair.A.basis_labels, pair.L.basis_labels, pair.L.basis_labels])}
    out["rinehart"] = rinehart
    modules = {}
    for name, entry in doc.modules.items():
        if entry.declared_self:
            modules[name] = {"pair": entry.base, "self": True}
            continue
        mod = entry.module
        pair = _pair_of(doc.base(entry.base))
        la, ll, M, P = pair.A.basis_labels, pair.L.basis_labels, mod.M_labels, mod.P_labels
        body = {
            "pair": entry.base, "M": list(M), "P": list(P),
            "left_act": dump_tensor(mod.left_act, [la, M, M]),
            "right_act": dump_tensor(mod.right_act, [M, la, M]),
            "L_on_M": dump_tensor(mod.L_on_M, [ll, M, M]),
            "L_on_P": dump_tensor(mod.L_on_P, [ll, P, P]),
            "P_on_A": dump_tensor(mod.P_on_A, [P, la, M]),
        }
        if mod.regular:
            body["regular"] = True
        modules[name] = body
    out["modules"] = modules
    jets = {}
    for name, jet in doc.jets.items():
        la, ll = _base_axes(jet.base)
        body = {"base": jet.base.name, "order": jet.order,
                "alpha": _dump_series(jet.alpha, [la, la, la]),
                "lambda": _dump_series(jet.lam, [ll, ll, ll])}
        if isinstance(jet.base, LeibnizPair):
            body["mu"] = _dump_series(jet.mu, [ll, la, la])
        jets[name] = body
    out["jets"] = jets
    equivalences = {}
    for name, eq in doc.equivalences.items():
        la, ll = _base_axes(eq.base)
        body = {"base": eq.base.name, "order": eq.order, "phi": _dump_series(eq.phi, [la, la])}
        if isinstance(eq.base, LeibnizPair):
            body["psi"] = _dump_series(eq.psi, [ll, ll])
        equivalences[name] = body
    out["equivalences"] = equivalences
    return out


def dumps_document(doc: InputDocument) -> str:
    return json.dumps(dump_document(doc), indent=2, sort_keys=True) + "\n"


def validate_document(doc: InputDocument) -> List[ValidationReport]:
    """One report per algebra, pair, Poisson algebra, Rinehart entry and module"""
    reports: List[ValidationReport] = []
    for alg in doc.algebras.values():
        reports.append(validate_associative(alg) if alg.kind == ASSOCIATIVE else validate_lie(alg))
    for pair in doc.pairs.values():
        reports.append(validate_pair(pair))
    for poisson in doc.poisson.values():
        reports.append(validate_poisson(poisson))
    for name, entry in doc.rinehart.items():
        report = validate_rinehart(doc.pairs[entry.pair], entry.a_action_on_L)
        report.subject = name
        reports.append(report)
    for entry in doc.modules.values():
        base = doc.base(entry.base)
        if isinstance(base, PoissonAlgebra):
            reports.append(validate_poisson_module(base, entry.module))
        else:
            reports.append(validate_module(base, entry.module))
    return reports
