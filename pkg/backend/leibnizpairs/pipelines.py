"""
Validation, cohomology and deformation pipelines behind the CLI and the HTTP service

Each pipeline returns a PipelineResult: a JSON-ready payload, the same
content as human-readable text, and an ok flag. ok is False for domain
failures (an object failing its axioms, a jet with nonzero defects); a
failed lift is a finding and keeps ok True.
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from .algebra import (LeibnizPair, PoissonAlgebra, ValidationReport, self_module, validate_module,
                      validate_object, validate_poisson_module)
from .bicomplex import LEIBNIZ, POISSON, make_bicomplex
from .cohomology import total_cohomology, whitehead_compare
from .common_utils import format_rational
from .deformation import (DEFECT_NAMES, DeformationJet, defects, deformation_complex, is_infinitesimal,
                          lift_to_order)
from .document import InputDocument, dump_tensor, validate_document
from .errors import BranchError, DocumentError

logger = logging.getLogger(__name__)


@dataclass
class PipelineResult:
    ok: bool
    payload: Dict[str, Any]
    lines: List[str] = field(default_factory=list)

    @property
    def text(self) -> str:
        return "\n".join(self.lines) + "\n"


def _report_lines(report: ValidationReport, limit: int = 10) -> List[str]:
    if report.ok:
        return [f"PASS {report.subject}"]
    lines = [f"FAIL {report.subject}: {', '.join(report.axioms_failed())}"]
    for violation in report.violations[:limit]:
        lhs = ", ".join(format_rational(v) for v in violation.lhs)
        rhs = ", ".join(format_rational(v) for v in violation.rhs)
        lines.append(f"  {violation.describe()}: [{lhs}] != [{rhs}]")
    if len(report.violations) > limit:
        lines.append(f"  ... {len(report.violations) - limit} more")
    return lines


def run_validate(doc: InputDocument) -> PipelineResult:
    """Validate every object of a document"""
    reports = validate_document(doc)
    lines: List[str] = []
    for report in reports:
        lines.extend(_report_lines(report))
    ok = all(report.ok for report in reports)
    lines.append(f"{sum(r.ok for r in reports)}/{len(reports)} objects valid")
    return PipelineResult(ok, {"ok": ok, "reports": [r.to_dict() for r in reports]}, lines)


def _validated_base(doc: InputDocument, name: str) -> Optional[PipelineResult]:
    report = validate_object(doc.base(name, "--pair"))
    if report.ok:
        return None
    return PipelineResult(False, {"ok": False, "validation": report.to_dict()}, _report_lines(report))


def run_cohomology(doc: InputDocument, name: str, max_degree: int, branch: str = LEIBNIZ,
                   module: Optional[str] = None, representatives: bool = False,
                   whitehead: bool = False, semisimple: bool = False) -> PipelineResult:
    """
    Betti table of a named pair or Poisson algebra

    Args:
        doc: Parsed document
        name: Pair or Poisson algebra
        max_degree: Highest degree
        branch: leibniz or poisson
        module: Module name; the regular module when omitted
        representatives: Attach canonical representative cocycles
        whitehead: Also compare with the augmenting column (leibniz branch)
        semisimple: Caller's assertion that L is semisimple

    Raises:
        BranchError: poisson branch for an object that is not a Poisson algebra
    """
    obj = doc.base(name, "--pair")
    if branch == POISSON and not isinstance(obj, PoissonAlgebra):
        raise BranchError(f"'{name}' is not a Poisson algebra", "--branch")
    failed = _validated_base(doc, name)
    if failed is not None:
        return failed
    pair = obj.as_pair() if isinstance(obj, PoissonAlgebra) else obj
    if module is not None:
        entry = doc.module(module, "--module")
        if entry.base != name:
            raise DocumentError(f"module '{module}' belongs to '{entry.base}', not '{name}'", "--module")
        mod = entry.module
        report = (validate_poisson_module(obj, mod) if isinstance(obj, PoissonAlgebra)
                  else validate_module(pair, mod))
        if not report.ok:
            return PipelineResult(False, {"ok": False, "validation": report.to_dict()}, _report_lines(report))
    else:
        mod = self_module(pair)
    complex_ = make_bicomplex(obj, mod, branch)
    table = total_cohomology(complex_, max_degree, representatives=representatives)
    payload: Dict[str, Any] = {"object": name, "module": mod.name, "branch": branch,
                               "degrees": table.to_records()}
    lines = [f"{name} with coefficients {mod.name}", table.format()]
    if representatives:
        for record in payload["degrees"]:
            for k, rep in enumerate(record["representatives"]):
                blocks = "; ".join(f"({b['bidegree'][0]},{b['bidegree'][1]}): "
                                   + " ".join(f"{i}:{v}" for i, v in b["entries"]) for b in rep)
                lines.append(f"  H^{record['degree']} #{k}: {blocks}")
    if whitehead:
        if branch != LEIBNIZ:
            raise BranchError("the augmenting-column comparison runs on the leibniz branch", "--whitehead")
        wh = whitehead_compare(complex_, semisimple=semisimple)
        payload["whitehead"] = wh.to_dict()
        lines.append(f"augmenting column {wh.column} vs total {wh.total}: {wh.note}")
    return PipelineResult(True, payload, lines)


def _defect_axes(jet: DeformationJet) -> Dict[str, Sequence[Sequence[str]]]:
    base = jet.base
    if isinstance(base, PoissonAlgebra):
        la = ll = base.A.basis_labels
    else:
        la, ll = base.A.basis_labels, base.L.basis_labels
    return {
        "assoc": [la, la, la, la],
        "mu_der": [ll, la, la, la],
        "mu_mor": [ll, ll, la, la],
        "jacobi": [ll, ll, ll, ll],
    }


def run_deform_check(doc: InputDocument, jet_name: str) -> PipelineResult:
    """Defect status per order and the class of the infinitesimal"""
    jet = doc.jet(jet_name, "--jet")
    failed = _validated_base(doc, jet.base.name)
    if failed is not None:
        return failed
    axes = _defect_axes(jet)
    orders, lines, clean = [], [f"jet {jet_name} over {jet.base.name}, order {jet.order}"], True
    for n in range(1, jet.order + 1):
        report = defects(jet, n)
        failing = report.failing()
        clean = clean and not failing
        orders.append({
            "order": n,
            "clean": not failing,
            "defects": {name: dump_tensor(getattr(report, name), axes[name])
                        for name in DEFECT_NAMES if name in failing},
        })
        lines.append(f"  order {n}: " + ("clean" if not failing else "defects in " + ", ".join(failing)))
        for name in failing:
            for entry in dump_tensor(getattr(report, name), axes[name])[:5]:
                lines.append(f"    {name}({', '.join(entry[:-2])}) has {entry[-2]}-coefficient {entry[-1]}")
    payload: Dict[str, Any] = {"jet": jet_name, "order": jet.order, "clean": clean, "orders": orders}
    if jet.order >= 1:
        check = is_infinitesimal(jet.base, jet.term("alpha", 1), jet.term("mu", 1), jet.term("lam", 1))
        payload["infinitesimal"] = {
            "cocycle": check.is_cocycle,
            "trivial_class": check.is_trivial,
            "class": None if check.class_vector is None else _sparse(check.class_vector),
        }
        if not check.is_cocycle:
            lines.append("  infinitesimal: not a total 2-cocycle")
        elif check.is_trivial:
            lines.append("  infinitesimal: trivial class")
        else:
            lines.append("  infinitesimal: nonzero class in H^2")
            lines.append("    class " + " ".join(f"{i}:{v}" for i, v in payload["infinitesimal"]["class"]))
    return PipelineResult(clean, payload, lines)


def _sparse(vec: np.ndarray) -> List[List[Any]]:
    return [[int(i), format_rational(vec[i])] for i in np.flatnonzero(np.asarray(vec != 0, dtype=bool))]


def run_deform_lift(doc: InputDocument, jet_name: str, order: int) -> PipelineResult:
    """Lift the order-1 part of a jet to the target order"""
    jet = doc.jet(jet_name, "--jet")
    failed = _validated_base(doc, jet.base.name)
    if failed is not None:
        return failed
    base = jet.base
    result = lift_to_order(base, jet.term("alpha", 1), jet.term("mu", 1), jet.term("lam", 1), order)
    axes = _defect_axes(jet)
    la, ll = axes["mu_der"][1], axes["mu_der"][0]
    corrections = []
    for n, (alpha, mu, lam) in enumerate(result.corrections, start=2):
        record = {"order": n, "alpha": dump_tensor(alpha, [la, la, la]), "lambda": dump_tensor(lam, [ll, ll, ll])}
        if isinstance(base, LeibnizPair):
            record["mu"] = dump_tensor(mu, [ll, la, la])
        corrections.append(record)
    payload: Dict[str, Any] = {
        "jet": jet_name,
        "target_order": order,
        "success": result.success,
        "order_reached": result.jet.order,
        "corrections": corrections,
        "corrections_vanish": result.corrections_vanish(),
    }
    lines = [f"lift of {jet_name} over {base.name} to order {order}"]
    if result.success:
        lines.append(f"  success; corrections {'all zero' if result.corrections_vanish() else 'nonzero'}")
    else:
        complex_ = deformation_complex(base)
        payload["failed_order"] = result.failed_order
        payload["obstruction_class"] = _sparse(result.obstruction_class)
        payload["obstruction_dim"] = complex_.total_dim(3)
        lines.append(f"  obstructed at order {result.failed_order}: class "
                     + " ".join(f"{i}:{v}" for i, v in payload["obstruction_class"]))
    for record in corrections:
        entries = record["alpha"] + record.get("mu", []) + record["lambda"]
        if entries:
            lines.append(f"  order {record['order']}: {len(entries)} nonzero entries")
    return PipelineResult(True, payload, lines)
