# htheorem/services/render.py
"""
Report rendering. Reports are first turned into plain dicts; JSON output
dumps that dict, and the text renderers read the same dict, so both
formats always carry the same numbers.
"""

from __future__ import annotations

from enum import Enum
from typing import Any, Callable, Optional

from core.linalg import ComplexMatrix
from core.state import LN2
from services.documents import MatrixDocument
from services.sampler import SweepResult
from services.scenarios import ChannelAnalysis, ScenarioReport
from services.channel import UnitalityReport


class EntropyUnit(str, Enum):
    NATS = "nats"
    KB_LN2 = "kB_ln2"

    def convert(self, nats: Optional[float]) -> Optional[float]:
        if nats is None:
            return None
        return nats / LN2 if self is EntropyUnit.KB_LN2 else nats


Styler = Callable[[str, bool], str]


def _plain(text: str, ok: bool) -> str:
    return text


def fmt(x: Optional[float]) -> str:
    return "n/a" if x is None else f"{x:.9g}"


def _complex(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def matrix_payload(m: ComplexMatrix) -> dict[str, Any]:
    return MatrixDocument.from_matrix(m).model_dump(exclude_none=True, mode="json")


# ===== dict conversion =====


def unitality_to_dict(report: UnitalityReport) -> dict[str, Any]:
    out: dict[str, Any] = {
        "method": report.method.value,
        "defect": matrix_payload(report.defect),
        "identity_image": matrix_payload(report.identity_image),
        "defect_norm": report.defect_norm,
        "is_unital": report.is_unital,
        "tolerance": report.tolerance,
    }
    if report.per_pair_contributions is not None:
        out["per_pair_contributions"] = {
            f"{j},{k}": _complex(z) for (j, k), z in sorted(report.per_pair_contributions.items())
        }
    if report.commutator_terms is not None:
        out["commutator_terms"] = {
            f"{j},{k},{i}": _complex(z) for (j, k, i), z in sorted(report.commutator_terms.items())
        }
    return out


def channel_to_dict(analysis: ChannelAnalysis) -> dict[str, Any]:
    return {
        "name": analysis.name,
        "blocks": {f"{j},{i}": matrix_payload(b) for (j, i), b in sorted(analysis.blocks.blocks.items())},
        "direct": unitality_to_dict(analysis.direct),
        "commutator": unitality_to_dict(analysis.commutator),
        "method_disagreement": analysis.method_disagreement,
        "is_unital": analysis.is_unital,
    }


def scenario_to_dict(report: ScenarioReport, unit: EntropyUnit = EntropyUnit.NATS) -> dict[str, Any]:
    stages = [
        {
            "label": s.label,
            "description": s.description,
            "joint_state": matrix_payload(s.joint_state.matrix),
            "system_reduced": matrix_payload(s.system_reduced.matrix),
            "env_reduced": matrix_payload(s.env_reduced.matrix),
            "system_entropy": unit.convert(s.system_entropy.nats),
            "env_entropy": unit.convert(s.env_entropy.nats),
            "joint_entropy": unit.convert(s.joint_entropy.nats),
        }
        for s in report.stages
    ]
    return {
        "scenario": report.name,
        "system_label": report.system_label,
        "env_label": report.env_label,
        "entropy_unit": unit.value,
        "parameters": dict(report.parameters),
        "stages": stages,
        "unitality": [channel_to_dict(a) for a in report.unitality],
        "heat_extracted": report.heat_extracted,
        "work_bookkeeping": report.work_bookkeeping,
        "verdicts": dict(report.verdicts),
        "passed": report.passed,
        "notes": list(report.notes),
    }


def check_to_dict(analysis: ChannelAnalysis) -> dict[str, Any]:
    return {
        "direct": unitality_to_dict(analysis.direct),
        "commutator": unitality_to_dict(analysis.commutator),
        "method_disagreement": analysis.method_disagreement,
        "is_unital": analysis.is_unital,
    }


def sweep_to_dict(result: SweepResult, unit: EntropyUnit = EntropyUnit.NATS) -> dict[str, Any]:
    return {
        "parameters": dict(result.parameters),
        "entropy_unit": unit.value,
        "trials": result.trials,
        "unital_count": result.unital_count,
        "nonunital_count": result.nonunital_count,
        "max_method_disagreement": result.max_method_disagreement,
        "min_entropy_delta_unital": unit.convert(result.min_entropy_delta_unital),
        "max_abs_entropy_delta_unital": unit.convert(result.max_abs_entropy_delta_unital),
        "violations": [{"trial_index": v.trial_index, "description": v.description} for v in result.violations],
        "passed": result.passed,
    }


# ===== text rendering =====


def _matrix_text(doc: dict[str, Any], indent: str = "    ") -> list[str]:
    lines = []
    for row in doc["entries"]:
        cells = []
        for re, im in row:
            cells.append(fmt(re) if im == 0.0 else f"{fmt(re)}{'+' if im >= 0 else '-'}{fmt(abs(im))}i")
        lines.append(indent + "[ " + "  ".join(f"{c:>12}" for c in cells) + " ]")
    return lines


def _verdict(ok: bool, style: Styler) -> str:
    return style("PASS" if ok else "FAIL", ok)


def _unitality_text(doc: dict[str, Any], style: Styler) -> list[str]:
    verdict = style("unital" if doc["is_unital"] else "non-unital", doc["is_unital"])
    lines = [f"  {doc['method']}: {verdict}, defect norm {fmt(doc['defect_norm'])} (tol {fmt(doc['tolerance'])})"]
    lines.append("    Phi(1) =")
    lines.extend(_matrix_text(doc["identity_image"], indent="      "))
    return lines


def channel_text(doc: dict[str, Any], style: Styler = _plain, with_blocks: bool = True) -> list[str]:
    lines = [f"channel {doc['name']}:"]
    if with_blocks:
        for key, block in doc["blocks"].items():
            lines.append(f"  B[{key}] =")
            lines.extend(_matrix_text(block, indent="      "))
    lines.extend(_unitality_text(doc["direct"], style))
    lines.extend(_unitality_text(doc["commutator"], style))
    lines.append(f"  method disagreement {fmt(doc['method_disagreement'])}")
    return lines


def scenario_text(doc: dict[str, Any], style: Styler = _plain) -> str:
    unit = doc["entropy_unit"]
    params = ", ".join(f"{k}={fmt(v)}" for k, v in doc["parameters"].items())
    lines = [f"scenario {doc['scenario']} ({params})", f"entropies in {unit}", ""]
    for s in doc["stages"]:
        lines.append(
            f"[{s['label']}] {s['description']}: "
            f"S({doc['system_label']})={fmt(s['system_entropy'])}  "
            f"S({doc['env_label']})={fmt(s['env_entropy'])}  "
            f"S(joint)={fmt(s['joint_entropy'])}"
        )
        lines.append(f"  {doc['system_label']} =")
        lines.extend(_matrix_text(s["system_reduced"]))
    lines.append("")
    for channel in doc["unitality"]:
        lines.extend(channel_text(channel, style))
        lines.append("")
    if doc["heat_extracted"] is not None:
        lines.append(f"heat extracted from bath: {fmt(doc['heat_extracted'])}")
    if doc["work_bookkeeping"] is not None:
        lines.append(f"work bookkeeping: {fmt(doc['work_bookkeeping'])}")
    for note in doc["notes"]:
        lines.append(f"note: {note}")
    lines.append("")
    for name, ok in doc["verdicts"].items():
        lines.append(f"{_verdict(ok, style)}  {name}")
    return "\n".join(lines)


def check_text(doc: dict[str, Any], style: Styler = _plain) -> str:
    lines = []
    lines.extend(_unitality_text(doc["direct"], style))
    lines.extend(_unitality_text(doc["commutator"], style))
    lines.append(f"method disagreement {fmt(doc['method_disagreement'])}")
    verdict = style("unital" if doc["is_unital"] else "non-unital", doc["is_unital"])
    lines.append(f"verdict: {verdict}")
    return "\n".join(lines)


def sweep_text(doc: dict[str, Any], style: Styler = _plain) -> str:
    params = ", ".join(f"{k}={v}" for k, v in doc["parameters"].items())
    lines = [
        f"sweep ({params})",
        f"trials {doc['trials']}: unital {doc['unital_count']}, non-unital {doc['nonunital_count']}",
        f"max method disagreement {fmt(doc['max_method_disagreement'])}",
        f"min entropy delta (unital, {doc['entropy_unit']}) {fmt(doc['min_entropy_delta_unital'])}",
        f"max |entropy delta| (unital, {doc['entropy_unit']}) {fmt(doc['max_abs_entropy_delta_unital'])}",
        f"violations {len(doc['violations'])}",
    ]
    for v in doc["violations"]:
        lines.append(f"  trial {v['trial_index']}: {v['description']}")
    lines.append(_verdict(doc["passed"], style))
    return "\n".join(lines)
