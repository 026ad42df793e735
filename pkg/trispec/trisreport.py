"""
trispec.trisreport
=================================

Report schema and table rendering shared by the CLI.

JSON reports follow one stable shape,
``{signature, head, checks, meta}``, modelled with pydantic so that a printed
report parses back into the same model. Numbers are written with 12
significant digits in JSON and CSV, and with 7 decimals in text tables;
``q = ∞`` is the string ``"inf"``.
"""

import logging
import math
from pathlib import Path
from typing import Any, Literal

import pandas as pd
from pydantic import BaseModel, Field

from .triscert import CertReport
from .trisforms import INF, Signature, big_delta, contact_data, cos_params, l_table, side_coshes
from .trisgraph import RhoStarComparison, StarBall, rho_star_from_ball
from .trispectrum import Check, SpectrumEntry, SpectrumHead, ValidationReport

logger = logging.getLogger(__name__)

__version__ = "0.1.0"

Format = Literal["text", "json", "csv"]


def sig12(x: float) -> float | str:
    """Round to 12 significant digits; infinities become ``"inf"``."""
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return float(f"{x:.12g}")


# ----------------------------
# JSON schema
# ----------------------------


class SignatureModel(BaseModel):
    r: int
    p: int
    q: int | str

    @classmethod
    def of(cls, sig: Signature) -> "SignatureModel":
        return cls(r=sig.r, p=sig.p, q="inf" if sig.q == INF else sig.q)

    def to_signature(self) -> Signature:
        return Signature.of(self.r, self.p, self.q)


class EntryModel(BaseModel):
    length: float
    multiplicity: int
    exactness: Literal["Exact", "AtLeast"]
    source: Literal["Predicted", "BruteForce"]
    label: str = ""


class CheckModel(BaseModel):
    name: str
    status: str
    details: str = ""


class MetaModel(BaseModel):
    version: str = __version__
    config: dict[str, Any] = Field(default_factory=dict)
    notes: list[str] = Field(default_factory=list)


class HeadReport(BaseModel):
    signature: SignatureModel
    head: list[EntryModel]
    checks: list[CheckModel] = Field(default_factory=list)
    meta: MetaModel = Field(default_factory=MetaModel)


def _entries(head: SpectrumHead) -> list[EntryModel]:
    return [
        EntryModel(
            length=sig12(e.length),
            multiplicity=e.multiplicity,
            exactness=e.exactness,
            source=head.provenance,
            label=e.label,
        )
        for e in head.entries
    ]


def _checks(checks: list[Check]) -> list[CheckModel]:
    return [CheckModel(name=c.name, status=c.status, details=c.details) for c in checks]


def head_report(
    head: SpectrumHead,
    brute: SpectrumHead | None = None,
    checks: list[Check] | None = None,
    config: dict[str, Any] | None = None,
) -> HeadReport:
    entries = _entries(head) + (_entries(brute) if brute is not None else [])
    notes = [n for n in (head.completeness_note, brute.completeness_note if brute else "") if n]
    return HeadReport(
        signature=SignatureModel.of(head.sig),
        head=entries,
        checks=_checks(checks or []),
        meta=MetaModel(config=config or {}, notes=notes),
    )


def validation_report(report: ValidationReport, config: dict[str, Any] | None = None) -> HeadReport:
    return head_report(report.predicted, report.brute, report.checks, config)


class GridReport(BaseModel):
    reports: list[HeadReport]
    mismatches: int = 0
    meta: MetaModel = Field(default_factory=MetaModel)


def grid_report(reports: list[ValidationReport], config: dict[str, Any] | None = None) -> GridReport:
    return GridReport(
        reports=[validation_report(r) for r in reports],
        mismatches=sum(len(r.mismatches) for r in reports),
        meta=MetaModel(config=config or {}),
    )


def validation_frame(reports: list[ValidationReport]) -> pd.DataFrame:
    rows = [
        {"signature": r.sig.label, "name": c.name, "status": c.status, "details": c.details}
        for r in reports
        for c in r.checks
    ]
    return pd.DataFrame(rows, columns=["signature", "name", "status", "details"])


def parse_head_report(text: str) -> HeadReport:
    return HeadReport.model_validate_json(text)


def head_from_report(model: HeadReport, source: str = "Predicted") -> SpectrumHead:
    """Rebuild the head of one provenance from a parsed report."""
    sig = model.signature.to_signature()
    entries = [
        SpectrumEntry(e.length, e.multiplicity, e.exactness, e.label)
        for e in model.head
        if e.source == source
    ]
    cutoff = max((e.length for e in entries), default=0.0)
    return SpectrumHead(sig, entries, cutoff, source)


def dump_json(model: BaseModel) -> str:
    return model.model_dump_json(indent=2) + "\n"


class CertTypeModel(BaseModel):
    type: str
    verdict: Literal["Positive", "FailsAt", "Inconclusive"]
    leaves: int
    failures: list[dict[str, Any]] = Field(default_factory=list)


class CertReportModel(BaseModel):
    region: str
    cells: list[str]
    types: list[CertTypeModel]
    exclusions: list[str]
    computed_exclusions: list[str]
    eps: float
    max_depth: int
    meta: MetaModel = Field(default_factory=MetaModel)


def cert_report_model(report: CertReport, config: dict[str, Any] | None = None) -> CertReportModel:
    types = []
    for t in report.types:
        failures = []
        for f in t.failures:
            item: dict[str, Any] = {"cell": f.cell, "kind": f.kind}
            if f.point is not None:
                item["point"] = [sig12(c) for c in f.point]
                item["value"] = sig12(f.value)
                item["pattern"] = f.pattern
            if f.boxes:
                item["boxes"] = [[[sig12(c) for c in side] for side in b] for b in f.boxes]
            failures.append(item)
        types.append(CertTypeModel(type=t.label, verdict=t.verdict, leaves=t.leaves, failures=failures))
    return CertReportModel(
        region=report.region,
        cells=report.cells,
        types=types,
        exclusions=report.exclusions,
        computed_exclusions=report.computed_exclusions,
        eps=report.eps,
        max_depth=report.max_depth,
        meta=MetaModel(config=config or {}),
    )


# ----------------------------
# Tables
# ----------------------------


def head_frame(head: SpectrumHead, brute: SpectrumHead | None = None) -> pd.DataFrame:
    rows = [
        {
            "length": e.length,
            "multiplicity": e.multiplicity,
            "exactness": e.exactness,
            "label": e.label,
        }
        for e in head.entries
    ]
    dframe = pd.DataFrame(rows, columns=["length", "multiplicity", "exactness", "label"])
    if brute is None:
        return dframe
    found, match = [], []
    for e in head.entries:
        hits = [b for b in brute.entries if abs(b.length - e.length) <= 1e-9 * max(1.0, e.length)]
        mult = hits[0].multiplicity if hits else 0
        found.append(mult)
        if e.length > brute.cutoff:
            match.append("beyond cutoff")
        elif e.exactness == "Exact":
            match.append("yes" if mult == e.multiplicity else "no")
        else:
            match.append("yes" if mult >= e.multiplicity else "no")
    dframe["brute_multiplicity"] = found
    dframe["match"] = match
    return dframe


def forms_frame(sig: Signature) -> pd.DataFrame:
    """X, Y, Z, Δ, side coshes, contact data and the L-table as name/value rows."""
    c = cos_params(sig)
    rows: list[tuple[str, float]] = [("X", c.X), ("Y", c.Y), ("Z", c.Z), ("Delta", big_delta(sig))]
    sides = side_coshes(sig)
    rows += [("cosh_a", sides.cosh_a), ("cosh_b", sides.cosh_b), ("cosh_c", sides.cosh_c)]
    cd = contact_data(sig)
    rows += [
        ("sinh2_dr", cd.sinh2_dr),
        ("sinh2_dp", cd.sinh2_dp),
        ("sinh2_dq", cd.sinh2_dq),
        ("cosh_pq_star", cd.cosh_pq_star),
        ("cosh_rp_star", cd.cosh_rp_star),
        ("cosh_qr_star", cd.cosh_qr_star),
        ("cosh_c_star", cd.cosh_c_star),
    ]
    rows += list(l_table(sig).as_dict().items())
    return pd.DataFrame(rows, columns=["name", "value"])


def rho_frame(ball: StarBall, n_max: int) -> pd.DataFrame:
    rows = []
    for n in range(2, n_max + 1):
        rho = rho_star_from_ball(ball, n)
        rows.append({"n": n, "rho_star": rho, "cosh_rho_star": math.cosh(rho)})
    return pd.DataFrame(rows, columns=["n", "rho_star", "cosh_rho_star"])


def comparison_frame(comparisons: list[RhoStarComparison]) -> pd.DataFrame:
    rows = [
        {
            "signature": c.sig.label,
            "l0": c.l0_name,
            "cosh_rho5": c.cosh_rho5,
            "cosh_c_star": c.cosh_c_star,
            "gap": c.gap,
            "status": c.status,
        }
        for c in comparisons
    ]
    return pd.DataFrame(rows)


def cert_frame(report: CertReport) -> pd.DataFrame:
    rows = []
    for t in report.types:
        where = ", ".join(f"{f.cell}: {f.kind}" for f in t.failures)
        rows.append({"type": t.label, "verdict": t.verdict, "leaves": t.leaves, "failures": where})
    return pd.DataFrame(rows, columns=["type", "verdict", "leaves", "failures"])


def render(dframe: pd.DataFrame, fmt: Format) -> str:
    if fmt == "csv":
        return dframe.to_csv(index=False, float_format="%.12g", lineterminator="\n")
    if fmt == "json":
        rows = [
            {k: (sig12(v) if isinstance(v, float) else v) for k, v in row.items()}
            for row in dframe.to_dict(orient="records")
        ]
        return TableModel(rows=rows).model_dump_json(indent=2) + "\n"
    if dframe.empty:
        return "(empty)\n"
    return dframe.to_string(index=False, float_format=lambda x: f"{x:.7f}") + "\n"


class TableModel(BaseModel):
    rows: list[dict[str, Any]]


def write_output(text: str, out: str | Path | None = None) -> None:
    if out is None:
        print(text, end="")
        return
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    logger.info("Saved output to: %s", path)
