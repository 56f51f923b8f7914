"""JSON record parsing and deterministic serialization.

Every float is emitted with 17 significant digits so that parse(print(x))
round-trips bit-exactly; +/-Infinity appear literally (json.loads accepts
them).  Parsers raise MalformedInput with a dotted field pointer.
"""

from __future__ import annotations

import math

import numpy as np

from .collapse import ProjectionReport, SequenceEntry, SequenceReport
from .errors import MalformedInput
from .geodesics import Covector, GeodesicSample
from .metric import DistanceResult, ShootingOptions
from .moduli import CanonicalForm, GroupPoint, InvariantFingerprint, LatticeParam, MetricParam
from .systole import ClassificationReport, SystoleReport


def dumps(obj) -> str:
    """Serialize nested dict/list/scalar data deterministically."""
    out: list[str] = []
    _emit(obj, out)
    return "".join(out)


def _emit(obj, out: list[str]) -> None:
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, str):
        out.append('"' + obj.replace("\\", "\\\\").replace('"', '\\"') + '"')
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isinf(x):
            out.append("Infinity" if x > 0 else "-Infinity")
        elif math.isnan(x):
            out.append("NaN")
        else:
            out.append(format(x + 0.0 if x == 0.0 else x, ".17g"))
    elif isinstance(obj, np.ndarray):
        _emit(obj.tolist(), out)
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, item in enumerate(obj):
            if i:
                out.append(", ")
            _emit(item, out)
        out.append("]")
    elif isinstance(obj, dict):
        out.append("{")
        for i, (key, value) in enumerate(obj.items()):
            if i:
                out.append(", ")
            _emit(str(key), out)
            out.append(": ")
            _emit(value, out)
        out.append("}")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def _get(record: dict, field: str, where: str):
    if field not in record:
        raise MalformedInput(f"missing field {field!r}", field=f"{where}.{field}" if where else field)
    return record[field]


def lattice_from_dict(record: dict, where: str = "lattice") -> LatticeParam:
    if not isinstance(record, dict):
        raise MalformedInput("lattice record must be an object", field=where)
    n = _get(record, "n", where)
    r = _get(record, "r", where)
    try:
        return LatticeParam(n=int(n), r=tuple(int(v) for v in r))
    except (TypeError, ValueError) as exc:
        raise MalformedInput(str(exc), field=f"{where}.r") from exc


def metric_from_dict(record: dict, where: str = "metric") -> MetricParam:
    if not isinstance(record, dict):
        raise MalformedInput("metric record must be an object", field=where)
    n = _get(record, "n", where)
    a = _get(record, "A_tilde", where)
    rho = record.get("rho", 0.0)
    try:
        return MetricParam(n=int(n), A_tilde=np.asarray(a, dtype=float), rho=float(rho))
    except (TypeError, ValueError) as exc:
        raise MalformedInput(str(exc), field=f"{where}.A_tilde") from exc


def point_from_dict(record: dict, where: str = "point") -> GroupPoint:
    if not isinstance(record, dict):
        raise MalformedInput("point record must be an object", field=where)
    try:
        return GroupPoint(
            x=np.asarray(_get(record, "x", where), dtype=float),
            y=np.asarray(_get(record, "y", where), dtype=float),
            z=float(_get(record, "z", where)),
        )
    except (TypeError, ValueError) as exc:
        raise MalformedInput(str(exc), field=where) from exc


def covector_from_dict(record: dict, where: str = "covector") -> Covector:
    if not isinstance(record, dict):
        raise MalformedInput("covector record must be an object", field=where)
    try:
        return Covector(
            p_x=np.asarray(_get(record, "p_x", where), dtype=float),
            p_y=np.asarray(_get(record, "p_y", where), dtype=float),
            p_z=float(_get(record, "p_z", where)),
        )
    except (TypeError, ValueError) as exc:
        raise MalformedInput(str(exc), field=where) from exc


def options_from_dict(record: dict | None) -> ShootingOptions:
    if not record:
        return ShootingOptions()
    known = {"brackets", "root_tol", "zero_tol", "force_shooting"}
    bad = set(record) - known
    if bad:
        raise MalformedInput(f"unknown option(s) {sorted(bad)}", field="options")
    return ShootingOptions(**record)


def metric_to_dict(m: MetricParam) -> dict:
    return {"n": m.n, "A_tilde": m.A_tilde, "rho": m.rho}


def lattice_to_dict(lat: LatticeParam) -> dict:
    return {"n": lat.n, "r": list(lat.r)}


def point_to_dict(p: GroupPoint) -> dict:
    return {"x": p.x, "y": p.y, "z": p.z}


def covector_to_dict(c: Covector) -> dict:
    return {"p_x": c.p_x, "p_y": c.p_y, "p_z": c.p_z}


def canonical_form_to_dict(cf: CanonicalForm) -> dict:
    return {
        "n": cf.n,
        "d": list(cf.d),
        "rho": cf.rho,
        "R_used": cf.R_used,
        "A_tilde_canonical": cf.A_tilde_canonical,
    }


def fingerprint_to_dict(fp: InvariantFingerprint) -> dict:
    return {"d": list(fp.d), "delta": fp.delta, "abs_det": fp.abs_det, "rho": fp.rho}


def sample_to_dict(s: GeodesicSample) -> dict:
    return {"t": s.t, "x": s.x, "y": s.y, "z": s.z, "speed": s.speed}


def distance_result_to_dict(res: DistanceResult) -> dict:
    return {
        "value": res.value,
        "method": res.method,
        "witness_covector": covector_to_dict(res.witness_covector) if res.witness_covector else None,
        "witness_time": res.witness_time,
        "best_effort": res.best_effort,
        "representative": point_to_dict(res.representative) if res.representative else None,
    }


def systole_report_to_dict(rep: SystoleReport) -> dict:
    return {
        "s1": rep.s1,
        "s1_witness": [int(v) for v in rep.s1_witness],
        "s2": rep.s2,
        "systole": rep.systole,
        "bound_rhs": rep.bound_rhs,
        "constant_used": rep.constant_used,
        "torus_constant_used": rep.torus_constant_used,
        "holds": rep.holds,
        "equality_gap": rep.equality_gap,
        "measure": rep.measure,
    }


def classification_to_dict(rep: ClassificationReport) -> dict:
    return {
        "r": rep.r,
        "case": rep.case,
        "threshold": rep.threshold,
        "constant_case1": rep.constant_case1,
        "constant_case2": rep.constant_case2,
        "constant": rep.constant,
        "ratio": rep.ratio,
        "equality": rep.equality,
        "s1": rep.s1,
        "s2": rep.s2,
        "systole": rep.systole,
        "measure": rep.measure,
    }


def entry_from_dict(record: dict, where: str = "entries") -> SequenceEntry:
    if not isinstance(record, dict):
        raise MalformedInput("sequence entry must be an object", field=where)
    return SequenceEntry(
        lat=lattice_from_dict(_get(record, "lattice", where), f"{where}.lattice"),
        m=metric_from_dict(_get(record, "metric", where), f"{where}.metric"),
        k=int(record.get("k", 0)),
    )


def sequence_report_to_dict(rep: SequenceReport) -> dict:
    return {
        "measures": rep.measures,
        "fiber_diams": rep.fiber_diams,
        "diam_bound_used": rep.diam_bound_used,
        "verdict": rep.verdict,
        "dichotomy_case": list(rep.dichotomy_case),
        "limit_torus": {"gram": rep.limit_torus_gram, "dim": rep.limit_dimension},
        "successive_minima": rep.successive_minima,
    }


def projection_report_to_dict(rep: ProjectionReport) -> dict:
    return {
        "lower_violation": rep.lower_violation,
        "upper_violation": rep.upper_violation,
        "per_sample": rep.per_sample,
        "failed": list(rep.failed),
    }
