"""HTTP service exposing the package operations with JSON I/O."""

from __future__ import annotations

import json
from importlib import resources

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, Response

from .. import __version__, serialization as ser
from ..errors import DivisibilityError, HeisgeoError, MalformedInput, NonPositiveEntry
from ..geodesics import geodesic_point
from ..metric import distance_group, distance_quotient
from ..moduli import canonicalize, fingerprint, group_inverse, group_mul
from ..selftest import run_selftest
from ..systole import classify_3d, systolic_bound
from ..volumes import coefficient, total_measure
from .. import collapse as clp
from . import models


def _json(payload: dict, status_code: int = 200) -> Response:
    """Build a response through the deterministic 17-digit serializer.

    Bypasses the default JSON renderer so that float formatting is exact and
    Infinity (a legal coefficient value) survives the trip.
    """
    return Response(content=ser.dumps(payload), status_code=status_code,
                    media_type="application/json")


def create_app() -> FastAPI:
    app = FastAPI(title="heisgeo service", version=__version__)

    @app.exception_handler(HeisgeoError)
    async def _domain_error(request: Request, exc: HeisgeoError):
        detail = {"error": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, (DivisibilityError, NonPositiveEntry)):
            detail["field"] = "r"
            detail["index"] = exc.index
        elif isinstance(exc, MalformedInput):
            detail["field"] = exc.field
        return JSONResponse(status_code=400, content={"detail": detail})

    @app.get("/health", response_model=models.HealthResponse)
    def health():
        return models.HealthResponse(status="ok", version=__version__)

    @app.get("/schemas")
    def schemas():
        text = resources.files("heisgeo.schemas").joinpath("heisgeo-schemas-v1.json").read_text()
        return JSONResponse(content=json.loads(text))

    @app.post("/canonicalize", response_model=models.CanonicalizeResponse)
    def canonicalize_endpoint(req: models.CanonicalizeRequest):
        cf = canonicalize(ser.metric_from_dict(req.metric.model_dump()))
        return _json(ser.canonical_form_to_dict(cf))

    @app.post("/fingerprint", response_model=models.FingerprintResponse)
    def fingerprint_endpoint(req: models.CanonicalizeRequest):
        fp = fingerprint(ser.metric_from_dict(req.metric.model_dump()))
        return _json(ser.fingerprint_to_dict(fp))

    @app.post("/geodesic", response_model=models.GeodesicResponse)
    def geodesic_endpoint(req: models.GeodesicRequest):
        cf = canonicalize(ser.metric_from_dict(req.metric.model_dump()))
        cov = ser.covector_from_dict(req.covector.model_dump())
        samples = [ser.sample_to_dict(geodesic_point(cf, cov, t)) for t in req.t_grid]
        return _json({"samples": samples})

    @app.post("/distance", response_model=models.DistanceResponse)
    def distance_endpoint(req: models.DistanceRequest):
        cf = canonicalize(ser.metric_from_dict(req.metric.model_dump()))
        p = ser.point_from_dict(req.from_point.model_dump(), "from")
        q = ser.point_from_dict(req.to_point.model_dump(), "to")
        opts = ser.options_from_dict(req.options.model_dump() if req.options else None)
        if req.lattice is None or req.group_only:
            res = distance_group(cf, group_mul(group_inverse(p), q), opts)
        else:
            lat = ser.lattice_from_dict(req.lattice.model_dump())
            res = distance_quotient(lat, cf, p, q, opts)
        return _json(ser.distance_result_to_dict(res))

    @app.post("/volume", response_model=models.VolumeResponse)
    def volume_endpoint(req: models.VolumeRequest):
        m = ser.metric_from_dict(req.metric.model_dump())
        lat = ser.lattice_from_dict(req.lattice.model_dump())
        kinds = ["riemannian", "popp", "minimal_popp"] if req.kind == "all" \
            else [req.kind.replace("-", "_")]
        results = []
        for kind in kinds:
            if kind == "riemannian" and m.rho == 0.0 and req.kind == "all":
                results.append({"kind": kind, "coeff": np.inf, "total_measure": np.inf})
                continue
            results.append({"kind": kind, "coeff": coefficient(m, kind),
                            "total_measure": total_measure(lat, m, kind)})
        return _json({"results": results})

    @app.post("/systole", response_model=models.SystoleResponse)
    def systole_endpoint(req: models.SystoleRequest):
        m = ser.metric_from_dict(req.metric.model_dump())
        lat = ser.lattice_from_dict(req.lattice.model_dump())
        rep = systolic_bound(lat, m, req.constant)
        payload = ser.systole_report_to_dict(rep)
        payload["classification"] = None
        if req.classify_3d:
            payload["classification"] = ser.classification_to_dict(classify_3d(lat.r[0], m))
        return _json(payload)

    @app.post("/collapse", response_model=models.CollapseResponse)
    def collapse_endpoint(req: models.CollapseRequest):
        entries = [ser.entry_from_dict(e.model_dump(), f"entries[{i}]")
                   for i, e in enumerate(req.entries)]
        opts = ser.options_from_dict(req.options.model_dump() if req.options else None)
        rep = clp.classify_sequence(entries, req.diameter_bound, opts)
        return _json(ser.sequence_report_to_dict(rep))

    @app.post("/selftest", response_model=models.SelftestResponse)
    def selftest_endpoint(req: models.SelftestRequest):
        try:
            report = run_selftest(seed=req.seed, checks=req.checks)
        except KeyError as exc:
            raise MalformedInput(str(exc), field="checks") from exc
        return _json(report)

    return app


app = create_app()
