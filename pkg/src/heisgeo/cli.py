"""Command-line front end: a thin client of the HTTP service.

Every subcommand builds a JSON request and posts it to the service — by
default an in-process instance of the app, or a running server when
--server is given — then prints the response verbatim (the service already
serializes floats with 17 significant digits, so identical inputs give
byte-identical output).

JSON-valued flags accept either inline JSON or @path to read a file.

Exit status: 0 on success, 1 on assertion/selftest failure or server error,
2 on malformed input (the error names the offending field).
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings


def _load_json_value(value: str, field: str):
    text = value
    if value.startswith("@"):
        try:
            with open(value[1:], encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise _CliInputError(f"cannot read {value[1:]}: {exc}", field) from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise _CliInputError(f"invalid JSON: {exc}", field) from exc


class _CliInputError(Exception):
    def __init__(self, message: str, field: str):
        self.field = field
        super().__init__(message)


def _make_client(server: str | None):
    if server:
        import httpx

        return httpx.Client(base_url=server, timeout=None)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from starlette.testclient import TestClient

        from .service import app

        return TestClient(app, raise_server_exceptions=False)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="heisgeo",
                                     description="Geometry of compact Heisenberg manifolds")
    parser.add_argument("--server", default=None,
                        help="base URL of a running service (default: run in-process)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("canonicalize", help="reduce a metric to canonical form")
    p.add_argument("--metric", required=True, help="metric record {n, A_tilde, rho} or @file")

    p = sub.add_parser("fingerprint", help="orthogonal-action invariants of a metric")
    p.add_argument("--metric", required=True)

    p = sub.add_parser("geodesic", help="sample a geodesic from the identity")
    p.add_argument("--input", required=True,
                   help="record {metric, covector, t_grid} or @file")

    p = sub.add_parser("distance", help="distance on the group or its compact quotient")
    p.add_argument("--metric", required=True)
    p.add_argument("--lattice", default=None, help="lattice record {n, r} or @file")
    p.add_argument("--from", dest="from_point", required=True,
                   help="point record {x, y, z} or @file")
    p.add_argument("--to", dest="to_point", required=True)
    p.add_argument("--group-only", action="store_true",
                   help="ignore the lattice and compute the distance on H_n")
    p.add_argument("--options", default=None,
                   help="solver options {brackets, root_tol, zero_tol, force_shooting}")

    p = sub.add_parser("volume", help="volume coefficients and total measures")
    p.add_argument("--metric", required=True)
    p.add_argument("--lattice", required=True)
    p.add_argument("--kind", default="all",
                   choices=["riemannian", "popp", "minimal-popp", "all"])

    p = sub.add_parser("systole", help="systole and systolic bound (rho = 0)")
    p.add_argument("--lattice", required=True)
    p.add_argument("--metric", required=True)
    p.add_argument("--constant", default="default",
                   help="flat-torus constant: loewner, minkowski, or a float")
    p.add_argument("--classify-3d", action="store_true",
                   help="include the 3-dimensional case classification (n = 1)")

    p = sub.add_parser("collapse", help="classify a metric sequence")
    p.add_argument("--entries", required=True,
                   help="JSON array of {lattice, metric, k} or @file")
    p.add_argument("--diameter-bound", type=float, required=True)
    p.add_argument("--csv", action="store_true", help="emit the per-entry series as CSV")

    p = sub.add_parser("selftest", help="run the verification suite")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--checks", nargs="*", default=None,
                   help="subset of check names (default: all)")
    return parser


def _build_request(args) -> tuple[str, dict]:
    cmd = args.command
    if cmd in ("canonicalize", "fingerprint"):
        return f"/{cmd}", {"metric": _load_json_value(args.metric, "metric")}
    if cmd == "geodesic":
        return "/geodesic", _load_json_value(args.input, "input")
    if cmd == "distance":
        req = {
            "metric": _load_json_value(args.metric, "metric"),
            "from": _load_json_value(args.from_point, "from"),
            "to": _load_json_value(args.to_point, "to"),
            "group_only": args.group_only,
        }
        if args.lattice:
            req["lattice"] = _load_json_value(args.lattice, "lattice")
        if args.options:
            req["options"] = _load_json_value(args.options, "options")
        return "/distance", req
    if cmd == "volume":
        return "/volume", {
            "metric": _load_json_value(args.metric, "metric"),
            "lattice": _load_json_value(args.lattice, "lattice"),
            "kind": args.kind,
        }
    if cmd == "systole":
        constant = args.constant
        try:
            constant = float(constant)
        except ValueError:
            pass
        return "/systole", {
            "lattice": _load_json_value(args.lattice, "lattice"),
            "metric": _load_json_value(args.metric, "metric"),
            "constant": constant,
            "classify_3d": args.classify_3d,
        }
    if cmd == "collapse":
        return "/collapse", {
            "entries": _load_json_value(args.entries, "entries"),
            "diameter_bound": args.diameter_bound,
        }
    if cmd == "selftest":
        req = {"seed": args.seed}
        if args.checks is not None:
            req["checks"] = args.checks
        return "/selftest", req
    raise _CliInputError(f"unknown command {cmd!r}", "command")


def _collapse_csv(request: dict, payload: dict) -> str:
    ks = [entry.get("k", i) for i, entry in enumerate(request["entries"])]
    minima = payload["successive_minima"]
    width = len(minima[0]) if minima else 0
    header = ["k", "measure", "fiber_diam"] + [f"minima_{j + 1}" for j in range(width)]
    lines = [",".join(header)]
    for k, meas, fib, row in zip(ks, payload["measures"], payload["fiber_diams"], minima):
        cells = [str(k), format(meas, ".17g"), format(fib, ".17g")]
        cells += [format(v, ".17g") for v in row]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        path, request = _build_request(args)
    except _CliInputError as exc:
        print(json.dumps({"error": "MalformedInput", "field": exc.field, "message": str(exc)}))
        return 2

    with _make_client(args.server) as client:
        response = client.post(path, json=request)

    if response.status_code in (400, 422):
        print(response.text)
        return 2
    if response.status_code != 200:
        print(response.text)
        return 1

    if args.command == "collapse" and args.csv:
        sys.stdout.write(_collapse_csv(request, json.loads(response.text)))
        return 0
    print(response.text)
    if args.command == "selftest" and not json.loads(response.text)["ok"]:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
