"""Command-line client for the correlation service.

Every subcommand builds a request against the HTTP API and renders the
response. By default the service runs in-process; ``--server URL`` points
the client at a running instance instead. Floating-point output carries 9
significant digits. Exit codes: 0 success, 2 usage or validation error,
3 internal failure.
"""

import argparse
import asyncio
import json
import sys

import httpx


def _floats(text, n, flag):
    parts = [p for p in text.split(",") if p != ""]
    if len(parts) != n:
        raise argparse.ArgumentTypeError(f"{flag} expects {n} comma-separated numbers")
    try:
        return [float(p) for p in parts]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"{flag}: {exc}") from exc


def _c_triple(text):
    return _floats(text, 3, "--c")


def _p_quad(text):
    return _floats(text, 4, "--p")


def _range_pair(text):
    parts = text.split(":")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("--range expects MIN:MAX")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"--range: {exc}") from exc


def _line_spec(text):
    parts = text.split(":")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("--line expects c1,c2,c3:c1,c2,c3")
    return _floats(parts[0], 3, "--line"), _floats(parts[1], 3, "--line")


def _add_state_arguments(parser):
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--c", type=_c_triple, help="Bloch coefficients c1,c2,c3")
    group.add_argument("--p", type=_p_quad, help="Bell probabilities p1,p2,p3,p4")
    group.add_argument("--matrix", help="JSON file with a 4x4 matrix of [re,im] pairs")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--server", help="base URL of a running service (default: in-process)")
    common.add_argument("--format", choices=("json", "csv"), help="output format")
    common.add_argument("--tol", type=float, default=1e-9, help="region/boundary tolerance")
    common.add_argument("--freeze-tol", type=float, default=1e-9, dest="freeze_tol",
                        help="discord spread tolerance for freeze detection")
    common.add_argument("--nu", type=float, default=0.0, help="white-noise admixture fraction")
    common.add_argument("--seed", type=int, default=0, help="base random seed")

    parser = argparse.ArgumentParser(
        prog="qcorr", description="Two-qubit quantum correlation toolkit (service client)."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", parents=[common], help="all correlation measures of one state")
    _add_state_arguments(p)
    p.add_argument("--numeric", action="store_true",
                   help="force the projective-measurement optimizer even for Bell-diagonal input")

    p = sub.add_parser("classify", parents=[common], help="tetrahedron geometry of one state")
    _add_state_arguments(p)

    p = sub.add_parser("sweep", parents=[common], help="trajectory sweep with event table")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--line", type=_line_spec, help="straight segment c1,c2,c3:c1,c2,c3")
    group.add_argument("--poly", help="semicolon list like 'c1=u; c2=u-1.7; c3=0.7'")
    p.add_argument("--range", type=_range_pair, dest="u_range", help="parameter range MIN:MAX for --poly")
    p.add_argument("--samples", type=int, default=64)

    p = sub.add_parser("tomo", parents=[common], help="simulated tomography runs")
    _add_state_arguments(p)
    p.add_argument("--counts", type=int, default=100000, help="mean counts per projector")
    p.add_argument("--set", choices=("16", "36"), default="16", dest="projector_set")
    p.add_argument("--seeds", type=int, default=1, help="number of independent runs")
    p.add_argument("--no-report", action="store_true", help="skip correlation measures of the reconstructions")

    p = sub.add_parser("regions", parents=[common], help="c-cube grid classification point cloud")
    p.add_argument("--grid", type=int, default=21, help="grid points per axis")

    p = sub.add_parser("serve", parents=[common], help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    return parser


def _state_payload(args):
    if args.c is not None:
        return {"c": args.c}
    if args.p is not None:
        return {"p": args.p}
    try:
        with open(args.matrix, encoding="utf-8") as fh:
            matrix = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SystemExit(_fail(f"cannot read matrix file {args.matrix}: {exc}", 2))
    return {"matrix": matrix}


def _post(server, path, payload):
    if server:
        with httpx.Client(base_url=server, timeout=600.0) as client:
            response = client.post(path, json=payload)
            return response.status_code, response.json()

    from .service.app import create_app

    async def go():
        transport = httpx.ASGITransport(app=create_app())
        async with httpx.AsyncClient(
            transport=transport, base_url="http://qcorr", timeout=600.0
        ) as client:
            return await client.post(path, json=payload)

    response = asyncio.run(go())
    return response.status_code, response.json()


def _fmt(x):
    return f"{float(x) + 0.0:.9g}"


def _round_floats(obj):
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, float):
        return float(_fmt(obj))
    if isinstance(obj, list):
        return [_round_floats(v) for v in obj]
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    return obj


def _emit(lines):
    sys.stdout.write("\n".join(lines) + "\n")


def _emit_json(data):
    sys.stdout.write(json.dumps(_round_floats(data), indent=2) + "\n")


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return _fmt(value)
    return str(value)


def _render_compute(data, fmt):
    if fmt == "csv":
        branch_values = data.get("discord_branch_values") or (None, None, None)
        region = data.get("region") or {}
        row = [
            data["concurrence"], data["eof"], data["discord"],
            data["mutual_information"], data["classical_correlation"],
            branch_values[0], branch_values[1], branch_values[2],
            data.get("branch"), region.get("entanglement_region"), data["source"],
        ]
        _emit([
            "concurrence,eof,discord,mutual_information,classical_correlation,"
            "D1,D2,D3,branch,region,source",
            ",".join(_cell(v) for v in row),
        ])
    else:
        _emit_json(data)


def _render_classify(data, fmt):
    if fmt == "csv":
        region = data["region"]
        planes = ";".join(region["on_branch_boundary"])
        dists = data["plane_distances"]
        row = [
            data["c"][0], data["c"][1], data["c"][2],
            region["entanglement_region"], region["discord_branch"], planes,
            data["octahedron_distance"],
            dists["|c1|=|c2|"], dists["|c2|=|c3|"], dists["|c3|=|c1|"],
            data["zero_discord_axis"],
        ]
        _emit([
            "c1,c2,c3,region,branch,boundary_planes,octahedron_distance,"
            "dist_c1c2,dist_c2c3,dist_c3c1,zero_discord_axis",
            ",".join(_cell(v) for v in row),
        ])
    else:
        _emit_json(data)


def _render_sweep(data, fmt):
    if fmt == "json":
        _emit_json(data)
        return
    lines = ["param,c1,c2,c3,C,E,D,D1,D2,D3,branch,region"]
    for pt in data["points"]:
        lines.append(",".join(_cell(pt[k]) for k in (
            "param", "c1", "c2", "c3", "concurrence", "eof", "discord",
            "d1", "d2", "d3", "branch", "region",
        )))
    lines.append("# EVENTS")
    for event in data["events"]:
        lines.append(f"# {event['kind']},{_fmt(event['location'])},{event['detail']}")
    _emit(lines)


def _render_tomo(data, fmt):
    if fmt == "json":
        _emit_json(data)
        return
    lines = ["seed,fidelity,concurrence,eof,discord,mutual_information,classical_correlation"]
    for run in data["runs"]:
        report = run.get("report") or {}
        row = [
            run["seed"], run["fidelity"],
            report.get("concurrence"), report.get("eof"), report.get("discord"),
            report.get("mutual_information"), report.get("classical_correlation"),
        ]
        lines.append(",".join(_cell(v) for v in row))
    lines.append(f"# mean_fidelity,{_fmt(data['mean_fidelity'])}")
    lines.append(f"# min_fidelity,{_fmt(data['min_fidelity'])}")
    _emit(lines)


def _render_regions(data, fmt):
    if fmt == "json":
        _emit_json(data)
        return
    lines = ["c1,c2,c3,in_tetrahedron,region,branch,C,E,D"]
    for pt in data["points"]:
        row = [
            pt["c1"], pt["c2"], pt["c3"], pt["in_tetrahedron"],
            pt.get("region"), pt.get("branch"),
            pt.get("concurrence"), pt.get("eof"), pt.get("discord"),
        ]
        lines.append(",".join(_cell(v) for v in row))
    _emit(lines)


def _fail(message, code):
    sys.stderr.write(f"qcorr: {message}\n")
    return code


def _parse_poly(text):
    spec = {}
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise SystemExit(_fail(f"bad --poly component {part!r}, expected ci=expression", 2))
        name, expr = part.split("=", 1)
        name = name.strip()
        if name not in ("c1", "c2", "c3"):
            raise SystemExit(_fail(f"bad --poly component name {name!r}", 2))
        spec[name] = expr.strip()
    missing = {"c1", "c2", "c3"} - set(spec)
    if missing:
        raise SystemExit(_fail(f"--poly is missing {', '.join(sorted(missing))}", 2))
    return spec


_VALUE_FLAGS = ("--c", "--p", "--range", "--line")


def _normalize_argv(argv):
    """Join single-value flags with their value so negative numbers parse.

    argparse would otherwise read the value of e.g. ``--range -1:0`` as an
    unknown option.
    """
    out = []
    i = 0
    while i < len(argv):
        token = argv[i]
        if token in _VALUE_FLAGS and i + 1 < len(argv):
            out.append(f"{token}={argv[i + 1]}")
            i += 2
        else:
            out.append(token)
            i += 1
    return out


def main(argv=None):
    if argv is None:
        argv = sys.argv[1:]
    args = build_parser().parse_args(_normalize_argv(list(argv)))

    if args.command == "serve":
        import uvicorn

        from .service.app import create_app

        uvicorn.run(create_app(), host=args.host, port=args.port)
        return 0

    if args.command == "compute":
        payload = {
            "state": _state_payload(args),
            "numeric": args.numeric,
            "nu": args.nu,
            "tol": args.tol,
        }
        path, render, default_fmt = "/compute", _render_compute, "json"
    elif args.command == "classify":
        payload = {"state": _state_payload(args), "tol": args.tol}
        path, render, default_fmt = "/classify", _render_classify, "json"
    elif args.command == "sweep":
        payload = {
            "samples": args.samples,
            "nu": args.nu,
            "freeze_tol": args.freeze_tol,
            "tol": args.tol,
        }
        if args.line is not None:
            payload["line"] = {"start": args.line[0], "end": args.line[1]}
        else:
            if args.u_range is None:
                return _fail("--poly requires --range MIN:MAX", 2)
            spec = _parse_poly(args.poly)
            payload["poly"] = {
                "c1": spec["c1"], "c2": spec["c2"], "c3": spec["c3"],
                "u_min": args.u_range[0], "u_max": args.u_range[1],
            }
        path, render, default_fmt = "/sweep", _render_sweep, "csv"
    elif args.command == "tomo":
        payload = {
            "state": _state_payload(args),
            "counts": args.counts,
            "projector_set": args.projector_set,
            "seeds": args.seeds,
            "seed": args.seed,
            "nu": args.nu,
            "include_report": not args.no_report,
        }
        path, render, default_fmt = "/tomography", _render_tomo, "csv"
    elif args.command == "regions":
        payload = {"grid": args.grid}
        path, render, default_fmt = "/regions", _render_regions, "csv"
    else:  # pragma: no cover - argparse enforces the choices
        return _fail(f"unknown command {args.command!r}", 2)

    try:
        status, data = _post(args.server, path, payload)
    except httpx.HTTPError as exc:
        return _fail(f"service request failed: {exc}", 3)
    except Exception as exc:  # internal failure inside the in-process service
        return _fail(f"internal error: {exc}", 3)

    if status >= 500:
        return _fail(f"internal service error: {data}", 3)
    if status >= 400:
        detail = data.get("detail", data) if isinstance(data, dict) else data
        if isinstance(detail, list):  # pydantic validation error structure
            detail = "; ".join(
                f"{'.'.join(str(x) for x in err.get('loc', []))}: {err.get('msg', '')}"
                for err in detail
            )
        return _fail(str(detail), 2)

    render(data, args.format or default_fmt)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
