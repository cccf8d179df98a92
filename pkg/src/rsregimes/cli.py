"""Command-line front end.

Every subcommand builds the same request models the HTTP service accepts and
runs them through the shared handlers, either in-process (default) or against
a remote service (--server URL).  Data goes to standard output or --out;
progress notes go to standard error.

Exit codes: 0 success, 1 a diagnostic check failed, 2 config or usage error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys

from .checks import CHECK_TOPICS
from .config import distribution_to_jsonable, load_suite
from .errors import ConfigError, RsRegimesError
from .montecarlo import ExperimentConfig, SequentialProcedure, stop_histogram
from .service import handlers
from .service.schemas import (CheckRequest, CheckResponse, EstimateRequest,
                              EstimateResponse, PlanRequest, PlanResponse,
                              TableRequest, TableResponse)

__all__ = ["main"]

ESTIMATE_HEADER = ["pair", "regime", "policy", "n1", "n2", "reps", "pis",
                   "se", "seed", "wall_time_s"]
PLAN_HEADER = ["pair", "regime", "policy", "n1", "n2", "raw1", "raw2"]
TABLE_HEADER = ["regime", "n", "pis", "se", "published_pis", "published_se",
                "flag"]


def _real(x: float) -> str:
    # 17 significant digits: the shortest form that always round-trips.
    return format(float(x), ".17g")


def _count(x: float) -> str:
    value = float(x)
    return str(int(value)) if value.is_integer() else _real(value)


def _log(message: str) -> None:
    print(message, file=sys.stderr)


def _write_rows(header: list[str], rows: list[list[str]], out: str | None) -> None:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    text = buffer.getvalue()
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        _log(f"wrote {out}")


def _write_text(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
        _log(f"wrote {out}")


def _pair_payload(pair) -> dict:
    return {"dist1": distribution_to_jsonable(pair.dist1),
            "dist2": distribution_to_jsonable(pair.dist2),
            "delta": pair.delta}


def _policy_payload(policy) -> dict:
    return {"kind": policy.kind, "anchor_b": policy.anchor_b}


class _Client:
    """Runs requests in-process, or against a remote service when set."""

    def __init__(self, server: str | None):
        self.server = server.rstrip("/") if server else None

    def plan(self, payload: dict) -> PlanResponse:
        return self._call("/plan", payload, PlanRequest, PlanResponse,
                          handlers.handle_plan)

    def estimate(self, payload: dict) -> EstimateResponse:
        return self._call("/estimate", payload, EstimateRequest,
                          EstimateResponse, handlers.handle_estimate)

    def table(self, payload: dict) -> TableResponse:
        return self._call("/table", payload, TableRequest, TableResponse,
                          handlers.handle_table)

    def check(self, payload: dict) -> CheckResponse:
        return self._call("/check", payload, CheckRequest, CheckResponse,
                          handlers.handle_check)

    def _call(self, path, payload, request_model, response_model, handler):
        if self.server is None:
            return handler(request_model.model_validate(payload))
        import httpx

        try:
            reply = httpx.post(self.server + path, json=payload, timeout=None)
        except httpx.HTTPError as exc:
            raise ConfigError(f"cannot reach server {self.server}: {exc}") from exc
        if reply.status_code >= 400:
            try:
                detail = reply.json().get("detail", reply.text)
            except ValueError:
                detail = reply.text
            if reply.status_code == 400:
                raise ConfigError(str(detail))
            raise RsRegimesError(f"server returned {reply.status_code}: {detail}")
        return response_model.model_validate(reply.json())


def _named(label: str, exc: RsRegimesError) -> RsRegimesError:
    return type(exc)(f"{label}: {exc}")


def _cmd_plan(args) -> int:
    suite = load_suite(args.config)
    client = _Client(args.server)
    rows = []
    for name, pair in suite.pairs.items():
        for row in suite.rows:
            if row.pair is not None and row.pair != name:
                continue
            payload = {"pair": _pair_payload(pair), "alpha": suite.alpha,
                       "regime": row.regime,
                       "policy": _policy_payload(row.policy)}
            try:
                resp = client.plan(payload)
            except ConfigError:
                raise
            except RsRegimesError as exc:
                raise _named(f"{name}/{row.regime}/{row.policy.kind}", exc) from exc
            rows.append([name, resp.regime, resp.policy, str(resp.n1),
                         str(resp.n2), _real(resp.raw1), _real(resp.raw2)])
    _write_rows(PLAN_HEADER, rows, args.out)
    return 0


def _cmd_estimate(args) -> int:
    suite = load_suite(args.config)
    reps = args.reps if args.reps is not None else suite.replications
    seed = args.seed if args.seed is not None else suite.master_seed
    out = args.out if args.out is not None else suite.output_path
    client = _Client(args.server)
    rows = []
    for name, pair in suite.pairs.items():
        if args.sequential is not None:
            procedures = [({"kind": "sequential", "rule": args.sequential},
                           f"{name}/{args.sequential}/sequential")]
        else:
            procedures = [({"kind": "fixed", "regime": row.regime,
                            "policy": _policy_payload(row.policy)},
                           f"{name}/{row.regime}/{row.policy.kind}")
                          for row in suite.rows
                          if row.pair is None or row.pair == name]
        for procedure, label in procedures:
            payload = {"pair": _pair_payload(pair), "alpha": suite.alpha,
                       "procedure": procedure, "replications": reps,
                       "master_seed": seed, "workers": args.workers}
            try:
                resp = client.estimate(payload)
            except ConfigError:
                raise
            except RsRegimesError as exc:
                raise _named(label, exc) from exc
            _log(f"{label}: pis={resp.pis_estimate:.4g} se={resp.std_error:.4g} "
                 f"({resp.wall_time_s:.2f}s)")
            rows.append([name, resp.regime, resp.policy, _count(resp.n1),
                         _count(resp.n2), str(resp.replications),
                         _real(resp.pis_estimate), _real(resp.std_error),
                         str(resp.master_seed), _real(resp.wall_time_s)])
    _write_rows(ESTIMATE_HEADER, rows, out)
    if args.hist is not None:
        hist_rows = []
        for name, pair in suite.pairs.items():
            config = ExperimentConfig(pair, SequentialProcedure(args.sequential,
                                                                suite.alpha),
                                      reps, seed)
            counts = stop_histogram(config, args.workers)
            for (stop1, _stop2), count in sorted(counts.items()):
                hist_rows.append([name, str(stop1), str(count)])
        _write_rows(["pair", "stop_n", "count"], hist_rows, args.hist)
    return 0


def _pretty_table(resp: TableResponse) -> str:
    lines = [f"Comparison table {resp.which} "
             f"(alpha={resp.alpha:g}, replications={resp.replications}, "
             f"seed={resp.master_seed})", ""]
    header = f"{'Regime':<8}{'n':>6}  {'PIS':>10} {'SE':>10}  " \
             f"{'Published':>10} {'SE':>10}  Flag"
    lines.append(header)
    lines.append("-" * len(header))
    for row in resp.rows:
        lines.append(f"{row.regime.upper():<8}{row.n:>6}  "
                     f"{row.pis:>10.4g} {row.se:>10.4g}  "
                     f"{row.published_pis:>10.4g} {row.published_se:>10.4g}  "
                     f"{row.flag.upper()}")
    lines.append("")
    return "\n".join(lines)


def _cmd_table(args) -> int:
    payload = {"which": args.which}
    if args.reps is not None:
        payload["replications"] = args.reps
    if args.seed is not None:
        payload["master_seed"] = args.seed
    if args.workers is not None:
        payload["workers"] = args.workers
    client = _Client(args.server)
    resp = client.table(payload)
    sys.stdout.write(_pretty_table(resp))
    if args.out is not None:
        rows = [[row.regime, str(row.n), _real(row.pis), _real(row.se),
                 _real(row.published_pis), _real(row.published_se), row.flag]
                for row in resp.rows]
        _write_rows(TABLE_HEADER, rows, args.out)
    return 0


def _cmd_check(args) -> int:
    client = _Client(args.server)
    resp = client.check({"topic": args.topic})
    for item in resp.items:
        status = "PASS" if item.passed else "FAIL"
        print(f"{status} {item.name}: {item.detail}")
    return 0 if resp.passed else 1


def _cmd_serve(args) -> int:
    import uvicorn

    from .service.app import app
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rsregimes",
        description="Sample-size planning, sequential stopping, and Monte "
                    "Carlo validation for two-system ranking and selection.")
    parser.add_argument("--server", metavar="URL", default=None,
                        help="send requests to a running service instead of "
                             "computing in-process")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="compute sample-size plans as CSV")
    p.add_argument("--config", required=True,
                   help="JSON config path or built-in name (table1, table2)")
    p.add_argument("--out", default=None, help="write CSV here instead of stdout")
    p.set_defaults(func=_cmd_plan)

    p = sub.add_parser("estimate",
                       help="Monte Carlo misselection estimates as CSV")
    p.add_argument("--config", required=True,
                   help="JSON config path or built-in name (table1, table2)")
    p.add_argument("--reps", type=int, default=None,
                   help="replications per row (overrides the config)")
    p.add_argument("--seed", type=int, default=None,
                   help="master seed (overrides the config)")
    p.add_argument("--workers", type=int, default=None,
                   help="worker processes (default: RSREGIMES_WORKERS or 1)")
    p.add_argument("--out", default=None, help="write CSV here instead of stdout")
    p.add_argument("--sequential", choices=("clt", "md"), default=None,
                   help="estimate a sequential stopping rule instead of the "
                        "configured fixed plans")
    p.add_argument("--hist", metavar="PATH", default=None,
                   help="also write a stop-time histogram CSV (sequential "
                        "only, computed in-process)")
    p.set_defaults(func=_cmd_estimate)

    p = sub.add_parser("table", help="reproduce a built-in comparison table")
    p.add_argument("--which", type=int, choices=(1, 2), required=True)
    p.add_argument("--reps", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--out", default=None,
                   help="also write the rows as CSV to this path")
    p.set_defaults(func=_cmd_table)

    p = sub.add_parser("check", help="run a diagnostic check suite")
    p.add_argument("topic", choices=tuple(CHECK_TOPICS))
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=_cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "hist", None) is not None and args.sequential is None:
        parser.error("--hist requires --sequential")
    try:
        return args.func(args)
    except ConfigError as exc:
        _log(f"config error: {exc}")
        return 2
    except ValueError as exc:
        _log(f"invalid request: {exc}")
        return 2
    except RsRegimesError as exc:
        _log(f"numeric failure: {exc}")
        return 3


if __name__ == "__main__":
    sys.exit(main())
