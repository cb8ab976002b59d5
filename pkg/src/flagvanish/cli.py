"""Command-line front end.

The CLI is a thin client of the service layer: every subcommand builds
the corresponding request model and dispatches it, by default to the
in-process handlers, or to a running service when --server is given.
Either way the emitted document is the same single JSON object on
stdout; diagnostics go to stderr.  Exit codes: 0 for a computed result
(a refuted positivity check is a successful computation), 2 for input
errors, 1 for internal failures.
"""

import argparse
import json
import re
import sys

from pydantic import ValidationError

from .errors import InvalidInputError
from .service.app import (
    app as service_asgi,
    compute_bkn,
    compute_bott,
    compute_crosscheck,
    compute_hodge,
    compute_omega,
    compute_positivity,
    compute_sharpness,
    compute_vanish,
)
from .service.models import (
    BknRequest,
    BottRequest,
    CrosscheckRequest,
    HodgeRequest,
    OmegaRequest,
    PositivityRequest,
    SharpnessRequest,
    VanishRequest,
)

_INT_LIST = re.compile(r"^-?\d+(,-?\d+)*$")
_LIST_FLAGS = {
    "--weight",
    "--block-weight",
    "--flag",
    "--dims",
    "--twists",
    "--weight-u",
}


def _int_list(text: str) -> list[int]:
    if not _INT_LIST.match(text):
        raise argparse.ArgumentTypeError(
            f"expected comma-separated integers, got {text!r}"
        )
    return [int(x) for x in text.split(",")]


def _merge_negative_values(argv: list[str]) -> list[str]:
    """Turn ["--weight", "-2,0"] into ["--weight=-2,0"] so argparse does not
    mistake a negative weight for an option."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _LIST_FLAGS and i + 1 < len(argv) and _INT_LIST.match(argv[i + 1]):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flagvanish",
        description="Cohomology of homogeneous line bundles on flag manifolds, "
        "pointwise curvature positivity tests, and vanishing-theorem queries.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--server",
        default=None,
        help="base URL of a running service; default runs in process",
    )
    common.add_argument(
        "--format",
        choices=("json", "table"),
        default="json",
        help="table output is for humans and carries no stability guarantee",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_parser(name, **kwargs):
        return sub.add_parser(name, parents=[common], **kwargs)

    p = add_parser("bott", help="cohomology of a homogeneous line bundle")
    p.add_argument("--weight", type=_int_list)
    p.add_argument("--rank", type=int)
    p.add_argument("--flag", type=_int_list)
    p.add_argument("--block-weight", type=_int_list)

    p = add_parser("omega", help="exterior-power weight decomposition")
    p.add_argument("--flag", type=_int_list, required=True)
    p.add_argument("--degree", type=int, required=True)

    p = add_parser("hodge", help="Hodge-number table of a flag manifold")
    p.add_argument("--flag", type=_int_list, required=True)

    p = add_parser("bkn", help="curvature commutator spectra and checks")
    _tensor_args(p)
    p.add_argument("--p", type=int)
    p.add_argument("--q", type=int)
    p.add_argument(
        "--check",
        choices=("spectrum", "nakano_pointwise", "ks_top_degree"),
        default="spectrum",
    )
    p.add_argument("--k", type=int, default=0)
    _sampling_args(p)

    p = add_parser("positivity", help="sampled (k, s)-positivity checks")
    _tensor_args(p)
    p.add_argument("--check", choices=("ks", "nakano"), default="ks")
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--s", type=int, default=1)
    _sampling_args(p)

    p = add_parser("vanish", help="vanishing-theorem queries")
    p.add_argument("--expr", required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--conjectural", action="store_true")
    p.add_argument("--flag", type=_int_list)
    p.add_argument("--block-weight", type=_int_list)
    p.add_argument("--weight-u", type=_int_list)

    p = add_parser("sharpness", help="split line bundles on products of "
                       "projective spaces")
    p.add_argument("--dims", type=_int_list, required=True)
    p.add_argument("--twists", type=_int_list, required=True)

    p = add_parser("crosscheck", help="line-bundle spectrum consistency sweep")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)

    p = add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return parser


def _tensor_args(p):
    p.add_argument("--tensor-file", help="curvature tensor JSON document")
    p.add_argument("--builtin", help="e.g. grassmannian:4,2 or griffiths_sample:3,2,1")


def _sampling_args(p):
    p.add_argument("--samples", type=int, default=500)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--seed", type=int, default=0)


def _load_tensor_doc(args) -> dict:
    source = {}
    if args.tensor_file:
        with open(args.tensor_file) as fh:
            source["tensor"] = json.load(fh)
    if args.builtin:
        source["builtin"] = args.builtin
    return source


def _make_request(args):
    if args.command == "bott":
        return BottRequest(
            weight=args.weight,
            rank=args.rank,
            flag=args.flag,
            block_weight=args.block_weight,
        ), compute_bott
    if args.command == "omega":
        return OmegaRequest(flag=args.flag, degree=args.degree), compute_omega
    if args.command == "hodge":
        return HodgeRequest(flag=args.flag), compute_hodge
    if args.command == "bkn":
        return BknRequest(
            **_load_tensor_doc(args),
            p=args.p,
            q=args.q,
            check=args.check,
            k=args.k,
            samples=args.samples,
            tol=args.tol,
            seed=args.seed,
        ), compute_bkn
    if args.command == "positivity":
        return PositivityRequest(
            **_load_tensor_doc(args),
            check=args.check,
            k=args.k,
            s=args.s,
            samples=args.samples,
            tol=args.tol,
            seed=args.seed,
        ), compute_positivity
    if args.command == "vanish":
        return VanishRequest(
            expr=args.expr,
            n=args.n,
            p=args.p,
            q=args.q,
            conjectural=args.conjectural,
            flag=args.flag,
            block_weight=args.block_weight,
            weight_u=args.weight_u,
        ), compute_vanish
    if args.command == "sharpness":
        return SharpnessRequest(dims=args.dims, twists=args.twists), compute_sharpness
    if args.command == "crosscheck":
        return CrosscheckRequest(
            n=args.n, trials=args.trials, seed=args.seed
        ), compute_crosscheck
    raise InvalidInputError(f"unknown command {args.command!r}")


def _post_to_server(server: str, command: str, payload: dict) -> dict:
    import httpx

    resp = httpx.post(f"{server.rstrip('/')}/{command}", json=payload, timeout=300.0)
    if resp.status_code == 400 or resp.status_code == 422:
        raise InvalidInputError(resp.text)
    resp.raise_for_status()
    return resp.json()


def _render_table(command: str, doc: dict) -> str:
    if command in ("hodge", "sharpness") and "table" in doc:
        rows = doc["table"]
        width = max(len(str(x)) for row in rows for x in row)
        lines = [
            " ".join(str(x).rjust(width) for x in row) for row in rows
        ]
        return "\n".join(lines)
    if command == "omega":
        return "\n".join(
            f"{term['weight']} x{term['multiplicity']}" for term in doc["terms"]
        )
    return json.dumps(doc, indent=2)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(_merge_negative_values(argv))

    if args.command == "serve":
        import uvicorn

        uvicorn.run(service_asgi, host=args.host, port=args.port)
        return 0

    try:
        request, handler = _make_request(args)
        if args.server:
            doc = _post_to_server(args.server, args.command, request.model_dump())
        else:
            doc = handler(request)
    except (InvalidInputError, ValidationError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - report and fail with status 1
        print(f"internal error: {exc}", file=sys.stderr)
        return 1

    if args.format == "table":
        print(_render_table(args.command, doc))
    else:
        print(json.dumps(doc, indent=2))
    return 0


if __name__ == "__main__":
    sys.exit(main())
