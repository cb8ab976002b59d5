"""FastAPI service wrapping the core package.

Every endpoint is a pure computation: the response is a single JSON
document that depends only on the request (sampling endpoints take an
explicit seed).  The CLI drives the same handler functions in process,
so CLI output and service responses are identical documents.
"""

import itertools

import numpy as np
from fastapi import FastAPI, HTTPException

from ..bkn import bkn_matrix, check_nakano_pointwise, check_ks_top_degree_pointwise, crosscheck_line
from ..bott import bott_cohomology, bott_flag
from ..curvature import (
    CurvatureTensor,
    check_ks_positive,
    check_nakano,
    grassmannian_curvature,
    identity_tensor,
    sample_griffiths_k,
    sample_nakano_positive,
    tensor_from_json,
    zero_tensor,
)
from ..errors import InvalidInputError
from ..omega import exterior_weights, hodge_numbers
from ..vanish import (
    FlagContext,
    parse_bundle_expr,
    product_projective_cohomology,
    query_vanishing,
)
from ..weights import BlockWeight, flag_dimension, validate_flag
from .models import (
    BknRequest,
    BottRequest,
    CrosscheckRequest,
    HodgeRequest,
    OmegaRequest,
    PositivityRequest,
    SharpnessRequest,
    TensorSource,
    VanishRequest,
)

app = FastAPI(
    title="flagvanish",
    description="Cohomology of homogeneous line bundles, pointwise curvature "
    "positivity tests, and vanishing-theorem queries.",
)


def _bad_request(message: str) -> HTTPException:
    return HTTPException(status_code=400, detail=message)


def resolve_tensor(source: TensorSource, seed: int = 0) -> CurvatureTensor:
    """Build the curvature tensor a request refers to."""
    if (source.tensor is None) == (source.builtin is None):
        raise InvalidInputError("provide exactly one of 'tensor' and 'builtin'")
    if source.tensor is not None:
        return tensor_from_json(source.tensor)
    name, _, arg_str = source.builtin.partition(":")
    try:
        args = [int(x) for x in arg_str.split(",")] if arg_str else []
    except ValueError as exc:
        raise InvalidInputError(f"bad builtin arguments {arg_str!r}") from exc
    if name == "grassmannian" and len(args) == 2:
        return grassmannian_curvature(*args)
    if name == "identity" and len(args) == 2:
        return identity_tensor(*args)
    if name == "zero" and len(args) == 2:
        return zero_tensor(*args)
    if name == "griffiths_sample" and len(args) in (3, 4):
        n, r, k = args[:3]
        return sample_griffiths_k(n, r, k, seed=args[3] if len(args) == 4 else seed)
    if name == "nakano_sample" and len(args) in (2, 3):
        n, r = args[:2]
        return sample_nakano_positive(n, r, seed=args[2] if len(args) == 3 else seed)
    raise InvalidInputError(f"unknown builtin {source.builtin!r}")


def compute_bott(req: BottRequest) -> dict:
    if req.flag is not None or req.block_weight is not None:
        if req.flag is None or req.block_weight is None:
            raise InvalidInputError("flag and block_weight must be given together")
        a_s = BlockWeight(tuple(req.block_weight), validate_flag(req.flag))
        return bott_flag(a_s).to_json()
    if req.weight is None:
        raise InvalidInputError("provide weight (with rank) or flag with block_weight")
    rank = req.rank if req.rank is not None else len(req.weight)
    return bott_cohomology(tuple(req.weight), rank).to_json()


def compute_omega(req: OmegaRequest) -> dict:
    s = validate_flag(req.flag)
    decomposition = exterior_weights(s, req.degree)
    return {
        "flag": list(s),
        "degree": req.degree,
        "dimension": flag_dimension(s),
        "terms": decomposition.to_json(),
    }


def compute_hodge(req: HodgeRequest) -> dict:
    s = validate_flag(req.flag)
    return {
        "flag": list(s),
        "dimension": flag_dimension(s),
        "table": hodge_numbers(s),
    }


def compute_bkn(req: BknRequest) -> dict:
    R = resolve_tensor(req, seed=req.seed)
    if req.check == "nakano_pointwise":
        if req.q is None:
            raise InvalidInputError("nakano_pointwise needs q")
        report = check_nakano_pointwise(R, req.q, tol=req.tol)
        return report.to_json()
    if req.check == "ks_top_degree":
        if req.q is None:
            raise InvalidInputError("ks_top_degree needs q")
        report = check_ks_top_degree_pointwise(
            R, req.k, req.q, tol=req.tol, samples=req.samples, seed=req.seed
        )
        return report.to_json()
    if req.check != "spectrum":
        raise InvalidInputError(f"unknown bkn check {req.check!r}")
    if (req.p is None) != (req.q is None):
        raise InvalidInputError("give both p and q, or neither for all panels")
    if req.p is not None:
        pairs = [(req.p, req.q)]
    else:
        pairs = list(itertools.product(range(R.n + 1), range(R.n + 1)))
    panels = []
    for p, q in pairs:
        op = bkn_matrix(R, p, q)
        panels.append(
            {
                "p": p,
                "q": q,
                "size": op.basis.size,
                "spectrum": [float(x) for x in np.sort(op.eigenvalues())],
            }
        )
    return {"n": R.n, "r": R.r, "panels": panels}


def compute_positivity(req: PositivityRequest) -> dict:
    R = resolve_tensor(req, seed=req.seed)
    if req.check == "nakano":
        return check_nakano(R, tol=req.tol).to_json()
    if req.check != "ks":
        raise InvalidInputError(f"unknown positivity check {req.check!r}")
    report = check_ks_positive(
        R, req.k, req.s, samples=req.samples, tol=req.tol, seed=req.seed
    )
    return report.to_json()


def compute_vanish(req: VanishRequest) -> dict:
    expr, declared_n = parse_bundle_expr(req.expr)
    n = req.n if req.n is not None else declared_n
    if n is None:
        raise InvalidInputError("base dimension: pass n or declare it on an atom")
    ctx = None
    if req.flag is not None or req.block_weight is not None or req.weight_u is not None:
        if req.flag is None or req.block_weight is None or req.weight_u is None:
            raise InvalidInputError(
                "flag context needs flag, block_weight and weight_u together"
            )
        ctx = FlagContext(
            flag=tuple(req.flag),
            block_weight=tuple(req.block_weight),
            weight=tuple(req.weight_u),
        )
    reports = query_vanishing(
        expr, n, req.p, req.q, conjectural=req.conjectural, flag_context=ctx
    )
    return {
        "expr": req.expr,
        "n": n,
        "p": req.p,
        "q": req.q,
        "conjectural": req.conjectural,
        "reports": [rep.to_json() for rep in reports],
    }


def compute_sharpness(req: SharpnessRequest) -> dict:
    if len(req.dims) != 2 or len(req.twists) != 2:
        raise InvalidInputError("dims and twists must each have two entries")
    table = product_projective_cohomology(tuple(req.dims), tuple(req.twists))
    n = req.dims[0] + req.dims[1]
    nonzero = [
        {"p": p, "q": q, "dimension": table[p][q]}
        for p in range(n + 1)
        for q in range(n + 1)
        if table[p][q]
    ]
    return {
        "dims": list(req.dims),
        "twists": list(req.twists),
        "n": n,
        "table": table,
        "nonzero": nonzero,
    }


def compute_crosscheck(req: CrosscheckRequest) -> dict:
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([req.seed, 7])))
    worst = 0.0
    panels = 0
    for _ in range(req.trials):
        nu = rng.uniform(-1.0, 1.0, req.n)
        mu = rng.uniform(0.5, 2.0, req.n)
        for p in range(req.n + 1):
            for q in range(req.n + 1):
                worst = max(worst, crosscheck_line(nu, mu, p, q))
                panels += 1
    return {
        "n": req.n,
        "trials": req.trials,
        "seed": req.seed,
        "panels_checked": panels,
        "max_deviation": worst,
    }


_HANDLERS = {
    "bott": (BottRequest, compute_bott),
    "omega": (OmegaRequest, compute_omega),
    "hodge": (HodgeRequest, compute_hodge),
    "bkn": (BknRequest, compute_bkn),
    "positivity": (PositivityRequest, compute_positivity),
    "vanish": (VanishRequest, compute_vanish),
    "sharpness": (SharpnessRequest, compute_sharpness),
    "crosscheck": (CrosscheckRequest, compute_crosscheck),
}


@app.get("/")
def index() -> dict:
    return {"service": "flagvanish", "endpoints": sorted(f"/{k}" for k in _HANDLERS)}


def _wrap(handler):
    def endpoint(req):
        try:
            return handler(req)
        except InvalidInputError as exc:
            raise _bad_request(str(exc)) from exc

    return endpoint


@app.post("/bott")
def bott_endpoint(req: BottRequest) -> dict:
    return _wrap(compute_bott)(req)


@app.post("/omega")
def omega_endpoint(req: OmegaRequest) -> dict:
    return _wrap(compute_omega)(req)


@app.post("/hodge")
def hodge_endpoint(req: HodgeRequest) -> dict:
    return _wrap(compute_hodge)(req)


@app.post("/bkn")
def bkn_endpoint(req: BknRequest) -> dict:
    return _wrap(compute_bkn)(req)


@app.post("/positivity")
def positivity_endpoint(req: PositivityRequest) -> dict:
    return _wrap(compute_positivity)(req)


@app.post("/vanish")
def vanish_endpoint(req: VanishRequest) -> dict:
    return _wrap(compute_vanish)(req)


@app.post("/sharpness")
def sharpness_endpoint(req: SharpnessRequest) -> dict:
    return _wrap(compute_sharpness)(req)


@app.post("/crosscheck")
def crosscheck_endpoint(req: CrosscheckRequest) -> dict:
    return _wrap(compute_crosscheck)(req)
