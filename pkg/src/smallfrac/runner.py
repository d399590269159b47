"""Deterministic experiment runner behind the command line.

An :class:`ExperimentSpec` fully describes one run.  ``run`` dispatches it,
renders JSON / CSV / table output that embeds the experiment spec, and writes files
atomically.  The worker count is an execution detail and is deliberately left
out of the embedded spec so outputs are byte-identical across thread counts.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import os
import random
import sys
import tempfile
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any

from . import exponents as ex
from .arith import CONSTANT_ALGORITHMS, Angle, default_precision, parse_angle
from .errors import DomainError, Refusal
from .exact import fraction_str
from .meanvalue import mean_value_table
from .recovery import NotFound, recover, verify_approx
from .search import (
    construct_qm,
    exponent_fit,
    min_additive_form,
    min_poly,
    two_step_minimize,
)
from .weyl import CoefficientVector, weyl_sum

log = logging.getLogger(__name__)

COMMANDS = ("weyl", "meanvalue", "exponents", "minimize", "pipeline", "recover", "scan")
FORMATS = ("json", "csv", "table")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_REFUSAL = 2
EXIT_USAGE = 64

MEANVALUE_COLUMNS = ["s", "k", "N", "count", "bound_main", "bound_secondary", "ratio"]
EXPONENT_COLUMNS = ["problem", "k", "s", "source", "exponent_exact", "exponent_decimal", "winner"]
SCAN_COLUMNS = ["trial", "generator", "k", "slope", "intercept", "used", "excluded"]


@dataclass
class ExperimentSpec:
    command: str
    parameters: dict[str, Any] = field(default_factory=dict)
    seed: int = 0
    output: str = "json"
    precision_bits: int | None = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise DomainError(f"unknown command {self.command!r}")
        if self.output not in FORMATS:
            raise DomainError(f"unknown output format {self.output!r}")
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must be a 64-bit unsigned integer")

    def to_json(self) -> dict:
        return asdict(self)


@dataclass
class Outcome:
    """What a command produced: a JSON-able payload and optional table rows."""

    payload: Any
    columns: list[str] | None = None
    rows: list[list[Any]] | None = None


# -- helpers -------------------------------------------------------------------


def _precision(spec: ExperimentSpec, k: int, N: int) -> int:
    return spec.precision_bits or default_precision(k, N)


def _coeffs(text, k: int, P: int) -> CoefficientVector:
    items = text.split(",") if isinstance(text, str) else list(text)
    if len(items) != k:
        raise DomainError(f"expected {k} coefficients (alpha_1..alpha_k), got {len(items)}")
    return CoefficientVector(tuple(parse_angle(s, P) for s in items))


def _constants_used(*texts) -> dict:
    used = {}
    for t in texts:
        for item in (t.split(",") if isinstance(t, str) else t or []):
            name = item.strip().lstrip("+-").lower()
            if name in CONSTANT_ALGORITHMS:
                used[name] = CONSTANT_ALGORITHMS[name]
    return used


def _int_range(text) -> list[int]:
    return ex._parse_range(text)


def _fstr(x: Fraction) -> str:
    return fraction_str(x)


# -- command implementations -----------------------------------------------------


def _cmd_weyl(spec: ExperimentSpec, workers: int, budget: int | None) -> Outcome:
    p = spec.parameters
    k, N = int(p["k"]), int(p["n"])
    P = _precision(spec, k, N)
    c = _coeffs(p["coeffs"], k, P)
    kw = {"max_terms": budget} if budget else {}
    g = weyl_sum(c, N, workers=workers, **kw)
    out = g.to_json()
    out["precision_bits"] = P
    out["constants"] = _constants_used(p["coeffs"])
    row = [k, N, out["real"], out["imag"], out["modulus"], out["error_bound"]]
    return Outcome(out, ["k", "N", "real", "imag", "modulus", "error_bound"], [row])


def _cmd_meanvalue(spec: ExperimentSpec, workers: int, budget: int | None) -> Outcome:
    p = spec.parameters
    ss = _int_range(p["s"])
    ks = _int_range(p["k"])
    Ns = list(range(int(p.get("nmin", 1)), int(p["nmax"]) + 1))
    kw = {"budget": budget} if budget else {}
    table = mean_value_table(ss, ks, Ns, workers=workers, **kw)
    rows, payload = [], []
    for r in table:
        if r.error:
            log.warning("cell refused: %s", r.error)
            payload.append({"s": r.s, "k": r.k, "N": r.N, "error": r.error})
            rows.append([r.s, r.k, r.N, "", "", "", ""])
            continue
        rec = {"s": r.s, "k": r.k, "N": r.N, "count": str(r.count), "bound_main": str(r.bound_main),
               "bound_secondary": _fstr(r.bound_secondary), "ratio": _fstr(r.ratio)}
        payload.append(rec)
        rows.append([rec[c] for c in MEANVALUE_COLUMNS])
    return Outcome({"rows": payload}, MEANVALUE_COLUMNS, rows)


def _cmd_exponents(spec: ExperimentSpec, workers: int, budget: int | None) -> Outcome:
    p = spec.parameters
    problems = [p["problem"]] if p.get("problem") else list(ex.PROBLEMS)
    table = ex.exponent_table(p["k"], p.get("s"), problems, B=p.get("B"), C=p.get("C"))
    rows, payload = [], []
    for t in table:
        r = t.record
        row = [r.problem, r.k, "" if r.s is None else r.s, r.source, r.exact_str, r.decimal_str,
               "true" if t.winner else "false"]
        rows.append(row)
        payload.append(dict(zip(EXPONENT_COLUMNS, row)) | {"note": r.note})
    return Outcome({"rows": payload}, EXPONENT_COLUMNS, rows)


def _cmd_minimize(spec: ExperimentSpec, workers: int, budget: int | None) -> Outcome:
    p = spec.parameters
    k, N = int(p["k"]), int(p["n"])
    kw = {"budget": budget} if budget else {}
    if p["kind"] == "poly":
        P = _precision(spec, k, N)
        c = _coeffs(p["coeffs"], k, P)
        r = min_poly(c, N, workers=workers, **kw)
        consts = _constants_used(p["coeffs"])
    elif p["kind"] == "form":
        betas_text = p["betas"].split(",") if isinstance(p["betas"], str) else list(p["betas"])
        s = int(p.get("s") or len(betas_text))
        if len(betas_text) == 1 and s > 1:
            betas_text = betas_text * s
        if len(betas_text) != s:
            raise DomainError(f"expected {s} betas, got {len(betas_text)}")
        P = _precision(spec, k, N)
        betas = [parse_angle(b, P) for b in betas_text]
        r = min_additive_form(betas, k, N, **kw)
        consts = _constants_used(betas_text)
    else:
        raise DomainError(f"unknown minimize kind {p['kind']!r}")
    out = r.to_json() | {"precision_bits": P, "constants": consts}
    arg = " ".join(map(str, r.argmin)) if isinstance(r.argmin, tuple) else r.argmin
    return Outcome(out, ["argmin", "value", "value_float", "N"],
                   [[arg, str(r.value), repr(float(r.value)), N]])


def _cmd_pipeline(spec: ExperimentSpec, workers: int, budget: int | None) -> Outcome:
    p = spec.parameters
    k, N = int(p["k"]), int(p["n"])
    P = _precision(spec, k, N)
    if p["kind"] == "qm":
        c = _coeffs(p["coeffs"], k, P)
        tr = construct_qm(c, N, eps=p.get("eps") or "0.05", strict=bool(p.get("strict")),
                          workers=workers)
        out = tr.to_json()
    elif p["kind"] == "twostep":
        ak = parse_angle(p["alpha_k"], P)
        a1 = parse_angle(p["alpha_1"], P)
        tr = two_step_minimize(ak, a1, k, N, nu=p.get("nu"))
        out = tr.to_json()
    else:
        raise DomainError(f"unknown pipeline {p['kind']!r}")
    out["precision_bits"] = P
    cols = sorted(k_ for k_, v in out.items() if not isinstance(v, (dict, list)))
    return Outcome(out, cols, [[out[c_] for c_ in cols]])


def _cmd_recover(spec: ExperimentSpec, workers: int, budget: int | None) -> Outcome:
    p = spec.parameters
    k, N = int(p["k"]), int(p["n"])
    P = _precision(spec, k, N)
    c = _coeffs(p["coeffs"], k, P)
    eps = p.get("eps") or "0.05"
    g_lower, _ = weyl_sum(c, N, workers=workers).modulus_bounds()
    A = p["A"] if p.get("A") is not None else g_lower
    kw = {"budget": budget} if budget else {}
    r = recover(c, N, A, eps, g_lower=g_lower, **kw)
    if isinstance(r, NotFound):
        out = r.to_json()
        row = [False, "", "", out["regime"], out["scan_bound"]]
    else:
        out = r.to_json() | {"found": True}
        out["checks"] = verify_approx(r.q, r.a, c, N, r.A, r.eps)
        row = [True, r.q, " ".join(map(str, r.a)), r.regime, r.scan_bound]
    out["precision_bits"] = P
    return Outcome(out, ["found", "q", "a", "regime", "scan_bound"], [row])


GENERATORS = ("uniform", "binomial", "monomial", "dyadic", "pi", "e", "phi", "sqrt2")


def draw_coefficients(generator: str, k: int, P: int, rng: random.Random,
                      dyadic_bits: int = 3) -> CoefficientVector:
    zero = Angle(0, P)
    if generator == "uniform":
        return CoefficientVector(tuple(Angle(rng.getrandbits(P), P) for _ in range(k)))
    if generator in ("binomial", "monomial"):
        coeffs = [zero] * k
        coeffs[-1] = Angle(rng.getrandbits(P), P)
        if generator == "binomial" and k > 1:
            coeffs[0] = Angle(rng.getrandbits(P), P)
        return CoefficientVector(tuple(coeffs))
    if generator == "dyadic":
        return CoefficientVector(tuple(
            Angle(rng.getrandbits(dyadic_bits) << (P - dyadic_bits), P) for _ in range(k)))
    if generator in CONSTANT_ALGORITHMS:
        coeffs = [zero] * k
        coeffs[-1] = parse_angle(generator, P)
        return CoefficientVector(tuple(coeffs))
    raise DomainError(f"unknown generator {generator!r}; choose from {GENERATORS}")


def scan_experiment(generator: str, k: int, N_list, trials: int, seed: int,
                    precision_bits: int | None = None, workers: int = 1) -> dict:
    """Empirical decay of min_n ||f(n)|| across N, one fit per trial.

    Proved exponents are attached as reference slopes; nothing is asserted.
    """
    if trials < 1:
        raise DomainError("trials must be >= 1")
    Ns = sorted(set(int(n) for n in N_list))
    P = precision_bits or default_precision(k, max(Ns))
    rng = random.Random(seed)
    out_trials = []
    for t in range(trials):
        c = draw_coefficients(generator, k, P, rng)
        mins = [(N, min_poly(c, N, workers=workers).value) for N in Ns]
        rec = {"trial": t, "minima": [[N, str(v), float(v)] for N, v in mins]}
        try:
            fit = exponent_fit(mins)
            rec.update(fit.to_json())
        except DomainError as exc:
            rec.update({"slope": None, "intercept": None, "residuals": [], "used": [],
                        "excluded": [[N, "zero minimum (rational coefficient detected)"]
                                     for N, v in mins if v == 0],
                        "note": str(exc)})
        out_trials.append(rec)
    refs = {}
    if k >= 8:
        refs["mu_k"] = -float(ex.mu(k))
    if k >= 6:
        refs["rho_k"] = -float(ex.rho_a(k))
    return {"generator": generator, "k": k, "N_list": Ns, "precision_bits": P,
            "trials": out_trials, "reference_slopes": refs}


def _cmd_scan(spec: ExperimentSpec, workers: int, budget: int | None) -> Outcome:
    p = spec.parameters
    Ns = _int_range(p["n_list"])
    res = scan_experiment(p["generator"], int(p["k"]), Ns, int(p.get("trials", 1)), spec.seed,
                          spec.precision_bits, workers=workers)
    rows = []
    for t in res["trials"]:
        rows.append([t["trial"], res["generator"], res["k"],
                     "" if t["slope"] is None else repr(t["slope"]),
                     "" if t["intercept"] is None else repr(t["intercept"]),
                     " ".join(map(str, t["used"])), len(t["excluded"])])
    return Outcome(res, SCAN_COLUMNS, rows)


_DISPATCH = {
    "weyl": _cmd_weyl,
    "meanvalue": _cmd_meanvalue,
    "exponents": _cmd_exponents,
    "minimize": _cmd_minimize,
    "pipeline": _cmd_pipeline,
    "recover": _cmd_recover,
    "scan": _cmd_scan,
}


# -- rendering ----------------------------------------------------------------------


def _jsonable(x):
    if isinstance(x, Fraction):
        return fraction_str(x)
    raise TypeError(f"not JSON serialisable: {type(x).__name__}")


def render(spec: ExperimentSpec, outcome: Outcome) -> str:
    if spec.output == "json":
        doc = {"spec": spec.to_json(), "result": outcome.payload}
        return json.dumps(doc, indent=2, default=_jsonable) + "\n"
    spec_line = "# spec: " + json.dumps(spec.to_json(), sort_keys=True, default=_jsonable)
    if spec.output == "csv":
        buf = io.StringIO()
        buf.write(spec_line + "\r\n")
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(outcome.columns)
        w.writerows(outcome.rows)
        return buf.getvalue()
    widths = [max(len(str(c)), *(len(str(r[i])) for r in outcome.rows)) if outcome.rows
              else len(str(c)) for i, c in enumerate(outcome.columns)]
    lines = [spec_line, "  ".join(str(c).ljust(w) for c, w in zip(outcome.columns, widths))]
    for r in outcome.rows:
        lines.append("  ".join(str(v).ljust(w) for v, w in zip(r, widths)))
    return "\n".join(lines) + "\n"


def write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def execute(spec: ExperimentSpec, workers: int = 1, budget: int | None = None) -> str:
    """Run a spec and return the rendered text; exceptions propagate."""
    outcome = _DISPATCH[spec.command](spec, workers, budget)
    return render(spec, outcome)


def run(spec: ExperimentSpec, out: str | None = None, workers: int = 1,
        budget: int | None = None, stream=None) -> int:
    """Execute and emit; returns the process exit code."""
    stream = stream or sys.stdout
    try:
        text = execute(spec, workers=workers, budget=budget)
    except Refusal as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_REFUSAL
    except (DomainError, KeyError) as exc:
        print(f"invalid experiment: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception:
        log.exception("internal error")
        return EXIT_ERROR
    if out:
        write_atomic(out, text)
    else:
        stream.write(text)
    return EXIT_OK


def load_schema(name: str) -> dict:
    """Load a shipped JSON schema, e.g. ``load_schema("weyl")``."""
    from importlib import resources

    fname = name if name.endswith(".json") else f"{name}.schema.json"
    return json.loads(resources.files("smallfrac").joinpath("schemas", fname).read_text())
