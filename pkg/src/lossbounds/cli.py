"""Command-line front end.

Each subcommand reads an optional JSON config (``--config``), applies the
command-line flags on top of it, validates the merged settings and prints a
JSON report to stdout.  Logs go to stderr.

Exit status: 0 on success, 2 for invalid input, 3 when a model assumption
fails, 4 on numerical non-convergence.  Warnings never change the status.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path
from typing import Any

import jsonschema
import numpy as np

from . import __version__
from .bounds import (
    epsilon_admissible,
    remark1_adjusted_ell,
    rolski_bounds,
    theorem1_bound,
)
from .dist import (
    Deterministic,
    Distribution,
    Empirical,
    Erlang,
    Exponential,
    HyperExponential,
    Mixture,
    MomentClass,
    TwoPointGMax,
    empirical_from_samples,
    kolmogorov_distance,
)
from .errors import InvalidInputError, LossBoundsError
from .models import (
    ContinuityConfig,
    GIM1nConfig,
    MGI1BufferConfig,
    PriorityConfig,
    gim1n_derivative_sandwich,
    gim1n_envelope,
    gim1n_loss_asymptotic,
    mgi1_buffer_envelope,
    mgi1_buffer_loss,
    mm1n_continuity_envelope,
    mm1n_exact_loss,
    priority_envelope,
    priority_loss,
    priority_root,
)
from .roots import boundary_m, takacs_root
from .sim import (
    RngSpec,
    ks_confidence_epsilon,
    replicate,
    simulate_gim1n,
    simulate_mgi1_buffer,
    simulate_priority,
)

log = logging.getLogger("lossbounds")

SUBCOMMANDS = ("root", "bounds", "gim1n", "buffer", "priority", "continuity", "simulate", "kdist")

_DIST = {"type": ["string", "object"]}
_POS = {"type": "number", "exclusiveMinimum": 0}
_PROB = {"type": "number", "minimum": 0, "maximum": 1}
_POSINT = {"type": "integer", "minimum": 1}
_CHOICE = lambda *v: {"enum": list(v)}

SCHEMA = {
    "type": "object",
    "properties": {
        "subcommand": _CHOICE(*SUBCOMMANDS),
        "dist": _DIST,
        "reference": _DIST,
        "samples": {"type": "string"},
        "service": _DIST,
        "mu": _POS,
        "lam": _POS,
        "C": _POSINT,
        "pk": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
        "g1": _POS,
        "g2": _POS,
        "g1_upper": _POS,
        "g2_lower": _POS,
        "epsilon": _PROB,
        "root_star": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
        "n": _POSINT,
        "N": _POS,
        "c": {"type": "number", "minimum": 1},
        "nu_lower": _POSINT,
        "nu_upper": _POSINT,
        "p": _PROB,
        "probs": {"type": "array", "items": _POS, "minItems": 1},
        "capacities": {"type": "array", "items": _POSINT, "minItems": 1},
        "k": _POSINT,
        "sigma2": _POS,
        "condition": _CHOICE("A", "B"),
        "model": _CHOICE("gim1n", "buffer", "priority"),
        "count": {"type": "integer", "minimum": 10_000},
        "seed": {"type": "integer", "minimum": 0, "maximum": 2**64 - 1},
        "stream": {"type": "string"},
        "replications": _POSINT,
        "workers": _POSINT,
        "coverage": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
        "eq36_sign": _CHOICE("consistent", "printed"),
        "mg_derivative_form": _CHOICE("derivative", "printed"),
        "prop2_denominator": _CHOICE("consistent", "printed"),
        "continuity_shift": _CHOICE("printed", "direct"),
        "gim1n_lower_factor": _CHOICE("moment", "printed"),
        "buffer_errors": _CHOICE("served", "rejected"),
        "output": {"type": "string"},
    },
    "required": ["subcommand"],
    "additionalProperties": False,
}

REQUIRED = {
    "root": ["dist", "mu"],
    "bounds": ["mu"],
    "gim1n": ["mu", "n"],
    "buffer": ["service", "lam", "N", "c", "nu_lower", "nu_upper", "p"],
    "priority": ["dist", "probs", "C", "mu", "capacities"],
    "continuity": ["lam", "mu", "n", "p", "epsilon", "sigma2"],
    "simulate": ["model", "count"],
    "kdist": ["samples", "reference"],
}

DEFAULTS = {
    "C": 1,
    "pk": 1.0,
    "k": 1,
    "condition": "A",
    "seed": 0,
    "stream": "main",
    "replications": 1,
    "workers": 1,
    "coverage": 0.95,
    "eq36_sign": "consistent",
    "mg_derivative_form": "derivative",
    "prop2_denominator": "consistent",
    "continuity_shift": "printed",
    "gim1n_lower_factor": "moment",
    "buffer_errors": "served",
}


def ingest_samples(path: str | Path) -> np.ndarray:
    """Read newline-delimited positive decimals; blank lines are skipped."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InvalidInputError(f"cannot read samples from {path}: {exc}") from exc
    values = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            v = float(line.replace("−", "-"))
        except ValueError:
            raise InvalidInputError(f"{path}:{lineno}: cannot parse {line!r} as a number") from None
        if not math.isfinite(v) or v <= 0:
            raise InvalidInputError(f"{path}:{lineno}: sample {line!r} is not a positive number")
        values.append(v)
    if not values:
        raise InvalidInputError(f"{path}: no samples found")
    return np.sort(np.asarray(values))


def _numbers(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise InvalidInputError(f"cannot parse parameters {text!r}") from None


def parse_distribution(spec: Any) -> Distribution:
    """Build a distribution from ``kind:params`` shorthand or a JSON object.

    Shorthand: ``exponential:RATE``, ``deterministic:VALUE``,
    ``erlang:SHAPE,RATE``, ``gmax:G1,G2``, ``hyperexp:W1/R1,W2/R2,...``,
    ``empirical:@PATH``.  A string starting with ``{`` is read as JSON.
    """
    if isinstance(spec, str):
        text = spec.strip()
        if text.startswith("{"):
            try:
                return parse_distribution(json.loads(text))
            except json.JSONDecodeError as exc:
                raise InvalidInputError(f"bad distribution JSON: {exc}") from None
        kind, _, params = text.partition(":")
        kind = kind.lower()
        if kind in ("exponential", "exp"):
            (rate,) = _arity(_numbers(params), 1, spec)
            return Exponential(rate)
        if kind in ("deterministic", "det"):
            (value,) = _arity(_numbers(params), 1, spec)
            return Deterministic(value)
        if kind == "erlang":
            shape, rate = _arity(_numbers(params), 2, spec)
            return Erlang(int(shape) if shape == int(shape) else shape, rate)
        if kind == "gmax":
            g1, g2 = _arity(_numbers(params), 2, spec)
            return TwoPointGMax(g1, g2)
        if kind in ("hyperexp", "hyperexponential"):
            try:
                pairs = [tuple(float(x) for x in item.split("/")) for item in params.split(",")]
                w, r = zip(*pairs)
            except ValueError:
                raise InvalidInputError(f"hyperexp expects W/R pairs, got {spec!r}") from None
            return HyperExponential(w, r)
        if kind == "empirical":
            if not params.startswith("@"):
                raise InvalidInputError("empirical shorthand is empirical:@PATH")
            return Empirical(ingest_samples(params[1:]))
        raise InvalidInputError(f"unknown distribution kind {kind!r}")
    if isinstance(spec, dict):
        kind = str(spec.get("kind", "")).lower()
        try:
            if kind in ("exponential", "exp"):
                return Exponential(float(spec["rate"]))
            if kind in ("deterministic", "det"):
                return Deterministic(float(spec["value"]))
            if kind == "erlang":
                return Erlang(spec["shape"], float(spec["rate"]))
            if kind == "gmax":
                return TwoPointGMax(float(spec["g1"]), float(spec["g2"]))
            if kind in ("hyperexp", "hyperexponential"):
                return HyperExponential(spec["weights"], spec["rates"])
            if kind == "empirical":
                if "path" in spec:
                    return Empirical(ingest_samples(spec["path"]))
                return Empirical(np.asarray(spec["samples"], dtype=float))
            if kind == "mixture":
                return Mixture(
                    float(spec["p"]), parse_distribution(spec["left"]), parse_distribution(spec["right"])
                )
        except (KeyError, TypeError) as exc:
            raise InvalidInputError(f"incomplete {kind} distribution spec: {exc}") from None
        raise InvalidInputError(f"unknown distribution kind {kind!r}")
    raise InvalidInputError(f"cannot interpret distribution spec {spec!r}")


def _arity(values: list[float], n: int, spec) -> list[float]:
    if len(values) != n:
        raise InvalidInputError(f"{spec!r}: expected {n} parameter(s), got {len(values)}")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lossbounds", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"lossbounds {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p):
        p.add_argument("--config", help="JSON config; flags override its entries")
        p.add_argument("--output", help="also write the report to this file")
        p.add_argument("--eq36-sign", dest="eq36_sign", choices=["consistent", "printed"])
        p.add_argument("--mg-derivative-form", dest="mg_derivative_form", choices=["derivative", "printed"])
        p.add_argument("--prop2-denominator", dest="prop2_denominator", choices=["consistent", "printed"])
        p.add_argument("--continuity-shift", dest="continuity_shift", choices=["printed", "direct"])
        p.add_argument("-v", "--verbose", action="store_true")
        return p

    def dist_args(p, *names):
        for name in names:
            p.add_argument(f"--{name}", help="distribution: kind:params or JSON")

    p = common(sub.add_parser("root", help="least root of z = G(mu - mu z^C)"))
    dist_args(p, "dist")
    p.add_argument("--mu", type=float)
    p.add_argument("--C", type=int)

    p = common(sub.add_parser("bounds", help="root range over a moment class and distance bounds"))
    dist_args(p, "dist")
    for name in ("g1", "g2", "mu", "epsilon", "g1-upper", "g2-lower", "pk"):
        p.add_argument(f"--{name}", dest=name.replace("-", "_"), type=float)
    p.add_argument("--root-star", dest="root_star", type=float)
    p.add_argument("--C", type=int)

    p = common(sub.add_parser("gim1n", help="GI/M/1/n loss probability and envelope"))
    dist_args(p, "dist", "reference")
    p.add_argument("--samples", help="reference law as a sample file")
    for name in ("mu", "epsilon", "g1", "g2"):
        p.add_argument(f"--{name}", type=float)
    p.add_argument("--n", type=int)
    p.add_argument("--gim1n-lower-factor", dest="gim1n_lower_factor", choices=["moment", "printed"])

    p = common(sub.add_parser("buffer", help="M/GI/1 batch buffer loss probability"))
    dist_args(p, "service")
    for name in ("lam", "N", "c", "p", "epsilon"):
        p.add_argument(f"--{name}", type=float)
    p.add_argument("--nu-lower", dest="nu_lower", type=int)
    p.add_argument("--nu-upper", dest="nu_upper", type=int)

    p = common(sub.add_parser("priority", help="priority buffers with group departures"))
    dist_args(p, "dist")
    p.add_argument("--probs", type=_numbers)
    p.add_argument("--capacities", type=lambda s: [int(v) for v in _numbers(s)])
    p.add_argument("--C", type=int)
    p.add_argument("--mu", type=float)
    p.add_argument("--k", type=int)
    p.add_argument("--epsilon", type=float)

    p = common(sub.add_parser("continuity", help="M/M/1/n continuity envelope"))
    for name in ("lam", "mu", "p", "epsilon", "sigma2"):
        p.add_argument(f"--{name}", type=float)
    p.add_argument("--n", type=int)
    p.add_argument("--condition", choices=["A", "B"])

    p = common(sub.add_parser("simulate", help="discrete-event simulation of a loss model"))
    p.add_argument("--model", choices=["gim1n", "buffer", "priority"])
    dist_args(p, "dist", "service")
    for name in ("mu", "lam", "N", "c", "p"):
        p.add_argument(f"--{name}", type=float)
    for name in ("n", "C", "count", "seed", "replications", "workers"):
        p.add_argument(f"--{name}", type=int)
    p.add_argument("--nu-lower", dest="nu_lower", type=int)
    p.add_argument("--nu-upper", dest="nu_upper", type=int)
    p.add_argument("--probs", type=_numbers)
    p.add_argument("--capacities", type=lambda s: [int(v) for v in _numbers(s)])
    p.add_argument("--stream")
    p.add_argument("--buffer-errors", dest="buffer_errors", choices=["served", "rejected"])

    p = common(sub.add_parser("kdist", help="Kolmogorov distance of a sample to a reference law"))
    p.add_argument("--samples")
    dist_args(p, "reference")
    p.add_argument("--coverage", type=float)
    return parser


def load_config(args: argparse.Namespace) -> dict:
    """Merge the JSON config with command-line flags (flags win) and validate."""
    cfg: dict[str, Any] = {}
    if args.config:
        try:
            cfg = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except OSError as exc:
            raise InvalidInputError(f"cannot read config {args.config}: {exc}") from None
        except json.JSONDecodeError as exc:
            raise InvalidInputError(f"malformed JSON config {args.config}: {exc}") from None
        if not isinstance(cfg, dict):
            raise InvalidInputError("config must be a JSON object")
        if cfg.get("subcommand", args.subcommand) != args.subcommand:
            raise InvalidInputError(
                f"config is for {cfg['subcommand']!r}, invoked as {args.subcommand!r}"
            )
    for key, value in vars(args).items():
        if key in ("config", "verbose") or value is None:
            continue
        cfg[key] = value
    cfg["subcommand"] = args.subcommand
    try:
        jsonschema.validate(cfg, SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "config"
        raise InvalidInputError(f"{where}: {exc.message}") from None
    need = REQUIRED[args.subcommand]
    if args.subcommand == "simulate":
        need = need + {
            "gim1n": ["dist", "mu", "n"],
            "buffer": ["service", "lam", "N", "c", "nu_lower", "nu_upper", "p"],
            "priority": ["dist", "probs", "C", "mu", "capacities"],
        }[cfg["model"]]
    missing = [k for k in need if k not in cfg]
    if missing:
        raise InvalidInputError(f"missing required setting(s): {', '.join(missing)}")
    return {**DEFAULTS, **cfg}


def _convention_notes(cfg: dict) -> list[str]:
    notes = []
    for key in ("eq36_sign", "mg_derivative_form", "prop2_denominator", "continuity_shift",
                "gim1n_lower_factor", "buffer_errors"):
        if cfg[key] != DEFAULTS[key]:
            notes.append(f"non-default convention {key}={cfg[key]}")
    return notes


def _moments(cfg: dict, fallback: Distribution | None) -> MomentClass:
    if "g1" in cfg and "g2" in cfg:
        return MomentClass(cfg["g1"], cfg["g2"])
    if fallback is None:
        raise InvalidInputError("need g1 and g2, or a distribution to take them from")
    return fallback.moment_class()


def _run_root(cfg, warnings):
    d = parse_distribution(cfg["dist"])
    rep = takacs_root(d, cfg["mu"], cfg["C"])
    warnings.extend(rep.warnings)
    return {"root": rep.root, "root_report": rep.to_dict(),
            "moments": {"g1": d.mean(), "g2": d.second_moment()}}


def _run_bounds(cfg, warnings):
    d = parse_distribution(cfg["dist"]) if "dist" in cfg else None
    g = _moments(cfg, d)
    mu, C, pk = cfg["mu"], cfg["C"], cfg["pk"]
    rb = rolski_bounds(g, mu, C=C, p_k=pk, convention=cfg["eq36_sign"])
    out: dict[str, Any] = {"rolski": rb.to_dict()}
    if C == 1 and pk == 1.0:
        if not g.trivial:
            out["boundary_m"] = boundary_m(g, mu).to_dict()
        if "epsilon" in cfg:
            out["theorem1"] = theorem1_bound(g, mu, cfg["epsilon"]).to_dict()
    if "root_star" in cfg:
        adm = epsilon_admissible(g, mu, cfg["root_star"], C=C, p_k=pk, convention=cfg["eq36_sign"])
        if adm.diagnostic:
            warnings.append(adm.diagnostic)
        out["admissibility"] = adm.to_dict()
    if "g1_upper" in cfg:
        rep = remark1_adjusted_ell(cfg["g1_upper"], mu, cfg.get("g2_lower"))
        out["adjusted_ell"] = rep.to_dict()
    if d is not None:
        rep = takacs_root(d, mu, C)
        out["root"] = rep.to_dict()
        warnings.extend(rep.warnings)
    return out


def _run_gim1n(cfg, warnings):
    out: dict[str, Any] = {}
    mu, n = cfg["mu"], cfg["n"]
    arrival = parse_distribution(cfg["dist"]) if "dist" in cfg else None
    if arrival is not None:
        gc = GIM1nConfig(arrival, mu, n)
        rep = takacs_root(arrival, mu)
        warnings.extend(rep.warnings)
        sw = gim1n_derivative_sandwich(gc, rep.root)
        if not sw.holds:
            warnings.append(
                f"printed derivative sandwich fails: {sw.lower:.6g} <= {sw.value:.6g} <= 1 is false"
            )
        out.update(
            root_report=rep.to_dict(),
            loss=gim1n_loss_asymptotic(gc, rep.root),
            rho=gc.rho,
            derivative_sandwich={"value": sw.value, "lower": sw.lower, "upper": sw.upper, "holds": sw.holds},
        )
    if "epsilon" in cfg:
        if "samples" in cfg:
            ref, _ = empirical_from_samples(ingest_samples(cfg["samples"]))
        elif "reference" in cfg:
            ref = parse_distribution(cfg["reference"])
        elif arrival is not None:
            ref = arrival
        else:
            raise InvalidInputError("an envelope needs --reference, --samples or --dist")
        g = _moments(cfg, ref)
        star = takacs_root(ref, mu)
        env = gim1n_envelope(g, mu, n, star.root, cfg["epsilon"], lower_factor=cfg["gim1n_lower_factor"])
        warnings.extend(env.warnings)
        out["reference_root"] = star.to_dict()
        out["envelope"] = env.to_dict()
    if not out:
        raise InvalidInputError("gim1n needs --dist and/or --epsilon with a reference")
    return out


def _buffer_config(cfg) -> MGI1BufferConfig:
    return MGI1BufferConfig(
        lam=cfg["lam"], service=parse_distribution(cfg["service"]), N=cfg["N"], c=cfg["c"],
        nu_lower=cfg["nu_lower"], nu_upper=cfg["nu_upper"], p=cfg["p"],
    )


def _run_buffer(cfg, warnings):
    bc = _buffer_config(cfg)
    rep = takacs_root(bc.service, bc.lam)
    warnings.extend(rep.warnings)
    out: dict[str, Any] = {
        "root_report": rep.to_dict(),
        "rho": bc.rho,
        "loss": mgi1_buffer_loss(bc, form=cfg["mg_derivative_form"], beta=rep.root),
    }
    if "epsilon" in cfg:
        env = mgi1_buffer_envelope(bc.service.moment_class(), bc.lam, bc.p, bc.N, bc.c, rep.root, cfg["epsilon"])
        warnings.extend(env.warnings)
        out["envelope"] = env.to_dict()
    return out


def _priority_config(cfg) -> PriorityConfig:
    return PriorityConfig(
        interarrival=parse_distribution(cfg["dist"]), type_probs=tuple(cfg["probs"]),
        C=cfg["C"], mu=cfg["mu"], capacities=tuple(cfg["capacities"]),
    )


def _run_priority(cfg, warnings):
    pc = _priority_config(cfg)
    k = cfg["k"]
    star = priority_root(pc, k)
    out: dict[str, Any] = {"k": k, "alpha_k": star, "rho_k": pc.rho(k), "loss": priority_loss(pc, k)}
    if "epsilon" in cfg:
        env = priority_envelope(
            pc, k, star, cfg["epsilon"],
            denominator=cfg["prop2_denominator"], convention=cfg["eq36_sign"],
        )
        warnings.extend(env.warnings)
        out["envelope"] = env.to_dict()
    return out


def _run_continuity(cfg, warnings):
    cc = ContinuityConfig(
        lam=cfg["lam"], mu=cfg["mu"], n=cfg["n"], p=cfg["p"], epsilon=cfg["epsilon"],
        sigma2=cfg["sigma2"], condition=cfg["condition"],
    )
    env = mm1n_continuity_envelope(cc, shift=cfg["continuity_shift"])
    warnings.extend(env.warnings)
    return {"envelope": env.to_dict(), "exact_mm1n": mm1n_exact_loss(cc.rho, cc.n)}


def _run_simulate(cfg, warnings):
    rng = RngSpec(cfg["seed"], cfg["stream"])
    model = cfg["model"]
    count, reps, workers = cfg["count"], cfg["replications"], cfg["workers"]
    if model == "gim1n":
        mc = GIM1nConfig(parse_distribution(cfg["dist"]), cfg["mu"], cfg["n"])
        est = replicate(simulate_gim1n, mc, count, rng, reps, workers) if reps > 1 else simulate_gim1n(mc, count, rng)
        return {"model": model, **est.to_dict()}
    if model == "buffer":
        bc = _buffer_config(cfg)
        fn = lambda c, k, r: simulate_mgi1_buffer(c, k, r, errors=cfg["buffer_errors"])
        est = replicate(fn, bc, count, rng, reps, workers) if reps > 1 else fn(bc, count, rng)
        return {"model": model, **est.to_dict()}
    pc = _priority_config(cfg)
    if reps > 1:
        warnings.append("priority simulation ignores replications > 1")
    ests = simulate_priority(pc, count, rng)
    return {"model": model, "per_type": [e.to_dict() for e in ests]}


def _run_kdist(cfg, warnings):
    samples = ingest_samples(cfg["samples"])
    emp, g = empirical_from_samples(samples)
    ref = parse_distribution(cfg["reference"])
    distance = kolmogorov_distance(emp, ref)
    eps = ks_confidence_epsilon(len(samples), cfg["coverage"])
    return {
        "distance": distance,
        "n": int(len(samples)),
        "sample_moments": {"g1": g.g1, "g2": g.g2},
        "ks_epsilon": eps,
        "coverage": cfg["coverage"],
        "within_band": distance < eps,
    }


RUNNERS = {
    "root": _run_root,
    "bounds": _run_bounds,
    "gim1n": _run_gim1n,
    "buffer": _run_buffer,
    "priority": _run_priority,
    "continuity": _run_continuity,
    "simulate": _run_simulate,
    "kdist": _run_kdist,
}


def run(cfg: dict) -> dict:
    """Execute a validated config and return the report."""
    warnings = _convention_notes(cfg)
    results = RUNNERS[cfg["subcommand"]](cfg, warnings)
    inputs = {k: v for k, v in cfg.items() if k != "output"}
    return {
        "tool": "lossbounds",
        "version": __version__,
        "subcommand": cfg["subcommand"],
        "inputs": inputs,
        "results": results,
        "warnings": warnings,
    }


def render(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, default=_jsonable) + "\n"


def _jsonable(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if getattr(args, "verbose", False) else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        cfg = load_config(args)
        report = run(cfg)
        text = render(report)
    except LossBoundsError as exc:
        log.error("%s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    for w in report["warnings"]:
        log.warning("%s", w)
    sys.stdout.write(text)
    if cfg.get("output"):
        Path(cfg["output"]).write_text(text, encoding="utf-8")
    return 0


if __name__ == "__main__":
    sys.exit(main())
