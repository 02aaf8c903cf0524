"""Command-line front end.

Subcommands: pressure, dimaff, gibbs, distinct, qm, irred, separation,
attractor, thm2.  Reports are JSON documents with a stable schema (CSV
for tabular data via --out csv); every report embeds the config hash,
seed, level, tolerance and library version, and identical invocations
are bit-identical in all numeric fields.

Exit codes: 0 success, 1 validation error, 2 enumeration budget
exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

import numpy as np

from . import __version__
from .config import SystemConfig, fixture_config, load_config
from .equilibrium import (
    distinctness_diagnostic,
    gibbs_level_weights,
    spectral_ratio_witness,
    total_variation,
)
from .errors import (
    AffequilError,
    ConfigError,
    EnumerationBudgetError,
)
from .ifs import construction_pipeline, attractor_sample, separation_certificate
from .irreducibility import (
    conjugacy_obstruction,
    invariant_subspace_search,
    quasi_multiplicativity_profile,
)
from .potentials import FactorPotential, PhiSPotential, factor_pair
from .pressure import affinity_dimension, level_pressure
from .words import DEFAULT_BUDGET

BUDGET_ENV_VAR = "AFFEQUIL_BUDGET"
SCHEMA_VERSION = "1"


def _load_system(args) -> SystemConfig:
    if args.config is not None:
        return load_config(args.config)
    if args.fixture is not None:
        params = {}
        for key in ("alpha1", "alpha2", "theta"):
            value = getattr(args, key, None)
            if value is not None:
                params[key] = value
        return fixture_config(args.fixture, **params)
    raise ConfigError("provide --fixture NAME or --config FILE")


def _budget(args) -> int:
    if args.budget is not None:
        return args.budget
    env = os.environ.get(BUDGET_ENV_VAR)
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise ConfigError(
                f"environment variable {BUDGET_ENV_VAR}={env!r} is not an integer"
            ) from exc
    return DEFAULT_BUDGET


def _envelope(args, config: SystemConfig, results: dict, **extras) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "command": args.command,
        "library_version": __version__,
        "config_hash": config.config_hash(),
        "system": config.name,
        "seed": getattr(args, "seed", None),
        "level": getattr(args, "n", None),
        "tolerance": getattr(args, "tol", None),
        "budget": _budget(args),
        "threads": args.threads,
    }
    doc.update(extras)
    doc["results"] = results
    return doc


def _emit(args, doc: dict, rows: list | None = None, header: list | None = None) -> None:
    """Write JSON (default) or CSV rows to --output/stdout."""
    if args.out == "csv":
        if rows is None:
            raise ConfigError(f"subcommand {args.command!r} has no CSV form")
        buf = io.StringIO()
        writer = csv.writer(buf)
        if header:
            writer.writerow(header)
        for row in rows:
            writer.writerow(row)
        text = buf.getvalue()
    else:
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dimension_dict(res) -> dict:
    return {
        "lo": res.lo,
        "hi": res.hi,
        "width": res.width,
        "level": res.level,
        "iterations": res.iterations,
        "objective_at_lo": res.objective_at_lo,
        "objective_at_hi": res.objective_at_hi,
    }


def cmd_pressure(args) -> None:
    config = _load_system(args)
    budget = _budget(args)
    if args.potential == "phis":
        pot = PhiSPotential(config.linear_tuple(), args.s)
    else:
        base, iota = config.factor_base()
        pot = FactorPotential(base, iota, args.s, which=1 if args.potential == "factor1" else 2)
    est = level_pressure(pot, args.n, budget)
    results = {
        "potential": pot.label,
        "value": est.value,
        "upper": est.upper,
        "lower": est.lower,
        "word_count": est.word_count,
    }
    _emit(
        args,
        _envelope(args, config, results, s=args.s),
        rows=[[est.level, est.value, est.upper, est.lower]],
        header=["level", "value", "upper", "lower"],
    )


def cmd_dimaff(args) -> None:
    config = _load_system(args)
    res = affinity_dimension(config.linear_tuple(), args.n, args.tol, _budget(args))
    _emit(
        args,
        _envelope(args, config, _dimension_dict(res)),
        rows=[[res.lo, res.hi, res.level, res.iterations]],
        header=["lo", "hi", "level", "iterations"],
    )


def cmd_gibbs(args) -> None:
    config = _load_system(args)
    budget = _budget(args)
    base, iota = config.factor_base()
    f1, f2 = factor_pair(base, iota, args.s)
    d1 = gibbs_level_weights(f1, args.n, budget)
    d2 = gibbs_level_weights(f2, args.n, budget)
    tv = total_variation(d1, d2)
    results = {
        "total_variation": tv,
        "factor1": d1.to_json_dict(),
        "factor2": d2.to_json_dict(),
    }
    rows = [
        ["".join(map(str, word)), repr(w1), repr(w2)]
        for (word, w1), (_, w2) in zip(d1.items(), d2.items())
    ]
    _emit(
        args,
        _envelope(args, config, results, s=args.s),
        rows=rows,
        header=["word", "weight_factor1", "weight_factor2"],
    )


def cmd_distinct(args) -> None:
    config = _load_system(args)
    base, iota = config.factor_base()
    if args.word:
        word = tuple(int(c) for c in args.word)
    else:
        word = spectral_ratio_witness(base, iota, depth=args.depth)
        if word is None:
            raise ConfigError(
                f"no eigenvalue-ratio witness found up to depth {args.depth}; "
                "pass --word explicitly"
            )
    diag = distinctness_diagnostic(base, iota, args.s, word, args.nmax)
    results = {
        "word": list(diag.word),
        "asymptote": diag.asymptote,
        "ratios": [[n, v] for n, v in diag.rows()],
    }
    _emit(
        args,
        _envelope(args, config, results, s=args.s),
        rows=[[n, repr(v)] for n, v in diag.rows()],
        header=["n", "log_ratio_rate"],
    )


def cmd_qm(args) -> None:
    config = _load_system(args)
    profile = quasi_multiplicativity_profile(
        config.linear_tuple(), args.s, args.n0, args.nmax, _budget(args)
    )
    results = {
        "s": profile.s,
        "n0": profile.n0,
        "rows": [[n, r] for n, r in profile.rows],
        "fitted_decay_slope": profile.fitted_decay_slope(),
    }
    _emit(
        args,
        _envelope(args, config, results),
        rows=[[n, repr(r)] for n, r in profile.rows],
        header=["n", "ratio"],
    )


def cmd_irred(args) -> None:
    config = _load_system(args)
    T = config.linear_tuple()
    witness = invariant_subspace_search(T, args.mode, args.depth, args.tol)
    if witness is None:
        subspace = {
            "found": False,
            "note": f"no witness found up to depth {args.depth} "
            "(not a certificate of strong irreducibility)",
        }
    elif hasattr(witness, "bases"):
        subspace = {
            "found": True,
            "kind": "finite_union",
            "components": [b.tolist() for b in witness.bases],
            "residual": witness.residual,
            "source_word": list(witness.source_word),
        }
    else:
        subspace = {
            "found": True,
            "kind": "single",
            "basis": witness.basis.tolist(),
            "dim": witness.dim,
            "residual": witness.residual,
            "source_word": list(witness.source_word),
        }
    results = {"subspace_search": subspace, "mode": args.mode}

    if config.base_matrices is not None and config.iota is not None:
        base, iota = config.factor_base()
        report = conjugacy_obstruction(base, iota, args.depth)
        results["conjugacy_obstructions"] = {
            "conjugacy_word": None
            if report.conjugacy_word is None
            else list(report.conjugacy_word),
            "inverse_transpose_word": None
            if report.inverse_transpose_word is None
            else list(report.inverse_transpose_word),
            "notes": report.notes(),
        }
        ratio_witness = spectral_ratio_witness(base, iota, depth=args.depth)
        results["spectral_ratio_witness"] = (
            None if ratio_witness is None else list(ratio_witness)
        )
        results["note"] = (
            "witness-based necessary checks only; Zariski density has no "
            "finite certificate here"
        )
    _emit(args, _envelope(args, config, results))


def cmd_separation(args) -> None:
    config = _load_system(args)
    ifs = config.affine_ifs()
    center = np.zeros(ifs.dim) if args.center is None else np.array(
        [float(x) for x in args.center.split(",")]
    )
    from .ifs import RADIUS_CRITICAL

    radius = RADIUS_CRITICAL if args.radius is None else args.radius
    cert = separation_certificate(ifs, center, radius)
    _emit(args, _envelope(args, config, cert.to_json_dict()))


def cmd_attractor(args) -> None:
    config = _load_system(args)
    ifs = config.affine_ifs()
    sample = attractor_sample(ifs, args.depth, args.count, args.seed)
    _emit(
        args,
        _envelope(args, config, sample.to_json_dict()),
        rows=[list(map(repr, p)) for p in sample.points],
        header=[f"x{i + 1}" for i in range(ifs.dim)],
    )


def cmd_thm2(args) -> None:
    config = fixture_config(
        "thm2",
        alpha1=args.alpha1 if args.alpha1 is not None else 0.44,
        alpha2=args.alpha2 if args.alpha2 is not None else 0.2,
        theta=args.theta if args.theta is not None else 1.0,
    )
    report = construction_pipeline(
        config.params["alpha1"],
        config.params["alpha2"],
        config.params["theta"],
        level=args.n,
        tol=args.tol,
        budget=_budget(args),
    )
    _emit(args, _envelope(args, config, report.to_json_dict()))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="affequil",
        description="Pressure, affinity dimension and equilibrium-state "
        "diagnostics for affine iterated function systems.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fixture=True):
        if fixture:
            p.add_argument("--fixture", choices=("thm1", "thm2", "eq1-3x3"))
            p.add_argument("--config", help="YAML system description")
            p.add_argument("--alpha1", type=float)
            p.add_argument("--alpha2", type=float)
            p.add_argument("--theta", type=float, help="radians")
        p.add_argument("--out", choices=("json", "csv"), default="json")
        p.add_argument("--output", help="write to a file instead of stdout")
        p.add_argument("--budget", type=int, help=f"word budget (or ${BUDGET_ENV_VAR})")
        p.add_argument(
            "--threads",
            type=int,
            default=0,
            help="worker cap, recorded in reports; results are independent "
            "of it (evaluation uses a canonical fixed-shape reduction)",
        )

    p = sub.add_parser("pressure", help="level pressure estimate with bounds")
    common(p)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument(
        "--potential", choices=("phis", "factor1", "factor2"), default="phis"
    )
    p.set_defaults(func=cmd_pressure)

    p = sub.add_parser("dimaff", help="affinity-dimension bisection bracket")
    common(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-3)
    p.set_defaults(func=cmd_dimaff)

    p = sub.add_parser("gibbs", help="factor level distributions and TV distance")
    common(p)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_gibbs)

    p = sub.add_parser("distinct", help="factor-ratio distinctness diagnostic")
    common(p)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--nmax", type=int, default=24)
    p.add_argument("--word", help="witness word as a digit string, e.g. 1")
    p.add_argument("--depth", type=int, default=4, help="witness search depth")
    p.set_defaults(func=cmd_distinct)

    p = sub.add_parser("qm", help="quasi-multiplicativity ratio profile")
    common(p)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--n0", type=int, default=3, help="max connecting word length")
    p.add_argument("--nmax", type=int, default=10)
    p.set_defaults(func=cmd_qm)

    p = sub.add_parser("irred", help="subspace / obstruction / witness reports")
    common(p)
    p.add_argument("--mode", choices=("single", "finite_union"), default="single")
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(func=cmd_irred)

    p = sub.add_parser("separation", help="ball separation certificate")
    common(p)
    p.add_argument("--radius", type=float, help="default: 1 + sqrt(3/2)")
    p.add_argument("--center", help="comma-separated coordinates, default origin")
    p.set_defaults(func=cmd_separation)

    p = sub.add_parser("attractor", help="sample attractor points")
    common(p)
    p.add_argument("--depth", type=int, default=30)
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_attractor)

    p = sub.add_parser("thm2", help="full four-map construction pipeline")
    common(p, fixture=False)
    p.add_argument("--alpha1", type=float)
    p.add_argument("--alpha2", type=float)
    p.add_argument("--theta", type=float)
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--tol", type=float, default=1e-3)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_thm2)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except EnumerationBudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ConfigError, AffequilError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
