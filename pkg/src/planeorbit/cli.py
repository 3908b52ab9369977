"""Command-line front end.

Reads a JSON problem document (file or stdin) and writes a JSON report::

    {"field": "Q" | {"mode": "cyclotomic", "n": 12} | {"mode": "custom", "minpoly": [...]},
     "generators": ["(x, y+1)", ["2*x", "3*y"]],
     "point": ["0", "0"],
     "config": {"orbit_cap": 10000}}

Exit codes: 0 success, 1 input error, 2 inconclusive.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import fields, replace

from .amalgam import Verdict, conjugate_into_factor, factorize
from .closure import ClosureConfig, orbit_closure
from .errors import (
    EigenvalueOutsideField,
    FieldMismatch,
    Inconclusive,
    NotAnAutomorphism,
    ParseError,
    PlaneOrbitError,
)
from .lattice import classify
from .numfield import NumberField
from .planeauto import PlanePoint, parse_map
from .poly2 import parse_element

EXIT_OK, EXIT_INPUT, EXIT_INCONCLUSIVE = 0, 1, 2
ENV_PREFIX = "PLANEORBIT_"
INPUT_ERRORS = (ParseError, FieldMismatch, NotAnAutomorphism, EigenvalueOutsideField, ValueError, KeyError, TypeError)


class InputError(Exception):
    pass


def _element(value, K):
    if isinstance(value, list):
        return K.from_json(value)
    return parse_element(str(value), K)


def load_document(doc: dict):
    """(field, generators, point or None, config overrides) from a parsed JSON document."""
    if not isinstance(doc, dict):
        raise InputError("problem document must be a JSON object")
    K = NumberField.from_descriptor(doc.get("field", "Q"))
    gens = doc.get("generators")
    if not gens or not isinstance(gens, list):
        raise InputError("'generators' must be a nonempty list")
    maps = [parse_map(g, K) for g in gens]
    point = doc.get("point")
    p = None
    if point is not None:
        if not isinstance(point, list) or len(point) != 2:
            raise InputError("'point' must be a pair of coordinates")
        p = PlanePoint(_element(point[0], K), _element(point[1], K))
    config = doc.get("config") or {}
    if not isinstance(config, dict):
        raise InputError("'config' must be an object")
    return K, maps, p, config


def make_config(doc_config: dict, args=None, environ=None) -> ClosureConfig:
    """Defaults < environment variables < document config < command-line flags."""
    environ = os.environ if environ is None else environ
    names = [f.name for f in fields(ClosureConfig)]
    values = {}
    for name in names:
        env = environ.get(ENV_PREFIX + name.upper())
        if env is not None:
            values[name] = int(env)
    unknown = set(doc_config) - set(names)
    if unknown:
        raise InputError(f"unknown config keys: {sorted(unknown)}")
    values.update({k: int(v) for k, v in doc_config.items()})
    if args is not None:
        for name in names:
            flag = getattr(args, name, None)
            if flag is not None:
                values[name] = flag
    return replace(ClosureConfig(), **values)


# --- subcommands ---------------------------------------------------------------------------

def run_factorize(K, maps, p, cfg, trace):
    return {"generators": [{"map": g.to_json(), "normal_form": factorize(g).to_json()} for g in maps]}


def run_conjugate(K, maps, p, cfg, trace):
    return conjugate_into_factor(maps).to_json()


def run_classify(K, maps, p, cfg, trace):
    out = []
    for g in maps:
        entry = {"map": g.to_json()}
        conj = conjugate_into_factor([g])
        if conj.verdict is Verdict.NOT_CONJUGATE:
            entry["kind"] = "Unbounded"
            entry["detail"] = conj.detail
        else:
            h = conj.conjugated_generators[0]
            if not conj.conjugator.is_identity():
                entry["conjugator"] = conj.conjugator.to_json()
                entry["conjugate"] = h.to_json()
            entry.update(classify(h, cfg.multdep_bound).summary())
        out.append(entry)
    return {"descriptors": out}


def run_closure(K, maps, p, cfg, trace):
    if p is None:
        raise InputError("'point' is required for closure")
    return orbit_closure(maps, p, cfg).to_json(trace=trace)


COMMANDS = {
    "factorize": run_factorize,
    "conjugate": run_conjugate,
    "classify": run_classify,
    "closure": run_closure,
}


def run(command: str, doc: dict, args=None, environ=None, trace: bool = False) -> dict:
    K, maps, p, doc_config = load_document(doc)
    cfg = make_config(doc_config, args, environ)
    report = {"command": command, "field": K.describe()}
    report.update(COMMANDS[command](K, maps, p, cfg, trace))
    return report


def dumps(report) -> str:
    return json.dumps(report, sort_keys=True, indent=2)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="planeorbit", description="Orbit closures of plane polynomial automorphisms.")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("input", nargs="?", default="-", help="problem document (JSON); '-' for stdin")
    parser.add_argument("--orbit-cap", dest="orbit_cap", type=int)
    parser.add_argument("--word-cap", dest="word_cap", type=int)
    parser.add_argument("--multdep-bound", dest="multdep_bound", type=int)
    parser.add_argument("--height-cap", dest="height_cap", type=int)
    parser.add_argument("--trace", action="store_true", help="include the full certificate")
    return parser


def _fail(code, kind, err, out):
    report = {"error": {"type": kind, "message": str(err)}}
    step = getattr(err, "step", None)
    if step:
        report["error"]["step"] = step
    if isinstance(err, EigenvalueOutsideField) and err.charpoly:
        report["error"]["charpoly"] = err.charpoly
    print(dumps(report), file=out)
    print(f"planeorbit: {err}", file=sys.stderr)
    return code


def main(argv=None, stdin=None, stdout=None) -> int:
    args = build_parser().parse_args(argv)
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    try:
        if args.input == "-":
            text = stdin.read()
        else:
            with open(args.input) as fh:
                text = fh.read()
        doc = json.loads(text)
        report = run(args.command, doc, args, trace=args.trace)
    except Inconclusive as e:
        return _fail(EXIT_INCONCLUSIVE, type(e).__name__, e, stdout)
    except (InputError, OSError, json.JSONDecodeError, *INPUT_ERRORS) as e:
        return _fail(EXIT_INPUT, type(e).__name__, e, stdout)
    except PlaneOrbitError as e:
        return _fail(EXIT_INPUT, type(e).__name__, e, stdout)
    print(dumps(report), file=stdout)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
