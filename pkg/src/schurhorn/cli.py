"""Command-line interface.

Verbs:
  construct  -d d.json -l lam.json -o cert.json     diagonal-target construction
  correct    -A mat.json -l lam.json -o cert.json   full pipeline correction
  decompose  -A mat.json [-o out.json]              window-ordered block structure
  violate    -l lam.json -d d.json -i K --eps E     majorization-breaking perturbation
  sweep      -c config.json -o out.csv              epsilon sweep, CSV output
  validate   -A mat.json -l lam.json --cert c.json  recheck a certificate

Matrices use the packed-upper-triangle JSON format; vectors are plain JSON
arrays. Indices (violate -i, reported violation indices) are 0-based. Exit
codes: 0 success, 2 infeasible construction, 1 anything else.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import harness, sh_correct, strong_sh
from .diag_correct import correct_diagonal
from .errors import FeasibilityError, SchurHornError
from .linalg import KIND_HERM, DenseHermitian
from .transforms import CorrectionCertificate


def _load_json(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _load_vector(path: str) -> np.ndarray:
    data = _load_json(path)
    if isinstance(data, dict):
        data = data["values"]
    return np.asarray(data, dtype=np.float64)


def _dump(payload, path: str | None) -> None:
    text = json.dumps(payload, indent=2)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _cmd_construct(args) -> int:
    d = _load_vector(args.d)
    lam = _load_vector(args.l)
    cert = correct_diagonal(d, lam)
    _dump(cert.to_json(), args.o)
    return 0


def _cmd_correct(args) -> int:
    a = DenseHermitian.from_json(_load_json(args.A))
    lam = _load_vector(args.l)
    if a.kind == KIND_HERM:
        cert = sh_correct.schur_horn_correct_hermitian(a, lam)
    else:
        cert = sh_correct.schur_horn_correct(a, lam)
    _dump(cert.to_json(), args.o)
    return 0


def _cmd_decompose(args) -> int:
    a = DenseHermitian.from_json(_load_json(args.A))
    part = strong_sh.block_decompose(a)
    payload = {
        "permutation": [int(p) for p in part.permutation],
        "blocks": [
            {
                "start": b.start,
                "stop": b.stop,
                "tag": b.tag,
                "window": [b.window.lo, b.window.hi],
            }
            for b in part.blocks
        ],
    }
    _dump(payload, args.o)
    return 0


def _cmd_violate(args) -> int:
    lam = _load_vector(args.l)
    d = _load_vector(args.d)
    out = strong_sh.gen_violation_perturbation(lam, d, args.i, args.eps)
    _dump([float(x) for x in out], args.o)
    return 0


def _cmd_sweep(args) -> int:
    cfg = harness.SweepConfig.from_json(_load_json(args.c))
    result = harness.epsilon_sweep(cfg)
    csv_text = harness.sweep_to_csv(result)
    with open(args.o, "w", encoding="utf-8") as fh:
        fh.write(csv_text)
    lo, hi = result.slope_band
    print(f"fitted_slope={result.fitted_slope:.6f} band=[{lo:.6f}, {hi:.6f}]")
    return 0


def _cmd_validate(args) -> int:
    a = DenseHermitian.from_json(_load_json(args.A))
    lam = _load_vector(args.l)
    cert = CorrectionCertificate.from_json(_load_json(args.cert))
    report = harness.validate_certificate(a, lam, cert)
    _dump(
        {
            "diag_ok": report.diag_ok,
            "spectrum_ok": report.spectrum_ok,
            "chain_ok": report.chain_ok,
            "orthogonality_ok": report.orthogonality_ok,
        },
        args.o,
    )
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="schurhorn", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("construct", help="matrix with prescribed diagonal and spectrum")
    p.add_argument("-d", required=True, help="target diagonal, JSON vector")
    p.add_argument("-l", required=True, help="spectrum, JSON vector")
    p.add_argument("-o", default=None, help="output certificate JSON")
    p.set_defaults(fn=_cmd_construct)

    p = sub.add_parser("correct", help="diagonal-preserving spectrum correction")
    p.add_argument("-A", required=True, help="input matrix JSON")
    p.add_argument("-l", required=True, help="perturbed spectrum, JSON vector")
    p.add_argument("-o", default=None, help="output certificate JSON")
    p.set_defaults(fn=_cmd_correct)

    p = sub.add_parser("decompose", help="window-ordered block structure")
    p.add_argument("-A", required=True)
    p.add_argument("-o", default=None)
    p.set_defaults(fn=_cmd_decompose)

    p = sub.add_parser("violate", help="perturbation breaking one majorization inequality")
    p.add_argument("-l", required=True)
    p.add_argument("-d", required=True)
    p.add_argument("-i", type=int, required=True, help="0-based partial-sum index")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("-o", default=None)
    p.set_defaults(fn=_cmd_violate)

    p = sub.add_parser("sweep", help="epsilon sweep to CSV")
    p.add_argument("-c", required=True, help="sweep config JSON")
    p.add_argument("-o", required=True, help="output CSV path")
    p.set_defaults(fn=_cmd_sweep)

    p = sub.add_parser("validate", help="recheck a certificate from scratch")
    p.add_argument("-A", required=True)
    p.add_argument("-l", required=True)
    p.add_argument("--cert", required=True)
    p.add_argument("-o", default=None)
    p.set_defaults(fn=_cmd_validate)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except FeasibilityError as err:
        print(f"infeasible: {err}", file=sys.stderr)
        return 2
    except (SchurHornError, OSError, ValueError, KeyError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())
