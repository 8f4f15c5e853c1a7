"""Command-line front end.

    plankcover COMMAND INPUT.json [--out FILE] [--svg FILE] [--tol T] [--seed S]

Exit status: 0 report written, 2 the theorem does not apply (refusal),
1 an internal certificate audit failed, 3 unreadable or invalid input.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

import numpy as np

from . import cover, lp, select
from .contact import CertificateError, UnboundedHomothetError, extract_contact_pairs, max_inscribed_homothet
from .geom import DEFAULT_TOL, GeometryError, Polytope, plank_parameters, scale, translate
from .svg import contact_figure, cover_figure

COMMANDS = (
    "select-bang",
    "select-kadets",
    "select-colourful",
    "inradius",
    "contact-pairs",
    "witness",
    "sumset-witness",
    "simplex-demo",
    "verify-cover",
)

EXIT_OK, EXIT_AUDIT, EXIT_REFUSED, EXIT_INPUT = 0, 1, 2, 3


class InputError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: str
    out: str | None = None
    tol: float = DEFAULT_TOL
    seed: int = 0
    svg: str | None = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if not self.tol > 0:
            raise ValueError("tol must be positive")


def _load(path: str):
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: JSON parse error at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def _field(data, key):
    if not isinstance(data, dict) or key not in data:
        raise InputError(f"missing field {key!r}")
    return data[key]


def _array(value, what: str, ndim: int) -> np.ndarray:
    try:
        arr = np.array(value, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError(f"{what}: expected numbers ({exc})") from exc
    if arr.ndim != ndim:
        raise InputError(f"{what}: expected a {ndim}-d array, got shape {arr.shape}")
    return arr


def _cmd_select_bang(data, cfg):
    units = _array(_field(data, "units"), "units", 2)
    res = select.select_bang(units, _field(data, "widths"), _field(data, "offsets"), cfg.tol)
    return {
        "signs": [int(s) for s in res.signs],
        "point": res.point.tolist(),
        "margins": res.margins.tolist(),
        "selection": res.selection.to_dict(),
    }, None


def _cmd_select_kadets(data, cfg):
    dirs = [_array(s, f"dirs[{i}]", 2) for i, s in enumerate(_field(data, "dirs"))]
    res = select.select_kadets(dirs, _field(data, "radii"), _field(data, "centers"), cfg.tol)
    return {
        "point": res.point.tolist(),
        "chosen_index": [int(i) for i in res.chosen_index],
        "chosen": res.chosen.tolist(),
        "margins": res.margins.tolist(),
        "selection": res.selection.to_dict(),
    }, None


def _cmd_select_colourful(data, cfg):
    inst = select.SelectionInstance.from_dict(data)
    res = select.select_colourful(inst, cfg.tol)
    out = res.to_dict()
    out["audited_margins"] = select.verify_guarantee(inst, res, cfg.tol)
    return out, None


def _bodies(data):
    K = Polytope.from_dict(_field(data, "K"))
    L = Polytope.from_dict(_field(data, "L"))
    if K.dim != L.dim:
        raise InputError(f"dimension mismatch: K is {K.dim}-d, L is {L.dim}-d")
    return K, L


def _cmd_inradius(data, cfg):
    K, L = _bodies(data)
    h = max_inscribed_homothet(K, L)
    out = h.to_dict()
    if not L.bounded and L.A.shape[0] == 2:
        try:
            plank_parameters(L)
        except GeometryError:
            pass
        else:
            out["relative_width"] = cover.relative_width(K, L)
    return out, None


def _cmd_contact_pairs(data, cfg):
    K, L = _bodies(data)
    h = max_inscribed_homothet(K, L)
    sys_ = extract_contact_pairs(K, L, h, data.get("o"))
    out = {"homothet": h.to_dict(), "contacts": sys_.to_dict()}
    svg = contact_figure(K, L, h.lam, h.shift, sys_) if K.dim == 2 else None
    return out, svg


def _cmd_witness(data, cfg):
    inst = cover.CoveringInstance.from_dict(data)
    rep = cover.construct_witness(inst, data.get("epsilon"))
    svg = cover_figure(inst.B, [p.placed for p in inst.pieces], rep.point) if inst.dim == 2 else None
    return rep.to_dict(), svg


def _cmd_sumset_witness(data, cfg):
    bodies = []
    for i, item in enumerate(_field(data, "bodies")):
        bodies.append((Polytope.from_dict(_field(item, "K")), _array(_field(item, "V"), f"bodies[{i}].V", 2)))
    shifts = _array(_field(data, "shifts"), "shifts", 2)
    rep = cover.sumset_witness(bodies, shifts)
    return rep.to_dict(), None


def _cmd_simplex_demo(data, cfg):
    d = int(_field(data, "d"))
    lams = _array(_field(data, "lambdas"), "lambdas", 1)
    if "shifts" in data:
        shifts = _array(data["shifts"], "shifts", 2)
    else:
        rng = np.random.default_rng(cfg.seed)
        shifts = rng.uniform(-1.0, 1.0, size=(lams.shape[0], d))
    rep = cover.simplex_negative_homothet(d, lams, shifts)
    out = rep.to_dict()
    out["shifts"] = shifts.tolist()
    svg = None
    if d == 2:
        T = cover.regular_simplex(2)
        placed = [
            translate(scale(T, -lam), x) for lam, x in zip(lams, shifts) if lam > 0
        ]
        svg = cover_figure(T, placed, rep.point)
    return out, svg


def _cmd_verify_cover(data, cfg):
    inst = cover.CoveringInstance.from_dict(data)
    grid_n = int(data.get("grid_n", 100))
    res = cover.verify_cover_sample(inst, grid_n, data.get("probes"), tol=cfg.tol)
    svg = cover_figure(inst.B, [p.placed for p in inst.pieces], res.first_uncovered) if inst.dim == 2 else None
    return res.to_dict(), svg


HANDLERS = {
    "select-bang": _cmd_select_bang,
    "select-kadets": _cmd_select_kadets,
    "select-colourful": _cmd_select_colourful,
    "inradius": _cmd_inradius,
    "contact-pairs": _cmd_contact_pairs,
    "witness": _cmd_witness,
    "sumset-witness": _cmd_sumset_witness,
    "simplex-demo": _cmd_simplex_demo,
    "verify-cover": _cmd_verify_cover,
}


def _emit(payload: dict, path: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def run(cfg: RunConfig) -> int:
    """Execute one command; returns the process exit status."""
    try:
        data = _load(cfg.input)
        if not isinstance(data, dict):
            raise InputError("top-level JSON value must be an object")
        payload, svg = HANDLERS[cfg.command](data, cfg)
    except (cover.Refusal,) as exc:
        _emit({"status": "refused", "reason": exc.reason, "detail": exc.detail}, cfg.out)
        return EXIT_REFUSED
    except (select.PreconditionError, UnboundedHomothetError, CertificateError, cover.CapacityError) as exc:
        _emit({"status": "refused", "reason": type(exc).__name__, "detail": str(exc)}, cfg.out)
        return EXIT_REFUSED
    except (select.GuaranteeError, lp.DegeneracyError) as exc:
        print(f"internal audit failure: {exc}", file=sys.stderr)
        return EXIT_AUDIT
    except (InputError, GeometryError, lp.CapacityError, ValueError, KeyError, TypeError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    payload = {"status": "ok", "command": cfg.command, **payload}
    _emit(payload, cfg.out)
    if cfg.svg is not None:
        if svg is None:
            print("note: no SVG for this command/dimension", file=sys.stderr)
        else:
            with open(cfg.svg, "w", encoding="utf-8") as fh:
                fh.write(svg)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    prs = argparse.ArgumentParser(prog="plankcover", description=__doc__.splitlines()[0])
    prs.add_argument("command", choices=COMMANDS)
    prs.add_argument("input", help="instance JSON file ('-' for stdin)")
    prs.add_argument("--out", default=None, help="write the JSON report here instead of stdout")
    prs.add_argument("--svg", default=None, help="write a planar SVG figure here")
    prs.add_argument("--tol", type=float, default=DEFAULT_TOL)
    prs.add_argument("--seed", type=int, default=0)
    return prs


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(args.command, args.input, args.out, args.tol, args.seed, args.svg)
    except ValueError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
