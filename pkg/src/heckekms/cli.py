"""Command-line front end.

Every command builds a JSON-ready report dict, validates it against the
shipped report schema and prints it either as JSON or as ``key: value`` lines.
Failures print an error report and exit nonzero.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import random
import sys
import tempfile
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

from . import boundary, hecke, states
from .groupoid import groupoid_from_json, groupoid_report
from .hecke import InsufficientLevel, element_to_json, scalar_to_json
from .number_field import (
    Field,
    FieldElement,
    element_to_json as elt_json,
    fundamental_unit,
    ideal_to_json,
    make_field,
    narrow_class_group,
)
from .schemas import validate_json

CACHE_ENV = "HECKEKMS_CACHE_DIR"
CACHED = {"field", "minimal-ideals", "szero", "boundary-algebra", "zeta", "hecke relations"}


@dataclass
class RunConfig:
    """Validated options shared by all subcommands.

    ``level`` defaults to 1, ``bound`` to a per-command default, ``betas`` to
    ``[2]``; the cache is off unless a directory is given here or in
    ``HECKEKMS_CACHE_DIR``.
    """

    d: int | None = None
    level: int = 1
    bound: int | None = None
    betas: list = field(default_factory=lambda: [Fraction(2)])
    json: bool = False
    cache_dir: str | None = None
    seed: int = 0

    def validate(self) -> None:
        if self.level < 1:
            raise ValueError(f"level must be positive, got {self.level}")
        if self.bound is not None and self.bound < 1:
            raise ValueError(f"bound must be positive, got {self.bound}")

    def field(self) -> Field:
        if self.d is None:
            raise CommandError("unknown-field", "this command needs -d")
        try:
            return make_field(self.d)
        except ValueError as exc:
            raise CommandError("unknown-field", str(exc)) from exc


class CommandError(Exception):
    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind


# ------------------------------------------------------------------ parsing

def parse_number(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise CommandError("parse", f"bad number {text!r}") from exc


def parse_element(f: Field, text: str) -> FieldElement:
    """``"x"`` or ``"x,y"`` with rational entries; ``y`` is the coefficient of ``w``."""
    parts = text.split(",")
    if len(parts) > 2 or (len(parts) == 2 and f.is_rational):
        raise CommandError("parse", f"bad element {text!r} for {f.name()}")
    x = parse_number(parts[0])
    y = parse_number(parts[1]) if len(parts) == 2 else Fraction(0)
    return f(x, y)


def parse_word(f: Field, words: list[str]) -> hecke.HeckeElement:
    """Product of generator tokens ``mu:a``, ``mus:a`` (adjoint) and ``e:r``."""
    H = hecke.HeckeElement.one(f)
    for tok in words:
        kind, _, arg = tok.partition(":")
        if not arg:
            raise CommandError("parse", f"bad generator token {tok!r}")
        z = parse_element(f, arg)
        try:
            g = {"mu": hecke.mu, "mus": hecke.mu_star, "e": hecke.e}[kind](z)
        except KeyError as exc:
            raise CommandError("parse", f"unknown generator {kind!r}") from exc
        H = H * g
    return H


def _cell(text: str) -> tuple[int, int]:
    try:
        c, j = (int(v) for v in text.split(","))
    except ValueError as exc:
        raise CommandError("parse", f"bad cell {text!r}; expected c,j") from exc
    return (c, j)


def _tail(x: float):
    return None if x == float("inf") else x


def _value_json(v):
    if isinstance(v, float):
        return v
    return scalar_to_json(v)


# ----------------------------------------------------------------- commands

def cmd_field(cfg: RunConfig, args) -> dict:
    f = cfg.field()
    ud = fundamental_unit(f)
    G = narrow_class_group(f)
    sig = "rational" if f.is_rational else ("real" if f.is_real else "imaginary")
    return {
        "command": "field",
        "d": f.d,
        "disc": f.disc,
        "signature": sig,
        "omega": None if f.is_rational else f.omega_str,
        "fundamental_unit": elt_json(ud.fundamental_unit) if ud.fundamental_unit is not None else None,
        "norm_of_unit": ud.norm_of_epsilon,
        "eps_plus": elt_json(ud.eps_plus) if ud.eps_plus is not None else None,
        "torsion": [elt_json(u) for u in ud.torsion_units],
        "h_plus": G.order,
        "class_group_invariants": G.invariants(),
    }


def cmd_minimal_ideals(cfg: RunConfig, args) -> dict:
    t = boundary.minimal_norm_ideals(cfg.field())
    return {"command": "minimal-ideals", "d": cfg.d, "shape": t.shape, "classes": t.to_json()}


def cmd_szero(cfg: RunConfig, args) -> dict:
    t = boundary.minimal_norm_ideals(cfg.field())
    els = [
        {
            "ideal": {"num": ideal_to_json(s.ideal.num), "den": s.ideal.den},
            "generator": elt_json(s.generator),
            "norm": str(s.generator.norm()),
            "class": s.cls,
            "pair": list(s.pair),
        }
        for s in boundary.s_zero(t)
    ]
    return {"command": "szero", "d": cfg.d, "elements": els, "denominator_bound": boundary.s_denominator(t)}


def cmd_boundary_algebra(cfg: RunConfig, args) -> dict:
    f = cfg.field()
    t = boundary.minimal_norm_ideals(f)
    orbits = boundary.unit_orbit_space(f, cfg.level) if cfg.level > 1 else []
    return {
        "command": "boundary-algebra",
        "d": cfg.d,
        "level": cfg.level,
        "shape": t.shape,
        "unit_orbits": len(orbits) if cfg.level > 1 else 1,
        "orbit_representatives": [elt_json(o[0]) for o in orbits],
    }


def cmd_zeta(cfg: RunConfig, args) -> dict:
    f = cfg.field()
    B = cfg.bound or 100
    beta = cfg.betas[0]
    if args.cls is None:
        z = boundary.zeta_partial(f, beta, B)
    else:
        z = boundary.zeta_class_partial(f, args.cls, beta, B)
    return {
        "command": "zeta",
        "d": cfg.d,
        "beta": str(beta),
        "bound": B,
        "class": args.cls,
        "value": _value_json(z.value),
        "tail_bound": _tail(z.tail_bound),
        "converges": z.converges,
    }


def cmd_hecke(cfg: RunConfig, args) -> dict:
    f = cfg.field()
    if args.hecke_cmd == "mul":
        H = parse_word(f, args.words)
        return {"command": "hecke mul", "d": cfg.d, "element": element_to_json(H)}
    if args.hecke_cmd == "relations":
        rep = hecke.check_relations(
            f, args.norm_bound, args.den_bound, r_per_den=args.r_per_den, seed=cfg.seed
        )
        return {
            "command": "hecke relations",
            "d": cfg.d,
            "ok": rep.ok,
            "counts": dict(sorted(rep.counts.items())),
            "failures": [[name, repr(w)] for name, w in rep.failures],
        }
    H = parse_word(f, args.words)
    u = parse_element(f, args.u)
    if args.action == "tau":
        out = hecke.tau_u(H, u, cfg.level)
    else:
        out = hecke.beta_action(u, H, cfg.level)
    return {
        "command": "hecke act",
        "d": cfg.d,
        "level": cfg.level,
        "u": elt_json(u),
        "action": args.action,
        "element": element_to_json(out),
    }


def _ground_point(cfg: RunConfig, args) -> states.GroundStatePoint:
    f = cfg.field()
    u = parse_element(f, args.unit) if args.unit else None
    return states.ground_point(f, _cell(args.cell), u, cfg.level)


def cmd_state(cfg: RunConfig, args) -> dict:
    f = cfg.field()
    base = {"d": cfg.d, "level": cfg.level}
    if args.state_cmd == "ground":
        p = _ground_point(cfg, args)
        v = states.ground_eval(p, parse_word(f, args.words))
        return {"command": "state ground", **base, "value": _value_json(v), "tail_bound": 0.0}
    if args.state_cmd == "kms":
        p = _ground_point(cfg, args)
        H = parse_word(f, args.words)
        k = states.kms_eval(states.KMSStateSpec(cfg.betas[0], p, cfg.bound), H)
        return {
            "command": "state kms", **base, "beta": str(cfg.betas[0]), "bound": k.bound,
            "value": _value_json(k.value), "tail_bound": k.error,
        }
    if args.state_cmd == "fabulous":
        p = _ground_point(cfg, args)
        H = parse_word(f, args.words)
        if args.average:
            H = hecke.arithmetic_average(H, cfg.level)
        us = [parse_element(f, args.u)] if args.u else hecke.unit_residues(f, cfg.level)
        res = [{"u": elt_json(u), "ok": states.fabulous_check(u, H, p)} for u in us]
        return {"command": "state fabulous", **base, "ok": all(r["ok"] for r in res), "results": res}
    # weil
    if args.u and args.z:
        pairs = [(parse_element(f, args.u), parse_element(f, args.z))]
    else:
        rng = random.Random(cfg.seed)
        us = hecke.unit_residues(f, cfg.level)
        m = cfg.level
        pairs = []
        for _ in range(args.samples):
            z = f(Fraction(rng.randrange(m), m), Fraction(0 if f.is_rational else rng.randrange(m), m))
            pairs.append((rng.choice(us), z))
    res = [
        {"u": elt_json(u), "z": elt_json(z), "ok": states.weil_identity_check(u, z, cfg.level)}
        for u, z in pairs
    ]
    return {"command": "state weil", **base, "ok": all(r["ok"] for r in res), "results": res}


def cmd_groupoid_check(cfg: RunConfig, args) -> dict:
    try:
        data = json.loads(Path(args.file).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise CommandError("malformed-groupoid", str(exc)) from exc
    try:
        G, c, phi = groupoid_from_json(data)
    except Exception as exc:  # schema or structural errors
        raise CommandError("malformed-groupoid", str(exc).splitlines()[0]) from exc
    beta = Fraction(data["beta"]) if "beta" in data else None
    return {"command": "groupoid-check", "report": groupoid_report(G, c, phi, beta)}


# -------------------------------------------------------------------- cache

def _cache_key(name: str, cfg: RunConfig, args) -> str:
    extra = {k: v for k, v in sorted(vars(args).items()) if k not in ("json", "cache_dir", "func")}
    blob = json.dumps([name, asdict(cfg) | {"json": None, "cache_dir": None}, extra], default=str, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()[:24]


def _cache_read(path: Path):
    try:
        return json.loads(path.read_text())
    except (OSError, json.JSONDecodeError):
        return None


def _cache_write(path: Path, data: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(json.dumps(data, sort_keys=True))
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# --------------------------------------------------------------------- main

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-d", type=int, help="squarefree integer; 1 selects Q")
    common.add_argument("--level", type=int, default=1, help="finite level m (default 1)")
    common.add_argument("--beta", action="append", help="inverse temperature (repeatable; default 2)")
    common.add_argument("--bound", type=int, help="truncation norm bound B")
    common.add_argument("--json", action="store_true", help="emit JSON")
    common.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    common.add_argument("--cache-dir", help=f"result cache directory (or ${CACHE_ENV})")

    p = argparse.ArgumentParser(prog="heckekms", description="Hecke C*-algebras of quadratic fields.")
    sub = p.add_subparsers(dest="cmd", required=True)
    sub.add_parser("field", parents=[common], help="field invariants")
    sub.add_parser("minimal-ideals", parents=[common], help="minimal-norm ideals per narrow class")
    sub.add_parser("szero", parents=[common], help="ratios of minimal ideals")
    sub.add_parser("boundary-algebra", parents=[common], help="shape of the boundary algebra")
    z = sub.add_parser("zeta", parents=[common], help="partial Dedekind zeta sums")
    z.add_argument("--class", dest="cls", type=int, help="restrict to one narrow class")

    h = sub.add_parser("hecke", help="Hecke algebra computations")
    hs = h.add_subparsers(dest="hecke_cmd", required=True)
    hm = hs.add_parser("mul", parents=[common], help="multiply generator tokens mu:a mus:a e:r")
    hm.add_argument("words", nargs="+")
    hr = hs.add_parser("relations", parents=[common], help="verify the presentation relations")
    hr.add_argument("--norm-bound", type=int, default=6)
    hr.add_argument("--den-bound", type=int, default=4)
    hr.add_argument("--r-per-den", type=int)
    ha = hs.add_parser("act", parents=[common], help="apply tau_u or the arithmetic action")
    ha.add_argument("--u", required=True)
    ha.add_argument("--action", choices=["tau", "beta"], default="tau")
    ha.add_argument("words", nargs="+")

    s = sub.add_parser("state", help="ground and KMS states")
    ss = s.add_subparsers(dest="state_cmd", required=True)
    for name in ("ground", "kms", "fabulous"):
        sp = ss.add_parser(name, parents=[common])
        sp.add_argument("--cell", default="0,0", help="cell c,j of Y_0 (default 0,0)")
        sp.add_argument("--unit", help="unit residue of the point")
        sp.add_argument("words", nargs="*")
    ss.choices["fabulous"].add_argument("--u", help="single unit residue (default: all)")
    ss.choices["fabulous"].add_argument("--average", action="store_true", help="average over the arithmetic action first")
    sw = ss.add_parser("weil", parents=[common])
    sw.add_argument("--u")
    sw.add_argument("--z")
    sw.add_argument("--samples", type=int, default=100)

    g = sub.add_parser("groupoid-check", parents=[common], help="validate a groupoid file")
    g.add_argument("file")
    return p


def _command_name(args) -> str:
    if args.cmd == "hecke":
        return f"hecke {args.hecke_cmd}"
    if args.cmd == "state":
        return f"state {args.state_cmd}"
    return args.cmd


DISPATCH = {
    "field": cmd_field,
    "minimal-ideals": cmd_minimal_ideals,
    "szero": cmd_szero,
    "boundary-algebra": cmd_boundary_algebra,
    "zeta": cmd_zeta,
    "hecke": cmd_hecke,
    "state": cmd_state,
    "groupoid-check": cmd_groupoid_check,
}


def config_from_args(args) -> RunConfig:
    betas = [parse_number(b) for b in args.beta] if args.beta else [Fraction(2)]
    cfg = RunConfig(
        d=args.d,
        level=args.level,
        bound=args.bound,
        betas=betas,
        json=args.json,
        cache_dir=args.cache_dir or os.environ.get(CACHE_ENV),
        seed=args.seed,
    )
    cfg.validate()
    return cfg


def _human(data, prefix: str = "") -> list[str]:
    lines = []
    for k, v in data.items():
        if isinstance(v, dict):
            lines += _human(v, f"{prefix}{k}.")
        else:
            lines.append(f"{prefix}{k}: {json.dumps(v, sort_keys=True)}")
    return lines


def emit(data: dict, as_json: bool, out=None) -> None:
    out = out or sys.stdout
    if as_json:
        out.write(json.dumps(data, sort_keys=True, indent=2) + "\n")
    else:
        out.write("\n".join(_human(data)) + "\n")


def run(argv=None) -> tuple[int, dict]:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        name = _command_name(args)
        path = None
        if cfg.cache_dir and name in CACHED:
            path = Path(cfg.cache_dir) / f"{name.replace(' ', '-')}-{_cache_key(name, cfg, args)}.json"
            hit = _cache_read(path)
            if hit is not None:
                return 0, hit
        data = DISPATCH[args.cmd](cfg, args)
        validate_json(data, "report")
        if path is not None:
            _cache_write(path, data)
        return 0, data
    except CommandError as exc:
        return 1, {"error": {"type": exc.kind, "message": str(exc)}}
    except InsufficientLevel as exc:
        return 1, {"error": {"type": "insufficient-level", "message": str(exc)}}
    except (ValueError, TypeError, AssertionError) as exc:
        return 1, {"error": {"type": "invalid-input", "message": str(exc)}}


def main(argv=None) -> int:
    code, data = run(argv)
    args_json = argv if argv is not None else sys.argv[1:]
    emit(data, "--json" in args_json or "error" in data)
    return code


if __name__ == "__main__":
    sys.exit(main())
