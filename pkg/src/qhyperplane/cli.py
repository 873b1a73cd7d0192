"""Command-line runs: a JSON config in, exact JSON or CSV tables out."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, List, Sequence

from .algebra import degrees_up_to, fmt_rational
from .ambient import SpaceSpec
from .errors import (
    ConfigError,
    ConsistencyError,
    DegenerateParameterError,
    DescriptorError,
    NormalizationError,
    SeriesDomainError,
)
from .hypergeo import BundleSpec

EXIT_OK, EXIT_CONFIG, EXIT_CONSISTENCY, EXIT_DEGENERATE = 0, 2, 3, 4
COMMANDS = ("ifun", "mirror", "gw", "verify-classp", "recursion", "flag-relations", "oracle")
EPS_ATTEMPTS = 5
COLUMNS = ("quantity", "degree", "index", "value", "provenance")


@dataclass
class RunConfig:
    command: str
    kind: str
    params: tuple
    bundle: BundleSpec = field(default_factory=BundleSpec)
    order: int = 1
    zorder: int = 2
    eps: tuple | None = None
    eps_seed: int = 0
    primed: bool = True
    sym_power: int | None = None

    def space(self, seed: int | None = None) -> SpaceSpec:
        seed = self.eps_seed if seed is None else seed
        return SpaceSpec(self.kind, self.params, eps=self.eps, seed=seed)


# config parsing -------------------------------------------------------------------

def _int(value, what: str, minimum: int = 0) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{what} must be an integer, got {value!r}")
    if value < minimum:
        raise ConfigError(f"{what} must be >= {minimum}, got {value}")
    return value


def _rational(value, what: str) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise ConfigError(f"{what} must be an integer or a 'num/den' string, got {value!r}")
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"{what}: cannot parse {value!r} as a rational") from exc


def _parse_space(raw) -> tuple:
    if not isinstance(raw, dict) or "kind" not in raw:
        raise ConfigError("'space' must be an object with a 'kind'")
    kind = raw["kind"]
    if kind == "projective_product":
        dims = raw.get("dims")
        if not isinstance(dims, list) or not dims:
            raise ConfigError("projective_product needs a nonempty 'dims' list")
        return kind, tuple(_int(n, "space.dims entry", 1) for n in dims)
    if kind == "grassmannian":
        k, n = _int(raw.get("k"), "space.k", 1), _int(raw.get("n"), "space.n", 2)
        if k >= n:
            raise ConfigError(f"grassmannian needs k < n, got k={k}, n={n}")
        return kind, (k, n)
    if kind == "flag_a":
        return kind, (_int(raw.get("n"), "space.n", 2),)
    raise ConfigError(f"unknown space kind {kind!r}")


def parse_config(raw: dict, command: str | None = None) -> RunConfig:
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    command = command or raw.get("command")
    if command not in COMMANDS:
        raise ConfigError(f"command must be one of {', '.join(COMMANDS)}; got {command!r}")
    kind, params = _parse_space(raw.get("space"))
    lines = raw.get("bundle") or []
    if not isinstance(lines, list) or not all(isinstance(l, list) for l in lines):
        raise ConfigError("'bundle' must be a list of integer lists")
    for l in lines:
        for a in l:
            _int(a, "bundle degree", 0)
    try:
        bundle = BundleSpec(lines)
    except DescriptorError as exc:
        raise ConfigError(str(exc)) from exc
    cfg = RunConfig(command, kind, params, bundle)
    if "order" in raw:
        cfg.order = _int(raw["order"], "order")
    if "zorder" in raw:
        cfg.zorder = _int(raw["zorder"], "zorder")
    if "eps_seed" in raw:
        cfg.eps_seed = _int(raw["eps_seed"], "eps_seed")
    if raw.get("eps") is not None:
        if not isinstance(raw["eps"], list):
            raise ConfigError("'eps' must be a list or null")
        cfg.eps = tuple(_rational(e, "eps entry") for e in raw["eps"])
    if "primed" in raw:
        cfg.primed = bool(raw["primed"])
    if raw.get("sym_power") is not None:
        cfg.sym_power = _int(raw["sym_power"], "sym_power", 1)
    _validate(cfg)
    return cfg


def _validate(cfg: RunConfig):
    try:
        spec = SpaceSpec(cfg.kind, cfg.params, eps=cfg.eps, seed=cfg.eps_seed)
    except DegenerateParameterError as exc:
        raise ConfigError(f"eps: {exc}") from exc
    except DescriptorError as exc:
        raise ConfigError(str(exc)) from exc
    if cfg.bundle.lines and len(cfg.bundle.lines[0]) != spec.k:
        raise ConfigError(f"bundle degree vectors need {spec.k} entries for {spec.name}")
    if cfg.command in ("ifun", "mirror", "gw") and cfg.kind != "projective_product":
        raise ConfigError(f"'{cfg.command}' needs a projective_product space")
    if cfg.command == "flag-relations" and cfg.kind != "flag_a":
        raise ConfigError("'flag-relations' needs a flag_a space")
    if cfg.command == "oracle" and cfg.kind != "grassmannian":
        raise ConfigError("'oracle' needs a grassmannian space")


# rows ---------------------------------------------------------------------------

def _deg(d) -> str:
    return ",".join(str(a) for a in d)


def _row(quantity, degree, index, value, provenance) -> Dict[str, str]:
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        value = fmt_rational(value)
    return {
        "quantity": quantity,
        "degree": _deg(degree) if isinstance(degree, tuple) else str(degree),
        "index": str(index),
        "value": str(value),
        "provenance": provenance,
    }


@dataclass
class Result:
    rows: List[Dict[str, str]]
    meta: Dict[str, object]
    failure: str | None = None


def _meta(cfg: RunConfig, spec: SpaceSpec | None, seed: int | None) -> Dict[str, object]:
    meta = {
        "command": cfg.command,
        "space": {"kind": cfg.kind, "params": list(cfg.params)},
        "bundle": [list(l) for l in cfg.bundle.lines],
        "order": cfg.order,
        "zorder": cfg.zorder,
    }
    if spec is not None:
        meta["eps"] = [fmt_rational(e) for e in spec.eps]
        meta["eps_seed"] = seed
    return meta


def _coh_index(j, e) -> str:
    mono = "*".join(f"p{i + 1}^{a}" for i, a in enumerate(e) if a) or "1"
    return f"hbar^{j}*{mono}"


def cmd_ifun(cfg: RunConfig, seed: int) -> Result:
    from .hypergeo import homogeneity_defects, phi_V, qde_check

    hs = phi_V(cfg.params, cfg.bundle, cfg.order, primed=cfg.primed)
    prov = "hypergeometric series" + (" (primed)" if cfg.primed else "")
    rows = []
    for d in degrees_up_to(len(cfg.params), cfg.order):
        for (j, e), c in sorted(hs.series[d].terms.items(), key=lambda t: (-t[0][0], t[0][1])):
            rows.append(_row("Phi", d, _coh_index(j, e), c, prov))
    qde, homog = qde_check(hs), not homogeneity_defects(hs)
    rows.append(_row("check", "-", "hypergeometric differential equations", int(qde), prov))
    rows.append(_row("check", "-", "weighted homogeneity", int(homog), prov))
    failure = None if qde and homog else "hypergeometric series failed its self-checks"
    return Result(rows, _meta(cfg, None, None), failure)


def cmd_mirror(cfg: RunConfig, seed: int) -> Result:
    from .hypergeo import fano_degrees, phi_V
    from .mirror import extract_mirror_map, map_degree_defects, mirror_transform

    hs = phi_V(cfg.params, cfg.bundle, cfg.order, primed=True)
    mm = extract_mirror_map(hs)
    prov = "mirror map from the hbar expansion"
    rows = []
    for name, s in mm.components():
        for d, c in sorted(s.items()):
            rows.append(_row(name, d, "q", c, prov))
    defects = map_degree_defects(mm, fano_degrees(cfg.params, cfg.bundle))
    rows.append(_row("check", "-", "mirror map weighted degrees", int(not defects), prov))
    J = mirror_transform(hs, mm)
    prov_j = "mirror transformation to J"
    for d in degrees_up_to(J.nvars, J.order):
        for (j, e), c in sorted(J[d].terms.items(), key=lambda t: (-t[0][0], t[0][1])):
            rows.append(_row("J", d, _coh_index(j, e), c, prov_j))
    rows.append(_row("check", "-", "mirror map vanishes", int(mm.is_zero()), prov))
    return Result(rows, _meta(cfg, None, None), "mirror map has wrong weighted degrees" if defects else None)


def cmd_gw(cfg: RunConfig, seed: int) -> Result:
    from .hypergeo import phi_V
    from .mirror import extract_gw, mirror_transform

    hs = phi_V(cfg.params, cfg.bundle, cfg.order, primed=True)
    J = mirror_transform(hs)
    try:
        classical, table = extract_gw(J, hs)
    except DescriptorError as exc:
        raise ConfigError(str(exc)) from exc
    prov = "hbar^-3 extraction after the mirror transformation"
    rows = [_row("classical", (0,) * len(cfg.params), "int Euler(V) H^3", classical, "classical intersection")]
    for r in table:
        rows.append(_row("hbar^-2", r.degree, "int Euler(V) J'", r.hbar2, prov))
        rows.append(_row("N", r.degree, "int Euler(V') over maps", r.N, prov))
        rows.append(_row("n", r.degree, "multiple-cover inversion", r.n, prov))
    return Result(rows, _meta(cfg, None, None))


def _recursion_inputs(cfg: RunConfig, seed: int):
    from .localization import RecursionData, compute_phiV_equivariant, compute_SX

    spec = cfg.space(seed)
    data = RecursionData.build(spec, cfg.bundle, cfg.order)
    S = compute_SX(spec, cfg.order, data=RecursionData.build(spec, None, cfg.order) if cfg.bundle.lines else data)
    Z = compute_phiV_equivariant(spec, cfg.bundle, cfg.order, S) if cfg.bundle.lines else S
    return spec, data, Z


def cmd_verify_classp(cfg: RunConfig, seed: int) -> Result:
    from .mirror import verify_class_P

    spec, data, Z = _recursion_inputs(cfg, seed)
    rep = verify_class_P(Z, data, zorder=cfg.zorder)
    what = "equivariant Phi^V" if cfg.bundle.lines else "S^X from the recursion"
    rows = [_row("check", "-", c.name, int(c.passed), f"class P on {spec.name}: {what}") for c in rep.checks]
    failure = None if rep.passed else "; ".join(f"{c.name}: {c.detail}" for c in rep.failures())
    return Result(rows, _meta(cfg, spec, seed), failure)


def cmd_recursion(cfg: RunConfig, seed: int) -> Result:
    spec, data, Z = _recursion_inputs(cfg, seed)
    rows = []
    for v in spec.fixed_points():
        for rd in data.rays[v]:
            for m, C in rd.C.items():
                rows.append(_row("C", rd.beta, f"v={_deg(v)};w={_deg(rd.w)};m={m}", C, "almost-recursion coefficient"))
    prov = "fixed-point restriction, expansion at hbar=infinity"
    for v in spec.fixed_points():
        for d in degrees_up_to(spec.k, cfg.order):
            lowest = -(spec.dim + sum(f * a for f, a in zip(spec.fano, d)))
            coeffs = Z.at(v, d).expand_at_infinity(lowest)
            for j in sorted(coeffs, reverse=True):
                if coeffs[j]:
                    rows.append(_row("Z", d, f"v={_deg(v)};hbar^{j}", coeffs[j], prov))
    return Result(rows, _meta(cfg, spec, seed))


def cmd_flag_relations(cfg: RunConfig, seed: int) -> Result:
    from .flag_qh import determinants_agree, homogeneity_check, q_zero_check, quantum_relations

    n = cfg.params[0]
    prov = "characteristic polynomial of the flag matrix"
    rows = [_row("relation", "-", r.index, str(r.poly), prov) for r in quantum_relations(n)]
    checks = [("classical limit q=0", q_zero_check(n)), ("homogeneity", homogeneity_check(n))]
    if n <= 5:
        checks.append(("cofactor expansion agrees", determinants_agree(n)))
    rows += [_row("check", "-", name, int(ok), prov) for name, ok in checks]
    failure = None if all(ok for _, ok in checks) else "flag relations failed a self-check"
    meta = _meta(cfg, None, None)
    meta["relations"] = {str(r.index): r.poly.to_json() for r in quantum_relations(n)}
    return Result(rows, meta, failure)


def cmd_oracle(cfg: RunConfig, seed: int) -> Result:
    from .localization import oracle_euler_sym

    k, n = cfg.params
    l = cfg.sym_power or (cfg.bundle.lines[0][0] if cfg.bundle.lines else None)
    if not l:
        raise ConfigError("'oracle' needs 'sym_power' or a bundle [[l]]")
    seeds = tuple(seed + i for i in range(3))
    value = oracle_euler_sym(k, n, l, seeds)
    rows = [_row("int Euler(Sym^l S^*)", "-", f"Gr({k},{n});l={l}", value, f"localization, seeds {list(seeds)}")]
    return Result(rows, _meta(cfg, None, None))


HANDLERS: Dict[str, Callable[[RunConfig, int], Result]] = {
    "ifun": cmd_ifun,
    "mirror": cmd_mirror,
    "gw": cmd_gw,
    "verify-classp": cmd_verify_classp,
    "recursion": cmd_recursion,
    "flag-relations": cmd_flag_relations,
    "oracle": cmd_oracle,
}


def run(cfg: RunConfig) -> Result:
    """Run a command, redrawing generic torus parameters on degeneracy.

    With explicit ``eps`` there is nothing to redraw, so a degeneracy is final.
    """
    attempts = 1 if cfg.eps is not None else EPS_ATTEMPTS
    last = None
    for a in range(attempts):
        try:
            return HANDLERS[cfg.command](cfg, cfg.eps_seed + a)
        except DegenerateParameterError as exc:
            last = exc
    raise DegenerateParameterError(f"degenerate torus parameters after {attempts} attempt(s): {last}")


# output ---------------------------------------------------------------------------

def render_json(res: Result) -> str:
    doc = {"meta": res.meta, "rows": res.rows}
    if res.failure:
        doc["failure"] = res.failure
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def render_csv(res: Result) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
    w.writeheader()
    w.writerows(res.rows)
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qhyperplane", description="Exact quantum hyperplane section computations.")
    p.add_argument("command", nargs="?", choices=COMMANDS, help="overrides the config's 'command'")
    p.add_argument("--config", required=True, help="JSON run configuration")
    p.add_argument("--order", type=int, help="q-truncation order D")
    p.add_argument("--zorder", type=int, help="z-order of the double construction")
    p.add_argument("--eps-seed", type=int, help="seed for generic torus parameters")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", help="directory for <command>.json and <command>.csv")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        try:
            raw = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        if isinstance(raw, dict):
            for key, val in (("order", args.order), ("zorder", args.zorder), ("eps_seed", args.eps_seed)):
                if val is not None:
                    raw[key] = val
        cfg = parse_config(raw, args.command)
        res = run(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DegenerateParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (ConsistencyError, NormalizationError, SeriesDomainError) as exc:
        print(f"consistency failure: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY

    texts = {"json": render_json(res), "csv": render_csv(res)}
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for fmt, text in texts.items():
            (out / f"{cfg.command}.{fmt}").write_text(text)
    else:
        sys.stdout.write(texts[args.format])
    if res.failure:
        print(f"consistency failure: {res.failure}", file=sys.stderr)
        return EXIT_CONSISTENCY
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
