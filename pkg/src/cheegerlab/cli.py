"""Command line: analyze | propa | symmetrize | witness | family | gen.

Every report is canonical JSON carrying the tool version, the seed and a
hash of the run configuration (input file contents included), so equal
configurations give byte-identical output. Wall-clock time goes to stderr
unless ``--timing`` asks for it inside the report.

Exit codes: 0 success, 2 bad input or unmet precondition, 3 size cap
exceeded, 1 anything else. Failures print ``{"error": {...}}`` on stdout.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import re
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Callable

from . import __version__
from .cheeger import DEFAULT_EXACT_CAP, cheeger_exact, cheeger_spectral_lower, cheeger_sweep
from .errors import CapExceeded, PreconditionError
from .family import coarse_union, expander_verdict, load_family_spec, make_family
from .graphs import GENERATORS, Graph, GraphError, random_regular
from .io import InputError, digest, dumps, file_digest, graph_to_json, load_graph, load_kernel
from .kernels import KERNEL_RECIPES, Kernel, build_kernel, variation
from .obstruction import (
    DEFAULT_ROWSUM_BUDGET,
    extract_witness,
    family_incompatibility,
    lower_bound_report,
    symmetric_kernel,
)
from .propa import DEFAULT_LP_CAP, DEFAULT_TOL, propa_optimum
from .symmetrisation import symmetrise, to_l1_symmetric

EXIT_INPUT = 2
EXIT_CAP = 3

_INLINE = re.compile(r"^([a-z_]+):(\d+(?::\d+)*)$")


@dataclass
class RunConfig:
    command: str
    graph: str | None = None
    family: str | None = None
    kernel: str | None = None
    recipe: str | None = None
    R: int = 1
    S: int | None = None
    S_divisor: int | None = None
    S_cut: int | None = None
    tol: float = DEFAULT_TOL
    dev: float = DEFAULT_ROWSUM_BUDGET
    symmetric: bool = False
    seed: int = 0
    exact_cap: int = DEFAULT_EXACT_CAP
    lp_cap: int = DEFAULT_LP_CAP
    heuristic: bool = False
    generator: str | None = None
    n: int | None = None
    k: int | None = None
    format: str = "json"
    inputs: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.tol <= 0:
            raise InputError("--tol must be positive")
        if self.dev < 0:
            raise InputError("--dev must be nonnegative")
        if self.R < 1:
            raise InputError("--R must be at least 1")
        for name in ("S", "S_cut"):
            v = getattr(self, name)
            if v is not None and v < 0:
                raise InputError(f"--{name.replace('_', '-')} must be nonnegative")

    @property
    def hash(self) -> str:
        d = asdict(self)
        d.pop("format")
        return digest(d)


def parse_graph(spec: str, seed: int) -> Graph:
    """A graph JSON path, or an inline generator such as ``cycle:8`` or ``random_regular:20:3``."""
    m = _INLINE.match(spec)
    if m and not Path(spec).exists():
        name, args = m.group(1), [int(a) for a in m.group(2).split(":")]
        try:
            if name == "random_regular":
                if len(args) != 2:
                    raise InputError("inline random_regular needs n:k")
                return random_regular(args[0], args[1], seed)
            if name not in GENERATORS or len(args) != 1:
                raise InputError(f"unknown inline generator {spec!r}")
            return GENERATORS[name](args[0])
        except GraphError as exc:
            raise InputError(str(exc)) from exc
    return load_graph(spec)


def _input_digests(cfg: RunConfig) -> dict[str, str]:
    out = {}
    for key in ("graph", "family", "kernel"):
        p = getattr(cfg, key)
        if p and Path(p).is_file():
            out[key] = file_digest(p)
    return out


def _kernel(cfg: RunConfig, graph: Graph) -> Kernel:
    if cfg.kernel:
        return load_kernel(cfg.kernel, graph)
    if cfg.recipe:
        if cfg.S is None:
            raise InputError("--recipe needs --S")
        return build_kernel(graph, cfg.recipe, cfg.S)
    raise InputError("give --kernel PATH or --recipe NAME")


def _require_graph(cfg: RunConfig) -> Graph:
    if not cfg.graph:
        raise InputError("--graph is required")
    return parse_graph(cfg.graph, cfg.seed)


def cmd_analyze(cfg: RunConfig) -> dict:
    g = _require_graph(cfg)
    if g.n < 2:
        raise InputError("need at least two vertices")
    out: dict[str, Any] = {"graph": g.name, "n": g.n, "k_max": g.k_max, "connected": g.is_connected()}
    if g.n <= cfg.exact_cap:
        cut = cheeger_exact(g, cfg.exact_cap)
        out.update(h=float(cut.h), gap=float(2 * cut.h), h_fraction=cut.h, gap_fraction=2 * cut.h)
        out["cut"] = cut.to_dict()
    elif cfg.heuristic:
        cut = cheeger_sweep(g)
        lower = cheeger_spectral_lower(g)
        out.update(h_upper=float(cut.h), h_lower=lower, gap_upper=float(2 * cut.h), gap_lower=2 * lower)
        out["cut"] = cut.to_dict()
    else:
        raise CapExceeded(f"n={g.n} above exact cap {cfg.exact_cap}; pass --heuristic for bounds")
    out["exact"] = g.n <= cfg.exact_cap
    return out


def cmd_propa(cfg: RunConfig) -> dict:
    g = _require_graph(cfg)
    if cfg.S is None:
        raise InputError("--S is required")
    res = propa_optimum(g, cfg.R, cfg.S, symmetric=cfg.symmetric, cap=cfg.lp_cap, tol=cfg.tol)
    out = {"graph": g.name, "n": g.n, **res.to_dict(), "kernel": res.kernel.to_json()}
    for recipe in ("ball_average", "lazy_walk"):
        out[f"V_{recipe}"] = variation(build_kernel(g, recipe, cfg.S), cfg.R).value
    return out


def cmd_symmetrize(cfg: RunConfig) -> dict:
    g = _require_graph(cfg)
    phi = _kernel(cfg, g)
    S_cut = cfg.S_cut if cfg.S_cut is not None else phi.support_radius
    res = symmetrise(phi, S_cut, R=cfg.R, max_rowsum_dev=max(cfg.dev, 0.1))
    out = {"graph": g.name, "n": g.n, **res.report()}
    out["psi_l1"] = to_l1_symmetric(res.psi).to_json()
    return out


def cmd_witness(cfg: RunConfig) -> dict:
    g = _require_graph(cfg)
    if cfg.kernel:
        phi = load_kernel(cfg.kernel, g)
    elif cfg.recipe:
        if cfg.S is None:
            raise InputError("--recipe needs --S")
        phi = symmetric_kernel(g, cfg.recipe, cfg.S)
    else:
        raise InputError("give --kernel PATH or --recipe NAME")
    w = extract_witness(phi, g)
    S = cfg.S if cfg.S is not None else phi.support_radius
    uniform = lower_bound_report(g, S, cfg.dev, cap=cfg.exact_cap)
    sharp = lower_bound_report(g, phi.support_radius, phi.rowsum_dev, h=uniform.h)
    return {
        "graph": g.name,
        "n": g.n,
        "witness": w.to_dict(),
        "V_R1": variation(phi, 1).value,
        "lower_bound": uniform.to_dict(),
        "lower_bound_kernel": sharp.to_dict(),
    }


def _family(cfg: RunConfig):
    if not cfg.family:
        raise InputError("--family is required")
    m = _INLINE.match(cfg.family)
    if m and not Path(cfg.family).exists():
        args = [int(a) for a in m.group(2).split(":")]
        if len(args) != 2:
            raise InputError("inline family needs generator:first:last")
        params = {"k": cfg.k} if cfg.k is not None else {}
        return make_family(m.group(1), args, params, cfg.seed)
    try:
        fam, _ = load_family_spec(cfg.family)
    except FileNotFoundError as exc:
        raise InputError(f"no such file: {cfg.family}") from exc
    except (KeyError, TypeError) as exc:
        raise InputError(f"bad family spec: {exc}") from exc
    return fam


def cmd_family(cfg: RunConfig) -> dict:
    fam = _family(cfg)
    if (cfg.S is None) == (cfg.S_divisor is None):
        raise InputError("give exactly one of --S and --S-divisor")
    if cfg.S is not None:
        S: int | Callable[[Graph], int] = cfg.S
    else:
        if cfg.S_divisor < 1:
            raise InputError("--S-divisor must be positive")
        S = lambda g, d=cfg.S_divisor: g.n // d
    report = family_incompatibility(
        fam, S, recipe=cfg.recipe or "ball_average", rowsum_budget=cfg.dev,
        union=coarse_union(fam), cap=cfg.exact_cap,
    )
    return {
        "generator": fam.generator,
        "sizes": fam.sizes,
        "diagnostic": expander_verdict(fam, cap=cfg.exact_cap).to_dict(),
        "incompatibility": report.to_dict(),
        "_csv": report.to_csv(),
    }


def cmd_gen(cfg: RunConfig) -> dict:
    if not cfg.generator or cfg.n is None:
        raise InputError("gen needs --generator and --n")
    try:
        if cfg.generator == "random_regular":
            if cfg.k is None:
                raise InputError("random_regular needs --k")
            g = random_regular(cfg.n, cfg.k, cfg.seed)
        elif cfg.generator in GENERATORS:
            g = GENERATORS[cfg.generator](cfg.n)
        else:
            raise InputError(f"unknown generator {cfg.generator!r}")
    except GraphError as exc:
        raise InputError(str(exc)) from exc
    return graph_to_json(g)


COMMANDS: dict[str, Callable[[RunConfig], dict]] = {
    "analyze": cmd_analyze,
    "propa": cmd_propa,
    "symmetrize": cmd_symmetrize,
    "witness": cmd_witness,
    "family": cmd_family,
    "gen": cmd_gen,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cheegerlab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"cheegerlab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--graph", help="graph JSON path or inline generator like cycle:8")
        s.add_argument("--family", help="family spec JSON path or inline like margulis:2:6")
        s.add_argument("--kernel", help="kernel JSON path")
        s.add_argument("--recipe", choices=KERNEL_RECIPES)
        s.add_argument("--R", type=int, default=1)
        s.add_argument("--S", type=int)
        s.add_argument("--S-divisor", type=int, dest="S_divisor", help="family: S = n // D")
        s.add_argument("--S-cut", type=int, dest="S_cut")
        s.add_argument("--tol", type=float, default=DEFAULT_TOL)
        s.add_argument("--dev", type=float, default=DEFAULT_ROWSUM_BUDGET, help="row-sum deviation budget")
        s.add_argument("--symmetric", action="store_true")
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--exact-cap", type=int, default=DEFAULT_EXACT_CAP, dest="exact_cap")
        s.add_argument("--lp-cap", type=int, default=DEFAULT_LP_CAP, dest="lp_cap")
        s.add_argument("--heuristic", action="store_true", help="analyze: bounds above the exact cap")
        s.add_argument("--generator", choices=sorted(GENERATORS))
        s.add_argument("--n", type=int)
        s.add_argument("--k", type=int)
        s.add_argument("--format", choices=("json", "csv"), default="json")
        s.add_argument("--output", "-o", help="write the report here instead of stdout")
        s.add_argument("--timing", action="store_true", help="embed wall-clock seconds in the report")
    return p


def _to_csv(report: dict) -> str:
    if "_csv" in report:
        return report["_csv"]
    flat = {k: v for k, v in report.items() if not isinstance(v, (dict, list))}
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(flat.keys())
    w.writerow([repr(v) if isinstance(v, float) else v for v in flat.values()])
    return buf.getvalue()


def _error(kind: str, exc: BaseException, code: int) -> tuple[int, str]:
    return code, dumps({"error": {"type": kind, "message": str(exc), "exit_code": code}})


def run(argv: list[str] | None = None) -> tuple[int, str]:
    """Run a command and return ``(exit_code, text)`` without touching stdout."""
    args = vars(build_parser().parse_args(argv))
    output, timing = args.pop("output"), args.pop("timing")
    start = time.perf_counter()
    try:
        cfg = RunConfig(**args)
        cfg.inputs = _input_digests(cfg)
        report = COMMANDS[cfg.command](cfg)
    except CapExceeded as exc:
        return _error("cap_exceeded", exc, EXIT_CAP)
    except (InputError, PreconditionError, GraphError, ValueError) as exc:
        return _error(type(exc).__name__, exc, EXIT_INPUT)
    except Exception as exc:  # noqa: BLE001 - any other failure still gets an error object
        return _error(type(exc).__name__, exc, 1)
    elapsed = time.perf_counter() - start
    if cfg.format == "csv":
        text = _to_csv(report)
    else:
        report.pop("_csv", None)
        report["meta"] = {
            "version": __version__,
            "config": asdict(cfg),
            "config_hash": cfg.hash,
            "seed": cfg.seed,
        }
        if timing:
            report["meta"]["duration_s"] = elapsed
        text = dumps(report)
    if output:
        Path(output).write_text(text)
        text = ""
    print(f"cheegerlab {cfg.command}: {elapsed:.3f}s", file=sys.stderr)
    return 0, text


def main(argv: list[str] | None = None) -> int:
    code, text = run(argv)
    if text:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
