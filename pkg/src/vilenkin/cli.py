"""Command-line front end: verification sweeps, kernel dumps, experiments.

Subcommands: verify | kernels | lebesgue | variation | counterexample.
Configuration comes from a flat key=value file plus overriding flags; all
outputs are CSV with 17-significant-digit decimals and LF line endings so
reruns are byte-identical.  VILENKIN_THREADS caps worker parallelism.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Sequence

import numpy as np

from . import hardy, identities, transform
from .group import GeneratorSequence, variation

__all__ = ["main", "ExperimentConfig", "parse_generator", "parse_phi"]

MAX_CELLS = 1 << 22  # memory budget on M_N

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


class ConfigError(Exception):
    pass


def parse_generator(spec: str, depth: Optional[int]) -> GeneratorSequence:
    """Generator specs: "2,3,4" | "constant:2" | "cycle:2,3,4".

    The named forms require a depth; an explicit list fixes the depth
    itself (a given depth must then agree).
    """
    spec = spec.strip()
    try:
        if spec.startswith("constant:"):
            if depth is None:
                raise ConfigError("constant generator needs a depth")
            gen = GeneratorSequence.constant(int(spec.split(":", 1)[1]), depth)
        elif spec.startswith("cycle:"):
            if depth is None:
                raise ConfigError("cycle generator needs a depth")
            pattern = [int(tok) for tok in spec.split(":", 1)[1].split(",")]
            gen = GeneratorSequence.cycle(pattern, depth)
        else:
            entries = tuple(int(tok) for tok in spec.split(","))
            if depth is not None and depth != len(entries):
                raise ConfigError(
                    f"explicit generator has depth {len(entries)}, got depth={depth}"
                )
            gen = GeneratorSequence(entries)
    except (ValueError, IndexError) as exc:
        raise ConfigError(f"bad generator spec {spec!r}: {exc}") from exc
    if gen.size > MAX_CELLS:
        raise ConfigError(f"M_N = {gen.size} exceeds the memory budget {MAX_CELLS}")
    return gen


def parse_phi(spec: str) -> Callable[[int], float]:
    """Weight families: const:<c> | log | logpow:<theta> | loglog | table:<path>.

    Every family is clamped to be nondecreasing and >= 1.
    """
    spec = spec.strip()
    try:
        if spec.startswith("const:"):
            c = float(spec.split(":", 1)[1])
            if c < 1:
                raise ConfigError("constant weight must be >= 1")
            return lambda n, c=c: c
        if spec == "log":
            return lambda n: max(1.0, math.log(max(n, 1)))
        if spec.startswith("logpow:"):
            theta = float(spec.split(":", 1)[1])
            if theta < 0:
                raise ConfigError("logpow exponent must be >= 0")
            return lambda n, t=theta: max(1.0, math.log(max(n, 1)) ** t)
        if spec == "loglog":
            return lambda n: max(1.0, math.log(max(1.0, math.log(max(n, 2)))))
        if spec.startswith("table:"):
            return _tabulated_phi(spec.split(":", 1)[1])
    except ConfigError:
        raise
    except (ValueError, IndexError) as exc:
        raise ConfigError(f"bad phi spec {spec!r}: {exc}") from exc
    raise ConfigError(f"unknown phi spec {spec!r}")


def _tabulated_phi(path: str) -> Callable[[int], float]:
    """Load "n,value" rows; lookups take the last tabulated n not above n."""
    table: list[tuple[int, float]] = []
    try:
        for line in Path(path).read_text().splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            a, b = line.split(",")
            table.append((int(a), float(b)))
    except (OSError, ValueError) as exc:
        raise ConfigError(f"bad phi table {path!r}: {exc}") from exc
    table.sort()
    if not table or table[0][1] < 1:
        raise ConfigError("phi table must be nonempty with values >= 1")
    for (_, a), (_, b) in zip(table, table[1:]):
        if b < a:
            raise ConfigError("phi table must be nondecreasing")
    ns = [n for n, _ in table]
    vs = [v for _, v in table]

    def phi(n: int) -> float:
        import bisect

        i = bisect.bisect_right(ns, n) - 1
        return vs[max(i, 0)]

    return phi


@dataclass
class ExperimentConfig:
    generator: str = "constant:2"
    depth: Optional[int] = None
    phi: str = "const:1"
    alphas: str = ""
    nmax: Optional[int] = None
    outdir: str = "out"
    seed: int = 0
    tol: float = identities.DEFAULT_TOL

    @classmethod
    def load(cls, path: str) -> "ExperimentConfig":
        cfg = cls()
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key=value")
            key, value = (tok.strip() for tok in line.split("=", 1))
            if key not in vars(cfg):
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            if key in ("depth", "nmax", "seed"):
                setattr(cfg, key, int(value))
            elif key == "tol":
                cfg.tol = float(value)
            else:
                setattr(cfg, key, value)
        return cfg

    def build_generator(self) -> GeneratorSequence:
        return parse_generator(self.generator, self.depth)

    def build_phi(self) -> Callable[[int], float]:
        return parse_phi(self.phi)

    def build_alphas(self, gen: GeneratorSequence,
                     phi: Callable[[int], float]) -> list[int]:
        spec = self.alphas.strip()
        if not spec:
            raise ConfigError("experiment needs an alphas spec")
        if spec.startswith("greedy:"):
            parts = spec.split(":")
            count = int(parts[1])
            threshold = float(parts[2]) if len(parts) > 2 else 4.0
            ranks = hardy.select_alphas(phi, count, gen, threshold)
            if len(ranks) < count:
                raise ConfigError(
                    f"greedy selection found only {len(ranks)} of {count} ranks"
                    f" within depth {gen.depth}"
                )
            return ranks
        try:
            ranks = [int(tok) for tok in spec.split(",")]
        except ValueError as exc:
            raise ConfigError(f"bad alphas spec {spec!r}") from exc
        if ranks != sorted(set(ranks)) or ranks[-1] >= gen.depth:
            raise ConfigError(f"alphas must be increasing ranks below {gen.depth}")
        return ranks


def worker_count() -> int:
    cap = os.environ.get("VILENKIN_THREADS", "")
    try:
        return max(1, int(cap)) if cap else 1
    except ValueError:
        raise ConfigError(f"bad VILENKIN_THREADS value {cap!r}")


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _write_csv(path: Path, header: Sequence[str], rows: Sequence[Sequence[str]]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


def _params_str(params) -> str:
    return ";".join(f"{k}={v}" for k, v in params.items())


# --- subcommands -------------------------------------------------------------


def cmd_verify(cfg: ExperimentConfig) -> int:
    gen = cfg.build_generator()
    rng = np.random.default_rng(cfg.seed)
    reports = identities.run_suite(
        gen, rng, tol=cfg.tol, max_workers=worker_count()
    )
    rows = [
        [r.name, _params_str(r.params), _fmt(r.value), _fmt(r.tolerance),
         str(r.passed).lower()]
        for r in reports
    ]
    _write_csv(
        Path(cfg.outdir) / "verify.csv",
        ["name", "params", "deviation_or_margin", "tolerance", "passed"],
        rows,
    )
    failed = [r for r in reports if not r.passed]
    for r in failed:
        print(f"FAILED {r.name} {_params_str(r.params)} value={r.value:.3g}",
              file=sys.stderr)
    print(f"verify: {len(reports) - len(failed)}/{len(reports)} checks passed")
    return EXIT_OK if not failed else EXIT_FAILED


def _kernel_rows(gen: GeneratorSequence, nmax: int, kernel) -> list[list[str]]:
    rows = []
    for n in range(1, nmax + 1):
        vals = kernel(n, gen).values
        for i, v in enumerate(vals):
            rows.append([str(n), str(i), _fmt(v.real), _fmt(v.imag)])
    return rows


def cmd_kernels(cfg: ExperimentConfig) -> int:
    gen = cfg.build_generator()
    nmax = cfg.nmax if cfg.nmax is not None else min(gen.size, 16)
    if nmax > gen.size:
        raise ConfigError(f"nmax={nmax} exceeds M_N={gen.size}")
    header = ["n", "cell_index", "value_re", "value_im"]
    out = Path(cfg.outdir)
    _write_csv(out / "dirichlet.csv", header,
               _kernel_rows(gen, nmax, transform.dirichlet))
    _write_csv(out / "fejer.csv", header,
               _kernel_rows(gen, nmax, transform.fejer_kernel))
    print(f"kernels: wrote n <= {nmax} to {out}")
    return EXIT_OK


def cmd_lebesgue(cfg: ExperimentConfig) -> int:
    gen = cfg.build_generator()
    nmax = cfg.nmax if cfg.nmax is not None else min(gen.size, 64)
    if nmax > gen.size:
        raise ConfigError(f"nmax={nmax} exceeds M_N={gen.size}")
    rows = [
        [str(n), _fmt(transform.lebesgue_constant(n, gen))]
        for n in range(1, nmax + 1)
    ]
    _write_csv(Path(cfg.outdir) / "lebesgue.csv", ["n", "L_n"], rows)
    print(f"lebesgue: wrote n <= {nmax}")
    return EXIT_OK


def cmd_variation(cfg: ExperimentConfig) -> int:
    gen = cfg.build_generator()
    nmax = cfg.nmax if cfg.nmax is not None else gen.depth
    if nmax > gen.depth:
        raise ConfigError(f"nmax={nmax} exceeds depth {gen.depth}")
    rows = []
    for n in range(1, nmax + 1):
        Mn = gen.scale[n]
        if Mn < 2:
            continue
        mean = sum(variation(l, gen) for l in range(1, Mn)) / (Mn - 1)
        rows.append([str(n), _fmt(mean), _fmt(mean / n)])
    _write_csv(Path(cfg.outdir) / "variation.csv", ["n", "mean_v", "mean_v_over_n"], rows)
    print(f"variation: wrote n <= {nmax}")
    return EXIT_OK


def cmd_counterexample(cfg: ExperimentConfig) -> int:
    gen = cfg.build_generator()
    phi = cfg.build_phi()
    alphas = cfg.build_alphas(gen, phi)
    try:
        ce = hardy.counterexample_martingale(phi, alphas, gen)
    except ValueError as exc:
        print(f"counterexample: {exc}", file=sys.stderr)
        return EXIT_FAILED
    nmax = 2 * gen.scale[alphas[-1]]
    profile = hardy.sigma_norm_profile(ce.function, nmax)
    cumulative = np.cumsum(profile)

    rows = []
    t_values = []
    proxies = []
    for k, (a, lam) in enumerate(zip(ce.alphas, ce.lambdas), start=1):
        Ma = gen.scale[a]
        n = 2 * Ma
        t_n = cumulative[n - 1] / (n * phi(n))
        v_mean = sum(variation(l, gen) for l in range(1, Ma)) / Ma
        rows.append([
            str(k), str(a), str(Ma), _fmt(lam), str(n), _fmt(t_n),
            _fmt(v_mean), _fmt(profile[n - 1]),
        ])
        t_values.append(t_n)
        proxies.append(math.sqrt(math.log(Ma) / phi(2 * Ma)))
    out = Path(cfg.outdir)
    _write_csv(
        out / "counterexample.csv",
        ["k", "alpha_k", "M_alpha", "lambda_k", "n", "T_n", "v_mean", "norm_sigma"],
        rows,
    )

    summary = [f"blocks={len(alphas)}"]
    if len(t_values) >= 2:
        slope, corr = _fit(proxies, t_values)
        growth = t_values[-1] / t_values[0] if t_values[0] else float("inf")
        regime = "diverging" if growth > 2.0 else "bounded"
        summary += [
            f"slope={_fmt(slope)}", f"correlation={_fmt(corr)}",
            f"growth_ratio={_fmt(growth)}", f"regime={regime}",
        ]
    else:
        summary.append("fit=skipped (single block)")
    (out / "summary.txt").write_text("\n".join(summary) + "\n")
    print("counterexample: " + " ".join(summary))
    return EXIT_OK


def _fit(x: Sequence[float], y: Sequence[float]) -> tuple[float, float]:
    """Least-squares slope of y on x and their correlation coefficient."""
    x = np.asarray(x)
    y = np.asarray(y)
    slope = float(np.polyfit(x, y, 1)[0])
    corr = float(np.corrcoef(x, y)[0, 1])
    return slope, corr


# --- entry point -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vilenkin",
        description="Vilenkin-system kernels, identities, and experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("verify", "kernels", "lebesgue", "variation", "counterexample"):
        p = sub.add_parser(name)
        p.add_argument("--config", default=None)
        p.add_argument("--generator", default=None)
        p.add_argument("--depth", type=int, default=None)
        p.add_argument("--phi", default=None)
        p.add_argument("--alphas", default=None)
        p.add_argument("--nmax", type=int, default=None)
        p.add_argument("--out", default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--tol", type=float, default=None)
    return parser


def _merge(cfg: ExperimentConfig, args: argparse.Namespace) -> ExperimentConfig:
    for key, attr in [
        ("generator", "generator"), ("depth", "depth"), ("phi", "phi"),
        ("alphas", "alphas"), ("nmax", "nmax"), ("out", "outdir"),
        ("seed", "seed"), ("tol", "tol"),
    ]:
        value = getattr(args, key)
        if value is not None:
            setattr(cfg, attr, value)
    return cfg


COMMANDS = {
    "verify": cmd_verify,
    "kernels": cmd_kernels,
    "lebesgue": cmd_lebesgue,
    "variation": cmd_variation,
    "counterexample": cmd_counterexample,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = ExperimentConfig.load(args.config) if args.config else ExperimentConfig()
        cfg = _merge(cfg, args)
        return COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
