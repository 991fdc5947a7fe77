"""Command line: run the experiment suites and write CSV.

    lapq run --suite sort-class --n 1000 --reps 30 --out runs.csv
    lapq run --suite dijkstra-keyrank --graph pvt:1000
    lapq gen-graph --n 1000 --seed 3 --out pvt.txt

Settings come from built-in defaults, then a ``key = value`` config file
(``--config``), then the flags.  Repetition ``r`` uses seed ``seed + r``;
rows are written in (grid point, repetition, queue) order.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from pathlib import Path

from .apps.dijkstra import QUEUES as DIJKSTRA_QUEUES
from .apps.dijkstra import KeyRankScheme, NodeRankScheme, dijkstra
from .apps.graphs import Graph, GraphFormatError, gen_pvt, load_graph
from .apps.records import ExperimentRecord, to_csv
from .apps.sorting import SORTERS, run_sorter
from .instrument import Rng
from .predict import gen_class, gen_decay

SUITES = ("sort-class", "sort-decay", "dijkstra-class", "dijkstra-decay", "dijkstra-keyrank")
DEFAULT_QUEUES = {
    "sort": list(SORTERS),
    "dijkstra": ["lapq-rank", "lapq-dirty", "binheap", "fibheap"],
}


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    suite: str = "sort-class"
    n: int = 1000
    grid: list = field(default_factory=list)  # empty: the suite default
    queues: list[str] = field(default_factory=list)  # empty: the suite default
    reps: int = 30
    seed: int = 0
    graph: str = ""  # edge-list path or pvt:<n>; empty: pvt:<n>
    out: str = "-"
    workers: int = 1
    timing: bool = False

    def validate(self) -> None:
        if self.suite not in SUITES:
            raise ConfigError(f"unknown suite {self.suite!r}; expected one of {', '.join(SUITES)}")
        if self.reps < 1:
            raise ConfigError("reps must be >= 1")
        if self.n < 1:
            raise ConfigError("n must be >= 1")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        allowed = SORTERS if self.family == "sort" else DIJKSTRA_QUEUES
        for q in self.queues:
            if q not in allowed:
                raise ConfigError(f"unknown queue {q!r} for {self.suite}; expected one of {', '.join(allowed)}")
        if not self.resolved_grid():
            raise ConfigError("grid must be non-empty")

    @property
    def family(self) -> str:
        return self.suite.split("-")[0]

    @property
    def setting(self) -> str:
        return self.suite.split("-")[1]

    def resolved_queues(self) -> list[str]:
        return list(self.queues) or DEFAULT_QUEUES[self.family]

    def resolved_grid(self) -> list:
        if self.grid:
            return list(self.grid)
        if self.setting == "keyrank":
            return [0]
        n = self.n
        if self.setting == "class":
            out, c = [], 1
            while c < n:
                out.append(c)
                c *= 4
            return out + ["n"]
        return [0, n, 4 * n, 16 * n, 64 * n, 256 * n]


def _parse_grid(text: str) -> list:
    out = []
    for tok in text.replace(",", " ").split():
        if tok == "n":
            out.append("n")
            continue
        try:
            v = int(tok)
        except ValueError:
            raise ConfigError(f"bad grid value {tok!r}") from None
        if v < 0:
            raise ConfigError(f"grid values must be >= 0, got {v}")
        out.append(v)
    return out


def _parse_bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off", ""):
        return False
    raise ConfigError(f"bad boolean {text!r}")


def _coerce(key: str, value: str):
    try:
        if key in ("n", "reps", "seed", "workers"):
            return int(value)
    except ValueError:
        raise ConfigError(f"{key} must be an integer, got {value!r}") from None
    if key == "grid":
        return _parse_grid(value)
    if key == "queues":
        return [q for q in value.replace(",", " ").split() if q]
    if key == "timing":
        return _parse_bool(value)
    return value.strip()


def read_config(path: str | Path) -> dict:
    """``key = value`` lines; ``#`` starts a comment."""
    known = {f.name for f in fields(ExperimentConfig)}
    out = {}
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e.strerror}") from None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in known:
            raise ConfigError(f"{path}:{lineno}: unknown setting {key!r}")
        out[key] = _coerce(key, value)
    return out


# -- running ----------------------------------------------------------------


def _grid_value(p, n: int) -> int:
    return n if p == "n" else p


def _graph_for(cfg: ExperimentConfig, rng: Rng, cache: dict) -> Graph:
    source = cfg.graph or f"pvt:{cfg.n}"
    if source.startswith("pvt:"):
        try:
            scale = float(source[4:])
        except ValueError:
            raise ConfigError(f"bad graph source {source!r}") from None
        return gen_pvt(scale, rng)  # a fresh tessellation per repetition
    if source not in cache:
        cache[source] = load_graph(source)
    return cache[source]


def _sort_unit(cfg: ExperimentConfig, p, rep: int) -> list[ExperimentRecord]:
    seed = cfg.seed + rep
    rng = Rng(seed)
    n = cfg.n
    values = rng.permutation(n)
    v = _grid_value(p, n)
    if cfg.setting == "class":
        if not 1 <= v <= n:
            raise ConfigError(f"class count {v} outside [1, {n}]")
        by_rank = gen_class(n, v, rng)
    else:
        by_rank = gen_decay(n, v, rng)
    predicted = [by_rank[x] for x in values]  # the key x has true rank x + 1
    out = []
    for q in cfg.resolved_queues():
        _, rec = run_sorter(q, values, predicted, rng.spawn(), parameter=p, seed=seed, timing=cfg.timing)
        out.append(rec)
    return out


def _dijkstra_unit(cfg: ExperimentConfig, p, rep: int, cache: dict) -> list[ExperimentRecord]:
    seed = cfg.seed + rep
    rng = Rng(seed)
    g = _graph_for(cfg, rng, cache)
    if g.n == 0:
        raise ConfigError("graph has no nodes")
    source = rng.randbelow(g.n)
    if cfg.setting == "keyrank":
        scheme = KeyRankScheme(g, rng.spawn())
    else:
        scheme = NodeRankScheme(g, source, cfg.setting, _grid_value(p, g.n), rng.spawn())
    out = []
    for q in cfg.resolved_queues():
        _, rec = dijkstra(g, source, q, scheme, rng.spawn(), parameter=p, seed=seed, timing=cfg.timing)
        out.append(rec)
    return out


def _unit(args: tuple[ExperimentConfig, object, int]) -> list[ExperimentRecord]:
    cfg, p, rep = args
    if cfg.family == "sort":
        return _sort_unit(cfg, p, rep)
    return _dijkstra_unit(cfg, p, rep, {})


def run_records(cfg: ExperimentConfig) -> list[ExperimentRecord]:
    cfg.validate()
    units = [(cfg, p, rep) for p in cfg.resolved_grid() for rep in range(cfg.reps)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as pool:
            chunks = list(pool.map(_unit, units))  # map keeps submission order
    else:
        cache: dict = {}
        chunks = [
            _sort_unit(c, p, r) if c.family == "sort" else _dijkstra_unit(c, p, r, cache)
            for c, p, r in units
        ]
    return [rec for chunk in chunks for rec in chunk]


def run(cfg: ExperimentConfig) -> str:
    """Run the configured suite; writes the CSV to ``cfg.out`` and returns it."""
    text = to_csv(run_records(cfg))
    if cfg.out in ("", "-"):
        sys.stdout.write(text)
    else:
        try:
            Path(cfg.out).write_text(text)
        except OSError as e:
            raise ConfigError(f"cannot write {cfg.out}: {e.strerror}") from None
    return text


# -- argument parsing -------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lapq", description="Learning-augmented priority queue experiments.")
    sub = ap.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run an experiment suite and write CSV")
    r.add_argument("--config", help="key = value settings file (flags override it)")
    r.add_argument("--suite", help=f"one of {', '.join(SUITES)}")
    r.add_argument("--n", type=int, help="number of keys, or PVT scale for Dijkstra suites")
    r.add_argument("--grid", help="class counts or decay steps, comma separated ('n' = n)")
    r.add_argument("--reps", type=int, help="repetitions per grid point (default 30)")
    r.add_argument("--seed", type=int, help="base seed; repetition r uses seed + r")
    r.add_argument("--queues", help="comma separated queue names")
    r.add_argument("--graph", help="edge-list path or pvt:<n>")
    r.add_argument("--out", help="output CSV path ('-' = stdout)")
    r.add_argument("--workers", type=int, help="worker processes")
    r.add_argument("--timing", action="store_const", const=True, help="fill the wall_time column")

    gg = sub.add_parser("gen-graph", help="write a PVT graph as an edge list")
    gg.add_argument("--n", type=float, default=1000.0, help="PVT scale")
    gg.add_argument("--seed", type=int, default=0)
    gg.add_argument("--out", default="-")
    return ap


def config_from_args(ns: argparse.Namespace) -> ExperimentConfig:
    values: dict = {}
    if ns.config:
        values.update(read_config(ns.config))
    for f in fields(ExperimentConfig):
        v = getattr(ns, f.name, None)
        if v is None:
            continue
        values[f.name] = _coerce(f.name, v) if isinstance(v, str) and f.name in ("grid", "queues") else v
    return ExperimentConfig(**values)


def main(argv: list[str] | None = None) -> int:
    ns = _parser().parse_args(argv)
    try:
        if ns.command == "gen-graph":
            g = gen_pvt(ns.n, Rng(ns.seed))
            if ns.out == "-":
                for u, v, w in g.edges():
                    sys.stdout.write(f"{u} {v} {w!r}\n")
            else:
                g.write(ns.out)
            return 0
        run(config_from_args(ns))
    except (ConfigError, GraphFormatError, OSError) as e:
        print(f"lapq: error: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
