"""Monte Carlo size and power of the IID test over grids of simulation models.

Repetition ``r`` of a cell draws its data seed and its bootstrap seed from
two disjoint domains of the master seed, so a cell's result depends only on
``(spec, replications, B, alpha, master_seed, kernel)``. Cells neither share
state nor depend on their position in a grid.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from typing import Dict, List, Optional, Sequence

import csv
import io
import itertools
import logging
import multiprocessing
import time

from . import _accel, rng
from .api import iid_test
from .bootstrap import BootstrapConfig
from .dgp import ALL_PARAMS, DgpSpec, generate
from .kernel import Kernel

try:  # Python >= 3.11
    import tomllib
except ModuleNotFoundError:  # pragma: no cover - depends on interpreter
    import tomli as tomllib

log = logging.getLogger(__name__)

CSV_FIELDS = (
    "model", "n", "p", *ALL_PARAMS, "replications", "B", "alpha", "kernel", "seed",
    "rejections", "proportion", "wall_time",
)


@dataclass(frozen=True)
class PowerCell:
    spec: DgpSpec
    replications: int
    B: int
    alpha: float
    rejections: int
    kernel: str = "expneg"
    seed: int = 0
    wall_time: float = 0.0

    @property
    def proportion(self) -> float:
        return self.rejections / self.replications

    def row(self) -> Dict[str, object]:
        out = {"model": self.spec.model, "n": self.spec.n, "p": self.spec.p}
        for name in ALL_PARAMS:
            out[name] = self.spec.params.get(name, "")
        out.update(
            replications=self.replications, B=self.B, alpha=self.alpha, kernel=self.kernel,
            seed=self.seed, rejections=self.rejections, proportion=self.proportion,
            wall_time=f"{self.wall_time:.3f}",
        )
        return out


@dataclass
class PowerTable:
    cells: List[PowerCell]
    metadata: Dict[str, object] = field(default_factory=dict)

    def __post_init__(self):
        keys = [c.spec.key() for c in self.cells]
        if len(set(keys)) != len(keys):
            raise ValueError("duplicate (model, params, n) cells in table")

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
        writer.writeheader()
        for cell in self.cells:
            writer.writerow(cell.row())
        return buf.getvalue()

    def to_markdown(self) -> str:
        """Rejection percentages laid out one block per model, one column per n."""
        blocks = []
        for model in dict.fromkeys(c.spec.model for c in self.cells):
            cells = [c for c in self.cells if c.spec.model == model]
            ns = sorted({c.spec.n for c in cells})
            labels = list(dict.fromkeys(_param_label(c.spec) for c in cells))
            lookup = {(_param_label(c.spec), c.spec.n): c for c in cells}
            lines = [f"### {model}", "", "| params | " + " | ".join(f"n={n}" for n in ns) + " |",
                     "|---|" + "---:|" * len(ns)]
            for label in labels:
                vals = []
                for n in ns:
                    cell = lookup.get((label, n))
                    vals.append(f"{100 * cell.proportion:.1f}" if cell else "")
                lines.append(f"| {label or '-'} | " + " | ".join(vals) + " |")
            blocks.append("\n".join(lines))
        return "\n\n".join(blocks) + "\n"


def _param_label(spec):
    return ", ".join(f"{k}={v:g}" for k, v in sorted(spec.params.items()))


def replicate_rejects(spec: DgpSpec, r: int, B: int, alpha: float, master_seed: int,
                      kernel: Kernel, path: str = "fast") -> bool:
    data_seed = rng.derive_seed(master_seed, rng.DOMAIN_MC_DATA, r)
    boot_seed = rng.derive_seed(master_seed, rng.DOMAIN_MC_BOOTSTRAP, r)
    obs = generate(replace(spec, seed=data_seed))
    cfg = BootstrapConfig(B=B, alpha=alpha, seed=boot_seed, path=path)
    return iid_test(obs, kernel, cfg).reject


def _count_chunk(args):
    spec, indices, B, alpha, master_seed, kernel, path = args
    return sum(replicate_rejects(spec, r, B, alpha, master_seed, kernel, path) for r in indices)


def _chunks(count, parts):
    parts = max(1, min(parts, count))
    return [range(start, count, parts) for start in range(parts)]


def run_cell(spec: DgpSpec, replications: int = 200, B: int = 300, alpha: float = 0.05,
             master_seed: int = 0, kernel: Kernel = Kernel("expneg"), workers: int = 1,
             path: str = "fast") -> PowerCell:
    """Empirical rejection rate of the test at level ``alpha`` under ``spec``."""
    if replications < 1:
        raise ValueError("replications must be >= 1")
    start = time.perf_counter()
    try:
        if workers <= 1:
            rejections = _count_chunk((spec, range(replications), B, alpha, master_seed, kernel, path))
        else:
            jobs = [(spec, idx, B, alpha, master_seed, kernel, path)
                    for idx in _chunks(replications, workers)]
            ctx = multiprocessing.get_context("spawn")
            with ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as pool:
                rejections = sum(pool.map(_count_chunk, jobs))
    except Exception as exc:
        raise RuntimeError(f"Monte Carlo cell {spec.key()} failed: {exc}") from exc
    elapsed = time.perf_counter() - start
    log.info("cell %s: %d/%d rejections in %.1fs", spec.key(), rejections, replications, elapsed)
    return PowerCell(spec=spec, replications=replications, B=B, alpha=alpha,
                     rejections=int(rejections), kernel=kernel.descriptor,
                     seed=master_seed, wall_time=elapsed)


@dataclass(frozen=True)
class CellPlan:
    spec: DgpSpec
    replications: int


def run_table(grid: Sequence, replications: int = 200, B: int = 300, alpha: float = 0.05,
              master_seed: int = 0, kernel: Kernel = Kernel("expneg"), workers: int = 1,
              path: str = "fast") -> PowerTable:
    """One cell per entry of ``grid`` (``DgpSpec`` or ``CellPlan``)."""
    if not grid:
        raise ValueError("empty grid")
    cells = []
    for item in grid:
        spec, reps = (item.spec, item.replications) if isinstance(item, CellPlan) else (item, replications)
        cells.append(run_cell(spec, reps, B, alpha, master_seed, kernel, workers, path))
    meta = {
        "kernel": kernel.descriptor,
        "seed_policy": "per-repetition seeds derived from (master_seed, domain, repetition)",
        "master_seed": master_seed,
        "rng_scheme": rng.RNG_SCHEME,
        "backend": _accel.backend_name(),
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }
    return PowerTable(cells=cells, metadata=meta)


# ---------------------------------------------------------------------------
# Declarative configs
# ---------------------------------------------------------------------------

@dataclass
class PowerConfig:
    plans: List[CellPlan]
    B: int = 300
    alpha: float = 0.05
    seed: int = 0
    kernel: str = "expneg"


def _as_list(value):
    return list(value) if isinstance(value, (list, tuple)) else [value]


def parse_config(doc: dict) -> PowerConfig:
    """Expand a config mapping into cell plans.

    ``[settings]`` holds ``replications``, ``B``, ``alpha``, ``seed``,
    ``kernel`` and ``p``. Each ``[[grid]]`` entry names a ``model`` and lists
    ``n`` and any model parameters; every combination becomes one cell. An
    entry may override ``replications`` and ``p``.
    """
    settings = dict(doc.get("settings", {}))
    unknown = set(settings) - {"replications", "B", "alpha", "seed", "kernel", "p"}
    if unknown:
        raise ValueError(f"unknown settings {sorted(unknown)}")
    reps = int(settings.get("replications", 200))
    p_default = int(settings.get("p", 5))
    plans = []
    for entry in doc.get("grid", []):
        entry = dict(entry)
        model = entry.pop("model")
        ns = _as_list(entry.pop("n"))
        cell_reps = int(entry.pop("replications", reps))
        p = int(entry.pop("p", p_default))
        names = sorted(entry)
        for n in ns:
            for values in itertools.product(*(_as_list(entry[k]) for k in names)):
                spec = DgpSpec(model=model, n=int(n), p=p, params=dict(zip(names, values)))
                plans.append(CellPlan(spec, cell_reps))
    if not plans:
        raise ValueError("config defines no cells")
    return PowerConfig(
        plans=plans,
        B=int(settings.get("B", 300)),
        alpha=float(settings.get("alpha", 0.05)),
        seed=rng.check_seed(settings.get("seed", 0)),
        kernel=str(settings.get("kernel", "expneg")),
    )


def load_config(path) -> PowerConfig:
    """Read a TOML config from a filesystem path or a package resource."""
    with (path.open("rb") if hasattr(path, "open") else open(path, "rb")) as fh:
        return parse_config(tomllib.load(fh))


def preset_path(name: str):
    from importlib import resources

    res = resources.files("odsup") / "configs" / f"{name}.toml"
    if not res.is_file():
        raise FileNotFoundError(f"no shipped config named {name!r}")
    return res


def run_config(config: PowerConfig, workers: int = 1, limit: Optional[int] = None) -> PowerTable:
    plans = config.plans if limit is None else config.plans[:limit]
    return run_table(plans, B=config.B, alpha=config.alpha, master_seed=config.seed,
                     kernel=Kernel(config.kernel), workers=workers)
