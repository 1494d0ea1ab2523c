"""Three-formulation equivalence suite.

Cross-checks, over a grid of random graphs:
  1. iterative ego propagation == tiled intra step + aggregation (<= 1e-9
     relative),
  2. supra propagation with the inter-layer term zeroed == tiled intra steps
     (<= 1e-12, small graphs only),
  3. the iterative path's memory contract (peak dense rows <= 2|V|).
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .multiplex import build_supra, supra_propagate, tiled_aggregate, tiled_intra_step
from .propagation import PropagationReport, ego_step_raw
from .rng import derive_seed
from .sbm import generate_er

TILED_VS_ITERATIVE_TOL = 1e-9
SUPRA_VS_TILED_TOL = 1e-12

DEFAULT_SIZES = (8, 16, 32, 64)
DEFAULT_DENSITIES = (0.1, 0.3, 0.6)
DEFAULT_P_VALUES = (1, 2, 3)
DEFAULT_N_SEEDS = 20


@dataclass(frozen=True)
class VerifyCase:
    n: int
    density: float
    p: int
    seed: int
    tiled_vs_iterative: float
    supra_vs_tiled: float | None
    peak_block_rows: int
    ok: bool


def _rel_dev(a, b):
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(b), 1.0), initial=0.0))


def run_equivalence_suite(sizes=DEFAULT_SIZES, densities=DEFAULT_DENSITIES,
                          p_values=DEFAULT_P_VALUES, n_seeds=DEFAULT_N_SEEDS,
                          supra_max_n=16, f=4):
    cases = []
    for n in sizes:
        for density in densities:
            for seed in range(n_seeds):
                g = generate_er(n, density, derive_seed(seed, n, int(density * 100)))
                h_rng = np.random.default_rng(derive_seed(seed, n, 7))
                h = h_rng.uniform(0.1, 1.0, size=(n, f))
                for p in p_values:
                    tiled = tiled_intra_step(g, h, p)
                    agg = tiled_aggregate(g, tiled)
                    report = PropagationReport()
                    iterative = ego_step_raw(g, h, p, report=report)
                    dev = _rel_dev(iterative, agg)
                    supra_dev = None
                    if n <= supra_max_n:
                        s = build_supra(g, include_inter=False)
                        supra_out = supra_propagate(s, h, steps=p)
                        supra_dev = float(np.max(np.abs(supra_out - tiled.data),
                                                 initial=0.0))
                    ok = (dev <= TILED_VS_ITERATIVE_TOL
                          and report.peak_block_rows <= 2 * n
                          and (supra_dev is None or supra_dev <= SUPRA_VS_TILED_TOL))
                    cases.append(VerifyCase(n, density, p, seed, dev, supra_dev,
                                            report.peak_block_rows, ok))
    failures = [c for c in cases if not c.ok]
    return {
        "pass": not failures,
        "cases_run": len(cases),
        "max_tiled_vs_iterative": max(c.tiled_vs_iterative for c in cases),
        "max_supra_vs_tiled": max((c.supra_vs_tiled for c in cases
                                   if c.supra_vs_tiled is not None), default=None),
        "max_peak_block_rows_ratio": max(c.peak_block_rows / c.n for c in cases),
        "failures": [asdict(c) for c in failures],
    }
