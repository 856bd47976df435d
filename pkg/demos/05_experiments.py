"""
Running the canonical experiments
=================================

The experiments module bundles twelve named configurations (step and
bump profiles, scattering and finite-radius modes, an ensemble depth
study, and iteration traces) and writes deterministic CSV output plus a
manifest. Reruns with the same configuration are byte-identical.

The same runs are available from the command line:

    radialborn experiment 1 --out runs/
"""

import json
import tempfile
from pathlib import Path

from radialborn.experiments import experiment_config, run_experiment

# Desk-scale configuration for experiment 1 (step conductivities).
cfg = experiment_config(1)
print("experiment 1 defaults:", cfg.terms, "terms,", cfg.prec, "bits,",
      cfg.grid_n, "grid points")

# Run a reduced version into a temporary directory.
out = Path(tempfile.mkdtemp()) / "exp1"
written = run_experiment(1, out, terms=40, prec=128, grid_n=48, pieces=120)
print("files written:")
for path in written:
    print(" ", path.name)

manifest = json.loads((out / "manifest.json").read_text())
print("manifest config terms:", manifest["config"]["terms"])
