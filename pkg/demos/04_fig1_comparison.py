"""Expansion, printed series and RK4 on the published setup over [0, 10].

Plots when matplotlib is available (``pip install -e .[demos]``), otherwise
prints the summary only.
"""
# %%
import io

import numpy as np

from hpm_ecoepi.cli import RunConfig, run_compare
from hpm_ecoepi.model import FIG1_PARAMS, FIG1_STATE

config = RunConfig(FIG1_PARAMS, FIG1_STATE, order=2, t_end=10.0, step=1e-3, output_grid=201)
buf = io.StringIO()
summary = run_compare(config, buf)
print(summary.format())

# %%
buf.seek(0)
data = np.genfromtxt(buf, delimiter=",", names=True)

try:
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, axes = plt.subplots(1, 3, figsize=(12, 3.5), sharex=True)
    for ax, var in zip(axes, "SIP"):
        ax.plot(data["t"], data[f"{var}_num"], "k-", label="RK4")
        ax.plot(data["t"], data[f"{var}_hpm"], "C0--", label="expansion")
        ax.plot(data["t"], data[f"{var}_paper"], "C3:", label="printed")
        ax.set_title(var)
        ax.set_xlabel("t")
    axes[0].legend()
    fig.tight_layout()
    plt.show()
