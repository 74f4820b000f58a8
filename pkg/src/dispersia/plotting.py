"""Figure rendering for sweep reports."""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def render_sweep_figure(rows, parameter: str, path: str):
    """Log-log |energy| and |force| against the swept parameter, per backend.

    Rows with failed status or non-positive magnitudes are skipped.
    """
    backends = sorted({r.backend for r in rows if r.status == "ok"})
    fig, (ax_u, ax_f) = plt.subplots(1, 2, figsize=(9.0, 3.6))
    for backend in backends:
        pts = [(r.parameter, abs(r.energy), abs(r.force)) for r in rows
               if r.backend == backend and r.status == "ok"
               and math.isfinite(r.energy)]
        if not pts:
            continue
        xs, us, fs = zip(*pts)
        ax_u.loglog(xs, us, "o-", label=backend)
        ax_f.loglog(xs, fs, "s--", label=backend)
    ax_u.set_xlabel(parameter)
    ax_u.set_ylabel("|energy|")
    ax_f.set_xlabel(parameter)
    ax_f.set_ylabel("|force|")
    for ax in (ax_u, ax_f):
        ax.grid(True, which="both", alpha=0.3)
        ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
