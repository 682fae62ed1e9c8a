"""Render sweep tables to image files (non-interactive backend)."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .tables import Table  # noqa: E402

# (x column, y columns, log-x, log-y)
LAYOUT = {
    "fn_ratio": ("n", ("ratio_lower", "k"), True, False),
    "gn_ratio": ("p", ("ratio_lower", "sqrt_n_minus_1"), True, False),
    "eps_step": ("N", ("loss_linint_prime", "bound"), True, True),
    "scaling": ("R", ("ratio", "expected"), True, True),
    "slow_decay": ("N", ("loss_linint", "bound", "harmonic"), True, False),
}


def plot_table(table: Table, path) -> None:
    xcol, ycols, logx, logy = LAYOUT.get(table.name, (table.columns[0], table.columns[1:], False, False))
    fig, ax = plt.subplots(figsize=(5, 3.5))
    xs = [r[xcol] for r in table.rows]
    for col in ycols:
        ax.plot(xs, [r[col] for r in table.rows], marker="o", label=col)
    if logx:
        ax.set_xscale("log")
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel(xcol)
    ax.set_title(table.name)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
