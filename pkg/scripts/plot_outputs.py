"""Plot a simulate run: profiles from snapshots.csv and error/energy histories from series.jsonl.

Needs matplotlib (``pip install rarewave[plot]``).
"""
import argparse
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from rarewave.output import read_series, read_snapshots  # noqa: E402


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("run_dir", help="output directory of `rarewave simulate`")
    args = parser.parse_args()
    run = Path(args.run_dir)
    snaps = read_snapshots(run / "snapshots.csv")
    series = read_series(run / "series.jsonl")

    fig, axes = plt.subplots(1, 3, figsize=(14, 4))
    for t in np.unique(snaps[:, 0]):
        rows = snaps[snaps[:, 0] == t]
        for ax, col, name in zip(axes, (2, 3, 4), ("v", "u", "s")):
            ax.plot(rows[:, 1], rows[:, col], lw=0.8, label=f"t={t:g}")
            ax.set_xlabel("x")
            ax.set_title(name)
    axes[0].legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(run / "profiles.png", dpi=120)

    t = np.array([r["t"] for r in series])
    later = t > 0
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
    for key in ("err.sup_v", "err.sup_u", "err.sup_s"):
        ax1.loglog(t[later], [r[key] for r in series if r["t"] > 0], "o-", label=key)
    ax1.set_xlabel("t")
    ax1.legend()
    for key in ("E", "E1", "E2"):
        ax2.plot(t, [r[key] for r in series], "o-", label=key)
    ax2.set_xlabel("t")
    ax2.legend()
    fig.tight_layout()
    fig.savefig(run / "histories.png", dpi=120)
    print(f"wrote {run / 'profiles.png'} and {run / 'histories.png'}")


if __name__ == "__main__":
    main()
