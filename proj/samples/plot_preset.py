#!/usr/bin/env python3
"""Plot a qcap sweep CSV.

    qcap sweep --preset fig2a --oracle gaussian --out fig2a.csv
    python3 samples/plot_preset.py fig2a.csv fig2a.png

Needs matplotlib. Comment lines (starting with '#') are skipped.
"""

import csv
import sys

import matplotlib.pyplot as plt


def read_columns(path):
    with open(path, newline="") as f:
        rows = list(csv.DictReader(line for line in f if not line.startswith("#")))
    cols = {}
    for name in rows[0]:
        if name == "flags":
            continue
        cols[name] = [float(r[name]) if r[name] else float("nan") for r in rows]
    return cols


def main():
    if len(sys.argv) != 3:
        sys.exit("usage: plot_preset.py SWEEP.csv OUT.png")
    cols = read_columns(sys.argv[1])
    n = cols.pop("N")
    styles = {"q_u1": "-", "q_u2": "--", "q_l_clamped": "-.", "i_c_gaussian": ":", "i_c_fock": ":"}
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for name, style in styles.items():
        if name in cols:
            ax.plot(n, cols[name], style, label=name)
    ax.set_xlabel("N")
    ax.set_ylabel("Q (bits)")
    ax.legend()
    fig.tight_layout()
    fig.savefig(sys.argv[2], dpi=150)


if __name__ == "__main__":
    main()
