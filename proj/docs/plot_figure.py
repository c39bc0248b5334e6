#!/usr/bin/env python3
"""Plot a `zipfkit fig` CSV (series,rank,frequency) on log-log axes.

    python3 docs/plot_figure.py zipfkit-out/fig3.csv -o fig3.png
"""
import argparse

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import pandas as pd  # noqa: E402


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("csv")
    ap.add_argument("-o", "--output", default="figure.png")
    args = ap.parse_args()

    df = pd.read_csv(args.csv, keep_default_na=False)
    has_gap = (df["series"] == "delta").any()
    fig, axes = plt.subplots(2 if has_gap else 1, 1, figsize=(6, 7 if has_gap else 5), squeeze=False)
    ax = axes[0][0]
    for name, s in df[df["series"] != "delta"].groupby("series", sort=False):
        if name.endswith("/breakpoint"):
            ax.plot(s["rank"], s["frequency"], "kx", markersize=9, label=name)
        elif "/" in name or name == "reference":
            ax.plot(s["rank"], s["frequency"], "--", linewidth=1, label=name)
        else:
            ax.plot(s["rank"], s["frequency"], ".", markersize=2, label=name)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("rank")
    ax.set_ylabel("frequency")
    ax.legend(fontsize=7)
    if has_gap:
        g = df[df["series"] == "delta"]
        gap_ax = axes[1][0]
        gap_ax.plot(g["rank"], g["frequency"], "-")
        gap_ax.axhline(0, color="grey", linewidth=0.5)
        gap_ax.set_xscale("log")
        gap_ax.set_xlabel("rank")
        gap_ax.set_ylabel("log10 gap")
    fig.tight_layout()
    fig.savefig(args.output, dpi=150)


if __name__ == "__main__":
    main()
