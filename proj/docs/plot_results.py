#!/usr/bin/env python3
"""Render the CSV outputs of the srbath CLI with matplotlib.

Examples:
    python3 docs/plot_results.py spectra out/compare.csv
    python3 docs/plot_results.py dynamics out/dynamics.csv
    python3 docs/plot_results.py kernel out/kernel.csv
"""

import sys

import matplotlib.pyplot as plt
import pandas as pd


def load(path):
    return pd.read_csv(path, comment="#")


def plot_spectra(path):
    df = load(path)
    fig, ax = plt.subplots(figsize=(7, 4))
    for col in df.columns[1:]:
        ax.plot(df.iloc[:, 0], df[col], label=col, lw=1.0)
    ax.set_xlabel("frequency (cm$^{-1}$)")
    ax.set_ylabel("J($\\omega$)")
    ax.legend()
    return fig


def plot_dynamics(path):
    df = load(path)
    fig, ax = plt.subplots(figsize=(7, 4))
    for col in df.columns[1:]:
        ax.plot(df["time_fs"] / 1000.0, df[col], label=col, lw=1.0)
    ax.set_xlabel("time (ps)")
    ax.set_ylabel("population / coherence")
    ax.legend(fontsize=8)
    return fig


def plot_kernel(path):
    df = load(path)
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(df["t_fs"], df["re_D"], label="Re D(t)")
    ax.plot(df["t_fs"], df["im_D"], label="Im D(t)")
    ax.set_xlabel("t (fs)")
    ax.set_ylabel("D(t) (cm$^{-2}$)")
    ax.legend()
    return fig


def main():
    if len(sys.argv) != 3 or sys.argv[1] not in {"spectra", "dynamics", "kernel"}:
        print(__doc__)
        return 2
    kind, path = sys.argv[1], sys.argv[2]
    fig = {"spectra": plot_spectra, "dynamics": plot_dynamics,
           "kernel": plot_kernel}[kind](path)
    out = path.rsplit(".", 1)[0] + ".png"
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
