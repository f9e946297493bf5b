#!/usr/bin/env python3
"""Plot the cells.csv written by a qlue sweep run."""

import argparse
import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import pandas as pd  # noqa: E402


def plot_sweep(df, x, group, ax, ylabel="mean_FH"):
    for key, sub in df.groupby(group):
        sub = sub.sort_values(x)
        ax.errorbar(sub[x], sub["mean_FH"], yerr=sub["std_FH"], marker="o", capsize=3, label=f"{group}={key}")
    ax.set_xlabel(x)
    ax.set_ylabel("F_H")
    ax.set_ylim(-0.05, 1.05)
    ax.legend()


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("run_dir", type=pathlib.Path)
    ap.add_argument("-o", "--out", type=pathlib.Path, default=None)
    args = ap.parse_args()

    df = pd.read_csv(args.run_dir / "cells.csv")
    fig, ax = plt.subplots(figsize=(6, 4))
    if {"sigma", "ratio"} <= set(df.columns):
        plot_sweep(df, "ratio", "sigma", ax)
        ax.set_xlabel("N_N / N_C")
    elif {"r_over_sigma", "n1_over_n2"} <= set(df.columns):
        plot_sweep(df, "r_over_sigma", "n1_over_n2", ax)
        ax.set_xlabel("r / sigma")
    elif "quantum_calls" in df.columns:
        for a, sub in df.groupby("a"):
            sub = sub.sort_values("m")
            ax.loglog(sub["m"], sub["classical_calls"], "-o", label=f"classical a={a}")
            ax.loglog(sub["m"], sub["quantum_calls"], "--s", label=f"Grover a={a}")
        ax.set_xlabel("m = a^d")
        ax.set_ylabel("oracle calls")
        ax.legend()
    elif {"dataset", "profile"} <= set(df.columns):
        labels = [f"{d}\n{p}" for d, p in zip(df["dataset"], df["profile"])]
        ax.bar(labels, df["mean_FC"], yerr=df["std_FC"], capsize=3)
        ax.set_ylabel("F_C")
    else:
        raise SystemExit("unrecognised cells.csv layout")

    fig.tight_layout()
    out = args.out or args.run_dir / "plot.png"
    fig.savefig(out, dpi=150)
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
