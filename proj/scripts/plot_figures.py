#!/usr/bin/env python3
# Copyright 2026 The qsml Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Render the CSV tables written by `qsml reproduce` as PNG figures.

    python3 scripts/plot_figures.py qsml-out/fig2c [qsml-out/fig4b ...]
"""

import argparse
import csv
import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def read(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


def plot_summary(path, out):
    rows = read(path)
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for name in dict.fromkeys(r["scenario"] for r in rows):
        sel = [r for r in rows if r["scenario"] == name]
        n = [int(r["n_samples"]) for r in sel]
        med = [float(r["median_acc"]) for r in sel]
        lo = [float(r["q1"]) for r in sel]
        hi = [float(r["q3"]) for r in sel]
        ax.plot(n, med, marker="o", label=name)
        ax.fill_between(n, lo, hi, alpha=0.2)
    ax.set_xlabel("training samples")
    ax.set_ylabel("accuracy")
    ax.set_ylim(0, 1.05)
    ax.legend()
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    plt.close(fig)


def plot_confusion(path, out):
    rows = read(path)
    labels = ["+1", "-1"]
    grid = [[0.0, 0.0], [0.0, 0.0]]
    for r in rows:
        t = 0 if int(r["true_label"]) == 1 else 1
        p = 0 if int(r["predicted_label"]) == 1 else 1
        grid[t][p] = float(r["count"])
    fig, ax = plt.subplots(figsize=(3.2, 3))
    ax.imshow(grid, cmap="Blues")
    for t in range(2):
        for p in range(2):
            ax.text(p, t, f"{grid[t][p]:.2f}", ha="center", va="center")
    ax.set_xticks([0, 1], labels)
    ax.set_yticks([0, 1], labels)
    ax.set_xlabel("predicted")
    ax.set_ylabel("true")
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    plt.close(fig)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("dirs", nargs="+", type=pathlib.Path)
    args = ap.parse_args()
    for d in args.dirs:
        summary = d / "learning_summary.csv"
        if summary.exists():
            plot_summary(summary, d / "learning_curve.png")
            print(d / "learning_curve.png")
        for conf in sorted(d.glob("confusion_*.csv")):
            png = conf.with_suffix(".png")
            plot_confusion(conf, png)
            print(png)


if __name__ == "__main__":
    main()
