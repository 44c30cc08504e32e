#!/usr/bin/env python3
"""Plot the determinant time series written by `spinrecon fig1`.

    spinrecon fig1 --output-path delta.csv
    python3 scripts/plot_fig1.py delta.csv -o delta.png
"""

import argparse

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("csv")
    parser.add_argument("-o", "--output", default="delta.png")
    args = parser.parse_args()

    with open(args.csv) as fh:
        schema = fh.readline().strip()
        if not schema.startswith("# schema: spinrecon.fig1/"):
            raise SystemExit(f"unexpected schema line: {schema!r}")
        header = fh.readline().strip().split(",")
    data = np.loadtxt(args.csv, delimiter=",", skiprows=2, ndmin=2)

    fig, ax = plt.subplots(figsize=(7, 4))
    for col, name in enumerate(header[1:], start=1):
        ax.plot(data[:, 0], data[:, col], lw=0.8, label="|alpha|^2 = " + name.removeprefix("delta_a"))
    ax.set_xlabel("t")
    ax.set_ylabel("Delta(t)")
    ax.legend()
    fig.tight_layout()
    fig.savefig(args.output, dpi=150)


if __name__ == "__main__":
    main()
