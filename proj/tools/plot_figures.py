"""Plot the CSV/JSON outputs of the resbasis CLI.

    python tools/plot_figures.py modes   profiles.csv       out.png
    python tools/plot_figures.py omega   sweep_omega.csv    out.png
    python tools/plot_figures.py mu      sweep_mu.csv       out.png
    python tools/plot_figures.py errors  fit.json           out.png
    python tools/plot_figures.py recon   recon_n10.csv      out.png
"""

import argparse
import json

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import pandas as pd  # noqa: E402


def plot_modes(path, ax):
    df = pd.read_csv(path)
    for n, g in df.groupby("n"):
        ax[0].plot(g["r"], g["s_par"], label=f"N={n}")
        ax[1].plot(g["r"], g["s_perp"], label=f"N={n}")
    ax[0].set_ylabel("S_par")
    ax[1].set_ylabel("S_perp")
    ax[0].legend()


def plot_omega(path, ax):
    df = pd.read_csv(path)
    for n, g in df.groupby("n"):
        ax[0].plot(g["p"], g["omega"] / n, label=f"N={int(n)}")
    ax[0].set_xlabel("p")
    ax[0].set_ylabel("omega / N")
    ax[0].legend()


def plot_mu(path, ax):
    df = pd.read_csv(path)
    grid = df.pivot(index="r", columns="p", values="mu")
    mesh = ax[0].pcolormesh(grid.columns, grid.index, grid.values, shading="auto", cmap="RdBu_r")
    plt.colorbar(mesh, ax=ax[0], label="mu")
    ax[0].set_xlabel("p")
    ax[0].set_ylabel("r")


def plot_errors(path, ax):
    with open(path) as f:
        rep = json.load(f)
    n = np.arange(1, rep["n_max"] + 1)
    ax[0].loglog(n, rep["e_l2"], label="e_l2")
    if rep["e_h1"] is not None:
        ax[0].loglog(n, rep["e_h1"], label="e_h1")
    ax[0].set_xlabel("n")
    ax[0].legend()
    b = np.abs(rep["coefficients"])
    ax[1].loglog(n[::2], b[::2], ".", label="odd N")
    ax[1].loglog(n[1::2], b[1::2], ".", label="even N")
    ax[1].set_ylabel("|b_N|")
    ax[1].legend()


def plot_recon(path, ax):
    df = pd.read_csv(path)
    ax[0].plot(df["r"], df["target_par"], "k", label="target")
    ax[0].plot(df["r"], df["approx_par"], "--", label="approximation")
    ax[1].plot(df["r"], df["target_perp"], "k")
    ax[1].plot(df["r"], df["approx_perp"], "--")
    ax[0].set_ylabel("S_par")
    ax[1].set_ylabel("S_perp")
    ax[0].legend()


PLOTS = {
    "modes": (plot_modes, 2),
    "omega": (plot_omega, 1),
    "mu": (plot_mu, 1),
    "errors": (plot_errors, 2),
    "recon": (plot_recon, 2),
}


def main():
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("kind", choices=sorted(PLOTS))
    parser.add_argument("input")
    parser.add_argument("output")
    args = parser.parse_args()
    fn, panels = PLOTS[args.kind]
    fig, ax = plt.subplots(1, panels, figsize=(5 * panels, 4), squeeze=False)
    fn(args.input, ax[0])
    fig.tight_layout()
    fig.savefig(args.output, dpi=120)


if __name__ == "__main__":
    main()
