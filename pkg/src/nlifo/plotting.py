"""Self-contained SVG figures with deterministic output."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

_RC = {"svg.hashsalt": "nlifo", "svg.fonttype": "path", "figure.figsize": (7.0, 4.2)}
_META = {"Date": None, "Creator": None}


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata=_META)
    plt.close(fig)


def plot_spectrum(wavelength, curves: dict, path, title: str = "", ylabel: str = "normalized intensity"):
    """Line plot of one or more curves against signal wavelength (m, shown in nm)."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        for label, values in curves.items():
            ax.plot(np.asarray(wavelength) * 1e9, values, label=label, lw=1.2)
        ax.set_xlabel("signal wavelength (nm)")
        ax.set_ylabel(ylabel)
        if title:
            ax.set_title(title)
        if len(curves) > 1:
            ax.legend(fontsize=8)
        _save(fig, path)


def plot_interferogram(ifg, path, title: str = ""):
    """Heatmap of normalized intensity over signal wavelength and idler OPD."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        lam = np.asarray(ifg.wavelength_axis) * 1e9
        opd = np.asarray(ifg.opd_axis) * 1e3
        # raster image embedded in the SVG; a vector mesh of every cell is unwieldy
        mesh = ax.imshow(
            ifg.values,
            origin="lower",
            aspect="auto",
            extent=(lam[0], lam[-1], opd[0], opd[-1]),
            cmap="viridis",
            vmin=0.0,
            vmax=1.0,
            interpolation="nearest",
        )
        fig.colorbar(mesh, ax=ax, label="normalized intensity")
        ax.set_xlabel("signal wavelength (nm)")
        ax.set_ylabel("idler OPD (mm)")
        if title:
            ax.set_title(title)
        _save(fig, path)


def plot_visibility(trace, path, title: str = "", reference: dict | None = None):
    """Visibility against wavelength, with optional reference curves."""
    curves = {"numeric": trace.v}
    if reference:
        curves.update(reference)
    plot_spectrum(trace.wavelength_axis, curves, path, title, ylabel="visibility")
