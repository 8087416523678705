"""SVG figures of ROC regions and curves.

Every figure is 640 x 640 on the unit square (except the coefficient scan),
uses the fixed palette in :data:`COLORS` and is written without a timestamp,
so repeated runs produce identical files.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

SIZE_IN = 640 / 72

COLORS = {
    "region_fill": "#dbe7f3",
    "region_edge": "#4a6fa5",
    "optimal": "#1b3a6b",
    "ellipse": "#555555",
    "inaccessible": "#d62728",
    "helstrom": "#1f77b4",
    "mixture": "#17becf",
    "classical": "#2ca02c",
    "touch": "#ff7f0e",
    "fidelity": "#9467bd",
    "bhattacharyya": "#1f77b4",
    "sqrt_fidelity": "#d62728",
    "diagonal": "#aaaaaa",
}

# one color per projector rank, rank 0 .. 8; higher ranks cycle
RANK_COLORS = ["#000000", "#e41a1c", "#377eb8", "#4daf4a", "#984ea3",
               "#ff7f00", "#a65628", "#f781bf", "#999999"]


def rank_color(r: int) -> str:
    return RANK_COLORS[r % len(RANK_COLORS)]


def _unit_axes(title: str):
    plt.rcParams["svg.hashsalt"] = "qroc"
    plt.rcParams["svg.fonttype"] = "none"
    fig, ax = plt.subplots(figsize=(SIZE_IN, SIZE_IN), dpi=72)
    ax.set_xlim(-0.02, 1.02)
    ax.set_ylim(-0.02, 1.02)
    ax.set_aspect("equal")
    ax.set_xlabel("FP")
    ax.set_ylabel("TP")
    ax.set_title(title)
    ax.plot([0, 1], [0, 1], color=COLORS["diagonal"], lw=0.8, ls=":")
    ax.plot([0, 1, 1, 0, 0], [0, 0, 1, 1, 0], color="black", lw=0.6)
    return fig, ax


def _save(fig, path) -> Path:
    path = Path(path)
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path


def classical_region(region, curve, path) -> Path:
    """Parallelogram of binary classifiers and the optimal broken line."""
    fig, ax = _unit_axes("Binary ROC region")
    poly = np.asarray(region)
    ax.fill(poly[:, 0], poly[:, 1], facecolor=COLORS["region_fill"],
            edgecolor=COLORS["region_edge"], lw=1.0, label="feasible region")
    c = np.asarray(curve)
    ax.plot(c[:, 0], c[:, 1], color=COLORS["optimal"], lw=2.0, marker="o", ms=4, label="optimal ROC")
    ax.legend(loc="lower right")
    return _save(fig, path)


def pure_state_figure(ellipse, accessible, sweep_points, sweep_complements, mixture,
                      classical_region_pts, touch_points, path) -> Path:
    """Measurement ellipse of two pure qubits.

    ``accessible`` flags ellipse points reached by a Helstrom measurement or
    its complement; the remaining arcs are drawn dashed red. ``mixture`` is an
    ``(n, d, 2)`` array of spectral-projector points of prior mixtures.
    """
    fig, ax = _unit_axes("Pure-state ROC ellipse")
    e = np.asarray(ellipse)
    acc = np.asarray(accessible, dtype=bool)
    closed = np.vstack([e, e[:1]])
    acc_c = np.append(acc, acc[:1])
    for mask, style, color, label in ((acc_c, "-", COLORS["ellipse"], "Helstrom-accessible"),
                                      (~acc_c, "--", COLORS["inaccessible"], "not Helstrom-accessible")):
        arc = np.where(mask[:, None], closed, np.nan)
        ax.plot(arc[:, 0], arc[:, 1], ls=style, color=color, lw=1.4, zorder=3, label=label)
    if len(classical_region_pts):
        poly = np.asarray(classical_region_pts)
        ax.fill(poly[:, 0], poly[:, 1], facecolor="none", edgecolor=COLORS["classical"],
                lw=1.0, label="computational-basis classifiers")
    s = np.asarray(sweep_points)
    sc = np.asarray(sweep_complements)
    ax.plot(s[:, 0], s[:, 1], color=COLORS["helstrom"], lw=5, alpha=0.35, zorder=2, label="Helstrom sweep")
    ax.plot(sc[:, 0], sc[:, 1], color=COLORS["helstrom"], lw=5, alpha=0.2, zorder=2)
    mix = np.asarray(mixture).reshape(-1, 2)
    ax.plot(mix[:, 0], mix[:, 1], ".", color=COLORS["mixture"], ms=4, zorder=1,
            label="prior-mixture eigenprojectors")
    t = np.asarray(touch_points).reshape(-1, 2)
    ax.plot(t[:, 0], t[:, 1], "D", color=COLORS["touch"], ms=6, zorder=4, label="axis contact (fidelity)")
    ax.legend(loc="lower right", fontsize=8)
    return _save(fig, path)


def bhattacharyya_scan(theta, b, sqrt_f, path) -> Path:
    """Coefficient and square root fidelity against the angle between two pure states."""
    plt.rcParams["svg.hashsalt"] = "qroc"
    plt.rcParams["svg.fonttype"] = "none"
    fig, ax = plt.subplots(figsize=(SIZE_IN, SIZE_IN), dpi=72)
    ax.plot(theta, b, color=COLORS["bhattacharyya"], lw=1.8, label="quantum Bhattacharyya B")
    ax.plot(theta, sqrt_f, color=COLORS["sqrt_fidelity"], lw=1.8, ls="--", label="square root fidelity")
    ax.set_xlim(0, np.pi)
    ax.set_ylim(-0.02, 1.02)
    ax.set_xlabel("theta_q")
    ax.set_ylabel("similarity")
    ax.set_title("Similarity of two pure qubits")
    ax.legend(loc="upper right")
    return _save(fig, path)


def general_region(rank_clouds: dict, hull, sweep_points, fidelity_points, path) -> Path:
    """Rank-coloured projector clouds, their hull, the Helstrom curve and fidelity-basis points."""
    fig, ax = _unit_axes("ROC region of two density operators")
    h = np.asarray(hull)
    ax.fill(h[:, 0], h[:, 1], facecolor=COLORS["region_fill"], edgecolor=COLORS["region_edge"],
            lw=1.0, zorder=0, label="convex hull")
    for r in sorted(rank_clouds):
        pts = np.asarray(rank_clouds[r])
        if 0 < r < max(rank_clouds):
            ax.scatter(pts[:, 0], pts[:, 1], s=1.5, color=rank_color(r), linewidths=0,
                       label=f"rank {r} projectors")
    s = np.asarray(sweep_points)
    ax.plot(s[:, 0], s[:, 1], color=COLORS["helstrom"], lw=1.8, label="Helstrom curve")
    f = np.asarray(fidelity_points)
    ax.plot(f[:, 0], f[:, 1], "s-", color=COLORS["fidelity"], ms=5, lw=1.0,
            label="fidelity-observable polyline")
    leg = ax.legend(loc="lower right", fontsize=8)
    for handle in leg.legend_handles:
        if hasattr(handle, "set_sizes"):
            handle.set_sizes([20])
    return _save(fig, path)
