"""Figure emission for experiment reports (SVG preferred, PNG supported)."""

from __future__ import annotations


def plot_convergence(report, path) -> None:
    """One panel per algorithm; recovery ratio vs T, lines per model x coefficient."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    algorithms = list(dict.fromkeys(p.algorithm for p in report.points))
    models = list(dict.fromkeys(p.model for p in report.points))
    coefficients = list(dict.fromkeys(p.coefficient for p in report.points))
    colors = plt.cm.tab10.colors
    styles = {c: s for c, s in zip(coefficients, ("--", "-", ":", "-."))}

    fig, axes = plt.subplots(
        1, len(algorithms), figsize=(4.2 * len(algorithms), 3.6), sharey=True, squeeze=False
    )
    for ax, algorithm in zip(axes[0], algorithms):
        for mi, model in enumerate(models):
            for coefficient in coefficients:
                pts = sorted(
                    report.find(algorithm=algorithm, model=model, coefficient=coefficient),
                    key=lambda p: p.t_length,
                )
                ax.errorbar(
                    [p.t_length for p in pts],
                    [p.ratio for p in pts],
                    yerr=[p.stderr for p in pts],
                    ls=styles.get(coefficient, "-"),
                    color=colors[mi % len(colors)],
                    label=f"{model}, {coefficient}",
                    capsize=2,
                )
        ax.set_title(algorithm)
        ax.set_xlabel("T")
        ax.set_ylim(-0.05, 1.05)
        ax.grid(alpha=0.3)
    axes[0][0].set_ylabel("recovery ratio")
    axes[0][-1].legend(fontsize=7, loc="lower right")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def plot_isoquant(report, path) -> None:
    """Heatmap of recovery ratio over the (rho, T) grid."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    import numpy as np

    rhos = sorted({p.rho for p in report.points})
    ts = sorted({p.t_length for p in report.points})
    grid = np.full((len(rhos), len(ts)), np.nan)
    for p in report.points:
        grid[rhos.index(p.rho), ts.index(p.t_length)] = p.ratio

    fig, ax = plt.subplots(figsize=(6, 4.5))
    im = ax.imshow(
        grid, origin="lower", aspect="auto", cmap="jet", vmin=0.0, vmax=1.0
    )
    ax.set_xticks(range(len(ts)), [str(t) for t in ts])
    ax.set_yticks(range(len(rhos)), [f"{r:g}" for r in rhos])
    ax.set_xlabel("T")
    ax.set_ylabel("rho")
    point = report.points[0]
    ax.set_title(f"recovery ratio, {point.algorithm} + {point.coefficient}")
    fig.colorbar(im, ax=ax)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
