"""Figure files for the command-line report path.

Each function renders one PNG next to the delimited output and returns its
path.  The Agg backend is forced because these figures are only ever
written to disk.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_HIST_STYLE = dict(bins=60, alpha=0.6, edgecolor="none", density=True)


def _finish(fig, directory, name: str) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    target = directory / name
    fig.savefig(target, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return target


def save_estimate_figure(values, point: float, q1: float, q3: float,
                         directory) -> Path:
    """Histogram of the posterior MI draws with the quartiles and midhinge."""
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.hist(np.asarray(values), color="tab:blue", **_HIST_STYLE)
    ax.axvline(q1, color="tab:gray", ls="--", lw=1, label="quartiles")
    ax.axvline(q3, color="tab:gray", ls="--", lw=1)
    ax.axvline(point, color="tab:red", lw=1.5, label=f"midhinge {point:.4f}")
    ax.set_xlabel("mutual information (nats)")
    ax.set_ylabel("density")
    ax.set_title("Posterior MI draws")
    ax.legend(frameon=False)
    return _finish(fig, directory, "estimate_draws.png")


def save_test_figure(prior_values, posterior_values, c: float, rb: float,
                     strength: float, directory) -> Path:
    """Prior and posterior MI draws overlaid, with the window [0, c) shaded."""
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.hist(np.asarray(prior_values), color="tab:orange", label="prior",
            **_HIST_STYLE)
    ax.hist(np.asarray(posterior_values), color="tab:blue", label="posterior",
            **_HIST_STYLE)
    ax.axvspan(0.0, c, color="tab:green", alpha=0.15,
               label=f"window [0, {c:g})")
    ax.set_xlabel("mutual information (nats)")
    ax.set_ylabel("density")
    ax.set_title(f"Independence test: RB = {rb:.3f}, strength = {strength:.3f}")
    ax.legend(frameon=False)
    return _finish(fig, directory, "test_draws.png")


def save_elicit_figure(profile, chosen_a: float, target: float,
                       directory) -> Path:
    """Window probability against candidate concentration, log-scaled."""
    grid = [a for a, _ in profile]
    probs = [p for _, p in profile]
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.semilogx(grid, probs, marker="o", color="tab:blue")
    ax.axhline(target, color="tab:gray", ls="--", lw=1, label=f"target {target:g}")
    ax.axvline(chosen_a, color="tab:red", lw=1.5, label=f"chosen a = {chosen_a:g}")
    ax.set_xlabel("concentration a")
    ax.set_ylabel("Pr(prior MI in window)")
    ax.set_title("Concentration elicitation profile")
    ax.legend(frameon=False)
    return _finish(fig, directory, "elicit_profile.png")


def save_simulate_figure(summaries, directory) -> Path:
    """Summary curves for a simulation table.

    With several neighbor orders the panel shows mean MI against k, one
    line per (distribution, n); otherwise mean MI against n per
    distribution, with the closed-form value dashed where known.  A second
    panel shows the mean relative belief ratio when the test stage ran.
    """
    summaries = list(summaries)
    have_rb = any(s.rb_mean is not None for s in summaries)
    n_panels = 2 if have_rb else 1
    fig, axes = plt.subplots(1, n_panels, figsize=(6.4 * n_panels, 4.0),
                             squeeze=False)
    mi_ax = axes[0, 0]
    sweep = len({s.k for s in summaries}) > 1
    if sweep:
        groups = sorted({(s.distribution, s.n) for s in summaries})
        for dist, n in groups:
            rows = sorted((s.k, s.mi_mean) for s in summaries
                          if (s.distribution, s.n) == (dist, n))
            mi_ax.plot([k for k, _ in rows], [v for _, v in rows],
                       marker="o", label=f"{dist}, n={n}")
        targets = {s.true_mi for s in summaries if s.true_mi is not None}
        for value in sorted(targets):
            mi_ax.axhline(value, color="tab:gray", ls="--", lw=1)
        mi_ax.set_xlabel("neighbor order k")
    else:
        for dist in sorted({s.distribution for s in summaries}):
            rows = sorted((s.n, s.mi_mean, s.true_mi) for s in summaries
                          if s.distribution == dist)
            line, = mi_ax.plot([n for n, _, _ in rows], [v for _, v, _ in rows],
                               marker="o", label=dist)
            targets = {t for _, _, t in rows if t is not None}
            for value in targets:
                mi_ax.axhline(value, color=line.get_color(), ls="--", lw=1)
        mi_ax.set_xlabel("sample size n")
    mi_ax.set_ylabel("mean MI estimate (nats)")
    mi_ax.set_title("Mean MI over replications")
    mi_ax.legend(frameon=False, fontsize="small")
    if have_rb:
        rb_ax = axes[0, 1]
        x_is_k = sweep
        for dist in sorted({s.distribution for s in summaries}):
            rows = sorted((s.k if x_is_k else s.n, s.rb_mean)
                          for s in summaries
                          if s.distribution == dist and s.rb_mean is not None)
            if rows:
                rb_ax.plot([x for x, _ in rows], [v for _, v in rows],
                           marker="o", label=dist)
        rb_ax.axhline(1.0, color="tab:gray", ls="--", lw=1)
        rb_ax.set_xlabel("neighbor order k" if x_is_k else "sample size n")
        rb_ax.set_ylabel("mean relative belief ratio")
        rb_ax.set_title("Independence test")
        rb_ax.legend(frameon=False, fontsize="small")
    return _finish(fig, directory, "simulate_summary.png")
