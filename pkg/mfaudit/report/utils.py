import matplotlib.pyplot as plt
from matplotlib.colors import ListedColormap
import os
import seaborn as sns
import numpy as np

# Symbols used in rendered evaluation matrices.
PASS_MARK = "✓"
FAIL_MARK = "✗"

color_pal = sns.color_palette("colorblind", 10)


def _save(fig, output_path, filename):
    if not os.path.exists(output_path):
        os.makedirs(output_path)
    path = os.path.join(output_path, filename)
    fig.savefig(path, bbox_inches="tight")
    plt.close(fig)
    return path


def plot_criteria_heatmap(frame, output_path, filename="criteria.png"):
    """
    Heat-map of an evaluation matrix.

    Parameters
    ----------
    frame: dataframe
        Indexed by protocol, one boolean column per criterion.
    output_path: str
        Directory where the figure is saved.

    Returns
    -------
    str
        Path of the saved figure.

    """
    set_style()
    fig, ax = plt.subplots(figsize=(10, 0.5 * len(frame) + 2))
    values = frame.astype(float)
    labels = np.where(frame.to_numpy(dtype=bool), PASS_MARK, FAIL_MARK)
    sns.heatmap(
        values,
        annot=labels,
        fmt="",
        cmap=ListedColormap([color_pal[3], color_pal[2]]),
        vmin=0,
        vmax=1,
        cbar=False,
        linewidths=0.5,
        ax=ax,
    )
    ax.set_xlabel("")
    ax.set_ylabel("")
    ax.set_title("Criteria met per protocol", fontweight="bold")
    return _save(fig, output_path, filename)


def plot_success_rates(frame, output_path, filename="success_rates.png"):
    """
    Bar chart of attack success rates with their confidence intervals.

    Parameters
    ----------
    frame: dataframe
        Columns attack, protocol, rate, ci_low, ci_high.

    """
    set_style()
    fig, ax = plt.subplots(figsize=(10, 6))
    labels = frame["attack"] + " (" + frame["protocol"] + ")"
    positions = np.arange(len(frame))
    errors = np.vstack(
        [frame["rate"] - frame["ci_low"], frame["ci_high"] - frame["rate"]]
    ).clip(min=0)
    ax.bar(positions, frame["rate"], yerr=errors, color=color_pal[0], capsize=4)
    ax.set_xticks(positions)
    ax.set_xticklabels(labels, rotation=45, ha="right")
    ax.set_ylim(0, 1.05)
    ax.set_ylabel("Success rate")
    return _save(fig, output_path, filename)


def plot_cost_comparison(frame, output_path, filename="cost.png"):
    """
    Estimated (and, when available, measured or reported) authentication
    time per protocol.

    Parameters
    ----------
    frame: dataframe
        Column protocol, and one numeric column per series to compare.

    """
    set_style()
    long = frame.melt(id_vars="protocol", var_name="series", value_name="ms").dropna()
    fig, ax = plt.subplots(figsize=(10, 6))
    sns.barplot(data=long, x="protocol", y="ms", hue="series", ax=ax)
    ax.set_yscale("log")
    ax.set_xlabel("")
    ax.set_ylabel("Authentication time (ms)")
    return _save(fig, output_path, filename)


def set_style():

    sns.set_palette(color_pal)
    sns.set_style(
        "whitegrid",
        {
            "axes.spines.right": True,
            "axes.spines.top": True,
            "axes.edgecolor": "k",
            "xtick.color": "k",
            "ytick.color": "k",
            "font.family": "sans-serif",
        },
    )

    plt.rcParams.update(
        {
            "font.family": "sans-serif",
            "font.size": 10,
            "xtick.labelsize": 12,
            "ytick.labelsize": 12,
            "axes.labelsize": 14,
            "axes.titlesize": 14,
            "savefig.dpi": 75,
            "figure.autolayout": False,
            "legend.fontsize": 12,
        }
    )
