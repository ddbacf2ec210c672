import argparse
import os
import sys

import matplotlib
from matplotlib import pyplot as plt

sys.path.append(os.path.join(os.path.dirname(os.path.abspath(__file__)), "../.."))

from extractor.data_extractor import first_ascending_arc, trajectory_extract

linestyles = ["-", "--", ":", "-."]

law2symbol = {
    "linear": r"\alpha",
    "quadratic": r"\gamma",
}


def _plot_heights(data, figures_path: str, law: str) -> None:
    plt.clf()

    for idx, (parameter, columns) in enumerate(data.items()):
        plt.plot(columns["t"], columns["x"], color="black", linewidth=0.8,
                 linestyle=linestyles[idx % len(linestyles)], label=f"${law2symbol[law]}={parameter:g}$")

    plt.xlabel("$t$")
    plt.ylabel("$x$")
    plt.legend(loc='upper right', labelspacing=0.1)

    ax = plt.gca()
    ax.set_axisbelow(True)
    plt.grid(True, axis="y")

    plt.savefig(os.path.join(figures_path, f"heights-{law}.pdf"), format="pdf", bbox_inches='tight')


def _plot_phase_portraits(data, figures_path: str, law: str) -> None:
    for ordinate in ("v", "p"):
        plt.clf()

        for idx, (parameter, columns) in enumerate(data.items()):
            arc = first_ascending_arc(columns)
            plt.plot(arc["x"], arc[ordinate], color="black", linewidth=0.8,
                     linestyle=linestyles[idx % len(linestyles)], label=f"${law2symbol[law]}={parameter:g}$")

        plt.xlabel("$x$")
        plt.ylabel(f"${ordinate}$")
        plt.legend(loc='upper right', labelspacing=0.1)

        ax = plt.gca()
        ax.set_axisbelow(True)
        plt.grid(True)

        plt.savefig(os.path.join(figures_path, f"phase-x{ordinate}-{law}.pdf"), format="pdf", bbox_inches='tight')


def parse_args() -> argparse.Namespace:
    parser = argparse.ArgumentParser()
    parser.add_argument('--results_path', type=str, required=False, default="results_classical")
    parser.add_argument('--figures_path', type=str, required=True)
    parser.add_argument('--law', choices=["linear", "quadratic"], required=True)

    return parser.parse_args()


def main(args: argparse.Namespace) -> None:
    plt.figure(figsize=(4.5, 2.5))
    matplotlib.rc('font', size=9)
    matplotlib.rcParams['pdf.fonttype'] = 42
    matplotlib.rcParams['ps.fonttype'] = 42

    os.makedirs(args.figures_path, exist_ok=True)

    data = trajectory_extract(args.results_path, args.law)
    if len(data) == 0:
        print(f"No trajectories for {args.law} in `{args.results_path}`.", file=sys.stderr)
        return

    _plot_heights(data, args.figures_path, args.law)
    _plot_phase_portraits(data, args.figures_path, args.law)


if __name__ == "__main__":
    main(parse_args())
