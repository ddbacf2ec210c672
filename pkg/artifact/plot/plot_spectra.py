import argparse
import os
import sys

import matplotlib
from matplotlib import pyplot as plt

sys.path.append(os.path.join(os.path.dirname(os.path.abspath(__file__)), "../.."))

from extractor.data_extractor import spectrum_extract

route2params = {
    "K": {
        "color": "#377eb8",
        "marker": "o",
        "label": "$E^K$",
    },
    "H": {
        "color": "#e41a1c",
        "marker": "^",
        "label": "$E^H$",
    },
}

law2symbol = {
    "linear": r"$\alpha$",
    "quadratic": r"$\gamma$",
}


def _plot_shifts(data, figures_path: str, law: str, branch: str, levels: list[int]) -> None:
    plt.clf()

    parameters = list(data.keys())
    for route, params in route2params.items():
        for n in levels:
            y = [
                data[parameter][route][n]["E_total"] - data[parameter][route][n]["E0"]
                for parameter in parameters if route in data[parameter] and n in data[parameter][route]
            ]
            if len(y) != len(parameters):
                continue
            plt.plot(parameters, y, color=params["color"], marker=params["marker"], markersize=3,
                     linewidth=1, label=f"{params['label']}, n={n}" if n == levels[0] else None)
            plt.text(parameters[-1], y[-1], f" {n}", color=params["color"], fontsize=7, va='center')

    plt.xlabel(law2symbol[law])
    plt.ylabel(r"$E_n - E_n^{(0)}$")
    plt.legend(loc='best', labelspacing=0.1)

    ax = plt.gca()
    ax.set_axisbelow(True)
    plt.grid(True)

    plt.savefig(os.path.join(figures_path, f"shifts-{law}-{branch}.pdf"), format="pdf", bbox_inches='tight')


def _plot_route_difference(data, figures_path: str, law: str, branch: str, levels: list[int]) -> None:
    plt.clf()

    parameters = list(data.keys())
    for idx, n in enumerate(levels):
        color = plt.cm.viridis(idx / max(1, len(levels) - 1))
        direct = [data[parameter]["K"][n]["delta_E"] for parameter in parameters]
        printed = [data[parameter]["K"][n]["delta_E_printed"] for parameter in parameters]
        if any(value is None for value in direct + printed):
            continue
        plt.plot(parameters, direct, color=color, linewidth=1, label=f"n={n}")
        plt.plot(parameters, printed, color=color, linewidth=1, linestyle="--")

    plt.xlabel(law2symbol[law])
    plt.ylabel(r"$(E^H - E^K) / E^{(0)}$")
    plt.legend(loc='best', labelspacing=0.1, ncols=2)

    ax = plt.gca()
    ax.set_axisbelow(True)
    plt.grid(True)

    plt.savefig(os.path.join(figures_path, f"route_difference-{law}-{branch}.pdf"), format="pdf",
                bbox_inches='tight')


def parse_args() -> argparse.Namespace:
    parser = argparse.ArgumentParser()
    parser.add_argument('--results_path', type=str, required=False, default="results_spectra")
    parser.add_argument('--figures_path', type=str, required=True)
    parser.add_argument('--law', choices=["linear", "quadratic"], required=True)
    parser.add_argument('--branch', choices=["up", "down", "none"], required=False, default="up")
    parser.add_argument('--levels', type=int, nargs='+', required=False, default=[1, 2, 3, 4, 5])

    return parser.parse_args()


def main(args: argparse.Namespace) -> None:
    plt.figure(figsize=(4.5, 3))
    matplotlib.rc('font', size=9)
    matplotlib.rcParams['pdf.fonttype'] = 42
    matplotlib.rcParams['ps.fonttype'] = 42

    os.makedirs(args.figures_path, exist_ok=True)

    data = spectrum_extract(args.results_path, args.law, args.branch)
    if len(data) == 0:
        print(f"No spectra for {args.law}/{args.branch} in `{args.results_path}`.", file=sys.stderr)
        return

    _plot_shifts(data, args.figures_path, args.law, args.branch, args.levels)
    _plot_route_difference(data, args.figures_path, args.law, args.branch, args.levels)


if __name__ == "__main__":
    main(parse_args())
