import csv
import glob
import os

from sortedcontainers import SortedDict

SPECTRUM_PATTERN = "spectrum-{law}-{branch}-*.csv"
TRAJECTORY_PATTERN = "trajectory-{law}-*.csv"


def _parameter_from_name(path: str) -> float:
    stem = os.path.splitext(os.path.basename(path))[0]
    return float(stem.rsplit('-', 1)[1])


def _float_or_none(value: str) -> float | None:
    return float(value) if value not in ("", None) else None


def spectrum_extract(results_path: str, law: str, branch: str) -> SortedDict:
    """parameter -> route -> n -> row, from `bouncer spectrum --route both` CSV files."""
    if branch not in ["up", "down", "none"]:
        raise Exception(f"Unsupported branch `{branch}`!")

    results_files_list = glob.glob(os.path.join(results_path, SPECTRUM_PATTERN.format(law=law, branch=branch)))

    data = SortedDict()
    for results_file in results_files_list:
        parameter = _parameter_from_name(results_file)
        by_route = {}
        with open(results_file, 'r') as file:
            reader = csv.DictReader(file)
            for res in reader:
                route = res.get("route") or "K"
                if route not in by_route:
                    by_route[route] = SortedDict()
                by_route[route][int(res["n"])] = {
                    "E0": float(res["E0"]),
                    "shift1": float(res["shift1"]),
                    "shift2": float(res["shift2"]),
                    "E_total": float(res["E_total"]),
                    "tail_estimate": float(res["tail_estimate"]),
                    "delta_E": _float_or_none(res.get("delta_E")),
                    "delta_E_printed": _float_or_none(res.get("delta_E_printed")),
                }
        data[parameter] = by_route

    return data


def trajectory_extract(results_path: str, law: str) -> SortedDict:
    """parameter -> columns of the first ascending arc and the full trajectory."""
    results_files_list = glob.glob(os.path.join(results_path, TRAJECTORY_PATTERN.format(law=law)))

    data = SortedDict()
    for results_file in results_files_list:
        columns = {"t": [], "x": [], "v": [], "p": [], "arc": []}
        with open(results_file, 'r') as file:
            reader = csv.DictReader(file)
            for res in reader:
                for key in columns:
                    columns[key].append(int(res[key]) if key == "arc" else float(res[key]))
        data[_parameter_from_name(results_file)] = columns

    return data


def first_ascending_arc(columns: dict) -> dict:
    keep = [i for i, (arc, v) in enumerate(zip(columns["arc"], columns["v"])) if arc == 0 and v >= 0]
    return {key: [columns[key][i] for i in keep] for key in ("x", "v", "p")}
