import csv
import json
import logging
import math
import os
import sys
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Iterable

import coloredlogs

from dampedbouncer.common.errors import ConfigError

LOG_FORMAT = '[%(levelname)s] %(message)s'


def setup_logging(verbose: bool = False, log_file: str | None = None) -> None:
    level = logging.DEBUG if verbose else logging.INFO
    if sys.stderr.isatty():
        coloredlogs.install(level=level, fmt=LOG_FORMAT, stream=sys.stderr)
    else:
        logging.basicConfig(
            format=LOG_FORMAT,
            level=level,
            handlers=[
                logging.StreamHandler(sys.stderr)
            ],
            force=True
        )

    if log_file is not None:
        file_handler = logging.FileHandler(os.path.abspath(log_file))
        file_handler.setFormatter(logging.Formatter('%(message)s'))
        file_handler.setLevel(logging.WARNING)
        logging.root.addHandler(file_handler)


def thread_count(default: int | None = None) -> int:
    cpu = default if default is not None else (os.cpu_count() or 1)
    cap = os.environ.get("BOUNCER_THREADS")
    if cap is None:
        return max(1, cpu)
    try:
        cap = int(cap)
    except ValueError:
        raise ConfigError(f"BOUNCER_THREADS must be an integer, got `{cap}`.")
    if cap < 1:
        raise ConfigError(f"BOUNCER_THREADS must be >= 1, got {cap}.")

    return min(max(1, cpu), cap)


def parallel_map(func: Callable, items: Iterable, threads: int | None = None) -> list:
    items = list(items)
    workers = min(thread_count() if threads is None else threads, max(1, len(items)))
    if workers <= 1:
        return [func(item) for item in items]

    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(func, items))


def format_float(value: float) -> str:
    return format(float(value), '.17g')


def format_value(value: Any) -> Any:
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, float):
        return format_float(value)
    return value


def parse_level_range(text: str) -> list[int]:
    """Parse `3`, `1..5` or `1,2,7` into a sorted list of 1-based levels."""
    levels = set()
    for part in text.split(','):
        part = part.strip()
        if not part:
            continue
        try:
            if '..' in part:
                lo, hi = part.split('..', 1)
                lo, hi = int(lo), int(hi)
                if lo > hi:
                    raise ConfigError(f"Level range `{part}` is empty.")
                levels.update(range(lo, hi + 1))
            else:
                levels.add(int(part))
        except ValueError:
            raise ConfigError(f"Cannot parse level range `{text}`.")

    if not levels:
        raise ConfigError(f"Level range `{text}` is empty.")
    if min(levels) < 1:
        raise ConfigError(f"Levels start at n = 1, got `{text}`.")

    return sorted(levels)


def _atomic_open(path: str):
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    return fd, tmp_path


def write_csv(path: str | None, fieldnames: list[str], rows: Iterable[dict]) -> None:
    """Write rows with every float at 17 significant digits; `None` path means stdout."""
    if path is None:
        writer = csv.DictWriter(sys.stdout, fieldnames=fieldnames, lineterminator='\n')
        writer.writeheader()
        for row in rows:
            writer.writerow({k: format_value(v) for k, v in row.items()})
        sys.stdout.flush()
        return

    fd, tmp_path = _atomic_open(path)
    try:
        with os.fdopen(fd, 'w', newline='') as f:
            writer = csv.DictWriter(f, fieldnames=fieldnames, lineterminator='\n')
            writer.writeheader()
            for row in rows:
                writer.writerow({k: format_value(v) for k, v in row.items()})
            f.flush()
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise


def _json_ready(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _json_ready(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_ready(v) for v in value]
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, float) or hasattr(value, "dtype"):
        value = float(value)
        if not math.isfinite(value):
            return str(value)
        return float(format_float(value))
    return value


def dump_json(payload: Any) -> str:
    return json.dumps(_json_ready(payload), indent=2, sort_keys=True) + "\n"


def write_json(path: str | None, payload: Any) -> None:
    text = dump_json(payload)
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return

    fd, tmp_path = _atomic_open(path)
    try:
        with os.fdopen(fd, 'w', newline='') as f:
            f.write(text)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise


def write_meta(path: str | None, argv: list[str], extra: dict | None = None) -> None:
    if path is None:
        return

    from dampedbouncer import __version__

    meta = {
        "argv": list(argv),
        "timestamp": time.strftime("%Y%m%d-%H%M%S"),
        "version": __version__,
    }
    if extra:
        meta.update(extra)

    write_json(f"{path}.meta.json", meta)
