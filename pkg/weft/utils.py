import os
import logging
import platform
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, List, Optional, TypeVar

logger = logging.getLogger(__name__)

THREADS_ENV_VAR = "WIGNER_WEFT_THREADS"

T = TypeVar("T")


def get_platform_specific_path(base_dir_name: str) -> Path:
    if platform.system() == "Windows":
        return Path(os.environ.get("APPDATA", Path.home() / "AppData" / "Roaming")) / base_dir_name
    elif platform.system() == "Darwin":
        return Path.home() / "Library" / "Application Support" / base_dir_name
    else:

        xdg_data_home = os.environ.get("XDG_DATA_HOME")
        if xdg_data_home:
            return Path(xdg_data_home) / base_dir_name
        return Path.home() / ".local" / "share" / base_dir_name


def get_config_path() -> Path:
    return get_platform_specific_path("wignerweft") / "config.json"


def get_report_path() -> Path:
    return get_platform_specific_path("wignerweft") / "reports"


def default_worker_count() -> int:
    return os.cpu_count() or 1


def resolve_workers(workers: Optional[int] = None) -> int:
    count = workers if workers is not None else default_worker_count()
    cap = os.environ.get(THREADS_ENV_VAR)
    if cap:
        try:
            count = min(count, int(cap))
        except ValueError:
            logger.warning(f"Ignoring non-integer {THREADS_ENV_VAR}={cap!r}")
    return max(1, count)


def row_blocks(n_rows: int, workers: int) -> List[range]:
    workers = max(1, min(workers, n_rows))
    bounds = [n_rows * i // workers for i in range(workers + 1)]
    return [range(bounds[i], bounds[i + 1]) for i in range(workers) if bounds[i] < bounds[i + 1]]


def run_row_blocks(func: Callable[[range], T], n_rows: int, workers: Optional[int] = None) -> List[T]:
    blocks = row_blocks(n_rows, resolve_workers(workers))
    if len(blocks) == 1:
        return [func(blocks[0])]
    with ThreadPoolExecutor(max_workers=len(blocks)) as executor:
        return list(executor.map(func, blocks))


if __name__ == "__main__":
    print(f"Config Path: {get_config_path()}")
    print(f"Report Path: {get_report_path()}")
    print(f"Workers: {resolve_workers()}")
