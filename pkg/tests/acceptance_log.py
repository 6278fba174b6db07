"""Collects one PASS/FAIL line per acceptance criterion for the terminal summary."""
import time
from contextlib import contextmanager

RESULTS: list[str] = []


@contextmanager
def criterion(label: str):
    start = time.perf_counter()
    try:
        yield
    except BaseException as exc:
        line = f"FAIL  {label}  ({time.perf_counter() - start:.2f}s) {type(exc).__name__}: {exc}"
        RESULTS.append(line.splitlines()[0])
        print(line)
        raise
    line = f"PASS  {label}  ({time.perf_counter() - start:.2f}s)"
    RESULTS.append(line)
    print(line)
