"""Shared registry of acceptance outcomes, printed in the pytest terminal summary."""

import time
from contextlib import contextmanager

RESULTS = {}


def record(number, title, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number:>2}: {title} | {detail}"
    RESULTS[number] = line
    print(line)
    return ok


@contextmanager
def timed():
    box = {}
    start = time.perf_counter()
    yield box
    box["elapsed"] = time.perf_counter() - start
