"""Collects one line per acceptance criterion for the terminal summary."""

LINES: list[str] = []


def record(number: int, title: str, ok: bool, detail: str, tolerance: str = "exact") -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} (tolerance: {tolerance}) :: {detail}"
    LINES.append(line)
    print(line)
