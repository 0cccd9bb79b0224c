"""Collects one pass/fail line per acceptance criterion for the terminal summary."""

LINES: list[str] = []


def record(number: int, title: str, ok: bool, seconds: float, detail: str = "") -> None:
    line = f"{'PASS' if ok else 'FAIL'}  [{number:2d}] {title} ({seconds:.2f}s)"
    if detail:
        line += f" - {detail}"
    LINES.append(line)
    print(line)
