"""Collects one verdict line per acceptance criterion."""

LINES: list[str] = []


def report(number: int, title: str, ok: bool, detail: str = "") -> None:
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}"
    if detail:
        line += f"  ({detail})"
    LINES.append(line)
    print(line, flush=True)
