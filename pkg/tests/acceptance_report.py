"""One pass/fail line per acceptance criterion, collected for the terminal summary."""

LINES: list[str] = []


def record(name: str, ok: bool, detail: str, elapsed: float, limit: float) -> str:
    status = "PASS" if ok and elapsed <= limit else "FAIL"
    line = f"{status}  {name}: {detail} [{elapsed:.1f} s of {limit:.0f} s]"
    LINES.append(line)
    print(line)
    return status
