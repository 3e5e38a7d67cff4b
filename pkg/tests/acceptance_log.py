"""Shared record of acceptance outcomes, printed in the terminal summary."""

RESULTS: dict = {}


def record(key: str, passed: bool, elapsed: float, detail: str = ""):
    status = "PASS" if passed else "FAIL"
    RESULTS[key] = (status, elapsed, detail)
    print(f"{key} {status} ({elapsed:.2f}s) {detail}")
