"""Shared record of acceptance outcomes, printed at the end of a pytest run."""

_RESULTS = {}


def record(number, title, ok, detail=""):
    _RESULTS[number] = (title, ok, detail)
    line = format_line(number, title, ok, detail)
    print(line)
    return line


def format_line(number, title, ok, detail):
    status = "PASS" if ok else "FAIL"
    return f"[{status}] criterion {number}: {title}" + (f" ({detail})" if detail else "")


def lines():
    return [format_line(n, *_RESULTS[n]) for n in sorted(_RESULTS)]
