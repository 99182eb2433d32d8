"""Closed Jacobi diagrams with at most eight trivalent vertices."""

from csmm.diagrams import perfect_matchings, theta, wheel

# products of wheels with at most eight vertices and an even number of legs
WHEEL_PRODUCTS = [(4,), (6,), (8,), (2, 2), (3, 3), (2, 4), (2, 6), (3, 5), (4, 4),
                  (2, 2, 2), (2, 2, 4), (2, 3, 3), (2, 2, 2, 2)]


def closures(d):
    return [d.close_legs(m) for m in perfect_matchings(range(len(d.legs)))]


def closed_corpus():
    """``(name, diagram)`` pairs used by the weight-system oracle."""
    items = [("theta", theta()), ("theta*theta", theta() * theta())]
    for parts in WHEEL_PRODUCTS:
        d = wheel(parts[0])
        for p in parts[1:]:
            d = d * wheel(p)
        name = "*".join(f"w{p}" for p in parts)
        items += [(f"{name}#{i}", c) for i, c in enumerate(closures(d))]
    flipped = []
    for name, d in items[::7]:
        for v in d.trivalent[:2]:
            flipped.append((f"{name}/flip{v}", d.reverse_vertex(v)))
    items += flipped
    assert all(len(d.trivalent) <= 8 and d.is_closed() for _, d in items)
    return items
