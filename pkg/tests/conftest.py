import numpy as np
import pytest

from verdant.geometry import Point2, Polygon, Polyline


def square(x0=0.0, y0=0.0, x1=1.0, y1=1.0, holes=()):
    return Polygon([(x0, y0), (x1, y0), (x1, y1), (x0, y1)], holes)


def sample_inside_length(poly, line, step):
    """Length of ``line`` inside ``poly`` by midpoint sampling."""
    total = 0.0
    v = line.vertices
    for i, seg in enumerate(line.segment_lengths):
        n = max(1, int(np.ceil(seg / step)))
        f = (np.arange(n) + 0.5) / n
        pts = v[i] + f[:, None] * (v[i + 1] - v[i])
        total += poly.contains_points(pts).sum() * seg / n
    return total


def random_scene(rng, n_sites=None, n_links=None, extent=100.0):
    """Random straight and bent roads with random sites nearby."""
    n_links = n_links or int(rng.integers(1, 30))
    n_sites = n_sites or int(rng.integers(1, 60))
    roads = []
    for k in range(n_links):
        nv = int(rng.integers(2, 5))
        pts = rng.uniform(0, extent, (nv, 2))
        roads.append(Polyline(pts, f"L{k:03d}"))
    sites = [(f"s{i:03d}", Point2(*rng.uniform(-10, extent + 10, 2))) for i in range(n_sites)]
    return roads, sites


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# acceptance report: one line per criterion, printed after the run
ACCEPTANCE_RESULTS: list[tuple[int, str, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n, name, ok, detail in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {n}: {name}  [{detail}]")
