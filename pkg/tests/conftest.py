"""Independent oracles shared by the test modules.

Nothing here calls into the fast paths under test: generator matrices are
built from explicit Kronecker products and an explicit permutation matrix,
ML decoding is exhaustive, ranks are plain Gaussian elimination.
"""
import itertools

import numpy as np
import pytest


def explicit_generator(N):
    n = N.bit_length() - 1
    F = np.array([[1, 0], [1, 1]], dtype=np.int64)
    K = np.ones((1, 1), dtype=np.int64)
    for _ in range(n):
        K = np.kron(K, F)
    B = np.zeros((N, N), dtype=np.int64)
    for i in range(N):
        r = int(format(i, f"0{n}b")[::-1], 2) if n else 0
        B[i, r] = 1
    return (B @ K) % 2


def matrix_encode(u, N):
    return (np.asarray(u, dtype=np.int64) @ explicit_generator(N)) % 2


def gf2_rank(M):
    M = np.array(M, dtype=np.uint8) % 2
    rows, cols = M.shape
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if M[i, c]), None)
        if piv is None:
            continue
        M[[r, piv]] = M[[piv, r]]
        for i in range(rows):
            if i != r and M[i, c]:
                M[i] ^= M[r]
        r += 1
        if r == rows:
            break
    return r


def all_codewords(a_vector):
    a = np.asarray(a_vector)
    N = a.size
    info = np.flatnonzero(a)
    G = explicit_generator(N)
    msgs = np.array(list(itertools.product((0, 1), repeat=info.size)), dtype=np.int64)
    U = np.zeros((msgs.shape[0], N), dtype=np.int64)
    U[:, info] = msgs
    return U, (U @ G) % 2


def ml_decode(received, a_vector):
    """Index of the codeword closest to ``received`` (BPSK, Euclidean)."""
    U, X = all_codewords(a_vector)
    S = 1.0 - 2.0 * X
    d = ((np.asarray(received)[:, None, :] - S[None]) ** 2).sum(-1)
    return U[np.argmin(d, axis=1)]


@pytest.fixture
def p84():
    from gapolar.core import PolarCode
    return PolarCode.from_info_set(8, [4, 6, 7, 8], one_based=True)


_CRITERIA: list[tuple[int, str, str, str]] = []
_NOTES: dict[str, list[str]] = {}


@pytest.fixture
def note(request):
    """Attach a short measurement summary to the criterion report line."""
    notes = _NOTES.setdefault(request.node.nodeid, [])
    return notes.append


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        status = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[rep.outcome]
        detail = "; ".join(_NOTES.get(item.nodeid, []))
        _CRITERIA.append((mark.args[0], mark.args[1], status, detail))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, status, detail in sorted(_CRITERIA):
        line = f"criterion {number:>2} {status}: {title}"
        terminalreporter.write_line(line + (f" [{detail}]" if detail else ""))
