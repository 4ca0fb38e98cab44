import pytest

# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture(autouse=True)
def cache_root(tmp_path, monkeypatch):
    """Every test gets its own cache directory; nothing touches the user's cache."""
    root = tmp_path / "cache"
    monkeypatch.setenv("PARTITION_MOD4_CACHE", str(root))
    return root


# -- naive oracles: plain Python lists, no shared code with the package -------


def naive_mul(a, b, n):
    out = [0] * n
    for i, x in enumerate(a[:n]):
        if x:
            for j, y in enumerate(b[: n - i]):
                out[i + j] += x * y
    return out


def naive_inv(a, n):
    """Power series inverse by long division (a[0] = +-1)."""
    assert a[0] in (1, -1)
    out = [0] * n
    for k in range(n):
        s = (1 if k == 0 else 0) - sum(a[i] * out[k - i] for i in range(1, min(k, len(a) - 1) + 1))
        out[k] = s * a[0]
    return out


def count_partitions(n, largest=None):
    if largest is None:
        largest = n
    if n == 0:
        return 1
    return sum(count_partitions(n - k, k) for k in range(1, min(n, largest) + 1))


def sigma(k, n):
    return sum(d**k for d in range(1, n + 1) if n % d == 0)
