import numpy as np
import pytest

from primegaps import build_table


@pytest.fixture(scope="session")
def t_small():
    return build_table(200_000)


@pytest.fixture(scope="session")
def t_mid():
    return build_table(2_200_000)


@pytest.fixture(scope="session")
def naive_primes():
    """Independent oracle: textbook sieve, no shared code with the engine."""
    n = 200_000
    flags = bytearray([1]) * (n + 1)
    flags[0] = flags[1] = 0
    p = 2
    while p * p <= n:
        if flags[p]:
            flags[p * p :: p] = bytes(len(range(p * p, n + 1, p)))
        p += 1
    return np.flatnonzero(np.frombuffer(bytes(flags), dtype=np.uint8)).astype(np.int64)


def run_cli(args, env=None, monkeypatch=None, capsys=None):
    """Invoke the console entry point in-process; returns (code, out, err)."""
    from primegaps.cli import main

    if env and monkeypatch:
        for k, v in env.items():
            monkeypatch.setenv(k, v)
    code = 0
    try:
        main(list(args))
    except SystemExit as e:
        code = e.code if isinstance(e.code, int) else 0
    out, err = capsys.readouterr()
    return code, out, err
