import numpy as np
import pytest

from seqgen.mps import StateVector


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def random_complex(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_state(rng, n):
    a = random_complex(rng, 2**n)
    return StateVector(a / np.linalg.norm(a))


def random_isometry(rng, rows, cols):
    Q, _ = np.linalg.qr(random_complex(rng, rows, cols))
    return Q


def random_unitary(rng, dim):
    return random_isometry(rng, dim, dim)


def ghz_state(n):
    amps = np.zeros(2**n, dtype=complex)
    amps[0] = amps[-1] = 1 / np.sqrt(2)
    return StateVector(amps)


def w_state(n):
    amps = np.zeros(2**n, dtype=complex)
    for k in range(n):
        amps[1 << k] = 1 / np.sqrt(n)
    return StateVector(amps)


def dense_schmidt_ranks(psi, tol=1e-12):
    """Oracle: rank of the (later qubits) x (first k qubits) amplitude matrix per cut."""
    n = psi.n
    out = []
    for k in range(n + 1):
        mat = psi.amps.reshape(2 ** (n - k), 2**k)
        s = np.linalg.svd(mat, compute_uv=False)
        out.append(int((s > tol * s[0]).sum()))
    return out


def amplitude_oracle(m, bits):
    """Oracle: <phi_F| V^{i_n} ... V^{i_1} |phi_I> evaluated as a plain matrix product."""
    vec = m.phi_I.copy()
    for t, i in zip(m.tensors, bits):
        vec = t[i] @ vec
    return np.vdot(m.phi_F, vec)


def dense_mps_oracle(m):
    n = m.n
    return np.array(
        [amplitude_oracle(m, [(b >> k) & 1 for k in range(n)]) for b in range(2**n)]
    )


ACCEPTANCE_LINES = []


def record(number, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title} -- {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
