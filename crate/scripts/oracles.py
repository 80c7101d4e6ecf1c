"""Independent dense-matrix reference values used by the Rust test suites."""
import glob
import numpy as np

I = np.eye(2)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]])
Z = np.diag([1.0, -1.0]).astype(complex)
P = {"I": I, "X": X, "Y": Y, "Z": Z}


def word(w):
    m = np.array([[1.0 + 0j]])
    for c in w:
        m = np.kron(m, P[c])
    return m


def on(n, placed):
    w = ["I"] * n
    for q, p in placed:
        w[q] = p
    return "".join(w)


def tfim(n, j, g):
    h = sum(-j * word(on(n, [(k, "X"), ((k + 1) % n, "X")])) for k in range(n))
    return h + sum(-g * word(on(n, [(k, "Z")])) for k in range(n))


def xxz(n, d, g):
    h = 0
    for k in range(n):
        nx = (k + 1) % n
        h = h + word(on(n, [(k, "X"), (nx, "X")])) + word(on(n, [(k, "Y"), (nx, "Y")]))
        h = h + d * word(on(n, [(k, "Z"), (nx, "Z")]))
    return h + sum(g * word(on(n, [(k, "Z")])) for k in range(n))


def pauli_file(path):
    lines = [l.split() for l in open(path) if l.strip() and not l.startswith("#")]
    n = int(lines[0][1])
    return sum(float(c) * word(w) for c, w in lines[1:]), n


def e0(h):
    return np.linalg.eigvalsh(h)[0]


print(f"tfim 4 1 1 {e0(tfim(4, 1, 1)):.15f}")
print(f"tfim 4 0.5 1 {e0(tfim(4, 0.5, 1)):.15f}")
print(f"tfim 4 1.5 1 {e0(tfim(4, 1.5, 1)):.15f}")
print(f"tfim 8 1.5 1 {e0(tfim(8, 1.5, 1)):.15f}")
print(f"xxz 4 0.5 1 {e0(xxz(4, 0.5, 1)):.15f}")
print(f"xxz 4 1.5 1 {e0(xxz(4, 1.5, 1)):.15f}")
print(f"xxz 8 1 1 {e0(xxz(8, 1.0, 1)):.15f}")
print(f"xxz 2 0 0 {np.round(np.linalg.eigvalsh(xxz(2, 0, 0)), 12)}")
for f in sorted(glob.glob("crates/core/data/*/*.pauli")):
    h, _ = pauli_file(f)
    print(f"{f} {e0(h):.12f}")
