"""Independent dense-matrix derivation of the frozen values used in the C++ tests.

Builds Kraus operators as explicit numpy matrices, applies Phi (x) I to a
maximally entangled state and reads off the overlap. Nothing here shares code
with the C++ library.

    python3 tests/scripts/derive_expected.py
"""
import itertools

import numpy as np

P = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def op(s):
    m = np.eye(1, dtype=complex)
    for c in s:
        m = np.kron(m, P[c])
    return m


def single(p):
    return {"I": 1 - p, "X": p / 3, "Y": p / 3, "Z": p / 3}


def mixture(p, mu, n):
    w = single(p)
    out = {}
    for s in itertools.product("IXYZ", repeat=n):
        s = "".join(s)
        u = np.prod([w[c] for c in s])
        f = w[s[0]] if len(set(s)) == 1 else 0.0
        out[s] = (1 - mu) * u + mu * f
    return out


def fidelity_overlap(kraus, n):
    d = 2**n
    psi = np.zeros(d * d, dtype=complex)
    for i in range(d):
        psi[i * d + i] = 1 / np.sqrt(d)
    rho = np.outer(psi, psi.conj())
    out = np.zeros_like(rho)
    for a, k in kraus:
        big = np.kron(k, np.eye(d))
        out += a * a * big @ rho @ big.conj().T
    return float(np.real(psi.conj() @ out @ psi))


def corrected(model, strategy, n):
    # strategy: outcome char -> {correction: q}; first qubit measured
    kraus = []
    for e, w in model.items():
        for g, q in strategy[e[0]].items():
            kraus.append((np.sqrt(q * w), op(g) @ op(e)))
    return fidelity_overlap(kraus, n)


def brute(model, n):
    total, choice = 0.0, {}
    for a in "IXYZ":
        best, bestg = -1, None
        for rest in itertools.product("IXYZ", repeat=n - 1):
            g = a + "".join(rest)
            kraus = [(np.sqrt(w), op(g) @ op(e)) for e, w in model.items() if e[0] == a]
            v = fidelity_overlap(kraus, n) if kraus else 0.0
            if v > best + 1e-12:
                best, bestg = v, g
        total += best
        choice[a] = bestg
    return total, choice


def region(kind, n):
    s = {}
    for a in "IXYZ":
        if kind == "A":
            s[a] = {a + "I" * (n - 1): 1.0}
        elif kind == "B":
            s[a] = {a * n: 1.0}
        else:
            s[a] = {(a if a != "I" else "I") + ("X" if a == "I" else a) * (n - 1): 1.0}
    return s


np.set_printoptions(precision=17)
print("XY product", op("X") @ op("Y"), "vs iZ", 1j * op("Z"))
print("(XZ)(YZ) == i ZI:", np.allclose(op("XZ") @ op("YZ"), 1j * op("ZI")))
print("XX dense", op("XX").real)
m = mixture(0.3, 0.0, 2)
print("uc II", repr(m["II"]), "XY", repr(m["XY"]))
print("mix XX", repr(mixture(0.3, 0.5, 2)["XX"]))
print("depolarizing uncorrected 1-p (p=0.3):",
      fidelity_overlap([(np.sqrt(w), op(c)) for c, w in single(0.3).items()], 1))
for n, p, mu, kind in [(2, 0.4, 0.9, "B"), (2, 0.4, 0.2, "A"), (2, 0.4, 0.0, "A"),
                       (2, 0.4, 0.2, "B"), (2, 0.9, 0.05, "C"), (5, 0.4, 0.9, "B")]:
    if n <= 3:
        print(f"corrected n={n} p={p} mu={mu} {kind}:", repr(corrected(mixture(p, mu, n), region(kind, n), n)))
for n, p, mu in [(2, 0.4, 0.2), (2, 0.9, 0.05), (2, 0.4, 0.9), (3, 0.4, 0.9), (3, 0.8, 0.1)]:
    print(f"brute n={n} p={p} mu={mu}:", brute(mixture(p, mu, n), n))
# table example {II: .5, IZ: .2, XX: .3}
print("table brute", brute({"II": 0.5, "IZ": 0.2, "XX": 0.3}, 2))
for n, p in [(5, 0.4)]:
    X = (1 - p) ** (n - 1) - (p / 3) ** (n - 1)
    print(f"n={n} p={p} X={X!r} mu_AB={X / (X + 1)!r}")
print("F_B n=5 p=.4 mu=.9", repr(0.1 * (0.6**5 + 3 * (0.4 / 3) ** 5) + 0.9))
for mu in (0.5, 0.7, 0.9):
    print("n=2 p=.4 mu", mu, repr((1 - mu) * (0.36 + 3 * (0.4 / 3) ** 2) + mu))
