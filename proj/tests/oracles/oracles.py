#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
#
# fbmc-mimo: FBMC/OQAM link-level simulation for massive MIMO uplinks
#
# Brute-force reference values frozen into the C++ unit tests. Everything here
# is computed from the basis-function definitions with plain numpy sums; no
# FFT tricks, no shared code with the library.

import numpy as np


def phydyas(M, K=4):
    G = {2: [1.0, np.sqrt(2) / 2],
         3: [1.0, 0.911438, 0.411438],
         4: [1.0, 0.971960, np.sqrt(2) / 2, np.sqrt(1 - 0.971960 ** 2)]}[K]
    l = np.arange(K * M)
    p = np.full(K * M, G[0])
    for k in range(1, K):
        p += 2 * (-1) ** k * G[k] * np.cos(2 * np.pi * k * (l + 1) / (K * M))
    return p / np.sqrt(np.sum(p ** 2))


def basis(p, M, m, n, t):
    """a_{m,n}(t), t measured from the filter center."""
    c = len(p) // 2 - 1
    s = t - n * M // 2
    idx = s + c
    out = np.zeros(len(t), dtype=complex)
    ok = (idx >= 0) & (idx < len(p))
    out[ok] = p[idx[ok]] * np.exp(2j * np.pi * m * s[ok] / M) * 1j ** ((m + n) % 4)
    return out


def coefficient(p, M, h, m, mp, dn):
    """sum_t (a_{m',0} * h)(t) conj(a_{m,dn}(t))."""
    span = len(p) + len(h) + abs(dn) * M
    t = np.arange(-span, span + 1)
    acc = 0j
    for l, hl in enumerate(h):
        acc += hl * np.sum(basis(p, M, mp, 0, t - l) * np.conj(basis(p, M, m, dn, t)))
    return acc


def saturation_db(p, M, rho, m, dm_max=4, dn_max=10):
    num = 0.0
    den = 0.0
    for dm in range(-dm_max, dm_max + 1):
        for dn in range(-dn_max, dn_max + 1):
            g = sum(r * np.exp(2j * np.pi * m * l / M) * coefficient(p, M, np.eye(len(rho))[l], m, m + dm, dn)
                    for l, r in enumerate(rho))
            if dm == 0 and dn == 0:
                num = g.real ** 2
            else:
                den += g.real ** 2
    return 10 * np.log10(num / den)


def main():
    p4 = phydyas(4)
    print("phydyas M=4 taps:", ", ".join(f"{v:.15f}" for v in p4))

    p64 = phydyas(64)
    q = np.convolve(p64, p64[::-1])
    c = len(p64) - 1
    print("nyquist M=64:", max(abs(q[c + r * 64]) for r in range(-3, 4) if r) / q[c])

    p16 = phydyas(16)
    q16 = np.convolve(p16, p16[::-1])
    print("q16(-1):", q16[len(p16) - 2], "q16(16):", q16[len(p16) - 1 + 16])

    h = np.array([0.3 + 0.1j, -0.2j, 0.05 - 0.07j])
    for (m, mp, dn) in [(3, 5, 1), (3, 3, 0), (3, 4, -2), (0, 15, 1)]:
        print(f"coef m={m} m'={mp} dn={dn}:", repr(coefficient(p16, 16, h, m, mp, dn)))

    a = 0.3
    rho = np.exp(-a * np.arange(4))
    rho /= rho.sum()
    for m in (0, 5):
        print(f"saturation M=16 alpha=0.3 L=4 m={m}:", repr(saturation_db(p16, 16, rho, m)))

    alpha, L = 0.1, 40
    rho = np.exp(-alpha * np.arange(L))
    rho /= rho.sum()
    print("rho(0), rho(39):", rho[0], rho[39])


if __name__ == "__main__":
    main()
