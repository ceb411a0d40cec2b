#!/usr/bin/env python3
"""High-precision reference values for the closed-form theory constants.

Independent of the C++ implementation: evaluates the defining formulas with
mpmath at 50 digits. Output is frozen into tests/unit/test_analysis.cpp and
tests/acceptance/acceptance.cpp.
"""
import subprocess
import sys

from mpmath import mp, mpf, exp, log, sqrt, ceil

mp.dps = 50


def poly(g, lp):
    g, lp = mpf(g), mpf(lp)
    b = max(lp / 2, g * g / lp)
    r = 3 * lp / (24 * g * g + 2 * lp * g)
    rho = 1 - 3 * lp * lp / (4 * (24 * g * g + 2 * lp * g))
    d = (exp(2 * g * r) - rho) * exp(r * b) / (1 - rho)
    u = 2 * (d + 1) / r ** 2
    return dict(b=b, r=r, rho=rho, d=d, u=u)


def general(g, eta, alpha, s):
    g, eta, alpha, s = mpf(g), mpf(eta), mpf(alpha), mpf(s)
    b = max(alpha * eta / 2, s, alpha * g * g / eta)
    r = 3 * eta / (24 * g * g + 2 * eta * g)
    rho = 1 - 3 * eta * eta / (4 * (24 * g * g + 2 * eta * g))
    d = (exp(2 * g * r) - rho) * exp(r * b / alpha) / (1 - rho)
    u = 2 * (d + 1) / r ** 2
    return dict(b=b, r=r, rho=rho, d=d, u=u)


def transient(r, rho, alpha, dist0):
    return int(ceil(r * mpf(dist0) / (mpf(alpha) * log(1 / rho))))


def show(tag, d):
    print(tag, {k: mp.nstr(v, 20) for k, v in d.items()})


def cli_constants(cli, *args):
    out = subprocess.run([cli, "constants", "--csv", *args], check=True,
                         capture_output=True, text=True).stdout
    rows = [line.split(",", 1) for line in out.splitlines()[1:]]
    return {k: v for k, v in rows}


def check(cli):
    failures = []

    def close(name, got, want, rel=1e-12):
        got, want = mpf(got), mpf(want)
        if abs(got - want) > rel * abs(want):
            failures.append(f"{name}: got {got}, want {mp.nstr(want, 20)}")

    c = cli_constants(cli, "--problem", "l1", "--alpha", "1e-3")
    p = poly(20, 1)
    for key, ref in (("B_P", "b"), ("r_P", "r"), ("rho_P", "rho"), ("D_P", "d"), ("U_P", "u")):
        close("l1 " + key, c[key], p[ref], 1e-10)
    if int(c["T_P"]) != transient(p["r"], p["rho"], "1e-3", 40):
        failures.append("l1 T_P: got " + c["T_P"])

    c = cli_constants(cli, "--problem", "asym", "--alpha", "1e-3", "--s", "0.5")
    q = general(90, "0.5", "1e-3", "0.5")
    for key, ref in (("B_G", "b"), ("r_G", "r"), ("rho_G", "rho"), ("D_G", "d"), ("U_G", "u")):
        close("asym " + key, c[key], q[ref], 1e-10)
    if int(c["T_G"]) != transient(q["r"], q["rho"], "1e-3", 40):
        failures.append("asym T_G: got " + c["T_G"])

    c = cli_constants(cli, "--problem", "l1", "--dim", "1", "--alpha", "0.1")
    p = poly(2, 1)
    close("l1/1 D_P", c["D_P"], p["d"], 1e-10)
    if int(c["T_P"]) != transient(p["r"], p["rho"], "0.1", 4):
        failures.append("l1/1 T_P: got " + c["T_P"])

    for f in failures:
        print("MISMATCH", f)
    print("constants oracle:", "ok" if not failures else f"{len(failures)} mismatches")
    return 1 if failures else 0


if __name__ == "__main__" and len(sys.argv) == 3 and sys.argv[1] == "--check":
    sys.exit(check(sys.argv[2]))

if __name__ == "__main__":
    p = poly(1, 1)
    show("poly(G=1,L=1)", p)
    print("T_P(alpha=0.1, dist0=10) =", transient(p["r"], p["rho"], "0.1", 10))
    theta = max(sqrt(p["u"]), 4)
    print("theta(Z=4) =", mp.nstr(theta, 20),
          " frame_len =", int(ceil(2 * p["r"] * theta / log(1 / p["rho"]))))
    # l1, dim 100: G = 20, L_P = 1, w0 = 4 * ones -> dist0 = 40
    p = poly(20, 1)
    show("poly(G=20,L=1)", p)
    print("T_P(alpha=1e-3, dist0=40) =", transient(p["r"], p["rho"], "1e-3", 40))
    print("T_P(alpha=1e-4, dist0=40) =", transient(p["r"], p["rho"], "1e-4", 40))
    # l1, dim 1: G = 2
    p = poly(2, 1)
    show("poly(G=2,L=1)", p)
    print("T_P(alpha=0.1, dist0=4) =", transient(p["r"], p["rho"], "0.1", 4))
    # asymmetric, dim 100, half width 4: G = 90, eta(0.5) = 0.5
    q = general(90, "0.5", "1e-3", "0.5")
    show("general(G=90,eta=0.5,alpha=1e-3,S=0.5)", q)
    print("T_G(alpha=1e-3, dist0=40) =", transient(q["r"], q["rho"], "1e-3", 40))
    q = general(1, 1, 1, 1)
    show("general(G=1,eta=1,alpha=1,S=1)", q)
