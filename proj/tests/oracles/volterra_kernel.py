"""Reference values of K2(t) = int_0^inf t^(s-1)/Gamma(s) ds at 50 log-spaced points in [1e-4, 1e3].

Two independent representations are evaluated at 30 digits and must agree:
  (a) the defining integral over s,
  (b) the Laplace form e^t + int_0^inf e^(-t x) / (pi^2 + log(x)^2) dx.
Writes core/src/reference/volterra_kernel_values.inc (C++ initializer rows {t, log K2(t)}).
The log keeps the rows representable in double for t > 709.
"""
import pathlib

import mpmath as mp

mp.mp.dps = 30


def defining(t):
    t = mp.mpf(t)
    pts = sorted({mp.mpf(0), mp.mpf(1), mp.mpf(5), mp.mpf(20), t, 2 * t + 5})
    return mp.quad(lambda s: t ** (s - 1) / mp.gamma(s), pts + [mp.inf])


def laplace(t):
    t = mp.mpf(t)
    tail = mp.quad(lambda x: mp.e ** (-t * x) / (mp.pi**2 + mp.log(x) ** 2), [0, 1e-12, 1e-6, 1e-3, 1, mp.inf])
    return mp.e**t + tail


def main():
    out = pathlib.Path(__file__).resolve().parents[2] / "core" / "src" / "reference" / "volterra_kernel_values.inc"
    rows = []
    for k in range(50):
        t = mp.mpf(10) ** (-4 + 7 * mp.mpf(k) / 49)
        a = defining(t)
        b = laplace(t)
        rel = abs(a - b) / abs(b)
        assert rel < mp.mpf("1e-15"), (t, a, b)
        rows.append(f"    {{{mp.nstr(t, 17)}, {mp.nstr(mp.log(b), 17)}}},")
    out.write_text("// generated by volterra_kernel.py; {t, log K2(t)}\n" + "\n".join(rows) + "\n")


if __name__ == "__main__":
    main()
