#!/usr/bin/env python3
"""Generate high-precision t-test fixtures for the stats test suites.

Statistics, Welch-Satterthwaite degrees of freedom, and two-sided p-values
are computed with mpmath at 60 significant digits, from the exact double
values of the listed samples. Run from the repository root:

    python3 scripts/gen_ttest_oracle.py > tests/oracles/ttest_cases.hpp
"""

import mpmath as mp

mp.mp.dps = 60

WELCH_PAIRS = [
    ([1.0, 2.0, 3.0], [1.0, 2.0, 3.0]),
    ([1.0, 2.0, 3.0, 4.0], [2.0, 3.0, 4.0, 5.0]),
    ([0.1, 0.2, 0.15, 0.12, 0.18], [0.3, 0.25, 0.28, 0.35, 0.31]),
    ([10.0, 11.0, 12.0, 9.0, 8.0, 13.0], [10.5, 11.5, 9.5, 12.5]),
    ([-1.0, -2.0, -3.0, -4.0], [1.0, 2.0, 3.0, 4.0]),
    ([5.0, 5.0, 5.0], [1.0, 2.0, 3.0]),
    ([0.79, 0.75, 0.83, 0.80, 0.77, 0.81, 0.78, 0.82], [0.97, 0.95, 0.99, 0.96, 0.98, 0.94, 0.97, 0.99]),
    ([1.64, 1.5, 1.7, 1.8, 1.6], [0.85, 0.9, 0.8, 0.75, 0.95]),
    ([2.5, 2.5, 2.6, 2.4], [2.5, 2.5, 2.4, 2.6]),
    ([100.0, 101.0, 99.0, 102.0, 98.0], [100.5, 100.6, 100.4]),
    ([0.0, 1.0], [0.5, 1.5]),
    ([1e-3, 2e-3, 3e-3, 4e-3], [2.5e-3, 3.5e-3, 1.5e-3]),
    ([7.0, 7.1, 6.9, 7.2, 6.8, 7.3, 6.7], [7.05, 7.15, 6.95]),
    ([0.5, 0.6, 0.55], [0.52, 0.61, 0.57, 0.49, 0.63]),
    ([12.0, 15.0, 11.0, 14.0, 13.0, 16.0, 10.0, 17.0], [13.5, 12.5, 14.5, 11.5]),
    ([3.14, 2.71, 1.41, 1.73], [2.0, 2.1, 1.9, 2.2, 2.05]),
    ([50.0, 60.0, 55.0, 65.0, 45.0], [52.0, 58.0, 54.0, 56.0, 50.0, 60.0]),
    ([0.2, 0.4, 0.6, 0.8], [0.25, 0.45, 0.65]),
    ([9.9, 10.1], [10.0, 10.2, 9.8]),
    ([1.0, 4.0, 9.0, 16.0, 25.0], [2.0, 6.0, 12.0, 20.0]),
]

PAIRED_PAIRS = [
    ([1.0, 2.0, 3.0, 4.0], [1.5, 2.5, 2.5, 4.5]),
    ([10.0, 12.0, 11.0, 13.0, 12.5], [9.5, 11.0, 11.5, 12.0, 12.0]),
    ([0.79, 0.75, 0.83, 0.80], [0.97, 0.95, 0.99, 0.96]),
    ([5.0, 6.0, 7.0], [5.1, 5.9, 7.2]),
    ([-2.0, -1.0, 0.0, 1.0, 2.0], [-2.2, -0.7, 0.1, 0.8, 2.4]),
]

P_GRID_T = [0.0, 1e-8, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0]
P_GRID_DF = [1.0, 2.0, 2.5, 5.0, 7.3, 10.0, 30.0, 100.0, 1000.0]


def mean_var(xs):
    n = len(xs)
    vals = [mp.mpf(x) for x in xs]
    m = mp.fsum(vals) / n
    if n < 2:
        return m, mp.mpf(0)
    v = mp.fsum((x - m) ** 2 for x in vals) / (n - 1)
    return m, v


def two_sided_p(t, df):
    if t == 0:
        return mp.mpf(1)
    x = df / (df + t * t)
    return mp.betainc(df / 2, mp.mpf(1) / 2, 0, x, regularized=True)


def welch(a, b):
    ma, va = mean_var(a)
    mb, vb = mean_var(b)
    na, nb = len(a), len(b)
    se2 = va / na + vb / nb
    t = (ma - mb) / mp.sqrt(se2)
    df = se2 ** 2 / ((va / na) ** 2 / (na - 1) + (vb / nb) ** 2 / (nb - 1))
    return t, df, two_sided_p(t, df)


def paired(a, b):
    diffs = [mp.mpf(x) - mp.mpf(y) for x, y in zip(a, b)]
    n = len(diffs)
    m = mp.fsum(diffs) / n
    v = mp.fsum((d - m) ** 2 for d in diffs) / (n - 1)
    t = m / mp.sqrt(v / n)
    df = mp.mpf(n - 1)
    return t, df, two_sided_p(t, df)


def carr(xs):
    return "{" + ", ".join(repr(float(x)) for x in xs) + "}"


def num(x):
    return repr(float(x))


def main():
    print("// Generated by scripts/gen_ttest_oracle.py -- do not edit by hand.")
    print("#pragma once")
    print("#include <vector>")
    print()
    print("namespace ttest_oracle {")
    print()
    print("struct TestCase {")
    print("    std::vector<double> a;")
    print("    std::vector<double> b;")
    print("    double statistic;")
    print("    double df;")
    print("    double p_value;")
    print("};")
    print()
    print("inline const std::vector<TestCase>& welch_cases() {")
    print("    static const std::vector<TestCase> cases = {")
    for a, b in WELCH_PAIRS:
        t, df, p = welch(a, b)
        print(f"        {{{carr(a)}, {carr(b)}, {num(t)}, {num(df)}, {num(p)}}},")
    print("    };")
    print("    return cases;")
    print("}")
    print()
    print("inline const std::vector<TestCase>& paired_cases() {")
    print("    static const std::vector<TestCase> cases = {")
    for a, b in PAIRED_PAIRS:
        t, df, p = paired(a, b)
        print(f"        {{{carr(a)}, {carr(b)}, {num(t)}, {num(df)}, {num(p)}}},")
    print("    };")
    print("    return cases;")
    print("}")
    print()
    print("struct PGridCase { double t; double df; double p_two_sided; };")
    print()
    print("inline const std::vector<PGridCase>& p_grid() {")
    print("    static const std::vector<PGridCase> cases = {")
    for t in P_GRID_T:
        for df in P_GRID_DF:
            p = two_sided_p(mp.mpf(t), mp.mpf(df))
            print(f"        {{{num(t)}, {num(df)}, {num(p)}}},")
    print("    };")
    print("    return cases;")
    print("}")
    print()
    print("}  // namespace ttest_oracle")


if __name__ == "__main__":
    main()
