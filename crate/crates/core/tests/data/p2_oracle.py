"""Brute-force evaluation of the plane blow-up recursions.

Standalone on purpose: it shares no code with the Rust engine and applies
the point-splitting recursion whenever enough point constraints remain,
otherwise the multiplicity-lowering recursion on the largest entry. It has
no vanishing shortcuts and no symmetry reductions beyond the lookup key.

Writes p2_oracle.json with every class of degree <= 5 on up to three
blow-ups that passes through at least zero points.
"""
import itertools
import json
from fractions import Fraction
from functools import lru_cache
from math import comb


def binom(n, k):
    if k < 0 or n < 0 or k > n:
        return 0
    return comb(n, k)


def npoints(d, al):
    return 3 * d - sum(al) - 1


@lru_cache(None)
def inv(d, al):
    if d == 0:
        return 1 if sorted(al) == [-1] + [0] * (len(al) - 1) else 0
    if any(a < 0 for a in al):
        return 0
    n = npoints(d, al)
    if n < 0:
        return 0
    if n >= 3:
        tot = Fraction(0)
        for d1 in range(1, d):
            d2 = d - d1
            for b in itertools.product(*[range(0, x + 1) for x in al]):
                c = tuple(x - y for x, y in zip(al, b))
                n1, n2 = npoints(d1, b), npoints(d2, c)
                if n1 < 0 or n2 < 0:
                    continue
                pair = d1 * d2 - sum(x * y for x, y in zip(b, c))
                tot += inv(d1, b) * inv(d2, c) * pair * (d1 * d2 * binom(n - 3, n1 - 1) - d1 * d1 * binom(n - 3, n1))
        return tot
    if all(a == 0 for a in al):
        return Fraction(1) if d == 1 else None
    i = max(range(len(al)), key=lambda k: al[k])
    a = al[i]
    base = list(al)
    base[i] -= 1
    base = tuple(base)
    tot = Fraction(d * d - (a - 1) ** 2) * inv(d, base)
    for d1 in range(1, d):
        d2 = d - d1
        for b in itertools.product(*[range(0, x + 1) for x in base]):
            c = tuple(x - y for x, y in zip(base, b))
            n1, n2 = npoints(d1, b), npoints(d2, c)
            if n1 < 0 or n2 < 0:
                continue
            pair = d1 * d2 - sum(x * y for x, y in zip(b, c))
            tot += inv(d1, b) * inv(d2, c) * pair * (d1 * d2 * b[i] * c[i] - d1 * d1 * c[i] ** 2) * binom(n, n1)
    return tot / (d * d * a)


def main():
    rows = []
    for r in range(0, 4):
        for d in range(1, 6):
            for al in itertools.product(range(0, d + 2), repeat=r):
                if list(al) != sorted(al, reverse=True) or npoints(d, al) < 0:
                    continue
                v = Fraction(inv(d, al))
                rows.append({"r": r, "d": d, "alpha": list(al), "value": f"{v.numerator}/{v.denominator}"})
    with open("p2_oracle.json", "w") as f:
        json.dump({"format": 1, "classes": rows}, f, indent=0)
        f.write("\n")


if __name__ == "__main__":
    main()
