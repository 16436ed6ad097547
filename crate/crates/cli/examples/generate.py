#!/usr/bin/env python3
"""Writes the bundled presentations and the values the CLI is expected to
reproduce on them.

Structure constants are built here from monomial bases (dual bases of
k[x]/(x^n), k[x, y], words), and the expected Ext dimensions come from an
independent cobar rank computation over the rationals with `fractions`.
Run from this directory: `python3 generate.py`.
"""

import itertools
import json
from fractions import Fraction

SCHEMA = "cobarlab/1"


def write(name, doc):
    with open(name, "w") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


# ---- coalgebras as (basis degrees, reduced comultiplication) ----------------
# Basis element 0 is the grouplike; comul[t] lists (i, j, c).


def monomial_coalgebra(words, split):
    """Basis = words, mu(w) = sum of u (x) v over the splittings allowed."""
    index = {w: k for k, w in enumerate(words)}
    comul = []
    for w in words:
        terms = []
        for u, v in split(w):
            terms.append((index[u], index[v], 1))
        comul.append(terms)
    return comul


def truncated_line(n):
    words = list(range(n))
    return words, monomial_coalgebra(words, lambda w: [(a, w - a) for a in range(w + 1)])


def polynomial_dual(m, bound):
    words = [e for d in range(bound + 1) for e in exponent_vectors(m, d)]
    def split(e):
        out = []
        for a in itertools.product(*[range(x + 1) for x in e]):
            out.append((tuple(a), tuple(x - y for x, y in zip(e, a))))
        return out
    return words, monomial_coalgebra(words, split), [sum(e) for e in words]


def exponent_vectors(m, d):
    if m == 1:
        return [(d,)]
    return [(a,) + rest for a in range(d, -1, -1) for rest in exponent_vectors(m - 1, d - a)]


def word_coalgebra(m, bound, forbidden=None):
    words = [w for d in range(bound + 1) for w in itertools.product(range(m), repeat=d)
             if forbidden is None or not contains(w, forbidden)]
    return words, monomial_coalgebra(words, lambda w: [(w[:k], w[k:]) for k in range(len(w) + 1)]), [len(w) for w in words]


def contains(w, pattern):
    n = len(pattern)
    return any(tuple(w[k:k + n]) == pattern for k in range(len(w) - n + 1))


def finite_doc(comul, grading=None):
    dim = len(comul)
    doc = {
        "schema": SCHEMA,
        "kind": "finite",
        "field": "Q",
        "dim": dim,
        "grouplike": 0,
        "counit": [1] + [0] * (dim - 1),
        "comul": [[[i, j, str(c)] for i, j, c in terms] for terms in comul],
    }
    if grading is not None:
        doc["grading"] = grading
    return doc


def graded_doc(comul, grading):
    """Per-(p, q) dense components for a basis sorted by degree."""
    bound = max(grading)
    dims = [grading.count(d) for d in range(bound + 1)]
    offset = [sum(dims[:d]) for d in range(bound + 1)]
    components = []
    for p in range(1, bound + 1):
        for q in range(1, bound + 1 - p):
            rows, cols = dims[p] * dims[q], dims[p + q]
            mat = [[0] * cols for _ in range(rows)]
            for t in range(cols):
                for i, j, c in comul[offset[p + q] + t]:
                    if grading[i] == p and grading[j] == q:
                        mat[(i - offset[p]) * dims[q] + (j - offset[q])][t] += c
            components.append({"p": p, "q": q, "matrix": [[str(x) for x in r] for r in mat]})
    return {"schema": SCHEMA, "kind": "graded", "field": "Q", "dims": dims, "components": components}


# ---- cobar oracle ------------------------------------------------------------


def rank(rows):
    rows = [r[:] for r in rows if any(r)]
    rk = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((k for k in range(rk, len(rows)) if rows[k][c] != 0), None)
        if piv is None:
            continue
        rows[rk], rows[piv] = rows[piv], rows[rk]
        for k in range(len(rows)):
            if k != rk and rows[k][c] != 0:
                f = rows[k][c] / rows[rk][c]
                rows[k] = [x - f * y for x, y in zip(rows[k], rows[rk])]
        rk += 1
    return rk


def cobar_ext(comul, grading, imax, jmax=None):
    """dim Ext^{i,j} (or Ext^i when grading is None) of the cobar complex."""
    red = list(range(1, len(comul)))
    rcomul = {t: [(i, j, Fraction(c)) for i, j, c in comul[t] if i != 0 and j != 0] for t in red}
    deg = (lambda t: grading[t]) if grading is not None else (lambda t: 0)

    def cells(i, j):
        return [w for w in itertools.product(red, repeat=i) if grading is None or sum(map(deg, w)) == j]

    def differential(src, dst):
        pos = {w: k for k, w in enumerate(dst)}
        mat = [[Fraction(0)] * len(src) for _ in dst]
        for col, w in enumerate(src):
            for s, a in enumerate(w):
                for i, j, c in rcomul[a]:
                    v = w[:s] + (i, j) + w[s + 1:]
                    mat[pos[v]][col] += (-1) ** s * c
        return mat

    js = [None] if grading is None else range(0, (jmax if jmax is not None else imax * max(grading)) + 1)
    out = {}
    for j in js:
        terms = [cells(i, j) for i in range(imax + 2)]
        ranks = [rank(differential(terms[i], terms[i + 1])) if terms[i] and terms[i + 1] else 0 for i in range(imax + 1)]
        for i in range(imax + 1):
            h = len(terms[i]) - ranks[i] - (ranks[i - 1] if i > 0 else 0)
            if h:
                out[(i, j)] = h
    return out


def totals(table, imax):
    return [sum(d for (i, _), d in table.items() if i == k) for k in range(imax + 1)]


def entries(table):
    return [[i, j, d] for (i, j), d in sorted(table.items())]


def main():
    expected = []

    words, c2 = truncated_line(2)
    write("c2.json", finite_doc(c2, grading=words))
    t = cobar_ext(c2, None, 5)
    expected.append({"args": ["ext", "c2.json", "--imax", "5"], "totals": totals(t, 5)})

    words, c3 = truncated_line(3)
    write("c3.json", finite_doc(c3, grading=words))
    t = cobar_ext(c3, None, 5)
    expected.append({"args": ["ext", "c3.json", "--imax", "5"], "totals": totals(t, 5)})
    expected.append({"args": ["compare", "c3.json", "--n", "4"], "comodule_side": totals(cobar_ext(c3, None, 4), 4)})

    _, sym, grading = polynomial_dual(2, 4)
    write("sym2_d4.json", graded_doc(sym, grading))
    t = cobar_ext(sym, grading, 3, 4)
    expected.append({"args": ["ext", "sym2_d4.json", "--imax", "3", "--jmax", "4"], "entries": entries(t)})
    expected.append({"args": ["resolve", "sym2_d4.json", "--length", "3"], "window_dims": totals(t, 3)})

    _, sym3, grading3 = polynomial_dual(2, 3)
    write("sym2_d3_flat.json", finite_doc(sym3, grading=grading3))

    _, ten, grading = word_coalgebra(2, 2)
    write("ten2_d2.json", finite_doc(ten, grading=grading))
    t = cobar_ext(ten, grading, 3, 2)
    expected.append({"args": ["ext", "ten2_d2.json", "--imax", "3", "--jmax", "2"], "entries": entries(t)})

    _, sq, grading = word_coalgebra(2, 1)
    write("square_zero.json", finite_doc(sq, grading=grading))
    t = cobar_ext(sq, grading, 3)
    expected.append({"args": ["ext", "square_zero.json", "--imax", "3"], "entries": entries(t)})

    # graded dual of k<x,y>/(xy): words avoiding "yx" under deconcatenation
    _, mono, grading = word_coalgebra(2, 4, forbidden=(1, 0))
    write("xy_dual_d4.json", {
        "schema": SCHEMA,
        "kind": "graded",
        "field": "Q",
        "construction": {"family": "quadratic", "m": 2, "bound": 4, "relations": [[0, 1, 0, 0]]},
    })
    t = cobar_ext(mono, grading, 3, 4)
    expected.append({"args": ["ext", "xy_dual_d4.json", "--imax", "3", "--jmax", "4"], "entries": entries(t)})

    broken = finite_doc(c2)
    broken["comul"][1] = [[1, 1, "1"]]
    broken["counit"] = [1, 0]
    write("broken_counit.json", broken)
    expected.append({"args": ["validate", "broken_counit.json"], "exit": 1, "stdout_contains": "counital: false"})

    write("trivial_comodule.json", {"schema": SCHEMA, "kind": "comodule", "preset": "trivial"})
    write("regular_comodule.json", {"schema": SCHEMA, "kind": "comodule", "preset": "regular"})
    # over C2: e_0 -> g (x) e_0, e_1 -> g (x) e_1 + x (x) e_0
    write("c2_two_dim_comodule.json", {
        "schema": SCHEMA,
        "kind": "comodule",
        "coalgebra": finite_doc(c2),
        "dim": 2,
        "coaction": [[[0, 0, "1"]], [[0, 1, "1"], [1, 0, "1"]]],
    })

    with open("expected.json", "w") as fh:
        json.dump(expected, fh, indent=1)
        fh.write("\n")


if __name__ == "__main__":
    main()
