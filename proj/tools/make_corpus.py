#!/usr/bin/env python3
"""Writes the fixture corpus (corpus/*.json) and its manifest of expected exit codes."""

import json
import math
import pathlib

OUT = pathlib.Path(__file__).resolve().parent.parent / "corpus"


def zeros(n):
    return [[0.0] * n for _ in range(n)]


def unit(n, i, j, v=1.0):
    m = zeros(n)
    m[i][j] = v
    return m


def add(*ms):
    n = len(ms[0])
    return [[sum(m[i][j] for m in ms) for j in range(n)] for i in range(n)]


def scale(c, m):
    return [[c * x for x in row] for row in m]


def mat(rows):
    """Real or complex rows to [re, im] pairs."""
    return [[[complex(x).real, complex(x).imag] for x in row] for row in rows]


def matmul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    return [[sum(a[i][t] * b[t][j] for t in range(k)) for j in range(m)] for i in range(n)]


def adjoint(a):
    return [[complex(a[j][i]).conjugate() for j in range(len(a))] for i in range(len(a[0]))]


def block_diag(a, b):
    n, m = len(a), len(b)
    out = zeros(n + m)
    for i in range(n):
        for j in range(n):
            out[i][j] = a[i][j]
    for i in range(m):
        for j in range(m):
            out[n + i][n + j] = b[i][j]
    return out


def triangular_units(n):
    return {f"E{i + 1}{j + 1}": unit(n, i, j) for i in range(n) for j in range(i, n)}


def problem(ambient, matrices, declarations=None, maps=None, args=None, description=""):
    p = {"description": description, "ambient": ambient, "seed": 0,
         "matrices": {k: mat(v) for k, v in matrices.items()}}
    if declarations:
        p["declarations"] = declarations
    if maps:
        p["maps"] = maps
    if args:
        p["args"] = args
    return p


def map_from(f, inputs, codomain_dim, prefix):
    """Matrices and pairs for the map f on the given named inputs."""
    mats, pairs = {}, []
    for name, x in inputs.items():
        img = f(x)
        mats[f"{prefix}_{name}"] = img
        pairs.append([name, f"{prefix}_{name}"])
    return mats, {"codomain_dim": codomain_dim, "pairs": pairs}


FILES = {}
MANIFEST = []


def fixture(name, body, *runs):
    FILES[name] = body
    for command, code in runs:
        MANIFEST.append({"file": name + ".json", "command": command, "exit": code})


# Triangular algebras T_n inside M_n.
for n in (2, 3, 4):
    units = triangular_units(n)
    b = add(*[scale(1.0 + (i == j) * (n - 0.5), unit(n, i, j)) for i in range(n) for j in range(n)])
    units["b"] = b
    fixture(f"triangular_t{n}",
            problem({"dim": n}, units,
                    {"T": {"mode": "algebra", "generators": sorted(k for k in units if k != "b")}},
                    args={"algebra": "T", "matrix": "b"},
                    description=f"upper triangular T_{n} in M_{n}"),
            ("generate", 0), ("envelope", 0), ("classify-ladder", 0), ("factorize", 0),
            ("condexp", 0), ("classify-tracial", 0), ("l1-check", 0))

# {([[λ, μ], [0, λ]], λ)} inside M_2 ⊕ C: the C block is the Shilov ideal.
fixture("m2_plus_c",
        problem({"dim": 3}, {"E12": unit(3, 0, 1)}, {"A": {"mode": "algebra", "generators": ["E12"]}},
                description="unital algebra generated by (E12, 0) in M_2 + C"),
        ("envelope", 0), ("triple-envelope", 0))

fixture("star_e12_m3",
        problem({"dim": 3}, {"E12": unit(3, 0, 1)}, {"B": {"mode": "star_algebra", "generators": ["E12"]}},
                description="unital *-algebra generated by E12 in M_3 (M_2 + C)"),
        ("generate", 0), ("wedderburn", 0))

fixture("star_e12_m2",
        problem({"dim": 2}, {"E12": unit(2, 0, 1)}, {"B": {"mode": "star_algebra", "generators": ["E12"]}},
                description="*-algebra generated by E12 in M_2 is M_2"),
        ("generate", 0), ("wedderburn", 0))

fixture("nilpotent_units_m3",
        problem({"dim": 3}, {"E12": unit(3, 0, 1), "E23": unit(3, 1, 2)},
                {"N": {"mode": "algebra", "generators": ["E12", "E23"]}},
                description="unital algebra generated by E12, E23 (span of I, E12, E23, E13)"),
        ("generate", 0))

fixture("amplified_m2",
        problem({"dim": 4}, {"X": block_diag(unit(2, 0, 1), unit(2, 0, 1))},
                {"B": {"mode": "star_algebra", "generators": ["X"]}},
                description="{a + a : a in M_2} inside M_4"),
        ("wedderburn", 0))

fixture("diagonal_m2",
        problem({"dim": 2}, {"E11": unit(2, 0, 0), "J": [[1, 1], [1, 1]]},
                {"D": {"mode": "algebra", "generators": ["E11"]}},
                args={"algebra": "D", "matrix": "J"},
                description="diagonal algebra D_2 inside M_2"),
        ("envelope", 0), ("classify-ladder", 2), ("condexp", 0), ("classify-tracial", 2), ("l1-check", 2))

# Maps on M_2 and T_2.
m2_units = {f"E{i + 1}{j + 1}": unit(2, i, j) for i in range(2) for j in range(2)}
t2_units = triangular_units(2)
t2_units["I"] = [[1.0, 0.0], [0.0, 1.0]]
del t2_units["E11"]

mats, spec = map_from(lambda x: adjoint(x), m2_units, 2, "t")
fixture("transpose_m2", problem({"dim": 2}, {**m2_units, **mats}, maps={"T": spec},
                                description="transpose on M_2"),
        ("check-isometry", 2))

mats, spec = map_from(lambda x: scale(0.5, x), t2_units, 2, "h")
fixture("halving_t2", problem({"dim": 2}, {**t2_units, **mats}, maps={"T": spec},
                              description="x -> x/2 on T_2"),
        ("check-isometry", 2), ("analyze-isometry", 2))

mats, spec = map_from(lambda x: [[x[0][0], 0.0], [0.0, x[1][1]]], t2_units, 2, "c")
fixture("diagonal_compression_t2", problem({"dim": 2}, {**t2_units, **mats}, maps={"T": spec},
                                           description="compression of T_2 to its diagonal"),
        ("check-isometry", 2))

mats, spec = map_from(lambda x: block_diag(x, [[x[0][0]]]), t2_units, 3, "s")
fixture("direct_sum_t2", problem({"dim": 2}, {**t2_units, **mats}, maps={"T": spec},
                                 description="A -> diag(A, a11) from T_2 into M_3"),
        ("check-isometry", 0), ("analyze-isometry", 0), ("block-form", 0))

mats, spec = map_from(lambda x: block_diag(x, [[x[0][0] / 2]]), t2_units, 3, "s")
fixture("half_corner_t2", problem({"dim": 2}, {**t2_units, **mats}, maps={"T": spec},
                                  description="A -> diag(A, a11/2) from T_2 into M_3"),
        ("check-isometry", 0), ("analyze-isometry", 0), ("block-form", 0))

r = 1 / math.sqrt(2)
w = [[r, r], [r, -r]]
u0 = [[0.0, 1.0], [1.0, 0.0]]
mats, spec = map_from(lambda x: matmul(u0, matmul(w, matmul(x, adjoint(w)))), m2_units, 2, "u")
fixture("unitary_conjugation_m2", problem({"dim": 2}, {**m2_units, **mats}, maps={"T": spec},
                                          description="x -> u0 W x W* on M_2"),
        ("check-isometry", 0), ("analyze-isometry", 0))

fixture("factor_t2",
        problem({"dim": 2}, {"E11": unit(2, 0, 0), "E12": unit(2, 0, 1), "E22": unit(2, 1, 1),
                             "b": [[1, 1], [1, 2]], "swap": [[0, 1], [1, 0]]},
                {"T": {"mode": "algebra", "generators": ["E11", "E12", "E22"]}},
                args={"algebra": "T", "matrix": "b", "forms": "swap"},
                description="factorization b = a* a and b = u a in T_2"),
        ("factorize", 0))

fixture("tracial_pair",
        problem({"blocks": [2, 2], "weights": [0.5, 0.5]},
                {"E11": unit(4, 0, 0), "E12": unit(4, 0, 1), "E22": unit(4, 1, 1), "E33": unit(4, 2, 2),
                 "E34": unit(4, 2, 3)},
                {"A": {"mode": "algebra", "generators": ["E11", "E12", "E22", "E33", "E34"]}},
                description="T_2 + T_2 inside M_2 + M_2 with equal block masses"),
        ("condexp", 0), ("classify-tracial", 0))

fixture("partial_center",
        problem({"blocks": [2, 2], "weights": [0.5, 0.5]},
                {"E11": unit(4, 0, 0), "E12": unit(4, 0, 1), "E21": unit(4, 1, 0)},
                {"A": {"mode": "algebra", "generators": ["E11", "E12", "E21"]}},
                description="{(x, y) : x in M_2, y in C1} inside M_2 + M_2"),
        ("l1-check", 2))

fixture("commutative_c2",
        problem({"blocks": [1, 1]}, {"E11": unit(2, 0, 0)},
                {"A": {"mode": "algebra", "generators": ["E11"]}},
                description="C^2 inside itself"),
        ("l1-check", 0), ("classify-tracial", 0))

fixture("scalar_expectation",
        problem({"blocks": [2, 1], "weights": [0.3, 0.7]}, {"x": [[1, 2, 0], [3, 4, 0], [0, 0, 5]]},
                {"C": {"mode": "algebra", "generators": []}},
                args={"algebra": "C", "matrix": "x"},
                description="expectation onto the scalars is the trace state"),
        ("condexp", 0))

fixture("corner_e12",
        problem({"dim": 2}, {"E12": unit(2, 0, 1)},
                {"X": {"mode": "triple_system", "generators": ["E12"]}},
                description="the triple system span{E12} in M_2"),
        ("triple-envelope", 0))

fixture("density_scan_m3",
        problem({"dim": 3}, {}, args={"samples": 12},
                description="random matrix-unit subalgebras of M_3 under tr/3"),
        ("density-scan", 0))


def main():
    OUT.mkdir(exist_ok=True)
    for name, body in FILES.items():
        (OUT / f"{name}.json").write_text(json.dumps(body, indent=1) + "\n")
    (OUT / "manifest.json").write_text(json.dumps(MANIFEST, indent=1) + "\n")


if __name__ == "__main__":
    main()
