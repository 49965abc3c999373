#!/usr/bin/env python3
"""Regenerates the bundled fixtures under fixtures/.

Run from the repository root: python3 tools/make_fixtures.py
"""
import json
import random
from fractions import Fraction
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "fixtures"
FORMAT = "sandwich-instance/1"


def r(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def pts(ps):
    return [[r(c) for c in p] for p in ps]


def write(name, body):
    doc = {"format": FORMAT, "name": name}
    doc.update(body)
    (OUT / f"{name}.json").write_text(json.dumps(doc, indent=2) + "\n")


# ---- preorders --------------------------------------------------------------

def preorders():
    write("ex-full", {"command": "check-preorder", "dimension": 2, "seed": 11,
                      "relation": {"kind": "full"}, "random_sample": 10})
    write("ex-ray", {"command": "check-preorder", "dimension": 3, "seed": 12,
                     "relation": {"kind": "ray"},
                     "sample": pts([[1, 2, 0], [2, 4, 0], [-1, 0, 1], [3, 6, 0]]), "random_sample": 6})
    write("ex-equivalent-measures", {"command": "check-preorder", "dimension": 3, "seed": 13,
                                     "relation": {"kind": "equivalent-measures"},
                                     "sample": pts([[1, 0, 2], [3, 0, 1], [0, 0, 1]]), "random_sample": 6})
    # injective points only, so ties never arise
    write("ex-strict-comonotone", {"command": "check-preorder", "dimension": 3, "seed": 14,
                                   "relation": {"kind": "strict-comonotone"},
                                   "sample": pts([[1, 2, 3], [2, 5, 7], [0, 1, 4], [3, 2, 1], [-1, 0, 2],
                                                  [5, -2, 0], [2, 4, 6], [1, 3, -1]])})
    write("ex-affinity", {"command": "check-preorder", "dimension": 3, "seed": 15,
                          "relation": {"kind": "affinity", "e": ["1", "1", "1"]},
                          "sample": pts([[1, 2, 3], [2, 3, 4], [3, 5, 7], [0, 1, 2]])})
    # x and -x: their sum is 0, which is not related to a generic z
    write("ex-affinity-antipodal", {"command": "check-preorder", "dimension": 3, "seed": 16,
                                    "relation": {"kind": "affinity", "e": ["1", "1", "1"]},
                                    "sample": pts([[1, 2, 4], [-1, -2, -4], [0, 3, 1]])})
    # grid of two cells: f = 1 on [0,1], g = 1 on [0,1/2], h = -1 on [1/2,1]
    write("nonex-corr", {"command": "check-preorder", "dimension": 2, "seed": 17,
                         "relation": {"kind": "corr"}, "sample": pts([[1, 1], [1, 0], [0, -1]])})
    write("nonex-phi", {"command": "check-preorder", "dimension": 1, "seed": 18,
                        "relation": {"kind": "phi"}, "sample": pts([[1], [-1], [0]])})
    write("collapse-extensional", {"command": "check-preorder", "dimension": 2, "seed": 19,
                                   "relation": {"kind": "extensional",
                                                "classes": [pts([[1, 0], [-1, 0]]), pts([[0, 1]])]},
                                   "sample": pts([[1, 0], [-1, 0], [0, 1]])})
    write("summand-division", {"command": "check-preorder", "dimension": 2, "seed": 20,
                               "relation": {"kind": "extensional",
                                            "classes": [pts([[1, 1], [2, 2], [3, 3]]), pts([[1, 0]])]},
                               "sample": pts([[1, 1], [2, 2], [3, 3], [1, 0]]), "axioms": "summand",
                               "n_max": 3})


# ---- engine -----------------------------------------------------------------

MINMAX_RAYS = [[1, 0], [0, 1], [1, 1], [1, 2], [2, 1]]
MINMAX_CARRIER = {"rays": pts(MINMAX_RAYS), "scales": ["1/8", "1/2", "1", "2"], "closure_depth": 0,
                  "include_origin": True}
MINMAX_FUNCS = {"Min": {"kind": "min-rows", "rows": pts([[1, 0], [0, 1]])},
                "Max": {"kind": "max-rows", "rows": pts([[1, 0], [0, 1]])}}


def engine():
    write("min-max-full", {"command": "sandwich", "dimension": 2, "carrier": MINMAX_CARRIER,
                           "relation": {"kind": "full"}, "functionals": MINMAX_FUNCS,
                           "lower": "Min", "upper": "Max"})
    write("p-not-below-h", {"command": "sandwich", "dimension": 2, "carrier": MINMAX_CARRIER,
                            "relation": {"kind": "full"}, "functionals": MINMAX_FUNCS,
                            "lower": "Max", "upper": "Min"})
    write("budget-exhausted", {"command": "sandwich", "dimension": 2, "carrier": MINMAX_CARRIER,
                               "relation": {"kind": "full"},
                               "functionals": dict(MINMAX_FUNCS, P={
                                   "kind": "minus-inf-extension", "inner": {"kind": "linear", "weights": ["1", "0"]},
                                   "domain": {"kind": "ray", "direction": ["2", "1"]}}),
                               "lower": "P", "upper": "Max", "max_sweeps": 1})
    write("extend-ray", {"command": "extend", "dimension": 2, "carrier": MINMAX_CARRIER,
                         "relation": {"kind": "full"},
                         "functionals": dict(MINMAX_FUNCS, ell={"kind": "linear", "weights": ["1/2", "1/2"]}),
                         "upper": "Max", "ell": "ell", "domain": {"kind": "ray", "direction": ["1", "1"]}})
    write("envelope-max", {"command": "envelope", "dimension": 2,
                           "carrier": {"rays": pts([[1, 0], [0, 1], [1, 1], [1, 3], [3, 1]]),
                                       "scales": ["1/8", "1/2", "1", "2"], "closure_depth": 0,
                                       "include_origin": True},
                           "relation": {"kind": "full"}, "functionals": MINMAX_FUNCS, "upper": "Max"})
    write("envelope-choquet", {"command": "envelope", "dimension": 2,
                               "carrier": {"rays": pts([[1, 0], [0, 1], [1, 1], [1, 2], [2, 1], [1, 3], [3, 1]]),
                                           "scales": ["1/2", "1", "2"], "closure_depth": 0},
                               "relation": {"kind": "strict-comonotone"},
                               "capacities": {"nu1": {"ground": 2, "values": {"1": "1/4", "2": "1/2", "3": "1"}},
                                              "nu2": {"ground": 2, "values": {"1": "2/3", "2": "1/5", "3": "1"}}},
                               "functionals": {"H": {"kind": "max", "of": [
                                   {"kind": "choquet", "capacity": "nu1"}, {"kind": "choquet", "capacity": "nu2"}]}},
                               "upper": "H"})
    toolkit()


def random_capacity(rng, n):
    # square of a random probability: supermodular, so its Choquet integral is superadditive
    w = [rng.randint(1, 4) for _ in range(n)]
    total = sum(w)
    vals = {}
    for mask in range(1, 1 << n):
        mu = Fraction(sum(w[i] for i in range(n) if mask >> i & 1), total)
        vals[str(mask)] = r(mu * mu)
    return {"ground": n, "values": vals}


def toolkit():
    # small sandwich instances over three relations and dimensions 2-4
    rng = random.Random(4242)
    relations = ["full", "ray", "strict-comonotone"]
    k = 0
    for dim in (2, 3, 4):
        for rel in relations:
            for variant in ("rows", "choquet") if dim < 4 else ("rows",):
                k += 1
                count = {2: 5, 3: 5, 4: 5}[dim]
                rays = set()
                while len(rays) < count:
                    rays.add(tuple(rng.randint(0, 3) for _ in range(dim)))
                    rays.discard((0,) * dim)
                rays = sorted(rays)
                rows = [[rng.randint(0, 3) for _ in range(dim)] for _ in range(2)]
                funcs = {"H": {"kind": "max-rows", "rows": pts(rows)}}
                if variant == "rows":
                    funcs["P"] = {"kind": "min-rows", "rows": pts(rows)}
                else:
                    # a normalized monotone capacity sits between min and max
                    funcs["H"] = {"kind": "max-rows", "rows": pts([[1 if i == j else 0 for i in range(dim)]
                                                                   for j in range(dim)])}
                    funcs["P"] = {"kind": "choquet", "capacity": random_capacity(rng, dim)}
                write(f"toolkit-{k:02d}", {"command": "sandwich", "dimension": dim,
                                           "carrier": {"rays": pts(rays), "scales": ["1/2", "1", "2"],
                                                       "closure_depth": 0},
                                           "relation": {"kind": rel}, "functionals": funcs,
                                           "lower": "P", "upper": "H", "tol": "1/1000000"})
    # pad to at least 20 with dimension-4 choquet instances
    while k < 21:
        k += 1
        dim = 4
        rays = sorted({tuple(rng.randint(0, 2) for _ in range(dim)) for _ in range(6)} - {(0,) * dim})
        rel = relations[k % 3]
        write(f"toolkit-{k:02d}", {"command": "sandwich", "dimension": dim,
                                   "carrier": {"rays": pts(rays), "scales": ["1/2", "1", "2"], "closure_depth": 0},
                                   "relation": {"kind": rel},
                                   "functionals": {
                                       "H": {"kind": "max-rows", "rows": pts([[1 if i == j else 0 for i in range(dim)]
                                                                              for j in range(dim)])},
                                       "P": {"kind": "choquet", "capacity": random_capacity(rng, dim)}},
                                   "lower": "P", "upper": "H", "tol": "1/1000000"})


# ---- comonotone -------------------------------------------------------------

def comono():
    write("comono-decompose", {"command": "comono decompose",
                               "comono": {"x": pts([[1, 3, 2, 5]])[0], "y": pts([[0, 4, 1, 7]])[0]}})
    ind_x = [0] * 8 + [1] * 9
    ind_y = [0] * 4 + [1] * 13
    write("comono-approx-indicator", {"command": "comono approx",
                                      "comono": {"grid": {"x": pts([ind_x])[0], "y": pts([ind_y])[0]},
                                                 "eps": ["1/4", "1/8", "1/16"]}})
    write("comono-approx-constant", {"command": "comono approx",
                                     "comono": {"grid": {"x": ["1"] * 9, "y": [r(Fraction(i, 8)) for i in range(9)]},
                                                "eps": ["1/4", "1/8", "1/16", "1/32", "1/64"]}})
    write("comono-approx-proportional", {"command": "comono approx",
                                         "comono": {"grid": {"x": pts([[0, 1, 3, 4, 6]])[0],
                                                             "y": pts([[0, 2, 6, 8, 12]])[0]}}})
    write("comono-choquet", {"command": "comono choquet",
                             "capacities": {"nu": {"ground": 2, "values": {"1": "3/10", "2": "1/2", "3": "1"}},
                                            "nu3": {"ground": 3, "values": {"1": "1/5", "2": "1/4", "3": "1/2",
                                                                            "4": "0", "5": "1/3", "6": "1/2",
                                                                            "7": "1"}}},
                             "comono": {"capacities": ["nu"],
                                        "points": pts([[1, 2], [3, 1], [2, 2], [0, 5], [4, 1], [-1, 2]])}})
    write("comono-subadditive-min", {"command": "comono choquet", "dimension": 2,
                                     "functionals": {"wmin": {"kind": "min-rows", "rows": pts([[1, 0], [0, 2]])}},
                                     "comono": {"points": pts([[1, Fraction(9, 10)], [3, 1]]),
                                                "subadditive": "wmin"}})
    write("comono-envelope", {"command": "comono envelope",
                              "capacities": {"a": {"ground": 3, "values": {"1": "1/2", "2": "1/4", "3": "3/4",
                                                                           "4": "1/4", "5": "3/4", "6": "1/2",
                                                                           "7": "1"}},
                                             "b": {"ground": 3, "values": {"1": "1/5", "2": "3/5", "3": "3/5",
                                                                           "4": "1/5", "5": "2/5", "6": "4/5",
                                                                           "7": "1"}},
                                             "dominated": {"additive": ["0", "0", "1"]}},
                              "comono": {"points": pts([[1, 2, 3], [3, 2, 1], [2, 3, 1], [1, 3, 2], [3, 1, 2],
                                                        [2, 1, 3]])}})


def probe():
    write("probe-full", {"command": "probe", "seed": 2024,
                         "probe": {"relation": "full", "dimension": 2, "rays": 4, "trials": 100}})
    write("probe-strict-choquet", {"command": "probe", "seed": 9,
                                   "probe": {"relation": "strict-comonotone", "family": "max-choquet",
                                             "dimension": 3, "rays": 4, "trials": 10}})
    write("probe-empty", {"command": "probe", "seed": 1, "probe": {"trials": 0}})


if __name__ == "__main__":
    OUT.mkdir(exist_ok=True)
    for old in OUT.glob("*.json"):
        old.unlink()
    preorders()
    engine()
    comono()
    probe()
    print(f"wrote {len(list(OUT.glob('*.json')))} fixtures to {OUT}")
