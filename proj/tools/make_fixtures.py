#!/usr/bin/env python3
"""Writes the JSON configs under configs/."""
import json
import math
import os

HERE = os.path.dirname(os.path.abspath(__file__))
OUT = os.path.join(HERE, "..", "configs")
LOG2 = math.log(2.0)
UNIT = {"lower": [-1.0], "upper": [1.0]}


def dump(name, obj):
    with open(os.path.join(OUT, name), "w") as fh:
        json.dump(obj, fh, indent=2)
        fh.write("\n")


def abs_pair():
    return {
        "f": {"family": "scaled_abs", "params": {"s": 1.0, "a": 0.5}, "domain": UNIT},
        "g": {"family": "scaled_abs", "params": {"s": 2.0, "a": -0.25}, "domain": UNIT},
        "claim": {"epsilon": LOG2, "delta": 0.75},
    }


def quadratic_pair():
    # (x - 0.2)^2 and (x + 0.1)^2
    return {
        "f": {"family": "quadratic", "params": {"A": [[2.0]], "b": [-0.4], "c": 0.04}, "domain": UNIT},
        "g": {"family": "quadratic", "params": {"A": [[2.0]], "b": [0.2], "c": 0.01}, "domain": UNIT},
        "epsilons": [0.0, LOG2, math.log(4.0)],
    }


def erm():
    dist = {"kind": "truncated_gaussian", "mean": [0.1], "sd": [0.5], "lower": [-1.0], "upper": [1.0],
            "table_size": 10000}
    n_list = [64 * 2 ** k for k in range(9)]
    common = {"distribution": dist, "n_list": n_list, "replications": 50, "domain": UNIT, "grid": [2049]}
    return {
        "seed": 42,
        "experiments": [
            dict(name="squared", loss="squared", epsilon_report=LOG2, **common),
            dict(name="absolute", loss="absolute", epsilon_report=0.0, **common),
        ],
    }


def online(kind):
    scen = {"kind": kind, "base_family": "quadratic", "T": 100, "domain": UNIT, "curvature": 2.0}
    if kind == "drift":
        scen.update(start=[-0.5], drift_step=[0.01])
    elif kind == "shift":
        scen.update(start=[-0.3], shift_time=50, shift_to=[0.4])
    else:
        scen.update(start=[0.2], scale_amplitude=0.5, scale_period=25.0)
    return {"scenario": scen, "eps_for_oracle": LOG2, "grid": [2049],
            "learner": {"epsilon": LOG2, "delta_threshold": 0.1}}


def binary_classification():
    # x uniform on {0..7}, P(y = 1 | x) = eta[x]; thresholds 1[x >= k] and
    # 1[x < k]; the Bayes rule is not a threshold and sits in an extra row.
    eta = [0.1, 0.2, 0.8, 0.3, 0.7, 0.85, 0.15, 0.9]
    outcomes, labels = [], []
    for x in range(8):
        for y in (0, 1):
            outcomes.append({"z": f"x{x}_y{y}", "p": (eta[x] if y else 1.0 - eta[x]) / 8.0})
            labels.append((x, y))
    rules, names = [], []
    for k in range(8):
        rules.append([1 if x >= k else 0 for x in range(8)])
        names.append(f"x>={k}")
    for k in range(1, 9):
        rules.append([1 if x < k else 0 for x in range(8)])
        names.append(f"x<{k}")
    bayes = [1 if e > 0.5 else 0 for e in eta]
    loss = [[float(r[x] != y) for (x, y) in labels] for r in rules + [bayes]]
    return {"hypotheses": names, "outcomes": outcomes, "loss": loss, "h_star_row": len(rules),
            "b": 1.0, "alpha": 1.0, "gamma": 0.05, "n": 500, "replications": 500, "mc_draws": 200}


def least_squares():
    # x uniform on {0..3}, y = m(x) +/- 0.3; linear predictors a + c x / 3;
    # the regression function m is the comparator row.
    m = [0.1, 0.4, 0.5, 0.8]
    outcomes, pts = [], []
    for x in range(4):
        for s in (-1, 1):
            y = m[x] + 0.3 * s
            outcomes.append({"z": f"x{x}_y{y:.1f}", "p": 0.125})
            pts.append((x, y))
    names, loss = [], []
    for a in (0.0, 0.2, 0.4):
        for c in (0.0, 0.4, 0.8):
            names.append(f"{a}+{c}x/3")
            loss.append([(a + c * x / 3.0 - y) ** 2 for (x, y) in pts])
    loss.append([(m[x] - y) ** 2 for (x, y) in pts])
    return {"hypotheses": names, "outcomes": outcomes, "loss": loss, "h_star_row": len(names),
            "b": 2.0, "alpha": 1.0, "gamma": 0.05, "n": 500, "replications": 500, "mc_draws": 200}


if __name__ == "__main__":
    os.makedirs(OUT, exist_ok=True)
    dump("abs_pair.json", abs_pair())
    dump("quadratic_pair.json", quadratic_pair())
    dump("calculus.json", {"domain": UNIT, "trials": 200, "grid": [1025]})
    dump("erm_default.json", erm())
    for kind in ("drift", "shift", "scale"):
        dump(f"online_{kind}.json", online(kind))
    dump("binary_classification.json", binary_classification())
    dump("least_squares.json", least_squares())
