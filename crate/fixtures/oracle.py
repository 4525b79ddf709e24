#!/usr/bin/env python3
"""Brute-force reference values for the bundled synthetic fixture.

Generates `synthetic60.csv`, `synthetic60_complexity.csv` and
`synthetic60_oracle.json`. Every value is computed by direct evaluation of
the metric definitions with plain loops; nothing here shares code with the
Rust engine.

    python3 fixtures/oracle.py
"""

import json
import os
import random

HERE = os.path.dirname(os.path.abspath(__file__))
LABELS = ["neg", "pos"]
N = 60


def make_dataset():
    rng = random.Random(20200417)
    rows = []
    for i in range(N):
        truth = "pos" if i % 2 == 0 else "neg"
        if i >= 54:
            truth = "neg"
        centre = 0.68 if truth == "pos" else 0.34
        while True:
            p = round(min(max(rng.gauss(centre, 0.2), 0.0), 1.0), 4)
            if p != 0.5:
                break
        rows.append((f"s{i:02d}", truth, round(1.0 - p, 4), p))
    complexity = {}
    for i, row in enumerate(rows):
        if i % 7 == 0:
            complexity[row[0]] = 1.0
        elif i % 5 == 0:
            complexity[row[0]] = 0.25
        elif i % 3 == 0:
            complexity[row[0]] = 0.5
        else:
            complexity[row[0]] = round(rng.uniform(0.1, 1.0), 3)
    return rows, complexity


def argmax(scores):
    best = 0
    for j in range(1, len(scores)):
        if scores[j] > scores[best]:
            best = j
    return best


def sigma(scores, true_idx, tau):
    k = len(scores)
    s = scores[true_idx]
    m = max(scores)
    if abs(tau - 1.0 / k) <= 1e-12:
        return 1.0 if s >= m else 0.0
    if s < m:
        return 0.0
    if s > tau:
        return 1.0
    return (s - 1.0 / k) / (tau - 1.0 / k)


def sigma_risk(scores, true_idx, tau):
    s = scores[true_idx]
    if true_idx == 1:
        return 1.0 if s >= tau else 0.0
    return 1.0 if s > 1.0 - tau else 0.0


def ha(rows, tau, p, d, risk=False):
    total = 0.0
    for ci, label in enumerate(LABELS):
        members = [r for r in rows if r[1] == label]
        dsum = sum(d[r[0]] for r in members)
        inner = 0.0
        for r in members:
            scores = [r[2], r[3]]
            s = sigma_risk(scores, ci, tau) if risk else sigma(scores, ci, tau)
            inner += d[r[0]] / dsum * s
        total += p[ci] * inner
    return total


def regular_accuracy(rows):
    ok = sum(1 for r in rows if LABELS[argmax([r[2], r[3]])] == r[1])
    return ok / len(rows)


def balanced_accuracy(rows):
    acc = 0.0
    for label in LABELS:
        members = [r for r in rows if r[1] == label]
        ok = sum(1 for r in members if LABELS[argmax([r[2], r[3]])] == label)
        acc += ok / len(members)
    return acc / len(LABELS)


def risk_rates(rows, tau):
    pos = [r for r in rows if r[1] == "pos"]
    neg = [r for r in rows if r[1] == "neg"]
    tpr = sum(1 for r in pos if r[3] >= tau) / len(pos)
    tnr = sum(1 for r in neg if r[2] > 1.0 - tau) / len(neg)
    prevalence = len(pos) / len(rows)
    return tpr, 1.0 - tnr, prevalence


def net_benefit(tpr, fpr, prevalence, tau):
    return tpr * prevalence - (1.0 - prevalence) * (tau / (1.0 - tau)) * fpr


def mann_whitney_auc(rows):
    pos = [r[3] for r in rows if r[1] == "pos"]
    neg = [r[3] for r in rows if r[1] == "neg"]
    wins = 0.0
    for a in pos:
        for b in neg:
            if a > b:
                wins += 1.0
            elif a == b:
                wins += 0.5
    return wins / (len(pos) * len(neg))


def main():
    rows, complexity = make_dataset()
    with open(os.path.join(HERE, "synthetic60.csv"), "w") as f:
        f.write("instance_id,true_label,score:neg,score:pos\n")
        for r in rows:
            f.write(f"{r[0]},{r[1]},{r[2]!r},{r[3]!r}\n")
    with open(os.path.join(HERE, "synthetic60_complexity.csv"), "w") as f:
        f.write("instance_id,complexity\n")
        for r in rows:
            f.write(f"{r[0]},{complexity[r[0]]!r}\n")

    const = {r[0]: 1.0 for r in rows}
    uniform = [0.5, 0.5]
    out = {
        "accuracy": regular_accuracy(rows),
        "balanced_accuracy": balanced_accuracy(rows),
        "confident_accuracy": {},
        "prioritized_accuracy": {},
        "practical_accuracy": ha(rows, 0.5, uniform, complexity),
        "combined_tau_0.75_p_0.48": ha(rows, 0.75, [0.52, 0.48], complexity),
        "net_benefit": {},
        "standardized_net_benefit": {},
        "youden_index": {},
        "risk_h_accuracy": {},
        "auroc": mann_whitney_auc(rows),
    }
    for tau in ["0.5", "0.6", "0.75", "0.8", "1"]:
        out["confident_accuracy"][tau] = ha(rows, float(tau), uniform, const)
    for p1 in ["0", "0.25", "0.48", "0.75", "1"]:
        p = float(p1)
        out["prioritized_accuracy"][p1] = ha(rows, 0.5, [1.0 - p, p], const)
    for tau_s in ["0.1", "0.3", "0.5", "0.7", "0.9"]:
        tau = float(tau_s)
        tpr, fpr, prev = risk_rates(rows, tau)
        nb = net_benefit(tpr, fpr, prev, tau)
        out["net_benefit"][tau_s] = nb
        out["standardized_net_benefit"][tau_s] = nb / prev
        out["youden_index"][tau_s] = tpr - fpr
        alpha = tau * (1.0 - prev) + (1.0 - tau) * prev
        p = [tau * (1.0 - prev) / alpha, (1.0 - tau) * prev / alpha]
        out["risk_h_accuracy"][tau_s] = ha(rows, tau, p, const, risk=True)
    with open(os.path.join(HERE, "synthetic60_oracle.json"), "w") as f:
        json.dump(out, f, indent=2, sort_keys=True)
        f.write("\n")


if __name__ == "__main__":
    main()
