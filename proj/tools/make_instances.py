#!/usr/bin/env python3
"""Regenerate the bundled benchmark instances under instances/.

Exact reconstructions (isomorphic to the public DIMACS/COLOR02 files):
  myciel3..5      Mycielski transform iterated from K2
  queenN_N        N x N board, squares adjacent when they share a row,
                  column or diagonal (row-major numbering, same as COLOR02)
  miles250        Knuth's 128-city mileage table, edge when distance <= 250.
                  Needs knuth_miles.txt.gz (shipped in the networkx sdist
                  under examples/drawing/); pass it with --miles.

Surrogates (same generator family as the originals, not the original files):
  surrogate_DSJC125.1       G(125, 0.1), first seed whose edge count is 736
  surrogate_DSJR500.1       500 uniform points in the unit square, edge when
                            distance < 0.1, first seed with clique number 12
  surrogate_flat300_28_0    300 vertices in 28 hidden classes, 21695 edges
                            spread evenly over class pairs

Use tools/fetch_instances.sh to download the originals where network access
allows; the acceptance suite prefers them when present.
"""

import argparse
import gzip
import itertools
import math
import os
import random
import re
import sys


def write_col(path, n, edges, comments):
    edges = sorted({(min(u, v), max(u, v)) for u, v in edges})
    with open(path, "w") as fh:
        for line in comments:
            fh.write(f"c {line}\n")
        fh.write(f"p edge {n} {len(edges)}\n")
        for u, v in edges:
            fh.write(f"e {u + 1} {v + 1}\n")
    print(f"{os.path.basename(path)}: n={n} m={len(edges)}")


def mycielski(n, edges):
    # vertices 0..n-1 original, n..2n-1 shadows, 2n apex
    out = list(edges)
    for u, v in edges:
        out.append((u, n + v))
        out.append((v, n + u))
    for i in range(n):
        out.append((n + i, 2 * n))
    return 2 * n + 1, out


def myciel(level):
    n, edges = 2, [(0, 1)]
    for _ in range(level - 1):
        n, edges = mycielski(n, edges)
    return n, edges


def queen(size):
    edges = []
    cells = [(r, c) for r in range(size) for c in range(size)]
    for a, b in itertools.combinations(range(len(cells)), 2):
        (r1, c1), (r2, c2) = cells[a], cells[b]
        if r1 == r2 or c1 == c2 or abs(r1 - r2) == abs(c1 - c2):
            edges.append((a, b))
    return size * size, edges


def miles(path, threshold):
    cities = []
    edges = []
    with gzip.open(path, "rt") as fh:
        for line in fh:
            if line.startswith("*"):
                continue
            if re.match(r"^\d+", line):
                for d in line.split():
                    if int(d) <= threshold:
                        edges.append((len(cities) - 1, col))
                    col += 1
            else:
                cities.append(line.split("[")[0])
                col = 0
    return len(cities), edges


def gnp(n, p, seed):
    rng = random.Random(seed)
    return [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]


def geometric(n, radius, seed):
    rng = random.Random(seed)
    pts = [(rng.random(), rng.random()) for _ in range(n)]
    return [
        (u, v)
        for u in range(n)
        for v in range(u + 1, n)
        if math.dist(pts[u], pts[v]) < radius
    ]


def clique_number(n, edges):
    import networkx as nx

    g = nx.Graph()
    g.add_nodes_from(range(n))
    g.add_edges_from(edges)
    return max(len(c) for c in nx.find_cliques(g))


def flat(n, classes, m, seed):
    rng = random.Random(seed)
    order = list(range(n))
    rng.shuffle(order)
    parts = [order[i::classes] for i in range(classes)]
    pairs = list(itertools.combinations(range(classes), 2))
    weight = [len(parts[a]) * len(parts[b]) for a, b in pairs]
    total = sum(weight)
    quota = [m * w // total for w in weight]
    for i in rng.sample(range(len(pairs)), m - sum(quota)):
        quota[i] += 1
    edges = []
    for (a, b), q in zip(pairs, quota):
        cand = [(u, v) for u in parts[a] for v in parts[b]]
        edges.extend(rng.sample(cand, q))
    return edges


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default=os.path.join(os.path.dirname(__file__), "..", "instances"))
    ap.add_argument("--miles", help="path to knuth_miles.txt.gz")
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)
    out = lambda name: os.path.join(args.out, name)

    for level in (3, 4, 5):
        n, e = myciel(level)
        write_col(out(f"myciel{level}.col"), n, e, [f"myciel{level}: Mycielski graph, regenerated"])
    for size in (5, 6, 7, 8):
        n, e = queen(size)
        write_col(out(f"queen{size}_{size}.col"), n, e, [f"queen{size}_{size}: queen graph, regenerated"])
    if args.miles:
        n, e = miles(args.miles, 250)
        write_col(out("miles250.col"), n, e, ["miles250: Knuth mileage data, distance <= 250, regenerated"])

    seed = 1
    while len(e := gnp(125, 0.1, seed)) != 736:
        seed += 1
    write_col(out("surrogate_DSJC125.1.col"), 125, e,
              [f"surrogate for DSJC125.1: G(125, 0.1) with python random seed {seed}"])

    seed = 1
    while clique_number(500, e := geometric(500, 0.1, seed)) != 12:
        seed += 1
    write_col(out("surrogate_DSJR500.1.col"), 500, e,
              [f"surrogate for DSJR500.1: unit-square geometric graph r=0.1, python random seed {seed}, clique number 12"])

    e = flat(300, 28, 21695, 1)
    write_col(out("surrogate_flat300_28_0.col"), 300, e,
              ["surrogate for flat300_28_0: 28 hidden classes, 21695 edges, python random seed 1"])
    return 0


if __name__ == "__main__":
    sys.exit(main())
