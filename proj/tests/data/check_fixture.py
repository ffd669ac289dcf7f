#!/usr/bin/env python3
"""Cross-checks the golden artifacts against a from-scratch recomputation.

Reads fixture_citations.csv, rebuilds journal profiles, similarities, and
article dissimilarities in plain Python, and compares them with the files
under golden/. Nothing here shares code with the library, so agreement means
the committed goldens encode the intended numbers rather than whatever the
library happened to produce.

Runs from any working directory:  python3 tests/data/check_fixture.py
"""

import csv
import math
import os
import sys
from collections import defaultdict

TOL = 1e-9


def norm(s):
    return " ".join(s.split()).lower()


def fail(msg):
    print("check_fixture: FAIL:", msg)
    sys.exit(1)


def read_rows(path):
    with open(path, newline="") as f:
        rows = list(csv.reader(f))
    return rows[1:]  # drop the header


def main():
    os.chdir(os.path.dirname(os.path.abspath(__file__)))
    rows = read_rows("fixture_citations.csv")

    articles = {}  # id -> (venue, [cited...], unmatched)
    for row in rows:
        year, art, citing, cited = row[0], row[1], norm(row[2]), norm(row[3])
        venue, refs, unmatched = articles.setdefault(art, (citing, [], [0]))
        if norm(venue) != citing:
            fail("publication conflict for " + art)
        if cited:
            refs.append(cited)
        else:
            unmatched[0] += 1

    names = sorted({norm(v) for v, _, _ in articles.values()} |
                   {c for _, refs, _ in articles.values() for c in refs})
    ids = {name: i for i, name in enumerate(names)}
    n = len(names)

    counts = defaultdict(int)  # (citing id, cited id) -> count
    inbound = [0] * n
    for venue, refs, _ in articles.values():
        j = ids[norm(venue)]
        for cited in refs:
            g = ids[cited]
            counts[(j, g)] += 1
            inbound[g] += 1

    profile = [defaultdict(float) for _ in range(n)]  # cited -> {citing: share}
    for (j, g), c in counts.items():
        profile[g][j] = c / inbound[g]

    def similarity(g, h):
        if g == h:
            return 1.0
        if not profile[g] or not profile[h]:
            return 0.0
        return sum(min(share, profile[h][j])
                   for j, share in profile[g].items() if j in profile[h])

    if inbound[ids["singleton archive"]] != 1:
        fail("singleton archive should have exactly one inbound citation")
    if profile[ids["outpost gazette"]]:
        fail("outpost gazette should have an empty profile")

    # article dissimilarities
    dissim = {}
    for art, (venue, refs, _) in articles.items():
        if not refs:
            continue
        g = ids[norm(venue)]
        dissim[art] = 1.0 - sum(similarity(g, ids[h]) for h in refs) / len(refs)

    if abs(dissim["selfonly1"]) > 1e-12:
        fail("selfonly1 should score 0")
    if dissim["lonely1"] != 1.0:
        fail("lonely1 should score exactly 1")
    if dissim["outpost1"] != 1.0:
        fail("outpost1 should score exactly 1")
    if "ghostref1" in dissim:
        fail("ghostref1 should be unscored")
    for art, d in dissim.items():
        if d < 0.0 or d > 1.0:
            fail(art + " is outside [0,1]")

    # golden article table
    golden = {}
    for row in read_rows("golden/article_dissimilarity.csv"):
        golden[row[0]] = (int(row[1]), float(row[2]), int(row[3]))
    if set(golden) != set(dissim):
        fail("golden article set differs: %d vs %d" % (len(golden), len(dissim)))
    for art, (journal, value, matched) in golden.items():
        venue, refs, unmatched = articles[art]
        if journal != ids[norm(venue)]:
            fail(art + " has the wrong journal id")
        if matched != len(refs):
            fail(art + " has the wrong matched count")
        if abs(value - dissim[art]) > TOL:
            fail(art + " differs: %r vs %r" % (value, dissim[art]))

    # golden journal means over articles with at least five references
    means = defaultdict(list)
    for art, (venue, refs, _) in articles.items():
        if len(refs) >= 5:
            means[ids[norm(venue)]].append(dissim[art])
    golden_journals = read_rows("golden/journal_dissimilarity.csv")
    if len(golden_journals) != len(means):
        fail("journal table row count differs")
    for row in golden_journals:
        g, value = int(row[0]), float(row[3])
        if g not in means:
            fail("unexpected journal %d in the journal table" % g)
        if abs(value - sum(means[g]) / len(means[g])) > TOL:
            fail("journal %d mean differs" % g)

    # decile report: the top class must beat the bottom on both measures
    report = read_rows("golden/decile_report.csv")
    if len(report) != 10:
        fail("decile report should have ten classes")
    if sum(int(r[3]) for r in report) != len(means_input := [
            a for a, (v, refs, _) in articles.items() if len(refs) >= 5]):
        fail("decile class sizes do not sum to the filtered article count")
    if not float(report[9][4]) > float(report[0][4]):
        fail("top decile multidisciplinary share does not exceed the bottom")

    diversity = read_rows("golden/category_diversity.csv")
    if len(diversity) != 10:
        fail("diversity report should have ten classes")
    if not float(diversity[9][1]) > float(diversity[0][1]):
        fail("top decile category diversity does not exceed the bottom")

    # sanity on the share numbers themselves: the multidisciplinary venue is
    # panorama review, so a class share is the fraction of its articles
    # published there
    pan = ids["panorama review"]
    filtered = sorted(((dissim[a], a) for a in means_input))
    k = len(filtered)
    top = [a for _, a in filtered[-(k - (9 * k + 9) // 10):]]
    bottom_share = float(report[0][4])
    if bottom_share != 0.0:
        fail("bottom decile unexpectedly contains multidisciplinary articles")
    if not any(articles[a][0] == "panorama review" for a in top):
        fail("no panorama review article reached the top decile")

    # network export with --min-citations 2
    map_rows = [line.split("\t") for line in
                open("golden/map.txt").read().splitlines()][1:]
    node_ids = {int(r[0]) for r in map_rows}
    if ids["singleton archive"] in node_ids:
        fail("singleton archive should fall under the citation floor")
    if ids["outpost gazette"] in node_ids:
        fail("outpost gazette has no inbound citations and no node")
    if ids["remote bulletin"] not in node_ids:
        fail("remote bulletin should be a node")
    for g in range(n):
        if (inbound[g] >= 2) != (g in node_ids):
            fail("node set disagrees with the citation floor at journal %d" % g)

    net_rows = [line.split("\t") for line in
                open("golden/network.txt").read().splitlines()][1:]
    for a, b, w in net_rows:
        if int(a) not in node_ids or int(b) not in node_ids:
            fail("edge endpoint outside the node set")
        if not (int(a) < int(b)):
            fail("edge list is not upper-triangular")
        expected = similarity(int(a), int(b))
        if abs(float(w) - expected) > TOL:
            fail("edge weight differs for (%s, %s)" % (a, b))

    # every retained pair with positive similarity must be present
    edges = {(int(a), int(b)) for a, b, _ in net_rows}
    for g in sorted(node_ids):
        for h in sorted(node_ids):
            if g < h and similarity(g, h) > 0 and (g, h) not in edges:
                fail("missing edge (%d, %d)" % (g, h))

    print("check_fixture: OK (%d articles, %d journals, %d scored, %d edges)"
          % (len(articles), n, len(dissim), len(net_rows)))


if __name__ == "__main__":
    main()
