"""Acceptance criteria. Each test records one PASS/FAIL line, echoed in the pytest summary."""

import random
import re
import time
from pathlib import Path

from conleymorse.conley import (
    closure_pair,
    conley_index,
    index_pair_pf,
    intersect_index_pairs,
    minimal_morse_decomposition,
    thicken_index_pair,
    validate_index_pair,
)
from conleymorse.dynamics import invariant_part, oracle_invariant_part
from conleymorse.fixtures import disk_bifurcation, full_triangle, hollow_circle, interval, shifted_annulus
from conleymorse.pipeline import Bundle, eliminate_redundancies, full_barcode, index_pairs_for, maximal_sequences
from conleymorse.zigzag import Bar, audit_barcode, interval_decompose
from helpers import random_complex, random_field, random_isolated_set, random_module, random_split
from oracles import brute_maximal_bars, brute_maximal_sequences, brute_strongly_connected, brute_unsplittable
from test_pipeline import _random_fields, _synthetic, _synthetic_barcodes, overlap

RESULTS: list[str] = []
FIXTURES = [interval, hollow_circle, full_triangle, disk_bifurcation, shifted_annulus]
SRC = Path(__file__).resolve().parent.parent / "src" / "conleymorse"


def report(n: int, title: str, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {title} ({detail})"
    RESULTS.append(line)
    print(line)
    assert ok, line


def fixture_fields():
    for make in FIXTURES:
        fx = make()
        for f, N in zip(fx.fields, fx.isolating):
            yield f, N


def random_fields(count: int, seed0: int = 0):
    for seed in range(seed0, seed0 + count):
        rng = random.Random(seed)
        K = random_complex(rng)
        yield rng, K, random_field(rng, K)


def test_criterion_1_oracle_equivalence():
    t = time.perf_counter()
    trials = agree = 0
    for rng, K, f in random_fields(300):
        A = K.all if rng.random() < 0.5 else frozenset(s for s in K.all if rng.random() < 0.7)
        assert len(K) <= 12
        trials += 1
        agree += invariant_part(f, A) == oracle_invariant_part(f, A)
    secs = time.perf_counter() - t
    ok = trials >= 200 and agree == trials and secs < 60
    report(1, "invariant part matches oracle", ok, f"{agree}/{trials} agree in {secs:.1f}s")


def test_criterion_2_minimal_sets_strongly_connected():
    checked = fails = 0
    sources = list(fixture_fields()) + [(f, K.all) for _, K, f in random_fields(200, 1000)]
    for f, N in sources:
        for m in minimal_morse_decomposition(f, N).sets:
            checked += 1
            fails += not (brute_strongly_connected(f, m) and brute_unsplittable(f, m))
    report(2, "minimal Morse sets are strongly connected and unsplittable", fails == 0, f"{checked} sets, {fails} failures")


def test_criterion_3_index_pair_validity():
    checked = fails = 0
    sources = list(fixture_fields()) + [(f, K.all) for _, K, f in random_fields(200, 2000)]
    for f, N in sources:
        for m in minimal_morse_decomposition(f, N).sets:
            rep = validate_index_pair(f, index_pair_pf(f, N, m))
            checked += 1
            fails += not (rep and rep.S == m)
    trials = bad = 0
    seed = 3000
    while trials < 250:
        rng = random.Random(seed)
        seed += 1
        K = random_complex(rng)
        base = random_field(rng, K)
        f1, f2 = random_split(rng, base), random_split(rng, base)
        S1, S2 = random_isolated_set(rng, f1, K.all), random_isolated_set(rng, f2, K.all)
        if S1 is None or S2 is None:
            continue
        trials += 1
        ip = intersect_index_pairs(index_pair_pf(f1, K.all, S1), index_pair_pf(f2, K.all, S2))
        bad += not validate_index_pair(ip.field, ip)
    ok = fails == 0 and bad == 0 and trials >= 200
    report(3, "push-forward and intersection pairs validate", ok, f"{checked} pairs, {trials} intersections, {fails + bad} failures")


def test_criterion_4_index_independence():
    checked = fails = 0
    sources = list(fixture_fields()) + [(f, K.all) for _, K, f in random_fields(150, 4000)]
    for f, N in sources:
        dec = minimal_morse_decomposition(f, N)
        for m in dec.sets:
            pf = index_pair_pf(f, N, m)
            want = conley_index(closure_pair(f, m)).betti
            got = [conley_index(pf).betti] + [conley_index(thicken_index_pair(f, pf, dec, k)).betti for k in (1, 2, 3)]
            checked += 1
            fails += any(g != want for g in got)
    report(4, "Conley index independent of the index pair", fails == 0, f"{checked} Morse sets, {fails} mismatches")


def test_criterion_5_zigzag_audit():
    fails = 0
    for seed in range(500):
        rng = random.Random(seed)
        m = random_module(rng, max_len=9, max_dim=4, p=(2, 3, 5)[seed % 3])
        fails += not audit_barcode(m, interval_decompose(m))
    report(5, "zigzag decompositions pass coverage, arrow and composite audits", fails == 0, f"500 modules, {fails} failures")


def test_criterion_6_algorithms_vs_brute_force():
    seq_bad = bar_bad = 0
    for seed in range(2000):
        rng = random.Random(seed)
        pairs = _synthetic(rng)
        seq_bad += maximal_sequences(pairs, overlap) != brute_maximal_sequences(pairs, overlap)
        filtrations, barcodes = _synthetic_barcodes(random.Random(seed))
        got = [(sb.bar, sb.source) for sb in eliminate_redundancies(filtrations, barcodes)]
        bar_bad += got != brute_maximal_bars(filtrations, barcodes)
    real = 0
    for seed in range(300):
        K, fields = _random_fields(random.Random(seed))
        decs = [minimal_morse_decomposition(f, K.all) for f in fields]
        if any(len(d.sets) > 3 for d in decs):
            continue
        real += 1
        pairs = [index_pairs_for(f, d) for f, d in zip(fields, decs)]
        seq_bad += maximal_sequences(pairs, overlap) != brute_maximal_sequences(pairs, overlap)
        cb = full_barcode(Bundle(K, fields, [K.all] * len(fields)))
        bar_bad += [(sb.bar, sb.source) for sb in cb.conley_bars] != brute_maximal_bars(cb.filtrations, cb.filtration_bars)
    ok = seq_bad == 0 and bar_bad == 0
    report(6, "maximal sequences and maximal bars match enumeration", ok, f"2000 synthetic + {real} field inputs, {seq_bad + bar_bad} mismatches")


def test_criterion_7_disk_bifurcation():
    # Hand enumeration. Field 1: repelling open disk (t^2) over an attracting
    # cycle (1 + t). Field 2: attracting centre (1), repelling band cycle
    # (t + t^2), attracting cycle (1 + t). Field 3: centre (1), semistable
    # cycle (0). Maximal sequences: disk->centre->centre, disk->band->semistable,
    # cycle->cycle->semistable. Their bars, in positions 1..5:
    #   first:  dim 0 [2,5] (centre born in the first overlap), dim 2 [1,1]
    #   second: dim 2 [1,3] (disk class carried into the band), dim 1 [3,3]
    #   third:  dim 0 [1,4], dim 1 [1,4] (cycle dies entering the semistable set)
    # The first filtration's dim 2 [1,1] repeats the second's over position 1
    # and is dropped. One weakly connected Conley-Morse graph throughout.
    D = disk_bifurcation()
    cb = full_barcode(Bundle(D.complex, D.fields, D.isolating))
    got = [(s.bar.dim, s.bar.birth, s.bar.death, s.source) for s in cb.conley_bars]
    want = [(0, 1, 4, 2), (0, 2, 5, 0), (1, 1, 4, 2), (1, 3, 3, 1), (2, 1, 3, 1)]
    graph = [(b.dim, b.birth, b.death) for b in cb.graph_bars]
    dropped = Bar(2, 1, 1) in cb.filtration_bars[0] and all(s.bar != Bar(2, 1, 1) for s in cb.conley_bars)
    ok = got == want and graph == [(0, 1, 5)] and dropped and sum(s.bar.dim == 2 for s in cb.conley_bars) == 1
    report(7, "disk bifurcation barcode matches hand enumeration", ok, f"{len(got)} conley bars, graph bars {graph}")


def test_criterion_8_thickening():
    A = shifted_annulus()
    spans = {}
    for k in (0, 1, 2):
        cb = full_barcode(Bundle(A.complex, A.fields, A.isolating, thicken=k))
        spans[k] = [(s.bar.birth, s.bar.death) for s in cb.conley_bars if s.bar.dim == 1]
    ok = (1, 5) not in spans[0] and all((1, 5) in spans[k] for k in (1, 2))
    report(8, "thickening carries the 1-dim class across all steps", ok, f"dim 1 spans {spans}")


def test_criterion_9_performance():
    D = disk_bifurcation(31)
    t = time.perf_counter()
    cb = full_barcode(Bundle(D.complex, D.fields, D.isolating))
    secs = time.perf_counter() - t
    text = "\n".join(p.read_text() for p in SRC.glob("*.py"))
    exact = not re.search(r"\b(atol|rtol|tol|isclose|allclose)\b", text)
    ok = secs < 10 and exact and len(D.complex) >= 480 and cb.graph_bars
    report(9, "three fields over ~500 simplices, exact arithmetic", ok, f"{len(D.complex)} simplices in {secs:.2f}s")
