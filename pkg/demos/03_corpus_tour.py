"""Run a handful of bundled problems through the batch solver and summarise.

The same reports are produced by the command line, e.g.

    asymprimes corpus:c02_R_in_S_F3 --format machine

This script keeps the windows small so the tour finishes in a few seconds.

    python3 demos/03_corpus_tour.py
"""

from asymprimes.cli import load_corpus, run
from asymprimes.problem import with_options

TOUR = ["f02_Ax_mod_x2", "f03_Ax_mod_ux", "c01_ux_in_Ax", "c02_R_in_S_F3", "e02_split_extension"]

for name in TOUR:
    problem = with_options(load_corpus(name), hi=10)
    doc = run(problem).document
    res = doc["results"]
    line = [f"{name:22}"]
    if "ass_stability" in res:
        a = res["ass_stability"]
        line.append(f"n0={a['n0']} Ass={{{', '.join(a['stable_ass'])}}}")
    if "hilbert" in res:
        h = res["hilbert"]
        line.append(f"{h['kind']} poly={h['polynomial']}")
    if "grade" in res:
        line.append("grades " + " ".join(f"{g['ideal']}:{g['stable']}" for g in res["grade"]))
    line.append(f"[{doc['status']}]")
    print("  ".join(line))
