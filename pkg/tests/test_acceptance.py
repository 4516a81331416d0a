"""Acceptance criteria 1-9.  Each criterion is a function returning
(ok, detail); pytest wraps them and the terminal summary prints one
PASS/FAIL line per criterion.  Also runnable as a script."""

from __future__ import annotations

import functools
import itertools
import random
import sys
import time

import networkx as nx
import pytest

from gridpaths.constructions import build_end_eater, build_gv, build_separator, separator_graph
from gridpaths.embedding import embed_auto, embed_orthogonal
from gridpaths.graph_core import (
    LabeledGraph, complete_graph, cycle_graph, degree_sequence, diamond_labels, is_k4_free, is_triangle_free,
    k_subdivide, line_graph, max_degree, petersen,
)
from gridpaths.np_reductions import lift_is_solution, project_is_solution, reduce_3col, reduce_cc, reduce_is
from gridpaths.representation import (
    Representation, Semantics, check_normal_form, contact_report, derive_graph, normalize_b01,
    triangle_bound_check, validate,
)
from gridpaths.sat_reduction import (
    EXAMPLE_FORMULA, build_reduction_graph, build_reduction_rep, clauses_have_zero_terminal, extract_assignment,
    incidence_graph,
)
from gridpaths.solvers import (
    BudgetExceeded, NotFoundInBox, SearchBudget, all_colorings, is_independent_set, is_k_colorable,
    max_edge_disjoint_triangles, max_independent_set, min_clique_cover, min_vertex_cover, sat_solve, satisfies,
    search_cpg_rep,
)

sys.path.insert(0, __import__("os").path.dirname(__file__))
from instances import (  # noqa: E402
    cubic_instances, random_formula, random_one_bend_family, random_planar_deg4, random_subcubic_triangle_free,
)

RESULTS: dict[int, tuple[bool, str]] = {}
HALVES = {0, 0.5, 1, 1.5}


def timed(limit: float):
    """Run a criterion, fail it when it exceeds limit seconds."""
    def wrap(fn):
        @functools.wraps(fn)
        def run():
            t = time.monotonic()
            ok, detail = fn()
            dt = time.monotonic() - t
            if dt > limit:
                ok, detail = False, detail + "; took %.1fs > %.0fs" % (dt, limit)
            else:
                detail += "; %.1fs" % dt
            return ok, detail
        run.limit = limit
        return run
    return wrap


# -- cached instance builders (criterion 7 reuses every representation) ----------

@functools.lru_cache(maxsize=None)
def cubic_set():
    # 0-bend traced reps serve both the IS and the CC reductions
    return cubic_instances(5, max_bends=0, seed=1)


@functools.lru_cache(maxsize=None)
def sat_reps():
    rng = random.Random(20)
    formulas = [EXAMPLE_FORMULA]
    while len(formulas) < 11:
        f = random_formula(rng, rng.randint(2, 6))
        if sat_solve(f) is not None:
            formulas.append(f)
    out = []
    for f in formulas:
        a = sat_solve(f)
        h = incidence_graph(f)
        emb = embed_orthogonal(h, 4 * len(h) + 4, time_budget=5)
        for i in (1, 2, 3):
            arts = build_reduction_graph(f, i)
            out.append((f, a, arts, build_reduction_rep(arts, a, emb)))
    return out


@functools.lru_cache(maxsize=None)
def is_outputs():
    return [(g, rep, reduce_is(k_subdivide(g, 2), rep)) for g, rep in cubic_set()]


@functools.lru_cache(maxsize=None)
def cc_outputs():
    return [(g, rep, reduce_cc(k_subdivide(g, 2), rep)) for g, rep in cubic_set()]


@functools.lru_cache(maxsize=None)
def normalization_runs():
    rng = random.Random(3)
    out = []
    while len(out) < 24:
        g = random_subcubic_triangle_free(rng)
        k = rng.choice((0, 1))
        try:
            rep = search_cpg_rep(g, k, 6, SearchBudget(wall_limit=5))
        except (NotFoundInBox, BudgetExceeded):
            continue
        out.append((g, rep, normalize_b01(g, rep)))
    return out


@functools.lru_cache(maxsize=None)
def witnesses():
    gv = build_gv().graph
    return [(name, g, k, search_cpg_rep(g, k, 12, SearchBudget(wall_limit=50)))
            for name, g, k in (("K3", complete_graph(3), 0), ("K4", complete_graph(4), 0), ("G(v)", gv, 1))]


# -- criteria -------------------------------------------------------------------

@timed(5)
def criterion_1():
    bad = []
    for k in range(7):
        b = build_separator(k)
        g = separator_graph(k)
        good = (validate(b.rep).ok and b.rep.max_bends() == k + 1 and derive_graph(b.rep) == g
                and len(g) == 22 + 19 * (k + 2) and g.num_edges() == 41 + 19 * (3 * k + 5))
        if not good:
            bad.append(k)
    return not bad, "G_k for k=0..6" + (", failing k=%s" % bad if bad else "")


@timed(30)
def criterion_2():
    e2, e3 = build_end_eater(2).graph, build_end_eater(3).graph
    pack = max_edge_disjoint_triangles(e3)[0]
    checks = {
        "E2 6-regular on 18": len(e2) == 18 and set(degree_sequence(e2)) == {6},
        "E3 22/60": (len(e3), e3.num_edges()) == (22, 60),
        "E3 K4-free": is_k4_free(e3),
        "E3 packing 16": pack == 16,
    }
    for i in (1, 2, 3):
        b = build_end_eater(i)
        checks["E%d rep" % i] = validate(b.rep).ok and b.rep.max_bends() == i and derive_graph(b.rep) == b.graph
    bad = [k for k, v in checks.items() if not v]
    return not bad, "E3 packing=%d" % pack + (", failing: %s" % bad if bad else "")


@timed(120)
def criterion_3():
    bad = []
    runs = sat_reps()
    for f, a, arts, rep in runs:
        i = arts.i
        good = (validate(rep).ok and rep.max_bends() == max(1, i) and derive_graph(rep) == arts.graph
                and satisfies(f, extract_assignment(rep, arts)) and clauses_have_zero_terminal(rep, arts, check=False))
        if not good:
            bad.append((f.variables, i))
    return not bad, "%d formulas x i=1,2,3 (%d reps)" % (len(runs) // 3, len(runs)) + (
        ", failing %s" % bad if bad else "")


@timed(120)
def criterion_4():
    bad, notes = [], []
    for g, _, red in is_outputs():
        h = k_subdivide(g, 2)
        a_in, s_in = max_independent_set(h)
        a_out, s_out = max_independent_set(red.out_graph)
        lifted = lift_is_solution(h, s_in)
        back = project_is_solution(red, s_out)
        good = (a_out == a_in + 2 * len(h) and validate(red.out_rep).ok and red.out_rep.max_bends() == 0
                and derive_graph(red.out_rep) == red.out_graph
                and is_independent_set(red.out_graph, lifted) and len(lifted) == a_in + 2 * len(h)
                and is_independent_set(h, back) and len(back) >= a_out - 2 * len(h))
        notes.append("%d:%d->%d" % (len(g), a_in, a_out))
        if not good:
            bad.append(len(g))
    k4 = notes[0] == "4:7->39"
    return not bad and k4, "alpha in->out by base size %s" % " ".join(notes) + (
        ", failing %s" % bad if bad else "")


@timed(120)
def criterion_5():
    bad, notes = [], []
    for g, _, red in cc_outputs():
        h2 = k_subdivide(k_subdivide(g, 2), 2)
        theta = min_clique_cover(red.out_graph)[0]
        beta = min_vertex_cover(h2)[0]
        good = (theta == beta and validate(red.out_rep).ok and red.out_rep.max_bends() == 0
                and red.out_graph == line_graph(h2) and derive_graph(red.out_rep) == red.out_graph)
        notes.append("%d:%d" % (len(g), theta))
        if not good:
            bad.append(len(g))
    # the identity behind the reduction, on the K4 instance itself
    k4 = k_subdivide(complete_graph(4), 2)
    ident = min_clique_cover(line_graph(k4))[0] == min_vertex_cover(k4)[0] == 9
    return not bad and ident, ("theta(out)=beta(2-subdivision of in) by base size %s; "
                               "theta(L(in))=beta(in)=9 on K4: %s" % (" ".join(notes), ident)) + (
        ", failing %s" % bad if bad else "")


def petersen_substitutes(count: int = 2) -> list[LabeledGraph]:
    """Petersen minus the fewest edges making it planar, first few choices."""
    p = petersen()
    out = []
    for r in range(1, 4):
        for drop in itertools.combinations(p.edges, r):
            keep = [e for e in p.edges if e not in drop]
            if nx.check_planarity(nx.Graph(keep))[0]:
                out.append(LabeledGraph(p.vertices, keep, name="petersen-%d" % len(out)))
                if len(out) == count:
                    return out
        if out:
            return out
    return out


def diamonds_force_equality(g: LabeledGraph, bends) -> bool:
    for (u, v), k in bends.items():
        prev = u
        for j in range(1, k + 2):
            wa, wb, z = diamond_labels(u, v, j)
            d = g.subgraph([prev, wa, wb, z])
            cols = list(all_colorings(d, 3))
            if not cols or any(c[prev] != c[z] for c in cols):
                return False
            prev = z
    return True


@timed(120)
def criterion_6():
    rng = random.Random(5)
    gs = [complete_graph(4), cycle_graph(5)] + petersen_substitutes() + [random_planar_deg4(rng) for _ in range(5)]
    bad, notes = [], []
    for g in gs:
        emb = embed_auto(g)
        red = reduce_3col(g, emb)
        bends = {e: p.bends() for e, p in emb.edge_paths.items()}
        a = is_k_colorable(g, 3)[0]
        b = is_k_colorable(red.out_graph, 3)[0]
        good = (a == b and red.out_rep.semantics is Semantics.EPG and red.out_rep.max_bends() <= 1
                and derive_graph(red.out_rep) == red.out_graph and diamonds_force_equality(red.out_graph, bends))
        notes.append("%s:%s" % (g.name, "Y" if a else "N"))
        if not good:
            bad.append(g.name)
    return not bad, "%d graphs %s" % (len(gs), " ".join(notes)) + (", failing %s" % bad if bad else "")


def generated_cpg_reps() -> list[tuple[str, Representation]]:
    reps = [("G_%d" % k, build_separator(k).rep) for k in range(7)]
    reps += [("E%d" % i, build_end_eater(i).rep) for i in (1, 2, 3)]
    reps.append(("G(v)", build_gv().rep))
    reps += [("sat %s i=%d" % (",".join(f.variables), arts.i), rep) for f, _, arts, rep in sat_reps()]
    for g, rep, red in is_outputs():
        reps += [("traced %d" % len(g), rep), ("is %d" % len(g), red.out_rep)]
    reps += [("cc %d" % len(g), red.out_rep) for g, _, red in cc_outputs()]
    for g, rep, out in normalization_runs() + non_normal_families():
        reps += [("input %s" % g.edges, rep), ("normal %s" % g.edges, out)]
    reps += [("witness %s" % name, rep) for name, _, _, rep in witnesses()]
    return reps


@timed(120)
def criterion_7():
    reps = generated_cpg_reps()
    bad = []
    bounds = 0
    for name, rep in reps:
        cr = contact_report(rep)
        g = derive_graph(rep)
        good = cr.total_weight() >= g.num_edges() and all(float(w) in HALVES for w in cr.endpoint_weights.values())
        if good and all(c.multiplicity < 4 for c in cr.contact_points):
            bounds += 1
            good = triangle_bound_check(rep).holds
        if not good:
            bad.append(name)
    return not bad and len(reps) >= 50, "%d CPG reps, triangle bound checked on %d" % (len(reps), bounds) + (
        ", failing %s" % bad[:5] if bad else "")


@functools.lru_cache(maxsize=None)
def non_normal_families(count: int = 30):
    """Random valid 1-bend families violating at least one normal-form property."""
    rng = random.Random(8)
    out = []
    while len(out) < count:
        rep = Representation(random_one_bend_family(rng))
        if not validate(rep).ok:
            continue
        g = derive_graph(rep)
        if g.num_edges() < 2 or max_degree(g) > 3 or not is_triangle_free(g):
            continue
        if not check_normal_form(g, rep).ok:
            out.append((g, rep, normalize_b01(g, rep)))
    return out


@timed(60)
def criterion_8():
    searched = normalization_runs()
    perturbed = non_normal_families()
    bad = []
    broken = [0, 0, 0]
    for g, rep, out in searched + perturbed:
        nf = check_normal_form(g, rep)
        for j, flag in enumerate((nf.touch_once, nf.cubic_iff_contains, nf.no_bend_contact)):
            broken[j] += not flag
        if not (derive_graph(out) == g and check_normal_form(g, out).ok):
            bad.append(g.edges)
    return not bad and len(searched) >= 20, (
        "%d searched + %d random non-normal instances; inputs breaking (a)/(b)/(c): %d/%d/%d"
        % (len(searched), len(perturbed), *broken)) + (", failing %s" % bad[:3] if bad else "")


@timed(60)
def criterion_9():
    notes, ok = [], True
    for name, g, k, rep in witnesses():
        x0, y0, x1, y1 = rep.bbox()
        good = (validate(rep).ok and rep.max_bends() <= k and derive_graph(rep) == g
                and x1 - x0 < 12 and y1 - y0 < 12)
        ok &= good
        notes.append("%s B%d %dx%d" % (name, k, x1 - x0 + 1, y1 - y0 + 1))
    return ok, ", ".join(notes)


# criterion 7 last: it sweeps the representations the others build
ORDER = (1, 2, 3, 4, 5, 6, 8, 9, 7)
CRITERIA = {n: globals()["criterion_%d" % n] for n in ORDER}


@pytest.mark.parametrize("n", ORDER)
def test_criterion(n):
    ok, detail = CRITERIA[n]()
    RESULTS[n] = (ok, detail)
    print("criterion %d: %s (%s)" % (n, "PASS" if ok else "FAIL", detail))
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for n, fn in CRITERIA.items():
        ok, detail = fn()
        failed += not ok
        print("criterion %d: %s (%s)" % (n, "PASS" if ok else "FAIL", detail), flush=True)
    sys.exit(1 if failed else 0)
