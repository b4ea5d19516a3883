"""Suite catalog used by the command line: each suite turns a config into report items."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from .cantor import Arity, ClopenSet, complement, intersect, is_subset, parse_brickset, parse_clopen, union
from .criterion import families as fams
from .criterion.suite import run_criterion_suite, run_item
from .criterion.witnesses import (
    build_cover_A,
    decompose_A,
    extremely_proximal_witness,
    fixes_pointwise,
    property2_witness,
    property3_witness,
    random_B,
    sample_A,
)
from .elements import CircleMap, element_to_dict
from .elements.circle import random_element as random_circle
from .hypgraph import (
    all_distances,
    binary_tree,
    cone_off,
    cone_off_oracle,
    cycle_graph,
    delta_four_point,
    delta_oracle,
    left_spine,
    parse_edgelist,
    path_graph,
    random_tree,
    to_dot,
    verify_coneoff,
)
from .points import sample_points
from . import quasi as qz


class ConfigError(ValueError):
    pass


def _rng(cfg, tag: str, i: int) -> random.Random:
    return random.Random(f"{cfg.seed}/{tag}/{i}")


def cantor_family(cfg):
    fam = cfg.family
    if fam == "V":
        return fams.VFamily(Arity(cfg.n, cfg.r))
    if fam == "sV":
        return fams.brin_thompson(cfg.s)
    if fam == "SVG":
        return fams.symmetric_twisted(cfg.s)
    raise ConfigError(f"family {fam!r} has no Cantor-set model here (use V, sV or SVG)")


# --------------------------------------------------------------------------
# criterion, properties, proximality


def suite_criterion(cfg) -> list[dict]:
    fam = "T" if cfg.family == "T" else cantor_family(cfg)
    return run_criterion_suite(fam, cfg.budget, cfg.seed)["items"]


def suite_properties(cfg) -> list[dict]:
    fam = cantor_family(cfg)
    if cfg.budget <= 0:
        return []
    cover = build_cover_A(fam)
    items = []
    for i in range(cfg.budget):
        rng = _rng(cfg, "P1", i)

        def body(rep, rng=rng):
            g = fam.random_element(rng)
            fs = decompose_A(g, cover, fam)
            prod = fs[0]
            for f in fs[1:]:
                prod = prod * f
            rep.inputs = {"g": element_to_dict(g)}
            rep.witnesses = {"factors": [element_to_dict(f) for f in fs]}
            rep.checks = {
                "at most 3 factors": len(fs) <= 3,
                "product equals g": prod == g,
                "each factor fixes a cover member": all(any(fixes_pointwise(f, s) for s in cover.sets) for f in fs),
            }

        items.append(run_item("P1", i, body))
    for i in range(cfg.budget):
        rng = _rng(cfg, "P2", i)

        def body(rep, rng=rng):
            b1, b2 = random_B(fam, rng), random_B(fam, rng)
            chain = property2_witness(b1, b2, fam)
            rep.inputs = {"b": element_to_dict(b1), "b'": element_to_dict(b2)}
            rep.witnesses = {"g": element_to_dict(chain.g), "h": element_to_dict(chain.h)}
            rep.checks = chain.checks

        items.append(run_item("P2", i, body))
    for i in range(max(1, cfg.budget // 5)):
        rng = _rng(cfg, "P3", i)

        def body(rep, rng=rng):
            g, h = fam.random_element(rng), fam.random_element(rng)
            sa = [sample_A(fam, cover, rng) for _ in range(10)]
            res = property3_witness(g, h, cover, sa, fam)
            rep.inputs = {"g": element_to_dict(g), "h": element_to_dict(h), "sampled_a": len(sa)}
            rep.witnesses = {
                "M": str(res.M),
                "N": str(res.N),
                "P": str(res.P),
                "b": element_to_dict(res.b),
                "factorization_lengths": {str(k): len(v) for k, v in sorted(res.factorizations.items())},
            }
            rep.checks = {
                f"a[{k}] {name}": ok for k, c in enumerate(res.checks) for name, ok in sorted(c["verdicts"].items())
            }
            rep.note = "factorization of each f through A is recorded, not verified"

        items.append(run_item("P3", i, body))
    return items


def parse_set(fam, text: str):
    if isinstance(fam, fams.VFamily):
        return parse_clopen(text, fam.arity)
    return parse_brickset(text, fam.dims)


def suite_proximality(cfg) -> list[dict]:
    """Random pairs, preceded by any explicit ``pairs`` from the config (set literals)."""
    fam = cantor_family(cfg)
    try:
        given = [(parse_set(fam, u), parse_set(fam, v)) for u, v in cfg.pairs]
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"pairs: {exc}") from exc
    items = []
    for i in range(len(given) + cfg.budget):
        rng = _rng(cfg, "EP", i)

        def body(rep, rng=rng, i=i):
            if i < len(given):
                u, v = given[i]
            else:
                u = fams.random_proper_set(fam, rng)
                v = fams.random_proper_set(fam, rng)
            f = extremely_proximal_witness(u, v, fam)
            rep.inputs = {"U": str(u), "V": str(v)}
            rep.witnesses = {"f": element_to_dict(f)}
            rep.checks = {"fU inside V": is_subset(f.image(u), v)}

        items.append(run_item("EP", i, body))
    return items


# --------------------------------------------------------------------------
# group laws


def _random_of(cfg):
    if cfg.family == "T":
        return lambda rng: random_circle(rng, 8), CircleMap.identity(), None
    fam = cantor_family(cfg)
    return lambda rng: fam.random_element(rng), fam.identity(), fam.full()


def suite_grouplaws(cfg) -> list[dict]:
    gen, ident, full = _random_of(cfg)
    items = []
    for i in range(cfg.budget):
        rng = _rng(cfg, "laws", i)

        def body(rep, rng=rng):
            f, g, h = gen(rng), gen(rng), gen(rng)
            checks = {
                "associativity": (f * g) * h == f * (g * h),
                "right inverse": (f * f.inverse()) == ident,
                "left inverse": (f.inverse() * f) == ident,
                "identity": ident * f == f and f * ident == f,
            }
            if full is not None:
                pts = sample_points(full, 10)
                checks["pointwise composition"] = all((f * g)(p) == f(g(p)) for p in pts)
            else:
                xs = [Fraction(k, 16) + Fraction(1, 64) for k in range(16)]
                checks["pointwise composition"] = all((f * g)(x) == f(g(x)) for x in xs)
            rep.checks = checks

        items.append(run_item("laws", i, body))
    return items


# --------------------------------------------------------------------------
# clopen algebra


def truncation(s, depth: int) -> frozenset:
    """Words of length ``depth`` whose cylinder lies in ``s`` (independent of the canonical form)."""
    a = s.arity
    out = set()
    for root in range(a.r):
        for w in itertools.product(a.digits, repeat=depth):
            word = "".join(w)
            if any(c.root == root and word.startswith(c.word) for c in s.cylinders):
                out.add((root, word))
    return frozenset(out)


def all_sets(arity: Arity, depth: int) -> list[ClopenSet]:
    """Every union of depth-``depth`` cells; the list index is the cell bitmask."""
    cells = [(root, "".join(w)) for root in range(arity.r) for w in itertools.product(arity.digits, repeat=depth)]
    return [
        ClopenSet(arity, [c for k, c in enumerate(cells) if mask >> k & 1]) for mask in range(2 ** len(cells))
    ]


def exhaustive_clopen(arity: Arity, depth: int) -> dict:
    """All pairs of sets on the depth grid, against bitmask arithmetic.

    Operation tables are filled once per pair with the library operations;
    the identities are then table lookups, and every table entry is
    compared with the set built from the corresponding bitmask.
    """
    sets = all_sets(arity, depth)
    full = len(sets) - 1
    index = {x: i for i, x in enumerate(sets)}
    bad = {"oracle": 0, "involution": 0, "de Morgan": 0, "absorption": 0}
    if len(index) != len(sets):
        bad["oracle"] += len(sets) - len(index)
    comp = [index.get(complement(x), -1) for x in sets]
    for i in range(len(sets)):
        bad["oracle"] += comp[i] != full ^ i
        bad["involution"] += comp[i] < 0 or complement(sets[comp[i]]) != sets[i]
    U = [[0] * len(sets) for _ in sets]
    X = [[0] * len(sets) for _ in sets]
    for i, a in enumerate(sets):
        Ui, Xi = U[i], X[i]
        for j, b in enumerate(sets):
            Ui[j] = index.get(union(a, b), -1)
            Xi[j] = index.get(intersect(a, b), -1)
            m = index.get(a - b, -1)
            bad["oracle"] += (Ui[j] != i | j) + (Xi[j] != i & j) + (m != i & ~j & full)
    for i in range(len(sets)):
        for j in range(len(sets)):
            u, x = U[i][j], X[i][j]
            bad["de Morgan"] += comp[u] != X[comp[i]][comp[j]] or comp[x] != U[comp[i]][comp[j]]
            bad["absorption"] += U[i][x] != i or X[i][u] != i
    return {"sets": len(sets), "pairs": len(sets) ** 2, "mismatches": bad}


def sampled_clopen(arity: Arity, depth: int, rng: random.Random, k: int) -> dict:
    """``k`` random pairs on the depth grid, against the depth-truncation oracle."""
    grid = [(root, "".join(w)) for root in range(arity.r) for w in itertools.product(arity.digits, repeat=depth)]

    def rnd():
        return ClopenSet(arity, [c for c in grid if rng.random() < 0.5])

    bad = 0
    for _ in range(k):
        checks = clopen_identities(rnd(), rnd(), depth + 1)
        bad += not all(checks.values())
    return {"pairs": k, "mismatches": bad}


def suite_clopen(cfg) -> list[dict]:
    """Exhaustive pairs when the depth grid has at most 8 cells, seeded samples otherwise."""
    arity = Arity(cfg.n, cfg.r)
    depth = cfg.depth

    def body(rep):
        rep.inputs = {"n": arity.n, "r": arity.r, "depth": depth}
        if arity.r * arity.n**depth <= 8:
            res = exhaustive_clopen(arity, depth)
            rep.inputs["mode"] = "exhaustive"
            rep.checks = {f"{k}: zero mismatches": v == 0 for k, v in sorted(res["mismatches"].items())}
        else:
            res = sampled_clopen(arity, depth, _rng(cfg, "clopen", 0), cfg.budget * 10)
            rep.inputs["mode"] = "sampled"
            rep.checks = {"zero mismatches": res["mismatches"] == 0}
        rep.witnesses = res

    return [run_item("clopen", "all", body)]


# --------------------------------------------------------------------------
# graphs


def load_graph(cfg):
    if cfg.graph is None:
        return binary_tree(8)
    spec = str(cfg.graph)
    kind, _, arg = spec.partition(":")
    if kind == "path" and arg:
        return path_graph(int(arg))
    if kind == "cycle" and arg:
        return cycle_graph(int(arg))
    if kind == "tree" and arg:
        return binary_tree(int(arg))
    try:
        with open(spec) as fh:
            return parse_edgelist(fh.read())
    except OSError as exc:
        raise OSError(f"cannot read graph file {spec!r}: {exc}") from exc


def default_orbit(cfg, g) -> list[int]:
    if cfg.orbit is not None:
        return list(cfg.orbit)
    if str(cfg.graph or "tree").startswith("tree"):
        depth = (g.n + 1).bit_length() - 2
        return left_spine(depth)
    return [0]


def suite_coneoff(cfg, artifacts: dict | None = None) -> list[dict]:
    g = load_graph(cfg)
    orbit = default_orbit(cfg, g)
    D = all_distances(g)
    items = []
    for R in cfg.R:
        def body(rep, R=R):
            co = cone_off(g, orbit, R, D)
            rep.inputs = {"graph": str(cfg.graph or "tree:8"), "vertices": g.n, "orbit": orbit, "R": R}
            DY = all_distances(co.graph)
            checks = {"pi_R 1-Lipschitz": bool((DY <= D).all())}
            if g.n <= 60:
                checks["matches geodesic enumeration"] = set(co.new_edges) == cone_off_oracle(g, orbit, R)
            rep.witnesses = {"new_edges": len(co.new_edges)}
            if g.n <= 4096:
                vr = verify_coneoff(g, orbit, R, orbit, samples=20, seed=cfg.seed)
                rep.witnesses.update(
                    {"K": round(vr.K, 9), "distortion": round(vr.distortion, 9), "hausdorff": vr.hausdorff,
                     "precondition": vr.precondition, "Q": vr.Q}
                )
            rep.checks = checks
            if artifacts is not None:
                artifacts[f"coneoff_R{R}.dot"] = to_dot(co.graph, co.new_edges, name=f"Y_{R}")

        items.append(run_item("coneoff", R, body))
    if len(cfg.R) > 1:
        def mono(rep):
            sets = [set(cone_off(g, orbit, R, D).new_edges) for R in sorted(cfg.R)]
            rep.checks = {"monotone in R": all(b <= a for a, b in zip(sets, sets[1:]))}

        items.append(run_item("coneoff-monotone", "R", mono))
    return items


def suite_delta(cfg) -> list[dict]:
    items = []
    for i in range(cfg.budget):
        rng = _rng(cfg, "delta", i)

        def body(rep, rng=rng):
            n = rng.randint(4, 60)
            t = random_tree(n, rng.random())
            res = delta_four_point(t)
            rep.inputs = {"tree_vertices": n}
            rep.witnesses = {"delta": str(res.delta)}
            rep.checks = {"tree is 0-hyperbolic": res.delta == 0 and res.exact}

        items.append(run_item("delta", i, body))
    if cfg.budget > 0:
        for k in (4, 8, 12):
            def body(rep, k=k):
                c = cycle_graph(k)
                D = all_distances(c)
                res = delta_four_point(c, D)
                rep.inputs = {"cycle": k}
                rep.witnesses = {"delta": str(res.delta)}
                rep.checks = {"matches exhaustive oracle": res.delta == delta_oracle(D.tolist(), k)}

            items.append(run_item("delta-cycle", k, body))
    return items


# --------------------------------------------------------------------------
# quasimorphisms


def suite_quasi(cfg) -> list[dict]:
    if cfg.budget <= 0:
        return []
    Z = qz.integers()
    ks = range(-20, 21)
    items = []

    def hom(rep):
        d = qz.defect_estimate(qz.homomorphism_Z(), itertools.product(ks, ks), Z)
        rep.witnesses = {"defect": str(d)}
        rep.checks = {"homomorphism has defect 0": d == 0}

    items.append(run_item("defect", "Z", hom))

    def brk(rep):
        q = qz.parity_perturbed_Z()
        D = qz.defect_estimate(q, itertools.product(ks, ks), Z)
        rng = _rng(cfg, "bracket", 0)
        res = [qz.homogenize_estimate(q, rng.randint(-30, 30), rng.randint(1, 200), Z, D) for _ in range(cfg.budget)]
        rep.witnesses = {"defect": str(D), "samples": len(res)}
        rep.checks = {"bracket |beta - q| <= D": all(r.bracket_ok for r in res)}

    items.append(run_item("homogenize", "Z", brk))

    def cocycle(rep):
        Dh = qz.dihedral()
        els = [(k, e) for k in range(-15, 16) for e in (1, -1)]
        pairs = list(itertools.product(els, els))
        reg = qz.quasicocycle_extend(qz.translation_part(lambda k: k), qz.dihedral_sign, (0, -1), Dh)
        beta2 = qz.translation_part(lambda k: k + k % 2)
        pert = qz.quasicocycle_extend(beta2, qz.dihedral_sign, (0, -1), Dh)
        trans = [e for e in els if e[1] == 1]
        d_beta = qz.defect_estimate(beta2, itertools.product(trans, trans), Dh)
        d_pert = pert.defect(pairs, Dh)
        rep.witnesses = {"regular": str(reg.defect(pairs, Dh)), "perturbed": str(d_pert), "beta_defect": str(d_beta)}
        rep.checks = {
            "sign map is a homomorphism": qz.check_sign_homomorphism(qz.dihedral_sign, els, Dh),
            "regular case is a cocycle": reg.defect(pairs, Dh) == 0,
            "perturbed defect <= 2 D(beta)": d_pert <= 2 * d_beta,
            "restriction to kernel is beta": all(pert.phi(t) == beta2(t) for t in trans),
        }

    items.append(run_item("quasicocycle", "D_inf", cocycle))

    def qline(rep):
        r = qz.quasiline_generators(qz.homomorphism_Z(), Z, 3, 50)
        rep.witnesses = {"X": sorted(r.X), "a": r.a, "b": str(r.b)}
        rep.checks = {
            "|k|_X = ceil(|k|/2)": all(r.word_length[k] == -(-abs(k) // 2) for k in range(-50, 51)),
            "affine bounds a=2, b=1": r.holds(2, 1, qz.homomorphism_Z()),
        }

    items.append(run_item("quasiline", "Z", qline))

    def wreath(rep):
        W = qz.WreathModel(5, 2)
        rng = _rng(cfg, "wreath", 0)
        pairs = qz.sample_pairs(W.random, rng, 1000)
        d0 = qz.defect_estimate(qz.wreath_lift(lambda a: a, W), pairs, W.oracle())
        d1 = qz.defect_estimate(qz.wreath_lift(lambda a: a + a % 2, W), pairs, W.oracle())
        rep.witnesses = {"hom_lift_defect": str(d0), "perturbed_lift_defect": str(d1)}
        rep.checks = {"lift of homomorphism has defect 0": d0 == 0, "perturbed lift defect <= 5*2": d1 <= 10}

    items.append(run_item("wreath", "Z wr Z/5", wreath))

    def link(rep):
        from .hypgraph import GraphMap, rotation_map, shift_map

        P = path_graph(101)
        ray = qz.RaySpec(P, tuple(range(101)))
        rate = Fraction(str(cfg.tolerance.get("min_rate", "1/4")))
        v1 = qz.loxodromic_link_check(ray, shift_map(101, 2), min_rate=rate)
        C = cycle_graph(12)
        v2 = qz.loxodromic_link_check(qz.RaySpec(C, tuple(range(7))), rotation_map(12, 1), n_max=24, min_rate=rate)
        v3 = qz.loxodromic_link_check(ray, GraphMap.identity(101), min_rate=rate)
        rep.witnesses = {
            "path shift": [str(v1.beta_hat), str(v1.ell_hat)],
            "cycle rotation": [str(v2.beta_hat), str(v2.ell_hat)],
            "identity": [str(v3.beta_hat), str(v3.ell_hat)],
        }
        rep.checks = {"path shift": v1.consistent, "cycle rotation": v2.consistent, "identity": v3.consistent}

    items.append(run_item("busemann", "link", link))
    return items


SUITES = {
    "criterion": (suite_criterion, "conditions (C), (2T), (3T), (L) on a family; 6-point transitivity for T"),
    "properties": (suite_properties, "Properties (1)-(3): bounded generation by A, commuting chains, B-membership"),
    "proximality": (suite_proximality, "extreme proximality: f U inside V for random clopen pairs"),
    "grouplaws": (suite_grouplaws, "associativity, inverses, identity and pointwise composition per family"),
    "clopen": (suite_clopen, "boolean identities of clopen sets against a depth-truncation oracle"),
    "coneoff": (suite_coneoff, "cone-off Y_R: edge oracle, 1-Lipschitz projection, monotonicity, (K,K) fit"),
    "delta": (suite_delta, "four-point hyperbolicity on random trees and cycles"),
    "quasi": (suite_quasi, "quasimorphism lab: defect, homogenization, quasicocycles, quasi-lines, wreath lift"),
}
