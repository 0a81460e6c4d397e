"""Taut double-dimer configurations on windows of stepped-surface graphs.

A double-dimer configuration assigns each edge multiplicity 0, 1 or 2 with
every vertex meeting total multiplicity 2; multiplicity-1 edges decompose
into disjoint paths and closed loops.  Configurations are enumerated inside
an active zone around the removed cubes; outside they are frozen to the
reference configuration, and tautness means the induced pairing of far path
ends agrees with the reference.

The reference configuration on the cubic corner graph is: far from the apex,
every leg has multiplicity 1 and each small quad carries its (+i,+j) and
(-i,-j) sides with multiplicity 1 (parallel diagonal staircases); near the
apex it is the unique loop-free completion meeting the face counts
d(quad)=2, d(2k-gon)=2k-2 except d=3 on the apex hexagon.  That completion
is solved once by exhaustive search and cached.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Mapping

from .lattice import Point, SteppedSolid, vertex
from .laurent import LaurentPoly, VarTable, to_json
from .surface import SurfaceGraph, build_graph, square_center


class DimerError(Exception):
    pass


class WindowTooSmall(DimerError):
    """A taut configuration differs from the reference at the active boundary."""


def far_multiplicity(eid: tuple) -> int:
    """Reference multiplicity away from the apex: legs 1, equal-sign sides 1."""
    if eid[0] == "l":
        return 1
    _, _base, _n, d1, d2 = eid
    return 1 if d1[1] == d2[1] else 0


def _edge_squares(sg: SurfaceGraph, eid) -> list:
    e = sg.graph.edges[eid]
    out = []
    for vid in (e.u, e.v):
        _, base, n, _a, _s = vid
        if (base, n) not in out:
            out.append((base, n))
    return out


def _center_within(sq, bound: int) -> bool:
    c = square_center(sq)
    return all(abs(x) <= 2 * bound for x in c.d)


# -- constrained enumeration ----------------------------------------------------


class _Enumerator:
    """Backtracking over edge multiplicities with vertex/face sum constraints."""

    def __init__(self, var_edges: list, adj_vertices: dict, vertex_base: dict,
                 faces: list | None = None, limit: int | None = None):
        self.var_edges = var_edges
        self.n = len(var_edges)
        self.limit = limit
        vids = sorted(adj_vertices, key=repr)
        vindex = {v: i for i, v in enumerate(vids)}
        self.v_target = [2] * len(vids)
        self.v_sum = [vertex_base.get(v, 0) for v in vids]
        self.v_rem = [0] * len(vids)
        self.edge_vs = []
        for eid in var_edges:
            idxs = [vindex[v] for v in adj_vertices_of(adj_vertices, eid)]
            self.edge_vs.append(idxs)
            for i in idxs:
                self.v_rem[i] += 1
        self.f_target, self.f_sum, self.f_rem, self.edge_fs = [], [], [], [[] for _ in var_edges]
        if faces:
            eindex = {eid: i for i, eid in enumerate(var_edges)}
            for target, base, members in faces:
                fi = len(self.f_target)
                self.f_target.append(target)
                self.f_sum.append(base)
                cnt = 0
                for eid in members:
                    if eid in eindex:
                        self.edge_fs[eindex[eid]].append(fi)
                        cnt += 1
                self.f_rem.append(cnt)

    def run(self):
        sols: list[tuple] = []
        mult = [0] * self.n
        v_sum, v_rem = self.v_sum, self.v_rem
        f_sum, f_rem = self.f_sum, self.f_rem
        v_target, f_target = self.v_target, self.f_target

        def feasible_v(i: int) -> bool:
            return v_sum[i] <= 2 and v_sum[i] + 2 * v_rem[i] >= 2 and (
                v_rem[i] > 0 or v_sum[i] == 2)

        def feasible_f(i: int) -> bool:
            return f_sum[i] <= f_target[i] and f_sum[i] + 2 * f_rem[i] >= f_target[i] and (
                f_rem[i] > 0 or f_sum[i] == f_target[i])

        def rec(k: int) -> bool:
            if k == self.n:
                sols.append(tuple(mult))
                return self.limit is not None and len(sols) >= self.limit
            vs, fs = self.edge_vs[k], self.edge_fs[k]
            for m in (0, 1, 2):
                mult[k] = m
                ok = True
                for i in vs:
                    v_sum[i] += m
                    v_rem[i] -= 1
                for i in fs:
                    f_sum[i] += m
                    f_rem[i] -= 1
                for i in vs:
                    if not feasible_v(i):
                        ok = False
                        break
                if ok:
                    for i in fs:
                        if not feasible_f(i):
                            ok = False
                            break
                if ok and rec(k + 1):
                    return True
                for i in vs:
                    v_sum[i] -= m
                    v_rem[i] += 1
                for i in fs:
                    f_sum[i] -= m
                    f_rem[i] += 1
            mult[k] = 0
            return False

        rec(0)
        return sols


def adj_vertices_of(adj_vertices: dict, eid) -> list:
    return adj_vertices[eid]


def _order_edges(sg: SurfaceGraph, edges: Iterable) -> list:
    """BFS-like order over shared vertices keeps the assignment frontier compact."""
    edges = set(edges)
    by_vertex: dict = {}
    for eid in edges:
        e = sg.graph.edges[eid]
        by_vertex.setdefault(e.u, []).append(eid)
        by_vertex.setdefault(e.v, []).append(eid)
    order, seen, queue = [], set(), []
    for start in sorted(edges, key=repr):
        if start in seen:
            continue
        queue.append(start)
        seen.add(start)
        while queue:
            eid = queue.pop()
            order.append(eid)
            e = sg.graph.edges[eid]
            for vid in (e.u, e.v):
                for nxt in sorted(by_vertex.get(vid, []), key=repr):
                    if nxt not in seen:
                        seen.add(nxt)
                        queue.append(nxt)
    return order


# -- reference configuration ----------------------------------------------------

_M0_CACHE: dict[int, dict] = {}
_M0_RADIUS = 4


def reference_apex_solution(radius: int = _M0_RADIUS) -> dict:
    """Solve and cache the reference multiplicities near the apex of the corner graph."""
    if radius in _M0_CACHE:
        return _M0_CACHE[radius]
    corner = SteppedSolid.corner()
    pad = radius + 3
    sg = build_graph(corner, (-pad, -pad, -pad), (1, 1, 1))
    solve_squares = {sq for sq in sg.squares if _center_within(sq, radius)}
    var_edges, frozen = [], {}
    for eid in sg.graph.edges:
        if all(sq in solve_squares for sq in _edge_squares(sg, eid)):
            var_edges.append(eid)
        else:
            frozen[eid] = far_multiplicity(eid)
    adj, base = {}, {}
    touched = set()
    for eid in var_edges:
        e = sg.graph.edges[eid]
        adj[eid] = [e.u, e.v]
        touched.update((e.u, e.v))
    for vid in touched:
        base[vid] = 0
    for eid, m in frozen.items():
        e = sg.graph.edges[eid]
        for vid in (e.u, e.v):
            if vid in touched:
                base[vid] = base.get(vid, 0) + m
    var_set = set(var_edges)
    faces = []
    origin = vertex(0, 0, 0)
    for f in sg.labeled_faces():
        eids = f.edge_ids()
        if not any(eid in var_set for eid in eids):
            continue
        target = f.size - 2 - (1 if f.label == origin else 0)
        fbase = sum(frozen.get(eid, 0) for eid in eids if eid not in var_set)
        faces.append((target, fbase, eids))
    order = _order_edges(sg, var_edges)
    enum = _Enumerator(order, adj, base, faces)
    sols = enum.run()
    good = []
    for sol in sols:
        mults = dict(frozen)
        mults.update({eid: m for eid, m in zip(order, sol)})
        if not _has_variable_loop(sg, mults, var_set):
            good.append({eid: m for eid, m in zip(order, sol)})
    if not good:
        raise DimerError("no loop-free reference completion found near the apex")
    good.sort(key=lambda d: tuple(sorted(d.items(), key=repr)))
    _M0_CACHE[radius] = good[0]
    return good[0]


def _has_variable_loop(sg: SurfaceGraph, mults: Mapping, var_set: set) -> bool:
    cycles, _paths = decompose(sg, mults)
    return any(any(eid in var_set for eid in cyc) for cyc in cycles)


def reference_multiplicity(eid, apex: Mapping | None = None) -> int:
    if apex is None:
        apex = reference_apex_solution()
    if eid in apex:
        return apex[eid]
    return far_multiplicity(eid)


def reference_config(sg: SurfaceGraph) -> "DoubleDimerConfig":
    """The reference configuration restricted to a corner-graph window."""
    apex = reference_apex_solution()
    mults = {eid: reference_multiplicity(eid, apex) for eid in sg.graph.edges}
    return DoubleDimerConfig(mults=mults, loops=0)


# -- configurations ---------------------------------------------------------------


@dataclass
class DoubleDimerConfig:
    mults: dict
    loops: int = 0

    def multiplicity(self, eid) -> int:
        return self.mults.get(eid, 0)

    def canonical(self) -> tuple:
        return tuple(sorted(((repr(e), m) for e, m in self.mults.items() if m), ))

    def to_json(self, weight_poly: LaurentPoly | None = None) -> dict:
        out = {
            "edges": [[list(map(str, _flatten(e))), m]
                      for e, m in sorted(self.mults.items(), key=lambda kv: repr(kv[0]))
                      if m],
            "loops": self.loops,
        }
        if weight_poly is not None:
            out["weight"] = to_json(weight_poly)
        return out


def _flatten(x):
    if isinstance(x, tuple):
        out = []
        for y in x:
            out.extend(_flatten(y))
        return out
    return [x]


def decompose(sg: SurfaceGraph, mults: Mapping) -> tuple[list, list]:
    """Split multiplicity-1 edges into (cycles, paths); each as edge-id lists."""
    adj: dict = {}
    for eid, m in mults.items():
        if m == 1:
            e = sg.graph.edges[eid]
            adj.setdefault(e.u, []).append(eid)
            adj.setdefault(e.v, []).append(eid)
    for vid, es in adj.items():
        if len(es) > 2:
            raise DimerError(f"vertex {vid!r} lies on {len(es)} single edges")
    seen: set = set()
    cycles, paths = [], []
    ends = sorted((v for v, es in adj.items() if len(es) == 1), key=repr)
    for start in ends:
        eid = adj[start][0]
        if eid in seen:
            continue
        path = _walk(sg, adj, seen, start, eid)
        paths.append(path)
    for vid in sorted(adj, key=repr):
        for eid in adj[vid]:
            if eid not in seen:
                cyc = _walk(sg, adj, seen, vid, eid)
                cycles.append(cyc)
    return cycles, paths


def _walk(sg: SurfaceGraph, adj: Mapping, seen: set, start, first_eid) -> list:
    out = []
    vid, eid = start, first_eid
    while eid is not None and eid not in seen:
        seen.add(eid)
        out.append(eid)
        vid = sg.graph.edges[eid].other(vid)
        eid = next((e for e in adj.get(vid, []) if e not in seen), None)
    return out


# -- taut enumeration ---------------------------------------------------------------


@dataclass
class TautWindow:
    """Enumeration window for a solid: the graph, its corner-graph twin, and
    the frozen/active split shared between them."""

    solid: SteppedSolid
    sg: SurfaceGraph
    sg0: SurfaceGraph
    active_lo: tuple
    active_hi: tuple
    variable_edges: list
    frozen: dict            # eid -> multiplicity (on either graph)
    stubs: list             # frozen single edges adjacent to the active zone
    frozen_links: dict      # stub -> (partner stub | ("tail", id))
    reference_pairing: frozenset
    boundary_edges: set     # variable edges on squares at the active boundary


@dataclass
class TautnessCertificate:
    pairing: frozenset
    reference: frozenset

    @property
    def valid(self) -> bool:
        return self.pairing == self.reference


def _active_box(solid: SteppedSolid, margin: int) -> tuple[tuple, tuple]:
    bbox = solid.removed_bbox()
    if bbox is None:
        lo, hi = (-1, -1, -1), (0, 0, 0)
    else:
        lo, hi = bbox
    return (tuple(x - margin for x in lo), tuple(x + margin for x in hi))


def _in_box(sq, lo, hi) -> bool:
    c = square_center(sq)
    return all(2 * l <= x <= 2 * h + 2 for l, x, h in zip(lo, c.d, hi))


def build_window(solid: SteppedSolid, margin: int = 2) -> TautWindow:
    if solid.ambient[0] != "corner":
        raise ValueError("taut enumeration runs on corner-orthant solids")
    lo, hi = _active_box(solid, margin)
    wlo = tuple(x - 3 for x in lo)
    whi = tuple(min(x + 3, 1) for x in hi)
    sg = build_graph(solid, wlo, whi)
    sg0 = build_graph(SteppedSolid.corner(), wlo, whi)
    apex = reference_apex_solution()

    def is_active(g: SurfaceGraph, eid) -> bool:
        return all(_in_box(sq, lo, hi) for sq in _edge_squares(g, eid))

    variable_edges = sorted((e for e in sg.graph.edges if is_active(sg, e)), key=repr)
    frozen = {}
    for g in (sg, sg0):
        for eid in g.graph.edges:
            if not is_active(g, eid):
                frozen[eid] = reference_multiplicity(eid, apex)
    for eid in sg.graph.edges:
        if eid not in frozen and eid not in sg0.graph.edges:
            raise DimerError(f"active edge {eid!r} missing from the reference graph "
                             "window; enlarge the window")
    # Frozen edges of the two graphs must agree where both exist
    stubs = sorted((eid for eid, m in frozen.items()
                    if m == 1 and eid in sg.graph.edges and eid in sg0.graph.edges
                    and _touches_active(sg, eid, lo, hi)), key=repr)
    frozen_links = _frozen_connections(sg0, frozen, stubs, lo, hi)
    m0_active = {eid: reference_multiplicity(eid, apex)
                 for eid in sg0.graph.edges if is_active(sg0, eid)}
    ref_pairing, ref_loops = _compose_pairing(sg0, m0_active, frozen, stubs,
                                              frozen_links, lo, hi)
    if ref_loops:
        raise DimerError("reference configuration closes a loop; enlarge the window")
    boundary_edges = {eid for eid in variable_edges
                      if any(_boundary_square(sg, sq, lo, hi)
                             for sq in _edge_squares(sg, eid))}
    return TautWindow(solid, sg, sg0, lo, hi, variable_edges, frozen, stubs,
                      frozen_links, ref_pairing, boundary_edges)


def _touches_active(g: SurfaceGraph, eid, lo, hi) -> bool:
    sqs = _edge_squares(g, eid)
    return any(_in_box(sq, lo, hi) for sq in sqs)


def _boundary_square(g: SurfaceGraph, sq, lo, hi) -> bool:
    if not _in_box(sq, lo, hi):
        return False
    inner = tuple(x + 1 for x in lo), tuple(x - 1 for x in hi)
    return not _in_box(sq, inner[0], inner[1])


def _frozen_connections(sg0: SurfaceGraph, frozen: Mapping, stubs: list,
                        lo, hi) -> dict:
    """Walk reference paths through the frozen zone, linking stubs to stubs
    or to window-exit tails."""
    adj: dict = {}
    for eid, m in frozen.items():
        if m == 1 and eid in sg0.graph.edges:
            e = sg0.graph.edges[eid]
            adj.setdefault(e.u, []).append(eid)
            adj.setdefault(e.v, []).append(eid)
    links = {}
    stub_set = set(stubs)
    for stub in stubs:
        e = sg0.graph.edges[stub]
        # walk outward: start from the endpoint whose squares are not active
        for start in (e.u, e.v):
            sq = (start[1], start[2])
            if not _in_box(sq, lo, hi):
                vid, eid = start, stub
                prev = None
                while True:
                    others = [x for x in adj.get(vid, []) if x != eid]
                    if not others:
                        links[stub] = ("tail", repr(vid))
                        break
                    nxt = others[0]
                    if nxt in stub_set and _touches_active(sg0, nxt, lo, hi):
                        links[stub] = ("stub", nxt)
                        break
                    prev, eid = eid, nxt
                    vid = sg0.graph.edges[eid].other(vid)
                else:
                    continue
                break
        else:
            links[stub] = ("tail", f"clipped:{stub!r}")
    return links


def _compose_pairing(g: SurfaceGraph, active_mults: Mapping, frozen: Mapping,
                     stubs: list, frozen_links: Mapping, lo, hi
                     ) -> tuple[frozenset, int]:
    """Tail pairing and loop count of active path segments composed with the
    frozen stub-to-stub links."""
    adj: dict = {}
    for eid, m in active_mults.items():
        if m == 1:
            e = g.graph.edges[eid]
            adj.setdefault(e.u, []).append(eid)
            adj.setdefault(e.v, []).append(eid)
    stub_set = set(s for s in stubs if s in g.graph.edges)
    seg = {}  # stub -> partner stub via one active segment
    seen = set()
    for stub in sorted(stub_set, key=repr):
        if stub in seen:
            continue
        e = g.graph.edges[stub]
        inner = None
        for vid in (e.u, e.v):
            if adj.get(vid):
                inner = vid
        if inner is None:
            continue
        vid, eid = inner, None
        prev_edge = stub
        while True:
            nxt = next((x for x in adj.get(vid, []) if x != eid and x != prev_edge), None)
            if nxt is None:
                # vertex covered by a doubled edge or path ends on a stub here
                out_stub = next((s for s in stub_set
                                 if s != stub and s != prev_edge
                                 and vid in (g.graph.edges[s].u, g.graph.edges[s].v)
                                 and s not in seen), None)
                if out_stub is None:
                    raise DimerError(f"active path from {stub!r} has no exit at {vid!r}")
                seg[stub] = out_stub
                seg[out_stub] = stub
                seen.update((stub, out_stub))
                break
            prev_edge = None
            eid = nxt
            vid = g.graph.edges[eid].other(vid)
    # compose segments and frozen links into tail pairing plus closed chains
    pairing = set()
    loops = 0
    visited = set()
    for stub in sorted(seg, key=repr):
        if stub in visited:
            continue
        # trace: alternate active segment / frozen link until tails close
        chain = []
        cur, via = stub, "active"
        start = stub
        while True:
            visited.add(cur)
            if via == "active":
                nxt = seg[cur]
                visited.add(nxt)
                chain.append(nxt)
                link = frozen_links.get(nxt, ("tail", f"missing:{nxt!r}"))
                if link[0] == "tail":
                    left = frozen_links.get(start, ("tail", f"missing:{start!r}"))
                    pairing.add(frozenset((link[1], left[1])))
                    break
                cur, via = link[1], "active"
                if cur == start:
                    loops += 1
                    break
            else:  # pragma: no cover - via is always "active" by construction
                break
    return frozenset(pairing), loops


def enumerate_taut(solid: SteppedSolid, margin: int = 2,
                   auto_expand: bool = True) -> tuple[list, TautWindow]:
    """All taut configurations on the window; expands the margin once if a
    configuration reaches the active boundary."""
    window = build_window(solid, margin)
    sg = window.sg
    adj, base = {}, {}
    touched = set()
    for eid in window.variable_edges:
        e = sg.graph.edges[eid]
        adj[eid] = [e.u, e.v]
        touched.update((e.u, e.v))
    for vid in touched:
        base[vid] = 0
    for eid, m in window.frozen.items():
        if eid in sg.graph.edges:
            e = sg.graph.edges[eid]
            for vid in (e.u, e.v):
                if vid in touched:
                    base[vid] += m
    order = _order_edges(sg, window.variable_edges)
    sols = _Enumerator(order, adj, base).run()
    ref_boundary = {eid: window.frozen.get(eid, far_multiplicity(eid))
                    for eid in window.boundary_edges}
    configs = []
    clipped = False
    for sol in sols:
        mults = {eid: m for eid, m in zip(order, sol)}
        if any(mults[eid] != _reference_guess(window, eid)
               for eid in window.boundary_edges):
            clipped = True
        full = dict(window.frozen)
        full = {eid: m for eid, m in full.items() if eid in sg.graph.edges}
        full.update(mults)
        cycles, _ = decompose(sg, {e: m for e, m in full.items()})
        pairing, chain_loops = _compose_pairing(sg, mults, window.frozen,
                                                window.stubs, window.frozen_links,
                                                window.active_lo, window.active_hi)
        cert = TautnessCertificate(pairing, window.reference_pairing)
        if not cert.valid:
            continue
        cfg = DoubleDimerConfig(mults=full, loops=len(cycles) + chain_loops)
        configs.append(cfg)
    if clipped and auto_expand:
        return enumerate_taut(solid, margin + 1, auto_expand=False)
    if clipped:
        raise WindowTooSmall("a taut configuration reaches the active boundary")
    configs.sort(key=lambda c: c.canonical())
    return configs, window


def _reference_guess(window: TautWindow, eid) -> int:
    apex = reference_apex_solution()
    return reference_multiplicity(eid, apex)


# -- weights ------------------------------------------------------------------------


def config_weight(cfg: DoubleDimerConfig, window: TautWindow,
                  table: VarTable) -> LaurentPoly:
    """2^{loops} times the product of face variables to the power L-2-d."""
    sg = window.sg
    var_set = set(window.variable_edges)
    poly = table.const(Fraction(2) ** cfg.loops)
    for f in sg.labeled_faces():
        eids = f.edge_ids()
        if not any(eid in var_set for eid in eids):
            continue
        d = sum(cfg.multiplicity(eid) for eid in eids)
        c = f.size - 2 - d
        if c != 0:
            poly = poly * table.variable(f.label, c)
    return poly


@dataclass
class BijectionReport:
    solid: SteppedSolid
    config_count: int
    weighted_sum: LaurentPoly
    propagated: LaurentPoly
    matches: bool
    missing: list = field(default_factory=list)
    extra: list = field(default_factory=list)


def verify_bijection(solid: SteppedSolid, margin: int = 2) -> BijectionReport:
    """Compare the enumeration weight sum against symbolic propagation."""
    from .recurrence import apex_polynomial

    expected, table = apex_polynomial(solid)
    configs, window = enumerate_taut(solid, margin)
    total = table.zero()
    for cfg in configs:
        total = total + config_weight(cfg, window, table)
    matches = total == expected
    missing, extra = [], []
    if not matches:
        diff = expected - total
        for mono, c in diff.sorted_terms():
            (missing if c > 0 else extra).append((mono, c))
    return BijectionReport(solid, len(configs), total, expected, matches,
                           missing, extra)


# -- drawing ------------------------------------------------------------------------


def config_svg(cfg: DoubleDimerConfig, sg: SurfaceGraph, scale: float = 40.0) -> str:
    """Planar drawing; doubled edges are drawn thicker."""
    xs = [v.pos[0] for v in sg.graph.vertices.values()]
    ys = [v.pos[1] for v in sg.graph.vertices.values()]
    x0, y0 = min(xs), min(ys)
    w = (max(xs) - x0) * scale + 40
    h = (max(ys) - y0) * scale + 40

    def pt(pos):
        return (20 + (pos[0] - x0) * scale, 20 + (pos[1] - y0) * scale)

    lines = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0f}" height="{h:.0f}">']
    for eid, e in sorted(sg.graph.edges.items(), key=lambda kv: repr(kv[0])):
        m = cfg.multiplicity(eid)
        x1, y1 = pt(sg.graph.vertices[e.u].pos)
        x2, y2 = pt(sg.graph.vertices[e.v].pos)
        if m == 0:
            style = 'stroke="#cccccc" stroke-width="0.6"'
        elif m == 1:
            style = 'stroke="#202020" stroke-width="1.8"'
        else:
            style = 'stroke="#000000" stroke-width="4.4"'
        lines.append(f'<line x1="{x1:.1f}" y1="{y1:.1f}" x2="{x2:.1f}" '
                     f'y2="{y2:.1f}" {style}/>')
    for vid, v in sorted(sg.graph.vertices.items(), key=lambda kv: repr(kv[0])):
        x, y = pt(v.pos)
        fill = "#ffffff" if v.color == 0 else "#000000"
        lines.append(f'<circle cx="{x:.1f}" cy="{y:.1f}" r="2.6" fill="{fill}" '
                     f'stroke="#000000" stroke-width="0.7"/>')
    lines.append("</svg>")
    return "\n".join(lines)
