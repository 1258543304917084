"""Exact isomorphism testing for label-erased radius-2 balls.

The canonical-form engine cannot handle the 721-vertex, 1935-edge balls,
so ball comparison uses a dedicated exact decision procedure that
exploits how rigid the development is:

* Any isomorphism of balls restricts to an isomorphism of the base
  links, a 30-vertex bipartite incidence graph with exactly 1440
  automorphism-type candidates, enumerated by backtracking.
* Once the base star is mapped, each distance-1 star has only a handful
  of consistent completions (its options), and the option set of every
  star is a torsor over an elementary abelian 2-group: option
  composition closes under XOR of indicator vectors.
* Two stars interact only through the cells (edges, vertices) they
  share, and every pairwise compatibility table observed is an affine
  subspace over GF(2).  The whole candidate therefore reduces to a
  linear system over GF(2), solved by elimination; a solution is turned
  back into an explicit cell bijection and verified cell by cell.

If any option table ever fails the power-of-two/affine structure check
the procedure refuses (AffineReductionError) rather than guess; this
has not been observed on any developed ball.
"""

from __future__ import annotations

from .building import BasedBall


class AffineReductionError(RuntimeError):
    """A star option table was not affine over GF(2); cannot decide."""


def _other(pts, v):
    t, h = pts
    return h if t == v else t


class BallView:
    """Label-erased incidence view of a ball with per-vertex link data.

    ``link[v][e]`` lists, for each edge ``e`` at inner vertex ``v``, the
    pairs (other corner edge, far edge) of the faces through ``e`` at
    ``v``; ``far[(v, a, b)]`` is the third edge of the face with corner
    edges a, b at v.
    """

    def __init__(self, ball: BasedBall):
        if ball.base != 0:
            raise ValueError("expected base vertex 0")
        self.nv = ball.vertex_count
        self.dist = ball.vertex_dist
        self.epts = [(t, h) for (_l, t, h) in ball.edges]
        self.face_edges = [tuple(es) for (_t, es) in ball.faces]
        self.link = {}
        self.far = {}
        for es in self.face_edges:
            corners = {}
            for e in es:
                for v in self.epts[e]:
                    corners.setdefault(v, []).append(e)
            for v, pair in corners.items():
                if len(pair) == 2 and self.dist[v] <= 1:
                    a, b = pair
                    far = next(e for e in es if e not in pair)
                    self.link.setdefault(v, {}).setdefault(a, []).append((b, far))
                    self.link[v].setdefault(b, []).append((a, far))
                    self.far[(v, a, b)] = far
                    self.far[(v, b, a)] = far


def _base_candidates(A: BallView, B: BallView):
    """All isomorphisms of the base links, as spoke-edge maps."""
    adjA = {x: [y for y, _ in nb] for x, nb in A.link[0].items()}
    adjB = {x: [y for y, _ in nb] for x, nb in B.link[0].items()}
    order = [next(iter(adjA))]
    seen = set(order)
    i = 0
    while len(order) < len(adjA):
        for y in adjA[order[i]]:
            if y not in seen:
                seen.add(y)
                order.append(y)
        i += 1
    out = []
    m = {}
    used = set()

    def bt(k):
        if k == len(order):
            out.append(dict(m))
            return
        x = order[k]
        mapped = [m[y] for y in adjA[x] if y in m]
        if mapped:
            cands = set(adjB[mapped[0]])
            for w in mapped[1:]:
                cands &= set(adjB[w])
            cands -= used
        else:
            cands = set(adjB) - used
        for c in sorted(cands):
            m[x] = c
            used.add(c)
            bt(k + 1)
            del m[x]
            used.discard(c)

    bt(0)
    return out


class _Matcher:
    """Partial-map state and the GF(2) decision for one ball pair."""

    def __init__(self, A: BallView, B: BallView):
        self.A = A
        self.B = B
        self.candidates = _base_candidates(A, B)
        self.vmap = {}
        self.vrev = {}
        self.emap = {}
        self.erev = {}

    # -- reversible partial cell map ------------------------------------
    def _reset(self):
        self.vmap = {0: 0}
        self.vrev = {0: 0}
        self.emap = {}
        self.erev = {}

    def _undo(self, log):
        for kind, a, b in reversed(log):
            if kind == "v":
                del self.vmap[a]
                del self.vrev[b]
            else:
                del self.emap[a]
                del self.erev[b]

    def _set_v(self, a, b, log):
        cur = self.vmap.get(a)
        if cur is not None:
            return cur == b
        if b in self.vrev:
            return False
        self.vmap[a] = b
        self.vrev[b] = a
        log.append(("v", a, b))
        return True

    def _set_e(self, a, b, log):
        cur = self.emap.get(a)
        if cur is not None:
            return cur == b
        if b in self.erev:
            return False
        self.emap[a] = b
        self.erev[b] = a
        log.append(("e", a, b))
        return True

    def _apply_star(self, u, u2, m, log):
        """Commit a full star option (spokes, endpoints, far edges)."""
        A, B = self.A, self.B
        for x, c in m.items():
            if not self._set_e(x, c, log):
                return False
            if not self._set_v(_other(A.epts[x], u), _other(B.epts[c], u2), log):
                return False
        for x, c in m.items():
            for y, far in A.link[u][x]:
                far2 = B.far[(u2, c, m[y])]
                if not self._set_e(far, far2, log):
                    return False
                zx = _other(A.epts[x], u)
                zy = _other(A.epts[y], u)
                if frozenset((self.vmap[zx], self.vmap[zy])) != \
                        frozenset(B.epts[far2]):
                    return False
        return True

    def _star_options(self, u, u2):
        """All consistent completions of star u -> u2 given current state."""
        A, B = self.A, self.B
        adjA = A.link[u]
        adjB = B.link[u2]
        spokes = list(adjA)
        fixed = [e for e in spokes if e in self.emap]
        order = fixed[:]
        seen = set(order)
        i = 0
        while len(order) < len(spokes):
            if i < len(order):
                for y, _f in adjA[order[i]]:
                    if y not in seen:
                        seen.add(y)
                        order.append(y)
                i += 1
            else:
                x = next(e for e in spokes if e not in seen)
                seen.add(x)
                order.append(x)
        found = []

        def bt(k):
            if k == len(order):
                found.append({x: self.emap[x] for x in spokes})
                return
            x = order[k]
            mapped = [(self.emap[y], far) for y, far in adjA[x] if y in self.emap]
            if mapped:
                cands = set(y for y, _f in adjB[mapped[0][0]])
                for cy, _f in mapped[1:]:
                    cands &= set(y for y, _f2 in adjB[cy])
            else:
                cands = list(adjB)
            zx = _other(A.epts[x], u)
            for c in cands:
                if c in self.erev:
                    continue
                sub = []
                ok = self._set_e(x, c, sub) and \
                    self._set_v(zx, _other(B.epts[c], u2), sub)
                if ok:
                    for y, far in adjA[x]:
                        ey = self.emap.get(y)
                        if ey is None or ey == c:
                            continue
                        far2 = B.far.get((u2, c, ey))
                        if far2 is None or not self._set_e(far, far2, sub):
                            ok = False
                            break
                        zy = _other(A.epts[y], u)
                        if frozenset((self.vmap[zx], self.vmap[zy])) != \
                                frozenset(B.epts[far2]):
                            ok = False
                            break
                if ok:
                    bt(k + 1)
                self._undo(sub)

        bt(len(fixed))
        return found

    @staticmethod
    def _star_cells(ball, u):
        """All cells a star option at u assigns."""
        cells = set()
        for x, nbrs in ball.link[u].items():
            cells.add(("e", x))
            cells.add(("v", _other(ball.epts[x], u)))
            for _y, far in nbrs:
                cells.add(("e", far))
        return cells

    def _footprint(self, u, u2, m):
        """Cell image map of a star option."""
        A, B = self.A, self.B
        fp = {}
        for x, c in m.items():
            fp[("e", x)] = ("e", c)
            fp[("v", _other(A.epts[x], u))] = ("v", _other(B.epts[c], u2))
        for x, c in m.items():
            for y, far in A.link[u][x]:
                fp[("e", far)] = ("e", B.far[(u2, c, m[y])])
        return fp

    @staticmethod
    def _option_vectors(options):
        """GF(2) coordinates for a star's option set.

        Options form a torsor over a group of permutations of the first
        option's spoke images; the group must be elementary abelian 2.
        Returns the coordinate vector of each option, aligned by index.
        """
        inv0 = {v: k for k, v in options[0].items()}
        perms = [tuple(sorted((x, inv0[m[x]]) for x in m)) for m in options]
        pdicts = [dict(p) for p in perms]
        idx = {p: i for i, p in enumerate(perms)}
        assigned = {perms[0]: 0}
        nbasis = 0
        for p in perms:
            if p in assigned:
                continue
            bit = 1 << nbasis
            nbasis += 1
            newly = {}
            for q, vq in assigned.items():
                qq = dict(q)
                pr = tuple(sorted((x, pdicts[idx[p]][qq[x]]) for x in qq))
                newly[pr] = vq ^ bit
            assigned.update(newly)
            if len(assigned) == len(options):
                break
        try:
            return [assigned[p] for p in perms], nbasis
        except KeyError:
            raise AffineReductionError("star options are not a 2-group torsor")

    def _candidate_system(self, base_map):
        """Set up the GF(2) system for one base candidate.

        Returns None if the candidate dies before the linear stage,
        otherwise (options, vectors, bit offsets, equation rows).
        """
        A, B = self.A, self.B
        self._reset()
        log = []
        try:
            if not self._apply_star(0, 0, base_map, log):
                return None
            d1 = [v for v in range(A.nv) if A.dist[v] == 1]
            opts = {}
            fps = {}
            for u in d1:
                col = self._star_options(u, self.vmap[u])
                if not col:
                    return None
                if len(col) & (len(col) - 1):
                    raise AffineReductionError(
                        f"star has {len(col)} options (not a power of 2)")
                opts[u] = col
                fps[u] = [self._footprint(u, self.vmap[u], m) for m in col]
            # stars constrain each other exactly through shared cells;
            # cells in three or more stars are already fixed by the base
            pairs = set()
            for ball, ids in ((A, {u: u for u in d1}),
                              (B, {self.vmap[u]: u for u in d1})):
                by_cell = {}
                for u2 in ids:
                    for cell in self._star_cells(ball, u2):
                        by_cell.setdefault(cell, []).append(ids[u2])
                pairs |= set(tuple(sorted(us))
                             for us in by_cell.values() if len(us) == 2)
            d1_map = {u: self.vmap[u] for u in d1}
        finally:
            self._undo(log)

        vecs = {}
        nbits = {}
        for u in d1:
            vecs[u], nbits[u] = self._option_vectors(opts[u])
        var = {}
        total = 0
        for u in d1:
            var[u] = total
            total += nbits[u]
        rows = []
        for (u, w) in pairs:
            allowed = []
            for i, fu in enumerate(fps[u]):
                invu = {img: cell for cell, img in fu.items()}
                for j, fw in enumerate(fps[w]):
                    ok = True
                    for cell, img in fw.items():
                        img2 = fu.get(cell)
                        if img2 is not None and img2 != img:
                            ok = False
                            break
                        prev = invu.get(img)
                        if prev is not None and prev != cell:
                            ok = False
                            break
                    if ok:
                        allowed.append(vecs[u][i] | (vecs[w][j] << nbits[u]))
            if not allowed:
                return None
            s0 = allowed[0]
            translated = set(x ^ s0 for x in allowed)
            if len(translated) & (len(translated) - 1) or any(
                    x ^ y not in translated
                    for x in translated for y in translated):
                raise AffineReductionError("pair table is not affine")
            # every GF(2) functional vanishing on the table gives a row
            width = nbits[u] + nbits[w]
            for z in range(1, 1 << width):
                if all(bin(z & t).count("1") % 2 == 0 for t in translated):
                    const = bin(z & s0).count("1") % 2
                    mask = 0
                    for bit in range(nbits[u]):
                        if z >> bit & 1:
                            mask |= 1 << (var[u] + bit)
                    for bit in range(nbits[w]):
                        if z >> (nbits[u] + bit) & 1:
                            mask |= 1 << (var[w] + bit)
                    rows.append((mask, const))
        return d1, d1_map, opts, vecs, nbits, var, rows

    @staticmethod
    def _solve_gf2(rows):
        """Eliminate; returns pivot dict or None when inconsistent."""
        pivots = {}
        for mask, c in rows:
            while mask:
                p = mask.bit_length() - 1
                if p in pivots:
                    pm, pc = pivots[p]
                    mask ^= pm
                    c ^= pc
                else:
                    pivots[p] = (mask, c)
                    break
            else:
                if c:
                    return None
        return pivots

    def try_candidate(self, base_map):
        """Vertex bijection extending base_map, or None.

        A returned map is always fully verified: a bijection on vertices
        and edges respecting endpoints and carrying faces onto faces.
        """
        system = self._candidate_system(base_map)
        if system is None:
            return None
        d1, d1_map, opts, vecs, nbits, var, rows = system
        pivots = self._solve_gf2(rows)
        if pivots is None:
            return None
        # back-substitute in increasing pivot order, free variables 0
        x = {}
        for p in sorted(pivots):
            pm, pc = pivots[p]
            v = pc
            m = pm & ~(1 << p)
            while m:
                q = m.bit_length() - 1
                v ^= x.get(q, 0)
                m &= ~(1 << q)
            x[p] = v
        self._reset()
        log = []
        if not self._apply_star(0, 0, base_map, log):
            raise AffineReductionError("base candidate failed on replay")
        for u in d1:
            bits = 0
            for bit in range(nbits[u]):
                bits |= x.get(var[u] + bit, 0) << bit
            option = opts[u][vecs[u].index(bits)]
            if not self._apply_star(u, d1_map[u], option, log):
                raise AffineReductionError("solved system failed on replay")
        vmap = dict(self.vmap)
        emap = dict(self.emap)
        self._undo(log)
        self._verify(vmap, emap)
        return vmap

    def _verify(self, vmap, emap):
        A, B = self.A, self.B
        assert len(vmap) == A.nv == B.nv
        assert len(set(vmap.values())) == A.nv
        assert len(emap) == len(A.epts) == len(B.epts)
        assert len(set(emap.values())) == len(A.epts)
        for e, e2 in emap.items():
            if frozenset(vmap[v] for v in A.epts[e]) != frozenset(B.epts[e2]):
                raise AssertionError(f"edge {e} endpoints not respected")
        fa = {frozenset(emap[e] for e in es) for es in A.face_edges}
        fb = {frozenset(es) for es in B.face_edges}
        if fa != fb:
            raise AssertionError("face sets not respected")


def ball_isomorphism(a: BasedBall, b: BasedBall):
    """A verified vertex bijection between the balls, or None.

    Exhausts all base candidates, so None is a proof of non-isomorphism
    (subject only to the verified GF(2) reduction).
    """
    matcher = _Matcher(BallView(a), BallView(b))
    for base_map in matcher.candidates:
        vmap = matcher.try_candidate(base_map)
        if vmap is not None:
            return vmap
    return None


def match_anchor(ball: BasedBall, anchors):
    """Index of the first anchor ball isomorphic to ``ball``, else None.

    Candidates for all anchors are tried in interleaved rounds so that a
    match with any anchor is found without first exhausting another
    anchor's candidate list.
    """
    view = BallView(ball)
    matchers = [_Matcher(view, BallView(anchor)) for anchor in anchors]
    rounds = max((len(m.candidates) for m in matchers), default=0)
    for i in range(rounds):
        for k, m in enumerate(matchers):
            if i < len(m.candidates) and \
                    m.try_candidate(m.candidates[i]) is not None:
                return k
    return None
