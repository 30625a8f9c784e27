"""Brute-force reference implementations used to check the library.

These deliberately share no code with corescope beyond reading a graph's node
count and edge list: they work from first principles (subset enumeration, edge
or node removal, Floyd–Warshall, permutation search) and are only meant for
small graphs.
"""

from __future__ import annotations

from itertools import combinations, permutations

INF = float("inf")


def adjacency_sets(n, edges):
    adj = [set() for _ in range(n)]
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    return adj


def is_connected(n, edges, skip_node=None, skip_edge=None):
    nodes = [v for v in range(n) if v != skip_node]
    if not nodes:
        return True
    adj = {v: set() for v in nodes}
    for u, v in edges:
        if (u, v) == skip_edge or (v, u) == skip_edge or skip_node in (u, v):
            continue
        adj[u].add(v)
        adj[v].add(u)
    seen = {nodes[0]}
    stack = [nodes[0]]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(nodes)


def component_count(nodes, adj):
    nodes = set(nodes)
    seen, count = set(), 0
    for s in nodes:
        if s in seen:
            continue
        count += 1
        stack = [s]
        seen.add(s)
        while stack:
            for w in adj[stack.pop()]:
                if w in nodes and w not in seen:
                    seen.add(w)
                    stack.append(w)
    return count


# -- isomorphism and enumeration -------------------------------------------------


def brute_canonical(n, edges):
    """Lexicographically smallest sorted edge tuple over all n! relabelings."""
    best = None
    for perm in permutations(range(n)):
        key = tuple(sorted(tuple(sorted((perm[u], perm[v]))) for u, v in edges))
        if best is None or key < best:
            best = key
    return best


def brute_enumeration(n):
    """(unlabelled count, labelled count) of connected simple graphs on n nodes."""
    pairs = list(combinations(range(n), 2))
    classes = set()
    labelled = 0
    for mask in range(1 << len(pairs)):
        edges = [p for i, p in enumerate(pairs) if mask >> i & 1]
        if not is_connected(n, edges):
            continue
        labelled += 1
        classes.add(brute_canonical(n, edges))
    return len(classes), labelled


# -- distances -----------------------------------------------------------------


def floyd(n, edges):
    d = [[0 if i == j else INF for j in range(n)] for i in range(n)]
    for u, v in edges:
        d[u][v] = d[v][u] = 1
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if d[i][k] + d[k][j] < d[i][j]:
                    d[i][j] = d[i][k] + d[k][j]
    return d


def distance_summary(n, edges):
    d = floyd(n, edges)
    ecc = [int(max(row)) for row in d]
    girth = INF
    for u, v in edges:
        rest = [e for e in edges if e != (u, v)]
        dd = floyd(n, rest)[u][v]
        girth = min(girth, dd + 1)
    return ecc, max(ecc), min(ecc), None if girth == INF else int(girth)


def census(n, edges, root, kind="node"):
    d = floyd(n, edges)[root]
    deg = [0] * n
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    counts = [0] * (int(max(d)) + 1)
    for v in range(n):
        counts[int(d[v])] += 1 if kind == "node" else deg[v]
    return tuple(counts)


# -- cut elements ----------------------------------------------------------------


def articulation_nodes(n, edges):
    return {v for v in range(n) if n > 2 and not is_connected(n, edges, skip_node=v)}


def bridges(n, edges):
    return {tuple(sorted(e)) for e in edges if not is_connected(n, edges, skip_edge=e)}


# -- k-core ---------------------------------------------------------------------


def core_numbers(n, edges):
    """core(v) = largest k with v inside the k-core, found by peeling for every k."""
    adj = adjacency_sets(n, edges)
    core = [0] * n
    for k in range(1, n):
        alive = set(range(n))
        changed = True
        while changed:
            changed = False
            for v in list(alive):
                if len(adj[v] & alive) < k:
                    alive.discard(v)
                    changed = True
        for v in alive:
            core[v] = k
    return core


# -- cliques and cycles ------------------------------------------------------------


def maximal_cliques(n, edges, min_size=3):
    adj = adjacency_sets(n, edges)
    cliques = []
    for size in range(n, 0, -1):
        for s in combinations(range(n), size):
            if all(b in adj[a] for a, b in combinations(s, 2)):
                fs = frozenset(s)
                if not any(fs < c for c in cliques):
                    cliques.append(fs)
    return {c for c in cliques if len(c) >= min_size}


def induced_cycles(n, edges, min_length=4):
    """Node sets whose induced subgraph is a single cycle."""
    adj = adjacency_sets(n, edges)
    found = set()
    for size in range(min_length, n + 1):
        for s in combinations(range(n), size):
            ss = set(s)
            if all(len(adj[v] & ss) == 2 for v in s) and component_count(s, adj) == 1:
                found.add(frozenset(s))
    return found


def diameter_geodesic_count(n, edges):
    """Shortest paths realizing the diameter, by exhaustive simple-path search.

    A simple path with ``diam`` hops is a geodesic exactly when its ends are
    ``diam`` apart; each unordered path is counted once.
    """
    adj = adjacency_sets(n, edges)
    d = floyd(n, edges)
    diam = int(max(max(row) for row in d))
    if diam == 0:
        return 1
    total = 0
    for a in range(n):
        stack = [(a, (a,))]
        while stack:
            v, path = stack.pop()
            if len(path) - 1 == diam:
                if path[-1] > a and d[a][path[-1]] == diam:
                    total += 1
                continue
            for w in adj[v]:
                if w not in path:
                    stack.append((w, path + (w,)))
    return total


# -- exact categories ------------------------------------------------------------


def exact_labels(n, edges):
    """Exact structural classes from their definitions."""
    m = len(edges)
    adj = adjacency_sets(n, edges)
    labels = set()
    if m == n - 1:
        labels.add("tree")
    if m == n * (n - 1) // 2:
        labels.add("complete")
    if len({len(a) for a in adj}) == 1:
        labels.add("regular")
    # complete multipartite iff "equal or non-adjacent" is an equivalence relation
    same = [[u == v or v not in adj[u] for v in range(n)] for u in range(n)]
    transitive = all(not (same[a][b] and same[b][c]) or same[a][c]
                     for a in range(n) for b in range(n) for c in range(n))
    if transitive:
        classes = {frozenset(v for v in range(n) if same[u][v]) for u in range(n)}
        if len(classes) >= 2:
            labels.add(f"multipartite({len(classes)})")
    return labels
