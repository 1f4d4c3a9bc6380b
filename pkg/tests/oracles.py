"""Brute-force reference implementations used only by the tests.

These are deliberately naive and share no code with the package.
"""

import itertools


def edit_distance(a, b):
    """Textbook full-table Levenshtein DP."""
    m, n = len(a), len(b)
    table = [[0] * (n + 1) for _ in range(m + 1)]
    for i in range(m + 1):
        table[i][0] = i
    for j in range(n + 1):
        table[0][j] = j
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            table[i][j] = min(
                table[i - 1][j] + 1,
                table[i][j - 1] + 1,
                table[i - 1][j - 1] + (a[i - 1] != b[j - 1]),
            )
    return table[m][n]


def normalized_edit_distance(a, b):
    longest = max(len(a), len(b))
    return 0.0 if longest == 0 else edit_distance(a, b) / longest


def clustering_by_triangles(n, edges):
    """Mean local clustering by enumerating every node triple."""
    es = {frozenset(e) for e in edges}
    deg = [0] * n
    for e in es:
        for v in e:
            deg[v] += 1
    tri = [0] * n
    for a, b, c in itertools.combinations(range(n), 3):
        if {frozenset((a, b)), frozenset((b, c)), frozenset((a, c))} <= es:
            tri[a] += 1
            tri[b] += 1
            tri[c] += 1
    total = 0.0
    for v in range(n):
        if deg[v] >= 2:
            total += tri[v] / (deg[v] * (deg[v] - 1) / 2)
    return total / n if n else 0.0


def path_length_floyd(n, edges):
    """Mean shortest hop count over unordered pairs, Floyd-Warshall; None if disconnected."""
    inf = float("inf")
    d = [[0 if i == j else inf for j in range(n)] for i in range(n)]
    for i, j in edges:
        d[i][j] = d[j][i] = 1
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if d[i][k] + d[k][j] < d[i][j]:
                    d[i][j] = d[i][k] + d[k][j]
    pairs = [d[i][j] for i in range(n) for j in range(i + 1, n)]
    if any(x == inf for x in pairs):
        return None
    return sum(pairs) / len(pairs)


def single_linkage(items, theta):
    """Clusters of (id, genome) items by repeated merging of any pair within theta."""
    clusters = [{i} for i, _ in items]
    genome = dict(items)
    merged = True
    while merged:
        merged = False
        for x, y in itertools.combinations(range(len(clusters)), 2):
            if any(normalized_edit_distance(genome[a], genome[b]) <= theta
                   for a in clusters[x] for b in clusters[y]):
                clusters[x] |= clusters[y]
                del clusters[y]
                merged = True
                break
    return sorted(clusters, key=lambda c: (-len(c), min(c)))


def path_length_bfs(n, edges):
    """Mean shortest hop count via one plain BFS per source; None if disconnected."""
    adj = {v: set() for v in range(n)}
    for i, j in edges:
        adj[i].add(j)
        adj[j].add(i)
    total = 0
    for s in range(n):
        dist = {s: 0}
        frontier = [s]
        while frontier:
            nxt = []
            for u in frontier:
                for v in adj[u]:
                    if v not in dist:
                        dist[v] = dist[u] + 1
                        nxt.append(v)
            frontier = nxt
        if len(dist) < n:
            return None
        total += sum(dist.values())
    return total / (n * (n - 1))
