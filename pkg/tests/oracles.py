"""Independent reference implementations used only by the tests.

Nodes are handled as paths of sibling indices, so nothing here reuses the
index arithmetic of the package.
"""

import itertools


def paths(t):
    out = []
    for v in range(t.size):
        p = t.parent[v]
        if p < 0:
            out.append(())
        else:
            sib = [u for u in range(t.size) if t.parent[u] == p].index(v)
            out.append(out[p] + (sib,))
    return out


def _meet(a, b):
    n = 0
    while n < min(len(a), len(b)) and a[n] == b[n]:
        n += 1
    return a[:n]


def classify_paths(S, T, image):
    """(morphism, embedding, leaf_preserving, strong) straight from the definitions."""
    ps, pt = paths(S), paths(T)
    img = [pt[i] for i in image]
    idx_s = {p: i for i, p in enumerate(ps)}
    morphism = all(
        img[idx_s[_meet(ps[v], ps[w])]] == _meet(img[v], img[w]) for v in range(S.size) for w in range(S.size)
    )
    injective = len(set(img)) == len(img)
    order = all((ps[v] < ps[w]) == (img[v] < img[w]) for v in range(S.size) for w in range(S.size))
    segments = True
    t_children = {p: sorted(q for q in pt if len(q) == len(p) + 1 and q[: len(p)] == p) for p in pt}
    for v in range(S.size):
        fv = img[v]
        kids = t_children[fv]
        hit = [c for c in kids if any(img[w][: len(c)] == c for w in range(S.size) if S.parent[w] == v)]
        if hit != kids[: len(hit)]:
            segments = False
    embedding = morphism and injective and order and segments
    s_leaf = {p for p in ps if not any(len(q) > len(p) and q[: len(p)] == p for q in ps)}
    t_leaf = {p for p in pt if not t_children[p]}
    leaf = embedding and all(img[i] in t_leaf for i, p in enumerate(ps) if p in s_leaf)
    strong = embedding and all(
        len(img[v]) == len(img[w]) for v in range(S.size) for w in range(S.size) if len(ps[v]) == len(ps[w])
    )
    return morphism, embedding, leaf, strong


def oracle_maps(S, T, flavor):
    want_leaf = flavor in ("LEAF", "STRONG_LEAF")
    want_strong = flavor in ("STRONG", "STRONG_LEAF")
    out = []
    for image in itertools.product(range(T.size), repeat=S.size):
        _, emb, leaf, strong = classify_paths(S, T, image)
        if emb and (leaf or not want_leaf) and (strong or not want_strong):
            out.append(tuple(image))
    return out


def avoiding_count(n_points, lines, d):
    """Number of d-colorings with no monochromatic line, by plain enumeration."""
    count = 0
    for col in itertools.product(range(d), repeat=n_points):
        if all(len({col[p] for p in line}) > 1 for line in lines):
            count += 1
    return count


def oracle_all_flavors(S, T):
    """Images of every map S -> T, split by flavor, from one pass over all maps."""
    out = {"EMB": [], "LEAF": [], "STRONG": [], "STRONG_LEAF": []}
    for image in itertools.product(range(T.size), repeat=S.size):
        _, emb, leaf, strong = classify_paths(S, T, image)
        if not emb:
            continue
        out["EMB"].append(image)
        if leaf:
            out["LEAF"].append(image)
        if strong:
            out["STRONG"].append(image)
        if leaf and strong:
            out["STRONG_LEAF"].append(image)
    return out
