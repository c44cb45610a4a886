"""Writes golden chain and term-walk vectors for test_vec.

Run from this directory: python3 make_golden.py > hash_golden.json
"""
import hashlib
import json
import re

CLAUSES = [
    "p(a)",
    "~p(X)",
    "q(f(g(X,Y),Z),g(X,Y))",
    "p(X) | ~q(X)",
    "r",
    "~r | s(a,b)",
    "p(f(f(f(a))))",
    "~p(f(X)) | p(X)",
    "mark(c0)",
    "~mark(c3) | mark(c4)",
    "s(X,Y,Z) | ~s(Y,X,Z)",
    "~q(a,b) | ~q(b,a) | q(X,X)",
    "h(g(a,X),g(X,a))",
    "~t(f(a),f(b),f(c))",
    "u(V,W) | ~u(W,V) | v",
    "p(a) | p(b) | p(c) | ~p(d)",
    "w(f(g(h(a))))",
    "~d(X) | d(f(X))",
    "big(a,b,c,d,e,f1,g1,h1,i1,j1)",
    "n(k(X,Y),k(Y,X)) | ~n(X,Y)",
]

D_CHAIN = 97
D_WALK = 61

TOKEN = re.compile(r"\s*(~|\||\(|\)|,|[A-Za-z0-9_]+)")


def parse(text):
    toks = [m.group(1) for m in TOKEN.finditer(text)]
    pos = 0

    def term():
        nonlocal pos
        name = toks[pos]
        pos += 1
        args = []
        if pos < len(toks) and toks[pos] == "(":
            pos += 1
            args.append(term())
            while toks[pos] == ",":
                pos += 1
                args.append(term())
            assert toks[pos] == ")"
            pos += 1
        return (name, args)

    lits = []
    while pos < len(toks):
        positive = True
        if toks[pos] == "~":
            positive = False
            pos += 1
        lits.append((positive, term()))
        if pos < len(toks):
            assert toks[pos] == "|"
            pos += 1
    return lits


def is_var(t):
    return t[0][0].isupper() and not t[1]


def bucket(s, d):
    return int(hashlib.md5(s.encode()).hexdigest(), 16) % d


def chains(t):
    """Root-to-leaf paths with off-path arguments shown as '_'."""
    name, args = t
    if is_var(t):
        return ["*"]
    if not args:
        return [name]
    out = []
    for i, a in enumerate(args):
        for inner in chains(a):
            slots = ["_"] * len(args)
            slots[i] = inner
            out.append(name + "(" + ",".join(slots) + ")")
    return out


def chain_vector(lits):
    v = [0] * (2 * D_CHAIN)
    for positive, atom in lits:
        for pat in chains(atom):
            v[bucket(pat, D_CHAIN) + (0 if positive else D_CHAIN)] += 1
    return v


def label(t):
    return "*" if is_var(t) else t[0]


def nodes(t):
    yield t
    for a in t[1]:
        yield from nodes(a)


def walks_from(t, n):
    if n == 1:
        return [[label(t)]]
    return [[label(t)] + rest for a in t[1] for rest in walks_from(a, n - 1)]


def walk_vector(lits, n):
    v = [0] * D_WALK
    for positive, atom in lits:
        for t in nodes(atom):
            for w in walks_from(t, n):
                if t is atom:
                    w = [("+" if positive else "-") + w[0]] + w[1:]
                v[bucket("/".join(w), D_WALK)] += 1
    return v


def main():
    cases = []
    for c in CLAUSES:
        lits = parse(c)
        cases.append({
            "clause": c,
            "chain": chain_vector(lits),
            "walks": [walk_vector(lits, n) for n in (1, 2, 3)],
        })
    probes = ["", "a", "p(a)", "q(f(g(*,_),_),_)", "+q/f/g", "hello world"]
    out = {
        "d_chain": D_CHAIN,
        "d_walk": D_WALK,
        "cases": cases,
        "md5": [{"text": s, "hex": hashlib.md5(s.encode()).hexdigest(),
                 "mod1024": bucket(s, 1024), "mod97": bucket(s, 97)} for s in probes],
    }
    print(json.dumps(out, separators=(",", ":")))


if __name__ == "__main__":
    main()
