"""Exhaustive search for a largest subset of [N] with no x, x+y^2, x+2y^2 (y >= 1).

For m = 1..N the optimum opt(m) over [m] is found by branch and bound,
deciding elements from m downward; the undecided part is always a prefix
[i], so opt(i) from earlier rounds bounds what it can still add.  Used to
freeze the input of the end-to-end acceptance test.
"""

import sys


def triples_by_low(N):
    out = {}
    y = 1
    while 1 + 2 * y * y <= N:
        for x in range(1, N - 2 * y * y + 1):
            out.setdefault(x, []).append((x + y * y, x + 2 * y * y))
        y += 1
    return out


def solve(N):
    low = triples_by_low(N)
    opt = [0] * (N + 1)
    witness = {0: []}
    for m in range(1, N + 1):
        best = [opt[m - 1], witness[m - 1]]
        members = set()

        def rec(i, size):
            if i == 0:
                if size > best[0]:
                    best[0], best[1] = size, sorted(members)
                return
            if size + opt[i] <= best[0]:
                return
            if all(not (b in members and c in members) for b, c in low.get(i, ())):
                members.add(i)
                rec(i - 1, size + 1)
                members.discard(i)
            rec(i - 1, size)

        # element m itself must be taken, otherwise opt(m - 1) is already optimal
        members.add(m)
        rec(m - 1, 1)
        opt[m], witness[m] = best
    return opt[N], witness[N]


if __name__ == "__main__":
    N = int(sys.argv[1]) if len(sys.argv) > 1 else 50
    size, members = solve(N)
    print(size, members)
