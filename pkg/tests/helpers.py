"""Independent brute-force references used by the tests."""

from itertools import combinations, permutations


def perm_costs(entries):
    n = len(entries)
    return {p: sum(entries[i][p[i]] for i in range(n)) for p in permutations(range(n))}


def optimal_perms(entries):
    costs = perm_costs(entries)
    best = min(costs.values())
    return best, {p for p, c in costs.items() if c == best}


def max_zero_matching_size(entries):
    # any matching extends to a full permutation, so this is the maximum
    n = len(entries)
    return max(sum(entries[i][p[i]] == 0 for i in range(n)) for p in permutations(range(n)))


def exhaustive_min_cover(entries):
    n = len(entries)
    zeros = [(i, j) for i in range(n) for j in range(n) if entries[i][j] == 0]
    lines = [("r", i) for i in range(n)] + [("c", j) for j in range(n)]
    for k in range(2 * n + 1):
        for chosen in combinations(lines, k):
            rows = {x for t, x in chosen if t == "r"}
            cols = {x for t, x in chosen if t == "c"}
            if all(i in rows or j in cols for i, j in zeros):
                return k
    raise AssertionError("unreachable")


def has_present_perfect_matching(lm):
    n = lm.n
    return any(
        all(lm.scaled(i, p[i]) is not None for i in range(n)) for p in permutations(range(n))
    )
