from __future__ import print_function, division

import sys
import itertools
from collections import deque

import numpy as np
from scipy.special import comb


## soft limits, beyond these the exact checks stop being desk scale
MAX_DIMENSION = 6
MAX_DEGREE = 32

verbose = True


class InvalidArgument(ValueError):
    pass


def binomial(n, k):
    if n < 0 or k < 0 or k > n:
        return 0
    return int(comb(n, k, exact=True))


def check_limits(n, k):
    if n < 0 or k < 0:
        raise InvalidArgument('n and k must be nonnegative, got n={} k={}'.format(n, k))
    if verbose and (n > MAX_DIMENSION or k > MAX_DEGREE):
        print('# warning: n={} k={} beyond soft limits (n <= {}, k <= {})'.format(
              n, k, MAX_DIMENSION, MAX_DEGREE), file=sys.stderr)


def sums(length, total):
    """ all nonnegative integer tuples of the given length summing to total """
    if length == 0:
        if total == 0:
            yield ()
        return
    if length == 1:
        yield (total,)
        return
    for value in range(total + 1):
        for rest in sums(length - 1, total - value):
            yield (value,) + rest


class SubSimplex:
    """
    A face of the n-simplex, stored as its sorted vertex labels.

    The empty face is only produced as the complement of the full simplex.
    """
    __slots__ = ('indices', 'n')

    def __init__(self, indices, n):
        indices = tuple(sorted(int(i) for i in indices))
        if len(set(indices)) != len(indices):
            raise InvalidArgument('repeated vertex in sub-simplex: ' + str(indices))
        if n < 0 or any(i < 0 or i > n for i in indices):
            raise InvalidArgument('sub-simplex {} not in a simplex of dimension {}'.format(indices, n))
        self.indices = indices
        self.n = n

    @property
    def dim(self):
        return len(self.indices) - 1

    def is_empty(self):
        return len(self.indices) == 0

    def is_full(self):
        return len(self.indices) == self.n + 1

    def __len__(self):
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def __getitem__(self, i):
        return self.indices[i]

    def __contains__(self, i):
        return i in self.indices

    def __eq__(self, other):
        return isinstance(other, SubSimplex) and self.n == other.n and self.indices == other.indices

    def __ne__(self, other):
        return not self == other

    def __lt__(self, other):
        return (self.dim, self.indices) < (other.dim, other.indices)

    def __hash__(self):
        return hash((self.n, self.indices))

    def __repr__(self):
        return 'SubSimplex({}, n={})'.format(list(self.indices), self.n)

    def issubset(self, other):
        return set(self.indices) <= set(other.indices)


def full_simplex(n):
    return SubSimplex(range(n + 1), n)


def vertex(i, n):
    return SubSimplex((i,), n)


def complement(f):
    """ the opposite sub-simplex f*; empty for the full simplex """
    rest = [i for i in range(f.n + 1) if i not in f.indices]
    return SubSimplex(rest, f.n)


def sub_simplices(n, ell):
    """ Delta_ell(T), lexicographic """
    return [SubSimplex(c, n) for c in itertools.combinations(range(n + 1), ell + 1)]


def all_sub_simplices(n):
    return [f for ell in range(n + 1) for f in sub_simplices(n, ell)]


def faces_of(f, ell):
    """ Delta_ell(f) """
    return [SubSimplex(c, f.n) for c in itertools.combinations(f.indices, ell + 1)]


class LatticeSet:
    """ a deduplicated set of lattice nodes of T^n_k kept in lexicographic order """
    def __init__(self, nodes, n, k):
        nodes = sorted(set(tuple(int(x) for x in a) for a in nodes))
        for a in nodes:
            if len(a) != n + 1 or sum(a) != k or min(a) < 0:
                raise InvalidArgument('node {} is not in T^{}_{}'.format(a, n, k))
        self.nodes = tuple(nodes)
        self._members = frozenset(nodes)
        self.n = n
        self.k = k

    def __len__(self):
        return len(self.nodes)

    def __iter__(self):
        return iter(self.nodes)

    def __contains__(self, a):
        return tuple(a) in self._members

    def __eq__(self, other):
        if isinstance(other, LatticeSet):
            return self.nodes == other.nodes
        return self.nodes == tuple(sorted(set(tuple(a) for a in other)))

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        return 'LatticeSet(n={}, k={}, {} nodes)'.format(self.n, self.k, len(self.nodes))

    def union(self, other):
        return LatticeSet(self.nodes + tuple(other), self.n, self.k)

    def difference(self, other):
        other = set(tuple(a) for a in other)
        return LatticeSet([a for a in self.nodes if a not in other], self.n, self.k)

    def intersection(self, other):
        other = set(tuple(a) for a in other)
        return LatticeSet([a for a in self.nodes if a in other], self.n, self.k)

    def isdisjoint(self, other):
        return self._members.isdisjoint(tuple(a) for a in other)


def enumerate_lattice(n, k):
    check_limits(n, k)
    return LatticeSet(sums(n + 1, k), n, k)


def node_array(n, k):
    """ nodes of T^n_k as rows of an integer array, canonical order """
    nodes = enumerate_lattice(n, k).nodes
    return np.array(nodes, dtype=np.int64).reshape(len(nodes), n + 1)


def _check_node(a, n=None, k=None):
    a = tuple(a)
    if any(x < 0 for x in a):
        raise InvalidArgument('negative entry in multi-index ' + str(a))
    if n is not None and len(a) != n + 1:
        raise InvalidArgument('multi-index {} has length {}, expected {}'.format(a, len(a), n + 1))
    if k is not None and sum(a) != k:
        raise InvalidArgument('multi-index {} has degree {}, expected {}'.format(a, sum(a), k))
    return a


def graph_distance(a, b):
    """ half the l1 distance, the shortest path length in the lattice graph """
    a = _check_node(a)
    b = _check_node(b)
    if len(a) != len(b):
        raise InvalidArgument('nodes of different dimension: {} {}'.format(a, b))
    if sum(a) != sum(b):
        raise InvalidArgument('nodes of different degree: {} {}'.format(a, b))
    return sum(abs(x - y) for x, y in zip(a, b)) // 2


def neighbors(a):
    a = tuple(a)
    for i in range(len(a)):
        if a[i] == 0:
            continue
        for j in range(len(a)):
            if j == i:
                continue
            b = list(a)
            b[i] -= 1
            b[j] += 1
            yield tuple(b)


def lattice_graph_distance(a, b):
    """ breadth first search on the adjacency graph, oracle for graph_distance """
    a = _check_node(a)
    b = _check_node(b)
    if len(a) != len(b) or sum(a) != sum(b):
        raise InvalidArgument('nodes from different lattices: {} {}'.format(a, b))
    seen = {a: 0}
    queue = deque([a])
    while queue:
        c = queue.popleft()
        if c == b:
            return seen[c]
        for d in neighbors(c):
            if d not in seen:
                seen[d] = seen[c] + 1
                queue.append(d)
    raise InvalidArgument('unreachable node')  # lattice graphs are connected


def split(a, f):
    """ (alpha_f, alpha_f*) """
    a = _check_node(a, n=f.n)
    fstar = complement(f)
    return tuple(a[i] for i in f.indices), tuple(a[i] for i in fstar.indices)


def extend(a_f, f, n=None):
    """ the extension E(alpha): alpha_i placed at f(i), zero elsewhere """
    if n is None:
        n = f.n
    a_f = tuple(int(x) for x in a_f)
    if f.is_empty():
        if len(a_f) != 0:
            raise InvalidArgument('cannot extend a nonempty index from the empty face')
        return (0,)*(n + 1)
    if len(a_f) != len(f.indices):
        raise InvalidArgument('index of length {} does not match face {}'.format(len(a_f), f))
    if n < f.n:
        raise InvalidArgument('face {} does not fit dimension {}'.format(f, n))
    e = [0]*(n + 1)
    for i, x in zip(f.indices, a_f):
        e[i] = x
    return tuple(e)


def dist_to_face(a, f):
    a = _check_node(a, n=f.n)
    return sum(a[i] for i in range(f.n + 1) if i not in f.indices)


def tube(f, r, n, k):
    """ D(f, r): nodes at distance at most r from f """
    if r < 0:
        raise InvalidArgument('tube radius must be nonnegative, got {}'.format(r))
    _check_face(f, n)
    fstar = complement(f).indices
    return LatticeSet([a for a in enumerate_lattice(n, k) if sum(a[i] for i in fstar) <= r], n, k)


def plane(f, s, n, k):
    """ L(f, s): nodes at distance exactly s from f """
    if s < 0 or s > k:
        raise InvalidArgument('plane offset must lie in [0, {}], got {}'.format(k, s))
    _check_face(f, n)
    fstar = complement(f).indices
    return LatticeSet([a for a in enumerate_lattice(n, k) if sum(a[i] for i in fstar) == s], n, k)


def _check_face(f, n):
    if f.n != n:
        raise InvalidArgument('face {} belongs to dimension {}, not {}'.format(f, f.n, n))


def lattice_on(f, k):
    """ T^ell_k(f), extended into T^n_k """
    return LatticeSet([extend(b, f) for b in sums(len(f), k)], f.n, k)


def interior_nodes(f, k):
    """ T^ell_{k,1}(f): nodes supported on f with every f entry >= 1 """
    return LatticeSet([extend(b, f) for b in sums(len(f), k) if min(b) >= 1], f.n, k)


def shift_interior(b, c=1):
    """ T^ell_{k-(ell+1)c} -> T^ell_{k,c}, alpha -> alpha + c """
    return tuple(x + c for x in b)


def unshift_interior(b, c=1):
    b = tuple(x - c for x in b)
    if min(b) < 0:
        raise InvalidArgument('node is not in the shifted interior lattice')
    return b


def support(a):
    a = tuple(a)
    return SubSimplex([i for i in range(len(a)) if a[i] > 0], len(a) - 1)
