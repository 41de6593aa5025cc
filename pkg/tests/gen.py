"""Shared builders for the test suite: the worked 6x6 example, random
instance generators, and exact subspace utilities used by oracle-style
checks."""

from __future__ import annotations

import random
from fractions import Fraction

from rank1dm import GF, QQ, Matrix, PartitionedMatrix, Vector
from rank1dm.decompose import StableSubspace
from rank1dm.linalg import kernel_basis, rref

EXAMPLE_ROWS = [
    [1, 0, 1, 1, 0, 0],
    [0, 0, 1, 1, 1, 1],
    [1, 1, 1, 1, 1, 0],
    [0, 0, 0, 0, 1, 0],
    [1, 0, 1, 1, 1, 0],
    [1, 0, 1, 1, 0, 0],
]


def worked_example() -> PartitionedMatrix:
    f = GF(2)
    return PartitionedMatrix(Matrix.from_rows(f, EXAMPLE_ROWS), (2, 2, 2), (2, 2, 2))


def random_rank1_instance(
    rng: random.Random,
    field,
    mu: int,
    nu: int,
    max_dim: int = 2,
    zero_prob: float = 0.3,
) -> PartitionedMatrix:
    """A random partitioned matrix whose blocks are zero or rank one."""
    row_dims = [rng.randint(1, max_dim) for _ in range(mu)]
    col_dims = [rng.randint(1, max_dim) for _ in range(nu)]
    blocks = []
    for na in row_dims:
        brow = []
        for mb in col_dims:
            if rng.random() < zero_prob:
                brow.append(Matrix.zeros(field, na, mb))
            else:
                u = _random_nonzero_vector(rng, field, na)
                v = _random_nonzero_vector(rng, field, mb)
                c = _random_nonzero_scalar(rng, field)
                data = [
                    field.mul(c, field.mul(u[i], v[j]))
                    for i in range(na)
                    for j in range(mb)
                ]
                brow.append(Matrix(field, na, mb, data))
        blocks.append(brow)
    return PartitionedMatrix.from_blocks(blocks)


def _random_nonzero_vector(rng, field, dim):
    while True:
        if field is QQ or getattr(field, "p", None) is None:
            vals = [Fraction(rng.randint(-3, 3)) for _ in range(dim)]
        else:
            vals = [rng.randrange(field.p) for _ in range(dim)]
        if any(v != field.zero_raw for v in vals):
            return vals


def _random_nonzero_scalar(rng, field):
    if field is QQ or getattr(field, "p", None) is None:
        return Fraction(rng.randint(1, 9))
    return rng.randrange(1, field.p)


def random_unit_pattern_instance(rng: random.Random, n: int, m: int, density=0.4) -> PartitionedMatrix:
    """Random 0/1 matrix over GF(2), all blocks 1x1."""
    f = GF(2)
    data = [1 if rng.random() < density else 0 for _ in range(n * m)]
    return PartitionedMatrix(Matrix(f, n, m, data), (1,) * n, (1,) * m)


def random_nonsingular(rng: random.Random, field, n: int) -> Matrix:
    while True:
        if field is QQ:
            data = [Fraction(rng.randint(-3, 3)) for _ in range(n * n)]
        else:
            data = [rng.randrange(field.p) for _ in range(n * n)]
        m = Matrix(field, n, n, data)
        if rref(m).rank == n:
            return m


def permutation_matrix(field, perm: list[int]) -> Matrix:
    n = len(perm)
    m = Matrix.zeros(field, n, n)
    for i, j in enumerate(perm):
        m.data[i * n + j] = field.one_raw
    return m


def _block_respecting_perm(rng, sizes):
    """Coordinate permutation shuffling within blocks and swapping whole
    blocks of equal size; the partition type is left unchanged."""
    groups: dict[int, list[int]] = {}
    for i, s in enumerate(sizes):
        groups.setdefault(s, []).append(i)
    dest_of = list(range(len(sizes)))
    for group in groups.values():
        targets = group[:]
        rng.shuffle(targets)
        for src, dst in zip(group, targets):
            dest_of[src] = dst
    offsets = [0]
    for s in sizes:
        offsets.append(offsets[-1] + s)
    perm = [0] * offsets[-1]
    for src, s in enumerate(sizes):
        inner = list(range(s))
        rng.shuffle(inner)
        for k in range(s):
            perm[offsets[src] + k] = offsets[dest_of[src]] + inner[k]
    return perm


def random_admissible_transform(rng: random.Random, a: PartitionedMatrix) -> PartitionedMatrix:
    """A random member of the transformation group: per-block nonsingular
    factors composed with block-respecting row and column permutations."""
    f = a.field
    big_e = _blockdiag(f, [random_nonsingular(rng, f, s) for s in a.row_blocks])
    big_f = _blockdiag(f, [random_nonsingular(rng, f, s) for s in a.col_blocks])
    p = permutation_matrix(f, _block_respecting_perm(rng, a.row_blocks))
    q = permutation_matrix(f, _block_respecting_perm(rng, a.col_blocks))
    transformed = p.transpose() @ big_e.transpose() @ a.matrix @ big_f @ q
    return PartitionedMatrix(transformed, a.row_blocks, a.col_blocks)


def _blockdiag(field, blocks):
    n = sum(b.rows for b in blocks)
    m = Matrix.zeros(field, n, n)
    off = 0
    for b in blocks:
        for i in range(b.rows):
            for j in range(b.cols):
                m.data[(off + i) * n + (off + j)] = b.raw(i, j)
        off += b.rows
    return m


# subspace utilities on raw row bases -------------------------------------


def echelon(field, rows, dim):
    """Canonical reduced-echelon basis of the row space (tuple of tuples)."""
    if not rows:
        return ()
    m = Matrix(field, len(rows), dim, [field.coerce_raw(x) for r in rows for x in r])
    r = rref(m)
    return tuple(tuple(r.R.row_raw(i)) for i in range(r.rank))


def subspace_sum(field, rows_a, rows_b, dim):
    return echelon(field, list(rows_a) + list(rows_b), dim)


def subspace_intersection(field, rows_a, rows_b, dim):
    """Intersection of two row spaces by solving a^T A = b^T B."""
    if not rows_a or not rows_b:
        return ()
    ka, kb = len(rows_a), len(rows_b)
    # columns: coefficients on A-rows then B-rows; rows: coordinates
    data = []
    for j in range(dim):
        row = [field.coerce_raw(rows_a[i][j]) for i in range(ka)]
        row += [field.neg(field.coerce_raw(rows_b[i][j])) for i in range(kb)]
        data.append(row)
    m = Matrix.from_rows(field, data)
    combos = kernel_basis(m)
    vectors = []
    for combo in combos:
        vec = [
            field.dot(combo.data[:ka], [field.coerce_raw(rows_a[i][j]) for i in range(ka)])
            for j in range(dim)
        ]
        vectors.append(vec)
    return echelon(field, vectors, dim)


def contains(field, rows, vec, dim):
    """Row-space membership."""
    base = echelon(field, rows, dim)
    grown = echelon(field, list(base) + [vec], dim)
    return len(grown) == len(base)


def subspace_pair_canonical(field, a: PartitionedMatrix, xs, ys):
    """Canonical form of a per-block subspace pair given by raw bases."""
    xb = tuple(tuple(Vector(field, row) for row in b) for b in xs)
    yb = tuple(tuple(Vector(field, row) for row in b) for b in ys)
    return StableSubspace(xb, yb).canonical(field, a.row_blocks, a.col_blocks)
