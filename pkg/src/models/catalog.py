"""
Reference functions with known classifications
"""
import numpy as np

from src.models.function_table import FunctionTable, normalize_values


def _table(sizes, values, name) -> FunctionTable:
    return normalize_values(FunctionTable(alphabet_sizes=tuple(sizes), values=tuple(values), name=name))


def table1() -> FunctionTable:
    """3x3 function meeting the HK conditions that is not a pseudo identity"""
    return _table([3, 3], [0, 3, 3, 0, 4, 2, 1, 1, 2], "table1")


def table2() -> FunctionTable:
    """3x3 function whose rows 1 and 2 coincide"""
    return _table([3, 3], [0, 1, 2, 3, 4, 2, 3, 4, 2], "table2")


def table4() -> FunctionTable:
    """Four binary terminals, certified with the partition {1,2}/{3,4}"""
    rows = [
        [0, 0, 4, 0],
        [1, 6, 4, 2],
        [1, 6, 4, 5],
        [1, 3, 3, 3],
    ]
    return _table([2, 2, 2, 2], [v for row in rows for v in row], "table4")


def mod2sum() -> FunctionTable:
    return _table([2, 2], [0, 1, 1, 0], "mod2sum")


def example8_family(num_terminals: int) -> FunctionTable:
    """
    f_[L] on L binary terminals: f_[1](x) = x, f_[l](x, 0) = f_[l-1](x), f_[l](x, 1) = l

    For L = 3 the raw values are [0, 3, 2, 3, 1, 3, 2, 3].
    """
    if num_terminals < 1:
        raise ValueError("the family starts at one terminal")
    values = np.array([0, 1], dtype=np.int64)
    for ell in range(2, num_terminals + 1):
        values = np.stack([values, np.full_like(values, ell)], axis=-1)
    return _table([2] * num_terminals, values.reshape(-1).tolist(), f"example8_L{num_terminals}")


def identity(alphabet_sizes) -> FunctionTable:
    size = int(np.prod(alphabet_sizes))
    return _table(alphabet_sizes, list(range(size)), "identity")
