"""GF(2) row elimination on bit-packed numpy rows."""
import numpy as np


def pack_rows(matrix: np.ndarray) -> np.ndarray:
    return np.packbits(np.asarray(matrix, dtype=bool).astype(np.uint8), axis=1)


def _leading_column(row: np.ndarray) -> int:
    nonzero = np.flatnonzero(row)
    if nonzero.size == 0:
        return -1
    byte = int(nonzero[0])
    return byte * 8 + 8 - int(row[byte]).bit_length()


def _bit(row: np.ndarray, column: int) -> bool:
    return bool(row[column >> 3] >> (7 - (column & 7)) & 1)


def greedy_row_basis(packed: np.ndarray) -> list[int]:
    """Indices of the rows, scanned top to bottom, that are independent of all rows kept before them.

    Kept rows are stored reduced against earlier pivots, so one pass of XORs in
    insertion order clears every pivot column of a candidate row.
    """
    basis: list[tuple[int, np.ndarray]] = []
    kept = []
    for index in range(packed.shape[0]):
        row = packed[index].copy()
        for pivot, vector in basis:
            if _bit(row, pivot):
                row ^= vector
        lead = _leading_column(row)
        if lead >= 0:
            basis.append((lead, row))
            kept.append(index)
    return kept


def gf2_rank(matrix: np.ndarray) -> int:
    matrix = np.asarray(matrix, dtype=bool)
    if matrix.size == 0:
        return 0
    return len(greedy_row_basis(pack_rows(matrix)))
